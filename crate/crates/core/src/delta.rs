//! The divisor-concentration function
//!
//!   Δ(n, u) = #{d | n : e^u < d ≤ e^{u+1}},   Δ(n) = max over real u.
//!
//! Two independent evaluators are provided and cross-checked elsewhere:
//!
//! * [`delta_from_divisors`] — window scan. The maximum over real u is
//!   attained as u approaches log d from below for some divisor d, so it
//!   equals the best count over the half-open windows [d, e·d) anchored at
//!   each divisor. Since e·d is irrational for every integer d ≥ 1 there
//!   are no boundary ties and the half-open window is exact.
//! * [`delta_grid_max_from_divisors`] — evaluates Δ(n, u) on the finite
//!   grid u ∈ {log d − ε : d | n} and takes the maximum.
//!
//! Window comparisons run in f64 with a guard: whenever d_j is within
//! 10⁻⁶·d_i of e·d_i the comparison is redone in exact rational arithmetic
//! against a 30-digit (and, if ever needed, 60-digit) value of e.

use crate::error::{Error, Result};
use crate::factor;
use num_bigint::BigUint;

const EPS_GRID: f64 = 1e-9;
const GUARD_REL: f64 = 1e-6;

// e to 30 and 60 significant digits as exact rationals. The irrationality
// measure of e is 2, so 60 digits decide d_j vs e·d_i for any 64-bit pair.
const E30_NUM: &str = "271828182845904523536028747135";
const E30_DEN: &str = "100000000000000000000000000000";
const E60_NUM: &str = "271828182845904523536028747135266249775724709369995957496697";
const E60_DEN: &str = "100000000000000000000000000000000000000000000000000000000000";

fn big(s: &str) -> BigUint {
    BigUint::parse_bytes(s.as_bytes(), 10).unwrap()
}

/// Is d_j < e·d_i, decided exactly.
fn below_e_times(dj: u64, di: u64) -> bool {
    let prod = std::f64::consts::E * di as f64;
    let diff = dj as f64 - prod;
    if diff.abs() >= GUARD_REL * di as f64 {
        return diff < 0.0;
    }
    // Near-tie: compare d_j/d_i against truncations of e. A 30-digit
    // truncation decides unless the ratio lands in its one-ulp gap; the
    // 60-digit stage is unreachable for 64-bit inputs but kept as belt.
    let dj_b = BigUint::from(dj);
    let di_b = BigUint::from(di);
    let lhs = &dj_b * big(E30_DEN);
    let lo = big(E30_NUM) * &di_b;
    if lhs <= lo {
        return true;
    }
    let hi = (big(E30_NUM) + 1u32) * &di_b;
    if lhs >= hi {
        return false;
    }
    (&dj_b * big(E60_DEN)) < (big(E60_NUM) * di_b)
}

/// Δ(n) by window scan over a sorted divisor list.
pub fn delta_from_divisors(divisors: &[u64]) -> u64 {
    debug_assert!(divisors.windows(2).all(|w| w[0] < w[1]));
    let mut best = 0u64;
    let mut j = 0usize;
    for i in 0..divisors.len() {
        if j < i {
            j = i;
        }
        while j < divisors.len() && below_e_times(divisors[j], divisors[i]) {
            j += 1;
        }
        best = best.max((j - i) as u64);
    }
    best
}

/// Δ(n, u) from a sorted divisor list: divisors in (e^u, e^{u+1}].
pub fn delta_at_from_divisors(divisors: &[u64], u: f64) -> u64 {
    divisors
        .iter()
        .filter(|&&d| {
            let ln = (d as f64).ln();
            ln > u && ln <= u + 1.0
        })
        .count() as u64
}

/// Δ(n) by maximizing Δ(n, u) over the grid u = log d − ε.
pub fn delta_grid_max_from_divisors(divisors: &[u64]) -> u64 {
    let lns: Vec<f64> = divisors.iter().map(|&d| (d as f64).ln()).collect();
    let mut best = 0u64;
    for &ln_d in &lns {
        let u = ln_d - EPS_GRID;
        let start = lns.partition_point(|&v| v <= u);
        let stop = lns.partition_point(|&v| v <= u + 1.0);
        best = best.max((stop - start) as u64);
    }
    best
}

/// Δ(n).
pub fn delta(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("delta undefined at 0".into()));
    }
    Ok(delta_from_divisors(&factor::DivisorList::of(n)?.divisors))
}

/// Δ(n, u) for a specific window position.
pub fn delta_at(n: u64, u: f64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("delta undefined at 0".into()));
    }
    Ok(delta_at_from_divisors(
        &factor::DivisorList::of(n)?.divisors,
        u,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::{factorize_u64, tau, DivisorList};

    #[test]
    fn delta_values() {
        assert_eq!(delta(1).unwrap(), 1);
        assert_eq!(delta(2).unwrap(), 2);
        assert_eq!(delta(12).unwrap(), 3);
        assert_eq!(delta(8).unwrap(), 2);
        assert_eq!(delta(0).unwrap_err().to_string(), "domain error: delta undefined at 0");
    }

    #[test]
    fn delta_windowed_values() {
        assert_eq!(delta_at(12, 0.0).unwrap(), 1); // divisors in (1, e] = {2}
        assert_eq!(delta_at(12, (2f64).ln() - 1e-9).unwrap(), 3); // {2,3,4}
    }

    #[test]
    fn delta_at_vanishes_past_log_n() {
        for n in [1u64, 2, 12, 720, 100_000] {
            let u = (n as f64).ln();
            assert_eq!(delta_at(n, u).unwrap(), 0);
            assert_eq!(delta_at(n, u + 3.0).unwrap(), 0);
        }
    }

    #[test]
    fn delta_bounds() {
        for n in 1u64..=2000 {
            let d = delta(n).unwrap();
            assert!(d >= 1);
            assert!(d <= tau(&factorize_u64(n).unwrap()));
        }
    }

    #[test]
    fn window_and_grid_agree_small() {
        for n in 1u64..=5000 {
            let divs = DivisorList::of(n).unwrap().divisors;
            assert_eq!(
                delta_from_divisors(&divs),
                delta_grid_max_from_divisors(&divs),
                "n = {n}"
            );
        }
    }

    #[test]
    fn exact_guard_agrees_with_wide_window() {
        // exercise the exact comparator directly around e·d
        for di in [1u64, 10, 1_000_003, 123_456_789] {
            let prod = std::f64::consts::E * di as f64;
            for dj in [prod as u64, prod as u64 + 1, prod as u64 - 1] {
                let exact = (dj as f64) < prod; // far from tie, both agree
                assert_eq!(below_e_times(dj, di), exact || dj as f64 == prod);
            }
        }
        assert!(below_e_times(2, 1));
        assert!(!below_e_times(3, 1));
        assert!(below_e_times(27, 10));
        assert!(!below_e_times(28, 10));
    }
}
