//! Mean values of the divisor-concentration function and the counts that
//! sit next to them: S(x) = Σ_{n≤x} Δ(n), 𝔖(x) = (1/log x) Σ_{n≤x} Δ(n)/n,
//! sums of Δ(|p+a|) over primes in an interval, and the number of pairs
//! (m, n) ≤ x with mn ≡ a (mod q).
//!
//! S is an exact integer. 𝔖 is accumulated in f64 with compensated (Kahan)
//! summation; segments are combined in a fixed order so the result is
//! bit-identical across thread counts.

use crate::budget::Budget;
use crate::delta;
use crate::error::{Error, Result};
use crate::factor;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

/// Compensated f64 accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    pub fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }

    /// Residual compensation term, folded in when partials are combined.
    pub fn compensation(&self) -> f64 {
        self.c
    }
}

/// Which Δ evaluator drives a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaAlgorithm {
    /// Two-pointer window scan over sorted divisors.
    WindowScan,
    /// Maximum of Δ(n, u) over the grid u = log d − ε.
    GridMax,
}

impl DeltaAlgorithm {
    fn apply(self, divisors: &[u64]) -> u64 {
        match self {
            DeltaAlgorithm::WindowScan => delta::delta_from_divisors(divisors),
            DeltaAlgorithm::GridMax => delta::delta_grid_max_from_divisors(divisors),
        }
    }
}

/// One checkpoint row of a mean-value scan.
#[derive(Debug, Clone, Serialize)]
pub struct MeanSums {
    pub x: u64,
    pub s: u64,
    pub frak_s: f64,
}

impl MeanSums {
    /// 𝔖(x)/(log log x)^{5/2} — the growth-rate normalization. Monitored
    /// and reported only; no threshold is attached anywhere.
    pub fn normalized_by_loglog(&self) -> f64 {
        self.frak_s / (self.x as f64).ln().ln().powf(2.5)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct SegmentPartial {
    s: u64,
    t_sum: f64,
    t_comp: f64,
}

/// Per-segment partial sums for [lo, hi], computed independently.
pub(crate) fn segment_partial(lo: u64, hi: u64, base: &[u32], algo: DeltaAlgorithm) -> SegmentPartial {
    let mut s = 0u64;
    let mut t = Kahan::default();
    let mut divisors = Vec::new();
    factor::for_each_factorization(lo, hi, base, |n, fac| {
        factor::divisors_into(fac, &mut divisors);
        let d = algo.apply(&divisors);
        s += d;
        t.add(d as f64 / n as f64);
    });
    SegmentPartial {
        s,
        t_sum: t.value(),
        t_comp: t.compensation(),
    }
}

fn segment_ranges(x: u64, segment_size: u64) -> Vec<(u64, u64)> {
    let mut ranges = Vec::new();
    let mut lo = 1u64;
    while lo <= x {
        let hi = (lo + segment_size - 1).min(x);
        ranges.push((lo, hi));
        lo = hi + 1;
    }
    ranges
}

/// S(x) and 𝔖(x), with rows emitted at each requested checkpoint.
///
/// Checkpoints must be ≥ 2 (𝔖 divides by log x). One pass serves every
/// checkpoint: segments are cut at checkpoint boundaries, scanned in
/// parallel, and folded in ascending order.
pub fn delta_mean_sums_checkpointed(
    checkpoints: &[u64],
    algo: DeltaAlgorithm,
    budget: &Budget,
) -> Result<Vec<MeanSums>> {
    if checkpoints.is_empty() {
        return Err(Error::Precondition("no checkpoints given".into()));
    }
    let mut xs: Vec<u64> = checkpoints.to_vec();
    xs.sort_unstable();
    xs.dedup();
    if xs[0] < 2 {
        return Err(Error::Precondition("mean-value sums need x >= 2".into()));
    }
    let x_max = *xs.last().unwrap();
    budget.check_x("delta mean sums", x_max)?;

    // Segment boundaries: budget-sized pieces, additionally cut at every
    // checkpoint so a row can be emitted at the exact boundary.
    let mut cuts: Vec<(u64, u64)> = Vec::new();
    let mut prev = 0u64;
    for &x in &xs {
        for (lo, hi) in segment_ranges(x - prev, budget.segment_size) {
            cuts.push((prev + lo, prev + hi));
        }
        prev = x;
    }

    let base = factor::primes_up_to(factor::isqrt(x_max));
    let partials: Vec<SegmentPartial> = cuts
        .par_iter()
        .map(|&(lo, hi)| segment_partial(lo, hi, &base, algo))
        .collect();

    let mut rows = Vec::with_capacity(xs.len());
    let mut s_total = 0u64;
    let mut t_total = Kahan::default();
    let mut next_cp = 0usize;
    for (i, part) in partials.iter().enumerate() {
        s_total += part.s;
        t_total.add(part.t_sum);
        t_total.add(part.t_comp);
        let seg_end = cuts[i].1;
        while next_cp < xs.len() && xs[next_cp] == seg_end {
            let x = xs[next_cp];
            rows.push(MeanSums {
                x,
                s: s_total,
                frak_s: t_total.value() / (x as f64).ln(),
            });
            next_cp += 1;
        }
    }
    debug_assert_eq!(next_cp, xs.len());
    Ok(rows)
}

/// S(x) and 𝔖(x) at a single x.
pub fn delta_mean_sums(x: u64, algo: DeltaAlgorithm, budget: &Budget) -> Result<(u64, f64)> {
    let rows = delta_mean_sums_checkpointed(&[x], algo, budget)?;
    let row = &rows[0];
    Ok((row.s, row.frak_s))
}

/// Σ Δ(|p + a|) over primes p in (x, x + y].
pub fn shifted_prime_delta_sum(x: u64, y: u64, a: i64, budget: &Budget) -> Result<u64> {
    if x < 2 || y < 1 {
        return Err(Error::Precondition(
            "shifted prime sum needs x >= 2, y >= 1".into(),
        ));
    }
    if a == 0 {
        return Err(Error::Precondition("shift a must be nonzero".into()));
    }
    let hi = x
        .checked_add(y)
        .ok_or_else(|| Error::Overflow("interval end x + y".into()))?;
    budget.check_x("shifted prime delta sum", hi)?;
    let mut total = 0u64;
    for p in factor::primes_in_range(x, hi) {
        let shifted = p as i128 + a as i128;
        if shifted == 0 {
            return Err(Error::Domain(format!("p + a = 0 at prime p = {p}")));
        }
        total += delta::delta(shifted.unsigned_abs() as u64)?;
    }
    Ok(total)
}

/// |{(m, n) : m, n ≤ x, mn ≡ a (mod q)}| for gcd(a, q) = 1, counted by
/// grouping n into residue classes and counting admissible m per class.
pub fn congruence_pair_count(x: u64, q: u64, a: u64, budget: &Budget) -> Result<u64> {
    if x < 1 || q < 1 || a < 1 || a > q {
        return Err(Error::Precondition(
            "need x >= 1, q >= 1, 1 <= a <= q".into(),
        ));
    }
    if a.gcd(&q) != 1 {
        return Err(Error::Precondition(format!(
            "gcd(a, q) = {} > 1",
            a.gcd(&q)
        )));
    }
    budget.check_points("congruence pair count", q as u128)?;
    if q == 1 {
        return x
            .checked_mul(x)
            .ok_or_else(|| Error::Overflow("x^2".into()));
    }
    // count of m <= x with m ≡ r (mod q), 1 <= r <= q
    let class_count = |r: u64| -> u64 {
        if r > x {
            0
        } else {
            (x - r) / q + 1
        }
    };
    let mut total: u128 = 0;
    for n0 in 1..=q {
        if n0.gcd(&q) != 1 {
            continue;
        }
        let inv = mod_inverse(n0, q).expect("unit class has an inverse");
        let m0 = {
            let r = mul_mod(a % q, inv, q);
            if r == 0 {
                q
            } else {
                r
            }
        };
        total += class_count(n0) as u128 * class_count(m0) as u128;
    }
    u64::try_from(total).map_err(|_| Error::Overflow("pair count".into()))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let quot = r / new_r;
        (t, new_t) = (new_t, t - quot * new_t);
        (r, new_r) = (new_r, r - quot * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(((t % m as i128 + m as i128) % m as i128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_of_ten_is_fifteen() {
        let b = Budget::small();
        let (s, _) = delta_mean_sums(10, DeltaAlgorithm::WindowScan, &b).unwrap();
        assert_eq!(s, 15);
    }

    #[test]
    fn tiny_mean_sums() {
        let b = Budget::small();
        let (s, frak) = delta_mean_sums(2, DeltaAlgorithm::WindowScan, &b).unwrap();
        assert_eq!(s, 3);
        let expected = 2.0 / (2f64).ln();
        assert!((frak - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn normalized_ratio_is_finite_and_positive() {
        let b = Budget::small();
        let rows =
            delta_mean_sums_checkpointed(&[100, 10_000], DeltaAlgorithm::WindowScan, &b).unwrap();
        for row in rows {
            let r = row.normalized_by_loglog();
            assert!(r.is_finite() && r > 0.0);
        }
    }

    #[test]
    fn checkpoint_rows_match_single_calls() {
        let b = Budget::small();
        let rows =
            delta_mean_sums_checkpointed(&[10, 100, 1000], DeltaAlgorithm::WindowScan, &b).unwrap();
        for row in rows {
            let (s, frak) = delta_mean_sums(row.x, DeltaAlgorithm::WindowScan, &b).unwrap();
            assert_eq!(row.s, s);
            assert!((row.frak_s - frak).abs() <= 1e-12 * frak.abs());
        }
    }

    #[test]
    fn segment_order_permutation_is_stable() {
        // integer sum bit-identical, real sum within 1e-12 relative
        let x = 50_000u64;
        let base = factor::primes_up_to(factor::isqrt(x));
        let ranges = segment_ranges(x, 7_919);
        let parts: Vec<SegmentPartial> = ranges
            .iter()
            .map(|&(lo, hi)| segment_partial(lo, hi, &base, DeltaAlgorithm::WindowScan))
            .collect();
        let fold = |order: &[usize]| {
            let mut s = 0u64;
            let mut t = Kahan::default();
            for &i in order {
                s += parts[i].s;
                t.add(parts[i].t_sum);
                t.add(parts[i].t_comp);
            }
            (s, t.value())
        };
        let fwd: Vec<usize> = (0..parts.len()).collect();
        let rev: Vec<usize> = (0..parts.len()).rev().collect();
        let (s1, t1) = fold(&fwd);
        let (s2, t2) = fold(&rev);
        assert_eq!(s1, s2);
        assert!((t1 - t2).abs() <= 1e-12 * t1.abs());
    }

    #[test]
    fn budget_error_carries_boundary() {
        let b = Budget::small();
        match delta_mean_sums(b.max_x + 1, DeltaAlgorithm::WindowScan, &b) {
            Err(Error::Budget { last_complete, .. }) => {
                assert_eq!(last_complete, Some(b.max_x));
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn shifted_prime_sums() {
        let b = Budget::small();
        assert_eq!(shifted_prime_delta_sum(10, 10, 1, &b).unwrap(), 10);
        assert_eq!(shifted_prime_delta_sum(10, 10, -1, &b).unwrap(), 9);
        assert_eq!(shifted_prime_delta_sum(2, 1, 5, &b).unwrap(), 2);
        let err = shifted_prime_delta_sum(2, 1, -3, &b).unwrap_err();
        assert!(err.to_string().contains("p = 3"));
    }

    #[test]
    fn pair_count_examples() {
        let b = Budget::small();
        assert_eq!(congruence_pair_count(4, 3, 1, &b).unwrap(), 5);
        assert_eq!(congruence_pair_count(7, 1, 1, &b).unwrap(), 49);
        assert_eq!(congruence_pair_count(3, 5, 2, &b).unwrap(), 2);
        assert!(congruence_pair_count(5, 6, 3, &b).is_err());
    }

    #[test]
    fn pair_count_matches_double_loop() {
        let b = Budget::small();
        for &(x, q, a) in &[(4u64, 3u64, 1u64), (10, 7, 3), (20, 11, 5), (12, 9, 2), (30, 13, 6)] {
            let mut naive = 0u64;
            for m in 1..=x {
                for n in 1..=x {
                    if (m * n) % q == a % q {
                        naive += 1;
                    }
                }
            }
            assert_eq!(congruence_pair_count(x, q, a, &b).unwrap(), naive);
        }
    }

    #[test]
    fn pair_count_below_shifted_delta_sum() {
        // the count is dominated by Σ_{0<=k<=x^2/q} Δ(kq + a) on every
        // tested instance
        let b = Budget::small();
        for &(x, q, a) in &[(4u64, 3u64, 1u64), (3, 5, 2), (10, 7, 3), (12, 9, 2), (20, 11, 5)] {
            let lhs = congruence_pair_count(x, q, a, &b).unwrap();
            let mut rhs = 0u64;
            let mut k = 0u64;
            while k <= x * x / q {
                rhs += delta::delta(k * q + a).unwrap();
                k += 1;
            }
            assert!(lhs <= rhs, "({x},{q},{a}): {lhs} > {rhs}");
        }
    }
}
