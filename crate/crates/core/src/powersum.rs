//! Representation counts for weighted sums of powers.
//!
//! A system (c, l) with t+1 positive coefficients and nondecreasing
//! exponents represents n when n = Σ c_j·m_j^{l_j} over positive m. The
//! module computes r(n), the moment counts
//!
//!   V_0 = #{n ≤ x : r(n) ≥ 1},  V_1 = Σ r(n),  V_2 = Σ r(n)^2,
//!
//! and the split V_2 = V_2^= + V_2^≠ by whether the two representations of
//! a pair share their leading coordinate m_0.
//!
//! V-counts use a meet-in-the-middle aggregation: tail tuples (all
//! coordinates past the first) are enumerated once into a value multiset;
//! heads c_0·m_0^{l_0} stream against it. V_1 and V_2^= reduce to prefix
//! sums over the tail multiset; V_0 and V_2 are aggregated in dense
//! value-range shards so no pair is ever enumerated. Shards are
//! independent and merged by integer sums, so parallel runs are
//! deterministic.

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::factor;
use crate::mean::{self, DeltaAlgorithm};
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

/// Coefficients c_0..c_t and nondecreasing exponents l_0..l_t.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSystem {
    c: Vec<u64>,
    l: Vec<u32>,
}

impl PowerSystem {
    pub fn new(c: Vec<u64>, l: Vec<u32>) -> Result<Self> {
        if c.is_empty() || c.len() != l.len() {
            return Err(Error::Precondition(
                "coefficient and exponent vectors must be nonempty and equal-length".into(),
            ));
        }
        if c.iter().any(|&v| v == 0) || l.iter().any(|&v| v == 0) {
            return Err(Error::Precondition(
                "coefficients and exponents must be >= 1".into(),
            ));
        }
        if l.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Precondition(
                "exponents must be nondecreasing".into(),
            ));
        }
        Ok(PowerSystem { c, l })
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.c
    }

    pub fn exponents(&self) -> &[u32] {
        &self.l
    }

    /// Number of tail coordinates (t in the (t+1)-tuple convention).
    pub fn tail_len(&self) -> usize {
        self.c.len() - 1
    }

    /// The system with the leading coordinate removed; None when there is
    /// no tail.
    pub fn tail(&self) -> Option<PowerSystem> {
        if self.c.len() == 1 {
            return None;
        }
        Some(PowerSystem {
            c: self.c[1..].to_vec(),
            l: self.l[1..].to_vec(),
        })
    }

    /// δ = Σ_{j ≥ 1} 1/l_j as an exact rational (0 for a headless system).
    pub fn delta_exponent(&self) -> Ratio<u64> {
        self.l[1..]
            .iter()
            .map(|&lj| Ratio::new(1u64, lj as u64))
            .sum()
    }

    /// Smallest representable value Σ c_j.
    pub fn min_value(&self) -> u64 {
        self.c.iter().sum()
    }

    /// Σ c_j·m_j^{l_j}, None on overflow.
    pub fn value_of(&self, m: &[u64]) -> Option<u64> {
        assert_eq!(m.len(), self.c.len());
        let mut acc: u128 = 0;
        for ((&cj, &lj), &mj) in self.c.iter().zip(&self.l).zip(m) {
            let pw = factor::pow_u128(mj, lj)?;
            acc = acc.checked_add(pw.checked_mul(cj as u128)?)?;
        }
        u64::try_from(acc).ok()
    }
}

/// Exact number of representations n = Σ c_j·m_j^{l_j} over positive
/// tuples, by depth-first enumeration with prefix pruning.
pub fn rep_count(n: u64, sys: &PowerSystem) -> u64 {
    fn recurse(sys: &PowerSystem, depth: usize, remaining: u64) -> u64 {
        let cj = sys.c[depth];
        let lj = sys.l[depth];
        let min_rest: u64 = sys.c[depth + 1..].iter().sum();
        if depth + 1 == sys.c.len() {
            // last coordinate: remaining must be exactly c_j·m^{l_j}
            if remaining % cj != 0 {
                return 0;
            }
            let target = remaining / cj;
            let root = factor::integer_root(target, lj);
            return u64::from(root >= 1 && factor::pow_u128(root, lj) == Some(target as u128));
        }
        let mut total = 0u64;
        let mut m = 1u64;
        loop {
            let used = match factor::pow_u128(m, lj).and_then(|p| p.checked_mul(cj as u128)) {
                Some(v) => v,
                None => break,
            };
            if used + min_rest as u128 > remaining as u128 {
                break;
            }
            total += recurse(sys, depth + 1, remaining - used as u64);
            m += 1;
        }
        total
    }
    recurse(sys, 0, n)
}

/// Exact V-moment values at one x.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VRecord {
    pub x: u64,
    pub v0: u64,
    pub v1: u64,
    pub v2: u128,
    pub v2_eq: u128,
    pub v2_neq: u128,
}

/// Tail value multiset: sorted distinct values with multiplicities and
/// prefix sums of count and count².
struct TailTable {
    values: Vec<u64>,
    prefix_cnt: Vec<u64>,
    prefix_cnt2: Vec<u128>,
    counts: Vec<u64>,
}

impl TailTable {
    fn build(sys: &PowerSystem, max_value: u64, budget: &Budget) -> Result<Self> {
        let mut counts: std::collections::BTreeMap<u64, u64> = std::collections::BTreeMap::new();
        match sys.tail() {
            None => {
                counts.insert(0, 1);
            }
            Some(tail) => {
                let mut enumerated: u128 = 0;
                enumerate_values(&tail, max_value, &mut |w| {
                    enumerated += 1;
                    *counts.entry(w).or_insert(0) += 1;
                });
                budget.check_tuples("tail enumeration", enumerated)?;
            }
        }
        let mut values = Vec::with_capacity(counts.len());
        let mut prefix_cnt = Vec::with_capacity(counts.len());
        let mut prefix_cnt2 = Vec::with_capacity(counts.len());
        let mut counts_vec = Vec::with_capacity(counts.len());
        let (mut acc1, mut acc2) = (0u64, 0u128);
        for (w, c) in counts {
            acc1 += c;
            acc2 += (c as u128) * (c as u128);
            values.push(w);
            prefix_cnt.push(acc1);
            prefix_cnt2.push(acc2);
            counts_vec.push(c);
        }
        Ok(TailTable {
            values,
            prefix_cnt,
            prefix_cnt2,
            counts: counts_vec,
        })
    }

    /// Number of tail tuples with value ≤ w.
    fn count_upto(&self, w: u64) -> u64 {
        let i = self.values.partition_point(|&v| v <= w);
        if i == 0 {
            0
        } else {
            self.prefix_cnt[i - 1]
        }
    }

    /// Σ multiplicity² over values ≤ w.
    fn count2_upto(&self, w: u64) -> u128 {
        let i = self.values.partition_point(|&v| v <= w);
        if i == 0 {
            0
        } else {
            self.prefix_cnt2[i - 1]
        }
    }
}

/// Enumerate every tuple value of `sys` up to `max_value` (with
/// multiplicity), calling `f` for each.
fn enumerate_values(sys: &PowerSystem, max_value: u64, f: &mut impl FnMut(u64)) {
    fn recurse(sys: &PowerSystem, depth: usize, acc: u64, max_value: u64, f: &mut impl FnMut(u64)) {
        if depth == sys.c.len() {
            f(acc);
            return;
        }
        let cj = sys.c[depth];
        let lj = sys.l[depth];
        let min_rest: u64 = sys.c[depth + 1..].iter().sum();
        let mut m = 1u64;
        loop {
            let used = match factor::pow_u128(m, lj).and_then(|p| p.checked_mul(cj as u128)) {
                Some(v) => v,
                None => break,
            };
            let total = acc as u128 + used + min_rest as u128;
            if total > max_value as u128 {
                break;
            }
            recurse(sys, depth + 1, acc + used as u64, max_value, f);
            m += 1;
        }
    }
    if sys.min_value() <= max_value {
        recurse(sys, 0, 0, max_value, f);
    }
}

/// V-moments by the sharded meet-in-the-middle aggregation.
pub fn v_counts(x: u64, sys: &PowerSystem, budget: &Budget) -> Result<VRecord> {
    budget.check_x("v-counts", x)?;
    let zero = VRecord {
        x,
        v0: 0,
        v1: 0,
        v2: 0,
        v2_eq: 0,
        v2_neq: 0,
    };
    if x < sys.min_value() {
        return Ok(zero);
    }
    let c0 = sys.c[0];
    let l0 = sys.l[0];
    let tail_min: u64 = sys.c[1..].iter().sum();
    let tail = TailTable::build(sys, x.saturating_sub(c0), budget)?;
    if tail.values.is_empty() {
        return Ok(zero);
    }
    let m0_max = factor::scaled_root(x - tail.values[0], c0, l0);
    if m0_max == 0 {
        return Ok(zero);
    }
    let heads: Vec<u64> = (1..=m0_max)
        .map(|m| (factor::pow_u128(m, l0).unwrap() * c0 as u128) as u64)
        .collect();
    let _ = tail_min;

    let mut v1 = 0u64;
    let mut v2_eq = 0u128;
    for &h in &heads {
        let room = x - h; // h <= x - min tail value <= x
        v1 += tail.count_upto(room);
        v2_eq += tail.count2_upto(room);
    }

    // dense shards over the reachable value range
    let value_lo = heads[0] + tail.values[0];
    let shard_width = budget.shard_width.max(1);
    let shards: Vec<(u64, u64)> = {
        let mut v = Vec::new();
        let mut lo = value_lo;
        while lo <= x {
            v.push((lo, (lo + shard_width - 1).min(x)));
            lo = lo + shard_width;
        }
        v
    };
    let (v0, v2) = shards
        .par_iter()
        .map(|&(lo, hi)| {
            let mut arr = vec![0u32; (hi - lo + 1) as usize];
            for &h in &heads {
                if h + tail.values[0] > hi {
                    break; // heads ascend; nothing more reaches this shard
                }
                let w_lo = lo.saturating_sub(h);
                let w_hi = hi - h;
                let start = tail.values.partition_point(|&v| v < w_lo);
                let stop = tail.values.partition_point(|&v| v <= w_hi);
                for i in start..stop {
                    arr[(h + tail.values[i] - lo) as usize] += tail.counts[i] as u32;
                }
            }
            let mut v0 = 0u64;
            let mut v2 = 0u128;
            for &c in &arr {
                if c > 0 {
                    v0 += 1;
                    v2 += (c as u128) * (c as u128);
                }
            }
            (v0, v2)
        })
        .reduce(|| (0u64, 0u128), |a, b| (a.0 + b.0, a.1 + b.1));

    Ok(VRecord {
        x,
        v0,
        v1,
        v2,
        v2_eq,
        v2_neq: v2 - v2_eq,
    })
}

/// V-moments by direct enumeration of every tuple into multiplicity
/// tables. Exponential in spirit; the oracle against which the sharded
/// path is validated.
pub fn v_counts_naive(x: u64, sys: &PowerSystem, budget: &Budget) -> Result<VRecord> {
    budget.check_x("naive v-counts", x)?;
    let mut by_value: HashMap<u64, u64> = HashMap::new();
    let mut by_value_and_head: HashMap<(u64, u64), u64> = HashMap::new();
    let c0 = sys.c[0];
    let l0 = sys.l[0];
    let mut enumerated: u128 = 0;
    let tail_min: u64 = sys.c[1..].iter().sum();
    let mut m0 = 1u64;
    loop {
        let head = match factor::pow_u128(m0, l0).and_then(|p| p.checked_mul(c0 as u128)) {
            Some(v) if v + tail_min as u128 <= x as u128 => v as u64,
            _ => break,
        };
        match sys.tail() {
            None => {
                enumerated += 1;
                *by_value.entry(head).or_insert(0) += 1;
                *by_value_and_head.entry((head, m0)).or_insert(0) += 1;
            }
            Some(tail) => {
                enumerate_values(&tail, x - head, &mut |w| {
                    enumerated += 1;
                    *by_value.entry(head + w).or_insert(0) += 1;
                    *by_value_and_head.entry((head + w, m0)).or_insert(0) += 1;
                });
            }
        }
        m0 += 1;
    }
    budget.check_tuples("naive v-count enumeration", enumerated)?;
    let v0 = by_value.len() as u64;
    let v1 = by_value.values().sum();
    let v2 = by_value.values().map(|&c| (c as u128) * (c as u128)).sum();
    let v2_eq = by_value_and_head
        .values()
        .map(|&c| (c as u128) * (c as u128))
        .sum();
    Ok(VRecord {
        x,
        v0,
        v1,
        v2,
        v2_eq,
        v2_neq: v2 - v2_eq,
    })
}

/// The two unconditional facts about a V-record: the Cauchy–Schwarz
/// inequality V_1² ≤ V_0·V_2 and the exact split V_2 = V_2^= + V_2^≠. A
/// violation is an implementation bug and surfaces as a hard error.
#[derive(Debug, Clone, Serialize)]
pub struct CsSplitSummary {
    pub cs_lhs: u128,
    pub cs_rhs: u128,
}

pub fn check_cs_and_split(rec: &VRecord) -> Result<CsSplitSummary> {
    let lhs = (rec.v1 as u128)
        .checked_mul(rec.v1 as u128)
        .ok_or_else(|| Error::Overflow("V1^2".into()))?;
    let rhs = rec
        .v2
        .checked_mul(rec.v0 as u128)
        .ok_or_else(|| Error::Overflow("V0*V2".into()))?;
    if lhs > rhs {
        return Err(Error::CheckFailed(format!(
            "Cauchy-Schwarz violated at x = {}: {lhs} > {rhs}",
            rec.x
        )));
    }
    if rec.v2 != rec.v2_eq + rec.v2_neq {
        return Err(Error::CheckFailed(format!(
            "V2 split broken at x = {}: {} != {} + {}",
            rec.x, rec.v2, rec.v2_eq, rec.v2_neq
        )));
    }
    Ok(CsSplitSummary {
        cs_lhs: lhs,
        cs_rhs: rhs,
    })
}

/// Outcome of the equal-head bound check
/// V_2^=(x; c, l) ≤ (x/c_0)^{1/l_0} · V_2(x; tail).
#[derive(Debug, Clone, Serialize)]
pub struct EqualHeadBoundReport {
    pub x: u64,
    pub v2_eq: u128,
    pub tail_v2: u128,
    pub root_floor: u64,
    pub pass: bool,
    /// Whether the comparison had to fall back to exact integer powers.
    pub near_tie_exact: bool,
}

/// Check V_2^= against the truncated system's V_2 scaled by the real root
/// (x/c_0)^{1/l_0}. The fast path compares against the integer floor of
/// the root with a one-unit guard band; only near-ties pay for the exact
/// power comparison c_0·(V_2^=)^{l_0} ≤ x·(V_2)^{l_0}.
pub fn check_equal_head_bound(x: u64, sys: &PowerSystem, budget: &Budget) -> Result<EqualHeadBoundReport> {
    let tail = sys
        .tail()
        .ok_or_else(|| Error::Precondition("system needs a tail (t >= 1)".into()))?;
    let full = v_counts(x, sys, budget)?;
    let trunc = v_counts(x, &tail, budget)?;
    let c0 = sys.c[0];
    let l0 = sys.l[0];
    let root_floor = factor::scaled_root(x, c0, l0);
    let mut near_tie_exact = false;
    let pass = if full.v2_eq <= root_floor as u128 * trunc.v2 {
        true
    } else if full.v2_eq > (root_floor as u128 + 1) * trunc.v2 {
        false
    } else {
        // exact: c0 · (V2_eq)^{l0} <= x · (V2)^{l0}
        near_tie_exact = true;
        use num_bigint::BigUint;
        let lhs = BigUint::from(c0) * BigUint::from(full.v2_eq).pow(l0);
        let rhs = BigUint::from(x) * BigUint::from(trunc.v2).pow(l0);
        lhs <= rhs
    };
    Ok(EqualHeadBoundReport {
        x,
        v2_eq: full.v2_eq,
        tail_v2: trunc.v2,
        root_floor,
        pass,
        near_tie_exact,
    })
}

// ---------------------------------------------------------------------------
// Admissibility and tuple constructions
// ---------------------------------------------------------------------------

/// Exact admissibility report for an exponent tuple.
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub l: Vec<u32>,
    /// Length of the trailing block of equal exponents, capped at t − 1.
    pub s: usize,
    pub l0_is_two: bool,
    pub l1_in_three_four: bool,
    pub tail_sum_is_half: bool,
    pub tail_sum: String,
    pub cond_i: bool,
    pub cond_ii: bool,
    pub cond_iii: bool,
    pub admissible: bool,
    pub reasons: Vec<String>,
}

/// Decide the exponent-tuple conditions exactly in rational arithmetic:
/// l_0 = 2, l_1 ∈ {3, 4}, Σ_{j≥1} 1/l_j = 1/2, plus
/// (i) 1 ≤ s ≤ 3, (ii) l_t ≥ 16 when s = 3, and
/// (iii) Σ_{j≥r} 1/l_j ≤ 1/l_{r−1} for 1 ≤ r ≤ t − s + 1.
pub fn admissible(l: &[u32]) -> Result<AdmissibilityReport> {
    let t = l.len().checked_sub(1).unwrap_or(0);
    if t < 2 {
        return Err(Error::Precondition("need t >= 2 (at least 3 exponents)".into()));
    }
    if l.iter().any(|&v| v == 0) {
        return Err(Error::Precondition("exponents must be >= 1".into()));
    }
    if l.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Precondition("exponents must be nondecreasing".into()));
    }
    let mut reasons = Vec::new();

    let l0_is_two = l[0] == 2;
    if !l0_is_two {
        reasons.push(format!("l0 = {} ≠ 2", l[0]));
    }
    let l1_in_three_four = l[1] == 3 || l[1] == 4;
    if !l1_in_three_four {
        reasons.push(format!("l1 = {} not in {{3, 4}}", l[1]));
    }

    let tail_sum: Ratio<u64> = l[1..].iter().map(|&v| Ratio::new(1u64, v as u64)).sum();
    let half = Ratio::new(1u64, 2u64);
    let tail_sum_is_half = tail_sum == half;
    if !tail_sum_is_half {
        reasons.push(format!("sum {} ≠ 1/2", tail_sum));
    }

    let last = l[t];
    let mut run = 0usize;
    for &v in l[1..].iter().rev() {
        if v == last {
            run += 1;
        } else {
            break;
        }
    }
    let s = run.min(t - 1);

    let cond_i = (1..=3).contains(&s);
    if !cond_i {
        reasons.push(format!("s = {s} outside [1, 3]"));
    }
    let cond_ii = s != 3 || last >= 16;
    if !cond_ii {
        reasons.push(format!("s = 3 but l_t = {last} < 16"));
    }
    let mut cond_iii = true;
    for r in 1..=(t - s + 1) {
        let suffix: Ratio<u64> = l[r..].iter().map(|&v| Ratio::new(1u64, v as u64)).sum();
        let bound = Ratio::new(1u64, l[r - 1] as u64);
        if suffix > bound {
            cond_iii = false;
            reasons.push(format!("condition (iii) fails at r = {r}: {suffix} > {bound}"));
        }
    }

    let admissible =
        l0_is_two && l1_in_three_four && tail_sum_is_half && cond_i && cond_ii && cond_iii;
    Ok(AdmissibilityReport {
        l: l.to_vec(),
        s,
        l0_is_two,
        l1_in_three_four,
        tail_sum_is_half,
        tail_sum: tail_sum.to_string(),
        cond_i,
        cond_ii,
        cond_iii,
        admissible,
        reasons,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtendMode {
    /// Replace l_t by two copies of 2·l_t. Requires s = 1.
    Plus,
    /// Replace l_t by three copies of 3·l_t. Requires l_t ≥ 6.
    Star,
}

/// Extend an exponent tuple; both modes preserve Σ_{j≥1} 1/l_j.
pub fn extend(l: &[u32], mode: ExtendMode) -> Result<Vec<u32>> {
    if l.len() < 3 {
        return Err(Error::Precondition("need t >= 2 (at least 3 exponents)".into()));
    }
    let last = *l.last().unwrap();
    match mode {
        ExtendMode::Plus => {
            let report = admissible(l)?;
            if report.s != 1 {
                return Err(Error::Precondition(format!(
                    "plus extension needs s = 1, got s = {}",
                    report.s
                )));
            }
            let mut out = l[..l.len() - 1].to_vec();
            out.push(2 * last);
            out.push(2 * last);
            Ok(out)
        }
        ExtendMode::Star => {
            if last < 6 {
                return Err(Error::Precondition(format!(
                    "star extension needs l_t >= 6, got {last}"
                )));
            }
            let mut out = l[..l.len() - 1].to_vec();
            out.push(3 * last);
            out.push(3 * last);
            out.push(3 * last);
            Ok(out)
        }
    }
}

/// Built-in catalog of admissible exponent tuples, by tail length.
pub fn admissible_catalog() -> Vec<Vec<u32>> {
    vec![
        vec![2, 3, 6],
        vec![2, 4, 4],
        vec![2, 3, 7, 42],
        vec![2, 3, 8, 24],
        vec![2, 3, 9, 18],
        vec![2, 3, 10, 15],
        vec![2, 3, 12, 12],
        vec![2, 4, 8, 8],
        vec![2, 3, 7, 84, 84],
        vec![2, 3, 8, 48, 48],
        vec![2, 3, 18, 18, 18],
        vec![2, 4, 8, 16, 16],
        vec![2, 3, 12, 24, 24],
        vec![2, 3, 12, 36, 36, 36],
        vec![2, 4, 8, 24, 24, 24],
        vec![2, 4, 8, 16, 32, 32],
    ]
}

// ---------------------------------------------------------------------------
// Growth table
// ---------------------------------------------------------------------------

/// One row of the growth experiment: exact counts, the mean value 𝔖(x),
/// and the three monitored ratios.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthRow {
    pub x: u64,
    pub v0: u64,
    pub v1: u64,
    pub v2: u128,
    pub v2_neq: u128,
    pub frak_s: f64,
    /// V_0·𝔖(x)/x.
    pub r1: f64,
    /// V_0·(log log x)^{5/2}/x.
    pub r2: f64,
    /// V_2^≠ / (x^{2δ}·𝔖(x)).
    pub r3: f64,
}

impl GrowthRow {
    pub const CSV_HEADER: &'static str = "x,V0,V1,V2,V2neq,frakS,r1,r2,r3";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.x, self.v0, self.v1, self.v2, self.v2_neq, self.frak_s, self.r1, self.r2, self.r3
        )
    }
}

/// V-counts and monitored growth ratios over an ascending grid. Asserts
/// only the unconditional facts: V_0 ≤ x and V_0 nondecreasing in x.
pub fn growth_table(sys: &PowerSystem, x_grid: &[u64], budget: &Budget) -> Result<Vec<GrowthRow>> {
    if x_grid.is_empty() {
        return Err(Error::Precondition("empty grid".into()));
    }
    let mut grid = x_grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    if grid[0] < 3 {
        return Err(Error::Precondition("growth grid needs x >= 3".into()));
    }
    let mean_rows = mean::delta_mean_sums_checkpointed(&grid, DeltaAlgorithm::WindowScan, budget)?;
    let two_delta = 2.0 * ratio_to_f64(sys.delta_exponent());
    let mut rows = Vec::with_capacity(grid.len());
    let mut prev_v0: Option<u64> = None;
    for mean_row in &mean_rows {
        let x = mean_row.x;
        let rec = v_counts(x, sys, budget)?;
        check_cs_and_split(&rec)?;
        if rec.v0 > x {
            return Err(Error::CheckFailed(format!(
                "V0 = {} exceeds x = {x}",
                rec.v0
            )));
        }
        if let Some(prev) = prev_v0 {
            if rec.v0 < prev {
                return Err(Error::CheckFailed(format!(
                    "V0 decreased from {prev} to {} at x = {x}",
                    rec.v0
                )));
            }
        }
        prev_v0 = Some(rec.v0);
        let frak_s = mean_row.frak_s;
        let loglog = (x as f64).ln().ln();
        rows.push(GrowthRow {
            x,
            v0: rec.v0,
            v1: rec.v1,
            v2: rec.v2,
            v2_neq: rec.v2_neq,
            frak_s,
            r1: rec.v0 as f64 * frak_s / x as f64,
            r2: rec.v0 as f64 * loglog.powf(2.5) / x as f64,
            r3: rec.v2_neq as f64 / ((x as f64).powf(two_delta) * frak_s),
        });
    }
    Ok(rows)
}

fn ratio_to_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(c: &[u64], l: &[u32]) -> PowerSystem {
        PowerSystem::new(c.to_vec(), l.to_vec()).unwrap()
    }

    #[test]
    fn rep_count_examples() {
        assert_eq!(rep_count(1, &sys(&[1, 1], &[2, 2])), 0);
        assert_eq!(rep_count(25, &sys(&[1, 1], &[2, 2])), 2); // (3,4), (4,3)
        assert_eq!(rep_count(3, &sys(&[1, 1, 1], &[2, 4, 4])), 1); // (1,1,1)
        assert_eq!(rep_count(2, &sys(&[1, 1], &[2, 2])), 1);
    }

    #[test]
    fn rep_count_invariant_under_equal_exponent_permutation() {
        // swapping coefficients of equal-exponent slots preserves r(n)
        let a = sys(&[1, 2, 3], &[2, 4, 4]);
        let b = sys(&[1, 3, 2], &[2, 4, 4]);
        for n in 1..=200u64 {
            assert_eq!(rep_count(n, &a), rep_count(n, &b), "n = {n}");
        }
    }

    #[test]
    fn v_counts_examples() {
        let b = Budget::small();
        let rec = v_counts(8, &sys(&[1, 1], &[2, 2]), &b).unwrap();
        assert_eq!(
            (rec.v0, rec.v1, rec.v2, rec.v2_eq, rec.v2_neq),
            (3, 4, 6, 4, 2)
        );
        let rec = v_counts(1, &sys(&[1, 1], &[2, 2]), &b).unwrap();
        assert_eq!((rec.v0, rec.v1, rec.v2), (0, 0, 0));
        let rec = v_counts(4, &sys(&[1, 1], &[2, 2]), &b).unwrap();
        assert_eq!((rec.v0, rec.v1, rec.v2, rec.v2_eq, rec.v2_neq), (1, 1, 1, 1, 0));
    }

    #[test]
    fn v_counts_match_naive_and_rep_oracle() {
        let b = Budget::small();
        for (c, l) in [
            (vec![1u64, 1], vec![2u32, 2]),
            (vec![1, 1, 1], vec![2, 4, 4]),
            (vec![1, 1, 1], vec![2, 3, 6]),
            (vec![2, 3], vec![2, 3]),
        ] {
            let system = PowerSystem::new(c, l).unwrap();
            for x in [10u64, 100, 961] {
                let fast = v_counts(x, &system, &b).unwrap();
                let naive = v_counts_naive(x, &system, &b).unwrap();
                assert_eq!(fast, naive, "{system:?} at {x}");
                // third route: per-n representation counts
                let mut v0 = 0u64;
                let mut v1 = 0u64;
                let mut v2 = 0u128;
                for n in 1..=x {
                    let r = rep_count(n, &system);
                    if r > 0 {
                        v0 += 1;
                        v1 += r;
                        v2 += (r as u128) * (r as u128);
                    }
                }
                assert_eq!((fast.v0, fast.v1, fast.v2), (v0, v1, v2));
            }
        }
    }

    #[test]
    fn v2_eq_at_least_v1() {
        // diagonal pairs (m, m) always share head and value
        let b = Budget::small();
        for (c, l) in [
            (vec![1u64, 1], vec![2u32, 2]),
            (vec![1, 1, 1], vec![2, 4, 4]),
            (vec![1, 2], vec![2, 3]),
        ] {
            let system = PowerSystem::new(c, l).unwrap();
            for x in [50u64, 500, 5000] {
                let rec = v_counts(x, &system, &b).unwrap();
                assert!(rec.v2_eq >= rec.v1 as u128, "{system:?} at {x}");
            }
        }
    }

    #[test]
    fn cs_and_split_examples() {
        let rec = VRecord {
            x: 8,
            v0: 3,
            v1: 4,
            v2: 6,
            v2_eq: 4,
            v2_neq: 2,
        };
        let sum = check_cs_and_split(&rec).unwrap();
        assert_eq!((sum.cs_lhs, sum.cs_rhs), (16, 18));
        let zero = VRecord {
            x: 1,
            v0: 0,
            v1: 0,
            v2: 0,
            v2_eq: 0,
            v2_neq: 0,
        };
        check_cs_and_split(&zero).unwrap();
        let tight = VRecord {
            x: 4,
            v0: 1,
            v1: 1,
            v2: 1,
            v2_eq: 1,
            v2_neq: 0,
        };
        check_cs_and_split(&tight).unwrap();
        let broken = VRecord {
            x: 2,
            v0: 1,
            v1: 5,
            v2: 2,
            v2_eq: 1,
            v2_neq: 1,
        };
        assert!(check_cs_and_split(&broken).is_err());
    }

    #[test]
    fn equal_head_bound_examples() {
        let b = Budget::small();
        let rep = check_equal_head_bound(8, &sys(&[1, 1], &[2, 2]), &b).unwrap();
        assert!(rep.pass);
        assert_eq!((rep.v2_eq, rep.root_floor, rep.tail_v2), (4, 2, 2));

        let rep = check_equal_head_bound(1, &sys(&[1, 1], &[2, 2]), &b).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.v2_eq, 0);

        let rep = check_equal_head_bound(100, &sys(&[1, 1, 1], &[2, 4, 4]), &b).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn admissibility_examples() {
        let rep = admissible(&[2, 4, 4]).unwrap();
        assert!(rep.admissible);
        assert_eq!(rep.s, 1);

        assert!(admissible(&[2, 3, 8, 24]).unwrap().admissible);

        let rep = admissible(&[2, 3, 6, 6]).unwrap();
        assert!(!rep.admissible);
        assert!(rep.reasons.iter().any(|r| r.contains("2/3 ≠ 1/2")), "{:?}", rep.reasons);

        let rep = admissible(&[2, 4, 12, 12, 12]).unwrap();
        assert!(!rep.admissible);
        assert_eq!(rep.s, 3);
        assert!(rep.reasons.iter().any(|r| r.contains("< 16")));

        assert!(admissible(&[2, 3]).is_err());
        assert!(admissible(&[2, 4, 3]).is_err());
    }

    #[test]
    fn catalog_is_admissible() {
        for l in admissible_catalog() {
            let rep = admissible(&l).unwrap();
            assert!(rep.admissible, "{l:?}: {:?}", rep.reasons);
        }
    }

    #[test]
    fn extension_examples() {
        assert_eq!(extend(&[2, 3, 6], ExtendMode::Plus).unwrap(), vec![2, 3, 12, 12]);
        assert_eq!(
            extend(&[2, 3, 6], ExtendMode::Star).unwrap(),
            vec![2, 3, 18, 18, 18]
        );
        assert!(extend(&[2, 4, 4], ExtendMode::Star).is_err());
        assert_eq!(extend(&[2, 4, 4], ExtendMode::Plus).unwrap(), vec![2, 4, 8, 8]);
    }

    #[test]
    fn extensions_stay_admissible() {
        // both constructions live in the single-trailing-exponent regime:
        // starting from s >= 2 the star result can break condition (iii)
        // (e.g. (2,3,18,18,18) -> (2,3,18,18,54,54,54) has 1/18 + 3/54 >
        // 1/18), so the panel is the s = 1 part of the catalog
        for l in admissible_catalog() {
            let rep = admissible(&l).unwrap();
            if rep.s != 1 {
                continue;
            }
            let plus = extend(&l, ExtendMode::Plus).unwrap();
            assert!(admissible(&plus).unwrap().admissible, "{l:?} -> {plus:?}");
            if *l.last().unwrap() >= 6 {
                let star = extend(&l, ExtendMode::Star).unwrap();
                assert!(admissible(&star).unwrap().admissible, "{l:?} -> {star:?}");
            }
        }
    }

    #[test]
    fn growth_rows_and_asserts() {
        let b = Budget::small();
        let system = sys(&[1, 1], &[2, 2]);
        let rows = growth_table(&system, &[8, 100, 1000], &b).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].v0, 3);
        assert!(rows[0].v0 <= 8);
        assert!(rows.windows(2).all(|w| w[0].v0 <= w[1].v0));
        for row in &rows {
            assert!(row.r1.is_finite() && row.r2.is_finite() && row.r3.is_finite());
        }
        let csv = rows[0].to_csv();
        assert!(csv.starts_with("8,3,4,6,2,"));
    }
}
