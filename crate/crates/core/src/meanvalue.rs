//! Multi-variable arithmetic functions with coprime-splitting growth
//! bounds, their lifts along a factor-exponent matrix, and the weighted
//! congruence-density sums they drive.
//!
//! A function F of k positive-integer arguments belongs to the class
//! (A, B, ε) when F(ab) ≤ min{A^Ω(℘a), B·(℘a)^ε}·F(b) for all componentwise
//! products with (℘a, ℘b) = 1. Membership is sampled, not proven. The lift
//! along a k×r exponent matrix γ is F̂(s) = F(s′) with
//! s′_j = ∏_h s_h^{γ_jh}; it lands in the class (A^g, B, g·ε).
//!
//! The weighted sum E_R(v) accumulates F̂(s)·ϱ#(s)/K(s)^t over all r-tuples
//! with ℘s ≤ v, in nondecreasing order of ℘s; the companion Euler product
//! multiplies (1 − ϱ_Q⁺(p)/p^t) over a prime range.

use crate::budget::Budget;
use crate::congruence::{rho_plus, rho_sharp, ModulusVector, RhoMethod};
use crate::delta;
use crate::error::{Error, Result};
use crate::factor;
use crate::poly::MultiPoly;
use crate::system::FactoredSystem;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

type EvalFn = Arc<dyn Fn(&[u64]) -> f64 + Send + Sync>;

/// A nonnegative arithmetic function of k positive-integer arguments with
/// declared class parameters.
#[derive(Clone)]
pub struct MultiArithmeticFunction {
    arity: usize,
    a: f64,
    b: f64,
    eps: f64,
    name: String,
    eval: EvalFn,
}

impl std::fmt::Debug for MultiArithmeticFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}(arity {})", self.name, self.arity)
    }
}

impl MultiArithmeticFunction {
    pub fn new(
        arity: usize,
        a: f64,
        b: f64,
        eps: f64,
        name: impl Into<String>,
        eval: impl Fn(&[u64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        assert!(arity >= 1 && a >= 1.0 && b >= 1.0 && eps > 0.0);
        MultiArithmeticFunction {
            arity,
            a,
            b,
            eps,
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    /// The divisor-concentration function Δ as a one-variable class member:
    /// Δ(ab) ≤ τ(a)Δ(b) for coprime a, b, with τ(a) ≤ 2^Ω(a) and
    /// τ(a) ≤ √(3a), so (A, B, ε) = (2, √3, 1/2).
    pub fn delta_function() -> Self {
        Self::new(1, 2.0, 3f64.sqrt(), 0.5, "delta", |args| {
            delta::delta(args[0]).expect("positive argument") as f64
        })
    }

    /// The constant function 1.
    pub fn one(arity: usize) -> Self {
        Self::new(arity, 1.0, 1.0, 0.5, "one", |_| 1.0)
    }

    /// The divisor-count function τ in one variable: τ(ab) = τ(a)τ(b) for
    /// coprime arguments, with the same class parameters as Δ.
    pub fn tau_function() -> Self {
        Self::new(1, 2.0, 3f64.sqrt(), 0.5, "tau", |args| {
            factor::tau(&factor::factorize_u64(args[0]).expect("positive argument")) as f64
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn class_params(&self) -> (f64, f64, f64) {
        (self.a, self.b, self.eps)
    }

    pub fn eval(&self, args: &[u64]) -> f64 {
        assert_eq!(args.len(), self.arity, "arity mismatch");
        debug_assert!(args.iter().all(|&v| v >= 1), "arguments must be positive");
        (self.eval)(args)
    }
}

/// One violation of the class inequality, with the witnessing pair.
#[derive(Debug, Clone, Serialize)]
pub struct ClassViolation {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub value: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassSampleReport {
    pub checked: usize,
    pub violations: Vec<ClassViolation>,
    pub pass: bool,
}

/// Sample coprime pairs (a, b) componentwise with (℘a, ℘b) = 1 and check
/// F(ab) ≤ min{A^Ω(℘a), B(℘a)^ε}·F(b). Violations are reported with the
/// witnessing pair.
pub fn class_membership_sample(
    f: &MultiArithmeticFunction,
    a_param: f64,
    b_param: f64,
    eps: f64,
    samples: usize,
    seed: u64,
) -> ClassSampleReport {
    let k = f.arity();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut checked = 0usize;
    while checked < samples {
        let a_vec: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=40u64)).collect();
        let b_vec: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=40u64)).collect();
        let pa: u64 = a_vec.iter().product();
        let pb: u64 = b_vec.iter().product();
        if pa.gcd(&pb) != 1 {
            continue;
        }
        checked += 1;
        let ab: Vec<u64> = a_vec.iter().zip(&b_vec).map(|(&x, &y)| x * y).collect();
        let omega = factor::big_omega(&factor::factorize_u64(pa).expect("positive"));
        let factor_bound = a_param
            .powi(omega as i32)
            .min(b_param * (pa as f64).powf(eps));
        let bound = factor_bound * f.eval(&b_vec);
        let value = f.eval(&ab);
        if value > bound {
            violations.push(ClassViolation {
                a: a_vec,
                b: b_vec,
                value,
                bound,
            });
        }
    }
    ClassSampleReport {
        checked,
        pass: violations.is_empty(),
        violations,
    }
}

/// A search-capped lower bound for the coprime growth maximum
/// max_b F(ab)/F(b); the true maximum ranges over unbounded b.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthBoundEstimate {
    pub value: f64,
    pub witness: Vec<u64>,
    pub search_cap: u64,
    /// Always a lower bound: the search is capped.
    pub lower_bound_only: bool,
}

/// Maximize F(ab)/F(b) over b with components ≤ cap, (℘a, ℘b) = 1 and
/// F(b) ≠ 0.
pub fn g_bounded(
    f: &MultiArithmeticFunction,
    a: &[u64],
    cap: u64,
    budget: &Budget,
) -> Result<GrowthBoundEstimate> {
    if cap < 1 {
        return Err(Error::Precondition("search cap must be >= 1".into()));
    }
    let k = f.arity();
    if a.len() != k {
        return Err(Error::Precondition("argument arity mismatch".into()));
    }
    if a.iter().any(|&v| v == 0) {
        return Err(Error::Precondition("arguments must be positive".into()));
    }
    let mut points: u128 = 1;
    for _ in 0..k {
        points = points
            .checked_mul(cap as u128)
            .ok_or_else(|| Error::Overflow("cap^k".into()))?;
    }
    budget.check_tuples("growth-bound search", points)?;
    let pa: u64 = a.iter().product();
    let mut best: Option<(f64, Vec<u64>)> = None;
    let mut b_vec = vec![1u64; k];
    loop {
        let pb: u64 = b_vec.iter().product();
        if pa.gcd(&pb) == 1 {
            let fb = f.eval(&b_vec);
            if fb != 0.0 {
                let ab: Vec<u64> = a.iter().zip(&b_vec).map(|(&x, &y)| x * y).collect();
                let ratio = f.eval(&ab) / fb;
                if best.as_ref().map_or(true, |(v, _)| ratio > *v) {
                    best = Some((ratio, b_vec.clone()));
                }
            }
        }
        let mut i = k;
        loop {
            if i == 0 {
                let (value, witness) = best.ok_or_else(|| {
                    Error::Domain("no admissible b below the search cap".into())
                })?;
                return Ok(GrowthBoundEstimate {
                    value,
                    witness,
                    search_cap: cap,
                    lower_bound_only: true,
                });
            }
            i -= 1;
            b_vec[i] += 1;
            if b_vec[i] <= cap {
                break;
            }
            b_vec[i] = 1;
        }
    }
}

/// F̂(s) = F(s′) along a k×r exponent matrix.
#[derive(Clone)]
pub struct LiftedFunction {
    base: MultiArithmeticFunction,
    gamma: Vec<Vec<u32>>,
}

impl LiftedFunction {
    pub fn lift(base: MultiArithmeticFunction, gamma: Vec<Vec<u32>>) -> Result<Self> {
        if gamma.len() != base.arity() {
            return Err(Error::Precondition(format!(
                "gamma has {} rows, function arity is {}",
                gamma.len(),
                base.arity()
            )));
        }
        let r = gamma.first().map_or(0, |row| row.len());
        if r == 0 || gamma.iter().any(|row| row.len() != r) {
            return Err(Error::Precondition("gamma rows must be nonempty and equal".into()));
        }
        Ok(LiftedFunction { base, gamma })
    }

    pub fn r(&self) -> usize {
        self.gamma[0].len()
    }

    pub fn base(&self) -> &MultiArithmeticFunction {
        &self.base
    }

    /// s′_j = ∏_h s_h^{γ_jh}.
    pub fn s_prime(&self, s: &[u64]) -> Result<Vec<u64>> {
        if s.len() != self.r() {
            return Err(Error::Precondition("tuple length mismatch".into()));
        }
        self.gamma
            .iter()
            .map(|row| {
                let mut acc: u128 = 1;
                for (&sh, &e) in s.iter().zip(row) {
                    let pw = factor::pow_u128(sh, e)
                        .ok_or_else(|| Error::Overflow("s_h^gamma".into()))?;
                    acc = acc
                        .checked_mul(pw)
                        .ok_or_else(|| Error::Overflow("s'".into()))?;
                }
                u64::try_from(acc).map_err(|_| Error::Overflow("s'".into()))
            })
            .collect()
    }

    /// s″ = ∏_j s′_j = ∏_h s_h^{γ_h}.
    pub fn s_double_prime(&self, s: &[u64]) -> Result<u64> {
        let mut acc: u128 = 1;
        for v in self.s_prime(s)? {
            acc = acc
                .checked_mul(v as u128)
                .ok_or_else(|| Error::Overflow("s''".into()))?;
        }
        u64::try_from(acc).map_err(|_| Error::Overflow("s''".into()))
    }

    pub fn eval(&self, s: &[u64]) -> Result<f64> {
        Ok(self.base.eval(&self.s_prime(s)?))
    }

    /// The lifted function as a plain class member with the inherited
    /// parameters (A^g, B, g·ε), g the total degree of the factored form.
    pub fn as_function(&self, g: u32) -> MultiArithmeticFunction {
        let (a, b, eps) = self.base.class_params();
        let lifted = self.clone();
        MultiArithmeticFunction::new(
            self.r(),
            a.powi(g as i32),
            b,
            g as f64 * eps,
            format!("{}^lift", self.base.name()),
            move |s| lifted.eval(s).expect("lift evaluation"),
        )
    }
}

// ---------------------------------------------------------------------------
// E_R and the Euler product
// ---------------------------------------------------------------------------

/// All r-tuples s with ℘s ≤ v, sorted by nondecreasing product (ties in
/// lexicographic order).
fn tuples_by_product(r: usize, v: u64, budget: &Budget) -> Result<Vec<(Vec<u64>, u64)>> {
    let mut out: Vec<(Vec<u64>, u64)> = Vec::new();
    let mut current = vec![1u64; r];
    fn recurse(
        current: &mut Vec<u64>,
        depth: usize,
        r: usize,
        remaining: u64,
        out: &mut Vec<(Vec<u64>, u64)>,
        cap: u64,
    ) -> Result<()> {
        if depth == r {
            let prod: u64 = current.iter().product();
            out.push((current.clone(), prod));
            if out.len() as u64 > cap {
                return Err(Error::budget(
                    "tuple enumeration",
                    out.len() as u128,
                    cap,
                ));
            }
            return Ok(());
        }
        let mut value = 1u64;
        while value <= remaining {
            current[depth] = value;
            recurse(current, depth + 1, r, remaining / value, out, cap)?;
            value += 1;
        }
        current[depth] = 1;
        Ok(())
    }
    recurse(&mut current, 0, r, v, &mut out, budget.max_tuples)?;
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

/// E_R(v) = Σ_{℘s ≤ v} F̂(s)·ϱ#(s)/K(s)^t, with exact rational weights and
/// plain f64 accumulation in nondecreasing order of ℘s (so partial sums
/// are monotone). Terms whose sharp count vanishes are skipped once the
/// zero is established.
pub fn e_sum(
    rs: &[MultiPoly],
    fhat: &LiftedFunction,
    v: u64,
    t: usize,
    budget: &Budget,
) -> Result<f64> {
    let rows = e_sum_checkpointed(rs, fhat, &[v], t, budget)?;
    Ok(rows[0].1)
}

/// E_R at several cutoffs in one enumeration; `vs` need not be sorted.
pub fn e_sum_checkpointed(
    rs: &[MultiPoly],
    fhat: &LiftedFunction,
    vs: &[u64],
    t: usize,
    budget: &Budget,
) -> Result<Vec<(u64, f64)>> {
    if vs.is_empty() {
        return Err(Error::Precondition("no cutoffs given".into()));
    }
    if vs.iter().any(|&v| v < 1) {
        return Err(Error::Precondition("cutoffs must be >= 1".into()));
    }
    let r = rs.len();
    if fhat.r() != r {
        return Err(Error::Precondition(format!(
            "lift has {} coordinates, family has {r}",
            fhat.r()
        )));
    }
    if rs.iter().any(|p| p.num_vars() != t) {
        return Err(Error::Precondition(format!(
            "family must live in {t} variables"
        )));
    }
    let v_max = *vs.iter().max().unwrap();
    let tuples = tuples_by_product(r, v_max, budget)?;
    let mut sorted_vs: Vec<u64> = vs.to_vec();
    sorted_vs.sort_unstable();
    sorted_vs.dedup();

    let mut out: Vec<(u64, f64)> = Vec::with_capacity(sorted_vs.len());
    let mut sum = 0.0f64;
    let mut next = 0usize;
    for (tuple, prod) in &tuples {
        while next < sorted_vs.len() && sorted_vs[next] < *prod {
            out.push((sorted_vs[next], sum));
            next += 1;
        }
        let s = ModulusVector::new(tuple.clone())?;
        let (sharp, k_period) = rho_sharp(rs, &s, budget).map_err(|e| match e {
            Error::Budget { needed, limit, .. } => Error::Budget {
                op: format!("e_sum term at s = {tuple:?}"),
                needed,
                limit,
                last_complete: None,
            },
            other => other,
        })?;
        if sharp.value == 0 {
            continue;
        }
        let mut weight_den: u128 = 1;
        for _ in 0..t {
            weight_den = weight_den
                .checked_mul(k_period as u128)
                .ok_or_else(|| Error::Overflow("K^t".into()))?;
        }
        let weight = sharp.value as f64 / weight_den as f64;
        sum += fhat.eval(tuple)? * weight;
    }
    while next < sorted_vs.len() {
        out.push((sorted_vs[next], sum));
        next += 1;
    }
    // restore the caller's order
    let lookup: std::collections::HashMap<u64, f64> = out.iter().copied().collect();
    Ok(vs.iter().map(|&v| (v, lookup[&v])).collect())
}

/// ∏ (1 − ϱ_Q⁺(p)/p^t) over primes lower < p ≤ z, accumulated in log
/// space. `lower` defaults to the total degree of Q. Errors if a factor is
/// not positive (impossible for primitive Q above its degree).
pub fn euler_product(
    q: &MultiPoly,
    t: usize,
    z: u64,
    lower: Option<u64>,
    budget: &Budget,
) -> Result<f64> {
    if q.num_vars() != t {
        return Err(Error::Precondition(format!(
            "polynomial has {} variables, expected {t}",
            q.num_vars()
        )));
    }
    let g = q
        .total_degree()
        .ok_or_else(|| Error::Precondition("zero polynomial".into()))? as u64;
    let lower = lower.unwrap_or(g);
    let mut log_sum = 0.0f64;
    for p in factor::primes_in_range(lower, z) {
        let roots = rho_plus(q, p, RhoMethod::BruteForce, budget)?.value;
        let mut den: u128 = 1;
        for _ in 0..t {
            den *= p as u128;
        }
        let factor = 1.0 - roots as f64 / den as f64;
        if factor <= 0.0 {
            return Err(Error::Domain(format!(
                "nonpositive factor at p = {p}: 1 - {roots}/{den}"
            )));
        }
        log_sum += factor.ln();
    }
    Ok(log_sum.exp())
}

// ---------------------------------------------------------------------------
// Box-sum comparison
// ---------------------------------------------------------------------------

/// Record of one empirical comparison between an exact box sum of
/// F(|Q_1(n)|, …, |Q_k(n)|) and its reference value
/// ℘box · E_R(Σ x_j) · ∏(1 − ϱ_Q⁺(p)/p^t). The ratio is monitored, never
/// asserted.
#[derive(Debug, Clone, Serialize)]
pub struct BoxCompareRecord {
    pub x: Vec<u64>,
    pub y: Option<Vec<u64>>,
    pub z: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub e_value: f64,
    pub euler_value: f64,
    /// Box points where some Q_j vanished; they are excluded from the sum
    /// and flag the instance (F is undefined at 0).
    pub zero_points: u64,
}

/// Exact left-hand side over the box (x_j, x_j + y_j] (or [1, x_j] when y
/// is None) against the product reference. The scalar cutoff of E_R
/// defaults to Σ x_j and can be overridden.
pub fn box_compare(
    sys: &FactoredSystem,
    f: &MultiArithmeticFunction,
    x: &[u64],
    y: Option<&[u64]>,
    z_bound: u64,
    e_cutoff: Option<u64>,
    budget: &Budget,
) -> Result<BoxCompareRecord> {
    let t = sys.vars();
    if x.len() != t {
        return Err(Error::Precondition(format!("x must have {t} coordinates")));
    }
    if let Some(y) = y {
        if y.len() != t {
            return Err(Error::Precondition(format!("y must have {t} coordinates")));
        }
        if y.iter().any(|&v| v == 0) {
            return Err(Error::Precondition("empty box (some y_j = 0)".into()));
        }
    } else if x.iter().any(|&v| v == 0) {
        return Err(Error::Precondition("empty box (some x_j = 0)".into()));
    }
    if f.arity() != sys.k() {
        return Err(Error::Precondition(format!(
            "function arity {} != family size {}",
            f.arity(),
            sys.k()
        )));
    }
    let sides: Vec<u64> = match y {
        Some(y) => y.to_vec(),
        None => x.to_vec(),
    };
    let volume: u128 = sides.iter().map(|&v| v as u128).product();
    budget.check_box("box sum", volume)?;
    let bases: Vec<u64> = match y {
        Some(_) => x.to_vec(),
        None => vec![0; t],
    };

    // parallel over the outer coordinate, partials folded in coordinate
    // order so the f64 sum is deterministic for any thread count
    use rayon::prelude::*;
    let partials: crate::error::Result<Vec<(f64, u64)>> = (0..sides[0])
        .into_par_iter()
        .map(|off0| {
            let mut lhs = 0.0f64;
            let mut zeros = 0u64;
            let mut args = vec![0u64; sys.k()];
            let mut point = vec![0i64; t];
            point[0] = (bases[0] + off0 + 1) as i64;
            let mut offsets = vec![0u64; t];
            'sub: loop {
                for j in 1..t {
                    point[j] = (bases[j] + offsets[j] + 1) as i64;
                }
                let mut vanished = false;
                for (slot, qj) in args.iter_mut().zip(sys.qs()) {
                    let value = qj.eval_i128(&point).map(|v| v.unsigned_abs()).unwrap_or_else(
                        || {
                            qj.eval_exact(&point)
                                .magnitude()
                                .try_into()
                                .expect("box values fit u128")
                        },
                    );
                    if value == 0 {
                        vanished = true;
                        break;
                    }
                    *slot = u64::try_from(value)
                        .map_err(|_| Error::Overflow("polynomial value in box".into()))?;
                }
                if vanished {
                    zeros += 1;
                } else {
                    lhs += f.eval(&args);
                }
                let mut j = t;
                loop {
                    if j <= 1 {
                        break 'sub;
                    }
                    j -= 1;
                    offsets[j] += 1;
                    if offsets[j] < sides[j] {
                        break;
                    }
                    offsets[j] = 0;
                }
            }
            Ok((lhs, zeros))
        })
        .collect();
    let mut lhs = 0.0f64;
    let mut zero_points = 0u64;
    for (partial_lhs, partial_zeros) in partials? {
        lhs += partial_lhs;
        zero_points += partial_zeros;
    }

    let fhat = LiftedFunction::lift(f.clone(), sys.gamma().to_vec())?;
    let cutoff = e_cutoff.unwrap_or_else(|| x.iter().sum());
    let e_value = e_sum(sys.rs(), &fhat, cutoff.max(1), t, budget)?;
    let q = sys.product();
    let euler_value = euler_product(&q, t, z_bound, None, budget)?;
    let rhs = volume as f64 * e_value * euler_value;
    Ok(BoxCompareRecord {
        x: x.to_vec(),
        y: y.map(|v| v.to_vec()),
        z: z_bound,
        lhs,
        rhs,
        ratio: if rhs > 0.0 { lhs / rhs } else { f64::NAN },
        e_value,
        euler_value,
        zero_points,
    })
}
