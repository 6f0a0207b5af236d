//! Exact counts of polynomial congruence solutions.
//!
//! * [`rho_plus`] — roots of one polynomial mod s over a full period,
//!   either by direct scan or per prime power combined by CRT.
//! * [`rho_vector_plus`] — joint roots of a family, each factor with its
//!   own modulus, scanned over the product period.
//! * [`rho_sharp`] — the restricted count with exact divisibility
//!   s_h ∥ R_h(ξ) and cofactors coprime to the modulus product, taken over
//!   the kernel period K(s) = lcm(s_h·κ(s_h)). Computed per prime power
//!   (every condition is a valuation pattern, so the count is
//!   multiplicative across primes); [`rho_sharp_scan`] is the literal
//!   full-period oracle.
//!
//! Exact divisibility a ∥ b means a | b and gcd(a, b/a) = 1; by that
//! reading a ∥ 0 holds only for a = 1.
//!
//! The remaining entry points are inequality and identity checkers for
//! these counts, plus the sifted box count that combines the sharp density
//! with small-prime sieving.

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::factor;
use crate::poly::MultiPoly;
use crate::powersum::PowerSystem;
use crate::system::FactoredSystem;
use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

/// How a count was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CountMethod {
    BruteForce,
    Crt,
    PrimePowerLift,
}

/// An exact congruence count together with the period it was taken over.
#[derive(Debug, Clone, Serialize)]
pub struct CongruenceCount {
    pub value: u64,
    pub modulus_box: u64,
    pub method: CountMethod,
}

/// Method selector for [`rho_plus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhoMethod {
    /// Factor the modulus, scan each prime power, combine by CRT.
    Auto,
    /// Single scan over the whole period.
    BruteForce,
}

/// A vector of moduli with its derived quantities: the product ℘s, the
/// plain lcm, and the kernel period K(s) = lcm(s_h·κ(s_h)).
#[derive(Debug, Clone)]
pub struct ModulusVector {
    entries: Vec<u64>,
    product: u64,
    plain_lcm: u64,
    kernel_period: u64,
}

impl ModulusVector {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Precondition("empty modulus vector".into()));
        }
        if entries.iter().any(|&s| s == 0) {
            return Err(Error::Precondition("moduli must be >= 1".into()));
        }
        let mut product = 1u64;
        let mut plain_lcm = 1u64;
        let mut kernel_period = 1u64;
        for &s in &entries {
            product = product
                .checked_mul(s)
                .ok_or_else(|| Error::Overflow("modulus product".into()))?;
            plain_lcm = lcm_checked(plain_lcm, s)?;
            let kernel = factor::squarefree_kernel(s)?;
            let sk = s
                .checked_mul(kernel)
                .ok_or_else(|| Error::Overflow("s * kappa(s)".into()))?;
            kernel_period = lcm_checked(kernel_period, sk)?;
        }
        Ok(ModulusVector {
            entries,
            product,
            plain_lcm,
            kernel_period,
        })
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// ℘s = s_1 ⋯ s_r.
    pub fn product(&self) -> u64 {
        self.product
    }

    /// lcm(s_1, …, s_r).
    pub fn plain_lcm(&self) -> u64 {
        self.plain_lcm
    }

    /// K(s) = lcm(s_h·κ(s_h)).
    pub fn kernel_period(&self) -> u64 {
        self.kernel_period
    }
}

fn lcm_checked(a: u64, b: u64) -> Result<u64> {
    let g = a.gcd(&b);
    (a / g)
        .checked_mul(b)
        .ok_or_else(|| Error::Overflow("lcm".into()))
}

// ---------------------------------------------------------------------------
// Point scans
// ---------------------------------------------------------------------------

/// A polynomial reduced mod m, with an optional power table for fast
/// evaluation over residue points.
struct ReducedPoly {
    m: u64,
    terms: Vec<(u64, Vec<u32>)>,
    pows: Option<Vec<u64>>,
    stride: usize,
}

const POW_TABLE_CAP: u64 = 1 << 22;

impl ReducedPoly {
    fn new(p: &MultiPoly, m: u64) -> Self {
        assert!(m >= 1);
        let mb = num_bigint::BigInt::from(m);
        let mut terms = Vec::new();
        let mut max_e = 0u32;
        for (exps, coeff) in p.terms() {
            let c = coeff.mod_floor(&mb).to_u64().expect("residue fits u64");
            if c == 0 {
                continue;
            }
            max_e = max_e.max(exps.iter().copied().max().unwrap_or(0));
            terms.push((c, exps.to_vec()));
        }
        let stride = max_e as usize + 1;
        let pows = if m.checked_mul(stride as u64).map_or(false, |v| v <= POW_TABLE_CAP) {
            let mut tab = vec![0u64; m as usize * stride];
            for x in 0..m {
                let row = x as usize * stride;
                tab[row] = 1 % m;
                for e in 1..stride {
                    tab[row + e] = mul_mod(tab[row + e - 1], x, m);
                }
            }
            Some(tab)
        } else {
            None
        };
        ReducedPoly {
            m,
            terms,
            pows,
            stride,
        }
    }

    /// Evaluate at a point given by arbitrary u64 coordinates.
    fn eval(&self, point: &[u64]) -> u64 {
        let m = self.m;
        if m == 1 {
            return 0;
        }
        let mut acc = 0u64;
        for (c, exps) in &self.terms {
            let mut term = *c;
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let x = point[i] % m;
                let p = match &self.pows {
                    Some(tab) => tab[x as usize * self.stride + e as usize],
                    None => pow_mod(x, e as u64, m),
                };
                term = mul_mod(term, p, m);
            }
            acc = ((acc as u128 + term as u128) % m as u128) as u64;
        }
        acc
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Run `f` over every point of `[start, start + period)^t` (componentwise),
/// as an odometer in increasing order.
fn for_each_point<F: FnMut(&[u64])>(start: u64, period: u64, t: usize, mut f: F) {
    if t == 0 {
        f(&[]);
        return;
    }
    let mut point = vec![start; t];
    loop {
        f(&point);
        let mut i = t;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            point[i] += 1;
            if point[i] < start + period {
                break;
            }
            point[i] = start;
        }
    }
}

fn period_points(period: u64, t: usize) -> Result<u128> {
    let mut acc: u128 = 1;
    for _ in 0..t {
        acc = acc
            .checked_mul(period as u128)
            .ok_or_else(|| Error::Overflow("period^t".into()))?;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// rho^+ and friends
// ---------------------------------------------------------------------------

fn rho_plus_scan(t_poly: &MultiPoly, s: u64, budget: &Budget) -> Result<u64> {
    let t = t_poly.num_vars();
    budget.check_points("rho_plus scan", period_points(s, t)?)?;
    let reduced = ReducedPoly::new(t_poly, s);
    let mut count = 0u64;
    for_each_point(0, s, t, |xi| {
        if reduced.eval(xi) == 0 {
            count += 1;
        }
    });
    Ok(count)
}

/// ϱ⁺_T(s): the number of ξ in a full period (one residue box of side s)
/// with T(ξ) ≡ 0 (mod s).
pub fn rho_plus(
    t_poly: &MultiPoly,
    s: u64,
    method: RhoMethod,
    budget: &Budget,
) -> Result<CongruenceCount> {
    if t_poly.is_zero() {
        return Err(Error::Precondition("zero polynomial".into()));
    }
    if s == 0 {
        return Err(Error::Domain("modulus 0".into()));
    }
    match method {
        RhoMethod::BruteForce => Ok(CongruenceCount {
            value: rho_plus_scan(t_poly, s, budget)?,
            modulus_box: s,
            method: CountMethod::BruteForce,
        }),
        RhoMethod::Auto => {
            let mut value: u128 = 1;
            for (p, e) in factor::factorize_u64(s)? {
                let q = factor::pow_u128(p, e)
                    .and_then(|v| u64::try_from(v).ok())
                    .ok_or_else(|| Error::Overflow("prime power".into()))?;
                value = value
                    .checked_mul(rho_plus_scan(t_poly, q, budget)? as u128)
                    .ok_or_else(|| Error::Overflow("rho_plus CRT product".into()))?;
            }
            Ok(CongruenceCount {
                value: u64::try_from(value)
                    .map_err(|_| Error::Overflow("rho_plus value".into()))?,
                modulus_box: s,
                method: CountMethod::Crt,
            })
        }
    }
}

/// Joint count over ξ in the ℘s-box: R_h(ξ) ≡ 0 (mod s_h) for every h.
pub fn rho_vector_plus(
    rs: &[MultiPoly],
    s: &ModulusVector,
    budget: &Budget,
) -> Result<CongruenceCount> {
    let t = common_vars(rs)?;
    if rs.len() != s.len() {
        return Err(Error::Precondition(format!(
            "{} polynomials vs {} moduli",
            rs.len(),
            s.len()
        )));
    }
    let period = s.product();
    budget.check_points("rho_vector_plus scan", period_points(period, t)?)?;
    let reduced: Vec<ReducedPoly> = rs
        .iter()
        .zip(s.entries())
        .map(|(r, &m)| ReducedPoly::new(r, m))
        .collect();
    let mut count = 0u64;
    for_each_point(0, period, t, |xi| {
        if reduced.iter().all(|r| r.eval(xi) == 0) {
            count += 1;
        }
    });
    Ok(CongruenceCount {
        value: count,
        modulus_box: period,
        method: CountMethod::BruteForce,
    })
}

fn common_vars(rs: &[MultiPoly]) -> Result<usize> {
    if rs.is_empty() {
        return Err(Error::Precondition("empty polynomial family".into()));
    }
    let t = rs[0].num_vars();
    if rs.iter().any(|r| r.num_vars() != t) {
        return Err(Error::Precondition(
            "polynomials must share one variable count".into(),
        ));
    }
    Ok(t)
}

/// ϱ#_R(s): points of the kernel-period box with s_h ∥ R_h(ξ) and
/// (R_h(ξ)/s_h, ℘s) = 1 for every h. Returns the count and K(s).
///
/// Per prime p | ℘s the conditions say exactly v_p(R_h(ξ)) = v_p(s_h) for
/// every h, which depends on ξ only mod p^{β_p} with
/// β_p = max_h v_p(s_h·κ(s_h)); the count is therefore a product of
/// independent per-prime scans.
pub fn rho_sharp(
    rs: &[MultiPoly],
    s: &ModulusVector,
    budget: &Budget,
) -> Result<(CongruenceCount, u64)> {
    let t = common_vars(rs)?;
    if rs.len() != s.len() {
        return Err(Error::Precondition(format!(
            "{} polynomials vs {} moduli",
            rs.len(),
            s.len()
        )));
    }
    let k_period = s.kernel_period();
    let mut value: u128 = 1;
    for (p, _) in factor::factorize_u64(s.product())? {
        let alphas: Vec<u32> = s.entries().iter().map(|&sh| factor::valuation(sh, p)).collect();
        let beta = alphas
            .iter()
            .map(|&a| a + u32::from(a > 0))
            .max()
            .expect("nonempty");
        debug_assert!(beta >= 1);
        let period = factor::pow_u128(p, beta)
            .and_then(|v| u64::try_from(v).ok())
            .ok_or_else(|| Error::Overflow("p^beta".into()))?;
        budget
            .check_points(
                &format!("rho_sharp at s = {:?}, prime {p}", s.entries()),
                period_points(period, t)?,
            )
            .map_err(|e| match e {
                Error::Budget { op, needed, limit, .. } => Error::Budget {
                    op,
                    needed,
                    limit,
                    last_complete: None,
                },
                other => other,
            })?;
        // residues of R_h mod p^{α_h + 1} decide both exact divisibility and
        // the coprime-cofactor requirement
        let moduli: Vec<u64> = alphas
            .iter()
            .map(|&a| {
                factor::pow_u128(p, a + 1)
                    .and_then(|v| u64::try_from(v).ok())
                    .ok_or_else(|| Error::Overflow("p^(alpha+1)".into()))
            })
            .collect::<Result<_>>()?;
        let reduced: Vec<ReducedPoly> = rs
            .iter()
            .zip(&moduli)
            .map(|(r, &m)| ReducedPoly::new(r, m))
            .collect();
        let p_alpha: Vec<u64> = alphas
            .iter()
            .map(|&a| factor::pow_u128(p, a).map(|v| v as u64).unwrap())
            .collect();
        let mut count = 0u64;
        for_each_point(0, period, t, |xi| {
            let ok = reduced.iter().enumerate().all(|(h, r)| {
                let w = r.eval(xi);
                if alphas[h] == 0 {
                    w != 0
                } else {
                    w % p_alpha[h] == 0 && w != 0
                }
            });
            if ok {
                count += 1;
            }
        });
        value = value
            .checked_mul(count as u128)
            .ok_or_else(|| Error::Overflow("rho_sharp product".into()))?;
    }
    Ok((
        CongruenceCount {
            value: u64::try_from(value).map_err(|_| Error::Overflow("rho_sharp value".into()))?,
            modulus_box: k_period,
            method: CountMethod::PrimePowerLift,
        },
        k_period,
    ))
}

/// Exact integer value of R at a point, as i128 when it fits, else BigUint
/// magnitude with a sign.
fn eval_exact_at(r: &MultiPoly, point: &[i64]) -> ExactValue {
    match r.eval_i128(point) {
        Some(v) => ExactValue::Small(v),
        None => ExactValue::Big(r.eval_exact(point)),
    }
}

enum ExactValue {
    Small(i128),
    Big(num_bigint::BigInt),
}

impl ExactValue {
    fn is_zero(&self) -> bool {
        match self {
            ExactValue::Small(v) => *v == 0,
            ExactValue::Big(v) => v.is_zero(),
        }
    }

    fn divisible_by(&self, d: u64) -> bool {
        match self {
            ExactValue::Small(v) => v % d as i128 == 0,
            ExactValue::Big(v) => (v % d).is_zero(),
        }
    }

    /// |self / d| mod m, assuming d | self.
    fn cofactor_mod(&self, d: u64, m: u64) -> u64 {
        match self {
            ExactValue::Small(v) => ((v / d as i128).unsigned_abs() % m as u128) as u64,
            ExactValue::Big(v) => {
                let q = (v / d).magnitude() % BigUint::from(m);
                q.to_u64().expect("residue fits")
            }
        }
    }
}

/// a ∥ value with the cofactor coprime to `coprime_to`. Implements the
/// literal definition on exact integers (a ∥ 0 iff a = 1).
fn exactly_divides_with_coprime_cofactor(a: u64, value: &ExactValue, coprime_to: u64) -> bool {
    if value.is_zero() {
        return a == 1 && coprime_to == 1;
    }
    if !value.divisible_by(a) {
        return false;
    }
    // gcd(a, cofactor) via the residue of the cofactor mod a
    if a > 1 {
        let r = value.cofactor_mod(a, a);
        if r.gcd(&a) != 1 {
            return false;
        }
    }
    if coprime_to > 1 {
        let r = value.cofactor_mod(a, coprime_to);
        if r.gcd(&coprime_to) != 1 {
            return false;
        }
    }
    true
}

/// Literal full-period oracle for ϱ#: scan ξ ∈ [1, K(s)]^t, evaluate every
/// R_h exactly, and test the definition with integer arithmetic.
pub fn rho_sharp_scan(
    rs: &[MultiPoly],
    s: &ModulusVector,
    budget: &Budget,
) -> Result<CongruenceCount> {
    let t = common_vars(rs)?;
    if rs.len() != s.len() {
        return Err(Error::Precondition(format!(
            "{} polynomials vs {} moduli",
            rs.len(),
            s.len()
        )));
    }
    let k_period = s.kernel_period();
    budget.check_points("rho_sharp full-period scan", period_points(k_period, t)?)?;
    let product = s.product();
    let mut count = 0u64;
    let mut point = vec![0i64; t];
    for_each_point(1, k_period, t, |xi| {
        for (slot, &v) in point.iter_mut().zip(xi) {
            *slot = v as i64;
        }
        let ok = rs.iter().zip(s.entries()).all(|(r, &sh)| {
            let value = eval_exact_at(r, &point);
            exactly_divides_with_coprime_cofactor(sh, &value, product)
        });
        if ok {
            count += 1;
        }
    });
    Ok(CongruenceCount {
        value: count,
        modulus_box: k_period,
        method: CountMethod::BruteForce,
    })
}

/// Outcome of the density identity check: ϱ#(a)/K(a)^t against the density
/// of the exact-divisibility set over one full period, as exact rationals.
#[derive(Debug, Clone)]
pub struct DensityReport {
    pub sharp_side: Ratio<u128>,
    pub density_side: Ratio<u128>,
    pub kernel_period: u64,
    pub pass: bool,
}

/// Verify over one full period that ϱ#(a)/K(a)^t equals the density of
///
///   { n : a_h ∥ R_h(n) for all h, and p | ℘a, p ∤ a_h ⇒ p ∤ R_h(n) }.
///
/// The left side is the per-prime-power count, the right side a literal
/// scan of the displayed set with exact integer arithmetic; the rationals
/// must agree exactly.
pub fn density_identity_check(
    rs: &[MultiPoly],
    a: &ModulusVector,
    budget: &Budget,
) -> Result<DensityReport> {
    let t = common_vars(rs)?;
    let (sharp, k_period) = rho_sharp(rs, a, budget)?;
    budget.check_points("density period scan", period_points(k_period, t)?)?;
    let product = a.product();
    let primes_of_a: Vec<u64> = factor::factorize_u64(product)?
        .iter()
        .map(|&(p, _)| p)
        .collect();
    // per h: the primes of ℘a not dividing a_h must not divide R_h(n)
    let foreign: Vec<Vec<u64>> = a
        .entries()
        .iter()
        .map(|&ah| {
            primes_of_a
                .iter()
                .copied()
                .filter(|&p| ah % p != 0)
                .collect()
        })
        .collect();
    let mut count = 0u64;
    let mut point = vec![0i64; t];
    for_each_point(1, k_period, t, |xi| {
        for (slot, &v) in point.iter_mut().zip(xi) {
            *slot = v as i64;
        }
        let ok = rs.iter().enumerate().all(|(h, r)| {
            let value = eval_exact_at(r, &point);
            let ah = a.entries()[h];
            // a_h ∥ R_h(n)
            let parallel = if value.is_zero() {
                ah == 1
            } else {
                value.divisible_by(ah)
                    && (ah == 1 || value.cofactor_mod(ah, ah).gcd(&ah) == 1)
            };
            if !parallel {
                return false;
            }
            foreign[h].iter().all(|&p| !value.divisible_by(p))
        });
        if ok {
            count += 1;
        }
    });
    let denom = period_points(k_period, t)?;
    let sharp_side = Ratio::new(sharp.value as u128, denom);
    let density_side = Ratio::new(count as u128, denom);
    Ok(DensityReport {
        pass: sharp_side == density_side,
        sharp_side,
        density_side,
        kernel_period: k_period,
    })
}

// ---------------------------------------------------------------------------
// Inequality checkers
// ---------------------------------------------------------------------------

/// One row of a prime-by-prime inequality check.
#[derive(Debug, Clone, Serialize)]
pub struct BoundRow {
    pub p: u64,
    pub nu: u32,
    pub lhs: u64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub rows: Vec<BoundRow>,
    pub max_ratio: f64,
    pub violations: usize,
    pub pass: bool,
}

/// For every prime p ≤ p_max check ϱ_T⁺(p) ≤ g·p^{t−1} (the
/// Schwartz–Zippel root bound) for a primitive T of degree g; reports the
/// worst ratio.
pub fn check_schwartz_zippel(
    t_poly: &MultiPoly,
    p_max: u64,
    budget: &Budget,
) -> Result<BoundReport> {
    if !t_poly.is_primitive() {
        return Err(Error::Precondition("polynomial must be primitive".into()));
    }
    let g = t_poly
        .total_degree()
        .ok_or_else(|| Error::Precondition("zero polynomial".into()))? as u64;
    let t = t_poly.num_vars();
    let mut rows = Vec::new();
    let mut violations = 0usize;
    let mut max_ratio = 0.0f64;
    for p in factor::primes_in_range(1, p_max) {
        let lhs = rho_plus(t_poly, p, RhoMethod::BruteForce, budget)?.value;
        let bound = g as u128 * period_points(p, t.saturating_sub(1))?;
        if (lhs as u128) > bound {
            violations += 1;
        }
        let rhs = bound as f64;
        let ratio = if bound > 0 { lhs as f64 / rhs } else { 0.0 };
        max_ratio = max_ratio.max(ratio);
        rows.push(BoundRow {
            p,
            nu: 1,
            lhs,
            rhs,
            ratio,
        });
    }
    Ok(BoundReport {
        rows,
        max_ratio,
        violations,
        pass: violations == 0,
    })
}

/// Effective prime-power root bound:
///
///   ϱ_T⁺(p^ν) ≤ g^t (ν+1)^{t−1} p^{ν(t−1/g) + v_p(c(T))/g}
///
/// checked for all p ≤ p_max and 1 ≤ ν ≤ nu_max within the point budget.
/// The right side is irrational; near-ties of the f64 comparison are
/// settled exactly by raising both sides to the g-th power in big-integer
/// arithmetic.
pub fn check_stewart_bound(
    t_poly: &MultiPoly,
    p_max: u64,
    nu_max: u32,
    budget: &Budget,
) -> Result<BoundReport> {
    if t_poly.is_zero() {
        return Err(Error::Precondition("zero polynomial".into()));
    }
    let g = t_poly.total_degree().unwrap();
    if g == 0 {
        return Err(Error::Precondition(
            "bound needs a nonconstant polynomial".into(),
        ));
    }
    let t = t_poly.num_vars() as u32;
    let content = t_poly.content();
    let mut rows = Vec::new();
    let mut violations = 0usize;
    let mut max_ratio = 0.0f64;
    for p in factor::primes_in_range(1, p_max) {
        let gamma = valuation_big(&content, p);
        for nu in 1..=nu_max {
            let q = match factor::pow_u128(p, nu).and_then(|v| u64::try_from(v).ok()) {
                Some(q) => q,
                None => break,
            };
            let points = period_points(q, t as usize)?;
            if points > budget.max_points as u128 {
                break;
            }
            let lhs = rho_plus_scan(t_poly, q, budget)?;
            let exponent = nu as f64 * (t as f64 - 1.0 / g as f64) + gamma as f64 / g as f64;
            let coeff = (g as f64).powi(t as i32) * ((nu + 1) as f64).powi(t as i32 - 1);
            let rhs = coeff * (p as f64).powf(exponent);
            let holds = if (lhs as f64) <= rhs * (1.0 - 1e-9) {
                true
            } else if (lhs as f64) >= rhs * (1.0 + 1e-9) {
                false
            } else {
                // exact: lhs^g <= g^{tg} (ν+1)^{(t−1)g} p^{ν(tg−1)+γ}
                let left = BigUint::from(lhs).pow(g);
                let right = BigUint::from(g).pow(t * g)
                    * BigUint::from(nu as u64 + 1).pow((t - 1) * g)
                    * BigUint::from(p).pow(nu * (t * g - 1) + gamma);
                left <= right
            };
            if !holds {
                violations += 1;
            }
            let ratio = lhs as f64 / rhs;
            max_ratio = max_ratio.max(ratio);
            rows.push(BoundRow {
                p,
                nu,
                lhs,
                rhs,
                ratio,
            });
        }
    }
    Ok(BoundReport {
        rows,
        max_ratio,
        violations,
        pass: violations == 0,
    })
}

fn valuation_big(n: &BigUint, p: u64) -> u32 {
    if n.is_zero() {
        return 0;
    }
    let pb = BigUint::from(p);
    let mut m = n.clone();
    let mut v = 0;
    while (&m % &pb).is_zero() {
        m /= &pb;
        v += 1;
    }
    v
}

/// One prime of the root-count asymptotics check for a power-sum
/// difference form.
#[derive(Debug, Clone, Serialize)]
pub struct KorobovRow {
    pub p: u64,
    pub rho: u64,
    /// |ϱ⁺(p) − p^{2t−1}| / p^t — monitored, no threshold attached.
    pub deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct KorobovReport {
    pub rows: Vec<KorobovRow>,
    pub max_deviation: f64,
    pub power_cases: usize,
    pub bound_violations: usize,
    pub pass: bool,
}

/// For the 2t-variable difference form of a power system with coprime tail
/// coefficients: monitor |ϱ⁺(p) − p^{2t−1}|/p^t over p ≤ p_max, and assert
/// ϱ⁺(p^ν) ≤ L·p^{2tν−1} with L = max tail exponent, for every ν the
/// point budget admits. The bound is the root-count bound at degree L
/// combined with lifting each root mod p to at most p^{2t(ν−1)} points
/// mod p^ν; at ν = 1 it reads ϱ⁺(p) ≤ L·p^{2t−1}.
pub fn check_korobov_estimate(
    sys: &PowerSystem,
    p_max: u64,
    budget: &Budget,
) -> Result<KorobovReport> {
    let tail = sys
        .tail()
        .ok_or_else(|| Error::Precondition("power system needs a tail (t >= 1)".into()))?;
    let gcd_tail = tail.coefficients().iter().fold(0u64, |acc, &v| acc.gcd(&v));
    if gcd_tail != 1 {
        return Err(Error::Precondition(format!(
            "tail coefficients must be coprime, gcd = {gcd_tail}"
        )));
    }
    let t = tail.coefficients().len();
    let big_l = *tail.exponents().iter().max().unwrap() as u64;
    let q = crate::system::build_power_system_poly(tail.coefficients(), tail.exponents())?
        .product();
    let two_t = 2 * t;
    let mut rows = Vec::new();
    let mut max_deviation = 0.0f64;
    let mut power_cases = 0usize;
    let mut bound_violations = 0usize;
    for p in factor::primes_in_range(1, p_max) {
        if period_points(p, two_t)? > budget.max_points as u128 {
            break;
        }
        let rho = rho_plus_scan(&q, p, budget)?;
        let main_term = period_points(p, two_t - 1)? as f64;
        let deviation = (rho as f64 - main_term).abs() / period_points(p, t)? as f64;
        max_deviation = max_deviation.max(deviation);
        rows.push(KorobovRow { p, rho, deviation });
        // second inequality, every admissible power
        let mut nu = 1u32;
        loop {
            let q_pow = match factor::pow_u128(p, nu).and_then(|v| u64::try_from(v).ok()) {
                Some(v) => v,
                None => break,
            };
            if period_points(q_pow, two_t)? > budget.max_points as u128 {
                break;
            }
            let lhs = rho_plus_scan(&q, q_pow, budget)?;
            let rhs = BigUint::from(big_l) * BigUint::from(p).pow(two_t as u32 * nu - 1);
            power_cases += 1;
            if BigUint::from(lhs) > rhs {
                bound_violations += 1;
            }
            nu += 1;
        }
    }
    Ok(KorobovReport {
        rows,
        max_deviation,
        power_cases,
        bound_violations,
        pass: bound_violations == 0,
    })
}

// ---------------------------------------------------------------------------
// Sifted box count
// ---------------------------------------------------------------------------

/// Result of [`sifted_count`]. `bound_ratio` is count / reference with the
/// reference taken at implicit constant 1; it is reported, never asserted.
#[derive(Debug, Clone, Serialize)]
pub struct SiftedOutcome {
    pub count: u64,
    pub reference: f64,
    pub bound_ratio: Option<f64>,
    pub sieve_primes: usize,
}

/// Count n in the box x_j < n_j ≤ x_j + y_j with
///
/// * a_h ∥ R_h(n) and (R_h(n)/a_h, ℘a) = 1 for every h,
/// * no prime p with g < p ≤ z, p ∤ ℘a dividing Q(n),
///
/// and divide by ℘y·(ϱ#(a)/K(a)^t)·∏_{g<p≤z, p∤℘a}(1 − ϱ_Q⁺(p)/p^t) to get
/// the monitored ratio.
pub fn sifted_count(
    sys: &FactoredSystem,
    a: &ModulusVector,
    x: &[u64],
    y: &[u64],
    z: u64,
    budget: &Budget,
) -> Result<SiftedOutcome> {
    let t = sys.vars();
    if x.len() != t || y.len() != t {
        return Err(Error::Precondition(format!(
            "box vectors must have {t} coordinates"
        )));
    }
    if y.iter().any(|&v| v == 0) {
        return Err(Error::Precondition("empty box (some y_j = 0)".into()));
    }
    if z < 2 {
        return Err(Error::Precondition("sieve bound z must be >= 2".into()));
    }
    if a.len() != sys.r() {
        return Err(Error::Precondition(format!(
            "modulus vector must have {} entries",
            sys.r()
        )));
    }
    let volume: u128 = y.iter().map(|&v| v as u128).product();
    budget.check_box("sifted box scan", volume)?;

    let g = sys.degree() as u64;
    let product_a = a.product();
    let q_poly = sys.product();
    let sieve_primes: Vec<u64> = factor::primes_in_range(g, z)
        .into_iter()
        .filter(|&p| product_a % p != 0)
        .collect();
    let q_mod_p: Vec<ReducedPoly> = sieve_primes
        .iter()
        .map(|&p| ReducedPoly::new(&q_poly, p))
        .collect();

    // the outermost coordinate is split across workers; the integer sum
    // is order-independent
    use rayon::prelude::*;
    let count: u64 = (0..y[0])
        .into_par_iter()
        .map(|off0| {
            let mut count = 0u64;
            let mut point_u = vec![0u64; t];
            let mut point_i = vec![0i64; t];
            point_u[0] = x[0] + off0 + 1;
            point_i[0] = point_u[0] as i64;
            let mut offsets = vec![0u64; t];
            'sub: loop {
                for j in 1..t {
                    point_u[j] = x[j] + offsets[j] + 1;
                    point_i[j] = point_u[j] as i64;
                }
                let parallel_ok = sys.rs().iter().zip(a.entries()).all(|(r, &ah)| {
                    let value = eval_exact_at(r, &point_i);
                    exactly_divides_with_coprime_cofactor(ah, &value, product_a)
                });
                if parallel_ok && q_mod_p.iter().all(|r| r.eval(&point_u) != 0) {
                    count += 1;
                }
                let mut j = t;
                loop {
                    if j <= 1 {
                        break 'sub;
                    }
                    j -= 1;
                    offsets[j] += 1;
                    if offsets[j] < y[j] {
                        break;
                    }
                    offsets[j] = 0;
                }
            }
            count
        })
        .sum();

    let (sharp, k_period) = rho_sharp(sys.rs(), a, budget)?;
    let density = sharp.value as f64 / period_points(k_period, t)? as f64;
    let mut product = 1.0f64;
    for (p, r) in sieve_primes.iter().zip(&q_mod_p) {
        let mut roots = 0u64;
        for_each_point(0, *p, t, |xi| {
            if r.eval(xi) == 0 {
                roots += 1;
            }
        });
        product *= 1.0 - roots as f64 / period_points(*p, t)? as f64;
    }
    let reference = volume as f64 * density * product;
    let bound_ratio = if reference > 0.0 {
        Some(count as f64 / reference)
    } else {
        None
    };
    Ok(SiftedOutcome {
        count,
        reference,
        bound_ratio,
        sieve_primes: sieve_primes.len(),
    })
}

/// Derived sieve parameters (3α/25, ε₁/6g).
pub fn alpha_parameters(alpha: f64, epsilon1: f64, g: u32) -> Result<(f64, f64)> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Precondition(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    if epsilon1 <= 0.0 {
        return Err(Error::Precondition("epsilon1 must be positive".into()));
    }
    if g < 1 {
        return Err(Error::Precondition("degree must be >= 1".into()));
    }
    Ok((3.0 * alpha / 25.0, epsilon1 / (6.0 * g as f64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(s).unwrap()
    }

    fn mv(s: &[u64]) -> ModulusVector {
        ModulusVector::new(s.to_vec()).unwrap()
    }

    #[test]
    fn modulus_vector_derived_values() {
        let v = mv(&[2]);
        assert_eq!((v.product(), v.plain_lcm(), v.kernel_period()), (2, 2, 4));
        let v = mv(&[1, 1, 1]);
        assert_eq!(v.kernel_period(), 1);
        let v = mv(&[4, 6]);
        // K = lcm(4·2, 6·6) = lcm(8, 36) = 72 >= lcm(4, 6) = 12
        assert_eq!(v.kernel_period(), 72);
        assert!(v.kernel_period() >= v.plain_lcm());
        assert_eq!(v.kernel_period().gcd(&(8u64 * 36)), v.kernel_period());
    }

    #[test]
    fn rho_plus_examples() {
        let b = Budget::small();
        for s in [1u64, 2, 7, 12, 60] {
            assert_eq!(rho_plus(&p("x1"), s, RhoMethod::Auto, &b).unwrap().value, 1);
        }
        assert_eq!(
            rho_plus(&p("x1^2 - 1"), 8, RhoMethod::BruteForce, &b)
                .unwrap()
                .value,
            4
        );
        assert_eq!(
            rho_plus(&p("x1 x2"), 5, RhoMethod::BruteForce, &b).unwrap().value,
            9
        );
    }

    #[test]
    fn rho_plus_methods_agree() {
        let b = Budget::small();
        let polys = [p("x1^2 - 1"), p("x1 x2"), p("x1^3 + x2 - 2")];
        for q in &polys {
            for s in [2u64, 6, 8, 12, 30, 36] {
                let auto = rho_plus(q, s, RhoMethod::Auto, &b).unwrap();
                let brute = rho_plus(q, s, RhoMethod::BruteForce, &b).unwrap();
                assert_eq!(auto.value, brute.value, "{q} mod {s}");
                assert_eq!(auto.method, CountMethod::Crt);
                assert_eq!(brute.method, CountMethod::BruteForce);
            }
        }
    }

    #[test]
    fn rho_vector_examples() {
        let b = Budget::small();
        assert_eq!(rho_vector_plus(&[p("x1")], &mv(&[2]), &b).unwrap().value, 1);
        assert_eq!(
            rho_vector_plus(&[p("x1"), p("x1 + 1")], &mv(&[2, 2]), &b)
                .unwrap()
                .value,
            0
        );
        assert_eq!(
            rho_vector_plus(&[p("x1"), p("x1 + 1")], &mv(&[2, 3]), &b)
                .unwrap()
                .value,
            1
        );
    }

    #[test]
    fn rho_sharp_examples() {
        let b = Budget::small();
        let (c, k) = rho_sharp(&[p("x1")], &mv(&[2]), &b).unwrap();
        assert_eq!((c.value, k), (1, 4));
        let (c, k) = rho_sharp(&[p("x1"), p("x1 + 1")], &mv(&[1, 1]), &b).unwrap();
        assert_eq!((c.value, k), (1, 1));
        // linked factors: X and X+l share every root mod p when p | l
        for l in [2u64, 6, 15] {
            for (pr, _) in factor::factorize_u64(l).unwrap() {
                let rs = [p("x1"), MultiPoly::parse(&format!("x1 + {l}")).unwrap()];
                let (c, _) = rho_sharp(&rs, &mv(&[pr, 1]), &b).unwrap();
                assert_eq!(c.value, 0, "l = {l}, p = {pr}");
            }
        }
    }

    #[test]
    fn rho_sharp_zero_polynomial_convention() {
        let b = Budget::small();
        // R ≡ 0: exact divisibility by 2 fails everywhere
        let (c, _) = rho_sharp(&[MultiPoly::zero(1)], &mv(&[2]), &b).unwrap();
        assert_eq!(c.value, 0);
        let scan = rho_sharp_scan(&[MultiPoly::zero(1)], &mv(&[2]), &b).unwrap();
        assert_eq!(scan.value, 0);
        // but with modulus 1 the empty condition counts the whole period
        let (c, k) = rho_sharp(&[MultiPoly::zero(1)], &mv(&[1]), &b).unwrap();
        assert_eq!((c.value, k), (1, 1));
    }

    #[test]
    fn rho_sharp_lift_matches_literal_scan() {
        let b = Budget::small();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let choices = [1u64, 2, 3, 4, 5, 6, 8, 9, 12];
        let polys = [p("x1"), p("x1 + 1"), p("x1^2 + 1"), p("2 x1 + 3")];
        let mut tested = 0;
        while tested < 60 {
            let r1 = &polys[rng.gen_range(0..polys.len())];
            let r2 = &polys[rng.gen_range(0..polys.len())];
            if r1 == r2 {
                continue;
            }
            let s = mv(&[
                choices[rng.gen_range(0..choices.len())],
                choices[rng.gen_range(0..choices.len())],
            ]);
            if period_points(s.kernel_period(), 1).unwrap() > 100_000 {
                continue;
            }
            let rs = [r1.clone(), r2.clone()];
            let (lift, _) = rho_sharp(&rs, &s, &b).unwrap();
            let scan = rho_sharp_scan(&rs, &s, &b).unwrap();
            assert_eq!(lift.value, scan.value, "{r1}, {r2}, s = {:?}", s.entries());
            tested += 1;
        }
    }

    #[test]
    fn density_identity_examples() {
        let b = Budget::small();
        let rep = density_identity_check(&[p("x1")], &mv(&[2]), &b).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.sharp_side, Ratio::new(1u128, 4));

        let rep = density_identity_check(&[p("x1"), p("x1 + 7")], &mv(&[1, 1]), &b).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.sharp_side, Ratio::new(1u128, 1));

        let rep = density_identity_check(&[p("x1"), p("x1 + 2")], &mv(&[2, 1]), &b).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.sharp_side, Ratio::new(0u128, 1));
    }

    #[test]
    fn schwartz_zippel_examples() {
        let b = Budget::small();
        let rep = check_schwartz_zippel(&p("x1 x2"), 5, &b).unwrap();
        assert!(rep.pass);
        let at5 = rep.rows.iter().find(|r| r.p == 5).unwrap();
        assert_eq!(at5.lhs, 9);
        assert_eq!(at5.rhs, 10.0);

        let rep = check_schwartz_zippel(&p("x1"), 50, &b).unwrap();
        assert!(rep.pass);
        assert!((rep.max_ratio - 1.0).abs() < 1e-12); // tight at every prime

        let rep = check_schwartz_zippel(&p("x1^2 - 1"), 2, &b).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.rows[0].lhs, 1);

        assert!(check_schwartz_zippel(&p("2 x1 + 2"), 5, &b).is_err());
    }

    #[test]
    fn primitive_polynomials_have_proper_root_count_above_degree() {
        // for primitive T and p > g the root count is strictly below p^{νt}
        let b = Budget::small();
        for q in [p("x1^2 - 1"), p("x1 x2"), p("x1^3 + x2^2 + 1")] {
            let g = q.total_degree().unwrap() as u64;
            let t = q.num_vars();
            for pr in factor::primes_in_range(g, 12) {
                for nu in 1..=2u32 {
                    let m = pr.pow(nu);
                    if period_points(m, t).unwrap() > 100_000 {
                        continue;
                    }
                    let c = rho_plus(&q, m, RhoMethod::BruteForce, &b).unwrap().value;
                    assert!(
                        (c as u128) < period_points(m, t).unwrap(),
                        "{q} mod {m}"
                    );
                }
            }
        }
    }

    #[test]
    fn stewart_examples() {
        let b = Budget::small();
        // x^2 − 1 at p = 2, ν = 3: 4 roots vs 2·2^{1.5}
        let rep = check_stewart_bound(&p("x1^2 - 1"), 2, 3, &b).unwrap();
        assert!(rep.pass);
        let row = rep.rows.iter().find(|r| r.p == 2 && r.nu == 3).unwrap();
        assert_eq!(row.lhs, 4);
        assert!((row.rhs - 2.0 * 2f64.powf(1.5)).abs() < 1e-9);

        // content term: 3x at p = 3 is tight (3 ≤ 3), exercising the exact
        // near-tie path
        let rep = check_stewart_bound(&p("3 x1"), 3, 1, &b).unwrap();
        assert!(rep.pass);
        let row = rep.rows.iter().find(|r| r.p == 3).unwrap();
        assert_eq!(row.lhs, 3);
        assert!((row.ratio - 1.0).abs() < 1e-9);

        // x is tight at every prime power
        let rep = check_stewart_bound(&p("x1"), 7, 3, &b).unwrap();
        assert!(rep.pass);
        assert!((rep.max_ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn korobov_examples() {
        let b = Budget::small();
        let sys = PowerSystem::new(vec![1, 1], vec![2, 2]).unwrap();
        let rep = check_korobov_estimate(&sys, 5, &b).unwrap();
        assert!(rep.pass);
        let at5 = rep.rows.iter().find(|r| r.p == 5).unwrap();
        assert_eq!(at5.rho, 9);
        assert!((at5.deviation - 4.0 / 5.0).abs() < 1e-12);
        let at3 = rep.rows.iter().find(|r| r.p == 3).unwrap();
        assert_eq!(at3.rho, 5);
        assert!((at3.deviation - 2.0 / 3.0).abs() < 1e-12);

        let bad = PowerSystem::new(vec![1, 2, 2], vec![2, 3, 3]).unwrap();
        assert!(check_korobov_estimate(&bad, 5, &b).is_err());
    }

    #[test]
    fn sifted_examples() {
        let b = Budget::small();
        // odd integers in (10, 20]
        let sys = FactoredSystem::new(vec![p("x1")], vec![p("x1")], vec![vec![1]]).unwrap();
        let out = sifted_count(&sys, &mv(&[1]), &[10], &[10], 2, &b).unwrap();
        assert_eq!(out.count, 5);

        // unsatisfiable exact divisibility: 64 never exactly divides n <= 4
        let out = sifted_count(&sys, &mv(&[64]), &[0], &[4], 2, &b).unwrap();
        assert_eq!(out.count, 0);

        // no sieve primes, no divisibility constraints: the whole box
        let out = sifted_count(&sys, &mv(&[1]), &[10], &[10], 2, &b).unwrap();
        assert_eq!(out.sieve_primes, 1);
        let sys_deg2 =
            FactoredSystem::new(vec![p("x1^2")], vec![p("x1")], vec![vec![2]]).unwrap();
        let out = sifted_count(&sys_deg2, &mv(&[1]), &[10], &[10], 2, &b).unwrap();
        assert_eq!(out.count, 10); // z = 2 <= g = 2: empty sieve range
        assert_eq!(out.sieve_primes, 0);
    }

    #[test]
    fn alpha_parameter_examples() {
        let (a1, a2) = alpha_parameters(1.0, 0.6, 1).unwrap();
        assert!((a1 - 0.12).abs() < 1e-15 && (a2 - 0.1).abs() < 1e-15);
        let (a1, a2) = alpha_parameters(0.5, 0.3, 5).unwrap();
        assert!((a1 - 0.06).abs() < 1e-15 && (a2 - 0.01).abs() < 1e-15);
        assert!(alpha_parameters(25.0 / 3.0, 0.5, 1).is_err());
        assert!(alpha_parameters(0.5, 0.0, 1).is_err());
    }

    #[test]
    fn sharp_density_never_exceeds_plain_density() {
        // ϱ#(s)/K(s)^t <= ϱ⁺(s)/lcm(s)^t as exact rationals
        let b = Budget::small();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let choices = [1u64, 2, 3, 4, 5, 6, 9];
        let polys = [p("x1"), p("x1 + 1"), p("x1^2 + 1"), p("x1^2 + x1 + 1")];
        let mut tested = 0;
        while tested < 40 {
            let r1 = &polys[rng.gen_range(0..polys.len())];
            let r2 = &polys[rng.gen_range(0..polys.len())];
            if r1 == r2 {
                continue;
            }
            let s = mv(&[
                choices[rng.gen_range(0..choices.len())],
                choices[rng.gen_range(0..choices.len())],
            ]);
            if s.kernel_period() > 50_000 || s.product() > 50_000 {
                continue;
            }
            let rs = [r1.clone(), r2.clone()];
            let (sharp, k) = rho_sharp(&rs, &s, &b).unwrap();
            let plus = rho_vector_plus(&rs, &s, &b).unwrap();
            let lhs = Ratio::new(sharp.value as u128, k as u128);
            let rhs = Ratio::new(plus.value as u128, s.plain_lcm() as u128);
            assert!(lhs <= rhs, "s = {:?}", s.entries());
            tested += 1;
        }
    }
}
