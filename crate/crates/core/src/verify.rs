//! Verification panels: randomized and exhaustive cross-checks of every
//! counting routine against an independent route, packaged as uniform
//! check reports. The CLI `verify` subcommand drives these; the
//! acceptance tests call the same functions with pinned sizes.

use crate::budget::Budget;
use crate::congruence::{
    check_schwartz_zippel, check_stewart_bound, density_identity_check, rho_plus,
    rho_vector_plus, rho_sharp, ModulusVector, RhoMethod,
};
use crate::delta;
use crate::error::Result;
use crate::factor;
use crate::mean::{self, DeltaAlgorithm};
use crate::meanvalue::{class_membership_sample, e_sum_checkpointed, LiftedFunction, MultiArithmeticFunction};
use crate::poly::MultiPoly;
use crate::powersum::{
    self, admissible, admissible_catalog, check_cs_and_split, check_equal_head_bound, extend,
    rep_count, v_counts, v_counts_naive, ExtendMode, PowerSystem,
};
use crate::report::CheckReport;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Which panel family to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Core,
    Congruence,
    MeanValue,
    PowerSums,
    All,
}

impl Suite {
    pub fn parse(name: &str) -> Option<Suite> {
        match name {
            "core" => Some(Suite::Core),
            "congruence" => Some(Suite::Congruence),
            "meanvalue" => Some(Suite::MeanValue),
            "powersums" => Some(Suite::PowerSums),
            "all" => Some(Suite::All),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Random polynomial panels
// ---------------------------------------------------------------------------

/// A random nonzero polynomial in t variables with total degree ≤ max_deg
/// and at least degree 1.
pub fn random_poly(rng: &mut ChaCha8Rng, t: usize, max_deg: u32) -> MultiPoly {
    loop {
        let n_terms = rng.gen_range(1..=4usize);
        let mut terms = Vec::with_capacity(n_terms + 1);
        for _ in 0..n_terms {
            let mut exps = vec![0u32; t];
            let mut left = max_deg;
            for e in exps.iter_mut() {
                *e = rng.gen_range(0..=left);
                left -= *e;
            }
            let coeff = loop {
                let c = rng.gen_range(-9i64..=9);
                if c != 0 {
                    break c;
                }
            };
            terms.push((exps, BigInt::from(coeff)));
        }
        let p = MultiPoly::from_terms(t, terms).unwrap();
        if p.total_degree().map_or(false, |g| g >= 1) {
            return p;
        }
    }
}

/// Random primitive polynomial of degree ≥ 1.
pub fn random_primitive_poly(rng: &mut ChaCha8Rng, t: usize, max_deg: u32) -> MultiPoly {
    loop {
        let p = random_poly(rng, t, max_deg).primitive_part().unwrap();
        if p.total_degree().map_or(false, |g| g >= 1) {
            return p;
        }
    }
}

// ---------------------------------------------------------------------------
// Core checks
// ---------------------------------------------------------------------------

/// Window-scan Δ(n) equals grid-max Δ(n, u) for every n ≤ limit.
/// Deliberately single-threaded.
pub fn delta_dual_oracle(limit: u64) -> CheckReport {
    let base = factor::primes_up_to(factor::isqrt(limit));
    let mut mismatches = 0u64;
    let mut divisors = Vec::new();
    factor::for_each_factorization(1, limit, &base, |n, fac| {
        factor::divisors_into(fac, &mut divisors);
        let window = delta::delta_from_divisors(&divisors);
        let grid = delta::delta_grid_max_from_divisors(&divisors);
        if window != grid {
            mismatches += 1;
            if mismatches <= 3 {
                eprintln!("delta mismatch at n = {n}: window {window}, grid {grid}");
            }
        }
    });
    CheckReport::new(
        "delta-dual-oracle",
        format!("n <= {limit}"),
        mismatches as f64,
        0.0,
        mismatches == 0,
    )
}

/// Δ(ab) ≤ τ(a)·Δ(b) (hence ≤ 2^Ω(a)·Δ(b)) on random coprime pairs with
/// ab ≤ max_product.
pub fn delta_submultiplicative(pairs: usize, max_product: u64, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a_cap = factor::isqrt(max_product).min(10_000);
    let mut violations = 0u64;
    let mut checked = 0usize;
    while checked < pairs {
        let a = rng.gen_range(1..=a_cap);
        let b = rng.gen_range(1..=max_product / a);
        if a.gcd(&b) != 1 {
            continue;
        }
        checked += 1;
        let fac_a = factor::factorize_u64(a).unwrap();
        let tau_a = factor::tau(&fac_a);
        let two_omega = 1u64 << factor::big_omega(&fac_a).min(63);
        let d_ab = delta::delta(a * b).unwrap();
        let d_b = delta::delta(b).unwrap();
        if d_ab > tau_a * d_b || tau_a > two_omega {
            violations += 1;
            if violations <= 3 {
                eprintln!("submultiplicativity violated at a = {a}, b = {b}");
            }
        }
    }
    CheckReport::new(
        "delta-submultiplicative",
        format!("{pairs} coprime pairs, ab <= {max_product}"),
        violations as f64,
        0.0,
        violations == 0,
    )
}

/// S(x) from the two Δ evaluators agrees exactly; 𝔖(x) within rel_tol.
pub fn mean_sums_dual(x: u64, rel_tol: f64, budget: &Budget) -> Result<CheckReport> {
    let (s_window, frak_window) = mean::delta_mean_sums(x, DeltaAlgorithm::WindowScan, budget)?;
    let (s_grid, frak_grid) = mean::delta_mean_sums(x, DeltaAlgorithm::GridMax, budget)?;
    let s_ok = s_window == s_grid;
    let frak_ok = (frak_window - frak_grid).abs() <= rel_tol * frak_window.abs();
    Ok(CheckReport::new(
        "mean-sums-dual",
        format!("x = {x}"),
        s_window as f64,
        s_grid as f64,
        s_ok && frak_ok,
    ))
}

/// The fixed desk value S(10) = 15.
pub fn mean_sums_desk_value(budget: &Budget) -> Result<CheckReport> {
    let (s, _) = mean::delta_mean_sums(10, DeltaAlgorithm::WindowScan, budget)?;
    Ok(CheckReport::new(
        "mean-sums-desk-value",
        "S(10)",
        s as f64,
        15.0,
        s == 15,
    ))
}

/// Pair counts never exceed the shifted Δ-sum that dominates them.
pub fn pair_count_delta_bound(budget: &Budget) -> Result<CheckReport> {
    let panel = [(4u64, 3u64, 1u64), (3, 5, 2), (10, 7, 3), (12, 9, 2), (20, 11, 5), (30, 13, 6)];
    let mut violations = 0u64;
    for &(x, q, a) in &panel {
        let lhs = mean::congruence_pair_count(x, q, a, budget)?;
        let mut rhs = 0u64;
        let mut k = 0u64;
        while k <= x * x / q {
            rhs += delta::delta(k * q + a)?;
            k += 1;
        }
        if lhs > rhs {
            violations += 1;
        }
    }
    Ok(CheckReport::new(
        "pair-count-delta-bound",
        format!("{} instances", panel.len()),
        violations as f64,
        0.0,
        violations == 0,
    ))
}

// ---------------------------------------------------------------------------
// Congruence checks
// ---------------------------------------------------------------------------

/// Brute-force root counts are multiplicative over coprime moduli.
pub fn crt_multiplicativity(cases: usize, seed: u64, budget: &Budget) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0u64;
    let mut done = 0usize;
    while done < cases {
        let t = rng.gen_range(1..=3usize);
        let q = random_poly(&mut rng, t, 4);
        // coprime moduli with the joint scan under budget
        let cap = match t {
            1 => 10_000u64,
            2 => 1_000,
            _ => 100,
        };
        let s1 = rng.gen_range(2..=cap.min(100));
        let s2 = rng.gen_range(2..=(cap / s1).max(2));
        if s1.gcd(&s2) != 1 || s1 * s2 > 10_000 {
            continue;
        }
        // joint brute-force scan must stay under the point budget
        if ((s1 * s2) as u128).pow(t as u32) > 1_000_000 {
            continue;
        }
        done += 1;
        let joint = rho_plus(&q, s1 * s2, RhoMethod::BruteForce, budget)?.value;
        let left = rho_plus(&q, s1, RhoMethod::BruteForce, budget)?.value;
        let right = rho_plus(&q, s2, RhoMethod::BruteForce, budget)?.value;
        if joint != left * right {
            violations += 1;
            if violations <= 3 {
                eprintln!("CRT failure: {q} at {s1} x {s2}: {joint} != {left} * {right}");
            }
        }
    }
    Ok(CheckReport::new(
        "crt-multiplicativity",
        format!("{cases} random (T, s1, s2)"),
        violations as f64,
        0.0,
        violations == 0,
    ))
}

/// Fixed panel of random primitive polynomials for the root bounds.
pub fn bound_check_panel(count: usize, seed: u64) -> Vec<MultiPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let t = rng.gen_range(1..=3usize);
            random_primitive_poly(&mut rng, t, 4)
        })
        .collect()
}

/// ϱ⁺(p) ≤ g·p^{t−1} across a polynomial panel and all primes ≤ p_max.
pub fn schwartz_zippel_panel(
    polys: &[MultiPoly],
    p_max: u64,
    budget: &Budget,
) -> Result<CheckReport> {
    let mut violations = 0usize;
    let mut max_ratio = 0.0f64;
    for q in polys {
        let rep = check_schwartz_zippel(q, p_max, budget)?;
        violations += rep.violations;
        max_ratio = max_ratio.max(rep.max_ratio);
    }
    let mut report = CheckReport::new(
        "root-bound-prime",
        format!("{} polynomials, p <= {p_max}", polys.len()),
        violations as f64,
        0.0,
        violations == 0,
    );
    report.ratio = Some(max_ratio);
    Ok(report)
}

/// The effective prime-power bound across the panel plus content-bearing
/// variants (scaled by 3), every (p, ν) with p^{νt} within budget.
pub fn stewart_panel(polys: &[MultiPoly], p_max: u64, budget: &Budget) -> Result<CheckReport> {
    let mut violations = 0usize;
    let mut cases = 0usize;
    // nu high enough that the point budget, not the loop bound, cuts off
    // every prime (2^20 already exceeds 10^6)
    for q in polys {
        let rep = check_stewart_bound(q, p_max, 20, budget)?;
        violations += rep.violations;
        cases += rep.rows.len();
        let scaled = q.scaled(&BigInt::from(3));
        let rep = check_stewart_bound(&scaled, p_max, 20, budget)?;
        violations += rep.violations;
        cases += rep.rows.len();
    }
    Ok(CheckReport::new(
        "root-bound-prime-power",
        format!("{} polynomials (incl. content variants), {cases} cases", polys.len()),
        violations as f64,
        0.0,
        violations == 0,
    ))
}

fn random_family(
    rng: &mut ChaCha8Rng,
    point_cap: u64,
) -> Option<(Vec<MultiPoly>, ModulusVector)> {
    let t = rng.gen_range(1..=2usize);
    let r = rng.gen_range(1..=2usize);
    let rs: Vec<MultiPoly> = (0..r).map(|_| random_poly(rng, t, 2)).collect();
    let choices = [1u64, 2, 3, 4, 5, 6, 8, 9, 12];
    let entries: Vec<u64> = (0..r)
        .map(|_| choices[rng.gen_range(0..choices.len())])
        .collect();
    let s = ModulusVector::new(entries).ok()?;
    let mut points: u128 = 1;
    for _ in 0..t {
        points = points.checked_mul(s.kernel_period() as u128)?;
    }
    let mut plus_points: u128 = 1;
    for _ in 0..t {
        plus_points = plus_points.checked_mul(s.product() as u128)?;
    }
    if points > point_cap as u128 || plus_points > point_cap as u128 {
        return None;
    }
    Some((rs, s))
}

/// Exact rational inequality ϱ#(s)/K(s)^t ≤ ϱ⁺(s)/lcm(s)^t on sampled
/// instances with K(s)^t ≤ point_cap.
pub fn sharp_vs_plus(samples: usize, point_cap: u64, seed: u64, budget: &Budget) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0u64;
    let mut done = 0usize;
    while done < samples {
        let Some((rs, s)) = random_family(&mut rng, point_cap) else {
            continue;
        };
        done += 1;
        let t = rs[0].num_vars() as u32;
        let (sharp, k) = rho_sharp(&rs, &s, budget)?;
        let plus = rho_vector_plus(&rs, &s, budget)?;
        let lhs = Ratio::new(
            sharp.value as u128,
            (k as u128).pow(t),
        );
        let rhs = Ratio::new(
            plus.value as u128,
            (s.plain_lcm() as u128).pow(t),
        );
        if lhs > rhs {
            violations += 1;
        }
    }
    Ok(CheckReport::new(
        "sharp-vs-plus-density",
        format!("{samples} sampled (R, s)"),
        violations as f64,
        0.0,
        violations == 0,
    ))
}

/// Exact rational identity between ϱ#(a)/K(a)^t and the period-scan
/// density, on sampled instances.
pub fn density_identity_panel(
    samples: usize,
    point_cap: u64,
    seed: u64,
    budget: &Budget,
) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0u64;
    let mut done = 0usize;
    while done < samples {
        let Some((rs, a)) = random_family(&mut rng, point_cap) else {
            continue;
        };
        done += 1;
        let rep = density_identity_check(&rs, &a, budget)?;
        if !rep.pass {
            violations += 1;
            if violations <= 3 {
                eprintln!(
                    "density mismatch: {} vs {} at a = {:?}",
                    rep.sharp_side,
                    rep.density_side,
                    a.entries()
                );
            }
        }
    }
    Ok(CheckReport::new(
        "density-identity",
        format!("{samples} sampled instances"),
        violations as f64,
        0.0,
        violations == 0,
    ))
}

/// For Q = X(X+l) with p | l: the sharp count at (p, 1) vanishes while the
/// plain root count of Q mod p is 1. Checked for every l in 2..=l_max.
pub fn linked_factor_vanishing(l_max: u64, budget: &Budget) -> Result<CheckReport> {
    let mut violations = 0u64;
    let mut cases = 0usize;
    for l in 2..=l_max {
        for (p, _) in factor::factorize_u64(l)? {
            cases += 1;
            let r1 = MultiPoly::parse("x1").unwrap();
            let r2 = MultiPoly::parse(&format!("x1 + {l}")).unwrap();
            let q = &r1 * &r2;
            let s = ModulusVector::new(vec![p, 1])?;
            let (sharp, _) = rho_sharp(&[r1, r2], &s, budget)?;
            let plus = rho_plus(&q, p, RhoMethod::BruteForce, budget)?.value;
            if sharp.value != 0 || plus != 1 {
                violations += 1;
            }
        }
    }
    Ok(CheckReport::new(
        "linked-factor-vanishing",
        format!("l in 2..={l_max}, {cases} (l, p) cases"),
        violations as f64,
        0.0,
        violations == 0,
    ))
}

// ---------------------------------------------------------------------------
// Mean-value checks
// ---------------------------------------------------------------------------

/// The desk value E(2) = 1 + Δ(2)/4 = 1.5 for the single-variable family
/// (X) weighted by Δ.
pub fn e_sum_desk_value(budget: &Budget) -> Result<CheckReport> {
    let fhat = LiftedFunction::lift(MultiArithmeticFunction::delta_function(), vec![vec![1]])?;
    let rs = [MultiPoly::parse("x1").unwrap()];
    let rows = e_sum_checkpointed(&rs, &fhat, &[1, 2], 1, budget)?;
    let pass = rows[0].1 == 1.0 && rows[1].1 == 1.5;
    Ok(CheckReport::new(
        "weighted-density-sum-desk",
        "R = (x1), F = delta, v = 2",
        rows[1].1,
        1.5,
        pass,
    ))
}

/// E_R is nondecreasing in the cutoff across a full grid.
pub fn e_sum_monotone(v_max: u64, budget: &Budget) -> Result<CheckReport> {
    let fhat = LiftedFunction::lift(MultiArithmeticFunction::delta_function(), vec![vec![1]])?;
    let rs = [MultiPoly::parse("x1").unwrap()];
    let grid: Vec<u64> = (1..=v_max).collect();
    let rows = e_sum_checkpointed(&rs, &fhat, &grid, 1, budget)?;
    let mut violations = 0u64;
    for w in rows.windows(2) {
        if w[1].1 < w[0].1 {
            violations += 1;
        }
    }
    Ok(CheckReport::new(
        "weighted-density-sum-monotone",
        format!("v <= {v_max}"),
        violations as f64,
        0.0,
        violations == 0,
    ))
}

/// Sampled class membership of Δ with its declared parameters.
pub fn delta_class_membership(samples: usize, seed: u64) -> CheckReport {
    let f = MultiArithmeticFunction::delta_function();
    let (a, b, eps) = f.class_params();
    let rep = class_membership_sample(&f, a, b, eps, samples, seed);
    CheckReport::new(
        "delta-class-membership",
        format!("{samples} coprime pairs"),
        rep.violations.len() as f64,
        0.0,
        rep.pass,
    )
}

// ---------------------------------------------------------------------------
// Power-sum checks
// ---------------------------------------------------------------------------

fn ones(n: usize) -> Vec<u64> {
    vec![1; n]
}

/// The pinned x = 8 record for exponents (2, 2).
pub fn v_record_desk_value(budget: &Budget) -> Result<CheckReport> {
    let sys = PowerSystem::new(vec![1, 1], vec![2, 2])?;
    let rec = v_counts(8, &sys, budget)?;
    let pass = (rec.v0, rec.v1, rec.v2, rec.v2_eq, rec.v2_neq) == (3, 4, 6, 4, 2);
    Ok(CheckReport::new(
        "v-record-desk-value",
        "x = 8, l = (2,2)",
        rec.v2 as f64,
        6.0,
        pass,
    ))
}

/// Cauchy–Schwarz and the exact split across the admissible catalog at
/// every grid point.
pub fn cs_and_split_catalog(x_grid: &[u64], budget: &Budget) -> Result<CheckReport> {
    let mut cases = 0usize;
    let mut failures = 0u64;
    for l in admissible_catalog() {
        let sys = PowerSystem::new(ones(l.len()), l.clone())?;
        for &x in x_grid {
            cases += 1;
            let rec = v_counts(x, &sys, budget)?;
            if check_cs_and_split(&rec).is_err() {
                failures += 1;
            }
        }
    }
    Ok(CheckReport::new(
        "cauchy-schwarz-split",
        format!("catalog x {x_grid:?}, {cases} cases"),
        failures as f64,
        0.0,
        failures == 0,
    ))
}

/// The equal-head bound over a grid for the two classical systems.
pub fn equal_head_bound_panel(x_grid: &[u64], budget: &Budget) -> Result<CheckReport> {
    let mut failures = 0u64;
    let mut cases = 0usize;
    for l in [vec![2u32, 4, 4], vec![2, 3, 6]] {
        let sys = PowerSystem::new(ones(l.len()), l)?;
        for &x in x_grid {
            cases += 1;
            if !check_equal_head_bound(x, &sys, budget)?.pass {
                failures += 1;
            }
        }
    }
    Ok(CheckReport::new(
        "equal-head-bound",
        format!("{cases} cases over x {x_grid:?}"),
        failures as f64,
        0.0,
        failures == 0,
    ))
}

/// Sharded counts equal the naive per-n representation oracle.
pub fn v_count_oracle_panel(x: u64, budget: &Budget) -> Result<CheckReport> {
    let systems = [
        (vec![1u64, 1], vec![2u32, 2]),
        (vec![1, 1, 1], vec![2, 4, 4]),
        (vec![1, 1, 1], vec![2, 3, 6]),
    ];
    let mut failures = 0u64;
    for (c, l) in systems {
        let sys = PowerSystem::new(c, l)?;
        let fast = v_counts(x, &sys, budget)?;
        let naive = v_counts_naive(x, &sys, budget)?;
        if fast != naive {
            failures += 1;
            continue;
        }
        let mut v0 = 0u64;
        let mut v1 = 0u64;
        let mut v2 = 0u128;
        for n in 1..=x {
            let r = rep_count(n, &sys);
            if r > 0 {
                v0 += 1;
                v1 += r;
                v2 += (r as u128) * (r as u128);
            }
        }
        if (fast.v0, fast.v1, fast.v2) != (v0, v1, v2) {
            failures += 1;
        }
    }
    Ok(CheckReport::new(
        "v-count-oracle",
        format!("3 systems at x = {x}"),
        failures as f64,
        0.0,
        failures == 0,
    ))
}

/// Catalog admissibility, the two documented rejections, and the two
/// extension identities.
pub fn admissibility_catalog_check() -> CheckReport {
    let mut failures = 0u64;
    for l in admissible_catalog() {
        if !admissible(&l).map(|r| r.admissible).unwrap_or(false) {
            failures += 1;
        }
    }
    match admissible(&[2, 3, 6, 6]) {
        Ok(rep) if !rep.admissible && rep.reasons.iter().any(|r| r.contains("2/3")) => {}
        _ => failures += 1,
    }
    match admissible(&[2, 4, 12, 12, 12]) {
        Ok(rep) if !rep.admissible && rep.s == 3 && rep.reasons.iter().any(|r| r.contains("< 16")) => {}
        _ => failures += 1,
    }
    if extend(&[2, 3, 6], ExtendMode::Plus).ok() != Some(vec![2, 3, 12, 12]) {
        failures += 1;
    }
    if extend(&[2, 3, 6], ExtendMode::Star).ok() != Some(vec![2, 3, 18, 18, 18]) {
        failures += 1;
    }
    CheckReport::new(
        "admissibility-catalog",
        "catalog + rejections + extensions",
        failures as f64,
        0.0,
        failures == 0,
    )
}

/// Growth table completes and every monitored ratio is finite.
pub fn growth_ratios_finite(x_max: u64, budget: &Budget) -> Result<CheckReport> {
    let sys = PowerSystem::new(vec![1, 1, 1], vec![2, 4, 4])?;
    let mut grid = Vec::new();
    let mut x = 1000u64;
    while x < x_max {
        grid.push(x);
        x *= 10;
    }
    grid.push(x_max);
    let rows = powersum::growth_table(&sys, &grid, budget)?;
    let bad = rows
        .iter()
        .filter(|r| !(r.r1.is_finite() && r.r2.is_finite() && r.r3.is_finite()))
        .count();
    Ok(CheckReport::new(
        "growth-ratios-finite",
        format!("l = (2,4,4), x up to {x_max}"),
        bad as f64,
        0.0,
        bad == 0,
    ))
}

// ---------------------------------------------------------------------------
// Suite driver
// ---------------------------------------------------------------------------

/// Panel sizes per budget preset.
struct Scale {
    delta_dual_limit: u64,
    submult_pairs: usize,
    submult_product: u64,
    mean_x: u64,
    crt_cases: usize,
    bound_polys: usize,
    bound_pmax: u64,
    sharp_samples: usize,
    density_samples: usize,
    linked_lmax: u64,
    esum_vmax: u64,
    vcount_x: u64,
    cs_xmax: u64,
    growth_xmax: u64,
}

impl Scale {
    fn for_budget(budget: &Budget) -> Scale {
        match budget.name {
            "small" => Scale {
                delta_dual_limit: 20_000,
                submult_pairs: 2_000,
                submult_product: 1_000_000_000,
                mean_x: 100_000,
                crt_cases: 30,
                bound_polys: 15,
                bound_pmax: 23,
                sharp_samples: 60,
                density_samples: 40,
                linked_lmax: 12,
                esum_vmax: 200,
                vcount_x: 2_000,
                cs_xmax: 10_000,
                growth_xmax: 10_000,
            },
            _ => Scale {
                delta_dual_limit: 100_000,
                submult_pairs: 10_000,
                submult_product: 1_000_000_000,
                mean_x: 1_000_000,
                crt_cases: 100,
                bound_polys: 50,
                bound_pmax: 53,
                sharp_samples: 200,
                density_samples: 100,
                linked_lmax: 30,
                esum_vmax: 1_000,
                vcount_x: 10_000,
                cs_xmax: 1_000_000,
                growth_xmax: 1_000_000,
            },
        }
    }
}

/// Run one suite (or all of them) at sizes scaled to the budget preset.
pub fn run_suite(suite: Suite, budget: &Budget) -> Result<Vec<CheckReport>> {
    let scale = Scale::for_budget(budget);
    let mut reports = Vec::new();
    if matches!(suite, Suite::Core | Suite::All) {
        reports.push(delta_dual_oracle(scale.delta_dual_limit));
        reports.push(delta_submultiplicative(
            scale.submult_pairs,
            scale.submult_product,
            42,
        ));
        reports.push(mean_sums_dual(scale.mean_x, 1e-10, budget)?);
        reports.push(mean_sums_desk_value(budget)?);
        reports.push(pair_count_delta_bound(budget)?);
    }
    if matches!(suite, Suite::Congruence | Suite::All) {
        reports.push(crt_multiplicativity(scale.crt_cases, 43, budget)?);
        let panel = bound_check_panel(scale.bound_polys, 44);
        reports.push(schwartz_zippel_panel(&panel, scale.bound_pmax, budget)?);
        reports.push(stewart_panel(&panel, scale.bound_pmax, budget)?);
        reports.push(sharp_vs_plus(scale.sharp_samples, 1_000_000, 45, budget)?);
        reports.push(density_identity_panel(
            scale.density_samples,
            1_000_000,
            46,
            budget,
        )?);
        reports.push(linked_factor_vanishing(scale.linked_lmax, budget)?);
    }
    if matches!(suite, Suite::MeanValue | Suite::All) {
        reports.push(e_sum_desk_value(budget)?);
        reports.push(e_sum_monotone(scale.esum_vmax, budget)?);
        reports.push(delta_class_membership(500, 47));
    }
    if matches!(suite, Suite::PowerSums | Suite::All) {
        reports.push(v_record_desk_value(budget)?);
        let grid: Vec<u64> = {
            let mut g = Vec::new();
            let mut x = 1000u64;
            while x <= scale.cs_xmax {
                g.push(x);
                x *= 10;
            }
            g
        };
        reports.push(cs_and_split_catalog(&grid, budget)?);
        reports.push(equal_head_bound_panel(&grid, budget)?);
        reports.push(v_count_oracle_panel(scale.vcount_x, budget)?);
        reports.push(admissibility_catalog_check());
        reports.push(growth_ratios_finite(scale.growth_xmax, budget)?);
    }
    Ok(reports)
}
