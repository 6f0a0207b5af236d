//! Verified factored systems: a family {Q_j} together with distinct factors
//! {R_h} and an exponent matrix γ such that Q_j = ∏_h R_h^{γ_jh} exactly.
//!
//! Factorizations are inputs, never computed here: [`verify_factored_form`]
//! re-multiplies everything with exact sparse arithmetic and rejects any
//! mismatch. Irreducibility of the R_h cannot be checked this way and is
//! recorded as asserted by the caller.

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use num_bigint::BigInt;
use num_integer::Integer;

/// A family {Q_j} with factors {R_h} and exponent matrix γ (k rows, r
/// columns).
#[derive(Debug, Clone)]
pub struct FactoredSystem {
    qs: Vec<MultiPoly>,
    rs: Vec<MultiPoly>,
    gamma: Vec<Vec<u32>>,
}

/// Outcome of [`verify_factored_form`]. Exact identity failures surface as
/// errors before a report is built; the report records the remaining
/// checks.
#[derive(Debug, Clone)]
pub struct FactoredFormReport {
    /// Primitivity of each Q_j.
    pub primitive: Vec<bool>,
    /// Σ_h γ_h · deg R_h equals deg ∏ Q_j.
    pub degree_consistent: bool,
    /// Irreducibility of the R_h is not decided here.
    pub irreducibility: &'static str,
}

impl FactoredFormReport {
    pub fn pass(&self) -> bool {
        self.degree_consistent && self.primitive.iter().all(|&p| p)
    }
}

impl FactoredSystem {
    /// Shape-check a system. Exact product identities are the business of
    /// [`verify_factored_form`].
    pub fn new(qs: Vec<MultiPoly>, rs: Vec<MultiPoly>, gamma: Vec<Vec<u32>>) -> Result<Self> {
        if qs.is_empty() || rs.is_empty() {
            return Err(Error::Precondition("empty polynomial family".into()));
        }
        let vars = qs[0].num_vars();
        if qs.iter().chain(rs.iter()).any(|p| p.num_vars() != vars) {
            return Err(Error::Precondition(
                "all polynomials must share one variable count".into(),
            ));
        }
        if qs.iter().chain(rs.iter()).any(|p| p.is_zero()) {
            return Err(Error::Precondition("zero polynomial in system".into()));
        }
        if gamma.len() != qs.len() || gamma.iter().any(|row| row.len() != rs.len()) {
            return Err(Error::Precondition(format!(
                "exponent matrix must be {} x {}",
                qs.len(),
                rs.len()
            )));
        }
        for i in 0..rs.len() {
            for j in i + 1..rs.len() {
                if rs[i] == rs[j] {
                    return Err(Error::Precondition(format!(
                        "factors R[{}] and R[{}] are identical",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(FactoredSystem { qs, rs, gamma })
    }

    pub fn qs(&self) -> &[MultiPoly] {
        &self.qs
    }

    pub fn rs(&self) -> &[MultiPoly] {
        &self.rs
    }

    pub fn gamma(&self) -> &[Vec<u32>] {
        &self.gamma
    }

    pub fn k(&self) -> usize {
        self.qs.len()
    }

    pub fn r(&self) -> usize {
        self.rs.len()
    }

    pub fn vars(&self) -> usize {
        self.qs[0].num_vars()
    }

    /// Column sums γ_h = Σ_j γ_jh.
    pub fn gamma_col_sums(&self) -> Vec<u32> {
        let mut sums = vec![0u32; self.r()];
        for row in &self.gamma {
            for (h, &g) in row.iter().enumerate() {
                sums[h] += g;
            }
        }
        sums
    }

    /// The product polynomial Q = ∏_j Q_j.
    pub fn product(&self) -> MultiPoly {
        let mut acc = MultiPoly::constant(self.vars(), 1);
        for q in &self.qs {
            acc = &acc * q;
        }
        acc
    }

    /// Total degree of the product.
    pub fn degree(&self) -> u32 {
        self.product().total_degree().expect("nonzero product")
    }
}

/// Build the difference-of-power-sums polynomial
///
///   Q(X_1..X_t, Y_1..Y_t) = Σ c_j X_j^{l_j} − Σ c_j Y_j^{l_j}
///
/// in 2t variables, after dividing the c_j by their gcd. The result is a
/// one-factor system (k = r = 1, γ = [[1]]); irreducibility of Q holds for
/// coprime coefficients and is asserted, not re-proven.
pub fn build_power_system_poly(c: &[u64], l: &[u32]) -> Result<FactoredSystem> {
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
    let t = c.len();
    if 2 * t > crate::poly::MAX_VARS {
        return Err(Error::Precondition(format!(
            "2t = {} variables exceeds the cap",
            2 * t
        )));
    }
    let g = c.iter().fold(0u64, |acc, &v| acc.gcd(&v));
    let mut terms = Vec::with_capacity(2 * t);
    for (j, (&cj, &lj)) in c.iter().zip(l).enumerate() {
        let cj = cj / g;
        let mut ex = vec![0u32; 2 * t];
        ex[j] = lj;
        terms.push((ex, BigInt::from(cj)));
        let mut ey = vec![0u32; 2 * t];
        ey[t + j] = lj;
        terms.push((ey, -BigInt::from(cj)));
    }
    let q = MultiPoly::from_terms(2 * t, terms)?;
    FactoredSystem::new(vec![q.clone()], vec![q], vec![vec![1]])
}

/// Re-multiply and compare: each Q_j against ∏_h R_h^{γ_jh}, and ∏ Q_j
/// against ∏_h R_h^{γ_h}. Any failed identity is an error naming the
/// offending component; primitivity results go into the report.
pub fn verify_factored_form(sys: &FactoredSystem) -> Result<FactoredFormReport> {
    let vars = sys.vars();
    for (j, q) in sys.qs().iter().enumerate() {
        let mut prod = MultiPoly::constant(vars, 1);
        for (h, r) in sys.rs().iter().enumerate() {
            let e = sys.gamma()[j][h];
            if e > 0 {
                prod = &prod * &r.pow(e);
            }
        }
        if &prod != q {
            return Err(Error::Mismatch {
                which: format!("Q[{}]", j + 1),
                detail: format!("expected {q}, factored form multiplies to {prod}"),
            });
        }
    }
    let q_total = sys.product();
    let mut r_total = MultiPoly::constant(vars, 1);
    for (h, (r, &gh)) in sys.rs().iter().zip(&sys.gamma_col_sums()).enumerate() {
        if gh > 0 {
            r_total = &r_total * &r.pow(gh);
        }
        let _ = h;
    }
    if r_total != q_total {
        return Err(Error::Mismatch {
            which: "product".into(),
            detail: format!("prod Q = {q_total} but prod R^gamma = {r_total}"),
        });
    }
    let g = q_total.total_degree().expect("nonzero product");
    let degree_sum: u32 = sys
        .rs()
        .iter()
        .zip(&sys.gamma_col_sums())
        .map(|(r, &gh)| gh * r.total_degree().expect("nonzero factor"))
        .sum();
    Ok(FactoredFormReport {
        primitive: sys.qs().iter().map(|q| q.is_primitive()).collect(),
        degree_consistent: degree_sum == g,
        irreducibility: "asserted by caller",
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(s).unwrap()
    }

    #[test]
    fn power_system_examples() {
        let sys = build_power_system_poly(&[1, 1], &[2, 2]).unwrap();
        assert_eq!(sys.product(), p("x1^2 + x2^2 - x3^2 - x4^2"));
        assert_eq!(sys.degree(), 2);

        // coefficients are reduced by their gcd
        let sys = build_power_system_poly(&[2, 4], &[3, 3]).unwrap();
        assert_eq!(sys.product(), p("x1^3 + 2 x2^3 - x3^3 - 2 x4^3"));

        let sys = build_power_system_poly(&[1], &[4]).unwrap();
        assert_eq!(sys.product(), p("x1^4 - x2^4"));
        assert_eq!(sys.degree(), 4);

        assert!(build_power_system_poly(&[], &[]).is_err());
        assert!(build_power_system_poly(&[1, 2], &[3]).is_err());
    }

    #[test]
    fn verify_passes_on_true_factorizations() {
        let sys = FactoredSystem::new(
            vec![p("x1^2 + 2 x1")],
            vec![p("x1"), p("x1 + 2")],
            vec![vec![1, 1]],
        )
        .unwrap();
        let report = verify_factored_form(&sys).unwrap();
        assert!(report.pass());
        assert_eq!(report.irreducibility, "asserted by caller");

        let sys = FactoredSystem::new(
            vec![p("x1^2 - 1")],
            vec![p("x1 - 1"), p("x1 + 1")],
            vec![vec![1, 1]],
        )
        .unwrap();
        assert!(verify_factored_form(&sys).unwrap().pass());
    }

    #[test]
    fn verify_rejects_wrong_factorization() {
        let sys = FactoredSystem::new(
            vec![p("x1^2 - 1")],
            vec![p("x1 - 1")],
            vec![vec![2]],
        )
        .unwrap();
        match verify_factored_form(&sys) {
            Err(Error::Mismatch { which, .. }) => assert_eq!(which, "Q[1]"),
            other => panic!("expected mismatch, got {other:?}"),
        }
    }

    #[test]
    fn verify_flags_imprimitive_components() {
        let sys = FactoredSystem::new(vec![p("2 x1 + 2")], vec![p("2 x1 + 2")], vec![vec![1]])
            .unwrap();
        let report = verify_factored_form(&sys).unwrap();
        assert!(!report.pass());
        assert_eq!(report.primitive, vec![false]);
    }

    #[test]
    fn verify_every_built_power_system() {
        for (c, l) in [
            (vec![1u64, 1], vec![2u32, 2]),
            (vec![2, 4], vec![3, 3]),
            (vec![1], vec![4]),
            (vec![3, 5, 15], vec![2, 4, 4]),
        ] {
            let sys = build_power_system_poly(&c, &l).unwrap();
            assert!(verify_factored_form(&sys).unwrap().pass(), "{c:?} {l:?}");
        }
    }

    #[test]
    fn distinct_factor_requirement() {
        assert!(FactoredSystem::new(
            vec![p("x1^2")],
            vec![p("x1"), p("x1")],
            vec![vec![1, 1]],
        )
        .is_err());
    }
}
