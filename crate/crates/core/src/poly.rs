//! Sparse multivariate polynomials over the integers.
//!
//! Coefficients are arbitrary-precision at rest; modular evaluation uses
//! u128 widening products, so any u64 modulus is handled without overflow.
//! Exponent vectors are stored densely (at most [`MAX_VARS`] variables).
//!
//! The textual format is `<coeff> x1^e1 x2^e2 ...` terms joined by `+`/`-`,
//! e.g. `x1^2 + 2 x1 x2 - 3`. Printing is canonical: terms appear in
//! descending lexicographic order of their exponent vectors.

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Hard cap on the number of variables.
pub const MAX_VARS: usize = 16;

/// A sparse polynomial in `vars` variables with integer coefficients.
/// No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

/// Degree, content and primitivity of a nonzero polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyInspection {
    pub degree: u32,
    pub content: BigUint,
    pub primitive: bool,
}

impl MultiPoly {
    pub fn zero(vars: usize) -> Self {
        assert!(vars <= MAX_VARS, "at most {MAX_VARS} variables");
        MultiPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars], c.into());
        p
    }

    /// The monomial x_{index} (0-based index).
    pub fn variable(vars: usize, index: usize) -> Self {
        assert!(index < vars);
        let mut exps = vec![0u32; vars];
        exps[index] = 1;
        let mut p = Self::zero(vars);
        p.add_term(exps, BigInt::one());
        p
    }

    pub fn from_terms<I>(vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        if vars > MAX_VARS {
            return Err(Error::Precondition(format!(
                "at most {MAX_VARS} variables, got {vars}"
            )));
        }
        let mut p = Self::zero(vars);
        for (exps, coeff) in terms {
            if exps.len() != vars {
                return Err(Error::Precondition(format!(
                    "exponent vector length {} != vars {vars}",
                    exps.len()
                )));
            }
            p.add_term(exps, coeff);
        }
        Ok(p)
    }

    fn add_term(&mut self, exps: Vec<u32>, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// Reinterpret in `vars` variables (may only grow; exponent vectors are
    /// padded with zeros on the right).
    pub fn with_vars(&self, vars: usize) -> Result<Self> {
        if vars < self.vars {
            return Err(Error::Precondition(format!(
                "cannot shrink from {} to {vars} variables",
                self.vars
            )));
        }
        Self::from_terms(
            vars,
            self.terms.iter().map(|(e, c)| {
                let mut exps = e.clone();
                exps.resize(vars, 0);
                (exps, c.clone())
            }),
        )
    }

    /// Total degree; None for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).max()
    }

    /// Content: the (positive) gcd of all coefficients; 0 for the zero
    /// polynomial.
    pub fn content(&self) -> BigUint {
        let mut g = BigUint::zero();
        for c in self.terms.values() {
            g = g.gcd(c.magnitude());
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Degree, content and primitivity in one report. The zero polynomial
    /// has no degree and is rejected.
    pub fn inspect(&self) -> Result<PolyInspection> {
        let degree = self
            .total_degree()
            .ok_or_else(|| Error::Domain("degree of the zero polynomial is undefined".into()))?;
        let content = self.content();
        let primitive = content.is_one();
        Ok(PolyInspection {
            degree,
            content,
            primitive,
        })
    }

    /// Divide by the content. Errors on the zero polynomial.
    pub fn primitive_part(&self) -> Result<Self> {
        let c = self.content();
        if c.is_zero() {
            return Err(Error::Domain(
                "primitive part of the zero polynomial is undefined".into(),
            ));
        }
        let cb = BigInt::from(c);
        Ok(MultiPoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v / &cb))
                .collect(),
        })
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.vars);
        }
        MultiPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * k)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.vars, 1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// T(point) mod m, reduced throughout. m must be ≥ 1.
    pub fn eval_mod(&self, point: &[i64], m: u64) -> Result<u64> {
        if m == 0 {
            return Err(Error::Domain("modulus 0".into()));
        }
        if point.len() != self.vars {
            return Err(Error::Precondition(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.vars
            )));
        }
        if m == 1 {
            return Ok(0);
        }
        let mb = BigInt::from(m);
        let reduced: Vec<u64> = point
            .iter()
            .map(|&x| (((x as i128 % m as i128) + m as i128) % m as i128) as u64)
            .collect();
        let mut acc = 0u64;
        for (exps, coeff) in &self.terms {
            let c = coeff.mod_floor(&mb).to_u64().expect("residue fits u64");
            let mut term = c;
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = mul_mod(term, pow_mod(reduced[i], e as u64, m), m);
                }
            }
            acc = ((acc as u128 + term as u128) % m as u128) as u64;
        }
        Ok(acc)
    }

    /// Exact integer evaluation.
    pub fn eval_exact(&self, point: &[i64]) -> BigInt {
        assert_eq!(point.len(), self.vars);
        let mut acc = BigInt::zero();
        for (exps, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    term *= point[i];
                }
            }
            acc += term;
        }
        acc
    }

    /// Exact evaluation in i128, None on overflow.
    pub fn eval_i128(&self, point: &[i64]) -> Option<i128> {
        assert_eq!(point.len(), self.vars);
        let mut acc: i128 = 0;
        for (exps, coeff) in &self.terms {
            let mut term: i128 = coeff.to_i128()?;
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    term = term.checked_mul(point[i] as i128)?;
                }
            }
            acc = acc.checked_add(term)?;
        }
        Some(acc)
    }

    /// Parse the textual format, inferring the variable count from the
    /// largest index that appears.
    pub fn parse(input: &str) -> Result<Self> {
        let raw = parse_raw_terms(input)?;
        let vars = raw
            .iter()
            .flat_map(|t| t.factors.iter().map(|&(idx, _)| idx))
            .max()
            .unwrap_or(0);
        if vars > MAX_VARS {
            return Err(Error::Precondition(format!(
                "variable index exceeds the {MAX_VARS}-variable cap"
            )));
        }
        let mut p = Self::zero(vars);
        for t in raw {
            let mut exps = vec![0u32; vars];
            for (idx, e) in t.factors {
                exps[idx - 1] = exps[idx - 1]
                    .checked_add(e)
                    .ok_or_else(|| Error::Overflow("exponent".into()))?;
            }
            p.add_term(exps, t.coeff);
        }
        Ok(p)
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

impl std::ops::Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, rhs.vars, "variable counts differ");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, rhs.vars, "variable counts differ");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl std::ops::Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, rhs.vars, "variable counts differ");
        let mut out = MultiPoly::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(&x, &y)| x + y).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }
}

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exps, coeff)) in self.terms.iter().rev().enumerate() {
            let negative = coeff.is_negative();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = coeff.magnitude();
            let constant = exps.iter().all(|&e| e == 0);
            let mut wrote = false;
            if constant || !mag.is_one() {
                write!(f, "{mag}")?;
                wrote = true;
            }
            for (idx, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if wrote {
                    write!(f, " ")?;
                }
                if e == 1 {
                    write!(f, "x{}", idx + 1)?;
                } else {
                    write!(f, "x{}^{}", idx + 1, e)?;
                }
                wrote = true;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for MultiPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        MultiPoly::parse(s)
    }
}

struct RawTerm {
    coeff: BigInt,
    factors: Vec<(usize, u32)>,
}

fn parse_raw_terms(input: &str) -> Result<Vec<RawTerm>> {
    let bytes: Vec<char> = input.chars().collect();
    let n = bytes.len();
    let mut i = 0usize;
    let mut terms = Vec::new();

    let err =
        |msg: &str, pos: usize| Error::Precondition(format!("polynomial parse: {msg} at {pos}"));

    fn skip_ws(bytes: &[char], i: &mut usize) {
        while *i < bytes.len() && (bytes[*i].is_whitespace() || bytes[*i] == '*') {
            *i += 1;
        }
    }

    fn read_number(bytes: &[char], i: &mut usize) -> Option<u128> {
        let start = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        if *i == start {
            return None;
        }
        bytes[start..*i].iter().collect::<String>().parse().ok()
    }

    skip_ws(&bytes, &mut i);
    if i == n {
        return Err(err("empty input", 0));
    }
    while i < n {
        let mut sign = 1i32;
        if bytes[i] == '+' {
            i += 1;
        } else if bytes[i] == '-' {
            sign = -1;
            i += 1;
        } else if !terms.is_empty() {
            return Err(err("expected '+' or '-' between terms", i));
        }
        skip_ws(&bytes, &mut i);
        let mut coeff: Option<BigInt> = None;
        let mut factors: Vec<(usize, u32)> = Vec::new();
        let mut saw_anything = false;
        loop {
            skip_ws(&bytes, &mut i);
            if i >= n || bytes[i] == '+' || bytes[i] == '-' {
                break;
            }
            if bytes[i].is_ascii_digit() {
                let v = read_number(&bytes, &mut i).ok_or_else(|| err("bad integer", i))?;
                let vb = BigInt::from(v);
                coeff = Some(match coeff {
                    None => vb,
                    Some(c) => c * vb,
                });
                saw_anything = true;
            } else if bytes[i] == 'x' || bytes[i] == 'X' {
                i += 1;
                let idx =
                    read_number(&bytes, &mut i).ok_or_else(|| err("variable needs an index", i))? as usize;
                if idx == 0 {
                    return Err(err("variable indices start at 1", i));
                }
                let mut e = 1u32;
                if i < n && bytes[i] == '^' {
                    i += 1;
                    e = read_number(&bytes, &mut i)
                        .ok_or_else(|| err("exponent expected after '^'", i))?
                        as u32;
                }
                factors.push((idx, e));
                saw_anything = true;
            } else {
                return Err(err(&format!("unexpected character '{}'", bytes[i]), i));
            }
        }
        if !saw_anything {
            return Err(err("empty term", i));
        }
        let coeff = coeff.unwrap_or_else(BigInt::one) * sign;
        terms.push(RawTerm { coeff, factors });
        skip_ws(&bytes, &mut i);
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(s).unwrap()
    }

    #[test]
    fn eval_mod_examples() {
        assert_eq!(p("x1 x2").eval_mod(&[3, 4], 5).unwrap(), 2);
        assert_eq!(p("x1^2 - 1").eval_mod(&[7], 8).unwrap(), 0);
        assert_eq!(p("3 x1^4 + 7").eval_mod(&[9], 1).unwrap(), 0);
        assert!(p("x1").eval_mod(&[1], 0).is_err());
    }

    #[test]
    fn eval_mod_negative_points_and_wide_moduli() {
        let q = p("x1^3 - 2 x1 + 5");
        let m = (1u64 << 63) + 9;
        let exact = q.eval_exact(&[-4]);
        let expected = exact.mod_floor(&BigInt::from(m)).to_u64().unwrap();
        assert_eq!(q.eval_mod(&[-4], m).unwrap(), expected);
    }

    #[test]
    fn inspect_examples() {
        let r = p("2 x1 + 4 x2").inspect().unwrap();
        assert_eq!((r.degree, r.content.to_u64().unwrap(), r.primitive), (1, 2, false));
        let r = p("x1^3 x2 - 1").inspect().unwrap();
        assert_eq!((r.degree, r.content.to_u64().unwrap(), r.primitive), (4, 1, true));
        let r = p("6").inspect().unwrap();
        assert_eq!((r.degree, r.content.to_u64().unwrap(), r.primitive), (0, 6, false));
        assert!(MultiPoly::zero(2).inspect().is_err());
    }

    #[test]
    fn display_and_parse_round_trip() {
        for s in ["x1^2 - 1", "2 x1 x2 + 3 x2^2 - 7", "0", "5", "-x1 + x2"] {
            let q = p(s);
            assert_eq!(MultiPoly::parse(&q.to_string()).unwrap(), q, "{s}");
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(MultiPoly::parse("").is_err());
        assert!(MultiPoly::parse("x0").is_err());
        assert!(MultiPoly::parse("x1 x2 y").is_err());
        assert!(MultiPoly::parse("x17").is_err()); // above the variable cap
    }

    #[test]
    fn arithmetic_identities() {
        let a = p("x1^2 - 1");
        let b = p("x1 + 1");
        let c = p("x1 - 1");
        assert_eq!(&b * &c, a);
        assert_eq!(&a - &a, MultiPoly::zero(1));
        assert_eq!(b.pow(2), p("x1^2 + 2 x1 + 1"));
    }

    proptest! {
        #[test]
        fn round_trip_random(terms in proptest::collection::vec(
            (proptest::collection::vec(0u32..4, 3), -9i64..=9),
            1..6,
        )) {
            let q = MultiPoly::from_terms(
                3,
                terms.into_iter().map(|(e, c)| (e, BigInt::from(c))),
            ).unwrap();
            // the printed form may not mention trailing variables
            let parsed = MultiPoly::parse(&q.to_string()).unwrap().with_vars(3).unwrap();
            prop_assert_eq!(parsed, q);
        }

        #[test]
        fn eval_mod_is_compatible_with_crt(
            terms in proptest::collection::vec(
                (proptest::collection::vec(0u32..4, 2), -9i64..=9),
                1..5,
            ),
            x in -50i64..=50,
            y in -50i64..=50,
        ) {
            let q = MultiPoly::from_terms(
                2,
                terms.into_iter().map(|(e, c)| (e, BigInt::from(c))),
            ).unwrap();
            // coprime moduli
            let (m1, m2) = (8u64, 9u64);
            let joint = q.eval_mod(&[x, y], m1 * m2).unwrap();
            prop_assert_eq!(joint % m1, q.eval_mod(&[x, y], m1).unwrap());
            prop_assert_eq!(joint % m2, q.eval_mod(&[x, y], m2).unwrap());
        }

        #[test]
        fn content_scales_linearly(
            terms in proptest::collection::vec(
                (proptest::collection::vec(0u32..4, 2), -9i64..=9),
                1..5,
            ),
            k in prop_oneof![-12i64..=-1, 1i64..=12],
        ) {
            let q = MultiPoly::from_terms(
                2,
                terms.into_iter().map(|(e, c)| (e, BigInt::from(c))),
            ).unwrap();
            prop_assume!(!q.is_zero());
            let scaled = q.scaled(&BigInt::from(k));
            prop_assert_eq!(
                scaled.content(),
                q.content() * BigUint::from(k.unsigned_abs())
            );
        }
    }
}
