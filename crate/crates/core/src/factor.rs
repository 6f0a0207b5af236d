//! Exact factorization infrastructure.
//!
//! The central object is [`FactorTable`], a segment `[lo, hi]` of a
//! smallest-prime-factor sieve: for every n in the segment it records the
//! least prime p ≤ √hi dividing n, or a sentinel meaning that n itself is
//! prime (or 1). Tables can be persisted to versioned, checksummed cache
//! files, one file per segment.
//!
//! Bulk scans do not chase table entries one integer at a time; they use
//! [`for_each_factorization`], a rolling-division pass that produces the
//! complete factorization of every integer in a range in
//! O((hi − lo)·log log hi) after sieving the base primes once.

use crate::budget::Budget;
use crate::error::{Error, Result};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::sync::OnceLock;

/// A prime-power factorization, smallest prime first.
pub type Factorization = Vec<(u64, u32)>;

const SPF_SENTINEL: u32 = 0;
const CACHE_MAGIC: &[u8; 4] = b"SPFC";
const CACHE_VERSION: u32 = 1;

// ---------------------------------------------------------------------------
// Prime generation and primality testing
// ---------------------------------------------------------------------------

/// All primes ≤ n by a plain sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u32> {
    assert!(n <= u32::MAX as u64, "base prime sieve limited to u32 range");
    let n = n as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u32);
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
    }
    primes
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
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

/// Deterministic Miller–Rabin for the full 64-bit range.
///
/// The base set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37} is known to be
/// deterministic for all n < 3.3·10^24.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes in the half-open interval (lo, hi], by a segmented sieve.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    if hi <= lo {
        return Vec::new();
    }
    let base = primes_up_to(isqrt(hi));
    let len = (hi - lo) as usize;
    let mut composite = vec![false; len];
    for &p in &base {
        let p = p as u64;
        if p * p > hi {
            break;
        }
        let mut m = ((lo / p) + 1) * p;
        if m <= p {
            m = p * 2;
        }
        while m <= hi {
            composite[(m - lo - 1) as usize] = true;
            m += p;
        }
    }
    (lo + 1..=hi)
        .filter(|&n| n >= 2 && !composite[(n - lo - 1) as usize])
        .collect()
}

/// Floor of √n, exact.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).map_or(false, |sq| sq <= n) {
        r += 1;
    }
    r
}

/// Floor of the k-th root of n, exact.
pub fn integer_root(n: u64, k: u32) -> u64 {
    assert!(k >= 1);
    if k == 1 || n <= 1 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / k as f64).round() as u64;
    while r > 0 && pow_u128(r, k).map_or(true, |p| p > n as u128) {
        r -= 1;
    }
    while pow_u128(r + 1, k).map_or(false, |p| p <= n as u128) {
        r += 1;
    }
    r
}

/// Largest m with c·m^k ≤ x (exact root of the scaled bound).
pub fn scaled_root(x: u64, c: u64, k: u32) -> u64 {
    assert!(c >= 1 && k >= 1);
    if x < c {
        return 0;
    }
    let mut r = integer_root(x / c, k);
    while pow_u128(r + 1, k)
        .and_then(|p| p.checked_mul(c as u128))
        .map_or(false, |v| v <= x as u128)
    {
        r += 1;
    }
    r
}

/// base^exp in u128, None on overflow.
pub fn pow_u128(base: u64, exp: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u128)?;
    }
    Some(acc)
}

// ---------------------------------------------------------------------------
// Stand-alone factorization (lazily sieved base primes)
// ---------------------------------------------------------------------------

const STANDALONE_BASE_LIMIT: u64 = 1_000_000;

fn standalone_base() -> &'static [u32] {
    static BASE: OnceLock<Vec<u32>> = OnceLock::new();
    BASE.get_or_init(|| primes_up_to(STANDALONE_BASE_LIMIT))
}

/// Factorize any n ≤ 10^12 by trial division over a shared base sieve.
pub fn factorize_u64(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Domain("cannot factorize 0".into()));
    }
    if n > STANDALONE_BASE_LIMIT * STANDALONE_BASE_LIMIT {
        return Err(Error::Domain(format!(
            "stand-alone factorization limited to n <= 10^12, got {n}"
        )));
    }
    Ok(trial_factorize(n, standalone_base()))
}

fn trial_factorize(mut n: u64, base: &[u32]) -> Factorization {
    let mut fac = Vec::new();
    for &p in base {
        let p = p as u64;
        if p * p > n {
            break;
        }
        if n % p == 0 {
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            fac.push((p, e));
        }
    }
    if n > 1 {
        fac.push((n, 1));
    }
    fac
}

/// Number of divisors from a factorization.
pub fn tau(fac: &[(u64, u32)]) -> u64 {
    fac.iter().map(|&(_, e)| (e + 1) as u64).product()
}

/// Number of prime factors counted with multiplicity.
pub fn big_omega(fac: &[(u64, u32)]) -> u32 {
    fac.iter().map(|&(_, e)| e).sum()
}

/// Squarefree kernel: the product of the distinct primes dividing n.
pub fn squarefree_kernel(n: u64) -> Result<u64> {
    Ok(factorize_u64(n)?.iter().map(|&(p, _)| p).product())
}

/// p-adic valuation of n (n ≥ 1); v_p(0) is not represented.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    assert!(n > 0 && p > 1);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Write the divisors of the given factorization into `out`, sorted.
pub fn divisors_into(fac: &[(u64, u32)], out: &mut Vec<u64>) {
    out.clear();
    out.push(1);
    for &(p, e) in fac {
        let prev = out.len();
        let mut pw = 1u64;
        for _ in 0..e {
            pw *= p;
            for i in 0..prev {
                out.push(out[i] * pw);
            }
        }
    }
    out.sort_unstable();
}

/// The full, strictly increasing list of positive divisors of n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorList {
    pub n: u64,
    pub divisors: Vec<u64>,
}

impl DivisorList {
    pub fn of(n: u64) -> Result<Self> {
        let fac = factorize_u64(n)?;
        let mut divisors = Vec::new();
        divisors_into(&fac, &mut divisors);
        Ok(DivisorList { n, divisors })
    }

    pub fn tau(&self) -> u64 {
        self.divisors.len() as u64
    }
}

// ---------------------------------------------------------------------------
// Rolling-division factorization of a whole range
// ---------------------------------------------------------------------------

const ROLL_CHUNK: u64 = 1 << 16;

/// Call `f(n, factorization)` for every n in `[lo, hi]`, in increasing order.
///
/// `base` must contain every prime ≤ √hi. The factorization slice passed to
/// the callback is only valid for the duration of the call.
pub fn for_each_factorization<F>(lo: u64, hi: u64, base: &[u32], mut f: F)
where
    F: FnMut(u64, &[(u64, u32)]),
{
    assert!(lo >= 1 && lo <= hi);
    let mut rem: Vec<u64> = Vec::with_capacity(ROLL_CHUNK as usize);
    let mut fac: Vec<Factorization> = vec![Vec::new(); ROLL_CHUNK as usize];

    let mut clo = lo;
    while clo <= hi {
        let chi = (clo + ROLL_CHUNK - 1).min(hi);
        let len = (chi - clo + 1) as usize;
        rem.clear();
        rem.extend(clo..=chi);
        for slot in fac.iter_mut().take(len) {
            slot.clear();
        }
        for &p in base {
            let p = p as u64;
            if p * p > chi {
                break;
            }
            let mut m = clo.div_ceil(p) * p;
            while m <= chi {
                let i = (m - clo) as usize;
                let mut e = 0u32;
                while rem[i] % p == 0 {
                    rem[i] /= p;
                    e += 1;
                }
                fac[i].push((p, e));
                m += p;
            }
        }
        for i in 0..len {
            if rem[i] > 1 {
                fac[i].push((rem[i], 1));
            }
            f(clo + i as u64, &fac[i]);
        }
        clo = chi + 1;
    }
}

// ---------------------------------------------------------------------------
// FactorTable
// ---------------------------------------------------------------------------

/// One segment `[lo, hi]` of a smallest-prime-factor sieve.
///
/// Each entry stores the least prime p ≤ √hi dividing n, or a sentinel when
/// no such prime exists — in which case n is 1 or prime, since a composite
/// n ≤ hi always has a factor ≤ √hi.
#[derive(Debug, Clone)]
pub struct FactorTable {
    lo: u64,
    hi: u64,
    spf: Vec<u32>,
    base: Vec<u32>,
}

impl FactorTable {
    /// Sieve the segment `[lo, hi]`. The span must fit the segment budget.
    pub fn build(lo: u64, hi: u64, budget: &Budget) -> Result<Self> {
        if lo < 1 || lo > hi {
            return Err(Error::Precondition(format!(
                "factor table range [{lo}, {hi}] is empty or starts below 1"
            )));
        }
        let span = hi - lo + 1;
        if span > budget.segment_size {
            return Err(Error::Budget {
                op: "factor table segment".into(),
                needed: span as u128,
                limit: budget.segment_size,
                last_complete: Some(lo + budget.segment_size - 1),
            });
        }
        let base = primes_up_to(isqrt(hi));
        let mut spf = vec![SPF_SENTINEL; span as usize];
        for &p in &base {
            let p64 = p as u64;
            let mut m = lo.div_ceil(p64) * p64;
            while m <= hi {
                let slot = &mut spf[(m - lo) as usize];
                if *slot == SPF_SENTINEL {
                    *slot = p;
                }
                m += p64;
            }
        }
        Ok(FactorTable { lo, hi, spf, base })
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    /// Smallest prime factor of n. Returns None for n = 1 (the unit has no
    /// prime factor); for a prime n above the sieve bound this is n itself.
    pub fn spf(&self, n: u64) -> Option<u64> {
        assert!(
            n >= self.lo && n <= self.hi,
            "n = {n} outside table range [{}, {}]",
            self.lo,
            self.hi
        );
        match self.spf[(n - self.lo) as usize] {
            SPF_SENTINEL => {
                if n == 1 {
                    None
                } else {
                    Some(n)
                }
            }
            p => Some(p as u64),
        }
    }

    /// Complete factorization of an n inside the segment. The table entry
    /// gives the first prime; the cofactor is finished by trial division
    /// over the base primes, which never go past √n.
    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n < self.lo || n > self.hi {
            return Err(Error::Domain(format!(
                "n = {n} outside table range [{}, {}]",
                self.lo, self.hi
            )));
        }
        let mut fac = Vec::new();
        let mut m = n;
        if m == 1 {
            return Ok(fac);
        }
        let first = self.spf[(n - self.lo) as usize];
        if first == SPF_SENTINEL {
            fac.push((n, 1));
            return Ok(fac);
        }
        let start = first as u64;
        {
            let mut e = 0u32;
            while m % start == 0 {
                m /= start;
                e += 1;
            }
            fac.push((start, e));
        }
        for &p in self.base.iter().skip_while(|&&p| (p as u64) <= start) {
            let p = p as u64;
            if p * p > m {
                break;
            }
            if m % p == 0 {
                let mut e = 0u32;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                fac.push((p, e));
            }
        }
        if m > 1 {
            fac.push((m, 1));
        }
        Ok(fac)
    }

    /// Canonical cache file name for a segment.
    pub fn cache_file_name(lo: u64, hi: u64) -> String {
        format!("spf-{lo}-{hi}.seg")
    }

    /// Serialize the segment: magic, version, lo, hi, checksum, then the
    /// entries as little-endian u32.
    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let mut payload = Vec::with_capacity(self.spf.len() * 4);
        for &e in &self.spf {
            payload.extend_from_slice(&e.to_le_bytes());
        }
        let mut out = File::create(path)?;
        out.write_all(CACHE_MAGIC)?;
        out.write_all(&CACHE_VERSION.to_le_bytes())?;
        out.write_all(&self.lo.to_le_bytes())?;
        out.write_all(&self.hi.to_le_bytes())?;
        out.write_all(&fnv1a64(&payload).to_le_bytes())?;
        out.write_all(&payload)?;
        Ok(())
    }

    /// Read a cached segment, validating header and checksum.
    pub fn read_cache(path: &Path) -> Result<Self> {
        let mut data = Vec::new();
        File::open(path)?.read_to_end(&mut data)?;
        if data.len() < 32 {
            return Err(Error::Cache("truncated header".into()));
        }
        if &data[0..4] != CACHE_MAGIC {
            return Err(Error::Cache("bad magic".into()));
        }
        let version = u32::from_le_bytes(data[4..8].try_into().unwrap());
        if version != CACHE_VERSION {
            return Err(Error::Cache(format!("unsupported version {version}")));
        }
        let lo = u64::from_le_bytes(data[8..16].try_into().unwrap());
        let hi = u64::from_le_bytes(data[16..24].try_into().unwrap());
        let checksum = u64::from_le_bytes(data[24..32].try_into().unwrap());
        if lo < 1 || lo > hi {
            return Err(Error::Cache(format!("bad range [{lo}, {hi}]")));
        }
        let span = (hi - lo + 1) as usize;
        let payload = &data[32..];
        if payload.len() != span * 4 {
            return Err(Error::Cache(format!(
                "payload length {} does not match range [{lo}, {hi}]",
                payload.len()
            )));
        }
        if fnv1a64(payload) != checksum {
            return Err(Error::Cache("checksum mismatch".into()));
        }
        let spf = payload
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(FactorTable {
            lo,
            hi,
            spf,
            base: primes_up_to(isqrt(hi)),
        })
    }
}

fn fnv1a64(data: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in data {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spf_examples() {
        let b = Budget::small();
        let t = FactorTable::build(1, 20, &b).unwrap();
        assert_eq!(t.spf(12), Some(2));
        assert_eq!(t.spf(15), Some(3));
        assert_eq!(t.spf(2), Some(2));
        assert_eq!(t.spf(7), Some(7));
    }

    #[test]
    fn spf_unit_sentinel() {
        let b = Budget::small();
        let t = FactorTable::build(1, 1, &b).unwrap();
        assert_eq!(t.spf(1), None);
        assert_eq!(t.factorize(1).unwrap(), vec![]);
    }

    #[test]
    fn spf_prime_sentinel_in_segment() {
        let b = Budget::small();
        let t = FactorTable::build(90, 100, &b).unwrap();
        assert_eq!(t.spf(97), Some(97));
        assert_eq!(t.factorize(97).unwrap(), vec![(97, 1)]);
        assert_eq!(t.factorize(96).unwrap(), vec![(2, 5), (3, 1)]);
    }

    #[test]
    fn build_rejects_bad_ranges() {
        let b = Budget::small();
        assert!(FactorTable::build(5, 4, &b).is_err());
        assert!(FactorTable::build(0, 4, &b).is_err());
        let err = FactorTable::build(1, b.segment_size + 10, &b).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn table_reconstructs_and_factors_are_prime() {
        let b = Budget::small();
        for (lo, hi) in [(1u64, 3000u64), (1_000_000, 1_003_000)] {
            let t = FactorTable::build(lo, hi, &b).unwrap();
            for n in lo..=hi {
                let fac = t.factorize(n).unwrap();
                let mut prod = 1u64;
                for &(p, e) in &fac {
                    assert!(is_prime_u64(p), "recorded factor {p} of {n} not prime");
                    for _ in 0..e {
                        prod *= p;
                    }
                }
                assert_eq!(prod, n);
                // agree with independent trial division
                assert_eq!(fac, factorize_u64(n).unwrap());
            }
        }
    }

    #[test]
    fn rolling_pass_matches_trial_division() {
        let base = primes_up_to(isqrt(200_200));
        let mut seen = 0u64;
        for_each_factorization(199_900, 200_200, &base, |n, fac| {
            assert_eq!(fac, factorize_u64(n).unwrap().as_slice());
            seen += 1;
        });
        assert_eq!(seen, 301);
    }

    #[test]
    fn divisor_list_invariants() {
        for n in 1u64..=500 {
            let d = DivisorList::of(n).unwrap();
            assert_eq!(d.divisors[0], 1);
            assert_eq!(*d.divisors.last().unwrap(), n);
            assert!(d.divisors.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(d.tau(), tau(&factorize_u64(n).unwrap()));
            assert!(d.divisors.iter().all(|&v| n % v == 0));
        }
    }

    #[test]
    fn cache_round_trip_and_corruption() {
        let b = Budget::small();
        let t = FactorTable::build(50, 150, &b).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(FactorTable::cache_file_name(50, 150));
        t.write_cache(&path).unwrap();
        let u = FactorTable::read_cache(&path).unwrap();
        for n in 50..=150 {
            assert_eq!(t.spf(n), u.spf(n));
        }
        // flip a payload byte: checksum must catch it
        let mut bytes = std::fs::read(&path).unwrap();
        let last = bytes.len() - 1;
        bytes[last] ^= 0xff;
        std::fs::write(&path, &bytes).unwrap();
        assert!(matches!(
            FactorTable::read_cache(&path),
            Err(Error::Cache(_))
        ));
    }

    #[test]
    fn primality_and_roots() {
        let primes: Vec<u64> = primes_up_to(200).iter().map(|&p| p as u64).collect();
        for n in 2..=200u64 {
            assert_eq!(is_prime_u64(n), primes.contains(&n));
        }
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1_000_000_007u64 * 3));
        for n in [0u64, 1, 2, 3, 4, 8, 9, 26, 27, 28, 1 << 40] {
            let r = integer_root(n, 3);
            assert!(pow_u128(r, 3).unwrap() <= n as u128);
            assert!(pow_u128(r + 1, 3).unwrap() > n as u128);
        }
        assert_eq!(scaled_root(8, 1, 2), 2);
        assert_eq!(scaled_root(7, 2, 2), 1);
    }

    #[test]
    fn primes_in_range_matches_sieve() {
        let got = primes_in_range(10, 30);
        assert_eq!(got, vec![11, 13, 17, 19, 23, 29]);
        assert!(primes_in_range(30, 30).is_empty());
    }
}
