//! Integer factorization: trial division to 10^6, then Pollard-Brent rho
//! under an iteration budget.
//!
//! Primality below 3.3e24 is decided by Miller-Rabin with the first thirteen
//! prime bases (a deterministic test in that range). Larger cofactors go
//! through Baillie-PSW and are reported as uncertified.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub const TRIAL_DIVISION_LIMIT: u32 = 1_000_000;
pub const DEFAULT_RHO_STEPS: u64 = 2_000_000;
const RHO_SEED: u64 = 0x5eed_f00d;

/// Signed prime factorization `sign * prod p^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(BigUint, u32)>,
    /// False when some factor exceeds the deterministic Miller-Rabin range
    /// and was only shown to be a Baillie-PSW probable prime.
    pub certified: bool,
}

impl Factorization {
    pub fn product(&self) -> BigInt {
        let mut acc = BigUint::one();
        for (p, e) in &self.factors {
            acc *= num_traits::pow(p.clone(), *e as usize);
        }
        if self.sign < 0 {
            -BigInt::from(acc)
        } else {
            BigInt::from(acc)
        }
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_DIVISION_LIMIT as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        sieve
            .iter()
            .enumerate()
            .filter_map(|(k, &is_p)| is_p.then_some(k as u32))
            .collect()
    })
}

/// Factor a nonzero integer with the default rho budget.
pub fn factor(n: &BigInt) -> Result<Factorization> {
    factor_with_budget(n, DEFAULT_RHO_STEPS)
}

pub fn factor_with_budget(n: &BigInt, rho_steps: u64) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::domain("factor(0) is undefined"));
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut m = n.magnitude().clone();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();

    for &p in small_primes() {
        if m.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = m.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            factors.push((pb, e));
        }
    }

    let mut certified = true;
    if !m.is_one() {
        let mut stack = vec![m];
        let mut rng = ChaCha8Rng::seed_from_u64(RHO_SEED);
        let mut steps_left = rho_steps;
        while let Some(c) = stack.pop() {
            match primality(&c) {
                Primality::Prime => push_factor(&mut factors, c),
                Primality::ProbablePrime => {
                    certified = false;
                    push_factor(&mut factors, c);
                }
                Primality::Composite => {
                    if let Some(r) = perfect_square_root(&c) {
                        stack.push(r.clone());
                        stack.push(r);
                        continue;
                    }
                    let d = pollard_brent(&c, &mut rng, &mut steps_left).ok_or_else(|| {
                        Error::PartialFactorization {
                            cofactor: c.to_string(),
                        }
                    })?;
                    let other = &c / &d;
                    stack.push(d);
                    stack.push(other);
                }
            }
        }
    }
    factors.sort();
    // merge duplicates produced by the rho stack
    let mut merged: Vec<(BigUint, u32)> = Vec::with_capacity(factors.len());
    for (p, e) in factors {
        match merged.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => merged.push((p, e)),
        }
    }
    Ok(Factorization {
        sign,
        factors: merged,
        certified,
    })
}

fn push_factor(factors: &mut Vec<(BigUint, u32)>, p: BigUint) {
    factors.push((p, 1));
}

fn perfect_square_root(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primality {
    Prime,
    /// Passed Baillie-PSW beyond the deterministic Miller-Rabin range.
    ProbablePrime,
    Composite,
}

/// 3.317044064679887385961981 * 10^24, the bound for the 13-base MR test.
fn deterministic_mr_bound() -> &'static BigUint {
    static B: OnceLock<BigUint> = OnceLock::new();
    B.get_or_init(|| "3317044064679887385961981".parse().unwrap())
}

const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

pub fn primality(n: &BigUint) -> Primality {
    if n < &BigUint::from(2u32) {
        return Primality::Composite;
    }
    if let Some(small) = n.to_u32() {
        if small <= TRIAL_DIVISION_LIMIT {
            return if small_primes().binary_search(&small).is_ok() {
                Primality::Prime
            } else {
                Primality::Composite
            };
        }
    }
    for &p in &small_primes()[..64] {
        if (n % p).is_zero() {
            return Primality::Composite;
        }
    }
    if n < deterministic_mr_bound() {
        let all = MR_BASES
            .iter()
            .all(|&a| miller_rabin_round(n, &BigUint::from(a)));
        return if all {
            Primality::Prime
        } else {
            Primality::Composite
        };
    }
    if MR_BASES
        .iter()
        .all(|&a| miller_rabin_round(n, &BigUint::from(a)))
        && strong_lucas(n)
    {
        Primality::ProbablePrime
    } else {
        Primality::Composite
    }
}

pub fn is_prime(n: &BigUint) -> bool {
    primality(n) != Primality::Composite
}

fn miller_rabin_round(n: &BigUint, a: &BigUint) -> bool {
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    let a = a % n;
    if a.is_zero() {
        return true;
    }
    let mut x = a.modpow(&d, n);
    if x == one || x == n1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n1 {
            return true;
        }
        if x == one {
            return false;
        }
    }
    false
}

fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    let n = BigInt::from(n.clone());
    let mut a = a.mod_floor(&n);
    let mut n = n;
    let mut result = 1;
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Strong Lucas probable-prime test with Selfridge parameters.
fn strong_lucas(n: &BigUint) -> bool {
    if perfect_square_root(n).is_some() {
        return false;
    }
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, n) {
            -1 => break,
            0
                if d.magnitude() != n => {
                    return false;
                }
            _ => {}
        }
        d = if d.is_positive() { -d - 2 } else { -d + 2 };
    }
    let nn = BigInt::from(n.clone());
    let q: BigInt = (BigInt::one() - &d) / BigInt::from(4);
    let md = |x: BigInt| x.mod_floor(&nn);
    let half = |x: BigInt| {
        let x = md(x);
        if x.is_odd() {
            (x + &nn) >> 1
        } else {
            x >> 1
        }
    };
    let np1: BigUint = n + 1u32;
    let s = np1.trailing_zeros().unwrap_or(0);
    let k = &np1 >> s;
    let bits = k.bits();
    let mut u = BigInt::one();
    let mut v = BigInt::one();
    let mut qk = md(q.clone());
    for i in (0..bits - 1).rev() {
        u = md(&u * &v);
        v = md(&v * &v - (&qk << 1));
        qk = md(&qk * &qk);
        if k.bit(i) {
            let u2 = half(&u + &v);
            let v2 = half(&d * &u + &v);
            u = u2;
            v = v2;
            qk = md(&qk * &q);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = md(&v * &v - (&qk << 1));
        qk = md(&qk * &qk);
        if v.is_zero() {
            return true;
        }
    }
    false
}

/// Brent's variant of Pollard rho. Returns a nontrivial divisor or `None`
/// when the step budget runs out.
fn pollard_brent(n: &BigUint, rng: &mut ChaCha8Rng, steps_left: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    const BATCH: u64 = 128;
    while *steps_left > 0 {
        let c = rng.gen_biguint_range(&one, &(n - &one));
        let mut y = rng.gen_biguint_range(&two, &(n - &one));
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut r: u64 = 1;
        let mut q = one.clone();
        let mut g = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let m = BATCH.min(r - k);
                for _ in 0..m {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                *steps_left = steps_left.saturating_sub(m);
                g = q.gcd(n);
                k += m;
                if *steps_left == 0 && g.is_one() {
                    return None;
                }
            }
            r *= 2;
        }
        if &g == n {
            // batch overshot; retrace one step at a time
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: i64) -> Factorization {
        factor(&BigInt::from(n)).unwrap()
    }

    fn pairs(fac: &Factorization) -> Vec<(u64, u32)> {
        fac.factors
            .iter()
            .map(|(p, e)| (p.to_u64().unwrap(), *e))
            .collect()
    }

    #[test]
    fn factor_examples() {
        let one = f(1);
        assert_eq!(one.sign, 1);
        assert!(one.factors.is_empty());
        let a = f(15624);
        assert_eq!(a.sign, 1);
        assert_eq!(pairs(&a), vec![(2, 3), (3, 2), (7, 1), (31, 1)]);
        let b = f(-24);
        assert_eq!(b.sign, -1);
        assert_eq!(pairs(&b), vec![(2, 3), (3, 1)]);
    }

    #[test]
    fn factor_zero_is_domain_error() {
        assert!(matches!(
            factor(&BigInt::zero()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn splits_product_of_large_primes() {
        // 1000003 * 1000033 * 998244353^2
        let p1 = BigUint::from(1_000_003u64);
        let p2 = BigUint::from(1_000_033u64);
        let p3 = BigUint::from(998_244_353u64);
        let n = &p1 * &p2 * &p3 * &p3;
        let fac = factor(&BigInt::from(n.clone())).unwrap();
        assert_eq!(fac.factors, vec![(p1, 1), (p2, 1), (p3, 2)]);
        assert!(fac.certified);
        assert_eq!(fac.product(), BigInt::from(n));
    }

    #[test]
    fn primality_known_values() {
        let m61 = (BigUint::one() << 61u32) - 1u32;
        assert_eq!(primality(&m61), Primality::Prime);
        let m67 = (BigUint::one() << 67u32) - 1u32; // 193707721 * 761838257287
        assert_eq!(primality(&m67), Primality::Composite);
        let m89 = (BigUint::one() << 89u32) - 1u32;
        assert_eq!(primality(&m89), Primality::ProbablePrime);
        // Carmichael number 561
        assert_eq!(primality(&BigUint::from(561u32)), Primality::Composite);
        // strong pseudoprime to bases 2..=37
        let spsp: BigUint = "318665857834031151167461".parse().unwrap();
        assert_eq!(primality(&spsp), Primality::Composite);
    }

    #[test]
    fn exhausted_budget_reports_partial() {
        let p = BigUint::from(1_000_000_007u64);
        let q = BigUint::from(1_000_000_009u64);
        let n = BigInt::from(p * q);
        let err = factor_with_budget(&n, 1).unwrap_err();
        assert!(matches!(err, Error::PartialFactorization { .. }));
    }

    #[test]
    fn factors_mersenne_67() {
        let m67 = BigInt::from((BigUint::one() << 67u32) - 1u32);
        let fac = factor(&m67).unwrap();
        assert_eq!(
            pairs(&fac),
            vec![(193_707_721, 1), (761_838_257_287, 1)]
        );
    }

    #[test]
    fn jacobi_matches_table() {
        // (a/15) for a = 1..14
        let expected = [1, 1, 0, 1, 0, 0, -1, 1, 0, 0, -1, 0, -1, -1];
        for (a, e) in (1..15).zip(expected) {
            assert_eq!(jacobi(&BigInt::from(a), &BigUint::from(15u32)), e, "a={a}");
        }
    }
}
