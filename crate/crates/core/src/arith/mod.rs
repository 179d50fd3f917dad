//! Exact arithmetic over the rationals: places, valuations, local `v+`
//! functions and symbolic logarithmic values.

mod factor;
pub mod linalg;
mod logvalue;
mod real;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use factor::{
    factor, factor_with_budget, is_prime, primality, Factorization, Primality,
    DEFAULT_RHO_STEPS, TRIAL_DIVISION_LIMIT,
};
pub use logvalue::LogValue;
pub use real::{Real, DEFAULT_PRECISION};

use crate::error::{Error, Result};

/// Exact rational number in lowest terms with positive denominator.
pub type Rational = BigRational;

/// A place of the rationals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(BigUint),
    Archimedean,
}

impl Place {
    /// A finite place; the prime is checked.
    pub fn finite(p: impl Into<BigUint>) -> Result<Place> {
        let p = p.into();
        if is_prime(&p) {
            Ok(Place::Finite(p))
        } else {
            Err(Error::domain(format!("{p} is not prime")))
        }
    }

    pub fn prime(&self) -> Option<&BigUint> {
        match self {
            Place::Finite(p) => Some(p),
            Place::Archimedean => None,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Archimedean => f.write_str("inf"),
        }
    }
}

pub fn rational(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parse `"p/q"` or `"p"` (optional leading sign, no spaces).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exponent of `p` in `n`, with `n != 0`.
fn int_valuation(p: &BigUint, n: &BigUint) -> u64 {
    let mut v = 0;
    let mut m = n.clone();
    // strip p^(2^k) chunks first so huge powers do not cost one division each
    let mut powers = vec![p.clone()];
    while {
        let last = powers.last().unwrap();
        last.bits() * 2 <= m.bits() + 1
    } {
        let last = powers.last().unwrap();
        let sq = last * last;
        powers.push(sq);
    }
    for (k, pk) in powers.iter().enumerate().rev() {
        loop {
            let (q, r) = m.div_rem(pk);
            if !r.is_zero() {
                break;
            }
            m = q;
            v += 1u64 << k;
        }
    }
    v
}

/// `v_p(x) = v_p(numerator) - v_p(denominator)`.
pub fn valuation(p: &BigUint, x: &Rational) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::domain("valuation of zero is +infinity"));
    }
    if p < &BigUint::from(2u32) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    let vn = int_valuation(p, x.numer().magnitude()) as i64;
    let vd = int_valuation(p, x.denom().magnitude()) as i64;
    Ok(vn - vd)
}

/// `v+(x) = max(0, -log|x|_v)`. At a prime this is `max(0, v_p(x)) log p`,
/// large when `x` is divisible by `p`.
pub fn v_plus(place: &Place, x: &Rational, prec: u32) -> Result<LogValue> {
    if x.is_zero() {
        return Err(Error::domain("v+(0) is +infinity"));
    }
    match place {
        Place::Finite(p) => {
            let v = valuation(p, x)?;
            let mut out = LogValue::zero(prec);
            if v > 0 {
                out.add_log_prime(p.clone(), BigRational::from_integer(BigInt::from(v)));
            }
            Ok(out)
        }
        Place::Archimedean => {
            let abs = x.abs();
            let arch = if abs < BigRational::one() {
                -Real::ln_rational(&abs, prec)
            } else {
                Real::zero(prec)
            };
            Ok(LogValue::from_arch(arch))
        }
    }
}

/// Sum over the finite places of `min(v+(a), v+(b))` for nonzero integers;
/// the symbolic logarithm of `gcd(|a|, |b|)`.
pub fn log_gcd_places(a: &BigInt, b: &BigInt, prec: u32) -> Result<LogValue> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::domain("log_gcd_places needs nonzero integers"));
    }
    let fa = factor(a)?;
    let mut out = LogValue::zero(prec);
    for (p, ea) in &fa.factors {
        let eb = int_valuation(p, b.magnitude());
        let e = (*ea as u64).min(eb);
        if e > 0 {
            out.add_log_prime(p.clone(), BigRational::from_integer(BigInt::from(e)));
        }
    }
    Ok(out)
}

/// Exact number of decimal digits of `|n|` (zero has one digit).
pub fn decimal_digits(n: &BigInt) -> u64 {
    let bits = n.bits();
    if bits == 0 {
        return 1;
    }
    // 10^e <= |n| < 10^(e+1) with e close to (bits-1) log10 2
    let est = ((bits - 1) as f64 * std::f64::consts::LOG10_2).floor() as u64;
    let mag = n.magnitude();
    let mut e = est.saturating_sub(1);
    let mut pow = num_traits::pow(BigUint::from(10u32), e as usize);
    while &(&pow * 10u32) <= mag {
        pow *= 10u32;
        e += 1;
    }
    e + 1
}

/// Cheap digit estimate from the bit length, never below the true count.
pub fn approx_digits(n: &BigInt) -> u64 {
    (n.bits() as f64 * std::f64::consts::LOG10_2).ceil() as u64 + 1
}

pub fn rational_approx_digits(r: &Rational) -> u64 {
    approx_digits(r.numer()) + approx_digits(r.denom())
}
