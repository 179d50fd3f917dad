use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::PlaceSet;
use crate::arith::{factor_with_budget, LogValue, Rational, Real, DEFAULT_RHO_STEPS};
use crate::error::{Error, Result};

/// `sum_v min(v+(x), v+(y))` over every place, with `v+(0) = +inf`.
///
/// At a prime both `v+` are positive only when `p` divides both numerators,
/// so the finite part is `log gcd(num x, num y)`; the archimedean part is
/// `max(0, -log max(|x|, |y|))`.
pub fn hgcd(x: &Rational, y: &Rational, prec: u32) -> Result<LogValue> {
    let mut out = hgcd_fin(x, y, prec)?;
    let arch = arch_term(x, y, prec);
    out = &out + &LogValue::from_arch(arch);
    Ok(out)
}

/// Finite places only.
pub fn hgcd_fin(x: &Rational, y: &Rational, prec: u32) -> Result<LogValue> {
    let g = numerator_gcd(x, y)?;
    let fac = factor_with_budget(&BigInt::from(g), DEFAULT_RHO_STEPS)?;
    Ok(LogValue::log_of_factored(&fac.factors, prec))
}

/// Finite places outside `excluded`.
pub fn hgcd_excluding(excluded: &PlaceSet, x: &Rational, y: &Rational, prec: u32) -> Result<LogValue> {
    Ok(hgcd_fin(x, y, prec)?.without_primes(excluded.primes()))
}

/// `gcd(num x, num y)`, where a zero argument defers to the other.
pub fn numerator_gcd(x: &Rational, y: &Rational) -> Result<BigUint> {
    if x.is_zero() && y.is_zero() {
        return Err(Error::domain("gcd height of (0, 0) is undefined"));
    }
    Ok(x.numer().gcd(y.numer()).magnitude().clone())
}

/// `gcd(num x, num y)` with every prime of `excluded` divided out.
pub fn numerator_gcd_excluding(excluded: &PlaceSet, x: &Rational, y: &Rational) -> Result<BigUint> {
    let mut g = numerator_gcd(x, y)?;
    for p in excluded.primes() {
        while !g.is_zero() && (&g % p).is_zero() {
            g /= p;
        }
    }
    Ok(g)
}

/// Numerical `hgcd_fin` without factoring: `log gcd(num x, num y)`.
pub fn hgcd_fin_real(x: &Rational, y: &Rational, prec: u32) -> Result<Real> {
    Ok(Real::ln_biguint(&numerator_gcd(x, y)?, prec))
}

/// Numerical `hgcd` without factoring.
pub fn hgcd_real(x: &Rational, y: &Rational, prec: u32) -> Result<Real> {
    Ok(hgcd_fin_real(x, y, prec)? + arch_term(x, y, prec))
}

fn arch_term(x: &Rational, y: &Rational, prec: u32) -> Real {
    let big = match (x.is_zero(), y.is_zero()) {
        (true, _) => y.abs(),
        (_, true) => x.abs(),
        _ => x.abs().max(y.abs()),
    };
    if big >= BigRational::one() {
        Real::zero(prec)
    } else {
        -Real::ln_rational(&big, prec)
    }
}
