//! Fixed-point binary reals used for archimedean contributions.
//!
//! A [`Real`] stores `mantissa * 2^-prec`. All arithmetic truncates toward
//! negative infinity at the operand precision; the logarithm carries 32 guard
//! bits internally so its result is within a few ulps of the true value.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default working precision in bits for archimedean quantities.
pub const DEFAULT_PRECISION: u32 = 128;

const GUARD_BITS: u32 = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real {
    mantissa: BigInt,
    prec: u32,
}

impl Real {
    pub fn zero(prec: u32) -> Self {
        Real {
            mantissa: BigInt::zero(),
            prec,
        }
    }

    pub fn from_integer(n: &BigInt, prec: u32) -> Self {
        Real {
            mantissa: n << prec,
            prec,
        }
    }

    /// Floor of `r * 2^prec`, scaled back.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        let scaled: BigInt = r.numer() << prec;
        Real {
            mantissa: scaled.div_floor(r.denom()),
            prec,
        }
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        let r = BigRational::from_float(x).unwrap_or_else(BigRational::zero);
        Real::from_rational(&r, prec)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    /// One unit in the last place, as `f64`.
    pub fn ulp(&self) -> f64 {
        (-(self.prec as f64)).exp2()
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        let mantissa = match prec.cmp(&self.prec) {
            Ordering::Equal => self.mantissa.clone(),
            Ordering::Greater => &self.mantissa << (prec - self.prec),
            Ordering::Less => &self.mantissa >> (self.prec - prec),
        };
        Real { mantissa, prec }
    }

    pub fn abs(&self) -> Self {
        Real {
            mantissa: self.mantissa.abs(),
            prec: self.prec,
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn mul(&self, other: &Real) -> Real {
        let other = other.with_precision(self.prec);
        Real {
            mantissa: (&self.mantissa * &other.mantissa) >> self.prec,
            prec: self.prec,
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Real {
        Real {
            mantissa: &self.mantissa * k,
            prec: self.prec,
        }
    }

    pub fn div_int(&self, k: &BigInt) -> Real {
        Real {
            mantissa: self.mantissa.div_floor(k),
            prec: self.prec,
        }
    }

    pub fn mul_rational(&self, r: &BigRational) -> Real {
        Real {
            mantissa: (&self.mantissa * r.numer()).div_floor(r.denom()),
            prec: self.prec,
        }
    }

    pub fn to_f64(&self) -> f64 {
        // Keep at most 64 significant bits before converting so huge
        // mantissas do not overflow to infinity.
        let bits = self.mantissa.bits();
        if bits <= 64 {
            return self.mantissa.to_f64().unwrap_or(0.0) * (-(self.prec as f64)).exp2();
        }
        let shift = bits - 64;
        let top = (&self.mantissa >> shift).to_f64().unwrap_or(0.0);
        top * (shift as f64 - self.prec as f64).exp2()
    }

    /// Natural logarithm of a positive integer.
    pub fn ln_biguint(n: &BigUint, prec: u32) -> Real {
        assert!(!n.is_zero(), "ln of zero");
        if n.is_one() {
            return Real::zero(prec);
        }
        let w = prec + GUARD_BITS;
        let k = n.bits() - 1;
        // x = n / 2^k in [1, 2), as a w-bit fixed-point number.
        let x: BigInt = if (w as u64) >= k {
            BigInt::from(n << (w as u64 - k))
        } else {
            BigInt::from(n >> (k - w as u64))
        };
        let one = BigInt::one() << w;
        let ln_x = atanh_ratio_doubled(&(&x - &one), &(&x + &one), w);
        let ln2 = ln2_fixed(w);
        let total = ln_x + ln2 * BigInt::from(k);
        Real {
            mantissa: total >> GUARD_BITS,
            prec,
        }
    }

    pub fn ln_bigint_abs(n: &BigInt, prec: u32) -> Real {
        Real::ln_biguint(n.magnitude(), prec)
    }

    /// Natural logarithm of a positive rational.
    pub fn ln_rational(r: &BigRational, prec: u32) -> Real {
        assert!(r.is_positive(), "ln of non-positive rational");
        let num = Real::ln_biguint(r.numer().magnitude(), prec);
        let den = Real::ln_biguint(r.denom().magnitude(), prec);
        num - den
    }

    /// Decimal rendering with `digits` digits after the point (truncated).
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10), digits);
        let scaled: BigInt = (self.mantissa.abs() * &scale) >> self.prec;
        let neg = self.mantissa.is_negative() && !scaled.is_zero();
        let mag = scaled.to_string();
        let mag = format!("{:0>width$}", mag, width = digits + 1);
        let (int_part, frac) = mag.split_at(mag.len() - digits);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac}")
        }
    }
}

/// `2 * atanh(num/den)` at `w` fractional bits, for `0 <= num/den <= 1/3`.
fn atanh_ratio_doubled(num: &BigInt, den: &BigInt, w: u32) -> BigInt {
    let z: BigInt = (num << w) / den;
    let z2: BigInt = (&z * &z) >> w;
    let mut power = z.clone();
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !power.is_zero() {
        sum += &power / BigInt::from(2 * j + 1);
        power = (&power * &z2) >> w;
        j += 1;
    }
    sum << 1
}

fn ln2_fixed(w: u32) -> BigInt {
    // ln 2 = 2 atanh(1/3)
    atanh_ratio_doubled(&BigInt::one(), &BigInt::from(3), w)
}

fn align(a: &Real, b: &Real) -> (BigInt, BigInt, u32) {
    let prec = a.prec.max(b.prec);
    (
        a.with_precision(prec).mantissa,
        b.with_precision(prec).mantissa,
        prec,
    )
}

impl Add for Real {
    type Output = Real;
    fn add(self, rhs: Real) -> Real {
        let (a, b, prec) = align(&self, &rhs);
        Real {
            mantissa: a + b,
            prec,
        }
    }
}

impl<'a> Add<&'a Real> for &'a Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        let (a, b, prec) = align(self, rhs);
        Real {
            mantissa: a + b,
            prec,
        }
    }
}

impl Sub for Real {
    type Output = Real;
    fn sub(self, rhs: Real) -> Real {
        let (a, b, prec) = align(&self, &rhs);
        Real {
            mantissa: a - b,
            prec,
        }
    }
}

impl<'a> Sub<&'a Real> for &'a Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        let (a, b, prec) = align(self, rhs);
        Real {
            mantissa: a - b,
            prec,
        }
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real {
            mantissa: -self.mantissa,
            prec: self.prec,
        }
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = align(self, other);
        a.cmp(&b)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(12);
        f.write_str(&self.to_decimal(digits))
    }
}
