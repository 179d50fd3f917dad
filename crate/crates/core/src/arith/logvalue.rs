use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::real::Real;

/// `sum_p c_p log p + arch`: exact rational coefficients on the logarithms of
/// primes, plus a fixed-point archimedean real.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogValue {
    finite: BTreeMap<BigUint, BigRational>,
    arch: Real,
}

impl LogValue {
    pub fn zero(prec: u32) -> Self {
        LogValue {
            finite: BTreeMap::new(),
            arch: Real::zero(prec),
        }
    }

    pub fn from_arch(arch: Real) -> Self {
        LogValue {
            finite: BTreeMap::new(),
            arch,
        }
    }

    /// `log n` for a positive integer given by its factorization.
    pub fn log_of_factored(factors: &[(BigUint, u32)], prec: u32) -> Self {
        let mut out = LogValue::zero(prec);
        for (p, e) in factors {
            out.add_log_prime(p.clone(), BigRational::from_integer(BigInt::from(*e)));
        }
        out
    }

    pub fn add_log_prime(&mut self, p: BigUint, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.finite.entry(p.clone()).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.finite.remove(&p);
        }
    }

    pub fn finite(&self) -> &BTreeMap<BigUint, BigRational> {
        &self.finite
    }

    pub fn finite_coeff(&self, p: &BigUint) -> BigRational {
        self.finite.get(p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn arch(&self) -> &Real {
        &self.arch
    }

    pub fn precision(&self) -> u32 {
        self.arch.precision()
    }

    pub fn is_zero(&self) -> bool {
        self.finite.is_empty() && self.arch.is_zero()
    }

    /// Drop the archimedean term.
    pub fn finite_part(&self) -> LogValue {
        LogValue {
            finite: self.finite.clone(),
            arch: Real::zero(self.arch.precision()),
        }
    }

    /// Remove the listed primes from the finite part.
    pub fn without_primes<'a>(&self, primes: impl IntoIterator<Item = &'a BigUint>) -> LogValue {
        let mut out = self.clone();
        for p in primes {
            out.finite.remove(p);
        }
        out
    }

    /// When every finite coefficient is a nonnegative integer, the integer
    /// `prod p^c_p` whose logarithm is the finite part.
    pub fn finite_as_integer(&self) -> Option<BigUint> {
        let mut acc = BigUint::one();
        for (p, c) in &self.finite {
            if !c.is_integer() || c.is_negative() {
                return None;
            }
            let e: usize = c.to_integer().try_into().ok()?;
            acc *= num_traits::pow(p.clone(), e);
        }
        Some(acc)
    }

    /// Numerical value of the finite part at the stored precision.
    pub fn finite_real(&self) -> Real {
        let prec = self.arch.precision();
        let mut acc = Real::zero(prec);
        for (p, c) in &self.finite {
            acc = acc + Real::ln_biguint(p, prec).mul_rational(c);
        }
        acc
    }

    pub fn to_real(&self) -> Real {
        self.finite_real() + self.arch.clone()
    }

    pub fn to_f64(&self) -> f64 {
        self.to_real().to_f64()
    }

    /// Finite parts equal exactly, archimedean parts within `2^(-prec/2)`.
    pub fn approx_eq(&self, other: &LogValue) -> bool {
        if self.finite != other.finite {
            return false;
        }
        let prec = self.precision().min(other.precision());
        let diff = (&self.arch - &other.arch).abs();
        let tol = Real::from_rational(
            &BigRational::new(BigInt::one(), BigInt::one() << (prec / 2)),
            prec,
        );
        diff <= tol
    }

    /// `"log 2 + 3*log 5"`; `"0"` for an empty finite part.
    pub fn finite_string(&self) -> String {
        if self.finite.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (p, c)) in self.finite.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mag = c.abs();
            if !mag.is_one() {
                out.push_str(&super::format_rational(&mag));
                out.push('*');
            }
            out.push_str(&format!("log {p}"));
        }
        out
    }
}

impl std::ops::Add for &LogValue {
    type Output = LogValue;
    fn add(self, rhs: &LogValue) -> LogValue {
        let mut out = self.clone();
        for (p, c) in &rhs.finite {
            out.add_log_prime(p.clone(), c.clone());
        }
        out.arch = &out.arch + &rhs.arch;
        out
    }
}

impl std::ops::Sub for &LogValue {
    type Output = LogValue;
    fn sub(self, rhs: &LogValue) -> LogValue {
        let mut out = self.clone();
        for (p, c) in &rhs.finite {
            out.add_log_prime(p.clone(), -c.clone());
        }
        out.arch = &out.arch - &rhs.arch;
        out
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arch.is_zero() {
            f.write_str(&self.finite_string())
        } else if self.finite.is_empty() {
            write!(f, "{}", self.arch.to_decimal(12))
        } else {
            write!(f, "{} + {}", self.finite_string(), self.arch.to_decimal(12))
        }
    }
}
