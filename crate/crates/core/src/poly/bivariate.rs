use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{format_rational, Rational};
use crate::error::{Error, Result};

/// Sparse polynomial in `x, y` over the rationals, keyed by `(i, j)` for
/// the monomial `x^i y^j`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bivariate {
    terms: BTreeMap<(usize, usize), Rational>,
}

impl Bivariate {
    pub fn zero() -> Self {
        Bivariate::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((usize, usize), Rational)>) -> Self {
        let mut out = Bivariate::zero();
        for (k, c) in terms {
            out.add_term(k.0, k.1, c);
        }
        out
    }

    /// Integer coefficients, `[(i, j, c)]`.
    pub fn from_ints(terms: &[(usize, usize, i64)]) -> Self {
        Bivariate::from_terms(
            terms
                .iter()
                .map(|&(i, j, c)| ((i, j), BigRational::from_integer(BigInt::from(c)))),
        )
    }

    pub fn add_term(&mut self, i: usize, j: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> &BTreeMap<(usize, usize), Rational> {
        &self.terms
    }

    pub fn coeff(&self, i: usize, j: usize) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, ((i, j), c)| {
            acc + c * num_traits::pow(x.clone(), *i) * num_traits::pow(y.clone(), *j)
        })
    }

    /// `F(x + px, y + py)`
    pub fn translate(&self, px: &Rational, py: &Rational) -> Bivariate {
        let mut out = Bivariate::zero();
        for ((i, j), c) in &self.terms {
            let xs = binomial_expansion(px, *i);
            let ys = binomial_expansion(py, *j);
            for (k, a) in xs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (l, b) in ys.iter().enumerate() {
                    out.add_term(k, l, c * a * b);
                }
            }
        }
        out
    }

    /// Homogeneous component of total degree `r`.
    pub fn homogeneous_part(&self, r: usize) -> Bivariate {
        Bivariate::from_terms(
            self.terms
                .iter()
                .filter(|((i, j), _)| i + j == r)
                .map(|(k, c)| (*k, c.clone())),
        )
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|(i, j)| i + j);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Scale so the coefficients are coprime integers and the leading term
    /// (largest key) is positive.
    pub fn primitive(&self) -> Bivariate {
        if self.is_zero() {
            return self.clone();
        }
        let mut scale = crate::poly::polynomial::primitive_scale_of(self.terms.values());
        if (self.terms.values().last().unwrap() * &scale).is_negative() {
            scale = -scale;
        }
        Bivariate::from_terms(self.terms.iter().map(|(k, c)| (*k, c * &scale)))
    }
}

/// Coefficients of `(x + a)^n`, ascending in `x`.
fn binomial_expansion(a: &Rational, n: usize) -> Vec<Rational> {
    let mut coeffs = vec![Rational::one()];
    for _ in 0..n {
        let mut next = vec![Rational::zero(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] += c * a;
        }
        coeffs = next;
    }
    coeffs
}

/// Least total degree of a nonzero homogeneous part of `F` after moving
/// `(px, py)` to the origin; zero when `F(px, py) != 0`.
pub fn curve_multiplicity_at(f: &Bivariate, px: &Rational, py: &Rational) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::domain("multiplicity of the zero polynomial"));
    }
    let moved = f.translate(px, py);
    Ok(moved.terms.keys().map(|(i, j)| i + j).min().unwrap())
}

impl fmt::Display for Bivariate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for ((i, j), c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mag = c.abs();
            let mono = monomial_text(*i, *j);
            if mono.is_empty() {
                f.write_str(&format_rational(&mag))?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), mono)?;
            }
        }
        Ok(())
    }
}

fn monomial_text(i: usize, j: usize) -> String {
    let part = |v: &str, e: usize| match e {
        0 => String::new(),
        1 => v.to_string(),
        _ => format!("{v}^{e}"),
    };
    let (xs, ys) = (part("x", i), part("y", j));
    match (xs.is_empty(), ys.is_empty()) {
        (false, false) => format!("{xs}*{ys}"),
        _ => format!("{xs}{ys}"),
    }
}
