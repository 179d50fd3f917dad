use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::linalg::{determinant, solve, Matrix};
use crate::arith::{Rational, Real};
use crate::error::{Error, Result};
use crate::poly::RationalMap;

/// Explicit constants for `|h(f(x)) - d h(x)| <= C_f` derived from the
/// homogeneous forms `F(X, Y) = Y^d num(X/Y)` and `G(X, Y) = Y^d den(X/Y)`.
///
/// With `U = max(|F|_1, |G|_1)` the upper estimate is `max(|F|, |G|) <= U |w|^d`.
/// Integral forms `A_i, B_i` of degree `d - 1` satisfy
/// `A_1 F + B_1 G = R X^(2d-1)` and `A_2 F + B_2 G = R Y^(2d-1)` with `R` the
/// resultant, so with `K = max_i(|A_i|_1 + |B_i|_1)` one gets
/// `max(|F|, |G|) >= |R|/K |w|^d` and `gcd(F(w), G(w)) | R`.
#[derive(Clone, Debug, PartialEq)]
pub struct Discrepancy {
    pub degree: usize,
    /// Coefficients of `F` and `G`, ascending in `X`.
    pub num_form: Vec<BigInt>,
    pub den_form: Vec<BigInt>,
    pub resultant: BigInt,
    pub upper: BigInt,
    pub lower: Rational,
}

impl Discrepancy {
    pub fn new(map: &RationalMap) -> Result<Self> {
        let d = map.degree();
        if d < 2 {
            return Err(Error::domain(format!("discrepancy bound needs degree >= 2, got {d}")));
        }
        let form = |p: &crate::poly::Polynomial| -> Vec<BigInt> {
            (0..=d).map(|i| p.coeff(i).to_integer()).collect()
        };
        let num_form = form(map.num());
        let den_form = form(map.den());
        let l1 = |c: &[BigInt]| c.iter().map(|v| v.abs()).sum::<BigInt>();
        let upper = l1(&num_form).max(l1(&den_form));

        let sylvester = sylvester(&num_form, &den_form);
        let resultant = determinant(&sylvester);
        debug_assert!(resultant.is_integer());
        let resultant = resultant.to_integer();
        if resultant.is_zero() {
            return Err(Error::domain("numerator and denominator share a root"));
        }
        let mut lower = Rational::zero();
        for target in [2 * d - 1, 0] {
            let mut rhs = vec![Rational::zero(); 2 * d];
            rhs[target] = Rational::from_integer(resultant.clone());
            let sol = solve(&sylvester, &rhs).expect("nonzero resultant");
            debug_assert!(sol.iter().all(|c| c.is_integer()));
            let norm: Rational = sol.iter().map(|c| c.abs()).sum();
            lower = lower.max(norm);
        }
        Ok(Discrepancy {
            degree: d,
            num_form,
            den_form,
            resultant,
            upper,
            lower,
        })
    }

    /// `exp(C_f) = max(U, K)`.
    pub fn exp_constant(&self) -> Rational {
        Rational::from_integer(self.upper.clone()).max(self.lower.clone())
    }

    /// `C_f = 0`, as for monic monomials.
    pub fn is_trivial(&self) -> bool {
        self.exp_constant().is_one()
    }

    /// `C_f = max(log U, log K)`.
    pub fn constant(&self, prec: u32) -> Real {
        Real::ln_rational(&self.exp_constant(), prec)
    }

    /// Bound on `|log max(|F(u)|, |G(u)|)|` over sup-normalized real `u`.
    pub fn arch_step_bound(&self) -> f64 {
        let log_u = ln_big(&self.upper);
        let ratio = Rational::from_integer(self.resultant.abs()) / &self.lower;
        let log_ratio = ln_big(ratio.numer()) - ln_big(ratio.denom());
        log_u.abs().max(log_ratio.abs())
    }
}

/// Columns: `X^i Y^(d-1-i) F` for `i < d`, then the same shifts of `G`;
/// rows: coefficient of `X^k Y^(2d-1-k)`.
fn sylvester(f: &[BigInt], g: &[BigInt]) -> Matrix {
    let d = f.len() - 1;
    let mut m = vec![vec![Rational::zero(); 2 * d]; 2 * d];
    for i in 0..d {
        for j in 0..=d {
            m[i + j][i] = Rational::from_integer(f[j].clone());
            m[i + j][d + i] = Rational::from_integer(g[j].clone());
        }
    }
    m
}

/// `ln |n|` in double precision for arbitrarily large `n`.
pub(crate) fn ln_big(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        let v: f64 = num_traits::ToPrimitive::to_f64(&n.abs()).unwrap_or(f64::INFINITY);
        return v.ln();
    }
    let shift = bits - 64;
    let top: f64 = num_traits::ToPrimitive::to_f64(&(n.abs() >> shift)).unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `max(|x|, |y|)^(d-1) > exp(C_f)`: above this height every orbit
/// strictly increases in height.
pub(crate) fn above_escape_height(disc: &Discrepancy, x: &BigInt, y: &BigInt) -> bool {
    let h = x.abs().max(y.abs());
    let lhs = num_traits::pow(h, disc.degree - 1);
    Rational::from_integer(lhs) > disc.exp_constant()
}
