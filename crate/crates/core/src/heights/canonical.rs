use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::discrepancy::{above_escape_height, Discrepancy};
use super::weil_height;
use crate::arith::{factor, Real, DEFAULT_PRECISION};
use crate::error::{Error, Result};
use crate::poly::{ProjPoint, RationalMap};

/// Default cap on exact steps spent deciding whether an orbit is finite.
pub const DEFAULT_ORBIT_STEPS: usize = 100_000;

/// Most series terms a canonical-height evaluation may use.
const MAX_TERMS: usize = 4000;

/// Certified approximation of a canonical height.
#[derive(Clone, Debug, PartialEq)]
pub struct HeightEstimate {
    pub value: Real,
    pub error_bound: f64,
    pub iterations_used: usize,
    /// The point was shown preperiodic exactly, so the value is exactly zero.
    pub preperiodic: bool,
}

impl HeightEstimate {
    pub fn upper(&self) -> f64 {
        self.value.to_f64() + self.error_bound
    }

    pub fn lower(&self) -> f64 {
        self.value.to_f64() - self.error_bound
    }
}

/// Exact fate of a forward orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitKind {
    /// `f^(preperiod + period)(P) = f^preperiod(P)` with minimal values.
    Preperiodic { preperiod: usize, period: usize },
    /// `f^escape_step(P)` lies above the height where orbits strictly grow.
    Wandering { escape_step: usize },
}

/// Iterate exactly until a value repeats or the height passes `C_f/(d-1)`.
/// Below that height there are finitely many rationals, so the loop ends;
/// `max_steps` bounds it anyway and yields `Indeterminate`.
pub fn orbit_kind(map: &RationalMap, point: &ProjPoint, max_steps: usize) -> Result<OrbitKind> {
    let disc = Discrepancy::new(map)?;
    orbit_kind_with(map, &disc, point, max_steps)
}

pub(crate) fn orbit_kind_with(
    map: &RationalMap,
    disc: &Discrepancy,
    point: &ProjPoint,
    max_steps: usize,
) -> Result<OrbitKind> {
    let mut seen: HashMap<ProjPoint, usize> = HashMap::new();
    let mut cur = point.clone();
    for step in 0..=max_steps {
        if let Some(&first) = seen.get(&cur) {
            return Ok(OrbitKind::Preperiodic {
                preperiod: first,
                period: step - first,
            });
        }
        let (x, y) = cur.coordinates();
        if above_escape_height(disc, &x, &y) {
            return Ok(OrbitKind::Wandering { escape_step: step });
        }
        seen.insert(cur.clone(), step);
        cur = map.eval(&cur);
    }
    Err(Error::Indeterminate(format!(
        "orbit of {point} under {map} undecided after {max_steps} steps"
    )))
}

/// `F(x, y) = sum c_i x^i y^(d-i)`
pub(crate) fn eval_form(coeffs: &[BigInt], x: &BigInt, y: &BigInt) -> BigInt {
    let d = coeffs.len() - 1;
    let mut ypow = BigInt::one();
    let mut acc = coeffs[d].clone();
    for i in (0..d).rev() {
        ypow *= y;
        acc = acc * x + &coeffs[i] * &ypow;
    }
    acc
}

/// `ĥ_f(P)` to within `tol`.
///
/// For the coprime lift `w = (X, Y)` of `P` the height splits into local
/// series: `ĥ(P) = h(P) + sum_k d^-(k+1) [log |Φ(u_k)|_∞ - sum_p ε_(k,p) log p]`,
/// where `Φ = (F, G)`, `u_k` is the normalized `k`-th lift at each place and
/// `ε_(k,p) = min(v_p F(u_k), v_p G(u_k))`. Only primes dividing the
/// resultant contribute, each step term is bounded, and the tail after `N`
/// terms is at most `T d^-N / (d-1)`.
pub fn canonical_height(map: &RationalMap, point: &ProjPoint, tol: f64) -> Result<HeightEstimate> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let disc = Discrepancy::new(map)?;
    if let Ok(OrbitKind::Preperiodic { .. }) = orbit_kind_with(map, &disc, point, 2_000) {
        return Ok(HeightEstimate {
            value: Real::zero(DEFAULT_PRECISION),
            error_bound: 0.0,
            iterations_used: 0,
            preperiodic: true,
        });
    }
    series_height(&disc, point, tol)
}

fn series_height(disc: &Discrepancy, point: &ProjPoint, tol: f64) -> Result<HeightEstimate> {
    let d = disc.degree;
    let df = d as f64;
    let res_fac = factor(&disc.resultant)?;
    let log_res: f64 = res_fac
        .factors
        .iter()
        .map(|(p, e)| *e as f64 * ln_biguint_f64(p))
        .sum();
    let step_bound = disc.arch_step_bound() + log_res;
    // rounding in the fixed-point iteration stays below this
    let rounding = 2f64.powi(-64);
    let budget = tol - rounding;
    let terms = if step_bound == 0.0 {
        0
    } else if budget <= 0.0 {
        MAX_TERMS + 1
    } else {
        // smallest N with step_bound d^-N / (d-1) <= budget
        let n = ((step_bound / ((df - 1.0) * budget)).ln() / df.ln()).ceil();
        n.max(0.0) as usize
    };
    let capped = terms.min(MAX_TERMS);

    let (x0, y0) = point.coordinates();
    let arch = arch_series(disc, &x0, &y0, capped);
    let mut value = weil_height(point).with_precision(arch.precision()) + arch;
    for (p, e) in &res_fac.factors {
        let coeff = padic_series(disc, p, *e, &x0, &y0, capped);
        if !coeff.is_zero() {
            let prec = value.precision();
            value = value - Real::ln_biguint(p, prec).mul_rational(&coeff);
        }
    }
    let tail = step_bound * df.powi(-(capped as i32)) / (df - 1.0);
    let estimate = HeightEstimate {
        value: value.with_precision(DEFAULT_PRECISION),
        error_bound: if step_bound == 0.0 { 0.0 } else { tail + rounding },
        iterations_used: capped,
        preperiodic: false,
    };
    if capped < terms {
        return Err(Error::HeightTolerance {
            value: estimate.value.to_f64(),
            error_bound: estimate.error_bound,
        });
    }
    Ok(estimate)
}

fn ln_biguint_f64(p: &BigUint) -> f64 {
    super::discrepancy::ln_big(&BigInt::from(p.clone()))
}

/// `sum_(k<n) d^-(k+1) log |Φ(u_k)|_∞` in fixed point, with guard bits for
/// the expansion of the normalized iteration.
fn arch_series(disc: &Discrepancy, x0: &BigInt, y0: &BigInt, n: usize) -> Real {
    let d = disc.degree;
    let ratio = BigRational::from_integer(disc.resultant.abs()) / &disc.lower;
    let lip = BigRational::from_integer(BigInt::from(2 * d) * &disc.upper) / ratio;
    let lip_bits = (lip.numer().bits() as i64 - lip.denom().bits() as i64 + 1).max(1) as u32;
    let prec = 96 + lip_bits.saturating_mul(n as u32).min(1 << 22);

    let norm = x0.abs().max(y0.abs());
    let mut x = (x0 << prec) / &norm;
    let mut y = (y0 << prec) / &norm;
    let mut acc = Real::zero(prec);
    let mut scale = BigInt::one();
    let ln2 = Real::ln_biguint(&BigUint::from(2u32), prec);
    for _ in 0..n {
        scale *= d;
        let fx = eval_form(&disc.num_form, &x, &y);
        let gx = eval_form(&disc.den_form, &x, &y);
        let m = fx.abs().max(gx.abs());
        // |Φ(u)| = m / 2^(d prec)
        let term = Real::ln_bigint_abs(&m, prec) - ln2.mul_int(&BigInt::from(d as u64 * prec as u64));
        acc = acc + term.div_int(&scale);
        x = (fx << prec) / &m;
        y = (gx << prec) / &m;
    }
    acc
}

/// `sum_(k<n) ε_k / d^(k+1)` at the prime `p`, working modulo `p^M` with `M`
/// large enough that every division by `p^ε` stays exact.
fn padic_series(disc: &Discrepancy, p: &BigUint, v_res: u32, x0: &BigInt, y0: &BigInt, n: usize) -> BigRational {
    let p = BigInt::from(p.clone());
    let mut prec = v_res as usize * (n + 1) + 2;
    let mut modulus = num_traits::pow(p.clone(), prec);
    let mut x = x0.mod_floor(&modulus);
    let mut y = y0.mod_floor(&modulus);
    let mut acc = BigRational::zero();
    let mut scale = BigInt::one();
    let vp = |v: &BigInt, cap: usize| -> usize {
        if v.is_zero() {
            return cap;
        }
        let mut k = 0;
        let mut t = v.clone();
        while k < cap && t.is_multiple_of(&p) {
            t /= &p;
            k += 1;
        }
        k
    };
    for _ in 0..n {
        scale *= disc.degree;
        let fx = eval_form(&disc.num_form, &x, &y).mod_floor(&modulus);
        let gx = eval_form(&disc.den_form, &x, &y).mod_floor(&modulus);
        let eps = vp(&fx, prec).min(vp(&gx, prec));
        debug_assert!(eps <= v_res as usize && eps < prec);
        if eps > 0 {
            acc += BigRational::new(BigInt::from(eps), scale.clone());
        }
        let pe = num_traits::pow(p.clone(), eps);
        prec -= eps;
        modulus = num_traits::pow(p.clone(), prec);
        x = (fx / &pe).mod_floor(&modulus);
        y = (gx / &pe).mod_floor(&modulus);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;

    fn f(c: &[i64]) -> RationalMap {
        RationalMap::from_int_poly(c)
    }

    #[test]
    fn power_map_is_weil_height() {
        let est = canonical_height(&f(&[0, 0, 1]), &ProjPoint::int(3), 1e-10).unwrap();
        assert!((est.value.to_f64() - 3f64.ln()).abs() < 1e-15);
        assert_eq!(est.error_bound, 0.0);
        let est = canonical_height(&f(&[0, 0, 1]), &ProjPoint::Affine(rational(-7, 5)), 1e-10).unwrap();
        assert!((est.value.to_f64() - 7f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn preperiodic_points_are_exactly_zero() {
        let est = canonical_height(&f(&[0, 0, 1]), &ProjPoint::int(1), 1e-3).unwrap();
        assert!(est.preperiodic && est.value.is_zero());
        let est = canonical_height(&f(&[-1, 0, 1]), &ProjPoint::int(0), 1e-6).unwrap();
        assert!(est.preperiodic && est.value.is_zero());
        assert!(canonical_height(&f(&[0, 0, 1]), &ProjPoint::Infinity, 1e-6).unwrap().preperiodic);
    }

    #[test]
    fn orbit_kinds() {
        assert_eq!(
            orbit_kind(&f(&[-1, 0, 1]), &ProjPoint::int(0), 100).unwrap(),
            OrbitKind::Preperiodic { preperiod: 0, period: 2 }
        );
        assert_eq!(
            orbit_kind(&f(&[-1, 0, 1]), &ProjPoint::int(1), 100).unwrap(),
            OrbitKind::Preperiodic { preperiod: 1, period: 2 }
        );
        assert!(matches!(
            orbit_kind(&f(&[0, 0, 1]), &ProjPoint::int(3), 100).unwrap(),
            OrbitKind::Wandering { .. }
        ));
        assert_eq!(
            orbit_kind(&f(&[-2, 0, 1]), &ProjPoint::int(1), 100).unwrap(),
            OrbitKind::Preperiodic { preperiod: 1, period: 1 }
        );
    }

    /// Naive `h(f^n(P))/d^n` with exact orbit values.
    fn naive(map: &RationalMap, p: &ProjPoint, n: usize) -> f64 {
        let mut cur = p.clone();
        for _ in 0..n {
            cur = map.eval(&cur);
        }
        weil_height(&cur).to_f64() / (map.degree() as f64).powi(n as i32)
    }

    #[test]
    fn agrees_with_naive_limit() {
        let cases = [
            (f(&[1, 0, 1]), ProjPoint::int(1)),
            (f(&[-1, 0, 1]), ProjPoint::Affine(rational(3, 2))),
            (f(&[0, 1, 0, 1]), ProjPoint::int(2)),
            (f(&[0, 0, 2]), ProjPoint::Affine(rational(1, 3))),
            (
                RationalMap::new(
                    crate::poly::Polynomial::from_ints(&[1, 0, 1]),
                    crate::poly::Polynomial::from_ints(&[0, 2]),
                )
                .unwrap(),
                ProjPoint::int(3),
            ),
        ];
        for (map, p) in &cases {
            let est = canonical_height(map, p, 1e-9).unwrap();
            let c = Discrepancy::new(map).unwrap().constant(64).to_f64();
            let d = map.degree() as f64;
            let n = 12;
            // the naive quotient is within C/((d-1) d^n) of the limit
            let slack = c / ((d - 1.0) * d.powi(n as i32)) + est.error_bound;
            let naive = naive(map, p, n);
            assert!((est.value.to_f64() - naive).abs() <= slack + 1e-12, "{map} at {p}: {} vs {naive}", est.value.to_f64());
        }
    }

    #[test]
    fn functional_equation() {
        let map = f(&[1, 0, 1]);
        for k in 2..8 {
            let p = ProjPoint::Affine(rational(k, k + 3));
            let a = canonical_height(&map, &p, 1e-8).unwrap();
            let b = canonical_height(&map, &map.eval(&p), 1e-8).unwrap();
            assert!((b.value.to_f64() - 2.0 * a.value.to_f64()).abs() <= 2e-8);
        }
    }

    #[test]
    fn bad_reduction_primes_contribute() {
        // 2x^2 has resultant 4, so the 2-adic series is nonzero
        let map = f(&[0, 0, 2]);
        let p = ProjPoint::Affine(rational(1, 3));
        let est = canonical_height(&map, &p, 1e-12).unwrap();
        // x -> 2x conjugates 2x^2 to x^2, so ĥ(P) = h(2P)
        assert!((est.value.to_f64() - 3f64.ln()).abs() <= est.error_bound + 1e-12);
    }
}
