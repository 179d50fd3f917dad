use serde::{Deserialize, Serialize};

use crate::arith::{format_rational, Rational};
use crate::budget::Budget;
use crate::classify::is_exceptional;
use crate::error::{Error, Result};
use crate::heights::{canonical_height, Discrepancy};
use crate::poly::{max_root_multiplicity, mod_inverse, rational_mod, Polynomial, ProjPoint, RationalMap};

/// Tolerance for the canonical heights entering the depth inequality.
const HEIGHT_TOL: f64 = 1e-9;
/// Primes for the squarefree screen; a squarefree reduction proves `M' = 1`.
const SCREEN_PRIMES: [u64; 3] = [1_000_000_007, 998_244_353, 2_305_843_009_213_693_951];

/// Evidence that `M'/d^D (4 ĥ_f(a) + 4 ĥ_g(b) + C) < ε/2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepthCertificate {
    pub depth: u32,
    pub degree: usize,
    /// Largest root multiplicity of `f^D - α` and `g^D - β`, infinity included.
    pub max_multiplicity: usize,
    pub multiplicity_f: usize,
    pub multiplicity_g: usize,
    pub height_f: f64,
    pub height_f_error: f64,
    pub height_g: f64,
    pub height_g_error: f64,
    /// `2 (C_f + C_g) / (d - 1)`.
    pub constant: f64,
    pub epsilon: f64,
    pub lhs: f64,
    pub alpha: String,
    pub beta: String,
}

impl DepthCertificate {
    /// Recompute the inequality from the recorded numbers, with the height
    /// upper bounds.
    pub fn replay(&self) -> bool {
        let hf = self.height_f + self.height_f_error;
        let hg = self.height_g + self.height_g_error;
        let scale = (self.degree as f64).powi(self.depth as i32);
        let lhs = self.max_multiplicity as f64 / scale * (4.0 * hf + 4.0 * hg + self.constant);
        lhs < self.epsilon / 2.0
    }
}

/// Least depth `D` with `M'/d^D (4 ĥ_f(a) + 4 ĥ_g(b) + C) < ε/2`.
///
/// Depths are scanned while `d^D` stays within the symbolic degree budget;
/// `M'` is only computed once the bound with `M' = 1` already passes.
#[allow(clippy::too_many_arguments)]
pub fn choose_depth(
    f: &RationalMap,
    g: &RationalMap,
    a: &ProjPoint,
    b: &ProjPoint,
    alpha: &Rational,
    beta: &Rational,
    epsilon: f64,
    budget: &Budget,
) -> Result<DepthCertificate> {
    let d = f.degree();
    if d != g.degree() || d < 2 {
        return Err(Error::domain("choose_depth needs deg f = deg g >= 2"));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::domain("epsilon must be positive"));
    }
    for (map, target, name) in [(f, alpha, "alpha"), (g, beta, "beta")] {
        if is_exceptional(map, &ProjPoint::Affine(target.clone()))? {
            return Err(Error::Hypothesis(format!(
                "{name} = {} is exceptional for {map}",
                format_rational(target)
            )));
        }
    }
    let hf = canonical_height(f, a, HEIGHT_TOL)?;
    let hg = canonical_height(g, b, HEIGHT_TOL)?;
    let cf = Discrepancy::new(f)?.constant(64).to_f64();
    let cg = Discrepancy::new(g)?.constant(64).to_f64();
    let constant = 2.0 * (cf + cg) / (d as f64 - 1.0);
    let sum = 4.0 * hf.upper() + 4.0 * hg.upper() + constant;

    let mut fd = f.clone();
    let mut gd = g.clone();
    let mut depth = 1u32;
    loop {
        let degree = (d as u64).checked_pow(depth).unwrap_or(u64::MAX);
        if degree > budget.symbolic_degree {
            return Err(Error::DegreeBudget {
                degree,
                budget: budget.symbolic_degree,
            });
        }
        let scale = degree as f64;
        if sum / scale < epsilon / 2.0 {
            let mf = fiber_multiplicity(&fd, alpha)?;
            let mg = fiber_multiplicity(&gd, beta)?;
            let m = mf.max(mg);
            let cert = DepthCertificate {
                depth,
                degree: d,
                max_multiplicity: m,
                multiplicity_f: mf,
                multiplicity_g: mg,
                height_f: hf.value.to_f64(),
                height_f_error: hf.error_bound,
                height_g: hg.value.to_f64(),
                height_g_error: hg.error_bound,
                constant,
                epsilon,
                lhs: m as f64 / scale * sum,
                alpha: format_rational(alpha),
                beta: format_rational(beta),
            };
            if cert.replay() {
                return Ok(cert);
            }
        }
        fd = f.compose(&fd);
        gd = g.compose(&gd);
        depth += 1;
    }
}

/// Largest multiplicity of a point in the fiber of `map` over `target`.
pub fn fiber_multiplicity(map: &RationalMap, target: &Rational) -> Result<usize> {
    let fiber = map.num() - &map.den().scale(target);
    let at_infinity = map.degree() - fiber.degree_or_zero();
    let affine = if squarefree_by_reduction(&fiber) {
        1
    } else {
        max_root_multiplicity(&fiber)?
    };
    Ok(affine.max(at_infinity))
}

/// True when `p` stays squarefree of the same degree modulo a screening
/// prime, which forces it to be squarefree over the rationals.
fn squarefree_by_reduction(p: &Polynomial) -> bool {
    let Some(deg) = p.degree() else {
        return false;
    };
    if deg <= 1 {
        return true;
    }
    SCREEN_PRIMES.iter().any(|&q| {
        let Some(red) = p.coeffs().iter().map(|c| rational_mod(c, q)).collect::<Option<Vec<u64>>>() else {
            return false;
        };
        if red[deg] == 0 {
            return false;
        }
        let der: Vec<u64> = (1..=deg)
            .map(|i| ((red[i] as u128 * i as u128) % q as u128) as u64)
            .collect();
        gcd_degree_mod(red, der, q) == 0
    })
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Degree of `gcd(a, b)` over `F_q`.
fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>, q: u64) -> usize {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = mod_inverse(*b.last().unwrap(), q).expect("nonzero leading coefficient");
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let factor = ((*a.last().unwrap() as u128 * inv as u128) % q as u128) as u64;
            for (i, &c) in b.iter().enumerate() {
                let sub = ((factor as u128 * c as u128) % q as u128) as u64;
                a[shift + i] = (a[shift + i] + q - sub) % q;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn sq() -> RationalMap {
        RationalMap::from_int_poly(&[0, 0, 1])
    }

    #[test]
    fn power_map_depth() {
        let cert = choose_depth(&sq(), &sq(), &ProjPoint::int(3), &ProjPoint::int(2), &int(1), &int(1), 0.1, &Budget::default())
            .unwrap();
        assert!(cert.replay());
        assert_eq!(cert.max_multiplicity, 1);
        // 4 log 6 / 2^D < 0.05 first holds at D = 8
        assert_eq!(cert.depth, 8);
        assert_eq!(cert.constant, 0.0);
    }

    #[test]
    fn exceptional_target_rejected() {
        let err = choose_depth(&sq(), &sq(), &ProjPoint::int(3), &ProjPoint::int(2), &int(0), &int(1), 0.1, &Budget::default())
            .unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
    }

    #[test]
    fn fiber_multiplicities() {
        assert_eq!(fiber_multiplicity(&sq(), &int(1)).unwrap(), 1);
        assert_eq!(fiber_multiplicity(&sq(), &int(0)).unwrap(), 2);
        // x^2 - 1 has the critical point 0 over -1 and 0 over itself after two steps
        let f = RationalMap::from_int_poly(&[-1, 0, 1]);
        assert_eq!(fiber_multiplicity(&f, &int(-1)).unwrap(), 2);
        let f2 = f.compose(&f);
        assert_eq!(fiber_multiplicity(&f2, &int(0)).unwrap(), 2);
        assert_eq!(fiber_multiplicity(&f2, &int(5)).unwrap(), 1);
        // 1/x^2 has infinity over 0 with multiplicity 2
        let inv = RationalMap::new(Polynomial::one(), Polynomial::from_ints(&[0, 0, 1])).unwrap();
        assert_eq!(fiber_multiplicity(&inv, &int(0)).unwrap(), 2);
    }

    #[test]
    fn screen_agrees_with_yun() {
        for c in [[-1i64, 0, 1], [0, 0, 1], [1, 2, 1], [5, 0, 1]] {
            let p = Polynomial::from_ints(&c);
            let yun = max_root_multiplicity(&p).unwrap();
            if squarefree_by_reduction(&p) {
                assert_eq!(yun, 1);
            }
        }
    }

    #[test]
    fn tight_budget_is_reported() {
        let tight = Budget { symbolic_degree: 16, ..Budget::default() };
        let err = choose_depth(&sq(), &sq(), &ProjPoint::int(3), &ProjPoint::int(2), &int(1), &int(1), 0.1, &tight)
            .unwrap_err();
        assert!(err.is_budget());
    }
}
