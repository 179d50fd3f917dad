//! Exceptional points, special maps, preperiodicity and independence tests.

mod exceptional;
mod genericity;
mod special;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

pub use exceptional::is_exceptional;
pub use genericity::{monomials, probe_genericity, CurveRelation, ProbeOutcome, ROW_MARGIN};
pub use special::{chebyshev, commutes, power, special_form, SpecialForm, SpecialTag};

use crate::arith::{factor, Rational};
use crate::error::{Error, Result};
use crate::heights::{canonical_height, orbit_kind, OrbitKind};
use crate::poly::{ProjPoint, RationalMap};

/// Tolerance for the canonical-height fallback in [`is_preperiodic`].
const PREPERIODIC_HEIGHT_TOL: f64 = 1e-6;

/// Decide preperiodicity exactly, using the escape height to stop wandering
/// orbits. When `max_steps` runs out first, a certified positive canonical
/// height still proves the orbit infinite.
pub fn is_preperiodic(map: &RationalMap, point: &ProjPoint, max_steps: usize) -> Result<bool> {
    match orbit_kind(map, point, max_steps) {
        Ok(OrbitKind::Preperiodic { .. }) => Ok(true),
        Ok(OrbitKind::Wandering { .. }) => Ok(false),
        Err(Error::Indeterminate(msg)) => {
            let est = canonical_height(map, point, PREPERIODIC_HEIGHT_TOL)?;
            if est.preperiodic {
                Ok(true)
            } else if est.lower() > 0.0 {
                Ok(false)
            } else {
                Err(Error::Indeterminate(msg))
            }
        }
        Err(e) => Err(e),
    }
}

/// Prime exponent vector of `|x|`, signs dropped as torsion.
fn exponents(x: &Rational) -> Result<BTreeMap<BigUint, i64>> {
    let mut out = BTreeMap::new();
    for (part, sign) in [(x.numer(), 1i64), (x.denom(), -1)] {
        for (p, e) in factor(part)?.factors {
            *out.entry(p).or_insert(0) += sign * e as i64;
        }
    }
    Ok(out)
}

/// True iff no relation `a^m = ± b^n` holds with `(m, n) != (0, 0)`.
pub fn mult_indep(a: &Rational, b: &Rational) -> Result<bool> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::domain("multiplicative independence of zero"));
    }
    let ea = exponents(a)?;
    let eb = exponents(b)?;
    if ea.is_empty() || eb.is_empty() {
        return Ok(false);
    }
    let keys: Vec<&BigUint> = ea.keys().chain(eb.keys()).collect();
    let get = |m: &BTreeMap<BigUint, i64>, p: &BigUint| BigInt::from(*m.get(p).unwrap_or(&0));
    // rank two iff some 2x2 minor is nonzero
    for p in &keys {
        for q in &keys {
            let minor = get(&ea, p) * get(&eb, q) - get(&ea, q) * get(&eb, p);
            if !minor.is_zero() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rational};
    use proptest::prelude::*;

    #[test]
    fn independence_examples() {
        assert!(!mult_indep(&int(125), &int(25)).unwrap());
        assert!(mult_indep(&int(2), &int(3)).unwrap());
        assert!(mult_indep(&int(6), &int(12)).unwrap());
        assert!(!mult_indep(&int(-8), &rational(1, 4)).unwrap());
        assert!(!mult_indep(&int(1), &int(7)).unwrap());
        assert!(!mult_indep(&int(-1), &int(7)).unwrap());
        assert!(mult_indep(&int(0), &int(7)).is_err());
    }

    #[test]
    fn preperiodic_examples() {
        let sq = RationalMap::from_int_poly(&[0, 0, 1]);
        assert!(is_preperiodic(&sq, &ProjPoint::int(1), 100).unwrap());
        assert!(is_preperiodic(&RationalMap::from_int_poly(&[-1, 0, 1]), &ProjPoint::int(0), 100).unwrap());
        assert!(!is_preperiodic(&sq, &ProjPoint::int(3), 100).unwrap());
        assert!(is_preperiodic(&sq, &ProjPoint::Infinity, 100).unwrap());
        assert!(is_preperiodic(&sq, &ProjPoint::int(-1), 100).unwrap());
    }

    #[test]
    fn zero_steps_falls_back_to_height() {
        let sq = RationalMap::from_int_poly(&[0, 0, 1]);
        // 3 is above the escape height at step 0, so even one step decides it
        assert!(!is_preperiodic(&sq, &ProjPoint::int(3), 0).unwrap());
        let shifted = RationalMap::from_int_poly(&[-2, 0, 1]);
        assert!(is_preperiodic(&shifted, &ProjPoint::int(1), 0).unwrap());
    }

    proptest! {
        #[test]
        fn independence_symmetric_and_power_invariant(
            a in 1i64..400, b in 1i64..400, k in 1u32..4, neg in any::<bool>(), inv in any::<bool>(),
        ) {
            let (a, b) = (int(a), int(b));
            let base = mult_indep(&a, &b).unwrap();
            prop_assert_eq!(base, mult_indep(&b, &a).unwrap());
            let mut ak = num_traits::pow(a.clone(), k as usize);
            if inv { ak = ak.recip(); }
            if neg { ak = -ak; }
            prop_assert_eq!(base, mult_indep(&ak, &b).unwrap());
        }
    }
}
