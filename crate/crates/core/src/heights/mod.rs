//! Weil and canonical heights on the projective line, and the gcd heights
//! `sum_v min(v+(x), v+(y))` with their finite and truncated variants.

mod canonical;
mod discrepancy;
mod gcd;

use num_bigint::BigUint;
use num_traits::{Signed, Zero};

pub use canonical::{canonical_height, orbit_kind, HeightEstimate, OrbitKind, DEFAULT_ORBIT_STEPS};
pub use discrepancy::Discrepancy;
pub use gcd::{
    hgcd, hgcd_excluding, hgcd_fin, hgcd_fin_real, hgcd_real, numerator_gcd, numerator_gcd_excluding,
};

use crate::arith::{factor, is_prime, Place, Real, DEFAULT_PRECISION};
use crate::error::{Error, Result};
use crate::poly::{ProjPoint, RationalMap};

/// `log max(|p|, |q|)` for `x = p/q` in lowest terms; zero at infinity.
pub fn weil_height(point: &ProjPoint) -> Real {
    let (x, y) = point.coordinates();
    Real::ln_bigint_abs(&x.abs().max(y.abs()), DEFAULT_PRECISION)
}

/// `|h(f(x)) - d h(x)| <= C_f` for every rational `x`.
pub fn discrepancy_bound(map: &RationalMap) -> Result<Real> {
    Ok(Discrepancy::new(map)?.constant(DEFAULT_PRECISION))
}

/// Sorted, deduplicated set of finite places.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PlaceSet {
    primes: Vec<BigUint>,
}

impl PlaceSet {
    pub fn empty() -> Self {
        PlaceSet::default()
    }

    /// Every entry must be prime.
    pub fn new(primes: impl IntoIterator<Item = BigUint>) -> Result<Self> {
        let mut primes: Vec<BigUint> = primes.into_iter().collect();
        if let Some(bad) = primes.iter().find(|p| !is_prime(p)) {
            return Err(Error::domain(format!("{bad} is not prime")));
        }
        primes.sort();
        primes.dedup();
        Ok(PlaceSet { primes })
    }

    pub fn primes(&self) -> &[BigUint] {
        &self.primes
    }

    pub fn places(&self) -> Vec<Place> {
        self.primes.iter().cloned().map(Place::Finite).collect()
    }

    pub fn contains(&self, p: &BigUint) -> bool {
        self.primes.binary_search(p).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn union(&self, other: &PlaceSet) -> PlaceSet {
        let mut primes = self.primes.clone();
        primes.extend(other.primes.iter().cloned());
        primes.sort();
        primes.dedup();
        PlaceSet { primes }
    }
}

/// Primes dividing a leading coefficient of either numerator or denominator
/// of either map.
pub fn bad_places(first: &RationalMap, second: &RationalMap) -> Result<PlaceSet> {
    let mut primes = Vec::new();
    for map in [first, second] {
        let (a, b) = map.leading_coefficients();
        for c in [a, b] {
            if c.is_zero() {
                continue;
            }
            primes.extend(factor(&c)?.factors.into_iter().map(|(p, _)| p));
        }
    }
    PlaceSet::new(primes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;

    #[test]
    fn weil_examples() {
        let close = |p: ProjPoint, v: f64| (weil_height(&p).to_f64() - v).abs() < 1e-15;
        assert!(close(ProjPoint::Affine(rational(3, 2)), 3f64.ln()));
        assert!(close(ProjPoint::int(7), 7f64.ln()));
        assert!(close(ProjPoint::Infinity, 0.0));
        assert!(close(ProjPoint::int(0), 0.0));
    }

    #[test]
    fn bad_place_examples() {
        let x8 = RationalMap::from_int_poly(&[0, 0, 0, 0, 0, 0, 0, 0, 1]);
        assert!(bad_places(&x8, &x8).unwrap().is_empty());
        let six = RationalMap::from_int_poly(&[1, 0, 6]);
        let sq = RationalMap::from_int_poly(&[0, 0, 1]);
        let s = bad_places(&six, &sq).unwrap();
        assert_eq!(s.primes(), &[BigUint::from(2u32), BigUint::from(3u32)]);
        let monic = RationalMap::from_int_poly(&[5, -3, 1]);
        assert!(bad_places(&monic, &monic).unwrap().is_empty());
    }

    #[test]
    fn place_set_rejects_composites() {
        assert!(PlaceSet::new([BigUint::from(4u32)]).is_err());
        let s = PlaceSet::new([3u32, 2, 3].map(BigUint::from)).unwrap();
        assert_eq!(s.primes().len(), 2);
        assert!(s.contains(&BigUint::from(2u32)));
    }
}
