use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::polynomial::{primitive_scale_of, Polynomial};
use crate::arith::{format_rational, parse_rational, rational_approx_digits, Rational};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// A point of the projective line over the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ProjPoint {
    Affine(Rational),
    Infinity,
}

impl ProjPoint {
    pub fn int(n: i64) -> Self {
        ProjPoint::Affine(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn affine(&self) -> Option<&Rational> {
        match self {
            ProjPoint::Affine(x) => Some(x),
            ProjPoint::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }

    /// Parse `"p/q"`, `"p"`, or `"inf"`.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "oo" => Ok(ProjPoint::Infinity),
            other => Ok(ProjPoint::Affine(parse_rational(other)?)),
        }
    }

    /// Coprime integer coordinates `(X, Y)` with `x = X/Y`; infinity is `(1, 0)`.
    pub fn coordinates(&self) -> (BigInt, BigInt) {
        match self {
            ProjPoint::Affine(x) => (x.numer().clone(), x.denom().clone()),
            ProjPoint::Infinity => (BigInt::one(), BigInt::zero()),
        }
    }

    pub fn approx_digits(&self) -> u64 {
        match self {
            ProjPoint::Affine(x) => rational_approx_digits(x),
            ProjPoint::Infinity => 1,
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Affine(x) => f.write_str(&format_rational(x)),
            ProjPoint::Infinity => f.write_str("inf"),
        }
    }
}

/// A self-map of the projective line `num/den`, stored with integer
/// coefficients, coprime numerator and denominator, overall content one and
/// positive leading denominator coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMap {
    num: Polynomial,
    den: Polynomial,
}

impl RationalMap {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::domain("rational map with zero denominator"));
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree_or_zero() > 0 {
            (num.div_rem(&g)?.0, den.div_rem(&g)?.0)
        } else {
            (num, den)
        };
        // the denominator's leading coefficient comes last, so it ends up positive
        let scale = primitive_scale_of(num.coeffs().iter().chain(den.coeffs().iter()));
        let num = num.scale(&scale);
        let den = den.scale(&scale);
        let map = RationalMap { num, den };
        if map.degree() == 0 {
            return Err(Error::domain("constant map has degree 0"));
        }
        Ok(map)
    }

    pub fn polynomial(p: Polynomial) -> Result<Self> {
        RationalMap::new(p, Polynomial::one())
    }

    pub fn from_int_poly(coeffs: &[i64]) -> Self {
        RationalMap::polynomial(Polynomial::from_ints(coeffs)).expect("nonconstant polynomial")
    }

    pub fn identity() -> Self {
        RationalMap::from_int_poly(&[0, 1])
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.num.degree_or_zero().max(self.den.degree_or_zero())
    }

    /// Denominator is a nonzero constant.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The map as a polynomial over the rationals, if it is one.
    pub fn as_polynomial(&self) -> Option<Polynomial> {
        self.is_polynomial()
            .then(|| self.num.scale(&self.den.coeff(0).recip()))
    }

    /// Polynomial with integer coefficients (denominator exactly one).
    pub fn is_integral_polynomial(&self) -> bool {
        self.is_polynomial() && self.den.coeff(0).is_one()
    }

    pub fn eval(&self, p: &ProjPoint) -> ProjPoint {
        match p {
            ProjPoint::Affine(x) => {
                let d = self.den.eval(x);
                if d.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Affine(self.num.eval(x) / d)
                }
            }
            ProjPoint::Infinity => {
                let dn = self.num.degree_or_zero();
                let dd = self.den.degree_or_zero();
                if dn > dd {
                    ProjPoint::Infinity
                } else if dn < dd {
                    ProjPoint::Affine(BigRational::zero())
                } else {
                    ProjPoint::Affine(self.num.leading().unwrap() / self.den.leading().unwrap())
                }
            }
        }
    }

    /// Orbit `[P, f(P), ..., f^n(P)]` by repeated evaluation.
    pub fn iterate(&self, start: &ProjPoint, n: usize, budget: &Budget) -> Result<Vec<ProjPoint>> {
        let mut out = Vec::with_capacity(n + 1);
        let mut total = start.approx_digits();
        out.push(start.clone());
        for step in 1..=n {
            let next = self.eval(out.last().unwrap());
            total += next.approx_digits();
            if total > budget.orbit_digits {
                return Err(Error::OrbitBudget {
                    last_step: step - 1,
                    digits: total,
                    budget: budget.orbit_digits,
                });
            }
            out.push(next);
        }
        Ok(out)
    }

    /// `self ∘ inner`, computed on homogeneous forms.
    pub fn compose(&self, inner: &RationalMap) -> RationalMap {
        let d = self.degree();
        let f_num = homogeneous_substitute(&self.num, d, &inner.num, &inner.den);
        let f_den = homogeneous_substitute(&self.den, d, &inner.num, &inner.den);
        RationalMap::new(f_num, f_den).expect("composition of nonconstant maps is nonconstant")
    }

    /// The `n`-th iterate as a single map, `n >= 1`.
    pub fn self_compose(&self, n: u32, budget: &Budget) -> Result<RationalMap> {
        if n == 0 {
            return Err(Error::domain("self_compose needs n >= 1"));
        }
        let degree = (self.degree() as u64).checked_pow(n).unwrap_or(u64::MAX);
        if degree > budget.symbolic_degree {
            return Err(Error::DegreeBudget {
                degree,
                budget: budget.symbolic_degree,
            });
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = self.compose(&acc);
        }
        Ok(acc)
    }

    /// Leading coefficients of numerator and denominator.
    pub fn leading_coefficients(&self) -> (BigInt, BigInt) {
        (
            self.num.leading().map(|c| c.to_integer()).unwrap_or_default(),
            self.den.leading().map(|c| c.to_integer()).unwrap_or_default(),
        )
    }
}

/// `P^h(A, B) = sum c_i A^i B^(d-i)`.
fn homogeneous_substitute(p: &Polynomial, d: usize, a: &Polynomial, b: &Polynomial) -> Polynomial {
    let mut a_pows = vec![Polynomial::one()];
    let mut b_pows = vec![Polynomial::one()];
    for k in 1..=d {
        a_pows.push(&a_pows[k - 1] * a);
        b_pows.push(&b_pows[k - 1] * b);
    }
    let mut acc = Polynomial::zero();
    for (i, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = (&a_pows[i] * &b_pows[d - i]).scale(c);
        acc = &acc + &term;
    }
    acc
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.coeff(0).is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// `x -> (a x + b)/(c x + d)` with `ad - bc != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mobius {
    a: Rational,
    b: Rational,
    c: Rational,
    d: Rational,
}

impl Mobius {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self> {
        if (&a * &d - &b * &c).is_zero() {
            return Err(Error::domain("Mobius transformation with zero determinant"));
        }
        Ok(Mobius { a, b, c, d })
    }

    pub fn identity() -> Self {
        Mobius::affine(BigRational::one(), BigRational::zero()).unwrap()
    }

    /// `x -> u x + v`
    pub fn affine(u: Rational, v: Rational) -> Result<Self> {
        Mobius::new(u, v, BigRational::zero(), BigRational::one())
    }

    pub fn translation(v: Rational) -> Self {
        Mobius::affine(BigRational::one(), v).unwrap()
    }

    /// `x -> 1/x`
    pub fn inversion() -> Self {
        Mobius::new(
            BigRational::zero(),
            BigRational::one(),
            BigRational::one(),
            BigRational::zero(),
        )
        .unwrap()
    }

    pub fn entries(&self) -> [&Rational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn determinant(&self) -> Rational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn inverse(&self) -> Mobius {
        Mobius {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }

    /// `self ∘ other`
    pub fn then_after(&self, other: &Mobius) -> Mobius {
        Mobius {
            a: &self.a * &other.a + &self.b * &other.c,
            b: &self.a * &other.b + &self.b * &other.d,
            c: &self.c * &other.a + &self.d * &other.c,
            d: &self.c * &other.b + &self.d * &other.d,
        }
    }

    pub fn as_map(&self) -> RationalMap {
        RationalMap::new(
            Polynomial::new(vec![self.b.clone(), self.a.clone()]),
            Polynomial::new(vec![self.d.clone(), self.c.clone()]),
        )
        .expect("invertible Mobius map has degree 1")
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        match p {
            ProjPoint::Affine(x) => {
                let den = &self.c * x + &self.d;
                if den.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Affine((&self.a * x + &self.b) / den)
                }
            }
            ProjPoint::Infinity => {
                if self.c.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Affine(&self.a / &self.c)
                }
            }
        }
    }
}

/// `σ ∘ f ∘ σ^-1`
pub fn conjugate(f: &RationalMap, sigma: &Mobius) -> RationalMap {
    sigma.as_map().compose(&f.compose(&sigma.inverse().as_map()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rational};
    use proptest::prelude::*;

    fn poly_map(c: &[i64]) -> RationalMap {
        RationalMap::from_int_poly(c)
    }

    #[test]
    fn normalization_is_unique() {
        // (2x^2 + 2)/(2x) and (-x^2 - 1)/(-x) are the same map
        let a = RationalMap::new(Polynomial::from_ints(&[2, 0, 2]), Polynomial::from_ints(&[0, 2])).unwrap();
        let b = RationalMap::new(Polynomial::from_ints(&[-1, 0, -1]), Polynomial::from_ints(&[0, -1])).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.num(), &Polynomial::from_ints(&[1, 0, 1]));
        assert_eq!(a.den(), &Polynomial::from_ints(&[0, 1]));
        // common factors cancel: (x^2 - 1)/(x - 1) = x + 1
        let c = RationalMap::new(Polynomial::from_ints(&[-1, 0, 1]), Polynomial::from_ints(&[-1, 1])).unwrap();
        assert_eq!(c, poly_map(&[1, 1]));
        // rational coefficients are cleared
        let h = RationalMap::polynomial(Polynomial::new(vec![rational(1, 2), int(0), rational(1, 3)])).unwrap();
        assert_eq!(h.num(), &Polynomial::from_ints(&[3, 0, 2]));
        assert_eq!(h.den(), &Polynomial::from_ints(&[6]));
    }

    #[test]
    fn constant_maps_rejected() {
        assert!(RationalMap::polynomial(Polynomial::from_ints(&[3])).is_err());
        assert!(RationalMap::new(Polynomial::from_ints(&[0, 1]), Polynomial::zero()).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let sq = poly_map(&[0, 0, 1]);
        assert_eq!(sq.eval(&ProjPoint::int(3)), ProjPoint::int(9));
        assert_eq!(sq.eval(&ProjPoint::Infinity), ProjPoint::Infinity);
        let g = RationalMap::new(Polynomial::from_ints(&[1, 0, 1]), Polynomial::from_ints(&[0, 1])).unwrap();
        assert_eq!(g.eval(&ProjPoint::int(0)), ProjPoint::Infinity);
        let inv = Mobius::inversion().as_map();
        assert_eq!(inv.eval(&ProjPoint::Infinity), ProjPoint::int(0));
        let m = RationalMap::new(Polynomial::from_ints(&[1, 3]), Polynomial::from_ints(&[5, 2])).unwrap();
        assert_eq!(m.eval(&ProjPoint::Infinity), ProjPoint::Affine(rational(3, 2)));
    }

    #[test]
    fn iterate_examples() {
        let f = poly_map(&[0, 1, 0, 1]);
        let b = Budget::default();
        let orbit = f.iterate(&ProjPoint::int(2), 2, &b).unwrap();
        assert_eq!(orbit, vec![ProjPoint::int(2), ProjPoint::int(10), ProjPoint::int(1010)]);
        assert_eq!(f.iterate(&ProjPoint::int(7), 0, &b).unwrap(), vec![ProjPoint::int(7)]);
        let sq = poly_map(&[0, 0, 1]);
        let orbit = sq.iterate(&ProjPoint::int(125), 2, &b).unwrap();
        assert_eq!(orbit[2], ProjPoint::int(244_140_625));
    }

    #[test]
    fn iterate_respects_digit_budget() {
        let sq = poly_map(&[0, 0, 1]);
        let tight = Budget {
            orbit_digits: 100,
            ..Budget::default()
        };
        match sq.iterate(&ProjPoint::int(3), 20, &tight) {
            Err(Error::OrbitBudget { last_step, .. }) => assert!(last_step < 20),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn self_compose_examples() {
        let b = Budget::default();
        assert_eq!(poly_map(&[0, 0, 1]).self_compose(3, &b).unwrap(), poly_map(&[0, 0, 0, 0, 0, 0, 0, 0, 1]));
        assert_eq!(poly_map(&[1, 0, 1]).self_compose(2, &b).unwrap(), poly_map(&[2, 0, 2, 0, 1]));
        assert_eq!(Mobius::inversion().as_map().self_compose(2, &b).unwrap(), RationalMap::identity());
        let tight = Budget {
            symbolic_degree: 100,
            ..Budget::default()
        };
        assert!(matches!(
            poly_map(&[0, 0, 1]).self_compose(7, &tight),
            Err(Error::DegreeBudget { degree: 128, .. })
        ));
    }

    #[test]
    fn conjugate_examples() {
        let sq = poly_map(&[0, 0, 1]);
        assert_eq!(conjugate(&sq, &Mobius::identity()), sq);
        assert_eq!(conjugate(&sq, &Mobius::translation(int(1))), poly_map(&[2, -2, 1]));
        let c = conjugate(&sq, &Mobius::inversion());
        assert_eq!(c, sq);
    }

    #[test]
    fn mobius_inverse_round_trip() {
        let m = Mobius::new(int(2), int(1), int(1), int(1)).unwrap();
        let id = m.then_after(&m.inverse());
        for k in -3..4 {
            assert_eq!(id.apply(&ProjPoint::int(k)), ProjPoint::int(k));
        }
        assert!(Mobius::new(int(1), int(2), int(2), int(4)).is_err());
    }

    fn small_map() -> impl Strategy<Value = RationalMap> {
        (
            proptest::collection::vec(-3i64..4, 1..4),
            proptest::collection::vec(-3i64..4, 1..3),
        )
            .prop_filter_map("nonconstant", |(n, d)| {
                RationalMap::new(Polynomial::from_ints(&n), Polynomial::from_ints(&d)).ok()
            })
    }

    fn small_point() -> impl Strategy<Value = ProjPoint> {
        (-20i64..20, 1i64..20).prop_map(|(n, d)| ProjPoint::Affine(rational(n, d)))
    }

    fn small_mobius() -> impl Strategy<Value = Mobius> {
        (-3i64..4, -3i64..4, -3i64..4, -3i64..4)
            .prop_filter_map("invertible", |(a, b, c, d)| Mobius::new(int(a), int(b), int(c), int(d)).ok())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn symbolic_iterate_matches_pointwise(f in small_map(), n in 1u32..4, p in small_point()) {
            let b = Budget::default();
            let fd = f.self_compose(n, &b).unwrap();
            let orbit = f.iterate(&p, n as usize, &b).unwrap();
            prop_assert_eq!(&fd.eval(&p), orbit.last().unwrap());
        }

        #[test]
        fn conjugation_round_trip(f in small_map(), s in small_mobius()) {
            let g = conjugate(&f, &s);
            prop_assert_eq!(g.degree(), f.degree());
            prop_assert_eq!(conjugate(&g, &s.inverse()), f);
        }
    }
}
