//! Intersection theory on the blowup of `P^1 x P^1` at `s` points.
//!
//! A class is stored as `(a, b; c_1..c_s)` meaning `π^*(type (a, b)) + sum c_i E_i`
//! with `E_i` the exceptional curves. The pairing is
//! `a_1 b_2 + a_2 b_1 - sum c_i c'_i`, so `E_i^2 = -1` and `E_i` pairs to zero
//! with every pullback. Strict transforms of curves carry `c_i = -μ_i`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{format_rational, int, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClass {
    pub a: Rational,
    pub b: Rational,
    pub exceptional: Vec<Rational>,
}

impl DivisorClass {
    pub fn new(a: Rational, b: Rational, exceptional: Vec<Rational>) -> Self {
        DivisorClass { a, b, exceptional }
    }

    /// `π^*` of a type-`(a, b)` class.
    pub fn pullback(surface: &BlowupSurface, a: Rational, b: Rational) -> Self {
        DivisorClass::new(a, b, vec![Rational::zero(); surface.s])
    }

    /// `E_i`, zero-based.
    pub fn exceptional_curve(surface: &BlowupSurface, i: usize) -> Result<Self> {
        if i >= surface.s {
            return Err(Error::domain(format!("exceptional curve {i} on a surface with s = {}", surface.s)));
        }
        let mut c = vec![Rational::zero(); surface.s];
        c[i] = Rational::one();
        Ok(DivisorClass::new(Rational::zero(), Rational::zero(), c))
    }

    /// Strict transform of an irreducible type-`(a, b)` curve with the given
    /// multiplicities at the blown-up points.
    pub fn strict_transform(a: i64, b: i64, multiplicities: &[i64]) -> Self {
        DivisorClass::new(int(a), int(b), multiplicities.iter().map(|&m| int(-m)).collect())
    }

    /// Coefficients subtracted along the exceptional curves, `-c_i`.
    pub fn subtracted_multiplicities(&self) -> Vec<Rational> {
        self.exceptional.iter().map(|c| -c.clone()).collect()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        DivisorClass::new(
            &self.a * k,
            &self.b * k,
            self.exceptional.iter().map(|c| c * k).collect(),
        )
    }

    pub fn add(&self, other: &DivisorClass) -> Result<Self> {
        if self.exceptional.len() != other.exceptional.len() {
            return Err(Error::domain("classes live on different blowups"));
        }
        Ok(DivisorClass::new(
            &self.a + &other.a,
            &self.b + &other.b,
            self.exceptional.iter().zip(&other.exceptional).map(|(x, y)| x + y).collect(),
        ))
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}", format_rational(&self.a), format_rational(&self.b))?;
        if !self.exceptional.is_empty() {
            let cs: Vec<String> = self.exceptional.iter().map(format_rational).collect();
            write!(f, "; {}", cs.join(", "))?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlowupSurface {
    pub s: usize,
}

impl BlowupSurface {
    pub fn new(s: usize) -> Self {
        BlowupSurface { s }
    }

    fn check(&self, d: &DivisorClass) -> Result<()> {
        if d.exceptional.len() != self.s {
            return Err(Error::domain(format!(
                "class has {} exceptional coefficients, surface has s = {}",
                d.exceptional.len(),
                self.s
            )));
        }
        Ok(())
    }

    pub fn intersect(&self, d1: &DivisorClass, d2: &DivisorClass) -> Result<Rational> {
        self.check(d1)?;
        self.check(d2)?;
        let mut v = &d1.a * &d2.b + &d2.a * &d1.b;
        for (x, y) in d1.exceptional.iter().zip(&d2.exceptional) {
            v -= x * y;
        }
        Ok(v)
    }

    /// `π^*K + E_1 + ... + E_s` with `K` of type `(-2, -2)`.
    pub fn canonical_class(&self) -> DivisorClass {
        DivisorClass::new(int(-2), int(-2), vec![Rational::one(); self.s])
    }

    /// `π^*(1, 1) - (1/N)(E_1 + ... + E_s)`.
    pub fn perturbed_ample(&self, n: u32) -> Result<DivisorClass> {
        if n == 0 {
            return Err(Error::domain("N must be at least 1"));
        }
        let c = Rational::new((-1).into(), n.into());
        Ok(DivisorClass::new(int(1), int(1), vec![c; self.s]))
    }

    /// The three checks of the ampleness lemma for `π^*(1, 1) - (1/N) sum E_i`.
    pub fn ample_check(&self, n: u32) -> Result<AmpleVerdict> {
        let a = self.perturbed_ample(n)?;
        let s = self.s;
        let self_intersection = self.intersect(&a, &a)?;
        let exceptional_pairing = if s == 0 {
            None
        } else {
            Some(self.intersect(&a, &DivisorClass::exceptional_curve(self, 0)?)?)
        };
        let curve = min_curve_pairing(s, n);
        let ample = self_intersection.is_positive()
            && exceptional_pairing.as_ref().is_none_or(|v| v.is_positive())
            && curve.value.is_positive();
        let failed = if !curve.value.is_positive() {
            Some(FailedCheck::Curve)
        } else if !self_intersection.is_positive() {
            Some(FailedCheck::SelfIntersection)
        } else if exceptional_pairing.as_ref().is_some_and(|v| !v.is_positive()) {
            Some(FailedCheck::Exceptional)
        } else {
            None
        };
        Ok(AmpleVerdict {
            ample,
            s,
            n,
            self_intersection,
            exceptional_pairing,
            curve,
            failed,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailedCheck {
    Curve,
    Exceptional,
    SelfIntersection,
}

/// Minimizing strict transform among irreducible type-`(a, b)` curves whose
/// multiplicities obey `μ_i <= a + b - 1` for `a + b >= 2` and `μ_i <= 1` for
/// lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveCase {
    pub a: u32,
    pub b: u32,
    pub multiplicities: Vec<u32>,
    pub value: Rational,
    /// The pairing decreases without bound along the family.
    pub unbounded_below: bool,
}

/// `a + b - (1/N) sum μ_i` is `n - s cap(n)/N` at total degree `n` with the
/// largest allowed multiplicities, `cap(1) = 1`, `cap(n) = n - 1`. For
/// `n >= 2` this is `n (1 - s/N) + s/N`, increasing when `N >= s`, so the
/// minimum over the family sits at `n = 1`; when `N < s` it already fails there
/// and the family is unbounded below.
fn min_curve_pairing(s: usize, n: u32) -> CurveCase {
    let value = int(1) - Rational::new((s as i64).into(), n.into());
    CurveCase {
        a: 1,
        b: 0,
        multiplicities: vec![1; s],
        value,
        unbounded_below: (n as usize) < s,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmpleVerdict {
    pub ample: bool,
    pub s: usize,
    pub n: u32,
    pub self_intersection: Rational,
    pub exceptional_pairing: Option<Rational>,
    pub curve: CurveCase,
    pub failed: Option<FailedCheck>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;
    use proptest::prelude::*;

    #[test]
    fn pairing_examples() {
        let x = BlowupSurface::new(3);
        let h = DivisorClass::pullback(&x, int(1), int(1));
        assert_eq!(x.intersect(&h, &h).unwrap(), int(2));
        for i in 0..3 {
            let e = DivisorClass::exceptional_curve(&x, i).unwrap();
            assert_eq!(x.intersect(&e, &e).unwrap(), int(-1));
            assert_eq!(x.intersect(&h, &e).unwrap(), int(0));
            // adjunction: K.E = -2 - E^2 = -1
            assert_eq!(x.intersect(&x.canonical_class(), &e).unwrap(), int(-1));
        }
        assert!(x.intersect(&h, &DivisorClass::pullback(&BlowupSurface::new(2), int(1), int(0))).is_err());
    }

    #[test]
    fn canonical_class_examples() {
        let x0 = BlowupSurface::new(0);
        assert_eq!(x0.canonical_class(), DivisorClass::new(int(-2), int(-2), vec![]));
        assert_eq!(BlowupSurface::new(3).canonical_class().to_string(), "(-2, -2; 1, 1, 1)");
        let h = DivisorClass::pullback(&x0, int(1), int(1));
        assert_eq!(x0.intersect(&x0.canonical_class(), &h).unwrap(), int(-4));
    }

    #[test]
    fn perturbed_class_examples() {
        let x = BlowupSurface::new(4);
        let a = x.perturbed_ample(5).unwrap();
        assert_eq!(x.intersect(&a, &a).unwrap(), rational(46, 25));
        assert_eq!(a.subtracted_multiplicities(), vec![rational(1, 5); 4]);
        let e = DivisorClass::exceptional_curve(&x, 2).unwrap();
        assert_eq!(x.intersect(&a, &e).unwrap(), rational(1, 5));
        let c = DivisorClass::strict_transform(2, 3, &[1, 2, 0, 4]);
        assert_eq!(x.intersect(&a, &c).unwrap(), int(5) - rational(7, 5));
        let x0 = BlowupSurface::new(0);
        let a0 = x0.perturbed_ample(1).unwrap();
        assert_eq!(x0.intersect(&a0, &a0).unwrap(), int(2));
    }

    #[test]
    fn ampleness_examples() {
        assert!(BlowupSurface::new(4).ample_check(5).unwrap().ample);
        let v = BlowupSurface::new(5).ample_check(5).unwrap();
        assert!(!v.ample);
        assert_eq!(v.failed, Some(FailedCheck::Curve));
        assert!(v.curve.value.is_zero());
        assert!(BlowupSurface::new(0).ample_check(1).unwrap().ample);
    }

    #[test]
    fn ample_exactly_when_n_exceeds_s() {
        for s in 0..=8 {
            for n in 1..=12u32 {
                assert_eq!(BlowupSurface::new(s).ample_check(n).unwrap().ample, n as usize > s, "s={s} N={n}");
            }
        }
    }

    /// Brute force over the constrained family for small degrees.
    #[test]
    fn closed_form_matches_enumeration() {
        for s in 0..=5usize {
            for n in 1..=7u32 {
                let mut best: Option<Rational> = None;
                for a in 0..=4i64 {
                    for b in 0..=4i64 {
                        let deg = a + b;
                        if deg == 0 {
                            continue;
                        }
                        let cap = if deg >= 2 { deg - 1 } else { 1 };
                        let v = int(deg) - Rational::new((s as i64 * cap).into(), n.into());
                        best = Some(best.map_or(v.clone(), |b: Rational| b.min(v)));
                    }
                }
                let closed = min_curve_pairing(s, n);
                if n as usize >= s {
                    assert_eq!(closed.value, best.unwrap());
                } else {
                    assert!(best.unwrap() <= closed.value);
                }
            }
        }
    }

    fn class(s: usize) -> impl Strategy<Value = DivisorClass> {
        (-9i64..9, -9i64..9, proptest::collection::vec((-9i64..9, 1i64..5), s))
            .prop_map(|(a, b, c)| {
                DivisorClass::new(int(a), int(b), c.into_iter().map(|(n, d)| rational(n, d)).collect())
            })
    }

    proptest! {
        #[test]
        fn pairing_symmetric_and_bilinear(x in class(3), y in class(3), z in class(3), k in -5i64..5) {
            let surf = BlowupSurface::new(3);
            prop_assert_eq!(surf.intersect(&x, &y).unwrap(), surf.intersect(&y, &x).unwrap());
            let lhs = surf.intersect(&x.scale(&int(k)).add(&y).unwrap(), &z).unwrap();
            let rhs = int(k) * surf.intersect(&x, &z).unwrap() + surf.intersect(&y, &z).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn pullbacks_ignore_exceptional_part(a in -9i64..9, b in -9i64..9, y in class(4)) {
            let surf = BlowupSurface::new(4);
            let pb = DivisorClass::pullback(&surf, int(a), int(b));
            let flat = DivisorClass::pullback(&surf, y.a.clone(), y.b.clone());
            prop_assert_eq!(surf.intersect(&pb, &y).unwrap(), surf.intersect(&pb, &flat).unwrap());
        }
    }
}
