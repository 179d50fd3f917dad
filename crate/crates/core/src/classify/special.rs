use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{int, Rational};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::poly::{conjugate, Mobius, Polynomial, RationalMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialTag {
    PowerConjugate,
    ChebyshevConjugate,
    NotSpecial,
}

/// Outcome of the power/Chebyshev normal-form test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialForm {
    pub tag: SpecialTag,
    /// `σ` with `σ ∘ f ∘ σ^-1` equal to `x^d` or `T_d`, checked exactly.
    pub witness: Option<Mobius>,
    /// The coefficients match a family but the scaling needs an irrational
    /// root, so no rational witness exists; `tag` is then `NotSpecial`.
    pub irrational_conjugacy: Option<SpecialTag>,
}

impl SpecialForm {
    fn not_special(caveat: Option<SpecialTag>) -> Self {
        SpecialForm {
            tag: SpecialTag::NotSpecial,
            witness: None,
            irrational_conjugacy: caveat,
        }
    }
}

/// `T_d` with `T_d(t + 1/t) = t^d + 1/t^d`, so `T_2 = x^2 - 2`.
pub fn chebyshev(d: usize) -> Polynomial {
    let mut prev = Polynomial::from_ints(&[2]);
    let mut cur = Polynomial::x();
    if d == 0 {
        return prev;
    }
    for _ in 1..d {
        let next = &(&Polynomial::x() * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

pub fn power(d: usize) -> Polynomial {
    Polynomial::monomial(Rational::one(), d)
}

/// Decide whether `poly` is affinely conjugate over the rationals to `x^d`
/// or `T_d`.
///
/// After the translation removing the `x^(d-1)` term, a conjugate of a
/// normal form `N` can only be `u N(x/u)`. For `x^d` every lower coefficient
/// vanishes and `u^(d-1) = 1/c_d`; for `T_d` the coefficient of `x^(d-2)`
/// fixes `u^2 = -c_(d-2)/(d c_d)` and every other coefficient is forced.
pub fn special_form(poly: &Polynomial) -> Result<SpecialForm> {
    let d = poly.degree().unwrap_or(0);
    if d < 2 {
        return Err(Error::domain("special form needs degree >= 2"));
    }
    let lead = poly.coeff(d);
    let shift = poly.coeff(d - 1) / (int(d as i64) * &lead);
    let to_depressed = Mobius::translation(shift);
    let map = RationalMap::polynomial(poly.clone())?;
    let depressed = conjugate(&map, &to_depressed)
        .as_polynomial()
        .expect("affine conjugate of a polynomial");
    let c: Vec<Rational> = (0..=d).map(|i| depressed.coeff(i)).collect();

    if c[..d].iter().all(Zero::is_zero) {
        return Ok(match rational_root(&lead.recip(), d as u32 - 1) {
            Some(u) => witness(&map, &to_depressed, u, power(d), SpecialTag::PowerConjugate),
            None => SpecialForm::not_special(Some(SpecialTag::PowerConjugate)),
        });
    }

    let u_sq = -&c[d - 2] / (int(d as i64) * &lead);
    if u_sq.is_zero() {
        return Ok(SpecialForm::not_special(None));
    }
    let target = chebyshev(d);
    for k in 0..d {
        let expected = if (d - k).is_multiple_of(2) {
            target.coeff(k) * &lead * pow_rational(&u_sq, (d - k) / 2)
        } else {
            Rational::zero()
        };
        if c[k] != expected {
            return Ok(SpecialForm::not_special(None));
        }
    }
    // the leading coefficient is u^(1-d)
    let u = if d.is_multiple_of(2) {
        let u = (lead.clone() * pow_rational(&u_sq, (d - 2) / 2)).recip();
        if &u * &u != u_sq {
            return Ok(SpecialForm::not_special(None));
        }
        Some(u)
    } else {
        if pow_rational(&u_sq, (d - 1) / 2) != lead.recip() {
            return Ok(SpecialForm::not_special(None));
        }
        rational_root(&u_sq, 2)
    };
    Ok(match u {
        Some(u) => witness(&map, &to_depressed, u, target, SpecialTag::ChebyshevConjugate),
        None => SpecialForm::not_special(Some(SpecialTag::ChebyshevConjugate)),
    })
}

/// `σ = (x/u) ∘ (x + t)`, verified by exact conjugation.
fn witness(map: &RationalMap, to_depressed: &Mobius, u: Rational, normal: Polynomial, tag: SpecialTag) -> SpecialForm {
    let scale = Mobius::affine(u.recip(), Rational::zero()).expect("u is nonzero");
    let sigma = scale.then_after(to_depressed);
    let expected = RationalMap::polynomial(normal).expect("normal forms are nonconstant");
    if conjugate(map, &sigma) == expected {
        SpecialForm {
            tag,
            witness: Some(sigma),
            irrational_conjugacy: None,
        }
    } else {
        SpecialForm::not_special(None)
    }
}

fn pow_rational(r: &Rational, k: usize) -> Rational {
    num_traits::pow(r.clone(), k)
}

/// A rational `u` with `u^k = r`, preferring `u > 0`.
fn rational_root(r: &Rational, k: u32) -> Option<Rational> {
    if k == 1 {
        return Some(r.clone());
    }
    if r.is_negative() && k.is_multiple_of(2) {
        return None;
    }
    let root = |n: &BigInt| -> Option<BigInt> {
        let m = n.abs().nth_root(k);
        (num_traits::pow(m.clone(), k as usize) == n.abs()).then_some(m)
    };
    let num = root(r.numer())?;
    let den = root(r.denom())?;
    let u = Rational::new(num, den);
    Some(if r.is_negative() { -u } else { u })
}

/// Least `k <= k_max` with `h ∘ f^k = f^k ∘ h`.
pub fn commutes(h: &Polynomial, f: &Polynomial, k_max: u32, budget: &Budget) -> Result<Option<u32>> {
    if h.degree().unwrap_or(0) < 1 || f.degree().unwrap_or(0) < 2 || k_max < 1 {
        return Err(Error::domain("commutes needs deg h >= 1, deg f >= 2, k_max >= 1"));
    }
    let df = f.degree().unwrap() as u64;
    let dh = h.degree().unwrap() as u64;
    let mut fk = f.clone();
    for k in 1..=k_max {
        let degree = df.checked_pow(k).and_then(|v| v.checked_mul(dh)).unwrap_or(u64::MAX);
        if degree > budget.symbolic_degree {
            return Err(Error::DegreeBudget {
                degree,
                budget: budget.symbolic_degree,
            });
        }
        if h.compose(&fk) == fk.compose(h) {
            return Ok(Some(k));
        }
        fk = f.compose(&fk);
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    #[test]
    fn chebyshev_table() {
        assert_eq!(chebyshev(2), p(&[-2, 0, 1]));
        assert_eq!(chebyshev(3), p(&[0, -3, 0, 1]));
        assert_eq!(chebyshev(4), p(&[2, 0, -4, 0, 1]));
        // T_m ∘ T_n = T_mn
        assert_eq!(chebyshev(2).compose(&chebyshev(3)), chebyshev(6));
    }

    #[test]
    fn examples() {
        let cube = special_form(&p(&[0, 0, 0, 1])).unwrap();
        assert_eq!(cube.tag, SpecialTag::PowerConjugate);
        assert_eq!(cube.witness, Some(Mobius::identity()));
        let t2 = special_form(&p(&[-2, 0, 1])).unwrap();
        assert_eq!(t2.tag, SpecialTag::ChebyshevConjugate);
        assert_eq!(t2.witness, Some(Mobius::identity()));
        let odd = special_form(&p(&[0, 1, 0, 1])).unwrap();
        assert_eq!(odd.tag, SpecialTag::NotSpecial);
        assert_eq!(odd.irrational_conjugacy, None);
        assert_eq!(special_form(&p(&[1, 0, 1])).unwrap().tag, SpecialTag::NotSpecial);
    }

    #[test]
    fn recovers_hidden_conjugates() {
        for normal in [power(3), chebyshev(3), chebyshev(4), power(2), chebyshev(5)] {
            let nmap = RationalMap::polynomial(normal.clone()).unwrap();
            let sigma = Mobius::affine(rational(2, 3), int(-5)).unwrap();
            let hidden = conjugate(&nmap, &sigma).as_polynomial().unwrap();
            let found = special_form(&hidden).unwrap();
            assert_ne!(found.tag, SpecialTag::NotSpecial, "{hidden}");
            let w = found.witness.unwrap();
            assert_eq!(conjugate(&RationalMap::polynomial(hidden).unwrap(), &w), nmap);
        }
    }

    #[test]
    fn irrational_scaling_is_flagged() {
        // 2 x^3 = σ x^3 σ^-1 only for σ(x) = sqrt(2) x
        let f = special_form(&p(&[0, 0, 0, 2])).unwrap();
        assert_eq!(f.tag, SpecialTag::NotSpecial);
        assert_eq!(f.irrational_conjugacy, Some(SpecialTag::PowerConjugate));
        // 2 x^2 is conjugate to x^2 by x -> 2x
        assert_eq!(special_form(&p(&[0, 0, 2])).unwrap().tag, SpecialTag::PowerConjugate);
    }

    #[test]
    fn commuting_examples() {
        let b = Budget::default();
        let f = p(&[0, 1, 0, 1]);
        assert_eq!(commutes(&p(&[0, -1]), &f, 1, &b).unwrap(), Some(1));
        assert_eq!(commutes(&p(&[0, 0, 1]), &p(&[0, 0, 1]), 1, &b).unwrap(), Some(1));
        assert_eq!(commutes(&p(&[1, 1]), &p(&[0, 0, 1]), 3, &b).unwrap(), None);
        // -(x^(2^k)) never equals (-x)^(2^k)
        assert_eq!(commutes(&p(&[0, -1]), &p(&[0, 0, 1]), 2, &b).unwrap(), None);
        let tight = Budget { symbolic_degree: 10, ..b };
        assert!(commutes(&p(&[1, 1]), &p(&[0, 0, 1]), 5, &tight).is_err());
    }
}
