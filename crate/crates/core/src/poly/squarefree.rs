use num_traits::Zero;

use super::polynomial::Polynomial;
use crate::arith::Rational;
use crate::error::{Error, Result};

/// Monic squarefree part `p / gcd(p, p')`.
pub fn radical(p: &Polynomial) -> Result<Polynomial> {
    if p.is_zero() {
        return Err(Error::domain("radical of the zero polynomial"));
    }
    if p.is_constant() {
        return Ok(Polynomial::one());
    }
    let g = p.gcd(&p.derivative());
    Ok(p.div_rem(&g)?.0.make_monic())
}

/// Yun's algorithm: monic `a_1, a_2, ...` with `p = c * prod a_i^i`, each
/// `a_i` squarefree and pairwise coprime. Entry `i - 1` holds `a_i`.
pub fn squarefree_decomposition(p: &Polynomial) -> Result<Vec<Polynomial>> {
    if p.is_zero() {
        return Err(Error::domain("squarefree decomposition of the zero polynomial"));
    }
    let mut out = Vec::new();
    if p.is_constant() {
        return Ok(out);
    }
    let dp = p.derivative();
    let a0 = p.gcd(&dp);
    let mut b = p.div_rem(&a0)?.0;
    let mut c = dp.div_rem(&a0)?.0;
    let mut d = &c - &b.derivative();
    loop {
        let a = b.gcd(&d);
        b = b.div_rem(&a)?.0;
        c = d.div_rem(&a)?.0;
        out.push(a.make_monic());
        if b.is_constant() {
            break;
        }
        d = &c - &b.derivative();
    }
    while out.last().is_some_and(|a| a.is_constant()) {
        out.pop();
    }
    Ok(out)
}

/// Largest multiplicity of any root over the algebraic closure; zero for
/// constants.
pub fn max_root_multiplicity(p: &Polynomial) -> Result<usize> {
    Ok(squarefree_decomposition(p)?.len())
}

/// Largest `m` with `(x - q)^m | p`.
pub fn multiplicity_at(p: &Polynomial, q: &Rational) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::domain("multiplicity in the zero polynomial"));
    }
    let lin = Polynomial::linear_root(q);
    let mut m = 0;
    let mut cur = p.clone();
    loop {
        let (quot, rem) = cur.div_rem(&lin)?;
        if !rem.is_zero() {
            return Ok(m);
        }
        m += 1;
        cur = quot;
    }
}

/// Distinct rational roots, ascending. Uses the rational root theorem on the
/// primitive radical, so the cost is governed by divisor counts of the end
/// coefficients.
pub fn rational_roots(p: &Polynomial) -> Result<Vec<Rational>> {
    let r = radical(p)?.primitive_part();
    let mut roots = Vec::new();
    if r.is_constant() {
        return Ok(roots);
    }
    let mut rest = r.clone();
    if rest.coeff(0).is_zero() {
        roots.push(Rational::zero());
        rest = rest.div_rem(&Polynomial::x())?.0;
    }
    let lead = rest.leading().unwrap().to_integer();
    let constant = rest.coeff(0).to_integer();
    let ps = small_divisors(&constant)?;
    let qs = small_divisors(&lead)?;
    for p in &ps {
        for q in &qs {
            for sign in [1i64, -1] {
                let cand = Rational::new(p * sign, q.clone());
                if !roots.contains(&cand) && rest.eval(&cand).is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    Ok(roots)
}

fn small_divisors(n: &num_bigint::BigInt) -> Result<Vec<num_bigint::BigInt>> {
    use num_bigint::BigInt;
    let fac = crate::arith::factor(n)?;
    let mut divs = vec![BigInt::from(1)];
    for (p, e) in &fac.factors {
        let p = BigInt::from(p.clone());
        let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
        for d in &divs {
            let mut pk = d.clone();
            for _ in 0..=*e {
                next.push(pk.clone());
                pk *= &p;
            }
        }
        divs = next;
    }
    Ok(divs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rational};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    fn from_roots(roots: &[(i64, u32)]) -> Polynomial {
        roots.iter().fold(Polynomial::one(), |acc, &(r, m)| {
            &acc * &Polynomial::linear_root(&int(r)).pow(m)
        })
    }

    #[test]
    fn radical_examples() {
        assert_eq!(radical(&p(&[0, 0, -1, 1])).unwrap(), p(&[0, -1, 1]));
        assert_eq!(radical(&p(&[1, 0, 2, 0, 1])).unwrap(), p(&[1, 0, 1]));
        assert_eq!(radical(&p(&[6, 0, 2])).unwrap(), p(&[3, 0, 1]));
        assert!(radical(&Polynomial::zero()).is_err());
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(multiplicity_at(&p(&[0, 0, 1]), &int(0)).unwrap(), 2);
        let q = from_roots(&[(1, 3), (-2, 1)]);
        assert_eq!(multiplicity_at(&q, &int(1)).unwrap(), 3);
        assert_eq!(multiplicity_at(&p(&[0, 0, 0, 0, 1]), &int(0)).unwrap(), 4);
        assert_eq!(multiplicity_at(&q, &int(5)).unwrap(), 0);
    }

    #[test]
    fn yun_decomposition() {
        let q = from_roots(&[(1, 3), (-2, 1), (4, 2), (7, 2)]);
        let parts = squarefree_decomposition(&q).unwrap();
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0], p(&[2, 1]));
        assert_eq!(parts[1], from_roots(&[(4, 1), (7, 1)]));
        assert_eq!(parts[2], p(&[-1, 1]));
        // irreducible square: (x^2 + 1)^2 has maximal multiplicity 2
        assert_eq!(max_root_multiplicity(&p(&[1, 0, 2, 0, 1])).unwrap(), 2);
        assert_eq!(max_root_multiplicity(&p(&[-1, 0, 1])).unwrap(), 1);
    }

    #[test]
    fn rational_root_search() {
        let q = &from_roots(&[(3, 2), (-1, 1), (0, 1)]) * &p(&[1, 0, 1]);
        assert_eq!(rational_roots(&q).unwrap(), vec![int(-1), int(0), int(3)]);
        let half = &p(&[-1, 2]) * &p(&[3, 0, 1]);
        assert_eq!(rational_roots(&half).unwrap(), vec![rational(1, 2)]);
    }

    proptest! {
        #[test]
        fn radical_idempotent_and_same_roots(
            roots in proptest::collection::vec((-6i64..6, 1u32..4), 1..5)
        ) {
            let q = from_roots(&roots);
            let r = radical(&q).unwrap();
            prop_assert_eq!(radical(&r).unwrap(), r.clone());
            // same root set: r^2 divides q^2 and q^2 divides a power of r^2
            let (_, rem) = q.pow(2).div_rem(&r.pow(2)).unwrap();
            prop_assert!(rem.is_zero());
            let top = q.degree().unwrap() as u32;
            let (_, rem) = r.pow(2 * top).div_rem(&q.pow(2)).unwrap();
            prop_assert!(rem.is_zero());
        }

        #[test]
        fn multiplicities_sum_to_degree(
            roots in proptest::collection::vec((-6i64..6, 1u32..4), 1..5)
        ) {
            let q = from_roots(&roots);
            let mut distinct: Vec<i64> = roots.iter().map(|r| r.0).collect();
            distinct.sort();
            distinct.dedup();
            let total: usize = distinct
                .iter()
                .map(|&r| multiplicity_at(&q, &int(r)).unwrap())
                .sum();
            prop_assert_eq!(total, q.degree().unwrap());
        }
    }
}
