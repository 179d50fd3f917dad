use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{is_prime, linalg, Rational};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::poly::{rational_mod, Bivariate, ProjPoint, RationalMap};

/// Extra rows demanded beyond the number of unknown coefficients, so an
/// interpolating polynomial is never mistaken for a relation.
pub const ROW_MARGIN: usize = 2;

const SCREEN_PRIMES: usize = 3;

/// A polynomial relation satisfied exactly by every tested orbit point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveRelation {
    pub polynomial: Bivariate,
    pub degree: usize,
    pub points_tested: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeOutcome {
    pub relation: Option<CurveRelation>,
    /// Total degrees whose monomial matrix was screened.
    pub degrees_searched: Vec<usize>,
    /// Total degrees skipped because there were too few points.
    pub degrees_skipped: Vec<usize>,
    pub points_requested: usize,
    /// Orbit points available exactly (fewer than requested after a budget stop).
    pub points_used: usize,
    pub primes: Vec<u64>,
    pub seed: u64,
}

/// Exponents `(i, j)` of all monomials of total degree at most `t`.
pub fn monomials(t: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for total in 0..=t {
        for i in (0..=total).rev() {
            out.push((i, total - i));
        }
    }
    out
}

/// Search for a low-degree curve through `(f^n(a), g^n(b))`, `n = 1..=n_points`.
///
/// Degrees are tried in increasing order. Each monomial matrix is first
/// reduced modulo a few random primes near `2^61` with orbits iterated
/// modulo `p`; full rank at any prime rules the degree out. Otherwise the
/// reduced kernel basis is lifted by CRT and rational reconstruction and
/// checked against the exact orbit points, falling back to an exact kernel.
#[allow(clippy::too_many_arguments)]
pub fn probe_genericity(
    f: &RationalMap,
    g: &RationalMap,
    a: &ProjPoint,
    b: &ProjPoint,
    deg_max: usize,
    n_points: usize,
    seed: u64,
    budget: &Budget,
) -> Result<ProbeOutcome> {
    if deg_max < 1 {
        return Err(Error::domain("deg_max must be at least 1"));
    }
    if n_points < monomials(1).len() + ROW_MARGIN {
        return Err(Error::domain(format!(
            "need at least {} points for a degree-1 search",
            monomials(1).len() + ROW_MARGIN
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut primes = Vec::new();
    let mut residues = Vec::new();
    while primes.len() < SCREEN_PRIMES {
        let p = random_prime(&mut rng);
        if let Some(orbit) = modular_orbits(f, g, a, b, n_points, p) {
            primes.push(p);
            residues.push(orbit);
        }
    }

    let (exact, points_used) = exact_orbits(f, g, a, b, n_points, budget)?;
    let mut outcome = ProbeOutcome {
        relation: None,
        degrees_searched: Vec::new(),
        degrees_skipped: Vec::new(),
        points_requested: n_points,
        points_used,
        primes: primes.clone(),
        seed,
    };
    for t in 1..=deg_max {
        let monos = monomials(t);
        if monos.len() + ROW_MARGIN > n_points {
            outcome.degrees_skipped.push(t);
            continue;
        }
        outcome.degrees_searched.push(t);
        let mut kernels = Vec::new();
        let mut full_rank = false;
        for (p, pts) in primes.iter().zip(&residues) {
            let m: Vec<Vec<u64>> = pts.iter().map(|&(x, y)| row_mod(&monos, x, y, *p)).collect();
            let basis = kernel_mod(m, monos.len(), *p);
            if basis.is_empty() {
                full_rank = true;
                break;
            }
            kernels.push(basis);
        }
        if full_rank {
            continue;
        }
        if exact.len() < monos.len() + ROW_MARGIN {
            // too few exact points left to verify anything at this degree
            outcome.degrees_skipped.push(t);
            outcome.degrees_searched.pop();
            continue;
        }
        let candidates = lift_kernels(&primes, &kernels)
            .unwrap_or_else(|| linalg::kernel(&exact_matrix(&monos, &exact)));
        for v in candidates {
            let poly = Bivariate::from_terms(monos.iter().copied().zip(v)).primitive();
            if !poly.is_zero() && exact.iter().all(|(x, y)| poly.eval(x, y).is_zero()) {
                outcome.relation = Some(CurveRelation {
                    degree: poly.total_degree().unwrap_or(0),
                    polynomial: poly,
                    points_tested: exact.len(),
                });
                return Ok(outcome);
            }
        }
        // reconstruction missed; settle the degree exactly
        for v in linalg::kernel(&exact_matrix(&monos, &exact)) {
            let poly = Bivariate::from_terms(monos.iter().copied().zip(v)).primitive();
            if !poly.is_zero() {
                outcome.relation = Some(CurveRelation {
                    degree: poly.total_degree().unwrap_or(0),
                    polynomial: poly,
                    points_tested: exact.len(),
                });
                return Ok(outcome);
            }
        }
    }
    Ok(outcome)
}

fn random_prime(rng: &mut ChaCha8Rng) -> u64 {
    loop {
        let candidate = (1u64 << 61) - rng.gen_range(1..(1u64 << 40)) * 2 - 1;
        if is_prime(&BigUint::from(candidate)) {
            return candidate;
        }
    }
}

/// `(f^n(a) mod p, g^n(b) mod p)` for `n = 1..=count`, or `None` when some
/// value is not a unit-denominator residue at `p`.
fn modular_orbits(
    f: &RationalMap,
    g: &RationalMap,
    a: &ProjPoint,
    b: &ProjPoint,
    count: usize,
    p: u64,
) -> Option<Vec<(u64, u64)>> {
    let step = |m: &RationalMap, x: u64| -> Option<u64> {
        let num = m.num().eval_mod(x, p)?;
        let den = m.den().eval_mod(x, p)?;
        let inv = crate::poly::mod_inverse(den, p)?;
        Some(((num as u128 * inv as u128) % p as u128) as u64)
    };
    let mut x = rational_mod(a.affine()?, p)?;
    let mut y = rational_mod(b.affine()?, p)?;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        x = step(f, x)?;
        y = step(g, y)?;
        out.push((x, y));
    }
    Some(out)
}

/// Exact orbit points, stopping early at the digit budget.
fn exact_orbits(
    f: &RationalMap,
    g: &RationalMap,
    a: &ProjPoint,
    b: &ProjPoint,
    count: usize,
    budget: &Budget,
) -> Result<(Vec<(Rational, Rational)>, usize)> {
    let of = match f.iterate(a, count, budget) {
        Ok(v) => v,
        Err(Error::OrbitBudget { last_step, .. }) => f.iterate(a, last_step, budget)?,
        Err(e) => return Err(e),
    };
    let og = match g.iterate(b, count, budget) {
        Ok(v) => v,
        Err(Error::OrbitBudget { last_step, .. }) => g.iterate(b, last_step, budget)?,
        Err(e) => return Err(e),
    };
    let mut pts = Vec::new();
    for (x, y) in of.into_iter().zip(og).skip(1) {
        match (x, y) {
            (ProjPoint::Affine(x), ProjPoint::Affine(y)) => pts.push((x, y)),
            _ => return Err(Error::domain("orbit passes through infinity")),
        }
    }
    let used = pts.len();
    Ok((pts, used))
}

fn row_mod(monos: &[(usize, usize)], x: u64, y: u64, p: u64) -> Vec<u64> {
    monos
        .iter()
        .map(|&(i, j)| {
            let xi = crate::poly::mod_pow(x, i as u64, p) as u128;
            let yj = crate::poly::mod_pow(y, j as u64, p) as u128;
            (xi * yj % p as u128) as u64
        })
        .collect()
}

fn exact_matrix(monos: &[(usize, usize)], pts: &[(Rational, Rational)]) -> linalg::Matrix {
    pts.iter()
        .map(|(x, y)| {
            monos
                .iter()
                .map(|&(i, j)| num_traits::pow(x.clone(), i) * num_traits::pow(y.clone(), j))
                .collect()
        })
        .collect()
}

/// Reduced-echelon kernel basis modulo `p`; one vector per free column with
/// a one in that column.
fn kernel_mod(mut m: Vec<Vec<u64>>, cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = crate::poly::mod_inverse(m[r][c], p).expect("nonzero pivot");
        for v in m[r].iter_mut() {
            *v = mulm(*v, inv);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let factor = m[i][c];
                for j in c..cols {
                    let sub = mulm(factor, m[r][j]);
                    m[i][j] = (m[i][j] + p - sub) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - m[row][free]) % p;
        }
        basis.push(v);
    }
    basis
}

/// Combine per-prime kernels by CRT and rational reconstruction; `None`
/// when the primes disagree on the kernel shape or reconstruction fails.
fn lift_kernels(primes: &[u64], kernels: &[Vec<Vec<u64>>]) -> Option<Vec<Vec<Rational>>> {
    let dim = kernels[0].len();
    if kernels.iter().any(|k| k.len() != dim) {
        return None;
    }
    let modulus: BigInt = primes.iter().map(|&p| BigInt::from(p)).product();
    let mut out = Vec::with_capacity(dim);
    for idx in 0..dim {
        let len = kernels[0][idx].len();
        let mut v = Vec::with_capacity(len);
        for c in 0..len {
            let mut acc = BigInt::zero();
            for (k, &p) in kernels.iter().zip(primes) {
                let pb = BigInt::from(p);
                let rest = &modulus / &pb;
                let rest_mod = (&rest % &pb).to_u64().unwrap();
                let inv = crate::poly::mod_inverse(rest_mod, p)?;
                let coeff = (k[idx][c] as u128 * inv as u128 % p as u128) as u64;
                acc += rest * BigInt::from(coeff);
            }
            v.push(rational_reconstruct(&acc.mod_floor(&modulus), &modulus)?);
        }
        out.push(v);
    }
    Some(out)
}

/// `n/d` with `n = d r mod m` and `|n|, d <= sqrt(m/2)`.
fn rational_reconstruct(r: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), r.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    Some(Rational::new(r1, t1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;

    fn f(c: &[i64]) -> RationalMap {
        RationalMap::from_int_poly(c)
    }

    fn run(fm: &RationalMap, gm: &RationalMap, a: i64, b: i64, deg: usize, pts: usize) -> ProbeOutcome {
        probe_genericity(fm, gm, &ProjPoint::int(a), &ProjPoint::int(b), deg, pts, 7, &Budget::default()).unwrap()
    }

    #[test]
    fn odd_symmetry_relation() {
        let odd = f(&[0, 1, 0, 1]);
        let out = run(&odd, &odd, 1, -1, 1, 8);
        let rel = out.relation.unwrap();
        assert_eq!(rel.polynomial, Bivariate::from_ints(&[(1, 0, 1), (0, 1, 1)]));
        assert_eq!(rel.points_tested, 8);
    }

    #[test]
    fn power_map_relation() {
        let sq = f(&[0, 0, 1]);
        let out = run(&sq, &sq, 125, 25, 3, 12);
        let rel = out.relation.unwrap();
        assert_eq!(rel.degree, 3);
        assert_eq!(rel.polynomial.to_string(), "x^2 - y^3");
        assert_eq!(out.degrees_searched, vec![1, 2, 3]);
    }

    #[test]
    fn generic_pair_has_no_relation() {
        let out = run(&f(&[1, 0, 1]), &f(&[-1, 0, 1]), 1, 2, 4, 12);
        assert!(out.relation.is_none());
        assert_eq!(out.degrees_searched, vec![1, 2, 3]);
        assert_eq!(out.degrees_skipped, vec![4]);
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(1).len(), 3);
        assert_eq!(monomials(3).len(), 10);
    }

    #[test]
    fn reconstruction_round_trip() {
        let m = BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64);
        for q in [rational(-3, 7), rational(22, 5), rational(0, 1)] {
            let num = q.numer().mod_floor(&m);
            let den_inv = mod_inverse_big(q.denom(), &m);
            let r = (num * den_inv).mod_floor(&m);
            assert_eq!(rational_reconstruct(&r, &m), Some(q));
        }
    }

    fn mod_inverse_big(a: &BigInt, m: &BigInt) -> BigInt {
        let e = a.extended_gcd(m);
        e.x.mod_floor(m)
    }
}
