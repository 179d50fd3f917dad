use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{factor, Rational, Real};
use crate::error::{Error, Result};
use crate::heights::{numerator_gcd, weil_height};
use crate::poly::{conjugate, Mobius, ProjPoint, RationalMap};

const LOG_PREC: u32 = 96;

/// One compared pair of gcd heights.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleDeviation {
    pub sample: usize,
    pub n: usize,
    /// Weil height of the larger of the two starting points.
    pub height: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MobiusProbe {
    pub max_deviation: f64,
    pub attained_at: Option<SampleDeviation>,
    pub deviations: Vec<SampleDeviation>,
    /// Pairs left out because a value or target was sent to infinity.
    pub skipped: usize,
}

/// `sup |hgcd_fin(f_σ^n(σa) - σα, g_τ^n(τb) - τβ) - hgcd_fin(f^n(a) - α, g^n(b) - β)|`
/// over the samples and `n = 0..=n_max`, with `f_σ = σ ∘ f ∘ σ^-1`.
#[allow(clippy::too_many_arguments)]
pub fn mobius_invariance_probe(
    f: &RationalMap,
    g: &RationalMap,
    sigma: &Mobius,
    tau: &Mobius,
    alpha: &Rational,
    beta: &Rational,
    samples: &[(ProjPoint, ProjPoint)],
    n_max: usize,
) -> Result<MobiusProbe> {
    let f_conj = conjugate(f, sigma);
    let g_conj = conjugate(g, tau);
    let alpha_p = ProjPoint::Affine(alpha.clone());
    let beta_p = ProjPoint::Affine(beta.clone());
    let (Some(sa), Some(tb)) = (sigma.apply(&alpha_p).affine().cloned(), tau.apply(&beta_p).affine().cloned()) else {
        return Err(Error::domain("the transformations send a target to infinity"));
    };
    let mut out = MobiusProbe {
        max_deviation: 0.0,
        attained_at: None,
        deviations: Vec::new(),
        skipped: 0,
    };
    for (idx, (a, b)) in samples.iter().enumerate() {
        let height = weil_height(a).to_f64().max(weil_height(b).to_f64());
        let (mut x, mut y) = (a.clone(), b.clone());
        let (mut u, mut v) = (sigma.apply(a), tau.apply(b));
        for n in 0..=n_max {
            if n > 0 {
                x = f.eval(&x);
                y = g.eval(&y);
                u = f_conj.eval(&u);
                v = g_conj.eval(&v);
            }
            let base = finite_gcd_height(&x, alpha, &y, beta)?;
            let moved = finite_gcd_height(&u, &sa, &v, &tb)?;
            let (Some(base), Some(moved)) = (base, moved) else {
                out.skipped += 1;
                continue;
            };
            let dev = SampleDeviation {
                sample: idx,
                n,
                height,
                deviation: (moved - base).abs().to_f64(),
            };
            if out.attained_at.is_none() || dev.deviation > out.max_deviation {
                out.max_deviation = dev.deviation;
                out.attained_at = Some(dev.clone());
            }
            out.deviations.push(dev);
        }
    }
    Ok(out)
}

/// `hgcd_fin(x - α, y - β)`, or `None` at infinity or when both differences vanish.
fn finite_gcd_height(x: &ProjPoint, alpha: &Rational, y: &ProjPoint, beta: &Rational) -> Result<Option<Real>> {
    let (Some(x), Some(y)) = (x.affine(), y.affine()) else {
        return Ok(None);
    };
    let (dx, dy) = (x - alpha, y - beta);
    if dx.is_zero() && dy.is_zero() {
        return Ok(None);
    }
    Ok(Some(Real::ln_biguint(&numerator_gcd(&dx, &dy)?, LOG_PREC)))
}

/// Bound on the inversion deviation:
/// `sum_p max(v_p(α1^2 α2^2), v_p(β1^2 β2^2)) log p` for `α = α1/α2`, `β = β1/β2`.
pub fn inversion_constant(alpha: &Rational, beta: &Rational) -> Result<f64> {
    if alpha.is_zero() || beta.is_zero() {
        return Err(Error::domain("inversion sends 0 to infinity"));
    }
    let mut exps: std::collections::BTreeMap<BigUint, u32> = Default::default();
    for t in [alpha, beta] {
        let mut local: std::collections::BTreeMap<BigUint, u32> = Default::default();
        for part in [t.numer(), t.denom()] {
            for (p, e) in factor(part)?.factors {
                *local.entry(p).or_insert(0) += 2 * e;
            }
        }
        for (p, e) in local {
            let slot = exps.entry(p).or_insert(0);
            *slot = (*slot).max(e);
        }
    }
    Ok(exps
        .iter()
        .map(|(p, &e)| e as f64 * Real::ln_biguint(p, LOG_PREC).to_f64())
        .sum())
}

/// `count` rationals `±p/q` with `1 <= p, q <= max_abs`, reproducible from `seed`.
pub fn random_rationals(seed: u64, count: usize, max_abs: u64) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let p = rng.gen_range(1..=max_abs);
            let q = rng.gen_range(1..=max_abs);
            let r = Rational::new(BigInt::from(p), BigInt::from(q));
            if rng.gen_bool(0.5) {
                -r
            } else {
                r
            }
        })
        .collect()
}

/// `max |x|` over the samples, in the sense of the larger of numerator and denominator.
pub fn max_sample_size(samples: &[Rational]) -> BigInt {
    samples
        .iter()
        .map(|r| r.numer().abs().max(r.denom().clone()))
        .max()
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn pairs(seed: u64, count: usize) -> Vec<(ProjPoint, ProjPoint)> {
        let xs = random_rationals(seed, count, 1000);
        let ys = random_rationals(seed + 1, count, 1000);
        xs.into_iter().zip(ys).map(|(x, y)| (ProjPoint::Affine(x), ProjPoint::Affine(y))).collect()
    }

    fn sq_plus_one() -> RationalMap {
        RationalMap::from_int_poly(&[1, 0, 1])
    }

    #[test]
    fn identity_and_translation_are_exact() {
        let f = sq_plus_one();
        let samples = pairs(3, 20);
        for sigma in [Mobius::identity(), Mobius::translation(int(1))] {
            let probe = mobius_invariance_probe(&f, &f, &sigma, &sigma, &int(2), &int(5), &samples, 2).unwrap();
            assert!(probe.max_deviation < 1e-20, "{}", probe.max_deviation);
            assert!(!probe.deviations.is_empty());
        }
    }

    #[test]
    fn inversion_within_constant() {
        let f = sq_plus_one();
        let inv = Mobius::inversion();
        let c = inversion_constant(&int(2), &int(2)).unwrap();
        assert!((c - 4f64.ln()).abs() < 1e-12);
        let probe = mobius_invariance_probe(&f, &f, &inv, &inv, &int(2), &int(2), &pairs(9, 50), 1).unwrap();
        assert!(probe.max_deviation <= c + 1e-12);
    }

    #[test]
    fn inversion_deviation_is_attained() {
        // x = 4, y = 6: gcd(2, 4) = 2, while 1/4 - 1/2 and 1/6 - 1/2 have numerator 1
        let samples = [(ProjPoint::int(4), ProjPoint::int(6))];
        let probe = mobius_invariance_probe(
            &RationalMap::from_int_poly(&[0, 0, 1]),
            &RationalMap::from_int_poly(&[0, 0, 1]),
            &Mobius::inversion(),
            &Mobius::inversion(),
            &int(2),
            &int(2),
            &samples,
            0,
        )
        .unwrap();
        assert!((probe.max_deviation - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn sampling_is_reproducible() {
        assert_eq!(random_rationals(5, 10, 100), random_rationals(5, 10, 100));
        assert_ne!(random_rationals(5, 10, 100), random_rationals(6, 10, 100));
        assert!(max_sample_size(&random_rationals(1, 50, 100)) <= BigInt::from(100));
    }
}
