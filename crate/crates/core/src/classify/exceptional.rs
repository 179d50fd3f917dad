use crate::error::{Error, Result};
use crate::poly::{radical, ProjPoint, RationalMap};

/// Distinct preimages of `target`: their number and, when there is exactly
/// one, the point itself (necessarily rational).
pub(crate) fn distinct_preimages(map: &RationalMap, target: &ProjPoint) -> Result<(usize, Option<ProjPoint>)> {
    let d = map.degree();
    // affine fiber polynomial and whether infinity lies over the target
    let (fiber, over_infinity) = match target {
        ProjPoint::Affine(alpha) => {
            let p = map.num() - &map.den().scale(alpha);
            let inf = p.degree_or_zero() < d;
            (p, inf)
        }
        ProjPoint::Infinity => {
            let inf = map.num().degree_or_zero() > map.den().degree_or_zero();
            (map.den().clone(), inf)
        }
    };
    let rad = radical(&fiber)?;
    let affine = rad.degree_or_zero();
    let count = affine + usize::from(over_infinity);
    let single = match (count, affine) {
        (1, 1) => Some(ProjPoint::Affine(-rad.coeff(0) / rad.coeff(1))),
        (1, 0) => Some(ProjPoint::Infinity),
        _ => None,
    };
    Ok((count, single))
}

/// True iff the backward orbit of `target` is finite.
///
/// An exceptional set has at most two points and equals its own preimage,
/// so `target` is exceptional iff it has a single preimage `β` and either
/// `β = target` or the single preimage of `β` is `target`.
pub fn is_exceptional(map: &RationalMap, target: &ProjPoint) -> Result<bool> {
    if map.degree() < 2 {
        return Err(Error::domain("exceptional points need degree >= 2"));
    }
    let (count, single) = distinct_preimages(map, target)?;
    if count != 1 {
        return Ok(false);
    }
    let beta = single.expect("one preimage");
    if &beta == target {
        return Ok(true);
    }
    let (count2, single2) = distinct_preimages(map, &beta)?;
    Ok(count2 == 1 && single2.as_ref() == Some(target))
}
