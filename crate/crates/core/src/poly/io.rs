//! JSON text formats: a polynomial is `{"coeffs": ["c0", "c1", ...]}` with
//! ascending coefficients written as `"p/q"` or `"p"`; a rational map is
//! `{"num": <polynomial>, "den": <polynomial>}`. A bare polynomial is also
//! accepted wherever a map is expected.

use serde::{Deserialize, Serialize};

use super::map::RationalMap;
use super::polynomial::Polynomial;
use crate::arith::{format_rational, parse_rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub coeffs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub num: PolynomialJson,
    pub den: PolynomialJson,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MapOrPolynomial {
    Map(MapJson),
    Polynomial(PolynomialJson),
}

impl From<&Polynomial> for PolynomialJson {
    fn from(p: &Polynomial) -> Self {
        PolynomialJson {
            coeffs: p.coeffs().iter().map(format_rational).collect(),
        }
    }
}

impl TryFrom<&PolynomialJson> for Polynomial {
    type Error = Error;
    fn try_from(p: &PolynomialJson) -> Result<Self> {
        Ok(Polynomial::new(
            p.coeffs.iter().map(|c| parse_rational(c)).collect::<Result<_>>()?,
        ))
    }
}

impl From<&RationalMap> for MapJson {
    fn from(m: &RationalMap) -> Self {
        MapJson {
            num: m.num().into(),
            den: m.den().into(),
        }
    }
}

impl TryFrom<&MapJson> for RationalMap {
    type Error = Error;
    fn try_from(m: &MapJson) -> Result<Self> {
        RationalMap::new((&m.num).try_into()?, (&m.den).try_into()?)
    }
}

pub fn polynomial_from_json(text: &str) -> Result<Polynomial> {
    let raw: PolynomialJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("polynomial JSON: {e}")))?;
    (&raw).try_into()
}

pub fn polynomial_to_json(p: &Polynomial) -> String {
    serde_json::to_string(&PolynomialJson::from(p)).expect("plain strings serialize")
}

pub fn map_from_json(text: &str) -> Result<RationalMap> {
    let raw: MapOrPolynomial =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("map JSON: {e}")))?;
    match raw {
        MapOrPolynomial::Map(m) => (&m).try_into(),
        MapOrPolynomial::Polynomial(p) => RationalMap::polynomial((&p).try_into()?),
    }
}

pub fn map_to_json(m: &RationalMap) -> String {
    serde_json::to_string(&MapJson::from(m)).expect("plain strings serialize")
}
