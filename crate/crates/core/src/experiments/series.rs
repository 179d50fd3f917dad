use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{
    decimal_digits, factor_with_budget, format_rational, rational_approx_digits, LogValue, Rational, Real,
};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::heights::{hgcd_real, numerator_gcd, numerator_gcd_excluding, PlaceSet};
use crate::poly::io::MapJson;
use crate::poly::{ProjPoint, RationalMap};

/// Gcd's at or above this many digits are kept only as a digit count.
pub const JSON_ELIDE_DIGITS: u64 = 1_000_000;
/// Default digit threshold past which CSV output drops the gcd itself.
pub const CSV_ELIDE_DIGITS: u64 = 10_000;
/// Rational rows factor the numerator gcd symbolically up to this size.
const FACTOR_DIGITS: u64 = 40;
const LOG_PREC: u32 = 64;

pub const FLAG_BOTH_ZERO: &str = "both_zero";
pub const FLAG_ONE_ZERO: &str = "one_zero";
pub const FLAG_ELIDED: &str = "gcd_elided";
pub const FLAG_ABOVE_EPS: &str = "above_eps";
pub const FLAG_RATIONAL: &str = "rational";
pub const FLAG_UNFACTORED: &str = "unfactored";

#[derive(Clone, Debug)]
pub struct GcdSeriesConfig {
    pub f: RationalMap,
    pub g: RationalMap,
    pub a: ProjPoint,
    pub b: ProjPoint,
    pub alpha: Rational,
    pub beta: Rational,
    pub n_max: usize,
    pub epsilon: f64,
    pub exclusions: PlaceSet,
    pub seed: u64,
    pub budget: Budget,
}

impl GcdSeriesConfig {
    pub fn new(f: RationalMap, g: RationalMap, a: ProjPoint, b: ProjPoint, alpha: Rational, beta: Rational, n_max: usize) -> Self {
        GcdSeriesConfig {
            f,
            g,
            a,
            b,
            alpha,
            beta,
            n_max,
            epsilon: 0.1,
            exclusions: PlaceSet::empty(),
            seed: 0,
            budget: Budget::default(),
        }
    }

    pub fn validate(&self) -> Result<usize> {
        let d = self.f.degree();
        if d != self.g.degree() {
            return Err(Error::domain(format!(
                "degrees differ ({d} vs {}); the bound is trivial then",
                self.g.degree()
            )));
        }
        if d < 2 {
            return Err(Error::domain("maps must have degree >= 2"));
        }
        if self.n_max < 1 {
            return Err(Error::domain("n_max must be at least 1"));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::domain("epsilon must be positive"));
        }
        Ok(d)
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            f: (&self.f).into(),
            g: (&self.g).into(),
            a: self.a.to_string(),
            b: self.b.to_string(),
            alpha: format_rational(&self.alpha),
            beta: format_rational(&self.beta),
            n_max: self.n_max,
            epsilon: self.epsilon,
            exclusions: self.exclusions.primes().iter().map(|p| p.to_string()).collect(),
            seed: self.seed,
            budget: self.budget,
        }
    }
}

/// Serializable copy of a [`GcdSeriesConfig`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub f: MapJson,
    pub g: MapJson,
    pub a: String,
    pub b: String,
    pub alpha: String,
    pub beta: String,
    pub n_max: usize,
    pub epsilon: f64,
    pub exclusions: Vec<String>,
    pub seed: u64,
    pub budget: Budget,
}

impl ConfigEcho {
    pub fn to_config(&self) -> Result<GcdSeriesConfig> {
        let primes = self
            .exclusions
            .iter()
            .map(|p| p.parse::<BigUint>().map_err(|e| Error::Parse(format!("place {p}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(GcdSeriesConfig {
            f: (&self.f).try_into()?,
            g: (&self.g).try_into()?,
            a: ProjPoint::parse(&self.a)?,
            b: ProjPoint::parse(&self.b)?,
            alpha: crate::arith::parse_rational(&self.alpha)?,
            beta: crate::arith::parse_rational(&self.beta)?,
            n_max: self.n_max,
            epsilon: self.epsilon,
            exclusions: PlaceSet::new(primes)?,
            seed: self.seed,
            budget: self.budget,
        })
    }
}

/// One orbit index of a gcd series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GcdRow {
    pub n: usize,
    pub digits_f: u64,
    pub digits_g: u64,
    /// Decimal gcd for integral rows, the finite gcd height for rational
    /// rows, `None` once elided.
    pub gcd: Option<String>,
    pub gcd_digits: u64,
    pub log_gcd: f64,
    pub ratio: f64,
    pub hgcd_fin: f64,
    pub hgcd_s: f64,
    pub flags: Vec<String>,
}

impl GcdRow {
    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.iter().any(|f| f == flag)
    }

    /// Rows with an orbit value hitting its target are left out of ratio statistics.
    pub fn is_collision(&self) -> bool {
        self.has_flag(FLAG_BOTH_ZERO) || self.has_flag(FLAG_ONE_ZERO)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub last_completed: usize,
    pub reason: String,
}

/// Summary of `log_gcd / d^n` over non-collision rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trend {
    pub max_ratio: f64,
    /// Maximum over the second half of the completed window.
    pub tail_max_ratio: f64,
    pub last_ratio: f64,
    pub rows_used: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GcdSeriesReport {
    pub config: ConfigEcho,
    pub degree: usize,
    pub rows: Vec<GcdRow>,
    pub truncated: Option<Truncation>,
    pub trend: Trend,
}

impl GcdSeriesReport {
    pub fn last_completed(&self) -> usize {
        self.rows.last().map_or(0, |r| r.n)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_csv(&self, elide_digits: u64) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["n", "digits_f", "digits_g", "gcd", "log_gcd", "ratio", "hgcd_fin", "hgcd_S", "flags"])
            .map_err(io)?;
        for r in &self.rows {
            let mut flags = r.flags.clone();
            let gcd = match &r.gcd {
                Some(g) if r.gcd_digits < elide_digits => g.clone(),
                _ => {
                    if !r.has_flag(FLAG_ELIDED) {
                        flags.push(FLAG_ELIDED.to_string());
                    }
                    format!("elided:{}", r.gcd_digits)
                }
            };
            w.write_record([
                r.n.to_string(),
                r.digits_f.to_string(),
                r.digits_g.to_string(),
                gcd,
                format!("{:.12e}", r.log_gcd),
                format!("{:.12e}", r.ratio),
                format!("{:.12e}", r.hgcd_fin),
                format!("{:.12e}", r.hgcd_s),
                flags.join(";"),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    /// Two columns `n ratio`, one row per line.
    pub fn plot_data(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let _ = writeln!(out, "{} {:.12e}", r.n, r.ratio);
        }
        out
    }
}

pub fn gcd_series(config: &GcdSeriesConfig) -> Result<GcdSeriesReport> {
    gcd_series_with(config, |_| {})
}

/// Compute rows `n = 0..=n_max`, handing each to `sink` as soon as it is done.
///
/// Integral rows use the Euclidean gcd of `f^n(a) - α` and `g^n(b) - β`;
/// rational rows report the full gcd height. A digit-budget stop returns the
/// rows completed so far with `truncated` set.
pub fn gcd_series_with(config: &GcdSeriesConfig, mut sink: impl FnMut(&GcdRow)) -> Result<GcdSeriesReport> {
    let d = config.validate()?;
    let mut x = config.a.clone();
    let mut y = config.b.clone();
    let mut rows = Vec::new();
    let mut truncated = None;
    for n in 0..=config.n_max {
        if n > 0 {
            x = config.f.eval(&x);
            y = config.g.eval(&y);
        }
        let (Some(xv), Some(yv)) = (x.affine(), y.affine()) else {
            return Err(Error::domain(format!("orbit reaches infinity at n = {n}")));
        };
        let size = rational_approx_digits(xv) + rational_approx_digits(yv);
        if size > config.budget.orbit_digits {
            truncated = Some(Truncation {
                last_completed: n.saturating_sub(1),
                reason: format!("orbit values at n = {n} need {size} digits (budget {})", config.budget.orbit_digits),
            });
            if n == 0 {
                return Err(Error::OrbitBudget {
                    last_step: 0,
                    digits: size,
                    budget: config.budget.orbit_digits,
                });
            }
            break;
        }
        let row = gcd_row(config, d, n, &(xv - &config.alpha), &(yv - &config.beta))?;
        sink(&row);
        rows.push(row);
    }
    let trend = trend(&rows);
    Ok(GcdSeriesReport {
        config: config.echo(),
        degree: d,
        rows,
        truncated,
        trend,
    })
}

fn ln(n: &BigUint) -> f64 {
    Real::ln_biguint(n, LOG_PREC).to_f64()
}

fn rational_digits(r: &Rational) -> u64 {
    decimal_digits(r.numer()).max(decimal_digits(r.denom()))
}

fn gcd_row(config: &GcdSeriesConfig, d: usize, n: usize, x: &Rational, y: &Rational) -> Result<GcdRow> {
    let scale = (d as f64).powi(n as i32);
    let mut flags = Vec::new();
    let digits_f = rational_digits(x);
    let digits_g = rational_digits(y);
    if x.is_zero() && y.is_zero() {
        flags.push(FLAG_BOTH_ZERO.to_string());
        return Ok(GcdRow {
            n,
            digits_f,
            digits_g,
            gcd: Some("0".into()),
            gcd_digits: 1,
            log_gcd: 0.0,
            ratio: 0.0,
            hgcd_fin: 0.0,
            hgcd_s: 0.0,
            flags,
        });
    }
    if x.is_zero() || y.is_zero() {
        flags.push(FLAG_ONE_ZERO.to_string());
    }
    let numer_gcd = numerator_gcd(x, y)?;
    let hgcd_fin = ln(&numer_gcd);
    let hgcd_s = ln(&numerator_gcd_excluding(&config.exclusions, x, y)?);
    let integral = x.is_integer() && y.is_integer();
    let (gcd, gcd_digits, log_gcd) = if integral {
        let g: BigInt = x.numer().gcd(y.numer());
        let digits = decimal_digits(&g);
        let text = (digits < JSON_ELIDE_DIGITS).then(|| g.abs().to_string());
        (text, digits, hgcd_fin)
    } else {
        flags.push(FLAG_RATIONAL.to_string());
        let digits = decimal_digits(&BigInt::from(numer_gcd.clone()));
        let text = if digits <= FACTOR_DIGITS {
            let fac = factor_with_budget(&BigInt::from(numer_gcd), config.budget.factor_steps)?;
            Some(LogValue::log_of_factored(&fac.factors, LOG_PREC).finite_string())
        } else {
            flags.push(FLAG_UNFACTORED.to_string());
            None
        };
        (text, digits, hgcd_real(x, y, LOG_PREC)?.to_f64())
    };
    if gcd.is_none() && integral {
        flags.push(FLAG_ELIDED.to_string());
    }
    if log_gcd > config.epsilon * scale {
        flags.push(FLAG_ABOVE_EPS.to_string());
    }
    Ok(GcdRow {
        n,
        digits_f,
        digits_g,
        gcd,
        gcd_digits,
        log_gcd,
        ratio: log_gcd / scale,
        hgcd_fin,
        hgcd_s,
        flags,
    })
}

fn trend(rows: &[GcdRow]) -> Trend {
    let usable: Vec<&GcdRow> = rows.iter().filter(|r| !r.is_collision()).collect();
    let last_n = rows.last().map_or(0, |r| r.n);
    let max = |it: &mut dyn Iterator<Item = &&GcdRow>| it.map(|r| r.ratio).fold(0.0f64, f64::max);
    Trend {
        max_ratio: max(&mut usable.iter()),
        tail_max_ratio: max(&mut usable.iter().filter(|r| 2 * r.n >= last_n)),
        last_ratio: usable.last().map_or(0.0, |r| r.ratio),
        rows_used: usable.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn config(f: &[i64], g: &[i64], a: i64, b: i64, alpha: i64, beta: i64, n: usize) -> GcdSeriesConfig {
        GcdSeriesConfig::new(
            RationalMap::from_int_poly(f),
            RationalMap::from_int_poly(g),
            ProjPoint::int(a),
            ProjPoint::int(b),
            int(alpha),
            int(beta),
            n,
        )
    }

    #[test]
    fn power_map_rows() {
        let report = gcd_series(&config(&[0, 0, 1], &[0, 0, 1], 125, 25, 1, 1, 3)).unwrap();
        // gcd(124, 24)
        assert_eq!(report.rows[0].gcd.as_deref(), Some("4"));
        assert_eq!(report.rows[1].gcd.as_deref(), Some("24"));
        let n3: BigUint = report.rows[3].gcd.as_ref().unwrap().parse().unwrap();
        assert!((n3 % 390_624u32).is_zero());
    }

    #[test]
    fn odd_symmetry_rows() {
        let report = gcd_series(&config(&[0, 1, 0, 1], &[0, 1, 0, 1], 2, -2, 1, -1, 4)).unwrap();
        assert_eq!(report.rows[1].gcd.as_deref(), Some("9"));
        for r in &report.rows {
            assert!((r.log_gcd - r.hgcd_fin).abs() < 1e-12);
        }
    }

    #[test]
    fn collisions_are_flagged() {
        // x^2 - 1 sends 0 to -1 and back
        let report = gcd_series(&config(&[-1, 0, 1], &[-1, 0, 1], 0, 0, -1, 0, 2)).unwrap();
        assert!(report.rows[0].has_flag(FLAG_ONE_ZERO));
        assert_eq!(report.rows[0].gcd.as_deref(), Some("1"));
        assert!(report.rows[2].has_flag(FLAG_ONE_ZERO));
        let both = gcd_series(&config(&[0, 0, 1], &[0, 0, 1], 1, 1, 1, 1, 1)).unwrap();
        assert!(both.rows.iter().all(|r| r.has_flag(FLAG_BOTH_ZERO) && r.ratio == 0.0));
        assert_eq!(both.trend.rows_used, 0);
    }

    #[test]
    fn rational_rows_use_gcd_height() {
        let mut c = config(&[0, 0, 1], &[0, 0, 1], 0, 0, 0, 0, 2);
        c.a = ProjPoint::Affine(crate::arith::rational(3, 2));
        c.b = ProjPoint::Affine(crate::arith::rational(9, 4));
        let report = gcd_series(&c).unwrap();
        // 3/2 and 9/4: numerators share 3
        assert_eq!(report.rows[0].gcd.as_deref(), Some("log 3"));
        assert!(report.rows[0].has_flag(FLAG_RATIONAL));
        assert!((report.rows[0].log_gcd - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn exclusions_drop_primes() {
        let mut c = config(&[0, 0, 1], &[0, 0, 1], 125, 25, 1, 1, 2);
        c.exclusions = PlaceSet::new([BigUint::from(2u32)]).unwrap();
        let report = gcd_series(&c).unwrap();
        // gcd(15624, 624) = 24 = 2^3 * 3
        assert!((report.rows[1].hgcd_s - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(gcd_series(&config(&[0, 0, 1], &[0, 0, 0, 1], 2, 2, 1, 1, 3)).is_err());
        assert!(gcd_series(&config(&[0, 1], &[0, 1], 2, 2, 1, 1, 3)).is_err());
        assert!(gcd_series(&config(&[0, 0, 1], &[0, 0, 1], 2, 2, 1, 1, 0)).is_err());
    }

    #[test]
    fn budget_truncates() {
        let mut c = config(&[0, 0, 1], &[0, 0, 1], 3, 2, 1, 1, 30);
        c.budget.orbit_digits = 200;
        let report = gcd_series(&c).unwrap();
        let t = report.truncated.as_ref().unwrap();
        assert_eq!(t.last_completed, report.last_completed());
        assert!(report.last_completed() < 30);
    }

    #[test]
    fn serialization_round_trips() {
        let report = gcd_series(&config(&[0, 0, 1], &[0, 0, 1], 125, 25, 1, 1, 5)).unwrap();
        let back = GcdSeriesReport::from_json(&report.to_json().unwrap()).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.config.to_config().unwrap().echo(), report.config);
        let csv = report.to_csv(10).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("n,digits_f,digits_g,gcd,log_gcd,ratio,hgcd_fin,hgcd_S,flags"));
        assert!(csv.contains("elided:"));
        assert_eq!(report.plot_data().lines().count(), 6);
    }
}
