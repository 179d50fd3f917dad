use std::fs;
use std::path::Path;

use num_bigint::BigUint;
use serde_json::{json, Value};

use itergcd::arith::{format_rational, parse_rational};
use itergcd::classify::{
    commutes, is_exceptional, is_preperiodic, mult_indep, probe_genericity, special_form, SpecialTag,
};
use itergcd::experiments::{
    ap_structure, choose_depth, gcd_series, large_index_set, mobius_invariance_probe, random_rationals,
    GcdSeriesConfig, GcdSeriesReport, Truncation,
};
use itergcd::heights::{canonical_height, hgcd, hgcd_excluding, hgcd_fin, weil_height, PlaceSet};
use itergcd::poly::io::map_from_json;
use itergcd::surface::{BlowupSurface, DivisorClass};
use itergcd::{Error, LogValue, Mobius, Polynomial, ProjPoint, Rational, RationalMap, Result};

use crate::args::*;
use crate::manifest::Run;

/// Printed JSON plus, for a run stopped by a budget, the reason.
pub struct Output {
    pub stdout: Value,
    pub truncated: Option<Truncation>,
}

impl From<Value> for Output {
    fn from(stdout: Value) -> Self {
        Output { stdout, truncated: None }
    }
}

const DIGITS: usize = 10;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_map(path: &Path) -> Result<RationalMap> {
    map_from_json(&read(path)?)
}

fn read_poly(path: &Path) -> Result<Polynomial> {
    read_map(path)?
        .as_polynomial()
        .ok_or_else(|| Error::domain(format!("{} is not a polynomial", path.display())))
}

fn point(s: &str) -> Result<ProjPoint> {
    ProjPoint::parse(s)
}

fn places(list: &[String]) -> Result<PlaceSet> {
    let primes = list
        .iter()
        .map(|p| p.trim().parse::<BigUint>().map_err(|e| Error::Parse(format!("prime {p}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    PlaceSet::new(primes)
}

fn mobius(s: &str) -> Result<Mobius> {
    let e = s.split(',').map(|t| parse_rational(t.trim())).collect::<Result<Vec<_>>>()?;
    let [a, b, c, d]: [Rational; 4] = e
        .try_into()
        .map_err(|_| Error::Parse(format!("expected four entries a,b,c,d in {s:?}")))?;
    Mobius::new(a, b, c, d)
}

/// `a,b;c1,...,cs`, parentheses optional.
fn divisor(s: &str, surface_s: usize) -> Result<DivisorClass> {
    let body = s.trim().trim_start_matches('(').trim_end_matches(')');
    let (head, tail) = body.split_once(';').unwrap_or((body, ""));
    let ab = head.split(',').map(|t| parse_rational(t.trim())).collect::<Result<Vec<_>>>()?;
    let [a, b]: [Rational; 2] = ab
        .try_into()
        .map_err(|_| Error::Parse(format!("expected a,b before ';' in {s:?}")))?;
    let c = if tail.trim().is_empty() {
        Vec::new()
    } else {
        tail.split(',').map(|t| parse_rational(t.trim())).collect::<Result<Vec<_>>>()?
    };
    if c.len() != surface_s {
        return Err(Error::domain(format!("{s:?} has {} exceptional entries, surface has {surface_s}", c.len())));
    }
    Ok(DivisorClass::new(a, b, c))
}

fn log_value_json(v: &LogValue) -> Value {
    json!({
        "finite": v.finite_string(),
        "archimedean": v.arch().to_decimal(DIGITS),
        "decimal": v.to_real().to_decimal(DIGITS),
    })
}

pub fn run(command: &Command) -> Result<Output> {
    let config = serde_json::to_value(command).expect("arguments serialize");
    let seed = match command {
        Command::GcdSeries(a) => Some(a.seed),
        Command::ProbeGenericity(a) => Some(a.seed),
        Command::MobiusProbe(a) => Some(a.seed),
        _ => None,
    };
    let run = Run::start(command.name(), config, seed);
    match command {
        Command::GcdSeries(a) => gcd_series_cmd(&run, a),
        Command::Height(a) => {
            let p = point(&a.point)?;
            Ok(run.wrap(json!({"point": p.to_string(), "height": weil_height(&p).to_decimal(a.digits)})).into())
        }
        Command::CanonicalHeight(a) => {
            let f = read_map(&a.map)?;
            let est = canonical_height(&f, &point(&a.point)?, a.tol)?;
            Ok(run
                .wrap(json!({
                    "value": est.value.to_decimal(12),
                    "error_bound": est.error_bound,
                    "iterations_used": est.iterations_used,
                    "preperiodic": est.preperiodic,
                }))
                .into())
        }
        Command::Hgcd(a) => {
            let (x, y) = (parse_rational(&a.x)?, parse_rational(&a.y)?);
            let prec = 128;
            let value = if !a.exclude.is_empty() {
                hgcd_excluding(&places(&a.exclude)?, &x, &y, prec)?
            } else if a.fin {
                hgcd_fin(&x, &y, prec)?
            } else {
                hgcd(&x, &y, prec)?
            };
            Ok(run.wrap(log_value_json(&value)).into())
        }
        Command::Iterate(a) => {
            let f = read_map(&a.map)?;
            let orbit = f.iterate(&point(&a.start)?, a.steps, &run.budget)?;
            let orbit: Vec<String> = orbit.iter().map(|p| p.to_string()).collect();
            Ok(run.wrap(json!({"map": f.to_string(), "orbit": orbit})).into())
        }
        Command::Classify(c) => classify_cmd(&run, c),
        Command::ProbeGenericity(a) => {
            let f = read_map(&a.f)?;
            let g = read_map(&a.g)?;
            let out = probe_genericity(&f, &g, &point(&a.a)?, &point(&a.b)?, a.deg_max, a.points, a.seed, &run.budget)?;
            let relation = out.relation.as_ref().map(|r| {
                json!({
                    "polynomial": r.polynomial.to_string(),
                    "degree": r.degree,
                    "points_tested": r.points_tested,
                })
            });
            Ok(run
                .wrap(json!({
                    "relation": relation,
                    "degrees_searched": out.degrees_searched,
                    "degrees_skipped": out.degrees_skipped,
                    "points_requested": out.points_requested,
                    "points_used": out.points_used,
                    "primes": out.primes,
                    "note": "no relation up to deg_max is not a genericity certificate",
                }))
                .into())
        }
        Command::Surface(SurfaceCommand::Intersect(a)) => {
            let x = BlowupSurface::new(a.s);
            let (d1, d2) = (divisor(&a.d1, a.s)?, divisor(&a.d2, a.s)?);
            let v = x.intersect(&d1, &d2)?;
            Ok(run
                .wrap(json!({"d1": d1.to_string(), "d2": d2.to_string(), "intersection": format_rational(&v)}))
                .into())
        }
        Command::Surface(SurfaceCommand::Ample(a)) => {
            let v = BlowupSurface::new(a.s).ample_check(a.n)?;
            Ok(run
                .wrap(json!({
                    "ample": v.ample,
                    "s": v.s,
                    "N": v.n,
                    "self_intersection": format_rational(&v.self_intersection),
                    "exceptional_pairing": v.exceptional_pairing.as_ref().map(format_rational),
                    "min_curve": {
                        "type": [v.curve.a, v.curve.b],
                        "multiplicities": v.curve.multiplicities,
                        "pairing": format_rational(&v.curve.value),
                        "unbounded_below": v.curve.unbounded_below,
                    },
                    "failed": v.failed,
                }))
                .into())
        }
        Command::ChooseDepth(a) => {
            let f = read_map(&a.f)?;
            let g = read_map(&a.g)?;
            let cert = choose_depth(
                &f,
                &g,
                &point(&a.a)?,
                &point(&a.b)?,
                &parse_rational(&a.alpha)?,
                &parse_rational(&a.beta)?,
                a.epsilon,
                &run.budget,
            )?;
            let replays = cert.replay();
            Ok(run.wrap(json!({"certificate": cert, "replays": replays})).into())
        }
        Command::ApStructure(a) => {
            let report = GcdSeriesReport::from_json(&read(&a.report)?)?;
            let set = large_index_set(&report, a.eta)?;
            let fit = ap_structure(&set);
            Ok(run.wrap(json!({"eta": a.eta, "index_set": set, "structure": fit})).into())
        }
        Command::MobiusProbe(a) => {
            let f = read_map(&a.f)?;
            let g = read_map(&a.g)?;
            let xs = random_rationals(a.seed, a.samples, a.max_abs);
            let ys = random_rationals(a.seed.wrapping_add(1), a.samples, a.max_abs);
            let samples: Vec<_> = xs.into_iter().zip(ys).map(|(x, y)| (ProjPoint::Affine(x), ProjPoint::Affine(y))).collect();
            let probe = mobius_invariance_probe(
                &f,
                &g,
                &mobius(&a.sigma)?,
                &mobius(&a.tau)?,
                &parse_rational(&a.alpha)?,
                &parse_rational(&a.beta)?,
                &samples,
                a.n_max,
            )?;
            Ok(run
                .wrap(json!({
                    "max_deviation": probe.max_deviation,
                    "attained_at": probe.attained_at,
                    "pairs_compared": probe.deviations.len(),
                    "skipped": probe.skipped,
                }))
                .into())
        }
    }
}

fn gcd_series_cmd(run: &Run, a: &GcdSeriesArgs) -> Result<Output> {
    let mut config = GcdSeriesConfig::new(
        read_map(&a.f)?,
        read_map(&a.g)?,
        point(&a.a)?,
        point(&a.b)?,
        parse_rational(&a.alpha)?,
        parse_rational(&a.beta)?,
        a.max_n,
    );
    config.epsilon = a.epsilon;
    config.exclusions = places(&a.exclude)?;
    config.seed = a.seed;
    config.budget = run.budget;
    let report = gcd_series(&config)?;
    if let Some(path) = &a.plot_data {
        write(path, &report.plot_data())?;
    }
    let body = match a.format {
        Format::Json => serde_json::to_string_pretty(&run.wrap(&report)).expect("report serializes") + "\n",
        Format::Csv => report.to_csv(a.csv_elide_digits)?,
    };
    let stdout = match &a.out {
        Some(path) => {
            write(path, &body)?;
            if a.format == Format::Csv {
                let sidecar = path.with_extension("manifest.json");
                write(&sidecar, &(serde_json::to_string_pretty(&run.manifest()).expect("manifest") + "\n"))?;
            }
            run.wrap(json!({
                "out": path.display().to_string(),
                "rows": report.rows.len(),
                "last_completed": report.last_completed(),
                "truncated": report.truncated.is_some(),
                "trend": report.trend,
            }))
        }
        None if a.format == Format::Csv => Value::String(body),
        None => run.wrap(&report),
    };
    Ok(Output { stdout, truncated: report.truncated.clone() })
}

fn classify_cmd(run: &Run, c: &ClassifyCommand) -> Result<Output> {
    let v = match c {
        ClassifyCommand::Exceptional(a) => {
            let p = point(&a.point)?;
            json!({"point": p.to_string(), "exceptional": is_exceptional(&read_map(&a.map)?, &p)?})
        }
        ClassifyCommand::Preperiodic(a) => {
            let p = point(&a.point)?;
            json!({"point": p.to_string(), "preperiodic": is_preperiodic(&read_map(&a.map)?, &p, a.max_steps)?})
        }
        ClassifyCommand::MultIndep(a) => {
            json!({"independent": mult_indep(&parse_rational(&a.a)?, &parse_rational(&a.b)?)?})
        }
        ClassifyCommand::Special(a) => {
            let s = special_form(&read_poly(&a.poly)?)?;
            let tag = |t: SpecialTag| match t {
                SpecialTag::PowerConjugate => "power_conjugate",
                SpecialTag::ChebyshevConjugate => "chebyshev_conjugate",
                SpecialTag::NotSpecial => "not_special",
            };
            json!({
                "tag": tag(s.tag),
                "witness": s.witness.as_ref().map(|m| m.entries().map(format_rational)),
                "irrational_conjugacy": s.irrational_conjugacy.map(tag),
            })
        }
        ClassifyCommand::Commutes(a) => {
            let k = commutes(&read_poly(&a.h)?, &read_poly(&a.f)?, a.k_max, &run.budget)?;
            json!({"k": k})
        }
    };
    Ok(run.wrap(v).into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_syntax() {
        let d = divisor("(1,2;-1/2,0)", 2).unwrap();
        assert_eq!(d.to_string(), "(1, 2; -1/2, 0)");
        assert!(divisor("1,2;3", 2).is_err());
        assert!(divisor("1;3", 1).is_err());
        assert_eq!(divisor("1,1", 0).unwrap().to_string(), "(1, 1)");
    }

    #[test]
    fn mobius_needs_four_entries() {
        assert!(mobius("0,1,1,0").is_ok());
        assert!(mobius("1,2,3").is_err());
        assert!(mobius("1,2,2,4").is_err());
    }

    #[test]
    fn place_lists() {
        assert!(places(&["2".into(), "3".into()]).is_ok());
        assert!(places(&["x".into()]).is_err());
    }
}
