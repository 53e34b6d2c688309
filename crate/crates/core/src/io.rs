//! Map-spec files and the JSON/CSV artifacts.
//!
//! Rationals are rendered as `num/den` everywhere, so exact-mode artifacts
//! are byte-stable.

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::map::{MapSpec, PwMap};
use crate::metrics::{BoxCountProfile, EntropyProfile, SweepReport};
use crate::orbit::{BoundReport, Classification, OrbitRecord};
use crate::rotation::Tongue;
use crate::scalar::{format_rational, format_significant, parse_rational, Rational, Scalar};
use crate::singular::{Connection, RootBracket};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    a: Vec<String>,
    b: Vec<String>,
    lambda: String,
}

/// Parses `{"a": [...], "b": [...], "lambda": "..."}` with every scalar a
/// string (`"p/q"` or a decimal literal, both read exactly).
pub fn parse_map_spec(text: &str) -> Result<MapSpec<Rational>> {
    let raw: RawSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let list = |v: &[String]| v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>();
    MapSpec::new(list(&raw.a)?, list(&raw.b)?, parse_rational(&raw.lambda)?)
}

/// `num/den` for exact scalars, [`Scalar::render`] otherwise.
pub fn format_scalar<T: Scalar>(v: &T) -> String {
    match v.to_rational() {
        Some(r) if T::is_exact() => format_rational(&r),
        _ => v.render(),
    }
}

fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
    let io = |e: csv::Error| Error::InvalidInput(e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8 fields"))
}

pub fn map_json<T: Scalar>(map: &PwMap<T>) -> String {
    let spec = map.spec();
    let branches: Vec<Value> = map
        .branches()
        .iter()
        .map(|b| {
            json!({
                "lo": format_scalar(&b.lo),
                "hi": format_scalar(&b.hi),
                "delta": format_scalar(&b.delta),
                "wrap": b.wrap,
                "source_index": b.source_index,
            })
        })
        .collect();
    to_pretty(&json!({
        "a": spec.partition().iter().map(format_scalar).collect::<Vec<_>>(),
        "b": spec.offsets().iter().map(format_scalar).collect::<Vec<_>>(),
        "lambda": format_scalar(spec.lambda()),
        "singular": map.singular().iter().map(format_scalar).collect::<Vec<_>>(),
        "branches": branches,
    }))
}

fn connection_value(c: &Connection<Rational>) -> Value {
    json!({
        "order": c.order,
        "omega": c.omega.entries(),
        "x": format_rational(&c.x),
        "y": format_rational(&c.y),
        "side": c.side,
    })
}

/// `{"order", "omega", "x", "y", "side"}`, or `null` when none was found.
pub fn connection_json(c: Option<&Connection<Rational>>) -> String {
    to_pretty(&c.map(connection_value).unwrap_or(Value::Null))
}

pub fn classification_json(c: &Classification, bounds: Option<&BoundReport>) -> String {
    let cycles: Vec<Value> = c
        .cycles
        .iter()
        .map(|cy| {
            json!({
                "period": cy.period,
                "point": format_rational(&cy.point),
                "omega": cy.omega.entries(),
                "trap": [format_rational(&cy.trap.lo), format_rational(&cy.trap.hi)],
                "orbit": cy.orbit.iter().map(format_rational).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut assignment = Map::new();
    for a in &c.assignment {
        assignment.insert(format_rational(&a.point), a.cycle.map_or(Value::Null, Value::from));
    }
    let mut out = json!({
        "verdict": c.verdict,
        "cycles": cycles,
        "assignment": assignment,
        "budget_used": c.budget_used,
        "connection": c.connection.as_ref().map(connection_value),
        "undecided_reason": c.undecided_reason,
    });
    if let Some(b) = bounds {
        out["bounds"] = serde_json::to_value(b).expect("serializable");
    }
    to_pretty(&out)
}

pub fn orbit_csv<T: Scalar>(orbit: &OrbitRecord<T>) -> Result<String> {
    let rows = orbit.points.iter().enumerate().map(|(t, enc)| {
        let (branch, wrap) = match orbit.itinerary.entries().get(t) {
            Some(j) => (j.to_string(), orbit.wraps[t].to_string()),
            None => (String::new(), String::new()),
        };
        vec![t.to_string(), format_scalar(&enc.lo), format_scalar(&enc.hi), branch, wrap]
    });
    csv_string(&["t", "lo", "hi", "branch", "wrap"], rows)
}

pub fn roots_csv(brackets: &[RootBracket]) -> Result<String> {
    let rows = brackets.iter().map(|b| {
        vec![
            format_rational(&b.lo),
            format_rational(&b.hi),
            b.exact.as_ref().map(format_rational).unwrap_or_default(),
        ]
    });
    csv_string(&["lo", "hi", "exact"], rows)
}

fn render(r: &Rational, decimal: bool) -> String {
    if decimal {
        format_significant(crate::metrics::approx(r), 15)
    } else {
        format_rational(r)
    }
}

pub fn atlas_csv(tongues: &[Tongue<Rational>], decimal: bool) -> Result<String> {
    let rows = tongues.iter().map(|t| {
        vec![
            render(&t.lambda, decimal),
            t.p.to_string(),
            t.q.to_string(),
            render(&t.b_lo, decimal),
            render(&t.b_hi, decimal),
        ]
    });
    csv_string(&["lambda", "p", "q", "b_lo", "b_hi"], rows)
}

pub fn sweep_csv(report: &SweepReport, decimal: bool) -> Result<String> {
    let rows = report.rows.iter().map(|r| {
        vec![
            render(&r.lambda, decimal),
            r.verdict.as_str().to_string(),
            r.n_cycles.to_string(),
            r.max_period.to_string(),
            r.undecided_reason.map(|u| u.as_str().to_string()).unwrap_or_default(),
        ]
    });
    csv_string(&["lambda", "verdict", "n_cycles", "max_period", "undecided_reason"], rows)
}

pub fn entropy_csv(profile: &EntropyProfile) -> Result<String> {
    let rows = profile
        .rows
        .iter()
        .map(|r| vec![r.n.to_string(), r.alpha.to_string(), format_significant(r.entropy, 15)]);
    csv_string(&["n", "alpha_n", "entropy_n"], rows)
}

pub fn boxdim_csv(profile: &BoxCountProfile) -> Result<String> {
    let rows = profile.rows.iter().map(|(e, n)| vec![format!("{e:e}"), n.to_string()]);
    csv_string(&["epsilon", "N"], rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::build_map;
    use crate::orbit::{classify_map, Budget};

    const TWO_BRANCH: &str = r#"{"a": ["0", "1/2"], "b": ["1/4", "-0.25"], "lambda": "0.5"}"#;

    #[test]
    fn spec_strings_are_exact() {
        let spec = parse_map_spec(TWO_BRANCH).unwrap();
        assert_eq!(spec.offsets()[1], Rational::new((-1).into(), 4.into()));
        assert_eq!(spec.partition().len(), 3);
        assert!(matches!(parse_map_spec(r#"{"a": ["0"]}"#), Err(Error::Parse(_))));
        assert!(matches!(
            parse_map_spec(r#"{"a": ["0"], "b": ["x"], "lambda": "1/2"}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn map_dump_lists_branches() {
        let map = build_map(parse_map_spec(TWO_BRANCH).unwrap()).unwrap();
        let v: Value = serde_json::from_str(&map_json(&map)).unwrap();
        assert_eq!(v["branches"][1]["lo"], "1/2");
        assert_eq!(v["branches"][1]["delta"], "-1/4");
        assert_eq!(v["branches"][1]["source_index"], 2);
    }

    #[test]
    fn classification_shape() {
        let map = build_map(parse_map_spec(TWO_BRANCH).unwrap()).unwrap();
        let c = classify_map(&map, &Budget::default()).unwrap();
        let text = classification_json(&c, None);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["verdict"], "SINGULAR_CONNECTION");
        assert_eq!(v["cycles"].as_array().unwrap().len(), 0);
        assert_eq!(v["connection"]["omega"], json!([1]));
        assert!(v["assignment"]["1/2"].is_null());
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(&keys[..4], &["verdict", "cycles", "assignment", "budget_used"]);
    }

    #[test]
    fn csv_headers() {
        let t = crate::rotation::tongue_atlas(2, &[Rational::new(1.into(), 2.into())]).unwrap();
        assert_eq!(atlas_csv(&t, false).unwrap(), "lambda,p,q,b_lo,b_hi\n1/2,1,2,2/3,5/6\n");
        let dec = atlas_csv(&t, true).unwrap();
        assert!(dec.ends_with("0.500000000000000,1,2,0.666666666666667,0.833333333333333\n"), "{dec}");
        assert_eq!(roots_csv(&[]).unwrap(), "lo,hi,exact\n");
    }
}
