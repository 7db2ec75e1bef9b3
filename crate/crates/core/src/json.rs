//! JSON forms of the public data types. Rationals are always `"p/q"`
//! strings, so values survive any JSON reader exactly.

use serde_json::{json, Value};

use crate::areas::{AreaPoly, DegreeRank, HallAreaReport};
use crate::elimination::SeriesInC;
use crate::identities::BatchReport;
use crate::magma::Tree;
use crate::pbw::{DualityReport, HallPoly};
use crate::signature::{IntegrationCheck, WorkedExample};
use crate::words::{format_rational, parse_rational, FreeElement, Rational, Word};
use crate::{Error, Result};

fn q(c: &Rational) -> Value {
    Value::String(format_rational(c))
}

/// `[{"word": "12", "coeff": "1/2"}, ...]` in canonical word order.
pub fn free_element(f: &FreeElement) -> Value {
    Value::Array(
        f.terms()
            .map(|(w, c)| json!({"word": w.to_string(), "coeff": format_rational(c)}))
            .collect(),
    )
}

pub fn parse_free_element(v: &Value) -> Result<FreeElement> {
    let bad = |what: &str| Error::Parse(format!("free element JSON: {what}"));
    let terms = v.as_array().ok_or_else(|| bad("expected an array"))?;
    terms
        .iter()
        .map(|t| {
            let word = t["word"].as_str().ok_or_else(|| bad("missing \"word\""))?;
            let coeff = t["coeff"].as_str().ok_or_else(|| bad("missing \"coeff\""))?;
            Ok((word.parse::<Word>()?, parse_rational(coeff)?))
        })
        .collect::<Result<Vec<_>>>()
        .map(FreeElement::from_terms)
}

fn factors<'a>(fs: impl IntoIterator<Item = (&'a Tree, usize)>) -> Value {
    Value::Array(
        fs.into_iter()
            .map(|(t, k)| json!({"tree": t.to_string(), "power": k}))
            .collect(),
    )
}

/// `[{"coeff": "p/q", "factors": [{"tree": "[1,2]", "power": 2}, ...]}, ...]`
pub fn hall_poly(p: &HallPoly) -> Value {
    Value::Array(
        p.terms()
            .map(|(m, c)| json!({"coeff": q(c), "factors": factors(m.factors().iter().map(|(t, k)| (t, *k)))}))
            .collect(),
    )
}

/// Same shape as [`hall_poly`]; repeated area factors are grouped into powers.
pub fn area_poly(p: &AreaPoly) -> Value {
    Value::Array(
        p.terms()
            .map(|(m, c)| {
                let mut grouped: Vec<(&Tree, usize)> = Vec::new();
                for t in m.factors() {
                    match grouped.last_mut() {
                        Some((last, k)) if *last == t => *k += 1,
                        _ => grouped.push((t, 1)),
                    }
                }
                json!({"coeff": q(c), "factors": factors(grouped)})
            })
            .collect(),
    )
}

/// `{"degree", "dimension", "rank", "relations"}`; each relation is a
/// free-element-shaped list of `(word, coeff)` pairs.
pub fn degree_rank(r: &DegreeRank) -> Value {
    let relations: Vec<Value> = r
        .relations
        .iter()
        .map(|rel| {
            Value::Array(
                rel.iter()
                    .map(|(w, c)| json!({"word": w.to_string(), "coeff": q(c)}))
                    .collect(),
            )
        })
        .collect();
    json!({"degree": r.degree, "dimension": r.dimension, "rank": r.rank, "relations": relations})
}

pub fn hall_area_report(r: &HallAreaReport) -> Value {
    json!({
        "alphabet": r.alphabet,
        "order": r.order,
        "full_rank": r.full_rank(),
        "degrees": r.degrees.iter().map(degree_rank).collect::<Vec<_>>(),
    })
}

/// `{"c": 2, "coefficients": [<free element>, ...], "scalar_slots": ["p/q", ...]}`
pub fn series_in_c(s: &SeriesInC) -> Value {
    json!({
        "c": s.c.index(),
        "coefficients": s.coefficients.iter().map(free_element).collect::<Vec<_>>(),
        "scalar_slots": s.scalar_slots.iter().map(q).collect::<Vec<_>>(),
    })
}

pub fn duality_report(r: &DualityReport) -> Value {
    json!({
        "alphabet": r.alphabet,
        "order": r.order,
        "max_length": r.max_length,
        "words": r.words,
        "pairs": r.pairs,
        "passed": r.passed(),
        "failures": r.failures.iter()
            .map(|(u, v, c)| json!({"u": u.to_string(), "v": v.to_string(), "pairing": q(c)}))
            .collect::<Vec<_>>(),
        "triangularity_warnings": r.triangularity_warnings.iter().map(Word::to_string).collect::<Vec<_>>(),
    })
}

pub fn batch_report(r: &BatchReport) -> Value {
    json!({
        "identity": r.identity.name(),
        "cases": r.cases,
        "passed": r.passed,
        "counterexample": r.counterexample.as_ref().map(|(args, residual)| json!({
            "args": args.iter().map(free_element).collect::<Vec<_>>(),
            "residual": free_element(residual),
        })),
    })
}

pub fn integration_check(c: &IntegrationCheck) -> Value {
    json!({
        "partition": c.partition,
        "exact": c.exact,
        "backward": c.backward,
        "forward": c.forward,
        "error": c.error,
        "forward_error": c.forward_error,
    })
}

pub fn worked_example(r: &WorkedExample) -> Value {
    json!({
        "word": r.word.to_string(),
        "seed": r.seed,
        "segments": r.segments,
        "factors": r.factors.iter().map(|(h, k)| json!({"word": h.to_string(), "power": k})).collect::<Vec<_>>(),
        "coefficient": q(&r.coefficient),
        "raw_coefficient": q(&r.raw_coefficient),
        "printed_coefficient": q(&r.printed_coefficient),
        "alphas": r.alphas.iter().map(|(h, a)| json!({"word": h.to_string(), "alpha": a})).collect::<Vec<_>>(),
        "support": r.support,
        "direct": r.direct,
        "product": r.product,
        "relative_error": r.relative_error,
        "tolerance": r.tolerance,
        "passed": r.passed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::areas::{AreaMonomial, AreaPoly};
    use crate::elimination::decompose_series;
    use crate::words::{rational, Letter};

    #[test]
    fn free_element_round_trip() {
        let f: FreeElement = "12 - 2*21 + 3/2*e".parse().unwrap();
        let v = free_element(&f);
        assert_eq!(
            v,
            json!([
                {"word": "e", "coeff": "3/2"},
                {"word": "12", "coeff": "1/1"},
                {"word": "21", "coeff": "-2/1"},
            ])
        );
        assert_eq!(parse_free_element(&v).unwrap(), f);
        assert!(parse_free_element(&json!([{"word": "1"}])).is_err());
    }

    #[test]
    fn area_factors_are_grouped() {
        let t: Tree = "1".parse().unwrap();
        let p = AreaPoly::monomial(AreaMonomial::new(vec![t.clone(), t]), rational(-1, 3));
        assert_eq!(
            area_poly(&p),
            json!([{"coeff": "-1/3", "factors": [{"tree": "1", "power": 2}]}])
        );
    }

    #[test]
    fn series_shape() {
        let f: FreeElement = "212 + 2".parse().unwrap();
        let v = series_in_c(&decompose_series(&f, Letter::of(2)));
        assert_eq!(v["c"], json!(2));
        assert!(v["coefficients"].is_array());
        assert!(v["scalar_slots"].as_array().unwrap().iter().all(Value::is_string));
    }
}
