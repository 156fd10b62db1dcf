//! JSON documents: instances, certificates and witness reports.
//!
//! Every big integer is written as a decimal string so values survive a
//! round trip bit-exactly.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::adversary::{format_ratio, AdversaryParams, Certificate, WitnessEntry, WitnessReport};
use crate::error::{Error, Result};
use crate::knapsack::{Instance, Selector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    n: usize,
    capacity: String,
    items: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Value>,
}

fn parse_int(s: &str, what: &str) -> Result<BigInt> {
    if s.is_empty() || !s.bytes().enumerate().all(|(i, b)| b.is_ascii_digit() || (i == 0 && b == b'-')) {
        return Err(Error::Input(format!("{what} {s:?} is not a decimal integer")));
    }
    s.parse().map_err(|_| Error::Input(format!("{what} {s:?} is not a decimal integer")))
}

/// Parses an instance document, returning the provenance object untouched.
pub fn read_instance(text: &str) -> Result<(Instance, Option<Value>)> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| Error::Input(format!("instance document: {e}")))?;
    if doc.n != doc.items.len() {
        return Err(Error::Input(format!("n = {} but {} items listed", doc.n, doc.items.len())));
    }
    let items = doc.items.iter().map(|s| parse_int(s, "item")).collect::<Result<Vec<_>>>()?;
    let capacity = parse_int(&doc.capacity, "capacity")?;
    Ok((Instance::new(items, capacity)?, doc.provenance))
}

pub fn write_instance(instance: &Instance, provenance: Option<Value>) -> String {
    let doc = InstanceDoc {
        n: instance.len(),
        capacity: instance.capacity().to_string(),
        items: instance.items().iter().map(ToString::to_string).collect(),
        provenance,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("instance serializes");
    s.push('\n');
    s
}

pub fn params_json(p: &AdversaryParams) -> Value {
    json!({
        "n": p.n.to_string(),
        "beta": format_ratio(&p.beta),
        "gamma": format_ratio(&p.gamma),
        "alpha": format_ratio(&p.alpha),
        "capacity": p.capacity.to_string(),
        "slack": p.slack.to_string(),
    })
}

fn strings(xs: &[BigInt]) -> Value {
    Value::from(xs.iter().map(ToString::to_string).collect::<Vec<_>>())
}

pub fn selector_json(s: &Selector) -> Value {
    Value::from(s.indices().to_vec())
}

/// Reads a selector from a JSON array of indices.
pub fn selector_from_json(v: &Value) -> Result<Selector> {
    let arr = v.as_array().ok_or_else(|| Error::Input("selector must be an array of indices".into()))?;
    arr.iter()
        .map(|x| {
            x.as_u64().map(|i| i as usize).ok_or_else(|| Error::Input(format!("selector entry {x} is not an index")))
        })
        .collect::<Result<Vec<_>>>()
        .map(Selector::new)
}

pub fn certificate_json(c: &Certificate) -> Value {
    json!({
        "capacity": c.instance.capacity().to_string(),
        "items": strings(c.instance.items()),
        "designated": selector_json(&c.designated),
        "found": c.found.iter().map(selector_json).collect::<Vec<_>>(),
        "verified": c.verified,
        "enumeration_size": c.enumeration_size.to_string(),
    })
}

fn entry_json(e: &WitnessEntry) -> Value {
    let mut v = json!({
        "q": selector_json(&e.q),
        "verified": e.verified(),
        "failure": e.failure,
    });
    if let Some(c) = &e.construction {
        v["r"] = strings(&c.r);
        v["b1"] = Value::from(c.b1.to_string());
        v["b2"] = Value::from(c.b2.to_string());
        v["w"] = Value::from(c.w.to_string());
        v["v"] = Value::from(c.v.to_string());
        v["center"] = Value::from(format_ratio(&c.center));
        v["pair_offset"] = Value::from(c.pair_offset.to_string());
    }
    if let Some(cert) = &e.certificate {
        v["enumeration_size"] = Value::from(cert.enumeration_size.to_string());
        v["designated"] = selector_json(&cert.designated);
    }
    v
}

/// Who produced a game: solver name and optional seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Origin {
    pub solver: String,
    pub seed: Option<u64>,
}

pub fn report_json(report: &WitnessReport, params: &AdversaryParams, origin: &Origin) -> Value {
    json!({
        "params": params_json(params),
        "solver": origin.solver,
        "seed": origin.seed,
        "picks": strings(&report.picks),
        "entries": report.entries.iter().map(entry_json).collect::<Vec<_>>(),
        "successes": report.successes,
        "bound": report.bound.to_string(),
        "complete": report.complete,
    })
}

/// Provenance object for a generated instance.
pub fn provenance(params: &AdversaryParams, origin: &Origin, q: &Selector, designated: &Selector) -> Value {
    json!({
        "params": params_json(params),
        "solver": origin.solver,
        "seed": origin.seed,
        "q": selector_json(q),
        "designated": selector_json(designated),
    })
}

/// `provenance.designated`, when present.
pub fn provenance_designated(provenance: Option<&Value>) -> Option<Result<Selector>> {
    provenance.and_then(|p| p.get("designated")).map(selector_from_json)
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}
