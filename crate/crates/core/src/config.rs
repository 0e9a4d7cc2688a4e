//! Run configuration: parsing and validation of the JSON config file.
//!
//! ```json
//! {
//!   "parabolic": {"rank": 2, "genus": 0,
//!                 "points": [{"position": "0", "partition": [1, 1]}, ...]},
//!   "field": {"q": 5},
//!   "seed": 7,
//!   "precision": 16,
//!   "options": {"d": 0, "e": 0, "zeta_depth": 2, "max_draws": 2000},
//!   "local": {"mu": [2, 1], "coeffs": ["1", "2", "3"]}
//! }
//! ```
//!
//! `field` is `{"q": N}` or `"rationals"`; omitting it selects the rational
//! pipeline. Positions are strings, `"inf"` being the point at infinity.

use serde_json::{json, Map, Value};

use crate::arith::field::{format_rational, parse_rational};
use crate::parabolic::{MarkedPoint, ParabolicData, Partition, Position};

pub const DEFAULT_MAX_DRAWS: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Finite(u64),
}

impl FieldSpec {
    pub fn q(self) -> Option<u64> {
        match self {
            FieldSpec::Finite(q) => Some(q),
            FieldSpec::Rationals => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    /// Degree of the parabolic Higgs bundle, for the BNR and gerbe checks.
    pub d: i64,
    /// Degree of the twisting class for the gerbe check.
    pub e: i64,
    pub zeta_depth: Option<u32>,
    pub max_draws: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { d: 0, e: 0, zeta_depth: None, max_draws: DEFAULT_MAX_DRAWS }
    }
}

/// A single local equation for `resolve`, coefficients kept as text until
/// the field is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSpec {
    pub mu: Partition,
    /// Each coefficient is a list of series coefficients, lowest first.
    pub coeffs: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TestHooks {
    /// Adds one to the closed-form δ so the triangulation must fail.
    pub corrupt_delta: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub data: ParabolicData,
    pub field: FieldSpec,
    pub precision: Option<usize>,
    pub seed: u64,
    pub options: Options,
    pub local: Option<LocalSpec>,
    pub hooks: TestHooks,
}

struct Errors(Vec<String>);

impl Errors {
    fn push(&mut self, path: &str, msg: impl std::fmt::Display) {
        self.0.push(format!("{path}: {msg}"));
    }

    fn uint(&mut self, v: &Value, path: &str) -> Option<u64> {
        let n = v.as_u64();
        if n.is_none() {
            self.push(path, "expected a non-negative integer");
        }
        n
    }

    fn int(&mut self, v: &Value, path: &str) -> Option<i64> {
        let n = v.as_i64();
        if n.is_none() {
            self.push(path, "expected an integer");
        }
        n
    }

    fn object<'a>(&mut self, v: &'a Value, path: &str, allowed: &[&str]) -> Option<&'a Map<String, Value>> {
        let Some(m) = v.as_object() else {
            self.push(path, "expected an object");
            return None;
        };
        for k in m.keys() {
            if !allowed.contains(&k.as_str()) {
                self.push(&format!("{path}.{k}"), "unknown field");
            }
        }
        Some(m)
    }

    fn parts(&mut self, v: &Value, path: &str) -> Option<Vec<usize>> {
        let Some(arr) = v.as_array() else {
            self.push(path, "expected an array of positive integers");
            return None;
        };
        let mut out = Vec::new();
        for (i, x) in arr.iter().enumerate() {
            out.push(self.uint(x, &format!("{path}[{i}]"))? as usize);
        }
        Some(out)
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) if n.is_i64() => Some(n.to_string()),
        _ => None,
    }
}

fn parse_point(v: &Value, path: &str, errs: &mut Errors) -> Option<MarkedPoint> {
    let m = errs.object(v, path, &["position", "partition", "weights"])?;
    let position = match m.get("position") {
        Some(p) => match scalar_text(p) {
            Some(s) => Position(s),
            None => {
                errs.push(&format!("{path}.position"), "expected a string such as \"0\" or \"inf\"");
                return None;
            }
        },
        None => {
            errs.push(&format!("{path}.position"), "missing");
            return None;
        }
    };
    let Some(parts) = m.get("partition") else {
        errs.push(&format!("{path}.partition"), "missing");
        return None;
    };
    let parts = errs.parts(parts, &format!("{path}.partition"))?;
    let weights = match m.get("weights") {
        None | Some(Value::Null) => None,
        Some(Value::Array(ws)) => {
            let mut out = Vec::new();
            for (i, w) in ws.iter().enumerate() {
                match scalar_text(w).as_deref().and_then(parse_rational) {
                    Some(q) => out.push(q),
                    None => errs.push(&format!("{path}.weights[{i}]"), "expected a rational such as \"1/3\""),
                }
            }
            Some(out)
        }
        Some(_) => {
            errs.push(&format!("{path}.weights"), "expected an array");
            None
        }
    };
    match MarkedPoint::new(position, &parts, weights) {
        Ok(p) => Some(p),
        Err(e) => {
            errs.push(path, e);
            None
        }
    }
}

fn parse_local(v: &Value, errs: &mut Errors) -> Option<LocalSpec> {
    let m = errs.object(v, "local", &["mu", "coeffs"])?;
    let mu = errs.parts(m.get("mu").unwrap_or(&Value::Null), "local.mu")?;
    let mu = match Partition::new(mu) {
        Ok(p) => p,
        Err(e) => {
            errs.push("local.mu", e);
            return None;
        }
    };
    let Some(cs) = m.get("coeffs").and_then(Value::as_array) else {
        errs.push("local.coeffs", "expected an array");
        return None;
    };
    let mut coeffs = Vec::new();
    for (i, c) in cs.iter().enumerate() {
        let path = format!("local.coeffs[{i}]");
        let series: Vec<Value> = match c {
            Value::Array(a) => a.clone(),
            other => vec![other.clone()],
        };
        let mut out = Vec::new();
        for (k, x) in series.iter().enumerate() {
            match scalar_text(x) {
                Some(s) => out.push(s),
                None => errs.push(&format!("{path}[{k}]"), "expected a number or a string"),
            }
        }
        coeffs.push(out);
    }
    if coeffs.len() != mu.total() {
        errs.push("local.coeffs", format!("expected {} coefficients for mu = {mu}", mu.total()));
    }
    Some(LocalSpec { mu, coeffs })
}

/// Parses and validates a config, reporting every problem found.
pub fn parse_config(text: &str) -> Result<RunConfig, Vec<String>> {
    let root: Value = serde_json::from_str(text).map_err(|e| vec![format!("config is not valid JSON: {e}")])?;
    let mut errs = Errors(Vec::new());
    let Some(top) =
        errs.object(&root, "config", &["parabolic", "field", "precision", "seed", "options", "local", "test_hooks", "description"])
    else {
        return Err(errs.0);
    };

    let data = match top.get("parabolic") {
        None => {
            errs.push("parabolic", "missing");
            None
        }
        Some(p) => errs.object(p, "parabolic", &["rank", "genus", "points"]).and_then(|m| {
            let rank = errs.uint(m.get("rank").unwrap_or(&Value::Null), "parabolic.rank");
            let genus = errs.uint(m.get("genus").unwrap_or(&Value::Null), "parabolic.genus");
            let pts = match m.get("points").and_then(Value::as_array) {
                Some(a) => a.iter().enumerate().map(|(i, v)| parse_point(v, &format!("parabolic.points[{i}]"), &mut errs)).collect(),
                None => {
                    errs.push("parabolic.points", "expected an array");
                    vec![None]
                }
            };
            let pts: Option<Vec<MarkedPoint>> = pts.into_iter().collect();
            match (rank, genus, pts) {
                (Some(r), Some(g), Some(pts)) => match ParabolicData::new(r as usize, g as usize, pts) {
                    Ok(d) => Some(d),
                    Err(es) => {
                        for e in es {
                            errs.push("parabolic", e);
                        }
                        None
                    }
                },
                _ => None,
            }
        }),
    };

    let field = match top.get("field") {
        None | Some(Value::Null) => Some(FieldSpec::Rationals),
        Some(Value::String(s)) if s == "rationals" => Some(FieldSpec::Rationals),
        Some(v @ Value::Object(_)) => errs
            .object(v, "field", &["q"])
            .and_then(|m| errs.uint(m.get("q").unwrap_or(&Value::Null), "field.q"))
            .and_then(|q| {
                if crate::arith::gf::prime_power(q).is_none() {
                    errs.push("field.q", format!("{q} is not a prime power"));
                    None
                } else {
                    Some(FieldSpec::Finite(q))
                }
            }),
        Some(_) => {
            errs.push("field", "expected {\"q\": N} or \"rationals\"");
            None
        }
    };

    let precision = top.get("precision").and_then(|v| errs.uint(v, "precision")).map(|p| p as usize);
    if precision == Some(0) {
        errs.push("precision", "must be positive");
    }
    let seed = top.get("seed").map_or(Some(0), |v| errs.uint(v, "seed")).unwrap_or(0);

    let mut options = Options::default();
    if let Some(v) = top.get("options") {
        if let Some(m) = errs.object(v, "options", &["d", "e", "zeta_depth", "max_draws"]) {
            if let Some(d) = m.get("d") {
                options.d = errs.int(d, "options.d").unwrap_or(0);
            }
            if let Some(e) = m.get("e") {
                options.e = errs.int(e, "options.e").unwrap_or(0);
            }
            if let Some(z) = m.get("zeta_depth") {
                options.zeta_depth = errs.uint(z, "options.zeta_depth").map(|z| z as u32);
                if options.zeta_depth == Some(0) {
                    errs.push("options.zeta_depth", "must be positive");
                }
            }
            if let Some(n) = m.get("max_draws") {
                options.max_draws = errs.uint(n, "options.max_draws").unwrap_or(1) as usize;
                if options.max_draws == 0 {
                    errs.push("options.max_draws", "must be positive");
                }
            }
        }
    }

    let local = top.get("local").and_then(|v| parse_local(v, &mut errs));

    let mut hooks = TestHooks::default();
    if let Some(v) = top.get("test_hooks") {
        if let Some(m) = errs.object(v, "test_hooks", &["corrupt_delta"]) {
            hooks.corrupt_delta = match m.get("corrupt_delta") {
                None => false,
                Some(Value::Bool(b)) => *b,
                Some(_) => {
                    errs.push("test_hooks.corrupt_delta", "expected a boolean");
                    false
                }
            };
        }
    }

    match (data, field) {
        (Some(data), Some(field)) if errs.0.is_empty() => {
            Ok(RunConfig { data, field, precision, seed, options, local, hooks })
        }
        _ => Err(errs.0),
    }
}

impl RunConfig {
    /// Normalized echo of the configuration for reports.
    pub fn to_json(&self) -> Value {
        let points: Vec<Value> = self
            .data
            .points
            .iter()
            .map(|p| {
                let mut m = json!({"position": p.position.label(), "partition": p.original});
                if let Some(w) = &p.weights {
                    m["weights"] = json!(w.iter().map(format_rational).collect::<Vec<_>>());
                }
                m
            })
            .collect();
        let mut out = json!({
            "parabolic": {"rank": self.data.rank, "genus": self.data.genus, "points": points},
            "field": match self.field {
                FieldSpec::Rationals => json!("rationals"),
                FieldSpec::Finite(q) => json!({"q": q}),
            },
            "seed": self.seed,
            "options": {
                "d": self.options.d,
                "e": self.options.e,
                "max_draws": self.options.max_draws,
            },
        });
        if let Some(z) = self.options.zeta_depth {
            out["options"]["zeta_depth"] = json!(z);
        }
        if let Some(p) = self.precision {
            out["precision"] = json!(p);
        }
        if let Some(l) = &self.local {
            out["local"] = json!({"mu": l.mu.parts(), "coeffs": l.coeffs});
        }
        if self.hooks.corrupt_delta {
            out["test_hooks"] = json!({"corrupt_delta": true});
        }
        out
    }
}
