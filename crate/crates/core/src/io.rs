//! Complex documents and deterministic report emission.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer};

use crate::complex::{SimplexId, SimplicialComplex};
use crate::engine::VerifiedTrace;
use crate::error::{Error, Result};
use crate::geodesic::SimplexPoint;
use crate::metric::MetricAssignment;
use crate::verify::{CheckReport, Witness};

pub const FORMAT_VERSION: &str = "1";

#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub expected_outcome: String,
}

/// Edge lengths in document order; duplicate keys are kept so they can be
/// rejected.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EdgeLengths(pub Vec<(String, f64)>);

impl<'de> Deserialize<'de> for EdgeLengths {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = EdgeLengths;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from \"u,v\" to a length")
            }
            fn visit_map<M: MapAccess<'de>>(self, mut m: M) -> std::result::Result<EdgeLengths, M::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = m.next_entry::<String, f64>()? {
                    out.push((k, v));
                }
                Ok(EdgeLengths(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub format_version: String,
    pub vertices: Vec<String>,
    pub maximal_simplices: Vec<Vec<String>>,
    #[serde(default)]
    pub edge_lengths: Option<EdgeLengths>,
    #[serde(default)]
    pub metadata: Option<Metadata>,
}

pub fn parse_document(text: &str) -> Result<ComplexDocument> {
    serde_json::from_str(text).map_err(|e| match e.classify() {
        serde_json::error::Category::Data => {
            Error::MalformedInput(format!("{} (line {}, column {})", e, e.line(), e.column()))
        }
        _ => Error::Syntax { line: e.line(), column: e.column(), message: e.to_string() },
    })
}

impl ComplexDocument {
    /// Face closure and validated metric.
    pub fn build(&self) -> Result<(SimplicialComplex, MetricAssignment)> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::MalformedInput(format!("unsupported format_version {:?}", self.format_version)));
        }
        let k = SimplicialComplex::from_labeled(self.vertices.clone(), &self.maximal_simplices)?;
        let used: BTreeSet<&str> = self.maximal_simplices.iter().flatten().map(String::as_str).collect();
        if let Some(v) = self.vertices.iter().find(|v| !used.contains(v.as_str())) {
            return Err(Error::MalformedInput(format!("vertex {v:?} lies in no listed simplex")));
        }
        let metric = match &self.edge_lengths {
            None => MetricAssignment::standard(&k),
            Some(EdgeLengths(entries)) => {
                let mut m = MetricAssignment::from_lengths(Default::default());
                let mut seen = BTreeSet::new();
                for (key, value) in entries {
                    let (u, v) = key
                        .split_once(',')
                        .ok_or_else(|| Error::MalformedInput(format!("edge key {key:?} is not of the form \"u,v\"")))?;
                    if u >= v {
                        return Err(Error::MalformedInput(format!("edge key {key:?} must list two distinct labels in sorted order")));
                    }
                    let (a, b) = (
                        k.vertex_index(u).ok_or_else(|| Error::UnknownVertex(u.to_string()))?,
                        k.vertex_index(v).ok_or_else(|| Error::UnknownVertex(v.to_string()))?,
                    );
                    if !k.contains(&SimplexId::edge(a, b)) {
                        return Err(Error::UnknownEdge(key.clone()));
                    }
                    if !seen.insert((a, b)) {
                        return Err(Error::MalformedInput(format!("edge {key:?} is listed twice")));
                    }
                    if !(*value > 0.0) {
                        return Err(Error::NegativeLength { edge: key.clone(), value: *value });
                    }
                    m.set(a, b, *value);
                }
                m
            }
        };
        metric.validate(&k)?;
        Ok((k, metric))
    }
}

/// Parses and validates a complex document.
pub fn parse_complex(text: &str) -> Result<(SimplicialComplex, MetricAssignment)> {
    parse_document(text)?.build()
}

pub fn load_complex(path: &std::path::Path) -> Result<(SimplicialComplex, MetricAssignment)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_complex(&text)
}

/// A JSON value whose numbers are printed with 17 significant digits.
#[derive(Clone, Debug, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn obj<K: Into<String>>(fields: Vec<(K, Json)>) -> Json {
        Json::Obj(fields.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn str(s: impl Into<String>) -> Json {
        Json::Str(s.into())
    }

    fn write(&self, out: &mut String, indent: usize) {
        let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat_n(' ', n));
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => write!(out, "{i}").unwrap(),
            Json::Num(x) if x.is_finite() => write!(out, "{x:.16e}").unwrap(),
            // Non-finite values have no JSON number form.
            Json::Num(x) => out.push_str(&serde_json::to_string(&x.to_string()).unwrap()),
            Json::Str(s) => out.push_str(&serde_json::to_string(s).unwrap()),
            Json::Arr(v) if v.is_empty() => out.push_str("[]"),
            Json::Obj(v) if v.is_empty() => out.push_str("{}"),
            Json::Arr(v) if v.iter().all(|x| matches!(x, Json::Int(_) | Json::Num(_) | Json::Str(_))) => {
                out.push('[');
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    x.write(out, indent);
                }
                out.push(']');
            }
            Json::Arr(v) => {
                out.push_str("[\n");
                for (i, x) in v.iter().enumerate() {
                    pad(out, indent + 2);
                    x.write(out, indent + 2);
                    out.push_str(if i + 1 < v.len() { ",\n" } else { "\n" });
                }
                pad(out, indent);
                out.push(']');
            }
            Json::Obj(v) => {
                out.push_str("{\n");
                for (i, (k, x)) in v.iter().enumerate() {
                    pad(out, indent + 2);
                    out.push_str(&serde_json::to_string(k).unwrap());
                    out.push_str(": ");
                    x.write(out, indent + 2);
                    out.push_str(if i + 1 < v.len() { ",\n" } else { "\n" });
                }
                pad(out, indent);
                out.push('}');
            }
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        self.write(&mut s, 0);
        s.push('\n');
        s
    }
}

fn labels_of(k: &SimplicialComplex, s: &SimplexId) -> Json {
    Json::Arr(s.vertices().iter().map(|&v| Json::str(k.label(v))).collect())
}

pub fn point_json(k: &SimplicialComplex, p: &SimplexPoint) -> Json {
    Json::obj(vec![
        ("simplex", labels_of(k, &p.simplex())),
        ("coords", Json::Arr(p.coords().iter().map(|c| Json::Num(*c)).collect())),
    ])
}

fn witness_json(k: &SimplicialComplex, w: &Witness) -> Json {
    Json::obj(vec![
        ("description", Json::str(&w.description)),
        (
            "points",
            Json::Arr(
                w.points
                    .iter()
                    .map(|(n, p)| {
                        let Json::Obj(mut f) = point_json(k, p) else { unreachable!() };
                        f.insert(0, ("name".into(), Json::str(n)));
                        Json::Obj(f)
                    })
                    .collect(),
            ),
        ),
        ("simplices", Json::Arr(w.simplices.iter().map(|s| labels_of(k, s)).collect())),
        ("values", Json::Obj(w.values.iter().map(|(n, v)| (n.clone(), Json::Num(*v))).collect())),
    ])
}

pub fn report_json(k: &SimplicialComplex, r: &CheckReport) -> Json {
    let mut f = vec![
        ("check".to_string(), Json::str(&r.check)),
        ("verdict".to_string(), Json::str(r.verdict.as_str())),
        ("worst_violation".to_string(), Json::Num(r.worst_violation)),
        ("details".to_string(), Json::Obj(r.details.iter().map(|(a, b)| (a.clone(), Json::str(b))).collect())),
    ];
    if let Some(w) = &r.witness {
        f.push(("witness".into(), witness_json(k, w)));
    }
    Json::Obj(f)
}

pub fn emit_report(k: &SimplicialComplex, r: &CheckReport) -> String {
    report_json(k, r).render()
}

/// Several reports with an overall verdict.
pub fn emit_reports(k: &SimplicialComplex, verdict: &str, reports: &[CheckReport]) -> String {
    Json::obj(vec![("verdict", Json::str(verdict)), ("reports", Json::Arr(reports.iter().map(|r| report_json(k, r)).collect()))]).render()
}

pub fn complex_json(k: &SimplicialComplex) -> Json {
    let used: BTreeSet<u32> = k.vertices().into_iter().collect();
    Json::obj(vec![
        ("vertices", Json::Arr(used.iter().map(|&v| Json::str(k.label(v))).collect())),
        ("maximal_simplices", Json::Arr(k.maximal_simplices().iter().map(|s| labels_of(k, s)).collect())),
    ])
}

pub fn trace_json(t: &VerifiedTrace) -> Json {
    let k = &t.trace.initial;
    let steps = t
        .trace
        .steps
        .iter()
        .zip(&t.trace.verification_reports)
        .enumerate()
        .map(|(i, (p, reps))| {
            Json::obj(vec![
                ("step", Json::Int(i as i64)),
                ("coface", labels_of(k, &p.coface)),
                ("free_face", labels_of(k, &p.free_face)),
                ("coface_dim", Json::Int(p.coface.dim() as i64)),
                ("reports", Json::Arr(reps.iter().map(|r| report_json(k, r)).collect())),
            ])
        })
        .collect();
    let mut f = vec![
        ("outcome".to_string(), Json::str(t.outcome.as_str())),
        ("steps_taken".to_string(), Json::Int(t.trace.steps.len() as i64)),
        ("initial_size".to_string(), Json::Int(k.len() as i64)),
        ("metadata".to_string(), Json::Obj(t.metadata.iter().map(|(a, b)| (a.clone(), Json::str(b))).collect())),
        ("steps".to_string(), Json::Arr(steps)),
    ];
    if let Some(s) = &t.stuck {
        f.push(("stuck".into(), complex_json(s)));
    }
    Json::Obj(f)
}

pub fn emit_trace(t: &VerifiedTrace) -> String {
    trace_json(t).render()
}

/// Canonical document: vertices and simplices as stored, lengths under
/// sorted keys with 17 significant digits.
pub fn emit_document(k: &SimplicialComplex, metric: &MetricAssignment, metadata: Option<&Metadata>) -> String {
    let mut f = vec![
        ("format_version".to_string(), Json::str(FORMAT_VERSION)),
        ("vertices".to_string(), Json::Arr(k.labels().iter().map(Json::str).collect())),
        ("maximal_simplices".to_string(), Json::Arr(k.maximal_simplices().iter().map(|s| labels_of(k, s)).collect())),
    ];
    let mut lengths: Vec<(String, f64)> = k
        .edges()
        .map(|e| {
            let (a, b) = (k.label(e.vertices()[0]), k.label(e.vertices()[1]));
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            (format!("{a},{b}"), metric.len(e.vertices()[0], e.vertices()[1]))
        })
        .collect();
    lengths.sort_by(|x, y| x.0.cmp(&y.0));
    if !lengths.is_empty() {
        f.push(("edge_lengths".into(), Json::Obj(lengths.into_iter().map(|(k, v)| (k, Json::Num(v))).collect())));
    }
    if let Some(m) = metadata {
        f.push((
            "metadata".into(),
            Json::obj(vec![("name", Json::str(&m.name)), ("expected_outcome", Json::str(&m.expected_outcome))]),
        ));
    }
    Json::Obj(f).render()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TET: &str = r#"{"format_version": "1", "vertices": ["a","b","c","d"], "maximal_simplices": [["a","b","c","d"]]}"#;

    #[test]
    fn default_metric_is_standard() {
        let (k, m) = parse_complex(TET).unwrap();
        assert_eq!(k.len(), 15);
        assert!(k.edges().all(|e| m.len(e.vertices()[0], e.vertices()[1]) == 1.0));
    }

    #[test]
    fn negative_length() {
        let doc = r#"{"format_version": "1", "vertices": ["a","b"], "maximal_simplices": [["a","b"]], "edge_lengths": {"a,b": -1}}"#;
        assert!(matches!(parse_complex(doc), Err(Error::NegativeLength { .. })));
    }

    #[test]
    fn syntax_position() {
        let Err(Error::Syntax { line, column, .. }) = parse_complex("{\n  \"format_version\": \"1\",,\n}") else { panic!() };
        assert_eq!(line, 2);
        assert!(column > 0);
    }

    #[test]
    fn round_trip() {
        let (k, m) = parse_complex(TET).unwrap();
        let text = emit_document(&k, &m, None);
        let (k2, m2) = parse_complex(&text).unwrap();
        assert_eq!(k, k2);
        assert_eq!(m, m2);
        assert_eq!(emit_document(&k2, &m2, None), text);
    }
}
