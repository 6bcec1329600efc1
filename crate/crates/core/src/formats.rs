//! JSON input documents: curve files, charge files and cochain complexes.
//!
//! Numbers may be JSON numbers or `"p/q"` strings; both are read exactly.
//! Syntax and type errors carry the byte offset where parsing stopped.

use std::fmt;

use serde::de::{self, DeserializeOwned, Deserializer, Visitor};
use serde::Deserialize;
use serde_json::json;

use crate::charges::ChargeSystem;
use crate::hodge::simplicial::SimplicialComplex;
use crate::hodge::{GradedComplex, GradedOp, HodgeError};
use crate::linalg::QMatrix;
use crate::rational::{fmt_q, ExactQ, QVec, Q};
use crate::solver::Multilinear;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub message: String,
    /// Byte offset into the document, when known.
    pub offset: Option<usize>,
}

impl InputError {
    pub fn new(message: impl Into<String>) -> Self {
        InputError { message: message.into(), offset: None }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self.offset {
            Some(o) => write!(f, "byte {o}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for InputError {}

/// Byte offset of a 1-based line/column position.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let start: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    (start + column.saturating_sub(1)).min(text.len())
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, InputError> {
    serde_json::from_str(text).map_err(|e| {
        let offset = (e.line() > 0).then(|| byte_offset(text, e.line(), e.column()));
        let message = e.to_string();
        // serde_json appends " at line L column C"; the offset replaces it
        let message = message.split(" at line ").next().unwrap_or(&message).to_string();
        InputError { message, offset }
    })
}

/// A curve identifier, written as a string or a non-negative integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveId(pub String);

impl<'de> Deserialize<'de> for CurveId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = CurveId;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a string or integer curve id")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<CurveId, E> {
                Ok(CurveId(v.to_string()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<CurveId, E> {
                Ok(CurveId(v.to_string()))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<CurveId, E> {
                Ok(CurveId(v.to_string()))
            }
            fn visit_map<A: de::MapAccess<'de>>(self, map: A) -> Result<CurveId, A::Error> {
                let n = serde_json::Number::deserialize(de::value::MapAccessDeserializer::new(map))?;
                Ok(CurveId(n.to_string()))
            }
        }
        deserializer.deserialize_any(V)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveEntry {
    id: CurveId,
    vertices: Vec<Vec<ExactQ>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveDocument {
    curves: Vec<CurveEntry>,
}

/// A curve as read from a file, before any geometric validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedCurve {
    pub id: String,
    pub vertices: Vec<Vec<Q>>,
}

/// Reads `{"curves": [{"id": .., "vertices": [[x, y, ..], ..]}, ..]}` with
/// `dim` coordinates per vertex.
pub fn parse_curves(text: &str, dim: usize) -> Result<Vec<NamedCurve>, InputError> {
    let doc: CurveDocument = parse_json(text)?;
    let mut out = Vec::with_capacity(doc.curves.len());
    for entry in doc.curves {
        if out.iter().any(|c: &NamedCurve| c.id == entry.id.0) {
            return Err(InputError::new(format!("duplicate curve id {:?}", entry.id.0)));
        }
        if let Some(k) = entry.vertices.iter().position(|v| v.len() != dim) {
            return Err(InputError::new(format!(
                "curve {:?}: vertex {k} has {} coordinates, expected {dim}",
                entry.id.0,
                entry.vertices[k].len()
            )));
        }
        out.push(NamedCurve {
            id: entry.id.0,
            vertices: entry.vertices.into_iter().map(|v| v.into_iter().map(|x| x.0).collect()).collect(),
        });
    }
    Ok(out)
}

/// Finds a curve by id, or by position when no id matches a numeric selector.
pub fn select_curve(curves: &[NamedCurve], selector: &str) -> Result<usize, InputError> {
    if let Some(i) = curves.iter().position(|c| c.id == selector) {
        return Ok(i);
    }
    match selector.parse::<usize>() {
        Ok(i) if i < curves.len() => Ok(i),
        _ => Err(InputError::new(format!("no curve with id {selector:?}"))),
    }
}

/// Writes a curve document with exact coordinates (integers as numbers,
/// other rationals as `"p/q"` strings).
pub fn curves_to_json(curves: &[(String, Vec<Vec<Q>>)]) -> String {
    let coord = |x: &Q| {
        if x.is_integer() {
            serde_json::from_str::<serde_json::Value>(&fmt_q(x)).expect("integer literal")
        } else {
            json!(fmt_q(x))
        }
    };
    let doc = json!({
        "curves": curves
            .iter()
            .map(|(id, vs)| json!({
                "id": id,
                "vertices": vs.iter().map(|v| v.iter().map(coord).collect::<Vec<_>>()).collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>()
    });
    serde_json::to_string_pretty(&doc).expect("serializable")
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChargeDocument {
    dim: usize,
    tr: Vec<Vec<ExactQ>>,
    charges: Vec<Vec<ExactQ>>,
}

fn matrix(rows: Vec<Vec<ExactQ>>, n_rows: usize, n_cols: usize, what: &str) -> Result<QMatrix, InputError> {
    if rows.len() != n_rows || rows.iter().any(|r| r.len() != n_cols) {
        return Err(InputError::new(format!("{what} must be a {n_rows}x{n_cols} matrix")));
    }
    Ok(QMatrix::from_rows_with_cols(rows.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect(), n_cols))
}

/// Reads `{"dim": m, "tr": [[..]], "charges": [[..], ..]}`.
pub fn parse_charges(text: &str) -> Result<ChargeSystem, InputError> {
    let doc: ChargeDocument = parse_json(text)?;
    let tr = matrix(doc.tr, doc.dim, doc.dim, "tr")?;
    let charges = doc.charges.into_iter().map(|c| QVec(c.into_iter().map(|x| x.0).collect())).collect();
    ChargeSystem::new(tr, charges).map_err(|e| InputError::new(e.to_string()))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDocument {
    out: usize,
    inputs: Vec<usize>,
    c: ExactQ,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OpDocument {
    label: usize,
    arity: usize,
    terms: Vec<TermDocument>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexDocument {
    dims: Option<Vec<usize>>,
    d: Option<Vec<Vec<Vec<ExactQ>>>>,
    inner: Option<Vec<Vec<Vec<ExactQ>>>>,
    facets: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    cup: bool,
    #[serde(default)]
    ops: Vec<OpDocument>,
    b: Option<Vec<ExactQ>>,
}

/// A complex together with operators and an optional right-hand side.
#[derive(Debug, Clone)]
pub struct ComplexInput {
    pub complex: GradedComplex,
    pub ops: Vec<GradedOp>,
    pub b: Option<QVec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComplexInputError {
    Input(InputError),
    Complex(HodgeError),
}

impl fmt::Display for ComplexInputError {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            ComplexInputError::Input(e) => e.fmt(f),
            ComplexInputError::Complex(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for ComplexInputError {}

impl From<InputError> for ComplexInputError {
    fn from(e: InputError) -> Self {
        ComplexInputError::Input(e)
    }
}

/// Reads a complex given either explicitly (`dims`, `d`, optional `inner`) or
/// as the simplicial cochains of `facets`. `cup: true` adds the cup product
/// as `O_(0,2)`; `ops` lists further operators with terms indexed in the
/// total space `A^0 ⊕ A^1 ⊕ ...`.
pub fn parse_complex(text: &str) -> Result<ComplexInput, ComplexInputError> {
    let doc: ComplexDocument = parse_json(text)?;
    let (complex, cup) = match (&doc.facets, &doc.dims) {
        (Some(_), Some(_)) => return Err(InputError::new("give either facets or dims, not both").into()),
        (Some(facets), None) => {
            if doc.d.is_some() || doc.inner.is_some() {
                return Err(InputError::new("d and inner are derived from facets").into());
            }
            if facets.is_empty() || facets.iter().any(Vec::is_empty) {
                return Err(InputError::new("facets must be non-empty vertex lists").into());
            }
            let s = SimplicialComplex::from_facets(facets);
            (s.cochain_complex(), doc.cup.then(|| s.cup_product()))
        }
        (None, Some(dims)) => {
            if doc.cup {
                return Err(InputError::new("cup requires facets").into());
            }
            let d_rows = doc.d.unwrap_or_default();
            if d_rows.len() + 1 != dims.len() {
                return Err(InputError::new(format!("{} degrees need {} differentials", dims.len(), dims.len().saturating_sub(1))).into());
            }
            let d = d_rows
                .into_iter()
                .enumerate()
                .map(|(i, m)| matrix(m, dims[i + 1], dims[i], &format!("d^{i}")))
                .collect::<Result<Vec<_>, _>>()?;
            let inner = doc
                .inner
                .map(|ms| {
                    if ms.len() != dims.len() {
                        return Err(InputError::new("one inner product per degree is required"));
                    }
                    ms.into_iter().enumerate().map(|(i, m)| matrix(m, dims[i], dims[i], &format!("inner[{i}]"))).collect()
                })
                .transpose()?;
            let c = GradedComplex::new(dims.clone(), d, inner).map_err(ComplexInputError::Complex)?;
            (c, None)
        }
        (None, None) => return Err(InputError::new("missing dims or facets").into()),
    };
    let total = complex.total_dim();
    let mut ops = Vec::new();
    if let Some(m) = cup {
        ops.push(GradedOp::new(0, m));
    }
    for (k, op) in doc.ops.into_iter().enumerate() {
        if op.arity < 2 {
            return Err(InputError::new(format!("ops[{k}]: arity must be at least 2")).into());
        }
        let mut m = Multilinear::new(op.arity, total, total);
        for (t, term) in op.terms.into_iter().enumerate() {
            if term.inputs.len() != op.arity || term.out >= total || term.inputs.iter().any(|&i| i >= total) {
                return Err(InputError::new(format!("ops[{k}].terms[{t}]: indices out of range or wrong arity")).into());
            }
            m.add_term(term.out, &term.inputs, term.c.0);
        }
        ops.push(GradedOp::new(op.label, m));
    }
    let b = doc.b.map(|b| QVec(b.into_iter().map(|x| x.0).collect()));
    Ok(ComplexInput { complex, ops, b })
}
