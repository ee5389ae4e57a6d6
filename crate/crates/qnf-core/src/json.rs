//! Network interchange format.
//!
//! `{"input_dim": d, "layers": [{"A": [["p/q", ...], ...], "b": ["p/q", ...]}, ...]}`
//! with every scalar a decimal fraction string (`q` omitted when one). Large
//! matrices are written in the equivalent sparse form
//! `{"rows": r, "cols": c, "entries": [[i, j, "p/q"], ...]}`; both forms are read.

use std::fmt::{self, Write as _};

use serde::de::{self, DeserializeOwned, MapAccess, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::error::Violation;
use crate::matrix::Matrix;
use crate::network::{Layer, NetworkConfig};
use crate::rational::{self, Rational};

/// Matrices with more cells than this are serialized in sparse form.
pub const DENSE_CELL_LIMIT: usize = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("parse error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("invalid configuration: {0:?}")]
    Invalid(Vec<Violation>),
}

/// A rational carried as a `"p/q"` JSON string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonRational(pub Rational);

impl Serialize for JsonRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational::fmt(&self.0))
    }
}

impl<'de> Deserialize<'de> for JsonRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = JsonRational;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a fraction string \"p/q\"")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<JsonRational, E> {
                rational::parse(s).map(JsonRational).map_err(E::custom)
            }
        }
        d.deserialize_str(V)
    }
}

enum RawMatrix {
    Dense(Vec<Vec<JsonRational>>),
    Sparse { rows: usize, cols: usize, entries: Vec<(usize, usize, JsonRational)> },
}

impl<'de> Deserialize<'de> for RawMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = RawMatrix;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a matrix as rows of fractions or a sparse object")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<RawMatrix, A::Error> {
                let mut rows: Vec<Vec<JsonRational>> = Vec::new();
                while let Some(r) = seq.next_element::<Vec<JsonRational>>()? {
                    if let Some(first) = rows.first() {
                        if first.len() != r.len() {
                            return Err(de::Error::custom(format!(
                                "ragged matrix: row {} has {} entries, row 0 has {}",
                                rows.len(),
                                r.len(),
                                first.len()
                            )));
                        }
                    }
                    rows.push(r);
                }
                Ok(RawMatrix::Dense(rows))
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<RawMatrix, A::Error> {
                let (mut rows, mut cols, mut entries) = (None, None, None);
                while let Some(k) = map.next_key::<String>()? {
                    match k.as_str() {
                        "rows" => rows = Some(map.next_value::<usize>()?),
                        "cols" => cols = Some(map.next_value::<usize>()?),
                        "entries" => {
                            entries = Some(map.next_value::<Vec<(usize, usize, JsonRational)>>()?)
                        }
                        other => return Err(de::Error::unknown_field(other, &["rows", "cols", "entries"])),
                    }
                }
                let rows = rows.ok_or_else(|| de::Error::missing_field("rows"))?;
                let cols = cols.ok_or_else(|| de::Error::missing_field("cols"))?;
                let entries = entries.ok_or_else(|| de::Error::missing_field("entries"))?;
                for (i, j, _) in &entries {
                    if *i >= rows || *j >= cols {
                        return Err(de::Error::custom(format!("entry ({i}, {j}) outside {rows}x{cols}")));
                    }
                }
                Ok(RawMatrix::Sparse { rows, cols, entries })
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLayer {
    #[serde(rename = "A")]
    a: RawMatrix,
    b: Vec<JsonRational>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    input_dim: usize,
    layers: Vec<RawLayer>,
}

/// Byte offset of a 1-based (line, column) position.
fn byte_offset(bytes: &[u8], line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut start = 0;
    for _ in 1..line {
        match bytes[start..].iter().position(|&c| c == b'\n') {
            Some(p) => start += p + 1,
            None => break,
        }
    }
    (start + column.saturating_sub(1)).min(bytes.len())
}

/// Parses any JSON document, mapping errors to byte offsets.
pub fn parse_json<T: DeserializeOwned>(bytes: &[u8]) -> Result<T, ParseError> {
    serde_json::from_slice(bytes).map_err(|e| ParseError::Syntax {
        offset: byte_offset(bytes, e.line(), e.column()),
        message: e.to_string(),
    })
}

/// Parses and validates a network document. No partial result is returned on error.
pub fn config_from_json(bytes: &[u8]) -> Result<NetworkConfig, ParseError> {
    let doc: RawDoc = parse_json(bytes)?;
    let mut prev = doc.input_dim;
    let mut layers = Vec::with_capacity(doc.layers.len());
    for l in doc.layers {
        let a = match l.a {
            RawMatrix::Dense(rows) => {
                let cols = rows.first().map_or(prev, Vec::len);
                Matrix::from_dense(rows.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect(), cols)
            }
            RawMatrix::Sparse { rows, cols, entries } => {
                let mut m = Matrix::zeros(rows, cols);
                for (i, j, v) in entries {
                    m.set(i, j, v.0);
                }
                m
            }
        };
        prev = a.rows();
        layers.push(Layer::new(a, l.b.into_iter().map(|x| x.0).collect()));
    }
    let config = NetworkConfig::new_unchecked(doc.input_dim, layers);
    config.validate().map_err(ParseError::Invalid)?;
    Ok(config)
}

fn write_vec(out: &mut String, v: &[Rational]) {
    out.push('[');
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "\"{}\"", rational::fmt(x));
    }
    out.push(']');
}

/// Serializes deterministically; one layer per line.
pub fn config_to_json(config: &NetworkConfig) -> String {
    let mut out = String::new();
    let _ = write!(out, "{{\"input_dim\":{},\"layers\":[", config.input_dim());
    for (k, l) in config.layers().iter().enumerate() {
        out.push_str(if k == 0 { "\n" } else { ",\n" });
        out.push_str("{\"A\":");
        if l.a.rows() * l.a.cols() > DENSE_CELL_LIMIT {
            let _ = write!(out, "{{\"rows\":{},\"cols\":{},\"entries\":[", l.a.rows(), l.a.cols());
            for (n, (i, j, v)) in l.a.entries().enumerate() {
                if n > 0 {
                    out.push(',');
                }
                let _ = write!(out, "[{i},{j},\"{}\"]", rational::fmt(v));
            }
            out.push_str("]}");
        } else {
            out.push('[');
            for (i, row) in l.a.to_dense().iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_vec(&mut out, row);
            }
            out.push(']');
        }
        out.push_str(",\"b\":");
        write_vec(&mut out, &l.b);
        out.push('}');
    }
    out.push_str("\n]}\n");
    out
}
