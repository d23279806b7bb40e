//! Plain-text checkpoint format.
//!
//! ```text
//! texreg-kg v1 d=<dim> |E|=<entities> |R|=<relations>
//! e <index> <d floats>
//! r <index> <d floats>
//! b <index> <float>
//! ```
//!
//! Floats are written in Rust's shortest round-trip form, so reading a
//! checkpoint back reproduces every value bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::embed::EmbeddingTable;
use crate::error::{Error, Result};

const MAGIC: &str = "texreg-kg v1";

fn push_row(out: &mut String, tag: char, index: usize, values: &[f64]) {
    write!(out, "{tag} {index}").expect("write to String");
    for v in values {
        write!(out, " {v:?}").expect("write to String");
    }
    out.push('\n');
}

pub fn to_string(emb: &EmbeddingTable) -> String {
    let mut out = format!(
        "{MAGIC} d={} |E|={} |R|={}\n",
        emb.dim(),
        emb.num_entities(),
        emb.num_relations()
    );
    for i in 0..emb.num_entities() {
        push_row(&mut out, 'e', i, emb.entity(i));
    }
    for i in 0..emb.num_relations() {
        push_row(&mut out, 'r', i, emb.relation(i));
    }
    for i in 0..emb.num_entities() {
        push_row(&mut out, 'b', i, &[emb.bias(i)]);
    }
    out
}

pub fn write(emb: &EmbeddingTable, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_string(emb)).map_err(|e| Error::io(path, e))
}

fn header_field(field: Option<&str>, key: &str, path: &Path) -> Result<usize> {
    field
        .and_then(|f| f.strip_prefix(key))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::parse(path, 1, format!("malformed header field {key}")))
}

pub fn parse(text: &str, path: &Path) -> Result<EmbeddingTable> {
    let mut lines = text.lines().enumerate();
    let header = lines.next().map(|(_, l)| l).unwrap_or("");
    let rest = header
        .strip_prefix(MAGIC)
        .ok_or_else(|| Error::parse(path, 1, format!("expected '{MAGIC}' header")))?;
    let mut fields = rest.split_whitespace();
    let dim = header_field(fields.next(), "d=", path)?;
    let num_entities = header_field(fields.next(), "|E|=", path)?;
    let num_relations = header_field(fields.next(), "|R|=", path)?;

    let mut emb = EmbeddingTable::zeros(num_entities, num_relations, dim);
    let mut seen = [
        vec![false; num_entities],
        vec![false; num_relations],
        vec![false; num_entities],
    ];
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let err = |m: String| Error::parse(path, lineno + 1, m);
        let mut parts = line.split(' ');
        let tag = parts.next().unwrap_or("");
        let index: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| err("missing row index".into()))?;
        let values = parts
            .map(str::parse::<f64>)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| err(e.to_string()))?;
        let (slot, expected, size) = match tag {
            "e" => (0, dim, num_entities),
            "r" => (1, dim, num_relations),
            "b" => (2, 1, num_entities),
            other => return Err(err(format!("unknown row kind '{other}'"))),
        };
        if index >= size {
            return Err(err(format!("row index {index} out of range {size}")));
        }
        if values.len() != expected {
            return Err(err(format!(
                "expected {expected} values, found {}",
                values.len()
            )));
        }
        if std::mem::replace(&mut seen[slot][index], true) {
            return Err(err(format!("duplicate {tag} row {index}")));
        }
        match slot {
            0 => emb.entity_mut(index).copy_from_slice(&values),
            1 => emb.relation_mut(index).copy_from_slice(&values),
            _ => *emb.bias_mut(index) = values[0],
        }
    }
    if seen.iter().any(|s| s.iter().any(|&x| !x)) {
        return Err(Error::parse(path, 1, "checkpoint is missing rows"));
    }
    Ok(emb)
}

pub fn read(path: impl AsRef<Path>) -> Result<EmbeddingTable> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse(&text, path)
}
