//! Tabular output for characters and cohomology tables, module dumps, and
//! parsing of λ values.

use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::cohomology::CohomologyTable;
use crate::error::{Error, Result};
use crate::lie::GradedLieAlgebra;
use crate::linalg::Q;
use crate::modules::{Character, Lambda, WeightModule};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            other => Err(Error::Input(format!("unknown format `{other}` (expected csv or jsonl)"))),
        }
    }
}

/// One output line: a weight offset, a degree and a dimension.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Row {
    pub weight: Vec<i64>,
    pub degree: i64,
    pub dimension: u64,
}

/// Character rows, with the degree column holding `ℓ(weight)`.
pub fn character_rows(alg: &GradedLieAlgebra, ch: &Character) -> Vec<Row> {
    let mut rows: Vec<Row> = ch
        .coefficients
        .iter()
        .filter(|(_, c)| **c > 0)
        .map(|(w, c)| Row { weight: w.coords().to_vec(), degree: alg.degree_of(w), dimension: *c })
        .collect();
    rows.sort();
    rows
}

/// Every computed (weight, degree) cell, zeros included.
pub fn table_rows(t: &CohomologyTable) -> Vec<Row> {
    let mut rows: Vec<Row> = t
        .complex
        .keys()
        .chain(t.rows.keys())
        .map(|(w, i)| Row { weight: w.coords().to_vec(), degree: *i, dimension: t.get(w, *i) as u64 })
        .collect();
    rows.sort();
    rows.dedup();
    rows
}

pub fn write_rows(rows: &[Row], rank: usize, format: Format, out: impl Write) -> Result<()> {
    let fail = |e: &dyn std::fmt::Display| Error::Input(format!("writing output: {e}"));
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let mut header: Vec<String> = (1..=rank).map(|i| format!("w{i}")).collect();
            header.extend(["degree".into(), "dimension".into()]);
            w.write_record(&header).map_err(|e| fail(&e))?;
            for r in rows {
                let mut rec: Vec<String> = r.weight.iter().map(i64::to_string).collect();
                rec.push(r.degree.to_string());
                rec.push(r.dimension.to_string());
                w.write_record(&rec).map_err(|e| fail(&e))?;
            }
            w.flush().map_err(|e| fail(&e))
        }
        Format::Jsonl => {
            let mut out = out;
            for r in rows {
                serde_json::to_writer(&mut out, r).map_err(|e| fail(&e))?;
                writeln!(out).map_err(|e| fail(&e))?;
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ActionDump {
    generator: String,
    entries: Vec<(usize, usize, String)>,
}

#[derive(Serialize)]
struct SpaceDump<'a> {
    weight: &'a [i64],
    dim: usize,
    labels: &'a [String],
    actions: Vec<ActionDump>,
}

/// One JSON object per weight space: basis labels and the nonzero action
/// matrices leaving it.
pub fn dump_module(m: &WeightModule, out: impl Write) -> Result<()> {
    let fail = |e: &dyn std::fmt::Display| Error::Input(format!("writing module dump: {e}"));
    let alg = m.algebra();
    let gens = m.active_gens();
    let mut out = out;
    for (w, space) in m.spaces() {
        let mut actions = Vec::new();
        for &x in &gens {
            let a = match m.action(x, w) {
                Ok(a) => a,
                Err(Error::DepthExceeded { .. }) => continue,
                Err(e) => return Err(e),
            };
            if a.is_zero() {
                continue;
            }
            let mut entries = Vec::new();
            for (i, row) in a.rows().iter().enumerate() {
                for (j, v) in row {
                    entries.push((i, *j, v.to_string()));
                }
            }
            actions.push(ActionDump { generator: alg.label(x).into(), entries });
        }
        let dump = SpaceDump { weight: w.coords(), dim: space.dim(), labels: &space.labels, actions };
        serde_json::to_writer(&mut out, &dump).map_err(|e| fail(&e))?;
        writeln!(out).map_err(|e| fail(&e))?;
    }
    Ok(())
}

pub fn parse_rational(text: &str) -> Result<Q> {
    Q::from_str(text.trim()).map_err(|_| Error::Input(format!("`{text}` is not a rational number")))
}

/// Parses `label=value,...`, e.g. `h=0,K=1,d=-1/2`. A bare `x` stands for
/// `1⊗x` when the algebra has no element labelled `x`.
pub fn parse_lambda(alg: &GradedLieAlgebra, text: &str) -> Result<Lambda> {
    let mut values = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (label, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("malformed λ entry `{part}` (expected label=value)")))?;
        let label = label.trim();
        let g = alg
            .by_label(label)
            .or_else(|_| alg.by_label(&format!("1⊗{label}")))
            .map_err(|_| Error::Input(format!("λ names `{label}`, which is not a basis element of {}", alg.name())))?;
        values.push((g, parse_rational(value)?));
    }
    Lambda::from_values(alg, values)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::lie::affine_sl2;
    use crate::linalg::{q, qr};
    use crate::modules::{product_formula_character, trivial, verma};

    #[test]
    fn lambda_parsing() {
        let g = affine_sl2(4);
        let l = parse_lambda(&g, "h=1/3, K=-2,d=0").unwrap();
        assert_eq!(l, Lambda::affine(&g, qr(1, 3), q(-2), q(0)).unwrap());
        assert!(parse_lambda(&g, "h=1,K").is_err());
        assert!(parse_lambda(&g, "h=x").is_err());
        assert!(parse_lambda(&g, "e=1").is_err());
    }

    #[test]
    fn character_csv() {
        let g = affine_sl2(6);
        let mut buf = Vec::new();
        write_rows(&character_rows(&g, &product_formula_character(&g, 1)), 2, Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "w1,w2,degree,dimension\n-1,0,-1,1\n0,0,0,1\n1,-1,-1,1\n");
    }

    #[test]
    fn jsonl_mirrors_csv() {
        let g = affine_sl2(6);
        let mut buf = Vec::new();
        write_rows(&character_rows(&g, &product_formula_character(&g, 1)), 2, Format::Jsonl, &mut buf).unwrap();
        let first = String::from_utf8(buf).unwrap().lines().next().unwrap().to_string();
        assert_eq!(first, r#"{"weight":[-1,0],"degree":-1,"dimension":1}"#);
    }

    #[test]
    fn dump_has_one_line_per_weight() {
        let g = Arc::new(affine_sl2(6));
        let v = verma(&g, &Lambda::affine(&g, q(0), q(1), q(0)).unwrap(), 2).unwrap();
        let mut buf = Vec::new();
        dump_module(&v, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), v.spaces().len());
        let mut buf = Vec::new();
        dump_module(&trivial(&g), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim(), r#"{"weight":[0,0],"dim":1,"labels":["1"],"actions":[]}"#);
    }
}
