//! JSON input formats for matrices, representations and families, and the
//! number formatting used by reports.
//!
//! Generators are keyed by consecutive lowercase letters starting at `a`;
//! each value is either `{"n": .., "entries": [[..]]}` or a bare array of rows.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::chamber::{chamber_norm, ChamberVector, Coord, Spectrum};
use crate::degeneration::Family;
use crate::error::{Error, Result};
use crate::exact_arith::{format_rational, RatFunc, RatFuncRepr, Rational, ScalarRepr, Valuation};
use crate::groups::{RealRepresentation, Representation, ValuedRepresentation};
use crate::matrix::Matrix;
use crate::nonarch::ValuedMatrix;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile<T> {
    n: usize,
    #[serde(default)]
    valuation: Option<String>,
    entries: Vec<Vec<T>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GeneratorRepr {
    Full { n: Option<usize>, entries: Vec<Vec<RatFuncRepr>> },
    Bare(Vec<Vec<RatFuncRepr>>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RepFile {
    n: usize,
    #[serde(default)]
    scalar: Option<String>,
    #[serde(default)]
    valuation: Option<String>,
    generators: BTreeMap<String, GeneratorRepr>,
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn check_shape<T>(n: usize, rows: &[Vec<T>]) -> Result<()> {
    if n == 0 {
        return Err(Error::Parse("matrix size must be positive".into()));
    }
    if rows.len() != n {
        return Err(Error::Parse(format!("expected {n} rows, found {}", rows.len())));
    }
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::Parse(format!("expected rows of length {n}, found {}", r.len())));
    }
    Ok(())
}

fn ratfunc_matrix(n: usize, rows: &[Vec<RatFuncRepr>]) -> Result<Matrix<RatFunc>> {
    check_shape(n, rows)?;
    let rows = rows
        .iter()
        .map(|r| r.iter().map(RatFuncRepr::to_ratfunc).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

fn constant_matrix(m: &Matrix<RatFunc>) -> Result<Matrix<Rational>> {
    m.try_map(|f| f.as_constant().ok_or_else(|| Error::Parse(format!("entry {f} is not a rational constant"))))
}

/// `{"n", "entries": [[rational strings]]}`, det exactly 1.
pub fn parse_matrix(text: &str) -> Result<Matrix<Rational>> {
    let file: MatrixFile<ScalarRepr> = from_json(text)?;
    if file.valuation.is_some() {
        return Err(Error::Parse("a real matrix file has no valuation".into()));
    }
    check_shape(file.n, &file.entries)?;
    let rows = file
        .entries
        .iter()
        .map(|r| r.iter().map(ScalarRepr::to_rational).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let m = Matrix::from_rows(rows)?;
    crate::arch::check_special(&m)?;
    Ok(m)
}

/// `{"n", "valuation", "entries": [[RatFunc objects]]}`.
pub fn parse_valued_matrix(text: &str) -> Result<ValuedMatrix> {
    let file: MatrixFile<RatFuncRepr> = from_json(text)?;
    let valuation = file.valuation.as_deref().ok_or_else(|| Error::Parse("missing valuation".into()))?;
    ValuedMatrix::new(ratfunc_matrix(file.n, &file.entries)?, Valuation::parse(valuation)?)
}

fn generators(file: &RepFile) -> Result<Vec<Matrix<RatFunc>>> {
    if file.generators.is_empty() {
        return Err(Error::Parse("no generators".into()));
    }
    let mut out = Vec::with_capacity(file.generators.len());
    for (i, (name, g)) in file.generators.iter().enumerate() {
        if i >= 26 || name.as_str() != char::from(b'a' + i as u8).to_string() {
            return Err(Error::Parse(format!("generator names must be a, b, c, ...; found {name:?}")));
        }
        let (n, rows) = match g {
            GeneratorRepr::Full { n, entries } => (n.unwrap_or(file.n), entries),
            GeneratorRepr::Bare(rows) => (file.n, rows),
        };
        if n != file.n {
            return Err(Error::Parse(format!("generator {name} has size {n}, expected {}", file.n)));
        }
        out.push(ratfunc_matrix(n, rows)?);
    }
    Ok(out)
}

/// A representation read from a file, on either scalar domain.
#[derive(Clone, Debug)]
pub enum LoadedRepresentation {
    Real(RealRepresentation),
    Valued(ValuedRepresentation),
}

/// `{"n", "scalar": "rational"|"ratfunc", "valuation"?, "generators": {..}}`.
/// The valuation defaults to `at-infinity` for `ratfunc`.
pub fn parse_representation(text: &str) -> Result<LoadedRepresentation> {
    let file: RepFile = from_json(text)?;
    let gens = generators(&file)?;
    match file.scalar.as_deref().unwrap_or("rational") {
        "rational" => {
            if file.valuation.is_some() {
                return Err(Error::Parse("valuation given for a rational representation".into()));
            }
            let gens = gens.iter().map(constant_matrix).collect::<Result<Vec<_>>>()?;
            Ok(LoadedRepresentation::Real(Representation::new(gens)?))
        }
        "ratfunc" => {
            let valuation = match &file.valuation {
                Some(v) => Valuation::parse(v)?,
                None => Valuation::AtInfinity,
            };
            let rep = Representation::new(gens)?;
            for g in rep.images() {
                ValuedMatrix::new(g.clone(), valuation)?;
            }
            Ok(LoadedRepresentation::Valued(ValuedRepresentation { rep, valuation }))
        }
        other => Err(Error::Parse(format!("unknown scalar domain {other:?}"))),
    }
}

/// `{"n", "generators": {name: matrix of RatFunc}}`.
pub fn parse_family(text: &str) -> Result<Family> {
    let file: RepFile = from_json(text)?;
    if file.scalar.is_some() || file.valuation.is_some() {
        return Err(Error::Parse("a family file has only n and generators".into()));
    }
    Family::new(generators(&file)?)
}

/// Rounds to 15 significant digits.
pub fn sig15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

/// A float vector as a JSON array rounded to 15 significant digits.
pub fn floats_json(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|x| json!(sig15(*x))).collect())
}

/// Chamber vector as JSON: decimals for floats, "p/q" strings for rationals.
pub trait ToJson {
    fn to_json(&self) -> Value;
}

impl ToJson for ChamberVector<f64> {
    fn to_json(&self) -> Value {
        floats_json(self.coords())
    }
}

impl ToJson for ChamberVector<Rational> {
    fn to_json(&self) -> Value {
        Value::Array(self.coords().iter().map(|q| json!(format_rational(q))).collect())
    }
}

/// Records `{word, v, norm}` in word order.
pub fn spectrum_json<T: Coord>(s: &Spectrum<T>) -> Value
where
    ChamberVector<T>: ToJson,
{
    Value::Array(
        s.iter()
            .map(|(w, v)| json!({"word": w.to_string(), "v": v.to_json(), "norm": sig15(chamber_norm(v))}))
            .collect(),
    )
}

pub fn float_matrix_json(m: &DMatrix<f64>) -> Value {
    Value::Array((0..m.nrows()).map(|i| floats_json(&m.row(i).iter().copied().collect::<Vec<_>>())).collect())
}

pub fn rational_matrix_json(m: &Matrix<Rational>) -> Value {
    Value::Array(m.rows().iter().map(|r| Value::Array(r.iter().map(|q| json!(format_rational(q))).collect())).collect())
}
