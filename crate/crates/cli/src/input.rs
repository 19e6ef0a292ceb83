//! Input files: measures, matrix-product ensembles and generator sets.

use std::path::Path;

use serde_json::Value;
use spectra_core::exact::AlgebraicScalar;
use spectra_core::linalg::Matrix;
use spectra_core::proxdecay::{Hyperplane, LocalField, ProductEnsemble};
use spectra_core::walkdio::{parse_entry, parse_measure_json, MeasureSpec, WalkError};
use spectra_core::{Diagnostic, Rational};

use crate::CliError;

fn read_json(path: &Path) -> Result<Value, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read file: {e}"))?;
    serde_json::from_str(&text).map_err(|e| format!("line {} column {}: {e}", e.line(), e.column()))
}

/// Reads a measure file. Rationals and quadratic entries are parsed
/// exactly; symmetry is checked when declared.
pub fn load_measure(path: &Path) -> Result<MeasureSpec, CliError> {
    let invalid = |detail: String, code| CliError::InvalidMeasureFile { path: path.to_path_buf(), detail, source_code: code };
    let v = read_json(path).map_err(|d| invalid(d, None))?;
    parse_measure_json(&v).map_err(|e: WalkError| invalid(e.to_string(), Some((e.module(), e.code()))))
}

fn invalid_input(path: &Path, detail: impl Into<String>) -> CliError {
    CliError::InvalidInput { path: path.to_path_buf(), detail: detail.into() }
}

fn entry(path: &Path, v: &Value, ptr: &str) -> Result<AlgebraicScalar, CliError> {
    parse_entry(v, ptr).map_err(|e| invalid_input(path, e.to_string()))
}

fn rational(path: &Path, v: &Value, ptr: &str) -> Result<Rational, CliError> {
    let x = entry(path, v, ptr)?;
    if !x.is_rational() {
        return Err(invalid_input(path, format!("{ptr}: expected a rational entry")));
    }
    Ok(x.rational_part().clone())
}

fn array<'a>(path: &Path, v: Option<&'a Value>, ptr: &str) -> Result<&'a Vec<Value>, CliError> {
    v.and_then(Value::as_array).ok_or_else(|| invalid_input(path, format!("{ptr}: expected an array")))
}

fn vector(path: &Path, v: Option<&Value>, ptr: &str) -> Result<Vec<AlgebraicScalar>, CliError> {
    array(path, v, ptr)?.iter().enumerate().map(|(i, x)| entry(path, x, &format!("{ptr}/{i}"))).collect()
}

fn matrix(path: &Path, v: &Value, ptr: &str) -> Result<Matrix<AlgebraicScalar>, CliError> {
    let rows: Vec<Vec<AlgebraicScalar>> = array(path, Some(v), ptr)?
        .iter()
        .enumerate()
        .map(|(i, r)| vector(path, Some(r), &format!("{ptr}/{i}")))
        .collect::<Result<_, _>>()?;
    let n = rows.first().map_or(0, Vec::len);
    if n == 0 || rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(invalid_input(path, format!("{ptr}: expected a non-empty square matrix")));
    }
    Ok(Matrix::from_rows(rows))
}

fn to_rational_matrix(path: &Path, m: &Matrix<AlgebraicScalar>, ptr: &str) -> Result<Matrix<Rational>, CliError> {
    if m.entries().iter().any(|x| !x.is_rational()) {
        return Err(invalid_input(path, format!("{ptr}: expected rational entries")));
    }
    Ok(m.map(|x| x.rational_part().clone()))
}

/// An ensemble with the vector `v` and hyperplane `W` to test against.
#[derive(Debug, Clone)]
pub struct EnsembleSpec {
    pub ensemble: ProductEnsemble,
    pub v: Vec<Rational>,
    pub hyperplane: Hyperplane,
}

/// `{field: "real" | "padic", prime?, matrices, weights? | symmetric?,
/// vector, hyperplane: [spanning vectors]}`; rational entries only.
pub fn load_ensemble(path: &Path) -> Result<EnsembleSpec, CliError> {
    let v = read_json(path).map_err(|d| invalid_input(path, d))?;
    let field = match v.get("field").and_then(Value::as_str) {
        Some("real") | None => LocalField::Real,
        Some("padic") => {
            let p = v.get("prime").and_then(Value::as_u64).ok_or_else(|| invalid_input(path, "/prime: expected a prime"))?;
            LocalField::PAdic(p)
        }
        Some(other) => return Err(invalid_input(path, format!("/field: unknown field {other:?}"))),
    };
    let mats: Vec<Matrix<Rational>> = array(path, v.get("matrices"), "/matrices")?
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let ptr = format!("/matrices/{i}");
            to_rational_matrix(path, &matrix(path, m, &ptr)?, &ptr)
        })
        .collect::<Result<_, _>>()?;
    let symmetric = v.get("symmetric").and_then(Value::as_bool).unwrap_or(false);
    let ensemble = match v.get("weights") {
        Some(w) if !symmetric => {
            let weights = array(path, Some(w), "/weights")?
                .iter()
                .enumerate()
                .map(|(i, x)| rational(path, x, &format!("/weights/{i}")))
                .collect::<Result<_, _>>()?;
            ProductEnsemble::rational(field, mats, weights)?
        }
        Some(_) => return Err(invalid_input(path, "/weights: not allowed with \"symmetric\": true")),
        None if symmetric => ProductEnsemble::symmetric_rational(field, &mats)?,
        None => {
            let n = mats.len() as i64;
            ProductEnsemble::rational(field, mats, vec![Rational::new(1.into(), n.into()); n as usize])?
        }
    };
    let d = ensemble.dim();
    let vec_r = |x: Vec<AlgebraicScalar>, ptr: &str| -> Result<Vec<Rational>, CliError> {
        if x.len() != d || x.iter().any(|e| !e.is_rational()) {
            return Err(invalid_input(path, format!("{ptr}: expected {d} rational entries")));
        }
        Ok(x.iter().map(|e| e.rational_part().clone()).collect())
    };
    let start = vec_r(vector(path, v.get("vector"), "/vector")?, "/vector")?;
    let basis: Vec<Vec<Rational>> = array(path, v.get("hyperplane"), "/hyperplane")?
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let ptr = format!("/hyperplane/{i}");
            vec_r(vector(path, Some(b), &ptr)?, &ptr)
        })
        .collect::<Result<_, _>>()?;
    let hyperplane = Hyperplane::from_basis(&basis, d)?;
    Ok(EnsembleSpec { ensemble, v: start, hyperplane })
}

#[derive(Debug, Clone)]
pub struct GeneratorSpec {
    pub generators: Vec<Matrix<AlgebraicScalar>>,
    /// Spanning vectors of `L₀`.
    pub subspace: Vec<Vec<AlgebraicScalar>>,
}

/// `{generators: [matrix], symmetrize?: bool, subspace: [vectors]}`.
/// With `symmetrize` the inverses are appended.
pub fn load_generators(path: &Path) -> Result<GeneratorSpec, CliError> {
    let v = read_json(path).map_err(|d| invalid_input(path, d))?;
    let mut generators: Vec<Matrix<AlgebraicScalar>> = array(path, v.get("generators"), "/generators")?
        .iter()
        .enumerate()
        .map(|(i, m)| matrix(path, m, &format!("/generators/{i}")))
        .collect::<Result<_, _>>()?;
    if generators.is_empty() {
        return Err(invalid_input(path, "/generators: expected at least one matrix"));
    }
    let d = generators[0].rows();
    if generators.iter().any(|g| g.rows() != d) {
        return Err(invalid_input(path, "/generators: matrices differ in size"));
    }
    if v.get("symmetrize").and_then(Value::as_bool).unwrap_or(false) {
        let inverses = generators
            .iter()
            .enumerate()
            .map(|(i, g)| g.inverse().ok_or_else(|| invalid_input(path, format!("/generators/{i}: not invertible"))))
            .collect::<Result<Vec<_>, _>>()?;
        generators.extend(inverses);
    }
    let subspace: Vec<Vec<AlgebraicScalar>> = array(path, v.get("subspace"), "/subspace")?
        .iter()
        .enumerate()
        .map(|(i, b)| vector(path, Some(b), &format!("/subspace/{i}")))
        .collect::<Result<_, _>>()?;
    if subspace.is_empty() || subspace.iter().any(|b| b.len() != d) {
        return Err(invalid_input(path, format!("/subspace: expected vectors of length {d}")));
    }
    Ok(GeneratorSpec { generators, subspace })
}
