//! Finitely supported measures on SU(2) / SO(3) with exact entries.

use std::collections::HashMap;

use num::traits::{One, ToPrimitive, Zero};
use serde_json::Value;

use super::WalkError;
use crate::exact::{parse_rational, rational_to_f64, AlgebraicScalar, Rational};
use crate::linalg::Matrix;
use crate::su2harm::{FloatMeasure, GroupKind, UnitQuaternion};

/// An exact group element: a unit quaternion `(a, b, c, d)` or a rotation
/// matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExactElement {
    SU2([AlgebraicScalar; 4]),
    SO3(Matrix<AlgebraicScalar>),
}

fn alg_bits(x: &AlgebraicScalar) -> u64 {
    crate::exact::rational_bits(x.rational_part()).max(crate::exact::rational_bits(x.irrational_part()))
}

impl ExactElement {
    pub fn identity(kind: GroupKind) -> Self {
        match kind {
            GroupKind::SU2 => ExactElement::SU2([
                AlgebraicScalar::one(),
                AlgebraicScalar::zero(),
                AlgebraicScalar::zero(),
                AlgebraicScalar::zero(),
            ]),
            GroupKind::SO3 => ExactElement::SO3(Matrix::identity(3)),
        }
    }

    pub fn kind(&self) -> GroupKind {
        match self {
            ExactElement::SU2(_) => GroupKind::SU2,
            ExactElement::SO3(_) => GroupKind::SO3,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (ExactElement::SU2(p), ExactElement::SU2(q)) => {
                let [a1, b1, c1, d1] = p.clone();
                let [a2, b2, c2, d2] = q.clone();
                ExactElement::SU2([
                    a1.clone() * a2.clone() - b1.clone() * b2.clone() - c1.clone() * c2.clone() - d1.clone() * d2.clone(),
                    a1.clone() * b2.clone() + b1.clone() * a2.clone() + c1.clone() * d2.clone() - d1.clone() * c2.clone(),
                    a1.clone() * c2.clone() - b1.clone() * d2.clone() + c1.clone() * a2.clone() + d1.clone() * b2.clone(),
                    a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
                ])
            }
            (ExactElement::SO3(x), ExactElement::SO3(y)) => ExactElement::SO3(x * y),
            _ => panic!("product of elements of different groups"),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            ExactElement::SU2([a, b, c, d]) => ExactElement::SU2([a.clone(), -b.clone(), -c.clone(), -d.clone()]),
            ExactElement::SO3(m) => ExactElement::SO3(m.transpose()),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            ExactElement::SU2([a, b, c, d]) => a.is_one() && b.is_zero() && c.is_zero() && d.is_zero(),
            ExactElement::SO3(m) => m.is_identity(),
        }
    }

    /// Largest bit size over all rational components of all entries.
    pub fn height_bits(&self) -> u64 {
        match self {
            ExactElement::SU2(q) => q.iter().map(alg_bits).max().unwrap_or(0),
            ExactElement::SO3(m) => m.entries().iter().map(alg_bits).max().unwrap_or(0),
        }
    }

    /// Exact group membership check (unit norm / orthogonal with det 1).
    pub fn is_valid(&self) -> bool {
        match self {
            ExactElement::SU2(q) => {
                q.iter().fold(AlgebraicScalar::zero(), |acc, x| acc + x.clone() * x.clone()).is_one()
            }
            ExactElement::SO3(m) => {
                m.rows() == 3 && m.cols() == 3 && (&m.transpose() * m).is_identity() && m.determinant().is_one()
            }
        }
    }

    pub fn to_quaternion(&self) -> UnitQuaternion {
        match self {
            ExactElement::SU2(q) => UnitQuaternion::new(q[0].to_f64(), q[1].to_f64(), q[2].to_f64(), q[3].to_f64()),
            ExactElement::SO3(m) => {
                let mut r = [[0.0; 3]; 3];
                for (i, row) in r.iter_mut().enumerate() {
                    for (j, x) in row.iter_mut().enumerate() {
                        *x = m[(i, j)].to_f64();
                    }
                }
                UnitQuaternion::from_rotation(&r)
            }
        }
    }

    /// Exact rotation axis (unnormalised), `None` for the identity
    /// (and for `−1` in SU(2)).
    pub fn axis(&self) -> Option<[AlgebraicScalar; 3]> {
        match self {
            ExactElement::SU2([_, b, c, d]) => {
                if b.is_zero() && c.is_zero() && d.is_zero() {
                    None
                } else {
                    Some([b.clone(), c.clone(), d.clone()])
                }
            }
            ExactElement::SO3(m) => {
                if m.is_identity() {
                    return None;
                }
                let k = m.sub(&Matrix::identity(3)).nullspace();
                let v = k.first()?;
                Some([v[0].clone(), v[1].clone(), v[2].clone()])
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub element: ExactElement,
    pub weight: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureSpec {
    pub group: GroupKind,
    pub atoms: Vec<Atom>,
    pub symmetric: bool,
}

impl MeasureSpec {
    /// Validates weights, group membership, a common quadratic field and,
    /// when declared, symmetry.
    pub fn new(group: GroupKind, atoms: Vec<Atom>, symmetric: bool) -> Result<Self, WalkError> {
        if atoms.is_empty() {
            return Err(WalkError::EmptyMeasure);
        }
        if let Some(i) = atoms.iter().position(|a| a.weight <= Rational::zero()) {
            return Err(WalkError::NotProbability(format!("weight of atom {i} is not positive")));
        }
        let sum = atoms.iter().fold(Rational::zero(), |acc, a| acc + &a.weight);
        if !sum.is_one() {
            return Err(WalkError::NotProbability(format!("weights sum to {sum}")));
        }
        let mut field: Option<i64> = None;
        for (i, a) in atoms.iter().enumerate() {
            if a.element.kind() != group {
                return Err(WalkError::NotInGroup { atom: i });
            }
            let entries: Vec<&AlgebraicScalar> = match &a.element {
                ExactElement::SU2(q) => q.iter().collect(),
                ExactElement::SO3(m) => m.entries().iter().collect(),
            };
            for e in entries {
                if let Some(d) = e.radicand() {
                    if d < 0 {
                        return Err(WalkError::NonReal { atom: i });
                    }
                    match field {
                        Some(f) if f != d => return Err(WalkError::MixedFields),
                        _ => field = Some(d),
                    }
                }
            }
            if !a.element.is_valid() {
                return Err(WalkError::NotInGroup { atom: i });
            }
        }
        let m = MeasureSpec { group, atoms, symmetric };
        if symmetric {
            m.check_symmetric()?;
        }
        Ok(m)
    }

    fn check_symmetric(&self) -> Result<(), WalkError> {
        let mut mass: HashMap<&ExactElement, Rational> = HashMap::new();
        for a in &self.atoms {
            *mass.entry(&a.element).or_insert_with(Rational::zero) += &a.weight;
        }
        for (i, a) in self.atoms.iter().enumerate() {
            let inv = a.element.inverse();
            if mass.get(&inv) != mass.get(&a.element) {
                return Err(WalkError::NotSymmetric { atom: i });
            }
        }
        Ok(())
    }

    /// Uniform measure on the generators and their inverses.
    pub fn symmetric_uniform(gens: &[ExactElement]) -> Result<Self, WalkError> {
        let group = gens.first().ok_or(WalkError::EmptyMeasure)?.kind();
        let w = Rational::new(1.into(), (2 * gens.len()).into());
        let atoms = gens
            .iter()
            .flat_map(|g| [Atom { element: g.clone(), weight: w.clone() }, Atom { element: g.inverse(), weight: w.clone() }])
            .collect();
        MeasureSpec::new(group, atoms, true)
    }

    pub fn dirac(group: GroupKind) -> Self {
        MeasureSpec { group, atoms: vec![Atom { element: ExactElement::identity(group), weight: Rational::one() }], symmetric: true }
    }

    pub fn to_float(&self) -> FloatMeasure {
        FloatMeasure {
            group: self.group,
            atoms: self.atoms.iter().map(|a| (a.element.to_quaternion(), rational_to_f64(&a.weight))).collect(),
        }
    }

    /// Cumulative weights for sampling.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut acc = Rational::zero();
        self.atoms
            .iter()
            .map(|a| {
                acc += &a.weight;
                rational_to_f64(&acc)
            })
            .collect()
    }
}

fn perr(pointer: String, message: impl Into<String>) -> WalkError {
    WalkError::ParseError { pointer, message: message.into() }
}

fn parse_rat_value(v: &Value, ptr: &str) -> Result<Rational, WalkError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|m| perr(ptr.to_string(), m)),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap().into())),
        Value::Array(pq) if pq.len() == 2 => {
            let p = pq[0].as_i64().ok_or_else(|| perr(format!("{ptr}/0"), "expected integer"))?;
            let q = pq[1].as_i64().ok_or_else(|| perr(format!("{ptr}/1"), "expected integer"))?;
            if q == 0 {
                return Err(perr(format!("{ptr}/1"), "zero denominator"));
            }
            Ok(Rational::new(p.into(), q.into()))
        }
        _ => Err(perr(ptr.to_string(), "expected \"p/q\", an integer or [p, q]")),
    }
}

/// Entry: `"p/q"`, or `{"rat": [p, q], "quad": {"d": d, "p2": p2, "q2": q2}}`
/// meaning `p/q + (p2/q2)·sqrt(d)`.
pub fn parse_entry(v: &Value, ptr: &str) -> Result<AlgebraicScalar, WalkError> {
    match v {
        Value::Object(o) => {
            let a = match o.get("rat") {
                Some(r) => parse_rat_value(r, &format!("{ptr}/rat"))?,
                None => Rational::zero(),
            };
            let Some(q) = o.get("quad") else {
                return Ok(AlgebraicScalar::rational(a));
            };
            let qp = format!("{ptr}/quad");
            let d = q.get("d").and_then(Value::as_i64).ok_or_else(|| perr(format!("{qp}/d"), "expected integer"))?;
            let p2 = q.get("p2").and_then(Value::as_i64).ok_or_else(|| perr(format!("{qp}/p2"), "expected integer"))?;
            let q2 = q.get("q2").and_then(Value::as_i64).unwrap_or(1);
            if q2 == 0 {
                return Err(perr(format!("{qp}/q2"), "zero denominator"));
            }
            AlgebraicScalar::quadratic(a, Rational::new(p2.into(), q2.into()), d)
                .ok_or_else(|| perr(format!("{qp}/d"), format!("{d} is not squarefree")))
        }
        other => parse_rat_value(other, ptr).map(AlgebraicScalar::rational),
    }
}

/// Parses the measure schema
/// `{group, atoms: [{matrix | quaternion, weight}], symmetric}`.
pub fn parse_measure_json(v: &Value) -> Result<MeasureSpec, WalkError> {
    let group = match v.get("group").and_then(Value::as_str) {
        Some("SO3") => GroupKind::SO3,
        Some("SU2") => GroupKind::SU2,
        _ => return Err(perr("/group".into(), "expected \"SO3\" or \"SU2\"")),
    };
    let symmetric = match v.get("symmetric") {
        None => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => return Err(perr("/symmetric".into(), "expected boolean")),
    };
    let atoms_v = v.get("atoms").and_then(Value::as_array).ok_or_else(|| perr("/atoms".into(), "expected array"))?;
    let mut atoms = Vec::new();
    for (i, a) in atoms_v.iter().enumerate() {
        let base = format!("/atoms/{i}");
        let weight = parse_rat_value(a.get("weight").unwrap_or(&Value::Null), &format!("{base}/weight"))?;
        let element = if let Some(m) = a.get("matrix") {
            let rows = m.as_array().filter(|r| r.len() == 3).ok_or_else(|| perr(format!("{base}/matrix"), "expected 3 rows"))?;
            let mut out = Vec::new();
            for (r, row) in rows.iter().enumerate() {
                let row = row
                    .as_array()
                    .filter(|x| x.len() == 3)
                    .ok_or_else(|| perr(format!("{base}/matrix/{r}"), "expected 3 entries"))?;
                out.push(
                    row.iter()
                        .enumerate()
                        .map(|(c, e)| parse_entry(e, &format!("{base}/matrix/{r}/{c}")))
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
            if group != GroupKind::SO3 {
                return Err(perr(format!("{base}/matrix"), "matrix atoms require group SO3"));
            }
            ExactElement::SO3(Matrix::from_rows(out))
        } else if let Some(q) = a.get("quaternion") {
            let q = q.as_array().filter(|x| x.len() == 4).ok_or_else(|| perr(format!("{base}/quaternion"), "expected 4 entries"))?;
            let e: Vec<AlgebraicScalar> =
                q.iter().enumerate().map(|(c, e)| parse_entry(e, &format!("{base}/quaternion/{c}"))).collect::<Result<_, _>>()?;
            let element = ExactElement::SU2([e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone()]);
            match group {
                GroupKind::SU2 => element,
                // A quaternion atom on SO(3) denotes its rotation.
                GroupKind::SO3 => ExactElement::SO3(quaternion_to_rotation(&e)),
            }
        } else {
            return Err(perr(base, "atom needs \"matrix\" or \"quaternion\""));
        };
        atoms.push(Atom { element, weight });
    }
    MeasureSpec::new(group, atoms, symmetric)
}

/// Exact rotation matrix of a unit quaternion.
pub fn quaternion_to_rotation(q: &[AlgebraicScalar]) -> Matrix<AlgebraicScalar> {
    let (a, b, c, d) = (q[0].clone(), q[1].clone(), q[2].clone(), q[3].clone());
    let two = AlgebraicScalar::from_int(2);
    let sq = |x: &AlgebraicScalar| x.clone() * x.clone();
    let m = |x: AlgebraicScalar, y: AlgebraicScalar| x * y;
    Matrix::from_rows(vec![
        vec![
            sq(&a) + sq(&b) - sq(&c) - sq(&d),
            two.clone() * (m(b.clone(), c.clone()) - m(a.clone(), d.clone())),
            two.clone() * (m(b.clone(), d.clone()) + m(a.clone(), c.clone())),
        ],
        vec![
            two.clone() * (m(b.clone(), c.clone()) + m(a.clone(), d.clone())),
            sq(&a) - sq(&b) + sq(&c) - sq(&d),
            two.clone() * (m(c.clone(), d.clone()) - m(a.clone(), b.clone())),
        ],
        vec![
            two.clone() * (m(b.clone(), d.clone()) - m(a.clone(), c.clone())),
            two.clone() * (m(c.clone(), d.clone()) + m(a.clone(), b.clone())),
            sq(&a) - sq(&b) - sq(&c) + sq(&d),
        ],
    ])
}

/// Serialises an element back into the schema's entry format.
pub fn entry_to_json(x: &AlgebraicScalar) -> Value {
    match x.radicand() {
        None => Value::String(x.rational_part().to_string()),
        Some(d) => {
            let b = x.irrational_part();
            serde_json::json!({
                "rat": x.rational_part().to_string(),
                "quad": {"d": d, "p2": b.numer().to_i64(), "q2": b.denom().to_i64()}
            })
        }
    }
}

/// Rational rotation about a coordinate axis with `cos = p/r`, `sin = q/r`
/// for a Pythagorean triple.
pub fn pythagorean_rotation(axis: usize, p: i64, q: i64, r: i64) -> ExactElement {
    let z = AlgebraicScalar::zero;
    let c = AlgebraicScalar::rational(Rational::new(p.into(), r.into()));
    let s = AlgebraicScalar::rational(Rational::new(q.into(), r.into()));
    let one = AlgebraicScalar::one();
    let rows = match axis {
        0 => vec![vec![one, z(), z()], vec![z(), c.clone(), -s.clone()], vec![z(), s, c]],
        1 => vec![vec![c.clone(), z(), s.clone()], vec![z(), one, z()], vec![-s, z(), c]],
        _ => vec![vec![c.clone(), -s.clone(), z()], vec![s, c, z()], vec![z(), z(), one]],
    };
    ExactElement::SO3(Matrix::from_rows(rows))
}
