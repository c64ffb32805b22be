//! Blow-up calculus on iterated blow-ups of the projective plane.
//!
//! Classes live in the lattice spanned by the hyperplane class `H` and the
//! total transforms `e_1, ..., e_N` of the exceptional curves, with
//! `H·H = 1`, `e_i·e_i = -1` and all other pairings zero. Curves are tracked
//! by their proper-transform class together with a node budget: the number
//! of ordinary double points the curve may still be blown up at.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const HYPERPLANE: &str = "H";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("name {0:?} is already in use")]
    DuplicateName(String),
    #[error("unknown curve {0:?}")]
    UnknownCurve(String),
    #[error("unknown basis label {0:?}")]
    UnknownLabel(String),
    #[error("curve {0:?} added by degree after blow-ups; give an explicit class")]
    DegreeAfterBlowup(String),
    #[error("curve {name:?} has degree {degree}, must be at least 1")]
    BadDegree { name: String, degree: i64 },
    #[error("class of {name:?} has {got} coefficients, surface expects {expected}")]
    ClassLength { name: String, expected: usize, got: usize },
    #[error("curve {name:?} has negative arithmetic genus {genus}")]
    NegativeGenus { name: String, genus: i64 },
    #[error("node budget {budget} of {name:?} exceeds its arithmetic genus {genus}")]
    BudgetExceedsGenus { name: String, budget: u32, genus: i64 },
    #[error("center {label:?}: {curve:?} listed both as simple and as node")]
    NodeAlsoSimple { label: String, curve: String },
    #[error("center {label:?}: {curve:?} listed twice")]
    RepeatedCurve { label: String, curve: String },
    #[error("center {label:?}: {a:?} and {b:?} have pairing {pairing}, cannot share a point")]
    NoCommonPoint { label: String, a: String, b: String, pairing: i64 },
    #[error("center {label:?}: {curve:?} has no node left to blow up")]
    NoNodeLeft { label: String, curve: String },
    #[error("center {label:?}: {other:?} meets the node of {node:?} with pairing {pairing} < 2")]
    NodeCrossing { label: String, node: String, other: String, pairing: i64 },
}

/// Integer class `h H + c_1 e_1 + ... + c_N e_N`. Missing trailing
/// coefficients are zero, so a class from an earlier stage pairs correctly
/// with classes of later stages (it is its own total transform).
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass(Vec<i64>);

impl DivisorClass {
    pub fn from_coefficients(coefficients: Vec<i64>) -> Self {
        DivisorClass(coefficients)
    }

    pub fn zero(n_blowups: usize) -> Self {
        DivisorClass(vec![0; n_blowups + 1])
    }

    pub fn hyperplane(n_blowups: usize) -> Self {
        let mut c = Self::zero(n_blowups);
        c.0[0] = 1;
        c
    }

    /// Total transform `e_i` (1-based, as in the basis order).
    pub fn exceptional(n_blowups: usize, i: usize) -> Self {
        let mut c = Self::zero(n_blowups.max(i));
        c.0[i] = 1;
        c
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.0
    }

    pub fn coefficient(&self, i: usize) -> i64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.coefficient(0)
    }

    /// Intersection pairing under `diag(1, -1, ..., -1)`.
    pub fn dot(&self, other: &DivisorClass) -> i64 {
        let n = self.0.len().min(other.0.len());
        let mut s = 0;
        for i in 0..n {
            let t = self.0[i] * other.0[i];
            s += if i == 0 { t } else { -t };
        }
        s
    }

    pub fn square(&self) -> i64 {
        self.dot(self)
    }

    fn padded(&self, len: usize) -> Vec<i64> {
        let mut v = self.0.clone();
        v.resize(len.max(v.len()), 0);
        v
    }

    fn zip_with(&self, other: &DivisorClass, f: impl Fn(i64, i64) -> i64) -> DivisorClass {
        let len = self.0.len().max(other.0.len());
        let (a, b) = (self.padded(len), other.padded(len));
        DivisorClass(a.iter().zip(&b).map(|(&x, &y)| f(x, y)).collect())
    }

    /// Drops trailing zero coefficients so equal classes compare equal
    /// regardless of the stage they were written at.
    pub fn normalized(&self) -> DivisorClass {
        let mut v = self.0.clone();
        while v.len() > 1 && v.last() == Some(&0) {
            v.pop();
        }
        DivisorClass(v)
    }

    fn with_len(&self, len: usize) -> DivisorClass {
        DivisorClass(self.padded(len))
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass(self.0.iter().map(|x| -x).collect())
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass(rhs.0.iter().map(|x| self * x).collect())
    }
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveRecord {
    pub name: String,
    pub class: DivisorClass,
    pub node_budget: u32,
}

/// A blow-up center: a point lying on every curve in `simple_on` with
/// multiplicity one and, optionally, at a node of `node_of`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CenterSpec {
    pub label: String,
    #[serde(rename = "on", default)]
    pub simple_on: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_of: Option<String>,
}

impl CenterSpec {
    pub fn new(label: impl Into<String>, simple_on: &[&str]) -> Self {
        CenterSpec {
            label: label.into(),
            simple_on: simple_on.iter().map(|s| s.to_string()).collect(),
            node_of: None,
        }
    }

    pub fn node(label: impl Into<String>, curve: &str) -> Self {
        CenterSpec { label: label.into(), simple_on: Vec::new(), node_of: Some(curve.to_string()) }
    }

    /// Multiplicity of the center on `curve` (0, 1 or 2).
    pub fn multiplicity(&self, curve: &str) -> i64 {
        if self.node_of.as_deref() == Some(curve) {
            2
        } else if self.simple_on.iter().any(|c| c == curve) {
            1
        } else {
            0
        }
    }

    pub fn curves(&self) -> impl Iterator<Item = &str> {
        self.simple_on.iter().map(String::as_str).chain(self.node_of.as_deref())
    }
}

impl fmt::Display for CenterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)?;
        if !self.simple_on.is_empty() {
            write!(f, " on {{{}}}", self.simple_on.join(", "))?;
        }
        if let Some(n) = &self.node_of {
            write!(f, " at node of {n}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    pub blowups: usize,
    pub euler: i64,
    pub signature: i64,
    pub b2: i64,
    pub k2: i64,
}

/// The plane blown up `N` times, with a table of named curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedSurface {
    exceptionals: Vec<String>,
    curves: IndexMap<String, CurveRecord>,
}

impl MarkedSurface {
    pub fn projective_plane() -> Self {
        MarkedSurface { exceptionals: Vec::new(), curves: IndexMap::new() }
    }

    pub fn n_blowups(&self) -> usize {
        self.exceptionals.len()
    }

    /// Exceptional labels in creation order (basis order after `H`).
    pub fn exceptional_labels(&self) -> &[String] {
        &self.exceptionals
    }

    pub fn canonical_class(&self) -> DivisorClass {
        let mut v = vec![1; self.n_blowups() + 1];
        v[0] = -3;
        DivisorClass(v)
    }

    /// Basis class for `"H"` or an exceptional label.
    pub fn basis_class(&self, label: &str) -> Result<DivisorClass, SurfaceError> {
        let n = self.n_blowups();
        if label == HYPERPLANE {
            return Ok(DivisorClass::hyperplane(n));
        }
        self.exceptionals
            .iter()
            .position(|l| l == label)
            .map(|i| DivisorClass::exceptional(n, i + 1))
            .ok_or_else(|| SurfaceError::UnknownLabel(label.to_string()))
    }

    /// `H` followed by the exceptional labels.
    pub fn basis_labels(&self) -> Vec<String> {
        std::iter::once(HYPERPLANE.to_string()).chain(self.exceptionals.iter().cloned()).collect()
    }

    /// Builds a class from `(label, coefficient)` pairs.
    pub fn class_from_terms<'a>(
        &self,
        terms: impl IntoIterator<Item = (&'a str, i64)>,
    ) -> Result<DivisorClass, SurfaceError> {
        let mut c = DivisorClass::zero(self.n_blowups());
        for (label, k) in terms {
            c = &c + &(k * &self.basis_class(label)?);
        }
        Ok(c)
    }

    pub fn curve(&self, name: &str) -> Result<&CurveRecord, SurfaceError> {
        self.curves.get(name).ok_or_else(|| SurfaceError::UnknownCurve(name.to_string()))
    }

    pub fn has_curve(&self, name: &str) -> bool {
        self.curves.contains_key(name)
    }

    pub fn curves(&self) -> impl Iterator<Item = &CurveRecord> {
        self.curves.values()
    }

    pub fn curve_names(&self) -> impl Iterator<Item = &str> {
        self.curves.keys().map(String::as_str)
    }

    pub fn class_genus(&self, c: &DivisorClass) -> i64 {
        let k = self.canonical_class();
        let twice = c.square() + c.dot(&k);
        debug_assert!(twice % 2 == 0, "adjunction parity");
        1 + twice / 2
    }

    pub fn pair(&self, a: &str, b: &str) -> Result<i64, SurfaceError> {
        Ok(self.curve(a)?.class.dot(&self.curve(b)?.class))
    }

    pub fn self_int(&self, c: &str) -> Result<i64, SurfaceError> {
        Ok(self.curve(c)?.class.square())
    }

    pub fn genus_a(&self, c: &str) -> Result<i64, SurfaceError> {
        Ok(self.class_genus(&self.curve(c)?.class))
    }

    fn check_new_name(&self, name: &str) -> Result<(), SurfaceError> {
        if self.curves.contains_key(name) || self.exceptionals.iter().any(|l| l == name) || name == HYPERPLANE {
            return Err(SurfaceError::DuplicateName(name.to_string()));
        }
        Ok(())
    }

    /// Adds a plane curve of the given degree; only allowed before any blow-up.
    pub fn add_plane_curve(&self, name: &str, degree: i64) -> Result<Self, SurfaceError> {
        self.check_new_name(name)?;
        if self.n_blowups() > 0 {
            return Err(SurfaceError::DegreeAfterBlowup(name.to_string()));
        }
        if degree < 1 {
            return Err(SurfaceError::BadDegree { name: name.to_string(), degree });
        }
        let budget = ((degree - 1) * (degree - 2) / 2) as u32;
        let class = degree * &DivisorClass::hyperplane(0);
        self.insert(name, class, budget)
    }

    pub fn add_class_curve(&self, name: &str, class: DivisorClass, budget: u32) -> Result<Self, SurfaceError> {
        self.check_new_name(name)?;
        let expected = self.n_blowups() + 1;
        if class.coefficients().len() > expected {
            return Err(SurfaceError::ClassLength {
                name: name.to_string(),
                expected,
                got: class.coefficients().len(),
            });
        }
        self.insert(name, class.with_len(expected), budget)
    }

    fn insert(&self, name: &str, class: DivisorClass, budget: u32) -> Result<Self, SurfaceError> {
        let genus = self.class_genus(&class);
        if genus < 0 {
            return Err(SurfaceError::NegativeGenus { name: name.to_string(), genus });
        }
        if i64::from(budget) > genus {
            return Err(SurfaceError::BudgetExceedsGenus { name: name.to_string(), budget, genus });
        }
        let mut out = self.clone();
        out.curves.insert(
            name.to_string(),
            CurveRecord { name: name.to_string(), class, node_budget: budget },
        );
        Ok(out)
    }

    /// Checks the lattice preconditions of a center without blowing up.
    pub fn check_center(&self, c: &CenterSpec) -> Result<(), SurfaceError> {
        self.check_new_name(&c.label)?;
        let err_label = || c.label.clone();
        for (i, a) in c.simple_on.iter().enumerate() {
            self.curve(a)?;
            if c.simple_on[..i].contains(a) {
                return Err(SurfaceError::RepeatedCurve { label: err_label(), curve: a.clone() });
            }
        }
        for (i, a) in c.simple_on.iter().enumerate() {
            for b in &c.simple_on[i + 1..] {
                let pairing = self.pair(a, b)?;
                if pairing < 1 {
                    return Err(SurfaceError::NoCommonPoint {
                        label: err_label(),
                        a: a.clone(),
                        b: b.clone(),
                        pairing,
                    });
                }
            }
        }
        if let Some(x) = &c.node_of {
            if c.simple_on.contains(x) {
                return Err(SurfaceError::NodeAlsoSimple { label: err_label(), curve: x.clone() });
            }
            if self.curve(x)?.node_budget < 1 {
                return Err(SurfaceError::NoNodeLeft { label: err_label(), curve: x.clone() });
            }
            for other in &c.simple_on {
                let pairing = self.pair(x, other)?;
                if pairing < 2 {
                    return Err(SurfaceError::NodeCrossing {
                        label: err_label(),
                        node: x.clone(),
                        other: other.clone(),
                        pairing,
                    });
                }
            }
        }
        Ok(())
    }

    /// Blows up a validated center, returning the new surface.
    pub fn blow_up(&self, c: &CenterSpec) -> Result<Self, SurfaceError> {
        self.check_center(c)?;
        let mut out = self.clone();
        out.exceptionals.push(c.label.clone());
        let n = out.n_blowups();
        let e = DivisorClass::exceptional(n, n);
        for rec in out.curves.values_mut() {
            rec.class = rec.class.with_len(n + 1);
            let m = c.multiplicity(&rec.name);
            if m > 0 {
                rec.class = &rec.class - &(m * &e);
                if m == 2 {
                    rec.node_budget -= 1;
                }
            }
        }
        out.curves.insert(
            c.label.clone(),
            CurveRecord { name: c.label.clone(), class: e, node_budget: 0 },
        );
        Ok(out)
    }

    /// Applies centers in order; reports the failing index on error.
    pub fn blow_up_all<'a>(
        &self,
        centers: impl IntoIterator<Item = &'a CenterSpec>,
    ) -> Result<Self, (usize, SurfaceError)> {
        let mut s = self.clone();
        for (i, c) in centers.into_iter().enumerate() {
            s = s.blow_up(c).map_err(|e| (i, e))?;
        }
        Ok(s)
    }

    pub fn invariants(&self) -> SurfaceInvariants {
        let n = self.n_blowups() as i64;
        SurfaceInvariants { blowups: self.n_blowups(), euler: 3 + n, signature: 1 - n, b2: 1 + n, k2: 9 - n }
    }

    /// Renames a curve (and its basis label when it is an exceptional).
    pub fn rename(&self, from: &str, to: &str) -> Result<Self, SurfaceError> {
        if from == to {
            return Ok(self.clone());
        }
        self.curve(from)?;
        self.check_new_name(to)?;
        let mut out = self.clone();
        let curves = std::mem::take(&mut out.curves);
        out.curves = curves
            .into_iter()
            .map(|(k, mut rec)| {
                if k == from {
                    rec.name = to.to_string();
                    (to.to_string(), rec)
                } else {
                    (k, rec)
                }
            })
            .collect();
        for l in out.exceptionals.iter_mut() {
            if l == from {
                *l = to.to_string();
            }
        }
        Ok(out)
    }
}
