//! The JSON construction document, and running one end to end.

use std::collections::{BTreeMap, BTreeSet};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blowdown::{
    blowdown_invariants, chain_string, chains_disjoint, h1_presentation, validate_chain, BlowdownConfig,
    ChainSpec, Disjointness, FourManifoldInvariants, H1Presentation,
};
use crate::hj::WahlParams;
use crate::surface::{CenterSpec, MarkedSurface, SurfaceInvariants};
use crate::zlinalg::AbelianGroup;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CurveDecl {
    Plane {
        name: String,
        degree: i64,
    },
    Class {
        name: String,
        /// Coefficients by basis label (`H`, or an exceptional label).
        class: IndexMap<String, i64>,
        #[serde(default)]
        budget: u32,
    },
}

impl CurveDecl {
    pub fn name(&self) -> &str {
        match self {
            CurveDecl::Plane { name, .. } | CurveDecl::Class { name, .. } => name,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k2: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b2: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b2_plus: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_h: Option<i64>,
    /// Invariant-factor form, e.g. `"Z/2"` or `"0"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1: Option<String>,
    /// `[n, a]` per chain name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub wahl: BTreeMap<String, [i64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructionDoc {
    pub base: String,
    pub curves: Vec<CurveDecl>,
    pub blowups: Vec<CenterSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chains: Vec<ChainSpec>,
    /// Chains replaced by rational balls; the others are only excised.
    /// Absent means every chain is blown down.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blowdown: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expectations>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DocError {
    #[error("line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("{path}: {msg}")]
    Field { path: String, msg: String },
}

fn field(path: impl Into<String>, msg: impl ToString) -> DocError {
    DocError::Field { path: path.into(), msg: msg.to_string() }
}

impl From<serde_json::Error> for DocError {
    fn from(e: serde_json::Error) -> Self {
        DocError::Parse { line: e.line(), column: e.column(), msg: e.to_string() }
    }
}

impl ConstructionDoc {
    pub fn from_json(text: &str) -> Result<Self, DocError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn chain(&self, name: &str) -> Option<&ChainSpec> {
        self.chains.iter().find(|c| c.name == name)
    }

    /// `(blown down, excised)` chains, each in declaration order.
    pub fn split_chains(&self) -> Result<(Vec<ChainSpec>, Vec<ChainSpec>), DocError> {
        let mut seen = BTreeSet::new();
        for (i, c) in self.chains.iter().enumerate() {
            if !seen.insert(c.name.as_str()) {
                return Err(field(format!("chains[{i}].name"), format!("duplicate chain name {:?}", c.name)));
            }
        }
        let Some(names) = &self.blowdown else {
            return Ok((self.chains.clone(), Vec::new()));
        };
        for (i, n) in names.iter().enumerate() {
            if self.chain(n).is_none() {
                return Err(field(format!("blowdown[{i}]"), format!("unknown chain {n:?}")));
            }
        }
        Ok(self.chains.iter().cloned().partition(|c| names.contains(&c.name)))
    }

    /// Builds the surface; with `stop_after = Some(k)` only the first `k`
    /// blow-ups are performed (and only curves living there are added).
    pub fn build_surface(&self, stop_after: Option<usize>) -> Result<MarkedSurface, DocError> {
        if self.base != "P2" {
            return Err(field("base", format!("unsupported base {:?}, expected \"P2\"", self.base)));
        }
        let labels: Vec<&str> = self.blowups.iter().map(|b| b.label.as_str()).collect();
        let mut s = MarkedSurface::projective_plane();
        // Class curves wait until every exceptional they mention exists.
        let mut pending: Vec<(usize, usize)> = Vec::new();
        for (i, decl) in self.curves.iter().enumerate() {
            match decl {
                CurveDecl::Plane { name, degree } => {
                    s = s.add_plane_curve(name, *degree).map_err(|e| field(format!("curves[{i}]"), e))?;
                }
                CurveDecl::Class { class, .. } => {
                    let mut at = 0;
                    for label in class.keys() {
                        if label == "H" {
                            continue;
                        }
                        let k = labels.iter().position(|l| l == label).ok_or_else(|| {
                            field(format!("curves[{i}].class"), format!("unknown basis label {label:?}"))
                        })?;
                        at = at.max(k + 1);
                    }
                    pending.push((at, i));
                }
            }
        }
        let n = stop_after.unwrap_or(self.blowups.len()).min(self.blowups.len());
        for step in 0..=n {
            for &(_, i) in pending.iter().filter(|(at, _)| *at == step) {
                let CurveDecl::Class { name, class, budget } = &self.curves[i] else { unreachable!() };
                let c = s
                    .class_from_terms(class.iter().map(|(k, v)| (k.as_str(), *v)))
                    .map_err(|e| field(format!("curves[{i}].class"), e))?;
                s = s.add_class_curve(name, c, *budget).map_err(|e| field(format!("curves[{i}]"), e))?;
            }
            if step < n {
                let b = &self.blowups[step];
                s = s.blow_up(b).map_err(|e| field(format!("blowups[{step}]"), format!("{}: {e}", b.label)))?;
            }
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainVerdict {
    pub name: String,
    pub curves: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wahl: Option<WahlParams>,
    /// Which check failed (1 = rational curves, 2 = weights, 3 = linear
    /// adjacency, 4 = Wahl string); 0 for structural errors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed_check: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ChainVerdict {
    pub fn compute(s: &MarkedSurface, c: &ChainSpec) -> Self {
        let weights = chain_string(s, c).ok().map(|w| w.coefficients().to_vec());
        let (wahl, failed_check, error) = match validate_chain(s, c) {
            Ok(w) => (Some(w), None, None),
            Err(e) => (None, Some(e.check_number()), Some(e.to_string())),
        };
        ChainVerdict { name: c.name.clone(), curves: c.curves.clone(), weights, wahl, failed_check, error }
    }

    pub fn ok(&self) -> bool {
        self.wahl.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectationCheck {
    pub field: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub surface: SurfaceInvariants,
    pub chains: Vec<ChainVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disjointness: Option<Disjointness>,
    pub blowdown: Vec<String>,
    pub excised: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariants: Option<FourManifoldInvariants>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1: Option<AbelianGroup>,
    /// `[rows, columns]` of the relation matrix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation_shape: Option<[usize; 2]>,
    pub expectations: Vec<ExpectationCheck>,
    pub passed: bool,
}

pub struct RunOutput {
    pub report: RunReport,
    pub presentation: Option<H1Presentation>,
}

/// Builds the surface, validates the chains, and computes what it can.
/// Input errors are `Err`; failed chains or expectations make a failed report.
pub fn run_document(doc: &ConstructionDoc) -> Result<RunOutput, DocError> {
    let (down, excised) = doc.split_chains()?;
    let s = doc.build_surface(None)?;
    for (i, c) in doc.chains.iter().enumerate() {
        if let Some(x) = c.curves.iter().find(|x| !s.has_curve(x)) {
            return Err(field(format!("chains[{i}].curves"), format!("unknown curve {x:?}")));
        }
    }
    let chains: Vec<ChainVerdict> = doc.chains.iter().map(|c| ChainVerdict::compute(&s, c)).collect();
    let mut disjointness = None;
    let mut invariants = None;
    let mut h1 = None;
    let mut presentation = None;
    if chains.iter().all(ChainVerdict::ok) {
        let d = chains_disjoint(&s, &doc.chains);
        if d.is_disjoint() {
            invariants = blowdown_invariants(&s, &down).ok();
            if let Ok(p) = h1_presentation(&BlowdownConfig::new(s.clone(), down.clone(), excised.clone())) {
                h1 = Some(p.group());
                presentation = Some(p);
            }
        }
        disjointness = Some(d);
    }
    let expectations = doc.expect.as_ref().map(|e| compare(e, invariants.as_ref(), h1.as_ref(), &chains)).unwrap_or_default();
    let passed = chains.iter().all(ChainVerdict::ok)
        && disjointness.as_ref().is_some_and(Disjointness::is_disjoint)
        && expectations.iter().all(|e| e.pass);
    let report = RunReport {
        surface: s.invariants(),
        chains,
        disjointness,
        blowdown: down.iter().map(|c| c.name.clone()).collect(),
        excised: excised.iter().map(|c| c.name.clone()).collect(),
        invariants,
        h1,
        presentation_shape: presentation.as_ref().map(|p: &H1Presentation| [p.relations.rows(), p.relations.cols()]),
        expectations,
        passed,
    };
    Ok(RunOutput { report, presentation })
}

fn compare(
    e: &Expectations,
    inv: Option<&FourManifoldInvariants>,
    h1: Option<&AbelianGroup>,
    chains: &[ChainVerdict],
) -> Vec<ExpectationCheck> {
    let missing = || "unavailable".to_string();
    let mut out = Vec::new();
    let mut num = |name: &str, want: Option<i64>, got: Option<i64>| {
        if let Some(w) = want {
            out.push(ExpectationCheck {
                field: name.into(),
                expected: w.to_string(),
                observed: got.map(|g| g.to_string()).unwrap_or_else(missing),
                pass: got == Some(w),
            });
        }
    };
    num("k2", e.k2, inv.map(|i| i.k2));
    num("euler", e.euler, inv.map(|i| i.euler));
    num("signature", e.signature, inv.map(|i| i.signature));
    num("b2", e.b2, inv.map(|i| i.b2));
    num("b2_plus", e.b2_plus, inv.map(|i| i.b2_plus));
    num("chi_h", e.chi_h, inv.map(|i| i.chi_h));
    if let Some(want) = &e.h1 {
        let parsed: Option<AbelianGroup> = want.parse().ok();
        out.push(ExpectationCheck {
            field: "h1".into(),
            expected: want.clone(),
            observed: h1.map(|g| g.to_string()).unwrap_or_else(missing),
            pass: parsed.is_some() && parsed.as_ref() == h1,
        });
    }
    for (name, [n, a]) in &e.wahl {
        let got = chains.iter().find(|c| &c.name == name).and_then(|c| c.wahl);
        out.push(ExpectationCheck {
            field: format!("wahl.{name}"),
            expected: format!("C({n},{a})"),
            observed: got.map(|w| w.to_string()).unwrap_or_else(missing),
            pass: got.is_some_and(|w| (w.n, w.a) == (*n, *a)),
        });
    }
    out
}

impl RunReport {
    pub fn to_text(&self) -> String {
        let mut t = String::new();
        let s = &self.surface;
        t += &format!("surface: N={} b2={} e={} sigma={} K^2={}\n", s.blowups, s.b2, s.euler, s.signature, s.k2);
        for c in &self.chains {
            let w = c.weights.as_ref().map(|w| format!("{w:?}")).unwrap_or_else(|| "?".into());
            match (&c.wahl, &c.error) {
                (Some(p), _) => t += &format!("chain {}: {} {}\n", c.name, w, p),
                (None, e) => t += &format!("chain {}: {} FAILED {}\n", c.name, w, e.as_deref().unwrap_or("")),
            }
        }
        if let Some(d) = &self.disjointness {
            t += &format!("disjointness: {d}\n");
        }
        if !self.excised.is_empty() {
            t += &format!("excised: {}\n", self.excised.join(", "));
        }
        if let Some(i) = &self.invariants {
            t += &format!("blow-down: {i}\n");
        }
        if let Some(h) = &self.h1 {
            t += &format!("H1: {h}\n");
        }
        for e in &self.expectations {
            let v = if e.pass { "PASS" } else { "FAIL" };
            t += &format!("[{v}] expect {} = {} (observed {})\n", e.field, e.expected, e.observed);
        }
        t += if self.passed { "result: PASS\n" } else { "result: FAIL\n" };
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SEXTIC: &str = r#"{
      "base": "P2",
      "curves": [{"name": "S", "degree": 6}],
      "blowups": [
        {"label": "e1", "node_of": "S"}, {"label": "e2", "node_of": "S"},
        {"label": "e3", "node_of": "S"}, {"label": "e4", "node_of": "S"},
        {"label": "e5", "node_of": "S"}, {"label": "e6", "node_of": "S"},
        {"label": "e7", "node_of": "S"}, {"label": "e8", "node_of": "S"},
        {"label": "e9", "node_of": "S"}, {"label": "e10", "node_of": "S"}
      ],
      "chains": [{"name": "C2", "curves": ["S"]}],
      "expect": {"h1": "Z/2", "k2": 0, "wahl": {"C2": [2, 1]}}
    }"#;

    #[test]
    fn even_minus_four_curve_blows_down_to_z2() {
        let doc = ConstructionDoc::from_json(SEXTIC).unwrap();
        let out = run_document(&doc).unwrap();
        let r = &out.report;
        assert!(r.passed, "{}", r.to_text());
        assert_eq!(r.chains[0].weights.as_deref(), Some(&[4][..]));
        assert_eq!(r.h1.as_ref().unwrap().to_string(), "Z/2");
        assert_eq!(r.presentation_shape, Some([12, 1]));
    }

    #[test]
    fn class_curves_join_after_their_last_exceptional() {
        let doc = ConstructionDoc::from_json(
            r#"{"base": "P2", "curves": [{"name": "L", "degree": 1},
                 {"name": "M", "class": {"H": 1, "a": -1}, "budget": 0}],
                "blowups": [{"label": "a", "on": ["L"]}, {"label": "b", "on": ["M"]}]}"#,
        )
        .unwrap();
        let s = doc.build_surface(None).unwrap();
        assert_eq!(s.self_int("M").unwrap(), -1);
        assert_eq!(s.pair("L", "M").unwrap(), 0);
        assert!(!doc.build_surface(Some(0)).unwrap().has_curve("M"));
        assert!(doc.build_surface(Some(1)).unwrap().has_curve("M"));
    }

    #[test]
    fn diagnostics_name_the_field() {
        let err = ConstructionDoc::from_json("{\"base\": \"P2\",\n \"curves\": [], \"blowups\": [], \"bogus\": 1}").unwrap_err();
        assert!(matches!(err, DocError::Parse { line: 2, .. }), "{err}");

        let doc = ConstructionDoc::from_json(
            r#"{"base": "P2", "curves": [{"name": "L", "degree": 1}],
                "blowups": [{"label": "a", "on": ["L", "X"]}]}"#,
        )
        .unwrap();
        let err = doc.build_surface(None).unwrap_err();
        assert!(err.to_string().starts_with("blowups[0]: a:"), "{err}");

        let doc = ConstructionDoc::from_json(
            r#"{"base": "P3", "curves": [], "blowups": []}"#,
        )
        .unwrap();
        assert!(doc.build_surface(None).unwrap_err().to_string().starts_with("base:"));
    }

    #[test]
    fn expectation_mismatch_fails_the_report() {
        let mut doc = ConstructionDoc::from_json(SEXTIC).unwrap();
        doc.expect.as_mut().unwrap().k2 = Some(4);
        let r = run_document(&doc).unwrap().report;
        assert!(!r.passed);
        let bad: Vec<&str> = r.expectations.iter().filter(|e| !e.pass).map(|e| e.field.as_str()).collect();
        assert_eq!(bad, ["k2"]);
    }

    #[test]
    fn document_roundtrips() {
        let doc = ConstructionDoc::from_json(SEXTIC).unwrap();
        assert_eq!(ConstructionDoc::from_json(&doc.to_json()).unwrap(), doc);
    }
}
