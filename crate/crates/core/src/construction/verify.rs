//! End-to-end verification: from a construction document (found by search or
//! stored) to every numerical and homological claim about the blow-down.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::centers::{enumerate_z_centers, first_z_centers, target_templates, CenterAssignment, ZSolution, Z_SEARCH_SPACE};
use super::pencil::{
    build_y, enumerate_pencils, FibrationReport, PencilIncidence, BASE_POINTS, LINES, MEMBERS, NODAL_FIBERS,
    PENCIL_SEARCH_SPACE,
};
use crate::blowdown::{
    blowdown_invariants, boundary_image, boundary_lens, chains_disjoint, h1_presentation, signed_residue,
    BlowdownConfig, ChainSpec, Disjointness, FourManifoldInvariants,
};
use crate::format::{ChainVerdict, ConstructionDoc, CurveDecl};
use crate::hj::LensBoundary;
use crate::surface::{MarkedSurface, SurfaceInvariants};
use crate::zlinalg::{AbelianGroup, GroupElement};

pub const CANONICAL_ASSIGNMENT: &str = include_str!("../../data/canonical_assignment.json");

const PENCIL_BLOWUPS: usize = 9;
const EXPECTED_WAHL: [(i64, i64); 2] = [(110, 67), (6, 1)];
const EXPECTED_BOUNDARY: &str = "L(36,-5)";
const EXPECTED_H1: &str = "Z/2";

pub const ASSUMPTIONS: [&str; 4] = [
    "the pencil parameter and the general position of L1, L2, L3, A, B carry no lattice content and are not modeled",
    "the nodal fibers F1, F2, F3 of the pencil are taken as given; F3 is never blown up",
    "the smoothing of the contracted surface is assumed to exist; only its numerical and homological shadow is computed",
    "the six isolated centers are six points in total, distributed over the fibers",
];

pub fn canonical_document() -> ConstructionDoc {
    ConstructionDoc::from_json(CANONICAL_ASSIGNMENT).expect("shipped assignment parses")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckItem {
    pub id: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

/// A new exceptional class invisible to the first chain whose boundary
/// image in `H_1` of the second chain's lens space is `±2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    pub boundary_image: i64,
    pub signed_image: i64,
    pub modulus: i64,
}

/// The invariants that must agree across every solution of the search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeDigest {
    pub surface: Option<SurfaceInvariants>,
    pub blowdown: Option<FourManifoldInvariants>,
    pub h1_blowdown: Option<AbelianGroup>,
    pub h1_w: Option<AbelianGroup>,
    pub boundary: Option<LensBoundary>,
    pub witness: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionDigest {
    pub pencil: usize,
    pub centers: Vec<String>,
    pub chains: Vec<ChainSpec>,
    pub outcome: OutcomeDigest,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionSummary {
    pub search_space: Vec<String>,
    pub pencils: usize,
    pub solutions: Vec<SolutionDigest>,
    pub consistent: bool,
    pub canonical_included: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub pencil: Option<PencilIncidence>,
    pub centers: Option<CenterAssignment>,
    pub fibration: Option<FibrationReport>,
    pub chains: Vec<ChainVerdict>,
    pub disjointness: Option<Disjointness>,
    pub surface: Option<SurfaceInvariants>,
    pub blowdown: Option<FourManifoldInvariants>,
    pub h1_blowdown: Option<AbelianGroup>,
    pub h1_w: Option<AbelianGroup>,
    /// Image of the first meridian of the second chain in `H_1(W)`.
    pub alpha: Option<GroupElement>,
    pub boundary: Option<LensBoundary>,
    pub witness: Option<Witness>,
    /// Isolated centers that sit on a section.
    pub bullets_at_sections: Vec<String>,
    pub assumptions: Vec<String>,
    pub items: Vec<CheckItem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solutions: Option<SolutionSummary>,
    pub assignment: ConstructionDoc,
    pub passed: bool,
}

impl VerificationReport {
    fn empty(doc: &ConstructionDoc) -> Self {
        VerificationReport {
            pencil: None,
            centers: None,
            fibration: None,
            chains: Vec::new(),
            disjointness: None,
            surface: None,
            blowdown: None,
            h1_blowdown: None,
            h1_w: None,
            alpha: None,
            boundary: None,
            witness: None,
            bullets_at_sections: Vec::new(),
            assumptions: ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
            items: Vec::new(),
            solutions: None,
            assignment: doc.clone(),
            passed: false,
        }
    }

    fn check(&mut self, id: &str, expected: impl ToString, observed: impl ToString, pass: bool) {
        self.items.push(CheckItem { id: id.into(), expected: expected.to_string(), observed: observed.to_string(), pass });
    }

    fn finish(mut self) -> Self {
        self.passed = !self.items.is_empty() && self.items.iter().all(|i| i.pass);
        self
    }

    pub fn item(&self, id: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.id == id)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.items.iter().filter(|i| !i.pass).map(|i| i.id.as_str()).collect()
    }

    pub fn digest(&self) -> OutcomeDigest {
        OutcomeDigest {
            surface: self.surface,
            blowdown: self.blowdown,
            h1_blowdown: self.h1_blowdown.clone(),
            h1_w: self.h1_w.clone(),
            boundary: self.boundary,
            witness: self.witness.is_some(),
            passed: self.passed,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut t = String::new();
        if let Some(s) = &self.surface {
            t += &format!("Z: N={} b2={} e={} sigma={} K^2={}\n", s.blowups, s.b2, s.euler, s.signature, s.k2);
        }
        for c in &self.chains {
            let w = c.weights.as_ref().map(|w| format!("{w:?}")).unwrap_or_else(|| "?".into());
            t += &format!("chain {} = [{}]: {}\n", c.name, c.curves.join(", "), w);
        }
        if let Some(b) = &self.blowdown {
            t += &format!("blow-down: {b}\n");
        }
        if let Some(h) = &self.h1_blowdown {
            t += &format!("H1(blow-down) = {h}\n");
        }
        if let Some(w) = &self.witness {
            t += &format!("2-alpha witness: {} (boundary image {} mod {})\n", w.label, w.signed_image, w.modulus);
        }
        if !self.bullets_at_sections.is_empty() {
            t += &format!("isolated centers on sections: {}\n", self.bullets_at_sections.join("; "));
        }
        for i in &self.items {
            let v = if i.pass { "PASS" } else { "FAIL" };
            t += &format!("[{v}] {}: {} (expected {})\n", i.id, i.observed, i.expected);
        }
        if let Some(s) = &self.solutions {
            t += &format!(
                "search: {} pencil(s), {} solution(s), consistent={}, canonical included={}\n",
                s.pencils,
                s.solutions.len(),
                s.consistent,
                s.canonical_included
            );
            if s.solutions.is_empty() {
                for d in &s.search_space {
                    t += &format!("search space: {d}\n");
                }
            }
        }
        if self.passed {
            t += "result: PASS\n";
        } else {
            t += &format!("result: FAIL ({})\n", self.failing().join(", "));
        }
        t
    }
}

/// The construction document for a pencil and a center placement.
pub fn document_for(pi: &PencilIncidence, z: &ZSolution) -> ConstructionDoc {
    let mut curves: Vec<CurveDecl> =
        LINES.iter().chain(&MEMBERS[..1]).map(|n| CurveDecl::Plane { name: n.to_string(), degree: 1 }).collect();
    curves.push(CurveDecl::Plane { name: MEMBERS[1].into(), degree: 2 });
    let mut fiber = IndexMap::new();
    fiber.insert("H".to_string(), 3);
    for c in pi.centers() {
        fiber.insert(c.label, -1);
    }
    for n in NODAL_FIBERS {
        curves.push(CurveDecl::Class { name: n.into(), class: fiber.clone(), budget: 1 });
    }
    ConstructionDoc {
        base: "P2".into(),
        curves,
        blowups: pi.centers().into_iter().chain(z.assignment.centers()).collect(),
        chains: z.chains.clone(),
        blowdown: None,
        expect: None,
    }
}

/// Runs every check on a stored construction.
pub fn verify_document(doc: &ConstructionDoc) -> VerificationReport {
    let mut r = VerificationReport::empty(doc);
    if doc.blowups.len() < PENCIL_BLOWUPS {
        r.check("pencil", "9 pencil blow-ups", format!("{} blow-ups", doc.blowups.len()), false);
        return r.finish();
    }
    let (pencil_centers, z_centers) = doc.blowups.split_at(PENCIL_BLOWUPS);

    let y = match doc.build_surface(Some(PENCIL_BLOWUPS)) {
        Ok(y) => y,
        Err(e) => {
            r.check("construction", "valid blow-ups", e, false);
            return r.finish();
        }
    };
    match PencilIncidence::from_centers(pencil_centers) {
        Ok(pi) => {
            r.check("pencil", "towers of depth 1,3,1,2,2 at p,q,r,s,t", "ok", true);
            let f = FibrationReport::compute(&y, &pi);
            let observed = match f.first_failure() {
                None => format!("e(Y) = {} = I7 + I2 + 3 nodal", f.euler_surface),
                Some(c) => format!("{} failed: {}", c.name, c.detail),
            };
            r.check("fibration", "I7 + I2 + 3 I1, five sections, K = -F", observed, f.all_pass());
            r.fibration = Some(f);
            r.pencil = Some(pi);
        }
        Err(e) => r.check("pencil", "towers of depth 1,3,1,2,2 at p,q,r,s,t", e, false),
    }

    match CenterAssignment::from_centers(z_centers) {
        Ok(ca) => {
            let res = ca.check_structure(&y);
            r.check("centers", "clusters at F2∩E5 (5) and F2∩E7 (2), six isolated", res.as_ref().err().map_or("ok", |e| e.as_str()), res.is_ok());
            let sections: Vec<&str> = BASE_POINTS.iter().map(|(_, _, s)| *s).collect();
            r.bullets_at_sections = ca
                .bullets
                .iter()
                .filter(|b| b.curves().any(|c| sections.contains(&c)))
                .map(|b| b.to_string())
                .collect();
            r.centers = Some(ca);
        }
        Err(e) => r.check("centers", "13 centers", e, false),
    }

    let z = match doc.build_surface(None) {
        Ok(z) => z,
        Err(e) => {
            r.check("construction", "valid blow-ups", e, false);
            return r.finish();
        }
    };
    let inv = z.invariants();
    r.surface = Some(inv);
    r.check(
        "surface",
        "N=22 b2=23 e=25 sigma=-21 K^2=-13",
        format!("N={} b2={} e={} sigma={} K^2={}", inv.blowups, inv.b2, inv.euler, inv.signature, inv.k2),
        (inv.blowups, inv.b2, inv.euler, inv.signature, inv.k2) == (22, 23, 25, -21, -13),
    );

    if doc.chains.len() != EXPECTED_WAHL.len() {
        r.check("chains", "2 chains", format!("{} chains", doc.chains.len()), false);
        return r.finish();
    }
    for (c, (n, a)) in doc.chains.iter().zip(EXPECTED_WAHL) {
        let v = if c.curves.iter().all(|x| z.has_curve(x)) {
            ChainVerdict::compute(&z, c)
        } else {
            ChainVerdict {
                name: c.name.clone(),
                curves: c.curves.clone(),
                weights: None,
                wahl: None,
                failed_check: Some(0),
                error: Some("unknown curve".into()),
            }
        };
        let observed = match (&v.wahl, &v.error) {
            (Some(w), _) => w.to_string(),
            (None, e) => format!("check {} failed: {}", v.failed_check.unwrap_or(0), e.as_deref().unwrap_or("")),
        };
        let pass = v.wahl.is_some_and(|w| (w.n, w.a) == (n, a));
        r.check(&format!("chain:{}", c.name), format!("C({n},{a})"), observed, pass);
        r.chains.push(v);
    }
    if !r.chains.iter().all(ChainVerdict::ok) {
        return r.finish();
    }
    let first = &doc.chains[0];
    let second = &doc.chains[1];

    let d = chains_disjoint(&z, &doc.chains);
    r.check("disjoint", "disjoint", &d, d.is_disjoint());
    r.disjointness = Some(d.clone());
    if !d.is_disjoint() {
        return r.finish();
    }

    match blowdown_invariants(&z, &doc.chains) {
        Ok(b) => {
            let want = (9, -5, 1, 3, 1);
            r.check("blowdown", "e=9 sigma=-5 b2+=1 K^2=3 chi_h=1", b, (b.euler, b.signature, b.b2_plus, b.k2, b.chi_h) == want);
            r.blowdown = Some(b);
        }
        Err(e) => r.check("blowdown", "e=9 sigma=-5 b2+=1 K^2=3 chi_h=1", e, false),
    }

    let full = BlowdownConfig::new(z.clone(), doc.chains.clone(), Vec::new());
    match h1_presentation(&full) {
        Ok(p) => {
            let g = p.group();
            r.check("h1_blowdown", EXPECTED_H1, &g, g.to_string() == EXPECTED_H1);
            r.h1_blowdown = Some(g);
        }
        Err(e) => r.check("h1_blowdown", EXPECTED_H1, e, false),
    }

    let w_cfg = BlowdownConfig::new(z.clone(), vec![first.clone()], vec![second.clone()]);
    match h1_presentation(&w_cfg) {
        Ok(p) => {
            let g = p.group();
            r.check("h1_w", EXPECTED_H1, &g, g.to_string() == EXPECTED_H1);
            r.h1_w = Some(g);
            let alpha = p.meridian_class(&second.name, &second.curves[0]);
            let observed = match &alpha {
                Some(a) if !a.is_zero() => format!("nonzero, order {}", a.order.as_ref().map_or("inf".into(), |o| o.to_string())),
                Some(_) => "zero".into(),
                None => "unavailable".into(),
            };
            r.check("alpha", "meridian of the second chain is nonzero in H1(W)", observed, alpha.as_ref().is_some_and(|a| !a.is_zero()));
            r.alpha = alpha;
        }
        Err(e) => r.check("h1_w", EXPECTED_H1, e, false),
    }

    match boundary_lens(&z, second) {
        Ok(b) => {
            r.check("boundary", EXPECTED_BOUNDARY, b.complement, b.complement.to_string() == EXPECTED_BOUNDARY);
            r.boundary = Some(b);
        }
        Err(e) => r.check("boundary", EXPECTED_BOUNDARY, e, false),
    }

    r.witness = find_witness(&z, &doc.blowups[PENCIL_BLOWUPS..].iter().map(|c| c.label.clone()).collect::<Vec<_>>(), first, second);
    let observed = r.witness.as_ref().map_or("none".to_string(), |w| format!("{} with image {}", w.label, w.signed_image));
    r.check("witness", "exceptional class with image ±2, orthogonal to the first chain", observed, r.witness.is_some());
    r.finish()
}

fn find_witness(z: &MarkedSurface, labels: &[String], first: &ChainSpec, second: &ChainSpec) -> Option<Witness> {
    let modulus = boundary_lens(z, second).ok()?.plumbing.p;
    labels.iter().find_map(|l| {
        let class = &z.curve(l).ok()?.class;
        let orthogonal = first.curves.iter().all(|c| z.curve(c).is_ok_and(|x| x.class.dot(class) == 0));
        if !orthogonal {
            return None;
        }
        let image = boundary_image(z, class, second).ok()?;
        let signed = signed_residue(image, modulus);
        (signed.abs() == 2).then(|| Witness { label: l.clone(), boundary_image: image, signed_image: signed, modulus })
    })
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Skip the search and verify this construction.
    pub assignment: Option<ConstructionDoc>,
    /// Enumerate every pencil and placement and compare their outcomes.
    pub all_solutions: bool,
}

fn failed_search(summary: SolutionSummary) -> VerificationReport {
    let doc = ConstructionDoc { base: "P2".into(), curves: Vec::new(), blowups: Vec::new(), chains: Vec::new(), blowdown: None, expect: None };
    let mut r = VerificationReport::empty(&doc);
    r.check("search", "at least one solution", format!("none in: {}", summary.search_space.join(" / ")), false);
    r.solutions = Some(summary);
    r.finish()
}

pub fn search_space() -> Vec<String> {
    vec![PENCIL_SEARCH_SPACE.to_string(), Z_SEARCH_SPACE.to_string()]
}

/// Every solution of the two searches, in canonical order.
pub fn all_solutions() -> (usize, Vec<(usize, ConstructionDoc)>) {
    let pencils = enumerate_pencils();
    let mut out = Vec::new();
    for (i, pi) in pencils.iter().enumerate() {
        let Ok((y, _)) = build_y(pi) else { continue };
        for z in enumerate_z_centers(&y, &target_templates()) {
            out.push((i, document_for(pi, &z)));
        }
    }
    (pencils.len(), out)
}

/// The first solution in search order.
pub fn first_solution() -> Option<ConstructionDoc> {
    enumerate_pencils().iter().find_map(|pi| {
        let (y, _) = build_y(pi).ok()?;
        first_z_centers(&y, &target_templates()).map(|z| document_for(pi, &z))
    })
}

pub fn verify_paper(opts: &VerifyOptions) -> VerificationReport {
    if !opts.all_solutions {
        return match &opts.assignment {
            Some(doc) => verify_document(doc),
            None => match first_solution() {
                Some(doc) => verify_document(&doc),
                None => failed_search(SolutionSummary {
                    search_space: search_space(),
                    pencils: enumerate_pencils().len(),
                    solutions: Vec::new(),
                    consistent: false,
                    canonical_included: false,
                }),
            },
        };
    }

    let (pencils, found) = all_solutions();
    let canonical = canonical_document();
    let solutions: Vec<SolutionDigest> = found
        .iter()
        .map(|(i, doc)| SolutionDigest {
            pencil: *i,
            centers: doc.blowups[PENCIL_BLOWUPS..].iter().map(|c| c.to_string()).collect(),
            chains: doc.chains.clone(),
            outcome: verify_document(doc).digest(),
        })
        .collect();
    let consistent = solutions.windows(2).all(|w| w[0].outcome == w[1].outcome);
    let summary = SolutionSummary {
        search_space: search_space(),
        pencils,
        canonical_included: found.iter().any(|(_, d)| *d == canonical),
        consistent,
        solutions,
    };
    let Some(primary) = opts.assignment.clone().or_else(|| found.first().map(|(_, d)| d.clone())) else {
        return failed_search(summary);
    };
    let mut r = verify_document(&primary);
    r.check(
        "solutions",
        "all solutions agree; shipped assignment among them",
        format!(
            "{} pencil(s), {} solution(s), consistent={}, canonical included={}",
            summary.pencils,
            summary.solutions.len(),
            summary.consistent,
            summary.canonical_included
        ),
        !summary.solutions.is_empty() && summary.consistent && summary.canonical_included,
    );
    r.solutions = Some(summary);
    r.finish()
}
