//! The thirteen blow-ups taking `Y` to `Z`, and the search that finds them.
//!
//! Centers come in two clusters of infinitely-near points, rooted at
//! `F2 ∩ E5` (five centers) and `F2 ∩ E7` (two centers), followed by six
//! isolated points on the curves of `Y`. A placement is accepted when the
//! proper transforms contain both target chains, with the unnamed slots of
//! each chain filled by new exceptional curves, and the chains are disjoint.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::pencil::{INTERMEDIATE_LABELS, LINES, MEMBERS};
use crate::blowdown::{chains_disjoint, chain_string, validate_chain, ChainSpec};
use crate::hj::{recognize_wahl, HjChain, WahlParams};
use crate::surface::{CenterSpec, MarkedSurface, SurfaceError};

pub const CLUSTER_ONE_ROOT: [&str; 2] = ["F2", "E5"];
pub const CLUSTER_TWO_ROOT: [&str; 2] = ["F2", "E7"];
pub const CLUSTER_ONE_SIZE: usize = 5;
pub const CLUSTER_TWO_SIZE: usize = 2;
pub const BULLETS: usize = 6;
pub const Z_BLOWUPS: usize = CLUSTER_ONE_SIZE + CLUSTER_TWO_SIZE + BULLETS;
/// The nodal fiber that no center touches.
pub const UNTOUCHED_FIBER: &str = "F3";
const NODAL_TARGETS: [&str; 2] = ["F1", "F2"];

pub const Z_SEARCH_SPACE: &str = "cluster one: root on {F2,E5}, then four centers each on the previous \
     exceptional and at most two further curves meeting it; cluster two: root on {F2,E7}, then one such \
     center; six further centers, each at a node of F1 or F2 or on one or two curves of Y (not F3) \
     including at least one component of a singular fiber, taken in nondecreasing candidate order; \
     unnamed chain slots filled by new exceptional curves";

/// A chain to be found in `Z`: named `Y`-curves and unnamed slots, with the
/// self-intersection each slot must reach.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainTemplate {
    pub name: String,
    pub slots: Vec<Option<String>>,
    pub weights: HjChain,
}

impl ChainTemplate {
    pub fn new(name: &str, slots: &[Option<&str>], weights: &[i64]) -> Self {
        ChainTemplate {
            name: name.into(),
            slots: slots.iter().map(|s| s.map(str::to_string)).collect(),
            weights: HjChain::new(weights.to_vec()).expect("template weights are at least 2"),
        }
    }

    pub fn wahl(&self) -> Option<WahlParams> {
        recognize_wahl(&self.weights)
    }

    fn named(&self) -> impl Iterator<Item = (usize, &str)> {
        self.slots.iter().enumerate().filter_map(|(i, s)| s.as_deref().map(|s| (i, s)))
    }
}

/// `C(110,67)` through the `I_7` fiber, and `C(6,1)` starting at `F2`.
pub fn target_templates() -> Vec<ChainTemplate> {
    vec![
        ChainTemplate::new(
            "C110_67",
            &[None, Some("E7"), Some("F1"), Some("E5"), Some("L3"), Some("E1"), Some("L1"), Some("E2"), Some("E3"), Some("E6"), Some("B")],
            &[2, 3, 5, 7, 2, 2, 3, 2, 2, 3, 3],
        ),
        ChainTemplate::new("C6_1", &[Some("F2"), None, None, None, None], &[8, 2, 2, 2, 2]),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CenterAssignment {
    pub cluster_one: Vec<CenterSpec>,
    pub cluster_two: Vec<CenterSpec>,
    pub bullets: Vec<CenterSpec>,
}

impl CenterAssignment {
    pub fn centers(&self) -> Vec<CenterSpec> {
        self.cluster_one.iter().chain(&self.cluster_two).chain(&self.bullets).cloned().collect()
    }

    pub fn from_centers(centers: &[CenterSpec]) -> Result<Self, String> {
        if centers.len() != Z_BLOWUPS {
            return Err(format!("expected {Z_BLOWUPS} centers after the pencil, found {}", centers.len()));
        }
        let (one, rest) = centers.split_at(CLUSTER_ONE_SIZE);
        let (two, bullets) = rest.split_at(CLUSTER_TWO_SIZE);
        Ok(CenterAssignment { cluster_one: one.to_vec(), cluster_two: two.to_vec(), bullets: bullets.to_vec() })
    }

    /// Checks the cluster and bullet shapes against the curves of `Y`.
    pub fn check_structure(&self, y: &MarkedSurface) -> Result<(), String> {
        check_cluster(&self.cluster_one, &CLUSTER_ONE_ROOT, CLUSTER_ONE_SIZE)?;
        check_cluster(&self.cluster_two, &CLUSTER_TWO_ROOT, CLUSTER_TWO_SIZE)?;
        if self.bullets.len() != BULLETS {
            return Err(format!("expected {BULLETS} isolated centers, found {}", self.bullets.len()));
        }
        let fibers = fiber_components();
        for b in &self.bullets {
            let curves: Vec<&str> = b.curves().collect();
            if let Some(c) = curves.iter().find(|c| !y.has_curve(c) || **c == UNTOUCHED_FIBER) {
                return Err(format!("{}: {c} is not an admissible curve of Y", b.label));
            }
            let ok = match &b.node_of {
                Some(n) => b.simple_on.is_empty() && NODAL_TARGETS.contains(&n.as_str()),
                None => (1..=2).contains(&curves.len()) && curves.iter().any(|c| fibers.contains(&c.to_string())),
            };
            if !ok {
                return Err(format!("{b} is neither a node of F1/F2 nor on a singular-fiber component"));
            }
        }
        Ok(())
    }
}

fn check_cluster(cluster: &[CenterSpec], root: &[&str], size: usize) -> Result<(), String> {
    if cluster.len() != size {
        return Err(format!("cluster rooted at {root:?} has {} centers, expected {size}", cluster.len()));
    }
    let mut on: Vec<&str> = cluster[0].simple_on.iter().map(String::as_str).collect();
    on.sort_unstable();
    let mut want = root.to_vec();
    want.sort_unstable();
    if on != want || cluster[0].node_of.is_some() {
        return Err(format!("{} is not the point {}", cluster[0], root.join(" ∩ ")));
    }
    for w in cluster.windows(2) {
        let (prev, c) = (&w[0], &w[1]);
        if c.node_of.is_some() || !c.simple_on.contains(&prev.label) || c.simple_on.len() > 3 {
            return Err(format!("{c} is not infinitely near {}", prev.label));
        }
        if c.simple_on.iter().any(|x| x == UNTOUCHED_FIBER) {
            return Err(format!("{c} lies on {UNTOUCHED_FIBER}"));
        }
    }
    Ok(())
}

/// Components of singular fibers that the isolated centers may use.
pub fn fiber_components() -> Vec<String> {
    LINES
        .iter()
        .chain(&INTERMEDIATE_LABELS)
        .chain(&MEMBERS)
        .chain(&NODAL_TARGETS)
        .map(|s| s.to_string())
        .collect()
}

pub fn z_label(i: usize) -> String {
    format!("e{}", i + 1)
}

/// Blows `Y` up at the assignment's centers.
pub fn build_z(y: &MarkedSurface, a: &CenterAssignment) -> Result<MarkedSurface, (usize, SurfaceError)> {
    y.blow_up_all(&a.centers())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZSolution {
    pub assignment: CenterAssignment,
    pub chains: Vec<ChainSpec>,
}

impl fmt::Display for ZSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.assignment.centers().iter().map(|c| c.to_string()).collect();
        write!(f, "{}", cs.join("; "))
    }
}

/// Necessary conditions on the template curves with `remaining` centers left.
struct Pruner {
    targets: Vec<(String, i64)>,
    adjacent: Vec<(String, String)>,
    apart: Vec<(String, String)>,
}

impl Pruner {
    fn new(templates: &[ChainTemplate]) -> Self {
        let mut targets = Vec::new();
        let mut adjacent = Vec::new();
        let mut named: Vec<(usize, usize, String)> = Vec::new();
        for (t, tpl) in templates.iter().enumerate() {
            for (i, name) in tpl.named() {
                targets.push((name.to_string(), -tpl.weights.coefficients()[i]));
                named.push((t, i, name.to_string()));
            }
        }
        let mut apart = Vec::new();
        for (k, (ta, ia, a)) in named.iter().enumerate() {
            for (tb, ib, b) in &named[k + 1..] {
                if ta == tb && ia.abs_diff(*ib) == 1 {
                    adjacent.push((a.clone(), b.clone()));
                } else {
                    apart.push((a.clone(), b.clone()));
                }
            }
        }
        Pruner { targets, adjacent, apart }
    }

    /// Each ordinary center separates at most one pair and lowers at most two
    /// self-intersections by one; a node lowers its curve's by four.
    fn viable(&self, s: &MarkedSurface, remaining: usize, bullets_left: usize) -> bool {
        let mut deficit = 0;
        let mut node_room = 0;
        for (name, target) in &self.targets {
            let rec = s.curve(name).expect("template curve");
            let cur = rec.class.square();
            if cur < *target {
                return false;
            }
            deficit += cur - target;
            if NODAL_TARGETS.contains(&name.as_str()) {
                node_room += (rec.node_budget as usize).min(bullets_left);
            }
        }
        if self.adjacent.iter().any(|(a, b)| s.pair(a, b).unwrap_or(0) < 1) {
            return false;
        }
        let to_separate: i64 = self.apart.iter().map(|(a, b)| s.pair(a, b).unwrap_or(0).max(0)).sum();
        to_separate <= remaining as i64 && deficit <= 2 * (remaining + node_room) as i64
    }
}

/// Candidate isolated centers on `Y`, in the order: points on the fixed
/// singular fibers, nodes, then points on the nodal fibers.
fn bullet_candidates(y: &MarkedSurface) -> Vec<Vec<String>> {
    let fibers = fiber_components();
    let names: Vec<&str> = y.curve_names().filter(|n| *n != UNTOUCHED_FIBER).collect();
    let pos = |n: &str| names.iter().position(|m| *m == n).unwrap();
    let nodal = |n: &str| NODAL_TARGETS.contains(&n);
    // (group, later curve, earlier curve, curves); nodes are marked by an empty first entry.
    let mut keyed: Vec<((u8, usize, usize), Vec<String>)> = Vec::new();
    for n in NODAL_TARGETS {
        keyed.push(((1, pos(n), 0), vec![String::new(), n.to_string()]));
    }
    for (i, a) in names.iter().enumerate() {
        if fibers.contains(&a.to_string()) {
            keyed.push(((if nodal(a) { 2 } else { 0 }, i, i), vec![a.to_string()]));
        }
        for (j, b) in names.iter().enumerate().skip(i + 1) {
            let involves_fiber = fibers.contains(&a.to_string()) || fibers.contains(&b.to_string());
            if involves_fiber && y.pair(a, b).unwrap_or(0) >= 1 {
                let group = if nodal(a) || nodal(b) { 2 } else { 0 };
                keyed.push(((group, j, i), vec![a.to_string(), b.to_string()]));
            }
        }
    }
    keyed.sort();
    keyed.into_iter().map(|(_, v)| v).collect()
}

fn bullet_center(label: String, cand: &[String]) -> CenterSpec {
    if cand[0].is_empty() {
        CenterSpec { label, simple_on: Vec::new(), node_of: Some(cand[1].clone()) }
    } else {
        CenterSpec { label, simple_on: cand.to_vec(), node_of: None }
    }
}

struct Search<'a> {
    templates: &'a [ChainTemplate],
    pruner: Pruner,
    candidates: Vec<Vec<String>>,
    placed: Vec<CenterSpec>,
    found: Vec<ZSolution>,
    limit: Option<usize>,
}

/// All center placements on `Y` realizing the templates as disjoint chains.
pub fn enumerate_z_centers(y: &MarkedSurface, templates: &[ChainTemplate]) -> Vec<ZSolution> {
    run_search(y, templates, None)
}

/// The first placement in search order, if any.
pub fn first_z_centers(y: &MarkedSurface, templates: &[ChainTemplate]) -> Option<ZSolution> {
    run_search(y, templates, Some(1)).into_iter().next()
}

fn run_search(y: &MarkedSurface, templates: &[ChainTemplate], limit: Option<usize>) -> Vec<ZSolution> {
    let mut s = Search {
        templates,
        pruner: Pruner::new(templates),
        candidates: bullet_candidates(y),
        placed: Vec::new(),
        found: Vec::new(),
        limit,
    };
    s.step(y, 0);
    s.found
}

impl Search<'_> {
    fn done(&self) -> bool {
        self.limit.is_some_and(|l| self.found.len() >= l)
    }

    fn try_center(&mut self, s: &MarkedSurface, c: CenterSpec, next_min: usize) {
        let Ok(next) = s.blow_up(&c) else { return };
        let k = self.placed.len() + 1;
        let bullets_left = BULLETS.min(Z_BLOWUPS - k);
        if !self.pruner.viable(&next, Z_BLOWUPS - k, bullets_left) {
            return;
        }
        self.placed.push(c);
        self.step(&next, next_min);
        self.placed.pop();
    }

    fn step(&mut self, s: &MarkedSurface, min_candidate: usize) {
        if self.done() {
            return;
        }
        let k = self.placed.len();
        let label = z_label(k);
        if k == Z_BLOWUPS {
            self.finish(s);
            return;
        }
        let root = match k {
            0 => Some(CLUSTER_ONE_ROOT),
            x if x == CLUSTER_ONE_SIZE => Some(CLUSTER_TWO_ROOT),
            _ => None,
        };
        if let Some(root) = root {
            self.try_center(s, CenterSpec::new(label, &root), 0);
        } else if k < CLUSTER_ONE_SIZE + CLUSTER_TWO_SIZE {
            let prev = self.placed[k - 1].label.clone();
            let near: Vec<String> = s
                .curve_names()
                .filter(|n| *n != prev && *n != UNTOUCHED_FIBER && s.pair(n, &prev).unwrap_or(0) >= 1)
                .map(str::to_string)
                .collect();
            for extra in subsets_upto(&near, 2) {
                let mut on = vec![prev.clone()];
                on.extend(extra);
                self.try_center(s, CenterSpec { label: label.clone(), simple_on: on, node_of: None }, 0);
                if self.done() {
                    return;
                }
            }
        } else {
            for i in min_candidate..self.candidates.len() {
                let c = bullet_center(label.clone(), &self.candidates[i]);
                self.try_center(s, c, i);
                if self.done() {
                    return;
                }
            }
        }
    }

    fn finish(&mut self, z: &MarkedSurface) {
        let new_labels: Vec<String> = (0..Z_BLOWUPS).map(z_label).collect();
        let Some(chains) = match_templates(z, self.templates, &new_labels) else { return };
        let assignment = CenterAssignment::from_centers(&self.placed).expect("thirteen centers");
        self.found.push(ZSolution { assignment, chains });
    }
}

fn subsets_upto(items: &[String], max: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    for i in 0..items.len() {
        out.push(vec![items[i].clone()]);
        if max >= 2 {
            for j in i + 1..items.len() {
                out.push(vec![items[i].clone(), items[j].clone()]);
            }
        }
    }
    out
}

/// Fills the unnamed slots with distinct new curves so that every template
/// becomes a valid chain with its prescribed string; chains must be disjoint.
pub fn match_templates(z: &MarkedSurface, templates: &[ChainTemplate], new_labels: &[String]) -> Option<Vec<ChainSpec>> {
    let mut used = BTreeSet::new();
    let mut out = Vec::new();
    if fill_template(z, templates, new_labels, &mut used, &mut out) {
        Some(out)
    } else {
        None
    }
}

fn fill_template(
    z: &MarkedSurface,
    templates: &[ChainTemplate],
    new_labels: &[String],
    used: &mut BTreeSet<String>,
    out: &mut Vec<ChainSpec>,
) -> bool {
    let Some(tpl) = templates.get(out.len()) else {
        return chains_disjoint(z, out).is_disjoint();
    };
    let mut curves = Vec::new();
    fill_slot(z, tpl, new_labels, used, &mut curves, &mut |curves, used| {
        let chain = ChainSpec { name: tpl.name.clone(), curves: curves.to_vec() };
        let ok = chain_string(z, &chain).is_ok_and(|s| s == tpl.weights) && validate_chain(z, &chain).is_ok();
        if !ok {
            return false;
        }
        out.push(chain);
        if fill_template(z, templates, new_labels, used, out) {
            return true;
        }
        out.pop();
        false
    })
}

fn fill_slot(
    z: &MarkedSurface,
    tpl: &ChainTemplate,
    new_labels: &[String],
    used: &mut BTreeSet<String>,
    curves: &mut Vec<String>,
    k: &mut dyn FnMut(&[String], &mut BTreeSet<String>) -> bool,
) -> bool {
    let i = curves.len();
    if i == tpl.slots.len() {
        return k(curves, used);
    }
    let weight = tpl.weights.coefficients()[i];
    let options: Vec<String> = match &tpl.slots[i] {
        Some(name) => vec![name.clone()],
        None => new_labels.iter().filter(|l| !used.contains(*l)).cloned().collect(),
    };
    for c in options {
        if !z.has_curve(&c) || z.self_int(&c).ok() != Some(-weight) {
            continue;
        }
        if let Some(prev) = curves.last() {
            if z.pair(prev, &c).ok() != Some(1) {
                continue;
            }
        }
        let fresh = tpl.slots[i].is_none();
        if fresh {
            used.insert(c.clone());
        }
        curves.push(c.clone());
        if fill_slot(z, tpl, new_labels, used, curves, k) {
            return true;
        }
        curves.pop();
        if fresh {
            used.remove(&c);
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::pencil::{build_y, enumerate_pencils};

    fn hand_assignment() -> CenterAssignment {
        let c = |l: &str, on: &[&str]| CenterSpec::new(l, on);
        CenterAssignment {
            cluster_one: vec![
                c("e1", &["F2", "E5"]),
                c("e2", &["e1", "E5"]),
                c("e3", &["e2", "E5"]),
                c("e4", &["e3", "E5"]),
                c("e5", &["e4", "E5"]),
            ],
            cluster_two: vec![c("e6", &["F2", "E7"]), c("e7", &["e6", "F2"])],
            bullets: vec![
                c("e8", &["E5", "B"]),
                c("e9", &["E7", "L1"]),
                CenterSpec::node("e10", "F1"),
                CenterSpec::node("e11", "F2"),
                c("e12", &["E6", "F1"]),
                c("e13", &["E6", "F2"]),
            ],
        }
    }

    #[test]
    fn hand_assignment_realizes_both_chains() {
        let pi = &enumerate_pencils()[0];
        let (y, _) = build_y(pi).unwrap();
        let a = hand_assignment();
        a.check_structure(&y).unwrap();
        let z = build_z(&y, &a).unwrap();
        let labels: Vec<String> = (0..Z_BLOWUPS).map(z_label).collect();
        let chains = match_templates(&z, &target_templates(), &labels).unwrap();
        assert_eq!(chains[0].curves[0], "e6");
        assert_eq!(chains[1].curves, ["F2", "e1", "e2", "e3", "e4"]);
        let inv = z.invariants();
        assert_eq!((inv.blowups, inv.b2, inv.euler, inv.k2), (22, 23, 25, -13));
    }

    #[test]
    fn structure_rejects_bad_roots() {
        let pi = &enumerate_pencils()[0];
        let (y, _) = build_y(pi).unwrap();
        let mut a = hand_assignment();
        a.cluster_one[0] = CenterSpec::new("e1", &["F1", "E5"]);
        assert!(a.check_structure(&y).is_err());
        let mut a = hand_assignment();
        a.bullets[0] = CenterSpec::new("e8", &["E5", "E7"]);
        assert!(a.check_structure(&y).is_err());
        let mut a = hand_assignment();
        a.bullets[2] = CenterSpec::node("e10", "F3");
        assert!(a.check_structure(&y).is_err());
    }

    #[test]
    fn search_finds_exactly_the_hand_placement() {
        for pi in enumerate_pencils() {
            let (y, _) = build_y(&pi).unwrap();
            let all = enumerate_z_centers(&y, &target_templates());
            assert_eq!(all.len(), 1);
            let z1 = build_z(&y, &all[0].assignment).unwrap();
            let z2 = build_z(&y, &hand_assignment()).unwrap();
            for c in z1.curve_names() {
                assert_eq!(z1.curve(c).unwrap().class, z2.curve(c).unwrap().class, "{c}");
            }
        }
    }

    #[test]
    fn templates_are_wahl() {
        let t = target_templates();
        assert_eq!(t[0].wahl().map(|w| (w.n, w.a)), Some((110, 67)));
        assert_eq!(t[1].wahl().map(|w| (w.n, w.a)), Some((6, 1)));
    }
}

