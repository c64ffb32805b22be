//! The pencil of cubics spanned by three lines `L1 + L2 + L3` and a line
//! plus conic `A + B`, its nine base-point blow-ups, and the resulting
//! elliptic fibration `Y`.
//!
//! The incidence data of the pencil is recovered by search: every base point
//! carries a tower of infinitely-near centers of fixed depth, each center
//! lying on some of the five plane curves. A candidate survives when the
//! blown-up surface is an elliptic fibration with an `I_7` fiber made of the
//! lines and intermediate exceptionals, an `I_2` fiber `A + B`, and five
//! sections; the labelling of the intermediate exceptionals must then realize
//! the adjacencies that the chain `C(110,67)` reads off `Y`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::surface::{CenterSpec, DivisorClass, MarkedSurface, SurfaceError};

pub const LINES: [&str; 3] = ["L1", "L2", "L3"];
pub const MEMBERS: [&str; 2] = ["A", "B"];
/// Base point, tower depth and section label.
pub const BASE_POINTS: [(&str, usize, &str); 5] =
    [("p", 1, "E5"), ("q", 3, "E6"), ("r", 1, "E7"), ("s", 2, "E8"), ("t", 2, "E9")];
pub const INTERMEDIATE_LABELS: [&str; 4] = ["E1", "E2", "E3", "E4"];
pub const NODAL_FIBERS: [&str; 3] = ["F1", "F2", "F3"];

/// Pairs of `Y`-curves that must meet for the chains of `Z` to exist:
/// consecutive `Y`-curves of `C(110,67)`, plus the line carrying `r`.
pub const REQUIRED_MEETINGS: [(&str, &str); 10] = [
    ("E7", "F1"),
    ("F1", "E5"),
    ("E5", "L3"),
    ("L3", "E1"),
    ("E1", "L1"),
    ("L1", "E2"),
    ("E2", "E3"),
    ("E3", "E6"),
    ("E6", "B"),
    ("E7", "L1"),
];

pub const PENCIL_SEARCH_SPACE: &str = "base points p,q,r,s,t with tower depths 1,3,1,2,2; \
     each base point on one or two of L1,L2,L3 and on a nonempty subset of {A,B}; \
     each infinitely-near center on the previous exceptional and any subset of the plane \
     curves through the previous center; intermediate exceptionals labelled E1..E4 in all \
     orders increasing along each tower";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PencilError {
    #[error("expected base points p,q,r,s,t with depths 1,3,1,2,2: {0}")]
    Shape(String),
    #[error("blow-up {label:?} is invalid: {source}")]
    Center { label: String, source: SurfaceError },
    #[error("fibration check {0:?} failed")]
    Fibration(String),
    #[error("required meeting {a}·{b} >= 1 fails (pairing {pairing})")]
    MissingMeeting { a: String, b: String, pairing: i64 },
}

/// One base point and its tower of infinitely-near centers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TowerIncidence {
    pub point: String,
    /// Plane curves through each center, the base point itself first.
    pub levels: Vec<Vec<String>>,
    /// Exceptional label of each level; the last one is the section.
    pub labels: Vec<String>,
}

impl TowerIncidence {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn lines(&self) -> Vec<&str> {
        self.levels[0].iter().map(String::as_str).filter(|c| LINES.contains(c)).collect()
    }

    pub fn members(&self) -> Vec<&str> {
        self.levels[0].iter().map(String::as_str).filter(|c| MEMBERS.contains(c)).collect()
    }

    pub fn section(&self) -> &str {
        self.labels.last().expect("nonempty tower")
    }

    pub fn intermediates(&self) -> &[String] {
        &self.labels[..self.labels.len() - 1]
    }

    fn centers(&self) -> Vec<CenterSpec> {
        (0..self.depth())
            .map(|k| {
                let mut on = Vec::new();
                if k > 0 {
                    on.push(self.labels[k - 1].clone());
                }
                on.extend(self.levels[k].iter().cloned());
                CenterSpec { label: self.labels[k].clone(), simple_on: on, node_of: None }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PencilIncidence {
    /// Towers in the order p, q, r, s, t.
    pub towers: Vec<TowerIncidence>,
}

fn label_index(label: &str) -> usize {
    label.trim_start_matches(|c: char| !c.is_ascii_digit()).parse().unwrap_or(usize::MAX)
}

impl PencilIncidence {
    /// Blow-up centers in label order, which respects every tower.
    pub fn centers(&self) -> Vec<CenterSpec> {
        let mut cs: Vec<CenterSpec> = self.towers.iter().flat_map(TowerIncidence::centers).collect();
        cs.sort_by_key(|c| label_index(&c.label));
        cs
    }

    /// Recovers the towers from blow-up centers on the plane curves.
    pub fn from_centers(centers: &[CenterSpec]) -> Result<Self, PencilError> {
        let labels: Vec<&str> = centers.iter().map(|c| c.label.as_str()).collect();
        let mut towers = Vec::new();
        for root in centers {
            if root.simple_on.iter().any(|c| labels.contains(&c.as_str())) {
                continue;
            }
            if root.node_of.is_some() {
                return Err(PencilError::Shape(format!("{} is a node center", root.label)));
            }
            let mut levels = vec![root.simple_on.clone()];
            let mut tower_labels = vec![root.label.clone()];
            loop {
                let prev = tower_labels.last().unwrap();
                let children: Vec<&CenterSpec> =
                    centers.iter().filter(|c| c.simple_on.contains(prev)).collect();
                match children.as_slice() {
                    [] => break,
                    [child] => {
                        levels.push(child.simple_on.iter().filter(|c| *c != prev).cloned().collect());
                        tower_labels.push(child.label.clone());
                    }
                    _ => return Err(PencilError::Shape(format!("{prev} has several infinitely-near centers"))),
                }
            }
            let section = tower_labels.last().unwrap().clone();
            let point = BASE_POINTS
                .iter()
                .find(|(_, _, s)| *s == section)
                .map(|(p, _, _)| p.to_string())
                .ok_or_else(|| PencilError::Shape(format!("tower ending in {section} is not a section E5..E9")))?;
            towers.push(TowerIncidence { point, levels, labels: tower_labels });
        }
        towers.sort_by_key(|t| label_index(t.section()));
        let pi = PencilIncidence { towers };
        pi.check_shape()?;
        Ok(pi)
    }

    pub fn check_shape(&self) -> Result<(), PencilError> {
        if self.towers.len() != BASE_POINTS.len() {
            return Err(PencilError::Shape(format!("{} towers", self.towers.len())));
        }
        let mut all = BTreeSet::new();
        for (t, (point, depth, section)) in self.towers.iter().zip(BASE_POINTS) {
            if t.point != point || t.depth() != depth || t.section() != section || t.labels.len() != depth {
                return Err(PencilError::Shape(format!(
                    "tower {} has depth {} ending in {}",
                    t.point,
                    t.depth(),
                    t.section()
                )));
            }
            for w in t.labels.windows(2) {
                if label_index(&w[0]) >= label_index(&w[1]) {
                    return Err(PencilError::Shape(format!("labels of {} are not increasing", t.point)));
                }
            }
            for level in &t.levels {
                if let Some(c) = level.iter().find(|c| !LINES.contains(&c.as_str()) && !MEMBERS.contains(&c.as_str())) {
                    return Err(PencilError::Shape(format!("{c} is not a plane curve of the pencil")));
                }
            }
            all.extend(t.labels.iter().cloned());
        }
        let expected: BTreeSet<String> = (1..=9).map(|i| format!("E{i}")).collect();
        if all != expected {
            return Err(PencilError::Shape("labels are not exactly E1..E9".into()));
        }
        Ok(())
    }
}

/// The plane with `L1, L2, L3, A` (lines) and `B` (conic).
pub fn pencil_plane() -> MarkedSurface {
    let mut s = MarkedSurface::projective_plane();
    for l in LINES {
        s = s.add_plane_curve(l, 1).expect("fresh name");
    }
    s = s.add_plane_curve("A", 1).expect("fresh name");
    s.add_plane_curve("B", 2).expect("fresh name")
}

/// Anticanonical class `3H - e_1 - ... - e_N`.
pub fn fiber_class(s: &MarkedSurface) -> DivisorClass {
    -&s.canonical_class()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationReport {
    pub fiber_class: DivisorClass,
    pub i7: Vec<String>,
    pub i2: Vec<String>,
    pub sections: Vec<String>,
    pub nodal: Vec<String>,
    /// `(fiber, Euler number)` for each singular fiber.
    pub euler_budget: Vec<(String, i64)>,
    pub euler_surface: i64,
    pub checks: Vec<FibrationCheck>,
}

impl FibrationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&FibrationCheck> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn compute(y: &MarkedSurface, pi: &PencilIncidence) -> FibrationReport {
        let f = fiber_class(y);
        let mut i7: Vec<String> = LINES.iter().map(|s| s.to_string()).collect();
        i7.extend(pi.towers.iter().flat_map(|t| t.intermediates().iter().cloned()));
        let i2: Vec<String> = MEMBERS.iter().map(|s| s.to_string()).collect();
        let sections: Vec<String> = pi.towers.iter().map(|t| t.section().to_string()).collect();
        let nodal: Vec<String> =
            NODAL_FIBERS.iter().filter(|n| y.has_curve(n)).map(|s| s.to_string()).collect();
        let mut checks = Vec::new();
        let mut push = |name: &str, pass: bool, detail: String| {
            checks.push(FibrationCheck { name: name.into(), pass, detail });
        };

        push("fiber_square", f.square() == 0, format!("F^2 = {}", f.square()));
        let k = y.canonical_class();
        push("canonical_is_minus_fiber", (&k + &f).normalized() == DivisorClass::zero(0), "K + F = 0".into());

        let class = |n: &str| y.curve(n).map(|c| c.class.clone()).ok();
        let sum = |names: &[String]| -> Option<DivisorClass> {
            names.iter().try_fold(DivisorClass::zero(y.n_blowups()), |acc, n| Some(&acc + &class(n)?))
        };
        let same = |a: Option<DivisorClass>| a.map(|a| a.normalized() == f.normalized()).unwrap_or(false);

        let (cycle_ok, cycle_detail) = cycle_check(y, &i7);
        push("i7_cycle", cycle_ok && i7.len() == 7, cycle_detail);
        push("i7_class_sum", same(sum(&i7)), "sum of I7 components equals F".into());

        let i2_ok = i2.iter().all(|n| y.self_int(n).ok() == Some(-2) && y.genus_a(n).ok() == Some(0))
            && y.pair("A", "B").ok() == Some(2);
        push("i2_fiber", i2_ok, format!("A^2, B^2 = -2 and A·B = {}", y.pair("A", "B").unwrap_or(0)));
        push("i2_class_sum", same(sum(&i2)), "A + B equals F".into());

        let cross_zero = i7.iter().all(|a| i2.iter().all(|b| y.pair(a, b).ok() == Some(0)));
        push("fibers_disjoint", cross_zero, "I7 and I2 components do not meet".into());

        let mut sec_ok = sections.len() == 5;
        for (i, a) in sections.iter().enumerate() {
            let ca = class(a);
            sec_ok &= y.self_int(a).ok() == Some(-1) && ca.map(|c| c.dot(&f)) == Some(1);
            for b in &sections[i + 1..] {
                sec_ok &= y.pair(a, b).ok() == Some(0);
            }
        }
        push("sections", sec_ok, format!("{} disjoint (-1)-sections with S·F = 1", sections.len()));

        let mut nodal_ok = nodal.len() == NODAL_FIBERS.len();
        for n in &nodal {
            let rec = y.curve(n).expect("present");
            nodal_ok &= rec.class.normalized() == f.normalized() && rec.node_budget == 1;
            nodal_ok &= sections.iter().all(|s| y.pair(n, s).ok() == Some(1));
        }
        push("nodal_fibers", nodal_ok, format!("{} nodal fibers of class F, one node each", nodal.len()));

        let mut euler_budget = vec![("I7".to_string(), i7.len() as i64), ("I2".to_string(), 2)];
        euler_budget.extend(nodal.iter().map(|n| (n.clone(), 1)));
        let total: i64 = euler_budget.iter().map(|(_, e)| e).sum();
        let euler_surface = y.invariants().euler;
        push("euler_budget", total == euler_surface, format!("{total} = e(Y) = {euler_surface}"));

        FibrationReport { fiber_class: f, i7, i2, sections, nodal, euler_budget, euler_surface, checks }
    }
}

/// Are the curves rational (-2)-curves forming a single cycle?
fn cycle_check(y: &MarkedSurface, names: &[String]) -> (bool, String) {
    for n in names {
        if y.self_int(n).ok() != Some(-2) || y.genus_a(n).ok() != Some(0) {
            return (false, format!("{n} is not a rational (-2)-curve"));
        }
    }
    let k = names.len();
    let mut adj = vec![Vec::new(); k];
    for i in 0..k {
        for j in i + 1..k {
            match y.pair(&names[i], &names[j]).unwrap_or(-1) {
                0 => {}
                1 => {
                    adj[i].push(j);
                    adj[j].push(i);
                }
                p => return (false, format!("{}·{} = {p}", names[i], names[j])),
            }
        }
    }
    if let Some(i) = (0..k).find(|&i| adj[i].len() != 2) {
        return (false, format!("{} has {} neighbours", names[i], adj[i].len()));
    }
    // Walk the cycle from the first curve.
    let mut order = vec![0usize];
    let mut prev = usize::MAX;
    let mut cur = 0;
    loop {
        let next = if adj[cur][0] != prev { adj[cur][0] } else { adj[cur][1] };
        if next == 0 {
            break;
        }
        order.push(next);
        (prev, cur) = (cur, next);
        if order.len() > k {
            break;
        }
    }
    let walk: Vec<&str> = order.iter().map(|&i| names[i].as_str()).collect();
    (order.len() == k, format!("cycle {}", walk.join("-")))
}

/// Builds `Y`: the nine blow-ups followed by the three nodal fibers.
pub fn build_y(pi: &PencilIncidence) -> Result<(MarkedSurface, FibrationReport), PencilError> {
    pi.check_shape()?;
    let mut y = pencil_plane();
    for c in pi.centers() {
        y = y.blow_up(&c).map_err(|source| PencilError::Center { label: c.label.clone(), source })?;
    }
    let f = fiber_class(&y);
    for n in NODAL_FIBERS {
        y = y
            .add_class_curve(n, f.clone(), 1)
            .map_err(|source| PencilError::Center { label: n.to_string(), source })?;
    }
    let report = FibrationReport::compute(&y, pi);
    if let Some(c) = report.first_failure() {
        return Err(PencilError::Fibration(c.name.clone()));
    }
    Ok((y, report))
}

pub fn check_required_meetings(y: &MarkedSurface) -> Result<(), PencilError> {
    for (a, b) in REQUIRED_MEETINGS {
        let pairing = y.pair(a, b).unwrap_or(0);
        if pairing < 1 {
            return Err(PencilError::MissingMeeting { a: a.into(), b: b.into(), pairing });
        }
    }
    Ok(())
}

fn subsets<T: Clone>(items: &[T], min: usize, max: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << items.len()) {
        let n = mask.count_ones() as usize;
        if n >= min && n <= max {
            out.push(items.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, x)| x.clone()).collect());
        }
    }
    out
}

/// All level sequences for a tower of the given depth.
fn tower_options(depth: usize) -> Vec<Vec<Vec<String>>> {
    let lines: Vec<String> = LINES.iter().map(|s| s.to_string()).collect();
    let members: Vec<String> = MEMBERS.iter().map(|s| s.to_string()).collect();
    let mut out: Vec<Vec<Vec<String>>> = Vec::new();
    for ls in subsets(&lines, 1, 2) {
        for ms in subsets(&members, 1, 2) {
            out.push(vec![ls.iter().chain(&ms).cloned().collect()]);
        }
    }
    for _ in 1..depth {
        out = out
            .into_iter()
            .flat_map(|levels| {
                let last = levels.last().unwrap().clone();
                subsets(&last, 0, last.len()).into_iter().map(move |next| {
                    let mut l = levels.clone();
                    l.push(next);
                    l
                })
            })
            .collect();
    }
    out
}

/// The fiber relations `A + B = F` and `L1 + L2 + L3 + (intermediates) = F`
/// restricted to the exceptional coordinates of one finished tower.
fn tower_coefficients_ok(s: &MarkedSurface, temp_labels: &[String]) -> bool {
    let d = temp_labels.len();
    for label in temp_labels {
        let idx = s.exceptional_labels().iter().position(|l| l == label).unwrap() + 1;
        let coeff = |n: &str| s.curve(n).unwrap().class.coefficient(idx);
        let members: i64 = MEMBERS.iter().map(|m| coeff(m)).sum();
        let mut lines: i64 = LINES.iter().map(|m| coeff(m)).sum();
        for inter in &temp_labels[..d - 1] {
            lines += coeff(inter);
        }
        if members != -1 || lines != -1 {
            return false;
        }
    }
    true
}

/// All pencil incidences compatible with the fibration and the chains.
pub fn enumerate_pencils() -> Vec<PencilIncidence> {
    let options: Vec<Vec<Vec<Vec<String>>>> = BASE_POINTS.iter().map(|(_, d, _)| tower_options(*d)).collect();
    let mut found: Vec<Vec<Vec<Vec<String>>>> = Vec::new();
    let mut chosen = Vec::new();
    search_towers(&pencil_plane(), &options, &mut chosen, &mut found);

    let mut out = BTreeSet::new();
    for levels in found {
        for pi in labelings(&levels) {
            let Ok((y, _)) = build_y(&pi) else { continue };
            if check_required_meetings(&y).is_ok() {
                out.insert(pi);
            }
        }
    }
    out.into_iter().collect()
}

fn search_towers(
    s: &MarkedSurface,
    options: &[Vec<Vec<Vec<String>>>],
    chosen: &mut Vec<Vec<Vec<String>>>,
    found: &mut Vec<Vec<Vec<Vec<String>>>>,
) {
    let t = chosen.len();
    if t == options.len() {
        found.push(chosen.clone());
        return;
    }
    let point = BASE_POINTS[t].0;
    'opt: for levels in &options[t] {
        let temp: Vec<String> = (0..levels.len()).map(|k| format!("{point}{}", k + 1)).collect();
        let mut cur = s.clone();
        for (k, level) in levels.iter().enumerate() {
            let mut on = Vec::new();
            if k > 0 {
                on.push(temp[k - 1].clone());
            }
            on.extend(level.iter().cloned());
            match cur.blow_up(&CenterSpec { label: temp[k].clone(), simple_on: on, node_of: None }) {
                Ok(next) => cur = next,
                Err(_) => continue 'opt,
            }
        }
        if !tower_coefficients_ok(&cur, &temp) {
            continue;
        }
        chosen.push(levels.clone());
        search_towers(&cur, options, chosen, found);
        chosen.pop();
    }
}

/// Every assignment of `E1..E4` to the intermediate exceptionals that
/// increases along each tower.
fn labelings(levels: &[Vec<Vec<String>>]) -> Vec<PencilIncidence> {
    let slots: Vec<(usize, usize)> = levels
        .iter()
        .enumerate()
        .flat_map(|(t, l)| (0..l.len() - 1).map(move |k| (t, k)))
        .collect();
    if slots.len() != INTERMEDIATE_LABELS.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for perm in permutations(INTERMEDIATE_LABELS.len()) {
        let mut towers: Vec<TowerIncidence> = levels
            .iter()
            .zip(BASE_POINTS)
            .map(|(l, (point, _, section))| TowerIncidence {
                point: point.to_string(),
                levels: l.clone(),
                labels: {
                    let mut v = vec![String::new(); l.len()];
                    v[l.len() - 1] = section.to_string();
                    v
                },
            })
            .collect();
        for (&(t, k), &i) in slots.iter().zip(&perm) {
            towers[t].labels[k] = INTERMEDIATE_LABELS[i].to_string();
        }
        let pi = PencilIncidence { towers };
        if pi.check_shape().is_ok() {
            out.push(pi);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(levels: &[&[&str]]) -> Vec<Vec<String>> {
        levels.iter().map(|l| l.iter().map(|s| s.to_string()).collect()).collect()
    }

    fn tower(point: &str, levels: &[&[&str]], labels: &[&str]) -> TowerIncidence {
        TowerIncidence {
            point: point.into(),
            levels: lv(levels),
            labels: labels.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// One reconstruction worked out by hand from the fiber structure.
    pub(crate) fn hand_pencil() -> PencilIncidence {
        PencilIncidence {
            towers: vec![
                tower("p", &[&["L3", "B"]], &["E5"]),
                tower("q", &[&["L1", "L2", "B"], &["L2", "B"], &["B"]], &["E2", "E3", "E6"]),
                tower("r", &[&["L1", "A"]], &["E7"]),
                tower("s", &[&["L1", "L3", "B"], &["B"]], &["E1", "E8"]),
                tower("t", &[&["L2", "L3", "A"], &["A"]], &["E4", "E9"]),
            ],
        }
    }

    #[test]
    fn hand_pencil_is_a_fibration() {
        let (y, report) = build_y(&hand_pencil()).unwrap();
        assert!(report.all_pass(), "{:?}", report.first_failure());
        let inv = y.invariants();
        assert_eq!((inv.euler, inv.k2), (12, 0));
        for s in ["E5", "E6", "E7", "E8", "E9"] {
            assert_eq!(y.self_int(s).unwrap(), -1);
        }
        let k = y.canonical_class();
        assert_eq!((&k + &report.fiber_class).normalized(), DivisorClass::zero(0));
        check_required_meetings(&y).unwrap();
    }

    #[test]
    fn centers_roundtrip() {
        let pi = hand_pencil();
        let cs = pi.centers();
        assert_eq!(cs.iter().map(|c| c.label.as_str()).collect::<Vec<_>>(), (1..=9).map(|i| format!("E{i}")).collect::<Vec<_>>());
        assert_eq!(PencilIncidence::from_centers(&cs).unwrap(), pi);
    }

    #[test]
    fn split_tower_is_rejected() {
        // q's second center continues along L3 instead of a line through q.
        let mut pi = hand_pencil();
        pi.towers[1].levels[1] = vec!["L3".into(), "B".into()];
        assert!(build_y(&pi).is_err());
        // q on A + B at once breaks the member class sum.
        let mut pi = hand_pencil();
        pi.towers[1].levels[0].push("A".into());
        assert!(build_y(&pi).is_err());
    }

    #[test]
    fn wrong_depths_rejected() {
        let mut pi = hand_pencil();
        pi.towers.swap(0, 1);
        assert!(matches!(build_y(&pi), Err(PencilError::Shape(_))));
    }

    #[test]
    fn enumeration_finds_the_two_labellings() {
        let all = enumerate_pencils();
        assert_eq!(all.len(), 2);
        assert!(all.contains(&hand_pencil()));
        // The two solutions differ by exchanging the roles of s and t.
        let (a, b) = (&all[0].towers, &all[1].towers);
        assert_eq!(a[..3], b[..3]);
        assert_eq!(a[3].levels, b[4].levels);
        assert_eq!(a[4].levels, b[3].levels);
    }

    #[test]
    fn tower_option_counts() {
        assert_eq!(tower_options(1).len(), 18);
        assert!(tower_options(3).len() > tower_options(2).len());
    }
}

