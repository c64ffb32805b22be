//! Rational blow-down bookkeeping.
//!
//! A chain of rational curves whose self-intersections form a Wahl string
//! can be replaced by a rational homology ball with the same lens-space
//! boundary. This module validates such chains inside a `MarkedSurface`,
//! computes the numerical invariants of the resulting 4-manifold, and
//! presents its first homology by meridians of the chain curves:
//!
//! * one relation per lattice basis class `β ∈ {H, e_1, ..., e_N}`, with
//!   entries `β·C_j` (the boundary map from `H_2` of the closed surface);
//! * for each glued ball with parameters `(n, a)`, the relation
//!   `n·μ_1` on the meridian of the first curve of its chain.
//!
//! Chains that are removed without gluing a ball contribute generators but no
//! ball relation.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hj::{self, HjChain, HjError, LensBoundary, MeridianData, WahlParams};
use crate::surface::{DivisorClass, MarkedSurface, SurfaceError};
use crate::zlinalg::{self, AbelianGroup, GroupElement, IntMatrix, LinalgError};

/// Ordered curves forming a linear chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainSpec {
    pub name: String,
    pub curves: Vec<String>,
}

impl ChainSpec {
    pub fn new(name: impl Into<String>, curves: &[&str]) -> Self {
        ChainSpec { name: name.into(), curves: curves.iter().map(|c| c.to_string()).collect() }
    }

    pub fn reversed(&self) -> Self {
        ChainSpec { name: self.name.clone(), curves: self.curves.iter().rev().cloned().collect() }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("chain {chain:?} is empty")]
    Empty { chain: String },
    #[error("chain {chain:?} lists {curve:?} twice")]
    DuplicateCurve { chain: String, curve: String },
    #[error("chain {chain:?}: {source}")]
    Surface { chain: String, source: SurfaceError },
    #[error("chain {chain:?}: {curve:?} has arithmetic genus {genus}, expected a rational curve")]
    NotRational { chain: String, curve: String, genus: i64 },
    #[error("chain {chain:?}: {curve:?} has self-intersection {self_int}, need at most -2")]
    WeightTooSmall { chain: String, curve: String, self_int: i64 },
    #[error("chain {chain:?}: consecutive curves {a:?} and {b:?} pair to {pairing}, expected 1")]
    NotAdjacent { chain: String, a: String, b: String, pairing: i64 },
    #[error("chain {chain:?}: non-consecutive curves {a:?} and {b:?} pair to {pairing}, expected 0")]
    UnexpectedIntersection { chain: String, a: String, b: String, pairing: i64 },
    #[error("chain {chain:?}: string {string} has value {p}/{q}, not a Wahl chain")]
    NotWahl { chain: String, string: HjChain, p: i64, q: i64 },
    #[error("chain {chain:?}: {source}")]
    Arithmetic { chain: String, source: HjError },
}

impl ChainError {
    /// Which validation check failed: 1 genus, 2 weights, 3 linearity,
    /// 4 Wahl recognition; 0 for structural errors.
    pub fn check_number(&self) -> u8 {
        match self {
            ChainError::NotRational { .. } => 1,
            ChainError::WeightTooSmall { .. } => 2,
            ChainError::NotAdjacent { .. } | ChainError::UnexpectedIntersection { .. } => 3,
            ChainError::NotWahl { .. } | ChainError::Arithmetic { .. } => 4,
            _ => 0,
        }
    }
}

fn surface_err(chain: &ChainSpec) -> impl Fn(SurfaceError) -> ChainError + '_ {
    move |source| ChainError::Surface { chain: chain.name.clone(), source }
}

/// Checks genus, weights and linear shape; returns the HJ string.
pub fn chain_string(s: &MarkedSurface, c: &ChainSpec) -> Result<HjChain, ChainError> {
    let name = || c.name.clone();
    if c.curves.is_empty() {
        return Err(ChainError::Empty { chain: name() });
    }
    for (i, x) in c.curves.iter().enumerate() {
        if c.curves[..i].contains(x) {
            return Err(ChainError::DuplicateCurve { chain: name(), curve: x.clone() });
        }
        s.curve(x).map_err(surface_err(c))?;
    }
    for x in &c.curves {
        let genus = s.genus_a(x).map_err(surface_err(c))?;
        if genus != 0 {
            return Err(ChainError::NotRational { chain: name(), curve: x.clone(), genus });
        }
    }
    let mut weights = Vec::with_capacity(c.curves.len());
    for x in &c.curves {
        let self_int = s.self_int(x).map_err(surface_err(c))?;
        if self_int > -2 {
            return Err(ChainError::WeightTooSmall { chain: name(), curve: x.clone(), self_int });
        }
        weights.push(-self_int);
    }
    for i in 0..c.curves.len() {
        for j in i + 1..c.curves.len() {
            let (a, b) = (&c.curves[i], &c.curves[j]);
            let pairing = s.pair(a, b).map_err(surface_err(c))?;
            if j == i + 1 && pairing != 1 {
                return Err(ChainError::NotAdjacent { chain: name(), a: a.clone(), b: b.clone(), pairing });
            }
            if j > i + 1 && pairing != 0 {
                return Err(ChainError::UnexpectedIntersection {
                    chain: name(),
                    a: a.clone(),
                    b: b.clone(),
                    pairing,
                });
            }
        }
    }
    HjChain::new(weights).map_err(|source| ChainError::Arithmetic { chain: name(), source })
}

pub fn validate_chain(s: &MarkedSurface, c: &ChainSpec) -> Result<WahlParams, ChainError> {
    let string = chain_string(s, c)?;
    match hj::recognize_wahl(&string) {
        Some(w) => Ok(w),
        None => {
            let f = hj::hj_value(&string)
                .map_err(|source| ChainError::Arithmetic { chain: c.name.clone(), source })?;
            Err(ChainError::NotWahl { chain: c.name.clone(), string, p: f.p, q: f.q })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Disjointness {
    Disjoint,
    SharedCurve { first: String, second: String, curve: String },
    Crossing { first: String, a: String, second: String, b: String, pairing: i64 },
}

impl Disjointness {
    pub fn is_disjoint(&self) -> bool {
        matches!(self, Disjointness::Disjoint)
    }
}

impl fmt::Display for Disjointness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Disjointness::Disjoint => f.write_str("disjoint"),
            Disjointness::SharedCurve { first, second, curve } => {
                write!(f, "chains {first:?} and {second:?} share {curve:?}")
            }
            Disjointness::Crossing { first, a, second, b, pairing } => {
                write!(f, "{a:?} in {first:?} meets {b:?} in {second:?} with pairing {pairing}")
            }
        }
    }
}

/// First cross-chain violation, if any. Unknown curves count as non-meeting;
/// callers validate chains first.
pub fn chains_disjoint(s: &MarkedSurface, chains: &[ChainSpec]) -> Disjointness {
    for (i, c1) in chains.iter().enumerate() {
        for c2 in &chains[i + 1..] {
            for a in &c1.curves {
                for b in &c2.curves {
                    if a == b {
                        return Disjointness::SharedCurve {
                            first: c1.name.clone(),
                            second: c2.name.clone(),
                            curve: a.clone(),
                        };
                    }
                    let pairing = s.pair(a, b).unwrap_or(0);
                    if pairing != 0 {
                        return Disjointness::Crossing {
                            first: c1.name.clone(),
                            a: a.clone(),
                            second: c2.name.clone(),
                            b: b.clone(),
                            pairing,
                        };
                    }
                }
            }
        }
    }
    Disjointness::Disjoint
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourManifoldInvariants {
    pub euler: i64,
    pub signature: i64,
    pub b2: i64,
    pub b2_plus: i64,
    pub k2: i64,
    pub chi_h: i64,
}

impl fmt::Display for FourManifoldInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "e={} sigma={} b2={} b2+={} K^2={} chi_h={}",
            self.euler, self.signature, self.b2, self.b2_plus, self.k2, self.chi_h
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlowdownError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("chains are not disjoint: {0}")]
    NotDisjoint(Disjointness),
    #[error("(e + sigma)/4 = ({euler} + {signature})/4 is not an integer")]
    NonIntegralChi { euler: i64, signature: i64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn validate_all(s: &MarkedSurface, chains: &[ChainSpec]) -> Result<Vec<WahlParams>, BlowdownError> {
    let params = chains.iter().map(|c| validate_chain(s, c)).collect::<Result<Vec<_>, _>>()?;
    let d = chains_disjoint(s, chains);
    if !d.is_disjoint() {
        return Err(BlowdownError::NotDisjoint(d));
    }
    Ok(params)
}

/// Invariants after replacing each chain by a rational ball.
pub fn blowdown_invariants(
    s: &MarkedSurface,
    chains: &[ChainSpec],
) -> Result<FourManifoldInvariants, BlowdownError> {
    validate_all(s, chains)?;
    let removed: i64 = chains.iter().map(|c| c.curves.len() as i64).sum();
    let base = s.invariants();
    let euler = base.euler - removed;
    let signature = base.signature + removed;
    let b2 = base.b2 - removed;
    if (euler + signature) % 4 != 0 {
        return Err(BlowdownError::NonIntegralChi { euler, signature });
    }
    Ok(FourManifoldInvariants {
        euler,
        signature,
        b2,
        b2_plus: (b2 + signature) / 2,
        k2: 2 * euler + 3 * signature,
        chi_h: (euler + signature) / 4,
    })
}

/// A surface with chains either blown down (ball glued) or only excised.
#[derive(Clone, Debug)]
pub struct BlowdownConfig {
    pub surface: MarkedSurface,
    pub blowdown_chains: Vec<ChainSpec>,
    pub excised_chains: Vec<ChainSpec>,
}

impl BlowdownConfig {
    pub fn new(surface: MarkedSurface, blowdown_chains: Vec<ChainSpec>, excised_chains: Vec<ChainSpec>) -> Self {
        BlowdownConfig { surface, blowdown_chains, excised_chains }
    }

    /// Blown-down chains first, then excised ones.
    pub fn all_chains(&self) -> Vec<ChainSpec> {
        self.blowdown_chains.iter().chain(&self.excised_chains).cloned().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainData {
    pub name: String,
    pub curves: Vec<String>,
    pub weights: HjChain,
    pub wahl: WahlParams,
    pub meridians: MeridianData,
    pub glued: bool,
    /// Column of the chain's first meridian.
    pub first_generator: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Presentation {
    /// `chain:curve` for each meridian, in column order.
    pub generators: Vec<String>,
    pub relations: IntMatrix,
    /// Number of leading rows coming from lattice basis classes.
    pub basis_rows: usize,
    pub chains: Vec<ChainData>,
}

impl H1Presentation {
    pub fn group(&self) -> AbelianGroup {
        zlinalg::cokernel(&self.relations)
    }

    pub fn generator_index(&self, chain: &str, curve: &str) -> Option<usize> {
        let c = self.chains.iter().find(|c| c.name == chain)?;
        let pos = c.curves.iter().position(|x| x == curve)?;
        Some(c.first_generator + pos)
    }

    /// Image of an integer combination of meridians.
    pub fn class_of(&self, v: &[i64]) -> Result<GroupElement, LinalgError> {
        zlinalg::class_of_i64(v, &self.relations)
    }

    /// Image of a single meridian.
    pub fn meridian_class(&self, chain: &str, curve: &str) -> Option<GroupElement> {
        let idx = self.generator_index(chain, curve)?;
        let mut v = vec![0; self.generators.len()];
        v[idx] = 1;
        self.class_of(&v).ok()
    }

    /// The same presentation without any ball relations.
    pub fn complement_only(&self) -> H1Presentation {
        let rows: Vec<Vec<i64>> = (0..self.basis_rows)
            .map(|i| self.relations.row(i).iter().map(|x| i64::try_from(x).expect("small")).collect())
            .collect();
        let mut chains = self.chains.clone();
        for c in &mut chains {
            c.glued = false;
        }
        H1Presentation {
            generators: self.generators.clone(),
            relations: IntMatrix::from_rows(self.generators.len(), &rows).expect("shape"),
            basis_rows: self.basis_rows,
            chains,
        }
    }
}

pub fn h1_presentation(cfg: &BlowdownConfig) -> Result<H1Presentation, BlowdownError> {
    let s = &cfg.surface;
    let all = cfg.all_chains();
    let params = validate_all(s, &all)?;

    let mut generators = Vec::new();
    let mut chains = Vec::new();
    for (k, (c, w)) in all.iter().zip(&params).enumerate() {
        let weights = chain_string(s, c)?;
        let meridians = hj::meridian_coefficients(&weights)
            .map_err(|source| ChainError::Arithmetic { chain: c.name.clone(), source })?;
        chains.push(ChainData {
            name: c.name.clone(),
            curves: c.curves.clone(),
            weights,
            wahl: *w,
            meridians,
            glued: k < cfg.blowdown_chains.len(),
            first_generator: generators.len(),
        });
        generators.extend(c.curves.iter().map(|x| format!("{}:{}", c.name, x)));
    }

    let cols = generators.len();
    let mut rows = Vec::new();
    for label in s.basis_labels() {
        let beta = s.basis_class(&label).expect("basis label");
        let row: Vec<i64> = all
            .iter()
            .flat_map(|c| c.curves.iter())
            .map(|x| beta.dot(&s.curve(x).expect("validated").class))
            .collect();
        rows.push(row);
    }
    let basis_rows = rows.len();
    for c in chains.iter().filter(|c| c.glued) {
        let mut row = vec![0; cols];
        row[c.first_generator] = c.wahl.n;
        rows.push(row);
    }
    Ok(H1Presentation {
        generators,
        relations: IntMatrix::from_rows(cols, &rows)?,
        basis_rows,
        chains,
    })
}

pub fn h1(cfg: &BlowdownConfig) -> Result<AbelianGroup, BlowdownError> {
    Ok(h1_presentation(cfg)?.group())
}

pub fn boundary_lens(s: &MarkedSurface, chain: &ChainSpec) -> Result<LensBoundary, ChainError> {
    validate_chain(s, chain)?;
    let string = chain_string(s, chain)?;
    hj::lens_boundary(&string).map_err(|source| ChainError::Arithmetic { chain: chain.name.clone(), source })
}

/// `Σ_j (D·C_j) c_j mod p`: the class in `H_1` of the chain boundary hit by
/// a class `D`, measured against the first-curve meridian.
pub fn boundary_image(s: &MarkedSurface, d: &DivisorClass, chain: &ChainSpec) -> Result<i64, ChainError> {
    validate_chain(s, chain)?;
    let string = chain_string(s, chain)?;
    let m = hj::meridian_coefficients(&string)
        .map_err(|source| ChainError::Arithmetic { chain: chain.name.clone(), source })?;
    let mut acc = BigInt::from(0);
    for (x, &c) in chain.curves.iter().zip(&m.coefficients) {
        let pairing = d.dot(&s.curve(x).map_err(surface_err(chain))?.class);
        acc += BigInt::from(pairing) * c;
    }
    let p = BigInt::from(m.order);
    let r = ((acc % &p) + &p) % &p;
    Ok(i64::try_from(r).expect("residue below p"))
}

/// Residue as a signed representative in `(-p/2, p/2]`.
pub fn signed_residue(r: i64, p: i64) -> i64 {
    if 2 * r > p {
        r - p
    } else {
        r
    }
}
