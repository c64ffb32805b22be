//! Hirzebruch–Jung continued fractions and Wahl chains.
//!
//! A chain `[b_1, ..., b_k]` (every `b_i >= 2`) stands for
//! `p/q = b_1 - 1/(b_2 - 1/(... - 1/b_k))`, the linear plumbing of spheres
//! with self-intersections `-b_i`. Its boundary is the lens space `L(p, q)`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HjError {
    #[error("empty chain")]
    EmptyChain,
    #[error("chain entry {value} at position {index} is below 2")]
    EntryTooSmall { index: usize, value: i64 },
    #[error("{p}/{q} is not a reduced fraction with 0 < q < p")]
    InvalidFraction { p: i64, q: i64 },
    #[error("invalid Wahl parameters (n={n}, a={a}): need n >= 2, 0 < a < n, gcd(n, a) = 1")]
    InvalidWahl { n: i64, a: i64 },
    #[error("integer overflow while evaluating the continued fraction")]
    Overflow,
}

/// A Hirzebruch–Jung string; all entries are at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct HjChain(Vec<i64>);

impl HjChain {
    pub fn new(coefficients: Vec<i64>) -> Result<Self, HjError> {
        if coefficients.is_empty() {
            return Err(HjError::EmptyChain);
        }
        if let Some((index, &value)) = coefficients.iter().enumerate().find(|(_, &b)| b < 2) {
            return Err(HjError::EntryTooSmall { index, value });
        }
        Ok(HjChain(coefficients))
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn reversed(&self) -> HjChain {
        HjChain(self.0.iter().rev().copied().collect())
    }
}

impl TryFrom<Vec<i64>> for HjChain {
    type Error = HjError;
    fn try_from(v: Vec<i64>) -> Result<Self, HjError> {
        HjChain::new(v)
    }
}

impl From<HjChain> for Vec<i64> {
    fn from(c: HjChain) -> Vec<i64> {
        c.0
    }
}

impl fmt::Display for HjChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Reduced fraction `p/q` with `0 < q < p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HjFraction {
    pub p: i64,
    pub q: i64,
}

impl HjFraction {
    pub fn new(p: i64, q: i64) -> Result<Self, HjError> {
        if q < 1 || p < 2 || q >= p || p.gcd(&q) != 1 {
            return Err(HjError::InvalidFraction { p, q });
        }
        Ok(HjFraction { p, q })
    }
}

impl fmt::Display for HjFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WahlParams {
    pub n: i64,
    pub a: i64,
}

impl WahlParams {
    pub fn new(n: i64, a: i64) -> Result<Self, HjError> {
        if n < 2 || a < 1 || a >= n || n.gcd(&a) != 1 {
            return Err(HjError::InvalidWahl { n, a });
        }
        Ok(WahlParams { n, a })
    }

    /// `n^2 / (n a - 1)`.
    pub fn fraction(&self) -> Result<HjFraction, HjError> {
        let p = self.n.checked_mul(self.n).ok_or(HjError::Overflow)?;
        let q = self.n.checked_mul(self.a).ok_or(HjError::Overflow)? - 1;
        HjFraction::new(p, q)
    }
}

impl fmt::Display for WahlParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C({},{})", self.n, self.a)
    }
}

/// Which side of a chain neighbourhood a lens space bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundarySide {
    /// Oriented as the boundary of the plumbing itself.
    Plumbing,
    /// Oriented as the boundary of the complement, i.e. reversed.
    Complement,
}

/// `L(p, q)`; `q` keeps the sign used for display.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LensSpace {
    pub p: i64,
    pub q: i64,
    pub side: BoundarySide,
}

impl LensSpace {
    /// Representative of `q` in `[0, p)`.
    pub fn normalized_q(&self) -> i64 {
        self.q.rem_euclid(self.p)
    }

    /// Order of the cyclic group `H_1(L(p, q))`.
    pub fn h1_order(&self) -> i64 {
        self.p
    }
}

impl fmt::Display for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({},{})", self.p, self.q)
    }
}

/// Both oriented boundaries of a chain neighbourhood.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LensBoundary {
    pub plumbing: LensSpace,
    pub complement: LensSpace,
}

/// Meridian `j` equals `coefficients[j]` times the meridian of the first curve
/// in `H_1` of the boundary, a cyclic group of order `order`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeridianData {
    pub coefficients: Vec<i64>,
    pub order: i64,
}

pub fn hj_expand(f: HjFraction) -> HjChain {
    let (mut p, mut q) = (f.p, f.q);
    let mut out = Vec::new();
    while q != 0 {
        let b = Integer::div_ceil(&p, &q);
        out.push(b);
        (p, q) = (q, b * q - p);
    }
    HjChain(out)
}

pub fn hj_value(c: &HjChain) -> Result<HjFraction, HjError> {
    let b = c.coefficients();
    let (mut p, mut q) = (b[b.len() - 1], 1i64);
    for &bi in b[..b.len() - 1].iter().rev() {
        let np = bi.checked_mul(p).and_then(|x| x.checked_sub(q)).ok_or(HjError::Overflow)?;
        (p, q) = (np, p);
    }
    Ok(HjFraction { p, q })
}

pub fn wahl_chain(w: WahlParams) -> Result<HjChain, HjError> {
    let w = WahlParams::new(w.n, w.a)?;
    Ok(hj_expand(w.fraction()?))
}

pub fn recognize_wahl(c: &HjChain) -> Option<WahlParams> {
    let f = hj_value(c).ok()?;
    let n = f.p.isqrt();
    if n * n != f.p || n < 2 || (f.q + 1) % n != 0 {
        return None;
    }
    WahlParams::new(n, (f.q + 1) / n).ok()
}

pub fn meridian_coefficients(c: &HjChain) -> Result<MeridianData, HjError> {
    let b = c.coefficients();
    let mut coefficients = Vec::with_capacity(b.len());
    let (mut prev, mut cur) = (0i64, 1i64);
    for &bj in b {
        coefficients.push(cur);
        let next = bj.checked_mul(cur).and_then(|x| x.checked_sub(prev)).ok_or(HjError::Overflow)?;
        (prev, cur) = (cur, next);
    }
    Ok(MeridianData { coefficients, order: cur })
}

/// Chain of the orientation-reversed boundary: `p/(p - q)`.
pub fn dual_chain(c: &HjChain) -> Result<HjChain, HjError> {
    let f = hj_value(c)?;
    Ok(hj_expand(HjFraction { p: f.p, q: f.p - f.q }))
}

pub fn lens_boundary(c: &HjChain) -> Result<LensBoundary, HjError> {
    let f = hj_value(c)?;
    Ok(LensBoundary {
        plumbing: LensSpace { p: f.p, q: f.q, side: BoundarySide::Plumbing },
        complement: LensSpace { p: f.p, q: -f.q, side: BoundarySide::Complement },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(v: &[i64]) -> HjChain {
        HjChain::new(v.to_vec()).unwrap()
    }

    const C110: [i64; 11] = [2, 3, 5, 7, 2, 2, 3, 2, 2, 3, 3];

    #[test]
    fn expand_examples() {
        assert_eq!(hj_expand(HjFraction::new(36, 5).unwrap()), ch(&[8, 2, 2, 2, 2]));
        assert_eq!(hj_expand(HjFraction::new(12100, 7369).unwrap()), ch(&C110));
        assert_eq!(hj_expand(HjFraction::new(2, 1).unwrap()), ch(&[2]));
    }

    #[test]
    fn value_examples() {
        assert_eq!(hj_value(&ch(&[8, 2, 2, 2, 2])).unwrap(), HjFraction { p: 36, q: 5 });
        assert_eq!(hj_value(&ch(&[4])).unwrap(), HjFraction { p: 4, q: 1 });
        assert_eq!(hj_value(&ch(&C110)).unwrap(), HjFraction { p: 12100, q: 7369 });
    }

    #[test]
    fn wahl_examples() {
        assert_eq!(wahl_chain(WahlParams { n: 6, a: 1 }).unwrap(), ch(&[8, 2, 2, 2, 2]));
        assert_eq!(wahl_chain(WahlParams { n: 110, a: 67 }).unwrap(), ch(&C110));
        assert_eq!(wahl_chain(WahlParams { n: 2, a: 1 }).unwrap(), ch(&[4]));
        assert!(wahl_chain(WahlParams { n: 6, a: 2 }).is_err());
        assert!(wahl_chain(WahlParams { n: 1, a: 1 }).is_err());
    }

    #[test]
    fn recognize_examples() {
        assert_eq!(recognize_wahl(&ch(&C110)), Some(WahlParams { n: 110, a: 67 }));
        assert_eq!(recognize_wahl(&ch(&[2, 2])), None);
        assert_eq!(recognize_wahl(&ch(&[4])), Some(WahlParams { n: 2, a: 1 }));
        assert_eq!(recognize_wahl(&ch(&[8, 2, 2, 2])), None);
    }

    #[test]
    fn meridian_examples() {
        let m = meridian_coefficients(&ch(&[8, 2, 2, 2, 2])).unwrap();
        assert_eq!(m.coefficients, vec![1, 8, 15, 22, 29]);
        assert_eq!(m.order, 36);
        let m = meridian_coefficients(&ch(&C110)).unwrap();
        assert_eq!(m.coefficients, vec![1, 2, 5, 23, 156, 289, 422, 977, 1532, 2087, 4729]);
        assert_eq!(m.order, 12100);
        let m = meridian_coefficients(&ch(&[4])).unwrap();
        assert_eq!((m.coefficients, m.order), (vec![1], 4));
    }

    #[test]
    fn dual_examples() {
        assert_eq!(dual_chain(&ch(&[8, 2, 2, 2, 2])).unwrap(), ch(&[2, 2, 2, 2, 2, 2, 6]));
        assert_eq!(dual_chain(&ch(&[2])).unwrap(), ch(&[2]));
        assert_eq!(dual_chain(&ch(&[4])).unwrap(), ch(&[2, 2, 2]));
    }

    #[test]
    fn lens_examples() {
        let lb = lens_boundary(&ch(&[8, 2, 2, 2, 2])).unwrap();
        assert_eq!(lb.plumbing.to_string(), "L(36,5)");
        assert_eq!(lb.complement.to_string(), "L(36,-5)");
        assert_eq!(lb.complement.normalized_q(), 31);
        let lb = lens_boundary(&ch(&[2])).unwrap();
        assert_eq!((lb.plumbing.normalized_q(), lb.complement.normalized_q()), (1, 1));
        let lb = lens_boundary(&ch(&C110)).unwrap();
        assert_eq!((lb.plumbing.p, lb.plumbing.q), (12100, 7369));
    }

    #[test]
    fn invalid_inputs() {
        assert_eq!(HjChain::new(vec![]), Err(HjError::EmptyChain));
        assert_eq!(HjChain::new(vec![3, 1]), Err(HjError::EntryTooSmall { index: 1, value: 1 }));
        assert!(HjFraction::new(6, 4).is_err());
        assert!(HjFraction::new(5, 5).is_err());
        assert!(HjFraction::new(5, 0).is_err());
        assert!(serde_json::from_str::<HjChain>("[3,1]").is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let long = HjChain::new(vec![1_000_000; 8]).unwrap();
        assert_eq!(hj_value(&long), Err(HjError::Overflow));
    }
}
