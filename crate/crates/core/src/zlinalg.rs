//! Exact integer matrices, Smith normal form and cokernels.
//!
//! Everything here works over `BigInt`, so no computation can overflow. The
//! convention throughout is that the rows of a relation matrix are relations
//! and the columns are generators: `cokernel(M) = Z^cols / rowspan(M)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigjson;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix has {rows}x{cols} shape but {len} entries were supplied")]
    BadShape { rows: usize, cols: usize, len: usize },
    #[error("determinant requires a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Dense matrix of unbounded integers, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    #[serde(with = "bigjson::vec")]
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::BadShape { rows, cols, len: entries.len() });
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from small-integer rows. All rows must have the same
    /// length; `cols` is needed to describe matrices with zero rows.
    pub fn from_rows(cols: usize, rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::BadShape { rows: rows.len(), cols, len: row.len() });
            }
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        Ok(IntMatrix { rows: rows.len(), cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn to_nested(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.entries[idx] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Appends rows below the existing ones.
    pub fn stack(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, got: other.cols });
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(IntMatrix { rows: self.rows + other.rows, cols: self.cols, entries })
    }

    /// Text form: a "rows cols" header followed by one line per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<IntMatrix, LinalgError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or(LinalgError::Parse { line: 1, msg: "missing \"rows cols\" header".into() })?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|e| LinalgError::Parse { line: hline, msg: format!("bad header: {e}") })?;
        if dims.len() != 2 {
            return Err(LinalgError::Parse {
                line: hline,
                msg: format!("header must hold exactly two counts, found {}", dims.len()),
            });
        }
        let (rows, cols) = (dims[0], dims[1]);
        let mut entries = Vec::with_capacity(rows * cols);
        let mut seen = 0;
        for (lno, line) in lines {
            if seen == rows {
                return Err(LinalgError::Parse { line: lno, msg: "more rows than declared".into() });
            }
            let row: Vec<BigInt> = line
                .split_whitespace()
                .map(BigInt::from_str)
                .collect::<Result<_, _>>()
                .map_err(|e| LinalgError::Parse { line: lno, msg: format!("bad integer: {e}") })?;
            if row.len() != cols {
                return Err(LinalgError::Parse {
                    line: lno,
                    msg: format!("expected {cols} entries, found {}", row.len()),
                });
            }
            entries.extend(row);
            seen += 1;
        }
        if seen != rows {
            return Err(LinalgError::Parse {
                line: text.lines().count().max(1),
                msg: format!("declared {rows} rows, found {seen}"),
            });
        }
        IntMatrix::new(rows, cols, entries)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    fn add_row(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = factor * &self.entries[source * self.cols + j];
            self.entries[target * self.cols + j] += delta;
        }
    }

    /// col[target] += factor * col[source]
    fn add_col(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = factor * &self.entries[i * self.cols + source];
            self.entries[i * self.cols + target] += delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.entries[i * self.cols + j]);
            self.entries[i * self.cols + j] = v;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `u * m * v == d` with `u`, `v` unimodular and `d` in Smith form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// The diagonal d_1, d_2, ... (length min(rows, cols)).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smith normal form by repeated least-magnitude pivoting.
pub fn snf(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = least_nonzero(&d, t) else {
                return SnfResult { d, u, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -(d.get(i, t) / &pivot);
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !d.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -(d.get(t, j) / &pivot);
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                if !d.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Row t and column t are clear; the pivot must also divide the rest.
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfResult { d, u, v }
}

fn least_nonzero(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..d.rows {
        for j in t..d.cols {
            let x = d.get(i, j);
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| a < *b) {
                let unit = a.is_one();
                best = Some((i, j, a));
                if unit {
                    return best.map(|(i, j, _)| (i, j));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Finitely generated abelian group `Z^free_rank + Z/t_1 + ... + Z/t_k` with
/// `t_1 | t_2 | ... | t_k` and every `t_i >= 2`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    #[serde(with = "bigjson::vec")]
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup { free_rank: 0, torsion: Vec::new() }
    }

    pub fn cyclic(n: i64) -> Self {
        cokernel(&IntMatrix::from_rows(1, &[vec![n]]).expect("1x1"))
    }

    /// Builds the canonical form from arbitrary cyclic orders (0 meaning Z).
    pub fn from_cyclic_orders(free_rank: usize, orders: &[i64]) -> Self {
        let n = orders.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, &o) in orders.iter().enumerate() {
            m.set(i, i, BigInt::from(o));
        }
        let mut g = cokernel(&m);
        g.free_rank += free_rank;
        g
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Largest invariant factor (1 for the trivial group), `None` when infinite.
    pub fn exponent(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.torsion.last().cloned().unwrap_or_else(BigInt::one))
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbelianGroup({self})")
    }
}

impl FromStr for AbelianGroup {
    type Err = String;

    /// Accepts the `Display` form, e.g. `0`, `Z/2`, `Z^2 + Z/6`, `Z/2 + Z/3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(AbelianGroup::trivial());
        }
        let mut free = 0usize;
        let mut orders = Vec::new();
        for part in s.split('+').map(str::trim) {
            if part == "Z" {
                free += 1;
            } else if let Some(r) = part.strip_prefix("Z^") {
                free += r.parse::<usize>().map_err(|e| format!("bad rank in {part:?}: {e}"))?;
            } else if let Some(n) = part.strip_prefix("Z/") {
                let n: i64 = n.parse().map_err(|e| format!("bad order in {part:?}: {e}"))?;
                if n < 1 {
                    return Err(format!("cyclic order must be positive in {part:?}"));
                }
                orders.push(n);
            } else {
                return Err(format!("unrecognized summand {part:?}"));
            }
        }
        Ok(AbelianGroup::from_cyclic_orders(free, &orders))
    }
}

/// `Z^cols / rowspan(relations)` in invariant-factor form.
pub fn cokernel(relations: &IntMatrix) -> AbelianGroup {
    let res = snf(relations);
    let diag = res.diagonal();
    let rank = diag.iter().filter(|x| !x.is_zero()).count();
    AbelianGroup {
        free_rank: relations.cols - rank,
        torsion: diag.into_iter().filter(|x| !x.is_zero() && !x.is_one()).collect(),
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> Result<BigInt, LinalgError> {
    if m.rows != m.cols {
        return Err(LinalgError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a.get(i, k).is_zero()) else {
                return Ok(BigInt::zero());
            };
            a.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                a.set(i, j, val);
            }
        }
        prev = a.get(k, k).clone();
    }
    Ok(sign * a.get(n - 1, n - 1))
}

/// Image of a vector of generators in the cokernel, expressed in the
/// coordinates of the canonical decomposition: first one residue per torsion
/// factor (in the order of `group.torsion`), then one integer per free summand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupElement {
    pub group: AbelianGroup,
    #[serde(with = "bigjson::vec")]
    pub coords: Vec<BigInt>,
    /// `None` for elements of infinite order.
    #[serde(with = "bigjson::option")]
    pub order: Option<BigInt>,
}

impl GroupElement {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

pub fn class_of(v: &[BigInt], relations: &IntMatrix) -> Result<GroupElement, LinalgError> {
    if v.len() != relations.cols {
        return Err(LinalgError::DimensionMismatch { expected: relations.cols, got: v.len() });
    }
    let res = snf(relations);
    // Row-vector change of coordinates: rowspan(M)·V = rowspan(D).
    let row = IntMatrix::new(1, v.len(), v.to_vec())?;
    let w = row.mul(&res.v)?;
    let diag = res.diagonal();

    let mut coords = Vec::new();
    let mut torsion = Vec::new();
    let mut order = Some(BigInt::one());
    let mut free = Vec::new();
    for j in 0..relations.cols {
        let x = w.get(0, j);
        let dj = diag.get(j).cloned().unwrap_or_else(BigInt::zero);
        if dj.is_zero() {
            if !x.is_zero() {
                order = None;
            }
            free.push(x.clone());
        } else if !dj.is_one() {
            let r = x.mod_floor(&dj);
            if let Some(o) = order.as_mut() {
                let ord = &dj / r.gcd(&dj);
                *o = o.lcm(&ord);
            }
            coords.push(r);
            torsion.push(dj);
        }
    }
    let free_rank = free.len();
    coords.extend(free);
    Ok(GroupElement { group: AbelianGroup { free_rank, torsion }, coords, order })
}

/// Convenience for small integer vectors.
pub fn class_of_i64(v: &[i64], relations: &IntMatrix) -> Result<GroupElement, LinalgError> {
    let v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
    class_of(&v, relations)
}

/// Linear plumbing (tridiagonal) matrix of a chain with self-intersections
/// `-b_i` and unit adjacencies.
pub fn plumbing_matrix(weights: &[i64]) -> IntMatrix {
    let k = weights.len();
    let mut m = IntMatrix::zeros(k, k);
    for (i, &b) in weights.iter().enumerate() {
        m.set(i, i, BigInt::from(-b));
        if i + 1 < k {
            m.set(i, i + 1, BigInt::one());
            m.set(i + 1, i, BigInt::one());
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(cols: usize, rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(cols, rows).unwrap()
    }

    fn check_contract(a: &IntMatrix) -> SnfResult {
        let r = snf(a);
        assert_eq!(r.u.mul(a).unwrap().mul(&r.v).unwrap(), r.d);
        assert!(determinant(&r.u).unwrap().abs().is_one());
        assert!(determinant(&r.v).unwrap().abs().is_one());
        r
    }

    #[test]
    fn snf_diag_2_3() {
        let r = check_contract(&m(2, &[vec![2, 0], vec![0, 3]]));
        assert_eq!(r.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn snf_zero_and_identity() {
        let z = IntMatrix::zeros(3, 2);
        assert_eq!(check_contract(&z).d, z);
        let i = IntMatrix::identity(4);
        assert_eq!(check_contract(&i).d, i);
    }

    #[test]
    fn snf_empty_shapes() {
        let e = IntMatrix::zeros(0, 3);
        assert_eq!(snf(&e).d, e);
        assert_eq!(cokernel(&e), AbelianGroup { free_rank: 3, torsion: vec![] });
        assert_eq!(cokernel(&IntMatrix::zeros(2, 0)), AbelianGroup::trivial());
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel(&m(1, &[vec![36]])).to_string(), "Z/36");
        let g = cokernel(&plumbing_matrix(&[8, 2, 2, 2, 2]));
        assert_eq!(g.torsion, vec![BigInt::from(36)]);
        assert_eq!(g.free_rank, 0);
        assert_eq!(cokernel(&m(2, &[vec![4, 6]])).to_string(), "Z + Z/2");
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&m(1, &[vec![0]])).unwrap(), BigInt::zero());
        assert_eq!(determinant(&plumbing_matrix(&[8, 2, 2, 2, 2])).unwrap().abs(), BigInt::from(36));
        assert_eq!(
            determinant(&plumbing_matrix(&[2, 3, 5, 7, 2, 2, 3, 2, 2, 3, 3])).unwrap().abs(),
            BigInt::from(12100)
        );
        assert!(matches!(
            determinant(&IntMatrix::zeros(2, 3)),
            Err(LinalgError::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn class_of_cyclic() {
        let rel = m(1, &[vec![36]]);
        assert!(class_of_i64(&[36], &rel).unwrap().is_zero());
        let g = class_of_i64(&[1], &rel).unwrap();
        assert!(!g.is_zero());
        assert_eq!(g.order, Some(BigInt::from(36)));
        let h = class_of_i64(&[30], &rel).unwrap();
        assert_eq!(h.order, Some(BigInt::from(6)));
        assert!(matches!(
            class_of_i64(&[1, 2], &rel),
            Err(LinalgError::DimensionMismatch { expected: 1, got: 2 })
        ));
    }

    #[test]
    fn class_of_free_part() {
        let rel = IntMatrix::zeros(0, 2);
        let g = class_of_i64(&[0, 3], &rel).unwrap();
        assert_eq!(g.order, None);
        assert!(!g.is_zero());
    }

    #[test]
    fn text_roundtrip_and_errors() {
        let a = m(3, &[vec![1, -2, 3], vec![0, 0, 12345678901234567]]);
        assert_eq!(IntMatrix::parse_text(&a.to_text()).unwrap(), a);
        assert!(matches!(
            IntMatrix::parse_text("2 2\n1 2\n3\n"),
            Err(LinalgError::Parse { line: 3, .. })
        ));
        assert!(IntMatrix::parse_text("1 1\n1\n2\n").is_err());
        assert!(IntMatrix::parse_text("").is_err());
        assert_eq!(IntMatrix::parse_text("0 3\n").unwrap(), IntMatrix::zeros(0, 3));
    }

    #[test]
    fn group_parse_display() {
        for s in ["0", "Z/2", "Z^2 + Z/6", "Z + Z/2 + Z/4"] {
            assert_eq!(s.parse::<AbelianGroup>().unwrap().to_string(), s);
        }
        assert_eq!("Z/2 + Z/3".parse::<AbelianGroup>().unwrap().to_string(), "Z/6");
        assert_eq!("Z/1".parse::<AbelianGroup>().unwrap(), AbelianGroup::trivial());
    }

    #[test]
    fn huge_entries_stay_exact() {
        let big = BigInt::from(10).pow(40);
        let a = IntMatrix::new(1, 1, vec![big.clone()]).unwrap();
        assert_eq!(cokernel(&a).torsion, vec![big]);
    }
}
