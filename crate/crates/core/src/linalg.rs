//! Exact sparse linear algebra over the rationals.
//!
//! Vectors are sorted lists of `(index, value)` pairs with no stored zeros.
//! Elimination is deterministic: a vector is reduced by the pivot whose
//! leading index matches its own leading index until no pivot applies.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Q = BigRational;
pub type SVec = Vec<(usize, Q)>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Integer value of `x`, if it is an integer that fits in `i64`.
pub fn to_i64(x: &Q) -> Option<i64> {
    if !x.is_integer() {
        return None;
    }
    i64::try_from(x.to_integer()).ok()
}

pub fn q_to_string(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q_from_str(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::new(n, d))
    } else {
        Some(Q::from_integer(s.parse().ok()?))
    }
}

/// Serde adapter storing a rational as a `"p/q"` string.
pub mod qser {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        q_to_string(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        q_from_str(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
    }
}

/// Serde adapter for sparse vectors: a list of `[index, "p/q"]` pairs.
pub mod svser {
    use super::*;

    pub fn serialize<S: Serializer>(v: &SVec, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(usize, String)> = v.iter().map(|(i, x)| (*i, q_to_string(x))).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<SVec, D::Error> {
        let pairs: Vec<(usize, String)> = Vec::deserialize(d)?;
        pairs
            .into_iter()
            .map(|(i, s)| {
                q_from_str(&s)
                    .map(|x| (i, x))
                    .ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
            })
            .collect()
    }
}

/// `y + a*x`.
pub fn axpy(y: &[(usize, Q)], a: &Q, x: &[(usize, Q)]) -> SVec {
    if a.is_zero() {
        return y.to_vec();
    }
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        if j == x.len() || (i < y.len() && y[i].0 < x[j].0) {
            out.push(y[i].clone());
            i += 1;
        } else if i == y.len() || x[j].0 < y[i].0 {
            out.push((x[j].0, a * &x[j].1));
            j += 1;
        } else {
            let v = &y[i].1 + a * &x[j].1;
            if !v.is_zero() {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(a: &Q, x: &[(usize, Q)]) -> SVec {
    if a.is_zero() {
        return Vec::new();
    }
    x.iter().map(|(i, v)| (*i, a * v)).collect()
}

pub fn neg(x: &[(usize, Q)]) -> SVec {
    x.iter().map(|(i, v)| (*i, -v)).collect()
}

pub fn get(x: &[(usize, Q)], idx: usize) -> Option<&Q> {
    x.binary_search_by_key(&idx, |p| p.0).ok().map(|p| &x[p].1)
}

pub fn dot(x: &[(usize, Q)], y: &[(usize, Q)]) -> Q {
    let (mut i, mut j) = (0, 0);
    let mut acc = Q::zero();
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += &x[i].1 * &y[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// Accumulator for building a sparse vector from unordered contributions.
#[derive(Default, Clone, Debug)]
pub struct Accum {
    map: BTreeMap<usize, Q>,
}

impl Accum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, idx: usize, v: Q) {
        if v.is_zero() {
            return;
        }
        match self.map.entry(idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += v;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, a: &Q, x: &[(usize, Q)]) {
        for (i, v) in x {
            self.add(*i, a * v);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn finish(self) -> SVec {
        self.map.into_iter().collect()
    }
}

/// Row-indexed sparse matrix with exact rational entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseRationalMatrix {
    pub nrows: usize,
    pub ncols: usize,
    #[serde(with = "rows_ser")]
    pub rows: Vec<SVec>,
}

mod rows_ser {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Row(#[serde(with = "svser")] SVec);

    pub fn serialize<S: Serializer>(rows: &[SVec], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Row> = rows.iter().map(|r| Row(r.clone())).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<SVec>, D::Error> {
        let v: Vec<Row> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|r| r.0).collect())
    }
}

impl SparseRationalMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    /// Matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(nrows: usize, cols: &[SVec]) -> Self {
        let mut rows = vec![Vec::new(); nrows];
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c {
                rows[*i].push((j, v.clone()));
            }
        }
        Self { nrows, ncols: cols.len(), rows }
    }

    pub fn from_dense(d: &[Vec<Q>]) -> Self {
        let nrows = d.len();
        let ncols = d.first().map_or(0, |r| r.len());
        let rows = d
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect();
        Self { nrows, ncols, rows }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn columns(&self) -> Vec<SVec> {
        let mut cols = vec![Vec::new(); self.ncols];
        for (i, r) in self.rows.iter().enumerate() {
            for (j, v) in r {
                cols[*j].push((i, v.clone()));
            }
        }
        cols
    }

    pub fn transpose(&self) -> Self {
        Self { nrows: self.ncols, ncols: self.nrows, rows: self.columns() }
    }

    pub fn mul_vec(&self, x: &[(usize, Q)]) -> SVec {
        let mut out = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            let v = dot(r, x);
            if !v.is_zero() {
                out.push((i, v));
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch in product");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = Accum::new();
                for (k, a) in r {
                    acc.add_scaled(a, &other.rows[*k]);
                }
                acc.finish()
            })
            .collect();
        Self { nrows: self.nrows, ncols: other.ncols, rows }
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new();
        for r in &self.rows {
            e.insert(r.clone());
        }
        e.len()
    }

    /// Basis of the kernel (as column-space coordinates).
    pub fn kernel(&self) -> Vec<SVec> {
        kernel_of_columns(&self.columns())
    }
}

/// Echelon form built by incremental insertion.
///
/// Every stored row has leading coefficient 1 and a distinct leading index.
/// Rows can carry a tag vector, updated alongside the row during reduction,
/// which records the row as a combination of the inserted inputs.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<SVec>,
    tags: Vec<SVec>,
    lead: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[SVec] {
        &self.rows
    }

    pub fn tag(&self, i: usize) -> &SVec {
        &self.tags[i]
    }

    /// Reduce `v` as far as the leading-term rule allows.
    pub fn reduce(&self, mut v: SVec) -> SVec {
        while let Some((l, c)) = v.first() {
            match self.lead.get(l) {
                Some(&p) => {
                    let c = -c.clone();
                    v = axpy(&v, &c, &self.rows[p]);
                }
                None => break,
            }
        }
        v
    }

    /// Reduce `v`, tracking the multiples of stored rows subtracted.
    /// Returns the residual and the coefficients on stored rows (by row index).
    pub fn reduce_coords(&self, mut v: SVec) -> (SVec, Vec<(usize, Q)>) {
        let mut coords = Vec::new();
        while let Some((l, c)) = v.first() {
            match self.lead.get(l) {
                Some(&p) => {
                    let c = c.clone();
                    v = axpy(&v, &-c.clone(), &self.rows[p]);
                    coords.push((p, c));
                }
                None => break,
            }
        }
        (v, coords)
    }

    /// Like `reduce`, updating `tag` by the tags of the rows used.
    pub fn reduce_tagged(&self, mut v: SVec, mut tag: SVec) -> (SVec, SVec) {
        while let Some((l, c)) = v.first() {
            match self.lead.get(l) {
                Some(&p) => {
                    let c = -c.clone();
                    v = axpy(&v, &c, &self.rows[p]);
                    tag = axpy(&tag, &c, &self.tags[p]);
                }
                None => break,
            }
        }
        (v, tag)
    }

    fn push(&mut self, v: SVec, tag: SVec) -> usize {
        let inv = v[0].1.recip();
        let v = scale(&inv, &v);
        let tag = scale(&inv, &tag);
        let idx = self.rows.len();
        self.lead.insert(v[0].0, idx);
        self.rows.push(v);
        self.tags.push(tag);
        idx
    }

    /// Insert `v`; returns the new row index if `v` was independent.
    pub fn insert(&mut self, v: SVec) -> Option<usize> {
        let r = self.reduce(v);
        if r.is_empty() {
            None
        } else {
            Some(self.push(r, Vec::new()))
        }
    }

    /// Insert with a tag. Returns `Err(tag)` with the dependency relation if
    /// `v` reduces to zero.
    pub fn insert_tagged(&mut self, v: SVec, tag: SVec) -> Result<usize, SVec> {
        let (r, t) = self.reduce_tagged(v, tag);
        if r.is_empty() {
            Err(t)
        } else {
            Ok(self.push(r, t))
        }
    }

    pub fn contains(&self, v: SVec) -> bool {
        self.reduce(v).is_empty()
    }
}

/// Kernel of the linear map whose `j`-th column image is `cols[j]`.
pub fn kernel_of_columns(cols: &[SVec]) -> Vec<SVec> {
    let mut e = Echelon::new();
    let mut ker = Vec::new();
    for (j, c) in cols.iter().enumerate() {
        if let Err(rel) = e.insert_tagged(c.clone(), vec![(j, Q::one())]) {
            ker.push(rel);
        }
    }
    ker
}

pub fn rank_of_vectors(vs: &[SVec]) -> usize {
    let mut e = Echelon::new();
    for v in vs {
        e.insert(v.clone());
    }
    e.len()
}

/// Solve `sum_j x_j cols[j] = b`, returning one solution if it exists.
pub fn solve_columns(cols: &[SVec], b: &SVec) -> Option<SVec> {
    let mut e = Echelon::new();
    for (j, c) in cols.iter().enumerate() {
        let _ = e.insert_tagged(c.clone(), vec![(j, Q::one())]);
    }
    let (r, t) = e.reduce_tagged(b.clone(), Vec::new());
    if r.is_empty() {
        Some(neg(&t))
    } else {
        None
    }
}

/// Dense integer matrix inverse over the rationals (small matrices).
pub fn inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(pivot_row.iter()) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn is_nonneg(x: &Q) -> bool {
    !x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[(usize, i64)]) -> SVec {
        xs.iter().map(|&(i, x)| (i, q(x))).collect()
    }

    #[test]
    fn axpy_cancels() {
        let a = v(&[(0, 1), (2, 3)]);
        let b = v(&[(0, -1), (1, 1)]);
        assert_eq!(axpy(&a, &q(1), &b), v(&[(1, 1), (2, 3)]));
    }

    #[test]
    fn rank_and_kernel() {
        let m = SparseRationalMatrix::from_dense(&[
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(1), q(0), q(1)],
        ]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).is_empty());
    }

    #[test]
    fn solve_and_inverse() {
        let cols = vec![v(&[(0, 1), (1, 1)]), v(&[(1, 2)])];
        let x = solve_columns(&cols, &v(&[(0, 1), (1, 5)])).unwrap();
        assert_eq!(x, v(&[(0, 1), (1, 2)]));
        let inv = inverse(&[vec![q(2), q(-3)], vec![q(-1), q(2)]]).unwrap();
        assert_eq!(inv, vec![vec![q(2), q(3)], vec![q(1), q(2)]]);
    }

    #[test]
    fn rational_strings_roundtrip() {
        for x in [qr(-3, 4), q(7), q(0)] {
            assert_eq!(q_from_str(&q_to_string(&x)).unwrap(), x);
        }
    }
}
