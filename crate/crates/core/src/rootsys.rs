//! Root systems of the simple types, weight coordinates, Weyl words and
//! the Dynkin-graph combinatorics used by the counting formulas.
//!
//! Node indices are 0-based internally; reports add one.
//! The Cartan matrix has `a[i][j] = <alpha_j, alpha_i^vee>`, so the coroot
//! coordinates of `alpha_j` form column `j`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{inverse, q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeLetter {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl TypeLetter {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s.trim().to_ascii_uppercase().as_str() {
            "A" => Self::A,
            "B" => Self::B,
            "C" => Self::C,
            "D" => Self::D,
            "E" => Self::E,
            "F" => Self::F,
            "G" => Self::G,
            _ => return None,
        })
    }
}

impl fmt::Display for TypeLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootSystemError {
    #[error("invalid simple type {letter}{rank}: {reason}")]
    InvalidType { letter: TypeLetter, rank: usize, reason: String },
    #[error("node {node} out of range 1..={rank}")]
    NodeOutOfRange { node: usize, rank: usize },
    #[error("Weyl words of length {0} are not supported (maximum 2)")]
    LengthUnsupported(usize),
    #[error("node set must be nonempty")]
    EmptyNodeSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CartanMatrixSpec {
    pub type_letter: TypeLetter,
    pub rank: usize,
}

impl CartanMatrixSpec {
    pub fn new(type_letter: TypeLetter, rank: usize) -> Result<Self, RootSystemError> {
        let s = Self { type_letter, rank };
        s.validate()?;
        Ok(s)
    }

    pub fn valid_ranks(letter: TypeLetter) -> &'static str {
        match letter {
            TypeLetter::A => "rank >= 1",
            TypeLetter::B | TypeLetter::C => "rank >= 2",
            TypeLetter::D => "rank >= 3",
            TypeLetter::E => "rank 6, 7 or 8",
            TypeLetter::F => "rank 4",
            TypeLetter::G => "rank 2",
        }
    }

    pub fn validate(&self) -> Result<(), RootSystemError> {
        let r = self.rank;
        let ok = match self.type_letter {
            TypeLetter::A => r >= 1,
            TypeLetter::B | TypeLetter::C => r >= 2,
            TypeLetter::D => r >= 3,
            TypeLetter::E => (6..=8).contains(&r),
            TypeLetter::F => r == 4,
            TypeLetter::G => r == 2,
        };
        if ok {
            Ok(())
        } else {
            Err(RootSystemError::InvalidType {
                letter: self.type_letter,
                rank: r,
                reason: format!("type {} requires {}", self.type_letter, Self::valid_ranks(self.type_letter)),
            })
        }
    }

    /// Short lowercase name such as `g2`, `f4`, `a3`.
    pub fn name(&self) -> String {
        format!("{}{}", self.type_letter.to_string().to_lowercase(), self.rank)
    }

    /// Classical name of the algebra: `sl(4)`, `o(9)`, `sp(6)`, `o(8)`, `e(6)`.
    pub fn algebra_name(&self) -> String {
        let n = self.rank;
        match self.type_letter {
            TypeLetter::A => format!("sl({})", n + 1),
            TypeLetter::B => format!("o({})", 2 * n + 1),
            TypeLetter::C => format!("sp({})", 2 * n),
            TypeLetter::D => format!("o({})", 2 * n),
            TypeLetter::E => format!("e({n})"),
            TypeLetter::F => "f(4)".into(),
            TypeLetter::G => "g(2)".into(),
        }
    }

    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self.type_letter {
            TypeLetter::A | TypeLetter::B | TypeLetter::C | TypeLetter::F => {
                for i in 0..n - 1 {
                    link(i, i + 1);
                }
            }
            TypeLetter::D => {
                for i in 0..n - 2 {
                    link(i, i + 1);
                }
                link(n - 3, n - 1);
            }
            TypeLetter::E => {
                for i in 0..n - 2 {
                    link(i, i + 1);
                }
                link(n - 4, n - 1);
            }
            TypeLetter::G => link(0, 1),
        }
        match self.type_letter {
            TypeLetter::B => a[n - 1][n - 2] = -2,
            TypeLetter::C => a[n - 2][n - 1] = -2,
            TypeLetter::F => a[1][2] = -2,
            TypeLetter::G => a[0][1] = -3,
            _ => {}
        }
        a
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Coroot,
    SimpleRoot,
}

/// A weight with exact rational coordinates in one of the two bases.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    pub coords: Vec<Q>,
    pub basis: Basis,
}

impl Weight {
    pub fn coroot(c: &[i64]) -> Self {
        Self { coords: c.iter().map(|&x| q(x)).collect(), basis: Basis::Coroot }
    }

    pub fn simple(c: &[i64]) -> Self {
        Self { coords: c.iter().map(|&x| q(x)).collect(), basis: Basis::SimpleRoot }
    }

    /// Coordinates as integers, if they all are.
    pub fn integral(&self) -> Option<Vec<i64>> {
        self.coords.iter().map(crate::linalg::to_i64).collect()
    }
}

/// A product `s_{r_0} s_{r_1} ... s_{r_{l-1}}` of simple reflections; it acts
/// by applying the rightmost reflection first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylWord {
    pub reflections: Vec<usize>,
    pub length: usize,
}

impl WeylWord {
    pub fn identity() -> Self {
        Self { reflections: Vec::new(), length: 0 }
    }

    pub fn new(reflections: Vec<usize>) -> Self {
        let length = reflections.len();
        Self { reflections, length }
    }

    pub fn inverse(&self) -> Self {
        let mut r = self.reflections.clone();
        r.reverse();
        Self::new(r)
    }

    /// Action on a weight in coroot coordinates.
    pub fn apply_weight(&self, rs: &RootSystem, w: &[i64]) -> Vec<i64> {
        let mut v = w.to_vec();
        for &i in self.reflections.iter().rev() {
            v = rs.reflect_coroot(i, &v);
        }
        v
    }

    /// Action on a root in simple-root coordinates.
    pub fn apply_root(&self, rs: &RootSystem, b: &[i64]) -> Vec<i64> {
        let mut v = b.to_vec();
        for &i in self.reflections.iter().rev() {
            v = rs.reflect_root(i, &v);
        }
        v
    }

    pub fn display_1based(&self) -> String {
        if self.reflections.is_empty() {
            return "id".into();
        }
        self.reflections.iter().map(|i| format!("s{}", i + 1)).collect::<Vec<_>>().join(" ")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootSystem {
    pub spec: CartanMatrixSpec,
    pub cartan_matrix: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates, by height then lexicographic.
    pub positive_roots: Vec<Vec<i64>>,
    pub maximal_root: Vec<i64>,
    /// All entries 1 in coroot coordinates.
    pub rho: Vec<i64>,
    pub dynkin_edges: Vec<(usize, usize)>,
    /// `d[i] = (alpha_i, alpha_i)/2`, normalized so the short roots have 1.
    pub symmetrizer: Vec<i64>,
    #[serde(skip)]
    index: HashMap<Vec<i64>, usize>,
}

pub fn build_root_system(spec: CartanMatrixSpec) -> Result<RootSystem, RootSystemError> {
    spec.validate()?;
    let a = spec.cartan_matrix();
    let n = spec.rank;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if a[i][j] != 0 {
                edges.push((i, j));
            }
        }
    }
    let symmetrizer = symmetrize(&a);

    let simple: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i)).collect();
    let mut by_height: Vec<Vec<Vec<i64>>> = vec![simple];
    let mut known: BTreeSet<Vec<i64>> = by_height[0].iter().cloned().collect();
    loop {
        let mut next: BTreeSet<Vec<i64>> = BTreeSet::new();
        for b in by_height.last().unwrap() {
            for i in 0..n {
                // p: how far the alpha_i string extends downward from b
                let mut p = 0;
                let mut c = b.clone();
                loop {
                    c[i] -= 1;
                    if known.contains(&c) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pair: i64 = (0..n).map(|j| b[j] * a[i][j]).sum();
                let qq = p - pair;
                if qq > 0 {
                    let mut up = b.clone();
                    up[i] += 1;
                    next.insert(up);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        known.extend(next.iter().cloned());
        by_height.push(next.into_iter().collect());
    }
    let positive_roots: Vec<Vec<i64>> = by_height.into_iter().flatten().collect();
    let maximal_root = positive_roots.last().unwrap().clone();
    let index = positive_roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
    Ok(RootSystem {
        spec,
        cartan_matrix: a,
        positive_roots,
        maximal_root,
        rho: vec![1; n],
        dynkin_edges: edges,
        symmetrizer,
        index,
    })
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn symmetrize(a: &[Vec<i64>]) -> Vec<i64> {
    // d_i a_ij = d_j a_ji; propagate along the connected Dynkin graph
    let n = a.len();
    let mut d: Vec<Option<Q>> = vec![None; n];
    d[0] = Some(Q::one());
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if i != j && a[i][j] != 0 && d[j].is_none() {
                let di = d[i].clone().unwrap();
                d[j] = Some(di * q(a[i][j]) / q(a[j][i]));
                stack.push(j);
            }
        }
    }
    let d: Vec<Q> = d.into_iter().map(|x| x.unwrap()).collect();
    let min = d.iter().min().unwrap().clone();
    d.into_iter().map(|x| crate::linalg::to_i64(&(x / &min)).unwrap()).collect()
}

impl RootSystem {
    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn root_index(&self, b: &[i64]) -> Option<usize> {
        if self.index.is_empty() {
            return self.positive_roots.iter().position(|r| r == b);
        }
        self.index.get(b).copied()
    }

    pub fn is_root(&self, b: &[i64]) -> bool {
        if b.iter().all(|&x| x >= 0) {
            self.root_index(b).is_some()
        } else if b.iter().all(|&x| x <= 0) {
            let m: Vec<i64> = b.iter().map(|x| -x).collect();
            self.root_index(&m).is_some()
        } else {
            false
        }
    }

    /// Rebuild the lookup index after deserialization.
    pub fn reindex(&mut self) {
        self.index = self.positive_roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
    }

    pub fn height(b: &[i64]) -> i64 {
        b.iter().sum()
    }

    /// `<beta, alpha_i^vee>` for `beta` in simple-root coordinates.
    pub fn pairing(&self, b: &[i64], i: usize) -> i64 {
        (0..self.rank()).map(|j| b[j] * self.cartan_matrix[i][j]).sum()
    }

    /// Simple-root coordinates to coroot coordinates.
    pub fn to_coroot(&self, b: &[i64]) -> Vec<i64> {
        (0..self.rank()).map(|i| self.pairing(b, i)).collect()
    }

    pub fn reflect_coroot(&self, i: usize, w: &[i64]) -> Vec<i64> {
        let wi = w[i];
        (0..self.rank()).map(|k| w[k] - wi * self.cartan_matrix[k][i]).collect()
    }

    pub fn reflect_root(&self, i: usize, b: &[i64]) -> Vec<i64> {
        let p = self.pairing(b, i);
        let mut v = b.to_vec();
        v[i] -= p;
        v
    }

    /// Symmetric form `(beta, gamma)` in simple-root coordinates.
    pub fn form(&self, b: &[i64], c: &[i64]) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            for j in 0..n {
                s += b[i] * c[j] * self.symmetrizer[i] * self.cartan_matrix[i][j];
            }
        }
        s
    }

    /// Weyl dimension formula for highest weight `lambda` (coroot
    /// coordinates) restricted to the roots supported on `nodes`.
    pub fn weyl_dimension_on(&self, lambda: &[i64], nodes: &[usize]) -> Q {
        let mut num = Q::one();
        let mut den = Q::one();
        for b in &self.positive_roots {
            if (0..self.rank()).any(|j| b[j] != 0 && !nodes.contains(&j)) {
                continue;
            }
            // <mu, beta^vee> = 2 (mu, beta)/(beta, beta), (mu, alpha_j) = mu_j d_j
            let bb = q(self.form(b, b));
            let pair = |mu: &[i64]| -> Q {
                let s: i64 = (0..self.rank()).map(|j| b[j] * mu[j] * self.symmetrizer[j]).sum();
                q(2 * s) / &bb
            };
            let lr: Vec<i64> = lambda.iter().map(|x| x + 1).collect();
            num *= pair(&lr);
            den *= pair(&self.rho);
        }
        num / den
    }

    pub fn weyl_dimension(&self, lambda: &[i64]) -> Q {
        let all: Vec<usize> = (0..self.rank()).collect();
        self.weyl_dimension_on(lambda, &all)
    }

    /// Highest weight of the adjoint module in coroot coordinates.
    pub fn adjoint_highest_weight(&self) -> Vec<i64> {
        self.to_coroot(&self.maximal_root)
    }

    pub fn cartan_inverse(&self) -> Vec<Vec<Q>> {
        let a: Vec<Vec<Q>> = self.cartan_matrix.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        inverse(&a).expect("Cartan matrix is invertible")
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .dynkin_edges
            .iter()
            .filter_map(|&(a, b)| if a == i { Some(b) } else if b == i { Some(a) } else { None })
            .collect();
        v.sort();
        v
    }

    /// Number of positive roots sent to negative roots by `w^{-1}`, i.e.
    /// the set `R_W^- = {beta > 0 : w^{-1}(beta) < 0}`.
    pub fn inversion_set(&self, w: &WeylWord) -> Vec<Vec<i64>> {
        let winv = w.inverse();
        self.positive_roots
            .iter()
            .filter(|b| winv.apply_root(self, b).iter().all(|&x| x <= 0))
            .cloned()
            .collect()
    }
}

/// Convert a weight between coroot and simple-root coordinates.
pub fn convert_weight(w: &Weight, target: Basis, rs: &RootSystem) -> Weight {
    if w.basis == target {
        return w.clone();
    }
    let n = rs.rank();
    let coords = match target {
        Basis::Coroot => (0..n)
            .map(|i| (0..n).fold(Q::zero(), |acc, j| acc + q(rs.cartan_matrix[i][j]) * &w.coords[j]))
            .collect(),
        Basis::SimpleRoot => {
            let inv = rs.cartan_inverse();
            (0..n).map(|i| (0..n).fold(Q::zero(), |acc, j| acc + &inv[i][j] * &w.coords[j])).collect()
        }
    };
    Weight { coords, basis: target }
}

/// `s_i(w)` for `w` in coroot coordinates.
pub fn reflect(rs: &RootSystem, i: usize, w: &Weight) -> Weight {
    let wc = convert_weight(w, Basis::Coroot, rs);
    let wi = wc.coords[i].clone();
    let coords = (0..rs.rank()).map(|k| &wc.coords[k] - &wi * q(rs.cartan_matrix[k][i])).collect();
    convert_weight(&Weight { coords, basis: Basis::Coroot }, w.basis, rs)
}

pub fn validate_nodes(rs: &RootSystem, nodes: &[usize]) -> Result<(), RootSystemError> {
    for &i in nodes {
        if i >= rs.rank() {
            return Err(RootSystemError::NodeOutOfRange { node: i + 1, rank: rs.rank() });
        }
    }
    Ok(())
}

/// Reduced words `w` of the given length with `w^{-1}(alpha_j) > 0` for
/// every node `j` outside `selected`; words with equal action are merged.
pub fn enumerate_w_i(rs: &RootSystem, selected: &[usize], length: usize) -> Result<Vec<WeylWord>, RootSystemError> {
    if length > 2 {
        return Err(RootSystemError::LengthUnsupported(length));
    }
    if selected.is_empty() {
        return Err(RootSystemError::EmptyNodeSet);
    }
    validate_nodes(rs, selected)?;
    let n = rs.rank();
    let candidates: Vec<WeylWord> = match length {
        0 => vec![WeylWord::identity()],
        1 => (0..n).map(|i| WeylWord::new(vec![i])).collect(),
        _ => {
            let mut v = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    if a != b {
                        v.push(WeylWord::new(vec![a, b]));
                    }
                }
            }
            v
        }
    };
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut out = Vec::new();
    for w in candidates {
        let winv = w.inverse();
        let ok = (0..n)
            .filter(|j| !selected.contains(j))
            .all(|j| winv.apply_root(rs, &unit(n, j)).iter().all(|&x| x >= 0));
        if !ok {
            continue;
        }
        let key = w.apply_weight(rs, &rs.rho);
        if seen.insert(key) {
            out.push(w);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynkinSplit {
    /// Connected components of the induced subgraph, each sorted.
    pub components: Vec<Vec<usize>>,
    /// Cardinality of the node set that was split.
    pub c: usize,
    /// Per component: number of outside nodes adjacent to it, minus one.
    pub c_i: Vec<i64>,
    pub s: usize,
}

/// Split the induced Dynkin subgraph on `nodes` into connected components,
/// ordered by their smallest node.
pub fn dynkin_split(rs: &RootSystem, nodes: &[usize]) -> DynkinSplit {
    let set: BTreeSet<usize> = nodes.iter().copied().collect();
    let mut seen = BTreeSet::new();
    let mut components = Vec::new();
    for &start in &set {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = vec![];
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(i) = stack.pop() {
            comp.push(i);
            for j in rs.neighbors(i) {
                if set.contains(&j) && seen.insert(j) {
                    stack.push(j);
                }
            }
        }
        comp.sort();
        components.push(comp);
    }
    let c_i = components
        .iter()
        .map(|comp| {
            let outside: BTreeSet<usize> = comp
                .iter()
                .flat_map(|&i| rs.neighbors(i))
                .filter(|j| !set.contains(j))
                .collect();
            outside.len() as i64 - 1
        })
        .collect();
    let s = components.len();
    DynkinSplit { components, c: set.len(), c_i, s }
}

pub fn complement(rs: &RootSystem, nodes: &[usize]) -> Vec<usize> {
    (0..rs.rank()).filter(|i| !nodes.contains(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(t: TypeLetter, n: usize) -> RootSystem {
        build_root_system(CartanMatrixSpec::new(t, n).unwrap()).unwrap()
    }

    #[test]
    fn rank_one() {
        let a1 = rs(TypeLetter::A, 1);
        assert_eq!(a1.positive_roots, vec![vec![1]]);
        assert_eq!(a1.maximal_root, vec![1]);
    }

    #[test]
    fn exceptional_maximal_roots() {
        assert_eq!(rs(TypeLetter::G, 2).maximal_root, vec![3, 2]);
        assert_eq!(rs(TypeLetter::F, 4).maximal_root, vec![2, 4, 3, 2]);
        assert_eq!(rs(TypeLetter::E, 6).maximal_root, vec![1, 2, 3, 2, 1, 2]);
        assert_eq!(rs(TypeLetter::E, 7).maximal_root, vec![1, 2, 3, 4, 3, 2, 2]);
        assert_eq!(rs(TypeLetter::E, 8).maximal_root, vec![2, 3, 4, 5, 6, 4, 2, 3]);
    }

    #[test]
    fn invalid_types_rejected() {
        assert!(CartanMatrixSpec::new(TypeLetter::E, 5).is_err());
        assert!(CartanMatrixSpec::new(TypeLetter::G, 3).is_err());
        assert!(CartanMatrixSpec::new(TypeLetter::D, 2).is_err());
        assert!(CartanMatrixSpec::new(TypeLetter::B, 1).is_err());
    }

    #[test]
    fn g2_conversion() {
        let g2 = rs(TypeLetter::G, 2);
        let w = convert_weight(&Weight::coroot(&[8, -4]), Basis::SimpleRoot, &g2);
        assert_eq!(w, Weight::simple(&[4, 0]));
        let w = convert_weight(&Weight::coroot(&[-7, 4]), Basis::SimpleRoot, &g2);
        assert_eq!(w, Weight::simple(&[-2, 1]));
    }

    #[test]
    fn reflections() {
        let a2 = rs(TypeLetter::A, 2);
        assert_eq!(reflect(&a2, 0, &Weight::coroot(&[1, 0])), Weight::coroot(&[-1, 1]));
        let a1 = rs(TypeLetter::A, 1);
        assert_eq!(reflect(&a1, 0, &Weight::coroot(&[1])), Weight::coroot(&[-1]));
    }

    #[test]
    fn w_i_counts() {
        let g2 = rs(TypeLetter::G, 2);
        assert_eq!(enumerate_w_i(&g2, &[0], 2).unwrap().len(), 1);
        assert_eq!(enumerate_w_i(&g2, &[0], 0).unwrap(), vec![WeylWord::identity()]);
        let f4 = rs(TypeLetter::F, 4);
        assert_eq!(enumerate_w_i(&f4, &[1], 2).unwrap().len(), 2);
        assert!(enumerate_w_i(&f4, &[1], 3).is_err());
    }

    #[test]
    fn split_examples() {
        let g2 = rs(TypeLetter::G, 2);
        let s = dynkin_split(&g2, &[1]);
        assert_eq!(s.components, vec![vec![1]]);
        assert_eq!((s.c, s.c_i.clone()), (1, vec![0]));
        let a2 = rs(TypeLetter::A, 2);
        assert_eq!(dynkin_split(&a2, &[]).s, 0);
    }
}
