//! Simple Lie algebras in a Chevalley basis, Z-gradings by selected nodes,
//! and the Levi decomposition of the degree-zero part.
//!
//! `ZGradedLieAlgebra` is also the container for nonpositive parts and for
//! degree-truncated prolongations, so it carries a generic basis.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmod::{highest_weight_rep, HwRep};
use crate::linalg::{axpy, q, scale, svser, to_i64, Accum, SparseRationalMatrix, Q, SVec};
use crate::rootsys::RootSystem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ElemTag {
    /// Root vector; the root in simple-root coordinates (signed).
    Root(Vec<i64>),
    /// Simple coroot `h_i`.
    Cartan(usize),
    /// Element of a positive prolongation component.
    Derivation { degree: i64, index: usize },
    /// Basis vector of a module placed in the algebra.
    Vector(usize),
    /// Grading element acting by the degree.
    Grading,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub tag: ElemTag,
    /// Weight in the coroot coordinates of the frame's root system.
    pub weight: Vec<i64>,
    pub degree: i64,
}

/// Torus coordinates and the simple root vectors of the reductive part,
/// used to decompose cohomology into irreducible constituents.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightFrame {
    pub rs: RootSystem,
    /// Nodes of `rs` whose root vectors lie in degree zero.
    pub levi_nodes: Vec<usize>,
    /// Algebra indices of `X_j^+` and `X_j^-` for each Levi node.
    pub raising: Vec<usize>,
    pub lowering: Vec<usize>,
}

/// One step of the construction of the root vectors:
/// `E_xi = [E_i, E_beta] / div` and `F_xi = sign [F_i, F_beta] / div`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RecipeStep {
    pub root: usize,
    pub simple: usize,
    pub beta: usize,
    pub div: i64,
    pub f_sign: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GradingSpec {
    pub degrees: Vec<i64>,
}

impl GradingSpec {
    pub fn from_nodes(rank: usize, nodes: &[usize]) -> Self {
        let mut degrees = vec![0; rank];
        for &i in nodes {
            degrees[i] = 1;
        }
        Self { degrees }
    }

    pub fn selected(&self) -> Vec<usize> {
        (0..self.degrees.len()).filter(|&i| self.degrees[i] > 0).collect()
    }

    pub fn validate(&self, rank: usize) -> Result<()> {
        if self.degrees.len() != rank {
            return Err(Error::Invalid(format!("grading has {} entries, rank is {rank}", self.degrees.len())));
        }
        if self.degrees.iter().any(|&d| d < 0) {
            return Err(Error::Invalid("grading degrees must be nonnegative".into()));
        }
        if self.degrees.iter().all(|&d| d == 0) {
            return Err(Error::Invalid("grading has no selected node".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(from = "AlgebraRecord", into = "AlgebraRecord")]
pub struct ZGradedLieAlgebra {
    pub name: String,
    pub basis: Vec<BasisElement>,
    brackets: HashMap<(usize, usize), SVec>,
    pub grading: Option<GradingSpec>,
    pub frame: Option<WeightFrame>,
    /// Highest degree known to be complete; `None` for a finite algebra.
    pub complete_to: Option<i64>,
    pub recipe: Vec<RecipeStep>,
}

#[derive(Serialize, Deserialize)]
struct BracketRecord {
    i: usize,
    j: usize,
    #[serde(with = "svser")]
    v: SVec,
}

#[derive(Serialize, Deserialize)]
struct AlgebraRecord {
    name: String,
    basis: Vec<BasisElement>,
    brackets: Vec<BracketRecord>,
    grading: Option<GradingSpec>,
    frame: Option<WeightFrame>,
    complete_to: Option<i64>,
    recipe: Vec<RecipeStep>,
}

impl From<ZGradedLieAlgebra> for AlgebraRecord {
    fn from(a: ZGradedLieAlgebra) -> Self {
        let mut keys: Vec<_> = a.brackets.keys().copied().collect();
        keys.sort();
        let brackets = keys.into_iter().map(|(i, j)| BracketRecord { i, j, v: a.brackets[&(i, j)].clone() }).collect();
        Self {
            name: a.name,
            basis: a.basis,
            brackets,
            grading: a.grading,
            frame: a.frame,
            complete_to: a.complete_to,
            recipe: a.recipe,
        }
    }
}

impl From<AlgebraRecord> for ZGradedLieAlgebra {
    fn from(r: AlgebraRecord) -> Self {
        let mut frame = r.frame;
        if let Some(f) = frame.as_mut() {
            f.rs.reindex();
        }
        Self {
            name: r.name,
            basis: r.basis,
            brackets: r.brackets.into_iter().map(|b| ((b.i, b.j), b.v)).collect(),
            grading: r.grading,
            frame,
            complete_to: r.complete_to,
            recipe: r.recipe,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LeviPieces {
    pub g_minus: Vec<usize>,
    pub l: Vec<usize>,
    pub l1: Vec<usize>,
    /// Basis of the center, as combinations of algebra basis elements.
    #[serde(skip)]
    pub z: Vec<SVec>,
}

impl ZGradedLieAlgebra {
    pub fn new(name: impl Into<String>, basis: Vec<BasisElement>) -> Self {
        Self {
            name: name.into(),
            basis,
            brackets: HashMap::new(),
            grading: None,
            frame: None,
            complete_to: None,
            recipe: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Set `[x_i, x_j] = v` (and the antisymmetric entry).
    pub fn set_bracket(&mut self, i: usize, j: usize, v: SVec) {
        assert!(i != j || v.is_empty(), "[x,x] must vanish");
        if i == j {
            return;
        }
        let (key, v) = if i < j { ((i, j), v) } else { ((j, i), crate::linalg::neg(&v)) };
        if v.is_empty() {
            self.brackets.remove(&key);
        } else {
            self.brackets.insert(key, v);
        }
    }

    pub fn bracket(&self, i: usize, j: usize) -> SVec {
        if i == j {
            return Vec::new();
        }
        if i < j {
            self.brackets.get(&(i, j)).cloned().unwrap_or_default()
        } else {
            self.brackets.get(&(j, i)).map(|v| crate::linalg::neg(v)).unwrap_or_default()
        }
    }

    /// Bracket of basis elements, borrowed with a sign.
    pub fn bracket_ref(&self, i: usize, j: usize) -> Option<(&SVec, bool)> {
        if i == j {
            return None;
        }
        if i < j {
            self.brackets.get(&(i, j)).map(|v| (v, false))
        } else {
            self.brackets.get(&(j, i)).map(|v| (v, true))
        }
    }

    pub fn bracket_vec(&self, x: &[(usize, Q)], y: &[(usize, Q)]) -> SVec {
        let mut acc = Accum::new();
        for (i, a) in x {
            for (j, b) in y {
                if let Some((v, negate)) = self.bracket_ref(*i, *j) {
                    let c = if negate { -(a * b) } else { a * b };
                    acc.add_scaled(&c, v);
                }
            }
        }
        acc.finish()
    }

    pub fn nonzero_brackets(&self) -> usize {
        self.brackets.len()
    }

    pub fn bracket_keys(&self) -> Vec<(usize, usize)> {
        let mut k: Vec<_> = self.brackets.keys().copied().collect();
        k.sort();
        k
    }

    pub fn indices_of_degree(&self, d: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].degree == d).collect()
    }

    pub fn g_minus(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].degree < 0).collect()
    }

    pub fn depth(&self) -> i64 {
        self.basis.iter().map(|b| -b.degree).max().unwrap_or(0).max(0)
    }

    pub fn dims_by_degree(&self) -> BTreeMap<i64, usize> {
        let mut m = BTreeMap::new();
        for b in &self.basis {
            *m.entry(b.degree).or_insert(0) += 1;
        }
        m
    }

    pub fn weight_rank(&self) -> usize {
        self.basis.first().map_or(0, |b| b.weight.len())
    }

    pub fn max_degree(&self) -> i64 {
        self.basis.iter().map(|b| b.degree).max().unwrap_or(0)
    }

    /// Verify the Jacobi identity on all basis triples whose total degree is
    /// at most `max_total` (all triples when `None`).
    pub fn check_jacobi(&self, max_total: Option<i64>) -> Result<()> {
        let n = self.dim();
        // group by weight so that only triples with a possibly nonzero
        // result are visited
        let mut by_weight: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for i in 0..n {
            by_weight.entry(self.basis[i].weight.clone()).or_default().push(i);
        }
        let present: std::collections::HashSet<Vec<i64>> = by_weight.keys().cloned().collect();
        let bad = (0..n).find_map(|i| {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (bi, bj, bk) = (&self.basis[i], &self.basis[j], &self.basis[k]);
                    if let Some(m) = max_total {
                        let di = bi.degree;
                        let dj = bj.degree;
                        let dk = bk.degree;
                        if di + dj + dk > m || di + dj > m || dj + dk > m || di + dk > m {
                            continue;
                        }
                    }
                    let w: Vec<i64> = (0..bi.weight.len()).map(|t| bi.weight[t] + bj.weight[t] + bk.weight[t]).collect();
                    if !present.contains(&w) {
                        continue;
                    }
                    let ij = self.bracket(i, j);
                    let jk = self.bracket(j, k);
                    let ki = self.bracket(k, i);
                    let mut acc = Accum::new();
                    acc.add_scaled(&Q::one(), &self.bracket_vec(&ij, &[(k, Q::one())]));
                    acc.add_scaled(&Q::one(), &self.bracket_vec(&jk, &[(i, Q::one())]));
                    acc.add_scaled(&Q::one(), &self.bracket_vec(&ki, &[(j, Q::one())]));
                    if !acc.is_empty() {
                        return Some((i, j, k));
                    }
                }
            }
            None
        });
        match bad {
            None => Ok(()),
            Some((i, j, k)) => Err(Error::Internal(format!("Jacobi identity fails on basis triple ({i},{j},{k}) of {}", self.name))),
        }
    }

    /// Every nonzero bracket respects degrees and weights.
    pub fn check_grading(&self) -> Result<()> {
        for (&(i, j), v) in &self.brackets {
            let d = self.basis[i].degree + self.basis[j].degree;
            let w: Vec<i64> = self.basis[i].weight.iter().zip(&self.basis[j].weight).map(|(a, b)| a + b).collect();
            for (k, _) in v {
                if self.basis[*k].degree != d || self.basis[*k].weight != w {
                    return Err(Error::Internal(format!("bracket [{i},{j}] has a component {k} of wrong degree or weight")));
                }
            }
        }
        Ok(())
    }

    /// Whether the negative part is generated by the degree `-1` component.
    pub fn g_minus_generated(&self) -> bool {
        let mut span = crate::linalg::Echelon::new();
        let mut layer: Vec<SVec> = self.indices_of_degree(-1).into_iter().map(|i| vec![(i, Q::one())]).collect();
        let gens = layer.clone();
        for v in &layer {
            span.insert(v.clone());
        }
        while !layer.is_empty() {
            let mut next = Vec::new();
            for v in &layer {
                for g in &gens {
                    let b = self.bracket_vec(g, v);
                    if !b.is_empty() && span.insert(b.clone()).is_some() {
                        next.push(b);
                    }
                }
            }
            layer = next;
        }
        span.len() == self.g_minus().len()
    }

    pub fn selected_nodes(&self) -> Vec<usize> {
        self.grading.as_ref().map(|g| g.selected()).unwrap_or_default()
    }

    pub fn root_index_of(&self, root: &[i64]) -> Option<usize> {
        self.basis.iter().position(|b| matches!(&b.tag, ElemTag::Root(r) if r == root))
    }

    pub fn cartan_index(&self, i: usize) -> Option<usize> {
        self.basis.iter().position(|b| b.tag == ElemTag::Cartan(i))
    }
}

/// Build the simple Lie algebra of `rs` in a Chevalley basis.
///
/// The adjoint module is first built from the Cartan data alone as the
/// irreducible module of highest weight `theta`; the root vectors are then
/// generated as iterated commutators of the Chevalley generators, and the
/// structure constants are read off the matrices.
pub fn build_chevalley(rs: &RootSystem) -> Result<ZGradedLieAlgebra> {
    let r = rs.rank();
    let np = rs.num_positive_roots();
    let theta = rs.adjoint_highest_weight();
    let hw = highest_weight_rep(rs, &theta, usize::MAX)?;
    let n = hw.dim();
    if n != 2 * np + r {
        return Err(Error::Internal(format!("adjoint module has dimension {n}")));
    }

    let (recipe, mats) = root_vector_matrices(rs, &hw, None)?;

    let mut basis = Vec::with_capacity(n);
    for b in &rs.positive_roots {
        basis.push(BasisElement { tag: ElemTag::Root(b.clone()), weight: rs.to_coroot(b), degree: 0 });
    }
    for b in &rs.positive_roots {
        let m: Vec<i64> = b.iter().map(|x| -x).collect();
        basis.push(BasisElement { tag: ElemTag::Root(m.clone()), weight: rs.to_coroot(&m), degree: 0 });
    }
    for i in 0..r {
        basis.push(BasisElement { tag: ElemTag::Cartan(i), weight: vec![0; r], degree: 0 });
    }
    let mut alg = ZGradedLieAlgebra::new(rs.spec.algebra_name(), basis);
    alg.recipe = recipe;

    // root lookup in the signed basis
    let mut root_at: HashMap<Vec<i64>, usize> = HashMap::new();
    for (k, b) in alg.basis.iter().enumerate() {
        if let ElemTag::Root(x) = &b.tag {
            root_at.insert(x.clone(), k);
        }
    }
    let pivot: Vec<(usize, usize)> = mats
        .iter()
        .map(|m| {
            let row = m.rows.iter().position(|r| !r.is_empty()).expect("nonzero matrix");
            (row, m.rows[row][0].0)
        })
        .collect();

    for a in 0..2 * np {
        for b in a + 1..2 * np {
            let ra = match &alg.basis[a].tag {
                ElemTag::Root(x) => x.clone(),
                _ => unreachable!(),
            };
            let rb = match &alg.basis[b].tag {
                ElemTag::Root(x) => x.clone(),
                _ => unreachable!(),
            };
            let sum: Vec<i64> = ra.iter().zip(&rb).map(|(x, y)| x + y).collect();
            if sum.iter().all(|&x| x == 0) {
                // [E_xi, F_xi] = h_xi
                let c = commutator(&mats[a], &mats[b]);
                let xi = &ra;
                let coef = coroot_coefficients(rs, xi);
                let expect = lincomb_mats(&coef.iter().enumerate().map(|(i, &c)| (q(c), &mats[2 * np + i])).collect::<Vec<_>>(), n);
                if c == expect {
                    let v: SVec = coef.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (2 * np + i, q(c))).collect();
                    alg.set_bracket(a, b, v);
                } else {
                    let negv = lincomb_mats(&[(q(-1), &expect)], n);
                    if c == negv && a >= np {
                        // F first: [F_xi, E_xi] = -h_xi
                        let v: SVec = coef.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (2 * np + i, q(-c))).collect();
                        alg.set_bracket(a, b, v);
                    } else {
                        return Err(Error::Internal(format!("[E,F] is not the coroot for root {xi:?}")));
                    }
                }
                continue;
            }
            let Some(&t) = root_at.get(&sum) else { continue };
            let c = commutator(&mats[a], &mats[b]);
            let (pr, pc) = pivot[t];
            let num = crate::linalg::get(&c.rows[pr], pc).cloned().unwrap_or_else(Q::zero);
            let den = crate::linalg::get(&mats[t].rows[pr], pc).cloned().unwrap();
            let coef = num / den;
            let expect = lincomb_mats(&[(coef.clone(), &mats[t])], n);
            if c != expect {
                return Err(Error::Internal(format!("commutator of root vectors {ra:?}, {rb:?} is not proportional to the root vector")));
            }
            if to_i64(&coef).is_none() {
                return Err(Error::Internal(format!("non-integral structure constant for {ra:?}, {rb:?}")));
            }
            alg.set_bracket(a, b, vec![(t, coef)]);
        }
    }
    for i in 0..r {
        let h = 2 * np + i;
        for a in 0..2 * np {
            let w = alg.basis[a].weight[i];
            if w != 0 {
                alg.set_bracket(h, a, vec![(a, q(w))]);
            }
        }
    }
    alg.frame = Some(WeightFrame {
        rs: rs.clone(),
        levi_nodes: (0..r).collect(),
        raising: (0..r).map(|i| rs.root_index(&unit(r, i)).unwrap()).collect(),
        lowering: (0..r).map(|i| np + rs.root_index(&unit(r, i)).unwrap()).collect(),
    });
    alg.check_grading()?;
    alg.check_jacobi(None)?;
    Ok(alg)
}

/// Coefficients of `xi^vee` in the simple coroots.
pub fn coroot_coefficients(rs: &RootSystem, xi: &[i64]) -> Vec<i64> {
    let nn = rs.form(xi, xi);
    xi.iter()
        .enumerate()
        .map(|(j, &x)| {
            let v = 2 * x * rs.symmetrizer[j];
            assert!(v % nn == 0, "coroot coefficient not integral");
            v / nn
        })
        .collect()
}

pub fn commutator(a: &SparseRationalMatrix, b: &SparseRationalMatrix) -> SparseRationalMatrix {
    let ab = a.mul(b);
    let ba = b.mul(a);
    SparseRationalMatrix {
        nrows: a.nrows,
        ncols: a.ncols,
        rows: ab.rows.iter().zip(&ba.rows).map(|(x, y)| axpy(x, &q(-1), y)).collect(),
    }
}

pub fn lincomb_mats(terms: &[(Q, &SparseRationalMatrix)], n: usize) -> SparseRationalMatrix {
    let mut rows = vec![Vec::new(); n];
    for (c, m) in terms {
        for (i, r) in m.rows.iter().enumerate() {
            rows[i] = axpy(&rows[i], c, r);
        }
    }
    SparseRationalMatrix { nrows: n, ncols: n, rows }
}

/// Matrices of all Chevalley basis elements (positive roots, negative
/// roots, coroots) on a highest weight module. When `recipe` is given it is
/// replayed; otherwise it is derived and returned.
pub fn root_vector_matrices(
    rs: &RootSystem,
    hw: &HwRep,
    recipe: Option<&[RecipeStep]>,
) -> Result<(Vec<RecipeStep>, Vec<SparseRationalMatrix>)> {
    let r = rs.rank();
    let np = rs.num_positive_roots();
    let n = hw.dim();
    let mut e: Vec<Option<SparseRationalMatrix>> = vec![None; np];
    let mut f: Vec<Option<SparseRationalMatrix>> = vec![None; np];
    for i in 0..r {
        let idx = rs.root_index(&unit(r, i)).unwrap();
        e[idx] = Some(hw.e_matrix(i));
        f[idx] = Some(hw.f_matrix(i));
    }
    let h: Vec<SparseRationalMatrix> = (0..r).map(|i| hw.h_matrix(i)).collect();
    let steps: Vec<RecipeStep> = match recipe {
        Some(s) => s.to_vec(),
        None => derive_recipe(rs),
    };
    let mut out_steps = Vec::with_capacity(steps.len());
    for st in steps {
        let ei = e[rs.root_index(&unit(r, st.simple)).unwrap()].clone().unwrap();
        let fi = f[rs.root_index(&unit(r, st.simple)).unwrap()].clone().unwrap();
        let eb = e[st.beta].clone().unwrap();
        let fb = f[st.beta].clone().unwrap();
        let inv = crate::linalg::qr(1, st.div);
        let ex = lincomb_mats(&[(inv.clone(), &commutator(&ei, &eb))], n);
        let mut fx = lincomb_mats(&[(inv, &commutator(&fi, &fb))], n);
        let mut sign = st.f_sign;
        if recipe.is_none() {
            let xi = &rs.positive_roots[st.root];
            let coef = coroot_coefficients(rs, xi);
            let hx = lincomb_mats(&coef.iter().enumerate().map(|(i, &c)| (q(c), &h[i])).collect::<Vec<_>>(), n);
            let c = commutator(&ex, &fx);
            if c == hx {
                sign = 1;
            } else if c == lincomb_mats(&[(q(-1), &hx)], n) {
                sign = -1;
            } else {
                return Err(Error::Internal(format!("root vector normalization failed for root {xi:?}")));
            }
        }
        if sign < 0 {
            fx = lincomb_mats(&[(q(-1), &fx)], n);
        }
        e[st.root] = Some(ex);
        f[st.root] = Some(fx);
        out_steps.push(RecipeStep { f_sign: sign, ..st });
    }
    let mut mats = Vec::with_capacity(2 * np + r);
    mats.extend(e.into_iter().map(|m| m.unwrap()));
    mats.extend(f.into_iter().map(|m| m.unwrap()));
    mats.extend(h);
    Ok((out_steps, mats))
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn derive_recipe(rs: &RootSystem) -> Vec<RecipeStep> {
    let r = rs.rank();
    let mut steps = Vec::new();
    for (k, xi) in rs.positive_roots.iter().enumerate() {
        if RootSystem::height(xi) == 1 {
            continue;
        }
        let (i, beta) = (0..r)
            .find_map(|i| {
                let mut b = xi.clone();
                b[i] -= 1;
                rs.root_index(&b).map(|bi| (i, bi))
            })
            .expect("every non-simple root has a simple predecessor");
        let mut p = 0;
        let mut c = rs.positive_roots[beta].clone();
        loop {
            c[i] -= 1;
            if rs.is_root(&c) {
                p += 1;
            } else {
                break;
            }
        }
        steps.push(RecipeStep { root: k, simple: i, beta, div: p + 1, f_sign: 1 });
    }
    steps
}

/// Grade `alg` (a simple algebra from `build_chevalley`) by `spec`.
pub fn apply_grading(alg: &ZGradedLieAlgebra, rs: &RootSystem, spec: &GradingSpec) -> Result<ZGradedLieAlgebra> {
    spec.validate(rs.rank())?;
    let mut out = alg.clone();
    for b in out.basis.iter_mut() {
        b.degree = match &b.tag {
            ElemTag::Root(x) => x.iter().zip(&spec.degrees).map(|(a, d)| a * d).sum(),
            _ => 0,
        };
    }
    out.grading = Some(spec.clone());
    let levi_nodes: Vec<usize> = (0..rs.rank()).filter(|&j| spec.degrees[j] == 0).collect();
    let raising = levi_nodes.iter().map(|&j| out.root_index_of(&unit(rs.rank(), j)).unwrap()).collect();
    let lowering = levi_nodes
        .iter()
        .map(|&j| {
            let m: Vec<i64> = unit(rs.rank(), j).iter().map(|x| -x).collect();
            out.root_index_of(&m).unwrap()
        })
        .collect();
    out.frame = Some(WeightFrame { rs: rs.clone(), levi_nodes, raising, lowering });
    let sel: Vec<String> = spec.selected().iter().map(|i| (i + 1).to_string()).collect();
    out.name = format!("{} nodes {{{}}}", rs.spec.algebra_name(), sel.join(","));
    Ok(out)
}

pub fn levi_pieces(alg: &ZGradedLieAlgebra) -> LeviPieces {
    let g_minus = alg.g_minus();
    let l = alg.indices_of_degree(0);
    let levi_nodes: Vec<usize> = alg.frame.as_ref().map(|f| f.levi_nodes.clone()).unwrap_or_default();
    let l1: Vec<usize> = l
        .iter()
        .copied()
        .filter(|&i| match &alg.basis[i].tag {
            ElemTag::Root(_) => true,
            ElemTag::Cartan(j) => levi_nodes.contains(j),
            _ => false,
        })
        .collect();
    // z: sum_i c_i h_i with alpha_j(h) = sum_i c_i a_ij = 0 for Levi nodes j
    let mut z = Vec::new();
    if let Some(frame) = &alg.frame {
        let r = frame.rs.rank();
        let a = &frame.rs.cartan_matrix;
        let cols: Vec<SVec> = (0..r)
            .map(|i| levi_nodes.iter().enumerate().filter(|(_, &j)| a[i][j] != 0).map(|(t, &j)| (t, q(a[i][j]))).collect())
            .collect();
        for kv in crate::linalg::kernel_of_columns(&cols) {
            let v: SVec = kv.iter().filter_map(|(i, c)| alg.cartan_index(*i).map(|h| (h, c.clone()))).collect();
            z.push(v);
        }
        z.sort();
    }
    LeviPieces { g_minus, l, l1, z }
}

/// Nonpositive part `g_- + g0` of a graded algebra, where `g0` is a subset of
/// the degree-zero basis closed under brackets.
pub fn nonpositive_part(alg: &ZGradedLieAlgebra, g0: &[usize], name: &str) -> Result<ZGradedLieAlgebra> {
    let mut keep = alg.g_minus();
    keep.extend_from_slice(g0);
    subalgebra_on(alg, &keep, name)
}

/// Restrict to the span of a subset of basis elements, which must be closed.
pub fn subalgebra_on(alg: &ZGradedLieAlgebra, keep: &[usize], name: &str) -> Result<ZGradedLieAlgebra> {
    let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let basis = keep.iter().map(|&i| alg.basis[i].clone()).collect();
    let mut out = ZGradedLieAlgebra::new(name, basis);
    for (a, &i) in keep.iter().enumerate() {
        for (b, &j) in keep.iter().enumerate().skip(a + 1) {
            let v = alg.bracket(i, j);
            let mut w = Vec::with_capacity(v.len());
            for (k, c) in v {
                match pos.get(&k) {
                    Some(&t) => w.push((t, c)),
                    None => return Err(Error::Invalid(format!("basis subset of {} is not closed under the bracket", alg.name))),
                }
            }
            w.sort_by_key(|p| p.0);
            out.set_bracket(a, b, w);
        }
    }
    out.grading = alg.grading.clone();
    if let Some(f) = &alg.frame {
        let raising: Option<Vec<usize>> = f.raising.iter().map(|i| pos.get(i).copied()).collect();
        let lowering: Option<Vec<usize>> = f.lowering.iter().map(|i| pos.get(i).copied()).collect();
        if let (Some(raising), Some(lowering)) = (raising, lowering) {
            out.frame = Some(WeightFrame { rs: f.rs.clone(), levi_nodes: f.levi_nodes.clone(), raising, lowering });
        }
    }
    Ok(out)
}

/// Scale helper used by callers that need `c * e_i`.
pub fn unit_vec(i: usize, c: Q) -> SVec {
    scale(&c, &[(i, Q::one())])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, CartanMatrixSpec, TypeLetter};

    fn alg(t: TypeLetter, n: usize) -> (RootSystem, ZGradedLieAlgebra) {
        let rs = build_root_system(CartanMatrixSpec::new(t, n).unwrap()).unwrap();
        let a = build_chevalley(&rs).unwrap();
        (rs, a)
    }

    #[test]
    fn sl2_relations() {
        let (_, a) = alg(TypeLetter::A, 1);
        assert_eq!(a.dim(), 3);
        // basis: e, f, h
        assert_eq!(a.bracket(0, 1), vec![(2, q(1))]);
        assert_eq!(a.bracket(2, 0), vec![(0, q(2))]);
        assert_eq!(a.bracket(2, 1), vec![(1, q(-2))]);
    }

    #[test]
    fn g2_root_sums() {
        let (rs, a) = alg(TypeLetter::G, 2);
        assert_eq!(a.dim(), 14);
        for i in 0..12 {
            for j in 0..12 {
                let (ElemTag::Root(x), ElemTag::Root(y)) = (&a.basis[i].tag, &a.basis[j].tag) else { unreachable!() };
                let s: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
                let expect_nonzero = rs.is_root(&s) || s.iter().all(|&v| v == 0);
                assert_eq!(!a.bracket(i, j).is_empty(), expect_nonzero, "{x:?} {y:?}");
            }
        }
    }

    #[test]
    fn grading_g2_node1() {
        let (rs, a) = alg(TypeLetter::G, 2);
        let g = apply_grading(&a, &rs, &GradingSpec::from_nodes(2, &[0])).unwrap();
        let d = g.dims_by_degree();
        assert_eq!((d[&-3], d[&-2], d[&-1], d[&0]), (2, 1, 2, 4));
        assert_eq!(g.depth(), 3);
        assert!(g.g_minus_generated());
        let lp = levi_pieces(&g);
        assert_eq!((lp.l.len(), lp.l1.len(), lp.z.len()), (4, 3, 1));
    }

    #[test]
    fn zero_grading_rejected() {
        let (rs, a) = alg(TypeLetter::A, 2);
        assert!(apply_grading(&a, &rs, &GradingSpec { degrees: vec![0, 0] }).is_err());
    }
}
