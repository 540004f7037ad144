//! Coefficient modules: adjoint, Riemannian `g_- + l1`, the quotient
//! `g/(g_- + l1)`, trivial, and irreducible highest weight modules.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liealg::{root_vector_matrices, BasisElement, ElemTag, WeightFrame, ZGradedLieAlgebra};
use crate::linalg::{q, svser, Accum, Echelon, SparseRationalMatrix, Q, SVec};
use crate::rootsys::RootSystem;

pub const DEFAULT_DIMENSION_BOUND: usize = 1000;

/// A highest weight module given by the Chevalley generators.
#[derive(Clone, Debug)]
pub struct HwRep {
    pub lambda: Vec<i64>,
    /// Weight of each basis vector, coroot coordinates.
    pub weights: Vec<Vec<i64>>,
    /// `e[v][j] = E_j v`.
    pub e: Vec<Vec<SVec>>,
    /// `f[v][j] = F_j v`.
    pub f: Vec<Vec<SVec>>,
}

impl HwRep {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn e_matrix(&self, j: usize) -> SparseRationalMatrix {
        let cols: Vec<SVec> = self.e.iter().map(|c| c[j].clone()).collect();
        SparseRationalMatrix::from_columns(self.dim(), &cols)
    }

    pub fn f_matrix(&self, j: usize) -> SparseRationalMatrix {
        let cols: Vec<SVec> = self.f.iter().map(|c| c[j].clone()).collect();
        SparseRationalMatrix::from_columns(self.dim(), &cols)
    }

    pub fn h_matrix(&self, j: usize) -> SparseRationalMatrix {
        let cols: Vec<SVec> = self
            .weights
            .iter()
            .enumerate()
            .map(|(v, w)| if w[j] == 0 { Vec::new() } else { vec![(v, q(w[j]))] })
            .collect();
        SparseRationalMatrix::from_columns(self.dim(), &cols)
    }
}

/// Irreducible module `L(lambda)` built by lowering from a highest vector.
///
/// A new vector `f_i u` is kept iff it is independent from the vectors
/// already kept at its weight after applying all `e_j`; on the irreducible
/// quotient this detects exactly the radical of the contravariant form.
pub fn highest_weight_rep(rs: &RootSystem, lambda: &[i64], bound: usize) -> Result<HwRep> {
    let r = rs.rank();
    if lambda.len() != r {
        return Err(Error::Invalid(format!("highest weight has {} coordinates, rank is {r}", lambda.len())));
    }
    if lambda.iter().any(|&x| x < 0) {
        return Err(Error::Invalid(format!("highest weight {lambda:?} is not dominant")));
    }
    let predicted = rs.weyl_dimension(lambda);
    let predicted = crate::linalg::to_i64(&predicted).ok_or_else(|| Error::Internal("Weyl dimension is not an integer".into()))?;
    if predicted as u128 > bound as u128 {
        return Err(Error::Bound(format!("L({lambda:?}) has dimension {predicted}, above the bound {bound}")));
    }
    let mut weights = vec![lambda.to_vec()];
    let mut e: Vec<Vec<SVec>> = vec![vec![Vec::new(); r]];
    let mut f: Vec<Vec<SVec>> = vec![vec![Vec::new(); r]];
    let mut level = vec![0usize];
    while !level.is_empty() {
        let mut groups: BTreeMap<Vec<i64>, Vec<(usize, usize)>> = BTreeMap::new();
        for &u in &level {
            for i in 0..r {
                let mu: Vec<i64> = (0..r).map(|k| weights[u][k] - rs.cartan_matrix[k][i]).collect();
                groups.entry(mu).or_default().push((i, u));
            }
        }
        let mut next = Vec::new();
        let mut f_updates: Vec<(usize, usize, SVec)> = Vec::new();
        for (mu, cands) in groups {
            let mut ech = Echelon::new();
            let mut chosen: BTreeMap<usize, usize> = BTreeMap::new();
            for (pos, &(i, u)) in cands.iter().enumerate() {
                let mut acc = Accum::new();
                for j in 0..r {
                    for (x, c) in &e[u][j] {
                        for (y, d) in &f[*x][i] {
                            acc.add(y * r + j, c * d);
                        }
                    }
                }
                acc.add(u * r + i, q(weights[u][i]));
                let stack = acc.finish();
                match ech.insert_tagged(stack.clone(), vec![(pos, Q::one())]) {
                    Ok(_) => {
                        let v = weights.len();
                        weights.push(mu.clone());
                        let mut ev = vec![Vec::new(); r];
                        for (idx, c) in stack {
                            ev[idx % r].push((idx / r, c));
                        }
                        e.push(ev);
                        f.push(vec![Vec::new(); r]);
                        chosen.insert(pos, v);
                        f_updates.push((u, i, vec![(v, Q::one())]));
                        next.push(v);
                    }
                    Err(rel) => {
                        let mut acc = Accum::new();
                        for (k, t) in rel {
                            if k != pos {
                                acc.add(chosen[&k], -t);
                            }
                        }
                        f_updates.push((u, i, acc.finish()));
                    }
                }
            }
        }
        for (u, i, v) in f_updates {
            f[u][i] = v;
        }
        level = next;
    }
    if weights.len() as i64 != predicted {
        return Err(Error::Internal(format!(
            "built L({lambda:?}) of dimension {}, Weyl formula gives {predicted}",
            weights.len()
        )));
    }
    Ok(HwRep { lambda: lambda.to_vec(), weights, e, f })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModElem {
    pub degree: i64,
    pub weight: Vec<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GradedModule {
    pub name: String,
    pub elems: Vec<ModElem>,
    /// `action[a][m] = x_a . m` for the algebra basis elements that act.
    pub action: Vec<Option<Vec<ActionColumn>>>,
    /// Highest degree that is complete; `None` when nothing is truncated.
    pub complete_to: Option<i64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActionColumn(#[serde(with = "svser")] pub SVec);

impl GradedModule {
    pub fn dim(&self) -> usize {
        self.elems.len()
    }

    pub fn acts(&self, a: usize) -> bool {
        self.action.get(a).is_some_and(|x| x.is_some())
    }

    pub fn act(&self, a: usize, m: usize) -> &SVec {
        &self.action[a].as_ref().expect("element does not act on this module")[m].0
    }

    pub fn act_vec(&self, a: usize, v: &[(usize, Q)]) -> SVec {
        let mut acc = Accum::new();
        for (m, c) in v {
            acc.add_scaled(c, self.act(a, *m));
        }
        acc.finish()
    }

    pub fn dims_by_degree(&self) -> BTreeMap<i64, usize> {
        let mut m = BTreeMap::new();
        for e in &self.elems {
            *m.entry(e.degree).or_insert(0) += 1;
        }
        m
    }

    /// Check `x.(y.m) - y.(x.m) = [x,y].m` for all acting pairs and all `m`
    /// within the completeness bound.
    pub fn check_representation(&self, alg: &ZGradedLieAlgebra) -> Result<()> {
        let acting: Vec<usize> = (0..alg.dim()).filter(|&a| self.acts(a)).collect();
        for (ia, &a) in acting.iter().enumerate() {
            for &b in &acting[ia + 1..] {
                let ab = alg.bracket(a, b);
                if ab.iter().any(|(c, _)| !self.acts(*c)) {
                    continue;
                }
                for m in 0..self.dim() {
                    let d = self.elems[m].degree + alg.basis[a].degree + alg.basis[b].degree;
                    if let Some(t) = self.complete_to {
                        if d > t {
                            continue;
                        }
                    }
                    let xy = self.act_vec(a, self.act(b, m));
                    let yx = self.act_vec(b, self.act(a, m));
                    let mut acc = Accum::new();
                    acc.add_scaled(&Q::one(), &xy);
                    acc.add_scaled(&-Q::one(), &yx);
                    for (c, k) in &ab {
                        acc.add_scaled(&-k.clone(), self.act(*c, m));
                    }
                    if !acc.is_empty() {
                        return Err(Error::Internal(format!("representation property fails on ({a},{b}) at vector {m} of {}", self.name)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Every acting element shifts degrees and weights additively.
    pub fn check_weights(&self, alg: &ZGradedLieAlgebra) -> Result<()> {
        for a in 0..alg.dim() {
            if !self.acts(a) {
                continue;
            }
            for m in 0..self.dim() {
                for (t, _) in self.act(a, m) {
                    let ok = self.elems[*t].degree == self.elems[m].degree + alg.basis[a].degree
                        && self.elems[*t].weight.iter().zip(&self.elems[m].weight).zip(&alg.basis[a].weight).all(|((x, y), z)| *x == y + z);
                    if !ok {
                        return Err(Error::Internal(format!("action of {a} on {m} breaks weight or degree additivity in {}", self.name)));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Which algebra elements act on modules derived from `alg`: everything for
/// a finite algebra, the nonpositive part for a truncated one.
fn acting_elements(alg: &ZGradedLieAlgebra) -> Vec<usize> {
    match alg.complete_to {
        None => (0..alg.dim()).collect(),
        Some(_) => (0..alg.dim()).filter(|&i| alg.basis[i].degree <= 0).collect(),
    }
}

pub fn adjoint_module(alg: &ZGradedLieAlgebra) -> GradedModule {
    let elems = alg.basis.iter().map(|b| ModElem { degree: b.degree, weight: b.weight.clone() }).collect();
    let mut action = vec![None; alg.dim()];
    for a in acting_elements(alg) {
        action[a] = Some((0..alg.dim()).map(|m| ActionColumn(alg.bracket(a, m))).collect());
    }
    GradedModule { name: format!("adjoint of {}", alg.name), elems, action, complete_to: alg.complete_to }
}

/// Submodule spanned by a subset of the algebra basis.
fn sub_adjoint(alg: &ZGradedLieAlgebra, keep: &[usize], acting: &[usize], name: String) -> Result<GradedModule> {
    let mut pos = vec![usize::MAX; alg.dim()];
    for (k, &i) in keep.iter().enumerate() {
        pos[i] = k;
    }
    let elems = keep.iter().map(|&i| ModElem { degree: alg.basis[i].degree, weight: alg.basis[i].weight.clone() }).collect();
    let mut action = vec![None; alg.dim()];
    for &a in acting {
        let mut cols = Vec::with_capacity(keep.len());
        for &m in keep {
            let v = alg.bracket(a, m);
            let mut w = Vec::with_capacity(v.len());
            for (t, c) in v {
                if pos[t] == usize::MAX {
                    return Err(Error::Internal(format!("subspace for {name} is not invariant")));
                }
                w.push((pos[t], c));
            }
            w.sort_by_key(|p| p.0);
            cols.push(ActionColumn(w));
        }
        action[a] = Some(cols);
    }
    Ok(GradedModule { name, elems, action, complete_to: None })
}

fn levi_roots_filter(alg: &ZGradedLieAlgebra) -> (Vec<usize>, Vec<usize>) {
    let levi_nodes: Vec<usize> = alg.frame.as_ref().map(|f| f.levi_nodes.clone()).unwrap_or_default();
    let mut l1 = Vec::new();
    let mut sel_cartan = Vec::new();
    for i in 0..alg.dim() {
        if alg.basis[i].degree != 0 {
            continue;
        }
        match &alg.basis[i].tag {
            ElemTag::Root(_) => l1.push(i),
            ElemTag::Cartan(j) if levi_nodes.contains(j) => l1.push(i),
            ElemTag::Cartan(_) => sel_cartan.push(i),
            _ => {}
        }
    }
    (l1, sel_cartan)
}

/// `g_- + l1` with the induced action of `g_- + l`.
pub fn riemann_module(alg: &ZGradedLieAlgebra) -> Result<GradedModule> {
    let (l1, _) = levi_roots_filter(alg);
    let mut keep = alg.g_minus();
    keep.extend(l1);
    let acting: Vec<usize> = (0..alg.dim()).filter(|&i| alg.basis[i].degree <= 0).collect();
    sub_adjoint(alg, &keep, &acting, format!("g_- + l1 of {}", alg.name))
}

/// The quotient `g/(g_- + l1)`, spanned by the positive root vectors and
/// the coroots of the selected nodes; the action of `g_- + l` is the
/// adjoint action followed by the projection.
pub fn coriemann_module(alg: &ZGradedLieAlgebra) -> Result<GradedModule> {
    let (_, sel_cartan) = levi_roots_filter(alg);
    let mut keep: Vec<usize> = sel_cartan;
    keep.extend((0..alg.dim()).filter(|&i| alg.basis[i].degree > 0));
    let mut pos = vec![usize::MAX; alg.dim()];
    for (k, &i) in keep.iter().enumerate() {
        pos[i] = k;
    }
    let elems = keep.iter().map(|&i| ModElem { degree: alg.basis[i].degree, weight: alg.basis[i].weight.clone() }).collect();
    let mut action = vec![None; alg.dim()];
    for a in (0..alg.dim()).filter(|&i| alg.basis[i].degree <= 0) {
        let cols = keep
            .iter()
            .map(|&m| {
                let v = alg.bracket(a, m);
                let w: SVec = v.into_iter().filter(|(t, _)| pos[*t] != usize::MAX).map(|(t, c)| (pos[t], c)).collect();
                let mut w = w;
                w.sort_by_key(|p| p.0);
                ActionColumn(w)
            })
            .collect();
        action[a] = Some(cols);
    }
    Ok(GradedModule { name: format!("g/(g_- + l1) of {}", alg.name), elems, action, complete_to: None })
}

pub fn trivial_module(alg: &ZGradedLieAlgebra) -> GradedModule {
    let elems = vec![ModElem { degree: 0, weight: vec![0; alg.weight_rank()] }];
    let action = (0..alg.dim()).map(|_| Some(vec![ActionColumn(Vec::new())])).collect();
    GradedModule { name: "trivial".into(), elems, action, complete_to: None }
}

/// `L(lambda)` as a module over the Chevalley algebra `alg` (which must come
/// from `build_chevalley` for the same root system), placed in degree 0.
pub fn build_irreducible(alg: &ZGradedLieAlgebra, lambda: &[i64], bound: usize) -> Result<GradedModule> {
    let frame = alg.frame.as_ref().ok_or_else(|| Error::Invalid("algebra has no root system".into()))?;
    let rs = &frame.rs;
    let hw = highest_weight_rep(rs, lambda, bound)?;
    let (_, mats) = root_vector_matrices(rs, &hw, Some(&alg.recipe))?;
    if mats.len() != alg.dim() {
        return Err(Error::Invalid("algebra is not a Chevalley basis of its root system".into()));
    }
    let elems = hw.weights.iter().map(|w| ModElem { degree: 0, weight: w.clone() }).collect();
    let action = mats.iter().map(|m| Some(m.columns().into_iter().map(ActionColumn).collect())).collect();
    Ok(GradedModule { name: format!("L({lambda:?})"), elems, action, complete_to: None })
}

/// Package a `g0`-module `v` as the abelian degree `-1` part of the graded
/// algebra `v + g0`, where `g0` is spanned by the elements `g0_elems` of
/// `g0_alg` (closed under the bracket). With `grading_element`, `g0` is
/// extended by the element acting by the degree.
pub fn abelian_negative(
    v: &GradedModule,
    g0_alg: &ZGradedLieAlgebra,
    g0_elems: &[usize],
    grading_element: bool,
    name: &str,
) -> Result<ZGradedLieAlgebra> {
    let nv = v.dim();
    let mut basis: Vec<BasisElement> =
        (0..nv).map(|i| BasisElement { tag: ElemTag::Vector(i), weight: v.elems[i].weight.clone(), degree: -1 }).collect();
    let mut pos = vec![usize::MAX; g0_alg.dim()];
    for (k, &a) in g0_elems.iter().enumerate() {
        pos[a] = nv + k;
        let mut b = g0_alg.basis[a].clone();
        b.degree = 0;
        basis.push(b);
    }
    let zidx = basis.len();
    if grading_element {
        basis.push(BasisElement { tag: ElemTag::Grading, weight: vec![0; v.elems.first().map_or(0, |e| e.weight.len())], degree: 0 });
    }
    let mut out = ZGradedLieAlgebra::new(name, basis);
    for (k, &a) in g0_elems.iter().enumerate() {
        if !v.acts(a) {
            return Err(Error::Invalid(format!("element {a} does not act on {}", v.name)));
        }
        for m in 0..nv {
            out.set_bracket(nv + k, m, v.act(a, m).clone());
        }
        for &b in &g0_elems[k + 1..] {
            let w = g0_alg.bracket(a, b);
            let mut mapped = Vec::with_capacity(w.len());
            for (t, c) in w {
                if pos[t] == usize::MAX {
                    return Err(Error::Invalid("g0 elements are not closed under the bracket".into()));
                }
                mapped.push((pos[t], c));
            }
            mapped.sort_by_key(|p| p.0);
            out.set_bracket(nv + k, pos[b], mapped);
        }
    }
    if grading_element {
        for m in 0..nv {
            out.set_bracket(zidx, m, vec![(m, q(-1))]);
        }
    }
    if let Some(f) = &g0_alg.frame {
        let raising: Option<Vec<usize>> = f.raising.iter().map(|&i| (pos[i] != usize::MAX).then_some(pos[i])).collect();
        let lowering: Option<Vec<usize>> = f.lowering.iter().map(|&i| (pos[i] != usize::MAX).then_some(pos[i])).collect();
        if let (Some(raising), Some(lowering)) = (raising, lowering) {
            out.frame = Some(WeightFrame { rs: f.rs.clone(), levi_nodes: f.levi_nodes.clone(), raising, lowering });
        }
    }
    Ok(out)
}

/// A module over a subalgebra: the degree `-1` part of `alg` as a module
/// over the degree-0 elements `acting` (brackets must stay in degree `-1`).
pub fn degree_component_module(alg: &ZGradedLieAlgebra, degree: i64, acting: &[usize]) -> Result<GradedModule> {
    let keep = alg.indices_of_degree(degree);
    let mut m = sub_adjoint(alg, &keep, acting, format!("degree {degree} part of {}", alg.name))?;
    for e in m.elems.iter_mut() {
        e.degree = -1;
    }
    Ok(m)
}

pub fn is_dominant(lambda: &[i64]) -> bool {
    lambda.iter().all(|&x| x >= 0)
}

#[allow(dead_code)]
fn nonneg(x: &Q) -> bool {
    !x.is_negative() || x.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::build_chevalley;
    use crate::rootsys::{build_root_system, CartanMatrixSpec, TypeLetter};

    fn rs(t: TypeLetter, n: usize) -> RootSystem {
        build_root_system(CartanMatrixSpec::new(t, n).unwrap()).unwrap()
    }

    #[test]
    fn small_irreducibles() {
        assert_eq!(highest_weight_rep(&rs(TypeLetter::A, 2), &[1, 0], 1000).unwrap().dim(), 3);
        assert_eq!(highest_weight_rep(&rs(TypeLetter::G, 2), &[1, 0], 1000).unwrap().dim(), 7);
        assert_eq!(highest_weight_rep(&rs(TypeLetter::G, 2), &[0, 0], 1000).unwrap().dim(), 1);
        assert!(highest_weight_rep(&rs(TypeLetter::A, 2), &[-1, 0], 1000).is_err());
        assert!(matches!(highest_weight_rep(&rs(TypeLetter::E, 8), &[0, 0, 0, 0, 0, 0, 0, 1], 100), Err(Error::Bound(_))));
    }

    #[test]
    fn g2_seven_dim_module_is_a_representation() {
        let r = rs(TypeLetter::G, 2);
        let alg = build_chevalley(&r).unwrap();
        let m = build_irreducible(&alg, &[1, 0], DEFAULT_DIMENSION_BOUND).unwrap();
        assert_eq!(m.dim(), 7);
        m.check_representation(&alg).unwrap();
        m.check_weights(&alg).unwrap();
    }
}
