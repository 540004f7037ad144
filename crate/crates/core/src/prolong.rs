//! Degree-zero derivations and the Tanaka prolongation of a nonpositively
//! graded Lie algebra, computed degree by degree as solution spaces of the
//! derivation equations.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kernel_of_columns, neg, Accum, Echelon, Q, SVec};
use crate::liealg::{BasisElement, ElemTag, ZGradedLieAlgebra};
use crate::rootsys::{RootSystem, TypeLetter};

pub const DEFAULT_KMAX: i64 = 8;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProlongedAlgebra {
    /// Dimensions of the input by degree.
    pub nonpositive: BTreeMap<i64, usize>,
    /// `g_- + g_0 + g_1 + ... + g_{computed_to}`, with all brackets whose
    /// total degree is at most `computed_to`.
    pub algebra: ZGradedLieAlgebra,
    /// Dimension of `g_k` for `k = 1..=computed_to`.
    pub positive_dims: Vec<usize>,
    pub computed_to: i64,
    /// Some `g_k`, `k >= 1`, vanished; the algebra is then complete.
    pub stabilized: bool,
}

impl ProlongedAlgebra {
    pub fn dims_by_degree(&self) -> BTreeMap<i64, usize> {
        self.algebra.dims_by_degree()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum YamaguchiClass {
    EqualsS,
    Depth1Vect,
    ContactK,
    SpecialSlSp,
}

/// A degree-`k` derivation `D`: its weight and the images `D(x)` of the
/// negative basis elements, in the order of `ZGradedLieAlgebra::g_minus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationMap {
    pub weight: Vec<i64>,
    pub images: Vec<SVec>,
}

/// Expresses vectors in a fixed basis.
struct SpanSolver {
    ech: Echelon,
}

impl SpanSolver {
    fn new(vectors: &[SVec]) -> Self {
        let mut ech = Echelon::new();
        for (i, v) in vectors.iter().enumerate() {
            if ech.insert_tagged(v.clone(), vec![(i, Q::one())]).is_err() {
                panic!("SpanSolver basis is dependent");
            }
        }
        Self { ech }
    }

    fn coordinates(&self, v: SVec) -> Option<SVec> {
        let (r, t) = self.ech.reduce_tagged(v, Vec::new());
        r.is_empty().then(|| neg(&t))
    }
}

fn flatten(images: &[SVec], stride: usize) -> SVec {
    let mut out = Vec::new();
    for (p, img) in images.iter().enumerate() {
        for (t, c) in img {
            out.push((p * stride + t, c.clone()));
        }
    }
    out
}

/// Solve for the degree-`k` derivations `D` of the negative part of `alg`
/// with `D(x)` in the span of the basis elements of degree `deg x + k`.
/// Every such element must already be present in `alg`.
pub fn prolong_step(alg: &ZGradedLieAlgebra, k: i64) -> Result<Vec<DerivationMap>> {
    if k < 0 {
        return Err(Error::Invalid(format!("prolongation degree {k} must be nonnegative")));
    }
    let gm = alg.g_minus();
    let n = alg.dim();
    let wr = alg.weight_rank();
    let targets: Vec<Vec<usize>> = gm.iter().map(|&x| alg.indices_of_degree(alg.basis[x].degree + k)).collect();
    let mut weights: BTreeSet<Vec<i64>> = BTreeSet::new();
    for (p, &x) in gm.iter().enumerate() {
        for &t in &targets[p] {
            weights.insert((0..wr).map(|i| alg.basis[t].weight[i] - alg.basis[x].weight[i]).collect());
        }
    }
    let gpos: HashMap<usize, usize> = gm.iter().enumerate().map(|(p, &x)| (x, p)).collect();
    let npairs = gm.len();
    // containing[z]: pairs (a, b) with a < b and the coefficient of x_z in [x_a, x_b]
    let mut containing: Vec<Vec<(usize, usize, Q)>> = vec![Vec::new(); gm.len()];
    for a in 0..gm.len() {
        for b in a + 1..gm.len() {
            for (z, c) in alg.bracket(gm[a], gm[b]) {
                let pz = *gpos.get(&z).ok_or_else(|| Error::Invalid("negative part is not closed".into()))?;
                containing[pz].push((a, b, c));
            }
        }
    }
    let row = |a: usize, b: usize, o: usize| (a * npairs + b) * n + o;
    let weights: Vec<Vec<i64>> = weights.into_iter().collect();
    let per_weight: Vec<Vec<DerivationMap>> = weights
        .par_iter()
        .map(|mu| {
            let mut vars: Vec<(usize, usize)> = Vec::new();
            for (p, &x) in gm.iter().enumerate() {
                for &t in &targets[p] {
                    if (0..wr).all(|i| alg.basis[t].weight[i] == alg.basis[x].weight[i] + mu[i]) {
                        vars.push((p, t));
                    }
                }
            }
            let cols: Vec<SVec> = vars
                .iter()
                .map(|&(z, t)| {
                    let mut acc = Accum::new();
                    for (a, b, c) in &containing[z] {
                        acc.add(row(*a, *b, t), c.clone());
                    }
                    for y in 0..gm.len() {
                        if y == z {
                            continue;
                        }
                        // -[D x_a, x_b] - [x_a, D x_b]
                        let (a, b, v) = if z < y { (z, y, neg(&alg.bracket(t, gm[y]))) } else { (y, z, neg(&alg.bracket(gm[y], t))) };
                        for (o, c) in v {
                            acc.add(row(a, b, o), c);
                        }
                    }
                    acc.finish()
                })
                .collect();
            kernel_of_columns(&cols)
                .into_iter()
                .map(|kv| {
                    let mut images = vec![Vec::new(); gm.len()];
                    for (j, c) in kv {
                        let (p, t) = vars[j];
                        images[p].push((t, c));
                    }
                    for img in images.iter_mut() {
                        img.sort_by_key(|e| e.0);
                    }
                    DerivationMap { weight: mu.clone(), images }
                })
                .collect()
        })
        .collect();
    Ok(per_weight.into_iter().flatten().collect())
}

/// Apply the element `e` of `alg` (acting by the bracket) to a vector.
fn act(alg: &ZGradedLieAlgebra, e: usize, v: &SVec) -> SVec {
    alg.bracket_vec(&[(e, Q::one())], v)
}

/// Append a component of degree `k` to `alg` and fill in every bracket of
/// total degree `k` between elements of nonnegative degree.
fn add_component(alg: &mut ZGradedLieAlgebra, k: i64, maps: &[DerivationMap]) -> Result<()> {
    let gm = alg.g_minus();
    let old = alg.dim();
    for (i, m) in maps.iter().enumerate() {
        alg.basis.push(BasisElement { tag: ElemTag::Derivation { degree: k, index: i }, weight: m.weight.clone(), degree: k });
    }
    let new: Vec<usize> = (old..alg.dim()).collect();
    for (i, m) in maps.iter().enumerate() {
        for (p, &x) in gm.iter().enumerate() {
            alg.set_bracket(new[i], x, m.images[p].clone());
        }
    }
    let stride = alg.dim();
    let solver = SpanSolver::new(&maps.iter().map(|m| flatten(&m.images, stride)).collect::<Vec<_>>());
    // pairs of nonnegative degree summing to k
    let nonneg: Vec<usize> = (0..alg.dim()).filter(|&i| alg.basis[i].degree >= 0).collect();
    let mut pairs = Vec::new();
    for (ai, &a) in nonneg.iter().enumerate() {
        for &b in &nonneg[ai + 1..] {
            if alg.basis[a].degree + alg.basis[b].degree == k {
                pairs.push((a, b));
            }
        }
    }
    let snapshot = &*alg;
    let results: Vec<Result<((usize, usize), SVec)>> = pairs
        .par_iter()
        .map(|&(a, b)| {
            // [a, b](x) = a(b(x)) - b(a(x))
            let images: Vec<SVec> = gm
                .iter()
                .map(|&x| {
                    let bx = snapshot.bracket(b, x);
                    let ax = snapshot.bracket(a, x);
                    let mut acc = Accum::new();
                    acc.add_scaled(&Q::one(), &act(snapshot, a, &bx));
                    acc.add_scaled(&-Q::one(), &act(snapshot, b, &ax));
                    acc.finish()
                })
                .collect();
            let coords = solver.coordinates(flatten(&images, stride)).ok_or_else(|| {
                Error::Internal(format!("bracket of elements {a}, {b} leaves the degree {k} component of {}", snapshot.name))
            })?;
            Ok(((a, b), coords.into_iter().map(|(i, c)| (new[i], c)).collect()))
        })
        .collect();
    for r in results {
        let ((a, b), v) = r?;
        alg.set_bracket(a, b, v);
    }
    Ok(())
}

/// `g_- + der_0(g_-)`, where `g_-` is the negative part of `alg`.
pub fn der0(alg: &ZGradedLieAlgebra) -> Result<ZGradedLieAlgebra> {
    let gm = alg.g_minus();
    let base = crate::liealg::subalgebra_on(alg, &gm, &format!("g_- of {}", alg.name))?;
    let maps = prolong_step(&base, 0)?;
    let mut out = base;
    out.name = format!("g_- + der0 of {}", alg.name);
    out.frame = None;
    add_component(&mut out, 0, &maps)?;
    Ok(out)
}

/// Prolong the nonpositive algebra `base` up to degree `kmax`, stopping
/// early when a component vanishes.
pub fn full_prolong(base: &ZGradedLieAlgebra, kmax: i64) -> Result<ProlongedAlgebra> {
    if kmax < 1 {
        return Err(Error::Invalid(format!("kmax must be at least 1, got {kmax}")));
    }
    if base.max_degree() > 0 {
        return Err(Error::Invalid(format!("{} has positive degrees", base.name)));
    }
    let nonpositive = base.dims_by_degree();
    let mut alg = base.clone();
    alg.name = format!("prolong of {}", base.name);
    let mut positive_dims = Vec::new();
    let mut stabilized = false;
    let mut computed_to = kmax;
    for k in 1..=kmax {
        let maps = prolong_step(&alg, k)?;
        if maps.is_empty() {
            stabilized = true;
            computed_to = k;
            positive_dims.push(0);
            break;
        }
        positive_dims.push(maps.len());
        add_component(&mut alg, k, &maps)?;
    }
    alg.complete_to = if stabilized { None } else { Some(kmax) };
    Ok(ProlongedAlgebra { nonpositive, algebra: alg, positive_dims, computed_to, stabilized })
}

/// Verify the derivation property of every positive component.
pub fn check_derivations(p: &ProlongedAlgebra) -> Result<()> {
    let alg = &p.algebra;
    let gm = alg.g_minus();
    for d in (0..alg.dim()).filter(|&i| alg.basis[i].degree > 0) {
        for (ai, &a) in gm.iter().enumerate() {
            for &b in &gm[ai + 1..] {
                let ab = alg.bracket(a, b);
                let lhs = act(alg, d, &ab);
                let mut acc = Accum::new();
                acc.add_scaled(&Q::one(), &alg.bracket_vec(&alg.bracket(d, a), &[(b, Q::one())]));
                acc.add_scaled(&Q::one(), &alg.bracket_vec(&[(a, Q::one())], &alg.bracket(d, b)));
                acc.add_scaled(&-Q::one(), &lhs);
                if !acc.is_empty() {
                    return Err(Error::Internal(format!("element {d} of {} is not a derivation", alg.name)));
                }
            }
        }
    }
    Ok(())
}

/// Classify a grading of a simple algebra by the exceptional families of
/// the prolongation of its negative part.
pub fn yamaguchi_classify(alg: &ZGradedLieAlgebra) -> Result<YamaguchiClass> {
    let frame = alg.frame.as_ref().ok_or_else(|| Error::Invalid("algebra has no root system".into()))?;
    Ok(classify_selection(&frame.rs, &alg.selected_nodes()))
}

/// The same classification computed from the root system alone.
pub fn classify_selection(rs: &RootSystem, sel: &[usize]) -> YamaguchiClass {
    let mut sel = sel.to_vec();
    sel.sort_unstable();
    let degree = |b: &[i64]| sel.iter().map(|&i| b[i]).sum::<i64>();
    let depth = degree(&rs.maximal_root);
    if depth == 1 {
        return YamaguchiClass::Depth1Vect;
    }
    if depth == 2 && rs.positive_roots.iter().filter(|b| degree(b) == 2).count() == 1 {
        return YamaguchiClass::ContactK;
    }
    let n = rs.rank();
    let special = match rs.spec.type_letter {
        TypeLetter::A => sel.len() == 2 && ((sel[0] == 0 && sel[1] > 0 && sel[1] < n - 1) || (sel[1] == n - 1 && sel[0] > 0 && sel[0] < n - 1)),
        TypeLetter::C => sel == [0, n - 1],
        _ => false,
    };
    if special {
        YamaguchiClass::SpecialSlSp
    } else {
        YamaguchiClass::EqualsS
    }
}

/// Whether `(s_-, s_0)_* = s` is expected: it fails only for `sl(n+1)` and
/// `sp(2n)` graded by the first node alone (or the last node of `sl`).
pub fn expects_equal_with_g0(alg: &ZGradedLieAlgebra) -> bool {
    let Some(frame) = alg.frame.as_ref() else { return false };
    let n = frame.rs.rank();
    let sel = alg.selected_nodes();
    !match frame.rs.spec.type_letter {
        TypeLetter::A => sel == vec![0] || sel == vec![n - 1],
        TypeLetter::C => sel == vec![0],
        _ => false,
    }
}
