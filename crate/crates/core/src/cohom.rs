//! Chevalley-Eilenberg cochains of the negative part `g_-` with values in a
//! graded module, and their cohomology by internal degree and weight.
//!
//! A basis cochain `(I, m)` is the alternating map sending `x_I` (the
//! increasing exterior monomial `I` of `g_-` basis elements) to the module
//! basis vector `m` and every other monomial to zero. Its internal degree is
//! `deg m - deg I`, its weight `wt m - wt I`. The differential is
//!
//! `(df)(x_0..x_s) = sum_i (-1)^i x_i.f(..^i..) + sum_{i<j} (-1)^{i+j} f([x_i,x_j], ..^i..^j..)`
//!
//! and it preserves both labels, so everything is computed blockwise.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmod::GradedModule;
use crate::liealg::ZGradedLieAlgebra;
use crate::linalg::{kernel_of_columns, q, Accum, Echelon, SparseRationalMatrix, Q, SVec};

pub type Mono = Vec<u16>;

/// A basis cochain; `mono` holds positions in the `g_-` basis list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cochain {
    pub mono: Mono,
    pub elem: usize,
}

pub struct CochainComplex<'a> {
    pub alg: &'a ZGradedLieAlgebra,
    pub module: &'a GradedModule,
    /// Algebra indices of the `g_-` basis, in order.
    pub gm: Vec<usize>,
    gm_deg: Vec<i64>,
    gm_wt: Vec<Vec<i64>>,
    /// For each `c`: the pairs `u < v` with `[x_u, x_v]` having coefficient
    /// `kappa` on `x_c`.
    rev_bracket: Vec<Vec<(u16, u16, Q)>>,
    module_groups: BTreeMap<(i64, Vec<i64>), Vec<usize>>,
    mono_cache: Mutex<HashMap<usize, Arc<MonoGroups>>>,
    ad_cache: Mutex<HashMap<usize, Arc<Vec<Vec<(u16, Q)>>>>>,
}

type MonoGroups = HashMap<(i64, Vec<i64>), Vec<Mono>>;

/// Cohomology of one weight space of one slice.
#[derive(Clone, Debug)]
pub struct WeightBlock {
    pub weight: Vec<i64>,
    pub basis: Vec<Cochain>,
    pub dim_prev: usize,
    pub dim_next: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub dim_h: usize,
    /// Echelon form of the coboundaries followed by the representatives.
    pub ech: Echelon,
    pub n_boundary: usize,
}

impl WeightBlock {
    pub fn representatives(&self) -> &[SVec] {
        &self.ech.rows()[self.n_boundary..]
    }

    /// Coordinates of a cocycle of this block on the representatives.
    pub fn coordinates(&self, z: SVec) -> Result<SVec> {
        let (res, coords) = self.ech.reduce_coords(z);
        if !res.is_empty() {
            return Err(Error::Internal(format!("vector of weight {:?} is not a cocycle", self.weight)));
        }
        let mut out: SVec = coords
            .into_iter()
            .filter(|(p, _)| *p >= self.n_boundary)
            .map(|(p, c)| (p - self.n_boundary, c))
            .collect();
        out.sort_by_key(|p| p.0);
        let mut acc = Accum::new();
        for (i, c) in out {
            acc.add(i, c);
        }
        Ok(acc.finish())
    }
}

#[derive(Clone, Debug)]
pub struct CohomologySlice {
    pub s: usize,
    pub k: i64,
    /// `(dim C^{s-1}_k, dim C^s_k, dim C^{s+1}_k)`.
    pub dim_cochains: (usize, usize, usize),
    pub rank_in: usize,
    pub rank_out: usize,
    pub dim_h: usize,
    pub valid: bool,
    pub blocks: Vec<WeightBlock>,
}

impl CohomologySlice {
    /// Nonzero weight blocks.
    pub fn nonzero_blocks(&self) -> impl Iterator<Item = &WeightBlock> {
        self.blocks.iter().filter(|b| b.dim_h > 0)
    }

    pub fn block(&self, weight: &[i64]) -> Option<&WeightBlock> {
        self.blocks.iter().find(|b| b.weight == weight)
    }

    /// The `(k, s)` bigrading label; the order of a structure function is
    /// the internal degree `k`.
    pub fn spencer_bigrade(&self) -> (i64, usize) {
        (self.k, self.s)
    }
}

fn position(sorted: &[u16], x: u16) -> usize {
    sorted.partition_point(|&y| y < x)
}

fn insert_sorted(sorted: &[u16], x: u16) -> Option<(Mono, usize)> {
    let p = position(sorted, x);
    if p < sorted.len() && sorted[p] == x {
        return None;
    }
    let mut v = Vec::with_capacity(sorted.len() + 1);
    v.extend_from_slice(&sorted[..p]);
    v.push(x);
    v.extend_from_slice(&sorted[p..]);
    Some((v, p))
}

fn sign(e: usize) -> Q {
    if e.is_multiple_of(2) {
        Q::one()
    } else {
        -Q::one()
    }
}

impl<'a> CochainComplex<'a> {
    pub fn new(alg: &'a ZGradedLieAlgebra, module: &'a GradedModule) -> Result<Self> {
        let gm = alg.g_minus();
        if gm.len() > u16::MAX as usize {
            return Err(Error::Bound("negative part too large".into()));
        }
        for &x in &gm {
            if !module.acts(x) {
                return Err(Error::Invalid(format!("{} does not carry an action of the negative part", module.name)));
            }
        }
        let mut pos = vec![usize::MAX; alg.dim()];
        for (p, &x) in gm.iter().enumerate() {
            pos[x] = p;
        }
        let mut rev_bracket = vec![Vec::new(); gm.len()];
        for u in 0..gm.len() {
            for v in u + 1..gm.len() {
                for (c, kappa) in alg.bracket(gm[u], gm[v]) {
                    if pos[c] == usize::MAX {
                        return Err(Error::Internal("negative part is not closed".into()));
                    }
                    rev_bracket[pos[c]].push((u as u16, v as u16, kappa));
                }
            }
        }
        let mut module_groups: BTreeMap<(i64, Vec<i64>), Vec<usize>> = BTreeMap::new();
        for (m, e) in module.elems.iter().enumerate() {
            module_groups.entry((e.degree, e.weight.clone())).or_default().push(m);
        }
        Ok(Self {
            gm_deg: gm.iter().map(|&x| alg.basis[x].degree).collect(),
            gm_wt: gm.iter().map(|&x| alg.basis[x].weight.clone()).collect(),
            alg,
            module,
            gm,
            rev_bracket,
            module_groups,
            mono_cache: Default::default(),
            ad_cache: Default::default(),
        })
    }

    pub fn dim_g_minus(&self) -> usize {
        self.gm.len()
    }

    fn monomials(&self, s: usize) -> Arc<MonoGroups> {
        if let Some(m) = self.mono_cache.lock().unwrap().get(&s) {
            return m.clone();
        }
        let n = self.gm.len();
        let r = self.alg.weight_rank();
        let mut out: HashMap<(i64, Vec<i64>), Vec<Mono>> = HashMap::new();
        if s <= n {
            let mut idx: Vec<usize> = (0..s).collect();
            loop {
                let d: i64 = idx.iter().map(|&i| self.gm_deg[i]).sum();
                let w: Vec<i64> = (0..r).map(|t| idx.iter().map(|&i| self.gm_wt[i][t]).sum()).collect();
                out.entry((d, w)).or_default().push(idx.iter().map(|&i| i as u16).collect());
                // next combination
                let mut i = s;
                loop {
                    if i == 0 {
                        let arc = Arc::new(out);
                        self.mono_cache.lock().unwrap().insert(s, arc.clone());
                        return arc;
                    }
                    i -= 1;
                    if idx[i] < n - s + i {
                        break;
                    }
                }
                idx[i] += 1;
                for j in i + 1..s {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
        let arc = Arc::new(out);
        self.mono_cache.lock().unwrap().insert(s, arc.clone());
        arc
    }

    /// Internal degrees where `C^s` is nonzero.
    pub fn degrees(&self, s: usize) -> BTreeSet<i64> {
        let monos = self.monomials(s);
        let mono_degs: BTreeSet<i64> = monos.keys().map(|k| k.0).collect();
        let mod_degs: BTreeSet<i64> = self.module_groups.keys().map(|k| k.0).collect();
        let mut out = BTreeSet::new();
        for &a in &mod_degs {
            for &b in &mono_degs {
                out.insert(a - b);
            }
        }
        out
    }

    /// Weights occurring in `C^s_k`.
    pub fn weights(&self, s: usize, k: i64) -> BTreeSet<Vec<i64>> {
        let monos = self.monomials(s);
        let mut out = BTreeSet::new();
        for (dm, wm) in self.module_groups.keys() {
            for (di, wi) in monos.keys() {
                if dm - di == k {
                    out.insert(wm.iter().zip(wi).map(|(a, b)| a - b).collect());
                }
            }
        }
        out
    }

    pub fn block_basis(&self, s: usize, k: i64, mu: &[i64]) -> Vec<Cochain> {
        let monos = self.monomials(s);
        let mut out = Vec::new();
        for ((dm, wm), elems) in &self.module_groups {
            let key = (dm - k, wm.iter().zip(mu).map(|(a, b)| a - b).collect::<Vec<i64>>());
            if let Some(ms) = monos.get(&key) {
                for mono in ms {
                    for &e in elems {
                        out.push(Cochain { mono: mono.clone(), elem: e });
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Ordered basis of `C^s_k`: weight blocks in increasing weight order.
    pub fn cochain_basis(&self, s: usize, k: i64) -> Vec<Cochain> {
        self.weights(s, k).iter().flat_map(|mu| self.block_basis(s, k, mu)).collect()
    }

    /// `d(I, m)` as a map from cochains to coefficients.
    pub fn d_cochain(&self, c: &Cochain, out: &mut HashMap<Cochain, Q>) {
        let n = self.gm.len() as u16;
        let i_set = &c.mono;
        for j in 0..n {
            if let Some((jm, p)) = insert_sorted(i_set, j) {
                let sg = sign(p);
                for (t, v) in self.module.act(self.gm[j as usize], c.elem) {
                    let key = Cochain { mono: jm.clone(), elem: *t };
                    *out.entry(key).or_insert_with(Q::zero) += &sg * v;
                }
            }
        }
        for (qpos, &cc) in i_set.iter().enumerate() {
            let mut rest: Mono = i_set.clone();
            rest.remove(qpos);
            for (u, v, kappa) in &self.rev_bracket[cc as usize] {
                let Some((r1, _)) = insert_sorted(&rest, *u) else { continue };
                let Some((jm, _)) = insert_sorted(&r1, *v) else { continue };
                let a = position(&jm, *u);
                let b = position(&jm, *v);
                let sg = sign(a + b + qpos);
                let key = Cochain { mono: jm, elem: c.elem };
                *out.entry(key).or_insert_with(Q::zero) += sg * kappa;
            }
        }
    }

    /// For each position `c`: the positions `u` with `[x, x_u]` having
    /// coefficient `kappa` on `x_c`.
    fn ad_reverse(&self, x: usize) -> Arc<Vec<Vec<(u16, Q)>>> {
        if let Some(v) = self.ad_cache.lock().unwrap().get(&x) {
            return v.clone();
        }
        let mut pos = HashMap::new();
        for (p, &g) in self.gm.iter().enumerate() {
            pos.insert(g, p);
        }
        let mut rev = vec![Vec::new(); self.gm.len()];
        for (u, &g) in self.gm.iter().enumerate() {
            for (t, kappa) in self.alg.bracket(x, g) {
                if let Some(&c) = pos.get(&t) {
                    rev[c].push((u as u16, kappa));
                }
            }
        }
        let arc = Arc::new(rev);
        self.ad_cache.lock().unwrap().insert(x, arc.clone());
        arc
    }

    /// Action of a degree-zero algebra element `x` on the cochain `(I, m)`:
    /// `(x.f)(v_1..v_s) = x.f(v_1..v_s) - sum_t f(..[x, v_t]..)`.
    pub fn act_cochain(&self, x: usize, c: &Cochain, out: &mut HashMap<Cochain, Q>) {
        for (t, v) in self.module.act(x, c.elem) {
            *out.entry(Cochain { mono: c.mono.clone(), elem: *t }).or_insert_with(Q::zero) += v;
        }
        let rev = self.ad_reverse(x);
        for (qpos, &cc) in c.mono.iter().enumerate() {
            let mut rest = c.mono.clone();
            rest.remove(qpos);
            for (u, kappa) in &rev[cc as usize] {
                let Some((jm, t)) = insert_sorted(&rest, *u) else { continue };
                let sg = sign(t + qpos);
                *out.entry(Cochain { mono: jm, elem: c.elem }).or_insert_with(Q::zero) -= sg * kappa;
            }
        }
    }

    fn images(&self, src: &[Cochain], dst: &[Cochain], f: impl Fn(&Cochain, &mut HashMap<Cochain, Q>)) -> Result<Vec<SVec>> {
        let index: HashMap<&Cochain, usize> = dst.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut cols = Vec::with_capacity(src.len());
        for c in src {
            let mut img = HashMap::new();
            f(c, &mut img);
            let mut col: SVec = Vec::with_capacity(img.len());
            for (key, v) in img {
                if v.is_zero() {
                    continue;
                }
                match index.get(&key) {
                    Some(&i) => col.push((i, v)),
                    None => return Err(Error::Internal(format!("image cochain {key:?} outside the target block"))),
                }
            }
            col.sort_by_key(|p| p.0);
            cols.push(col);
        }
        Ok(cols)
    }

    /// Matrix of `d: C^s_{k,mu} -> C^{s+1}_{k,mu}` in the block bases.
    pub fn differential_block(&self, s: usize, k: i64, mu: &[i64]) -> Result<SparseRationalMatrix> {
        let src = self.block_basis(s, k, mu);
        let dst = self.block_basis(s + 1, k, mu);
        let cols = self.images(&src, &dst, |c, out| self.d_cochain(c, out))?;
        Ok(SparseRationalMatrix::from_columns(dst.len(), &cols))
    }

    /// Matrix of `d: C^s_k -> C^{s+1}_k` in the bases of `cochain_basis`.
    pub fn differential(&self, s: usize, k: i64) -> Result<SparseRationalMatrix> {
        let src = self.cochain_basis(s, k);
        let dst = self.cochain_basis(s + 1, k);
        let cols = self.images(&src, &dst, |c, out| self.d_cochain(c, out))?;
        Ok(SparseRationalMatrix::from_columns(dst.len(), &cols))
    }

    /// Whether the module is complete in every degree the slice reads.
    pub fn slice_valid(&self, s: usize, k: i64) -> bool {
        match self.module.complete_to {
            None => true,
            Some(t) => k - (s.max(1) as i64 - 1) <= t,
        }
    }

    pub fn block(&self, s: usize, k: i64, mu: &[i64]) -> Result<WeightBlock> {
        let prev = if s > 0 { self.block_basis(s - 1, k, mu) } else { Vec::new() };
        let cur = self.block_basis(s, k, mu);
        let next = self.block_basis(s + 1, k, mu);
        let d_in = if s > 0 { self.images(&prev, &cur, |c, out| self.d_cochain(c, out))? } else { Vec::new() };
        let d_out = self.images(&cur, &next, |c, out| self.d_cochain(c, out))?;
        // d o d = 0 on this consecutive pair
        for col in &d_in {
            let mut acc = Accum::new();
            for (i, c) in col {
                acc.add_scaled(c, &d_out[*i]);
            }
            if !acc.is_empty() {
                return Err(Error::Internal(format!("d o d != 0 at s={s}, k={k}, weight {mu:?}")));
            }
        }
        let mut ech = Echelon::new();
        for col in &d_in {
            ech.insert(col.clone());
        }
        let n_boundary = ech.len();
        let kernel = kernel_of_columns(&d_out);
        let rank_out = cur.len() - kernel.len();
        for z in kernel {
            ech.insert(z);
        }
        let dim_h = ech.len() - n_boundary;
        Ok(WeightBlock {
            weight: mu.to_vec(),
            dim_prev: prev.len(),
            dim_next: next.len(),
            rank_in: n_boundary,
            rank_out,
            dim_h,
            basis: cur,
            ech,
            n_boundary,
        })
    }

    pub fn slice(&self, s: usize, k: i64) -> Result<CohomologySlice> {
        let weights: Vec<Vec<i64>> = self.weights(s, k).into_iter().collect();
        let blocks: Vec<WeightBlock> = weights.par_iter().map(|mu| self.block(s, k, mu)).collect::<Result<_>>()?;
        let prev: usize = if s > 0 { self.weights(s - 1, k).iter().map(|mu| self.block_basis(s - 1, k, mu).len()).sum() } else { 0 };
        let next: usize = self.weights(s + 1, k).iter().map(|mu| self.block_basis(s + 1, k, mu).len()).sum();
        let cur: usize = blocks.iter().map(|b| b.basis.len()).sum();
        Ok(CohomologySlice {
            s,
            k,
            dim_cochains: (prev, cur, next),
            rank_in: blocks.iter().map(|b| b.rank_in).sum(),
            rank_out: blocks.iter().map(|b| b.rank_out).sum(),
            dim_h: blocks.iter().map(|b| b.dim_h).sum(),
            valid: self.slice_valid(s, k),
            blocks,
        })
    }

    /// Induced action of the degree-zero element `x` from the block `src`
    /// to the block `dst` (of weight `src.weight + wt x`), as columns of
    /// coordinates on the representatives of `dst`.
    pub fn induced_action(&self, x: usize, src: &WeightBlock, dst: Option<&WeightBlock>) -> Result<Vec<SVec>> {
        let reps = src.representatives();
        let Some(dst) = dst else {
            return Ok(vec![Vec::new(); reps.len()]);
        };
        let mut cols = Vec::with_capacity(reps.len());
        for r in reps {
            let mut img: HashMap<Cochain, Q> = HashMap::new();
            for (i, c) in r {
                let mut one = HashMap::new();
                self.act_cochain(x, &src.basis[*i], &mut one);
                for (key, v) in one {
                    *img.entry(key).or_insert_with(Q::zero) += c * v;
                }
            }
            let index: HashMap<&Cochain, usize> = dst.basis.iter().enumerate().map(|(i, c)| (c, i)).collect();
            let mut acc = Accum::new();
            for (key, v) in img {
                if v.is_zero() {
                    continue;
                }
                let Some(&i) = index.get(&key) else {
                    return Err(Error::Internal("action leaves the target block".into()));
                };
                acc.add(i, v);
            }
            cols.push(dst.coordinates(acc.finish())?);
        }
        Ok(cols)
    }
}

/// Cohomology slices for `s` over a degree range (all degrees where
/// `C^s` is nonzero when the range is `None`).
pub fn cohomology(
    alg: &ZGradedLieAlgebra,
    module: &GradedModule,
    s: usize,
    k_range: Option<(i64, i64)>,
) -> Result<Vec<CohomologySlice>> {
    let cx = CochainComplex::new(alg, module)?;
    let degs: Vec<i64> = match k_range {
        Some((a, b)) => (a..=b).collect(),
        None => cx.degrees(s).into_iter().collect(),
    };
    degs.into_iter().map(|k| cx.slice(s, k)).collect()
}

/// Dimension of `C^s_k`.
pub fn cochain_dim(cx: &CochainComplex, s: usize, k: i64) -> usize {
    cx.weights(s, k).iter().map(|mu| cx.block_basis(s, k, mu).len()).sum()
}

pub fn q_unit() -> Q {
    q(1)
}
