//! Decomposition of cohomology slices into irreducible modules over the
//! reductive degree-zero part, by joint kernels of the Levi root vectors.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cohom::{CochainComplex, CohomologySlice, WeightBlock};
use crate::error::{Error, Result};
use crate::linalg::{q_to_string, to_i64, Echelon, Q, SVec};
use crate::rootsys::{convert_weight, Basis, RootSystem, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExtremalKind {
    Lowest,
    Highest,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IrreducibleSummand {
    pub kind: ExtremalKind,
    pub degree: i64,
    /// Coroot coordinates.
    pub weight_cm: Vec<i64>,
    /// Simple-root coordinates, as exact rationals written `p` or `p/q`.
    pub weight_fw: Vec<String>,
    pub multiplicity: usize,
    /// Cohomological degree.
    pub s: usize,
}

pub fn simple_coords(rs: &RootSystem, cm: &[i64]) -> Vec<Q> {
    convert_weight(&Weight::coroot(cm), Basis::SimpleRoot, rs).coords
}

pub fn simple_coords_str(rs: &RootSystem, cm: &[i64]) -> Vec<String> {
    simple_coords(rs, cm).iter().map(q_to_string).collect()
}

/// Simple-root coordinates if they are all integers.
pub fn simple_coords_int(rs: &RootSystem, cm: &[i64]) -> Option<Vec<i64>> {
    simple_coords(rs, cm).iter().map(to_i64).collect()
}

/// Matrices of the given degree-zero elements on the representatives of
/// `block`, each mapping into the block of the shifted weight.
pub fn g0_action(cx: &CochainComplex, slice: &CohomologySlice, block: &WeightBlock, elems: &[usize]) -> Result<Vec<Vec<SVec>>> {
    elems
        .iter()
        .map(|&x| {
            let w: Vec<i64> = block.weight.iter().zip(&cx.alg.basis[x].weight).map(|(a, b)| a + b).collect();
            cx.induced_action(x, block, slice.block(&w))
        })
        .collect()
}

/// Joint kernel of the lowering (or raising) operators on each weight space
/// of the slice, with its representatives.
pub fn extremal_vectors(cx: &CochainComplex, slice: &CohomologySlice, kind: ExtremalKind) -> Result<Vec<(Vec<i64>, Vec<SVec>)>> {
    let frame = cx.alg.frame.as_ref().ok_or_else(|| Error::Invalid("algebra has no weight frame".into()))?;
    let ops: &[usize] = match kind {
        ExtremalKind::Lowest => &frame.lowering,
        ExtremalKind::Highest => &frame.raising,
    };
    let mut out = Vec::new();
    for block in slice.nonzero_blocks() {
        let extremal_candidate = frame.levi_nodes.iter().all(|&j| match kind {
            ExtremalKind::Lowest => block.weight[j] <= 0,
            ExtremalKind::Highest => block.weight[j] >= 0,
        });
        if !extremal_candidate {
            continue;
        }
        let maps = g0_action(cx, slice, block, ops)?;
        let n = block.dim_h;
        let stride = maps.iter().flat_map(|m| m.iter().flat_map(|c| c.iter().map(|p| p.0 + 1))).max().unwrap_or(0);
        let cols: Vec<SVec> = (0..n)
            .map(|i| {
                let mut v = Vec::new();
                for (t, m) in maps.iter().enumerate() {
                    for (r, c) in &m[i] {
                        v.push((t * stride + r, c.clone()));
                    }
                }
                v
            })
            .collect();
        let ker = crate::linalg::kernel_of_columns(&cols);
        if ker.is_empty() {
            continue;
        }
        // express in the cochain basis of the block
        let reps = block.representatives();
        let vecs: Vec<SVec> = ker
            .iter()
            .map(|kv| {
                let mut acc = crate::linalg::Accum::new();
                for (i, c) in kv {
                    acc.add_scaled(c, &reps[*i]);
                }
                acc.finish()
            })
            .collect();
        out.push((block.weight.clone(), vecs));
    }
    Ok(out)
}

/// Dimension of the irreducible Levi module with the given extremal weight.
pub fn levi_dimension(rs: &RootSystem, levi_nodes: &[usize], weight: &[i64], kind: ExtremalKind) -> Q {
    let lambda: Vec<i64> = match kind {
        ExtremalKind::Highest => weight.to_vec(),
        ExtremalKind::Lowest => weight.iter().map(|x| -x).collect(),
    };
    let restricted: Vec<i64> = (0..lambda.len()).map(|j| if levi_nodes.contains(&j) { lambda[j] } else { 0 }).collect();
    rs.weyl_dimension_on(&restricted, levi_nodes)
}

/// Irreducible constituents of a slice. Fails if the dimensions of the
/// constituents do not add up to the dimension of the slice.
pub fn decompose(cx: &CochainComplex, slice: &CohomologySlice, kind: ExtremalKind) -> Result<Vec<IrreducibleSummand>> {
    if slice.dim_h == 0 {
        return Ok(Vec::new());
    }
    let frame = cx.alg.frame.as_ref().ok_or_else(|| Error::Invalid("algebra has no weight frame".into()))?;
    let ext = extremal_vectors(cx, slice, kind)?;
    let mut total = Q::from_integer(0.into());
    let mut out = Vec::new();
    for (w, vecs) in ext {
        let d = levi_dimension(&frame.rs, &frame.levi_nodes, &w, kind);
        total += &d * Q::from_integer(vecs.len().into());
        out.push(IrreducibleSummand {
            kind,
            degree: slice.k,
            weight_fw: simple_coords_str(&frame.rs, &w),
            weight_cm: w,
            multiplicity: vecs.len(),
            s: slice.s,
        });
    }
    if total != Q::from_integer(slice.dim_h.into()) {
        return Err(Error::Internal(format!(
            "constituents of H^{} in degree {} add up to {}, but the space has dimension {}",
            slice.s,
            slice.k,
            q_to_string(&total),
            slice.dim_h
        )));
    }
    out.sort();
    Ok(out)
}

/// Check that the representatives of each block are eigenvectors of the
/// torus with the block's weight, i.e. the Cartan elements act diagonally.
pub fn check_weight_vectors(cx: &CochainComplex, slice: &CohomologySlice) -> Result<()> {
    let cartan: Vec<(usize, usize)> = (0..cx.alg.dim())
        .filter_map(|i| match cx.alg.basis[i].tag {
            crate::liealg::ElemTag::Cartan(j) => Some((i, j)),
            _ => None,
        })
        .collect();
    for block in slice.nonzero_blocks() {
        for &(h, j) in &cartan {
            let m = cx.induced_action(h, block, Some(block))?;
            for (i, col) in m.iter().enumerate() {
                let expect: SVec = if block.weight[j] == 0 { Vec::new() } else { vec![(i, crate::linalg::q(block.weight[j]))] };
                if *col != expect {
                    return Err(Error::Internal(format!("Cartan element {h} is not scalar on weight {:?}", block.weight)));
                }
            }
        }
    }
    Ok(())
}

/// Group summands by degree for reports.
pub fn by_degree(summands: &[IrreducibleSummand]) -> BTreeMap<i64, Vec<&IrreducibleSummand>> {
    let mut m: BTreeMap<i64, Vec<&IrreducibleSummand>> = BTreeMap::new();
    for s in summands {
        m.entry(s.degree).or_default().push(s);
    }
    m
}

/// Rank of a set of vectors (used by consumers comparing spans).
pub fn span_rank(vs: &[SVec]) -> usize {
    let mut e = Echelon::new();
    for v in vs {
        e.insert(v.clone());
    }
    e.len()
}
