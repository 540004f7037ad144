//! Property suites: flatness of the classical prolongations, the conformal
//! algebra, prolongations of simple gradings, and the G(2)-structure.

use serde::{Deserialize, Serialize};

use super::{compare, compute_space, graded_simple, CaseId, Checks, DegreeWindow, SliceRecord, Status, VariantResult, VerificationReport, DEFAULT_BOUND};
use crate::decomp::ExtremalKind;
use crate::error::{Error, Result};
use crate::gmod::{abelian_negative, adjoint_module, build_irreducible, degree_component_module};
use crate::liealg::{build_chevalley, levi_pieces, nonpositive_part, ZGradedLieAlgebra};
use crate::prolong::{der0, expects_equal_with_g0, full_prolong, yamaguchi_classify, ProlongedAlgebra, YamaguchiClass};
use crate::rootsys::{build_root_system, CartanMatrixSpec, TypeLetter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// `(V, gl(V))_*`, polynomial vector fields.
    Vect,
    /// `(V, sl(V))_*`, divergence-free fields.
    SVect,
    /// Contact fields on the Heisenberg algebra.
    K,
    /// Poisson algebra on the Heisenberg algebra.
    Po,
    /// Hamiltonian fields `(V, sp(V))_*`.
    H,
}

impl Family {
    pub fn name(self, n: usize) -> String {
        match self {
            Family::Vect => format!("vect({n})"),
            Family::SVect => format!("svect({n})"),
            Family::K => format!("k({})", 2 * n + 1),
            Family::Po => format!("po({})", 2 * n),
            Family::H => format!("h({})", 2 * n),
        }
    }
}

/// The nonpositive part `g_- + g_0` generating each family: `n` is the
/// dimension of `V` (or half of it for the symplectic families).
pub fn family_base(f: Family, n: usize) -> Result<ZGradedLieAlgebra> {
    let name = f.name(n);
    match f {
        Family::Vect | Family::SVect => {
            let (_, alg) = graded_simple(TypeLetter::A, n, &[0])?;
            let p = levi_pieces(&alg);
            nonpositive_part(&alg, if f == Family::Vect { &p.l } else { &p.l1 }, &name)
        }
        Family::K | Family::Po => {
            let (_, alg) = graded_simple(TypeLetter::C, n + 1, &[0])?;
            let p = levi_pieces(&alg);
            nonpositive_part(&alg, if f == Family::K { &p.l } else { &p.l1 }, &name)
        }
        Family::H => {
            let (_, alg) = graded_simple(TypeLetter::C, n + 1, &[0])?;
            let p = levi_pieces(&alg);
            let v = degree_component_module(&alg, -1, &p.l1)?;
            abelian_negative(&v, &alg, &p.l1, false, &name)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatnessResult {
    pub algebra: String,
    pub prolong_dims: Vec<(i64, usize)>,
    pub slices: Vec<SliceRecord>,
    /// Sum of `dim H^2` over the valid slices in the window.
    pub total: usize,
    /// Every slice of the window was valid.
    pub window_valid: bool,
}

/// `H^2` of the negative part with coefficients in the prolongation of the
/// family, over the degrees `..=max_degree`.
pub fn flatness(f: Family, n: usize, max_degree: i64, kmax: i64) -> Result<FlatnessResult> {
    let base = family_base(f, n)?;
    let p = full_prolong(&base, kmax)?;
    let module = adjoint_module(&p.algebra);
    let space = compute_space(&p.algebra, &module, &f.name(n), 2, ExtremalKind::Lowest, DegreeWindow { min: None, max: Some(max_degree) })?;
    let total = space.total_dim();
    let window_valid = space.slices.iter().all(|s| s.valid);
    Ok(FlatnessResult { algebra: f.name(n), prolong_dims: p.dims_by_degree().into_iter().collect(), slices: space.slices, total, window_valid })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProlongCheck {
    pub algebra: String,
    pub nodes: Vec<usize>,
    pub class: Option<YamaguchiClass>,
    pub ambient: Vec<(i64, usize)>,
    pub prolong: Vec<(i64, usize)>,
    pub stabilized: bool,
    pub expect_equal: bool,
    pub holds: bool,
}

fn dims(p: &ProlongedAlgebra) -> Vec<(i64, usize)> {
    p.dims_by_degree().into_iter().collect()
}

/// `(C^n, co(n))_*` from the nonpositive part of `o(n+2)` graded by node 1.
pub fn conformal_check(n: usize) -> Result<ProlongCheck> {
    let (t, r) = if n % 2 == 1 { (TypeLetter::B, n.div_ceil(2)) } else { (TypeLetter::D, n / 2 + 1) };
    let (rs, alg) = graded_simple(t, r, &[0])?;
    let p = levi_pieces(&alg);
    let base = nonpositive_part(&alg, &p.l, &format!("co({n})"))?;
    let pr = full_prolong(&base, 4)?;
    let ambient: Vec<(i64, usize)> = alg.dims_by_degree().into_iter().collect();
    let prolong = dims(&pr);
    let holds = pr.stabilized && prolong == ambient;
    Ok(ProlongCheck {
        algebra: rs.spec.algebra_name(),
        nodes: vec![1],
        class: None,
        ambient,
        prolong,
        stabilized: pr.stabilized,
        expect_equal: true,
        holds,
    })
}

/// Prolong `g_- + g_0` of a single-node grading and compare with the
/// ambient algebra. Where equality is not expected, some positive degree
/// must exceed the ambient one.
pub fn yamaguchi_check(t: TypeLetter, rank: usize, node: usize) -> Result<ProlongCheck> {
    let (rs, alg) = graded_simple(t, rank, &[node])?;
    let p = levi_pieces(&alg);
    let base = nonpositive_part(&alg, &p.l, &alg.name)?;
    let expect_equal = expects_equal_with_g0(&alg);
    let kmax = alg.max_degree() + 1;
    let pr = full_prolong(&base, kmax)?;
    let ambient: Vec<(i64, usize)> = alg.dims_by_degree().into_iter().collect();
    let prolong = dims(&pr);
    let holds = if expect_equal {
        pr.stabilized && prolong == ambient
    } else {
        let amb = alg.dims_by_degree();
        pr.dims_by_degree().iter().any(|(k, d)| *k > 0 && d > amb.get(k).unwrap_or(&0))
    };
    Ok(ProlongCheck {
        algebra: rs.spec.algebra_name(),
        nodes: vec![node + 1],
        class: Some(yamaguchi_classify(&alg)?),
        ambient,
        prolong,
        stabilized: pr.stabilized,
        expect_equal,
        holds,
    })
}

/// Prolong `g_- + der_0(g_-)`. For a grading classified `EqualsS` the
/// result must be the ambient algebra; otherwise degree 1 must already be
/// larger than in the ambient algebra.
pub fn negative_part_check(t: TypeLetter, rank: usize, node: usize) -> Result<ProlongCheck> {
    let (rs, alg) = graded_simple(t, rank, &[node])?;
    let class = yamaguchi_classify(&alg)?;
    let base = der0(&alg)?;
    let expect_equal = class == YamaguchiClass::EqualsS;
    let pr = full_prolong(&base, if expect_equal { alg.max_degree() + 1 } else { 1 })?;
    let amb = alg.dims_by_degree();
    let ambient: Vec<(i64, usize)> = amb.clone().into_iter().collect();
    let prolong = dims(&pr);
    let holds = if expect_equal {
        pr.stabilized && prolong == ambient
    } else {
        pr.dims_by_degree().get(&1).copied().unwrap_or(0) > amb.get(&1).copied().unwrap_or(0)
    };
    Ok(ProlongCheck { algebra: rs.spec.algebra_name(), nodes: vec![node + 1], class: Some(class), ambient, prolong, stabilized: pr.stabilized, expect_equal, holds })
}

/// `V + g0` with `V` the 7-dimensional module of `g(2)`; `with_center`
/// adds the grading element.
pub fn g2_structure_base(with_center: bool) -> Result<ZGradedLieAlgebra> {
    let rs = build_root_system(CartanMatrixSpec::new(TypeLetter::G, 2)?)?;
    let g2 = build_chevalley(&rs)?;
    let v = build_irreducible(&g2, &[1, 0], DEFAULT_BOUND)?;
    let all: Vec<usize> = (0..g2.dim()).collect();
    abelian_negative(&v, &g2, &all, with_center, if with_center { "C^7 + cg(2)" } else { "C^7 + g(2)" })
}

pub fn g2_structure_h2(with_center: bool) -> Result<(ProlongedAlgebra, super::SpaceResult)> {
    let base = g2_structure_base(with_center)?;
    let p = full_prolong(&base, 3)?;
    let module = adjoint_module(&p.algebra);
    let label = if with_center { "cg(2)" } else { "g(2)" };
    let space = compute_space(&p.algebra, &module, label, 2, ExtremalKind::Highest, DegreeWindow::default())?;
    Ok((p, space))
}

/// Both choices of `g0`; the report pins the one matching the expected list.
pub fn run_g2_structure(e: &super::ExpectedCase) -> Result<VerificationReport> {
    if e.h2_kind != "highest" {
        return Err(Error::Invalid("the G(2)-structure case lists highest weights".into()));
    }
    let mut variants = Vec::new();
    let mut comparisons = Vec::new();
    let mut spaces = Vec::new();
    let mut notes = Vec::new();
    for with_center in [false, true] {
        let (p, space) = g2_structure_h2(with_center)?;
        if !p.stabilized {
            notes.push(format!("prolongation of {} did not stabilize", p.algebra.name));
        }
        let c = compare(&format!("H2 with g0 = {}", space.coefficients), &space.summands, &e.h2, e.h2_basis == "simple");
        variants.push(VariantResult { variant: space.coefficients.clone(), summands: space.summands.clone(), matched: c.matched });
        comparisons.push(c);
        spaces.push(space);
    }
    let pinned = e.variant.clone().unwrap_or_else(|| "g(2)".into());
    let idx = variants.iter().position(|v| v.variant == pinned).ok_or_else(|| Error::Invalid(format!("unknown variant {pinned}")))?;
    for v in &variants {
        notes.push(format!("g0 = {}: {}", v.variant, if v.matched { "reproduces the expected list" } else { "differs from the expected list" }));
    }
    let status = if variants[idx].matched { Status::Match } else { Status::Mismatch };
    Ok(VerificationReport {
        case: CaseId { id: e.id.clone(), type_letter: TypeLetter::G, rank: 2, nodes: Vec::new(), coefficients: format!("prolong, g0 = {pinned}") },
        slices: spaces[idx].slices.clone(),
        summands: spaces[idx].summands.clone(),
        expected: Some(e.clone()),
        comparisons: vec![comparisons[idx].clone()],
        checks: Checks::default(),
        yamaguchi_class: None,
        variants,
        notes,
        status,
    })
}
