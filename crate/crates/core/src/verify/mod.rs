//! Theorem-level cross-checks: Borel-Weil-Bott enumeration, the splitting
//! of the Riemann cohomology, the component count, and comparison with the
//! embedded tables.

pub mod data;
pub mod suites;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cohom::CochainComplex;
use crate::decomp::{decompose, simple_coords_int, simple_coords_str, ExtremalKind, IrreducibleSummand};
use crate::error::{Error, Result};
use crate::gmod::{adjoint_module, coriemann_module, riemann_module, GradedModule};
use crate::liealg::{apply_grading, build_chevalley, GradingSpec, ZGradedLieAlgebra};
use crate::prolong::{classify_selection, yamaguchi_classify, YamaguchiClass};
use crate::rootsys::{build_root_system, dynkin_split, enumerate_w_i, CartanMatrixSpec, RootSystem, TypeLetter};

pub use data::{ExpectedCase, ExpectedEntry, ExpectedSuite};

pub const DEFAULT_BOUND: usize = 1000;

/// Root system and graded Chevalley algebra for 0-based selected nodes.
pub fn graded_simple(t: TypeLetter, rank: usize, nodes: &[usize]) -> Result<(RootSystem, ZGradedLieAlgebra)> {
    let rs = build_root_system(CartanMatrixSpec::new(t, rank)?)?;
    crate::rootsys::validate_nodes(&rs, nodes)?;
    if nodes.is_empty() {
        return Err(Error::Invalid("at least one node must be selected".into()));
    }
    let alg = build_chevalley(&rs)?;
    let graded = apply_grading(&alg, &rs, &GradingSpec::from_nodes(rank, nodes))?;
    Ok((rs, graded))
}

/// Lowest weights `-w(lambda + rho) + rho` over `w` in `W(I)_i`, in coroot
/// coordinates, sorted.
pub fn bwb_h_i(rs: &RootSystem, selected: &[usize], lambda: &[i64], i: usize) -> Result<Vec<Vec<i64>>> {
    if lambda.len() != rs.rank() || lambda.iter().any(|&x| x < 0) {
        return Err(Error::Invalid(format!("{lambda:?} is not a dominant weight of {}", rs.spec.name())));
    }
    let shifted: Vec<i64> = lambda.iter().zip(&rs.rho).map(|(a, b)| a + b).collect();
    let mut out: Vec<Vec<i64>> = enumerate_w_i(rs, selected, i)?
        .iter()
        .map(|w| w.apply_weight(rs, &shifted).iter().zip(&rs.rho).map(|(a, r)| r - a).collect())
        .collect();
    out.sort();
    Ok(out)
}

/// Cochain degree of a weight: the sum of its simple-root coordinates over
/// the selected nodes.
pub fn weight_degree(rs: &RootSystem, selected: &[usize], cm: &[i64]) -> Option<i64> {
    let s = crate::decomp::simple_coords(rs, cm);
    let mut total = crate::linalg::q(0);
    for &i in selected {
        total += &s[i];
    }
    crate::linalg::to_i64(&total)
}

/// BWB lowest weights packaged as summands of `H^i`.
pub fn bwb_summands(rs: &RootSystem, selected: &[usize], lambda: &[i64], i: usize) -> Result<Vec<IrreducibleSummand>> {
    let mut out = Vec::new();
    for w in bwb_h_i(rs, selected, lambda, i)? {
        let degree = weight_degree(rs, selected, &w).ok_or_else(|| Error::Internal(format!("weight {w:?} has a fractional degree")))?;
        out.push(IrreducibleSummand {
            kind: ExtremalKind::Lowest,
            degree,
            weight_fw: simple_coords_str(rs, &w),
            weight_cm: w,
            multiplicity: 1,
            s: i,
        });
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceRecord {
    pub s: usize,
    pub k: i64,
    pub dim_h: usize,
    pub valid: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceResult {
    pub coefficients: String,
    pub slices: Vec<SliceRecord>,
    pub summands: Vec<IrreducibleSummand>,
}

impl SpaceResult {
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.slices.iter().filter(|s| s.valid).map(|s| (s.k, s.dim_h)).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.slices.iter().filter(|s| s.valid).map(|s| s.dim_h).sum()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeWindow {
    pub min: Option<i64>,
    pub max: Option<i64>,
}

impl DegreeWindow {
    pub fn contains(&self, k: i64) -> bool {
        self.min.is_none_or(|m| k >= m) && self.max.is_none_or(|m| k <= m)
    }
}

/// `H^s` of the negative part with coefficients in `module`, slice by slice,
/// decomposed in every valid nonzero slice.
pub fn compute_space(
    alg: &ZGradedLieAlgebra,
    module: &GradedModule,
    coefficients: &str,
    s: usize,
    kind: ExtremalKind,
    window: DegreeWindow,
) -> Result<SpaceResult> {
    let cx = CochainComplex::new(alg, module)?;
    let mut slices = Vec::new();
    let mut summands = Vec::new();
    for k in cx.degrees(s).into_iter().filter(|&k| window.contains(k)) {
        let slice = cx.slice(s, k)?;
        if slice.valid && slice.dim_h > 0 {
            summands.extend(decompose(&cx, &slice, kind)?);
        }
        slices.push(SliceRecord { s, k, dim_h: slice.dim_h, valid: slice.valid });
    }
    summands.sort();
    Ok(SpaceResult { coefficients: coefficients.into(), slices, summands })
}

pub fn adjoint_h2(alg: &ZGradedLieAlgebra) -> Result<SpaceResult> {
    compute_space(alg, &adjoint_module(alg), "adjoint", 2, ExtremalKind::Lowest, DegreeWindow::default())
}

pub fn coriemann_h1(alg: &ZGradedLieAlgebra) -> Result<SpaceResult> {
    compute_space(alg, &coriemann_module(alg)?, "coriemann", 1, ExtremalKind::Lowest, DegreeWindow::default())
}

pub fn riemann_h2(alg: &ZGradedLieAlgebra) -> Result<SpaceResult> {
    compute_space(alg, &riemann_module(alg)?, "riemann", 2, ExtremalKind::Lowest, DegreeWindow::default())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PremetDegree {
    pub k: i64,
    pub riemann: usize,
    pub adjoint: usize,
    pub coriemann: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    /// `contact` or `abelian`.
    pub grading: String,
    pub h1_weights: usize,
    pub s2_weights: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PremetReport {
    pub degrees: Vec<PremetDegree>,
    /// Degreewise dimension identity.
    pub holds: bool,
    /// The H^2 constituents with Riemann coefficients are those with
    /// adjoint coefficients together with the H^1 constituents.
    pub summands_hold: bool,
    /// Rank at most 2: the lemma behind the splitting assumes `2 < rk`.
    pub rank_boundary: bool,
    pub census: Option<CensusReport>,
}

fn summand_keys(v: &[IrreducibleSummand]) -> BTreeMap<(i64, Vec<i64>), usize> {
    let mut m = BTreeMap::new();
    for s in v {
        *m.entry((s.degree, s.weight_cm.clone())).or_insert(0) += s.multiplicity;
    }
    m
}

/// Multiset of the weights of `S^2(g_{-1}^*)`.
fn s2_dual_weights(alg: &ZGradedLieAlgebra) -> BTreeMap<Vec<i64>, usize> {
    let g1 = alg.indices_of_degree(-1);
    let mut m = BTreeMap::new();
    for (a, &i) in g1.iter().enumerate() {
        for &j in &g1[a..] {
            let w: Vec<i64> = alg.basis[i].weight.iter().zip(&alg.basis[j].weight).map(|(x, y)| -x - y).collect();
            *m.entry(w).or_insert(0) += 1;
        }
    }
    m
}

/// Multiset of torus weights of a cohomology space.
fn cohomology_weights(alg: &ZGradedLieAlgebra, module: &GradedModule, s: usize) -> Result<BTreeMap<Vec<i64>, usize>> {
    let cx = CochainComplex::new(alg, module)?;
    let mut m = BTreeMap::new();
    for k in cx.degrees(s) {
        let slice = cx.slice(s, k)?;
        for b in slice.nonzero_blocks() {
            *m.entry(b.weight.clone()).or_insert(0) += b.dim_h;
        }
    }
    Ok(m)
}

/// Splitting check from precomputed spaces.
pub fn premet_split_from(
    alg: &ZGradedLieAlgebra,
    riemann: &SpaceResult,
    adjoint: &SpaceResult,
    coriemann: &SpaceResult,
) -> Result<PremetReport> {
    let (r, a, c) = (riemann.dims(), adjoint.dims(), coriemann.dims());
    let ks: BTreeSet<i64> = r.keys().chain(a.keys()).chain(c.keys()).copied().collect();
    let degrees: Vec<PremetDegree> = ks
        .into_iter()
        .map(|k| {
            let (x, y, z) = (r.get(&k).copied().unwrap_or(0), a.get(&k).copied().unwrap_or(0), c.get(&k).copied().unwrap_or(0));
            PremetDegree { k, riemann: x, adjoint: y, coriemann: z, holds: x == y + z }
        })
        .collect();
    let holds = degrees.iter().all(|d| d.holds);
    let mut rhs = summand_keys(&adjoint.summands);
    for (key, m) in summand_keys(&coriemann.summands) {
        *rhs.entry(key).or_insert(0) += m;
    }
    let summands_hold = summand_keys(&riemann.summands) == rhs;
    let rank = alg.frame.as_ref().map_or(0, |f| f.rs.rank());
    let census = census_check(alg)?;
    Ok(PremetReport { degrees, holds, summands_hold, rank_boundary: rank <= 2, census })
}

/// For contact and abelian gradings by a single node, compare the weights
/// of the H^1 part with those of `S^2(g_{-1}^*)`.
pub fn census_check(alg: &ZGradedLieAlgebra) -> Result<Option<CensusReport>> {
    if alg.selected_nodes().len() != 1 {
        return Ok(None);
    }
    let grading = match yamaguchi_classify(alg)? {
        YamaguchiClass::Depth1Vect => "abelian",
        YamaguchiClass::ContactK => "contact",
        _ => return Ok(None),
    };
    let h1 = cohomology_weights(alg, &coriemann_module(alg)?, 1)?;
    let s2 = s2_dual_weights(alg);
    Ok(Some(CensusReport {
        grading: grading.into(),
        h1_weights: h1.values().sum(),
        s2_weights: s2.values().sum(),
        holds: h1 == s2,
    }))
}

pub fn premet_split_check(alg: &ZGradedLieAlgebra) -> Result<PremetReport> {
    premet_split_from(alg, &riemann_h2(alg)?, &adjoint_h2(alg)?, &coriemann_h1(alg)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrCount {
    /// Cardinality of `W(I)_2`.
    pub direct: usize,
    /// `c(c+1)/2 + sum c_i` with `c` the number of selected nodes.
    pub formula: i64,
    /// The same expression with `c` the rank.
    pub formula_card_b: i64,
    pub c: usize,
    pub c_i: Vec<i64>,
    pub s: usize,
    /// Components of the selected subgraph, 1-based.
    pub components: Vec<Vec<usize>>,
}

pub fn ir_count(rs: &RootSystem, selected: &[usize]) -> Result<IrCount> {
    let direct = enumerate_w_i(rs, selected, 2)?.len();
    let split = dynkin_split(rs, selected);
    let sum: i64 = split.c_i.iter().sum();
    let c = split.c as i64;
    let r = rs.rank() as i64;
    Ok(IrCount {
        direct,
        formula: c * (c + 1) / 2 + sum,
        formula_card_b: r * (r + 1) / 2 + sum,
        c: split.c,
        c_i: split.c_i,
        s: split.s,
        components: split.components.iter().map(|v| v.iter().map(|i| i + 1).collect()).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Statement41Component {
    /// 1-based nodes.
    pub nodes: Vec<usize>,
    pub c_i: i64,
    /// Type D or E, one end of the component is a branch point of the
    /// diagram and the other end is not an end of the diagram.
    pub branch_criterion: bool,
    /// All ends of the component but at most one are ends of the diagram.
    pub endpoint_criterion: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Statement41Report {
    pub components: Vec<Statement41Component>,
    pub holds: bool,
}

/// Check the graph characterizations of `c_i = 2` and `c_i = 0` for every
/// component of the selected subgraph. A single-node component has its node
/// as both ends.
pub fn statement41_check(rs: &RootSystem, selected: &[usize]) -> Result<Statement41Report> {
    crate::rootsys::validate_nodes(rs, selected)?;
    if selected.is_empty() || selected.len() == rs.rank() {
        return Err(Error::Invalid("the selected node set must be a proper nonempty subset".into()));
    }
    let split = dynkin_split(rs, selected);
    let degree = |i: usize| rs.neighbors(i).len();
    let de = matches!(rs.spec.type_letter, TypeLetter::D | TypeLetter::E);
    let mut components = Vec::new();
    for (comp, &c_i) in split.components.iter().zip(&split.c_i) {
        let ends: Vec<usize> = if comp.len() == 1 {
            vec![comp[0], comp[0]]
        } else {
            comp.iter().copied().filter(|&i| rs.neighbors(i).iter().filter(|j| comp.contains(j)).count() == 1).collect()
        };
        let branch_criterion = de
            && ends.len() == 2
            && ((degree(ends[0]) == 3 && degree(ends[1]) != 1) || (degree(ends[1]) == 3 && degree(ends[0]) != 1));
        let diagram_ends = ends.iter().filter(|&&i| degree(i) <= 1).count();
        let endpoint_criterion = diagram_ends + 1 >= ends.len();
        let holds = (branch_criterion == (c_i == 2)) && (endpoint_criterion == (c_i == 0));
        components.push(Statement41Component { nodes: comp.iter().map(|i| i + 1).collect(), c_i, branch_criterion, endpoint_criterion, holds });
    }
    let holds = components.iter().all(|c| c.holds);
    Ok(Statement41Report { components, holds })
}

/// Case identifier for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseId {
    pub id: String,
    #[serde(rename = "type")]
    pub type_letter: TypeLetter,
    pub rank: usize,
    /// 1-based selected nodes.
    pub nodes: Vec<usize>,
    pub coefficients: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Match,
    Mismatch,
    NoExpectedData,
    /// Plain computation, nothing to compare with.
    Computed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BwbCheck {
    pub weights: Vec<Vec<i64>>,
    /// Agreement with the direct H^2 decomposition, when it was computed.
    pub agrees_with_direct: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub bwb: Option<BwbCheck>,
    pub premet_split: Option<PremetReport>,
    pub ir_count: Option<IrCount>,
    pub statement41: Option<Statement41Report>,
}

/// Outcome of matching one expected list against computed summands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub space: String,
    pub matched: bool,
    pub missing: Vec<ExpectedEntry>,
    /// Computed summands left over, as (degree, weight in the compared basis).
    pub unexpected: Vec<(i64, Vec<String>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantResult {
    pub variant: String,
    pub summands: Vec<IrreducibleSummand>,
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub case: CaseId,
    pub slices: Vec<SliceRecord>,
    pub summands: Vec<IrreducibleSummand>,
    pub expected: Option<ExpectedCase>,
    pub comparisons: Vec<Comparison>,
    pub checks: Checks,
    pub yamaguchi_class: Option<YamaguchiClass>,
    pub variants: Vec<VariantResult>,
    pub notes: Vec<String>,
    pub status: Status,
}

fn weight_in_basis(s: &IrreducibleSummand, simple: bool) -> Vec<String> {
    if simple {
        s.weight_fw.clone()
    } else {
        s.weight_cm.iter().map(|x| x.to_string()).collect()
    }
}

/// Match expected entries against computed summands as multisets; degrees
/// are compared only where the entry records one.
pub fn compare(space: &str, computed: &[IrreducibleSummand], expected: &[ExpectedEntry], simple: bool) -> Comparison {
    let mut pool: Vec<(i64, Vec<String>)> = Vec::new();
    for s in computed {
        let w = weight_in_basis(s, simple);
        for _ in 0..s.multiplicity {
            pool.push((s.degree, w.clone()));
        }
    }
    let mut missing = Vec::new();
    for e in expected {
        let w: Vec<String> = e.weight.iter().map(|x| x.to_string()).collect();
        match pool.iter().position(|(d, v)| *v == w && e.degree.is_none_or(|x| x == *d)) {
            Some(p) => {
                pool.remove(p);
            }
            None => missing.push(e.clone()),
        }
    }
    Comparison { space: space.into(), matched: missing.is_empty() && pool.is_empty(), missing, unexpected: pool }
}

/// Twice the simple root of each selected node, in simple-root coordinates:
/// the H^1 constituent present for every grading.
fn footnote_entries(rs: &RootSystem, selected: &[usize]) -> Vec<ExpectedEntry> {
    selected
        .iter()
        .map(|&i| {
            let mut w = vec![0; rs.rank()];
            w[i] = 2;
            ExpectedEntry { weight: w, degree: None, provenance: format!("component 2 alpha_{} present for every grading", i + 1) }
        })
        .collect()
}

/// Full pipeline for an expected case of a simple graded algebra.
pub fn run_case(e: &ExpectedCase) -> Result<VerificationReport> {
    if e.method == "g2structure" {
        return suites::run_g2_structure(e);
    }
    let t = TypeLetter::parse(&e.type_letter).ok_or_else(|| Error::Invalid(format!("unknown type {}", e.type_letter)))?;
    let nodes: Vec<usize> = e.nodes.iter().map(|&i| i.checked_sub(1).ok_or_else(|| Error::Invalid("nodes are 1-based".into()))).collect::<Result<_>>()?;
    let direct = e.method == "direct" || e.method == "both";
    let rs = build_root_system(CartanMatrixSpec::new(t, e.rank)?)?;
    crate::rootsys::validate_nodes(&rs, &nodes)?;
    if nodes.is_empty() {
        return Err(Error::Invalid("at least one node must be selected".into()));
    }
    let lambda = rs.adjoint_highest_weight();
    let bwb = bwb_summands(&rs, &nodes, &lambda, 2)?;
    let mut checks = Checks { ir_count: Some(ir_count(&rs, &nodes)?), ..Default::default() };
    if nodes.len() < rs.rank() {
        checks.statement41 = Some(statement41_check(&rs, &nodes)?);
    }
    let class = classify_selection(&rs, &nodes);
    let mut comparisons = Vec::new();
    let mut notes = Vec::new();
    let (slices, summands);
    let simple2 = e.h2_basis == "simple";
    if direct {
        let (_, alg) = graded_simple(t, e.rank, &nodes)?;
        let adj = adjoint_h2(&alg)?;
        let cor = coriemann_h1(&alg)?;
        let rie = riemann_h2(&alg)?;
        checks.premet_split = Some(premet_split_from(&alg, &rie, &adj, &cor)?);
        let bwb_cm = bwb_h_i(&rs, &nodes, &lambda, 2)?;
        let mut direct_cm: Vec<Vec<i64>> =
            adj.summands.iter().flat_map(|s| std::iter::repeat_n(s.weight_cm.clone(), s.multiplicity)).collect();
        direct_cm.sort();
        checks.bwb = Some(BwbCheck { weights: bwb_cm.clone(), agrees_with_direct: Some(bwb_cm == direct_cm) });
        if !e.h2.is_empty() {
            comparisons.push(compare("H2(adjoint)", &adj.summands, &e.h2, simple2));
        }
        if let Some(h1) = &e.h1 {
            let mut want = h1.clone();
            if e.h1_footnote {
                want.extend(footnote_entries(&rs, &nodes));
            }
            comparisons.push(compare("H1(coriemann)", &cor.summands, &want, e.h1_basis == "simple"));
        }
        if e.method == "both" && !e.h2.is_empty() {
            comparisons.push(compare("H2(adjoint) by BWB", &bwb, &e.h2, simple2));
        }
        let mut sl = adj.slices.clone();
        sl.extend(cor.slices.iter().cloned());
        slices = sl;
        let mut sm = adj.summands.clone();
        sm.extend(cor.summands.iter().cloned());
        summands = sm;
        if matches!(class, YamaguchiClass::EqualsS) {
            let count: usize = adj.summands.iter().map(|s| s.multiplicity).sum();
            if count != checks.ir_count.as_ref().map_or(0, |c| c.direct) {
                notes.push(format!("direct count of W(I)_2 differs from the {count} computed H2 constituents"));
            }
        }
    } else {
        checks.bwb = Some(BwbCheck { weights: bwb_h_i(&rs, &nodes, &lambda, 2)?, agrees_with_direct: None });
        if !e.h2.is_empty() {
            comparisons.push(compare("H2(adjoint) by BWB", &bwb, &e.h2, simple2));
        }
        if e.h1.is_some() {
            notes.push("H1 column not checked: computed by BWB only".into());
        }
        slices = Vec::new();
        summands = bwb;
    }
    if !e.printed_fw.is_empty() {
        let mut fw: Vec<Vec<i64>> = Vec::new();
        for s in &summands {
            if s.s == 2 {
                if let Some(w) = simple_coords_int(&rs, &s.weight_cm) {
                    fw.push(w);
                }
            }
        }
        for p in &e.printed_fw {
            if !fw.contains(&p.weight) {
                notes.push(format!("printed FW entry {:?} ({}) is not the simple-root form of a computed weight", p.weight, p.provenance));
            }
        }
    }
    let status = if e.h2.is_empty() {
        Status::NoExpectedData
    } else if comparisons.iter().all(|c| c.matched) {
        Status::Match
    } else {
        Status::Mismatch
    };
    Ok(VerificationReport {
        case: CaseId { id: e.id.clone(), type_letter: t, rank: e.rank, nodes: e.nodes.clone(), coefficients: "adjoint+coriemann".into() },
        slices,
        summands,
        expected: Some(e.clone()),
        comparisons,
        checks,
        yamaguchi_class: Some(class),
        variants: Vec::new(),
        notes,
        status,
    })
}

/// Run every case of a suite whose id starts with `only`, in parallel,
/// reports ordered as in the suite.
pub fn run_suite(suite: &ExpectedSuite, only: Option<&str>) -> Result<Vec<VerificationReport>> {
    use rayon::prelude::*;
    let cases: Vec<&ExpectedCase> = suite.cases.iter().filter(|c| only.is_none_or(|o| c.id.starts_with(o))).collect();
    cases.par_iter().map(|c| run_case(c)).collect()
}
