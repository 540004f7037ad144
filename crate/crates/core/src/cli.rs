//! Command-line front end: case specifications, result records, the
//! content-addressed stage cache and the subcommands.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::decomp::{simple_coords_str, ExtremalKind, IrreducibleSummand};
use crate::error::{Error, Result};
use crate::gmod::{adjoint_module, coriemann_module, riemann_module, trivial_module, GradedModule};
use crate::liealg::{apply_grading, build_chevalley, levi_pieces, nonpositive_part, GradingSpec, ZGradedLieAlgebra};
use crate::prolong::{expects_equal_with_g0, full_prolong, yamaguchi_classify, ProlongedAlgebra, YamaguchiClass, DEFAULT_KMAX};
use crate::rootsys::{build_root_system, enumerate_w_i, CartanMatrixSpec, RootSystem, TypeLetter};
use crate::verify::{self, suites, BwbCheck, DegreeWindow, IrCount, PremetReport, SliceRecord, SpaceResult, Status, DEFAULT_BOUND};

pub const ENGINE_VERSION: &str = concat!("nhsf ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    Adjoint,
    Riemann,
    Coriemann,
    Prolong,
    Trivial,
}

impl Coefficients {
    pub fn name(self) -> &'static str {
        match self {
            Coefficients::Adjoint => "adjoint",
            Coefficients::Riemann => "riemann",
            Coefficients::Coriemann => "coriemann",
            Coefficients::Prolong => "prolong",
            Coefficients::Trivial => "trivial",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Everything that determines a computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseSpec {
    #[serde(rename = "type")]
    pub type_letter: TypeLetter,
    pub rank: usize,
    /// 1-based selected nodes, sorted.
    pub nodes: Vec<usize>,
    pub coefficients: Coefficients,
    pub s: usize,
    pub window: DegreeWindow,
    pub kmax: i64,
    /// Largest dimension of an irreducible module the builder may construct.
    pub bound: usize,
}

impl CaseSpec {
    pub fn nodes0(&self) -> Vec<usize> {
        self.nodes.iter().map(|i| i - 1).collect()
    }

    pub fn label(&self) -> String {
        let nodes: Vec<String> = self.nodes.iter().map(|i| i.to_string()).collect();
        format!("{}{} nodes {{{}}}", self.type_letter.to_string().to_lowercase(), self.rank, nodes.join(","))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordChecks {
    pub bwb: Option<BwbCheck>,
    pub premet_split: Option<PremetReport>,
    pub ir_count: Option<IrCount>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub case: CaseSpec,
    pub slices: Vec<SliceRecord>,
    pub summands: Vec<IrreducibleSummand>,
    pub checks: RecordChecks,
    pub status: Status,
    pub engine_version: String,
    /// SHA-256 of the case specification and engine version.
    pub input_hash: String,
    pub timing_ms: u64,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn input_hash(spec: &CaseSpec) -> String {
    let body = serde_json::to_string(spec).unwrap_or_default();
    sha256_hex(format!("{ENGINE_VERSION}\n{body}").as_bytes())
}

/// Content-addressed store `<dir>/<stage>/<hash>.json`.
pub struct Cache {
    dir: Option<PathBuf>,
    events: Mutex<Vec<(String, bool)>>,
    warnings: Mutex<Vec<String>>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self { dir, events: Mutex::new(Vec::new()), warnings: Mutex::new(Vec::new()) }
    }

    pub fn disabled() -> Self {
        Self::new(None)
    }

    pub fn key<K: Serialize>(stage: &str, inputs: &K) -> String {
        let body = serde_json::to_string(inputs).unwrap_or_default();
        sha256_hex(format!("{ENGINE_VERSION}\n{stage}\n{body}").as_bytes())
    }

    pub fn path(&self, stage: &str, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(stage).join(format!("{key}.json")))
    }

    pub fn get<T: DeserializeOwned>(&self, stage: &str, key: &str) -> Option<T> {
        let path = self.path(stage, key)?;
        let text = std::fs::read_to_string(&path).ok()?;
        match serde_json::from_str(&text) {
            Ok(v) => Some(v),
            Err(e) => {
                self.warnings.lock().unwrap().push(format!("warning: ignoring corrupt cache entry {}: {e}", path.display()));
                None
            }
        }
    }

    pub fn put<T: Serialize>(&self, stage: &str, key: &str, value: &T) -> Result<()> {
        let Some(path) = self.path(stage, key) else { return Ok(()) };
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        let tmp = path.with_extension(format!("json.{}.tmp", std::process::id()));
        std::fs::write(&tmp, serde_json::to_vec(value)?)?;
        std::fs::rename(&tmp, &path)?;
        Ok(())
    }

    pub fn get_or_compute<K: Serialize, T: Serialize + DeserializeOwned>(
        &self,
        stage: &str,
        inputs: &K,
        compute: impl FnOnce() -> Result<T>,
    ) -> Result<T> {
        let key = Self::key(stage, inputs);
        if let Some(v) = self.get(stage, &key) {
            self.events.lock().unwrap().push((stage.into(), true));
            return Ok(v);
        }
        let v = compute()?;
        self.put(stage, &key, &v)?;
        self.events.lock().unwrap().push((stage.into(), false));
        Ok(v)
    }

    /// `(stage, hit)` for every lookup so far.
    pub fn events(&self) -> Vec<(String, bool)> {
        self.events.lock().unwrap().clone()
    }

    pub fn take_warnings(&self) -> Vec<String> {
        std::mem::take(&mut *self.warnings.lock().unwrap())
    }
}

#[derive(Serialize)]
struct RootKey {
    #[serde(rename = "type")]
    t: TypeLetter,
    rank: usize,
}

#[derive(Serialize)]
struct GradeKey<'a> {
    #[serde(rename = "type")]
    t: TypeLetter,
    rank: usize,
    nodes: &'a [usize],
}

#[derive(Serialize)]
struct ProlongKey<'a> {
    #[serde(rename = "type")]
    t: TypeLetter,
    rank: usize,
    nodes: &'a [usize],
    kmax: i64,
}

pub fn cached_root_system(cache: &Cache, t: TypeLetter, rank: usize) -> Result<RootSystem> {
    let mut rs: RootSystem = cache.get_or_compute("rootsys", &RootKey { t, rank }, || Ok(build_root_system(CartanMatrixSpec::new(t, rank)?)?))?;
    rs.reindex();
    Ok(rs)
}

pub fn cached_grading(cache: &Cache, t: TypeLetter, rank: usize, nodes: &[usize]) -> Result<ZGradedLieAlgebra> {
    let rs = cached_root_system(cache, t, rank)?;
    cache.get_or_compute("grade", &GradeKey { t, rank, nodes }, || {
        let alg = build_chevalley(&rs)?;
        let zero: Vec<usize> = nodes.iter().map(|i| i - 1).collect();
        apply_grading(&alg, &rs, &GradingSpec::from_nodes(rank, &zero))
    })
}

/// Prolongation of `g_- + g_0` of the grading.
pub fn cached_prolong(cache: &Cache, t: TypeLetter, rank: usize, nodes: &[usize], kmax: i64) -> Result<ProlongedAlgebra> {
    let alg = cached_grading(cache, t, rank, nodes)?;
    cache.get_or_compute("prolong", &ProlongKey { t, rank, nodes, kmax }, || {
        let p = levi_pieces(&alg);
        let base = nonpositive_part(&alg, &p.l, &alg.name)?;
        full_prolong(&base, kmax)
    })
}

fn module_for(alg: &ZGradedLieAlgebra, c: Coefficients) -> Result<GradedModule> {
    Ok(match c {
        Coefficients::Adjoint | Coefficients::Prolong => adjoint_module(alg),
        Coefficients::Riemann => riemann_module(alg)?,
        Coefficients::Coriemann => coriemann_module(alg)?,
        Coefficients::Trivial => trivial_module(alg),
    })
}

/// One cohomology space for a case, through the cache.
pub fn cached_space(cache: &Cache, spec: &CaseSpec) -> Result<SpaceResult> {
    let mut key = spec.clone();
    if spec.coefficients != Coefficients::Prolong {
        key.kmax = 0;
    }
    cache.get_or_compute("cohomology", &key, || {
        let alg = if spec.coefficients == Coefficients::Prolong {
            cached_prolong(cache, spec.type_letter, spec.rank, &spec.nodes, spec.kmax)?.algebra
        } else {
            cached_grading(cache, spec.type_letter, spec.rank, &spec.nodes)?
        };
        let module = module_for(&alg, spec.coefficients)?;
        verify::compute_space(&alg, &module, spec.coefficients.name(), spec.s, ExtremalKind::Lowest, spec.window)
    })
}

fn weight_multiset(summands: &[IrreducibleSummand]) -> Vec<Vec<i64>> {
    let mut v: Vec<Vec<i64>> = summands.iter().flat_map(|s| std::iter::repeat_n(s.weight_cm.clone(), s.multiplicity)).collect();
    v.sort();
    v
}

/// The full `cohomology` pipeline with its cross-checks.
pub fn compute_record(cache: &Cache, spec: &CaseSpec) -> Result<ResultRecord> {
    let start = Instant::now();
    let rs = cached_root_system(cache, spec.type_letter, spec.rank)?;
    let nodes0 = spec.nodes0();
    let space = cached_space(cache, spec)?;
    let mut checks = RecordChecks::default();
    let full_window = spec.window == DegreeWindow::default();
    if spec.coefficients == Coefficients::Adjoint {
        let weights = verify::bwb_h_i(&rs, &nodes0, &rs.adjoint_highest_weight(), spec.s)?;
        let agrees = full_window.then(|| weight_multiset(&space.summands) == weights);
        checks.bwb = Some(BwbCheck { weights, agrees_with_direct: agrees });
    }
    if spec.s == 2 {
        checks.ir_count = Some(verify::ir_count(&rs, &nodes0)?);
    }
    if spec.coefficients == Coefficients::Riemann && spec.s == 2 && full_window {
        let alg = cached_grading(cache, spec.type_letter, spec.rank, &spec.nodes)?;
        let adj = cached_space(cache, &CaseSpec { coefficients: Coefficients::Adjoint, ..spec.clone() })?;
        let cor = cached_space(cache, &CaseSpec { coefficients: Coefficients::Coriemann, s: 1, ..spec.clone() })?;
        checks.premet_split = Some(verify::premet_split_from(&alg, &space, &adj, &cor)?);
    }
    Ok(ResultRecord {
        case: spec.clone(),
        slices: space.slices,
        summands: space.summands,
        checks,
        status: Status::Computed,
        engine_version: ENGINE_VERSION.into(),
        input_hash: input_hash(spec),
        timing_ms: start.elapsed().as_millis() as u64,
    })
}

#[derive(Parser, Debug)]
#[command(name = "nhsf", version, about = "Cohomology of graded nilpotent Lie algebras: nonholonomic Riemann and Weyl tensors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CaseArgs {
    #[arg(long = "type", value_name = "A|B|C|D|E|F|G")]
    pub type_letter: String,
    #[arg(long)]
    pub rank: usize,
    #[arg(long, value_name = "comma-list")]
    pub nodes: String,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, value_name = "path")]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cartan matrix, positive roots and maximal root.
    Roots {
        #[arg(long = "type", value_name = "A|B|C|D|E|F|G")]
        type_letter: String,
        #[arg(long)]
        rank: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Dimensions of the graded components.
    Grade {
        #[command(flatten)]
        case: CaseArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Prolongation of the nonpositive part.
    Prolong {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long, default_value_t = DEFAULT_KMAX)]
        kmax: i64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Cohomology of the negative part, decomposed.
    Cohomology {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long, value_enum, default_value = "adjoint")]
        coeff: Coefficients,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(0..=2))]
        s: u8,
        #[arg(long, allow_hyphen_values = true)]
        min_degree: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        max_degree: Option<i64>,
        #[arg(long, default_value_t = DEFAULT_KMAX)]
        kmax: i64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Lowest weights of H^s with adjoint coefficients by Borel-Weil-Bott.
    Bwb {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(0..=2))]
        s: u8,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Compare with the embedded tables or run a property suite.
    Verify {
        #[arg(long, value_name = "table1|tables234|sec6|sec71|flatness|prolong")]
        suite: String,
        #[arg(long, value_name = "prefix")]
        only: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

/// Result of a command: exit code and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { code: 0, stdout, stderr: String::new() }
    }

    fn usage(msg: String) -> Self {
        Self { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

pub fn parse_type(s: &str) -> std::result::Result<TypeLetter, String> {
    TypeLetter::parse(s).ok_or_else(|| format!("unknown type {s:?}; expected one of A, B, C, D, E, F, G"))
}

/// Parse and validate `--nodes`; returns sorted 1-based nodes.
pub fn parse_nodes(s: &str, rank: usize) -> std::result::Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let n: usize = part.parse().map_err(|_| format!("invalid node {part:?}; nodes are integers in 1..={rank}"))?;
        if n == 0 || n > rank {
            return Err(format!("node {n} out of range 1..={rank}"));
        }
        if !out.contains(&n) {
            out.push(n);
        }
    }
    if out.is_empty() {
        return Err("at least one node must be selected".into());
    }
    out.sort();
    Ok(out)
}

fn validate_type(t: TypeLetter, rank: usize) -> std::result::Result<(), String> {
    CartanMatrixSpec::new(t, rank).map(|_| ()).map_err(|e| e.to_string())
}

fn case_from(args: &CaseArgs) -> std::result::Result<(TypeLetter, usize, Vec<usize>), String> {
    let t = parse_type(&args.type_letter)?;
    validate_type(t, args.rank)?;
    let nodes = parse_nodes(&args.nodes, args.rank)?;
    Ok((t, args.rank, nodes))
}

fn cache_for(out: &OutputArgs) -> Cache {
    let dir = out.cache_dir.clone().or_else(|| std::env::var_os("NHSF_CACHE_DIR").filter(|v| !v.is_empty()).map(PathBuf::from));
    Cache::new(dir)
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn fmt_vec<T: std::fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Render rows as left-aligned columns.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            widths[i] = widths[i].max(c.len());
        }
    }
    let line = |cells: Vec<String>| -> String {
        let padded: Vec<String> = cells.iter().enumerate().map(|(i, c)| format!("{:<w$}", c, w = widths[i])).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.iter().map(|h| h.to_string()).collect());
    for r in rows {
        out.push_str(&line(r.clone()));
    }
    out
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct RootsOutput {
    #[serde(rename = "type")]
    pub type_letter: TypeLetter,
    pub rank: usize,
    pub algebra: String,
    pub cartan_matrix: Vec<Vec<i64>>,
    pub num_positive_roots: usize,
    pub maximal_root: Vec<i64>,
    pub adjoint_highest_weight: Vec<i64>,
    pub positive_roots: Vec<Vec<i64>>,
}

pub fn cmd_roots(t: TypeLetter, rank: usize, out: &OutputArgs) -> Result<String> {
    let cache = cache_for(out);
    let rs = cached_root_system(&cache, t, rank)?;
    let r = RootsOutput {
        type_letter: t,
        rank,
        algebra: rs.spec.algebra_name(),
        cartan_matrix: rs.cartan_matrix.clone(),
        num_positive_roots: rs.num_positive_roots(),
        maximal_root: rs.maximal_root.clone(),
        adjoint_highest_weight: rs.adjoint_highest_weight(),
        positive_roots: rs.positive_roots.clone(),
    };
    match out.format {
        Format::Json => to_json(&r),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{} ({}{})", r.algebra, t, rank);
            let _ = writeln!(s, "positive roots: {}", r.num_positive_roots);
            let _ = writeln!(s, "maximal root:   {}", fmt_vec(&r.maximal_root));
            let _ = writeln!(s, "Cartan matrix:");
            for row in &r.cartan_matrix {
                let _ = writeln!(s, "  {}", row.iter().map(|x| format!("{x:>2}")).collect::<Vec<_>>().join(" "));
            }
            let rows: Vec<Vec<String>> = r.positive_roots.iter().map(|b| vec![crate::rootsys::RootSystem::height(b).to_string(), fmt_vec(b)]).collect();
            s.push_str(&table(&["height", "root"], &rows));
            Ok(s)
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct GradeOutput {
    pub case: String,
    pub d: i64,
    pub dims: BTreeMap<i64, usize>,
    pub levi_nodes: Vec<usize>,
    pub yamaguchi_class: YamaguchiClass,
}

pub fn cmd_grade(t: TypeLetter, rank: usize, nodes: &[usize], out: &OutputArgs) -> Result<String> {
    let cache = cache_for(out);
    let alg = cached_grading(&cache, t, rank, nodes)?;
    let levi_nodes = alg.frame.as_ref().map(|f| f.levi_nodes.iter().map(|i| i + 1).collect()).unwrap_or_default();
    let g = GradeOutput { case: alg.name.clone(), d: alg.depth(), dims: alg.dims_by_degree(), levi_nodes, yamaguchi_class: yamaguchi_classify(&alg)? };
    match out.format {
        Format::Json => to_json(&g),
        Format::Text => {
            let mut s = format!("{}\ndepth d = {}\nclass {:?}\n", g.case, g.d, g.yamaguchi_class);
            let rows: Vec<Vec<String>> = g.dims.iter().map(|(k, d)| vec![k.to_string(), d.to_string()]).collect();
            s.push_str(&table(&["degree", "dim"], &rows));
            Ok(s)
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ProlongOutput {
    pub case: String,
    pub kmax: i64,
    pub ambient: BTreeMap<i64, usize>,
    pub prolong: BTreeMap<i64, usize>,
    pub computed_to: i64,
    pub stabilized: bool,
    pub yamaguchi_class: YamaguchiClass,
    pub expect_equal: bool,
    pub equal: bool,
}

pub fn cmd_prolong(t: TypeLetter, rank: usize, nodes: &[usize], kmax: i64, out: &OutputArgs) -> Result<String> {
    let cache = cache_for(out);
    let alg = cached_grading(&cache, t, rank, nodes)?;
    let p = cached_prolong(&cache, t, rank, nodes, kmax)?;
    let ambient = alg.dims_by_degree();
    let prolong = p.dims_by_degree();
    let o = ProlongOutput {
        case: alg.name.clone(),
        kmax,
        equal: p.stabilized && prolong == ambient,
        ambient,
        prolong,
        computed_to: p.computed_to,
        stabilized: p.stabilized,
        yamaguchi_class: yamaguchi_classify(&alg)?,
        expect_equal: expects_equal_with_g0(&alg),
    };
    match out.format {
        Format::Json => to_json(&o),
        Format::Text => {
            let mut s = format!("{}\nstabilized {}  equal to ambient {}\n", o.case, o.stabilized, o.equal);
            let ks: std::collections::BTreeSet<i64> = o.ambient.keys().chain(o.prolong.keys()).copied().collect();
            let rows: Vec<Vec<String>> = ks
                .iter()
                .map(|k| vec![k.to_string(), o.ambient.get(k).copied().unwrap_or(0).to_string(), o.prolong.get(k).copied().unwrap_or(0).to_string()])
                .collect();
            s.push_str(&table(&["degree", "ambient", "prolong"], &rows));
            Ok(s)
        }
    }
}

fn summand_rows(summands: &[IrreducibleSummand]) -> Vec<Vec<String>> {
    summands
        .iter()
        .map(|s| vec![s.s.to_string(), s.degree.to_string(), fmt_vec(&s.weight_cm), fmt_vec(&s.weight_fw), s.multiplicity.to_string()])
        .collect()
}

pub fn render_record_text(r: &ResultRecord) -> String {
    let mut s = format!("{}  coefficients {}  H^{}\n", r.case.label(), r.case.coefficients.name(), r.case.s);
    let rows: Vec<Vec<String>> = r.slices.iter().map(|x| vec![x.k.to_string(), x.dim_h.to_string(), x.valid.to_string()]).collect();
    s.push_str(&table(&["k", "dim_h", "valid"], &rows));
    s.push('\n');
    s.push_str(&table(&["s", "degree", "weight_cm", "weight_fw", "mult"], &summand_rows(&r.summands)));
    if let Some(b) = &r.checks.bwb {
        let _ = writeln!(s, "\nbwb: {}  agrees: {:?}", b.weights.iter().map(|w| fmt_vec(w)).collect::<Vec<_>>().join(" "), b.agrees_with_direct);
    }
    if let Some(c) = &r.checks.ir_count {
        let _ = writeln!(s, "ir_count: direct {}  formula {}", c.direct, c.formula);
    }
    if let Some(p) = &r.checks.premet_split {
        let _ = writeln!(s, "premet_split: holds {}  summands {}  rank boundary {}", p.holds, p.summands_hold, p.rank_boundary);
    }
    s
}

pub fn cmd_cohomology(spec: &CaseSpec, out: &OutputArgs) -> Result<(String, Vec<String>)> {
    let cache = cache_for(out);
    let r = compute_record(&cache, spec)?;
    let text = match out.format {
        Format::Json => to_json(&r)?,
        Format::Text => render_record_text(&r),
    };
    Ok((text, cache.take_warnings()))
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct BwbWeight {
    pub word: String,
    pub weight_cm: Vec<i64>,
    pub weight_fw: Vec<String>,
    pub degree: Option<i64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct BwbOutput {
    pub case: String,
    pub s: usize,
    pub lambda: Vec<i64>,
    pub weights: Vec<BwbWeight>,
}

pub fn cmd_bwb(t: TypeLetter, rank: usize, nodes: &[usize], s: usize, out: &OutputArgs) -> Result<String> {
    let cache = cache_for(out);
    let rs = cached_root_system(&cache, t, rank)?;
    let nodes0: Vec<usize> = nodes.iter().map(|i| i - 1).collect();
    let lambda = rs.adjoint_highest_weight();
    let shifted: Vec<i64> = lambda.iter().zip(&rs.rho).map(|(a, b)| a + b).collect();
    let mut weights: Vec<BwbWeight> = enumerate_w_i(&rs, &nodes0, s)?
        .iter()
        .map(|w| {
            let cm: Vec<i64> = w.apply_weight(&rs, &shifted).iter().zip(&rs.rho).map(|(a, r)| r - a).collect();
            BwbWeight { word: w.display_1based(), weight_fw: simple_coords_str(&rs, &cm), degree: verify::weight_degree(&rs, &nodes0, &cm), weight_cm: cm }
        })
        .collect();
    weights.sort_by(|a, b| a.weight_cm.cmp(&b.weight_cm));
    let nodes_s: Vec<String> = nodes.iter().map(|i| i.to_string()).collect();
    let o = BwbOutput { case: format!("{} nodes {{{}}}", rs.spec.algebra_name(), nodes_s.join(",")), s, lambda, weights };
    match out.format {
        Format::Json => to_json(&o),
        Format::Text => {
            let rows: Vec<Vec<String>> = o
                .weights
                .iter()
                .map(|w| vec![w.word.clone(), w.degree.map_or("-".into(), |d| d.to_string()), fmt_vec(&w.weight_cm), fmt_vec(&w.weight_fw)])
                .collect();
            Ok(format!("{}  H^{}\n", o.case, s) + &table(&["word", "degree", "weight_cm", "weight_fw"], &rows))
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct PropertyReport {
    pub name: String,
    pub status: Status,
    pub detail: serde_json::Value,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct VerifyOutput {
    pub suite: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reports: Vec<verify::VerificationReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub properties: Vec<PropertyReport>,
}

fn holds(b: bool) -> Status {
    if b {
        Status::Match
    } else {
        Status::Mismatch
    }
}

/// Flatness of the classical prolongations.
pub fn flatness_suite() -> Result<Vec<PropertyReport>> {
    use suites::Family;
    let mut out = Vec::new();
    for (f, ns, max_degree, kmax) in [
        (Family::Vect, [2usize, 3], 5i64, 6i64),
        (Family::SVect, [2, 3], 5, 6),
        (Family::K, [1, 2], 6, 6),
        (Family::Po, [1, 2], 6, 6),
        (Family::H, [2, 3], 5, 5),
    ] {
        for n in ns {
            let r = suites::flatness(f, n, max_degree, kmax)?;
            let want = if f == Family::H { num_integer::binomial(2 * n, 3) } else { 0 };
            out.push(PropertyReport {
                name: format!("H2 of {}", r.algebra),
                status: holds(r.window_valid && r.total == want),
                detail: serde_json::to_value(&r)?,
            });
        }
    }
    Ok(out)
}

/// Prolongations: conformal algebras and single-node gradings.
pub fn prolong_suite() -> Result<Vec<PropertyReport>> {
    let mut out = Vec::new();
    for n in [3, 4, 5] {
        let c = suites::conformal_check(n)?;
        out.push(PropertyReport { name: format!("(C^{n}, co({n}))_* = {}", c.algebra), status: holds(c.holds), detail: serde_json::to_value(&c)? });
    }
    for (t, r) in [(TypeLetter::G, 2usize), (TypeLetter::F, 4), (TypeLetter::A, 3), (TypeLetter::C, 3), (TypeLetter::D, 4)] {
        for node in 0..r {
            let c = suites::yamaguchi_check(t, r, node)?;
            let name = format!("(g_-, g_0)_* of {} node {}", c.algebra, node + 1);
            out.push(PropertyReport { name, status: holds(c.holds), detail: serde_json::to_value(&c)? });
            let d = suites::negative_part_check(t, r, node)?;
            let name = format!("(g_-)_* of {} node {}", d.algebra, node + 1);
            out.push(PropertyReport { name, status: holds(d.holds), detail: serde_json::to_value(&d)? });
        }
    }
    Ok(out)
}

fn overall(statuses: impl Iterator<Item = Status>) -> Status {
    let v: Vec<Status> = statuses.collect();
    if v.contains(&Status::Mismatch) {
        Status::Mismatch
    } else if !v.is_empty() && v.iter().all(|s| *s == Status::NoExpectedData) {
        Status::NoExpectedData
    } else {
        Status::Match
    }
}

pub fn cmd_verify(suite: &str, only: Option<&str>) -> Result<VerifyOutput> {
    match suite {
        "flatness" | "prolong" => {
            let props = if suite == "flatness" { flatness_suite()? } else { prolong_suite()? };
            let props: Vec<PropertyReport> = props.into_iter().filter(|p| only.is_none_or(|o| p.name.contains(o))).collect();
            Ok(VerifyOutput { suite: suite.into(), status: overall(props.iter().map(|p| p.status)), reports: Vec::new(), properties: props })
        }
        _ => {
            let s = verify::data::load_suite(suite)?;
            let reports = verify::run_suite(&s, only)?;
            if reports.is_empty() {
                return Err(Error::Invalid(format!("no case of suite {suite} starts with {:?}", only.unwrap_or(""))));
            }
            Ok(VerifyOutput { suite: suite.into(), status: overall(reports.iter().map(|r| r.status)), reports, properties: Vec::new() })
        }
    }
}

pub fn render_verify_text(v: &VerifyOutput) -> String {
    let mut rows: Vec<Vec<String>> = v.reports.iter().map(|r| vec![r.case.id.clone(), format!("{:?}", r.status)]).collect();
    rows.extend(v.properties.iter().map(|p| vec![p.name.clone(), format!("{:?}", p.status)]));
    let mut s = table(&["case", "status"], &rows);
    for r in &v.reports {
        for c in r.comparisons.iter().filter(|c| !c.matched) {
            for m in &c.missing {
                let _ = writeln!(s, "{}: {} expected {} not computed ({})", r.case.id, c.space, fmt_vec(&m.weight), m.provenance);
            }
            for (d, w) in &c.unexpected {
                let _ = writeln!(s, "{}: {} computed {} in degree {d} not expected", r.case.id, c.space, fmt_vec(w));
            }
        }
    }
    let _ = writeln!(s, "suite {}: {:?}", v.suite, v.status);
    s
}

fn internal(e: Error) -> Outcome {
    match e {
        Error::RootSystem(_) | Error::Invalid(_) => Outcome::usage(e.to_string()),
        _ => Outcome { code: 3, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

/// Run a parsed command line.
pub fn run(cli: Cli) -> Outcome {
    let result = match &cli.command {
        Command::Roots { type_letter, rank, out } => {
            let t = match parse_type(type_letter).and_then(|t| validate_type(t, *rank).map(|_| t)) {
                Ok(t) => t,
                Err(m) => return Outcome::usage(m),
            };
            cmd_roots(t, *rank, out).map(Outcome::ok)
        }
        Command::Grade { case, out } => match case_from(case) {
            Ok((t, r, n)) => cmd_grade(t, r, &n, out).map(Outcome::ok),
            Err(m) => return Outcome::usage(m),
        },
        Command::Prolong { case, kmax, out } => match case_from(case) {
            Ok(_) if *kmax < 1 => return Outcome::usage(format!("--kmax must be at least 1, got {kmax}")),
            Ok((t, r, n)) => cmd_prolong(t, r, &n, *kmax, out).map(Outcome::ok),
            Err(m) => return Outcome::usage(m),
        },
        Command::Cohomology { case, coeff, s, min_degree, max_degree, kmax, out } => match case_from(case) {
            Ok(_) if *kmax < 1 => return Outcome::usage(format!("--kmax must be at least 1, got {kmax}")),
            Ok((t, r, n)) => {
                let spec = CaseSpec {
                    type_letter: t,
                    rank: r,
                    nodes: n,
                    coefficients: *coeff,
                    s: *s as usize,
                    window: DegreeWindow { min: *min_degree, max: *max_degree },
                    kmax: *kmax,
                    bound: DEFAULT_BOUND,
                };
                cmd_cohomology(&spec, out).map(|(stdout, warnings)| Outcome { code: 0, stdout, stderr: warnings.iter().map(|w| format!("{w}\n")).collect() })
            }
            Err(m) => return Outcome::usage(m),
        },
        Command::Bwb { case, s, out } => match case_from(case) {
            Ok((t, r, n)) => cmd_bwb(t, r, &n, *s as usize, out).map(Outcome::ok),
            Err(m) => return Outcome::usage(m),
        },
        Command::Verify { suite, only, out } => {
            let known = verify::data::SUITES.contains(&suite.as_str()) || suite == "flatness" || suite == "prolong";
            if !known {
                return Outcome::usage(format!("unknown suite {suite:?}; expected one of {}, flatness, prolong", verify::data::SUITES.join(", ")));
            }
            cmd_verify(suite, only.as_deref()).and_then(|v| {
                let text = match out.format {
                    Format::Json => to_json(&v)?,
                    Format::Text => render_verify_text(&v),
                };
                Ok(Outcome { code: if v.status == Status::Mismatch { 1 } else { 0 }, stdout: text, stderr: String::new() })
            })
        }
    };
    result.unwrap_or_else(internal)
}

/// Parse arguments and run; parse failures are usage errors.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}
