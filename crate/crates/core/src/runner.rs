//! Experiment orchestration: configuration, generator construction,
//! seeded randomness, subcommand dispatch and report files.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::energy::{additive_energy, assemble_vital_instance, dilate, vital_diagnostics, ScalarSet, VitalReport};
use crate::error::{Error, Result};
use crate::field_matrix::{sl_order, Fp, PrimeField, SquareMatrix};
use crate::growth::{
    enumerate_group, generates, growth_scan, standard_generators, word_ball, BallExpander, Budget,
    ElementSet, GenerationStatus, GrowthReport, DEFAULT_MAX_ELEMENTS,
};
use crate::torus::{rich_torus_scan, TorusReport};
use crate::trace_lab::{dyadic_bins, f_of, lindep_check, powers, WealthBin};
use crate::vandermonde::{elementary_symmetric, verify_vander_identity};

pub const DEFAULT_P_LIST: [u32; 7] = [5, 7, 11, 13, 17, 19, 23];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubcommandKind {
    Expand,
    GrowthCurve,
    TorusScan,
    TraceLab,
    LemmaCheck,
    Energy,
    Vital,
}

impl SubcommandKind {
    pub fn name(self) -> &'static str {
        match self {
            SubcommandKind::Expand => "expand",
            SubcommandKind::GrowthCurve => "growth-curve",
            SubcommandKind::TorusScan => "torus-scan",
            SubcommandKind::TraceLab => "trace-lab",
            SubcommandKind::LemmaCheck => "lemma-check",
            SubcommandKind::Energy => "energy",
            SubcommandKind::Vital => "vital",
        }
    }
}

impl fmt::Display for SubcommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorMode {
    /// E_12(1) and the signed n-cycle.
    #[default]
    Standard,
    /// `count` uniform elements, resampled until they generate.
    Random,
    /// All of SL_n(F_p).
    Full,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    pub p: u32,
    /// Primes swept by growth-curve; empty means the default list.
    pub p_list: Vec<u32>,
    pub generators: GeneratorMode,
    pub seed: u64,
    /// Number of random generators.
    pub count: usize,
    /// A is the word ball of this radius around the generators.
    pub radius: u32,
    pub pool_radius: u32,
    pub k_list: Vec<u32>,
    pub delta: f64,
    pub budget_elems: usize,
    pub budget_secs: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub workers: Option<usize>,
    /// Samples per lemma-check suite.
    pub trials: usize,
    /// Resampling attempts for random generators.
    pub retries: usize,
    /// Witnesses examined by trace-lab.
    pub max_witnesses: usize,
    /// expand also writes the final ball here.
    pub dump: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 2,
            p: 5,
            p_list: Vec::new(),
            generators: GeneratorMode::Standard,
            seed: 0,
            count: 2,
            radius: 2,
            pool_radius: 1,
            k_list: vec![1, 2],
            delta: 0.1,
            budget_elems: DEFAULT_MAX_ELEMENTS,
            budget_secs: None,
            out: None,
            format: OutputFormat::Csv,
            workers: None,
            trials: 1000,
            retries: 32,
            max_witnesses: 8,
            dump: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config(format!("n must be at least 2, got {}", self.n)));
        }
        PrimeField::for_dimension(self.p, self.n)?;
        for &p in &self.p_list {
            PrimeField::for_dimension(p, self.n)?;
        }
        if self.radius == 0 || self.pool_radius == 0 {
            return Err(Error::Config("radius and pool radius must be at least 1".into()));
        }
        if self.k_list.is_empty() || self.k_list.contains(&0) {
            return Err(Error::Config("k list must be nonempty with positive entries".into()));
        }
        if !(0.0..1.0).contains(&self.delta) {
            return Err(Error::Config(format!("delta must lie in [0, 1), got {}", self.delta)));
        }
        if self.count == 0 {
            return Err(Error::Config("count must be positive".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be positive".into()));
        }
        if matches!(self.budget_secs, Some(s) if s.is_nan() || s <= 0.0) {
            return Err(Error::Config("budget seconds must be positive".into()));
        }
        Ok(())
    }

    pub fn budget(&self) -> Budget {
        Budget {
            max_elements: self.budget_elems,
            max_duration: self.budget_secs.map(Duration::from_secs_f64),
        }
    }

    pub fn field(&self) -> Result<PrimeField> {
        PrimeField::for_dimension(self.p, self.n)
    }

    pub fn p_values(&self) -> Vec<u32> {
        if self.p_list.is_empty() {
            DEFAULT_P_LIST.to_vec()
        } else {
            self.p_list.clone()
        }
    }

    /// The output path, defaulting to `<subcommand>.<ext>`.
    pub fn output_path(&self, sub: SubcommandKind) -> PathBuf {
        self.out
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("{}.{}", sub.name(), self.format.extension())))
    }
}

/// A seeded generator for one module: the global seed picks the key and the
/// module name picks the stream.
pub fn module_rng(seed: u64, module: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let digest = Sha256::digest(module.as_bytes());
    let mut stream = [0u8; 8];
    stream.copy_from_slice(&digest[..8]);
    rng.set_stream(u64::from_le_bytes(stream));
    rng
}

/// Process exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_)
        | Error::NotPrime(_)
        | Error::UnsupportedModulus(_)
        | Error::FieldTooSmall { .. } => 2,
        Error::BudgetExceeded { .. } | Error::TimeExceeded { .. } | Error::Indeterminate { .. } => 3,
        Error::GenerationFailed(_) => 4,
        _ => 1,
    }
}

/// The generating set for `field` together with how generation was settled.
pub fn build_generators(cfg: &ExperimentConfig, field: PrimeField) -> Result<(ElementSet, GenerationStatus)> {
    let n = cfg.n;
    let budget = cfg.budget();
    let checkable = sl_order(n, field.p()) <= budget.max_elements as u128;
    match cfg.generators {
        GeneratorMode::Standard => {
            let a = standard_generators(n, field);
            if !checkable {
                return Ok((a, GenerationStatus::Unchecked));
            }
            let status =
                if generates(&a, budget)? { GenerationStatus::Verified } else { GenerationStatus::Failed };
            Ok((a, status))
        }
        GeneratorMode::Full => Ok((enumerate_group(n, field, budget)?, GenerationStatus::Verified)),
        GeneratorMode::Random => {
            let mut rng = module_rng(cfg.seed, &format!("build_generators/{}", field.p()));
            for _ in 0..cfg.retries.max(1) {
                let members: Vec<SquareMatrix> =
                    (0..cfg.count).map(|_| SquareMatrix::random_sl(n, field, &mut rng)).collect();
                let a = ElementSet::new(n, field, members)?;
                if !checkable {
                    return Ok((a, GenerationStatus::Unchecked));
                }
                if generates(&a, budget)? {
                    return Ok((a, GenerationStatus::Verified));
                }
            }
            Err(Error::GenerationFailed(cfg.retries.max(1)))
        }
    }
}

/// A = the radius-`cfg.radius` ball around the generators, or G itself.
fn build_set(cfg: &ExperimentConfig, field: PrimeField) -> Result<(ElementSet, GenerationStatus)> {
    let (gens, status) = build_generators(cfg, field)?;
    if cfg.generators == GeneratorMode::Full {
        return Ok((gens, status));
    }
    Ok((word_ball(&gens, cfg.radius, cfg.budget())?, status))
}

/// Rows with a fixed header; serialised as CSV or as a JSON array of flat
/// objects with the same keys.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: String,
    pub rows: Vec<String>,
}

impl Table {
    fn new(header: impl Into<String>) -> Self {
        Table { header: header.into(), rows: Vec::new() }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(64 * (self.rows.len() + 1));
        s.push_str(&self.header);
        s.push('\n');
        for r in &self.rows {
            s.push_str(r);
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let keys: Vec<&str> = self.header.split(',').collect();
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, serde_json::Value> = keys
                    .iter()
                    .zip(row.split(','))
                    .map(|(k, v)| (k.to_string(), json_scalar(v)))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).expect("json values serialise");
        s.push('\n');
        s
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

fn json_scalar(v: &str) -> serde_json::Value {
    if v.is_empty() || v == "nan" {
        return serde_json::Value::Null;
    }
    if let Ok(i) = v.parse::<i64>() {
        return i.into();
    }
    if let Ok(b) = v.parse::<bool>() {
        return b.into();
    }
    if let Ok(x) = v.parse::<f64>() {
        if x.is_finite() && v.contains('.') {
            return x.into();
        }
    }
    v.into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubcommandStatus {
    pub subcommand: String,
    pub ok: bool,
    pub exit_code: i32,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: ExperimentConfig,
    pub version: String,
    pub wall_clock_secs: f64,
    pub status: SubcommandStatus,
    /// sha256 of every file written, keyed by path.
    pub outputs: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code
    }

    pub fn path_for(out: &Path) -> PathBuf {
        let mut s = out.as_os_str().to_owned();
        s.push(".manifest.json");
        PathBuf::from(s)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Runs one subcommand, writes its output and the manifest, and returns
/// the manifest. Errors are recorded in the manifest rather than returned.
pub fn run(cfg: &ExperimentConfig, sub: SubcommandKind) -> RunManifest {
    let start = Instant::now();
    let out = cfg.output_path(sub);
    let mut outputs = BTreeMap::new();
    let result = cfg.validate().and_then(|_| {
        let mut pool = rayon::ThreadPoolBuilder::new();
        if let Some(w) = cfg.workers {
            pool = pool.num_threads(w);
        }
        let pool = pool.build().map_err(|e| Error::Config(e.to_string()))?;
        pool.install(|| execute(cfg, sub, &mut outputs))
            .and_then(|table| write_output(&out, table.render(cfg.format).as_bytes(), &mut outputs))
    });
    let status = match &result {
        Ok(()) => SubcommandStatus { subcommand: sub.name().into(), ok: true, exit_code: 0, error: None },
        Err(e) => SubcommandStatus {
            subcommand: sub.name().into(),
            ok: false,
            exit_code: exit_code(e),
            error: Some(e.to_string()),
        },
    };
    let manifest = RunManifest {
        config: cfg.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_clock_secs: start.elapsed().as_secs_f64(),
        status,
        outputs,
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serialises");
    if let Err(e) = fs::write(RunManifest::path_for(&out), text + "\n") {
        eprintln!("could not write manifest: {e}");
    }
    manifest
}

fn write_output(path: &Path, bytes: &[u8], outputs: &mut BTreeMap<String, String>) -> Result<()> {
    fs::write(path, bytes)?;
    outputs.insert(path.display().to_string(), sha256_hex(bytes));
    Ok(())
}

fn execute(cfg: &ExperimentConfig, sub: SubcommandKind, outputs: &mut BTreeMap<String, String>) -> Result<Table> {
    match sub {
        SubcommandKind::Expand => expand(cfg, outputs),
        SubcommandKind::GrowthCurve => growth_curve(cfg),
        SubcommandKind::TorusScan => torus_scan(cfg),
        SubcommandKind::TraceLab => trace_lab(cfg),
        SubcommandKind::LemmaCheck => lemma_check(cfg),
        SubcommandKind::Energy => energy(cfg),
        SubcommandKind::Vital => vital(cfg),
    }
}

fn expand(cfg: &ExperimentConfig, outputs: &mut BTreeMap<String, String>) -> Result<Table> {
    let field = cfg.field()?;
    let (gens, _) = build_generators(cfg, field)?;
    let mut ex = BallExpander::new(&gens, cfg.budget())?;
    let mut table = Table::new("n,p,radius,size,saturated");
    loop {
        table.rows.push(format!("{},{},{},{},{}", cfg.n, cfg.p, ex.radius(), ex.len(), ex.is_saturated()));
        if ex.is_saturated() || ex.radius() >= cfg.radius {
            break;
        }
        ex.step()?;
    }
    if let Some(path) = &cfg.dump {
        let mut bytes = Vec::new();
        ex.to_set().write_dump(&mut bytes)?;
        write_output(path, &bytes, outputs)?;
    }
    Ok(table)
}

fn growth_curve(cfg: &ExperimentConfig) -> Result<Table> {
    let mut ks = cfg.k_list.clone();
    ks.sort_unstable();
    ks.dedup();
    let mut table = Table::new(GrowthReport::csv_header(&ks));
    for p in cfg.p_values() {
        let field = PrimeField::for_dimension(p, cfg.n)?;
        let (a, status) = build_set(cfg, field)?;
        let mut report = growth_scan(&a, &ks, cfg.budget())?;
        report.generation = status;
        table.rows.push(report.csv_row());
    }
    Ok(table)
}

fn torus_scan(cfg: &ExperimentConfig) -> Result<Table> {
    let field = cfg.field()?;
    let (a, _) = build_set(cfg, field)?;
    let mut ks = cfg.k_list.clone();
    ks.sort_unstable();
    ks.dedup();
    let mut table = Table::new(TorusReport::csv_header(&ks));
    table.rows = rich_torus_scan(&a, &ks, cfg.budget())?.iter().map(|r| r.csv_row()).collect();
    Ok(table)
}

fn is_split_regular(t: &SquareMatrix) -> bool {
    t.is_regular_semisimple() && t.char_poly_full().roots().len() == t.n()
}

fn trace_lab(cfg: &ExperimentConfig) -> Result<Table> {
    let field = cfg.field()?;
    let (a, _) = build_set(cfg, field)?;
    let pool = word_ball(&a, cfg.pool_radius, cfg.budget())?;
    let kmax = *cfg.k_list.iter().max().expect("validated nonempty");
    let ball = word_ball(&a, kmax, cfg.budget())?;
    let mut seen = BTreeSet::new();
    let witnesses: Vec<&SquareMatrix> = ball
        .iter()
        .filter(|t| is_split_regular(t))
        .filter(|t| seen.insert(t.char_poly().expect("pool members lie in SL_n")))
        .take(cfg.max_witnesses)
        .collect();
    let mut table = Table::new(WealthBin::csv_header());
    for t in witnesses {
        for bin in dyadic_bins(t, &pool)? {
            table.rows.push(bin.csv_row());
        }
    }
    Ok(table)
}

/// Counts of passes and failures for one suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub n: usize,
    pub p: u32,
    pub trials: usize,
    pub passes: usize,
    pub failures: usize,
}

impl SuiteResult {
    fn from_checks(suite: &str, n: usize, p: u32, checks: impl Iterator<Item = bool>) -> Self {
        let (mut passes, mut failures) = (0, 0);
        for ok in checks {
            if ok {
                passes += 1;
            } else {
                failures += 1;
            }
        }
        SuiteResult { suite: suite.to_string(), n, p, trials: passes + failures, passes, failures }
    }

    pub fn csv_row(&self) -> String {
        format!("{},{},{},{},{},{}", self.suite, self.n, self.p, self.trials, self.passes, self.failures)
    }
}

fn random_elems<R: Rng>(field: PrimeField, len: usize, rng: &mut R) -> Vec<Fp> {
    (0..len).map(|_| field.elem(rng.gen_range(0..field.p()))).collect()
}

/// A uniform element of SL_n(F_p) that is regular semisimple.
pub fn random_regular<R: Rng>(n: usize, field: PrimeField, rng: &mut R) -> SquareMatrix {
    loop {
        let t = SquareMatrix::random_sl(n, field, rng);
        if t.is_regular_semisimple() {
            return t;
        }
    }
}

/// A split regular semisimple element: distinct eigenvalues with product 1,
/// conjugated by a uniform element of SL_n(F_p). Needs p - 1 > n.
pub fn random_split_regular<R: Rng>(n: usize, field: PrimeField, rng: &mut R) -> SquareMatrix {
    let p = field.p();
    loop {
        let mut eig: Vec<u32> = (0..n - 1).map(|_| rng.gen_range(1..p)).collect();
        let prod = eig.iter().fold(1, |acc, &x| field.mul(acc, x));
        eig.push(field.inv(prod).expect("nonzero product"));
        let distinct: BTreeSet<u32> = eig.iter().copied().collect();
        if distinct.len() != n {
            continue;
        }
        let h = SquareMatrix::random_sl(n, field, rng);
        let d = SquareMatrix::diagonal(field, &eig);
        return h.mul_unchecked(&d).mul_unchecked(&h.inverse().expect("invertible"));
    }
}

pub fn vander_suite(n: usize, field: PrimeField, trials: usize, seed: u64) -> SuiteResult {
    let checks = vander_checks(n, field, trials, seed).into_iter().map(|(_, ok)| ok);
    SuiteResult::from_checks("vander", n, field.p(), checks)
}

/// The vander suite split by the omitted power i, as suites `vander_i<i>`.
pub fn vander_suite_by_index(n: usize, field: PrimeField, trials: usize, seed: u64) -> Vec<SuiteResult> {
    let checks = vander_checks(n, field, trials, seed);
    (0..=n)
        .map(|i| {
            let of_i = checks.iter().filter(|(j, _)| *j == i).map(|(_, ok)| *ok);
            SuiteResult::from_checks(&format!("vander_i{i}"), n, field.p(), of_i)
        })
        .collect()
}

fn vander_checks(n: usize, field: PrimeField, trials: usize, seed: u64) -> Vec<(usize, bool)> {
    let mut rng = module_rng(seed, "lemma-check/vander");
    (0..trials)
        .map(|_| {
            let s = random_elems(field, n, &mut rng);
            let i = rng.gen_range(0..=n);
            (i, verify_vander_identity(&s, i).unwrap_or(false))
        })
        .collect()
}

/// tr(tⁿg) = Σ_k f(t)_k tr(tᵏg).
pub fn f_identity_suite(n: usize, field: PrimeField, trials: usize, seed: u64) -> SuiteResult {
    let mut rng = module_rng(seed, "lemma-check/f_identity");
    let checks = (0..trials).map(|_| {
        let t = random_regular(n, field, &mut rng);
        let g = SquareMatrix::random_sl(n, field, &mut rng);
        let Ok(fv) = f_of(&t) else { return false };
        let traces: Vec<u32> = powers(&t).iter().map(|tk| tk.mul_unchecked(&g).trace()).collect();
        fv.dot(field, &traces[..n]) == traces[n]
    });
    SuiteResult::from_checks("f_identity", n, field.p(), checks)
}

/// κ(hgh⁻¹) = κ(g).
pub fn kappa_conjugation_suite(n: usize, field: PrimeField, trials: usize, seed: u64) -> SuiteResult {
    let mut rng = module_rng(seed, "lemma-check/kappa_conjugation");
    let checks = (0..trials).map(|_| {
        let g = SquareMatrix::random_sl(n, field, &mut rng);
        let h = SquareMatrix::random_sl(n, field, &mut rng);
        let conj = h.mul_unchecked(&g).mul_unchecked(&h.inverse().expect("invertible"));
        matches!((g.char_poly(), conj.char_poly()), (Ok(a), Ok(b)) if a == b)
    });
    SuiteResult::from_checks("kappa_conjugation", n, field.p(), checks)
}

/// The n+1 forms are dependent, and omitting row i leaves a singular
/// system exactly when e_{n-i} of the eigenvalues vanishes.
pub fn lindep_suite(n: usize, field: PrimeField, trials: usize, seed: u64) -> SuiteResult {
    let mut rng = module_rng(seed, "lemma-check/lindep");
    let checks = (0..trials).map(|_| {
        let t = random_split_regular(n, field, &mut rng);
        let Ok(rep) = lindep_check(&t) else { return false };
        let s: Vec<Fp> = t.char_poly_full().roots().into_iter().map(|x| field.elem(x)).collect();
        let expected: Vec<usize> = (0..=n)
            .filter(|&i| elementary_symmetric(&s, n - i).map(|e| e.is_zero()).unwrap_or(false))
            .collect();
        let w = (1..=n).all(|m| !elementary_symmetric(&s, m).unwrap().is_zero());
        rep.dependent_all && rep.singular_omitted == expected && rep.w_conditions == w
    });
    SuiteResult::from_checks("lindep", n, field.p(), checks)
}

/// e_m against a sum over all m-subsets.
pub fn elementary_symmetric_suite(n: usize, field: PrimeField, trials: usize, seed: u64) -> SuiteResult {
    let mut rng = module_rng(seed, "lemma-check/elementary_symmetric");
    let checks = (0..trials).map(|_| {
        let s = random_elems(field, n, &mut rng);
        (0..=n).all(|m| {
            let brute = (0u32..1 << n)
                .filter(|mask| mask.count_ones() as usize == m)
                .map(|mask| {
                    (0..n).filter(|&j| mask >> j & 1 == 1).fold(field.one(), |acc, j| acc * s[j])
                })
                .fold(field.zero(), |acc, x| acc + x);
            elementary_symmetric(&s, m) == Ok(brute)
        })
    });
    SuiteResult::from_checks("elementary_symmetric", n, field.p(), checks)
}

pub fn lemma_suites(n: usize, field: PrimeField, trials: usize, seed: u64) -> Vec<SuiteResult> {
    let mut out = vec![
        vander_suite(n, field, trials, seed),
        f_identity_suite(n, field, trials, seed),
        kappa_conjugation_suite(n, field, trials, seed),
    ];
    // A split regular element needs n distinct eigenvalues in F_p^*.
    if field.p() as usize > n + 1 {
        out.push(lindep_suite(n, field, trials, seed));
    }
    out.push(elementary_symmetric_suite(n, field, trials, seed));
    out
}

fn lemma_check(cfg: &ExperimentConfig) -> Result<Table> {
    let field = cfg.field()?;
    let mut table = Table::new("suite,n,p,trials,passes,failures");
    let mut results = lemma_suites(cfg.n, field, cfg.trials, cfg.seed);
    results.extend(vander_suite_by_index(cfg.n, field, cfg.trials, cfg.seed));
    table.rows = results.iter().map(|r| r.csv_row()).collect();
    let failed: usize = results.iter().map(|r| r.failures).sum();
    if failed > 0 {
        return Err(Error::Malformed(format!("{failed} lemma checks failed")));
    }
    Ok(table)
}

fn energy(cfg: &ExperimentConfig) -> Result<Table> {
    let field = cfg.field()?;
    let mut rng = module_rng(cfg.seed, "energy");
    let size = cfg.count.min(field.p() as usize);
    let x = ScalarSet::new(field, sample(&mut rng, field.p() as usize, size).into_iter().map(|v| v as u32))?;
    let mut table = Table::new("y,x_size,dilate_size,energy");
    for y in 1..field.p() {
        let yx = dilate(&x, field.elem(y));
        table.rows.push(format!("{},{},{},{}", y, x.len(), yx.len(), additive_energy(&x, &yx)));
    }
    Ok(table)
}

fn vital(cfg: &ExperimentConfig) -> Result<Table> {
    let field = cfg.field()?;
    let budget = cfg.budget();
    let (a, _) = build_set(cfg, field)?;
    let mut ks = cfg.k_list.clone();
    ks.sort_unstable();
    ks.dedup();
    let reports = rich_torus_scan(&a, &ks, budget)?;
    let richest = reports
        .iter()
        .find(|r| r.split)
        .ok_or_else(|| Error::Malformed("no split torus meets the balls".into()))?;
    let ball = word_ball(&a, *ks.last().expect("validated nonempty"), budget)?;
    let d = ball.filter(|t| {
        t.commutes_with(&richest.witness)
            && is_split_regular(t)
            && lindep_check(t).map(|r| r.w_conditions && r.independent_subsets).unwrap_or(false)
    });
    if d.is_empty() {
        return Err(Error::Malformed("no admissible torus elements in the largest ball".into()));
    }
    let inst = assemble_vital_instance(&a, &d, cfg.pool_radius, budget)?;
    let report: VitalReport = vital_diagnostics(&inst.x, &inst.y, &inst.fibers, cfg.delta);
    let mut table = Table::new(VitalReport::csv_header());
    table.rows = report.csv_rows();
    Ok(table)
}
