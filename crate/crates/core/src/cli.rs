//! `ptgraph` command-line front end.
//!
//! Subcommands write deterministic CSV (or a text report for `verify`).
//! Exit codes: 0 success, 1 failed check or internal error, 2 usage or
//! validation error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::boundary::{
    bc_matrices, bc_residual, check_ab_symmetry, check_ranks, omega_hermitian, omega_pt, trace_vectors,
    BCMatrices, Family,
};
use crate::dynamics::{current_series, gram_deviation, gram_matrix, uniform_times, WaveState};
use crate::error::Error;
use crate::graph::MetricStarGraph;
use crate::linalg;
use crate::spectral::{build_basis_with, default_scan_step, find_roots_for, BasisOptions, SecularKind, SpectralBasis};

pub const SYMMETRY_TOL: f64 = 1e-12;
pub const BC_RESIDUAL_TOL: f64 = 1e-10;
pub const NORM_TOL: f64 = 1e-8;
pub const OMEGA_TOL: f64 = 1e-8;
/// Number of leading eigenmodes inspected by `verify`.
pub const VERIFY_MODES: usize = 5;

#[derive(Debug, Parser)]
#[command(name = "ptgraph", version, about = "Spectra, modes and vertex currents of PT-symmetric star graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Roots of the secular equation as CSV `n,k,degenerate`.
    Spectrum(CommonArgs),
    /// Sampled eigenfunctions as CSV `n,bond,x,re_psi,im_psi`.
    Modes(CommonArgs),
    /// Vertex current series as CSV `t,J_total,J_1,...,J_N`.
    Evolve {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        evolve: EvolveArgs,
    },
    /// Boundary-condition and eigenmode checks with PASS/FAIL lines.
    Verify(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Comma-separated bond lengths, e.g. `1.0,1.5,2.0`.
    #[arg(long, allow_hyphen_values = true)]
    pub lengths: String,
    /// pt-dirichlet | pt-neumann | kirchhoff-ref | custom:<path>
    #[arg(long, default_value = "pt-dirichlet")]
    pub family: String,
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    pub kmax: f64,
    #[arg(long, default_value_t = 1e-12, allow_negative_numbers = true)]
    pub tol: f64,
    /// Grid points per bond (odd).
    #[arg(long, default_value_t = 2001)]
    pub resolution: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Significant digits in numeric output.
    #[arg(long, default_value_t = 12)]
    pub precision: usize,
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    /// `equal:K` or `list:c1,c2,...` with entries like `0.5`, `0.3-0.1j`.
    #[arg(long, default_value = "equal:5")]
    pub coeffs: String,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub tmax: f64,
    #[arg(long, default_value_t = 1000)]
    pub tsteps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    BuiltIn(Family),
    Custom(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoeffSpec {
    Equal(usize),
    List(Vec<C64>),
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub lengths: Vec<f64>,
    pub family: FamilySpec,
    pub k_max: f64,
    pub tol: f64,
    pub resolution: usize,
    pub t_max: f64,
    pub t_steps: usize,
    pub coeff_spec: CoeffSpec,
    pub output_path: Option<PathBuf>,
    pub precision: usize,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flag value; exit 2.
    Usage { flag: &'static str, message: String },
    /// Computation or I/O failure; exit 1.
    Internal(String),
}

impl CliError {
    fn usage(flag: &'static str, message: impl Into<String>) -> Self {
        CliError::Usage {
            flag,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage { flag, message } => write!(f, "invalid value for {flag}: {message}"),
            CliError::Internal(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

impl RunConfig {
    pub fn from_args(common: &CommonArgs, evolve: Option<&EvolveArgs>) -> CliResult<Self> {
        let lengths = parse_lengths(&common.lengths)?;
        let family = parse_family(&common.family)?;
        if !(common.kmax.is_finite() && common.kmax > 0.0) {
            return Err(CliError::usage("--kmax", "must be a positive finite number"));
        }
        if !(common.tol.is_finite() && common.tol > 0.0) {
            return Err(CliError::usage("--tol", "must be a positive finite number"));
        }
        if common.resolution < 3 || common.resolution.is_multiple_of(2) {
            return Err(CliError::usage("--resolution", "must be an odd integer >= 3"));
        }
        if !(1..=17).contains(&common.precision) {
            return Err(CliError::usage("--precision", "must lie in 1..=17"));
        }
        let defaults = EvolveArgs {
            coeffs: "equal:5".into(),
            tmax: 1.0,
            tsteps: 1000,
        };
        let ev = evolve.unwrap_or(&defaults);
        if !(ev.tmax.is_finite() && ev.tmax >= 0.0) {
            return Err(CliError::usage("--tmax", "must be a non-negative finite number"));
        }
        if ev.tsteps == 0 {
            return Err(CliError::usage("--tsteps", "must be at least 1"));
        }
        Ok(Self {
            lengths,
            family,
            k_max: common.kmax,
            tol: common.tol,
            resolution: common.resolution,
            t_max: ev.tmax,
            t_steps: ev.tsteps,
            coeff_spec: parse_coeffs(&ev.coeffs)?,
            output_path: common.out.clone(),
            precision: common.precision,
        })
    }

    fn graph(&self) -> CliResult<MetricStarGraph> {
        MetricStarGraph::new(&self.lengths).map_err(|e| CliError::usage("--lengths", e.to_string()))
    }

    /// Built-in family with a closed-form spectrum.
    fn spectral_family(&self) -> CliResult<Family> {
        match &self.family {
            FamilySpec::BuiltIn(f) => Ok(*f),
            FamilySpec::Custom(_) => Err(CliError::usage(
                "--family",
                "custom matrices have no closed-form spectrum; use pt-dirichlet, pt-neumann or kirchhoff-ref",
            )),
        }
    }

    fn family_label(&self) -> String {
        match &self.family {
            FamilySpec::BuiltIn(f) => f.name().to_string(),
            FamilySpec::Custom(p) => format!("custom:{}", p.display()),
        }
    }

    fn basis_options(&self) -> BasisOptions {
        BasisOptions {
            scan_step: None,
            tol: self.tol,
            resolution: self.resolution,
        }
    }

    fn header(&self, command: &str) -> String {
        let p = self.precision;
        let lengths: Vec<String> = self.lengths.iter().map(|&l| fmt_num(l, p)).collect();
        format!(
            "# ptgraph {} {command}\n# lengths={}\n# family={}\n# kmax={}\n# tol={}\n# resolution={}\n",
            env!("CARGO_PKG_VERSION"),
            lengths.join(","),
            self.family_label(),
            fmt_num(self.k_max, p),
            fmt_num(self.tol, p),
            self.resolution,
        )
    }
}

pub fn parse_lengths(s: &str) -> CliResult<Vec<f64>> {
    let lengths = s
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| CliError::usage("--lengths", format!("`{}` is not a number", part.trim())))
        })
        .collect::<CliResult<Vec<f64>>>()?;
    MetricStarGraph::new(&lengths).map_err(|e| CliError::usage("--lengths", e.to_string()))?;
    Ok(lengths)
}

pub fn parse_family(s: &str) -> CliResult<FamilySpec> {
    if let Some(path) = s.strip_prefix("custom:") {
        if path.is_empty() {
            return Err(CliError::usage("--family", "custom:<path> needs a file path"));
        }
        return Ok(FamilySpec::Custom(PathBuf::from(path)));
    }
    match s.parse::<Family>() {
        Ok(Family::Custom) | Err(_) => Err(CliError::usage(
            "--family",
            format!("unknown family `{s}` (expected pt-dirichlet, pt-neumann, kirchhoff-ref or custom:<path>)"),
        )),
        Ok(f) => Ok(FamilySpec::BuiltIn(f)),
    }
}

pub fn parse_coeffs(s: &str) -> CliResult<CoeffSpec> {
    if let Some(k) = s.strip_prefix("equal:") {
        let k: usize = k
            .trim()
            .parse()
            .map_err(|_| CliError::usage("--coeffs", format!("`{k}` is not a mode count")))?;
        if k == 0 {
            return Err(CliError::usage("--coeffs", "equal:K needs K >= 1"));
        }
        return Ok(CoeffSpec::Equal(k));
    }
    if let Some(list) = s.strip_prefix("list:") {
        let values = list
            .split(',')
            .map(|c| parse_complex(c).ok_or_else(|| CliError::usage("--coeffs", format!("`{c}` is not a complex number"))))
            .collect::<CliResult<Vec<_>>>()?;
        return Ok(CoeffSpec::List(values));
    }
    Err(CliError::usage("--coeffs", format!("`{s}` must be equal:K or list:c1,c2,...")))
}

/// Parses `re`, `imj`, `re+imj` or `re-imj`.
pub fn parse_complex(s: &str) -> Option<C64> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('j') else {
        return s.parse::<f64>().ok().map(|re| C64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let imag = |t: &str| match t {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => t.parse::<f64>().ok(),
    };
    match split {
        Some(i) => Some(C64::new(body[..i].parse().ok()?, imag(&body[i..])?)),
        None => Some(C64::new(0.0, imag(body)?)),
    }
}

/// Reads `2N` rows of `4N` complex entries: the `A` row then the `B` row.
pub fn read_custom_matrices(path: &Path, n_bonds: usize) -> CliResult<BCMatrices> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage("--family", format!("cannot read {}: {e}", path.display())))?;
    let dim = 2 * n_bonds;
    let rows: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if rows.len() != dim {
        return Err(CliError::usage(
            "--family",
            format!("matrix file has {} rows, expected 2N = {dim}", rows.len()),
        ));
    }
    let mut a = DMatrix::<C64>::zeros(dim, dim);
    let mut b = DMatrix::<C64>::zeros(dim, dim);
    for (r, line) in rows.iter().enumerate() {
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != 2 * dim {
            return Err(CliError::usage(
                "--family",
                format!("matrix row {} has {} entries, expected 4N = {}", r + 1, entries.len(), 2 * dim),
            ));
        }
        for (c, e) in entries.iter().enumerate() {
            let z = parse_complex(e)
                .ok_or_else(|| CliError::usage("--family", format!("row {}: `{e}` is not a complex number", r + 1)))?;
            if c < dim {
                a[(r, c)] = z;
            } else {
                b[(r, c - dim)] = z;
            }
        }
    }
    BCMatrices::new(a, b, Family::Custom).map_err(|e| CliError::usage("--family", e.to_string()))
}

/// `%g`-style formatting with `digits` significant digits and lowercase `e`.
pub fn fmt_num(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes `content` to `path` via a temporary file and rename, or to `stdout`.
fn emit(path: Option<&Path>, content: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(content.as_bytes())?;
            tmp.flush()?;
            tmp.persist(path).map_err(|e| CliError::Internal(e.to_string()))?;
            Ok(())
        }
        None => Ok(stdout.write_all(content.as_bytes())?),
    }
}

pub fn cmd_spectrum(cfg: &RunConfig, stdout: &mut dyn Write) -> CliResult<()> {
    let graph = cfg.graph()?;
    let kind = SecularKind::of(cfg.spectral_family()?)?;
    let roots = find_roots_for(kind, &graph, 0.0, cfg.k_max, default_scan_step(&graph), cfg.tol)?;
    let mut csv = cfg.header("spectrum");
    csv.push_str("n,k,degenerate\n");
    for (i, r) in roots.iter().enumerate() {
        let _ = writeln!(csv, "{},{},{}", i + 1, fmt_num(r.k, cfg.precision), r.degenerate);
    }
    emit(cfg.output_path.as_deref(), &csv, stdout)
}

pub fn cmd_modes(cfg: &RunConfig, stdout: &mut dyn Write) -> CliResult<()> {
    let graph = cfg.graph()?;
    let basis = build_basis_with(&graph, cfg.spectral_family()?, cfg.k_max, cfg.basis_options())?;
    let p = cfg.precision;
    let mut csv = cfg.header("modes");
    for k in basis.degenerate() {
        let _ = writeln!(csv, "# degenerate_root,{}", fmt_num(*k, p));
    }
    for (n, m) in basis.modes().iter().enumerate() {
        let _ = writeln!(csv, "# norm_check,{},{}", n + 1, fmt_num(m.norm_check(), p));
    }
    csv.push_str("n,bond,x,re_psi,im_psi\n");
    for (n, m) in basis.modes().iter().enumerate() {
        for grid in graph.grids(cfg.resolution)? {
            for &x in grid.points() {
                let v = crate::boundary::BondFunction::value(m, grid.bond(), x);
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{}",
                    n + 1,
                    grid.bond() + 1,
                    fmt_num(x, p),
                    fmt_num(v.re, p),
                    fmt_num(v.im, p)
                );
            }
        }
    }
    emit(cfg.output_path.as_deref(), &csv, stdout)
}

pub fn cmd_evolve(cfg: &RunConfig, stdout: &mut dyn Write) -> CliResult<()> {
    let graph = cfg.graph()?;
    let basis = build_basis_with(&graph, cfg.spectral_family()?, cfg.k_max, cfg.basis_options())?;
    let state = match &cfg.coeff_spec {
        CoeffSpec::Equal(k) => {
            check_mode_count(*k, &basis)?;
            WaveState::equal_weights(&basis, *k)?
        }
        CoeffSpec::List(c) => {
            check_mode_count(c.len(), &basis)?;
            WaveState::new(Arc::new(basis.truncated(c.len())), c.clone())?
        }
    };
    let series = current_series(&state, &uniform_times(cfg.t_max, cfg.t_steps))?;
    let p = cfg.precision;
    let mut csv = cfg.header("evolve");
    let ks: Vec<String> = state.basis().modes().iter().map(|m| fmt_num(m.k(), p)).collect();
    let _ = writeln!(csv, "# modes={}", ks.join(";"));
    let _ = writeln!(csv, "# tmax={}\n# tsteps={}", fmt_num(cfg.t_max, p), cfg.t_steps);
    csv.push_str("t,J_total");
    for j in 1..=graph.n_bonds() {
        let _ = write!(csv, ",J_{j}");
    }
    csv.push('\n');
    for (i, t) in series.times.iter().enumerate() {
        let _ = write!(csv, "{},{}", fmt_num(*t, p), fmt_num(series.total[i], p));
        for bond in &series.per_bond {
            let _ = write!(csv, ",{}", fmt_num(bond[i], p));
        }
        csv.push('\n');
    }
    emit(cfg.output_path.as_deref(), &csv, stdout)
}

fn check_mode_count(requested: usize, basis: &SpectralBasis) -> CliResult<()> {
    if requested == 0 || requested > basis.len() {
        return Err(CliError::usage(
            "--coeffs",
            format!(
                "{requested} modes requested but {} non-degenerate modes lie below --kmax {}",
                basis.len(),
                basis.k_max()
            ),
        ));
    }
    Ok(())
}

/// One line of the verify report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
    Info,
    Warn,
}

impl Status {
    fn tag(self) -> &'static str {
        match self {
            Status::Pass => "[PASS]",
            Status::Fail => "[FAIL]",
            Status::Skip => "[SKIP]",
            Status::Info => "[INFO]",
            Status::Warn => "[WARN]",
        }
    }
}

/// Verify report lines and overall verdict.
#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub lines: Vec<(Status, String)>,
}

impl VerifyReport {
    fn push(&mut self, status: Status, text: impl Into<String>) {
        self.lines.push((status, text.into()));
    }

    fn check(&mut self, ok: bool, text: impl Into<String>) {
        self.push(if ok { Status::Pass } else { Status::Fail }, text);
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(|(s, _)| *s != Status::Fail)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (s, text) in &self.lines {
            let _ = writeln!(out, "{} {text}", s.tag());
        }
        let _ = writeln!(out, "result: {}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }
}

pub fn verify_report(cfg: &RunConfig) -> CliResult<VerifyReport> {
    let graph = cfg.graph()?;
    let n = graph.n_bonds();
    let p = cfg.precision;
    let bc = match &cfg.family {
        FamilySpec::BuiltIn(f) => bc_matrices(*f, &graph)?,
        FamilySpec::Custom(path) => read_custom_matrices(path, n)?,
    };
    let mut report = VerifyReport::default();
    report.push(Status::Info, format!("family {} on lengths {:?}", cfg.family_label(), graph.lengths()));

    let ranks = check_ranks(&bc);
    report.check(
        ranks.is_full(n),
        format!("rank check: rank(A|B) = {} (required 2N = {})", ranks.rank_ab, 2 * n),
    );
    report.push(
        Status::Info,
        format!("rank(A) = {}, rank(B) = {}", ranks.rank_a, ranks.rank_b),
    );
    if ranks.rank_a != 2 * n || ranks.rank_b != 2 * n {
        report.push(
            Status::Warn,
            format!(
                "rank(A) = rank(B) = 2N = {} does not hold for this family; only rank(A|B) = 2N is enforced",
                2 * n
            ),
        );
    }
    let pairing = bc.family().pairing();
    let sym = check_ab_symmetry(&bc);
    report.check(
        sym < SYMMETRY_TOL,
        format!(
            "AB^dagger - BA^dagger residual = {} ({pairing} pairing, threshold {})",
            fmt_num(sym, p),
            fmt_num(SYMMETRY_TOL, p)
        ),
    );

    let family = match &cfg.family {
        FamilySpec::BuiltIn(f) => *f,
        FamilySpec::Custom(_) => {
            report.push(Status::Skip, "eigenmode checks: custom matrices have no closed-form eigenmodes");
            return Ok(report);
        }
    };
    let basis = build_basis_with(&graph, family, cfg.k_max, cfg.basis_options())?;
    if !basis.degenerate().is_empty() {
        let ks: Vec<String> = basis.degenerate().iter().map(|&k| fmt_num(k, p)).collect();
        report.push(
            Status::Warn,
            format!(
                "degenerate roots at k = {}: closed-form eigenfunctions are undefined there, the basis may be incomplete",
                ks.join(", ")
            ),
        );
    }
    let modes = &basis.modes()[..basis.len().min(VERIFY_MODES)];
    if modes.is_empty() {
        report.push(Status::Skip, format!("eigenmode checks: no non-degenerate modes below kmax {}", fmt_num(cfg.k_max, p)));
        return Ok(report);
    }
    if modes.len() < VERIFY_MODES {
        report.push(Status::Info, format!("only {} modes below kmax", modes.len()));
    }

    let mut worst_bc: f64 = 0.0;
    let mut worst_norm: f64 = 0.0;
    for m in modes {
        worst_bc = worst_bc.max(bc_residual(&bc, &trace_vectors(m)?)?);
        worst_norm = worst_norm.max((m.norm_check() - 1.0).abs());
    }
    report.check(
        worst_bc < BC_RESIDUAL_TOL,
        format!("bc_residual max over first {} modes = {} (threshold {})", modes.len(), fmt_num(worst_bc, p), fmt_num(BC_RESIDUAL_TOL, p)),
    );
    report.check(
        worst_norm < NORM_TOL,
        format!("normalization max |<phi,phi> - 1| = {} (threshold {})", fmt_num(worst_norm, p), fmt_num(NORM_TOL, p)),
    );
    report.check(
        modes.iter().all(|m| m.norm_const() > 0.0 && m.norm_const().is_finite()),
        "normalization constants real and positive",
    );

    let mut worst_omega: f64 = 0.0;
    for f in modes {
        for g in modes {
            let w = match family {
                Family::KirchhoffRef => omega_hermitian(f, g)?.norm(),
                _ => omega_pt(f, g)?.value().norm(),
            };
            worst_omega = worst_omega.max(w);
        }
    }
    let form = if family == Family::KirchhoffRef { "omega_hermitian" } else { "omega_pt" };
    report.check(
        worst_omega < OMEGA_TOL,
        format!("|{form}| max over mode pairs = {} (threshold {})", fmt_num(worst_omega, p), fmt_num(OMEGA_TOL, p)),
    );

    let first = basis.truncated(modes.len());
    let gram = gram_matrix(&first, cfg.resolution)?;
    report.push(
        Status::Info,
        format!(
            "Gram matrix: max |G - I| = {}, condition number = {}",
            fmt_num(gram_deviation(&gram), p),
            fmt_num(linalg::condition_number(&gram), p)
        ),
    );
    Ok(report)
}

pub fn cmd_verify(cfg: &RunConfig, stdout: &mut dyn Write) -> CliResult<bool> {
    let report = verify_report(cfg)?;
    let text = report.render();
    stdout.write_all(text.as_bytes())?;
    if let Some(path) = cfg.output_path.as_deref() {
        emit(Some(path), &text, stdout)?;
    }
    Ok(report.passed())
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return e.exit_code();
        }
    };
    let result = match &cli.command {
        Command::Spectrum(c) => RunConfig::from_args(c, None).and_then(|cfg| cmd_spectrum(&cfg, stdout).map(|_| true)),
        Command::Modes(c) => RunConfig::from_args(c, None).and_then(|cfg| cmd_modes(&cfg, stdout).map(|_| true)),
        Command::Evolve { common, evolve } => {
            RunConfig::from_args(common, Some(evolve)).and_then(|cfg| cmd_evolve(&cfg, stdout).map(|_| true))
        }
        Command::Verify(c) => RunConfig::from_args(c, None).and_then(|cfg| cmd_verify(&cfg, stdout)),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}
