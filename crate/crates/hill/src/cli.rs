//! The `hill` command line: argument parsing, orchestration and output.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hill_core::herglotz::{
    herglotz_pair_suite, hill_functions, principal_suite, residue_table, split_many, HerglotzGrid, HerglotzReport,
    OscillationReport, HILL_FUNCTION_NAMES,
};
use hill_core::oracles::{bloch_band_edges, fd_line_spectrum};
use hill_core::spectrum::{band_edges, classify_gap, dirichlet_eigenvalues};
use hill_core::{Hill, IntegratorOptions, PotentialSpec, Sign, C64};
use serde::Serialize;
use serde_json::{json, Value};

use crate::parallel::par_map;
use crate::potential_file::load_potential;
use crate::records::*;

/// Environment variable holding the default relative integrator tolerance.
pub const TOL_ENV: &str = "HILL_TOL";

/// Edge tolerance of the Bloch comparison.
pub const BLOCH_EDGE_TOL: f64 = 1e-6;
/// Edge tolerance of the finite-difference comparison.
pub const FD_EDGE_TOL: f64 = 1e-2;

#[derive(Debug, Parser)]
#[command(name = "hill", version, about = "Band structure and Herglotz checks for Hill's equation -u'' + Q u = λ u")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Bloch,
    Fd,
    Both,
}

#[derive(Debug, Args)]
struct Common {
    /// Potential document (JSON).
    #[arg(long)]
    potential: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads for grid evaluations.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Relative integrator tolerance (overrides HILL_TOL).
    #[arg(long)]
    rel_tol: Option<f64>,
}

#[derive(Debug, Args)]
struct Range {
    #[arg(long, allow_hyphen_values = true)]
    lambda_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    lambda_max: f64,
    #[arg(long, default_value_t = 200)]
    grid: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Band edges, gap classification and Dirichlet eigenvalues.
    Bands {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        n_bands: usize,
    },
    /// The first Dirichlet eigenvalues with Δ, Δ', Δ'' there.
    Dirichlet {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Δ, Δ', Δ'' and s(T;λ) on a real grid.
    Discriminant {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        range: Range,
    },
    /// Weyl matrix entries on the line Im z = eta.
    Weyl {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        range: Range,
        #[arg(long, default_value_t = 1e-2)]
        eta: f64,
    },
    /// Herglotz certification, two-function oscillation suites and residues.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        lambda_max: f64,
        /// Defaults to min Q − 5.
        #[arg(long, allow_hyphen_values = true)]
        lambda_min: Option<f64>,
        #[arg(long, default_value_t = 1e-3)]
        im_min: f64,
        #[arg(long, default_value_t = 10.0)]
        im_max: f64,
        /// Minimum number of grid points.
        #[arg(long, default_value_t = 2000)]
        points: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Band edges against the Bloch and finite-difference oracles.
    OracleCompare {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        n_bands: usize,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        /// Largest plane-wave truncation for the Bloch oracle.
        #[arg(long, default_value_t = 8192)]
        k_max: usize,
        /// Periods of the finite-difference chain (even, so that both
        /// periodic and antiperiodic edges are chain eigenvalues).
        #[arg(long, default_value_t = 8)]
        fd_periods: usize,
        /// Mesh points per period (the finer mesh doubles it).
        #[arg(long, default_value_t = 256)]
        fd_mesh: usize,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Bands { common, .. }
            | Command::Dirichlet { common, .. }
            | Command::Discriminant { common, .. }
            | Command::Weyl { common, .. }
            | Command::Verify { common, .. }
            | Command::OracleCompare { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Bands { .. } => "bands",
            Command::Dirichlet { .. } => "dirichlet",
            Command::Discriminant { .. } => "discriminant",
            Command::Weyl { .. } => "weyl",
            Command::Verify { .. } => "verify",
            Command::OracleCompare { .. } => "oracle-compare",
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(hill_core::Error),
    Io(String),
}

impl From<hill_core::Error> for Failure {
    fn from(e: hill_core::Error) -> Self {
        Failure::Compute(e)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Runs the tool on `args` (program name first) with the given value of
/// `HILL_TOL`, writing results to `out` and diagnostics to `err`. Returns
/// the exit status.
pub fn run(args: Vec<OsString>, env_tol: Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli.command, env_tol) {
        Ok(text) => match &cli.command.common().output {
            Some(path) => match fs::write(path, text) {
                Ok(()) => 0,
                Err(e) => report(err, &Failure::Io(format!("cannot write {}: {e}", path.display()))),
            },
            None => match out.write_all(text.as_bytes()) {
                Ok(()) => 0,
                Err(e) => report(err, &Failure::Io(e.to_string())),
            },
        },
        Err(f) => report(err, &f),
    }
}

fn report(err: &mut dyn Write, f: &Failure) -> i32 {
    match f {
        Failure::Usage(msg) => {
            let _ = writeln!(err, "error: {msg}\n\nUsage: hill <COMMAND> --potential <FILE> [OPTIONS]\nTry 'hill --help' for more information.");
            2
        }
        Failure::Compute(e) => {
            let doc = json!({ "error": { "kind": error_kind(e), "exit_code": 1, "message": e.to_string(), "details": error_details(e) } });
            let _ = writeln!(err, "{doc}");
            1
        }
        Failure::Io(msg) => {
            let doc = json!({ "error": { "kind": "Io", "exit_code": 1, "message": msg, "details": Value::Null } });
            let _ = writeln!(err, "{doc}");
            1
        }
    }
}

fn error_kind(e: &hill_core::Error) -> &'static str {
    use hill_core::Error::*;
    match e {
        InvalidPotential(_) => "InvalidPotential",
        InvalidOptions(_) => "InvalidOptions",
        StepLimitExceeded { .. } => "StepLimitExceeded",
        StepSizeUnderflow { .. } => "StepSizeUnderflow",
        NonFiniteState { .. } => "NonFiniteState",
        WrongKind => "WrongKind",
        DirichletSingularity { .. } => "DirichletSingularity",
        BracketFailure { .. } => "BracketFailure",
        InvariantViolation(_) => "InvariantViolation",
        InconsistentClassification { .. } => "InconsistentClassification",
        UnstableResidue { .. } => "UnstableResidue",
        TruncationUnconverged { .. } => "TruncationUnconverged",
        MeshTooCoarse { .. } => "MeshTooCoarse",
        InvalidArgument(_) => "InvalidArgument",
    }
}

fn error_details(e: &hill_core::Error) -> Value {
    use hill_core::Error::*;
    match e {
        StepLimitExceeded { max_steps, x } => json!({ "max_steps": max_steps, "x": x }),
        StepSizeUnderflow { x } | NonFiniteState { x } => json!({ "x": x }),
        DirichletSingularity { re, im, s_abs } => json!({ "re": re, "im": im, "s_abs": s_abs }),
        BracketFailure { what, detail, scan } => json!({ "what": what, "detail": detail, "scan": scan }),
        InconsistentClassification { mu, delta_p, c1p } => json!({ "mu": mu, "delta_p": delta_p, "c1p": c1p }),
        UnstableResidue { pole, defect } => json!({ "pole": pole, "defect": defect }),
        TruncationUnconverged { k, shift } => json!({ "k": k, "shift": shift }),
        MeshTooCoarse { defect } => json!({ "defect": defect }),
        _ => Value::Null,
    }
}

fn options(common: &Common, env_tol: Option<String>) -> Result<IntegratorOptions, Failure> {
    let rel = match (common.rel_tol, env_tol) {
        (Some(t), _) => t,
        (None, Some(s)) => s.trim().parse::<f64>().map_err(|_| usage(format!("{TOL_ENV} is not a number: {s:?}")))?,
        (None, None) => return Ok(IntegratorOptions::default()),
    };
    if !(rel.is_finite() && rel > 0.0) {
        return Err(usage(format!("the relative tolerance must be positive and finite, got {rel}")));
    }
    Ok(IntegratorOptions::with_tolerance(rel))
}

fn check_common(common: &Common) -> Result<(), Failure> {
    if common.jobs == 0 {
        return Err(usage("--jobs must be at least 1"));
    }
    Ok(())
}

fn check_range(r: &Range) -> Result<(), Failure> {
    if !(r.lambda_min.is_finite() && r.lambda_max.is_finite() && r.lambda_min < r.lambda_max) {
        return Err(usage(format!("need --lambda-min < --lambda-max, got {} and {}", r.lambda_min, r.lambda_max)));
    }
    if r.grid < 2 {
        return Err(usage(format!("--grid must be at least 2, got {}", r.grid)));
    }
    Ok(())
}

fn info(q: &PotentialSpec) -> PotentialInfo {
    PotentialInfo { kind: q.kind().as_str().into(), declared_period: q.declared_period() }
}

fn execute(cmd: &Command, env_tol: Option<String>) -> Result<String, Failure> {
    let common = cmd.common();
    check_common(common)?;
    let opts = options(common, env_tol)?;
    match cmd {
        Command::Discriminant { range, .. } | Command::Weyl { range, .. } => check_range(range)?,
        _ => {}
    }
    let q = load_potential(&common.potential).map_err(|e| usage(e.to_string()))?;
    let hill = Hill::new(q.clone()).with_options(opts);
    let head = Head { command: cmd.name(), potential: info(&q), format: common.format };
    match cmd {
        Command::Bands { n_bands, .. } => bands(&hill, *n_bands, head),
        Command::Dirichlet { count, .. } => dirichlet(&hill, *count, head),
        Command::Discriminant { range, .. } => discriminant(&hill, range, common.jobs, head),
        Command::Weyl { range, eta, .. } => weyl(&hill, range, *eta, common.jobs, head),
        Command::Verify { lambda_max, lambda_min, im_min, im_max, points, tol, .. } => {
            let v = VerifyArgs {
                lambda_min: *lambda_min,
                lambda_max: *lambda_max,
                im_min: *im_min,
                im_max: *im_max,
                points: *points,
                tol: *tol,
            };
            verify(&hill, &v, common.jobs, head)
        }
        Command::OracleCompare { n_bands, method, k_max, fd_periods, fd_mesh, .. } => {
            let o = OracleArgs {
                n_bands: *n_bands,
                method: *method,
                k_max: *k_max,
                fd_periods: *fd_periods,
                fd_mesh: *fd_mesh,
            };
            oracle_compare(&hill, &o, head)
        }
    }
}

struct Head {
    command: &'static str,
    potential: PotentialInfo,
    format: Format,
}

fn to_json<T: Serialize>(doc: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(doc).map_err(|e| Failure::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_table<R: Row>(rows: &[R]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(R::COLUMNS).map_err(|e| Failure::Io(e.to_string()))?;
    for r in rows {
        w.write_record(r.cells()).map_err(|e| Failure::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Io(e.to_string()))
}

fn csv_block<R: Row>(rows: &[R]) -> Result<String, Failure> {
    Ok(format!("# table: {}\n{}", R::TABLE, csv_table(rows)?))
}

/// Unit conversion from the period-1 problem to the caller's period `T`.
#[derive(Clone, Copy)]
struct Units {
    period: f64,
}

impl Units {
    fn of(hill: &Hill) -> Self {
        Units { period: hill.potential().declared_period() }
    }
    fn scale(self) -> f64 {
        self.period * self.period
    }
    /// λ (and widths) in original units.
    fn energy(self, x: f64) -> f64 {
        x / self.scale()
    }
    fn internal(self, x: f64) -> f64 {
        x * self.scale()
    }
    /// `d^k/dλ^k` of a quantity that is invariant under the rescaling.
    fn derivative(self, x: f64, k: i32) -> f64 {
        x * self.scale().powi(k)
    }
}

fn dirichlet_rows(hill: &Hill, mus: &[hill_core::DirichletEigenvalue]) -> Vec<DirichletRow> {
    let u = Units::of(hill);
    mus.iter()
        .map(|d| DirichletRow {
            n: d.index,
            mu: u.energy(d.mu),
            delta: d.delta_at_mu,
            delta_p: u.derivative(d.delta_p_at_mu, 1),
            delta_pp: u.derivative(d.delta_pp_at_mu, 2),
        })
        .collect()
}

fn bands(hill: &Hill, n_bands: usize, head: Head) -> Result<String, Failure> {
    if n_bands == 0 {
        return Err(usage("--n-bands must be at least 1"));
    }
    let bs = band_edges(hill, n_bands)?;
    let u = Units::of(hill);
    let rows: Vec<BandRow> = bs
        .bands
        .iter()
        .zip(&bs.gaps)
        .map(|(b, g)| BandRow {
            n: b.index,
            alpha: u.energy(b.alpha),
            beta: u.energy(b.beta),
            gap_right_width: u.energy(g.width()),
            gap_closed: g.closed,
            closure_type: g.closure_type.as_str().into(),
        })
        .collect();
    let dirichlet = dirichlet_rows(hill, &bs.dirichlet);
    match head.format {
        Format::Csv => Ok(format!("{}\n{}", csv_block(&rows)?, csv_block(&dirichlet)?)),
        Format::Json => to_json(&BandsDocument {
            schema_version: SCHEMA_VERSION.into(),
            command: head.command.into(),
            potential: head.potential,
            bands: rows,
            dirichlet,
            warnings: bs.warnings,
        }),
    }
}

fn dirichlet(hill: &Hill, count: usize, head: Head) -> Result<String, Failure> {
    if count == 0 {
        return Err(usage("--count must be at least 1"));
    }
    let rows = dirichlet_rows(hill, &dirichlet_eigenvalues(hill, count)?);
    match head.format {
        Format::Csv => csv_table(&rows),
        Format::Json => to_json(&DirichletDocument {
            schema_version: SCHEMA_VERSION.into(),
            command: head.command.into(),
            potential: head.potential,
            dirichlet: rows,
        }),
    }
}

fn grid_points(r: &Range) -> Vec<f64> {
    hill_core::discriminant::linspace(r.lambda_min, r.lambda_max, r.grid)
}

fn discriminant(hill: &Hill, range: &Range, jobs: usize, head: Head) -> Result<String, Failure> {
    let u = Units::of(hill);
    let values = par_map(jobs, &grid_points(range), |&l| hill.discriminant(C64::new(u.internal(l), 0.0)));
    let rows = grid_points(range)
        .into_iter()
        .zip(values)
        .map(|(l, d)| {
            let d = d?;
            Ok(DiscriminantRow {
                lambda: l,
                delta: d.delta.re,
                delta_p: u.derivative(d.delta_p.re, 1),
                delta_pp: u.derivative(d.delta_pp.re, 2),
                // s(T;λ) = T·s(1;T²λ) for the normalized solution
                s1: d.s1.re * u.period,
            })
        })
        .collect::<Result<Vec<_>, hill_core::Error>>()?;
    match head.format {
        Format::Csv => csv_table(&rows),
        Format::Json => to_json(&DiscriminantDocument {
            schema_version: SCHEMA_VERSION.into(),
            command: head.command.into(),
            potential: head.potential,
            rows,
        }),
    }
}

fn weyl(hill: &Hill, range: &Range, eta: f64, jobs: usize, head: Head) -> Result<String, Failure> {
    if !(eta.is_finite() && eta >= 0.0) {
        return Err(usage(format!("--eta must be finite and non-negative, got {eta}")));
    }
    let u = Units::of(hill);
    let points = grid_points(range);
    let values = par_map(jobs, &points, |&l| hill.weyl_matrix(C64::new(u.internal(l), u.internal(eta))));
    let rows = points
        .into_iter()
        .zip(values)
        .map(|(l, w)| {
            let w = w?;
            // M maps (u(0), u(T)) to (u'(0), -u'(T)), so it scales like 1/T
            let s = 1.0 / u.period;
            Ok(WeylRow {
                re: l,
                im: eta,
                m11_re: w.m11.re * s,
                m11_im: w.m11.im * s,
                m12_re: w.m12.re * s,
                m12_im: w.m12.im * s,
                m21_re: w.m21.re * s,
                m21_im: w.m21.im * s,
                m22_re: w.m22.re * s,
                m22_im: w.m22.im * s,
            })
        })
        .collect::<Result<Vec<_>, hill_core::Error>>()?;
    match head.format {
        Format::Csv => csv_table(&rows),
        Format::Json => to_json(&WeylDocument {
            schema_version: SCHEMA_VERSION.into(),
            command: head.command.into(),
            potential: head.potential,
            rows,
        }),
    }
}

struct VerifyArgs {
    lambda_min: Option<f64>,
    lambda_max: f64,
    im_min: f64,
    im_max: f64,
    points: usize,
    tol: f64,
}

fn herglotz_entry(name: &str, r: &HerglotzReport) -> HerglotzEntry {
    HerglotzEntry {
        function: name.into(),
        grid: GridInfo {
            re_min: r.grid.re_min,
            re_max: r.grid.re_max,
            im_min: r.grid.im_min,
            im_max: r.grid.im_max,
            re_points: r.grid.re_points,
        },
        points: r.points,
        min_signed_imag: r.min_signed_imag,
        argmin: ComplexValue { re: r.argmin.re, im: r.argmin.im },
        symmetry_defect: r.symmetry_defect,
        failed_evaluations: r.failures.len(),
        first_failure: r.failures.first().map(|f| format!("z = {}{:+}i: {}", f.z.re, f.z.im, f.message)),
        tol: r.tol,
        pass: r.pass,
    }
}

fn suite_entry(pair: &str, r: &OscillationReport) -> SuiteEntry {
    SuiteEntry {
        pair: pair.into(),
        interval: [r.interval.0, r.interval.1],
        a: r.a,
        b: r.b,
        delta: r.delta,
        critical_points: r.critical_points.clone(),
        items: r
            .items
            .iter()
            .map(|it| SuiteItem {
                item: it.item.to_string(),
                statement: it.statement.into(),
                checked: it.checked,
                failed: it.failed,
                failures: it.failures.clone(),
                pass: it.passed(),
            })
            .collect(),
        pass: r.passed(),
    }
}

fn verify(hill: &Hill, a: &VerifyArgs, jobs: usize, head: Head) -> Result<String, Failure> {
    let u = Units::of(hill);
    let (qmin, _) = hill.potential().bounds();
    let hi = u.internal(a.lambda_max);
    let lo = a.lambda_min.map(|l| u.internal(l)).unwrap_or(qmin - 5.0);
    if !(lo < hi) || !hi.is_finite() {
        return Err(usage(format!("need --lambda-min < --lambda-max, got {lo} and {hi} (normalized)")));
    }
    if !(a.tol.is_finite() && a.tol >= 0.0) {
        return Err(usage(format!("--tol must be finite and non-negative, got {}", a.tol)));
    }
    let grid = HerglotzGrid::with_min_points(lo, hi, a.im_min, a.im_max, a.points)
        .map_err(|e| usage(format!("invalid Herglotz grid: {e}")))?;
    let points = grid.points();
    let raw = par_map(jobs, &points, |&z| Ok((hill_functions(hill, z)?, hill_functions(hill, z.conj())?)));
    let reports = split_many(&grid, &points, &raw, a.tol);
    let herglotz: Vec<HerglotzEntry> =
        HILL_FUNCTION_NAMES.iter().zip(&reports).map(|(n, r)| herglotz_entry(n, r)).collect();

    // Dirichlet eigenvalues up to the top of the range, plus the next one
    let mut count = 4;
    let mus = loop {
        let mus = dirichlet_eigenvalues(hill, count)?;
        if mus.last().is_some_and(|m| m.mu > hi) || count >= 4096 {
            break mus;
        }
        count *= 2;
    };
    let inside = mus.iter().take_while(|m| m.mu <= hi).count();
    let zeros: Vec<f64> = mus[..inside].iter().map(|m| m.mu).collect();
    let interval = (qmin - 1.0, hi);
    let oscillation = vec![
        suite_entry("(-delta,-s)", &principal_suite(hill, interval, &zeros)?),
        suite_entry("(delta,-s)", &herglotz_pair_suite(hill, interval, &zeros)?),
    ];

    let table = residue_table(hill, &mus[..(inside + 1).min(mus.len())])?;
    let mut residues = Vec::new();
    for row in table.iter().filter(|r| r.index <= inside) {
        let closed = classify_gap(hill, &mus[row.index - 1])?.closed;
        residues.push(ResidueEntry {
            n: row.index,
            function: if row.sign == Sign::Plus { "h+" } else { "h-" }.into(),
            mu: row.estimate.pole,
            gap_closed: closed,
            contour: ComplexValue { re: row.estimate.residue.re, im: row.estimate.residue.im },
            formula: row.formula,
            noise: row.noise,
            threshold: row.threshold(),
            defect: row.defect,
            removable: row.removable,
            circle_radius: row.estimate.circle_radius,
            stability_defect: row.estimate.stability_defect,
        });
    }

    let doc = VerifyDocument {
        schema_version: SCHEMA_VERSION.into(),
        command: head.command.into(),
        potential: head.potential,
        units: "normalized".into(),
        energy_scale: u.scale(),
        herglotz,
        oscillation,
        residues,
    };
    match head.format {
        Format::Json => to_json(&doc),
        Format::Csv => csv_table(&verify_checks(&doc)),
    }
}

/// Flat pass/fail summary of a verification document.
pub fn verify_checks(doc: &VerifyDocument) -> Vec<CheckRow> {
    let mut rows = Vec::new();
    for h in &doc.herglotz {
        rows.push(CheckRow {
            section: "herglotz".into(),
            name: h.function.clone(),
            pass: h.pass,
            detail: format!(
                "min Im = {:e} at {}{:+}i, symmetry defect {:e}, {} failed evaluations",
                h.min_signed_imag, h.argmin.re, h.argmin.im, h.symmetry_defect, h.failed_evaluations
            ),
        });
    }
    for s in &doc.oscillation {
        for it in &s.items {
            rows.push(CheckRow {
                section: format!("oscillation {}", s.pair),
                name: format!("({})", it.item),
                pass: it.pass,
                detail: format!("{}/{} checks passed", it.checked - it.failed, it.checked),
            });
        }
    }
    for r in &doc.residues {
        let pass = if r.removable { (r.contour.re.hypot(r.contour.im)) <= r.threshold } else { r.contour.re < 0.0 };
        rows.push(CheckRow {
            section: "residue".into(),
            name: format!("{} at mu_{}", r.function, r.n),
            pass,
            detail: format!(
                "contour {:e}, formula {:e}, {}{}",
                r.contour.re,
                r.formula,
                if r.removable { "removable" } else { "pole" },
                if r.gap_closed { ", closed gap" } else { "" }
            ),
        });
    }
    rows
}

struct OracleArgs {
    n_bands: usize,
    method: Method,
    k_max: usize,
    fd_periods: usize,
    fd_mesh: usize,
}

fn edge_rows(method: &str, reference: &[(f64, f64)], oracle: &[(f64, f64)], tol: f64, u: Units) -> Vec<OracleRow> {
    let mut rows = Vec::new();
    for (n, (r, o)) in reference.iter().zip(oracle).enumerate() {
        for (edge, re, oe) in [("alpha", r.0, o.0), ("beta", r.1, o.1)] {
            let defect = (re - oe).abs();
            rows.push(OracleRow {
                method: method.into(),
                band: n,
                edge: edge.into(),
                reference: u.energy(re),
                oracle: u.energy(oe),
                defect: u.energy(defect),
                tolerance: u.energy(tol),
                pass: defect <= tol,
            });
        }
    }
    rows
}

fn nearest(values: &[f64], x: f64) -> f64 {
    values.iter().copied().min_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs())).unwrap_or(f64::NAN)
}

fn oracle_compare(hill: &Hill, a: &OracleArgs, head: Head) -> Result<String, Failure> {
    if a.n_bands == 0 {
        return Err(usage("--n-bands must be at least 1"));
    }
    if a.fd_periods < 4 || !a.fd_periods.is_multiple_of(2) {
        return Err(usage(format!("--fd-periods must be even and at least 4, got {}", a.fd_periods)));
    }
    let u = Units::of(hill);
    let bs = band_edges(hill, a.n_bands)?;
    let reference: Vec<(f64, f64)> = bs.bands.iter().map(|b| (b.alpha, b.beta)).collect();
    let q = hill.potential();
    let mut methods = Vec::new();
    let mut rows = Vec::new();
    let mut record = |name: &str, tol: f64, result: hill_core::Result<Vec<(f64, f64)>>| match result {
        Ok(edges) => {
            let r = edge_rows(name, &reference, &edges, tol, u);
            let max = r.iter().map(|x| x.defect).fold(0.0, f64::max);
            methods.push(OracleMethod {
                method: name.into(),
                status: "ok".into(),
                error: None,
                max_defect: Some(max),
                tolerance: u.energy(tol),
                pass: r.iter().all(|x| x.pass),
            });
            rows.extend(r);
        }
        Err(e) => {
            // keep the failure visible in CSV output too
            let missing = vec![(f64::NAN, f64::NAN); reference.len()];
            rows.extend(edge_rows(name, &reference, &missing, tol, u));
            methods.push(OracleMethod {
                method: name.into(),
                status: "error".into(),
                error: Some(e.to_string()),
                max_defect: None,
                tolerance: u.energy(tol),
                pass: false,
            });
        }
    };
    if matches!(a.method, Method::Bloch | Method::Both) {
        record("bloch", BLOCH_EDGE_TOL, bloch_band_edges(q, a.n_bands, a.k_max));
    }
    if matches!(a.method, Method::Fd | Method::Both) {
        let top = reference.last().map(|e| e.1).unwrap_or(0.0);
        let width = reference.last().map(|e| e.1 - e.0).unwrap_or(1.0);
        let cutoff = top + width.max(1.0) * 0.25;
        let result = fd_line_spectrum(q, a.fd_periods, a.fd_mesh, cutoff).map(|s| {
            reference.iter().map(|&(lo, hi)| (nearest(&s.eigenvalues, lo), nearest(&s.eigenvalues, hi))).collect()
        });
        record("fd", FD_EDGE_TOL, result);
    }
    match head.format {
        Format::Csv => csv_table(&rows),
        Format::Json => to_json(&OracleDocument {
            schema_version: SCHEMA_VERSION.into(),
            command: head.command.into(),
            potential: head.potential,
            methods,
            rows,
        }),
    }
}
