//! Command-line surface: reproducible experiments over every module, with
//! text, CSV and JSON output.
//!
//! Exit codes: 0 success, 1 precondition error, 2 budget error, 64 usage.
//! Two runs with identical arguments produce identical bytes. The orbit
//! node budget can be overridden with the `QFOREST_NODE_BUDGET`
//! environment variable.

use std::io::Write;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::chan::{self, ForestSpec};
use crate::error::Error;
use crate::heights;
use crate::maps;
use crate::monoid::{self, Mat2};
use crate::orbit::{self, Family, NodeBudget};
use crate::rational::{ProjPoint, Rational};
use crate::report::{csv_row, to_canonical_json, OutputFormat};
use crate::tree;

#[derive(Parser, Debug)]
#[command(
    name = "qforest",
    version,
    about = "Exact enumeration of the positive rationals and height experiments on P1(Q)"
)]
pub struct Cli {
    /// Seed for randomized experiment runs; accepted for reproducibility,
    /// the current subcommands are fully deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    G,
    H,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DensitySetKind {
    /// Positive rationals (density 1/2).
    Positive,
    /// Positive p/q with pq even (density 1/3).
    Even,
    /// The unit interval `[0,1]` (density 1/4).
    UnitInterval,
    /// Values of a map orbit expanded to --depth (needs --maps, --x0).
    CustomMapOrbit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrbitCheckKind {
    Inject,
    Growth,
    Census,
    Density,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Stream the breadth-first tree enumeration as tab-separated "index value" lines.
    Enumerate {
        /// Number of entries to emit.
        #[arg(long)]
        count: u64,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Locate a positive rational: path, BFS index, matrix and continued fraction.
    Locate {
        /// The rational, e.g. "3/5".
        value: String,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Factor an SL2(N0) matrix "a,b,c,d" into its unique L/R word.
    Decompose {
        /// The matrix, row-major "a,b,c,d".
        matrix: String,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Stern diatomic (fusc) values.
    Fusc {
        /// The index n.
        n: u64,
        /// Emit the whole table 0..=n instead of the single value.
        #[arg(long)]
        table: bool,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Iterate Newman's recurrence a -> 1/(1 + floor(a) - frac(a)) from 1.
    Newman {
        /// Number of terms to emit.
        #[arg(long)]
        count: u64,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Verify that a Chan forest partitions its target set up to a height bound.
    Chan {
        /// Family kind: G (partitions Q+) or H (partitions the even-product rationals).
        #[arg(long, value_enum, ignore_case = true)]
        family: FamilyKind,
        /// Family parameter k (G needs k >= 2, H needs k >= 1).
        #[arg(long)]
        k: u64,
        /// Height bound for the partition check.
        #[arg(long)]
        height: u64,
        /// Orbit expansion depth bound.
        #[arg(long)]
        depth: u32,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Exact count of points of P1(Q) with height at most N.
    CountHeights {
        /// The cutoff N.
        #[arg(long)]
        max: u64,
        /// Emit one row per cutoff 1..=N.
        #[arg(long)]
        table: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Height density of a subset of P1(Q), by exhaustive enumeration.
    Density {
        #[arg(long, value_enum)]
        set: DensitySetKind,
        /// The cutoff N.
        #[arg(long)]
        max: u64,
        /// Maps for --set custom-map-orbit, semicolon-separated.
        #[arg(long)]
        maps: Option<String>,
        /// Base point for --set custom-map-orbit.
        #[arg(long)]
        x0: Option<String>,
        /// Expansion depth for --set custom-map-orbit.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Schanuel's constant c_K from user-supplied field invariants.
    Schanuel {
        /// Number of real places.
        #[arg(long)]
        r1: u32,
        /// Number of complex places.
        #[arg(long)]
        r2: u32,
        /// Field discriminant.
        #[arg(long)]
        disc: i64,
        /// Class number.
        #[arg(long)]
        h: u64,
        /// Regulator.
        #[arg(long)]
        reg: f64,
        /// Number of roots of unity.
        #[arg(long)]
        w: u64,
        /// zeta_K(2).
        #[arg(long)]
        zeta2: f64,
        /// Field degree; defaults to r1 + 2*r2.
        #[arg(long)]
        degree: Option<u32>,
        /// Residue of zeta_K at s = 1, to cross-check the two closed forms.
        #[arg(long)]
        residue: Option<f64>,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Orbit experiments for a family of rational maps.
    Orbit {
        /// Semicolon-separated map expressions, e.g. "x^2;2*x^2".
        #[arg(long)]
        maps: String,
        /// Base point, e.g. "2" or "1/2" or "inf".
        #[arg(long)]
        x0: String,
        /// Depth budget.
        #[arg(long)]
        depth: usize,
        /// Which check to run.
        #[arg(long, value_enum)]
        check: OrbitCheckKind,
        /// Growth constant c (clamped to >= 1); derived exactly for
        /// monomial maps, validated by scan otherwise.
        #[arg(long)]
        c: Option<f64>,
        /// Log-height bound B for --check census.
        #[arg(long)]
        b: Option<f64>,
        /// Largest cutoff N for --check density.
        #[arg(long)]
        max: Option<u64>,
        /// Sample count for --check density.
        #[arg(long, default_value_t = 6)]
        samples: usize,
        /// Shorthand for --format json.
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
}

/// Parses arguments, runs, and maps errors to the exit-code contract.
pub fn main_entry<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(&cli.command, &mut out) {
        Ok(()) => 0,
        // The reader went away; die quietly like any pipeline citizen.
        Err(Error::Io(std::io::ErrorKind::BrokenPipe)) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_budget() {
                2
            } else {
                1
            }
        }
    }
}

/// Dispatches a parsed command, writing its report to the sink.
pub fn run<W: Write>(command: &Command, out: &mut W) -> Result<(), Error> {
    match command {
        Command::Enumerate { count, format } => enumerate(*count, *format, out),
        Command::Locate { value, format } => locate(value, *format, out),
        Command::Decompose { matrix, format } => decompose(matrix, *format, out),
        Command::Fusc { n, table, format } => fusc(*n, *table, *format, out),
        Command::Newman { count, format } => newman(*count, *format, out),
        Command::Chan { family, k, height, depth, format } => {
            chan_cmd(*family, *k, *height, *depth, *format, out)
        }
        Command::CountHeights { max, table, format } => count_heights(*max, *table, *format, out),
        Command::Density { set, max, maps, x0, depth, format } => {
            density(*set, *max, maps.as_deref(), x0.as_deref(), *depth, *format, out)
        }
        Command::Schanuel { r1, r2, disc, h, reg, w, zeta2, degree, residue, format } => {
            let inv = heights::FieldInvariants {
                r1: *r1,
                r2: *r2,
                discriminant: *disc,
                class_number: *h,
                regulator: *reg,
                roots_of_unity: *w,
                zeta_at_2: *zeta2,
            };
            schanuel(*degree, &inv, *residue, *format, out)
        }
        Command::Orbit { maps, x0, depth, check, c, b, max, samples, json, format } => {
            let format = if *json { OutputFormat::Json } else { *format };
            orbit_cmd(maps, x0, *depth, *check, *c, *b, *max, *samples, format, out)
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.kind())
}

/// Exhaustive point enumeration is limited to cutoffs below 2^31.
fn check_enumerable(n: u64) -> Result<(), Error> {
    if n > 1 << 31 {
        return Err(Error::precondition(format!(
            "cutoff {n} is too large for exhaustive enumeration (limit 2^31)"
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct IndexedValue {
    index: u64,
    value: String,
}

/// The enumeration stream always prints the full fraction, 1/1 included.
fn full_fraction(v: &Rational) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

fn emit_indexed<W: Write>(
    rows: impl Iterator<Item = (u64, Rational)>,
    format: OutputFormat,
    out: &mut W,
) -> Result<(), Error> {
    match format {
        OutputFormat::Text => {
            for (i, v) in rows {
                writeln!(out, "{i}\t{}", full_fraction(&v)).map_err(io)?;
            }
        }
        OutputFormat::Csv => {
            out.write_all(csv_row(["index", "value"]).as_bytes()).map_err(io)?;
            for (i, v) in rows {
                out.write_all(csv_row([i.to_string(), full_fraction(&v)]).as_bytes())
                    .map_err(io)?;
            }
        }
        OutputFormat::Json => {
            let entries: Vec<IndexedValue> = rows
                .map(|(index, value)| IndexedValue { index, value: full_fraction(&value) })
                .collect();
            writeln!(out, "{}", to_canonical_json(&entries)).map_err(io)?;
        }
    }
    Ok(())
}

fn enumerate<W: Write>(count: u64, format: OutputFormat, out: &mut W) -> Result<(), Error> {
    emit_indexed(tree::enumerate().take(count as usize), format, out)
}

fn newman<W: Write>(count: u64, format: OutputFormat, out: &mut W) -> Result<(), Error> {
    emit_indexed(tree::enumerate().take(count as usize), format, out)
}

#[derive(Serialize)]
struct LocateReport {
    value: Rational,
    path: String,
    index: String,
    matrix: Mat2,
    cf: String,
}

fn locate<W: Write>(value: &str, format: OutputFormat, out: &mut W) -> Result<(), Error> {
    let value: Rational = value.parse()?;
    let word = monoid::omega_inverse_word(&value)?;
    let path = tree::TreePath::from_word(&word);
    let index = tree::rational_to_index(&value)?;
    let matrix = monoid::compose_word(&word);
    let cf = tree::path_to_cf(&path);
    let report = LocateReport {
        value,
        path: path.to_string(),
        index: index.to_string(),
        matrix,
        cf: cf.to_string(),
    };
    match format {
        OutputFormat::Text => {
            writeln!(out, "value {}", report.value).map_err(io)?;
            writeln!(out, "path {}", report.path).map_err(io)?;
            writeln!(out, "index {}", report.index).map_err(io)?;
            writeln!(out, "matrix {}", report.matrix).map_err(io)?;
            writeln!(out, "cf {}", report.cf).map_err(io)?;
        }
        OutputFormat::Csv => {
            out.write_all(csv_row(["value", "path", "index", "matrix", "cf"]).as_bytes())
                .map_err(io)?;
            out.write_all(
                csv_row([
                    report.value.to_string(),
                    report.path,
                    report.index,
                    report.matrix.to_string(),
                    report.cf,
                ])
                .as_bytes(),
            )
            .map_err(io)?;
        }
        OutputFormat::Json => writeln!(out, "{}", to_canonical_json(&report)).map_err(io)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct DecomposeReport {
    matrix: Mat2,
    word: monoid::LRWord,
    value: Rational,
}

fn decompose<W: Write>(matrix: &str, format: OutputFormat, out: &mut W) -> Result<(), Error> {
    let matrix = Mat2::from_str(matrix)?;
    let word = monoid::decompose(&matrix)?;
    let value = monoid::omega(&matrix);
    let report = DecomposeReport { matrix, word, value };
    match format {
        OutputFormat::Text => {
            writeln!(out, "word {}", report.word).map_err(io)?;
            writeln!(out, "omega {}", report.value).map_err(io)?;
        }
        OutputFormat::Csv => {
            out.write_all(csv_row(["matrix", "word", "omega"]).as_bytes()).map_err(io)?;
            out.write_all(
                csv_row([
                    report.matrix.to_string(),
                    report.word.to_string(),
                    report.value.to_string(),
                ])
                .as_bytes(),
            )
            .map_err(io)?;
        }
        OutputFormat::Json => writeln!(out, "{}", to_canonical_json(&report)).map_err(io)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct FuscRow {
    n: u64,
    fusc: String,
}

fn fusc<W: Write>(n: u64, table: bool, format: OutputFormat, out: &mut W) -> Result<(), Error> {
    let rows: Vec<FuscRow> = if table {
        let table = tree::FuscTable::new(n as usize);
        (0..=n).map(|i| FuscRow { n: i, fusc: table.get(i as usize).to_string() }).collect()
    } else {
        vec![FuscRow { n, fusc: tree::fusc_u64(n).to_string() }]
    };
    match format {
        OutputFormat::Text => {
            if table {
                for row in &rows {
                    writeln!(out, "{}\t{}", row.n, row.fusc).map_err(io)?;
                }
            } else {
                writeln!(out, "{}", rows[0].fusc).map_err(io)?;
            }
        }
        OutputFormat::Csv => {
            out.write_all(csv_row(["n", "fusc"]).as_bytes()).map_err(io)?;
            for row in &rows {
                out.write_all(csv_row([row.n.to_string(), row.fusc.clone()]).as_bytes())
                    .map_err(io)?;
            }
        }
        OutputFormat::Json => writeln!(out, "{}", to_canonical_json(&rows)).map_err(io)?,
    }
    Ok(())
}

fn build_forest(kind: FamilyKind, k: u64) -> Result<ForestSpec, Error> {
    match kind {
        FamilyKind::G => chan::gk_family(k),
        FamilyKind::H => chan::hk_family(k),
    }
}

fn chan_cmd<W: Write>(
    kind: FamilyKind,
    k: u64,
    height: u64,
    depth: u32,
    format: OutputFormat,
    out: &mut W,
) -> Result<(), Error> {
    if height < 1 || depth < 1 {
        return Err(Error::precondition("height and depth bounds must be at least 1"));
    }
    check_enumerable(height)?;
    let spec = build_forest(kind, k)?;
    let report = chan::verify_partition(&spec, height, depth);
    match format {
        OutputFormat::Text => {
            writeln!(out, "family {}", report.parameters.family).map_err(io)?;
            writeln!(out, "maps {}", spec.maps().len()).map_err(io)?;
            writeln!(out, "roots {}", spec.roots().len()).map_err(io)?;
            writeln!(out, "collected {}", report.counts_per_orbit.iter().sum::<u64>())
                .map_err(io)?;
            writeln!(out, "duplicates {}", report.duplicates.len()).map_err(io)?;
            writeln!(out, "foreign {}", report.foreign.len()).map_err(io)?;
            writeln!(out, "missing {}", report.missing.len()).map_err(io)?;
            writeln!(out, "inconclusive-missing {}", report.inconclusive_missing.len())
                .map_err(io)?;
            writeln!(out, "conclusive {}", report.conclusive).map_err(io)?;
            writeln!(out, "clean {}", report.is_clean()).map_err(io)?;
        }
        OutputFormat::Csv => {
            out.write_all(
                csv_row([
                    "family",
                    "orbit",
                    "root",
                    "collected",
                    "duplicates",
                    "foreign",
                    "missing",
                    "inconclusiveMissing",
                    "conclusive",
                ])
                .as_bytes(),
            )
            .map_err(io)?;
            for (i, root) in spec.roots().iter().enumerate() {
                out.write_all(
                    csv_row([
                        report.parameters.family.clone(),
                        i.to_string(),
                        root.to_string(),
                        report.counts_per_orbit[i].to_string(),
                        report.duplicates.len().to_string(),
                        report.foreign.len().to_string(),
                        report.missing.len().to_string(),
                        report.inconclusive_missing.len().to_string(),
                        report.conclusive.to_string(),
                    ])
                    .as_bytes(),
                )
                .map_err(io)?;
            }
        }
        OutputFormat::Json => writeln!(out, "{}", to_canonical_json(&report)).map_err(io)?,
    }
    Ok(())
}

fn count_heights<W: Write>(
    max: u64,
    table: bool,
    format: OutputFormat,
    out: &mut W,
) -> Result<(), Error> {
    if max < 1 {
        return Err(Error::precondition("the cutoff must be at least 1"));
    }
    check_enumerable(max)?;
    let counter = heights::HeightCounter::new(max);
    let censuses: Vec<heights::HeightCensus> = if table {
        (1..=max).map(|n| counter.census(n)).collect()
    } else {
        vec![counter.census(max)]
    };
    match format {
        OutputFormat::Text | OutputFormat::Csv => {
            out.write_all(csv_row(["N", "count", "ratio"]).as_bytes()).map_err(io)?;
            for c in &censuses {
                out.write_all(
                    csv_row([
                        c.cutoff.to_string(),
                        c.total_points.to_string(),
                        c.ratio_exact.clone(),
                    ])
                    .as_bytes(),
                )
                .map_err(io)?;
            }
        }
        OutputFormat::Json => writeln!(out, "{}", to_canonical_json(&censuses)).map_err(io)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct DensityReport {
    set: String,
    cutoff: u64,
    count: u128,
    total: u128,
    ratio: f64,
}

fn density<W: Write>(
    set: DensitySetKind,
    max: u64,
    maps: Option<&str>,
    x0: Option<&str>,
    depth: Option<usize>,
    format: OutputFormat,
    out: &mut W,
) -> Result<(), Error> {
    if max < 1 {
        return Err(Error::precondition("the cutoff must be at least 1"));
    }
    check_enumerable(max)?;
    let (label, estimate) = match set {
        DensitySetKind::Positive => {
            ("positive".to_string(), heights::density_estimate(heights::predicate_positive, max))
        }
        DensitySetKind::Even => (
            "even".to_string(),
            heights::density_estimate(heights::predicate_even_product, max),
        ),
        DensitySetKind::UnitInterval => (
            "unit-interval".to_string(),
            heights::density_estimate(heights::predicate_unit_interval, max),
        ),
        DensitySetKind::CustomMapOrbit => {
            let maps = maps
                .ok_or_else(|| Error::precondition("--set custom-map-orbit needs --maps"))?;
            let x0 = x0.ok_or_else(|| Error::precondition("--set custom-map-orbit needs --x0"))?;
            let depth =
                depth.ok_or_else(|| Error::precondition("--set custom-map-orbit needs --depth"))?;
            let family = Family::new(maps::parse_family(maps)?, x0.parse()?)?;
            let nodes = orbit::expand_orbit(&family, depth, NodeBudget::from_env())?;
            let values: std::collections::HashSet<ProjPoint> =
                nodes.into_iter().map(|n| n.value).collect();
            let estimate = heights::density_estimate(|p| values.contains(p), max);
            (format!("custom-map-orbit(depth {depth})"), estimate)
        }
    };
    let report = DensityReport {
        set: label,
        cutoff: estimate.cutoff,
        count: estimate.count,
        total: estimate.total,
        ratio: estimate.ratio,
    };
    match format {
        OutputFormat::Text => {
            writeln!(out, "set {}", report.set).map_err(io)?;
            writeln!(out, "N {}", report.cutoff).map_err(io)?;
            writeln!(out, "count {}", report.count).map_err(io)?;
            writeln!(out, "total {}", report.total).map_err(io)?;
            writeln!(out, "ratio {}", report.ratio).map_err(io)?;
        }
        OutputFormat::Csv => {
            out.write_all(csv_row(["set", "N", "count", "total", "ratio"]).as_bytes())
                .map_err(io)?;
            out.write_all(
                csv_row([
                    report.set.clone(),
                    report.cutoff.to_string(),
                    report.count.to_string(),
                    report.total.to_string(),
                    report.ratio.to_string(),
                ])
                .as_bytes(),
            )
            .map_err(io)?;
        }
        OutputFormat::Json => writeln!(out, "{}", to_canonical_json(&report)).map_err(io)?,
    }
    Ok(())
}

fn schanuel<W: Write>(
    degree: Option<u32>,
    inv: &heights::FieldInvariants,
    residue: Option<f64>,
    format: OutputFormat,
    out: &mut W,
) -> Result<(), Error> {
    let degree = degree.unwrap_or(inv.r1 + 2 * inv.r2);
    let constant = heights::schanuel_constant(degree, inv, residue)?;
    match format {
        OutputFormat::Text => {
            writeln!(out, "{:.10}", constant.value).map_err(io)?;
            if let (Some(form), Some(disc)) =
                (constant.residue_form, constant.relative_discrepancy)
            {
                writeln!(out, "residue form {form:.10}").map_err(io)?;
                writeln!(out, "relative discrepancy {disc:.3e}").map_err(io)?;
            }
        }
        OutputFormat::Csv => {
            out.write_all(csv_row(["cK", "residueForm", "relativeDiscrepancy"]).as_bytes())
                .map_err(io)?;
            out.write_all(
                csv_row([
                    format!("{:.12}", constant.value),
                    constant.residue_form.map(|v| format!("{v:.12}")).unwrap_or_default(),
                    constant
                        .relative_discrepancy
                        .map(|v| format!("{v:.3e}"))
                        .unwrap_or_default(),
                ])
                .as_bytes(),
            )
            .map_err(io)?;
        }
        OutputFormat::Json => writeln!(out, "{}", to_canonical_json(&constant)).map_err(io)?,
    }
    Ok(())
}

/// The orbit subcommand's JSON schema: family, x0, n0, c, mode, results,
/// witnesses.
#[derive(Serialize)]
struct OrbitReport {
    family: Vec<String>,
    x0: ProjPoint,
    check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    n0: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<orbit::CertMode>,
    results: Vec<serde_json::Value>,
    witnesses: Vec<serde_json::Value>,
    passed: bool,
}

/// Height bound of the empirical certification scan.
const EMPIRICAL_SCAN_BOUND: u64 = 1000;

#[allow(clippy::too_many_arguments)]
fn orbit_cmd<W: Write>(
    maps_text: &str,
    x0: &str,
    depth: usize,
    check: OrbitCheckKind,
    c: Option<f64>,
    b: Option<f64>,
    max: Option<u64>,
    samples: usize,
    format: OutputFormat,
    out: &mut W,
) -> Result<(), Error> {
    let maps = maps::parse_family(maps_text)?;
    let family_strings: Vec<String> = maps.iter().map(|m| m.to_string()).collect();
    let base: ProjPoint = x0.parse()?;
    let budget = NodeBudget::from_env();

    let report = match check {
        OrbitCheckKind::Inject => {
            let fam = Family::new(maps, base.clone())?;
            let inj = orbit::check_injectivity(&fam, depth, budget)?;
            let passed = inj.injective();
            OrbitReport {
                family: family_strings,
                x0: base,
                check: "inject".into(),
                n0: None,
                c: None,
                mode: None,
                results: vec![serde_json::json!({
                    "depth": inj.depth,
                    "nodesChecked": inj.nodes_checked,
                    "injective": passed,
                })],
                witnesses: inj
                    .collision
                    .iter()
                    .map(|w| serde_json::to_value(w).expect("serializable"))
                    .collect(),
                passed,
            }
        }
        OrbitCheckKind::Growth => {
            let fam = Family::certified(maps, base.clone(), c, EMPIRICAL_SCAN_BOUND)?;
            let cert = fam.certified_c().expect("certified constructor");
            let growth = orbit::growth_check(&fam, depth, budget)?;
            let passed = growth.passed();
            OrbitReport {
                family: family_strings,
                x0: base,
                check: "growth".into(),
                n0: Some(growth.n0),
                c: Some(cert.c),
                mode: Some(cert.mode),
                results: vec![serde_json::json!({
                    "depth": growth.depth,
                    "nodesChecked": growth.nodes_checked,
                    "exponentialViolations": growth.exponential_violations.len(),
                    "singleStepViolations": growth.single_step_violations.len(),
                })],
                witnesses: growth
                    .exponential_violations
                    .iter()
                    .chain(growth.single_step_violations.iter())
                    .map(|w| serde_json::to_value(w).expect("serializable"))
                    .collect(),
                passed,
            }
        }
        OrbitCheckKind::Census => {
            let b = b.ok_or_else(|| Error::precondition("--check census needs --b"))?;
            let fam = Family::certified(maps, base.clone(), c, EMPIRICAL_SCAN_BOUND)?;
            let cert = fam.certified_c().expect("certified constructor");
            let census = orbit::orbit_height_census(&fam, b, depth, budget)?;
            let passed = census.within_bound;
            OrbitReport {
                family: family_strings,
                x0: base,
                check: "census".into(),
                n0: Some(census.n0),
                c: Some(cert.c),
                mode: Some(cert.mode),
                results: vec![serde_json::to_value(&census).expect("serializable")],
                witnesses: Vec::new(),
                passed,
            }
        }
        OrbitCheckKind::Density => {
            let max = max.ok_or_else(|| Error::precondition("--check density needs --max"))?;
            if maps.iter().any(|m| m.degree() < 2) {
                return Err(Error::precondition(
                    "height density of an orbit needs every map of degree at least 2",
                ));
            }
            let fam = Family::certified(maps, base.clone(), c, EMPIRICAL_SCAN_BOUND)?;
            let cert = fam.certified_c().expect("certified constructor");
            let rows = orbit::orbit_density_trace(&fam, max, samples, budget)?;
            let tail: Vec<f64> = rows.iter().rev().take(3).map(|r| r.ratio).collect();
            let passed = tail.windows(2).all(|w| w[0] <= w[1]);
            OrbitReport {
                family: family_strings,
                x0: base,
                check: "density".into(),
                n0: None,
                c: Some(cert.c),
                mode: Some(cert.mode),
                results: rows
                    .iter()
                    .map(|r| serde_json::to_value(r).expect("serializable"))
                    .collect(),
                witnesses: Vec::new(),
                passed,
            }
        }
    };

    match format {
        OutputFormat::Text => {
            writeln!(out, "family {}", report.family.join("; ")).map_err(io)?;
            writeln!(out, "x0 {}", report.x0).map_err(io)?;
            writeln!(out, "check {}", report.check).map_err(io)?;
            if let Some(n0) = report.n0 {
                writeln!(out, "n0 {n0}").map_err(io)?;
            }
            if let Some(c) = report.c {
                writeln!(out, "c {c}").map_err(io)?;
            }
            if let Some(mode) = report.mode {
                writeln!(out, "mode {}", match mode {
                    orbit::CertMode::Analytic => "analytic",
                    orbit::CertMode::Empirical => "empirical",
                })
                .map_err(io)?;
            }
            for row in &report.results {
                writeln!(out, "result {row}").map_err(io)?;
            }
            for w in &report.witnesses {
                writeln!(out, "witness {w}").map_err(io)?;
            }
            writeln!(out, "passed {}", report.passed).map_err(io)?;
        }
        OutputFormat::Csv => {
            out.write_all(csv_row(["check", "field", "value"]).as_bytes()).map_err(io)?;
            for (field, value) in [
                ("family", report.family.join("; ")),
                ("x0", report.x0.to_string()),
                ("n0", report.n0.map(|v| v.to_string()).unwrap_or_default()),
                ("c", report.c.map(|v| v.to_string()).unwrap_or_default()),
                ("passed", report.passed.to_string()),
            ] {
                out.write_all(csv_row([report.check.clone(), field.to_string(), value]).as_bytes())
                    .map_err(io)?;
            }
            for row in &report.results {
                out.write_all(
                    csv_row([report.check.clone(), "result".to_string(), row.to_string()])
                        .as_bytes(),
                )
                .map_err(io)?;
            }
        }
        OutputFormat::Json => writeln!(out, "{}", to_canonical_json(&report)).map_err(io)?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (String, Result<(), Error>) {
        let cli = Cli::try_parse_from(args).expect("args parse");
        let mut buf = Vec::new();
        let result = run(&cli.command, &mut buf);
        (String::from_utf8(buf).expect("utf8 output"), result)
    }

    #[test]
    fn enumerate_head() {
        let (out, r) = run_capture(&["qforest", "enumerate", "--count", "3"]);
        r.unwrap();
        assert_eq!(out, "0\t1/1\n1\t1/2\n2\t2/1\n");
    }

    #[test]
    fn locate_example() {
        let (out, r) = run_capture(&["qforest", "locate", "3/5"]);
        r.unwrap();
        assert_eq!(out, "value 3/5\npath LRL\nindex 9\nmatrix 2,1,3,2\ncf [0;1,1,2]\n");
    }

    #[test]
    fn schanuel_rational_example() {
        let (out, r) = run_capture(&[
            "qforest", "schanuel", "--r1", "1", "--r2", "0", "--disc", "1", "--h", "1", "--reg",
            "1", "--w", "2", "--zeta2", "1.6449340668482264",
        ]);
        r.unwrap();
        assert!(out.starts_with("1.2158542037"), "{out}");
    }

    #[test]
    fn count_heights_csv_example() {
        let (out, r) = run_capture(&["qforest", "count-heights", "--max", "1"]);
        r.unwrap();
        assert_eq!(out, "N,count,ratio\n1,4,4\n");
    }

    #[test]
    fn decompose_examples() {
        let (out, r) = run_capture(&["qforest", "decompose", "2,1,3,2"]);
        r.unwrap();
        assert_eq!(out, "word LRL\nomega 3/5\n");
        let (_, r) = run_capture(&["qforest", "decompose", "1,1,1,1"]);
        assert_eq!(r, Err(Error::NotInSl2N0));
    }

    #[test]
    fn json_is_canonical() {
        let (out, r) = run_capture(&["qforest", "locate", "3/5", "--format", "json"]);
        r.unwrap();
        assert_eq!(
            out,
            "{\"cf\":\"[0;1,1,2]\",\"index\":\"9\",\"matrix\":\"2,1,3,2\",\"path\":\"LRL\",\"value\":\"3/5\"}\n"
        );
    }

    #[test]
    fn determinism() {
        let args = ["qforest", "chan", "--family", "g", "--k", "2", "--height", "8", "--depth",
            "40", "--format", "json"];
        let (a, ra) = run_capture(&args);
        let (b, rb) = run_capture(&args);
        ra.unwrap();
        rb.unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"countsPerOrbit\""));
    }

    #[test]
    fn orbit_inject_json() {
        let (out, r) = run_capture(&[
            "qforest", "orbit", "--maps", "x^2;2*x^2", "--x0", "2", "--depth", "6", "--check",
            "inject", "--json",
        ]);
        r.unwrap();
        assert!(out.contains("\"passed\":true"), "{out}");
        assert!(out.contains("\"family\":[\"x^2\",\"2*x^2\"]"), "{out}");
    }
}
