//! Command-line front end: argument parsing, file loading and report output.
//!
//! Reports go to stdout as a single JSON (or CSV) document; warnings and
//! errors go to stderr. Exit codes: 0 success, 2 usage, 3 invalid input,
//! 4 violated precondition.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hvnogo_core::bellqubit::{self, BellError, BlochVector, PauliObservable};
use hvnogo_core::nogo::{self, FeasibilityStatus, NogoError};
use hvnogo_core::opalg::{joint_spectrum, OpError};
use hvnogo_core::surd;
use hvnogo_core::valuation::{
    bootstrap_dim_plus_one, catalog_names, find_family_valuation, find_valuation, ks_catalog,
    tensor_lift, ValuationError, VectorSetJson,
};
use hvnogo_core::{Complex64, DVector, HermitianOperator, ProjectionSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Norm deviations above this are normalized with a warning.
pub const NORM_WARN_TOL: f64 = 1e-10;
/// Norm deviations above this are rejected (vector files) or warned about (Bloch vectors).
pub const NORM_REJECT_TOL: f64 = 1e-6;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Precondition(String),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Validation(_) | CliError::Io(_) => EXIT_VALIDATION,
            CliError::Precondition(_) => EXIT_PRECONDITION,
        }
    }
}

impl From<ValuationError> for CliError {
    fn from(e: ValuationError) -> Self {
        match e {
            ValuationError::PreconditionViolated { .. } => CliError::Precondition(e.to_string()),
            ValuationError::Op(op) => op.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<OpError> for CliError {
    fn from(e: OpError) -> Self {
        match e {
            OpError::NonCommuting { .. } => CliError::Precondition(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<BellError> for CliError {
    fn from(e: BellError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<NogoError> for CliError {
    fn from(e: NogoError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "hvnogo",
    version,
    about = "Hidden-variable no-go checks: valuations, qubit model, sub-effect witnesses"
)]
pub struct Cli {
    /// Output format for the report on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Built-in Kochen-Specker vector sets.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Search for a 0/1 valuation.
    #[command(subcommand)]
    Valuation(ValuationCmd),
    /// Lift an uncolorable set to one dimension higher.
    #[command(subcommand)]
    Bootstrap(BootstrapCmd),
    /// Tensor a set with an identity and search the lifted family.
    #[command(subcommand)]
    Tensor(TensorCmd),
    /// Joint spectrum of a commuting operator family.
    Jointspec { file: PathBuf },
    /// Qubit hidden-variable model.
    #[command(subcommand)]
    Bell(BellCmd),
    /// Finite-dimensional witnesses for the expectation no-go argument.
    #[command(subcommand)]
    Nogo(NogoCmd),
}

#[derive(Debug, Subcommand)]
pub enum CatalogCmd {
    List,
    Show { name: String },
}

#[derive(Debug, Subcommand)]
pub enum ValuationCmd {
    Solve { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum BootstrapCmd {
    Lift { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum TensorCmd {
    Lift {
        file: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        env_dim: u64,
    },
}

#[derive(Debug, Args)]
pub struct Sampling {
    /// Number of Monte Carlo samples.
    #[arg(short = 'N', long = "samples", default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum BellCmd {
    /// Estimate the mean assigned value of `a0 + a·σ` in the state with Bloch vector n.
    Expect {
        /// Bloch vector as X,Y,Z.
        #[arg(long, allow_hyphen_values = true)]
        n: String,
        /// Observable as A0,AX,AY,AZ.
        #[arg(long, allow_hyphen_values = true)]
        obs: String,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Contrast the x- and z-mixtures that share the maximally mixed state.
    ConvexityDemo {
        #[command(flatten)]
        sampling: Sampling,
    },
}

#[derive(Debug, Subcommand)]
pub enum NogoCmd {
    /// Decide whether a common sub-effect exists for two rank-1 projections.
    Subeffect {
        /// Vector components separated by commas; a complex entry is RE:IM.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Embed random states and effects into a larger space and compare statistics.
    Transport {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        target: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

/// Parses `argv` (including the program name), runs the command and returns the exit code.
pub fn dispatch<I, T>(argv: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match threads_from_env() {
        Ok(Some(n)) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(&cli, out, err)),
            Err(e) => Err(CliError::Validation(format!(
                "cannot start worker pool: {e}"
            ))),
        },
        Ok(None) => run(&cli, out, err),
        Err(e) => Err(e),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var("HVNOGO_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!(
                "HVNOGO_THREADS must be a positive integer, got {v:?}"
            ))),
        },
        Err(_) => Ok(None),
    }
}

/// Reads a vector-set file. Components may be numbers or surd strings.
/// Vectors within 1e-6 of unit norm are normalized (with a warning above 1e-10);
/// others are rejected. The orthogonality graph is rebuilt from the vectors.
pub fn load_projection_set(path: &Path, diag: &mut dyn Write) -> Result<ProjectionSet, CliError> {
    let text = read(path)?;
    let json: VectorSetJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let raw = json.raw_vectors()?;
    let mut vectors = Vec::with_capacity(raw.len());
    for (i, v) in raw.into_iter().enumerate() {
        let norm = v.norm();
        if norm == 0.0 {
            return Err(ValuationError::ZeroVector(i).into());
        }
        let deviation = (norm - 1.0).abs();
        if !deviation.is_finite() || deviation > NORM_REJECT_TOL {
            return Err(ValuationError::NotUnit { index: i, norm }.into());
        }
        if deviation > NORM_WARN_TOL {
            writeln!(diag, "warning: vector {i} has norm {norm}; normalizing")?;
        }
        vectors.push(v);
    }
    Ok(ProjectionSet::normalized(json.name, json.dim, vectors)?)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))
}

/// Operator family file: `{"operators": [{"dim": n, "entries": [[[re, im], ...], ...]}, ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyFile {
    pub operators: Vec<HermitianOperator>,
}

pub fn load_family(path: &Path) -> Result<Vec<HermitianOperator>, CliError> {
    let text = read(path)?;
    let file: FamilyFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    Ok(file.operators)
}

fn parse_reals(text: &str, expected: usize, what: &str) -> Result<Vec<f64>, CliError> {
    let values = text
        .split(',')
        .map(|s| surd::eval(s).map_err(|e| CliError::Validation(format!("{what}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != expected {
        return Err(CliError::Validation(format!(
            "{what}: expected {expected} components, got {}",
            values.len()
        )));
    }
    Ok(values)
}

/// Parses `c1,c2,...` where each component is `EXPR` or `RE:IM`.
pub fn parse_complex_vector(text: &str) -> Result<DVector<Complex64>, CliError> {
    let comps = text
        .split(',')
        .map(|c| {
            let (re, im) = c.split_once(':').unwrap_or((c, "0"));
            let value = |s: &str| {
                surd::eval(s)
                    .map_err(|e| CliError::Validation(format!("vector component {c:?}: {e}")))
            };
            Ok(Complex64::new(value(re)?, value(im)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(DVector::from_vec(comps))
}

fn projector_of(text: &str, which: &str) -> Result<HermitianOperator, CliError> {
    let v = parse_complex_vector(text)?;
    let norm = v.norm();
    if norm == 0.0 || !norm.is_finite() {
        return Err(CliError::Validation(format!("vector {which} is zero")));
    }
    Ok(HermitianOperator::projector(&v.unscale(norm)))
}

#[derive(Serialize)]
struct CatalogEntry {
    name: String,
    dim: usize,
    vectors: usize,
    edges: usize,
}

#[derive(Serialize)]
struct CatalogList {
    sets: Vec<CatalogEntry>,
}

#[derive(Serialize)]
struct TensorReport {
    name: String,
    env_dim: usize,
    dim: usize,
    rank: usize,
    status: hvnogo_core::SolveStatus,
    nodes: u64,
    cliques: usize,
    operators: Vec<HermitianOperator>,
}

#[derive(Serialize)]
struct SpectrumPoint {
    tuple: Vec<f64>,
    multiplicity: usize,
}

#[derive(Serialize)]
struct SpectrumReport {
    dim: usize,
    points: Vec<SpectrumPoint>,
}

#[derive(Serialize)]
struct ConvexityDemoReport {
    #[serde(flatten)]
    report: bellqubit::ConvexityReport,
    mixtures_consistent: bool,
}

#[derive(Serialize)]
struct SubeffectReport {
    status: FeasibilityStatus,
    overlap: f64,
    obstruction_value: Option<f64>,
    obstruction_vector: Option<Vec<[f64; 2]>>,
    diagonal_element: Option<f64>,
    witness: Option<HermitianOperator>,
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn emit_csv(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn vector_rows(set: &ProjectionSet) -> Vec<Vec<String>> {
    set.vectors()
        .iter()
        .enumerate()
        .flat_map(|(i, v)| {
            v.iter().enumerate().map(move |(k, z)| {
                vec![
                    i.to_string(),
                    k.to_string(),
                    z.re.to_string(),
                    z.im.to_string(),
                ]
            })
        })
        .collect()
}

fn emit_set(out: &mut dyn Write, format: Format, set: &ProjectionSet) -> Result<(), CliError> {
    match format {
        Format::Json => emit_json(out, &set.to_json()),
        Format::Csv => emit_csv(out, &["vector", "component", "re", "im"], &vector_rows(set)),
    }
}

fn run(
    cli: &Cli,
    out: &mut (dyn Write + Send),
    err: &mut (dyn Write + Send),
) -> Result<(), CliError> {
    let format = cli.format;
    match &cli.command {
        Command::Catalog(CatalogCmd::List) => {
            let sets = catalog_names()
                .iter()
                .map(|name| {
                    let s = ks_catalog(name)?;
                    Ok(CatalogEntry {
                        name: name.to_string(),
                        dim: s.dim(),
                        vectors: s.len(),
                        edges: s.edge_count(),
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            match format {
                Format::Json => emit_json(out, &CatalogList { sets }),
                Format::Csv => emit_csv(
                    out,
                    &["name", "dim", "vectors", "edges"],
                    &sets
                        .iter()
                        .map(|e| {
                            vec![
                                e.name.clone(),
                                e.dim.to_string(),
                                e.vectors.to_string(),
                                e.edges.to_string(),
                            ]
                        })
                        .collect::<Vec<_>>(),
                ),
            }
        }
        Command::Catalog(CatalogCmd::Show { name }) => emit_set(out, format, &ks_catalog(name)?),
        Command::Valuation(ValuationCmd::Solve { file }) => {
            let set = load_projection_set(file, err)?;
            let report = find_valuation(&set).report();
            match format {
                Format::Json => emit_json(out, &report),
                Format::Csv => {
                    let witness = report
                        .witness
                        .as_ref()
                        .map(|w| {
                            w.values()
                                .iter()
                                .map(u8::to_string)
                                .collect::<Vec<_>>()
                                .join("")
                        })
                        .unwrap_or_default();
                    let status = serde_json::to_value(report.status).expect("status serializes");
                    emit_csv(
                        out,
                        &["status", "nodes", "witness"],
                        &[vec![
                            status.as_str().unwrap_or_default().to_string(),
                            report.nodes.to_string(),
                            witness,
                        ]],
                    )
                }
            }
        }
        Command::Bootstrap(BootstrapCmd::Lift { file }) => {
            let set = load_projection_set(file, err)?;
            let lifted = bootstrap_dim_plus_one(&set)?;
            emit_set(out, format, &lifted)
        }
        Command::Tensor(TensorCmd::Lift { file, env_dim }) => {
            let set = load_projection_set(file, err)?;
            let env_dim = usize::try_from(*env_dim).map_err(|e| CliError::Usage(e.to_string()))?;
            let ops = tensor_lift(&set, env_dim)?;
            let result = find_family_valuation(&ops)?;
            let report = TensorReport {
                name: set.name().to_string(),
                env_dim,
                dim: set.dim() * env_dim,
                rank: env_dim,
                status: result.status,
                nodes: result.nodes_explored,
                cliques: result.cliques_used,
                operators: ops,
            };
            match format {
                Format::Json => emit_json(out, &report),
                Format::Csv => {
                    let status = serde_json::to_value(report.status).expect("status serializes");
                    emit_csv(
                        out,
                        &[
                            "name",
                            "env_dim",
                            "dim",
                            "rank",
                            "operators",
                            "status",
                            "nodes",
                            "cliques",
                        ],
                        &[vec![
                            report.name,
                            env_dim.to_string(),
                            report.dim.to_string(),
                            env_dim.to_string(),
                            report.operators.len().to_string(),
                            status.as_str().unwrap_or_default().to_string(),
                            report.nodes.to_string(),
                            report.cliques.to_string(),
                        ]],
                    )
                }
            }
        }
        Command::Jointspec { file } => {
            let family = load_family(file)?;
            let spectrum = joint_spectrum(&family)?;
            let report = SpectrumReport {
                dim: family[0].dim(),
                points: spectrum
                    .points
                    .iter()
                    .map(|p| SpectrumPoint {
                        tuple: p.tuple.clone(),
                        multiplicity: p.multiplicity(),
                    })
                    .collect(),
            };
            match format {
                Format::Json => emit_json(out, &report),
                Format::Csv => {
                    let mut header = vec!["multiplicity".to_string()];
                    header.extend((0..family.len()).map(|i| format!("value{i}")));
                    let header: Vec<&str> = header.iter().map(String::as_str).collect();
                    let rows: Vec<Vec<String>> = report
                        .points
                        .iter()
                        .map(|p| {
                            std::iter::once(p.multiplicity.to_string())
                                .chain(p.tuple.iter().map(f64::to_string))
                                .collect()
                        })
                        .collect();
                    emit_csv(out, &header, &rows)
                }
            }
        }
        Command::Bell(BellCmd::Expect { n, obs, sampling }) => {
            let raw = parse_reals(n, 3, "--n")?;
            let (n, norm) = BlochVector::normalized([raw[0], raw[1], raw[2]])?;
            if (norm - 1.0).abs() > NORM_REJECT_TOL {
                writeln!(err, "warning: Bloch vector has norm {norm}; normalizing")?;
            }
            let a = parse_reals(obs, 4, "--obs")?;
            let a = PauliObservable::new(a[0], [a[1], a[2], a[3]]);
            let samples =
                usize::try_from(sampling.samples).map_err(|e| CliError::Usage(e.to_string()))?;
            let report = bellqubit::simulate_expectation(&n, &a, samples, sampling.seed)?;
            match format {
                Format::Json => emit_json(out, &report),
                Format::Csv => emit_csv(
                    out,
                    &["estimate", "reference", "n", "seed", "std_error"],
                    &[vec![
                        report.estimate.to_string(),
                        report.reference.to_string(),
                        report.samples.to_string(),
                        report.seed.to_string(),
                        report.std_error.to_string(),
                    ]],
                ),
            }
        }
        Command::Bell(BellCmd::ConvexityDemo { sampling }) => {
            let samples =
                usize::try_from(sampling.samples).map_err(|e| CliError::Usage(e.to_string()))?;
            let report = bellqubit::convexity_failure_demo(samples, sampling.seed)?;
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let ket = |x: f64, y: f64| {
                DVector::from_vec(vec![Complex64::new(x, 0.0), Complex64::new(y, 0.0)])
            };
            let mixtures_consistent = nogo::mixture_consistency_check(
                &[(0.5, ket(s, s)), (0.5, ket(s, -s))],
                &[(0.5, ket(1.0, 0.0)), (0.5, ket(0.0, 1.0))],
            )?;
            let report = ConvexityDemoReport {
                report,
                mixtures_consistent,
            };
            match format {
                Format::Json => emit_json(out, &report),
                Format::Csv => emit_csv(
                    out,
                    &[
                        "mean_abs_vx_x_mixture",
                        "mean_abs_vx_z_mixture",
                        "support_violation_x",
                        "samples",
                        "seed",
                        "mixtures_consistent",
                    ],
                    &[vec![
                        report.report.mean_abs_vx_x_mixture.to_string(),
                        report.report.mean_abs_vx_z_mixture.to_string(),
                        report.report.support_violation_x.to_string(),
                        report.report.samples.to_string(),
                        report.report.seed.to_string(),
                        report.mixtures_consistent.to_string(),
                    ]],
                ),
            }
        }
        Command::Nogo(NogoCmd::Subeffect { a, b }) => {
            let pa = projector_of(a, "--a")?;
            let pb = projector_of(b, "--b")?;
            let d = nogo::subeffect_feasible(&pa, &pb)?;
            let report = SubeffectReport {
                status: d.status,
                overlap: d.overlap,
                obstruction_value: d.obstruction.as_ref().map(|o| o.value),
                obstruction_vector: d
                    .obstruction
                    .as_ref()
                    .map(|o| o.vector.iter().map(|z| [z.re, z.im]).collect()),
                diagonal_element: d.obstruction.as_ref().map(|o| o.diagonal_element),
                witness: d.witness,
            };
            match format {
                Format::Json => emit_json(out, &report),
                Format::Csv => {
                    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
                    let status = serde_json::to_value(report.status).expect("status serializes");
                    emit_csv(
                        out,
                        &["status", "overlap", "obstruction_value", "diagonal_element"],
                        &[vec![
                            status.as_str().unwrap_or_default().to_string(),
                            report.overlap.to_string(),
                            opt(report.obstruction_value),
                            opt(report.diagonal_element),
                        ]],
                    )
                }
            }
        }
        Command::Nogo(NogoCmd::Transport {
            dim,
            target,
            trials,
            seed,
        }) => {
            let report = nogo::representation_transport_check(*dim, *target, *trials, *seed)?;
            match format {
                Format::Json => emit_json(out, &report),
                Format::Csv => emit_csv(
                    out,
                    &[
                        "dim",
                        "target",
                        "trials",
                        "seed",
                        "passed",
                        "max_abs_diff",
                        "max_pure_state_gap",
                    ],
                    &[vec![
                        report.dim.to_string(),
                        report.target.to_string(),
                        report.trials.to_string(),
                        report.seed.to_string(),
                        report.passed.to_string(),
                        report.max_abs_diff.to_string(),
                        report.max_pure_state_gap.to_string(),
                    ]],
                ),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_vector_syntax() {
        let v = parse_complex_vector("1/sqrt(2), 0:-1/sqrt(2)").unwrap();
        assert!((v[0].re - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((v[1].im + 0.5f64.sqrt()).abs() < 1e-15);
        assert!(parse_complex_vector("1,,0").is_err());
    }

    #[test]
    fn real_list_arity() {
        assert_eq!(parse_reals("0,0,1", 3, "--n").unwrap(), vec![0.0, 0.0, 1.0]);
        assert!(parse_reals("0,1", 3, "--n").is_err());
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::Usage(String::new()).exit_code(), 2);
        assert_eq!(CliError::Validation(String::new()).exit_code(), 3);
        assert_eq!(CliError::Precondition(String::new()).exit_code(), 4);
    }
}
