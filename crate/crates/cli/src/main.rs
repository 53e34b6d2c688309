use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use pwc_core::io::{
    atlas_csv, boxdim_csv, classification_json, connection_json, entropy_csv, map_json, orbit_csv,
    parse_map_spec, roots_csv, sweep_csv,
};
use pwc_core::metrics::{dyadic_ladder, rational_grid};
use pwc_core::rotation::{ContractedRotationSpec, RotationKind};
use pwc_core::scalar::parse_rational;
use pwc_core::{
    bound_report, build_map, classify_map, connection_polynomial, detect_connection,
    entropy_profile, isolate_roots, iterate_orbit, rotation_number, sweep_lambda, tongue_atlas,
    Budget, Error, ExactMap, FloatMap, HighFloat, MapSpec, Rational, Scalar, Verdict,
};

const EXIT_VALIDATION: u8 = 2;
const EXIT_UNDECIDED: u8 = 3;

/// Piecewise λ-affine contractions of the interval.
#[derive(Parser)]
#[command(name = "pwc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump the split map: singular points and branches.
    Map {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Iterate one orbit.
    Orbit {
        #[command(flatten)]
        map: MapArgs,
        /// Starting point.
        #[arg(long, default_value = "0")]
        x: String,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Certified cycles, singular-orbit assignment and verdict.
    Classify {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Rational tongues of contracted rotations.
    Tongues {
        #[arg(long, default_value_t = 3)]
        qmax: u64,
        /// A single slope; otherwise the grid `j/M` is used.
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        grid: Option<u64>,
        #[arg(long, default_value = "0")]
        lmin: String,
        #[arg(long, default_value = "1")]
        lmax: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Rotation number of a contracted rotation.
    Rho {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Singular connection search and the roots of its polynomial in λ.
    Connections {
        #[command(flatten)]
        map: MapArgs,
        /// Orbit length searched.
        #[arg(long, default_value_t = 64)]
        depth: usize,
        /// Root bracket width.
        #[arg(long, default_value = "1/1024")]
        width: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Itinerary counts and singular entropy estimates.
    Entropy {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 20)]
        nmax: usize,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Box counts of a sampled ω-limit set.
    Boxdim {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 1000)]
        transient: usize,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        /// Comma-separated decreasing box sizes; default 2^-4 .. 2^-16.
        #[arg(long)]
        eps: Option<String>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Classify a family over the slopes `j/M`.
    Sweep {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 100)]
        grid: u64,
        #[arg(long, default_value = "0")]
        lmin: String,
        #[arg(long, default_value = "1")]
        lmax: String,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Clone)]
struct MapArgs {
    /// JSON map-spec file.
    #[arg(long, conflicts_with_all = ["a", "b"])]
    spec: Option<PathBuf>,
    /// Comma-separated partition points starting at 0.
    #[arg(long)]
    a: Option<String>,
    /// Comma-separated offsets.
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Orbit steps per seed.
    #[arg(long, default_value_t = 100_000)]
    budget: usize,
    #[arg(long, default_value_t = 64)]
    pmax: usize,
    /// Preimage depth of the seed set.
    #[arg(long, default_value_t = 8)]
    depth: usize,
    /// Orbit length for the connection search.
    #[arg(long, default_value_t = 64)]
    conn_depth: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget {
            max_steps: self.budget,
            max_period: self.pmax,
            depth: self.depth,
            connection_depth: self.conn_depth,
        }
    }
}

#[derive(Args, Clone)]
struct OutArgs {
    /// Artifact path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Render rationals as 15-digit decimals.
    #[arg(long)]
    decimal: bool,
    /// Exit with status 3 when the result is undecided.
    #[arg(long)]
    strict: bool,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum ModeArg {
    Exact,
    Float,
}

/// A usage problem detected after argument parsing.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn parse_list(text: &str) -> anyhow::Result<Vec<Rational>> {
    text.split(',').map(|s| Ok(parse_rational(s.trim())?)).collect()
}

impl MapArgs {
    /// `(a, b)` and the slope, if one was given.
    fn family(&self) -> anyhow::Result<(Vec<Rational>, Vec<Rational>, Option<Rational>)> {
        if let Some(path) = &self.spec {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let spec = parse_map_spec(&text)?;
            let a = spec.partition().to_vec();
            return Ok((a, spec.offsets().to_vec(), Some(spec.lambda().clone())));
        }
        let b = parse_list(self.b.as_deref().ok_or_else(|| usage("--spec or --b is required"))?)?;
        let a = match &self.a {
            Some(a) => parse_list(a)?,
            None if b.len() == 1 => vec![Rational::zero()],
            None => return Err(usage("--a is required with several offsets")),
        };
        let lambda = self.lambda.as_deref().map(parse_rational).transpose()?;
        Ok((a, b, lambda))
    }

    fn spec(&self) -> anyhow::Result<MapSpec<Rational>> {
        let (a, b, lambda) = self.family()?;
        let lambda = lambda.ok_or_else(|| usage("--lambda is required"))?;
        Ok(MapSpec::new(a, b, lambda)?)
    }

    fn exact(&self) -> anyhow::Result<ExactMap> {
        Ok(build_map(self.spec()?)?)
    }
}

struct Artifact {
    body: String,
    undecided: bool,
}

impl Artifact {
    fn done(body: String) -> Self {
        Self { body, undecided: false }
    }
}

fn format_or(out: &OutArgs, default: Format, allowed: &[Format]) -> anyhow::Result<Format> {
    let f = out.format.unwrap_or(default);
    if !allowed.contains(&f) {
        return Err(usage(format!("--format {f:?} is not available for this command")));
    }
    Ok(f)
}

fn exact_only(mode: Option<ModeArg>) -> anyhow::Result<()> {
    if mode == Some(ModeArg::Float) {
        return Err(Error::FloatModeUnsupported.into());
    }
    Ok(())
}

fn orbit_json<T: Scalar>(orbit: &pwc_core::OrbitRecord<T>) -> String {
    let fmt = pwc_core::io::format_scalar::<T>;
    let value = serde_json::json!({
        "start": fmt(&orbit.start),
        "points": orbit.points.iter().map(|p| [fmt(&p.lo), fmt(&p.hi)]).collect::<Vec<_>>(),
        "itinerary": orbit.itinerary.entries(),
        "wraps": orbit.wraps,
    });
    let mut s = serde_json::to_string_pretty(&value).expect("serializable");
    s.push('\n');
    s
}

fn branches_csv<T: Scalar>(map: &pwc_core::PwMap<T>) -> String {
    let fmt = pwc_core::io::format_scalar::<T>;
    let mut s = String::from("lo,hi,delta,wrap,source_index\n");
    for b in map.branches() {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt(&b.lo),
            fmt(&b.hi),
            fmt(&b.delta),
            b.wrap,
            b.source_index
        ));
    }
    s
}

fn float_map(map: &ExactMap) -> anyhow::Result<FloatMap> {
    Ok(map.convert()?)
}

fn lambda_grid(m: u64, lmin: &str, lmax: &str) -> anyhow::Result<Vec<Rational>> {
    if m < 2 {
        return Err(usage("--grid must be at least 2"));
    }
    let (lo, hi) = (parse_rational(lmin)?, parse_rational(lmax)?);
    Ok(rational_grid(m, &lo.max(Rational::zero()), &hi.min(Rational::one())))
}

fn run(command: &Command) -> anyhow::Result<Artifact> {
    match command {
        Command::Map { map, mode, out } => {
            let f = format_or(out, Format::Json, &[Format::Json, Format::Csv])?;
            let exact = map.exact()?;
            let body = match (mode.unwrap_or(ModeArg::Exact), f) {
                (ModeArg::Exact, Format::Json) => map_json(&exact),
                (ModeArg::Exact, Format::Csv) => branches_csv(&exact),
                (ModeArg::Float, Format::Json) => map_json(&float_map(&exact)?),
                (ModeArg::Float, Format::Csv) => branches_csv(&float_map(&exact)?),
            };
            Ok(Artifact::done(body))
        }
        Command::Orbit { map, x, steps, mode, out } => {
            let f = format_or(out, Format::Csv, &[Format::Csv, Format::Json])?;
            let exact = map.exact()?;
            let x = parse_rational(x)?;
            let body = match mode.unwrap_or(ModeArg::Exact) {
                ModeArg::Exact => {
                    let orbit = iterate_orbit(&exact, &x, *steps)?;
                    if f == Format::Csv { orbit_csv(&orbit)? } else { orbit_json(&orbit) }
                }
                ModeArg::Float => {
                    let orbit = iterate_orbit(&float_map(&exact)?, &HighFloat::from_rational(&x), *steps)?;
                    if f == Format::Csv { orbit_csv(&orbit)? } else { orbit_json(&orbit) }
                }
            };
            Ok(Artifact::done(body))
        }
        Command::Classify { map, budget, mode, out } => {
            format_or(out, Format::Json, &[Format::Json])?;
            exact_only(*mode)?;
            let exact = map.exact()?;
            let c = classify_map(&exact, &budget.budget())?;
            let bounds = bound_report(&exact, &c)?;
            Ok(Artifact {
                body: classification_json(&c, Some(&bounds)),
                undecided: c.verdict == Verdict::Undecided,
            })
        }
        Command::Tongues { qmax, lambda, grid, lmin, lmax, out } => {
            format_or(out, Format::Csv, &[Format::Csv])?;
            let lambdas = match (lambda, grid) {
                (Some(l), None) => vec![parse_rational(l)?],
                (None, Some(m)) => lambda_grid(*m, lmin, lmax)?,
                _ => return Err(usage("give exactly one of --lambda and --grid")),
            };
            Ok(Artifact::done(atlas_csv(&tongue_atlas(*qmax, &lambdas)?, out.decimal)?))
        }
        Command::Rho { map, budget, out } => {
            format_or(out, Format::Csv, &[Format::Csv])?;
            let (a, b, lambda) = map.family()?;
            let single = a.len() == 1 || (a.len() == 2 && a[1].is_one());
            if !single || b.len() != 1 {
                return Err(usage("rho needs a contracted rotation: a single offset b"));
            }
            let lambda = lambda.ok_or_else(|| usage("--lambda is required"))?;
            let spec = ContractedRotationSpec::new(lambda, b[0].clone())?;
            let r = rotation_number(&spec, &budget.budget())?;
            let (body, undecided) = match r.kind {
                RotationKind::Exact { p, q } => (format!("{p}/{q} EXACT\n"), false),
                RotationKind::Estimate { value, steps } => {
                    let mut s = format!("{value} ESTIMATE {steps}");
                    for (n, avg) in &r.history {
                        s.push_str(&format!(" {n}:{avg}"));
                    }
                    s.push('\n');
                    (s, true)
                }
            };
            Ok(Artifact { body, undecided })
        }
        Command::Connections { map, depth, width, out } => {
            let f = format_or(out, Format::Json, &[Format::Json, Format::Csv])?;
            let exact = map.exact()?;
            let found = detect_connection(&exact, *depth)?;
            let body = match f {
                Format::Json => connection_json(found.as_ref()),
                Format::Csv => {
                    let brackets = match &found {
                        Some(c) => {
                            let deltas: Vec<Rational> =
                                exact.branches().iter().map(|b| b.delta.clone()).collect();
                            let poly = connection_polynomial(&c.omega, &c.x, &c.y, &deltas)?;
                            let interval = (Rational::zero(), Rational::one());
                            isolate_roots(&poly, interval, &parse_rational(width)?)?
                        }
                        None => Vec::new(),
                    };
                    roots_csv(&brackets)?
                }
            };
            Ok(Artifact::done(body))
        }
        Command::Entropy { map, nmax, mode, out } => {
            format_or(out, Format::Csv, &[Format::Csv])?;
            let exact = map.exact()?;
            let profile = match mode.unwrap_or(ModeArg::Exact) {
                ModeArg::Exact => entropy_profile(&exact, *nmax)?,
                ModeArg::Float => entropy_profile(&float_map(&exact)?, *nmax)?,
            };
            Ok(Artifact::done(entropy_csv(&profile)?))
        }
        Command::Boxdim { map, transient, samples, eps, mode, out } => {
            format_or(out, Format::Csv, &[Format::Csv])?;
            let exact = map.exact()?;
            let eps = match eps {
                Some(list) => list
                    .split(',')
                    .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad epsilon {s:?}")))
                    .collect::<anyhow::Result<Vec<_>>>()
                    .map_err(|e| usage(e.to_string()))?,
                None => dyadic_ladder(4, 16),
            };
            let points: Vec<f64> = match mode.unwrap_or(ModeArg::Float) {
                ModeArg::Float => {
                    let fmap = float_map(&exact)?;
                    let seeds: Vec<HighFloat> = fmap.singular().to_vec();
                    pwc_core::metrics::omega_limit_sample(&fmap, &seeds, *transient, *samples)?
                        .into_iter()
                        .map(f64::from)
                        .collect()
                }
                ModeArg::Exact => {
                    let seeds = exact.singular().to_vec();
                    pwc_core::metrics::omega_limit_sample(&exact, &seeds, *transient, *samples)?
                        .iter()
                        .map(pwc_core::metrics::approx)
                        .collect()
                }
            };
            let profile = pwc_core::box_dimension_estimate(&points, &eps)?;
            let mut body = boxdim_csv(&profile)?;
            body.push_str(&format!("# slope {}\n", profile.slope_estimate));
            Ok(Artifact::done(body))
        }
        Command::Sweep { map, grid, lmin, lmax, budget, out } => {
            format_or(out, Format::Csv, &[Format::Csv])?;
            let (a, b, _) = map.family()?;
            let lambdas = lambda_grid(*grid, lmin, lmax)?;
            let report = sweep_lambda(&a, &b, &lambdas, &budget.budget())?;
            if !report.z_independent {
                eprintln!("warning: (a, b) is not Z-independent");
            }
            Ok(Artifact {
                body: sweep_csv(&report, out.decimal)?,
                undecided: report.count(Verdict::Undecided) > 0,
            })
        }
    }
}

fn out_args(command: &Command) -> &OutArgs {
    match command {
        Command::Map { out, .. }
        | Command::Orbit { out, .. }
        | Command::Classify { out, .. }
        | Command::Tongues { out, .. }
        | Command::Rho { out, .. }
        | Command::Connections { out, .. }
        | Command::Entropy { out, .. }
        | Command::Boxdim { out, .. }
        | Command::Sweep { out, .. } => out,
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return EXIT_VALIDATION;
    }
    match err.downcast_ref::<Error>() {
        Some(
            Error::NonMonotonePartition
            | Error::LambdaOutOfRange
            | Error::BranchEscapesUnit(_)
            | Error::InvalidSpec(_)
            | Error::PointOutOfDomain(_)
            | Error::EmptyItinerary
            | Error::InvalidBranch { .. }
            | Error::FloatModeUnsupported
            | Error::ParameterOutsideTriangle
            | Error::NotCoprime { .. }
            | Error::BadRange { .. }
            | Error::Parse(_)
            | Error::InvalidInput(_),
        ) => EXIT_VALIDATION,
        _ => 1,
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(value) = std::env::var("PWC_THREADS") {
        let n: usize = value.parse().map_err(|_| usage(format!("PWC_THREADS={value:?}")))?;
        if n == 0 {
            bail!(usage("PWC_THREADS must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| {
        let artifact = run(&cli.command)?;
        let out = out_args(&cli.command);
        match &out.out {
            Some(path) => std::fs::write(path, &artifact.body)
                .with_context(|| format!("writing {}", path.display()))?,
            None => print!("{}", artifact.body),
        }
        Ok(artifact.undecided && out.strict)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("pwc: undecided at this budget");
            ExitCode::from(EXIT_UNDECIDED)
        }
        Err(err) => {
            eprintln!("pwc: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
