use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use lambda_building::building::{
    axiom_suite, chamber_at_infinity, germ_at, project, tree_dot, vector_distance, ApartmentChart,
    BuildingPoint, DistanceReport, FieldFlag, ResidueFlag, Sector,
};
use lambda_building::cone::{dual_path, Trajectory};
use lambda_building::exact_fields::{set_default_depth, Exponent, PMatrix};
use lambda_building::log_value::ValueGroupElement;
use lambda_building::symmetric_space::{valuation_distance, PDPoint};
use lambda_building::Error;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

/// Exact affine buildings SL_n(R)/SL_n(O) over Puiseux series.
///
/// Exit codes: 0 success, 1 a check failed, 2 bad input, 3 precision
/// exhausted.
#[derive(Parser, Debug)]
#[command(name = "lbuild", version)]
struct Cli {
    /// Matrix size for sampled commands (2 to 4).
    #[arg(long, global = true, default_value_t = 2)]
    n: usize,
    /// Relative truncation depth for inverses and square roots, a positive rational.
    #[arg(long, global = true, env = "LB_DEPTH", default_value = "8")]
    depth: String,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Number of sampled instances.
    #[arg(long, global = true, default_value_t = 50)]
    samples: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Vector and scalar distance between two building points. The file
    /// holds a JSON list of two matrices; with `--format dot` (n = 2) the
    /// spanned tree is printed instead.
    Dist { file: PathBuf },
    /// Randomized checks of the apartment axioms A1 to A6.
    Axioms,
    /// Cone distance of two trajectory files, by both paths.
    Cone { first: PathBuf, second: PathBuf },
    /// Germ at a point and chamber at infinity of a sector.
    Flags { file: PathBuf },
    /// Validates a point of P_n given as a JSON matrix.
    PdPoint { file: PathBuf },
    /// Tree spanned by a JSON list of n = 2 building points, in dot format.
    Tree { file: PathBuf },
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Precision(String),
    Check(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Input(_) => 2,
            Failure::Precision(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PrecisionExhausted(_) => Failure::Precision(e.to_string()),
            Error::Parse(_) | Error::DimensionMismatch { .. } | Error::InvalidPoint(_) => {
                Failure::Input(e.to_string())
            }
            _ => Failure::Check(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {}", path.display(), e)))
}

fn decode<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {}", path.display(), e)))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn parse_depth(s: &str) -> Result<Exponent, Failure> {
    let e: ValueGroupElement = s
        .parse()
        .map_err(|_| Failure::Input(format!("invalid depth {:?}", s)))?;
    Ok(e.value())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PointPair {
    List([PMatrix; 2]),
    Named { x: PMatrix, y: PMatrix },
}

fn cmd_dist(cli: &Cli, file: &Path) -> Outcome {
    let (x, y) = match decode::<PointPair>(file)? {
        PointPair::List([x, y]) | PointPair::Named { x, y } => {
            (BuildingPoint::new(x)?, BuildingPoint::new(y)?)
        }
    };
    if cli.format == Format::Dot {
        return Ok(tree_dot(&[x, y])?);
    }
    let d: DistanceReport = vector_distance(&x, &y)?;
    Ok(match cli.format {
        Format::Text => {
            let v: Vec<String> = d.vector.iter().map(|e| e.to_string()).collect();
            format!("vector ({})\nscalar {}\n", v.join(", "), d.scalar)
        }
        _ => to_json(&d),
    })
}

fn cmd_axioms(cli: &Cli) -> Outcome {
    let report = axiom_suite(cli.n, cli.samples, cli.seed);
    let out = match cli.format {
        Format::Text => report.to_string(),
        _ => to_json(&report),
    };
    if report.passed() {
        Ok(out)
    } else {
        print!("{}", out);
        Err(Failure::Check("axiom counterexample found".into()))
    }
}

fn cmd_cone(cli: &Cli, first: &Path, second: &Path) -> Outcome {
    let (a, b): (Trajectory, Trajectory) = (decode(first)?, decode(second)?);
    let d = dual_path(&a, &b)?;
    let out = match cli.format {
        Format::Text => format!(
            "newton {}\nsmith {}\n{}\n",
            d.newton,
            d.smith,
            if d.equal { "equal" } else { "MISMATCH" }
        ),
        _ => to_json(&d),
    };
    if d.equal {
        Ok(out)
    } else {
        print!("{}", out);
        Err(Failure::Check("the two distances differ".into()))
    }
}

#[derive(Deserialize)]
struct SectorInput {
    frame: PMatrix,
    tip: Vec<ValueGroupElement>,
}

#[derive(Deserialize)]
struct FlagsInput {
    point: Option<PMatrix>,
    sector: SectorInput,
}

#[derive(Serialize)]
struct FlagsReport {
    germ: ResidueFlag,
    at_infinity: FieldFlag,
}

fn cmd_flags(file: &Path) -> Outcome {
    let input: FlagsInput = decode(file)?;
    let sector = Sector::new(ApartmentChart::new(input.sector.frame)?, input.sector.tip)?;
    let x = match input.point {
        Some(p) => BuildingPoint::new(p)?,
        None => sector.base()?,
    };
    let report = FlagsReport {
        germ: germ_at(&x, &sector)?,
        at_infinity: chamber_at_infinity(&sector),
    };
    Ok(to_json(&report))
}

#[derive(Serialize)]
struct PdReport {
    valid: bool,
    distance_to_identity: ValueGroupElement,
    cone_point: BuildingPoint,
}

fn cmd_pd_point(file: &Path) -> Outcome {
    let m: PMatrix = decode(file)?;
    let p = PDPoint::new(m).map_err(|e| match e {
        Error::PrecisionExhausted(_) => Failure::from(e),
        other => Failure::Check(format!("not a point of P_n: {}", other)),
    })?;
    let report = PdReport {
        valid: true,
        distance_to_identity: valuation_distance(&PDPoint::identity(p.n()), &p)?,
        cone_point: project(&p)?,
    };
    Ok(to_json(&report))
}

fn cmd_tree(file: &Path) -> Outcome {
    let reps: Vec<PMatrix> = decode(file)?;
    let points = reps
        .into_iter()
        .map(BuildingPoint::new)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(tree_dot(&points)?)
}

fn run(cli: &Cli) -> Outcome {
    if !(2..=4).contains(&cli.n) {
        return Err(Failure::Input(format!(
            "--n must be between 2 and 4, got {}",
            cli.n
        )));
    }
    if cli.samples == 0 {
        return Err(Failure::Input("--samples must be at least 1".into()));
    }
    set_default_depth(Some(parse_depth(&cli.depth)?))?;
    match &cli.command {
        Command::Dist { file } => cmd_dist(cli, file),
        Command::Axioms => cmd_axioms(cli),
        Command::Cone { first, second } => cmd_cone(cli, first, second),
        Command::Flags { file } => cmd_flags(file),
        Command::PdPoint { file } => cmd_pd_point(file),
        Command::Tree { file } => cmd_tree(file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out);
            if !out.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            match &f {
                Failure::Input(m) => eprintln!("error: {}", m),
                Failure::Precision(m) => eprintln!("error: {}", m),
                Failure::Check(m) => eprintln!("failed: {}", m),
            }
            ExitCode::from(f.code())
        }
    }
}
