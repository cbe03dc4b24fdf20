//! Command-line front end: enumeration, certification, and file interop for
//! the monotonicity cones of linear entropic formulas.
//!
//! Exit codes: 0 success (or monotone), 1 verified non-monotone / failed
//! verification, 2 usage or input errors, 3 resource cap exceeded,
//! 4 internal invariant breach.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use monocone::catalog::{self, CatalogError};
use monocone::cddio;
use monocone::cone::{self, ConeError, DdOptions};
use monocone::functional::Functional;
use monocone::monotonicity::{self, MonoError, RayOrbit, SystemVerdict};
use monocone::rational::format_rat;
use monocone::symmetric::{self, SymmetricVector};
use monocone::witness::{self, WitnessError};

#[derive(Parser)]
#[command(
    name = "monocone",
    version,
    about = "Exact cones of entropic formulas monotonic under local operations",
    long_about = None
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Cdd,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Order {
    NnzAsc,
    NnzDesc,
    LexAsc,
    LexDesc,
}

impl From<Order> for cone::InsertionOrder {
    fn from(o: Order) -> Self {
        match o {
            Order::NnzAsc => cone::InsertionOrder::NonzeroAscending,
            Order::NnzDesc => cone::InsertionOrder::NonzeroDescending,
            Order::LexAsc => cone::InsertionOrder::LexAscending,
            Order::LexDesc => cone::InsertionOrder::LexDescending,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Emit the lower-set facets of a single-system monotonicity cone.
    Facets {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        system: usize,
        #[arg(long, value_enum, default_value_t = Format::Cdd)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the extremal rays of the full monotonicity cone.
    Rays {
        #[arg(long)]
        n: usize,
        /// Group rays into permutation orbits with canonical representatives.
        #[arg(long)]
        orbits: bool,
        #[arg(long, value_enum, default_value_t = Format::Cdd)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for the double description pair loop.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Cap on the intermediate ray count.
        #[arg(long, default_value_t = 1_000_000)]
        max_rays: usize,
        /// Row insertion order heuristic (the output is order-independent).
        #[arg(long, value_enum, default_value_t = Order::LexAsc)]
        order: Order,
    },
    /// Check monotonicity of a formula under local processing.
    Check {
        #[command(flatten)]
        formula: FormulaArgs,
        #[command(flatten)]
        systems: SystemArgs,
    },
    /// Write decomposition certificates (monotone) or a violation
    /// certificate (non-monotone); certificates are re-verified first.
    Certify {
        #[command(flatten)]
        formula: FormulaArgs,
        #[command(flatten)]
        systems: SystemArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the symmetric monotonicity cone in closed form.
    Symmetric {
        #[arg(long)]
        n: usize,
        /// Emit the facet rows (binomial coefficients).
        #[arg(long, conflicts_with = "generators")]
        facets: bool,
        /// Emit the generator rays.
        #[arg(long)]
        generators: bool,
        /// Expand generators into full 2^n - 1 functional coordinates.
        #[arg(long, requires = "generators")]
        embed: bool,
        #[arg(long, value_enum, default_value_t = Format::Cdd)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify that an H-representation and a V-representation describe the
    /// same cone (generators against facets, both directions).
    VerifyPair {
        #[arg(long)]
        hrep: PathBuf,
        #[arg(long)]
        vrep: PathBuf,
    },
    /// Evaluate a formula on the entropy vector of a distribution.
    Eval {
        #[command(flatten)]
        formula: FormulaArgs,
        #[arg(long)]
        dist: PathBuf,
        /// Fractional bits for non-dyadic (approximate) entropies.
        #[arg(long, default_value_t = witness::DEFAULT_PRECISION_BITS)]
        precision_bits: u32,
    },
    /// List catalog formulas, or emit one as JSON.
    Catalog {
        name: Option<String>,
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Args)]
struct FormulaArgs {
    /// Path to a functional in JSON form.
    #[arg(long, conflicts_with = "catalog")]
    formula: Option<PathBuf>,
    /// Name of a built-in formula (see `catalog`).
    #[arg(long)]
    catalog: Option<String>,
    /// System count for catalog formulas (defaults to the formula minimum).
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct SystemArgs {
    /// Check every system 1..=n.
    #[arg(long)]
    all: bool,
    /// Comma-separated system list, e.g. --systems 1,3.
    #[arg(long, value_delimiter = ',', conflicts_with = "all")]
    systems: Vec<usize>,
    /// A single system.
    #[arg(long, conflicts_with_all = ["all", "systems"])]
    system: Option<usize>,
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
    fn internal(message: impl Into<String>) -> Self {
        CliError { code: 4, message: message.into() }
    }
}

impl From<ConeError> for CliError {
    fn from(e: ConeError) -> Self {
        match e {
            ConeError::RayLimitExceeded { .. } => CliError { code: 3, message: e.to_string() },
            ConeError::Internal(_) => CliError::internal(e.to_string()),
            other => CliError::usage(other.to_string()),
        }
    }
}

impl From<MonoError> for CliError {
    fn from(e: MonoError) -> Self {
        match e {
            MonoError::Cone(inner) => inner.into(),
            MonoError::InvariantBreach(_) => CliError::internal(e.to_string()),
            other => CliError::usage(other.to_string()),
        }
    }
}

impl From<WitnessError> for CliError {
    fn from(e: WitnessError) -> Self {
        match e {
            WitnessError::CertificateInvalid(_) => CliError::internal(e.to_string()),
            WitnessError::Mono(inner) => inner.into(),
            other => CliError::usage(other.to_string()),
        }
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::usage(format!("i/o error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::internal(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn load_formula(args: &FormulaArgs) -> Result<Functional, CliError> {
    match (&args.formula, &args.catalog) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)?;
            let f: Functional = serde_json::from_str(&text)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            if let Some(n) = args.n {
                if n != f.n() {
                    return Err(CliError::usage(format!(
                        "--n {n} does not match the formula's system count {}",
                        f.n()
                    )));
                }
            }
            Ok(f)
        }
        (None, Some(name)) => Ok(catalog::lookup(name, args.n)?),
        _ => Err(CliError::usage("exactly one of --formula or --catalog is required")),
    }
}

fn selected_systems(args: &SystemArgs, n: usize) -> Result<Vec<usize>, CliError> {
    let systems: Vec<usize> = if args.all {
        (1..=n).collect()
    } else if let Some(i) = args.system {
        vec![i]
    } else if !args.systems.is_empty() {
        args.systems.clone()
    } else {
        return Err(CliError::usage("select systems with --all, --system or --systems"));
    };
    for &i in &systems {
        if i == 0 || i > n {
            return Err(CliError::usage(format!("system {i} out of range 1..={n}")));
        }
    }
    Ok(systems)
}

fn progress_to_stderr(done: usize, total: usize, rays: usize) {
    if done % 32 == 0 || done == total {
        eprintln!("progress: inserted {done}/{total} rows, {rays} rays");
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Facets { n, system, format, out } => {
            let h = monotonicity::single_system_facets(system, n)?;
            let content = match format {
                Format::Cdd => cddio::hrep_to_string(
                    &h,
                    &[&format!("single-system monotonicity facets: system {system}, n={n}")],
                ),
                Format::Json => {
                    #[derive(Serialize)]
                    struct FacetsJson<'a> {
                        n: usize,
                        system: usize,
                        hrep: &'a cone::HRep,
                    }
                    to_json(&FacetsJson { n, system, hrep: &h })?
                }
            };
            emit(&out, &content)?;
            Ok(0)
        }
        Command::Rays { n, orbits, format, out, jobs, max_rays, order } => {
            let opts = DdOptions {
                max_rays,
                jobs: Some(jobs),
                insertion_order: order.into(),
                progress: Some(progress_to_stderr),
                ..DdOptions::default()
            };
            let rays = monotonicity::enumerate_monotone_rays(n, &opts)?;
            let content = if orbits {
                let orbit_list = monotonicity::group_orbits(&rays)?;
                render_orbits(n, &orbit_list, format)?
            } else {
                match format {
                    Format::Cdd => {
                        let v = cone::VRep {
                            dim: (1 << n) - 1,
                            rays: rays.iter().map(|f| f.coeffs().to_vec()).collect(),
                            lineality: vec![],
                        };
                        cddio::vrep_to_string(
                            &v,
                            &[&format!("extremal rays of the monotonicity cone, n={n}, systems 1..{n}")],
                        )
                    }
                    Format::Json => {
                        #[derive(Serialize)]
                        struct RaysJson<'a> {
                            n: usize,
                            count: usize,
                            rays: &'a [Functional],
                        }
                        to_json(&RaysJson { n, count: rays.len(), rays: &rays })?
                    }
                }
            };
            emit(&out, &content)?;
            Ok(0)
        }
        Command::Check { formula, systems } => {
            let f = load_formula(&formula)?;
            let selected = selected_systems(&systems, f.n())?;
            let verdicts = monotonicity::check_monotone(&f, &selected)?;
            let mut all_ok = true;
            for (i, verdict) in &verdicts {
                match verdict {
                    SystemVerdict::Satisfied => println!("system {i}: SATISFIED"),
                    SystemVerdict::Violated(v) => {
                        all_ok = false;
                        println!("system {i}: VIOLATED ({v})");
                    }
                }
            }
            Ok(if all_ok { 0 } else { 1 })
        }
        Command::Certify { formula, systems, out } => {
            let f = load_formula(&formula)?;
            let selected = selected_systems(&systems, f.n())?;
            match witness::violation_certificate(&f, &selected)? {
                Some(cert) => {
                    cert.verify()?;
                    emit(&out, &to_json(&cert)?)?;
                    eprintln!(
                        "non-monotone: system {} violation certificate written",
                        cert.system
                    );
                    Ok(1)
                }
                None => {
                    let certs = selected
                        .iter()
                        .map(|&i| monotonicity::decompose_monotone(&f, i))
                        .collect::<Result<Vec<_>, _>>()?;
                    emit(&out, &to_json(&certs)?)?;
                    eprintln!("monotone: {} decomposition certificates written", certs.len());
                    Ok(0)
                }
            }
        }
        Command::Symmetric { n, facets, generators, embed, format, out } => {
            if facets == generators {
                return Err(CliError::usage("pass exactly one of --facets or --generators"));
            }
            let content = if facets {
                let h = symmetric::symmetric_facets(n)?;
                match format {
                    Format::Cdd => cddio::hrep_to_string(
                        &h,
                        &[&format!("symmetric monotonicity cone facets, n={n} (coordinates a_1..a_n)")],
                    ),
                    Format::Json => to_json(&h)?,
                }
            } else {
                let v = symmetric::symmetric_generators(n)?;
                if embed {
                    let embedded: Vec<Functional> = v
                        .rays
                        .iter()
                        .map(|a| {
                            symmetric::embed_symmetric(&SymmetricVector::new(n, a.clone())?)
                        })
                        .collect::<Result<_, _>>()?;
                    match format {
                        Format::Cdd => {
                            let full = cone::VRep {
                                dim: (1 << n) - 1,
                                rays: embedded.iter().map(|f| f.coeffs().to_vec()).collect(),
                                lineality: vec![],
                            };
                            cddio::vrep_to_string(
                                &full,
                                &[&format!("symmetric cone generators embedded into functional coordinates, n={n}")],
                            )
                        }
                        Format::Json => to_json(&embedded)?,
                    }
                } else {
                    match format {
                        Format::Cdd => cddio::vrep_to_string(
                            &v,
                            &[&format!("symmetric monotonicity cone generators, n={n} (coordinates a_1..a_n)")],
                        ),
                        Format::Json => to_json(&v)?,
                    }
                }
            };
            emit(&out, &content)?;
            Ok(0)
        }
        Command::VerifyPair { hrep, vrep } => {
            let h_text = fs::read_to_string(&hrep)?;
            let v_text = fs::read_to_string(&vrep)?;
            let h = cddio::parse_hrep(&h_text)
                .map_err(|e| CliError::usage(format!("{}: {e}", hrep.display())))?;
            let v = cddio::parse_vrep(&v_text)
                .map_err(|e| CliError::usage(format!("{}: {e}", vrep.display())))?;
            let report = cone::verify_dd_pair(&h, &v, &DdOptions::default())?;
            print!("{report}");
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Eval { formula, dist, precision_bits } => {
            let f = load_formula(&formula)?;
            let text = fs::read_to_string(&dist)?;
            let d: witness::JointDistribution = serde_json::from_str(&text)
                .map_err(|e| CliError::usage(format!("{}: {e}", dist.display())))?;
            let h = witness::shannon_entropy_vector_with_precision(&d, precision_bits)?;
            let (value, exact) = witness::evaluate(&f, &h)?;
            if exact {
                println!("{}", format_rat(&value));
            } else {
                println!("{} (approximate, {precision_bits} fractional bits)", format_rat(&value));
            }
            Ok(0)
        }
        Command::Catalog { name, n } => {
            match name {
                Some(name) => {
                    let f = catalog::lookup(&name, n)?;
                    print!("{}", to_json(&f)?);
                }
                None => {
                    for entry in catalog::ENTRIES {
                        println!("{:<24} n>={}  {}", entry.name, entry.min_n, entry.description);
                    }
                }
            }
            Ok(0)
        }
    }
}

fn render_orbits(n: usize, orbits: &[RayOrbit], format: Format) -> Result<String, CliError> {
    let labels: Vec<Option<&'static str>> =
        orbits.iter().map(|o| catalog_label(&o.representative)).collect();
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct OrbitJson<'a> {
                #[serde(skip_serializing_if = "Option::is_none")]
                label: Option<&'static str>,
                #[serde(flatten)]
                orbit: &'a RayOrbit,
            }
            #[derive(Serialize)]
            struct OrbitsJson<'a> {
                n: usize,
                ray_count: usize,
                orbit_count: usize,
                orbits: Vec<OrbitJson<'a>>,
            }
            let ray_count = orbits.iter().map(|o| o.size()).sum();
            to_json(&OrbitsJson {
                n,
                ray_count,
                orbit_count: orbits.len(),
                orbits: orbits
                    .iter()
                    .zip(&labels)
                    .map(|(orbit, &label)| OrbitJson { label, orbit })
                    .collect(),
            })
        }
        Format::Cdd => {
            let v = cone::VRep {
                dim: (1 << n) - 1,
                rays: orbits.iter().map(|o| o.representative.coeffs().to_vec()).collect(),
                lineality: vec![],
            };
            let mut comments = vec![format!(
                "monotonicity cone ray orbits, n={n}: one canonical representative per orbit"
            )];
            for (k, (orbit, label)) in orbits.iter().zip(&labels).enumerate() {
                comments.push(format!(
                    "orbit {}: size {}{}",
                    k + 1,
                    orbit.size(),
                    label.map(|l| format!(" ({l})")).unwrap_or_default()
                ));
            }
            let refs: Vec<&str> = comments.iter().map(|s| s.as_str()).collect();
            Ok(cddio::vrep_to_string(&v, &refs))
        }
    }
}

/// Matches a ray's permutation orbit against the catalog formulas.
fn catalog_label(representative: &Functional) -> Option<&'static str> {
    let n = representative.n();
    for entry in catalog::ENTRIES {
        if entry.name == "zhang-yeung" || entry.min_n > n {
            continue;
        }
        let Ok(f) = catalog::lookup(entry.name, Some(n)) else { continue };
        let Ok(rep) = monotonicity::orbit_representative(&f) else { continue };
        if rep.coeffs() == representative.coeffs() {
            return Some(entry.name);
        }
    }
    None
}
