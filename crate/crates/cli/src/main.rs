//! `xcube`: crossed squares, tensor products and 3-types from the command line.
//!
//! Exit codes: 0 success, 1 validation failure, 2 input error, 3 resource
//! exhaustion. Reports go to standard output (or `--json`), diagnostics and
//! timing to standard error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use xcube::abelian::AbelianError;
use xcube::crossed::CrossedError;
use xcube::fp::FpError;
use xcube::homotopy::{analyze, homotopy_of_abelian_square, HomotopyError};
use xcube::input::{
    parse_group, parse_quadratic, parse_structure, read_file, BuildOptions, ElemRef, GroupSpec, InputError,
    Structure,
};
use xcube::quadratic::{
    crossed_square_from_quadratic, realize, roundtrip_check, validate_extension, validate_quadratic, QuadraticError,
};
use xcube::report::{TensorReport, ThreeTypeReport};
use xcube::tensor::{nonabelian_tensor, suspension_three_type, tensor_presentation, TensorError, DEFAULT_TENSOR_BOUND};
use xcube::{CrossedSquare, Subgroup, ValidationReport};

#[derive(Parser, Debug)]
#[command(name = "xcube", version, about = "Crossed squares, non-abelian tensor products and homotopy 3-types")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Input file (JSON).
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Write the JSON report to this path (`-` for standard output).
    #[arg(long, global = true)]
    json: Option<PathBuf>,

    /// Coset enumeration bound.
    #[arg(long, global = true, default_value_t = DEFAULT_TENSOR_BOUND)]
    max_cosets: usize,

    /// Worker threads for verification.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for sampled associativity checks on large tables.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the axioms of a crossed module, square, n-cube or quadratic function.
    Validate,
    /// Compute the non-abelian tensor product of two normal subgroups.
    Tensor {
        /// `cyclic:n`, `dihedral:n`, `symmetric:n`, `D4` and so on, or a JSON group file.
        #[arg(long)]
        group: Option<String>,
        /// Generators of M, comma separated (names or indices).
        #[arg(long)]
        subgroup_m: Option<String>,
        /// Generators of N, comma separated (names or indices).
        #[arg(long)]
        subgroup_n: Option<String>,
    },
    /// Homotopy invariants of the classifying space of a crossed square.
    Homotopy,
    /// The 3-type of the suspension of K(G, 1).
    Suspension {
        /// Group spec; alternatively use `--input`.
        group: Option<String>,
    },
    /// Realise a quadratic function as a crossed square and check the round trip.
    Quadratic,
}

enum Failure {
    Validation(String),
    Input(String),
    Resource(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Input(_) => 2,
            Failure::Resource(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Input(m) | Failure::Resource(m) => m,
        }
    }
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        if e.is_resource_exhaustion() {
            return Failure::Resource(e.to_string());
        }
        match e {
            InputError::Crossed(CrossedError::Invalid(_)) | InputError::Tensor(_) => Failure::Validation(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<TensorError> for Failure {
    fn from(e: TensorError) -> Self {
        match e {
            TensorError::Enumeration(FpError::Overflow(_)) => Failure::Resource(e.to_string()),
            TensorError::Group(_) | TensorError::Enumeration(_) => Failure::Input(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<HomotopyError> for Failure {
    fn from(e: HomotopyError) -> Self {
        match e {
            HomotopyError::Abelian(AbelianError::Overflow) => Failure::Resource(e.to_string()),
            HomotopyError::Crossed(CrossedError::UnsupportedAction(_)) => Failure::Input(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<QuadraticError> for Failure {
    fn from(e: QuadraticError) -> Self {
        match e {
            QuadraticError::Abelian(AbelianError::Overflow) => Failure::Resource(e.to_string()),
            QuadraticError::Shape(_) | QuadraticError::Abelian(_) => Failure::Input(e.to_string()),
            QuadraticError::Homotopy(h) => h.into(),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

struct Context {
    json: Option<PathBuf>,
    opts: BuildOptions,
}

impl Context {
    fn emit(&self, text: &str, json: &str) -> Outcome {
        match &self.json {
            Some(p) if p.as_os_str() == "-" => println!("{json}"),
            Some(p) => {
                print!("{text}");
                std::fs::write(p, format!("{json}\n"))
                    .map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display())))?;
            }
            None => print!("{text}"),
        }
        Ok(())
    }
}

fn input_path(input: &Option<PathBuf>) -> Result<&Path, Failure> {
    input.as_deref().ok_or_else(|| Failure::Input("--input is required".into()))
}

fn group_arg(spec: &str, opts: &BuildOptions) -> Result<xcube::Group, Failure> {
    let path = Path::new(spec);
    let g = if path.is_file() { parse_group(&read_file(path)?)? } else { GroupSpec::parse_short(spec)? };
    Ok(g.build(opts)?)
}

fn subgroup_arg(g: &xcube::Group, gens: &Option<String>) -> Result<Subgroup, Failure> {
    let Some(gens) = gens else {
        return Ok(Subgroup::whole(g));
    };
    let mut elems = Vec::new();
    for tok in gens.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let r = tok.parse::<usize>().map(ElemRef::Index).unwrap_or_else(|_| ElemRef::Name(tok.to_string()));
        elems.push(r.resolve(g)?);
    }
    Subgroup::generated(g, &elems).map_err(|e| Failure::Input(e.to_string()))
}

fn report_validation<W: Ord + Clone + std::fmt::Debug + serde::Serialize>(ctx: &Context, r: &ValidationReport<W>) -> Outcome {
    let json = serde_json::to_string_pretty(r).expect("report serializes");
    ctx.emit(&format!("{r}\n"), &json)?;
    if r.is_valid() {
        Ok(())
    } else {
        Err(Failure::Validation(format!("{}: {} axiom(s) fail", r.subject, r.failures.len())))
    }
}

fn is_quadratic_file(text: &str) -> bool {
    serde_json::from_str::<serde_json::Value>(text)
        .map(|v| v.get("C").is_some() && v.get("kind").is_none_or(|k| k == "quadratic"))
        .unwrap_or(false)
}

fn validate(ctx: &Context, path: &Path) -> Outcome {
    let text = read_file(path)?;
    if is_quadratic_file(&text) {
        let (q, ext) = parse_quadratic(&text)?.build()?;
        let mut report = validate_quadratic(&q);
        if let Some(ext) = ext {
            if report.is_valid() {
                report.absorb("extension", validate_extension(&q, &ext)?);
            }
        }
        return report_validation(ctx, &report);
    }
    match parse_structure(&text)?.build(&ctx.opts)? {
        Structure::Group(g) => {
            let text = format!("group of order {}: valid\n", g.order());
            ctx.emit(&text, &format!("{{\"order\": {}, \"valid\": true}}", g.order()))
        }
        Structure::Module(m) => report_validation(ctx, &m.validate()),
        Structure::Square(sq, _) => report_validation(ctx, &sq.validate()),
        Structure::NCube(c) => report_validation(ctx, &c.validate()),
        Structure::Abelian(sq) => report_validation(ctx, &sq.validate()),
    }
}

fn tensor(ctx: &Context, group: &Option<String>, input: &Option<PathBuf>, sm: &Option<String>, sn: &Option<String>) -> Outcome {
    let (g, label) = match (group, input) {
        (Some(spec), _) => (group_arg(spec, &ctx.opts)?, spec.clone()),
        (None, Some(p)) => (parse_group(&read_file(p)?)?.build(&ctx.opts)?, p.display().to_string()),
        (None, None) => return Err(Failure::Input("tensor needs --group or --input".into())),
    };
    let (m, n) = (subgroup_arg(&g, sm)?, subgroup_arg(&g, sn)?);
    let presentation = tensor_presentation(&m, &n)?;
    let t = nonabelian_tensor(&m, &n, ctx.opts.max_cosets)?;
    let sq = t.crossed_square()?;
    let report = TensorReport::new(&label, &t, &presentation, sq.validate());
    ctx.emit(&report.to_text(), &report.to_json())?;
    if report.square.is_valid() {
        Ok(())
    } else {
        Err(Failure::Validation("universal crossed square fails validation".into()))
    }
}

fn finite_homotopy(ctx: &Context, label: &str, sq: &CrossedSquare, stats: Option<&xcube::fp::EnumerationStats>) -> Outcome {
    let v = sq.validate();
    if !v.is_valid() {
        eprintln!("{v}");
        return Err(Failure::Validation("input square fails validation".into()));
    }
    let tt = analyze(sq)?;
    let mut report = ThreeTypeReport::finite(label, sq, &tt, Vec::new());
    if let Some(s) = stats {
        report = report.with_enumeration(s);
    }
    ctx.emit(&report.to_text(), &report.to_json())
}

fn homotopy(ctx: &Context, path: &Path) -> Outcome {
    let label = path.display().to_string();
    match parse_structure(&read_file(path)?)?.build(&ctx.opts)? {
        Structure::Square(sq, stats) => finite_homotopy(ctx, &label, &sq, stats.as_ref()),
        Structure::NCube(c) if c.dimension() == 2 => {
            let sq = c.to_crossed_square().map_err(|e| Failure::Input(e.to_string()))?;
            finite_homotopy(ctx, &label, &sq, None)
        }
        Structure::Abelian(sq) => {
            let v = sq.validate();
            if !v.is_valid() {
                eprintln!("{v}");
                return Err(Failure::Validation("input square fails validation".into()));
            }
            let h = homotopy_of_abelian_square(&sq)?;
            let report = ThreeTypeReport::abelian(&label, &sq, &h);
            ctx.emit(&report.to_text(), &report.to_json())
        }
        _ => Err(Failure::Input("homotopy expects a crossed square".into())),
    }
}

fn suspension(ctx: &Context, group: &Option<String>, input: &Option<PathBuf>) -> Outcome {
    let (g, label) = match (group, input) {
        (Some(spec), _) => (group_arg(spec, &ctx.opts)?, spec.clone()),
        (None, Some(p)) => (parse_group(&read_file(p)?)?.build(&ctx.opts)?, p.display().to_string()),
        (None, None) => return Err(Failure::Input("suspension needs a group or --input".into())),
    };
    let s = suspension_three_type(&g, ctx.opts.max_cosets)?;
    let report = s.report(&label);
    ctx.emit(&report.to_text(), &report.to_json())
}

fn quadratic(ctx: &Context, path: &Path) -> Outcome {
    let (q, ext) = parse_quadratic(&read_file(path)?)?.build()?;
    let v = validate_quadratic(&q);
    if !v.is_valid() {
        eprintln!("{v}");
        return Err(Failure::Validation("not a quadratic function".into()));
    }
    let (ext, sq, rt) = match ext {
        Some(ext) => {
            let sq = crossed_square_from_quadratic(&q, &ext)?;
            let rt = roundtrip_check(&q, &ext, &sq)?;
            (ext, sq, rt)
        }
        None => realize(&q)?,
    };
    let h = homotopy_of_abelian_square(&sq)?;
    let report = ThreeTypeReport::abelian(&path.display().to_string(), &sq, &h);
    let mut text = report.to_text();
    text.push_str(&format!("extension: M = {}, {}\n", ext.m, if ext.symmetric { "symmetric" } else { "triangular" }));
    text.push_str(&format!("roundtrip: pass ({} elements compared)\n", rt.checked));
    let json = serde_json::json!({ "three_type": report, "roundtrip": rt });
    ctx.emit(&text, &serde_json::to_string_pretty(&json).expect("report serializes"))
}

fn run(cli: &Cli) -> Outcome {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Input(format!("cannot start thread pool: {e}")))?;
    }
    let mut opts = BuildOptions::with_max_cosets(cli.max_cosets);
    if let Some(seed) = cli.seed {
        opts.group.seed = seed;
    }
    let ctx = Context { json: cli.json.clone(), opts };
    match &cli.command {
        Command::Validate => validate(&ctx, input_path(&cli.input)?),
        Command::Tensor { group, subgroup_m, subgroup_n } => tensor(&ctx, group, &cli.input, subgroup_m, subgroup_n),
        Command::Homotopy => homotopy(&ctx, input_path(&cli.input)?),
        Command::Suspension { group } => suspension(&ctx, group, &cli.input),
        Command::Quadratic => quadratic(&ctx, input_path(&cli.input)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(&cli);
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
