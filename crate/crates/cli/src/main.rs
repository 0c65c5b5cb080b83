use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use modpar_core::bt_graph::QuotientGraph;
use modpar_core::cochain::FourierTable;
use modpar_core::curve::{torsion_bound, PointCache, WeierstrassCurve};
use modpar_core::ff_base::{P1Point, Poly, PrimeField};
use modpar_core::modparam::{
    compute_parametrization, evaluate_cusp, find_newform, j_inverse, ParamOptions, ParametrizationReport,
};
use modpar_core::par::{init_threads, Exec};
use modpar_core::theta::{default_base_point, ThetaOptions};
use modpar_core::Error;

#[derive(Parser)]
#[command(name = "modpar", version, about = "Drinfeld modular parametrizations of elliptic curves over F_q(T)")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// worker threads; 0 uses the available parallelism
    #[arg(long, default_value_t = 0, global = true)]
    threads: usize,

    /// run every loop on the calling thread
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Full parametrization: newform, lattice, degree and every cusp image
    Analyze(AnalyzeArgs),
    /// The quotient graph Γ_0(n)\T
    Graph {
        #[command(flatten)]
        level: Level,
        /// same as --format dot
        #[arg(long)]
        dot: bool,
    },
    /// Cusp representatives of Γ_0(n)
    Cusps {
        #[command(flatten)]
        level: Level,
    },
    /// Newform of the curve with its Fourier coefficients
    Newform {
        #[command(flatten)]
        curve: CurveArgs,
        /// Fourier coefficients c(φ, m) for deg m <= this
        #[arg(long, default_value_t = 2)]
        degree: usize,
    },
    /// Value of the parametrization at one point of P^1(F_q(T))
    EvalCusp {
        #[command(flatten)]
        curve: CurveArgs,
        /// the point, such as "1/T" or "0"
        #[arg(long)]
        s: String,
        /// certify the theta products to relative precision q^-EPS
        #[arg(long, default_value_t = 5)]
        eps: i64,
    },
    /// gcd of #E(F_P) over primes P = 1 mod n up to a degree
    TorsionBound {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 10)]
        depth: usize,
    },
}

#[derive(Args)]
struct Level {
    /// characteristic (prime fields only)
    #[arg(long)]
    q: u32,
    /// level, such as "T^3-T^2"
    #[arg(long)]
    n: String,
}

#[derive(Args)]
struct CurveArgs {
    #[command(flatten)]
    level: Level,
    /// Weierstrass coefficients, such as "a1=T;a6=T^2"
    #[arg(long)]
    curve: String,
    /// directory for cached point counts
    #[arg(long, env = "MODPAR_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    curve: CurveArgs,
    #[arg(long, default_value_t = 5)]
    eps: i64,
    /// primes up to this degree enter the torsion bound
    #[arg(long, default_value_t = 10)]
    depth: usize,
    /// digits of t_E shown in text output (at least 6)
    #[arg(long, default_value_t = 12)]
    precision: i64,
    #[arg(long, default_value_t = 200_000_000)]
    max_candidates: u64,
    /// skip the comparison of n with the conductor from Tate's algorithm
    #[arg(long)]
    no_verify_conductor: bool,
    /// include stage timings (makes the output run-dependent)
    #[arg(long)]
    timings: bool,
}

impl Level {
    fn parse(&self) -> Result<(PrimeField, Poly), Error> {
        let f = PrimeField::new(self.q)?;
        Ok((f, Poly::parse(f, &self.n)?))
    }
}

impl CurveArgs {
    fn parse(&self) -> Result<(WeierstrassCurve, Poly, PointCache), Error> {
        let (f, n) = self.level.parse()?;
        let e = WeierstrassCurve::parse(f, &self.curve)?;
        let cache = match &self.cache_dir {
            Some(dir) => PointCache::open(dir, &e)?,
            None => PointCache::in_memory(),
        };
        Ok((e, n, cache))
    }
}

fn json<T: serde::Serialize>(x: &T) -> Result<String, Error> {
    Ok(serde_json::to_string_pretty(x)? + "\n")
}

fn render_report(r: &ParametrizationReport, t_e: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "curve: {} over F_{}", r.curve, r.q);
    let _ = writeln!(out, "level: n = {}", r.n);
    for c in &r.conductor {
        let _ = writeln!(out, "  {}: {:?} {} (exponent {})", c.place, c.kind, c.kodaira, c.conductor_exponent);
    }
    let _ = writeln!(out, "genus: {}", r.genus);
    let _ = writeln!(out, "cusps: {}", r.cusps.join(", "));
    let _ = writeln!(out, "<phi, phi> = {}", r.newform.petersson_norm);
    let word: Vec<String> = r.word.pairs().iter().map(|(m, k)| format!("{m}^{k}")).collect();
    let _ = writeln!(out, "word: {}", word.join(" "));
    let _ = writeln!(out, "t = {} (v(t) = {})", r.lattice.t, r.lattice.mu);
    let _ = writeln!(out, "t_E = {t_e} ({})", if r.t_matches_tate_parameter { "agrees with t" } else { "DIFFERS from t" });
    let _ = writeln!(out, "deg Phi = {}", r.degree);
    let _ = writeln!(out, "torsion bound {} (primes of degree <= {})", r.torsion.bound, r.torsion.max_degree);
    for c in &r.cusp_images {
        let _ = writeln!(
            out,
            "Phi({}) = {} : order {} (divides bound {})",
            c.cusp, c.value, c.order.order, c.order.bound
        );
    }
    for (stage, ms) in &r.timings_ms {
        let _ = writeln!(out, "time {stage}: {ms} ms");
    }
    out
}

fn run(cli: &Cli) -> Result<String, Error> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match &cli.cmd {
        Command::Analyze(a) => {
            if a.precision < 6 {
                return Err(Error::InvalidInput("--precision must be at least 6".into()));
            }
            let (e, n, cache) = a.curve.parse()?;
            let opts = ParamOptions {
                eps_exp: a.eps,
                torsion_depth: a.depth,
                exec,
                max_candidates: a.max_candidates,
                verify_conductor: !a.no_verify_conductor,
                ..Default::default()
            };
            let mut r = compute_parametrization(&e, &n, &opts, Some(&cache))?;
            if !a.timings {
                r.timings_ms.clear();
            }
            match cli.format {
                Format::Json => json(&r),
                _ => {
                    let v = r.lattice.mu;
                    let t_e = modpar_core::curve::tate_parameter_from_j(&e.j_invariant(), v + a.precision)?;
                    Ok(render_report(&r, &t_e.to_string()))
                }
            }
        }
        Command::Graph { level, dot } => {
            let (_, n) = level.parse()?;
            let g = QuotientGraph::build(&n)?;
            match (cli.format, dot) {
                (Format::Dot, _) | (_, true) => Ok(g.to_dot()),
                (Format::Json, _) => json(&g),
                _ => {
                    let mut out = format!("level {} genus {}\n", g.n, g.genus);
                    for v in &g.vertices {
                        let _ = writeln!(out, "vertex {} level {} stabilizer {}", v.id, v.level, v.stabilizer);
                    }
                    for e in &g.edges {
                        let _ = writeln!(out, "edge {}: {} -> {} stabilizer {}", e.id, e.origin, e.terminus, e.stabilizer);
                    }
                    for end in &g.ends {
                        let _ = writeln!(out, "end {} at vertex {}", end.cusp, end.vertex);
                    }
                    Ok(out)
                }
            }
        }
        Command::Cusps { level } => {
            let (_, n) = level.parse()?;
            let cusps: Vec<String> = QuotientGraph::build(&n)?.cusps().iter().map(|c| c.to_string()).collect();
            match cli.format {
                Format::Json => json(&cusps),
                _ => Ok(cusps.iter().map(|c| format!("{c}\n")).collect()),
            }
        }
        Command::Newform { curve, degree } => {
            let (e, n, cache) = curve.parse()?;
            let g = QuotientGraph::build(&n)?;
            let nf = find_newform(&g, &e, &cache)?;
            cache.save()?;
            let table = FourierTable::compute(&g, &nf.phi, *degree, nf.convention)?;
            match cli.format {
                Format::Json => json(&serde_json::json!({ "newform": nf, "fourier": table })),
                _ => {
                    let mut out = format!("phi = {:?}\n<phi, phi> = {}\n", nf.phi.values, nf.petersson_norm);
                    let _ = writeln!(out, "nu convention: {}", nf.convention.describe());
                    for (m, c) in &table.coeffs {
                        let _ = writeln!(out, "c({m}) = {c}");
                    }
                    Ok(out)
                }
            }
        }
        Command::EvalCusp { curve, s, eps } => {
            let (e, n, cache) = curve.parse()?;
            let g = QuotientGraph::build(&n)?;
            let nf = find_newform(&g, &e, &cache)?;
            cache.save()?;
            let word = j_inverse(&g, &nf.phi)?;
            let point = P1Point::parse(e.field(), s)?;
            let opts = ThetaOptions { eps_exp: *eps, exec, ..Default::default() };
            let (value, members) = evaluate_cusp(&n, &word, &default_base_point(e.field()), &point, &opts)?;
            match cli.format {
                Format::Json => json(&serde_json::json!({
                    "s": point.to_string(), "value": value, "eps_exp": eps, "members": members
                })),
                _ => Ok(format!(
                    "Phi({point}) = {value}\ncertificate: |u - P| < |P| * {}^-{eps}, {members} factors\n",
                    e.field().p()
                )),
            }
        }
        Command::TorsionBound { curve, depth } => {
            let (e, n, cache) = curve.parse()?;
            let t = torsion_bound(&e, &n, *depth, exec, Some(&cache))?;
            match cli.format {
                Format::Json => json(&t),
                _ => {
                    let mut out = format!("torsion bound {} (primes of degree <= {depth})\n", t.bound);
                    for (d, g) in &t.by_degree {
                        let _ = writeln!(out, "  degree {d}: gcd {g}");
                    }
                    Ok(out)
                }
            }
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err.root() {
        Error::Inconclusive(_) | Error::CapExceeded(_) | Error::Precision(_) => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    init_threads(cli.threads);
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
