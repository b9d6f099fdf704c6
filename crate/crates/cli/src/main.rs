mod svg;

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Deserialize;

use rcx_core::algebra::FieldParams;
use rcx_core::building::{Building, BuildingParams, DEFAULT_VERTEX_CAP};
use rcx_core::complexes::{
    gen_cayley, gen_circulant, gen_complete, gen_voltage_cover, ColoredComplex, LoadOptions, Voltage,
};
use rcx_core::spectrum::{
    boundary_curve, gaussian_binomial, in_sd, nontrivial_bound, trivial_tuples, EigenTuple,
    SdkRegion, DEFAULT_REGION_SAMPLES,
};
use rcx_core::verifier::{load_options, verify_complex, VerifierReport, VerifyOptions};

const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;

/// Bruhat-Tits building balls, Hecke spectra and Ramanujan verification.
///
/// Exit codes: 0 success (or Ramanujan), 1 pseudo-Ramanujan only,
/// 2 not Ramanujan, 3 structural failure, 64 usage error, 65 data error.
#[derive(Parser, Debug)]
#[command(name = "rcx", version)]
struct Cli {
    /// Numerical tolerance: unit-circle deviation of Satake parameters.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Seed for randomized eigensolver coefficients.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Maximum number of vertices in a building ball.
    #[arg(long, global = true, default_value_t = DEFAULT_VERTEX_CAP)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate a ball around the standard vertex and write it as JSON.
    ///
    /// The JSON document lists parameters, the vertex count, every vertex
    /// (index, color, type, distance, Hermite representative as rows of
    /// polynomial strings in t) and per-color directed edge lists.
    BuildBall(BuildBallArgs),
    /// Decide Ramanujan / pseudo-Ramanujan for one or more .rcx files.
    ///
    /// `-` reads stdin. With several files the exit code is the largest
    /// one. RCX_THREADS caps the number of worker threads.
    Verify(VerifyArgs),
    /// Sample the boundary curve of the k-th projected spectrum.
    ///
    /// CSV columns: theta (radians), re, im.
    Curve(CurveArgs),
    /// Print per-color degrees, nontrivial bounds and trivial tuples.
    Bounds(BoundsArgs),
    /// Generate sample complexes in .rcx format.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Test a tuple (lambda_1, ..., lambda_{d-1}) for membership in S_d.
    SpectrumCheck(SpectrumCheckArgs),
}

#[derive(Args, Debug)]
struct BuildBallArgs {
    /// Dimension d >= 2.
    #[arg(long)]
    d: Option<usize>,
    /// Residue field size, a prime power.
    #[arg(long)]
    q: Option<u64>,
    /// Irreducible modulus coefficients, low degree first (e.g. 1,1,1).
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
    /// TOML file with keys d, q, modulus, radius; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Ball radius in edges.
    #[arg(long)]
    radius: Option<u32>,
    /// Output JSON path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Deserialize, Default, Debug)]
#[serde(deny_unknown_fields)]
struct BallConfig {
    d: Option<usize>,
    q: Option<u64>,
    modulus: Option<Vec<u32>>,
    radius: Option<u32>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Input .rcx files; `-` for stdin.
    #[arg(required = true)]
    files: Vec<String>,
    /// t with zeta^(d/t) = 1 for trivial tuples; 1 admits all d-th roots.
    #[arg(long, default_value_t = 1)]
    t_index: usize,
    /// Take edges as written instead of completing reversed edges.
    #[arg(long)]
    strict: bool,
    /// Classify tuples matching trivial ones like any other tuple.
    #[arg(long)]
    treat_trivial_as_nontrivial: bool,
    /// Write the report(s) as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the spectrum as CSV: re_k, im_k per color, residual, multiplicity, class.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Scatter plot of lambda_1 against the boundary of its region.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CurveArgs {
    /// Dimension d >= 2.
    #[arg(long)]
    d: usize,
    /// Residue field size.
    #[arg(long)]
    q: f64,
    /// Color, 1..d-1.
    #[arg(long)]
    k: usize,
    /// Number of samples (at least 16).
    #[arg(long, default_value_t = 1024)]
    samples: usize,
    /// CSV output; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Plot of the curve and the trivial eigenvalues.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// Dimension d >= 2.
    #[arg(long)]
    d: usize,
    /// Residue field size.
    #[arg(long)]
    q: u64,
    /// t with zeta^(d/t) = 1 for trivial tuples.
    #[arg(long, default_value_t = 1)]
    t_index: usize,
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// Complete graph K_m with q = m - 2.
    Complete {
        /// Number of vertices, at least 3.
        #[arg(long)]
        m: usize,
        /// Output .rcx path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Circulant graph C_m(jumps).
    Circulant {
        /// Number of vertices.
        #[arg(long)]
        m: usize,
        /// Comma-separated jumps in 1..m-1.
        #[arg(long, value_delimiter = ',')]
        jumps: Vec<usize>,
        /// Defaults to degree - 1.
        #[arg(long)]
        q: Option<u64>,
        /// Output .rcx path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cayley-type complex from permutations.
    ///
    /// Each line of the file is `k g(0) g(1) ... g(m-1)`; `#` starts a comment.
    Cayley {
        /// Permutation file.
        #[arg(long)]
        perms: PathBuf,
        /// Dimension d >= 2.
        #[arg(long)]
        d: usize,
        /// Residue field size written to the file.
        #[arg(long)]
        q: u64,
        /// Output .rcx path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cyclic m-fold cover of a d = 2 complex.
    ///
    /// Each line of the voltage file is `u v a`, meaning voltage a in Z_m on u -> v.
    Cover {
        /// Base .rcx file with d = 2.
        #[arg(long)]
        base: PathBuf,
        /// Number of sheets.
        #[arg(long)]
        m: usize,
        /// Voltage file; all voltages 0 when omitted.
        #[arg(long)]
        voltages: Option<PathBuf>,
        /// Output .rcx path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct SpectrumCheckArgs {
    /// Dimension d >= 2.
    #[arg(long)]
    d: usize,
    /// Residue field size.
    #[arg(long)]
    q: f64,
    /// re1,im1,re2,im2,... for lambda_1..lambda_{d-1}.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    lambda: Vec<f64>,
}

/// Failures that map to distinct exit codes.
enum Failure {
    Usage(String),
    Data(String),
}

impl From<rcx_core::Error> for Failure {
    fn from(e: rcx_core::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_DATA)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::BuildBall(a) => build_ball(a, cli.cap),
        Command::Verify(a) => verify(a, cli.tol, cli.seed),
        Command::Curve(a) => curve(a),
        Command::Bounds(a) => bounds(a),
        Command::Gen(g) => generate(g),
        Command::SpectrumCheck(a) => spectrum_check(a, cli.tol),
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Data(format!("{}: {e}", path.display()))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| io_err(p, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Failure::Data(e.to_string()))
        }
    }
}

fn build_ball(a: BuildBallArgs, cap: usize) -> CmdResult {
    let cfg: BallConfig = match &a.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| io_err(p, e))?;
            toml::from_str(&text).map_err(|e| Failure::Data(format!("{}: {e}", p.display())))?
        }
        None => BallConfig::default(),
    };
    let d = a.d.or(cfg.d).ok_or_else(|| Failure::Usage("--d is required".into()))?;
    let q = a.q.or(cfg.q).ok_or_else(|| Failure::Usage("--q is required".into()))?;
    let radius = a.radius.or(cfg.radius).ok_or_else(|| Failure::Usage("--radius is required".into()))?;
    let field = match a.modulus.or(cfg.modulus) {
        Some(m) => FieldParams::with_modulus(q, m)?,
        None => FieldParams::for_q(q)?,
    };
    let building = Building::new(BuildingParams::new(d, field)?)?;
    let ball = building.build_ball(radius, cap)?;
    let json = serde_json::to_string_pretty(&ball.to_document()).map_err(|e| Failure::Data(e.to_string()))?;
    write_output(a.out.as_deref(), &(json + "\n"))?;
    if a.out.is_some() {
        println!("d={d} q={q} radius={radius}: {} vertices", ball.len());
        for n in 0..=radius {
            let counts = ball.count_types(n)?;
            let parts: Vec<String> = counts.iter().map(|(t, c)| format!("{:?}x{c}", t.0)).collect();
            println!("  distance {n}: {}", parts.join(" "));
        }
    }
    Ok(0)
}

fn read_input(name: &str, opts: LoadOptions) -> Result<ColoredComplex, Failure> {
    let text = if name == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Data(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(name).map_err(|e| io_err(Path::new(name), e))?
    };
    ColoredComplex::parse(&text, opts).map_err(|e| Failure::Data(format!("{name}: [{}] {e}", e.code())))
}

fn thread_pool() -> Result<rayon::ThreadPool, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("RCX_THREADS") {
        let n: usize = v.parse().map_err(|_| Failure::Usage(format!("RCX_THREADS={v} is not a number")))?;
        builder = builder.num_threads(n.max(1));
    }
    builder.build().map_err(|e| Failure::Data(e.to_string()))
}

fn verify(a: VerifyArgs, tol: f64, seed: u64) -> CmdResult {
    let opts = VerifyOptions {
        tol,
        t_index: a.t_index,
        strict: a.strict,
        treat_trivial_as_nontrivial: a.treat_trivial_as_nontrivial,
        seed,
        ..Default::default()
    };
    if a.files.iter().filter(|f| *f == "-").count() > 1 {
        return Err(Failure::Usage("stdin can be read only once".into()));
    }
    let complexes: Vec<ColoredComplex> =
        a.files.iter().map(|f| read_input(f, load_options(&opts))).collect::<Result<_, _>>()?;
    let pool = thread_pool()?;
    let reports: Vec<VerifierReport> = pool
        .install(|| complexes.par_iter().map(|cx| verify_complex(cx, &opts)).collect::<Result<Vec<_>, _>>())?;

    let multi = reports.len() > 1;
    for (file, r) in a.files.iter().zip(&reports) {
        if multi {
            print!("{file}: ");
        }
        print!("{}", r.summary());
    }
    if let Some(p) = &a.json {
        let json = if multi {
            let entries: Vec<serde_json::Value> = a
                .files
                .iter()
                .zip(&reports)
                .map(|(f, r)| serde_json::json!({ "file": f, "report": r }))
                .collect();
            serde_json::to_string_pretty(&entries)
        } else {
            serde_json::to_string_pretty(&reports[0])
        }
        .map_err(|e| Failure::Data(e.to_string()))?;
        write_output(Some(p), &(json + "\n"))?;
    }
    if let Some(p) = &a.csv {
        let mut text = String::new();
        for (i, (f, r)) in a.files.iter().zip(&reports).enumerate() {
            let csv = r.to_csv();
            for (j, line) in csv.lines().enumerate() {
                if j == 0 && i > 0 {
                    continue;
                }
                if multi {
                    text.push_str(if j == 0 { "file," } else { f });
                    if j > 0 {
                        text.push(',');
                    }
                }
                text.push_str(line);
                text.push('\n');
            }
        }
        write_output(Some(p), &text)?;
    }
    if let Some(p) = &a.svg {
        let r = &reports[0];
        let mut plot = svg::Plot::new(480.0, 480.0);
        if r.d >= 2 {
            let curve = boundary_curve(r.d, r.q as f64, 1, 720)?;
            let mut pts: Vec<(f64, f64)> = curve.iter().map(|s| (s.value.re, s.value.im)).collect();
            pts.push(pts[0]);
            plot.polyline(pts, "#333");
        }
        for t in &r.tuples {
            let l = t.tuple.get(1);
            let color = if t.class.is_trivial() { "#888" } else if t.in_sdk[0] { "#1a7f37" } else { "#cf222e" };
            plot.dot((l.re, l.im), color);
        }
        write_output(Some(p), &plot.render())?;
    }
    Ok(reports.iter().map(|r| r.verdict.exit_code() as u8).max().unwrap_or(0))
}

fn curve(a: CurveArgs) -> CmdResult {
    let samples = boundary_curve(a.d, a.q, a.k, a.samples)?;
    let mut csv = String::from("theta,re,im\n");
    for s in &samples {
        csv.push_str(&format!("{:.12},{:.12},{:.12}\n", s.theta, s.value.re, s.value.im));
    }
    write_output(a.out.as_deref(), &csv)?;
    if let Some(p) = &a.svg {
        let mut plot = svg::Plot::new(480.0, 480.0);
        let mut pts: Vec<(f64, f64)> = samples.iter().map(|s| (s.value.re, s.value.im)).collect();
        pts.push(pts[0]);
        plot.polyline(pts, "#333");
        write_output(Some(p), &plot.render())?;
    }
    if a.out.is_some() && a.d >= 3 {
        let region = SdkRegion::new(a.d, a.q, a.k, DEFAULT_REGION_SAMPLES.max(a.samples))?;
        if !region.is_simple() {
            println!("note: the curve crosses itself; the region is its filled outer boundary");
        }
    }
    Ok(0)
}

fn format_complex(z: Complex64) -> String {
    if z.im.abs() < 1e-12 {
        format!("{:.3}", z.re)
    } else {
        format!("{:.3}{:+.3}i", z.re, z.im)
    }
}

fn bounds(a: BoundsArgs) -> CmdResult {
    if a.d < 2 {
        return Err(Failure::Usage("d must be at least 2".into()));
    }
    let trivial = trivial_tuples(a.d, a.q as f64, a.t_index)?;
    println!("d={} q={}", a.d, a.q);
    for k in 1..a.d {
        let deg = gaussian_binomial(a.d, k, a.q);
        let bound = match nontrivial_bound(a.d, a.q as f64, k) {
            Ok(b) => format!("{b:.6}"),
            Err(e) => format!("none ({e})"),
        };
        println!("  k={k}: degree {deg}, nontrivial bound {bound}");
    }
    for t in &trivial {
        let vals: Vec<String> = t.tuple.values().iter().map(|&z| format_complex(z)).collect();
        println!("  trivial zeta=exp(2 pi i {}/{}): ({})", t.index, t.order, vals.join(", "));
    }
    Ok(0)
}

fn parse_lines<T>(path: &Path, mut f: impl FnMut(usize, &[&str]) -> Result<T, String>) -> Result<Vec<T>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        out.push(f(i + 1, &toks).map_err(|e| Failure::Data(format!("{}:{}: {e}", path.display(), i + 1)))?);
    }
    Ok(out)
}

fn generate(g: GenCommand) -> CmdResult {
    let (cx, out) = match g {
        GenCommand::Complete { m, out } => (gen_complete(m)?, out),
        GenCommand::Circulant { m, jumps, q, out } => (gen_circulant(m, &jumps, q)?, out),
        GenCommand::Cayley { perms, d, q, out } => {
            let gens = parse_lines(&perms, |_, toks| {
                let nums: Vec<usize> = toks
                    .iter()
                    .map(|t| t.parse().map_err(|_| format!("bad number `{t}`")))
                    .collect::<Result<_, _>>()?;
                nums.split_first().map(|(k, p)| (*k, p.to_vec())).ok_or_else(|| "empty line".into())
            })?;
            let m = gens.first().map_or(0, |g| g.1.len());
            (gen_cayley(d, q, m, &gens)?, out)
        }
        GenCommand::Cover { base, m, voltages, out } => {
            let base_cx = ColoredComplex::load(&base, LoadOptions::default())?;
            let volts = match voltages {
                Some(p) => parse_lines(&p, |_, toks| match toks {
                    [u, v, a] => Ok(Voltage {
                        u: u.parse().map_err(|_| format!("bad vertex `{u}`"))?,
                        v: v.parse().map_err(|_| format!("bad vertex `{v}`"))?,
                        value: a.parse().map_err(|_| format!("bad voltage `{a}`"))?,
                    }),
                    _ => Err("expected `u v a`".into()),
                })?,
                None => Vec::new(),
            };
            (gen_voltage_cover(&base_cx, m, &volts)?, out)
        }
    };
    write_output(out.as_deref(), &cx.to_rcx_string())?;
    Ok(0)
}

fn spectrum_check(a: SpectrumCheckArgs, tol: f64) -> CmdResult {
    if a.d < 2 {
        return Err(Failure::Usage("d must be at least 2".into()));
    }
    if a.lambda.len() != 2 * (a.d - 1) {
        return Err(Failure::Usage(format!(
            "--lambda needs {} numbers (re,im for each of {} eigenvalues)",
            2 * (a.d - 1),
            a.d - 1
        )));
    }
    let lam = EigenTuple(a.lambda.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect());
    let v = in_sd(a.d, a.q, &lam, tol)?;
    let mut roots = v.roots.clone();
    roots.sort_by(|x, y| y.norm().total_cmp(&x.norm()).then(y.arg().total_cmp(&x.arg())));
    let roots: Vec<String> = roots.into_iter().map(format_complex).collect();
    let verdict = if v.member { "in" } else { "NOT in" };
    println!("{verdict} S_{}; roots {}", a.d, roots.join(", "));
    println!(
        "max ||z|-1| = {:.3e}, backward error = {:.3e}, conjugacy defect = {:.3e}",
        v.max_modulus_deviation, v.backward_error, v.conjugacy_defect
    );
    Ok(0)
}
