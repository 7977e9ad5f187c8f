//! Command-line driver for the verification suites.
//!
//! Every subcommand prints a summary table, writes a JSON report with a CSV
//! companion (under `--out`, `KKPERTURB_OUT`, or `./reports`), and exits 0
//! only when every assertion passed.

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;
use std::path::PathBuf;

use super::suites::{self, PodlesSuiteKind, SuiteOutcome};
use super::emit_report;
use crate::geom_heisenberg::{lattice_generators, HeisPoint};
use crate::geom_podles::HalfInt;
use crate::geom_torus::KSpec;

#[derive(Parser, Debug)]
#[command(
    name = "kkperturb",
    about = "Verification suites for multiplicative perturbations of self-adjoint operators",
    version
)]
struct Cli {
    /// Output directory for JSON/CSV reports (overrides KKPERTURB_OUT).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for the pseudo-random generator (ChaCha8).
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Random-draw verification of one inequality family.
    Verify(VerifyArgs),
    /// Noncommutative-torus conformal sweep.
    Torus(TorusArgs),
    /// Podles-sphere identity suites.
    Podles(PodlesArgs),
    /// Heisenberg-lattice dilation and commutator sweeps.
    Heisenberg(HeisenbergArgs),
    /// Logarithmic dampening of the dilation D -> kappa D.
    LogDampen(LogDampenArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// One of: interpolation, stampfli, sandwich, quadrature, converse.
    suite: String,
    /// Number of random draws (where applicable).
    #[arg(long, default_value_t = 1000)]
    draws: usize,
}

#[derive(Args, Debug)]
struct TorusArgs {
    /// Deformation parameter theta.
    #[arg(long, default_value_t = crate::geom_torus::default_theta())]
    theta: f64,
    /// Modulus tau as "re,im" with im > 0.
    #[arg(long, default_value = "0,1")]
    tau: String,
    /// Truncation radii, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "8,12,16,20,24")]
    n_list: Vec<usize>,
    /// Weight exponent beta.
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    /// Conformal polynomial "c0,c1" meaning c0 + c1 (U + U*)/2.
    #[arg(long, default_value = "2,1")]
    k: String,
}

#[derive(Args, Debug)]
struct PodlesArgs {
    /// Deformation parameter q in (0,1).
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    /// Truncation level, e.g. "3" or "5/2".
    #[arg(long, default_value = "3")]
    l_max: String,
    /// One of: relations, omega, mu, twisted.
    #[arg(long, default_value = "relations")]
    suite: String,
}

#[derive(Args, Debug)]
struct HeisenbergArgs {
    /// Window radii, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "10,20,40,80")]
    radii: Vec<i64>,
    /// "all" or semicolon-separated triples like "1,0,0;0,0,1".
    #[arg(long, default_value = "all")]
    generators: String,
}

#[derive(Args, Debug)]
struct LogDampenArgs {
    /// Dilation factor.
    #[arg(long, default_value_t = 2.0)]
    kappa: f64,
    /// Circle truncation radii.
    #[arg(long, value_delimiter = ',', default_value = "64,128,256,512")]
    n_list: Vec<usize>,
}

fn parse_tau(s: &str) -> Result<C64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("tau must be \"re,im\", got `{s}`"));
    }
    let re: f64 = parts[0].trim().parse().map_err(|e| format!("tau re: {e}"))?;
    let im: f64 = parts[1].trim().parse().map_err(|e| format!("tau im: {e}"))?;
    Ok(C64::new(re, im))
}

fn parse_k(s: &str) -> Result<KSpec, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("k must be \"c0,c1\", got `{s}`"));
    }
    let c0: f64 = parts[0].trim().parse().map_err(|e| format!("k c0: {e}"))?;
    let c1: f64 = parts[1].trim().parse().map_err(|e| format!("k c1: {e}"))?;
    Ok(KSpec {
        monomials: vec![
            (0, 0, C64::new(c0, 0.0)),
            (1, 0, C64::new(c1 / 2.0, 0.0)),
            (-1, 0, C64::new(c1 / 2.0, 0.0)),
        ],
    })
}

fn parse_l_max(s: &str) -> Result<HalfInt, String> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: i32 = num.trim().parse().map_err(|e| format!("l-max: {e}"))?;
        let d: i32 = den.trim().parse().map_err(|e| format!("l-max: {e}"))?;
        if d != 2 {
            return Err(format!("l-max denominator must be 2, got {d}"));
        }
        Ok(HalfInt::from_doubled(n))
    } else if let Ok(n) = s.parse::<i32>() {
        Ok(HalfInt::from_int(n))
    } else if let Ok(x) = s.parse::<f64>() {
        let doubled = (2.0 * x).round();
        if (doubled - 2.0 * x).abs() > 1e-9 {
            return Err(format!("l-max {x} is not a half-integer"));
        }
        Ok(HalfInt::from_doubled(doubled as i32))
    } else {
        Err(format!("cannot parse l-max `{s}`"))
    }
}

fn parse_generators(s: &str) -> Result<Vec<HeisPoint>, String> {
    if s == "all" {
        return Ok(lattice_generators().to_vec());
    }
    s.split(';')
        .map(|triple| {
            let nums: Vec<&str> = triple.split(',').collect();
            if nums.len() != 3 {
                return Err(format!("generator must be \"a,b,c\", got `{triple}`"));
            }
            let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("generator: {e}"));
            Ok(HeisPoint::new(parse(nums[0])?, parse(nums[1])?, parse(nums[2])?))
        })
        .collect()
}

fn output_dir(flag: &Option<PathBuf>) -> PathBuf {
    if let Some(p) = flag {
        return p.clone();
    }
    if let Ok(env) = std::env::var("KKPERTURB_OUT") {
        if !env.is_empty() {
            return PathBuf::from(env);
        }
    }
    PathBuf::from("reports")
}

fn finish(outcome: SuiteOutcome, name: &str, dir: &PathBuf) -> i32 {
    for line in &outcome.summary {
        println!("{line}");
    }
    let path = dir.join(format!("{name}.json"));
    if let Err(e) = emit_report(&outcome.reports, &path) {
        eprintln!("error: failed to write report {}: {e}", path.display());
        return 1;
    }
    println!("report: {} (+ .csv), config hash {}", path.display(), outcome.config.config_hash());
    if outcome.pass() {
        println!("{name}: PASS");
        0
    } else {
        for f in &outcome.failures {
            eprintln!("FAIL: {f}");
        }
        println!("{name}: FAIL");
        1
    }
}

/// Entry point; returns the process exit code. Unknown flags exit 2 through
/// the clap usage error path, failed assertions exit 1.
pub fn cli_main<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message; usage problems exit 2.
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let dir = output_dir(&cli.out);
    let seed = cli.seed;
    let run = || -> crate::error::Result<i32> {
        match cli.command {
            Command::Verify(args) => {
                let outcome = match args.suite.as_str() {
                    "interpolation" => suites::verify_interpolation(seed, args.draws)?,
                    "stampfli" => suites::verify_stampfli(seed, args.draws)?,
                    "sandwich" => suites::verify_sandwich(seed, args.draws)?,
                    "quadrature" => suites::verify_quadrature(seed)?,
                    "converse" => suites::verify_converse(seed, args.draws)?,
                    other => {
                        eprintln!("error: unknown verify suite `{other}`");
                        eprintln!("expected one of: interpolation, stampfli, sandwich, quadrature, converse");
                        return Ok(2);
                    }
                };
                let name = format!("verify-{}", args.suite);
                Ok(finish(outcome, &name, &dir))
            }
            Command::Torus(args) => {
                let tau = match parse_tau(&args.tau) {
                    Ok(t) => t,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return Ok(2);
                    }
                };
                let k = match parse_k(&args.k) {
                    Ok(k) => k,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return Ok(2);
                    }
                };
                let outcome =
                    suites::torus_suite(args.theta, tau, &args.n_list, args.beta, &k, seed)?;
                Ok(finish(outcome, "torus", &dir))
            }
            Command::Podles(args) => {
                let kind: PodlesSuiteKind = match args.suite.parse() {
                    Ok(k) => k,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return Ok(2);
                    }
                };
                let l_max = match parse_l_max(&args.l_max) {
                    Ok(l) => l,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return Ok(2);
                    }
                };
                let outcome = suites::podles_suite(args.q, l_max, kind, seed)?;
                let name = format!("podles-{}", args.suite);
                Ok(finish(outcome, &name, &dir))
            }
            Command::Heisenberg(args) => {
                let gens = match parse_generators(&args.generators) {
                    Ok(g) => g,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return Ok(2);
                    }
                };
                let outcome = suites::heisenberg_suite(&args.radii, &gens, seed)?;
                Ok(finish(outcome, "heisenberg", &dir))
            }
            Command::LogDampen(args) => {
                let outcome = suites::log_dampen_suite(args.kappa, &args.n_list, seed)?;
                Ok(finish(outcome, "log-dampen", &dir))
            }
        }
    };
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
