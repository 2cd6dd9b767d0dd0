mod record;
mod scan;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use slopekit_core::bounds::{self, Status};
use slopekit_core::curve::lpolynomial;
use slopekit_core::field::DEFAULT_BUDGET;
use slopekit_core::suite::{self, GridResult};
use slopekit_core::tiling::{self, TilingWeight};
use slopekit_core::verify::check_curve;
use slopekit_core::{CurveSpec, Error};

use record::{BoundRecord, ExampleRecord, NewtonRecord, RunRecord};

#[derive(Parser)]
#[command(name = "slopekit", version, about = "Newton polygons of generalized Artin-Schreier curves")]
struct Cli {
    /// Element budget for exhaustive enumeration.
    #[arg(long, global = true, env = "SLOPEKIT_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Add wall-clock time to JSON records.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// L-polynomial from point counts.
    Lpoly {
        /// Curve, e.g. `p=2 u=1 s=1 f=x^3`.
        #[arg(required = true, num_args = 1..)]
        curve: Vec<String>,
        /// Also count up to 2g and check the functional equation.
        #[arg(long)]
        verify: bool,
    },
    /// Newton polygon of the L-polynomial.
    Newton {
        #[arg(required = true, num_args = 1..)]
        curve: Vec<String>,
    },
    /// All verdicts for one curve.
    Check {
        #[arg(required = true, num_args = 1..)]
        curve: Vec<String>,
        #[arg(long)]
        verify: bool,
    },
    /// Improved Hasse-Weil bound over F_{Q^n}, Q = p^s.
    Bounds {
        p: u64,
        s: u32,
        u: u32,
        d: u64,
        n: u32,
    },
    /// Recompute the three published bound examples.
    Examples,
    /// Minimal tiling weight and shortest tilings of r.
    Tiling {
        r: u64,
        /// Comma-separated multiplier set, e.g. `1,3`.
        set: String,
        p: u64,
        /// With a degree, also run the tiling/partition bijection check.
        d: Option<usize>,
    },
    /// Pass/fail grids for the power-series identities.
    SeriesVerify {
        #[arg(value_enum, ignore_case = true)]
        which: Which,
    },
    /// Check many curves, appending one JSON line per curve.
    Scan {
        /// `random:SEED:COUNT`, or `p=P u=U s=S d=D` for every monic
        /// prime-field polynomial of that degree without constant term.
        #[arg(long)]
        family: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Y,
    D,
    E,
    C,
    Rel,
    Cmod,
    All,
}

enum Failure {
    Verification(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CountingInconsistency { .. } => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<bool, Failure>;

fn parse_curve(words: &[String]) -> std::result::Result<CurveSpec, Failure> {
    let text = words.join(" ");
    CurveSpec::parse(&text).map_err(|e| match e {
        Error::Parse { column, message } => {
            Failure::Usage(format!("{text}\n{}^ column {column}: {message}", " ".repeat(column - 1)))
        }
        other => other.into(),
    })
}

fn print_json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string(v).expect("serializable"));
}

fn run(cli: &Cli) -> Outcome {
    let budget = cli.budget;
    let started = Instant::now();
    let elapsed = || cli.timing.then(|| started.elapsed().as_millis() as u64);
    match &cli.command {
        Command::Lpoly { curve, verify } => {
            let spec = parse_curve(curve)?;
            let l = lpolynomial(&spec, *verify, budget)?;
            let mut rec = RunRecord::from_lpoly(&spec, &l);
            if cli.json {
                rec.elapsed_ms = elapsed();
                print_json(&rec);
            } else {
                println!("curve: {}", rec.curve);
                println!("genus: {}", rec.genus);
                println!("L(T) = {}", l.render());
                println!("slopes: {}", rec.slopes.join(" "));
                println!("first slope: {}", rec.first_slope.as_deref().unwrap_or("none"));
                println!("supersingular: {}", rec.supersingular);
            }
            Ok(true)
        }
        Command::Newton { curve } => {
            let spec = parse_curve(curve)?;
            let l = lpolynomial(&spec, false, budget)?;
            let rec = NewtonRecord::new(&l);
            if cli.json {
                print_json(&rec);
            } else {
                let v: Vec<String> = rec.vertices.iter().map(|(i, y)| format!("({i}, {y})")).collect();
                println!("vertices: {}", v.join(" "));
                println!("slopes: {}", rec.slopes.join(" "));
                println!("first slope: {}", rec.first_slope.as_deref().unwrap_or("none"));
                println!("supersingular: {}", rec.supersingular);
            }
            Ok(true)
        }
        Command::Check { curve, verify } => {
            let spec = parse_curve(curve)?;
            let r = check_curve(&spec, *verify, budget)?;
            let mut rec = RunRecord::from_check(&spec, &r);
            let ok = r.violations().is_empty();
            if cli.json {
                rec.elapsed_ms = elapsed();
                print_json(&rec);
            } else {
                let v = rec.verdicts.as_ref().expect("check verdicts");
                println!("curve: {}", rec.curve);
                println!("genus: {}", rec.genus);
                println!("L(T) = {}", r.lpoly.render());
                println!("slopes: {}", rec.slopes.join(" "));
                println!("first slope: {}", rec.first_slope.as_deref().unwrap_or("none"));
                println!("supersingular: {}", rec.supersingular);
                println!("sigma: {}  first slope >= 1/sigma: {}", v.sigma, v.sigma_bound);
                println!("tau: {}  first slope >= 1/tau: {}", v.tau, v.tau_bound);
                println!("p-rank 0: {}", v.p_rank_zero);
                println!("coefficient divisibility: {}", v.coeff_divisibility);
                for s in &v.sn {
                    let ord = s.ord.map_or("inf".to_string(), |o| o.to_string());
                    println!("S_{} = {}  ord {} >= {}: {}", s.n, s.s_n, ord, s.required, s.holds);
                }
                println!("improved Hasse-Weil: {}", v.improved_hw);
                let fc = v.family_consistent.map_or("n/a".into(), |b| b.to_string());
                println!("family: {}  consistent: {}", v.family, fc);
                println!("verdict: {}", if ok { "PASS" } else { "FAIL" });
                for name in &v.violations {
                    println!("violation: {name}");
                }
            }
            Ok(ok)
        }
        Command::Bounds { p, s, u, d, n } => {
            if *n == 0 {
                return Err(Failure::Usage("n must be at least 1".into()));
            }
            let r = bounds::improved_hw(*p, *s, *u, *d, *n)?;
            let rec = BoundRecord::from(&r);
            if cli.json {
                print_json(&rec);
            } else {
                println!("genus: {}", rec.genus);
                println!("tau: {}", rec.tau);
                println!("classic bound: {}", rec.hw_classic);
                println!("improved bound: {}", rec.hw_improved);
                println!("divisibility: p^{}", rec.divisibility_exponent);
            }
            Ok(true)
        }
        Command::Examples => {
            let checks = bounds::published_examples();
            if cli.json {
                let recs: Vec<ExampleRecord> = checks.iter().map(ExampleRecord::from).collect();
                print_json(&recs);
            } else {
                for e in &checks {
                    println!(
                        "{} {}: improved {} exponent {} (published {} exponent {})",
                        e.name,
                        e.status().label(),
                        e.report.hw_improved,
                        e.report.divisibility_exponent,
                        e.published_value,
                        e.published_exponent
                    );
                    if let Some(note) = e.note {
                        println!("  note: {note}");
                    }
                }
            }
            Ok(checks.iter().all(|e| e.status() != Status::Fail))
        }
        Command::Tiling { r, set, p, d } => tiling_cmd(cli.json, *r, set, *p, *d),
        Command::SeriesVerify { which } => series_cmd(cli.json, *which),
        Command::Scan {
            family,
            out,
            verify,
        } => {
            let curves = scan::family_curves(family).map_err(Failure::Usage)?;
            let summary = scan::run(&curves, out, *verify, budget)
                .map_err(|e| Failure::Usage(format!("{}: {e}", out.display())))?;
            println!(
                "{} curves, {} skipped, {} written, {} with violations, {} errors",
                curves.len(),
                summary.skipped,
                summary.written,
                summary.violations,
                summary.errors
            );
            Ok(summary.violations == 0)
        }
    }
}

#[derive(Serialize)]
struct TilingRecord {
    r: u64,
    set: Vec<u64>,
    p: u64,
    tilde_s: Option<u64>,
    shortest: Vec<String>,
    bijection: Option<BijectionRecord>,
}

#[derive(Serialize)]
struct BijectionRecord {
    d: usize,
    tilings: usize,
    constrained: usize,
    minimal: usize,
    holds: bool,
    violation: Option<String>,
}

fn tiling_cmd(json: bool, r: u64, set: &str, p: u64, d: Option<usize>) -> Outcome {
    let s: BTreeSet<u64> = set
        .split(',')
        .map(|t| t.trim().parse::<u64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("bad multiplier set {set:?}")))?;
    slopekit_core::arith::require_prime(p)?;
    let w = tiling::tilde_s(r, &s, p)?;
    let shortest = match w {
        TilingWeight::Finite(_) => tiling::shortest_tilings(r, &s, p)?,
        TilingWeight::Infinite => Vec::new(),
    };
    let bijection = match d {
        Some(d) => {
            let b = tiling::bijection_check(r, &s, p, d)?;
            Some(BijectionRecord {
                d,
                tilings: b.tilings,
                constrained: b.constrained,
                minimal: b.minimal,
                holds: b.holds(),
                violation: b.violation.as_ref().map(|v| v.to_string()),
            })
        }
        None => None,
    };
    let ok = bijection.as_ref().is_none_or(|b| b.holds);
    let rec = TilingRecord {
        r,
        set: s.into_iter().collect(),
        p,
        tilde_s: w.finite(),
        shortest: shortest.iter().map(|t| t.to_string()).collect(),
        bijection,
    };
    if json {
        print_json(&rec);
    } else {
        println!("tilde_s = {w}");
        for t in rec.shortest.iter().take(20) {
            println!("  {t}");
        }
        if rec.shortest.len() > 20 {
            println!("  ... {} shortest tilings in total", rec.shortest.len());
        }
        if let Some(b) = &rec.bijection {
            println!(
                "bijection (d={}): {} tilings, {} minimal of {} constrained partitions: {}",
                b.d,
                b.tilings,
                b.minimal,
                b.constrained,
                if b.holds { "PASS" } else { "FAIL" }
            );
            if let Some(v) = &b.violation {
                println!("  {v}");
            }
        }
    }
    Ok(ok)
}

#[derive(Serialize)]
struct GridRecord {
    name: &'static str,
    checked: usize,
    failed: usize,
    passed: bool,
    first_failure: Option<String>,
    note: Option<String>,
}

fn series_cmd(json: bool, which: Which) -> Outcome {
    let sel = |w: Which| matches!(which, Which::All) || std::mem::discriminant(&which) == std::mem::discriminant(&w);
    let mut grids: Vec<GridResult> = Vec::new();
    if sel(Which::Y) {
        grids.push(suite::grid_y(&[2, 3, 4, 9], 200)?);
    }
    if sel(Which::D) {
        grids.push(suite::grid_d(&[2, 3, 4], 6, 40)?);
        grids.push(suite::grid_dk(&[2, 3, 4], 6, 40)?);
    }
    if sel(Which::E) {
        grids.push(suite::grid_e(&[2, 3, 4, 9], &[1, 2], 40)?);
    }
    if sel(Which::C) {
        grids.push(suite::grid_c(&[2, 3], &[1, 2], 60, 3, 11)?);
        grids.push(suite::grid_valuation(&[2, 3], 80, 3, 13)?);
        grids.push(suite::grid_modular(&[2, 3, 4], 40, 4, 17)?);
    }
    if sel(Which::Rel) {
        grids.push(suite::grid_rel(&[2, 3, 4], 40, 3, 19)?);
    }
    if sel(Which::Cmod) {
        grids.push(suite::grid_cmod(&[(2, 2, 1, 1), (2, 2, 1, 2), (3, 1, 1, 1), (3, 1, 2, 1)])?);
    }
    let ok = grids.iter().all(GridResult::passed);
    if json {
        let recs: Vec<GridRecord> = grids
            .into_iter()
            .map(|g| GridRecord {
                passed: g.passed(),
                name: g.name,
                checked: g.checked,
                failed: g.failed,
                first_failure: g.first_failure,
                note: g.note,
            })
            .collect();
        print_json(&recs);
    } else {
        for g in &grids {
            println!(
                "{:<8} {}  {}/{} failed",
                g.name,
                if g.passed() { "PASS" } else { "FAIL" },
                g.failed,
                g.checked
            );
            if let Some(f) = &g.first_failure {
                println!("         first: {f}");
            }
            if let Some(n) = &g.note {
                println!("         note: {n}");
            }
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Verification(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
