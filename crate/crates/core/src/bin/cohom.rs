use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use gf_cohom::coboundary::{apply_d, Operator};
use gf_cohom::cochain::{omega, write_vectors, Algebra};
use gf_cohom::config::Config;
use gf_cohom::linformgb::{normal_form, LinearForm};
use gf_cohom::pipeline::{feasible_degrees, write_output, Session, Verdict};
use gf_cohom::polyalg::check_sl2_relations;

#[derive(Parser)]
#[command(name = "cohom", version, about = "Relative Gel'fand-Fuks cohomology of formal Hamiltonian vector fields on the plane")]
struct Cli {
    /// Worker threads (default: all cores). Outputs do not depend on this.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// File of `key = value` lines; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for resumable basis/matrix checkpoints.
    #[arg(long, global = true)]
    checkpoint_dir: Option<PathBuf>,
    /// Wall-clock budget in seconds; blocks past it are reported as gaps.
    #[arg(long, global = true)]
    time_budget: Option<f64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgebraArg {
    Ham,
    Ham0,
}

impl From<AlgebraArg> for Algebra {
    fn from(a: AlgebraArg) -> Self {
        match a {
            AlgebraArg::Ham => Algebra::Ham,
            AlgebraArg::Ham0 => Algebra::Ham0,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Basis,
    Matrix,
    ImageGb,
    KernelGb,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dimensions, ranks and Betti numbers.
    Table {
        #[arg(long, value_enum)]
        algebra: AlgebraArg,
        #[arg(long, allow_hyphen_values = true)]
        weight: i32,
        /// `a..b` (inclusive) or a single degree; default is every feasible degree.
        #[arg(long, value_parser = parse_degrees)]
        degrees: Option<RangeInclusive<usize>>,
        /// Drop the k2 = 0 condition (all sp(2)-invariant cochains).
        #[arg(long)]
        absolute: bool,
        #[arg(long)]
        json: bool,
        /// Expected Betti numbers, comma separated; exit 2 on mismatch.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Cocycles spanning H^m modulo coboundaries.
    Generator {
        #[arg(long, value_enum)]
        algebra: AlgebraArg,
        #[arg(long, allow_hyphen_values = true)]
        weight: i32,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Decide whether omega ^ - maps H(ham0)_w isomorphically to H(ham)_{w-2}.
    Factorize {
        #[arg(long)]
        weight: i32,
        /// Source degree; default is the unique degree with nonzero Betti number.
        #[arg(long)]
        degree: Option<usize>,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Expected verdict; exit 2 on mismatch.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Write a basis, coboundary matrix or echelon basis as text.
    Export {
        #[arg(long, value_enum)]
        what: What,
        #[arg(long, value_enum)]
        algebra: AlgebraArg,
        #[arg(long, allow_hyphen_values = true)]
        weight: i32,
        /// Degree of the space (for `matrix`, of the source).
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        absolute: bool,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Quick internal consistency checks.
    Selftest,
}

fn parse_degrees(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected `a..b` or `a`, got `{s}`");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match setup(&cli).and_then(|(cfg, pool)| pool.install(|| run(&cli, &cfg))) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn setup(cli: &Cli) -> anyhow::Result<(Config, rayon::ThreadPool)> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p).with_context(|| format!("reading {}", p.display()))?,
        None => Config::default(),
    };
    if cli.jobs.is_some() {
        cfg.jobs = cli.jobs;
    }
    if cli.checkpoint_dir.is_some() {
        cfg.checkpoint_dir = cli.checkpoint_dir.clone();
    }
    if let Some(t) = cli.time_budget {
        if !(t.is_finite() && t >= 0.0) {
            bail!("--time-budget must be a non-negative number of seconds");
        }
        cfg.time_budget = Some(Duration::from_secs_f64(t));
    }
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.jobs {
        b = b.num_threads(n);
    }
    Ok((cfg, b.build()?))
}

fn run(cli: &Cli, cfg: &Config) -> anyhow::Result<ExitCode> {
    let session = Session::new(cfg);
    match &cli.cmd {
        Cmd::Table {
            algebra,
            weight,
            degrees,
            absolute,
            json,
            expect,
        } => {
            let a = Algebra::from(*algebra);
            let table = match degrees {
                Some(r) => session.cohomology_table(a, *weight, !absolute, r.clone())?,
                None => session.full_table(a, *weight, !absolute)?,
            };
            if *json {
                println!("{}", serde_json::to_string_pretty(&table)?);
            } else {
                print!("{table}");
            }
            if let Some(e) = expect {
                let want: Vec<usize> = e
                    .split(',')
                    .map(|x| x.trim().parse())
                    .collect::<Result<_, _>>()
                    .context("--expect wants comma-separated integers")?;
                let got: Vec<Option<usize>> = table.bettis();
                if got != want.iter().map(|&x| Some(x)).collect::<Vec<_>>() {
                    let shown: Vec<String> = got.iter().map(|b| b.map_or("-".into(), |b| b.to_string())).collect();
                    eprintln!("betti mismatch: expected {}, got {}", e.trim(), shown.join(","));
                    return Ok(ExitCode::from(2));
                }
            }
            if !table.is_complete() {
                eprintln!("table has gaps");
                return Ok(ExitCode::from(3));
            }
        }
        Cmd::Generator {
            algebra,
            weight,
            degree,
            out,
        } => {
            let g = session.generator((*algebra).into(), *weight, *degree)?;
            let mut s = format!(
                "# generators algebra={} weight={} degree={} count={}\n",
                g.algebra,
                g.weight,
                g.degree,
                g.generators.len()
            );
            write_vectors(&mut s, &g.generators);
            write_output(out, &s)?;
        }
        Cmd::Factorize {
            weight,
            degree,
            out,
            expect,
        } => {
            let r = session.factorize(*weight, *degree)?;
            if let Some(p) = out {
                write_output(p, &r.to_json())?;
            }
            let side = |s: &Option<gf_cohom::pipeline::SpaceSummary>| {
                s.as_ref().map_or("-".to_string(), |s| {
                    format!("{}(m={}, w={}) dim={} betti={}", s.algebra, s.degree, s.weight, s.dim, s.betti)
                })
            };
            println!("source: {}", side(&r.source));
            println!("target: {}", side(&r.target));
            if let (Some(e), Some(k), Some(t)) = (r.image_gb_source, r.kernel_gb_source, r.image_gb_target) {
                println!("|GB_e| = {e}, |GB_k| = {k}, |image GB (target)| = {t}");
            }
            println!("verdict: {} ({})", r.verdict, r.note);
            if let Some(e) = expect {
                let want: Verdict = e.parse()?;
                if want != r.verdict {
                    eprintln!("verdict mismatch: expected {want}, got {}", r.verdict);
                    return Ok(ExitCode::from(2));
                }
            }
        }
        Cmd::Export {
            what,
            algebra,
            weight,
            degree,
            absolute,
            out,
        } => {
            let (a, rel, m, w) = ((*algebra).into(), !absolute, *degree, *weight);
            let text = match what {
                What::Basis => session.basis(a, rel, m, w)?.to_text(),
                What::Matrix => session.matrix(a, rel, m, w)?.matrix.to_text(),
                What::ImageGb => session.image_gb(a, rel, m, w)?.to_text(),
                What::KernelGb => session.kernel_gb(a, rel, m, w)?.to_text(),
            };
            write_output(out, &text)?;
        }
        Cmd::Selftest => return selftest(&session),
    }
    Ok(ExitCode::SUCCESS)
}

fn selftest(session: &Session) -> anyhow::Result<ExitCode> {
    let mut ok = true;
    let mut report = |name: &str, pass: bool| {
        println!("[{}] {name}", if pass { "PASS" } else { "FAIL" });
        ok &= pass;
    };
    report("sl(2) relations up to degree 10", check_sl2_relations(10).is_ok());
    let om = omega();
    report("d0 omega = 0", apply_d(&om, Operator::D0)?.is_zero());
    let b = session.basis(Algebra::Ham, true, 2, -2)?;
    let coords = b.expand(&om)?;
    let gb = session.image_gb(Algebra::Ham, true, 2, -2)?;
    report(
        "omega is not exact",
        !normal_form(&LinearForm::from_terms(b.dim(), coords), &gb).is_zero(),
    );
    let t = session.full_table(Algebra::Ham, 8, true)?;
    let nz: Vec<(usize, usize)> = t
        .rows
        .iter()
        .filter_map(|r| r.betti.filter(|&x| x > 0).map(|x| (r.degree, x)))
        .collect();
    report("H(ham)_8 is one-dimensional in degree 7", nz == [(7, 1)]);
    let ds = feasible_degrees(Algebra::Ham0, 10, true);
    let t = session.cohomology_table(Algebra::Ham0, 10, true, ds[0]..=*ds.last().unwrap())?;
    report("H^5(ham0)_10 has dimension 1", t.row(5).and_then(|r| r.betti) == Some(1));
    report("omega ^ - at weight 10 is an isomorphism", session.factorize(10, Some(5))?.verdict == Verdict::Isomorphism);
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
}
