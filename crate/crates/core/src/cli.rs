//! Command-line front end. Each subcommand runs one experiment and writes a
//! single run record; exit status is 0 on success, 1 on a domain error and
//! 2 on a usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::asymptotics::{
    coprime_density, fill_density, k_estimator, uw_sweep, EstimatorReport, LatticeBase, NeighborhoodSpec, SamplingMode,
};
use crate::error::{Error, Result};
use crate::relations::{self, minimize_l, GridSpec, UWPair};
use crate::report::{self, Results, RunRecord};
use crate::scan;
use crate::semigroup::{self, GeneratorTuple};

#[derive(Debug, Parser)]
#[command(
    name = "numsg",
    version,
    about = "Numerical semigroups with three generators: invariants, closed forms and sweeps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Write the run record here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Omit wall-clock fields so reruns are byte-identical.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full profile of S(d1, d2[, d3]).
    Analyze {
        #[arg(num_args = 2..=3, required = true)]
        gens: Vec<u64>,
    },
    /// Relation matrix, (u, w) form, closed forms and the conductor lower bound.
    Relations {
        #[arg(num_args = 3, required = true)]
        gens: Vec<u64>,
    },
    /// Check closed forms and criteria on every minimal coprime triple with d3 <= B.
    Scan {
        #[arg(long)]
        dmax: u64,
        /// Also recompute invariants by direct enumeration.
        #[arg(long)]
        verify: bool,
    },
    /// Estimators over the neighborhood N*base + j, |j_k| <= r.
    SweepD {
        #[arg(long, value_delimiter = ',', required = true)]
        base: Vec<u64>,
        #[arg(long = "N", required_unless_present = "series")]
        n: Option<u64>,
        #[arg(long)]
        r: u64,
        #[command(flatten)]
        sampling: Sampling,
        /// Run once per listed N (replaces --N).
        #[arg(long, value_delimiter = ',')]
        series: Option<Vec<u64>>,
    },
    /// Closed-form averages over the six-dimensional (u, w) neighborhood.
    SweepUw {
        #[arg(long, value_delimiter = ',', required = true)]
        u: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        w: Vec<u64>,
        #[arg(long = "N")]
        n: u64,
        #[arg(long)]
        r: u64,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Share of random m-tuples with gcd 1, against 1/zeta(m).
    Density {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=4))]
        m: u32,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        lo: u64,
        #[arg(long, default_value_t = 1_000_000_000)]
        hi: u64,
    },
    /// Occupancy histogram of S on [0, C) against (s/C)^(m-1).
    Fill {
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<u64>,
        #[arg(long)]
        bins: usize,
    },
    /// Minimize L(rho) over a log-spaced cube.
    AppendixMin {
        #[arg(long = "box", value_delimiter = ',', required = true)]
        bounds: Vec<f64>,
        #[arg(long)]
        points: usize,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Sampling {
    /// Visit this many seeded random points instead of the whole neighborhood.
    #[arg(long, requires = "seed")]
    pub sample: Option<u64>,
    #[arg(long, requires = "sample")]
    pub seed: Option<u64>,
}

impl Sampling {
    fn mode(self) -> SamplingMode {
        match (self.sample, self.seed) {
            (Some(count), Some(seed)) => SamplingMode::Sampled { count, seed },
            _ => SamplingMode::Exhaustive,
        }
    }
}

fn triple(xs: &[u64], what: &str) -> Result<[u64; 3]> {
    xs.try_into()
        .map_err(|_| Error::InvalidGenerators(format!("{what} needs three entries, got {xs:?}")))
}

/// A validated plan: everything needed to compute, with no work done yet.
enum Plan {
    Analyze(GeneratorTuple),
    Relations(GeneratorTuple),
    Scan {
        dmax: u64,
        verify: bool,
    },
    Sweep(Vec<NeighborhoodSpec>),
    Density {
        m: u32,
        samples: u64,
        seed: u64,
        lo: u64,
        hi: u64,
    },
    Fill {
        gens: GeneratorTuple,
        bins: usize,
    },
    AppendixMin(GridSpec),
}

fn plan(cmd: &Command) -> Result<(Plan, serde_json::Value, Option<u64>)> {
    Ok(match cmd {
        Command::Analyze { gens } => {
            let g = GeneratorTuple::from_slice(gens)?;
            g.require_coprime()?;
            (Plan::Analyze(g), json!({ "generators": gens }), None)
        }
        Command::Relations { gens } => {
            let g = GeneratorTuple::from_slice(gens)?;
            g.require_coprime()?;
            (Plan::Relations(g), json!({ "generators": gens }), None)
        }
        Command::Scan { dmax, verify } => {
            if *dmax < 5 {
                return Err(Error::Domain(format!("dmax must be at least 5, got {dmax}")));
            }
            (
                Plan::Scan {
                    dmax: *dmax,
                    verify: *verify,
                },
                json!({ "dmax": dmax, "verify": verify }),
                None,
            )
        }
        Command::SweepD {
            base,
            n,
            r,
            sampling,
            series,
        } => {
            let g = GeneratorTuple::from_slice(base)?;
            if !(2..=3).contains(&g.len()) {
                return Err(Error::InvalidGenerators(format!(
                    "base needs two or three entries, got {base:?}"
                )));
            }
            let ns = series.clone().unwrap_or_else(|| n.iter().copied().collect());
            let specs: Vec<NeighborhoodSpec> = ns
                .iter()
                .map(|&n| NeighborhoodSpec::d_lattice(g.clone(), n, *r, sampling.mode()))
                .collect();
            for s in &specs {
                s.validate()?;
                warn_on_wide_radius(s);
            }
            (
                Plan::Sweep(specs.clone()),
                json!({ "neighborhoods": specs }),
                sampling.seed,
            )
        }
        Command::SweepUw { u, w, n, r, sampling } => {
            let uw = UWPair::new(triple(u, "--u")?, triple(w, "--w")?)?;
            relations::validate_uw(&uw)?;
            let spec = NeighborhoodSpec::uw_lattice(uw, *n, *r, sampling.mode());
            spec.validate()?;
            warn_on_wide_radius(&spec);
            (
                Plan::Sweep(vec![spec.clone()]),
                json!({ "neighborhoods": [spec] }),
                sampling.seed,
            )
        }
        Command::Density {
            m,
            samples,
            seed,
            lo,
            hi,
        } => {
            if *samples < crate::asymptotics::MIN_DENSITY_SAMPLES {
                return Err(Error::Domain(format!(
                    "need at least {} samples, got {samples}",
                    crate::asymptotics::MIN_DENSITY_SAMPLES
                )));
            }
            if *lo == 0 || lo > hi {
                return Err(Error::Domain(format!("invalid range [{lo}, {hi}]")));
            }
            let echo = json!({ "m": m, "samples": samples, "seed": seed, "lo": lo, "hi": hi });
            (
                Plan::Density {
                    m: *m,
                    samples: *samples,
                    seed: *seed,
                    lo: *lo,
                    hi: *hi,
                },
                echo,
                Some(*seed),
            )
        }
        Command::Fill { gens, bins } => {
            let g = GeneratorTuple::from_slice(gens)?;
            g.require_coprime()?;
            (
                Plan::Fill { gens: g, bins: *bins },
                json!({ "generators": gens, "bins": bins }),
                None,
            )
        }
        Command::AppendixMin { bounds, points } => {
            let [lo, hi] = bounds[..] else {
                return Err(Error::Domain(format!("--box needs lo,hi, got {bounds:?}")));
            };
            let grid = GridSpec {
                lo,
                hi,
                points: *points,
            };
            (Plan::AppendixMin(grid), json!({ "grid": grid }), None)
        }
    })
}

fn warn_on_wide_radius(spec: &NeighborhoodSpec) {
    if 10 * spec.r > spec.n {
        log::warn!(
            "radius r={} exceeds N/10 for N={}; finite-size effects are large",
            spec.r,
            spec.n
        );
    }
}

fn execute(plan: Plan) -> Result<Results> {
    Ok(match plan {
        Plan::Analyze(g) => Results::Profile(semigroup::profile(&g)?),
        Plan::Relations(g) => Results::Relations(relations::summarize(&g)?),
        Plan::Scan { dmax, verify } => Results::Scan(scan::scan(dmax, verify)?),
        Plan::Sweep(specs) => Results::Sweep(
            specs
                .iter()
                .map(|s| match s.base {
                    LatticeBase::D { .. } => k_estimator(s),
                    LatticeBase::Uw { .. } => uw_sweep(s),
                })
                .collect::<Result<_>>()?,
        ),
        Plan::Density {
            m,
            samples,
            seed,
            lo,
            hi,
        } => Results::Density(coprime_density(m, samples, seed, lo, hi)?),
        Plan::Fill { gens, bins } => Results::Fill(fill_density(&gens, bins)?),
        Plan::AppendixMin(grid) => Results::AppendixMin(minimize_l(&grid)?),
    })
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".to_string(), |v| format!("{v:.6}"))
}

fn sweep_line(r: &EstimatorReport) -> String {
    let mut s = format!(
        "N={} r={} points={} admissible={} symmetric_fraction={} K_est={} p_est={} q_est={}",
        r.spec.n,
        r.spec.r,
        r.total_points,
        r.admissible_count,
        fmt_opt(r.symmetric_fraction),
        fmt_opt(r.k_est),
        fmt_opt(r.p_est),
        fmt_opt(r.q_est),
    );
    if let Some(b) = r.k_lower_bound {
        let _ = write!(s, " K_lower_bound={b:.6}");
    }
    if let (Some(k), Some(q)) = (r.k_target, r.q_target) {
        let _ = write!(s, " K_target={k:.6} q_target={q:.6}");
    }
    if r.closed_form_checked > 0 {
        let _ = write!(
            s,
            " closed_form_mismatches={}/{}",
            r.closed_form_mismatches, r.closed_form_checked
        );
    }
    if let Some(reason) = &r.reason {
        let _ = write!(s, " ({reason})");
    }
    s
}

/// Short human-readable account of a result.
pub fn summary(results: &Results) -> String {
    let mut s = String::new();
    match results {
        Results::Profile(p) => {
            let _ = writeln!(
                s,
                "S{}: F={} C={} G={} nongaps={} t={} symmetric={} p={} q={}",
                p.generators, p.frobenius, p.conductor, p.genus, p.nongaps, p.type_, p.symmetric, p.p, p.q
            );
            let _ = writeln!(s, "pseudo-Frobenius: {:?}", p.pseudo_frobenius);
        }
        Results::Relations(r) => {
            let _ = writeln!(
                s,
                "S{}: C={} G={} symmetric={}",
                r.generators, r.conductor, r.genus, r.symmetric
            );
            match &r.matrix {
                Some(m) => {
                    let _ = writeln!(s, "relation matrix:");
                    for row in m.signed() {
                        let _ = writeln!(s, "  {row:?}");
                    }
                }
                None => {
                    let _ = writeln!(s, "relation matrix: not unique (symmetric semigroup)");
                }
            }
            if let Some(uw) = &r.uw {
                let _ = writeln!(s, "u={:?} w={:?}", uw.u(), uw.w());
            }
            if let (Some(c), Some(g)) = (r.closed_form_conductor, r.closed_form_genus) {
                let _ = writeln!(
                    s,
                    "closed form: C={c} G={g} min(A3,B3)={}",
                    r.min_term.unwrap_or_default()
                );
            }
            if let (Some(k), Some(q), Some(p)) = (r.k, r.q, r.p) {
                let _ = writeln!(s, "K={k:.6} Q={q} P={p:.6}");
            }
            let _ = writeln!(s, "conductor lower bound: {:.6}", r.lower_bound);
        }
        Results::Scan(r) => {
            let _ = writeln!(
                s,
                "{} minimal triples with d3 <= {} ({} symmetric, {} non-symmetric): {}",
                r.triples,
                r.dmax,
                r.symmetric,
                r.nonsymmetric,
                if r.is_clean() {
                    "all checks hold"
                } else {
                    "VIOLATIONS FOUND"
                }
            );
            for e in &r.examples {
                let _ = writeln!(s, "  {e}");
            }
        }
        Results::Sweep(reps) => {
            for r in reps {
                let _ = writeln!(s, "{}", sweep_line(r));
            }
        }
        Results::Density(d) => {
            let _ = writeln!(
                s,
                "m={} samples={} coprime fraction={:.6} 1/zeta(m)={:.6} deviation={:+.6}",
                d.m, d.samples, d.fraction, d.target, d.deviation
            );
        }
        Results::Fill(f) => {
            let _ = writeln!(
                s,
                "S{}: C={} mean occupancy={} p={}",
                f.generators, f.conductor, f.mean_occupancy, f.profile_p
            );
            for (k, b) in f.bins.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "  bin {k:>3} [{}, {}): empirical={:.4} conjectured={:.4}",
                    b.lo, b.hi, b.empirical, b.conjectured
                );
            }
            let _ = writeln!(
                s,
                "L1 distance={:.6} conjectured integral={}",
                f.l1_distance, f.conjectured_integral
            );
        }
        Results::AppendixMin(m) => {
            let _ = writeln!(s, "grid minimum L={:.12} at {:?}", m.grid_value, m.grid_argmin);
            let _ = writeln!(s, "refined minimum L={:.12} at {:?}", m.value, m.argmin);
            for p in &m.planes {
                let _ = writeln!(s, "  plane {:?}: L={:.12} at {:?}", p.plane, p.value, p.argmin);
            }
        }
    }
    s
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .try_init();
}

fn run_parsed(cli: &Cli, command_line: String) -> Result<()> {
    let (plan, echo, seed) = plan(&cli.command)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.common.threads)
        .build()
        .map_err(|e| Error::Domain(format!("cannot start thread pool: {e}")))?;
    let results = pool.install(|| execute(plan))?;
    let mut record = RunRecord::new(command_line, echo, results, seed);
    if cli.common.no_timestamp {
        record = record.without_timing();
    }
    let text = summary(&record.results);
    let mut buf = Vec::new();
    match cli.common.format {
        Format::Json => report::write_json(&record, &mut buf)?,
        Format::Csv => report::write_csv(std::slice::from_ref(&record), &mut buf)?,
    }
    match &cli.common.out {
        Some(path) => {
            std::fs::write(path, &buf)?;
            print!("{text}");
        }
        None => {
            eprint!("{text}");
            std::io::stdout().write_all(&buf)?;
        }
    }
    Ok(())
}

/// Parse `args` (program name first), run one subcommand and return the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    init_logging(cli.common.verbose);
    let command_line = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    match run_parsed(&cli, command_line) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> std::result::Result<Cli, clap::Error> {
        Cli::try_parse_from(std::iter::once("numsg").chain(args.iter().copied()))
    }

    #[test]
    fn grammar() {
        assert!(parse(&["analyze", "3", "4", "5"]).is_ok());
        assert!(parse(&["analyze", "3"]).is_err());
        assert!(parse(&["relations", "4", "5"]).is_err());
        assert!(parse(&["sweep-d", "--base", "3,5,7", "--N", "10", "--r", "2"]).is_ok());
        assert!(parse(&["sweep-d", "--base", "3,5,7", "--series", "10,20", "--r", "2"]).is_ok());
        assert!(parse(&["sweep-d", "--base", "3,5,7", "--N", "10", "--r", "2", "--sample", "5"]).is_err());
        assert!(parse(&["density", "--m", "3", "--samples", "10000"]).is_err());
        assert!(parse(&["density", "--m", "5", "--samples", "10000", "--seed", "1"]).is_err());
        assert!(parse(&["appendix-min", "--box", "0.125,8", "--points", "33", "--format", "csv"]).is_ok());
    }

    #[test]
    fn plans_validate_before_running() {
        let cli = parse(&["analyze", "4", "6", "8"]).unwrap();
        assert!(matches!(plan(&cli.command), Err(Error::NonCoprime(..))));
        let cli = parse(&["sweep-d", "--base", "3,5,7", "--N", "10", "--r", "10"]).unwrap();
        assert!(matches!(plan(&cli.command), Err(Error::RadiusTooLarge { .. })));
        let cli = parse(&["sweep-uw", "--u", "2,1", "--w", "1,1,1", "--N", "10", "--r", "1"]).unwrap();
        assert!(plan(&cli.command).is_err());
    }

    #[test]
    fn relations_summary_text() {
        let g = GeneratorTuple::from_slice(&[4, 5, 11]).unwrap();
        let text = summary(&Results::Relations(relations::summarize(&g).unwrap()));
        assert!(text.contains("u=[3, 1, 1] w=[1, 2, 1]"));
        assert!(text.contains("C=8 G=5"));
        assert!(text.contains("Q=2/27"));
        assert!(text.contains("K=1.820"));
    }
}
