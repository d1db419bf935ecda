//! `blaschke`: classification, boundary dynamics and radical diagnostics for
//! finite Blaschke products from the command line.
//!
//! Exit codes: 0 success, 2 input validation, 3 numerical failure,
//! 4 classification mismatch.

mod input;
mod report;

use anyhow::{anyhow, Context, Result};
use blaschke_core::dynamics::{
    backward_orbit_sample_with, recurrent_closure, recurrent_points_dense, BranchRule, ClosureMode,
    SampleOptions,
};
use blaschke_core::semicrossed::{
    ergodic_lower_bound, is_semisimple, monomial_spectral_radius, periodic_lower_bound,
    quasinilpotent_witness, radical_membership, witness_diagnostics, RadicalOptions,
    RadicalVerdict, SemicrossedElement, SpectralRadiusEstimate, SAMPLE_GRID,
};
use blaschke_core::{blaschke, classify, Classification, Error, FiniteBlaschkeProduct, Kind};
use clap::{Args, Parser, Subcommand, ValueEnum};
use input::{InputError, MapSpec};
use report::{fmt_complex, JuliaStats, Report, SpectralTable};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "blaschke", version, about = "Boundary dynamics of finite Blaschke products and radical diagnostics for their semicrossed products")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MapArgs {
    /// Map as a JSON document or a path to one: {"u":[re,im],"zeros":[[re,im],...]}
    #[arg(long, conflicts_with_all = ["zeros", "u"])]
    map: Option<String>,
    /// Zeros as `re,im` pairs or literals such as `0.3-0.2i`, separated by `;` (repeatable)
    #[arg(long, allow_hyphen_values = true)]
    zeros: Vec<String>,
    /// Unimodular factor, same syntax as a zero [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    u: Option<String>,
    /// Write the JSON report to this path
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Gap,
    Uniform,
}

#[derive(Args)]
struct SampleArgs {
    /// Number of backward-orbit points
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    points: u64,
    #[arg(long, default_value_t = 50)]
    burnin: usize,
    #[arg(long, env = "BLASCHKE_SEED", default_value_t = 0)]
    seed: u64,
    /// Arc length used for the covered fraction
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    /// Branch choice for the backward orbit
    #[arg(long, value_enum, default_value_t = Rule::Gap)]
    rule: Rule,
}

impl SampleArgs {
    fn options(&self) -> Result<SampleOptions> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(InputError(format!("--eps must be positive, got {}", self.eps)).into());
        }
        Ok(SampleOptions {
            n_points: self.points as usize,
            burn_in: self.burnin,
            seed: self.seed,
            epsilon: self.eps,
            rule: match self.rule {
                Rule::Gap => BranchRule::GapFilling,
                Rule::Uniform => BranchRule::Uniform,
            },
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Kind, Denjoy-Wolff point, multiplier, step and semi-simplicity
    Classify {
        #[command(flatten)]
        map: MapArgs,
    },
    /// Backward-orbit sample of the Julia set
    Julia {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        sample: SampleArgs,
        /// Output file; the sample goes to stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format [default: from the file extension, else csv]
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Jacobson-radical membership of a semicrossed element
    Radical {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        sample: SampleArgs,
        /// Element as JSON or a path: {"terms":[{"k":1,"coeffs":[[re,im],...]}]}
        #[arg(long)]
        element: String,
        /// Threshold relative to the upper norm bound of the element
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Grid size when the recurrent points are dense
        #[arg(long, default_value_t = SAMPLE_GRID)]
        grid: usize,
        /// Largest period searched for a periodic certificate
        #[arg(long, default_value_t = 4)]
        periodic_depth: usize,
    },
    /// Spectral-radius table for a single-term element U^n f
    Spectral {
        #[command(flatten)]
        map: MapArgs,
        /// Single-term element as JSON or a path
        #[arg(long, conflicts_with_all = ["monomial", "f"])]
        element: Option<String>,
        /// Power n of U
        #[arg(long, requires = "f")]
        monomial: Option<usize>,
        /// Coefficients of f, lowest degree first, e.g. `-1;1` for z - 1
        #[arg(long, requires = "monomial", allow_hyphen_values = true)]
        f: Option<String>,
        #[arg(long, default_value_t = 50)]
        depth: usize,
        #[arg(long, default_value_t = SAMPLE_GRID)]
        grid: usize,
        #[arg(long, default_value_t = 4)]
        periodic_depth: usize,
    },
    /// Peak-polynomial quasinilpotent element outside the radical
    Witness {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long, default_value_t = 400)]
        peak_power: usize,
        /// Rows of the decay table
        #[arg(long, default_value_t = 20)]
        depth: usize,
        /// Write the element U f as JSON to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Witness diagnostics for any map, including the unresolved
    /// zero-step parabolic case; reports numbers only
    Experiment {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long, default_value_t = 400)]
        peak_power: usize,
        #[arg(long, default_value_t = 50)]
        depth: usize,
    },
}

struct Loaded {
    spec: MapSpec,
    phi: FiniteBlaschkeProduct,
    cl: Classification,
    semisimple: bool,
    json: Option<PathBuf>,
}

impl Loaded {
    fn new(args: &MapArgs) -> Result<Self> {
        let spec = input::map_spec(args.map.as_deref(), &args.zeros, args.u.as_deref())?;
        let phi = spec.build()?;
        let cl = classify::classify(&phi)?;
        Ok(Self {
            semisimple: is_semisimple(&cl),
            spec,
            phi,
            cl,
            json: args.json.clone(),
        })
    }

    fn summary(&self) -> String {
        report::summary(&self.cl, self.semisimple)
    }

    fn report(&self, command: &'static str, seed: u64) -> Report {
        let tolerances = BTreeMap::from([
            ("unimodular", blaschke::UNIMODULAR_TOLERANCE),
            ("zero_margin", blaschke::ZERO_MARGIN),
            ("fixed_point", blaschke::FIXED_POINT_TOLERANCE),
            ("boundary_band", classify::BOUNDARY_BAND),
            ("parabolic", classify::PARABOLIC_TOLERANCE),
            ("step", classify::STEP_TOLERANCE),
        ]);
        Report {
            tool_version: report::TOOL_VERSION,
            command,
            map: self.spec.clone(),
            classification: self.cl.clone(),
            step_criterion: self.cl.criterion_value,
            closure_mode: if recurrent_points_dense(&self.cl) {
                ClosureMode::FullCircle
            } else {
                ClosureMode::JuliaPlusDW
            },
            semisimple: self.semisimple,
            seed,
            tolerances,
            julia: None,
            radical: None,
            spectral: None,
            witness: None,
        }
    }

    fn finish(&self, report: &Report) -> Result<()> {
        if let Some(path) = &self.json {
            write_file(path, &serde_json::to_string_pretty(report)?)?;
        }
        Ok(())
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn print_table(est: &SpectralRadiusEstimate) {
    println!("   m  ||F^m||^(1/m)");
    for (m, v) in est.lower_bounds.iter().enumerate() {
        if *v >= 1e-4 {
            println!("{:>4}  {v:.6}", m + 1);
        } else {
            println!("{:>4}  {v:.6e}", m + 1);
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Classify { map } => {
            let l = Loaded::new(&map)?;
            println!("{}", l.summary());
            println!("{}", report::details(&l.cl));
            l.finish(&l.report("classify", 0))
        }
        Command::Julia {
            map,
            sample,
            out,
            format,
        } => {
            let l = Loaded::new(&map)?;
            let opts = sample.options()?;
            let js = backward_orbit_sample_with(&l.phi, &opts)?;
            let format = format.unwrap_or(match out.as_ref().and_then(|p| p.extension()) {
                Some(ext) if ext == "json" => Format::Json,
                _ => Format::Csv,
            });
            let body = match format {
                Format::Csv => js.to_csv(),
                Format::Json => serde_json::to_string_pretty(&js)?,
            };
            let line = format!(
                "covered_fraction={:.6} at eps={}; largest gap {:.6}; {} points",
                js.covered_fraction,
                opts.epsilon,
                js.largest_gap(),
                js.points.len()
            );
            match &out {
                Some(path) => {
                    write_file(path, &body)?;
                    println!("{line}");
                }
                None => {
                    print!("{body}");
                    eprintln!("{line}");
                }
            }
            let mut r = l.report("julia", opts.seed);
            r.tolerances.insert("epsilon", opts.epsilon);
            r.julia = Some(JuliaStats {
                n_points: js.points.len(),
                burn_in: js.burn_in,
                epsilon: opts.epsilon,
                covered_fraction: js.covered_fraction,
                largest_gap: js.largest_gap(),
                branch_rule: format!("{:?}", js.branch_rule),
            });
            l.finish(&r)
        }
        Command::Radical {
            map,
            sample,
            element,
            tol,
            grid,
            periodic_depth,
        } => {
            let l = Loaded::new(&map)?;
            let element = input::element(&element)?;
            if !(tol > 0.0) || grid == 0 {
                return Err(InputError("--tol and --grid must be positive".into()).into());
            }
            let opts = RadicalOptions {
                tol,
                grid,
                periodic_depth,
                sample: sample.options()?,
            };
            let verdict = radical_membership(&element, &l.phi, &l.cl, &opts)?;
            println!("{}", l.summary());
            match &verdict {
                RadicalVerdict::Zero => println!("Zero"),
                RadicalVerdict::InRadicalApprox(r) => {
                    println!("InRadicalApprox: max residual {r:.3e} on the recurrent closure")
                }
                RadicalVerdict::NotInRadical(w) => {
                    println!(
                        "NotInRadical: |f_{}({})| = {:.6}",
                        w.k,
                        fmt_complex(w.point),
                        w.value
                    );
                    if let Some((x, p, v)) = w.periodic {
                        println!("periodic certificate: |f_{}({})| = {v:.6}, period {p}", w.k, fmt_complex(x));
                    }
                }
            }
            let mut r = l.report("radical", opts.sample.seed);
            r.tolerances.insert("radical_tol", tol);
            r.radical = Some(verdict);
            l.finish(&r)
        }
        Command::Spectral {
            map,
            element,
            monomial,
            f,
            depth,
            grid,
            periodic_depth,
        } => {
            let l = Loaded::new(&map)?;
            let (n, f) = match (element, monomial, f) {
                (Some(e), _, _) => {
                    let e: SemicrossedElement = input::element(&e)?;
                    if e.len() != 1 {
                        return Err(InputError(format!(
                            "spectral needs a single-term element U^n f, got {} terms",
                            e.len()
                        ))
                        .into());
                    }
                    let (n, f) = e.terms().next().unwrap();
                    (n, f.clone())
                }
                (None, Some(n), Some(f)) => (n, input::disk_function(&f)?),
                _ => return Err(InputError("pass --element or --monomial with --f".into()).into()),
            };
            let estimate = monomial_spectral_radius(&l.phi, &f, n, depth, grid)?;
            let ergodic = if l.cl.kind == Kind::Elliptic && l.cl.denjoy_wolff.point.norm() < 1e-9 {
                Some(ergodic_lower_bound(&f, grid)?)
            } else {
                None
            };
            let periodic = periodic_lower_bound(&l.phi, &f, periodic_depth)?;
            println!("{}", l.summary());
            print_table(&estimate);
            match ergodic {
                Some(v) => println!("ergodic lower bound: {v:.6}"),
                None => println!("ergodic lower bound: n/a (needs an elliptic map fixing 0)"),
            }
            match periodic.witness {
                Some((x, p)) => println!(
                    "periodic bound: r(U^{p} f) >= {:.6}, from |f| at {} (period {p})",
                    periodic.bound,
                    fmt_complex(x)
                ),
                None => println!("periodic bound: 0"),
            }
            let mut r = l.report("spectral", 0);
            r.spectral = Some(SpectralTable {
                n,
                estimate,
                ergodic_lower_bound: ergodic,
                periodic_bound: periodic.bound,
                periodic_witness: periodic.witness,
            });
            l.finish(&r)
        }
        Command::Witness {
            map,
            sample,
            peak_power,
            depth,
            out,
        } => {
            let l = Loaded::new(&map)?;
            let opts = sample.options()?;
            if peak_power == 0 || depth == 0 {
                return Err(InputError("--peak-power and --depth must be positive".into()).into());
            }
            let (f, w) = quasinilpotent_witness(&l.phi, &l.cl, peak_power, depth, &opts)
                .map_err(|e| match e {
                    Error::WrongClassification { .. } => anyhow!(e).context(l.summary()),
                    e => e.into(),
                })?;
            println!("{}", l.summary());
            println!(
                "x0={} |phi(x0)-x0|={:.6}{}",
                fmt_complex(w.x0),
                w.separation,
                if w.separation_failed { " (separation failed)" } else { "" }
            );
            println!("s2={:.6e}", w.s2);
            println!("certificate |f(x0)|={:.6}", w.certificate);
            print_table(&w.decay);
            if let Some(path) = &out {
                let element = SemicrossedElement::monomial(1, f);
                write_file(path, &serde_json::to_string_pretty(&element)?)?;
            }
            let mut r = l.report("witness", opts.seed);
            r.witness = Some(w);
            l.finish(&r)
        }
        Command::Experiment {
            map,
            sample,
            peak_power,
            depth,
        } => {
            let l = Loaded::new(&map)?;
            let opts = sample.options()?;
            if peak_power == 0 || depth == 0 {
                return Err(InputError("--peak-power and --depth must be positive".into()).into());
            }
            let model = recurrent_closure(&l.phi, &l.cl, &opts)?;
            let (_, w) = witness_diagnostics(
                &l.phi,
                &model.sample_points(SAMPLE_GRID),
                peak_power,
                depth,
            )?;
            println!("{}", l.summary());
            println!("diagnostics only: no quasinilpotence verdict is drawn");
            println!(
                "x0={} |phi(x0)-x0|={:.6} s2={:.6e} certificate={:.6}",
                fmt_complex(w.x0),
                w.separation,
                w.s2,
                w.certificate
            );
            print_table(&w.decay);
            let mut r = l.report("experiment", opts.seed);
            r.witness = Some(w);
            l.finish(&r)
        }
    }
}

fn variant_name(e: &Error) -> String {
    let debug = format!("{e:?}");
    debug
        .split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or_default()
        .to_string()
}

fn exit_code(err: &anyhow::Error) -> (u8, Option<String>) {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            let code = match e {
                Error::WrongClassification { .. } => 4,
                e if e.is_validation() => 2,
                _ => 3,
            };
            return (code, Some(variant_name(e)));
        }
        if cause.downcast_ref::<InputError>().is_some() {
            return (2, None);
        }
    }
    (1, None)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (code, name) = exit_code(&err);
            match name {
                Some(name) => eprintln!("error: {name}: {err:#}"),
                None => eprintln!("error: {err:#}"),
            }
            ExitCode::from(code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_error_class() {
        let e = anyhow!(Error::ZeroOutsideDisk { index: 1, modulus: 1.2 });
        assert_eq!(exit_code(&e), (2, Some("ZeroOutsideDisk".into())));
        let e = anyhow!(Error::RootSolveFailure { sweeps: 1, worst: 1.0, residuals: vec![] });
        assert_eq!(exit_code(&e).0, 3);
        let e = anyhow!(Error::QuadratureDiverged { fraction: 0.5 }).context("spectral");
        assert_eq!(exit_code(&e).0, 3);
        let e = anyhow!(Error::WrongClassification { kind: Kind::Elliptic, step: blaschke_core::Step::Zero });
        assert_eq!(exit_code(&e).0, 4);
        assert_eq!(exit_code(&InputError("x".into()).into()).0, 2);
        assert_eq!(exit_code(&anyhow!("disk full")).0, 1);
    }
}
