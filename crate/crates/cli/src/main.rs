//! Command-line surface: one subcommand per module plus a `report` runner
//! that ties every headline number to a reproducible computation.
//!
//! Exit codes: 0 all checks pass, 1 numeric mismatch, 2 usage error.

mod report;

use clap::{Args, Parser, Subcommand};
use report::{ReportFormat, RunConfig};
use squash7_core::dirac::{self, Twist};
use squash7_core::geometry::{self, flow};
use squash7_core::index::{self, InstantonKind, P1Convention};
use squash7_core::instanton::{self, InstantonProfile, Y0};
use squash7_core::reptheory::{self, IrrepLabelG};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "squash7", version, about = "Squashed 7-sphere geometry, Dirac spectra and instanton moduli arithmetic", long_about = None)]
struct Cli {
    /// Dump the Lie algebra basis and structure constants as JSON and exit.
    #[arg(long, global = true)]
    dump_structure_constants: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Invariant 3-form solve and the metric flow
    Geometry {
        #[command(subcommand)]
        cmd: GeometryCmd,
    },
    /// Connection profiles on the conical background
    Instanton {
        #[command(subcommand)]
        cmd: InstantonCmd,
    },
    /// Representation carriers, Casimirs and branching
    Reps {
        #[command(subcommand)]
        cmd: RepsCmd,
    },
    /// Dirac blocks, spectra, candidates and critical rates
    Dirac {
        #[command(subcommand)]
        cmd: DiracCmd,
    },
    /// Fiber table, spectral flows, scalar family and indices
    Index {
        #[command(subcommand)]
        cmd: IndexCmd,
    },
    /// Full verification report
    Report(ReportArgs),
}

#[derive(Subcommand)]
enum GeometryCmd {
    /// Solve d(phi) = 4 psi within the invariant ansatz
    SolveG2,
    /// Integrate the metric flow and dump the path
    BsFlow(BsFlowArgs),
}

#[derive(Args)]
struct BsFlowArgs {
    #[arg(long, default_value_t = 1.0)]
    beta0: f64,
    #[arg(long, default_value_t = 100.0)]
    rmax: f64,
    /// relative tolerance on the conserved-quantity drift
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = PathFormat::Csv)]
    format: PathFormat,
    /// output file (stdout when omitted); relative paths land in
    /// SQUASH7_OUT_DIR when that is set
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, clap::ValueEnum)]
enum PathFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum InstantonCmd {
    /// Sample a connection profile; emits r, phi and the curvature residual
    Profile(ProfileArgs),
    /// Fit the asymptotic decay exponent of a profile
    Decay(DecayArgs),
}

#[derive(Args)]
struct ProfileArgs {
    /// family parameter, or "inf" for the limiting member
    #[arg(long)]
    y0: Y0,
    #[arg(long, default_value_t = 1.0)]
    beta0: f64,
    #[arg(long, default_value_t = 50.0)]
    rmax: f64,
    #[arg(long, value_enum, default_value_t = PathFormat::Csv)]
    format: PathFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecayArgs {
    #[arg(long)]
    y0: Y0,
    #[arg(long, default_value_t = 1.0)]
    beta0: f64,
    #[arg(long, default_value_t = 300.0)]
    rmax: f64,
}

#[derive(Subcommand)]
enum RepsCmd {
    /// Branch a carrier to the isotropy subgroup
    Branch {
        /// highest-weight label a,b,c
        #[arg(long)]
        label: String,
    },
    /// Casimir eigenvalue of a label
    Casimir {
        #[arg(long)]
        label: String,
    },
}

#[derive(Subcommand)]
enum DiracCmd {
    /// Eigenvalues of one Frobenius block of the Dirac family
    Spectrum {
        #[arg(long)]
        label: String,
        /// adjoint | none
        #[arg(long, default_value = "adjoint")]
        twist: String,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
    },
    /// Candidate labels below an eigenvalue-bound threshold
    Candidates {
        #[arg(long, default_value_t = 2.5)]
        threshold: f64,
    },
    /// Critical decay rates in an open interval
    CriticalRates {
        #[arg(long, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, allow_hyphen_values = true)]
        hi: f64,
    },
}

#[derive(Subcommand)]
enum IndexCmd {
    /// Fiber-operator spectrum on the twisted fiber
    Table1,
    /// Spectral flow of the connection family and of the metric family
    SpectralFlow,
    /// Scalar curvature of the squashing family
    ScalarFamily,
    /// Virtual dimension of the moduli space at a decay rate
    VirtualDim {
        /// family | limiting
        #[arg(long)]
        which: InstantonKind,
        #[arg(long, allow_hyphen_values = true)]
        nu: f64,
    },
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long, value_enum, default_value_t = ReportFormat::Markdown)]
    format: ReportFormat,
    #[arg(long, default_value_t = 1.0)]
    beta0: f64,
    /// comma-separated family parameters to validate
    #[arg(long, default_value = "0.1,1,10")]
    y0_list: String,
    /// tolerance for eigenvalue comparisons against the closed forms
    #[arg(long, default_value_t = 1e-9)]
    eig_tol: f64,
    /// tolerance for the flow and profile validations
    #[arg(long, default_value_t = 1e-7)]
    ode_tol: f64,
    /// rank cutoff for the intertwiner solve consistency section
    #[arg(long, default_value_t = reptheory::RANK_CUTOFF)]
    rank_cutoff: f64,
    /// first Pontryagin convention for the connect-sum comparison: 4a | 2a
    #[arg(long = "p1-hp2", default_value = "4a")]
    p1_hp2: P1Convention,
    /// include a timestamp line (off by default; reports are byte-stable)
    #[arg(long)]
    stamp: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_label(s: &str) -> Result<IrrepLabelG, String> {
    let parts: Vec<_> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("label must be a,b,c (got {s:?})"));
    }
    let nums: Result<Vec<u32>, _> = parts.iter().map(|p| p.trim().parse::<u32>()).collect();
    let nums = nums.map_err(|e| format!("bad label {s:?}: {e}"))?;
    Ok(IrrepLabelG::new(nums[0], nums[1], nums[2]))
}

fn parse_twist(s: &str) -> Result<Twist, String> {
    match s {
        "adjoint" => Ok(Twist::Adjoint),
        "none" => Ok(Twist::Untwisted),
        other => Err(format!("unknown twist {other:?} (adjoint|none)")),
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> anyhow::Result<()> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            let resolved = if path.is_relative() {
                match std::env::var_os("SQUASH7_OUT_DIR") {
                    Some(dir) => PathBuf::from(dir).join(path),
                    None => path.clone(),
                }
            } else {
                path.clone()
            };
            if let Some(parent) = resolved.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            let mut f = std::fs::File::create(&resolved)?;
            f.write_all(content.as_bytes())?;
            eprintln!("wrote {}", resolved.display());
            Ok(())
        }
    }
}

fn usage_err(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn mismatch_err(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_MISMATCH)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with success
            if e.use_stderr() {
                let _ = e.print();
                return ExitCode::from(EXIT_USAGE);
            }
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    if cli.dump_structure_constants {
        return match squash7_core::algebra::dump() {
            Ok(d) => {
                println!("{}", serde_json::to_string_pretty(&d).unwrap());
                ExitCode::SUCCESS
            }
            Err(e) => mismatch_err(&e.to_string()),
        };
    }
    let Some(command) = cli.command else {
        return usage_err("missing subcommand (try --help)");
    };
    match run(command) {
        Ok(code) => code,
        Err(e) => mismatch_err(&format!("{e:#}")),
    }
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Geometry { cmd } => geometry_cmd(cmd),
        Command::Instanton { cmd } => instanton_cmd(cmd),
        Command::Reps { cmd } => reps_cmd(cmd),
        Command::Dirac { cmd } => dirac_cmd(cmd),
        Command::Index { cmd } => index_cmd(cmd),
        Command::Report(args) => report_cmd(args),
    }
}

fn geometry_cmd(cmd: GeometryCmd) -> anyhow::Result<ExitCode> {
    match cmd {
        GeometryCmd::SolveG2 => {
            let g2 = geometry::solve_nearly_g2()?;
            let residual = g2.residual();
            println!("alpha    = {}", g2.alpha);
            println!("beta^2   = {}", g2.beta_sq);
            println!("beta     = {:.15}", g2.beta_f64());
            println!("residual = {residual:.3e}");
            if residual >= 1e-10 {
                return Ok(ExitCode::from(EXIT_MISMATCH));
            }
            Ok(ExitCode::SUCCESS)
        }
        GeometryCmd::BsFlow(args) => {
            let path = match flow::bs_flow(args.beta0, args.rmax, args.tol) {
                Ok(p) => p,
                Err(flow::FlowError::BadParameters) => {
                    return Ok(usage_err("flow parameters must be positive"))
                }
                Err(e) => return Err(e.into()),
            };
            let content = match args.format {
                PathFormat::Csv => {
                    let mut s = String::from("r,alpha,beta,conserved_residual\n");
                    for p in &path.samples {
                        s.push_str(&format!(
                            "{},{},{},{:e}\n",
                            p.r, p.alpha, p.beta, p.conserved_residual
                        ));
                    }
                    s
                }
                PathFormat::Json => {
                    let doc = serde_json::json!({
                        "schema": 1,
                        "beta0": path.beta0,
                        "conserved_value": path.conserved_value,
                        "cone_convergence_exponent": path.cone_convergence_exponent(),
                        "samples": path.samples,
                    });
                    serde_json::to_string_pretty(&doc)? + "\n"
                }
            };
            write_output(&args.out, &content)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn instanton_cmd(cmd: InstantonCmd) -> anyhow::Result<ExitCode> {
    match cmd {
        InstantonCmd::Profile(args) => {
            let profile = match InstantonProfile::compute(args.y0, args.beta0, args.rmax) {
                Ok(p) => p,
                Err(instanton::InstantonError::BadParameters) => {
                    return Ok(usage_err("profile parameters must be positive"))
                }
                Err(e) => return Err(e.into()),
            };
            let content = match args.format {
                PathFormat::Csv => {
                    let mut s = String::from("r,phi,residual\n");
                    for p in &profile.samples {
                        let resid = instanton::profile_curvature_residual(&profile, p);
                        s.push_str(&format!("{},{},{:e}\n", p.r, p.phi_closed, resid));
                    }
                    s
                }
                PathFormat::Json => {
                    let doc = serde_json::json!({
                        "schema": 1,
                        "y0": profile.y0,
                        "beta0": profile.beta0,
                        "closed_form_agreement": profile.closed_form_agreement(),
                        "samples": profile.samples,
                    });
                    serde_json::to_string_pretty(&doc)? + "\n"
                }
            };
            write_output(&args.out, &content)?;
            Ok(ExitCode::SUCCESS)
        }
        InstantonCmd::Decay(args) => {
            if args.y0.is_flat() {
                return Ok(usage_err("the flat member has no decay rate"));
            }
            let profile = InstantonProfile::compute(args.y0, args.beta0, args.rmax)?;
            let rate = profile.decay_rate()?;
            println!("decay exponent of phi: {rate:.6}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn reps_cmd(cmd: RepsCmd) -> anyhow::Result<ExitCode> {
    match cmd {
        RepsCmd::Branch { label } => {
            let label = match parse_label(&label) {
                Ok(l) => l,
                Err(e) => return Ok(usage_err(&e)),
            };
            let carrier = match reptheory::build_carrier(label) {
                Ok(c) => c,
                Err(reptheory::RepError::UnsupportedLabel(l)) => {
                    return Ok(usage_err(&format!("label {l} outside the supported catalog")))
                }
                Err(e) => return Err(e.into()),
            };
            let branching = reptheory::branch_to_h(&carrier)?;
            let doc = serde_json::json!({
                "schema": 1,
                "label": label,
                "dim": carrier.dim,
                "branching": branching.iter().map(|(h, m)| {
                    serde_json::json!({"p": h.p, "q": h.q, "multiplicity": m})
                }).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
            Ok(ExitCode::SUCCESS)
        }
        RepsCmd::Casimir { label } => {
            let label = match parse_label(&label) {
                Ok(l) => l,
                Err(e) => return Ok(usage_err(&e)),
            };
            let value = reptheory::casimir_g(label);
            let doc = serde_json::json!({
                "schema": 1,
                "label": label,
                "casimir": value.to_string(),
                "casimir_f64": squash7_core::algebra::rat_to_f64(value),
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn dirac_cmd(cmd: DiracCmd) -> anyhow::Result<ExitCode> {
    match cmd {
        DiracCmd::Spectrum { label, twist, t } => {
            let label = match parse_label(&label) {
                Ok(l) => l,
                Err(e) => return Ok(usage_err(&e)),
            };
            let twist = match parse_twist(&twist) {
                Ok(t) => t,
                Err(e) => return Ok(usage_err(&e)),
            };
            if dirac::block_dimension(label, twist)? == 0 {
                println!("{}", serde_json::json!({
                    "schema": 1, "label": label, "twist": twist, "t": t,
                    "eigenvalues": [],
                }));
                return Ok(ExitCode::SUCCESS);
            }
            let block = dirac::dirac_block(label, twist)?;
            let spec = dirac::block_spectrum(&block, t)?;
            let exact = exact_forms(label, twist, t);
            let doc = serde_json::json!({
                "schema": 1,
                "label": label,
                "twist": twist,
                "t": t,
                "eigenvalues": spec,
                "exact_forms": exact,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
            Ok(ExitCode::SUCCESS)
        }
        DiracCmd::Candidates { threshold } => {
            let labels = dirac::enumerate_candidates(threshold);
            let doc = serde_json::json!({
                "schema": 1,
                "threshold": threshold,
                "candidates": labels.iter().map(|l| {
                    serde_json::json!({
                        "label": l,
                        "lower_bound": dirac::eigen_lower_bound(*l),
                    })
                }).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
            Ok(ExitCode::SUCCESS)
        }
        DiracCmd::CriticalRates { lo, hi } => {
            if lo >= hi {
                return Ok(usage_err("empty interval"));
            }
            if (lo + 2.5).abs().max((hi + 2.5).abs()) > index::FLOW_SHIFT_BOUND {
                return Ok(usage_err(
                    "interval reaches outside the computed spectral window",
                ));
            }
            let rates = dirac::critical_rates(lo, hi)?;
            let doc = serde_json::json!({
                "schema": 1,
                "interval": [lo, hi],
                "critical_rates": rates,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Exact spectral forms where the closed expressions are known (t = 0 on the
/// candidate blocks).
fn exact_forms(label: IrrepLabelG, twist: Twist, t: f64) -> Vec<String> {
    if t != 0.0 {
        return Vec::new();
    }
    let table = match twist {
        Twist::Adjoint => squash7_core::reference::twisted_spectra(),
        Twist::Untwisted => squash7_core::reference::untwisted_spectra(),
    };
    table
        .into_iter()
        .find(|(l, _)| *l == label)
        .map(|(_, surds)| surds.iter().map(|s| s.to_string()).collect())
        .unwrap_or_default()
}

fn index_cmd(cmd: IndexCmd) -> anyhow::Result<ExitCode> {
    match cmd {
        IndexCmd::Table1 => {
            let spec = index::fiber_operator_spectrum();
            let line = index::trivial_block_fiber_eigenvalue()?;
            let doc = serde_json::json!({
                "schema": 1,
                "spectrum": spec.iter().map(|(v, m)| {
                    serde_json::json!({"eigenvalue": v, "multiplicity": m})
                }).collect::<Vec<_>>(),
                "trivial_line_eigenvalue": line,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
            Ok(ExitCode::SUCCESS)
        }
        IndexCmd::SpectralFlow => {
            let flow = index::spectral_flow_connection()?;
            let scalar = index::scalar_family_positivity(2000);
            let matched = index::flat_end_matches_untwisted(&flow)?;
            let doc = serde_json::json!({
                "schema": 1,
                "connection_flow": flow.total,
                "trivial_path_endpoint": flow.trivial_path_endpoint,
                "flat_end_matches_untwisted": matched,
                "metric_flow": scalar.spectral_flow,
                "blocks": flow.blocks,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
            if flow.total != 0 || scalar.spectral_flow != 0 || !matched {
                return Ok(ExitCode::from(EXIT_MISMATCH));
            }
            Ok(ExitCode::SUCCESS)
        }
        IndexCmd::ScalarFamily => {
            let rep = index::scalar_family_positivity(4000);
            println!("{}", serde_json::to_string_pretty(&serde_json::json!({
                "schema": 1,
                "positive": rep.positive,
                "minimum": rep.minimum,
                "at": rep.at,
                "round_value": rep.round_value,
                "squashed_value": rep.squashed_value,
                "spectral_flow": rep.spectral_flow,
            }))?);
            if !rep.positive {
                return Ok(ExitCode::from(EXIT_MISMATCH));
            }
            Ok(ExitCode::SUCCESS)
        }
        IndexCmd::VirtualDim { which, nu } => match index::virtual_dimension(which, nu) {
            Ok(v) => {
                println!("{}", serde_json::to_string_pretty(&serde_json::json!({
                    "schema": 1,
                    "which": which,
                    "nu": nu,
                    "virtual_dimension": v,
                }))?);
                Ok(ExitCode::SUCCESS)
            }
            Err(index::IndexError::CriticalRate(r)) => {
                Ok(usage_err(&format!("{r} is a critical rate; the index jumps there")))
            }
            Err(index::IndexError::RateOutOfRange(r)) => {
                Ok(usage_err(&format!("rate {r} outside the computed window (-5/2, 0)")))
            }
            Err(e) => Err(e.into()),
        },
    }
}

fn report_cmd(args: ReportArgs) -> anyhow::Result<ExitCode> {
    let y0_list: Result<Vec<f64>, _> = args
        .y0_list
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect();
    let y0_list = match y0_list {
        Ok(v) if !v.is_empty() => v,
        _ => return Ok(usage_err("bad --y0-list")),
    };
    let config = RunConfig {
        beta0: args.beta0,
        y0_list,
        eig_tol: args.eig_tol,
        ode_tol: args.ode_tol,
        rank_cutoff: args.rank_cutoff,
        p1_convention: args.p1_hp2,
        stamp: args.stamp,
    };
    if !(config.eig_tol > 0.0 && config.ode_tol > 0.0 && config.rank_cutoff > 0.0) {
        return Ok(usage_err("tolerances must be positive"));
    }
    let doc = report::run_report(&config);
    let content = report::render(&doc, args.format)?;
    write_output(&args.out, &content)?;
    if doc.overall_pass {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("report: {} section(s) failed", doc.sections.iter().filter(|s| !s.pass).count());
        Ok(ExitCode::from(EXIT_MISMATCH))
    }
}
