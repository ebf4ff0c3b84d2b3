use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use segment_hitting::continuum::{
    anisotropic_kernel, h_minus, h_segment_exterior, h_segment_interior, q_continuum, slit_plane_kernel, AnisotropicMap,
    InteriorNumerator, SegmentSpec, Side, SlitPoint,
};
use segment_hitting::edge::{compute_mu, compute_nu, EdgeKind};
use segment_hitting::hitting::{hit_segment, HittingDistribution};
use segment_hitting::lab::{self, ExperimentConfig};
use segment_hitting::mc::{hit_segment_mc, McConfig};
use segment_hitting::probes::{bound_probe, Probe};
use segment_hitting::report::Verdict;
use segment_hitting::truncated::{default_half_width, hit_segment_truncated};
use segment_hitting::walk::{Site, Walk, WalkLaw};
use segment_hitting::{Error, Result};

#[derive(Parser)]
#[command(name = "seghit", version, about = "Segment hitting distributions for planar lattice walks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closed-form Brownian kernels
    Continuum {
        #[command(subcommand)]
        cmd: ContinuumCmd,
    },
    /// Hitting distribution of the segment I(n) from one start
    Hit(HitArgs),
    /// Operator-series identities and bound probes
    Series(SeriesArgs),
    /// Edge functions mu and nu
    Edge(EdgeArgs),
    /// Verification suites
    Lab {
        #[command(subcommand)]
        cmd: LabCmd,
    },
}

#[derive(Subcommand)]
enum ContinuumCmd {
    Eval(EvalArgs),
}

#[derive(Subcommand)]
enum LabCmd {
    Run(LabArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kernel {
    Hminus,
    HsegExt,
    HsegInt,
    Slit,
    Aniso,
    Q,
}

impl Kernel {
    fn label(self) -> &'static str {
        match self {
            Kernel::Hminus => "hminus",
            Kernel::HsegExt => "hseg-ext",
            Kernel::HsegInt => "hseg-int",
            Kernel::Slit => "slit",
            Kernel::Aniso => "aniso",
            Kernel::Q => "q",
        }
    }
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, value_enum)]
    kernel: Kernel,
    /// segment index; the continuum segment is (-n+1/2, n-1/2), the unit slit when omitted
    #[arg(long)]
    n: Option<u32>,
    /// start points, comma separated; `a+bi` allowed for slit and aniso
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    x: Vec<String>,
    /// target points (the second argument `y` for q), comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    s: Vec<f64>,
    #[arg(long, default_value = "above")]
    side: String,
    /// covariance source for aniso
    #[arg(long, default_value = "srw")]
    walk: String,
    /// use the printed integer numerator for hseg-int
    #[arg(long)]
    integer_numerator: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum HitMethod {
    Pk,
    Solve,
    Mc,
}

#[derive(Args)]
struct HitArgs {
    #[arg(long, default_value = "srw")]
    walk: String,
    #[arg(long)]
    n: u32,
    /// lattice point `a+bi`, `a,b` or an integer
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, value_enum, default_value = "pk")]
    method: HitMethod,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100_000_000)]
    cap: u64,
    /// continuation box half-width for mc; pure censoring when omitted
    #[arg(long)]
    escape: Option<i64>,
    /// box half-width for solve
    #[arg(long)]
    half: Option<i64>,
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(long, default_value = "srw")]
    walk: String,
    #[arg(long)]
    probe: String,
    #[arg(long)]
    n: u32,
    /// half-line truncation
    #[arg(long = "D")]
    d: Option<i64>,
    /// fail when the report's error budget exceeds this
    #[arg(long)]
    budget: Option<f64>,
}

#[derive(Args)]
struct EdgeArgs {
    #[arg(long, default_value = "srw")]
    walk: String,
    #[arg(long = "fn")]
    which: String,
    #[arg(long = "M", default_value_t = 2000)]
    m: i64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Args)]
struct LabArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_delimiter = ',')]
    claims: Option<Vec<String>>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_complex(text: &str) -> Result<Complex64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Config(format!("cannot parse point '{text}'"));
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(t.parse().map_err(|_| bad())?, 0.0));
    };
    let cut = body
        .char_indices()
        .skip(1)
        .filter(|&(k, c)| (c == '+' || c == '-') && !body[..k].ends_with(['e', 'E']))
        .map(|(k, _)| k)
        .last();
    let (re, im) = match cut {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re.parse().map_err(|_| bad())?, im))
}

fn load_walk(spec: &str) -> Result<Walk> {
    Walk::new(WalkLaw::resolve(spec)?)
}

fn eval(args: EvalArgs) -> Result<()> {
    let side = Side::parse(&args.side)?;
    let n_star = args.n.map(|n| SegmentSpec::new(n).map(|s| s.n_star())).transpose()?;
    let need_n = || n_star.ok_or_else(|| Error::Config(format!("--n is required for {}", args.kernel.label())));
    let numerator = if args.integer_numerator { InteriorNumerator::Integer } else { InteriorNumerator::HalfInteger };
    let aniso = match args.kernel {
        Kernel::Aniso => Some(AnisotropicMap::new(load_walk(&args.walk)?.moments().covariance)?),
        _ => None,
    };
    let mut out = io::stdout().lock();
    writeln!(out, "kernel,n,x,s,side,value")?;
    for xt in &args.x {
        let z = parse_complex(xt)?;
        for &s in &args.s {
            let real = || {
                if z.im != 0.0 {
                    return Err(Error::Domain(format!("{} needs a real start, got {xt}", args.kernel.label())));
                }
                Ok(z.re)
            };
            let value = match args.kernel {
                Kernel::Hminus => h_minus(real()?, s)?,
                Kernel::HsegExt => h_segment_exterior(need_n()?, real()?, s)?,
                Kernel::HsegInt => h_segment_interior(need_n()?, real()?, s, numerator)?,
                Kernel::Q => q_continuum(need_n()?, real()?, s)?,
                Kernel::Slit | Kernel::Aniso => {
                    // scale the slit (-n_*, n_*) to the unit slit; the density picks up 1/n_*
                    let ns = n_star.unwrap_or(1.0);
                    let target = SlitPoint::boundary(s / ns, side)?;
                    let w = z / ns;
                    let k = match &aniso {
                        Some(map) => anisotropic_kernel(map, w, target)?,
                        None => slit_plane_kernel(target, w)?,
                    };
                    k / ns
                }
            };
            let n = args.n.map(|n| n.to_string()).unwrap_or_default();
            writeln!(out, "{},{},{},{:.16e},{},{:.16e}", args.kernel.label(), n, xt, s, side.label(), value)?;
        }
    }
    Ok(())
}

fn write_hits(dist: &HittingDistribution) -> Result<()> {
    let mut out = io::stdout().lock();
    writeln!(out, "s,prob,stderr,deficit,method")?;
    for (site, p) in &dist.table {
        let se = dist.stderr_at(*site).map(|v| format!("{v:.16e}")).unwrap_or_default();
        writeln!(out, "{},{:.16e},{},{:.16e},{}", site.x, p, se, dist.deficit, dist.method.label())?;
    }
    Ok(())
}

fn hit(args: HitArgs) -> Result<()> {
    let walk = load_walk(&args.walk)?;
    let seg = SegmentSpec::new(args.n)?;
    let x = Site::parse(&args.x)?;
    let dist = match args.method {
        HitMethod::Pk => hit_segment(&walk, seg, x)?,
        HitMethod::Solve => hit_segment_truncated(&walk, seg, x, args.half.unwrap_or_else(|| default_half_width(seg, x)))?,
        HitMethod::Mc => {
            let cfg = McConfig { samples: args.samples, seed: args.seed, step_cap: args.cap, escape: args.escape, ..McConfig::default() };
            hit_segment_mc(&walk, seg, x, &cfg)?
        }
    };
    write_hits(&dist)
}

fn series(args: SeriesArgs) -> Result<()> {
    let walk = load_walk(&args.walk)?;
    let report = bound_probe(&walk, Probe::parse(&args.probe)?, SegmentSpec::new(args.n)?, args.d)?;
    report.write_csv(&mut io::stdout().lock())?;
    if let Some(b) = args.budget {
        if report.budget > b {
            return Err(Error::BudgetInfeasible(format!("error budget {:.3e} above {b:.3e}", report.budget)));
        }
    }
    Ok(())
}

fn edge(args: EdgeArgs) -> Result<()> {
    let walk = load_walk(&args.walk)?;
    let table = match EdgeKind::parse(&args.which)? {
        EdgeKind::Nu => compute_nu(&walk, args.m, args.tol)?,
        EdgeKind::Mu => compute_mu(&walk, args.m, args.tol)?,
    };
    let mut out = io::stdout().lock();
    writeln!(out, "j,value,residual")?;
    for (k, (v, r)) in table.values.iter().zip(&table.defects).enumerate() {
        writeln!(out, "{},{:.16e},{:.16e}", k as i64 - table.m, v, r)?;
    }
    Ok(())
}

/// Exit status 1 when any claim fails.
fn lab_run(args: LabArgs) -> Result<bool> {
    let cfg = ExperimentConfig::from_path(&args.config)?;
    // `--claims ""` is the empty list
    let claims = args.claims.map(|c| c.into_iter().filter(|s| !s.is_empty()).collect());
    let summary = lab::run(cfg, claims, args.out)?;
    let mut out = io::stdout().lock();
    for (claim, s) in &summary {
        writeln!(out, "{claim:8} {} fitted={:.4e} {}", s.verdict.label(), s.fitted_constant, s.note)?;
    }
    Ok(summary.values().all(|s| s.verdict == Verdict::Pass))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Continuum { cmd: ContinuumCmd::Eval(a) } => eval(a).map(|_| true),
        Cmd::Hit(a) => hit(a).map(|_| true),
        Cmd::Series(a) => series(a).map(|_| true),
        Cmd::Edge(a) => edge(a).map(|_| true),
        Cmd::Lab { cmd: LabCmd::Run(a) } => lab_run(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
