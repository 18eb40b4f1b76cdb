use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gitfankit::error::{lift_size_guards, Error};
use gitfankit::gitfan::verify::{run_claim, verify_all, Claim, DEFAULT_SEED};
use gitfankit::gitfan::{
    center_pullback, cox_variables, delta_reduction, git_fan_star, omega_star, GitContext, PipelineFans,
};
use gitfankit::grassmann::{brute_force_supports, enumerate_y_sets, weights};
use gitfankit::semilattice::face_poset;
use gitfankit::{Fan, FanJson, Report};

/// Exact GIT-fan, blow-up and tropical-reduction computations for Gr(2, n+1).
///
/// Exit codes: 0 pass, 1 claim failure, 2 usage or size guard, 3 internal error.
#[derive(Debug, Parser)]
#[command(name = "gitfankit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the result here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,

    /// Lift the size guards (up to n = 10).
    #[arg(long, global = true)]
    force: bool,

    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, env = "GITFANKIT_JOBS")]
    jobs: Option<usize>,

    /// Report elapsed_ms as 0 so that repeated runs are byte-identical.
    #[arg(long, global = true)]
    reproducible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FanKind {
    Gitfan,
    GitfanStar,
    Sigma0,
    Sigma1,
    Sigmar,
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClaimArg {
    Walls,
    StarSubfan,
    FkBridge,
    #[value(name = "thm44")]
    BlowUpCriterion,
    DeltaSubfan,
    Rays,
    NuEquality,
    All,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate the (*)-sets of N0 (n <= 6).
    Ysets {
        #[arg(short)]
        n: usize,
        /// Compare with the brute-force support sweep (n <= 3).
        #[arg(long)]
        oracle: bool,
    },
    /// Export a fan as {n, rays, cones} (n <= 5; delta n <= 4).
    Fan {
        #[arg(value_enum)]
        which: FanKind,
        #[arg(short)]
        n: usize,
    },
    /// Check a claim and emit its report.
    Verify {
        #[arg(value_enum)]
        claim: ClaimArg,
        #[arg(short, default_value_t = 3)]
        n: usize,
    },
    /// Center ideal for A ⊆ {2..n}, |A| >= 2, and its pullback.
    Centers {
        #[arg(short)]
        n: usize,
        #[arg(short = 'A', value_delimiter = ',', required = true)]
        a: Vec<usize>,
    },
    /// Hasse diagram of the face poset of a fan.
    Poset {
        #[arg(value_enum)]
        which: FanKind,
        #[arg(short)]
        n: usize,
    },
}

/// A failed run with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Guard { .. } | Error::InvalidInput(_) | Error::OutsideCone(_) | Error::DimensionMismatch { .. } => 2,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        Failure { code: 3, message: format!("{e:#}") }
    }
}

/// Rendered output and whether every selected check passed.
struct Outcome {
    json: Value,
    text: String,
    passed: bool,
}

fn build_fan(which: FanKind, n: usize) -> Result<Fan, Error> {
    match which {
        FanKind::Gitfan => GitContext::new(n)?.git_fan(),
        FanKind::GitfanStar => git_fan_star(n),
        FanKind::Delta => delta_reduction(n),
        FanKind::Sigma0 | FanKind::Sigma1 | FanKind::Sigmar => {
            let fans = PipelineFans::new(&GitContext::new(n)?)?;
            Ok(match which {
                FanKind::Sigma0 => fans.sigma0,
                FanKind::Sigma1 => fans.sigma1,
                _ => fans.sigma_r,
            })
        }
    }
}

fn cmd_ysets(n: usize, oracle: bool) -> Result<Outcome, Failure> {
    let sets = enumerate_y_sets(n)?;
    let mut text = format!("n={n}: {} sets\n", sets.len());
    for s in &sets {
        writeln!(text, "{s}").ok();
    }
    let mut json = json!({ "n": n, "count": sets.len(), "ysets": sets });
    let mut passed = true;
    if oracle {
        let brute = brute_force_supports(n)?;
        let equal = brute == sets.iter().copied().collect::<BTreeSet<_>>();
        passed = equal;
        writeln!(text, "oracle: {} supports, equal: {equal}", brute.len()).ok();
        json["oracle"] = json!({ "count": brute.len(), "equal": equal });
    }
    Ok(Outcome { json, text, passed })
}

fn cmd_fan(which: FanKind, n: usize) -> Result<Outcome, Failure> {
    let fan = build_fan(which, n)?;
    let name = which.to_possible_value().expect("named").get_name().to_string();
    let mut summary = json!({ "rays": fan.rays().len(), "maximal_cones": fan.maximal_cones().len() });
    let mut text = format!("{name} n={n}: {} rays, {} maximal cones", fan.rays().len(), fan.maximal_cones().len());
    if matches!(which, FanKind::Gitfan) && n >= 3 {
        let star = omega_star(n)?;
        let inside = fan.maximal_cones().iter().filter(|c| star.contains_cone(c)).count();
        summary["maximal_inside_omega_star"] = json!(inside);
        write!(text, ", {inside} inside Ω*").ok();
    }
    text.push('\n');
    let export = FanJson::new(n, &fan);
    for (k, c) in export.cones.iter().enumerate() {
        let rays: Vec<String> = c.iter().map(|&r| format!("({})", export.rays[r].join(","))).collect();
        writeln!(text, "cone {k}: {}", rays.join(" ")).ok();
    }
    Ok(Outcome { json: json!({ "fan": name, "summary": summary, "data": export }), text, passed: true })
}

fn report_line(r: &Report) -> String {
    let n = r.n.map_or(String::new(), |n| format!(" n={n}"));
    let status = if r.result { "PASS" } else { "FAIL" };
    format!("{}{n}: {status} ({} certificates, {} ms)\n", r.claim, r.certificates.len(), r.elapsed_ms)
}

fn cmd_verify(claim: ClaimArg, n: usize, seed: u64, reproducible: bool) -> Result<Outcome, Failure> {
    let mut reports = match claim {
        ClaimArg::All => verify_all(n, seed)?,
        other => {
            let name = other.to_possible_value().expect("named").get_name().to_string();
            vec![run_claim(Claim::parse(&name).expect("claim names match"), n, seed)?]
        }
    };
    if reproducible {
        reports.iter_mut().for_each(|r| r.elapsed_ms = 0);
    }
    let passed = reports.iter().all(|r| r.result);
    let mut text: String = reports.iter().map(report_line).collect();
    for r in reports.iter().filter(|r| !r.result) {
        for c in &r.certificates {
            writeln!(text, "  {c}").ok();
        }
    }
    let json = if reports.len() == 1 { json!(reports[0]) } else { json!({ "result": passed, "reports": reports }) };
    Ok(Outcome { json, text, passed })
}

fn cmd_centers(n: usize, a: &[usize]) -> Result<Outcome, Failure> {
    let ci = center_pullback(n, a)?;
    let vars = cox_variables(&weights(n)?);
    let monomial = |e: &Vec<u32>| -> String {
        let parts: Vec<String> = vars
            .iter()
            .zip(e)
            .filter(|(_, &k)| k > 0)
            .map(|(p, &k)| if k == 1 { format!("S{}{}", p.i, p.j) } else { format!("S{}{}^{k}", p.i, p.j) })
            .collect();
        parts.join("*")
    };
    let list = |v: &[gitfankit::gitfan::Poly]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ");
    let mut text = String::new();
    let support: Vec<String> = ci.support.iter().map(|p| format!("v{}{}", p.i, p.j)).collect();
    let alpha: Vec<String> = ci.alpha.iter().map(|x| x.to_string()).collect();
    writeln!(text, "nu = ({}) carried by {} with alpha ({}), c = {}", ci.nu.join(","), support.join(", "), alpha.join(","), ci.c).ok();
    writeln!(text, "exponents: {}", ci.exponents.iter().map(monomial).collect::<Vec<_>>().join(", ")).ok();
    writeln!(text, "pullback: {}", list(&ci.pullback_generators)).ok();
    writeln!(text, "displayed: {}", list(&ci.displayed)).ok();
    writeln!(text, "extra: {}", list(&ci.extra)).ok();
    writeln!(text, "missing: {}", list(&ci.missing)).ok();
    let json = serde_json::to_value(&ci).context("serializing the center ideal")?;
    Ok(Outcome { json, text, passed: true })
}

fn cmd_poset(which: FanKind, n: usize) -> Result<Outcome, Failure> {
    let dump = face_poset(&build_fan(which, n)?).dump();
    let mut text = format!("{} elements, {} covering relations\n", dump.elements.len(), dump.hasse_edges.len());
    for (a, b) in &dump.hasse_edges {
        writeln!(text, "{} < {}", dump.elements[*a], dump.elements[*b]).ok();
    }
    let json = serde_json::to_value(&dump).context("serializing the poset")?;
    Ok(Outcome { json, text, passed: true })
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    if cli.force {
        eprintln!("warning: size guards lifted; runtimes beyond the documented bounds are unbounded");
        lift_size_guards(true);
    }
    if let Some(k) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(k).build_global().context("configuring the thread pool")?;
    }
    let out = match &cli.command {
        Command::Ysets { n, oracle } => cmd_ysets(*n, *oracle)?,
        Command::Fan { which, n } => cmd_fan(*which, *n)?,
        Command::Verify { claim, n } => cmd_verify(*claim, *n, cli.seed, cli.reproducible)?,
        Command::Centers { n, a } => cmd_centers(*n, a)?,
        Command::Poset { which, n } => cmd_poset(*which, *n)?,
    };
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&out.json).context("serializing output")? + "\n",
        Format::Text => out.text,
    };
    match &cli.output {
        Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{body}"),
    }
    Ok(out.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
