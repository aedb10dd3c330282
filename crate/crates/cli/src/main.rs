use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use vvjack::coeffs::CoeffStore;
use vvjack::compositions::{count_z, MultiIndex};
use vvjack::diffsys::{gamma_by_contents, gamma_by_rows, DEFAULT_CLEARANCE};
use vvjack::error::Error;
use vvjack::form::gram_report;
use vvjack::kernel::{identity_report, kernel_report};
use vvjack::perm::Permutation;
use vvjack::scalars::{default_kappa, format_rational, parse_rational, KappaParam};
use vvjack::tableaux::{Partition, Rep};
use vvjack::verify::{self, SuiteConfig};
use vvjack::ybgraph::YbGraph;

#[derive(Parser)]
#[command(
    name = "vvjack",
    version,
    about = "Vector-valued Jack polynomials and their torus form"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// TOML file with any of the options below; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Partition, e.g. `3,1`.
    #[arg(long, global = true)]
    shape: Option<String>,
    /// Rational parameter `p/q`; defaults to 1/(h+1).
    #[arg(long, global = true, allow_hyphen_values = true)]
    kappa: Option<String>,
    #[arg(long, global = true)]
    max_degree: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Reverse standard tableaux with contents and norms.
    Tableaux,
    /// Matrix of a permutation in the tableau basis.
    Rep {
        /// One-line notation, e.g. `2,1,3`.
        #[arg(long)]
        perm: String,
    },
    /// One nonsymmetric Jack polynomial.
    Nsjp {
        #[arg(long)]
        alpha: String,
        /// Basis index as listed by `tableaux`; defaults to T0.
        #[arg(long)]
        tableau: Option<usize>,
    },
    /// Gram matrix of all polynomials up to `--max-degree`.
    Gram,
    /// Build or extend a coefficient store to `--max-degree`.
    Coeffs {
        /// Store file; loaded if present, then written back.
        #[arg(long)]
        store: Option<PathBuf>,
    },
    /// Positivity report for the Cesàro approximants.
    Kernel {
        #[arg(long)]
        order: Option<usize>,
    },
    /// Residuals of the complete-symmetric / Cesàro identity.
    Identity {
        #[arg(long = "N")]
        nvars: Option<usize>,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Integrability and Euler checks of the connection.
    Diffsys {
        #[arg(long, default_value_t = 20)]
        points: usize,
        /// RK4 steps for a closed-loop transport check; 0 skips it.
        #[arg(long, default_value_t = 0)]
        transport_steps: usize,
    },
    /// Size of Z_{N,n}.
    Count {
        #[arg(long = "N")]
        nvars: usize,
        #[arg(long = "n")]
        n: usize,
    },
    /// The full invariant suite; exits nonzero on any failure.
    Verify {
        #[arg(long, default_value_t = 0)]
        transport_steps: usize,
    },
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    shape: Option<String>,
    kappa: Option<String>,
    max_degree: Option<usize>,
    seed: Option<u64>,
    samples: Option<usize>,
    output: Option<PathBuf>,
}

#[derive(Serialize)]
struct Resolved {
    shape: Option<String>,
    kappa: Option<String>,
    max_degree: usize,
    seed: u64,
    samples: usize,
    #[serde(skip)]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidShape(_) => Failure::Usage(e.to_string()),
            e => Failure::Compute(e),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn resolve(c: &Common) -> Res<Resolved> {
    let file = match &c.config {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            toml::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?
        }
        None => FileConfig::default(),
    };
    Ok(Resolved {
        shape: c.shape.clone().or(file.shape),
        kappa: c.kappa.clone().or(file.kappa),
        max_degree: c.max_degree.or(file.max_degree).unwrap_or(2),
        seed: c.seed.or(file.seed).unwrap_or(0),
        samples: c.samples.or(file.samples).unwrap_or(20),
        output: c.output.clone().or(file.output),
    })
}

impl Resolved {
    fn shape(&self) -> Res<Partition> {
        let s = self
            .shape
            .as_deref()
            .ok_or_else(|| Failure::Usage("--shape is required".into()))?;
        Ok(Partition::parse(s)?)
    }

    fn kappa(&mut self) -> Res<KappaParam> {
        let shape = self.shape()?;
        let k = match &self.kappa {
            Some(s) => KappaParam::new(parse_rational(s)?, &shape)?,
            None => default_kappa(&shape),
        };
        self.kappa = Some(format_rational(k.value()));
        Ok(k)
    }

    fn store(&mut self, grade: usize) -> Res<CoeffStore> {
        let k = self.kappa()?;
        let mut s = CoeffStore::new(Arc::new(Rep::new(k.shape())), k, grade);
        s.ensure_grade(grade)?;
        Ok(s)
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Res<Vec<T>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("bad {what} entry {p:?}")))
        })
        .collect()
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Tableaux => "tableaux",
        Command::Rep { .. } => "rep",
        Command::Nsjp { .. } => "nsjp",
        Command::Gram => "gram",
        Command::Coeffs { .. } => "coeffs",
        Command::Kernel { .. } => "kernel",
        Command::Identity { .. } => "identity",
        Command::Diffsys { .. } => "diffsys",
        Command::Count { .. } => "count",
        Command::Verify { .. } => "verify",
    }
}

/// Returns the results and whether every check in them passed.
fn run(cmd: &Command, cfg: &mut Resolved) -> Res<(Value, bool)> {
    let ok = |v: Value| Ok((v, true));
    match cmd {
        Command::Tableaux => {
            let rep = Rep::new(&cfg.shape()?);
            let rows: Vec<Value> = rep
                .basis()
                .iter()
                .zip(rep.norms())
                .enumerate()
                .map(|(i, (t, n))| {
                    json!({"index": i, "rows": t.rows(), "content": t.content(), "inv": t.inv(), "norm0": format_rational(n)})
                })
                .collect();
            ok(
                json!({"dimension": rep.dim(), "t0": rep.t0(), "max_hook": rep.shape().max_hook(), "tableaux": rows}),
            )
        }
        Command::Rep { perm } => {
            let rep = Rep::new(&cfg.shape()?);
            let w = Permutation::from_one_line(&parse_list::<usize>(perm, "permutation")?)?;
            if w.len() != rep.nvars() {
                return Err(Failure::Usage(format!(
                    "permutation of length {}, expected {}",
                    w.len(),
                    rep.nvars()
                )));
            }
            ok(json!({"perm": w.one_line(), "matrix": rep.rep_matrix(&w).to_strings()}))
        }
        Command::Nsjp { alpha, tableau } => {
            let k = cfg.kappa()?;
            let rep = Arc::new(Rep::new(k.shape()));
            let alpha = MultiIndex::new(parse_list(alpha, "alpha")?);
            if alpha.len() != rep.nvars() {
                return Err(Failure::Usage(format!(
                    "alpha of length {}, expected {}",
                    alpha.len(),
                    rep.nvars()
                )));
            }
            let t = tableau.unwrap_or(rep.t0());
            if t >= rep.dim() {
                return Err(Error::IndexOutOfRange {
                    index: t,
                    max: rep.dim() - 1,
                }
                .into());
            }
            let mut g = YbGraph::new(rep, k);
            let node = g.build(&alpha, t)?;
            let eigen = g.is_eigenfunction(&node)?;
            Ok((json!({"node": &*node, "eigenfunction": eigen}), eigen))
        }
        Command::Gram => {
            let d = cfg.max_degree;
            let report = gram_report(&cfg.store(d)?, d)?;
            let passed = report.diagonal && report.all_match;
            Ok((
                serde_json::to_value(report).expect("report serializes"),
                passed,
            ))
        }
        Command::Coeffs { store } => {
            let d = cfg.max_degree;
            let mut s = match store.as_deref().filter(|p| p.exists()) {
                Some(p) => load_store(p, cfg, d)?,
                None => cfg.store(0)?,
            };
            s.set_cap(d.max(s.sealed_grade()));
            s.ensure_grade(d)?;
            if let Some(p) = store {
                fs::write(p, s.to_json())
                    .map_err(|e| Error::Format(format!("{}: {e}", p.display())))?;
            }
            let counts: Vec<usize> = (0..=s.sealed_grade())
                .map(|n| s.grade(n).map_or(0, |g| g.len()))
                .collect();
            ok(json!({
                "sealed_grade": s.sealed_grade(),
                "canonical_per_grade": counts,
                "store": store.as_ref().map(|p| p.display().to_string()),
            }))
        }
        Command::Kernel { order } => {
            let n = order.unwrap_or(cfg.max_degree);
            let r = kernel_report(&cfg.store(n)?, n, cfg.samples, cfg.seed)?;
            let passed = r.hermiticity_residual < 1e-10
                && r.covariance_residual < 1e-10
                && (!r.psd_range || r.worst_min_eigenvalue >= -1e-9);
            Ok((serde_json::to_value(r).expect("report serializes"), passed))
        }
        Command::Identity { nvars, order } => {
            let nv = match nvars {
                Some(n) => *n,
                None => cfg.shape()?.size(),
            };
            if nv < 2 {
                return Err(Failure::Usage("--N must be at least 2".into()));
            }
            let r = identity_report(nv, order.unwrap_or(cfg.max_degree), cfg.samples, cfg.seed);
            let passed = r.passed();
            Ok((serde_json::to_value(r).expect("report serializes"), passed))
        }
        Command::Diffsys {
            points,
            transport_steps,
        } => {
            let k = cfg.kappa()?;
            let rep = Rep::new(k.shape());
            let mut checks = vec![verify::differential(&rep, k.value(), *points, cfg.seed)?];
            if *transport_steps > 0 {
                checks.push(verify::closed_loop(&rep, k.value(), *transport_steps)?);
            }
            let passed = checks.iter().all(|c| c.passed);
            let gamma = json!({
                "by_rows": format_rational(&gamma_by_rows(k.shape())),
                "by_contents": format_rational(&gamma_by_contents(k.shape())),
            });
            Ok((
                json!({"gamma": gamma, "clearance": DEFAULT_CLEARANCE, "checks": checks}),
                passed,
            ))
        }
        Command::Count { nvars, n } => {
            if *nvars < 2 {
                return Err(Failure::Usage("--N must be at least 2".into()));
            }
            let c = count_z(*nvars, *n);
            let count = u64::try_from(c).map_or_else(|_| json!(c.to_string()), |v| json!(v));
            ok(json!({"N": nvars, "n": n, "count": count}))
        }
        Command::Verify { transport_steps } => {
            let suite = SuiteConfig {
                kappa: cfg.kappa()?,
                max_degree: cfg.max_degree,
                seed: cfg.seed,
                samples: cfg.samples,
                transport_steps: *transport_steps,
            };
            let checks = verify::run_suite(&suite)?;
            let passed = checks.iter().all(|c| c.passed);
            Ok((json!({"passed": passed, "checks": checks}), passed))
        }
    }
}

fn load_store(path: &Path, cfg: &mut Resolved, cap: usize) -> Res<CoeffStore> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    let s = CoeffStore::from_json(&text, cap)?;
    let k = cfg.kappa()?;
    if s.kappa() != &k {
        return Err(Error::Format(format!(
            "store {} holds shape {} kappa {}, requested {} kappa {}",
            path.display(),
            s.kappa().shape(),
            format_rational(s.kappa().value()),
            k.shape(),
            format_rational(k.value())
        ))
        .into());
    }
    Ok(s)
}

fn error_record(e: &Error) -> Value {
    json!({
        "kind": e.kind(),
        "message": e.to_string(),
        "witness": e.witness().map(|w| format_rational(&w)),
    })
}

fn emit(doc: &Value, output: Option<&Path>) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(doc).expect("json serializes") + "\n";
    match output {
        Some(p) => fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let mut cfg = match resolve(&cli.common) {
        Ok(c) => c,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let result = run(&cli.command, &mut cfg);
    let version = env!("CARGO_PKG_VERSION");
    let (doc, code) = match result {
        Ok((results, passed)) => (
            json!({"command": name, "config": &cfg, "version": version, "results": results}),
            if passed { 0 } else { 1 },
        ),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            (
                json!({"command": name, "config": &cfg, "version": version, "error": error_record(&e)}),
                1,
            )
        }
    };
    if let Err(e) = emit(&doc, cfg.output.as_deref()) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
