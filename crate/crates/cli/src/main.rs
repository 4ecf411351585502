//! `tvf`: weights, S-matrices, fusion rings and twisted Verlinde ranks.

mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tvf_core::io::{self, Cache, CACHE_ENV};
use tvf_core::suites::{self, Fault, Suite};
use tvf_core::{
    crossed_smatrix, enumerate_twisted_level_weights, nearest_lattice_point, parse_cover_spec,
    twisted_fusion, twisted_km_smatrix, twisted_km_smatrix_via_transpose, untwisted_fusion,
    untwisted_smatrix, DiagramAutomorphism, Error, Evaluator, FiniteType, FusionTable,
    SMatrixTable, TwistedAffineType,
};

use config::{Config, Format};

const TYPE_HELP: &str = "\
Type strings:
  finite          A3, B2, C3, D4, E6, F4, G2
  twisted affine  A3~2 (A_{2n-1}^(2)), A4~2 (A_{2n}^(2)), D5~2 (D_{n+1}^(2)), E6~2, D4~3
Weights are coefficient vectors over the fundamental weights, in Kac's numbering.

Exit codes: 0 ok, 1 failure, 2 bad input, 3 Weyl group cap exceeded,
4 ambiguous row phase, 5 non-integral rank.";

#[derive(Parser)]
#[command(name = "tvf", version, about = "Twisted affine S-matrices, twisted fusion rings and crossed Verlinde ranks", after_help = TYPE_HELP)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "pretty")]
    format: Format,
    /// Cache directory for S-matrices (default: $TVF_CACHE_DIR, unset disables caching).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Tolerance for rounding ranks and structure constants.
    #[arg(long = "tol-round", global = true, default_value_t = 1e-6)]
    round_tol: f64,
    /// Tolerance for the unitarity check on emitted S-matrices.
    #[arg(long = "tol-unitary", global = true, default_value_t = 1e-8)]
    unitary_tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Untwisted,
    Twisted,
    Crossed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Via {
    Direct,
    Transpose,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Unitarity,
    Dualroute,
    Factorization,
    Propagation,
    Frobenius,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// List the level-l weights of a finite or twisted affine type.
    Weights { ty: String, level: u32 },
    /// Compute an S-matrix.
    ///
    /// `smatrix untwisted A2 1`, `smatrix twisted D4~3 2 --via transpose`,
    /// `smatrix crossed A3 2 1` (finite type, automorphism order, level).
    Smatrix {
        kind: Kind,
        ty: String,
        /// The level, preceded by the automorphism order for `crossed`.
        #[arg(num_args = 1..=2, required = true)]
        args: Vec<u32>,
        #[arg(long, value_enum, default_value = "direct")]
        via: Via,
        /// Write to a file instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Untwisted fusion coefficients of a finite type at level l.
    Fusion { ty: String, level: u32 },
    /// Twisted fusion ring of a diagram automorphism of the given order.
    TwistedFusion { ty: String, order: u32, level: u32 },
    /// Rank of twisted conformal blocks for a cover described in JSON.
    Rank { spec: PathBuf },
    /// Run a built-in property suite.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        /// Corrupt one sign of every crossed S-matrix first (negative control).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

/// A command failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidType(_)
            | Error::InvalidSpec(_)
            | Error::InvalidWeight { .. }
            | Error::TypeMismatch { .. }
            | Error::Unsupported(_)
            | Error::Json(_) => 2,
            Error::GroupTooLarge { .. } => 3,
            Error::AmbiguousPhase { .. } => 4,
            Error::NonIntegralRank { .. }
            | Error::NegativeRank(_)
            | Error::NonIntegralConstant { .. } => 5,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

type CmdResult = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = Config {
        round_tol: cli.round_tol,
        unitary_tol: cli.unitary_tol,
        cache_dir: cli.cache_dir.clone().or_else(|| {
            std::env::var_os(CACHE_ENV)
                .filter(|v| !v.is_empty())
                .map(PathBuf::from)
        }),
        workers: cli.workers.unwrap_or(Config::default().workers),
        format: cli.format,
    };
    if let Err(msg) = cfg.validate() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    // Fails only if a pool already exists, which cannot happen here.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build_global();

    let result = match cli.command {
        Command::Weights { ty, level } => cmd_weights(&cfg, &ty, level),
        Command::Smatrix {
            kind,
            ty,
            args,
            via,
            output,
        } => cmd_smatrix(&cfg, kind, &ty, &args, via).and_then(|text| match output {
            Some(path) => std::fs::write(&path, &text)
                .map(|_| String::new())
                .map_err(|e| fail(1, format!("{}: {e}", path.display()))),
            None => Ok(text),
        }),
        Command::Fusion { ty, level } => cmd_fusion(&cfg, &ty, None, level),
        Command::TwistedFusion { ty, order, level } => cmd_fusion(&cfg, &ty, Some(order), level),
        Command::Rank { spec } => cmd_rank(&cfg, &spec),
        Command::Verify {
            suite,
            inject_fault,
        } => cmd_verify(suite, inject_fault),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            if f.code == 2 {
                eprintln!(
                    "error: {}\n\nusage: tvf <COMMAND> --help\n\n{TYPE_HELP}",
                    f.message
                );
            } else {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn parse_affine(s: &str) -> Result<TwistedAffineType, Failure> {
    s.parse().map_err(Failure::from)
}

fn parse_finite(s: &str) -> Result<FiniteType, Failure> {
    s.parse().map_err(Failure::from)
}

fn positive_level(level: u32) -> Result<u32, Failure> {
    if level == 0 {
        Err(fail(2, "level must be positive"))
    } else {
        Ok(level)
    }
}

/// `x` with 15 significant digits.
fn sig15(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let digits = (14 - x.abs().log10().floor() as i32).clamp(0, 20) as usize;
    let s = format!("{x:.digits$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn cmd_weights(cfg: &Config, ty: &str, level: u32) -> CmdResult {
    let t = parse_affine(ty)?;
    let list = enumerate_twisted_level_weights(&t, positive_level(level)?);
    Ok(match cfg.format {
        Format::Json => io::weights_to_json(&list) + "\n",
        Format::Csv => {
            let mut out = String::from("index,weight\n");
            for (i, w) in list.iter().enumerate() {
                let c: Vec<String> = w.coeffs().iter().map(|b| b.to_string()).collect();
                out += &format!("{i},[{}]\n", c.join(" "));
            }
            out
        }
        Format::Pretty => {
            let mut out = format!(
                "# {} level {}: {} weights over {}\n",
                t,
                level,
                list.len(),
                list.ty()
            );
            for w in list.iter() {
                out += &format!("{:<16} {:?}\n", w.to_string(), w.coeffs());
            }
            out
        }
    })
}

fn cached(
    cfg: &Config,
    formula: &str,
    label: &str,
    level: u32,
    compute: impl FnOnce() -> tvf_core::Result<SMatrixTable>,
) -> Result<SMatrixTable, Failure> {
    match &cfg.cache_dir {
        Some(dir) => Ok(Cache::new(dir).get_or_compute(formula, label, level, compute)?),
        None => Ok(compute()?),
    }
}

fn cmd_smatrix(cfg: &Config, kind: Kind, ty: &str, args: &[u32], via: Via) -> CmdResult {
    let s = match (kind, args) {
        (Kind::Untwisted, &[level]) => {
            let g = parse_finite(ty)?;
            let level = positive_level(level)?;
            cached(cfg, "untwisted", &g.to_string(), level, || {
                untwisted_smatrix(g, level)
            })?
        }
        (Kind::Twisted, &[level]) => {
            let t = parse_affine(ty)?;
            if !t.is_twisted() {
                return Err(fail(
                    2,
                    format!("{t} is not a twisted type; use `smatrix untwisted`"),
                ));
            }
            let level = positive_level(level)?;
            match via {
                Via::Direct => cached(cfg, "twisted_direct", &t.to_string(), level, || {
                    twisted_km_smatrix(&t, level)
                })?,
                Via::Transpose => cached(cfg, "twisted_transpose", &t.to_string(), level, || {
                    twisted_km_smatrix_via_transpose(&t, level)
                })?,
            }
        }
        (Kind::Crossed, &[order, level]) => {
            let g = parse_finite(ty)?;
            let sigma = DiagramAutomorphism::standard(g, order)?;
            let level = positive_level(level)?;
            let label = format!("{g}^{}", sigma.name());
            cached(cfg, "crossed", &label, level, || {
                crossed_smatrix(g, &sigma, level)
            })?
        }
        (Kind::Crossed, _) => return Err(fail(2, "usage: smatrix crossed <TYPE> <ORDER> <LEVEL>")),
        _ => return Err(fail(2, "usage: smatrix untwisted|twisted <TYPE> <LEVEL>")),
    };
    let deviation = s.unitarity_deviation();
    if deviation >= cfg.unitary_tol {
        return Err(fail(
            1,
            format!("S-matrix fails the unitarity tolerance: {deviation:e}"),
        ));
    }
    Ok(render_smatrix(cfg, &s))
}

fn render_smatrix(cfg: &Config, s: &SMatrixTable) -> String {
    match cfg.format {
        Format::Json => io::smatrix_to_json(s) + "\n",
        Format::Csv => io::smatrix_to_csv(s),
        Format::Pretty => {
            let meta = s.meta();
            let mut out = format!(
                "# {} S-matrix of {} at level {} ({} x {})\n# normalization: {}\n",
                meta.formula.as_str(),
                meta.type_label,
                meta.level,
                s.rows().len(),
                s.cols().len(),
                meta.normalization.description
            );
            for (w, row) in s.rows().iter().zip(s.entries()) {
                let cells: Vec<String> = row
                    .iter()
                    .map(|z| {
                        if z.im.abs() < 1e-15 {
                            sig15(z.re)
                        } else {
                            format!(
                                "{}{}{}i",
                                sig15(z.re),
                                if z.im < 0.0 { "-" } else { "+" },
                                sig15(z.im.abs())
                            )
                        }
                    })
                    .collect();
                out += &format!("{:<12} {}\n", w.to_string(), cells.join("  "));
            }
            out
        }
    }
}

fn cmd_fusion(cfg: &Config, ty: &str, order: Option<u32>, level: u32) -> CmdResult {
    let g = parse_finite(ty)?;
    let level = positive_level(level)?;
    let table = match order {
        None => untwisted_fusion(g, level)?,
        Some(m) => twisted_fusion(g, &DiagramAutomorphism::standard(g, m)?, level)?,
    };
    table.rounded()?;
    Ok(match cfg.format {
        Format::Json => io::fusion_to_json(&table) + "\n",
        Format::Csv => render_fusion(&table, ","),
        Format::Pretty => render_fusion(&table, "  "),
    })
}

fn render_fusion(table: &FusionTable, sep: &str) -> String {
    let basis = table.basis();
    let lattice = table.ring().lattice();
    let mut out = format!("lambda{sep}mu{sep}nu{sep}N\n");
    let n = table.len();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (p, _) = nearest_lattice_point(table.get(a, b, c), lattice);
                if p.a == 0 && p.b == 0 {
                    continue;
                }
                let value = match p.b {
                    0 => p.a.to_string(),
                    b => format!("{}{:+}w", p.a, b),
                };
                out += &format!(
                    "{}{sep}{}{sep}{}{sep}{}\n",
                    basis.get(a),
                    basis.get(b),
                    basis.get(c),
                    value
                );
            }
        }
    }
    out
}

fn cmd_rank(cfg: &Config, path: &PathBuf) -> CmdResult {
    let text =
        std::fs::read_to_string(path).map_err(|e| fail(2, format!("{}: {e}", path.display())))?;
    let spec = parse_cover_spec(&text)?;
    let eval = Evaluator::with_tolerance(cfg.round_tol);
    match eval.rank(&spec) {
        Ok(r) => Ok(format!(
            "{{\"rank\":{},\"residual\":{}}}\n",
            r.rank, r.residual
        )),
        Err(e @ Error::NonIntegralRank { .. }) => {
            if let Error::NonIntegralRank { re, im, residual } = e {
                println!("{{\"rank\":null,\"value\":[{re},{im}],\"residual\":{residual}}}");
            }
            Err(fail(
                5,
                "non-integral rank: the S-matrix phases or normalization are inconsistent",
            ))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_verify(suite: SuiteArg, inject_fault: bool) -> CmdResult {
    let fault = if inject_fault {
        Fault::FlipSign
    } else {
        Fault::None
    };
    let selected: Vec<Suite> = match suite {
        SuiteArg::Unitarity => vec![Suite::Unitarity],
        SuiteArg::Dualroute => vec![Suite::DualRoute],
        SuiteArg::Factorization => vec![Suite::Factorization],
        SuiteArg::Propagation => vec![Suite::Propagation],
        SuiteArg::Frobenius => vec![Suite::Frobenius],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let eval = Evaluator::new();
    let reports: Vec<_> = selected
        .into_iter()
        .map(|s| suites::run(s, fault, &eval))
        .collect();
    let passed = reports.iter().all(|r| r.passed);
    let doc = serde_json::json!({ "passed": passed, "suites": reports });
    let text = serde_json::to_string_pretty(&doc).expect("plain data serializes") + "\n";
    if passed {
        Ok(text)
    } else {
        print!("{text}");
        let first = reports
            .iter()
            .flat_map(|r| {
                r.failures()
                    .map(move |c| format!("{}: {} ({})", r.suite, c.case, c.detail))
            })
            .next();
        Err(fail(
            1,
            format!(
                "verification failed; first failure: {}",
                first.unwrap_or_default()
            ),
        ))
    }
}
