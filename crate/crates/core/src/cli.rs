//! The `qpe` driver: parse a game, run one solver mode, verify, and write a
//! result document. Exit codes: 0 verified, 2 verification failed, 1 error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::eps_field::EpsRat;
use crate::equilibrium::{
    extract_behavior, verify_delta_almost, verify_eps_quasi_proper, verify_nash, verify_samples, Provenance,
    SymbolicEquilibrium, VerificationReport, VerifyMode,
};
use crate::game_format::{self, emit_result, fraction, parse_rational, Check, ResultDocument, ResultMode};
use crate::game_model::{BehaviorProfile, GameTree};
use crate::multiplayer::{fixed_point_search, schedule_eps_delta, IterationConfig, NumericMode, RATIONAL_SQUARING_CAP};
use crate::permutahedron::DEFAULT_FACET_THRESHOLD;
use crate::pivot_solver::{simplex_zero_sum, solve_two_player, DEFAULT_MAX_PIVOTS};
use crate::scalar::{rat, Rational};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Solve2p,
    SolveZs,
    SolveN,
    Verify,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s.trim()).ok_or_else(|| format!("{s:?} is not an integer or p/q"))
}

fn squarings_arg(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or("expected N,N")?;
    let n = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    Ok((n(a)?, n(b)?))
}

#[derive(Debug, Clone, Parser)]
#[command(name = "qpe", version, about = "Exact quasi-proper equilibria of extensive-form games")]
pub struct RunConfig {
    /// Game file (.qpef).
    #[arg(long, value_name = "FILE")]
    pub game: PathBuf,
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// ε for solve-n; the tested ratio for verify.
    #[arg(long, value_name = "R", value_parser = rational_arg)]
    pub eps: Option<Rational>,
    /// δ for solve-n and verify (δ-almost check).
    #[arg(long, value_name = "R", value_parser = rational_arg)]
    pub delta: Option<Rational>,
    /// Derive ε and δ from γ by repeated squaring (solve-n).
    #[arg(long, value_name = "R", value_parser = rational_arg)]
    pub gamma: Option<Rational>,
    /// Squaring counts q₁,q₂ used with --gamma.
    #[arg(long, value_name = "N,N", value_parser = squarings_arg)]
    pub squarings: Option<(u32, u32)>,
    /// Comma-separated ε₀ samples for verification.
    #[arg(long, value_name = "LIST", value_delimiter = ',', value_parser = rational_arg)]
    pub check_eps: Option<Vec<Rational>>,
    /// Largest information-set size that gets Rado facets; larger ones use
    /// the comparator-network formulation.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_FACET_THRESHOLD)]
    pub facet_threshold: usize,
    /// Pivot budget (solve2p, solve-zs) or iteration budget (solve-n).
    #[arg(long, value_name = "N")]
    pub max_iters: Option<usize>,
    #[arg(long, value_name = "R", default_value_t = 0.5)]
    pub damping: f64,
    #[arg(long, value_name = "N", default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, value_name = "N", default_value_t = 0)]
    pub seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Behavior profile to check (verify mode).
    #[arg(long, value_name = "FILE")]
    pub profile: Option<PathBuf>,
}

pub const DEFAULT_MULTI_EPS: (i64, i64) = (1, 20);
pub const DEFAULT_MULTI_DELTA: (i64, i64) = (1, 10_000);

fn default_samples() -> Vec<Rational> {
    vec![rat(1, 100), rat(1, 10_000)]
}

impl RunConfig {
    fn check_flags(&self) -> Result<(), String> {
        let reject = |present: bool, flag: &str| {
            if present {
                Err(format!("--{flag} is not used in mode {:?}", self.mode))
            } else {
                Ok(())
            }
        };
        match self.mode {
            Mode::Solve2p | Mode::SolveZs => {
                reject(self.eps.is_some(), "eps")?;
                reject(self.delta.is_some(), "delta")?;
                reject(self.gamma.is_some(), "gamma")?;
                reject(self.squarings.is_some(), "squarings")?;
                reject(self.profile.is_some(), "profile")?;
            }
            Mode::SolveN => {
                reject(self.profile.is_some(), "profile")?;
                reject(self.check_eps.is_some(), "check-eps")?;
                if self.gamma.is_some() != self.squarings.is_some() {
                    return Err("--gamma and --squarings go together".into());
                }
                if self.gamma.is_some() && (self.eps.is_some() || self.delta.is_some()) {
                    return Err("--gamma replaces --eps and --delta".into());
                }
            }
            Mode::Verify => {
                if self.profile.is_none() {
                    return Err("verify needs --profile".into());
                }
                reject(self.gamma.is_some(), "gamma")?;
                reject(self.squarings.is_some(), "squarings")?;
                if self.eps.is_some() && self.check_eps.is_some() {
                    return Err("--eps and --check-eps both set the tested ratio".into());
                }
            }
        }
        if let Some(list) = &self.check_eps {
            if list.is_empty() || list.iter().any(|e| *e <= Rational::from_integer(0.into())) {
                return Err("--check-eps values must be positive".into());
            }
        }
        Ok(())
    }

    fn samples(&self) -> Vec<Rational> {
        self.check_eps.clone().unwrap_or_else(default_samples)
    }
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn symbolic_checks(
    game: &GameTree,
    eq: &SymbolicEquilibrium,
    samples: &[Rational],
    doc: &mut ResultDocument,
) -> Result<(), String> {
    let (reports, best) = verify_samples(game, eq, samples).map_err(|e| e.to_string())?;
    for (i, (eps0, report)) in reports.into_iter().enumerate() {
        doc.checks.push(Check {
            name: format!("sample{}", i + 1),
            eps0: Some(eps0),
            report,
        });
    }
    let nash = verify_nash(game, &eq.limit).map_err(|e| e.to_string())?;
    doc.checks.push(Check {
        name: "limit-nash".into(),
        eps0: None,
        report: nash,
    });
    doc.extra.insert(
        "verify.largest-passing-eps0".into(),
        best.map_or_else(|| "none".into(), |b| fraction(&b)),
    );
    doc.add_symbolic(game, &eq.behavior);
    Ok(())
}

fn two_player(config: &RunConfig, game: &GameTree) -> Result<ResultDocument, String> {
    let budget = config.max_iters.unwrap_or(DEFAULT_MAX_PIVOTS);
    let mut doc;
    let eq = if config.mode == Mode::Solve2p {
        doc = ResultDocument::new(ResultMode::TwoPlayer);
        let sol = solve_two_player(game, config.facet_threshold, budget).map_err(|e| e.to_string())?;
        doc.extra.insert("solver.pivots".into(), sol.pivots.to_string());
        doc.extra.insert("solver.lcp-dimension".into(), sol.lcp.dim().to_string());
        extract_behavior(game, &sol.polytopes, &sol.plans, Provenance::Lcp).map_err(|e| e.to_string())?
    } else {
        doc = ResultDocument::new(ResultMode::ZeroSum);
        let sol = simplex_zero_sum(game, config.facet_threshold, budget).map_err(|e| e.to_string())?;
        doc.extra.insert("solver.pivots".into(), sol.pivots.to_string());
        doc.value = Some(EpsRat::from_poly(sol.value.clone()));
        extract_behavior(game, &sol.polytopes, &sol.plans, Provenance::Lp).map_err(|e| e.to_string())?
    };
    symbolic_checks(game, &eq, &config.samples(), &mut doc)?;
    Ok(doc)
}

fn multiplayer(config: &RunConfig, game: &GameTree) -> Result<ResultDocument, String> {
    let (eps, delta) = match (&config.gamma, config.squarings) {
        (Some(gamma), Some(q)) => {
            let fits = q.0 < 32 && q.1 < 32 && (1u64 << q.0.max(q.1)) <= RATIONAL_SQUARING_CAP as u64;
            let mode = if fits { NumericMode::Rational } else { NumericMode::Float };
            schedule_eps_delta(gamma, q, mode).map_err(|e| e.to_string())?
        }
        _ => (
            config.eps.clone().unwrap_or_else(|| rat(DEFAULT_MULTI_EPS.0, DEFAULT_MULTI_EPS.1)),
            config.delta.clone().unwrap_or_else(|| rat(DEFAULT_MULTI_DELTA.0, DEFAULT_MULTI_DELTA.1)),
        ),
    };
    let mut iter = IterationConfig {
        damping: config.damping,
        restarts: config.restarts,
        seed: config.seed,
        ..IterationConfig::default()
    };
    if let Some(n) = config.max_iters {
        iter.max_iters = n;
    }
    let out = fixed_point_search(game, &eps, &delta, &iter).map_err(|e| e.to_string())?;
    let mut doc = ResultDocument::new(ResultMode::Multiplayer);
    doc.add_exact(game, &out.profile);
    doc.extra.insert("multiplayer.eps".into(), fraction(&eps));
    doc.extra.insert("multiplayer.delta".into(), fraction(&delta));
    doc.extra.insert("multiplayer.residual".into(), format!("{:e}", crate::scalar::Scalar::approx_f64(&out.residual)));
    doc.extra.insert("multiplayer.float-residual".into(), format!("{:e}", out.float_residual));
    doc.extra.insert("multiplayer.iterations".into(), out.iterations.to_string());
    doc.extra.insert("multiplayer.restart".into(), out.restart.to_string());
    doc.checks.push(Check {
        name: "delta-almost".into(),
        eps0: Some(eps),
        report: out.report,
    });
    Ok(doc)
}

fn verify(config: &RunConfig, game: &GameTree) -> Result<ResultDocument, String> {
    let path = config.profile.as_ref().expect("checked");
    let profile: BehaviorProfile<Rational> = game_format::parse_profile(&read(path)?, game)
        .map_err(|e| format!("{}:{e}", path.display()))?;
    let mut doc = ResultDocument::new(ResultMode::Verify);
    doc.add_exact(game, &profile);
    let ratios = match &config.eps {
        Some(e) => vec![e.clone()],
        None => config.samples(),
    };
    let mixed = profile.is_fully_mixed();
    if !mixed {
        doc.extra.insert("verify.note".into(), "profile is not fully mixed".into());
    }
    for (i, eps0) in ratios.into_iter().enumerate() {
        let report = if !mixed {
            let mode = match &config.delta {
                Some(d) => VerifyMode::DeltaAlmost {
                    ratio: eps0.clone(),
                    delta: d.clone(),
                },
                None => VerifyMode::QuasiProper { ratio: eps0.clone() },
            };
            VerificationReport {
                mode,
                pass: false,
                violations: Vec::new(),
            }
        } else {
            match &config.delta {
                Some(d) => verify_delta_almost(game, &profile, &eps0, d),
                None => verify_eps_quasi_proper(game, &profile, &eps0),
            }
            .map_err(|e| e.to_string())?
        };
        doc.checks.push(Check {
            name: format!("sample{}", i + 1),
            eps0: Some(eps0),
            report,
        });
    }
    Ok(doc)
}

/// Runs one command; all output goes to `stdout`, `stderr`, or `--out`.
pub fn execute(config: &RunConfig, stdout: &mut dyn Write) -> Result<bool, String> {
    config.check_flags()?;
    let text = read(&config.game)?;
    let game = game_format::parse(&text)
        .map_err(|e| format!("{}:{e}", config.game.display()))?
        .game;
    let doc = match config.mode {
        Mode::Solve2p | Mode::SolveZs => two_player(config, &game)?,
        Mode::SolveN => multiplayer(config, &game)?,
        Mode::Verify => verify(config, &game)?,
    };
    let rendered = emit_result(&doc);
    match &config.out {
        Some(path) => std::fs::write(path, &rendered).map_err(|e| format!("{}: {e}", path.display()))?,
        None => stdout.write_all(rendered.as_bytes()).map_err(|e| e.to_string())?,
    }
    Ok(doc.pass())
}

/// Parses `argv` (program name first) and runs; returns the exit code.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&config, stdout) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(msg) => {
            let _ = writeln!(stderr, "qpe: {msg}");
            EXIT_ERROR
        }
    }
}
