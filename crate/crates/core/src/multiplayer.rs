//! The n-player path: the δ-approximate selection operator `P`, its
//! iteration from the uniform distribution, floors `η_m(ε) = ε^m/m`, the
//! map `F_{ε,δ}`, and a damped fixed-point search whose result is checked
//! exactly.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::equilibrium::{verify_delta_almost, EquilibriumError, VerificationReport};
use crate::game_model::{k_values, BehaviorProfile, GameError, GameTree, InfosetId};
use crate::scalar::{rat_pow, snap_f64, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultiError {
    #[error("ε = {eps} exceeds 1/{m}")]
    EpsTooLarge { eps: String, m: usize },
    #[error("iterate left the floored simplex (implementation bug)")]
    ContainmentViolated,
    #[error("floors sum to at least one")]
    InfeasibleFloor,
    #[error("schedule value {0} is not representable in the selected numeric mode")]
    Underflow(String),
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Equilibrium(#[from] EquilibriumError),
}

/// `η_m(ε) = ε^m / m`.
pub fn eta<T: Scalar>(m: usize, eps: &T) -> T {
    eps.powu(m as u32) / T::from_int(m as i64)
}

/// `x` for `z ≤ 0`, `y` for `z ≥ δ`, linear in between.
pub fn deltasel<T: Scalar>(x: &T, y: &T, z: &T, delta: &T) -> T {
    if *z <= T::zero() {
        x.clone()
    } else if z >= delta {
        y.clone()
    } else {
        let t = z.clone() / delta.clone();
        (T::one() - t.clone()) * x.clone() + t * y.clone()
    }
}

/// `(P(x, v))_c = min_{c'} deltasel(x_c, ε x_{c'}, v_{c'} − v_c)`.
pub fn p_operator<T: Scalar>(x: &[T], v: &[T], delta: &T, eps: &T) -> Vec<T> {
    (0..x.len())
        .map(|c| {
            (0..x.len())
                .map(|c2| {
                    let z = v[c2].clone() - v[c].clone();
                    deltasel(&x[c], &(eps.clone() * x[c2].clone()), &z, delta)
                })
                .reduce(T::min_of)
                .expect("nonempty")
        })
        .collect()
}

/// `P^{∘2m²}(τ_m)` for the valuation `v`. Checks that every entry stays
/// above `η_m(ε)` and that the normalized result lies in `Δ_m^{η_m(ε)}`.
pub fn iterate_p<T: Scalar>(v: &[T], delta: &T, eps: &T) -> Result<Vec<T>, MultiError> {
    let m = v.len();
    if *eps > T::one() / T::from_int(m as i64) {
        return Err(MultiError::EpsTooLarge {
            eps: format!("{eps:?}"),
            m,
        });
    }
    let mut y = vec![T::one() / T::from_int(m as i64); m];
    for _ in 0..2 * m * m {
        y = p_operator(&y, v, delta, eps);
    }
    let floor = eta(m, eps);
    let total = y.iter().fold(T::zero(), |a, b| a + b.clone());
    let contained = y.iter().all(|c| *c >= floor) && y.iter().all(|c| c.clone() / total.clone() >= floor);
    if !contained {
        return Err(MultiError::ContainmentViolated);
    }
    Ok(y)
}

/// `x_c ≤ ε x_{c'}` whenever `v_c + δ ≤ v_{c'}`.
pub fn has_almost_proper_property<T: Scalar>(x: &[T], v: &[T], delta: &T, eps: &T) -> bool {
    (0..x.len()).all(|c| {
        (0..x.len()).all(|c2| v[c].clone() + delta.clone() > v[c2] || x[c] <= eps.clone() * x[c2].clone())
    })
}

/// Per-infoset floors `η_{m_h}(ε)`, or `η_{m_h}(ε²)` when `squared`.
#[derive(Debug, Clone, PartialEq)]
pub struct FloorSpec<T> {
    pub eps: T,
    pub squared: bool,
}

impl<T: Scalar> FloorSpec<T> {
    pub fn floor(&self, m: usize) -> T {
        if self.squared {
            eta(m, &(self.eps.clone() * self.eps.clone()))
        } else {
            eta(m, &self.eps)
        }
    }
}

/// Solves `Σ_c max(b_c − t, η) = 1` for `t` and maps `b_c ↦ max(b_c − t, η)`.
pub fn retract_local<T: Scalar>(local: &[T], floor: &T) -> Result<Vec<T>, MultiError> {
    let m = local.len();
    if T::from_int(m as i64) * floor.clone() >= T::one() {
        return Err(MultiError::InfeasibleFloor);
    }
    let mut sorted = local.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("comparable"));
    let mut top = T::zero();
    for k in 1..=m {
        top = top + sorted[k - 1].clone();
        let rest = T::from_int((m - k) as i64) * floor.clone();
        let t = (top.clone() + rest - T::one()) / T::from_int(k as i64);
        let lowest_active = sorted[k - 1].clone() - t.clone();
        let next_inactive = k == m || sorted[k].clone() - t.clone() <= *floor;
        if lowest_active >= *floor && next_inactive {
            return Ok(local
                .iter()
                .map(|b| T::max_of(b.clone() - t.clone(), floor.clone()))
                .collect());
        }
    }
    unreachable!("the piecewise-linear equation always has a root")
}

pub fn retract_to_floor<T: Scalar>(
    game: &GameTree,
    b: &BehaviorProfile<T>,
    floors: &FloorSpec<T>,
) -> Result<BehaviorProfile<T>, MultiError> {
    let probs = game
        .infosets()
        .iter()
        .zip(&b.probs)
        .map(|(h, local)| retract_local(local, &floors.floor(h.num_actions())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BehaviorProfile { probs })
}

/// `F_{ε,δ}(b)`: valuations, iterated `P`, normalization, per information set.
pub fn f_map<T: Scalar>(
    game: &GameTree,
    b: &BehaviorProfile<T>,
    eps: &T,
    delta: &T,
) -> Result<BehaviorProfile<T>, MultiError> {
    let probs = (0..game.num_infosets())
        .map(|h| {
            let v = k_values(game, b, InfosetId(h))?;
            let y = iterate_p(&v, delta, eps)?;
            let total = y.iter().fold(T::zero(), |a, c| a + c.clone());
            Ok(y.into_iter().map(|c| c / total.clone()).collect())
        })
        .collect::<Result<Vec<_>, MultiError>>()?;
    Ok(BehaviorProfile { probs })
}

pub fn residual<T: Scalar>(a: &BehaviorProfile<T>, b: &BehaviorProfile<T>) -> T {
    a.probs
        .iter()
        .flatten()
        .zip(b.probs.iter().flatten())
        .map(|(x, y)| (x.clone() - y.clone()).abs_val())
        .fold(T::zero(), T::max_of)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumericMode {
    Float,
    Rational,
}

/// Largest `2^q` accepted in rational mode; beyond it the exponentiated
/// rationals grow past any practical size.
pub const RATIONAL_SQUARING_CAP: u32 = 1 << 12;

/// `ε = (γ/2)^{2^{q₁}}`, `δ = min(γ/2, ε)^{2^{q₂}}`, by repeated squaring.
pub fn schedule_eps_delta(
    gamma: &Rational,
    squarings: (u32, u32),
    mode: NumericMode,
) -> Result<(Rational, Rational), MultiError> {
    let half = gamma / Rational::from_integer(2.into());
    if half <= Rational::zero() || half >= crate::scalar::rat(1, 4) {
        return Err(MultiError::BadConfig("γ must lie in (0, 1/2)".into()));
    }
    let square = |base: &Rational, q: u32| -> Result<Rational, MultiError> {
        match mode {
            NumericMode::Rational => {
                if q >= 32 || (1u64 << q) > RATIONAL_SQUARING_CAP as u64 {
                    return Err(MultiError::Underflow(format!("2^{q} squarings")));
                }
                Ok(rat_pow(base, 1 << q))
            }
            NumericMode::Float => {
                let mut x = base.approx_f64();
                for _ in 0..q {
                    x *= x;
                    if !x.is_normal() {
                        return Err(MultiError::Underflow(format!("after {q} squarings")));
                    }
                }
                Ok(snap_f64(x))
            }
        }
    };
    let eps = square(&half, squarings.0)?;
    let base = if half < eps { half.clone() } else { eps.clone() };
    let delta = square(&base, squarings.1)?;
    Ok((eps, delta))
}

/// Iterations without a new best residual before the step is halved.
pub const STALL_PATIENCE: usize = 25;
pub const MIN_DAMPING: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq)]
pub struct IterationConfig {
    pub damping: f64,
    pub max_iters: usize,
    pub tolerance: f64,
    pub restarts: usize,
    pub seed: u64,
    /// A verified profile whose exact residual is at most this ends the search.
    pub accept: f64,
}

impl Default for IterationConfig {
    fn default() -> Self {
        IterationConfig {
            damping: 0.5,
            max_iters: 2000,
            tolerance: 1e-12,
            restarts: 8,
            seed: 0,
            accept: 1e-8,
        }
    }
}

impl IterationConfig {
    fn validate(&self) -> Result<(), MultiError> {
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(MultiError::BadConfig("damping must lie in (0, 1]".into()));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(MultiError::BadConfig("tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    /// Exact profile: `F` applied once, in rationals, to the best float iterate.
    pub profile: BehaviorProfile<Rational>,
    /// `‖b − F(b)‖_∞` of `profile`, computed exactly.
    pub residual: Rational,
    /// Float residual of the best iterate before polishing.
    pub float_residual: f64,
    pub iterations: usize,
    pub restart: usize,
    pub report: VerificationReport,
}

fn random_start<R: Rng>(rng: &mut R, game: &GameTree, floors: &FloorSpec<f64>) -> Result<BehaviorProfile<f64>, MultiError> {
    let raw = BehaviorProfile {
        probs: game
            .infosets()
            .iter()
            .map(|h| {
                let w: Vec<f64> = (0..h.num_actions()).map(|_| rng.gen_range(0.05..1.0)).collect();
                let s: f64 = w.iter().sum();
                w.into_iter().map(|x| x / s).collect()
            })
            .collect(),
    };
    retract_to_floor(game, &raw, floors)
}

/// Damped iteration `b ← (1−λ)b + λF(b)` with restarts; λ starts at the
/// configured damping and halves whenever the residual stalls. If damping
/// does not reach `tolerance`, the best iterate is polished by Newton's
/// method, directly and along a δ-continuation path. The result is snapped
/// to rationals and turned into an exact candidate (see `exact_candidate`),
/// which is verified. The search stops at the first verified profile with
/// exact residual at most `accept`; otherwise it returns the best seen
/// (verified first, then by residual).
pub fn fixed_point_search(
    game: &GameTree,
    eps: &Rational,
    delta: &Rational,
    config: &IterationConfig,
) -> Result<SearchOutcome, MultiError> {
    config.validate()?;
    let eps_f = eps.approx_f64();
    let delta_f = delta.approx_f64();
    let floors = FloorSpec { eps: eps_f, squared: true };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut best: Option<SearchOutcome> = None;
    for restart in 0..=config.restarts {
        let mut b = if restart == 0 {
            BehaviorProfile::uniform(game)
        } else {
            random_start(&mut rng, game, &floors)?
        };
        let mut best_iter = (b.clone(), f64::INFINITY, 0);
        let mut lambda = config.damping;
        let mut phase_best = (f64::INFINITY, 0);
        for it in 0..config.max_iters {
            let fb = f_map(game, &b, &eps_f, &delta_f)?;
            let r = residual(&b, &fb);
            if r < best_iter.1 {
                best_iter = (b.clone(), r, it);
            }
            if r <= config.tolerance {
                break;
            }
            // steep selections make large steps oscillate; shrink on stalls
            if r < phase_best.0 {
                phase_best = (r, it);
            } else if it - phase_best.1 >= STALL_PATIENCE && lambda > MIN_DAMPING {
                lambda = (lambda / 2.0).max(MIN_DAMPING);
                phase_best = (f64::INFINITY, it);
            }
            b = BehaviorProfile {
                probs: b
                    .probs
                    .iter()
                    .zip(&fb.probs)
                    .map(|(x, y)| x.iter().zip(y).map(|(a, c)| (1.0 - lambda) * a + lambda * c).collect())
                    .collect(),
            };
        }
        let (mut candidate, mut float_residual, iterations) = best_iter;
        if float_residual > config.tolerance {
            let start = if restart == 0 { candidate.clone() } else { random_start(&mut rng, game, &floors)? };
            // polishing is heuristic; a failed attempt just yields nothing
            for polished in [
                newton_polish(game, &candidate, &eps_f, &delta_f, &floors, config.tolerance),
                delta_continuation(game, &start, &eps_f, &delta_f, &floors, config.tolerance),
            ]
            .into_iter()
            .filter_map(|p| p.ok().flatten())
            {
                if polished.1 < float_residual {
                    (candidate, float_residual) = polished;
                }
            }
        }
        let snapped = normalize_snap(&candidate);
        let (profile, exact) = exact_candidate(game, &snapped, float_residual, eps, delta, config.accept)?;
        let report = verify_delta_almost(game, &profile, eps, delta)?;
        let outcome = SearchOutcome {
            profile,
            residual: exact,
            float_residual,
            iterations,
            restart,
            report,
        };
        let passed = outcome.report.pass && outcome.residual.approx_f64() <= config.accept;
        let better = best.as_ref().is_none_or(|b| {
            (outcome.report.pass && !b.report.pass) || (outcome.report.pass == b.report.pass && outcome.residual < b.residual)
        });
        if better {
            best = Some(outcome);
        }
        if passed {
            break;
        }
    }
    Ok(best.expect("at least one restart"))
}

const NEWTON_STEPS: usize = 40;

/// Damping alone stalls where F is steep (slopes of order 1/δ inside the
/// selection band). Newton on `F(b) − b` over the free coordinates, with a
/// central-difference Jacobian and backtracking on the residual.
fn newton_polish(
    game: &GameTree,
    start: &BehaviorProfile<f64>,
    eps: &f64,
    delta: &f64,
    floors: &FloorSpec<f64>,
    tolerance: f64,
) -> Result<Option<(BehaviorProfile<f64>, f64)>, MultiError> {
    let free = free_coordinates(start);
    if free.is_empty() {
        return Ok(None);
    }
    let n = free.len();
    let with = |b: &BehaviorProfile<f64>, shift: &[f64]| shifted(b, &free, shift);
    let gap = |b: &BehaviorProfile<f64>| free_gap(game, b, &free, eps, delta);
    let score = |b: &BehaviorProfile<f64>| -> Result<f64, MultiError> { Ok(residual(b, &f_map(game, b, eps, delta)?)) };

    let mut b = start.clone();
    let mut r = score(&b)?;
    for _ in 0..NEWTON_STEPS {
        if r <= tolerance {
            break;
        }
        let g = gap(&b)?;
        let jac = gap_jacobian(game, &b, &free, eps, delta)?;
        let Some(dir) = jac.lu().solve(&nalgebra::DVector::from_iterator(n, g.iter().map(|x| -x))) else {
            break;
        };
        let mut t = 1.0;
        let mut improved = false;
        while t > 1e-6 {
            let shift: Vec<f64> = dir.iter().map(|d| t * d).collect();
            let trial = retract_to_floor(game, &with(&b, &shift), floors)?;
            let tr = score(&trial)?;
            if tr < r {
                (b, r, improved) = (trial, tr, true);
                break;
            }
            t /= 2.0;
        }
        if !improved {
            break;
        }
    }
    Ok(Some((b, r)))
}

/// `(infoset, action)` pairs except the last action of each infoset, which
/// is implied by the others.
fn free_coordinates<T>(b: &BehaviorProfile<T>) -> Vec<(usize, usize)> {
    b.probs
        .iter()
        .enumerate()
        .flat_map(|(h, local)| (0..local.len() - 1).map(move |a| (h, a)))
        .collect()
}

fn shifted<T: Scalar>(b: &BehaviorProfile<T>, free: &[(usize, usize)], shift: &[T]) -> BehaviorProfile<T> {
    let mut out = b.clone();
    for (&(h, a), d) in free.iter().zip(shift) {
        out.probs[h][a] = out.probs[h][a].clone() + d.clone();
        let last = out.probs[h].len() - 1;
        out.probs[h][last] = out.probs[h][last].clone() - d.clone();
    }
    out
}

fn free_gap<T: Scalar>(game: &GameTree, b: &BehaviorProfile<T>, free: &[(usize, usize)], eps: &T, delta: &T) -> Result<Vec<T>, MultiError> {
    let fb = f_map(game, b, eps, delta)?;
    Ok(free.iter().map(|&(h, a)| fb.probs[h][a].clone() - b.probs[h][a].clone()).collect())
}

/// Central differences, with a step well inside the selection band.
fn gap_jacobian(
    game: &GameTree,
    b: &BehaviorProfile<f64>,
    free: &[(usize, usize)],
    eps: &f64,
    delta: &f64,
) -> Result<nalgebra::DMatrix<f64>, MultiError> {
    let n = free.len();
    let mut jac = nalgebra::DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        // stay positive near the floors
        let (h, a) = free[j];
        let last = b.probs[h].len() - 1;
        let step = (1e-4 * delta.min(1.0)).min(0.5 * b.probs[h][a].min(b.probs[h][last]));
        let mut e = vec![0.0; n];
        e[j] = step;
        let plus = free_gap(game, &shifted(b, free, &e), free, eps, delta)?;
        e[j] = -step;
        let minus = free_gap(game, &shifted(b, free, &e), free, eps, delta)?;
        for i in 0..n {
            jac[(i, j)] = (plus[i] - minus[i]) / (2.0 * step);
        }
    }
    Ok(jac)
}

const CHORD_STEPS: usize = 4;

/// Chord steps on the exact profile: the gap is exact, the correction comes
/// from the float Jacobian. Corrections are tiny, so f64 is accurate enough
/// for them even though it cannot represent `b` to the needed precision.
/// Returns the best point and `F` of it.
fn exact_chord(
    game: &GameTree,
    b: &BehaviorProfile<Rational>,
    fb: BehaviorProfile<Rational>,
    eps: &Rational,
    delta: &Rational,
    target: &Rational,
) -> Result<(BehaviorProfile<Rational>, BehaviorProfile<Rational>), MultiError> {
    let free = free_coordinates(b);
    let (eps_f, delta_f) = (eps.approx_f64(), delta.approx_f64());
    let lu = gap_jacobian(game, &b.map(|x| x.approx_f64()), &free, &eps_f, &delta_f)?.lu();
    let mut r = residual(b, &fb);
    let (mut cur, mut fcur) = (b.clone(), fb);
    for _ in 0..CHORD_STEPS {
        if r <= *target {
            break;
        }
        let rhs = nalgebra::DVector::from_iterator(
            free.len(),
            free.iter().map(|&(h, a)| -(&fcur.probs[h][a] - &cur.probs[h][a]).approx_f64()),
        );
        let Some(dir) = lu.solve(&rhs) else { break };
        let shift: Vec<Rational> = dir.iter().map(|&d| snap_f64(d)).collect();
        let next = on_grid(&shifted(&cur, &free, &shift));
        if next.probs.iter().flatten().any(|x| *x <= Rational::zero()) {
            break;
        }
        let fnext = f_map(game, &next, eps, delta)?;
        let rn = residual(&next, &fnext);
        if rn >= r {
            break;
        }
        (cur, fcur, r) = (next, fnext, rn);
    }
    Ok((cur, fcur))
}

/// Rounds to multiples of 2⁻⁹⁶, keeping each local strategy summing to one;
/// exact F's cost grows with the bit length of its input.
fn on_grid(b: &BehaviorProfile<Rational>) -> BehaviorProfile<Rational> {
    let unit = Rational::new(1.into(), num_bigint::BigInt::from(1) << 96);
    let probs = b
        .probs
        .iter()
        .map(|local| {
            let last = local.len() - 1;
            let mut out: Vec<Rational> = local[..last].iter().map(|x| (x / &unit).round() * &unit).collect();
            let head: Rational = out.iter().sum();
            out.push(Rational::one() - head);
            out
        })
        .collect();
    BehaviorProfile { probs }
}

fn max_denominator_bits(b: &BehaviorProfile<Rational>) -> u64 {
    b.probs.iter().flatten().map(|x| x.denom().bits()).max().unwrap_or(0)
}

const CONTINUATION_TOLERANCE: f64 = 1e-9;

/// Newton along a path of shrinking `δ`. With `δ` above the payoff range
/// every pair of actions sits inside the selection band and F is gentle;
/// each stage warm-starts the next.
fn delta_continuation(
    game: &GameTree,
    start: &BehaviorProfile<f64>,
    eps: &f64,
    delta: &f64,
    floors: &FloorSpec<f64>,
    tolerance: f64,
) -> Result<Option<(BehaviorProfile<f64>, f64)>, MultiError> {
    let range = (0..game.num_players())
        .flat_map(|p| game.leaves().iter().map(move |&l| game.payoff(l, p).approx_f64().abs()))
        .fold(1.0, f64::max);
    // the path bends where actions enter or leave the band; shorten the
    // step when a stage fails and lengthen it again after successes
    let mut stage = 4.0 * range;
    let mut b = start.clone();
    let mut factor: f64 = 4.0;
    match newton_polish(game, &b, eps, &stage, floors, tolerance)? {
        Some((next, _)) => b = next,
        None => return Ok(None),
    }
    while stage > *delta && factor > 1.001 {
        let next_stage = (stage / factor).max(*delta);
        match newton_polish(game, &b, eps, &next_stage, floors, tolerance)? {
            Some((next, r)) if r <= CONTINUATION_TOLERANCE => {
                (b, stage) = (next, next_stage);
                factor = (factor * factor).min(4.0);
            }
            _ => factor = factor.sqrt(),
        }
    }
    newton_polish(game, &b, eps, delta, floors, tolerance)
}

/// Past this size an exact `F` of the image is too slow to be worth it.
const SMALL_BITS: u64 = 256;
/// Float residual below which the chord refinement is attempted.
const CHORD_GATE: f64 = 1e-6;

/// Picks the exact candidate for a float iterate, with its exact residual.
/// One application of F lands on F's locally constant pieces when the
/// iterate is outside every selection band; then `F(b)` is often an exact
/// fixed point. Inside a band, chord steps refine `b` first. The final
/// profile is always an image of F, which meets the ratio bounds exactly.
fn exact_candidate(
    game: &GameTree,
    snapped: &BehaviorProfile<Rational>,
    float_residual: f64,
    eps: &Rational,
    delta: &Rational,
    accept: f64,
) -> Result<(BehaviorProfile<Rational>, Rational), MultiError> {
    let mapped = f_map(game, snapped, eps, delta)?;
    if max_denominator_bits(&mapped) <= SMALL_BITS {
        let r = residual(&mapped, &f_map(game, &mapped, eps, delta)?);
        if r.is_zero() || float_residual > CHORD_GATE {
            return Ok((mapped, r));
        }
    } else if float_residual > CHORD_GATE {
        // not converged: report the iterate itself rather than pay for F(F(b))
        let r = residual(snapped, &mapped);
        return Ok((snapped.clone(), r));
    }
    let target = snap_f64(accept * 1e-8);
    let (_, image) = exact_chord(game, snapped, mapped, eps, delta, &target)?;
    let r = residual(&image, &f_map(game, &image, eps, delta)?);
    Ok((image, r))
}

/// Exact rationals from floats, renormalized so each local strategy sums to one.
fn normalize_snap(b: &BehaviorProfile<f64>) -> BehaviorProfile<Rational> {
    BehaviorProfile {
        probs: b
            .probs
            .iter()
            .map(|local| {
                let snapped: Vec<Rational> = local.iter().map(|&x| snap_f64(x.max(f64::MIN_POSITIVE))).collect();
                let total: Rational = snapped.iter().sum();
                snapped.into_iter().map(|x| x / &total).collect()
            })
            .collect(),
    }
}
