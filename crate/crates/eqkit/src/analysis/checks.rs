//! The individual structural checks.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use super::fd;
use super::{
    check_rng, tol_for, CheckVerdict, FdConfig, Witness, QC_GRID_POINTS, QC_OPPONENT_SAMPLES,
    SCALABILITY_ALPHA_MAX, STANDARD_BR_SAMPLES,
};
use crate::error::{Error, Result};
use crate::game::{linspace, Game, Strategy, StrategyProfile, StrategySpace};

const SALT_QC: u64 = 1;
const SALT_SMOD: u64 = 2;
const SALT_POTENTIAL: u64 = 3;
const SALT_EXACT_POT: u64 = 4;
const SALT_DSC: u64 = 5;
const SALT_STANDARD: u64 = 6;

/// Candidate potential function oracle.
pub type PotentialFn = Arc<dyn Fn(&StrategyProfile) -> f64 + Send + Sync>;

// ---------------------------------------------------------------------------
// Quasi-concavity
// ---------------------------------------------------------------------------

/// Single-variable quasi-concavity of `u_player(. , s_-player)` tested on a
/// grid for sampled opponent profiles, via the no-interior-strict-dip
/// criterion: no triple `a < b < c` with `u(b) < min(u(a), u(c)) - tol`.
pub fn check_quasiconcavity(game: &Game, player: usize, cfg: &FdConfig) -> Result<CheckVerdict> {
    cfg.validate()?;
    let (lo, hi) = game.space(player).bounds().ok_or_else(|| {
        Error::Unsupported(format!(
            "quasi-concavity check needs an interval space for player {player}"
        ))
    })?;
    let mut rng = check_rng(cfg.seed, SALT_QC.wrapping_add(player as u64));
    let opponents = opponent_profiles(game, player, QC_OPPONENT_SAMPLES, &mut rng);
    let xs = linspace(lo, hi, QC_GRID_POINTS);

    // First pass: evaluate all slices and establish the magnitude scale.
    let mut slices: Vec<(StrategyProfile, Vec<f64>)> = Vec::with_capacity(opponents.len());
    let mut scale = 0.0f64;
    for others in opponents {
        let mut probe = others.clone();
        let mut vals = Vec::with_capacity(xs.len());
        for &x in &xs {
            probe.set(player, Strategy::Real(x));
            let u = game.utility_of(player, &probe)?;
            scale = scale.max(u.abs());
            vals.push(u);
        }
        slices.push((others, vals));
    }
    let tol = tol_for(scale);
    let samples = slices.len() * xs.len();

    for (others, vals) in &slices {
        if let Some((a, b, c)) = deepest_dip(vals, tol) {
            let witness = Witness::InteriorDip {
                player,
                profile: others.with_real(player, xs[a]),
                triple: [xs[a], xs[b], xs[c]],
                values: [vals[a], vals[b], vals[c]],
            };
            return Ok(CheckVerdict::counterexample(witness, samples, tol));
        }
    }
    Ok(CheckVerdict::holds_on(samples, tol))
}

/// Re-evaluate an interior-dip witness; returns the replayed violation
/// margin `min(u(a), u(c)) - u(b)` (positive means the dip is real).
pub fn replay_dip(game: &Game, witness: &Witness) -> Result<f64> {
    match witness {
        Witness::InteriorDip {
            player,
            profile,
            triple,
            ..
        } => {
            let u = |x: f64| game.utility_of(*player, &profile.with_real(*player, x));
            let (ua, ub, uc) = (u(triple[0])?, u(triple[1])?, u(triple[2])?);
            Ok(ua.min(uc) - ub)
        }
        _ => Err(Error::Parameter("witness is not an interior dip".into())),
    }
}

/// Deepest strict dip `(a, b, c)` on a value grid, if any.
fn deepest_dip(vals: &[f64], tol: f64) -> Option<(usize, usize, usize)> {
    let n = vals.len();
    // prefix_max[k] = argmax of vals[..=k]; suffix_max[k] = argmax of vals[k..]
    let mut prefix = vec![0usize; n];
    for k in 1..n {
        prefix[k] = if vals[k] > vals[prefix[k - 1]] {
            k
        } else {
            prefix[k - 1]
        };
    }
    let mut suffix = vec![n - 1; n];
    for k in (0..n - 1).rev() {
        suffix[k] = if vals[k] > vals[suffix[k + 1]] {
            k
        } else {
            suffix[k + 1]
        };
    }
    let mut best: Option<(usize, usize, usize, f64)> = None;
    for b in 1..n - 1 {
        let a = prefix[b - 1];
        let c = suffix[b + 1];
        let depth = vals[a].min(vals[c]) - vals[b];
        if depth > tol {
            match best {
                Some((_, _, _, d)) if d >= depth => {}
                _ => best = Some((a, b, c, depth)),
            }
        }
    }
    best.map(|(a, b, c, _)| (a, b, c))
}

/// Anchor profiles (all-lower, midpoint, all-upper) plus seeded random
/// opponent draws; the checked player's own slot is a placeholder that the
/// caller overwrites.
fn opponent_profiles(
    game: &Game,
    player: usize,
    random_count: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Vec<StrategyProfile> {
    let anchor = |which: u8| -> StrategyProfile {
        let values = game
            .spaces()
            .iter()
            .map(|s| match s {
                StrategySpace::Interval { lower, upper } => Strategy::Real(match which {
                    0 => *lower,
                    1 => 0.5 * (lower + upper),
                    _ => *upper,
                }),
                StrategySpace::Finite { actions } => Strategy::Action(match which {
                    0 => 0,
                    1 => actions / 2,
                    _ => actions - 1,
                }),
            })
            .collect();
        StrategyProfile::new(values)
    };
    let mut out = vec![anchor(0), anchor(1), anchor(2)];
    for _ in 0..random_count {
        let values = game
            .spaces()
            .iter()
            .enumerate()
            .map(|(i, s)| {
                if i == player {
                    // placeholder; overwritten during the scan
                    match s {
                        StrategySpace::Interval { lower, .. } => Strategy::Real(*lower),
                        StrategySpace::Finite { .. } => Strategy::Action(0),
                    }
                } else {
                    match s {
                        StrategySpace::Interval { lower, upper } => {
                            Strategy::Real(rng.gen_range(*lower..*upper))
                        }
                        StrategySpace::Finite { actions } => {
                            Strategy::Action(rng.gen_range(0..*actions))
                        }
                    }
                }
            })
            .collect();
        out.push(StrategyProfile::new(values));
    }
    out
}

// ---------------------------------------------------------------------------
// S-modularity
// ---------------------------------------------------------------------------

/// Verdicts for both S-modularity signs over the same samples.
#[derive(Debug, Clone, Serialize)]
pub struct SModularVerdicts {
    /// All sampled cross-partials `>= -tol`.
    pub supermodular: CheckVerdict,
    /// All sampled cross-partials `<= tol`.
    pub submodular: CheckVerdict,
}

const LATTICE_CAP: usize = 2048;

/// Central finite-difference cross-partials of every `u_i` w.r.t.
/// `(s_i, s_j)` for all ordered pairs `i != j`, sampled on an interior
/// lattice.
pub fn check_smodular(game: &Game, cfg: &FdConfig) -> Result<SModularVerdicts> {
    cfg.validate()?;
    let h = fd::steps(game, cfg.step_rel)?;
    let mut rng = check_rng(cfg.seed, SALT_SMOD);
    let points = fd::interior_lattice(game, cfg.grid_points, &h, LATTICE_CAP, &mut rng)?;
    let k = game.player_count();

    let mut samples = 0usize;
    let mut scale = 0.0f64;
    let mut most_negative: Option<(f64, Witness)> = None;
    let mut most_positive: Option<(f64, Witness)> = None;
    for point in &points {
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                let d = fd::cross_partial(game, i, i, j, point, h[i], h[j])?;
                samples += 1;
                scale = scale.max(d.abs());
                let witness = || Witness::CrossPartial {
                    player: i,
                    other: j,
                    point: point.clone(),
                    value: d,
                };
                if most_negative.as_ref().is_none_or(|(v, _)| d < *v) {
                    most_negative = Some((d, witness()));
                }
                if most_positive.as_ref().is_none_or(|(v, _)| d > *v) {
                    most_positive = Some((d, witness()));
                }
            }
        }
    }
    let tol = tol_for(scale);
    let supermodular = match most_negative {
        Some((v, w)) if v < -tol => CheckVerdict::counterexample(w, samples, tol),
        _ => CheckVerdict::holds_on(samples, tol),
    };
    let submodular = match most_positive {
        Some((v, w)) if v > tol => CheckVerdict::counterexample(w, samples, tol),
        _ => CheckVerdict::holds_on(samples, tol),
    };
    Ok(SModularVerdicts {
        supermodular,
        submodular,
    })
}

// ---------------------------------------------------------------------------
// Potential conditions
// ---------------------------------------------------------------------------

/// Cross-partial potential condition on interval games:
/// `d2(u_i - u_j)/ds_i ds_j = 0` for all pairs, sampled by finite
/// differences. Holds when every sampled |difference| stays within the
/// tolerance scaled by the largest sampled |cross-partial| (floor 1).
pub fn check_potential_condition(game: &Game, cfg: &FdConfig) -> Result<CheckVerdict> {
    cfg.validate()?;
    let h = fd::steps(game, cfg.step_rel)?;
    let mut rng = check_rng(cfg.seed, SALT_POTENTIAL);
    let points = fd::interior_lattice(game, cfg.grid_points, &h, LATTICE_CAP, &mut rng)?;
    let k = game.player_count();

    let mut samples = 0usize;
    let mut scale = 0.0f64;
    let mut worst: Option<(f64, Witness)> = None;
    for point in &points {
        for i in 0..k {
            for j in (i + 1)..k {
                let d_i = fd::cross_partial(game, i, i, j, point, h[i], h[j])?;
                let d_j = fd::cross_partial(game, j, i, j, point, h[i], h[j])?;
                samples += 1;
                scale = scale.max(d_i.abs()).max(d_j.abs());
                let diff = d_i - d_j;
                if worst.as_ref().is_none_or(|(v, _)| diff.abs() > v.abs()) {
                    worst = Some((
                        diff,
                        Witness::PotentialCross {
                            i,
                            j,
                            point: point.clone(),
                            value: diff,
                        },
                    ));
                }
            }
        }
    }
    let tol = tol_for(scale);
    match worst {
        Some((v, w)) if v.abs() > tol => Ok(CheckVerdict::counterexample(w, samples, tol)),
        _ => Ok(CheckVerdict::holds_on(samples, tol)),
    }
}

/// Exact vs ordinal potential verification mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PotentialKind {
    /// Utility change equals potential change on unilateral deviations.
    Exact,
    /// Utility change and potential change agree in sign (zero within
    /// tolerance agrees with anything).
    Ordinal,
}

/// Sample unilateral deviations `(s, i, s_i')` and compare the utility
/// change of the deviating player against the candidate potential's change.
pub fn verify_exact_potential(
    game: &Game,
    phi: &PotentialFn,
    kind: PotentialKind,
    cfg: &FdConfig,
) -> Result<CheckVerdict> {
    cfg.validate()?;
    let mut rng = check_rng(cfg.seed, SALT_EXACT_POT);
    let k = game.player_count();

    let mut draws: Vec<(StrategyProfile, usize, Strategy, f64, f64)> =
        Vec::with_capacity(cfg.deviation_samples);
    let mut scale = 0.0f64;
    for _ in 0..cfg.deviation_samples {
        let profile = random_profile(game, &mut rng);
        let player = rng.gen_range(0..k);
        let deviation = random_strategy(game.space(player), &mut rng);
        let deviated = {
            let mut p = profile.clone();
            p.set(player, deviation);
            p
        };
        let du = game.utility_of(player, &profile)? - game.utility_of(player, &deviated)?;
        let dphi = phi(&profile) - phi(&deviated);
        if !dphi.is_finite() {
            return Err(Error::NonFiniteUtility {
                profile: profile.to_string(),
            });
        }
        scale = scale.max(du.abs());
        draws.push((profile, player, deviation, du, dphi));
    }
    let tol = tol_for(scale);
    for (profile, player, deviation, du, dphi) in draws {
        let violated = match kind {
            PotentialKind::Exact => (du - dphi).abs() > tol,
            PotentialKind::Ordinal => {
                let su = sign_with_tol(du, tol);
                let sp = sign_with_tol(dphi, tol);
                su != 0 && sp != 0 && su != sp
            }
        };
        if violated {
            let w = Witness::DeviationMismatch {
                profile,
                player,
                deviation,
                utility_delta: du,
                potential_delta: dphi,
            };
            return Ok(CheckVerdict::counterexample(w, cfg.deviation_samples, tol));
        }
    }
    Ok(CheckVerdict::holds_on(cfg.deviation_samples, tol))
}

fn sign_with_tol(x: f64, tol: f64) -> i8 {
    if x > tol {
        1
    } else if x < -tol {
        -1
    } else {
        0
    }
}

fn random_profile(game: &Game, rng: &mut rand_chacha::ChaCha8Rng) -> StrategyProfile {
    let values = game
        .spaces()
        .iter()
        .map(|s| random_strategy(s, rng))
        .collect();
    StrategyProfile::new(values)
}

fn random_strategy(space: &StrategySpace, rng: &mut rand_chacha::ChaCha8Rng) -> Strategy {
    match space {
        StrategySpace::Interval { lower, upper } => Strategy::Real(rng.gen_range(*lower..*upper)),
        StrategySpace::Finite { actions } => Strategy::Action(rng.gen_range(0..*actions)),
    }
}

// ---------------------------------------------------------------------------
// Diagonally strict concavity
// ---------------------------------------------------------------------------

/// Sign convention for the sampled pseudogradient pairing
/// `(s - s') . (g(s) - g(s'))`.
///
/// On the theorem's own premise class (concave utilities) the pairing is
/// negative — a decoupled concave quadratic gives exactly `-2 ||s - s'||^2`
/// with unit weights — so `Negative` is the default. `Positive` selects the
/// opposite orientation for texts that state the condition as `> 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DscConvention {
    Negative,
    Positive,
}

/// DSC verdict plus the worst (closest-to-accepting-boundary) sampled
/// normalized pairing value.
#[derive(Debug, Clone, Serialize)]
pub struct DscVerdict {
    pub verdict: CheckVerdict,
    pub convention: DscConvention,
    /// Max (Negative convention) or min (Positive) of the normalized
    /// pairing over sampled pairs.
    pub worst_margin: f64,
    /// Pairs skipped because the endpoints were closer than the FD step.
    pub degenerate_pairs: usize,
}

/// Sample pairs `(s, s')`, compute the weighted finite-difference
/// pseudogradient pairing normalized by `||s - s'||^2 * max(r)`, and test
/// its sign definiteness under the chosen convention. Normalization makes
/// the verdict invariant to rescaling all weights by a common factor.
pub fn check_dsc(
    game: &Game,
    weights: &[f64],
    convention: DscConvention,
    cfg: &FdConfig,
) -> Result<DscVerdict> {
    cfg.validate()?;
    if weights.len() != game.player_count() {
        return Err(Error::DimensionMismatch(format!(
            "{} weights for {} players",
            weights.len(),
            game.player_count()
        )));
    }
    if weights.iter().any(|&r| !r.is_finite() || r <= 0.0) {
        return Err(Error::Parameter(
            "DSC weights must be strictly positive".into(),
        ));
    }
    let h = fd::steps(game, cfg.step_rel)?;
    let h_max = h.iter().cloned().fold(0.0f64, f64::max);
    let r_max = weights.iter().cloned().fold(0.0f64, f64::max);
    let mut rng = check_rng(cfg.seed, SALT_DSC);
    let k = game.player_count();

    let mut degenerate = 0usize;
    let mut samples = 0usize;
    let mut values: Vec<(f64, Vec<f64>, Vec<f64>)> = Vec::with_capacity(cfg.pair_samples);
    let mut scale = 0.0f64;
    while samples + degenerate < cfg.pair_samples {
        let s = fd::random_interior_point(game, &h, &mut rng);
        let s2 = fd::random_interior_point(game, &h, &mut rng);
        let dist2: f64 = s.iter().zip(&s2).map(|(a, b)| (a - b) * (a - b)).sum();
        if dist2.sqrt() < h_max {
            degenerate += 1;
            continue;
        }
        let mut pairing = 0.0;
        for i in 0..k {
            let gi = weights[i] * fd::partial(game, i, i, &s, h[i])?;
            let gi2 = weights[i] * fd::partial(game, i, i, &s2, h[i])?;
            pairing += (s[i] - s2[i]) * (gi - gi2);
        }
        let normalized = pairing / (dist2 * r_max);
        scale = scale.max(normalized.abs());
        values.push((normalized, s, s2));
        samples += 1;
    }
    let tol = tol_for(scale);

    let (worst_margin, violator) = match convention {
        DscConvention::Negative => {
            let worst = values
                .iter()
                .cloned()
                .max_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
                .expect("at least one sampled pair");
            let bad = worst.0 > -tol;
            (worst, bad)
        }
        DscConvention::Positive => {
            let worst = values
                .iter()
                .cloned()
                .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
                .expect("at least one sampled pair");
            let bad = worst.0 < tol;
            (worst, bad)
        }
    };
    let (value, s, s2) = worst_margin;
    let verdict = if violator {
        CheckVerdict::counterexample(
            Witness::SignIndefinite {
                s,
                s_prime: s2,
                value,
            },
            samples,
            tol,
        )
    } else {
        CheckVerdict::holds_on(samples, tol)
    };
    Ok(DscVerdict {
        verdict,
        convention,
        worst_margin: value,
        degenerate_pairs: degenerate,
    })
}

// ---------------------------------------------------------------------------
// Standard best responses
// ---------------------------------------------------------------------------

/// Per-property and combined verdicts for the standard-function check.
#[derive(Debug, Clone, Serialize)]
pub struct StandardBrVerdict {
    pub monotonicity: CheckVerdict,
    pub scalability: CheckVerdict,
}

impl StandardBrVerdict {
    pub fn holds(&self) -> bool {
        self.monotonicity.holds() && self.scalability.holds()
    }
}

/// Test a nonnegative vector map on the box `[0, upper]` for monotonicity
/// (`x <= x'` componentwise implies `g(x) <= g(x')`) and scalability
/// (`g(alpha x) < alpha g(x)` for `alpha > 1`), on seeded samples.
pub fn check_standard_br<F>(br: F, upper: &[f64], cfg: &FdConfig) -> Result<StandardBrVerdict>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    cfg.validate()?;
    if upper.iter().any(|&u| !u.is_finite() || u <= 0.0) {
        return Err(Error::Parameter(
            "sampling box upper bounds must be positive".into(),
        ));
    }
    let k = upper.len();
    let mut rng = check_rng(cfg.seed, SALT_STANDARD);
    let eval = |x: &[f64]| -> Result<Vec<f64>> {
        let g = br(x);
        if g.len() != k {
            return Err(Error::DimensionMismatch(format!(
                "map returned {} components for {k} inputs",
                g.len()
            )));
        }
        if let Some(c) = g.iter().position(|&v| !v.is_finite() || v < 0.0) {
            return Err(Error::Domain {
                player: c,
                detail: format!("map returned a negative or non-finite component at {x:?}"),
            });
        }
        Ok(g)
    };

    // Monotonicity on comparable pairs.
    let mut mono_draws = Vec::with_capacity(STANDARD_BR_SAMPLES);
    let mut scale = 0.0f64;
    for _ in 0..STANDARD_BR_SAMPLES {
        let x: Vec<f64> = upper.iter().map(|&u| rng.gen_range(0.0..u)).collect();
        let x2: Vec<f64> = x
            .iter()
            .zip(upper)
            .map(|(&xi, &u)| xi + rng.gen_range(0.0..(u - xi).max(f64::MIN_POSITIVE)))
            .collect();
        let g = eval(&x)?;
        let g2 = eval(&x2)?;
        scale = g.iter().chain(&g2).fold(scale, |acc, v| acc.max(v.abs()));
        mono_draws.push((x, x2, g, g2));
    }

    // Scalability on (x, alpha) draws.
    let mut scal_draws = Vec::with_capacity(STANDARD_BR_SAMPLES);
    for _ in 0..STANDARD_BR_SAMPLES {
        let x: Vec<f64> = upper.iter().map(|&u| rng.gen_range(0.0..u)).collect();
        let alpha: f64 = rng.gen_range(1.0..SCALABILITY_ALPHA_MAX);
        let ax: Vec<f64> = x.iter().map(|&v| alpha * v).collect();
        let g = eval(&x)?;
        let gax = eval(&ax)?;
        scale = g.iter().chain(&gax).fold(scale, |acc, v| acc.max(v.abs()));
        scal_draws.push((x, alpha, g, gax));
    }

    let tol = tol_for(scale);
    let mut monotonicity = CheckVerdict::holds_on(STANDARD_BR_SAMPLES, tol);
    for (x, x2, g, g2) in mono_draws {
        if let Some(c) = (0..k).find(|&c| g[c] > g2[c] + tol) {
            monotonicity = CheckVerdict::counterexample(
                Witness::NonMonotone {
                    x,
                    x_prime: x2,
                    component: c,
                    g_x: g[c],
                    g_x_prime: g2[c],
                },
                STANDARD_BR_SAMPLES,
                tol,
            );
            break;
        }
    }
    let mut scalability = CheckVerdict::holds_on(STANDARD_BR_SAMPLES, tol);
    for (x, alpha, g, gax) in scal_draws {
        if let Some(c) = (0..k).find(|&c| gax[c] >= alpha * g[c] - tol) {
            scalability = CheckVerdict::counterexample(
                Witness::NotScalable {
                    x,
                    alpha,
                    component: c,
                    g_alpha_x: gax[c],
                    alpha_g_x: alpha * g[c],
                },
                STANDARD_BR_SAMPLES,
                tol,
            );
            break;
        }
    }
    Ok(StandardBrVerdict {
        monotonicity,
        scalability,
    })
}

/// Replay a scalability witness; returns `alpha g(x) - g(alpha x)` for the
/// recorded component (non-positive means the violation is real).
pub fn replay_scalability<F>(br: F, witness: &Witness) -> Result<f64>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    match witness {
        Witness::NotScalable {
            x,
            alpha,
            component,
            ..
        } => {
            let g = br(x);
            let ax: Vec<f64> = x.iter().map(|&v| alpha * v).collect();
            let gax = br(&ax);
            Ok(alpha * g[*component] - gax[*component])
        }
        _ => Err(Error::Parameter(
            "witness is not a scalability violation".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::StrategySpace;

    fn two_player(utility: impl Fn(f64, f64) -> (f64, f64) + Send + Sync + 'static) -> Game {
        Game::new(
            "test",
            vec![
                StrategySpace::interval(0.0, 1.0).unwrap(),
                StrategySpace::interval(0.0, 1.0).unwrap(),
            ],
            Arc::new(move |p: &StrategyProfile| {
                let (u1, u2) = utility(p.real(0).unwrap(), p.real(1).unwrap());
                vec![u1, u2]
            }),
        )
        .unwrap()
    }

    #[test]
    fn concave_quadratic_is_quasiconcave() {
        let g = two_player(|x, y| (-(x - 0.4) * (x - 0.4), -(y - 0.7) * (y - 0.7)));
        let v = check_quasiconcavity(&g, 0, &FdConfig::default()).unwrap();
        assert!(v.holds());
    }

    #[test]
    fn w_shape_yields_replayable_dip() {
        // u_1 has a genuine interior valley in its own coordinate
        let g = two_player(|x, _y| ((x - 0.5) * (x - 0.5), 0.0));
        let v = check_quasiconcavity(&g, 0, &FdConfig::default()).unwrap();
        assert!(!v.holds());
        let w = v.witness.expect("witness");
        let margin = replay_dip(&g, &w).unwrap();
        assert!(
            margin > v.tolerance,
            "margin {margin} vs tol {}",
            v.tolerance
        );
    }

    #[test]
    fn bilinear_interaction_is_supermodular() {
        let g = two_player(|x, y| (-x * x + x * y, -y * y + x * y));
        let v = check_smodular(&g, &FdConfig::default()).unwrap();
        assert!(v.supermodular.holds());
        // cross-partial is exactly +1, far outside the submodular tolerance
        assert!(!v.submodular.holds());
    }

    #[test]
    fn negative_interaction_is_submodular() {
        let g = two_player(|x, y| (-x * x - x * y, -y * y - x * y));
        let v = check_smodular(&g, &FdConfig::default()).unwrap();
        assert!(v.submodular.holds());
        assert!(!v.supermodular.holds());
    }

    #[test]
    fn symmetric_interaction_passes_potential_condition() {
        let g = two_player(|x, y| (-x * x + x * y, -y * y + x * y));
        let v = check_potential_condition(&g, &FdConfig::default()).unwrap();
        assert!(v.holds());
    }

    #[test]
    fn asymmetric_interaction_fails_potential_condition() {
        // d2u1/dxdy = 1 but d2u2/dxdy = 3
        let g = two_player(|x, y| (-x * x + x * y, -y * y + 3.0 * x * y));
        let v = check_potential_condition(&g, &FdConfig::default()).unwrap();
        assert!(!v.holds());
    }

    #[test]
    fn exact_potential_accepts_true_potential_and_shift() {
        let g = two_player(|x, y| (-x * x + x * y, -y * y + x * y));
        let phi: PotentialFn = Arc::new(|p: &StrategyProfile| {
            let x = p.real(0).unwrap();
            let y = p.real(1).unwrap();
            -x * x - y * y + x * y
        });
        let cfg = FdConfig::default();
        assert!(verify_exact_potential(&g, &phi, PotentialKind::Exact, &cfg)
            .unwrap()
            .holds());
        let shifted: PotentialFn = Arc::new(move |p| phi(p) + 42.0);
        assert!(
            verify_exact_potential(&g, &shifted, PotentialKind::Exact, &cfg)
                .unwrap()
                .holds()
        );
    }

    #[test]
    fn wrong_potential_is_rejected() {
        let g = two_player(|x, y| (-x * x + x * y, -y * y + x * y));
        let phi: PotentialFn = Arc::new(|p: &StrategyProfile| p.real(0).unwrap());
        let v =
            verify_exact_potential(&g, &phi, PotentialKind::Exact, &FdConfig::default()).unwrap();
        assert!(!v.holds());
    }

    #[test]
    fn dsc_negative_convention_on_decoupled_quadratic() {
        let g = two_player(|x, y| (-(x - 0.3) * (x - 0.3), -(y - 0.6) * (y - 0.6)));
        let cfg = FdConfig::default();
        let neg = check_dsc(&g, &[1.0, 1.0], DscConvention::Negative, &cfg).unwrap();
        assert!(neg.verdict.holds());
        assert!(
            (neg.worst_margin + 2.0).abs() < 1e-6,
            "margin {}",
            neg.worst_margin
        );
        let pos = check_dsc(&g, &[1.0, 1.0], DscConvention::Positive, &cfg).unwrap();
        assert!(!pos.verdict.holds());
    }

    #[test]
    fn dsc_verdict_invariant_to_common_weight_rescale() {
        let g = two_player(|x, y| (-(x - 0.3) * (x - 0.3), -(y - 0.6) * (y - 0.6)));
        let cfg = FdConfig::default();
        let a = check_dsc(&g, &[1.0, 2.0], DscConvention::Negative, &cfg).unwrap();
        let b = check_dsc(&g, &[1e-6, 2e-6], DscConvention::Negative, &cfg).unwrap();
        let c = check_dsc(&g, &[1e6, 2e6], DscConvention::Negative, &cfg).unwrap();
        assert_eq!(a.verdict.holds(), b.verdict.holds());
        assert_eq!(a.verdict.holds(), c.verdict.holds());
        assert!((a.worst_margin - b.worst_margin).abs() < 1e-9 * a.worst_margin.abs());
    }

    #[test]
    fn affine_map_is_standard() {
        // g(x) = A x + b with nonnegative A and positive b
        let br = |x: &[f64]| {
            vec![
                0.5 * x[0] + 0.25 * x[1] + 1.0,
                0.1 * x[0] + 0.3 * x[1] + 2.0,
            ]
        };
        let v = check_standard_br(br, &[5.0, 5.0], &FdConfig::default()).unwrap();
        assert!(v.monotonicity.holds());
        assert!(v.scalability.holds());
    }

    #[test]
    fn square_map_fails_scalability_with_replayable_witness() {
        let br = |x: &[f64]| vec![x[0] * x[0], x[1] * x[1]];
        let v = check_standard_br(br, &[2.0, 2.0], &FdConfig::default()).unwrap();
        assert!(v.monotonicity.holds());
        assert!(!v.scalability.holds());
        let w = v.scalability.witness.expect("witness");
        let replayed = replay_scalability(br, &w).unwrap();
        assert!(replayed <= 0.0, "alpha*g(x) - g(alpha x) = {replayed}");
    }
}
