//! Power-control games on the uplink: energy efficiency, linear pricing,
//! and the logarithmic-cost potential game.

use std::sync::Arc;

use crate::analysis::PotentialFn;
use crate::error::{Error, Result};
use crate::game::{BestResponseFn, Game, StrategyProfile, StrategySpace, UtilityFn};

use super::{ChannelParams, EfficiencyFunction};

/// Default pricing coefficient for [`make_pricing_pc`] at the default
/// channel; the sign follows the additive `u_i + alpha p_i` form with
/// negative values allowed for cost-style pricing.
pub const DEFAULT_PRICING_ALPHA: f64 = 1e-3;

fn power_spaces(params: &ChannelParams) -> Vec<StrategySpace> {
    params
        .max_powers
        .iter()
        .map(|&p| StrategySpace::Interval {
            lower: 0.0,
            upper: p,
        })
        .collect()
}

fn sinr(params: &ChannelParams, sic: bool, powers: &[f64], user: usize) -> f64 {
    let interference: f64 = if sic {
        params
            .interferers(user)
            .iter()
            .map(|&j| powers[j] * params.gains[j])
            .sum()
    } else {
        (0..params.user_count())
            .filter(|&j| j != user)
            .map(|j| powers[j] * params.gains[j])
            .sum()
    };
    powers[user] * params.gains[user] / (params.noise + interference)
}

/// Energy-efficient power control: user `i` picks `p_i` in
/// `[0, P_i^max]` to maximize `f(SINR_i) / p_i`, totalized by the
/// continuous extension `u_i = 0` at `p_i = 0`.
///
/// With successive decoding the interference of a user comes only from
/// users decoded after it, which makes the best responses affine in the
/// earlier-decoded powers: `BR_i = beta*/|h_i|^2 (sigma^2 + I_i)`, clamped
/// to the power cap. At an interior fixed point every SINR equals `beta*`.
#[derive(Clone)]
pub struct EnergyEfficientGame {
    game: Game,
    params: ChannelParams,
    efficiency: EfficiencyFunction,
    sic: bool,
    beta_star: f64,
}

pub fn make_energy_efficient_pc(
    params: ChannelParams,
    f: EfficiencyFunction,
    sic: bool,
) -> Result<EnergyEfficientGame> {
    let beta_star = f.beta_star()?;
    let spaces = power_spaces(&params);
    let oracle_params = params.clone();
    let utility: UtilityFn = Arc::new(move |profile: &StrategyProfile| {
        let powers = profile.as_reals().expect("real-valued powers");
        (0..oracle_params.user_count())
            .map(|i| energy_utility(&oracle_params, &f, sic, &powers, i))
            .collect()
    });
    let br = closed_form_br(&params, sic, beta_star);
    let game = Game::new("energy_efficient_pc", spaces, utility)?.with_closed_form_br(br);
    Ok(EnergyEfficientGame {
        game,
        params,
        efficiency: f,
        sic,
        beta_star,
    })
}

fn energy_utility(
    params: &ChannelParams,
    f: &EfficiencyFunction,
    sic: bool,
    powers: &[f64],
    user: usize,
) -> f64 {
    if powers[user] == 0.0 {
        return 0.0;
    }
    f.value(sinr(params, sic, powers, user)) / powers[user]
}

fn closed_form_br(params: &ChannelParams, sic: bool, beta_star: f64) -> BestResponseFn {
    let params = params.clone();
    Arc::new(move |user: usize, profile: &StrategyProfile| {
        let powers = profile.as_reals().expect("real-valued powers");
        let interference: f64 = if sic {
            params
                .interferers(user)
                .iter()
                .map(|&j| powers[j] * params.gains[j])
                .sum()
        } else {
            (0..params.user_count())
                .filter(|&j| j != user)
                .map(|j| powers[j] * params.gains[j])
                .sum()
        };
        let p = beta_star / params.gains[user] * (params.noise + interference);
        p.min(params.max_powers[user])
    })
}

impl EnergyEfficientGame {
    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn params(&self) -> &ChannelParams {
        &self.params
    }

    pub fn efficiency(&self) -> &EfficiencyFunction {
        &self.efficiency
    }

    pub fn uses_sic(&self) -> bool {
        self.sic
    }

    /// Equilibrium SINR target: the root of `f'(x) x = f(x)`.
    pub fn beta_star(&self) -> f64 {
        self.beta_star
    }

    pub fn sinr(&self, powers: &[f64], user: usize) -> f64 {
        sinr(&self.params, self.sic, powers, user)
    }

    /// Per-user efficiency values `f(SINR_i)` at a power vector.
    pub fn efficiencies(&self, powers: &[f64]) -> Vec<f64> {
        (0..self.params.user_count())
            .map(|i| self.efficiency.value(self.sinr(powers, i)))
            .collect()
    }

    /// The clamped closed-form best response as a vector map on powers,
    /// suitable for the standard-function check.
    pub fn br_map(&self) -> impl Fn(&[f64]) -> Vec<f64> + '_ {
        let br = self
            .game
            .closed_form_br()
            .expect("closed form installed")
            .clone();
        move |powers: &[f64]| {
            let profile = StrategyProfile::reals(powers);
            (0..self.params.user_count())
                .map(|i| br(i, &profile))
                .collect()
        }
    }

    /// Exact fixed point of the unclamped best responses, when interior.
    ///
    /// With successive decoding the powers are computed in reverse decode
    /// order (the interference-free user first); without it, by solving the
    /// linear balance system. Returns `None` when the fixed point violates
    /// a power cap or fails to exist.
    pub fn ne_powers(&self) -> Option<Vec<f64>> {
        let k = self.params.user_count();
        let b = self.beta_star;
        let mut p = vec![0.0; k];
        if self.sic {
            for &user in self.params.decoding_order.iter().rev() {
                let interference: f64 = self
                    .params
                    .interferers(user)
                    .iter()
                    .map(|&j| p[j] * self.params.gains[j])
                    .sum();
                p[user] = b / self.params.gains[user] * (self.params.noise + interference);
            }
        } else {
            // p_i g_i / beta = noise + sum_{j != i} p_j g_j
            let mut m = vec![vec![0.0; k + 1]; k];
            for i in 0..k {
                for j in 0..k {
                    m[i][j] = if i == j {
                        self.params.gains[i] / b
                    } else {
                        -self.params.gains[j]
                    };
                }
                m[i][k] = self.params.noise;
            }
            p = solve_dense(&mut m)?;
        }
        let feasible = p
            .iter()
            .zip(&self.params.max_powers)
            .all(|(&pi, &cap)| pi.is_finite() && pi > 0.0 && pi <= cap);
        feasible.then_some(p)
    }
}

fn solve_dense(m: &mut [Vec<f64>]) -> Option<Vec<f64>> {
    let n = m.len();
    let scale = m
        .iter()
        .flat_map(|r| r[..n].iter())
        .fold(0.0f64, |a, v| a.max(v.abs()))
        .max(1.0);
    for col in 0..n {
        let piv =
            (col..n).max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())?;
        if m[piv][col].abs() < 1e-12 * scale {
            return None;
        }
        m.swap(col, piv);
        for row in (col + 1)..n {
            let f = m[row][col] / m[col][col];
            for c in col..=n {
                m[row][c] -= f * m[col][c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = m[row][n];
        for c in (row + 1)..n {
            acc -= m[row][c] * x[c];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

/// Energy-efficient power control with linear pricing:
/// `u_i(p) = f(SINR_i)/p_i + alpha p_i`. Pricing breaks quasi-concavity
/// while leaving the cross-partial structure untouched.
#[derive(Clone)]
pub struct PricingGame {
    game: Game,
    inner: EnergyEfficientGame,
    alpha: f64,
}

pub fn make_pricing_pc(
    params: ChannelParams,
    f: EfficiencyFunction,
    alpha: f64,
) -> Result<PricingGame> {
    if !alpha.is_finite() {
        return Err(Error::Parameter(
            "pricing coefficient must be finite".into(),
        ));
    }
    let inner = make_energy_efficient_pc(params.clone(), f, true)?;
    let spaces = power_spaces(&params);
    let oracle_params = params;
    let utility: UtilityFn = Arc::new(move |profile: &StrategyProfile| {
        let powers = profile.as_reals().expect("real-valued powers");
        (0..oracle_params.user_count())
            .map(|i| energy_utility(&oracle_params, &f, true, &powers, i) + alpha * powers[i])
            .collect()
    });
    let game = Game::new("pricing_pc", spaces, utility)?;
    Ok(PricingGame { game, inner, alpha })
}

impl PricingGame {
    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn energy_game(&self) -> &EnergyEfficientGame {
        &self.inner
    }
}

/// Logarithmic-cost power control: each user's recorded utility is
/// `log(p_i)` (a cost in spirit — the target constraint
/// `f_i(SINR_i) >= gamma_i` is reported as feasibility, never enforced),
/// and `phi(p) = sum_i log(p_i)` replicates every unilateral utility
/// difference exactly.
#[derive(Clone)]
pub struct PotentialPcGame {
    game: Game,
    phi: PotentialFn,
    params: ChannelParams,
    gamma_targets: Vec<f64>,
    efficiency: EfficiencyFunction,
    power_floor: f64,
}

/// Fraction of the power cap used as the lower strategy bound, keeping the
/// logarithm away from its singularity.
const POWER_FLOOR_FRAC: f64 = 1e-3;

pub fn make_potential_pc(
    gamma_targets: Vec<f64>,
    params: ChannelParams,
) -> Result<PotentialPcGame> {
    if gamma_targets.len() != params.user_count() {
        return Err(Error::DimensionMismatch(format!(
            "{} targets for {} users",
            gamma_targets.len(),
            params.user_count()
        )));
    }
    let floor = POWER_FLOOR_FRAC
        * params
            .max_powers
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
    if !floor.is_finite() || floor <= 0.0 {
        return Err(Error::Parameter(
            "power lower bound must be positive".into(),
        ));
    }
    let spaces: Vec<StrategySpace> = params
        .max_powers
        .iter()
        .map(|&p| StrategySpace::Interval {
            lower: floor,
            upper: p,
        })
        .collect();
    let k = params.user_count();
    let utility: UtilityFn = Arc::new(move |profile: &StrategyProfile| {
        (0..k)
            .map(|i| profile.real(i).expect("real power").ln())
            .collect()
    });
    let phi: PotentialFn = Arc::new(move |profile: &StrategyProfile| {
        (0..k)
            .map(|i| profile.real(i).expect("real power").ln())
            .sum()
    });
    let game = Game::new("potential_pc", spaces, utility)?;
    Ok(PotentialPcGame {
        game,
        phi,
        params,
        gamma_targets,
        efficiency: EfficiencyFunction::default(),
        power_floor: floor,
    })
}

impl PotentialPcGame {
    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn phi(&self) -> &PotentialFn {
        &self.phi
    }

    pub fn power_floor(&self) -> f64 {
        self.power_floor
    }

    pub fn gamma_targets(&self) -> &[f64] {
        &self.gamma_targets
    }

    /// Per-user feasibility of the efficiency targets `f(SINR_i) >= gamma_i`
    /// under full interference.
    pub fn feasibility(&self, powers: &[f64]) -> Vec<bool> {
        (0..self.params.user_count())
            .map(|i| {
                self.efficiency.value(sinr(&self.params, false, powers, i)) >= self.gamma_targets[i]
            })
            .collect()
    }
}
