//! Game registry: maps config names to constructors with strict parameter
//! schemas and exposes each game's extra capabilities (candidate potential,
//! energy metrics, built-in constraint).

use serde::Deserialize;

use eqkit::analysis::PotentialFn;
use eqkit::efficiency::ConstraintSpec;
use eqkit::games::classic;
use eqkit::games::constrained::make_constrained_quadratic;
use eqkit::games::cournot::make_cournot;
use eqkit::games::mac::make_mac_rate_game;
use eqkit::games::power_control::{
    make_energy_efficient_pc, make_potential_pc, make_pricing_pc, EnergyEfficientGame,
    DEFAULT_PRICING_ALPHA,
};
use eqkit::games::two_band::{
    make_two_band_pa, two_band_asymmetric_preset, two_band_symmetric_preset,
};
use eqkit::games::{ChannelParams, EfficiencyFunction};
use eqkit::{FiniteGame, Game, StrategyProfile};

use crate::config::CliError;

/// A constructed game plus whatever analysis hooks it exposes.
pub struct GameInstance {
    pub name: String,
    pub kind: GameKind,
    /// Candidate exact potential, when the game ships one.
    pub phi: Option<PotentialFn>,
    /// Energy-efficiency view for the virtual-MIMO metric.
    pub energy: Option<EnergyEfficientGame>,
    /// Built-in shared constraint with its closed-form candidate point.
    pub constraint: Option<ConstraintCase>,
}

pub enum GameKind {
    Continuous(Game),
    Finite(FiniteGame),
}

pub struct ConstraintCase {
    pub spec: ConstraintSpec,
    pub candidate: StrategyProfile,
    pub weights: Vec<f64>,
}

impl GameInstance {
    fn continuous(name: &str, game: Game) -> Self {
        GameInstance {
            name: name.into(),
            kind: GameKind::Continuous(game),
            phi: None,
            energy: None,
            constraint: None,
        }
    }

    fn finite(name: &str, fg: FiniteGame) -> Self {
        GameInstance {
            name: name.into(),
            kind: GameKind::Finite(fg),
            phi: None,
            energy: None,
            constraint: None,
        }
    }
}

fn from_table<'de, P: Deserialize<'de>>(params: &toml::Table) -> Result<P, CliError> {
    toml::Value::Table(params.clone())
        .try_into()
        .map_err(|e| CliError::Config(format!("game parameters: {e}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct ChannelGameParams {
    gains: Vec<f64>,
    noise: f64,
    max_powers: Vec<f64>,
    steepness: u32,
    sic: bool,
    decoding_order: Option<Vec<usize>>,
}

impl Default for ChannelGameParams {
    fn default() -> Self {
        ChannelGameParams {
            gains: vec![1.0, 0.8],
            noise: 1.0,
            max_powers: vec![1000.0, 1000.0],
            steepness: 100,
            sic: true,
            decoding_order: None,
        }
    }
}

impl ChannelGameParams {
    fn channel(&self) -> Result<ChannelParams, CliError> {
        let params = match &self.decoding_order {
            Some(order) => ChannelParams::with_decoding_order(
                self.gains.clone(),
                self.noise,
                self.max_powers.clone(),
                order.clone(),
            ),
            None => ChannelParams::new(self.gains.clone(), self.noise, self.max_powers.clone()),
        }?;
        Ok(params)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct PricingParams {
    #[serde(flatten)]
    channel: ChannelGameParams,
    alpha: f64,
}

impl Default for PricingParams {
    fn default() -> Self {
        PricingParams {
            channel: ChannelGameParams::default(),
            alpha: DEFAULT_PRICING_ALPHA,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct PotentialPcParams {
    gains: Vec<f64>,
    noise: f64,
    max_powers: Vec<f64>,
    gamma_targets: Vec<f64>,
}

impl Default for PotentialPcParams {
    fn default() -> Self {
        PotentialPcParams {
            gains: vec![1.0, 0.8],
            noise: 1.0,
            max_powers: vec![10.0, 10.0],
            gamma_targets: vec![0.5, 0.5],
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct MacParams {
    gains: Vec<f64>,
    noise: f64,
    max_powers: Vec<f64>,
    decoding_order: Option<Vec<usize>>,
}

impl Default for MacParams {
    fn default() -> Self {
        MacParams {
            gains: vec![1.0, 1.0],
            noise: 1.0,
            max_powers: vec![1.0, 1.0],
            decoding_order: None,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct TwoBandParams {
    /// `asymmetric` (default) or `symmetric`; explicit gains override.
    preset: String,
    direct: Option<[[f64; 2]; 2]>,
    cross: Option<[[f64; 2]; 2]>,
    sigma2: Option<f64>,
}

impl Default for TwoBandParams {
    fn default() -> Self {
        TwoBandParams {
            preset: "asymmetric".into(),
            direct: None,
            cross: None,
            sigma2: None,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct AlohaParams {
    transmit_gain: f64,
    collision_cost: f64,
    energy_cost: f64,
}

impl Default for AlohaParams {
    fn default() -> Self {
        AlohaParams {
            transmit_gain: 1.0,
            collision_cost: 1.0,
            energy_cost: 0.1,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct CournotParams {
    a: f64,
    b: f64,
    c: f64,
}

impl Default for CournotParams {
    fn default() -> Self {
        CournotParams {
            a: 10.0,
            b: 1.0,
            c: 1.0,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct ConstrainedQuadraticParams {
    targets: Vec<f64>,
    cap: f64,
    weights: Vec<f64>,
}

impl Default for ConstrainedQuadraticParams {
    fn default() -> Self {
        ConstrainedQuadraticParams {
            targets: vec![1.0, 1.0],
            cap: 1.0,
            weights: vec![1.0, 1.0],
        }
    }
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct NoParams {}

/// Registered game names with one-line descriptions.
pub fn list() -> Vec<(&'static str, &'static str)> {
    vec![
        (
            "energy_efficient",
            "energy-efficient power control f(SINR_i)/p_i with successive decoding",
        ),
        (
            "pricing",
            "energy-efficient power control with a linear pricing term alpha*p_i",
        ),
        (
            "potential_pc",
            "logarithmic-cost power control with exact potential sum_i log(p_i)",
        ),
        (
            "mac_rate",
            "two-user multiple-access rate game log2(1+SINR_i) under successive decoding",
        ),
        (
            "two_band",
            "two-band power allocation on an interference channel (multi-equilibrium presets)",
        ),
        ("aloha", "two-user slotted-ALOHA transmit/wait game"),
        (
            "cournot",
            "Cournot duopoly with affine demand and constant cost",
        ),
        (
            "matching_pennies",
            "zero-sum 2x2 matching game (no pure equilibrium)",
        ),
        (
            "prisoners_dilemma",
            "2x2 dilemma: defect dominates, cooperation maximizes welfare",
        ),
        (
            "battle_of_sexes",
            "2x2 coordination game with conflicting preferences",
        ),
        ("chicken", "2x2 anti-coordination game with a crash outcome"),
        (
            "constrained_quadratic",
            "concave quadratic game with a shared capacity constraint",
        ),
    ]
}

/// Human-readable parameter schema for one game.
pub fn describe(name: &str) -> Result<String, CliError> {
    let text = match name {
        "energy_efficient" => "params: gains = [1.0, 0.8], noise = 1.0, max_powers = [1000.0, 1000.0], steepness = 100, sic = true, decoding_order (optional permutation)\ncapabilities: closed-form best response, energy metrics (virtual MIMO)",
        "pricing" => "params: gains = [1.0, 0.8], noise = 1.0, max_powers = [1000.0, 1000.0], steepness = 100, sic = true, alpha = 0.001 (any sign), decoding_order (optional)\nnotes: pricing breaks quasi-concavity; the game stays S-modular on samples",
        "potential_pc" => "params: gains = [1.0, 0.8], noise = 1.0, max_powers = [10.0, 10.0], gamma_targets = [0.5, 0.5]\ncapabilities: exact potential sum_i log(p_i); target feasibility is reported, not enforced",
        "mac_rate" => "params: gains = [1.0, 1.0], noise = 1.0, max_powers = [1.0, 1.0], decoding_order (optional)\nnotes: welfare telescopes to log2(1 + sum P_i h_i / noise) at full power",
        "two_band" => "params: preset = \"asymmetric\" | \"symmetric\", or explicit direct = [[..];2], cross = [[..];2], sigma2\nnotes: presets are frozen to exhibit multiple equilibria",
        "aloha" => "params: transmit_gain = 1.0, collision_cost = 1.0, energy_cost = 0.1",
        "cournot" => "params: a = 10.0, b = 1.0, c = 1.0 (demand a - b q, unit cost c)\ncapabilities: closed-form best response, analytic equilibrium (a-c)/(3b)",
        "matching_pennies" | "prisoners_dilemma" | "battle_of_sexes" | "chicken" => "params: none",
        "constrained_quadratic" => "params: targets = [1.0, 1.0], cap = 1.0, weights = [1.0, 1.0]\ncapabilities: shared constraint cap - sum s_i >= 0 with closed-form normalized equilibrium",
        other => return Err(CliError::UnknownGame(other.into())),
    };
    Ok(text.to_string())
}

/// Build a registered game from its (strictly validated) parameter table.
pub fn build_game(name: &str, params: &toml::Table) -> Result<GameInstance, CliError> {
    match name {
        "energy_efficient" => {
            let p: ChannelGameParams = from_table(params)?;
            let f = EfficiencyFunction::new(p.steepness)?;
            let game = make_energy_efficient_pc(p.channel()?, f, p.sic)?;
            let mut instance = GameInstance::continuous(name, game.game().clone());
            instance.energy = Some(game);
            Ok(instance)
        }
        "pricing" => {
            let p: PricingParams = from_table(params)?;
            let f = EfficiencyFunction::new(p.channel.steepness)?;
            let game = make_pricing_pc(p.channel.channel()?, f, p.alpha)?;
            Ok(GameInstance::continuous(name, game.game().clone()))
        }
        "potential_pc" => {
            let p: PotentialPcParams = from_table(params)?;
            let channel = ChannelParams::new(p.gains, p.noise, p.max_powers)?;
            let game = make_potential_pc(p.gamma_targets, channel)?;
            let mut instance = GameInstance::continuous(name, game.game().clone());
            instance.phi = Some(game.phi().clone());
            Ok(instance)
        }
        "mac_rate" => {
            let p: MacParams = from_table(params)?;
            let channel = match p.decoding_order {
                Some(order) => {
                    ChannelParams::with_decoding_order(p.gains, p.noise, p.max_powers, order)?
                }
                None => ChannelParams::new(p.gains, p.noise, p.max_powers)?,
            };
            let game = make_mac_rate_game(channel)?;
            Ok(GameInstance::continuous(name, game.game().clone()))
        }
        "two_band" => {
            let p: TwoBandParams = from_table(params)?;
            let game = match (p.direct, p.cross) {
                (Some(direct), Some(cross)) => {
                    make_two_band_pa(direct, cross, p.sigma2.unwrap_or(0.1))?
                }
                (None, None) => match p.preset.as_str() {
                    "asymmetric" => two_band_asymmetric_preset(),
                    "symmetric" => two_band_symmetric_preset(),
                    other => {
                        return Err(CliError::Config(format!(
                            "unknown two_band preset `{other}` (use `asymmetric` or `symmetric`)"
                        )))
                    }
                },
                _ => {
                    return Err(CliError::Config(
                        "two_band needs both `direct` and `cross` gains, or a preset".into(),
                    ))
                }
            };
            Ok(GameInstance::continuous(name, game.game().clone()))
        }
        "aloha" => {
            let p: AlohaParams = from_table(params)?;
            let fg = classic::make_aloha(p.transmit_gain, p.collision_cost, p.energy_cost)?;
            Ok(GameInstance::finite(name, fg))
        }
        "cournot" => {
            let p: CournotParams = from_table(params)?;
            let game = make_cournot(p.a, p.b, p.c)?;
            Ok(GameInstance::continuous(name, game.game().clone()))
        }
        "matching_pennies" => {
            let _: NoParams = from_table(params)?;
            Ok(GameInstance::finite(name, classic::matching_pennies()))
        }
        "prisoners_dilemma" => {
            let _: NoParams = from_table(params)?;
            Ok(GameInstance::finite(name, classic::prisoners_dilemma()))
        }
        "battle_of_sexes" => {
            let _: NoParams = from_table(params)?;
            Ok(GameInstance::finite(name, classic::battle_of_sexes()))
        }
        "chicken" => {
            let _: NoParams = from_table(params)?;
            Ok(GameInstance::finite(name, classic::chicken()))
        }
        "constrained_quadratic" => {
            let p: ConstrainedQuadraticParams = from_table(params)?;
            let game = make_constrained_quadratic(p.targets, p.cap)?;
            let spec = game.constraint(p.weights.clone())?;
            let (candidate, _lambda) = game.normalized_equilibrium(&p.weights)?;
            let mut instance = GameInstance::continuous(name, game.game().clone());
            instance.constraint = Some(ConstraintCase {
                spec,
                candidate,
                weights: p.weights,
            });
            Ok(instance)
        }
        other => Err(CliError::UnknownGame(other.into())),
    }
}
