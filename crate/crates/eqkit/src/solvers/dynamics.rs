//! Best-response dynamics and basin-of-attraction maps.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{best_response_grid, linspace, Game, Strategy, StrategyProfile};
use crate::par;

/// How players are updated within one sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UpdateRule {
    /// Gauss-Seidel: players update one at a time in ascending index order,
    /// each seeing the others' latest strategies.
    Sequential,
    /// Jacobi: all players best-respond to the same previous profile.
    /// Can cycle where the sequential rule converges.
    Simultaneous,
}

#[derive(Debug, Clone, Serialize)]
pub struct BrOptions {
    pub max_sweeps: usize,
    /// A sweep that moves no component by more than `tol` terminates the
    /// dynamics.
    pub tol: f64,
    /// Grid points for the generic best-response search (ignored when the
    /// game carries a closed-form best response).
    pub br_points: usize,
    pub rule: UpdateRule,
}

impl Default for BrOptions {
    fn default() -> Self {
        BrOptions {
            max_sweeps: 500,
            tol: 1e-6,
            br_points: 64,
            rule: UpdateRule::Sequential,
        }
    }
}

/// Recorded best-response dynamics run.
///
/// Under the sequential rule, consecutive iterates differ in exactly one
/// player's component (unchanged components are not re-recorded).
#[derive(Debug, Clone, Serialize)]
pub struct BrTrace {
    pub iterates: Vec<StrategyProfile>,
    pub converged: bool,
    pub limit: Option<StrategyProfile>,
    pub sweep_order: Vec<usize>,
    pub sweeps: usize,
}

fn best_response(
    game: &Game,
    player: usize,
    profile: &StrategyProfile,
    opts: &BrOptions,
) -> Result<f64> {
    if let Some(br) = game.closed_form_br() {
        let x = br(player, profile);
        if !x.is_finite() {
            return Err(Error::NonFiniteUtility {
                profile: profile.to_string(),
            });
        }
        return Ok(x);
    }
    best_response_grid(game, player, profile, opts.br_points)
}

/// Round-robin sequential best-response dynamics with default options
/// overridden by `max_sweeps` and `tol`.
pub fn br_dynamics(
    game: &Game,
    start: &StrategyProfile,
    max_sweeps: usize,
    tol: f64,
) -> Result<BrTrace> {
    br_dynamics_with(
        game,
        start,
        &BrOptions {
            max_sweeps,
            tol,
            ..BrOptions::default()
        },
    )
}

pub fn br_dynamics_with(game: &Game, start: &StrategyProfile, opts: &BrOptions) -> Result<BrTrace> {
    game.validate_profile(start)?;
    for (i, s) in game.spaces().iter().enumerate() {
        if !s.is_interval() {
            return Err(Error::Unsupported(format!(
                "best-response dynamics need interval spaces; player {i} is finite"
            )));
        }
    }
    let k = game.player_count();
    let sweep_order: Vec<usize> = (0..k).collect();
    let mut current = start.clone();
    let mut iterates = vec![current.clone()];
    let mut converged = false;
    let mut sweeps = 0usize;

    while sweeps < opts.max_sweeps {
        sweeps += 1;
        let mut max_move = 0.0f64;
        match opts.rule {
            UpdateRule::Sequential => {
                for &player in &sweep_order {
                    let old = current.real(player)?;
                    let new = best_response(game, player, &current, opts)?;
                    if new != old {
                        current.set(player, Strategy::Real(new));
                        iterates.push(current.clone());
                    }
                    max_move = max_move.max((new - old).abs());
                }
            }
            UpdateRule::Simultaneous => {
                let previous = current.clone();
                for &player in &sweep_order {
                    let old = previous.real(player)?;
                    let new = best_response(game, player, &previous, opts)?;
                    max_move = max_move.max((new - old).abs());
                    current.set(player, Strategy::Real(new));
                }
                if current != previous {
                    iterates.push(current.clone());
                }
            }
        }
        if max_move <= opts.tol {
            converged = true;
            break;
        }
    }

    Ok(BrTrace {
        limit: converged.then(|| current.clone()),
        iterates,
        converged,
        sweep_order,
        sweeps,
    })
}

/// Basin-of-attraction map for 2-player scalar-strategy games: run the
/// dynamics from every start on a `resolution x resolution` grid and label
/// each cell with the equilibrium cluster it reaches.
#[derive(Debug, Clone, Serialize)]
pub struct BasinMap {
    pub resolution: usize,
    /// Start coordinates per player (row player 0, column player 1).
    pub start_grids: [Vec<f64>; 2],
    /// Row-major labels: `labels[i * resolution + j]` for start
    /// `(grid0[i], grid1[j])`; `None` marks a run that exhausted its sweep
    /// budget.
    pub labels: Vec<Option<usize>>,
    /// Distinct limits found, pairwise separated by more than
    /// `cluster_radius` (max-norm).
    pub equilibria: Vec<StrategyProfile>,
    pub cluster_radius: f64,
    pub diverged_cells: usize,
}

impl BasinMap {
    pub fn label_at(&self, i: usize, j: usize) -> Option<usize> {
        self.labels[i * self.resolution + j]
    }

    /// Number of distinct equilibrium clusters reached.
    pub fn cluster_count(&self) -> usize {
        self.equilibria.len()
    }
}

pub fn basin_map(game: &Game, resolution: usize, opts: &BrOptions) -> Result<BasinMap> {
    if game.player_count() != 2 {
        return Err(Error::Unsupported(
            "basin maps are defined for 2-player scalar games".into(),
        ));
    }
    if resolution < 2 {
        return Err(Error::Parameter("basin map needs resolution >= 2".into()));
    }
    let bounds: Vec<(f64, f64)> = game
        .spaces()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            s.bounds().ok_or_else(|| {
                Error::Unsupported(format!(
                    "basin map needs interval spaces; player {i} is finite"
                ))
            })
        })
        .collect::<Result<_>>()?;
    let grid0 = linspace(bounds[0].0, bounds[0].1, resolution);
    let grid1 = linspace(bounds[1].0, bounds[1].1, resolution);

    // Traces are independent across starts; compute them in parallel, then
    // cluster sequentially in row-major order so labels are deterministic.
    let limits: Vec<Result<Option<Vec<f64>>>> = par::map_range(resolution * resolution, |cell| {
        let (i, j) = (cell / resolution, cell % resolution);
        let start = StrategyProfile::reals(&[grid0[i], grid1[j]]);
        let trace = br_dynamics_with(game, &start, opts)?;
        Ok(match trace.limit {
            Some(limit) => Some(limit.as_reals()?),
            None => None,
        })
    });

    let radius = 10.0 * opts.tol;
    let mut equilibria: Vec<Vec<f64>> = Vec::new();
    let mut labels = Vec::with_capacity(resolution * resolution);
    let mut diverged = 0usize;
    for limit in limits {
        match limit? {
            None => {
                diverged += 1;
                labels.push(None);
            }
            Some(point) => {
                let found = equilibria.iter().position(|c| {
                    c.iter()
                        .zip(&point)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0f64, f64::max)
                        <= radius
                });
                let label = match found {
                    Some(l) => l,
                    None => {
                        equilibria.push(point);
                        equilibria.len() - 1
                    }
                };
                labels.push(Some(label));
            }
        }
    }

    Ok(BasinMap {
        resolution,
        start_grids: [grid0, grid1],
        labels,
        equilibria: equilibria
            .into_iter()
            .map(|p| StrategyProfile::reals(&p))
            .collect(),
        cluster_radius: radius,
        diverged_cells: diverged,
    })
}
