//! Orchestrates a configured run: build the game, execute the analyses in
//! order, and assemble the report. An analysis failure is recorded and
//! dependent analyses are skipped with a reason; the run never aborts
//! silently.

use std::time::Instant;

use eqkit::analysis::{check_dsc, check_standard_br, existence_report, DscConvention};
use eqkit::efficiency::{
    is_pareto_optimal, normalized_eq_check, poa_pos, social_welfare_finite, virtual_mimo_metric,
    PoaOutcome,
};
use eqkit::solvers::{
    basin_map, br_dynamics_with, ne_verify, pure_ne_search, regret_matching_ce,
    support_enumeration_2p, NashResult,
};
use eqkit::{discretize, Game, StrategyProfile};

use crate::config::{Analysis, CliError, RunConfig};
use crate::registry::{build_game, GameInstance, GameKind};
use crate::report::{
    AnalysisOutcome, AnalysisRecord, AnalysisResult, ParetoEntry, RunReport, SCHEMA_VERSION,
};

/// Execute every analysis in the configured order.
pub fn run(config: &RunConfig) -> Result<RunReport, CliError> {
    let instance = build_game(&config.game, &config.params)?;
    let mut report = RunReport {
        schema_version: SCHEMA_VERSION,
        toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        analyses: Vec::new(),
        timings_ms: Vec::new(),
    };

    // Equilibrium set carried from `solve` to `efficiency`.
    let mut solved: Option<Vec<NashResult>> = None;
    let mut solve_state = SolveState::NotRequested;

    for &analysis in &config.analyses {
        let started = Instant::now();
        let outcome = match analysis {
            Analysis::Existence => run_existence(&instance, config),
            Analysis::UniquenessEvidence => run_uniqueness(&instance, config),
            Analysis::Solve => {
                let outcome = run_solve(&instance, config);
                solve_state = match &outcome {
                    AnalysisOutcome::Ok { result } => {
                        if let AnalysisResult::Solve { equilibria, .. } = result {
                            solved = Some(equilibria.clone());
                            if equilibria.is_empty() {
                                SolveState::Empty
                            } else {
                                SolveState::Succeeded
                            }
                        } else {
                            SolveState::Failed
                        }
                    }
                    _ => SolveState::Failed,
                };
                outcome
            }
            Analysis::Basins => run_basins(&instance, config),
            Analysis::Mixed => run_mixed(&instance),
            Analysis::Correlated => run_correlated(&instance, config),
            Analysis::Efficiency => match solve_state {
                SolveState::Succeeded => {
                    run_efficiency(&instance, config, solved.as_deref().unwrap_or(&[]))
                }
                SolveState::Empty => AnalysisOutcome::Error {
                    message: "no equilibria available: `solve` found none".into(),
                },
                SolveState::Failed => AnalysisOutcome::Skipped {
                    reason: "skipped: `solve` did not complete".into(),
                },
                SolveState::NotRequested => AnalysisOutcome::Skipped {
                    reason: "skipped: requires `solve` earlier in the analyses list".into(),
                },
            },
            Analysis::NormalizedEq => run_normalized_eq(&instance, config),
        };
        report.timings_ms.push((
            analysis.name().to_string(),
            started.elapsed().as_secs_f64() * 1e3,
        ));
        report.analyses.push(AnalysisRecord {
            analysis: analysis.name().to_string(),
            outcome,
        });
    }
    Ok(report)
}

enum SolveState {
    NotRequested,
    Succeeded,
    Empty,
    Failed,
}

fn ok(result: AnalysisResult) -> AnalysisOutcome {
    AnalysisOutcome::Ok { result }
}

fn err(e: impl std::fmt::Display) -> AnalysisOutcome {
    AnalysisOutcome::Error {
        message: e.to_string(),
    }
}

fn game_view(instance: &GameInstance) -> Game {
    match &instance.kind {
        GameKind::Continuous(g) => g.clone(),
        GameKind::Finite(fg) => fg.as_game(),
    }
}

fn run_existence(instance: &GameInstance, config: &RunConfig) -> AnalysisOutcome {
    let game = game_view(instance);
    let cfg = config.numeric.fd_config(config.seed);
    match existence_report(&game, &cfg, instance.phi.as_ref()) {
        Ok(report) => ok(AnalysisResult::Existence { report }),
        Err(e) => err(e),
    }
}

fn run_uniqueness(instance: &GameInstance, config: &RunConfig) -> AnalysisOutcome {
    let GameKind::Continuous(game) = &instance.kind else {
        return err("uniqueness evidence applies to continuous games");
    };
    let cfg = config.numeric.fd_config(config.seed);
    let weights = vec![1.0; game.player_count()];
    let dsc = match check_dsc(game, &weights, DscConvention::Negative, &cfg) {
        Ok(v) => v,
        Err(e) => return err(e),
    };
    // The standard-function check needs the closed-form best-response map
    // and a nonnegative sampling box.
    let standard_br = match game.closed_form_br() {
        Some(br)
            if game
                .spaces()
                .iter()
                .all(|s| s.bounds().is_some_and(|(lo, _)| lo >= 0.0)) =>
        {
            let upper: Vec<f64> = game
                .spaces()
                .iter()
                .map(|s| s.bounds().expect("interval").1)
                .collect();
            let k = game.player_count();
            let br_map = |x: &[f64]| -> Vec<f64> {
                let profile = StrategyProfile::reals(x);
                (0..k).map(|i| br(i, &profile)).collect()
            };
            match check_standard_br(br_map, &upper, &cfg) {
                Ok(v) => Some(v),
                Err(e) => return err(e),
            }
        }
        _ => None,
    };
    ok(AnalysisResult::UniquenessEvidence {
        weights,
        dsc,
        standard_br,
    })
}

fn run_solve(instance: &GameInstance, config: &RunConfig) -> AnalysisOutcome {
    match &instance.kind {
        GameKind::Finite(fg) => ok(AnalysisResult::Solve {
            method: "exhaustive_tensor_scan".into(),
            equilibria: pure_ne_search(fg),
            trace: None,
        }),
        GameKind::Continuous(game) => {
            let opts = config.numeric.br_options();
            let starts = solve_starts(game);
            let mut midpoint_trace = None;
            let mut limits: Vec<Vec<f64>> = Vec::new();
            for (idx, start) in starts.iter().enumerate() {
                match br_dynamics_with(game, start, &opts) {
                    Ok(trace) => {
                        if let Some(limit) = &trace.limit {
                            match limit.as_reals() {
                                Ok(reals) => limits.push(reals),
                                Err(e) => return err(e),
                            }
                        }
                        if idx == 0 {
                            midpoint_trace = Some(trace);
                        }
                    }
                    Err(e) => return err(e),
                }
            }
            if limits.is_empty() {
                return err("best-response dynamics converged from none of the starting points");
            }
            let radius = 10.0 * opts.tol;
            let mut reps: Vec<Vec<f64>> = Vec::new();
            for limit in limits {
                let known = reps.iter().any(|r| {
                    r.iter()
                        .zip(&limit)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0f64, f64::max)
                        <= radius
                });
                if !known {
                    reps.push(limit);
                }
            }
            let mut equilibria = Vec::with_capacity(reps.len());
            for rep in reps {
                let profile = StrategyProfile::reals(&rep);
                let epsilon = match ne_verify(game, &profile, config.numeric.deviation_points) {
                    Ok(eps) => eps,
                    Err(e) => return err(e),
                };
                let utilities = match game.evaluate(&profile) {
                    Ok(u) => u,
                    Err(e) => return err(e),
                };
                equilibria.push(NashResult {
                    profile,
                    epsilon,
                    utilities,
                });
            }
            ok(AnalysisResult::Solve {
                method: "best_response_dynamics".into(),
                equilibria,
                trace: midpoint_trace,
            })
        }
    }
}

/// Midpoint first (its trace is recorded), then the box corners.
fn solve_starts(game: &Game) -> Vec<StrategyProfile> {
    let bounds: Vec<(f64, f64)> = game
        .spaces()
        .iter()
        .map(|s| s.bounds().expect("continuous game"))
        .collect();
    let mid: Vec<f64> = bounds.iter().map(|(lo, hi)| 0.5 * (lo + hi)).collect();
    let mut starts = vec![StrategyProfile::reals(&mid)];
    let k = bounds.len();
    if k <= 4 {
        for mask in 0..(1usize << k) {
            let corner: Vec<f64> = bounds
                .iter()
                .enumerate()
                .map(|(i, (lo, hi))| if mask & (1 << i) != 0 { *hi } else { *lo })
                .collect();
            starts.push(StrategyProfile::reals(&corner));
        }
    }
    starts
}

fn run_basins(instance: &GameInstance, config: &RunConfig) -> AnalysisOutcome {
    let GameKind::Continuous(game) = &instance.kind else {
        return err("basin maps apply to continuous games");
    };
    let opts = config.numeric.br_options();
    match basin_map(game, config.numeric.basin_resolution, &opts) {
        Ok(map) => {
            let mut epsilons = Vec::with_capacity(map.equilibria.len());
            for eq in &map.equilibria {
                match ne_verify(game, eq, config.numeric.deviation_points) {
                    Ok(eps) => epsilons.push(eps),
                    Err(e) => return err(e),
                }
            }
            ok(AnalysisResult::Basins {
                map,
                equilibrium_epsilons: epsilons,
            })
        }
        Err(e) => err(e),
    }
}

fn run_mixed(instance: &GameInstance) -> AnalysisOutcome {
    let GameKind::Finite(fg) = &instance.kind else {
        return err("support enumeration applies to finite games; discretize first");
    };
    match support_enumeration_2p(fg) {
        Ok(enumeration) => ok(AnalysisResult::Mixed { enumeration }),
        Err(e) => err(e),
    }
}

fn run_correlated(instance: &GameInstance, config: &RunConfig) -> AnalysisOutcome {
    let GameKind::Finite(fg) = &instance.kind else {
        return err("regret matching applies to finite games; discretize first");
    };
    match regret_matching_ce(fg, config.numeric.rm_iterations, config.seed) {
        Ok(play) => ok(AnalysisResult::Correlated { play }),
        Err(e) => err(e),
    }
}

fn run_efficiency(
    instance: &GameInstance,
    config: &RunConfig,
    ne_set: &[NashResult],
) -> AnalysisOutcome {
    match &instance.kind {
        GameKind::Finite(fg) => {
            let report = match poa_pos(fg, ne_set) {
                Ok(r) => r,
                Err(e) => return err(e),
            };
            let mut pareto = Vec::new();
            let mut cells: Vec<Vec<usize>> = Vec::new();
            for ne in ne_set {
                match ne.profile.as_actions() {
                    Ok(a) => cells.push(a),
                    Err(e) => return err(e),
                }
            }
            cells.push(report.max_welfare_profile.clone());
            for cell in cells {
                match is_pareto_optimal(fg, &cell) {
                    Ok(check) => pareto.push(ParetoEntry {
                        profile: StrategyProfile::actions(&cell),
                        optimal: check.optimal,
                        dominating: check.dominating.map(|d| StrategyProfile::actions(&d)),
                    }),
                    Err(e) => return err(e),
                }
            }
            let ne_welfares: Vec<f64> = ne_set.iter().map(|ne| ne.utilities.iter().sum()).collect();
            ok(AnalysisResult::Efficiency {
                grid_points: None,
                max_welfare: report.max_welfare,
                max_welfare_profile: StrategyProfile::actions(&report.max_welfare_profile),
                ne_welfares,
                outcome: report.outcome,
                pareto,
                virtual_mimo_at_best_ne: None,
            })
        }
        GameKind::Continuous(game) => {
            let grid_points = config.numeric.grid_points;
            let grid = match discretize(game, grid_points) {
                Ok(g) => g,
                Err(e) => return err(e),
            };
            let fg = &grid.finite;
            let mut best_cell = 0usize;
            let mut best_welfare = f64::NEG_INFINITY;
            for cell in 0..fg.cells() {
                let w = social_welfare_finite(fg, &fg.decode(cell));
                if w > best_welfare {
                    best_welfare = w;
                    best_cell = cell;
                }
            }
            let max_welfare_profile = grid.profile_at(&fg.decode(best_cell));
            let ne_welfares: Vec<f64> = ne_set.iter().map(|ne| ne.utilities.iter().sum()).collect();
            let worst = ne_welfares.iter().cloned().fold(f64::INFINITY, f64::min);
            let best = ne_welfares
                .iter()
                .cloned()
                .fold(f64::NEG_INFINITY, f64::max);
            let outcome = if worst <= 0.0 {
                PoaOutcome::WelfareGap {
                    worst_gap: best_welfare - worst,
                    best_gap: best_welfare - best,
                }
            } else {
                PoaOutcome::Ratios {
                    poa: best_welfare / worst,
                    pos: best_welfare / best,
                }
            };
            // Pareto checks run on the grid: snap each equilibrium to its
            // nearest cell.
            let mut pareto = Vec::new();
            let mut cells: Vec<Vec<usize>> = Vec::new();
            for ne in ne_set {
                match ne.profile.as_reals() {
                    Ok(reals) => cells.push(nearest_cell(&grid.grids, &reals)),
                    Err(e) => return err(e),
                }
            }
            cells.push(fg.decode(best_cell));
            for cell in cells {
                match is_pareto_optimal(fg, &cell) {
                    Ok(check) => pareto.push(ParetoEntry {
                        profile: grid.profile_at(&cell),
                        optimal: check.optimal,
                        dominating: check.dominating.map(|d| grid.profile_at(&d)),
                    }),
                    Err(e) => return err(e),
                }
            }
            let virtual_mimo_at_best_ne = instance.energy.as_ref().and_then(|energy| {
                let best_ne = ne_set.iter().max_by(|a, b| {
                    let wa: f64 = a.utilities.iter().sum();
                    let wb: f64 = b.utilities.iter().sum();
                    wa.partial_cmp(&wb).expect("finite welfare")
                })?;
                virtual_mimo_metric(energy, &best_ne.profile).ok()
            });
            ok(AnalysisResult::Efficiency {
                grid_points: Some(grid_points),
                max_welfare: best_welfare,
                max_welfare_profile,
                ne_welfares,
                outcome,
                pareto,
                virtual_mimo_at_best_ne,
            })
        }
    }
}

fn nearest_cell(grids: &[Vec<f64>], reals: &[f64]) -> Vec<usize> {
    grids
        .iter()
        .zip(reals)
        .map(|(grid, &x)| {
            let mut best = 0usize;
            let mut dist = f64::INFINITY;
            for (k, &g) in grid.iter().enumerate() {
                let d = (g - x).abs();
                if d < dist {
                    dist = d;
                    best = k;
                }
            }
            best
        })
        .collect()
}

fn run_normalized_eq(instance: &GameInstance, config: &RunConfig) -> AnalysisOutcome {
    let Some(case) = &instance.constraint else {
        return err(format!(
            "game `{}` has no built-in constraint; normalized equilibria need one",
            instance.name
        ));
    };
    let GameKind::Continuous(game) = &instance.kind else {
        return err("normalized equilibria apply to continuous concave games");
    };
    let cfg = config.numeric.fd_config(config.seed);
    match normalized_eq_check(game, &case.candidate, &case.spec, &cfg) {
        Ok(report) => ok(AnalysisResult::NormalizedEq {
            candidate: case.candidate.clone(),
            weights: case.weights.clone(),
            report,
        }),
        Err(e) => err(e),
    }
}
