//! Integration tests exercising the wireless built-ins through the
//! structural checks, dynamics, and efficiency metrics.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use eqkit::analysis::{
    check_dsc, check_potential_condition, check_quasiconcavity, check_smodular, check_standard_br,
    cross_partial_estimate, existence_report, replay_dip, DscConvention, ExistenceConclusion,
    FdConfig, TheoremName, Witness,
};
use eqkit::efficiency::{is_pareto_optimal, social_welfare_finite, virtual_mimo_metric};
use eqkit::games::classic::{aloha_default, aloha_symmetric_mixed_transmit_prob};
use eqkit::games::cournot::make_cournot;
use eqkit::games::power_control::{
    make_energy_efficient_pc, make_pricing_pc, EnergyEfficientGame, DEFAULT_PRICING_ALPHA,
};
use eqkit::games::two_band::{two_band_asymmetric_preset, two_band_symmetric_preset};
use eqkit::games::{
    default_channel_2user, mac::make_mac_rate_game, ChannelParams, EfficiencyFunction,
};
use eqkit::solvers::{
    basin_map, br_dynamics, ne_verify, pure_ne_search, regret_matching_ce, BrOptions,
};
use eqkit::{discretize, Game, StrategyProfile, StrategySpace};

fn default_energy() -> EnergyEfficientGame {
    make_energy_efficient_pc(default_channel_2user(), EfficiencyFunction::default(), true).unwrap()
}

#[test]
fn existence_flowchart_energy_concludes_debreu_fan_glicksberg() {
    let g = default_energy();
    let report = existence_report(g.game(), &FdConfig::default(), None).unwrap();
    assert_eq!(
        report.conclusion,
        ExistenceConclusion::PureNeGuaranteed(TheoremName::DebreuFanGlicksberg)
    );
    for v in report.quasiconcavity.unwrap() {
        assert!(v.holds());
    }
}

#[test]
fn existence_flowchart_pricing_concludes_topkis() {
    let g = make_pricing_pc(
        default_channel_2user(),
        EfficiencyFunction::default(),
        DEFAULT_PRICING_ALPHA,
    )
    .unwrap();
    let report = existence_report(g.game(), &FdConfig::default(), None).unwrap();
    assert_eq!(
        report.conclusion,
        ExistenceConclusion::PureNeGuaranteed(TheoremName::Topkis)
    );
    let qc = report.quasiconcavity.unwrap();
    assert!(qc.iter().any(|v| !v.holds()));
    assert!(report.smodular.unwrap().supermodular.holds());
}

#[test]
fn pricing_dip_witness_replays() {
    let g = make_pricing_pc(
        default_channel_2user(),
        EfficiencyFunction::default(),
        DEFAULT_PRICING_ALPHA,
    )
    .unwrap();
    let cfg = FdConfig::default();
    let broken = (0..2)
        .map(|p| check_quasiconcavity(g.game(), p, &cfg).unwrap())
        .find(|v| !v.holds())
        .expect("pricing breaks quasi-concavity");
    let witness = broken.witness.expect("dip witness");
    let margin = replay_dip(g.game(), &witness).unwrap();
    assert!(margin > broken.tolerance, "dip margin {margin}");
}

#[test]
fn pricing_supermodularity_holds_on_samples() {
    let g = make_pricing_pc(
        default_channel_2user(),
        EfficiencyFunction::default(),
        DEFAULT_PRICING_ALPHA,
    )
    .unwrap();
    let v = check_smodular(g.game(), &FdConfig::default()).unwrap();
    assert!(v.supermodular.holds());
}

#[test]
fn unequal_gain_energy_game_fails_potential_condition() {
    // moderate powers keep the cross-partial magnitudes well above the
    // tolerance floor, exposing the asymmetry of the interference coupling
    let params = ChannelParams::new(vec![2.0, 1.0], 1.0, vec![20.0, 20.0]).unwrap();
    let g = make_energy_efficient_pc(params, EfficiencyFunction::default(), true).unwrap();
    let v = check_potential_condition(g.game(), &FdConfig::default()).unwrap();
    assert!(!v.holds());
    match v.witness.expect("witness") {
        Witness::PotentialCross { value, .. } => assert!(value.abs() > v.tolerance),
        w => panic!("unexpected witness {w:?}"),
    }
}

#[test]
fn energy_closed_form_brs_are_standard() {
    let g = default_energy();
    let br = g.br_map();
    let verdict =
        check_standard_br(br, &g.params().max_powers.clone(), &FdConfig::default()).unwrap();
    assert!(verdict.monotonicity.holds());
    assert!(verdict.scalability.holds());
}

#[test]
fn energy_dynamics_reach_beta_star_sinr() {
    let g = default_energy();
    let beta = g.beta_star();
    for start in [[1.0, 1.0], [500.0, 2.0], [3.0, 900.0]] {
        let trace = br_dynamics(g.game(), &StrategyProfile::reals(&start), 100, 1e-9).unwrap();
        assert!(trace.converged);
        let p = trace.limit.unwrap().as_reals().unwrap();
        for i in 0..2 {
            let s = g.sinr(&p, i);
            assert!(
                (s - beta).abs() <= 1e-3 * beta,
                "start {start:?} user {i}: {s}"
            );
        }
    }
}

#[test]
fn energy_equilibrium_unique_across_random_channels() {
    // seeded feasible channel draws; skip the rare draws whose fixed point
    // leaves the power box
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for _ in 0..20 {
        let gains = vec![rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0)];
        let noise = rng.gen_range(0.5..2.0);
        let params = ChannelParams::new(gains, noise, vec![1000.0, 1000.0]).unwrap();
        let g = make_energy_efficient_pc(params, EfficiencyFunction::default(), true).unwrap();
        let Some(expected) = g.ne_powers() else {
            continue;
        };
        checked += 1;
        let trace = br_dynamics(g.game(), &StrategyProfile::reals(&[1.0, 1.0]), 100, 1e-9).unwrap();
        let p = trace.limit.unwrap().as_reals().unwrap();
        for i in 0..2 {
            assert!((p[i] - expected[i]).abs() <= 1e-3 * expected[i]);
            let s = g.sinr(&p, i);
            assert!((s - g.beta_star()).abs() <= 1e-3 * g.beta_star());
        }
    }
    assert!(checked >= 15, "only {checked} feasible draws");
}

#[test]
fn energy_dsc_margin_recorded_and_basin_unique() {
    let g = default_energy();
    let dsc = check_dsc(
        g.game(),
        &[1.0, 1.0],
        DscConvention::Negative,
        &FdConfig::default(),
    )
    .unwrap();
    assert!(dsc.worst_margin.is_finite());
    let map = basin_map(g.game(), 12, &BrOptions::default()).unwrap();
    assert_eq!(map.cluster_count(), 1, "single attractor expected");
    assert_eq!(map.diverged_cells, 0);
}

#[test]
fn virtual_mimo_metric_identities() {
    // single user: the ratio collapses to the utility itself
    let params = ChannelParams::new(vec![1.0], 1.0, vec![100.0]).unwrap();
    let g = make_energy_efficient_pc(params, EfficiencyFunction::default(), true).unwrap();
    let p = StrategyProfile::reals(&[10.0]);
    let v = virtual_mimo_metric(&g, &p).unwrap();
    let u = g.game().evaluate(&p).unwrap()[0];
    assert!((v - u).abs() < 1e-15);

    // symmetric two-user instance without interference cancellation:
    // equal gains and powers give v = u_1 = u_2
    let params = ChannelParams::new(vec![1.0, 1.0], 1.0, vec![100.0, 100.0]).unwrap();
    let g = make_energy_efficient_pc(params, EfficiencyFunction::default(), false).unwrap();
    let p = StrategyProfile::reals(&[30.0, 30.0]);
    let v = virtual_mimo_metric(&g, &p).unwrap();
    let u = g.game().evaluate(&p).unwrap();
    assert!((u[0] - u[1]).abs() < 1e-15);
    assert!((v - u[0]).abs() < 1e-15);

    // asymmetric instance: cross-check against componentwise evaluation
    let g = default_energy();
    let powers = [40.0, 70.0];
    let p = StrategyProfile::reals(&powers);
    let v = virtual_mimo_metric(&g, &p).unwrap();
    let effs = g.efficiencies(&powers);
    let direct = (effs[0] + effs[1]) / (powers[0] + powers[1]);
    assert!((v - direct).abs() < 1e-15);

    // undefined at zero power
    assert!(virtual_mimo_metric(&g, &StrategyProfile::reals(&[0.0, 0.0])).is_err());
}

#[test]
fn mac_discretized_full_power_cell_is_pareto_optimal_with_sum_rate_welfare() {
    let params = ChannelParams::new(vec![1.0, 1.0], 1.0, vec![1.0, 1.0]).unwrap();
    let mac = make_mac_rate_game(params).unwrap();
    let grid = discretize(mac.game(), 11).unwrap();
    let full = [10usize, 10usize];
    let welfare = social_welfare_finite(&grid.finite, &full);
    assert!((welfare - 3f64.log2()).abs() < 1e-9);
    assert!(is_pareto_optimal(&grid.finite, &full).unwrap().optimal);
    // the welfare-optimal cell is unique here: both at full power
    for actions in grid.finite.profiles() {
        if actions != full {
            assert!(social_welfare_finite(&grid.finite, &actions) < welfare + 1e-12);
        }
    }
}

#[test]
fn mac_discretized_two_point_grid_entry() {
    // 2 points per axis: cell (1,1) is full power; the last-decoded user
    // sees no interference, so its rate is log2(1 + 1) = 1
    let params = ChannelParams::new(vec![1.0, 1.0], 1.0, vec![1.0, 1.0]).unwrap();
    let mac = make_mac_rate_game(params).unwrap();
    let grid = discretize(mac.game(), 2).unwrap();
    assert_eq!(grid.finite.cells(), 4);
    let u = grid.finite.payoff_vec(&[1, 1]);
    assert!((u[0] - 1.0).abs() < 1e-12);
}

#[test]
fn mac_cooperation_segment_welfare_constant_across_decoding_orders() {
    let mut welfares = Vec::new();
    for order in [vec![0, 1], vec![1, 0]] {
        let params =
            ChannelParams::with_decoding_order(vec![1.0, 1.0], 1.0, vec![1.0, 1.0], order).unwrap();
        let mac = make_mac_rate_game(params).unwrap();
        let u = mac.game().evaluate(&mac.full_power_profile()).unwrap();
        welfares.push(u[0] + u[1]);
    }
    assert!((welfares[0] - welfares[1]).abs() < 1e-9);
    assert!((welfares[0] - 3f64.log2()).abs() < 1e-12);
}

#[test]
fn two_band_asymmetric_preset_has_multiple_equilibria_on_grid() {
    let g = two_band_asymmetric_preset();
    let grid = discretize(g.game(), 101).unwrap();
    let nes = pure_ne_search(&grid.finite);
    // the frozen preset yields exactly the two specialization profiles
    assert_eq!(nes.len(), 2, "equilibria: {nes:?}");
    let coords: Vec<Vec<f64>> = nes
        .iter()
        .map(|r| {
            r.profile
                .as_actions()
                .unwrap()
                .iter()
                .enumerate()
                .map(|(i, &a)| grid.grids[i][a])
                .collect()
        })
        .collect();
    assert!(coords.contains(&vec![0.0, 1.0]));
    assert!(coords.contains(&vec![1.0, 0.0]));
}

#[test]
fn two_band_symmetric_preset_has_three_equilibria_on_grid() {
    let g = two_band_symmetric_preset();
    let grid = discretize(g.game(), 101).unwrap();
    let nes = pure_ne_search(&grid.finite);
    let coords: Vec<Vec<f64>> = nes
        .iter()
        .map(|r| {
            r.profile
                .as_actions()
                .unwrap()
                .iter()
                .map(|&a| grid.grids[0][a])
                .collect()
        })
        .collect();
    assert_eq!(coords.len(), 3, "equilibria: {coords:?}");
    assert!(coords.contains(&vec![0.0, 1.0]));
    assert!(coords.contains(&vec![1.0, 0.0]));
    assert!(coords.contains(&vec![0.5, 0.5]));
}

#[test]
fn two_band_dynamics_select_equilibrium_by_starting_point() {
    let g = two_band_asymmetric_preset();
    let a = br_dynamics(g.game(), &StrategyProfile::reals(&[0.9, 0.1]), 500, 1e-6).unwrap();
    let b = br_dynamics(g.game(), &StrategyProfile::reals(&[0.1, 0.9]), 500, 1e-6).unwrap();
    assert!(a.converged && b.converged);
    let la = a.limit.unwrap().as_reals().unwrap();
    let lb = b.limit.unwrap().as_reals().unwrap();
    let dist = (la[0] - lb[0]).abs().max((la[1] - lb[1]).abs());
    assert!(dist > 0.5, "limits {la:?} vs {lb:?}");
    for limit in [&la, &lb] {
        let eps = ne_verify(g.game(), &StrategyProfile::reals(limit), 101).unwrap();
        assert!(eps <= 1e-4, "limit {limit:?} eps {eps}");
    }
}

#[test]
fn two_band_basins_are_contiguous() {
    let g = two_band_asymmetric_preset();
    let map = basin_map(g.game(), 20, &BrOptions::default()).unwrap();
    assert!(map.cluster_count() >= 2);
    assert_eq!(map.diverged_cells, 0);
    for label in 0..map.cluster_count() {
        assert!(
            basin_is_contiguous(&map.labels, map.resolution, label),
            "basin {label} is fragmented"
        );
    }
}

fn basin_is_contiguous(labels: &[Option<usize>], res: usize, label: usize) -> bool {
    let total = labels.iter().filter(|l| **l == Some(label)).count();
    if total == 0 {
        return false;
    }
    let start = labels.iter().position(|l| *l == Some(label)).unwrap();
    let mut seen = vec![false; labels.len()];
    let mut stack = vec![start];
    seen[start] = true;
    let mut reached = 0;
    while let Some(cell) = stack.pop() {
        reached += 1;
        let (i, j) = (cell / res, cell % res);
        let mut push = |ni: usize, nj: usize| {
            let n = ni * res + nj;
            if !seen[n] && labels[n] == Some(label) {
                seen[n] = true;
                stack.push(n);
            }
        };
        if i > 0 {
            push(i - 1, j);
        }
        if i + 1 < res {
            push(i + 1, j);
        }
        if j > 0 {
            push(i, j - 1);
        }
        if j + 1 < res {
            push(i, j + 1);
        }
    }
    reached == total
}

#[test]
fn aloha_correlated_play_collides_less_than_the_mixed_equilibrium() {
    let fg = aloha_default();
    let run = regret_matching_ce(&fg, 100_000, 0).unwrap();
    assert!(run.max_violation <= 5e-2);
    let q = aloha_symmetric_mixed_transmit_prob(1.0, 1.0, 0.1);
    let mixed_collision = q * q;
    let ce_collision = run.distribution.prob(&[0, 0]);
    assert!(
        ce_collision <= mixed_collision,
        "CE collision {ce_collision} vs mixed {mixed_collision}"
    );
}

#[test]
fn cournot_matches_hand_solved_intersection() {
    let g = make_cournot(10.0, 1.0, 1.0).unwrap();
    let trace = br_dynamics(g.game(), &StrategyProfile::reals(&[0.0, 0.0]), 300, 1e-10).unwrap();
    let limit = trace.limit.unwrap().as_reals().unwrap();
    assert!((limit[0] - 3.0).abs() < 1e-8);
    assert!((limit[1] - 3.0).abs() < 1e-8);
    let u = g
        .game()
        .evaluate(&StrategyProfile::reals(&[3.0, 3.0]))
        .unwrap();
    assert_eq!(u, vec![9.0, 9.0]);
}

/// Smooth game with a known transcendental cross-partial, used to measure
/// the quadratic convergence of the finite-difference stencil; on purely
/// quadratic utilities the stencil is exact and the ratio is undefined.
fn transcendental_game() -> (Game, impl Fn(f64, f64) -> f64) {
    let game = Game::new(
        "smooth",
        vec![
            StrategySpace::interval(0.0, 2.0).unwrap(),
            StrategySpace::interval(0.0, 2.0).unwrap(),
        ],
        Arc::new(|p: &StrategyProfile| {
            let x = p.real(0).unwrap();
            let y = p.real(1).unwrap();
            vec![(x * y).sin(), -(y - 0.5) * (y - 0.5)]
        }),
    )
    .unwrap();
    // d2/dxdy sin(xy) = cos(xy) - xy sin(xy)
    let analytic = |x: f64, y: f64| (x * y).cos() - x * y * (x * y).sin();
    (game, analytic)
}

#[test]
fn fd_cross_partials_quadratic_convergence_under_step_halving() {
    let (game, analytic) = transcendental_game();
    let point = [0.8, 0.9];
    let truth = analytic(point[0], point[1]);
    let h = 1e-2;
    let err_h = (cross_partial_estimate(&game, 0, 0, 1, &point, h).unwrap() - truth).abs();
    let err_h2 = (cross_partial_estimate(&game, 0, 0, 1, &point, h / 2.0).unwrap() - truth).abs();
    let ratio = err_h / err_h2;
    assert!(
        (3.0..=5.0).contains(&ratio),
        "halving ratio {ratio} (errors {err_h} -> {err_h2})"
    );
}

#[test]
fn fd_cross_partials_exact_on_quadratics() {
    let g = make_cournot(10.0, 1.0, 1.0).unwrap();
    let v = cross_partial_estimate(g.game(), 0, 0, 1, &[3.0, 3.0], 1e-3).unwrap();
    assert!((v - (-1.0)).abs() < 1e-6, "cross-partial {v}");
}
