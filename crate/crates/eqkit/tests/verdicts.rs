//! Witness replay and verdict-semantics tests: every counterexample a
//! check emits must re-evaluate to a violation through the defining
//! inequality, using only the data stored in the witness.

use std::sync::Arc;

use eqkit::analysis::{
    check_dsc, check_potential_condition, check_smodular, check_standard_br,
    cross_partial_estimate, partial_estimate, verify_exact_potential, DscConvention, FdConfig,
    PotentialFn, PotentialKind, Witness, REL_TOL,
};
use eqkit::games::power_control::make_potential_pc;
use eqkit::games::ChannelParams;
use eqkit::solvers::{br_dynamics, support_enumeration_2p};
use eqkit::{expected_utility, FiniteGame, Game, MixedProfile, StrategyProfile, StrategySpace};

fn aligned_quadratic() -> (Game, PotentialFn) {
    let game = Game::new(
        "aligned",
        vec![
            StrategySpace::interval(0.0, 1.0).unwrap(),
            StrategySpace::interval(0.0, 1.0).unwrap(),
        ],
        Arc::new(|p: &StrategyProfile| {
            let x = p.real(0).unwrap();
            let y = p.real(1).unwrap();
            vec![-x * x + x * y, -y * y + x * y]
        }),
    )
    .unwrap();
    let phi: PotentialFn = Arc::new(|p: &StrategyProfile| {
        let x = p.real(0).unwrap();
        let y = p.real(1).unwrap();
        -x * x - y * y + x * y
    });
    (game, phi)
}

#[test]
fn expected_utility_of_uniform_matching_pennies_is_zero() {
    let fg = eqkit::games::classic::matching_pennies();
    let u = expected_utility(&fg, &MixedProfile::uniform(fg.action_counts())).unwrap();
    assert!(u[0].abs() < 1e-15 && u[1].abs() < 1e-15);
}

/// Build a candidate potential for a 2x2 game by path integration; for a
/// true potential game this reconstructs the potential, so its rejection
/// on matching pennies proves no exact potential exists.
#[test]
fn matching_pennies_admits_no_exact_potential() {
    let fg = eqkit::games::classic::matching_pennies();
    let u = |i: usize, a: usize, b: usize| fg.payoff(&[a, b], i);
    // phi(0,0) = 0; phi(a,0) via player-0 deviations; phi(a,b) via player-1
    let mut phi_table = [[0.0f64; 2]; 2];
    for a in 0..2 {
        if a > 0 {
            phi_table[a][0] = phi_table[0][0] + u(0, a, 0) - u(0, 0, 0);
        }
        for b in 1..2 {
            phi_table[a][b] = phi_table[a][0] + u(1, a, b) - u(1, a, 0);
        }
    }
    let phi: PotentialFn = Arc::new(move |p: &StrategyProfile| {
        let a = p.action(0).unwrap();
        let b = p.action(1).unwrap();
        phi_table[a][b]
    });
    let game = fg.as_game();
    let verdict =
        verify_exact_potential(&game, &phi, PotentialKind::Exact, &FdConfig::default()).unwrap();
    assert!(
        !verdict.holds(),
        "a zero-sum matching game cannot be potential"
    );

    // the witness replays: recompute both deltas from its stored data
    let Witness::DeviationMismatch {
        profile,
        player,
        deviation,
        ..
    } = verdict.witness.expect("witness")
    else {
        panic!("unexpected witness kind")
    };
    let mut deviated = profile.clone();
    deviated.set(player, deviation);
    let du =
        game.utility_of(player, &profile).unwrap() - game.utility_of(player, &deviated).unwrap();
    let dphi = phi(&profile) - phi(&deviated);
    assert!((du - dphi).abs() > verdict.tolerance);
}

#[test]
fn ordinal_mode_accepts_a_doubled_potential_exact_mode_rejects_it() {
    let (game, phi) = aligned_quadratic();
    let doubled: PotentialFn = {
        let inner = phi.clone();
        Arc::new(move |p: &StrategyProfile| 2.0 * inner(p))
    };
    let cfg = FdConfig::default();
    assert!(
        !verify_exact_potential(&game, &doubled, PotentialKind::Exact, &cfg)
            .unwrap()
            .holds()
    );
    assert!(
        verify_exact_potential(&game, &doubled, PotentialKind::Ordinal, &cfg)
            .unwrap()
            .holds()
    );
    assert!(
        verify_exact_potential(&game, &phi, PotentialKind::Exact, &cfg)
            .unwrap()
            .holds()
    );
}

#[test]
fn log_cost_game_passes_the_cross_partial_potential_condition() {
    let params = ChannelParams::new(vec![1.0, 0.8], 1.0, vec![10.0, 10.0]).unwrap();
    let g = make_potential_pc(vec![0.5, 0.5], params).unwrap();
    let v = check_potential_condition(g.game(), &FdConfig::default()).unwrap();
    assert!(v.holds(), "decoupled utilities have vanishing cross terms");
}

#[test]
fn smodular_counterexample_witness_replays() {
    // bilinear +xy interaction: submodularity fails with cross-partial +1
    let game = Game::new(
        "bilinear",
        vec![
            StrategySpace::interval(0.0, 1.0).unwrap(),
            StrategySpace::interval(0.0, 1.0).unwrap(),
        ],
        Arc::new(|p: &StrategyProfile| {
            let x = p.real(0).unwrap();
            let y = p.real(1).unwrap();
            vec![-x * x + x * y, -y * y + x * y]
        }),
    )
    .unwrap();
    let cfg = FdConfig::default();
    let verdicts = check_smodular(&game, &cfg).unwrap();
    assert!(!verdicts.submodular.holds());
    let Witness::CrossPartial {
        player,
        other,
        point,
        value,
    } = verdicts.submodular.witness.expect("witness")
    else {
        panic!("unexpected witness kind")
    };
    let h = cfg.step_rel * 1.0;
    let replayed = cross_partial_estimate(&game, player, player, other, &point, h).unwrap();
    assert!(replayed > verdicts.submodular.tolerance);
    assert!((replayed - value).abs() < 1e-9);
}

#[test]
fn potential_condition_witness_replays() {
    // d2u1/dxdy = 1 but d2u2/dxdy = 3
    let game = Game::new(
        "mismatched",
        vec![
            StrategySpace::interval(0.0, 1.0).unwrap(),
            StrategySpace::interval(0.0, 1.0).unwrap(),
        ],
        Arc::new(|p: &StrategyProfile| {
            let x = p.real(0).unwrap();
            let y = p.real(1).unwrap();
            vec![-x * x + x * y, -y * y + 3.0 * x * y]
        }),
    )
    .unwrap();
    let cfg = FdConfig::default();
    let verdict = check_potential_condition(&game, &cfg).unwrap();
    assert!(!verdict.holds());
    let Witness::PotentialCross { i, j, point, value } = verdict.witness.expect("witness") else {
        panic!("unexpected witness kind")
    };
    let h = cfg.step_rel * 1.0;
    let d_i = cross_partial_estimate(&game, i, i, j, &point, h).unwrap();
    let d_j = cross_partial_estimate(&game, j, i, j, &point, h).unwrap();
    assert!((d_i - d_j).abs() > verdict.tolerance);
    assert!(((d_i - d_j) - value).abs() < 1e-9);
}

#[test]
fn dsc_witness_replays_under_the_flipped_convention() {
    let game = Game::new(
        "decoupled",
        vec![
            StrategySpace::interval(0.0, 1.0).unwrap(),
            StrategySpace::interval(0.0, 1.0).unwrap(),
        ],
        Arc::new(|p: &StrategyProfile| {
            let x = p.real(0).unwrap();
            let y = p.real(1).unwrap();
            vec![-(x - 0.3) * (x - 0.3), -(y - 0.6) * (y - 0.6)]
        }),
    )
    .unwrap();
    let cfg = FdConfig::default();
    let weights = [1.0, 1.0];
    let dsc = check_dsc(&game, &weights, DscConvention::Positive, &cfg).unwrap();
    assert!(
        !dsc.verdict.holds(),
        "concave game violates the positive orientation"
    );
    let Witness::SignIndefinite { s, s_prime, value } = dsc.verdict.witness.expect("witness")
    else {
        panic!("unexpected witness kind")
    };
    let h = cfg.step_rel * 1.0;
    let mut pairing = 0.0;
    for i in 0..2 {
        let g = weights[i] * partial_estimate(&game, i, i, &s, h).unwrap();
        let g2 = weights[i] * partial_estimate(&game, i, i, &s_prime, h).unwrap();
        pairing += (s[i] - s_prime[i]) * (g - g2);
    }
    let dist2: f64 = s.iter().zip(&s_prime).map(|(a, b)| (a - b) * (a - b)).sum();
    let normalized = pairing / dist2;
    assert!(
        normalized < dsc.verdict.tolerance,
        "pairing {normalized} not a violation"
    );
    assert!((normalized - value).abs() < 1e-9);
}

#[test]
fn monotonicity_witness_replays() {
    // decreasing map, positive on the whole orthant
    let br = |x: &[f64]| vec![1.0 / (1.0 + x[0]), 1.0 / (1.0 + x[1])];
    let verdict = check_standard_br(br, &[1.0, 1.0], &FdConfig::default()).unwrap();
    assert!(!verdict.monotonicity.holds());
    let Witness::NonMonotone {
        x,
        x_prime,
        component,
        ..
    } = verdict.monotonicity.witness.expect("witness")
    else {
        panic!("unexpected witness kind")
    };
    let g = br(&x);
    let g2 = br(&x_prime);
    assert!(x.iter().zip(&x_prime).all(|(a, b)| a <= b));
    assert!(g[component] > g2[component] + verdict.monotonicity.tolerance);
}

#[test]
fn fd_cross_partials_symmetric_in_the_coordinate_pair() {
    let game = Game::new(
        "smooth",
        vec![
            StrategySpace::interval(0.0, 2.0).unwrap(),
            StrategySpace::interval(0.0, 2.0).unwrap(),
        ],
        Arc::new(|p: &StrategyProfile| {
            let x = p.real(0).unwrap();
            let y = p.real(1).unwrap();
            vec![(x * y).sin() + (x - y).exp(), 0.0]
        }),
    )
    .unwrap();
    for point in [[0.5, 0.5], [1.3, 0.7], [1.9, 1.9]] {
        let a = cross_partial_estimate(&game, 0, 0, 1, &point, 1e-3).unwrap();
        let b = cross_partial_estimate(&game, 0, 1, 0, &point, 1e-3).unwrap();
        let scale = a.abs().max(1.0);
        assert!((a - b).abs() <= 10.0 * REL_TOL * scale, "{a} vs {b}");
    }
}

#[test]
fn potential_is_nondecreasing_along_br_dynamics() {
    let (game, phi) = aligned_quadratic();
    for start in [[0.0, 0.0], [1.0, 0.1], [0.4, 0.9]] {
        let trace = br_dynamics(&game, &StrategyProfile::reals(&start), 100, 1e-10).unwrap();
        assert!(trace.converged);
        let mut last = f64::NEG_INFINITY;
        for it in &trace.iterates {
            let value = phi(it);
            assert!(value >= last - 1e-12, "potential dipped: {last} -> {value}");
            last = value;
        }
    }
}

#[test]
fn support_enumeration_counts_degenerate_systems() {
    let fg = FiniteGame::from_tables_2p(
        "flat",
        &[vec![0.0, 0.0], vec![0.0, 0.0]],
        &[vec![0.0, 0.0], vec![0.0, 0.0]],
    )
    .unwrap();
    let out = support_enumeration_2p(&fg).unwrap();
    assert!(
        out.degenerate_supports > 0,
        "full supports are singular here"
    );
    // the four pure profiles are all equilibria of the flat game
    assert_eq!(out.equilibria.len(), 4);
}

/// Every enumerated mixed equilibrium survives an independent check built
/// on `expected_utility`: no pure deviation improves by more than 1e-8.
#[test]
fn mixed_equilibria_pass_an_independent_verifier() {
    for fg in eqkit::games::builtin_finite_games() {
        let out = support_enumeration_2p(&fg).unwrap();
        assert!(!out.equilibria.is_empty(), "{}", fg.name());
        for eq in &out.equilibria {
            let base = expected_utility(&fg, &eq.profile).unwrap();
            for player in 0..2 {
                for action in 0..fg.action_counts()[player] {
                    let mut dists = eq.profile.distributions().to_vec();
                    dists[player] = (0..fg.action_counts()[player])
                        .map(|a| if a == action { 1.0 } else { 0.0 })
                        .collect();
                    let deviated = MixedProfile::new(dists).unwrap();
                    let u = expected_utility(&fg, &deviated).unwrap();
                    assert!(
                        u[player] <= base[player] + 1e-8,
                        "{}: player {player} gains {} via action {action}",
                        fg.name(),
                        u[player] - base[player]
                    );
                }
            }
        }
    }
}

#[test]
fn regret_matching_reaches_small_violation_on_every_builtin() {
    for fg in eqkit::games::builtin_finite_games() {
        let run = eqkit::solvers::regret_matching_ce(&fg, 100_000, 0).unwrap();
        assert!(
            run.max_violation <= 5e-2,
            "{}: violation {}",
            fg.name(),
            run.max_violation
        );
    }
}
