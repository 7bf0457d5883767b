//! Central finite differences over game utilities.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{Game, StrategyProfile};

/// Per-axis FD step: `step_rel` times the interval width. Errors if the
/// interval cannot accommodate a centered stencil.
pub(crate) fn steps(game: &Game, step_rel: f64) -> Result<Vec<f64>> {
    game.spaces()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let w = s.width().ok_or_else(|| {
                Error::Unsupported(format!(
                    "finite differences need interval spaces; player {i} is finite"
                ))
            })?;
            let h = step_rel * w;
            if 2.0 * h >= w {
                return Err(Error::Parameter(format!(
                    "FD step {h} too large for interval of width {w} (player {i})"
                )));
            }
            Ok(h)
        })
        .collect()
}

/// First partial of `u_owner` w.r.t. coordinate `axis` at an interior point.
pub(crate) fn partial(
    game: &Game,
    owner: usize,
    axis: usize,
    point: &[f64],
    h: f64,
) -> Result<f64> {
    let base = StrategyProfile::reals(point);
    let up = game.utility_of(owner, &base.with_real(axis, point[axis] + h))?;
    let dn = game.utility_of(owner, &base.with_real(axis, point[axis] - h))?;
    Ok((up - dn) / (2.0 * h))
}

/// Mixed second partial of `u_owner` w.r.t. coordinates `i` and `j` via the
/// centered four-point stencil.
pub(crate) fn cross_partial(
    game: &Game,
    owner: usize,
    i: usize,
    j: usize,
    point: &[f64],
    h_i: f64,
    h_j: f64,
) -> Result<f64> {
    debug_assert_ne!(i, j);
    let eval = |di: f64, dj: f64| -> Result<f64> {
        let mut q = point.to_vec();
        q[i] += di;
        q[j] += dj;
        game.utility_of(owner, &StrategyProfile::reals(&q))
    };
    let pp = eval(h_i, h_j)?;
    let pm = eval(h_i, -h_j)?;
    let mp = eval(-h_i, h_j)?;
    let mm = eval(-h_i, -h_j)?;
    Ok((pp - pm - mp + mm) / (4.0 * h_i * h_j))
}

/// Uniform lattice over the h-interior box `[lo+h, hi-h]` per axis.
/// Falls back to seeded random interior points when the full cartesian
/// product would exceed `cap`.
pub(crate) fn interior_lattice(
    game: &Game,
    per_axis: usize,
    h: &[f64],
    cap: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<f64>>> {
    let k = game.player_count();
    let mut axes = Vec::with_capacity(k);
    for (i, space) in game.spaces().iter().enumerate() {
        let (lo, hi) = space.bounds().ok_or_else(|| {
            Error::Unsupported(format!(
                "interior lattice needs interval spaces; player {i} is finite"
            ))
        })?;
        axes.push(crate::game::linspace(lo + h[i], hi - h[i], per_axis));
    }
    let total = per_axis.pow(k as u32);
    if total <= cap {
        let mut points = Vec::with_capacity(total);
        let mut idx = vec![0usize; k];
        loop {
            points.push(idx.iter().enumerate().map(|(i, &a)| axes[i][a]).collect());
            let mut axis = k;
            loop {
                if axis == 0 {
                    return Ok(points);
                }
                axis -= 1;
                idx[axis] += 1;
                if idx[axis] < per_axis {
                    break;
                }
                idx[axis] = 0;
            }
        }
    }
    let points = (0..cap)
        .map(|_| {
            game.spaces()
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let (lo, hi) = s.bounds().unwrap();
                    rng.gen_range(lo + h[i]..hi - h[i])
                })
                .collect()
        })
        .collect();
    Ok(points)
}

/// Random point in the h-interior of the product box.
pub(crate) fn random_interior_point(game: &Game, h: &[f64], rng: &mut ChaCha8Rng) -> Vec<f64> {
    game.spaces()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let (lo, hi) = s.bounds().expect("interval space");
            rng.gen_range(lo + h[i]..hi - h[i])
        })
        .collect()
}
