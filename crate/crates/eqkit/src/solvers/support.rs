//! Mixed-equilibrium computation for two-player finite games by support
//! enumeration: for every equal-size support pair, solve the indifference
//! linear systems and keep solutions that are valid distributions and
//! survive the mixed-equilibrium inequality check.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::{FiniteGame, MixedProfile};

/// Budget: supports are enumerated over all subset pairs, so action counts
/// beyond this are refused rather than silently degraded.
pub const MAX_ACTIONS: usize = 8;

/// Acceptance tolerance for distribution validity and the equilibrium
/// inequalities.
pub const NE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct MixedNash {
    pub profile: MixedProfile,
    /// Expected payoff per player at the equilibrium.
    pub payoffs: Vec<f64>,
    pub support: (Vec<usize>, Vec<usize>),
}

#[derive(Debug, Clone, Serialize)]
pub struct SupportEnumeration {
    pub equilibria: Vec<MixedNash>,
    /// Support pairs skipped because their indifference system was singular.
    pub degenerate_supports: usize,
}

/// Enumerate equal-size support pairs of a bimatrix game and solve each
/// indifference system. Pure equilibria appear as size-1 supports.
pub fn support_enumeration_2p(fg: &FiniteGame) -> Result<SupportEnumeration> {
    if fg.player_count() != 2 {
        return Err(Error::Unsupported(
            "support enumeration handles 2-player games".into(),
        ));
    }
    let n1 = fg.action_counts()[0];
    let n2 = fg.action_counts()[1];
    if n1 > MAX_ACTIONS || n2 > MAX_ACTIONS {
        return Err(Error::Unsupported(format!(
            "support enumeration refuses games beyond {MAX_ACTIONS} actions per player ({n1}x{n2} given)"
        )));
    }
    let u1 = |a: usize, b: usize| fg.payoff(&[a, b], 0);
    let u2 = |a: usize, b: usize| fg.payoff(&[a, b], 1);

    let mut out = SupportEnumeration {
        equilibria: Vec::new(),
        degenerate_supports: 0,
    };

    for k in 1..=n1.min(n2) {
        for s1 in subsets_of_size(n1, k) {
            for s2 in subsets_of_size(n2, k) {
                // q2 on s2 makes player 1 indifferent across s1;
                // q1 on s1 makes player 2 indifferent across s2.
                let q2 = match indifference_solve(k, |row, col| u1(s1[row], s2[col])) {
                    Some(q) => q,
                    None => {
                        out.degenerate_supports += 1;
                        continue;
                    }
                };
                let q1 = match indifference_solve(k, |row, col| u2(s1[col], s2[row])) {
                    Some(q) => q,
                    None => {
                        out.degenerate_supports += 1;
                        continue;
                    }
                };
                if q1.iter().chain(&q2).any(|&p| p < -NE_TOL) {
                    continue;
                }
                let mut d1 = vec![0.0; n1];
                for (idx, &a) in s1.iter().enumerate() {
                    d1[a] = q1[idx].max(0.0);
                }
                let mut d2 = vec![0.0; n2];
                for (idx, &b) in s2.iter().enumerate() {
                    d2[b] = q2[idx].max(0.0);
                }
                let Some(candidate) = validate_candidate(fg, d1, d2) else {
                    continue;
                };
                let duplicate = out
                    .equilibria
                    .iter()
                    .any(|e| profile_distance(&e.profile, &candidate.profile) <= 1e-9);
                if !duplicate {
                    out.equilibria.push(candidate);
                }
            }
        }
    }
    Ok(out)
}

/// Solve for the k-vector q with `sum q = 1` making the row player
/// indifferent across its support: `U q = v 1` for a common value `v`.
/// Returns `None` when the augmented system is singular.
fn indifference_solve(k: usize, u: impl Fn(usize, usize) -> f64) -> Option<Vec<f64>> {
    // Unknowns: q_0..q_{k-1}, v. Equations: row r: sum_c u(r,c) q_c - v = 0;
    // plus sum_c q_c = 1.
    let n = k + 1;
    let mut m = vec![vec![0.0; n + 1]; n];
    for r in 0..k {
        for c in 0..k {
            m[r][c] = u(r, c);
        }
        m[r][k] = -1.0;
        m[r][n] = 0.0;
    }
    for c in 0..k {
        m[k][c] = 1.0;
    }
    m[k][n] = 1.0;
    solve_linear(&mut m).map(|sol| sol[..k].to_vec())
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve_linear(m: &mut [Vec<f64>]) -> Option<Vec<f64>> {
    let n = m.len();
    let scale: f64 = m
        .iter()
        .flat_map(|row| row[..n].iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1.0);
    for col in 0..n {
        let pivot_row =
            (col..n).max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())?;
        if m[pivot_row][col].abs() < 1e-12 * scale {
            return None;
        }
        m.swap(col, pivot_row);
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

/// Check the mixed-equilibrium inequalities: no pure action beats the
/// candidate's value for either player by more than `NE_TOL`.
fn validate_candidate(fg: &FiniteGame, d1: Vec<f64>, d2: Vec<f64>) -> Option<MixedNash> {
    let n1 = d1.len();
    let n2 = d2.len();
    let value = |player: usize, dist_own: &[f64], dist_other: &[f64]| -> f64 {
        let mut v = 0.0;
        for a in 0..n1 {
            for b in 0..n2 {
                let p = dist_own[if player == 0 { a } else { b }]
                    * dist_other[if player == 0 { b } else { a }];
                if p != 0.0 {
                    v += p * fg.payoff(&[a, b], player);
                }
            }
        }
        v
    };
    let v1 = value(0, &d1, &d2);
    let v2 = value(1, &d2, &d1);
    for a in 0..n1 {
        let payoff: f64 = (0..n2).map(|b| d2[b] * fg.payoff(&[a, b], 0)).sum();
        if payoff > v1 + NE_TOL {
            return None;
        }
    }
    for b in 0..n2 {
        let payoff: f64 = (0..n1).map(|a| d1[a] * fg.payoff(&[a, b], 1)).sum();
        if payoff > v2 + NE_TOL {
            return None;
        }
    }
    let support = (
        (0..n1).filter(|&a| d1[a] > NE_TOL).collect(),
        (0..n2).filter(|&b| d2[b] > NE_TOL).collect(),
    );
    let profile = MixedProfile::new(vec![d1, d2]).ok()?;
    Some(MixedNash {
        payoffs: vec![v1, v2],
        profile,
        support,
    })
}

fn profile_distance(a: &MixedProfile, b: &MixedProfile) -> f64 {
    a.distributions()
        .iter()
        .flatten()
        .zip(b.distributions().iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0f64, f64::max)
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0usize..(1 << n) {
        if mask.count_ones() as usize == k {
            out.push((0..n).filter(|&i| mask & (1 << i) != 0).collect());
        }
    }
    out
}
