//! Plot-ready CSV emission for the bulk results (basin grids, dynamics
//! traces, correlated distributions, Pareto tables). Headers are fixed and
//! documented in the README; floats carry 17 significant digits so the
//! files replay bit-exactly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use eqkit::Strategy;

use crate::config::CliError;
use crate::report::{AnalysisOutcome, AnalysisResult, RunReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvKind {
    /// `basins.csv`: start_1, start_2, ne_label, ne_coord_1, ne_coord_2.
    Basins,
    /// `trace.csv`: iteration, player, s_1..s_K; row 0 is the start.
    Trace,
    /// `ce.csv`: action_1..action_K, probability.
    Ce,
    /// `pareto.csv`: s_1..s_K, optimal, dominating_1..dominating_K.
    Pareto,
}

impl CsvKind {
    pub fn file_name(&self) -> &'static str {
        match self {
            CsvKind::Basins => "basins.csv",
            CsvKind::Trace => "trace.csv",
            CsvKind::Ce => "ce.csv",
            CsvKind::Pareto => "pareto.csv",
        }
    }

    fn source_analysis(&self) -> &'static str {
        match self {
            CsvKind::Basins => "basins",
            CsvKind::Trace => "solve",
            CsvKind::Ce => "correlated",
            CsvKind::Pareto => "efficiency",
        }
    }
}

/// 17 significant digits, enough to reconstruct the exact f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_strategy(s: &Strategy) -> String {
    match s {
        Strategy::Real(x) => fmt_float(*x),
        Strategy::Action(a) => a.to_string(),
    }
}

/// Render the requested CSV from a run report, or error naming the absent
/// analysis.
pub fn render_csv(report: &RunReport, which: CsvKind) -> Result<String, CliError> {
    let missing = || CliError::MissingResult(which.source_analysis().to_string());
    let record = report.record(which.source_analysis()).ok_or_else(missing)?;
    let AnalysisOutcome::Ok { result } = record else {
        return Err(missing());
    };
    let mut out = String::new();
    match (which, result) {
        (CsvKind::Basins, AnalysisResult::Basins { map, .. }) => {
            out.push_str("start_1,start_2,ne_label,ne_coord_1,ne_coord_2\n");
            let res = map.resolution;
            for i in 0..res {
                for j in 0..res {
                    let start1 = fmt_float(map.start_grids[0][i]);
                    let start2 = fmt_float(map.start_grids[1][j]);
                    match map.label_at(i, j) {
                        Some(label) => {
                            let eq = map.equilibria[label].as_reals().expect("real equilibria");
                            writeln!(
                                out,
                                "{start1},{start2},{label},{},{}",
                                fmt_float(eq[0]),
                                fmt_float(eq[1])
                            )
                            .expect("string write");
                        }
                        None => {
                            writeln!(out, "{start1},{start2},DIVERGED,,").expect("string write");
                        }
                    }
                }
            }
        }
        (CsvKind::Trace, AnalysisResult::Solve { trace, .. }) => {
            let trace = trace.as_ref().ok_or_else(missing)?;
            let players = trace.iterates[0].len();
            out.push_str("iteration,player");
            for i in 1..=players {
                write!(out, ",s_{i}").expect("string write");
            }
            out.push('\n');
            let mut previous: Option<&eqkit::StrategyProfile> = None;
            for (k, profile) in trace.iterates.iter().enumerate() {
                let mover = previous
                    .and_then(|prev| {
                        let changed: Vec<usize> = (0..players)
                            .filter(|&i| prev.get(i) != profile.get(i))
                            .collect();
                        (changed.len() == 1).then(|| changed[0].to_string())
                    })
                    .unwrap_or_default();
                write!(out, "{k},{mover}").expect("string write");
                for i in 0..players {
                    write!(out, ",{}", fmt_strategy(&profile.get(i))).expect("string write");
                }
                out.push('\n');
                previous = Some(profile);
            }
        }
        (CsvKind::Ce, AnalysisResult::Correlated { play }) => {
            let dist = &play.distribution;
            let counts = dist.action_counts();
            for i in 1..=counts.len() {
                write!(out, "action_{i},").expect("string write");
            }
            out.push_str("probability\n");
            let cells: usize = counts.iter().product();
            let mut actions = vec![0usize; counts.len()];
            for cell in 0..cells {
                let mut rest = cell;
                for i in (0..counts.len()).rev() {
                    actions[i] = rest % counts[i];
                    rest /= counts[i];
                }
                for a in &actions {
                    write!(out, "{a},").expect("string write");
                }
                writeln!(out, "{}", fmt_float(dist.probabilities()[cell])).expect("string write");
            }
        }
        (CsvKind::Pareto, AnalysisResult::Efficiency { pareto, .. }) => {
            let players = pareto.first().map(|e| e.profile.len()).unwrap_or_default();
            for i in 1..=players {
                write!(out, "s_{i},").expect("string write");
            }
            out.push_str("optimal");
            for i in 1..=players {
                write!(out, ",dominating_{i}").expect("string write");
            }
            out.push('\n');
            for entry in pareto {
                for i in 0..players {
                    write!(out, "{},", fmt_strategy(&entry.profile.get(i))).expect("string write");
                }
                write!(out, "{}", entry.optimal).expect("string write");
                for i in 0..players {
                    match &entry.dominating {
                        Some(d) => write!(out, ",{}", fmt_strategy(&d.get(i))),
                        None => write!(out, ","),
                    }
                    .expect("string write");
                }
                out.push('\n');
            }
        }
        _ => return Err(missing()),
    }
    Ok(out)
}

/// Write the requested CSV into `out_dir`, returning the path.
pub fn emit_csv(report: &RunReport, which: CsvKind, out_dir: &Path) -> Result<PathBuf, CliError> {
    let body = render_csv(report, which)?;
    std::fs::create_dir_all(out_dir)?;
    let path = out_dir.join(which.file_name());
    std::fs::write(&path, body)?;
    Ok(path)
}

/// The CSV kinds whose source analyses are present and successful.
pub fn available_csvs(report: &RunReport) -> Vec<CsvKind> {
    [
        CsvKind::Basins,
        CsvKind::Trace,
        CsvKind::Ce,
        CsvKind::Pareto,
    ]
    .into_iter()
    .filter(|kind| render_csv(report, *kind).is_ok())
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use crate::run::run;

    #[test]
    fn float_format_round_trips_exactly() {
        for &x in &[0.5, 1.0 / 3.0, 2.0f64.sqrt(), 6.474600379589358, -1e-17] {
            let s = fmt_float(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn missing_result_names_the_analysis() {
        let cfg = parse_config(
            r#"
            game = "cournot"
            analyses = ["solve"]
            "#,
        )
        .unwrap();
        let report = run(&cfg).unwrap();
        let e = render_csv(&report, CsvKind::Basins).unwrap_err();
        assert!(e.to_string().contains("basins"), "{e}");
    }

    #[test]
    fn trace_csv_first_row_is_the_start() {
        let cfg = parse_config(
            r#"
            game = "cournot"
            analyses = ["solve"]
            "#,
        )
        .unwrap();
        let report = run(&cfg).unwrap();
        let body = render_csv(&report, CsvKind::Trace).unwrap();
        let mut lines = body.lines();
        assert_eq!(lines.next().unwrap(), "iteration,player,s_1,s_2");
        let first = lines.next().unwrap();
        // midpoint start of [0,10]^2 is (5, 5)
        let fields: Vec<&str> = first.split(',').collect();
        assert_eq!(fields[0], "0");
        assert_eq!(fields[1], "");
        assert_eq!(fields[2].parse::<f64>().unwrap(), 5.0);
        assert_eq!(fields[3].parse::<f64>().unwrap(), 5.0);
    }
}
