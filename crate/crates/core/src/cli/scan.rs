use std::fmt::Write as _;

use rayon::prelude::*;

use super::csv::{format_float, format_opt, Column};
use super::{config_err, CliError, CliResult, Grid, Mode, ObservableSet, VERSION};
use crate::bounds::bound_report;
use crate::expsim::{empirical_bound_report, EmpiricalBoundReport, EmpiricalEstimate, SimConfig};
use crate::{BlochAngles, BoundReport};

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub set: ObservableSet,
    pub theta: Grid,
    pub phi: Grid,
    pub mode: Mode,
    pub simulation: Option<SimConfig>,
}

impl ScanConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.set.dim() != 2 {
            return config_err(format!(
                "scans parameterize qubit states; set '{}' has dimension {}",
                self.set.name,
                self.set.dim()
            ));
        }
        for t in [self.theta.start, self.theta.end] {
            for p in [self.phi.start, self.phi.end] {
                BlochAngles::new(t, p)?;
            }
        }
        Ok(())
    }

    fn points(&self) -> Vec<(f64, f64)> {
        self.theta.values().flat_map(|t| self.phi.values().map(move |p| (t, p))).collect()
    }
}

#[derive(Debug, Clone)]
pub struct ScanRow {
    pub theta: f64,
    pub phi: f64,
    pub report: BoundReport,
    pub empirical: Option<EmpiricalBoundReport>,
}

impl ScanRow {
    fn empirical_value(&self, column: Column) -> Option<EmpiricalEstimate> {
        let e = self.empirical.as_ref()?;
        match column {
            Column::LhsProduct => Some(e.lhs_product),
            Column::LhsSum => Some(e.lhs_sum),
            Column::Bound(id) => e.get(id),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScanTable {
    pub config: ScanConfig,
    pub rows: Vec<ScanRow>,
}

/// Evaluates every grid point, theta-major. Simulated columns are filled when
/// the config carries a [`SimConfig`]; point `k` uses sub-seed `k`.
pub fn scan(cfg: &ScanConfig) -> CliResult<ScanTable> {
    cfg.validate()?;
    let obs = cfg.set.refs();
    let rows = cfg
        .points()
        .into_par_iter()
        .enumerate()
        .map(|(k, (theta, phi))| {
            let psi = BlochAngles::new(theta, phi)?.state();
            let report = bound_report(&obs, &psi)?;
            let empirical = match &cfg.simulation {
                Some(sim) => Some(empirical_bound_report(&obs, &psi, &sim.with_seed(sim.seed.derive(k as u64)))?),
                None => None,
            };
            Ok(ScanRow { theta, phi, report, empirical })
        })
        .collect::<Result<Vec<_>, crate::Error>>()?;
    Ok(ScanTable { config: cfg.clone(), rows })
}

/// [`scan`] with simulation required.
pub fn simulate(cfg: &ScanConfig) -> CliResult<ScanTable> {
    if cfg.simulation.is_none() {
        return Err(CliError::Config("simulate needs a simulation config".into()));
    }
    scan(cfg)
}

impl ScanTable {
    /// Columns that carry values for this observable set.
    pub fn populated_columns(&self) -> Vec<Column> {
        let Some(first) = self.rows.first() else { return Vec::new() };
        Column::ALL.into_iter().filter(|c| c.analytic(&first.report).is_some()).collect()
    }

    pub fn is_simulated(&self) -> bool {
        self.config.simulation.is_some()
    }

    pub fn header(&self) -> String {
        let mut cols = vec!["theta".to_string(), "phi".to_string()];
        cols.extend(Column::ALL.iter().map(|c| c.name().to_string()));
        if self.is_simulated() {
            for c in self.populated_columns() {
                cols.push(format!("{}_emp", c.name()));
                cols.push(format!("{}_err", c.name()));
            }
        }
        cols.join(",")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# urel {VERSION}; set={}; spin-1/2 convention S_i = sigma_i (eigenvalues +1/-1); angles in radians",
            self.config.set.name
        );
        if let Some(sim) = &self.config.simulation {
            let _ = writeln!(
                out,
                "# simulation: shots={} seed={} bootstrap_resamples={}; *_err = bootstrap 1 sigma",
                sim.shots, sim.seed.0, sim.bootstrap_resamples
            );
        }
        out.push_str(&self.header());
        out.push('\n');
        let populated = self.populated_columns();
        for row in &self.rows {
            let mut fields = vec![format_float(row.theta), format_float(row.phi)];
            fields.extend(Column::ALL.iter().map(|c| format_opt(c.analytic(&row.report))));
            if self.is_simulated() {
                for c in &populated {
                    let e = row.empirical_value(*c);
                    fields.push(format_opt(e.map(|e| e.value)));
                    fields.push(format_opt(e.map(|e| e.std_error)));
                }
            }
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

/// Gnuplot script plotting `csv_name` (a path relative to the script).
///
/// One-dimensional grids give curves against the varying angle, two-dimensional
/// grids give surfaces. Simulated tables add error bars for the left-hand
/// sides and the Carlson/additive bounds.
pub fn plot_script(csv_name: &str, table: &ScanTable) -> String {
    let cfg = &table.config;
    let populated = table.populated_columns();
    let surface = cfg.theta.count > 1 && cfg.phi.count > 1;
    let axis = if cfg.theta.count == 1 && cfg.phi.count > 1 { "phi" } else { "theta" };

    let mut panels: Vec<(&str, Vec<Column>)> = Vec::new();
    let pick = |pred: fn(&Column) -> bool| populated.iter().copied().filter(pred).collect::<Vec<_>>();
    if cfg.mode.includes_product() {
        panels.push((
            "product of variances",
            pick(|c| {
                matches!(c, Column::LhsProduct)
                    || matches!(c, Column::Bound(id) if id.kind() == crate::BoundKind::Product)
            }),
        ));
    }
    if cfg.mode.includes_sum() {
        panels.push((
            "sum of variances",
            pick(|c| {
                matches!(c, Column::LhsSum) || matches!(c, Column::Bound(id) if id.kind() == crate::BoundKind::Sum)
            }),
        ));
    }

    let mut s = String::new();
    let _ = writeln!(s, "# generated by urel {VERSION}");
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set datafile columnheaders");
    let _ = writeln!(s, "set key outside right");
    if panels.len() > 1 {
        let _ = writeln!(s, "set multiplot layout 1,{}", panels.len());
    }
    for (title, cols) in &panels {
        let _ = writeln!(s, "set title '{title}'");
        if surface {
            let _ = writeln!(s, "set xlabel 'theta'\nset ylabel 'phi'");
            let plots: Vec<String> = cols
                .iter()
                .map(|c| format!("'{csv_name}' using 1:2:(column('{0}')) with lines title '{0}'", c.name()))
                .collect();
            let _ = writeln!(s, "splot {}", plots.join(", \\\n      "));
        } else {
            let _ = writeln!(s, "set xlabel '{axis}'");
            let x = if axis == "theta" { 1 } else { 2 };
            let mut plots: Vec<String> = cols
                .iter()
                .map(|c| format!("'{csv_name}' using {x}:(column('{0}')) with lines title '{0}'", c.name()))
                .collect();
            if table.is_simulated() {
                for c in cols.iter().filter(|c| {
                    matches!(c, Column::LhsProduct | Column::LhsSum)
                        || matches!(c, Column::Bound(crate::BoundId::CarlsonProduct | crate::BoundId::Additive))
                }) {
                    plots.push(format!(
                        "'{csv_name}' using {x}:(column('{0}_emp')):(column('{0}_err')) with yerrorbars title '{0} (simulated)'",
                        c.name()
                    ));
                }
            }
            let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
        }
    }
    if panels.len() > 1 {
        let _ = writeln!(s, "unset multiplot");
    }
    s
}
