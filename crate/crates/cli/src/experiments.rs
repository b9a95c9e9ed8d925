use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use anyhow::{Context, Result};
use num_complex::Complex64;
use oshima_core::fixed_points::{fixed_point_records, FixedPointRecord, Space};
use oshima_core::haar::{haar_quadrature, Certificate, QuadratureGrid};
use oshima_core::lie_structure::{m_theta_components, structure_report, StructureReport, ThetaSubset};
use oshima_core::sphere::ChartAtlas;
use oshima_core::trace::{
    diagonal_density, relative_error, trace_reg, trace_s_direct, trace_s_fixed_point, OrbitBox, CERT_DELTA, CERT_GRID,
};
use oshima_core::GroupElement;
use serde::Serialize;

use crate::config::{CharacterConfig, FixedPointsConfig, StructureConfig};
use crate::report::{cell, Check, Table};

#[derive(Debug, Serialize)]
pub struct StructureResult {
    #[serde(flatten)]
    pub report: StructureReport,
    pub census_multiplicities: Vec<usize>,
    /// Component representatives of `M_Θ(K)` keyed by `Θ`; present for `n ≤ 3`.
    pub m_theta_components: Option<BTreeMap<String, Vec<GroupElement>>>,
}

pub fn run_structure_report(config: &StructureConfig) -> Result<StructureResult> {
    let report = structure_report(config.n)?;
    let census_multiplicities = report.census.iter().map(|c| c.multiplicity).collect();
    let m_theta_components = if config.n <= 3 {
        let mut out = BTreeMap::new();
        for theta in ThetaSubset::all_subsets(config.n)? {
            out.insert(theta.to_string(), m_theta_components(&theta)?);
        }
        Some(out)
    } else {
        None
    };
    Ok(StructureResult {
        report,
        census_multiplicities,
        m_theta_components,
    })
}

#[derive(Debug, Serialize)]
pub struct FixedPointCaseReport {
    pub label: String,
    pub space: Space,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub records: Vec<FixedPointRecord>,
    pub transversal: Option<bool>,
    /// `min |det(1 - Ad(h⁻¹))|` over the fixed points.
    pub margin: Option<f64>,
    /// Agreement of the chart and adjoint determinants.
    pub determinant_check: Option<Check>,
}

impl FixedPointCaseReport {
    pub fn passed(&self) -> bool {
        self.determinant_check.as_ref().is_none_or(|c| c.passed)
    }
}

pub fn run_fixed_point_report(config: &FixedPointsConfig) -> Vec<FixedPointCaseReport> {
    config
        .cases
        .iter()
        .map(|case| {
            let mut out = FixedPointCaseReport {
                label: case.label.clone(),
                space: case.space,
                error: None,
                records: Vec::new(),
                transversal: None,
                margin: None,
                determinant_check: None,
            };
            let records = GroupElement::from_rows(&case.matrix).and_then(|g| fixed_point_records(&g, case.space));
            match records {
                Err(e) => out.error = Some(e.to_string()),
                Ok(records) => {
                    let worst = records
                        .iter()
                        .map(|r| (r.det_chart - r.det_ad).abs() / r.det_ad.abs().max(1.0))
                        .fold(0.0, f64::max);
                    out.transversal = Some(records.iter().all(|r| r.transversal));
                    out.margin = records.iter().map(|r| r.det_ad.abs()).reduce(f64::min);
                    out.determinant_check = Some(Check::at_most(
                        "chart vs adjoint determinant",
                        worst,
                        config.determinant_tolerance,
                    ));
                    out.records = records;
                }
            }
            out
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterRow {
    pub function: String,
    /// `trace_s` for the weighted trace, `trace_reg` for the regularized one
    /// (compared with the direct side at `s = -1`).
    pub quantity: &'static str,
    pub s: f64,
    pub direct: f64,
    pub fixed_point: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GridDiagnostics {
    pub function: String,
    pub certificate: Certificate,
    pub panels: usize,
    pub haar_nodes: usize,
    pub haar_estimated_error: f64,
    pub haar_density_kappa: f64,
    /// Box in `(n, |t|, φ)` carrying the diagonal density; `None` for
    /// hyperbolic support.
    pub orbit_box: Option<OrbitBox>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterResult {
    pub rows: Vec<CharacterRow>,
    pub grids: Vec<GridDiagnostics>,
}

impl CharacterResult {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn to_csv(&self) -> String {
        let mut table = Table::new(vec![
            "function",
            "quantity",
            "s",
            "direct",
            "fixed_point",
            "rel_err",
            "tolerance",
            "passed",
        ]);
        for r in &self.rows {
            table.push(vec![
                r.function.clone(),
                r.quantity.into(),
                cell(r.s),
                cell(r.direct),
                cell(r.fixed_point),
                cell(r.rel_err),
                cell(r.tolerance),
                r.passed.to_string(),
            ]);
        }
        table.to_csv()
    }
}

/// Outcome of a character run; timings and grids stay out of the report.
pub struct CharacterRun {
    pub result: CharacterResult,
    pub timings: Vec<(String, Duration)>,
    pub haar_grids: Vec<(String, QuadratureGrid)>,
}

impl CharacterRun {
    /// Haar quadrature nodes of every function, with a leading label column.
    pub fn grids_csv(&self) -> String {
        let mut out = String::from("function,theta,s,u,weight\n");
        for (label, grid) in &self.haar_grids {
            for line in grid.to_csv().lines().skip(1) {
                out.push_str(label);
                out.push(',');
                out.push_str(line);
                out.push('\n');
            }
        }
        out
    }
}

fn row(function: &str, quantity: &'static str, s: f64, direct: f64, fixed_point: f64, tolerance: f64) -> CharacterRow {
    let rel_err = relative_error(direct, fixed_point);
    CharacterRow {
        function: function.into(),
        quantity,
        s,
        direct,
        fixed_point,
        rel_err,
        tolerance,
        passed: rel_err <= tolerance,
    }
}

/// Compares both sides of the character formula. Every function is
/// certified before any number is computed.
pub fn run_character_experiment(config: &CharacterConfig) -> Result<CharacterRun> {
    let atlas = ChartAtlas::new(config.atlas.r1, config.atlas.r2)?;
    let mut certificates = Vec::new();
    for entry in &config.functions {
        let cert = entry
            .function()
            .certify(CERT_DELTA, CERT_GRID)
            .with_context(|| format!("function `{}`", entry.label))?;
        certificates.push(cert);
    }

    let panels = config.resolution;
    let mut rows = Vec::new();
    let mut grids = Vec::new();
    let mut haar_grids = Vec::new();
    let mut timings = Vec::new();
    for (entry, certificate) in config.functions.iter().zip(certificates) {
        let f = entry.function();
        let label = entry.label.as_str();
        let started = Instant::now();
        let grid = haar_quadrature(&f, panels).with_context(|| format!("function `{label}`"))?;
        let density = diagonal_density(&f, panels)?;
        grids.push(GridDiagnostics {
            function: label.into(),
            certificate,
            panels,
            haar_nodes: grid.len(),
            haar_estimated_error: grid.estimated_error,
            haar_density_kappa: grid.density.kappa,
            orbit_box: density.support(),
        });
        timings.push((format!("{label}: grids"), started.elapsed()));

        let mut direct_at = BTreeMap::new();
        for &s in &config.s_values {
            let started = Instant::now();
            let direct = trace_s_direct(&f, Complex64::new(s, 0.0), &atlas, panels)?.value.re;
            let fixed = trace_s_fixed_point(&f, s, &atlas, &grid).with_context(|| format!("function `{label}`"))?;
            timings.push((format!("{label}: s = {s}"), started.elapsed()));
            direct_at.insert(s.to_bits(), direct);
            rows.push(row(label, "trace_s", s, direct, fixed, config.tolerance));
        }
        if config.regularized {
            let started = Instant::now();
            let direct = match direct_at.get(&(-1f64).to_bits()) {
                Some(v) => *v,
                None => trace_s_direct(&f, Complex64::new(-1.0, 0.0), &atlas, panels)?.value.re,
            };
            let reg = trace_reg(&f, &grid)?;
            timings.push((format!("{label}: regularized"), started.elapsed()));
            rows.push(row(label, "trace_reg", -1.0, direct, reg, config.tolerance));
        }
        haar_grids.push((label.to_string(), grid));
    }
    Ok(CharacterRun {
        result: CharacterResult { rows, grids },
        timings,
        haar_grids,
    })
}
