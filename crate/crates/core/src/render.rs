//! SVG bar charts of interval unions and the bi-geometric parameter map.

use std::fmt::Write as _;
use std::path::Path;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{classify_with, CantorCertificate, ClassifyOptions, VerdictKind};
use crate::error::{Error, Result};
use crate::interval::IntervalUnion;
use crate::rational::{format_rational, rat, to_f64, Rational};
use crate::sequence::{MergedSpec, SequenceSpec};

pub const SWEEP_SIZE_PX: u32 = 1000;
const MARGIN: f64 = 60.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// A single interval `[0, X_0]`.
    Interval,
    FiniteUnion,
    Cantor,
    Cantorval,
    Undetermined,
}

impl Region {
    pub const ALL: [Region; 5] =
        [Region::Interval, Region::FiniteUnion, Region::Cantor, Region::Cantorval, Region::Undetermined];

    pub fn color(self) -> &'static str {
        match self {
            Region::Interval => "#4c78a8",
            Region::FiniteUnion => "#9ecae9",
            Region::Cantor => "#e45756",
            Region::Cantorval => "#54a24b",
            Region::Undetermined => "#ffffff",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Region::Interval => "interval",
            Region::FiniteUnion => "finite_union",
            Region::Cantor => "cantor",
            Region::Cantorval => "cantorval",
            Region::Undetermined => "undetermined",
        }
    }

    fn of(kind: &VerdictKind) -> Region {
        match kind {
            VerdictKind::FiniteUnion { exact_count: Some(1), .. } => Region::Interval,
            VerdictKind::FiniteUnion { .. } => Region::FiniteUnion,
            VerdictKind::CantorSet { .. } => Region::Cantor,
            VerdictKind::SymmetricCantorval { .. } => Region::Cantorval,
            _ => Region::Undetermined,
        }
    }
}

/// Hatch stroke drawn over cells whose sequence is not non-increasing.
pub const INFEASIBLE_HATCH: &str = "#7f7f7f";
pub const MARKER_COLOR: &str = "#000000";

/// Renders `u` as horizontal bars, its hull mapped to `[0, width_px]`.
pub fn bar_chart(u: &IntervalUnion, width_px: u32, height_px: u32) -> Result<String> {
    let hull = u.hull()?;
    let span = hull.length();
    let w = width_px as f64;
    let x = |v: &Rational| -> f64 {
        if span.is_zero() {
            0.0
        } else {
            to_f64(&((v - hull.left()) / &span)) * w
        }
    };
    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width_px}" height="{height_px}" viewBox="0 0 {width_px} {height_px}">"#
    )
    .unwrap();
    writeln!(svg, r##"<rect width="{width_px}" height="{height_px}" fill="#ffffff"/>"##).unwrap();
    for iv in u.intervals() {
        let left = x(iv.left());
        let right = if span.is_zero() { w } else { x(iv.right()) };
        // Point components still get a visible hairline.
        let width = (right - left).max(0.5);
        writeln!(
            svg,
            r#"<rect x="{left:.3}" y="0" width="{width:.3}" height="{height_px}" fill="{}"><title>{} {}</title></rect>"#,
            Region::Interval.color(),
            format_rational(iv.left()),
            format_rational(iv.right())
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn write_bar_chart(u: &IntervalUnion, width_px: u32, height_px: u32, out: &Path) -> Result<()> {
    std::fs::write(out, bar_chart(u, width_px, height_px)?)?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepCell {
    pub alpha: String,
    pub beta: String,
    pub lambda: String,
    pub verdict: &'static str,
    pub certificate: &'static str,
    pub feasible: bool,
    #[serde(skip)]
    pub region: Region,
    #[serde(skip)]
    pub alpha_above_third: bool,
    #[serde(skip)]
    pub component_count: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct SweepGrid {
    pub alpha_steps: usize,
    pub beta_steps: usize,
    /// Row-major by `beta` then `alpha`, both ascending.
    pub cells: Vec<SweepCell>,
    /// Extra named points classified alongside the grid.
    pub markers: Vec<SweepCell>,
}

impl SweepGrid {
    pub fn cell(&self, i_alpha: usize, j_beta: usize) -> &SweepCell {
        &self.cells[j_beta * self.alpha_steps + i_alpha]
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SweepConfig {
    pub resolution: usize,
    pub options: ClassifyOptions,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { resolution: 21, options: ClassifyOptions::default() }
    }
}

/// Centre of cell `i` out of `n` on `(0, 1)`.
pub fn cell_center(i: usize, n: usize) -> Rational {
    rat(2 * i as i64 + 1, 2 * n as i64)
}

/// `α <= β/(1-β)` and `β <= α/(1-α)`: the bi-geometric sequence is
/// non-increasing.
pub fn nonincreasing_feasible(alpha: &Rational, beta: &Rational) -> bool {
    let one = Rational::one();
    alpha * (&one - beta) <= *beta && beta * (&one - alpha) <= *alpha
}

/// The point classified in addition to the grid cells.
pub fn sweep_markers() -> Vec<(Rational, Rational)> {
    vec![(rat(9, 20), rat(6, 11))]
}

pub fn classify_cell(alpha: &Rational, beta: &Rational, options: &ClassifyOptions) -> Result<SweepCell> {
    let spec = SequenceSpec::bigeometric(alpha.clone(), beta.clone(), Rational::one())?;
    let verdict = classify_with(&MergedSpec::from(spec), options)?;
    let certificate = match &verdict.kind {
        VerdictKind::CantorSet { certificate: CantorCertificate::AllExceed } => "all_exceed",
        VerdictKind::CantorSet { certificate: CantorCertificate::LambdaBelowQuarter { .. } } => "lambda_below_quarter",
        VerdictKind::SymmetricCantorval { .. } => "digit_coverage",
        _ => "none",
    };
    let lambda = crate::classify::bigeometric_lambda(alpha, beta);
    Ok(SweepCell {
        alpha: format_rational(alpha),
        beta: format_rational(beta),
        lambda: format_rational(&lambda),
        verdict: verdict.kind.name(),
        certificate,
        feasible: nonincreasing_feasible(alpha, beta),
        region: Region::of(&verdict.kind),
        alpha_above_third: alpha > &rat(1, 3),
        component_count: verdict.component_count(),
    })
}

pub fn sweep(config: &SweepConfig) -> Result<SweepGrid> {
    let n = config.resolution;
    if n < 2 {
        return Err(Error::InvalidSpec(format!("sweep resolution {n} is below 2")));
    }
    let points: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..n).map(move |i| (i, j))).collect();
    let cells = points
        .par_iter()
        .map(|&(i, j)| classify_cell(&cell_center(i, n), &cell_center(j, n), &config.options))
        .collect::<Result<Vec<_>>>()?;
    let markers = sweep_markers()
        .iter()
        .map(|(a, b)| classify_cell(a, b, &config.options))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepGrid { alpha_steps: n, beta_steps: n, cells, markers })
}

/// Grid cells followed by the marker rows.
pub fn sweep_csv(grid: &SweepGrid) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for cell in grid.cells.iter().chain(&grid.markers) {
        w.serialize(cell).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn curve(points: impl Iterator<Item = (f64, f64)>, color: &str, dash: bool) -> String {
    let plot = SWEEP_SIZE_PX as f64 - 2.0 * MARGIN;
    let coords: Vec<String> = points
        .filter(|(a, b)| (0.0..=1.0).contains(a) && (0.0..=1.0).contains(b))
        .map(|(a, b)| format!("{:.2},{:.2}", MARGIN + a * plot, MARGIN + (1.0 - b) * plot))
        .collect();
    let dash = if dash { r#" stroke-dasharray="6 4""# } else { "" };
    format!(r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"{dash}/>"#, coords.join(" "))
}

pub fn sweep_svg(grid: &SweepGrid) -> String {
    let size = SWEEP_SIZE_PX;
    let plot = size as f64 - 2.0 * MARGIN;
    let cw = plot / grid.alpha_steps as f64;
    let ch = plot / grid.beta_steps as f64;
    let mut svg = String::new();
    writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#)
        .unwrap();
    writeln!(
        svg,
        r#"<defs><pattern id="hatch" width="8" height="8" patternUnits="userSpaceOnUse" patternTransform="rotate(45)"><line x1="0" y1="0" x2="0" y2="8" stroke="{INFEASIBLE_HATCH}" stroke-width="2"/></pattern></defs>"#
    )
    .unwrap();
    writeln!(svg, r##"<rect width="{size}" height="{size}" fill="#ffffff"/>"##).unwrap();
    for j in 0..grid.beta_steps {
        for i in 0..grid.alpha_steps {
            let cell = grid.cell(i, j);
            let x = MARGIN + i as f64 * cw;
            let y = MARGIN + (grid.beta_steps - 1 - j) as f64 * ch;
            writeln!(
                svg,
                r##"<rect x="{x:.2}" y="{y:.2}" width="{cw:.2}" height="{ch:.2}" fill="{}" stroke="#dddddd" stroke-width="0.5"><title>alpha={} beta={} {}</title></rect>"##,
                cell.region.color(),
                cell.alpha,
                cell.beta,
                cell.verdict
            )
            .unwrap();
            if !cell.feasible {
                writeln!(svg, r#"<rect x="{x:.2}" y="{y:.2}" width="{cw:.2}" height="{ch:.2}" fill="url(#hatch)"/>"#).unwrap();
            }
        }
    }
    let samples = || (1..400).map(|k| k as f64 / 400.0);
    svg.push_str(&curve(samples().map(|a| (a, a / (1.0 - a))), "#333333", false));
    svg.push('\n');
    svg.push_str(&curve(samples().map(|b| (b / (1.0 - b), b)), "#333333", false));
    svg.push('\n');
    // λ = 1/4
    svg.push_str(&curve(samples().map(|a| (a, (3.0 - 4.0 * a) / (4.0 - 4.0 * a))), "#000000", true));
    svg.push('\n');
    writeln!(
        svg,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{plot}" height="{plot}" fill="none" stroke="#000000" stroke-width="1"/>"##
    )
    .unwrap();
    for marker in &grid.markers {
        let a = to_f64(&crate::rational::parse_rational(&marker.alpha).expect("formatted rational"));
        let b = to_f64(&crate::rational::parse_rational(&marker.beta).expect("formatted rational"));
        writeln!(
            svg,
            r#"<circle cx="{:.2}" cy="{:.2}" r="6" fill="{}" stroke="{MARKER_COLOR}" stroke-width="2"><title>alpha={} beta={} {}</title></circle>"#,
            MARGIN + a * plot,
            MARGIN + (1.0 - b) * plot,
            marker.region.color(),
            marker.alpha,
            marker.beta,
            marker.verdict
        )
        .unwrap();
    }
    let label_y = size as f64 - MARGIN / 3.0;
    writeln!(svg, r#"<text x="{:.2}" y="{label_y:.2}" font-size="20" text-anchor="middle">alpha</text>"#, size as f64 / 2.0)
        .unwrap();
    writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="20" text-anchor="middle" transform="rotate(-90 {:.2} {:.2})">beta</text>"#,
        MARGIN / 2.0,
        size as f64 / 2.0,
        MARGIN / 2.0,
        size as f64 / 2.0
    )
    .unwrap();
    svg.push_str("</svg>\n");
    svg
}

/// Runs the sweep and writes the CSV and SVG files.
pub fn sweep_to_files(config: &SweepConfig, out_csv: &Path, out_svg: &Path) -> Result<SweepGrid> {
    let grid = sweep(config)?;
    std::fs::write(out_csv, sweep_csv(&grid)?)?;
    std::fs::write(out_svg, sweep_svg(&grid))?;
    Ok(grid)
}
