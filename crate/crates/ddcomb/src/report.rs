//! Machine-readable outputs: band tables, surface-state lists, wavefunction
//! tables, beta sweeps, and oracle comparison reports, as CSV or JSON.
//!
//! Output is deterministic: rows are sorted by well-defined keys, floats are
//! formatted to 12 significant digits, CSV uses LF line endings, and JSON
//! field order is fixed. Identical inputs produce byte-identical files.

use serde::Serialize;

use crate::dispersion::{find_bands, BandStructure};
use crate::oracle;
use crate::params::{DimensionlessConfig, ParamsError};
use crate::surface::{
    find_surface_states, KappaReading, Method, SearchOptions, SurfaceError, SurfaceState,
};
use crate::wavefunction::{SurfaceWavefunction, WavefunctionError};

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("invalid parameters: {0}")]
    Params(#[from] ParamsError),
    #[error("invalid parameters: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Dispersion(#[from] crate::dispersion::DispersionError),
    #[error("numerical failure: {0}")]
    Surface(#[from] SurfaceError),
    #[error("numerical failure: {0}")]
    Oracle(#[from] oracle::OracleError),
    #[error("numerical failure: {0}")]
    Wavefunction(#[from] WavefunctionError),
    #[error("oracle mismatch: {failed} of {total} analytic roots unconfirmed")]
    OracleMismatch { failed: usize, total: usize },
}

impl ReportError {
    /// Process exit code: 1 validation, 2 numerical, 3 oracle mismatch.
    pub fn exit_code(&self) -> i32 {
        match self {
            ReportError::Params(_) | ReportError::Validation(_) => 1,
            ReportError::OracleMismatch { .. } => 3,
            _ => 2,
        }
    }
}

/// Formats a float with 12 significant digits, positional where reasonable.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exponent) = sci.split_once('e').expect("{:e} always has an exponent");
    let exp: i32 = exponent.parse().expect("exponent is an integer");
    let trimmed = mantissa.trim_end_matches('0').trim_end_matches('.');
    if (-4..12).contains(&exp) {
        // positional rendering, via the rounded mantissa to keep 12 digits
        let value: f64 = format!("{trimmed}e{exp}").parse().expect("round trip");
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{value:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{trimmed}e{exp}")
    }
}

/// A float rounded to 12 significant digits, for JSON payloads.
fn rounded(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("rounded float round-trips")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Parameter block echoed into every output's metadata.
#[derive(Debug, Clone, Serialize)]
pub struct MetaParams {
    pub n_sites: usize,
    pub p: f64,
    pub beta_t: f64,
    pub u_left: f64,
    pub u_right: f64,
}

impl MetaParams {
    fn of(cfg: &DimensionlessConfig) -> Self {
        Self {
            n_sites: cfg.n_sites,
            p: cfg.p,
            beta_t: cfg.beta_t,
            u_left: cfg.u_left,
            u_right: cfg.u_right,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub params: MetaParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_resolution: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_reading: Option<KappaReading>,
    #[serde(skip_serializing_if = "Vec::is_empty", default = "Vec::new")]
    pub notes: Vec<String>,
}

impl Meta {
    fn new(command: &'static str, cfg: &DimensionlessConfig) -> Self {
        Meta {
            tool: "ddcomb",
            version: env!("CARGO_PKG_VERSION"),
            command,
            params: MetaParams::of(cfg),
            grid: None,
            eps_max: None,
            grid_resolution: None,
            kappa_reading: None,
            notes: Vec::new(),
        }
    }
}

/// A complete report: metadata plus uniform rows, rendered to CSV or JSON.
#[derive(Debug, Clone, Serialize)]
pub struct Report<Row: Serialize> {
    pub meta: Meta,
    pub rows: Vec<Row>,
}

impl<Row: Serialize + CsvRow> Report<Row> {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => {
                let mut out = String::new();
                out.push_str(Row::HEADER);
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.csv());
                    out.push('\n');
                }
                out
            }
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }
}

/// Fixed CSV header and row rendering for one report row type.
pub trait CsvRow {
    const HEADER: &'static str;
    fn csv(&self) -> String;
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

// ---------------------------------------------------------------------------
// bands

#[derive(Debug, Clone, Serialize)]
pub struct BandRow {
    pub band_index: usize,
    pub eps_lo: f64,
    pub eps_hi: f64,
    pub xi_lo: f64,
    pub xi_hi: f64,
}

impl CsvRow for BandRow {
    const HEADER: &'static str = "band_index,eps_lo,eps_hi,xi_lo,xi_hi";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.band_index,
            fmt_f64(self.eps_lo),
            fmt_f64(self.eps_hi),
            fmt_f64(self.xi_lo),
            fmt_f64(self.xi_hi)
        )
    }
}

pub fn bands_report(
    cfg: &DimensionlessConfig,
    eps_max: f64,
    grid: usize,
) -> Result<Report<BandRow>, ReportError> {
    let bands = find_bands(cfg, eps_max, grid)?;
    let rows = bands
        .bands
        .iter()
        .enumerate()
        .map(|(i, b)| BandRow {
            band_index: i + 1,
            eps_lo: rounded(b.lo),
            eps_hi: rounded(b.hi),
            xi_lo: rounded(b.lo.sqrt()),
            xi_hi: rounded(b.hi.sqrt()),
        })
        .collect();
    let mut meta = Meta::new("bands", cfg);
    meta.grid = Some(grid);
    meta.eps_max = Some(eps_max);
    meta.grid_resolution = Some(rounded(bands.grid_resolution));
    if !bands.narrow_features.is_empty() {
        meta.notes.push(format!(
            "{} band/gap feature(s) narrower than two grid cells; raise --grid to confirm them",
            bands.narrow_features.len()
        ));
    }
    Ok(Report { meta, rows })
}

// ---------------------------------------------------------------------------
// surface

#[derive(Debug, Clone, Serialize)]
pub struct SurfaceRow {
    pub gap_index: usize,
    pub eps: f64,
    pub xi: f64,
    pub eps_gap_lo: f64,
    pub eps_gap_hi: f64,
    pub method: Method,
    pub residual: f64,
}

impl CsvRow for SurfaceRow {
    const HEADER: &'static str = "gap_index,eps,xi,eps_gap_lo,eps_gap_hi,method,residual";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.gap_index,
            fmt_f64(self.eps),
            fmt_f64(self.xi),
            fmt_f64(self.eps_gap_lo),
            fmt_f64(self.eps_gap_hi),
            self.method,
            fmt_f64(self.residual)
        )
    }
}

fn surface_rows(states: &[SurfaceState], bands: &BandStructure) -> Vec<SurfaceRow> {
    states
        .iter()
        .map(|s| {
            let gap = bands.gap(s.gap_index).expect("state carries a valid gap index");
            SurfaceRow {
                gap_index: s.gap_index,
                eps: rounded(s.eps),
                xi: rounded(s.xi),
                eps_gap_lo: rounded(gap.lo),
                eps_gap_hi: rounded(gap.hi),
                method: s.method,
                residual: rounded(s.residual),
            }
        })
        .collect()
}

/// Methods to run for a surface search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    One(Method),
    Both,
}

impl MethodChoice {
    pub fn methods(&self) -> Vec<Method> {
        match self {
            MethodChoice::One(m) => vec![*m],
            MethodChoice::Both => vec![Method::Classical, Method::Impedance],
        }
    }
}

pub fn surface_report(
    cfg: &DimensionlessConfig,
    eps_max: f64,
    grid: usize,
    choice: MethodChoice,
    options: &SearchOptions,
) -> Result<Report<SurfaceRow>, ReportError> {
    let bands = find_bands(cfg, eps_max, grid)?;
    let mut states = Vec::new();
    for method in choice.methods() {
        states.extend(find_surface_states(cfg, &bands, method, options)?);
    }
    states.sort_by(|a, b| {
        (a.gap_index, a.eps, a.method as u8)
            .partial_cmp(&(b.gap_index, b.eps, b.method as u8))
            .expect("finite keys")
    });
    let rows = surface_rows(&states, &bands);
    let mut meta = Meta::new("surface", cfg);
    meta.grid = Some(grid);
    meta.eps_max = Some(eps_max);
    meta.kappa_reading = Some(options.kappa_reading);
    Ok(Report { meta, rows })
}

// ---------------------------------------------------------------------------
// wavefunction

#[derive(Debug, Clone, Serialize)]
pub struct WavefunctionRow {
    pub x: f64,
    pub psi: f64,
}

impl CsvRow for WavefunctionRow {
    const HEADER: &'static str = "x,psi";
    fn csv(&self) -> String {
        format!("{},{}", fmt_f64(self.x), fmt_f64(self.psi))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct WavefunctionRequest {
    /// 1-based gap index to search.
    pub gap_index: usize,
    /// 0-based state index within the gap (energy order).
    pub state_index: usize,
    pub method: Method,
    pub x_min: f64,
    pub x_max: f64,
    pub samples: usize,
}

pub fn wavefunction_report(
    cfg: &DimensionlessConfig,
    eps_max: f64,
    grid: usize,
    request: &WavefunctionRequest,
    options: &SearchOptions,
) -> Result<Report<WavefunctionRow>, ReportError> {
    if request.samples < 2 {
        return Err(ReportError::Validation("need at least 2 wavefunction samples".into()));
    }
    if !(request.x_min < request.x_max) {
        return Err(ReportError::Validation(format!(
            "empty x range [{}, {}]",
            request.x_min, request.x_max
        )));
    }
    let bands = find_bands(cfg, eps_max, grid)?;
    let states = find_surface_states(cfg, &bands, request.method, options)?;
    let in_gap: Vec<&SurfaceState> =
        states.iter().filter(|s| s.gap_index == request.gap_index).collect();
    let state = in_gap.get(request.state_index).copied().ok_or_else(|| {
        ReportError::Validation(format!(
            "gap {} holds {} state(s); no state index {}",
            request.gap_index,
            in_gap.len(),
            request.state_index
        ))
    })?;
    let wf = SurfaceWavefunction::build(state, cfg)?;
    let step = (request.x_max - request.x_min) / (request.samples - 1) as f64;
    let x_grid: Vec<f64> =
        (0..request.samples).map(|i| request.x_min + step * i as f64).collect();
    let table = wf.sample(&x_grid);
    let (jump_val, jump_slope) = wf.jump_residuals(cfg);
    let (wall_val, wall_slope) = wf.wall_residuals();

    let rows = table
        .samples
        .iter()
        .map(|&(x, psi)| WavefunctionRow { x: rounded(x), psi: rounded(psi) })
        .collect();
    let mut meta = Meta::new("wavefunction", cfg);
    meta.grid = Some(grid);
    meta.eps_max = Some(eps_max);
    meta.kappa_reading = Some(options.kappa_reading);
    meta.notes.push(format!("eps = {}", fmt_f64(state.eps)));
    meta.notes.push(format!("norm_constant = {}", fmt_f64(table.norm_constant)));
    meta.notes.push(format!(
        "certificates: jump value {} slope {} wall value {} slope {}",
        fmt_f64(jump_val),
        fmt_f64(jump_slope),
        fmt_f64(wall_val),
        fmt_f64(wall_slope)
    ));
    if table.clipped_points > 0 {
        meta.notes.push(format!(
            "{} sample(s) clamped to the supported tail extent",
            table.clipped_points
        ));
    }
    Ok(Report { meta, rows })
}

// ---------------------------------------------------------------------------
// sweep-beta

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub beta_t: f64,
    pub gap_index: usize,
    /// Empty when the gap holds no state at this beta.
    pub eps_state: Option<f64>,
    pub xi_state: Option<f64>,
    pub eps_gap_lo: f64,
    pub eps_gap_hi: f64,
    pub method: Method,
    pub residual: Option<f64>,
}

impl CsvRow for SweepRow {
    const HEADER: &'static str =
        "beta_t,gap_index,eps_state,xi_state,eps_gap_lo,eps_gap_hi,method,residual";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            fmt_f64(self.beta_t),
            self.gap_index,
            opt(self.eps_state),
            opt(self.xi_state),
            fmt_f64(self.eps_gap_lo),
            fmt_f64(self.eps_gap_hi),
            self.method,
            opt(self.residual)
        )
    }
}

#[derive(Debug, Clone)]
pub struct SweepRequest {
    pub beta_min: f64,
    pub beta_max: f64,
    pub steps: usize,
    /// 1-based gap indices to track.
    pub gaps: Vec<usize>,
    pub method: Method,
}

pub fn sweep_beta_report(
    cfg: &DimensionlessConfig,
    eps_max: f64,
    grid: usize,
    request: &SweepRequest,
    options: &SearchOptions,
) -> Result<Report<SweepRow>, ReportError> {
    if request.steps < 2 {
        return Err(ReportError::Validation("sweep needs at least 2 steps".into()));
    }
    if !(request.beta_min < request.beta_max) {
        return Err(ReportError::Validation(format!(
            "empty beta range [{}, {}]",
            request.beta_min, request.beta_max
        )));
    }
    for b in [request.beta_min, request.beta_max] {
        if (b - 1.0).abs() < 1e-6 || (b + 1.0).abs() < 1e-6 || b.abs() > 1.0 {
            return Err(ReportError::Validation(format!(
                "beta range must stay inside (-1, 1) away from the singular endpoints (got {b})"
            )));
        }
    }
    if request.gaps.is_empty() {
        return Err(ReportError::Validation("no gap indices requested".into()));
    }

    let betas: Vec<f64> = (0..request.steps)
        .map(|i| {
            request.beta_min
                + (request.beta_max - request.beta_min) * i as f64 / (request.steps - 1) as f64
        })
        .collect();

    // each beta point is independent; compute in parallel, emit in order
    use rayon::prelude::*;
    let per_beta: Vec<Result<Vec<SweepRow>, ReportError>> = pool()
        .install(|| {
            betas
                .par_iter()
                .map(|&beta| sweep_point(cfg, eps_max, grid, beta, request, options))
                .collect()
        });

    let mut rows = Vec::new();
    for r in per_beta {
        rows.extend(r?);
    }
    let mut meta = Meta::new("sweep-beta", cfg);
    meta.grid = Some(grid);
    meta.eps_max = Some(eps_max);
    meta.kappa_reading = Some(options.kappa_reading);
    meta.notes.push(format!(
        "beta sweep [{}, {}] in {} steps; gaps {:?}",
        fmt_f64(request.beta_min),
        fmt_f64(request.beta_max),
        request.steps,
        request.gaps
    ));
    Ok(Report { meta, rows })
}

fn sweep_point(
    cfg: &DimensionlessConfig,
    eps_max: f64,
    grid: usize,
    beta: f64,
    request: &SweepRequest,
    options: &SearchOptions,
) -> Result<Vec<SweepRow>, ReportError> {
    let point_cfg =
        DimensionlessConfig::new(cfg.n_sites, cfg.p, beta, cfg.u_left, cfg.u_right)?;
    let bands = find_bands(&point_cfg, eps_max, grid)?;
    let states = find_surface_states(&point_cfg, &bands, request.method, options)?;
    let mut rows = Vec::new();
    for &gap_index in &request.gaps {
        let gap = bands.gap(gap_index).ok_or_else(|| {
            ReportError::Validation(format!(
                "gap {gap_index} does not exist below eps_max={eps_max} at beta_t={beta}"
            ))
        })?;
        let in_gap: Vec<&SurfaceState> =
            states.iter().filter(|s| s.gap_index == gap_index).collect();
        if in_gap.is_empty() {
            rows.push(SweepRow {
                beta_t: rounded(beta),
                gap_index,
                eps_state: None,
                xi_state: None,
                eps_gap_lo: rounded(gap.lo),
                eps_gap_hi: rounded(gap.hi),
                method: request.method,
                residual: None,
            });
        }
        for s in in_gap {
            rows.push(SweepRow {
                beta_t: rounded(beta),
                gap_index,
                eps_state: Some(rounded(s.eps)),
                xi_state: Some(rounded(s.xi)),
                eps_gap_lo: rounded(gap.lo),
                eps_gap_hi: rounded(gap.hi),
                method: request.method,
                residual: Some(rounded(s.residual)),
            });
        }
    }
    Ok(rows)
}

/// Rayon pool sized by the `COMB_THREADS` environment variable (default:
/// hardware parallelism).
fn pool() -> rayon::ThreadPool {
    let threads = std::env::var("COMB_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    builder.build().expect("thread pool builds")
}

// ---------------------------------------------------------------------------
// oracle-compare

#[derive(Debug, Clone, Serialize)]
pub struct OracleCompareRow {
    pub method: Method,
    pub gap_index: usize,
    pub eps_analytic: f64,
    /// Nearest determinant zero, when one exists in the confirmation window.
    pub eps_oracle: Option<f64>,
    pub abs_delta: Option<f64>,
    pub pass: bool,
}

impl CsvRow for OracleCompareRow {
    const HEADER: &'static str = "method,gap_index,eps_analytic,eps_oracle,abs_delta,pass";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.method,
            self.gap_index,
            fmt_f64(self.eps_analytic),
            opt(self.eps_oracle),
            opt(self.abs_delta),
            self.pass
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleCompareReport {
    pub meta: Meta,
    pub tolerance: f64,
    pub all_pass: bool,
    /// Determinant zeros found inside gaps with no analytic partner.
    pub unmatched_oracle: Vec<f64>,
    pub rows: Vec<OracleCompareRow>,
}

/// Tolerance for analytic-vs-determinant agreement.
pub const ORACLE_TOL: f64 = 1e-6;

pub fn oracle_compare_report(
    cfg: &DimensionlessConfig,
    eps_max: f64,
    grid: usize,
    options: &SearchOptions,
) -> Result<OracleCompareReport, ReportError> {
    if cfg.n_sites > 20 {
        return Err(ReportError::Validation(format!(
            "oracle comparison supports up to 20 sites (got {})",
            cfg.n_sites
        )));
    }
    let bands = find_bands(cfg, eps_max, grid)?;
    let mut rows = Vec::new();
    let mut matched_oracle: Vec<f64> = Vec::new();
    for method in [Method::Classical, Method::Impedance] {
        let states = find_surface_states(cfg, &bands, method, options)?;
        for s in &states {
            let confirmed = oracle::confirm_root(cfg, s.eps, 1e-3)?;
            let (eps_oracle, abs_delta, pass) = match confirmed {
                Some(oe) => {
                    let delta = (oe - s.eps).abs();
                    (Some(rounded(oe)), Some(rounded(delta)), delta < ORACLE_TOL)
                }
                None => (None, None, false),
            };
            if let Some(oe) = eps_oracle {
                matched_oracle.push(oe);
            }
            rows.push(OracleCompareRow {
                method,
                gap_index: s.gap_index,
                eps_analytic: rounded(s.eps),
                eps_oracle,
                abs_delta,
                pass,
            });
        }
    }

    // reverse direction: determinant zeros inside gaps must all be matched
    let oracle_states =
        find_surface_states(cfg, &bands, Method::Oracle, options)?;
    let mut unmatched_oracle = Vec::new();
    for s in &oracle_states {
        let matched = rows.iter().any(|r| (r.eps_analytic - s.eps).abs() < ORACLE_TOL);
        if !matched {
            unmatched_oracle.push(rounded(s.eps));
        }
    }

    let failed = rows.iter().filter(|r| !r.pass).count() + unmatched_oracle.len();
    let all_pass = failed == 0;
    let mut meta = Meta::new("oracle-compare", cfg);
    meta.grid = Some(grid);
    meta.eps_max = Some(eps_max);
    meta.kappa_reading = Some(options.kappa_reading);
    Ok(OracleCompareReport { meta, tolerance: ORACLE_TOL, all_pass, unmatched_oracle, rows })
}

impl OracleCompareReport {
    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn failed_count(&self) -> usize {
        self.rows.iter().filter(|r| !r.pass).count() + self.unmatched_oracle.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_is_stable_and_readable() {
        assert_eq!(fmt_f64(0.0), "0");
        assert_eq!(fmt_f64(1.0), "1");
        assert_eq!(fmt_f64(-2.5), "-2.5");
        assert_eq!(fmt_f64(3.141592653589793), "3.14159265359");
        assert_eq!(fmt_f64(1e-9), "1e-9");
        assert_eq!(fmt_f64(0.000244140625), "0.000244140625");
        assert_eq!(fmt_f64(1.23456789012345e14), "123456789012000");
        assert_eq!(fmt_f64(6.02214076e23), "6.02214076e23");
        assert_eq!(fmt_f64(-4.2e-13), "-4.2e-13");
    }

    #[test]
    fn bands_report_has_expected_rows() {
        let cfg = DimensionlessConfig::symmetric(3, 1.0, 0.0, 50.0).unwrap();
        let report = bands_report(&cfg, 50.0, 2000).unwrap();
        assert!(!report.rows.is_empty());
        let csv = report.render(OutputFormat::Csv);
        assert!(csv.starts_with("band_index,eps_lo,eps_hi,xi_lo,xi_hi\n"));
        assert!(csv.ends_with('\n'));
        let json = report.render(OutputFormat::Json);
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["meta"]["tool"], "ddcomb");
        assert_eq!(parsed["meta"]["params"]["n_sites"], 3);
    }

    #[test]
    fn free_comb_band_table_is_single_row() {
        let cfg = DimensionlessConfig::symmetric(3, 0.0, 0.0, 50.0).unwrap();
        let report = bands_report(&cfg, 30.0, 500).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].eps_lo, 0.0);
        assert_eq!(report.rows[0].eps_hi, 30.0);
    }

    #[test]
    fn oracle_compare_reference_config_all_pass() {
        let cfg = DimensionlessConfig::symmetric(3, 1.0, 0.2, 50.0).unwrap();
        let report =
            oracle_compare_report(&cfg, 50.0, 2000, &SearchOptions::default()).unwrap();
        assert!(report.all_pass, "{:?}", report.rows);
        assert!(!report.rows.is_empty());
        assert!(report.unmatched_oracle.is_empty());
    }

    #[test]
    fn sweep_report_rows_are_ordered_and_complete() {
        let cfg = DimensionlessConfig::symmetric(3, 1.0, 0.0, 50.0).unwrap();
        let request = SweepRequest {
            beta_min: -0.2,
            beta_max: 0.2,
            steps: 5,
            gaps: vec![1, 2],
            method: Method::Classical,
        };
        let report =
            sweep_beta_report(&cfg, 50.0, 2000, &request, &SearchOptions::default()).unwrap();
        // every (beta, gap) pair appears at least once, in sweep order
        let mut seen = Vec::new();
        for row in &report.rows {
            seen.push((row.beta_t, row.gap_index));
        }
        let mut sorted = seen.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for gap in [1usize, 2] {
            let count = report.rows.iter().filter(|r| r.gap_index == gap).count();
            assert!(count >= 5, "gap {gap} rows: {count}");
        }
    }

    #[test]
    fn validation_errors_map_to_exit_code_one() {
        let cfg = DimensionlessConfig::symmetric(3, 1.0, 0.0, 50.0).unwrap();
        let bad = sweep_beta_report(
            &cfg,
            50.0,
            2000,
            &SweepRequest {
                beta_min: 0.5,
                beta_max: -0.5,
                steps: 3,
                gaps: vec![1],
                method: Method::Classical,
            },
            &SearchOptions::default(),
        );
        match bad {
            Err(e) => assert_eq!(e.exit_code(), 1),
            Ok(_) => panic!("expected validation error"),
        }
    }
}
