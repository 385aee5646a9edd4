//! Bloch dispersion of the infinite delta-delta' comb and the band/gap
//! partition of the energy axis.
//!
//! The dispersion relation is
//!
//! ```text
//! cos(lambda) = X(eps) = [(1 + bt^2) cos(xi) - p sin(xi)/xi] / (1 - bt^2)
//! ```
//!
//! with `lambda = k l` the Bloch phase. `|X| <= 1` is an allowed band;
//! `|X| > 1` is a gap, where `lambda` acquires an imaginary part. The branch
//! with `Im(lambda) >= 0` is taken throughout (decaying envelope), with
//! `Re(lambda) = 0` in gaps above a band maximum (`X > 1`, zone center) and
//! `Re(lambda) = pi` in gaps at the zone edge (`X < -1`).

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

use crate::params::{DimensionlessConfig, EnergyPoint};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DispersionError {
    #[error("band scan needs eps_max > 0 (got {0})")]
    InvalidEpsMax(f64),
    #[error("band scan needs at least 100 grid points (got {0})")]
    TooFewGridPoints(usize),
}

/// `sin(x)/x` with a series fallback below 1e-4 to stay exact at the
/// spectrum bottom.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Right-hand side `X(eps)` of the dispersion relation; real for real energy.
pub fn bloch_cos(e: &EnergyPoint, cfg: &DimensionlessConfig) -> f64 {
    let b2 = cfg.beta_t * cfg.beta_t;
    ((1.0 + b2) * e.xi.cos() - cfg.p * sinc(e.xi)) / (1.0 - b2)
}

/// Spectral regime of an energy point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Regime {
    /// `|X| <= 1`: propagating, `lambda` real in `[0, pi]`.
    Band,
    /// `X > 1`: evanescent with `lambda = i mu` (zone-center gap).
    GapCenter,
    /// `X < -1`: evanescent with `lambda = pi + i mu` (zone-edge gap).
    GapEdge,
}

/// Bloch phase with its regime; `cos(lambda)` reproduces `X(eps)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochPhase {
    pub lambda: Complex64,
    pub regime: Regime,
}

impl BlochPhase {
    /// Inverts `cos(lambda) = x` on the decaying-envelope branch.
    pub fn from_cos(x: f64) -> Self {
        if x > 1.0 {
            BlochPhase { lambda: Complex64::new(0.0, x.acosh()), regime: Regime::GapCenter }
        } else if x < -1.0 {
            BlochPhase { lambda: Complex64::new(PI, (-x).acosh()), regime: Regime::GapEdge }
        } else {
            BlochPhase { lambda: Complex64::new(x.acos(), 0.0), regime: Regime::Band }
        }
    }

    pub fn is_gap(&self) -> bool {
        self.regime != Regime::Band
    }

    /// Imaginary part `mu >= 0` of the phase (decay rate per cell in gaps).
    pub fn mu(&self) -> f64 {
        self.lambda.im
    }
}

/// Bloch phase at an energy point.
pub fn bloch_phase(e: &EnergyPoint, cfg: &DimensionlessConfig) -> BlochPhase {
    BlochPhase::from_cos(bloch_cos(e, cfg))
}

/// Half-open energy interval `(lo, hi)` on the dimensionless axis.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, eps: f64) -> bool {
        self.lo < eps && eps < self.hi
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Alternating band/gap tiling of `(0, eps_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandStructure {
    /// Allowed bands (`|X| <= 1`), in increasing energy order.
    pub bands: Vec<Interval>,
    /// Gaps (`|X| > 1`), complementary to `bands`.
    pub gaps: Vec<Interval>,
    /// Scan ceiling.
    pub eps_max: f64,
    /// Energy spacing of the scan grid; features narrower than this may be missed.
    pub grid_resolution: f64,
    /// Set when a refined band or gap came out narrower than two grid cells,
    /// i.e. the scan resolution was marginal for this structure.
    pub narrow_features: Vec<Interval>,
}

impl BandStructure {
    /// Gap with 1-based index `gap_index`.
    pub fn gap(&self, gap_index: usize) -> Option<&Interval> {
        if gap_index == 0 {
            return None;
        }
        self.gaps.get(gap_index - 1)
    }

    /// 1-based index of the gap containing `eps`, if any.
    pub fn gap_index_of(&self, eps: f64) -> Option<usize> {
        self.gaps.iter().position(|g| g.contains(eps)).map(|i| i + 1)
    }
}

/// Edge refinement tolerance in energy.
pub const EDGE_TOL: f64 = 1e-10;

/// Scans `|X(eps)| - 1` on a uniform grid over `(0, eps_max]`, brackets the
/// sign changes, and refines each band edge by bisection to [`EDGE_TOL`].
pub fn find_bands(
    cfg: &DimensionlessConfig,
    eps_max: f64,
    grid_points: usize,
) -> Result<BandStructure, DispersionError> {
    if !(eps_max > 0.0) || !eps_max.is_finite() {
        return Err(DispersionError::InvalidEpsMax(eps_max));
    }
    if grid_points < 100 {
        return Err(DispersionError::TooFewGridPoints(grid_points));
    }

    let g = |eps: f64| {
        let e = EnergyPoint::new(eps).expect("scan energies are non-negative");
        bloch_cos(&e, cfg).abs() - 1.0
    };

    let step = eps_max / grid_points as f64;
    // edges between grid cells where |X|-1 changes sign, refined by bisection
    let mut edges = Vec::new();
    let mut prev = (step * 0.5_f64.min(1.0) * 1e-6, g(step * 1e-6 * 0.5)); // just above 0
    for i in 1..=grid_points {
        let eps = step * i as f64;
        let val = g(eps);
        if val == 0.0 {
            edges.push(eps);
        } else if prev.1 != 0.0 && prev.1.signum() != val.signum() {
            edges.push(refine_edge(&g, prev.0, eps));
        }
        prev = (eps, val);
    }

    // classify the tiles between consecutive edges by the regime at the midpoint
    let mut bands = Vec::new();
    let mut gaps = Vec::new();
    let mut lo = 0.0;
    let mut boundaries = edges;
    boundaries.push(eps_max);
    for hi in boundaries {
        if hi <= lo {
            continue;
        }
        let interval = Interval { lo, hi };
        let mid_val = g(interval.midpoint().max(step * 1e-6));
        if mid_val <= 0.0 {
            bands.push(interval);
        } else {
            gaps.push(interval);
        }
        lo = hi;
    }

    let narrow_features = bands
        .iter()
        .chain(gaps.iter())
        .filter(|iv| iv.width() < 2.0 * step)
        .copied()
        .collect();

    Ok(BandStructure { bands, gaps, eps_max, grid_resolution: step, narrow_features })
}

fn refine_edge<F: Fn(f64) -> f64>(g: &F, mut lo: f64, mut hi: f64) -> f64 {
    let mut glo = g(lo);
    while hi - lo > EDGE_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell::transfer_matrix;
    use std::f64::consts::PI;

    fn cfg(p: f64, beta_t: f64) -> DimensionlessConfig {
        DimensionlessConfig::symmetric(3, p, beta_t, 1e6).unwrap()
    }

    #[test]
    fn free_particle_dispersion_is_plain_cosine() {
        for xi in [0.1, 1.0, 2.5, 7.0] {
            let e = EnergyPoint::from_xi(xi).unwrap();
            assert!((bloch_cos(&e, &cfg(0.0, 0.0)) - xi.cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn dirac_limit_is_textbook_relation() {
        for (p, xi) in [(1.0, 0.5), (2.0, 3.3), (0.3, 6.0)] {
            let e = EnergyPoint::from_xi(xi).unwrap();
            let expected = xi.cos() - p * xi.sin() / xi;
            assert!((bloch_cos(&e, &cfg(p, 0.0)) - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn matches_transfer_matrix_half_trace() {
        let mut state = 1u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..10_000 {
            let eps = 0.05 + 99.95 * next();
            let p = 3.0 * next();
            let b = -0.8 + 1.6 * next();
            let e = EnergyPoint::new(eps).unwrap();
            let c = cfg(p, b);
            let t = transfer_matrix(&e, &c).unwrap();
            let ht = t.half_trace();
            assert!((bloch_cos(&e, &c) - ht.re).abs() < 1e-12);
            assert!(ht.im.abs() < 1e-12);
        }
    }

    #[test]
    fn phase_branch_round_trips() {
        for x in [-3.0, -1.0, -0.4, 0.0, 0.9, 1.0, 1.5, 4.2] {
            let ph = BlochPhase::from_cos(x);
            let back = ph.lambda.cos();
            assert!((back.re - x).abs() < 1e-12, "cos round trip at X={x}");
            assert!(back.im.abs() < 1e-12);
            assert!(ph.lambda.im >= 0.0);
        }
        assert_eq!(BlochPhase::from_cos(1.0).lambda, Complex64::new(0.0, 0.0));
        let edge = BlochPhase::from_cos(-1.0).lambda;
        assert!((edge.re - PI).abs() < 1e-15 && edge.im == 0.0);
        assert_eq!(BlochPhase::from_cos(1.5).regime, Regime::GapCenter);
        assert_eq!(BlochPhase::from_cos(-1.5).regime, Regime::GapEdge);
        // X = 1.5 explicitly: lambda = i arccosh(1.5)
        let ph = BlochPhase::from_cos(1.5);
        assert!((ph.lambda.im - 1.5f64.acosh()).abs() < 1e-15);
        assert_eq!(ph.lambda.re, 0.0);
    }

    #[test]
    fn free_particle_has_single_band() {
        let bs = find_bands(&cfg(0.0, 0.0), 40.0, 500).unwrap();
        assert_eq!(bs.bands.len(), 1);
        assert!(bs.gaps.is_empty());
        assert_eq!(bs.bands[0].lo, 0.0);
        assert_eq!(bs.bands[0].hi, 40.0);
    }

    #[test]
    fn dirac_comb_gap_edges_against_dense_scan() {
        // p = 1, beta_t = 0: gaps open below xi = n pi; scan past (3 pi)^2 so
        // the third gap's upper edge is interior rather than an endpoint
        let c = cfg(1.0, 0.0);
        let eps_max = 89.0;
        let bs = find_bands(&c, eps_max, 2000).unwrap();
        assert_eq!(bs.gaps.len(), 3, "gaps: {:?}", bs.gaps);

        // oracle: brute-force dense scan with 10^6 points
        let n_dense = 1_000_000;
        let step = eps_max / n_dense as f64;
        let g = |eps: f64| {
            let e = EnergyPoint::new(eps).unwrap();
            bloch_cos(&e, &c).abs() - 1.0
        };
        let mut dense_edges = Vec::new();
        let mut prev = (0.5 * step * 1e-3, g(0.5 * step * 1e-3));
        for i in 1..=n_dense {
            let eps = step * i as f64;
            let val = g(eps);
            if prev.1.signum() != val.signum() {
                // local bisection against the same |X|-1 function
                let (mut lo, mut hi) = (prev.0, eps);
                let mut glo = prev.1;
                while hi - lo > 1e-11 {
                    let mid = 0.5 * (lo + hi);
                    let gm = g(mid);
                    if gm.signum() == glo.signum() {
                        lo = mid;
                        glo = gm;
                    } else {
                        hi = mid;
                    }
                }
                dense_edges.push(0.5 * (lo + hi));
            }
            prev = (eps, val);
        }
        let mut got_edges = Vec::new();
        for gap in &bs.gaps {
            got_edges.push(gap.lo);
            got_edges.push(gap.hi);
        }
        assert_eq!(dense_edges.len(), got_edges.len());
        for (a, b) in got_edges.iter().zip(&dense_edges) {
            assert!((a - b).abs() < 1e-8, "edge {a} vs dense {b}");
        }
        // upper edges sit at eps = (n pi)^2 exactly for the n-th gap
        for (n, gap) in bs.gaps.iter().enumerate() {
            let nn = (n + 1) as f64;
            assert!((gap.hi - (nn * PI) * (nn * PI)).abs() < 1e-6, "gap {n} hi {}", gap.hi);
        }
    }

    #[test]
    fn band_edges_satisfy_unit_bloch_cos() {
        let c = cfg(1.0, 0.2);
        let bs = find_bands(&c, 60.0, 3000).unwrap();
        assert!(!bs.gaps.is_empty());
        for gap in &bs.gaps {
            for edge in [gap.lo, gap.hi] {
                let e = EnergyPoint::new(edge).unwrap();
                assert!(
                    (bloch_cos(&e, &c).abs() - 1.0).abs() < 1e-7,
                    "|X| at refined edge {edge}"
                );
            }
        }
        // edges recheck at 10x grid resolution
        let fine = find_bands(&c, 60.0, 30_000).unwrap();
        assert_eq!(fine.gaps.len(), bs.gaps.len());
        for (a, b) in bs.gaps.iter().zip(&fine.gaps) {
            assert!((a.lo - b.lo).abs() < 1e-8 && (a.hi - b.hi).abs() < 1e-8);
        }
    }

    #[test]
    fn tiling_covers_axis_without_overlap() {
        let c = cfg(2.0, -0.3);
        let bs = find_bands(&c, 80.0, 2000).unwrap();
        let mut all: Vec<Interval> = bs.bands.iter().chain(bs.gaps.iter()).copied().collect();
        all.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        assert_eq!(all[0].lo, 0.0);
        assert_eq!(all.last().unwrap().hi, 80.0);
        for pair in all.windows(2) {
            assert_eq!(pair[0].hi, pair[1].lo);
        }
    }

    #[test]
    fn beta_to_zero_continuity_of_edges() {
        let edges = |b: f64| {
            let bs = find_bands(&cfg(1.0, b), 45.0, 4000).unwrap();
            bs.gaps.iter().flat_map(|g| [g.lo, g.hi]).collect::<Vec<_>>()
        };
        let at_zero = edges(0.0);
        let near_zero = edges(1e-8);
        assert_eq!(at_zero.len(), near_zero.len());
        for (a, b) in at_zero.iter().zip(&near_zero) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn rejects_bad_scan_arguments() {
        assert!(find_bands(&cfg(1.0, 0.0), -1.0, 500).is_err());
        assert!(find_bands(&cfg(1.0, 0.0), 10.0, 50).is_err());
    }
}
