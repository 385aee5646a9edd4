//! Brute-force ground truth: the full linear matching system of the finite
//! comb, solved with no input from the analytic dispersion or surface-state
//! equations.
//!
//! In every free region the wavefunction is written as
//! `psi_n(t) = A_n sin(xi (t - n)) + B_n cos(xi (t - n))` for `n <= t <= n+1`
//! (positions in units of the cell width), with exponential tails
//! `D_L e^{kl t}` on the left and `D_R e^{-kr (t - N - 1)}` on the right.
//! Continuity of `psi, psi'` at both walls plus the two-row jump map at each
//! site assemble into a square system; bound states are the energies where
//! its determinant vanishes.
//!
//! Unknown ordering is fixed as `[D_L, A_0, B_0, ..., A_N, B_N, D_R]` and the
//! row ordering walks left to right, so coefficient vectors and golden values
//! are stable. Determinants are evaluated as a sign plus log-magnitude from a
//! row-scaled, partially pivoted LU factorization; raw determinant values
//! overflow beyond a dozen sites.

use thiserror::Error;

use crate::params::{DimensionlessConfig, EnergyPoint};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("oracle needs 0 < eps < min wall height (got eps={eps}, min wall={min_wall})")]
    EnergyOutsideWell { eps: f64, min_wall: f64 },
    #[error("invalid scan range [{lo}, {hi}] for walls of height {min_wall}")]
    InvalidScanRange { lo: f64, hi: f64, min_wall: f64 },
    #[error("scan grid must have at least 2 points (got {0})")]
    TooFewGridPoints(usize),
    #[error("matching matrix is exactly singular during null-vector solve")]
    SingularSolve,
}

/// The assembled matching system at one energy.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingSystem {
    /// `2 N + 4`.
    pub dim: usize,
    /// Row-major dense matrix.
    pub matrix: Vec<f64>,
}

impl MatchingSystem {
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.matrix[row * self.dim + col]
    }

    /// Residual `max |M v|` of a candidate null vector, relative to nothing:
    /// callers compare against `max_abs() * ||v||`.
    pub fn apply_max_abs(&self, v: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for row in 0..self.dim {
            let mut acc = 0.0;
            for col in 0..self.dim {
                acc += self.at(row, col) * v[col];
            }
            worst = worst.max(acc.abs());
        }
        worst
    }

    /// Largest entry magnitude of the matrix.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
    }
}

/// Sign and log-magnitude of a determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetValue {
    /// -1, 0, or +1.
    pub sign: f64,
    /// `ln |det|`; meaningless when `sign == 0`.
    pub log_abs: f64,
}

impl DetValue {
    /// Sign times the geometric mean of the pivot magnitudes: a bounded,
    /// sign-faithful stand-in for the raw determinant, usable for bracketing.
    pub fn comparable(&self, dim: usize) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * (self.log_abs / dim as f64).exp()
        }
    }
}

/// Builds the `(2N+4) x (2N+4)` matching matrix at energy `e`.
///
/// Rows in order: wall continuity of `psi`, `psi'` at `t = 0`; for each site
/// `j = 1..N` the value jump `B_j = gamma (A_{j-1} sin xi + B_{j-1} cos xi)`
/// and the slope jump
/// `xi A_j = gamma^-1 xi (A_{j-1} cos xi - B_{j-1} sin xi) - 2p/(1-bt^2) psi`;
/// wall continuity of `psi`, `psi'` at `t = N+1`. Asymmetric walls are
/// supported.
pub fn build_matching_matrix(
    e: &EnergyPoint,
    cfg: &DimensionlessConfig,
) -> Result<MatchingSystem, OracleError> {
    let min_wall = cfg.min_wall();
    if !(e.eps > 0.0) || !(e.eps < min_wall) {
        return Err(OracleError::EnergyOutsideWell { eps: e.eps, min_wall });
    }
    let n = cfg.n_sites;
    let dim = 2 * n + 4;
    let xi = e.xi;
    let (sin, cos) = xi.sin_cos();
    let kl = (cfg.u_left - e.eps).sqrt();
    let kr = (cfg.u_right - e.eps).sqrt();
    let g = cfg.gamma();
    let slope_kick = 2.0 * cfg.p / (1.0 - cfg.beta_t * cfg.beta_t);

    let col_dl = 0;
    let col_a = |j: usize| 1 + 2 * j;
    let col_b = |j: usize| 2 + 2 * j;
    let col_dr = dim - 1;

    let mut m = vec![0.0; dim * dim];
    let mut set = |row: usize, col: usize, val: f64| m[row * dim + col] = val;

    // left wall: psi and psi' continuous against D_L e^{kl t}
    set(0, col_b(0), 1.0);
    set(0, col_dl, -1.0);
    set(1, col_a(0), xi);
    set(1, col_dl, -kl);

    for j in 1..=n {
        let row_val = 2 * j;
        let row_slope = 2 * j + 1;
        // psi(j+) = gamma * psi(j-)
        set(row_val, col_b(j), 1.0);
        set(row_val, col_a(j - 1), -g * sin);
        set(row_val, col_b(j - 1), -g * cos);
        // psi'(j+) = -2p/(1-bt^2) psi(j-) + gamma^-1 psi'(j-)
        set(row_slope, col_a(j), xi);
        set(row_slope, col_a(j - 1), -cos * xi / g + slope_kick * sin);
        set(row_slope, col_b(j - 1), sin * xi / g + slope_kick * cos);
    }

    // right wall at t = N+1 against D_R e^{-kr (t - N - 1)}
    let row_val = 2 * n + 2;
    let row_slope = 2 * n + 3;
    set(row_val, col_a(n), sin);
    set(row_val, col_b(n), cos);
    set(row_val, col_dr, -1.0);
    set(row_slope, col_a(n), xi * cos);
    set(row_slope, col_b(n), -xi * sin);
    set(row_slope, col_dr, kr);

    Ok(MatchingSystem { dim, matrix: m })
}

/// Determinant of the matching matrix as sign plus log-magnitude, via LU with
/// partial pivoting on rows pre-scaled to unit max-norm.
pub fn matching_determinant(
    e: &EnergyPoint,
    cfg: &DimensionlessConfig,
) -> Result<DetValue, OracleError> {
    let system = build_matching_matrix(e, cfg)?;
    Ok(det_sign_log(system.matrix, system.dim))
}

fn det_sign_log(mut m: Vec<f64>, dim: usize) -> DetValue {
    let mut sign = 1.0f64;
    let mut log_abs = 0.0f64;

    // row scaling; each scale divides the determinant
    for row in 0..dim {
        let scale = (0..dim).fold(0.0f64, |acc, c| acc.max(m[row * dim + c].abs()));
        if scale == 0.0 {
            return DetValue { sign: 0.0, log_abs: f64::NEG_INFINITY };
        }
        for c in 0..dim {
            m[row * dim + c] /= scale;
        }
        log_abs += scale.ln();
    }

    for k in 0..dim {
        let mut pivot_row = k;
        let mut pivot_val = m[k * dim + k].abs();
        for r in (k + 1)..dim {
            let v = m[r * dim + k].abs();
            if v > pivot_val {
                pivot_val = v;
                pivot_row = r;
            }
        }
        if pivot_val == 0.0 {
            return DetValue { sign: 0.0, log_abs: f64::NEG_INFINITY };
        }
        if pivot_row != k {
            for c in 0..dim {
                m.swap(k * dim + c, pivot_row * dim + c);
            }
            sign = -sign;
        }
        let pivot = m[k * dim + k];
        sign *= pivot.signum();
        log_abs += pivot.abs().ln();
        for r in (k + 1)..dim {
            let factor = m[r * dim + k] / pivot;
            if factor == 0.0 {
                continue;
            }
            for c in k..dim {
                m[r * dim + c] -= factor * m[k * dim + c];
            }
        }
    }
    DetValue { sign, log_abs }
}

/// One located determinant zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetRoot {
    pub eps: f64,
    /// Determinant at the refined energy, rescaled by the scan's median
    /// magnitude; near zero at a genuine root.
    pub residual: f64,
}

/// Result of a determinant scan.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DeterminantScan {
    pub roots: Vec<DetRoot>,
    /// Energies where `|det|` dipped below `1e-8` times the scan median
    /// without a sign change: suspected even-multiplicity (tangent) roots.
    pub suspected_tangents: Vec<f64>,
}

/// Scans the determinant sign over `[eps_lo, eps_hi]`, brackets sign changes,
/// and bisects each to 1e-10 in energy.
pub fn determinant_scan(
    cfg: &DimensionlessConfig,
    eps_lo: f64,
    eps_hi: f64,
    grid: usize,
) -> Result<DeterminantScan, OracleError> {
    let min_wall = cfg.min_wall();
    if !(eps_lo > 0.0) || !(eps_lo < eps_hi) || !(eps_hi < min_wall) {
        return Err(OracleError::InvalidScanRange { lo: eps_lo, hi: eps_hi, min_wall });
    }
    if grid < 2 {
        return Err(OracleError::TooFewGridPoints(grid));
    }

    let det_at = |eps: f64| -> DetValue {
        let e = EnergyPoint::new(eps).expect("scan energies valid");
        matching_determinant(&e, cfg).expect("scan stays inside the well")
    };

    let step = (eps_hi - eps_lo) / grid as f64;
    let raw: Vec<(f64, DetValue)> = (0..=grid)
        .map(|i| {
            let eps = if i == grid { eps_hi } else { eps_lo + step * i as f64 };
            (eps, det_at(eps))
        })
        .collect();

    // rescale by the median log-magnitude so root residuals are meaningful
    // and bracketing never overflows
    let mut logs: Vec<f64> =
        raw.iter().filter(|(_, d)| d.sign != 0.0).map(|(_, d)| d.log_abs).collect();
    if logs.is_empty() {
        return Ok(DeterminantScan::default());
    }
    logs.sort_by(f64::total_cmp);
    let log_ref = logs[logs.len() / 2];
    let scaled = move |d: DetValue| -> f64 {
        if d.sign == 0.0 {
            0.0
        } else {
            d.sign * (d.log_abs - log_ref).clamp(-745.0, 700.0).exp()
        }
    };
    let f = |eps: f64| scaled(det_at(eps));
    let samples: Vec<(f64, f64)> = raw.iter().map(|&(eps, d)| (eps, scaled(d))).collect();

    let mut roots = Vec::new();
    for pair in samples.windows(2) {
        let (x0, f0) = pair[0];
        let (x1, f1) = pair[1];
        if f0 == 0.0 {
            roots.push(DetRoot { eps: x0, residual: 0.0 });
            continue;
        }
        if f0.signum() != f1.signum() {
            let (mut lo, mut hi, mut flo) = (x0, x1, f0);
            while hi - lo > 1e-10 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let fm = f(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            let eps = 0.5 * (lo + hi);
            roots.push(DetRoot { eps, residual: f(eps) });
        }
    }

    // interior minima of |det| dipping below 1e-8 of the median magnitude
    // (plain 1e-8 in the rescaled units) without a sign change
    let mut suspected_tangents = Vec::new();
    for w in samples.windows(3) {
        let (_, f0) = w[0];
        let (x1, f1) = w[1];
        let (_, f2) = w[2];
        let same_sign = f0.signum() == f1.signum() && f1.signum() == f2.signum();
        if same_sign && f1.abs() < f0.abs() && f1.abs() < f2.abs() && f1.abs() < 1e-8 {
            suspected_tangents.push(x1);
        }
    }

    Ok(DeterminantScan { roots, suspected_tangents })
}

/// Confirms a candidate bound-state energy by a fine local determinant scan
/// inside `[eps - window, eps + window]`; returns the refined oracle energy.
pub fn confirm_root(
    cfg: &DimensionlessConfig,
    eps: f64,
    window: f64,
) -> Result<Option<f64>, OracleError> {
    let lo = (eps - window).max(1e-12);
    let hi = (eps + window).min(cfg.min_wall() - 1e-12);
    if !(lo < hi) {
        return Ok(None);
    }
    let scan = determinant_scan(cfg, lo, hi, 64)?;
    Ok(scan
        .roots
        .iter()
        .map(|r| r.eps)
        .min_by(|a, b| (a - eps).abs().total_cmp(&(b - eps).abs())))
}

/// Null vector of the matching matrix at a converged root, by inverse
/// iteration. Output is normalized to unit max-entry with a deterministic
/// sign (largest-magnitude entry positive).
pub fn null_vector(e: &EnergyPoint, cfg: &DimensionlessConfig) -> Result<Vec<f64>, OracleError> {
    let system = build_matching_matrix(e, cfg)?;
    let dim = system.dim;
    let lu = LuFactors::new(system.matrix.clone(), dim).ok_or(OracleError::SingularSolve)?;

    let mut v = vec![1.0; dim];
    for _ in 0..8 {
        let mut w = lu.solve(&v);
        let norm = w.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        if !norm.is_finite() || norm == 0.0 {
            return Err(OracleError::SingularSolve);
        }
        for x in &mut w {
            *x /= norm;
        }
        v = w;
    }

    // deterministic sign convention
    let (mut best_idx, mut best_abs) = (0, 0.0f64);
    for (i, x) in v.iter().enumerate() {
        if x.abs() > best_abs {
            best_abs = x.abs();
            best_idx = i;
        }
    }
    if v[best_idx] < 0.0 {
        for x in &mut v {
            *x = -*x;
        }
    }
    Ok(v)
}

/// LU factorization with partial pivoting, kept for repeated solves.
struct LuFactors {
    dim: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl LuFactors {
    fn new(mut m: Vec<f64>, dim: usize) -> Option<Self> {
        let mut perm: Vec<usize> = (0..dim).collect();
        for k in 0..dim {
            let mut pivot_row = k;
            let mut pivot_val = m[k * dim + k].abs();
            for r in (k + 1)..dim {
                let v = m[r * dim + k].abs();
                if v > pivot_val {
                    pivot_val = v;
                    pivot_row = r;
                }
            }
            if pivot_val == 0.0 {
                return None;
            }
            if pivot_row != k {
                for c in 0..dim {
                    m.swap(k * dim + c, pivot_row * dim + c);
                }
                perm.swap(k, pivot_row);
            }
            let pivot = m[k * dim + k];
            for r in (k + 1)..dim {
                let factor = m[r * dim + k] / pivot;
                m[r * dim + k] = factor;
                for c in (k + 1)..dim {
                    m[r * dim + c] -= factor * m[k * dim + c];
                }
            }
        }
        Some(Self { dim, lu: m, perm })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let dim = self.dim;
        let mut y = vec![0.0; dim];
        for r in 0..dim {
            let mut acc = b[self.perm[r]];
            for c in 0..r {
                acc -= self.lu[r * dim + c] * y[c];
            }
            y[r] = acc;
        }
        for r in (0..dim).rev() {
            let mut acc = y[r];
            for c in (r + 1)..dim {
                acc -= self.lu[r * dim + c] * y[c];
            }
            y[r] = acc / self.lu[r * dim + r];
        }
        y
    }
}
