//! Explicit surface-state wavefunctions: per-cell coefficients, piecewise
//! evaluation with analytic exponential tails, and unit normalization.
//!
//! Positions are measured in units of the cell width, so the comb interior is
//! `0 <= t <= N+1` with sites at the integers `1..N`. Inside cell `n` the
//! state is `A_n sin(xi (t - n)) + B_n cos(xi (t - n))`; outside it decays as
//! `D_L e^{kappa_bar t}` and `D_R e^{-kappa_bar (t - N - 1)}`.
//!
//! With the left-tail amplitude provisionally 1, the wall matching at `t = 0`
//! fixes the two mode amplitudes to `D1 = 1 / sin(xi)` and
//! `D2 = D1 (gamma a - cos lambda) / sin lambda` (that is, `D1 / eta(gamma)`),
//! and every cell coefficient follows from
//! `F_n = D1 cos(n lambda) + D2 sin(n lambda)`:
//!
//! ```text
//! A_n = F_{n+1} / gamma - F_n cos(xi),   B_n = F_n sin(xi),
//! D_R = F_{N+1} sin(xi) / gamma.
//! ```
//!
//! `lambda` is complex in a gap but `D2 sin(n lambda)` is real there, so all
//! coefficients come out real (checked to 1e-10). The overall scale is then
//! fixed by `int |psi|^2 dt = 1`, with closed-form tails `D^2 / (2 kappa_bar)`
//! and per-cell adaptive quadrature aligned to the sites, and the sign
//! convention `D_L > 0` (hence `psi(0) > 0`).
//!
//! A state pinned exactly at a cell resonance (`sin(xi) = 0`) makes the `1 /
//! sin(xi)` amplitudes blow up; this is reported as a coefficient
//! singularity. The limit exists (rescale all coefficients by `sin(xi)`
//! before taking it, i.e. work with `F_n sin(xi)` throughout), but no
//! reference configuration hits it.

use num_complex::Complex64;
use thiserror::Error;

use crate::dispersion::bloch_phase;
use crate::numerics::{adaptive_integrate, NumericsError};
use crate::params::{DimensionlessConfig, EnergyPoint};
use crate::surface::{SurfaceError, SurfaceState};

/// Samples with `|x|` beyond this distance from the comb are clamped.
pub const TAIL_EXTENT: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WavefunctionError {
    #[error("coefficient singularity: |sin(xi)| = {0:e} at the state energy (cell resonance)")]
    CoefficientSingularity(f64),
    #[error("cell coefficient has non-vanishing imaginary part {0:e}")]
    ComplexCoefficient(f64),
    #[error("state energy {eps} is not below the wall height {wall}")]
    NotBound { eps: f64, wall: f64 },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("normalization quadrature failed: {0}")]
    Quadrature(#[from] NumericsError),
}

/// Real per-cell expansion of one surface state (normalized).
#[derive(Debug, Clone, PartialEq)]
pub struct CellCoefficients {
    /// Left-tail amplitude `D_L`; equals the overall norm constant.
    pub d_left: f64,
    /// Right-tail amplitude `D_R`.
    pub d_right: f64,
    /// Mode amplitude `D1` (real).
    pub d1: f64,
    /// Mode amplitude `D2`; purely imaginary in a gap, stored as a complex.
    pub d2: Complex64,
    /// `A_n` for `n = 0..=N`.
    pub a: Vec<f64>,
    /// `B_n` for `n = 0..=N`.
    pub b: Vec<f64>,
}

/// A normalized surface-state wavefunction ready for pointwise evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceWavefunction {
    pub eps: f64,
    pub xi: f64,
    pub kappa_bar: f64,
    pub n_sites: usize,
    pub coefficients: CellCoefficients,
}

/// Sampled, normalized wavefunction table.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionTable {
    /// `(x, psi)` pairs with `x` in units of the cell width.
    pub samples: Vec<(f64, f64)>,
    /// State energy.
    pub eps: f64,
    /// Norm constant `D_L`.
    pub norm_constant: f64,
    pub coefficients: CellCoefficients,
    /// Number of requested grid points that were clamped to the supported range.
    pub clipped_points: usize,
}

impl SurfaceWavefunction {
    /// Builds and normalizes the wavefunction of a located surface state.
    pub fn build(
        state: &SurfaceState,
        cfg: &DimensionlessConfig,
    ) -> Result<Self, WavefunctionError> {
        let u = cfg
            .symmetric_wall()
            .ok_or(SurfaceError::WallsNotEqual(cfg.u_left, cfg.u_right))?;
        if !(state.eps < u) {
            return Err(WavefunctionError::NotBound { eps: state.eps, wall: u });
        }
        let e = EnergyPoint::with_wall(state.eps, u).expect("state energy is valid");
        let xi = e.xi;
        let kappa_bar = e.kappa_bar.expect("state is below the wall");
        let sin_xi = xi.sin();
        if sin_xi.abs() < 1e-12 {
            return Err(WavefunctionError::CoefficientSingularity(sin_xi.abs()));
        }
        let lam = bloch_phase(&e, cfg).lambda;
        let g = cfg.gamma();
        let q = kappa_bar / xi;
        let a_wall = xi.cos() + q * xi.sin();

        // wall matching at t = 0 with D_L = 1
        let d1 = Complex64::new(1.0 / sin_xi, 0.0);
        let sin_l = lam.sin();
        let d2 = d1 * (g * a_wall - lam.cos()) / sin_l;

        let n = cfg.n_sites;
        let f_values: Vec<Complex64> = (0..=n + 1)
            .map(|k| {
                let kl = k as f64 * lam;
                d1 * kl.cos() + d2 * kl.sin()
            })
            .collect();

        let mut a = Vec::with_capacity(n + 1);
        let mut b = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let a_k = f_values[k + 1] / g - f_values[k] * xi.cos();
            let b_k = f_values[k] * sin_xi;
            for z in [a_k, b_k] {
                if z.im.abs() > 1e-10 * z.re.abs().max(1.0) {
                    return Err(WavefunctionError::ComplexCoefficient(z.im.abs()));
                }
            }
            a.push(a_k.re);
            b.push(b_k.re);
        }
        let d_right_c = f_values[n + 1] * sin_xi / g;
        if d_right_c.im.abs() > 1e-10 * d_right_c.re.abs().max(1.0) {
            return Err(WavefunctionError::ComplexCoefficient(d_right_c.im.abs()));
        }

        let mut wf = SurfaceWavefunction {
            eps: state.eps,
            xi,
            kappa_bar,
            n_sites: n,
            coefficients: CellCoefficients {
                d_left: 1.0,
                d_right: d_right_c.re,
                d1: d1.re,
                d2,
                a,
                b,
            },
        };
        let norm_sq = wf.norm_squared(1e-10)?;
        wf.rescale(1.0 / norm_sq.sqrt());
        Ok(wf)
    }

    /// `int |psi|^2 dt` at the current scale: closed-form tails plus per-cell
    /// quadrature panels aligned to the sites (the integrand is smooth inside
    /// each cell).
    pub fn norm_squared(&self, rel_tol: f64) -> Result<f64, WavefunctionError> {
        let c = &self.coefficients;
        let mut total = (c.d_left * c.d_left + c.d_right * c.d_right) / (2.0 * self.kappa_bar);
        for k in 0..=self.n_sites {
            let (a_k, b_k, xi) = (c.a[k], c.b[k], self.xi);
            let cell = adaptive_integrate(
                move |s| {
                    let v = a_k * (xi * s).sin() + b_k * (xi * s).cos();
                    v * v
                },
                0.0,
                1.0,
                rel_tol,
            )?;
            total += cell;
        }
        Ok(total)
    }

    fn rescale(&mut self, scale: f64) {
        let c = &mut self.coefficients;
        c.d_left *= scale;
        c.d_right *= scale;
        c.d1 *= scale;
        c.d2 *= scale;
        for v in c.a.iter_mut().chain(c.b.iter_mut()) {
            *v *= scale;
        }
    }

    /// System width `N + 1` in cell-width units.
    pub fn width(&self) -> f64 {
        (self.n_sites + 1) as f64
    }

    /// `psi(t)`; at a site the value from the right cell is returned.
    pub fn psi(&self, t: f64) -> f64 {
        let c = &self.coefficients;
        if t < 0.0 {
            c.d_left * (self.kappa_bar * t).exp()
        } else if t >= self.width() {
            c.d_right * (-self.kappa_bar * (t - self.width())).exp()
        } else {
            let n = (t.floor() as usize).min(self.n_sites);
            let s = self.xi * (t - n as f64);
            c.a[n] * s.sin() + c.b[n] * s.cos()
        }
    }

    /// `d psi / d t`; at a site the slope from the right cell is returned.
    pub fn psi_prime(&self, t: f64) -> f64 {
        let c = &self.coefficients;
        if t < 0.0 {
            self.kappa_bar * c.d_left * (self.kappa_bar * t).exp()
        } else if t >= self.width() {
            -self.kappa_bar * c.d_right * (-self.kappa_bar * (t - self.width())).exp()
        } else {
            let n = (t.floor() as usize).min(self.n_sites);
            let s = self.xi * (t - n as f64);
            self.xi * (c.a[n] * s.cos() - c.b[n] * s.sin())
        }
    }

    /// Worst absolute mismatch of the two boundary conditions at each site,
    /// `(value jump, slope jump)`, relative to `max |psi|`.
    pub fn jump_residuals(&self, cfg: &DimensionlessConfig) -> (f64, f64) {
        let g = cfg.gamma();
        let kick = 2.0 * cfg.p / (1.0 - cfg.beta_t * cfg.beta_t);
        let scale = self.max_abs_psi();
        let mut worst_val = 0.0f64;
        let mut worst_slope = 0.0f64;
        for j in 1..=self.n_sites {
            let t = j as f64;
            // left limit from cell j-1, right limit from cell j
            let s = self.xi; // xi * (t - (j-1)) at t = j
            let c = &self.coefficients;
            let psi_l = c.a[j - 1] * s.sin() + c.b[j - 1] * s.cos();
            let dpsi_l = self.xi * (c.a[j - 1] * s.cos() - c.b[j - 1] * s.sin());
            let psi_r = self.psi(t);
            let dpsi_r = self.psi_prime(t);
            worst_val = worst_val.max((psi_r - g * psi_l).abs());
            worst_slope = worst_slope.max((dpsi_r + kick * psi_l - dpsi_l / g).abs());
        }
        (worst_val / scale, worst_slope / scale.max(1.0))
    }

    /// Mismatch of `psi` and `psi'` across both walls.
    pub fn wall_residuals(&self) -> (f64, f64) {
        let c = &self.coefficients;
        let left_val = (c.d_left - self.psi(0.0)).abs();
        let left_slope = (self.kappa_bar * c.d_left - self.psi_prime(0.0)).abs();
        let w = self.width();
        let s = self.xi * 1.0;
        let n = self.n_sites;
        let psi_in = c.a[n] * s.sin() + c.b[n] * s.cos();
        let dpsi_in = self.xi * (c.a[n] * s.cos() - c.b[n] * s.sin());
        let right_val = (psi_in - self.psi(w)).abs();
        let right_slope = (dpsi_in - self.psi_prime(w)).abs();
        (left_val.max(right_val), left_slope.max(right_slope))
    }

    pub fn max_abs_psi(&self) -> f64 {
        let mut worst = self.coefficients.d_left.abs().max(self.coefficients.d_right.abs());
        for k in 0..=self.n_sites {
            let (a, b) = (self.coefficients.a[k], self.coefficients.b[k]);
            worst = worst.max((a * a + b * b).sqrt());
        }
        worst
    }

    /// Samples the wavefunction on a sorted grid (`x` in cell-width units),
    /// clamping points farther than [`TAIL_EXTENT`] beyond either wall.
    pub fn sample(&self, x_grid: &[f64]) -> WavefunctionTable {
        let lo = -TAIL_EXTENT;
        let hi = self.width() + TAIL_EXTENT;
        let mut clipped_points = 0;
        let samples = x_grid
            .iter()
            .map(|&x| {
                let t = if x < lo {
                    clipped_points += 1;
                    lo
                } else if x > hi {
                    clipped_points += 1;
                    hi
                } else {
                    x
                };
                (t, self.psi(t))
            })
            .collect();
        WavefunctionTable {
            samples,
            eps: self.eps,
            norm_constant: self.coefficients.d_left,
            coefficients: self.coefficients.clone(),
            clipped_points,
        }
    }
}

/// Per-cell coefficients of a surface state (normalized); see
/// [`SurfaceWavefunction::build`].
pub fn cell_coefficients(
    state: &SurfaceState,
    cfg: &DimensionlessConfig,
) -> Result<CellCoefficients, WavefunctionError> {
    Ok(SurfaceWavefunction::build(state, cfg)?.coefficients)
}

/// Builds, normalizes, and samples the wavefunction of a surface state.
pub fn evaluate(
    state: &SurfaceState,
    cfg: &DimensionlessConfig,
    x_grid: &[f64],
) -> Result<WavefunctionTable, WavefunctionError> {
    Ok(SurfaceWavefunction::build(state, cfg)?.sample(x_grid))
}
