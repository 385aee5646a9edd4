//! Elementary-cell matrices of the delta-delta' comb and quantum wave
//! impedance propagation across one cell.
//!
//! One cell is a delta-delta' site followed by a free flight of one cell
//! width. Two equivalent 2x2 descriptions are computed:
//!
//! - the unimodular transfer matrix `T` acting on plane-wave amplitude pairs
//!   (its half-trace is the Bloch cosine of the dispersion module), and
//! - the normalized impedance matrix `Z`, whose linear-fractional action
//!   propagates a wave impedance across the cell.
//!
//! Both contain the combination `Omega = -p / xi`. The matrix entries use
//! `Omega` as an undetermined site-strength parameter; its value is the
//! unique choice for which `(T11 + T22) / 2` reproduces the comb's dispersion
//! relation `cos(lambda) = [(1 + bt^2) cos(xi) - p sin(xi)/xi] / (1 - bt^2)`:
//! expanding the half-trace gives `[(1 + bt^2) cos(xi) + Omega sin(xi)] /
//! (1 - bt^2)`, so `Omega sin(xi) = -p sin(xi)/xi` pins `Omega` exactly.
//! The trace-identity test re-verifies this against the dispersion module on
//! random draws.
//!
//! The two descriptions are conjugate under the Cayley-type basis change
//! `K = [[1, -1], [1, 1]]` between amplitude pairs and impedance charts:
//! `K T K^-1 = [[-Z12, Z11], [-Z22, Z21]]` entry by entry, which is what
//! [`impedance_from_transfer`] implements.
//!
//! All `ch(i xi)` / `sh(i xi)` forms are evaluated directly as `cos(xi)` and
//! `i sin(xi)`.

use num_complex::Complex64;
use thiserror::Error;

use crate::params::{DimensionlessConfig, EnergyPoint};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CellError {
    #[error("cell matrices need eps > 0 (got {0})")]
    NonPositiveEnergy(f64),
    #[error("impedance pole: Moebius denominator magnitude {0:e} below 1e-14")]
    ImpedancePole(f64),
    #[error("impedance input must be finite")]
    NonFiniteImpedance,
}

/// Which 2x2 description a [`CellMatrix`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Transfer,
    Impedance,
}

/// Complex 2x2 cell matrix, transfer or impedance form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellMatrix {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
    pub kind: MatrixKind,
}

impl CellMatrix {
    pub fn det(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// Half-trace `(m11 + m22) / 2`; for the transfer kind this is the Bloch cosine.
    pub fn half_trace(&self) -> Complex64 {
        0.5 * (self.m11 + self.m22)
    }

    /// Inverse of a unimodular matrix (adjugate; assumes det = 1).
    pub fn unimodular_inverse(&self) -> CellMatrix {
        CellMatrix {
            m11: self.m22,
            m12: -self.m12,
            m21: -self.m21,
            m22: self.m11,
            kind: self.kind,
        }
    }

    pub fn mul(&self, rhs: &CellMatrix) -> CellMatrix {
        CellMatrix {
            m11: self.m11 * rhs.m11 + self.m12 * rhs.m21,
            m12: self.m11 * rhs.m12 + self.m12 * rhs.m22,
            m21: self.m21 * rhs.m11 + self.m22 * rhs.m21,
            m22: self.m21 * rhs.m12 + self.m22 * rhs.m22,
            kind: self.kind,
        }
    }

    pub fn pow(&self, n: usize) -> CellMatrix {
        let mut out = CellMatrix {
            m11: Complex64::new(1.0, 0.0),
            m12: Complex64::new(0.0, 0.0),
            m21: Complex64::new(0.0, 0.0),
            m22: Complex64::new(1.0, 0.0),
            kind: self.kind,
        };
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }
}

/// The site-strength combination appearing in both cell matrices.
///
/// Fixed to `omega = -p / xi`, so `omega * xi = -p` for every energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaValue {
    pub omega: f64,
}

impl OmegaValue {
    pub fn at(e: &EnergyPoint, cfg: &DimensionlessConfig) -> Result<Self, CellError> {
        if !(e.eps > 0.0) {
            return Err(CellError::NonPositiveEnergy(e.eps));
        }
        Ok(Self { omega: -cfg.p / e.xi })
    }
}

/// Normalized impedance matrix of one cell (determinant 1).
pub fn impedance_matrix(
    e: &EnergyPoint,
    cfg: &DimensionlessConfig,
) -> Result<CellMatrix, CellError> {
    let omega = OmegaValue::at(e, cfg)?.omega;
    let b = cfg.beta_t;
    let g = cfg.gamma();
    let ch = Complex64::new(e.xi.cos(), 0.0); // ch(i xi)
    let sh = Complex64::new(0.0, e.xi.sin()); // sh(i xi)
    let two_i_omega = Complex64::new(0.0, 2.0 * omega / (1.0 - b * b));
    Ok(CellMatrix {
        m11: two_i_omega * ch - g * sh,
        m12: two_i_omega * sh - g * ch,
        m21: ch / g,
        m22: sh / g,
        kind: MatrixKind::Impedance,
    })
}

/// Unimodular transfer matrix of one cell.
pub fn transfer_matrix(
    e: &EnergyPoint,
    cfg: &DimensionlessConfig,
) -> Result<CellMatrix, CellError> {
    let omega = OmegaValue::at(e, cfg)?.omega;
    let b = cfg.beta_t;
    let pref = 1.0 / (1.0 - b * b);
    let e_minus = Complex64::from_polar(1.0, -e.xi); // e^{-i xi}
    let e_plus = Complex64::from_polar(1.0, e.xi);
    let i_omega = Complex64::new(0.0, omega);
    let one_b2 = Complex64::new(1.0 + b * b, 0.0);
    let two_b = Complex64::new(2.0 * b, 0.0);
    Ok(CellMatrix {
        m11: pref * (one_b2 + i_omega) * e_minus,
        m12: pref * (i_omega - two_b) * e_plus,
        m21: -pref * (i_omega + two_b) * e_minus,
        m22: pref * (one_b2 - i_omega) * e_plus,
        kind: MatrixKind::Transfer,
    })
}

/// Reads the normalized impedance matrix off a transfer matrix through the
/// amplitude-to-impedance basis change `K T K^-1 = [[-Z12, Z11], [-Z22, Z21]]`.
pub fn impedance_from_transfer(t: &CellMatrix) -> CellMatrix {
    let c = conjugate_to_impedance_chart(t);
    CellMatrix {
        m11: c.m12,
        m12: -c.m11,
        m21: c.m22,
        m22: -c.m21,
        kind: MatrixKind::Impedance,
    }
}

/// `K M K^-1` with `K = [[1, -1], [1, 1]]`: the matrix whose Moebius action on
/// the scaled impedance `z / z0` equals the amplitude-basis action of `M`.
pub fn conjugate_to_impedance_chart(m: &CellMatrix) -> CellMatrix {
    // K M K^-1, K^-1 = [[1, 1], [-1, 1]] / 2
    let a = m.m11 - m.m21 - (m.m12 - m.m22); // 2*(1,1)
    let b = m.m11 - m.m21 + (m.m12 - m.m22); // 2*(1,2)
    let c = m.m11 + m.m21 - (m.m12 + m.m22);
    let d = m.m11 + m.m21 + (m.m12 + m.m22);
    CellMatrix { m11: 0.5 * a, m12: 0.5 * b, m21: 0.5 * c, m22: 0.5 * d, kind: m.kind }
}

/// Characteristic impedance of the free region at this energy (units where
/// `z0 = xi`); all impedance ratios are invariant under this scaling.
pub fn characteristic_impedance(e: &EnergyPoint) -> f64 {
    e.xi
}

/// Propagates a wave impedance across one cell by the closed linear-fractional
/// form `z_out = z0 (Z11 z0 - Z12 z) / (Z21 z0 - Z22 z)`.
///
/// Equals the Moebius action of [`transfer_matrix`] on `z_in`; a denominator
/// magnitude below 1e-14 is reported as a pole so the caller can switch to
/// [`propagate_impedance_projective`].
pub fn propagate_impedance(
    z_in: Complex64,
    e: &EnergyPoint,
    cfg: &DimensionlessConfig,
) -> Result<Complex64, CellError> {
    if !z_in.re.is_finite() || !z_in.im.is_finite() {
        return Err(CellError::NonFiniteImpedance);
    }
    let z0 = Complex64::new(characteristic_impedance(e), 0.0);
    let z = impedance_matrix(e, cfg)?;
    let den = z.m21 * z0 - z.m22 * z_in;
    if den.norm() < 1e-14 {
        return Err(CellError::ImpedancePole(den.norm()));
    }
    Ok(z0 * (z.m11 * z0 - z.m12 * z_in) / den)
}

/// Projective form of [`propagate_impedance`]: the impedance is carried as a
/// homogeneous pair `(num, den)` with `z = num / den`, which passes through
/// poles of the Moebius map without special cases.
pub fn propagate_impedance_projective(
    pair: (Complex64, Complex64),
    e: &EnergyPoint,
    cfg: &DimensionlessConfig,
) -> Result<(Complex64, Complex64), CellError> {
    let z0 = Complex64::new(characteristic_impedance(e), 0.0);
    let z = impedance_matrix(e, cfg)?;
    let (n, d) = pair;
    Ok((z0 * (z.m11 * z0 * d - z.m12 * n), z.m21 * z0 * d - z.m22 * n))
}

/// Moebius action of an amplitude-basis matrix on an impedance value; used by
/// tests to cross-check [`propagate_impedance`] against [`transfer_matrix`].
pub fn mobius_impedance_action(
    m: &CellMatrix,
    z_in: Complex64,
    z0: f64,
) -> Result<Complex64, CellError> {
    let c = conjugate_to_impedance_chart(m);
    let t = z_in / z0;
    let den = c.m21 * t + c.m22;
    if den.norm() < 1e-14 {
        return Err(CellError::ImpedancePole(den.norm()));
    }
    Ok(z0 * (c.m11 * t + c.m12) / den)
}
