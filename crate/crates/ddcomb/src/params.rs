//! Comb configuration and the dimensionless parameterization.
//!
//! All inner computations run in dimensionless form. Energies are scaled by
//! `hbar^2 / (2 m l^2)` where `l` is the cell width, so that
//!
//! - `eps = 2 m E l^2 / hbar^2` and `xi = sqrt(eps) = k0 l`,
//! - wall heights become `u = 2 m U l^2 / hbar^2`,
//! - a wall decay rate becomes `kappa_bar = kappa l = sqrt(u - eps)`,
//! - the delta strength becomes `p = m alpha l / hbar^2`,
//! - the delta' strength becomes `beta_t = m beta / hbar^2`.
//!
//! The stored `delta_strength` alpha corresponds to a `-alpha * delta(x)` term
//! in the potential, so `p > 0` means attractive sites. Physical inputs are
//! converted at the boundary by [`nondimensionalize`] and recovered by
//! [`DimensionlessConfig::to_physical`].

use thiserror::Error;

/// Reduced Planck constant in J*s (CODATA 2018).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Tolerance window around `beta_t = +/-1` where the matching matrix is singular.
pub const BETA_SINGULAR_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamsError {
    #[error("n_sites must be >= 1 (got {0})")]
    InvalidSiteCount(usize),
    #[error("{name} must be positive (got {value})")]
    NotPositive { name: &'static str, value: f64 },
    #[error("wall height {name} must be >= 0 (got {value})")]
    NegativeWall { name: &'static str, value: f64 },
    #[error("beta_t = {0} is within {BETA_SINGULAR_TOL:e} of a singular point (+1 or -1)")]
    BetaSingular(f64),
    #[error("parameter {name} is not finite (got {value})")]
    NotFinite { name: &'static str, value: f64 },
}

/// Physical description of the comb: `N` identical delta-delta' sites at
/// `x = n*l` (n = 1..N), flanked by potential steps of height `U_L`, `U_R`.
/// The system width `L = (N+1)*l` is always derived, never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct CombConfig {
    /// Number of delta-delta' sites.
    pub n_sites: usize,
    /// Spacing `l` between adjacent sites (m).
    pub cell_width: f64,
    /// Strength `alpha` of the `-alpha * delta` term (J*m); positive = attractive.
    pub delta_strength: f64,
    /// Strength `beta` of the `beta * delta'` term (J*m^2).
    pub delta_prime_strength: f64,
    /// Left wall height `U_L` (J).
    pub wall_left: f64,
    /// Right wall height `U_R` (J).
    pub wall_right: f64,
    /// Particle mass `m` (kg).
    pub mass: f64,
}

impl CombConfig {
    pub fn validate(&self) -> Result<(), ParamsError> {
        if self.n_sites == 0 {
            return Err(ParamsError::InvalidSiteCount(self.n_sites));
        }
        for (name, value) in [("cell_width", self.cell_width), ("mass", self.mass)] {
            if !(value > 0.0) {
                return Err(ParamsError::NotPositive { name, value });
            }
        }
        for (name, value) in [("wall_left", self.wall_left), ("wall_right", self.wall_right)] {
            if !(value >= 0.0) {
                return Err(ParamsError::NegativeWall { name, value });
            }
        }
        for (name, value) in [
            ("delta_strength", self.delta_strength),
            ("delta_prime_strength", self.delta_prime_strength),
        ] {
            if !value.is_finite() {
                return Err(ParamsError::NotFinite { name, value });
            }
        }
        Ok(())
    }

    /// System width `L = (N+1)*l`.
    pub fn system_width(&self) -> f64 {
        (self.n_sites as f64 + 1.0) * self.cell_width
    }
}

/// Dimensionless comb parameters; every solver routine takes this.
///
/// `|beta_t| > 1` is accepted (all formulas stay finite) but is an
/// unconventional regime: the wavefunction scale factor `gamma` turns
/// negative there.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionlessConfig {
    pub n_sites: usize,
    /// `p = m alpha l / hbar^2`; positive for attractive sites.
    pub p: f64,
    /// `beta_t = m beta / hbar^2`.
    pub beta_t: f64,
    /// `2 m U_L l^2 / hbar^2`.
    pub u_left: f64,
    /// `2 m U_R l^2 / hbar^2`.
    pub u_right: f64,
}

impl DimensionlessConfig {
    pub fn new(
        n_sites: usize,
        p: f64,
        beta_t: f64,
        u_left: f64,
        u_right: f64,
    ) -> Result<Self, ParamsError> {
        if n_sites == 0 {
            return Err(ParamsError::InvalidSiteCount(n_sites));
        }
        for (name, value) in [("p", p), ("beta_t", beta_t), ("u_left", u_left), ("u_right", u_right)]
        {
            if !value.is_finite() {
                return Err(ParamsError::NotFinite { name, value });
            }
        }
        if (beta_t - 1.0).abs() < BETA_SINGULAR_TOL || (beta_t + 1.0).abs() < BETA_SINGULAR_TOL {
            return Err(ParamsError::BetaSingular(beta_t));
        }
        for (name, value) in [("u_left", u_left), ("u_right", u_right)] {
            if !(value >= 0.0) {
                return Err(ParamsError::NegativeWall { name, value });
            }
        }
        Ok(Self { n_sites, p, beta_t, u_left, u_right })
    }

    /// Symmetric comb with equal walls.
    pub fn symmetric(n_sites: usize, p: f64, beta_t: f64, u: f64) -> Result<Self, ParamsError> {
        Self::new(n_sites, p, beta_t, u, u)
    }

    /// Returns the common wall height if the walls are equal, which the
    /// analytic surface-state equations require.
    pub fn symmetric_wall(&self) -> Option<f64> {
        if self.u_left == self.u_right {
            Some(self.u_left)
        } else {
            None
        }
    }

    /// Lower of the two wall heights; bound states live below it.
    pub fn min_wall(&self) -> f64 {
        self.u_left.min(self.u_right)
    }

    /// Scale factor `gamma = (1 + beta_t) / (1 - beta_t)` of this comb.
    pub fn gamma(&self) -> f64 {
        // constructor already rejected the singular window
        (1.0 + self.beta_t) / (1.0 - self.beta_t)
    }

    /// Recovers the physical configuration for a chosen mass and cell width.
    /// Inverse of [`nondimensionalize`] up to floating-point roundoff.
    pub fn to_physical(&self, mass: f64, cell_width: f64) -> Result<CombConfig, ParamsError> {
        if !(mass > 0.0) {
            return Err(ParamsError::NotPositive { name: "mass", value: mass });
        }
        if !(cell_width > 0.0) {
            return Err(ParamsError::NotPositive { name: "cell_width", value: cell_width });
        }
        let h2 = HBAR * HBAR;
        let cfg = CombConfig {
            n_sites: self.n_sites,
            cell_width,
            delta_strength: self.p * h2 / (mass * cell_width),
            delta_prime_strength: self.beta_t * h2 / mass,
            wall_left: self.u_left * h2 / (2.0 * mass * cell_width * cell_width),
            wall_right: self.u_right * h2 / (2.0 * mass * cell_width * cell_width),
            mass,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Maps a physical comb onto its dimensionless parameters.
pub fn nondimensionalize(config: &CombConfig) -> Result<DimensionlessConfig, ParamsError> {
    config.validate()?;
    let h2 = HBAR * HBAR;
    let l = config.cell_width;
    let m = config.mass;
    DimensionlessConfig::new(
        config.n_sites,
        m * config.delta_strength * l / h2,
        m * config.delta_prime_strength / h2,
        2.0 * m * config.wall_left * l * l / h2,
        2.0 * m * config.wall_right * l * l / h2,
    )
}

/// `gamma(beta_t) = (1 + beta_t) / (1 - beta_t)`.
///
/// Satisfies `gamma(0) = 1` and `gamma(-b) = 1/gamma(b)`; singular at
/// `beta_t = 1`.
pub fn gamma(beta_t: f64) -> Result<f64, ParamsError> {
    if (1.0 - beta_t).abs() <= BETA_SINGULAR_TOL {
        return Err(ParamsError::BetaSingular(beta_t));
    }
    Ok((1.0 + beta_t) / (1.0 - beta_t))
}

/// One point on the dimensionless energy axis.
///
/// `xi` caches `sqrt(eps)`; `kappa_bar` is `sqrt(u - eps)` for the wall
/// height the point was constructed against, present only when `eps <= u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyPoint {
    pub eps: f64,
    pub xi: f64,
    pub kappa_bar: Option<f64>,
}

impl EnergyPoint {
    /// Point without wall information (dispersion-only use).
    pub fn new(eps: f64) -> Result<Self, ParamsError> {
        if !(eps >= 0.0) || !eps.is_finite() {
            return Err(ParamsError::NotFinite { name: "eps", value: eps });
        }
        Ok(Self { eps, xi: eps.sqrt(), kappa_bar: None })
    }

    /// Point with the decay rate against a wall of height `u` attached.
    pub fn with_wall(eps: f64, u: f64) -> Result<Self, ParamsError> {
        let mut point = Self::new(eps)?;
        if !(u >= 0.0) || !u.is_finite() {
            return Err(ParamsError::NegativeWall { name: "u", value: u });
        }
        if eps <= u {
            point.kappa_bar = Some((u - eps).sqrt());
        }
        Ok(point)
    }

    /// Constructs from `xi = k0 l`; `eps = xi^2` is then exact by construction.
    pub fn from_xi(xi: f64) -> Result<Self, ParamsError> {
        if !(xi >= 0.0) || !xi.is_finite() {
            return Err(ParamsError::NotFinite { name: "xi", value: xi });
        }
        Ok(Self { eps: xi * xi, xi, kappa_bar: None })
    }
}
