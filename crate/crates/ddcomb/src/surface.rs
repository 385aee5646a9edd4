//! Surface (Tamm) states: bound states inside gaps, located by two
//! independent analytic equations plus the brute-force determinant route.
//!
//! With equal walls (`u_left = u_right = u`), `q = kappa_bar / xi`, and
//! `a = cos(xi) + q sin(xi)`, the two residual functions are
//!
//! - classical matching form, built from the pair
//!   `eta(g) = sin(lambda) / (g a - cos(lambda))` and
//!   `eta(1/g) = g sin(lambda) / (a - g cos(lambda))` with `g = gamma`:
//!
//!   ```text
//!   ctg((N+1) lambda) = (eta(g) eta(1/g) - 1) / (eta(g) + eta(1/g))
//!   ```
//!
//! - impedance form, using the cell combination `Omega = -p / xi`:
//!
//!   ```text
//!   sin(lambda) ctg((N+1) lambda) - cos(lambda)
//!       = (1 - bt^2)/2 * [(q^2 - 1) sin(xi) + 2 q cos(xi)]
//!         / [Omega - (1 + bt^2) q]
//!   ```
//!
//! The denominator `Omega - (1 + bt^2) q` is pinned by requiring the two
//! equations to have identical root sets: eliminating `cos(lambda)` through
//! the dispersion relation turns the classical equation into exactly the
//! impedance form above (both sides reduce to `gamma (1 - a^2) /
//! [(1 + gamma^2) a - 2 gamma cos(lambda)]`), and any other coefficient on
//! `q` breaks the equivalence at order `bt^2`. The cross-method and oracle
//! agreement tests re-verify this numerically.
//!
//! Inside a gap the Bloch phase is `sigma*pi + i*mu`, which makes the
//! classical bracket purely imaginary and the impedance bracket purely real;
//! each residual returns its real-valued component and checks that the
//! orthogonal component stays at roundoff level.

use num_complex::Complex64;
use thiserror::Error;

use crate::dispersion::{bloch_phase, BandStructure, BlochPhase};
use crate::numerics::{bracket_and_bisect, BracketedRoot};
use crate::oracle;
use crate::params::{DimensionlessConfig, EnergyPoint};

/// Denominator magnitude below which an eta value or a residual is treated as
/// a pole marker rather than a number.
pub const POLE_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurfaceError {
    #[error("analytic surface-state equations need equal walls (u_left={0}, u_right={1})")]
    WallsNotEqual(f64, f64),
    #[error("energy {0} is not below the wall height {1}")]
    EnergyAboveWall(f64, f64),
    #[error("energy {0} is not inside a gap")]
    NotInGap(f64),
    #[error("eta pole: denominator magnitude {0:e} below {POLE_TOL:e}")]
    EtaPole(f64),
    #[error("residual pole: denominator magnitude {0:e} below {POLE_TOL:e}")]
    ResidualPole(f64),
    #[error("residual reality check failed: off-component {0:e}")]
    RealityCheckFailed(f64),
    #[error("band structure scanned to eps_max={eps_max} but the wall height is {wall}")]
    BandsAboveWall { eps_max: f64, wall: f64 },
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
}

/// How a surface state was located.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Classical,
    Impedance,
    Oracle,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::Classical => write!(f, "classical"),
            Method::Impedance => write!(f, "impedance"),
            Method::Oracle => write!(f, "oracle"),
        }
    }
}

/// Reading of the wall-decay combination in the impedance equation: per cell
/// width (`kappa_bar / xi`, the reading consistent with the classical form)
/// or per system width (`(N+1) kappa_bar / xi`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KappaReading {
    Cell,
    System,
}

impl Default for KappaReading {
    fn default() -> Self {
        KappaReading::Cell
    }
}

/// A located bound state inside a gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceState {
    /// Dimensionless state energy.
    pub eps: f64,
    /// `sqrt(eps)`.
    pub xi: f64,
    /// Bloch phase at the state energy (gap regime).
    pub lambda: BlochPhase,
    /// 1-based index of the hosting gap.
    pub gap_index: usize,
    pub method: Method,
    /// Residual of the locating equation at `eps`.
    pub residual: f64,
}

/// The pair `eta(gamma)`, `eta(gamma^-1)`, reduced to real values.
///
/// In a band the eta values are real as written; in a gap they are purely
/// imaginary and the stored value is the imaginary part. At `beta_t = 0`
/// (`gamma = 1`) the two components coincide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaPair {
    pub eta_g: f64,
    pub eta_ginv: f64,
}

fn symmetric_wall(cfg: &DimensionlessConfig) -> Result<f64, SurfaceError> {
    cfg.symmetric_wall().ok_or(SurfaceError::WallsNotEqual(cfg.u_left, cfg.u_right))
}

fn kappa_over_xi(e: &EnergyPoint, u: f64) -> Result<f64, SurfaceError> {
    if e.eps >= u {
        return Err(SurfaceError::EnergyAboveWall(e.eps, u));
    }
    let kb = match e.kappa_bar {
        Some(kb) => kb,
        None => (u - e.eps).sqrt(),
    };
    Ok(kb / e.xi)
}

/// Complex cotangent with the large-argument guard `ctg(x + iy) -> -i sign(y)`.
fn cot(z: Complex64) -> Complex64 {
    if z.im.abs() > 300.0 {
        return Complex64::new(0.0, -z.im.signum());
    }
    z.cos() / z.sin()
}

/// Complex eta pair at one gap (or band) energy; building block of the
/// classical residual.
fn eta_complex(
    e: &EnergyPoint,
    cfg: &DimensionlessConfig,
    lam: &BlochPhase,
) -> Result<(Complex64, Complex64), SurfaceError> {
    let u = symmetric_wall(cfg)?;
    let q = kappa_over_xi(e, u)?;
    let g = cfg.gamma();
    let a = e.xi.cos() + q * e.xi.sin();
    let sin_l = lam.lambda.sin();
    let cos_l = lam.lambda.cos();
    let den_g = g * a - cos_l;
    if den_g.norm() < POLE_TOL {
        return Err(SurfaceError::EtaPole(den_g.norm()));
    }
    let den_ginv = a - g * cos_l;
    if den_ginv.norm() < POLE_TOL {
        return Err(SurfaceError::EtaPole(den_ginv.norm()));
    }
    Ok((sin_l / den_g, g * sin_l / den_ginv))
}

/// Real-valued eta pair; see [`EtaPair`] for the reduction convention.
pub fn eta_pair(
    e: &EnergyPoint,
    cfg: &DimensionlessConfig,
    lam: &BlochPhase,
) -> Result<EtaPair, SurfaceError> {
    let (eta_g, eta_ginv) = eta_complex(e, cfg, lam)?;
    if lam.is_gap() {
        for eta in [eta_g, eta_ginv] {
            let off = eta.re.abs();
            if off > 1e-10 * eta.im.abs().max(1.0) {
                return Err(SurfaceError::RealityCheckFailed(off));
            }
        }
        Ok(EtaPair { eta_g: eta_g.im, eta_ginv: eta_ginv.im })
    } else {
        Ok(EtaPair { eta_g: eta_g.re, eta_ginv: eta_ginv.re })
    }
}

/// Residual of the classical matching equation at a gap energy.
///
/// The complex bracket `ctg((N+1) lambda) - (eta_g eta_ginv - 1) /
/// (eta_g + eta_ginv)` is purely imaginary on the `Im(lambda) >= 0` branch;
/// the imaginary component is returned and the real component is checked to
/// vanish to 1e-9.
pub fn classical_residual(e: &EnergyPoint, cfg: &DimensionlessConfig) -> Result<f64, SurfaceError> {
    let lam = bloch_phase(e, cfg);
    if !lam.is_gap() {
        return Err(SurfaceError::NotInGap(e.eps));
    }
    let (eta_g, eta_ginv) = eta_complex(e, cfg, &lam)?;
    let den = eta_g + eta_ginv;
    if den.norm() < POLE_TOL {
        return Err(SurfaceError::ResidualPole(den.norm()));
    }
    let n1 = (cfg.n_sites + 1) as f64;
    let bracket = cot(n1 * lam.lambda) - (eta_g * eta_ginv - 1.0) / den;
    let off = bracket.re.abs();
    if off > 1e-9 * bracket.im.abs().max(1.0) {
        return Err(SurfaceError::RealityCheckFailed(off));
    }
    Ok(bracket.im)
}

/// Residual of the impedance-form equation at a gap energy.
///
/// Real on the gap branch; the imaginary component is checked to vanish to
/// 1e-9. `reading` selects the per-cell or per-system-width interpretation of
/// the wall-decay combination (per-cell is the default and the one whose
/// roots coincide with the classical equation).
pub fn impedance_residual(
    e: &EnergyPoint,
    cfg: &DimensionlessConfig,
    reading: KappaReading,
) -> Result<f64, SurfaceError> {
    let lam = bloch_phase(e, cfg);
    if !lam.is_gap() {
        return Err(SurfaceError::NotInGap(e.eps));
    }
    let u = symmetric_wall(cfg)?;
    let mut q = kappa_over_xi(e, u)?;
    if reading == KappaReading::System {
        q *= (cfg.n_sites + 1) as f64;
    }
    let b2 = cfg.beta_t * cfg.beta_t;
    let omega = -cfg.p / e.xi;
    let den = omega - (1.0 + b2) * q;
    if den.abs() < POLE_TOL {
        return Err(SurfaceError::ResidualPole(den.abs()));
    }
    let n1 = (cfg.n_sites + 1) as f64;
    let lhs = lam.lambda.sin() * cot(n1 * lam.lambda) - lam.lambda.cos();
    let rhs = 0.5 * (1.0 - b2) * ((q * q - 1.0) * e.xi.sin() + 2.0 * q * e.xi.cos()) / den;
    let bracket = lhs - rhs;
    let off = bracket.im.abs();
    if off > 1e-9 * bracket.re.abs().max(1.0) {
        return Err(SurfaceError::RealityCheckFailed(off));
    }
    Ok(bracket.re)
}

/// Bound-state condition by direct impedance propagation, the closed
/// equations bypassed entirely: the right-tail impedance `i q z0` is carried
/// backward through all `N` cells and the final bare flight, and compared
/// with the left-tail value `-i q z0`. Returns the mismatch of the scaled
/// imaginary part; zero exactly at bound states.
pub fn shooting_residual(e: &EnergyPoint, cfg: &DimensionlessConfig) -> Result<f64, SurfaceError> {
    use crate::cell::propagate_impedance_projective;
    let u = symmetric_wall(cfg)?;
    let q = kappa_over_xi(e, u)?;
    let z0 = e.xi;
    let mut pair = (Complex64::new(0.0, q * z0), Complex64::new(1.0, 0.0));
    for _ in 0..cfg.n_sites {
        pair = propagate_impedance_projective(pair, e, cfg)
            .map_err(|_| SurfaceError::EnergyAboveWall(e.eps, u))?;
        // keep the homogeneous pair at unit scale
        let norm = pair.0.norm().max(pair.1.norm());
        if norm > 0.0 {
            pair = (pair.0 / norm, pair.1 / norm);
        }
    }
    // backward bare flight across the siteless first region
    let c = Complex64::new(e.xi.cos(), 0.0);
    let s = Complex64::new(0.0, e.xi.sin());
    let (n, d) = pair;
    let pair = (c * n - s * d * z0, (c * d - s * n / z0) * 1.0);
    if pair.1.norm() < POLE_TOL * pair.0.norm().max(1.0) {
        return Err(SurfaceError::ResidualPole(pair.1.norm()));
    }
    let t_left = pair.0 / pair.1 / z0;
    Ok(t_left.im + q)
}

/// Search controls for [`find_surface_states`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Residual samples per gap.
    pub samples_per_gap: usize,
    /// Bisection tolerance in energy.
    pub refine_tol: f64,
    pub kappa_reading: KappaReading,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { samples_per_gap: 2000, refine_tol: 1e-12, kappa_reading: KappaReading::Cell }
    }
}

/// Locates every surface state in every gap of `bands`, by the requested
/// method. An empty result is valid (a gap may hold no state).
pub fn find_surface_states(
    cfg: &DimensionlessConfig,
    bands: &BandStructure,
    method: Method,
    options: &SearchOptions,
) -> Result<Vec<SurfaceState>, SurfaceError> {
    let wall = match method {
        Method::Oracle => cfg.min_wall(),
        _ => symmetric_wall(cfg)?,
    };
    if bands.eps_max > wall * (1.0 + 1e-12) {
        return Err(SurfaceError::BandsAboveWall { eps_max: bands.eps_max, wall });
    }

    let mut states = Vec::new();
    for (idx, gap) in bands.gaps.iter().enumerate() {
        let gap_index = idx + 1;
        let hi = gap.hi.min(wall);
        if !(gap.lo < hi) {
            continue;
        }
        // reference log-magnitude so determinant values bracket without
        // overflow and carry root residuals on a meaningful scale
        let det_log_ref = if method == Method::Oracle {
            let mut logs: Vec<f64> = (1..18)
                .filter_map(|i| {
                    let eps = gap.lo + (hi - gap.lo) * i as f64 / 18.0;
                    let e = EnergyPoint::new(eps).ok()?;
                    let d = oracle::matching_determinant(&e, cfg).ok()?;
                    (d.sign != 0.0).then_some(d.log_abs)
                })
                .collect();
            logs.sort_by(f64::total_cmp);
            logs.get(logs.len() / 2).copied().unwrap_or(0.0)
        } else {
            0.0
        };
        let eval = |eps: f64| -> Option<f64> {
            let e = EnergyPoint::with_wall(eps, wall).ok()?;
            match method {
                Method::Classical => classical_residual(&e, cfg).ok(),
                Method::Impedance => impedance_residual(&e, cfg, options.kappa_reading).ok(),
                Method::Oracle => {
                    let d = oracle::matching_determinant(&e, cfg).ok()?;
                    if d.sign == 0.0 {
                        Some(0.0)
                    } else {
                        Some(d.sign * (d.log_abs - det_log_ref).clamp(-745.0, 700.0).exp())
                    }
                }
            }
        };
        let roots = bracket_and_bisect(eval, gap.lo, hi, options.samples_per_gap, options.refine_tol)
            .map_err(|_| SurfaceError::NotInGap(gap.lo))?;
        for root in roots {
            states.push(state_from_root(cfg, &root, gap_index, method));
        }
    }
    states.sort_by(|a, b| (a.gap_index, a.eps).partial_cmp(&(b.gap_index, b.eps)).unwrap());
    Ok(states)
}

fn state_from_root(
    cfg: &DimensionlessConfig,
    root: &BracketedRoot,
    gap_index: usize,
    method: Method,
) -> SurfaceState {
    let e = EnergyPoint::new(root.refined).expect("refined root is a valid energy");
    SurfaceState {
        eps: root.refined,
        xi: e.xi,
        lambda: bloch_phase(&e, cfg),
        gap_index,
        method,
        residual: root.f_at_refined,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::find_bands;
    use crate::params::DimensionlessConfig;

    fn cfg(n: usize, p: f64, beta_t: f64, u: f64) -> DimensionlessConfig {
        DimensionlessConfig::symmetric(n, p, beta_t, u).unwrap()
    }

    fn reference() -> DimensionlessConfig {
        cfg(3, 1.0, 0.0, 50.0)
    }

    fn mid_first_gap(c: &DimensionlessConfig) -> f64 {
        let bands = find_bands(c, c.u_left, 4000).unwrap();
        bands.gaps[0].midpoint()
    }

    #[test]
    fn eta_values_coincide_at_zero_beta() {
        let c = reference();
        let eps = mid_first_gap(&c);
        let e = EnergyPoint::with_wall(eps, 50.0).unwrap();
        let lam = bloch_phase(&e, &c);
        let pair = eta_pair(&e, &c, &lam).unwrap();
        assert_eq!(pair.eta_g, pair.eta_ginv);
        assert!(pair.eta_g.is_finite());
    }

    #[test]
    fn eta_is_real_in_band_and_reduced_in_gap() {
        let c = cfg(3, 1.0, 0.2, 50.0);
        // band point
        let e = EnergyPoint::with_wall(1.0, 50.0).unwrap();
        let lam = bloch_phase(&e, &c);
        assert!(!lam.is_gap());
        let pair = eta_pair(&e, &c, &lam).unwrap();
        assert!(pair.eta_g.is_finite() && pair.eta_ginv.is_finite());
        // gap point: the complex eta is purely imaginary, the reduced pair real
        let eps = mid_first_gap(&c);
        let e = EnergyPoint::with_wall(eps, 50.0).unwrap();
        let lam = bloch_phase(&e, &c);
        let (cg, cgi) = eta_complex(&e, &c, &lam).unwrap();
        assert!(cg.re.abs() < 1e-10 * cg.im.abs().max(1.0));
        assert!(cgi.re.abs() < 1e-10 * cgi.im.abs().max(1.0));
        let pair = eta_pair(&e, &c, &lam).unwrap();
        assert_eq!(pair.eta_g, cg.im);
        assert_eq!(pair.eta_ginv, cgi.im);
    }

    #[test]
    fn beta_negation_swaps_eta_pair() {
        for (p, b, n) in [(1.0, 0.2, 3), (2.0, -0.4, 5), (0.5, 0.35, 2)] {
            let plus = cfg(n, p, b, 60.0);
            let minus = cfg(n, p, -b, 60.0);
            let bands = find_bands(&plus, 60.0, 4000).unwrap();
            for gap in &bands.gaps {
                let eps = gap.midpoint();
                let e = EnergyPoint::with_wall(eps, 60.0).unwrap();
                let lam_p = bloch_phase(&e, &plus);
                let lam_m = bloch_phase(&e, &minus);
                let fwd = eta_pair(&e, &plus, &lam_p).unwrap();
                let rev = eta_pair(&e, &minus, &lam_m).unwrap();
                assert!((fwd.eta_g - rev.eta_ginv).abs() < 1e-13 * fwd.eta_g.abs().max(1.0));
                assert!((fwd.eta_ginv - rev.eta_g).abs() < 1e-13 * fwd.eta_ginv.abs().max(1.0));
            }
        }
    }

    #[test]
    fn residuals_reject_band_energies() {
        let c = reference();
        let e = EnergyPoint::with_wall(1.0, 50.0).unwrap();
        assert!(matches!(classical_residual(&e, &c), Err(SurfaceError::NotInGap(_))));
        assert!(matches!(
            impedance_residual(&e, &c, KappaReading::Cell),
            Err(SurfaceError::NotInGap(_))
        ));
    }

    #[test]
    fn residuals_require_equal_walls() {
        let c = DimensionlessConfig::new(3, 1.0, 0.0, 50.0, 60.0).unwrap();
        let bands = find_bands(&c, 50.0, 4000).unwrap();
        let eps = bands.gaps[0].midpoint();
        let e = EnergyPoint::with_wall(eps, 50.0).unwrap();
        assert!(matches!(classical_residual(&e, &c), Err(SurfaceError::WallsNotEqual(_, _))));
    }

    #[test]
    fn both_equations_reduce_to_the_same_dirac_form_at_zero_beta() {
        // at beta_t = 0 both residuals must vanish on the same set; compare
        // against the explicit gamma = 1 forms
        let c = reference();
        let bands = find_bands(&c, 50.0, 4000).unwrap();
        let gap = &bands.gaps[0];
        for i in 1..40 {
            let eps = gap.lo + gap.width() * i as f64 / 40.0;
            let e = EnergyPoint::with_wall(eps, 50.0).unwrap();
            let lam = bloch_phase(&e, &c);
            let q = (50.0 - eps).sqrt() / e.xi;
            let a = e.xi.cos() + q * e.xi.sin();
            // gamma = 1 classical bracket
            let sin_l = lam.lambda.sin();
            let cos_l = lam.lambda.cos();
            let eta = sin_l / (a - cos_l);
            let want = (cot(4.0 * lam.lambda) - (eta * eta - 1.0) / (2.0 * eta)).im;
            let got = classical_residual(&e, &c).unwrap();
            assert!((got - want).abs() < 1e-12 * want.abs().max(1.0));
            // beta = 0 impedance form with Omega = -p/xi
            let omega = -c.p / e.xi;
            let lhs = sin_l * cot(4.0 * lam.lambda) - cos_l;
            let rhs = 0.5 * ((q * q - 1.0) * e.xi.sin() + 2.0 * q * e.xi.cos()) / (omega - q);
            let want_imp = (lhs - rhs).re;
            let got_imp = impedance_residual(&e, &c, KappaReading::Cell).unwrap();
            assert!((got_imp - want_imp).abs() < 1e-12 * want_imp.abs().max(1.0));
        }
    }

    #[test]
    fn classical_root_matches_oracle_on_reference_comb() {
        let c = reference();
        let bands = find_bands(&c, 50.0, 4000).unwrap();
        let states =
            find_surface_states(&c, &bands, Method::Classical, &SearchOptions::default()).unwrap();
        assert!(!states.is_empty(), "first gap should hold a state");
        for s in &states {
            let oracle_eps = oracle::confirm_root(&c, s.eps, 1e-3).unwrap();
            let oracle_eps = oracle_eps.expect("oracle zero near analytic root");
            assert!(
                (s.eps - oracle_eps).abs() < 1e-7,
                "gap {}: {} vs oracle {}",
                s.gap_index,
                s.eps,
                oracle_eps
            );
        }
    }

    #[test]
    fn classical_and_impedance_roots_agree_off_zero_beta() {
        let c = cfg(3, 1.0, 0.2, 50.0);
        let bands = find_bands(&c, 50.0, 4000).unwrap();
        let opts = SearchOptions::default();
        let classical = find_surface_states(&c, &bands, Method::Classical, &opts).unwrap();
        let impedance = find_surface_states(&c, &bands, Method::Impedance, &opts).unwrap();
        assert_eq!(classical.len(), impedance.len());
        assert!(!classical.is_empty());
        for (a, b) in classical.iter().zip(&impedance) {
            assert!((a.eps - b.eps).abs() < 1e-7, "{} vs {}", a.eps, b.eps);
        }
        // and both agree with the determinant oracle to 1e-6
        for s in &classical {
            let oracle_eps = oracle::confirm_root(&c, s.eps, 1e-3).unwrap().unwrap();
            assert!((s.eps - oracle_eps).abs() < 1e-6);
        }
    }

    #[test]
    fn shooting_route_confirms_the_same_roots() {
        let c = cfg(3, 1.0, 0.2, 50.0);
        let bands = find_bands(&c, 50.0, 4000).unwrap();
        let states =
            find_surface_states(&c, &bands, Method::Classical, &SearchOptions::default()).unwrap();
        assert!(!states.is_empty());
        for s in &states {
            let gap = bands.gap(s.gap_index).unwrap();
            let f = |eps: f64| {
                let e = EnergyPoint::with_wall(eps, 50.0).ok()?;
                shooting_residual(&e, &c).ok()
            };
            let roots =
                bracket_and_bisect(f, gap.lo, gap.hi.min(50.0), 2000, 1e-12).unwrap();
            let nearest = roots
                .iter()
                .map(|r| r.refined)
                .min_by(|a, b| (a - s.eps).abs().total_cmp(&(b - s.eps).abs()))
                .expect("shooting route finds a root in the gap");
            assert!((nearest - s.eps).abs() < 1e-8, "{} vs shooting {}", s.eps, nearest);
        }
    }

    #[test]
    fn free_comb_has_no_gaps_and_no_states() {
        let c = cfg(3, 0.0, 0.0, 50.0);
        let bands = find_bands(&c, 50.0, 4000).unwrap();
        assert!(bands.gaps.is_empty());
        let states =
            find_surface_states(&c, &bands, Method::Classical, &SearchOptions::default()).unwrap();
        assert!(states.is_empty());
    }

    #[test]
    fn states_lie_strictly_inside_their_gap_and_below_wall() {
        let c = cfg(4, 1.5, -0.3, 60.0);
        let bands = find_bands(&c, 60.0, 4000).unwrap();
        for method in [Method::Classical, Method::Impedance, Method::Oracle] {
            let states =
                find_surface_states(&c, &bands, method, &SearchOptions::default()).unwrap();
            for s in &states {
                let gap = bands.gap(s.gap_index).unwrap();
                assert!(gap.contains(s.eps), "{method} state {} outside gap", s.eps);
                assert!(s.eps < c.min_wall());
                assert!(s.lambda.is_gap());
                assert!(s.residual.abs() < 1e-9, "{method} residual {}", s.residual);
            }
        }
    }

    #[test]
    fn root_sets_coincide_at_zero_beta_to_tight_tolerance() {
        let c = reference();
        let bands = find_bands(&c, 50.0, 4000).unwrap();
        let opts = SearchOptions::default();
        let classical = find_surface_states(&c, &bands, Method::Classical, &opts).unwrap();
        let impedance = find_surface_states(&c, &bands, Method::Impedance, &opts).unwrap();
        assert_eq!(classical.len(), impedance.len());
        for (a, b) in classical.iter().zip(&impedance) {
            assert!((a.eps - b.eps).abs() < 1e-10);
        }
    }

    #[test]
    fn large_comb_roots_form_cauchy_sequence_in_n() {
        // in a long comb the first-gap level is a near-degenerate pair (one
        // state per wall) straddling the semi-infinite-comb energy; the pair
        // midpoint converges geometrically in N, through 1e-8 around N = 45
        let u = 50.0;
        let midpoint_at = |n: usize| -> f64 {
            let c = cfg(n, 1.0, 0.0, u);
            let bands = find_bands(&c, u, 4000).unwrap();
            let gap = bands.gaps[0];
            // fine windowed search; the pair split shrinks like e^{-N mu}
            let lo = 9.20f64.max(gap.lo);
            let hi = 9.35f64.min(gap.hi);
            let f = |eps: f64| {
                let e = EnergyPoint::with_wall(eps, u).ok()?;
                classical_residual(&e, &c).ok()
            };
            let roots =
                crate::numerics::bracket_and_bisect(f, lo, hi, 60_000, 1e-13).unwrap();
            match roots.len() {
                1 => roots[0].refined,
                2 => 0.5 * (roots[0].refined + roots[1].refined),
                k => panic!("{k} roots in the tracking window at N={n}"),
            }
        };
        let mids: Vec<f64> = (40..=46).map(midpoint_at).collect();
        let drifts: Vec<f64> = mids.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        for pair in drifts.windows(2) {
            assert!(pair[1] < 0.8 * pair[0], "drift not contracting: {drifts:?}");
        }
        assert!(
            *drifts.last().unwrap() < 1e-8,
            "drift at the last step: {drifts:?}"
        );
    }
}
