//! Spectral solver for a finite periodic delta-delta' comb bounded by
//! potential steps.
//!
//! The system is `N` equally spaced zero-range sites, each combining a Dirac
//! delta of strength `alpha` (attractive for `alpha > 0`) and a delta' of
//! strength `beta`, terminated on both sides by finite potential steps. The
//! crate computes, entirely in dimensionless form:
//!
//! - the Bloch dispersion and the band/gap partition of the energy axis
//!   ([`dispersion`]),
//! - the elementary-cell transfer and impedance matrices and impedance
//!   propagation ([`cell`]),
//! - surface (Tamm) state energies inside gaps by two independent analytic
//!   equations ([`surface`]), cross-checked against a brute-force
//!   matching-determinant oracle ([`oracle`]),
//! - explicit normalized surface-state wavefunctions ([`wavefunction`]).
//!
//! The [`report`] module renders results as deterministic CSV/JSON files and
//! backs the `ddcomb` command-line tool; runnable walkthroughs for each
//! capability live in the crate's `examples/` directory.

pub mod cell;
pub mod dispersion;
pub mod numerics;
pub mod oracle;
pub mod params;
pub mod report;
pub mod surface;
pub mod wavefunction;

pub use cell::{impedance_matrix, propagate_impedance, transfer_matrix, CellMatrix, OmegaValue};
pub use dispersion::{bloch_cos, bloch_phase, find_bands, BandStructure, BlochPhase, Regime};
pub use params::{gamma, nondimensionalize, CombConfig, DimensionlessConfig, EnergyPoint};
pub use surface::{
    classical_residual, eta_pair, find_surface_states, impedance_residual, EtaPair, KappaReading,
    Method, SearchOptions, SurfaceState,
};
pub use wavefunction::{cell_coefficients, evaluate, SurfaceWavefunction, WavefunctionTable};
