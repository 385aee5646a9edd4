//! Derivative-free root bracketing with pole skipping, and adaptive quadrature.
//!
//! Bisection is used everywhere instead of a superlinear method: the residuals
//! this crate feeds in have poles interleaved with roots, and bracketing with
//! pole exclusion stays robust there.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("need at least 2 samples (got {0})")]
    TooFewSamples(usize),
    #[error("tolerance must be positive (got {0})")]
    InvalidTolerance(f64),
    #[error("integration did not converge after depth {depth}; worst subinterval [{lo}, {hi}]")]
    QuadratureDepthExceeded { depth: usize, lo: f64, hi: f64 },
}

/// A sign-change bracket refined to `|hi - lo| <= tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketedRoot {
    /// Lower end of the final bracket.
    pub lo: f64,
    /// Upper end of the final bracket.
    pub hi: f64,
    /// Midpoint of the final bracket.
    pub refined: f64,
    /// Function value at `refined`.
    pub f_at_refined: f64,
}

/// Samples `f` on `n_samples + 1` uniform points of `[lo, hi]`, brackets sign
/// changes, and bisects each bracket to width `tol`.
///
/// `f` returns `None` to mark a pole; intervals touching a pole-marked sample
/// are skipped. Brackets produced by a sign flip *across* an unmarked pole
/// (tan-like residuals) are rejected after refinement: a bisection limit where
/// `|f|` grew instead of collapsing is a pole, not a root. Output is ordered
/// by `lo`; an empty list is a valid result.
pub fn bracket_and_bisect<F>(
    f: F,
    lo: f64,
    hi: f64,
    n_samples: usize,
    tol: f64,
) -> Result<Vec<BracketedRoot>, NumericsError>
where
    F: Fn(f64) -> Option<f64>,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(NumericsError::InvalidInterval { lo, hi });
    }
    if n_samples < 2 {
        return Err(NumericsError::TooFewSamples(n_samples));
    }
    if !(tol > 0.0) {
        return Err(NumericsError::InvalidTolerance(tol));
    }

    let step = (hi - lo) / n_samples as f64;
    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None; // (x, f(x)) at last valid sample

    for i in 0..=n_samples {
        let x = if i == n_samples { hi } else { lo + step * i as f64 };
        let fx = match f(x) {
            Some(v) if v.is_finite() => v,
            _ => {
                prev = None; // pole or non-finite sample: break the chain
                continue;
            }
        };
        if fx == 0.0 {
            roots.push(BracketedRoot { lo: x, hi: x, refined: x, f_at_refined: 0.0 });
            prev = Some((x, fx));
            continue;
        }
        if let Some((x0, f0)) = prev {
            if f0.signum() != fx.signum() {
                if let Some(root) = bisect(&f, x0, f0, x, fx, tol) {
                    roots.push(root);
                }
            }
        }
        prev = Some((x, fx));
    }

    roots.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    Ok(roots)
}

/// Bisects a single bracket; returns `None` when the limit point behaves like
/// a pole (marker hit, or `|f|` at the limit exceeds the entry values).
fn bisect<F>(f: &F, mut lo: f64, mut flo: f64, mut hi: f64, fhi: f64, tol: f64) -> Option<BracketedRoot>
where
    F: Fn(f64) -> Option<f64>,
{
    let entry_scale = flo.abs().max(fhi.abs());
    let mut fmid = 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval below floating-point resolution
        }
        fmid = f(mid)?;
        if fmid == 0.0 {
            return Some(BracketedRoot { lo: mid, hi: mid, refined: mid, f_at_refined: 0.0 });
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    let refined = 0.5 * (lo + hi);
    // a genuine root has |f| collapsing toward the limit; across a pole it blows up
    if fmid.abs() > entry_scale {
        return None;
    }
    Some(BracketedRoot { lo, hi, refined, f_at_refined: f(refined).unwrap_or(fmid) })
}

/// Adaptive Simpson integration of a smooth `f` on `[a, b]` to relative
/// tolerance `rel_tol`, verified by interval halving. Fails after depth 40.
pub fn adaptive_integrate<F>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> f64,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(NumericsError::InvalidInterval { lo: a, hi: b });
    }
    if !(rel_tol > 0.0) {
        return Err(NumericsError::InvalidTolerance(rel_tol));
    }
    const MAX_DEPTH: usize = 40;
    // crude magnitude estimate to turn the relative tolerance into an absolute one
    let n0 = 16;
    let h = (b - a) / n0 as f64;
    let mut scale = 0.0f64;
    for i in 0..=n0 {
        scale = scale.max(f(a + h * i as f64).abs());
    }
    let abs_tol = rel_tol * (scale * (b - a)).max(f64::MIN_POSITIVE);

    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    simpson_recurse(&f, a, b, fa, fm, fb, whole, abs_tol, MAX_DEPTH)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_recurse<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    abs_tol: f64,
    depth: usize,
) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * abs_tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(NumericsError::QuadratureDepthExceeded { depth: 40, lo: a, hi: b });
    }
    let l = simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * abs_tol, depth - 1)?;
    let r = simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * abs_tol, depth - 1)?;
    Ok(l + r)
}
