//! Bridges between the canonical mixed-CSS family and dyad states.

use num_complex::Complex;

use crate::analytic::{mixture_fidelity, normalization, CssParams, MixedCss};
use crate::error::{invalid, CssError, Result};
use crate::oracle::state::{DyadState, DyadTerm, MERGE_TOLERANCE};
use crate::scalar::Real;

/// Residual bound (Hilbert-Schmidt norm) for [`extract_fraction`].
pub const FAMILY_RESIDUAL_TOLERANCE: f64 = 1e-9;
/// Allowed deviation of a physical state's trace from one.
pub const TRACE_TOLERANCE: f64 = 1e-9;

fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

fn dyad<T: Real>(coeff: Complex<T>, ket: Complex<T>, bra: Complex<T>) -> DyadTerm<T> {
    DyadTerm::new(coeff, vec![ket], vec![bra])
}

/// Density operator of the normalized superposition `|α⟩ + e^{iφ}|-α⟩`.
pub fn make_css<T: Real>(params: &CssParams<T>) -> Result<DyadState<T>> {
    if params.is_degenerate() {
        return Err(CssError::Degenerate {
            alpha: params.alpha().as_f64(),
            phi: params.phi().as_f64(),
        });
    }
    let a = real(params.alpha());
    let n = normalization(params).recip();
    let phase = Complex::from_polar(n, params.phi());
    let terms = vec![
        dyad(real(n), a, a),
        dyad(phase.conj(), a, -a),
        dyad(phase, -a, a),
        dyad(real(n), -a, -a),
    ];
    Ok(DyadState::from_parts(1, terms).compact())
}

/// `ρ_0(α) = (|α⟩⟨α| + |-α⟩⟨-α|) / 2`.
pub fn make_mixture<T: Real>(alpha: T) -> DyadState<T> {
    let a = real(alpha);
    let half = real(T::lit(0.5));
    DyadState::from_parts(1, vec![dyad(half, a, a), dyad(half, -a, -a)]).compact()
}

/// `p ρ_C + (1 - p) ρ_0` as a dyad state. `p` is not range-checked here so
/// that residuals can be formed for slightly out-of-range estimates.
pub fn mixed_with_weight<T: Real>(params: &CssParams<T>, p: T) -> Result<DyadState<T>> {
    let css = make_css(params)?.scaled(real(p));
    let mix = make_mixture(params.alpha()).scaled(real(T::one() - p));
    Ok(css.plus(&mix)?.compact())
}

pub fn make_mixed<T: Real>(state: &MixedCss<T>) -> Result<DyadState<T>> {
    mixed_with_weight(&state.params(), state.p())
}

fn check_physical<T: Real>(state: &DyadState<T>) -> Result<()> {
    let tr = state.trace();
    if (tr.re - T::one()).abs() > T::lit(TRACE_TOLERANCE) || tr.im.abs() > T::lit(TRACE_TOLERANCE) {
        return Err(CssError::NonPhysical {
            trace: tr.re.as_f64(),
        });
    }
    Ok(())
}

/// Recovers `p` from a single-mode state assumed to equal
/// `p ρ_C(α, φ) + (1 - p) ρ_0(α)`.
///
/// Uses `F = ⟨ψ|ρ|ψ⟩` and `F₀ = ⟨ψ|ρ_0|ψ⟩` so that `p = (F - F₀) / (1 - F₀)`,
/// then checks the Hilbert-Schmidt residual of the reconstruction.
pub fn extract_fraction<T: Real>(state: &DyadState<T>, params: &CssParams<T>) -> Result<T> {
    if state.mode_count() != 1 {
        return Err(CssError::NotSingleMode(state.mode_count()));
    }
    if params.alpha() <= T::zero() {
        return Err(invalid("alpha", params.alpha().as_f64(), "alpha > 0"));
    }
    check_physical(state)?;
    let a = real(params.alpha());
    let n = normalization(params);
    let w = real(n.sqrt().recip());
    let psi = [
        (w, vec![a]),
        (w * Complex::from_polar(T::one(), params.phi()), vec![-a]),
    ];
    let fid = state.expectation(&psi).re;
    let fid0 = mixture_fidelity(params);
    let p = (fid - fid0) / (T::one() - fid0);

    let model = mixed_with_weight(params, p)?;
    let residual = state
        .plus(&model.scaled(real(-T::one())))?
        .compact()
        .hs_norm();
    if !(residual <= T::lit(FAMILY_RESIDUAL_TOLERANCE)) {
        return Err(CssError::OutsideModelFamily {
            residual: residual.as_f64(),
            tolerance: FAMILY_RESIDUAL_TOLERANCE,
        });
    }
    Ok(p.max(T::zero()).min(T::one()))
}

/// `Tr ρ²` of a unit-trace state.
pub fn purity<T: Real>(state: &DyadState<T>) -> Result<T> {
    check_physical(state)?;
    Ok(state.trace_of_square().re)
}

/// Amplitude and relative phase of a single-mode state supported on
/// `|±a⟩`, read off its terms: `a` from any ket amplitude, the phase from the
/// `|-a⟩⟨a|` coherence. Returns phase 0 when no coherence survives.
pub fn infer_css_params<T: Real>(state: &DyadState<T>) -> Result<CssParams<T>> {
    if state.mode_count() != 1 {
        return Err(CssError::NotSingleMode(state.mode_count()));
    }
    let compact = state.compact();
    let first = compact
        .terms()
        .first()
        .ok_or(CssError::ZeroDensity { density: 0.0 })?;
    let amp = first.ket[0];
    let a = if amp.re < T::zero() { -amp } else { amp };
    let tol = T::lit(MERGE_TOLERANCE);
    let phase = compact
        .terms()
        .iter()
        .find(|t| (t.ket[0] + a).norm() <= tol && (t.bra[0] - a).norm() <= tol)
        .map(|t| t.coeff.arg())
        .unwrap_or_else(T::zero);
    CssParams::new(a.norm(), phase)
}
