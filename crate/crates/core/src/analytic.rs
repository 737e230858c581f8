//! Closed-form model of a decohered coherent-state superposition (CSS).
//!
//! The canonical state is `p ρ_C(α, φ) + (1 - p) ρ_0(α)` where
//! `ρ_C = |ψ⟩⟨ψ|` with `|ψ⟩ ∝ |α⟩ + e^{iφ}|-α⟩` and
//! `ρ_0 = (|α⟩⟨α| + |-α⟩⟨-α|) / 2`. Every operation here maps that family to
//! itself (possibly at a new amplitude and phase), so the whole protocol can
//! be tracked with three numbers.
//!
//! Quadratures follow `x_λ = (a e^{-iλ} + a† e^{iλ}) / √2`, so the vacuum
//! quadrature density is `e^{-x²} / √π`.

use crate::error::{invalid, CssError, Result};
use crate::quad;
use crate::scalar::Real;

/// Amplitude and relative phase of `|α⟩ + e^{iφ}|-α⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CssParams<T = f64> {
    alpha: T,
    phi: T,
}

impl<T: Real> CssParams<T> {
    /// Builds the parameter pair, reducing `phi` into `[0, 2π)`.
    pub fn new(alpha: T, phi: T) -> Result<Self> {
        if !alpha.is_finite() || alpha < T::zero() {
            return Err(invalid("alpha", alpha.as_f64(), "a finite value >= 0"));
        }
        if !phi.is_finite() {
            return Err(invalid("phi", phi.as_f64(), "a finite angle"));
        }
        Ok(Self {
            alpha,
            phi: phi.wrap_angle(),
        })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn phi(&self) -> T {
        self.phi
    }

    /// True when the superposition cancels to the zero vector (α = 0, φ = π).
    pub fn is_degenerate(&self) -> bool {
        normalization(self) <= T::epsilon()
    }

    pub(crate) fn ensure_non_degenerate(&self) -> Result<()> {
        if self.is_degenerate() {
            Err(CssError::Degenerate {
                alpha: self.alpha.as_f64(),
                phi: self.phi.as_f64(),
            })
        } else {
            Ok(())
        }
    }
}

/// `p ρ_C(α, φ) + (1 - p) ρ_0(α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedCss<T = f64> {
    params: CssParams<T>,
    p: T,
}

impl<T: Real> MixedCss<T> {
    pub fn new(params: CssParams<T>, p: T) -> Result<Self> {
        if !(p >= T::zero() && p <= T::one()) {
            return Err(invalid("p", p.as_f64(), "a CSS fraction in [0, 1]"));
        }
        Ok(Self { params, p })
    }

    /// A pure CSS (`p = 1`).
    pub fn pure(params: CssParams<T>) -> Self {
        Self {
            params,
            p: T::one(),
        }
    }

    pub fn params(&self) -> CssParams<T> {
        self.params
    }

    pub fn alpha(&self) -> T {
        self.params.alpha
    }

    pub fn phi(&self) -> T {
        self.params.phi
    }

    /// CSS fraction.
    pub fn p(&self) -> T {
        self.p
    }
}

/// Tapping beam splitter plus homodyne detector at λ = π/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TapSetting<T = f64> {
    transmittance: T,
    eta_h: T,
    k: T,
}

impl<T: Real> TapSetting<T> {
    /// Ideal detector (`eta_H = 1`).
    pub fn new(transmittance: T, k: T) -> Result<Self> {
        Self::with_efficiency(transmittance, T::one(), k)
    }

    pub fn with_efficiency(transmittance: T, eta_h: T, k: T) -> Result<Self> {
        check_transmittance(transmittance)?;
        if !(eta_h > T::zero() && eta_h <= T::one()) {
            return Err(invalid(
                "eta_H",
                eta_h.as_f64(),
                "a detector efficiency in (0, 1]",
            ));
        }
        if !k.is_finite() {
            return Err(invalid("k", k.as_f64(), "a finite quadrature value"));
        }
        Ok(Self {
            transmittance,
            eta_h,
            k,
        })
    }

    pub fn transmittance(&self) -> T {
        self.transmittance
    }

    /// `R = 1 - T`; always derived, never stored.
    pub fn reflectivity(&self) -> T {
        T::one() - self.transmittance
    }

    pub fn eta_h(&self) -> T {
        self.eta_h
    }

    pub fn k(&self) -> T {
        self.k
    }
}

/// Pure-loss channel of transmittance `eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSetting<T = f64> {
    eta: T,
}

impl<T: Real> ChannelSetting<T> {
    pub fn new(eta: T) -> Result<Self> {
        if !(eta > T::zero() && eta <= T::one()) {
            return Err(invalid(
                "eta",
                eta.as_f64(),
                "a channel transmittance in (0, 1]",
            ));
        }
        Ok(Self { eta })
    }

    pub fn eta(&self) -> T {
        self.eta
    }

    pub fn loss(&self) -> T {
        T::one() - self.eta
    }
}

pub(crate) fn check_transmittance<T: Real>(t: T) -> Result<()> {
    if t > T::zero() && t <= T::one() {
        Ok(())
    } else {
        Err(invalid("T", t.as_f64(), "a transmittance in (0, 1]"))
    }
}

/// `N_φ(α) = 2 (1 + cos φ e^{-2α²})`, the squared norm of `|α⟩ + e^{iφ}|-α⟩`.
pub fn normalization<T: Real>(params: &CssParams<T>) -> T {
    norm_raw(params.alpha, params.phi)
}

#[inline]
fn norm_raw<T: Real>(alpha: T, phi: T) -> T {
    let two = T::lit(2.0);
    two * (T::one() + phi.cos() * (-two * alpha * alpha).exp())
}

/// Fraction of the original CSS that survives a loss channel of
/// transmittance `eta`; the remainder is `ρ_0` at amplitude `√η α`.
pub fn loss_fraction<T: Real>(params: &CssParams<T>, eta: T) -> T {
    let two = T::lit(2.0);
    let a2 = params.alpha * params.alpha;
    let c = params.phi.cos();
    (T::one() + c * (-two * eta * a2).exp()) / (T::one() + c * (-two * a2).exp())
        * (-two * (T::one() - eta) * a2).exp()
}

/// Sends a mixed CSS through a loss channel.
///
/// `ρ_0(α)` maps to `ρ_0(√η α)`, so the surviving CSS fraction is the
/// input fraction times [`loss_fraction`].
pub fn apply_loss<T: Real>(state: &MixedCss<T>, ch: &ChannelSetting<T>) -> Result<MixedCss<T>> {
    state.params.ensure_non_degenerate()?;
    let params = CssParams {
        alpha: ch.eta.sqrt() * state.params.alpha,
        phi: state.params.phi,
    };
    let p = state.p * loss_fraction(&state.params, ch.eta);
    Ok(MixedCss {
        params,
        p: p.min(T::one()),
    })
}

/// `θ(k) = 2√(2R) α k`, the phase the homodyne outcome imprints on the
/// transmitted superposition. Not reduced modulo 2π.
pub fn theta_of_k<T: Real>(k: T, alpha: T, reflectivity: T) -> T {
    T::lit(2.0) * (T::lit(2.0) * reflectivity).sqrt() * alpha * k
}

/// Density of the outcome `k` for `ρ_0`: `e^{-k²} / √π`, independent of the
/// amplitude and the tap.
pub fn homodyne_density_mix<T: Real>(k: T) -> T {
    (-k * k).exp() / T::PI().sqrt()
}

/// Density of the outcome `k` for a pure CSS tapped at transmittance `t`.
pub fn homodyne_density_css<T: Real>(k: T, params: &CssParams<T>, t: T) -> Result<T> {
    params.ensure_non_degenerate()?;
    check_transmittance(t)?;
    let theta = theta_of_k(k, params.alpha, T::one() - t);
    let transmitted = (t * params.alpha * params.alpha).sqrt();
    Ok(homodyne_density_mix(k) * norm_raw(transmitted, params.phi + theta) / normalization(params))
}

/// `P_0 / P_C` for a homodyne phase shift `theta`. Purification succeeds iff
/// this is below one.
pub fn detection_ratio<T: Real>(params: &CssParams<T>, t: T, theta: T) -> Result<T> {
    check_transmittance(t)?;
    let num = normalization(params);
    let den = norm_raw(t.sqrt() * params.alpha, params.phi + theta);
    if den <= T::epsilon() {
        return Err(CssError::ZeroDensity {
            density: den.as_f64(),
        });
    }
    Ok(num / den)
}

/// Conditional CSS fraction after post-selection with likelihood ratio
/// `ratio = P_0 / P_C`.
pub fn purified_fraction<T: Real>(p_in: T, ratio: T) -> T {
    p_in / (p_in + ratio * (T::one() - p_in))
}

/// Result of a post-selected purification step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Purified<T = f64> {
    /// Conditional output state.
    pub state: MixedCss<T>,
    /// Outcome density for the CSS component, `P_C(k)`.
    pub density_css: T,
    /// Outcome density for the `ρ_0` component, `P_0(k)`.
    pub density_mix: T,
    /// Imprinted phase shift, unreduced.
    pub theta: T,
}

impl<T: Real> Purified<T> {
    /// Density of the outcome for the full mixed input.
    pub fn acceptance_density(&self, p_in: T) -> T {
        p_in * self.density_css + (T::one() - p_in) * self.density_mix
    }
}

/// Purification with an ideal homodyne detector conditioned on the exact
/// outcome `tap.k()`.
pub fn purify<T: Real>(state: &MixedCss<T>, tap: &TapSetting<T>) -> Result<Purified<T>> {
    if tap.eta_h != T::one() {
        return Err(invalid(
            "eta_H",
            tap.eta_h.as_f64(),
            "1 on the ideal path (use purify_with_inefficiency)",
        ));
    }
    let params = state.params;
    params.ensure_non_degenerate()?;
    let r = tap.reflectivity();
    let theta = theta_of_k(tap.k, params.alpha, r);
    let density_mix = homodyne_density_mix(tap.k);
    let density_css = homodyne_density_css(tap.k, &params, tap.transmittance)?;
    if density_css <= T::min_positive_value() {
        return Err(CssError::ZeroDensity {
            density: density_css.as_f64(),
        });
    }
    let ratio = detection_ratio(&params, tap.transmittance, theta)?;
    let out = CssParams {
        alpha: tap.transmittance.sqrt() * params.alpha,
        phi: (params.phi + theta).wrap_angle(),
    };
    Ok(Purified {
        state: MixedCss {
            params: out,
            p: purified_fraction(state.p, ratio),
        },
        density_css,
        density_mix,
        theta,
    })
}

/// Purification with a homodyne detector of efficiency `eta_H < 1`.
///
/// The detector is a loss channel of transmittance `eta_H` on the tapped
/// mode followed by an ideal projection. The loss damps the coherence between
/// `|±√R α⟩` by `D = e^{-2(1-η_H) R α²}` and shrinks the imprinted phase to
/// `2√(2 η_H R) α k`, which leaves the output inside the canonical family:
///
/// `p_out = p D N_ψ(√T α) / (p [D N_ψ(√T α) + 2(1 - D)] + (1 - p) N_φ(α))`.
pub fn purify_with_inefficiency<T: Real>(
    state: &MixedCss<T>,
    tap: &TapSetting<T>,
) -> Result<Purified<T>> {
    if tap.eta_h == T::one() {
        return purify(state, tap);
    }
    let params = state.params;
    params.ensure_non_degenerate()?;
    let two = T::lit(2.0);
    let r = tap.reflectivity();
    let a2 = params.alpha * params.alpha;
    let damping = (-two * (T::one() - tap.eta_h) * r * a2).exp();
    let theta = theta_of_k(tap.k, params.alpha, tap.eta_h * r);
    let psi = params.phi + theta;
    let transmitted = tap.transmittance.sqrt() * params.alpha;

    let n_in = normalization(&params);
    let n_out = norm_raw(transmitted, psi);
    let gauss = homodyne_density_mix(tap.k);
    // trace of the CSS branch: populations unchanged, coherence damped
    let css_weight =
        two * (T::one() + damping * psi.cos() * (-two * transmitted * transmitted).exp()) / n_in;
    let density_css = gauss * css_weight;
    if density_css <= T::min_positive_value() {
        return Err(CssError::ZeroDensity {
            density: density_css.as_f64(),
        });
    }
    let p = state.p;
    let num = p * damping * n_out;
    let den = p * (damping * n_out + two * (T::one() - damping)) + (T::one() - p) * n_in;
    Ok(Purified {
        state: MixedCss {
            params: CssParams {
                alpha: transmitted,
                phi: psi.wrap_angle(),
            },
            p: num / den,
        },
        density_css,
        density_mix: gauss,
        theta,
    })
}

/// Alternative reading of detector inefficiency: the tapped-off loss is
/// folded into an effective input channel of transmittance `T + η_H R`
/// before an ideal purifier. Kept for comparison with
/// [`purify_with_inefficiency`].
pub fn purify_effective_loss<T: Real>(
    state: &MixedCss<T>,
    tap: &TapSetting<T>,
) -> Result<Purified<T>> {
    let eta = tap.transmittance + tap.eta_h * tap.reflectivity();
    let degraded = apply_loss(state, &ChannelSetting::new(eta)?)?;
    purify(&degraded, &TapSetting::new(tap.transmittance, tap.k)?)
}

/// Arc of homodyne phase shifts for which `P_0 / P_C < 1`.
///
/// The condition reduces to `cos(φ + θ) > cos φ e^{-2Rα²}`, an open arc of
/// half-width `arccos(cos φ e^{-2Rα²})` centred on `θ = -φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessRegion<T = f64> {
    center: T,
    half_width: T,
}

impl<T: Real> SuccessRegion<T> {
    /// Optimal phase shift, in `[0, 2π)`.
    pub fn center(&self) -> T {
        self.center
    }

    pub fn half_width(&self) -> T {
        self.half_width
    }

    pub fn is_empty(&self) -> bool {
        self.half_width <= T::zero()
    }

    pub fn contains(&self, theta: T) -> bool {
        (theta - self.center).wrap_signed().abs() < self.half_width
    }

    /// Open intervals covering the region inside `[0, 2π)`, split at the
    /// wrap point and sorted by start.
    pub fn intervals(&self) -> Vec<(T, T)> {
        if self.is_empty() {
            return Vec::new();
        }
        let tau = T::TAU();
        let lo = self.center - self.half_width;
        let hi = self.center + self.half_width;
        let mut out = if lo < T::zero() {
            vec![(T::zero(), hi), (lo + tau, tau)]
        } else if hi > tau {
            vec![(T::zero(), hi - tau), (lo, tau)]
        } else {
            vec![(lo, hi)]
        };
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite endpoints"));
        out
    }
}

pub fn success_region<T: Real>(params: &CssParams<T>, reflectivity: T) -> Result<SuccessRegion<T>> {
    if params.alpha <= T::zero() {
        return Err(invalid("alpha", params.alpha.as_f64(), "alpha > 0"));
    }
    if !(reflectivity >= T::zero() && reflectivity < T::one()) {
        return Err(invalid(
            "R",
            reflectivity.as_f64(),
            "a reflectivity in [0, 1)",
        ));
    }
    let bound =
        params.phi.cos() * (-T::lit(2.0) * reflectivity * params.alpha * params.alpha).exp();
    let bound = bound.max(-T::one()).min(T::one());
    Ok(SuccessRegion {
        center: (-params.phi).wrap_angle(),
        half_width: bound.acos(),
    })
}

/// Outcome `k` of smallest magnitude whose phase shift cancels `φ`.
pub fn optimal_k<T: Real>(params: &CssParams<T>, reflectivity: T) -> Result<T> {
    if params.alpha <= T::zero() {
        return Err(invalid("alpha", params.alpha.as_f64(), "alpha > 0"));
    }
    if !(reflectivity > T::zero() && reflectivity < T::one()) {
        return Err(invalid(
            "R",
            reflectivity.as_f64(),
            "a reflectivity in (0, 1)",
        ));
    }
    let target = (-params.phi).wrap_signed();
    Ok(target / theta_of_k(T::one(), params.alpha, reflectivity))
}

/// Closed-form CSS fraction after the two-copy amplifier, `p_out^±`.
/// `plus` selects the φ = 0 branch.
pub fn amplified_fraction<T: Real>(p_in: T, alpha: T, plus: bool) -> T {
    let e = (-T::lit(2.0) * alpha * alpha).exp();
    let s = if plus { T::one() + e } else { T::one() - e };
    let q = T::one() - p_in;
    let css = (T::one() + e * e) / (s * s) * p_in * p_in;
    css / (css + T::lit(2.0) * p_in * q / s + q * q)
}

/// Two identical copies through the 50/50 amplifier heralded on a double
/// click. The output is always `ρ_C(√2 α, 0)` mixed with `ρ_0(√2 α)`.
pub fn amplify<T: Real>(state: &MixedCss<T>) -> Result<MixedCss<T>> {
    let phi = state.params.phi;
    let plus = if phi == T::zero() {
        true
    } else if (phi - T::PI()).abs() <= T::lit(4.0) * T::epsilon() {
        false
    } else {
        return Err(CssError::UnsupportedPhase { phi: phi.as_f64() });
    };
    if state.params.alpha <= T::zero() {
        return Err(invalid("alpha", state.params.alpha.as_f64(), "alpha > 0"));
    }
    Ok(MixedCss {
        params: CssParams {
            alpha: T::SQRT_2() * state.params.alpha,
            phi: T::zero(),
        },
        p: amplified_fraction(state.p, state.params.alpha, plus),
    })
}

/// `½ (e^{2α²} - 1)²`: the φ = π amplifier raises the CSS fraction iff the
/// input fraction exceeds this.
pub fn amplification_threshold<T: Real>(alpha: T) -> T {
    let g = (T::lit(2.0) * alpha * alpha).exp_m1();
    g * g / T::lit(2.0)
}

/// Two φ = 0 copies purified in parallel at `T = 1/2` with `k = 0`, then
/// amplified back to amplitude `α`. Returns the final CSS fraction.
pub fn concatenate<T: Real>(p_in: T, alpha: T) -> Result<T> {
    if !(p_in >= T::zero() && p_in <= T::one()) {
        return Err(invalid("p_in", p_in.as_f64(), "a CSS fraction in [0, 1]"));
    }
    if !(alpha > T::zero() && alpha.is_finite()) {
        return Err(invalid("alpha", alpha.as_f64(), "alpha > 0"));
    }
    let half = T::lit(0.5);
    let input = MixedCss::new(CssParams::new(alpha, T::zero())?, p_in)?;
    let purified = purify(&input, &TapSetting::new(half, T::zero())?)?;
    Ok(amplify(&purified.state)?.p)
}

/// `⟨ψ_φ(α)| ρ_0(α) |ψ_φ(α)⟩`.
pub fn mixture_fidelity<T: Real>(params: &CssParams<T>) -> T {
    let two = T::lit(2.0);
    let e = (-two * params.alpha * params.alpha).exp();
    (T::one() + two * params.phi.cos() * e + e * e) / normalization(params)
}

/// `Tr ρ²` of the canonical mixture.
pub fn purity_mixed_css<T: Real>(state: &MixedCss<T>) -> Result<T> {
    state.params.ensure_non_degenerate()?;
    let p = state.p;
    let q = T::one() - p;
    let a2 = state.params.alpha * state.params.alpha;
    let mix_purity = (T::one() + (-T::lit(4.0) * a2).exp()) / T::lit(2.0);
    Ok(p * p + q * q * mix_purity + T::lit(2.0) * p * q * mixture_fidelity(&state.params))
}

/// Probability that the outcome lands in `[k0 - half_width, k0 + half_width]`
/// for the mixed input, by adaptive quadrature of the point densities.
pub fn window_acceptance<T: Real>(
    state: &MixedCss<T>,
    tap: &TapSetting<T>,
    k0: T,
    half_width: T,
) -> Result<T> {
    if !(half_width > T::zero()) {
        return Err(invalid(
            "half_width",
            half_width.as_f64(),
            "a positive window",
        ));
    }
    state.params.ensure_non_degenerate()?;
    check_transmittance(tap.transmittance)?;
    let p = state.p;
    let params = state.params;
    let t = tap.transmittance;
    let density = |k: T| {
        let css = homodyne_density_css(k, &params, t).unwrap_or_else(|_| T::zero());
        p * css + (T::one() - p) * homodyne_density_mix(k)
    };
    Ok(quad::integrate(
        density,
        k0 - half_width,
        k0 + half_width,
        T::lit(1e-12),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn css(alpha: f64, phi: f64) -> CssParams {
        CssParams::new(alpha, phi).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn phi_is_reduced() {
        let p = css(1.0, -PI / 2.0);
        close(p.phi(), 1.5 * PI, 1e-15);
        assert!(CssParams::new(-0.1, 0.0).is_err());
        assert!(CssParams::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn normalization_values() {
        assert_eq!(normalization(&css(0.0, 0.0)), 4.0);
        assert_eq!(normalization(&css(0.0, PI)), 0.0);
        close(
            normalization(&css(1.0, 0.0)),
            2.0 * (1.0 + (-2.0f64).exp()),
            1e-15,
        );
        close(normalization(&css(1.0, 0.0)), 2.270671, 1e-6);
        assert!(css(0.0, PI).is_degenerate());
        assert!(!css(0.0, 0.0).is_degenerate());
    }

    #[test]
    fn loss_examples() {
        let s = MixedCss::pure(css(1.0, 0.0));
        let out = apply_loss(&s, &ChannelSetting::new(1.0).unwrap()).unwrap();
        assert_eq!(out.p(), 1.0);
        assert_eq!(out.alpha(), 1.0);

        let out = apply_loss(&s, &ChannelSetting::new(0.5).unwrap()).unwrap();
        close(out.p(), 0.44323, 5e-6);
        close(out.alpha(), FRAC_1_SQRT_2, 1e-15);

        let twice = apply_loss(
            &apply_loss(&s, &ChannelSetting::new(0.9).unwrap()).unwrap(),
            &ChannelSetting::new(0.9).unwrap(),
        )
        .unwrap();
        let once = apply_loss(&s, &ChannelSetting::new(0.81).unwrap()).unwrap();
        close(twice.p(), once.p(), 1e-12);
        close(twice.alpha(), once.alpha(), 1e-12);
    }

    #[test]
    fn loss_rejects_degenerate() {
        let s = MixedCss::pure(css(0.0, PI));
        assert!(matches!(
            apply_loss(&s, &ChannelSetting::new(0.5).unwrap()),
            Err(CssError::Degenerate { .. })
        ));
        assert!(ChannelSetting::new(0.0f64).is_err());
        assert!(ChannelSetting::new(1.5f64).is_err());
    }

    #[test]
    fn density_examples() {
        let e1 = (-1.0f64).exp();
        let e2 = (-2.0f64).exp();
        let v = homodyne_density_css(0.0, &css(1.0, 0.0), 0.5).unwrap();
        close(v, (1.0 + e1) / (1.0 + e2) / PI.sqrt(), 1e-15);
        close(v, 0.679749, 1e-6);
        close(
            homodyne_density_css(0.0, &css(0.0, 0.0), 0.5).unwrap(),
            0.564190,
            1e-6,
        );
        let v = homodyne_density_css(PI / 2.0, &css(1.0, PI), 0.5).unwrap();
        close(
            v,
            (-PI * PI / 4.0).exp() * (1.0 + e1) / (1.0 - e2) / PI.sqrt(),
            1e-15,
        );
        close(v, 0.0757, 5e-5);
        close(homodyne_density_mix(0.0), 0.564190, 1e-6);
        close(homodyne_density_mix(1.0), 0.207554, 1e-6);
        assert!(homodyne_density_css(0.0, &css(0.0, PI), 0.5).is_err());
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta_of_k(0.0, 1.3, 0.2), 0.0);
        close(theta_of_k(PI / 2.0, 1.0, 0.5), PI, 1e-15);
        close(theta_of_k(1.0, 1.0, 0.5), 2.0, 1e-15);
    }

    #[test]
    fn ratio_examples() {
        let e1 = (-1.0f64).exp();
        let e2 = (-2.0f64).exp();
        assert_eq!(detection_ratio(&css(1.0, 0.0), 1.0, 0.0).unwrap(), 1.0);
        close(
            detection_ratio(&css(1.0, PI), 0.5, PI).unwrap(),
            (1.0 - e2) / (1.0 + e1),
            1e-15,
        );
        close(
            detection_ratio(&css(1.0, PI), 0.5, PI).unwrap(),
            0.63212,
            5e-6,
        );
        close(
            detection_ratio(&css(1.0, 0.0), 0.5, 0.0).unwrap(),
            0.829997,
            1e-6,
        );
        // vanishing CSS density
        assert!(matches!(
            detection_ratio(&css(0.0, 0.0), 0.5, PI),
            Err(CssError::ZeroDensity { .. })
        ));
    }

    #[test]
    fn purify_reference_point() {
        let s = MixedCss::new(css(1.0, PI), 0.5).unwrap();
        let out = purify(&s, &TapSetting::new(0.5, PI / 2.0).unwrap()).unwrap();
        close(out.state.p(), 0.613, 1e-3);
        close(out.state.phi(), 0.0, 1e-12);
        close(out.state.alpha(), FRAC_1_SQRT_2, 1e-15);
    }

    #[test]
    fn purify_fixed_points_and_phi0() {
        for k in [-1.3, 0.0, 0.4, 2.2] {
            let tap = TapSetting::new(0.3, k).unwrap();
            let pure = purify(&MixedCss::pure(css(0.8, 1.0)), &tap).unwrap();
            assert_eq!(pure.state.p(), 1.0);
            let mix = purify(&MixedCss::new(css(0.8, 1.0), 0.0).unwrap(), &tap).unwrap();
            assert_eq!(mix.state.p(), 0.0);
        }
        let s = MixedCss::new(css(1.0, 0.0), 0.5).unwrap();
        let out = purify(&s, &TapSetting::new(0.5, 0.0).unwrap()).unwrap();
        let r = (1.0 + (-2.0f64).exp()) / (1.0 + (-1.0f64).exp());
        close(out.state.p(), 0.5 / (0.5 + r * 0.5), 1e-15);
        close(out.state.p(), 0.546449, 1e-6);
    }

    #[test]
    fn purify_requires_ideal_detector() {
        let s = MixedCss::new(css(1.0, PI), 0.5).unwrap();
        let tap = TapSetting::with_efficiency(0.5, 0.9, 0.0).unwrap();
        assert!(purify(&s, &tap).is_err());
        assert!(purify(
            &MixedCss::pure(css(0.0, PI)),
            &TapSetting::new(0.5, 0.0).unwrap()
        )
        .is_err());
    }

    #[test]
    fn inefficiency_reduces_to_ideal() {
        let s = MixedCss::new(css(1.2, 2.0), 0.37).unwrap();
        let tap = TapSetting::new(0.4, 0.7).unwrap();
        let a = purify(&s, &tap).unwrap();
        let b = purify_with_inefficiency(&s, &tap).unwrap();
        assert_eq!(a.state.p().to_bits(), b.state.p().to_bits());
        // closed form at eta_H slightly below one is continuous
        let c = purify_with_inefficiency(
            &s,
            &TapSetting::with_efficiency(0.4, 1.0 - 1e-12, 0.7).unwrap(),
        )
        .unwrap();
        close(a.state.p(), c.state.p(), 1e-9);
    }

    #[test]
    fn inefficiency_lowers_gain() {
        let s = MixedCss::new(css(1.0, PI), 0.5).unwrap();
        let ideal = purify(&s, &TapSetting::new(0.5, PI / 2.0).unwrap()).unwrap();
        let lossy = purify_with_inefficiency(
            &s,
            &TapSetting::with_efficiency(0.5, 0.98, PI / 2.0).unwrap(),
        )
        .unwrap();
        assert!(lossy.state.p() < ideal.state.p());
        assert!(lossy.state.p() > 0.5);
        let alt = purify_effective_loss(
            &s,
            &TapSetting::with_efficiency(0.5, 0.98, PI / 2.0).unwrap(),
        )
        .unwrap();
        assert!(alt.state.p() < ideal.state.p());
    }

    #[test]
    fn success_region_phi0() {
        let reg = success_region(&css(1.0, 0.0), 0.5).unwrap();
        let star = (-1.0f64).exp().acos();
        close(star, 1.194069, 1e-6);
        close(reg.half_width(), star, 1e-15);
        assert_eq!(reg.center(), 0.0);
        assert!(reg.contains(0.0));
        assert!(reg.contains(2.0 * PI - 0.1));
        assert!(!reg.contains(PI));
        let iv = reg.intervals();
        assert_eq!(iv.len(), 2);
        close(iv[0].1, star, 1e-15);
        close(iv[1].0, 2.0 * PI - star, 1e-15);
    }

    #[test]
    fn success_region_phipi_is_complement() {
        let zero = success_region(&css(1.0, 0.0), 0.5).unwrap();
        let pi = success_region(&css(1.0, PI), 0.5).unwrap();
        assert!(pi.contains(PI));
        for i in 0..628 {
            let th = i as f64 * 0.01 + 0.005;
            if (th.cos() - (-1.0f64).exp()).abs() > 1e-9 {
                assert_ne!(zero.contains(th), pi.contains(th), "theta = {th}");
            }
        }
        assert!(success_region(&css(0.0, 0.0), 0.5).is_err());
    }

    #[test]
    fn optimal_k_examples() {
        assert_eq!(optimal_k(&css(1.0, 0.0), 0.5).unwrap(), 0.0);
        close(optimal_k(&css(1.0, PI), 0.5).unwrap(), PI / 2.0, 1e-15);
        close(optimal_k(&css(1.0, PI), 0.125).unwrap(), PI, 1e-15);
        // smallest |k|: phi = 3π/2 needs θ = π/2, not -3π/2
        close(
            optimal_k(&css(1.0, 1.5 * PI), 0.5).unwrap(),
            PI / 4.0,
            1e-15,
        );
        close(
            optimal_k(&css(1.0, 0.5 * PI), 0.5).unwrap(),
            -PI / 4.0,
            1e-15,
        );
        assert!(optimal_k(&css(0.0, 0.0), 0.5).is_err());
        assert!(optimal_k(&css(1.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn amplify_examples() {
        let out = amplify(&MixedCss::pure(css(0.6, 0.0))).unwrap();
        assert_eq!(out.p(), 1.0);
        close(out.alpha(), 0.6 * 2f64.sqrt(), 1e-15);
        assert_eq!(out.phi(), 0.0);
        let out = amplify(&MixedCss::new(css(3.0, 0.0), 0.5).unwrap()).unwrap();
        close(out.p(), 0.25, 1e-3);
        let out = amplify(&MixedCss::new(css(3.0, PI), 0.5).unwrap()).unwrap();
        close(out.p(), 0.25, 1e-3);
        assert_eq!(out.phi(), 0.0);
        assert!(matches!(
            amplify(&MixedCss::new(css(1.0, 1.0), 0.5).unwrap()),
            Err(CssError::UnsupportedPhase { .. })
        ));
    }

    #[test]
    fn threshold_examples() {
        let a = ((2f64.sqrt() + 1.0).ln() / 2.0).sqrt();
        close(amplification_threshold(a), 1.0, 1e-12);
        close((2f64.sqrt() + 1.0).ln() / 2.0, 0.44, 0.005);
        assert!(amplification_threshold(1e-6) < 1e-20);
        close(
            amplification_threshold(0.5),
            0.5 * (0.5f64.exp() - 1.0).powi(2),
            1e-15,
        );
        close(amplification_threshold(0.5), 0.21042, 5e-6);
    }

    #[test]
    fn concatenate_examples() {
        close(concatenate(1.0, 0.7).unwrap(), 1.0, 1e-15);
        assert!(concatenate(0.5, 1.0).unwrap() < 0.5);
        assert!(concatenate(1.5, 1.0).is_err());
        assert!(concatenate(0.5, 0.0).is_err());
    }

    #[test]
    fn purity_examples() {
        close(
            purity_mixed_css(&MixedCss::pure(css(1.7, 0.0))).unwrap(),
            1.0,
            1e-15,
        );
        close(
            purity_mixed_css(&MixedCss::pure(css(0.4, 2.1))).unwrap(),
            1.0,
            1e-14,
        );
        let mix = MixedCss::new(css(3.0, 0.0), 0.0).unwrap();
        close(
            purity_mixed_css(&mix).unwrap(),
            0.5 * (1.0 + (-36.0f64).exp()),
            1e-15,
        );
        let small = purity_mixed_css(&MixedCss::new(css(0.1, 0.0), 0.1).unwrap()).unwrap();
        let large = purity_mixed_css(&MixedCss::new(css(1.0, 0.0), 0.1).unwrap()).unwrap();
        assert!(small > large);
    }

    #[test]
    fn window_acceptance_limits() {
        let s = MixedCss::new(css(1.0, PI), 0.4).unwrap();
        let tap = TapSetting::new(0.5, 0.0).unwrap();
        let total = window_acceptance(&s, &tap, 0.0, 12.0).unwrap();
        close(total, 1.0, 1e-9);
        let narrow = window_acceptance(&s, &tap, PI / 2.0, 1e-3).unwrap();
        let pt = purify(&s, &TapSetting::new(0.5, PI / 2.0).unwrap()).unwrap();
        close(narrow / 2e-3, pt.acceptance_density(0.4), 1e-6);
    }

    #[test]
    fn generic_over_f32() {
        let p = CssParams::new(1.0f32, std::f32::consts::PI).unwrap();
        let s = MixedCss::new(p, 0.5f32).unwrap();
        let out = purify(
            &s,
            &TapSetting::new(0.5f32, std::f32::consts::FRAC_PI_2).unwrap(),
        )
        .unwrap();
        assert!((out.state.p() - 0.6127).abs() < 1e-3);
    }
}
