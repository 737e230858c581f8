//! Full protocol pipelines run on dyad states.

use num_complex::Complex;

use crate::analytic::{ChannelSetting, CssParams, MixedCss, TapSetting};
use crate::error::{invalid, Result};
use crate::oracle::channels::{bs_on_product, loss_on_dyad};
use crate::oracle::family::{
    extract_fraction, infer_css_params, make_css, make_mixed, make_mixture,
};
use crate::oracle::measure::{condition_quadrature, project_click, quadrature_density};
use crate::oracle::state::DyadState;
use crate::scalar::Real;

fn tapped<T: Real>(input: &DyadState<T>, t: T) -> Result<DyadState<T>> {
    let with_vacuum = input.tensor(&DyadState::vacuum(1)?);
    bs_on_product(&with_vacuum, (0, 1), t)
}

/// `P_C(k)` by splitting a pure CSS and projecting the reflected mode.
pub fn css_density_sim<T: Real>(params: &CssParams<T>, t: T, k: T) -> Result<T> {
    let out = tapped(&make_css(params)?, t)?;
    quadrature_density(&out, 1, k, T::FRAC_PI_2())
}

/// `P_0(k)` from `ρ_0(α)` through the same tap.
pub fn mixture_density_sim<T: Real>(alpha: T, t: T, k: T) -> Result<T> {
    let out = tapped(&make_mixture(alpha), t)?;
    quadrature_density(&out, 1, k, T::FRAC_PI_2())
}

/// Loss channel on the dyad form of a mixed CSS, read back into the family.
pub fn loss_sim<T: Real>(state: &MixedCss<T>, ch: &ChannelSetting<T>) -> Result<MixedCss<T>> {
    let out = loss_on_dyad(&make_mixed(state)?, 0, ch.eta())?;
    let params = CssParams::new(ch.eta().sqrt() * state.alpha(), state.phi())?;
    MixedCss::new(params, extract_fraction(&out, &params)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PurifySim<T = f64> {
    /// Conditional output read back into the canonical family.
    pub state: MixedCss<T>,
    /// Outcome density of the mixed input.
    pub density: T,
    /// Renormalized conditional dyad state.
    pub dyad: DyadState<T>,
}

/// Tap, optional detector loss `eta_H` on the reflected mode, homodyne
/// projection at `λ = π/2`. Output amplitude and phase are read off the
/// resulting dyads, not taken from the closed form.
pub fn purify_sim<T: Real>(state: &MixedCss<T>, tap: &TapSetting<T>) -> Result<PurifySim<T>> {
    let mut out = tapped(&make_mixed(state)?, tap.transmittance())?;
    if tap.eta_h() < T::one() {
        out = loss_on_dyad(&out, 1, tap.eta_h())?;
    }
    let (dyad, density) = condition_quadrature(&out, 1, tap.k(), T::FRAC_PI_2())?.normalized()?;
    let dyad = dyad.compact();
    let params = infer_css_params(&dyad)?;
    let p = extract_fraction(&dyad, &params)?;
    Ok(PurifySim {
        state: MixedCss::new(params, p)?,
        density,
        dyad,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplifierOutput<T = f64> {
    /// Renormalized state of the surviving mode.
    pub state: DyadState<T>,
    /// Probability of the double click.
    pub click_probability: T,
    /// Superposition the output is compared against: `(√2 α, 2φ)`.
    pub target: CssParams<T>,
}

/// Two copies of `p ρ_C(α, φ) + (1 - p) ρ_0(α)` combined on a 50/50 splitter;
/// one port is mixed with an ancilla `|√2 α⟩` on a second 50/50 splitter and
/// both detectors must click.
pub fn amplifier_output<T: Real>(p: T, params: &CssParams<T>) -> Result<AmplifierOutput<T>> {
    if params.alpha() <= T::zero() {
        return Err(invalid("alpha", params.alpha().as_f64(), "alpha > 0"));
    }
    let half = T::lit(0.5);
    let single = make_mixed(&MixedCss::new(*params, p)?)?;
    let ancilla = DyadState::coherent(&[Complex::new(T::SQRT_2() * params.alpha(), T::zero())])?;
    // modes: 0, 1 copies; 2 ancilla
    let input = single.tensor(&single).tensor(&ancilla);
    let combined = bs_on_product(&input, (0, 1), half)?;
    // |α,α⟩ → |0, √2α⟩: mode 1 carries the amplified superposition
    let probed = bs_on_product(&combined, (0, 2), half)?;
    let first = project_click(&probed, 2)?;
    let both = project_click(&first.state, 0)?;
    let (state, click_probability) = both.normalized()?;
    let target = CssParams::new(T::SQRT_2() * params.alpha(), T::lit(2.0) * params.phi())?;
    Ok(AmplifierOutput {
        state: state.compact(),
        click_probability,
        target,
    })
}

/// CSS fraction of the amplifier output at `(√2 α, 2φ)`.
pub fn amplifier_sim<T: Real>(p: T, params: &CssParams<T>) -> Result<T> {
    let out = amplifier_output(p, params)?;
    extract_fraction(&out.state, &out.target)
}
