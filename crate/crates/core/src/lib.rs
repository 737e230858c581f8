//! Decoherence, homodyne-conditioned purification and linear-optical
//! amplification of coherent-state superpositions `|α⟩ + e^{iφ}|-α⟩`.
//!
//! [`analytic`] holds the closed forms on the three-parameter family
//! `p ρ_C(α, φ) + (1 - p) ρ_0(α)`; [`oracle`] simulates the same protocols
//! exactly on sums of coherent dyads; [`sweep`] tabulates figure data;
//! [`verify`] cross-checks the first two on random draws.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the
//! aliases below pin the common `f64` and `f32` instantiations.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod oracle;
pub mod quad;
pub mod scalar;
pub mod sweep;
pub mod verify;

pub use analytic::{
    amplification_threshold, amplified_fraction, amplify, apply_loss, concatenate, detection_ratio,
    homodyne_density_css, homodyne_density_mix, loss_fraction, mixture_fidelity, normalization,
    optimal_k, purified_fraction, purify, purify_effective_loss, purify_with_inefficiency,
    purity_mixed_css, success_region, theta_of_k, window_acceptance, ChannelSetting, CssParams,
    MixedCss, Purified, SuccessRegion, TapSetting,
};
pub use error::{CssError, Result};
pub use scalar::Real;

pub type CssParamsF64 = CssParams<f64>;
pub type MixedCssF64 = MixedCss<f64>;
pub type TapSettingF64 = TapSetting<f64>;
pub type ChannelSettingF64 = ChannelSetting<f64>;
pub type PurifiedF64 = Purified<f64>;
pub type DyadStateF64 = oracle::DyadState<f64>;

pub type CssParamsF32 = CssParams<f32>;
pub type MixedCssF32 = MixedCss<f32>;
pub type TapSettingF32 = TapSetting<f32>;
pub type ChannelSettingF32 = ChannelSetting<f32>;
pub type PurifiedF32 = Purified<f32>;
pub type DyadStateF32 = oracle::DyadState<f32>;
