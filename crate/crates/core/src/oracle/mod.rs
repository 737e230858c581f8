//! Exact simulation of the protocols on finite sums of coherent dyads
//! `|β₁..β_m⟩⟨γ₁..γ_m|`.
//!
//! Loss, beam splitters, quadrature projections and on/off clicks all map
//! coherent dyads to scalar multiples of coherent dyads, so no Fock
//! truncation is involved anywhere in this module.

pub mod channels;
pub mod coherent;
pub mod family;
pub mod fock;
pub mod measure;
pub mod protocols;
pub mod state;

pub use channels::{bs_on_product, loss_on_dyad};
pub use coherent::{homodyne_amplitude, overlap};
pub use family::{
    extract_fraction, infer_css_params, make_css, make_mixed, make_mixture, mixed_with_weight,
    purity,
};
pub use measure::{
    condition_quadrature, project_click, project_quadrature, quadrature_density, Conditioned,
};
pub use protocols::{
    amplifier_output, amplifier_sim, css_density_sim, loss_sim, mixture_density_sim, purify_sim,
    AmplifierOutput, PurifySim,
};
pub use state::{multi_overlap, DyadState, DyadTerm};
