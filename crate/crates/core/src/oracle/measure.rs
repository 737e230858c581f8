use num_complex::Complex;

use crate::error::Result;
use crate::oracle::coherent::{homodyne_amplitude, overlap};
use crate::oracle::state::DyadState;
use crate::scalar::Real;

/// Unnormalized conditional state together with its outcome weight
/// (a probability or a probability density).
#[derive(Debug, Clone, PartialEq)]
pub struct Conditioned<T = f64> {
    pub state: DyadState<T>,
    pub weight: T,
}

impl<T: Real> Conditioned<T> {
    fn from_state(state: DyadState<T>) -> Self {
        let weight = state.trace().re;
        Self { state, weight }
    }

    /// Renormalized conditional state; fails on a zero-weight outcome.
    pub fn normalized(self) -> Result<(DyadState<T>, T)> {
        let s = self.state.normalized()?;
        Ok((s, self.weight))
    }
}

/// Homodyne projection of `mode` onto `|x_λ⟩`, without renormalizing.
pub fn condition_quadrature<T: Real>(
    state: &DyadState<T>,
    mode: usize,
    x: T,
    lambda: T,
) -> Result<Conditioned<T>> {
    let reduced = state.contract_mode(mode, |k, b| {
        homodyne_amplitude(k, x, lambda) * homodyne_amplitude(b, x, lambda).conj()
    })?;
    Ok(Conditioned::from_state(reduced))
}

/// Projects `mode` onto the quadrature eigenstate `|x_λ⟩` and removes it.
/// Returns the renormalized remainder and the outcome density.
pub fn project_quadrature<T: Real>(
    state: &DyadState<T>,
    mode: usize,
    x: T,
    lambda: T,
) -> Result<(DyadState<T>, T)> {
    condition_quadrature(state, mode, x, lambda)?.normalized()
}

/// Outcome density of a quadrature measurement on `mode`.
pub fn quadrature_density<T: Real>(
    state: &DyadState<T>,
    mode: usize,
    x: T,
    lambda: T,
) -> Result<T> {
    Ok(condition_quadrature(state, mode, x, lambda)?.weight)
}

/// On/off detector click (`1 - |0⟩⟨0|`) on `mode`, which is then traced out.
/// The result stays unnormalized; a zero-probability click is only an error
/// once the caller asks for [`Conditioned::normalized`].
pub fn project_click<T: Real>(state: &DyadState<T>, mode: usize) -> Result<Conditioned<T>> {
    let vac = Complex::new(T::zero(), T::zero());
    let reduced = state.contract_mode(mode, |k, b| {
        overlap(b, k) - overlap(b, vac) * overlap(vac, k)
    })?;
    Ok(Conditioned::from_state(reduced))
}
