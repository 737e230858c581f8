use num_complex::Complex;

use crate::analytic::check_transmittance;
use crate::error::{invalid, CssError, Result};
use crate::oracle::state::{DyadState, DyadTerm};
use crate::scalar::Real;

/// Pure loss of transmittance `eta` on one mode:
///
/// `|a₁⟩⟨a₂| → exp[-(1-η)(|a₁|² + |a₂|² - 2 a₁ a₂*)/2] |√η a₁⟩⟨√η a₂|`.
pub fn loss_on_dyad<T: Real>(state: &DyadState<T>, mode: usize, eta: T) -> Result<DyadState<T>> {
    if !(eta > T::zero() && eta <= T::one()) {
        return Err(invalid(
            "eta",
            eta.as_f64(),
            "a channel transmittance in (0, 1]",
        ));
    }
    state.check_mode(mode)?;
    let half = T::lit(0.5);
    let scale = eta.sqrt();
    let loss = T::one() - eta;
    Ok(state.map_terms(|t| {
        let (a1, a2) = (t.ket[mode], t.bra[mode]);
        let expo = (Complex::new(a1.norm_sqr() + a2.norm_sqr(), T::zero())
            - a1 * a2.conj() * T::lit(2.0))
            * (-half * loss);
        let mut ket = t.ket.clone();
        let mut bra = t.bra.clone();
        ket[mode] = a1 * scale;
        bra[mode] = a2 * scale;
        DyadTerm::new(t.coeff * expo.exp(), ket, bra)
    }))
}

/// Beam splitter of transmittance `t` acting on modes `(a, b)`:
/// `(β_a, β_b) → (√T β_a - √R β_b, √R β_a + √T β_b)`, so `|α⟩|0⟩` goes to
/// `|√T α⟩|√R α⟩`.
pub fn bs_on_product<T: Real>(
    state: &DyadState<T>,
    modes: (usize, usize),
    t: T,
) -> Result<DyadState<T>> {
    let (a, b) = modes;
    state.check_mode(a)?;
    state.check_mode(b)?;
    if a == b {
        return Err(CssError::SameMode(a));
    }
    check_transmittance(t)?;
    let st = t.sqrt();
    let sr = (T::one() - t).sqrt();
    let mix = |v: &[Complex<T>]| {
        let mut out = v.to_vec();
        out[a] = v[a] * st - v[b] * sr;
        out[b] = v[a] * sr + v[b] * st;
        out
    };
    Ok(state.map_terms(|term| DyadTerm::new(term.coeff, mix(&term.ket), mix(&term.bra))))
}
