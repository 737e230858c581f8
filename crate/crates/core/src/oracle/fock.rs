//! Truncated Fock-basis expansion of coherent-state quadrature wavefunctions.
//! Validation only: nothing in the production paths calls into this module.

use num_complex::Complex;

use crate::scalar::Real;

/// Default expansion depth; adequate for `|β| ≤ 2`, `|x| ≤ 4`.
pub const DEFAULT_TERMS: usize = 60;

/// Normalized Hermite functions `ψ_0..ψ_{n-1}` at `x`, by the stable
/// three-term recurrence.
pub fn hermite_functions<T: Real>(n: usize, x: T) -> Vec<T> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    let two = T::lit(2.0);
    out.push(T::PI().powf(T::lit(-0.25)) * (-x * x / two).exp());
    if n > 1 {
        out.push(two.sqrt() * x * out[0]);
    }
    for m in 2..n {
        let mf = T::from_usize(m).expect("small index");
        let next = (two / mf).sqrt() * x * out[m - 1] - ((mf - T::one()) / mf).sqrt() * out[m - 2];
        out.push(next);
    }
    out
}

/// `⟨x_λ|β⟩ = Σ_n e^{-|β|²/2} (β e^{-iλ})ⁿ / √n! ψ_n(x)`, truncated.
pub fn homodyne_amplitude_fock<T: Real>(
    beta: Complex<T>,
    x: T,
    lambda: T,
    terms: usize,
) -> Complex<T> {
    let z = beta * Complex::from_polar(T::one(), -lambda);
    let psi = hermite_functions(terms, x);
    let mut coeff = Complex::new((-beta.norm_sqr() / T::lit(2.0)).exp(), T::zero());
    let mut acc = Complex::new(T::zero(), T::zero());
    for (n, h) in psi.iter().enumerate() {
        if n > 0 {
            coeff = coeff * z / T::from_usize(n).expect("small index").sqrt();
        }
        acc += coeff * *h;
    }
    acc
}
