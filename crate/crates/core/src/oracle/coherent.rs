use num_complex::Complex;

use crate::scalar::Real;

/// `⟨β|γ⟩ = exp(-|β|²/2 - |γ|²/2 + β* γ)`.
#[inline]
pub fn overlap<T: Real>(beta: Complex<T>, gamma: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    (beta.conj() * gamma - Complex::new(half * (beta.norm_sqr() + gamma.norm_sqr()), T::zero()))
        .exp()
}

/// Quadrature wavefunction `⟨x_λ|β⟩` of a coherent state, with
/// `x_λ = (a e^{-iλ} + a† e^{iλ}) / √2`:
///
/// `π^{-1/4} exp[-x²/2 + √2 e^{-iλ} x β - e^{-2iλ} β²/2 - |β|²/2]`.
///
/// At `λ = π/2` and real `β` this gives `⟨x|-β⟩ = e^{2i√2 xβ} ⟨x|β⟩`.
pub fn homodyne_amplitude<T: Real>(beta: Complex<T>, x: T, lambda: T) -> Complex<T> {
    let half = T::lit(0.5);
    let rot = Complex::from_polar(T::one(), -lambda);
    let exponent = Complex::new(-half * x * x - half * beta.norm_sqr(), T::zero())
        + rot * beta * (T::SQRT_2() * x)
        - rot * rot * beta * beta * half;
    exponent.exp() * T::PI().powf(T::lit(-0.25))
}
