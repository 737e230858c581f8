use num_complex::Complex;

use crate::error::{CssError, Result};
use crate::oracle::coherent::overlap;
use crate::scalar::Real;

/// Amplitudes closer than this are treated as the same coherent state when
/// terms are merged.
pub const MERGE_TOLERANCE: f64 = 1e-12;
/// Terms whose coefficient falls below this are dropped by [`DyadState::compact`].
pub const PRUNE_THRESHOLD: f64 = 1e-15;

/// `coeff |ket⟩⟨bra|` with one coherent amplitude per mode.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadTerm<T = f64> {
    pub coeff: Complex<T>,
    pub ket: Vec<Complex<T>>,
    pub bra: Vec<Complex<T>>,
}

impl<T: Real> DyadTerm<T> {
    pub fn new(coeff: Complex<T>, ket: Vec<Complex<T>>, bra: Vec<Complex<T>>) -> Self {
        Self { coeff, ket, bra }
    }

    /// `⟨bra|ket⟩` over all modes.
    pub fn trace_factor(&self) -> Complex<T> {
        self.ket
            .iter()
            .zip(&self.bra)
            .fold(Complex::new(T::one(), T::zero()), |acc, (k, b)| {
                acc * overlap(*b, *k)
            })
    }

    pub fn trace(&self) -> Complex<T> {
        self.coeff * self.trace_factor()
    }

    fn same_support(&self, other: &Self, tol: T) -> bool {
        let near = |a: &[Complex<T>], b: &[Complex<T>]| {
            a.iter().zip(b).all(|(x, y)| (*x - *y).norm() <= tol)
        };
        near(&self.ket, &other.ket) && near(&self.bra, &other.bra)
    }

    pub(crate) fn adjoint(&self) -> Self {
        Self {
            coeff: self.coeff.conj(),
            ket: self.bra.clone(),
            bra: self.ket.clone(),
        }
    }
}

/// Finite complex combination of multimode coherent dyads.
///
/// Every operation returns a new state. A zero-mode state is a plain scalar
/// and only arises after the last mode has been measured out.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadState<T = f64> {
    terms: Vec<DyadTerm<T>>,
    modes: usize,
}

impl<T: Real> DyadState<T> {
    pub fn new(modes: usize, terms: Vec<DyadTerm<T>>) -> Result<Self> {
        if modes == 0 {
            return Err(CssError::ModeIndex {
                index: 0,
                mode_count: 0,
            });
        }
        for t in &terms {
            if t.ket.len() != modes || t.bra.len() != modes {
                return Err(CssError::ModeMismatch {
                    left: modes,
                    right: t.ket.len().max(t.bra.len()),
                });
            }
        }
        Ok(Self { terms, modes })
    }

    pub(crate) fn from_parts(modes: usize, terms: Vec<DyadTerm<T>>) -> Self {
        debug_assert!(terms
            .iter()
            .all(|t| t.ket.len() == modes && t.bra.len() == modes));
        Self { terms, modes }
    }

    /// `|β₁..β_m⟩⟨β₁..β_m|`.
    pub fn coherent(amplitudes: &[Complex<T>]) -> Result<Self> {
        Self::new(
            amplitudes.len(),
            vec![DyadTerm::new(
                Complex::new(T::one(), T::zero()),
                amplitudes.to_vec(),
                amplitudes.to_vec(),
            )],
        )
    }

    pub fn vacuum(modes: usize) -> Result<Self> {
        Self::coherent(&vec![Complex::new(T::zero(), T::zero()); modes])
    }

    pub fn terms(&self) -> &[DyadTerm<T>] {
        &self.terms
    }

    pub fn mode_count(&self) -> usize {
        self.modes
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn trace(&self) -> Complex<T> {
        self.terms
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, t| acc + t.trace())
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode < self.modes {
            Ok(())
        } else {
            Err(CssError::ModeIndex {
                index: mode,
                mode_count: self.modes,
            })
        }
    }

    pub fn scaled(&self, factor: Complex<T>) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| DyadTerm {
                    coeff: t.coeff * factor,
                    ..t.clone()
                })
                .collect(),
            modes: self.modes,
        }
    }

    /// Term-wise sum (no merging).
    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.modes != other.modes {
            return Err(CssError::ModeMismatch {
                left: self.modes,
                right: other.modes,
            });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self {
            terms,
            modes: self.modes,
        })
    }

    /// `self ⊗ other`, modes of `other` appended after those of `self`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut ket = a.ket.clone();
                ket.extend_from_slice(&b.ket);
                let mut bra = a.bra.clone();
                bra.extend_from_slice(&b.bra);
                terms.push(DyadTerm::new(a.coeff * b.coeff, ket, bra));
            }
        }
        Self {
            terms,
            modes: self.modes + other.modes,
        }
    }

    /// Merges terms on the same dyad and drops negligible coefficients.
    pub fn compact(&self) -> Self {
        let tol = T::lit(MERGE_TOLERANCE);
        let mut merged: Vec<DyadTerm<T>> = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            match merged.iter_mut().find(|m| m.same_support(t, tol)) {
                Some(m) => m.coeff += t.coeff,
                None => merged.push(t.clone()),
            }
        }
        let floor = T::lit(PRUNE_THRESHOLD);
        merged.retain(|t| t.coeff.norm() >= floor);
        Self {
            terms: merged,
            modes: self.modes,
        }
    }

    /// Rescales to unit trace.
    pub fn normalized(&self) -> Result<Self> {
        let tr = self.trace().re;
        if !(tr > T::lit(1e-300)) {
            return Err(CssError::ZeroDensity {
                density: tr.as_f64(),
            });
        }
        Ok(self.scaled(Complex::new(tr.recip(), T::zero())))
    }

    /// Every term has its adjoint partner (up to `tol` in coefficient).
    pub fn is_hermitian(&self, tol: T) -> bool {
        let c = self.compact();
        let amp_tol = T::lit(MERGE_TOLERANCE);
        c.terms.iter().all(|t| {
            let adj = t.adjoint();
            c.terms
                .iter()
                .any(|u| u.same_support(&adj, amp_tol) && (u.coeff - adj.coeff).norm() <= tol)
        })
    }

    /// `⟨φ|ρ|φ⟩` for `|φ⟩ = Σ w_i |v_i⟩` given as `(w_i, v_i)` pairs.
    pub fn expectation(&self, psi: &[(Complex<T>, Vec<Complex<T>>)]) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for t in &self.terms {
            let mut left = Complex::new(T::zero(), T::zero());
            let mut right = Complex::new(T::zero(), T::zero());
            for (w, v) in psi {
                left += w.conj() * multi_overlap(v, &t.ket);
                right += *w * multi_overlap(&t.bra, v);
            }
            acc += t.coeff * left * right;
        }
        acc
    }

    /// `Tr ρ²`, not assuming Hermiticity.
    pub fn trace_of_square(&self) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for a in &self.terms {
            for b in &self.terms {
                acc += a.coeff
                    * b.coeff
                    * multi_overlap(&a.bra, &b.ket)
                    * multi_overlap(&b.bra, &a.ket);
            }
        }
        acc
    }

    /// Hilbert-Schmidt norm `√Tr(X†X)`.
    pub fn hs_norm(&self) -> T {
        let mut acc = Complex::new(T::zero(), T::zero());
        for a in &self.terms {
            for b in &self.terms {
                acc += a.coeff.conj()
                    * b.coeff
                    * multi_overlap(&a.ket, &b.ket)
                    * multi_overlap(&b.bra, &a.bra);
            }
        }
        acc.re.max(T::zero()).sqrt()
    }

    /// Drops `mode`, multiplying each coefficient by `f(ket_amp, bra_amp)`.
    pub(crate) fn contract_mode<F>(&self, mode: usize, f: F) -> Result<Self>
    where
        F: Fn(Complex<T>, Complex<T>) -> Complex<T>,
    {
        self.check_mode(mode)?;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut ket = t.ket.clone();
                let mut bra = t.bra.clone();
                let k = ket.remove(mode);
                let b = bra.remove(mode);
                DyadTerm::new(t.coeff * f(k, b), ket, bra)
            })
            .collect();
        Ok(Self {
            terms,
            modes: self.modes - 1,
        })
    }

    pub(crate) fn map_terms<F>(&self, f: F) -> Self
    where
        F: Fn(&DyadTerm<T>) -> DyadTerm<T>,
    {
        Self {
            terms: self.terms.iter().map(f).collect(),
            modes: self.modes,
        }
    }
}

/// `⟨a₁..a_m|b₁..b_m⟩`.
pub fn multi_overlap<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter()
        .zip(b)
        .fold(Complex::new(T::one(), T::zero()), |acc, (x, y)| {
            acc * overlap(*x, *y)
        })
}
