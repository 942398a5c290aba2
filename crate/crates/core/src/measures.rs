//! Entanglement and mixedness of a two-qubit state.

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::density::{hermitian_eigenvalues, QubitPairDensity, Subsystem, MM, PP};
use crate::dynamics::AbcdCoefficients;
use crate::error::{Error, Result};

/// Teleportation-usefulness threshold on `S_l` for two qubits.
pub const QUBIT_TELEPORT_THRESHOLD: f64 = 1.0 - 2.0 / 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntanglementReport {
    /// Signed `−2 λ_min` of the partial transpose; positive iff entangled.
    pub e_npt: f64,
    pub lambda_min: f64,
    pub concurrence: f64,
    /// Entanglement of formation, in ebits.
    pub eof: f64,
    pub s_linear: f64,
    pub purity: f64,
    pub teleport_useful: bool,
}

impl EntanglementReport {
    pub fn of(rho: &QubitPairDensity) -> Result<Self> {
        rho.validate()?;
        let (e_npt, lambda_min) = negativity_unchecked(rho, Subsystem::Second);
        let concurrence = concurrence_unchecked(rho);
        let purity = rho.purity();
        let s_linear = linearized_from_purity(purity);
        Ok(Self {
            e_npt,
            lambda_min,
            concurrence,
            eof: eof(concurrence)?,
            s_linear,
            purity,
            teleport_useful: teleport_useful(s_linear, 2),
        })
    }

    /// `max(0, e_npt)`, for plotting.
    pub fn e_npt_clamped(&self) -> f64 {
        self.e_npt.max(0.0)
    }

    pub fn check_invariants(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::Integrity(format!("report invariant violated: {what}")));
        if self.e_npt != -2.0 * self.lambda_min {
            return fail("e_npt != -2 lambda_min");
        }
        if !(0.0..=1.0).contains(&self.concurrence) || !(0.0..=1.0).contains(&self.eof) {
            return fail("concurrence or eof outside [0, 1]");
        }
        if (self.eof == 0.0) != (self.concurrence == 0.0) {
            return fail("eof = 0 iff concurrence = 0");
        }
        if (self.s_linear - linearized_from_purity(self.purity)).abs() > 1e-12
            || !(-1e-12..=1.0 + 1e-12).contains(&self.s_linear)
        {
            return fail("s_linear inconsistent with purity");
        }
        Ok(())
    }
}

/// `(E_NPT, λ_min)` with the partial transpose over the second qubit.
pub fn npt_negativity(rho: &QubitPairDensity) -> Result<(f64, f64)> {
    rho.validate()?;
    Ok(negativity_unchecked(rho, Subsystem::Second))
}

/// Same as [`npt_negativity`] with the transposed qubit chosen explicitly.
pub fn npt_negativity_over(rho: &QubitPairDensity, over: Subsystem) -> Result<(f64, f64)> {
    rho.validate()?;
    Ok(negativity_unchecked(rho, over))
}

fn negativity_unchecked(rho: &QubitPairDensity, over: Subsystem) -> (f64, f64) {
    let lambda_min = hermitian_eigenvalues(&rho.partial_transpose(over))[0];
    (-2.0 * lambda_min, lambda_min)
}

/// `B − D` for an X-shaped state with equal middle populations.
pub fn lambda_from_abcd(c: &AbcdCoefficients) -> f64 {
    c.lambda_minus()
}

/// Wootters concurrence from the eigenvalues of `√ρ ρ̃ √ρ`.
pub fn concurrence(rho: &QubitPairDensity) -> Result<f64> {
    rho.validate()?;
    Ok(concurrence_unchecked(rho))
}

fn spin_flip() -> Matrix4<Complex64> {
    let mut yy = Matrix4::zeros();
    yy[(0, 3)] = Complex64::new(-1.0, 0.0);
    yy[(1, 2)] = Complex64::new(1.0, 0.0);
    yy[(2, 1)] = Complex64::new(1.0, 0.0);
    yy[(3, 0)] = Complex64::new(-1.0, 0.0);
    yy
}

fn hermitian_sqrt(m: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let eig = SymmetricEigen::new(*m);
    let v = eig.eigenvectors;
    let roots = Matrix4::from_diagonal(&eig.eigenvalues.map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0)));
    v * roots * v.adjoint()
}

/// The `λᵢ` are the singular values of `√ρ (σy⊗σy) conj(√ρ)`; going through
/// the SVD rather than `sqrt(eig(√ρ ρ̃ √ρ))` keeps small `λᵢ` accurate to
/// machine precision instead of its square root.
fn concurrence_unchecked(rho: &QubitPairDensity) -> f64 {
    let root = hermitian_sqrt(rho.matrix());
    let x = root * spin_flip() * root.conjugate();
    let mut lambdas = [0.0; 4];
    for (slot, v) in lambdas.iter_mut().zip(x.singular_values().iter()) {
        *slot = *v;
    }
    lambdas.sort_by(|a, b| b.total_cmp(a));
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0)
}

/// Binary entropy in bits.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// Entanglement of formation (ebits) for a given concurrence.
pub fn eof(concurrence: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&concurrence) {
        return Err(Error::Domain(format!("concurrence {concurrence} outside [0, 1]")));
    }
    let x = 0.5 * (1.0 + (1.0 - concurrence * concurrence).sqrt());
    Ok(binary_entropy(x).clamp(0.0, 1.0))
}

/// `S_l = (4/3)(1 − Tr ρ²)`.
pub fn linearized_entropy(rho: &QubitPairDensity) -> Result<f64> {
    rho.validate()?;
    Ok(linearized_from_purity(rho.purity()))
}

/// Same quantity through the spectrum, `Tr ρ² = Σ λᵢ²`.
pub fn linearized_entropy_from_spectrum(rho: &QubitPairDensity) -> Result<f64> {
    rho.validate()?;
    let purity: f64 = rho.eigenvalues().iter().map(|l| l * l).sum();
    Ok(linearized_from_purity(purity))
}

fn linearized_from_purity(purity: f64) -> f64 {
    4.0 / 3.0 * (1.0 - purity)
}

/// True iff `s_linear < 1 − 2/(N(N+1))`.
pub fn teleport_useful(s_linear: f64, subsystem_dim: usize) -> bool {
    let n = subsystem_dim as f64;
    s_linear < 1.0 - 2.0 / (n * (n + 1.0))
}

/// The X-state with the single-excitation populations `B` removed and the
/// rest renormalised: close to `√A|−−⟩ − √C|++⟩` when `B` is small.
pub fn purified_state(c: &AbcdCoefficients) -> Result<QubitPairDensity> {
    let norm = c.a + c.c;
    if norm <= 0.0 {
        return Err(Error::Domain("A + C must be positive".into()));
    }
    let mut m = Matrix4::zeros();
    m[(MM, MM)] = (c.a / norm).into();
    m[(PP, PP)] = (c.c / norm).into();
    m[(MM, PP)] = (-c.d / norm).into();
    m[(PP, MM)] = (-c.d / norm).into();
    QubitPairDensity::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{MP, PM};
    use nalgebra::Vector4;

    fn bell() -> QubitPairDensity {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = Vector4::new(s.into(), 0.0.into(), 0.0.into(), (-s).into());
        QubitPairDensity::pure(&psi).unwrap()
    }

    #[test]
    fn bell_state_is_maximally_entangled() {
        let (e, l) = npt_negativity(&bell()).unwrap();
        assert!((e - 1.0).abs() < 1e-12);
        assert!((l + 0.5).abs() < 1e-12);
        assert!((concurrence(&bell()).unwrap() - 1.0).abs() < 1e-12);
        assert!(linearized_entropy(&bell()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_state() {
        let rho = QubitPairDensity::maximally_mixed();
        let (e, _) = npt_negativity(&rho).unwrap();
        assert!((e + 0.5).abs() < 1e-12);
        assert!((linearized_entropy(&rho).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(concurrence(&rho).unwrap(), 0.0);
    }

    #[test]
    fn product_state_has_no_concurrence() {
        let rho = QubitPairDensity::basis_state(MP);
        assert!(concurrence(&rho).unwrap() < 1e-12);
        let report = EntanglementReport::of(&QubitPairDensity::basis_state(PM)).unwrap();
        report.check_invariants().unwrap();
        assert!(report.e_npt.abs() < 1e-12);
    }

    #[test]
    fn eof_values() {
        assert_eq!(eof(0.0).unwrap(), 0.0);
        assert!((eof(1.0).unwrap() - 1.0).abs() < 1e-15);
        // 40-digit evaluation of h((1 + sqrt(1 - 0.87²))/2).
        assert!((eof(0.87).unwrap() - 0.816_738_213_019_474).abs() < 1e-12);
        assert!(matches!(eof(1.2), Err(Error::Domain(_))));
        assert!(matches!(eof(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn teleport_threshold() {
        assert!(teleport_useful(0.01, 2));
        assert!(!teleport_useful(QUBIT_TELEPORT_THRESHOLD, 2));
        assert!(!teleport_useful(1.0, 2));
        assert!(teleport_useful(0.8, 3));
        assert_eq!(QUBIT_TELEPORT_THRESHOLD, 1.0 - 2.0 / 6.0);
    }

    #[test]
    fn lambda_for_ground_coefficients() {
        let c = AbcdCoefficients { a: 1.0, b: 0.0, c: 0.0, d: 0.0, r: 0.0, tau: 0.0 };
        assert_eq!(lambda_from_abcd(&c), 0.0);
    }

    #[test]
    fn integrity_errors_propagate() {
        let mut m = Matrix4::zeros();
        m[(0, 0)] = Complex64::new(0.5, 0.0);
        let bad = QubitPairDensity::new_unchecked(m);
        assert!(matches!(npt_negativity(&bad), Err(Error::Integrity(_))));
        assert!(matches!(concurrence(&bad), Err(Error::Integrity(_))));
        assert!(matches!(linearized_entropy(&bad), Err(Error::Integrity(_))));
    }

    #[test]
    fn purified_state_drops_single_excitations() {
        let c = AbcdCoefficients { a: 0.6, b: 0.05, c: 0.3, d: 0.4, r: 0.0, tau: 0.0 };
        let rho = purified_state(&c).unwrap();
        assert_eq!(rho.get(MP, MP).re, 0.0);
        assert!((rho.trace() - 1.0).abs() < 1e-15);
    }
}
