//! Two-qubit density matrices in the fixed basis `|−−⟩, |−+⟩, |+−⟩, |++⟩`.

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

/// Index of a two-qubit basis state; qubit 1 is the most significant bit
/// and `|−⟩` is bit value 0.
pub const MM: usize = 0;
pub const MP: usize = 1;
pub const PM: usize = 2;
pub const PP: usize = 3;

/// Which qubit a partial transpose acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QubitPairDensity(Matrix4<Complex64>);

impl QubitPairDensity {
    /// Wraps a matrix after checking Hermiticity, unit trace and positivity.
    pub fn new(m: Matrix4<Complex64>) -> Result<Self> {
        let rho = Self(m);
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn new_unchecked(m: Matrix4<Complex64>) -> Self {
        Self(m)
    }

    /// `|ψ⟩⟨ψ|` for a normalised state vector.
    pub fn pure(psi: &Vector4<Complex64>) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Integrity(format!("state vector norm {norm} != 1")));
        }
        Self::new(psi * psi.adjoint())
    }

    pub fn basis_state(index: usize) -> Self {
        let mut m = Matrix4::zeros();
        m[(index, index)] = Complex64::new(1.0, 0.0);
        Self(m)
    }

    pub fn maximally_mixed() -> Self {
        Self(Matrix4::identity().map(|z: Complex64| z * 0.25))
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix4<Complex64> {
        self.0
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.0 - self.0.adjoint();
        d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigenvalues(&self.0)
    }

    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_defect();
        if herm > HERMITIAN_TOL {
            return Err(Error::Integrity(format!("not Hermitian: max |ρ − ρ†| = {herm:.3e}")));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::Integrity(format!("trace {tr} differs from 1")));
        }
        let min = self.eigenvalues()[0];
        if min < -PSD_TOL {
            return Err(Error::Integrity(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    /// Partial transpose over one qubit.
    pub fn partial_transpose(&self, over: Subsystem) -> Matrix4<Complex64> {
        let mut out = Matrix4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                let (a, b, c, d) = (i >> 1, i & 1, j >> 1, j & 1);
                let (ri, rj) = match over {
                    Subsystem::Second => ((a << 1) | d, (c << 1) | b),
                    Subsystem::First => ((c << 1) | b, (a << 1) | d),
                };
                out[(ri, rj)] = self.0[(i, j)];
            }
        }
        out
    }

    /// Convex combination `Σ wᵢ ρᵢ`; weights are not renormalised.
    pub fn mix<'a>(parts: impl IntoIterator<Item = (f64, &'a QubitPairDensity)>) -> Matrix4<Complex64> {
        parts.into_iter().fold(Matrix4::zeros(), |acc, (w, rho)| acc + rho.0.map(|z| z * w))
    }
}

/// Ascending eigenvalues of a Hermitian 4×4 matrix.
pub fn hermitian_eigenvalues(m: &Matrix4<Complex64>) -> [f64; 4] {
    let eig = SymmetricEigen::new(*m);
    let mut ev = [0.0; 4];
    for (slot, v) in ev.iter_mut().zip(eig.eigenvalues.iter()) {
        *slot = *v;
    }
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Largest entrywise modulus of `ρ₁ − ρ₂`.
pub fn max_abs_diff(rho1: &QubitPairDensity, rho2: &QubitPairDensity) -> f64 {
    (rho1.0 - rho2.0).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
