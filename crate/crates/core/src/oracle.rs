//! Brute-force evolution in the truncated space
//! `(qubit₁ ⊗ mode_a) ⊗ (qubit₂ ⊗ mode_b)`.
//!
//! The co-rotating pair Hamiltonian `a σ₊ + a† σ₋` is diagonalised
//! numerically as a dense real symmetric matrix and exponentiated through
//! its eigenbasis. Nothing here relies on the doublet structure beyond
//! what the eigensolver finds on its own.
//!
//! A pair basis state `|q, n⟩` (q = 0 for `|−⟩`, 1 for `|+⟩`) has index
//! `q·(n_cut + 1) + n`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::density::QubitPairDensity;
use crate::error::{Error, Result};
use crate::spectrum::SqueezedSpectrum;

/// Largest amplitude tolerated on a basis state whose coupling partner lies
/// above the cutoff.
pub const CUTOFF_AMPLITUDE_TOL: f64 = 1e-6;

const ANGLE_SLACK: f64 = 1e-12;

/// Separable preparation
/// `(cos α|−⟩ + e^{iφ} sin α|+⟩) ⊗ (cos β|−⟩ + e^{iψ} sin β|+⟩)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductPreparation {
    pub alpha: f64,
    pub beta: f64,
    pub phi: f64,
    pub psi: f64,
}

impl ProductPreparation {
    pub fn new(alpha: f64, beta: f64, phi: f64, psi: f64) -> Result<Self> {
        let prep = Self { alpha, beta, phi, psi };
        prep.validate()?;
        Ok(prep)
    }

    /// `|−,−⟩`.
    pub const fn ground() -> Self {
        Self { alpha: 0.0, beta: 0.0, phi: 0.0, psi: 0.0 }
    }

    /// `|+,+⟩`.
    pub const fn excited() -> Self {
        Self { alpha: PI / 2.0, beta: PI / 2.0, phi: 0.0, psi: 0.0 }
    }

    pub fn is_ground(&self) -> bool {
        self.alpha == 0.0 && self.beta == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        let in_range = |v: f64, hi: f64| v.is_finite() && v >= -ANGLE_SLACK && v <= hi + ANGLE_SLACK;
        if !in_range(self.alpha, 2.0 * PI) || !in_range(self.beta, 2.0 * PI) {
            return Err(Error::Domain(format!("alpha, beta must lie in [0, 2π], got ({}, {})", self.alpha, self.beta)));
        }
        if !in_range(self.phi, PI) || !in_range(self.psi, PI) {
            return Err(Error::Domain(format!("phi, psi must lie in [0, π], got ({}, {})", self.phi, self.psi)));
        }
        Ok(())
    }

    /// Amplitudes `[⟨−|, ⟨+|]` of each qubit.
    pub fn qubit_amplitudes(&self) -> ([Complex64; 2], [Complex64; 2]) {
        let factor =
            |angle: f64, phase: f64| [Complex64::new(angle.cos(), 0.0), Complex64::from_polar(angle.sin(), phase)];
        (factor(self.alpha, self.phi), factor(self.beta, self.psi))
    }

    pub fn state_vector(&self) -> Vector4<Complex64> {
        let (q1, q2) = self.qubit_amplitudes();
        Vector4::new(q1[0] * q2[0], q1[0] * q2[1], q1[1] * q2[0], q1[1] * q2[1])
    }

    pub fn density(&self) -> QubitPairDensity {
        let psi = self.state_vector();
        QubitPairDensity::new_unchecked(psi * psi.adjoint())
    }
}

impl Default for ProductPreparation {
    fn default() -> Self {
        Self::ground()
    }
}

/// Co-rotating interaction of one qubit with one mode, in units of `ħΩ`.
#[derive(Debug, Clone)]
pub struct PairHamiltonian {
    n_cut: usize,
    matrix: DMatrix<f64>,
}

impl PairHamiltonian {
    pub fn n_cut(&self) -> usize {
        self.n_cut
    }

    pub fn dim(&self) -> usize {
        2 * (self.n_cut + 1)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn index(&self, excited: bool, n: usize) -> usize {
        pair_index(self.n_cut, excited, n)
    }
}

fn pair_index(n_cut: usize, excited: bool, n: usize) -> usize {
    usize::from(excited) * (n_cut + 1) + n
}

/// `⟨+, n−1| H |−, n⟩ = √n` for `n = 1..=n_cut`, everything else zero.
pub fn build_pair_hamiltonian(n_cut: usize) -> Result<PairHamiltonian> {
    if n_cut < 1 {
        return Err(Error::Domain("photon cutoff must be at least 1".into()));
    }
    let dim = 2 * (n_cut + 1);
    let mut matrix = DMatrix::zeros(dim, dim);
    for n in 1..=n_cut {
        let lower = pair_index(n_cut, false, n);
        let upper = pair_index(n_cut, true, n - 1);
        let g = (n as f64).sqrt();
        matrix[(upper, lower)] = g;
        matrix[(lower, upper)] = g;
    }
    Ok(PairHamiltonian { n_cut, matrix })
}

/// Complex matrix stored as separate real and imaginary parts, so products
/// run through the fast real kernels.
#[derive(Debug, Clone)]
struct SplitMatrix {
    re: DMatrix<f64>,
    im: DMatrix<f64>,
}

impl SplitMatrix {
    fn rows(&self, start: usize, count: usize) -> SplitMatrix {
        SplitMatrix { re: self.re.rows(start, count).into_owned(), im: self.im.rows(start, count).into_owned() }
    }

    /// `selfᴴ · other`.
    fn adjoint_mul(&self, other: &SplitMatrix) -> SplitMatrix {
        let re = self.re.tr_mul(&other.re) + self.im.tr_mul(&other.im);
        let im = self.re.tr_mul(&other.im) - self.im.tr_mul(&other.re);
        SplitMatrix { re, im }
    }

    fn get(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.re[(i, j)], self.im[(i, j)])
    }

    fn scaled(&self, x: Complex64) -> SplitMatrix {
        SplitMatrix { re: &self.re * x.re - &self.im * x.im, im: &self.re * x.im + &self.im * x.re }
    }

    /// `x·self + y·other` for complex scalars.
    fn combine(&self, x: Complex64, other: &SplitMatrix, y: Complex64) -> SplitMatrix {
        let re = &self.re * x.re - &self.im * x.im + &other.re * y.re - &other.im * y.im;
        let im = &self.re * x.im + &self.im * x.re + &other.re * y.im + &other.im * y.re;
        SplitMatrix { re, im }
    }
}

/// Oracle for one squeezed input: the pair Hamiltonian at cutoff
/// `n_max + 1` and its eigendecomposition, reusable across times and
/// preparations.
#[derive(Debug, Clone)]
pub struct HilbertOracle {
    spectrum: SqueezedSpectrum,
    hamiltonian: PairHamiltonian,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
    /// `Vᵀ` restricted to the initial-support columns `|−,n⟩` then `|+,n⟩`, n ≤ n_max.
    support: DMatrix<f64>,
}

impl HilbertOracle {
    pub fn new(spectrum: &SqueezedSpectrum) -> Result<Self> {
        Self::with_cutoff(spectrum, spectrum.n_max() + 1)
    }

    /// Oracle with an explicit cutoff, which must leave room above the spectrum.
    pub fn with_cutoff(spectrum: &SqueezedSpectrum, n_cut: usize) -> Result<Self> {
        if n_cut <= spectrum.n_max() {
            return Err(Error::Domain(format!("cutoff {n_cut} must exceed the spectrum's n_max {}", spectrum.n_max())));
        }
        let hamiltonian = build_pair_hamiltonian(n_cut)?;
        let eig = SymmetricEigen::new(hamiltonian.matrix.clone());
        let width = spectrum.n_max() + 1;
        let dim = hamiltonian.dim();
        let mut support = DMatrix::zeros(dim, 2 * width);
        for (slot, excited) in [false, true].into_iter().enumerate() {
            for n in 0..width {
                let col = hamiltonian.index(excited, n);
                for k in 0..dim {
                    support[(k, slot * width + n)] = eig.eigenvectors[(col, k)];
                }
            }
        }
        Ok(Self {
            spectrum: spectrum.clone(),
            hamiltonian,
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
            support,
        })
    }

    pub fn spectrum(&self) -> &SqueezedSpectrum {
        &self.spectrum
    }

    pub fn hamiltonian(&self) -> &PairHamiltonian {
        &self.hamiltonian
    }

    pub fn n_cut(&self) -> usize {
        self.hamiltonian.n_cut
    }

    /// Full pair propagator `exp(−iHτ)`.
    pub fn unitary(&self, tau: f64) -> Result<DMatrix<Complex64>> {
        check_tau(tau)?;
        let dim = self.hamiltonian.dim();
        let v = &self.eigenvectors;
        let phases: Vec<Complex64> = self.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, -l * tau)).collect();
        Ok(DMatrix::from_fn(dim, dim, |i, j| (0..dim).map(|k| phases[k] * (v[(i, k)] * v[(j, k)])).sum()))
    }

    /// Evolved images of the initial-support basis states at time `tau`.
    pub fn slice(&self, tau: f64) -> Result<TimeSlice> {
        check_tau(tau)?;
        let mut cos_part = self.support.clone();
        let mut sin_part = self.support.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let (s, c) = (lambda * tau).sin_cos();
            cos_part.row_mut(k).scale_mut(c);
            sin_part.row_mut(k).scale_mut(-s);
        }
        let images = SplitMatrix { re: &self.eigenvectors * cos_part, im: &self.eigenvectors * sin_part };
        let width = self.spectrum.n_max() + 1;
        let minus =
            SplitMatrix { re: images.re.columns(0, width).into_owned(), im: images.im.columns(0, width).into_owned() };
        let plus = SplitMatrix {
            re: images.re.columns(width, width).into_owned(),
            im: images.im.columns(width, width).into_owned(),
        };
        Ok(TimeSlice { tau, n_cut: self.n_cut(), eta: self.spectrum.eta().to_vec(), minus, plus })
    }

    /// Reduced two-qubit state at time `tau`.
    pub fn evolve(&self, prep: &ProductPreparation, tau: f64) -> Result<QubitPairDensity> {
        prep.validate()?;
        self.slice(tau)?.reduce(prep)
    }

    /// Explicit global state vector, built from the full propagator.
    pub fn evolve_state(&self, prep: &ProductPreparation, tau: f64) -> Result<FullStateVector> {
        let u = self.unitary(tau)?;
        let mut state = FullStateVector::initial(prep, &self.spectrum, self.n_cut())?;
        state.apply_pair(Mode::A, &u);
        state.apply_pair(Mode::B, &u);
        Ok(state)
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if !tau.is_finite() || tau < 0.0 {
        return Err(Error::Domain(format!("interaction time must be >= 0, got {tau}")));
    }
    Ok(())
}

/// One-shot oracle evolution: builds the pair Hamiltonian at `n_max + 1`,
/// evolves `prep ⊗ Σ η_n |n,n⟩` and traces out both modes.
pub fn evolve(prep: &ProductPreparation, s: &SqueezedSpectrum, tau: f64) -> Result<QubitPairDensity> {
    HilbertOracle::new(s)?.evolve(prep, tau)
}

/// Images `U|−,n⟩` and `U|+,n⟩` of the initial-support states at one time.
#[derive(Debug, Clone)]
pub struct TimeSlice {
    tau: f64,
    n_cut: usize,
    eta: Vec<f64>,
    minus: SplitMatrix,
    plus: SplitMatrix,
}

impl TimeSlice {
    pub fn tau(&self) -> f64 {
        self.tau
    }

    fn images(&self, amps: &[Complex64; 2]) -> SplitMatrix {
        if amps[1] == Complex64::new(0.0, 0.0) && amps[0] == Complex64::new(1.0, 0.0) {
            return self.minus.clone();
        }
        self.minus.combine(amps[0], &self.plus, amps[1])
    }

    /// Reduced qubit state for a product preparation.
    ///
    /// The global state is `Σ_n η_n w¹_n ⊗ w²_n` with `wⁱ_n = U(qᵢ ⊗ |n⟩)`.
    /// Splitting each `w` into its qubit-`−` and qubit-`+` row blocks and
    /// tracing the modes gives
    /// `ρ_{ab,cd} = Σ_{nm} η_n η_m (W¹_cᴴ W¹_a)_{nm} conj(W²_bᴴ W²_d)_{mn}`.
    pub fn reduce(&self, prep: &ProductPreparation) -> Result<QubitPairDensity> {
        let (q1, q2) = prep.qubit_amplitudes();
        let w1 = self.images(&q1);
        let w2 = if q2 == q1 { w1.clone() } else { self.images(&q2) };
        self.check_edge(&w1)?;
        self.check_edge(&w2)?;
        let gram1 = Gram::of(&w1, self.n_cut);
        let gram2 = Gram::of(&w2, self.n_cut);
        let rho = contract(&self.eta, &gram1, &gram2);
        QubitPairDensity::new(rho)
    }

    /// Gram blocks for every combination of `|−⟩`/`|+⟩` inputs, so that
    /// many real-amplitude preparations can be reduced cheaply.
    pub fn gram_table(&self) -> GramTable {
        let rows = self.n_cut + 1;
        let inputs = [&self.minus, &self.plus];
        let mut blocks = Vec::with_capacity(16);
        for c in 0..2 {
            for a in 0..2 {
                for s in inputs {
                    for t in inputs {
                        blocks.push(s.rows(c * rows, rows).adjoint_mul(&t.rows(a * rows, rows)));
                    }
                }
            }
        }
        let edge_row = pair_index(self.n_cut, true, self.n_cut);
        let edge = [&self.minus, &self.plus]
            .map(|m| (0..self.eta.len()).map(|n| self.eta[n] * m.get(edge_row, n).norm()).sum::<f64>());
        GramTable { eta: self.eta.clone(), n_cut: self.n_cut, blocks, edge }
    }

    fn check_edge(&self, w: &SplitMatrix) -> Result<()> {
        let row = pair_index(self.n_cut, true, self.n_cut);
        let amplitude: f64 = (0..self.eta.len()).map(|n| self.eta[n] * w.get(row, n).norm()).sum();
        edge_check(amplitude, self.n_cut)
    }
}

fn edge_check(amplitude: f64, n_cut: usize) -> Result<()> {
    if amplitude >= CUTOFF_AMPLITUDE_TOL {
        return Err(Error::Truncation { amplitude, n_cut });
    }
    Ok(())
}

/// The four blocks `W_cᴴ W_a` (c, a ∈ {−, +}) of one qubit's image matrix.
struct Gram {
    blocks: [SplitMatrix; 4],
}

impl Gram {
    fn of(w: &SplitMatrix, n_cut: usize) -> Self {
        let rows = n_cut + 1;
        let parts = [w.rows(0, rows), w.rows(rows, rows)];
        Self { blocks: std::array::from_fn(|k| parts[k / 2].adjoint_mul(&parts[k % 2])) }
    }

    fn block(&self, c: usize, a: usize) -> &SplitMatrix {
        &self.blocks[2 * c + a]
    }
}

/// `ρ_{ab,cd} = Σ_{nm} η_n η_m G¹(c,a)_{nm} conj(G²(b,d))_{mn}`.
fn contract(eta: &[f64], first: &Gram, second: &Gram) -> Matrix4<Complex64> {
    let width = eta.len();
    let mut rho = Matrix4::zeros();
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    let g1 = first.block(c, a);
                    let g2 = second.block(b, d);
                    let mut acc = Complex64::new(0.0, 0.0);
                    for n in 0..width {
                        for m in 0..width {
                            acc += g1.get(n, m) * g2.get(m, n).conj() * (eta[n] * eta[m]);
                        }
                    }
                    rho[(2 * a + b, 2 * c + d)] = acc;
                }
            }
        }
    }
    rho
}

/// Precomputed Gram blocks for fast reduction of many preparations at one
/// `(r, τ)` point.
pub struct GramTable {
    eta: Vec<f64>,
    n_cut: usize,
    /// Indexed `[c][a][s][t]`, each `(W_s)_cᴴ (W_t)_a`.
    blocks: Vec<SplitMatrix>,
    /// Bound on the `|+, n_cut⟩` amplitude from each input type.
    edge: [f64; 2],
}

impl GramTable {
    fn qubit_gram(&self, amps: &[Complex64; 2]) -> Gram {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let blocks = std::array::from_fn(|k| {
            let (c, a) = (k / 2, k % 2);
            let mut acc: Option<SplitMatrix> = None;
            for s in 0..2 {
                for t in 0..2 {
                    let w = amps[s].conj() * amps[t];
                    if w == zero {
                        continue;
                    }
                    let block = &self.blocks[((c * 2 + a) * 2 + s) * 2 + t];
                    acc = Some(match acc {
                        None => block.scaled(w),
                        Some(prev) => prev.combine(one, block, w),
                    });
                }
            }
            acc.expect("preparation amplitudes are normalised")
        });
        Gram { blocks }
    }

    pub fn reduce(&self, prep: &ProductPreparation) -> Result<QubitPairDensity> {
        prep.validate()?;
        let (q1, q2) = prep.qubit_amplitudes();
        for q in [&q1, &q2] {
            let bound = q[0].norm() * self.edge[0] + q[1].norm() * self.edge[1];
            edge_check(bound, self.n_cut)?;
        }
        let rho = contract(&self.eta, &self.qubit_gram(&q1), &self.qubit_gram(&q2));
        QubitPairDensity::new(rho)
    }
}

/// Which qubit–mode pair an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    A,
    B,
}

/// Global amplitudes over `|q₁, n_a⟩ ⊗ |q₂, n_b⟩`, stored as a
/// `(pair dim) × (pair dim)` matrix with pair 1 on the rows.
#[derive(Debug, Clone, PartialEq)]
pub struct FullStateVector {
    n_cut: usize,
    amplitudes: DMatrix<Complex64>,
}

impl FullStateVector {
    pub fn initial(prep: &ProductPreparation, s: &SqueezedSpectrum, n_cut: usize) -> Result<Self> {
        prep.validate()?;
        if n_cut <= s.n_max() {
            return Err(Error::Domain(format!("cutoff {n_cut} must exceed the spectrum's n_max {}", s.n_max())));
        }
        let dim = 2 * (n_cut + 1);
        let (q1, q2) = prep.qubit_amplitudes();
        let mut amplitudes = DMatrix::zeros(dim, dim);
        for (n, &eta) in s.eta().iter().enumerate() {
            for (x, ax) in q1.iter().enumerate() {
                for (y, ay) in q2.iter().enumerate() {
                    let i = pair_index(n_cut, x == 1, n);
                    let j = pair_index(n_cut, y == 1, n);
                    amplitudes[(i, j)] += ax * ay * eta;
                }
            }
        }
        Ok(Self { n_cut, amplitudes })
    }

    pub fn n_cut(&self) -> usize {
        self.n_cut
    }

    pub fn amplitude(&self, q1: bool, n_a: usize, q2: bool, n_b: usize) -> Complex64 {
        self.amplitudes[(pair_index(self.n_cut, q1, n_a), pair_index(self.n_cut, q2, n_b))]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Applies a pair operator to one factor.
    pub fn apply_pair(&mut self, mode: Mode, op: &DMatrix<Complex64>) {
        self.amplitudes = match mode {
            Mode::A => op * &self.amplitudes,
            Mode::B => &self.amplitudes * op.transpose(),
        };
    }

    /// `⟨Σ (qubit excitation + photon number)⟩` over both pairs.
    pub fn excitation_number(&self) -> f64 {
        let dim = 2 * (self.n_cut + 1);
        let count = |i: usize| (i / (self.n_cut + 1) + i % (self.n_cut + 1)) as f64;
        let mut total = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                total += self.amplitudes[(i, j)].norm_sqr() * (count(i) + count(j));
            }
        }
        total
    }

    /// Largest amplitude on any basis state with `n_a` or `n_b` at the cutoff.
    pub fn max_amplitude_at_cutoff(&self) -> f64 {
        let mut max: f64 = 0.0;
        let dim = 2 * (self.n_cut + 1);
        for q in [false, true] {
            let edge = pair_index(self.n_cut, q, self.n_cut);
            for k in 0..dim {
                max = max.max(self.amplitudes[(edge, k)].norm()).max(self.amplitudes[(k, edge)].norm());
            }
        }
        max
    }

    /// Traces out both modes.
    pub fn reduced_qubits(&self) -> Matrix4<Complex64> {
        let rows = self.n_cut + 1;
        let mut rho = Matrix4::zeros();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for na in 0..rows {
                            for nb in 0..rows {
                                acc += self.amplitudes[(a * rows + na, b * rows + nb)]
                                    * self.amplitudes[(c * rows + na, d * rows + nb)].conj();
                            }
                        }
                        rho[(2 * a + b, 2 * c + d)] = acc;
                    }
                }
            }
        }
        rho
    }

    /// Trace of the two-mode state left after tracing out the qubits.
    pub fn field_trace(&self) -> f64 {
        let rows = self.n_cut + 1;
        let mut tr = 0.0;
        for na in 0..rows {
            for nb in 0..rows {
                for a in 0..2 {
                    for b in 0..2 {
                        tr += self.amplitudes[(a * rows + na, b * rows + nb)].norm_sqr();
                    }
                }
            }
        }
        tr
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{max_abs_diff, MM, PP};

    #[test]
    fn hamiltonian_couplings() {
        let h = build_pair_hamiltonian(1).unwrap();
        assert_eq!(h.matrix()[(h.index(true, 0), h.index(false, 1))], 1.0);
        let h = build_pair_hamiltonian(4).unwrap();
        assert_eq!(h.matrix()[(h.index(true, 3), h.index(false, 4))], 2.0);
        let ground = h.index(false, 0);
        assert!(h.matrix().row(ground).iter().all(|&x| x == 0.0));
        assert!(matches!(build_pair_hamiltonian(0), Err(Error::Domain(_))));
    }

    #[test]
    fn identity_at_tau_zero() {
        let s = SqueezedSpectrum::build(0.7, 1e-12).unwrap();
        let oracle = HilbertOracle::new(&s).unwrap();
        for prep in [ProductPreparation::ground(), ProductPreparation::new(0.4, 1.9, 0.3, 2.0).unwrap()] {
            let rho = oracle.evolve(&prep, 0.0).unwrap();
            let mut expected = prep.density().into_matrix();
            expected *= Complex64::new(s.norm_sqr(), 0.0);
            let expected = QubitPairDensity::new_unchecked(expected);
            assert!(max_abs_diff(&rho, &expected) < 1e-12);
        }
    }

    #[test]
    fn full_rabi_flop_from_single_photons() {
        let s = SqueezedSpectrum::from_amplitudes(vec![0.0, 1.0]).unwrap();
        let rho = evolve(&ProductPreparation::ground(), &s, PI / 2.0).unwrap();
        assert!(max_abs_diff(&rho, &QubitPairDensity::basis_state(PP)) < 1e-10);
    }

    #[test]
    fn fast_and_explicit_reductions_agree() {
        let s = SqueezedSpectrum::build(0.5, 1e-12).unwrap();
        let oracle = HilbertOracle::new(&s).unwrap();
        let prep = ProductPreparation::new(0.7, 2.5, 1.1, 0.4).unwrap();
        let tau = 2.3;
        let fast = oracle.evolve(&prep, tau).unwrap();
        let explicit = QubitPairDensity::new(oracle.evolve_state(&prep, tau).unwrap().reduced_qubits()).unwrap();
        assert!(max_abs_diff(&fast, &explicit) < 1e-12);

        let real_prep = ProductPreparation::new(0.7, 2.5, 0.0, 0.0).unwrap();
        let table = oracle.slice(tau).unwrap().gram_table();
        let via_table = table.reduce(&real_prep).unwrap();
        let direct = oracle.evolve(&real_prep, tau).unwrap();
        assert!(max_abs_diff(&via_table, &direct) < 1e-12);
    }

    #[test]
    fn cutoff_must_exceed_spectrum() {
        let s = SqueezedSpectrum::build(0.5, 1e-12).unwrap();
        assert!(HilbertOracle::with_cutoff(&s, s.n_max()).is_err());
    }

    #[test]
    fn leaking_past_the_cutoff_is_reported() {
        // Initial support at |+, n_cut⟩ would need |−, n_cut + 1⟩.
        let s = SqueezedSpectrum::from_amplitudes(vec![0.0, 0.0, 1.0]).unwrap();
        let oracle = HilbertOracle::new(&s).unwrap();
        let mut slice = oracle.slice(0.7).unwrap();
        let edge = pair_index(slice.n_cut, true, slice.n_cut);
        slice.plus.re[(edge, 2)] = 0.5;
        let err = slice.reduce(&ProductPreparation::excited()).unwrap_err();
        assert!(matches!(err, Error::Truncation { .. }));
    }

    #[test]
    fn ground_preparation_never_reaches_the_cutoff_level() {
        let s = SqueezedSpectrum::build(0.86, 1e-12).unwrap();
        let oracle = HilbertOracle::new(&s).unwrap();
        let state = oracle.evolve_state(&ProductPreparation::ground(), 4.2).unwrap();
        assert!(state.max_amplitude_at_cutoff() < CUTOFF_AMPLITUDE_TOL);
        let rho = QubitPairDensity::new(state.reduced_qubits()).unwrap();
        assert!(rho.get(MM, MM).re > 0.0);
    }
}
