//! Multimode Gaussian quantum state engine: complex mean amplitudes plus a
//! real quadrature covariance matrix, with symplectic transformations for
//! every optical element used in the detection and entanglement schemes.
//!
//! Conventions
//! - Quadratures: X^phi = e^{-i phi} da + e^{i phi} da†, so X+ = X^0 and
//!   X- = X^{pi/2}. Vacuum variance is 1 (shot-noise units).
//! - The covariance matrix is ordered (X+_1, X-_1, X+_2, X-_2, ...),
//!   interleaved per basis entry, with symmetrized second moments.
//! - Mean amplitudes are complex and carry all phase information; the
//!   relative phase theta between a TEM_pq / TEM_qp pair is
//!   arg(alpha_qp) - arg(alpha_pq).
//! - Measurement rotations happen at read time; the stored covariance is
//!   only mutated by actual optical elements.
//!
//! States are immutable values: every element operation returns a new state.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::modes::ModeIndex;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("basis must not be empty")]
    EmptyBasis,
    #[error("duplicate basis entry {0}")]
    DuplicateEntry(Entry),
    #[error("basis entry {0} not found in state")]
    MissingEntry(Entry),
    #[error("beam '{0}' not found in state")]
    MissingBeam(String),
    #[error("entry {0} already carries a source")]
    AlreadySourced(Entry),
    #[error("beamsplitter ports alias the same entry {0}")]
    AliasedEntries(Entry),
    #[error("transmissivity must lie in [0, 1], got {0}")]
    InvalidTransmissivity(f64),
    #[error("efficiency must lie in [0, 1], got {0}")]
    InvalidEfficiency(f64),
    #[error("lens separation {d} is unsupported; only d = 2f ({two}) and d = sqrt(2) f ({sqrt2}) are modeled")]
    UnsupportedLensSeparation { d: f64, two: f64, sqrt2: f64 },
    #[error("covariance is not positive semidefinite: eigenvalue {0}")]
    NotPositiveSemidefinite(f64),
    #[error("covariance matrix is not symmetric (residual {0})")]
    NotSymmetric(f64),
    #[error("covariance has wrong dimension {got}, expected {expected}")]
    WrongDimension { got: usize, expected: usize },
    #[error("squeezer config invalid: {0}")]
    InvalidSqueezer(String),
    #[error("target beam '{0}' already exists")]
    BeamExists(String),
    #[error("combiner input beam '{beam}' carries {mode} on the wrong-parity port")]
    WrongParity { beam: String, mode: ModeIndex },
}

/// One slot of the state basis: a mode within a named beam.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Entry {
    pub beam: String,
    pub mode: ModeIndex,
}

impl Entry {
    pub fn new(beam: impl Into<String>, mode: ModeIndex) -> Self {
        Self { beam: beam.into(), mode }
    }
}

impl std::fmt::Display for Entry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.beam, self.mode)
    }
}

/// Input-state parameterization of a (possibly squeezed) source.
///
/// `v_sq`/`v_anti` are the variances of the squeezed and anti-squeezed
/// quadratures in shot-noise units; `angle` is the lab-frame orientation of
/// the squeezed quadrature; `alpha` is the complex mean amplitude.
/// An "amplitude squeezed" bright beam has `angle = arg(alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezerConfig {
    pub v_sq: f64,
    pub v_anti: f64,
    pub angle: f64,
    pub alpha: C64,
}

impl SqueezerConfig {
    pub fn new(v_sq: f64, v_anti: f64, angle: f64, alpha: C64) -> Result<Self, StateError> {
        if !(v_sq > 0.0) {
            return Err(StateError::InvalidSqueezer(format!("v_sq must be positive, got {v_sq}")));
        }
        // Purity allows equality; anything below 1/v_sq violates uncertainty.
        if v_anti < 1.0 / v_sq - 1e-12 {
            return Err(StateError::InvalidSqueezer(format!(
                "v_anti = {v_anti} below the uncertainty bound 1/v_sq = {}",
                1.0 / v_sq
            )));
        }
        Ok(Self { v_sq, v_anti, angle, alpha })
    }

    /// Minimum-uncertainty squeezer: v_anti = 1 / v_sq.
    pub fn pure(v_sq: f64, angle: f64, alpha: C64) -> Result<Self, StateError> {
        Self::new(v_sq, 1.0 / v_sq, angle, alpha)
    }

    pub fn coherent(alpha: C64) -> Self {
        Self { v_sq: 1.0, v_anti: 1.0, angle: 0.0, alpha }
    }

    pub fn is_pure(&self) -> bool {
        (self.v_sq * self.v_anti - 1.0).abs() < 1e-9
    }
}

/// A reference to one rotated quadrature X^angle of one basis entry.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub entry: Entry,
    pub angle: f64,
}

/// Multimode Gaussian state over (beam, mode) entries.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianBeamState {
    basis: Vec<Entry>,
    means: Vec<C64>,
    cov: DMatrix<f64>,
    sourced: Vec<bool>,
}

fn rotation(phi: f64) -> [[f64; 2]; 2] {
    let (s, c) = phi.sin_cos();
    [[c, -s], [s, c]]
}

impl GaussianBeamState {
    /// Vacuum over the given basis: zero means, identity covariance.
    pub fn vacuum_state(basis: Vec<Entry>) -> Result<Self, StateError> {
        if basis.is_empty() {
            return Err(StateError::EmptyBasis);
        }
        for (i, a) in basis.iter().enumerate() {
            if basis.iter().skip(i + 1).any(|b| b == a) {
                return Err(StateError::DuplicateEntry(a.clone()));
            }
        }
        let n = basis.len();
        Ok(Self {
            basis,
            means: vec![C64::new(0.0, 0.0); n],
            cov: DMatrix::identity(2 * n, 2 * n),
            sourced: vec![false; n],
        })
    }

    /// Assemble a state from raw parts. Checks symmetry and positive
    /// semidefiniteness only; physical states built through `vacuum_state`
    /// and element operations additionally satisfy the uncertainty bound,
    /// but this constructor admits idealized limits (e.g. perfectly
    /// correlated quadratures) used to exercise linearized formulas.
    pub fn from_parts(basis: Vec<Entry>, means: Vec<C64>, cov: DMatrix<f64>) -> Result<Self, StateError> {
        if basis.is_empty() {
            return Err(StateError::EmptyBasis);
        }
        let n = basis.len();
        if means.len() != n || cov.nrows() != 2 * n || cov.ncols() != 2 * n {
            return Err(StateError::WrongDimension { got: cov.nrows(), expected: 2 * n });
        }
        let sym_res = (&cov - cov.transpose()).abs().max();
        if sym_res > 1e-10 {
            return Err(StateError::NotSymmetric(sym_res));
        }
        let eigs = cov.clone().symmetric_eigenvalues();
        let min = eigs.min();
        if min < -1e-9 {
            return Err(StateError::NotPositiveSemidefinite(min));
        }
        Ok(Self { basis, means, cov, sourced: vec![true; n] })
    }

    pub fn basis(&self) -> &[Entry] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn means(&self) -> &[C64] {
        &self.means
    }

    pub fn index_of(&self, entry: &Entry) -> Result<usize, StateError> {
        self.basis
            .iter()
            .position(|e| e == entry)
            .ok_or_else(|| StateError::MissingEntry(entry.clone()))
    }

    pub fn mean(&self, entry: &Entry) -> Result<C64, StateError> {
        Ok(self.means[self.index_of(entry)?])
    }

    pub fn beam_indices(&self, beam: &str) -> Vec<usize> {
        self.basis
            .iter()
            .enumerate()
            .filter(|(_, e)| e.beam == beam)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn has_beam(&self, beam: &str) -> bool {
        self.basis.iter().any(|e| e.beam == beam)
    }

    /// Tensor the state with vacuum on additional entries.
    pub fn extend_vacuum(&self, entries: &[Entry]) -> Result<Self, StateError> {
        for e in entries {
            if self.basis.contains(e) {
                return Err(StateError::DuplicateEntry(e.clone()));
            }
        }
        for (i, a) in entries.iter().enumerate() {
            if entries.iter().skip(i + 1).any(|b| b == a) {
                return Err(StateError::DuplicateEntry(a.clone()));
            }
        }
        let n_old = self.len();
        let n = n_old + entries.len();
        let mut basis = self.basis.clone();
        basis.extend(entries.iter().cloned());
        let mut means = self.means.clone();
        means.extend(std::iter::repeat(C64::new(0.0, 0.0)).take(entries.len()));
        let mut cov = DMatrix::identity(2 * n, 2 * n);
        cov.view_mut((0, 0), (2 * n_old, 2 * n_old)).copy_from(&self.cov);
        let mut sourced = self.sourced.clone();
        sourced.extend(std::iter::repeat(false).take(entries.len()));
        Ok(Self { basis, means, cov, sourced })
    }

    /// Remove entries from the state (partial trace over those modes).
    pub fn discard(&self, entries: &[Entry]) -> Result<Self, StateError> {
        let mut drop = vec![false; self.len()];
        for e in entries {
            drop[self.index_of(e)?] = true;
        }
        let keep: Vec<usize> = (0..self.len()).filter(|&i| !drop[i]).collect();
        if keep.is_empty() {
            return Err(StateError::EmptyBasis);
        }
        let n = keep.len();
        let basis = keep.iter().map(|&i| self.basis[i].clone()).collect();
        let means = keep.iter().map(|&i| self.means[i]).collect();
        let sourced = keep.iter().map(|&i| self.sourced[i]).collect();
        let mut cov = DMatrix::zeros(2 * n, 2 * n);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                for da in 0..2 {
                    for db in 0..2 {
                        cov[(2 * a + da, 2 * b + db)] = self.cov[(2 * i + da, 2 * j + db)];
                    }
                }
            }
        }
        Ok(Self { basis, means, cov, sourced })
    }

    /// Replace the vacuum at `entry` with a (squeezed) coherent source.
    pub fn add_source(&self, entry: &Entry, cfg: &SqueezerConfig) -> Result<Self, StateError> {
        let i = self.index_of(entry)?;
        if self.sourced[i] {
            return Err(StateError::AlreadySourced(entry.clone()));
        }
        let mut out = self.clone();
        out.means[i] = cfg.alpha;
        let r = rotation(cfg.angle);
        // R(angle) diag(v_sq, v_anti) R(angle)^T
        let d = [cfg.v_sq, cfg.v_anti];
        for a in 0..2 {
            for b in 0..2 {
                out.cov[(2 * i + a, 2 * i + b)] = (0..2).map(|k| r[a][k] * d[k] * r[b][k]).sum();
            }
        }
        out.sourced[i] = true;
        Ok(out)
    }

    /// Optical phase shift on a single entry: mean -> e^{i phi} mean, block
    /// conjugated by the quadrature rotation through phi.
    pub fn apply_phase(&self, entry: &Entry, phi: f64) -> Result<Self, StateError> {
        let i = self.index_of(entry)?;
        let mut out = self.clone();
        out.means[i] *= C64::from_polar(1.0, phi);
        out.rotate_block(i, phi);
        Ok(out)
    }

    fn rotate_block(&mut self, i: usize, phi: f64) {
        let r = rotation(phi);
        let n2 = self.cov.nrows();
        // rows
        for k in 0..n2 {
            let a = self.cov[(2 * i, k)];
            let b = self.cov[(2 * i + 1, k)];
            self.cov[(2 * i, k)] = r[0][0] * a + r[0][1] * b;
            self.cov[(2 * i + 1, k)] = r[1][0] * a + r[1][1] * b;
        }
        // columns
        for k in 0..n2 {
            let a = self.cov[(k, 2 * i)];
            let b = self.cov[(k, 2 * i + 1)];
            self.cov[(k, 2 * i)] = r[0][0] * a + r[0][1] * b;
            self.cov[(k, 2 * i + 1)] = r[1][0] * a + r[1][1] * b;
        }
    }

    /// Real orthogonal beamsplitter mixing of two entries:
    /// a' = sqrt(t) a + sqrt(1-t) b, b' = sqrt(1-t) a - sqrt(t) b,
    /// applied identically to both quadratures. Self-inverse.
    pub fn apply_beamsplitter(&self, a: &Entry, b: &Entry, t: f64) -> Result<Self, StateError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(StateError::InvalidTransmissivity(t));
        }
        let i = self.index_of(a)?;
        let j = self.index_of(b)?;
        if i == j {
            return Err(StateError::AliasedEntries(a.clone()));
        }
        let (ct, cr) = (t.sqrt(), (1.0 - t).sqrt());
        let mut out = self.clone();
        let (ma, mb) = (out.means[i], out.means[j]);
        out.means[i] = ct * ma + cr * mb;
        out.means[j] = cr * ma - ct * mb;
        let n2 = out.cov.nrows();
        // Mixing acts the same on X+ and X- components: rows then columns.
        for d in 0..2 {
            let (ri, rj) = (2 * i + d, 2 * j + d);
            for k in 0..n2 {
                let va = out.cov[(ri, k)];
                let vb = out.cov[(rj, k)];
                out.cov[(ri, k)] = ct * va + cr * vb;
                out.cov[(rj, k)] = cr * va - ct * vb;
            }
        }
        for d in 0..2 {
            let (ci, cj) = (2 * i + d, 2 * j + d);
            for k in 0..n2 {
                let va = out.cov[(k, ci)];
                let vb = out.cov[(k, cj)];
                out.cov[(k, ci)] = ct * va + cr * vb;
                out.cov[(k, cj)] = cr * va - ct * vb;
            }
        }
        Ok(out)
    }

    /// Astigmatic Gouy phase of a cylindrical-lens pair: mode (p, q) of the
    /// beam picks up e^{i (p psix + q psiy)}. The piston phase common to the
    /// beam (referenced to its first basis entry) is dropped; only the
    /// relative modal phase is observable here.
    pub fn apply_modal_phase(&self, beam: &str, psix: f64, psiy: f64) -> Result<Self, StateError> {
        let idxs = self.beam_indices(beam);
        if idxs.is_empty() {
            return Err(StateError::MissingBeam(beam.to_string()));
        }
        let phase_of = |m: ModeIndex| m.p as f64 * psix + m.q as f64 * psiy;
        let piston = phase_of(self.basis[idxs[0]].mode);
        let mut out = self.clone();
        for &i in &idxs {
            let phi = phase_of(self.basis[i].mode) - piston;
            if phi != 0.0 {
                out.means[i] *= C64::from_polar(1.0, phi);
                out.rotate_block(i, phi);
            }
        }
        Ok(out)
    }

    /// Pure loss on one entry: mixing with a fresh vacuum at transmissivity
    /// eta, with the loss port traced out.
    pub fn apply_loss(&self, entry: &Entry, eta: f64) -> Result<Self, StateError> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(StateError::InvalidEfficiency(eta));
        }
        let i = self.index_of(entry)?;
        let mut out = self.clone();
        let s = eta.sqrt();
        out.means[i] *= s;
        let n2 = out.cov.nrows();
        for d in 0..2 {
            let r = 2 * i + d;
            for k in 0..n2 {
                out.cov[(r, k)] *= s;
            }
            for k in 0..n2 {
                out.cov[(k, r)] *= s;
            }
        }
        for d in 0..2 {
            out.cov[(2 * i + d, 2 * i + d)] += 1.0 - eta;
        }
        Ok(out)
    }

    /// Asymmetric Mach-Zehnder mode separator: modes of `beam` with odd p
    /// route to `odd`, even p to `even`. With eta < 1 every mode first
    /// suffers loss eta (vacuum admixture); inter-port crosstalk is not
    /// modeled.
    pub fn mode_separator(
        &self,
        beam: &str,
        odd: &str,
        even: &str,
        eta: f64,
    ) -> Result<Self, StateError> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(StateError::InvalidEfficiency(eta));
        }
        let idxs = self.beam_indices(beam);
        if idxs.is_empty() {
            return Err(StateError::MissingBeam(beam.to_string()));
        }
        for port in [odd, even] {
            if port != beam && self.has_beam(port) {
                return Err(StateError::BeamExists(port.to_string()));
            }
        }
        let mut out = self.clone();
        for &i in &idxs {
            if eta < 1.0 {
                let e = out.basis[i].clone();
                out = out.apply_loss(&e, eta)?;
            }
            let mode = out.basis[i].mode;
            out.basis[i].beam = if mode.p % 2 == 1 { odd.to_string() } else { even.to_string() };
        }
        Ok(out)
    }

    /// The mode separator run in reverse: merge the odd-parity beam and the
    /// even-parity beam into a single output beam. Inputs must sit on the
    /// matching-parity port.
    pub fn mode_combiner(&self, odd: &str, even: &str, out_beam: &str) -> Result<Self, StateError> {
        let odd_idxs = self.beam_indices(odd);
        let even_idxs = self.beam_indices(even);
        if odd_idxs.is_empty() {
            return Err(StateError::MissingBeam(odd.to_string()));
        }
        if even_idxs.is_empty() {
            return Err(StateError::MissingBeam(even.to_string()));
        }
        if out_beam != odd && out_beam != even && self.has_beam(out_beam) {
            return Err(StateError::BeamExists(out_beam.to_string()));
        }
        for &i in &odd_idxs {
            if self.basis[i].mode.p % 2 == 0 {
                return Err(StateError::WrongParity { beam: odd.to_string(), mode: self.basis[i].mode });
            }
        }
        for &i in &even_idxs {
            if self.basis[i].mode.p % 2 == 1 {
                return Err(StateError::WrongParity { beam: even.to_string(), mode: self.basis[i].mode });
            }
        }
        let mut out = self.clone();
        for &i in odd_idxs.iter().chain(even_idxs.iter()) {
            out.basis[i].beam = out_beam.to_string();
        }
        // Merging must not collide mode labels.
        for (i, a) in out.basis.iter().enumerate() {
            if out.basis.iter().skip(i + 1).any(|b| b == a) {
                return Err(StateError::DuplicateEntry(a.clone()));
            }
        }
        Ok(out)
    }

    /// Direction (cos, sin) embedding of a rotated quadrature in the 2N space.
    pub fn quadrature_vector(&self, spec: &QuadratureSpec) -> Result<DVector<f64>, StateError> {
        let i = self.index_of(&spec.entry)?;
        let mut v = DVector::zeros(2 * self.len());
        let (s, c) = spec.angle.sin_cos();
        v[2 * i] = c;
        v[2 * i + 1] = s;
        Ok(v)
    }

    /// Symmetrized second moment <dX^phi1_A dX^phi2_B> read from the
    /// covariance by rotation at measurement time.
    pub fn quadrature_covariance(
        &self,
        a: &QuadratureSpec,
        b: &QuadratureSpec,
    ) -> Result<f64, StateError> {
        let va = self.quadrature_vector(a)?;
        let vb = self.quadrature_vector(b)?;
        Ok((va.transpose() * &self.cov * vb)[(0, 0)])
    }

    pub fn quadrature_variance(&self, spec: &QuadratureSpec) -> Result<f64, StateError> {
        self.quadrature_covariance(spec, spec)
    }

    /// Mean of the rotated quadrature: 2 Re(alpha e^{-i phi}).
    pub fn quadrature_mean(&self, spec: &QuadratureSpec) -> Result<f64, StateError> {
        let i = self.index_of(&spec.entry)?;
        Ok(2.0 * (self.means[i] * C64::from_polar(1.0, -spec.angle)).re)
    }

    /// Variance of an arbitrary real linear combination c . dX.
    pub fn linear_combination_variance(&self, c: &DVector<f64>) -> f64 {
        assert_eq!(c.len(), 2 * self.len());
        (c.transpose() * &self.cov * c)[(0, 0)]
    }

    /// Total mean photon number, mean-field plus fluctuation parts.
    pub fn mean_photon_number(&self) -> f64 {
        let mean_part: f64 = self.means.iter().map(|a| a.norm_sqr()).sum();
        let fluct_part: f64 = (0..self.len())
            .map(|i| (self.cov[(2 * i, 2 * i)] + self.cov[(2 * i + 1, 2 * i + 1)] - 2.0) / 4.0)
            .sum();
        mean_part + fluct_part
    }

    /// Mean photon number restricted to one beam.
    pub fn beam_photon_number(&self, beam: &str) -> f64 {
        self.beam_indices(beam)
            .into_iter()
            .map(|i| {
                self.means[i].norm_sqr()
                    + (self.cov[(2 * i, 2 * i)] + self.cov[(2 * i + 1, 2 * i + 1)] - 2.0) / 4.0
            })
            .sum()
    }

    /// Draw `count` zero-mean Gaussian quadrature fluctuation vectors with
    /// covariance `cov`, deterministic under a fixed seed. Returns a
    /// (2N x count) matrix, one sample per column.
    pub fn sample_fluctuations(&self, count: usize, seed: u64) -> Result<DMatrix<f64>, StateError> {
        let n2 = 2 * self.len();
        let l = self.cov_factor()?;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut out = DMatrix::zeros(n2, count);
        let normal = StandardNormal;
        let mut z = DVector::zeros(n2);
        for col in 0..count {
            for k in 0..n2 {
                z[k] = normal.sample(&mut rng);
            }
            let x = &l * &z;
            out.set_column(col, &x);
        }
        Ok(out)
    }

    /// Factor cov = L L^T via Cholesky, falling back to an eigenvalue square
    /// root for semidefinite covariances. Rejects indefinite matrices with
    /// the offending eigenvalue.
    fn cov_factor(&self) -> Result<DMatrix<f64>, StateError> {
        if let Some(ch) = nalgebra::Cholesky::new(self.cov.clone()) {
            return Ok(ch.l());
        }
        let eig = nalgebra::SymmetricEigen::new(self.cov.clone());
        let min = eig.eigenvalues.min();
        if min < -1e-9 {
            return Err(StateError::NotPositiveSemidefinite(min));
        }
        let sqrt_vals = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
        Ok(&eig.eigenvectors * DMatrix::from_diagonal(&sqrt_vals))
    }

    /// Numerical health of the state: symmetry residual, minimum covariance
    /// eigenvalue, and minimum eigenvalue of cov + i Omega (uncertainty).
    pub fn validate(&self) -> StateHealth {
        let sym = (&self.cov - self.cov.transpose()).abs().max();
        let cov_eig = self.cov.clone().symmetric_eigenvalues().min();
        // cov + i Omega >= 0 for Hermitian M = A + iB iff the real matrix
        // [[A, -B], [B, A]] is PSD.
        let n2 = self.cov.nrows();
        let n_modes = n2 / 2;
        let mut omega = DMatrix::zeros(n2, n2);
        for m in 0..n_modes {
            omega[(2 * m, 2 * m + 1)] = 1.0;
            omega[(2 * m + 1, 2 * m)] = -1.0;
        }
        let mut doubled = DMatrix::zeros(2 * n2, 2 * n2);
        doubled.view_mut((0, 0), (n2, n2)).copy_from(&self.cov);
        doubled.view_mut((n2, n2), (n2, n2)).copy_from(&self.cov);
        doubled.view_mut((0, n2), (n2, n2)).copy_from(&(-&omega));
        doubled.view_mut((n2, 0), (n2, n2)).copy_from(&omega);
        let unc_eig = doubled.symmetric_eigenvalues().min();
        StateHealth { symmetry_residual: sym, min_cov_eigenvalue: cov_eig, min_uncertainty_eigenvalue: unc_eig }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateHealth {
    pub symmetry_residual: f64,
    pub min_cov_eigenvalue: f64,
    pub min_uncertainty_eigenvalue: f64,
}

/// Relative modal phase of the two canonical cylindrical-lens separations:
/// pi at d = 2f, pi/2 at d = sqrt(2) f. Returned as (psix, psiy) with the
/// relative phase assigned to psix - psiy.
pub fn lens_pair_phase(d: f64, f: f64) -> Result<(f64, f64), StateError> {
    let two = 2.0 * f;
    let sqrt2 = std::f64::consts::SQRT_2 * f;
    let tol = 1e-9 * f.abs().max(1.0);
    if (d - two).abs() <= tol {
        Ok((std::f64::consts::PI, 0.0))
    } else if (d - sqrt2).abs() <= tol {
        Ok((std::f64::consts::FRAC_PI_2, 0.0))
    } else {
        Err(StateError::UnsupportedLensSeparation { d, two, sqrt2 })
    }
}

/// Empirical covariance of a (2N x count) fluctuation sample matrix.
pub fn sample_covariance(samples: &DMatrix<f64>) -> DMatrix<f64> {
    let n = samples.nrows();
    let count = samples.ncols() as f64;
    let mut cov = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let mut acc = 0.0;
            for c in 0..samples.ncols() {
                acc += samples[(a, c)] * samples[(b, c)];
            }
            cov[(a, b)] = acc / count;
            cov[(b, a)] = cov[(a, b)];
        }
    }
    cov
}
