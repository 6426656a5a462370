use nalgebra::DMatrix;

use super::channel::QuantumChannel;
use super::hermitian;
use crate::error::{Error, Result};
use crate::linalg::{
    basis_ket, hermitian_eigenvalues, hermiticity_defect, projector, CMatrix, CVector, C64, I,
};
use crate::model::{EffectVector, StateVector, TransformMatrix, Validity};
use crate::tolerance::Tolerances;

/// Largest dimension accepted by [`FiducialFrame::standard`].
pub const MAX_STANDARD_DIM: usize = 8;

/// A set of `N^2` fiducial projectors together with the real linear map
/// between Hermitian operators and probability vectors.
///
/// `forward` sends Hermitian coordinates (see [`hermitian`]) to the vector of
/// fiducial probabilities `p_k = tr(P_k rho)`; `inverse` undoes it.
#[derive(Debug, Clone)]
pub struct FiducialFrame {
    dim: usize,
    projectors: Vec<CMatrix>,
    forward: DMatrix<f64>,
    inverse: DMatrix<f64>,
    tol: Tolerances,
}

/// Hermitian operator rebuilt from a probability vector, with its validity
/// as a (sub-normalized) density operator.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub rho: CMatrix,
    pub validity: Validity,
}

impl FiducialFrame {
    /// Diagonal projectors `|a><a|`, then for each pair `a < b` the projectors
    /// onto `(|a> + |b>)/sqrt 2` and `(|a> + i|b>)/sqrt 2`.
    ///
    /// For a qubit this is the ordering z+, z-, x+, y+.
    pub fn standard(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("dimension must be at least 1"));
        }
        if n > MAX_STANDARD_DIM {
            return Err(Error::Resource(format!(
                "dimension {n} exceeds the supported maximum {MAX_STANDARD_DIM}"
            )));
        }
        // entries written out exactly rather than squared from 1/sqrt 2 kets
        let half = C64::new(0.5, 0.0);
        let pair_projector = |a: usize, b: usize, off: C64| {
            let mut m = CMatrix::zeros(n, n);
            m[(a, a)] = half;
            m[(b, b)] = half;
            m[(a, b)] = off;
            m[(b, a)] = off.conj();
            m
        };
        let mut projectors: Vec<CMatrix> = (0..n).map(|a| projector(&basis_ket(n, a))).collect();
        for (a, b) in hermitian::pairs(n) {
            projectors.push(pair_projector(a, b, half));
            projectors.push(pair_projector(a, b, C64::new(0.0, -0.5)));
        }
        Self::from_projectors(n, projectors, Tolerances::DEFAULT)
    }

    /// Frame on `C^(na nb)` whose projectors are `P_k (x) Q_l`, indexed
    /// `k * K_b + l`.
    pub fn tensor(a: &FiducialFrame, b: &FiducialFrame) -> Result<Self> {
        let mut projectors = Vec::with_capacity(a.k() * b.k());
        for pa in &a.projectors {
            for pb in &b.projectors {
                projectors.push(pa.kronecker(pb));
            }
        }
        Self::from_projectors(a.dim * b.dim, projectors, a.tol)
    }

    /// Builds a frame from arbitrary projectors, checking that they are
    /// Hermitian, PSD and linearly independent.
    pub fn from_projectors(n: usize, projectors: Vec<CMatrix>, tol: Tolerances) -> Result<Self> {
        Error::check_len(n * n, projectors.len())?;
        for (k, p) in projectors.iter().enumerate() {
            if p.nrows() != n || p.ncols() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: p.nrows(),
                });
            }
            if hermiticity_defect(p) > tol.hermitian {
                return Err(Error::domain(format!(
                    "fiducial operator {k} is not Hermitian"
                )));
            }
        }
        let k = n * n;
        let mut forward = DMatrix::<f64>::zeros(k, k);
        for (row, p) in projectors.iter().enumerate() {
            forward.set_row(row, &hermitian::trace_against_basis(p).transpose());
        }
        let sv = forward.singular_values();
        let largest = sv.max();
        let smallest = sv.min();
        if smallest.is_nan() || smallest <= tol.svd_rank * largest {
            return Err(Error::Internal(format!(
                "fiducial operators are not linearly independent (singular values {smallest:.3e} / {largest:.3e})"
            )));
        }
        let inverse = forward
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Internal("frame map is singular".into()))?;
        Ok(Self {
            dim: n,
            projectors,
            forward,
            inverse,
            tol,
        })
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    /// Hilbert-space dimension `N`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of fiducial probabilities, `N^2`.
    pub fn k(&self) -> usize {
        self.dim * self.dim
    }

    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tol
    }

    /// Matrix taking Hermitian coordinates to fiducial probabilities.
    pub fn forward_map(&self) -> &DMatrix<f64> {
        &self.forward
    }

    pub fn inverse_map(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    fn check_operator(&self, m: &CMatrix, what: &str) -> Result<()> {
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: m.nrows(),
            });
        }
        let defect = hermiticity_defect(m);
        if defect > self.tol.hermitian {
            return Err(Error::domain(format!(
                "{what} is not Hermitian (defect {defect:.3e})"
            )));
        }
        Ok(())
    }

    /// `p_k = tr(P_k rho)`.
    pub fn rho_to_p(&self, rho: &CMatrix) -> Result<StateVector> {
        self.check_operator(rho, "density operator")?;
        let p = &self.forward * hermitian::coords(rho);
        Ok(StateVector::new(p.as_slice().to_vec()))
    }

    /// The unique Hermitian operator reproducing `p`, flagged with its
    /// validity as a state.
    pub fn p_to_rho(&self, p: &StateVector) -> Result<Reconstruction> {
        let rho = self.hermitian_from_p(p)?;
        let validity = self.state_validity(&rho);
        Ok(Reconstruction { rho, validity })
    }

    pub(crate) fn hermitian_from_p(&self, p: &[f64]) -> Result<CMatrix> {
        Error::check_len(self.k(), p.len())?;
        let h = &self.inverse * nalgebra::DVector::from_column_slice(p);
        Ok(hermitian::from_coords(self.dim, h.as_slice()))
    }

    /// PSD with trace at most one, within the eigenvalue tolerance.
    pub fn state_validity(&self, rho: &CMatrix) -> Validity {
        let ev = hermitian_eigenvalues(rho);
        let min = ev.first().copied().unwrap_or(0.0);
        let trace: f64 = ev.iter().sum();
        if min < -self.tol.eigenvalue {
            Validity::invalid(format!("negative eigenvalue {min:.3e}"))
        } else if trace > 1.0 + self.tol.eigenvalue {
            Validity::invalid(format!("trace {trace} exceeds 1"))
        } else {
            Validity::Valid
        }
    }

    /// `0 <= A <= I` within the eigenvalue tolerance.
    pub fn effect_validity(&self, a: &CMatrix) -> Validity {
        let ev = hermitian_eigenvalues(a);
        let min = ev.first().copied().unwrap_or(0.0);
        let max = ev.last().copied().unwrap_or(0.0);
        if min < -self.tol.eigenvalue {
            Validity::invalid(format!("negative eigenvalue {min:.3e}"))
        } else if max > 1.0 + self.tol.eigenvalue {
            Validity::invalid(format!("eigenvalue {max} exceeds 1"))
        } else {
            Validity::Valid
        }
    }

    /// The `r` with `r . p = tr(A rho(p))` for every `p`, plus the validity of
    /// `A` as an effect.
    pub fn operator_to_effect(&self, a: &CMatrix) -> Result<(EffectVector, Validity)> {
        self.check_operator(a, "effect operator")?;
        let traces = hermitian::trace_against_basis(a);
        let r = self.inverse.transpose() * traces;
        Ok((
            EffectVector::new(r.as_slice().to_vec()),
            self.effect_validity(a),
        ))
    }

    /// Inverse of [`Self::operator_to_effect`].
    pub fn effect_to_operator(&self, r: &[f64]) -> Result<CMatrix> {
        Error::check_len(self.k(), r.len())?;
        let traces = self.forward.transpose() * nalgebra::DVector::from_column_slice(r);
        Ok(hermitian::from_basis_traces(self.dim, traces.as_slice()))
    }

    /// `Z` with `Z rho_to_p(rho) = rho_to_p(ch(rho))`. Fails unless the channel
    /// is completely positive and trace non-increasing.
    pub fn channel_to_z(&self, ch: &QuantumChannel) -> Result<TransformMatrix> {
        if ch.dim() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: ch.dim(),
            });
        }
        ch.check(&self.tol)?;
        Ok(self.superoperator_to_z(ch))
    }

    /// Same as [`Self::channel_to_z`] without the membership checks.
    pub fn superoperator_to_z(&self, ch: &QuantumChannel) -> TransformMatrix {
        let k = self.k();
        let mut m = DMatrix::<f64>::zeros(k, k);
        for j in 0..k {
            let image = ch.apply(&hermitian::basis_operator(self.dim, j));
            m.set_column(j, &hermitian::coords(&image));
        }
        TransformMatrix::from_matrix(&self.forward * m * &self.inverse)
    }

    /// Rebuilds the linear map on operators that `z` induces.
    pub fn z_to_superoperator(&self, z: &TransformMatrix) -> Result<QuantumChannel> {
        Error::check_len(self.k(), z.k())?;
        let n = self.dim;
        let m = &self.inverse * z.matrix() * &self.forward;
        let image = |j: usize| hermitian::from_coords(n, m.column(j).as_slice());
        let half = C64::new(0.5, 0.0);
        let mut choi = CMatrix::zeros(n * n, n * n);
        let mut place = |i: usize, j: usize, block: &CMatrix| {
            for a in 0..n {
                for b in 0..n {
                    choi[(i * n + a, j * n + b)] = block[(a, b)];
                }
            }
        };
        for a in 0..n {
            place(a, a, &image(a));
        }
        for (idx, (a, b)) in hermitian::pairs(n).enumerate() {
            let sym = image(n + 2 * idx);
            let anti = image(n + 2 * idx + 1);
            let upper = (&sym - &anti * I) * half;
            let lower = (&sym + &anti * I) * half;
            place(a, b, &upper);
            place(b, a, &lower);
        }
        QuantumChannel::from_choi(n, choi)
    }

    /// Whether `z` is induced by a completely positive, trace non-increasing map.
    pub fn is_valid_transform(&self, z: &TransformMatrix) -> Validity {
        if z.k() != self.k() {
            return Validity::invalid(format!(
                "expected {0}x{0} matrix, found {1}x{1}",
                self.k(),
                z.k()
            ));
        }
        if z.matrix().iter().any(|x| !x.is_finite()) {
            return Validity::invalid("non-finite entry");
        }
        match self
            .z_to_superoperator(z)
            .and_then(|ch| ch.check(&self.tol))
        {
            Ok(()) => Validity::Valid,
            Err(e) => Validity::invalid(e.to_string()),
        }
    }

    /// Probability vector of a pure state.
    pub fn ket_to_p(&self, psi: &CVector) -> StateVector {
        let p = &self.forward * hermitian::coords(&projector(psi));
        StateVector::new(p.as_slice().to_vec())
    }
}
