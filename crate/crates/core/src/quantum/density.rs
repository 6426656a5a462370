use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigen, hermitian_eigenvalues, hermiticity_defect, projector, CMatrix, CVector,
};
use crate::tolerance::Tolerances;

/// Hermitian, PSD, trace at most one.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator(CMatrix);

impl DensityOperator {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tolerances(m, &Tolerances::DEFAULT)
    }

    pub fn with_tolerances(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::domain("density operator must be square"));
        }
        let defect = hermiticity_defect(&m);
        if defect > tol.hermitian {
            return Err(Error::domain(format!(
                "not Hermitian (defect {defect:.3e})"
            )));
        }
        let ev = hermitian_eigenvalues(&m);
        let min = ev.first().copied().unwrap_or(0.0);
        let trace: f64 = ev.iter().sum();
        if min < -tol.eigenvalue {
            return Err(Error::domain(format!("negative eigenvalue {min:.3e}")));
        }
        if trace > 1.0 + tol.eigenvalue {
            return Err(Error::domain(format!("trace {trace} exceeds 1")));
        }
        Ok(Self(m))
    }

    pub fn pure(psi: &CVector) -> Result<Self> {
        Self::new(projector(&psi.normalize()))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self(CMatrix::identity(n, n).unscale(n as f64))
    }

    pub fn null(n: usize) -> Self {
        Self(CMatrix::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_inner(self) -> CMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        crate::linalg::trace(&self.0).re
    }

    /// Rank one with unit trace.
    pub fn is_pure(&self, tol: f64) -> bool {
        let ev = hermitian_eigenvalues(&self.0);
        let (top, rest) = ev.split_last().expect("non-empty");
        (top - 1.0).abs() <= tol && rest.iter().all(|x| x.abs() <= tol)
    }

    /// Eigenvector of the largest eigenvalue.
    pub fn leading_ket(&self) -> CVector {
        hermitian_eigen(&self.0).pop().expect("non-empty").1
    }
}
