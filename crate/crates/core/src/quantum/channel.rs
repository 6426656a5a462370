use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermiticity_defect, CMatrix, ZERO};
use crate::tolerance::Tolerances;

/// A linear map on `N x N` operators, stored as its (unnormalized) Choi
/// matrix `J = sum_ij |i><j| (x) ch(|i><j|)`, indexed `(i * N + a, j * N + b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    dim: usize,
    choi: CMatrix,
}

impl QuantumChannel {
    /// Choi matrix of `rho -> sum_k K rho K^dagger`.
    pub fn from_kraus(ops: &[CMatrix]) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::domain("empty Kraus list"))?;
        let n = first.nrows();
        let mut choi = CMatrix::zeros(n * n, n * n);
        for op in ops {
            if op.nrows() != n || op.ncols() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: op.nrows(),
                });
            }
            for i in 0..n {
                for j in 0..n {
                    for a in 0..n {
                        for b in 0..n {
                            choi[(i * n + a, j * n + b)] += op[(a, i)] * op[(b, j)].conj();
                        }
                    }
                }
            }
        }
        Ok(Self { dim: n, choi })
    }

    /// Accepts any Hermitian Choi matrix of the right shape; positivity is
    /// checked separately by [`Self::check`].
    pub fn from_choi(n: usize, choi: CMatrix) -> Result<Self> {
        if choi.nrows() != n * n || choi.ncols() != n * n {
            return Err(Error::Dimension {
                expected: n * n,
                found: choi.nrows(),
            });
        }
        let defect = hermiticity_defect(&choi);
        if defect > 1e-9 {
            return Err(Error::domain(format!(
                "Choi matrix is not Hermitian (defect {defect:.3e})"
            )));
        }
        Ok(Self { dim: n, choi })
    }

    /// Choi matrix of an arbitrary linear map given by its action on operators.
    pub fn from_map(n: usize, map: impl Fn(&CMatrix) -> CMatrix) -> Result<Self> {
        let mut choi = CMatrix::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                let mut unit = CMatrix::from_element(n, n, ZERO);
                unit[(i, j)] = crate::linalg::ONE;
                let image = map(&unit);
                for a in 0..n {
                    for b in 0..n {
                        choi[(i * n + a, j * n + b)] = image[(a, b)];
                    }
                }
            }
        }
        Self::from_choi(n, choi)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_kraus(&[CMatrix::identity(n, n)]).expect("identity Kraus operator")
    }

    pub fn unitary(u: &CMatrix) -> Result<Self> {
        Self::from_kraus(std::slice::from_ref(u))
    }

    /// `rho -> tr(rho) I / N`.
    pub fn fully_depolarizing(n: usize) -> Self {
        let scale = 1.0 / n as f64;
        Self::from_map(n, |x| {
            CMatrix::identity(n, n) * (crate::linalg::trace(x) * scale)
        })
        .expect("depolarizing map is Hermitian preserving")
    }

    /// `rho -> rho^T`, positive but not completely positive.
    pub fn transpose(n: usize) -> Self {
        Self::from_map(n, |x| x.transpose()).expect("transpose is Hermitian preserving")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn choi(&self) -> &CMatrix {
        &self.choi
    }

    /// `ch(x)_ab = sum_ij x_ij J[(i,a),(j,b)]`.
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        let n = self.dim;
        let mut out = CMatrix::from_element(n, n, ZERO);
        for i in 0..n {
            for j in 0..n {
                let xij = x[(i, j)];
                if xij == ZERO {
                    continue;
                }
                for a in 0..n {
                    for b in 0..n {
                        out[(a, b)] += xij * self.choi[(i * n + a, j * n + b)];
                    }
                }
            }
        }
        out
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &QuantumChannel) -> Result<Self> {
        if self.dim != first.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: first.dim,
            });
        }
        Self::from_map(self.dim, |x| self.apply(&first.apply(x)))
    }

    /// `sum_a J[(i,a),(j,a)]`; equals `(sum_k K^dagger K)^T` for Kraus maps.
    pub fn trace_out_output(&self) -> CMatrix {
        let n = self.dim;
        CMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|a| self.choi[(i * n + a, j * n + a)]).sum()
        })
    }

    /// Complete positivity (Choi PSD) and trace non-increase.
    pub fn check(&self, tol: &Tolerances) -> Result<()> {
        let ev = hermitian_eigenvalues(&self.choi);
        let min = ev.first().copied().unwrap_or(0.0);
        if min < -tol.eigenvalue {
            return Err(Error::CompletePositivity {
                min_eigenvalue: min / self.dim as f64,
            });
        }
        let tr = hermitian_eigenvalues(&self.trace_out_output());
        let max = tr.last().copied().unwrap_or(0.0);
        if max > 1.0 + tol.eigenvalue {
            return Err(Error::NotAllowed(format!(
                "trace-increasing map (largest eigenvalue of sum K^dagger K is {max})"
            )));
        }
        Ok(())
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        let t = self.trace_out_output() - CMatrix::identity(self.dim, self.dim);
        t.iter().all(|z| z.norm() <= tol)
    }
}
