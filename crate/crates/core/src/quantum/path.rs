use super::{DensityOperator, FiducialFrame, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::{real, CMatrix, CVector};
use crate::model::{StateVector, TransformMatrix};

/// States along a one-parameter unitary orbit, and the fiducial-space matrix
/// of the unitary taking each state to the next.
#[derive(Debug, Clone)]
pub struct UnitaryPath {
    pub states: Vec<StateVector>,
    pub step: TransformMatrix,
}

/// `steps + 1` pure states from `from` to `to` along a unitary rotation in
/// the plane spanned by the two kets.
pub fn unitary_path(
    frame: &FiducialFrame,
    from: &DensityOperator,
    to: &DensityOperator,
    steps: usize,
) -> Result<Vec<StateVector>> {
    unitary_path_with_step(frame, from, to, steps).map(|p| p.states)
}

pub fn unitary_path_with_step(
    frame: &FiducialFrame,
    from: &DensityOperator,
    to: &DensityOperator,
    steps: usize,
) -> Result<UnitaryPath> {
    let tol = frame.tolerances().eigenvalue;
    if steps == 0 {
        return Err(Error::domain("steps must be at least 1"));
    }
    for (name, rho) in [("source", from), ("target", to)] {
        if rho.dim() != frame.dim() {
            return Err(Error::Dimension {
                expected: frame.dim(),
                found: rho.dim(),
            });
        }
        if !rho.is_pure(tol) {
            return Err(Error::domain(format!("{name} state is not pure")));
        }
    }
    let start = from.leading_ket();
    let mut end = to.leading_ket();
    let overlap = start.dotc(&end);
    let magnitude = overlap.norm();
    if magnitude > 0.0 {
        // same ray, real non-negative overlap
        end *= overlap.conj() / magnitude;
    }
    let angle = magnitude.min(1.0).acos();
    let orth = if angle.sin() > 1e-12 {
        Some((&end - &start * real(magnitude)).unscale(angle.sin()))
    } else {
        None
    };

    let rotation = |t: f64| -> CMatrix {
        let n = frame.dim();
        let mut u = CMatrix::identity(n, n);
        if let Some(orth) = &orth {
            let s_s = &start * start.adjoint();
            let o_o = orth * orth.adjoint();
            let o_s = orth * start.adjoint();
            let s_o = &start * orth.adjoint();
            u += (s_s + o_o) * real(t.cos() - 1.0) + (o_s - s_o) * real(t.sin());
        }
        u
    };
    let ket_at = |t: f64| -> CVector {
        match &orth {
            Some(orth) => &start * real(t.cos()) + orth * real(t.sin()),
            None => start.clone(),
        }
    };

    let mut states = Vec::with_capacity(steps + 1);
    states.push(frame.rho_to_p(from.matrix())?);
    for i in 1..steps {
        states.push(frame.ket_to_p(&ket_at(angle * i as f64 / steps as f64)));
    }
    states.push(frame.rho_to_p(to.matrix())?);

    let step_channel = QuantumChannel::unitary(&rotation(angle / steps as f64))?;
    let step = frame.channel_to_z(&step_channel)?;
    Ok(UnitaryPath { states, step })
}
