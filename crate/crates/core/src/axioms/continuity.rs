use serde::Serialize;

use crate::classical::classical_discreteness_gap;
use crate::error::{Error, Result};
use crate::model::{is_pure, StateVector, TheoryModel};
use crate::quantum::{unitary_path, DensityOperator};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "witness", rename_all = "snake_case")]
pub enum ContinuityWitness {
    /// Pure states joined by reversible steps.
    Path { states: Vec<StateVector> },
    /// Reversible maps are isolated: distinct ones are at least `gap` apart.
    Obstruction { gap: f64 },
}

/// A continuous reversible path between two pure states, or a certificate
/// that none exists.
pub fn continuity_witness(
    model: &TheoryModel,
    from: &StateVector,
    to: &StateVector,
    steps: usize,
) -> Result<ContinuityWitness> {
    for (name, p) in [("source", from), ("target", to)] {
        if !is_pure(model, p)? {
            return Err(Error::domain(format!("{name} state is mixed")));
        }
    }
    let tol = model.tolerances().eigenvalue;
    if from
        .iter()
        .zip(to.iter())
        .all(|(a, b)| (a - b).abs() <= tol)
    {
        return Ok(ContinuityWitness::Path {
            states: vec![from.clone()],
        });
    }
    match model.frame() {
        Some(frame) => {
            let tols = model.tolerances();
            let rho_from = DensityOperator::with_tolerances(frame.hermitian_from_p(from)?, &tols)?;
            let rho_to = DensityOperator::with_tolerances(frame.hermitian_from_p(to)?, &tols)?;
            Ok(ContinuityWitness::Path {
                states: unitary_path(frame, &rho_from, &rho_to, steps)?,
            })
        }
        None => Ok(ContinuityWitness::Obstruction {
            gap: classical_discreteness_gap(model.n())?,
        }),
    }
}
