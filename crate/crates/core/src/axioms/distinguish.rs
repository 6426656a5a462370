use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, projector, trace_product, CMatrix};
use crate::lp;
use crate::model::{EffectVector, StateVector, TheoryModel};

/// Upper bound on the candidate list for the exhaustive subset search.
pub const MAX_CANDIDATES: usize = 12;

/// States together with effects that tell them apart in one shot:
/// `effects[i] . states[j] = delta_ij`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistinguishabilityCertificate {
    /// Positions of the chosen states in the candidate list.
    pub indices: Vec<usize>,
    pub states: Vec<StateVector>,
    pub effects: Vec<EffectVector>,
    pub size: usize,
}

impl DistinguishabilityCertificate {
    /// Re-checks every invariant of the certificate against `model`.
    pub fn verify(&self, model: &TheoryModel) -> Result<bool> {
        let tol = model.tolerances().eigenvalue;
        if self.states.len() != self.size || self.effects.len() != self.size {
            return Ok(false);
        }
        let mut total = vec![0.0; model.k()];
        for (i, r) in self.effects.iter().enumerate() {
            if !model.validate_effect(r)?.is_valid() {
                return Ok(false);
            }
            for (t, x) in total.iter_mut().zip(r.iter()) {
                *t += x;
            }
            for (j, p) in self.states.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                if (crate::model::probability(r, p)? - expected).abs() > tol {
                    return Ok(false);
                }
            }
        }
        let total = EffectVector::new(total);
        Ok(self.size == 0 || model.validate_effect(&total)?.is_valid())
    }
}

/// Largest subset of `candidates` that one measurement distinguishes
/// perfectly, found by exhaustive search from the largest size down.
pub fn max_distinguishable(
    model: &TheoryModel,
    candidates: &[StateVector],
) -> Result<DistinguishabilityCertificate> {
    if candidates.len() > MAX_CANDIDATES {
        return Err(Error::Resource(format!(
            "{} candidates exceeds the search limit of {MAX_CANDIDATES}",
            candidates.len()
        )));
    }
    if candidates.is_empty() {
        return Err(Error::domain("no candidate states"));
    }
    let tol = model.tolerances().eigenvalue;
    for (i, p) in candidates.iter().enumerate() {
        if !model.validate_state(p)?.is_valid() {
            return Err(Error::domain(format!("candidate {i} is not a valid state")));
        }
        let norm = model.normalization(p)?;
        if (norm - 1.0).abs() > tol {
            return Err(Error::domain(format!(
                "candidate {i} is not normalized ({norm})"
            )));
        }
    }

    let supports = match model.frame() {
        Some(frame) => Some(
            candidates
                .iter()
                .map(|p| frame.hermitian_from_p(p))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };

    let m = candidates.len();
    for size in (1..=m).rev() {
        for subset in combinations(m, size) {
            let found = if size == 1 {
                Some(vec![model.unit_effect()])
            } else {
                match &supports {
                    Some(rhos) => quantum_witness(model, rhos, &subset, tol)?,
                    None => classical_witness(candidates, &subset),
                }
            };
            if let Some(effects) = found {
                return Ok(DistinguishabilityCertificate {
                    states: subset.iter().map(|&i| candidates[i].clone()).collect(),
                    indices: subset,
                    effects,
                    size,
                });
            }
        }
    }
    unreachable!("a single candidate is always distinguishable")
}

fn classical_witness(candidates: &[StateVector], subset: &[usize]) -> Option<Vec<EffectVector>> {
    let states: Vec<&[f64]> = subset.iter().map(|&i| candidates[i].as_slice()).collect();
    lp::distinguishing_effects(&states).map(|rs| rs.into_iter().map(EffectVector::new).collect())
}

/// Distinguishable iff supports are pairwise orthogonal; the witnesses are
/// the support projectors.
fn quantum_witness(
    model: &TheoryModel,
    rhos: &[CMatrix],
    subset: &[usize],
    tol: f64,
) -> Result<Option<Vec<EffectVector>>> {
    for (x, &i) in subset.iter().enumerate() {
        for &j in &subset[x + 1..] {
            if trace_product(&rhos[i], &rhos[j]).re.abs() > tol {
                return Ok(None);
            }
        }
    }
    let frame = model.frame().expect("quantum model");
    let mut effects = Vec::with_capacity(subset.len());
    for &i in subset {
        let n = frame.dim();
        let mut support = CMatrix::zeros(n, n);
        for (value, vector) in hermitian_eigen(&rhos[i]) {
            if value > tol {
                support += projector(&vector);
            }
        }
        effects.push(frame.operator_to_effect(&support)?.0);
    }
    Ok(Some(effects))
}

/// Subsets of `0..m` of the given size in lexicographic order.
fn combinations(m: usize, size: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = Some((0..size).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut i = size;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if next[i] < m - size + i {
                next[i] += 1;
                for j in i + 1..size {
                    next[j] = next[j - 1] + 1;
                }
                current = Some(next);
                break;
            }
        }
        Some(out)
    })
}

/// The model's natural pure states, capped at [`MAX_CANDIDATES`]: the boxes
/// plus the uniform mixture classically, the fiducial states quantumly.
pub fn canonical_pure_family(model: &TheoryModel) -> Vec<StateVector> {
    match model.frame() {
        None => {
            let n = model.n();
            let mut family = crate::classical::simplex_vertices(n);
            family.pop();
            if family.len() < MAX_CANDIDATES {
                family.push(StateVector::new(vec![1.0 / n as f64; n]));
            }
            family
        }
        Some(frame) => frame
            .projectors()
            .iter()
            .take(MAX_CANDIDATES)
            .map(|p| frame.rho_to_p(p).expect("projectors are Hermitian"))
            .collect(),
    }
}
