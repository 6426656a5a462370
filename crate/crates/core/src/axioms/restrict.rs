use crate::composition::span_rank;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::model::{StateVector, TheoryKind, TheoryModel};
use crate::random;

/// A model confined to the span of some of its parent's basis states.
///
/// `kept` always refers to indices of the root model, so nested restrictions
/// compose by intersection.
#[derive(Debug, Clone)]
pub struct RestrictedModel {
    root: TheoryModel,
    kept: Vec<usize>,
    model: TheoryModel,
}

/// Restricts `model` to the basis states listed in `kept` (0-based).
pub fn subspace_restrict(model: &TheoryModel, kept: &[usize]) -> Result<RestrictedModel> {
    let mut kept = kept.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.is_empty() {
        return Err(Error::domain("cannot restrict to an empty set"));
    }
    if let Some(&bad) = kept.iter().find(|&&i| i >= model.n()) {
        return Err(Error::domain(format!(
            "index {bad} out of range for N = {}",
            model.n()
        )));
    }
    let m = kept.len();
    let native = match model.kind() {
        TheoryKind::Classical => TheoryModel::classical(m)?,
        TheoryKind::Quantum => TheoryModel::quantum(m)?,
    }
    .with_tolerances(model.tolerances());
    Ok(RestrictedModel {
        root: model.clone(),
        kept,
        model: native,
    })
}

impl RestrictedModel {
    /// The restricted system as a native model of dimension `M`.
    pub fn model(&self) -> &TheoryModel {
        &self.model
    }

    pub fn root(&self) -> &TheoryModel {
        &self.root
    }

    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    /// Further restriction; `kept` indexes the root model and must lie
    /// inside the current subspace.
    pub fn restrict(&self, kept: &[usize]) -> Result<RestrictedModel> {
        if let Some(&bad) = kept.iter().find(|i| !self.kept.contains(i)) {
            return Err(Error::domain(format!(
                "index {bad} is outside the restricted subspace"
            )));
        }
        subspace_restrict(&self.root, kept)
    }

    /// The root-model state that the local state `p` corresponds to.
    pub fn embed_state(&self, p: &StateVector) -> Result<StateVector> {
        Error::check_len(self.model.k(), p.len())?;
        match (self.model.frame(), self.root.frame()) {
            (Some(local), Some(root)) => {
                let rho = local.hermitian_from_p(p)?;
                let n = self.root.n();
                let mut big = CMatrix::zeros(n, n);
                for (a, &ra) in self.kept.iter().enumerate() {
                    for (b, &rb) in self.kept.iter().enumerate() {
                        big[(ra, rb)] = rho[(a, b)];
                    }
                }
                root.rho_to_p(&big)
            }
            _ => {
                let mut out = vec![0.0; self.root.k()];
                for (x, &i) in p.iter().zip(&self.kept) {
                    out[i] = *x;
                }
                Ok(StateVector::new(out))
            }
        }
    }

    /// Rank of the span of random subspace states in root coordinates;
    /// equals `K(M)` when the subspace behaves like a native system.
    pub fn span_rank(&self, samples: usize, seed: u64) -> Result<usize> {
        let mut rng = random::rng(seed);
        let mut rows = Vec::with_capacity(samples);
        for i in 0..samples {
            let p = if i % 2 == 0 {
                self.model.sample_pure_state(&mut rng)
            } else {
                self.model.sample_mixed_state(&mut rng)
            };
            rows.push(self.embed_state(&p)?.into_inner());
        }
        Ok(span_rank(&rows, self.root.tolerances().svd_rank))
    }
}

impl PartialEq for RestrictedModel {
    fn eq(&self, other: &Self) -> bool {
        self.kept == other.kept
            && self.root.descriptor() == other.root.descriptor()
            && self.model.descriptor() == other.model.descriptor()
    }
}
