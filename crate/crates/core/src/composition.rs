//! Composite systems built from two models of the same kind.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{kron_vec, numerical_rank, rows_to_matrix};
use crate::model::{EffectVector, ModelDescriptor, StateVector, TheoryKind, TheoryModel};
use crate::quantum::FiducialFrame;
use crate::random;

/// Largest composite Hilbert-space dimension built from quantum parts.
pub const MAX_COMPOSITE_DIM: usize = 16;

/// Two component models and the composite they form. Fiducial index `(k, l)`
/// of the composite is `k * K_b + l`.
#[derive(Debug, Clone)]
pub struct CompositeModel {
    a: TheoryModel,
    b: TheoryModel,
    joint: TheoryModel,
}

/// `N = N_a N_b` and `K = K_a K_b`. Quantum composites use the tensor products
/// of the component fiducial projectors.
pub fn compose_models(a: &TheoryModel, b: &TheoryModel) -> Result<CompositeModel> {
    if a.kind() != b.kind() {
        return Err(Error::domain(
            "hybrid classical-quantum composites are not supported",
        ));
    }
    let descriptor = ModelDescriptor::Composite {
        a: Box::new(a.descriptor().clone()),
        b: Box::new(b.descriptor().clone()),
    };
    let n = a.n() * b.n();
    let joint = match (a.frame(), b.frame()) {
        (Some(fa), Some(fb)) => {
            if n > MAX_COMPOSITE_DIM {
                return Err(Error::Resource(format!(
                    "composite dimension {n} exceeds {MAX_COMPOSITE_DIM}"
                )));
            }
            TheoryModel::quantum_with_frame(descriptor, FiducialFrame::tensor(fa, fb)?)
        }
        _ => TheoryModel::classical_named(descriptor, n),
    };
    Ok(CompositeModel {
        a: a.clone(),
        b: b.clone(),
        joint: joint.with_tolerances(a.tolerances()),
    })
}

impl CompositeModel {
    pub fn part_a(&self) -> &TheoryModel {
        &self.a
    }

    pub fn part_b(&self) -> &TheoryModel {
        &self.b
    }

    pub fn model(&self) -> &TheoryModel {
        &self.joint
    }

    pub fn into_model(self) -> TheoryModel {
        self.joint
    }

    /// `p_(k,l) = pa_k pb_l`.
    pub fn product_state(&self, pa: &StateVector, pb: &StateVector) -> Result<StateVector> {
        Error::check_len(self.a.k(), pa.len())?;
        Error::check_len(self.b.k(), pb.len())?;
        Ok(StateVector::new(kron_vec(pa, pb)))
    }

    /// Effect of measuring `ra` on the first part and `rb` on the second.
    pub fn product_effect(&self, ra: &EffectVector, rb: &EffectVector) -> Result<EffectVector> {
        Error::check_len(self.a.k(), ra.len())?;
        Error::check_len(self.b.k(), rb.len())?;
        Ok(EffectVector::new(kron_vec(ra, rb)))
    }
}

/// How component states are drawn for [`separable_span_dim_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductSampling {
    /// Pure states (Haar or random box) mixed with generic mixed states.
    Generic,
    /// Only the first `N` fiducial basis states of each part, i.e.
    /// computational-basis products.
    BasisOnly,
}

/// Rank of the span of random product states; `K_a K_b` expected.
pub fn separable_span_dim(
    a: &TheoryModel,
    b: &TheoryModel,
    samples: usize,
    seed: u64,
) -> Result<usize> {
    separable_span_dim_with(a, b, samples, seed, ProductSampling::Generic)
}

pub fn separable_span_dim_with(
    a: &TheoryModel,
    b: &TheoryModel,
    samples: usize,
    seed: u64,
    sampling: ProductSampling,
) -> Result<usize> {
    let needed = a.k() * b.k() + 10;
    if samples < needed {
        return Err(Error::domain(format!(
            "need at least {needed} samples, got {samples}"
        )));
    }
    let composite = compose_models(a, b)?;
    let mut rng = random::rng(seed);
    let mut rows = Vec::with_capacity(samples);
    for i in 0..samples {
        let (pa, pb) = match sampling {
            ProductSampling::Generic => {
                if i % 2 == 0 {
                    (a.sample_pure_state(&mut rng), b.sample_pure_state(&mut rng))
                } else {
                    (
                        a.sample_mixed_state(&mut rng),
                        b.sample_mixed_state(&mut rng),
                    )
                }
            }
            ProductSampling::BasisOnly => (
                basis_state(a, rng.random_range(0..a.n()))?,
                basis_state(b, rng.random_range(0..b.n()))?,
            ),
        };
        rows.push(composite.product_state(&pa, &pb)?.into_inner());
    }
    Ok(span_rank(&rows, a.tolerances().svd_rank))
}

/// Numerical rank of a set of vectors.
pub fn span_rank(rows: &[Vec<f64>], relative: f64) -> usize {
    let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
    numerical_rank(&rows_to_matrix(&refs), relative)
}

/// Pure state number `index` of the preferred basis: box `index`
/// classically, `|index>` quantumly.
pub fn basis_state(model: &TheoryModel, index: usize) -> Result<StateVector> {
    if index >= model.n() {
        return Err(Error::domain(format!("basis index {index} out of range")));
    }
    Ok(match model.frame() {
        None => {
            let mut p = vec![0.0; model.n()];
            p[index] = 1.0;
            StateVector::new(p)
        }
        Some(frame) => frame.ket_to_p(&crate::linalg::basis_ket(model.n(), index)),
    })
}

impl TheoryKind {
    /// `K` as a function of `N` for this theory.
    pub fn degrees_of_freedom(self, n: usize) -> usize {
        match self {
            TheoryKind::Classical => n,
            TheoryKind::Quantum => n * n,
        }
    }
}
