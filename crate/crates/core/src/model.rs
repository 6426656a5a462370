//! Theory-agnostic states, effects, transformations and the model that
//! decides which of them are allowed.

use std::ops::Deref;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, hermitian_eigenvalues};
use crate::quantum::FiducialFrame;
use crate::random;
use crate::tolerance::Tolerances;

macro_rules! real_vector {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(Vec<f64>);

        impl $name {
            pub fn new(entries: Vec<f64>) -> Self {
                Self(entries)
            }

            pub fn zeros(k: usize) -> Self {
                Self(vec![0.0; k])
            }

            pub fn as_slice(&self) -> &[f64] {
                &self.0
            }

            pub fn into_inner(self) -> Vec<f64> {
                self.0
            }
        }

        impl Deref for $name {
            type Target = [f64];

            fn deref(&self) -> &[f64] {
                &self.0
            }
        }

        impl From<Vec<f64>> for $name {
            fn from(v: Vec<f64>) -> Self {
                Self(v)
            }
        }
    };
}

real_vector!(
    /// Fiducial probabilities `p`. May be sub-normalized; all zeros is the
    /// null state.
    StateVector
);

real_vector!(
    /// Measurement vector `r`; the outcome probability on `p` is `r . p`.
    EffectVector
);

impl StateVector {
    pub fn null(k: usize) -> Self {
        Self::zeros(k)
    }

    pub fn is_null(&self, tol: f64) -> bool {
        self.0.iter().all(|x| x.abs() <= tol)
    }
}

/// `K x K` real matrix acting as `p -> Z p`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformMatrix(DMatrix<f64>);

impl TransformMatrix {
    pub fn from_matrix(m: DMatrix<f64>) -> Self {
        assert!(m.is_square(), "transform matrix must be square");
        Self(m)
    }

    pub fn identity(k: usize) -> Self {
        Self(DMatrix::identity(k, k))
    }

    pub fn from_row_major(k: usize, entries: &[f64]) -> Result<Self> {
        Error::check_len(k * k, entries.len())?;
        Ok(Self(DMatrix::from_row_slice(k, k, entries)))
    }

    pub fn to_row_major(&self) -> Vec<f64> {
        self.0.transpose().as_slice().to_vec()
    }

    pub fn k(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn apply(&self, p: &StateVector) -> Result<StateVector> {
        Error::check_len(self.k(), p.len())?;
        let out = &self.0 * DVector::from_column_slice(p);
        Ok(StateVector::new(out.as_slice().to_vec()))
    }

    /// `self * other`, i.e. `other` acts first.
    pub fn compose(&self, other: &TransformMatrix) -> Result<Self> {
        Error::check_len(self.k(), other.k())?;
        Ok(Self(&self.0 * &other.0))
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a TransformMatrix>) -> Option<Self> {
        let mut iter = items.into_iter();
        let first = iter.next()?.0.clone();
        Some(Self(iter.fold(first, |acc, z| acc + &z.0)))
    }

    pub fn try_inverse(&self) -> Option<Self> {
        self.0.clone().try_inverse().map(Self)
    }

    pub fn frobenius_distance(&self, other: &TransformMatrix) -> f64 {
        (&self.0 - &other.0).norm()
    }
}

/// Outcome of a membership test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "lowercase")]
pub enum Validity {
    Valid,
    Invalid(String),
}

impl Validity {
    pub fn invalid(reason: impl Into<String>) -> Self {
        Validity::Invalid(reason.into())
    }

    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoryKind {
    Classical,
    Quantum,
}

/// Serializable name of a model. Composites nest their parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelDescriptor {
    Classical {
        n: usize,
    },
    Quantum {
        n: usize,
    },
    Composite {
        a: Box<ModelDescriptor>,
        b: Box<ModelDescriptor>,
    },
}

#[derive(Debug, Clone)]
enum Representation {
    Classical,
    Quantum(Arc<FiducialFrame>),
}

/// A classical or quantum system of dimension `N` with `K` fiducial
/// probabilities, and membership tests for states, effects and
/// transformations.
#[derive(Debug, Clone)]
pub struct TheoryModel {
    descriptor: ModelDescriptor,
    n: usize,
    repr: Representation,
    tol: Tolerances,
}

impl TheoryModel {
    /// Ball in `n` boxes: `K = N`, states in the sub-normalized simplex.
    pub fn classical(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("classical model needs at least one box"));
        }
        Ok(Self::classical_named(ModelDescriptor::Classical { n }, n))
    }

    /// Quantum system on `C^n` in the standard fiducial frame, `K = N^2`.
    pub fn quantum(n: usize) -> Result<Self> {
        let frame = FiducialFrame::standard(n)?;
        Ok(Self::quantum_with_frame(
            ModelDescriptor::Quantum { n },
            frame,
        ))
    }

    pub(crate) fn classical_named(descriptor: ModelDescriptor, n: usize) -> Self {
        Self {
            descriptor,
            n,
            repr: Representation::Classical,
            tol: Tolerances::DEFAULT,
        }
    }

    pub(crate) fn quantum_with_frame(descriptor: ModelDescriptor, frame: FiducialFrame) -> Self {
        let tol = frame.tolerances();
        Self {
            descriptor,
            n: frame.dim(),
            repr: Representation::Quantum(Arc::new(frame)),
            tol,
        }
    }

    pub fn from_descriptor(descriptor: &ModelDescriptor) -> Result<Self> {
        match descriptor {
            ModelDescriptor::Classical { n } => Self::classical(*n),
            ModelDescriptor::Quantum { n } => Self::quantum(*n),
            ModelDescriptor::Composite { a, b } => {
                let a = Self::from_descriptor(a)?;
                let b = Self::from_descriptor(b)?;
                Ok(crate::composition::compose_models(&a, &b)?.into_model())
            }
        }
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        if let Representation::Quantum(frame) = &mut self.repr {
            *frame = Arc::new(frame.as_ref().clone().with_tolerances(tol));
        }
        self
    }

    pub fn kind(&self) -> TheoryKind {
        match self.repr {
            Representation::Classical => TheoryKind::Classical,
            Representation::Quantum(_) => TheoryKind::Quantum,
        }
    }

    /// Maximum number of perfectly distinguishable states.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of fiducial probabilities.
    pub fn k(&self) -> usize {
        match self.repr {
            Representation::Classical => self.n,
            Representation::Quantum(_) => self.n * self.n,
        }
    }

    pub fn descriptor(&self) -> &ModelDescriptor {
        &self.descriptor
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tol
    }

    pub fn frame(&self) -> Option<&FiducialFrame> {
        match &self.repr {
            Representation::Classical => None,
            Representation::Quantum(frame) => Some(frame),
        }
    }

    pub fn null_state(&self) -> StateVector {
        StateVector::null(self.k())
    }

    /// The effect whose value on `p` is the probability of any non-null
    /// outcome: entry sum classically, trace quantumly.
    pub fn unit_effect(&self) -> EffectVector {
        match &self.repr {
            Representation::Classical => EffectVector::new(vec![1.0; self.n]),
            Representation::Quantum(frame) => {
                let id = crate::linalg::CMatrix::identity(self.n, self.n);
                frame
                    .operator_to_effect(&id)
                    .expect("identity is Hermitian")
                    .0
            }
        }
    }

    /// Probability that the system is released at all.
    pub fn normalization(&self, p: &StateVector) -> Result<f64> {
        probability(&self.unit_effect(), p)
    }

    pub fn validate_state(&self, p: &StateVector) -> Result<Validity> {
        Error::check_len(self.k(), p.len())?;
        if p.iter().any(|x| !x.is_finite()) {
            return Ok(Validity::invalid("non-finite entry"));
        }
        let tol = self.tol.eigenvalue;
        Ok(match &self.repr {
            Representation::Classical => {
                let sum: f64 = p.iter().sum();
                if let Some(x) = p.iter().find(|&&x| x < -tol) {
                    Validity::invalid(format!("negative probability {x}"))
                } else if sum > 1.0 + tol {
                    Validity::invalid(format!("probabilities sum to {sum} > 1"))
                } else {
                    Validity::Valid
                }
            }
            Representation::Quantum(frame) => frame.p_to_rho(p)?.validity,
        })
    }

    pub fn validate_effect(&self, r: &EffectVector) -> Result<Validity> {
        Error::check_len(self.k(), r.len())?;
        if r.iter().any(|x| !x.is_finite()) {
            return Ok(Validity::invalid("non-finite entry"));
        }
        let tol = self.tol.eigenvalue;
        Ok(match &self.repr {
            Representation::Classical => match r.iter().find(|&&x| x < -tol || x > 1.0 + tol) {
                Some(x) => Validity::invalid(format!("entry {x} outside [0, 1]")),
                None => Validity::Valid,
            },
            Representation::Quantum(frame) => frame.effect_validity(&frame.effect_to_operator(r)?),
        })
    }

    /// Membership in the allowed transformations: substochastic matrices
    /// classically, completely positive trace non-increasing maps quantumly.
    pub fn validate_transform(&self, z: &TransformMatrix) -> Result<Validity> {
        Error::check_len(self.k(), z.k())?;
        Ok(match &self.repr {
            Representation::Classical => {
                crate::classical::substochastic_validity(z, self.tol.eigenvalue)
            }
            Representation::Quantum(frame) => frame.is_valid_transform(z),
        })
    }

    /// `Z` allowed, invertible, and `Z^-1` allowed.
    pub fn is_reversible(&self, z: &TransformMatrix) -> Result<bool> {
        if !self.validate_transform(z)?.is_valid() {
            return Ok(false);
        }
        match z.try_inverse() {
            Some(inv) => Ok(self.validate_transform(&inv)?.is_valid()),
            None => Ok(false),
        }
    }

    /// A random pure state: a random box classically, a Haar-random ket
    /// quantumly.
    pub fn sample_pure_state<R: Rng + ?Sized>(&self, rng: &mut R) -> StateVector {
        match &self.repr {
            Representation::Classical => {
                let mut p = vec![0.0; self.n];
                p[rng.random_range(0..self.n)] = 1.0;
                StateVector::new(p)
            }
            Representation::Quantum(frame) => frame.ket_to_p(&random::haar_ket(self.n, rng)),
        }
    }

    /// A random normalized state, generically mixed.
    pub fn sample_mixed_state<R: Rng + ?Sized>(&self, rng: &mut R) -> StateVector {
        match &self.repr {
            Representation::Classical => StateVector::new(random::simplex_point(self.n, rng)),
            Representation::Quantum(frame) => frame
                .rho_to_p(&random::random_density(self.n, rng))
                .expect("Ginibre states are Hermitian"),
        }
    }

    /// A random effect from the allowed set.
    pub fn sample_effect<R: Rng + ?Sized>(&self, rng: &mut R) -> EffectVector {
        match &self.repr {
            Representation::Classical => {
                EffectVector::new((0..self.n).map(|_| rng.random::<f64>()).collect())
            }
            Representation::Quantum(frame) => {
                frame
                    .operator_to_effect(&random::random_effect_operator(self.n, rng))
                    .expect("sampled operator is Hermitian")
                    .0
            }
        }
    }

    /// Checks by sampling that `z` maps states into states.
    pub fn maps_states_into_states<R: Rng + ?Sized>(
        &self,
        z: &TransformMatrix,
        samples: usize,
        rng: &mut R,
    ) -> Result<bool> {
        for i in 0..samples {
            let p = if i % 2 == 0 {
                self.sample_pure_state(rng)
            } else {
                self.sample_mixed_state(rng)
            };
            if !self.validate_state(&z.apply(&p)?)?.is_valid() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `r . p`.
pub fn probability(r: &EffectVector, p: &StateVector) -> Result<f64> {
    Error::check_len(r.len(), p.len())?;
    Ok(dot(r, p))
}

/// `lambda pa + (1 - lambda) pb`.
pub fn mix(pa: &StateVector, pb: &StateVector, lambda: f64) -> Result<StateVector> {
    Error::check_len(pa.len(), pb.len())?;
    check_weight(lambda)?;
    Ok(StateVector::new(
        pa.iter()
            .zip(pb.iter())
            .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
            .collect(),
    ))
}

pub(crate) fn check_weight(lambda: f64) -> Result<()> {
    if (0.0..=1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "mixing weight {lambda} outside [0, 1]"
        )))
    }
}

/// Whether `p` is an extreme point of the state set other than the null
/// state. Classically a coordinate basis vector; quantumly a rank-one
/// density operator of unit trace.
pub fn is_pure(model: &TheoryModel, p: &StateVector) -> Result<bool> {
    let tol = model.tolerances().eigenvalue;
    if let Validity::Invalid(reason) = model.validate_state(p)? {
        return Err(Error::domain(format!("not a valid state: {reason}")));
    }
    if p.is_null(tol) {
        return Err(Error::domain("the null state is neither pure nor mixed"));
    }
    Ok(match model.frame() {
        None => {
            let ones = p.iter().filter(|&&x| (x - 1.0).abs() <= tol).count();
            let zeros = p.iter().filter(|&&x| x.abs() <= tol).count();
            ones == 1 && zeros == p.len() - 1
        }
        Some(frame) => {
            let ev = hermitian_eigenvalues(&frame.hermitian_from_p(p)?);
            let (top, rest) = ev.split_last().expect("non-empty spectrum");
            (top - 1.0).abs() <= tol && rest.iter().all(|x| x.abs() <= tol)
        }
    })
}

/// JSON form of a state or effect: the model descriptor plus `entries`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorDocument {
    #[serde(flatten)]
    pub model: ModelDescriptor,
    pub entries: Vec<f64>,
}

/// JSON form of a transformation: `entries` holds the `K x K` matrix in
/// row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformDocument {
    #[serde(flatten)]
    pub model: ModelDescriptor,
    pub entries: Vec<f64>,
}

impl TransformDocument {
    pub fn new(model: ModelDescriptor, z: &TransformMatrix) -> Self {
        Self {
            model,
            entries: z.to_row_major(),
        }
    }

    pub fn to_matrix(&self) -> Result<TransformMatrix> {
        let k = (self.entries.len() as f64).sqrt().round() as usize;
        TransformMatrix::from_row_major(k, &self.entries)
    }
}
