use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::Serialize;

use crate::linalg::numerical_rank;
use crate::model::{mix, EffectVector, StateVector, TheoryModel};

/// Fixed mixing weights always included in [`default_probes`].
pub const DEFAULT_WEIGHTS: [f64; 3] = [0.25, 0.5, 0.75];

/// A pair of states and a mixing weight.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Probe {
    pub a: StateVector,
    pub b: StateVector,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum AffinityOutcome {
    /// Every probe satisfied the mixing identity. `effect` is the
    /// least-squares `r` with `f(p) = r . p`, absent when the probe states do
    /// not span the space.
    Affine {
        effect: Option<EffectVector>,
        residual: f64,
    },
    Violation {
        probe: Probe,
        lhs: f64,
        rhs: f64,
    },
}

/// Tests `f(lambda a + (1-lambda) b) = lambda f(a) + (1-lambda) f(b)` on every
/// probe, then reconstructs the effect vector.
pub fn verify_affinity<F>(f: F, probes: &[Probe], tol: f64) -> AffinityOutcome
where
    F: Fn(&StateVector) -> f64,
{
    let mut states: Vec<StateVector> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    for probe in probes {
        let Ok(mixed) = mix(&probe.a, &probe.b, probe.lambda) else {
            continue;
        };
        let (fa, fb, fm) = (f(&probe.a), f(&probe.b), f(&mixed));
        let rhs = probe.lambda * fa + (1.0 - probe.lambda) * fb;
        if (fm - rhs).abs() > tol {
            return AffinityOutcome::Violation {
                probe: probe.clone(),
                lhs: fm,
                rhs,
            };
        }
        states.extend([probe.a.clone(), probe.b.clone(), mixed]);
        values.extend([fa, fb, fm]);
    }
    let Some(k) = states.first().map(|s| s.len()) else {
        return AffinityOutcome::Affine {
            effect: None,
            residual: 0.0,
        };
    };
    let x = DMatrix::from_fn(states.len(), k, |i, j| states[i][j]);
    if numerical_rank(&x, 1e-8) < k {
        return AffinityOutcome::Affine {
            effect: None,
            residual: 0.0,
        };
    }
    let y = DVector::from_vec(values);
    let r = x
        .clone()
        .svd(true, true)
        .solve(&y, 1e-12)
        .expect("SVD with both factors");
    let residual = (&x * &r - &y).amax();
    AffinityOutcome::Affine {
        effect: Some(EffectVector::new(r.as_slice().to_vec())),
        residual,
    }
}

/// Probes on `model`: the null state paired with each pure state, pure
/// pairs at the fixed weights, and `random` pairs at random weights.
pub fn default_probes<R: Rng + ?Sized>(
    model: &TheoryModel,
    random: usize,
    rng: &mut R,
) -> Vec<Probe> {
    let mut probes = Vec::new();
    let k = model.k();
    for i in 0..k + 1 {
        let a = if i == 0 {
            model.null_state()
        } else {
            model.sample_pure_state(rng)
        };
        let b = model.sample_pure_state(rng);
        probes.push(Probe {
            a,
            b,
            lambda: DEFAULT_WEIGHTS[i % DEFAULT_WEIGHTS.len()],
        });
    }
    for &lambda in &DEFAULT_WEIGHTS {
        probes.push(Probe {
            a: model.sample_mixed_state(rng),
            b: model.sample_pure_state(rng),
            lambda,
        });
    }
    for _ in 0..random {
        probes.push(Probe {
            a: model.sample_mixed_state(rng),
            b: model.sample_pure_state(rng),
            lambda: rng.random(),
        });
    }
    probes
}
