//! Instruments, the state update rule and seeded outcome sampling.

use indexmap::IndexMap;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermiticity_defect, CMatrix};
use crate::model::{
    probability, EffectVector, StateVector, TheoryModel, TransformMatrix, Validity,
};
use crate::quantum::QuantumChannel;
use crate::random;

/// Label reserved for "no detector fired".
pub const NULL_OUTCOME: &str = "null";

#[derive(Debug, Clone)]
pub struct Outcome {
    pub label: String,
    pub transform: TransformMatrix,
}

/// One allowed transformation per outcome, summing to an allowed
/// transformation. The deficit of the sum is the null-outcome probability.
#[derive(Debug, Clone)]
pub struct Instrument {
    model: TheoryModel,
    outcomes: Vec<Outcome>,
}

/// Validates every outcome and their sum against the model's allowed
/// transformations. The same path serves classical and quantum models.
pub fn make_instrument<L: Into<String>>(
    model: &TheoryModel,
    transforms: Vec<(L, TransformMatrix)>,
) -> Result<Instrument> {
    if transforms.is_empty() {
        return Err(Error::domain("an instrument needs at least one outcome"));
    }
    let outcomes: Vec<Outcome> = transforms
        .into_iter()
        .map(|(label, transform)| Outcome {
            label: label.into(),
            transform,
        })
        .collect();
    for (i, o) in outcomes.iter().enumerate() {
        if o.label == NULL_OUTCOME || outcomes[..i].iter().any(|p| p.label == o.label) {
            return Err(Error::domain(format!(
                "outcome label {:?} is reserved or repeated",
                o.label
            )));
        }
        if let Validity::Invalid(reason) = model.validate_transform(&o.transform)? {
            return Err(Error::NotAllowed(format!(
                "outcome {:?}: {reason}",
                o.label
            )));
        }
    }
    let total = TransformMatrix::sum(outcomes.iter().map(|o| &o.transform)).expect("non-empty");
    if let Validity::Invalid(reason) = model.validate_transform(&total)? {
        return Err(Error::Completeness(reason));
    }
    Ok(Instrument {
        model: model.clone(),
        outcomes,
    })
}

/// Projective measurement with post-measurement maps `rho -> P rho P`.
pub fn lueders_instrument<L: Into<String> + Clone>(
    model: &TheoryModel,
    projectors: &[(L, CMatrix)],
) -> Result<Instrument> {
    let frame = model
        .frame()
        .ok_or_else(|| Error::domain("projective instruments need a quantum model"))?;
    let n = model.n();
    let tol = model.tolerances().eigenvalue;
    for (i, (_, p)) in projectors.iter().enumerate() {
        if p.nrows() != n || p.ncols() != n {
            return Err(Error::Dimension {
                expected: n,
                found: p.nrows(),
            });
        }
        if hermiticity_defect(p) > tol || !within(&(p * p - p), tol) {
            return Err(Error::domain(format!("operator {i} is not a projector")));
        }
        for (_, q) in &projectors[..i] {
            if !within(&(p * q), tol) {
                return Err(Error::domain("projectors are not mutually orthogonal"));
            }
        }
    }
    let mut transforms = Vec::with_capacity(projectors.len());
    for (label, p) in projectors {
        let ch = QuantumChannel::from_kraus(std::slice::from_ref(p))?;
        transforms.push((label.clone(), frame.channel_to_z(&ch)?));
    }
    make_instrument(model, transforms)
}

fn within(m: &CMatrix, tol: f64) -> bool {
    m.iter().all(|z| z.norm() <= tol)
}

impl Instrument {
    pub fn model(&self) -> &TheoryModel {
        &self.model
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.outcomes.iter().map(|o| o.label.as_str())
    }

    fn find(&self, label: &str) -> Result<&Outcome> {
        self.outcomes
            .iter()
            .find(|o| o.label == label)
            .ok_or_else(|| Error::domain(format!("unknown outcome {label:?}")))
    }

    /// Effect vector of an outcome: `Z_l^T u` for the model's unit effect `u`.
    pub fn outcome_effect(&self, label: &str) -> Result<EffectVector> {
        let z = &self.find(label)?.transform;
        let u = nalgebra::DVector::from_column_slice(&self.model.unit_effect());
        Ok(EffectVector::new(
            (z.matrix().transpose() * u).as_slice().to_vec(),
        ))
    }

    /// Whether the outcomes exhaust all non-null probability, i.e. the sum
    /// preserves normalization.
    pub fn is_complete(&self) -> bool {
        let total =
            TransformMatrix::sum(self.outcomes.iter().map(|o| &o.transform)).expect("non-empty");
        let u = nalgebra::DVector::from_column_slice(&self.model.unit_effect());
        let pulled = total.matrix().transpose() * &u;
        (pulled - u).amax() <= self.model.tolerances().eigenvalue
    }

    /// Sub-normalized post-measurement state and the outcome probability.
    pub fn apply_update(&self, p: &StateVector, label: &str) -> Result<(StateVector, f64)> {
        let outcome = self.find(label)?;
        if let Validity::Invalid(reason) = self.model.validate_state(p)? {
            return Err(Error::domain(format!("not a valid state: {reason}")));
        }
        let post = outcome.transform.apply(p)?;
        let prob = self.model.normalization(&post)?;
        Ok((post, prob))
    }

    /// Probability of each outcome, in order, followed by the null outcome.
    pub fn distribution(&self, p: &StateVector) -> Result<Vec<f64>> {
        let tol = self.model.tolerances().eigenvalue;
        let mut probs = Vec::with_capacity(self.outcomes.len() + 1);
        for o in &self.outcomes {
            let (_, prob) = self.apply_update(p, &o.label)?;
            probs.push(prob);
        }
        let total: f64 = probs.iter().sum();
        if total > 1.0 + tol {
            return Err(Error::Model { total });
        }
        probs.push(1.0 - total);
        Ok(probs
            .into_iter()
            .map(|x| if x < 0.0 && x >= -tol { 0.0 } else { x })
            .collect())
    }
}

pub fn apply_update(
    instr: &Instrument,
    p: &StateVector,
    label: &str,
) -> Result<(StateVector, f64)> {
    instr.apply_update(p, label)
}

/// Observed outcome counts against the exact distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyReport {
    pub n: u64,
    pub seed: u64,
    pub generator: String,
    pub counts: IndexMap<String, u64>,
    pub frequencies: IndexMap<String, f64>,
    pub target: IndexMap<String, f64>,
    pub max_deviation: f64,
}

impl FrequencyReport {
    /// `outcome,count,frequency,target`, one row per outcome, LF endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("outcome,count,frequency,target\n");
        for (label, count) in &self.counts {
            out.push_str(&format!(
                "{label},{count},{},{}\n",
                self.frequencies[label], self.target[label]
            ));
        }
        out
    }
}

/// Draws `n` i.i.d. outcomes (including null) by inverse CDF from the pinned
/// generator seeded with `seed`.
pub fn simulate_frequencies(
    instr: &Instrument,
    p: &StateVector,
    n: u64,
    seed: u64,
) -> Result<FrequencyReport> {
    if n == 0 {
        return Err(Error::domain("need at least one trial"));
    }
    let probs = instr.distribution(p)?;
    let labels: Vec<String> = instr
        .labels()
        .map(str::to_owned)
        .chain(std::iter::once(NULL_OUTCOME.to_owned()))
        .collect();
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &x in &probs {
        acc += x;
        cumulative.push(acc);
    }
    let mut counts = vec![0u64; probs.len()];
    let mut rng = random::rng(seed);
    for _ in 0..n {
        let u: f64 = rng.random();
        let idx = cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(probs.len() - 1);
        counts[idx] += 1;
    }
    let mut report = FrequencyReport {
        n,
        seed,
        generator: random::GENERATOR.to_owned(),
        counts: IndexMap::new(),
        frequencies: IndexMap::new(),
        target: IndexMap::new(),
        max_deviation: 0.0,
    };
    for ((label, &count), &target) in labels.iter().zip(&counts).zip(&probs) {
        let freq = count as f64 / n as f64;
        report.max_deviation = report.max_deviation.max((freq - target).abs());
        report.counts.insert(label.clone(), count);
        report.frequencies.insert(label.clone(), freq);
        report.target.insert(label.clone(), target);
    }
    Ok(report)
}

/// Mean max deviation at `n` trials divided by the mean at `factor * n`,
/// averaged over `seeds`. About `sqrt(factor)` for `O(1/sqrt n)` convergence.
pub fn convergence_ratio(
    instr: &Instrument,
    p: &StateVector,
    n: u64,
    factor: u64,
    seeds: &[u64],
) -> Result<f64> {
    let mut coarse = 0.0;
    let mut fine = 0.0;
    for &seed in seeds {
        coarse += simulate_frequencies(instr, p, n, seed)?.max_deviation;
        fine +=
            simulate_frequencies(instr, p, n * factor, random::derive_seed(seed, 1))?.max_deviation;
    }
    Ok(coarse / fine)
}

/// `r_l . p` for the effect of each outcome; agrees with [`Instrument::apply_update`].
pub fn outcome_probability(instr: &Instrument, p: &StateVector, label: &str) -> Result<f64> {
    probability(&instr.outcome_effect(label)?, p)
}
