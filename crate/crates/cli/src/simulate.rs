//! The `simulate` command: repeated measurements of one instrument.

use fiducial::measurement::{
    lueders_instrument, make_instrument, simulate_frequencies, FrequencyReport, Instrument,
};
use fiducial::{ModelDescriptor, StateVector, TheoryModel, TransformMatrix};
use serde::Deserialize;

use crate::convert::MatrixJson;
use crate::error::{CliError, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelledProjector {
    pub label: String,
    pub projector: MatrixJson,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelledTransform {
    pub label: String,
    /// `K x K` matrix in row-major order.
    pub entries: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InstrumentSpec {
    Lueders(Vec<LabelledProjector>),
    Transforms(Vec<LabelledTransform>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub model: ModelDescriptor,
    pub state: Vec<f64>,
    pub instrument: InstrumentSpec,
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
}

impl SimulateConfig {
    pub fn from_json(text: &str, origin: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::parse(origin, e))
    }

    pub fn instrument(&self) -> Result<Instrument> {
        let model = TheoryModel::from_descriptor(&self.model)?;
        let instr = match &self.instrument {
            InstrumentSpec::Lueders(items) => {
                let n = model.n();
                let projectors = items
                    .iter()
                    .map(|item| {
                        Ok((
                            item.label.clone(),
                            crate::convert::matrix(&item.projector, n, "projector")?,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                lueders_instrument(&model, &projectors)?
            }
            InstrumentSpec::Transforms(items) => {
                let k = model.k();
                let transforms = items
                    .iter()
                    .map(|item| {
                        Ok((
                            item.label.clone(),
                            TransformMatrix::from_row_major(k, &item.entries)?,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                make_instrument(&model, transforms)?
            }
        };
        Ok(instr)
    }

    /// Runs the simulation; `seed` overrides the configured one.
    pub fn run(&self, seed: Option<u64>) -> Result<FrequencyReport> {
        let instr = self.instrument()?;
        let p = StateVector::new(self.state.clone());
        Ok(simulate_frequencies(
            &instr,
            &p,
            self.trials,
            seed.unwrap_or(self.seed),
        )?)
    }
}
