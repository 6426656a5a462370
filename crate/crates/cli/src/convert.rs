//! JSON conversions between operator and fiducial-vector forms.

use fiducial::linalg::{CMatrix, C64};
use fiducial::model::VectorDocument;
use fiducial::quantum::QuantumChannel;
use fiducial::{ModelDescriptor, StateVector, TheoryModel, Validity};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Direction {
    RhoToP,
    PToRho,
    OpToEffect,
    ChannelToZ,
}

/// A matrix entry: `[re, im]` or a bare real number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Complex([f64; 2]),
    Real(f64),
}

pub type MatrixJson = Vec<Vec<Entry>>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorInput {
    pub n: usize,
    #[serde(alias = "rho")]
    pub operator: MatrixJson,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelInput {
    pub n: usize,
    #[serde(default)]
    pub kraus: Option<Vec<MatrixJson>>,
    #[serde(default)]
    pub choi: Option<MatrixJson>,
}

#[derive(Debug, Serialize)]
pub struct OperatorOutput {
    pub n: usize,
    pub operator: Vec<Vec<[f64; 2]>>,
    pub validity: Validity,
}

#[derive(Debug, Serialize)]
pub struct Annotated<T> {
    #[serde(flatten)]
    pub document: T,
    pub validity: Validity,
}

pub fn matrix(rows: &MatrixJson, n: usize, what: &str) -> Result<CMatrix> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Usage(format!(
            "`{what}` must be a {n} x {n} matrix"
        )));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| match rows[i][j] {
        Entry::Complex([re, im]) => C64::new(re, im),
        Entry::Real(re) => C64::new(re, 0.0),
    }))
}

fn from_matrix(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    m.row_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn parse<T: serde::de::DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| CliError::parse(origin, e))
}

fn quantum(n: usize) -> Result<TheoryModel> {
    Ok(TheoryModel::quantum(n)?)
}

/// Converts `text` (JSON) in the given direction and returns the output
/// document. `origin` names the input in error messages.
pub fn convert(text: &str, origin: &str, direction: Direction) -> Result<Value> {
    let out = match direction {
        Direction::RhoToP => {
            let input: OperatorInput = parse(text, origin)?;
            let model = quantum(input.n)?;
            let frame = model.frame().expect("quantum");
            let rho = matrix(&input.operator, input.n, "operator")?;
            let p = frame.rho_to_p(&rho)?;
            let validity = frame.state_validity(&rho);
            serde_json::to_value(Annotated {
                document: VectorDocument {
                    model: ModelDescriptor::Quantum { n: input.n },
                    entries: p.into_inner(),
                },
                validity,
            })
        }
        Direction::PToRho => {
            let doc: VectorDocument = parse(text, origin)?;
            let ModelDescriptor::Quantum { n } = doc.model else {
                return Err(CliError::Usage(
                    "p-to-rho needs a quantum model descriptor".into(),
                ));
            };
            let model = quantum(n)?;
            let back = model
                .frame()
                .expect("quantum")
                .p_to_rho(&StateVector::new(doc.entries))?;
            serde_json::to_value(OperatorOutput {
                n,
                operator: from_matrix(&back.rho),
                validity: back.validity,
            })
        }
        Direction::OpToEffect => {
            let input: OperatorInput = parse(text, origin)?;
            let model = quantum(input.n)?;
            let a = matrix(&input.operator, input.n, "operator")?;
            let (r, validity) = model.frame().expect("quantum").operator_to_effect(&a)?;
            serde_json::to_value(Annotated {
                document: VectorDocument {
                    model: ModelDescriptor::Quantum { n: input.n },
                    entries: r.into_inner(),
                },
                validity,
            })
        }
        Direction::ChannelToZ => {
            let input: ChannelInput = parse(text, origin)?;
            let model = quantum(input.n)?;
            let channel = match (&input.kraus, &input.choi) {
                (Some(ops), None) => {
                    let ops = ops
                        .iter()
                        .map(|k| matrix(k, input.n, "kraus"))
                        .collect::<Result<Vec<_>>>()?;
                    QuantumChannel::from_kraus(&ops)?
                }
                (None, Some(choi)) => {
                    QuantumChannel::from_choi(input.n, matrix(choi, input.n * input.n, "choi")?)?
                }
                _ => {
                    return Err(CliError::Usage(
                        "give exactly one of `kraus` and `choi`".into(),
                    ))
                }
            };
            let z = model.frame().expect("quantum").channel_to_z(&channel)?;
            serde_json::to_value(Annotated {
                document: fiducial::model::TransformDocument::new(
                    ModelDescriptor::Quantum { n: input.n },
                    &z,
                ),
                validity: Validity::Valid,
            })
        }
    };
    Ok(out.expect("documents serialize"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ket_zero_to_p() {
        let v = convert(r#"{"n":2,"rho":[[1,0],[0,0]]}"#, "t", Direction::RhoToP).unwrap();
        assert_eq!(v["entries"], serde_json::json!([1.0, 0.0, 0.5, 0.5]));
        assert_eq!(v["validity"]["status"], "valid");
    }

    #[test]
    fn null_p_is_zero_matrix() {
        let v = convert(
            r#"{"kind":"quantum","n":2,"entries":[0,0,0,0]}"#,
            "t",
            Direction::PToRho,
        )
        .unwrap();
        assert_eq!(
            v["operator"],
            serde_json::json!([[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]])
        );
        assert_eq!(v["validity"]["status"], "valid");
    }

    #[test]
    fn unknown_field_named() {
        let err = convert(r#"{"n":2,"rhoo":[[1,0],[0,0]]}"#, "t", Direction::RhoToP).unwrap_err();
        assert!(err.to_string().contains("rhoo"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn transpose_is_not_cp() {
        let choi = r#"{"n":2,"choi":[[1,0,0,0],[0,0,1,0],[0,1,0,0],[0,0,0,1]]}"#;
        let err = convert(choi, "t", Direction::ChannelToZ).unwrap_err();
        assert!(
            matches!(
                err,
                CliError::Model(fiducial::Error::CompletePositivity { .. })
            ),
            "{err}"
        );
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn identity_kraus_gives_identity_z() {
        let v = convert(
            r#"{"n":2,"kraus":[[[1,0],[0,1]]]}"#,
            "t",
            Direction::ChannelToZ,
        )
        .unwrap();
        let e: Vec<f64> = serde_json::from_value(v["entries"].clone()).unwrap();
        for (i, x) in e.iter().enumerate() {
            let want = if i % 5 == 0 { 1.0 } else { 0.0 };
            assert!((x - want).abs() < 1e-12);
        }
    }
}
