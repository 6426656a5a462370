//! CSV data behind the triangle and ball diagrams.

use std::f64::consts::PI;
use std::path::Path;

use fiducial::linalg::{CVector, C64};
use fiducial::quantum::{ball_center_distance, qubit_ball_coords};
use fiducial::{is_pure, random, StateVector, TheoryModel};
use serde::Serialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    Triangle,
    Ball,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriangleRow {
    pub kind: &'static str,
    pub p1: f64,
    pub p2: f64,
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallRow {
    pub kind: &'static str,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub distance: f64,
    pub pure: bool,
}

fn check_resolution(resolution: usize) -> Result<()> {
    if resolution < 2 {
        return Err(CliError::Usage(format!(
            "resolution must be at least 2, got {resolution}"
        )));
    }
    Ok(())
}

/// The three corners of the classical bit's state set, then a
/// `resolution x resolution` grid over the unit square with validity flags.
pub fn triangle_rows(resolution: usize) -> Result<Vec<TriangleRow>> {
    check_resolution(resolution)?;
    let bit = TheoryModel::classical(2)?;
    let mut rows: Vec<TriangleRow> = [(1.0, 0.0), (0.0, 1.0), (0.0, 0.0)]
        .into_iter()
        .map(|(p1, p2)| TriangleRow {
            kind: "vertex",
            p1,
            p2,
            valid: true,
        })
        .collect();
    let step = 1.0 / (resolution - 1) as f64;
    for i in 0..resolution {
        for j in 0..resolution {
            let (p1, p2) = (i as f64 * step, j as f64 * step);
            let valid = bit
                .validate_state(&StateVector::new(vec![p1, p2]))?
                .is_valid();
            rows.push(TriangleRow {
                kind: "grid",
                p1,
                p2,
                valid,
            });
        }
    }
    Ok(rows)
}

/// A `resolution x resolution` mesh of pure qubit states (polar angle from
/// 0 to pi inclusive, azimuth over [0, 2 pi)), then as many seeded random
/// mixed states.
pub fn ball_rows(resolution: usize, seed: u64) -> Result<Vec<BallRow>> {
    check_resolution(resolution)?;
    let qubit = TheoryModel::quantum(2)?;
    let frame = qubit.frame().expect("quantum");
    let mut rows = Vec::with_capacity(2 * resolution * resolution);
    let mut push = |kind, p: &StateVector| -> Result<()> {
        let [x, y, z] = qubit_ball_coords(p)?;
        let pure = is_pure(&qubit, p)?;
        rows.push(BallRow {
            kind,
            x,
            y,
            z,
            distance: ball_center_distance([x, y, z]),
            pure,
        });
        Ok(())
    };
    for i in 0..resolution {
        let theta = PI * i as f64 / (resolution - 1) as f64;
        for j in 0..resolution {
            let phi = 2.0 * PI * j as f64 / resolution as f64;
            let ket = CVector::from_vec(vec![
                C64::new((theta / 2.0).cos(), 0.0),
                C64::from_polar((theta / 2.0).sin(), phi),
            ]);
            push("pure", &frame.ket_to_p(&ket))?;
        }
    }
    let mut rng = random::rng(seed);
    for _ in 0..resolution * resolution {
        push(
            "mixed",
            &frame.rho_to_p(&random::random_density(2, &mut rng))?,
        )?;
    }
    Ok(rows)
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV of numbers is UTF-8"))
}

pub fn figure_csv(which: Figure, resolution: usize, seed: u64) -> Result<String> {
    match which {
        Figure::Triangle => to_csv(&triangle_rows(resolution)?),
        Figure::Ball => to_csv(&ball_rows(resolution, seed)?),
    }
}

/// Writes the figure's CSV to `out`.
pub fn emit_figure_data(which: Figure, resolution: usize, seed: u64, out: &Path) -> Result<()> {
    let text = figure_csv(which, resolution, seed)?;
    std::fs::write(out, text).map_err(|e| CliError::io(out, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_resolution_two() {
        let rows = triangle_rows(2).unwrap();
        assert_eq!(rows.len(), 7);
        let corner = rows
            .iter()
            .find(|r| r.kind == "grid" && r.p1 == 1.0 && r.p2 == 1.0)
            .unwrap();
        assert!(!corner.valid);
        assert!(figure_csv(Figure::Triangle, 2, 0)
            .unwrap()
            .starts_with("kind,p1,p2,valid\n"));
    }

    #[test]
    fn ball_pure_rows_on_sphere() {
        let rows = ball_rows(7, 3).unwrap();
        assert_eq!(rows.iter().filter(|r| r.kind == "pure").count(), 49);
        for r in &rows {
            if r.kind == "pure" {
                assert!((r.distance - 0.5).abs() <= 1e-9 && r.pure);
            } else {
                assert!(r.distance < 0.5 && !r.pure);
            }
        }
    }

    #[test]
    fn resolution_one_rejected() {
        assert_eq!(ball_rows(1, 0).unwrap_err().exit_code(), 2);
    }
}
