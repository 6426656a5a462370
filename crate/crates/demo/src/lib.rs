//! wasm-bindgen entry points for `www/index.html`.
//!
//! Each export returns a flat `Float64Array`; layouts are documented on the
//! function. Booleans are encoded as 0.0 / 1.0.

use fiducial::linalg::{CMatrix, C64};
use fiducial::quantum::{qubit_ball_coords, unitary_path, DensityOperator};
use fiducial::{is_pure, StateVector, TheoryModel};
use wasm_bindgen::prelude::*;

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// `(I + r n.sigma) / 2` for the unit vector `n` at polar angle `theta`
/// and azimuth `phi`.
pub fn bloch_operator(theta: f64, phi: f64, radius: f64) -> CMatrix {
    let (x, y, z) = (
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    );
    let h = 0.5 * radius;
    CMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(0.5 + h * z, 0.0),
            C64::new(h * x, -h * y),
            C64::new(h * x, h * y),
            C64::new(0.5 - h * z, 0.0),
        ],
    )
}

/// `[p_z+, p_z-, p_x+, p_y+, x, y, z, valid, pure]` where `(x, y, z)` are
/// the ball coordinates `(p_x+, p_y+, p_z+)`.
pub fn qubit_point(theta: f64, phi: f64, radius: f64) -> Result<Vec<f64>, String> {
    let model = TheoryModel::quantum(2).map_err(|e| e.to_string())?;
    let frame = model.frame().expect("quantum");
    let p = frame
        .rho_to_p(&bloch_operator(theta, phi, radius))
        .map_err(|e| e.to_string())?;
    let [x, y, z] = qubit_ball_coords(&p).map_err(|e| e.to_string())?;
    let valid = model
        .validate_state(&p)
        .map_err(|e| e.to_string())?
        .is_valid();
    let pure = valid && is_pure(&model, &p).map_err(|e| e.to_string())?;
    let mut out = p.into_inner();
    out.extend([x, y, z, flag(valid), flag(pure)]);
    Ok(out)
}

/// Ball coordinates of the `steps + 1` states on the unitary path between
/// two pure states, flattened as `x0, y0, z0, x1, ...`.
pub fn path_points(from: (f64, f64), to: (f64, f64), steps: usize) -> Result<Vec<f64>, String> {
    let model = TheoryModel::quantum(2).map_err(|e| e.to_string())?;
    let frame = model.frame().expect("quantum");
    let a = DensityOperator::new(bloch_operator(from.0, from.1, 1.0)).map_err(|e| e.to_string())?;
    let b = DensityOperator::new(bloch_operator(to.0, to.1, 1.0)).map_err(|e| e.to_string())?;
    let states = unitary_path(frame, &a, &b, steps).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(3 * states.len());
    for p in &states {
        out.extend(qubit_ball_coords(p).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

/// `[valid, pure, normalization]` for the classical bit state `(p1, p2)`.
pub fn bit_point(p1: f64, p2: f64) -> Result<Vec<f64>, String> {
    let model = TheoryModel::classical(2).map_err(|e| e.to_string())?;
    let p = StateVector::new(vec![p1, p2]);
    let valid = model
        .validate_state(&p)
        .map_err(|e| e.to_string())?
        .is_valid();
    let pure = valid && !p.is_null(0.0) && is_pure(&model, &p).map_err(|e| e.to_string())?;
    Ok(vec![flag(valid), flag(pure), p1 + p2])
}

#[wasm_bindgen]
pub fn qubit_state(theta: f64, phi: f64, radius: f64) -> Result<Vec<f64>, JsValue> {
    qubit_point(theta, phi, radius).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn qubit_path(
    theta_from: f64,
    phi_from: f64,
    theta_to: f64,
    phi_to: f64,
    steps: usize,
) -> Result<Vec<f64>, JsValue> {
    path_points((theta_from, phi_from), (theta_to, phi_to), steps)
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn bit_state(p1: f64, p2: f64) -> Result<Vec<f64>, JsValue> {
    bit_point(p1, p2).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn north_pole_is_ket_zero() {
        let v = qubit_point(0.0, 0.0, 1.0).unwrap();
        let want = [1.0, 0.0, 0.5, 0.5, 0.5, 0.5, 1.0, 1.0, 1.0];
        for (a, b) in v.iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{v:?}");
        }
    }

    #[test]
    fn radius_decides_validity_and_purity() {
        let inside = qubit_point(1.0, 2.0, 0.6).unwrap();
        assert_eq!(&inside[7..], &[1.0, 0.0]);
        let outside = qubit_point(1.0, 2.0, 1.2).unwrap();
        assert_eq!(outside[7], 0.0);
    }

    #[test]
    fn path_stays_on_sphere() {
        let pts = path_points((0.3, 0.1), (2.0, PI), 50).unwrap();
        assert_eq!(pts.len(), 3 * 51);
        for c in pts.chunks(3) {
            let d = ((c[0] - 0.5).powi(2) + (c[1] - 0.5).powi(2) + (c[2] - 0.5).powi(2)).sqrt();
            assert!((d - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn triangle_corners() {
        assert_eq!(bit_point(1.0, 0.0).unwrap(), vec![1.0, 1.0, 1.0]);
        assert_eq!(bit_point(0.0, 0.0).unwrap(), vec![1.0, 0.0, 0.0]);
        assert_eq!(bit_point(0.3, 0.3).unwrap()[..2], [1.0, 0.0]);
        assert_eq!(bit_point(0.8, 0.8).unwrap()[0], 0.0);
    }
}
