//! Qubit specifics: closed-form reconstruction and the ball picture.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};

pub const BALL_CENTER: [f64; 3] = [0.5, 0.5, 0.5];
pub const BALL_RADIUS: f64 = 0.5;

/// Closed form for the off-diagonal entry `a = rho[0][1]` in terms of
/// `(p_z+, p_z-, p_x+, p_y+)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OffDiagonalFormula {
    /// `a = p_x+ - i p_y+ - (1 - i)/2 (p_z+ + p_z-)`.
    Corrected,
    /// `a = p_x+ - p_y+ - (1 - i)/2 (p_z+ + p_z-)`. Kept for comparison only:
    /// it does not reproduce `|y+><y+|`.
    AsPrinted,
}

/// `rho = [[p_z+, a], [a*, p_z-]]`.
pub fn qubit_rho_from_p(p: &[f64], formula: OffDiagonalFormula) -> Result<CMatrix> {
    Error::check_len(4, p.len())?;
    let (zp, zm, xp, yp) = (p[0], p[1], p[2], p[3]);
    let shift = C64::new(0.5, -0.5) * (zp + zm);
    let a = match formula {
        OffDiagonalFormula::Corrected => C64::new(xp, -yp) - shift,
        OffDiagonalFormula::AsPrinted => C64::new(xp - yp, 0.0) - shift,
    };
    Ok(CMatrix::from_row_slice(
        2,
        2,
        &[C64::new(zp, 0.0), a, a.conj(), C64::new(zm, 0.0)],
    ))
}

/// `(p_x+, p_y+, p_z+)` for a normalized qubit state.
pub fn qubit_ball_coords(p: &[f64]) -> Result<[f64; 3]> {
    Error::check_len(4, p.len())?;
    let norm = p[0] + p[1];
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::domain(format!(
            "ball coordinates need a normalized state (p_z+ + p_z- = {norm})"
        )));
    }
    Ok([p[2], p[3], p[0]])
}

pub fn ball_center_distance(point: [f64; 3]) -> f64 {
    point
        .iter()
        .zip(BALL_CENTER)
        .map(|(x, c)| (x - c).powi(2))
        .sum::<f64>()
        .sqrt()
}
