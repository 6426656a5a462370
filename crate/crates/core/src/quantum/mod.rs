//! Quantum theory in fiducial-probability coordinates.

mod channel;
mod density;
mod frame;
pub mod hermitian;
mod path;
pub mod qubit;

pub use channel::QuantumChannel;
pub use density::DensityOperator;
pub use frame::{FiducialFrame, Reconstruction, MAX_STANDARD_DIM};
pub use path::{unitary_path, unitary_path_with_step, UnitaryPath};
pub use qubit::{
    ball_center_distance, qubit_ball_coords, qubit_rho_from_p, OffDiagonalFormula, BALL_CENTER,
    BALL_RADIUS,
};
