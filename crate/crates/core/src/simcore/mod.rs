//! Statevector engine: states, gates, circuits, overlap tests and Haar sampling.

mod circuit;
mod dense;
mod gate;
mod haar;
mod measure;
mod state;

pub use circuit::{run_circuit, Circuit};
pub use dense::DenseMatrix;
pub use gate::{apply_gate, Gate, GateKind, GatePayload};
pub use haar::{sample_haar_state, sample_haar_unitary, sample_haar_unitary_capped, DENSE_UNITARY_CAP};
pub use measure::{
    inner_product, measure_register_projector, project_register, projection_prob, projection_sample,
    swap_test_accept_prob, swap_test_accept_prob_joint, swap_test_sample, ProjectionOutcome,
    SwapOutcome,
};
pub use state::{StateVector, MAX_QUBITS};

pub(crate) use measure::bernoulli;
pub(crate) use state::hadamard_all_raw;

/// Tolerance for normalization and unitarity checks.
pub const NORM_TOL: f64 = 1e-10;
