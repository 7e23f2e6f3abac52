//! Dense quantum states, distances and entropies, plus exact analysis of
//! small two-party quantum protocols for Augmented Index.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

mod qprotocol;
mod state;

pub use qprotocol::examples;
pub use qprotocol::{
    bob_view_index, bob_views, error_on_mu, hybrid_check, output_probability, q_tradeoff_report, q_tradeoff_rhs,
    qic_costs, qprotocol_run, BobInput, HybridReport, HybridRound, QIc, QProtocolBuilder, QProtocolSpec, QRound,
    QTradeoffReport, RunInput, MAX_QUBITS,
};
pub use state::{
    bures, bures_pure, fidelity, is_unitary, q_avg_encoding_gap, q_mutual_info, trace_distance, uhlmann_unitary,
    vn_entropy, CQState, DensityState, Layout, PureState, Register, NORM_TOL, STATE_TOL,
};

pub mod sample {
    pub use super::state::sample::*;
}

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = Complex::new(0.0, 0.0);
pub const ONE: C64 = Complex::new(1.0, 0.0);

pub const fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// The permutation matrix `|i⟩ ↦ |f(i)⟩` on `qubits` qubits.
pub fn basis_map<F: Fn(usize) -> usize>(qubits: usize, f: F) -> Result<CMatrix> {
    let d = 1usize << qubits;
    let mut m = CMatrix::zeros(d, d);
    let mut hit = alloc::vec![false; d];
    for i in 0..d {
        let j = f(i);
        if j >= d || hit[j] {
            return Err(Error::Precondition(alloc::format!(
                "basis map is not a bijection at {i}"
            )));
        }
        hit[j] = true;
        m[(j, i)] = ONE;
    }
    Ok(m)
}

/// The Pauli X on qubit `target` of `qubits` (0 = most significant).
pub fn flip(qubits: usize, target: usize) -> CMatrix {
    basis_map(qubits, |i| i ^ (1 << (qubits - 1 - target))).expect("involution")
}

/// A CNOT with the given control and target among `qubits`.
pub fn cnot(qubits: usize, control: usize, target: usize) -> CMatrix {
    let cb = 1 << (qubits - 1 - control);
    let tb = 1 << (qubits - 1 - target);
    basis_map(qubits, |i| if i & cb != 0 { i ^ tb } else { i }).expect("involution")
}

pub fn identity(qubits: usize) -> CMatrix {
    CMatrix::identity(1 << qubits, 1 << qubits)
}
