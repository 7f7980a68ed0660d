//! State-vector simulation of the oracle pipeline.
//!
//! States live on n register qubits plus one flag qubit. Basis index
//! convention: index = 2·x + y where x packs the register (variable 1
//! most significant) and y is the flag, so the flag is the least
//! significant bit. That makes the oracle a pairwise swap of adjacent
//! amplitudes and the flag projector a stride-2 sum.
//!
//! The oracle U_f |x,y⟩ = |x, y⊕f(x)⟩ is applied as an index
//! permutation driven by the formula; no 2^(n+1)×2^(n+1) matrix is
//! ever materialized.

use std::io::{self, Write};

use num_complex::Complex64;
use thiserror::Error;

use crate::sat::{CnfFormula, PackedEvaluator, SatError};

/// Largest register size [`prepare_uniform`] accepts (2^21 amplitudes).
pub const MAX_QUBITS: u32 = 20;

/// Norm tolerance for the unit-vector invariant.
pub const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum QsimError {
    #[error("register size n={n} outside 1..={max}")]
    QubitBound { n: u32, max: u32 },
    #[error("state register has {state_n} qubits but the formula has {formula_n} variables")]
    QubitMismatch { state_n: u32, formula_n: u32 },
    #[error("amplitude vector has length {got}, expected 2^{qubits}+1 = {expected}")]
    AmplitudeLength { qubits: u32, expected: usize, got: usize },
    #[error(transparent)]
    Sat(#[from] SatError),
}

/// Amplitudes over the (n+1)-qubit computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: u32,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Wrap raw amplitudes; only the length is checked, so callers may
    /// build unnormalized states (e.g. for linearity tests).
    pub fn from_amplitudes(n: u32, amps: Vec<Complex64>) -> Result<Self, QsimError> {
        if n == 0 || n > MAX_QUBITS {
            return Err(QsimError::QubitBound { n, max: MAX_QUBITS });
        }
        let expected = 1usize << (n + 1);
        if amps.len() != expected {
            return Err(QsimError::AmplitudeLength {
                qubits: n,
                expected,
                got: amps.len(),
            });
        }
        Ok(StateVector { n, amps })
    }

    /// Register size, excluding the flag qubit.
    pub fn register_qubits(&self) -> u32 {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Amplitude of |x, y⟩.
    pub fn amplitude(&self, x: u64, y: bool) -> Complex64 {
        self.amps[basis_index(x, y) as usize]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Debug dump: one row per basis state as `index,basis,re,im` with
    /// the basis rendered as `x…x|y`.
    pub fn write_amplitudes_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "index,basis,re,im")?;
        for (idx, amp) in self.amps.iter().enumerate() {
            let x = (idx >> 1) as u64;
            let y = idx & 1;
            writeln!(
                w,
                "{idx},{x:0width$b}|{y},{re},{im}",
                width = self.n as usize,
                re = amp.re,
                im = amp.im
            )?;
        }
        Ok(())
    }
}

/// Index of |x, y⟩ in the amplitude array.
pub fn basis_index(x: u64, y: bool) -> u64 {
    2 * x + u64::from(y)
}

/// The uniform register superposition with the flag at |0⟩:
/// amplitude 2^(-n/2) on every |x, 0⟩.
pub fn prepare_uniform(n: u32) -> Result<StateVector, QsimError> {
    if n == 0 || n > MAX_QUBITS {
        return Err(QsimError::QubitBound { n, max: MAX_QUBITS });
    }
    let dim = 1usize << (n + 1);
    let amp = 1.0 / ((1u64 << n) as f64).sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for x in 0..1usize << n {
        amps[2 * x] = Complex64::new(amp, 0.0);
    }
    Ok(StateVector { n, amps })
}

/// Apply the oracle permutation: for every x with f(x) = 1 the
/// amplitudes of |x,0⟩ and |x,1⟩ swap; everything else is untouched.
pub fn apply_oracle(state: &StateVector, f: &CnfFormula) -> Result<StateVector, QsimError> {
    if state.n != f.var_count() {
        return Err(QsimError::QubitMismatch {
            state_n: state.n,
            formula_n: f.var_count(),
        });
    }
    let eval = PackedEvaluator::new(f);
    let mut amps = state.amps.clone();
    for x in 0..1usize << state.n {
        if eval.eval(x as u32) {
            amps.swap(2 * x, 2 * x + 1);
        }
    }
    Ok(StateVector { n: state.n, amps })
}

/// Probability of reading the flag as 1: the squared norm of the
/// odd-index (y = 1) amplitudes. For prepare → oracle states this is
/// r/2ⁿ.
pub fn measure_flag_probability(state: &StateVector) -> f64 {
    state
        .amps
        .iter()
        .skip(1)
        .step_by(2)
        .map(|a| a.norm_sqr())
        .sum()
}

/// Flag-qubit reduction: the diagonal of the reduced density matrix
/// q²P₁ + (1−q²)P₀, handed to the chaos amplifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlagReduction {
    pub q: f64,
    pub q_squared: f64,
}

pub fn reduce_to_flag(state: &StateVector) -> FlagReduction {
    let q_squared = measure_flag_probability(state);
    FlagReduction {
        q: q_squared.sqrt(),
        q_squared,
    }
}
