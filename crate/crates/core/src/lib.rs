//! Desk-scale simulator of a chaotic quantum SAT pipeline.
//!
//! The pipeline has three stages. [`sat`] represents CNF instances and
//! evaluates them as mod-2 polynomials, with an exhaustive classical
//! root count as the reference oracle. [`qsim`] runs the quantum part
//! on an (n+1)-qubit state vector: uniform superposition, an oracle
//! permutation writing the formula value into a flag qubit, and
//! extraction of the flag probability q² = r/2ⁿ. [`chaos`] feeds q²
//! into the logistic map x → a·x·(1−x), whose chaotic regime amplifies
//! any nonzero q² to order one within a number of steps linear in n
//! while leaving q² = 0 fixed forever — that separation is the
//! satisfiability classifier.
//!
//! [`hf`] models the proposed physical substrate at the same desk
//! scale: a two-component nonlinear spinor gate, mean-field orbital
//! evolution on a 1D grid, and Slater-determinant composition of
//! multi-particle states.

pub mod chaos;
pub mod hf;
pub mod qsim;
pub mod sat;
