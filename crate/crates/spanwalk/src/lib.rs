//! Span programs over the complex numbers, their weighted gadget graphs, and a
//! desk-scale simulation of the quantum walk that evaluates boolean formulas.
//!
//! The crate is organized bottom-up:
//!
//! - [`linalg`]: dense complex helpers (pseudoinverse, Hermitian and unitary
//!   eigendecompositions, kernels) shared by everything else.
//! - [`formula`]: read-once formula ASTs, parsing, classical evaluation, and
//!   adversary-bound bookkeeping.
//! - [`spanprog`]: span programs with grouped inputs, evaluation, composition,
//!   duality, and JSON (de)serialization.
//! - [`witness`]: witness vectors and witness sizes under per-input complexity
//!   weights, via both pseudoinverse formulas and a variational solver.
//! - [`catalog`]: certified gate programs and adversary certificates, keyed by
//!   canonicalized truth tables.
//! - [`graph`]: the bipartite gadget graph of a program, input-dependent edge
//!   deletion, spectra, kernel support, and small-eigenvalue output ratios.
//! - [`walk`]: the discrete-time walk unitary built from a row-normalized edge
//!   decomposition of the graph adjacency, with the input oracle.
//! - [`estimator`]: phase estimation on the walk and the end-to-end formula
//!   evaluation pipeline with query accounting.

pub mod catalog;
pub mod config;
pub mod estimator;
pub mod formula;
pub mod graph;
pub mod linalg;
pub mod spanprog;
pub mod walk;
pub mod witness;

pub use config::Config;
