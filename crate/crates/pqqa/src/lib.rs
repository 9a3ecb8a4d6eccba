//! Parallel quasi-quantum annealing for combinatorial optimization on
//! graphs.
//!
//! The solver relaxes a discrete problem to probabilities, anneals an
//! entropy term from a strong bonus (forcing exploration of the
//! fractional interior) to a mild penalty (forcing integral commitment),
//! and descends the resulting landscape with adaptive gradient steps,
//! Langevin noise, and projection back onto the box or simplex. Many
//! runs are optimized in parallel as one ensemble, optionally coupled by
//! a diversity bonus on the per-coordinate spread across runs.
//!
//! Crate layout:
//!
//! - [`graph`]: undirected weighted graphs and the two text formats
//! - [`gen`]: random and structured instance generators
//! - [`problems`]: the five energy models and their relaxations
//! - [`relax`]: entropy terms, projections, ensemble objective
//! - [`annealer`]: the annealed-descent loop itself
//! - [`baseline`]: exhaustive, greedy, and simulated-annealing references
//! - [`report`]: JSON/CSV output documents
//! - [`verify`]: runtime self-checks of every mathematical invariant

pub mod annealer;
pub mod baseline;
pub mod gen;
pub mod graph;
pub mod problems;
pub mod relax;
pub mod report;
pub mod verify;
