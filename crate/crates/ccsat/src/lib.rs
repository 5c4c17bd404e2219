//! Toolkit for propositional satisfiability with cardinality atoms.
//!
//! A *cardinality atom* `k X m` over a set `X` of propositional atoms is
//! satisfied when at least `k` and at most `m` of the atoms in `X` are true
//! (either bound may be absent). Clauses may mix ordinary literals with
//! (possibly negated) cardinality atoms, which keeps encodings of counting
//! constraints small.
//!
//! The crate provides:
//!
//! - [`theory`]: the clausal theory model, satisfaction semantics, clause
//!   normalization and the simple-theory classification,
//! - [`io`]: readers and writers for the CCNF theory format, DIMACS CNF,
//!   DIMACS-style graph files, latin-square instances and model files,
//! - [`compile`]: three translations that eliminate cardinality atoms into
//!   plain CNF (subset expansion, unary counters, binary counters),
//! - [`solve`]: walksat-style local search working directly on theories with
//!   cardinality atoms (virtual break-counts or double flips), plus a plain
//!   CNF walksat baseline,
//! - [`encode`]: graph coloring, vertex cover and latin-square encodings,
//!   model decoders, and planted (satisfiable by construction) instance
//!   generators,
//! - [`bench`]: an experiment runner measuring success rates and runtimes
//!   over instance families.

pub mod bench;
pub mod compile;
pub mod encode;
pub mod io;
pub mod solve;
pub mod theory;
