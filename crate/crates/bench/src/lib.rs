//! Criterion benchmarks for the `ellsurf` crate live in `benches/`.
