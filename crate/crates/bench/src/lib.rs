//! Criterion benchmarks for the sampling/update loop and the objective suite.
//! The benchmarks themselves live under `benches/`.
