//! Criterion benchmarks for critlab live under `benches/`.
