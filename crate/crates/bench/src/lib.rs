//! Criterion benchmarks for the groudit crates; see `benches/`.
