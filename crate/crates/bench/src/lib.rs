//! Criterion benchmarks for hypgas-core; see `benches/`.
