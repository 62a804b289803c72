//! Criterion benchmarks for `cellcov-core`; see `benches/`.
