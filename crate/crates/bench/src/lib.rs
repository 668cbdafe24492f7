//! Criterion benchmarks for hvnogo-core; see `benches/`.
