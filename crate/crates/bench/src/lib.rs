//! Criterion benchmarks for `repliq-core`; see `benches/`.
