//! Criterion benchmarks for `tvf-core`; see `benches/`.
