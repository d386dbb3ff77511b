//! Criterion benchmarks for the computation suite; see `benches/main.rs`.
