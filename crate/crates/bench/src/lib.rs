//! Benchmarks for the engine; see `benches/engine.rs`.
