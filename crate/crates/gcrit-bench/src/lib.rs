//! Benchmark-only crate; see `benches/critical.rs`.
