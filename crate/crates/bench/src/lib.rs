//! Benchmarks for `kwf-core` live under `benches/`. Run them with
//! `cargo bench -p kwf-bench`.
