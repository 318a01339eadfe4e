//! Benchmarks live in `benches/`; run them with `cargo bench -p coop-emission-bench`.
