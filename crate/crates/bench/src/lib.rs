//! Criterion benchmarks for the transforms live in `benches/transforms.rs`.
//! Run them with `cargo bench -p diskcap-bench`.
