//! Criterion benchmarks for `eprwmr-core`. Run with `cargo bench -p eprwmr-bench`.
