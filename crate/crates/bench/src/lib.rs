//! Criterion benchmarks for the liouville crate live in benches/.
