//! Criterion benchmarks for the kernels in `wh-embed`; see `benches/`.
