//! Criterion benchmarks for the symbolic engine, the quadrature kernels and
//! the extremizer experiments. Run with `cargo bench -p sobconst-bench`.
