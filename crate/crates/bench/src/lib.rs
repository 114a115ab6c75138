//! Benchmarks for the catcheck engine live under `benches/`.
