//! Benchmarks for the Γ0(N) constructions live in `benches/`.
