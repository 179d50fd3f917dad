//! Criterion benchmarks for `itergcd`; see `benches/`.
