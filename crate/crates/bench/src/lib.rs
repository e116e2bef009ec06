//! Criterion benchmarks for greedy construction, product cubature and star
//! discrepancy. The code lives under `benches/`.
