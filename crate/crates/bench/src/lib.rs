//! Benchmark fixtures.

/// Formulas exercised by the benchmarks.
pub const FORMULAS: &[&str] = &[
    "G F p",
    "X (p S X q)",
    "G (p -> X G p)",
    "G (p <-> (O q & O r))",
    "G (p -> Y q) & F r",
];
