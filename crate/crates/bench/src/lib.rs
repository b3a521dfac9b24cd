//! Benchmark-only package; the harnesses live under `benches/`.
//!
//! Run with `cargo bench -p comlen-bench`. The inputs are fixed words and
//! seeded random words, so successive runs measure the same work.
