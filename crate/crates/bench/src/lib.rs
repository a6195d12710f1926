//! Benchmark harness for the movable-obstacle planner: reproducible scene
//! generators, a brute-force minimum-horizon oracle, parallel evaluation
//! sweeps with CSV output, and SVG scene rendering.

pub mod oracle;
pub mod render;
pub mod scenes;
pub mod sweep;
