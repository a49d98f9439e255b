//! Deterministic floor-plan layout engine.
//!
//! The pipeline parses a JSON plan, derives rooms from the wall arrangement,
//! nudges infeasible furniture toward walls with a greedy search, runs rule
//! based plan checks and exports SVG drawings and BIM automation scripts.

pub mod checks;
pub mod codec;
pub mod export;
pub mod geometry;
pub mod model;
pub mod pipeline;
pub mod prompt;
pub mod refine;
pub mod topology;
