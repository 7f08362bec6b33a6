pub mod bench;
pub mod cli;
pub mod engine;
pub mod fast;
pub mod geometry;
pub mod render;
pub mod spec;
pub mod tables;
pub mod tree;
