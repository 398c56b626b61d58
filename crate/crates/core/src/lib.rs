pub mod analysis;
pub mod eps;
pub mod equation;
pub mod error;
pub mod exec;
pub mod field;
pub mod hull;
pub mod parse;
pub mod poly;
pub mod render;
pub mod upoly;
