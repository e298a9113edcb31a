//! Open-boundary TASEP and its exponential corner growth model on a strip.

pub mod rng;
pub mod stationary;
pub mod stats;
pub mod competition;
pub mod experiments;
pub mod lpp;
pub mod mixing;
pub mod tasep;
