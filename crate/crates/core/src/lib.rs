//! Exact F_p certificates for monads and Serre-construction bundles on P3.

pub mod audit;
pub mod cohomology;
pub mod exactla;
pub mod forms;
pub mod geometry;
pub mod monads;
pub mod pipeline;
