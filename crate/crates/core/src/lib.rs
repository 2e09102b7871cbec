pub mod cli;
pub mod constrained;
pub mod integrator;
pub mod model;
pub mod scan;
pub mod stability;
pub mod synchrony;
