pub mod harness;
pub mod model;
pub mod policy;
pub mod rng;
pub mod sim;
pub mod solver;
pub mod workload;
