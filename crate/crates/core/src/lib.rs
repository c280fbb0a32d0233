pub mod poly;
pub mod symfun;
pub mod lambda;
pub mod genus;
pub mod classifier;
pub mod suites;
pub mod cli;
