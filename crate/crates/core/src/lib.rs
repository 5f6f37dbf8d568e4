pub mod experiment;
pub mod formula;
pub mod prover;
pub mod report;
pub mod theory;
