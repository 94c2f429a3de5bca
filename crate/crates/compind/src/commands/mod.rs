pub mod build;
pub mod emissions;
pub mod regress;
pub mod report;
pub mod simulate;
pub mod validate;
