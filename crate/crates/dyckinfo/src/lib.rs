//! Experiment driver for the Augmented Index and Dyck(2) toolkit.

pub mod cli;
pub mod error;
pub mod formats;
pub mod report;
