//! Verification driver: claim suites, reports and the group name resolver.

pub mod commands;
pub mod error;
pub mod groups;
pub mod report;
pub mod suites;
