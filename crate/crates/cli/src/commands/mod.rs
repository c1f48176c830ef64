pub mod counterexample;
pub mod plots;
pub mod rate_study;
pub mod validate;
pub mod width;
