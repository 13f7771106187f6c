// errors carry the offending chain and value; they are cold, so size is not a concern
#![allow(clippy::result_large_err)]

pub mod chain;
pub mod cli;
pub mod decide;
pub mod finite_model;
pub mod formula;
pub mod gen;
pub mod omega;
pub mod rational;
pub mod transform;

pub use formula::Formula;
pub use rational::Rational;
pub use chain::{ChainElement, ChainSpec};
pub use finite_model::FiniteModel;
