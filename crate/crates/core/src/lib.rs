//! Exact power-series toolkit for the lambda-extensions of Ising two-point
//! correlation functions: series rings, elliptic building blocks, a catalog
//! of closed forms, sigma-form ODE residuals, an order-by-order solver and a
//! battery of identity checks.

pub mod catalog;
pub mod coeff;
pub mod odes;
pub mod param_poly;
pub mod rational;
pub mod series;
pub mod solver;
pub mod special;
pub mod verify;

pub use coeff::Coeff;
pub use param_poly::{Param, ParamPoly};
pub use rational::Rational;
pub use series::{sigma_transform, PrefactoredSeries, Series, SeriesError};
