//! Production-economics engine for multi-stage manufacturing chains.
//!
//! Compares the unit cost of three quality strategies: zero maintenance,
//! end-of-stage inspection and in-process monitoring.

pub mod chain;
pub mod config;
pub mod critical;
pub mod error;
pub mod homogenize;
pub mod oracle;
pub mod report;
pub mod solver;

pub use chain::{
    cost_breakdown, defective_sold_volume, pure_unit_cost, sold_volume, Chain, CostBreakdown, CostTriple,
    Reputation, StageParams, Strategy,
};
pub use config::{ref50, ChainConfig, Preset};
pub use critical::{classify_regime, CriticalQuery, CriticalValue, RegimeClassification, StrategyPair};
pub use error::{Error, Result};
pub use homogenize::{homogenize, homogenized_unit_cost, rescale, taylor_error, HomogenizedChain, TaylorError};
pub use oracle::{recursive_volumes, simulate, SimResult, SimSettings};
pub use solver::{find_cost_equality, superiority_surface, trace_critical_curve, CurveMethod, SolveSettings};
