//! Deterministic trust quantification for AI/ML provider-customer
//! relationships.
//!
//! The crate models the relationship as an iterated value exchange between a
//! provider (the trustor, who must be trustworthy) and a customer (the
//! trustee, who need not be), and offers four views of it:
//!
//! * [`game`] — the arithmetic of one exchange cycle (remittance,
//!   perceived gain, repayment, residual), its n-cycle closed forms, and the
//!   engagement-threshold check;
//! * [`score`] — a clamped weighted trust score over the seven NIST AI RMF
//!   trustworthiness categories, with validation and per-entry
//!   contributions;
//! * [`timeseries`] — JSONL-persisted score history and a gentle/abrupt
//!   fluctuation verdict over a trailing window;
//! * [`fair_trade`] — the 2x2 exchange matrix, its eigenstructure, and the
//!   origin-anchored fair-trade line that classifies holdings as fair,
//!   trustor-favoring, or trustee-favoring;
//! * [`scenario`] — config-driven trajectory tables tying it together.
//!
//! Everything is pure f64 arithmetic over immutable values: the same inputs
//! always produce the same outputs, and values can be shared freely across
//! threads.
//!
//! ```
//! use trustgauge::game::{run_cycle, CycleParams};
//!
//! // Offer a million points, deliver 65% of it, double its perceived
//! // value, get 14% of the perception back.
//! let params = CycleParams::new(0.65, 0.14, 2.0)?;
//! let ledger = run_cycle(&params, 1_000_000.0)?;
//! assert_eq!(ledger.trustor_accumulated, 532_000.0);
//! assert_eq!(ledger.trustee_net, 1_118_000.0);
//! # Ok::<(), trustgauge::game::ParamError>(())
//! ```

pub mod fair_trade;
pub mod game;
pub mod scenario;
pub mod score;
pub mod timeseries;

pub use fair_trade::{ExchangeMatrix, FairTradeLine, TradeBalance};
pub use game::{CycleLedger, CycleParams, GameConfig, ParamError, ThresholdCheck};
pub use scenario::{regime_of, Mode, Regime, Scenario, Trajectory};
pub use score::{MetricCategory, MetricEntry, MetricKind, ScoreRecord, WeightVector};
pub use timeseries::{FluctuationReport, ScoreSeries, Verdict};
