//! Config-driven simulation scenarios and their trajectory tables.
//!
//! A scenario file names an offered value and a list of per-cycle
//! parameters, and picks one of two evaluation modes:
//!
//! * `per_cycle` — every cycle re-offers the same initial value and runs
//!   the full single-cycle ledger (the service is offered afresh each
//!   period; compounding dynamics live in
//!   [`fair_trade`](crate::fair_trade) instead);
//! * `closed_form` — the products-of-sums expressions are evaluated
//!   cumulatively over the first n cycles.
//!
//! The two modes genuinely disagree beyond one cycle; both are kept
//! reachable and neither is the canonical reading.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{self, CycleLedger, CycleParams, GameConfig, ParamError};

/// Qualitative classification of a magnification factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `K > 1`: the service makes the trustee more efficient.
    AddsValue,
    /// `K = 1`: value passes through unchanged.
    Neutral,
    /// `0 <= K < 1`: the trustee loses some of the delivered value.
    Inefficient,
    /// `K < 0`: the service destroys value outright.
    Eroding,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::AddsValue => "adds-value",
            Regime::Neutral => "neutral",
            Regime::Inefficient => "inefficient",
            Regime::Eroding => "eroding",
        })
    }
}

/// Classify a finite magnification factor into its regime.
pub fn regime_of(magnification: f64) -> Regime {
    if magnification > 1.0 {
        Regime::AddsValue
    } else if magnification == 1.0 {
        Regime::Neutral
    } else if magnification >= 0.0 {
        Regime::Inefficient
    } else {
        Regime::Eroding
    }
}

/// How a scenario's trajectory is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    PerCycle,
    ClosedForm,
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("malformed scenario JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("scenario {name:?}: {source}")]
    Invalid { name: String, source: ParamError },
}

#[derive(Deserialize)]
struct RawScenario {
    name: String,
    initial_value: f64,
    mode: Mode,
    cycles: Vec<RawCycle>,
}

#[derive(Deserialize)]
struct RawCycle {
    p: f64,
    q: f64,
    #[serde(rename = "K")]
    k: f64,
}

/// A validated, runnable scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    name: String,
    mode: Mode,
    config: GameConfig,
}

impl Scenario {
    pub fn new(
        name: impl Into<String>,
        initial_value: f64,
        mode: Mode,
        cycles: Vec<CycleParams>,
    ) -> Result<Self, ScenarioError> {
        let name = name.into();
        let config = GameConfig::new(initial_value, cycles).map_err(|source| {
            ScenarioError::Invalid {
                name: name.clone(),
                source,
            }
        })?;
        Ok(Self { name, mode, config })
    }

    /// Parse and validate a scenario document. Validation failures name the
    /// offending entry positionally (`cycles[0].p`).
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let raw: RawScenario = serde_json::from_str(text)?;
        let invalid = |source: ParamError| ScenarioError::Invalid {
            name: raw.name.clone(),
            source,
        };

        let mut cycles = Vec::with_capacity(raw.cycles.len());
        for (index, cycle) in raw.cycles.iter().enumerate() {
            let params = CycleParams::new(cycle.p, cycle.q, cycle.k)
                .map_err(|e| invalid(e.nested_under(&format!("cycles[{index}]"))))?;
            cycles.push(params);
        }
        let config = GameConfig::new(raw.initial_value, cycles).map_err(invalid)?;
        Ok(Self {
            name: raw.name,
            mode: raw.mode,
            config,
        })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, ScenarioError> {
        let text = fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn config(&self) -> &GameConfig {
        &self.config
    }

    /// Produce the per-cycle trajectory table.
    pub fn run(&self) -> Trajectory {
        let cycles = self.config.cycles();
        let value = self.config.initial_value();
        let rows = match self.mode {
            Mode::PerCycle => cycles
                .iter()
                .enumerate()
                .map(|(cycle, params)| {
                    let ledger = game::run_cycle(params, value)
                        .expect("validated scenario params run cleanly");
                    TrajectoryRow::per_cycle(cycle, &ledger)
                })
                .collect(),
            Mode::ClosedForm => (0..cycles.len())
                .map(|cycle| {
                    let config = GameConfig::new(value, cycles[..=cycle].to_vec())
                        .expect("validated prefix stays valid");
                    let (trustor, trustee) = game::closed_form_gains(&config);
                    TrajectoryRow::closed_form(cycle, trustor, trustee)
                })
                .collect(),
        };
        Trajectory {
            scenario: self.name.clone(),
            mode: self.mode,
            rows,
        }
    }
}

/// One row of a trajectory table. The four ledger columns are only present
/// in `per_cycle` mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub cycle: usize,
    pub trustor_gain: f64,
    pub trustee_gain: f64,
    pub remittance: Option<f64>,
    pub gain: Option<f64>,
    pub repayment: Option<f64>,
    pub residual: Option<f64>,
}

impl TrajectoryRow {
    fn per_cycle(cycle: usize, ledger: &CycleLedger) -> Self {
        Self {
            cycle,
            trustor_gain: ledger.trustor_accumulated,
            trustee_gain: ledger.trustee_net,
            remittance: Some(ledger.remittance),
            gain: Some(ledger.gain),
            repayment: Some(ledger.repayment),
            residual: Some(ledger.residual),
        }
    }

    fn closed_form(cycle: usize, trustor: f64, trustee: f64) -> Self {
        Self {
            cycle,
            trustor_gain: trustor,
            trustee_gain: trustee,
            remittance: None,
            gain: None,
            repayment: None,
            residual: None,
        }
    }
}

/// The full trajectory of one scenario run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub scenario: String,
    pub mode: Mode,
    pub rows: Vec<TrajectoryRow>,
}

/// Header of the CSV rendering.
pub const CSV_HEADER: &str = "cycle,trustor_gain,trustee_gain,remittance,gain,repayment,residual";

impl Trajectory {
    /// Render as CSV with fixed-point values at the given number of
    /// fractional digits. Always uses `.` as the decimal separator and no
    /// thousands grouping. Absent ledger columns render empty.
    pub fn to_csv(&self, precision: usize) -> String {
        let fmt = |x: f64| format!("{x:.precision$}");
        let opt = |x: Option<f64>| x.map(fmt).unwrap_or_default();
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                row.cycle,
                fmt(row.trustor_gain),
                fmt(row.trustee_gain),
                opt(row.remittance),
                opt(row.gain),
                opt(row.repayment),
                opt(row.residual),
            ));
        }
        out
    }

    /// Render as pretty-printed JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trajectory serializes")
    }

    /// Final-row gains, for summaries.
    pub fn final_gains(&self) -> Option<(f64, f64)> {
        self.rows.last().map(|r| (r.trustor_gain, r.trustee_gain))
    }
}
