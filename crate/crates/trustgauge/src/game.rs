//! Single-cycle value-exchange arithmetic between a provider (trustor) and a
//! customer (trustee), its n-cycle closed forms, and the trustworthiness
//! threshold check.
//!
//! One cycle of the exchange: the trustor offers a service worth `V` points
//! and delivers the share `p` of it. The trustee perceives that delivery
//! magnified (or eroded) by a factor `K`, and returns the share `q` of the
//! perceived gain as payment, feedback, or labels. Everything downstream
//! (scenario trajectories, the fair-trade matrix) is built from these four
//! numbers.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A validation failure carrying the offending field, the violated bound,
/// and the rejected value.
///
/// The field name is a path (e.g. `cycles[2].p`) when the value came out of
/// a config file, so CLI diagnostics can point at the exact entry.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid {field}: {requirement} (got {value})")]
pub struct ParamError {
    pub field: String,
    pub requirement: &'static str,
    pub value: f64,
}

impl ParamError {
    pub fn new(field: impl Into<String>, requirement: &'static str, value: f64) -> Self {
        Self {
            field: field.into(),
            requirement,
            value,
        }
    }

    /// Prepend a path segment to the field name, turning `p` into
    /// `cycles[0].p`.
    #[must_use]
    pub fn nested_under(mut self, prefix: &str) -> Self {
        self.field = format!("{prefix}.{}", self.field);
        self
    }
}

fn check_remit_fraction(p: f64) -> Result<(), ParamError> {
    if !p.is_finite() || !(0.0..=1.0).contains(&p) {
        return Err(ParamError::new("p", "must satisfy 0 <= p <= 1", p));
    }
    Ok(())
}

fn check_repay_fraction(q: f64) -> Result<(), ParamError> {
    // q = 1 is rejected: the repayment share is strictly below full giveback.
    if !q.is_finite() || !(0.0..1.0).contains(&q) {
        return Err(ParamError::new("q", "must satisfy 0 <= q < 1", q));
    }
    Ok(())
}

fn check_magnification(k: f64) -> Result<(), ParamError> {
    // K is an unbounded real (negative values model value destruction),
    // only non-finite inputs are rejected.
    if !k.is_finite() {
        return Err(ParamError::new("K", "must be finite", k));
    }
    Ok(())
}

fn check_offered_value(v: f64) -> Result<(), ParamError> {
    if !v.is_finite() || v <= 0.0 {
        return Err(ParamError::new("V", "must be a positive finite value", v));
    }
    Ok(())
}

/// The three parameters steering one exchange cycle.
///
/// * remit fraction `p` — share of the offered value actually delivered,
///   `0 <= p <= 1`;
/// * repay fraction `q` — share of the perceived gain returned,
///   `0 <= q < 1`;
/// * magnification `K` — trustee-side multiplier on delivered value,
///   any finite real (`K < 0` destroys value).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleParams {
    remit_fraction: f64,
    repay_fraction: f64,
    magnification: f64,
}

impl CycleParams {
    pub fn new(remit_fraction: f64, repay_fraction: f64, magnification: f64) -> Result<Self, ParamError> {
        check_remit_fraction(remit_fraction)?;
        check_repay_fraction(repay_fraction)?;
        check_magnification(magnification)?;
        Ok(Self {
            remit_fraction,
            repay_fraction,
            magnification,
        })
    }

    pub fn remit_fraction(&self) -> f64 {
        self.remit_fraction
    }

    pub fn repay_fraction(&self) -> f64 {
        self.repay_fraction
    }

    pub fn magnification(&self) -> f64 {
        self.magnification
    }
}

/// An offered value plus the parameter sequence for every cycle to run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameConfig {
    initial_value: f64,
    cycles: Vec<CycleParams>,
}

impl GameConfig {
    pub fn new(initial_value: f64, cycles: Vec<CycleParams>) -> Result<Self, ParamError> {
        check_offered_value(initial_value)?;
        if cycles.is_empty() {
            return Err(ParamError::new("cycles", "must contain at least one cycle", 0.0));
        }
        Ok(Self {
            initial_value,
            cycles,
        })
    }

    pub fn initial_value(&self) -> f64 {
        self.initial_value
    }

    pub fn cycles(&self) -> &[CycleParams] {
        &self.cycles
    }
}

/// Every quantity produced by one exchange cycle.
///
/// The fields satisfy two closure identities: `remittance + residual`
/// recovers the offered value, and `trustee_net + repayment` recovers the
/// perceived gain (both to within one rounding step of f64 arithmetic).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleLedger {
    /// Value delivered to the trustee: `p * V`.
    pub remittance: f64,
    /// Value as perceived by the trustee: `K * remittance`.
    pub gain: f64,
    /// Share of the gain returned to the trustor: `q * gain`.
    pub repayment: f64,
    /// Undelivered value retained by the trustor: `(1 - p) * V`.
    pub residual: f64,
    /// Trustor's total after the cycle: `residual + repayment`.
    pub trustor_accumulated: f64,
    /// Trustee's keep after repaying: `gain - repayment`.
    pub trustee_net: f64,
}

/// Outcome of the engagement-threshold test, with both inequalities exposed.
///
/// `satisfied` is the plain conjunction. The sub-flags are public because a
/// large magnification can be argued to compensate for a remittance below
/// the threshold; callers that want that nuance can inspect the flags
/// instead of the conjunction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdCheck {
    pub threshold: f64,
    pub remittance_value: f64,
    pub magnification: f64,
    pub remittance_ok: bool,
    pub magnification_ok: bool,
    pub satisfied: bool,
}

/// Value delivered by the trustor in one cycle: `p * V`.
pub fn remittance(remit_fraction: f64, offered_value: f64) -> Result<f64, ParamError> {
    check_remit_fraction(remit_fraction)?;
    check_offered_value(offered_value)?;
    Ok(remit_fraction * offered_value)
}

/// Value perceived by the trustee: `K * remittance`. Negative when `K < 0`.
pub fn perceived_gain(magnification: f64, remittance: f64) -> Result<f64, ParamError> {
    check_magnification(magnification)?;
    if !remittance.is_finite() {
        return Err(ParamError::new("remittance", "must be finite", remittance));
    }
    Ok(magnification * remittance)
}

/// Value returned to the trustor: `q * gain`.
pub fn repayment(repay_fraction: f64, gain: f64) -> Result<f64, ParamError> {
    check_repay_fraction(repay_fraction)?;
    if !gain.is_finite() {
        return Err(ParamError::new("gain", "must be finite", gain));
    }
    Ok(repay_fraction * gain)
}

/// Undelivered value left with the trustor: `(1 - p) * V`.
pub fn residual(remit_fraction: f64, offered_value: f64) -> Result<f64, ParamError> {
    check_remit_fraction(remit_fraction)?;
    check_offered_value(offered_value)?;
    Ok((1.0 - remit_fraction) * offered_value)
}

/// Run one full exchange cycle over an offered value.
///
/// ```
/// use trustgauge::game::{run_cycle, CycleParams};
///
/// let params = CycleParams::new(0.65, 0.14, 2.0).unwrap();
/// let ledger = run_cycle(&params, 1_000_000.0).unwrap();
/// assert_eq!(ledger.trustor_accumulated, 532_000.0);
/// assert_eq!(ledger.trustee_net, 1_118_000.0);
/// ```
pub fn run_cycle(params: &CycleParams, offered_value: f64) -> Result<CycleLedger, ParamError> {
    check_offered_value(offered_value)?;
    let remittance = params.remit_fraction * offered_value;
    let gain = params.magnification * remittance;
    let repayment = params.repay_fraction * gain;
    let residual = (1.0 - params.remit_fraction) * offered_value;
    Ok(CycleLedger {
        remittance,
        gain,
        repayment,
        residual,
        trustor_accumulated: residual + repayment,
        trustee_net: gain - repayment,
    })
}

/// Evaluate the closed-form n-cycle gains as products of parameter sums:
///
/// ```text
/// trustor = V * (1 - sum(p) + sum(q) * sum(K) * sum(p))
/// trustee = V * (1 - sum(q)) * sum(K) * sum(p)
/// ```
///
/// Returns `(trustor, trustee)`. For a single cycle this agrees with
/// [`run_cycle`]'s `trustor_accumulated` and `trustee_net`. For several
/// cycles it is a distinct quantity from iterating [`run_cycle`]: both
/// evaluation modes exist on [`Scenario`](crate::scenario::Scenario) and
/// neither is canonical.
pub fn closed_form_gains(config: &GameConfig) -> (f64, f64) {
    let sum_p: f64 = config.cycles.iter().map(|c| c.remit_fraction).sum();
    let sum_q: f64 = config.cycles.iter().map(|c| c.repay_fraction).sum();
    let sum_k: f64 = config.cycles.iter().map(|c| c.magnification).sum();
    let v = config.initial_value;
    let trustor = v * (1.0 - sum_p + sum_q * sum_k * sum_p);
    let trustee = v * (1.0 - sum_q) * sum_k * sum_p;
    (trustor, trustee)
}

/// Test whether a cycle clears the trustee's engagement threshold `T`:
/// the delivered value `p * V` must reach `T` and the magnification must be
/// at least 1.
pub fn check_threshold(
    remit_fraction: f64,
    offered_value: f64,
    magnification: f64,
    threshold: f64,
) -> ThresholdCheck {
    let remittance_value = remit_fraction * offered_value;
    let remittance_ok = remittance_value >= threshold;
    let magnification_ok = magnification >= 1.0;
    ThresholdCheck {
        threshold,
        remittance_value,
        magnification,
        remittance_ok,
        magnification_ok,
        satisfied: remittance_ok && magnification_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel_err(a: f64, b: f64) -> f64 {
        let scale = a.abs().max(b.abs()).max(1.0);
        (a - b).abs() / scale
    }

    #[test]
    fn remittance_worked_example() {
        assert_eq!(remittance(0.65, 1_000_000.0).unwrap(), 650_000.0);
        assert_eq!(remittance(0.0, 123.0).unwrap(), 0.0);
        assert_eq!(remittance(1.0, 42.5).unwrap(), 42.5);
    }

    #[test]
    fn remittance_rejects_bad_inputs() {
        let err = remittance(1.5, 100.0).unwrap_err();
        assert_eq!(err.field, "p");
        let err = remittance(0.5, 0.0).unwrap_err();
        assert_eq!(err.field, "V");
        let err = remittance(0.5, -3.0).unwrap_err();
        assert_eq!(err.field, "V");
        assert!(remittance(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn perceived_gain_examples() {
        assert_eq!(perceived_gain(2.0, 650_000.0).unwrap(), 1_300_000.0);
        assert_eq!(perceived_gain(1.0, 777.25).unwrap(), 777.25);
        assert_eq!(perceived_gain(-0.5, 100.0).unwrap(), -50.0);
        assert!(perceived_gain(f64::INFINITY, 1.0).is_err());
        assert!(perceived_gain(2.0, f64::NAN).is_err());
    }

    #[test]
    fn repayment_examples() {
        let b = repayment(0.14, 1_300_000.0).unwrap();
        assert!(rel_err(b, 182_000.0) < 1e-12);
        assert_eq!(repayment(0.0, 5_000.0).unwrap(), 0.0);
        assert_eq!(repayment(0.5, -100.0).unwrap(), -50.0);
    }

    #[test]
    fn repayment_rejects_full_giveback() {
        let err = repayment(1.0, 100.0).unwrap_err();
        assert_eq!(err.field, "q");
        assert!(err.to_string().contains("0 <= q < 1"));
        assert!(repayment(-0.01, 100.0).is_err());
    }

    #[test]
    fn residual_examples() {
        assert_eq!(residual(0.65, 1_000_000.0).unwrap(), 350_000.0);
        assert_eq!(residual(1.0, 9.0).unwrap(), 0.0);
        assert_eq!(residual(0.0, 9.0).unwrap(), 9.0);
    }

    #[test]
    fn run_cycle_worked_example() {
        let params = CycleParams::new(0.65, 0.14, 2.0).unwrap();
        let ledger = run_cycle(&params, 1_000_000.0).unwrap();
        assert_eq!(ledger.remittance, 650_000.0);
        assert_eq!(ledger.gain, 1_300_000.0);
        assert!(rel_err(ledger.repayment, 182_000.0) < 1e-12);
        assert_eq!(ledger.residual, 350_000.0);
        assert_eq!(ledger.trustor_accumulated, 532_000.0);
        assert_eq!(ledger.trustee_net, 1_118_000.0);
    }

    #[test]
    fn run_cycle_nothing_sent() {
        let params = CycleParams::new(0.0, 0.3, 4.0).unwrap();
        let ledger = run_cycle(&params, 777.0).unwrap();
        assert_eq!(ledger.trustor_accumulated, 777.0);
        assert_eq!(ledger.trustee_net, 0.0);
    }

    #[test]
    fn run_cycle_full_transfer_no_repayment() {
        let params = CycleParams::new(1.0, 0.0, 1.0).unwrap();
        let ledger = run_cycle(&params, 250.0).unwrap();
        assert_eq!(ledger.trustor_accumulated, 0.0);
        assert_eq!(ledger.trustee_net, 250.0);
    }

    #[test]
    fn closed_form_single_cycle_matches_run_cycle() {
        let params = CycleParams::new(0.65, 0.14, 2.0).unwrap();
        let config = GameConfig::new(1_000_000.0, vec![params]).unwrap();
        let (trustor, trustee) = closed_form_gains(&config);
        assert_eq!(trustor, 532_000.0);
        assert_eq!(trustee, 1_118_000.0);
    }

    #[test]
    fn closed_form_single_cycle_nothing_sent() {
        let params = CycleParams::new(0.0, 0.2, 3.0).unwrap();
        let config = GameConfig::new(500.0, vec![params]).unwrap();
        assert_eq!(closed_form_gains(&config), (500.0, 0.0));
    }

    // Two-cycle expected values frozen from evaluating the products-of-sums
    // expressions by hand: sum(p) = 1.0, sum(q) = 0.2, sum(K) = 2.0, so
    // trustor = V * (1 - 1 + 0.2 * 2 * 1) = 0.4 V and
    // trustee = V * 0.8 * 2 * 1 = 1.6 V. The vanished first term is the
    // point of the case: sum(p) = 1 wipes out the residual share.
    #[test]
    fn closed_form_two_cycles_frozen_values() {
        let cycle = CycleParams::new(0.5, 0.1, 1.0).unwrap();
        let config = GameConfig::new(1_000_000.0, vec![cycle, cycle]).unwrap();
        let (trustor, trustee) = closed_form_gains(&config);
        assert!(rel_err(trustor, 400_000.0) < 1e-12);
        assert!(rel_err(trustee, 1_600_000.0) < 1e-12);
    }

    #[test]
    fn config_rejects_empty_cycles() {
        let err = GameConfig::new(100.0, vec![]).unwrap_err();
        assert_eq!(err.field, "cycles");
    }

    #[test]
    fn threshold_examples() {
        let check = check_threshold(0.65, 1_000_000.0, 2.0, 600_000.0);
        assert!(check.remittance_ok && check.magnification_ok && check.satisfied);

        let check = check_threshold(0.5, 100.0, 0.5, 50.0);
        assert!(check.remittance_ok);
        assert!(!check.magnification_ok);
        assert!(!check.satisfied);

        let check = check_threshold(0.0, 1_000.0, 5.0, 1.0);
        assert!(!check.remittance_ok);
        assert!(!check.satisfied);
    }

    proptest! {
        // Conservation and ledger closure over random valid parameters.
        #[test]
        fn ledger_closure(
            p in 0.0..=1.0f64,
            q in 0.0..0.999f64,
            k in -5.0..5.0f64,
            v in 1e-3..1e9f64,
        ) {
            let params = CycleParams::new(p, q, k).unwrap();
            let ledger = run_cycle(&params, v).unwrap();
            prop_assert!(rel_err(ledger.remittance + ledger.residual, v) < 1e-12);
            prop_assert!(rel_err(ledger.trustee_net + ledger.repayment, ledger.gain) < 1e-12);
            prop_assert!(rel_err(ledger.residual + ledger.repayment, ledger.trustor_accumulated) < 1e-12);
        }

        // Sign structure of the exchange regimes.
        #[test]
        fn regime_signs(
            p in 0.001..=1.0f64,
            q in 0.001..0.999f64,
            k in prop_oneof![1.001..5.0f64, -5.0..-0.001f64],
            v in 1.0..1e9f64,
        ) {
            let params = CycleParams::new(p, q, k).unwrap();
            let ledger = run_cycle(&params, v).unwrap();
            if k > 1.0 {
                prop_assert!(ledger.gain > ledger.remittance);
                prop_assert!(ledger.trustee_net > 0.0);
            } else {
                prop_assert!(ledger.trustee_net < 0.0);
            }
        }

        // The threshold verdict is exactly the conjunction of its sub-flags.
        #[test]
        fn threshold_is_conjunction(
            p in 0.0..=1.0f64,
            v in 1e-3..1e9f64,
            k in -5.0..5.0f64,
            t in 0.0..1e9f64,
        ) {
            let check = check_threshold(p, v, k, t);
            prop_assert_eq!(check.satisfied, check.remittance_ok && check.magnification_ok);
        }
    }
}
