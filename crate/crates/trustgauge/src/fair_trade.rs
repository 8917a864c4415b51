//! Fair-trade equilibrium analysis of the exchange dynamics.
//!
//! Writing one cycle as a linear map of the state `(A, N)` — trustor
//! accumulation and trustee net gain — gives the 2x2 exchange matrix
//!
//! ```text
//! | A' |   | 1-p    q |   | A |
//! | N' | = | K*p   -q | * | N |
//! ```
//!
//! Repeated exchange scales both holdings proportionally exactly along the
//! eigenvector of the dominant positive eigenvalue. The origin-anchored line
//! through that eigenvector is the fair-trade line: points above it (in the
//! `(N, A)` plane) favor the trustor, points below favor the trustee.

use serde::Serialize;
use thiserror::Error;

use crate::game::{CycleParams, ParamError};

#[derive(Debug, Error)]
pub enum FairTradeError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("eigenvalues are numerically repeated: discriminant {discriminant:e} is within tolerance {tolerance:e}")]
    DegenerateEigenvalues { discriminant: f64, tolerance: f64 },
    #[error("eigenvalues are complex: discriminant = {0}")]
    ComplexEigenvalues(f64),
    #[error("no positive dominant eigenvalue (largest is {0})")]
    NoPositiveDominantEigenvalue(f64),
    #[error("dominant eigenvector has no horizontal extent; the fair-trade line would be vertical")]
    VerticalLine,
}

/// One real eigenvalue with its eigenvector, normalized so the second
/// component is 1 where possible (first component 1 otherwise).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenPair {
    pub value: f64,
    pub vector: [f64; 2],
}

/// The origin-anchored fair-trade line `A = slope * N` together with the
/// eigenpair it came from. The intercept is always zero: scaling an exchange
/// up or down moves holdings along the line, through the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FairTradeLine {
    pub slope: f64,
    pub intercept: f64,
    pub source: EigenPair,
}

/// Which party a point of the `(N, A)` plane favors, relative to a
/// fair-trade line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TradeBalance {
    Fair,
    TrustorFavoring,
    TrusteeFavoring,
}

impl std::fmt::Display for TradeBalance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TradeBalance::Fair => "fair",
            TradeBalance::TrustorFavoring => "trustor-favoring",
            TradeBalance::TrusteeFavoring => "trustee-favoring",
        })
    }
}

/// The state-update matrix `[[1-p, q], [K*p, -q]]` for one cycle's
/// parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExchangeMatrix {
    entries: [[f64; 2]; 2],
    params: CycleParams,
}

impl ExchangeMatrix {
    pub fn new(remit_fraction: f64, repay_fraction: f64, magnification: f64) -> Result<Self, ParamError> {
        let params = CycleParams::new(remit_fraction, repay_fraction, magnification)?;
        Ok(Self::from_params(&params))
    }

    pub fn from_params(params: &CycleParams) -> Self {
        let (p, q, k) = (
            params.remit_fraction(),
            params.repay_fraction(),
            params.magnification(),
        );
        Self {
            entries: [[1.0 - p, q], [k * p, -q]],
            params: *params,
        }
    }

    pub fn entries(&self) -> [[f64; 2]; 2] {
        self.entries
    }

    pub fn params(&self) -> &CycleParams {
        &self.params
    }

    /// Advance the state one cycle: `(A, N)` to `(A', N')`. This is exactly
    /// the matrix-vector product.
    pub fn step(&self, state: (f64, f64)) -> (f64, f64) {
        let (accumulated, net_gain) = state;
        let m = &self.entries;
        (
            m[0][0] * accumulated + m[0][1] * net_gain,
            m[1][0] * accumulated + m[1][1] * net_gain,
        )
    }

    pub fn rows_linearly_independent(&self) -> bool {
        rows_linearly_independent(&self.entries)
    }

    pub fn eigen_decompose(&self) -> Result<(EigenPair, EigenPair), FairTradeError> {
        eigen_decompose(&self.entries)
    }

    pub fn fair_trade_line(&self) -> Result<FairTradeLine, FairTradeError> {
        fair_trade_line(&self.entries)
    }
}

fn det(m: &[[f64; 2]; 2]) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn max_abs_entry(m: &[[f64; 2]; 2]) -> f64 {
    m.iter()
        .flatten()
        .fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// Whether the two row vectors span the plane: `|det|` must exceed
/// `1e-12 * (largest entry)^2`.
pub fn rows_linearly_independent(m: &[[f64; 2]; 2]) -> bool {
    det(m).abs() > 1e-12 * max_abs_entry(m).powi(2)
}

/// Eigenvector for a known eigenvalue of a 2x2 matrix.
///
/// Both rows of `m - lambda*I` yield a candidate; the numerically larger one
/// is kept, so diagonal and triangular matrices resolve to axis vectors
/// instead of the zero vector.
fn eigenvector_for(m: &[[f64; 2]; 2], lambda: f64) -> [f64; 2] {
    let from_first_row = [m[0][1], lambda - m[0][0]];
    let from_second_row = [lambda - m[1][1], m[1][0]];
    let size = |v: &[f64; 2]| v[0].abs().max(v[1].abs());
    let v = if size(&from_first_row) >= size(&from_second_row) {
        from_first_row
    } else {
        from_second_row
    };
    if v[1] != 0.0 {
        [v[0] / v[1], 1.0]
    } else if v[0] != 0.0 {
        [1.0, v[1] / v[0]]
    } else {
        // m == lambda*I; every vector is an eigenvector.
        [1.0, 1.0]
    }
}

/// Closed-form eigendecomposition of a 2x2 matrix, largest eigenvalue first.
///
/// Fails when the discriminant of the characteristic polynomial is negative
/// (complex pair) or within `1e-12 * max(1, trace^2)` of zero (numerically
/// repeated).
pub fn eigen_decompose(m: &[[f64; 2]; 2]) -> Result<(EigenPair, EigenPair), FairTradeError> {
    let trace = m[0][0] + m[1][1];
    let discriminant = trace * trace - 4.0 * det(m);
    let tolerance = 1e-12 * trace.powi(2).max(1.0);
    if discriminant < -tolerance {
        return Err(FairTradeError::ComplexEigenvalues(discriminant));
    }
    if discriminant <= tolerance {
        return Err(FairTradeError::DegenerateEigenvalues {
            discriminant,
            tolerance,
        });
    }
    let root = discriminant.sqrt();
    let high = (trace + root) / 2.0;
    let low = (trace - root) / 2.0;
    Ok((
        EigenPair {
            value: high,
            vector: eigenvector_for(m, high),
        },
        EigenPair {
            value: low,
            vector: eigenvector_for(m, low),
        },
    ))
}

/// Derive the fair-trade line from the eigenvector of the largest (signed)
/// eigenvalue, which must be positive. With the eigenvector normalized to
/// `(x, 1)`, the line through the origin has slope `1 / x`.
pub fn fair_trade_line(m: &[[f64; 2]; 2]) -> Result<FairTradeLine, FairTradeError> {
    let (dominant, _) = eigen_decompose(m)?;
    if dominant.value <= 0.0 {
        return Err(FairTradeError::NoPositiveDominantEigenvalue(dominant.value));
    }
    if dominant.vector[0] == 0.0 {
        return Err(FairTradeError::VerticalLine);
    }
    Ok(FairTradeLine {
        slope: dominant.vector[1] / dominant.vector[0],
        intercept: 0.0,
        source: dominant,
    })
}

impl FairTradeLine {
    /// Classify a point `(N, A)` against the line with a relative tolerance
    /// band: within the band is fair, above favors the trustor, below favors
    /// the trustee.
    pub fn classify(&self, point: (f64, f64), tolerance: f64) -> TradeBalance {
        let (net_gain, accumulated) = point;
        let on_line = self.slope * net_gain;
        let band = tolerance.max(0.0) * accumulated.abs().max(on_line.abs()).max(1.0);
        let offset = accumulated - on_line;
        if offset.abs() <= band {
            TradeBalance::Fair
        } else if offset > 0.0 {
            TradeBalance::TrustorFavoring
        } else {
            TradeBalance::TrusteeFavoring
        }
    }
}
