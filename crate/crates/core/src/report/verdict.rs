use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Relative error of the prediction at the largest `n` accepted for PASS.
pub const PASS_ERROR: f64 = 0.05;
/// `|ratio_{2n} - 1| <= HALVING |ratio_n - 1|` at the largest pair.
pub const HALVING: f64 = 0.6;
/// Relative error at the largest `n` above which a growing trend FAILs.
pub const FAIL_ERROR: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerdictError {
    #[error("need at least 4 ratio entries, got {0}")]
    TooFewEntries(usize),
    #[error("no ratio at n = {0} to complete the doubling chain")]
    MissingChainEntry(u64),
}

/// The doubling chain `N/8, N/4, N/2, N` (floors) of `(n, ratio)` pairs.
pub fn doubling_chain(ratios: &[(u64, f64)]) -> Result<[(u64, f64); 4], VerdictError> {
    if ratios.len() < 4 {
        return Err(VerdictError::TooFewEntries(ratios.len()));
    }
    let n_max = ratios.iter().map(|r| r.0).max().expect("nonempty");
    let mut chain = [(0, 0.0); 4];
    for (k, slot) in chain.iter_mut().enumerate() {
        let n = n_max >> (3 - k);
        *slot = *ratios
            .iter()
            .find(|r| r.0 == n && n > 0)
            .ok_or(VerdictError::MissingChainEntry(n))?;
    }
    Ok(chain)
}

/// Decides whether `ratio_n = f_n / leading_term(n)` visibly tends to 1.
///
/// PASS: `|ratio - 1|` strictly decreasing along the last three doublings,
/// below [`PASS_ERROR`] at `N`, and shrinking by at least [`HALVING`] over
/// the last doubling. FAIL: more than [`FAIL_ERROR`] off at `N` and still
/// moving away. Anything else is INCONCLUSIVE.
pub fn convergence_verdict(ratios: &[(u64, f64)]) -> Result<Verdict, VerdictError> {
    let chain = doubling_chain(ratios)?;
    let err: Vec<f64> = chain.iter().map(|(_, r)| (r - 1.0).abs()).collect();
    if err.iter().any(|e| !e.is_finite()) {
        return Ok(Verdict::Fail);
    }
    let decreasing = err.windows(2).all(|w| w[1] < w[0]);
    if decreasing && err[3] < PASS_ERROR && err[3] <= HALVING * err[2] {
        return Ok(Verdict::Pass);
    }
    if err[3] > FAIL_ERROR && err[3] > err[2] {
        return Ok(Verdict::Fail);
    }
    Ok(Verdict::Inconclusive)
}
