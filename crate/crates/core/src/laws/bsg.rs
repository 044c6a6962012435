//! Entropic Balog-Szemeredi-Gowers quantities.

use serde::{Deserialize, Serialize};

use super::PairStats;
use crate::algebra::{Joint, Word};
use crate::entropy::{conditional_entropy, conditional_entropy_given_statistic, Bits};
use crate::error::Result;

/// Entropies of two conditionally independent trials `(X1,Y1), (X2,Y2)` of
/// `(X, Y)` relative to `X + Y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BsgReport {
    /// Smallest `log C >= 0` with `A(X,Y) >= 3/2 (H(X)+H(Y)) - log C`.
    pub log_c: Bits,
    pub h_x: Bits,
    pub h_y: Bits,
    pub energy: Bits,
    pub h_x1_given_sum: Bits,
    pub h_y2_given_sum: Bits,
    pub h_cross_sum_given_sum: Bits,
    pub pass: bool,
}

pub fn bsg_report(j: &Joint) -> Result<BsgReport> {
    let s = PairStats::of(j)?;
    let log_c = s.bsg_log_c();
    let sum = Word::sum_of(0, 1);
    let t = j.cond_indep_trials(&sum)?;
    let h_x1 = conditional_entropy_given_statistic(&t, &[0], &sum)?;
    let h_y2 = conditional_entropy_given_statistic(&t, &[3], &sum)?;
    let cross = t.pushforward_tuple(&[Word::sum_of(0, 3), sum])?;
    let h_cross = conditional_entropy(&cross, &[0], &[1])?;
    let tol = crate::DEFAULT_TOL;
    let pass = h_x1.0 >= (s.hx - 2.0 * log_c).0 - tol
        && h_y2.0 >= (s.hy - 2.0 * log_c).0 - tol
        && h_cross.0 <= (0.5 * (s.hx + s.hy) + log_c).0 + tol;
    Ok(BsgReport {
        log_c,
        h_x: s.hx,
        h_y: s.hy,
        energy: s.energy,
        h_x1_given_sum: h_x1,
        h_y2_given_sum: h_y2,
        h_cross_sum_given_sum: h_cross,
        pass,
    })
}
