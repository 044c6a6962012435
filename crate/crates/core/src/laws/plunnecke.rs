//! Entropic Plunnecke-Ruzsa inequality.

use super::{Checks, LawId, LawInput};
use crate::algebra::{independent_join, Dist, Word};
use crate::entropy::entropy;
use crate::error::{Error, Result};

fn convolve(a: &Dist, b: &Dist) -> Result<Dist> {
    independent_join(&[a, b])?.pushforward(&Word::sum_of(0, 1))
}

/// Checks `H(W + W1 + ... + Wm) <= H(W) + sum_i (H(W + Wi) - H(W))` for
/// independent `W, W1, ..., Wm`.
pub fn plunnecke_check(w: &Dist, ws: &[Dist], tol: f64) -> Result<super::SlackReport> {
    if ws.is_empty() {
        return Err(Error::SignatureMismatch("PR needs at least one summand".into()));
    }
    let hw = entropy(w);
    let mut c = Checks::new(tol);
    let mut total = w.clone();
    let mut bound = hw;
    for (i, wi) in ws.iter().enumerate() {
        let log_ci = entropy(convolve(w, wi)?) - hw;
        c.extra(&format!("log_c{}", i + 1), log_ci.0);
        bound += log_ci;
        total = convolve(&total, wi)?;
    }
    c.le("H(W+W1+...+Wm) <= H(W) + sum log Ci", entropy(&total), bound);
    let input = LawInput::Plunnecke { w: w.clone(), ws: ws.to_vec() };
    Ok(c.finish(LawId::Pr, input.witness()))
}
