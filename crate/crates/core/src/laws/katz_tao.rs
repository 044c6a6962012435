//! Entropic Katz-Tao inequality for independent ring-valued variables.

use serde::{Deserialize, Serialize};

use crate::algebra::{independent_join, Dist, Word};
use crate::energy::{product_word, self_energy, self_mult_energy};
use crate::entropy::{entropy, entropy_of_word, Bits};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KatzTaoSecondClaim {
    /// `3 H(X) - min(A(X), M(X))`.
    pub log_c: Bits,
    /// Only meaningful when `log_c >= 0`.
    pub applicable: bool,
    pub lhs: Bits,
    pub rhs: Bits,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KatzTaoReport {
    pub lhs: Bits,
    pub rhs: Bits,
    pub slack: Bits,
    pub h_xy_plus_zw: Bits,
    /// Present when all four inputs are identically distributed.
    pub second_claim: Option<KatzTaoSecondClaim>,
}

fn pair_entropy(a: &Dist, b: &Dist, w: &Word) -> Result<Bits> {
    entropy_of_word(independent_join(&[a, b])?, w)
}

fn pair_dist(a: &Dist, b: &Dist, w: &Word) -> Result<Dist> {
    independent_join(&[a, b])?.pushforward(w)
}

pub fn katz_tao_report(x: &Dist, y: &Dist, z: &Dist, w: &Dist) -> Result<KatzTaoReport> {
    let carrier = x.carrier().clone();
    if !carrier.is_ring() {
        return Err(Error::RingOpOnGroup);
    }
    for d in [x, y, z, w] {
        if d.carrier() != &carrier {
            return Err(Error::SpecMismatch(carrier.to_string(), d.carrier().to_string()));
        }
        if d.support().contains(&carrier.zero()) {
            return Err(Error::SignatureMismatch("inputs must avoid zero".into()));
        }
    }
    let mul = product_word(&carrier)?;
    let add = Word::sum_of(0, 1);
    // By independence XY and ZW are independent, so their sum can be formed
    // from the two product laws.
    let xy = pair_dist(x, y, &mul)?;
    let zw = pair_dist(z, w, &mul)?;
    let h_target = pair_entropy(&xy, &zw, &add)?;

    let lhs = h_target + entropy(x) + entropy(y) + 2.0 * entropy(z) + 2.0 * entropy(w);
    let rhs = pair_entropy(x, y, &add)?
        + pair_entropy(z, w, &Word::diff_of(0, 1))?
        + pair_entropy(x, z, &mul)?
        + 2.0 * pair_entropy(y, z, &mul)?
        + 2.0 * entropy(&zw);

    let second_claim = if x == y && y == z && z == w {
        let hx = entropy(x);
        let a = self_energy(x)?.value;
        let m = self_mult_energy(x)?.value;
        let log_c = 3.0 * hx - a.min(m);
        Some(KatzTaoSecondClaim { log_c, applicable: log_c.0 >= 0.0, lhs: h_target, rhs: hx + 8.0 * log_c })
    } else {
        None
    };
    Ok(KatzTaoReport { lhs, rhs, slack: rhs - lhs, h_xy_plus_zw: h_target, second_claim })
}
