//! Worked examples and non-asserting scans around sum-product questions.

mod scan;

use serde::{Deserialize, Serialize};

use crate::algebra::{independent_join, is_prime, Carrier, Dist, Element, GroupSpec, RingSpec, Word};
use crate::energy::{additive_energy, is_sidon_rv, is_sidon_set, self_energy};
use crate::entropy::{entropy, entropy_of_word, Bits, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::laws::gen::HEGARTY;

pub use scan::{
    cs_search, gk_scan, real_line_family, real_line_probe, sumproduct_scan, write_csv, CsFindings, CsViolation,
    GkReport, RealLineReport, ScanFlags, ScanMode, ScanRecord, SumProductScan, DEFAULT_BUDGET,
};

fn uniform_ints(c: Carrier, vs: &[i64]) -> Dist {
    let els: Vec<Element> = vs.iter().map(|&v| Element::scalar(v)).collect();
    Dist::uniform_on(c, &els).expect("distinct elements")
}

/// `X` uniform on the Hegarty set `A`, `Y` uniform on `-A`, independent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HegartyReport {
    pub set: Vec<i64>,
    pub h_x: Bits,
    pub h_y: Bits,
    pub h_x_plus_y: Bits,
    pub h_x_plus_x: Bits,
    pub energy_xy: Bits,
    pub energy_x: Bits,
    pub energy_y: Bits,
    /// `A(X,Y) - A(X)/2 - A(Y)/2`.
    pub margin: Bits,
    pub violation: bool,
}

pub fn reproduce_hegarty() -> Result<HegartyReport> {
    let z = Carrier::Group(GroupSpec::Integers);
    let neg: Vec<i64> = HEGARTY.iter().map(|v| -v).collect();
    let x = uniform_ints(z.clone(), &HEGARTY);
    let y = uniform_ints(z, &neg);
    let xy = independent_join(&[&x, &y])?;
    let xx = independent_join(&[&x, &x])?;
    let energy_xy = additive_energy(&xy)?.value;
    let energy_x = self_energy(&x)?.value;
    let energy_y = self_energy(&y)?.value;
    let margin = energy_xy - 0.5 * (energy_x + energy_y);
    Ok(HegartyReport {
        set: HEGARTY.to_vec(),
        h_x: entropy(&x),
        h_y: entropy(&y),
        h_x_plus_y: entropy_of_word(&xy, &Word::sum_of(0, 1))?,
        h_x_plus_x: entropy_of_word(&xx, &Word::sum_of(0, 1))?,
        energy_xy,
        energy_x,
        energy_y,
        margin,
        violation: margin.0 > 0.0,
    })
}

/// `X` uniform on `{0,1,2}`: a Sidon variable on a set that is not Sidon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SidonExampleReport {
    pub h_x: Bits,
    pub h_x_plus_x: Bits,
    pub doubling: Bits,
    pub doubling_nats: f64,
    /// `s(X) - (H(X) - 1)`.
    pub sidon_slack: Bits,
    pub sidon_rv: bool,
    pub sidon_set: bool,
}

pub fn reproduce_sidon012() -> Result<SidonExampleReport> {
    let z = Carrier::Group(GroupSpec::Integers);
    let x = uniform_ints(z.clone(), &[0, 1, 2]);
    let h_x = entropy(&x);
    let h_x_plus_x = entropy_of_word(independent_join(&[&x, &x])?, &Word::sum_of(0, 1))?;
    let doubling = h_x_plus_x - h_x;
    let (sidon_rv, sidon_slack) = is_sidon_rv(&x, DEFAULT_TOL)?;
    Ok(SidonExampleReport {
        h_x,
        h_x_plus_x,
        doubling,
        doubling_nats: doubling.to_nats(),
        sidon_slack,
        sidon_rv,
        sidon_set: is_sidon_set(&z, &x.support())?,
    })
}

/// `X` uniform on `F_q^*` inside the field `F_q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubfieldReport {
    pub q: u64,
    pub h_x: Bits,
    /// `H(X+X')` by exact convolution.
    pub h_x_plus_x: Bits,
    /// `H(X+X')` from the closed form.
    pub closed_form: Bits,
    pub deviation: f64,
    pub mult_energy: Bits,
    /// `3 log2(q-1)`.
    pub mult_expected: Bits,
    pub add_energy: Bits,
    /// `2 log2(q-1) - log2(q-2)`, the leading terms of `A(X)`.
    pub add_leading: Bits,
}

/// Closed form of `H(X+X')` for `X` uniform on `F_q^*`: the sum is `0` with
/// probability `1/(q-1)` and otherwise uniform over `F_q^*`.
pub fn subfield_closed_form(q: u64) -> Bits {
    let n = (q - 1) as f64;
    let m = (q - 2) as f64;
    Bits((1.0 / n) * n.log2() + n * (m / (n * n)) * (n * n / m).log2())
}

pub fn subfield_example(q: u64) -> Result<SubfieldReport> {
    if q < 3 || !is_prime(q) {
        return Err(Error::NonPrimeQ(q));
    }
    let field = Carrier::Ring(RingSpec::Fp(q));
    let units: Vec<i64> = (1..q as i64).collect();
    let x = uniform_ints(field, &units);
    let xx = independent_join(&[&x, &x])?;
    let h_x = entropy(&x);
    let h_x_plus_x = entropy_of_word(&xx, &Word::sum_of(0, 1))?;
    let h_xx = entropy_of_word(&xx, &Word::prod_of(0, 1))?;
    let closed_form = subfield_closed_form(q);
    let n = (q - 1) as f64;
    Ok(SubfieldReport {
        q,
        h_x,
        h_x_plus_x,
        closed_form,
        deviation: (h_x_plus_x - closed_form).0.abs(),
        mult_energy: 4.0 * h_x - h_xx,
        mult_expected: Bits(3.0 * n.log2()),
        add_energy: 4.0 * h_x - h_x_plus_x,
        add_leading: Bits(2.0 * n.log2() - (n - 1.0).log2()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hegarty_values() {
        let r = reproduce_hegarty().unwrap();
        assert_eq!(r.h_x.0, 3.0);
        assert_eq!(r.h_y.0, 3.0);
        assert!((r.h_x_plus_y.0 - 4.507).abs() < 1e-3);
        assert!((r.h_x_plus_x.0 - 4.513).abs() < 1e-3);
        assert!((r.energy_xy.0 - 7.493).abs() < 1e-3);
        assert!((r.energy_x.0 - 7.487).abs() < 1e-3);
        assert!(r.violation);
        assert!((r.margin.0 - 0.006056).abs() < 1e-5);
    }

    #[test]
    fn sidon_example() {
        let r = reproduce_sidon012().unwrap();
        assert!(r.sidon_rv && !r.sidon_set);
        assert!((r.doubling.0 - 0.61220).abs() < 1e-5);
        assert!((r.doubling_nats - 0.4244).abs() < 5e-4);
    }

    #[test]
    fn subfield_small_cases() {
        let r = subfield_example(3).unwrap();
        assert!((r.h_x_plus_x.0 - 1.5).abs() < 1e-12);
        let r = subfield_example(5).unwrap();
        let expected = 0.25 * 2.0 + 0.75 * (16.0f64 / 3.0).log2();
        assert!((r.h_x_plus_x.0 - expected).abs() < 1e-12);
        assert!((r.mult_energy.0 - 6.0).abs() < 1e-12);
        assert_eq!(subfield_example(4), Err(Error::NonPrimeQ(4)));
        assert_eq!(subfield_example(2), Err(Error::NonPrimeQ(2)));
    }
}
