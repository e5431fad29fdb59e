//! Gambler's-ruin absorption probability for a biased walk on `[0, b]`.

use crate::error::{Error, Result};

/// `ln(1 - e^{-x})` for `x > 0` without cancellation.
fn ln1mexp(x: f64) -> f64 {
    if x > std::f64::consts::LN_2 {
        (-(-x).exp()).ln_1p()
    } else {
        (-(-x).exp_m1()).ln()
    }
}

/// Probability that the chain started at `s` is absorbed at `b` rather than 0,
/// for up-probability `p in (0, 1/2)`:
/// `(((1-p)/p)^s - 1) / (((1-p)/p)^b - 1)`, evaluated in log space so large
/// exponents do not overflow.
pub fn gambler_ruin_prob(p: f64, s: u64, b: u64) -> Result<f64> {
    if !(p > 0.0 && p < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "p must be in (0, 1/2), got {p}"
        )));
    }
    if b < 1 {
        return Err(Error::InvalidParameter("b must be at least 1".into()));
    }
    if s > b {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= s <= b, got s={s}, b={b}"
        )));
    }
    if s == 0 {
        return Ok(0.0);
    }
    if s == b {
        return Ok(1.0);
    }
    // q = (1-p)/p > 1; ratio = q^(s-b) * (1 - q^-s) / (1 - q^-b)
    let log_q = ((1.0 - p) / p).ln();
    let log_num = ln1mexp(s as f64 * log_q);
    let log_den = ln1mexp(b as f64 * log_q);
    Ok(((s as f64 - b as f64) * log_q + log_num - log_den).exp())
}

/// Simulates the chain once; returns true if absorbed at `b`.
pub fn simulate_ruin_chain(p: f64, s: u64, b: u64, rng: &mut impl rand::Rng) -> bool {
    let mut z = s;
    loop {
        if z == 0 {
            return false;
        }
        if z == b {
            return true;
        }
        if rng.gen::<f64>() < p {
            z += 1;
        } else {
            z -= 1;
        }
    }
}
