//! Integer-order Bessel functions of the first kind.
//!
//! Small arguments use the ascending series directly. Everything else goes
//! through Miller's downward recurrence normalised with
//! `J_0 + 2 sum_k J_2k = 1`, which is stable in both the oscillatory
//! (`x > n`) and the evanescent (`x < n`) regimes.

use super::AnalyticError;

/// Highest order accepted by [`bessel_j`].
pub const MAX_ORDER: u32 = 8;
/// Largest `|x|` accepted by [`bessel_j`].
pub const MAX_ARG: f64 = 50.0;

// Below this the series terms stay under ~I_n(4) ~ 11, so no cancellation.
const SERIES_CUTOFF: f64 = 4.0;
const RESCALE_AT: f64 = 1e250;

/// `J_order(x)` for `order <= 8`, `|x| <= 50`.
pub fn bessel_j(order: u32, x: f64) -> Result<f64, AnalyticError> {
    if order > MAX_ORDER {
        return Err(AnalyticError::BesselOrder(order));
    }
    if !x.is_finite() || x.abs() > MAX_ARG {
        return Err(AnalyticError::BesselArgument(x));
    }
    if x.abs() <= SERIES_CUTOFF {
        return Ok(series(order, x));
    }
    Ok(bessel_j_table(order as usize, x)[order as usize])
}

fn series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=order {
        term *= half / k as f64;
    }
    let h2 = half * half;
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= -h2 / (k * (k + order as f64));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() || term == 0.0 {
            break;
        }
        k += 1.0;
    }
    sum
}

/// `[J_0(x), J_1(x), ..., J_max_order(x)]` for any finite `x`.
pub fn bessel_j_table(max_order: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; max_order + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    let top = (max_order as f64).max(ax.ceil());
    let mut start = (top + 20.0 + (40.0 * top).sqrt()) as usize;
    start += start % 2;

    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-300; // J_k
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        if k <= max_order {
            out[k] = cur;
        }
        if k % 2 == 0 {
            norm += 2.0 * cur;
        }
        let prev = 2.0 * k as f64 / ax * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > RESCALE_AT {
            cur /= RESCALE_AT;
            next /= RESCALE_AT;
            norm /= RESCALE_AT;
            for v in out.iter_mut() {
                *v /= RESCALE_AT;
            }
        }
    }
    out[0] = cur;
    norm += cur;
    for (n, v) in out.iter_mut().enumerate() {
        *v /= norm;
        if x < 0.0 && n % 2 == 1 {
            *v = -*v;
        }
    }
    out
}
