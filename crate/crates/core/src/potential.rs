//! The two-term long-range potential `V(r) = -C6/r^6 - C8/r^8` and the
//! geometric quantities derived from it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units;

/// Dispersion coefficients in atomic units (hartree * a0^6, hartree * a0^8).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    pub c6: f64,
    pub c8: f64,
}

impl PotentialParams {
    pub fn new(c6: f64, c8: f64) -> Result<Self> {
        if !(c6.is_finite() && c8.is_finite()) || c6 <= 0.0 || c8 < 0.0 {
            return Err(Error::domain(format!(
                "need c6 > 0 and c8 >= 0, got c6 = {c6}, c8 = {c8}"
            )));
        }
        Ok(Self { c6, c8 })
    }

    pub(crate) fn new_unchecked(c6: f64, c8: f64) -> Self {
        Self { c6, c8 }
    }

    pub fn evaluate(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::domain(format!("radius must be positive, got {r}")));
        }
        Ok(self.value(r))
    }

    #[inline]
    pub(crate) fn value(&self, r: f64) -> f64 {
        let inv2 = 1.0 / (r * r);
        let inv6 = inv2 * inv2 * inv2;
        -inv6 * (self.c6 + self.c8 * inv2)
    }

    #[inline]
    fn slope(&self, r: f64) -> f64 {
        let inv2 = 1.0 / (r * r);
        let inv7 = inv2 * inv2 * inv2 / r;
        inv7 * (6.0 * self.c6 + 8.0 * self.c8 * inv2)
    }

    /// Radius where the potential equals `e` (hartree, `e < 0`).
    ///
    /// The root is bracketed between the pure-C6 turning point and the
    /// turning point of `-(C6 + C8/r6^2)/r^6`, bisected to 1e-12 relative
    /// and then polished with Newton steps.
    pub fn outer_turning_point(&self, e: f64) -> Result<f64> {
        if !(e < 0.0) || !e.is_finite() {
            return Err(Error::domain(format!(
                "turning point needs a bound energy (< 0), got {e}"
            )));
        }
        let depth = -e;
        let r6 = (self.c6 / depth).powf(1.0 / 6.0);
        let mut lo = r6;
        let mut hi = ((self.c6 + self.c8 / (r6 * r6)) / depth).powf(1.0 / 6.0);
        if hi > lo {
            // a little slack so rounding cannot push the root outside
            hi *= 1.0 + 1e-12;
            while (hi - lo) > 1e-12 * hi {
                let mid = 0.5 * (lo + hi);
                if self.value(mid) < e {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        let mut r = 0.5 * (lo + hi);
        for _ in 0..3 {
            let step = (self.value(r) - e) / self.slope(r);
            r -= step;
            if step.abs() <= 1e-16 * r {
                break;
            }
        }
        Ok(r)
    }

    /// `V(r) + l(l+1)/(2 mu r^2)`, everything in atomic units.
    pub fn effective_potential(&self, mu: f64, l: u32, r: f64) -> Result<f64> {
        let v = self.evaluate(r)?;
        if !(mu > 0.0) {
            return Err(Error::domain(format!("reduced mass must be positive, got {mu}")));
        }
        let ll = f64::from(l) * f64::from(l + 1);
        Ok(v + ll / (2.0 * mu * r * r))
    }
}

/// Position and height of the centrifugal barrier for one partial wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BarrierInfo {
    pub l: u32,
    /// a0
    pub r_barrier: f64,
    /// hartree
    pub height: f64,
}

impl BarrierInfo {
    pub fn height_microkelvin(&self) -> f64 {
        units::hartree_to_microkelvin(self.height)
    }
}

/// Closed-form barrier of a pure-C6 potential.
///
/// Setting the derivative of `-C6/r^6 + l(l+1)/(2 mu r^2)` to zero gives
/// `r_b^4 = 6 C6 mu / (l(l+1))` and a height `l(l+1)/(3 mu r_b^2)`.
pub fn centrifugal_barrier(params: &PotentialParams, mu: f64, l: u32) -> Result<BarrierInfo> {
    if l == 0 {
        return Err(Error::domain("no barrier for the s-wave (l = 0)"));
    }
    if params.c8 != 0.0 {
        return Err(Error::domain(
            "closed-form barrier is only defined for a pure-C6 potential (c8 = 0)",
        ));
    }
    if !(params.c6 > 0.0) || !(mu > 0.0) {
        return Err(Error::domain("barrier needs c6 > 0 and mu > 0"));
    }
    let ll = f64::from(l) * f64::from(l + 1);
    let r_barrier = (6.0 * params.c6 * mu / ll).powf(0.25);
    let height = ll / (3.0 * mu * r_barrier * r_barrier);
    Ok(BarrierInfo { l, r_barrier, height })
}

/// Numerical maximum of the effective potential: bisection on the sign of
/// its slope, which pins the position to rounding level (a search on the
/// values themselves stalls at the square root of machine precision).
///
/// Works for any `c8`; used to cross-check [`centrifugal_barrier`].
pub fn maximize_effective_potential(params: &PotentialParams, mu: f64, l: u32) -> Result<BarrierInfo> {
    if l == 0 {
        return Err(Error::domain("no barrier for the s-wave (l = 0)"));
    }
    if !(mu > 0.0) {
        return Err(Error::domain(format!("reduced mass must be positive, got {mu}")));
    }
    let ll = f64::from(l) * f64::from(l + 1);
    let slope = |r: f64| 6.0 * params.c6 / r.powi(7) + 8.0 * params.c8 / r.powi(9) - ll / (mu * r.powi(3));
    // the effective potential is unimodal: rising from -inf, then decaying as 1/r^2
    let guess = (6.0 * (params.c6 + params.c8) * mu / ll).powf(0.25);
    let (mut a, mut b) = (guess * 0.1, guess * 10.0);
    if !(slope(a) > 0.0 && slope(b) < 0.0) {
        return Err(Error::numeric("barrier is not bracketed", b - a));
    }
    loop {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if slope(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let r_barrier = 0.5 * (a + b);
    Ok(BarrierInfo {
        l,
        r_barrier,
        height: params.effective_potential(mu, l, r_barrier)?,
    })
}
