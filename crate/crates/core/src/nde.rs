//! Near-dissociation expansion over the two-term long-range potential.
//!
//! The count of vibrational quanta between a bound level at energy `E` and
//! the dissociation limit is the semiclassical phase defect
//!
//! ```text
//! v_D - v = sqrt(2 mu)/pi * [ int_0^rt (sqrt(-V) - sqrt(E - V)) dr + int_rt^inf sqrt(-V) dr ]
//! ```
//!
//! For a pure `-C6/r^6` tail this collapses to the LeRoy-Bernstein law
//! `v_D - v = G6 |E|^(1/3)`; with `C8 > 0` it is evaluated numerically.
//! The inner integral is rewritten as `|E| / (sqrt(-V) + sqrt(E - V))`, which
//! has no cancellation and vanishes smoothly at `r -> 0`, and the substitution
//! `r = rt (1 - u^2)` removes the square-root cusp at the turning point. The
//! outer integral has a closed form.

use crate::error::{Error, Result};
use crate::potential::PotentialParams;
use crate::quadrature::{integrate, QuadOptions};
use crate::units::cm1_to_hartree;

/// `(3/2) * Gamma(2/3) Gamma(1/2) / (6 Gamma(7/6))`, the dimensionless phase
/// integral of a pure `r^-6` tail. Only used to seed root searches.
const PURE_C6_PHASE: f64 = 0.646_777_389_807_447_6;

/// Absolute energy tolerance of [`NdeModel::level_energy`]: 1e-10 cm-1.
const LEVEL_TOL_CM1: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NdeModel {
    pub params: PotentialParams,
    /// Reduced mass in electron masses.
    pub mu: f64,
    /// Absolute tolerance on the vibrational count.
    pub quad_abs_tol: f64,
    pub quad_max_depth: u32,
}

impl NdeModel {
    pub fn new(params: PotentialParams, mu: f64) -> Result<Self> {
        Self::with_tolerances(params, mu, 1e-10, 60)
    }

    pub fn with_tolerances(
        params: PotentialParams,
        mu: f64,
        quad_abs_tol: f64,
        quad_max_depth: u32,
    ) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::domain(format!("reduced mass must be positive, got {mu}")));
        }
        if !(quad_abs_tol > 0.0) || quad_max_depth == 0 {
            return Err(Error::domain("quadrature tolerances must be positive"));
        }
        let params = PotentialParams::new(params.c6, params.c8)?;
        Ok(Self {
            params,
            mu,
            quad_abs_tol,
            quad_max_depth,
        })
    }

    fn quad_options(&self) -> QuadOptions {
        QuadOptions {
            abs_tol: self.quad_abs_tol,
            rel_tol: 1e-14,
            max_depth: self.quad_max_depth,
        }
    }

    fn prefactor(&self) -> f64 {
        (2.0 * self.mu).sqrt() / std::f64::consts::PI
    }

    /// `v_D - v` for a level bound at `e` hartree.
    pub fn quantum_defect(&self, e: f64) -> Result<f64> {
        let tail = TailGeometry::new(&self.params, e)?;
        let pref = self.prefactor();
        let inner = integrate(|u| pref * tail.inner_integrand(u), 0.0, 1.0, self.quad_options())?;
        Ok(inner.value + pref * tail.outer_integral(&self.params))
    }

    /// `d(v_D - v)/dE`, which is `-(sqrt(2 mu) / 2 pi) int_0^rt dr / sqrt(E - V)`.
    ///
    /// The boundary terms at the turning point cancel, so only the inner
    /// region contributes. Always negative.
    pub fn defect_slope(&self, e: f64) -> Result<f64> {
        let tail = TailGeometry::new(&self.params, e)?;
        let pref = 0.5 * self.prefactor();
        let r = integrate(
            |u| pref * tail.slope_integrand(u),
            0.0,
            1.0,
            QuadOptions {
                // the slope integral is of order count/|E|
                abs_tol: self.quad_abs_tol / -e,
                ..self.quad_options()
            },
        )?;
        Ok(-r.value)
    }

    /// Pure-C6 LeRoy-Bernstein estimate of the energy holding `count` quanta.
    fn pure_c6_energy(&self, count: f64) -> f64 {
        let g6 = PURE_C6_PHASE * self.prefactor() * self.params.c6.powf(1.0 / 6.0);
        -(count / g6).powi(3)
    }

    /// Energy (hartree) of the level lying `count` quanta below dissociation.
    ///
    /// Safeguarded Newton iteration in `ln|E|`, seeded from the pure-C6 law,
    /// to 1e-10 cm-1.
    pub fn level_energy(&self, count: f64) -> Result<f64> {
        if !(count > 0.0 && count.is_finite()) {
            return Err(Error::domain(format!(
                "vibrational count must be positive, got {count}"
            )));
        }
        let tol = cm1_to_hartree(LEVEL_TOL_CM1);
        let mut y = (-self.pure_c6_energy(count)).ln();
        // bracket in y = ln|E|: f(lo) < 0 < f(hi)
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        let mut last_step = f64::INFINITY;
        for _ in 0..200 {
            let e = -y.exp();
            let f = self.quantum_defect(e)? - count;
            if f == 0.0 {
                return Ok(e);
            }
            if f < 0.0 {
                lo = lo.max(y);
            } else {
                hi = hi.min(y);
            }
            let dfdy = self.defect_slope(e)? * e;
            let mut next = y - f / dfdy;
            if !next.is_finite() {
                next = y;
            }
            next = next.clamp(y - 1.0, y + 1.0);
            if next <= lo || next >= hi {
                next = match (lo.is_finite(), hi.is_finite()) {
                    (true, true) => 0.5 * (lo + hi),
                    (true, false) => lo + 1.0,
                    (false, true) => hi - 1.0,
                    (false, false) => next,
                };
            }
            let step = (next.exp() - y.exp()).abs();
            y = next;
            if step <= tol {
                return Ok(-y.exp());
            }
            last_step = step;
        }
        Err(Error::numeric(
            format!("level energy for count {count} did not converge"),
            last_step,
        ))
    }

    /// Energies (hartree) of the levels `dv_from ..= dv_to`, each at count `v_d + |dv|`.
    pub fn predict_series(&self, v_d: f64, dv_from: i32, dv_to: i32) -> Result<Vec<(i32, f64)>> {
        if !(dv_from <= dv_to && dv_to <= -1) {
            return Err(Error::domain(format!(
                "need dv_from <= dv_to <= -1, got {dv_from}..={dv_to}"
            )));
        }
        if !(0.0..1.0).contains(&v_d) {
            return Err(Error::domain(format!("v_d must lie in [0, 1), got {v_d}")));
        }
        (dv_from..=dv_to)
            .map(|dv| Ok((dv, self.level_energy(v_d - f64::from(dv))?)))
            .collect()
    }
}

/// Turning point and scaled tail strengths for one energy.
struct TailGeometry {
    rt: f64,
    /// `C6 / rt^6`
    a: f64,
    /// `C8 / rt^8`
    b: f64,
}

impl TailGeometry {
    fn new(params: &PotentialParams, e: f64) -> Result<Self> {
        let rt = params.outer_turning_point(e)?;
        let a = params.c6 / rt.powi(6);
        let b = params.c8 / rt.powi(8);
        Ok(Self { rt, a, b })
    }

    /// `-V` and `E - V` at `r = rt (1 - s)`, both relative to the turning point.
    #[inline]
    fn depths(&self, s: f64) -> (f64, f64) {
        let ln_w = (-s).ln_1p();
        let grow6 = (-6.0 * ln_w).exp();
        let grow8 = (-8.0 * ln_w).exp();
        let kin = self.a * (-6.0 * ln_w).exp_m1() + self.b * (-8.0 * ln_w).exp_m1();
        (self.a * grow6 + self.b * grow8, kin)
    }

    fn inner_integrand(&self, u: f64) -> f64 {
        let s = u * u;
        if s >= 1.0 {
            return 0.0;
        }
        let (neg_v, kin) = self.depths(s);
        let denom = neg_v.sqrt() + kin.sqrt();
        if !denom.is_finite() {
            return 0.0;
        }
        2.0 * self.rt * u * (self.a + self.b) / denom
    }

    fn slope_integrand(&self, u: f64) -> f64 {
        let s = u * u;
        if s >= 1.0 {
            return 0.0;
        }
        // kin / s stays finite as s -> 0
        let per_s = if s == 0.0 {
            6.0 * self.a + 8.0 * self.b
        } else {
            self.depths(s).1 / s
        };
        if !per_s.is_finite() {
            return 0.0;
        }
        2.0 * self.rt / per_s.sqrt()
    }

    /// `int_rt^inf sqrt(C6/r^6 + C8/r^8) dr`
    /// `= sqrt(C6) x^2 ((1 + a)^(3/2) - 1) / (3 a)` with `x = 1/rt`, `a = C8 x^2 / C6`.
    fn outer_integral(&self, params: &PotentialParams) -> f64 {
        let x = 1.0 / self.rt;
        let a = params.c8 * x * x / params.c6;
        let ratio = if a == 0.0 {
            1.5
        } else {
            (1.5 * a.ln_1p()).exp_m1() / a
        };
        params.c6.sqrt() * x * x * ratio / 3.0
    }
}
