//! Rotational and hyperfine structure of a single vibrational line.
//!
//! Components follow `nu = nu_res + delta_pa + B R'(R'+1) + m' Delta_R`, with
//! `m'` running over `-min(R', F')..=min(R', F')`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{cm1_to_hartree, hartree_to_cm1, HARTREE_IN_KELVIN};

/// Atomic reference line the detuning is measured from (cm-1).
pub const NU_RES_CM1: f64 = 12_578.862;
/// Excited-state hyperfine splitting between the F'=1 and F'=2 progressions.
pub const HYPERFINE_SPLITTING_CM1: f64 = 0.0273;

/// Fixed-rotor radius (a0) for a rotational constant in cm-1 and a reduced
/// mass in electron masses.
pub fn radius_from_b(b_rot_cm1: f64, mu: f64) -> Result<f64> {
    if !(b_rot_cm1 > 0.0 && b_rot_cm1.is_finite()) {
        return Err(Error::domain(format!("B_rot must be positive, got {b_rot_cm1}")));
    }
    if !(mu > 0.0) {
        return Err(Error::domain(format!("reduced mass must be positive, got {mu}")));
    }
    Ok(1.0 / (2.0 * mu * cm1_to_hartree(b_rot_cm1)).sqrt())
}

/// Rotational constant (cm-1) of a fixed rotor of radius `r` (a0).
pub fn b_from_radius(r: f64, mu: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::domain(format!("radius must be positive, got {r}")));
    }
    if !(mu > 0.0) {
        return Err(Error::domain(format!("reduced mass must be positive, got {mu}")));
    }
    Ok(hartree_to_cm1(1.0 / (2.0 * mu * r * r)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationalLevel {
    pub b_rot: f64,
    /// Splitting between adjacent m' components (cm-1).
    pub delta_r: f64,
    pub f_prime: u8,
    pub r_prime_max: u32,
}

impl RotationalLevel {
    pub fn new(b_rot: f64, delta_r: f64, f_prime: u8, r_prime_max: u32) -> Result<Self> {
        if !(b_rot > 0.0 && b_rot.is_finite()) {
            return Err(Error::domain(format!("B_rot must be positive, got {b_rot}")));
        }
        if !delta_r.is_finite() {
            return Err(Error::domain("Delta_R must be finite"));
        }
        if !matches!(f_prime, 1 | 2) {
            return Err(Error::domain(format!("F' must be 1 or 2, got {f_prime}")));
        }
        Ok(Self {
            b_rot,
            delta_r,
            f_prime,
            r_prime_max,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationConfig {
    pub nu_res: f64,
    /// Added to every F'=1 component. Negative places F'=1 below F'=2.
    pub f1_offset: f64,
    /// Relative amplitude per R' band; bands past the end reuse the last entry.
    pub band_amplitudes: Vec<f64>,
}

impl Default for RotationConfig {
    fn default() -> Self {
        Self {
            nu_res: NU_RES_CM1,
            f1_offset: -HYPERFINE_SPLITTING_CM1,
            band_amplitudes: vec![1.0, 0.6, 0.3],
        }
    }
}

impl RotationConfig {
    fn band_amplitude(&self, r: u32) -> f64 {
        match self.band_amplitudes.get(r as usize) {
            Some(&a) => a,
            None => self.band_amplitudes.last().copied().unwrap_or(1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineComponent {
    /// Absolute laser wavenumber (cm-1).
    pub wavenumber: f64,
    pub r_prime: u32,
    pub m_prime: i32,
    pub f_prime: u8,
    pub rel_amplitude: f64,
}

impl LineComponent {
    /// Position in the detuning convention.
    pub fn delta_pa(&self, nu_res: f64) -> f64 {
        self.wavenumber - nu_res
    }
}

pub fn components(delta_pa: f64, lvl: &RotationalLevel, cfg: &RotationConfig) -> Vec<LineComponent> {
    let offset = if lvl.f_prime == 1 { cfg.f1_offset } else { 0.0 };
    let mut out = Vec::new();
    for r in 0..=lvl.r_prime_max {
        let centre = cfg.nu_res + delta_pa + offset + lvl.b_rot * f64::from(r * (r + 1));
        let m_max = r.min(u32::from(lvl.f_prime)) as i32;
        for m in -m_max..=m_max {
            out.push(LineComponent {
                wavenumber: centre + f64::from(m) * lvl.delta_r,
                r_prime: r,
                m_prime: m,
                f_prime: lvl.f_prime,
                rel_amplitude: cfg.band_amplitude(r),
            });
        }
    }
    out
}

/// Largest partial wave whose centrifugal barrier (hartree) lies below
/// `factor * k_B T`. Barriers are checked upward from `l = 1`; the first one
/// that blocks ends the search.
pub fn max_thermal_r(temperature_k: f64, barrier_by_l: &BTreeMap<u32, f64>, factor: f64) -> Result<u32> {
    if !(temperature_k >= 0.0 && temperature_k.is_finite()) {
        return Err(Error::domain(format!(
            "temperature must be >= 0, got {temperature_k}"
        )));
    }
    if !(factor > 0.0) {
        return Err(Error::domain(format!(
            "barrier factor must be positive, got {factor}"
        )));
    }
    let threshold = factor * temperature_k / HARTREE_IN_KELVIN;
    let mut r_max = 0;
    for l in 1.. {
        match barrier_by_l.get(&l) {
            Some(&height) if height < threshold => r_max = l,
            _ => break,
        }
    }
    Ok(r_max)
}

pub const COMPONENT_HEADER: &str = "wavenumber_cm1,r_prime,m_prime,f_prime,amplitude";

pub fn write_components_csv(components: &[LineComponent]) -> String {
    let mut out = String::from(COMPONENT_HEADER);
    out.push('\n');
    for c in components {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            c.wavenumber, c.r_prime, c.m_prime, c.f_prime, c.rel_amplitude
        );
    }
    out
}

pub fn parse_components_csv(text: &str) -> Result<Vec<LineComponent>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = rdr.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != COMPONENT_HEADER {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header `{COMPONENT_HEADER}`"),
        });
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| row.get(i).unwrap_or("");
        let bad = |what: &str| Error::Parse {
            line,
            message: format!("invalid {what}"),
        };
        out.push(LineComponent {
            wavenumber: field(0).parse().map_err(|_| bad("wavenumber_cm1"))?,
            r_prime: field(1).parse().map_err(|_| bad("r_prime"))?,
            m_prime: field(2).parse().map_err(|_| bad("m_prime"))?,
            f_prime: field(3).parse().map_err(|_| bad("f_prime"))?,
            rel_amplitude: field(4).parse().map_err(|_| bad("amplitude"))?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const MU176: f64 = 106_043.95;

    #[test]
    fn radii_from_table_values() {
        assert!((radius_from_b(0.85e-3, MU176).unwrap() - 34.9).abs() < 0.1);
        assert!((radius_from_b(2.05e-3, MU176).unwrap() - 22.5).abs() < 0.1);
        assert!((b_from_radius(34.9, MU176).unwrap() - 0.85e-3).abs() < 0.01e-3);
        assert!(radius_from_b(0.0, MU176).is_err());
        assert!(b_from_radius(-1.0, MU176).is_err());
    }

    #[test]
    fn component_counts() {
        let cfg = RotationConfig::default();
        let count = |f: u8, r: u32| {
            let lvl = RotationalLevel::new(1.7e-3, 0.4e-3, f, r).unwrap();
            components(-2.4, &lvl, &cfg)
                .into_iter()
                .filter(|c| c.r_prime == r)
                .count()
        };
        assert_eq!(count(2, 0), 1);
        assert_eq!(count(2, 1), 3);
        assert_eq!(count(2, 2), 5);
        assert_eq!(count(1, 2), 3);
        let lvl = RotationalLevel::new(1.7e-3, 0.4e-3, 2, 2).unwrap();
        assert_eq!(components(-2.4, &lvl, &cfg).len(), 9);
    }

    #[test]
    fn r1_band_is_centred_on_two_b() {
        let cfg = RotationConfig::default();
        let lvl = RotationalLevel::new(1.7e-3, 0.4e-3, 2, 1).unwrap();
        let c = components(-2.4, &lvl, &cfg);
        assert_eq!(c[0].wavenumber, NU_RES_CM1 - 2.4);
        let band: Vec<f64> = c
            .iter()
            .filter(|c| c.r_prime == 1)
            .map(|c| c.delta_pa(NU_RES_CM1))
            .collect();
        assert!((band[1] - (-2.4 + 2.0 * 1.7e-3)).abs() < 1e-12);
        assert!((band[2] - band[1] - 0.4e-3).abs() < 1e-12);
        assert!((band[1] - band[0] - 0.4e-3).abs() < 1e-12);
    }

    #[test]
    fn f1_offset_applies_only_to_f1() {
        let cfg = RotationConfig::default();
        let f1 = components(-1.0, &RotationalLevel::new(1e-3, 0.0, 1, 0).unwrap(), &cfg);
        let f2 = components(-1.0, &RotationalLevel::new(1e-3, 0.0, 2, 0).unwrap(), &cfg);
        assert!((f1[0].wavenumber - f2[0].wavenumber + HYPERFINE_SPLITTING_CM1).abs() < 1e-12);
    }

    #[test]
    fn thermal_cutoff() {
        let uk = |x: f64| x / 1e6 / HARTREE_IN_KELVIN;
        let barriers: BTreeMap<u32, f64> = [
            (1, uk(916.0 * (2.0f64 / 12.0).powf(1.5))),
            (2, uk(916.0 * (6.0f64 / 12.0).powf(1.5))),
            (3, uk(916.0)),
        ]
        .into_iter()
        .collect();
        assert_eq!(max_thermal_r(450e-6, &barriers, 1.0).unwrap(), 2);
        assert_eq!(max_thermal_r(450e-6, &barriers, 2.0).unwrap(), 2);
        assert_eq!(max_thermal_r(460e-6, &barriers, 2.0).unwrap(), 3);
        assert_eq!(max_thermal_r(1e-3, &barriers, 1.0).unwrap(), 3);
        assert_eq!(max_thermal_r(0.0, &barriers, 2.0).unwrap(), 0);
        assert_eq!(max_thermal_r(1e-9, &barriers, 2.0).unwrap(), 0);
    }

    #[test]
    fn csv_round_trip() {
        let lvl = RotationalLevel::new(1.7e-3, 0.4e-3, 2, 2).unwrap();
        let comps = components(-2.437, &lvl, &RotationConfig::default());
        let back = parse_components_csv(&write_components_csv(&comps)).unwrap();
        assert_eq!(back, comps);
    }

    proptest! {
        #[test]
        fn radius_b_round_trip(b in 1e-5f64..1e-1, mu in 1e3f64..1e6) {
            let r = radius_from_b(b, mu).unwrap();
            let back = b_from_radius(r, mu).unwrap();
            prop_assert!(((back - b) / b).abs() <= 1e-12);
        }

        #[test]
        fn doubling_radius_quarters_b(r in 1.0f64..500.0, mu in 1e3f64..1e6) {
            let b1 = b_from_radius(r, mu).unwrap();
            let b2 = b_from_radius(2.0 * r, mu).unwrap();
            prop_assert!((b1 / b2 - 4.0).abs() < 1e-12);
        }

        #[test]
        fn bands_are_mirror_symmetric(
            b in 1e-4f64..5e-3,
            d in 0.0f64..1e-3,
            f in 1u8..=2,
            rmax in 0u32..5,
        ) {
            let lvl = RotationalLevel::new(b, d, f, rmax).unwrap();
            let comps = components(-3.0, &lvl, &RotationConfig::default());
            for r in 0..=rmax {
                let band: Vec<_> = comps.iter().filter(|c| c.r_prime == r).collect();
                prop_assert_eq!(band.len() as u32, 2 * r.min(u32::from(f)) + 1);
                let centre = band[band.len() / 2].wavenumber;
                for (lo, hi) in band.iter().zip(band.iter().rev()) {
                    prop_assert_eq!(lo.m_prime, -hi.m_prime);
                    prop_assert!(((centre - lo.wavenumber) - (hi.wavenumber - centre)).abs() < 1e-9);
                }
            }
        }
    }
}
