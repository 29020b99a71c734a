//! Physical constants and the handful of unit conversions the pipeline needs.
//!
//! Everything downstream computes in atomic units (hbar = m_e = E_h = a0 = 1).
//! Spectroscopic units (cm-1, a0, amu, uK) only appear at the I/O boundary.

use crate::error::{Error, Result};
use crate::potential::PotentialParams;

/// CODATA 2018 hartree energy in wavenumbers.
pub const HARTREE_IN_CM1: f64 = 219_474.631_363_2;
pub const HARTREE_IN_JOULE: f64 = 4.359_744_722_207_1e-18;
pub const HARTREE_IN_KELVIN: f64 = 3.157_750_248_040_7e5;
pub const HARTREE_IN_MHZ: f64 = 6.579_683_920_502e9;
pub const BOHR_IN_METER: f64 = 5.291_772_109_03e-11;
/// Unified atomic mass unit in electron masses.
pub const AMU_IN_ELECTRON_MASS: f64 = 1_822.888_486_209;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Energy,
    Length,
    Mass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Hartree,
    Wavenumber,
    Joule,
    Kelvin,
    Microkelvin,
    Megahertz,
    Bohr,
    Meter,
    Nanometer,
    Amu,
    ElectronMass,
}

impl Unit {
    pub fn dimension(self) -> Dimension {
        match self {
            Unit::Hartree
            | Unit::Wavenumber
            | Unit::Joule
            | Unit::Kelvin
            | Unit::Microkelvin
            | Unit::Megahertz => Dimension::Energy,
            Unit::Bohr | Unit::Meter | Unit::Nanometer => Dimension::Length,
            Unit::Amu | Unit::ElectronMass => Dimension::Mass,
        }
    }

    /// How many of this unit make up one atomic unit of its dimension.
    fn per_atomic_unit(self) -> f64 {
        match self {
            Unit::Hartree | Unit::Bohr | Unit::ElectronMass => 1.0,
            Unit::Wavenumber => HARTREE_IN_CM1,
            Unit::Joule => HARTREE_IN_JOULE,
            Unit::Kelvin => HARTREE_IN_KELVIN,
            Unit::Microkelvin => HARTREE_IN_KELVIN * 1e6,
            Unit::Megahertz => HARTREE_IN_MHZ,
            Unit::Meter => BOHR_IN_METER,
            Unit::Nanometer => BOHR_IN_METER * 1e9,
            Unit::Amu => 1.0 / AMU_IN_ELECTRON_MASS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

impl Quantity {
    pub fn new(value: f64, unit: Unit) -> Self {
        Self { value, unit }
    }

    pub fn convert(self, target: Unit) -> Result<Quantity> {
        if self.unit.dimension() != target.dimension() {
            return Err(Error::domain(format!(
                "cannot convert {:?} ({:?}) to {:?} ({:?})",
                self.unit,
                self.unit.dimension(),
                target,
                target.dimension()
            )));
        }
        if self.unit == target {
            return Ok(self);
        }
        let atomic = self.value / self.unit.per_atomic_unit();
        Ok(Quantity::new(atomic * target.per_atomic_unit(), target))
    }

    /// Value in the atomic unit of this quantity's dimension.
    pub fn atomic(self) -> f64 {
        self.value / self.unit.per_atomic_unit()
    }
}

pub fn cm1_to_hartree(e: f64) -> f64 {
    e / HARTREE_IN_CM1
}

pub fn hartree_to_cm1(e: f64) -> f64 {
    e * HARTREE_IN_CM1
}

pub fn hartree_to_microkelvin(e: f64) -> f64 {
    e * HARTREE_IN_KELVIN * 1e6
}

pub fn amu_to_electron_mass(m: f64) -> f64 {
    m * AMU_IN_ELECTRON_MASS
}

/// Two-body reduced mass, in whatever unit the inputs share.
pub fn reduced_mass(m1: f64, m2: f64) -> Result<f64> {
    if !(m1 > 0.0 && m2 > 0.0) || !m1.is_finite() || !m2.is_finite() {
        return Err(Error::domain(format!(
            "masses must be positive and finite, got {m1} and {m2}"
        )));
    }
    Ok(m1 * m2 / (m1 + m2))
}

/// Express dispersion coefficients given in `energy * length^n` units in
/// hartree * a0^6 and hartree * a0^8.
pub fn dispersion_to_atomic(c6: f64, c8: f64, energy: Unit, length: Unit) -> Result<PotentialParams> {
    let scale6 = dispersion_scale(energy, length, 6)?;
    let scale8 = dispersion_scale(energy, length, 8)?;
    if !c6.is_finite() || !c8.is_finite() {
        return Err(Error::domain("dispersion coefficients must be finite"));
    }
    Ok(PotentialParams::new_unchecked(c6 / scale6, c8 / scale8))
}

/// Convert an atomic-unit dispersion coefficient `C_n` into `energy * length^n`.
pub fn dispersion_from_atomic(cn: f64, n: i32, energy: Unit, length: Unit) -> Result<f64> {
    Ok(cn * dispersion_scale(energy, length, n)?)
}

fn dispersion_scale(energy: Unit, length: Unit, n: i32) -> Result<f64> {
    if energy.dimension() != Dimension::Energy || length.dimension() != Dimension::Length {
        return Err(Error::domain(format!(
            "dispersion units must be energy * length^n, got {energy:?} and {length:?}"
        )));
    }
    Ok(energy.per_atomic_unit() * length.per_atomic_unit().powi(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn reduced_mass_of_yb176_rb87() {
        let mu = reduced_mass(175.9426, 86.9092).unwrap();
        assert!((mu - 58.1737).abs() < 2e-4, "{mu}");
        assert_eq!(reduced_mass(3.0, 3.0).unwrap(), 1.5);
    }

    #[test]
    fn isotopologue_scale_factor() {
        let mu176 = reduced_mass(175.9426, 86.9092).unwrap();
        let mu174 = reduced_mass(173.9389, 86.9092).unwrap();
        assert!((mu174 - 57.9528).abs() < 5e-5, "{mu174}");
        assert_relative_eq!((mu176 / mu174).sqrt(), 1.00190, max_relative = 1e-5);
    }

    #[test]
    fn reduced_mass_rejects_non_positive() {
        assert!(matches!(reduced_mass(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(reduced_mass(1.0, -2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn energy_conversions() {
        let q = Quantity::new(1.0, Unit::Hartree)
            .convert(Unit::Wavenumber)
            .unwrap();
        assert!((q.value - 219_474.631).abs() < 1e-3);
        let zero = Quantity::new(0.0, Unit::Wavenumber)
            .convert(Unit::Hartree)
            .unwrap();
        assert_eq!(zero.value, 0.0);
        let e = Quantity::new(4.897, Unit::Wavenumber)
            .convert(Unit::Hartree)
            .unwrap();
        assert_relative_eq!(e.value, 2.2313e-5, max_relative = 1e-4);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let err = Quantity::new(1.0, Unit::Bohr).convert(Unit::Kelvin);
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn dispersion_units() {
        let p = dispersion_to_atomic(6190.0, 403_000.0, Unit::Hartree, Unit::Bohr).unwrap();
        assert_eq!((p.c6, p.c8), (6190.0, 403_000.0));
        let si = dispersion_from_atomic(6190.0, 6, Unit::Joule, Unit::Meter).unwrap();
        assert_relative_eq!(si, 2.9624e-76, max_relative = 1e-4);
        let back = dispersion_to_atomic(si, 0.0, Unit::Joule, Unit::Meter).unwrap();
        assert_relative_eq!(back.c6, 6190.0, max_relative = 1e-12);
        let z = dispersion_to_atomic(0.0, 0.0, Unit::Hartree, Unit::Bohr).unwrap();
        assert_eq!((z.c6, z.c8), (0.0, 0.0));
    }

    fn unit_strategy() -> impl Strategy<Value = (Unit, Unit)> {
        let energy = prop::sample::select(vec![
            Unit::Hartree,
            Unit::Wavenumber,
            Unit::Joule,
            Unit::Kelvin,
            Unit::Microkelvin,
            Unit::Megahertz,
        ]);
        let length = prop::sample::select(vec![Unit::Bohr, Unit::Meter, Unit::Nanometer]);
        let mass = prop::sample::select(vec![Unit::Amu, Unit::ElectronMass]);
        prop_oneof![
            (energy.clone(), energy),
            (length.clone(), length),
            (mass.clone(), mass),
        ]
    }

    proptest! {
        #[test]
        fn round_trip_closes(value in -1e6f64..1e6, (a, b) in unit_strategy()) {
            let there = Quantity::new(value, a).convert(b).unwrap();
            let back = there.convert(a).unwrap();
            prop_assert!((back.value - value).abs() <= 1e-12 * value.abs());
        }

        #[test]
        fn reduced_mass_symmetric_and_bounded(m1 in 1e-3f64..1e3, m2 in 1e-3f64..1e3) {
            let a = reduced_mass(m1, m2).unwrap();
            let b = reduced_mass(m2, m1).unwrap();
            prop_assert_eq!(a, b);
            prop_assert!(a <= m1.min(m2));
        }
    }
}
