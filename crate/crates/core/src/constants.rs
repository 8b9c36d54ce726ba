//! CODATA 2018 physical constants.
//!
//! Values are exact where the 2019 SI redefinition fixes them (c, h, e) and
//! carry the full published precision otherwise. Nothing is looked up at
//! runtime.

use std::f64::consts::PI;

use serde::Serialize;

/// Name of the constants set, echoed in run manifests.
pub const VINTAGE: &str = "CODATA 2018";

const SPEED_OF_LIGHT: f64 = 299_792_458.0;
const PLANCK: f64 = 6.626_070_15e-34;
const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
const BOHR_MAGNETON: f64 = 9.274_010_078_3e-24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    /// Speed of light, m/s.
    pub c: f64,
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Electron mass, kg.
    pub m_e: f64,
    /// Elementary charge, C.
    pub e_charge: f64,
    /// Bohr magneton, J/T.
    pub mu_b: f64,
    /// Compton wavelength h/(m_e c), m.
    pub lambda_compton: f64,
    /// Reduced Compton wavelength ħ/(m_e c), m.
    pub lambda_compton_reduced: f64,
}

impl PhysicalConstants {
    pub const fn codata2018() -> Self {
        PhysicalConstants {
            c: SPEED_OF_LIGHT,
            hbar: PLANCK / (2.0 * PI),
            m_e: ELECTRON_MASS,
            e_charge: ELEMENTARY_CHARGE,
            mu_b: BOHR_MAGNETON,
            // both from h, m_e, c so that λ_C = 2π·λ̄ to rounding
            lambda_compton: PLANCK / (ELECTRON_MASS * SPEED_OF_LIGHT),
            lambda_compton_reduced: PLANCK / (2.0 * PI) / (ELECTRON_MASS * SPEED_OF_LIGHT),
        }
    }

    /// Electron rest energy m_e c², J.
    pub fn rest_energy(&self) -> f64 {
        self.m_e * self.c * self.c
    }

    /// Bohr magneton in eV/T.
    pub fn mu_b_ev(&self) -> f64 {
        self.mu_b / self.e_charge
    }

    pub fn joules_to_ev(&self, joules: f64) -> f64 {
        joules / self.e_charge
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata2018()
    }
}
