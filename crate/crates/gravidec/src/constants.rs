//! Physical constants, Planck scales, and the interaction-strength formula
//! for a mass coupled to a quantized weak-field environment.

use crate::error::{Error, Result};

/// Fundamental constants in SI units.
///
/// Defaults are the CODATA 2018 recommended values; `c` and `k_B` are exact
/// by definition since the 2019 SI redefinition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Newtonian gravitational constant, m^3 kg^-1 s^-2.
    pub g_newton: f64,
    /// Reduced Planck constant, J s.
    pub hbar: f64,
    /// Speed of light in vacuum, m/s.
    pub c: f64,
    /// Boltzmann constant, J/K.
    pub k_b: f64,
}

/// CODATA 2018: G = 6.67430(15)e-11.
pub const CODATA_G: f64 = 6.674_30e-11;
/// Exact: hbar = h / 2pi with h = 6.62607015e-34 J s.
pub const CODATA_HBAR: f64 = 1.054_571_817e-34;
/// Exact by definition.
pub const CODATA_C: f64 = 299_792_458.0;
/// Exact by definition.
pub const CODATA_K_B: f64 = 1.380_649e-23;

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            g_newton: CODATA_G,
            hbar: CODATA_HBAR,
            c: CODATA_C,
            k_b: CODATA_K_B,
        }
    }
}

impl PhysicalConstants {
    /// Natural units G = hbar = c = k_B = 1.
    pub fn natural() -> Self {
        Self { g_newton: 1.0, hbar: 1.0, c: 1.0, k_b: 1.0 }
    }

    /// Planck's (unreduced) constant h = 2 pi hbar.
    pub fn h(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.hbar
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("G", self.g_newton),
            ("hbar", self.hbar),
            ("c", self.c),
            ("k_B", self.k_b),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::NonPositive { name, value: v });
            }
        }
        Ok(())
    }
}

/// Planck mass, energy and length derived from a constants table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanckScales {
    /// Planck mass sqrt(hbar c / G), kg.
    pub m_p: f64,
    /// Planck energy m_P c^2, J.
    pub e_p: f64,
    /// Planck length sqrt(hbar G / c^3), m.
    pub l_p: f64,
}

/// m_P = sqrt(hbar c / G), E_P = m_P c^2, l_P = sqrt(hbar G / c^3).
pub fn planck_scales(constants: &PhysicalConstants) -> Result<PlanckScales> {
    constants.validate()?;
    let m_p = (constants.hbar * constants.c / constants.g_newton).sqrt();
    Ok(PlanckScales {
        m_p,
        e_p: m_p * constants.c * constants.c,
        l_p: (constants.hbar * constants.g_newton / constants.c.powi(3)).sqrt(),
    })
}

/// Mode coupling strength (angular-frequency units) of a mass in a local
/// potential, coupled quadrupole-fashion to a mode of angular frequency
/// `omega` quantized in a volume `quant_volume`:
///
/// ```text
/// g(omega) = V(x) x^2 sqrt(16 pi G hbar) / (4 c^3 sqrt(V)) * omega^(3/2) / hbar
/// ```
///
/// The trailing 1/hbar converts the energy-units coupling to rad/s so that
/// the displacement g/omega is dimensionless. Only ratios of couplings enter
/// downstream visibility results.
pub fn coupling_strength(
    v_pot: f64,
    x: f64,
    quant_volume: f64,
    omega: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    constants.validate()?;
    if !(quant_volume > 0.0) {
        return Err(Error::NonPositive { name: "quant_volume", value: quant_volume });
    }
    if !(omega > 0.0) {
        return Err(Error::NonPositive { name: "omega", value: omega });
    }
    let amplitude = (16.0 * std::f64::consts::PI * constants.g_newton * constants.hbar).sqrt();
    let g_energy = v_pot * x * x * amplitude / (4.0 * constants.c.powi(3) * quant_volume.sqrt())
        * omega.powf(1.5);
    Ok(g_energy / constants.hbar)
}
