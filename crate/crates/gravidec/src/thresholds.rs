//! Closed-form calculators: quadrupole graviton emission, the dipole-formula
//! substitution, the two-mass slit condition, and field-fluctuation variance.

use num_complex::Complex64 as C64;

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::modes::EnvironmentState;

/// Spontaneous quadrupole emission figures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmissionResult {
    /// Radiated power |dE/dt|, W.
    pub power: f64,
    /// Emission rate power / (hbar omega), 1/s; 0 when omega = 0.
    pub gamma_s: f64,
    /// ln 2 / gamma_s, s; infinite when gamma_s = 0.
    pub half_life: f64,
}

/// Power radiated by a mass m oscillating with amplitude a at angular
/// frequency omega through the lowest (quadrupole) channel:
/// power = G m^2 a^4 omega^6 / c^5.
pub fn quadrupole_emission(
    m: f64,
    a: f64,
    omega: f64,
    constants: &PhysicalConstants,
) -> Result<EmissionResult> {
    constants.validate()?;
    for (name, v) in [("m", m), ("a", a), ("omega", omega)] {
        if v < 0.0 || !v.is_finite() {
            return Err(Error::Negative { name, value: v });
        }
    }
    let power = constants.g_newton * m * m * a.powi(4) * omega.powi(6) / constants.c.powi(5);
    let gamma_s = if omega > 0.0 { power / (constants.hbar * omega) } else { 0.0 };
    let half_life = if gamma_s > 0.0 { std::f64::consts::LN_2 / gamma_s } else { f64::INFINITY };
    Ok(EmissionResult { power, gamma_s, half_life })
}

/// The dipole-to-gravity substitution: charge -> sqrt(G) m, length -> a^2.
/// Returns the substituted (effective charge, effective length) pair; squaring
/// the charge and the length reproduces the m^2 a^4 dependence of the
/// quadrupole power.
pub fn em_to_gravity_substitution(
    m: f64,
    a: f64,
    constants: &PhysicalConstants,
) -> Result<(f64, f64)> {
    constants.validate()?;
    if m < 0.0 || !m.is_finite() {
        return Err(Error::Negative { name: "m", value: m });
    }
    Ok((constants.g_newton.sqrt() * m, a * a))
}

/// Two-mass slit condition G m^2 d / r^2 >= h c / d.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaymResult {
    /// G m^2 d / r^2, J.
    pub lhs: f64,
    /// h c / d, J.
    pub rhs: f64,
    pub satisfied: bool,
    /// Slit separation at equality: d_crit = (r/m) sqrt(h c / G), m.
    pub d_crit: f64,
    /// Set when d >= r, where the d << r geometry assumption fails; the
    /// numbers remain evaluable.
    pub geometry_warning: bool,
}

/// Evaluate the slit condition for masses m a distance r apart with slit
/// separation d. Uses the unreduced h, so d_crit m / r = sqrt(h c / G)
/// exceeds the Planck-mass group by sqrt(2 pi).
pub fn baym_condition(
    m: f64,
    r: f64,
    d: f64,
    constants: &PhysicalConstants,
) -> Result<BaymResult> {
    constants.validate()?;
    for (name, v) in [("m", m), ("r", r), ("d", d)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::NonPositive { name, value: v });
        }
    }
    let h = constants.h();
    let lhs = constants.g_newton * m * m * d / (r * r);
    let rhs = h * constants.c / d;
    Ok(BaymResult {
        lhs,
        rhs,
        satisfied: lhs >= rhs,
        d_crit: r / m * (h * constants.c / constants.g_newton).sqrt(),
        geometry_warning: d >= r,
    })
}

/// Variance of a linear field quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluctuationResult {
    /// Dimensionless variance in quadrature units; at least the vacuum floor
    /// Σ_k |c_k|^2.
    pub variance: f64,
}

/// Variance of Gamma = Σ_k (c_k a_k + conj(c_k) a_k†) over a product of
/// displaced thermal states: Σ_k |c_k|^2 (2 nbar_k + 1). Independent of the
/// coherent amplitudes — displacement shifts the mean, not the spread.
pub fn christoffel_fluctuation(
    coeffs: &[C64],
    env: &EnvironmentState,
) -> Result<FluctuationResult> {
    if coeffs.len() != env.len() {
        return Err(Error::LengthMismatch {
            left_name: "coefficients",
            left: coeffs.len(),
            right_name: "environment state",
            right: env.len(),
        });
    }
    let variance = coeffs
        .iter()
        .zip(env.nbars())
        .map(|(c, &nbar)| c.norm_sqr() * (2.0 * nbar + 1.0))
        .sum();
    Ok(FluctuationResult { variance })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    // Frozen from independent high-precision arithmetic on the CODATA table.
    const G_OVER_C5: f64 = 2.756_145_933_363_686_3e-53;
    const HYDROGEN_HALF_LIFE: f64 = 3.392_084_258e36;
    const SQRT_HC_OVER_G: f64 = 5.455_511_859_663_272_4e-8;

    #[test]
    fn static_mass_radiates_nothing() {
        let k = PhysicalConstants::default();
        let e = quadrupole_emission(1.0, 1.0, 0.0, &k).unwrap();
        assert_eq!(e.power, 0.0);
        assert_eq!(e.gamma_s, 0.0);
        assert!(e.half_life.is_infinite());
    }

    #[test]
    fn unit_inputs_si() {
        let k = PhysicalConstants::default();
        let e = quadrupole_emission(1.0, 1.0, 1.0, &k).unwrap();
        assert!(rel(e.power, G_OVER_C5) < 1e-14, "power {:e}", e.power);
    }

    #[test]
    fn orbiting_electron_is_stable() {
        let k = PhysicalConstants::default();
        let m_e = 9.109_383_701_5e-31;
        let bohr = 5.291_772_109_03e-11;
        let omega = 4.13e16;
        let e = quadrupole_emission(m_e, bohr, omega, &k).unwrap();
        assert!(e.half_life > 1e30, "half-life {:e}", e.half_life);
        assert!(rel(e.half_life, HYDROGEN_HALF_LIFE) < 1e-6);
    }

    #[test]
    fn emission_power_scaling() {
        let k = PhysicalConstants::default();
        let base = quadrupole_emission(2.0, 3.0, 5.0, &k).unwrap().power;
        let m2 = quadrupole_emission(4.0, 3.0, 5.0, &k).unwrap().power;
        let a2 = quadrupole_emission(2.0, 6.0, 5.0, &k).unwrap().power;
        let w2 = quadrupole_emission(2.0, 3.0, 10.0, &k).unwrap().power;
        assert!(((m2 / base).ln() / 2f64.ln() - 2.0).abs() < 1e-12);
        assert!(((a2 / base).ln() / 2f64.ln() - 4.0).abs() < 1e-12);
        assert!(((w2 / base).ln() / 2f64.ln() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn substitution_pair() {
        let k = PhysicalConstants::natural();
        let (q, len) = em_to_gravity_substitution(1.0, 3.0, &k).unwrap();
        assert_eq!(q, 1.0);
        assert_eq!(len, 9.0);
        let (q1, _) = em_to_gravity_substitution(1.0, 1.0, &k).unwrap();
        assert_eq!(q1, 1.0);
    }

    #[test]
    fn substitution_reproduces_quadrupole_mass_length_scaling() {
        let k = PhysicalConstants::default();
        // dipole template ∝ charge^2 length^2; after substitution that is
        // G m^2 a^4, the quadrupole dependence
        let template = |m: f64, a: f64| {
            let (q, len) = em_to_gravity_substitution(m, a, &k).unwrap();
            q * q * len * len
        };
        let p = |m: f64, a: f64| quadrupole_emission(m, a, 2.0, &k).unwrap().power;
        let t_ratio = template(6.0, 5.0) / template(2.0, 1.0);
        let p_ratio = p(6.0, 5.0) / p(2.0, 1.0);
        assert!(rel(t_ratio, p_ratio) < 1e-12);
    }

    #[test]
    fn slit_condition_groups() {
        let k = PhysicalConstants::default();
        // at m = sqrt(hc/G) and r = 1 the critical separation is 1 m
        let b = baym_condition(SQRT_HC_OVER_G, 1.0, 0.5, &k).unwrap();
        assert!(rel(b.d_crit, 1.0) < 1e-12, "d_crit {}", b.d_crit);
        assert!(!b.satisfied);
        // Planck mass instead: d_crit = sqrt(2 pi)
        let m_p = crate::constants::planck_scales(&k).unwrap().m_p;
        let b = baym_condition(m_p, 1.0, 0.5, &k).unwrap();
        assert!(rel(b.d_crit, (2.0 * std::f64::consts::PI).sqrt()) < 1e-12);
    }

    #[test]
    fn slit_condition_equality_at_critical_separation() {
        let k = PhysicalConstants::default();
        let (m, r) = (3.0e-7, 0.2);
        let d_crit = baym_condition(m, r, 1e-3, &k).unwrap().d_crit;
        let b = baym_condition(m, r, d_crit, &k).unwrap();
        assert!(rel(b.lhs, b.rhs) < 1e-12);
        assert!(b.satisfied);
        // monotone in d and in m
        assert!(!baym_condition(m, r, d_crit * 0.999, &k).unwrap().satisfied);
        assert!(baym_condition(m, r, d_crit * 1.001, &k).unwrap().satisfied);
        assert!(baym_condition(m * 1.001, r, d_crit, &k).unwrap().satisfied);
    }

    #[test]
    fn slit_condition_geometry_warning_and_errors() {
        let k = PhysicalConstants::default();
        assert!(baym_condition(1.0, 1.0, 2.0, &k).unwrap().geometry_warning);
        assert!(!baym_condition(1.0, 1.0, 0.1, &k).unwrap().geometry_warning);
        assert!(baym_condition(0.0, 1.0, 0.1, &k).is_err());
        assert!(baym_condition(1.0, -1.0, 0.1, &k).is_err());
    }

    #[test]
    fn d_crit_group_is_mass_and_distance_invariant() {
        let k = PhysicalConstants::default();
        for (m, r) in [(1e-9, 0.01), (2.5e-6, 3.0), (7.0e-4, 120.0)] {
            let b = baym_condition(m, r, r * 1e-4, &k).unwrap();
            assert!(rel(b.d_crit * m / r, SQRT_HC_OVER_G) < 1e-12);
        }
    }

    #[test]
    fn fluctuation_examples() {
        let env = EnvironmentState::coherent(vec![C64::new(1.3, -0.7), C64::new(0.0, 2.0)])
            .unwrap();
        let v = christoffel_fluctuation(&[C64::new(1.0, 0.0), C64::new(1.0, 0.0)], &env)
            .unwrap();
        assert_eq!(v.variance, 2.0);

        let th = EnvironmentState::thermal(1, 1.0).unwrap();
        let v = christoffel_fluctuation(&[C64::new(1.0, 0.0)], &th).unwrap();
        assert_eq!(v.variance, 3.0);

        let z = christoffel_fluctuation(&[C64::new(0.0, 0.0)], &th).unwrap();
        assert_eq!(z.variance, 0.0);

        assert!(christoffel_fluctuation(&[C64::new(1.0, 0.0)], &env).is_err());
    }

    #[test]
    fn fluctuation_additive_and_floored() {
        let env = EnvironmentState::new(
            vec![C64::new(0.5, 0.5), C64::new(-1.0, 0.0), C64::new(0.0, 0.0)],
            vec![0.3, 1.7, 0.0],
        )
        .unwrap();
        let coeffs = [C64::new(0.2, -0.4), C64::new(1.0, 1.0), C64::new(0.0, -0.9)];
        let whole = christoffel_fluctuation(&coeffs, &env).unwrap().variance;
        let floor: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        assert!(whole >= floor);
        let parts: f64 = (0..3)
            .map(|k| {
                let e = EnvironmentState::new(
                    vec![env.alphas()[k]],
                    vec![env.nbars()[k]],
                )
                .unwrap();
                christoffel_fluctuation(&coeffs[k..k + 1], &e).unwrap().variance
            })
            .sum();
        assert!(rel(whole, parts) < 1e-15);
    }

    /// Truncated-Fock expectation values as an independent route to the
    /// variance formula.
    mod fock_cross_check {
        use super::*;

        fn coherent_vec(alpha: C64, dim: usize) -> Vec<C64> {
            let mut v = vec![C64::new(0.0, 0.0); dim];
            v[0] = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
            for n in 1..dim {
                v[n] = v[n - 1] * alpha / (n as f64).sqrt();
            }
            let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            v.iter_mut().for_each(|c| *c /= norm);
            v
        }

        /// (c a + conj(c) a†) applied to psi.
        fn gamma_apply(c: C64, psi: &[C64]) -> Vec<C64> {
            let dim = psi.len();
            let mut out = vec![C64::new(0.0, 0.0); dim];
            for n in 0..dim {
                if n + 1 < dim {
                    out[n] += c * ((n + 1) as f64).sqrt() * psi[n + 1];
                }
                if n > 0 {
                    out[n] += c.conj() * (n as f64).sqrt() * psi[n - 1];
                }
            }
            out
        }

        #[test]
        fn coherent_state_variance_is_alpha_independent() {
            let c = C64::new(0.6, -0.8);
            for alpha in [C64::new(0.0, 0.0), C64::new(1.5, 0.0), C64::new(-0.7, 1.1)] {
                let psi = coherent_vec(alpha, 80);
                let gpsi = gamma_apply(c, &psi);
                let mean: C64 =
                    psi.iter().zip(&gpsi).map(|(p, g)| p.conj() * g).sum();
                let second: f64 = gpsi.iter().map(|g| g.norm_sqr()).sum();
                let var = second - mean.norm_sqr();
                assert!(
                    (var - c.norm_sqr()).abs() < 1e-10,
                    "alpha {alpha}: var {var}"
                );
            }
        }

        #[test]
        fn thermal_mixture_variance() {
            // diagonal thermal mixture: Tr[rho Gamma^2] = |c|^2 Σ p_n (2n+1)
            let nbar = 1.0;
            let c = C64::new(1.0, 0.0);
            let dim = 200;
            let mut var = 0.0;
            for n in 0..dim {
                let p_n = nbar.powi(n as i32) / (1.0 + nbar).powi(n as i32 + 1);
                let mut basis = vec![C64::new(0.0, 0.0); dim + 2];
                basis[n] = C64::new(1.0, 0.0);
                let g = gamma_apply(c, &basis);
                var += p_n * g.iter().map(|x| x.norm_sqr()).sum::<f64>();
            }
            // Tr[rho Gamma] = 0 for a diagonal state
            assert!((var - 3.0).abs() < 1e-10, "var {var}");
            let env = EnvironmentState::thermal(1, nbar).unwrap();
            let analytic = christoffel_fluctuation(&[c], &env).unwrap().variance;
            assert!((var - analytic).abs() < 1e-10);
        }
    }
}
