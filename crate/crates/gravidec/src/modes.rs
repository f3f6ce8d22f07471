//! Discretization of the bosonic environment: spectral density, quadrature
//! mode grids, and per-mode environment states.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Power-law spectral data for the environment:
/// coupling g(omega) = prefactor * omega^exponent on (0, Omega], and
/// density of states rho(k) = k^dos_exponent.
///
/// Grids are built in units where the dispersion is omega = k, so mode
/// integrals ∫ dk rho(k) f(omega(k)) become ∫ domega omega^dos_exponent
/// f(omega); physical factors of the wave speed are absorbed into
/// `prefactor`, which is legitimate because only coupling ratios enter the
/// visibility and rate results.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDensity {
    /// Coupling amplitude scale (rad/s at omega = 1 rad/s).
    pub prefactor: f64,
    /// Power of omega in the coupling; 3/2 for quadrupole weak-field coupling.
    pub exponent: f64,
    /// Upper angular-frequency cutoff Omega, rad/s.
    pub cutoff: f64,
    /// Power of k in the density of states; 2 for a three-dimensional field.
    pub dos_exponent: f64,
}

pub const DEFAULT_COUPLING_EXPONENT: f64 = 1.5;
pub const DEFAULT_DOS_EXPONENT: f64 = 2.0;

impl SpectralDensity {
    pub fn new(prefactor: f64, exponent: f64, cutoff: f64, dos_exponent: f64) -> Result<Self> {
        if !(cutoff > 0.0) || !cutoff.is_finite() {
            return Err(Error::NonPositive { name: "cutoff", value: cutoff });
        }
        if prefactor < 0.0 || !prefactor.is_finite() {
            return Err(Error::Negative { name: "prefactor", value: prefactor });
        }
        Ok(Self { prefactor, exponent, cutoff, dos_exponent })
    }

    /// Power-law defaults: g ∝ omega^(3/2), rho ∝ k^2.
    pub fn with_defaults(prefactor: f64, cutoff: f64) -> Result<Self> {
        Self::new(prefactor, DEFAULT_COUPLING_EXPONENT, cutoff, DEFAULT_DOS_EXPONENT)
    }

    /// Coupling strength at angular frequency `omega`, rad/s.
    pub fn coupling(&self, omega: f64) -> f64 {
        self.prefactor * omega.powf(self.exponent)
    }

    /// Density of states at k = omega (unit wave speed).
    pub fn dos(&self, omega: f64) -> f64 {
        omega.powf(self.dos_exponent)
    }
}

/// One discretized environment mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    /// Angular frequency, rad/s.
    pub omega: f64,
    /// Coupling strength, rad/s (so g/omega is the dimensionless kick scale).
    pub g: f64,
    /// Quadrature measure weight dk rho(k) carried by this node.
    pub weight: f64,
}

/// Ordered quadrature grid over the environment spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeGrid {
    modes: Vec<Mode>,
}

impl ModeGrid {
    /// Build from explicit modes; frequencies must be strictly increasing.
    pub fn from_modes(modes: Vec<Mode>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::Empty("mode grid"));
        }
        for m in &modes {
            if !(m.omega > 0.0) || !m.omega.is_finite() {
                return Err(Error::NonPositive { name: "mode omega", value: m.omega });
            }
            if m.weight < 0.0 || !m.weight.is_finite() {
                return Err(Error::Negative { name: "mode weight", value: m.weight });
            }
        }
        if modes.windows(2).any(|w| w[1].omega <= w[0].omega) {
            return Err(Error::NotIncreasing("mode frequencies"));
        }
        Ok(Self { modes })
    }

    /// A single mode of unit weight, for closed-form comparisons.
    pub fn single(omega: f64, g: f64) -> Result<Self> {
        Self::from_modes(vec![Mode { omega, g, weight: 1.0 }])
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Quadrature sum Σ_k weight_k f(omega_k), approximating
    /// ∫ dk rho(k) f(omega(k)) over the grid's spectral support.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.modes.iter().map(|m| m.weight * f(m.omega)).sum()
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Asymptotic initial guess for the i-th root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            if n == 1 {
                p1 = x;
            }
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(x), p0 = P_{n-1}(x)
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n == 1 {
        nodes[0] = 0.0;
        weights[0] = 2.0;
    }
    (nodes, weights)
}

/// Discretize the spectrum on (0, Omega] with an `n_modes`-point
/// Gauss–Legendre rule; couplings are filled from the spectral density and
/// node weights carry the dk rho(k) measure.
pub fn build_mode_grid(sd: &SpectralDensity, n_modes: usize) -> Result<ModeGrid> {
    if n_modes == 0 {
        return Err(Error::NonPositive { name: "n_modes", value: 0.0 });
    }
    let (nodes, weights) = gauss_legendre(n_modes);
    let half = 0.5 * sd.cutoff;
    let modes = nodes
        .iter()
        .zip(&weights)
        .map(|(&x, &w)| {
            let omega = half * (x + 1.0);
            Mode { omega, g: sd.coupling(omega), weight: half * w * sd.dos(omega) }
        })
        .collect();
    ModeGrid::from_modes(modes)
}

/// Per-mode initial environment state: a coherent amplitude and a thermal
/// occupation around it.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentState {
    alphas: Vec<C64>,
    nbars: Vec<f64>,
}

impl EnvironmentState {
    pub fn new(alphas: Vec<C64>, nbars: Vec<f64>) -> Result<Self> {
        if alphas.len() != nbars.len() {
            return Err(Error::LengthMismatch {
                left_name: "alphas",
                left: alphas.len(),
                right_name: "nbars",
                right: nbars.len(),
            });
        }
        if alphas.is_empty() {
            return Err(Error::Empty("environment state"));
        }
        for a in &alphas {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::NonFinite { name: "alpha", value: a.norm() });
            }
        }
        for &n in &nbars {
            if n < 0.0 || !n.is_finite() {
                return Err(Error::Negative { name: "nbar", value: n });
            }
        }
        Ok(Self { alphas, nbars })
    }

    /// All modes in vacuum.
    pub fn vacuum(n_modes: usize) -> Result<Self> {
        Self::new(vec![C64::new(0.0, 0.0); n_modes], vec![0.0; n_modes])
    }

    /// Coherent amplitudes, no thermal occupation.
    pub fn coherent(alphas: Vec<C64>) -> Result<Self> {
        let n = alphas.len();
        Self::new(alphas, vec![0.0; n])
    }

    /// Uniform thermal occupation on every mode, zero amplitude.
    pub fn thermal(n_modes: usize, nbar: f64) -> Result<Self> {
        Self::new(vec![C64::new(0.0, 0.0); n_modes], vec![nbar; n_modes])
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn alphas(&self) -> &[C64] {
        &self.alphas
    }

    pub fn nbars(&self) -> &[f64] {
        &self.nbars
    }

    pub fn matches_grid(&self, grid: &ModeGrid) -> Result<()> {
        if self.len() != grid.len() {
            return Err(Error::LengthMismatch {
                left_name: "environment state",
                left: self.len(),
                right_name: "mode grid",
                right: grid.len(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn single_node_is_midpoint() {
        let sd = SpectralDensity::new(1.0, 0.0, 2.0, 0.0).unwrap();
        let grid = build_mode_grid(&sd, 1).unwrap();
        assert_eq!(grid.len(), 1);
        assert!(rel(grid.modes()[0].omega, 1.0) < 1e-15);
        assert!(rel(grid.modes()[0].weight, 2.0) < 1e-15);
    }

    #[test]
    fn zero_modes_rejected() {
        let sd = SpectralDensity::with_defaults(1.0, 1.0).unwrap();
        assert!(build_mode_grid(&sd, 0).is_err());
    }

    #[test]
    fn constant_integrand_flat_dos() {
        // ∫_0^Omega dk of 1 with rho = 1 -> Omega
        let omega_c = 3.7;
        let sd = SpectralDensity::new(1.0, 1.5, omega_c, 0.0).unwrap();
        let grid = build_mode_grid(&sd, 64).unwrap();
        assert!(rel(grid.integrate(|_| 1.0), omega_c) < 1e-10);
    }

    #[test]
    fn quadrature_converges_on_refinement() {
        let sd = SpectralDensity::with_defaults(1.0, 5.0).unwrap();
        let f = |w: f64| (-(w / 2.0)).exp() * (1.5 * w).sin().powi(2);
        let coarse = build_mode_grid(&sd, 64).unwrap().integrate(f);
        let fine = build_mode_grid(&sd, 128).unwrap().integrate(f);
        assert!(rel(coarse, fine) < 1e-8, "coarse {coarse} fine {fine}");
    }

    #[test]
    fn polynomials_integrated_exactly() {
        // An n-point rule is exact through degree 2n-1; with rho = k^2 the
        // effective integrand degree is poly degree + 2.
        let omega_c = 2.0;
        let sd = SpectralDensity::new(0.0, 0.0, omega_c, 2.0).unwrap();
        let grid = build_mode_grid(&sd, 8).unwrap();
        for p in 0..=13u32 {
            let got = grid.integrate(|w| w.powi(p as i32));
            let exact = omega_c.powi(p as i32 + 3) / (p as f64 + 3.0);
            assert!(rel(got, exact) < 1e-12, "degree {p}: {got} vs {exact}");
        }
    }

    #[test]
    fn grid_frequencies_increasing() {
        let sd = SpectralDensity::with_defaults(0.3, 10.0).unwrap();
        let grid = build_mode_grid(&sd, 33).unwrap();
        assert!(grid.modes().windows(2).all(|w| w[1].omega > w[0].omega));
        assert!(grid.modes().iter().all(|m| m.omega > 0.0 && m.omega <= sd.cutoff));
    }

    #[test]
    fn environment_validation() {
        assert!(EnvironmentState::vacuum(3).is_ok());
        assert!(EnvironmentState::new(vec![C64::new(1.0, 0.0)], vec![-0.1]).is_err());
        assert!(EnvironmentState::new(vec![C64::new(1.0, 0.0)], vec![0.1, 0.2]).is_err());
        assert!(EnvironmentState::new(vec![], vec![]).is_err());
        let env = EnvironmentState::vacuum(2).unwrap();
        let sd = SpectralDensity::with_defaults(1.0, 1.0).unwrap();
        let grid = build_mode_grid(&sd, 3).unwrap();
        assert!(env.matches_grid(&grid).is_err());
    }
}
