//! Exact per-mode coherent-state displacement dynamics under
//! branch-conditioned coupling, pulse sequences, and the Glauber overlap.
//!
//! A mode of frequency omega driven with coupling g(t) picks up the
//! dimensionless coherent-state shift
//!
//! ```text
//! delta_alpha(T) = g * ∫_0^T e^{i omega t} dt       (constant g)
//!                = -i (g/omega) (e^{i omega T} - 1)
//! ```
//!
//! and piecewise-constant couplings add segment integrals in the same phase
//! convention. Sign flips of the coupling at pulse times model the spin-echo
//! branch swap.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::profile::CouplingProfile;

/// Dimensionless coherent-state shift of one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Displacement {
    pub value: C64,
}

impl Displacement {
    pub fn new(value: C64) -> Result<Self> {
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::NonFinite { name: "displacement", value: value.norm() });
        }
        Ok(Self { value })
    }

    pub fn magnitude(&self) -> f64 {
        self.value.norm()
    }

    pub fn magnitude_sq(&self) -> f64 {
        self.value.norm_sqr()
    }
}

/// Branch-swap pulse times inside an evolution of length `total_time`.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    swap_times: Vec<f64>,
    total_time: f64,
}

impl PulseSequence {
    /// `swap_times` must satisfy 0 < t_1 < ... < t_n < total_time.
    pub fn new(swap_times: Vec<f64>, total_time: f64) -> Result<Self> {
        if !(total_time > 0.0) || !total_time.is_finite() {
            return Err(Error::NonPositive { name: "total_time", value: total_time });
        }
        let ok = swap_times.iter().all(|&t| t > 0.0 && t < total_time)
            && swap_times.windows(2).all(|w| w[1] > w[0]);
        if !ok {
            return Err(Error::BadPulseSequence { total_time });
        }
        Ok(Self { swap_times, total_time })
    }

    /// No pulses: free evolution of length `total_time`.
    pub fn free(total_time: f64) -> Result<Self> {
        Self::new(Vec::new(), total_time)
    }

    /// Single swap at the midpoint.
    pub fn echo(total_time: f64) -> Result<Self> {
        Self::new(vec![0.5 * total_time], total_time)
    }

    pub fn swap_times(&self) -> &[f64] {
        &self.swap_times
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }
}

/// Below this phase increment the segment integral switches to its Taylor
/// form to avoid cancellation in (e^{i x} - 1)/x.
const SERIES_PHASE_THRESHOLD: f64 = 1e-8;

/// ∫_a^{a+dt} e^{i omega t} dt, with a second-order series fallback for
/// |omega dt| below the cancellation threshold (exact at omega = 0).
fn phase_integral(omega: f64, a: f64, dt: f64) -> C64 {
    debug_assert!(dt >= 0.0);
    let x = omega * dt;
    let base = if x.abs() < SERIES_PHASE_THRESHOLD {
        // dt (1 + i x/2 - x^2/6), the expansion of (e^{ix}-1)/(i omega)
        C64::new(dt * (1.0 - x * x / 6.0), dt * x / 2.0)
    } else {
        C64::new(0.0, -1.0 / omega) * (C64::cis(x) - 1.0)
    };
    C64::cis(omega * a) * base
}

/// Shift from constant coupling g over [0, T]:
/// delta_alpha = -i (g/omega) (e^{i omega T} - 1).
pub fn displacement_free(g: f64, omega: f64, total_time: f64) -> Result<Displacement> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::NonPositive { name: "omega", value: omega });
    }
    if total_time < 0.0 || !total_time.is_finite() {
        return Err(Error::Negative { name: "total_time", value: total_time });
    }
    Displacement::new(phase_integral(omega, 0.0, total_time) * g)
}

/// Shift from constant coupling whose sign flips at each pulse time:
/// delta_alpha = g Σ_j s_j ∫_{t_j}^{t_{j+1}} e^{i omega t} dt with
/// s_j = +1, -1, +1, ...
pub fn displacement_sequenced(g: f64, omega: f64, seq: &PulseSequence) -> Result<Displacement> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::NonPositive { name: "omega", value: omega });
    }
    let mut acc = C64::new(0.0, 0.0);
    let mut sign = 1.0;
    let mut t_prev = 0.0;
    for &t in seq.swap_times() {
        acc += phase_integral(omega, t_prev, t - t_prev) * (sign * g);
        sign = -sign;
        t_prev = t;
    }
    acc += phase_integral(omega, t_prev, seq.total_time() - t_prev) * (sign * g);
    Displacement::new(acc)
}

/// Shift accumulated by time `t` under a piecewise-constant coupling profile:
/// delta_alpha(t) = Σ_segments g_seg ∫ e^{i omega tau} d tau over the portion
/// of each segment before t.
pub fn displacement_profile(
    profile: &CouplingProfile,
    omega: f64,
    t: f64,
) -> Result<Displacement> {
    if omega < 0.0 || !omega.is_finite() {
        return Err(Error::Negative { name: "omega", value: omega });
    }
    if t < 0.0 || t > profile.total_time() {
        return Err(Error::OutsideCoverage { t, t_end: profile.total_time() });
    }
    let mut acc = C64::new(0.0, 0.0);
    for s in profile.segments() {
        if s.t_start >= t {
            break;
        }
        let end = s.t_end.min(t);
        acc += phase_integral(omega, s.t_start, end - s.t_start) * s.g;
    }
    Displacement::new(acc)
}

/// Glauber inner product of two coherent states:
/// ⟨beta|gamma⟩ = exp(-|beta|²/2 - |gamma|²/2 + conj(beta) gamma),
/// whose magnitude is exp(-|beta - gamma|²/2).
pub fn overlap(beta: C64, gamma: C64) -> C64 {
    let exponent =
        C64::new(-0.5 * beta.norm_sqr() - 0.5 * gamma.norm_sqr(), 0.0) + beta.conj() * gamma;
    exponent.exp()
}

/// Interleave a branch pair at each pulse time: after every swap the two
/// branches exchange coupling profiles. Returns effective profiles covering
/// [0, seq.total_time()].
pub fn interleave_profiles(
    p1: &CouplingProfile,
    p2: &CouplingProfile,
    seq: &PulseSequence,
) -> Result<(CouplingProfile, CouplingProfile)> {
    let t_total = seq.total_time();
    if p1.total_time() < t_total || p2.total_time() < t_total {
        return Err(Error::OutsideCoverage {
            t: t_total,
            t_end: p1.total_time().min(p2.total_time()),
        });
    }
    // Merged cut points: both profiles' breakpoints plus the swap times.
    let mut cuts: Vec<f64> = p1
        .breakpoints()
        .into_iter()
        .chain(p2.breakpoints())
        .chain(seq.swap_times().iter().copied())
        .filter(|&t| t > 0.0 && t < t_total)
        .collect();
    cuts.push(t_total);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();

    let mut segs1 = Vec::new();
    let mut segs2 = Vec::new();
    let mut t_prev = 0.0;
    let mut swapped = false;
    let mut swap_iter = seq.swap_times().iter().peekable();
    for &t in &cuts {
        while let Some(&&ts) = swap_iter.peek() {
            if ts <= t_prev {
                swapped = !swapped;
                swap_iter.next();
            } else {
                break;
            }
        }
        let mid = 0.5 * (t_prev + t);
        let (ga, gb) = (p1.coupling_at(mid)?, p2.coupling_at(mid)?);
        let (g1, g2) = if swapped { (gb, ga) } else { (ga, gb) };
        segs1.push(crate::profile::Segment { t_start: t_prev, t_end: t, g: g1 });
        segs2.push(crate::profile::Segment { t_start: t_prev, t_end: t, g: g2 });
        t_prev = t;
    }
    Ok((CouplingProfile::new(segs1)?, CouplingProfile::new(segs2)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    /// Simpson-rule quadrature of g ∫_0^T e^{i omega t} dt, the independent
    /// reference for the closed-form displacement.
    fn quadrature_displacement(g: f64, omega: f64, t0: f64, t1: f64, n: usize) -> C64 {
        let n = if n % 2 == 0 { n } else { n + 1 };
        let h = (t1 - t0) / n as f64;
        let f = |t: f64| C64::cis(omega * t);
        let mut acc = f(t0) + f(t1);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += f(t0 + k as f64 * h) * w;
        }
        acc * (g * h / 3.0)
    }

    #[test]
    fn free_full_revival() {
        let d = displacement_free(1.0, 1.0, 2.0 * PI).unwrap();
        assert!(d.magnitude() < 1e-15);
    }

    #[test]
    fn free_half_period() {
        let d = displacement_free(1.0, 1.0, PI).unwrap();
        assert!(close(d.value, C64::new(0.0, 2.0), 1e-15));
        let q = quadrature_displacement(1.0, 1.0, 0.0, PI, 4000);
        assert!(close(d.value, q, 1e-10));
    }

    #[test]
    fn free_short_time_leading_order() {
        let t = 1e-6;
        let d = displacement_free(1.0, 1.0, t).unwrap();
        // leading terms of -i(e^{iT}-1): T + i T^2/2
        assert!(close(d.value, C64::new(t, t * t / 2.0), 1e-18));
        assert!((d.magnitude() - t).abs() < 1e-12 * t);
        let q = quadrature_displacement(1.0, 1.0, 0.0, t, 200);
        assert!(close(d.value, q, 1e-18));
    }

    #[test]
    fn free_zero_frequency_rejected() {
        assert!(displacement_free(1.0, 0.0, 1.0).is_err());
        assert!(displacement_free(1.0, -1.0, 1.0).is_err());
        assert!(displacement_free(1.0, 1.0, -0.5).is_err());
    }

    #[test]
    fn sequenced_no_swaps_equals_free() {
        let seq = PulseSequence::free(1.7).unwrap();
        let a = displacement_sequenced(0.8, 2.3, &seq).unwrap();
        let b = displacement_free(0.8, 2.3, 1.7).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn echo_swap_at_half_period() {
        let seq = PulseSequence::echo(2.0 * PI).unwrap();
        let d = displacement_sequenced(1.0, 1.0, &seq).unwrap();
        assert!((d.magnitude() - 4.0).abs() < 1e-14);
        // piecewise Simpson cross-check
        let q = quadrature_displacement(1.0, 1.0, 0.0, PI, 4000)
            - quadrature_displacement(1.0, 1.0, PI, 2.0 * PI, 4000);
        assert!(close(d.value, q, 1e-9));
    }

    #[test]
    fn echo_kernel_identity_random_draws() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let g: f64 = rng.gen_range(0.2..2.0);
            let omega: f64 = rng.gen_range(0.3..4.0);
            let t: f64 = rng.gen_range(0.5..8.0);
            let seq = PulseSequence::echo(t).unwrap();
            let d = displacement_sequenced(g, omega, &seq).unwrap();
            let expect = 16.0 * (g / omega).powi(2) * (omega * t / 4.0).sin().powi(4);
            if expect > 1e-6 {
                assert!(
                    (d.magnitude_sq() - expect).abs() <= 1e-9 * expect,
                    "g={g} omega={omega} t={t}"
                );
            }
        }
    }

    #[test]
    fn invalid_pulse_sequences() {
        assert!(PulseSequence::new(vec![0.0], 1.0).is_err());
        assert!(PulseSequence::new(vec![1.0], 1.0).is_err());
        assert!(PulseSequence::new(vec![0.6, 0.4], 1.0).is_err());
        assert!(PulseSequence::new(vec![0.4, 0.6], 1.0).is_ok());
        assert!(PulseSequence::new(vec![], 0.0).is_err());
    }

    #[test]
    fn profile_zero_coupling() {
        let p = CouplingProfile::zero(3.0).unwrap();
        let d = displacement_profile(&p, 1.3, 2.0).unwrap();
        assert_eq!(d.value, C64::new(0.0, 0.0));
    }

    #[test]
    fn profile_single_segment_equals_free() {
        let p = CouplingProfile::constant(0.7, 2.5).unwrap();
        let a = displacement_profile(&p, 1.9, 2.5).unwrap();
        let b = displacement_free(0.7, 1.9, 2.5).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn sequential_branches_coincide_at_commensurate_time() {
        // branch 1 couples on [0, T/2], branch 2 on [T/2, T]; at omega T = 4 pi
        // the second integral equals the first (e^{i omega T/2} = 1).
        let t_total = 4.0 * PI;
        let p1 = CouplingProfile::from_breakpoints(&[0.0, t_total / 2.0, t_total], &[1.0, 0.0])
            .unwrap();
        let p2 = CouplingProfile::from_breakpoints(&[0.0, t_total / 2.0, t_total], &[0.0, 1.0])
            .unwrap();
        let d1 = displacement_profile(&p1, 1.0, t_total).unwrap();
        let d2 = displacement_profile(&p2, 1.0, t_total).unwrap();
        assert!(close(d1.value, d2.value, 1e-13));
        let q = quadrature_displacement(1.0, 1.0, 0.0, t_total / 2.0, 4000);
        assert!(close(d1.value, q, 1e-9));
    }

    #[test]
    fn profile_outside_coverage() {
        let p = CouplingProfile::constant(1.0, 1.0).unwrap();
        assert!(displacement_profile(&p, 1.0, 1.5).is_err());
    }

    #[test]
    fn overlap_examples() {
        let one = overlap(C64::new(0.3, -0.4), C64::new(0.3, -0.4));
        assert!(close(one, C64::new(1.0, 0.0), 1e-15));
        let v = overlap(C64::new(0.0, 0.0), C64::new(0.0, 2.0));
        assert!((v.norm() - (-2.0_f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn interleave_echo_symmetric() {
        let t = 2.0;
        let p1 = CouplingProfile::constant(1.0, t).unwrap();
        let p2 = CouplingProfile::constant(-1.0, t).unwrap();
        let seq = PulseSequence::echo(t).unwrap();
        let (e1, e2) = interleave_profiles(&p1, &p2, &seq).unwrap();
        assert_eq!(e1.coupling_at(0.25).unwrap(), 1.0);
        assert_eq!(e1.coupling_at(1.25).unwrap(), -1.0);
        assert_eq!(e2.coupling_at(0.25).unwrap(), -1.0);
        assert_eq!(e2.coupling_at(1.25).unwrap(), 1.0);
        // sequenced path and interleaved-profile path agree
        let omega = 1.7;
        let a = displacement_sequenced(1.0, omega, &seq).unwrap();
        let b = displacement_profile(&e1, omega, t).unwrap();
        assert!(close(a.value, b.value, 1e-15));
    }

    proptest! {
        #[test]
        fn overlap_magnitude_identity(
            br in -3.0..3.0f64, bi in -3.0..3.0f64,
            gr in -3.0..3.0f64, gi in -3.0..3.0f64,
        ) {
            let beta = C64::new(br, bi);
            let gamma = C64::new(gr, gi);
            let v = overlap(beta, gamma);
            let expect = (-0.5 * (beta - gamma).norm_sqr()).exp();
            prop_assert!((v.norm() - expect).abs() < 1e-12);
            prop_assert!(v.norm() <= 1.0 + 1e-15);
        }

        #[test]
        fn overlap_center_independence(
            ar in -2.0..2.0f64, ai in -2.0..2.0f64,
            d1r in -1.0..1.0f64, d1i in -1.0..1.0f64,
            d2r in -1.0..1.0f64, d2i in -1.0..1.0f64,
        ) {
            let alpha = C64::new(ar, ai);
            let d1 = C64::new(d1r, d1i);
            let d2 = C64::new(d2r, d2i);
            let shifted = overlap(alpha + d1, alpha + d2).norm();
            let centered = overlap(d1, d2).norm();
            prop_assert!((shifted - centered).abs() < 1e-12);
        }

        #[test]
        fn symmetric_split_overlap(
            ar in -2.0..2.0f64, ai in -2.0..2.0f64,
            dr in -1.5..1.5f64, di in -1.5..1.5f64,
        ) {
            let alpha = C64::new(ar, ai);
            let d = C64::new(dr, di);
            let v = overlap(alpha + d, alpha - d).norm();
            let expect = (-2.0 * d.norm_sqr()).exp();
            prop_assert!((v - expect).abs() < 1e-12);
        }

        #[test]
        fn free_magnitude_closed_form(
            g in 0.05..3.0f64, omega in 0.05..5.0f64, t in 0.0..10.0f64,
        ) {
            let d = displacement_free(g, omega, t).unwrap();
            let expect = 2.0 * (g / omega) * (omega * t / 2.0).sin().abs();
            prop_assert!((d.magnitude() - expect).abs() < 1e-12 * (1.0 + expect));
        }

        #[test]
        fn concatenation_of_segments(
            g in 0.1..2.0f64, omega in 0.1..4.0f64,
            t_split in 0.1..2.0f64, t_rest in 0.1..2.0f64,
        ) {
            // displacement over [0, T] = displacement over [0, t] plus the
            // phase-integrated displacement over [t, T]
            let t_total = t_split + t_rest;
            let p = CouplingProfile::constant(g, t_total).unwrap();
            let whole = displacement_profile(&p, omega, t_total).unwrap().value;
            let first = displacement_profile(&p, omega, t_split).unwrap().value;
            let second = phase_integral(omega, t_split, t_rest) * g;
            prop_assert!((whole - (first + second)).norm() < 1e-13);
        }

        #[test]
        fn sequenced_equals_interleaved_profiles(
            g in 0.1..2.0f64, omega in 0.1..4.0f64,
            f1 in 0.1..0.45f64, f2 in 0.55..0.9f64, t in 0.5..6.0f64,
        ) {
            let seq = PulseSequence::new(vec![f1 * t, f2 * t], t).unwrap();
            let a = displacement_sequenced(g, omega, &seq).unwrap().value;
            let p1 = CouplingProfile::constant(g, t).unwrap();
            let p2 = CouplingProfile::constant(-g, t).unwrap();
            let (e1, _) = interleave_profiles(&p1, &p2, &seq).unwrap();
            let b = displacement_profile(&e1, omega, t).unwrap().value;
            prop_assert!((a - b).norm() < 1e-12);
        }
    }
}
