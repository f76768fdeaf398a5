//! Closed-form Wigner functions and quadrature tomograms for the catalog of
//! reference states.
//!
//! These analytic formulas are the oracles for every transform and solver in
//! the crate. Conventions: hbar = 1, unit-frequency free oscillation for the
//! undamped states, Wigner normalization `integral W dq dp / (2 pi) = 1`
//! (vacuum peak W(0,0) = 2), tomograms normalized in the quadrature variable
//! for every frame.
//!
//! Where widely-circulated printed variants of these formulas fail the
//! internal consistency checks (normalization, forward-map agreement), this
//! module uses the form derived from first principles instead; see
//! `docs/formula_notes.md` for the list of rejected variants and the checks
//! that reject them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{AxisGrid, PhaseSpaceGrid, ScalarField3D, WignerField};
use crate::tomography::{FrameParameters, Tomogram};

/// Reference state catalog.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateSpec {
    /// Oscillator ground state (vacuum).
    Ground,
    /// First excited oscillator state.
    #[serde(rename = "fock1")]
    FockOne,
    /// Coherent state displaced to (q0, p0).
    Coherent { q0: f64, p0: f64 },
    /// Odd superposition of two opposite coherent states.
    #[serde(rename = "oddcat")]
    OddCat { q0: f64, p0: f64 },
    /// Squeezed coherent state; `s` scales the initial variances
    /// (position variance 1/(2 s), momentum variance s/2).
    #[serde(rename = "squeezed")]
    SqueezedCoherent { q0: f64, p0: f64, s: f64 },
    /// Coherent state relaxing under zero-temperature damping at rate gamma.
    #[serde(rename = "damped")]
    DampedCoherent { q0: f64, p0: f64, gamma: f64 },
}

impl StateSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            StateSpec::OddCat { q0, p0 } => {
                if q0 * q0 + p0 * p0 <= 0.0 {
                    Err(Error::InvalidState(
                        "odd cat state undefined at zero amplitude".into(),
                    ))
                } else {
                    Ok(())
                }
            }
            StateSpec::SqueezedCoherent { s, .. } => {
                if s > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidState(format!("squeeze parameter s = {s} <= 0")))
                }
            }
            StateSpec::DampedCoherent { gamma, .. } => {
                if gamma >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidState(format!("damping gamma = {gamma} < 0")))
                }
            }
            _ => Ok(()),
        }
    }

    /// Stable key used in file metadata.
    pub fn key(&self) -> &'static str {
        match self {
            StateSpec::Ground => "ground",
            StateSpec::FockOne => "fock1",
            StateSpec::Coherent { .. } => "coherent",
            StateSpec::OddCat { .. } => "oddcat",
            StateSpec::SqueezedCoherent { .. } => "squeezed",
            StateSpec::DampedCoherent { .. } => "damped",
        }
    }

    /// Names of the formula notes (see `docs/formula_notes.md`) that apply to
    /// this state's closed forms.
    pub fn formula_notes(&self) -> &'static [&'static str] {
        match self {
            StateSpec::OddCat { .. } => &["oddcat-normalization"],
            StateSpec::SqueezedCoherent { .. } => &["squeezed-variances"],
            StateSpec::DampedCoherent { .. } => &["damped-marginal"],
            _ => &[],
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::Input(format!("time t = {t} must be finite and >= 0")));
    }
    Ok(())
}

/// Phase-space mean of a displaced state after free rotation by angle `t`
/// (unit frequency: the displacement rotates clockwise).
#[inline]
fn rotated_mean(q0: f64, p0: f64, t: f64) -> (f64, f64) {
    let (s, c) = t.sin_cos();
    (q0 * c + p0 * s, p0 * c - q0 * s)
}

/// Squeezed-state variances at time `t`:
/// sigma_q, sigma_p, sigma_pq of the (q, p) covariance matrix.
#[inline]
fn squeezed_variances(s: f64, t: f64) -> (f64, f64, f64) {
    let (sn, cs) = t.sin_cos();
    let (c2, s2) = (cs * cs, sn * sn);
    let sigma_p = 0.5 * (s * c2 + s2 / s);
    let sigma_q = 0.5 * (c2 / s + s * s2);
    let sigma_pq = 0.5 * (s - 1.0 / s) * sn * cs;
    (sigma_q, sigma_p, sigma_pq)
}

/// Normalization factor of the odd cat state,
/// `[2 (1 - exp(-(q0^2+p0^2)))]^(-1/2)`.
pub fn cat_norm(q0: f64, p0: f64) -> Result<f64> {
    let r2 = q0 * q0 + p0 * p0;
    if r2 <= 0.0 {
        return Err(Error::InvalidState(
            "odd cat normalization diverges at zero amplitude".into(),
        ));
    }
    Ok(1.0 / (2.0 * (1.0 - (-r2).exp())).sqrt())
}

/// Wigner function of a catalog state at time `t`.
///
/// Free evolution at unit frequency for the undamped states; pure amplitude
/// decay `exp(-gamma t / 2)` for the damped one.
pub fn wigner_at(state: &StateSpec, q: f64, p: f64, t: f64) -> Result<f64> {
    state.validate()?;
    check_time(t)?;
    let g2 = |dq: f64, dp: f64| 2.0 * (-dq * dq - dp * dp).exp();
    Ok(match *state {
        StateSpec::Ground => g2(q, p),
        StateSpec::FockOne => -2.0 * (1.0 - 2.0 * q * q - 2.0 * p * p) * (-q * q - p * p).exp(),
        StateSpec::Coherent { q0, p0 } => {
            let (qm, pm) = rotated_mean(q0, p0, t);
            g2(q - qm, p - pm)
        }
        StateSpec::OddCat { q0, p0 } => {
            let (qm, pm) = rotated_mean(q0, p0, t);
            let n2 = cat_norm(q0, p0)?.powi(2);
            let lobes = g2(q - qm, p - pm) + g2(q + qm, p + pm);
            let interference =
                2.0 * g2(q, p) * (2.0 * (pm * q - p * qm)).cos();
            n2 * (lobes - interference)
        }
        StateSpec::SqueezedCoherent { q0, p0, s } => {
            let (qm, pm) = rotated_mean(q0, p0, t);
            let (sq, sp, spq) = squeezed_variances(s, t);
            let (dq, dp) = (q - qm, p - pm);
            // 2 exp(-1/2 (dp, dq) m^{-1} (dp, dq)^T), det m = 1/4
            2.0 * (-2.0 * (sq * dp * dp - 2.0 * spq * dp * dq + sp * dq * dq)).exp()
        }
        StateSpec::DampedCoherent { q0, p0, gamma } => {
            let decay = (-0.5 * gamma * t).exp();
            g2(q - q0 * decay, p - p0 * decay)
        }
    })
}

#[inline]
fn gauss_pdf(x: f64, mean: f64, variance: f64) -> f64 {
    let d = x - mean;
    (-d * d / (2.0 * variance)).exp() / (2.0 * std::f64::consts::PI * variance).sqrt()
}

/// Analytic tomogram value w(x; mu, nu, delta) of a catalog state at time `t`.
///
/// A nonzero frame shift translates the distribution:
/// `w(x; mu, nu, delta) = w(x - delta; mu, nu, 0)` exactly.
pub fn marginal_at(state: &StateSpec, x: f64, frame: &FrameParameters, t: f64) -> Result<f64> {
    state.validate()?;
    frame.validate()?;
    check_time(t)?;
    let (mu, nu) = (frame.mu, frame.nu);
    let xs = x - frame.delta;
    let s2 = mu * mu + nu * nu;
    Ok(match *state {
        StateSpec::Ground => gauss_pdf(xs, 0.0, 0.5 * s2),
        StateSpec::FockOne => {
            2.0 / std::f64::consts::PI.sqrt() * s2.powf(-1.5) * xs * xs * (-xs * xs / s2).exp()
        }
        StateSpec::Coherent { q0, p0 } => {
            let (qm, pm) = rotated_mean(q0, p0, t);
            gauss_pdf(xs, mu * qm + nu * pm, 0.5 * s2)
        }
        StateSpec::OddCat { q0, p0 } => {
            let (qm, pm) = rotated_mean(q0, p0, t);
            let n2 = cat_norm(q0, p0)?.powi(2);
            let m = mu * qm + nu * pm;
            let b = mu * pm - nu * qm;
            let r2 = q0 * q0 + p0 * p0;
            let lobes = gauss_pdf(xs, m, 0.5 * s2) + gauss_pdf(xs, -m, 0.5 * s2);
            let cross = 2.0 / (std::f64::consts::PI * s2).sqrt()
                * (-r2 + (b * b - xs * xs) / s2).exp()
                * (2.0 * xs * b / s2).cos();
            n2 * (lobes - cross)
        }
        StateSpec::SqueezedCoherent { q0, p0, s } => {
            let (qm, pm) = rotated_mean(q0, p0, t);
            let (sq, sp, spq) = squeezed_variances(s, t);
            let var = mu * mu * sq + nu * nu * sp + 2.0 * mu * nu * spq;
            gauss_pdf(xs, mu * qm + nu * pm, var)
        }
        StateSpec::DampedCoherent { q0, p0, gamma } => {
            let decay = (-0.5 * gamma * t).exp();
            gauss_pdf(xs, (mu * q0 + nu * p0) * decay, 0.5 * s2)
        }
    })
}

/// Sample the Wigner function of a state on a phase-space grid.
pub fn wigner_field(state: &StateSpec, grid: &PhaseSpaceGrid, t: f64) -> Result<WignerField> {
    state.validate()?;
    check_time(t)?;
    let q = grid.q_axis.values();
    let p = grid.p_axis.values();
    let values = ndarray::Array2::from_shape_fn((grid.q_axis.n, grid.p_axis.n), |(i, j)| {
        wigner_at(state, q[i], p[j], t).expect("validated above")
    });
    Ok(WignerField { grid: *grid, values })
}

/// Sample the analytic tomogram on a full (x, mu, nu) grid.
pub fn analytic_tomogram(
    state: &StateSpec,
    x_axis: &AxisGrid,
    mu_axis: &AxisGrid,
    nu_axis: &AxisGrid,
    t: f64,
) -> Result<Tomogram> {
    state.validate()?;
    check_time(t)?;
    let xs = x_axis.values();
    let mus = mu_axis.values();
    let nus = nu_axis.values();
    let values =
        ndarray::Array3::from_shape_fn((x_axis.n, mu_axis.n, nu_axis.n), |(i, m, l)| {
            let frame = FrameParameters::new(mus[m], nus[l]);
            if frame.validate().is_err() {
                // degenerate node mu = nu = 0 cannot occur on symmetric
                // grids with even sample counts; guard anyway
                return 0.0;
            }
            marginal_at(state, xs[i], &frame, t).expect("validated above")
        });
    let field = ScalarField3D::new([*x_axis, *mu_axis, *nu_axis], values)?;
    Tomogram::full_grid(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::integrate_1d;

    const SQRT_PI: f64 = 1.7724538509055159;

    fn frame(mu: f64, nu: f64) -> FrameParameters {
        FrameParameters::new(mu, nu)
    }

    #[test]
    fn fock_one_wigner_origin() {
        for t in [0.0, 0.7, 3.1] {
            let w = wigner_at(&StateSpec::FockOne, 0.0, 0.0, t).unwrap();
            assert!((w + 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn coherent_wigner_origin_peak() {
        let w = wigner_at(&StateSpec::Coherent { q0: 0.0, p0: 0.0 }, 0.0, 0.0, 0.0).unwrap();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn odd_cat_wigner_origin_parity() {
        // odd states have W(0,0) = -2 independent of amplitude
        let w = wigner_at(&StateSpec::OddCat { q0: 2.0, p0: 0.0 }, 0.0, 0.0, 0.0).unwrap();
        assert!((w + 2.0).abs() < 1e-12, "got {w}");
        let w = wigner_at(&StateSpec::OddCat { q0: 1.1, p0: -0.7 }, 0.0, 0.0, 0.5).unwrap();
        assert!((w + 2.0).abs() < 1e-12, "got {w}");
    }

    #[test]
    fn damped_wigner_peak_moves_to_decayed_center() {
        // with exp(-gamma t / 2) = 1/2 the peak sits at q0/2
        let gamma = 0.8;
        let t = 2.0 * (2.0f64).ln() / gamma;
        let st = StateSpec::DampedCoherent { q0: 1.0, p0: 0.0, gamma };
        let w = wigner_at(&st, 0.5, 0.0, t).unwrap();
        assert!((w - 2.0).abs() < 1e-12, "got {w}");
    }

    #[test]
    fn ground_marginal_value() {
        let w = marginal_at(&StateSpec::Ground, 0.0, &frame(1.0, 0.0), 0.0).unwrap();
        assert!((w - 1.0 / SQRT_PI).abs() < 1e-12);
    }

    #[test]
    fn fock_one_marginal_values() {
        // x^2 prefactor kills the distribution at the origin
        for (mu, nu) in [(1.0, 0.0), (0.3, -0.9), (0.0, 2.0)] {
            for t in [0.0, 1.3] {
                let w = marginal_at(&StateSpec::FockOne, 0.0, &frame(mu, nu), t).unwrap();
                assert!(w.abs() < 1e-300);
            }
        }
        let w = marginal_at(&StateSpec::FockOne, 1.0, &frame(1.0, 0.0), 0.0).unwrap();
        let expect = 2.0 * (-1.0f64).exp() / SQRT_PI; // ~0.415107
        assert!((w - expect).abs() < 1e-12);
    }

    #[test]
    fn coherent_marginal_mean() {
        // first moment of the coherent tomogram at t = 0 is mu q0 + nu p0
        let st = StateSpec::Coherent { q0: 0.7, p0: -0.4 };
        let ax = AxisGrid::symmetric(12.0, 1200).unwrap();
        for (mu, nu) in [(1.0, 0.0), (0.6, 0.8), (-1.2, 0.5)] {
            let f = frame(mu, nu);
            let vals: Vec<f64> = ax
                .values()
                .iter()
                .map(|&x| x * marginal_at(&st, x, &f, 0.0).unwrap())
                .collect();
            let mean = integrate_1d(&vals, &ax).unwrap();
            assert!(
                (mean - (mu * 0.7 - nu * 0.4)).abs() < 1e-8,
                "frame ({mu},{nu}) mean {mean}"
            );
        }
    }

    #[test]
    fn cat_norm_values() {
        // large-amplitude limit 2^{-1/2}
        let n = cat_norm(40.0, 0.0).unwrap();
        assert!((n - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        // direct evaluation at q0 = 2: [2 (1 - e^{-4})]^{-1/2} = 0.7136672...
        let n = cat_norm(2.0, 0.0).unwrap();
        let expect = 1.0 / (2.0 * (1.0 - (-4.0f64).exp())).sqrt();
        assert!((n - expect).abs() < 1e-15);
        assert!((n - 0.71367).abs() < 1e-5);
        // rotation invariance
        let a = cat_norm(1.3, -0.4).unwrap();
        let b = cat_norm(-0.4, -1.3).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn cat_zero_amplitude_rejected() {
        assert!(matches!(
            marginal_at(&StateSpec::OddCat { q0: 0.0, p0: 0.0 }, 0.0, &frame(1.0, 0.0), 0.0),
            Err(Error::InvalidState(_))
        ));
        assert!(cat_norm(0.0, 0.0).is_err());
    }

    #[test]
    fn degenerate_frame_rejected() {
        assert!(matches!(
            marginal_at(&StateSpec::Ground, 0.0, &frame(0.0, 0.0), 0.0),
            Err(Error::InvalidFrame(_))
        ));
    }

    fn catalog() -> Vec<StateSpec> {
        vec![
            StateSpec::Ground,
            StateSpec::FockOne,
            StateSpec::Coherent { q0: 1.0, p0: 0.5 },
            StateSpec::OddCat { q0: 2.0, p0: 0.0 },
            StateSpec::OddCat { q0: 0.9, p0: 1.1 },
            StateSpec::SqueezedCoherent { q0: 0.5, p0: -0.5, s: 2.0 },
            StateSpec::SqueezedCoherent { q0: 0.0, p0: 0.0, s: 0.5 },
            StateSpec::DampedCoherent { q0: 1.0, p0: 0.7, gamma: 0.6 },
        ]
    }

    #[test]
    fn marginal_normalized_for_all_states_frames_times() {
        let ax = AxisGrid::symmetric(12.0, 2400).unwrap();
        let frames = [frame(1.0, 0.0), frame(0.0, 1.0), frame(0.8, -0.6), frame(1.3, 0.4)];
        for st in catalog() {
            for f in &frames {
                for t in [0.0, 0.9, 2.4] {
                    let vals: Vec<f64> = ax
                        .values()
                        .iter()
                        .map(|&x| marginal_at(&st, x, f, t).unwrap())
                        .collect();
                    let norm = integrate_1d(&vals, &ax).unwrap();
                    assert!(
                        (norm - 1.0).abs() < 1e-8,
                        "state {st:?} frame {f:?} t {t}: norm {norm}"
                    );
                }
            }
        }
    }

    #[test]
    fn marginal_everywhere_nonnegative() {
        let ax = AxisGrid::symmetric(10.0, 801).unwrap();
        let frames = [frame(1.0, 0.0), frame(0.4, 1.1), frame(-0.7, 0.2)];
        for st in catalog() {
            for f in &frames {
                for t in [0.0, 1.7] {
                    for &x in &ax.values() {
                        let w = marginal_at(&st, x, f, t).unwrap();
                        assert!(w >= -1e-14, "state {st:?} f {f:?} x {x}: {w}");
                    }
                }
            }
        }
    }

    #[test]
    fn marginal_stationary_states() {
        let ax = AxisGrid::symmetric(6.0, 101).unwrap();
        for st in [StateSpec::Ground, StateSpec::FockOne] {
            for f in [frame(1.0, 0.0), frame(0.5, -1.2)] {
                for &x in &ax.values() {
                    let w0 = marginal_at(&st, x, &f, 0.0).unwrap();
                    for t in [0.4, 1.1, 5.9] {
                        let wt = marginal_at(&st, x, &f, t).unwrap();
                        assert!((wt - w0).abs() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn marginal_shift_property_exact() {
        let st = StateSpec::Coherent { q0: 0.8, p0: 0.3 };
        let shifted = FrameParameters { mu: 0.9, nu: -0.5, delta: 1.75 };
        let plain = FrameParameters { mu: 0.9, nu: -0.5, delta: 0.0 };
        for x in [-2.0, 0.0, 0.4, 3.1] {
            let a = marginal_at(&st, x, &shifted, 0.6).unwrap();
            let b = marginal_at(&st, x - 1.75, &plain, 0.6).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn squeezed_limit_matches_coherent() {
        // s = 1 squeezed state is the coherent state
        let sq = StateSpec::SqueezedCoherent { q0: 0.6, p0: -0.2, s: 1.0 };
        let co = StateSpec::Coherent { q0: 0.6, p0: -0.2 };
        let f = frame(0.7, 0.9);
        for t in [0.0, 0.8] {
            for x in [-1.0, 0.0, 0.5, 2.2] {
                let a = marginal_at(&sq, x, &f, t).unwrap();
                let b = marginal_at(&co, x, &f, t).unwrap();
                assert!((a - b).abs() < 1e-14);
                let wa = wigner_at(&sq, x, 0.3, t).unwrap();
                let wb = wigner_at(&co, x, 0.3, t).unwrap();
                assert!((wa - wb).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(wigner_at(&StateSpec::Ground, 0.0, 0.0, -0.1).is_err());
        assert!(StateSpec::SqueezedCoherent { q0: 0.0, p0: 0.0, s: 0.0 }
            .validate()
            .is_err());
        assert!(StateSpec::DampedCoherent { q0: 0.0, p0: 0.0, gamma: -1.0 }
            .validate()
            .is_err());
    }
}
