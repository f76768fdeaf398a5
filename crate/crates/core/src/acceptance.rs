//! End-to-end check suite: one entry per release criterion, each computed at
//! pinned grids and tolerances. `qtomo selftest` prints this table; the
//! `acceptance` integration test asserts it.
//!
//! Grids are chosen per criterion (window sizes follow the support of the
//! states involved; a global `grid_scale` multiplies sample counts so the
//! suite can be stress-tested at degraded resolution).

use crate::error::Result;
use crate::evolution::{
    chapman_kolmogorov_check, driven_gaussian_marginal, evolve_characteristics, evolve_damped,
    flow_map, pde_residual, DampingSpec, EvolutionSpec, HamiltonianSpec, ResidualOptions,
};
use crate::grid::{integrate_1d, AxisGrid, PhaseSpaceGrid};
use crate::moments::{generating_function, moment, sample_generating_grid, wigner_from_generating};
use crate::sampling::sample_homodyne_data;
use crate::states::{analytic_tomogram, marginal_at, wigner_at, wigner_field, StateSpec};
use crate::tomography::{
    forward_full_grid, forward_marginal, frame_from_squeezer, homodyne_reconstruct,
    inverse_wigner, reconstruct_density, FrameParameters, Tomogram,
};

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct Check {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Suite configuration.
#[derive(Debug, Clone, Copy)]
pub struct AcceptanceConfig {
    /// Multiplies grid sample counts (1.0 = pinned defaults).
    pub grid_scale: f64,
    /// Seed for the sampled-reconstruction criterion.
    pub seed: u64,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        Self { grid_scale: 1.0, seed: 20260810 }
    }
}

pub const CRITERIA: [(usize, &str); 12] = [
    (1, "forward map matches analytic tomograms"),
    (2, "inverse Wigner roundtrip"),
    (3, "density-matrix reconstruction"),
    (4, "free-motion dispersion law"),
    (5, "stationary states under oscillator flow"),
    (6, "coherent-state rotation"),
    (7, "driven oscillator solution and residual"),
    (8, "damped oscillator relaxation"),
    (9, "propagator composition"),
    (10, "moments and generating function"),
    (11, "sampled homodyne reconstruction"),
    (12, "property suite"),
];

fn scaled(n: usize, s: f64) -> usize {
    ((n as f64 * s).round() as usize).max(8)
}

fn scaled_odd(n: usize, s: f64) -> usize {
    let m = scaled(n, s);
    if m % 2 == 0 {
        m + 1
    } else {
        m
    }
}

/// Reference states exercised by the transform criteria.
fn catalog() -> Vec<(StateSpec, f64)> {
    vec![
        (StateSpec::Ground, 0.0),
        (StateSpec::FockOne, 0.9),
        (StateSpec::Coherent { q0: 1.0, p0: 0.5 }, 0.9),
        (StateSpec::OddCat { q0: 1.5, p0: 0.0 }, 0.4),
        (StateSpec::SqueezedCoherent { q0: 0.5, p0: -0.5, s: 2.0 }, 0.7),
        (StateSpec::DampedCoherent { q0: 1.0, p0: 0.7, gamma: 0.8 }, 1.0),
    ]
}

fn test_frames() -> Vec<FrameParameters> {
    let mut frames = vec![
        FrameParameters::new(1.0, 0.0),
        FrameParameters::new(0.0, 1.0),
        FrameParameters::new(0.75, -0.4),
        FrameParameters::new(1.2, 0.8),
    ];
    for phi in [
        std::f64::consts::PI / 6.0,
        std::f64::consts::PI / 4.0,
        std::f64::consts::PI / 3.0,
        2.0 * std::f64::consts::PI / 3.0,
        5.0 * std::f64::consts::PI / 6.0,
    ] {
        frames.push(FrameParameters::new(phi.cos(), phi.sin()));
    }
    frames.push(frame_from_squeezer(0.3, std::f64::consts::PI / 3.0));
    frames.push(frame_from_squeezer(0.5, std::f64::consts::PI / 2.0));
    frames.push(frame_from_squeezer(-0.35, 2.5));
    frames
}

fn check(id: usize, passed: bool, detail: String) -> Check {
    Check { id, name: CRITERIA[id - 1].1, passed, detail }
}

fn fail_with_error(id: usize, err: &crate::error::Error) -> Check {
    check(id, false, format!("error: {err}"))
}

/* criterion 1 ***************************************************************/

fn c1_forward_oracle(cfg: &AcceptanceConfig) -> Result<Check> {
    let tol = 1e-4;
    let grid = PhaseSpaceGrid::square(8.0, scaled(256, cfg.grid_scale))?;
    let x_axis = AxisGrid::symmetric(8.0, scaled(128, cfg.grid_scale))?;
    let mut states = catalog();
    states.push((StateSpec::OddCat { q0: 2.0, p0: 0.0 }, 0.0));
    let frames = test_frames();
    let mut worst = (0.0f64, String::new());
    for (state, t1) in &states {
        for &t in &[0.0, *t1] {
            let w = wigner_field(state, &grid, t)?;
            for frame in &frames {
                let slice = forward_marginal(&w, frame, &x_axis)?;
                let mut d = 0.0f64;
                for (i, &x) in x_axis.values().iter().enumerate() {
                    let expect = marginal_at(state, x, frame, t)?;
                    d = d.max((slice.values[i] - expect).abs());
                }
                if d > worst.0 {
                    worst = (
                        d,
                        format!("{} t={t} frame=({:.3},{:.3})", state.key(), frame.mu, frame.nu),
                    );
                }
            }
        }
    }
    Ok(check(
        1,
        worst.0 <= tol,
        format!(
            "max |forward - analytic| = {:.3e} (tol {tol:.0e}; worst at {}; {} states x {} frames x 2 times)",
            worst.0,
            worst.1,
            states.len(),
            frames.len()
        ),
    ))
}

/* criterion 2 ***************************************************************/

fn roundtrip_error(
    state: &StateSpec,
    t: f64,
    x_ext: f64,
    x_n: usize,
    cfg: &AcceptanceConfig,
) -> Result<(f64, f64)> {
    let phase = PhaseSpaceGrid::square(8.0, scaled(256, cfg.grid_scale))?;
    let w = wigner_field(state, &phase, t)?;
    let x_axis = AxisGrid::symmetric(x_ext, scaled(x_n, cfg.grid_scale))?;
    let mu_axis = AxisGrid::symmetric(8.0, scaled(128, cfg.grid_scale))?;
    let tom = forward_full_grid(&w, &x_axis, &mu_axis, &mu_axis)?;
    let target = PhaseSpaceGrid::square(8.0, scaled_odd(129, cfg.grid_scale))?;
    let back = inverse_wigner(&tom, &target)?;
    let mut worst = 0.0f64;
    for (i, &q) in target.q_axis.values().iter().enumerate() {
        for (j, &p) in target.p_axis.values().iter().enumerate() {
            worst = worst.max((back.values[[i, j]] - wigner_at(state, q, p, t)?).abs());
        }
    }
    let origin = back.values[[target.q_axis.n / 2, target.p_axis.n / 2]];
    Ok((worst, origin))
}

fn c2_roundtrip(cfg: &AcceptanceConfig) -> Result<Check> {
    let tol = 1e-3;
    let mut detail = String::new();
    let mut passed = true;
    let mut fock_origin = f64::NAN;
    for (state, t) in catalog() {
        // window sized to hold the broadest rim-frame slice of each state
        // (mean up to mu_max * displacement plus ~3.5 sigma)
        let (x_ext, x_n) = match state {
            StateSpec::SqueezedCoherent { .. } | StateSpec::OddCat { .. } => (32.0, 512),
            StateSpec::Coherent { .. } | StateSpec::DampedCoherent { .. } => (28.0, 448),
            _ => (24.0, 384),
        };
        let (worst, origin) = roundtrip_error(&state, t, x_ext, x_n, cfg)?;
        if matches!(state, StateSpec::FockOne) {
            // stationary state: the t = 0.9 field equals the t = 0 one
            fock_origin = origin;
        }
        passed &= worst <= tol;
        detail.push_str(&format!("{}: {:.3e}; ", state.key(), worst));
    }
    let fock_ok = (fock_origin + 2.0).abs() <= 0.02;
    passed &= fock_ok;
    detail.push_str(&format!("fock1 W(0,0) = {fock_origin:.4} (want -2 +- 0.02); "));
    // large odd cat: reconstructed interference dip at the origin
    let (_, cat_origin) =
        roundtrip_error(&StateSpec::OddCat { q0: 2.0, p0: 0.0 }, 0.0, 32.0, 512, cfg)?;
    let cat_ok = (cat_origin + 2.0).abs() <= 0.05;
    passed &= cat_ok;
    detail.push_str(&format!("oddcat(2,0) W(0,0) = {cat_origin:.4} (want -2 +- 0.05)"));
    Ok(check(2, passed, format!("max |dW| per state (tol {tol:.0e}): {detail}")))
}

/* criterion 3 ***************************************************************/

fn c3_density(cfg: &AcceptanceConfig) -> Result<Check> {
    let s = cfg.grid_scale;
    let n_q = scaled_odd(97, s);
    let q_axis = AxisGrid::symmetric(6.0, n_q)?;
    let h_q = q_axis.spacing();
    // nu spacing must equal q spacing and cover every difference; derive it
    let nu_axis = AxisGrid::new(
        -((n_q - 1) as f64) * h_q,
        (n_q - 1) as f64 * h_q,
        2 * n_q - 1,
    )?;
    let mu_axis = AxisGrid::symmetric(8.0, scaled(64, s))?;
    // x fine enough to resolve the narrowest diagonal slice even for the
    // position-squeezed state (slice width mu_min / sqrt(2 s))
    let x_axis = AxisGrid::symmetric(40.0, scaled_odd(1281, s))?;
    let mut passed = true;
    let mut detail = String::new();
    for (state, _) in catalog() {
        let tom = analytic_tomogram(&state, &x_axis, &mu_axis, &nu_axis, 0.0)?;
        let rho = reconstruct_density(&tom, &q_axis)?;
        let trace_err = (rho.trace() - 1.0).abs();
        let herm = rho.hermiticity_error();
        let purity_err = (rho.purity() - 1.0).abs();
        let mut diag_err = 0.0f64;
        let pos_frame = FrameParameters::new(1.0, 0.0);
        for (i, &q) in q_axis.values().iter().enumerate() {
            let expect = marginal_at(&state, q, &pos_frame, 0.0)?;
            diag_err = diag_err.max((rho.values[[i, i]].re - expect).abs());
        }
        let min_eig = rho.min_eigenvalue()?;
        let ok = trace_err <= 1e-4
            && herm <= 1e-8
            && purity_err <= 1e-2
            && diag_err <= 1e-4
            && min_eig >= -1e-3;
        passed &= ok;
        detail.push_str(&format!(
            "{}: tr {:.1e} herm {:.1e} pur {:.1e} diag {:.1e} eig {:+.1e}; ",
            state.key(),
            trace_err,
            herm,
            purity_err,
            diag_err,
            min_eig
        ));
        if matches!(state, StateSpec::Ground) {
            // element-level oracle: vacuum wavefunction outer product
            let pi_sqrt = std::f64::consts::PI.sqrt();
            let mut elem = 0.0f64;
            for (i, &qi) in q_axis.values().iter().enumerate() {
                for (j, &qj) in q_axis.values().iter().enumerate() {
                    let expect = (-(qi * qi + qj * qj) / 2.0).exp() / pi_sqrt;
                    elem = elem
                        .max((rho.values[[i, j]] - num_complex::Complex64::from(expect)).norm());
                }
            }
            passed &= elem <= 1e-3;
            detail.push_str(&format!("ground elements {:.2e} (tol 1e-3); ", elem));
        }
    }
    Ok(check(3, passed, detail))
}

/* criterion 4 ***************************************************************/

fn c4_free_dispersion(cfg: &AcceptanceConfig) -> Result<Check> {
    let tol = 1e-3;
    let s = cfg.grid_scale;
    let x_axis = AxisGrid::symmetric(10.0, scaled_odd(161, s))?;
    let mu_axis = AxisGrid::symmetric(1.0, scaled_odd(33, s))?;
    let nu_axis = AxisGrid::symmetric(4.0, scaled_odd(129, s))?;
    let w0 = analytic_tomogram(&StateSpec::Ground, &x_axis, &mu_axis, &nu_axis, 0.0)?;
    let ham = HamiltonianSpec::new(0.0, 0.0)?;
    let frames = [
        (1.0, 0.0),
        (0.5, 0.25),
        (0.75, 0.5),
        (1.0, 0.5),
        (0.5, 1.0),
        (0.25, 0.75),
    ];
    let mut worst = 0.0f64;
    for t in [0.5, 1.0, 2.0] {
        let wt = evolve_characteristics(&w0, &ham, t)?;
        let (_, _, _, vals) = wt.as_full_grid()?;
        for &(mu, nu) in &frames {
            let m = ((mu - mu_axis.min) / mu_axis.spacing()).round() as usize;
            let l = ((nu - nu_axis.min) / nu_axis.spacing()).round() as usize;
            let line: Vec<f64> = (0..x_axis.n).map(|i| vals[[i, m, l]]).collect();
            let var = moment(&line, &x_axis, 2)? - moment(&line, &x_axis, 1)?.powi(2);
            let expect = 0.5 * (mu * mu * (1.0 + t * t) + nu * nu + 2.0 * mu * nu * t);
            worst = worst.max((var - expect).abs());
        }
    }
    Ok(check(
        4,
        worst <= tol,
        format!("max |var - law| = {:.3e} over 6 frames x 3 times (tol {tol:.0e})", worst),
    ))
}

/* criterion 5 ***************************************************************/

fn c5_stationarity(_cfg: &AcceptanceConfig) -> Result<Check> {
    let tol = 1e-6;
    let ham = HamiltonianSpec::new(1.0, 0.0)?;
    let xs: Vec<f64> = (-12..=12).map(|i| i as f64 * 0.5).collect();
    let frames = [(1.0, 0.0), (0.0, 1.0), (0.7, -0.7), (1.3, 0.4), (0.3, 1.8)];
    let mut worst = 0.0f64;
    for state in [StateSpec::Ground, StateSpec::FockOne] {
        for t in [0.3, 1.0, std::f64::consts::PI, 5.5, std::f64::consts::TAU] {
            let flow = flow_map(&ham, t)?;
            for &(mu, nu) in &frames {
                let (m2, n2) = flow.map_frame(mu, nu);
                let frame0 = FrameParameters::new(mu, nu);
                let frame2 = FrameParameters::new(m2, n2);
                for &x in &xs {
                    // evolving by t equals relabeling the frame through the
                    // backward flow; stationary states must be fixed points
                    let evolved = marginal_at(&state, x + flow.x_shift(mu, nu), &frame2, 0.0)?;
                    let original = marginal_at(&state, x, &frame0, 0.0)?;
                    worst = worst.max((evolved - original).abs());
                }
            }
        }
    }
    Ok(check(
        5,
        worst <= tol,
        format!("max |w(t) - w(0)| = {:.3e} for ground/fock1 over t in [0, 2 pi] (tol {tol:.0e})", worst),
    ))
}

/* criterion 6 ***************************************************************/

fn c6_coherent_rotation(cfg: &AcceptanceConfig) -> Result<Check> {
    let tol = 1e-3;
    let s = cfg.grid_scale;
    let x_axis = AxisGrid::symmetric(8.0, scaled_odd(129, s))?;
    let f_axis = AxisGrid::symmetric(4.0, scaled_odd(161, s))?;
    let st = StateSpec::Coherent { q0: 1.0, p0: 0.0 };
    let w0 = analytic_tomogram(&st, &x_axis, &f_axis, &f_axis, 0.0)?;
    let ham = HamiltonianSpec::new(1.0, 0.0)?;
    let m = ((1.0 - f_axis.min) / f_axis.spacing()).round() as usize;
    let l = ((0.0 - f_axis.min) / f_axis.spacing()).round() as usize;
    let mut worst = 0.0f64;
    for t in [0.0, std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_2, std::f64::consts::PI]
    {
        let wt = evolve_characteristics(&w0, &ham, t)?;
        let (_, _, _, vals) = wt.as_full_grid()?;
        let line: Vec<f64> = (0..x_axis.n).map(|i| vals[[i, m, l]]).collect();
        let mean = moment(&line, &x_axis, 1)?;
        worst = worst.max((mean - t.cos()).abs());
    }
    Ok(check(
        6,
        worst <= tol,
        format!("max |<x>(t) - cos t| = {:.3e} at frame (1,0) (tol {tol:.0e})", worst),
    ))
}

/* criterion 7 ***************************************************************/

fn c7_driven(cfg: &AcceptanceConfig) -> Result<Check> {
    let s = cfg.grid_scale;
    let mut passed = true;
    let mut detail = String::new();

    // (a) evolved coherent tomogram matches the closed-form driven solution
    let ham = HamiltonianSpec::new(1.0, 2.0)?;
    let x_axis = AxisGrid::symmetric(12.0, scaled_odd(193, s))?;
    let f_axis = AxisGrid::symmetric(2.0, scaled_odd(65, s))?;
    let st = StateSpec::Coherent { q0: 1.0, p0: 0.0 };
    let w0 = analytic_tomogram(&st, &x_axis, &f_axis, &f_axis, 0.0)?;
    let frames = [(1.0, 0.0), (0.0, 1.0), (0.5, 0.5), (0.75, -0.25)];
    let mut worst_match = 0.0f64;
    for t in [std::f64::consts::FRAC_PI_2, std::f64::consts::PI] {
        let wt = evolve_characteristics(&w0, &ham, t)?;
        let (_, _, _, vals) = wt.as_full_grid()?;
        for &(mu, nu) in &frames {
            let m = ((mu - f_axis.min) / f_axis.spacing()).round() as usize;
            let l = ((nu - f_axis.min) / f_axis.spacing()).round() as usize;
            let frame = FrameParameters::new(mu, nu);
            for (i, &x) in x_axis.values().iter().enumerate() {
                if x.abs() > 6.0 {
                    continue;
                }
                let expect = driven_gaussian_marginal(1.0, 0.0, &ham, x, &frame, t)?;
                worst_match = worst_match.max((vals[[i, m, l]] - expect).abs());
            }
        }
    }
    passed &= worst_match <= 1e-3;
    detail.push_str(&format!("evolved vs closed form {:.3e} (tol 1e-3); ", worst_match));

    // (b) residual of the closed-form solution under the marginal equation;
    // below unit frequency the slices thin out along the nu axis, so that
    // run uses a finer x grid on a narrower window
    for omega in [0.5, 1.0, 2.0] {
        let h = HamiltonianSpec::new(omega, 2.0)?;
        let (x_ext, x_n, f_ext, f_n, r_min, dt) = if omega < 1.0 {
            (3.0, 481, 1.8, 181, 1.0, 0.0025)
        } else {
            (8.0, 385, 2.0, 201, 1.2, 0.005)
        };
        let xa = AxisGrid::symmetric(x_ext, scaled_odd(x_n, s))?;
        let fa = AxisGrid::symmetric(f_ext, scaled_odd(f_n, s))?;
        let times = [0.6 - dt, 0.6, 0.6 + dt];
        let toms: Vec<Tomogram> = times
            .iter()
            .map(|&t| {
                let vals = ndarray::Array3::from_shape_fn((xa.n, fa.n, fa.n), |(i, m, l)| {
                    let fr = FrameParameters::new(fa.value(m), fa.value(l));
                    if fr.norm2() == 0.0 {
                        return 0.0;
                    }
                    driven_gaussian_marginal(1.0, 0.3, &h, xa.value(i), &fr, t)
                        .expect("valid frame")
                });
                Tomogram::FullGrid { x_axis: xa, mu_axis: fa, nu_axis: fa, values: vals }
            })
            .collect();
        let r = pde_residual(
            &toms,
            &times,
            &EvolutionSpec::Hamiltonian(h),
            ResidualOptions { min_frame_radius: r_min },
        )?;
        passed &= r <= 1e-3;
        detail.push_str(&format!("residual(omega={omega}) {:.3e}; ", r));
    }
    Ok(check(7, passed, detail + "(residual tol 1e-3)"))
}

/* criterion 8 ***************************************************************/

fn c8_damped(cfg: &AcceptanceConfig) -> Result<Check> {
    let s = cfg.grid_scale;
    let mut passed = true;
    let mut detail = String::new();
    let gamma = 1.0;

    // (a) mean decay at gamma t = 2 ln 2
    {
        let t = 2.0 * (2.0f64).ln();
        let xa = AxisGrid::symmetric(8.0, scaled_odd(97, s))?;
        let fa = AxisGrid::symmetric(2.5, scaled_odd(41, s))?;
        let st = StateSpec::Coherent { q0: 1.0, p0: 0.0 };
        let w0 = analytic_tomogram(&st, &xa, &fa, &fa, 0.0)?;
        let steps = (420.0 / s / s).ceil() as usize;
        let wt = evolve_damped(&w0, &DampingSpec { gamma, n_bar: 0.0 }, t, steps)?;
        let (_, _, _, vals) = wt.as_full_grid()?;
        let m = ((1.0 - fa.min) / fa.spacing()).round() as usize;
        let l = fa.n / 2;
        let line: Vec<f64> = (0..xa.n).map(|i| vals[[i, m, l]]).collect();
        let mean = moment(&line, &xa, 1)?;
        passed &= (mean - 0.5).abs() <= 1e-2;
        detail.push_str(&format!("mean at gamma t = 2 ln 2: {mean:.4} (want 0.5 +- 1e-2); "));
    }

    // (b) long-time limit is the vacuum
    {
        let t = 10.0;
        let xa = AxisGrid::symmetric(8.0, scaled_odd(97, s))?;
        let fa = AxisGrid::symmetric(1.8, scaled_odd(29, s))?;
        let st = StateSpec::Coherent { q0: 1.0, p0: 0.0 };
        let w0 = analytic_tomogram(&st, &xa, &fa, &fa, 0.0)?;
        let steps = (1500.0 / s / s).ceil() as usize;
        let wt = evolve_damped(&w0, &DampingSpec { gamma, n_bar: 0.0 }, t, steps)?;
        let vac = analytic_tomogram(&StateSpec::Ground, &xa, &fa, &fa, 0.0)?;
        let (_, _, _, a) = wt.as_full_grid()?;
        let (_, _, _, b) = vac.as_full_grid()?;
        let mut worst = 0.0f64;
        for m in 0..fa.n {
            for l in 0..fa.n {
                let r2 = fa.value(m).powi(2) + fa.value(l).powi(2);
                if !(0.25..=2.9).contains(&r2) {
                    continue;
                }
                for i in 0..xa.n {
                    worst = worst.max((a[[i, m, l]] - b[[i, m, l]]).abs());
                }
            }
        }
        passed &= worst <= 1e-2;
        detail.push_str(&format!("|w(gamma t = 10) - vacuum| = {:.3e} (tol 1e-2); ", worst));
    }

    // (c) second-order convergence of the splitting, by step halving
    {
        let t = 0.8;
        let xa = AxisGrid::symmetric(8.0, scaled_odd(97, s))?;
        let fa = AxisGrid::symmetric(1.5, scaled_odd(49, s))?;
        let st = StateSpec::Coherent { q0: 1.0, p0: 0.0 };
        let w0 = analytic_tomogram(&st, &xa, &fa, &fa, 0.0)?;
        let damping = DampingSpec { gamma, n_bar: 0.0 };
        let base = (81.0 / s / s).ceil() as usize;
        let runs: Vec<_> = [base, 2 * base, 4 * base]
            .iter()
            .map(|&n| evolve_damped(&w0, &damping, t, n))
            .collect::<Result<_>>()?;
        let diff = |a: &Tomogram, b: &Tomogram| -> f64 {
            let (_, _, _, x) = a.as_full_grid().unwrap();
            let (_, _, _, y) = b.as_full_grid().unwrap();
            x.iter().zip(y.iter()).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max)
        };
        let ratio = diff(&runs[0], &runs[1]) / diff(&runs[1], &runs[2]);
        passed &= (3.5..=4.5).contains(&ratio);
        detail.push_str(&format!("step-halving error ratio {ratio:.2} (want 4 +- 0.5)"));
    }
    Ok(check(8, passed, detail))
}

/* criterion 9 ***************************************************************/

fn c9_propagator(cfg: &AcceptanceConfig) -> Result<Check> {
    let s = cfg.grid_scale;
    let xa = AxisGrid::symmetric(8.0, scaled_odd(129, s))?;
    let fa = AxisGrid::symmetric(4.0, scaled_odd(129, s))?;
    let st = StateSpec::Coherent { q0: 1.0, p0: 0.0 };
    let w0 = analytic_tomogram(&st, &xa, &fa, &fa, 0.0)?;
    let ham = HamiltonianSpec::new(1.0, 0.0)?;
    let d = chapman_kolmogorov_check(&w0, &ham, std::f64::consts::PI, std::f64::consts::FRAC_PI_2)?;
    let mut comp = 0.0f64;
    for (omega, f, t1, t2) in [(1.0, 0.0, 0.8, 1.3), (0.5, 1.5, 0.4, 2.0), (0.0, 0.7, 0.9, 0.6)] {
        let h = HamiltonianSpec::new(omega, f)?;
        let fa1 = flow_map(&h, t1)?;
        let fb = flow_map(&h, t2)?;
        let fc = flow_map(&h, t1 + t2)?;
        for (x, mu, nu) in [(0.4, 1.0, -0.3), (-1.2, 0.3, 1.7)] {
            let [x1, m1, n1] = fa1.apply(x, mu, nu);
            let a = fb.apply(x1, m1, n1);
            let b = fc.apply(x, mu, nu);
            for k in 0..3 {
                comp = comp.max((a[k] - b[k]).abs());
            }
        }
    }
    let passed = d <= 1e-3 && comp <= 1e-12;
    Ok(check(
        9,
        passed,
        format!(
            "semigroup discrepancy (t1, t_mid) = (pi, pi/2): {:.3e} (tol 1e-3); \
             flow composition {:.3e} (tol 1e-12)",
            d, comp
        ),
    ))
}

/* criterion 10 **************************************************************/

fn c10_generating(cfg: &AcceptanceConfig) -> Result<Check> {
    let s = cfg.grid_scale;
    let mut passed = true;
    let mut detail = String::new();
    let phase = PhaseSpaceGrid::square(8.0, scaled(256, s))?;

    // normalization and the closed-form vacuum value
    let wg = wigner_field(&StateSpec::Ground, &phase, 0.0)?;
    let g0 = generating_function(&wg, 0.0, &FrameParameters::new(0.7, -1.1))?;
    let g0_err = (g0.value.re - 1.0).abs().max(g0.value.im.abs());
    passed &= g0_err <= 1e-12;
    let g1 = generating_function(&wg, 1.0, &FrameParameters::new(1.0, 0.0))?;
    let g1_err = (g1.value.re - (-0.25f64).exp()).abs().max(g1.value.im.abs());
    passed &= g1_err <= 1e-6;
    detail.push_str(&format!("G(0) err {:.1e}; G(i;1,0) err {:.1e}; ", g0_err, g1_err));

    // route agreement and Taylor-vs-moment duality
    let x_axis = AxisGrid::symmetric(12.0, scaled_odd(601, s))?;
    let mut route = 0.0f64;
    let mut duality = 0.0f64;
    for state in [StateSpec::Ground, StateSpec::Coherent { q0: 1.0, p0: 0.5 }, StateSpec::FockOne]
    {
        let w = wigner_field(&state, &phase, 0.0)?;
        for frame in [FrameParameters::new(1.0, 0.0), FrameParameters::new(0.6, 0.8)] {
            let slice: Vec<f64> = x_axis
                .values()
                .iter()
                .map(|&x| marginal_at(&state, x, &frame, 0.0))
                .collect::<Result<_>>()?;
            let m1 = moment(&slice, &x_axis, 1)?;
            let m2 = moment(&slice, &x_axis, 2)?;
            let eps = 1e-3;
            let gp = generating_function(&w, eps, &frame)?;
            let gm = generating_function(&w, -eps, &frame)?;
            let gz = generating_function(&w, 0.0, &frame)?;
            for g in [&gp, &gm, &gz] {
                if let Some(wf) = g.wf_value {
                    route = route.max((g.value - wf).norm());
                }
            }
            let d1 = ((gp.value - gm.value) / num_complex::Complex64::new(0.0, 2.0 * eps)).re;
            let d2 = (-(gp.value - 2.0 * gz.value + gm.value) / (eps * eps)).re;
            duality = duality.max((d1 - m1).abs()).max((d2 - m2).abs());
        }
    }
    passed &= route <= 1e-6 && duality <= 1e-3;
    detail.push_str(&format!(
        "route agreement {:.1e} (tol 1e-6); Taylor-moment duality {:.1e} (tol 1e-3); ",
        route, duality
    ));

    // Wigner reconstruction from lambda = 1 samples
    let g_axis = AxisGrid::symmetric(10.5, scaled(128, s))?;
    let target = PhaseSpaceGrid::square(8.0, scaled_odd(129, s))?;
    let mut recon = 0.0f64;
    let mut fock_origin = f64::NAN;
    let mut peak_cells = f64::NAN;
    for state in [StateSpec::Ground, StateSpec::FockOne, StateSpec::Coherent { q0: 1.0, p0: 0.0 }]
    {
        let w = wigner_field(&state, &phase, 0.0)?;
        let g = sample_generating_grid(&w, &g_axis, &g_axis)?;
        let back = wigner_from_generating(&g, &target)?;
        let mut worst = 0.0f64;
        for (i, &q) in target.q_axis.values().iter().enumerate() {
            for (j, &p) in target.p_axis.values().iter().enumerate() {
                worst = worst.max((back.values[[i, j]] - wigner_at(&state, q, p, 0.0)?).abs());
            }
        }
        recon = recon.max(worst);
        if matches!(state, StateSpec::FockOne) {
            fock_origin = back.values[[target.q_axis.n / 2, target.p_axis.n / 2]];
        }
        if matches!(state, StateSpec::Coherent { .. }) {
            let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
            for (i, &q) in target.q_axis.values().iter().enumerate() {
                for (j, &p) in target.p_axis.values().iter().enumerate() {
                    if back.values[[i, j]] > best.0 {
                        best = (back.values[[i, j]], q, p);
                    }
                }
            }
            peak_cells = ((best.1 - 1.0).abs().max(best.2.abs())) / target.q_axis.spacing();
        }
    }
    passed &= recon <= 1e-3 && (fock_origin + 2.0).abs() <= 1e-2 && peak_cells <= 1.0;
    detail.push_str(&format!(
        "reconstruction {:.2e} (tol 1e-3); fock1 W(0,0) {:.4}; coherent peak offset {:.2} cells",
        recon, fock_origin, peak_cells
    ));
    Ok(check(10, passed, detail))
}

/* criterion 11 **************************************************************/

fn c11_homodyne(cfg: &AcceptanceConfig) -> Result<Check> {
    let s = cfg.grid_scale;
    let n_samples = 100_000;
    let r_cutoff = 8.0;
    let q_axis = AxisGrid::symmetric(4.0, scaled_odd(65, s))?;

    let samples = sample_homodyne_data(&StateSpec::Ground, 0.0, n_samples, cfg.seed)?;
    let (rho, diag) = homodyne_reconstruct(&samples, &q_axis, r_cutoff)?;
    let psi0: Vec<f64> = q_axis
        .values()
        .iter()
        .map(|&q| std::f64::consts::PI.powf(-0.25) * (-q * q / 2.0).exp())
        .collect();
    let fidelity = rho.fidelity_with(&psi0)?;

    let samples = sample_homodyne_data(
        &StateSpec::Coherent { q0: 1.0, p0: 0.0 },
        0.0,
        n_samples,
        cfg.seed.wrapping_add(1),
    )?;
    let (rho_c, _) = homodyne_reconstruct(&samples, &q_axis, r_cutoff)?;
    let mean = rho_c.mean_position();

    let passed = fidelity >= 0.98 && (mean - 1.0).abs() <= 0.05 && !diag.low_cutoff_warning;
    Ok(check(
        11,
        passed,
        format!(
            "vacuum fidelity {fidelity:.4} (want >= 0.98); coherent <q> = {mean:.4} \
             (want 1 +- 0.05); N = {n_samples}, r_cutoff = {r_cutoff}"
        ),
    ))
}

/* criterion 12 **************************************************************/

fn c12_properties(cfg: &AcceptanceConfig) -> Result<Check> {
    let s = cfg.grid_scale;
    let mut passed = true;
    let mut detail = String::new();

    // normalization of analytic tomograms
    let x_axis = AxisGrid::symmetric(12.0, scaled_odd(1201, s))?;
    let frames = [
        FrameParameters::new(1.0, 0.0),
        FrameParameters::new(0.0, 1.0),
        FrameParameters::new(0.8, -0.6),
        FrameParameters::new(1.3, 0.4),
    ];
    let mut norm_err = 0.0f64;
    for (state, t1) in catalog() {
        for frame in &frames {
            for t in [0.0, t1] {
                let vals: Vec<f64> = x_axis
                    .values()
                    .iter()
                    .map(|&x| marginal_at(&state, x, frame, t))
                    .collect::<Result<_>>()?;
                norm_err = norm_err.max((integrate_1d(&vals, &x_axis)? - 1.0).abs());
            }
        }
    }
    passed &= norm_err <= 1e-6;
    detail.push_str(&format!("analytic normalization {:.1e} (tol 1e-6); ", norm_err));

    // normalization and positivity of an evolved tomogram
    {
        let xa = AxisGrid::symmetric(8.0, scaled_odd(129, s))?;
        let fa = AxisGrid::symmetric(4.0, scaled_odd(129, s))?;
        let st = StateSpec::Coherent { q0: 1.0, p0: 0.0 };
        let w0 = analytic_tomogram(&st, &xa, &fa, &fa, 0.0)?;
        let wt = evolve_characteristics(&w0, &HamiltonianSpec::new(1.0, 0.0)?, 0.7)?;
        let defect = wt.normalization_defect(0.5, 2.0);
        let min = wt.min_value();
        passed &= defect <= 1e-4 && min >= -1e-6;
        detail.push_str(&format!(
            "evolved normalization {:.1e} (tol 1e-4), min {:+.1e} (floor -1e-6); ",
            defect, min
        ));
    }

    // forward-map positivity for interference-heavy states
    {
        let phase = PhaseSpaceGrid::square(8.0, scaled(256, s))?;
        let xf = AxisGrid::symmetric(8.0, scaled(128, s))?;
        let mut min = f64::INFINITY;
        for state in [StateSpec::FockOne, StateSpec::OddCat { q0: 2.0, p0: 0.0 }] {
            let w = wigner_field(&state, &phase, 0.0)?;
            for frame in [FrameParameters::new(1.0, 0.0), FrameParameters::new(0.6, -0.8)] {
                min = min.min(forward_marginal(&w, &frame, &xf)?.min_value());
            }
        }
        passed &= min >= -1e-9;
        detail.push_str(&format!("forward slice min {min:+.1e} (floor -1e-9); "));
    }

    // homogeneity of degree -1 in (x, mu, nu, delta)
    {
        let mut err = 0.0f64;
        for (state, _) in catalog() {
            for lambda in [0.5, 2.0, -1.5] {
                for (x, mu, nu) in [(0.4, 1.0, -0.3), (-1.1, 0.2, 0.9)] {
                    let a = marginal_at(
                        &state,
                        lambda * x,
                        &FrameParameters::new(lambda * mu, lambda * nu),
                        0.3,
                    )?;
                    let b = marginal_at(&state, x, &FrameParameters::new(mu, nu), 0.3)?;
                    err = err.max((a * lambda.abs() - b).abs());
                }
            }
        }
        passed &= err <= 1e-8;
        detail.push_str(&format!("homogeneity {:.1e} (tol 1e-8); ", err));
    }

    // shift equivariance at grid resolution
    {
        let phase = PhaseSpaceGrid::square(8.0, scaled(256, s))?;
        let w = wigner_field(&StateSpec::Coherent { q0: 1.0, p0: 0.5 }, &phase, 0.0)?;
        let xf = AxisGrid::symmetric(8.0, scaled(128, s))?;
        let h = xf.spacing();
        let steps = 9usize;
        let base = forward_marginal(&w, &FrameParameters::new(0.9, 0.4), &xf)?;
        let shifted = forward_marginal(
            &w,
            &FrameParameters::with_delta(0.9, 0.4, steps as f64 * h),
            &xf,
        )?;
        let mut err = 0.0f64;
        for i in steps..xf.n {
            err = err.max((shifted.values[i] - base.values[i - steps]).abs());
        }
        passed &= err <= 1e-12;
        detail.push_str(&format!("delta shift {:.1e} (tol 1e-12); ", err));
    }

    // squeezer frame radius and symplectic pairing
    {
        let mut sq = 0.0f64;
        for (sv, theta) in [(0.0, 0.0), (0.4, 1.0), (-0.8, 2.7), (1.5, 0.3)] {
            let f = frame_from_squeezer(sv, theta);
            sq = sq.max((f.norm2() - (-2.0 * sv).exp()).abs());
        }
        let mut det = 0.0f64;
        for (mu, nu) in [(1.0, 0.0), (0.3, -1.9), (2.4, 0.7)] {
            let pair = crate::tomography::conjugate_frame(&FrameParameters::new(mu, nu))?;
            det = det.max(pair.symplectic_defect().abs());
        }
        passed &= sq <= 1e-12 && det <= 1e-12;
        detail.push_str(&format!(
            "squeezer radius {:.1e}, symplectic defect {:.1e} (tol 1e-12)",
            sq, det
        ));
    }

    Ok(check(12, passed, detail))
}

/* runner ********************************************************************/

/// Run the selected criteria (all 12 when `ids` is `None`); errors inside a
/// criterion mark it failed rather than aborting the suite.
pub fn run(cfg: &AcceptanceConfig, ids: Option<&[usize]>) -> Vec<Check> {
    let fns: [(usize, fn(&AcceptanceConfig) -> Result<Check>); 12] = [
        (1, c1_forward_oracle),
        (2, c2_roundtrip),
        (3, c3_density),
        (4, c4_free_dispersion),
        (5, c5_stationarity),
        (6, c6_coherent_rotation),
        (7, c7_driven),
        (8, c8_damped),
        (9, c9_propagator),
        (10, c10_generating),
        (11, c11_homodyne),
        (12, c12_properties),
    ];
    fns.iter()
        .filter(|(id, _)| ids.map_or(true, |sel| sel.contains(id)))
        .map(|(id, f)| f(cfg).unwrap_or_else(|e| fail_with_error(*id, &e)))
        .collect()
}
