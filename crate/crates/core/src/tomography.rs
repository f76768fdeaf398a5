//! Invertible maps between Wigner fields, quadrature tomograms and density
//! matrices, plus frame-parameter utilities.
//!
//! The quadrature in frame (mu, nu, delta) is `X = mu q + nu p + delta`; the
//! tomogram w(x, mu, nu) is its probability density with the shift split off
//! (`w(X; mu, nu, delta) = w(X - delta; mu, nu)`). The forward map is the
//! Fourier-slice identity
//!
//! ```text
//! w(x, mu, nu) = integral dk exp(-i k x) W_F(k mu, k nu)
//! ```
//!
//! with `W_F = fourier_2d(W, +1)`; the inverse map evaluates
//! `W(q, p) = (2 pi)^2 z^2 w_F(z, -z q, -z p)` at the z = 1 Fourier slice of
//! the tomogram. Density-matrix reconstruction and the sampled homodyne
//! estimator are documented in `docs/derivations.md`.

use ndarray::{Array2, Array3};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{dft_eval_2d, fourier_2d_real, AxisTransform};
use crate::grid::{
    integrate_1d, AxisGrid, ComplexField2D, PhaseSpaceGrid, ScalarField2D, ScalarField3D,
    WignerField,
};
use crate::linalg::eigvalsh;

const TAU: f64 = std::f64::consts::TAU;

/// Decay threshold for the Fourier-slice bandwidth check.
const RAY_DECAY: f64 = 1e-12;

/// Frame parameters (mu, nu, delta) of the measured quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameParameters {
    pub mu: f64,
    pub nu: f64,
    #[serde(default)]
    pub delta: f64,
}

impl FrameParameters {
    pub fn new(mu: f64, nu: f64) -> Self {
        Self { mu, nu, delta: 0.0 }
    }

    pub fn with_delta(mu: f64, nu: f64, delta: f64) -> Self {
        Self { mu, nu, delta }
    }

    #[inline]
    pub fn norm2(&self) -> f64 {
        self.mu * self.mu + self.nu * self.nu
    }

    pub fn validate(&self) -> Result<()> {
        if self.norm2() > 0.0 && self.norm2().is_finite() && self.delta.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidFrame(format!(
                "degenerate frame (mu, nu) = ({}, {})",
                self.mu, self.nu
            )))
        }
    }
}

/// A frame together with a canonically conjugate partner, satisfying the
/// symplectic pairing `mu nu' - nu mu' = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjugateFramePair {
    pub frame: FrameParameters,
    pub mu_prime: f64,
    pub nu_prime: f64,
    pub delta_prime: f64,
}

impl ConjugateFramePair {
    /// `mu nu' - nu mu' - 1`; zero for a valid pair.
    pub fn symplectic_defect(&self) -> f64 {
        self.frame.mu * self.nu_prime - self.frame.nu * self.mu_prime - 1.0
    }
}

/// Canonical completion of a frame to a symplectic pair.
///
/// The completion is one choice out of a one-parameter family (any
/// `(mu', nu') + lambda (mu, nu)` works); the symmetric choice
/// `mu' = -nu / (mu^2+nu^2)`, `nu' = mu / (mu^2+nu^2)` is fixed here.
pub fn conjugate_frame(frame: &FrameParameters) -> Result<ConjugateFramePair> {
    frame.validate()?;
    let r2 = frame.norm2();
    Ok(ConjugateFramePair {
        frame: *frame,
        mu_prime: -frame.nu / r2,
        nu_prime: frame.mu / r2,
        delta_prime: 0.0,
    })
}

/// Frame reached by a squeezing pre-amplifier with parameter `s` and phase
/// `theta` followed by homodyne detection locked to half the squeezer phase:
/// `mu = exp(-s) cos(theta/2)`, `nu = exp(-s) sin(theta/2)` (the factor
/// `cosh s - sinh s = exp(-s)` evaluated in closed form). The shift is not a
/// physical measurement parameter and is fixed to zero.
pub fn frame_from_squeezer(s: f64, theta: f64) -> FrameParameters {
    let scale = (-s).exp();
    let (sn, cs) = (0.5 * theta).sin_cos();
    FrameParameters::new(scale * cs, scale * sn)
}

/// One tomogram slice: the distribution of the quadrature in a single frame.
#[derive(Debug, Clone)]
pub struct TomogramSlice {
    pub frame: FrameParameters,
    pub x_axis: AxisGrid,
    pub values: Vec<f64>,
}

impl TomogramSlice {
    /// Trapezoidal normalization integral.
    pub fn normalization(&self) -> f64 {
        integrate_1d(&self.values, &self.x_axis).expect("lengths match by construction")
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_diff(&self, other: &[f64]) -> f64 {
        self.values
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Tomogram data: per-frame slices on a shared quadrature axis, or a dense
/// grid over (x, mu, nu).
#[derive(Debug, Clone)]
pub enum Tomogram {
    FrameSliced {
        frames: Vec<FrameParameters>,
        x_axis: AxisGrid,
        /// Row f holds the slice of frame f.
        values: Array2<f64>,
    },
    FullGrid {
        x_axis: AxisGrid,
        mu_axis: AxisGrid,
        nu_axis: AxisGrid,
        values: Array3<f64>,
    },
}

impl Tomogram {
    pub fn full_grid(field: ScalarField3D) -> Result<Self> {
        if field.values.iter().any(|&v| v < -1e-3) {
            return Err(Error::Input(
                "tomogram values far below zero; not a marginal distribution".into(),
            ));
        }
        let [x_axis, mu_axis, nu_axis] = field.axes;
        Ok(Tomogram::FullGrid { x_axis, mu_axis, nu_axis, values: field.values })
    }

    pub fn from_slices(slices: Vec<TomogramSlice>) -> Result<Self> {
        let first = slices
            .first()
            .ok_or_else(|| Error::Input("no slices".into()))?;
        let x_axis = first.x_axis;
        let n_x = x_axis.n;
        if slices.iter().any(|s| s.x_axis != x_axis) {
            return Err(Error::Input("slices disagree on the x axis".into()));
        }
        let frames: Vec<FrameParameters> = slices.iter().map(|s| s.frame).collect();
        let mut values = Array2::zeros((slices.len(), n_x));
        for (f, s) in slices.iter().enumerate() {
            for (i, v) in s.values.iter().enumerate() {
                values[[f, i]] = *v;
            }
        }
        Ok(Tomogram::FrameSliced { frames, x_axis, values })
    }

    pub fn as_full_grid(&self) -> Result<(&AxisGrid, &AxisGrid, &AxisGrid, &Array3<f64>)> {
        match self {
            Tomogram::FullGrid { x_axis, mu_axis, nu_axis, values } => {
                Ok((x_axis, mu_axis, nu_axis, values))
            }
            Tomogram::FrameSliced { .. } => Err(Error::Representation(
                "operation requires a full-grid tomogram".into(),
            )),
        }
    }

    /// Smallest value anywhere in the tomogram.
    pub fn min_value(&self) -> f64 {
        match self {
            Tomogram::FrameSliced { values, .. } => {
                values.iter().copied().fold(f64::INFINITY, f64::min)
            }
            Tomogram::FullGrid { values, .. } => {
                values.iter().copied().fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Worst deviation of per-frame normalization from 1.
    ///
    /// For full grids only frames with `min_radius^2 < mu^2 + nu^2 <=
    /// max_radius^2` are scored: the quadrature spread grows with the frame
    /// radius, so frames whose support leaves the x window (and the
    /// degenerate neighborhood of the origin, where slices are narrower than
    /// the grid step) carry window artifacts rather than data.
    pub fn normalization_defect(&self, min_radius: f64, max_radius: f64) -> f64 {
        match self {
            Tomogram::FrameSliced { x_axis, values, .. } => {
                let mut worst = 0.0f64;
                for row in values.rows() {
                    let n = integrate_1d(row.as_slice().unwrap(), x_axis).unwrap();
                    worst = worst.max((n - 1.0).abs());
                }
                worst
            }
            Tomogram::FullGrid { x_axis, mu_axis, nu_axis, values } => {
                let mus = mu_axis.values();
                let nus = nu_axis.values();
                let mut worst = 0.0f64;
                for (m, &mu) in mus.iter().enumerate() {
                    for (l, &nu) in nus.iter().enumerate() {
                        let r2 = mu * mu + nu * nu;
                        if r2 <= min_radius * min_radius || r2 > max_radius * max_radius {
                            continue;
                        }
                        let line: Vec<f64> =
                            (0..x_axis.n).map(|i| values[[i, m, l]]).collect();
                        let n = integrate_1d(&line, x_axis).unwrap();
                        worst = worst.max((n - 1.0).abs());
                    }
                }
                worst
            }
        }
    }
}

/// Density matrix in position representation on a uniform grid.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub q_axis: AxisGrid,
    pub values: Array2<C64>,
}

impl DensityMatrix {
    /// Quadrature trace `sum_i rho(q_i, q_i) h`.
    pub fn trace(&self) -> f64 {
        let h = self.q_axis.spacing();
        (0..self.q_axis.n).map(|i| self.values[[i, i]].re).sum::<f64>() * h
    }

    /// Largest absolute deviation from Hermitian symmetry.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.q_axis.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            worst = worst.max(self.values[[i, i]].im.abs());
            for j in (i + 1)..n {
                worst = worst.max((self.values[[i, j]] - self.values[[j, i]].conj()).norm());
            }
        }
        worst
    }

    /// Purity `Tr(rho^2)` by quadrature.
    pub fn purity(&self) -> f64 {
        let h = self.q_axis.spacing();
        let mut acc = C64::new(0.0, 0.0);
        let n = self.q_axis.n;
        for i in 0..n {
            for j in 0..n {
                acc += self.values[[i, j]] * self.values[[j, i]];
            }
        }
        acc.re * h * h
    }

    /// Real diagonal (position density).
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.q_axis.n).map(|i| self.values[[i, i]].re).collect()
    }

    /// Smallest operator eigenvalue (matrix eigenvalue times the grid step,
    /// so that values are occupation probabilities).
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let eig = eigvalsh(&self.values)?;
        Ok(eig.first().copied().unwrap_or(0.0) * self.q_axis.spacing())
    }

    /// Expectation `<psi| rho |psi>` for a wavefunction sampled on `q_axis`.
    pub fn fidelity_with(&self, psi: &[f64]) -> Result<f64> {
        if psi.len() != self.q_axis.n {
            return Err(Error::Dimension("wavefunction length".into()));
        }
        let h = self.q_axis.spacing();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..psi.len() {
            for j in 0..psi.len() {
                acc += C64::new(psi[i], 0.0) * self.values[[i, j]] * psi[j];
            }
        }
        Ok(acc.re * h * h)
    }

    /// Mean position `Tr(rho q)`.
    pub fn mean_position(&self) -> f64 {
        let h = self.q_axis.spacing();
        (0..self.q_axis.n)
            .map(|i| self.q_axis.value(i) * self.values[[i, i]].re)
            .sum::<f64>()
            * h
    }
}

/// One homodyne quadrature outcome at local-oscillator phase `phi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomodyneSample {
    pub x_phi: f64,
    pub phi: f64,
}

/* Forward map ****************************************************************/

/// Fourier-slice sampling of `W_F` along the ray `k -> (k mu, k nu)` for all
/// `k` on the conjugate axis of `x_axis`, with the bandwidth contract: if the
/// ray leaves the transform grid before `|W_F|` has decayed below `1e-12` of
/// its on-ray peak, the data cannot support the slice and an error is
/// returned. Beyond the decayed exit the integrand is zero-extended.
fn sample_ray(
    wf: &ComplexField2D,
    frame: &FrameParameters,
    k_axis: &AxisGrid,
) -> Result<Vec<C64>> {
    let a_max = wf.a_axis.max;
    let b_max = wf.b_axis.max;
    let k_exit_a = if frame.mu.abs() > 0.0 { a_max / frame.mu.abs() } else { f64::INFINITY };
    let k_exit_b = if frame.nu.abs() > 0.0 { b_max / frame.nu.abs() } else { f64::INFINITY };
    let k_exit = k_exit_a.min(k_exit_b);
    let mut out = vec![C64::new(0.0, 0.0); k_axis.n];
    let mut peak = 0.0f64;
    for (j, v) in out.iter_mut().enumerate() {
        let k = k_axis.value(j);
        if k.abs() <= k_exit {
            let s = wf.sample_interp8(k * frame.mu, k * frame.nu)?;
            *v = s;
            peak = peak.max(s.norm());
        }
    }
    if k_exit < k_axis.max {
        // probe the transform just inside the exit point of the ray
        let k_edge = 0.999 * k_exit;
        let edge = wf.sample_interp8(k_edge * frame.mu, k_edge * frame.nu)?.norm();
        if edge > RAY_DECAY * peak {
            return Err(Error::Bandwidth(format!(
                "ray for frame ({}, {}) leaves the conjugate grid at |k| = {:.3} with \
                 |W_F| still {:.3e} of peak",
                frame.mu,
                frame.nu,
                k_exit,
                edge / peak
            )));
        }
    }
    Ok(out)
}

/// Padded 2D transform of a Wigner field for Fourier-slice sampling.
///
/// Zero-padding by the full sample count per side refines the conjugate
/// spacing 3x; combined with the 8-point ray interpolation the slice bias
/// sits orders of magnitude below the 1e-6 normalization tolerance. Used by
/// the dense-grid builder, where one transform serves thousands of rays;
/// single slices use the exact ray sum instead (see [`forward_marginal`]).
pub fn wigner_ray_transform(w_field: &WignerField) -> Result<ComplexField2D> {
    let padded = w_field.zero_pad(w_field.grid.q_axis.n)?;
    fourier_2d_real(&padded, 1)
}

/// Exact Fourier-slice ray: `S(k_j) = 1/(2 pi)^2 integral W exp(i k_j (mu q
/// + nu p)) dq dp` evaluated as a semi-discrete sum at the exact ray
/// frequencies, with no intermediate transform grid or interpolation.
///
/// The sampled field still imposes its own band limit `pi / spacing` per
/// axis; the ray is zero-extended beyond it and the decay contract checked
/// there exactly as for the interpolated path.
fn sample_ray_exact(
    w_field: &WignerField,
    frame: &FrameParameters,
    k_axis: &AxisGrid,
) -> Result<Vec<C64>> {
    let q_axis = &w_field.grid.q_axis;
    let p_axis = &w_field.grid.p_axis;
    let a_max = std::f64::consts::PI / q_axis.spacing();
    let b_max = std::f64::consts::PI / p_axis.spacing();
    let k_exit_a = if frame.mu.abs() > 0.0 { a_max / frame.mu.abs() } else { f64::INFINITY };
    let k_exit_b = if frame.nu.abs() > 0.0 { b_max / frame.nu.abs() } else { f64::INFINITY };
    let k_exit = k_exit_a.min(k_exit_b);
    let pref = w_field.grid.q_axis.spacing() * w_field.grid.p_axis.spacing() / (TAU * TAU);
    let qs = q_axis.values();
    let ps = p_axis.values();
    let eval = |k: f64| -> C64 {
        let row_phase: Vec<C64> =
            qs.iter().map(|&q| C64::from_polar(1.0, k * frame.mu * q)).collect();
        let col_phase: Vec<C64> =
            ps.iter().map(|&p| C64::from_polar(1.0, k * frame.nu * p)).collect();
        let mut acc = C64::new(0.0, 0.0);
        for (i, rp) in row_phase.iter().enumerate() {
            let mut inner = C64::new(0.0, 0.0);
            let row = w_field.values.row(i);
            for (w, cp) in row.iter().zip(&col_phase) {
                inner += cp * *w;
            }
            acc += rp * inner;
        }
        acc * pref
    };
    let out: Vec<C64> = (0..k_axis.n)
        .into_par_iter()
        .map(|j| {
            let k = k_axis.value(j);
            if k.abs() <= k_exit {
                eval(k)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    if k_exit < k_axis.max {
        let peak = out.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let edge = eval(0.999 * k_exit).norm();
        if edge > RAY_DECAY * peak {
            return Err(Error::Bandwidth(format!(
                "ray for frame ({}, {}) leaves the band limit of the sampled field at \
                 |k| = {:.3} with |W_F| still {:.3e} of peak",
                frame.mu,
                frame.nu,
                k_exit,
                edge / peak
            )));
        }
    }
    Ok(out)
}

fn synthesize_slice(
    ray: &[C64],
    k_axis: &AxisGrid,
    synth: &AxisTransform,
    delta: f64,
) -> Vec<f64> {
    let mut buf: Vec<C64> = if delta != 0.0 {
        ray.iter()
            .enumerate()
            .map(|(j, v)| v * C64::from_polar(1.0, k_axis.value(j) * delta))
            .collect()
    } else {
        ray.to_vec()
    };
    synth.apply(&mut buf);
    buf.into_iter().map(|v| v.re).collect()
}

/// Tomogram slice of a Wigner field in one frame, on `x_axis`.
///
/// Samples the transform of the field along the frame ray at the conjugate
/// frequencies of `x_axis` (exactly, by semi-discrete Fourier sums) and
/// synthesizes `w(x) = integral dk e^{-ikx} W_F(k mu, k nu)`. A nonzero
/// frame shift translates the slice: values are of `w(x - delta; mu, nu)`.
pub fn forward_marginal(
    w_field: &WignerField,
    frame: &FrameParameters,
    x_axis: &AxisGrid,
) -> Result<TomogramSlice> {
    frame.validate()?;
    if !x_axis.is_symmetric() {
        return Err(Error::InvalidGrid("x axis must be symmetric".into()));
    }
    let k_axis = x_axis.conjugate();
    let ray = sample_ray_exact(w_field, frame, &k_axis)?;
    let synth = AxisTransform::new(&k_axis, -1.0);
    let values = synthesize_slice(&ray, &k_axis, &synth, frame.delta);
    Ok(TomogramSlice { frame: *frame, x_axis: *x_axis, values })
}

/// Same as [`forward_marginal`] but reusing a precomputed `fourier_2d(W, +1)`.
pub fn forward_marginal_from_transform(
    wf: &ComplexField2D,
    frame: &FrameParameters,
    x_axis: &AxisGrid,
) -> Result<TomogramSlice> {
    frame.validate()?;
    if !x_axis.is_symmetric() {
        return Err(Error::InvalidGrid("x axis must be symmetric".into()));
    }
    let k_axis = x_axis.conjugate();
    let ray = sample_ray(wf, frame, &k_axis)?;
    let synth = AxisTransform::new(&k_axis, -1.0);
    let values = synthesize_slice(&ray, &k_axis, &synth, frame.delta);
    Ok(TomogramSlice { frame: *frame, x_axis: *x_axis, values })
}

/// Optical-tomography special case: frame `(cos phi, sin phi, 0)`.
pub fn radon_marginal(
    w_field: &WignerField,
    phi: f64,
    x_axis: &AxisGrid,
) -> Result<TomogramSlice> {
    if !(0.0..std::f64::consts::PI).contains(&phi) {
        return Err(Error::InvalidFrame(format!("phi = {phi} outside [0, pi)")));
    }
    let (s, c) = phi.sin_cos();
    forward_marginal(w_field, &FrameParameters::new(c, s), x_axis)
}

/// Dense tomogram over a full (x, mu, nu) grid, one Fourier-slice per frame.
///
/// Equivalent to calling [`forward_marginal`] for every (mu, nu) node with
/// the 2D transform computed once; frame lines are independent and evaluated
/// in parallel with deterministic output.
pub fn forward_full_grid(
    w_field: &WignerField,
    x_axis: &AxisGrid,
    mu_axis: &AxisGrid,
    nu_axis: &AxisGrid,
) -> Result<Tomogram> {
    if !x_axis.is_symmetric() {
        return Err(Error::InvalidGrid("x axis must be symmetric".into()));
    }
    let wf = wigner_ray_transform(w_field)?;
    let k_axis = x_axis.conjugate();
    let synth = AxisTransform::new(&k_axis, -1.0);
    let mus = mu_axis.values();
    let nus = nu_axis.values();
    let lines: Vec<Result<Vec<f64>>> = (0..mus.len() * nus.len())
        .into_par_iter()
        .map(|idx| {
            let (m, l) = (idx / nus.len(), idx % nus.len());
            let frame = FrameParameters::new(mus[m], nus[l]);
            if frame.norm2() == 0.0 {
                // degenerate node on odd-sized symmetric grids carries no
                // marginal; its line is zeroed and excluded from checks
                return Ok(vec![0.0; x_axis.n]);
            }
            let ray = sample_ray(&wf, &frame, &k_axis)?;
            Ok(synthesize_slice(&ray, &k_axis, &synth, 0.0))
        })
        .collect();
    let mut values = Array3::zeros((x_axis.n, mu_axis.n, nu_axis.n));
    for (idx, line) in lines.into_iter().enumerate() {
        let (m, l) = (idx / nus.len(), idx % nus.len());
        let line = line?;
        for (i, v) in line.into_iter().enumerate() {
            values[[i, m, l]] = v;
        }
    }
    Ok(Tomogram::FullGrid {
        x_axis: *x_axis,
        mu_axis: *mu_axis,
        nu_axis: *nu_axis,
        values,
    })
}

/* Inverse map ****************************************************************/

/// Diagnostics of a Wigner inversion.
#[derive(Debug, Clone, Copy)]
pub struct InversionDiagnostics {
    /// `integral W dq dp / (2 pi) - 1` before rescaling.
    pub normalization_drift: f64,
    /// Largest imaginary residue discarded when taking the real part.
    pub imaginary_residue: f64,
}

fn x_fourier_at(
    values: &Array3<f64>,
    x_axis: &AxisGrid,
    z: f64,
) -> Array2<C64> {
    let (n_x, n_mu, n_nu) = (values.shape()[0], values.shape()[1], values.shape()[2]);
    let h = x_axis.spacing();
    let phases: Vec<C64> = (0..n_x)
        .map(|i| C64::from_polar(h, -z * x_axis.value(i)))
        .collect();
    let mut out = Array2::from_elem((n_mu, n_nu), C64::new(0.0, 0.0));
    for i in 0..n_x {
        let ph = phases[i];
        for m in 0..n_mu {
            for l in 0..n_nu {
                out[[m, l]] += ph * values[[i, m, l]];
            }
        }
    }
    out
}

fn inverse_wigner_raw(
    tomogram: &Tomogram,
    grid: &PhaseSpaceGrid,
    z: f64,
) -> Result<(Array2<f64>, InversionDiagnostics)> {
    let (x_axis, mu_axis, nu_axis, values) = tomogram.as_full_grid()?;
    // x integral at the fixed Fourier slice z
    let mut phi = x_fourier_at(values, x_axis, z);
    // restrict the (mu, nu) quadrature to the inscribed disk: the corners of
    // the square window hold slices broader than the x window can represent,
    // and the z-slice amplitude has decayed there for any admissible input
    let radius = mu_axis.max.abs().min(nu_axis.max.abs()) * (1.0 + 1e-12);
    let mus = mu_axis.values();
    let nus = nu_axis.values();
    for (m, &mu) in mus.iter().enumerate() {
        for (l, &nu) in nus.iter().enumerate() {
            if mu * mu + nu * nu > radius * radius {
                phi[[m, l]] = C64::new(0.0, 0.0);
            }
        }
    }
    // (mu, nu) quadrature onto the phase-space nodes at exact frequencies
    let u: Vec<f64> = grid.q_axis.values().iter().map(|&q| z * q).collect();
    let v: Vec<f64> = grid.p_axis.values().iter().map(|&p| z * p).collect();
    let pref = z * z / TAU;
    let w = dft_eval_2d(phi.view(), mu_axis, nu_axis, &u, &v, 1.0, pref);
    let imaginary_residue = w.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
    let real = w.mapv(|c| c.re);
    let norm = crate::grid::integrate_2d(&real, &grid.q_axis, &grid.p_axis) / TAU;
    Ok((
        real,
        InversionDiagnostics { normalization_drift: norm - 1.0, imaginary_residue },
    ))
}

/// Reconstruct the Wigner field from a full-grid tomogram at the z = 1 slice.
///
/// The output is rescaled to unit normalization; a drift above 1e-2 before
/// rescaling indicates the tomogram grid cannot support the inversion and is
/// reported as an accuracy error.
pub fn inverse_wigner(tomogram: &Tomogram, grid: &PhaseSpaceGrid) -> Result<WignerField> {
    inverse_wigner_diagnostics(tomogram, grid).map(|(f, _)| f)
}

/// [`inverse_wigner`] with its diagnostics.
pub fn inverse_wigner_diagnostics(
    tomogram: &Tomogram,
    grid: &PhaseSpaceGrid,
) -> Result<(WignerField, InversionDiagnostics)> {
    let (mut real, diag) = inverse_wigner_raw(tomogram, grid, 1.0)?;
    if diag.normalization_drift.abs() > 1e-2 {
        return Err(Error::Accuracy(format!(
            "inverse normalization drift {:.3e} exceeds 1e-2",
            diag.normalization_drift
        )));
    }
    real.mapv_inplace(|v| v / (1.0 + diag.normalization_drift));
    Ok((ScalarField2D::new(*grid, real)?, diag))
}

/// Consistency metric across redundant Fourier slices: reconstruct at
/// z in {1/2, 1, 2} and report the largest pointwise spread between the raw
/// (unrescaled) reconstructions. Small values confirm the overcompleteness
/// of the tomogram data on the given grids.
pub fn overcompleteness_spread(tomogram: &Tomogram, grid: &PhaseSpaceGrid) -> Result<f64> {
    let zs = [0.5, 1.0, 2.0];
    let mut fields = Vec::new();
    for &z in &zs {
        fields.push(inverse_wigner_raw(tomogram, grid, z)?.0);
    }
    let mut spread = 0.0f64;
    for a in 0..zs.len() {
        for b in (a + 1)..zs.len() {
            for (x, y) in fields[a].iter().zip(fields[b].iter()) {
                spread = spread.max((x - y).abs());
            }
        }
    }
    Ok(spread)
}

/* Density-matrix reconstruction **********************************************/

/// Position-representation density matrix from a full-grid tomogram.
///
/// Implements the two-integral reduction (derivation in
/// `docs/derivations.md`):
///
/// ```text
/// rho(q'', q') = 1/(2 pi) integral dx dmu  w(x, mu, nu = q' - q'')
///                  exp(-i x) exp(i mu (q'' + q') / 2)
/// ```
///
/// The nu axis must hold every required difference `q' - q''` as an exact
/// node, which is the case when the nu spacing equals the q spacing and the
/// nu range covers `[-(q_max - q_min), q_max - q_min]`.
pub fn reconstruct_density(tomogram: &Tomogram, q_axis: &AxisGrid) -> Result<DensityMatrix> {
    let (x_axis, mu_axis, nu_axis, values) = tomogram.as_full_grid()?;
    let n_q = q_axis.n;
    let h_q = q_axis.spacing();
    let h_nu = nu_axis.spacing();
    if ((h_nu - h_q) / h_q).abs() > 1e-9 {
        return Err(Error::Coverage(format!(
            "nu spacing {h_nu} must match q spacing {h_q} so difference slices are on-grid"
        )));
    }
    // the diagonal integrates the nu = 0 slices over all mu: the narrowest
    // of those (smallest |mu|) must still be resolved by the x grid, or its
    // unit-frequency Fourier content is aliased into the result
    let mu_min = mu_axis
        .values()
        .iter()
        .map(|m| m.abs())
        .fold(f64::INFINITY, f64::min);
    if mu_min < 1e-12 {
        return Err(Error::Coverage(
            "mu axis contains the degenerate node mu = 0; use an even sample \
             count so frame columns stay non-degenerate"
                .into(),
        ));
    }
    if x_axis.spacing() > 1.04 * mu_min {
        return Err(Error::Coverage(format!(
            "x spacing {:.4} cannot resolve the narrowest diagonal slice \
             (|mu| = {:.4}); refine the x axis or coarsen the mu axis",
            x_axis.spacing(),
            mu_min
        )));
    }
    // nu node index for each difference d = i - j, d in -(n-1)..=(n-1)
    let n_d = 2 * n_q - 1;
    let mut nu_index = vec![0usize; n_d];
    for (di, slot) in nu_index.iter_mut().enumerate() {
        let d = di as isize - (n_q as isize - 1);
        let nu = d as f64 * h_q;
        let fidx = (nu - nu_axis.min) / h_nu;
        let idx = fidx.round() as isize;
        if idx < 0
            || idx >= nu_axis.n as isize
            || (nu_axis.value(idx as usize) - nu).abs() > 1e-9 * nu.abs().max(1.0)
        {
            return Err(Error::Coverage(format!(
                "required nu slice {nu} is not a node of the nu axis"
            )));
        }
        *slot = idx as usize;
    }

    // stage 1: phi[m, di] = h_x sum_i w[i, m, nu_index(di)] exp(-i x_i)
    let n_x = x_axis.n;
    let n_mu = mu_axis.n;
    let h_x = x_axis.spacing();
    let x_phase: Vec<C64> = (0..n_x)
        .map(|i| C64::from_polar(h_x, -x_axis.value(i)))
        .collect();
    let phi_rows: Vec<Vec<C64>> = (0..n_mu)
        .into_par_iter()
        .map(|m| {
            let mut row = vec![C64::new(0.0, 0.0); n_d];
            for (di, &l) in nu_index.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..n_x {
                    acc += x_phase[i] * values[[i, m, l]];
                }
                row[di] = acc;
            }
            row
        })
        .collect();
    let mut phi = Array2::from_elem((n_mu, n_d), C64::new(0.0, 0.0));
    for (m, row) in phi_rows.into_iter().enumerate() {
        for (di, v) in row.into_iter().enumerate() {
            phi[[m, di]] = v;
        }
    }

    // stage 2: F[u, di] = h_mu/(2 pi) sum_m phi[m, di] exp(i mu_m t_u) with
    // t_u = q_min + u h/2 the midpoint (q_i + q_j)/2, u = i + j
    let n_u = 2 * n_q - 1;
    let targets: Vec<f64> = (0..n_u).map(|u| q_axis.min + 0.5 * u as f64 * h_q).collect();
    let f = crate::fourier::dft_eval_axis0(phi.view(), mu_axis, &targets, 1.0);

    let mut rho = Array2::from_elem((n_q, n_q), C64::new(0.0, 0.0));
    for i in 0..n_q {
        for j in 0..n_q {
            let u = i + j;
            let di = (i as isize - j as isize + n_q as isize - 1) as usize;
            rho[[i, j]] = f[[u, di]] / TAU;
        }
    }
    Ok(DensityMatrix { q_axis: *q_axis, values: rho })
}

/* Sampled homodyne reconstruction ********************************************/

/// Diagnostics of a sampled reconstruction.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HomodyneDiagnostics {
    pub n_samples: usize,
    /// Samples at phases whose kernel resolves nothing on this grid.
    pub n_skipped: usize,
    /// Set when the radial cutoff is below sqrt(2 ln 10), for which even a
    /// perfect vacuum data set reconstructs with fidelity < 0.9
    /// (the cutoff kernel gives F(R) = 1 - exp(-R^2/2)).
    pub low_cutoff_warning: bool,
}

/// Monte-Carlo kernel average over homodyne samples
/// (estimator and kernel matrix elements derived in `docs/derivations.md`).
///
/// Off-diagonal elements are pointwise kernel averages; diagonal elements are
/// evaluated at a transverse half-step offset (the kernel's diagonal limit is
/// removable) and carry an O(h^2) smoothing bias. Statistical error scales as
/// `N^{-1/2}`.
pub fn homodyne_reconstruct(
    samples: &[HomodyneSample],
    q_axis: &AxisGrid,
    r_cutoff: f64,
) -> Result<(DensityMatrix, HomodyneDiagnostics)> {
    if samples.is_empty() {
        return Err(Error::Input("empty homodyne sample set".into()));
    }
    if !(r_cutoff > 0.0) {
        return Err(Error::Input(format!("r_cutoff = {r_cutoff} must be positive")));
    }
    for s in samples.iter().take(16) {
        if !(0.0..std::f64::consts::PI).contains(&s.phi) {
            return Err(Error::Input(format!("phi = {} outside [0, pi)", s.phi)));
        }
    }
    let n = q_axis.n;
    let h = q_axis.spacing();
    let q0 = q_axis.min;

    let chunk = 8192usize;
    let partials: Vec<(Array2<C64>, Vec<f64>, usize)> = samples
        .par_chunks(chunk)
        .map(|block| {
            let mut acc = Array2::from_elem((n, n), C64::new(0.0, 0.0));
            let mut diag = vec![0.0f64; n];
            let mut skipped = 0usize;
            for smp in block {
                let (s, c) = smp.phi.sin_cos();
                if s.abs() < 1e-12 {
                    skipped += 1;
                    continue;
                }
                let x = smp.x_phi;
                // off-diagonal bands d = i - j >= 1
                for d in 1..n {
                    let r = d as f64 * h / s;
                    if r.abs() > r_cutoff {
                        break;
                    }
                    let amp = r.abs() / (TAU * s.abs());
                    let mut val = C64::from_polar(
                        amp,
                        r * (x - c * (q0 + 0.5 * d as f64 * h)),
                    );
                    let step = C64::from_polar(1.0, -r * c * h);
                    for j in 0..(n - d) {
                        acc[[j + d, j]] += val;
                        val *= step;
                    }
                }
                // diagonal at transverse offset xi = h/2
                let r0 = 0.5 * h / s;
                if r0.abs() <= r_cutoff {
                    let amp0 = r0.abs() / (TAU * s.abs());
                    let mut val = C64::from_polar(amp0, r0 * (x - c * q0));
                    let step = C64::from_polar(1.0, -r0 * c * h);
                    for dv in diag.iter_mut() {
                        *dv += val.re;
                        val *= step;
                    }
                }
            }
            (acc, diag, skipped)
        })
        .collect();

    let mut acc = Array2::from_elem((n, n), C64::new(0.0, 0.0));
    let mut diag = vec![0.0f64; n];
    let mut skipped = 0usize;
    for (a, d, s) in partials {
        acc += &a;
        for (dv, v) in diag.iter_mut().zip(d) {
            *dv += v;
        }
        skipped += s;
    }

    let scale = std::f64::consts::PI / samples.len() as f64;
    let mut rho = Array2::from_elem((n, n), C64::new(0.0, 0.0));
    for i in 0..n {
        rho[[i, i]] = C64::new(diag[i] * scale, 0.0);
        for j in 0..i {
            let v = acc[[i, j]] * scale;
            rho[[i, j]] = v;
            rho[[j, i]] = v.conj();
        }
    }
    let diagnostics = HomodyneDiagnostics {
        n_samples: samples.len(),
        n_skipped: skipped,
        low_cutoff_warning: r_cutoff < (2.0 * (10.0f64).ln()).sqrt(),
    };
    Ok((DensityMatrix { q_axis: *q_axis, values: rho }, diagnostics))
}

/* Cross-check utility *********************************************************/

/// Wigner transform of a position-representation density matrix,
/// `W(q, p) = integral du exp(i p u) rho(q - u/2, q + u/2)`.
///
/// Used as an independent route for validating reconstructions against
/// [`inverse_wigner`]; bilinear interpolation off the rho grid,
/// zero-extension outside it.
pub fn wigner_from_density(rho: &DensityMatrix, grid: &PhaseSpaceGrid) -> Result<WignerField> {
    let qa = &rho.q_axis;
    let h = qa.spacing();
    let n_u = 2 * qa.n - 1;
    let u_min = -((qa.n - 1) as f64) * h;
    let rho_field = ComplexField2D::new(*qa, *qa, rho.values.clone())?;
    let sample_rho = |a: f64, b: f64| -> C64 {
        if !qa.contains(a) || !qa.contains(b) {
            return C64::new(0.0, 0.0);
        }
        rho_field.sample_interp8(a, b).unwrap_or_else(|_| C64::new(0.0, 0.0))
    };
    let qs = grid.q_axis.values();
    let ps = grid.p_axis.values();
    let rows: Vec<Vec<f64>> = (0..qs.len())
        .into_par_iter()
        .map(|i| {
            let q = qs[i];
            let mut row = vec![0.0f64; ps.len()];
            for (j, &p) in ps.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..n_u {
                    let u = u_min + k as f64 * h;
                    let r = sample_rho(q - 0.5 * u, q + 0.5 * u);
                    if r.norm_sqr() > 0.0 {
                        acc += C64::from_polar(h, p * u) * r;
                    }
                }
                row[j] = acc.re;
            }
            row
        })
        .collect();
    let mut values = Array2::zeros((qs.len(), ps.len()));
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            values[[i, j]] = v;
        }
    }
    ScalarField2D::new(*grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{marginal_at, wigner_field, StateSpec};

    fn ground_field() -> WignerField {
        let grid = PhaseSpaceGrid::square(8.0, 256).unwrap();
        wigner_field(&StateSpec::Ground, &grid, 0.0).unwrap()
    }

    #[test]
    fn squeezer_frame_values() {
        let f = frame_from_squeezer(0.0, 0.0);
        assert!((f.mu - 1.0).abs() < 1e-15 && f.nu.abs() < 1e-15 && f.delta == 0.0);
        let f = frame_from_squeezer(0.0, std::f64::consts::PI);
        assert!(f.mu.abs() < 1e-15 && (f.nu - 1.0).abs() < 1e-15);
    }

    #[test]
    fn squeezer_frame_radius_identity() {
        for (s, theta) in [(0.3, 1.0), (-0.7, 2.5), (1.9, 0.1), (0.0, 3.0)] {
            let f = frame_from_squeezer(s, theta);
            assert!((f.norm2() - (-2.0 * s).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn conjugate_frame_examples() {
        let p = conjugate_frame(&FrameParameters::new(1.0, 0.0)).unwrap();
        assert!((p.mu_prime).abs() < 1e-15 && (p.nu_prime - 1.0).abs() < 1e-15);
        let p = conjugate_frame(&FrameParameters::new(0.0, 1.0)).unwrap();
        assert!((p.mu_prime + 1.0).abs() < 1e-15 && p.nu_prime.abs() < 1e-15);
        assert!(conjugate_frame(&FrameParameters::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn forward_matches_analytic_ground() {
        let w = ground_field();
        let x_axis = AxisGrid::symmetric(8.0, 128).unwrap();
        let frame = FrameParameters::new(1.0, 0.0);
        let slice = forward_marginal(&w, &frame, &x_axis).unwrap();
        let mut worst = 0.0f64;
        for (i, &x) in x_axis.values().iter().enumerate() {
            let expect = marginal_at(&StateSpec::Ground, x, &frame, 0.0).unwrap();
            worst = worst.max((slice.values[i] - expect).abs());
        }
        assert!(worst < 1e-6, "worst {worst}");
        assert!((slice.normalization() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn fock_one_slices_rotation_invariant() {
        let grid = PhaseSpaceGrid::square(8.0, 256).unwrap();
        let w = wigner_field(&StateSpec::FockOne, &grid, 0.0).unwrap();
        let x_axis = AxisGrid::symmetric(8.0, 128).unwrap();
        let base = radon_marginal(&w, 0.0, &x_axis).unwrap();
        for phi in [0.4, std::f64::consts::FRAC_PI_2, 2.2] {
            let slice = radon_marginal(&w, phi, &x_axis).unwrap();
            let d = base.max_abs_diff(&slice.values);
            assert!(d < 1e-8, "phi {phi}: diff {d:.3e}");
        }
    }

    #[test]
    fn forward_homogeneity() {
        // scaling the frame by 2 rescales the slice: 2 w(2x; 2mu, 2nu) = w(x; mu, nu)
        let w = ground_field();
        let frame1 = FrameParameters::new(0.8, -0.5);
        let frame2 = FrameParameters::new(1.6, -1.0);
        let ax1 = AxisGrid::symmetric(4.0, 64).unwrap();
        let ax2 = AxisGrid::symmetric(8.0, 64).unwrap(); // nodes at 2 * ax1 nodes
        let s1 = forward_marginal(&w, &frame1, &ax1).unwrap();
        let s2 = forward_marginal(&w, &frame2, &ax2).unwrap();
        let mut worst = 0.0f64;
        for i in 0..64 {
            worst = worst.max((2.0 * s2.values[i] - s1.values[i]).abs());
        }
        assert!(worst < 1e-6, "worst {worst}");
    }

    #[test]
    fn forward_delta_shift_translates_exactly() {
        let w = ground_field();
        let x_axis = AxisGrid::symmetric(8.0, 128).unwrap();
        let h = x_axis.spacing();
        let base = forward_marginal(&w, &FrameParameters::new(0.9, 0.4), &x_axis).unwrap();
        // shift by an exact number of grid steps: translated slice matches
        // the unshifted one node-for-node
        let shift_steps = 10usize;
        let frame = FrameParameters::with_delta(0.9, 0.4, shift_steps as f64 * h);
        let shifted = forward_marginal(&w, &frame, &x_axis).unwrap();
        let mut worst = 0.0f64;
        for i in shift_steps..x_axis.n {
            worst = worst.max((shifted.values[i] - base.values[i - shift_steps]).abs());
        }
        assert!(worst < 1e-9, "worst {worst}");
    }

    #[test]
    fn forward_bandwidth_error_on_coarse_grid() {
        let grid = PhaseSpaceGrid::square(3.0, 16).unwrap();
        let w = wigner_field(&StateSpec::Ground, &grid, 0.0).unwrap();
        let x_axis = AxisGrid::symmetric(8.0, 64).unwrap();
        let res = forward_marginal(&w, &FrameParameters::new(3.0, 0.0), &x_axis);
        assert!(matches!(res, Err(Error::Bandwidth(_))), "got {res:?}");
    }

    #[test]
    fn forward_nonnegative_for_catalog() {
        let grid = PhaseSpaceGrid::square(8.0, 256).unwrap();
        let x_axis = AxisGrid::symmetric(8.0, 128).unwrap();
        for st in [
            StateSpec::FockOne,
            StateSpec::OddCat { q0: 2.0, p0: 0.0 },
            StateSpec::SqueezedCoherent { q0: 0.5, p0: 0.0, s: 2.0 },
        ] {
            let w = wigner_field(&st, &grid, 0.0).unwrap();
            for f in [FrameParameters::new(1.0, 0.0), FrameParameters::new(0.6, -0.8)] {
                let slice = forward_marginal(&w, &f, &x_axis).unwrap();
                assert!(slice.min_value() > -1e-9, "{st:?} {f:?}: {}", slice.min_value());
            }
        }
    }

    #[test]
    fn inverse_roundtrip_ground_modest_grid() {
        let w = ground_field();
        let x_axis = AxisGrid::symmetric(16.0, 160).unwrap();
        let mu_axis = AxisGrid::symmetric(6.0, 64).unwrap();
        let nu_axis = AxisGrid::symmetric(6.0, 64).unwrap();
        let tom = forward_full_grid(&w, &x_axis, &mu_axis, &nu_axis).unwrap();
        let grid = PhaseSpaceGrid::square(8.0, 64).unwrap();
        let back = inverse_wigner(&tom, &grid).unwrap();
        let expect = wigner_field(&StateSpec::Ground, &grid, 0.0).unwrap();
        let worst = back.max_abs_diff(&expect);
        assert!(worst < 3e-3, "worst {worst}");
    }

    #[test]
    fn inverse_requires_full_grid() {
        let w = ground_field();
        let x_axis = AxisGrid::symmetric(8.0, 64).unwrap();
        let slice = forward_marginal(&w, &FrameParameters::new(1.0, 0.0), &x_axis).unwrap();
        let tom = Tomogram::from_slices(vec![slice]).unwrap();
        let grid = PhaseSpaceGrid::square(8.0, 64).unwrap();
        assert!(matches!(
            inverse_wigner(&tom, &grid),
            Err(Error::Representation(_))
        ));
    }

    #[test]
    fn density_ground_oracle_on_small_grid() {
        // vacuum wavefunction outer product as the oracle
        let x_axis = AxisGrid::symmetric(20.0, 321).unwrap();
        let mu_axis = AxisGrid::symmetric(6.0, 48).unwrap();
        let nu_axis = AxisGrid::symmetric(8.0, 65).unwrap(); // spacing 0.25
        let q_axis = AxisGrid::symmetric(4.0, 33).unwrap(); // spacing 0.25
        let tom = crate::states::analytic_tomogram(
            &StateSpec::Ground,
            &x_axis,
            &mu_axis,
            &nu_axis,
            0.0,
        )
        .unwrap();
        let rho = reconstruct_density(&tom, &q_axis).unwrap();
        let pi_m4 = std::f64::consts::PI.powf(-0.25);
        let mut worst = 0.0f64;
        for (i, &qi) in q_axis.values().iter().enumerate() {
            for (j, &qj) in q_axis.values().iter().enumerate() {
                let expect = pi_m4 * pi_m4 * (-(qi * qi + qj * qj) / 2.0).exp();
                worst = worst.max((rho.values[[i, j]] - C64::new(expect, 0.0)).norm());
            }
        }
        assert!(worst < 3e-3, "worst {worst}");
        assert!((rho.trace() - 1.0).abs() < 2e-3, "trace {}", rho.trace());
        assert!(rho.hermiticity_error() < 1e-8);
        assert!((rho.purity() - 1.0).abs() < 1e-2, "purity {}", rho.purity());
    }

    #[test]
    fn density_diagonal_matches_position_tomogram() {
        let x_axis = AxisGrid::symmetric(20.0, 321).unwrap();
        let mu_axis = AxisGrid::symmetric(6.0, 48).unwrap();
        let nu_axis = AxisGrid::symmetric(8.0, 65).unwrap();
        let q_axis = AxisGrid::symmetric(4.0, 33).unwrap();
        let st = StateSpec::Coherent { q0: 1.0, p0: 0.4 };
        let tom =
            crate::states::analytic_tomogram(&st, &x_axis, &mu_axis, &nu_axis, 0.0).unwrap();
        let rho = reconstruct_density(&tom, &q_axis).unwrap();
        let f = FrameParameters::new(1.0, 0.0);
        let mut worst = 0.0f64;
        for (i, &q) in q_axis.values().iter().enumerate() {
            let expect = marginal_at(&st, q, &f, 0.0).unwrap();
            worst = worst.max((rho.values[[i, i]].re - expect).abs());
        }
        assert!(worst < 2e-3, "worst {worst}");
    }

    #[test]
    fn density_requires_matched_nu_axis() {
        let x_axis = AxisGrid::symmetric(10.0, 64).unwrap();
        let mu_axis = AxisGrid::symmetric(4.0, 32).unwrap();
        let nu_axis = AxisGrid::symmetric(4.0, 32).unwrap();
        let tom = crate::states::analytic_tomogram(
            &StateSpec::Ground,
            &x_axis,
            &mu_axis,
            &nu_axis,
            0.0,
        )
        .unwrap();
        let q_axis = AxisGrid::symmetric(4.0, 33).unwrap();
        assert!(matches!(
            reconstruct_density(&tom, &q_axis),
            Err(Error::Coverage(_))
        ));
    }

    #[test]
    fn homodyne_empty_rejected() {
        let q_axis = AxisGrid::symmetric(4.0, 33).unwrap();
        assert!(matches!(
            homodyne_reconstruct(&[], &q_axis, 8.0),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn homodyne_low_cutoff_warning() {
        let q_axis = AxisGrid::symmetric(4.0, 33).unwrap();
        let samples = vec![HomodyneSample { x_phi: 0.3, phi: 1.0 }; 32];
        let (_, diag) = homodyne_reconstruct(&samples, &q_axis, 1.0).unwrap();
        assert!(diag.low_cutoff_warning);
        let (_, diag) = homodyne_reconstruct(&samples, &q_axis, 8.0).unwrap();
        assert!(!diag.low_cutoff_warning);
    }

    #[test]
    fn wigner_from_density_vacuum() {
        let q_axis = AxisGrid::symmetric(6.0, 97).unwrap();
        let pi_m2 = std::f64::consts::PI.powf(-0.5);
        let values = Array2::from_shape_fn((97, 97), |(i, j)| {
            let (a, b) = (q_axis.value(i), q_axis.value(j));
            C64::new(pi_m2 * (-(a * a + b * b) / 2.0).exp(), 0.0)
        });
        let rho = DensityMatrix { q_axis, values };
        let grid = PhaseSpaceGrid::square(4.0, 48).unwrap();
        let w = wigner_from_density(&rho, &grid).unwrap();
        let expect = wigner_field(&StateSpec::Ground, &grid, 0.0).unwrap();
        let worst = w.max_abs_diff(&expect);
        assert!(worst < 1e-3, "worst {worst}");
    }

    #[test]
    fn full_grid_tomogram_normalization_window() {
        let w = ground_field();
        let x_axis = AxisGrid::symmetric(8.0, 128).unwrap();
        let mu_axis = AxisGrid::symmetric(4.0, 64).unwrap();
        let nu_axis = AxisGrid::symmetric(4.0, 64).unwrap();
        let tom = forward_full_grid(&w, &x_axis, &mu_axis, &nu_axis).unwrap();
        // frames with radius <= 2 have their support well inside the window
        assert!(tom.normalization_defect(0.3, 2.0) < 1e-6);
    }
}
