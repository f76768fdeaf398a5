//! Uniform grids, trapezoidal quadrature and interpolation.
//!
//! Everything downstream (transforms, reconstructions, solvers) works on
//! fields sampled on [`AxisGrid`]s, so the conventions live here once:
//! samples sit exactly at `min + k * spacing`, quadrature is trapezoidal,
//! and interpolation never silently zero-extends (out-of-bounds lookups are
//! an error and the caller decides what to do with them).

use ndarray::{Array2, Array3};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform 1D grid with `n` samples at `min + k * spacing`, k = 0..n-1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisGrid {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl AxisGrid {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if n < 8 {
            return Err(Error::InvalidGrid(format!("n = {n} < 8")));
        }
        if !(max > min) || !min.is_finite() || !max.is_finite() {
            return Err(Error::InvalidGrid(format!("bad range [{min}, {max}]")));
        }
        Ok(Self { min, max, n })
    }

    /// Symmetric grid on [-extent, extent].
    pub fn symmetric(extent: f64, n: usize) -> Result<Self> {
        Self::new(-extent, extent, n)
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.n - 1) as f64
    }

    #[inline]
    pub fn value(&self, k: usize) -> f64 {
        self.min + k as f64 * self.spacing()
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.value(k)).collect()
    }

    /// True if the grid is symmetric about zero to round-off.
    pub fn is_symmetric(&self) -> bool {
        (self.min + self.max).abs() <= 1e-12 * (self.max - self.min).abs()
    }

    /// Whether `x` lies inside `[min, max]` (boundaries inclusive).
    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        x >= self.min && x <= self.max
    }

    /// Cell index and fractional offset for interpolation.
    ///
    /// Returns `(i, t)` with `x = value(i) + t * spacing`, `0 <= t <= 1`,
    /// `i <= n - 2`. Out-of-bounds points are an error carrying the
    /// coordinate; callers wanting zero-extension handle it explicitly.
    /// Points within a relative 1e-12 of the boundary are clamped onto it,
    /// so exact boundary images under closed-form flows stay in-grid.
    #[inline]
    pub fn locate(&self, x: f64, axis: &'static str) -> Result<(usize, f64)> {
        let eps = 1e-12 * (self.max - self.min);
        if x < self.min - eps || x > self.max + eps || !x.is_finite() {
            return Err(Error::Bounds { axis, value: x });
        }
        let x = x.clamp(self.min, self.max);
        let t = (x - self.min) / self.spacing();
        let mut i = t.floor() as usize;
        if i >= self.n - 1 {
            i = self.n - 2;
        }
        Ok((i, t - i as f64))
    }

    /// Conjugate (frequency) grid of the same sample count: spacing
    /// `2*pi / (n * spacing)`, symmetric about zero.
    pub fn conjugate(&self) -> AxisGrid {
        let dw = 2.0 * std::f64::consts::PI / (self.n as f64 * self.spacing());
        let half = 0.5 * (self.n - 1) as f64 * dw;
        AxisGrid { min: -half, max: half, n: self.n }
    }
}

/// Phase-space grid (q, p). Both axes must be symmetric about zero so that
/// Fourier-slice rays through the origin stay on-grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceGrid {
    pub q_axis: AxisGrid,
    pub p_axis: AxisGrid,
}

impl PhaseSpaceGrid {
    pub fn new(q_axis: AxisGrid, p_axis: AxisGrid) -> Result<Self> {
        if !q_axis.is_symmetric() || !p_axis.is_symmetric() {
            return Err(Error::InvalidGrid(
                "phase-space axes must be symmetric about 0".into(),
            ));
        }
        Ok(Self { q_axis, p_axis })
    }

    /// Square grid on [-extent, extent]^2 with n x n samples.
    pub fn square(extent: f64, n: usize) -> Result<Self> {
        let ax = AxisGrid::symmetric(extent, n)?;
        Self::new(ax, ax)
    }
}

/// Real scalar field on a phase-space grid, row-major `(q, p)`.
///
/// Used for Wigner functions; `values[[i, j]] = W(q_i, p_j)`.
#[derive(Debug, Clone)]
pub struct ScalarField2D {
    pub grid: PhaseSpaceGrid,
    pub values: Array2<f64>,
}

/// A sampled Wigner function. Normalization convention throughout the crate:
/// `integral W dq dp / (2 pi) = 1`, so the vacuum peaks at W(0,0) = 2.
pub type WignerField = ScalarField2D;

impl ScalarField2D {
    pub fn new(grid: PhaseSpaceGrid, values: Array2<f64>) -> Result<Self> {
        if values.shape() != [grid.q_axis.n, grid.p_axis.n] {
            return Err(Error::Dimension(format!(
                "field shape {:?} vs grid ({}, {})",
                values.shape(),
                grid.q_axis.n,
                grid.p_axis.n
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("non-finite field value".into()));
        }
        Ok(Self { grid, values })
    }

    /// Sample `f(q, p)` on the grid.
    pub fn sample(grid: PhaseSpaceGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let q = grid.q_axis.values();
        let p = grid.p_axis.values();
        let values =
            Array2::from_shape_fn((grid.q_axis.n, grid.p_axis.n), |(i, j)| f(q[i], p[j]));
        Self { grid, values }
    }

    /// Trapezoidal integral over the full plane.
    pub fn integrate(&self) -> f64 {
        integrate_2d(&self.values, &self.grid.q_axis, &self.grid.p_axis)
    }

    /// Largest absolute difference to another field on the same grid.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Zero-pad symmetrically by `extra` nodes per side at the same spacing.
    ///
    /// Padding refines the conjugate grid of the Fourier transform without
    /// changing its values, which is what ray interpolation off the
    /// transform needs.
    pub fn zero_pad(&self, extra: usize) -> Result<ScalarField2D> {
        let q = self.grid.q_axis;
        let p = self.grid.p_axis;
        let (hq, hp) = (q.spacing(), p.spacing());
        let qa = AxisGrid::new(
            q.min - extra as f64 * hq,
            q.max + extra as f64 * hq,
            q.n + 2 * extra,
        )?;
        let pa = AxisGrid::new(
            p.min - extra as f64 * hp,
            p.max + extra as f64 * hp,
            p.n + 2 * extra,
        )?;
        let mut values = Array2::zeros((qa.n, pa.n));
        for i in 0..q.n {
            for j in 0..p.n {
                values[[i + extra, j + extra]] = self.values[[i, j]];
            }
        }
        ScalarField2D::new(PhaseSpaceGrid::new(qa, pa)?, values)
    }
}

/// Complex field on a pair of axes, row-major `(a, b)`.
#[derive(Debug, Clone)]
pub struct ComplexField2D {
    pub a_axis: AxisGrid,
    pub b_axis: AxisGrid,
    pub values: Array2<C64>,
}

impl ComplexField2D {
    pub fn new(a_axis: AxisGrid, b_axis: AxisGrid, values: Array2<C64>) -> Result<Self> {
        if values.shape() != [a_axis.n, b_axis.n] {
            return Err(Error::Dimension(format!(
                "field shape {:?} vs axes ({}, {})",
                values.shape(),
                a_axis.n,
                b_axis.n
            )));
        }
        Ok(Self { a_axis, b_axis, values })
    }

    pub fn from_real(field: &ScalarField2D) -> Self {
        Self {
            a_axis: field.grid.q_axis,
            b_axis: field.grid.p_axis,
            values: field.values.mapv(|v| C64::new(v, 0.0)),
        }
    }

    /// Eighth-order (8-point Lagrange per axis) interpolation; exact on
    /// tensor-product polynomials up to degree 7 per axis.
    ///
    /// The 8x8 stencil is clamped at grid edges, which degrades smoothly to
    /// lower order there; transform data is decayed near edges in every use
    /// in this crate. The high order matters: samples taken at a fixed
    /// fractional offset from the grid lines (Fourier-slice rays) turn the
    /// pointwise error into a relative bias on whole slices, so it must sit
    /// well below the slice-normalization tolerance.
    pub fn sample_interp8(&self, a: f64, b: f64) -> Result<C64> {
        let (ia, ta) = self.a_axis.locate(a, "a")?;
        let (ib, tb) = self.b_axis.locate(b, "b")?;
        let wa = lagrange8_weights(ta);
        let wb = lagrange8_weights(tb);
        let na = self.a_axis.n as isize;
        let nb = self.b_axis.n as isize;
        let mut acc = C64::new(0.0, 0.0);
        for (da, &wia) in wa.iter().enumerate() {
            let i = (ia as isize + da as isize - 3).clamp(0, na - 1) as usize;
            for (db, &wjb) in wb.iter().enumerate() {
                let j = (ib as isize + db as isize - 3).clamp(0, nb - 1) as usize;
                acc += self.values[[i, j]] * (wia * wjb);
            }
        }
        Ok(acc)
    }
}

/// Lagrange basis weights on the stencil {-3, ..., 4} at offset `t` in
/// [0, 1] from the stencil's fourth node.
#[inline]
pub(crate) fn lagrange8_weights(t: f64) -> [f64; 8] {
    let mut w = [0.0f64; 8];
    for (i, wi) in w.iter_mut().enumerate() {
        let xi = i as f64 - 3.0;
        let mut prod = 1.0;
        for k in 0..8 {
            if k == i {
                continue;
            }
            let xk = k as f64 - 3.0;
            prod *= (t - xk) / (xi - xk);
        }
        *wi = prod;
    }
    w
}

/// Real scalar field on three axes, row-major in axis order.
#[derive(Debug, Clone)]
pub struct ScalarField3D {
    pub axes: [AxisGrid; 3],
    pub values: Array3<f64>,
}

impl ScalarField3D {
    pub fn new(axes: [AxisGrid; 3], values: Array3<f64>) -> Result<Self> {
        if values.shape() != [axes[0].n, axes[1].n, axes[2].n] {
            return Err(Error::Dimension(format!(
                "field shape {:?} vs axes ({}, {}, {})",
                values.shape(),
                axes[0].n,
                axes[1].n,
                axes[2].n
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("non-finite field value".into()));
        }
        Ok(Self { axes, values })
    }

    pub fn sample(axes: [AxisGrid; 3], f: impl Fn(f64, f64, f64) -> f64) -> Self {
        let v0 = axes[0].values();
        let v1 = axes[1].values();
        let v2 = axes[2].values();
        let values = Array3::from_shape_fn((axes[0].n, axes[1].n, axes[2].n), |(i, j, k)| {
            f(v0[i], v1[j], v2[k])
        });
        Self { axes, values }
    }
}

/// Complex field on three axes, same layout as [`ScalarField3D`].
#[derive(Debug, Clone)]
pub struct ComplexField3D {
    pub axes: [AxisGrid; 3],
    pub values: Array3<C64>,
}

/// Trapezoidal rule on a uniform axis; exact for piecewise-linear integrands.
pub fn integrate_1d(field: &[f64], axis: &AxisGrid) -> Result<f64> {
    if field.len() != axis.n {
        return Err(Error::Dimension(format!(
            "field length {} vs axis n {}",
            field.len(),
            axis.n
        )));
    }
    Ok(trapezoid(field.iter().copied(), axis.n) * axis.spacing())
}

/// Trapezoid sum (without the spacing factor) over an iterator of samples.
#[inline]
pub(crate) fn trapezoid(values: impl Iterator<Item = f64>, n: usize) -> f64 {
    let mut sum = 0.0;
    for (k, v) in values.enumerate() {
        let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
        sum += w * v;
    }
    sum
}

/// 2D trapezoidal integral of an array over two axes.
pub fn integrate_2d(values: &Array2<f64>, a_axis: &AxisGrid, b_axis: &AxisGrid) -> f64 {
    let (na, nb) = (a_axis.n, b_axis.n);
    let mut sum = 0.0;
    for i in 0..na {
        let wi = if i == 0 || i == na - 1 { 0.5 } else { 1.0 };
        let mut row = 0.0;
        for j in 0..nb {
            let wj = if j == 0 || j == nb - 1 { 0.5 } else { 1.0 };
            row += wj * values[[i, j]];
        }
        sum += wi * row;
    }
    sum * a_axis.spacing() * b_axis.spacing()
}

/// Trilinear interpolation on a 3D field; exact on trilinear polynomials.
///
/// Out-of-bounds points return the boundary error with the offending
/// coordinate; the characteristic solver catches it and applies
/// zero-extension deliberately.
pub fn interp_trilinear(field: &ScalarField3D, point: [f64; 3]) -> Result<f64> {
    interp_trilinear_raw(&field.axes, &field.values, point)
}

/// [`interp_trilinear`] on borrowed axes and values.
pub fn interp_trilinear_raw(
    axes: &[AxisGrid; 3],
    values: &Array3<f64>,
    point: [f64; 3],
) -> Result<f64> {
    static NAMES: [&str; 3] = ["axis0", "axis1", "axis2"];
    let mut idx = [0usize; 3];
    let mut frac = [0f64; 3];
    for d in 0..3 {
        let (i, t) = axes[d].locate(point[d], NAMES[d])?;
        idx[d] = i;
        frac[d] = t;
    }
    let mut acc = 0.0;
    for c in 0..8usize {
        let (di, dj, dk) = (c & 1, (c >> 1) & 1, (c >> 2) & 1);
        let w = (if di == 1 { frac[0] } else { 1.0 - frac[0] })
            * (if dj == 1 { frac[1] } else { 1.0 - frac[1] })
            * (if dk == 1 { frac[2] } else { 1.0 - frac[2] });
        acc += w * values[[idx[0] + di, idx[1] + dj, idx[2] + dk]];
    }
    Ok(acc)
}
