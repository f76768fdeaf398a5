//! Plain-text serialization: columnar fields, CSV tables, JSON sidecars.
//!
//! All floating-point output uses 17 significant digits so that re-parsed
//! values are bit-identical; identical inputs therefore produce
//! byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{AxisGrid, ScalarField2D};
use crate::moments::{GeneratingFunctionSample, MomentTable};
use crate::tomography::{DensityMatrix, Tomogram};

/// 17-significant-digit rendering (round-trips f64 exactly).
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Sidecar metadata stored next to CSV artifacts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Sidecar {
    pub kind: String,
    pub axes: Vec<AxisMeta>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub formula_notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<serde_json::Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxisMeta {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl AxisMeta {
    pub fn new(name: &str, axis: &AxisGrid) -> Self {
        Self { name: name.into(), min: axis.min, max: axis.max, n: axis.n }
    }

    pub fn to_axis(&self) -> Result<AxisGrid> {
        AxisGrid::new(self.min, self.max, self.n)
    }
}

pub fn write_sidecar(path: &Path, sidecar: &Sidecar) -> Result<()> {
    let json = serde_json::to_string_pretty(sidecar)
        .map_err(|e| Error::Parse(format!("sidecar encode: {e}")))?;
    fs::write(path, json + "\n")?;
    Ok(())
}

pub fn read_sidecar(path: &Path) -> Result<Sidecar> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("sidecar decode: {e}")))
}

/// Columnar text format for 2D fields: one `#`-prefixed header line with the
/// axis metadata, then `q p value` rows.
pub fn write_field2d_columnar(path: &Path, field: &ScalarField2D) -> Result<()> {
    let q = &field.grid.q_axis;
    let p = &field.grid.p_axis;
    let mut out = String::new();
    writeln!(
        out,
        "# q_min={} q_max={} q_n={} p_min={} p_max={} p_n={} columns=q,p,value",
        fmt17(q.min),
        fmt17(q.max),
        q.n,
        fmt17(p.min),
        fmt17(p.max),
        p.n
    )
    .unwrap();
    for (i, &qi) in q.values().iter().enumerate() {
        for (j, &pj) in p.values().iter().enumerate() {
            writeln!(out, "{} {} {}", fmt17(qi), fmt17(pj), fmt17(field.values[[i, j]]))
                .unwrap();
        }
    }
    fs::write(path, out)?;
    Ok(())
}

/// CSV rendering of a 2D field: `q,p,value` with a header row.
pub fn write_field2d_csv(path: &Path, field: &ScalarField2D) -> Result<()> {
    let q = field.grid.q_axis.values();
    let p = field.grid.p_axis.values();
    let mut out = String::from("q,p,value\n");
    for (i, &qi) in q.iter().enumerate() {
        for (j, &pj) in p.iter().enumerate() {
            writeln!(out, "{},{},{}", fmt17(qi), fmt17(pj), fmt17(field.values[[i, j]]))
                .unwrap();
        }
    }
    fs::write(path, out)?;
    Ok(())
}

/// CSV rendering of a tomogram. Full grids emit `x,mu,nu,value`; sliced
/// tomograms emit `frame,mu,nu,delta,x,value`.
pub fn write_tomogram_csv(path: &Path, tomogram: &Tomogram) -> Result<()> {
    let mut out = String::new();
    match tomogram {
        Tomogram::FullGrid { x_axis, mu_axis, nu_axis, values } => {
            out.push_str("x,mu,nu,value\n");
            let xs = x_axis.values();
            let mus = mu_axis.values();
            let nus = nu_axis.values();
            for (i, &x) in xs.iter().enumerate() {
                for (m, &mu) in mus.iter().enumerate() {
                    for (l, &nu) in nus.iter().enumerate() {
                        writeln!(
                            out,
                            "{},{},{},{}",
                            fmt17(x),
                            fmt17(mu),
                            fmt17(nu),
                            fmt17(values[[i, m, l]])
                        )
                        .unwrap();
                    }
                }
            }
        }
        Tomogram::FrameSliced { frames, x_axis, values } => {
            out.push_str("frame,mu,nu,delta,x,value\n");
            let xs = x_axis.values();
            for (f, frame) in frames.iter().enumerate() {
                for (i, &x) in xs.iter().enumerate() {
                    writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        f,
                        fmt17(frame.mu),
                        fmt17(frame.nu),
                        fmt17(frame.delta),
                        fmt17(x),
                        fmt17(values[[f, i]])
                    )
                    .unwrap();
                }
            }
        }
    }
    fs::write(path, out)?;
    Ok(())
}

/// Re-read a full-grid tomogram CSV using its sidecar for the axes.
pub fn read_full_grid_tomogram_csv(path: &Path, sidecar: &Sidecar) -> Result<Tomogram> {
    if sidecar.axes.len() != 3 {
        return Err(Error::Parse("sidecar does not describe a full-grid tomogram".into()));
    }
    let x_axis = sidecar.axes[0].to_axis()?;
    let mu_axis = sidecar.axes[1].to_axis()?;
    let nu_axis = sidecar.axes[2].to_axis()?;
    let text = fs::read_to_string(path)?;
    let mut values = ndarray::Array3::zeros((x_axis.n, mu_axis.n, nu_axis.n));
    let mut row = 0usize;
    for line in text.lines().skip(1) {
        if line.is_empty() {
            continue;
        }
        let v: f64 = line
            .rsplit(',')
            .next()
            .ok_or_else(|| Error::Parse(format!("bad row: {line}")))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad value in row {row}: {e}")))?;
        let l = row % nu_axis.n;
        let m = (row / nu_axis.n) % mu_axis.n;
        let i = row / (nu_axis.n * mu_axis.n);
        if i >= x_axis.n {
            return Err(Error::Parse("too many rows".into()));
        }
        values[[i, m, l]] = v;
        row += 1;
    }
    if row != x_axis.n * mu_axis.n * nu_axis.n {
        return Err(Error::Parse(format!("expected {} rows, got {row}", values.len())));
    }
    Ok(Tomogram::FullGrid { x_axis, mu_axis, nu_axis, values })
}

/// CSV rendering of a density matrix: `q_row,q_col,re,im`.
pub fn write_density_csv(path: &Path, rho: &DensityMatrix) -> Result<()> {
    let q = rho.q_axis.values();
    let mut out = String::from("q_row,q_col,re,im\n");
    for (i, &qi) in q.iter().enumerate() {
        for (j, &qj) in q.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{}",
                fmt17(qi),
                fmt17(qj),
                fmt17(rho.values[[i, j]].re),
                fmt17(rho.values[[i, j]].im)
            )
            .unwrap();
        }
    }
    fs::write(path, out)?;
    Ok(())
}

/// CSV rendering of moment tables: `mu,nu,delta,n,moment`.
pub fn write_moments_csv(path: &Path, tables: &[MomentTable]) -> Result<()> {
    let mut out = String::from("mu,nu,delta,n,moment\n");
    for t in tables {
        for (n, m) in t.moments.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt17(t.frame.mu),
                fmt17(t.frame.nu),
                fmt17(t.frame.delta),
                n,
                fmt17(*m)
            )
            .unwrap();
        }
    }
    fs::write(path, out)?;
    Ok(())
}

/// CSV rendering of generating-function samples: `lambda,mu,nu,delta,re,im`.
pub fn write_generating_csv(path: &Path, samples: &[GeneratingFunctionSample]) -> Result<()> {
    let mut out = String::from("lambda,mu,nu,delta,re,im\n");
    for s in samples {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt17(s.lambda),
            fmt17(s.frame.mu),
            fmt17(s.frame.nu),
            fmt17(s.frame.delta),
            fmt17(s.re),
            fmt17(s.im)
        )
        .unwrap();
    }
    fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::PhaseSpaceGrid;
    use crate::states::{analytic_tomogram, StateSpec};

    #[test]
    fn field_roundtrip_17_digits() {
        let dir = std::env::temp_dir().join("qtomo_io_test");
        fs::create_dir_all(&dir).unwrap();
        let grid = PhaseSpaceGrid::square(2.0, 8).unwrap();
        let f = ScalarField2D::sample(grid, |q, p| (q * 1.1 + p / 3.0).sin());
        let path = dir.join("field.csv");
        write_field2d_csv(&path, &f).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let first = text.lines().nth(1).unwrap();
        let v: f64 = first.rsplit(',').next().unwrap().parse().unwrap();
        assert_eq!(v, f.values[[0, 0]]);
    }

    #[test]
    fn tomogram_csv_reload() {
        let dir = std::env::temp_dir().join("qtomo_io_test");
        fs::create_dir_all(&dir).unwrap();
        let xa = AxisGrid::symmetric(6.0, 16).unwrap();
        let ma = AxisGrid::symmetric(2.0, 8).unwrap();
        let tom = analytic_tomogram(&StateSpec::Ground, &xa, &ma, &ma, 0.0).unwrap();
        let csv = dir.join("tom.csv");
        write_tomogram_csv(&csv, &tom).unwrap();
        let sidecar = Sidecar {
            kind: "tomogram_full_grid".into(),
            axes: vec![
                AxisMeta::new("x", &xa),
                AxisMeta::new("mu", &ma),
                AxisMeta::new("nu", &ma),
            ],
            state: None,
            formula_notes: vec![],
            diagnostics: None,
        };
        let side = dir.join("tom.json");
        write_sidecar(&side, &sidecar).unwrap();
        let reread = read_full_grid_tomogram_csv(&csv, &read_sidecar(&side).unwrap()).unwrap();
        let (_, _, _, a) = tom.as_full_grid().unwrap();
        let (_, _, _, b) = reread.as_full_grid().unwrap();
        assert_eq!(a, b);
    }
}
