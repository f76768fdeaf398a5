// scratch: mass conservation of the damped splitting
use qtomo::evolution::{evolve_damped, DampingSpec};
use qtomo::grid::{integrate_1d, AxisGrid};
use qtomo::states::{analytic_tomogram, StateSpec};

fn line_norm(tom: &qtomo::Tomogram, m: usize, l: usize) -> f64 {
    let (xa, _, _, vals) = tom.as_full_grid().unwrap();
    let line: Vec<f64> = (0..xa.n).map(|i| vals[[i, m, l]]).collect();
    integrate_1d(&line, xa).unwrap()
}

fn main() {
    let xa = AxisGrid::symmetric(8.0, 97).unwrap();
    let fa = AxisGrid::symmetric(2.5, 41).unwrap();
    let damping = DampingSpec { gamma: 1.0, n_bar: 0.0 };
    let t = 2.0 * (2.0f64).ln();
    for st in [StateSpec::Ground, StateSpec::Coherent { q0: 1.0, p0: 0.0 }] {
        let w0 = analytic_tomogram(&st, &xa, &fa, &fa, 0.0).unwrap();
        let wt = evolve_damped(&w0, &damping, t, 420).unwrap();
        // frame (1, 0) at indices (28, 20); frame (2.5, 0) at (40, 20)
        println!(
            "{:?}: norm(1,0) before {:.8} after {:.8}; norm(2.5,0) after {:.8}; norm(0.125,0) after {:.8}",
            st,
            line_norm(&w0, 28, 20),
            line_norm(&wt, 28, 20),
            line_norm(&wt, 40, 20),
            line_norm(&wt, 21, 20),
        );
    }
}
