//! Interpolation of grid fields: cubic Lagrange along grid lines (for the
//! associate march) and separable bicubic for curve sampling in `analysis`.
//! Both interpolate degree-3 polynomials exactly, giving `O(h^4)` accuracy on
//! smooth fields.

use crate::grid::{Field, GridDomain};
use crate::scalar::Real;
use crate::stencil::Lin;

/// Cubic Lagrange weights for evaluation at offset `t in [0, 1]` between
/// nodes 1 and 2 of a 4-node window.
#[inline]
fn cubic_weights<R: Real>(t: R) -> [R; 4] {
    let one = R::one();
    let two = R::lit(2.0);
    let six = R::lit(6.0);
    [
        -t * (t - one) * (t - two) / six,
        (t + one) * (t - one) * (t - two) / two,
        -(t + one) * t * (t - two) / two,
        (t + one) * t * (t - one) / six,
    ]
}

/// Window base index and local offset for coordinate `x` on an `n`-node line
/// starting at `x0` with spacing `h`.
#[inline]
fn window<R: Real>(x: R, x0: R, h: R, n: usize) -> (usize, R) {
    let s = (x - x0) / h;
    let mut cell = s.floor().to_f64().unwrap_or(0.0) as isize;
    cell = cell.clamp(1, n as isize - 3) - 1; // window start = cell - 1
    let base = cell as usize;
    let t = s - R::from_usize(base + 1).unwrap();
    (base, t)
}

/// Interpolates a field sampled along one grid line (values indexed 0..n).
pub fn line_interp<R: Real, T: Lin<R>>(vals: &[T], x0: R, h: R, x: R) -> T {
    let (base, t) = window(x, x0, h, vals.len());
    let w = cubic_weights(t);
    let mut acc = T::zero();
    for k in 0..4 {
        acc = acc + vals[base + k] * w[k];
    }
    acc
}

/// Separable bicubic interpolation over a 4x4 node window.
pub struct Interp2<'a, R: Real, T> {
    field: &'a Field<R, T>,
}

impl<'a, R: Real, T: Lin<R>> Interp2<'a, R, T> {
    pub fn new(field: &'a Field<R, T>) -> Self {
        Self { field }
    }

    pub fn grid(&self) -> &GridDomain<R> {
        &self.field.grid
    }

    pub fn eval(&self, u: R, v: R) -> T {
        let g = &self.field.grid;
        let h = g.spacing();
        let (bi, tu) = window(u, g.u_min, h, g.n_u);
        let (bj, tv) = window(v, g.v_min, h, g.n_v);
        let wu = cubic_weights(tu);
        let wv = cubic_weights(tv);
        let mut acc = T::zero();
        for dj in 0..4 {
            let mut row = T::zero();
            let off = (bj + dj) * g.n_u + bi;
            for di in 0..4 {
                row = row + self.field.values[off + di] * wu[di];
            }
            acc = acc + row * wv[dj];
        }
        acc
    }

    /// True if `(u, v)` lies inside the grid rectangle.
    pub fn contains(&self, u: R, v: R) -> bool {
        let g = &self.field.grid;
        u >= g.u_min && u <= g.u_max && v >= g.v_min && v <= g.v_max
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{GridDomain, RealField};

    #[test]
    fn cubic_exact_on_cubics() {
        let vals: Vec<f64> = (0..9).map(|k| {
            let x = k as f64 * 0.5 - 2.0;
            x * x * x - x + 2.0
        }).collect();
        for &x in &[-1.87, -0.3, 0.77, 1.99] {
            let got = line_interp(&vals, -2.0, 0.5, x);
            let exact = x * x * x - x + 2.0;
            assert!((got - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn bicubic_fourth_order() {
        let err = |n: usize| {
            let g = GridDomain::square(-1.0f64, 1.0, n).unwrap();
            let f = RealField::from_fn(g, |w| (1.7 * w.re).sin() * (1.3 * w.im).cos());
            let it = Interp2::new(&f);
            let mut worst = 0.0f64;
            for k in 0..200 {
                let u = -0.95 + 1.9 * (k as f64 * 0.618).fract();
                let v = -0.95 + 1.9 * (k as f64 * 0.414).fract();
                let exact = (1.7 * u).sin() * (1.3 * v).cos();
                worst = worst.max((it.eval(u, v) - exact).abs());
            }
            worst
        };
        let (c, f) = (err(33), err(65));
        assert!(c / f > 10.0, "ratio {}", c / f);
    }
}
