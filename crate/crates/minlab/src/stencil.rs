//! Finite-difference stencils on square grids.
//!
//! First derivatives use the 4th-order central stencil in the interior and
//! 4th-order one-sided stencils on the two outermost lines, so first-derivative
//! fields cover the full grid.  The Laplacian comes in two flavours: the
//! classical 2nd-order 5-point stencil (interior only, used by curvature-class
//! residuals) and a 4th-order stencil with one-sided closures (used for
//! `h_{w wbar} = Delta h / 4` in the harmonic-map residual, where 4th-order
//! accuracy is required).

use crate::grid::{ComplexField, Field, GridDomain, RealField};
use crate::scalar::{Real, C};
use num_traits::Zero;
use std::ops::{Add, Mul, Sub};

/// Value types the stencils operate on (reals and complex numbers).
pub trait Lin<R: Real>:
    Copy + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<R, Output = Self>
{
}
impl<R: Real> Lin<R> for R {}
impl<R: Real> Lin<R> for C<R> {}

// 4th-order first derivative: central (1, -8, 0, 8, -1)/12 and one-sided rows.
const D1_EDGE0: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];
const D1_EDGE1: [f64; 5] = [-3.0, -10.0, 18.0, -6.0, 1.0];

// 4th-order second derivative: central (-1, 16, -30, 16, -1)/12 and
// one-sided 6-point rows.
const D2_EDGE0: [f64; 6] = [45.0, -154.0, 214.0, -156.0, 61.0, -10.0];
const D2_EDGE1: [f64; 6] = [10.0, -15.0, -4.0, 14.0, -6.0, 1.0];

fn line_d1<R: Real, T: Lin<R>>(src: &[T], dst: &mut [T], stride: usize, n: usize, inv_h: R) {
    let g = |k: usize| src[k * stride];
    let twelfth = inv_h / R::lit(12.0);
    let c8 = R::lit(8.0);
    for k in 2..n - 2 {
        dst[k * stride] =
            (g(k - 2) - g(k + 2) + (g(k + 1) - g(k - 1)) * c8) * twelfth;
    }
    let edge = |coef: &[f64; 5], at: usize, flip: bool| {
        let mut acc = T::zero();
        for (m, &c) in coef.iter().enumerate() {
            let k = if flip { n - 1 - m } else { m };
            acc = acc + g(k) * R::lit(c);
        }
        let s = if flip { -R::one() } else { R::one() };
        (at, acc * (twelfth * s))
    };
    for (at, val) in [
        edge(&D1_EDGE0, 0, false),
        edge(&D1_EDGE1, 1, false),
        edge(&D1_EDGE0, n - 1, true),
        edge(&D1_EDGE1, n - 2, true),
    ] {
        dst[at * stride] = val;
    }
}

fn line_d2<R: Real, T: Lin<R>>(src: &[T], dst: &mut [T], stride: usize, n: usize, inv_h2: R) {
    let g = |k: usize| src[k * stride];
    let twelfth = inv_h2 / R::lit(12.0);
    let c16 = R::lit(16.0);
    let c30 = R::lit(30.0);
    for k in 2..n - 2 {
        dst[k * stride] =
            ((g(k - 1) + g(k + 1)) * c16 - g(k) * c30 - g(k - 2) - g(k + 2)) * twelfth;
    }
    let edge = |coef: &[f64; 6], at: usize, flip: bool| {
        let mut acc = T::zero();
        for (m, &c) in coef.iter().enumerate() {
            let k = if flip { n - 1 - m } else { m };
            acc = acc + g(k) * R::lit(c);
        }
        (at, acc * twelfth)
    };
    for (at, val) in [
        edge(&D2_EDGE0, 0, false),
        edge(&D2_EDGE1, 1, false),
        edge(&D2_EDGE0, n - 1, true),
        edge(&D2_EDGE1, n - 2, true),
    ] {
        dst[at * stride] = val;
    }
}

fn apply_axis<R: Real, T: Lin<R>>(
    grid: &GridDomain<R>,
    values: &[T],
    along_u: bool,
    second: bool,
) -> Vec<T> {
    let mut out = vec![T::zero(); values.len()];
    let h = grid.spacing();
    let w = if second { (h * h).recip() } else { h.recip() };
    if along_u {
        for j in 0..grid.n_v {
            let row = j * grid.n_u;
            let (src, dst) = (&values[row..row + grid.n_u], &mut out[row..row + grid.n_u]);
            if second {
                line_d2(src, dst, 1, grid.n_u, w);
            } else {
                line_d1(src, dst, 1, grid.n_u, w);
            }
        }
    } else {
        for i in 0..grid.n_u {
            if second {
                line_d2(&values[i..], &mut out[i..], grid.n_u, grid.n_v, w);
            } else {
                line_d1(&values[i..], &mut out[i..], grid.n_u, grid.n_v, w);
            }
        }
    }
    out
}

pub fn derivative_u<R: Real, T: Lin<R>>(f: &Field<R, T>) -> Field<R, T> {
    Field::new(f.grid, apply_axis(&f.grid, &f.values, true, false))
}

pub fn derivative_v<R: Real, T: Lin<R>>(f: &Field<R, T>) -> Field<R, T> {
    Field::new(f.grid, apply_axis(&f.grid, &f.values, false, false))
}

/// Wirtinger derivatives of a complex field:
/// `f_w = (f_u - i f_v)/2`, `f_wbar = (f_u + i f_v)/2`.
pub fn wirtinger<R: Real>(f: &ComplexField<R>) -> (ComplexField<R>, ComplexField<R>) {
    let fu = derivative_u(f);
    let fv = derivative_v(f);
    let half = R::lit(0.5);
    let i = C::new(R::zero(), R::one());
    let mut fw = Vec::with_capacity(f.values.len());
    let mut fwb = Vec::with_capacity(f.values.len());
    for (&u, &v) in fu.values.iter().zip(&fv.values) {
        fw.push((u - i * v) * half);
        fwb.push((u + i * v) * half);
    }
    (Field::new(f.grid, fw), Field::new(f.grid, fwb))
}

/// `f_w` of a real field (`f_wbar` is its conjugate).
pub fn wirtinger_real<R: Real>(f: &RealField<R>) -> ComplexField<R> {
    let fu = derivative_u(f);
    let fv = derivative_v(f);
    let half = R::lit(0.5);
    let vals = fu
        .values
        .iter()
        .zip(&fv.values)
        .map(|(&u, &v)| C::new(u * half, -v * half))
        .collect();
    Field::new(f.grid, vals)
}

/// `(omega + i psi)_wbar` for a pair of real fields.
pub fn wirtinger_bar_pair<R: Real>(omega: &RealField<R>, psi: &RealField<R>) -> ComplexField<R> {
    let w = Field::new(
        omega.grid,
        omega
            .values
            .iter()
            .zip(&psi.values)
            .map(|(&o, &p)| C::new(o, p))
            .collect(),
    );
    wirtinger(&w).1
}

/// 4th-order Laplacian with one-sided closures (full grid coverage).
pub fn laplacian4<R: Real, T: Lin<R>>(f: &Field<R, T>) -> Field<R, T> {
    let uu = apply_axis(&f.grid, &f.values, true, true);
    let vv = apply_axis(&f.grid, &f.values, false, true);
    Field::new(f.grid, uu.iter().zip(&vv).map(|(&a, &b)| a + b).collect())
}

/// Classical 2nd-order 5-point Laplacian.  Returns the values together with
/// an interior mask (the outermost ring carries no stencil).
pub fn laplacian5<R: Real, T: Lin<R>>(f: &Field<R, T>) -> (Field<R, T>, Vec<bool>) {
    let g = f.grid;
    let mut out = vec![T::zero(); g.len()];
    let mut mask = vec![false; g.len()];
    let inv_h2 = (g.spacing() * g.spacing()).recip();
    let four = R::lit(4.0);
    for j in 1..g.n_v - 1 {
        for i in 1..g.n_u - 1 {
            let k = g.idx(i, j);
            let s = f.values[k - 1] + f.values[k + 1] + f.values[k - g.n_u] + f.values[k + g.n_u]
                - f.values[k] * four;
            out[k] = s * inv_h2;
            mask[k] = true;
        }
    }
    (Field::new(g, out), mask)
}

/// 2nd-order pure second derivatives and the mixed derivative, interior only.
pub fn second_derivatives2<R: Real, T: Lin<R>>(
    f: &Field<R, T>,
) -> (Field<R, T>, Field<R, T>, Field<R, T>, Vec<bool>) {
    let g = f.grid;
    let mut duu = vec![T::zero(); g.len()];
    let mut dvv = vec![T::zero(); g.len()];
    let mut duv = vec![T::zero(); g.len()];
    let mut mask = vec![false; g.len()];
    let inv_h2 = (g.spacing() * g.spacing()).recip();
    let two = R::lit(2.0);
    let quarter = R::lit(0.25);
    for j in 1..g.n_v - 1 {
        for i in 1..g.n_u - 1 {
            let k = g.idx(i, j);
            duu[k] = (f.values[k - 1] + f.values[k + 1] - f.values[k] * two) * inv_h2;
            dvv[k] = (f.values[k - g.n_u] + f.values[k + g.n_u] - f.values[k] * two) * inv_h2;
            duv[k] = (f.values[k + g.n_u + 1] + f.values[k - g.n_u - 1]
                - f.values[k + g.n_u - 1]
                - f.values[k - g.n_u + 1])
                * (inv_h2 * quarter);
            mask[k] = true;
        }
    }
    (
        Field::new(g, duu),
        Field::new(g, dvv),
        Field::new(g, duv),
        mask,
    )
}

/// 4th-order cumulative integral of uniformly sampled values: returns
/// `I[k] = \int_{x_0}^{x_k} f` with `I[0] = 0`.
///
/// Odd prefixes chain composite Simpson onto a 4-point Adams-Moulton first
/// step, even prefixes chain Simpson directly.
pub fn cumulative_integral<R: Real, T: Lin<R>>(vals: &[T], h: R) -> Vec<T> {
    let n = vals.len();
    assert!(n >= 4, "cumulative integral needs at least 4 samples");
    let mut out = vec![T::zero(); n];
    // I[1] by the 4-point end rule: h (9 f0 + 19 f1 - 5 f2 + f3) / 24.
    out[1] = (vals[0] * R::lit(9.0) + vals[1] * R::lit(19.0) - vals[2] * R::lit(5.0) + vals[3])
        * (h / R::lit(24.0));
    let third = h / R::lit(3.0);
    let four = R::lit(4.0);
    for k in 2..n {
        out[k] = out[k - 2] + (vals[k - 2] + vals[k - 1] * four + vals[k]) * third;
    }
    out
}

/// Max over grid cells of the circulation of the 1-form
/// `a dw + b dwbar` computed edgewise by the trapezoid rule.
/// For exact closed forms opposite-edge errors cancel to `O(h^4)` per cell.
pub fn max_cell_circulation<R: Real>(
    grid: &GridDomain<R>,
    a: &[C<R>],
    b: &[C<R>],
) -> R {
    let h = grid.spacing();
    let half = R::lit(0.5);
    let i = C::new(R::zero(), R::one());
    let mut worst = R::zero();
    for j in 0..grid.n_v - 1 {
        for i0 in 0..grid.n_u - 1 {
            let k00 = grid.idx(i0, j);
            let k10 = k00 + 1;
            let k11 = k10 + grid.n_u;
            let k01 = k00 + grid.n_u;
            // dw along the four oriented edges: +h, +ih, -h, -ih
            let e = |ka: usize, kb: usize, dw: C<R>| {
                ((a[ka] + a[kb]) * dw + (b[ka] + b[kb]) * dw.conj()) * half
            };
            let circ = e(k00, k10, C::new(h, R::zero()))
                + e(k10, k11, i * h)
                + e(k11, k01, C::new(-h, R::zero()))
                + e(k01, k00, i * (-h));
            worst = worst.max(circ.norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridDomain;

    fn grid(n: usize) -> GridDomain<f64> {
        GridDomain::square(-1.0, 1.0, n).unwrap()
    }

    #[test]
    fn wirtinger_holomorphic_identity() {
        let g = grid(33);
        let f = ComplexField::from_fn(g, |w| w);
        let (fw, fwb) = wirtinger(&f);
        for k in 0..g.len() {
            assert!((fw.values[k] - C::new(1.0, 0.0)).norm() < 1e-12);
            assert!(fwb.values[k].norm() < 1e-12);
        }
        let fc = ComplexField::from_fn(g, |w| w.conj());
        let (fw, fwb) = wirtinger(&fc);
        for k in 0..g.len() {
            assert!(fw.values[k].norm() < 1e-12);
            assert!((fwb.values[k] - C::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn wirtinger_quadratic_exact() {
        // 4th-order stencils are exact on polynomials of degree <= 4.
        let g = GridDomain::square(-1.0, 1.0, 65).unwrap();
        let f = ComplexField::from_fn(g, |w| w * w);
        let (fw, _) = wirtinger(&f);
        for j in 0..g.n_v {
            for i in 0..g.n_u {
                let w = g.point(i, j);
                assert!((fw.at(i, j) - w * 2.0).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn laplacian4_converges_at_fourth_order() {
        let residual = |n: usize| {
            let g = grid(n);
            let f = RealField::from_fn(g, |w| (2.0 * w.re).sin() * (3.0 * w.im).cos());
            let lap = laplacian4(&f);
            let mut worst = 0.0f64;
            for j in 0..g.n_v {
                for i in 0..g.n_u {
                    let w = g.point(i, j);
                    let exact = -13.0 * (2.0 * w.re).sin() * (3.0 * w.im).cos();
                    worst = worst.max((lap.at(i, j) - exact).abs());
                }
            }
            worst
        };
        let (r1, r2) = (residual(65), residual(129));
        assert!(r1 / r2 > 12.0, "expected ~16x shrink, got {}", r1 / r2);
    }

    #[test]
    fn laplacian5_second_order() {
        let residual = |n: usize| {
            let g = grid(n);
            let f = RealField::from_fn(g, |w| (w.re * w.im).exp());
            let (lap, mask) = laplacian5(&f);
            let mut worst = 0.0f64;
            for j in 0..g.n_v {
                for i in 0..g.n_u {
                    if !mask[g.idx(i, j)] {
                        continue;
                    }
                    let (x, y) = (g.u(i), g.v(j));
                    let exact = (x * y).exp() * (x * x + y * y);
                    worst = worst.max((lap.at(i, j) - exact).abs());
                }
            }
            worst
        };
        let (r1, r2) = (residual(65), residual(129));
        assert!(r1 / r2 > 3.4 && r1 / r2 < 4.6, "got {}", r1 / r2);
    }

    #[test]
    fn cumulative_integral_quartic() {
        // exact antiderivative comparison for a cubic (4th-order rule is exact)
        let n = 41;
        let h = 0.05;
        let vals: Vec<f64> = (0..n).map(|k| {
            let x = k as f64 * h;
            3.0 * x * x - 2.0 * x + 1.0
        }).collect();
        let out = cumulative_integral(&vals, h);
        for k in 0..n {
            let x = k as f64 * h;
            let exact = x * x * x - x * x + x;
            assert!((out[k] - exact).abs() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn circulation_of_closed_form_vanishes() {
        // trapezoid edge errors cancel around each cell to O(h^4)
        let defect = |n: usize| {
            let g = grid(n);
            let a = ComplexField::from_fn(g, |w| (w * C::new(0.3, 0.1)).exp());
            let b = vec![C::new(0.0, 0.0); g.len()];
            max_cell_circulation(&g, &a.values, &b)
        };
        let (c, f) = (defect(33), defect(65));
        assert!(c < 1e-6, "defect {c}");
        assert!(c / f > 10.0, "ratio {}", c / f);
    }
}
