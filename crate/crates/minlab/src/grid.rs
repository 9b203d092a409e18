//! Rectangular sample grids in the `w = u + iv` parameter plane and the
//! scalar/complex fields living on them.
//!
//! Values are stored row-major: index `j * n_u + i` holds the sample at
//! `(u_i, v_j)`.  Grids are always rectangles with square cells, hence simply
//! connected, which is what path integration and branch unwrapping rely on.

use crate::error::{Error, Result};
use crate::scalar::{Real, C};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridDomain<R: Real> {
    pub u_min: R,
    pub u_max: R,
    pub v_min: R,
    pub v_max: R,
    pub n_u: usize,
    pub n_v: usize,
}

impl<R: Real> GridDomain<R> {
    pub fn new(u_min: R, u_max: R, v_min: R, v_max: R, n_u: usize, n_v: usize) -> Result<Self> {
        if n_u < 9 || n_v < 9 {
            return Err(Error::GridTooSmall { n_u, n_v });
        }
        let du = (u_max - u_min) / R::from_usize(n_u - 1).unwrap();
        let dv = (v_max - v_min) / R::from_usize(n_v - 1).unwrap();
        let tol = R::lit(1e-12) * du.abs().max(R::one());
        if (du - dv).abs() > tol || du <= R::zero() {
            return Err(Error::NonSquareCells {
                du: du.to_f64().unwrap_or(f64::NAN),
                dv: dv.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { u_min, u_max, v_min, v_max, n_u, n_v })
    }

    /// Square grid `[lo, hi]^2` with `n` samples per side.
    pub fn square(lo: R, hi: R, n: usize) -> Result<Self> {
        Self::new(lo, hi, lo, hi, n, n)
    }

    #[inline]
    pub fn spacing(&self) -> R {
        (self.u_max - self.u_min) / R::from_usize(self.n_u - 1).unwrap()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n_u * self.n_v
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.n_u + i
    }

    #[inline]
    pub fn u(&self, i: usize) -> R {
        self.u_min + self.spacing() * R::from_usize(i).unwrap()
    }

    #[inline]
    pub fn v(&self, j: usize) -> R {
        self.v_min + self.spacing() * R::from_usize(j).unwrap()
    }

    #[inline]
    pub fn point(&self, i: usize, j: usize) -> C<R> {
        C::new(self.u(i), self.v(j))
    }

    /// Index pair of the anchor sample (grid center, rounded down).
    #[inline]
    pub fn center(&self) -> (usize, usize) {
        ((self.n_u - 1) / 2, (self.n_v - 1) / 2)
    }

    /// True if `(i, j)` is at least `margin` samples away from every edge.
    #[inline]
    pub fn is_interior(&self, i: usize, j: usize, margin: usize) -> bool {
        i >= margin && j >= margin && i + margin < self.n_u && j + margin < self.n_v
    }

    /// Same physical rectangle with `2n - 1` samples per side (halved spacing).
    pub fn refined(&self) -> Result<Self> {
        Self::new(
            self.u_min,
            self.u_max,
            self.v_min,
            self.v_max,
            2 * self.n_u - 1,
            2 * self.n_v - 1,
        )
    }
}

/// Field of values of type `T` sampled on a grid.
#[derive(Clone, Debug)]
pub struct Field<R: Real, T> {
    pub grid: GridDomain<R>,
    pub values: Vec<T>,
}

pub type RealField<R> = Field<R, R>;
pub type ComplexField<R> = Field<R, C<R>>;

impl<R: Real, T: Copy> Field<R, T> {
    pub fn new(grid: GridDomain<R>, values: Vec<T>) -> Self {
        assert_eq!(values.len(), grid.len(), "field length must match grid");
        Self { grid, values }
    }

    pub fn from_fn(grid: GridDomain<R>, mut f: impl FnMut(C<R>) -> T) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.n_v {
            for i in 0..grid.n_u {
                values.push(f(grid.point(i, j)));
            }
        }
        Self { grid, values }
    }

    pub fn constant(grid: GridDomain<R>, value: T) -> Self {
        Self { grid, values: vec![value; grid.len()] }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> T {
        self.values[self.grid.idx(i, j)]
    }

    pub fn map<U: Copy>(&self, f: impl Fn(T) -> U) -> Field<R, U> {
        Field { grid: self.grid, values: self.values.iter().map(|&v| f(v)).collect() }
    }
}

impl<R: Real> ComplexField<R> {
    /// Largest sample modulus.
    pub fn linf(&self) -> R {
        self.values.iter().fold(R::zero(), |m, v| m.max(v.norm()))
    }
}

impl<R: Real> RealField<R> {
    pub fn linf(&self) -> R {
        self.values.iter().fold(R::zero(), |m, v| m.max(v.abs()))
    }
}

/// Nonnegative residual samples with a validity mask (stencil margins and
/// degenerate samples are masked out rather than reported as zeros).
#[derive(Clone, Debug)]
pub struct ResidualField<R: Real> {
    pub grid: GridDomain<R>,
    pub values: Vec<R>,
    pub mask: Vec<bool>,
}

impl<R: Real> ResidualField<R> {
    pub fn new(grid: GridDomain<R>, values: Vec<R>, mask: Vec<bool>) -> Self {
        assert_eq!(values.len(), grid.len());
        assert_eq!(mask.len(), grid.len());
        Self { grid, values, mask }
    }

    pub fn full(grid: GridDomain<R>, values: Vec<R>) -> Self {
        let mask = vec![true; values.len()];
        Self::new(grid, values, mask)
    }

    /// Number of valid samples.
    pub fn valid_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    /// Max norm over valid samples.
    pub fn linf(&self) -> R {
        let mut m = R::zero();
        for (v, &ok) in self.values.iter().zip(&self.mask) {
            if ok {
                m = m.max(v.abs());
            }
        }
        m
    }

    /// Root-mean-square over valid samples.
    pub fn l2(&self) -> R {
        let mut s = R::zero();
        let mut n = 0usize;
        for (v, &ok) in self.values.iter().zip(&self.mask) {
            if ok {
                s += *v * *v;
                n += 1;
            }
        }
        if n == 0 {
            R::zero()
        } else {
            (s / R::from_usize(n).unwrap()).sqrt()
        }
    }

    /// Max norm restricted to samples whose coordinates satisfy `keep`.
    /// Used by refinement studies to compare norms over a common subdomain.
    pub fn linf_where(&self, mut keep: impl FnMut(R, R) -> bool) -> R {
        let mut m = R::zero();
        for j in 0..self.grid.n_v {
            for i in 0..self.grid.n_u {
                let k = self.grid.idx(i, j);
                if self.mask[k] && keep(self.grid.u(i), self.grid.v(j)) {
                    m = m.max(self.values[k].abs());
                }
            }
        }
        m
    }

    /// Intersects the mask with another one in place.
    pub fn intersect_mask(&mut self, other: &[bool]) {
        assert_eq!(other.len(), self.mask.len());
        for (m, &o) in self.mask.iter_mut().zip(other) {
            *m = *m && o;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_and_non_square() {
        assert!(matches!(
            GridDomain::<f64>::new(0.0, 1.0, 0.0, 1.0, 4, 16),
            Err(Error::GridTooSmall { .. })
        ));
        assert!(matches!(
            GridDomain::<f64>::new(0.0, 1.0, 0.0, 2.0, 9, 9),
            Err(Error::NonSquareCells { .. })
        ));
    }

    #[test]
    fn indexing_row_major() {
        let g = GridDomain::<f64>::square(-1.0, 1.0, 9).unwrap();
        assert_eq!(g.idx(3, 2), 2 * 9 + 3);
        assert!((g.u(8) - 1.0).abs() < 1e-15);
        assert!((g.spacing() - 0.25).abs() < 1e-15);
        assert_eq!(g.center(), (4, 4));
    }

    #[test]
    fn refined_grid_nests() {
        let g = GridDomain::<f64>::square(-0.6, 0.6, 129).unwrap();
        let f = g.refined().unwrap();
        assert_eq!(f.n_u, 257);
        // every coarse sample is a fine sample
        assert!((f.u(2) - g.u(1)).abs() < 1e-15);
    }

    #[test]
    fn residual_norms_respect_mask() {
        let g = GridDomain::<f64>::square(0.0, 1.0, 9).unwrap();
        let mut vals = vec![1.0; g.len()];
        vals[0] = 100.0;
        let mut mask = vec![true; g.len()];
        mask[0] = false;
        let r = ResidualField::new(g, vals, mask);
        assert_eq!(r.linf(), 1.0);
        assert!((r.l2() - 1.0).abs() < 1e-14);
    }
}
