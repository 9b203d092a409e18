//! Conformal minimal immersions `X = (h, f)` assembled from Weierstrass data,
//! with metric, Gauss map, curvature fields and the Gauss-equation residual.

use crate::base::{AmbientIsometry, BaseManifold};
use crate::error::{Error, Result};
use crate::grid::{ComplexField, Field, GridDomain, RealField, ResidualField};
use crate::scalar::{Real, C};
use crate::stencil;
use crate::tolerances;
use crate::wdata::{self, HarmonicField, OmegaConvention, WeierstrassField};

/// A sampled conformal (minimal) immersion with cached derived fields.
#[derive(Clone, Debug)]
pub struct Immersion<R: Real> {
    pub manifold: BaseManifold,
    pub grid: GridDomain<R>,
    pub h: ComplexField<R>,
    pub f: RealField<R>,
    pub wf: WeierstrassField<R>,
    /// Metric factor from `lambda = (sigma o h)(|h_w| + |h_wbar|)`.
    pub lambda_sq: RealField<R>,
    /// Gauss map in the orthonormal frame `{sigma^{-1} dx, sigma^{-1} dy, dt}`;
    /// the third component is frame-independent and equals `tanh omega`.
    pub normal: Vec<[R; 3]>,
    pub(crate) sigma: RealField<R>,
    pub(crate) hw: ComplexField<R>,
    pub(crate) hwb: ComplexField<R>,
    pub(crate) fw: ComplexField<R>,
}

/// Intrinsic/extrinsic curvature fields and the Gauss-equation residual
/// `|K - K_ext - K_M N_3^2|`.
#[derive(Clone, Debug)]
pub struct CurvatureBundle<R: Real> {
    pub k: ResidualField<R>,
    pub k_ext: ResidualField<R>,
    pub residual: ResidualField<R>,
}

/// Height field by path integration of `Re(eta)` along the grid: the centre
/// row first, then every column, with 4th-order cumulative quadrature.
/// Path independence is witnessed by the closed-loop defect of `Re(eta)`
/// over every grid cell.
pub fn integrate_height<R: Real>(wf: &WeierstrassField<R>) -> Result<RealField<R>> {
    let q: Vec<C<R>> = (0..wf.grid.len()).map(|k| wf.eta_coefficient(k)).collect();
    let (f, _) = integrate_height_q(&wf.grid, &q, None)?;
    Ok(f)
}

/// Integrates `f = Re int q dw` from the grid centre for an arbitrary
/// holomorphic coefficient field `q`; returns the height and the per-cell
/// period defect of `Re(q dw)`.
pub fn integrate_height_q<R: Real>(
    g: &GridDomain<R>,
    q: &[C<R>],
    tol_override: Option<R>,
) -> Result<(RealField<R>, R)> {
    let g = *g;
    let h = g.spacing();
    let n = g.len();
    for v in q {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::PhiZero { context: "height one-form not finite" });
        }
    }
    // Re(eta) as the 1-form (q/2) dw + conj(q/2) dwbar; its cell circulation
    // is the period defect of the height.
    let qh: Vec<C<R>> = q.iter().map(|&v| v * R::lit(0.5)).collect();
    let qc: Vec<C<R>> = qh.iter().map(|v| v.conj()).collect();
    let defect = stencil::max_cell_circulation(&g, &qh, &qc);
    let tol = tol_override.unwrap_or_else(|| R::lit(tolerances::LOOP_TOL_PER_H) * h);
    if defect > tol {
        return Err(Error::PeriodDefect {
            defect: defect.to_f64().unwrap_or(f64::NAN),
            tolerance: tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    let (ci, cj) = g.center();
    let mut f = vec![R::zero(); n];
    // centre row: integrand Re q along u
    let row: Vec<R> = (0..g.n_u).map(|i| q[g.idx(i, cj)].re).collect();
    let right = stencil::cumulative_integral(&row[ci..], h);
    for (off, val) in right.iter().enumerate() {
        f[g.idx(ci + off, cj)] = *val;
    }
    let left_src: Vec<R> = (0..=ci).rev().map(|i| row[i]).collect();
    let left = stencil::cumulative_integral(&left_src, h);
    for (off, val) in left.iter().enumerate() {
        f[g.idx(ci - off, cj)] = -*val;
    }
    // columns: integrand Re(i q) = -Im q along v
    for i in 0..g.n_u {
        let col: Vec<R> = (0..g.n_v).map(|j| -q[g.idx(i, j)].im).collect();
        let base = f[g.idx(i, cj)];
        let up = stencil::cumulative_integral(&col[cj..], h);
        for (off, val) in up.iter().enumerate() {
            f[g.idx(i, cj + off)] = base + *val;
        }
        let down_src: Vec<R> = (0..=cj).rev().map(|j| col[j]).collect();
        let down = stencil::cumulative_integral(&down_src, h);
        for (off, val) in down.iter().enumerate() {
            f[g.idx(i, cj - off)] = base - *val;
        }
    }
    Ok((Field::new(g, f), defect))
}

fn gauss_normal<R: Real>(hw: C<R>, hwb: C<R>, fw: C<R>, sigma: R, masked: bool) -> [R; 3] {
    if masked {
        // vertical-normal limit: N_3 = +-1 by which derivative survives
        let s = if hw.norm() >= hwb.norm() { R::one() } else { -R::one() };
        return [R::zero(), R::zero(), s];
    }
    // g = (f_w h_wbar - conj(f_w) h_w) / (sigma |h_wbar| (|h_w| + |h_wbar|))
    let den = sigma * hwb.norm() * (hw.norm() + hwb.norm());
    let g = (fw * hwb - fw.conj() * hw) / den;
    let n2 = g.norm_sqr();
    let d = n2 + R::one();
    let two = R::lit(2.0);
    [two * g.re / d, two * g.im / d, (n2 - R::one()) / d]
}

impl<R: Real> Immersion<R> {
    /// Builds an immersion from sampled `(h, f)`.
    ///
    /// The Weierstrass data comes from `decompose`; a conformal or
    /// anti-conformal `h` (dilatation identically zero) is tolerated with an
    /// all-masked data block so that metric and conformality fields remain
    /// available.
    pub fn from_fields(
        manifold: BaseManifold,
        h: ComplexField<R>,
        f: RealField<R>,
        convention: OmegaConvention,
    ) -> Result<Self> {
        let grid = h.grid;
        let harmonic = HarmonicField::new(manifold, h)?;
        let wf = match wdata::decompose(&harmonic, convention, Some(&f)) {
            Ok(wf) => wf,
            Err(Error::ZeroDilatation) => {
                let hopf = wdata::hopf(&harmonic);
                WeierstrassField {
                    grid,
                    phi: hopf,
                    omega: Field::constant(grid, R::zero()),
                    psi: Field::constant(grid, R::zero()),
                    beta: Field::constant(grid, R::zero()),
                    eta_sign: 1,
                    convention,
                    mask: vec![false; grid.len()],
                }
            }
            Err(e) => return Err(e),
        };
        let (hw, hwb) = stencil::wirtinger(&harmonic.h);
        let fw = stencil::wirtinger_real(&f);
        let sigma = harmonic.sigma_field();
        let mut lambda_sq = Vec::with_capacity(grid.len());
        for k in 0..grid.len() {
            let l = sigma.values[k] * (hw.values[k].norm() + hwb.values[k].norm());
            lambda_sq.push(l * l);
        }
        let lambda_sq = Field::new(grid, lambda_sq);
        let min = lambda_sq.values.iter().fold(R::infinity(), |m, &v| m.min(v));
        if min < R::lit(tolerances::DEGENERATE_METRIC) {
            return Err(Error::DegenerateMetric { min: min.to_f64().unwrap_or(f64::NAN) });
        }
        let normal = (0..grid.len())
            .map(|k| {
                gauss_normal(
                    hw.values[k],
                    hwb.values[k],
                    fw.values[k],
                    sigma.values[k],
                    !wf.mask[k],
                )
            })
            .collect();
        Ok(Self { manifold, grid, h: harmonic.h, f, wf, lambda_sq, normal, sigma, hw, hwb, fw })
    }

    /// Rebuilds the height from the Weierstrass data and assembles the
    /// immersion (height anchored to 0 at the grid centre).
    pub fn from_weierstrass(
        manifold: BaseManifold,
        h: ComplexField<R>,
        convention: OmegaConvention,
    ) -> Result<Self> {
        let harmonic = HarmonicField::new(manifold, h.clone())?;
        let wf = wdata::decompose(&harmonic, convention, None)?;
        let f = integrate_height(&wf)?;
        Self::from_fields(manifold, h, f, convention)
    }

    pub fn harmonic_field(&self) -> HarmonicField<R> {
        HarmonicField { manifold: self.manifold, h: self.h.clone() }
    }

    /// `N_3` at sample `k`.
    pub fn n3(&self, k: usize) -> R {
        self.normal[k][2]
    }

    /// Conformality residuals of the two real equations
    /// `|h_u|^2_sigma + f_u^2 - |h_v|^2_sigma - f_v^2` and
    /// `<h_u, h_v>_sigma + f_u f_v`.
    pub fn conformality_residuals(&self) -> (ResidualField<R>, ResidualField<R>) {
        let n = self.grid.len();
        let mut r1 = Vec::with_capacity(n);
        let mut r2 = Vec::with_capacity(n);
        let two = R::lit(2.0);
        for k in 0..n {
            let hu = self.hw.values[k] + self.hwb.values[k];
            let hv = (self.hw.values[k] - self.hwb.values[k]) * C::new(R::zero(), R::one());
            let fu = self.fw.values[k].re * two;
            let fv = -self.fw.values[k].im * two;
            let s2 = self.sigma.values[k] * self.sigma.values[k];
            r1.push((s2 * hu.norm_sqr() + fu * fu - s2 * hv.norm_sqr() - fv * fv).abs());
            r2.push((s2 * (hu.re * hv.re + hu.im * hv.im) + fu * fv).abs());
        }
        (ResidualField::full(self.grid, r1), ResidualField::full(self.grid, r2))
    }

    /// Samplewise `|(f_w)^2 + phi|`.
    pub fn height_compat_residual(&self) -> ResidualField<R> {
        let vals = (0..self.grid.len())
            .map(|k| {
                let fw = self.fw.values[k];
                (fw * fw + self.wf.phi.values[k]).norm()
            })
            .collect();
        ResidualField::full(self.grid, vals)
    }

    /// The metric computed three ways: `(sigma(|h_w| + |h_wbar|))^2`,
    /// `4 cosh^2(omega) |phi|`, and the first fundamental form `(E + G)/2`.
    /// Returns the three fields and the max relative deviation on unmasked
    /// samples.
    pub fn metric_three_ways(&self) -> (RealField<R>, RealField<R>, RealField<R>, R) {
        let n = self.grid.len();
        let eq7 = self.lambda_sq.clone();
        let omega_geo = self.wf.omega_geometric();
        let mut eq8 = Vec::with_capacity(n);
        let mut direct = Vec::with_capacity(n);
        let four = R::lit(4.0);
        let two = R::lit(2.0);
        for k in 0..n {
            let om = omega_geo.values[k];
            eq8.push(four * om.cosh() * om.cosh() * self.wf.phi.values[k].norm());
            let hu = self.hw.values[k] + self.hwb.values[k];
            let hv = (self.hw.values[k] - self.hwb.values[k]) * C::new(R::zero(), R::one());
            let fu = self.fw.values[k].re * two;
            let fv = -self.fw.values[k].im * two;
            let s2 = self.sigma.values[k] * self.sigma.values[k];
            let e = s2 * hu.norm_sqr() + fu * fu;
            let gg = s2 * hv.norm_sqr() + fv * fv;
            direct.push((e + gg) * R::lit(0.5));
        }
        let mut worst = R::zero();
        for k in 0..n {
            if !self.wf.mask[k] {
                continue;
            }
            let scale = eq7.values[k].max(R::lit(1e-300));
            worst = worst.max((eq8[k] - eq7.values[k]).abs() / scale);
            worst = worst.max((direct[k] - eq7.values[k]).abs() / scale);
        }
        (eq7, Field::new(self.grid, eq8), Field::new(self.grid, direct), worst)
    }

    /// Samplewise `|N_3 - tanh omega|` (quotient formula for `g` against the
    /// log-dilatation route).
    pub fn n3_consistency_residual(&self) -> ResidualField<R> {
        let omg = self.wf.omega_geometric();
        let vals = (0..self.grid.len())
            .map(|k| (self.normal[k][2] - omg.values[k].tanh()).abs())
            .collect();
        let mut r = ResidualField::full(self.grid, vals);
        r.intersect_mask(&self.wf.mask);
        r
    }

    /// Intrinsic curvature `K = -Delta_0 log lambda / lambda^2`
    /// (5-point Laplacian, interior samples).
    pub fn intrinsic_curvature(&self) -> Result<ResidualField<R>> {
        let min = self.lambda_sq.values.iter().fold(R::infinity(), |m, &v| m.min(v));
        if min < R::lit(tolerances::DEGENERATE_METRIC) {
            return Err(Error::DegenerateMetric { min: min.to_f64().unwrap_or(f64::NAN) });
        }
        let log_lambda = self.lambda_sq.map(|v| v.ln() * R::lit(0.5));
        let (lap, mask) = stencil::laplacian5(&log_lambda);
        let vals = (0..self.grid.len())
            .map(|k| -lap.values[k] / self.lambda_sq.values[k])
            .collect();
        Ok(ResidualField::new(self.grid, vals, mask))
    }

    /// Second fundamental form components `(b_uu, b_uv, b_vv)` from second
    /// derivatives of `(Re h, Im h, f)` corrected by the Christoffel symbols
    /// of `sigma^2 |dz|^2 + dt^2` and projected on the unit normal.
    pub fn second_fundamental_form(
        &self,
    ) -> Result<(ResidualField<R>, ResidualField<R>, ResidualField<R>)> {
        let g = self.grid;
        let x = self.h.map(|z| z.re);
        let y = self.h.map(|z| z.im);
        let (xuu, xvv, xuv, mask) = stencil::second_derivatives2(&x);
        let (yuu, yvv, yuv, _) = stencil::second_derivatives2(&y);
        let (tuu, tvv, tuv, _) = stencil::second_derivatives2(&self.f);
        let mut buu = vec![R::zero(); g.len()];
        let mut buv = vec![R::zero(); g.len()];
        let mut bvv = vec![R::zero(); g.len()];
        for k in 0..g.len() {
            if !mask[k] {
                continue;
            }
            let grad = self.manifold.grad_log_sigma(self.h.values[k]).unwrap();
            let (lx, ly) = (grad.re, grad.im);
            let hu = self.hw.values[k] + self.hwb.values[k];
            let hv = (self.hw.values[k] - self.hwb.values[k]) * C::new(R::zero(), R::one());
            let (xu, yu) = (hu.re, hu.im);
            let (xv, yv) = (hv.re, hv.im);
            let s = self.sigma.values[k];
            let nrm = self.normal[k];
            // only the base Christoffels survive; the t direction is flat
            let project = |xab: R, yab: R, tab: R, xa: R, ya: R, xb: R, yb: R| {
                let vx = xab + lx * xa * xb + ly * (xa * yb + ya * xb) - lx * ya * yb;
                let vy = yab - ly * xa * xb + lx * (xa * yb + ya * xb) + ly * ya * yb;
                s * (vx * nrm[0] + vy * nrm[1]) + tab * nrm[2]
            };
            buu[k] = project(xuu.values[k], yuu.values[k], tuu.values[k], xu, yu, xu, yu);
            buv[k] = project(xuv.values[k], yuv.values[k], tuv.values[k], xu, yu, xv, yv);
            bvv[k] = project(xvv.values[k], yvv.values[k], tvv.values[k], xv, yv, xv, yv);
        }
        Ok((
            ResidualField::new(g, buu, mask.clone()),
            ResidualField::new(g, buv, mask.clone()),
            ResidualField::new(g, bvv, mask),
        ))
    }

    /// Mean-curvature residual `|b_uu + b_vv| / (2 lambda^2)` (minimality).
    pub fn minimality_residual(&self) -> Result<ResidualField<R>> {
        let (buu, _, bvv) = self.second_fundamental_form()?;
        let vals = (0..self.grid.len())
            .map(|k| {
                (buu.values[k] + bvv.values[k]).abs() / (R::lit(2.0) * self.lambda_sq.values[k])
            })
            .collect();
        Ok(ResidualField::new(self.grid, vals, buu.mask))
    }

    /// Gauss equation residual `|K - K_ext - K_M N_3^2|`, with `K_ext`
    /// computed from the second fundamental form so the test is not circular.
    pub fn gauss_equation_residual(&self) -> Result<CurvatureBundle<R>> {
        let k_int = self.intrinsic_curvature()?;
        let (buu, buv, bvv) = self.second_fundamental_form()?;
        let g = self.grid;
        let km: R = self.manifold.curvature();
        let mut kext = vec![R::zero(); g.len()];
        let mut res = vec![R::zero(); g.len()];
        let mut mask = vec![false; g.len()];
        for k in 0..g.len() {
            if !(k_int.mask[k] && buu.mask[k] && self.wf.mask[k]) {
                continue;
            }
            let l4 = self.lambda_sq.values[k] * self.lambda_sq.values[k];
            kext[k] = (buu.values[k] * bvv.values[k] - buv.values[k] * buv.values[k]) / l4;
            let n3 = self.normal[k][2];
            res[k] = (k_int.values[k] - kext[k] - km * n3 * n3).abs();
            mask[k] = true;
        }
        Ok(CurvatureBundle {
            k: k_int,
            k_ext: ResidualField::new(g, kext, mask.clone()),
            residual: ResidualField::new(g, res, mask),
        })
    }

    /// At samples with `|K| <= tol_k`, checks `|N_3| <= tol_n3` (hyperbolic
    /// base only).  Returns the flagged samples and the violations.
    pub fn vertical_point_check(&self, tol_k: R, tol_n3: R) -> Result<VerticalPointReport<R>> {
        if self.manifold != BaseManifold::HyperbolicDisk {
            return Err(Error::UnsupportedManifold { required: "hyperbolic-disk" });
        }
        let k_int = self.intrinsic_curvature()?;
        let mut flagged = Vec::new();
        let mut violations = Vec::new();
        for k in 0..self.grid.len() {
            if k_int.mask[k] && k_int.values[k].abs() <= tol_k {
                flagged.push(k);
                let n3 = self.normal[k][2].abs();
                if n3 > tol_n3 {
                    violations.push((k, n3));
                }
            }
        }
        Ok(VerticalPointReport { flagged, violations })
    }

    /// Pushes the immersion through an ambient isometry and reassembles it.
    pub fn apply_isometry(&self, iso: &AmbientIsometry<R>) -> Result<Self> {
        let h = ComplexField::new(
            self.grid,
            self.h.values.iter().map(|&z| iso.base.apply(z)).collect(),
        );
        let f = Field::new(
            self.grid,
            self.f.values.iter().map(|&t| iso.apply_height(t)).collect(),
        );
        Self::from_fields(self.manifold, h, f, self.wf.convention)
    }
}

#[derive(Clone, Debug)]
pub struct VerticalPointReport<R: Real> {
    /// Sample indices where `|K| <= tol_k`.
    pub flagged: Vec<usize>,
    /// Samples among those where `|N_3|` exceeds its tolerance.
    pub violations: Vec<(usize, R)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridDomain;
    
    /// Flat cylinder over the disk diameter: h = tanh(u/2), f = v.
    fn cylinder(n: usize) -> Immersion<f64> {
        let g = GridDomain::square(-0.6, 0.6, n).unwrap();
        let h = ComplexField::from_fn(g, |w: C<f64>| C::new((w.re / 2.0).tanh(), 0.0));
        let f = RealField::from_fn(g, |w: C<f64>| w.im);
        Immersion::from_fields(BaseManifold::HyperbolicDisk, h, f, OmegaConvention::default())
            .unwrap()
    }

    #[test]
    fn height_integration_constant_phi() {
        // phi = -1/4 with sqrt(phi) = i/2 (beta = pi/2) gives eta = 1: f = u - u_c
        let g = GridDomain::square(-0.6, 0.6, 33).unwrap();
        let wf = WeierstrassField {
            grid: g,
            phi: ComplexField::constant(g, C::new(-0.25, 0.0)),
            omega: RealField::constant(g, 0.3),
            psi: RealField::constant(g, 0.0),
            beta: RealField::constant(g, std::f64::consts::FRAC_PI_2),
            eta_sign: 1,
            convention: OmegaConvention::default(),
            mask: vec![true; g.len()],
        };
        let f = integrate_height(&wf).unwrap();
        for j in 0..g.n_v {
            for i in 0..g.n_u {
                assert!((f.at(i, j) - g.u(i)).abs() < 1e-13);
            }
        }
        // samplewise (f_w)^2 = -phi after re-differentiation of the height
        let fw = crate::stencil::wirtinger_real(&f);
        for k in 0..g.len() {
            let r = (fw.values[k] * fw.values[k] + wf.phi.values[k]).norm();
            assert!(r < 1e-9, "height compatibility {r}");
        }
    }

    #[test]
    fn cylinder_immersion_basics() {
        let imm = cylinder(65);
        for k in 0..imm.grid.len() {
            assert!(imm.wf.omega.values[k].abs() < 1e-12);
            assert!(imm.n3(k).abs() < 1e-6);
            assert!((imm.lambda_sq.values[k] - 1.0).abs() < 5e-8);
            assert!((imm.wf.phi.values[k] - C::new(0.25, 0.0)).norm() < 1e-8);
        }
        let (c1, c2) = imm.conformality_residuals();
        assert!(c1.linf() < 1e-6 && c2.linf() < 1e-6);
        assert!(imm.height_compat_residual().linf() < 1e-6);
        // height rebuilt from the decomposed data stays consistent
        let rebuilt = Immersion::from_weierstrass(
            imm.manifold,
            imm.h.clone(),
            OmegaConvention::default(),
        )
        .unwrap();
        assert!(rebuilt.height_compat_residual().linf() < 1e-6);
        let kk = imm.intrinsic_curvature().unwrap();
        assert!(kk.linf() < 1e-3, "K {}", kk.linf());
        let bundle = imm.gauss_equation_residual().unwrap();
        assert!(bundle.k_ext.linf() < 1e-3);
        assert!(bundle.residual.linf() < 1e-3);
        // vertical point check: interior samples flagged, none violating
        let rep = imm.vertical_point_check(1e-5, 1e-6).unwrap();
        assert!(!rep.flagged.is_empty());
        assert!(rep.violations.is_empty());
    }

    #[test]
    fn cylinder_vertical_check_negative_control() {
        // perturbed height: flat-curvature points no longer have N_3 = 0
        let g = GridDomain::square(-0.6, 0.6, 65).unwrap();
        let h = ComplexField::from_fn(g, |w: C<f64>| C::new((w.re / 2.0).tanh(), 0.0));
        let f = RealField::from_fn(g, |w: C<f64>| w.im + 0.05 * (3.0 * w.im).sin());
        let imm =
            Immersion::from_fields(BaseManifold::HyperbolicDisk, h, f, OmegaConvention::default())
                .unwrap();
        let rep = imm.vertical_point_check(1e-2, 1e-6).unwrap();
        assert!(!rep.violations.is_empty());
    }

    #[test]
    fn plane_slice_is_tolerated_and_totally_geodesic() {
        // t = 0 plane over the Euclidean base: phi = 0, II = 0
        let g = GridDomain::square(-0.6f64, 0.6, 33).unwrap();
        let h = ComplexField::from_fn(g, |w| w);
        let f = RealField::constant(g, 0.0);
        let imm = Immersion::from_fields(BaseManifold::Euclidean, h, f, OmegaConvention::default())
            .unwrap();
        assert!(imm.wf.mask.iter().all(|&m| !m));
        assert!((imm.n3(0) - 1.0).abs() < 1e-15);
        let (buu, buv, bvv) = imm.second_fundamental_form().unwrap();
        assert!(buu.linf() < 1e-12 && buv.linf() < 1e-12 && bvv.linf() < 1e-12);
        let (c1, c2) = imm.conformality_residuals();
        assert!(c1.linf() < 1e-12 && c2.linf() < 1e-12);
    }

    #[test]
    fn metric_three_ways_consistent() {
        let imm = cylinder(129);
        let (_, _, _, worst) = imm.metric_three_ways();
        assert!(worst < 1e-8, "metric deviation {worst}");
        assert!(imm.n3_consistency_residual().linf() < 1e-6);
    }

    #[test]
    fn isometry_transport_preserves_invariants() {
        use crate::base::MobiusMap;
        let imm = cylinder(33);
        let iso = AmbientIsometry {
            base: MobiusMap::from_params(
                BaseManifold::HyperbolicDisk,
                C::new(0.2, -0.1),
                0.7,
                false,
            ),
            vertical_shift: 0.4,
            vertical_flip: true,
        };
        let moved = imm.apply_isometry(&iso).unwrap();
        for k in 0..imm.grid.len() {
            assert!((moved.lambda_sq.values[k] - imm.lambda_sq.values[k]).abs() < 1e-6);
            assert!(
                (moved.wf.phi.values[k] - imm.wf.phi.values[k]).norm() < 1e-6,
                "hopf must be invariant under base isometries"
            );
        }
    }
}
