//! Weierstrass-type data of a harmonic map and the residual operators of the
//! structure equations.
//!
//! For a harmonic `h : Omega -> (M, sigma^2 |dz|^2)` the Hopf coefficient is
//! `phi = (sigma o h)^2 h_w conj(h_wbar)`; writing `g = -i e^{omega + i psi}`
//! and `sqrt(phi) = |phi|^{1/2} e^{i beta}` the derivatives factor as
//!
//! ```text
//! h_w    = sqrt(phi) e^{ omega + i psi} / sigma
//! h_wbar = conj(sqrt(phi)) e^{-omega + i psi} / sigma
//! ```
//!
//! `decompose` extracts `(phi, omega, psi, beta)` from a sampled harmonic
//! field, tracking continuous branches of `psi` and `beta` by breadth-first
//! unwrapping from the grid centre.  The residual operators return masked
//! fields measuring how well the harmonic-map equation, the sinh-Gordon
//! equation, the Boechner formula and the deviation identity for
//! `(omega + i psi)_wbar` hold on the grid.

use crate::base::BaseManifold;
use crate::error::{Error, Result};
use crate::grid::{ComplexField, Field, GridDomain, RealField, ResidualField};
use crate::scalar::{unwrap_near, wrap_angle, Real, C};
use crate::stencil;
use crate::tolerances;
use std::collections::VecDeque;

/// A sampled map into the chart of a base manifold, with every sample
/// verified to lie in the chart.
#[derive(Clone, Debug)]
pub struct HarmonicField<R: Real> {
    pub manifold: BaseManifold,
    pub h: ComplexField<R>,
}

impl<R: Real> HarmonicField<R> {
    pub fn new(manifold: BaseManifold, h: ComplexField<R>) -> Result<Self> {
        for &z in &h.values {
            if !manifold.chart_contains(z) {
                return Err(Error::OutOfChart {
                    re: z.re.to_f64().unwrap_or(f64::NAN),
                    im: z.im.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(Self { manifold, h })
    }

    pub fn grid(&self) -> GridDomain<R> {
        self.h.grid
    }

    /// Conformal factor `sigma(h(w))` per sample.
    pub fn sigma_field(&self) -> RealField<R> {
        Field::new(
            self.h.grid,
            self.h.values.iter().map(|&z| self.manifold.sigma(z).unwrap()).collect(),
        )
    }
}

/// Sign convention for `omega`; the paper works with both
/// `omega_1 = log(|h_wbar|/|h_w|)/2` and `omega_2 = log(|h_w|/|h_wbar|)/2`.
/// The factorisation `h_w = sqrt(phi) e^{omega + i psi}/sigma` holds with
/// `omega_2`, which is the default everywhere in this crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OmegaConvention {
    /// `omega = log(|h_w| / |h_wbar|) / 2` (geometric: `N_3 = tanh omega`).
    #[default]
    HwOverHwbar,
    /// `omega = log(|h_wbar| / |h_w|) / 2`.
    HwbarOverHw,
}

/// Sampled Weierstrass data `(phi, omega, psi, beta)` with continuous
/// branches and an eta sign.
#[derive(Clone, Debug)]
pub struct WeierstrassField<R: Real> {
    pub grid: GridDomain<R>,
    pub phi: ComplexField<R>,
    pub omega: RealField<R>,
    pub psi: RealField<R>,
    pub beta: RealField<R>,
    /// Sign `s` in `eta = s * (-2i) sqrt(phi) dw`.
    pub eta_sign: i8,
    pub convention: OmegaConvention,
    /// False at vertical-normal-limit samples and flagged zeros of `phi`,
    /// where `omega`, `psi`, `beta` are not meaningful.
    pub mask: Vec<bool>,
}

impl<R: Real> WeierstrassField<R> {
    /// `omega` in the geometric convention (`N_3 = tanh omega`), regardless
    /// of the stored one.
    pub fn omega_geometric(&self) -> RealField<R> {
        match self.convention {
            OmegaConvention::HwOverHwbar => self.omega.clone(),
            OmegaConvention::HwbarOverHw => self.omega.map(|o| -o),
        }
    }

    /// `|phi|^{1/2}` per sample.
    pub fn modulus_sqrt_phi(&self) -> RealField<R> {
        self.phi.map(|p| p.norm().sqrt())
    }

    /// Continuous branch of `sqrt(phi)` implied by `beta`.
    pub fn sqrt_phi(&self, k: usize) -> C<R> {
        let m = self.phi.values[k].norm().sqrt();
        C::from_polar(m, self.beta.values[k])
    }

    /// Coefficient of the height one-form `eta = q dw`.
    pub fn eta_coefficient(&self, k: usize) -> C<R> {
        let s = if self.eta_sign >= 0 { R::one() } else { -R::one() };
        C::new(R::zero(), -(s + s)) * self.sqrt_phi(k)
    }

    /// Gauss data `g = -i e^{omega + i psi}` (sign folded with `eta_sign`).
    pub fn gauss_data(&self, k: usize) -> C<R> {
        let om = match self.convention {
            OmegaConvention::HwOverHwbar => self.omega.values[k],
            OmegaConvention::HwbarOverHw => -self.omega.values[k],
        };
        let s = if self.eta_sign >= 0 { R::one() } else { -R::one() };
        C::new(R::zero(), -s) * C::from_polar(om.exp(), self.psi.values[k])
    }

    /// Complex coefficient of dilatation `a = e^{-2(omega + i psi)}`.
    pub fn dilatation(&self, k: usize) -> C<R> {
        let om = match self.convention {
            OmegaConvention::HwOverHwbar => self.omega.values[k],
            OmegaConvention::HwbarOverHw => -self.omega.values[k],
        };
        let two = R::lit(2.0);
        C::from_polar((-(om + om)).exp(), -two * self.psi.values[k])
    }

    /// Rebuilds `(h_w, h_wbar)` from the stored data and a sigma field.
    pub fn reassemble(&self, sigma: &RealField<R>) -> (ComplexField<R>, ComplexField<R>) {
        let mut hw = Vec::with_capacity(self.grid.len());
        let mut hwb = Vec::with_capacity(self.grid.len());
        for k in 0..self.grid.len() {
            let sq = self.sqrt_phi(k);
            let om = match self.convention {
                OmegaConvention::HwOverHwbar => self.omega.values[k],
                OmegaConvention::HwbarOverHw => -self.omega.values[k],
            };
            let eip = C::from_polar(R::one(), self.psi.values[k]);
            let s = sigma.values[k];
            hw.push(sq * eip * (om.exp() / s));
            hwb.push(sq.conj() * eip * ((-om).exp() / s));
        }
        (Field::new(self.grid, hw), Field::new(self.grid, hwb))
    }
}

/// Hopf coefficient field `phi = (sigma o h)^2 h_w conj(h_wbar)`.
pub fn hopf<R: Real>(h: &HarmonicField<R>) -> ComplexField<R> {
    let (hw, hwb) = stencil::wirtinger(&h.h);
    let sig = h.sigma_field();
    let vals = (0..h.h.values.len())
        .map(|k| {
            let s = sig.values[k];
            hw.values[k] * hwb.values[k].conj() * (s * s)
        })
        .collect();
    Field::new(h.h.grid, vals)
}

/// `|dbar phi|` of a Hopf field: holomorphy defect.
pub fn antiholomorphy<R: Real>(phi: &ComplexField<R>) -> ResidualField<R> {
    let (_, phib) = stencil::wirtinger(phi);
    ResidualField::full(phi.grid, phib.values.iter().map(|v| v.norm()).collect())
}

/// Pointwise residual of the harmonic-map equation
/// `h_{w wbar} + 2 (log sigma o h)_z h_w h_wbar = 0`.
///
/// `h_{w wbar}` is `Delta_0 h / 4` by the 4th-order Laplacian, so the
/// residual is 4th-order accurate on the whole grid.
pub fn harmonic_residual<R: Real>(h: &HarmonicField<R>) -> ResidualField<R> {
    let (hw, hwb) = stencil::wirtinger(&h.h);
    let lap = stencil::laplacian4(&h.h);
    let quarter = R::lit(0.25);
    let two = R::lit(2.0);
    let vals = (0..h.h.values.len())
        .map(|k| {
            let lz = h.manifold.log_sigma_z(h.h.values[k]).unwrap();
            (lap.values[k] * quarter + lz * hw.values[k] * hwb.values[k] * two).norm()
        })
        .collect();
    ResidualField::full(h.h.grid, vals)
}

/// Pointwise residual of the sinh-Gordon equation
/// `Delta_0 omega + 2 K_M sinh(2 omega) |phi| = 0` (5-point Laplacian,
/// interior samples).  The equation is odd in `omega`, so it holds in either
/// sign convention.
pub fn sinh_gordon_residual<R: Real>(
    wf: &WeierstrassField<R>,
    manifold: BaseManifold,
) -> ResidualField<R> {
    let (lap, interior) = stencil::laplacian5(&wf.omega);
    let km: R = manifold.curvature();
    let two = R::lit(2.0);
    let vals = (0..wf.grid.len())
        .map(|k| {
            let om = wf.omega.values[k];
            (lap.values[k] + two * km * (two * om).sinh() * wf.phi.values[k].norm()).abs()
        })
        .collect();
    let mut r = ResidualField::new(wf.grid, vals, interior);
    r.intersect_mask(&wf.mask);
    r
}

/// Pointwise residual of the Boechner formula
/// `Delta_0 log(|h_w| / |h_wbar|) + 2 K_M J(h) = 0` with
/// `J = sigma^2 (|h_w|^2 - |h_wbar|^2)`.
pub fn bochner_residual<R: Real>(h: &HarmonicField<R>) -> ResidualField<R> {
    let (hw, hwb) = stencil::wirtinger(&h.h);
    let sig = h.sigma_field();
    let n = h.h.values.len();
    let floor = R::lit(tolerances::VERTICAL_NORMAL_RATIO);
    let mut mask = vec![true; n];
    let mut logratio = vec![R::zero(); n];
    for k in 0..n {
        let (a, b) = (hw.values[k].norm(), hwb.values[k].norm());
        if b <= floor * a || a <= floor * b {
            mask[k] = false;
        } else {
            logratio[k] = (a / b).ln();
        }
    }
    let (lap, interior) = stencil::laplacian5(&Field::new(h.h.grid, logratio));
    let km: R = h.manifold.curvature();
    let two = R::lit(2.0);
    let vals = (0..n)
        .map(|k| {
            let s = sig.values[k];
            let j = s * s * (hw.values[k].norm_sqr() - hwb.values[k].norm_sqr());
            (lap.values[k] + two * km * j).abs()
        })
        .collect();
    let mut r = ResidualField::new(h.h.grid, vals, interior);
    // Laplacian of log-ratio needs the whole 5-point star unmasked.
    let g = h.h.grid;
    let mut star = mask.clone();
    for j in 1..g.n_v - 1 {
        for i in 1..g.n_u - 1 {
            let k = g.idx(i, j);
            star[k] = mask[k]
                && mask[k - 1]
                && mask[k + 1]
                && mask[k - g.n_u]
                && mask[k + g.n_u];
        }
    }
    r.intersect_mask(&star);
    r
}

/// Pointwise residual of the deviation identity
/// `(omega + i psi)_wbar = |phi|^{1/2} e^{-i beta} ( sinh omega <P, e^{i psi}>
///   + i cosh omega <P, i e^{i psi}> )` with `P = grad log sigma / sigma` at
/// `h(w)` evaluated analytically.
pub fn cauchy_deviation_residual<R: Real>(
    wf: &WeierstrassField<R>,
    h: &HarmonicField<R>,
) -> ResidualField<R> {
    let omega_geo = wf.omega_geometric();
    let lhs = stencil::wirtinger_bar_pair(&omega_geo, &wf.psi);
    let vals = (0..wf.grid.len())
        .map(|k| {
            let z = h.h.values[k];
            let grad = h.manifold.grad_log_sigma(z).unwrap();
            let s = h.manifold.sigma(z).unwrap();
            let p = grad / s;
            let psi = wf.psi.values[k];
            let e = C::from_polar(R::one(), psi);
            let dot_e = p.re * e.re + p.im * e.im;
            // i e^{i psi} = (-sin psi, cos psi)
            let dot_ie = -p.re * e.im + p.im * e.re;
            let om = omega_geo.values[k];
            let m = wf.phi.values[k].norm().sqrt();
            let rhs = C::from_polar(m, -wf.beta.values[k])
                * C::new(om.sinh() * dot_e, om.cosh() * dot_ie);
            (lhs.values[k] - rhs).norm()
        })
        .collect();
    let mut r = ResidualField::full(wf.grid, vals);
    r.intersect_mask(&wf.mask);
    r
}

/// Winding number of `phi` around the cell ring centred at `(i, j)`.
fn winding_around<R: Real>(phi: &ComplexField<R>, i: usize, j: usize) -> Option<i64> {
    let g = phi.grid;
    if !g.is_interior(i, j, 1) {
        return None;
    }
    let ring = [
        (i - 1, j - 1),
        (i, j - 1),
        (i + 1, j - 1),
        (i + 1, j),
        (i + 1, j + 1),
        (i, j + 1),
        (i - 1, j + 1),
        (i - 1, j),
        (i - 1, j - 1),
    ];
    let mut total = R::zero();
    let mut prev: Option<R> = None;
    for &(a, b) in &ring {
        let v = phi.at(a, b);
        if v.norm() == R::zero() {
            return None;
        }
        let arg = v.arg();
        if let Some(p) = prev {
            total += wrap_angle(arg - p);
        }
        prev = Some(arg);
    }
    let two_pi = R::PI() + R::PI();
    (total / two_pi).round().to_i64()
}

/// Decomposes a harmonic field into Weierstrass data.
///
/// `psi` and `beta` are unwrapped breadth-first from the grid centre so they
/// form continuous branches; samples where `|h_wbar|` underflows relative to
/// `|h_w|` (or vice versa) are masked as vertical-normal limits, and zeros of
/// `phi` are accepted only with even winding.  When the height samples are
/// supplied the sign of `eta` is fitted so that `f = Re int eta`.
pub fn decompose<R: Real>(
    h: &HarmonicField<R>,
    convention: OmegaConvention,
    height: Option<&RealField<R>>,
) -> Result<WeierstrassField<R>> {
    let g = h.h.grid;
    let n = g.len();
    let (hw, hwb) = stencil::wirtinger(&h.h);
    let sig = h.sigma_field();
    let mut phi = Vec::with_capacity(n);
    for k in 0..n {
        let s = sig.values[k];
        phi.push(hw.values[k] * hwb.values[k].conj() * (s * s));
    }
    let phi = Field::new(g, phi);
    let phi_max = phi.linf();

    // vertical-normal-limit mask
    let floor = R::lit(tolerances::VERTICAL_NORMAL_RATIO);
    let mut mask = vec![true; n];
    let mut masked_all = true;
    for k in 0..n {
        let (a, b) = (hw.values[k].norm(), hwb.values[k].norm());
        if b <= floor * a || a <= floor * b || (a == R::zero() && b == R::zero()) {
            mask[k] = false;
        } else {
            masked_all = false;
        }
    }
    if masked_all {
        return Err(Error::ZeroDilatation);
    }

    // flag near-zeros of phi and check their winding
    if phi_max > R::zero() {
        let zero_tol = R::lit(1e-10) * phi_max;
        for j in 0..g.n_v {
            for i in 0..g.n_u {
                let k = g.idx(i, j);
                if phi.values[k].norm() < zero_tol {
                    mask[k] = false;
                    if let Some(w) = winding_around(&phi, i, j) {
                        if w.rem_euclid(2) == 1 {
                            return Err(Error::OddOrderZero {
                                u: g.u(i).to_f64().unwrap_or(f64::NAN),
                                v: g.v(j).to_f64().unwrap_or(f64::NAN),
                                winding: w,
                            });
                        }
                    }
                }
            }
        }
    }

    // omega in the requested convention
    let mut omega = vec![R::zero(); n];
    for k in 0..n {
        if !mask[k] {
            continue;
        }
        let r = hw.values[k].norm() / hwb.values[k].norm();
        let o2 = r.ln() * R::lit(0.5);
        omega[k] = match convention {
            OmegaConvention::HwOverHwbar => o2,
            OmegaConvention::HwbarOverHw => -o2,
        };
    }

    // BFS branch tracking for beta and psi from the grid centre
    let mut beta = vec![R::zero(); n];
    let mut psi = vec![R::zero(); n];
    let mut seen = vec![false; n];
    let (ci, cj) = g.center();
    let mut start = g.idx(ci, cj);
    if !mask[start] {
        // fall back to the unmasked sample nearest the centre
        let mut best = None;
        for j in 0..g.n_v {
            for i in 0..g.n_u {
                let k = g.idx(i, j);
                if mask[k] {
                    let d2 = (i as i64 - ci as i64).pow(2) + (j as i64 - cj as i64).pow(2);
                    if best.map_or(true, |(bd, _)| d2 < bd) {
                        best = Some((d2, k));
                    }
                }
            }
        }
        start = best.map(|(_, k)| k).ok_or(Error::ZeroDilatation)?;
    }
    // psi principal value: arg(h_w e^{-i beta}); sigma and e^{omega} > 0
    // drop out of the argument.
    beta[start] = phi.values[start].arg() * R::lit(0.5);
    psi[start] = (hw.values[start] * C::from_polar(R::one(), -beta[start])).arg();
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(k) = queue.pop_front() {
        let i = k % g.n_u;
        let j = k / g.n_u;
        let push = |ii: i64, jj: i64, queue: &mut VecDeque<usize>,
                        beta: &mut Vec<R>, psi: &mut Vec<R>, seen: &mut Vec<bool>| {
            if ii < 0 || jj < 0 || ii >= g.n_u as i64 || jj >= g.n_v as i64 {
                return;
            }
            let kk = g.idx(ii as usize, jj as usize);
            if seen[kk] || !mask[kk] {
                return;
            }
            // half-angle branch: beta advances by half the wrapped phi-arg step
            let dphi = wrap_angle(phi.values[kk].arg() - phi.values[k].arg());
            beta[kk] = beta[k] + dphi * R::lit(0.5);
            // re-snap against the principal value to avoid drift
            let principal = phi.values[kk].arg() * R::lit(0.5);
            let pi = R::PI();
            let steps = ((beta[kk] - principal) / pi).round();
            beta[kk] = principal + steps * pi;
            let p = (hw.values[kk] * C::from_polar(R::one(), -beta[kk])).arg();
            psi[kk] = unwrap_near(p, psi[k]);
            seen[kk] = true;
            queue.push_back(kk);
        };
        push(i as i64 - 1, j as i64, &mut queue, &mut beta, &mut psi, &mut seen);
        push(i as i64 + 1, j as i64, &mut queue, &mut beta, &mut psi, &mut seen);
        push(i as i64, j as i64 - 1, &mut queue, &mut beta, &mut psi, &mut seen);
        push(i as i64, j as i64 + 1, &mut queue, &mut beta, &mut psi, &mut seen);
    }

    // eta sign from the height samples, if available
    let mut eta_sign = 1i8;
    if let Some(f) = height {
        let fw = stencil::wirtinger_real(f);
        // q = 2 f_w must equal s * (-2i) sqrt(phi); test at the largest |phi|
        let mut k_best = start;
        let mut best = R::zero();
        for k in 0..n {
            if mask[k] && phi.values[k].norm() > best {
                best = phi.values[k].norm();
                k_best = k;
            }
        }
        let sq = C::from_polar(phi.values[k_best].norm().sqrt(), beta[k_best]);
        let reference = C::new(R::zero(), -R::lit(2.0)) * sq;
        let q = fw.values[k_best] * R::lit(2.0);
        let dot = q.re * reference.re + q.im * reference.im;
        if dot < R::zero() {
            eta_sign = -1;
        }
    }

    Ok(WeierstrassField {
        grid: g,
        phi,
        omega: Field::new(g, omega),
        psi: Field::new(g, psi),
        beta: Field::new(g, beta),
        eta_sign,
        convention,
        mask,
    })
}
