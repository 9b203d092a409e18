//! The theta-associate family: rotate the Hopf differential by `e^{2 i theta}`
//! (the height form by `e^{i theta}`), keep `omega`, and solve for the new
//! horizontal part.
//!
//! The construction marches the coupled system
//!
//! ```text
//! dh^theta = h^theta_w dw + h^theta_wbar dwbar,
//!   h^theta_w    = e^{i theta} sqrt(phi) e^{ omega + i psi^theta} / sigma(h^theta)
//!   h^theta_wbar = e^{-i theta} conj(sqrt(phi)) e^{-omega + i psi^theta} / sigma(h^theta)
//! (omega + i psi^theta)_wbar = |phi|^{1/2} e^{-i(beta+theta)} (
//!       sinh omega <grad log sigma / sigma, e^{i psi^theta}>
//!   + i cosh omega <grad log sigma / sigma, i e^{i psi^theta}> )
//! ```
//!
//! from the grid centre along the central row and then along every column,
//! with classical 4-stage explicit integration.  Integrability of the
//! constructed `dh^theta` is witnessed by its closed-loop defect over every
//! grid cell; the Hopf rotation law is re-measured on the marched field with
//! independent stencils.

use crate::base::{fit_isometry, AmbientIsometry, BaseManifold};
use crate::error::{Error, Result};
use crate::grid::{Field, GridDomain, RealField};
use crate::immersion::{integrate_height_q, Immersion};
use crate::interp::line_interp;
use crate::scalar::{Real, C};
use crate::stencil;
use crate::tolerances;
use crate::wdata;

#[derive(Clone, Copy, Debug)]
pub struct AssociateParams<R: Real> {
    /// Rotation angle in `[0, 2 pi)`.
    pub theta: R,
    /// Integration substeps per grid edge.
    pub steps: usize,
    /// Closed-loop defect tolerance; default `1e-5 * h`.
    pub tol_loop: Option<R>,
}

impl<R: Real> AssociateParams<R> {
    pub fn new(theta: R) -> Self {
        Self { theta, steps: tolerances::MARCH_STEPS, tol_loop: None }
    }
}

/// A constructed member of the associate family.
#[derive(Clone, Debug)]
pub struct FamilyMember<R: Real> {
    pub theta: R,
    pub imm: Immersion<R>,
    /// Max closed-loop circulation of the constructed `dh^theta` per cell.
    pub loop_defect: R,
    /// `Linf |Q(h^theta) - e^{2 i theta} Q(h)|` with `Q(h^theta)` re-measured
    /// by stencils on the marched field.
    pub hopf_rotation_error: R,
    /// The marched phase field `psi^theta`.
    pub psi_theta: RealField<R>,
}

struct MarchData<R: Real> {
    grid: GridDomain<R>,
    manifold: BaseManifold,
    /// geometric omega, |phi|^{1/2}, effective beta (eta sign folded in)
    om: Vec<R>,
    m: Vec<R>,
    beta: Vec<R>,
    omwb: Vec<C<R>>,
    theta: R,
}

#[derive(Clone, Copy)]
struct State<R: Real> {
    h: C<R>,
    psi: R,
}

enum Dir {
    U,
    V,
}

impl<R: Real> MarchData<R> {
    /// Field values along a grid line: (line origin, omega, m, beta, omega_wbar).
    fn line(&self, fixed: usize, along: &Dir) -> (R, Vec<R>, Vec<R>, Vec<R>, Vec<C<R>>) {
        let g = self.grid;
        match along {
            Dir::U => {
                let base = fixed * g.n_u;
                (
                    g.u_min,
                    self.om[base..base + g.n_u].to_vec(),
                    self.m[base..base + g.n_u].to_vec(),
                    self.beta[base..base + g.n_u].to_vec(),
                    self.omwb[base..base + g.n_u].to_vec(),
                )
            }
            Dir::V => {
                let i = fixed;
                let pick = |k: usize| k * g.n_u + i;
                (
                    g.v_min,
                    (0..g.n_v).map(|k| self.om[pick(k)]).collect(),
                    (0..g.n_v).map(|k| self.m[pick(k)]).collect(),
                    (0..g.n_v).map(|k| self.beta[pick(k)]).collect(),
                    (0..g.n_v).map(|k| self.omwb[pick(k)]).collect(),
                )
            }
        }
    }

    fn derivatives_at(
        &self,
        om: R,
        m: R,
        beta: R,
        omwb: C<R>,
        state: &State<R>,
        dir: &Dir,
    ) -> Result<(C<R>, R)> {
        let sigma = self.manifold.sigma(state.h)?;
        let grad = self.manifold.grad_log_sigma(state.h)?;
        let p = grad / sigma;
        let (sin_psi, cos_psi) = (state.psi.sin(), state.psi.cos());
        let dot_e = p.re * cos_psi + p.im * sin_psi;
        let dot_ie = -p.re * sin_psi + p.im * cos_psi;
        let rc = C::from_polar(m, -(beta + self.theta))
            * C::new(om.sinh() * dot_e, om.cosh() * dot_ie);
        let psi_wb = (rc - omwb) * C::new(R::zero(), -R::one());
        let e_psi = C::from_polar(R::one(), state.psi);
        let hw = C::from_polar(m * om.exp() / sigma, beta + self.theta) * e_psi;
        let hwb = C::from_polar(m * (-om).exp() / sigma, -(beta + self.theta)) * e_psi;
        let two = R::lit(2.0);
        Ok(match dir {
            Dir::U => (hw + hwb, two * psi_wb.re),
            Dir::V => ((hw - hwb) * C::new(R::zero(), R::one()), two * psi_wb.im),
        })
    }
}

/// Marches one grid line from `start_index` toward both ends with classical
/// RK4, storing the state at every node.
fn march_line<R: Real>(
    data: &MarchData<R>,
    fixed: usize,
    dir: Dir,
    start_index: usize,
    start_state: State<R>,
    steps: usize,
    n: usize,
    mut store: impl FnMut(usize, State<R>),
) -> Result<()> {
    let (x0, om, m, beta, omwb) = data.line(fixed, &dir);
    let h = data.grid.spacing();
    store(start_index, start_state);
    for sign in [1i64, -1i64] {
        let mut state = start_state;
        let mut idx = start_index as i64;
        while idx + sign >= 0 && idx + sign < n as i64 {
            let t_node = x0 + h * R::from_i64(idx).unwrap();
            let dt = h * R::from_i64(sign).unwrap() / R::from_usize(steps).unwrap();
            for s in 0..steps {
                let t = t_node + dt * R::from_usize(s).unwrap();
                let eval = |tt: R, st: &State<R>| -> Result<(C<R>, R)> {
                    data.derivatives_at(
                        line_interp(&om, x0, h, tt),
                        line_interp(&m, x0, h, tt),
                        line_interp(&beta, x0, h, tt),
                        line_interp(&omwb, x0, h, tt),
                        st,
                        &dir,
                    )
                };
                let chart_exit = || {
                    let (u, v) = match dir {
                        Dir::U => (t, data.grid.v(fixed)),
                        Dir::V => (data.grid.u(fixed), t),
                    };
                    Error::ChartExit {
                        u: u.to_f64().unwrap_or(f64::NAN),
                        v: v.to_f64().unwrap_or(f64::NAN),
                    }
                };
                let half = R::lit(0.5);
                let k1 = eval(t, &state).map_err(|_| chart_exit())?;
                let s2 =
                    State { h: state.h + k1.0 * (dt * half), psi: state.psi + k1.1 * dt * half };
                let k2 = eval(t + dt * half, &s2).map_err(|_| chart_exit())?;
                let s3 =
                    State { h: state.h + k2.0 * (dt * half), psi: state.psi + k2.1 * dt * half };
                let k3 = eval(t + dt * half, &s3).map_err(|_| chart_exit())?;
                let s4 = State { h: state.h + k3.0 * dt, psi: state.psi + k3.1 * dt };
                let k4 = eval(t + dt, &s4).map_err(|_| chart_exit())?;
                let sixth = dt / R::lit(6.0);
                let two = R::lit(2.0);
                state = State {
                    h: state.h + (k1.0 + (k2.0 + k3.0) * two + k4.0) * sixth,
                    psi: state.psi + (k1.1 + (k2.1 + k3.1) * two + k4.1) * sixth,
                };
            }
            idx += sign;
            store(idx as usize, state);
        }
    }
    Ok(())
}

/// Constructs the theta-associate member of an immersion.
pub fn make_associate<R: Real>(
    imm: &Immersion<R>,
    p: &AssociateParams<R>,
) -> Result<FamilyMember<R>> {
    if imm.wf.mask.iter().any(|&m| !m) {
        return Err(Error::PhiZero { context: "associate march needs zero-free phi" });
    }
    let g = imm.grid;
    let n = g.len();
    let theta = p.theta;
    // effective branch: fold the eta sign into (beta, psi), so that
    // eta = -2i sqrt(phi) holds with the tracked branch
    let flip = if imm.wf.eta_sign < 0 { R::PI() } else { R::zero() };
    let om_field = imm.wf.omega_geometric();
    let m: Vec<R> = imm.wf.phi.values.iter().map(|v| v.norm().sqrt()).collect();
    let beta: Vec<R> = imm.wf.beta.values.iter().map(|&b| b + flip).collect();
    let psi0: Vec<R> = imm.wf.psi.values.iter().map(|&s| s + flip).collect();
    let omwb = {
        let du = stencil::derivative_u(&om_field);
        let dv = stencil::derivative_v(&om_field);
        let half = R::lit(0.5);
        (0..n)
            .map(|k| C::new(du.values[k] * half, dv.values[k] * half))
            .collect()
    };
    let data = MarchData {
        grid: g,
        manifold: imm.manifold,
        om: om_field.values.clone(),
        m,
        beta,
        omwb,
        theta,
    };

    let (ci, cj) = g.center();
    let start = State { h: imm.h.values[g.idx(ci, cj)], psi: psi0[g.idx(ci, cj)] };
    let mut h_out = vec![C::new(R::zero(), R::zero()); n];
    let mut psi_out = vec![R::zero(); n];
    let mut row_states = vec![start; g.n_u];
    march_line(&data, cj, Dir::U, ci, start, p.steps, g.n_u, |i, s| {
        row_states[i] = s;
    })?;
    for i in 0..g.n_u {
        march_line(&data, i, Dir::V, cj, row_states[i], p.steps, g.n_v, |j, s| {
            let k = g.idx(i, j);
            h_out[k] = s.h;
            psi_out[k] = s.psi;
        })?;
    }
    let h_theta = Field::new(g, h_out);
    let psi_theta = Field::new(g, psi_out);

    // constructed dh^theta at the nodes: the integrability witness
    let mut hw_c = Vec::with_capacity(n);
    let mut hwb_c = Vec::with_capacity(n);
    for k in 0..n {
        let sigma = imm.manifold.sigma(h_theta.values[k])?;
        let e_psi = C::from_polar(R::one(), psi_theta.values[k]);
        hw_c.push(
            C::from_polar(data.m[k] * data.om[k].exp() / sigma, data.beta[k] + theta) * e_psi,
        );
        hwb_c.push(
            C::from_polar(data.m[k] * (-data.om[k]).exp() / sigma, -(data.beta[k] + theta))
                * e_psi,
        );
    }
    let loop_defect = stencil::max_cell_circulation(&g, &hw_c, &hwb_c);
    let tol_loop =
        p.tol_loop.unwrap_or_else(|| R::lit(tolerances::LOOP_TOL_PER_H) * g.spacing());
    if loop_defect > tol_loop {
        return Err(Error::LoopDefectExceeded {
            defect: loop_defect.to_f64().unwrap_or(f64::NAN),
            tolerance: tol_loop.to_f64().unwrap_or(f64::NAN),
        });
    }

    // height: f_theta = Re int e^{i theta} eta, eta = -2i m e^{i beta}
    let two = R::lit(2.0);
    let q: Vec<C<R>> = (0..n)
        .map(|k| C::from_polar(two * data.m[k], data.beta[k] + theta - R::PI() / two))
        .collect();
    let (f_theta, _) = integrate_height_q(&g, &q, p.tol_loop)?;

    let member = Immersion::from_fields(imm.manifold, h_theta, f_theta, imm.wf.convention)?;

    // Hopf rotation law re-measured with independent stencils
    let rot = C::from_polar(R::one(), theta + theta);
    let hopf_theta = wdata::hopf(&member.harmonic_field());
    let mut hopf_rotation_error = R::zero();
    for k in 0..n {
        hopf_rotation_error =
            hopf_rotation_error.max((hopf_theta.values[k] - rot * imm.wf.phi.values[k]).norm());
    }

    Ok(FamilyMember { theta, imm: member, loop_defect, hopf_rotation_error, psi_theta })
}

/// The conjugate immersion: the `theta = pi/2` associate.
pub fn conjugate<R: Real>(imm: &Immersion<R>) -> Result<FamilyMember<R>> {
    make_associate(imm, &AssociateParams::new(R::PI() * R::lit(0.5)))
}

/// Per-theta verification of the family laws.
#[derive(Clone, Debug)]
pub struct FamilyRow<R: Real> {
    pub theta: R,
    /// `Linf |Q(h^theta) - e^{2 i theta} Q|` and the scale `max |Q|`.
    pub hopf_error: R,
    pub hopf_scale: R,
    /// `Linf |lambda^2_theta - lambda^2|` and the scale `max lambda^2`.
    pub metric_error: R,
    pub metric_scale: R,
    /// samplewise `max | |N_3(X_theta)| - |N_3(X)| |`.
    pub n3_error: R,
    /// `min(Linf|omega^theta - omega|, Linf|omega^theta + omega|)` from the
    /// re-decomposed member.
    pub omega_error: R,
    pub loop_defect: R,
}

/// Builds the requested members and checks metric invariance, the Hopf
/// rotation law, `N_3` invariance and `omega^theta = +-omega`.
pub fn verify_family<R: Real>(
    imm: &Immersion<R>,
    thetas: &[R],
    steps: usize,
) -> Result<Vec<FamilyRow<R>>> {
    let mut rows = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        let member = make_associate(imm, &AssociateParams { theta, steps, tol_loop: None })?;
        let n = imm.grid.len();
        let mut metric_error = R::zero();
        let mut metric_scale = R::zero();
        let mut n3_error = R::zero();
        for k in 0..n {
            metric_error =
                metric_error.max((member.imm.lambda_sq.values[k] - imm.lambda_sq.values[k]).abs());
            metric_scale = metric_scale.max(imm.lambda_sq.values[k]);
            n3_error = n3_error.max((member.imm.n3(k).abs() - imm.n3(k).abs()).abs());
        }
        let mut same = R::zero();
        let mut flipped = R::zero();
        let om_theta = member.imm.wf.omega_geometric();
        let om = imm.wf.omega_geometric();
        for k in 0..n {
            if member.imm.wf.mask[k] && imm.wf.mask[k] {
                same = same.max((om_theta.values[k] - om.values[k]).abs());
                flipped = flipped.max((om_theta.values[k] + om.values[k]).abs());
            }
        }
        let hopf_scale = imm.wf.phi.linf();
        rows.push(FamilyRow {
            theta,
            hopf_error: member.hopf_rotation_error,
            hopf_scale,
            metric_error,
            metric_scale,
            n3_error,
            omega_error: same.min(flipped),
            loop_defect: member.loop_defect,
        });
    }
    Ok(rows)
}

/// Result of a congruence test between two immersions on the same grid.
#[derive(Clone, Debug)]
pub struct Congruence<R: Real> {
    pub isometry: AmbientIsometry<R>,
    /// Max product-metric distance between `iso . a` and `b` over all samples.
    pub residual: R,
}

/// Fits an ambient isometry mapping `a` onto `b` samplewise and reports the
/// worst product-metric distance.  Both orientation classes of the base and
/// both vertical signs are searched.
pub fn congruence_test<R: Real>(a: &Immersion<R>, b: &Immersion<R>) -> Result<Congruence<R>> {
    if a.manifold != b.manifold {
        return Err(Error::UnsupportedManifold { required: "identical base manifolds" });
    }
    if a.grid != b.grid {
        return Err(Error::SchemaMismatch("congruence test needs a common grid".into()));
    }
    let g = a.grid;
    // subsample for the base fit
    let target = 600usize;
    let stride = ((g.len() as f64 / target as f64).sqrt().ceil() as usize).max(1);
    let mut pairs = Vec::new();
    for j in (0..g.n_v).step_by(stride) {
        for i in (0..g.n_u).step_by(stride) {
            let k = g.idx(i, j);
            pairs.push((a.h.values[k], b.h.values[k]));
        }
    }
    let fit = fit_isometry(a.manifold, &pairs)?;
    let base = fit.isometry.base;
    // vertical part: the sign and shift minimising the worst deviation
    let n = g.len();
    let mut best: Option<(bool, R, R)> = None;
    for flip in [false, true] {
        let mut lo = R::infinity();
        let mut hi = -R::infinity();
        for k in 0..n {
            let fa = if flip { -a.f.values[k] } else { a.f.values[k] };
            let d = b.f.values[k] - fa;
            lo = lo.min(d);
            hi = hi.max(d);
        }
        let shift = (lo + hi) * R::lit(0.5);
        let err = (hi - lo) * R::lit(0.5);
        if best.as_ref().map_or(true, |&(_, _, e)| err < e) {
            best = Some((flip, shift, err));
        }
    }
    let (flip, shift, _) = best.unwrap();
    let iso = AmbientIsometry { base, vertical_shift: shift, vertical_flip: flip };
    let mut residual = R::zero();
    for k in 0..n {
        let dm = a
            .manifold
            .base_distance(base.apply(a.h.values[k]), b.h.values[k])
            .unwrap_or_else(|_| R::lit(1e6));
        let dt = iso.apply_height(a.f.values[k]) - b.f.values[k];
        residual = residual.max((dm * dm + dt * dt).sqrt());
    }
    Ok(Congruence { isometry: iso, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::MobiusMap;
    use crate::catalog;
    use crate::grid::GridDomain;

    #[test]
    fn theta_zero_is_identity_on_cylinder() {
        let g = GridDomain::square(-0.6f64, 0.6, 33).unwrap();
        let imm = catalog::cylinder::<f64>(std::f64::consts::PI, 0.0)
            .sample_immersion(g)
            .unwrap();
        let member = make_associate(&imm, &AssociateParams::new(0.0)).unwrap();
        let mut dh = 0.0f64;
        let mut df = 0.0f64;
        for k in 0..g.len() {
            dh = dh.max((member.imm.h.values[k] - imm.h.values[k]).norm());
            df = df.max((member.imm.f.values[k] - imm.f.values[k]).abs());
        }
        assert!(dh < 1e-9, "h deviation {dh}");
        assert!(df < 1e-9, "f deviation {df}");
        assert!(member.loop_defect < 1e-9);
    }

    #[test]
    fn euclidean_conjugate_of_helicoid_is_catenoid() {
        // classical associate family: the marched pi/2 member must be a
        // translate of the catenoid
        let g = GridDomain::square(-0.6f64, 0.6, 65).unwrap();
        let heli = catalog::helicoid_e3::<f64>().sample_immersion(g).unwrap();
        let star = conjugate(&heli).unwrap();
        let cat = catalog::catenoid_e3::<f64>().sample_immersion(g).unwrap();
        let cong = congruence_test(&star.imm, &cat).unwrap();
        assert!(cong.residual < 1e-6, "congruence residual {}", cong.residual);
        // the analytic translate is exactly by -1
        let mut worst = 0.0f64;
        for k in 0..g.len() {
            worst = worst.max((star.imm.h.values[k] - (cat.h.values[k] - 1.0)).norm());
        }
        assert!(worst < 1e-7, "pointwise {worst}");
    }

    #[test]
    fn double_conjugate_returns_with_vertical_flip() {
        let g = GridDomain::square(-0.6f64, 0.6, 49).unwrap();
        let heli = catalog::helicoid_e3::<f64>().sample_immersion(g).unwrap();
        let once = conjugate(&heli).unwrap();
        let twice = conjugate(&once.imm).unwrap();
        let cong = congruence_test(&twice.imm, &heli).unwrap();
        assert!(cong.residual < 1e-6, "residual {}", cong.residual);
        assert!(cong.isometry.vertical_flip, "X** = (h, -f) up to isometry");
    }

    #[test]
    fn conjugate_cylinder_is_a_cylinder() {
        // single conjugation rotates Q to -1/4; the marched member is again
        // a geodesic cylinder (omega = 0, K = 0, N3 = 0, height = u - u_c,
        // base image on a diameter), with the roles of u and v exchanged.
        let g = GridDomain::square(-0.6f64, 0.6, 49).unwrap();
        let imm = catalog::cylinder::<f64>(std::f64::consts::PI, 0.0)
            .sample_immersion(g)
            .unwrap();
        let star = conjugate(&imm).unwrap();
        for k in 0..g.len() {
            assert!(star.imm.wf.omega.values[k].abs() < 1e-7);
            assert!(star.imm.n3(k).abs() < 1e-6);
        }
        for j in 0..g.n_v {
            for i in 0..g.n_u {
                let k = g.idx(i, j);
                assert!((star.imm.f.values[k] - g.u(i)).abs() < 1e-8);
                // image stays on a diameter through the centre
                let z = star.imm.h.values[k];
                assert!(z.norm() < 1e-9 || (z / z.norm()).im.abs() < 1e-6);
            }
        }
        let kk = star.imm.intrinsic_curvature().unwrap();
        assert!(kk.linf() < 1e-3);
    }

    #[test]
    fn congruence_recovers_random_motion() {
        let g = GridDomain::square(-0.6f64, 0.6, 33).unwrap();
        let imm = catalog::screw_motion::<f64>(1.0).sample_immersion(g).unwrap();
        let iso = AmbientIsometry {
            base: MobiusMap::from_params(
                BaseManifold::HyperbolicDisk,
                C::new(0.17, -0.23),
                0.9,
                false,
            ),
            vertical_shift: 0.7,
            vertical_flip: false,
        };
        let moved = imm.apply_isometry(&iso).unwrap();
        let cong = congruence_test(&imm, &moved).unwrap();
        assert!(cong.residual < 1e-8, "residual {}", cong.residual);
        assert!((cong.isometry.vertical_shift - 0.7).abs() < 1e-9);
    }

    #[test]
    fn family_laws_on_cylinder_sweep() {
        let g = GridDomain::square(-0.6f64, 0.6, 33).unwrap();
        let imm = catalog::cylinder::<f64>(std::f64::consts::PI, 0.0)
            .sample_immersion(g)
            .unwrap();
        let thetas = [0.0, std::f64::consts::FRAC_PI_6, std::f64::consts::FRAC_PI_2];
        let rows = verify_family(&imm, &thetas, 8).unwrap();
        for row in &rows {
            assert!(row.hopf_error / row.hopf_scale < 1e-6, "hopf {}", row.hopf_error);
            assert!(row.metric_error / row.metric_scale < 1e-6);
            assert!(row.n3_error < 1e-6);
            assert!(row.omega_error < 1e-6);
        }
    }
}
