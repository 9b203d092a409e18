//! The three base manifolds in a single conformal chart, their isometries,
//! and least-squares isometry fitting.
//!
//! The chart conventions are fixed once for the whole crate:
//! Euclidean plane `sigma = 1`; hyperbolic plane as the unit disk with
//! `sigma(z) = 2/(1 - |z|^2)`; sphere in the stereographic chart with
//! `sigma(z) = 2/(1 + |z|^2)`.  Orientation-preserving isometries of all
//! three are Moebius maps `z -> e^{i phi} (z - a)/(1 -+ conj(a) z)` (with `-`
//! for the disk, `+` for the sphere, and the affine limit for the plane);
//! orientation-reversing ones compose with `conj` first.

use crate::error::{Error, Result};
use crate::scalar::{cr, Real, C};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaseManifold {
    Euclidean,
    HyperbolicDisk,
    SphereStereographic,
}

/// Chart radius beyond which stereographic sphere samples are rejected
/// (conformal-factor underflow near the antipode of the chart origin).
pub const SPHERE_CHART_RADIUS: f64 = 10.0;

impl BaseManifold {
    /// Constant Gauss curvature `K_M`.
    pub fn curvature<R: Real>(self) -> R {
        match self {
            BaseManifold::Euclidean => R::zero(),
            BaseManifold::HyperbolicDisk => -R::one(),
            BaseManifold::SphereStereographic => R::one(),
        }
    }

    pub fn chart_contains<R: Real>(self, z: C<R>) -> bool {
        match self {
            BaseManifold::Euclidean => z.re.is_finite() && z.im.is_finite(),
            BaseManifold::HyperbolicDisk => z.norm_sqr() < R::one(),
            BaseManifold::SphereStereographic => z.norm() <= R::lit(SPHERE_CHART_RADIUS),
        }
    }

    fn chart_err<R: Real>(z: C<R>) -> Error {
        Error::OutOfChart {
            re: z.re.to_f64().unwrap_or(f64::NAN),
            im: z.im.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Conformal factor `sigma(z)`.
    pub fn sigma<R: Real>(self, z: C<R>) -> Result<R> {
        if !self.chart_contains(z) {
            return Err(Self::chart_err(z));
        }
        let two = R::lit(2.0);
        Ok(match self {
            BaseManifold::Euclidean => R::one(),
            BaseManifold::HyperbolicDisk => two / (R::one() - z.norm_sqr()),
            BaseManifold::SphereStereographic => two / (R::one() + z.norm_sqr()),
        })
    }

    pub fn log_sigma<R: Real>(self, z: C<R>) -> Result<R> {
        Ok(self.sigma(z)?.ln())
    }

    /// Euclidean gradient of `log sigma` as the vector `L_x + i L_y`
    /// (analytic, no finite differencing).
    pub fn grad_log_sigma<R: Real>(self, z: C<R>) -> Result<C<R>> {
        if !self.chart_contains(z) {
            return Err(Self::chart_err(z));
        }
        let two = R::lit(2.0);
        Ok(match self {
            BaseManifold::Euclidean => C::new(R::zero(), R::zero()),
            BaseManifold::HyperbolicDisk => z * (two / (R::one() - z.norm_sqr())),
            BaseManifold::SphereStereographic => -z * (two / (R::one() + z.norm_sqr())),
        })
    }

    /// Wirtinger derivative `(log sigma)_z = (L_x - i L_y)/2`.
    pub fn log_sigma_z<R: Real>(self, z: C<R>) -> Result<C<R>> {
        let g = self.grad_log_sigma(z)?;
        Ok(C::new(g.re, -g.im) * R::lit(0.5))
    }

    /// Geodesic distance in the metric `sigma^2 |dz|^2`.
    pub fn base_distance<R: Real>(self, z1: C<R>, z2: C<R>) -> Result<R> {
        if !self.chart_contains(z1) {
            return Err(Self::chart_err(z1));
        }
        if !self.chart_contains(z2) {
            return Err(Self::chart_err(z2));
        }
        let two = R::lit(2.0);
        Ok(match self {
            BaseManifold::Euclidean => (z1 - z2).norm(),
            BaseManifold::HyperbolicDisk => {
                let m = (z1 - z2) / (C::new(R::one(), R::zero()) - z1 * z2.conj());
                two * m.norm().min(R::one() - R::eps()).atanh()
            }
            BaseManifold::SphereStereographic => {
                let num = (z1 - z2).norm();
                let den = (C::new(R::one(), R::zero()) + z1 * z2.conj()).norm();
                two * num.atan2(den)
            }
        })
    }

    fn cli_name(self) -> &'static str {
        match self {
            BaseManifold::Euclidean => "euclidean",
            BaseManifold::HyperbolicDisk => "hyperbolic-disk",
            BaseManifold::SphereStereographic => "sphere-stereographic",
        }
    }

    pub fn to_tag(self) -> String {
        self.cli_name().to_string()
    }

    pub fn from_tag(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(BaseManifold::Euclidean),
            "hyperbolic-disk" => Ok(BaseManifold::HyperbolicDisk),
            "sphere-stereographic" => Ok(BaseManifold::SphereStereographic),
            other => Err(Error::SchemaMismatch(format!("unknown manifold tag `{other}`"))),
        }
    }
}

/// Moebius-type base isometry `z -> (a z' + b)/(c z' + d)` with
/// `z' = conj(z)` when `conjugate` is set.
#[derive(Clone, Copy, Debug)]
pub struct MobiusMap<R: Real> {
    pub a: C<R>,
    pub b: C<R>,
    pub c: C<R>,
    pub d: C<R>,
    pub conjugate: bool,
}

impl<R: Real> MobiusMap<R> {
    pub fn identity() -> Self {
        Self {
            a: cr(R::one()),
            b: cr(R::zero()),
            c: cr(R::zero()),
            d: cr(R::one()),
            conjugate: false,
        }
    }

    pub fn apply(&self, z: C<R>) -> C<R> {
        let z = if self.conjugate { z.conj() } else { z };
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// |d(gamma)/dz| at `z` (same modulus for the anti-holomorphic case).
    pub fn derivative_norm(&self, z: C<R>) -> R {
        let z = if self.conjugate { z.conj() } else { z };
        let den = self.c * z + self.d;
        (self.a * self.d - self.b * self.c).norm() / den.norm_sqr()
    }

    /// Canonical 3-parameter isometry of `manifold`:
    /// plane `e^{i phi}(z - a)`, disk `e^{i phi}(z - a)/(1 - conj(a) z)`,
    /// sphere `e^{i phi}(z - a)/(1 + conj(a) z)`.
    pub fn from_params(manifold: BaseManifold, a: C<R>, phi: R, conjugate: bool) -> Self {
        let e = C::new(phi.cos(), phi.sin());
        let (c, d) = match manifold {
            BaseManifold::Euclidean => (cr(R::zero()), cr(R::one())),
            BaseManifold::HyperbolicDisk => (-a.conj(), cr(R::one())),
            BaseManifold::SphereStereographic => (a.conj(), cr(R::one())),
        };
        Self { a: e, b: -e * a, c, d, conjugate }
    }

    pub fn compose_conj(mut self) -> Self {
        // gamma o conj: flip the conjugation flag and conjugate nothing else,
        // because conj is applied to the input first.
        self.conjugate = !self.conjugate;
        self
    }
}

/// Ambient isometry of `M x R`: base Moebius part, vertical translation and
/// optional vertical flip (`f -> -f + shift`).
#[derive(Clone, Copy, Debug)]
pub struct AmbientIsometry<R: Real> {
    pub base: MobiusMap<R>,
    pub vertical_shift: R,
    pub vertical_flip: bool,
}

impl<R: Real> AmbientIsometry<R> {
    pub fn identity() -> Self {
        Self { base: MobiusMap::identity(), vertical_shift: R::zero(), vertical_flip: false }
    }

    pub fn apply_height(&self, f: R) -> R {
        let s = if self.vertical_flip { -f } else { f };
        s + self.vertical_shift
    }

    /// Samples `sigma(gamma z) |gamma'(z)| = sigma(z)` over a probe set.
    pub fn verify_base_isometry(&self, manifold: BaseManifold, probes: &[C<R>], tol: R) -> bool {
        probes.iter().all(|&z| {
            match (manifold.sigma(z), manifold.sigma(self.base.apply(z))) {
                (Ok(s0), Ok(s1)) => (s1 * self.base.derivative_norm(z) - s0).abs() <= tol * s0,
                _ => false,
            }
        })
    }
}

/// Result of a base-isometry fit.
#[derive(Clone, Debug)]
pub struct IsometryFit<R: Real> {
    pub isometry: AmbientIsometry<R>,
    /// Max geodesic distance between mapped sources and targets.
    pub residual: R,
}

/// Degeneracy guard: smallest singular value of the centred, scale-normalised
/// source design matrix.
fn configuration_sigma_min<R: Real>(pts: &[C<R>]) -> R {
    let n = R::from_usize(pts.len()).unwrap();
    let mean = pts.iter().fold(C::new(R::zero(), R::zero()), |s, &p| s + p) / n;
    let mut sxx = R::zero();
    let mut syy = R::zero();
    let mut sxy = R::zero();
    let mut scale = R::zero();
    for &p in pts {
        let d = p - mean;
        sxx += d.re * d.re;
        syy += d.im * d.im;
        sxy += d.re * d.im;
        scale = scale.max(d.norm());
    }
    if scale <= R::zero() {
        return R::zero();
    }
    let s2 = scale * scale;
    let (a, b, c) = (sxx / s2, syy / s2, sxy / s2);
    // eigenvalues of the 2x2 second-moment matrix
    let tr = a + b;
    let det = a * b - c * c;
    let disc = (tr * tr * R::lit(0.25) - det).max(R::zero()).sqrt();
    let lam_min = (tr * R::lit(0.5) - disc).max(R::zero());
    (lam_min / n).sqrt()
}

fn pair_residual<R: Real>(
    manifold: BaseManifold,
    map: &MobiusMap<R>,
    pairs: &[(C<R>, C<R>)],
) -> R {
    let mut worst = R::zero();
    for &(s, t) in pairs {
        let d = manifold
            .base_distance(map.apply(s), t)
            .unwrap_or_else(|_| R::lit(1e6));
        worst = worst.max(d);
    }
    worst
}

fn sum_sq_residual<R: Real>(
    manifold: BaseManifold,
    map: &MobiusMap<R>,
    pairs: &[(C<R>, C<R>)],
) -> R {
    pairs.iter().fold(R::zero(), |acc, &(s, t)| {
        let d = manifold
            .base_distance(map.apply(s), t)
            .unwrap_or_else(|_| R::lit(1e6));
        acc + d * d
    })
}

/// Moebius translation taking `0` to `p` in the given geometry.
fn translation_to<R: Real>(manifold: BaseManifold, p: C<R>) -> MobiusMap<R> {
    match manifold {
        BaseManifold::Euclidean => MobiusMap {
            a: cr(R::one()),
            b: p,
            c: cr(R::zero()),
            d: cr(R::one()),
            conjugate: false,
        },
        BaseManifold::HyperbolicDisk => MobiusMap {
            a: cr(R::one()),
            b: p,
            c: p.conj(),
            d: cr(R::one()),
            conjugate: false,
        },
        BaseManifold::SphereStereographic => MobiusMap {
            a: cr(R::one()),
            b: p,
            c: -p.conj(),
            d: cr(R::one()),
            conjugate: false,
        },
    }
}

fn compose<R: Real>(f: &MobiusMap<R>, g: &MobiusMap<R>) -> MobiusMap<R> {
    // (f o g), both holomorphic
    assert!(!f.conjugate && !g.conjugate);
    MobiusMap {
        a: f.a * g.a + f.b * g.c,
        b: f.a * g.b + f.b * g.d,
        c: f.c * g.a + f.d * g.c,
        d: f.c * g.b + f.d * g.d,
        conjugate: false,
    }
}

/// Extracts canonical parameters `(a, phi)` from a holomorphic isometry by
/// probing: `a = gamma^{-1}(0)` is where the map sends to the origin.
fn canonical_params<R: Real>(map: &MobiusMap<R>) -> (C<R>, R) {
    // gamma(z) = e^{i phi}(z - a)/(1 -+ conj(a) z): zero at z = a
    let a = -map.b / map.a;
    // phase from the derivative at a: gamma'(a) = e^{i phi}/(1 -+ |a|^2) > 0 factor
    let den = map.c * a + map.d;
    let deriv = (map.a * map.d - map.b * map.c) / (den * den);
    (a, deriv.arg())
}

fn gauss_newton_refine<R: Real>(
    manifold: BaseManifold,
    pairs: &[(C<R>, C<R>)],
    init_a: C<R>,
    init_phi: R,
    conjugate: bool,
) -> (MobiusMap<R>, R) {
    // conjugate sources once so the optimisation is over holomorphic maps
    let src: Vec<(C<R>, C<R>)> = pairs
        .iter()
        .map(|&(s, t)| (if conjugate { s.conj() } else { s }, t))
        .collect();
    let mut p = [init_a.re, init_a.im, init_phi];
    let build = |p: &[R; 3]| {
        MobiusMap::from_params(manifold, C::new(p[0], p[1]), p[2], false)
    };
    let mut cost = sum_sq_residual(manifold, &build(&p), &src);
    let delta = R::lit(1e-7);
    for _ in 0..40 {
        // numeric gradient + Gauss-Newton style normal equations on the
        // scalar cost (3 parameters, central differences)
        let mut grad = [R::zero(); 3];
        let mut hess = [[R::zero(); 3]; 3];
        let probe = |q: &[R; 3]| sum_sq_residual(manifold, &build(q), &src);
        for k in 0..3 {
            let mut qp = p;
            let mut qm = p;
            qp[k] += delta;
            qm[k] -= delta;
            grad[k] = (probe(&qp) - probe(&qm)) / (delta + delta);
        }
        for k in 0..3 {
            for l in k..3 {
                let mut qpp = p;
                qpp[k] += delta;
                qpp[l] += delta;
                let mut qpm = p;
                qpm[k] += delta;
                qpm[l] -= delta;
                let mut qmp = p;
                qmp[k] -= delta;
                qmp[l] += delta;
                let mut qmm = p;
                qmm[k] -= delta;
                qmm[l] -= delta;
                let h = (probe(&qpp) - probe(&qpm) - probe(&qmp) + probe(&qmm))
                    / (R::lit(4.0) * delta * delta);
                hess[k][l] = h;
                hess[l][k] = h;
            }
        }
        // Levenberg-damped solve of the 3x3 system
        let mut lambda = R::lit(1e-8);
        let mut improved = false;
        for _ in 0..8 {
            let mut m = hess;
            for k in 0..3 {
                m[k][k] += lambda;
            }
            if let Some(step) = solve3(&m, &grad) {
                let q = [p[0] - step[0], p[1] - step[1], p[2] - step[2]];
                if manifold != BaseManifold::Euclidean {
                    // keep the pole parameter inside the chart
                    let an = C::new(q[0], q[1]).norm();
                    if manifold == BaseManifold::HyperbolicDisk && an >= R::lit(0.999999) {
                        lambda = lambda * R::lit(10.0);
                        continue;
                    }
                }
                let c = sum_sq_residual(manifold, &build(&q), &src);
                if c < cost {
                    p = q;
                    cost = c;
                    improved = true;
                    break;
                }
            }
            lambda = lambda * R::lit(10.0);
        }
        if !improved || cost < R::lit(1e-28) {
            break;
        }
    }
    let mut map = build(&p);
    map.conjugate = conjugate;
    let res = pair_residual(manifold, &map, pairs);
    (map, res)
}

fn solve3<R: Real>(m: &[[R; 3]; 3], b: &[R; 3]) -> Option<[R; 3]> {
    let mut a = *m;
    let mut x = *b;
    for col in 0..3 {
        let mut piv = col;
        for r in col + 1..3 {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if a[piv][col].abs() < R::lit(1e-300) {
            return None;
        }
        a.swap(col, piv);
        x.swap(col, piv);
        for r in col + 1..3 {
            let f = a[r][col] / a[col][col];
            for c in col..3 {
                let s = a[col][c];
                a[r][c] = a[r][c] - f * s;
            }
            let s = x[col];
            x[r] = x[r] - f * s;
        }
    }
    let mut out = [R::zero(); 3];
    for r in (0..3).rev() {
        let mut s = x[r];
        for c in r + 1..3 {
            s = s - a[r][c] * out[c];
        }
        out[r] = s / a[r][r];
    }
    Some(out)
}

/// Least-squares base isometry from point correspondences.
///
/// Initialisation is Procrustes-style: anchor the pair nearest the source
/// centroid exactly and estimate the rotation from the remaining pairs; a
/// damped Gauss-Newton pass then minimises the summed squared geodesic
/// distances.  Both orientation classes are searched.
pub fn fit_isometry<R: Real>(
    manifold: BaseManifold,
    pairs: &[(C<R>, C<R>)],
) -> Result<IsometryFit<R>> {
    if pairs.len() < 3 {
        return Err(Error::DegenerateConfiguration { sigma_min: 0.0 });
    }
    let sources: Vec<C<R>> = pairs.iter().map(|&(s, _)| s).collect();
    let smin = configuration_sigma_min(&sources);
    if smin < R::lit(1e-8) {
        return Err(Error::DegenerateConfiguration {
            sigma_min: smin.to_f64().unwrap_or(0.0),
        });
    }

    let mut best: Option<(MobiusMap<R>, R)> = None;
    for conjugate in [false, true] {
        let src: Vec<(C<R>, C<R>)> = pairs
            .iter()
            .map(|&(s, t)| (if conjugate { s.conj() } else { s }, t))
            .collect();
        // anchor: source closest to the centroid
        let n = R::from_usize(src.len()).unwrap();
        let centroid = src.iter().fold(C::new(R::zero(), R::zero()), |a, &(s, _)| a + s) / n;
        let (anchor_s, anchor_t) = src
            .iter()
            .min_by(|x, y| {
                (x.0 - centroid)
                    .norm()
                    .partial_cmp(&(y.0 - centroid).norm())
                    .unwrap()
            })
            .copied()
            .unwrap();
        // rotation estimate in the anchored frame
        let t_from = translation_to(manifold, anchor_s);
        let t_to = translation_to(manifold, anchor_t);
        let inv_from = MobiusMap {
            a: t_from.d,
            b: -t_from.b,
            c: -t_from.c,
            d: t_from.a,
            conjugate: false,
        };
        let inv_to = MobiusMap { a: t_to.d, b: -t_to.b, c: -t_to.c, d: t_to.a, conjugate: false };
        let mut rot = C::new(R::zero(), R::zero());
        for &(s, t) in &src {
            let zs = inv_from.apply(s);
            let zt = inv_to.apply(t);
            if zs.norm() > R::lit(1e-9) && zt.norm() > R::lit(1e-9) {
                rot += (zt / zs) / (zt / zs).norm();
            }
        }
        let phi0 = if rot.norm() > R::lit(1e-12) { rot.arg() } else { R::zero() };
        let e = C::new(phi0.cos(), phi0.sin());
        let rotation =
            MobiusMap { a: e, b: cr(R::zero()), c: cr(R::zero()), d: cr(R::one()), conjugate: false };
        let init = compose(&t_to, &compose(&rotation, &inv_from));
        let (ia, iphi) = canonical_params(&init);
        let (map, res) = gauss_newton_refine(manifold, pairs, ia, iphi, conjugate);
        if best.as_ref().map_or(true, |(_, r)| res < *r) {
            best = Some((map, res));
        }
    }
    let (base, residual) = best.unwrap();
    Ok(IsometryFit {
        isometry: AmbientIsometry { base, vertical_shift: R::zero(), vertical_flip: false },
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_values() {
        let e = BaseManifold::Euclidean;
        let h = BaseManifold::HyperbolicDisk;
        let s = BaseManifold::SphereStereographic;
        assert_eq!(e.sigma(C::new(3.7f64, -2.0)).unwrap(), 1.0);
        assert_eq!(h.sigma(C::new(0.0f64, 0.0)).unwrap(), 2.0);
        // sigma(1) = 2/(1+1) = 1 on the sphere chart
        assert_eq!(s.sigma(C::new(1.0f64, 0.0)).unwrap(), 1.0);
        assert!(h.sigma(C::new(1.0f64, 0.0)).is_err());
        assert!(s.sigma(C::new(10.5f64, 0.0)).is_err());
    }

    #[test]
    fn grad_log_sigma_values() {
        let e = BaseManifold::Euclidean;
        let h = BaseManifold::HyperbolicDisk;
        assert_eq!(e.grad_log_sigma(C::new(0.3f64, 0.4)).unwrap(), C::new(0.0, 0.0));
        assert_eq!(h.grad_log_sigma(C::new(0.0f64, 0.0)).unwrap(), C::new(0.0, 0.0));
        let g = h.grad_log_sigma(C::new(0.5f64, 0.0)).unwrap();
        assert!((g.re - 4.0 / 3.0).abs() < 1e-15);
        assert!(g.im.abs() < 1e-15);
    }

    #[test]
    fn grad_log_sigma_matches_finite_differences() {
        let d = 1e-6;
        for m in [
            BaseManifold::Euclidean,
            BaseManifold::HyperbolicDisk,
            BaseManifold::SphereStereographic,
        ] {
            for &z in &[C::new(0.2f64, -0.3), C::new(-0.4, 0.1)] {
                let g = m.grad_log_sigma(z).unwrap();
                let fx = (m.log_sigma(z + C::new(d, 0.0)).unwrap()
                    - m.log_sigma(z - C::new(d, 0.0)).unwrap())
                    / (2.0 * d);
                let fy = (m.log_sigma(z + C::new(0.0, d)).unwrap()
                    - m.log_sigma(z - C::new(0.0, d)).unwrap())
                    / (2.0 * d);
                assert!((g.re - fx).abs() < 1e-8 && (g.im - fy).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn base_distances() {
        let e = BaseManifold::Euclidean;
        assert!((e.base_distance(C::new(0.0f64, 0.0), C::new(3.0, 4.0)).unwrap() - 5.0).abs() < 1e-14);
        let h = BaseManifold::HyperbolicDisk;
        for &r in &[0.1f64, 0.5, 0.9] {
            let d = h.base_distance(C::new(0.0, 0.0), C::new(r, 0.0)).unwrap();
            assert!((d - 2.0 * r.atanh()).abs() < 1e-13);
        }
        let s = BaseManifold::SphereStereographic;
        let z = C::new(0.3f64, -0.2);
        assert_eq!(s.base_distance(z, z).unwrap(), 0.0);
        // symmetry
        let z2 = C::new(-0.7f64, 0.4);
        assert!(
            (s.base_distance(z, z2).unwrap() - s.base_distance(z2, z).unwrap()).abs() < 1e-14
        );
    }

    #[test]
    fn canonical_isometries_preserve_sigma() {
        let probes: Vec<C<f64>> =
            vec![C::new(0.1, 0.2), C::new(-0.4, 0.3), C::new(0.6, -0.1), C::new(0.0, 0.0)];
        for m in [
            BaseManifold::Euclidean,
            BaseManifold::HyperbolicDisk,
            BaseManifold::SphereStereographic,
        ] {
            for conj in [false, true] {
                let iso = AmbientIsometry {
                    base: MobiusMap::from_params(m, C::new(0.21, -0.13), 0.8, conj),
                    vertical_shift: 0.0,
                    vertical_flip: false,
                };
                assert!(iso.verify_base_isometry(m, &probes, 1e-12));
            }
        }
    }

    #[test]
    fn fit_recovers_exact_rotation() {
        let m = BaseManifold::HyperbolicDisk;
        let gamma = MobiusMap::from_params(m, C::new(0.3f64, -0.2), 1.1, false);
        let pts: Vec<C<f64>> = (0..12)
            .map(|k| {
                let t = k as f64 * 0.5;
                C::new(0.5 * t.cos(), 0.4 * t.sin()) * 0.8
            })
            .collect();
        let pairs: Vec<(C<f64>, C<f64>)> = pts.iter().map(|&p| (p, gamma.apply(p))).collect();
        let fit = fit_isometry(m, &pairs).unwrap();
        assert!(fit.residual < 1e-10, "residual {}", fit.residual);
    }

    #[test]
    fn fit_identity_is_identity() {
        let m = BaseManifold::Euclidean;
        let pts: Vec<C<f64>> = vec![C::new(0.0, 0.0), C::new(1.0, 0.2), C::new(-0.3, 0.8), C::new(0.5, -0.6)];
        let pairs: Vec<_> = pts.iter().map(|&p| (p, p)).collect();
        let fit = fit_isometry(m, &pairs).unwrap();
        assert!(fit.residual < 1e-12);
        for &p in &pts {
            assert!((fit.isometry.base.apply(p) - p).norm() < 1e-10);
        }
    }

    #[test]
    fn fit_with_noise_stays_close() {
        let m = BaseManifold::HyperbolicDisk;
        let gamma = MobiusMap::from_params(m, C::new(-0.15f64, 0.1), 0.6, false);
        let pts: Vec<C<f64>> = (0..20)
            .map(|k| {
                let t = k as f64;
                C::new(0.06 * (t * 1.7).cos() * t.sqrt(), 0.05 * (t * 2.3).sin() * t.sqrt())
            })
            .collect();
        let pairs: Vec<(C<f64>, C<f64>)> = pts
            .iter()
            .enumerate()
            .map(|(k, &p)| {
                let eps = 1e-6;
                let n = C::new(
                    eps * ((k * 37 % 17) as f64 / 17.0 - 0.5),
                    eps * ((k * 23 % 13) as f64 / 13.0 - 0.5),
                );
                (p, gamma.apply(p) + n)
            })
            .collect();
        let fit = fit_isometry(m, &pairs).unwrap();
        assert!(fit.residual <= 1e-5, "residual {}", fit.residual);
    }

    #[test]
    fn fit_rejects_collinear() {
        let m = BaseManifold::Euclidean;
        let pairs: Vec<(C<f64>, C<f64>)> = (0..6)
            .map(|k| {
                let p = C::new(k as f64 * 0.1, 0.0);
                (p, p + C::new(0.2, 0.0))
            })
            .collect();
        assert!(matches!(
            fit_isometry(m, &pairs),
            Err(Error::DegenerateConfiguration { .. })
        ));
    }

    #[test]
    fn sigma_curvature_identity_by_stencil() {
        // -Delta0 log sigma / sigma^2 = K_M at interior samples, O(h^2)
        use crate::grid::{GridDomain, RealField};
        use crate::stencil::laplacian5;
        let check = |m: BaseManifold, n: usize| -> f64 {
            let g = GridDomain::square(-0.35f64, 0.35, n).unwrap();
            let ls = RealField::from_fn(g, |w| m.log_sigma(w).unwrap());
            let (lap, mask) = laplacian5(&ls);
            let mut worst = 0.0f64;
            for j in 0..g.n_v {
                for i in 0..g.n_u {
                    let k = g.idx(i, j);
                    if !mask[k] {
                        continue;
                    }
                    let z = g.point(i, j);
                    let s = m.sigma(z).unwrap();
                    let km: f64 = m.curvature();
                    worst = worst.max((-lap.values[k] / (s * s) - km).abs());
                }
            }
            worst
        };
        for m in [
            BaseManifold::Euclidean,
            BaseManifold::HyperbolicDisk,
            BaseManifold::SphereStereographic,
        ] {
            let (c, f) = (check(m, 33), check(m, 65));
            if m == BaseManifold::Euclidean {
                assert!(f < 1e-12);
            } else {
                assert!(c / f > 3.4, "order check failed: {c} / {f}");
                assert!(f < 5e-4);
            }
        }
    }
}
