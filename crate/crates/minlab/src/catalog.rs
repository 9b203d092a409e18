//! Closed-form example surfaces with analytic evaluators, serving as ground
//! truth for every residual operator.
//!
//! Profile-type entries (screw motion, helicoid and catenoid in the
//! hyperbolic product) are conformalised through antiderivatives of the form
//! `int ds / U(s)`; the antiderivatives are evaluated by adaptive
//! Gauss-Kronrod quadrature and inverted by bracketed Newton, with a
//! per-entry memo cache keyed on the parameter value (grid columns share it).

use crate::base::{BaseManifold, MobiusMap};
use crate::error::{Error, Result};
use crate::grid::{ComplexField, Field, GridDomain, RealField};
use crate::immersion::Immersion;
use crate::quad;
use crate::scalar::{cr, gudermann, Real, C};
use crate::tolerances;
use crate::wdata::OmegaConvention;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Analytic sample of an entry at a parameter point.
#[derive(Clone, Copy, Debug)]
pub struct PointData<R: Real> {
    pub h: C<R>,
    pub hw: C<R>,
    pub hwb: C<R>,
    pub f: R,
    pub phi: C<R>,
    pub omega: R,
}

type Eval<R> = Arc<dyn Fn(C<R>) -> Result<PointData<R>> + Send + Sync>;

/// A named example surface with closed-form evaluators.
#[derive(Clone)]
pub struct CatalogEntry<R: Real> {
    pub name: String,
    pub manifold: BaseManifold,
    pub params: Vec<(String, R)>,
    /// Expected constant intrinsic curvature, when the entry has one.
    pub expected_k: Option<R>,
    /// `(u_min, u_max, v_min, v_max)` of the default sampling window.
    pub default_domain: [R; 4],
    eval: Eval<R>,
}

impl<R: Real> std::fmt::Debug for CatalogEntry<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("name", &self.name)
            .field("manifold", &self.manifold)
            .field("params", &self.params)
            .finish()
    }
}

impl<R: Real> CatalogEntry<R> {
    pub fn eval(&self, w: C<R>) -> Result<PointData<R>> {
        (self.eval)(w)
    }

    /// Default grid with `n per side resolution over the entry's window.
    pub fn default_grid(&self, n: usize) -> Result<GridDomain<R>> {
        let [a, b, c, d] = self.default_domain;
        // keep cells square: derive n_v from the aspect ratio
        let du = (b - a) / R::from_usize(n - 1).unwrap();
        let span_v = d - c;
        let n_v = (span_v / du).round().to_usize().unwrap_or(0) + 1;
        GridDomain::new(a, b, c, c + du * R::from_usize(n_v - 1).unwrap(), n, n_v)
    }

    /// Samples `h` and `f` on a grid.
    pub fn sample_fields(&self, grid: GridDomain<R>) -> Result<(ComplexField<R>, RealField<R>)> {
        let mut h = Vec::with_capacity(grid.len());
        let mut f = Vec::with_capacity(grid.len());
        for j in 0..grid.n_v {
            for i in 0..grid.n_u {
                let d = self.eval(grid.point(i, j))?;
                h.push(d.h);
                f.push(d.f);
            }
        }
        Ok((Field::new(grid, h), Field::new(grid, f)))
    }

    /// Samples the entry and assembles the immersion (numeric decomposition,
    /// so the analytic data stays available as an independent oracle).
    pub fn sample_immersion(&self, grid: GridDomain<R>) -> Result<Immersion<R>> {
        let (h, f) = self.sample_fields(grid)?;
        Immersion::from_fields(self.manifold, h, f, OmegaConvention::default())
    }

    /// Entry precomposed with `w -> a w` (conformal reparameterisation):
    /// derivatives pick up `a`, the Hopf coefficient `a^2`.
    pub fn rescaled(&self, a: R) -> Self {
        let inner = self.eval.clone();
        let name = format!("{}@x{}", self.name, a);
        Self {
            name,
            manifold: self.manifold,
            params: self.params.clone(),
            expected_k: self.expected_k,
            default_domain: self.default_domain.map(|x| x / a),
            eval: Arc::new(move |w: C<R>| {
                let d = inner(w * a)?;
                Ok(PointData {
                    h: d.h,
                    hw: d.hw * a,
                    hwb: d.hwb * a,
                    f: d.f,
                    phi: d.phi * (a * a),
                    omega: d.omega,
                })
            }),
        }
    }
}

/// Inverts the odd antiderivative `F(x) = int_0^x g` (with even `g > 0`) at
/// `target`, by doubling bracket plus safeguarded Newton.  `F` is evaluated
/// with adaptive quadrature at every step.
fn invert_odd_antiderivative<R: Real>(
    g: &(impl Fn(R) -> R + ?Sized),
    target: R,
) -> Result<R> {
    if target == R::zero() {
        return Ok(R::zero());
    }
    let tol = R::lit(tolerances::QUADRATURE_TARGET);
    let t = target.abs();
    let value = |x: R| quad::integrate(|s| g(s), R::zero(), x, tol);
    let mut hi = R::lit(0.5);
    let mut f_hi = value(hi)?;
    let mut lo = R::zero();
    let mut f_lo = R::zero();
    let cap = R::lit(700.0);
    while f_hi < t {
        lo = hi;
        f_lo = f_hi;
        hi = hi + hi;
        if hi > cap {
            return Err(Error::DomainExceeded {
                u: target.to_f64().unwrap_or(f64::NAN),
                v: f64::NAN,
            });
        }
        f_hi = value(hi)?;
        if f_hi <= f_lo + R::lit(1e-15) * (R::one() + f_lo) && f_hi < t {
            // antiderivative saturated below target: outside the strip
            return Err(Error::DomainExceeded {
                u: target.to_f64().unwrap_or(f64::NAN),
                v: f64::NAN,
            });
        }
    }
    let mut x = lo + (hi - lo) * (t - f_lo) / (f_hi - f_lo).max(R::lit(1e-300));
    for _ in 0..80 {
        let fx = value(x)?;
        let err = fx - t;
        if err.abs() <= R::lit(10.0) * tol * (R::one() + t) {
            return Ok(x * target.signum());
        }
        if err > R::zero() {
            hi = x;
        } else {
            lo = x;
        }
        let slope = g(x);
        let mut next = x - err / slope;
        if !(next > lo && next < hi) {
            next = (lo + hi) * R::lit(0.5);
        }
        x = next;
    }
    Err(Error::QuadratureFailure { estimate: f64::NAN })
}

/// Memoised odd profile inversion keyed on the target value.
struct ProfileCache<R: Real> {
    map: Mutex<HashMap<u64, R>>,
}

impl<R: Real> ProfileCache<R> {
    fn new() -> Self {
        Self { map: Mutex::new(HashMap::new()) }
    }

    fn get(&self, target: R, g: &(impl Fn(R) -> R + ?Sized)) -> Result<R> {
        let key = target.to_f64().unwrap_or(f64::NAN).to_bits();
        if let Some(&v) = self.map.lock().unwrap().get(&key) {
            return Ok(v);
        }
        let v = invert_odd_antiderivative(g, target)?;
        self.map.lock().unwrap().insert(key, v);
        Ok(v)
    }
}

fn domain_err<R: Real>(w: C<R>) -> Error {
    Error::DomainExceeded {
        u: w.re.to_f64().unwrap_or(f64::NAN),
        v: w.im.to_f64().unwrap_or(f64::NAN),
    }
}

/// Vertical geodesic cylinder over the disk geodesic with ideal endpoints
/// `e^{i a}`, `e^{i b}`: flat (`K = 0`), vertical tangent plane everywhere
/// (`omega = 0`, `N_3 = 0`), Hopf coefficient `1/4`.
pub fn cylinder<R: Real>(angle_a: R, angle_b: R) -> CatalogEntry<R> {
    let a = C::new(angle_a.cos(), angle_a.sin());
    let b = C::new(angle_b.cos(), angle_b.sin());
    let det = a.re * b.im - a.im * b.re;
    let gamma = if det.abs() < R::lit(1e-12) {
        // diameter: rotation taking the segment (-1, 1) onto (a, b)
        MobiusMap { a: b, b: cr(R::zero()), c: cr(R::zero()), d: cr(R::one()), conjugate: false }
    } else {
        // centre of the circle orthogonal to the unit circle through a, b
        let x = (b.im - a.im) / det;
        let y = (a.re - b.re) / det;
        let centre = C::new(x, y);
        let r = (centre.norm_sqr() - R::one()).max(R::zero()).sqrt();
        let m = centre * (R::one() - r / centre.norm());
        let bt = (b - m) / (C::new(R::one(), R::zero()) - m.conj() * b);
        // T_m(bt * z)
        MobiusMap { a: bt, b: m, c: m.conj() * bt, d: cr(R::one()), conjugate: false }
    };
    let eval: Eval<R> = Arc::new(move |w: C<R>| {
        let half = R::lit(0.5);
        let z0 = C::new((w.re * half).tanh(), R::zero());
        let sech2 = {
            let c = (w.re * half).cosh();
            (c * c).recip()
        };
        let dz0 = sech2 * half;
        let den = gamma.c * z0 + gamma.d;
        let dgamma = (gamma.a * gamma.d - gamma.b * gamma.c) / (den * den);
        let h = gamma.apply(z0);
        let hw = dgamma * (dz0 * half);
        Ok(PointData {
            h,
            hw,
            hwb: hw,
            f: w.im,
            phi: C::new(R::lit(0.25), R::zero()),
            omega: R::zero(),
        })
    });
    CatalogEntry {
        name: "cylinder".into(),
        manifold: BaseManifold::HyperbolicDisk,
        params: vec![("a".into(), angle_a), ("b".into(), angle_b)],
        expected_k: Some(R::zero()),
        default_domain: [R::lit(-0.6), R::lit(0.6), R::lit(-0.6), R::lit(0.6)],
        eval,
    }
}

/// Scherk-type graph in `H^2 x R` invariant by hyperbolic translations.
///
/// In the half-plane model the graph is `t = ln((sqrt(x^2+y^2)+y)/x)`; in
/// conformal coordinates the surface is `z_hp = e^{u + i gd(v)}`, `f = v`,
/// transported to the disk by the Cayley map `(z - i)/(z + i)`.  The Hopf
/// coefficient is the constant `1/4`.
pub fn scherk_hyperbolic<R: Real>() -> CatalogEntry<R> {
    let eval: Eval<R> = Arc::new(move |w: C<R>| {
        if w.im <= R::lit(1e-9) {
            return Err(domain_err(w));
        }
        let half = R::lit(0.5);
        let sech = w.im.cosh().recip();
        let zhp = C::from_polar(w.re.exp(), gudermann(w.im));
        let zw = zhp * ((R::one() + sech) * half);
        let zwb = zhp * ((R::one() - sech) * half);
        let i = C::new(R::zero(), R::one());
        let den = zhp + i;
        let h = (zhp - i) / den;
        let dc = i * R::lit(2.0) / (den * den);
        Ok(PointData {
            h,
            hw: dc * zw,
            hwb: dc * zwb,
            f: w.im,
            phi: C::new(R::lit(0.25), R::zero()),
            omega: sech.atanh(),
        })
    });
    CatalogEntry {
        name: "scherk-h2".into(),
        manifold: BaseManifold::HyperbolicDisk,
        params: vec![],
        expected_k: None,
        default_domain: [R::lit(-0.6), R::lit(0.6), R::lit(0.4), R::lit(1.6)],
        eval,
    }
}

/// Height of the Scherk graph in the half-plane model (the closed form).
pub fn scherk_half_plane_height<R: Real>(x: R, y: R) -> R {
    (((x * x + y * y).sqrt() + y) / x).ln()
}

/// Screw-motion invariant minimal surface with constant intrinsic curvature
/// `K = -1`, from the profile `U(s) = sqrt(1 + d^2) cosh s`:
/// `rho = arcosh(U)`, conformal coordinate `u` with `du = ds / U`, height
/// integral `lambda(s)` and angle `Phi = v - lambda + d u`.
pub fn screw_motion<R: Real>(d: R) -> CatalogEntry<R> {
    let c = (R::one() + d * d).sqrt();
    let cache = Arc::new(ProfileCache::new());
    let lambda_cache = Arc::new(Mutex::new(HashMap::<u64, R>::new()));
    let eval: Eval<R> = Arc::new(move |w: C<R>| {
        let limit = R::PI() / (R::lit(2.0) * c);
        if w.re.abs() >= limit {
            return Err(domain_err(w));
        }
        // s(u): invert u = int_0^s dt / U(t)
        let s = cache
            .get(w.re, &|t: R| (c * t.cosh()).recip())
            .map_err(|_| domain_err(w))?;
        // lambda(s) = d int_0^s U/(U^2 - 1)
        let key = s.to_f64().unwrap_or(f64::NAN).to_bits();
        let lam = {
            let cached = lambda_cache.lock().unwrap().get(&key).copied();
            match cached {
                Some(v) => v,
                None => {
                    let v = quad::integrate(
                        |t: R| {
                            let u = c * t.cosh();
                            d * u / (u * u - R::one())
                        },
                        R::zero(),
                        s,
                        R::lit(tolerances::QUADRATURE_TARGET),
                    )?;
                    lambda_cache.lock().unwrap().insert(key, v);
                    v
                }
            }
        };
        let cosh_rho = c * s.cosh();
        let sinh_rho = (cosh_rho * cosh_rho - R::one()).sqrt();
        let phi_ang = w.im - lam + d * w.re;
        let e = C::from_polar(R::one(), phi_ang);
        let tanh_half = sinh_rho / (cosh_rho + R::one());
        let h = e * tanh_half;
        let sigma = cosh_rho + R::one();
        let shu = C::new(c * s.sinh() * cosh_rho, -d) * e / cr(sinh_rho);
        let shv = C::new(R::zero(), sinh_rho) * e;
        let i = C::new(R::zero(), R::one());
        let inv2s = (R::lit(2.0) * sigma).recip();
        let hw = (shu - i * shv) * inv2s;
        let hwb = (shu + i * shv) * inv2s;
        let dd = d;
        Ok(PointData {
            h,
            hw,
            hwb,
            f: dd * w.re + w.im,
            phi: C::new(R::one() - dd * dd, dd + dd) * R::lit(0.25),
            omega: s,
        })
    });
    CatalogEntry {
        name: "screw-motion".into(),
        manifold: BaseManifold::HyperbolicDisk,
        params: vec![("d".into(), d)],
        expected_k: Some(-R::one()),
        default_domain: [R::lit(-0.6), R::lit(0.6), R::lit(-0.6), R::lit(0.6)],
        eval,
    }
}

/// Helicoid in `H^2 x R` of pitch `ell`: `h = tanh(rho(u)/2) e^{iv}`,
/// `f = ell v`, with `u = int_0^rho dr / sqrt(sinh^2 r + ell^2)`.
/// Hopf coefficient `ell^2 / 4`, `omega = arsinh(sinh(rho)/ell)`.
pub fn helicoid_h2r<R: Real>(pitch: R) -> CatalogEntry<R> {
    let cache = Arc::new(ProfileCache::new());
    let ell = pitch;
    let eval: Eval<R> = Arc::new(move |w: C<R>| {
        let rho = cache
            .get(w.re, &|r: R| {
                let s = r.sinh();
                (s * s + ell * ell).sqrt().recip()
            })
            .map_err(|_| domain_err(w))?;
        let sinh_rho = rho.sinh();
        let cosh_rho = rho.cosh();
        let rho_p = (sinh_rho * sinh_rho + ell * ell).sqrt();
        let e = C::from_polar(R::one(), w.im);
        let h = e * (sinh_rho / (cosh_rho + R::one()));
        let sigma = cosh_rho + R::one();
        let shu = cr(rho_p) * e;
        let shv = C::new(R::zero(), sinh_rho) * e;
        let i = C::new(R::zero(), R::one());
        let inv2s = (R::lit(2.0) * sigma).recip();
        Ok(PointData {
            h,
            hw: (shu - i * shv) * inv2s,
            hwb: (shu + i * shv) * inv2s,
            f: ell * w.im,
            phi: C::new(ell * ell * R::lit(0.25), R::zero()),
            omega: (sinh_rho / ell).asinh(),
        })
    });
    CatalogEntry {
        name: "helicoid-h2r".into(),
        manifold: BaseManifold::HyperbolicDisk,
        params: vec![("pitch".into(), pitch)],
        expected_k: None,
        default_domain: [R::lit(-0.6), R::lit(0.6), R::lit(-0.6), R::lit(0.6)],
        eval,
    }
}

/// Catenoid in `H^2 x R` with neck parameter `c` (`sinh(rho_neck) = c`):
/// profile `cosh rho = sqrt(1 + c^2) cosh xi` with
/// `u = int_0^xi dt / sqrt((1+c^2) cosh^2 t - 1)`; `f = c u`,
/// Hopf coefficient `-c^2/4`.
pub fn catenoid_h2r<R: Real>(neck: R) -> CatalogEntry<R> {
    let cache = Arc::new(ProfileCache::new());
    let cn = neck;
    let eval: Eval<R> = Arc::new(move |w: C<R>| {
        let c2 = R::one() + cn * cn;
        let xi = cache
            .get(w.re, &|t: R| {
                let u2 = c2 * t.cosh() * t.cosh();
                (u2 - R::one()).sqrt().recip()
            })
            .map_err(|_| domain_err(w))?;
        let cosh_rho = c2.sqrt() * xi.cosh();
        let sinh_rho = (cosh_rho * cosh_rho - R::one()).sqrt();
        let rho_p = c2.sqrt() * xi.sinh();
        let e = C::from_polar(R::one(), w.im);
        let h = e * (sinh_rho / (cosh_rho + R::one()));
        let sigma = cosh_rho + R::one();
        let shu = cr(rho_p) * e;
        let shv = C::new(R::zero(), sinh_rho) * e;
        let i = C::new(R::zero(), R::one());
        let inv2s = (R::lit(2.0) * sigma).recip();
        Ok(PointData {
            h,
            hw: (shu - i * shv) * inv2s,
            hwb: (shu + i * shv) * inv2s,
            f: cn * w.re,
            phi: C::new(-cn * cn * R::lit(0.25), R::zero()),
            omega: (rho_p / cn).asinh(),
        })
    });
    CatalogEntry {
        name: "catenoid-h2r".into(),
        manifold: BaseManifold::HyperbolicDisk,
        params: vec![("neck".into(), neck)],
        expected_k: None,
        default_domain: [R::lit(-0.6), R::lit(0.6), R::lit(-0.6), R::lit(0.6)],
        eval,
    }
}

/// Flat plane slice `t = 0` in `R^3` (Hopf coefficient identically zero).
pub fn plane_e3<R: Real>() -> CatalogEntry<R> {
    let eval: Eval<R> = Arc::new(move |w: C<R>| {
        Ok(PointData {
            h: w,
            hw: cr(R::one()),
            hwb: cr(R::zero()),
            f: R::zero(),
            phi: cr(R::zero()),
            omega: R::infinity(),
        })
    });
    CatalogEntry {
        name: "plane-e3".into(),
        manifold: BaseManifold::Euclidean,
        params: vec![],
        expected_k: Some(R::zero()),
        default_domain: [R::lit(-0.6), R::lit(0.6), R::lit(-0.6), R::lit(0.6)],
        eval,
    }
}

/// Euclidean catenoid in the exponential chart:
/// `h = (e^w + e^{-wbar})/2 = cosh(u) e^{iv}`, `f = u`, Hopf `-1/4`.
pub fn catenoid_e3<R: Real>() -> CatalogEntry<R> {
    let eval: Eval<R> = Arc::new(move |w: C<R>| {
        let ew = w.exp();
        let emb = (-w.conj()).exp();
        let half = R::lit(0.5);
        Ok(PointData {
            h: (ew + emb) * half,
            hw: ew * half,
            hwb: -emb * half,
            f: w.re,
            phi: cr(R::lit(-0.25)),
            omega: w.re,
        })
    });
    CatalogEntry {
        name: "catenoid-e3".into(),
        manifold: BaseManifold::Euclidean,
        params: vec![],
        expected_k: None,
        default_domain: [R::lit(-0.6), R::lit(0.6), R::lit(-0.6), R::lit(0.6)],
        eval,
    }
}

/// Euclidean helicoid, conjugate of [`catenoid_e3`]:
/// `h = -i(e^w - e^{-wbar})/2 = -i sinh(u) e^{iv}`, `f = v`, Hopf `+1/4`.
pub fn helicoid_e3<R: Real>() -> CatalogEntry<R> {
    let eval: Eval<R> = Arc::new(move |w: C<R>| {
        let i = C::new(R::zero(), R::one());
        let ew = w.exp();
        let emb = (-w.conj()).exp();
        let half = R::lit(0.5);
        Ok(PointData {
            h: -i * (ew - emb) * half,
            hw: -i * ew * half,
            hwb: -i * emb * half,
            f: w.im,
            phi: cr(R::lit(0.25)),
            omega: w.re,
        })
    });
    CatalogEntry {
        name: "helicoid-e3".into(),
        manifold: BaseManifold::Euclidean,
        params: vec![],
        expected_k: None,
        default_domain: [R::lit(-0.6), R::lit(0.6), R::lit(-0.6), R::lit(0.6)],
        eval,
    }
}

/// Plane, helicoid and catenoid of `R^3` with their classical data.
pub fn euclidean_classics<R: Real>() -> Vec<CatalogEntry<R>> {
    vec![plane_e3(), helicoid_e3(), catenoid_e3()]
}

/// The canonical totally geodesic slice `Y(z) = (z, 0)` of `H^2 x R`,
/// pulled back to the strip coordinates of [`screw_motion`] with the same
/// parameter: `h = M(e^{-i c w})` with `M(z) = (z-1)/(z+1)` maps the grid
/// isometrically onto the disk slice with metric `c^2 / cos^2(c u) |dw|^2`.
pub fn canonical_strip<R: Real>(d: R) -> CatalogEntry<R> {
    let c = (R::one() + d * d).sqrt();
    let eval: Eval<R> = Arc::new(move |w: C<R>| {
        let limit = R::PI() / (R::lit(2.0) * c);
        if w.re.abs() >= limit {
            return Err(domain_err(w));
        }
        let i = C::new(R::zero(), R::one());
        let e = (-i * c * w).exp();
        let den = e + cr(R::one());
        let h = (e - cr(R::one())) / den;
        let dm = cr(R::lit(2.0)) / (den * den);
        Ok(PointData {
            h,
            hw: dm * (-i * c) * e,
            hwb: cr(R::zero()),
            f: R::zero(),
            phi: cr(R::zero()),
            omega: R::infinity(),
        })
    });
    CatalogEntry {
        name: "canonical-strip".into(),
        manifold: BaseManifold::HyperbolicDisk,
        params: vec![("d".into(), d)],
        expected_k: Some(-R::one()),
        default_domain: [R::lit(-0.6), R::lit(0.6), R::lit(-0.6), R::lit(0.6)],
        eval,
    }
}

/// Names accepted by [`lookup`] (the CLI registry).
pub const REGISTRY: [&str; 8] = [
    "cylinder",
    "scherk-h2",
    "screw-motion",
    "helicoid-h2r",
    "catenoid-h2r",
    "plane-e3",
    "helicoid-e3",
    "catenoid-e3",
];

fn param<R: Real>(params: &[(String, R)], name: &str, default: R) -> R {
    params
        .iter()
        .find(|(n, _)| n == name)
        .map(|&(_, v)| v)
        .unwrap_or(default)
}

/// Builds a registry entry by name with named parameters.
pub fn lookup<R: Real>(name: &str, params: &[(String, R)]) -> Result<CatalogEntry<R>> {
    match name {
        "cylinder" => Ok(cylinder(param(params, "a", R::PI()), param(params, "b", R::zero()))),
        "scherk-h2" => Ok(scherk_hyperbolic()),
        "screw-motion" => {
            let d = param(params, "d", R::one());
            if d <= R::zero() {
                return Err(Error::BadParameter {
                    name: "d".into(),
                    reason: "screw-motion needs d > 0".into(),
                });
            }
            Ok(screw_motion(d))
        }
        "helicoid-h2r" => {
            let p = param(params, "pitch", R::lit(0.5));
            if p <= R::zero() {
                return Err(Error::BadParameter {
                    name: "pitch".into(),
                    reason: "helicoid pitch must be positive".into(),
                });
            }
            Ok(helicoid_h2r(p))
        }
        "catenoid-h2r" => {
            let c = param(params, "neck", R::one());
            if c <= R::zero() {
                return Err(Error::BadParameter {
                    name: "neck".into(),
                    reason: "catenoid neck must be positive".into(),
                });
            }
            Ok(catenoid_h2r(c))
        }
        "plane-e3" => Ok(plane_e3()),
        "helicoid-e3" => Ok(helicoid_e3()),
        "catenoid-e3" => Ok(catenoid_e3()),
        other => Err(Error::UnknownEntry { name: other.into(), known: REGISTRY.join(", ") }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stencil;

    /// Finite-difference derivatives of the sampled `h` must match the
    /// analytic `h_w`, `h_wbar` to stencil order.
    fn evaluator_consistency<R: Real>(entry: &CatalogEntry<R>, grid: GridDomain<R>) -> R {
        let (h, _) = entry.sample_fields(grid).unwrap();
        let (hw, hwb) = stencil::wirtinger(&h);
        let mut worst = R::zero();
        for j in 0..grid.n_v {
            for i in 0..grid.n_u {
                let d = entry.eval(grid.point(i, j)).unwrap();
                let k = grid.idx(i, j);
                worst = worst.max((hw.values[k] - d.hw).norm());
                worst = worst.max((hwb.values[k] - d.hwb).norm());
            }
        }
        worst
    }

    #[test]
    fn evaluators_match_finite_differences() {
        let g = GridDomain::square(-0.6f64, 0.6, 65).unwrap();
        for entry in [
            cylinder(std::f64::consts::PI, 0.0),
            screw_motion(1.0),
            helicoid_h2r(0.5),
            catenoid_h2r(0.8),
            helicoid_e3(),
            catenoid_e3(),
            canonical_strip(1.0),
        ] {
            let coarse = evaluator_consistency(&entry, g);
            assert!(coarse < 2e-6, "{}: {coarse}", entry.name);
            let fine = evaluator_consistency(&entry, g.refined().unwrap());
            assert!(coarse / fine.max(1e-14) > 10.0, "{}: {coarse} vs {fine}", entry.name);
        }
        // scherk has its own window
        let sg = GridDomain::new(-0.6f64, 0.6, 0.4, 1.6, 65, 65).unwrap();
        let e = scherk_hyperbolic::<f64>();
        let coarse = evaluator_consistency(&e, sg);
        assert!(coarse < 1e-6, "scherk: {coarse}");
    }

    #[test]
    fn cylinder_diameter_values() {
        let e = cylinder::<f64>(std::f64::consts::PI, 0.0);
        let d = e.eval(C::new(0.8, 0.3)).unwrap();
        assert!((d.h.re - (0.4f64).tanh()).abs() < 1e-15);
        assert!(d.h.im.abs() < 1e-15);
        assert!((d.f - 0.3).abs() < 1e-15);
        assert_eq!(e.expected_k, Some(0.0));
        // rotated geodesic stays on the unit-speed parameterisation
        let rot = cylinder::<f64>(0.3, 0.3 + std::f64::consts::PI);
        let dd = rot.eval(C::new(0.5, 0.0)).unwrap();
        assert!((dd.h.norm() - (0.25f64).tanh()).abs() < 1e-12);
    }

    #[test]
    fn general_geodesic_cylinder_hits_its_ideal_points() {
        let (aa, bb) = (0.7f64, 2.9f64);
        let e = cylinder::<f64>(aa, bb);
        // large |u| approaches the ideal endpoints
        let p = e.eval(C::new(18.0, 0.0)).unwrap().h;
        let m = e.eval(C::new(-18.0, 0.0)).unwrap().h;
        assert!((p - C::from_polar(1.0, bb)).norm() < 1e-6);
        assert!((m - C::from_polar(1.0, aa)).norm() < 1e-6);
        // and stays inside the disk
        assert!(p.norm() < 1.0 && m.norm() < 1.0);
    }

    #[test]
    fn scherk_closed_form_height() {
        // t(1, 1) = ln(1 + sqrt 2)
        let t = scherk_half_plane_height(1.0f64, 1.0);
        assert!((t - (1.0 + 2.0f64.sqrt()).ln()).abs() < 1e-14);
        assert!((t - 0.881373587).abs() < 1e-8);
        // t -> 0 as x -> infinity at fixed y; t -> +inf as x -> 0+
        assert!(scherk_half_plane_height(1e6f64, 1.0) < 2e-6);
        assert!(scherk_half_plane_height(1e-9f64, 1.0) > 20.0);
        // the conformal entry realises the closed form: t = v at
        // half-plane point e^{u + i gd(v)}
        let e = scherk_hyperbolic::<f64>();
        let w = C::new(0.25, 0.9);
        let d = e.eval(w).unwrap();
        let zhp = C::from_polar(w.re.exp(), gudermann(w.im));
        assert!((scherk_half_plane_height(zhp.re, zhp.im) - d.f).abs() < 1e-12);
    }

    #[test]
    fn screw_motion_profile_matches_closed_forms() {
        // d = 1, s = 0: U = sqrt 2, rho = arcosh(sqrt 2); and s(u) = gd^{-1}(c u)
        let e = screw_motion::<f64>(1.0);
        let d0 = e.eval(C::new(0.0, 0.0)).unwrap();
        let rho0 = (2.0f64).sqrt().acosh();
        assert!((d0.h.norm() - (rho0 / 2.0).tanh()).abs() < 1e-10);
        for &u in &[0.15f64, -0.33, 0.52] {
            let d = e.eval(C::new(u, 0.1)).unwrap();
            let c = 2.0f64.sqrt();
            let s_exact = (c * u).sin().atanh();
            assert!((d.omega - s_exact).abs() < 1e-9, "s({u}) = {} vs {s_exact}", d.omega);
            // lambda closed form: arctan(c sinh s / d)
            let lam = (c * s_exact.sinh()).atan();
            let phi_ang = 0.1 - lam + u;
            assert!((d.h.arg() - phi_ang).rem_euclid(2.0 * std::f64::consts::PI) < 1e-8
                || (phi_ang - d.h.arg()).rem_euclid(2.0 * std::f64::consts::PI) < 1e-8);
        }
        // outside the strip
        assert!(e.eval(C::new(1.2, 0.0)).is_err());
    }

    #[test]
    fn screw_motion_metric_in_profile_coordinates() {
        // lambda^2 = U(s(u))^2 = (1 + d^2) cosh^2 s
        let e = screw_motion::<f64>(0.5);
        let g = GridDomain::square(-0.5f64, 0.5, 33).unwrap();
        let imm = e.sample_immersion(g).unwrap();
        for j in 0..g.n_v {
            for i in 0..g.n_u {
                let d = e.eval(g.point(i, j)).unwrap();
                let u2 = 1.25 * d.omega.cosh().powi(2);
                assert!(
                    (imm.lambda_sq.at(i, j) - u2).abs() < 1e-5,
                    "lambda^2 {} vs {}",
                    imm.lambda_sq.at(i, j),
                    u2
                );
            }
        }
    }

    #[test]
    fn canonical_strip_matches_screw_metric() {
        let d = 1.0f64;
        let y = canonical_strip::<f64>(d);
        let x = screw_motion::<f64>(d);
        let g = GridDomain::square(-0.6f64, 0.6, 65).unwrap();
        let yi = y.sample_immersion(g).unwrap();
        let c = 2.0f64.sqrt();
        for j in 0..g.n_v {
            for i in 0..g.n_u {
                let lam2 = c * c / (c * g.u(i)).cos().powi(2);
                assert!((yi.lambda_sq.at(i, j) - lam2).abs() < 1e-6 * lam2);
            }
        }
        let xi = x.sample_immersion(g).unwrap();
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for k in 0..g.len() {
            worst = worst.max((xi.lambda_sq.values[k] - yi.lambda_sq.values[k]).abs());
            scale = scale.max(xi.lambda_sq.values[k]);
        }
        assert!(worst / scale < 1e-6, "metric mismatch {}", worst / scale);
    }

    #[test]
    fn unknown_entry_lists_registry() {
        let err = lookup::<f64>("does-not-exist", &[]).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("screw-motion") && msg.contains("catenoid-e3"));
    }

    #[test]
    fn f32_smoke() {
        // the generic core instantiates at f32 with loose tolerances
        let e = catenoid_e3::<f32>();
        let g = GridDomain::square(-0.5f32, 0.5, 17).unwrap();
        let imm = e.sample_immersion(g).unwrap();
        let (c1, _) = imm.conformality_residuals();
        assert!(c1.linf() < 1e-3);
    }
}
