//! Default tolerances and numeric guards, collected in one place.
//!
//! Residual defaults assume grids around `h = 1/128` on `[-0.6, 0.6]^2`:
//! identities built from 4th-order first-derivative stencils get `1e-6`,
//! identities involving the 2nd-order 5-point Laplacian (curvature class)
//! get `1e-3`.  All of them are overridable per check from the CLI.

/// First-derivative-class residual default (harmonic map, conformality,
/// Cauchy deviation, Hopf holomorphy).
pub const DERIVATIVE_IDENTITY: f64 = 1e-6;

/// Curvature-class residual default (sinh-Gordon, Boechner, Gauss equation,
/// minimality): second-derivative stencil noise.
pub const CURVATURE_IDENTITY: f64 = 1e-3;

/// Samplewise height compatibility `(f_w)^2 + phi`.
pub const HEIGHT_COMPAT: f64 = 1e-9;

/// Relative agreement of the three metric formulas.
pub const METRIC_CONSISTENCY_REL: f64 = 1e-8;

/// Samplewise `|N_3 - tanh omega|` (two algebraic routes to the normal).
pub const N3_CONSISTENCY: f64 = 1e-9;

/// Closed-loop defect tolerance per unit spacing: defect <= LOOP_TOL_PER_H * h.
pub const LOOP_TOL_PER_H: f64 = 1e-5;

/// Ratio `|h_wbar| / |h_w|` below which a sample counts as a vertical-normal
/// limit (N_3 -> +-1) and is masked from omega-based residuals.
pub const VERTICAL_NORMAL_RATIO: f64 = 1e-13;

/// lambda^2 below this is a degenerate metric.
pub const DEGENERATE_METRIC: f64 = 1e-14;

/// Smallest singular value of the normalised design matrix accepted by
/// isometry fitting.
pub const DEGENERATE_CONFIGURATION: f64 = 1e-8;

/// Adaptive quadrature target for catalog profile integrals.
pub const QUADRATURE_TARGET: f64 = 1e-12;

/// Default substeps per grid edge in the associate march.
pub const MARCH_STEPS: usize = 8;

/// Absolute floor under which a residual norm counts as converged to
/// roundoff in refinement ratio tests (second-derivative stencils amplify
/// rounding by 1/h^2, so exact-zero residuals measure ~1e-11 at 257^2).
pub const REFINEMENT_FLOOR: f64 = 1e-12;
