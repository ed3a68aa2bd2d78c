//! Canal and tubular hypersurfaces: envelopes of pseudo hyperspheres
//! (`lambda = 1`) or pseudo hyperbolic hyperspheres (`lambda = -1`) centred
//! on a curve with radius `r(s)`.
//!
//! With the Frenet frame `F1..F4` of the center curve, pseudo null and
//! partially null families are
//!
//! ```text
//! C(s, t, w) = gamma + a1 F1 + sigma amp V(f, g)
//! ```
//!
//! where `sigma` is the branch, `amp` is `r sqrt(1 - r'^2)` (C1-C3),
//! `r sqrt(r'^2 - 1)` (C4), `r sqrt(1 + r'^2)` (C5) or `r` (tubular), and
//! `a1` is `-r r'` (C1-C4), `r r'` (C5) or `0` (tubular). `V` is a unit
//! combination of `F2, F3, F4` chosen per variant.
//!
//! Null families use `a1` and an angle `theta` supplied by the caller:
//!
//! ```text
//! C = gamma + a1 F1 + sigma rho cos(theta) F2 - lambda r r' F3 + sigma rho sin(theta) F4
//! rho^2 = lambda r (r + 2 a1 r')
//! ```

mod closed;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use closed::{curvature_closed, flat_residual, metric_factor, minimal_residual, relation_residual, ShapeRelation, SINGULAR_TOL};

use crate::curves::{frame_at, CurveClass, CurveError, CurveSpec, FrenetData};
use crate::expr::{eval_s, eval_tw, eval_value, EvalError, Expr, Jet1x4, Jet2x2, Taylor, Var};
use crate::mesh::GridSpec;
use crate::minkowski::{inner, QuadricKind, Vec4};
pub use crate::oracle::CurvaturePair;
use crate::oracle::{curvatures_numeric, fundamental_forms, numeric_jet, FundamentalForms, OracleError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    C1,
    C2,
    C3,
    C4,
    C5,
    T1,
    T2,
    T3,
    T4,
    NullC1,
    NullC2,
    NullT1,
}

impl Variant {
    pub const ALL: [Variant; 12] = [
        Variant::C1,
        Variant::C2,
        Variant::C3,
        Variant::C4,
        Variant::C5,
        Variant::T1,
        Variant::T2,
        Variant::T3,
        Variant::T4,
        Variant::NullC1,
        Variant::NullC2,
        Variant::NullT1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::C1 => "C1",
            Variant::C2 => "C2",
            Variant::C3 => "C3",
            Variant::C4 => "C4",
            Variant::C5 => "C5",
            Variant::T1 => "T1",
            Variant::T2 => "T2",
            Variant::T3 => "T3",
            Variant::T4 => "T4",
            Variant::NullC1 => "NullC1",
            Variant::NullC2 => "NullC2",
            Variant::NullT1 => "NullT1",
        }
    }

    pub fn is_tubular(self) -> bool {
        matches!(self, Variant::T1 | Variant::T2 | Variant::T3 | Variant::T4 | Variant::NullT1)
    }

    pub fn is_null(self) -> bool {
        matches!(self, Variant::NullC1 | Variant::NullC2 | Variant::NullT1)
    }

    /// Sign of the quadric: `+1` pseudo hyperspheres, `-1` pseudo hyperbolic.
    pub fn lambda(self) -> i32 {
        match self {
            Variant::C5 | Variant::T4 | Variant::NullC2 => -1,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CanalFamily {
    pub curve_class: CurveClass,
    pub variant: Variant,
    pub lambda: i32,
    pub branch: i32,
}

impl CanalFamily {
    /// Checks class compatibility and derives `lambda` from the variant.
    pub fn new(curve_class: CurveClass, variant: Variant, branch: i32) -> Result<Self, CanalError> {
        if branch != 1 && branch != -1 {
            return Err(CanalError::Incompatible(format!("branch must be +1 or -1, got {branch}")));
        }
        if (curve_class == CurveClass::Null) != variant.is_null() {
            let what = if variant.is_null() {
                format!("{} requires a null center curve", variant.name())
            } else if variant == Variant::T4 {
                "there is no hyperbolic tubular hypersurface around a null curve; use NullT1".to_string()
            } else {
                format!("{} is not defined for a null center curve", variant.name())
            };
            return Err(CanalError::Incompatible(what));
        }
        Ok(CanalFamily {
            curve_class,
            variant,
            lambda: variant.lambda(),
            branch,
        })
    }

    pub fn quadric(self) -> QuadricKind {
        QuadricKind::from_lambda(self.lambda).expect("lambda is +-1")
    }

    pub fn has_closed_form(self) -> bool {
        !self.variant.is_null()
    }

    /// Causal character `<N, N>` of the hypersurface.
    pub fn expected_epsilon(self) -> f64 {
        self.lambda as f64
    }

    /// Sign relating the normal used by the closed forms to `C - gamma`.
    pub fn normal_orientation(self) -> f64 {
        match self.variant {
            Variant::C2 | Variant::T2 => -1.0,
            _ => 1.0,
        }
    }

    pub fn label(self) -> String {
        format!(
            "{} {} (lambda {:+}, branch {:+})",
            self.curve_class.name(),
            self.variant.name(),
            self.lambda,
            self.branch
        )
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum CanalError {
    #[error("incompatible family: {0}")]
    Incompatible(String),
    #[error("regime violation at s = {s}: {what}")]
    Regime { s: f64, what: String },
    #[error("radius must be positive, got r({s}) = {r}")]
    NonPositiveRadius { s: f64, r: f64 },
    #[error("shape function g vanishes at (t, w) = ({t}, {w})")]
    ZeroShape { t: f64, w: f64 },
    #[error("null coefficients give rho^2 = {rho2} < 0 at ({s}, {t}, {w})")]
    NegativeRho { s: f64, t: f64, w: f64, rho2: f64 },
    #[error("null families need coefficients a1 and theta")]
    MissingNullCoefficients,
    #[error("shape functions f and g are required for this family")]
    MissingShape,
    #[error("g = sin f does not hold at this point (f = {f}, g = {g})")]
    ShapeRelation { f: f64, g: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("singular point: {0} vanishes")]
    Singular(&'static str),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("evaluating {what}: {source}")]
    Eval { what: &'static str, source: EvalError },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

fn eval_err(what: &'static str) -> impl Fn(EvalError) -> CanalError {
    move |source| CanalError::Eval { what, source }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RadiusSpec {
    pub expr: Expr,
}

impl RadiusSpec {
    pub fn new(expr: Expr) -> Self {
        RadiusSpec { expr }
    }

    pub fn jet(&self, s: f64) -> Result<Jet1x4, CanalError> {
        eval_s(&self.expr, s).map_err(eval_err("the radius"))
    }

    /// `(r, r', r'')`
    pub fn r3(&self, s: f64) -> Result<[f64; 3], CanalError> {
        let d = self.jet(s)?.derivatives();
        Ok([d[0], d[1], d[2]])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeSpec {
    pub f: Expr,
    pub g: Expr,
}

impl ShapeSpec {
    pub fn eval(&self, t: f64, w: f64) -> Result<(Jet2x2, Jet2x2), CanalError> {
        Ok((
            eval_tw(&self.f, t, w).map_err(eval_err("f"))?,
            eval_tw(&self.g, t, w).map_err(eval_err("g"))?,
        ))
    }

    pub fn values(&self, t: f64, w: f64) -> Result<(f64, f64), CanalError> {
        let (f, g) = self.eval(t, w)?;
        Ok((f.value(), g.value()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NullCoefficients {
    pub a1: Expr,
    pub theta: Expr,
}

impl NullCoefficients {
    /// `(a1, a2, a3, a4)` for the given radius data; `rho` carries the branch.
    pub fn coefficients(
        &self,
        r: f64,
        rp: f64,
        lambda: i32,
        branch: i32,
        (s, t, w): (f64, f64, f64),
    ) -> Result<[f64; 4], CanalError> {
        let a1 = eval_value(&self.a1, s, t, w).map_err(eval_err("a1"))?;
        let theta = eval_value(&self.theta, s, t, w).map_err(eval_err("theta"))?;
        let lam = lambda as f64;
        let rho2 = lam * r * (r + 2.0 * a1 * rp);
        if rho2 < -1e-14 * r * r {
            return Err(CanalError::NegativeRho { s, t, w, rho2 });
        }
        let rho = branch as f64 * rho2.max(0.0).sqrt();
        let (sn, cs) = theta.sin_cos();
        Ok([a1, rho * cs, -lam * r * rp, rho * sn])
    }
}

/// `a2^2 + a4^2 - lambda r (r + 2 a1 r')`.
pub fn null_constraint_residual(a: [f64; 4], r: f64, rp: f64, lambda: i32) -> f64 {
    a[1] * a[1] + a[3] * a[3] - lambda as f64 * r * (r + 2.0 * a[0] * rp)
}

/// Everything needed to evaluate one hypersurface.
#[derive(Clone, Debug, PartialEq)]
pub struct Hypersurface {
    pub family: CanalFamily,
    pub curve: CurveSpec,
    pub radius: RadiusSpec,
    pub shape: Option<ShapeSpec>,
    pub null: Option<NullCoefficients>,
}

fn regime(s: f64, what: impl Into<String>) -> CanalError {
    CanalError::Regime { s, what: what.into() }
}

// unit combination of F2, F3, F4 for the non-null variants
fn shape_vector(class: CurveClass, variant: Variant, frame: &[Vec4; 4], f: f64, g: f64) -> Vec4 {
    use Variant::*;
    let (sn, cs) = f.sin_cos();
    let (sh, ch) = (f.sinh(), f.cosh());
    let inv = 1.0 / (2.0 * g);
    let c = match (class, variant) {
        (CurveClass::PseudoNull, C1 | T1) => [g * sn, cs, sn * inv],
        (CurveClass::PseudoNull, C2 | T2) => [g * cs, sn, cs * inv],
        (CurveClass::PseudoNull, C3 | T3) => [g * sh, ch, -sh * inv],
        (CurveClass::PseudoNull, _) => [g * ch, sh, -ch * inv],
        (_, C1 | T1) => [sn, g * cs, cs * inv],
        (_, C2 | T2) => [cs, g * sn, sn * inv],
        (_, C3 | T3) => [ch, g * sh, -sh * inv],
        _ => [sh, g * ch, -ch * inv],
    };
    c[0] * frame[1] + c[1] * frame[2] + c[2] * frame[3]
}

impl Hypersurface {
    pub fn new(
        family: CanalFamily,
        curve: CurveSpec,
        radius: RadiusSpec,
        shape: Option<ShapeSpec>,
        null: Option<NullCoefficients>,
    ) -> Result<Self, CanalError> {
        if curve.class != family.curve_class {
            return Err(CanalError::Incompatible(format!(
                "family expects a {} curve, got {}",
                family.curve_class.name(),
                curve.class.name()
            )));
        }
        for v in [Var::T, Var::W] {
            if radius.expr.uses(v) {
                return Err(CanalError::Incompatible(format!("the radius may only depend on s, not {}", v.name())));
            }
        }
        if family.variant.is_null() {
            if null.is_none() {
                return Err(CanalError::MissingNullCoefficients);
            }
        } else {
            let Some(shape) = &shape else {
                return Err(CanalError::MissingShape);
            };
            if shape.f.uses(Var::S) || shape.g.uses(Var::S) {
                return Err(CanalError::Incompatible("f and g may only depend on t and w".into()));
            }
        }
        Ok(Hypersurface {
            family,
            curve,
            radius,
            shape,
            null,
        })
    }

    pub fn frame(&self, s: f64) -> Result<FrenetData, CanalError> {
        Ok(frame_at(&self.curve, s)?)
    }

    /// Validated `(r, r', r'')` at `s`.
    pub fn radius_at(&self, s: f64) -> Result<[f64; 3], CanalError> {
        let r = self.radius.r3(s)?;
        if !(r[0] > 0.0) {
            return Err(CanalError::NonPositiveRadius { s, r: r[0] });
        }
        let rp2 = r[1] * r[1];
        use Variant::*;
        match self.family.variant {
            C1 | C2 | C3 if rp2 >= 1.0 => Err(regime(s, format!("needs r'^2 < 1, got {rp2}"))),
            C4 if rp2 <= 1.0 => Err(regime(s, format!("needs r'^2 > 1, got {rp2}"))),
            v if v.is_tubular() && r[1].abs() > 1e-12 => {
                Err(regime(s, format!("tubular hypersurfaces need a constant radius, r' = {}", r[1])))
            }
            _ => Ok(r),
        }
    }

    pub fn center(&self, s: f64) -> Result<Vec4, CanalError> {
        Ok(self.curve.point(s)?)
    }

    pub fn point(&self, s: f64, t: f64, w: f64) -> Result<Vec4, CanalError> {
        let frame = self.frame(s)?;
        self.point_with_frame(&frame, s, t, w)
    }

    /// The point `C(s, t, w)` given the frame at `s`.
    pub fn point_with_frame(&self, frame: &FrenetData, s: f64, t: f64, w: f64) -> Result<Vec4, CanalError> {
        let [r, rp, _] = self.radius_at(s)?;
        let gamma = self.center(s)?;
        let fr = &frame.frame;
        let sigma = self.family.branch as f64;
        if let Some(nc) = &self.null {
            let a = nc.coefficients(r, rp, self.family.lambda, self.family.branch, (s, t, w))?;
            return Ok(gamma + a[0] * fr[0] + a[1] * fr[1] + a[2] * fr[2] + a[3] * fr[3]);
        }
        let shape = self.shape.as_ref().ok_or(CanalError::MissingShape)?;
        let (f, g) = shape.values(t, w)?;
        if g == 0.0 {
            return Err(CanalError::ZeroShape { t, w });
        }
        use Variant::*;
        let (a1, amp) = match self.family.variant {
            C1 | C2 | C3 => (-r * rp, r * (1.0 - rp * rp).sqrt()),
            C4 => (-r * rp, r * (rp * rp - 1.0).sqrt()),
            C5 => (r * rp, r * (1.0 + rp * rp).sqrt()),
            _ => (0.0, r),
        };
        let v = shape_vector(self.family.curve_class, self.family.variant, fr, f, g);
        let p = gamma + a1 * fr[0] + (sigma * amp) * v;
        if !p.is_finite() {
            return Err(CanalError::Singular("point evaluation"));
        }
        Ok(p)
    }

    /// `<C - gamma, C - gamma> - lambda r^2`
    pub fn membership_residual(&self, s: f64, t: f64, w: f64) -> Result<f64, CanalError> {
        let c = self.point(s, t, w)?;
        let r = self.radius_at(s)?[0];
        Ok(crate::minkowski::quadric_residual(c, self.center(s)?, r, self.family.quadric()))
    }

    /// `<C - gamma, C_s>` with `C_s` by Richardson-extrapolated central
    /// differences at `step` and `step / 2`.
    pub fn normality_residual(&self, s: f64, t: f64, w: f64, step: f64) -> Result<f64, CanalError> {
        let c = self.point(s, t, w)?;
        let central = |h: f64| -> Result<Vec4, CanalError> {
            Ok((1.0 / (2.0 * h)) * (self.point(s + h, t, w)? - self.point(s - h, t, w)?))
        };
        let cs = (1.0 / 3.0) * (4.0 * central(step / 2.0)? - central(step)?);
        Ok(inner(c - self.center(s)?, cs))
    }

    /// Closed-form `(K, H)`; fails for null families and on the singular
    /// set, where a closed-form denominator, the metric factor of `det g` or
    /// the Jacobian of `(t, w) -> (f, g)` vanishes.
    pub fn closed_curvature(&self, s: f64, t: f64, w: f64) -> Result<CurvaturePair, CanalError> {
        let frame = self.frame(s)?;
        let r = self.radius_at(s)?;
        let shape = self.shape.as_ref().ok_or(CanalError::MissingShape)?;
        let (fj, gj) = shape.eval(t, w)?;
        let (f, g) = (fj.value(), gj.value());
        if g == 0.0 {
            return Err(CanalError::ZeroShape { t, w });
        }
        let (m, scale) = metric_factor(self.family, f);
        if !(m.abs() > SINGULAR_TOL * scale) {
            return Err(CanalError::Singular("the metric factor of det g"));
        }
        let (a, b) = (fj.d_t() * gj.d_w(), fj.d_w() * gj.d_t());
        if !((a - b).abs() > SINGULAR_TOL * (a.abs() + b.abs())) {
            return Err(CanalError::Singular("the Jacobian of (f, g)"));
        }
        curvature_closed(self.family, frame.k[0], r, f, g)
    }

    /// Finite-difference fundamental forms, with the normal oriented the
    /// way the closed forms assume.
    pub fn oracle_forms(&self, s: f64, t: f64, w: f64, step: f64) -> Result<FundamentalForms, CanalError> {
        let jet = numeric_jet(|s, t, w| self.point(s, t, w), s, t, w, step)?;
        let forms = fundamental_forms(&jet)?;
        let radial = jet.point - self.center(s)?;
        Ok(forms.oriented_along(self.family.normal_orientation() * radial))
    }

    pub fn oracle_curvature(&self, s: f64, t: f64, w: f64, step: f64) -> Result<CurvaturePair, CanalError> {
        Ok(curvatures_numeric(&self.oracle_forms(s, t, w, step)?)?)
    }

    /// Unit normal of pseudo null C1 in closed form,
    /// `-r' F1 + sigma sqrt(1 - r'^2) V`.
    pub fn closed_normal(&self, s: f64, t: f64, w: f64) -> Result<Vec4, CanalError> {
        self.require_psn_c1()?;
        let frame = self.frame(s)?;
        let [_, rp, _] = self.radius_at(s)?;
        let (f, g) = self.shape.as_ref().ok_or(CanalError::MissingShape)?.values(t, w)?;
        let v = shape_vector(CurveClass::PseudoNull, Variant::C1, &frame.frame, f, g);
        Ok(-rp * frame.frame[0] + (self.family.branch as f64 * (1.0 - rp * rp).sqrt()) * v)
    }

    /// Closed-form `(det g, det h)` of pseudo null C1.
    pub fn closed_determinants(&self, s: f64, t: f64, w: f64) -> Result<(f64, f64), CanalError> {
        self.require_psn_c1()?;
        let k = self.family.branch as f64 * self.frame(s)?.k[0];
        let [r, rp, rpp] = self.radius_at(s)?;
        let (fj, gj) = self.shape.as_ref().ok_or(CanalError::MissingShape)?.eval(t, w)?;
        let (f, g) = (fj.value(), gj.value());
        let q = 1.0 - rp * rp;
        let d = q - r * rpp;
        let sf = f.sin();
        let jac = gj.d_w() * fj.d_t() - fj.d_w() * gj.d_t();
        let common = jac * jac * sf * sf / (4.0 * g.powi(4));
        let a = r * q.sqrt() * k * sf - 2.0 * d * g;
        let det_g = -r.powi(4) * q * a * a * common;
        let kn = r * q * k * k * sf * sf - 4.0 * rpp * d * g * g - 2.0 * q.sqrt() * (q - 2.0 * r * rpp) * k * g * sf;
        let det_h = r * r * q * kn * common;
        Ok((det_g, det_h))
    }

    fn require_psn_c1(&self) -> Result<(), CanalError> {
        if self.family.curve_class == CurveClass::PseudoNull && self.family.variant == Variant::C1 {
            Ok(())
        } else {
            Err(CanalError::Unsupported("closed-form normal and determinants exist for pseudo null C1 only".into()))
        }
    }
}

/// `evaluate_point` as a free function over the separate ingredients.
pub fn evaluate_point(
    family: CanalFamily,
    curve: &CurveSpec,
    radius: &RadiusSpec,
    shape: Option<&ShapeSpec>,
    nc: Option<&NullCoefficients>,
    (s, t, w): (f64, f64, f64),
) -> Result<Vec4, CanalError> {
    Hypersurface::new(family, curve.clone(), radius.clone(), shape.cloned(), nc.cloned())?.point(s, t, w)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeingartenReport {
    /// Max of `|H_s K_t - H_t K_s|`, `|H_s K_w - H_w K_s|`, `|H_t K_w - H_w K_t|`.
    pub residuals: [f64; 3],
    pub points: usize,
    pub skipped: usize,
}

/// Mixed Jacobians of `(H, K)` over the grid, from central differences of
/// the closed forms at `step` and `step / 2`, extrapolated. Points whose stencil touches the singular set are
/// skipped and counted.
pub fn weingarten_residuals(surface: &Hypersurface, grid: &GridSpec, step: f64) -> Result<WeingartenReport, CanalError> {
    if !surface.family.variant.is_tubular() || !surface.family.has_closed_form() {
        return Err(CanalError::Unsupported("Weingarten residuals need a tubular family with closed forms".into()));
    }
    let mut report = WeingartenReport {
        residuals: [0.0; 3],
        points: 0,
        skipped: 0,
    };
    for (s, t, w) in grid.points() {
        let at = |ds: f64, dt: f64, dw: f64| surface.closed_curvature(s + ds, t + dt, w + dw);
        let partials = (|| -> Result<[[f64; 2]; 3], CanalError> {
            let mut out = [[0.0; 2]; 3];
            for (i, o) in out.iter_mut().enumerate() {
                let central = |h: f64| -> Result<[f64; 2], CanalError> {
                    let mut d = [0.0; 3];
                    d[i] = h;
                    let hi = at(d[0], d[1], d[2])?;
                    let lo = at(-d[0], -d[1], -d[2])?;
                    Ok([(hi.h - lo.h) / (2.0 * h), (hi.k - lo.k) / (2.0 * h)])
                };
                let (fine, coarse) = (central(step / 2.0)?, central(step)?);
                *o = [(4.0 * fine[0] - coarse[0]) / 3.0, (4.0 * fine[1] - coarse[1]) / 3.0];
            }
            Ok(out)
        })();
        let Ok(p) = partials else {
            report.skipped += 1;
            continue;
        };
        report.points += 1;
        let jac = |i: usize, j: usize| (p[i][0] * p[j][1] - p[j][0] * p[i][1]).abs();
        for (slot, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            report.residuals[slot] = report.residuals[slot].max(jac(i, j));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::builtin;
    use crate::expr::parse;
    use std::f64::consts::FRAC_PI_2;

    fn e(text: &str) -> Expr {
        parse(text).unwrap()
    }

    fn surface(curve: &str, v: Variant, branch: i32, r: &str) -> Hypersurface {
        let curve = builtin(curve).unwrap();
        let family = CanalFamily::new(curve.class, v, branch).unwrap();
        let (shape, null) = if v.is_null() {
            (None, Some(NullCoefficients { a1: e("t"), theta: e("w") }))
        } else {
            (Some(ShapeSpec { f: e("w"), g: e("t") }), None)
        };
        Hypersurface::new(family, curve, RadiusSpec::new(e(r)), shape, null).unwrap()
    }

    // the reference parametrization, substituted directly
    fn reference_pseudo_null_example(s: f64, t: f64, w: f64) -> Vec4 {
        let c = 1.0 / (16.0 * 2f64.sqrt() * t);
        let s3 = 3f64.sqrt();
        let (sh, ch) = ((2.0 * s).sinh(), (2.0 * s).cosh());
        let (sn, cs) = (2.0 * s).sin_cos();
        c * Vec4::new(
            ch * (8.0 * t + s3 * s * (-1.0 + 8.0 * t * t) * w.sin()) + 4.0 * s * t * (-1.0 + s3 * w.cos()) * sh,
            sh * (8.0 * t + s3 * s * (-1.0 + 8.0 * t * t) * w.sin()) + 4.0 * s * t * (-1.0 + s3 * w.cos()) * ch,
            sn * (8.0 * t - s3 * s * (1.0 + 8.0 * t * t) * w.sin()) + 4.0 * s * t * (-1.0 - s3 * w.cos()) * cs,
            cs * (-8.0 * t + s3 * s * (1.0 + 8.0 * t * t) * w.sin()) + 4.0 * s * t * (-1.0 - s3 * w.cos()) * sn,
        )
    }

    #[test]
    fn family_compatibility() {
        assert_eq!(CanalFamily::new(CurveClass::PseudoNull, Variant::C5, 1).unwrap().lambda, -1);
        assert_eq!(CanalFamily::new(CurveClass::Null, Variant::NullT1, 1).unwrap().lambda, 1);
        assert_eq!(CanalFamily::new(CurveClass::Null, Variant::NullC2, -1).unwrap().lambda, -1);
        assert!(CanalFamily::new(CurveClass::Null, Variant::T4, 1).is_err());
        assert!(CanalFamily::new(CurveClass::Null, Variant::C1, 1).is_err());
        assert!(CanalFamily::new(CurveClass::PartiallyNull, Variant::NullC1, 1).is_err());
        assert!(CanalFamily::new(CurveClass::PseudoNull, Variant::C1, 0).is_err());
    }

    #[test]
    fn reproduces_reference_example() {
        let c = surface("pseudo-null-example", Variant::C1, 1, "s/2");
        let p = c.point(1.0, 1.0, FRAC_PI_2).unwrap();
        assert!((p[0] - 2.704878).abs() < 1e-5);
        for (s, t, w) in [(1.0, 1.0, FRAC_PI_2), (0.7, 0.4, 0.3), (1.6, 1.9, 2.4)] {
            let want = reference_pseudo_null_example(s, t, w);
            assert!((c.point(s, t, w).unwrap() - want).max_abs() < 1e-12);
        }
        let res = c.membership_residual(1.0, 1.0, FRAC_PI_2).unwrap();
        assert!(res.abs() < 1e-9);
    }

    #[test]
    fn constant_radius_collapses_to_tubular() {
        for (cv, tv) in [(Variant::C1, Variant::T1), (Variant::C2, Variant::T2), (Variant::C3, Variant::T3), (Variant::C5, Variant::T4)] {
            let a = surface("pseudo-null-example", cv, 1, "0.5");
            let b = surface("pseudo-null-example", tv, 1, "0.5");
            for (s, t, w) in [(0.2, 0.5, 0.7), (-0.4, 1.2, 2.0)] {
                assert_eq!(a.point(s, t, w).unwrap(), b.point(s, t, w).unwrap());
            }
        }
    }

    #[test]
    fn regime_violations() {
        let c = surface("pseudo-null-example", Variant::C1, 1, "2*s");
        assert!(matches!(c.point(1.0, 1.0, 1.0), Err(CanalError::Regime { .. })));
        let c = surface("pseudo-null-example", Variant::C4, 1, "s/2");
        assert!(matches!(c.point(1.0, 1.0, 1.0), Err(CanalError::Regime { .. })));
        let c = surface("pseudo-null-example", Variant::T1, 1, "s/2");
        assert!(matches!(c.point(1.0, 1.0, 1.0), Err(CanalError::Regime { .. })));
        let c = surface("pseudo-null-example", Variant::C1, 1, "s/2");
        assert!(matches!(c.point(-1.0, 1.0, 1.0), Err(CanalError::NonPositiveRadius { .. })));
        assert!(matches!(c.point(1.0, 0.0, 1.0), Err(CanalError::ZeroShape { .. })));
    }

    #[test]
    fn null_coefficients_satisfy_constraint() {
        let nc = NullCoefficients { a1: e("t*w"), theta: e("s + w") };
        for lambda in [1, -1] {
            for branch in [1, -1] {
                let (r, rp) = (0.8, if lambda == 1 { 0.3 } else { -0.3 });
                let a = nc.coefficients(r, rp, lambda, branch, (0.3, 1.1, 1.5)).unwrap();
                assert!(null_constraint_residual(a, r, rp, lambda).abs() < 1e-14);
            }
        }
        // raw coefficients a2 = a4 = r, a1 = 0
        let r = 0.7;
        assert!((null_constraint_residual([0.0, r, 0.0, r], r, 0.4, 1) - r * r).abs() < 1e-15);
        let bad = NullCoefficients { a1: e("-10"), theta: e("0") };
        assert!(matches!(bad.coefficients(1.0, 1.0, 1, 1, (0.0, 0.0, 0.0)), Err(CanalError::NegativeRho { .. })));
    }

    #[test]
    fn missing_inputs() {
        let curve = builtin("null-example").unwrap();
        let family = CanalFamily::new(CurveClass::Null, Variant::NullC1, 1).unwrap();
        assert!(matches!(
            Hypersurface::new(family, curve, RadiusSpec::new(e("s")), None, None),
            Err(CanalError::MissingNullCoefficients)
        ));
        let curve = builtin("pseudo-null-example").unwrap();
        let family = CanalFamily::new(CurveClass::PseudoNull, Variant::C1, 1).unwrap();
        assert!(matches!(
            Hypersurface::new(family, curve.clone(), RadiusSpec::new(e("s")), None, None),
            Err(CanalError::MissingShape)
        ));
        let null_family = CanalFamily::new(CurveClass::Null, Variant::NullC1, 1).unwrap();
        assert!(matches!(
            Hypersurface::new(null_family, curve, RadiusSpec::new(e("s")), None, None),
            Err(CanalError::Incompatible(_))
        ));
    }
}
