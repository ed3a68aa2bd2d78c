//! Center curves and their Frenet frames.
//!
//! Three classes are supported. Writing `<.,.>` for the Minkowski product,
//! the frame vectors satisfy
//!
//! | class          | nonzero Gram entries                         | Frenet equations |
//! |----------------|----------------------------------------------|------------------|
//! | pseudo null    | `<F1,F1> = <F3,F3> = <F2,F4> = 1`            | `F1' = k1 F2`, `F2' = k2 F3`, `F3' = k3 F2 - k2 F4`, `F4' = -k1 F1 - k3 F3` |
//! | partially null | `<F1,F1> = <F2,F2> = <F3,F4> = 1`            | `F1' = k1 F2`, `F2' = -k1 F1 + k2 F3`, `F3' = k3 F3`, `F4' = -k2 F2 - k3 F4` |
//! | null           | `<F2,F2> = <F4,F4> = <F1,F3> = 1`            | `F1' = k1 F2`, `F2' = k2 F1 - k1 F3`, `F3' = -k2 F2 + k3 F4`, `F4' = -k3 F1` |
//!
//! Gauges fixed by [`derive_frame`]:
//!
//! * pseudo null: `k1 = 1`, `k2 > 0`; `F4` is then unique.
//! * partially null: `F3` is the constant null vector `F2' + k1 F1` taken at
//!   the curve's gauge parameter, so `k2 = 1` there.
//! * null: `k1 = 1`; `F3` comes from `F2' = k2 F1 - F3`; `F4` is the unit
//!   normal with `det[F1, F2, F3, F4] > 0`.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{eval_s, parse, EvalError, Expr, Var};
use crate::minkowski::{det4, inner, triple_cross, Vec4, LIGHTLIKE_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveClass {
    PseudoNull,
    PartiallyNull,
    Null,
}

impl CurveClass {
    /// The Gram matrix `<Fi, Fj>` every frame of this class must have.
    pub fn gram_table(self) -> [[f64; 4]; 4] {
        let mut g = [[0.0; 4]; 4];
        let pairs: [(usize, usize); 3] = match self {
            CurveClass::PseudoNull => [(0, 0), (2, 2), (1, 3)],
            CurveClass::PartiallyNull => [(0, 0), (1, 1), (2, 3)],
            CurveClass::Null => [(1, 1), (3, 3), (0, 2)],
        };
        for (i, j) in pairs {
            g[i][j] = 1.0;
            g[j][i] = 1.0;
        }
        g
    }

    /// Right-hand side of the Frenet equations.
    pub fn frenet_rhs(self, f: &[Vec4; 4], k: [f64; 3]) -> [Vec4; 4] {
        let [f1, f2, f3, f4] = *f;
        let [k1, k2, k3] = k;
        match self {
            CurveClass::PseudoNull => [
                k1 * f2,
                k2 * f3,
                k3 * f2 - k2 * f4,
                -k1 * f1 - k3 * f3,
            ],
            CurveClass::PartiallyNull => [
                k1 * f2,
                -k1 * f1 + k2 * f3,
                k3 * f3,
                -k2 * f2 - k3 * f4,
            ],
            CurveClass::Null => [
                k1 * f2,
                k2 * f1 - k1 * f3,
                -k2 * f2 + k3 * f4,
                -k3 * f1,
            ],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CurveClass::PseudoNull => "pseudo-null",
            CurveClass::PartiallyNull => "partially-null",
            CurveClass::Null => "null",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Builtin {
    PseudoNullExample,
    PartiallyNullExample,
    NullExample,
}

impl Builtin {
    pub const ALL: [Builtin; 3] = [
        Builtin::PseudoNullExample,
        Builtin::PartiallyNullExample,
        Builtin::NullExample,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::PseudoNullExample => "pseudo-null-example",
            Builtin::PartiallyNullExample => "partially-null-example",
            Builtin::NullExample => "null-example",
        }
    }

    pub fn from_name(name: &str) -> Option<Builtin> {
        Builtin::ALL.into_iter().find(|b| b.name() == name)
    }

    pub fn class(self) -> CurveClass {
        match self {
            Builtin::PseudoNullExample => CurveClass::PseudoNull,
            Builtin::PartiallyNullExample => CurveClass::PartiallyNull,
            Builtin::NullExample => CurveClass::Null,
        }
    }

    fn components(self) -> [&'static str; 4] {
        match self {
            Builtin::PseudoNullExample => [
                "cosh(2*s)/(2*sqrt(2))",
                "sinh(2*s)/(2*sqrt(2))",
                "sin(2*s)/(2*sqrt(2))",
                "-cos(2*s)/(2*sqrt(2))",
            ],
            Builtin::PartiallyNullExample => ["exp(s)", "exp(s)", "cos(2*s)/2", "sin(2*s)/2"],
            Builtin::NullExample => [
                "sinh(s)/sqrt(2)",
                "cosh(s)/sqrt(2)",
                "sin(s)/sqrt(2)",
                "cos(s)/sqrt(2)",
            ],
        }
    }

    /// Closed-form curvatures `(k1, k2, k3)` at `s`.
    pub fn curvatures(self, s: f64) -> [f64; 3] {
        match self {
            Builtin::PseudoNullExample => [1.0, 4.0, 0.0],
            Builtin::PartiallyNullExample => [2.0, s.exp(), 0.0],
            Builtin::NullExample => [1.0, 0.0, -1.0],
        }
    }

    /// Closed-form Frenet frame at `s`.
    pub fn analytic_frame(self, s: f64) -> FrenetData {
        let frame = match self {
            Builtin::PseudoNullExample => {
                let (sh, ch) = ((2.0 * s).sinh(), (2.0 * s).cosh());
                let (sn, cs) = (2.0 * s).sin_cos();
                let a = 1.0 / SQRT_2;
                [
                    a * Vec4::new(sh, ch, cs, sn),
                    SQRT_2 * Vec4::new(ch, sh, -sn, cs),
                    a * Vec4::new(sh, ch, -cs, -sn),
                    (a / 2.0) * Vec4::new(-ch, -sh, -sn, cs),
                ]
            }
            Builtin::PartiallyNullExample => {
                let e = s.exp();
                let (sn, cs) = (2.0 * s).sin_cos();
                [
                    Vec4::new(e, e, -sn, cs),
                    0.5 * Vec4::new(e, e, -2.0 * cs, -2.0 * sn),
                    2.5 * Vec4::new(1.0, 1.0, 0.0, 0.0),
                    Vec4::new(
                        -e * e / 4.0 - 0.2,
                        -e * e / 4.0 + 0.2,
                        e / 5.0 * (cs + 2.0 * sn),
                        e / 5.0 * (sn - 2.0 * cs),
                    ),
                ]
            }
            Builtin::NullExample => {
                let (sh, ch) = (s.sinh(), s.cosh());
                let (sn, cs) = s.sin_cos();
                let a = 1.0 / SQRT_2;
                [
                    a * Vec4::new(ch, sh, cs, -sn),
                    a * Vec4::new(sh, ch, -sn, -cs),
                    a * Vec4::new(-ch, -sh, cs, -sn),
                    a * Vec4::new(sh, ch, sn, cs),
                ]
            }
        };
        FrenetData {
            s,
            class: self.class(),
            frame,
            k: self.curvatures(s),
        }
    }

    pub fn curve(self) -> CurveSpec {
        let comps = self.components().map(|c| parse(c).expect("builtin component parses"));
        CurveSpec {
            components: comps,
            class: self.class(),
            builtin: Some(self),
            completion: None,
            gauge_s: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum CurveError {
    #[error("unknown builtin curve `{0}`")]
    UnknownBuiltin(String),
    #[error("curve component {index} uses `{var}`; components may only depend on s")]
    ForeignVariable { index: usize, var: &'static str },
    #[error("degenerate curve at s = {s}: {what}")]
    Degenerate { s: f64, what: String },
    #[error("class mismatch at s = {s}: {what}")]
    ClassMismatch { s: f64, what: String },
    #[error("completion frame does not satisfy the {class} Gram table (residual {residual:e})")]
    BadCompletion { class: &'static str, residual: f64 },
    #[error("evaluating the curve at s = {s}: {source}")]
    Eval { s: f64, source: EvalError },
}

/// A center curve `s -> (x1(s), x2(s), x3(s), x4(s))` of a declared class.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSpec {
    pub components: [Expr; 4],
    pub class: CurveClass,
    pub builtin: Option<Builtin>,
    /// Constant frame used for straight lines, where no canonical frame exists.
    pub completion: Option<[Vec4; 4]>,
    /// Parameter where the partially null gauge `k2 = 1` is imposed.
    pub gauge_s: f64,
}

/// Frame and curvatures at one parameter value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrenetData {
    pub s: f64,
    pub class: CurveClass,
    /// `F1..F4`
    pub frame: [Vec4; 4],
    /// `k1, k2, k3`
    pub k: [f64; 3],
}

impl FrenetData {
    /// Largest entrywise deviation of `<Fi, Fj>` from the class table.
    pub fn gram_residual(&self) -> (f64, (usize, usize)) {
        gram_residual(&self.frame, self.class)
    }
}

fn gram_residual(frame: &[Vec4; 4], class: CurveClass) -> (f64, (usize, usize)) {
    let table = class.gram_table();
    let mut worst = (0.0, (0, 0));
    for i in 0..4 {
        for j in i..4 {
            let d = (inner(frame[i], frame[j]) - table[i][j]).abs();
            if d > worst.0 || d.is_nan() {
                worst = (d, (i, j));
            }
        }
    }
    worst
}

pub fn builtin(name: &str) -> Result<CurveSpec, CurveError> {
    Builtin::from_name(name)
        .map(Builtin::curve)
        .ok_or_else(|| CurveError::UnknownBuiltin(name.to_string()))
}

impl CurveSpec {
    pub fn new(components: [Expr; 4], class: CurveClass) -> Result<Self, CurveError> {
        for (index, c) in components.iter().enumerate() {
            for var in [Var::T, Var::W] {
                if c.uses(var) {
                    return Err(CurveError::ForeignVariable {
                        index,
                        var: var.name(),
                    });
                }
            }
        }
        Ok(CurveSpec {
            components,
            class,
            builtin: None,
            completion: None,
            gauge_s: 0.0,
        })
    }

    /// Attach a constant completion frame for a straight-line curve.
    pub fn with_completion(mut self, frame: [Vec4; 4]) -> Result<Self, CurveError> {
        let (residual, _) = gram_residual(&frame, self.class);
        if !(residual <= 1e-8) {
            return Err(CurveError::BadCompletion {
                class: self.class.name(),
                residual,
            });
        }
        self.completion = Some(frame);
        Ok(self)
    }

    pub fn with_gauge_s(mut self, s: f64) -> Self {
        self.gauge_s = s;
        self
    }

    /// `[gamma, gamma', gamma'', gamma''', gamma'''']` at `s`.
    pub fn jets(&self, s: f64) -> Result<[Vec4; 5], CurveError> {
        let mut out = [Vec4::ZERO; 5];
        for (i, c) in self.components.iter().enumerate() {
            let d = eval_s(c, s)
                .map_err(|source| CurveError::Eval { s, source })?
                .derivatives();
            for k in 0..5 {
                out[k][i] = d[k];
            }
        }
        Ok(out)
    }

    pub fn point(&self, s: f64) -> Result<Vec4, CurveError> {
        Ok(self.jets(s)?[0])
    }

    /// The analytic frame when this is an unmodified builtin.
    pub fn analytic_frame(&self, s: f64) -> Option<FrenetData> {
        self.builtin.map(|b| b.analytic_frame(s))
    }
}

fn degenerate(s: f64, what: impl Into<String>) -> CurveError {
    CurveError::Degenerate {
        s,
        what: what.into(),
    }
}

fn mismatch(s: f64, what: impl Into<String>) -> CurveError {
    CurveError::ClassMismatch {
        s,
        what: what.into(),
    }
}

// null vector `m` with <m, n> = 1 in the Lorentzian plane orthogonal to the
// orthonormal spacelike pair (a, b); n is a null vector of that plane
fn null_partner(n: Vec4, a: Vec4, b: Vec4) -> Vec4 {
    let mut best = (0.0, Vec4::ZERO);
    for i in 0..4 {
        let e = Vec4::basis(i);
        let v = e - inner(e, a) * a - inner(e, b) * b;
        let p = inner(v, n);
        if p.abs() > best.0 {
            best = (p.abs(), v);
        }
    }
    let v = best.1;
    let p = inner(v, n);
    (1.0 / p) * (v - (inner(v, v) / (2.0 * p)) * n)
}

fn check_unit_spacelike(s: f64, d1: Vec4) -> Result<(), CurveError> {
    let q = inner(d1, d1);
    if (q - 1.0).abs() > 1e-6 {
        return Err(mismatch(s, format!("<gamma', gamma'> = {q}, expected 1")));
    }
    Ok(())
}

/// Frenet frame and curvatures of `curve` at `s`, from its derivatives.
///
/// Straight lines have no canonical frame and are rejected; use
/// [`frame_at`] with a completion frame for them.
pub fn derive_frame(curve: &CurveSpec, s: f64) -> Result<FrenetData, CurveError> {
    let [_, d1, d2, d3, d4] = curve.jets(s)?;
    let scale2 = 1.0 + d2.euclid_norm_sq();
    let (frame, k) = match curve.class {
        CurveClass::PseudoNull => {
            check_unit_spacelike(s, d1)?;
            if d2.euclid_norm() <= 1e-9 {
                return Err(degenerate(s, "gamma'' vanishes, so there is no principal normal"));
            }
            let q2 = inner(d2, d2);
            if q2.abs() > LIGHTLIKE_TOL * scale2 {
                return Err(mismatch(s, format!("gamma'' is not null (<gamma'', gamma''> = {q2})")));
            }
            let q3 = inner(d3, d3);
            if q3 <= 1e-18 {
                return Err(degenerate(s, format!("k2 vanishes (<gamma''', gamma'''> = {q3})")));
            }
            let k2 = q3.sqrt();
            let f3 = (1.0 / k2) * d3;
            let f4 = null_partner(d2, d1, f3);
            let k3 = inner(d4, f4) / k2;
            ([d1, d2, f3, f4], [1.0, k2, k3])
        }
        CurveClass::PartiallyNull => {
            check_unit_spacelike(s, d1)?;
            let principal = |d1: Vec4, d2: Vec4, d3: Vec4, at: f64| {
                let q = inner(d2, d2);
                if d2.euclid_norm() <= 1e-9 {
                    return Err(degenerate(at, "gamma'' vanishes, so there is no principal normal"));
                }
                if q <= LIGHTLIKE_TOL * (1.0 + d2.euclid_norm_sq()) {
                    return Err(mismatch(at, format!("gamma'' is not spacelike (<gamma'', gamma''> = {q})")));
                }
                let k1 = q.sqrt();
                let k1p = inner(d2, d3) / k1;
                let f2 = (1.0 / k1) * d2;
                let f2p = (1.0 / k1) * d3 - (k1p / (k1 * k1)) * d2;
                Ok((k1, f2, f2p + k1 * d1))
            };
            let (k1, f2, drift) = principal(d1, d2, d3, s)?;
            let f3 = if s == curve.gauge_s {
                drift
            } else {
                let [_, g1, g2, g3, _] = curve.jets(curve.gauge_s)?;
                principal(g1, g2, g3, curve.gauge_s)?.2
            };
            if f3.euclid_norm() <= 1e-9 {
                return Err(degenerate(curve.gauge_s, "k2 vanishes at the gauge parameter"));
            }
            let q3 = inner(f3, f3);
            if q3.abs() > LIGHTLIKE_TOL * (1.0 + f3.euclid_norm_sq()) {
                return Err(mismatch(s, format!("F2' + k1 F1 is not null (<., .> = {q3})")));
            }
            let f4 = null_partner(f3, d1, f2);
            let k2 = inner(drift, f4);
            let off = drift - k2 * f3;
            if off.euclid_norm() > 1e-6 * (1.0 + drift.euclid_norm()) {
                return Err(mismatch(s, "binormal direction is not constant; k3 would not vanish"));
            }
            ([d1, f2, f3, f4], [k1, k2, 0.0])
        }
        CurveClass::Null => {
            let q1 = inner(d1, d1);
            if q1.abs() > LIGHTLIKE_TOL * (1.0 + d1.euclid_norm_sq()) {
                return Err(mismatch(s, format!("gamma' is not null (<gamma', gamma'> = {q1})")));
            }
            let q2 = inner(d2, d2);
            if d2.euclid_norm() <= 1e-9 {
                return Err(degenerate(s, "gamma'' vanishes"));
            }
            if (q2 - 1.0).abs() > 1e-6 {
                return Err(mismatch(s, format!("not parametrized by arclength (<gamma'', gamma''> = {q2})")));
            }
            let k2 = inner(d3, d3) / (2.0 * inner(d1, d3));
            let f3 = k2 * d1 - d3;
            let cross = triple_cross(d1, d2, f3);
            let nc = inner(cross, cross);
            if nc <= 1e-18 {
                return Err(degenerate(s, "F1, F2, F3 are dependent"));
            }
            let f4 = (-1.0 / nc.sqrt()) * cross;
            let k3 = -inner(d4, f4);
            ([d1, d2, f3, f4], [1.0, k2, k3])
        }
    };
    let data = FrenetData {
        s,
        class: curve.class,
        frame,
        k,
    };
    if !frame.iter().all(|f| f.is_finite()) || !k.iter().all(|x| x.is_finite()) {
        return Err(degenerate(s, "frame is not finite"));
    }
    Ok(data)
}

/// Frame used by the hypersurface constructions: the completion frame with
/// vanishing curvatures when one is attached, the derived frame otherwise.
pub fn frame_at(curve: &CurveSpec, s: f64) -> Result<FrenetData, CurveError> {
    let Some(frame) = curve.completion else {
        return derive_frame(curve, s);
    };
    let [_, d1, d2, ..] = curve.jets(s)?;
    if (d1 - frame[0]).max_abs() > 1e-9 * (1.0 + d1.max_abs()) {
        return Err(mismatch(s, "gamma' differs from F1 of the completion frame"));
    }
    if d2.max_abs() > 1e-9 {
        return Err(mismatch(s, "completion frames are only valid for straight lines"));
    }
    Ok(FrenetData {
        s,
        class: curve.class,
        frame,
        k: [0.0; 3],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrameTolerances {
    pub gram: f64,
    pub ode: f64,
}

impl Default for FrameTolerances {
    fn default() -> Self {
        FrameTolerances {
            gram: 1e-8,
            ode: 1e-5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameReport {
    pub s: f64,
    pub gram_residual: f64,
    /// 1-based `(i, j)` of the worst Gram entry.
    pub gram_entry: (usize, usize),
    pub ode_residual: f64,
    /// 1-based index of the frame vector with the worst ODE residual.
    pub ode_vector: usize,
    /// `<gamma'', gamma''> - 1` for null curves.
    pub arclength_residual: Option<f64>,
    pub tolerances: FrameTolerances,
    pub pass: bool,
    pub error: Option<String>,
}

/// Check `frame` against the Gram table of `class` and, by central
/// differences of [`frame_at`] at `s +- step`, against the Frenet equations.
/// Failures are reported, never returned as errors.
pub fn verify_frame(
    frame: &FrenetData,
    class: CurveClass,
    curve: &CurveSpec,
    step: f64,
) -> FrameReport {
    verify_frame_with(frame, class, curve, step, FrameTolerances::default())
}

pub fn verify_frame_with(
    frame: &FrenetData,
    class: CurveClass,
    curve: &CurveSpec,
    step: f64,
    tolerances: FrameTolerances,
) -> FrameReport {
    let s = frame.s;
    let (gram, (gi, gj)) = gram_residual(&frame.frame, class);
    let mut report = FrameReport {
        s,
        gram_residual: gram,
        gram_entry: (gi + 1, gj + 1),
        ode_residual: f64::NAN,
        ode_vector: 0,
        arclength_residual: None,
        tolerances,
        pass: false,
        error: None,
    };
    let neighbours = frame_at(curve, s + step).and_then(|hi| Ok((hi, frame_at(curve, s - step)?)));
    let (hi, lo) = match neighbours {
        Ok(pair) => pair,
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    let rhs = class.frenet_rhs(&frame.frame, frame.k);
    let mut worst = (0.0, 0);
    for i in 0..4 {
        let fd = (1.0 / (2.0 * step)) * (hi.frame[i] - lo.frame[i]);
        let d = (fd - rhs[i]).max_abs();
        if d > worst.0 || d.is_nan() {
            worst = (d, i);
        }
    }
    report.ode_residual = worst.0;
    report.ode_vector = worst.1 + 1;
    let mut pass = gram <= tolerances.gram && worst.0 <= tolerances.ode;
    if class == CurveClass::Null {
        match curve.jets(s) {
            Ok(j) => {
                let a = inner(j[2], j[2]) - 1.0;
                report.arclength_residual = Some(a);
                pass &= a.abs() <= 1e-6;
            }
            Err(e) => {
                report.error = Some(e.to_string());
                pass = false;
            }
        }
    }
    report.pass = pass;
    report
}

/// Orientation of a frame, `det[F1, F2, F3, F4]`.
pub fn frame_orientation(frame: &FrenetData) -> f64 {
    let [a, b, c, d] = frame.frame;
    det4(a, b, c, d)
}
