//! One-shot verification of a scene: frame, envelope, curvature and
//! Weingarten checks collected into a table.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::canal::{null_constraint_residual, relation_residual, weingarten_residuals, CanalError, Hypersurface, SINGULAR_TOL};
use crate::curves::{frame_at, verify_frame_with, FrameTolerances};
use crate::mesh::{curvature_at, GridSpec};
use crate::oracle::{check_quantity, curvatures_numeric, DEFAULT_ABS_TOL, DEFAULT_REL_TOL, DEFAULT_STEP};
use crate::scene::Scene;

pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Oracle step.
    pub step: f64,
    pub membership_tol: f64,
    pub normality_tol: f64,
    /// Step of the `s` difference in the normality check.
    pub normality_step: f64,
    pub relation_tol: f64,
    pub weingarten_tol: f64,
    pub weingarten_step: f64,
    pub frames: FrameTolerances,
    pub frame_step: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            rel_tol: DEFAULT_REL_TOL,
            abs_tol: DEFAULT_ABS_TOL,
            step: DEFAULT_STEP,
            membership_tol: 1e-9,
            normality_tol: 1e-5,
            normality_step: 1e-4,
            relation_tol: 1e-9,
            weingarten_tol: 1e-6,
            weingarten_step: 1e-3,
            frames: FrameTolerances::default(),
            frame_step: 1e-4,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "skip",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: Option<f64>,
    pub tolerance: Option<f64>,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn measured(name: &'static str, value: f64, tolerance: f64, detail: String) -> Self {
        Check {
            name,
            value: Some(value),
            tolerance: Some(tolerance),
            status: if value <= tolerance { Status::Pass } else { Status::Fail },
            detail,
        }
    }

    fn skipped(name: &'static str, why: &str) -> Self {
        Check {
            name,
            value: None,
            tolerance: None,
            status: Status::Skipped,
            detail: why.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub scene: String,
    pub family: String,
    pub grid_points: usize,
    pub singular_points: usize,
    /// Nonsingular points where the oracle metric is too ill-conditioned to
    /// compare against.
    pub unresolved_points: usize,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scene  {}", self.scene)?;
        writeln!(f, "family {}", self.family)?;
        writeln!(
            f,
            "grid   {} points, {} singular, {} unresolved by the oracle",
            self.grid_points, self.singular_points, self.unresolved_points
        )?;
        writeln!(f, "{:<12} {:>12} {:>10}  status  detail", "check", "value", "tolerance")?;
        let num = |x: Option<f64>| x.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "-".into());
        for c in &self.checks {
            writeln!(
                f,
                "{:<12} {:>12} {:>10}  {:<6}  {}",
                c.name,
                num(c.value),
                num(c.tolerance),
                c.status,
                c.detail
            )?;
        }
        write!(f, "{}", if self.pass() { "PASS" } else { "FAIL" })
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum VerifyError {
    #[error("every grid point is singular")]
    AllSingular,
    #[error("at ({s}, {t}, {w}): {source}")]
    Point { s: f64, t: f64, w: f64, source: CanalError },
}

fn at(s: f64, t: f64, w: f64) -> impl Fn(CanalError) -> VerifyError {
    move |source| VerifyError::Point { s, t, w, source }
}

/// Uniform random points in the grid's box, reproducible from the seed.
pub fn random_points(grid: &GridSpec, n: usize, seed: u64) -> Vec<(f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pick = |r: [f64; 2]| r[0] + (r[1] - r[0]) * rng.random::<f64>();
    (0..n).map(|_| (pick(grid.s), pick(grid.t), pick(grid.w))).collect()
}

fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, x| if x.abs() > m || x.is_nan() { x.abs() } else { m })
}

fn frames_check(surface: &Hypersurface, grid: &GridSpec, opts: &VerifyOptions) -> Check {
    let curve = &surface.curve;
    let (mut gram, mut ode, mut failed) = (0.0f64, 0.0f64, 0usize);
    let mut first_error = None;
    let s_values = grid.axes()[0].clone();
    for &s in &s_values {
        let report = match frame_at(curve, s) {
            Ok(frame) => verify_frame_with(&frame, curve.class, curve, opts.frame_step, opts.frames),
            Err(e) => {
                failed += 1;
                first_error.get_or_insert(e.to_string());
                continue;
            }
        };
        gram = gram.max(report.gram_residual);
        ode = ode.max(report.ode_residual);
        if !report.pass {
            failed += 1;
            if let Some(e) = report.error {
                first_error.get_or_insert(e);
            }
        }
    }
    let mut c = Check::measured(
        "frames",
        gram,
        opts.frames.gram,
        format!("{} samples, max ODE residual {ode:.2e}", s_values.len()),
    );
    if failed > 0 {
        c.status = Status::Fail;
        c.detail += &format!(", {failed} failing");
        if let Some(e) = first_error {
            c.detail += &format!(" ({e})");
        }
    }
    c
}

struct GridSample {
    /// Closed form, or the oracle for null families; `None` when singular.
    closed: Option<crate::oracle::CurvaturePair>,
    oracle: Option<(crate::oracle::CurvaturePair, f64)>,
}

pub fn verify_surface(surface: &Hypersurface, grid: &GridSpec, name: &str, opts: &VerifyOptions) -> Result<VerifyReport, VerifyError> {
    let family = surface.family;
    let mut checks = vec![frames_check(surface, grid, opts)];

    let randoms = random_points(grid, opts.samples, opts.seed);
    let envelope: Vec<(f64, f64)> = randoms
        .par_iter()
        .map(|&(s, t, w)| {
            let m = surface.membership_residual(s, t, w).map_err(at(s, t, w))?;
            let n = surface.normality_residual(s, t, w, opts.normality_step).map_err(at(s, t, w))?;
            Ok((m, n))
        })
        .collect::<Result<_, VerifyError>>()?;
    checks.push(Check::measured(
        "membership",
        max_abs(envelope.iter().map(|e| e.0)),
        opts.membership_tol,
        format!("{} random points", randoms.len()),
    ));
    checks.push(Check::measured(
        "normality",
        max_abs(envelope.iter().map(|e| e.1)),
        opts.normality_tol,
        format!("{} random points", randoms.len()),
    ));
    if let Some(nc) = &surface.null {
        let residuals = randoms
            .iter()
            .map(|&(s, t, w)| {
                let [r, rp, _] = surface.radius_at(s).map_err(at(s, t, w))?;
                let a = nc
                    .coefficients(r, rp, family.lambda, family.branch, (s, t, w))
                    .map_err(at(s, t, w))?;
                Ok(null_constraint_residual(a, r, rp, family.lambda))
            })
            .collect::<Result<Vec<f64>, VerifyError>>()?;
        checks.push(Check::measured(
            "constraint",
            max_abs(residuals),
            opts.membership_tol,
            "a2^2 + a4^2 - lambda r (r + 2 a1 r')".into(),
        ));
    }

    let points = grid.points();
    let samples: Vec<GridSample> = points
        .par_iter()
        .map(|&(s, t, w)| {
            let Some(closed) = curvature_at(surface, s, t, w, opts.step).map_err(at(s, t, w))? else {
                return Ok(GridSample {
                    closed: None,
                    oracle: None,
                });
            };
            // ill-conditioned oracle metrics leave the point unresolved
            let oracle = match surface.oracle_forms(s, t, w, opts.step) {
                Ok(forms) if !forms.is_singular(SINGULAR_TOL) => curvatures_numeric(&forms).ok().map(|p| (p, forms.epsilon)),
                Ok(_) | Err(CanalError::Oracle(_)) => None,
                Err(e) => return Err(at(s, t, w)(e)),
            };
            Ok(GridSample {
                closed: Some(closed),
                oracle,
            })
        })
        .collect::<Result<_, VerifyError>>()?;
    let singular = samples.iter().filter(|g| g.closed.is_none()).count();
    if singular == samples.len() {
        return Err(VerifyError::AllSingular);
    }
    let unresolved = samples.iter().filter(|g| g.closed.is_some() && g.oracle.is_none()).count();

    if family.has_closed_form() {
        let (mut worst, mut worst_allowed, mut failing, mut compared) = (0.0f64, 0.0f64, 0usize, 0usize);
        let mut ratio = 0.0f64;
        for g in &samples {
            let (true, Some(c), Some((o, _))) = (family.has_closed_form(), g.closed, g.oracle) else { continue };
            compared += 1;
            for q in [check_quantity(c.k, o.k, opts.rel_tol, opts.abs_tol), check_quantity(c.h, o.h, opts.rel_tol, opts.abs_tol)] {
                if !q.pass {
                    failing += 1;
                }
                if q.error / q.allowed > ratio {
                    ratio = q.error / q.allowed;
                    worst = q.error;
                    worst_allowed = q.allowed;
                }
            }
        }
        checks.push(Check {
            name: "curvature",
            value: Some(worst),
            tolerance: Some(worst_allowed),
            status: if failing == 0 { Status::Pass } else { Status::Fail },
            detail: format!(
                "closed vs oracle at {compared} points, {failing} outside rel {:.0e} / abs {:.0e}, {unresolved} unresolved",
                opts.rel_tol, opts.abs_tol
            ),
        });
        let relation = samples
            .iter()
            .zip(&points)
            .filter_map(|(g, &(s, t, w))| {
                let c = g.closed?;
                Some(
                    surface
                        .radius_at(s)
                        .and_then(|r| relation_residual(c, r[0], family))
                        .map_err(at(s, t, w)),
                )
            })
            .collect::<Result<Vec<f64>, VerifyError>>()?;
        checks.push(Check::measured(
            "relation",
            max_abs(relation),
            opts.relation_tol,
            "3H - r^2 K +- 2/r".into(),
        ));
    } else {
        checks.push(Check::skipped("curvature", "no closed form for null families"));
        checks.push(Check::skipped("relation", "no closed form for null families"));
    }

    let expected = family.expected_epsilon();
    let observed: Vec<f64> = samples.iter().filter_map(|g| g.oracle.map(|o| o.1)).collect();
    let wrong = observed.iter().filter(|&&e| e != expected).count();
    checks.push(Check {
        name: "epsilon",
        value: Some(wrong as f64),
        tolerance: Some(0.0),
        status: if wrong == 0 { Status::Pass } else { Status::Fail },
        detail: format!("<N,N> expected {expected:+}, {wrong} of {} points differ", observed.len()),
    });

    if family.variant.is_tubular() && family.has_closed_form() {
        let report = weingarten_residuals(surface, grid, opts.weingarten_step).map_err(at(grid.s[0], grid.t[0], grid.w[0]))?;
        let worst = report.residuals.iter().cloned().fold(0.0, f64::max);
        checks.push(Check::measured(
            "weingarten",
            worst,
            opts.weingarten_tol,
            format!(
                "st {:.1e}, sw {:.1e}, tw {:.1e} over {} points ({} skipped)",
                report.residuals[0], report.residuals[1], report.residuals[2], report.points, report.skipped
            ),
        ));
    } else {
        checks.push(Check::skipped("weingarten", "tubular families with closed forms only"));
    }

    Ok(VerifyReport {
        scene: name.to_string(),
        family: family.label(),
        grid_points: points.len(),
        singular_points: singular,
        unresolved_points: unresolved,
        checks,
    })
}

/// Scene-level seeds and sample counts override the options.
pub fn verify_scene(scene: &Scene, opts: &VerifyOptions) -> Result<VerifyReport, VerifyError> {
    let mut opts = *opts;
    if let Some(n) = scene.samples {
        opts.samples = n;
    }
    if let Some(seed) = scene.seed {
        opts.seed = seed;
    }
    verify_surface(&scene.surface, &scene.grid, &scene.name, &opts)
}
