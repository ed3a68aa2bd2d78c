//! Scene files: a TOML document describing one hypersurface, its sampling
//! grid and its outputs.
//!
//! ```toml
//! version = 1
//! name = "pseudo-null-c1"
//!
//! [curve]
//! builtin = "pseudo-null-example"      # or: components = [..4 exprs..] and class
//!
//! [family]
//! variant = "C1"
//! branch = 1
//!
//! [surface]
//! radius = "s/2"
//! f = "w"
//! g = "t"
//! # a1 = "t" and theta = "w" for null families
//!
//! [grid]
//! s = [0.5, 1.5]
//! t = [0.5, 1.2]
//! w = [0.6, 2.5]
//! counts = [10, 10, 10]
//!
//! [mesh]
//! fixed = "w"
//! value = "pi/3"
//! projection = "x1x3x4"
//! ```
//!
//! Errors carry the dotted path of the offending field.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canal::{CanalError, CanalFamily, Hypersurface, NullCoefficients, RadiusSpec, ShapeSpec, Variant};
use crate::curves::{builtin, CurveClass, CurveSpec};
use crate::expr::{eval_value, Expr, Var};
use crate::mesh::{FieldFormat, FixedAxis, GridSpec, Projection};
use crate::minkowski::Vec4;

pub const SCENE_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
}

impl SceneError {
    pub fn path(&self) -> Option<&str> {
        match self {
            SceneError::Schema { path, .. } => Some(path),
            SceneError::Io { .. } => None,
        }
    }
}

fn schema(path: &str, message: impl ToString) -> SceneError {
    SceneError::Schema {
        path: path.to_string(),
        message: message.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub version: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub curve: CurveSection,
    pub family: FamilySection,
    pub surface: SurfaceSection,
    pub grid: GridSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mesh: Option<MeshSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<[Expr; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<CurveClass>,
    /// Constant frame for straight lines, one row per frame vector.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub completion: Option<[Vec4; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge_s: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySection {
    pub variant: Variant,
    #[serde(default = "default_branch")]
    pub branch: i32,
}

fn default_branch() -> i32 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSection {
    pub radius: Expr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Expr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Expr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a1: Option<Expr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Expr>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub s: [f64; 2],
    pub t: [f64; 2],
    pub w: [f64; 2],
    pub counts: [usize; 3],
}

/// A number or a constant expression such as `"pi/3"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Expr(Expr),
}

impl Scalar {
    pub fn value(&self) -> Result<f64, String> {
        match self {
            Scalar::Number(x) => Ok(*x),
            Scalar::Expr(e) => {
                if [Var::S, Var::T, Var::W].iter().any(|&v| e.uses(v)) {
                    return Err(format!("`{e}` must be a constant"));
                }
                eval_value(e, 0.0, 0.0, 0.0).map_err(|err| err.to_string())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSection {
    pub fixed: Var,
    /// Ranges and counts default to the `[grid]` values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<[usize; 3]>,
    pub value: Scalar,
    #[serde(default)]
    pub projection: Projection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obj: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<PathBuf>,
    #[serde(default)]
    pub field_format: FieldFormat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeshSettings {
    /// Sampling grid with the fixed axis set.
    pub grid: GridSpec,
    pub projection: Projection,
    pub obj: Option<PathBuf>,
    pub field: Option<PathBuf>,
    pub field_format: FieldFormat,
}

/// A validated scene.
#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    pub name: String,
    pub description: Option<String>,
    pub surface: Hypersurface,
    pub grid: GridSpec,
    pub mesh: Option<MeshSettings>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

impl Scene {
    pub fn mesh_grid(&self) -> Option<GridSpec> {
        self.mesh.as_ref().map(|m| m.grid)
    }
}

fn deserialize<T: DeserializeOwned>(text: &str) -> Result<T, SceneError> {
    let de = toml::Deserializer::parse(text).map_err(|e| schema("(document)", e.to_string().trim_end()))?;
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let message = e.into_inner().message().to_string();
        schema(if path == "." { "(document)" } else { &path }, message)
    })
}

pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    deserialize::<SceneFile>(text)?.resolve()
}

pub fn load_scene(path: &Path) -> Result<Scene, SceneError> {
    let text = std::fs::read_to_string(path).map_err(|source| SceneError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_scene(&text)
}

impl SceneFile {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scene files serialize")
    }

    fn curve(&self) -> Result<CurveSpec, SceneError> {
        let c = &self.curve;
        let mut spec = match (&c.builtin, &c.components) {
            (Some(name), None) => {
                if c.class.is_some() {
                    return Err(schema("curve.class", "builtin curves carry their own class"));
                }
                builtin(name).map_err(|e| schema("curve.builtin", e))?
            }
            (None, Some(components)) => {
                let class = c.class.ok_or_else(|| schema("curve.class", "required with curve.components"))?;
                CurveSpec::new(components.clone(), class).map_err(|e| schema("curve.components", e))?
            }
            (Some(_), Some(_)) => return Err(schema("curve", "give either builtin or components, not both")),
            (None, None) => return Err(schema("curve", "missing builtin or components")),
        };
        if let Some(frame) = c.completion {
            spec = spec.with_completion(frame).map_err(|e| schema("curve.completion", e))?;
        }
        if let Some(s) = c.gauge_s {
            spec = spec.with_gauge_s(s);
        }
        Ok(spec)
    }

    pub fn resolve(&self) -> Result<Scene, SceneError> {
        if self.version != SCENE_VERSION {
            return Err(schema("version", format!("unsupported version {}, expected {SCENE_VERSION}", self.version)));
        }
        let curve = self.curve()?;
        let family = CanalFamily::new(curve.class, self.family.variant, self.family.branch).map_err(|e| {
            let path = if matches!(e, CanalError::Incompatible(ref m) if m.starts_with("branch")) {
                "family.branch"
            } else {
                "family.variant"
            };
            schema(path, e)
        })?;

        let sf = &self.surface;
        let null = family.variant.is_null();
        for (key, present, wanted) in [
            ("f", sf.f.is_some(), !null),
            ("g", sf.g.is_some(), !null),
            ("a1", sf.a1.is_some(), null),
            ("theta", sf.theta.is_some(), null),
        ] {
            let path = format!("surface.{key}");
            match (present, wanted) {
                (false, true) => return Err(schema(&path, format!("required for {}", family.variant.name()))),
                (true, false) => return Err(schema(&path, format!("not used by {}", family.variant.name()))),
                _ => {}
            }
        }
        let shape = match (&sf.f, &sf.g) {
            (Some(f), Some(g)) => Some(ShapeSpec { f: f.clone(), g: g.clone() }),
            _ => None,
        };
        let nc = match (&sf.a1, &sf.theta) {
            (Some(a1), Some(theta)) => Some(NullCoefficients {
                a1: a1.clone(),
                theta: theta.clone(),
            }),
            _ => None,
        };
        let surface = Hypersurface::new(family, curve, RadiusSpec::new(sf.radius.clone()), shape, nc).map_err(|e| {
            let path = match &e {
                CanalError::Incompatible(m) if m.contains("radius") => "surface.radius",
                CanalError::Incompatible(m) if m.contains("f and g") => "surface.f",
                _ => "surface",
            };
            schema(path, e)
        })?;

        let gs = &self.grid;
        let grid = GridSpec::new(gs.s, gs.t, gs.w, gs.counts);
        grid.validate().map_err(|e| schema("grid", e))?;

        // radius regime along the sampled s values
        for &s in &grid.axes()[0] {
            surface.radius_at(s).map_err(|e| schema("surface.radius", e))?;
        }

        let mesh = match &self.mesh {
            None => None,
            Some(m) => {
                let value = m.value.value().map_err(|e| schema("mesh.value", e))?;
                let mesh_grid = GridSpec {
                    s: m.s.unwrap_or(grid.s),
                    t: m.t.unwrap_or(grid.t),
                    w: m.w.unwrap_or(grid.w),
                    counts: m.counts.unwrap_or(grid.counts),
                    fixed: Some(FixedAxis { axis: m.fixed, value }),
                };
                mesh_grid.validate().map_err(|e| schema("mesh", e))?;
                Some(MeshSettings {
                    grid: mesh_grid,
                    projection: m.projection,
                    obj: m.obj.clone(),
                    field: m.field.clone(),
                    field_format: m.field_format,
                })
            }
        };

        let (samples, seed) = match &self.verify {
            Some(v) => {
                if v.samples == Some(0) {
                    return Err(schema("verify.samples", "must be positive"));
                }
                (v.samples, v.seed)
            }
            None => (None, None),
        };

        Ok(Scene {
            name: self.name.clone(),
            description: self.description.clone(),
            surface,
            grid,
            mesh,
            samples,
            seed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"
version = 1
name = "pseudo-null-c1"

[curve]
builtin = "pseudo-null-example"

[family]
variant = "C1"
branch = 1

[surface]
radius = "s/2"
f = "w"
g = "t"

[grid]
s = [0.5, 1.5]
t = [0.5, 1.2]
w = [0.6, 2.5]
counts = [10, 10, 10]

[mesh]
fixed = "w"
value = "pi/3"
"#;

    fn err_path(text: &str) -> String {
        parse_scene(text).unwrap_err().path().unwrap().to_string()
    }

    #[test]
    fn parses_example() {
        let scene = parse_scene(EXAMPLE).unwrap();
        assert_eq!(scene.surface.family.variant, Variant::C1);
        let m = scene.mesh.unwrap();
        assert_eq!(m.projection, Projection::X134);
        let fixed = m.grid.fixed.unwrap();
        assert_eq!(fixed.axis, Var::W);
        assert!((fixed.value - std::f64::consts::FRAC_PI_3).abs() < 1e-15);
        assert_eq!(m.grid.s, scene.grid.s);
        let text = EXAMPLE.replace("value = \"pi/3\"", "value = \"pi/3\"\ns = [0.2, 2.0]\ncounts = [40, 40, 1]");
        let m = parse_scene(&text).unwrap().mesh.unwrap();
        assert_eq!((m.grid.s, m.grid.counts), ([0.2, 2.0], [40, 40, 1]));
    }

    #[test]
    fn round_trips_through_toml() {
        let file: SceneFile = deserialize(EXAMPLE).unwrap();
        let again: SceneFile = deserialize(&file.to_toml()).unwrap();
        assert_eq!(file, again);
    }

    #[test]
    fn reports_field_paths() {
        assert_eq!(err_path(&EXAMPLE.replace("\"C1\"", "\"C9\"")), "family.variant");
        assert_eq!(err_path(&EXAMPLE.replace("branch = 1", "branch = 0")), "family.branch");
        assert_eq!(err_path(&EXAMPLE.replace("\"s/2\"", "\"s/\"")), "surface.radius");
        assert_eq!(err_path(&EXAMPLE.replace("\"s/2\"", "\"2*s\"")), "surface.radius");
        assert_eq!(err_path(&EXAMPLE.replace("counts = [10, 10, 10]", "counts = [1, 10, 10]")), "grid");
        assert_eq!(err_path(&EXAMPLE.replace("version = 1", "version = 7")), "version");
        assert_eq!(err_path(&EXAMPLE.replace("g = \"t\"", "")), "surface.g");
        assert_eq!(err_path(&EXAMPLE.replace("g = \"t\"", "g = \"t\"\nh = 1")), "surface.h");
        assert_eq!(err_path(&EXAMPLE.replace("value = \"pi/3\"", "value = \"s\"")), "mesh.value");
        assert_eq!(err_path(&EXAMPLE.replace("\"pseudo-null-example\"", "\"nope\"")), "curve.builtin");
        assert_eq!(err_path(&EXAMPLE.replace("[curve]\nbuiltin = \"pseudo-null-example\"", "[curve]")), "curve");
        assert_eq!(err_path("version = ["), "(document)");
    }

    #[test]
    fn null_family_needs_null_coefficients() {
        let text = EXAMPLE
            .replace("pseudo-null-example", "null-example")
            .replace("\"C1\"", "\"NullC1\"");
        assert_eq!(err_path(&text), "surface.f");
        let text = text.replace("f = \"w\"\ng = \"t\"", "a1 = \"t\"\ntheta = \"w\"");
        parse_scene(&text).unwrap();
        let bad = text.replace("\"NullC1\"", "\"T4\"");
        assert_eq!(err_path(&bad), "family.variant");
    }

    #[test]
    fn custom_curve_with_completion() {
        let text = EXAMPLE.replace(
            "builtin = \"pseudo-null-example\"",
            "components = [\"0\", \"s\", \"0\", \"0\"]\nclass = \"pseudo-null\"\ncompletion = [[0, 1, 0, 0], [0.7071067811865476, 0, 0, 0.7071067811865476], [0, 0, 1, 0], [-0.7071067811865476, 0, 0, 0.7071067811865476]]",
        );
        let scene = parse_scene(&text).unwrap();
        assert_eq!(scene.surface.curve.class, CurveClass::PseudoNull);
    }
}
