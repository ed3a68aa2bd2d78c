//! Grid sampling, projection to three coordinates, OBJ and field export.
//!
//! Vertices are stored row-major over the two swept axes in `(s, t, w)`
//! order with the fixed axis removed: for `w` fixed the rows run over `s`
//! and the columns over `t`.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canal::{relation_residual, CanalError, Hypersurface};
use crate::expr::Var;
use crate::minkowski::Vec4;
use crate::oracle::{curvatures_numeric, CurvaturePair, OracleError};

/// Relation residual allowed at export.
pub const EXPORT_RELATION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedAxis {
    pub axis: Var,
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub s: [f64; 2],
    pub t: [f64; 2],
    pub w: [f64; 2],
    /// Samples along `s`, `t`, `w`.
    pub counts: [usize; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed: Option<FixedAxis>,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum MeshError {
    #[error("grid: {0}")]
    Grid(String),
    #[error("every grid point is singular")]
    AllSingular,
    #[error("evaluating ({s}, {t}, {w}): {source}")]
    Point { s: f64, t: f64, w: f64, source: CanalError },
    #[error("exported pair at ({s}, {t}, {w}) violates its relation (residual {residual:e})")]
    Relation { s: f64, t: f64, w: f64, residual: f64 },
    #[error("mesh is empty")]
    Empty,
}

fn axis_index(v: Var) -> usize {
    match v {
        Var::S => 0,
        Var::T => 1,
        Var::W => 2,
    }
}

fn linspace(r: [f64; 2], n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![r[0]];
    }
    (0..n).map(|i| r[0] + (r[1] - r[0]) * i as f64 / (n - 1) as f64).collect()
}

impl GridSpec {
    pub fn new(s: [f64; 2], t: [f64; 2], w: [f64; 2], counts: [usize; 3]) -> Self {
        GridSpec {
            s,
            t,
            w,
            counts,
            fixed: None,
        }
    }

    pub fn with_fixed(mut self, axis: Var, value: f64) -> Self {
        self.fixed = Some(FixedAxis { axis, value });
        self
    }

    fn ranges(&self) -> [[f64; 2]; 3] {
        [self.s, self.t, self.w]
    }

    fn is_fixed(&self, i: usize) -> bool {
        self.fixed.is_some_and(|f| axis_index(f.axis) == i)
    }

    pub fn validate(&self) -> Result<(), MeshError> {
        let names = ["s", "t", "w"];
        for (i, r) in self.ranges().iter().enumerate() {
            if self.is_fixed(i) {
                continue;
            }
            if !(r[0].is_finite() && r[1].is_finite() && r[0] < r[1]) {
                return Err(MeshError::Grid(format!("{} range [{}, {}] is degenerate", names[i], r[0], r[1])));
            }
            if self.counts[i] < 2 {
                return Err(MeshError::Grid(format!("{} needs at least 2 samples, got {}", names[i], self.counts[i])));
            }
        }
        if let Some(f) = self.fixed {
            if !f.value.is_finite() {
                return Err(MeshError::Grid("fixed value is not finite".into()));
            }
        }
        Ok(())
    }

    /// Sample values per axis; the fixed axis has a single value.
    pub fn axes(&self) -> [Vec<f64>; 3] {
        let r = self.ranges();
        std::array::from_fn(|i| match self.fixed {
            Some(f) if axis_index(f.axis) == i => vec![f.value],
            _ => linspace(r[i], self.counts[i]),
        })
    }

    /// All points, `s` outermost and `w` innermost.
    pub fn points(&self) -> Vec<(f64, f64, f64)> {
        let [a, b, c] = self.axes();
        let mut out = Vec::with_capacity(a.len() * b.len() * c.len());
        for &s in &a {
            for &t in &b {
                for &w in &c {
                    out.push((s, t, w));
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.axes().iter().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Which three coordinates are kept.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Projection {
    #[serde(rename = "x1x2x3")]
    X123,
    #[serde(rename = "x1x2x4")]
    X124,
    #[default]
    #[serde(rename = "x1x3x4")]
    X134,
    #[serde(rename = "x2x3x4")]
    X234,
}

impl Projection {
    pub fn indices(self) -> [usize; 3] {
        match self {
            Projection::X123 => [0, 1, 2],
            Projection::X124 => [0, 1, 3],
            Projection::X134 => [0, 2, 3],
            Projection::X234 => [1, 2, 3],
        }
    }

    pub fn apply(self, x: Vec4) -> [f64; 3] {
        self.indices().map(|i| x[i])
    }

    pub fn name(self) -> &'static str {
        match self {
            Projection::X123 => "x1x2x3",
            Projection::X124 => "x1x2x4",
            Projection::X134 => "x1x3x4",
            Projection::X234 => "x2x3x4",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub s: f64,
    pub t: f64,
    pub w: f64,
    pub point: Vec4,
    /// `None` at singular points.
    pub curvature: Option<CurvaturePair>,
}

impl Sample {
    pub fn singular(&self) -> bool {
        self.curvature.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectedMesh {
    pub projection: Projection,
    pub rows: usize,
    pub cols: usize,
    pub vertices: Vec<[f64; 3]>,
    pub quads: Vec<[usize; 4]>,
    pub samples: Vec<Sample>,
}

impl ProjectedMesh {
    pub fn singular_count(&self) -> usize {
        self.samples.iter().filter(|s| s.singular()).count()
    }
}

/// Curvature at one point, or `None` on the singular set.
///
/// Closed-form families use the closed forms and their singular set. Null
/// families have no closed form; there the oracle is used and a point counts
/// as singular when its numeric metric is degenerate.
pub fn curvature_at(surface: &Hypersurface, s: f64, t: f64, w: f64, step: f64) -> Result<Option<CurvaturePair>, CanalError> {
    if surface.family.has_closed_form() {
        return match surface.closed_curvature(s, t, w) {
            Ok(pair) => Ok(Some(pair)),
            Err(CanalError::Singular(_)) => Ok(None),
            Err(e) => Err(e),
        };
    }
    let forms = match surface.oracle_forms(s, t, w, step) {
        Ok(f) => f,
        Err(CanalError::Oracle(OracleError::DegenerateTangent(_) | OracleError::SingularMetric(_))) => return Ok(None),
        Err(e) => return Err(e),
    };
    if forms.is_singular(crate::canal::SINGULAR_TOL) {
        return Ok(None);
    }
    Ok(curvatures_numeric(&forms).ok())
}

/// Evaluate a two-parameter slice of the hypersurface.
pub fn sweep(surface: &Hypersurface, grid: &GridSpec, projection: Projection, step: f64) -> Result<ProjectedMesh, MeshError> {
    grid.validate()?;
    let Some(fixed) = grid.fixed else {
        return Err(MeshError::Grid("a mesh needs one fixed axis".into()));
    };
    let fi = axis_index(fixed.axis);
    let axes = grid.axes();
    let swept: Vec<usize> = (0..3).filter(|&i| i != fi).collect();
    let (rows, cols) = (axes[swept[0]].len(), axes[swept[1]].len());

    let row_samples: Result<Vec<Vec<Sample>>, MeshError> = (0..rows)
        .into_par_iter()
        .map(|i| {
            (0..cols)
                .map(|j| {
                    let mut p = [fixed.value; 3];
                    p[swept[0]] = axes[swept[0]][i];
                    p[swept[1]] = axes[swept[1]][j];
                    let [s, t, w] = p;
                    let wrap = |source| MeshError::Point { s, t, w, source };
                    let point = surface.point(s, t, w).map_err(wrap)?;
                    let curvature = curvature_at(surface, s, t, w, step).map_err(wrap)?;
                    Ok(Sample {
                        s,
                        t,
                        w,
                        point,
                        curvature,
                    })
                })
                .collect()
        })
        .collect();
    let samples: Vec<Sample> = row_samples?.into_iter().flatten().collect();
    if samples.iter().all(Sample::singular) {
        return Err(MeshError::AllSingular);
    }

    let vertices = samples.iter().map(|s| projection.apply(s.point)).collect();
    let mut quads = Vec::with_capacity((rows - 1) * (cols - 1));
    for i in 0..rows - 1 {
        for j in 0..cols - 1 {
            let v = |a: usize, b: usize| a * cols + b;
            quads.push([v(i, j), v(i, j + 1), v(i + 1, j + 1), v(i + 1, j)]);
        }
    }
    Ok(ProjectedMesh {
        projection,
        rows,
        cols,
        vertices,
        quads,
        samples,
    })
}

pub fn write_obj<W: Write>(mesh: &ProjectedMesh, mut out: W) -> io::Result<()> {
    let mut buf = String::new();
    let _ = writeln!(buf, "# {} x {} grid, projection {}", mesh.rows, mesh.cols, mesh.projection.name());
    for v in &mesh.vertices {
        let _ = writeln!(buf, "v {} {} {}", v[0], v[1], v[2]);
    }
    for q in &mesh.quads {
        let _ = writeln!(buf, "f {} {} {} {}", q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1);
    }
    out.write_all(buf.as_bytes())
}

#[derive(Debug, Error)]
pub enum ExportError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("writing {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), ExportError> {
    std::fs::write(path, bytes).map_err(|source| ExportError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn export_obj(mesh: &ProjectedMesh, path: &Path) -> Result<(), ExportError> {
    if mesh.vertices.is_empty() {
        return Err(MeshError::Empty.into());
    }
    let mut buf = Vec::new();
    write_obj(mesh, &mut buf).expect("writing to memory");
    write_file(path, &buf)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Serialize)]
struct FieldRecord {
    s: f64,
    t: f64,
    w: f64,
    x1: f64,
    x2: f64,
    x3: f64,
    x4: f64,
    #[serde(rename = "K")]
    k: Option<f64>,
    #[serde(rename = "H")]
    h: Option<f64>,
    singular: bool,
}

/// Re-check every exported pair against the family relation.
fn check_relations(mesh: &ProjectedMesh, surface: &Hypersurface) -> Result<(), MeshError> {
    if !surface.family.has_closed_form() {
        return Ok(());
    }
    for sm in &mesh.samples {
        let Some(pair) = sm.curvature else { continue };
        let wrap = |source| MeshError::Point {
            s: sm.s,
            t: sm.t,
            w: sm.w,
            source,
        };
        let r = surface.radius_at(sm.s).map_err(wrap)?[0];
        let residual = relation_residual(pair, r, surface.family).map_err(wrap)?;
        if !(residual.abs() <= EXPORT_RELATION_TOL) {
            return Err(MeshError::Relation {
                s: sm.s,
                t: sm.t,
                w: sm.w,
                residual,
            });
        }
    }
    Ok(())
}

pub fn field_string(mesh: &ProjectedMesh, surface: &Hypersurface, format: FieldFormat) -> Result<String, ExportError> {
    if mesh.samples.is_empty() {
        return Err(MeshError::Empty.into());
    }
    check_relations(mesh, surface)?;
    let records = mesh.samples.iter().map(|sm| FieldRecord {
        s: sm.s,
        t: sm.t,
        w: sm.w,
        x1: sm.point[0],
        x2: sm.point[1],
        x3: sm.point[2],
        x4: sm.point[3],
        k: sm.curvature.map(|c| c.k),
        h: sm.curvature.map(|c| c.h),
        singular: sm.singular(),
    });
    match format {
        FieldFormat::Json => {
            let mut s = serde_json::to_string_pretty(&records.collect::<Vec<_>>())?;
            s.push('\n');
            Ok(s)
        }
        FieldFormat::Csv => {
            let mut s = String::from("s,t,w,x1,x2,x3,x4,K,H,singular\n");
            let cell = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
            for r in records {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{}",
                    r.s,
                    r.t,
                    r.w,
                    r.x1,
                    r.x2,
                    r.x3,
                    r.x4,
                    cell(r.k),
                    cell(r.h),
                    r.singular
                );
            }
            Ok(s)
        }
    }
}

pub fn export_field(mesh: &ProjectedMesh, surface: &Hypersurface, path: &Path, format: FieldFormat) -> Result<(), ExportError> {
    let s = field_string(mesh, surface, format)?;
    write_file(path, s.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canal::{CanalFamily, RadiusSpec, ShapeSpec, Variant};
    use crate::curves::builtin;
    use crate::expr::parse;
    use crate::oracle::DEFAULT_STEP;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn example() -> Hypersurface {
        let curve = builtin("pseudo-null-example").unwrap();
        let family = CanalFamily::new(curve.class, Variant::C1, 1).unwrap();
        let shape = ShapeSpec {
            f: parse("w").unwrap(),
            g: parse("t").unwrap(),
        };
        Hypersurface::new(family, curve, RadiusSpec::new(parse("s/2").unwrap()), Some(shape), None).unwrap()
    }

    fn unit_square() -> ProjectedMesh {
        let samples = (0..4)
            .map(|i| Sample {
                s: (i / 2) as f64,
                t: (i % 2) as f64,
                w: 0.0,
                point: Vec4::new((i / 2) as f64, 0.0, (i % 2) as f64, 0.0),
                curvature: None,
            })
            .collect::<Vec<_>>();
        ProjectedMesh {
            projection: Projection::X134,
            rows: 2,
            cols: 2,
            vertices: samples.iter().map(|s| Projection::X134.apply(s.point)).collect(),
            quads: vec![[0, 1, 3, 2]],
            samples,
        }
    }

    #[test]
    fn grid_validation() {
        let g = GridSpec::new([0.0, 1.0], [0.0, 1.0], [0.0, 1.0], [1, 4, 4]).with_fixed(Var::W, 0.5);
        assert!(matches!(g.validate(), Err(MeshError::Grid(_))));
        let g = GridSpec::new([1.0, 1.0], [0.0, 1.0], [0.0, 1.0], [3, 3, 3]);
        assert!(g.validate().is_err());
        // the fixed axis needs neither a range nor a count
        let g = GridSpec::new([0.0, 1.0], [0.0, 1.0], [0.0, 0.0], [3, 3, 0]).with_fixed(Var::W, 0.5);
        g.validate().unwrap();
        assert_eq!(g.len(), 9);
        assert!(g.points().iter().all(|p| p.2 == 0.5));
    }

    #[test]
    fn points_are_row_major() {
        let g = GridSpec::new([0.0, 1.0], [0.0, 1.0], [0.0, 1.0], [2, 2, 2]);
        let p = g.points();
        assert_eq!(p[0], (0.0, 0.0, 0.0));
        assert_eq!(p[1], (0.0, 0.0, 1.0));
        assert_eq!(p[2], (0.0, 1.0, 0.0));
        assert_eq!(p[7], (1.0, 1.0, 1.0));
    }

    #[test]
    fn obj_ordering() {
        let mut buf = Vec::new();
        write_obj(&unit_square(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let v: Vec<_> = text.lines().filter(|l| l.starts_with("v ")).collect();
        let f: Vec<_> = text.lines().filter(|l| l.starts_with("f ")).collect();
        assert_eq!(v.len(), 4);
        assert_eq!(f, ["f 1 2 4 3"]);
    }

    #[test]
    fn sweep_quads_match_obj_contract() {
        let grid = GridSpec::new([0.5, 1.5], [0.5, 1.5], [0.0, 0.0], [2, 2, 0]).with_fixed(Var::W, FRAC_PI_3);
        let mesh = sweep(&example(), &grid, Projection::X134, DEFAULT_STEP).unwrap();
        assert_eq!(mesh.quads, vec![[0, 1, 3, 2]]);
        assert_eq!(mesh.samples[1].t, 1.5);
    }

    #[test]
    fn slice_40x40() {
        let grid = GridSpec::new([0.2, 2.0], [0.2, 2.0], [0.0, 0.0], [40, 40, 0]).with_fixed(Var::W, FRAC_PI_3);
        let surface = example();
        let mesh = sweep(&surface, &grid, Projection::X134, DEFAULT_STEP).unwrap();
        assert_eq!(mesh.vertices.len(), 1600);
        assert_eq!(mesh.quads.len(), 39 * 39);
        for (v, s) in mesh.vertices.iter().zip(&mesh.samples) {
            assert_eq!(*v, [s.point[0], s.point[2], s.point[3]]);
        }
        let a = field_string(&mesh, &surface, FieldFormat::Csv).unwrap();
        let again = sweep(&surface, &grid, Projection::X134, DEFAULT_STEP).unwrap();
        assert_eq!(a, field_string(&again, &surface, FieldFormat::Csv).unwrap());
    }

    #[test]
    fn field_row_at_reference_example() {
        let grid = GridSpec::new([1.0, 2.0], [1.0, 2.0], [0.0, 0.0], [2, 2, 0]).with_fixed(Var::W, FRAC_PI_2);
        let surface = example();
        let mesh = sweep(&surface, &grid, Projection::X134, DEFAULT_STEP).unwrap();
        let csv = field_string(&mesh, &surface, FieldFormat::Csv).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("s,t,w,x1,x2,x3,x4,K,H,singular"));
        let cells: Vec<&str> = lines.next().unwrap().split(',').collect();
        let k: f64 = cells[7].parse().unwrap();
        let h: f64 = cells[8].parse().unwrap();
        assert!((k - 3.246620).abs() < 1e-5, "{k}");
        assert!((h + 1.062782).abs() < 1e-5, "{h}");
        assert_eq!(cells[9], "false");

        let json: serde_json::Value = serde_json::from_str(&field_string(&mesh, &surface, FieldFormat::Json).unwrap()).unwrap();
        assert_eq!(json.as_array().unwrap().len(), 4);
        assert!((json[0]["K"].as_f64().unwrap() - k).abs() == 0.0);
    }

    #[test]
    fn singular_rows_have_empty_cells() {
        // w = 0 makes sin f vanish, which puts the whole slice on the singular set
        let grid = GridSpec::new([0.5, 1.5], [0.5, 1.5], [0.0, 0.0], [3, 3, 0]).with_fixed(Var::W, 0.0);
        assert!(matches!(sweep(&example(), &grid, Projection::X134, DEFAULT_STEP), Err(MeshError::AllSingular)));
        let mut mesh = unit_square();
        mesh.samples[0].curvature = None;
        let csv = field_string(&mesh, &example(), FieldFormat::Csv).unwrap();
        assert!(csv.lines().nth(1).unwrap().ends_with(",,,true"));
    }

    #[test]
    fn projection_names_match_serde() {
        for p in [Projection::X123, Projection::X124, Projection::X134, Projection::X234] {
            assert_eq!(serde_json::to_string(&p).unwrap(), format!("\"{}\"", p.name()));
        }
        let mut buf = Vec::new();
        write_obj(&unit_square(), &mut buf).unwrap();
        let obj = String::from_utf8(buf).unwrap();
        assert!(obj.starts_with("# 2 x 2 grid, projection x1x3x4"), "{obj}");
    }

    #[test]
    fn unwritable_path() {
        let err = export_obj(&unit_square(), Path::new("/nonexistent-dir/x.obj")).unwrap_err();
        assert!(matches!(err, ExportError::Io { .. }));
    }
}
