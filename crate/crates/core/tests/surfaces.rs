mod common;

use canal_core::canal::{Hypersurface, RadiusSpec, ShapeSpec};
use canal_core::mesh::{export_field, export_obj, sweep, FieldFormat, GridSpec, Projection};
use canal_core::oracle::{compare, curvatures_numeric, DEFAULT_ABS_TOL, DEFAULT_REL_TOL, DEFAULT_STEP};
use canal_core::{builtin, parse, CanalFamily, Variant};
use common::scene;

fn surface(curve: &str, v: Variant, branch: i32, r: &str, g: &str) -> Hypersurface {
    let curve = builtin(curve).unwrap();
    let family = CanalFamily::new(curve.class, v, branch).unwrap();
    let shape = ShapeSpec {
        f: parse("w").unwrap(),
        g: parse(g).unwrap(),
    };
    Hypersurface::new(family, curve, RadiusSpec::new(parse(r).unwrap()), Some(shape), None).unwrap()
}

fn compare_grid(surface: &Hypersurface, grid: &GridSpec) -> usize {
    let mut compared = 0;
    for (s, t, w) in grid.points() {
        let Ok(closed) = surface.closed_curvature(s, t, w) else { continue };
        let forms = surface.oracle_forms(s, t, w, DEFAULT_STEP).unwrap();
        if forms.is_singular(1e-10) {
            continue;
        }
        let num = curvatures_numeric(&forms).unwrap();
        let rep = compare(closed, num, DEFAULT_REL_TOL, DEFAULT_ABS_TOL);
        assert!(rep.pass(), "({s}, {t}, {w}): closed {closed:?} oracle {num:?}");
        compared += 1;
    }
    compared
}

#[test]
fn second_branch_matches_oracle() {
    let cases = [
        ("pseudo-null-example", Variant::C1, [0.6, 2.5]),
        ("pseudo-null-example", Variant::T1, [1.0, 2.0]),
        ("partially-null-example", Variant::C5, [-1.5, -0.5]),
        ("partially-null-example", Variant::C1, [0.6, 2.5]),
    ];
    for (curve, v, w) in cases {
        let r = if v.is_tubular() { "1/2" } else { "s/2" };
        let grid = GridSpec::new([0.5, 1.5], [0.5, 1.2], w, [6, 6, 6]);
        let n = compare_grid(&surface(curve, v, -1, r, "t"), &grid);
        assert!(n >= 150, "{curve} {v:?}: only {n} points compared");
    }
}

#[test]
fn branches_differ() {
    let a = surface("pseudo-null-example", Variant::C1, 1, "s/2", "t");
    let b = surface("pseudo-null-example", Variant::C1, -1, "s/2", "t");
    let (pa, pb) = (a.point(1.0, 1.0, 1.0).unwrap(), b.point(1.0, 1.0, 1.0).unwrap());
    assert!((pa - pb).euclid_norm_sq() > 1e-6);
    assert!(a.membership_residual(1.0, 1.0, 1.0).unwrap().abs() < 1e-12);
    assert!(b.membership_residual(1.0, 1.0, 1.0).unwrap().abs() < 1e-12);
}

#[test]
fn mesh_export_writes_obj_and_fields() {
    let sc = scene("slice-partially-null-c5");
    let grid = sc.mesh_grid().unwrap();
    let mesh = sweep(&sc.surface, &grid, Projection::X123, DEFAULT_STEP).unwrap();
    assert_eq!(mesh.vertices.len(), 1600);
    assert_eq!(mesh.quads.len(), 39 * 39);

    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("m.obj");
    export_obj(&mesh, &obj).unwrap();
    let text = std::fs::read_to_string(&obj).unwrap();
    assert!(text.starts_with("# 40 x 40 grid, projection x1x2x3\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 1600);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 1521);
    let max_index = text
        .lines()
        .filter_map(|l| l.strip_prefix("f "))
        .flat_map(|l| l.split(' ').map(|x| x.parse::<usize>().unwrap()))
        .max();
    assert_eq!(max_index, Some(1600));

    let csv = dir.path().join("m.csv");
    export_field(&mesh, &sc.surface, &csv, FieldFormat::Csv).unwrap();
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().next().unwrap(), "s,t,w,x1,x2,x3,x4,K,H,singular");
    assert_eq!(rows.lines().count(), 1601);

    let json = dir.path().join("m.json");
    export_field(&mesh, &sc.surface, &json, FieldFormat::Json).unwrap();
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1600);
}

#[test]
fn null_mesh_uses_the_oracle() {
    let sc = scene("slice-null-c1");
    let grid = GridSpec::new([0.5, 1.5], [0.5, 1.2], [0.0, 0.0], [5, 5, 0]).with_fixed(canal_core::expr::Var::W, 1.0);
    let mesh = sweep(&sc.surface, &grid, Projection::X134, DEFAULT_STEP).unwrap();
    assert!(mesh.samples.iter().all(|s| s.curvature.is_some()));
}
