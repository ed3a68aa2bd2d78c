#![allow(dead_code)]

use std::path::PathBuf;

use canal_core::{load_scene, Scene};

pub fn scenes_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenes")
}

pub fn scene(name: &str) -> Scene {
    let path = scenes_dir().join(format!("{name}.toml"));
    load_scene(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub const CLOSED_FORM_SCENES: [&str; 18] = [
    "pseudo-null-c1",
    "pseudo-null-c2",
    "pseudo-null-c3",
    "pseudo-null-c4",
    "pseudo-null-c5",
    "pseudo-null-t1",
    "pseudo-null-t2",
    "pseudo-null-t3",
    "pseudo-null-t4",
    "partially-null-c1",
    "partially-null-c2",
    "partially-null-c3",
    "partially-null-c4",
    "partially-null-c5",
    "partially-null-t1",
    "partially-null-t2",
    "partially-null-t3",
    "partially-null-t4",
];

pub const NULL_SCENES: [&str; 3] = ["null-c1", "null-c2", "null-t1"];

pub fn family_scenes() -> impl Iterator<Item = &'static str> {
    CLOSED_FORM_SCENES.iter().chain(NULL_SCENES.iter()).copied()
}

/// Classical fourth-order Runge-Kutta for `y' = f(y)`.
pub fn rk4<const N: usize>(f: impl Fn([f64; N]) -> [f64; N], y0: [f64; N], h: f64, steps: usize) -> Vec<[f64; N]> {
    let add = |a: [f64; N], b: [f64; N], c: f64| std::array::from_fn(|i| a[i] + c * b[i]);
    let mut out = vec![y0];
    let mut y = y0;
    for _ in 0..steps {
        let k1 = f(y);
        let k2 = f(add(y, k1, h / 2.0));
        let k3 = f(add(y, k2, h / 2.0));
        let k4 = f(add(y, k3, h));
        y = std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        out.push(y);
    }
    out
}
