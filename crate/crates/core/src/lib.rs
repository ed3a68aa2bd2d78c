//! Canal and tubular hypersurfaces around pseudo null, partially null and
//! null curves in Minkowski 4-space, with a finite-difference oracle for
//! their curvatures.

pub mod canal;
pub mod curves;
pub mod expr;
pub mod mesh;
pub mod minkowski;
pub mod oracle;
pub mod scene;
pub mod verify;

pub use canal::{CanalError, CanalFamily, Hypersurface, NullCoefficients, RadiusSpec, ShapeSpec, Variant};
pub use curves::{builtin, CurveClass, CurveSpec, FrenetData};
pub use expr::{parse, Expr};
pub use mesh::{GridSpec, ProjectedMesh, Projection};
pub use minkowski::Vec4;
pub use oracle::{CurvaturePair, FundamentalForms};
pub use scene::{load_scene, parse_scene, Scene, SceneError};
pub use verify::{verify_scene, VerifyOptions, VerifyReport};
