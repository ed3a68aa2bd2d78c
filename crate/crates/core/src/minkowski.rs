//! Linear algebra of Minkowski 4-space with signature `(-, +, +, +)`.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

/// Default band on the quadratic form inside which a vector counts as lightlike.
pub const LIGHTLIKE_TOL: f64 = 1e-9;

/// A point or vector of Minkowski 4-space; `x1` is the timelike coordinate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Vec4(pub [f64; 4]);

impl Vec4 {
    pub const ZERO: Vec4 = Vec4([0.0; 4]);

    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Vec4([x1, x2, x3, x4])
    }

    /// Standard basis vector `e_{i+1}`.
    pub fn basis(i: usize) -> Self {
        let mut v = [0.0; 4];
        v[i] = 1.0;
        Vec4(v)
    }

    pub fn dot(self, other: Vec4) -> f64 {
        inner(self, other)
    }

    /// Squared norm in the Euclidean metric of the coordinates.
    pub fn euclid_norm_sq(self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn euclid_norm(self) -> f64 {
        self.euclid_norm_sq().sqrt()
    }

    pub fn max_abs(self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn to_array(self) -> [f64; 4] {
        self.0
    }
}

impl From<[f64; 4]> for Vec4 {
    fn from(v: [f64; 4]) -> Self {
        Vec4(v)
    }
}

impl From<Vec4> for [f64; 4] {
    fn from(v: Vec4) -> Self {
        v.0
    }
}

impl Index<usize> for Vec4 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vec4 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for Vec4 {
    type Output = Vec4;
    fn add(self, o: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl AddAssign for Vec4 {
    fn add_assign(&mut self, o: Vec4) {
        *self = *self + o;
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    fn sub(self, o: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl SubAssign for Vec4 {
    fn sub_assign(&mut self, o: Vec4) {
        *self = *self - o;
    }
}

impl Neg for Vec4 {
    type Output = Vec4;
    fn neg(self) -> Vec4 {
        Vec4(self.0.map(|x| -x))
    }
}

impl Mul<Vec4> for f64 {
    type Output = Vec4;
    fn mul(self, v: Vec4) -> Vec4 {
        Vec4(v.0.map(|x| self * x))
    }
}

impl Mul<f64> for Vec4 {
    type Output = Vec4;
    fn mul(self, c: f64) -> Vec4 {
        c * self
    }
}

impl fmt::Display for Vec4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.0[0], self.0[1], self.0[2], self.0[3]
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CausalClass {
    Spacelike,
    Timelike,
    Lightlike,
}

/// The three model quadrics centred at a point: `<u-p, u-p> = lambda r^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuadricKind {
    /// `lambda = +1`
    PseudoSphere,
    /// `lambda = -1`
    PseudoHyperbolic,
    /// `lambda = 0`
    NullCone,
}

impl QuadricKind {
    pub fn lambda(self) -> i32 {
        match self {
            QuadricKind::PseudoSphere => 1,
            QuadricKind::PseudoHyperbolic => -1,
            QuadricKind::NullCone => 0,
        }
    }

    pub fn from_lambda(lambda: i32) -> Option<Self> {
        match lambda {
            1 => Some(QuadricKind::PseudoSphere),
            -1 => Some(QuadricKind::PseudoHyperbolic),
            0 => Some(QuadricKind::NullCone),
            _ => None,
        }
    }
}

/// `-u1 v1 + u2 v2 + u3 v3 + u4 v4`
pub fn inner(u: Vec4, v: Vec4) -> f64 {
    -u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3]
}

// 3x3 determinant expanded through the 2x2 minors of the first two rows,
// so equal first rows cancel exactly
fn det3(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    let m01 = a[0] * b[1] - a[1] * b[0];
    let m02 = a[0] * b[2] - a[2] * b[0];
    let m12 = a[1] * b[2] - a[2] * b[1];
    c[2] * m01 - c[1] * m02 + c[0] * m12
}

/// Ternary vector product: the formal 4x4 determinant whose first row is
/// `(-e1, e2, e3, e4)` and whose remaining rows are `u`, `v`, `w`.
///
/// Expanded along the first row with explicit 3x3 minors. The result `X`
/// satisfies `<X, z> = det[z; u; v; w]`, so it is orthogonal to all three
/// arguments.
pub fn triple_cross(u: Vec4, v: Vec4, w: Vec4) -> Vec4 {
    let minor = |skip: usize| {
        let pick = |x: Vec4| -> [f64; 3] {
            let mut out = [0.0; 3];
            let mut k = 0;
            for (j, &c) in x.0.iter().enumerate() {
                if j != skip {
                    out[k] = c;
                    k += 1;
                }
            }
            out
        };
        det3(pick(u), pick(v), pick(w))
    };
    // cofactor signs along the first row are (+, -, +, -); the metric row
    // contributes the extra minus on e1
    Vec4([-minor(0), -minor(1), minor(2), -minor(3)])
}

/// Determinant of the matrix whose rows are `a, b, c, d`.
pub fn det4(a: Vec4, b: Vec4, c: Vec4, d: Vec4) -> f64 {
    // <a x b x c, d> = det[d; a; b; c] = -det[a; b; c; d]
    -inner(triple_cross(a, b, c), d)
}

pub fn causal_class(u: Vec4, tol: f64) -> CausalClass {
    let q = inner(u, u);
    if q.abs() <= tol {
        CausalClass::Lightlike
    } else if q < 0.0 {
        CausalClass::Timelike
    } else {
        CausalClass::Spacelike
    }
}

/// `sqrt(|<u, u>|)`
pub fn norm(u: Vec4) -> f64 {
    inner(u, u).abs().sqrt()
}

/// `<u - p, u - p> - lambda r^2`; `r` is ignored for the null cone.
pub fn quadric_residual(u: Vec4, p: Vec4, r: f64, kind: QuadricKind) -> f64 {
    let d = u - p;
    let lambda = kind.lambda() as f64;
    if lambda == 0.0 {
        inner(d, d)
    } else {
        inner(d, d) - lambda * r * r
    }
}
