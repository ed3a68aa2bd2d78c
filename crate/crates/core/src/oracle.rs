//! Finite-difference hypersurface geometry.
//!
//! Works from nothing but a point evaluator `(s, t, w) -> Vec4`, so it is
//! independent of every closed form in [`crate::canal`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::minkowski::{inner, triple_cross, Vec4};

pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_REL_TOL: f64 = 1e-4;
pub const DEFAULT_ABS_TOL: f64 = 1e-6;

/// Gaussian and mean curvature at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvaturePair {
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "H")]
    pub h: f64,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum OracleError {
    #[error("evaluator failed at ({s}, {t}, {w}): {message}")]
    Evaluation {
        s: f64,
        t: f64,
        w: f64,
        message: String,
    },
    #[error("tangent vectors are degenerate (|normal| = {0:e})")]
    DegenerateTangent(f64),
    #[error("first fundamental form is singular (det = {0:e})")]
    SingularMetric(f64),
}

/// Point, first and second partials by central differences.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfaceJet {
    pub point: Vec4,
    /// `[d_s, d_t, d_w]`
    pub d1: [Vec4; 3],
    /// Symmetric; `d2[i][j]` is the mixed partial in axes `i`, `j`.
    pub d2: [[Vec4; 3]; 3],
    pub step: f64,
}

/// Central differences at `step` and `step / 2` combined by Richardson
/// extrapolation, so the truncation error is `O(step^4)`. Mixed partials use
/// the four-point cross stencil. Uses 37 evaluations.
pub fn numeric_jet<F, E>(surface: F, s: f64, t: f64, w: f64, step: f64) -> Result<SurfaceJet, OracleError>
where
    F: Fn(f64, f64, f64) -> Result<Vec4, E>,
    E: std::fmt::Display,
{
    let base = [s, t, w];
    let eval = |off: [f64; 3]| {
        let p = [base[0] + off[0], base[1] + off[1], base[2] + off[2]];
        surface(p[0], p[1], p[2]).map_err(|e| OracleError::Evaluation {
            s: p[0],
            t: p[1],
            w: p[2],
            message: e.to_string(),
        })
    };
    let point = eval([0.0; 3])?;
    let stencil = |h: f64| -> Result<([Vec4; 3], [[Vec4; 3]; 3]), OracleError> {
        let mut d1 = [Vec4::ZERO; 3];
        let mut d2 = [[Vec4::ZERO; 3]; 3];
        for i in 0..3 {
            let mut o = [0.0; 3];
            o[i] = h;
            let hi = eval(o)?;
            o[i] = -h;
            let lo = eval(o)?;
            d1[i] = (1.0 / (2.0 * h)) * (hi - lo);
            d2[i][i] = (1.0 / (h * h)) * (hi - 2.0 * point + lo);
        }
        for i in 0..3 {
            for j in i + 1..3 {
                let at = |a: f64, b: f64| {
                    let mut o = [0.0; 3];
                    o[i] = a;
                    o[j] = b;
                    eval(o)
                };
                let v = at(h, h)? - at(h, -h)? - at(-h, h)? + at(-h, -h)?;
                d2[i][j] = (1.0 / (4.0 * h * h)) * v;
                d2[j][i] = d2[i][j];
            }
        }
        Ok((d1, d2))
    };
    let (c1, c2) = stencil(step)?;
    let (f1, f2) = stencil(step / 2.0)?;
    let extrapolate = |fine: Vec4, coarse: Vec4| (1.0 / 3.0) * (4.0 * fine - coarse);
    let d1 = std::array::from_fn(|i| extrapolate(f1[i], c1[i]));
    let d2 = std::array::from_fn(|i| std::array::from_fn(|j| extrapolate(f2[i][j], c2[i][j])));
    Ok(SurfaceJet {
        point,
        d1,
        d2,
        step,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FundamentalForms {
    pub g: [[f64; 3]; 3],
    pub h: [[f64; 3]; 3],
    pub det_g: f64,
    pub det_h: f64,
    pub normal: Vec4,
    /// `<N, N>`, either `+1` or `-1`.
    pub epsilon: f64,
    /// Product of the squared Euclidean lengths of the tangents; `det_g` is
    /// judged against it.
    pub metric_scale: f64,
}

pub fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn adjugate(m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    [
        [c(1, 2, 1, 2), -c(0, 2, 1, 2), c(0, 1, 1, 2)],
        [-c(1, 2, 0, 2), c(0, 2, 0, 2), -c(0, 1, 0, 2)],
        [c(1, 2, 0, 1), -c(0, 2, 0, 1), c(0, 1, 0, 1)],
    ]
}

/// `g_ij = <O_i, O_j>`, `N` the normalized triple product of the tangents,
/// `h_ij = <O_ij, N>`.
pub fn fundamental_forms(jet: &SurfaceJet) -> Result<FundamentalForms, OracleError> {
    let [a, b, c] = jet.d1;
    let n = triple_cross(a, b, c);
    let nn = inner(n, n);
    let lengths = a.euclid_norm() * b.euclid_norm() * c.euclid_norm();
    let norm = nn.abs().sqrt();
    if !(norm > 1e-10 * lengths) || lengths == 0.0 {
        return Err(OracleError::DegenerateTangent(norm));
    }
    let normal = (1.0 / norm) * n;
    let epsilon = nn.signum();
    let mut g = [[0.0; 3]; 3];
    let mut h = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = inner(jet.d1[i], jet.d1[j]);
            h[i][j] = inner(jet.d2[i][j], normal);
        }
    }
    Ok(FundamentalForms {
        g,
        h,
        det_g: det3(&g),
        det_h: det3(&h),
        normal,
        epsilon,
        metric_scale: lengths * lengths,
    })
}

impl FundamentalForms {
    /// Flip the normal so that `epsilon <N, direction> >= 0`.
    pub fn oriented_along(mut self, direction: Vec4) -> Self {
        if self.epsilon * inner(self.normal, direction) < 0.0 {
            self.normal = -self.normal;
            for row in self.h.iter_mut() {
                for x in row.iter_mut() {
                    *x = -*x;
                }
            }
            self.det_h = -self.det_h;
        }
        self
    }

    /// `|det g|` at or below `tol` times the tangent length scale.
    pub fn is_singular(&self, tol: f64) -> bool {
        !(self.det_g.abs() > tol * self.metric_scale)
    }

    /// `S = g^-1 h`.
    pub fn shape_operator(&self) -> Result<[[f64; 3]; 3], OracleError> {
        if self.is_singular(1e-12) {
            return Err(OracleError::SingularMetric(self.det_g));
        }
        let adj = adjugate(&self.g);
        let mut s = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                s[i][j] = (0..3).map(|k| adj[i][k] * self.h[k][j]).sum::<f64>() / self.det_g;
            }
        }
        Ok(s)
    }
}

/// `K = eps det h / det g`, `H = tr(g^-1 h) / (3 eps)`.
pub fn curvatures_numeric(forms: &FundamentalForms) -> Result<CurvaturePair, OracleError> {
    let s = forms.shape_operator()?;
    let trace = s[0][0] + s[1][1] + s[2][2];
    Ok(CurvaturePair {
        k: forms.epsilon * forms.det_h / forms.det_g,
        h: trace / (3.0 * forms.epsilon),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuantityCheck {
    pub closed: f64,
    pub numeric: f64,
    pub error: f64,
    pub allowed: f64,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CompareReport {
    #[serde(rename = "K")]
    pub k: QuantityCheck,
    #[serde(rename = "H")]
    pub h: QuantityCheck,
}

impl CompareReport {
    pub fn pass(&self) -> bool {
        self.k.pass && self.h.pass
    }
}

pub fn check_quantity(closed: f64, numeric: f64, rel_tol: f64, abs_tol: f64) -> QuantityCheck {
    let error = (closed - numeric).abs();
    let allowed = abs_tol + rel_tol * closed.abs().max(numeric.abs());
    QuantityCheck {
        closed,
        numeric,
        error,
        allowed,
        pass: error <= allowed,
    }
}

/// Pass when `|a - b| <= abs_tol + rel_tol max(|a|, |b|)` for both K and H.
pub fn compare(closed: CurvaturePair, numeric: CurvaturePair, rel_tol: f64, abs_tol: f64) -> CompareReport {
    CompareReport {
        k: check_quantity(closed.k, numeric.k, rel_tol, abs_tol),
        h: check_quantity(closed.h, numeric.h, rel_tol, abs_tol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type R = Result<Vec4, String>;

    #[test]
    fn affine_map_has_no_second_partials() {
        let p = Vec4::new(1.0, -2.0, 0.5, 3.0);
        let (a, b, c) = (
            Vec4::new(0.1, 1.0, 0.0, 0.3),
            Vec4::new(0.0, 0.2, 1.0, -0.4),
            Vec4::new(0.5, 0.0, 0.1, 1.0),
        );
        let f = |s: f64, t: f64, w: f64| -> R { Ok(p + s * a + t * b + w * c) };
        let h = 1e-3;
        let jet = numeric_jet(f, 0.3, -0.7, 1.1, h).unwrap();
        // rounding floor of the half-step second difference
        let floor = 16.0 * f64::EPSILON * 4.0 / (h * h / 4.0);
        for i in 0..3 {
            for j in 0..3 {
                assert!(jet.d2[i][j].max_abs() <= floor);
            }
        }
        let forms = fundamental_forms(&jet).unwrap();
        let kh = curvatures_numeric(&forms).unwrap();
        assert!(kh.k.abs() <= 1e-8 && kh.h.abs() <= 1e-8);
    }

    #[test]
    fn coordinate_chart() {
        let f = |s: f64, t: f64, w: f64| -> R { Ok(Vec4::new(0.0, s, t, w)) };
        let jet = numeric_jet(f, 0.25, 0.5, 0.75, 1e-3).unwrap();
        assert!((jet.d1[0] - Vec4::new(0.0, 1.0, 0.0, 0.0)).max_abs() <= 1e-12);
        let forms = fundamental_forms(&jet).unwrap();
        // the timelike normal e1
        assert_eq!(forms.epsilon, -1.0);
        assert!((forms.normal[0].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pseudo_sphere_is_umbilic() {
        // <x, x> = r^2 in the spacelike slice x1 = 0 is a round 3-sphere
        let r = 2.0;
        let f = |s: f64, t: f64, w: f64| -> R {
            Ok(r * Vec4::new(0.0, s.sin() * t.cos(), s.sin() * t.sin(), s.cos()) + Vec4::new(w, 0.0, 0.0, 0.0))
        };
        // the cylinder over a 2-sphere along the timelike axis
        let jet = numeric_jet(f, 1.0, 0.4, 0.2, 1e-3).unwrap();
        let forms = fundamental_forms(&jet).unwrap();
        let forms = forms.oriented_along(jet.point - Vec4::new(0.2, 0.0, 0.0, 0.0));
        let kh = curvatures_numeric(&forms).unwrap();
        assert_eq!(forms.epsilon, 1.0);
        assert!(kh.k.abs() < 1e-6);
        // principal curvatures -1/r, -1/r, 0 with this orientation
        assert!((kh.h + 2.0 / (3.0 * r)).abs() < 1e-6, "{kh:?}");
    }

    #[test]
    fn degenerate_tangents() {
        let f = |s: f64, t: f64, _w: f64| -> R { Ok(Vec4::new(0.0, s, t, 0.0)) };
        let jet = numeric_jet(f, 0.0, 0.0, 0.0, 1e-3).unwrap();
        assert!(matches!(fundamental_forms(&jet), Err(OracleError::DegenerateTangent(_))));
    }

    #[test]
    fn evaluator_errors_propagate() {
        let f = |s: f64, _t: f64, _w: f64| -> R {
            if s > 0.0 {
                Err("outside".into())
            } else {
                Ok(Vec4::ZERO)
            }
        };
        assert!(matches!(
            numeric_jet(f, 0.0, 0.0, 0.0, 1e-3),
            Err(OracleError::Evaluation { .. })
        ));
    }

    #[test]
    fn orientation_flip_negates_second_form() {
        let f = |s: f64, t: f64, w: f64| -> R {
            Ok(Vec4::new(0.0, s, t, w) + Vec4::new(0.0, 0.0, 0.0, s * s + t * w))
        };
        let jet = numeric_jet(f, 0.1, 0.2, 0.3, 1e-3).unwrap();
        let forms = fundamental_forms(&jet).unwrap();
        let flipped = forms.oriented_along(-forms.normal);
        assert_eq!(flipped.normal, -forms.normal);
        assert_eq!(flipped.det_h, -forms.det_h);
        let (a, b) = (curvatures_numeric(&forms).unwrap(), curvatures_numeric(&flipped).unwrap());
        assert!((a.k + b.k).abs() < 1e-12 && (a.h + b.h).abs() < 1e-12);
    }

    #[test]
    fn adjugate_inverts() {
        let m = [[2.0, 1.0, 0.5], [1.0, -3.0, 0.25], [0.5, 0.25, 1.5]];
        let adj = adjugate(&m);
        let d = det3(&m);
        for i in 0..3 {
            for j in 0..3 {
                let p: f64 = (0..3).map(|k| m[i][k] * adj[k][j]).sum::<f64>() / d;
                assert!((p - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn compare_examples() {
        let pair = |k, h| CurvaturePair { k, h };
        assert!(compare(pair(1.0, 2.0), pair(1.00005, 2.0001), 1e-3, 1e-6).pass());
        assert!(compare(pair(0.0, 0.0), pair(1e-7, 0.0), 1e-4, 1e-6).pass());
        let r = compare(pair(1.0, 1.0), pair(1.1, 1.0), 1e-3, 1e-6);
        assert!(!r.k.pass && r.h.pass);
    }
}
