//! Closed-form Gaussian and mean curvature formulas and the conditions derived
//! from them.
//!
//! Inputs are the first curvature `k1`, the radius jet `(r, r', r'')` and
//! the shape values `f`, `g` at a point. On the `-1` branch every formula
//! holds with `k1` replaced by `-k1`.

use super::{CanalError, CanalFamily, Variant};
use crate::curves::CurveClass;
use crate::oracle::CurvaturePair;

/// Relative cancellation below which a denominator counts as zero.
pub const SINGULAR_TOL: f64 = 1e-10;

fn ratio(num: f64, den: f64, scale: f64, what: &'static str) -> Result<f64, CanalError> {
    if den.abs() > SINGULAR_TOL * scale && den.is_finite() {
        Ok(num / den)
    } else {
        Err(CanalError::Singular(what))
    }
}

#[derive(Clone, Copy)]
struct Terms {
    k: f64,
    r: f64,
    rp: f64,
    rpp: f64,
    q: f64,
    sq: f64,
    d: f64,
}

fn terms(variant: Variant, k: f64, [r, rp, rpp]: [f64; 3]) -> Terms {
    let (q, d) = match variant {
        Variant::C4 => (rp * rp - 1.0, -1.0 + rp * rp + r * rpp),
        Variant::C5 => (1.0 + rp * rp, 1.0 + rp * rp + r * rpp),
        _ => (1.0 - rp * rp, 1.0 - rp * rp - r * rpp),
    };
    Terms {
        k,
        r,
        rp,
        rpp,
        q,
        sq: q.max(0.0).sqrt(),
        d,
    }
}

/// The trigonometric or hyperbolic factor of `f` the variant's formulas use.
fn trig(class: CurveClass, variant: Variant, f: f64) -> f64 {
    use Variant::*;
    match (class, variant) {
        (_, C1 | T1) => f.sin(),
        (_, C2 | T2) => f.cos(),
        (CurveClass::PseudoNull, C3 | T3) => f.sinh(),
        (CurveClass::PseudoNull, C4 | C5 | T4) => f.cosh(),
        (_, C3 | T3) => f.cosh(),
        _ => f.sinh(),
    }
}

/// Factor whose square divides `det g`, as `(value, scale)`; the metric
/// degenerates where it vanishes.
pub fn metric_factor(family: CanalFamily, f: f64) -> (f64, f64) {
    use Variant::*;
    let pseudo = family.curve_class == CurveClass::PseudoNull;
    match family.variant {
        C1 | T1 if pseudo => (f.sin(), 1.0),
        C2 | T2 if pseudo => (f.cos(), 1.0),
        C1 | T1 => (f.cos(), 1.0),
        C2 | T2 => (f.sin(), 1.0),
        C3 | T3 => (f.sinh(), f.cosh()),
        _ => (f.cosh(), f.cosh()),
    }
}

// numerator and denominator of K, with the denominator's term scale
fn k_parts(class: CurveClass, variant: Variant, t: Terms, x: f64, g: f64) -> (f64, f64, f64) {
    let Terms { k, r, rp, rpp, q, sq, d } = t;
    let (a, rr) = (r * sq * k * x, r * r);
    match class {
        CurveClass::PseudoNull => {
            let b = 2.0 * d * g;
            let (num, sign) = match variant {
                Variant::C1 => (
                    -r * q * k * k * x * x + 4.0 * rpp * d * g * g
                        + 2.0 * sq * (1.0 - rp * rp - 2.0 * r * rpp) * k * g * x,
                    -1.0,
                ),
                Variant::C2 => (
                    r * q * k * k * x * x - 4.0 * rpp * d * g * g
                        - 2.0 * sq * (1.0 - rp * rp - 2.0 * r * rpp) * k * g * x,
                    -1.0,
                ),
                Variant::C3 => (
                    -r * q * k * k * x * x + 4.0 * rpp * d * g * g
                        - 2.0 * sq * (1.0 - rp * rp - 2.0 * r * rpp) * k * g * x,
                    1.0,
                ),
                Variant::C4 => (
                    -r * q * k * k * x * x - 4.0 * rpp * d * g * g
                        + 2.0 * sq * (-1.0 + rp * rp + 2.0 * r * rpp) * k * g * x,
                    -1.0,
                ),
                _ => (
                    r * q * k * k * x * x + 4.0 * rpp * d * g * g
                        + 2.0 * sq * (1.0 + rp * rp + 2.0 * r * rpp) * k * g * x,
                    1.0,
                ),
            };
            let den = a + sign * b;
            (num, rr * den * den, rr * (a.abs() + b.abs()).powi(2))
        }
        _ => {
            let (num, sign) = match variant {
                Variant::C1 | Variant::C3 => (
                    -r * q * k * k * x * x + rpp * d + sq * (1.0 - rp * rp - 2.0 * r * rpp) * k * x,
                    -1.0,
                ),
                Variant::C2 => (
                    r * q * k * k * x * x - rpp * d - sq * (1.0 - rp * rp - 2.0 * r * rpp) * k * x,
                    -1.0,
                ),
                Variant::C4 => (
                    -(r * q * k * k * x * x
                        + rpp * d
                        + sq * (-1.0 + rp * rp + 2.0 * r * rpp) * k * x),
                    1.0,
                ),
                _ => (
                    r * q * k * k * x * x + rpp * d - sq * (1.0 + rp * rp + 2.0 * r * rpp) * k * x,
                    -1.0,
                ),
            };
            let den = d + sign * a;
            (num, rr * den * den, rr * (a.abs() + d.abs()).powi(2))
        }
    }
}

// numerator and denominator of H, with the denominator's term scale
fn h_parts(class: CurveClass, variant: Variant, t: Terms, x: f64, g: f64) -> (f64, f64, f64) {
    let Terms { k, r, rp, rpp, q, sq, d } = t;
    let a2 = r * r * q * k * k * x * x;
    let q32 = q * sq;
    match class {
        CurveClass::PseudoNull => {
            let b2 = 4.0 * d * d * g * g;
            let lin = 2.0 * r * q32 * k * g * x;
            let (num, den) = match variant {
                Variant::C1 => (
                    lin + 3.0 * a2 - 4.0 * d * (2.0 - 2.0 * rp * rp - 3.0 * r * rpp) * g * g,
                    3.0 * r * (b2 - a2),
                ),
                Variant::C2 => (
                    -lin - 3.0 * a2 + 4.0 * d * (2.0 - 2.0 * rp * rp - 3.0 * r * rpp) * g * g,
                    3.0 * r * (b2 - a2),
                ),
                Variant::C3 => (
                    -lin + 3.0 * a2 - 4.0 * d * (2.0 - 2.0 * rp * rp - 3.0 * r * rpp) * g * g,
                    3.0 * r * (b2 - a2),
                ),
                Variant::C4 => (
                    -lin - 3.0 * a2 + 4.0 * d * (-2.0 + 2.0 * rp * rp + 3.0 * r * rpp) * g * g,
                    3.0 * r * (a2 - b2),
                ),
                _ => (
                    -lin + 3.0 * a2 - 4.0 * d * (2.0 + 2.0 * rp * rp + 3.0 * r * rpp) * g * g,
                    3.0 * r * (a2 - b2),
                ),
            };
            (num, den, 3.0 * r.abs() * (a2 + b2))
        }
        _ => {
            let d2 = d * d;
            let lin = r * q32 * k * x;
            let (num, den) = match variant {
                Variant::C1 | Variant::C3 => (
                    lin + 3.0 * a2 - d * (2.0 - 2.0 * rp * rp - 3.0 * r * rpp),
                    3.0 * r * (d2 - a2),
                ),
                Variant::C2 => (
                    -lin - 3.0 * a2 + d * (2.0 - 2.0 * rp * rp - 3.0 * r * rpp),
                    3.0 * r * (d2 - a2),
                ),
                Variant::C4 => (
                    lin - 3.0 * a2 + d * (-2.0 + 2.0 * rp * rp + 3.0 * r * rpp),
                    3.0 * r * (a2 - d2),
                ),
                _ => (
                    lin + 3.0 * a2 - d * (2.0 + 2.0 * rp * rp + 3.0 * r * rpp),
                    3.0 * r * (a2 - d2),
                ),
            };
            (num, den, 3.0 * r.abs() * (a2 + d2))
        }
    }
}

fn tubular(class: CurveClass, variant: Variant, k: f64, r: f64, f: f64, g: f64) -> Result<CurvaturePair, CanalError> {
    let x = trig(class, variant, f);
    // the closed forms divide by x through csc, sec, csch or sech
    let inv = ratio(1.0, x, 1.0, "reciprocal trigonometric factor")?;
    let rk = r * k;
    let rr = r * r;
    let pair = match class {
        CurveClass::PseudoNull => {
            // K = sk k / (r^2 (sa 2 g inv + sb r k)), H = 1 / (sh r + 2 r g / (sh 4 g + sc 3 r k x))
            let (sk, sa, sb, sh, sc) = match variant {
                Variant::T1 => (1.0, 1.0, -1.0, -1.0, 1.0),
                Variant::T2 => (1.0, -1.0, 1.0, 1.0, -1.0),
                Variant::T3 => (-1.0, 1.0, 1.0, -1.0, -1.0),
                _ => (1.0, 1.0, 1.0, 1.0, 1.0),
            };
            let kd = sa * 2.0 * g * inv + sb * rk;
            let k_val = ratio(sk * k, rr * kd, rr * (2.0 * (g * inv).abs() + rk.abs()), "K denominator")?;
            let inner = sh * 4.0 * g + sc * 3.0 * rk * x;
            let frac = ratio(2.0 * r * g, inner, 4.0 * g.abs() + 3.0 * (rk * x).abs(), "H inner denominator")?;
            let hd = sh * r + frac;
            let h_val = ratio(1.0, hd, r.abs() + frac.abs(), "H denominator")?;
            CurvaturePair { k: k_val, h: h_val }
        }
        _ => {
            // K = s k / (r^2 (inv - r k)), H = s / (-r + r / (-2 + 3 r k x))
            let s = match variant {
                Variant::T1 | Variant::T3 => 1.0,
                _ => -1.0,
            };
            let kd = inv - rk;
            let k_val = ratio(s * k, rr * kd, rr * (inv.abs() + rk.abs()), "K denominator")?;
            let inner = -2.0 + 3.0 * rk * x;
            let frac = ratio(r, inner, 2.0 + 3.0 * (rk * x).abs(), "H inner denominator")?;
            let hd = -r + frac;
            let h_val = ratio(s, hd, r.abs() + frac.abs(), "H denominator")?;
            CurvaturePair { k: k_val, h: h_val }
        }
    };
    Ok(pair)
}

/// Closed-form `(K, H)` of a pseudo null or partially null canal or tubular
/// hypersurface.
///
/// `r` is `(r, r', r'')`; tubular variants use only `r[0]`.
pub fn curvature_closed(family: CanalFamily, k1: f64, r: [f64; 3], f: f64, g: f64) -> Result<CurvaturePair, CanalError> {
    if !family.has_closed_form() {
        return Err(CanalError::Unsupported(format!(
            "no closed-form curvature for {}",
            family.variant.name()
        )));
    }
    let k = family.branch as f64 * k1;
    let class = family.curve_class;
    if family.variant.is_tubular() {
        return tubular(class, family.variant, k, r[0], f, g);
    }
    let t = terms(family.variant, k, r);
    let x = trig(class, family.variant, f);
    let (kn, kd, ks) = k_parts(class, family.variant, t, x, g);
    let (hn, hd, hs) = h_parts(class, family.variant, t, x, g);
    Ok(CurvaturePair {
        k: ratio(kn, kd, ks, "K denominator")?,
        h: ratio(hn, hd, hs, "H denominator")?,
    })
}

/// `3H - r^2 K + 2/r` for C1, C3, C4, T1, T3 and `3H - r^2 K - 2/r` for C2,
/// C5, T2, T4.
pub fn relation_residual(pair: CurvaturePair, r: f64, family: CanalFamily) -> Result<f64, CanalError> {
    use Variant::*;
    let sign = match family.variant {
        C1 | C3 | C4 | T1 | T3 => 1.0,
        C2 | C5 | T2 | T4 => -1.0,
        _ => {
            return Err(CanalError::Unsupported(format!(
                "no curvature relation for {}",
                family.variant.name()
            )))
        }
    };
    Ok(3.0 * pair.h - r * r * pair.k + sign * 2.0 / r)
}

/// Which hypothesis on the shape functions a flat or minimal condition
/// assumes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeRelation {
    General,
    /// `g(t, w) = sin f(t, w)`
    GEqualsSinF,
}

fn check_supported(family: CanalFamily) -> Result<(), CanalError> {
    let ok = matches!(
        (family.curve_class, family.variant),
        (CurveClass::PseudoNull, Variant::C1) | (CurveClass::PartiallyNull, Variant::C5)
    );
    if ok {
        Ok(())
    } else {
        Err(CanalError::Unsupported(format!(
            "flat and minimal conditions are stated for pseudo null C1 and partially null C5, not {} {}",
            family.curve_class.name(),
            family.variant.name()
        )))
    }
}

fn sin_relation(family: CanalFamily, relation: ShapeRelation, f: f64, g: f64) -> Result<bool, CanalError> {
    match relation {
        ShapeRelation::General => Ok(false),
        ShapeRelation::GEqualsSinF => {
            if family.curve_class != CurveClass::PseudoNull {
                return Err(CanalError::Unsupported(
                    "the g = sin f conditions apply to pseudo null C1 only".into(),
                ));
            }
            if (g - f.sin()).abs() > 1e-9 * (1.0 + g.abs()) {
                return Err(CanalError::ShapeRelation { f, g });
            }
            Ok(true)
        }
    }
}

/// Left side of the flatness condition.
///
/// Straight center line (`k1 = 0`): `r''`. Pseudo null C1 with `g = sin f`:
/// `2(1-r'^2)(sqrt(1-r'^2) + 2r'') - r(1 - r'^2 + 4r''(sqrt(1-r'^2) + r''))`
/// at `k1 = 1`. Otherwise the numerator of `K`.
pub fn flat_residual(
    family: CanalFamily,
    r: [f64; 3],
    k1: f64,
    f: f64,
    g: f64,
    relation: ShapeRelation,
) -> Result<f64, CanalError> {
    check_supported(family)?;
    let sin_case = sin_relation(family, relation, f, g)?;
    if k1 == 0.0 {
        return Ok(r[2]);
    }
    let t = terms(family.variant, family.branch as f64 * k1, r);
    if sin_case {
        let Terms { k, r, rp, rpp, q, sq, d } = t;
        // numerator of K divided by sin^2 f
        return Ok(-r * q * k * k + 4.0 * rpp * d + 2.0 * sq * (1.0 - rp * rp - 2.0 * r * rpp) * k);
    }
    let x = trig(family.curve_class, family.variant, f);
    Ok(k_parts(family.curve_class, family.variant, t, x, g).0)
}

/// Left side of the minimality condition.
///
/// Straight center line: `2 - 2r'^2 - 3rr''` (pseudo null C1) or
/// `2 + 2r'^2 + 3rr''` (partially null C5). Pseudo null C1 with `g = sin f`:
/// `8(1-r'^2)^2 - 2r(1-r'^2)(sqrt(1-r'^2) + 10r'') - 3r^2(1 - r'^2 - 4r''^2)`
/// at `k1 = 1`. Otherwise the numerator of `H`.
pub fn minimal_residual(
    family: CanalFamily,
    r: [f64; 3],
    k1: f64,
    f: f64,
    g: f64,
    relation: ShapeRelation,
) -> Result<f64, CanalError> {
    check_supported(family)?;
    let sin_case = sin_relation(family, relation, f, g)?;
    let [r0, rp, rpp] = r;
    if k1 == 0.0 {
        return Ok(match family.curve_class {
            CurveClass::PseudoNull => 2.0 - 2.0 * rp * rp - 3.0 * r0 * rpp,
            _ => 2.0 + 2.0 * rp * rp + 3.0 * r0 * rpp,
        });
    }
    let t = terms(family.variant, family.branch as f64 * k1, r);
    if sin_case {
        let Terms { k, r, rpp, q, sq, d, .. } = t;
        // minus the numerator of H divided by sin^2 f
        let hn = 2.0 * r * q * sq * k + 3.0 * r * r * q * k * k - 4.0 * d * (2.0 * q - 3.0 * r * rpp);
        return Ok(-hn);
    }
    let x = trig(family.curve_class, family.variant, f);
    Ok(h_parts(family.curve_class, family.variant, t, x, g).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn fam(class: CurveClass, v: Variant) -> CanalFamily {
        CanalFamily::new(class, v, 1).unwrap()
    }

    #[test]
    fn reference_example_pseudo_null_c1() {
        // k1 = 1, r = s/2, g = t, f = w at (1, 1, pi/2)
        let kh = curvature_closed(
            fam(CurveClass::PseudoNull, Variant::C1),
            1.0,
            [0.5, 0.5, 0.0],
            FRAC_PI_2,
            1.0,
        )
        .unwrap();
        assert!((kh.k - 3.246620).abs() < 1e-6, "{kh:?}");
        assert!((kh.h + 1.062782).abs() < 1e-6, "{kh:?}");
    }

    #[test]
    fn reference_example_partially_null_c5() {
        // k1 = 2, r = s/2 at s = 1, f = w = 0
        let kh = curvature_closed(
            fam(CurveClass::PartiallyNull, Variant::C5),
            2.0,
            [0.5, 0.5, 0.0],
            0.0,
            1.0,
        )
        .unwrap();
        assert!(kh.k.abs() < 1e-15);
        assert!((kh.h - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn tubular_straight_line() {
        let kh = curvature_closed(fam(CurveClass::PseudoNull, Variant::T1), 0.0, [1.0, 0.0, 0.0], 0.7, 0.3).unwrap();
        assert_eq!(kh.k, 0.0);
        assert!((kh.h + 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn tubular_constants_with_sine_shape() {
        for r in [0.5, 1.0, 1.5] {
            for f in [0.3, 1.0, 2.5] {
                let kh = curvature_closed(fam(CurveClass::PseudoNull, Variant::T1), 1.0, [r, 0.0, 0.0], f, f.sin()).unwrap();
                assert!((kh.k - 1.0 / (r * r * (2.0 - r))).abs() < 1e-12);
                assert!((kh.h - (3.0 * r - 4.0) / (3.0 * r * (2.0 - r))).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tubular_agrees_with_canal_at_constant_radius() {
        use Variant::*;
        for class in [CurveClass::PseudoNull, CurveClass::PartiallyNull] {
            for (c, t) in [(C1, T1), (C2, T2), (C3, T3), (C5, T4)] {
                for branch in [1, -1] {
                    let cf = CanalFamily::new(class, c, branch).unwrap();
                    let tf = CanalFamily::new(class, t, branch).unwrap();
                    let (k1, r, f, g) = (1.3, 0.4, 0.9, 0.6);
                    let a = curvature_closed(cf, k1, [r, 0.0, 0.0], f, g).unwrap();
                    let b = curvature_closed(tf, k1, [r, 0.0, 0.0], f, g).unwrap();
                    assert!((a.k - b.k).abs() < 1e-12 * (1.0 + a.k.abs()), "{class:?} {c:?}");
                    assert!((a.h - b.h).abs() < 1e-12 * (1.0 + a.h.abs()), "{class:?} {c:?}");
                }
            }
        }
    }

    #[test]
    fn relation_examples() {
        let c1 = fam(CurveClass::PseudoNull, Variant::C1);
        let kh = curvature_closed(c1, 1.0, [0.5, 0.5, 0.0], FRAC_PI_2, 1.0).unwrap();
        assert!(relation_residual(kh, 0.5, c1).unwrap().abs() < 1e-9);
        let c5 = fam(CurveClass::PartiallyNull, Variant::C5);
        let pair = CurvaturePair { k: 0.0, h: 4.0 / 3.0 };
        assert!(relation_residual(pair, 0.5, c5).unwrap().abs() < 1e-15);
        let zero = CurvaturePair { k: 0.0, h: 0.0 };
        assert_eq!(relation_residual(zero, 1.0, c1).unwrap(), 2.0);
        let null = fam(CurveClass::Null, Variant::NullC1);
        assert!(matches!(relation_residual(zero, 1.0, null), Err(CanalError::Unsupported(_))));
    }

    #[test]
    fn relations_hold_for_all_variants() {
        use Variant::*;
        for class in [CurveClass::PseudoNull, CurveClass::PartiallyNull] {
            for v in [C1, C2, C3, C4, C5, T1, T2, T3, T4] {
                for branch in [1, -1] {
                    let family = CanalFamily::new(class, v, branch).unwrap();
                    let r = if v == C4 { [1.2, 1.5, 0.3] } else if v.is_tubular() { [0.7, 0.0, 0.0] } else { [0.7, 0.4, -0.2] };
                    for (f, g) in [(0.4, 0.8), (1.3, -0.5), (2.0, 1.7)] {
                        let kh = curvature_closed(family, 1.1, r, f, g).unwrap();
                        let res = relation_residual(kh, r[0], family).unwrap();
                        assert!(res.abs() < 1e-9 * (1.0 + kh.k.abs() + kh.h.abs()), "{class:?} {v:?} {branch}: {res}");
                    }
                }
            }
        }
    }

    #[test]
    fn null_families_have_no_closed_form() {
        let f = fam(CurveClass::Null, Variant::NullC1);
        assert!(matches!(curvature_closed(f, 1.0, [1.0, 0.0, 0.0], 0.0, 1.0), Err(CanalError::Unsupported(_))));
    }

    #[test]
    fn singular_denominator_reported() {
        // r sqrt(1-r'^2) k1 sin f = 2 D g
        let c1 = fam(CurveClass::PseudoNull, Variant::C1);
        let (r, f) = (1.0, FRAC_PI_2);
        let g = r / 2.0;
        assert!(matches!(
            curvature_closed(c1, 1.0, [r, 0.0, 0.0], f, g),
            Err(CanalError::Singular(_))
        ));
        let t1 = fam(CurveClass::PseudoNull, Variant::T1);
        assert!(matches!(
            curvature_closed(t1, 1.0, [r, 0.0, 0.0], PI, 0.5),
            Err(CanalError::Singular(_))
        ));
    }

    #[test]
    fn flat_examples() {
        let c1 = fam(CurveClass::PseudoNull, Variant::C1);
        // r = 2s + 1
        assert_eq!(flat_residual(c1, [3.0, 2.0, 0.0], 0.0, 0.5, 1.0, ShapeRelation::General).unwrap(), 0.0);
        // r = s^2 at s = 1
        assert_eq!(flat_residual(c1, [1.0, 2.0, 2.0], 0.0, 0.5, 1.0, ShapeRelation::General).unwrap(), 2.0);
        // constant r0 with g = sin f: 2 - r0
        let f = 0.8;
        for r0 in [0.3, 1.0, 1.7] {
            let v = flat_residual(c1, [r0, 0.0, 0.0], 1.0, f, f.sin(), ShapeRelation::GEqualsSinF).unwrap();
            assert!((v - (2.0 - r0)).abs() < 1e-14);
        }
        assert!(matches!(
            flat_residual(c1, [1.0, 0.0, 0.0], 1.0, 0.8, 0.2, ShapeRelation::GEqualsSinF),
            Err(CanalError::ShapeRelation { .. })
        ));
        let c2 = fam(CurveClass::PseudoNull, Variant::C2);
        assert!(matches!(
            flat_residual(c2, [1.0, 0.0, 0.0], 0.0, 0.8, 0.2, ShapeRelation::General),
            Err(CanalError::Unsupported(_))
        ));
    }

    #[test]
    fn flat_sine_case_matches_reference_polynomial() {
        let c1 = fam(CurveClass::PseudoNull, Variant::C1);
        let (r, rp, rpp) = (0.8, 0.3, -0.4);
        let q: f64 = 1.0 - rp * rp;
        let reference = 2.0 * q * (q.sqrt() + 2.0 * rpp) - r * (q + 4.0 * rpp * (q.sqrt() + rpp));
        let f = 1.1;
        let v = flat_residual(c1, [r, rp, rpp], 1.0, f, f.sin(), ShapeRelation::GEqualsSinF).unwrap();
        assert!((v - reference).abs() < 1e-14);
        // and it is the general numerator divided by sin^2 f
        let n = flat_residual(c1, [r, rp, rpp], 1.0, f, f.sin(), ShapeRelation::General).unwrap();
        assert!((n / f.sin().powi(2) - reference).abs() < 1e-13);
    }

    #[test]
    fn minimal_examples() {
        let c1 = fam(CurveClass::PseudoNull, Variant::C1);
        let c5 = fam(CurveClass::PartiallyNull, Variant::C5);
        assert_eq!(minimal_residual(c1, [1.0, 0.0, 0.0], 0.0, 0.1, 1.0, ShapeRelation::General).unwrap(), 2.0);
        assert_eq!(minimal_residual(c5, [1.0, 0.0, 0.0], 0.0, 0.1, 1.0, ShapeRelation::General).unwrap(), 2.0);
        // first integral r'^2 = 1 - (a/r)^(4/3) with a = 1 differentiates to
        // r'' = (2/3) a^(4/3) r^(-7/3)
        let (a, r): (f64, f64) = (1.0, 1.7);
        let rp = (1.0 - (a / r).powf(4.0 / 3.0)).sqrt();
        let rpp = 2.0 / 3.0 * a.powf(4.0 / 3.0) * r.powf(-7.0 / 3.0);
        assert!(minimal_residual(c1, [r, rp, rpp], 0.0, 0.1, 1.0, ShapeRelation::General).unwrap().abs() < 1e-12);
        // r'^2 = (a/r)^(4/3) - 1 for the hyperbolic case
        let r: f64 = 0.6;
        let rp = ((a / r).powf(4.0 / 3.0) - 1.0).sqrt();
        let rpp = -2.0 / 3.0 * a.powf(4.0 / 3.0) * r.powf(-7.0 / 3.0);
        assert!(minimal_residual(c5, [r, rp, rpp], 0.0, 0.1, 1.0, ShapeRelation::General).unwrap().abs() < 1e-12);
    }

    #[test]
    fn minimal_sine_case_matches_reference_polynomial() {
        let c1 = fam(CurveClass::PseudoNull, Variant::C1);
        let (r, rp, rpp) = (0.8, 0.3, -0.4);
        let q: f64 = 1.0 - rp * rp;
        let reference = 8.0 * q * q - 2.0 * r * q * (q.sqrt() + 10.0 * rpp) - 3.0 * r * r * (q - 4.0 * rpp * rpp);
        let f = 1.1;
        let v = minimal_residual(c1, [r, rp, rpp], 1.0, f, f.sin(), ShapeRelation::GEqualsSinF).unwrap();
        assert!((v - reference).abs() < 1e-13);
        let n = minimal_residual(c1, [r, rp, rpp], 1.0, f, f.sin(), ShapeRelation::General).unwrap();
        assert!((n / f.sin().powi(2) + reference).abs() < 1e-12);
    }
}
