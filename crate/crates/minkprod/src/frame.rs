//! Canonical position of a segment: `omega * K(1 + i a_lo, 1 + i a_hi)`
//! where `omega` is the point of the segment's line closest to 0.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geom::{c, cross, CScalar, Segment, EPS};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalSegment {
    pub omega: CScalar,
    pub a_lo: f64,
    pub a_hi: f64,
}

impl CanonicalSegment {
    /// The two endpoints `omega (1 + i a_lo)` and `omega (1 + i a_hi)`.
    pub fn endpoints(&self) -> (CScalar, CScalar) {
        (self.omega * c(1.0, self.a_lo), self.omega * c(1.0, self.a_hi))
    }

    pub fn segment(&self) -> Segment {
        let (p, q) = self.endpoints();
        Segment::new(p, q)
    }
}

pub fn canonicalize_segment(s: &Segment) -> Result<CanonicalSegment> {
    let (a1, a2) = (s.p, s.q);
    if s.is_degenerate() {
        return Err(Error::InvalidInput("zero-length segment has no canonical frame".into()));
    }
    if s.collinear_with_origin(EPS) {
        return Err(Error::DegenerateFrame("segment lies on a line through 0".into()));
    }
    let omega = (a1 * a2.conj() - a2 * a1.conj()) / ((a2.conj() - a1.conj()) * 2.0);
    let lo = (a1 / omega).im;
    let hi = (a2 / omega).im;
    let (a_lo, a_hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    Ok(CanonicalSegment { omega, a_lo, a_hi })
}

/// Rotations that move two points of a cone onto the line `Re(z) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportRotation {
    /// Maps `C` and `P` onto `Re(z) = 1`.
    pub xi1: CScalar,
    /// Maps `D` and `P` onto `Re(z) = 1`.
    pub xi2: CScalar,
    pub theta1: f64,
    pub theta2: f64,
}

/// For `C = 1 + i tan(tc)`, `D = 1 + i tan(td)` and `P = r e^{i tp}` with
/// `tc < tp < td`, returns the multipliers that put `{C, P}` and `{D, P}` in
/// canonical position.
///
/// `e^{i theta1} = -i (P - C) / |P - C|` and
/// `xi1 = cos(tc) / cos(tc - theta1) e^{-i theta1}`. The second pair comes
/// from the same construction applied to `conj(D)`, `conj(P)`, which gives
/// `e^{i theta2} = i (P - D) / |P - D|` and
/// `xi2 = cos(td) / cos(td - theta2) e^{-i theta2}`.
///
/// ```
/// use minkprod::frame::rotate_support;
/// use minkprod::geom::c;
/// let r = rotate_support(c(1.0, -1.0), c(1.0, 1.0), c(0.5, 0.0)).unwrap();
/// assert!(r.theta2 <= 0.0 && 0.0 <= r.theta1);
/// assert!(((r.xi1 * c(1.0, -1.0)).re - 1.0).abs() < 1e-12);
/// ```
pub fn rotate_support(cc: CScalar, d: CScalar, p: CScalar) -> Result<SupportRotation> {
    if (cc.re - 1.0).abs() > EPS || (d.re - 1.0).abs() > EPS {
        return Err(Error::InvalidInput("C and D must lie on Re(z) = 1".into()));
    }
    if p.norm() == 0.0 {
        return Err(Error::InvalidInput("P must be nonzero".into()));
    }
    let (tc, td, tp) = (cc.im.atan(), d.im.atan(), p.arg());
    if !(tc < tp && tp < td) {
        return Err(Error::InvalidInput("need arg C < arg P < arg D".into()));
    }
    let scale = |u: CScalar, w: CScalar| (u.norm() * w.norm()).max(1.0);
    if cross(cc, p).abs() <= EPS * scale(cc, p) || cross(d, p).abs() <= EPS * scale(d, p) {
        return Err(Error::DegenerateFrame("P is collinear with C or D through 0".into()));
    }
    let minus_i = Complex64::new(0.0, -1.0);
    let theta1 = (minus_i * (p - cc)).arg();
    let theta2 = (Complex64::i() * (p - d)).arg();
    let cos_ratio = |t: f64, th: f64| {
        let den = (t - th).cos();
        if den.abs() <= EPS {
            Err(Error::DegenerateFrame("rotation angle reaches pi/2".into()))
        } else {
            Ok(t.cos() / den)
        }
    };
    let xi1 = Complex64::from_polar(cos_ratio(tc, theta1)?, -theta1);
    let xi2 = Complex64::from_polar(cos_ratio(td, theta2)?, -theta2);
    Ok(SupportRotation { xi1, xi2, theta1, theta2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn canonical_examples() {
        let f = canonicalize_segment(&Segment::new(c(0.0, 1.0), c(1.0, 1.0))).unwrap();
        assert!((f.omega - c(0.0, 1.0)).norm() < 1e-12);
        assert!((f.a_lo + 1.0).abs() < 1e-12 && f.a_hi.abs() < 1e-12);

        let f = canonicalize_segment(&Segment::new(c(1.0, -1.0), c(1.0, 1.0))).unwrap();
        assert!((f.omega - c(1.0, 0.0)).norm() < 1e-12);
        assert_eq!((f.a_lo, f.a_hi), (-1.0, 1.0));

        let e = canonicalize_segment(&Segment::new(c(1.0, 0.0), c(2.0, 0.0)));
        assert!(matches!(e, Err(Error::DegenerateFrame(_))));
        let e = canonicalize_segment(&Segment::new(c(1.0, 1.0), c(1.0, 1.0)));
        assert!(matches!(e, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn support_rotation_examples() {
        let r = rotate_support(c(1.0, 0.0), c(1.0, 1.0), crate::geom::cis(PI / 8.0)).unwrap();
        assert!(((r.xi1 * c(1.0, 0.0)).re - 1.0).abs() < 1e-9);
        assert!(((r.xi1 * crate::geom::cis(PI / 8.0)).re - 1.0).abs() < 1e-9);

        // -i (P - C) = -i * i = 1, so the rotation angle is 0 and xi1 = 1.
        let r = rotate_support(c(1.0, -1.0), c(1.0, 1.0), c(1.0, 0.0)).unwrap();
        assert!(r.theta1.abs() < 1e-12);
        assert!((r.xi1 - c(1.0, 0.0)).norm() < 1e-12);

        let r = rotate_support(c(1.0, -1.0), c(1.0, 1.0), c(0.5, 0.0)).unwrap();
        assert!(r.theta2 <= 0.0 && 0.0 <= r.theta1);
    }

    fn seg() -> impl Strategy<Value = Segment> {
        (-4.0..4.0f64, -4.0..4.0f64, -4.0..4.0f64, -4.0..4.0f64)
            .prop_map(|(a, b, x, y)| Segment::new(c(a, b), c(x, y)))
            .prop_filter("generic", |s| s.length() > 1e-2 && cross(s.p, s.q).abs() > 1e-2)
    }

    proptest! {
        #[test]
        fn reconstructs_endpoints(s in seg()) {
            let f = canonicalize_segment(&s).unwrap();
            let (p, q) = f.endpoints();
            let fwd = (p - s.p).norm().max((q - s.q).norm());
            let rev = (p - s.q).norm().max((q - s.p).norm());
            prop_assert!(fwd.min(rev) < 1e-9);
        }

        #[test]
        fn omega_is_closest_point_of_line(s in seg()) {
            let f = canonicalize_segment(&s).unwrap();
            let d = s.q - s.p;
            let best = (-20000..=20000)
                .map(|k| (s.p + d * (k as f64 / 100.0)).norm())
                .fold(f64::INFINITY, f64::min);
            prop_assert!(f.omega.norm() <= best + 1e-12);
            // On the line, and perpendicular to it.
            prop_assert!(cross(d, f.omega - s.p).abs() < 1e-9 * d.norm() * (1.0 + s.p.norm()));
            prop_assert!(crate::geom::dot(d, f.omega).abs() < 1e-9 * d.norm() * (1.0 + f.omega.norm()));
        }

        #[test]
        fn rotations_land_on_unit_line(tc in -1.4..1.4f64, gap1 in 0.01..0.5f64, gap2 in 0.01..0.5f64, r in 0.1..3.0f64) {
            let tp = tc + gap1;
            let td = (tp + gap2).min(1.5);
            prop_assume!(tp < td);
            let (cc, d, p) = (c(1.0, tc.tan()), c(1.0, td.tan()), Complex64::from_polar(r, tp));
            if let Ok(rot) = rotate_support(cc, d, p) {
                prop_assert!(((rot.xi1 * cc).re - 1.0).abs() < 1e-9);
                prop_assert!(((rot.xi1 * p).re - 1.0).abs() < 1e-9);
                prop_assert!(((rot.xi2 * d).re - 1.0).abs() < 1e-9);
                prop_assert!(((rot.xi2 * p).re - 1.0).abs() < 1e-9);
                if p.re <= 1.0 {
                    prop_assert!(rot.theta2 <= 1e-12 && -1e-12 <= rot.theta1);
                }
            }
        }
    }
}
