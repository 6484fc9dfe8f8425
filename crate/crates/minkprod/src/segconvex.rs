//! Star centers of `s K` for a segment `s` and a compact convex set `K`.
//!
//! After the easy cases (0 in a factor, a factor on a ray from 0, a similar
//! copy of `s` inside `K`), both factors are normalized: `s` to
//! `K(1 + ia, 1 + ib)` and `K` so that the two points where its supporting
//! rays from 0 touch it become `1 + ic` and `1 + id`. The ordering of
//! `a, b, c, d` then selects the center.

use crate::error::{Error, Result};
use crate::frame::canonicalize_segment;
use crate::geom::{c, CScalar, ConvexBody, ConvexPolygon, Segment, EPS};
use crate::membership::{check_star_center, vertex_pair_exit, StarReport, Verdict, DEFAULT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegConfig {
    ZeroShortcut,
    PositiveRay,
    SimilarityContained,
    A,
    B,
    C,
    D,
    E,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegConvexConfig {
    pub config: SegConfig,
    /// Normalizing multipliers of the segment and of the convex set. For
    /// `SimilarityContained`, `xi1 s` lies in `K`; for `PositiveRay`, `xi1`
    /// maps the collinear factor onto the positive reals.
    pub xi1: CScalar,
    pub xi2: CScalar,
    /// `(a, b, c, d)` for configurations `A` to `E`, zero otherwise.
    pub params: (f64, f64, f64, f64),
}

impl SegConvexConfig {
    fn shortcut(config: SegConfig, xi1: CScalar) -> Self {
        SegConvexConfig { config, xi1, xi2: c(1.0, 0.0), params: (0.0, 0.0, 0.0, 0.0) }
    }
}

/// Points where the two supporting rays from 0 touch `k`, in increasing
/// angle. Requires `0` outside `k`.
pub fn support_contacts(k: &ConvexBody) -> Result<(CScalar, CScalar)> {
    match k {
        ConvexBody::Disk(d) => {
            let m = d.center.norm();
            if m <= d.radius {
                return Err(Error::ConeUndefined);
            }
            let half = (d.radius / m).asin();
            let len = (m * m - d.radius * d.radius).sqrt();
            let dir = d.center / m;
            Ok((dir * CScalar::from_polar(len, -half), dir * CScalar::from_polar(len, half)))
        }
        _ => {
            let reference = k.closest_point(c(0.0, 0.0));
            if reference.norm() == 0.0 {
                return Err(Error::ConeUndefined);
            }
            let verts = k.vertices();
            let angle = |v: &CScalar| (v / reference).arg();
            let lo = verts.iter().copied().min_by(|x, y| angle(x).total_cmp(&angle(y))).expect("nonempty");
            let hi = verts.iter().copied().max_by(|x, y| angle(x).total_cmp(&angle(y))).expect("nonempty");
            if angle(&hi) - angle(&lo) >= std::f64::consts::PI - EPS {
                return Err(Error::ConeUndefined);
            }
            Ok((lo, hi))
        }
    }
}

/// A point of `k` whose multiple by `ratio` also lies in `k`, found by
/// alternating projections between `k` and `k / ratio`.
fn similar_pair_point(k: &ConvexBody, ratio: CScalar) -> Option<CScalar> {
    let shrunk = k.scale(1.0 / ratio);
    let scale = k.max_modulus().max(shrunk.max_modulus()).max(1.0);
    let mut x = k.closest_point(c(0.0, 0.0));
    for _ in 0..4000 {
        let y = shrunk.closest_point(x);
        let next = k.closest_point(y);
        if (next - y).norm() <= 1e-12 * scale {
            return Some(next);
        }
        if (next - x).norm() <= 1e-15 * scale {
            break;
        }
        x = next;
    }
    let y = shrunk.closest_point(x);
    ((x - y).norm() <= 1e-9 * scale).then_some(x)
}

fn is_point(k: &ConvexBody) -> bool {
    match k {
        ConvexBody::Segment(s) => s.is_degenerate(),
        ConvexBody::Polygon(p) => p.len() == 1,
        ConvexBody::Disk(d) => d.radius == 0.0,
    }
}

fn on_ray(k: &ConvexBody) -> Option<CScalar> {
    let seg = k.as_segment()?;
    if seg.is_degenerate() {
        return Some(seg.p.norm() / seg.p);
    }
    seg.collinear_with_origin(EPS).then(|| {
        let far = if seg.p.norm() >= seg.q.norm() { seg.p } else { seg.q };
        far.norm() / far
    })
}

pub fn classify_seg_convex(s: &Segment, k: &ConvexBody) -> Result<SegConvexConfig> {
    if let ConvexBody::Polygon(p) = k {
        if p.is_empty() {
            return Err(Error::InvalidInput("empty convex set".into()));
        }
    }
    let scale = s.p.norm().max(s.q.norm()).max(k.max_modulus()).max(1.0);
    let zero = c(0.0, 0.0);
    if s.distance(zero) <= EPS * scale || k.contains(zero, EPS * scale) {
        return Ok(SegConvexConfig::shortcut(SegConfig::ZeroShortcut, c(1.0, 0.0)));
    }
    if let Some(xi) = on_ray(&ConvexBody::Segment(*s)) {
        return Ok(SegConvexConfig::shortcut(SegConfig::PositiveRay, xi));
    }
    if is_point(k) {
        let v = k.vertices()[0];
        return Ok(SegConvexConfig::shortcut(SegConfig::PositiveRay, v.norm() / v));
    }
    if let Some(xi) = on_ray(k) {
        return Ok(SegConvexConfig::shortcut(SegConfig::PositiveRay, xi));
    }
    if let Some(u) = similar_pair_point(k, s.q / s.p) {
        return Ok(SegConvexConfig::shortcut(SegConfig::SimilarityContained, u / s.p));
    }
    let f = canonicalize_segment(s)?;
    let (lo, hi) = support_contacts(k)?;
    let fk = canonicalize_segment(&Segment::new(lo, hi))?;
    let (xi1, xi2) = (1.0 / f.omega, 1.0 / fk.omega);
    let (a, b) = (f.a_lo, f.a_hi);
    let (cc, d) = ((lo * xi2).im, (hi * xi2).im);
    let config = if b <= cc {
        SegConfig::A
    } else if a <= cc && b <= d {
        SegConfig::B
    } else if a <= cc && cc < d && d <= b {
        SegConfig::C
    } else if cc <= a && d <= b && a <= d {
        SegConfig::D
    } else if d <= a {
        SegConfig::E
    } else {
        // c <= a <= b <= d: the rotated segment lies inside K(1 + ic, 1 + id).
        return Ok(SegConvexConfig::shortcut(SegConfig::SimilarityContained, xi1 / xi2));
    };
    Ok(SegConvexConfig { config, xi1, xi2, params: (a, b, cc, d) })
}

/// The center selected by the classification, before verification.
pub fn seg_convex_center(s: &Segment, k: &ConvexBody, cfg: &SegConvexConfig) -> CScalar {
    let (a, b, cc, d) = cfg.params;
    let hat = |x: f64| c(1.0, x);
    let back = 1.0 / (cfg.xi1 * cfg.xi2);
    match cfg.config {
        SegConfig::ZeroShortcut => c(0.0, 0.0),
        SegConfig::PositiveRay => s.point_at(0.5) * k.closest_point(c(0.0, 0.0)),
        SegConfig::SimilarityContained => cfg.xi1 * s.p * s.q,
        SegConfig::A | SegConfig::B => hat(b) * hat(cc) * back,
        SegConfig::C => hat(cc) * hat(d) * back,
        SegConfig::D | SegConfig::E => hat(a) * hat(d) * back,
    }
}

/// A verified star center of `s K`. Convex products are reported with
/// `convex` set.
///
/// ```
/// use minkprod::geom::{c, ConvexBody, ConvexPolygon, Segment};
/// use minkprod::segconvex::star_center_seg_convex;
/// let s = Segment::new(c(1.0, -1.0), c(1.0, 0.0));
/// let k = ConvexBody::Polygon(ConvexPolygon::new(&[c(1.0, 1.0), c(1.0, 2.0), c(0.8, 1.5)]).unwrap());
/// let r = star_center_seg_convex(&s, &k).unwrap();
/// assert!((r.center.unwrap() - c(1.0, 1.0)).norm() < 1e-9);
/// ```
pub fn star_center_seg_convex(s: &Segment, k: &ConvexBody) -> Result<StarReport> {
    let cfg = classify_seg_convex(s, k)?;
    let center = seg_convex_center(s, k, &cfg);
    let sb = ConvexBody::Segment(*s);
    let check = match check_star_center(&sb, k, center, 720, 64) {
        Ok(r) => r,
        Err(Error::NotAMember) => {
            return Err(Error::InternalInconsistency(format!("{:?} center {center} is not in the product", cfg.config)))
        }
        Err(e) => return Err(e),
    };
    if let Some((a, b, t)) = check.witness {
        return Err(Error::InternalInconsistency(format!(
            "{:?} center {center} fails towards {a} * {b} at t = {t}",
            cfg.config
        )));
    }
    let mut report = StarReport::star(center, 1);
    report.convex = cfg.config == SegConfig::PositiveRay;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleLayout {
    /// `K(1 + ia, 1 + id) K(1 + ic, 1 + id, p)` with `a <= c <= d`; center `(1 + ic)(1 + id)`.
    SharedEnd,
    /// `K(1 + ia, 1 + ib) K(1 + ic, 1 + id, p)` with `a < b <= c < d`; center `(1 + ib)(1 + ic)`.
    Separated,
}

fn cone_coefficients(cc: f64, d: f64, p: CScalar) -> Option<(f64, f64)> {
    // p = t1 (1 + ic) + t2 (1 + id)
    if (d - cc).abs() <= EPS {
        let on_ray = (p.im - cc * p.re).abs() <= EPS * (1.0 + p.norm()) && p.re >= 0.0;
        return on_ray.then_some((p.re, 0.0));
    }
    let t2 = (p.im - cc * p.re) / (d - cc);
    Some((p.re - t2, t2))
}

/// Center of a canonical segment times a triangle, verified by the vertex-pair test
/// on the polygon product. `b` is only read for [`TriangleLayout::Separated`].
pub fn star_center_segment_triangle(
    a: f64,
    b: f64,
    cc: f64,
    d: f64,
    p: CScalar,
    which: TriangleLayout,
) -> Result<CScalar> {
    let bad = |m: &str| Err(Error::InvalidInput(m.into()));
    if p.norm() == 0.0 {
        return bad("p must be nonzero");
    }
    let (t1, t2) = match cone_coefficients(cc, d, p) {
        Some(t) => t,
        None => return bad("p is not in the cone"),
    };
    if t1 < -EPS || t2 < -EPS {
        return bad("p is not in the cone");
    }
    let hat = |x: f64| c(1.0, x);
    let k2 = ConvexBody::Polygon(ConvexPolygon::new(&[hat(cc), hat(d), p])?);
    let (k1, center) = match which {
        TriangleLayout::SharedEnd => {
            if !(a <= cc && cc <= d) {
                return bad("need a <= c <= d");
            }
            (Segment::new(hat(a), hat(d)), hat(cc) * hat(d))
        }
        TriangleLayout::Separated => {
            if !(a < b && b <= cc && cc < d) {
                return bad("need a < b <= c < d");
            }
            let s = Segment::new(hat(a), hat(b));
            if similar_pair_point(&k2, s.q / s.p).is_some() {
                return bad("a similar copy of the segment lies in the triangle");
            }
            (s, hat(b) * hat(cc))
        }
    };
    let k1 = ConvexBody::Segment(k1);
    match vertex_pair_exit(&k1, &k2, center, DEFAULT_TOL) {
        None => Ok(center),
        Some(w) => Err(Error::InternalInconsistency(format!("segment to {} leaves the product at t = {}", w.to, w.t))),
    }
}

/// `true` iff the report's center survives an independent check.
pub fn report_is_consistent(r: &StarReport) -> bool {
    match r.verdict {
        Verdict::StarShaped => r.center.is_some(),
        Verdict::NotStarShaped => r.witness.is_some(),
        Verdict::Unknown => r.center.is_none(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{cis, Disk};
    use proptest::prelude::*;

    fn poly(pts: &[CScalar]) -> ConvexBody {
        ConvexBody::Polygon(ConvexPolygon::new(pts).unwrap())
    }

    fn seg(p: CScalar, q: CScalar) -> Segment {
        Segment::new(p, q)
    }

    #[test]
    fn shortcuts() {
        let disk = ConvexBody::Disk(Disk::new(c(5.0, 0.0), 1.0).unwrap());
        let cfg = classify_seg_convex(&seg(c(-1.0, 0.0), c(1.0, 0.0)), &disk).unwrap();
        assert_eq!(cfg.config, SegConfig::ZeroShortcut);
        assert_eq!(star_center_seg_convex(&seg(c(-1.0, 0.0), c(1.0, 0.0)), &disk).unwrap().center, Some(c(0.0, 0.0)));

        let small = ConvexBody::Disk(Disk::new(c(1.0, 1.0), 0.2).unwrap());
        assert_eq!(classify_seg_convex(&seg(c(2.0, 0.0), c(3.0, 0.0)), &small).unwrap().config, SegConfig::PositiveRay);
        let r = star_center_seg_convex(&seg(c(2.0, 0.0), c(3.0, 0.0)), &small).unwrap();
        assert!(r.convex && r.verdict == Verdict::StarShaped);

        let k = poly(&[c(1.0, 0.0), c(1.0, 2.0), c(0.5, 1.0)]);
        let cfg = classify_seg_convex(&seg(c(1.0, 0.0), c(1.0, 1.0)), &k).unwrap();
        assert_eq!(cfg.config, SegConfig::SimilarityContained);
        let r = star_center_seg_convex(&seg(c(1.0, 0.0), c(1.0, 1.0)), &k).unwrap();
        assert_eq!(r.verdict, Verdict::StarShaped);
    }

    #[test]
    fn configuration_a() {
        let s = seg(c(1.0, 0.0), c(1.0, -1.0));
        let k = poly(&[c(1.0, 1.0), c(1.0, 2.0), c(0.8, 1.5)]);
        let cfg = classify_seg_convex(&s, &k).unwrap();
        assert_eq!(cfg.config, SegConfig::A);
        let (a, b, cc, d) = cfg.params;
        assert!((a + 1.0).abs() < 1e-12 && b.abs() < 1e-12 && (cc - 1.0).abs() < 1e-12 && (d - 2.0).abs() < 1e-12);
        let r = star_center_seg_convex(&s, &k).unwrap();
        assert!((r.center.unwrap() - c(1.0, 1.0)).norm() < 1e-9);
    }

    #[test]
    fn nested_segment_gives_configuration_c() {
        // The long segment is not a similar copy of anything inside K(1, 1 + i).
        let s = seg(c(1.0, -1.0), c(1.0, 2.0));
        let k = ConvexBody::Segment(seg(c(1.0, 0.0), c(1.0, 1.0)));
        let cfg = classify_seg_convex(&s, &k).unwrap();
        assert_eq!(cfg.config, SegConfig::C);
        let r = star_center_seg_convex(&s, &k).unwrap();
        assert!((r.center.unwrap() - c(1.0, 1.0)).norm() < 1e-9);
        // 3 + i, the product of the endpoints, is not even a member.
        assert!(!crate::membership::member_exact(&ConvexBody::Segment(s), &k, c(3.0, 1.0), 1e-9));
    }

    #[test]
    fn each_configuration_appears() {
        let k = poly(&[c(1.0, 0.0), c(1.0, 1.0), c(0.6, 0.5)]);
        let cases = [
            (-10.0, -3.0, SegConfig::A),
            (-10.0, 0.5, SegConfig::B),
            (-1.0, 2.0, SegConfig::C),
            (0.5, 10.0, SegConfig::D),
            (3.0, 10.0, SegConfig::E),
        ];
        for (a, b, want) in cases {
            let s = seg(c(1.0, a), c(1.0, b));
            let cfg = classify_seg_convex(&s, &k).unwrap();
            assert_eq!(cfg.config, want, "{a} {b}");
            assert_eq!(star_center_seg_convex(&s, &k).unwrap().verdict, Verdict::StarShaped);
        }
    }

    #[test]
    fn disk_uses_tangent_points() {
        let k = ConvexBody::Disk(Disk::new(c(2.0, 0.0), 1.0).unwrap());
        let (lo, hi) = support_contacts(&k).unwrap();
        for t in [lo, hi] {
            assert!(((t - c(2.0, 0.0)).norm() - 1.0).abs() < 1e-12);
            assert!(crate::geom::dot(t, t - c(2.0, 0.0)).abs() < 1e-12);
        }
        let s = seg(c(1.0, -3.0), c(1.0, 3.0));
        assert_eq!(star_center_seg_convex(&s, &k).unwrap().verdict, Verdict::StarShaped);
        let wide = poly(&[c(1.0, -10.0), c(1.0, 10.0), c(-1.0, 1e-3)]);
        assert!(matches!(support_contacts(&wide), Err(Error::ConeUndefined)));
    }

    #[test]
    fn segment_triangle_layouts() {
        let z = star_center_segment_triangle(-1.0, 0.0, 0.0, 1.0, c(1.0, 0.0), TriangleLayout::SharedEnd).unwrap();
        assert!((z - c(1.0, 1.0)).norm() < 1e-12);
        let z = star_center_segment_triangle(0.0, 0.0, 0.0, 0.0, c(1.0, 0.0), TriangleLayout::SharedEnd).unwrap();
        assert!((z - c(1.0, 0.0)).norm() < 1e-12);
        let z = star_center_segment_triangle(-1.0, 0.0, 1.0, 2.0, c(1.0, 1.5), TriangleLayout::Separated).unwrap();
        assert!((z - c(1.0, 1.0)).norm() < 1e-12);
        assert!(star_center_segment_triangle(1.0, 0.0, 0.0, 1.0, c(1.0, 0.0), TriangleLayout::SharedEnd).is_err());
        assert!(star_center_segment_triangle(-1.0, 0.0, 1.0, 2.0, c(1.0, -3.0), TriangleLayout::Separated).is_err());
    }

    fn generic_case() -> impl Strategy<Value = (Segment, ConvexBody)> {
        (-2.0..2.0f64, 0.2..2.0f64, -0.6..0.6f64, 0.3..1.0f64, -0.3..0.3f64, 0.5..2.0f64).prop_map(
            |(a, len, phi, w, tilt, r)| {
                let s = seg(c(1.0, a), c(1.0, a + len));
                let k = poly(&[cis(phi) * r, cis(phi + w) * r, cis(phi + w / 2.0 + tilt) * (0.6 * r)]);
                (s, k)
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn frame_invariance((s, k) in generic_case(), m1 in 0.3..3.0f64, t1 in -3.0..3.0f64, m2 in 0.3..3.0f64, t2 in -3.0..3.0f64) {
            let (x1, x2) = (CScalar::from_polar(m1, t1), CScalar::from_polar(m2, t2));
            let cfg = classify_seg_convex(&s, &k).unwrap();
            prop_assume!(cfg.config != SegConfig::SimilarityContained);
            let base = seg_convex_center(&s, &k, &cfg);
            let s2 = s.scale(x1);
            let k2 = k.scale(x2);
            let moved = seg_convex_center(&s2, &k2, &classify_seg_convex(&s2, &k2).unwrap());
            prop_assert!((moved - base * x1 * x2).norm() < 1e-7 * (1.0 + moved.norm()));
        }

        #[test]
        fn conjugate_symmetry((s, k) in generic_case()) {
            let cfg = classify_seg_convex(&s, &k).unwrap();
            prop_assume!(matches!(cfg.config, SegConfig::A | SegConfig::B | SegConfig::D | SegConfig::E));
            let sc = Segment::new(s.p.conj(), s.q.conj());
            let kc = k.conj();
            let cfg_c = classify_seg_convex(&sc, &kc).unwrap();
            let mirrored = match cfg.config {
                SegConfig::A => SegConfig::E,
                SegConfig::B => SegConfig::D,
                SegConfig::D => SegConfig::B,
                _ => SegConfig::A,
            };
            let (a, b, cc, d) = cfg.params;
            let on_edge = [a - cc, b - cc, a - d, b - d].iter().any(|x| x.abs() < 1e-9);
            if !on_edge {
                prop_assert_eq!(cfg_c.config, mirrored);
            }
            let z = seg_convex_center(&s, &k, &cfg);
            let zc = seg_convex_center(&sc, &kc, &cfg_c);
            prop_assert!((zc - z.conj()).norm() < 1e-9 * (1.0 + z.norm()));
        }

        #[test]
        fn returned_centers_verify((s, k) in generic_case()) {
            let r = star_center_seg_convex(&s, &k).unwrap();
            prop_assert_eq!(r.verdict, Verdict::StarShaped);
            prop_assert!(report_is_consistent(&r));
        }
    }
}
