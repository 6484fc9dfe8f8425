//! Product of two segments: boundary, membership and star centers.

use crate::error::{Error, Result};
use crate::frame::{canonicalize_segment, CanonicalSegment};
use crate::geom::{c, contains_point, convex_hull, BoundaryPiece, CScalar, ConvexBody, ConvexPolygon, Segment, EPS};

/// Which closed-form description of the product applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegCase {
    /// One factor is a single point.
    PointFactor,
    /// Both segments lie on lines through 0.
    Collinear,
    /// One segment lies on a line through 0 and contains 0.
    ZeroInSegment,
    /// One segment lies on a line through 0 and avoids 0.
    RayScaled,
    /// Disjoint canonical intervals: a convex quadrilateral or triangle.
    QuadA,
    /// Overlapping canonical intervals: four segments and a parabolic arc.
    CaseB,
    /// One canonical interval strictly inside the other: six segments and an arc.
    CaseC,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StarCenterSet {
    Empty,
    Point(CScalar),
    Seg(Segment),
    Convex(ConvexPolygon),
    /// The product is convex.
    All,
}

impl StarCenterSet {
    /// A few representative points of the set.
    pub fn sample_points(&self) -> Vec<CScalar> {
        match self {
            StarCenterSet::Empty | StarCenterSet::All => Vec::new(),
            StarCenterSet::Point(p) => vec![*p],
            StarCenterSet::Seg(s) => (0..=4).map(|k| s.point_at(k as f64 / 4.0)).collect(),
            StarCenterSet::Convex(p) => {
                let mut pts = p.vertices().to_vec();
                let n = pts.len() as f64;
                pts.push(pts.iter().sum::<CScalar>() / n);
                pts
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegProductRegion {
    pub case_tag: SegCase,
    /// Closed chain of pieces; consecutive pieces share endpoints.
    pub boundary: Vec<BoundaryPiece>,
    pub star_centers: StarCenterSet,
    /// `false` when the reported centers are known to be centers but may not
    /// be all of them.
    pub centers_complete: bool,
}

impl SegProductRegion {
    pub fn para_arc(&self) -> Option<BoundaryPiece> {
        self.boundary.iter().copied().find(|p| matches!(p, BoundaryPiece::ParaArc { .. }))
    }
}

fn chain_through(points: &[CScalar]) -> Vec<BoundaryPiece> {
    let n = points.len();
    if n == 1 {
        return vec![BoundaryPiece::LineSeg(Segment::new(points[0], points[0]))];
    }
    (0..n).map(|k| BoundaryPiece::LineSeg(Segment::new(points[k], points[(k + 1) % n]))).collect()
}

fn polygon_region(pts: &[CScalar], case_tag: SegCase, star_centers: StarCenterSet) -> SegProductRegion {
    let hull = convex_hull(pts).expect("finite products");
    SegProductRegion { case_tag, boundary: chain_through(hull.vertices()), star_centers, centers_complete: true }
}

fn corner_products(s1: &Segment, s2: &Segment) -> [CScalar; 4] {
    [s1.p * s2.p, s1.p * s2.q, s1.q * s2.p, s1.q * s2.q]
}

/// Hull of the four endpoint products, which contains the whole product.
pub fn product_hull_bound(s1: &Segment, s2: &Segment) -> ConvexPolygon {
    convex_hull(&corner_products(s1, s2)).expect("finite products")
}

/// Chain of line segments, dropping pieces shorter than `tol`.
fn push_line(out: &mut Vec<BoundaryPiece>, a: CScalar, b: CScalar, tol: f64) {
    if (b - a).norm() > tol {
        out.push(BoundaryPiece::LineSeg(Segment::new(a, b)));
    }
}

enum Frames {
    Point(CScalar, Segment),
    BothThroughZero,
    OneThroughZero(Segment, Segment),
    General(CanonicalSegment, CanonicalSegment),
}

fn frames(s1: &Segment, s2: &Segment) -> Frames {
    if s1.is_degenerate() {
        return Frames::Point(s1.p, *s2);
    }
    if s2.is_degenerate() {
        return Frames::Point(s2.p, *s1);
    }
    let (z1, z2) = (s1.collinear_with_origin(EPS), s2.collinear_with_origin(EPS));
    match (z1, z2) {
        (true, true) => Frames::BothThroughZero,
        (true, false) => Frames::OneThroughZero(*s1, *s2),
        (false, true) => Frames::OneThroughZero(*s2, *s1),
        (false, false) => {
            let f1 = canonicalize_segment(s1).expect("checked generic");
            let f2 = canonicalize_segment(s2).expect("checked generic");
            if f1.a_lo <= f2.a_lo {
                Frames::General(f1, f2)
            } else {
                Frames::General(f2, f1)
            }
        }
    }
}

fn zero_inside(s: &Segment) -> bool {
    s.distance(c(0.0, 0.0)) <= EPS * s.length().max(1.0)
}

/// Exact description of `s1 * s2`.
///
/// ```
/// use minkprod::geom::{c, Segment};
/// use minkprod::segseg::{product_seg_seg, SegCase, StarCenterSet};
/// let r = product_seg_seg(&Segment::new(c(1.0, -2.0), c(1.0, 2.0)), &Segment::new(c(1.0, -1.0), c(1.0, 1.0)));
/// assert_eq!(r.case_tag, SegCase::CaseC);
/// assert_eq!(r.star_centers, StarCenterSet::Point(c(2.0, 0.0)));
/// ```
pub fn product_seg_seg(s1: &Segment, s2: &Segment) -> SegProductRegion {
    match frames(s1, s2) {
        Frames::Point(a, s) => {
            let pts = [a * s.p, a * s.q];
            polygon_region(&pts, SegCase::PointFactor, StarCenterSet::All)
        }
        Frames::BothThroughZero => polygon_region(&corner_products(s1, s2), SegCase::Collinear, StarCenterSet::All),
        Frames::OneThroughZero(line, other) => {
            if zero_inside(&line) {
                let tol = EPS * line.length().max(1.0) * other.length().max(1.0);
                let zero = c(0.0, 0.0);
                let mut boundary = Vec::new();
                for end in [line.p, line.q] {
                    let (u, v) = (end * other.p, end * other.q);
                    if u.norm() <= tol && v.norm() <= tol {
                        continue;
                    }
                    push_line(&mut boundary, zero, u, tol);
                    push_line(&mut boundary, u, v, tol);
                    push_line(&mut boundary, v, zero, tol);
                }
                SegProductRegion {
                    case_tag: SegCase::ZeroInSegment,
                    boundary,
                    star_centers: StarCenterSet::Point(zero),
                    centers_complete: false,
                }
            } else {
                polygon_region(&corner_products(&line, &other), SegCase::RayScaled, StarCenterSet::All)
            }
        }
        Frames::General(f1, f2) => general_region(&f1, &f2),
    }
}

fn general_region(f1: &CanonicalSegment, f2: &CanonicalSegment) -> SegProductRegion {
    let w = f1.omega * f2.omega;
    let (a1, a2, b1, b2) = (f1.a_lo, f1.a_hi, f2.a_lo, f2.a_hi);
    let (al1, al2, be1, be2) = (c(1.0, a1), c(1.0, a2), c(1.0, b1), c(1.0, b2));
    let tol = EPS * w.norm().max(1.0);
    if a2 <= b1 {
        let pts = [al1 * be1, al1 * be2, al2 * be1, al2 * be2].map(|p| p * w);
        return polygon_region(&pts, SegCase::QuadA, StarCenterSet::All);
    }
    let mut boundary = Vec::new();
    if a2 <= b2 {
        let pts = [al2 * al2, al2 * be2, al1 * be2, al1 * be1, be1 * be1].map(|p| p * w);
        for k in 0..4 {
            push_line(&mut boundary, pts[k], pts[k + 1], tol);
        }
        boundary.push(BoundaryPiece::ParaArc { scale: w, s_lo: b1, s_hi: a2 });
        let centers = convex_hull(&[al1 * al2, al1 * be2, be1 * al2, be1 * be2].map(|p| p * w)).expect("finite");
        SegProductRegion {
            case_tag: SegCase::CaseB,
            boundary,
            star_centers: StarCenterSet::Convex(centers),
            centers_complete: false,
        }
    } else {
        boundary.push(BoundaryPiece::ParaArc { scale: w, s_lo: b1, s_hi: b2 });
        let pts = [be2 * be2, al2 * be2, al2 * be1, be1 * be2, al1 * be2, al1 * be1, be1 * be1].map(|p| p * w);
        for k in 0..6 {
            push_line(&mut boundary, pts[k], pts[k + 1], tol);
        }
        SegProductRegion {
            case_tag: SegCase::CaseC,
            boundary,
            star_centers: StarCenterSet::Point(be1 * be2 * w),
            centers_complete: true,
        }
    }
}

/// Product of the canonical segment `K(1 + i a1, 1 + i a2)` with itself:
/// the region between the parabola `x = 1 - y^2/4` and its tangent lines at
/// `(1 + i a1)^2` and `(1 + i a2)^2`.
pub fn seg_square_region(a1: f64, a2: f64) -> SegProductRegion {
    let (a1, a2) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
    let (p1, p2) = (c(1.0, a1), c(1.0, a2));
    let corner = p1 * p2;
    let one = c(1.0, 0.0);
    if a2 - a1 <= EPS {
        let z = p1 * p1;
        return SegProductRegion {
            case_tag: SegCase::PointFactor,
            boundary: chain_through(&[z]),
            star_centers: StarCenterSet::All,
            centers_complete: true,
        };
    }
    let boundary = vec![
        BoundaryPiece::ParaArc { scale: one, s_lo: a1, s_hi: a2 },
        BoundaryPiece::LineSeg(Segment::new(p2 * p2, corner)),
        BoundaryPiece::LineSeg(Segment::new(corner, p1 * p1)),
    ];
    SegProductRegion {
        case_tag: SegCase::CaseB,
        boundary,
        star_centers: StarCenterSet::Point(corner),
        centers_complete: false,
    }
}

/// Membership in the region of [`seg_square_region`]; `tol` approximates a
/// distance.
pub fn in_square_region(a1: f64, a2: f64, w: CScalar, tol: f64) -> bool {
    let (x, y) = (w.re, w.im);
    let para = 1.0 - y * y / 4.0 - x;
    if para > tol * (1.0 + y * y / 4.0).sqrt() || y < 2.0 * a1 - 2.0 * tol || y > 2.0 * a2 + 2.0 * tol {
        return false;
    }
    [a1, a2].iter().all(|&a| x - (1.0 - a * (y - a)) <= tol * (1.0 + a * a).sqrt())
}

fn refine(lo: f64, hi: f64, cuts: [f64; 2]) -> Vec<(f64, f64)> {
    let mut pts = vec![lo, hi];
    for x in cuts {
        if x > lo && x < hi {
            pts.push(x);
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.windows(2).filter(|w| w[1] > w[0]).map(|w| (w[0], w[1])).collect()
}

/// Whether `z` lies within about `tol` of `s1 * s2`.
///
/// The canonical intervals are cut at each other's endpoints. Pieces shared
/// by both factors contribute a parabola-bounded square product, every other
/// pair of pieces a convex quadrilateral.
pub fn member_seg_seg(s1: &Segment, s2: &Segment, z: CScalar, tol: f64) -> bool {
    let poly_has = |pts: &[CScalar]| contains_point(&ConvexBody::Polygon(convex_hull(pts).expect("finite")), z, tol);
    match frames(s1, s2) {
        Frames::Point(a, s) => Segment::new(a * s.p, a * s.q).distance(z) <= tol,
        Frames::BothThroughZero => poly_has(&corner_products(s1, s2)),
        Frames::OneThroughZero(line, other) => {
            if zero_inside(&line) {
                let zero = c(0.0, 0.0);
                [line.p, line.q].iter().any(|&e| poly_has(&[zero, e * other.p, e * other.q]))
            } else {
                poly_has(&corner_products(&line, &other))
            }
        }
        Frames::General(f1, f2) => {
            let wscale = f1.omega * f2.omega;
            let u = z / wscale;
            let t = tol / wscale.norm();
            let pi = refine(f1.a_lo, f1.a_hi, [f2.a_lo, f2.a_hi]);
            let pj = refine(f2.a_lo, f2.a_hi, [f1.a_lo, f1.a_hi]);
            pi.iter().any(|&(x1, x2)| {
                pj.iter().any(|&(y1, y2)| {
                    if x1 == y1 && x2 == y2 {
                        in_square_region(x1, x2, u, t)
                    } else {
                        let pts = [
                            c(1.0, x1) * c(1.0, y1),
                            c(1.0, x1) * c(1.0, y2),
                            c(1.0, x2) * c(1.0, y1),
                            c(1.0, x2) * c(1.0, y2),
                        ];
                        contains_point(&ConvexBody::Polygon(convex_hull(&pts).expect("finite")), u, t)
                    }
                })
            })
        }
    }
}

/// Star centers of a product of two segments in general position (neither on
/// a line through 0), decided by comparing canonical intervals.
pub fn star_centers_general_position(s1: &Segment, s2: &Segment) -> Result<StarCenterSet> {
    let f1 = canonicalize_segment(s1)?;
    let f2 = canonicalize_segment(s2)?;
    let w = f1.omega * f2.omega;
    let (a1, a2, b1, b2) = (f1.a_lo, f1.a_hi, f2.a_lo, f2.a_hi);
    let inside = |lo: f64, hi: f64, olo: f64, ohi: f64| olo <= lo && hi <= ohi;
    if inside(a1, a2, b1, b2) {
        return Ok(StarCenterSet::Point(w * c(1.0, a1) * c(1.0, a2)));
    }
    if inside(b1, b2, a1, a2) {
        return Ok(StarCenterSet::Point(w * c(1.0, b1) * c(1.0, b2)));
    }
    if a2 <= b1 || b2 <= a1 {
        return Ok(StarCenterSet::All);
    }
    let (x1, x2, y1, y2) = if a1 <= b1 { (a1, a2, b1, b2) } else { (b1, b2, a1, a2) };
    let quad = [c(1.0, x1) * c(1.0, x2), c(1.0, x1) * c(1.0, y2), c(1.0, y1) * c(1.0, x2), c(1.0, y1) * c(1.0, y2)];
    Ok(StarCenterSet::Convex(
        convex_hull(&quad.map(|p| p * w)).map_err(|e| Error::InternalInconsistency(e.to_string()))?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::chain_closes;
    use proptest::prelude::*;

    fn seg(a: (f64, f64), b: (f64, f64)) -> Segment {
        Segment::new(c(a.0, a.1), c(b.0, b.1))
    }

    fn canon(lo: f64, hi: f64) -> Segment {
        seg((1.0, lo), (1.0, hi))
    }

    #[test]
    fn collinear_case() {
        let r = product_seg_seg(&seg((1.0, 0.0), (2.0, 0.0)), &seg((-3.0, 0.0), (-1.0, 0.0)));
        assert_eq!(r.case_tag, SegCase::Collinear);
        // The brute-force products of the endpoint grid span [-6, -1].
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..=10 {
            for j in 0..=10 {
                let v = (1.0 + i as f64 / 10.0) * (-3.0 + 2.0 * j as f64 / 10.0);
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        let ends: Vec<_> = r.boundary.iter().map(|p| p.start().re).collect();
        assert_eq!(ends.len(), 2);
        assert!((ends.iter().cloned().fold(f64::INFINITY, f64::min) - lo).abs() < 1e-12);
        assert!((ends.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - hi).abs() < 1e-12);
    }

    #[test]
    fn touching_intervals_give_triangle() {
        let r = product_seg_seg(&seg((1.0, -1.0), (1.0, 0.0)), &seg((1.0, 0.0), (1.0, 2.0)));
        assert_eq!(r.case_tag, SegCase::QuadA);
        assert_eq!(r.boundary.len(), 3);
    }

    #[test]
    fn nested_intervals_case_c() {
        let r = product_seg_seg(&canon(-2.0, 2.0), &canon(-1.0, 1.0));
        assert_eq!(r.case_tag, SegCase::CaseC);
        assert_eq!(r.star_centers, StarCenterSet::Point(c(2.0, 0.0)));
        assert!(chain_closes(&r.boundary, 1e-9));
        assert_eq!(r.boundary.len(), 7);
    }

    #[test]
    fn overlap_case_b_arc_ends() {
        let r = product_seg_seg(&canon(-1.0, 1.0), &canon(0.0, 2.0));
        assert_eq!(r.case_tag, SegCase::CaseB);
        let arc = r.para_arc().unwrap();
        assert!((arc.start() - c(1.0, 0.0) * c(1.0, 0.0)).norm() < 1e-12);
        assert!((arc.end() - c(1.0, 1.0) * c(1.0, 1.0)).norm() < 1e-12);
        assert!(chain_closes(&r.boundary, 1e-9));
    }

    #[test]
    fn square_region_examples() {
        let r = seg_square_region(-1.0, 1.0);
        let verts: Vec<_> = r.boundary.iter().map(|p| p.start()).collect();
        assert!(verts.iter().any(|v| (v - c(0.0, -2.0)).norm() < 1e-12));
        assert!(verts.iter().any(|v| (v - c(0.0, 2.0)).norm() < 1e-12));
        assert!(verts.iter().any(|v| (v - c(2.0, 0.0)).norm() < 1e-12));
        assert!(in_square_region(-1.0, 1.0, c(1.5, 0.4), 1e-9));
        assert!(!in_square_region(-1.0, 1.0, c(2.0, 0.5), 1e-9));
        let p = seg_square_region(0.0, 0.0);
        assert_eq!(p.boundary[0].start(), c(1.0, 0.0));
        // Tangent segment L1 lies on x = 1 - a1 (y - a1).
        if let BoundaryPiece::LineSeg(l) = r.boundary[2] {
            for t in [0.0, 0.3, 1.0] {
                let z = l.point_at(t);
                assert!((z.re - (1.0 + (z.im + 1.0))).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn membership_examples() {
        let k = canon(-1.0, 1.0);
        assert!(member_seg_seg(&k, &k, c(2.0, 0.0), 1e-9));
        assert!(!member_seg_seg(&k, &k, c(2.0, 0.5), 1e-9));
        assert!(member_seg_seg(&seg((1.0, 0.0), (2.0, 0.0)), &seg((0.0, 1.0), (1.0, 1.0)), c(1.5, 1.5), 1e-9));
    }

    #[test]
    fn cases_agree_at_touching_boundary() {
        // a2 = b1: the triangle of case (a) equals the case (b) construction
        // whose arc has collapsed to a point.
        let (s1, s2) = (canon(-1.0, 0.0), canon(0.0, 2.0));
        let f1 = canonicalize_segment(&s1).unwrap();
        let f2 = canonicalize_segment(&s2).unwrap();
        let mut b = Vec::new();
        let (al1, al2, be1, be2) = (c(1.0, f1.a_lo), c(1.0, f1.a_hi), c(1.0, f2.a_lo), c(1.0, f2.a_hi));
        for pair in [(al2 * al2, al2 * be2), (al2 * be2, al1 * be2), (al1 * be2, al1 * be1), (al1 * be1, be1 * be1)] {
            b.push(pair.0);
            b.push(pair.1);
        }
        let tri = convex_hull(&b).unwrap();
        let a = product_seg_seg(&s1, &s2);
        let verts: Vec<_> = a.boundary.iter().map(|p| p.start()).collect();
        assert_eq!(tri.len(), verts.len());
        for v in tri.vertices() {
            assert!(verts.iter().any(|u| (u - v).norm() < 1e-9));
        }
    }

    #[test]
    fn general_position_centers() {
        assert_eq!(
            star_centers_general_position(&canon(-2.0, 2.0), &canon(-1.0, 1.0)).unwrap(),
            StarCenterSet::Point(c(2.0, 0.0))
        );
        assert_eq!(
            star_centers_general_position(&seg((1.0, 0.0), (1.0, 1.0)), &seg((1.0, 2.0), (1.0, 3.0))).unwrap(),
            StarCenterSet::All
        );
        assert!(star_centers_general_position(&seg((1.0, 0.0), (2.0, 0.0)), &canon(0.0, 1.0)).is_err());
        match star_centers_general_position(&canon(-1.0, 1.0), &canon(0.0, 2.0)).unwrap() {
            StarCenterSet::Convex(q) => {
                // Contains the segment joining beta1 alpha2 and beta2 alpha1.
                let body = ConvexBody::Polygon(q);
                for p in [c(1.0, 0.0) * c(1.0, 1.0), c(1.0, 2.0) * c(1.0, -1.0)] {
                    assert!(body.contains(p, 1e-9));
                }
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    fn gen_seg() -> impl Strategy<Value = Segment> {
        (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b, x, y)| seg((a, b), (x, y)))
    }

    fn gen_z() -> impl Strategy<Value = CScalar> {
        (-9.0..9.0f64, -9.0..9.0f64).prop_map(|(x, y)| c(x, y))
    }

    proptest! {
        #[test]
        fn boundary_chain_closes(s1 in gen_seg(), s2 in gen_seg()) {
            let r = product_seg_seg(&s1, &s2);
            let scale = s1.p.norm().max(s1.q.norm()) * s2.p.norm().max(s2.q.norm());
            prop_assert!(chain_closes(&r.boundary, 1e-9 * scale.max(1.0)));
            let arcs = r.boundary.iter().filter(|p| matches!(p, BoundaryPiece::ParaArc { .. })).count();
            prop_assert_eq!(arcs, usize::from(matches!(r.case_tag, SegCase::CaseB | SegCase::CaseC)));
        }

        #[test]
        fn boundary_in_hull_bound(s1 in gen_seg(), s2 in gen_seg()) {
            let hull = ConvexBody::Polygon(product_hull_bound(&s1, &s2));
            let r = product_seg_seg(&s1, &s2);
            for piece in &r.boundary {
                for k in 0..=20 {
                    prop_assert!(hull.contains(piece.at(k as f64 / 20.0), 1e-8));
                }
            }
        }

        #[test]
        fn boundary_points_are_members(s1 in gen_seg(), s2 in gen_seg()) {
            let r = product_seg_seg(&s1, &s2);
            for piece in &r.boundary {
                for k in 0..=10 {
                    prop_assert!(member_seg_seg(&s1, &s2, piece.at(k as f64 / 10.0), 1e-7));
                }
            }
        }

        #[test]
        fn products_of_members_are_members(s1 in gen_seg(), s2 in gen_seg(), t in 0.0..=1.0f64, u in 0.0..=1.0f64) {
            prop_assert!(member_seg_seg(&s1, &s2, s1.point_at(t) * s2.point_at(u), 1e-9));
        }

        #[test]
        fn commutative(s1 in gen_seg(), s2 in gen_seg(), z in gen_z()) {
            prop_assert_eq!(member_seg_seg(&s1, &s2, z, 1e-9), member_seg_seg(&s2, &s1, z, 1e-9));
        }

        #[test]
        fn scaling_equivariant(s1 in gen_seg(), s2 in gen_seg(), z in gen_z(), w in gen_z()) {
            prop_assume!(w.norm() > 0.1);
            let a = member_seg_seg(&s1, &s2, z, 1e-9);
            let b = member_seg_seg(&s1.scale(w), &s2, z * w, 1e-9 * w.norm());
            if a != b {
                // Only points within rounding of the boundary may disagree.
                let near = [c(1e-6, 0.0), c(-1e-6, 0.0), c(0.0, 1e-6), c(0.0, -1e-6)]
                    .iter()
                    .any(|d| !member_seg_seg(&s1, &s2, z + d, 1e-9));
                prop_assert!(member_seg_seg(&s1, &s2, z, 1e-6) && near);
            }
        }

        #[test]
        fn conjugation(s1 in gen_seg(), s2 in gen_seg(), z in gen_z()) {
            let cj = |s: &Segment| Segment::new(s.p.conj(), s.q.conj());
            prop_assert_eq!(member_seg_seg(&s1, &s2, z, 1e-9), member_seg_seg(&cj(&s1), &cj(&s2), z.conj(), 1e-9));
        }
    }
}
