//! Planar geometry over the complex numbers: scalars, segments, convex
//! polygons, disks and the curve pieces that bound product regions.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A point of the complex plane.
pub type CScalar = Complex64;

/// Default predicate tolerance for geometry.
pub const EPS: f64 = 1e-9;

pub fn c(re: f64, im: f64) -> CScalar {
    Complex64::new(re, im)
}

/// Builds a scalar, rejecting NaN and infinities.
pub fn checked(re: f64, im: f64) -> Result<CScalar> {
    if re.is_finite() && im.is_finite() {
        Ok(c(re, im))
    } else {
        Err(Error::InvalidInput(format!("non-finite coordinate ({re}, {im})")))
    }
}

pub(crate) fn ensure_finite(z: CScalar) -> Result<CScalar> {
    checked(z.re, z.im)
}

/// `Im(conj(a) * b)`, the signed area of the parallelogram spanned by `a`, `b`.
#[inline]
pub fn cross(a: CScalar, b: CScalar) -> f64 {
    a.re * b.im - a.im * b.re
}

#[inline]
pub fn dot(a: CScalar, b: CScalar) -> f64 {
    a.re * b.re + a.im * b.im
}

/// Unit complex number with argument `theta`.
#[inline]
pub fn cis(theta: f64) -> CScalar {
    Complex64::from_polar(1.0, theta)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub p: CScalar,
    pub q: CScalar,
}

impl Segment {
    pub fn new(p: CScalar, q: CScalar) -> Self {
        Segment { p, q }
    }

    pub fn is_degenerate(&self) -> bool {
        (self.q - self.p).norm() <= EPS * self.p.norm().max(1.0)
    }

    pub fn length(&self) -> f64 {
        (self.q - self.p).norm()
    }

    pub fn point_at(&self, t: f64) -> CScalar {
        self.p + (self.q - self.p) * t
    }

    /// Parameter of the point of the segment closest to `z`.
    pub fn closest_param(&self, z: CScalar) -> f64 {
        let d = self.q - self.p;
        let len2 = d.norm_sqr();
        if len2 == 0.0 {
            return 0.0;
        }
        (dot(z - self.p, d) / len2).clamp(0.0, 1.0)
    }

    pub fn closest_point(&self, z: CScalar) -> CScalar {
        self.point_at(self.closest_param(z))
    }

    pub fn distance(&self, z: CScalar) -> f64 {
        (z - self.closest_point(z)).norm()
    }

    /// `true` when the line through the segment passes through 0. Tested with
    /// `|Im(conj(p) q)| <= eps * max(|p||q|, 1)`.
    pub fn collinear_with_origin(&self, eps: f64) -> bool {
        cross(self.p, self.q).abs() <= eps * (self.p.norm() * self.q.norm()).max(1.0)
    }

    pub fn scale(&self, w: CScalar) -> Segment {
        Segment::new(self.p * w, self.q * w)
    }
}

/// A convex polygon with counter-clockwise vertices. One vertex is a point,
/// two vertices a segment.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<CScalar>,
}

impl ConvexPolygon {
    /// Normalizes `points` into a polygon by taking their convex hull.
    pub fn new(points: &[CScalar]) -> Result<Self> {
        convex_hull(points)
    }

    pub fn vertices(&self) -> &[CScalar] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges in CCW order. A 2-vertex polygon has one edge, a point none.
    pub fn edges(&self) -> Vec<Segment> {
        let v = &self.vertices;
        match v.len() {
            0 | 1 => Vec::new(),
            2 => vec![Segment::new(v[0], v[1])],
            n => (0..n).map(|i| Segment::new(v[i], v[(i + 1) % n])).collect(),
        }
    }

    /// Exact half-plane test, no tolerance.
    pub fn strictly_contains(&self, z: CScalar) -> bool {
        let v = &self.vertices;
        if v.len() < 3 {
            return false;
        }
        (0..v.len()).all(|i| cross(v[(i + 1) % v.len()] - v[i], z - v[i]) >= 0.0)
    }

    pub fn closest_point(&self, z: CScalar) -> CScalar {
        let v = &self.vertices;
        if v.len() == 1 {
            return v[0];
        }
        if self.strictly_contains(z) {
            return z;
        }
        let mut best = v[0];
        let mut best_d = f64::INFINITY;
        for e in self.edges() {
            let p = e.closest_point(z);
            let d = (p - z).norm_sqr();
            if d < best_d {
                best_d = d;
                best = p;
            }
        }
        best
    }

    pub fn scale(&self, w: CScalar) -> ConvexPolygon {
        // Multiplication by a nonzero complex number is a rotation plus a
        // dilation, so order and convex position are preserved.
        if w == Complex64::new(0.0, 0.0) {
            return ConvexPolygon { vertices: vec![w] };
        }
        ConvexPolygon { vertices: self.vertices.iter().map(|v| v * w).collect() }
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().iter().map(Segment::length).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub center: CScalar,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: CScalar, radius: f64) -> Result<Self> {
        if !radius.is_finite() || radius < 0.0 {
            return Err(Error::InvalidInput(format!("disk radius {radius}")));
        }
        ensure_finite(center)?;
        Ok(Disk { center, radius })
    }

    pub fn scale(&self, w: CScalar) -> Disk {
        Disk { center: self.center * w, radius: self.radius * w.norm() }
    }
}

/// A factor of a product: one of the three compact convex shapes.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexBody {
    Segment(Segment),
    Polygon(ConvexPolygon),
    Disk(Disk),
}

impl From<Segment> for ConvexBody {
    fn from(s: Segment) -> Self {
        ConvexBody::Segment(s)
    }
}

impl From<ConvexPolygon> for ConvexBody {
    fn from(p: ConvexPolygon) -> Self {
        ConvexBody::Polygon(p)
    }
}

impl From<Disk> for ConvexBody {
    fn from(d: Disk) -> Self {
        ConvexBody::Disk(d)
    }
}

impl ConvexBody {
    pub fn point(z: CScalar) -> Self {
        ConvexBody::Polygon(ConvexPolygon { vertices: vec![z] })
    }

    /// Segment view of a segment or of a polygon with at most two vertices.
    pub fn as_segment(&self) -> Option<Segment> {
        match self {
            ConvexBody::Segment(s) => Some(*s),
            ConvexBody::Polygon(p) if p.len() == 1 => Some(Segment::new(p.vertices[0], p.vertices[0])),
            ConvexBody::Polygon(p) if p.len() == 2 => Some(Segment::new(p.vertices[0], p.vertices[1])),
            _ => None,
        }
    }

    /// Polygon view; `None` for disks.
    pub fn as_polygon(&self) -> Option<ConvexPolygon> {
        match self {
            ConvexBody::Segment(s) => {
                let vertices = if s.is_degenerate() { vec![s.p] } else { vec![s.p, s.q] };
                Some(ConvexPolygon { vertices })
            }
            ConvexBody::Polygon(p) => Some(p.clone()),
            ConvexBody::Disk(_) => None,
        }
    }

    pub fn closest_point(&self, z: CScalar) -> CScalar {
        match self {
            ConvexBody::Segment(s) => s.closest_point(z),
            ConvexBody::Polygon(p) => p.closest_point(z),
            ConvexBody::Disk(d) => {
                let off = z - d.center;
                let n = off.norm();
                if n <= d.radius {
                    z
                } else {
                    d.center + off * (d.radius / n)
                }
            }
        }
    }

    pub fn distance(&self, z: CScalar) -> f64 {
        (z - self.closest_point(z)).norm()
    }

    pub fn contains(&self, z: CScalar, tol: f64) -> bool {
        contains_point(self, z, tol)
    }

    /// Extreme points; a disk reports none.
    pub fn vertices(&self) -> Vec<CScalar> {
        match self {
            ConvexBody::Disk(_) => Vec::new(),
            _ => self.as_polygon().map(|p| p.vertices).unwrap_or_default(),
        }
    }

    pub fn max_modulus(&self) -> f64 {
        match self {
            ConvexBody::Disk(d) => d.center.norm() + d.radius,
            _ => self.vertices().iter().map(|v| v.norm()).fold(0.0, f64::max),
        }
    }

    pub fn min_modulus(&self) -> f64 {
        self.closest_point(c(0.0, 0.0)).norm()
    }

    pub fn scale(&self, w: CScalar) -> ConvexBody {
        match self {
            ConvexBody::Segment(s) => ConvexBody::Segment(s.scale(w)),
            ConvexBody::Polygon(p) => ConvexBody::Polygon(p.scale(w)),
            ConvexBody::Disk(d) => ConvexBody::Disk(d.scale(w)),
        }
    }

    pub fn conj(&self) -> ConvexBody {
        match self {
            ConvexBody::Segment(s) => ConvexBody::Segment(Segment::new(s.p.conj(), s.q.conj())),
            ConvexBody::Polygon(p) => {
                let pts: Vec<_> = p.vertices.iter().map(|v| v.conj()).collect();
                ConvexBody::Polygon(convex_hull(&pts).expect("nonempty"))
            }
            ConvexBody::Disk(d) => ConvexBody::Disk(Disk { center: d.center.conj(), radius: d.radius }),
        }
    }

    pub fn bbox(&self) -> (f64, f64, f64, f64) {
        match self {
            ConvexBody::Disk(d) => {
                (d.center.re - d.radius, d.center.re + d.radius, d.center.im - d.radius, d.center.im + d.radius)
            }
            _ => {
                let v = self.vertices();
                let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
                for z in v {
                    b = (b.0.min(z.re), b.1.max(z.re), b.2.min(z.im), b.3.max(z.im));
                }
                b
            }
        }
    }

    /// Roughly `k` points spread evenly along the boundary, always including
    /// every vertex. For a segment the boundary is the segment itself.
    pub fn boundary_points(&self, k: usize) -> Vec<CScalar> {
        let k = k.max(1);
        match self {
            ConvexBody::Disk(d) => (0..k).map(|j| d.center + cis(2.0 * PI * j as f64 / k as f64) * d.radius).collect(),
            _ => {
                let poly = self.as_polygon().expect("polygonal");
                let v = poly.vertices();
                if v.len() == 1 {
                    return vec![v[0]];
                }
                let edges = poly.edges();
                let per = poly.perimeter();
                let mut out = Vec::with_capacity(k + v.len());
                for e in &edges {
                    let steps = ((e.length() / per) * k as f64).round().max(1.0) as usize;
                    for j in 0..steps {
                        out.push(e.point_at(j as f64 / steps as f64));
                    }
                }
                if v.len() == 2 {
                    out.push(v[1]);
                }
                out
            }
        }
    }

    /// Points filling the body: extreme points plus a stratified interior
    /// set of about `k` points.
    pub fn interior_points(&self, k: usize) -> Vec<CScalar> {
        let k = k.max(1);
        match self {
            ConvexBody::Disk(d) => {
                // Concentric rings with point counts proportional to radius.
                let rings = ((k as f64 / PI).sqrt().ceil() as usize).max(1);
                let mut out = vec![d.center];
                for i in 1..=rings {
                    let rho = d.radius * i as f64 / rings as f64;
                    let m = ((2.0 * PI * i as f64).round() as usize).max(3);
                    for j in 0..m {
                        out.push(d.center + cis(2.0 * PI * (j as f64 + 0.5 * i as f64) / m as f64) * rho);
                    }
                }
                out
            }
            _ => {
                let poly = self.as_polygon().expect("polygonal");
                let v = poly.vertices();
                if v.len() <= 2 {
                    return self.boundary_points(k);
                }
                // Fan triangulation from v[0], barycentric lattice per triangle.
                let tris = v.len() - 2;
                let per = (k / tris).max(1);
                let side = (((2 * per) as f64).sqrt().ceil() as usize).max(1);
                let mut out = Vec::new();
                for t in 0..tris {
                    let (a, b, cc) = (v[0], v[t + 1], v[t + 2]);
                    for i in 0..=side {
                        for j in 0..=(side - i) {
                            let u = i as f64 / side as f64;
                            let w = j as f64 / side as f64;
                            out.push(a + (b - a) * u + (cc - a) * w);
                        }
                    }
                }
                out
            }
        }
    }
}

/// Convex hull of `points`, counter-clockwise, with duplicates and collinear
/// boundary points removed.
pub fn convex_hull(points: &[CScalar]) -> Result<ConvexPolygon> {
    if points.is_empty() {
        return Err(Error::InvalidInput("convex hull of no points".into()));
    }
    for z in points {
        ensure_finite(*z)?;
    }
    let scale = points.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let dedup_tol = EPS * scale;
    let mut pts: Vec<CScalar> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut uniq: Vec<CScalar> = Vec::with_capacity(pts.len());
    for z in pts {
        let near = uniq.iter().rev().take_while(|u| z.re - u.re <= dedup_tol).any(|u| (u - z).norm() <= dedup_tol);
        if !near {
            uniq.push(z);
        }
    }
    if uniq.len() <= 2 {
        return Ok(ConvexPolygon { vertices: uniq });
    }
    // Monotone chain. A turn counts as left only if clearly so relative to the
    // lengths involved, which drops nearly collinear points.
    let left = |o: CScalar, a: CScalar, b: CScalar| {
        let (u, w) = (a - o, b - o);
        cross(u, w) > EPS * u.norm() * w.norm()
    };
    let mut lower: Vec<CScalar> = Vec::new();
    for &z in &uniq {
        while lower.len() >= 2 && !left(lower[lower.len() - 2], lower[lower.len() - 1], z) {
            lower.pop();
        }
        lower.push(z);
    }
    let mut upper: Vec<CScalar> = Vec::new();
    for &z in uniq.iter().rev() {
        while upper.len() >= 2 && !left(upper[upper.len() - 2], upper[upper.len() - 1], z) {
            upper.pop();
        }
        upper.push(z);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    Ok(ConvexPolygon { vertices: lower })
}

/// `true` iff the distance from `z` to `body` is at most `tol`.
pub fn contains_point(body: &ConvexBody, z: CScalar, tol: f64) -> bool {
    match body {
        ConvexBody::Disk(d) => (z - d.center).norm() <= d.radius + tol,
        ConvexBody::Polygon(p) if p.len() >= 3 && p.strictly_contains(z) => true,
        _ => body.distance(z) <= tol,
    }
}

/// A piece of a product-region boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPiece {
    LineSeg(Segment),
    /// `{scale * (1 + i s)^2 : s in [s_lo, s_hi]}`, traversed from `s_lo`.
    ParaArc {
        scale: CScalar,
        s_lo: f64,
        s_hi: f64,
    },
    /// Circle arc starting at angle `theta_start` and turning by `sweep`.
    CircArc {
        center: CScalar,
        radius: f64,
        theta_start: f64,
        sweep: f64,
    },
}

impl BoundaryPiece {
    pub fn at(&self, t: f64) -> CScalar {
        match *self {
            BoundaryPiece::LineSeg(s) => s.point_at(t),
            BoundaryPiece::ParaArc { scale, s_lo, s_hi } => {
                let s = s_lo + t * (s_hi - s_lo);
                let w = c(1.0, s);
                scale * w * w
            }
            BoundaryPiece::CircArc { center, radius, theta_start, sweep } => {
                center + cis(theta_start + t * sweep) * radius
            }
        }
    }

    /// Derivative with respect to the parameter `t`.
    pub fn tangent(&self, t: f64) -> CScalar {
        match *self {
            BoundaryPiece::LineSeg(s) => s.q - s.p,
            BoundaryPiece::ParaArc { scale, s_lo, s_hi } => {
                let s = s_lo + t * (s_hi - s_lo);
                scale * c(0.0, 2.0) * c(1.0, s) * (s_hi - s_lo)
            }
            BoundaryPiece::CircArc { radius, theta_start, sweep, .. } => {
                c(0.0, 1.0) * cis(theta_start + t * sweep) * (radius * sweep)
            }
        }
    }

    pub fn start(&self) -> CScalar {
        self.at(0.0)
    }

    pub fn end(&self) -> CScalar {
        self.at(1.0)
    }

    /// Same curve traversed backwards.
    pub fn reversed(&self) -> BoundaryPiece {
        match *self {
            BoundaryPiece::LineSeg(s) => BoundaryPiece::LineSeg(Segment::new(s.q, s.p)),
            BoundaryPiece::ParaArc { .. } => *self,
            BoundaryPiece::CircArc { center, radius, theta_start, sweep } => {
                BoundaryPiece::CircArc { center, radius, theta_start: theta_start + sweep, sweep: -sweep }
            }
        }
    }

    pub fn scale(&self, w: CScalar) -> BoundaryPiece {
        match *self {
            BoundaryPiece::LineSeg(s) => BoundaryPiece::LineSeg(s.scale(w)),
            BoundaryPiece::ParaArc { scale, s_lo, s_hi } => BoundaryPiece::ParaArc { scale: scale * w, s_lo, s_hi },
            BoundaryPiece::CircArc { center, radius, theta_start, sweep } => BoundaryPiece::CircArc {
                center: center * w,
                radius: radius * w.norm(),
                theta_start: theta_start + w.arg(),
                sweep,
            },
        }
    }
}

/// Point at parameter `t` in `[0, 1]` along `piece`.
pub fn eval_boundary_piece(piece: &BoundaryPiece, t: f64) -> Result<CScalar> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidInput(format!("boundary parameter {t} outside [0, 1]")));
    }
    Ok(piece.at(t))
}

/// `true` when consecutive pieces meet end to start and the last meets the first.
pub fn chain_closes(chain: &[BoundaryPiece], tol: f64) -> bool {
    if chain.is_empty() {
        return false;
    }
    (0..chain.len()).all(|k| (chain[k].end() - chain[(k + 1) % chain.len()].start()).norm() <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hull_drops_interior_point() {
        let h = convex_hull(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(0.2, 0.2)]).unwrap();
        assert_eq!(h.vertices(), &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)]);
    }

    #[test]
    fn hull_degenerate_inputs() {
        assert_eq!(convex_hull(&[c(1.0, 1.0)]).unwrap().vertices(), &[c(1.0, 1.0)]);
        let h = convex_hull(&[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]).unwrap();
        assert_eq!(h.vertices(), &[c(1.0, 0.0), c(3.0, 0.0)]);
        assert!(convex_hull(&[]).is_err());
        assert!(convex_hull(&[c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn containment_examples() {
        let d = ConvexBody::Disk(Disk::new(c(1.0, 0.0), 0.5).unwrap());
        assert!(contains_point(&d, c(1.4, 0.0), EPS));
        let tri = ConvexBody::Polygon(convex_hull(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)]).unwrap());
        assert!(!contains_point(&tri, c(0.6, 0.6), EPS));
        let s = ConvexBody::Segment(Segment::new(c(1.0, -1.0), c(1.0, 1.0)));
        assert!(contains_point(&s, c(1.0, 0.0), EPS));
    }

    #[test]
    fn piece_evaluation() {
        let arc = BoundaryPiece::ParaArc { scale: c(1.0, 0.0), s_lo: 0.0, s_hi: 1.0 };
        assert!((eval_boundary_piece(&arc, 1.0).unwrap() - c(0.0, 2.0)).norm() < 1e-12);
        let arc = BoundaryPiece::ParaArc { scale: c(1.0, 0.0), s_lo: -1.0, s_hi: 1.0 };
        assert!((eval_boundary_piece(&arc, 0.5).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        let seg = BoundaryPiece::LineSeg(Segment::new(c(0.0, 0.0), c(2.0, 0.0)));
        assert!((eval_boundary_piece(&seg, 0.25).unwrap() - c(0.5, 0.0)).norm() < 1e-12);
        assert!(eval_boundary_piece(&seg, 1.5).is_err());
    }

    #[test]
    fn segment_polygon_round_trip() {
        let s = Segment::new(c(1.0, 2.0), c(-1.0, 0.5));
        let body = ConvexBody::Segment(s);
        let poly = body.as_polygon().unwrap();
        let back = ConvexBody::Polygon(poly).as_segment().unwrap();
        let same = (back.p == s.p && back.q == s.q) || (back.p == s.q && back.q == s.p);
        assert!(same);
    }

    fn pt() -> impl Strategy<Value = CScalar> {
        (-5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y)| c(x, y))
    }

    proptest! {
        #[test]
        fn hull_is_idempotent(pts in prop::collection::vec(pt(), 1..30)) {
            let h = convex_hull(&pts).unwrap();
            let h2 = convex_hull(h.vertices()).unwrap();
            prop_assert_eq!(h.vertices().len(), h2.vertices().len());
            for (a, b) in h.vertices().iter().zip(h2.vertices()) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }

        #[test]
        fn hull_contains_inputs(pts in prop::collection::vec(pt(), 1..30)) {
            let body = ConvexBody::Polygon(convex_hull(&pts).unwrap());
            for z in &pts {
                prop_assert!(contains_point(&body, *z, 1e-8));
            }
        }

        #[test]
        fn para_arc_lies_on_parabola(w in pt(), lo in -3.0..3.0f64, len in 0.0..3.0f64, t in 0.0..=1.0f64) {
            prop_assume!(w.norm() > 1e-3);
            let arc = BoundaryPiece::ParaArc { scale: w, s_lo: lo, s_hi: lo + len };
            let z = eval_boundary_piece(&arc, t).unwrap() / w;
            prop_assert!((z.re - (1.0 - z.im * z.im / 4.0)).abs() < 1e-9 * (1.0 + z.norm()));
        }

        #[test]
        fn containment_matches_distance(pts in prop::collection::vec(pt(), 3..10), z in pt()) {
            let body = ConvexBody::Polygon(convex_hull(&pts).unwrap());
            let d = body.distance(z);
            prop_assert_eq!(contains_point(&body, z, 1e-9), d <= 1e-9);
        }
    }
}
