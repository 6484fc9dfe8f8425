//! Star-shapedness of products of convex polygons and of several factors.
//!
//! A point `p` of `P1 P2` is a star center iff the segments from `p` to all
//! products of vertices stay inside. Refuting star-shapedness needs more than
//! failed candidates: a star center must lie on the inner side of the tangent
//! line at every smooth boundary point of the product, so the tangent
//! half-planes at sampled boundary points bound where a center can be. When
//! that region is empty or shrinks to a point that fails, the product is not
//! star-shaped.

use rayon::prelude::*;

use crate::disk::star_center_disk_subset;
use crate::error::{Error, Result};
use crate::geom::{c, convex_hull, BoundaryPiece, CScalar, ConvexBody, ConvexPolygon, Segment};
use crate::membership::{
    check_star_center, first_exit, member_exact, vertex_pair_exit, SegmentExit, StarReport, Verdict, DEFAULT_TOL,
};
use crate::segseg::product_seg_seg;

/// Where the candidate centers come from.
#[derive(Debug, Clone, PartialEq)]
pub enum Candidates {
    /// Vertex products, a 33 x 33 grid over their hull, centers of edge-pair
    /// products and points of the tangent-constraint region.
    Auto,
    Explicit(Vec<CScalar>),
}

/// A tangent half-plane `Re(conj(normal) (z - at)) <= 0` that every star
/// center satisfies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentConstraint {
    pub at: CScalar,
    /// Outward unit normal of the product at `at`.
    pub normal: CScalar,
}

impl TangentConstraint {
    pub fn violation(&self, z: CScalar) -> f64 {
        (self.normal.conj() * (z - self.at)).re
    }
}

fn edges_or_point(p: &ConvexPolygon) -> Vec<Segment> {
    let e = p.edges();
    if e.is_empty() {
        p.vertices().iter().map(|&v| Segment::new(v, v)).collect()
    } else {
        e
    }
}

fn product_scale(p1: &ConvexPolygon, p2: &ConvexPolygon) -> f64 {
    let m = |p: &ConvexPolygon| p.vertices().iter().map(|v| v.norm()).fold(0.0, f64::max);
    (m(p1) * m(p2)).max(f64::MIN_POSITIVE)
}

/// Tangent constraints at `per_piece` points (endpoints included) of every
/// boundary piece of every edge-pair product, kept where the point is on the
/// boundary of the whole product. With `arcs_only`, only parabolic pieces
/// contribute. An endpoint inherits the boundary test of a point just
/// inside its piece, since its tangent is the limit of theirs.
pub fn tangent_constraints(
    p1: &ConvexPolygon,
    p2: &ConvexPolygon,
    per_piece: usize,
    arcs_only: bool,
) -> Vec<TangentConstraint> {
    let (b1, b2) = (ConvexBody::Polygon(p1.clone()), ConvexBody::Polygon(p2.clone()));
    let scale = product_scale(p1, p2);
    let delta = 1e-6 * scale;
    let tol = 1e-10 * scale;
    let member = |z: CScalar| member_exact(&b1, &b2, z, tol);
    let per_piece = per_piece.max(2);
    let pieces: Vec<_> = edges_or_point(p1)
        .iter()
        .flat_map(|e1| edges_or_point(p2).into_iter().map(move |e2| product_seg_seg(e1, &e2).boundary))
        .flatten()
        .filter(|p| !arcs_only || matches!(p, BoundaryPiece::ParaArc { .. }))
        .collect();
    pieces
        .par_iter()
        .flat_map_iter(|piece| {
            (0..per_piece).filter_map(move |k| {
                let t = k as f64 / (per_piece - 1) as f64;
                let tangent = piece.tangent(t);
                if tangent.norm() <= 1e-12 * scale {
                    return None;
                }
                let tb = t.clamp(1e-3, 1.0 - 1e-3);
                let nb = c(0.0, 1.0) * piece.tangent(tb) / piece.tangent(tb).norm();
                let qb = piece.at(tb);
                let n = c(0.0, 1.0) * tangent / tangent.norm();
                match (member(qb + nb * delta), member(qb - nb * delta)) {
                    (false, true) => Some(TangentConstraint { at: piece.at(t), normal: n }),
                    (true, false) => Some(TangentConstraint { at: piece.at(t), normal: -n }),
                    _ => None,
                }
            })
        })
        .collect()
}

/// Clips a convex polygon (counter-clockwise vertex list) to
/// `Re(conj(normal) z) <= offset`.
fn clip(poly: &[CScalar], normal: CScalar, offset: f64) -> Vec<CScalar> {
    let side = |z: CScalar| (normal.conj() * z).re - offset;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for (i, &p) in poly.iter().enumerate() {
        let q = poly[(i + 1) % poly.len()];
        let (sp, sq) = (side(p), side(q));
        if sp <= 0.0 {
            out.push(p);
        }
        if (sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0) {
            out.push(p + (q - p) * (sp / (sp - sq)));
        }
    }
    out
}

/// The region allowed for star centers by the constraints, each relaxed by
/// `slack`, inside the hull of the vertex products. Empty when no point
/// survives.
pub fn constraint_region(
    p1: &ConvexPolygon,
    p2: &ConvexPolygon,
    cons: &[TangentConstraint],
    slack: f64,
) -> Vec<CScalar> {
    let prods: Vec<CScalar> = p1.vertices().iter().flat_map(|a| p2.vertices().iter().map(move |b| a * b)).collect();
    let hull = convex_hull(&prods).expect("nonempty");
    let mut region = hull.vertices().to_vec();
    if region.len() < 3 {
        return region;
    }
    for k in cons {
        region = clip(&region, k.normal, (k.normal.conj() * k.at).re + slack);
        if region.is_empty() {
            break;
        }
    }
    region
}

fn centroid(pts: &[CScalar]) -> CScalar {
    pts.iter().sum::<CScalar>() / pts.len() as f64
}

fn diameter(pts: &[CScalar]) -> f64 {
    pts.iter().flat_map(|a| pts.iter().map(move |b| (a - b).norm())).fold(0.0, f64::max)
}

/// Outcome of the exclusion argument.
#[derive(Debug, Clone, PartialEq)]
pub enum Exclusion {
    /// No point satisfies the constraints.
    Empty,
    /// Every star center lies within `radius` of `point`.
    Isolated { point: CScalar, radius: f64 },
    /// The constraints leave a region of positive size.
    Open(Vec<CScalar>),
}

fn classify_region(region: Vec<CScalar>, scale: f64) -> Exclusion {
    if region.is_empty() {
        Exclusion::Empty
    } else if diameter(&region) <= 1e-4 * scale {
        Exclusion::Isolated { point: centroid(&region), radius: diameter(&region) }
    } else {
        Exclusion::Open(region)
    }
}

/// Where star centers can be, from the tangents of all boundary pieces.
pub fn exclusion(p1: &ConvexPolygon, p2: &ConvexPolygon) -> (Exclusion, Vec<TangentConstraint>) {
    let scale = product_scale(p1, p2);
    let cons = tangent_constraints(p1, p2, 65, false);
    (classify_region(constraint_region(p1, p2, &cons, 1e-7 * scale), scale), cons)
}

/// Same as [`exclusion`] using only the parabolic boundary arcs, whose
/// tangents bound the candidates from the side of 0.
pub fn arc_exclusion(p1: &ConvexPolygon, p2: &ConvexPolygon) -> Exclusion {
    let scale = product_scale(p1, p2);
    let cons = tangent_constraints(p1, p2, 65, true);
    classify_region(constraint_region(p1, p2, &cons, 1e-7 * scale), scale)
}

/// The vertex product that violates the constraints least.
fn least_violating(p1: &ConvexPolygon, p2: &ConvexPolygon, cons: &[TangentConstraint]) -> CScalar {
    let worst = |z: &CScalar| cons.iter().map(|k| k.violation(*z)).fold(f64::NEG_INFINITY, f64::max);
    let prods: Vec<CScalar> = p1.vertices().iter().flat_map(|a| p2.vertices().iter().map(move |b| a * b)).collect();
    prods.into_iter().min_by(|a, b| worst(a).total_cmp(&worst(b))).expect("nonempty")
}

fn member_or_self(k1: &ConvexBody, k2: &ConvexBody, p: CScalar) -> Option<SegmentExit> {
    (!member_exact(k1, k2, p, DEFAULT_TOL)).then_some(SegmentExit { from: p, to: p, t: 0.0 })
}

/// Tests `p` as a center with the vertex-pair criterion.
pub fn test_center(k1: &ConvexBody, k2: &ConvexBody, p: CScalar) -> Option<SegmentExit> {
    member_or_self(k1, k2, p).or_else(|| vertex_pair_exit(k1, k2, p, DEFAULT_TOL))
}

/// Candidate centers generated from the factors.
pub fn auto_candidates(p1: &ConvexPolygon, p2: &ConvexPolygon) -> Vec<CScalar> {
    let prods: Vec<CScalar> = p1.vertices().iter().flat_map(|a| p2.vertices().iter().map(move |b| a * b)).collect();
    let mut out = prods.clone();
    for e1 in edges_or_point(p1) {
        for e2 in edges_or_point(p2) {
            out.extend(product_seg_seg(&e1, &e2).star_centers.sample_points());
        }
    }
    let hull = ConvexBody::Polygon(convex_hull(&prods).expect("nonempty"));
    let (x0, x1, y0, y1) = hull.bbox();
    for i in 0..33 {
        for j in 0..33 {
            let z = c(x0 + (x1 - x0) * (i as f64 + 0.5) / 33.0, y0 + (y1 - y0) * (j as f64 + 0.5) / 33.0);
            if hull.contains(z, 0.0) {
                out.push(z);
            }
        }
    }
    out
}

/// Decides star-shapedness of `P1 P2` where it can.
///
/// `StarShaped` comes with a center that passed the vertex-pair test.
/// `NotStarShaped` is only returned when the tangent constraints leave no
/// room for a center, or isolate a point whose failure is deeper than the
/// room left.
pub fn check_star_polygon_product(
    p1: &ConvexPolygon,
    p2: &ConvexPolygon,
    candidates: &Candidates,
) -> Result<StarReport> {
    if p1.is_empty() || p2.is_empty() {
        return Err(Error::InvalidInput("empty polygon".into()));
    }
    if let Candidates::Explicit(v) = candidates {
        if v.is_empty() {
            return Err(Error::InvalidInput("no candidates".into()));
        }
    }
    let (b1, b2) = (ConvexBody::Polygon(p1.clone()), ConvexBody::Polygon(p2.clone()));
    let scale = product_scale(p1, p2);
    let (ex, cons) = exclusion(p1, p2);
    let mut tested = 0;
    match &ex {
        Exclusion::Empty => {
            let p = least_violating(p1, p2, &cons);
            tested += 1;
            return Ok(match test_center(&b1, &b2, p) {
                Some(w) => StarReport {
                    verdict: Verdict::NotStarShaped,
                    center: None,
                    witness: Some(w),
                    candidates_tested: tested,
                    convex: false,
                },
                // A passing point means the constraints were too strict.
                None => StarReport::star(p, tested),
            });
        }
        Exclusion::Isolated { point, radius } => {
            tested += 1;
            match test_center(&b1, &b2, *point) {
                None => return Ok(StarReport::star(*point, tested)),
                Some(w) => {
                    let deep = !member_exact(&b1, &b2, w.point(), 2.0 * radius + 1e-7 * scale);
                    let verdict = if deep { Verdict::NotStarShaped } else { Verdict::Unknown };
                    return Ok(StarReport {
                        verdict,
                        center: None,
                        witness: deep.then_some(w),
                        candidates_tested: tested,
                        convex: false,
                    });
                }
            }
        }
        Exclusion::Open(_) => {}
    }
    let mut list = match candidates {
        Candidates::Explicit(v) => v.clone(),
        Candidates::Auto => {
            let mut v = auto_candidates(p1, p2);
            if let Exclusion::Open(region) = &ex {
                v.push(centroid(region));
                v.extend(region.iter().map(|z| z * 0.9 + centroid(region) * 0.1));
            }
            v
        }
    };
    // Points outside the allowed region cannot be centers.
    let slack = 1e-7 * scale;
    list.retain(|z| cons.iter().all(|k| k.violation(*z) <= slack));
    for p in list {
        tested += 1;
        if test_center(&b1, &b2, p).is_none() {
            return Ok(StarReport::star(p, tested));
        }
    }
    Ok(StarReport::unknown(tested))
}

/// Smallest and largest `r` with `r e^{i theta}` in `P1 P2`, over `samples`
/// radii up to the largest vertex product. `None` if the ray misses.
pub fn radial_extent(p1: &ConvexPolygon, p2: &ConvexPolygon, theta: f64, samples: usize) -> Option<(f64, f64)> {
    let (b1, b2) = (ConvexBody::Polygon(p1.clone()), ConvexBody::Polygon(p2.clone()));
    let rmax = product_scale(p1, p2);
    let dir = crate::geom::cis(theta);
    let hits: Vec<f64> = (0..=samples)
        .map(|k| rmax * k as f64 / samples as f64)
        .filter(|&r| member_exact(&b1, &b2, dir * r, 1e-12))
        .collect();
    Some((*hits.first()?, *hits.last()?))
}

/// Center `|a|^2` of `T T` for the triangle `T = K(r, a, conj(a))`, checked
/// with the vertex-pair test.
pub fn star_center_symmetric_triangle(r: f64, a: CScalar) -> Result<CScalar> {
    if a.im == 0.0 {
        return Err(Error::InvalidInput("a must not be real".into()));
    }
    let t = ConvexBody::Polygon(ConvexPolygon::new(&[c(r, 0.0), a, a.conj()])?);
    let center = c(a.norm_sqr(), 0.0);
    match test_center(&t, &t, center) {
        None => Ok(center),
        Some(w) => Err(Error::InternalInconsistency(format!("segment to {} leaves at t = {}", w.to, w.t))),
    }
}

fn union_member(pieces: &[ConvexBody], z: CScalar, tol: f64) -> bool {
    pieces.iter().any(|p| p.contains(z, tol))
}

/// 0 as a center of `S1 S2` when `S1`, a union of convex pieces, is
/// star-shaped about 0. Both the hypothesis and the segments `K(0, p1 p2)`
/// are checked on samples.
pub fn zero_center_product(s1: &[ConvexBody], s2: &[ConvexBody]) -> Result<CScalar> {
    if s1.is_empty() || s2.is_empty() {
        return Err(Error::InvalidInput("empty set".into()));
    }
    let zero = c(0.0, 0.0);
    let a: Vec<CScalar> = s1.iter().flat_map(|p| p.interior_points(16)).collect();
    let b: Vec<CScalar> = s2.iter().flat_map(|p| p.interior_points(16)).collect();
    let scale = a.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let in_s1 = |z: CScalar| union_member(s1, z, 1e-9 * scale);
    if let Some(p) = a.iter().find(|&&p| first_exit(&in_s1, zero, p, 64).is_some() || !in_s1(zero)) {
        return Err(Error::InvalidInput(format!("first set is not star-shaped about 0 (towards {p})")));
    }
    let pairs: Vec<(&ConvexBody, &ConvexBody)> = s1.iter().flat_map(|x| s2.iter().map(move |y| (x, y))).collect();
    let member = |z: CScalar| pairs.iter().any(|(x, y)| member_exact(x, y, z, DEFAULT_TOL));
    let bad = a
        .par_iter()
        .find_map_first(|&p| b.iter().find_map(|&q| first_exit(&member, zero, p * q, 32).map(|t| (p, q, t))));
    match bad {
        None => Ok(zero),
        Some((p, q, t)) => Err(Error::InternalInconsistency(format!("K(0, {p} {q}) leaves at t = {t}"))),
    }
}

fn product_samples(factors: &[&ConvexBody], per: usize) -> Vec<CScalar> {
    let mut acc = vec![c(1.0, 0.0)];
    for f in factors {
        let pts = f.boundary_points(per);
        acc = acc.iter().flat_map(|x| pts.iter().map(move |y| x * y)).collect();
        if acc.len() > 4096 {
            acc = convex_hull(&acc).map(|h| h.vertices().to_vec()).unwrap_or(acc);
        }
    }
    acc
}

/// Minimizes a convex function over a square by nested golden-section search.
fn minimize_convex_2d(f: &(dyn Fn(CScalar) -> f64 + Sync), center: CScalar, half: f64) -> CScalar {
    let golden = |g: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64| {
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..90 {
            let m1 = hi - phi * (hi - lo);
            let m2 = lo + phi * (hi - lo);
            if g(m1) <= g(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        0.5 * (lo + hi)
    };
    let best_y = |x: f64| golden(&|y| f(c(x, y)), center.im - half, center.im + half);
    let x = golden(&|x| f(c(x, best_y(x))), center.re - half, center.re + half);
    c(x, best_y(x))
}

/// Star center of `K1 K2 ... Ks` from a factor containing 0, or from a disk
/// factor that absorbs a multiple of the other factors.
pub fn multi_product_star_center(factors: &[ConvexBody]) -> Result<StarReport> {
    if factors.len() < 2 {
        return Err(Error::InvalidInput("need at least two factors".into()));
    }
    let zero = c(0.0, 0.0);
    if factors.iter().any(|f| f.contains(zero, 0.0)) {
        return Ok(StarReport::star(zero, 1));
    }
    let mut tested = 0;
    for (i, f) in factors.iter().enumerate() {
        let ConvexBody::Disk(d) = f else { continue };
        let rest: Vec<&ConvexBody> = factors.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g).collect();
        let mu1 = 1.0 / d.center;
        let r = d.radius / d.center.norm();
        // Disk absorbs a multiple of the rest: nu x in D(1, r) for all x.
        let xs = product_samples(&rest, 48);
        let fit = |nu: CScalar| xs.iter().map(|x| (nu * x - 1.0).norm()).fold(0.0, f64::max);
        let xmax = xs.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let half = (1.0 + r) / xmax;
        let nu = minimize_convex_2d(&fit, zero, half);
        tested += 1;
        let dense = product_samples(&rest, 256);
        if dense.iter().all(|x| (nu * x - 1.0).norm() <= r * (1.0 + 1e-9)) {
            let scaled: Vec<CScalar> = dense.iter().map(|x| nu * x).collect();
            let cert = star_center_disk_subset(c(1.0, 0.0), r, &scaled)?;
            if cert.verified {
                return Ok(StarReport::star(cert.center_claimed / (mu1 * nu), tested));
            }
        }
        if rest.len() == 1 {
            let k = rest[0];
            let q = k.closest_point(zero);
            if q.norm() > 0.0 {
                tested += 1;
                let center = q * d.center;
                if check_star_center(f, k, center, 720, 64)?.ok {
                    return Ok(StarReport::star(center, tested));
                }
            }
        }
    }
    Ok(StarReport::unknown(tested))
}
