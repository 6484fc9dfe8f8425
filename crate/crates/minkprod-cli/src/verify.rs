//! Reference scenarios run by `minkprod verify`.

use std::f64::consts::PI;

use minkprod::disk::{segment_disk_inequality_slack, star_center_disk_subset, star_center_segment_disk};
use minkprod::geom::{c, cis, convex_hull, BoundaryPiece, CScalar, ConvexBody, ConvexPolygon, Disk, Segment};
use minkprod::membership::{check_star_center_tol, member_exact, raster_union, Verdict};
use minkprod::polyprod::{
    arc_exclusion, check_star_polygon_product, star_center_symmetric_triangle, Candidates, Exclusion,
};
use minkprod::segseg::{product_seg_seg, star_centers_general_position, SegCase, StarCenterSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::CliError;

pub const SCENARIOS: [&str; 8] = [
    "triangle-square",
    "quad-square",
    "seg-cases",
    "overlap-centers",
    "symmetric-triangles",
    "segment-disk",
    "disk-subset",
    "disk-hole",
];

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub tol: f64,
    pub grid: usize,
    pub samples: usize,
    pub seed: u64,
}

/// One measured quantity against its expectation.
#[derive(Debug, Clone)]
pub struct Check {
    pub label: String,
    pub measured: String,
    pub expected: String,
    pub pass: bool,
}

fn check(label: impl Into<String>, measured: impl Into<String>, expected: impl Into<String>, pass: bool) -> Check {
    Check { label: label.into(), measured: measured.into(), expected: expected.into(), pass }
}

fn poly(pts: &[CScalar]) -> ConvexPolygon {
    convex_hull(pts).expect("finite vertices")
}

fn canonical(lo: f64, hi: f64) -> Segment {
    Segment::new(c(1.0, lo), c(1.0, hi))
}

pub fn triangle() -> ConvexPolygon {
    poly(&[cis(PI / 3.0), cis(-PI / 3.0), cis(PI / 4.0) * 0.95])
}

pub fn quadrilateral() -> ConvexPolygon {
    poly(&[cis(PI / 3.0), cis(-PI / 3.0), cis(PI / 4.0) * 0.95, cis(-PI / 4.0) * 0.95])
}

/// The two segments from 1 whose product with `D(1, 1/2)` has a hole.
pub fn hole_pieces() -> Vec<ConvexBody> {
    let tip = cis(11.0 * PI / 12.0) * 2.0;
    vec![Segment::new(c(1.0, 0.0), tip).into(), Segment::new(c(1.0, 0.0), tip.conj()).into()]
}

pub fn run(id: &str, s: &Settings) -> Result<Vec<Check>, CliError> {
    match id {
        "triangle-square" => triangle_square(s),
        "quad-square" => quad_square(),
        "seg-cases" => seg_cases(s),
        "overlap-centers" => overlap_centers(s),
        "symmetric-triangles" => symmetric_triangles(s),
        "segment-disk" => segment_disk(s),
        "disk-subset" => disk_subset(s),
        "disk-hole" => disk_hole(s),
        _ => Err(CliError::Input(format!("unknown scenario {id}; expected one of {}", SCENARIOS.join(", ")))),
    }
}

fn triangle_square(s: &Settings) -> Result<Vec<Check>, CliError> {
    let k = triangle();
    let body = ConvexBody::Polygon(k.clone());
    let report = check_star_polygon_product(&k, &k, &Candidates::Auto)?;
    let mut out = vec![check(
        "verdict",
        format!("{:?}", report.verdict),
        "NotStarShaped",
        report.verdict == Verdict::NotStarShaped,
    )];
    if let Some(w) = report.witness {
        let p = w.point();
        out.push(check(
            "witness",
            format!("segment {} -> {} exits at t = {:.4}, point {:.6}", w.from, w.to, w.t, p),
            "non-member",
            !member_exact(&body, &body, p, s.tol),
        ));
    }
    for t in [0.1, 0.2, 0.3] {
        let z = c(1.0 - t, 0.9025 * t);
        let inside = member_exact(&body, &body, z, s.tol);
        out.push(check(format!("member at t = {t}"), inside.to_string(), "false", !inside));
    }
    let iso = arc_exclusion(&k, &k);
    let (m, pass) = match iso {
        Exclusion::Isolated { point, radius } => {
            (format!("isolated {point:.9} radius {radius:.2e}"), (point - 1.0).norm() + radius <= 1e-6)
        }
        other => (format!("{other:?}"), false),
    };
    out.push(check("arc tangents isolate", m, "1 within 1e-6", pass));
    Ok(out)
}

fn quad_square() -> Result<Vec<Check>, CliError> {
    let k = quadrilateral();
    let report = check_star_polygon_product(&k, &k, &Candidates::Auto)?;
    let mut out = vec![check(
        "verdict",
        format!("{:?}", report.verdict),
        "NotStarShaped",
        report.verdict == Verdict::NotStarShaped,
    )];
    if let Some(w) = report.witness {
        out.push(check("witness", format!("segment {} -> {} exits at t = {:.4}", w.from, w.to, w.t), "exit", true));
    }
    Ok(out)
}

fn seg_cases(s: &Settings) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    let a = product_seg_seg(&canonical(-1.0, 0.0), &canonical(1.0, 2.0));
    out.push(check("disjoint intervals", format!("{:?}", a.case_tag), "QuadA", a.case_tag == SegCase::QuadA));

    let (a1, a2, b1, b2) = (-1.0, 1.0, 0.0, 2.0);
    let b = product_seg_seg(&canonical(a1, a2), &canonical(b1, b2));
    out.push(check("overlapping intervals", format!("{:?}", b.case_tag), "CaseB", b.case_tag == SegCase::CaseB));
    match b.para_arc() {
        Some(arc @ BoundaryPiece::ParaArc { .. }) => {
            let (e0, e1) = (c(1.0, b1) * c(1.0, b1), c(1.0, a2) * c(1.0, a2));
            let err = (arc.start() - e0).norm().max((arc.end() - e1).norm());
            out.push(check(
                "arc endpoints",
                format!("{:.12} .. {:.12}", arc.start(), arc.end()),
                format!("{e0} .. {e1}"),
                err <= 1e-9,
            ));
        }
        _ => out.push(check("arc endpoints", "missing", "parabolic arc", false)),
    }

    let (s1, s2) = (canonical(-2.0, 2.0), canonical(-1.0, 1.0));
    let cc = product_seg_seg(&s1, &s2);
    out.push(check("nested intervals", format!("{:?}", cc.case_tag), "CaseC", cc.case_tag == SegCase::CaseC));
    let expected = c(1.0, -1.0) * c(1.0, 1.0);
    let center = match cc.star_centers {
        StarCenterSet::Point(p) => p,
        _ => c(f64::NAN, f64::NAN),
    };
    out.push(check("center", format!("{center:.12}"), format!("{expected}"), (center - expected).norm() <= 1e-9));
    let sc = check_star_center_tol(&s1.into(), &s2.into(), center, s.samples, 64, s.tol)?;
    out.push(check("center verified", sc.ok.to_string(), "true", sc.ok));
    Ok(out)
}

fn overlap_centers(s: &Settings) -> Result<Vec<Check>, CliError> {
    let (s1, s2) = (canonical(-1.0, 1.0), canonical(0.0, 2.0));
    let centers = star_centers_general_position(&s1, &s2)?;
    let StarCenterSet::Convex(q) = centers else {
        return Ok(vec![check("center set", format!("{centers:?}"), "quadrilateral", false)]);
    };
    let (k1, k2) = (s1.into(), s2.into());
    let mut out = vec![check("vertices", q.len().to_string(), "4", q.len() == 4)];
    for v in q.vertices() {
        let ok = check_star_center_tol(&k1, &k2, *v, s.samples, 64, s.tol)?.ok;
        out.push(check(format!("vertex {v:.6}"), ok.to_string(), "true", ok));
    }
    Ok(out)
}

fn symmetric_triangles(s: &Settings) -> Result<Vec<Check>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut out = Vec::new();
    for _ in 0..5 {
        let r = rng.gen_range(0.0..1.0);
        let a = cis(rng.gen_range(0.2..1.3)) * rng.gen_range(0.6..1.5);
        let center = star_center_symmetric_triangle(r, a)?;
        let t = ConvexBody::Polygon(poly(&[c(r, 0.0), a, a.conj()]));
        let ok = check_star_center_tol(&t, &t, center, s.samples, 64, s.tol)?.ok;
        out.push(check(
            format!("r = {r:.3}, a = {a:.3}"),
            format!("center {center:.6} verified {ok}"),
            "|a|^2 verified",
            ok,
        ));
    }
    Ok(out)
}

fn segment_disk(s: &Settings) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for (b, r) in [(c(1.0, 2.0), 0.5), (c(2.0, 0.0), 1.0), (c(1.0, 0.1), 0.25)] {
        let cert = star_center_segment_disk(b, r)?;
        let seg = ConvexBody::Segment(Segment::new(c(1.0, 0.0), b));
        let disk = ConvexBody::Disk(Disk::new(c(1.0, 0.0), r)?);
        let ok = check_star_center_tol(&seg, &disk, c(1.0, 0.0), s.samples, 64, s.tol)?.ok;
        let slack = segment_disk_inequality_slack(b, r, 100);
        out.push(check(
            format!("b = {b}, r = {r}"),
            format!("center 1 verified {ok}, inequality slack {slack:.3e}"),
            "verified, slack <= 1e-12",
            ok && cert.verified && slack <= 1e-12,
        ));
    }
    Ok(out)
}

fn disk_subset(s: &Settings) -> Result<Vec<Check>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut out = Vec::new();
    for _ in 0..5 {
        let mu = cis(rng.gen_range(-PI..PI)) * rng.gen_range(0.5..2.0);
        let big_r = mu.norm() * rng.gen_range(0.05..0.95);
        let pts: Vec<CScalar> =
            (0..12).map(|_| mu + cis(rng.gen_range(-PI..PI)) * big_r * rng.gen_range(0.0f64..1.0).sqrt()).collect();
        let cert = star_center_disk_subset(mu, big_r, &pts)?;
        out.push(check(
            format!("mu = {mu:.3}, R = {big_r:.3}"),
            format!("center {:.6} verified {}", cert.center_claimed, cert.verified),
            "verified",
            cert.verified,
        ));
    }
    Ok(out)
}

fn disk_hole(s: &Settings) -> Result<Vec<Check>, CliError> {
    let disk = ConvexBody::Disk(Disk::new(c(1.0, 0.0), 0.5)?);
    let pairs: Vec<_> = hole_pieces().into_iter().map(|p| (p, disk.clone())).collect();
    let holes = raster_union(&pairs, s.grid, s.grid, s.seed).enclosed_empty_components().len();
    let convex = ConvexBody::Polygon(poly(&[c(1.0, 0.0), c(1.0, 1.0), c(2.0, 0.0)]));
    let none = raster_union(&[(convex, disk)], s.grid, s.grid, s.seed).enclosed_empty_components().len();
    Ok(vec![
        check("holes in the segment pair product", holes.to_string(), ">= 1", holes >= 1),
        check("holes in the convex product", none.to_string(), "0", none == 0),
    ])
}
