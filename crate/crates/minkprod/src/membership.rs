//! Product membership: an exact engine built on inversion, a brute-force
//! raster oracle, and the sampled star-center check built on top of them.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::disk::member_disk_body;
use crate::error::{Error, Result};
use crate::geom::{c, cis, convex_hull, cross, BoundaryPiece, CScalar, ConvexBody, ConvexPolygon, Segment, EPS};
use crate::segseg::member_seg_seg;

/// Tolerance used by the star checks unless the caller passes one.
pub const DEFAULT_TOL: f64 = 1e-7;

/// Whether `z` lies within about `tol` of `k1 * k2`.
///
/// Both segments use the closed-form segment product, any disk factor uses
/// the Apollonius reduction, and everything else the inversion test below.
///
/// ```
/// use minkprod::geom::{c, ConvexBody, Segment};
/// use minkprod::membership::member_exact;
/// let k = ConvexBody::Segment(Segment::new(c(1.0, -1.0), c(1.0, 1.0)));
/// assert!(member_exact(&k, &k, c(2.0, 0.0), 1e-9));
/// ```
pub fn member_exact(k1: &ConvexBody, k2: &ConvexBody, z: CScalar, tol: f64) -> bool {
    // The product's distance from 0 is the product of the factors' distances.
    let near_zero = k1.min_modulus() * k2.min_modulus();
    if z.norm() + near_zero <= tol {
        return true;
    }
    if let (Some(s1), Some(s2)) = (k1.as_segment(), k2.as_segment()) {
        return member_seg_seg(&s1, &s2, z, tol);
    }
    match (k1, k2) {
        (ConvexBody::Disk(d), other) | (other, ConvexBody::Disk(d)) => member_disk_body(d, other, z, tol),
        _ => {
            let p1 = k1.as_polygon().expect("polygonal");
            let p2 = k2.as_polygon().expect("polygonal");
            member_polygonal(&p1, &p2, z, tol)
        }
    }
}

/// Does some `a` in `p1` have `z / a` in `p2`? With `R = z / p2`, the
/// convex set `p1` meets `R` iff a vertex of one lies in the other or an edge
/// of `p1` crosses one of the circular arcs bounding `R`. Every candidate is
/// confirmed by an explicit factorization with `|ab - z| <= tol`.
fn member_polygonal(p1: &ConvexPolygon, p2: &ConvexPolygon, z: CScalar, tol: f64) -> bool {
    let b1 = ConvexBody::Polygon(p1.clone());
    let b2 = ConvexBody::Polygon(p2.clone());
    let certify = |a: CScalar, target: &ConvexBody| -> bool {
        if a.norm() == 0.0 {
            return z.norm() <= tol;
        }
        let b = target.closest_point(z / a);
        (a * b - z).norm() <= tol
    };
    if p1.vertices().iter().any(|&a| certify(a, &b2)) || p2.vertices().iter().any(|&b| certify(b, &b1)) {
        return true;
    }
    for e1 in p1.edges() {
        for e2 in p2.edges() {
            let e2_body = ConvexBody::Segment(e2);
            if arc_crossings(&e1, &e2, z).into_iter().any(|s| certify(e1.point_at(s), &e2_body)) {
                return true;
            }
        }
    }
    false
}

/// Parameters `s` in `[0, 1]` where `e1(s)` meets the image of the line
/// through `e2` under `b -> z / b`, plus the point of closest approach so
/// that tangential contacts survive rounding.
fn arc_crossings(e1: &Segment, e2: &Segment, z: CScalar) -> Vec<f64> {
    let dir = e2.q - e2.p;
    if dir.norm() == 0.0 {
        return Vec::new();
    }
    // Line through e2: Re(conj(m) b) = h with m a unit normal.
    let m = Complex64::i() * dir / dir.norm();
    let h = (m.conj() * e2.p).re;
    let w = m.conj() * z;
    let (a0, a1) = (e1.p, e1.q - e1.p);
    // h |a|^2 - Re(w conj(a)) = 0 along a = a0 + s a1.
    let qa = h * a1.norm_sqr();
    let qb = 2.0 * h * (a0 * a1.conj()).re - (w * a1.conj()).re;
    let qc = h * a0.norm_sqr() - (w * a0.conj()).re;
    let mut out = Vec::with_capacity(3);
    let scale = qa.abs().max(qb.abs()).max(qc.abs());
    if qa.abs() <= 1e-14 * scale {
        if qb != 0.0 {
            out.push(-qc / qb);
        }
    } else {
        let vertex = -qb / (2.0 * qa);
        out.push(vertex);
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            // Stable pair of roots.
            let q = -0.5 * (qb + qb.signum() * sq);
            if q != 0.0 {
                out.push(q / qa);
                out.push(qc / q);
            } else {
                out.push(vertex);
            }
        }
    }
    out.into_iter().filter(|s| s.is_finite()).map(|s| s.clamp(0.0, 1.0)).collect()
}

/// The region `z / K2` for a polygonal `K2` avoiding 0, bounded by the
/// images of its edges: circle arcs through 0's preimage at infinity, or
/// straight pieces when an edge's line passes through 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcRegion {
    pub z: CScalar,
    pub factor: ConvexPolygon,
    pub boundary: Vec<BoundaryPiece>,
}

impl ArcRegion {
    /// `a` is in `z / K2` iff `z / a` is in `K2`.
    pub fn contains(&self, a: CScalar, tol: f64) -> bool {
        if a.norm() == 0.0 {
            return false;
        }
        ConvexBody::Polygon(self.factor.clone()).contains(self.z / a, tol)
    }
}

/// Circle through three points, `None` when they are collinear.
pub fn circle_through(p: CScalar, q: CScalar, r: CScalar) -> Option<(CScalar, f64)> {
    let (u, v) = (q - p, r - p);
    let d = 2.0 * cross(u, v);
    if d.abs() <= 1e-15 * u.norm_sqr().max(v.norm_sqr()) {
        return None;
    }
    let cu = u.norm_sqr();
    let cv = v.norm_sqr();
    let center = p + c(v.im * cu - u.im * cv, u.re * cv - v.re * cu) / d;
    Some((center, (center - p).norm()))
}

/// Image of the edge `[b1, b2]` under `b -> z / b`. A line at signed distance
/// `h` from 0 with unit normal `m` maps to the circle through 0 with center
/// `conj(m) z / (2h)`.
pub fn invert_edge(e: &Segment, z: CScalar) -> BoundaryPiece {
    let (s, t) = (z / e.p, z / e.q);
    let dir = e.q - e.p;
    let m = Complex64::i() * dir / dir.norm();
    let h = (m.conj() * e.p).re;
    if h.abs() <= EPS * e.p.norm().max(e.q.norm()) {
        return BoundaryPiece::LineSeg(Segment::new(s, t));
    }
    let center = m.conj() * z / (2.0 * h);
    let radius = center.norm();
    let th_s = (s - center).arg();
    let th_e = (t - center).arg();
    let th_0 = (-center).arg();
    let wrap = |x: f64| x.rem_euclid(2.0 * PI);
    let ccw = wrap(th_e - th_s);
    // The arc that avoids 0, the image of the points at infinity.
    let sweep = if wrap(th_0 - th_s) < ccw { ccw - 2.0 * PI } else { ccw };
    BoundaryPiece::CircArc { center, radius, theta_start: th_s, sweep }
}

/// Builds `z / K2` for a polygon `K2` that avoids 0.
pub fn inversion_region(z: CScalar, k2: &ConvexPolygon) -> Result<ArcRegion> {
    let body = ConvexBody::Polygon(k2.clone());
    if body.contains(c(0.0, 0.0), EPS) {
        return Err(Error::InvalidInput("factor contains 0; its inverse image is unbounded".into()));
    }
    if z.norm() == 0.0 {
        return Err(Error::InvalidInput("z = 0 has a degenerate inverse image".into()));
    }
    let boundary = if k2.len() == 1 {
        vec![BoundaryPiece::LineSeg(Segment::new(z / k2.vertices()[0], z / k2.vertices()[0]))]
    } else {
        let mut edges = k2.edges();
        if edges.len() == 1 {
            let e = edges[0];
            edges.push(Segment::new(e.q, e.p));
        }
        edges.iter().map(|e| invert_edge(e, z)).collect()
    };
    Ok(ArcRegion { z, factor: k2.clone(), boundary })
}

/// Occupancy image over an axis-aligned box.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub n: usize,
    /// Row-major, row 0 at `y_min`.
    pub occupancy: Vec<bool>,
}

impl RasterGrid {
    fn empty(bbox: (f64, f64, f64, f64), n: usize) -> Self {
        RasterGrid { x_min: bbox.0, x_max: bbox.1, y_min: bbox.2, y_max: bbox.3, n, occupancy: vec![false; n * n] }
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / self.n as f64
    }

    pub fn cell_of(&self, z: CScalar) -> Option<(usize, usize)> {
        let i = ((z.re - self.x_min) / self.dx()).floor();
        let j = ((z.im - self.y_min) / self.dy()).floor();
        if i < 0.0 || j < 0.0 || i >= self.n as f64 || j >= self.n as f64 {
            return None;
        }
        Some((i as usize, j as usize))
    }

    pub fn cell_center(&self, i: usize, j: usize) -> CScalar {
        c(self.x_min + (i as f64 + 0.5) * self.dx(), self.y_min + (j as f64 + 0.5) * self.dy())
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.occupancy[j * self.n + i]
    }

    /// Occupancy of the cell containing `z`; points outside the box are empty.
    pub fn contains(&self, z: CScalar) -> bool {
        self.cell_of(z).map(|(i, j)| self.get(i, j)).unwrap_or(false)
    }

    pub fn occupied_count(&self) -> usize {
        self.occupancy.iter().filter(|&&o| o).count()
    }

    /// `true` when the cell of `z` is within `band` cells of a cell with the
    /// opposite occupancy.
    pub fn near_boundary(&self, z: CScalar, band: usize) -> bool {
        let Some((i, j)) = self.cell_of(z) else { return false };
        let v = self.get(i, j);
        let n = self.n as isize;
        let b = band as isize;
        for dj in -b..=b {
            for di in -b..=b {
                let (x, y) = (i as isize + di, j as isize + dj);
                let other = if x < 0 || y < 0 || x >= n || y >= n { false } else { self.get(x as usize, y as usize) };
                if other != v {
                    return true;
                }
            }
        }
        false
    }

    /// Merges another grid over the identical box.
    pub fn union_with(&mut self, other: &RasterGrid) {
        assert_eq!((self.n, self.x_min, self.y_min), (other.n, other.x_min, other.y_min));
        for (a, b) in self.occupancy.iter_mut().zip(&other.occupancy) {
            *a |= *b;
        }
    }

    /// Sizes of the 4-connected empty components that do not touch the
    /// border of the grid.
    pub fn enclosed_empty_components(&self) -> Vec<usize> {
        let n = self.n;
        let mut seen = vec![false; n * n];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for start in 0..n * n {
            if seen[start] || self.occupancy[start] {
                continue;
            }
            seen[start] = true;
            stack.push(start);
            let mut size = 0;
            let mut touches_border = false;
            while let Some(k) = stack.pop() {
                size += 1;
                let (i, j) = (k % n, k / n);
                if i == 0 || j == 0 || i == n - 1 || j == n - 1 {
                    touches_border = true;
                }
                let mut visit = |idx: usize| {
                    if !seen[idx] && !self.occupancy[idx] {
                        seen[idx] = true;
                        stack.push(idx);
                    }
                };
                if i > 0 {
                    visit(k - 1);
                }
                if i + 1 < n {
                    visit(k + 1);
                }
                if j > 0 {
                    visit(k - n);
                }
                if j + 1 < n {
                    visit(k + n);
                }
            }
            if !touches_border {
                out.push(size);
            }
        }
        out
    }

    /// Binary PGM (`P5`, maxval 1), top row first.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n1\n", self.n, self.n).into_bytes();
        for j in (0..self.n).rev() {
            for i in 0..self.n {
                out.push(u8::from(self.get(i, j)));
            }
        }
        out
    }
}

/// Box containing `K1 K2`: products of extreme points, with disks replaced
/// by circumscribed polygons, padded by 5% per side.
pub fn product_bbox(k1: &ConvexBody, k2: &ConvexBody) -> (f64, f64, f64, f64) {
    let ext = |k: &ConvexBody| -> Vec<CScalar> {
        match k {
            ConvexBody::Disk(d) => {
                let sides = 32;
                let r = d.radius / (PI / sides as f64).cos();
                (0..sides).map(|j| d.center + cis(2.0 * PI * j as f64 / sides as f64) * r).collect()
            }
            _ => k.vertices(),
        }
    };
    let (e1, e2) = (ext(k1), ext(k2));
    let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for a in &e1 {
        for bb in &e2 {
            let p = a * bb;
            b = (b.0.min(p.re), b.1.max(p.re), b.2.min(p.im), b.3.max(p.im));
        }
    }
    pad_bbox(b)
}

/// Pads by 5% of the larger side, so degenerate boxes keep a positive size.
pub fn pad_bbox(b: (f64, f64, f64, f64)) -> (f64, f64, f64, f64) {
    let span = (b.1 - b.0).max(b.3 - b.2).max(1e-6);
    let p = 0.05 * span;
    // Square cells keep distances isotropic.
    let (cx, cy) = ((b.0 + b.1) / 2.0, (b.2 + b.3) / 2.0);
    let half = span / 2.0 + p;
    (cx - half, cx + half, cy - half, cy + half)
}

/// Factor samples: half along the boundary, half on an interior lattice.
/// A nonzero `seed` jitters the samples deterministically.
fn factor_samples(k: &ConvexBody, m: usize, seed: u64) -> Vec<CScalar> {
    let mut pts = k.boundary_points(m / 2);
    pts.extend(k.interior_points(m - m / 2));
    if seed != 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x0, x1, y0, y1) = k.bbox();
        let h = 0.5 * ((x1 - x0).max(y1 - y0)) / (m as f64);
        for p in pts.iter_mut() {
            let q = *p + c(rng.gen_range(-h..=h), rng.gen_range(-h..=h));
            *p = k.closest_point(q);
        }
    }
    pts
}

enum Stamp {
    Point(CScalar),
    Seg(Segment),
    Poly(Vec<CScalar>),
    Disk(CScalar, f64),
}

fn stamp_of(k: &ConvexBody, a: CScalar) -> Stamp {
    match k.scale(a) {
        ConvexBody::Disk(d) => Stamp::Disk(d.center, d.radius),
        other => {
            let v = other.vertices();
            match v.len() {
                1 => Stamp::Point(v[0]),
                2 => Stamp::Seg(Segment::new(v[0], v[1])),
                _ => Stamp::Poly(v),
            }
        }
    }
}

/// Marks cells of rows `rows` covered by `stamp`. Thin features mark every
/// cell they pass through; areas mark cells whose centers they contain.
fn draw(stamp: &Stamp, g: &RasterGrid, rows: std::ops::Range<usize>, out: &mut [bool]) {
    let (dx, dy, n) = (g.dx(), g.dy(), g.n);
    let row0 = rows.start;
    let mark = |z: CScalar, out: &mut [bool]| {
        if let Some((i, j)) = g.cell_of(z) {
            if rows.contains(&j) {
                out[(j - row0) * n + i] = true;
            }
        }
    };
    let (band_lo, band_hi) = (g.y_min + row0 as f64 * dy, g.y_min + rows.end as f64 * dy);
    let seg = |s: &Segment, out: &mut [bool]| {
        // Only the part of the segment inside this band of rows.
        let (mut t0, mut t1) = (0.0f64, 1.0f64);
        let d = s.q.im - s.p.im;
        if d.abs() > 0.0 {
            let (ta, tb) = ((band_lo - dy - s.p.im) / d, (band_hi + dy - s.p.im) / d);
            t0 = t0.max(ta.min(tb));
            t1 = t1.min(ta.max(tb));
        } else if s.p.im < band_lo - dy || s.p.im > band_hi + dy {
            return;
        }
        if t0 > t1 {
            return;
        }
        let steps = (((t1 - t0) * s.length() / (0.25 * dx.min(dy))).ceil() as usize).max(1);
        for k in 0..=steps {
            mark(s.point_at(t0 + (t1 - t0) * k as f64 / steps as f64), out);
        }
    };
    let fill_rows = |span: &dyn Fn(f64) -> Option<(f64, f64)>, out: &mut [bool]| {
        for j in rows.clone() {
            let y = g.y_min + (j as f64 + 0.5) * dy;
            if let Some((xl, xr)) = span(y) {
                let il = ((xl - g.x_min) / dx - 0.5).ceil().max(0.0) as usize;
                let ir = ((xr - g.x_min) / dx - 0.5).floor();
                if ir < 0.0 {
                    continue;
                }
                let ir = (ir as usize).min(n - 1);
                for i in il..=ir {
                    out[(j - row0) * n + i] = true;
                }
            }
        }
    };
    match stamp {
        Stamp::Point(p) => mark(*p, out),
        Stamp::Seg(s) => seg(s, out),
        Stamp::Poly(v) => {
            let (ymin, ymax) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, z| (a.0.min(z.im), a.1.max(z.im)));
            let span = |y: f64| -> Option<(f64, f64)> {
                if y < ymin || y > ymax {
                    return None;
                }
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for k in 0..v.len() {
                    let (p, q) = (v[k], v[(k + 1) % v.len()]);
                    if (p.im - y) * (q.im - y) <= 0.0 && p.im != q.im {
                        let x = p.re + (y - p.im) / (q.im - p.im) * (q.re - p.re);
                        lo = lo.min(x);
                        hi = hi.max(x);
                    }
                }
                (lo <= hi).then_some((lo, hi))
            };
            fill_rows(&span, out);
            for k in 0..v.len() {
                seg(&Segment::new(v[k], v[(k + 1) % v.len()]), out);
            }
        }
        Stamp::Disk(center, r) => {
            let (center, r) = (*center, *r);
            if center.im + r < band_lo || center.im - r > band_hi {
                return;
            }
            // Every cell meeting the disk: per row, the x-extent of the disk
            // within the row's strip.
            for j in rows.clone() {
                let (y0, y1) = (g.y_min + j as f64 * dy, g.y_min + (j + 1) as f64 * dy);
                let yc = center.im.clamp(y0, y1);
                let h2 = r * r - (yc - center.im).powi(2);
                if h2 < 0.0 {
                    continue;
                }
                let h = h2.sqrt();
                let il = ((center.re - h - g.x_min) / dx).floor().max(0.0);
                let ir = ((center.re + h - g.x_min) / dx).floor();
                if ir < 0.0 || il >= n as f64 {
                    continue;
                }
                for i in il as usize..=(ir as usize).min(n - 1) {
                    out[(j - row0) * n + i] = true;
                }
            }
        }
    }
}

fn rasterize_stamps(stamps: &[Stamp], grid: &mut RasterGrid) {
    let n = grid.n;
    let band = 16usize;
    let g = grid.clone();
    grid.occupancy.par_chunks_mut(band * n).enumerate().for_each(|(b, chunk)| {
        let rows = b * band..(b * band + chunk.len() / n);
        for s in stamps {
            draw(s, &g, rows.clone(), chunk);
        }
    });
}

/// Brute-force image of `K1 K2` on an `n x n` grid: the union of the scaled
/// copies `a K2` and `K1 b` over `m` samples of each factor.
pub fn raster_product(k1: &ConvexBody, k2: &ConvexBody, n: usize, m: usize) -> RasterGrid {
    raster_product_seeded(k1, k2, n, m, 0)
}

pub fn raster_product_seeded(k1: &ConvexBody, k2: &ConvexBody, n: usize, m: usize, seed: u64) -> RasterGrid {
    raster_union(&[(k1.clone(), k2.clone())], n, m, seed)
}

/// Raster of a union of products over one shared box.
pub fn raster_union(pairs: &[(ConvexBody, ConvexBody)], n: usize, m: usize, seed: u64) -> RasterGrid {
    let n = n.max(1);
    let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (k1, k2) in pairs {
        let q = product_bbox(k1, k2);
        b = (b.0.min(q.0), b.1.max(q.1), b.2.min(q.2), b.3.max(q.3));
    }
    let mut grid = RasterGrid::empty(pad_bbox(b), n);
    let mut stamps = Vec::new();
    for (k1, k2) in pairs {
        for a in factor_samples(k1, m, seed) {
            stamps.push(stamp_of(k2, a));
        }
        for bb in factor_samples(k2, m, seed.wrapping_mul(31).wrapping_add(u64::from(seed != 0))) {
            stamps.push(stamp_of(k1, bb));
        }
    }
    rasterize_stamps(&stamps, &mut grid);
    grid
}

/// Outcome of the sampled star-center check.
#[derive(Debug, Clone, PartialEq)]
pub struct StarCheck {
    pub ok: bool,
    /// `(a, b, t)`: the point `p + t (ab - p)` is not a member.
    pub witness: Option<(CScalar, CScalar, f64)>,
}

/// Checks that the segment from `p` to every sampled boundary product `ab`
/// stays inside `K1 K2`, using the default tolerance.
pub fn check_star_center(
    k1: &ConvexBody,
    k2: &ConvexBody,
    p: CScalar,
    boundary_samples: usize,
    seg_samples: usize,
) -> Result<StarCheck> {
    check_star_center_tol(k1, k2, p, boundary_samples, seg_samples, DEFAULT_TOL)
}

pub fn check_star_center_tol(
    k1: &ConvexBody,
    k2: &ConvexBody,
    p: CScalar,
    boundary_samples: usize,
    seg_samples: usize,
    tol: f64,
) -> Result<StarCheck> {
    if !member_exact(k1, k2, p, tol) {
        return Err(Error::NotAMember);
    }
    let per = ((boundary_samples as f64).sqrt().ceil() as usize).max(1);
    let a_pts = k1.boundary_points(per);
    let b_pts = k2.boundary_points(per);
    let pairs: Vec<(CScalar, CScalar)> = a_pts.iter().flat_map(|&a| b_pts.iter().map(move |&b| (a, b))).collect();
    let witness = pairs.par_iter().find_map_first(|&(a, b)| {
        let q = a * b;
        first_exit(&|z| member_exact(k1, k2, z, tol), p, q, seg_samples).map(|t| (a, b, t))
    });
    Ok(StarCheck { ok: witness.is_none(), witness })
}

/// Smallest sampled `t` with `p + t (q - p)` outside, refined by bisection
/// to 1e-6 against the preceding inside sample.
pub fn first_exit(member: &(dyn Fn(CScalar) -> bool + Sync), p: CScalar, q: CScalar, samples: usize) -> Option<f64> {
    let samples = samples.max(1);
    let at = |t: f64| p + (q - p) * t;
    let mut prev = 0.0;
    for k in 1..=samples {
        let t = k as f64 / samples as f64;
        if !member(at(t)) {
            let (mut lo, mut hi) = (prev, t);
            while hi - lo > 1e-6 {
                let mid = 0.5 * (lo + hi);
                if member(at(mid)) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some(hi);
        }
        prev = t;
    }
    None
}

/// Like [`first_exit`] with at least `samples` points, followed by a pass
/// over the midpoints between samples so that gaps narrower than the
/// sample spacing are still found.
pub fn segment_exit_adaptive(
    member: &(dyn Fn(CScalar) -> bool + Sync),
    p: CScalar,
    q: CScalar,
    samples: usize,
) -> Option<f64> {
    let samples = samples.max(128);
    if let Some(t) = first_exit(member, p, q, samples) {
        return Some(t);
    }
    let h = 1.0 / samples as f64;
    (0..samples).find_map(|k| {
        let t = (k as f64 + 0.5) * h;
        (!member(p + (q - p) * t)).then_some(t)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    StarShaped,
    NotStarShaped,
    Unknown,
}

/// A segment from a candidate center that leaves the product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentExit {
    pub from: CScalar,
    pub to: CScalar,
    pub t: f64,
}

impl SegmentExit {
    /// The first non-member found on the segment.
    pub fn point(&self) -> CScalar {
        self.from + (self.to - self.from) * self.t
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarReport {
    pub verdict: Verdict,
    pub center: Option<CScalar>,
    pub witness: Option<SegmentExit>,
    pub candidates_tested: usize,
    /// The product is convex, so every member is a center.
    pub convex: bool,
}

impl StarReport {
    pub fn star(center: CScalar, candidates_tested: usize) -> Self {
        StarReport {
            verdict: Verdict::StarShaped,
            center: Some(center),
            witness: None,
            candidates_tested,
            convex: false,
        }
    }

    pub fn unknown(candidates_tested: usize) -> Self {
        StarReport { verdict: Verdict::Unknown, center: None, witness: None, candidates_tested, convex: false }
    }
}

/// Vertex-pair test for products of polygons (segments and points allowed):
/// `p` is a star center iff every segment from `p` to a product of vertices
/// stays inside. Returns the first exit found, or `None`.
pub fn vertex_pair_exit(k1: &ConvexBody, k2: &ConvexBody, p: CScalar, tol: f64) -> Option<SegmentExit> {
    let pairs: Vec<CScalar> =
        k1.vertices().iter().flat_map(|&a| k2.vertices().into_iter().map(move |b| a * b)).collect();
    let member = |z: CScalar| member_exact(k1, k2, z, tol);
    pairs
        .par_iter()
        .find_map_first(|&q| segment_exit_adaptive(&member, p, q, 256).map(|t| SegmentExit { from: p, to: q, t }))
}

/// Polygonal hull of sampled products, used to compare against convex products.
pub fn sampled_product_hull(k1: &ConvexBody, k2: &ConvexBody, k: usize) -> ConvexPolygon {
    let a = k1.boundary_points(k);
    let b = k2.boundary_points(k);
    let pts: Vec<CScalar> = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
    convex_hull(&pts).expect("nonempty")
}
