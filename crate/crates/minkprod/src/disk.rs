//! Products with a circular disk factor: exact membership through
//! Apollonius regions and certified star centers.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{c, cis, CScalar, ConvexBody, Disk, Segment};
use crate::membership::{check_star_center, first_exit, member_exact, raster_union, DEFAULT_TOL};

/// Region `{a : |z - a c| <= r |a|}` of factors `a` that pair with some
/// point of `D(c, r)` to produce `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Apollonius {
    Disk {
        center: CScalar,
        radius: f64,
    },
    /// Complement of the open disk.
    Outside {
        center: CScalar,
        radius: f64,
    },
    /// `Re(u a) >= h`.
    HalfPlane {
        u: CScalar,
        h: f64,
    },
}

pub fn apollonius(z: CScalar, d: &Disk) -> Apollonius {
    let k = d.center.norm_sqr() - d.radius * d.radius;
    let r_scale = d.center.norm_sqr().max(d.radius * d.radius).max(f64::MIN_POSITIVE);
    if k.abs() <= 1e-12 * r_scale {
        return Apollonius::HalfPlane { u: z.conj() * d.center, h: z.norm_sqr() / 2.0 };
    }
    let center = z * d.center.conj() / k;
    let radius = d.radius * z.norm() / k.abs();
    if k > 0.0 {
        Apollonius::Disk { center, radius }
    } else {
        Apollonius::Outside { center, radius }
    }
}

fn meets_disk(region: &Apollonius, d: &Disk) -> bool {
    match *region {
        Apollonius::Disk { center, radius } => (d.center - center).norm() <= d.radius + radius,
        Apollonius::Outside { center, radius } => (d.center - center).norm() + d.radius >= radius,
        Apollonius::HalfPlane { u, h } => (u * d.center).re + u.norm() * d.radius >= h,
    }
}

fn meets_polygonal(region: &Apollonius, k: &ConvexBody) -> bool {
    let v = k.vertices();
    match *region {
        Apollonius::Disk { center, radius } => k.distance(center) <= radius,
        Apollonius::Outside { center, radius } => v.iter().any(|p| (p - center).norm() >= radius),
        Apollonius::HalfPlane { u, h } => v.iter().any(|p| (u * p).re >= h),
    }
}

/// Whether `z` lies within about `tol` of `D * other`. The disk radius is
/// widened by `tol / max |other|`, which keeps the answer sound: any hit
/// factors as `ab` with `|ab - z| <= tol`.
pub fn member_disk_body(d: &Disk, other: &ConvexBody, z: CScalar, tol: f64) -> bool {
    let m = other.max_modulus();
    if m == 0.0 {
        return z.norm() <= tol;
    }
    let wide = Disk { center: d.center, radius: d.radius + tol.max(0.0) / m };
    let region = apollonius(z, &wide);
    match other {
        ConvexBody::Disk(o) => meets_disk(&region, o),
        _ => meets_polygonal(&region, other),
    }
}

/// `D(c, r) * {b} = D(bc, |b| r)`.
pub fn disk_times_point(d: &Disk, b: CScalar) -> Disk {
    d.scale(b)
}

/// `|b - (1 - r^2)|^2 - |b|^2 r^2`, which equals
/// `-(1 - r^2) (r^2 - |b - 1|^2)` and so is at most 0 on `D(1, r)`, `r <= 1`.
pub fn disk_center_gap(b: CScalar, r: f64) -> f64 {
    (b - (1.0 - r * r)).norm_sqr() - b.norm_sqr() * r * r
}

/// The factored form of [`disk_center_gap`].
pub fn disk_center_gap_factored(b: CScalar, r: f64) -> f64 {
    -(1.0 - r * r) * (r * r - (b - 1.0).norm_sqr())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertKind {
    /// Any subset of a disk avoiding 0, times that disk.
    SubsetOfDisk,
    /// A segment from 1 with non-negative real direction, times `D(1, r)`.
    SegmentFromOne,
    /// A star-shaped set whose center has minimal modulus, times a disk.
    NearestCenterStarSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiskProductCert {
    pub center_claimed: CScalar,
    pub kind: CertKind,
    /// Radius of the disk after normalizing its center to 1.
    pub r_canonical: f64,
    pub verified: bool,
    /// First failing sample `(point of S, point of the disk, t)` when not verified.
    pub witness: Option<(CScalar, CScalar, f64)>,
}

/// Star center `mu^2 (1 - r^2)` of `D(mu, R) * S` for `S` inside the disk,
/// with `r = R / |mu|`. Verified on the segments from the center to `s d`
/// for sampled `s` in `S` and `d` on the circle: each must lie in the disk
/// `s D(mu, R)`.
pub fn star_center_disk_subset(mu: CScalar, big_r: f64, s_samples: &[CScalar]) -> Result<DiskProductCert> {
    if !big_r.is_finite() || big_r < 0.0 || !mu.norm().is_finite() || mu.norm() <= big_r {
        return Err(Error::InvalidInput("the disk must not contain 0".into()));
    }
    if s_samples.is_empty() {
        return Err(Error::InvalidInput("empty subset".into()));
    }
    let disk = Disk::new(mu, big_r)?;
    let body = ConvexBody::Disk(disk);
    if let Some(s) = s_samples.iter().find(|s| !body.contains(**s, 1e-9 * mu.norm())) {
        return Err(Error::InvalidInput(format!("sample {s} is outside the disk")));
    }
    let r = big_r / mu.norm();
    let center = mu * mu * (1.0 - r * r);
    let ring: Vec<CScalar> = (0..64).map(|k| mu + cis(2.0 * std::f64::consts::PI * k as f64 / 64.0) * big_r).collect();
    let witness = s_samples.par_iter().find_map_first(|&s| {
        let sd = disk_times_point(&disk, s);
        let inside = |z: CScalar| (z - sd.center).norm() <= sd.radius * (1.0 + 1e-12) + 1e-12;
        ring.iter().find_map(|&d| first_exit(&inside, center, s * d, 64).map(|t| (s, d, t)))
    });
    Ok(DiskProductCert {
        center_claimed: center,
        kind: CertKind::SubsetOfDisk,
        r_canonical: r,
        verified: witness.is_none(),
        witness,
    })
}

/// Center 1 of `K(1, b) D(1, r)` for `0 < r <= 1` and `Re(b) >= 1`.
pub fn star_center_segment_disk(b: CScalar, r: f64) -> Result<DiskProductCert> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::InvalidInput(format!("radius {r} outside (0, 1]")));
    }
    if b.re < 1.0 {
        return Err(Error::InvalidInput("Re(b) must be at least 1".into()));
    }
    let seg = ConvexBody::Segment(Segment::new(c(1.0, 0.0), b));
    let disk = ConvexBody::Disk(Disk::new(c(1.0, 0.0), r)?);
    let one = c(1.0, 0.0);
    let check = check_star_center(&seg, &disk, one, 720, 64)?;
    let mut verified = check.ok && segment_disk_inequality_holds(b, r, 100, 1e-12);
    let mut witness = check.witness;
    if verified {
        // Sampled union-of-disks membership along the segments, independent
        // of the exact engine.
        let grid_fail = union_of_disks_exit(b, r);
        verified = grid_fail.is_none();
        witness = grid_fail;
    }
    Ok(DiskProductCert { center_claimed: one, kind: CertKind::SegmentFromOne, r_canonical: r, verified, witness })
}

fn union_of_disks_exit(b: CScalar, r: f64) -> Option<(CScalar, CScalar, f64)> {
    let dir = b - 1.0;
    let inside = |z: CScalar| {
        (0..=400).any(|k| {
            let cc = 1.0 + dir * (k as f64 / 400.0);
            (z - cc).norm() <= cc.norm() * r * (1.0 + 1e-9) + 1e-9
        })
    };
    let one = c(1.0, 0.0);
    for i in 0..=20 {
        let cc = 1.0 + dir * (i as f64 / 20.0);
        for k in 0..32 {
            let d = 1.0 + cis(2.0 * std::f64::consts::PI * k as f64 / 32.0) * r;
            if let Some(t) = first_exit(&inside, one, cc * d, 32) {
                return Some((cc, d, t));
            }
        }
    }
    None
}

/// Worst slack of `|t z + (1 - t) - c_t| <= |c_t| r` with `c_t = 1 + t s (b - 1)`,
/// over an `n x n` grid of `(s, t)` and points `z` on the circle of radius
/// `|c| r` around `c = 1 + s (b - 1)`. Non-positive when the inequality holds.
pub fn segment_disk_inequality_slack(b: CScalar, r: f64, n: usize) -> f64 {
    let dir = b - 1.0;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..n {
        let s = i as f64 / (n - 1).max(1) as f64;
        let cc = 1.0 + dir * s;
        for j in 0..n {
            let t = j as f64 / (n - 1).max(1) as f64;
            let ct = 1.0 + dir * (t * s);
            for k in 0..16 {
                let z = cc + cis(2.0 * std::f64::consts::PI * k as f64 / 16.0) * (cc.norm() * r);
                let lhs = (z * t + (1.0 - t) - ct).norm();
                worst = worst.max(lhs - ct.norm() * r);
            }
        }
    }
    worst
}

pub fn segment_disk_inequality_holds(b: CScalar, r: f64, n: usize, tol: f64) -> bool {
    segment_disk_inequality_slack(b, r, n) <= tol
}

/// A star-shaped set given by samples and its declared center.
#[derive(Debug, Clone)]
pub struct StarSampler {
    pub center: CScalar,
    /// Convex pieces whose union is the set.
    pub pieces: Vec<ConvexBody>,
}

impl StarSampler {
    pub fn samples(&self, k: usize) -> Vec<CScalar> {
        self.pieces.iter().flat_map(|p| p.interior_points(k)).collect()
    }
}

/// Certificate for `D(a, r) * S` with `S` star-shaped about `s`, `|s|`
/// minimal over `S`. The normalized center 1 maps back to `s a`. The center
/// is checked on segments to sampled products with the exact engine; a
/// failure refuses the certificate and attaches the raster hole count.
pub fn star_shaped_times_disk(set: &StarSampler, a: CScalar, r: f64) -> Result<(DiskProductCert, Option<usize>)> {
    let disk = Disk::new(a, r)?;
    if a.norm() <= r || set.pieces.iter().any(|p| p.contains(c(0.0, 0.0), 0.0)) {
        return Err(Error::InvalidInput("0 lies in a factor; 0 is a star center".into()));
    }
    let s = set.center;
    let samples = set.samples(64);
    if let Some(z) = samples.iter().find(|z| z.norm() < s.norm() * (1.0 - 1e-12)) {
        return Err(Error::InvalidInput(format!("sample {z} is closer to 0 than the center")));
    }
    let center = s * a;
    let dbody = ConvexBody::Disk(disk);
    let member = |z: CScalar| set.pieces.iter().any(|p| member_exact(p, &dbody, z, DEFAULT_TOL));
    let ring = dbody.boundary_points(32);
    let targets: Vec<(CScalar, CScalar)> = samples.iter().flat_map(|&x| ring.iter().map(move |&d| (x, d))).collect();
    let witness =
        targets.par_iter().find_map_first(|&(x, d)| first_exit(&member, center, x * d, 64).map(|t| (x, d, t)));
    let cert = DiskProductCert {
        center_claimed: center,
        kind: CertKind::NearestCenterStarSet,
        r_canonical: r / a.norm(),
        verified: witness.is_none(),
        witness,
    };
    let holes = if cert.verified {
        None
    } else {
        let pairs: Vec<_> = set.pieces.iter().map(|p| (p.clone(), dbody.clone())).collect();
        Some(raster_union(&pairs, 1024, 1024, 0).enclosed_empty_components().len())
    };
    Ok((cert, holes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::convex_hull;
    use crate::membership::raster_product;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn disk(x: f64, y: f64, r: f64) -> Disk {
        Disk::new(c(x, y), r).unwrap()
    }

    #[test]
    fn point_products() {
        let d = disk_times_point(&disk(1.0, 0.0, 0.5), c(1.5, 0.0));
        assert!((d.center - c(1.5, 0.0)).norm() < 1e-12 && (d.radius - 0.75).abs() < 1e-12);
        assert!(((c(0.75, 0.0) - d.center).norm() - d.radius).abs() < 1e-12);
        let d = disk_times_point(&disk(0.0, 0.0, 1.0), c(0.0, 1.0));
        assert!(d.center.norm() < 1e-12 && (d.radius - 1.0).abs() < 1e-12);
        for r in [0.1, 0.5, 1.0] {
            let d = disk_times_point(&disk(1.0, 0.0, r), c(1.0, 0.0));
            assert!((c(1.0 - r * r, 0.0) - d.center).norm() <= d.radius + 1e-15);
        }
    }

    #[test]
    fn subset_certificates() {
        let cert = star_center_disk_subset(c(1.0, 0.0), 0.5, &[c(1.5, 0.0)]).unwrap();
        assert!((cert.center_claimed - c(0.75, 0.0)).norm() < 1e-12 && cert.verified);
        let ring: Vec<_> = (0..90).map(|k| 1.0 + cis(2.0 * PI * k as f64 / 90.0) * 0.5).collect();
        assert!(star_center_disk_subset(c(1.0, 0.0), 0.5, &ring).unwrap().verified);
        let cert = star_center_disk_subset(c(0.0, 2.0), 1.0, &[c(0.0, 2.0)]).unwrap();
        assert!((cert.center_claimed - c(-3.0, 0.0)).norm() < 1e-12);
        assert!(cert.verified);
        assert!(star_center_disk_subset(c(0.5, 0.0), 1.0, &[c(0.5, 0.0)]).is_err());
    }

    #[test]
    fn segment_disk_certificates() {
        for (b, r) in [(c(1.0, 0.0), 0.5), (c(1.0, 2.0), 0.5), (c(2.0, 0.0), 1.0)] {
            assert!(star_center_segment_disk(b, r).unwrap().verified, "{b} {r}");
        }
        assert!(star_center_segment_disk(c(0.5, 0.0), 0.5).is_err());
        assert!(star_center_segment_disk(c(2.0, 0.0), 1.5).is_err());
    }

    #[test]
    fn convex_set_times_disk() {
        let s = StarSampler {
            center: c(1.0, 0.0),
            pieces: vec![ConvexBody::Polygon(convex_hull(&[c(1.0, 0.0), c(1.0, 1.0), c(2.0, 0.0)]).unwrap())],
        };
        let (cert, holes) = star_shaped_times_disk(&s, c(1.0, 0.0), 0.5).unwrap();
        assert!(cert.verified && holes.is_none());
        assert_eq!(cert.center_claimed, c(1.0, 0.0));
        let single = StarSampler { center: c(1.0, 0.0), pieces: vec![ConvexBody::point(c(1.0, 0.0))] };
        assert!(star_shaped_times_disk(&single, c(2.0, 1.0), 0.3).unwrap().0.verified);
    }

    #[test]
    fn tangent_half_plane_case() {
        // |c| = r: the Apollonius region is a half-plane.
        let d = disk(1.0, 0.0, 1.0);
        let other = ConvexBody::Segment(Segment::new(c(1.0, 0.0), c(1.0, 1.0)));
        assert!(member_disk_body(&d, &other, c(1.0, 0.5), 1e-9));
        assert!(member_disk_body(&d, &other, c(2.0, 0.0), 1e-9));
        assert!(!member_disk_body(&d, &other, c(-0.5, 0.0), 1e-9));
    }

    #[test]
    fn disk_disk_agrees_with_raster() {
        let (k1, k2) = (ConvexBody::Disk(disk(1.0, 0.5, 0.4)), ConvexBody::Disk(disk(0.3, -1.0, 0.6)));
        let g = raster_product(&k1, &k2, 256, 256);
        let mut agree = 0;
        let mut total = 0;
        for i in 0..200 {
            for j in 0..200 {
                let z = g.cell_center(i * 256 / 200, j * 256 / 200);
                if g.near_boundary(z, 2) {
                    continue;
                }
                total += 1;
                agree += usize::from(g.contains(z) == member_exact(&k1, &k2, z, 1e-9));
            }
        }
        assert!(agree as f64 >= 0.999 * total as f64, "{agree}/{total}");
    }

    proptest! {
        #[test]
        fn gap_factorization(r in 0.05..=1.0f64, rho in 0.0..=1.0f64, th in -PI..PI) {
            let b = 1.0 + cis(th) * (rho * r);
            let g = disk_center_gap(b, r);
            prop_assert!((g - disk_center_gap_factored(b, r)).abs() < 1e-12);
            prop_assert!(g <= 1e-12);
        }

        #[test]
        fn apollonius_matches_definition(x in -3.0..3.0f64, y in -3.0..3.0f64, cx in -2.0..2.0f64, cy in -2.0..2.0f64, r in 0.0..2.0f64, ax in -3.0..3.0f64, ay in -3.0..3.0f64) {
            let d = disk(cx, cy, r);
            let (z, a) = (c(x, y), c(ax, ay));
            let direct = (z - a * d.center).norm() - r * a.norm();
            prop_assume!(direct.abs() > 1e-6);
            let inside = match apollonius(z, &d) {
                Apollonius::Disk { center, radius } => (a - center).norm() <= radius,
                Apollonius::Outside { center, radius } => (a - center).norm() >= radius,
                Apollonius::HalfPlane { u, h } => (u * a).re >= h,
            };
            prop_assert_eq!(inside, direct <= 0.0);
        }
    }
}
