//! CSV and SVG emission, and boundary sampling of products.

use std::fmt::Write as _;

use minkprod::geom::{c, CScalar, ConvexBody, Segment};
use minkprod::membership::{member_exact, raster_product_seeded, RasterGrid};
use minkprod::segseg::product_seg_seg;

use crate::CliError;

/// One `x,y` line per point, 17 significant digits.
pub fn write_csv(points: &[CScalar]) -> String {
    let mut out = String::with_capacity(points.len() * 48);
    for z in points {
        let _ = writeln!(out, "{:.16e},{:.16e}", z.re, z.im);
    }
    out
}

pub fn read_csv(text: &str) -> Result<Vec<CScalar>, CliError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let bad = || CliError::Input(format!("csv line {}: {line:?}", i + 1));
            let (x, y) = line.split_once(',').ok_or_else(bad)?;
            Ok(c(x.trim().parse().map_err(|_| bad())?, y.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

fn edges(k: &ConvexBody) -> Vec<Segment> {
    match k {
        ConvexBody::Segment(s) => vec![*s],
        ConvexBody::Polygon(p) if p.len() == 1 => vec![Segment::new(p.vertices()[0], p.vertices()[0])],
        ConvexBody::Polygon(p) if p.len() == 2 => vec![Segment::new(p.vertices()[0], p.vertices()[1])],
        ConvexBody::Polygon(p) => p.edges(),
        ConvexBody::Disk(_) => Vec::new(),
    }
}

/// Points on the boundary of `K1 K2`, in a fixed order.
///
/// Two segments give the exact chain. Segments and polygons give samples of
/// the edge-pair product boundaries that lie on the outer boundary. A disk
/// factor falls back to boundary cells of the raster.
pub fn boundary_samples(k1: &ConvexBody, k2: &ConvexBody, samples: usize, grid: usize, seed: u64) -> Vec<CScalar> {
    let samples = samples.max(1);
    if let (ConvexBody::Segment(s1), ConvexBody::Segment(s2)) = (k1, k2) {
        let region = product_seg_seg(s1, s2);
        let per = samples.div_ceil(region.boundary.len()).max(1);
        return region.boundary.iter().flat_map(|p| (0..per).map(move |j| p.at(j as f64 / per as f64))).collect();
    }
    if matches!(k1, ConvexBody::Disk(_)) || matches!(k2, ConvexBody::Disk(_)) {
        return raster_boundary(&raster_product_seeded(k1, k2, grid, grid, seed));
    }
    let scale = k1.max_modulus() * k2.max_modulus();
    let delta = 1e-6 * scale.max(1e-300);
    let pieces: Vec<_> = edges(k1)
        .iter()
        .flat_map(|e1| edges(k2).into_iter().map(move |e2| product_seg_seg(e1, &e2)))
        .flat_map(|r| r.boundary)
        .collect();
    let per = samples.div_ceil(pieces.len().max(1)).max(2);
    let outside = |z: CScalar| !member_exact(k1, k2, z, 1e-10 * scale);
    pieces
        .iter()
        .flat_map(|p| (0..per).map(move |j| (p, j as f64 / per as f64)))
        .filter_map(|(p, t)| {
            let z = p.at(t);
            let d = p.tangent(t.clamp(1e-3, 1.0 - 1e-3));
            if d.norm() == 0.0 {
                return Some(z);
            }
            let n = d * c(0.0, 1.0) / d.norm() * delta;
            (outside(z + n) || outside(z - n)).then_some(z)
        })
        .collect()
}

/// Centers of occupied cells with an empty 4-neighbor, row by row.
pub fn raster_boundary(g: &RasterGrid) -> Vec<CScalar> {
    let n = g.n;
    let mut out = Vec::new();
    for j in 0..n {
        for i in 0..n {
            if !g.get(i, j) {
                continue;
            }
            let edge = i == 0 || j == 0 || i + 1 == n || j + 1 == n;
            if edge || !g.get(i - 1, j) || !g.get(i + 1, j) || !g.get(i, j - 1) || !g.get(i, j + 1) {
                out.push(g.cell_center(i, j));
            }
        }
    }
    out
}

/// SVG document over a fixed box, with the y axis pointing up.
pub struct Svg {
    bbox: (f64, f64, f64, f64),
    body: String,
}

fn f(x: f64) -> String {
    let s = format!("{x:.6}");
    if s.trim_start_matches('-').chars().all(|ch| ch == '0' || ch == '.') {
        "0.000000".into()
    } else {
        s
    }
}

impl Svg {
    pub fn new(bbox: (f64, f64, f64, f64)) -> Self {
        Svg { bbox, body: String::new() }
    }

    fn stroke(&self) -> String {
        f((self.bbox.1 - self.bbox.0).max(self.bbox.3 - self.bbox.2) / 400.0)
    }

    /// Occupied cells as horizontal runs.
    pub fn raster(&mut self, g: &RasterGrid, fill: &str) {
        let _ = writeln!(self.body, "<g fill=\"{fill}\" stroke=\"none\">");
        for j in 0..g.n {
            let mut i = 0;
            while i < g.n {
                if !g.get(i, j) {
                    i += 1;
                    continue;
                }
                let start = i;
                while i < g.n && g.get(i, j) {
                    i += 1;
                }
                let x = g.x_min + start as f64 * g.dx();
                let y = g.y_min + j as f64 * g.dy();
                let _ = writeln!(
                    self.body,
                    "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
                    f(x),
                    f(-(y + g.dy())),
                    f((i - start) as f64 * g.dx()),
                    f(g.dy())
                );
            }
        }
        self.body.push_str("</g>\n");
    }

    pub fn path(&mut self, pts: &[CScalar], closed: bool, color: &str) {
        if pts.is_empty() {
            return;
        }
        let mut d = String::new();
        for (k, z) in pts.iter().enumerate() {
            let _ = write!(d, "{}{} {} ", if k == 0 { "M" } else { "L" }, f(z.re), f(-z.im));
        }
        if closed {
            d.push('Z');
        }
        let _ = writeln!(
            self.body,
            "<path d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{}\"/>",
            d.trim_end(),
            self.stroke()
        );
    }

    pub fn body_outline(&mut self, k: &ConvexBody, color: &str) {
        let pts = match k {
            ConvexBody::Disk(_) => k.boundary_points(128),
            _ => k.vertices(),
        };
        self.path(&pts, !matches!(k, ConvexBody::Segment(_)), color);
    }

    pub fn finish(self) -> String {
        let (x0, x1, y0, y1) = self.bbox;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n{}</svg>\n",
            f(x0),
            f(-y1),
            f(x1 - x0),
            f(y1 - y0),
            self.body
        )
    }
}

pub fn write_file(path: &std::path::Path, data: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, data).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use minkprod::geom::{convex_hull, Disk};

    #[test]
    fn csv_round_trip() {
        let pts = vec![c(0.1, -1.0 / 3.0), c(1e-300, 12345.678), c(-0.0, 2.0)];
        let text = write_csv(&pts);
        assert_eq!(write_csv(&read_csv(&text).unwrap()), text);
        assert!(read_csv("1,2,\n").is_err());
    }

    #[test]
    fn segment_chain_lies_on_boundary() {
        let s1: ConvexBody = Segment::new(c(1.0, -1.0), c(1.0, 0.0)).into();
        let s2: ConvexBody = Segment::new(c(1.0, 1.0), c(1.0, 2.0)).into();
        let pts = boundary_samples(&s1, &s2, 100, 64, 0);
        assert!(pts.len() >= 100);
        assert!(pts.iter().all(|&z| member_exact(&s1, &s2, z, 1e-7)));
    }

    #[test]
    fn point_times_polygon_boundary_is_scaled_polygon() {
        let k: ConvexBody = convex_hull(&[c(1.0, 0.0), c(2.0, 0.0), c(1.0, 1.0)]).unwrap().into();
        let pts = boundary_samples(&ConvexBody::point(c(0.0, 2.0)), &k, 60, 64, 0);
        let scaled = k.scale(c(0.0, 2.0));
        assert!(!pts.is_empty());
        assert!(pts.iter().all(|&z| scaled.distance(z) < 1e-9));
    }

    #[test]
    fn disk_boundary_uses_raster() {
        let d: ConvexBody = Disk::new(c(1.0, 0.0), 0.5).unwrap().into();
        let pts = boundary_samples(&d, &ConvexBody::point(c(1.0, 0.0)), 10, 128, 0);
        assert!(pts.iter().all(|z| ((z - 1.0).norm() - 0.5).abs() < 0.05));
    }

    #[test]
    fn svg_is_deterministic() {
        let a = || {
            let mut s = Svg::new((-1.0, 1.0, -1.0, 1.0));
            s.path(&[c(0.0, 0.0), c(0.5, -1e-9)], false, "black");
            s.finish()
        };
        assert_eq!(a(), a());
        assert!(a().contains("viewBox=\"-1.000000 -1.000000 2.000000 2.000000\""));
        assert!(!a().contains("-0.000000"));
    }
}
