//! Numerical ranges `W(A) = {x* A x : |x| = 1}` through their support
//! function, and products `W(A) W(B)`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{c, cis, convex_hull, CScalar, ConvexBody, ConvexPolygon};
use crate::membership::member_exact;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    /// Row-major.
    entries: Vec<CScalar>,
}

impl ComplexMatrix {
    pub fn new(n: usize, entries: Vec<CScalar>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::InvalidInput(format!("expected {} entries for n = {n}, got {}", n * n, entries.len())));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        Ok(ComplexMatrix { n, entries })
    }

    pub fn from_rows(rows: &[Vec<CScalar>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix is not square".into()));
        }
        Self::new(n, rows.concat())
    }

    pub fn diag(d: &[CScalar]) -> Result<Self> {
        let n = d.len();
        let mut e = vec![c(0.0, 0.0); n * n];
        for (i, z) in d.iter().enumerate() {
            e[i * n + i] = *z;
        }
        Self::new(n, e)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> CScalar {
        self.entries[i * self.n + j]
    }

    pub fn scale(&self, w: CScalar) -> Self {
        ComplexMatrix { n: self.n, entries: self.entries.iter().map(|z| z * w).collect() }
    }

    /// `A + w I`.
    pub fn shift(&self, w: CScalar) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.entries[i * self.n + i] += w;
        }
        out
    }

    /// `x* A x`.
    pub fn quadratic_form(&self, x: &[CScalar]) -> CScalar {
        let n = self.n;
        (0..n).map(|i| x[i].conj() * (0..n).map(|j| self.get(i, j) * x[j]).sum::<CScalar>()).sum()
    }

    /// `(e^{-i theta} A + e^{i theta} A*) / 2`.
    fn rotated_hermitian_part(&self, theta: f64) -> Vec<CScalar> {
        let n = self.n;
        let w = cis(-theta);
        let mut h = vec![c(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                h[i * n + j] = (w * self.get(i, j) + (w * self.get(j, i)).conj()) * 0.5;
            }
        }
        h
    }
}

/// Eigen-decomposition of a real symmetric matrix (row-major) by cyclic
/// Jacobi rotations. Returns eigenvalues and the eigenvectors as columns.
pub fn jacobi_symmetric(a: &[f64], n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut a = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let frob = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    for _ in 0..100 {
        let off = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].powi(2))
            .sum::<f64>()
            .sqrt();
        if off <= 1e-12 * frob {
            return Ok(((0..n).map(|i| a[i * n + i]).collect(), v));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = cs * akp - sn * akq;
                    a[k * n + q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = cs * apk - sn * aqk;
                    a[q * n + k] = sn * apk + cs * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = cs * vkp - sn * vkq;
                    v[k * n + q] = sn * vkp + cs * vkq;
                }
            }
        }
    }
    Err(Error::NumericalFailure)
}

/// Eigenvalues (descending) and orthonormal eigenvectors of a Hermitian
/// matrix, through the real symmetric form `[[Re, -Im], [Im, Re]]`.
pub fn hermitian_eigen(h: &[CScalar], n: usize) -> Result<Vec<(f64, Vec<CScalar>)>> {
    let m = 2 * n;
    let mut r = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = h[i * n + j];
            r[i * m + j] = z.re;
            r[(i + n) * m + j + n] = z.re;
            r[i * m + j + n] = -z.im;
            r[(i + n) * m + j] = z.im;
        }
    }
    let (vals, vecs) = jacobi_symmetric(&r, m)?;
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    // Each eigenvalue appears twice, for x and i x; keep an orthonormal
    // complex basis of each eigenspace.
    let mut out: Vec<(f64, Vec<CScalar>)> = Vec::with_capacity(n);
    for k in order {
        let mut x: Vec<CScalar> = (0..n).map(|i| c(vecs[i * m + k], vecs[(i + n) * m + k])).collect();
        for (_, y) in &out {
            let d: CScalar = y.iter().zip(&x).map(|(a, b)| a.conj() * b).sum();
            for (xi, yi) in x.iter_mut().zip(y) {
                *xi -= d * yi;
            }
        }
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            out.push((vals[k], x.into_iter().map(|z| z / norm).collect()));
        }
        if out.len() == n {
            break;
        }
    }
    if out.len() != n {
        return Err(Error::NumericalFailure);
    }
    Ok(out)
}

/// Extreme points of `W(A)` in direction `theta`: one point, or both ends
/// of a flat face when the top eigenvalue is repeated.
pub fn support_points(a: &ComplexMatrix, theta: f64) -> Result<Vec<CScalar>> {
    let n = a.n();
    let eig = hermitian_eigen(&a.rotated_hermitian_part(theta), n)?;
    let top = eig[0].0;
    let scale = eig.iter().map(|e| e.0.abs()).fold(1.0, f64::max);
    let space: Vec<&Vec<CScalar>> = eig.iter().take_while(|e| top - e.0 <= 1e-10 * scale).map(|e| &e.1).collect();
    if space.len() == 1 {
        return Ok(vec![a.quadratic_form(space[0])]);
    }
    // On the eigenspace, e^{-i theta} A has constant real part; the face is
    // traced by its imaginary part.
    let k = space.len();
    let w = cis(-theta);
    let mut compressed = vec![c(0.0, 0.0); k * k];
    for i in 0..k {
        for j in 0..k {
            let ax: Vec<CScalar> = (0..n).map(|r| (0..n).map(|s| a.get(r, s) * space[j][s]).sum()).collect();
            compressed[i * k + j] = w * space[i].iter().zip(&ax).map(|(u, v)| u.conj() * v).sum::<CScalar>();
        }
    }
    let mut im_part = vec![c(0.0, 0.0); k * k];
    for i in 0..k {
        for j in 0..k {
            im_part[i * k + j] = (compressed[i * k + j] - compressed[j * k + i].conj()) / c(0.0, 2.0);
        }
    }
    let inner = hermitian_eigen(&im_part, k)?;
    let lift = |y: &[CScalar]| -> Vec<CScalar> { (0..n).map(|r| (0..k).map(|j| y[j] * space[j][r]).sum()).collect() };
    Ok(vec![a.quadratic_form(&lift(&inner[0].1)), a.quadratic_form(&lift(&inner[k - 1].1))])
}

/// Polygon through the support points of `W(A)` at `angles` equally spaced
/// directions.
///
/// ```
/// use minkprod::geom::c;
/// use minkprod::numrange::{numerical_range_boundary, ComplexMatrix};
/// let a = ComplexMatrix::diag(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
/// let w = numerical_range_boundary(&a, 64).unwrap();
/// assert_eq!(w.len(), 2);
/// ```
pub fn numerical_range_boundary(a: &ComplexMatrix, angles: usize) -> Result<ConvexPolygon> {
    if angles < 3 {
        return Err(Error::InvalidInput("need at least 3 angles".into()));
    }
    let pts: Vec<Vec<CScalar>> = (0..angles)
        .into_par_iter()
        .map(|k| support_points(a, 2.0 * std::f64::consts::PI * k as f64 / angles as f64))
        .collect::<Result<_>>()?;
    convex_hull(&pts.concat())
}

/// The support point at each of `angles` directions, in order.
pub fn support_samples(a: &ComplexMatrix, angles: usize) -> Result<Vec<CScalar>> {
    (0..angles)
        .into_par_iter()
        .map(|k| support_points(a, 2.0 * std::f64::consts::PI * k as f64 / angles as f64).map(|p| p[0]))
        .collect()
}

/// Largest eigenvalue of the Hermitian part of `e^{-i theta} A`.
pub fn support_value(a: &ComplexMatrix, theta: f64) -> Result<f64> {
    Ok(hermitian_eigen(&a.rotated_hermitian_part(theta), a.n())?[0].0)
}

/// `W(A) W(B)` as the product of the two polygonal ranges.
#[derive(Debug, Clone)]
pub struct ProductRange {
    pub range_a: ConvexPolygon,
    pub range_b: ConvexPolygon,
}

impl ProductRange {
    pub fn factors(&self) -> (ConvexBody, ConvexBody) {
        (ConvexBody::Polygon(self.range_a.clone()), ConvexBody::Polygon(self.range_b.clone()))
    }

    pub fn contains(&self, z: CScalar, tol: f64) -> bool {
        let (a, b) = self.factors();
        member_exact(&a, &b, z, tol)
    }
}

pub fn product_numerical_range(a: &ComplexMatrix, b: &ComplexMatrix, angles: usize) -> Result<ProductRange> {
    Ok(ProductRange { range_a: numerical_range_boundary(a, angles)?, range_b: numerical_range_boundary(b, angles)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::membership::Verdict;
    use crate::polyprod::{check_star_polygon_product, Candidates};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn nilpotent() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]).unwrap()
    }

    #[test]
    fn jacobi_diagonalizes() {
        let a = [2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0];
        let (vals, _) = jacobi_symmetric(&a, 3).unwrap();
        let mut v = vals.clone();
        v.sort_by(f64::total_cmp);
        let s = 2f64.sqrt();
        for (x, y) in v.iter().zip([2.0 - s, 2.0, 2.0 + s]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn nilpotent_gives_disk() {
        let pts = support_samples(&nilpotent(), 360).unwrap();
        assert_eq!(pts.len(), 360);
        assert!(pts.iter().all(|z| (z.norm() - 0.5).abs() < 1e-9));
        assert_eq!(numerical_range_boundary(&nilpotent(), 360).unwrap().len(), 360);
    }

    #[test]
    fn normal_matrices_give_eigenvalue_hulls() {
        let w = numerical_range_boundary(&ComplexMatrix::diag(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap(), 360).unwrap();
        assert_eq!(w.len(), 2);
        let eig = [c(1.0, 0.0), c(0.0, 2.0), c(-1.0, -1.0), c(0.2, 0.1)];
        let w = numerical_range_boundary(&ComplexMatrix::diag(&eig).unwrap(), 360).unwrap();
        assert_eq!(w.len(), 3);
        for v in w.vertices() {
            assert!(eig.iter().any(|e| (e - v).norm() < 1e-9));
        }
    }

    #[test]
    fn flat_faces_keep_both_ends() {
        // A repeated top eigenvalue at theta = 0.
        let a = ComplexMatrix::diag(&[c(1.0, 1.0), c(1.0, -1.0), c(0.0, 0.0)]).unwrap();
        let pts = support_points(&a, 0.0).unwrap();
        assert_eq!(pts.len(), 2);
        assert!((pts[0] - c(1.0, 1.0)).norm() < 1e-9 || (pts[1] - c(1.0, 1.0)).norm() < 1e-9);
        assert!((pts[0] - c(1.0, -1.0)).norm() < 1e-9 || (pts[1] - c(1.0, -1.0)).norm() < 1e-9);
    }

    #[test]
    fn hermitian_product_is_real_interval() {
        let a = ComplexMatrix::from_rows(&[vec![c(2.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(3.0, 0.0)]]).unwrap();
        let p = product_numerical_range(&a, &a, 64).unwrap();
        assert!(p.range_a.vertices().iter().all(|v| v.im.abs() < 1e-9));
        assert_eq!(p.range_a.len(), 2);
    }

    #[test]
    fn triangle_matrix_product_is_not_star_shaped() {
        let a = ComplexMatrix::diag(&[cis(PI / 3.0), cis(-PI / 3.0), cis(PI / 4.0) * 0.95]).unwrap();
        let p = product_numerical_range(&a, &a, 360).unwrap();
        assert_eq!(p.range_a.len(), 3);
        let r = check_star_polygon_product(&p.range_a, &p.range_b, &Candidates::Auto).unwrap();
        assert_eq!(r.verdict, Verdict::NotStarShaped);
    }

    #[test]
    fn disk_range_times_subset() {
        // W(A) = D(2, 1/2); W(B) = hull of points inside it.
        let a = ComplexMatrix::from_rows(&[vec![c(2.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(2.0, 0.0)]]).unwrap();
        let inside = [c(2.2, 0.1), c(1.8, -0.2), c(2.0, 0.3)];
        let b = ComplexMatrix::diag(&inside).unwrap();
        let wb = numerical_range_boundary(&b, 360).unwrap();
        let cert = crate::disk::star_center_disk_subset(c(2.0, 0.0), 0.5, wb.vertices()).unwrap();
        assert!(cert.verified);
        let p = product_numerical_range(&a, &b, 360).unwrap();
        assert!(p.contains(cert.center_claimed, 1e-6));
    }

    fn matrix4() -> impl Strategy<Value = ComplexMatrix> {
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 16)
            .prop_map(|v| ComplexMatrix::new(4, v.into_iter().map(|(x, y)| c(x, y)).collect()).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10))]

        #[test]
        fn rotation_equivariance(a in matrix4(), phi in -PI..PI) {
            let base = support_samples(&a, 90).unwrap();
            let rot = a.scale(cis(phi));
            for (k, z) in base.iter().enumerate() {
                let theta = 2.0 * PI * k as f64 / 90.0 + phi;
                let p = support_points(&rot, theta).unwrap();
                prop_assert!(p.iter().any(|w| (w - z * cis(phi)).norm() < 1e-8));
            }
        }

        #[test]
        fn translation(a in matrix4(), x in -2.0..2.0f64, y in -2.0..2.0f64) {
            let base = support_samples(&a, 90).unwrap();
            let moved = support_samples(&a.shift(c(x, y)), 90).unwrap();
            for (z, w) in base.iter().zip(&moved) {
                prop_assert!((w - z - c(x, y)).norm() < 1e-8);
            }
        }

        #[test]
        fn support_function_matches(a in matrix4()) {
            let pts = support_samples(&a, 90).unwrap();
            for (k, v) in pts.iter().enumerate() {
                let theta = 2.0 * PI * k as f64 / 90.0;
                prop_assert!(((cis(-theta) * v).re - support_value(&a, theta).unwrap()).abs() < 1e-8);
            }
            let hull = numerical_range_boundary(&a, 90).unwrap();
            prop_assert!(hull.len() >= 3);
        }
    }
}
