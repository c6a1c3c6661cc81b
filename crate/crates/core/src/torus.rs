//! Points, periodic distances, and uniform sampling on the unit torus.
//!
//! Coordinates are stored in canonical `[0,1)` form; wrap-around arithmetic
//! happens only when distances are taken. Sampling draws coordinates in
//! row-major order (point index first, then coordinate) from a ChaCha8
//! stream, so a cloud regenerates bit-identically from `(n, d, seed)`.

use std::io::Write;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// A point on the d-dimensional unit torus; every coordinate lies in `[0,1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint {
    coords: Vec<f64>,
}

impl TorusPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("point dimension must be >= 1".into()));
        }
        for &c in &coords {
            if !(0.0..1.0).contains(&c) {
                return Err(Error::InvalidParameter(format!(
                    "coordinate {c} outside [0,1)"
                )));
            }
        }
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// A fixed set of torus points, together with the seed that produced it.
#[derive(Debug, Clone)]
pub struct PointCloud {
    points: Vec<TorusPoint>,
    seed: u64,
}

impl PointCloud {
    /// Builds a cloud from explicit points; all points must share a dimension.
    pub fn from_points(points: Vec<TorusPoint>, seed: u64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("point cloud must be non-empty".into()));
        }
        let d = points[0].dim();
        for p in &points {
            if p.dim() != d {
                return Err(Error::DimensionMismatch { left: d, right: p.dim() });
            }
        }
        Ok(Self { points, seed })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn points(&self) -> &[TorusPoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &TorusPoint {
        &self.points[i]
    }

    /// Writes the cloud as CSV: a `# dim,n,seed` comment line, then one
    /// point per row.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "# dim={},n={},seed={}", self.dim(), self.len(), self.seed)?;
        for p in &self.points {
            let row: Vec<String> = p.coords().iter().map(|c| format!("{c:.16e}")).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Samples `n` i.i.d. points uniform on the d-dimensional unit torus.
pub fn sample_uniform(n: usize, d: usize, seed: u64) -> Result<PointCloud> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    if d < 1 {
        return Err(Error::InvalidParameter("d must be >= 1".into()));
    }
    let mut rng = stream_rng(seed, 0);
    let points = (0..n)
        .map(|_| TorusPoint {
            coords: (0..d).map(|_| rng.gen::<f64>()).collect(),
        })
        .collect();
    Ok(PointCloud { points, seed })
}

/// Periodic Euclidean distance: per coordinate `min(|Δ|, 1-|Δ|)`, then the
/// Euclidean norm. Bounded by `sqrt(d)/2`.
pub fn torus_distance(a: &TorusPoint, b: &TorusPoint) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    Ok(torus_distance_coords(a.coords(), b.coords()))
}

/// Distance on raw coordinate slices (both already canonical in `[0,1)`).
pub(crate) fn torus_distance_coords(a: &[f64], b: &[f64]) -> f64 {
    let mut sum = 0.0;
    for (x, y) in a.iter().zip(b) {
        let delta = (x - y).abs();
        let wrapped = delta.min(1.0 - delta);
        sum += wrapped * wrapped;
    }
    sum.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pt(coords: &[f64]) -> TorusPoint {
        TorusPoint::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn single_point_in_unit_interval() {
        let cloud = sample_uniform(1, 1, 42).unwrap();
        let c = cloud.point(0).coords()[0];
        assert!((0.0..1.0).contains(&c));
    }

    #[test]
    fn coordinate_means_match_uniform_law() {
        // 3-sigma bound with sigma = 1/sqrt(12 * 1000)
        let cloud = sample_uniform(1000, 2, 7).unwrap();
        for axis in 0..2 {
            let mean: f64 =
                cloud.points().iter().map(|p| p.coords()[axis]).sum::<f64>() / 1000.0;
            assert!((0.45..=0.55).contains(&mean), "axis {axis} mean {mean}");
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_uniform(50, 3, 99).unwrap();
        let b = sample_uniform(50, 3, 99).unwrap();
        assert_eq!(a.points(), b.points());
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(sample_uniform(0, 1, 0).is_err());
        assert!(sample_uniform(1, 0, 0).is_err());
        assert!(TorusPoint::new(vec![1.0]).is_err());
        assert!(TorusPoint::new(vec![-0.1]).is_err());
    }

    #[test]
    fn wraparound_distance() {
        assert_abs_diff_eq!(
            torus_distance(&pt(&[0.1]), &pt(&[0.9])).unwrap(),
            0.2,
            epsilon = 1e-15
        );
    }

    #[test]
    fn maximal_separation() {
        assert_abs_diff_eq!(
            torus_distance(&pt(&[0.0, 0.0]), &pt(&[0.5, 0.5])).unwrap(),
            0.5_f64.sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn identity_distance_is_zero() {
        let p = pt(&[0.3, 0.7]);
        assert_eq!(torus_distance(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        assert!(torus_distance(&pt(&[0.1]), &pt(&[0.1, 0.2])).is_err());
    }

    #[test]
    fn uniformity_histogram() {
        // 10 equal bins over 1e5 draws, each bin within 10% +/- 1.5%.
        let cloud = sample_uniform(100_000, 1, 1234).unwrap();
        let mut bins = [0usize; 10];
        for p in cloud.points() {
            let b = ((p.coords()[0] * 10.0) as usize).min(9);
            bins[b] += 1;
        }
        for (i, &count) in bins.iter().enumerate() {
            let frac = count as f64 / 100_000.0;
            assert!((0.085..=0.115).contains(&frac), "bin {i}: {frac}");
        }
    }

    #[test]
    fn csv_export_roundtrips_header() {
        let cloud = sample_uniform(3, 2, 5).unwrap();
        let mut buf = Vec::new();
        cloud.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# dim=2,n=3,seed=5\n"));
        assert_eq!(text.lines().count(), 4);
    }
}
