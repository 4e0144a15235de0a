//! Point sequences and instances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered, nonempty list of points in `R^d`, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSequence {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSequence {
    /// Builds a sequence from a flat row-major coordinate buffer.
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("dimension must be positive"));
        }
        if coords.is_empty() {
            return Err(Error::input("point sequence must have at least one point"));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::input(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        if let Some(pos) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::input(format!(
                "non-finite coordinate in point {}",
                pos / dim + 1
            )));
        }
        Ok(PointSequence { dim, coords })
    }

    pub fn from_points<P: AsRef<[f64]>>(points: &[P]) -> Result<Self> {
        let dim = points
            .first()
            .map(|p| p.as_ref().len())
            .ok_or_else(|| Error::input("point sequence must have at least one point"))?;
        let mut coords = Vec::with_capacity(dim * points.len());
        for (i, p) in points.iter().enumerate() {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(Error::input(format!(
                    "point {} has {} coordinates, expected {dim}",
                    i + 1,
                    p.len()
                )));
            }
            coords.extend_from_slice(p);
        }
        Self::from_flat(dim, coords)
    }

    /// One-dimensional sequence from scalar values.
    pub fn from_scalars(values: &[f64]) -> Result<Self> {
        Self::from_flat(1, values.to_vec())
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Point at 0-based position `idx`.
    #[inline]
    pub fn point(&self, idx: usize) -> &[f64] {
        &self.coords[idx * self.dim..(idx + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }

    /// Contiguous subsequence `[start, start + len)`.
    pub fn slice(&self, start: usize, len: usize) -> Result<Self> {
        if len == 0 || start + len > self.len() {
            return Err(Error::input(format!(
                "subsequence [{start}, {}) out of range for length {}",
                start + len,
                self.len()
            )));
        }
        Ok(PointSequence {
            dim: self.dim,
            coords: self.coords[start * self.dim..(start + len) * self.dim].to_vec(),
        })
    }

    /// Largest squared Euclidean norm among the points.
    pub fn max_squared_norm(&self) -> f64 {
        self.points().map(squared_norm).fold(0.0, f64::max)
    }

    /// Sum of squared distances between corresponding points (equal lengths required).
    pub fn squared_distance(&self, other: &PointSequence) -> Result<f64> {
        if self.dim != other.dim || self.len() != other.len() {
            return Err(Error::input("sequences differ in shape"));
        }
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum())
    }
}

#[inline]
pub(crate) fn squared_norm(p: &[f64]) -> f64 {
    p.iter().map(|c| c * c).sum()
}

#[inline]
pub(crate) fn squared_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// A set of `n >= 1` point sequences of common length `m` and dimension `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    sequences: Vec<PointSequence>,
}

impl Instance {
    pub fn new(sequences: Vec<PointSequence>) -> Result<Self> {
        let first = sequences
            .first()
            .ok_or_else(|| Error::input("instance needs at least one sequence"))?;
        let (m, d) = (first.len(), first.dim());
        for (i, s) in sequences.iter().enumerate() {
            if s.len() != m {
                return Err(Error::input(format!(
                    "sequence {} has length {}, expected {m}",
                    i + 1,
                    s.len()
                )));
            }
            if s.dim() != d {
                return Err(Error::input(format!(
                    "sequence {} has dimension {}, expected {d}",
                    i + 1,
                    s.dim()
                )));
            }
        }
        Ok(Instance { sequences })
    }

    pub fn sequences(&self) -> &[PointSequence] {
        &self.sequences
    }

    pub fn n(&self) -> usize {
        self.sequences.len()
    }

    pub fn m(&self) -> usize {
        self.sequences[0].len()
    }

    pub fn dim(&self) -> usize {
        self.sequences[0].dim()
    }

    /// Normalization parameter: the largest squared norm of any input point.
    pub fn max_squared_norm(&self) -> f64 {
        self.sequences
            .iter()
            .map(PointSequence::max_squared_norm)
            .fold(0.0, f64::max)
    }

    /// Affinely maps all coordinates into `[0, 1]^d` using one common scale,
    /// preserving the geometry up to similarity.
    pub fn normalized_to_unit_box(&self) -> Instance {
        let d = self.dim();
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for s in &self.sequences {
            for p in s.points() {
                for c in 0..d {
                    lo[c] = lo[c].min(p[c]);
                    hi[c] = hi[c].max(p[c]);
                }
            }
        }
        let extent = lo.iter().zip(&hi).map(|(l, h)| h - l).fold(0.0, f64::max);
        let scale = if extent > 0.0 { 1.0 / extent } else { 1.0 };
        let sequences = self
            .sequences
            .iter()
            .map(|s| {
                let coords = s
                    .as_flat()
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| (v - lo[i % d]) * scale)
                    .collect();
                PointSequence { dim: d, coords }
            })
            .collect();
        Instance { sequences }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sequences() {
        assert!(PointSequence::from_flat(2, vec![]).is_err());
        assert!(PointSequence::from_flat(2, vec![1.0, 2.0, 3.0]).is_err());
        assert!(PointSequence::from_flat(1, vec![f64::NAN]).is_err());
        assert!(PointSequence::from_points(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn instance_requires_equal_shapes() {
        let a = PointSequence::from_scalars(&[1.0, 2.0]).unwrap();
        let b = PointSequence::from_scalars(&[1.0]).unwrap();
        assert!(Instance::new(vec![a.clone(), b]).is_err());
        assert!(Instance::new(vec![]).is_err());
        let inst = Instance::new(vec![a.clone(), a]).unwrap();
        assert_eq!((inst.n(), inst.m(), inst.dim()), (2, 2, 1));
    }

    #[test]
    fn max_squared_norm_three_four_five() {
        let s = PointSequence::from_points(&[[3.0, 4.0]]).unwrap();
        assert_eq!(s.max_squared_norm(), 25.0);
    }

    #[test]
    fn unit_box_normalization() {
        let s = PointSequence::from_points(&[[-2.0, 0.0], [2.0, 1.0]]).unwrap();
        let inst = Instance::new(vec![s]).unwrap().normalized_to_unit_box();
        let p = inst.sequences()[0].as_flat();
        assert_eq!(p, &[0.0, 0.0, 1.0, 0.25]);
    }
}
