//! Rigid alignment of sampled surfaces in `Sⁿ⁺²`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// How a comparison against a reference passed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComparisonPath {
    Direct,
    Aligned,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub path: ComparisonPath,
    /// Max Euclidean distance after the chosen path.
    pub max_error: f64,
    /// Max distance without alignment.
    pub direct_error: f64,
}

fn max_distance(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

/// Rotation `R ∈ SO(d)` minimizing `Σ |R pᵢ − qᵢ|²`.
pub fn fit_rotation(points: &[Vec<f64>], reference: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    if points.len() != reference.len() || points.is_empty() {
        return Err(Error::dim(reference.len(), points.len()));
    }
    let d = points[0].len();
    let mut h = DMatrix::<f64>::zeros(d, d);
    for (p, q) in points.iter().zip(reference) {
        if p.len() != d || q.len() != d {
            return Err(Error::dim(d, p.len().min(q.len())));
        }
        for i in 0..d {
            for j in 0..d {
                h[(i, j)] += q[i] * p[j];
            }
        }
    }
    let svd = h.svd(true, true);
    let (u, vt) = (svd.u.expect("u"), svd.v_t.expect("v_t"));
    let mut s = DMatrix::<f64>::identity(d, d);
    if (&u * &vt).determinant() < 0.0 {
        s[(d - 1, d - 1)] = -1.0;
    }
    Ok(u * s * vt)
}

/// Compare pointwise; if the direct distance exceeds `tol`, fit one rotation and compare again.
pub fn compare_with_alignment(points: &[Vec<f64>], reference: &[Vec<f64>], tol: f64) -> Result<Comparison> {
    let direct = max_distance(points, reference);
    if direct <= tol {
        return Ok(Comparison {
            path: ComparisonPath::Direct,
            max_error: direct,
            direct_error: direct,
        });
    }
    let r = fit_rotation(points, reference)?;
    let rotated: Vec<Vec<f64>> = points
        .iter()
        .map(|p| (&r * nalgebra::DVector::from_column_slice(p)).iter().cloned().collect())
        .collect();
    Ok(Comparison {
        path: ComparisonPath::Aligned,
        max_error: max_distance(&rotated, reference),
        direct_error: direct,
    })
}
