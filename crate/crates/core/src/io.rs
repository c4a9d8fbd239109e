//! JSON document formats: complex numbers as `[re, im]`, matrices as arrays of rows.

use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::loops::LaurentLoop;
use crate::{CMat, Error, Result, C64};

/// `C64` as a two-element array.
pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(c: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
        [c.re, c.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(re, im))
    }
}

/// `Vec<C64>` as an array of two-element arrays.
pub mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<C64>, D::Error> {
        let raw = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(raw.into_iter().map(|[re, im]| C64::new(re, im)).collect())
    }
}

/// Row-major nested array form of a complex matrix.
pub fn matrix_to_rows(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

/// Inverse of [`matrix_to_rows`].
pub fn matrix_from_rows(rows: &[Vec<[f64; 2]>]) -> Result<CMat> {
    let nr = rows.len();
    let nc = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != nc) {
        return Err(Error::Parse("ragged matrix rows".into()));
    }
    Ok(CMat::from_fn(nr, nc, |i, j| C64::new(rows[i][j][0], rows[i][j][1])))
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct LoopTerm {
    degree: i32,
    entries: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct LoopDocument {
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    coeffs: Vec<LoopTerm>,
}

/// Serialize a loop as a degree-indexed coefficient array.
pub fn loop_to_json(l: &LaurentLoop, label: Option<&str>) -> Result<String> {
    let doc = LoopDocument {
        dim: l.dim(),
        label: label.map(str::to_string),
        coeffs: l
            .terms()
            .map(|(k, c)| LoopTerm {
                degree: k,
                entries: matrix_to_rows(c),
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

/// Parse a loop written by [`loop_to_json`] (or by hand).
pub fn loop_from_json(s: &str) -> Result<LaurentLoop> {
    let doc: LoopDocument = serde_json::from_str(s)?;
    let terms = doc
        .coeffs
        .iter()
        .map(|t| {
            let m = matrix_from_rows(&t.entries)?;
            if m.nrows() != doc.dim || m.ncols() != doc.dim {
                return Err(Error::dim(
                    format!("{0}x{0}", doc.dim),
                    format!("{}x{}", m.nrows(), m.ncols()),
                ));
            }
            Ok((t.degree, m))
        })
        .collect::<Result<Vec<_>>>()?;
    LaurentLoop::from_terms(doc.dim, terms)
}

pub fn read_loop(path: &Path) -> Result<LaurentLoop> {
    loop_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_loop(path: &Path, l: &LaurentLoop, label: Option<&str>) -> Result<()> {
    std::fs::write(path, loop_to_json(l, label)?)?;
    Ok(())
}
