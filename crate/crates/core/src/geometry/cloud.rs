//! Weighted point clouds in `C^d` or `H^d`, stored as flat real coordinates.

use std::io::{BufRead, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::sum::compensated_total;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Complex,
    Quaternion,
}

impl Field {
    pub fn real_dim(self) -> usize {
        match self {
            Field::Complex => 2,
            Field::Quaternion => 4,
        }
    }

    fn column_names(self, d: usize) -> Vec<String> {
        let parts: &[&str] = match self {
            Field::Complex => &["re", "im"],
            Field::Quaternion => &["w", "x", "y", "z"],
        };
        (1..=d)
            .flat_map(|i| parts.iter().map(move |p| format!("{p}{i}")))
            .collect()
    }
}

/// A finite measure: points with complex weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PointCloudRepr")]
pub struct PointCloud {
    pub field: Field,
    pub d: usize,
    coords: Vec<f64>,
    #[serde(with = "crate::serde_util::complex_vec")]
    weights: Vec<Complex64>,
}

#[derive(Deserialize)]
struct PointCloudRepr {
    field: Field,
    d: usize,
    coords: Vec<f64>,
    #[serde(with = "crate::serde_util::complex_vec")]
    weights: Vec<Complex64>,
}

impl TryFrom<PointCloudRepr> for PointCloud {
    type Error = Error;

    fn try_from(r: PointCloudRepr) -> Result<Self> {
        PointCloud::new(r.field, r.d, r.coords, r.weights)
    }
}

impl PointCloud {
    pub fn new(field: Field, d: usize, coords: Vec<f64>, weights: Vec<Complex64>) -> Result<Self> {
        let stride = d * field.real_dim();
        if d == 0 {
            return Err(Error::InvalidConfig("dimension must be positive".into()));
        }
        if coords.len() != stride * weights.len() {
            return Err(Error::LengthMismatch {
                expected: stride * weights.len(),
                found: coords.len(),
            });
        }
        if coords.iter().any(|x| !x.is_finite()) || weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidConfig("non-finite coordinate or weight".into()));
        }
        Ok(Self { field, d, coords, weights })
    }

    pub fn complex(points: &[Vec<Complex64>], weights: Vec<Complex64>) -> Result<Self> {
        let d = points.first().map_or(1, Vec::len);
        if let Some(p) = points.iter().find(|p| p.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: p.len() });
        }
        let coords = points.iter().flatten().flat_map(|z| [z.re, z.im]).collect();
        Self::new(Field::Complex, d, coords, weights)
    }

    pub fn unit_weights(field: Field, d: usize, coords: Vec<f64>) -> Result<Self> {
        let n = coords.len() / (d * field.real_dim()).max(1);
        Self::new(field, d, coords, vec![Complex64::new(1.0, 0.0); n])
    }

    pub fn stride(&self) -> usize {
        self.d * self.field.real_dim()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        let s = self.stride();
        &self.coords[i * s..(i + 1) * s]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.stride())
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn total(&self) -> Complex64 {
        compensated_total(&self.weights)
    }

    pub fn is_real(&self) -> bool {
        self.weights.iter().all(|w| w.im == 0.0)
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            weights: self.weights.iter().map(|w| w * lambda).collect(),
            ..self.clone()
        }
    }

    /// CSV with a header row; lines starting with `#` are comments.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = self.field.column_names(self.d);
        header.push("weight_re".into());
        header.push("weight_im".into());
        w.write_record(&header)?;
        for (p, wt) in self.points().zip(&self.weights) {
            let row: Vec<String> = p
                .iter()
                .chain([wt.re, wt.im].iter())
                .map(|x| format!("{x:?}"))
                .collect();
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(input);
        let header = r.headers()?.clone();
        let cols = header.len();
        if cols < 4 || &header[cols - 2] != "weight_re" || &header[cols - 1] != "weight_im" {
            return Err(Error::Parse(
                "expected coordinate columns followed by weight_re,weight_im".into(),
            ));
        }
        let field = if header[0].starts_with('w') { Field::Quaternion } else { Field::Complex };
        let ncoord = cols - 2;
        if ncoord % field.real_dim() != 0 {
            return Err(Error::Parse(format!("{ncoord} coordinate columns")));
        }
        let d = ncoord / field.real_dim();
        let expected = field.column_names(d);
        if header.iter().take(ncoord).ne(expected.iter().map(String::as_str)) {
            return Err(Error::Parse(format!("unexpected header {:?}", header)));
        }
        let mut coords = Vec::new();
        let mut weights = Vec::new();
        for (line, rec) in r.records().enumerate() {
            let rec = rec?;
            let vals: Vec<f64> = rec
                .iter()
                .map(|s| s.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("row {}: {e}", line + 1)))?;
            coords.extend_from_slice(&vals[..ncoord]);
            weights.push(Complex64::new(vals[ncoord], vals[ncoord + 1]));
        }
        Self::new(field, d, coords, weights)
    }

    /// Reads `.json` files as JSON and anything else as CSV.
    pub fn load(path: &Path) -> Result<Self> {
        let file = std::io::BufReader::new(std::fs::File::open(path)?);
        if path.extension().is_some_and(|e| e == "json") {
            Ok(serde_json::from_reader(file)?)
        } else {
            Self::read_csv(file)
        }
    }
}

/// The measures `mu_1, ..., mu_m`, all in the same space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSet {
    pub measures: Vec<PointCloud>,
}

impl MeasureSet {
    pub fn new(measures: Vec<PointCloud>) -> Result<Self> {
        let first = measures
            .first()
            .ok_or_else(|| Error::InvalidConfig("no measures".into()))?;
        for m in &measures {
            if m.field != first.field {
                return Err(Error::InvalidConfig("measures mix complex and quaternionic points".into()));
            }
            if m.d != first.d {
                return Err(Error::DimensionMismatch { expected: first.d, found: m.d });
            }
        }
        Ok(Self { measures })
    }

    pub fn d(&self) -> usize {
        self.measures[0].d
    }

    pub fn field(&self) -> Field {
        self.measures[0].field
    }

    pub fn len(&self) -> usize {
        self.measures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measures.is_empty()
    }

    pub fn totals(&self) -> Vec<Complex64> {
        self.measures.iter().map(PointCloud::total).collect()
    }
}
