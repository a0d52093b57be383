use serde::Serialize;

use crate::{Error, Result};

/// A real function sampled on strictly increasing nodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sampled {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
}

impl Sampled {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::InvalidGrid(format!(
                "{} nodes but {} values",
                nodes.len(),
                values.len()
            )));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid("nodes must be strictly increasing".into()));
        }
        Ok(Self { nodes, values })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn first(&self) -> Option<(f64, f64)> {
        Some((*self.nodes.first()?, *self.values.first()?))
    }

    pub fn last(&self) -> Option<(f64, f64)> {
        Some((*self.nodes.last()?, *self.values.last()?))
    }

    /// Cubic interpolation; out-of-range points are errors.
    pub fn eval(&self, x: f64) -> Result<f64> {
        cubic_lagrange(&self.nodes, &self.values, x)
    }

    pub fn max(&self) -> Option<(f64, f64)> {
        self.nodes
            .iter()
            .zip(&self.values)
            .fold(None, |acc: Option<(f64, f64)>, (&x, &v)| match acc {
                Some((_, best)) if best >= v => acc,
                _ => Some((x, v)),
            })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Four-point Lagrange interpolation on arbitrary strictly increasing nodes.
///
/// Exact at nodes, reproduces cubics, and switches to one-sided stencils at
/// the two ends. Needs at least four nodes.
pub fn cubic_lagrange(nodes: &[f64], values: &[f64], x: f64) -> Result<f64> {
    let len = nodes.len();
    if len < 4 || values.len() != len {
        return Err(Error::InvalidGrid(format!(
            "cubic interpolation needs >= 4 matching samples, got {len}"
        )));
    }
    let (lo, hi) = (nodes[0], nodes[len - 1]);
    if !(x >= lo && x <= hi) {
        return Err(Error::OutOfRange { r: x, min: lo, max: hi });
    }
    // index of the cell [nodes[i], nodes[i+1]] containing x
    let i = match nodes.binary_search_by(|v| v.total_cmp(&x)) {
        Ok(k) => return Ok(values[k]),
        Err(k) => k - 1,
    };
    let start = i.saturating_sub(1).min(len - 4);
    let xs = &nodes[start..start + 4];
    let ys = &values[start..start + 4];
    let mut acc = 0.0;
    for j in 0..4 {
        let mut w = 1.0;
        for k in 0..4 {
            if k != j {
                w *= (x - xs[k]) / (xs[j] - xs[k]);
            }
        }
        acc += w * ys[j];
    }
    Ok(acc)
}
