use serde::Serialize;

use crate::{Error, Result};

/// Smallest grid accepted anywhere in the crate.
pub const MIN_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepPolicy {
    Uniform {
        step: f64,
    },
    /// First step `first`, each following step multiplied by `growth` until
    /// it reaches `max_step`.
    Geometric {
        first: f64,
        growth: f64,
        max_step: f64,
    },
    Custom,
}

/// Radii `0 = r_0 < r_1 < ... < r_N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    policy: StepPolicy,
}

impl RadialGrid {
    /// Uniform grid on `[0, r_max]`. The step is adjusted down so that `r_max`
    /// is hit exactly.
    pub fn uniform(r_max: f64, step: f64) -> Result<Self> {
        if !(r_max > 0.0 && step > 0.0 && r_max.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "uniform grid needs r_max > 0 and step > 0 (r_max = {r_max}, step = {step})"
            )));
        }
        let cells = (r_max / step - 1e-9).ceil().max(1.0) as usize;
        let h = r_max / cells as f64;
        let mut nodes: Vec<f64> = (0..=cells).map(|i| i as f64 * h).collect();
        nodes[cells] = r_max;
        Self::with_policy(nodes, StepPolicy::Uniform { step: h })
    }

    /// Geometrically graded grid on `[0, r_max]`, fine near the origin.
    pub fn geometric(r_max: f64, first: f64, growth: f64, max_step: f64) -> Result<Self> {
        if !(r_max > 0.0 && first > 0.0 && growth >= 1.0 && max_step >= first) {
            return Err(Error::InvalidGrid(format!(
                "geometric grid needs r_max > 0, 0 < first <= max_step, growth >= 1 \
                 (r_max = {r_max}, first = {first}, growth = {growth}, max_step = {max_step})"
            )));
        }
        let mut nodes = vec![0.0];
        let mut h = first;
        let mut r = 0.0;
        while r + h < r_max * (1.0 - 1e-12) {
            r += h;
            nodes.push(r);
            h = (h * growth).min(max_step);
        }
        // merge a sliver of a last cell into its neighbour
        if nodes.len() > 1 && r_max - r < 0.5 * h {
            nodes.pop();
        }
        nodes.push(r_max);
        Self::with_policy(
            nodes,
            StepPolicy::Geometric {
                first,
                growth,
                max_step,
            },
        )
    }

    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        Self::with_policy(nodes, StepPolicy::Custom)
    }

    fn with_policy(nodes: Vec<f64>, policy: StepPolicy) -> Result<Self> {
        if nodes.len() < MIN_NODES {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_NODES} nodes, got {}",
                nodes.len()
            )));
        }
        if nodes[0] != 0.0 {
            return Err(Error::InvalidGrid(format!("first node must be 0, got {}", nodes[0])));
        }
        if nodes.iter().any(|r| !r.is_finite()) || nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid(
                "nodes must be finite and strictly increasing".into(),
            ));
        }
        Ok(Self { nodes, policy })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn r_max(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn policy(&self) -> StepPolicy {
        self.policy
    }

    /// Returns the step if the grid is uniform.
    pub fn uniform_step(&self) -> Option<f64> {
        match self.policy {
            StepPolicy::Uniform { step } => Some(step),
            _ => None,
        }
    }

    /// Grid truncated to its first `count` nodes.
    pub fn truncated(&self, count: usize) -> Result<Self> {
        Self::with_policy(self.nodes[..count.min(self.len())].to_vec(), self.policy)
    }
}
