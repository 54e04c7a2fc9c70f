use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::UnaryFn;
use crate::scalar::Scalar;
use crate::timescale::{Piece, TimeScale};

/// Values of a function on a finite set of time-scale nodes.
///
/// Between two nodes of the same continuous piece the function is linear.
/// Across a gap it keeps the value of the left node, which matches the
/// step extension used on scattered points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct GridFunction<S> {
    nodes: Vec<S>,
    values: Vec<S>,
    /// `linked[i]` is true when `nodes[i]` and `nodes[i + 1]` lie in the
    /// same interval of the scale.
    linked: Vec<bool>,
}

impl<S: Scalar> GridFunction<S> {
    pub fn new(nodes: Vec<S>, values: Vec<S>, linked: Vec<bool>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::invalid(
                "fracops",
                "grid function needs at least one node",
            ));
        }
        if values.len() != nodes.len() || linked.len() + 1 != nodes.len() {
            return Err(Error::invalid(
                "fracops",
                format!(
                    "grid function sizes disagree: {} nodes, {} values, {} links",
                    nodes.len(),
                    values.len(),
                    linked.len()
                ),
            ));
        }
        if let Some(w) = nodes.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::invalid(
                "fracops",
                format!(
                    "grid nodes must be strictly increasing ({} then {})",
                    w[0], w[1]
                ),
            ));
        }
        Ok(Self {
            nodes,
            values,
            linked,
        })
    }

    /// Builds a grid function on `nodes ⊆ T`, deriving the links from the
    /// pieces of `ts`.
    pub fn on_scale(ts: &TimeScale<S>, nodes: Vec<S>, values: Vec<S>) -> Result<Self> {
        let snapped = nodes
            .iter()
            .map(|&n| ts.snap(n))
            .collect::<Result<Vec<_>>>()?;
        let linked = link_nodes(ts, &snapped)?;
        Self::new(snapped, values, linked)
    }

    /// Samples `f` at the given nodes.
    pub fn sample<F: UnaryFn<S> + ?Sized>(ts: &TimeScale<S>, nodes: Vec<S>, f: &F) -> Result<Self> {
        let values = nodes
            .iter()
            .map(|&n| f.call(n))
            .collect::<Result<Vec<_>>>()?;
        Self::on_scale(ts, nodes, values)
    }

    pub fn nodes(&self) -> &[S] {
        &self.nodes
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn linked(&self) -> &[bool] {
        &self.linked
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Same nodes, new values.
    pub fn with_values(&self, values: Vec<S>) -> Result<Self> {
        Self::new(self.nodes.clone(), values, self.linked.clone())
    }

    /// Largest absolute difference of values at the shared nodes.
    pub fn sup_distance(&self, other: &Self) -> Result<S> {
        if self.nodes != other.nodes {
            return Err(Error::invalid(
                "fracops",
                "grid functions live on different nodes",
            ));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (*a - *b).abs())
            .fold(S::zero(), S::max))
    }

    pub fn sup_norm(&self) -> S {
        self.values.iter().map(|v| v.abs()).fold(S::zero(), S::max)
    }

    pub fn eval(&self, s: S) -> Result<S> {
        let eps = S::membership_tol();
        let first = self.nodes[0];
        let last = self.nodes[self.nodes.len() - 1];
        if !(s >= first - eps && s <= last + eps) {
            return Err(Error::invalid(
                "fracops",
                format!("{s} is outside the grid [{first}, {last}]"),
            ));
        }
        let idx = self.nodes.partition_point(|&n| n <= s);
        if idx == 0 {
            return Ok(self.values[0]);
        }
        let i = idx - 1;
        if i + 1 == self.nodes.len() || s == self.nodes[i] || !self.linked[i] {
            return Ok(self.values[i]);
        }
        let (x0, x1) = (self.nodes[i], self.nodes[i + 1]);
        let w = (s - x0) / (x1 - x0);
        Ok(self.values[i] + w * (self.values[i + 1] - self.values[i]))
    }
}

impl<S: Scalar> UnaryFn<S> for GridFunction<S> {
    fn call(&self, t: S) -> Result<S> {
        self.eval(t)
    }
}

pub(crate) fn link_nodes<S: Scalar>(ts: &TimeScale<S>, nodes: &[S]) -> Result<Vec<bool>> {
    let mut linked = Vec::with_capacity(nodes.len().saturating_sub(1));
    for w in nodes.windows(2) {
        linked.push(match ts.piece_at(w[0])? {
            Piece::Interval { hi, .. } => w[1] <= hi,
            Piece::Point { .. } => false,
        });
    }
    Ok(linked)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_respects_gaps() {
        let ts = TimeScale::canonicalize([
            Piece::Interval { lo: 0.0, hi: 1.0 },
            Piece::Interval { lo: 2.0, hi: 3.0 },
        ])
        .unwrap();
        let g = GridFunction::sample(&ts, vec![0.0, 1.0, 2.0, 3.0], &|t: f64| t * t).unwrap();
        assert_eq!(g.linked(), &[true, false, true]);
        assert_eq!(g.eval(0.5).unwrap(), 0.5);
        assert_eq!(g.eval(1.5).unwrap(), 1.0);
        assert_eq!(g.eval(2.5).unwrap(), 6.5);
        assert_eq!(g.eval(3.0).unwrap(), 9.0);
        assert!(g.eval(3.5).is_err());
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(GridFunction::new(vec![0.0, 0.0], vec![1.0, 1.0], vec![true]).is_err());
        assert!(GridFunction::new(vec![0.0, 1.0], vec![1.0], vec![true]).is_err());
        assert!(GridFunction::<f64>::new(vec![], vec![], vec![]).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let ts = TimeScale::uniform(1.0, 0.0, 3.0).unwrap();
        let g = GridFunction::sample(&ts, vec![0.0, 1.0, 2.0], &|t: f64| t + 1.0).unwrap();
        let json = serde_json::to_string(&g).unwrap();
        let back: GridFunction<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(g, back);
    }
}
