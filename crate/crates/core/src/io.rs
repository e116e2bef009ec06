//! Versioned JSON forms of sequences and grids.

use serde::{Deserialize, Serialize};

use crate::distributions::Distribution1D;
use crate::error::{domain, Error, Result};
use crate::greedy1d::{GreedySequence, InsertionStep};
use crate::product_grid::ProductGrid;

pub const SCHEMA: u32 = 1;

/// On-disk form of a greedy sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceFile {
    pub schema: u32,
    pub distribution: String,
    pub n: usize,
    pub points_in_insertion_order: Vec<f64>,
    pub error_sq_trace: Vec<f64>,
    pub steps: Vec<InsertionStep>,
}

impl SequenceFile {
    pub fn from_sequence(seq: &GreedySequence) -> Self {
        SequenceFile {
            schema: SCHEMA,
            distribution: seq.dist().to_string(),
            n: seq.len(),
            points_in_insertion_order: seq.points().to_vec(),
            error_sq_trace: seq.error_sq_trace().to_vec(),
            steps: seq.steps().to_vec(),
        }
    }

    /// Rebuilds the ledger from the points. The stored trace is checked
    /// against the rebuilt one.
    pub fn to_sequence(&self) -> Result<GreedySequence> {
        check_schema(self.schema)?;
        let dist: Distribution1D = self.distribution.parse()?;
        if self.points_in_insertion_order.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: self.points_in_insertion_order.len(),
            });
        }
        let seq = GreedySequence::from_points(dist, &self.points_in_insertion_order)
            .ok_or_else(|| Error::Parse("points are not distinct finite values".into()))?;
        let consistent = seq.error_sq_trace().len() == self.error_sq_trace.len()
            && seq
                .error_sq_trace()
                .iter()
                .zip(&self.error_sq_trace)
                .all(|(a, b)| (a - b).abs() <= 1e-10 * (1.0 + b.abs()));
        if !consistent {
            return domain("stored error trace does not match the points");
        }
        Ok(seq)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// On-disk form of a product grid. Marginal sequences are stored in their
/// own files and referenced by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFile {
    pub schema: u32,
    pub method: String,
    pub dim: usize,
    pub marginals: Vec<String>,
    pub scales: Vec<f64>,
    pub sizes: Vec<usize>,
    pub history: Vec<usize>,
}

impl GridFile {
    pub fn from_grid(grid: &ProductGrid, method: &str, marginal_refs: Vec<String>) -> Result<Self> {
        if marginal_refs.len() != grid.dim() {
            return Err(Error::DimensionMismatch {
                expected: grid.dim(),
                got: marginal_refs.len(),
            });
        }
        Ok(GridFile {
            schema: SCHEMA,
            method: method.to_string(),
            dim: grid.dim(),
            marginals: marginal_refs,
            scales: grid.scales().to_vec(),
            sizes: grid.sizes(),
            history: grid.history().to_vec(),
        })
    }

    /// Reassembles the grid from the referenced sequences, in order.
    pub fn to_grid(&self, marginals: Vec<GreedySequence>) -> Result<ProductGrid> {
        check_schema(self.schema)?;
        if marginals.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: marginals.len(),
            });
        }
        ProductGrid::from_sequences(marginals, self.scales.clone())?
            .with_history(self.history.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn check_schema(schema: u32) -> Result<()> {
    if schema == SCHEMA {
        Ok(())
    } else {
        Err(Error::Parse(format!("unsupported schema {schema}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_round_trip() {
        let seq = GreedySequence::build(Distribution1D::std_exponential(), 50);
        let file = SequenceFile::from_sequence(&seq);
        let back = SequenceFile::from_json(&file.to_json()).unwrap();
        assert_eq!(back, file);
        let rebuilt = back.to_sequence().unwrap();
        assert_eq!(rebuilt.points(), seq.points());
        assert_eq!(rebuilt.weights(), seq.weights());
    }

    #[test]
    fn sequence_file_rejects_tampering() {
        let seq = GreedySequence::build(Distribution1D::std_normal(), 10);
        let mut file = SequenceFile::from_sequence(&seq);
        file.error_sq_trace[5] *= 2.0;
        assert!(file.to_sequence().is_err());
        file = SequenceFile::from_sequence(&seq);
        file.schema = 2;
        assert!(file.to_sequence().is_err());
        assert!(SequenceFile::from_json("{").is_err());
    }

    #[test]
    fn grid_round_trip() {
        let mut grid = ProductGrid::new(&[Distribution1D::std_uniform(); 2]).unwrap();
        grid.grow_to(30);
        let file =
            GridFile::from_grid(&grid, "product", vec!["a.json".into(), "b.json".into()]).unwrap();
        let back = GridFile::from_json(&file.to_json()).unwrap();
        let restored = back.to_grid(grid.marginals().to_vec()).unwrap();
        assert_eq!(restored.history(), grid.history());
        assert_eq!(restored.product_weights(), grid.product_weights());

        let mut bad = back.clone();
        bad.history.pop();
        assert!(bad.to_grid(grid.marginals().to_vec()).is_err());
    }
}
