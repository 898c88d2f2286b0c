use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::state::StateVector;
use super::tree::{FusionSpace, TreeShape};
use crate::error::{Error, Result};
use crate::model::AnyonModel;

/// One basis tree and its amplitude, with charges written as labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDumpRow {
    pub internals: Vec<String>,
    pub re: f64,
    pub im: f64,
}

/// Serializable snapshot of a left-chain state. Amplitudes survive a JSON
/// round trip bit for bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDump {
    pub model: String,
    pub leaves: Vec<String>,
    pub total: String,
    pub rows: Vec<StateDumpRow>,
}

impl StateDump {
    pub fn from_state(state: &StateVector) -> Result<Self> {
        if state.shape() != TreeShape::LeftChain {
            return Err(Error::NonCanonicalShape);
        }
        let m = state.model();
        let label = |c| m.label(c).to_string();
        Ok(StateDump {
            model: m.name().to_string(),
            leaves: state.leaves().iter().map(|&c| label(c)).collect(),
            total: label(state.total()),
            rows: state
                .trees()
                .iter()
                .zip(state.amplitudes())
                .map(|(t, a)| StateDumpRow {
                    internals: t.internals.iter().map(|&c| label(c)).collect(),
                    re: a.re,
                    im: a.im,
                })
                .collect(),
        })
    }

    /// Rebuilds the state. Rows may come in any order; missing trees get
    /// zero amplitude. The amplitudes are taken as stored, without
    /// renormalization.
    pub fn to_state(&self, model: Arc<AnyonModel>) -> Result<StateVector> {
        let leaves = self.leaves.iter().map(|l| model.charge(l)).collect::<Result<Vec<_>>>()?;
        let total = model.charge(&self.total)?;
        let space = Arc::new(FusionSpace::new(model.clone(), &leaves, total, TreeShape::LeftChain)?);
        let mut amps = vec![C64::new(0.0, 0.0); space.dim()];
        for row in &self.rows {
            let key = row.internals.iter().map(|l| model.charge(l)).collect::<Result<Vec<_>>>()?;
            let pos = space
                .position(&key)
                .ok_or_else(|| Error::Precondition(format!("inadmissible tree {:?}", row.internals)))?;
            amps[pos] = C64::new(row.re, row.im);
        }
        Ok(StateVector::from_parts(space, amps).into_state_unchecked())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state dump serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Serde(e.to_string()))
    }
}
