//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use mtqc_core::{load_builtin, AnyonModel, BuiltinModel, Charge, Result, StateVector};
use rand::Rng;

pub fn model(which: BuiltinModel) -> Arc<AnyonModel> {
    Arc::new(load_builtin(which).expect("builtin models load"))
}

/// A random state on `n` leaves of the computational charge with vacuum total.
pub fn random_state<R: Rng>(m: &Arc<AnyonModel>, which: BuiltinModel, n: usize, rng: &mut R) -> Result<(Charge, StateVector)> {
    let a = m.charge(which.computational_label())?;
    let s = StateVector::random(m.clone(), &vec![a; n], Charge::VACUUM, rng)?;
    Ok((a, s))
}
