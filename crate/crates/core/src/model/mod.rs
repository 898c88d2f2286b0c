//! Multiplicity-free anyon models: charges, fusion rules, quantum dimensions,
//! F-symbols and R-symbols.
//!
//! Charges are addressed by dense integer indices; index 0 is always the
//! vacuum. Labels exist only for presentation and file I/O.
//!
//! F-symbol convention: `[F^{abc}_d]_{ef}` maps the basis where `a` and `b`
//! fuse first (to `e`) onto the basis where `b` and `c` fuse first (to `f`):
//!
//! ```text
//! |(a b)_e c; d> = sum_f [F^{abc}_d]_{ef} |a (b c)_f; d>
//! ```
//!
//! R-symbol convention: the positive exchange of two neighbouring anyons in
//! channel `c` acts as `|a, b; c> -> R^{ab}_c |b, a; c>`. With the F-symbols
//! above this is the convention in which the hexagon equation reads
//! `R^{ca}_e [F^{acb}_d]_{eg} R^{cb}_g = sum_f [F^{cab}_d]_{ef} R^{cf}_d [F^{abc}_d]_{fg}`.

mod builtin;
mod consistency;
mod file;
mod qgroup;

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use builtin::{load_builtin, BuiltinModel};
pub use consistency::{ConsistencyReport, DEFAULT_TOLERANCE};
pub use file::{parse_model_file, write_model_file};

/// A topological charge, referenced by its index within a model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Charge(pub usize);

impl Charge {
    pub const VACUUM: Charge = Charge(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0
    }

    #[inline]
    pub fn is_vacuum(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Charge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Raw, unvalidated model description. Builtin tables and model files both
/// produce one of these; [`AnyonModel::from_data`] turns it into a model.
#[derive(Clone, Debug, Default)]
pub struct ModelData {
    pub name: String,
    pub level: Option<u32>,
    /// Free-form note about the gauge the symbols are written in.
    pub gauge: String,
    pub labels: Vec<String>,
    pub dual: Vec<usize>,
    /// `fusion[a][b]` lists every `c` with `N_ab^c = 1`.
    pub fusion: Vec<Vec<Vec<usize>>>,
    pub qdim: Vec<f64>,
    /// Keyed by `[a, b, c, d, e, f]`. Missing entries of one-dimensional
    /// admissible blocks default to 1.
    pub f_symbols: HashMap<[usize; 6], C64>,
    /// Keyed by `[a, b, c]`. Missing entries involving the vacuum default to 1.
    pub r_symbols: HashMap<[usize; 3], C64>,
}

/// One admissible F-matrix `[F^{abc}_d]` with its row (`e`) and column (`f`)
/// labels.
#[derive(Clone, Debug)]
pub struct FBlock {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    data: Vec<C64>,
}

impl FBlock {
    #[inline]
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols.len() + c]
    }

    #[inline]
    fn row_pos(&self, e: usize) -> Option<usize> {
        self.rows.iter().position(|&x| x == e)
    }

    #[inline]
    fn col_pos(&self, f: usize) -> Option<usize> {
        self.cols.iter().position(|&x| x == f)
    }

    fn get(&self, e: usize, f: usize) -> C64 {
        match (self.row_pos(e), self.col_pos(f)) {
            (Some(r), Some(c)) => self.at(r, c),
            _ => C64::new(0.0, 0.0),
        }
    }
}

/// A validated multiplicity-free anyon model. Immutable once built.
#[derive(Clone, Debug)]
pub struct AnyonModel {
    name: String,
    level: Option<u32>,
    gauge: String,
    labels: Vec<String>,
    dual: Vec<usize>,
    fusion: Vec<Vec<Vec<usize>>>,
    fusion_mask: Vec<bool>,
    qdim: Vec<f64>,
    f_blocks: Vec<Option<FBlock>>,
    r: Vec<C64>,
    data: ModelData,
}

impl AnyonModel {
    /// Builds a model from raw data, checking structure only (vacuum, duals,
    /// fusion table shape, symbol admissibility). Numerical consistency is
    /// checked separately by [`AnyonModel::verify_consistency`].
    pub fn from_data(data: ModelData) -> Result<Self> {
        let n = data.labels.len();
        if n == 0 {
            return Err(Error::InvalidModel("model has no charges".into()));
        }
        if data.dual.len() != n || data.qdim.len() != n || data.fusion.len() != n {
            return Err(Error::InvalidModel(
                "dual, qdim and fusion tables must cover every charge".into(),
            ));
        }
        let mut fusion = data.fusion.clone();
        let mut mask = vec![false; n * n * n];
        for (a, row) in fusion.iter_mut().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidModel(format!("fusion row {a} has wrong length")));
            }
            for (b, outs) in row.iter_mut().enumerate() {
                outs.sort_unstable();
                let before = outs.len();
                outs.dedup();
                if outs.len() != before {
                    return Err(Error::InvalidModel(format!(
                        "fusion {a} x {b} lists a channel twice (multiplicities are unsupported)"
                    )));
                }
                for &c in outs.iter() {
                    if c >= n {
                        return Err(Error::UnknownCharge(c));
                    }
                    mask[(a * n + b) * n + c] = true;
                }
            }
        }
        for a in 0..n {
            if fusion[0][a] != [a] || fusion[a][0] != [a] {
                return Err(Error::InvalidModel(format!(
                    "charge 0 must act as the vacuum (0 x {a} = {a})"
                )));
            }
            for b in 0..n {
                if fusion[a][b] != fusion[b][a] {
                    return Err(Error::InvalidModel(format!("fusion {a} x {b} is not commutative")));
                }
            }
        }
        for a in 0..n {
            let ad = data.dual[a];
            if ad >= n || data.dual[ad] != a {
                return Err(Error::InvalidModel(format!("dual map is not an involution at {a}")));
            }
            let vac: Vec<usize> = (0..n).filter(|&b| mask[(a * n + b) * n]).collect();
            if vac != [ad] {
                return Err(Error::InvalidModel(format!(
                    "charge {a} must fuse to the vacuum with exactly its dual"
                )));
            }
            if !(data.qdim[a] > 0.0) {
                return Err(Error::InvalidModel(format!("quantum dimension of {a} must be positive")));
            }
        }
        if data.dual[0] != 0 {
            return Err(Error::InvalidModel("the vacuum must be self-dual".into()));
        }

        let fuses = |a: usize, b: usize, c: usize| mask[(a * n + b) * n + c];
        let mut f_blocks = vec![None; n * n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let rows: Vec<usize> = fusion[a][b]
                            .iter()
                            .copied()
                            .filter(|&e| fuses(e, c, d))
                            .collect();
                        let cols: Vec<usize> = fusion[b][c]
                            .iter()
                            .copied()
                            .filter(|&f| fuses(a, f, d))
                            .collect();
                        if rows.is_empty() && cols.is_empty() {
                            continue;
                        }
                        if rows.len() != cols.len() {
                            return Err(Error::InvalidModel(format!(
                                "F^{{{a}{b}{c}}}_{d} is not square ({}x{})",
                                rows.len(),
                                cols.len()
                            )));
                        }
                        let mut m = Vec::with_capacity(rows.len() * cols.len());
                        for &e in &rows {
                            for &f in &cols {
                                let v = match data.f_symbols.get(&[a, b, c, d, e, f]) {
                                    Some(v) => *v,
                                    None if rows.len() == 1 => C64::new(1.0, 0.0),
                                    None => {
                                        return Err(Error::InvalidModel(format!(
                                            "missing F-symbol [F^{{{a}{b}{c}}}_{d}]_{{{e}{f}}}"
                                        )))
                                    }
                                };
                                m.push(v);
                            }
                        }
                        f_blocks[((a * n + b) * n + c) * n + d] = Some(FBlock { rows, cols, data: m });
                    }
                }
            }
        }
        for key in data.f_symbols.keys() {
            let [a, b, c, d, e, f] = *key;
            if key.iter().any(|&x| x >= n) {
                return Err(Error::UnknownCharge(*key.iter().max().unwrap()));
            }
            let ok = f_blocks[((a * n + b) * n + c) * n + d]
                .as_ref()
                .is_some_and(|blk| blk.row_pos(e).is_some() && blk.col_pos(f).is_some());
            if !ok {
                return Err(Error::InvalidModel(format!(
                    "F-symbol [F^{{{a}{b}{c}}}_{d}]_{{{e}{f}}} is not admissible"
                )));
            }
        }

        let mut r = vec![C64::new(0.0, 0.0); n * n * n];
        for a in 0..n {
            for b in 0..n {
                for &c in &fusion[a][b] {
                    r[(a * n + b) * n + c] = match data.r_symbols.get(&[a, b, c]) {
                        Some(v) => *v,
                        None if a == 0 || b == 0 => C64::new(1.0, 0.0),
                        None => {
                            return Err(Error::InvalidModel(format!("missing R-symbol R^{{{a}{b}}}_{c}")))
                        }
                    };
                }
            }
        }
        for key in data.r_symbols.keys() {
            let [a, b, c] = *key;
            if key.iter().any(|&x| x >= n) || !fuses(a, b, c) {
                return Err(Error::InvalidModel(format!("R-symbol R^{{{a}{b}}}_{c} is not admissible")));
            }
        }

        Ok(AnyonModel {
            name: data.name.clone(),
            level: data.level,
            gauge: data.gauge.clone(),
            labels: data.labels.clone(),
            dual: data.dual.clone(),
            fusion,
            fusion_mask: mask,
            qdim: data.qdim.clone(),
            f_blocks,
            r,
            data,
        })
    }

    /// Builds a model and rejects it unless every consistency residual is
    /// below `tolerance`.
    pub fn validated(data: ModelData, tolerance: f64) -> Result<Self> {
        let model = Self::from_data(data)?;
        let report = model.verify_consistency(tolerance);
        if !report.pass {
            return Err(Error::InconsistentModel(report.summary()));
        }
        Ok(model)
    }

    /// The raw data this model was built from.
    pub fn data(&self) -> &ModelData {
        &self.data
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn level(&self) -> Option<u32> {
        self.level
    }

    pub fn gauge(&self) -> &str {
        &self.gauge
    }

    pub fn num_charges(&self) -> usize {
        self.labels.len()
    }

    pub fn charges(&self) -> impl Iterator<Item = Charge> + '_ {
        (0..self.labels.len()).map(Charge)
    }

    pub fn check(&self, c: Charge) -> Result<Charge> {
        if c.0 < self.labels.len() {
            Ok(c)
        } else {
            Err(Error::UnknownCharge(c.0))
        }
    }

    pub fn label(&self, c: Charge) -> &str {
        &self.labels[c.0]
    }

    pub fn charge(&self, label: &str) -> Result<Charge> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(Charge)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn dual(&self, a: Charge) -> Charge {
        Charge(self.dual[a.0])
    }

    pub fn is_self_dual(&self, a: Charge) -> bool {
        self.dual[a.0] == a.0
    }

    pub fn qdim(&self, a: Charge) -> f64 {
        self.qdim[a.0]
    }

    /// Total quantum dimension squared, `sum_a d_a^2`.
    pub fn total_qdim_sq(&self) -> f64 {
        self.qdim.iter().map(|d| d * d).sum()
    }

    /// Fusion outcomes `{c : N_ab^c = 1}` in ascending index order.
    pub fn fuse(&self, a: Charge, b: Charge) -> Result<Vec<Charge>> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.fusion[a.0][b.0].iter().copied().map(Charge).collect())
    }

    #[inline]
    pub(crate) fn fuse_idx(&self, a: usize, b: usize) -> &[usize] {
        &self.fusion[a][b]
    }

    /// `N_ab^c` as a boolean.
    #[inline]
    pub fn fuses(&self, a: Charge, b: Charge, c: Charge) -> bool {
        self.fuses_idx(a.0, b.0, c.0)
    }

    #[inline]
    pub(crate) fn fuses_idx(&self, a: usize, b: usize, c: usize) -> bool {
        let n = self.labels.len();
        self.fusion_mask[(a * n + b) * n + c]
    }

    /// The F-matrix `[F^{abc}_d]` if any of its entries is admissible.
    pub fn f_block(&self, a: Charge, b: Charge, c: Charge, d: Charge) -> Option<&FBlock> {
        self.f_block_idx(a.0, b.0, c.0, d.0)
    }

    #[inline]
    pub(crate) fn f_block_idx(&self, a: usize, b: usize, c: usize, d: usize) -> Option<&FBlock> {
        let n = self.labels.len();
        self.f_blocks[((a * n + b) * n + c) * n + d].as_ref()
    }

    /// `[F^{abc}_d]_{ef}`; zero for inadmissible label combinations.
    pub fn f_symbol(
        &self,
        a: Charge,
        b: Charge,
        c: Charge,
        d: Charge,
        e: Charge,
        f: Charge,
    ) -> Result<C64> {
        for x in [a, b, c, d, e, f] {
            self.check(x)?;
        }
        Ok(self.f_idx(a.0, b.0, c.0, d.0, e.0, f.0))
    }

    #[inline]
    pub(crate) fn f_idx(&self, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> C64 {
        match self.f_block_idx(a, b, c, d) {
            Some(blk) => blk.get(e, f),
            None => C64::new(0.0, 0.0),
        }
    }

    /// `R^{ab}_c`; errors when `c` is not a fusion channel of `a` and `b`.
    pub fn r_symbol(&self, a: Charge, b: Charge, c: Charge) -> Result<C64> {
        for x in [a, b, c] {
            self.check(x)?;
        }
        if !self.fuses(a, b, c) {
            return Err(Error::Precondition(format!(
                "{} is not a fusion channel of {} x {}",
                self.label(c),
                self.label(a),
                self.label(b)
            )));
        }
        Ok(self.r_idx(a.0, b.0, c.0))
    }

    #[inline]
    pub(crate) fn r_idx(&self, a: usize, b: usize, c: usize) -> C64 {
        let n = self.labels.len();
        self.r[(a * n + b) * n + c]
    }

    /// `kappa_a = d_a [F^{a abar a}_a]_{00}`. A phase; the Frobenius-Schur
    /// indicator (+1 or -1) when `a` is self-dual.
    pub fn kappa(&self, a: Charge) -> Result<C64> {
        self.check(a)?;
        let ad = self.dual[a.0];
        Ok(self.qdim[a.0] * self.f_idx(a.0, ad, a.0, a.0, 0, 0))
    }

    /// True iff `d_c = 1`.
    pub fn is_abelian(&self, c: Charge) -> Result<bool> {
        self.check(c)?;
        Ok(self.qdim[c.0] < 1.0 + 1e-9)
    }

    /// Maximum residuals of the pentagon, both hexagons, F-matrix unitarity
    /// and the quantum-dimension fusion identity.
    pub fn verify_consistency(&self, tolerance: f64) -> ConsistencyReport {
        consistency::verify(self, tolerance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi() -> f64 {
        (1.0 + 5f64.sqrt()) / 2.0
    }

    #[test]
    fn fibonacci_fusion_and_dims() {
        let m = load_builtin(BuiltinModel::Fibonacci).unwrap();
        let tau = m.charge("1").unwrap();
        assert_eq!(m.fuse(tau, tau).unwrap(), vec![Charge(0), tau]);
        assert!((m.qdim(tau) - phi()).abs() < 1e-14);
        assert!((m.f_symbol(tau, tau, tau, tau, Charge(0), Charge(0)).unwrap().re - 1.0 / phi()).abs() < 1e-14);
        assert!((m.kappa(tau).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn vacuum_is_identity() {
        for m in [
            load_builtin(BuiltinModel::Ising).unwrap(),
            load_builtin(BuiltinModel::Fibonacci).unwrap(),
            load_builtin(BuiltinModel::Su2k(4)).unwrap(),
        ] {
            for a in m.charges() {
                assert_eq!(m.fuse(Charge::VACUUM, a).unwrap(), vec![a]);
                assert_eq!(m.r_symbol(Charge::VACUUM, a, a).unwrap(), C64::new(1.0, 0.0));
                let ad = m.dual(a);
                let fx = m.f_symbol(Charge::VACUUM, a, ad, Charge::VACUUM, ad, Charge::VACUUM).unwrap();
                assert!((fx - C64::new(1.0, 0.0)).norm() < 1e-12, "{} {fx}", m.name());
            }
            assert_eq!(m.kappa(Charge::VACUUM).unwrap(), C64::new(1.0, 0.0));
            assert!(m.is_abelian(Charge::VACUUM).unwrap());
        }
    }

    #[test]
    fn ising_abelian_predicate() {
        let m = load_builtin(BuiltinModel::Ising).unwrap();
        assert!(m.is_abelian(m.charge("1").unwrap()).unwrap());
        assert!(!m.is_abelian(m.charge("1/2").unwrap()).unwrap());
    }

    #[test]
    fn ising_and_su2_2_differ_in_frobenius_schur_sign() {
        let ising = load_builtin(BuiltinModel::Ising).unwrap();
        let su2 = load_builtin(BuiltinModel::Su2k(2)).unwrap();
        let s = Charge(1);
        assert!((ising.kappa(s).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((su2.kappa(s).unwrap() + C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn unknown_charge_errors() {
        let m = load_builtin(BuiltinModel::Fibonacci).unwrap();
        assert_eq!(m.fuse(Charge(5), Charge(0)), Err(Error::UnknownCharge(5)));
        assert!(m.kappa(Charge(2)).is_err());
        assert!(m.r_symbol(Charge(0), Charge(1), Charge(0)).is_err());
    }

    #[test]
    fn inadmissible_f_symbols_are_zero() {
        let m = load_builtin(BuiltinModel::Ising).unwrap();
        // sigma x sigma cannot produce sigma.
        let v = m.f_symbol(Charge(1), Charge(1), Charge(1), Charge(1), Charge(1), Charge(0)).unwrap();
        assert_eq!(v, C64::new(0.0, 0.0));
    }

    #[test]
    fn rejects_broken_structure() {
        let mut data = load_builtin(BuiltinModel::Fibonacci).unwrap().data().clone();
        data.dual = vec![0, 0];
        assert!(matches!(AnyonModel::from_data(data), Err(Error::InvalidModel(_))));

        let mut data = load_builtin(BuiltinModel::Fibonacci).unwrap().data().clone();
        data.f_symbols.remove(&[1, 1, 1, 1, 0, 1]);
        assert!(matches!(AnyonModel::from_data(data), Err(Error::InvalidModel(_))));

        let mut data = load_builtin(BuiltinModel::Fibonacci).unwrap().data().clone();
        data.fusion[1][1].push(1);
        assert!(matches!(AnyonModel::from_data(data), Err(Error::InvalidModel(_))));
    }
}
