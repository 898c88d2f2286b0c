use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::AnyonModel;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Maximum residuals of the defining equations of a model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub max_pentagon_residual: f64,
    pub max_hexagon_residual: f64,
    pub max_unitarity_residual: f64,
    pub qdim_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ConsistencyReport {
    pub fn summary(&self) -> String {
        format!(
            "pentagon {:.3e}, hexagon {:.3e}, unitarity {:.3e}, qdim {:.3e} (tolerance {:.1e})",
            self.max_pentagon_residual,
            self.max_hexagon_residual,
            self.max_unitarity_residual,
            self.qdim_residual,
            self.tolerance
        )
    }
}

pub(super) fn verify(m: &AnyonModel, tolerance: f64) -> ConsistencyReport {
    let max_pentagon_residual = pentagon(m);
    let max_hexagon_residual = hexagon(m);
    let max_unitarity_residual = unitarity(m);
    let qdim_residual = qdim_identity(m);
    let pass = [max_pentagon_residual, max_hexagon_residual, max_unitarity_residual, qdim_residual]
        .iter()
        .all(|r| r.is_finite() && *r < tolerance);
    ConsistencyReport {
        max_pentagon_residual,
        max_hexagon_residual,
        max_unitarity_residual,
        qdim_residual,
        tolerance,
        pass,
    }
}

// [F^{fcd}_e]_{gl} [F^{abl}_e]_{fk} = sum_h [F^{abc}_g]_{fh} [F^{ahd}_e]_{gk} [F^{bcd}_k]_{hl}
fn pentagon(m: &AnyonModel) -> f64 {
    let n = m.num_charges();
    let mut worst = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    for &f in m.fuse_idx(a, b) {
                        for &g in m.fuse_idx(f, c) {
                            for &e in m.fuse_idx(g, d) {
                                for &l in m.fuse_idx(c, d) {
                                    for &k in m.fuse_idx(b, l) {
                                        if !m.fuses_idx(a, k, e) {
                                            continue;
                                        }
                                        let lhs = m.f_idx(f, c, d, e, g, l) * m.f_idx(a, b, l, e, f, k);
                                        let mut rhs = C64::new(0.0, 0.0);
                                        for &h in m.fuse_idx(b, c) {
                                            rhs += m.f_idx(a, b, c, g, f, h)
                                                * m.f_idx(a, h, d, e, g, k)
                                                * m.f_idx(b, c, d, k, h, l);
                                        }
                                        worst = worst.max((lhs - rhs).norm());
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    worst
}

// R^{ca}_e [F^{acb}_d]_{eg} R^{cb}_g = sum_f [F^{cab}_d]_{ef} R^{cf}_d [F^{abc}_d]_{fg}
// and the same with every R replaced by the inverse of its mirror image.
fn hexagon(m: &AnyonModel) -> f64 {
    let n = m.num_charges();
    let mut worst = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    for &e in m.fuse_idx(c, a) {
                        if !m.fuses_idx(e, b, d) {
                            continue;
                        }
                        for &g in m.fuse_idx(c, b) {
                            if !m.fuses_idx(a, g, d) {
                                continue;
                            }
                            let f_acb = m.f_idx(a, c, b, d, e, g);
                            let lhs = m.r_idx(c, a, e) * f_acb * m.r_idx(c, b, g);
                            let lhs_inv = m.r_idx(a, c, e).inv() * f_acb * m.r_idx(b, c, g).inv();
                            let mut rhs = C64::new(0.0, 0.0);
                            let mut rhs_inv = C64::new(0.0, 0.0);
                            for &f in m.fuse_idx(a, b) {
                                if !m.fuses_idx(c, f, d) {
                                    continue;
                                }
                                let outer = m.f_idx(c, a, b, d, e, f) * m.f_idx(a, b, c, d, f, g);
                                rhs += outer * m.r_idx(c, f, d);
                                rhs_inv += outer * m.r_idx(f, c, d).inv();
                            }
                            worst = worst.max((lhs - rhs).norm()).max((lhs_inv - rhs_inv).norm());
                        }
                    }
                }
            }
        }
    }
    worst
}

fn unitarity(m: &AnyonModel) -> f64 {
    let n = m.num_charges();
    let mut worst = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let Some(blk) = m.f_block_idx(a, b, c, d) else { continue };
                    let dim = blk.dim();
                    for i in 0..dim {
                        for j in 0..dim {
                            let mut s = C64::new(0.0, 0.0);
                            for k in 0..dim {
                                s += blk.at(i, k) * blk.at(j, k).conj();
                            }
                            let target = if i == j { 1.0 } else { 0.0 };
                            worst = worst.max((s - target).norm());
                        }
                    }
                }
            }
            for &c in m.fuse_idx(a, b) {
                worst = worst.max((m.r_idx(a, b, c).norm() - 1.0).abs());
            }
        }
    }
    worst
}

fn qdim_identity(m: &AnyonModel) -> f64 {
    let n = m.num_charges();
    let d = |x: usize| m.qdim[x];
    let mut worst = (d(0) - 1.0).abs();
    for a in 0..n {
        worst = worst.max((d(a) - d(m.dual[a])).abs());
        for b in 0..n {
            let sum: f64 = m.fuse_idx(a, b).iter().map(|&c| d(c)).sum();
            worst = worst.max((d(a) * d(b) - sum).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{load_builtin, BuiltinModel};

    #[test]
    fn builtins_are_consistent() {
        for which in [
            BuiltinModel::Fibonacci,
            BuiltinModel::Ising,
            BuiltinModel::Su2k(2),
            BuiltinModel::Su2k(3),
            BuiltinModel::Su2k(5),
        ] {
            let m = load_builtin(which).unwrap();
            let r = m.verify_consistency(DEFAULT_TOLERANCE);
            assert!(r.pass, "{which}: {}", r.summary());
        }
    }

    #[test]
    fn perturbed_f_symbol_is_detected() {
        let mut data = load_builtin(BuiltinModel::Fibonacci).unwrap().data().clone();
        *data.f_symbols.get_mut(&[1, 1, 1, 1, 0, 0]).unwrap() += 1e-3;
        let m = AnyonModel::from_data(data).unwrap();
        let r = m.verify_consistency(DEFAULT_TOLERANCE);
        assert!(!r.pass);
        assert!(r.max_pentagon_residual > 1e-5);
        assert!(r.max_unitarity_residual > 1e-5);
    }

    #[test]
    fn wrong_chirality_r_fails_hexagon() {
        let mut data = load_builtin(BuiltinModel::Ising).unwrap().data().clone();
        let r = data.r_symbols.get_mut(&[1, 1, 0]).unwrap();
        *r = r.conj();
        let m = AnyonModel::from_data(data).unwrap();
        let rep = m.verify_consistency(DEFAULT_TOLERANCE);
        assert!(!rep.pass);
        assert!(rep.max_hexagon_residual > 1e-3);
        assert!(rep.max_pentagon_residual < DEFAULT_TOLERANCE);
    }
}
