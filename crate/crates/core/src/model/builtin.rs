use std::collections::HashMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use super::qgroup::QNumbers;
use super::{AnyonModel, ModelData};
use crate::error::{Error, Result};

/// The models shipped with the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinModel {
    Fibonacci,
    Ising,
    /// SU(2) at level k, k >= 2.
    Su2k(u32),
}

impl BuiltinModel {
    /// Resolves a model name plus optional level (`su2_k` needs one).
    pub fn from_name(name: &str, level: Option<u32>) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "fibonacci" | "fib" => Ok(BuiltinModel::Fibonacci),
            "ising" => Ok(BuiltinModel::Ising),
            "su2_k" | "su2k" | "su2" => match level {
                Some(k) if k >= 2 => Ok(BuiltinModel::Su2k(k)),
                Some(k) => Err(Error::InvalidParameter(format!("su2_k needs k >= 2, got {k}"))),
                None => Err(Error::InvalidParameter("su2_k needs a level k".into())),
            },
            other => Err(Error::UnknownModel(other.to_string())),
        }
    }

    /// The charge that computational anyons carry in this model.
    pub fn computational_label(self) -> &'static str {
        match self {
            BuiltinModel::Fibonacci => "1",
            BuiltinModel::Ising | BuiltinModel::Su2k(_) => "1/2",
        }
    }
}

impl fmt::Display for BuiltinModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinModel::Fibonacci => write!(f, "fibonacci"),
            BuiltinModel::Ising => write!(f, "ising"),
            BuiltinModel::Su2k(k) => write!(f, "su2_{k}"),
        }
    }
}

impl FromStr for BuiltinModel {
    type Err = Error;

    /// Accepts `fibonacci`, `ising` and `su2_<k>`.
    fn from_str(s: &str) -> Result<Self> {
        if let Some(k) = s.strip_prefix("su2_").and_then(|k| k.parse::<u32>().ok()) {
            return BuiltinModel::from_name("su2_k", Some(k));
        }
        BuiltinModel::from_name(s, None)
    }
}

/// Builds one of the builtin models. The result always passes
/// [`AnyonModel::verify_consistency`] at the default tolerance.
pub fn load_builtin(which: BuiltinModel) -> Result<AnyonModel> {
    let data = match which {
        BuiltinModel::Fibonacci => fibonacci(),
        BuiltinModel::Ising => ising(),
        BuiltinModel::Su2k(k) if k >= 2 => su2k(k),
        BuiltinModel::Su2k(k) => {
            return Err(Error::InvalidParameter(format!("su2_k needs k >= 2, got {k}")))
        }
    };
    AnyonModel::from_data(data)
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn fibonacci() -> ModelData {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut f_symbols = HashMap::new();
    let (x, y) = (1.0 / phi, phi.powf(-0.5));
    f_symbols.insert([1, 1, 1, 1, 0, 0], re(x));
    f_symbols.insert([1, 1, 1, 1, 0, 1], re(y));
    f_symbols.insert([1, 1, 1, 1, 1, 0], re(y));
    f_symbols.insert([1, 1, 1, 1, 1, 1], re(-x));
    let mut r_symbols = HashMap::new();
    r_symbols.insert([1, 1, 0], C64::from_polar(1.0, -4.0 * PI / 5.0));
    r_symbols.insert([1, 1, 1], C64::from_polar(1.0, 3.0 * PI / 5.0));
    ModelData {
        name: "fibonacci".into(),
        level: None,
        gauge: "real symmetric F^{111}_1, all one-dimensional blocks equal to 1".into(),
        labels: vec!["0".into(), "1".into()],
        dual: vec![0, 1],
        fusion: vec![vec![vec![0], vec![1]], vec![vec![1], vec![0, 1]]],
        qdim: vec![1.0, phi],
        f_symbols,
        r_symbols,
    }
}

fn ising() -> ModelData {
    // 0 = vacuum, 1 = sigma ("1/2"), 2 = psi ("1").
    let mut f_symbols = HashMap::new();
    let h = FRAC_1_SQRT_2;
    f_symbols.insert([1, 1, 1, 1, 0, 0], re(h));
    f_symbols.insert([1, 1, 1, 1, 0, 2], re(h));
    f_symbols.insert([1, 1, 1, 1, 2, 0], re(h));
    f_symbols.insert([1, 1, 1, 1, 2, 2], re(-h));
    f_symbols.insert([1, 2, 1, 2, 1, 1], re(-1.0));
    f_symbols.insert([2, 1, 2, 1, 1, 1], re(-1.0));
    let mut r_symbols = HashMap::new();
    r_symbols.insert([1, 1, 0], C64::from_polar(1.0, -PI / 8.0));
    r_symbols.insert([1, 1, 2], C64::from_polar(1.0, 3.0 * PI / 8.0));
    r_symbols.insert([1, 2, 1], C64::new(0.0, -1.0));
    r_symbols.insert([2, 1, 1], C64::new(0.0, -1.0));
    r_symbols.insert([2, 2, 0], re(-1.0));
    ModelData {
        name: "ising".into(),
        level: None,
        gauge: "F^{sss}_s = H/sqrt2 (kappa_sigma = +1), F^{psp}_s = F^{sps}_p = -1, other blocks 1".into(),
        labels: vec!["0".into(), "1/2".into(), "1".into()],
        dual: vec![0, 1, 2],
        fusion: vec![
            vec![vec![0], vec![1], vec![2]],
            vec![vec![1], vec![0, 2], vec![1]],
            vec![vec![2], vec![1], vec![0]],
        ],
        qdim: vec![1.0, 2f64.sqrt(), 1.0],
        f_symbols,
        r_symbols,
    }
}

fn spin_label(twice: usize) -> String {
    if twice % 2 == 0 {
        (twice / 2).to_string()
    } else {
        format!("{twice}/2")
    }
}

fn su2k(k: u32) -> ModelData {
    let q = QNumbers::new(k);
    let n = k as usize + 1;
    let labels = (0..n).map(spin_label).collect();
    let fusion: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| (0..n).filter(|&c| q.admissible(a as i64, b as i64, c as i64)).collect())
                .collect()
        })
        .collect();
    let qdim = (0..n).map(|t| QNumbers::qint(k, t as i64 + 1)).collect();

    let mut f_symbols = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    for &e in &fusion[a][b] {
                        if !q.admissible(e as i64, c as i64, d as i64) {
                            continue;
                        }
                        for &f in &fusion[b][c] {
                            if !q.admissible(a as i64, f as i64, d as i64) {
                                continue;
                            }
                            let v = q.f_symbol(a as i64, b as i64, c as i64, d as i64, e as i64, f as i64);
                            f_symbols.insert([a, b, c, d, e, f], re(v));
                        }
                    }
                }
            }
        }
    }
    let mut r_symbols = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            for &c in &fusion[a][b] {
                r_symbols.insert([a, b, c], q.r_symbol(a as i64, b as i64, c as i64));
            }
        }
    }
    ModelData {
        name: "su2_k".into(),
        level: Some(k),
        gauge: "q-deformed Racah-Wigner 6j, F = (-1)^{j1+j2+j3+j} sqrt([2j12+1][2j23+1]) {6j}".into(),
        labels,
        dual: (0..n).collect(),
        fusion,
        qdim,
        f_symbols,
        r_symbols,
    }
}
