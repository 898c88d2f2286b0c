//! Quantum-group data for SU(2)_k at `q = exp(2 pi i / (k + 2))`.
//!
//! Spins are carried doubled (`tj = 2j`) so every label is an integer.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

/// Real q-numbers and q-factorials for a fixed level.
pub(crate) struct QNumbers {
    level: u32,
    factorial: Vec<f64>,
}

impl QNumbers {
    pub fn new(level: u32) -> Self {
        // Factorial arguments never exceed k + 1 for admissible labels.
        let top = level as usize + 2;
        let mut factorial = vec![1.0; top + 1];
        for n in 1..=top {
            factorial[n] = factorial[n - 1] * Self::qint(level, n as i64);
        }
        QNumbers { level, factorial }
    }

    /// `[n] = sin(n pi / (k+2)) / sin(pi / (k+2))`.
    pub fn qint(level: u32, n: i64) -> f64 {
        let r = PI / (level as f64 + 2.0);
        (n as f64 * r).sin() / r.sin()
    }

    fn fact(&self, n: i64) -> f64 {
        debug_assert!(n >= 0 && (n as usize) < self.factorial.len(), "q-factorial of {n}");
        self.factorial[n as usize]
    }

    /// Doubled spins `(ta, tb, tc)` satisfy the level-k fusion rule.
    pub fn admissible(&self, ta: i64, tb: i64, tc: i64) -> bool {
        let k = self.level as i64;
        (ta + tb + tc) % 2 == 0 && tc >= (ta - tb).abs() && tc <= ta + tb && ta + tb + tc <= 2 * k
    }

    fn triangle(&self, ta: i64, tb: i64, tc: i64) -> f64 {
        let num = self.fact((ta + tb - tc) / 2) * self.fact((ta - tb + tc) / 2) * self.fact((-ta + tb + tc) / 2);
        (num / self.fact((ta + tb + tc) / 2 + 1)).sqrt()
    }

    /// Racah-Wigner q-6j symbol `{a b c; d e f}` with triads
    /// `(a,b,c) (a,e,f) (d,b,f) (d,e,c)`, all arguments doubled.
    pub fn six_j(&self, a: i64, b: i64, c: i64, d: i64, e: i64, f: i64) -> f64 {
        if !(self.admissible(a, b, c)
            && self.admissible(a, e, f)
            && self.admissible(d, b, f)
            && self.admissible(d, e, c))
        {
            return 0.0;
        }
        let pre = self.triangle(a, b, c) * self.triangle(a, e, f) * self.triangle(d, b, f) * self.triangle(d, e, c);
        let t1 = (a + b + c) / 2;
        let t2 = (a + e + f) / 2;
        let t3 = (d + b + f) / 2;
        let t4 = (d + e + c) / 2;
        let s1 = (a + b + d + e) / 2;
        let s2 = (b + c + e + f) / 2;
        let s3 = (a + c + d + f) / 2;
        let lo = t1.max(t2).max(t3).max(t4);
        let hi = s1.min(s2).min(s3);
        let mut sum = 0.0;
        for z in lo..=hi {
            // [z+1]! contains [k+2] = 0 from here on.
            if z + 1 >= self.level as i64 + 2 {
                break;
            }
            let sign = if z % 2 == 0 { 1.0 } else { -1.0 };
            let den = self.fact(z - t1)
                * self.fact(z - t2)
                * self.fact(z - t3)
                * self.fact(z - t4)
                * self.fact(s1 - z)
                * self.fact(s2 - z)
                * self.fact(s3 - z);
            sum += sign * self.fact(z + 1) / den;
        }
        pre * sum
    }

    /// Unitary F-symbol `[F^{j1 j2 j3}_j]_{j12, j23}` (doubled spins).
    pub fn f_symbol(&self, j1: i64, j2: i64, j3: i64, j: i64, j12: i64, j23: i64) -> f64 {
        let phase = (j1 + j2 + j3 + j) / 2;
        let sign = if phase % 2 == 0 { 1.0 } else { -1.0 };
        let norm = (Self::qint(self.level, j12 + 1) * Self::qint(self.level, j23 + 1)).sqrt();
        sign * norm * self.six_j(j1, j2, j12, j3, j, j23)
    }

    /// `R^{j1 j2}_j = (-1)^{j - j1 - j2} q^{(c_j - c_{j1} - c_{j2}) / 2}` with
    /// `c_j = j (j + 1)`.
    pub fn r_symbol(&self, j1: i64, j2: i64, j: i64) -> C64 {
        let casimir = |t: i64| (t * (t + 2)) as f64 / 4.0;
        let sign_exp = (j - j1 - j2) / 2;
        let sign = if sign_exp.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let angle = 2.0 * PI / (self.level as f64 + 2.0) * (casimir(j) - casimir(j1) - casimir(j2)) / 2.0;
        sign * C64::from_polar(1.0, angle)
    }
}
