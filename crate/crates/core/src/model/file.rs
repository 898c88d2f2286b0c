//! Line-oriented text format for user-supplied models.
//!
//! ```text
//! # Fibonacci anyons
//! name fibonacci
//! charges 0 1
//! dual 1 1
//! qdim 1 1.618033988749895
//! fuse 1 1 -> 0 1
//! F 1 1 1 1 0 0 0.6180339887498948 0
//! R 1 1 0 -0.8090169943749475 -0.5877852522924731
//! ```
//!
//! The first charge listed is the vacuum. Fusion with the vacuum is implied
//! and `fuse a b` also sets `b a`. Omitted duals are derived from the fusion
//! table, omitted F-symbols of one-dimensional blocks default to 1 and
//! omitted R-symbols involving the vacuum default to 1.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_complex::Complex64 as C64;

use super::{AnyonModel, ModelData};
use crate::error::{Error, Result};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses a model file and rejects models whose consistency residuals are
/// not below `tolerance`.
pub fn parse_model_file(text: &str, tolerance: f64) -> Result<AnyonModel> {
    let data = parse_data(text)?;
    AnyonModel::validated(data, tolerance)
}

fn parse_data(text: &str) -> Result<ModelData> {
    let mut data = ModelData::default();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut duals: Vec<(usize, usize, usize)> = Vec::new();
    let mut qdims: HashMap<usize, f64> = HashMap::new();
    let mut fusion_lines: Vec<(usize, usize, usize, Vec<usize>)> = Vec::new();

    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let key = toks.next().unwrap();
        let rest: Vec<&str> = toks.collect();

        let lookup = |label: &str| -> Result<usize> {
            index
                .get(label)
                .copied()
                .ok_or_else(|| perr(line_no, format!("unknown charge `{label}`")))
        };
        let number = |tok: &str| -> Result<f64> {
            tok.parse::<f64>()
                .map_err(|_| perr(line_no, format!("`{tok}` is not a number")))
        };

        match key {
            "name" => data.name = rest.join(" "),
            "gauge" => data.gauge = rest.join(" "),
            "level" => {
                let [k] = rest[..] else { return Err(perr(line_no, "level takes one integer")) };
                data.level = Some(k.parse().map_err(|_| perr(line_no, "level takes one integer"))?);
            }
            "charges" => {
                if !data.labels.is_empty() {
                    return Err(perr(line_no, "charges listed twice"));
                }
                if rest.is_empty() {
                    return Err(perr(line_no, "no charges listed"));
                }
                for (i, l) in rest.iter().enumerate() {
                    if index.insert(l.to_string(), i).is_some() {
                        return Err(perr(line_no, format!("duplicate charge `{l}`")));
                    }
                    data.labels.push(l.to_string());
                }
            }
            "dual" => {
                let [a, b] = rest[..] else { return Err(perr(line_no, "expected `dual a abar`")) };
                duals.push((line_no, lookup(a)?, lookup(b)?));
            }
            "qdim" => {
                let [a, d] = rest[..] else { return Err(perr(line_no, "expected `qdim a value`")) };
                qdims.insert(lookup(a)?, number(d)?);
            }
            "fuse" => {
                if rest.len() < 3 || rest[2] != "->" {
                    return Err(perr(line_no, "expected `fuse a b -> c ...`"));
                }
                let outs = rest[3..].iter().map(|l| lookup(l)).collect::<Result<Vec<_>>>()?;
                fusion_lines.push((line_no, lookup(rest[0])?, lookup(rest[1])?, outs));
            }
            "F" => {
                if rest.len() != 8 {
                    return Err(perr(line_no, "expected `F a b c d e f re im`"));
                }
                let mut key = [0usize; 6];
                for (slot, l) in key.iter_mut().zip(&rest[..6]) {
                    *slot = lookup(l)?;
                }
                let v = C64::new(number(rest[6])?, number(rest[7])?);
                if data.f_symbols.insert(key, v).is_some() {
                    return Err(perr(line_no, "F-symbol given twice"));
                }
            }
            "R" => {
                if rest.len() != 5 {
                    return Err(perr(line_no, "expected `R a b c re im`"));
                }
                let key = [lookup(rest[0])?, lookup(rest[1])?, lookup(rest[2])?];
                let v = C64::new(number(rest[3])?, number(rest[4])?);
                if data.r_symbols.insert(key, v).is_some() {
                    return Err(perr(line_no, "R-symbol given twice"));
                }
            }
            other => return Err(perr(line_no, format!("unknown keyword `{other}`"))),
        }
    }

    let n = data.labels.len();
    if n == 0 {
        return Err(perr(0, "missing `charges` line"));
    }
    let mut fusion = vec![vec![Vec::new(); n]; n];
    for a in 0..n {
        fusion[0][a] = vec![a];
        fusion[a][0] = vec![a];
    }
    for (line_no, a, b, outs) in fusion_lines {
        if a == 0 || b == 0 {
            if outs != [a.max(b)] {
                return Err(perr(line_no, "fusion with the vacuum must be trivial"));
            }
            continue;
        }
        fusion[a][b] = outs.clone();
        fusion[b][a] = outs;
    }
    data.fusion = fusion;

    data.qdim = (0..n)
        .map(|a| match qdims.get(&a) {
            Some(d) => Ok(*d),
            None if a == 0 => Ok(1.0),
            None => Err(perr(0, format!("missing qdim for `{}`", data.labels[a]))),
        })
        .collect::<Result<_>>()?;

    let mut dual: Vec<Option<usize>> = vec![None; n];
    for (line_no, a, b) in duals {
        for (x, y) in [(a, b), (b, a)] {
            if dual[x].is_some_and(|old| old != y) {
                return Err(perr(line_no, "conflicting dual entries"));
            }
            dual[x] = Some(y);
        }
    }
    data.dual = (0..n)
        .map(|a| {
            dual[a].map(Ok).unwrap_or_else(|| {
                (0..n)
                    .find(|&b| data.fusion[a][b].contains(&0))
                    .ok_or_else(|| perr(0, format!("`{}` has no dual", data.labels[a])))
            })
        })
        .collect::<Result<_>>()?;
    Ok(data)
}

/// Writes a model in the text format. Every number is printed in its
/// shortest round-trip form, so parsing the output reproduces the model
/// bit for bit.
pub fn write_model_file(model: &AnyonModel) -> String {
    let d = model.data();
    let l = |i: usize| d.labels[i].as_str();
    let mut out = String::new();
    writeln!(out, "name {}", d.name).unwrap();
    if let Some(k) = d.level {
        writeln!(out, "level {k}").unwrap();
    }
    if !d.gauge.is_empty() {
        writeln!(out, "gauge {}", d.gauge).unwrap();
    }
    writeln!(out, "charges {}", d.labels.join(" ")).unwrap();
    for (a, &b) in d.dual.iter().enumerate().skip(1) {
        if a <= b {
            writeln!(out, "dual {} {}", l(a), l(b)).unwrap();
        }
    }
    for (a, q) in d.qdim.iter().enumerate() {
        writeln!(out, "qdim {} {:?}", l(a), q).unwrap();
    }
    let n = d.labels.len();
    for a in 1..n {
        for b in a..n {
            let outs: Vec<&str> = d.fusion[a][b].iter().map(|&c| l(c)).collect();
            writeln!(out, "fuse {} {} -> {}", l(a), l(b), outs.join(" ")).unwrap();
        }
    }
    let mut fkeys: Vec<_> = d.f_symbols.keys().copied().collect();
    fkeys.sort_unstable();
    for key in fkeys {
        let v = d.f_symbols[&key];
        let labels: Vec<&str> = key.iter().map(|&x| l(x)).collect();
        writeln!(out, "F {} {:?} {:?}", labels.join(" "), v.re, v.im).unwrap();
    }
    let mut rkeys: Vec<_> = d.r_symbols.keys().copied().collect();
    rkeys.sort_unstable();
    for key in rkeys {
        let v = d.r_symbols[&key];
        writeln!(out, "R {} {} {} {:?} {:?}", l(key[0]), l(key[1]), l(key[2]), v.re, v.im).unwrap();
    }
    out
}
