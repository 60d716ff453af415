//! Motifs: the ordered pattern of space-like and time-like eigenvalues,
//! their parity sign, and the eigenvalue-coordinate Jacobians J and J'.

use std::fmt;

use crate::error::{HsError, Result};
use crate::metric::SignatureMetric;

/// Eigenvalue type: space-like (B(v,v) > 0) or time-like (B(v,v) < 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EigenType {
    Space,
    Time,
}

/// An ordered binary sequence of p space-like and q time-like symbols,
/// read off a descending eigenvalue list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Motif {
    symbols: Vec<EigenType>,
}

impl Motif {
    pub fn new(symbols: Vec<EigenType>, metric: SignatureMetric) -> Result<Self> {
        let got_p = symbols.iter().filter(|t| **t == EigenType::Space).count();
        let got_q = symbols.len() - got_p;
        if got_p != metric.p() || got_q != metric.q() {
            return Err(HsError::InvalidMotif {
                p: metric.p(),
                q: metric.q(),
                got_p,
                got_q,
            });
        }
        Ok(Self { symbols })
    }

    /// Parse from a string of '•'/'◦' (or ASCII '*'/'o').
    pub fn parse(text: &str, metric: SignatureMetric) -> Result<Self> {
        let mut symbols = Vec::new();
        for ch in text.chars() {
            match ch {
                '•' | '*' => symbols.push(EigenType::Space),
                '◦' | 'o' => symbols.push(EigenType::Time),
                _ => {
                    return Err(HsError::Parse(format!(
                        "invalid motif symbol {ch:?}; expected '•'/'*' or '◦'/'o'"
                    )))
                }
            }
        }
        Self::new(symbols, metric)
    }

    pub fn symbols(&self) -> &[EigenType] {
        &self.symbols
    }

    /// sgn(sigma) = (-1)^(number of (time, space) inversions), i.e. pairs
    /// where a time-like symbol precedes a space-like one. This equals the
    /// transposition parity to reach the reference motif with all space-like
    /// symbols first.
    pub fn sign(&self) -> i32 {
        let mut inversions = 0usize;
        for i in 0..self.symbols.len() {
            if self.symbols[i] == EigenType::Time {
                for j in (i + 1)..self.symbols.len() {
                    if self.symbols[j] == EigenType::Space {
                        inversions += 1;
                    }
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Motif {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.symbols {
            match t {
                EigenType::Space => write!(f, "•")?,
                EigenType::Time => write!(f, "◦")?,
            }
        }
        Ok(())
    }
}

/// J(lambda) = prod_{i<j} |lambda_i - lambda_j| over all pairs.
pub fn jacobian_j(lambdas: &[f64]) -> f64 {
    let mut j = 1.0;
    for i in 0..lambdas.len() {
        for k in (i + 1)..lambdas.len() {
            j *= (lambdas[i] - lambdas[k]).abs();
        }
    }
    j
}

/// J'(lambda) = J(lambda) * prod_{i<=p, j>p} sign(lambda_i - lambda_j) with
/// the first p entries space-like and the last q time-like. Equals
/// J * sgn(sigma(lambda)).
pub fn jacobian_jprime(lambdas: &[f64], metric: SignatureMetric) -> f64 {
    let p = metric.p();
    let mut sign = 1.0;
    for i in 0..p {
        for j in p..lambdas.len() {
            if lambdas[i] < lambdas[j] {
                sign = -sign;
            }
        }
    }
    jacobian_j(lambdas) * sign
}

/// The eigenvalue product form of the motif sign: prod over (space i, time j)
/// of sign(lambda_i - lambda_j), for any eigenvalue list realizing the motif.
pub fn sign_from_eigenvalues(lambdas: &[f64], types: &[EigenType]) -> i32 {
    let mut sign = 1i32;
    for i in 0..lambdas.len() {
        for j in 0..lambdas.len() {
            if types[i] == EigenType::Space
                && types[j] == EigenType::Time
                && lambdas[i] < lambdas[j]
            {
                sign = -sign;
            }
        }
    }
    sign
}

/// Enumerate all C(p+q, p) motifs for a signature.
pub fn enumerate_motifs(metric: SignatureMetric) -> Vec<Motif> {
    let n = metric.n();
    let p = metric.p();
    let mut out = Vec::new();
    // iterate bitmasks with exactly p set bits; bit i set = space-like at i
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != p {
            continue;
        }
        let symbols = (0..n)
            .map(|i| {
                if mask & (1 << i) != 0 {
                    EigenType::Space
                } else {
                    EigenType::Time
                }
            })
            .collect();
        out.push(Motif { symbols });
    }
    out
}
