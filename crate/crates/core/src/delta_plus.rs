//! The augmented semi-simplex category as binary sequences.
//!
//! A morphism ⟨m⟩ → ⟨n⟩ is a 0/1 sequence of length n+1 with m+1 ones.
//! Sequences are stored most-significant digit first.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinarySeq {
    digits: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DeltaError {
    #[error("arity mismatch: {left} has {ones} ones but {right} has length {len}")]
    Arity {
        left: BinarySeq,
        right: BinarySeq,
        ones: usize,
        len: usize,
    },
    #[error("invalid digit {0:?} in binary sequence")]
    BadDigit(char),
}

impl BinarySeq {
    pub fn new(digits: Vec<bool>) -> Self {
        BinarySeq { digits }
    }

    pub fn digits(&self) -> &[bool] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn popcount(&self) -> usize {
        self.digits.iter().filter(|&&d| d).count()
    }

    /// n, where the target is ⟨n⟩.
    pub fn target(&self) -> i64 {
        self.digits.len() as i64 - 1
    }

    /// m, where the source is ⟨m⟩.
    pub fn source(&self) -> i64 {
        self.popcount() as i64 - 1
    }

    /// The sequence read as a binary numeral.
    pub fn label(&self) -> u64 {
        self.digits.iter().fold(0, |acc, &d| acc * 2 + d as u64)
    }

    /// The `n + 1`-digit sequence spelling `label`.
    pub fn from_label(label: u64, n: i64) -> Self {
        let len = (n + 1).max(0) as usize;
        let digits = (0..len).rev().map(|i| (label >> i) & 1 == 1).collect();
        BinarySeq { digits }
    }
}

impl fmt::Display for BinarySeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return f.write_str("∅");
        }
        for &d in &self.digits {
            f.write_str(if d { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BinarySeq {
    type Err = DeltaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "∅" || s == "-" {
            return Ok(BinarySeq::new(vec![]));
        }
        let digits = s
            .chars()
            .map(|c| match c {
                '0' | '𝟘' => Ok(false),
                '1' | '𝟙' => Ok(true),
                other => Err(DeltaError::BadDigit(other)),
            })
            .collect::<Result<_, _>>()?;
        Ok(BinarySeq { digits })
    }
}

/// `b1 ∘ b0`: replace the ones of `b1` by the digits of `b0`.
pub fn compose(b1: &BinarySeq, b0: &BinarySeq) -> Result<BinarySeq, DeltaError> {
    if b1.popcount() != b0.len() {
        return Err(DeltaError::Arity {
            left: b1.clone(),
            right: b0.clone(),
            ones: b1.popcount(),
            len: b0.len(),
        });
    }
    let mut rest = b0.digits.iter();
    let digits = b1
        .digits
        .iter()
        .map(|&d| if d { *rest.next().unwrap() } else { false })
        .collect();
    Ok(BinarySeq { digits })
}

pub fn identity(n: i64) -> BinarySeq {
    BinarySeq {
        digits: vec![true; (n + 1).max(0) as usize],
    }
}

pub fn one_prefix(b: &BinarySeq) -> BinarySeq {
    let mut digits = vec![true];
    digits.extend_from_slice(&b.digits);
    BinarySeq { digits }
}

pub fn zero_prefix(b: &BinarySeq) -> BinarySeq {
    let mut digits = vec![false];
    digits.extend_from_slice(&b.digits);
    BinarySeq { digits }
}

pub fn rho(m: i64) -> BinarySeq {
    zero_prefix(&identity(m))
}

/// All morphisms ⟨m⟩ → ⟨n⟩.
pub fn faces(n: i64, m: i64) -> Vec<BinarySeq> {
    if n < -1 || m < -1 || m > n {
        return vec![];
    }
    let len = (n + 1) as u32;
    (0..(1u64 << len))
        .map(|l| BinarySeq::from_label(l, n))
        .filter(|b| b.source() == m)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labelled {
    pub label: BinarySeq,
    pub dim: i64,
}

/// Labels 1 … 2^{n+1}−1 in numeric order, each with dimension popcount − 1.
pub fn campion_order(n: i64) -> Vec<Labelled> {
    if n < 0 {
        return vec![];
    }
    (1..(1u64 << (n + 1)))
        .map(|l| {
            let label = BinarySeq::from_label(l, n);
            let dim = label.source();
            Labelled { label, dim }
        })
        .collect()
}

/// Whether every face of every label precedes it in `order`.
pub fn boundary_closed(order: &[Labelled]) -> bool {
    order.iter().enumerate().all(|(i, e)| {
        let l = e.label.label();
        order.iter().enumerate().all(|(j, f)| {
            let k = f.label.label();
            let is_face = k != l && k & l == k;
            !is_face || j < i
        })
    })
}
