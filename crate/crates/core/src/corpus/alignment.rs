use std::collections::HashMap;
use std::fmt::Write as _;

use super::BlockLayout;
use crate::{Error, Result};

/// A bijection of `0..N`: row `i` of order A corresponds to row `perm[i]` of
/// order B.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentMap {
    perm: Vec<usize>,
}

/// How far an alignment is from the identity, relative to a block layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlignmentClass {
    Identity,
    /// Every row maps into its own (class, split) block.
    InBlock,
    /// At least one row maps into a different block.
    CrossBlock,
}

impl AlignmentMap {
    pub fn identity(n: usize) -> Self {
        AlignmentMap {
            perm: (0..n).collect(),
        }
    }

    /// Wrap `perm`, checking that it is a bijection of `0..perm.len()`.
    pub fn from_perm(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument(format!(
                    "not a permutation of 0..{n}: entry {p}"
                )));
            }
        }
        Ok(AlignmentMap { perm })
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn get(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        AlignmentMap { perm: inv }
    }

    /// `self` followed by `next`: `i -> next[self[i]]`.
    pub fn then(&self, next: &AlignmentMap) -> Result<Self> {
        if next.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: next.len(),
            });
        }
        Ok(AlignmentMap {
            perm: self.perm.iter().map(|&p| next.perm[p]).collect(),
        })
    }

    /// Gather rows so that output row `i` is `rows[perm[i]]`.
    pub fn gather<T: Clone>(&self, rows: &[T]) -> Vec<T> {
        self.perm.iter().map(|&p| rows[p].clone()).collect()
    }

    pub fn classify(&self, layout: &BlockLayout) -> Result<AlignmentClass> {
        if layout.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: layout.len(),
                actual: self.len(),
            });
        }
        if self.is_identity() {
            return Ok(AlignmentClass::Identity);
        }
        let in_block = self
            .perm
            .iter()
            .enumerate()
            .all(|(i, &p)| layout.same_block(i, p));
        Ok(if in_block {
            AlignmentClass::InBlock
        } else {
            AlignmentClass::CrossBlock
        })
    }

    /// Alignment report: `index_a`, `index_b`, `same_block` (0/1).
    pub fn report_tsv(&self, layout: &BlockLayout) -> Result<String> {
        if layout.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: layout.len(),
                actual: self.len(),
            });
        }
        let mut out = String::from("index_a\tindex_b\tsame_block\n");
        for (i, &p) in self.perm.iter().enumerate() {
            let _ = writeln!(out, "{i}\t{p}\t{}", u8::from(layout.same_block(i, p)));
        }
        Ok(out)
    }
}

/// Map each position of `order_a` to the position of the same document in
/// `order_b`.
pub fn build_alignment(order_a: &[usize], order_b: &[usize]) -> Result<AlignmentMap> {
    if order_a.len() != order_b.len() {
        return Err(Error::IdSetMismatch(format!(
            "orders have lengths {} and {}",
            order_a.len(),
            order_b.len()
        )));
    }
    let mut pos_b = HashMap::with_capacity(order_b.len());
    for (j, &id) in order_b.iter().enumerate() {
        if pos_b.insert(id, j).is_some() {
            return Err(Error::IdSetMismatch(format!("duplicate id {id} in order B")));
        }
    }
    let mut perm = Vec::with_capacity(order_a.len());
    for &id in order_a {
        match pos_b.get(&id) {
            Some(&j) => perm.push(j),
            None => {
                return Err(Error::IdSetMismatch(format!(
                    "id {id} of order A is missing from order B"
                )))
            }
        }
    }
    // Duplicates in A surface as a non-bijective perm.
    AlignmentMap::from_perm(perm)
        .map_err(|_| Error::IdSetMismatch("duplicate id in order A".into()))
}
