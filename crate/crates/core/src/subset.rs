//! Subsets of `[d] = {1, …, d}` as bit masks, and the short-lex order.
//!
//! Element `i` of `[d]` is bit `i - 1`. The mask value doubles as the
//! coordinate index of the subset in a direct power `G^{2^d}`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_D: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubsetIndex {
    d: usize,
    mask: u32,
}

impl SubsetIndex {
    pub fn new(d: usize, mask: u32) -> Result<SubsetIndex> {
        if d > MAX_D {
            return Err(Error::InvalidParameter(format!("d = {d} exceeds {MAX_D}")));
        }
        if (mask as u64) >> d != 0 {
            return Err(Error::SubsetOutOfRange {
                index: 32 - mask.leading_zeros() as usize,
                len: d,
            });
        }
        Ok(SubsetIndex { d, mask })
    }

    /// From 1-based elements.
    pub fn from_elements(d: usize, elements: &[usize]) -> Result<SubsetIndex> {
        let mut mask = 0u32;
        for &i in elements {
            if i == 0 || i > d {
                return Err(Error::SubsetOutOfRange { index: i, len: d });
            }
            mask |= 1 << (i - 1);
        }
        SubsetIndex::new(d, mask)
    }

    pub fn empty(d: usize) -> SubsetIndex {
        SubsetIndex { d, mask: 0 }
    }

    pub fn full(d: usize) -> SubsetIndex {
        SubsetIndex {
            d,
            mask: ((1u64 << d) - 1) as u32,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    /// Coordinate index in `G^{2^d}`.
    pub fn index(&self) -> usize {
        self.mask as usize
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        (1..=self.d).contains(&i) && self.mask & (1 << (i - 1)) != 0
    }

    /// 1-based elements in increasing order.
    pub fn elements(&self) -> Vec<usize> {
        (1..=self.d).filter(|&i| self.contains(i)).collect()
    }

    pub fn is_subset_of(&self, other: &SubsetIndex) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn union(&self, other: &SubsetIndex) -> Result<SubsetIndex> {
        self.same_ground(other)?;
        Ok(SubsetIndex {
            d: self.d,
            mask: self.mask | other.mask,
        })
    }

    /// `A Δ {i}`.
    pub fn toggle(&self, i: usize) -> Result<SubsetIndex> {
        if i == 0 || i > self.d {
            return Err(Error::SubsetOutOfRange {
                index: i,
                len: self.d,
            });
        }
        Ok(SubsetIndex {
            d: self.d,
            mask: self.mask ^ (1 << (i - 1)),
        })
    }

    fn same_ground(&self, other: &SubsetIndex) -> Result<()> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(Error::GroundSetMismatch(self.d, other.d))
        }
    }

    /// Short-lex: smaller sets first; among equal sizes, `A < B` iff the
    /// least element of the symmetric difference lies in `A`.
    pub fn shortlex_compare(&self, other: &SubsetIndex) -> Result<Ordering> {
        self.same_ground(other)?;
        Ok(shortlex_masks(self.mask, other.mask))
    }
}

fn shortlex_masks(a: u32, b: u32) -> Ordering {
    a.count_ones().cmp(&b.count_ones()).then_with(|| {
        let diff = a ^ b;
        if diff == 0 {
            Ordering::Equal
        } else if a & diff & diff.wrapping_neg() != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    })
}

impl PartialOrd for SubsetIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ground-set size first, then short-lex.
impl Ord for SubsetIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.d
            .cmp(&other.d)
            .then_with(|| shortlex_masks(self.mask, other.mask))
    }
}

impl fmt::Display for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements().iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// All `2^d` subsets of `[d]` in short-lex order.
pub fn all_shortlex(d: usize) -> Vec<SubsetIndex> {
    assert!(d <= MAX_D, "d = {d} exceeds {MAX_D}");
    let mut all: Vec<SubsetIndex> = (0..1u32 << d).map(|mask| SubsetIndex { d, mask }).collect();
    all.sort();
    all
}
