//! Rank-order sorting networks used for list path selection.
//!
//! Both sorters are written in the dataflow of their hardware counterparts:
//! a full rank-order sorter compares every pair of inputs and places each
//! element at its rank, and the partial sorter feeds two half-size full
//! sorters into a single row of comparators. Keys are ordered by
//! `(value, input index)` so that ties resolve toward lower indices.

use std::cmp::Ordering;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SorterKind {
    Full,
    Partial,
}

/// An `X`-to-`Y` sorter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SorterSpec {
    pub inputs: usize,
    pub outputs: usize,
    pub kind: SorterKind,
}

impl SorterSpec {
    pub fn new(inputs: usize, outputs: usize, kind: SorterKind) -> Result<Self> {
        if outputs == 0 || outputs > inputs {
            return Err(Error::SpecViolation("need 1 <= Y <= X"));
        }
        if kind == SorterKind::Partial && (!inputs.is_multiple_of(2) || outputs > inputs / 2) {
            return Err(Error::SpecViolation("partial sorter needs even X and Y <= X/2"));
        }
        Ok(Self { inputs, outputs, kind })
    }
}

/// Number of two-input comparators in the sorter.
pub fn comparator_count(spec: SorterSpec) -> usize {
    let x = spec.inputs;
    match spec.kind {
        SorterKind::Full => x * (x - 1) / 2,
        SorterKind::Partial => x * x / 4 - x / 2 + spec.outputs,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Ascending,
    Descending,
}

/// A sorted value together with its position in the input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ranked {
    pub key: f64,
    pub index: usize,
}

impl Ranked {
    #[inline]
    fn cmp_key(&self, other: &Ranked) -> Ordering {
        self.key.total_cmp(&other.key).then(self.index.cmp(&other.index))
    }
}

fn rank_order(items: &[Ranked], outputs: usize) -> Vec<Ranked> {
    let x = items.len();
    let mut rank = vec![0usize; x];
    for i in 0..x {
        for j in i + 1..x {
            if items[j].cmp_key(&items[i]) == Ordering::Less {
                rank[i] += 1;
            } else {
                rank[j] += 1;
            }
        }
    }
    let mut out = vec![Ranked { key: 0.0, index: 0 }; outputs];
    for (item, &r) in items.iter().zip(&rank) {
        if r < outputs {
            out[r] = *item;
        }
    }
    out
}

/// The `y` smallest values, ordered ascending or descending.
pub fn full_rank_sort(values: &[f64], y: usize, direction: Direction) -> Vec<Ranked> {
    let items: Vec<Ranked> = values.iter().enumerate().map(|(index, &key)| Ranked { key, index }).collect();
    let y = y.min(items.len());
    let mut out = rank_order(&items, y);
    if direction == Direction::Descending {
        out.reverse();
    }
    out
}

/// The `y` smallest values of `values`, in no particular order.
///
/// The input is split in halves; the first half is rank-sorted ascending,
/// the second half descending, and output `i` is the smaller of the two
/// `i`-th entries.
pub fn partial_rank_select(values: &[f64], y: usize) -> Result<Vec<Ranked>> {
    SorterSpec::new(values.len(), y, SorterKind::Partial)?;
    let half = values.len() / 2;
    let items: Vec<Ranked> = values.iter().enumerate().map(|(index, &key)| Ranked { key, index }).collect();
    let m = rank_order(&items[..half], y);
    let mut n = rank_order(&items[half..], y);
    n.reverse();
    Ok(m.iter()
        .zip(&n)
        .map(|(a, b)| if b.cmp_key(a) == Ordering::Less { *b } else { *a })
        .collect())
}

/// Indices of the `y` smallest keys, sorted by index. Pads odd or short
/// inputs with `+∞` so the partial sorter's preconditions hold.
pub(crate) fn select_smallest(keys: &[f64], y: usize) -> Vec<usize> {
    if keys.len() <= y {
        return (0..keys.len()).collect();
    }
    let width = keys.len().max(2 * y).next_multiple_of(2);
    let mut padded = keys.to_vec();
    padded.resize(width, f64::INFINITY);
    let mut idx: Vec<usize> = partial_rank_select(&padded, y)
        .expect("padded input satisfies sorter preconditions")
        .into_iter()
        .map(|r| r.index)
        .collect();
    idx.sort_unstable();
    idx
}
