//! Finitely described coordinate vectors over a block-structured index set.
//!
//! Finite blocks are stored densely. Infinite blocks carry a default value and
//! a finite map of exceptions; the map never holds an entry equal to the
//! default, so structural equality is equality of the described vectors.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::signature::{Coord, Multiplicity};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BlockData<T> {
    Dense(Vec<T>),
    Sparse {
        default: T,
        exceptions: BTreeMap<u64, T>,
    },
}

impl<T: Copy + PartialEq> BlockData<T> {
    pub fn constant(mult: Multiplicity, v: T) -> Self {
        match mult {
            Multiplicity::Finite(m) => BlockData::Dense(vec![v; m as usize]),
            Multiplicity::CountablyInfinite => BlockData::Sparse {
                default: v,
                exceptions: BTreeMap::new(),
            },
        }
    }

    pub fn get(&self, index: u64) -> T {
        match self {
            BlockData::Dense(vals) => vals[index as usize],
            BlockData::Sparse {
                default,
                exceptions,
            } => *exceptions.get(&index).unwrap_or(default),
        }
    }

    fn set(&mut self, index: u64, v: T) {
        match self {
            BlockData::Dense(vals) => vals[index as usize] = v,
            BlockData::Sparse {
                default,
                exceptions,
            } => {
                if v == *default {
                    exceptions.remove(&index);
                } else {
                    exceptions.insert(index, v);
                }
            }
        }
    }

    /// Every value that occurs in the block (the default counts: it occurs
    /// at infinitely many indices).
    pub fn values(&self) -> Box<dyn Iterator<Item = T> + '_> {
        match self {
            BlockData::Dense(vals) => Box::new(vals.iter().copied()),
            BlockData::Sparse {
                default,
                exceptions,
            } => Box::new(std::iter::once(*default).chain(exceptions.values().copied())),
        }
    }

    fn map<U: Copy + PartialEq>(&self, f: impl Fn(T) -> U) -> BlockData<U> {
        match self {
            BlockData::Dense(vals) => BlockData::Dense(vals.iter().map(|&v| f(v)).collect()),
            BlockData::Sparse {
                default,
                exceptions,
            } => {
                let default = f(*default);
                let exceptions = exceptions
                    .iter()
                    .map(|(&i, &v)| (i, f(v)))
                    .filter(|(_, v)| *v != default)
                    .collect();
                BlockData::Sparse {
                    default,
                    exceptions,
                }
            }
        }
    }

    fn zip<U: Copy + PartialEq>(
        &self,
        other: &Self,
        f: impl Fn(T, T) -> U,
    ) -> Result<BlockData<U>, Error> {
        match (self, other) {
            (BlockData::Dense(a), BlockData::Dense(b)) if a.len() == b.len() => Ok(
                BlockData::Dense(a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()),
            ),
            (
                BlockData::Sparse {
                    default: da,
                    exceptions: ea,
                },
                BlockData::Sparse {
                    default: db,
                    exceptions: eb,
                },
            ) => {
                let default = f(*da, *db);
                let keys: BTreeSet<u64> = ea.keys().chain(eb.keys()).copied().collect();
                let exceptions = keys
                    .into_iter()
                    .map(|i| {
                        let x = *ea.get(&i).unwrap_or(da);
                        let y = *eb.get(&i).unwrap_or(db);
                        (i, f(x, y))
                    })
                    .filter(|(_, v)| *v != default)
                    .collect();
                Ok(BlockData::Sparse {
                    default,
                    exceptions,
                })
            }
            _ => Err(Error::SignatureMismatch),
        }
    }
}

impl<T: Copy + Ord> BlockData<T> {
    /// Default plus exceptions; for dense blocks the default is the most
    /// frequent value, ties going to the smallest.
    pub fn default_and_exceptions(&self) -> (T, BTreeMap<u64, T>) {
        match self {
            BlockData::Dense(vals) => {
                let mut counts: BTreeMap<T, usize> = BTreeMap::new();
                for &v in vals {
                    *counts.entry(v).or_default() += 1;
                }
                let best = counts.values().copied().max().unwrap_or(0);
                let default = counts
                    .iter()
                    .find(|(_, &c)| c == best)
                    .map(|(&v, _)| v)
                    .expect("dense blocks are nonempty");
                let exceptions = vals
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != default)
                    .map(|(i, &v)| (i as u64, v))
                    .collect();
                (default, exceptions)
            }
            BlockData::Sparse {
                default,
                exceptions,
            } => (*default, exceptions.clone()),
        }
    }
}

/// A vector indexed by the coordinates of a signature.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coords<T> {
    blocks: Vec<BlockData<T>>,
}

impl<T: Copy + PartialEq> Coords<T> {
    pub fn constant(mults: impl IntoIterator<Item = Multiplicity>, v: T) -> Self {
        Self {
            blocks: mults.into_iter().map(|m| BlockData::constant(m, v)).collect(),
        }
    }

    /// Builds from per-block data; sparse blocks are canonicalized.
    pub fn from_blocks(blocks: Vec<BlockData<T>>) -> Self {
        let blocks = blocks
            .into_iter()
            .map(|b| match b {
                BlockData::Sparse {
                    default,
                    mut exceptions,
                } => {
                    exceptions.retain(|_, v| *v != default);
                    BlockData::Sparse {
                        default,
                        exceptions,
                    }
                }
                dense => dense,
            })
            .collect();
        Self { blocks }
    }

    pub fn blocks(&self) -> &[BlockData<T>] {
        &self.blocks
    }

    pub fn block(&self, b: usize) -> &BlockData<T> {
        &self.blocks[b]
    }

    pub fn get(&self, c: Coord) -> T {
        self.blocks[c.block].get(c.index)
    }

    pub fn with(&self, c: Coord, v: T) -> Self {
        let mut out = self.clone();
        out.blocks[c.block].set(c.index, v);
        out
    }

    pub fn map<U: Copy + PartialEq>(&self, f: impl Fn(usize, T) -> U) -> Coords<U> {
        Coords {
            blocks: self
                .blocks
                .iter()
                .enumerate()
                .map(|(b, data)| data.map(|v| f(b, v)))
                .collect(),
        }
    }

    pub fn zip_with<U: Copy + PartialEq>(
        &self,
        other: &Self,
        f: impl Fn(usize, T, T) -> U,
    ) -> Result<Coords<U>, Error> {
        if self.blocks.len() != other.blocks.len() {
            return Err(Error::SignatureMismatch);
        }
        Ok(Coords {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .enumerate()
                .map(|(b, (x, y))| x.zip(y, |p, q| f(b, p, q)))
                .collect::<Result<_, _>>()?,
        })
    }

    /// `pred` holds at every coordinate.
    pub fn all(&self, pred: impl Fn(usize, T) -> bool) -> bool {
        self.blocks
            .iter()
            .enumerate()
            .all(|(b, data)| data.values().all(|v| pred(b, v)))
    }

    /// `pred` holds between `self` and `other` at every coordinate.
    pub fn all2(&self, other: &Self, pred: impl Fn(T, T) -> bool) -> Result<bool, Error> {
        Ok(self.zip_with(other, |_, a, b| pred(a, b))?.all(|_, ok| ok))
    }

    /// Coordinates at which `pred` holds, if there are finitely many; `Err`
    /// carries the first block whose default satisfies `pred`.
    pub fn finite_support(&self, pred: impl Fn(T) -> bool) -> Result<Vec<Coord>, usize> {
        let mut out = Vec::new();
        for (b, data) in self.blocks.iter().enumerate() {
            match data {
                BlockData::Dense(vals) => out.extend(
                    vals.iter()
                        .enumerate()
                        .filter(|(_, &v)| pred(v))
                        .map(|(i, _)| Coord::new(b, i as u64)),
                ),
                BlockData::Sparse {
                    default,
                    exceptions,
                } => {
                    if pred(*default) {
                        return Err(b);
                    }
                    out.extend(
                        exceptions
                            .iter()
                            .filter(|(_, &v)| pred(v))
                            .map(|(&i, _)| Coord::new(b, i)),
                    );
                }
            }
        }
        Ok(out)
    }

    /// A finite set of coordinates that meets every "behaviour" of the
    /// vector: all indices of dense blocks, the exceptions of sparse blocks,
    /// and one index of each sparse block that carries the default.
    pub fn probe_coords(&self) -> Vec<Coord> {
        let mut out = Vec::new();
        for (b, data) in self.blocks.iter().enumerate() {
            match data {
                BlockData::Dense(vals) => {
                    out.extend((0..vals.len() as u64).map(|i| Coord::new(b, i)))
                }
                BlockData::Sparse { exceptions, .. } => {
                    out.extend(exceptions.keys().map(|&i| Coord::new(b, i)));
                    let generic = (0..).find(|i| !exceptions.contains_key(i)).unwrap();
                    out.push(Coord::new(b, generic));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_canonical_after_zip() {
        let inf = Multiplicity::CountablyInfinite;
        let a = Coords::constant([inf], 1i64).with(Coord::new(0, 3), 5);
        let b = Coords::constant([inf], 1i64).with(Coord::new(0, 3), -5);
        let sum = a.zip_with(&b, |_, x, y| x + y).unwrap();
        // 5 + (-5) = 0 differs from default 2, 1 + 1 = 2 is the default.
        assert_eq!(sum.get(Coord::new(0, 3)), 0);
        assert_eq!(sum.get(Coord::new(0, 100)), 2);
        let diff = a.zip_with(&a, |_, x, y| x - y).unwrap();
        assert_eq!(diff, Coords::constant([inf], 0));
    }

    #[test]
    fn dense_default_is_the_mode() {
        let d = BlockData::Dense(vec![2i64, 7, 7, 2, 7]);
        let (def, exc) = d.default_and_exceptions();
        assert_eq!(def, 7);
        assert_eq!(exc.into_iter().collect::<Vec<_>>(), vec![(0, 2), (3, 2)]);
        let tie = BlockData::Dense(vec![4i64, 1]);
        assert_eq!(tie.default_and_exceptions().0, 1);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let a = Coords::constant([Multiplicity::Finite(2)], 0i64);
        let b = Coords::constant([Multiplicity::Finite(3)], 0i64);
        assert_eq!(a.zip_with(&b, |_, x, _| x), Err(Error::SignatureMismatch));
    }

    #[test]
    fn finite_support_detects_infinite_default() {
        let c = Coords::constant([Multiplicity::Finite(2), Multiplicity::CountablyInfinite], 0i64)
            .with(Coord::new(1, 4), 3)
            .with(Coord::new(0, 1), 1);
        assert_eq!(
            c.finite_support(|v| v != 0),
            Ok(vec![Coord::new(0, 1), Coord::new(1, 4)])
        );
        let d = Coords::constant([Multiplicity::CountablyInfinite], 1i64);
        assert_eq!(d.finite_support(|v| v != 0), Err(0));
    }
}
