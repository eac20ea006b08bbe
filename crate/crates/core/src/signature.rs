//! Product signatures: ordered blocks of identical factors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::value::FactorKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Multiplicity {
    Finite(u64),
    CountablyInfinite,
}

impl Multiplicity {
    pub fn is_finite(self) -> bool {
        matches!(self, Multiplicity::Finite(_))
    }

    pub fn contains(self, index: u64) -> bool {
        match self {
            Multiplicity::Finite(m) => index < m,
            Multiplicity::CountablyInfinite => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub kind: FactorKind,
    pub mult: Multiplicity,
}

impl Block {
    pub fn new(kind: FactorKind, mult: Multiplicity) -> Self {
        Self { kind, mult }
    }
}

/// Position in a product: index `index` inside block `block`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coord {
    pub block: usize,
    pub index: u64,
}

impl Coord {
    pub fn new(block: usize, index: u64) -> Self {
        Self { block, index }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.block, self.index)
    }
}

impl FromStr for Coord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("bad coordinate {s:?}, expected \"block.index\""));
        let (b, i) = s.split_once('.').ok_or_else(bad)?;
        Ok(Coord::new(b.parse().map_err(|_| bad())?, i.parse().map_err(|_| bad())?))
    }
}

impl Serialize for Coord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A finitely described product `∏ A_k` where each block contributes `mult`
/// copies of one factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    blocks: Vec<Block>,
}

impl Signature {
    pub fn new(blocks: Vec<Block>) -> Result<Self, Error> {
        if blocks.is_empty() {
            return Err(Error::Parse("a signature needs at least one block".into()));
        }
        for b in &blocks {
            if b.mult == Multiplicity::Finite(0) {
                return Err(Error::Parse("finite multiplicities must be at least 1".into()));
            }
            if let FactorKind::FiniteChain(n) = b.kind {
                if n < 2 {
                    return Err(Error::Parse(format!("chain size must be at least 2, got {n}")));
                }
            }
        }
        Ok(Self { blocks })
    }

    /// `Ł_{n_1} × … × Ł_{n_k}`, one block per entry.
    pub fn chains(sizes: &[u64]) -> Result<Self, Error> {
        Self::new(
            sizes
                .iter()
                .map(|&n| Ok(Block::new(FactorKind::chain(n)?, Multiplicity::Finite(1))))
                .collect::<Result<_, Error>>()?,
        )
    }

    /// A single block: `kind^mult`.
    pub fn power(kind: FactorKind, mult: Multiplicity) -> Result<Self, Error> {
        Self::new(vec![Block::new(kind, mult)])
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, b: usize) -> &Block {
        &self.blocks[b]
    }

    pub fn kind_at(&self, c: Coord) -> FactorKind {
        self.blocks[c.block].kind
    }

    pub fn contains_coord(&self, c: Coord) -> bool {
        c.block < self.blocks.len() && self.blocks[c.block].mult.contains(c.index)
    }

    pub fn index_set_finite(&self) -> bool {
        self.blocks.iter().all(|b| b.mult.is_finite())
    }

    pub fn has_unit_interval(&self) -> bool {
        self.blocks.iter().any(|b| b.kind == FactorKind::UnitInterval)
    }

    /// Every block a finite chain with finite multiplicity.
    pub fn is_fully_finite(&self) -> bool {
        self.index_set_finite() && !self.has_unit_interval()
    }

    /// Number of coordinates, `None` for infinite index sets.
    pub fn coord_count(&self) -> Option<u64> {
        self.blocks.iter().try_fold(0u64, |acc, b| match b.mult {
            Multiplicity::Finite(m) => acc.checked_add(m),
            Multiplicity::CountablyInfinite => None,
        })
    }

    /// Carrier cardinality (saturating), `None` when infinite.
    pub fn carrier_size(&self) -> Option<u128> {
        if !self.is_fully_finite() {
            return None;
        }
        let mut size: u128 = 1;
        for b in &self.blocks {
            let (FactorKind::FiniteChain(n), Multiplicity::Finite(m)) = (b.kind, b.mult) else {
                unreachable!()
            };
            for _ in 0..m {
                size = size.saturating_mul(n as u128);
                if size == u128::MAX {
                    return Some(size);
                }
            }
        }
        Some(size)
    }

    /// All coordinates in block/index order, for finite index sets.
    pub fn coords(&self) -> Option<Vec<Coord>> {
        self.index_set_finite().then(|| {
            self.blocks
                .iter()
                .enumerate()
                .flat_map(|(b, blk)| {
                    let Multiplicity::Finite(m) = blk.mult else { unreachable!() };
                    (0..m).map(move |i| Coord::new(b, i))
                })
                .collect()
        })
    }

    /// Replaces every factor kind while keeping the block shape.
    pub fn map_kinds(&self, f: impl Fn(FactorKind) -> FactorKind) -> Result<Self, Error> {
        Self::new(
            self.blocks
                .iter()
                .map(|b| Block::new(f(b.kind), b.mult))
                .collect(),
        )
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, " × ")?;
            }
            match b.mult {
                Multiplicity::Finite(1) => write!(f, "{}", b.kind)?,
                Multiplicity::Finite(m) => write!(f, "{}^{m}", b.kind)?,
                Multiplicity::CountablyInfinite => write!(f, "{}^ω", b.kind)?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum MultRepr {
    Count(u64),
    Word(String),
}

impl MultRepr {
    pub(crate) fn from_mult(m: Multiplicity) -> Self {
        match m {
            Multiplicity::Finite(k) => MultRepr::Count(k),
            Multiplicity::CountablyInfinite => MultRepr::Word("inf".into()),
        }
    }

    pub(crate) fn to_mult(&self) -> Result<Multiplicity, String> {
        match self {
            MultRepr::Count(k) => Ok(Multiplicity::Finite(*k)),
            MultRepr::Word(w) if w == "inf" => Ok(Multiplicity::CountablyInfinite),
            MultRepr::Word(w) => Err(format!("bad multiplicity {w:?}")),
        }
    }
}

fn default_mult() -> MultRepr {
    MultRepr::Count(1)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockRepr {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    n: Option<u64>,
    #[serde(default = "default_mult")]
    mult: MultRepr,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SignatureRepr {
    blocks: Vec<BlockRepr>,
}

impl Serialize for Signature {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SignatureRepr {
            blocks: self
                .blocks
                .iter()
                .map(|b| {
                    let (kind, n) = match b.kind {
                        FactorKind::FiniteChain(n) => ("chain", Some(n)),
                        FactorKind::UnitInterval => ("interval", None),
                    };
                    BlockRepr {
                        kind: kind.into(),
                        n,
                        mult: MultRepr::from_mult(b.mult),
                    }
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Signature {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = SignatureRepr::deserialize(d)?;
        let blocks = repr
            .blocks
            .into_iter()
            .map(|b| {
                let kind = match (b.kind.as_str(), b.n) {
                    ("chain", Some(n)) => FactorKind::chain(n).map_err(|e| e.to_string())?,
                    ("chain", None) => return Err("chain block needs \"n\"".to_string()),
                    ("interval", None) => FactorKind::UnitInterval,
                    ("interval", Some(_)) => {
                        return Err("interval block takes no \"n\"".to_string())
                    }
                    (k, _) => return Err(format!("unknown block kind {k:?}")),
                };
                Ok(Block::new(kind, b.mult.to_mult()?))
            })
            .collect::<Result<Vec<_>, String>>()
            .map_err(D::Error::custom)?;
        Signature::new(blocks).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_documented_form() {
        let sig: Signature = serde_json::from_str(
            r#"{"blocks":[{"kind":"chain","n":3,"mult":2},{"kind":"chain","n":4,"mult":"inf"}]}"#,
        )
        .unwrap();
        assert_eq!(sig.blocks().len(), 2);
        assert_eq!(sig.block(0).mult, Multiplicity::Finite(2));
        assert_eq!(sig.block(1).mult, Multiplicity::CountablyInfinite);
        assert!(!sig.index_set_finite());
        assert_eq!(sig.to_string(), "Ł3^2 × Ł4^ω");
        let back = serde_json::to_string(&sig).unwrap();
        assert_eq!(
            back,
            r#"{"blocks":[{"kind":"chain","n":3,"mult":2},{"kind":"chain","n":4,"mult":"inf"}]}"#
        );
    }

    #[test]
    fn rejects_malformed_blocks() {
        for bad in [
            r#"{"blocks":[]}"#,
            r#"{"blocks":[{"kind":"chain","n":1}]}"#,
            r#"{"blocks":[{"kind":"chain"}]}"#,
            r#"{"blocks":[{"kind":"chain","n":3,"mult":0}]}"#,
            r#"{"blocks":[{"kind":"chain","n":3,"mult":"lots"}]}"#,
            r#"{"blocks":[{"kind":"torus"}]}"#,
        ] {
            assert!(serde_json::from_str::<Signature>(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn derived_predicates() {
        let sig = Signature::chains(&[3, 4]).unwrap();
        assert!(sig.is_fully_finite());
        assert_eq!(sig.carrier_size(), Some(12));
        assert_eq!(sig.coord_count(), Some(2));
        let unit = Signature::power(FactorKind::UnitInterval, Multiplicity::Finite(3)).unwrap();
        assert!(unit.index_set_finite());
        assert!(!unit.is_fully_finite());
        assert_eq!(unit.carrier_size(), None);
    }
}
