//! Homomorphisms between product MV-frames in "reindex + chain-embed" form.
//!
//! Target coordinate `y` reads source coordinate `σ(y)` and pushes the value
//! through the inclusion of factors `A_σ(y) ⊆ B_y`. For chains the inclusion
//! `Ł_n → Ł_m` is an MV-embedding exactly when `(n-1) | (m-1)`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::coords::{BlockData, Coords};
use crate::element::{enumerate, join_all, meet_all, Element, ElementRepr};
use crate::error::Error;
use crate::frame::{chi, is_boolean_coordwise, is_compact};
use crate::signature::{Block, Coord, Multiplicity, Signature};
use crate::value::FactorKind;

/// How the indices of one target block that are not exceptions are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DefaultRule {
    /// Target index `i` reads source index `i` of the given block.
    Same(usize),
    /// Every index reads one fixed source coordinate.
    Constant(Coord),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockRule {
    pub default: DefaultRule,
    pub exceptions: BTreeMap<u64, Coord>,
}

impl BlockRule {
    pub fn same(block: usize) -> Self {
        Self {
            default: DefaultRule::Same(block),
            exceptions: BTreeMap::new(),
        }
    }

    pub fn constant(c: Coord) -> Self {
        Self {
            default: DefaultRule::Constant(c),
            exceptions: BTreeMap::new(),
        }
    }

    fn source_of(&self, index: u64) -> Coord {
        match self.exceptions.get(&index) {
            Some(&c) => c,
            None => match self.default {
                DefaultRule::Same(b) => Coord::new(b, index),
                DefaultRule::Constant(c) => c,
            },
        }
    }
}

/// Target index set → source index set, one rule per target block.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexMap {
    pub blocks: Vec<BlockRule>,
}

impl IndexMap {
    pub fn identity(blocks: usize) -> Self {
        Self {
            blocks: (0..blocks).map(BlockRule::same).collect(),
        }
    }

    pub fn constant(blocks: usize, c: Coord) -> Self {
        Self {
            blocks: (0..blocks).map(|_| BlockRule::constant(c)).collect(),
        }
    }

    pub fn source_of(&self, target: Coord) -> Coord {
        self.blocks[target.block].source_of(target.index)
    }
}

/// The inclusion of one source block's factor into one target block's.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CoordHom {
    pub source_block: usize,
    pub target_block: usize,
    pub map: String,
}

fn kind_label(k: FactorKind) -> String {
    match k {
        FactorKind::FiniteChain(n) => format!("chain:{n}"),
        FactorKind::UnitInterval => "interval".into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductHom {
    source: Arc<Signature>,
    target: Arc<Signature>,
    index_map: IndexMap,
}

impl ProductHom {
    pub fn new(
        source: Arc<Signature>,
        target: Arc<Signature>,
        index_map: IndexMap,
    ) -> Result<Self, Error> {
        let invalid = |msg: String| Err(Error::InvalidHom(msg));
        if index_map.blocks.len() != target.blocks().len() {
            return invalid(format!(
                "{} block rules for {} target blocks",
                index_map.blocks.len(),
                target.blocks().len()
            ));
        }
        for (t, rule) in index_map.blocks.iter().enumerate() {
            let tblock = target.block(t);
            let mut sources: Vec<Coord> = Vec::new();
            match rule.default {
                DefaultRule::Same(b) => {
                    if b >= source.blocks().len() {
                        return invalid(format!("target block {t} reads missing source block {b}"));
                    }
                    let ok = match (source.block(b).mult, tblock.mult) {
                        (Multiplicity::CountablyInfinite, _) => true,
                        (Multiplicity::Finite(ms), Multiplicity::Finite(mt)) => mt <= ms,
                        (Multiplicity::Finite(_), Multiplicity::CountablyInfinite) => false,
                    };
                    if !ok {
                        return invalid(format!(
                            "source block {b} is too small to be read index by index by target block {t}"
                        ));
                    }
                    sources.push(Coord::new(b, 0));
                }
                DefaultRule::Constant(c) => sources.push(c),
            }
            for (&i, &c) in &rule.exceptions {
                if !tblock.mult.contains(i) {
                    return invalid(format!("exception index {i} outside target block {t}"));
                }
                sources.push(c);
            }
            for c in sources {
                if !source.contains_coord(c) {
                    return invalid(format!("source coordinate {c} does not exist"));
                }
                let (from, to) = (source.kind_at(c), tblock.kind);
                if !from.embeds_into(to) {
                    return invalid(format!("{from} does not embed into {to}"));
                }
            }
        }
        Ok(Self {
            source,
            target,
            index_map,
        })
    }

    pub fn identity(sig: Arc<Signature>) -> Self {
        let n = sig.blocks().len();
        Self::new(sig.clone(), sig, IndexMap::identity(n)).expect("identity is valid")
    }

    pub fn source(&self) -> &Arc<Signature> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Signature> {
        &self.target
    }

    pub fn index_map(&self) -> &IndexMap {
        &self.index_map
    }

    /// The distinct factor inclusions the map uses.
    pub fn coord_homs(&self) -> Vec<CoordHom> {
        let mut pairs = BTreeSet::new();
        for (t, rule) in self.index_map.blocks.iter().enumerate() {
            let default_src = match rule.default {
                DefaultRule::Same(b) => b,
                DefaultRule::Constant(c) => c.block,
            };
            pairs.insert((default_src, t));
            for c in rule.exceptions.values() {
                pairs.insert((c.block, t));
            }
        }
        pairs
            .into_iter()
            .map(|(s, t)| CoordHom {
                source_block: s,
                target_block: t,
                map: format!(
                    "{}->{}",
                    kind_label(self.source.block(s).kind),
                    kind_label(self.target.block(t).kind)
                ),
            })
            .collect()
    }

    pub fn apply(&self, alpha: &Element) -> Result<Element, Error> {
        if **alpha.sig() != *self.source {
            return Err(Error::SignatureMismatch);
        }
        let blocks = self
            .target
            .blocks()
            .iter()
            .zip(&self.index_map.blocks)
            .map(|(tb, rule)| match tb.mult {
                Multiplicity::Finite(m) => {
                    BlockData::Dense((0..m).map(|i| alpha.get(rule.source_of(i))).collect())
                }
                Multiplicity::CountablyInfinite => {
                    let (default, mut exceptions) = match rule.default {
                        DefaultRule::Same(b) => match alpha.data().block(b) {
                            BlockData::Sparse {
                                default,
                                exceptions,
                            } => (*default, exceptions.clone()),
                            BlockData::Dense(_) => unreachable!("checked at construction"),
                        },
                        DefaultRule::Constant(c) => (alpha.get(c), BTreeMap::new()),
                    };
                    for (&i, &c) in &rule.exceptions {
                        exceptions.insert(i, alpha.get(c));
                    }
                    BlockData::Sparse {
                        default,
                        exceptions,
                    }
                }
            })
            .collect();
        Element::from_coords(&self.target, Coords::from_blocks(blocks))
    }

    /// No source coordinate is read by infinitely many target coordinates.
    /// Only a constant rule on an infinite target block breaks this.
    pub fn has_finite_fibers(&self) -> bool {
        self.target
            .blocks()
            .iter()
            .zip(&self.index_map.blocks)
            .all(|(tb, rule)| {
                tb.mult.is_finite() || !matches!(rule.default, DefaultRule::Constant(_))
            })
    }

    /// Source coordinates covering every way a coordinate can be read: each
    /// explicitly referenced coordinate plus one unreferenced index per block.
    pub fn representative_source_coords(&self) -> Vec<Coord> {
        let mut referenced: BTreeSet<Coord> = BTreeSet::new();
        for rule in &self.index_map.blocks {
            if let DefaultRule::Constant(c) = rule.default {
                referenced.insert(c);
            }
            referenced.extend(rule.exceptions.values().copied());
        }
        let mut out: BTreeSet<Coord> = referenced.clone();
        for (b, blk) in self.source.blocks().iter().enumerate() {
            if let Some(i) = (0..)
                .take_while(|&i| blk.mult.contains(i))
                .find(|&i| !referenced.contains(&Coord::new(b, i)))
            {
                out.insert(Coord::new(b, i));
            }
        }
        out.into_iter().collect()
    }

    fn require_algebraic(&self) -> Result<(), Error> {
        if self.source.has_unit_interval() || self.target.has_unit_interval() {
            Err(Error::NotAlgebraicSignature)
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CompletenessReport {
    pub complete: bool,
    pub proof: String,
    /// Join and meet preservation over every subset (sources with at most 12
    /// elements) or every pair (when the pairs fit the pair budget).
    pub exhaustive_check: Option<bool>,
    /// The same over random pairs, for larger or infinite sources.
    pub sampled_check: Option<bool>,
}

fn preserves_joins_and_meets(phi: &ProductHom, s: &[&Element]) -> Result<bool, Error> {
    let im: Vec<Element> = s.iter().map(|x| phi.apply(x)).collect::<Result<_, _>>()?;
    Ok(phi.apply(&join_all(&phi.source, s.iter().copied())?)? == join_all(&phi.target, im.iter())?
        && phi.apply(&meet_all(&phi.source, s.iter().copied())?)? == meet_all(&phi.target, im.iter())?)
}

fn exhaustive_completeness(phi: &ProductHom, cfg: &Config) -> Result<bool, Error> {
    let n = phi.source.carrier_size().ok_or(Error::InfiniteCarrier)?;
    if n > 12 && n * (n + 1) / 2 > cfg.pair_budget as u128 {
        return Err(Error::CarrierTooLarge {
            size: n * (n + 1) / 2,
            bound: cfg.pair_budget,
        });
    }
    let src = enumerate(&phi.source, cfg.enumeration_bound)?;
    if n <= 12 {
        for mask in 0u32..(1 << n) {
            let s: Vec<&Element> = (0..src.len()).filter(|i| mask >> i & 1 == 1).map(|i| &src[i]).collect();
            if !preserves_joins_and_meets(phi, &s)? {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    if !preserves_joins_and_meets(phi, &[])? {
        return Ok(false);
    }
    for i in 0..src.len() {
        for j in i..src.len() {
            if !preserves_joins_and_meets(phi, &[&src[i], &src[j]])? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn sampled_completeness(phi: &ProductHom, cfg: &Config) -> Result<bool, Error> {
    let mut rng = cfg.rng();
    if !preserves_joins_and_meets(phi, &[])? {
        return Ok(false);
    }
    for _ in 0..cfg.samples {
        let x = Element::random(&phi.source, &mut rng);
        let y = Element::random(&phi.source, &mut rng);
        if !preserves_joins_and_meets(phi, &[&x, &y])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every target coordinate reads exactly one source coordinate through an
/// order embedding, and suprema in a product are coordinatewise, so each
/// map in normal form preserves arbitrary joins (and, via `⋀S = ¬⋁¬S`,
/// arbitrary meets). This is re-checked by brute force where the budget
/// allows and on random pairs otherwise.
pub fn is_complete(phi: &ProductHom, cfg: &Config) -> CompletenessReport {
    let proof = "target coordinates read single source coordinates through order embeddings; \
                 joins and meets are coordinatewise"
        .to_string();
    let exhaustive_check = exhaustive_completeness(phi, cfg).ok();
    let sampled_check = match exhaustive_check {
        Some(_) => None,
        None => sampled_completeness(phi, cfg).ok(),
    };
    CompletenessReport {
        complete: exhaustive_check.or(sampled_check).unwrap_or(true),
        proof,
        exhaustive_check,
        sampled_check,
    }
}

/// Coherence (`φ(𝔨(A)) ⊆ 𝔨(B)`) decided from the index map: a
/// finite-support element has finite-support image iff every fiber is finite.
pub fn is_coherent_map(phi: &ProductHom) -> Result<bool, Error> {
    phi.require_algebraic()?;
    Ok(phi.has_finite_fibers())
}

/// Whether every `χ_F` (finite `F`) is sent to some `χ_G` with `G` finite.
/// Returns the first offending `χ_F` when not.
pub fn preserves_maximal_compact(phi: &ProductHom) -> Result<(bool, Option<Element>), Error> {
    phi.require_algebraic()?;
    let reps = phi.representative_source_coords();
    let mut candidates: Vec<Vec<Coord>> = reps.iter().map(|&c| vec![c]).collect();
    candidates.push(reps.clone());
    for f in candidates {
        let x = chi(&phi.source, &f)?;
        let image = phi.apply(&x)?;
        if !(is_boolean_coordwise(&image) && is_compact(&image).compact) {
            return Ok((false, Some(x)));
        }
    }
    Ok((true, None))
}

/// Coherence versus "complete and preserves maximal compacts", each
/// evaluated on its own.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CoherenceReport {
    pub coherent: bool,
    pub complete: bool,
    pub preserves_maximal_compact: bool,
    pub agree: bool,
    pub counterexample: Option<ElementRepr>,
}

pub fn coherence_equivalence(phi: &ProductHom, cfg: &Config) -> Result<CoherenceReport, Error> {
    let coherent = is_coherent_map(phi)?;
    let complete = is_complete(phi, cfg).complete;
    let (pmc, counterexample) = preserves_maximal_compact(phi)?;
    let second = complete && pmc;
    Ok(CoherenceReport {
        coherent,
        complete,
        preserves_maximal_compact: pmc,
        agree: coherent == second,
        counterexample: counterexample.as_ref().map(ElementRepr::from),
    })
}

/// Shape of randomly generated homomorphisms.
#[derive(Clone, Debug)]
pub struct RandomHomParams {
    pub max_blocks: usize,
    pub max_mult: u64,
    pub max_chain: u64,
    /// Probability that a block is countably infinite.
    pub infinite_prob: f64,
}

impl Default for RandomHomParams {
    fn default() -> Self {
        Self {
            max_blocks: 3,
            max_mult: 8,
            max_chain: 7,
            infinite_prob: 0.3,
        }
    }
}

/// A random valid homomorphism between products of finite chains.
pub fn random_hom(rng: &mut impl Rng, p: &RandomHomParams) -> ProductHom {
    let random_mult = |rng: &mut dyn rand::RngCore| {
        if rng.gen_bool(p.infinite_prob) {
            Multiplicity::CountablyInfinite
        } else {
            Multiplicity::Finite(rng.gen_range(1..=p.max_mult))
        }
    };
    let source_blocks: Vec<Block> = (0..rng.gen_range(1..=p.max_blocks))
        .map(|_| {
            Block::new(
                FactorKind::FiniteChain(rng.gen_range(2..=p.max_chain)),
                random_mult(rng),
            )
        })
        .collect();
    let source = Arc::new(Signature::new(source_blocks.clone()).unwrap());
    let random_coord = |rng: &mut dyn rand::RngCore, b: usize| {
        let bound = match source_blocks[b].mult {
            Multiplicity::Finite(m) => m,
            Multiplicity::CountablyInfinite => p.max_mult,
        };
        Coord::new(b, rng.gen_range(0..bound))
    };
    let mut target_blocks = Vec::new();
    let mut rules = Vec::new();
    for _ in 0..rng.gen_range(1..=p.max_blocks) {
        let b = rng.gen_range(0..source_blocks.len());
        let FactorKind::FiniteChain(n) = source_blocks[b].kind else { unreachable!() };
        let fits: Vec<u64> = (2..=p.max_chain).filter(|m| (m - 1) % (n - 1) == 0).collect();
        let kind = FactorKind::FiniteChain(fits[rng.gen_range(0..fits.len())]);
        let (mult, default) = if rng.gen_bool(0.5) {
            let mult = match source_blocks[b].mult {
                Multiplicity::CountablyInfinite => random_mult(rng),
                Multiplicity::Finite(ms) => Multiplicity::Finite(rng.gen_range(1..=ms)),
            };
            (mult, DefaultRule::Same(b))
        } else {
            (random_mult(rng), DefaultRule::Constant(random_coord(rng, b)))
        };
        let exc_bound = match mult {
            Multiplicity::Finite(m) => m,
            Multiplicity::CountablyInfinite => p.max_mult,
        };
        let exceptions = (0..rng.gen_range(0..=2))
            .map(|_| (rng.gen_range(0..exc_bound), random_coord(rng, b)))
            .collect();
        target_blocks.push(Block::new(kind, mult));
        rules.push(BlockRule {
            default,
            exceptions,
        });
    }
    let target = Arc::new(Signature::new(target_blocks).unwrap());
    ProductHom::new(source, target, IndexMap { blocks: rules }).expect("generated map is valid")
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct BlockRuleRepr {
    default: String,
    #[serde(default)]
    exceptions: BTreeMap<String, Coord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IndexMapRepr {
    rule: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    blocks: Option<Vec<BlockRuleRepr>>,
}

/// `{"source":…,"target":…,"indexMap":{"rule":…},"coordHoms":[…]}`.
#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ProductHomRepr {
    source: Signature,
    target: Signature,
    index_map: IndexMapRepr,
    #[serde(default)]
    coord_homs: Option<Vec<CoordHom>>,
}

impl From<&ProductHom> for ProductHomRepr {
    fn from(phi: &ProductHom) -> Self {
        let n = phi.target.blocks().len();
        let index_map = if phi.index_map == IndexMap::identity(n) {
            IndexMapRepr {
                rule: "identity".into(),
                blocks: None,
            }
        } else if let Some(c) = match phi.index_map.blocks[0].default {
            DefaultRule::Constant(c) if phi.index_map == IndexMap::constant(n, c) => Some(c),
            _ => None,
        } {
            IndexMapRepr {
                rule: format!("constant:{c}"),
                blocks: None,
            }
        } else {
            IndexMapRepr {
                rule: "explicit".into(),
                blocks: Some(
                    phi.index_map
                        .blocks
                        .iter()
                        .map(|r| BlockRuleRepr {
                            default: match r.default {
                                DefaultRule::Same(b) => format!("same:{b}"),
                                DefaultRule::Constant(c) => format!("constant:{c}"),
                            },
                            exceptions: r
                                .exceptions
                                .iter()
                                .map(|(i, c)| (i.to_string(), *c))
                                .collect(),
                        })
                        .collect(),
                ),
            }
        };
        Self {
            source: (*phi.source).clone(),
            target: (*phi.target).clone(),
            index_map,
            coord_homs: Some(phi.coord_homs()),
        }
    }
}

fn parse_rule(s: &str) -> Result<DefaultRule, Error> {
    if let Some(b) = s.strip_prefix("same:") {
        return b
            .parse()
            .map(DefaultRule::Same)
            .map_err(|_| Error::Parse(format!("bad rule {s:?}")));
    }
    if let Some(c) = s.strip_prefix("constant:") {
        let c = if c.contains('.') {
            c.parse()?
        } else {
            Coord::new(0, c.parse().map_err(|_| Error::Parse(format!("bad rule {s:?}")))?)
        };
        return Ok(DefaultRule::Constant(c));
    }
    Err(Error::Parse(format!("bad rule {s:?}")))
}

impl TryFrom<ProductHomRepr> for ProductHom {
    type Error = Error;

    fn try_from(r: ProductHomRepr) -> Result<Self, Error> {
        let n = r.target.blocks().len();
        let index_map = match (r.index_map.rule.as_str(), r.index_map.blocks) {
            ("identity", None) => IndexMap::identity(n),
            ("explicit", Some(blocks)) => IndexMap {
                blocks: blocks
                    .into_iter()
                    .map(|b| {
                        Ok(BlockRule {
                            default: parse_rule(&b.default)?,
                            exceptions: b
                                .exceptions
                                .into_iter()
                                .map(|(k, c)| {
                                    k.parse()
                                        .map(|i| (i, c))
                                        .map_err(|_| Error::Parse(format!("bad index {k:?}")))
                                })
                                .collect::<Result<_, Error>>()?,
                        })
                    })
                    .collect::<Result<_, Error>>()?,
            },
            (rule, None) if rule.starts_with("constant:") => match parse_rule(rule)? {
                DefaultRule::Constant(c) => IndexMap::constant(n, c),
                DefaultRule::Same(_) => unreachable!(),
            },
            (rule, _) => return Err(Error::Parse(format!("bad index map rule {rule:?}"))),
        };
        let phi = ProductHom::new(Arc::new(r.source), Arc::new(r.target), index_map)?;
        if let Some(declared) = r.coord_homs {
            if declared != phi.coord_homs() {
                return Err(Error::InvalidHom(
                    "declared coordHoms do not match the index map".into(),
                ));
            }
        }
        Ok(phi)
    }
}

impl Serialize for ProductHom {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ProductHomRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProductHom {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        ProductHomRepr::deserialize(d)?
            .try_into()
            .map_err(serde::de::Error::custom)
    }
}

/// `τ: Ł_3 → Ł_3^ω`, the diagonal: `τ(x)(n) = x`.
pub fn diagonal_example() -> ProductHom {
    let source = Arc::new(Signature::chains(&[3]).unwrap());
    let target = Arc::new(
        Signature::power(FactorKind::FiniteChain(3), Multiplicity::CountablyInfinite).unwrap(),
    );
    ProductHom::new(source, target, IndexMap::constant(1, Coord::new(0, 0))).unwrap()
}

/// `φ: ∏_{n≥2} Ł_n → ∏_{n≥2} Ł_{2n-1}`, `φ(α)(n) = α(n)`, truncated to the
/// indices `2..=last` followed by a tail block `Ł_last^ω → Ł_{2·last-1}^ω`.
pub fn doubling_example(last: u64) -> ProductHom {
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    for n in 2..=last {
        src.push(Block::new(FactorKind::FiniteChain(n), Multiplicity::Finite(1)));
        tgt.push(Block::new(FactorKind::FiniteChain(2 * n - 1), Multiplicity::Finite(1)));
    }
    src.push(Block::new(FactorKind::FiniteChain(last), Multiplicity::CountablyInfinite));
    tgt.push(Block::new(FactorKind::FiniteChain(2 * last - 1), Multiplicity::CountablyInfinite));
    let n = src.len();
    ProductHom::new(
        Arc::new(Signature::new(src).unwrap()),
        Arc::new(Signature::new(tgt).unwrap()),
        IndexMap::identity(n),
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::ChainValue;

    fn val(s: &str) -> ChainValue {
        s.parse().unwrap()
    }

    #[test]
    fn diagonal_sends_half_to_constant_half() {
        let tau = diagonal_example();
        let half = Element::parse_values(tau.source(), &["1/2"]).unwrap();
        let image = tau.apply(&half).unwrap();
        assert_eq!(image, Element::constant(tau.target(), val("1/2")).unwrap());
        assert!(!is_compact(&image).compact);
    }

    #[test]
    fn identity_is_neutral() {
        let sig = Arc::new(Signature::chains(&[3, 4]).unwrap());
        let id = ProductHom::identity(sig.clone());
        let x = Element::parse_values(&sig, &["1/2", "2/3"]).unwrap();
        assert_eq!(id.apply(&x).unwrap(), x);
        assert!(is_coherent_map(&id).unwrap());
    }

    #[test]
    fn doubling_keeps_rational_values() {
        let phi = doubling_example(5);
        let src = phi.source().clone();
        // α(n) = 1/(n-1) on the prefix, 1/4 on the tail.
        let mut alpha = Element::zero(&src);
        for (b, n) in (2..=5u64).enumerate() {
            alpha = alpha.with(Coord::new(b, 0), ChainValue::new(1, n - 1).unwrap()).unwrap();
        }
        alpha = alpha.with(Coord::new(4, 7), val("1/4")).unwrap();
        let image = phi.apply(&alpha).unwrap();
        for c in alpha.data().probe_coords() {
            assert_eq!(image.get(c), alpha.get(c));
        }
        assert!(is_coherent_map(&phi).unwrap());
    }

    #[test]
    fn construction_rejects_bad_maps() {
        let l3 = Arc::new(Signature::chains(&[3]).unwrap());
        let l4 = Arc::new(Signature::chains(&[4]).unwrap());
        assert!(matches!(
            ProductHom::new(l3.clone(), l4.clone(), IndexMap::identity(1)),
            Err(Error::InvalidHom(_))
        ));
        let inf = Arc::new(
            Signature::power(FactorKind::FiniteChain(3), Multiplicity::CountablyInfinite).unwrap(),
        );
        assert!(ProductHom::new(l3.clone(), inf, IndexMap::identity(1)).is_err());
        assert!(ProductHom::new(l3.clone(), l3.clone(), IndexMap::constant(1, Coord::new(0, 4))).is_err());
    }

    #[test]
    fn unit_interval_signatures_are_refused() {
        let unit = Arc::new(Signature::power(FactorKind::UnitInterval, Multiplicity::Finite(1)).unwrap());
        let id = ProductHom::identity(unit);
        assert_eq!(is_coherent_map(&id), Err(Error::NotAlgebraicSignature));
        assert!(preserves_maximal_compact(&id).is_err());
    }

    #[test]
    fn json_forms() {
        let tau = diagonal_example();
        let text = serde_json::to_string(&tau).unwrap();
        assert!(text.contains(r#""indexMap":{"rule":"constant:0.0"}"#), "{text}");
        let back: ProductHom = serde_json::from_str(&text).unwrap();
        assert_eq!(back, tau);
        let phi = doubling_example(3);
        let back: ProductHom = serde_json::from_str(&serde_json::to_string(&phi).unwrap()).unwrap();
        assert_eq!(back, phi);
        let explicit = r#"{"source":{"blocks":[{"kind":"chain","n":3,"mult":2}]},
            "target":{"blocks":[{"kind":"chain","n":5,"mult":2}]},
            "indexMap":{"rule":"explicit","blocks":[{"default":"same:0","exceptions":{"1":"0.0"}}]}}"#;
        let phi: ProductHom = serde_json::from_str(explicit).unwrap();
        let x = Element::parse_values(phi.source(), &["1/2", "1"]).unwrap();
        assert_eq!(
            phi.apply(&x).unwrap(),
            Element::parse_values(phi.target(), &["1/2", "1/2"]).unwrap()
        );
    }
}
