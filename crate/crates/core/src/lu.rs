//! Lattice-ordered abelian groups `⟨ℤ^X, u⟩` with a strong unit, and the
//! functors `Γ` (unit interval) and `Φ` (its inverse on chain products).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config::Config;
use crate::coords::{BlockData, Coords};
use crate::element::Element;
use crate::error::Error;
use crate::frame::{is_compact, CompactnessVerdict};
use crate::morphism::{DefaultRule, IndexMap, ProductHom};
use crate::signature::{Block, Coord, MultRepr, Multiplicity, Signature};
use crate::value::{ChainValue, FactorKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LuBlock {
    /// Value of the strong unit at every coordinate of the block.
    pub unit: u64,
    pub mult: Multiplicity,
}

/// `∏ ⟨ℤ, u_k⟩^{m_k}`: the group `ℤ^X` ordered coordinatewise with a strong
/// unit that is constant on each block.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LuSignature {
    blocks: Vec<LuBlock>,
}

impl LuSignature {
    pub fn new(blocks: Vec<LuBlock>) -> Result<Self, Error> {
        if blocks.is_empty() {
            return Err(Error::Parse("an lu-signature needs at least one block".into()));
        }
        for b in &blocks {
            if b.unit == 0 {
                return Err(Error::Parse("unit coordinates must be at least 1".into()));
            }
            if b.mult == Multiplicity::Finite(0) {
                return Err(Error::Parse("finite multiplicities must be at least 1".into()));
            }
        }
        Ok(Self { blocks })
    }

    /// One coordinate per unit value.
    pub fn units(units: &[u64]) -> Result<Self, Error> {
        Self::new(
            units
                .iter()
                .map(|&unit| LuBlock {
                    unit,
                    mult: Multiplicity::Finite(1),
                })
                .collect(),
        )
    }

    pub fn blocks(&self) -> &[LuBlock] {
        &self.blocks
    }

    pub fn block(&self, b: usize) -> &LuBlock {
        &self.blocks[b]
    }

    pub fn contains_coord(&self, c: Coord) -> bool {
        c.block < self.blocks.len() && self.blocks[c.block].mult.contains(c.index)
    }

    pub fn index_set_finite(&self) -> bool {
        self.blocks.iter().all(|b| b.mult.is_finite())
    }

    pub fn coords(&self) -> Option<Vec<Coord>> {
        self.gamma().coords()
    }

    /// `Γ`: block `⟨ℤ, u⟩` becomes `Ł_{u+1}`.
    pub fn gamma(&self) -> Signature {
        Signature::new(
            self.blocks
                .iter()
                .map(|b| Block::new(FactorKind::FiniteChain(b.unit + 1), b.mult))
                .collect(),
        )
        .expect("units are at least 1")
    }
}

/// `Φ`: block `Ł_n` becomes `⟨ℤ, n−1⟩`.
pub fn phi(sig: &Signature) -> Result<LuSignature, Error> {
    LuSignature::new(
        sig.blocks()
            .iter()
            .map(|b| match b.kind {
                FactorKind::FiniteChain(n) => Ok(LuBlock {
                    unit: n - 1,
                    mult: b.mult,
                }),
                FactorKind::UnitInterval => Err(Error::UnitIntervalNotRepresentable),
            })
            .collect::<Result<_, _>>()?,
    )
}

pub fn gamma(sig: &LuSignature) -> Signature {
    sig.gamma()
}

impl fmt::Display for LuSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, " × ")?;
            }
            match b.mult {
                Multiplicity::Finite(1) => write!(f, "⟨ℤ,{}⟩", b.unit)?,
                Multiplicity::Finite(m) => write!(f, "⟨ℤ,{}⟩^{m}", b.unit)?,
                Multiplicity::CountablyInfinite => write!(f, "⟨ℤ,{}⟩^ω", b.unit)?,
            }
        }
        Ok(())
    }
}

fn default_mult() -> MultRepr {
    MultRepr::Count(1)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LuBlockRepr {
    unit: u64,
    #[serde(default = "default_mult")]
    mult: MultRepr,
}

/// `{"blocks":[{"unit":2,"mult":"inf"}]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LuSignatureRepr {
    blocks: Vec<LuBlockRepr>,
}

impl Serialize for LuSignature {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LuSignatureRepr {
            blocks: self
                .blocks
                .iter()
                .map(|b| LuBlockRepr {
                    unit: b.unit,
                    mult: MultRepr::from_mult(b.mult),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LuSignature {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = LuSignatureRepr::deserialize(d)?;
        let blocks = repr
            .blocks
            .into_iter()
            .map(|b| {
                Ok(LuBlock {
                    unit: b.unit,
                    mult: b.mult.to_mult()?,
                })
            })
            .collect::<Result<Vec<_>, String>>()
            .map_err(D::Error::custom)?;
        LuSignature::new(blocks).map_err(D::Error::custom)
    }
}

/// A finitely described element of `ℤ^X`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LuElement {
    sig: Arc<LuSignature>,
    data: Coords<i64>,
}

fn overflow() -> Error {
    Error::ValueOutOfRange("integer overflow".into())
}

impl LuElement {
    pub fn constant(sig: &Arc<LuSignature>, v: i64) -> Self {
        Self {
            sig: sig.clone(),
            data: Coords::constant(sig.blocks.iter().map(|b| b.mult), v),
        }
    }

    pub fn zero(sig: &Arc<LuSignature>) -> Self {
        Self::constant(sig, 0)
    }

    /// The strong unit `u`.
    pub fn unit(sig: &Arc<LuSignature>) -> Self {
        let blocks = sig
            .blocks
            .iter()
            .map(|b| BlockData::constant(b.mult, b.unit as i64))
            .collect();
        Self {
            sig: sig.clone(),
            data: Coords::from_blocks(blocks),
        }
    }

    /// Values in coordinate order, for finite index sets.
    pub fn from_values(sig: &Arc<LuSignature>, values: &[i64]) -> Result<Self, Error> {
        let coords = sig.coords().ok_or(Error::InfiniteCarrier)?;
        if coords.len() != values.len() {
            return Err(Error::Parse(format!(
                "expected {} values, got {}",
                coords.len(),
                values.len()
            )));
        }
        Ok(coords
            .into_iter()
            .zip(values)
            .fold(Self::zero(sig), |acc, (c, &v)| Self {
                data: acc.data.with(c, v),
                ..acc
            }))
    }

    pub fn sig(&self) -> &Arc<LuSignature> {
        &self.sig
    }

    pub fn data(&self) -> &Coords<i64> {
        &self.data
    }

    pub fn get(&self, c: Coord) -> i64 {
        self.data.get(c)
    }

    pub fn with(&self, c: Coord, v: i64) -> Result<Self, Error> {
        if !self.sig.contains_coord(c) {
            return Err(Error::Parse(format!("coordinate {c} is outside {}", self.sig)));
        }
        Ok(Self {
            sig: self.sig.clone(),
            data: self.data.with(c, v),
        })
    }

    fn zip(&self, other: &Self, f: impl Fn(i64, i64) -> Option<i64>) -> Result<Self, Error> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch);
        }
        let z = self.data.zip_with(&other.data, |_, a, b| f(a, b))?;
        if !z.all(|_, v| v.is_some()) {
            return Err(overflow());
        }
        Ok(Self {
            sig: self.sig.clone(),
            data: z.map(|_, v| v.unwrap()),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        self.zip(other, i64::checked_add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.zip(other, i64::checked_sub)
    }

    pub fn neg(&self) -> Result<Self, Error> {
        Self::zero(&self.sig).sub(self)
    }

    pub fn join(&self, other: &Self) -> Result<Self, Error> {
        self.zip(other, |a, b| Some(a.max(b)))
    }

    pub fn meet(&self, other: &Self) -> Result<Self, Error> {
        self.zip(other, |a, b| Some(a.min(b)))
    }

    pub fn leq(&self, other: &Self) -> Result<bool, Error> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch);
        }
        self.data.all2(&other.data, |a, b| a <= b)
    }

    /// `a⁺ = a ∨ 0`.
    pub fn pos_part(&self) -> Self {
        self.join(&Self::zero(&self.sig)).unwrap()
    }

    /// `a⁻ = −a ∨ 0`.
    pub fn neg_part(&self) -> Result<Self, Error> {
        Ok(self.neg()?.join(&Self::zero(&self.sig)).unwrap())
    }

    /// `|a| = a⁺ + a⁻`.
    pub fn abs(&self) -> Result<Self, Error> {
        self.pos_part().add(&self.neg_part()?)
    }

    /// Least `N ≥ 1` with `|g| ≤ N·u`.
    pub fn unit_multiple(&self) -> Result<u64, Error> {
        let abs = self.abs()?;
        let mut n = 1u64;
        for (b, data) in abs.data.blocks().iter().enumerate() {
            let u = self.sig.blocks[b].unit;
            for v in data.values() {
                n = n.max((v as u64).div_ceil(u));
            }
        }
        Ok(n)
    }

    /// The element of `Γ(G)` named by `0 ≤ g ≤ u`: coordinate `j ↦ j/u`.
    pub fn to_gamma(&self) -> Result<Element, Error> {
        let sig = Arc::new(self.sig.gamma());
        if !self.data.all(|b, v| (0..=self.sig.blocks[b].unit as i64).contains(&v)) {
            return Err(Error::ValueOutOfRange(format!("{self} is not in [0,u]")));
        }
        let data = self
            .data
            .map(|b, v| ChainValue::new(v as u64, self.sig.blocks[b].unit).unwrap());
        Element::from_coords(&sig, data)
    }

    /// Inverse of [`to_gamma`](Self::to_gamma).
    pub fn from_gamma(sig: &Arc<LuSignature>, x: &Element) -> Result<Self, Error> {
        if **x.sig() != sig.gamma() {
            return Err(Error::SignatureMismatch);
        }
        let data = x.data().map(|b, v| {
            let u = sig.blocks[b].unit;
            (v.num() * (u / v.den())) as i64
        });
        Ok(Self {
            sig: sig.clone(),
            data,
        })
    }

    /// `x ⊕ y = (x + y) ∧ u` on `[0,u]`.
    pub fn interval_oplus(&self, other: &Self) -> Result<Self, Error> {
        self.add(other)?.meet(&Self::unit(&self.sig))
    }

    /// `¬x = u − x` on `[0,u]`.
    pub fn interval_neg(&self) -> Result<Self, Error> {
        Self::unit(&self.sig).sub(self)
    }

    /// A random element with values in `[-3u, 3u]`; infinite blocks get up to
    /// three exceptions below index 16.
    pub fn random(sig: &Arc<LuSignature>, rng: &mut impl Rng) -> Self {
        let blocks = sig
            .blocks
            .iter()
            .map(|b| {
                let r = 3 * b.unit as i64;
                match b.mult {
                    Multiplicity::Finite(m) => {
                        BlockData::Dense((0..m).map(|_| rng.gen_range(-r..=r)).collect())
                    }
                    Multiplicity::CountablyInfinite => BlockData::Sparse {
                        default: rng.gen_range(-r..=r),
                        exceptions: (0..rng.gen_range(0..=3))
                            .map(|_| (rng.gen_range(0..16), rng.gen_range(-r..=r)))
                            .collect(),
                    },
                }
            })
            .collect();
        Self {
            sig: sig.clone(),
            data: Coords::from_blocks(blocks),
        }
    }

    pub fn from_json(sig: &Arc<LuSignature>, text: &str) -> Result<Self, Error> {
        let repr: LuElementRepr = serde_json::from_str(text)?;
        if repr.defaults.len() != sig.blocks.len() {
            return Err(Error::Parse(format!(
                "expected {} defaults, got {}",
                sig.blocks.len(),
                repr.defaults.len()
            )));
        }
        let mut x = Self {
            sig: sig.clone(),
            data: Coords::from_blocks(
                sig.blocks
                    .iter()
                    .zip(&repr.defaults)
                    .map(|(b, &d)| BlockData::constant(b.mult, d))
                    .collect(),
            ),
        };
        for (key, v) in repr.exceptions {
            x = x.with(key.parse()?, v)?;
        }
        Ok(x)
    }
}

/// `{"exceptions":{"b.i":v},"defaults":[d0,…]}` with integer values.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LuElementRepr {
    #[serde(default)]
    exceptions: BTreeMap<String, i64>,
    defaults: Vec<i64>,
}

impl Serialize for LuElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut exceptions = BTreeMap::new();
        let mut defaults = Vec::new();
        for (b, data) in self.data.blocks().iter().enumerate() {
            let (d, exc) = data.default_and_exceptions();
            defaults.push(d);
            for (i, v) in exc {
                exceptions.insert(Coord::new(b, i).to_string(), v);
            }
        }
        LuElementRepr {
            exceptions,
            defaults,
        }
        .serialize(s)
    }
}

impl fmt::Display for LuElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sig.coords() {
            Some(coords) => {
                let vals: Vec<String> = coords.iter().map(|&c| self.get(c).to_string()).collect();
                if vals.len() == 1 {
                    write!(f, "{}", vals[0])
                } else {
                    write!(f, "({})", vals.join(", "))
                }
            }
            None => write!(f, "{}", serde_json::to_string(self).unwrap()),
        }
    }
}

/// The MV-operations `x ⊕ y = (x + y) ∧ u`, `¬x = u − x` on `[0,u]`,
/// checked against the axioms and against the operations of `Γ(G)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GammaCheck {
    pub signature: String,
    pub gamma: String,
    pub pairs_checked: u64,
    pub exhaustive: bool,
    pub mv_axioms: bool,
    pub operations_match: bool,
    pub counterexample: Option<String>,
}

impl GammaCheck {
    pub fn holds(&self) -> bool {
        self.mv_axioms && self.operations_match
    }
}

fn mv_axioms_at(x: &LuElement, y: &LuElement, z: &LuElement) -> Result<bool, Error> {
    let zero = LuElement::zero(&x.sig);
    let top = zero.interval_neg()?;
    let ok = x.interval_oplus(y)? == y.interval_oplus(x)?
        && x.interval_oplus(y)?.interval_oplus(z)? == x.interval_oplus(&y.interval_oplus(z)?)?
        && x.interval_oplus(&zero)? == *x
        && x.interval_neg()?.interval_neg()? == *x
        && top.interval_oplus(x)? == top
        && x.interval_neg()?.interval_oplus(y)?.interval_neg()?.interval_oplus(y)?
            == y.interval_neg()?.interval_oplus(x)?.interval_neg()?.interval_oplus(x)?;
    Ok(ok)
}

fn operations_match_at(x: &LuElement, y: &LuElement) -> Result<bool, Error> {
    let (gx, gy) = (x.to_gamma()?, y.to_gamma()?);
    Ok(x.interval_oplus(y)?.to_gamma()? == gx.oplus(&gy)?
        && x.interval_neg()?.to_gamma()? == gx.neg())
}

/// Exhaustive over all pairs when they fit the pair budget, sampled
/// otherwise.
pub fn verify_gamma(sig: &Arc<LuSignature>, cfg: &Config) -> Result<GammaCheck, Error> {
    let gsig = Arc::new(sig.gamma());
    let listed = crate::element::enumerate(&gsig, cfg.enumeration_bound)
        .ok()
        .filter(|els| (els.len() as u64).saturating_mul(els.len() as u64) <= cfg.pair_budget);
    let mut pairs: Vec<(LuElement, LuElement, LuElement)> = Vec::new();
    let exhaustive = listed.is_some();
    match listed {
        Some(els) => {
            let ints: Vec<LuElement> = els
                .iter()
                .map(|e| LuElement::from_gamma(sig, e))
                .collect::<Result<_, _>>()?;
            let n = ints.len();
            for i in 0..n {
                for j in 0..n {
                    pairs.push((ints[i].clone(), ints[j].clone(), ints[(i + j) % n].clone()));
                }
            }
        }
        None => {
            let mut rng = cfg.rng();
            let (zero, unit) = (LuElement::zero(sig), LuElement::unit(sig));
            let clamp = |rng: &mut rand_chacha::ChaCha8Rng| {
                LuElement::random(sig, rng).join(&zero).unwrap().meet(&unit).unwrap()
            };
            for _ in 0..cfg.samples {
                pairs.push((clamp(&mut rng), clamp(&mut rng), clamp(&mut rng)));
            }
        }
    }
    let mut axioms = true;
    let mut matches = true;
    let mut counterexample = None;
    for (x, y, z) in &pairs {
        let a = mv_axioms_at(x, y, z)?;
        let m = operations_match_at(x, y)?;
        if (!a || !m) && counterexample.is_none() {
            counterexample = Some(format!("x = {x}, y = {y}, z = {z}"));
        }
        axioms &= a;
        matches &= m;
    }
    Ok(GammaCheck {
        signature: sig.to_string(),
        gamma: gsig.to_string(),
        pairs_checked: pairs.len() as u64,
        exhaustive,
        mv_axioms: axioms,
        operations_match: matches,
        counterexample,
    })
}

/// `g` is ℓu-compact when `|g| ∧ u` is compact in `Γ(G)`.
pub fn is_lu_compact(g: &LuElement) -> Result<CompactnessVerdict, Error> {
    let truncated = g.abs()?.meet(&LuElement::unit(&g.sig))?;
    Ok(is_compact(&truncated.to_gamma()?))
}

/// Compact approximation of one `h ≥ 0` by its truncations to the first
/// `N` indices of every infinite block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ApproximationCheck {
    pub element: String,
    pub approximants: usize,
    pub approximants_compact: bool,
    pub approximants_below: bool,
    pub increasing: bool,
    pub join_matches: bool,
}

impl ApproximationCheck {
    pub fn holds(&self) -> bool {
        self.approximants_compact && self.approximants_below && self.increasing && self.join_matches
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AlgebraicReport {
    pub signature: String,
    pub algebraic: bool,
    pub samples: usize,
    /// For each sample `g`: `g = g⁺ − g⁻`, then the check on `g⁺` and `g⁻`.
    pub decomposition_holds: bool,
    pub positive_parts: Vec<ApproximationCheck>,
    pub negative_parts: Vec<ApproximationCheck>,
}

impl AlgebraicReport {
    pub fn verified(&self) -> bool {
        self.decomposition_holds
            && self.positive_parts.iter().all(ApproximationCheck::holds)
            && self.negative_parts.iter().all(ApproximationCheck::holds)
    }
}

/// `h` with every infinite block cut to indices `< n` (zero beyond).
fn truncate(h: &LuElement, n: u64) -> LuElement {
    let blocks = h
        .data
        .blocks()
        .iter()
        .map(|d| match d {
            BlockData::Dense(v) => BlockData::Dense(v.clone()),
            BlockData::Sparse { .. } => BlockData::Sparse {
                default: 0,
                exceptions: (0..n).map(|i| (i, d.get(i))).collect(),
            },
        })
        .collect();
    LuElement {
        sig: h.sig.clone(),
        data: Coords::from_blocks(blocks),
    }
}

pub fn check_approximation(h: &LuElement, prefix: usize) -> Result<ApproximationCheck, Error> {
    // Enough terms to pass every exception and one generic index.
    let needed = h
        .data
        .probe_coords()
        .iter()
        .map(|c| c.index + 1)
        .max()
        .unwrap_or(1);
    let count = (prefix as u64).max(needed);
    let terms: Vec<LuElement> = (1..=count).map(|n| truncate(h, n)).collect();
    let mut compact = true;
    let mut below = true;
    let mut increasing = true;
    for (i, t) in terms.iter().enumerate() {
        compact &= is_lu_compact(t)?.compact;
        below &= t.leq(h)?;
        if i > 0 {
            increasing &= terms[i - 1].leq(t)?;
        }
    }
    let mut sup = LuElement::zero(&h.sig);
    for t in &terms {
        sup = sup.join(t)?;
    }
    let join_matches = h.data.probe_coords().iter().all(|&c| sup.get(c) == h.get(c));
    Ok(ApproximationCheck {
        element: h.to_string(),
        approximants: terms.len(),
        approximants_compact: compact,
        approximants_below: below,
        increasing,
        join_matches,
    })
}

/// Every `⟨ℤ^X, u⟩` is algebraic; the report checks
/// `g = ⋁{a compact : a ≤ g}` on sampled `g`, through `g⁺` and `g⁻`.
pub fn is_algebraic_lu_frame(sig: &Arc<LuSignature>, cfg: &Config) -> Result<AlgebraicReport, Error> {
    let mut rng = cfg.rng();
    let mut samples = vec![LuElement::zero(sig), LuElement::unit(sig)];
    samples.extend((0..cfg.samples.min(64)).map(|_| LuElement::random(sig, &mut rng)));
    let mut decomposition = true;
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for g in &samples {
        let (p, n) = (g.pos_part(), g.neg_part()?);
        decomposition &= p.sub(&n)? == *g;
        pos.push(check_approximation(&p, cfg.witness_prefix)?);
        neg.push(check_approximation(&n, cfg.witness_prefix)?);
    }
    Ok(AlgebraicReport {
        signature: sig.to_string(),
        algebraic: true,
        samples: samples.len(),
        decomposition_holds: decomposition,
        positive_parts: pos,
        negative_parts: neg,
    })
}

/// `F(g)(y) = s_t · g(σ(y))` for target coordinate `y` in block `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LuHom {
    source: Arc<LuSignature>,
    target: Arc<LuSignature>,
    index_map: IndexMap,
    scales: Vec<u64>,
}

impl LuHom {
    pub fn new(
        source: Arc<LuSignature>,
        target: Arc<LuSignature>,
        index_map: IndexMap,
        scales: Vec<u64>,
    ) -> Result<Self, Error> {
        if scales.len() != target.blocks.len() {
            return Err(Error::InvalidHom("one scale per target block is needed".into()));
        }
        if index_map.blocks.len() != target.blocks.len() {
            return Err(Error::InvalidHom("one rule per target block is needed".into()));
        }
        for (t, rule) in index_map.blocks.iter().enumerate() {
            let mut sources: Vec<usize> = rule.exceptions.values().map(|c| c.block).collect();
            sources.push(match rule.default {
                DefaultRule::Same(b) => b,
                DefaultRule::Constant(c) => c.block,
            });
            for b in sources {
                let (u1, u2, s) = (source.blocks[b].unit, target.blocks[t].unit, scales[t]);
                if s.checked_mul(u1) != Some(u2) {
                    return Err(Error::NotUnitPreserving(format!(
                        "{s}·{u1} ≠ {u2} from source block {b} to target block {t}"
                    )));
                }
            }
        }
        ProductHom::new(
            Arc::new(source.gamma()),
            Arc::new(target.gamma()),
            index_map.clone(),
        )?;
        Ok(Self {
            source,
            target,
            index_map,
            scales,
        })
    }

    pub fn apply(&self, g: &LuElement) -> Result<LuElement, Error> {
        if *g.sig != *self.source {
            return Err(Error::SignatureMismatch);
        }
        let blocks = self
            .target
            .blocks
            .iter()
            .zip(&self.index_map.blocks)
            .zip(&self.scales)
            .enumerate()
            .map(|(t, ((tb, rule), &s))| {
                let read = |i: u64| -> Result<i64, Error> {
                    let c = self.index_map.source_of(Coord::new(t, i));
                    g.get(c).checked_mul(s as i64).ok_or_else(overflow)
                };
                match tb.mult {
                    Multiplicity::Finite(m) => Ok(BlockData::Dense(
                        (0..m).map(read).collect::<Result<Vec<_>, _>>()?,
                    )),
                    Multiplicity::CountablyInfinite => {
                        let (default, mut exceptions) = match rule.default {
                            DefaultRule::Same(b) => match g.data.block(b) {
                                BlockData::Sparse {
                                    default,
                                    exceptions,
                                } => (*default, exceptions.clone()),
                                BlockData::Dense(_) => unreachable!("checked at construction"),
                            },
                            DefaultRule::Constant(c) => (g.get(c), BTreeMap::new()),
                        };
                        for (&i, &c) in &rule.exceptions {
                            exceptions.insert(i, g.get(c));
                        }
                        let scale = |v: i64| v.checked_mul(s as i64).ok_or_else(overflow);
                        Ok(BlockData::Sparse {
                            default: scale(default)?,
                            exceptions: exceptions
                                .into_iter()
                                .map(|(i, v)| Ok((i, scale(v)?)))
                                .collect::<Result<_, Error>>()?,
                        })
                    }
                }
            })
            .collect::<Result<Vec<_>, Error>>()?;
        Ok(LuElement {
            sig: self.target.clone(),
            data: Coords::from_blocks(blocks),
        })
    }
}

/// `Γ(F)`: the restriction of `F` to `[0,u₁] → [0,u₂]`, as a product
/// homomorphism. Values `j/u₁` go to `s·j/u₂ = j/u₁`.
pub fn gamma_on_morphisms(f: &LuHom) -> Result<ProductHom, Error> {
    ProductHom::new(
        Arc::new(f.source.gamma()),
        Arc::new(f.target.gamma()),
        f.index_map.clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::diagonal_example;

    fn lu(units: &[u64]) -> Arc<LuSignature> {
        Arc::new(LuSignature::units(units).unwrap())
    }

    fn omega(unit: u64) -> Arc<LuSignature> {
        Arc::new(
            LuSignature::new(vec![LuBlock {
                unit,
                mult: Multiplicity::CountablyInfinite,
            }])
            .unwrap(),
        )
    }

    #[test]
    fn parts_and_absolute_value() {
        let z2 = lu(&[2]);
        let a = LuElement::from_values(&z2, &[-3]).unwrap();
        assert_eq!(a.pos_part().get(Coord::new(0, 0)), 0);
        assert_eq!(a.neg_part().unwrap().get(Coord::new(0, 0)), 3);
        assert_eq!(a.abs().unwrap().get(Coord::new(0, 0)), 3);
        assert_eq!(a.unit_multiple().unwrap(), 2);
        let sig = lu(&[1, 1]);
        let b = LuElement::from_values(&sig, &[2, -1]).unwrap();
        assert_eq!(b.abs().unwrap(), LuElement::from_values(&sig, &[2, 1]).unwrap());
        assert_eq!(b.abs().unwrap(), b.join(&b.neg().unwrap()).unwrap());
    }

    #[test]
    fn gamma_and_phi() {
        assert_eq!(gamma(&lu(&[2])), Signature::chains(&[3]).unwrap());
        assert_eq!(gamma(&lu(&[1])), Signature::chains(&[2]).unwrap());
        assert_eq!(gamma(&lu(&[2, 3])), Signature::chains(&[3, 4]).unwrap());
        let sig = Signature::chains(&[3, 4]).unwrap();
        assert_eq!(gamma(&phi(&sig).unwrap()), sig);
        let two_omega =
            Signature::power(FactorKind::FiniteChain(2), Multiplicity::CountablyInfinite).unwrap();
        assert_eq!(phi(&two_omega).unwrap(), *omega(1));
        let unit = Signature::power(FactorKind::UnitInterval, Multiplicity::Finite(1)).unwrap();
        assert_eq!(phi(&unit), Err(Error::UnitIntervalNotRepresentable));
    }

    #[test]
    fn interval_operations() {
        let z2 = lu(&[2]);
        let one = LuElement::from_values(&z2, &[1]).unwrap();
        let two = LuElement::from_values(&z2, &[2]).unwrap();
        assert_eq!(one.interval_oplus(&two).unwrap(), two);
        assert_eq!(one.interval_neg().unwrap(), one);
        let x = one.to_gamma().unwrap();
        assert_eq!(x.to_string(), "1/2");
        assert_eq!(LuElement::from_gamma(&z2, &x).unwrap(), one);
        assert!(LuElement::from_values(&z2, &[3]).unwrap().to_gamma().is_err());
    }

    #[test]
    fn gamma_operations() {
        let cfg = Config::default();
        for sig in [lu(&[2]), lu(&[1]), lu(&[2, 3]), omega(3)] {
            let rep = verify_gamma(&sig, &cfg).unwrap();
            assert!(rep.holds(), "{rep:?}");
        }
        assert!(verify_gamma(&lu(&[2]), &cfg).unwrap().exhaustive);
        assert!(!verify_gamma(&omega(3), &cfg).unwrap().exhaustive);
    }

    #[test]
    fn lu_compactness() {
        let sig = omega(2);
        let g = LuElement::zero(&sig).with(Coord::new(0, 0), 5).unwrap();
        assert!(is_lu_compact(&g).unwrap().compact);
        assert!(is_lu_compact(&LuElement::zero(&sig)).unwrap().compact);
        let v = is_lu_compact(&LuElement::constant(&sig, 1)).unwrap();
        assert!(!v.compact);
        let w = v.witness.unwrap();
        let alpha = LuElement::constant(&sig, 1).to_gamma().unwrap();
        w.verify(&alpha, 64).unwrap();
    }

    #[test]
    fn algebraic_report() {
        let cfg = Config::default();
        for sig in [lu(&[2]), omega(2), lu(&[1, 3])] {
            let rep = is_algebraic_lu_frame(&sig, &cfg).unwrap();
            assert!(rep.algebraic && rep.verified(), "{rep:?}");
        }
    }

    #[test]
    fn morphisms_through_gamma() {
        let z2 = lu(&[2]);
        let id = LuHom::new(z2.clone(), z2.clone(), IndexMap::identity(1), vec![1]).unwrap();
        assert_eq!(
            gamma_on_morphisms(&id).unwrap(),
            ProductHom::identity(Arc::new(Signature::chains(&[3]).unwrap()))
        );
        let diag = LuHom::new(
            z2.clone(),
            omega(2),
            IndexMap::constant(1, Coord::new(0, 0)),
            vec![1],
        )
        .unwrap();
        assert_eq!(gamma_on_morphisms(&diag).unwrap(), diagonal_example());
        let z4 = lu(&[4]);
        let double = LuHom::new(z2.clone(), z4.clone(), IndexMap::identity(1), vec![2]).unwrap();
        let phi_hom = gamma_on_morphisms(&double).unwrap();
        assert_eq!(**phi_hom.target(), Signature::chains(&[5]).unwrap());
        let one = LuElement::from_values(&z2, &[1]).unwrap();
        let image = double.apply(&one).unwrap();
        assert_eq!(image, LuElement::from_values(&z4, &[2]).unwrap());
        assert_eq!(image.to_gamma().unwrap().to_string(), "1/2");
        assert_eq!(phi_hom.apply(&one.to_gamma().unwrap()).unwrap().to_string(), "1/2");
        assert!(matches!(
            LuHom::new(z2, z4, IndexMap::identity(1), vec![1]),
            Err(Error::NotUnitPreserving(_))
        ));
    }

    #[test]
    fn json_forms() {
        let sig: LuSignature = serde_json::from_str(r#"{"blocks":[{"unit":2,"mult":"inf"}]}"#).unwrap();
        assert_eq!(sig, *omega(2));
        assert_eq!(serde_json::to_string(&sig).unwrap(), r#"{"blocks":[{"unit":2,"mult":"inf"}]}"#);
        assert!(serde_json::from_str::<LuSignature>(r#"{"blocks":[{"unit":0}]}"#).is_err());
        let sig = Arc::new(sig);
        let g = LuElement::from_json(&sig, r#"{"exceptions":{"0.0":5},"defaults":[0]}"#).unwrap();
        assert_eq!(g.get(Coord::new(0, 0)), 5);
        let back = LuElement::from_json(&sig, &serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }
}
