//! Closure operators and nuclei on product MV-frames.
//!
//! Built-in nuclei act coordinatewise through one map per factor, so their
//! closure, meet, density and MV-type properties hold on the product exactly
//! when they hold on every factor; those are decided factor by factor
//! (exhaustively on chains, on a rational grid plus samples on `[0,1]`).
//! Table nuclei are checked element by element.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config::Config;
use crate::element::{enumerate, Element, ElementRepr};
use crate::error::Error;
use crate::frame::{classify, is_compact, pseudocomplement};
use crate::morphism::{BlockRule, DefaultRule, IndexMap, ProductHom};
use crate::signature::{Block, Coord, Multiplicity, Signature};
use crate::value::{ChainValue, FactorKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NucleusKind {
    Identity,
    /// The constant map to `1`.
    Top,
    DoublePseudocomplement,
    /// `x ↦ max(x, t₀)`.
    Threshold(ChainValue),
    /// On `∏_{n≥2} Ł_n`: identity on even `n`, `1` on odd `n`.
    Parity,
    /// `x ↦ ⌈x⌉`.
    Ceiling,
    /// On `Ł_{2n+1}`: `(2k-1)/2n, k/n ↦ k/n`.
    Halving,
    /// On `Ł_n`: `1 ↦ 1`, anything else `↦ (n-2)/(n-1)`.
    Radical,
    /// An explicit table on a finite algebra.
    Table(HashMap<Element, Element>),
}

impl NucleusKind {
    pub fn name(&self) -> &'static str {
        match self {
            NucleusKind::Identity => "identity",
            NucleusKind::Top => "top",
            NucleusKind::DoublePseudocomplement => "double-pseudocomplement",
            NucleusKind::Threshold(_) => "threshold",
            NucleusKind::Parity => "parity",
            NucleusKind::Ceiling => "ceiling",
            NucleusKind::Halving => "halving",
            NucleusKind::Radical => "radical",
            NucleusKind::Table(_) => "table",
        }
    }

    /// A built-in kind by name; `threshold` needs `t0`.
    pub fn from_name(name: &str, t0: Option<ChainValue>) -> Result<Self, Error> {
        let kind = match name {
            "identity" => NucleusKind::Identity,
            "top" | "constant" => NucleusKind::Top,
            "double-pseudocomplement" | "dpc" => NucleusKind::DoublePseudocomplement,
            "threshold" => NucleusKind::Threshold(
                t0.ok_or_else(|| Error::BadParameter("threshold needs t0".into()))?,
            ),
            "parity" => NucleusKind::Parity,
            "ceiling" => NucleusKind::Ceiling,
            "halving" => NucleusKind::Halving,
            "radical" => NucleusKind::Radical,
            other => return Err(Error::Parse(format!("unknown nucleus kind {other:?}"))),
        };
        if t0.is_some() && !matches!(kind, NucleusKind::Threshold(_)) {
            return Err(Error::BadParameter(format!("{name} takes no t0")));
        }
        Ok(kind)
    }

    fn is_coordinatewise(&self) -> bool {
        !matches!(self, NucleusKind::Table(_))
    }

    /// The map on a single factor value, for every kind except tables.
    pub fn coordinate_map(&self, kind: FactorKind, v: ChainValue) -> Option<ChainValue> {
        self.is_coordinatewise().then(|| self.factor_map(kind, v))
    }

    /// The per-factor map of a coordinatewise kind.
    fn factor_map(&self, kind: FactorKind, v: ChainValue) -> ChainValue {
        match (self, kind) {
            (NucleusKind::Identity, _) => v,
            (NucleusKind::Top, _) => ChainValue::ONE,
            (NucleusKind::DoublePseudocomplement | NucleusKind::Ceiling, _) => {
                if v.is_zero() {
                    ChainValue::ZERO
                } else {
                    ChainValue::ONE
                }
            }
            (NucleusKind::Threshold(t), _) => v.max(*t),
            (NucleusKind::Parity, FactorKind::FiniteChain(n)) => {
                if n % 2 == 0 {
                    v
                } else {
                    ChainValue::ONE
                }
            }
            (NucleusKind::Halving, FactorKind::FiniteChain(n)) => v.round_up_to_grid((n - 1) / 2),
            (NucleusKind::Radical, FactorKind::FiniteChain(n)) => {
                if v.is_one() {
                    v
                } else {
                    ChainValue::new(n - 2, n - 1).unwrap()
                }
            }
            (NucleusKind::Table(_), _) => unreachable!("tables are not coordinatewise"),
            _ => unreachable!("signature checked at construction"),
        }
    }
}

impl fmt::Display for NucleusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NucleusKind::Threshold(t) => write!(f, "threshold({t})"),
            other => f.write_str(other.name()),
        }
    }
}

/// A named map on the algebra of a signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NucleusSpec {
    name: String,
    sig: Arc<Signature>,
    kind: NucleusKind,
}

fn require_chains(sig: &Signature, what: &str) -> Result<(), Error> {
    if sig.has_unit_interval() {
        return Err(Error::BadSignatureForNucleus(format!(
            "{what} needs finite-chain factors, got {sig}"
        )));
    }
    Ok(())
}

impl NucleusSpec {
    pub fn builtin(kind: NucleusKind, sig: &Arc<Signature>) -> Result<Self, Error> {
        match &kind {
            NucleusKind::Threshold(t) => {
                if let Some(b) = sig.blocks().iter().find(|b| !b.kind.contains(*t)) {
                    return Err(Error::BadParameter(format!("threshold {t} is not in {}", b.kind)));
                }
            }
            NucleusKind::Halving => {
                require_chains(sig, "halving")?;
                if let Some(b) = sig.blocks().iter().find(|b| {
                    matches!(b.kind, FactorKind::FiniteChain(n) if n % 2 == 0)
                }) {
                    return Err(Error::BadSignatureForNucleus(format!(
                        "halving needs blocks of the form Ł_(2n+1), got {}",
                        b.kind
                    )));
                }
            }
            NucleusKind::Radical => require_chains(sig, "radical")?,
            NucleusKind::Parity => check_parity_shape(sig)?,
            NucleusKind::Table(_) => {
                return Err(Error::BadParameter("use NucleusSpec::table".into()))
            }
            _ => {}
        }
        Ok(Self {
            name: kind.to_string(),
            sig: sig.clone(),
            kind,
        })
    }

    /// A map given by its full graph on a finite algebra.
    pub fn table(
        sig: &Arc<Signature>,
        entries: impl IntoIterator<Item = (Element, Element)>,
        bound: u64,
    ) -> Result<Self, Error> {
        let all = enumerate(sig, bound)?;
        let mut table = HashMap::new();
        for (x, y) in entries {
            if **x.sig() != **sig || **y.sig() != **sig {
                return Err(Error::SignatureMismatch);
            }
            if table.insert(x.clone(), y).is_some() {
                return Err(Error::BadParameter(format!("{x} is listed twice")));
            }
        }
        if let Some(missing) = all.iter().find(|x| !table.contains_key(*x)) {
            return Err(Error::BadParameter(format!("table has no entry for {missing}")));
        }
        Ok(Self {
            name: "table".into(),
            sig: sig.clone(),
            kind: NucleusKind::Table(table),
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sig(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn kind(&self) -> &NucleusKind {
        &self.kind
    }

    pub fn apply(&self, x: &Element) -> Result<Element, Error> {
        if **x.sig() != *self.sig {
            return Err(Error::SignatureMismatch);
        }
        match &self.kind {
            NucleusKind::DoublePseudocomplement => Ok(pseudocomplement(&pseudocomplement(x))),
            NucleusKind::Table(t) => Ok(t[x].clone()),
            k => x.map_values(|kind, v| k.factor_map(kind, v)),
        }
    }

    fn j(&self, x: &Element) -> Element {
        self.apply(x).expect("maps stay inside their algebra")
    }
}

/// `Ł_2, Ł_3, …, Ł_K` with multiplicity one, then optional infinite chain
/// blocks standing in for the tail.
fn check_parity_shape(sig: &Signature) -> Result<(), Error> {
    require_chains(sig, "parity")?;
    let mut expected = 2;
    let mut in_tail = false;
    for b in sig.blocks() {
        let FactorKind::FiniteChain(n) = b.kind else { unreachable!() };
        match b.mult {
            Multiplicity::Finite(1) if !in_tail && n == expected => expected += 1,
            Multiplicity::CountablyInfinite => in_tail = true,
            _ => {
                return Err(Error::BadSignatureForNucleus(format!(
                    "parity needs Ł2 × Ł3 × … × ŁK followed by infinite tail blocks, got {sig}"
                )))
            }
        }
    }
    Ok(())
}

/// `true`, `false`, or an explanation of why inductivity was not decided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inductive {
    Yes,
    No,
    Unknown(String),
}

impl Inductive {
    fn from_bool(b: bool) -> Self {
        if b {
            Inductive::Yes
        } else {
            Inductive::No
        }
    }

    pub fn is_yes(&self) -> bool {
        *self == Inductive::Yes
    }
}

impl Serialize for Inductive {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct UnknownRepr<'a> {
            unknown: &'a str,
        }
        match self {
            Inductive::Yes => s.serialize_bool(true),
            Inductive::No => s.serialize_bool(false),
            Inductive::Unknown(r) => UnknownRepr { unknown: r }.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Inductive {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Bool(bool),
            Unknown { unknown: String },
        }
        Ok(match Repr::deserialize(d)? {
            Repr::Bool(b) => Inductive::from_bool(b),
            Repr::Unknown { unknown } => Inductive::Unknown(unknown),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "fixed", rename_all = "kebab-case")]
pub enum FixedValues {
    Values { values: Vec<ChainValue> },
    AtLeast { min: ChainValue },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockFixedSet {
    pub block: usize,
    pub factor: String,
    #[serde(flatten)]
    pub fixed: FixedValues,
}

/// The fixed-point set `jA`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NuclearSet {
    pub description: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub blocks: Option<Vec<BlockFixedSet>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elements: Option<Vec<ElementRepr>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMethod {
    Factorwise,
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NucleusClassification {
    pub is_nucleus: bool,
    pub is_dense: bool,
    pub is_inductive: Inductive,
    #[serde(rename = "isMVType")]
    pub is_mv_type: bool,
    /// Extensive, monotone and idempotent.
    pub is_closure: bool,
    pub nuclear: NuclearSet,
    pub method: CheckMethod,
    pub failures: Vec<String>,
}

pub fn classify_nucleus(j: &NucleusSpec, cfg: &Config) -> NucleusClassification {
    if j.kind.is_coordinatewise() {
        classify_factorwise(j, cfg)
    } else {
        classify_elementwise(j, cfg)
    }
}

/// Points of a factor at which a per-factor map is tested: the whole chain,
/// or for `[0,1]` every fraction with denominator at most 12, the threshold
/// and its negation, and `samples` random fractions.
fn factor_test_values(
    j: &NucleusKind,
    kind: FactorKind,
    cfg: &Config,
    rng: &mut impl Rng,
) -> (Vec<ChainValue>, usize) {
    if let Some(carrier) = kind.carrier() {
        let n = carrier.len();
        return (carrier, n);
    }
    let mut vals: Vec<ChainValue> = (1..=12u64)
        .flat_map(|d| (0..=d).map(move |k| ChainValue::new(k, d).unwrap()))
        .collect();
    if let NucleusKind::Threshold(t) = j {
        vals.extend([*t, t.neg()]);
    }
    vals.sort();
    vals.dedup();
    let grid = vals.len();
    for _ in 0..cfg.samples {
        let d = rng.gen_range(1..=1000u64);
        vals.push(ChainValue::new(rng.gen_range(0..=d), d).unwrap());
    }
    (vals, grid)
}

struct FactorReport {
    extensive: bool,
    monotone: bool,
    idempotent: bool,
    meets: bool,
    dense: bool,
    inductive: bool,
    mv_closed: bool,
    fixed: FixedValues,
    failures: Vec<String>,
}

fn check_factor(j: &NucleusKind, kind: FactorKind, cfg: &Config, rng: &mut impl Rng) -> FactorReport {
    let g = |v: ChainValue| j.factor_map(kind, v);
    let (mut vals, grid) = factor_test_values(j, kind, cfg, rng);
    let pair_vals: Vec<ChainValue> = vals[..grid].to_vec();
    vals.sort();
    vals.dedup();
    let mut failures = Vec::new();
    let mut note = |ok: bool, msg: String| {
        if !ok {
            failures.push(format!("{kind}: {msg}"));
        }
        ok
    };
    let bad_ext = vals.iter().find(|&&v| g(v) < v);
    let extensive = note(bad_ext.is_none(), format!("not extensive at {bad_ext:?}"));
    let bad_mono = vals.windows(2).find(|w| g(w[0]) > g(w[1]));
    let monotone = note(bad_mono.is_none(), format!("not monotone at {bad_mono:?}"));
    let bad_idem = vals.iter().find(|&&v| g(g(v)) != g(v));
    let idempotent = note(bad_idem.is_none(), format!("not idempotent at {bad_idem:?}"));
    let bad_meet = pair_vals
        .iter()
        .flat_map(|&a| pair_vals.iter().map(move |&b| (a, b)))
        .find(|&(a, b)| g(a.min(b)) != g(a).min(g(b)));
    let meets = note(bad_meet.is_none(), format!("meet law fails at {bad_meet:?}"));
    let dense = g(ChainValue::ZERO).is_zero();
    // The join of j over compacts below x is, at a chain coordinate, the
    // largest g(w) with w ≤ x there; at a [0,1] coordinate compacts vanish,
    // so it is g(0).
    let inductive = match kind {
        FactorKind::FiniteChain(_) => {
            let mut best = ChainValue::ZERO;
            vals.iter().all(|&v| {
                best = best.max(g(v));
                best == g(v)
            })
        }
        FactorKind::UnitInterval => vals.iter().all(|&v| g(v) == g(ChainValue::ZERO)),
    };
    let is_fixed = |v: ChainValue| g(v) == v;
    let fixed_pairs: Vec<ChainValue> = pair_vals.iter().copied().filter(|&v| is_fixed(v)).collect();
    let bad_neg = vals.iter().find(|&&v| is_fixed(v) && !is_fixed(v.neg()));
    let bad_oplus = fixed_pairs
        .iter()
        .flat_map(|&a| fixed_pairs.iter().map(move |&b| (a, b)))
        .find(|&(a, b)| !is_fixed(a.oplus(b)));
    let mv_closed = bad_neg.is_none() && bad_oplus.is_none();
    let fixed = match kind {
        FactorKind::FiniteChain(_) => FixedValues::Values {
            values: vals.iter().copied().filter(|&v| is_fixed(v)).collect(),
        },
        FactorKind::UnitInterval => match j {
            NucleusKind::Identity => FixedValues::AtLeast {
                min: ChainValue::ZERO,
            },
            NucleusKind::Threshold(t) => FixedValues::AtLeast { min: *t },
            NucleusKind::Top => FixedValues::Values {
                values: vec![ChainValue::ONE],
            },
            _ => FixedValues::Values {
                values: vec![ChainValue::ZERO, ChainValue::ONE],
            },
        },
    };
    FactorReport {
        extensive,
        monotone,
        idempotent,
        meets,
        dense,
        inductive,
        mv_closed,
        fixed,
        failures,
    }
}

/// Every element whose coordinate `c` (in coordinate order) is drawn from
/// `choices[c]`, first coordinate varying slowest.
fn product_elements(sig: &Arc<Signature>, choices: &[Vec<ChainValue>]) -> Vec<Element> {
    if choices.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let mut digits = vec![0usize; choices.len()];
    let mut out = Vec::new();
    loop {
        let vals: Vec<ChainValue> = digits.iter().zip(choices).map(|(&d, c)| c[d]).collect();
        out.push(Element::from_values(sig, &vals).expect("choices lie in their factors"));
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < choices[pos].len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

fn classify_factorwise(j: &NucleusSpec, cfg: &Config) -> NucleusClassification {
    let mut rng = cfg.rng();
    let mut reports: Vec<(FactorKind, FactorReport)> = Vec::new();
    for b in j.sig.blocks() {
        if !reports.iter().any(|(k, _)| *k == b.kind) {
            let r = check_factor(&j.kind, b.kind, cfg, &mut rng);
            reports.push((b.kind, r));
        }
    }
    let report = |k: FactorKind| &reports.iter().find(|(kk, _)| *kk == k).unwrap().1;
    let all = |f: fn(&FactorReport) -> bool| reports.iter().all(|(_, r)| f(r));
    let is_closure = all(|r| r.extensive && r.monotone && r.idempotent);
    let blocks: Vec<BlockFixedSet> = j
        .sig
        .blocks()
        .iter()
        .enumerate()
        .map(|(i, b)| BlockFixedSet {
            block: i,
            factor: b.kind.to_string(),
            fixed: report(b.kind).fixed.clone(),
        })
        .collect();
    let elements = nuclear_elements_from_blocks(&j.sig, &blocks, cfg.enumeration_bound)
        .map(|els| els.iter().map(ElementRepr::from).collect());
    NucleusClassification {
        is_nucleus: is_closure && all(|r| r.meets),
        is_dense: all(|r| r.dense),
        is_inductive: Inductive::from_bool(all(|r| r.inductive)),
        is_mv_type: all(|r| r.mv_closed),
        is_closure,
        nuclear: NuclearSet {
            description: "product of per-block fixed-point sets".into(),
            blocks: Some(blocks),
            elements,
        },
        method: CheckMethod::Factorwise,
        failures: reports.into_iter().flat_map(|(_, r)| r.failures).collect(),
    }
}

fn nuclear_elements_from_blocks(
    sig: &Arc<Signature>,
    blocks: &[BlockFixedSet],
    bound: u64,
) -> Option<Vec<Element>> {
    let coords = sig.coords()?;
    let mut choices = Vec::with_capacity(coords.len());
    let mut count: u128 = 1;
    for c in coords {
        let FixedValues::Values { values } = &blocks[c.block].fixed else {
            return None;
        };
        count = count.saturating_mul(values.len() as u128);
        if count > bound as u128 {
            return None;
        }
        choices.push(values.clone());
    }
    Some(product_elements(sig, &choices))
}

/// Elements covering `x` in the product order (one coordinate one step up).
fn upper_covers(x: &Element) -> Vec<Element> {
    let sig = x.sig();
    sig.coords()
        .unwrap_or_default()
        .into_iter()
        .filter_map(|c| {
            let FactorKind::FiniteChain(n) = sig.kind_at(c) else { return None };
            let k = x.get(c).chain_index(n)?;
            (k + 1 < n).then(|| x.with(c, ChainValue::new(k + 1, n - 1).unwrap()).unwrap())
        })
        .collect()
}

/// `⋁{j(a) : a ∈ 𝔨(A), a ≤ x}`. Literal on enumerable algebras (every element
/// is compact there); through the per-factor formula for coordinatewise maps
/// otherwise; `None` when neither applies.
pub fn compact_approximation_join(j: &NucleusSpec, x: &Element, cfg: &Config) -> Option<Element> {
    let sig = &j.sig;
    if sig.carrier_size().is_some_and(|s| s <= cfg.enumeration_bound as u128) {
        let coords = sig.coords().unwrap();
        let choices: Vec<Vec<ChainValue>> = coords
            .iter()
            .map(|&c| {
                let carrier = sig.kind_at(c).carrier().unwrap();
                carrier.into_iter().filter(|&w| w <= x.get(c)).collect()
            })
            .collect();
        let below = product_elements(sig, &choices);
        let mut acc = Element::zero(sig);
        for a in &below {
            acc = acc.join(&j.j(a)).unwrap();
        }
        return Some(acc);
    }
    if !j.kind.is_coordinatewise() {
        return None;
    }
    // A compact a ≤ x may agree with x at any finite set of chain
    // coordinates and must vanish at [0,1] coordinates.
    let zero_image = |kind: FactorKind| j.kind.factor_map(kind, ChainValue::ZERO);
    x.map_values(|kind, v| match kind {
        FactorKind::FiniteChain(n) => kind
            .carrier()
            .unwrap()
            .into_iter()
            .take_while(|&w| w <= v)
            .map(|w| j.kind.factor_map(FactorKind::FiniteChain(n), w))
            .max()
            .unwrap(),
        FactorKind::UnitInterval => zero_image(kind),
    })
    .ok()
}

pub fn classify_elementwise(j: &NucleusSpec, cfg: &Config) -> NucleusClassification {
    let sig = &j.sig;
    let mut rng = cfg.rng();
    let mut failures = Vec::new();
    let enumerated = enumerate(sig, cfg.enumeration_bound).ok();
    let exhaustive = enumerated.is_some();
    let elems = enumerated.unwrap_or_else(|| {
        let mut v = vec![Element::zero(sig), Element::one(sig)];
        v.extend((0..cfg.samples).map(|_| Element::random(sig, &mut rng)));
        v
    });
    let images: Vec<Element> = elems.iter().map(|x| j.j(x)).collect();
    let n = elems.len();
    let pairs_exhaustive = exhaustive && (n as u64).saturating_mul(n as u64) <= cfg.pair_budget;
    let pairs: Vec<(usize, usize)> = if pairs_exhaustive {
        (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect()
    } else {
        (0..cfg.samples)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect()
    };
    let mut check = |ok: bool, msg: &dyn Fn() -> String| {
        if !ok {
            failures.push(msg());
        }
        ok
    };

    let bad = (0..n).find(|&i| !elems[i].leq(&images[i]).unwrap());
    let extensive = check(bad.is_none(), &|| format!("not extensive at {}", elems[bad.unwrap()]));
    let bad = (0..n).find(|&i| j.j(&images[i]) != images[i]);
    let idempotent = check(bad.is_none(), &|| format!("not idempotent at {}", elems[bad.unwrap()]));
    let bad_mono = if exhaustive {
        (0..n).find_map(|i| {
            upper_covers(&elems[i])
                .into_iter()
                .find(|y| !images[i].leq(&j.j(y)).unwrap())
                .map(|y| (elems[i].clone(), y))
        })
    } else {
        pairs.iter().find_map(|&(a, b)| {
            let y = elems[a].join(&elems[b]).unwrap();
            (!images[a].leq(&j.j(&y)).unwrap()).then(|| (elems[a].clone(), y))
        })
    };
    let monotone = check(bad_mono.is_none(), &|| {
        let (x, y) = bad_mono.as_ref().unwrap();
        format!("not monotone: {x} ≤ {y} but images are not ordered")
    });
    let bad_meet = pairs.iter().find(|&&(a, b)| {
        j.j(&elems[a].meet(&elems[b]).unwrap()) != images[a].meet(&images[b]).unwrap()
    });
    let meets = check(bad_meet.is_none(), &|| {
        let (a, b) = bad_meet.unwrap();
        format!("meet law fails at {}, {}", elems[*a], elems[*b])
    });
    let dense = j.j(&Element::zero(sig)).is_zero();

    let inductive_idx: Vec<usize> = if pairs_exhaustive {
        (0..n).collect()
    } else {
        (0..cfg.samples.min(n)).map(|_| rng.gen_range(0..n)).collect()
    };
    let mut is_inductive = Inductive::Yes;
    for i in inductive_idx {
        match compact_approximation_join(j, &elems[i], cfg) {
            None => {
                is_inductive = Inductive::Unknown(
                    "compact approximations are not finitely describable for this map".into(),
                );
                break;
            }
            Some(sup) if sup != images[i] => {
                failures.push(format!("not inductive at {}", elems[i]));
                is_inductive = Inductive::No;
                break;
            }
            Some(_) => {}
        }
    }

    let fixed: Vec<usize> = (0..n).filter(|&i| images[i] == elems[i]).collect();
    let mv_bad = if exhaustive {
        let set: HashSet<&Element> = fixed.iter().map(|&i| &elems[i]).collect();
        let f = fixed.len();
        let bad_neg = fixed
            .iter()
            .find(|&&i| !set.contains(&elems[i].neg()))
            .map(|&i| format!("¬{} is not fixed", elems[i]));
        let fixed_pairs: Vec<(usize, usize)> =
            if (f as u64).saturating_mul(f as u64) <= cfg.pair_budget {
                fixed.iter().flat_map(|&a| fixed.iter().map(move |&b| (a, b))).collect()
            } else if f == 0 {
                Vec::new()
            } else {
                (0..cfg.samples)
                    .map(|_| (fixed[rng.gen_range(0..f)], fixed[rng.gen_range(0..f)]))
                    .collect()
            };
        bad_neg.or_else(|| {
            fixed_pairs
                .iter()
                .find(|&&(a, b)| !set.contains(&elems[a].oplus(&elems[b]).unwrap()))
                .map(|&(a, b)| format!("{} ⊕ {} is not fixed", elems[a], elems[b]))
        })
    } else {
        pairs.iter().find_map(|&(a, b)| {
            let (p, q) = (&images[a], &images[b]);
            if j.j(&p.neg()) != p.neg() {
                Some(format!("¬{p} is not fixed"))
            } else {
                let s = p.oplus(q).unwrap();
                (j.j(&s) != s).then(|| format!("{p} ⊕ {q} is not fixed"))
            }
        })
    };
    if let Some(m) = &mv_bad {
        failures.push(m.clone());
    }
    let is_closure = extensive && monotone && idempotent;
    NucleusClassification {
        is_nucleus: is_closure && meets,
        is_dense: dense,
        is_inductive,
        is_mv_type: mv_bad.is_none(),
        is_closure,
        nuclear: NuclearSet {
            description: if exhaustive {
                "fixed points".into()
            } else {
                "fixed points {x : j(x) = x} (not materialized)".into()
            },
            blocks: None,
            elements: exhaustive
                .then(|| fixed.iter().map(|&i| ElementRepr::from(&elems[i])).collect()),
        },
        method: if exhaustive {
            CheckMethod::Exhaustive
        } else {
            CheckMethod::Sampled
        },
        failures,
    }
}

/// Outcome of checking `jA` as a sub-MV-frame of `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SubalgebraChecks {
    pub closed_under_neg: bool,
    pub closed_under_oplus: bool,
    /// Joins computed in `jA` agree with joins computed in `A`.
    pub joins_agree: bool,
    pub algebraic: bool,
    /// `j(𝔨(A)) = 𝔨(jA)`, decided on enumerable algebras only.
    pub compacts_commute: Option<bool>,
    pub method: CheckMethod,
}

impl SubalgebraChecks {
    pub fn all_hold(&self) -> bool {
        self.closed_under_neg
            && self.closed_under_oplus
            && self.joins_agree
            && self.algebraic
            && self.compacts_commute != Some(false)
    }
}

/// `jA` as an algebra in its own right, with its inclusion into `A` when the
/// fixed-point set is a product of per-coordinate chains.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NuclearAlgebra {
    pub signature: Option<Signature>,
    pub embedding: Option<ProductHom>,
    pub checks: SubalgebraChecks,
}

fn chain_of_values(values: &[ChainValue]) -> Option<FactorKind> {
    let m = values.len() as u64;
    if m < 2 {
        return None;
    }
    let grid = (0..m).all(|k| values[k as usize] == ChainValue::new(k, m - 1).unwrap());
    grid.then_some(FactorKind::FiniteChain(m))
}

fn coordinate_values(x: &Element) -> Vec<ChainValue> {
    x.sig().coords().unwrap().into_iter().map(|c| x.get(c)).collect()
}

/// Checks on an explicitly listed `jA` inside an enumerable `A`.
fn check_listed(
    j: &NucleusSpec,
    fixed: &[Element],
    sub_sig: Option<&Arc<Signature>>,
    cfg: &Config,
) -> SubalgebraChecks {
    let set: HashSet<&Element> = fixed.iter().collect();
    let f = fixed.len();
    let mut rng = cfg.rng();
    let pairs: Vec<(usize, usize)> = if (f as u64).saturating_mul(f as u64) <= cfg.pair_budget {
        (0..f).flat_map(|a| (0..f).map(move |b| (a, b))).collect()
    } else {
        (0..cfg.samples)
            .map(|_| (rng.gen_range(0..f), rng.gen_range(0..f)))
            .collect()
    };
    let closed_under_neg = fixed.iter().all(|x| set.contains(&x.neg()));
    let closed_under_oplus = pairs
        .iter()
        .all(|&(a, b)| set.contains(&fixed[a].oplus(&fixed[b]).unwrap()));
    // The ambient join is the least upper bound in jA exactly when it lies
    // in jA; the empty join is the bottom.
    let joins_agree = set.contains(&Element::zero(&j.sig))
        && pairs
            .iter()
            .all(|&(a, b)| set.contains(&fixed[a].join(&fixed[b]).unwrap()));
    let algebraic = sub_sig.map_or(true, |s| classify(s).algebraic);
    let compacts_commute = enumerate(&j.sig, cfg.enumeration_bound).ok().map(|all| {
        let lhs: HashSet<Element> = all
            .iter()
            .filter(|a| is_compact(a).compact)
            .map(|a| j.j(a))
            .collect();
        let rhs: HashSet<Element> = fixed
            .iter()
            .filter(|b| match sub_sig {
                Some(s) => is_compact(&Element::from_values(s, &coordinate_values(b)).unwrap()).compact,
                None => true,
            })
            .cloned()
            .collect();
        lhs == rhs
    });
    SubalgebraChecks {
        closed_under_neg,
        closed_under_oplus,
        joins_agree,
        algebraic,
        compacts_commute,
        method: if pairs.len() == f * f {
            CheckMethod::Exhaustive
        } else {
            CheckMethod::Sampled
        },
    }
}

/// `jA` as an algebraic MV-frame. Requires a nucleus that is inductive and
/// of MV-type.
pub fn nuclear_as_algebra(j: &NucleusSpec, cfg: &Config) -> Result<NuclearAlgebra, Error> {
    let cls = classify_nucleus(j, cfg);
    if !cls.is_nucleus {
        return Err(Error::PreconditionFailed("isNucleus is false".into()));
    }
    match &cls.is_inductive {
        Inductive::Yes => {}
        Inductive::No => return Err(Error::PreconditionFailed("isInductive is false".into())),
        Inductive::Unknown(r) => {
            return Err(Error::PreconditionFailed(format!("isInductive is unknown: {r}")))
        }
    }
    if !cls.is_mv_type {
        return Err(Error::PreconditionFailed("isMVType is false".into()));
    }
    let not_chain = || Error::PreconditionFailed("a fixed-point block is not a finite chain".into());
    if let Some(blocks) = &cls.nuclear.blocks {
        let sub_blocks = blocks
            .iter()
            .map(|bf| match &bf.fixed {
                FixedValues::Values { values } => chain_of_values(values)
                    .map(|k| Block::new(k, j.sig.block(bf.block).mult))
                    .ok_or_else(not_chain),
                FixedValues::AtLeast { .. } => Err(not_chain()),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let sub_sig = Arc::new(Signature::new(sub_blocks)?);
        let embedding = ProductHom::new(
            sub_sig.clone(),
            j.sig.clone(),
            IndexMap::identity(j.sig.blocks().len()),
        )?;
        let checks = match nuclear_elements_from_blocks(&j.sig, blocks, cfg.enumeration_bound) {
            Some(fixed) => check_listed(j, &fixed, Some(&sub_sig), cfg),
            None => check_blockwise(blocks, &sub_sig),
        };
        return Ok(NuclearAlgebra {
            signature: Some((*sub_sig).clone()),
            embedding: Some(embedding),
            checks,
        });
    }
    let fixed: Vec<Element> = cls
        .nuclear
        .elements
        .ok_or_else(|| Error::PreconditionFailed("fixed-point set is not enumerable".into()))?
        .into_iter()
        .map(|r| r.into_element(&j.sig))
        .collect::<Result<_, _>>()?;
    let coords = j.sig.coords().unwrap();
    let projections: Vec<Vec<ChainValue>> = coords
        .iter()
        .map(|&c| {
            let mut vs: Vec<ChainValue> = fixed.iter().map(|x| x.get(c)).collect();
            vs.sort();
            vs.dedup();
            vs
        })
        .collect();
    let product_size: u128 = projections.iter().map(|p| p.len() as u128).product();
    let kinds: Option<Vec<FactorKind>> = projections.iter().map(|p| chain_of_values(p)).collect();
    let (signature, embedding) = match kinds {
        Some(kinds) if product_size == fixed.len() as u128 => {
            let sub_sig = Arc::new(Signature::new(
                kinds
                    .into_iter()
                    .map(|k| Block::new(k, Multiplicity::Finite(1)))
                    .collect(),
            )?);
            let rules = j
                .sig
                .blocks()
                .iter()
                .enumerate()
                .map(|(t, b)| {
                    let Multiplicity::Finite(m) = b.mult else { unreachable!() };
                    let pos = |i: u64| coords.iter().position(|&c| c == Coord::new(t, i)).unwrap();
                    BlockRule {
                        default: DefaultRule::Constant(Coord::new(pos(0), 0)),
                        exceptions: (1..m).map(|i| (i, Coord::new(pos(i), 0))).collect(),
                    }
                })
                .collect();
            let embedding =
                ProductHom::new(sub_sig.clone(), j.sig.clone(), IndexMap { blocks: rules })?;
            (Some(sub_sig), Some(embedding))
        }
        _ => (None, None),
    };
    let checks = check_listed(j, &fixed, signature.as_ref(), cfg);
    Ok(NuclearAlgebra {
        signature: signature.map(|s| (*s).clone()),
        embedding,
        checks,
    })
}

/// Checks on per-block fixed chains, for algebras too large to list.
fn check_blockwise(blocks: &[BlockFixedSet], sub_sig: &Signature) -> SubalgebraChecks {
    let mut neg = true;
    let mut oplus = true;
    let mut joins = true;
    for bf in blocks {
        let FixedValues::Values { values } = &bf.fixed else { unreachable!() };
        neg &= values.iter().all(|v| values.contains(&v.neg()));
        for &a in values {
            for &b in values {
                oplus &= values.contains(&a.oplus(b));
                joins &= values.contains(&a.max(b));
            }
        }
        joins &= values.contains(&ChainValue::ZERO);
    }
    SubalgebraChecks {
        closed_under_neg: neg,
        closed_under_oplus: oplus,
        joins_agree: joins,
        algebraic: classify(sub_sig).algebraic,
        compacts_commute: None,
        method: CheckMethod::Factorwise,
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableEntry {
    x: Vec<ChainValue>,
    j: Vec<ChainValue>,
}

/// `{"name":…,"kind":"threshold","t0":"1/2"}` or
/// `{"kind":"table","table":[{"x":["0","1/2"],"j":["1/2","1/2"]},…]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NucleusSpecRepr {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    name: Option<String>,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    t0: Option<ChainValue>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    table: Option<Vec<TableEntry>>,
}

impl NucleusSpec {
    pub fn from_json(sig: &Arc<Signature>, text: &str, cfg: &Config) -> Result<Self, Error> {
        let repr: NucleusSpecRepr = serde_json::from_str(text)?;
        let spec = match (repr.kind.as_str(), repr.table) {
            ("table", Some(entries)) => NucleusSpec::table(
                sig,
                entries
                    .into_iter()
                    .map(|e| Ok((Element::from_values(sig, &e.x)?, Element::from_values(sig, &e.j)?)))
                    .collect::<Result<Vec<_>, Error>>()?,
                cfg.enumeration_bound,
            )?,
            ("table", None) => return Err(Error::Parse("table nucleus needs \"table\"".into())),
            (_, Some(_)) => return Err(Error::Parse("only table nuclei take \"table\"".into())),
            (kind, None) => NucleusSpec::builtin(NucleusKind::from_name(kind, repr.t0)?, sig)?,
        };
        Ok(match repr.name {
            Some(n) => spec.with_name(n),
            None => spec,
        })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let table = match &self.kind {
            NucleusKind::Table(t) => {
                let mut entries: Vec<TableEntry> = t
                    .iter()
                    .map(|(x, y)| TableEntry {
                        x: coordinate_values(x),
                        j: coordinate_values(y),
                    })
                    .collect();
                entries.sort_by(|a, b| a.x.cmp(&b.x));
                Some(entries)
            }
            _ => None,
        };
        serde_json::to_value(NucleusSpecRepr {
            name: Some(self.name.clone()),
            kind: self.kind.name().into(),
            t0: match self.kind {
                NucleusKind::Threshold(t) => Some(t),
                _ => None,
            },
            table,
        })
        .expect("nucleus spec serializes")
    }
}
