//! Elements of a product MV-algebra and its basic operations.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize, Serializer};

use crate::coords::{BlockData, Coords};
use crate::error::Error;
use crate::signature::{Coord, Multiplicity, Signature};
use crate::value::{ChainValue, FactorKind};

/// A finitely described element of the product named by its signature.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    sig: Arc<Signature>,
    data: Coords<ChainValue>,
}

impl Element {
    pub fn constant(sig: &Arc<Signature>, v: ChainValue) -> Result<Self, Error> {
        if let Some(b) = sig.blocks().iter().find(|b| !b.kind.contains(v)) {
            return Err(Error::ValueOutOfRange(format!("{v} in {}", b.kind)));
        }
        Ok(Self::constant_unchecked(sig, v))
    }

    fn constant_unchecked(sig: &Arc<Signature>, v: ChainValue) -> Self {
        Self {
            sig: sig.clone(),
            data: Coords::constant(sig.blocks().iter().map(|b| b.mult), v),
        }
    }

    pub fn zero(sig: &Arc<Signature>) -> Self {
        Self::constant_unchecked(sig, ChainValue::ZERO)
    }

    pub fn one(sig: &Arc<Signature>) -> Self {
        Self::constant_unchecked(sig, ChainValue::ONE)
    }

    /// Wraps coordinate data, checking its shape and that every value lies in
    /// its factor.
    pub fn from_coords(sig: &Arc<Signature>, data: Coords<ChainValue>) -> Result<Self, Error> {
        if data.blocks().len() != sig.blocks().len() {
            return Err(Error::SignatureMismatch);
        }
        for (blk, d) in sig.blocks().iter().zip(data.blocks()) {
            match (blk.mult, d) {
                (Multiplicity::Finite(m), BlockData::Dense(v)) if v.len() as u64 == m => {}
                (Multiplicity::CountablyInfinite, BlockData::Sparse { .. }) => {}
                _ => return Err(Error::SignatureMismatch),
            }
            if let Some(v) = d.values().find(|&v| !blk.kind.contains(v)) {
                return Err(Error::ValueOutOfRange(format!("{v} in {}", blk.kind)));
            }
        }
        Ok(Self {
            sig: sig.clone(),
            data,
        })
    }

    /// Element of a finite index set from its values in coordinate order.
    pub fn from_values(sig: &Arc<Signature>, values: &[ChainValue]) -> Result<Self, Error> {
        let count = sig.coord_count().ok_or(Error::InfiniteCarrier)?;
        if count != values.len() as u64 {
            return Err(Error::SignatureMismatch);
        }
        let mut rest = values;
        let blocks = sig
            .blocks()
            .iter()
            .map(|b| {
                let Multiplicity::Finite(m) = b.mult else { unreachable!() };
                let (head, tail) = rest.split_at(m as usize);
                rest = tail;
                BlockData::Dense(head.to_vec())
            })
            .collect();
        Self::from_coords(sig, Coords::from_blocks(blocks))
    }

    /// Convenience for tests and examples: parses each value.
    pub fn parse_values(sig: &Arc<Signature>, values: &[&str]) -> Result<Self, Error> {
        let vals = values
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<ChainValue>, _>>()?;
        Self::from_values(sig, &vals)
    }

    pub fn sig(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn data(&self) -> &Coords<ChainValue> {
        &self.data
    }

    pub fn get(&self, c: Coord) -> ChainValue {
        self.data.get(c)
    }

    pub fn with(&self, c: Coord, v: ChainValue) -> Result<Self, Error> {
        if !self.sig.contains_coord(c) {
            return Err(Error::Parse(format!("coordinate {c} is outside {}", self.sig)));
        }
        if !self.sig.kind_at(c).contains(v) {
            return Err(Error::ValueOutOfRange(format!("{v} in {}", self.sig.kind_at(c))));
        }
        Ok(Self {
            sig: self.sig.clone(),
            data: self.data.with(c, v),
        })
    }

    /// Reads the same coordinate data over another signature of the same shape.
    pub fn reinterpret(&self, sig: &Arc<Signature>) -> Result<Self, Error> {
        Self::from_coords(sig, self.data.clone())
    }

    fn same_sig(&self, other: &Self) -> Result<(), Error> {
        if Arc::ptr_eq(&self.sig, &other.sig) || self.sig == other.sig {
            Ok(())
        } else {
            Err(Error::SignatureMismatch)
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(ChainValue, ChainValue) -> ChainValue) -> Result<Self, Error> {
        self.same_sig(other)?;
        Ok(Self {
            sig: self.sig.clone(),
            data: self.data.zip_with(&other.data, |_, a, b| f(a, b))?,
        })
    }

    /// Applies a per-factor map; the result is checked to stay in the carrier.
    pub fn map_values(&self, f: impl Fn(FactorKind, ChainValue) -> ChainValue) -> Result<Self, Error> {
        let sig = self.sig.clone();
        let data = self.data.map(|b, v| f(sig.block(b).kind, v));
        Self::from_coords(&sig, data)
    }

    pub fn oplus(&self, other: &Self) -> Result<Self, Error> {
        self.zip(other, ChainValue::oplus)
    }

    pub fn neg(&self) -> Self {
        Self {
            sig: self.sig.clone(),
            data: self.data.map(|_, v| v.neg()),
        }
    }

    /// `x ⊙ y = ¬(¬x ⊕ ¬y)`.
    pub fn odot(&self, other: &Self) -> Result<Self, Error> {
        Ok(self.neg().oplus(&other.neg())?.neg())
    }

    /// Coordinatewise maximum.
    pub fn join(&self, other: &Self) -> Result<Self, Error> {
        self.zip(other, std::cmp::max)
    }

    /// Coordinatewise minimum.
    pub fn meet(&self, other: &Self) -> Result<Self, Error> {
        self.zip(other, std::cmp::min)
    }

    /// `x ∨ y = ¬(¬x ⊕ y) ⊕ y`.
    pub fn join_mv(&self, other: &Self) -> Result<Self, Error> {
        self.neg().oplus(other)?.neg().oplus(other)
    }

    /// `x ∧ y = ¬(¬x ∨ ¬y)`.
    pub fn meet_mv(&self, other: &Self) -> Result<Self, Error> {
        Ok(self.neg().join_mv(&other.neg())?.neg())
    }

    /// Coordinatewise order.
    pub fn leq(&self, other: &Self) -> Result<bool, Error> {
        self.same_sig(other)?;
        self.data.all2(&other.data, |a, b| a <= b)
    }

    /// `x ≤ y` iff `¬x ⊕ y = 1`.
    pub fn leq_mv(&self, other: &Self) -> Result<bool, Error> {
        Ok(self.neg().oplus(other)?.is_one())
    }

    pub fn is_zero(&self) -> bool {
        self.data.all(|_, v| v.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.data.all(|_, v| v.is_one())
    }

    /// A random finitely described element; unit-interval coordinates get
    /// denominators up to 12 and infinite blocks up to three exceptions below
    /// index 16.
    pub fn random(sig: &Arc<Signature>, rng: &mut impl Rng) -> Self {
        let draw = |kind: FactorKind, rng: &mut dyn rand::RngCore| -> ChainValue {
            match kind {
                FactorKind::FiniteChain(n) => {
                    let k = rng.gen_range(0..n);
                    ChainValue::new(k, n - 1).unwrap()
                }
                FactorKind::UnitInterval => {
                    let den = rng.gen_range(1..=12);
                    ChainValue::new(rng.gen_range(0..=den), den).unwrap()
                }
            }
        };
        let blocks = sig
            .blocks()
            .iter()
            .map(|b| match b.mult {
                Multiplicity::Finite(m) => {
                    BlockData::Dense((0..m).map(|_| draw(b.kind, rng)).collect())
                }
                Multiplicity::CountablyInfinite => {
                    let default = draw(b.kind, rng);
                    let count = rng.gen_range(0..=3);
                    let exceptions = (0..count)
                        .map(|_| (rng.gen_range(0..16), draw(b.kind, rng)))
                        .collect();
                    BlockData::Sparse {
                        default,
                        exceptions,
                    }
                }
            })
            .collect();
        Self {
            sig: sig.clone(),
            data: Coords::from_blocks(blocks),
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(ElementRepr::from(self)).expect("element serializes")
    }

    pub fn from_json(sig: &Arc<Signature>, json: &str) -> Result<Self, Error> {
        let repr: ElementRepr = serde_json::from_str(json)?;
        repr.into_element(sig)
    }
}

/// Finite join; the empty join is `0`.
pub fn join_all<'a>(
    sig: &Arc<Signature>,
    xs: impl IntoIterator<Item = &'a Element>,
) -> Result<Element, Error> {
    xs.into_iter()
        .try_fold(Element::zero(sig), |acc, x| acc.join(x))
}

/// Finite meet; the empty meet is `1`.
pub fn meet_all<'a>(
    sig: &Arc<Signature>,
    xs: impl IntoIterator<Item = &'a Element>,
) -> Result<Element, Error> {
    xs.into_iter()
        .try_fold(Element::one(sig), |acc, x| acc.meet(x))
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sig.index_set_finite() {
            let vals: Vec<String> = self
                .sig
                .coords()
                .unwrap()
                .into_iter()
                .map(|c| self.get(c).to_string())
                .collect();
            if vals.len() == 1 {
                write!(f, "{}", vals[0])
            } else {
                write!(f, "({})", vals.join(", "))
            }
        } else {
            write!(f, "{}", self.to_json_value())
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `{"exceptions":{"b.i":"v"},"defaults":["d0","d1"]}`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ElementRepr {
    #[serde(default)]
    pub exceptions: BTreeMap<String, ChainValue>,
    pub defaults: Vec<Option<ChainValue>>,
}

impl From<&Element> for ElementRepr {
    fn from(x: &Element) -> Self {
        let mut exceptions = BTreeMap::new();
        let mut defaults = Vec::new();
        for (b, data) in x.data.blocks().iter().enumerate() {
            let (d, exc) = data.default_and_exceptions();
            defaults.push(Some(d));
            for (i, v) in exc {
                exceptions.insert(Coord::new(b, i).to_string(), v);
            }
        }
        Self {
            exceptions,
            defaults,
        }
    }
}

impl ElementRepr {
    /// Rebuilds the element; a `null` default is only allowed for finite
    /// blocks and reads as `0`.
    pub fn into_element(self, sig: &Arc<Signature>) -> Result<Element, Error> {
        if self.defaults.len() != sig.blocks().len() {
            return Err(Error::Parse(format!(
                "expected {} defaults, got {}",
                sig.blocks().len(),
                self.defaults.len()
            )));
        }
        let mut data = Coords::from_blocks(
            sig.blocks()
                .iter()
                .zip(&self.defaults)
                .map(|(b, d)| match (b.mult, d) {
                    (Multiplicity::CountablyInfinite, None) => Err(Error::Parse(
                        "infinite blocks need an explicit default".into(),
                    )),
                    (m, d) => Ok(BlockData::constant(m, d.unwrap_or(ChainValue::ZERO))),
                })
                .collect::<Result<_, _>>()?,
        );
        for (key, v) in self.exceptions {
            let c: Coord = key.parse()?;
            if !sig.contains_coord(c) {
                return Err(Error::Parse(format!("coordinate {c} is outside {sig}")));
            }
            data = data.with(c, v);
        }
        Element::from_coords(sig, data)
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ElementRepr::from(self).serialize(s)
    }
}

/// Every element of a fully finite signature, first coordinate varying
/// slowest.
pub fn enumerate(sig: &Arc<Signature>, bound: u64) -> Result<Vec<Element>, Error> {
    if !sig.is_fully_finite() {
        return Err(Error::InfiniteCarrier);
    }
    let size = sig.carrier_size().unwrap();
    if size > bound as u128 {
        return Err(Error::CarrierTooLarge { size, bound });
    }
    let coords = sig.coords().unwrap();
    let carriers: Vec<Vec<ChainValue>> = coords
        .iter()
        .map(|&c| sig.kind_at(c).carrier().unwrap())
        .collect();
    let mut digits = vec![0usize; coords.len()];
    let mut out = Vec::with_capacity(size as usize);
    loop {
        let vals: Vec<ChainValue> = digits
            .iter()
            .zip(&carriers)
            .map(|(&d, car)| car[d])
            .collect();
        out.push(Element::from_values(sig, &vals)?);
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < carriers[pos].len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(sizes: &[u64]) -> Arc<Signature> {
        Arc::new(Signature::chains(sizes).unwrap())
    }

    fn el(s: &Arc<Signature>, vals: &[&str]) -> Element {
        Element::parse_values(s, vals).unwrap()
    }

    #[test]
    fn oplus_examples() {
        let l3 = sig(&[3]);
        assert_eq!(el(&l3, &["1/2"]).oplus(&el(&l3, &["1/2"])).unwrap(), Element::one(&l3));
        let s = sig(&[4]);
        let mixed = Arc::new(
            Signature::new(vec![
                crate::signature::Block::new(FactorKind::FiniteChain(4), Multiplicity::Finite(1)),
                crate::signature::Block::new(FactorKind::UnitInterval, Multiplicity::Finite(1)),
            ])
            .unwrap(),
        );
        let x = el(&mixed, &["1/3", "3/4"]);
        let y = el(&mixed, &["2/3", "1/2"]);
        assert_eq!(x.oplus(&y).unwrap(), Element::one(&mixed));
        let z = el(&s, &["1/3"]);
        assert_eq!(z.oplus(&Element::zero(&s)).unwrap(), z);
    }

    #[test]
    fn negation_examples() {
        let l4 = sig(&[4]);
        assert_eq!(Element::zero(&l4).neg(), Element::one(&l4));
        assert_eq!(el(&l4, &["1/3"]).neg(), el(&l4, &["2/3"]));
        let l3 = sig(&[3]);
        assert_eq!(el(&l3, &["1/2"]).neg(), el(&l3, &["1/2"]));
    }

    #[test]
    fn lattice_examples() {
        let s = sig(&[3, 3]);
        let x = el(&s, &["1/2", "0"]);
        let y = el(&s, &["1", "1/2"]);
        assert_eq!(x.meet(&y).unwrap(), el(&s, &["1/2", "0"]));
        assert_eq!(x.meet_mv(&y).unwrap(), el(&s, &["1/2", "0"]));
        assert!(el(&s, &["0", "1/2"]).leq_mv(&el(&s, &["1/2", "1/2"])).unwrap());
        let h = el(&sig(&[3]), &["1/2"]);
        assert_eq!(h.join(&h).unwrap(), h);
    }

    #[test]
    fn mismatched_signatures_are_rejected() {
        let a = Element::zero(&sig(&[3]));
        let b = Element::zero(&sig(&[4]));
        assert_eq!(a.oplus(&b), Err(Error::SignatureMismatch));
        assert_eq!(a.leq(&b), Err(Error::SignatureMismatch));
    }

    #[test]
    fn enumeration_counts_and_errors() {
        let l3 = sig(&[3]);
        let all = enumerate(&l3, 1_000_000).unwrap();
        assert_eq!(
            all,
            vec![el(&l3, &["0"]), el(&l3, &["1/2"]), el(&l3, &["1"])]
        );
        assert_eq!(enumerate(&sig(&[2, 2]), 100).unwrap().len(), 4);
        assert_eq!(enumerate(&sig(&[3, 4]), 100).unwrap().len(), 12);
        assert!(matches!(
            enumerate(&sig(&[3, 4]), 11),
            Err(Error::CarrierTooLarge { size: 12, bound: 11 })
        ));
        let inf = Arc::new(
            Signature::power(FactorKind::FiniteChain(3), Multiplicity::CountablyInfinite).unwrap(),
        );
        assert_eq!(enumerate(&inf, 100), Err(Error::InfiniteCarrier));
    }

    #[test]
    fn json_round_trip_and_shorthand() {
        let s = Arc::new(
            serde_json::from_str::<Signature>(
                r#"{"blocks":[{"kind":"chain","n":3,"mult":2},{"kind":"chain","n":4,"mult":"inf"}]}"#,
            )
            .unwrap(),
        );
        let x = Element::from_json(&s, r#"{"exceptions":{"0.1":"1/2"},"defaults":["0","0"]}"#).unwrap();
        assert_eq!(x.get(Coord::new(0, 1)).to_string(), "1/2");
        assert_eq!(x.get(Coord::new(1, 99)), ChainValue::ZERO);
        let text = serde_json::to_string(&x).unwrap();
        assert_eq!(text, r#"{"exceptions":{"0.1":"1/2"},"defaults":["0","0"]}"#);
        let shorthand = Element::from_json(&s, r#"{"exceptions":{"0.1":"1/2"},"defaults":[null,"0"]}"#).unwrap();
        assert_eq!(shorthand, x);
        assert!(Element::from_json(&s, r#"{"defaults":["0",null]}"#).is_err());
        assert!(Element::from_json(&s, r#"{"exceptions":{"0.2":"1"},"defaults":["0","0"]}"#).is_err());
        assert!(Element::from_json(&s, r#"{"exceptions":{"1.2":"1/2"},"defaults":["0","0"]}"#).is_err());
    }

    #[test]
    fn canonical_form_survives_operations() {
        let s = Arc::new(
            Signature::power(FactorKind::FiniteChain(3), Multiplicity::CountablyInfinite).unwrap(),
        );
        let half = ChainValue::new(1, 2).unwrap();
        let x = Element::zero(&s).with(Coord::new(0, 2), half).unwrap();
        let y = Element::constant(&s, half).unwrap();
        // x ∨ y is the constant 1/2: the exception collapses into the default.
        assert_eq!(x.join(&y).unwrap(), y);
    }
}
