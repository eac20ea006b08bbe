//! Frame-theoretic structure of product MV-algebras: pseudocomplements, the
//! Boolean center, compact elements with checkable non-compactness
//! certificates, and the algebraic/coherent/regular classification.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coords::BlockData;
use crate::element::{Element, ElementRepr};
use crate::error::Error;
use crate::signature::{Coord, Multiplicity, Signature};
use crate::value::{ChainValue, FactorKind};

pub use crate::element::{join_all, meet_all};

/// `z* = ⋁{x | x ∧ z = 0}`; coordinatewise `1` where `z` vanishes, else `0`.
pub fn pseudocomplement(z: &Element) -> Element {
    z.map_values(|_, v| if v.is_zero() { ChainValue::ONE } else { ChainValue::ZERO })
        .expect("0 and 1 lie in every factor")
}

/// Membership in the Boolean center, decided by `x ⊕ x = x`.
pub fn is_boolean(x: &Element) -> bool {
    x.oplus(x).expect("same signature") == *x
}

/// Membership in the Boolean center, decided coordinatewise (`x_k ∈ {0,1}`).
pub fn is_boolean_coordwise(x: &Element) -> bool {
    x.data().all(|_, v| v.is_zero() || v.is_one())
}

/// `x ⪯ y` iff `y ∨ x* = 1`.
pub fn way_below(x: &Element, y: &Element) -> Result<bool, Error> {
    Ok(y.join(&pseudocomplement(x))?.is_one())
}

/// `x = ⋁{a | a ⪯ x}` holds exactly when every coordinate of `x` is `0` or
/// `1`. The equivalence is checked against the defining join on enumerable
/// algebras only.
pub fn is_regular_element(x: &Element) -> bool {
    is_boolean_coordwise(x)
}

/// Which construction a non-compactness witness follows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum WitnessFamily {
    /// `β_n` agrees with `α` off block `block` and on indices `< n` of it,
    /// and is `0` on the rest of the block.
    ExhaustFiniteSupport,
    /// `β_n` agrees with `α` except at one unit-interval coordinate, where it
    /// is `q_n = t·n/(n+1)` with `t = α` there.
    RationalSequence { target: ChainValue },
}

/// An increasing countable family whose supremum dominates `α` while none
/// of its members (hence no finite subfamily) does.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainWitness {
    pub block: usize,
    pub coord_index: u64,
    #[serde(flatten)]
    pub family: WitnessFamily,
    pub formula: String,
    /// `β_1, …, β_8`.
    pub terms: Vec<ElementRepr>,
}

const LISTED_TERMS: u64 = 8;

impl ChainWitness {
    fn build(alpha: &Element, block: usize, coord_index: u64, family: WitnessFamily) -> Self {
        let formula = match &family {
            WitnessFamily::ExhaustFiniteSupport => format!(
                "beta_n = alpha with block {block} truncated to indices < n (zero beyond); \
                 alpha is {} on block {block} from index {coord_index} on",
                alpha.data().block(block).default_and_exceptions().0
            ),
            WitnessFamily::RationalSequence { target } => format!(
                "beta_n = alpha with coordinate {block}.{coord_index} replaced by \
                 q_n = {target}*n/(n+1), increasing to {target}"
            ),
        };
        let mut w = Self {
            block,
            coord_index,
            family,
            formula,
            terms: Vec::new(),
        };
        w.terms = (1..=LISTED_TERMS)
            .map(|n| ElementRepr::from(&w.term(alpha, n)))
            .collect();
        w
    }

    /// `β_n` for `n ≥ 1`.
    pub fn term(&self, alpha: &Element, n: u64) -> Element {
        match &self.family {
            WitnessFamily::ExhaustFiniteSupport => {
                let sig = alpha.sig().clone();
                let mut blocks: Vec<BlockData<ChainValue>> = alpha.data().blocks().to_vec();
                let truncated = match &blocks[self.block] {
                    BlockData::Sparse { .. } => {
                        let exc = (0..n)
                            .map(|i| (i, alpha.get(Coord::new(self.block, i))))
                            .filter(|(_, v)| !v.is_zero())
                            .collect();
                        BlockData::Sparse {
                            default: ChainValue::ZERO,
                            exceptions: exc,
                        }
                    }
                    BlockData::Dense(vals) => BlockData::Dense(
                        vals.iter()
                            .enumerate()
                            .map(|(i, &v)| if (i as u64) < n { v } else { ChainValue::ZERO })
                            .collect(),
                    ),
                };
                blocks[self.block] = truncated;
                Element::from_coords(&sig, crate::coords::Coords::from_blocks(blocks))
                    .expect("truncation stays in the carrier")
            }
            WitnessFamily::RationalSequence { target } => {
                let q = target.mul(ChainValue::new(n, n + 1).unwrap());
                alpha
                    .with(Coord::new(self.block, self.coord_index), q)
                    .expect("unit-interval coordinate accepts any rational")
            }
        }
    }

    /// Machine-checks the first `prefix` terms: the family increases, no
    /// term dominates `alpha`, and the declared supremum (which is `alpha`
    /// itself) is attained in the limit at every probed coordinate.
    pub fn verify(&self, alpha: &Element, prefix: usize) -> Result<(), String> {
        let prefix = prefix.max(1) as u64;
        let mut prev = self.term(alpha, 1);
        for n in 1..=prefix {
            let cur = if n == 1 { prev.clone() } else { self.term(alpha, n) };
            if n > 1 && !prev.leq(&cur).map_err(|e| e.to_string())? {
                return Err(format!("beta_{} is not below beta_{n}", n - 1));
            }
            if alpha.leq(&cur).map_err(|e| e.to_string())? {
                return Err(format!("beta_{n} already dominates alpha"));
            }
            prev = cur;
        }
        match &self.family {
            WitnessFamily::ExhaustFiniteSupport => {
                // At coordinate (b, i) the family is eventually alpha (from n = i + 1).
                for c in alpha.data().probe_coords() {
                    let n = if c.block == self.block { c.index + 1 } else { 1 };
                    if self.term(alpha, n).get(c) < alpha.get(c) {
                        return Err(format!("supremum misses alpha at {c}"));
                    }
                }
            }
            WitnessFamily::RationalSequence { target } => {
                let c = Coord::new(self.block, self.coord_index);
                if alpha.get(c) != *target || target.is_zero() {
                    return Err("target does not match alpha".into());
                }
                for n in 1..=prefix {
                    let q = self.term(alpha, n).get(c);
                    // t - q_n = t/(n+1) exactly, so q_n → t.
                    let gap = target.checked_sub(q).ok_or("q_n exceeds target")?;
                    if gap != target.mul(ChainValue::new(1, n + 1).unwrap()) {
                        return Err(format!("q_{n} is off the declared sequence"));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompactnessVerdict {
    pub compact: bool,
    pub witness: Option<ChainWitness>,
}

/// `α` is compact iff it has finite support (c1) and that support avoids
/// unit-interval factors (c2). A negative verdict carries a witness family.
pub fn is_compact(alpha: &Element) -> CompactnessVerdict {
    let sig = alpha.sig();
    let support = match alpha.data().finite_support(|v| !v.is_zero()) {
        Ok(s) => s,
        Err(block) => {
            let BlockData::Sparse { exceptions, .. } = alpha.data().block(block) else {
                unreachable!("only sparse blocks have infinite support")
            };
            let tail = exceptions.keys().next_back().map_or(0, |i| i + 1);
            return CompactnessVerdict {
                compact: false,
                witness: Some(ChainWitness::build(
                    alpha,
                    block,
                    tail,
                    WitnessFamily::ExhaustFiniteSupport,
                )),
            };
        }
    };
    match support
        .into_iter()
        .find(|&c| sig.kind_at(c) == FactorKind::UnitInterval)
    {
        Some(c) => CompactnessVerdict {
            compact: false,
            witness: Some(ChainWitness::build(
                alpha,
                c.block,
                c.index,
                WitnessFamily::RationalSequence {
                    target: alpha.get(c),
                },
            )),
        },
        None => CompactnessVerdict {
            compact: true,
            witness: None,
        },
    }
}

/// Symbolic description of a set of elements, materialized when small.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ElementSet {
    pub description: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<Element>>,
}

/// The compact elements `𝔨(A)`.
pub fn compact_elements(sig: &Arc<Signature>, bound: u64) -> ElementSet {
    let has_chain = sig.blocks().iter().any(|b| b.kind.is_chain());
    let description = if sig.is_fully_finite() {
        "every element (finite algebra)".to_string()
    } else if !has_chain {
        "{0}".to_string()
    } else if sig.has_unit_interval() {
        "finite support contained in the finite-chain coordinates".to_string()
    } else {
        "finite support".to_string()
    };
    let elements = if !has_chain {
        Some(vec![Element::zero(sig)])
    } else {
        crate::element::enumerate(sig, bound).ok()
    };
    ElementSet {
        description,
        elements,
    }
}

/// Characteristic function of a set of coordinates.
pub fn chi(sig: &Arc<Signature>, coords: &[Coord]) -> Result<Element, Error> {
    coords
        .iter()
        .try_fold(Element::zero(sig), |acc, &c| acc.with(c, ChainValue::ONE))
}

/// Maximal compact elements. When the finite-chain coordinates form a finite
/// set there is exactly one, `χ` of that set; otherwise `𝔨(A)` has no maximal
/// elements in the order-theoretic sense and the set is read as all `χ_F`
/// with `F` a finite set of finite-chain coordinates.
pub fn maximal_compact_elements(sig: &Arc<Signature>) -> ElementSet {
    let chain_blocks: Vec<usize> = (0..sig.blocks().len())
        .filter(|&b| sig.block(b).kind.is_chain())
        .collect();
    if chain_blocks.is_empty() {
        return ElementSet {
            description: "{0}".into(),
            elements: Some(vec![Element::zero(sig)]),
        };
    }
    let finite = chain_blocks
        .iter()
        .all(|&b| sig.block(b).mult.is_finite());
    if finite {
        let coords: Vec<Coord> = chain_blocks
            .iter()
            .flat_map(|&b| {
                let Multiplicity::Finite(m) = sig.block(b).mult else { unreachable!() };
                (0..m).map(move |i| Coord::new(b, i))
            })
            .collect();
        let top = chi(sig, &coords).expect("coordinates are in range");
        ElementSet {
            description: "chi of all finite-chain coordinates".into(),
            elements: Some(vec![top]),
        }
    } else {
        ElementSet {
            description: "chi_F for finite sets F of finite-chain coordinates".into(),
            elements: None,
        }
    }
}

/// Membership test matching [`maximal_compact_elements`].
pub fn is_maximal_compact(x: &Element) -> bool {
    let set = maximal_compact_elements(x.sig());
    match set.elements {
        Some(els) => els.contains(x),
        None => is_boolean_coordwise(x) && is_compact(x).compact,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FrameClassification {
    pub algebraic: bool,
    pub coherent: bool,
    /// Regularity; only characterized for algebraic signatures.
    pub regular: bool,
    pub fip: bool,
    pub is_powerset_algebra: bool,
}

pub fn classify(sig: &Signature) -> FrameClassification {
    let algebraic = !sig.has_unit_interval();
    let powerset = sig
        .blocks()
        .iter()
        .all(|b| b.kind == FactorKind::FiniteChain(2));
    FrameClassification {
        algebraic,
        coherent: sig.is_fully_finite(),
        regular: powerset,
        fip: true,
        is_powerset_algebra: powerset,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chains(sizes: &[u64]) -> Arc<Signature> {
        Arc::new(Signature::chains(sizes).unwrap())
    }

    fn omega(kind: FactorKind) -> Arc<Signature> {
        Arc::new(Signature::power(kind, Multiplicity::CountablyInfinite).unwrap())
    }

    fn val(s: &str) -> ChainValue {
        s.parse().unwrap()
    }

    #[test]
    fn pseudocomplement_examples() {
        let s = chains(&[3, 3]);
        assert_eq!(pseudocomplement(&Element::zero(&s)), Element::one(&s));
        let z = Element::parse_values(&s, &["1/2", "0"]).unwrap();
        assert_eq!(pseudocomplement(&z), Element::parse_values(&s, &["0", "1"]).unwrap());
        let l4 = chains(&[4]);
        let z = Element::parse_values(&l4, &["1/3"]).unwrap();
        assert!(pseudocomplement(&z).is_zero());
    }

    #[test]
    fn boolean_center_examples() {
        let s = chains(&[3]);
        assert!(is_boolean(&Element::zero(&s)));
        assert!(is_boolean(&Element::one(&s)));
        assert!(!is_boolean(&Element::parse_values(&s, &["1/2"]).unwrap()));
        let inf = omega(FactorKind::FiniteChain(3));
        let chi_f = chi(&inf, &[Coord::new(0, 0), Coord::new(0, 3)]).unwrap();
        assert!(is_boolean(&chi_f) && is_boolean_coordwise(&chi_f));
    }

    #[test]
    fn way_below_examples() {
        let s = chains(&[3]);
        let half = Element::parse_values(&s, &["1/2"]).unwrap();
        assert!(way_below(&Element::zero(&s), &half).unwrap());
        assert!(way_below(&half, &Element::one(&s)).unwrap());
        assert!(!way_below(&half, &half).unwrap());
        assert!(!is_regular_element(&half));
        // alpha(x0) = t with 0 < t < 1 and zero elsewhere: alpha ∨ alpha* < 1.
        let s = chains(&[4, 4]);
        let alpha = Element::parse_values(&s, &["1/3", "0"]).unwrap();
        let j = alpha.join(&pseudocomplement(&alpha)).unwrap();
        assert_eq!(j.get(Coord::new(0, 0)), val("1/3"));
        assert!(!j.is_one());
    }

    #[test]
    fn finite_support_chain_element_is_compact() {
        let s = omega(FactorKind::FiniteChain(3));
        let alpha = Element::zero(&s).with(Coord::new(0, 0), val("1/2")).unwrap();
        assert_eq!(
            is_compact(&alpha),
            CompactnessVerdict {
                compact: true,
                witness: None
            }
        );
    }

    #[test]
    fn nonzero_default_gets_exhaust_witness() {
        let s = omega(FactorKind::FiniteChain(3));
        let alpha = Element::one(&s).with(Coord::new(0, 2), val("1/2")).unwrap();
        let v = is_compact(&alpha);
        assert!(!v.compact);
        let w = v.witness.unwrap();
        assert_eq!(w.family, WitnessFamily::ExhaustFiniteSupport);
        assert_eq!(w.coord_index, 3);
        assert_eq!(w.terms.len(), 8);
        w.verify(&alpha, 64).unwrap();
    }

    #[test]
    fn unit_interval_gets_rational_witness() {
        let s = Arc::new(
            Signature::new(vec![
                crate::signature::Block::new(FactorKind::UnitInterval, Multiplicity::Finite(1)),
                crate::signature::Block::new(FactorKind::FiniteChain(3), Multiplicity::Finite(1)),
            ])
            .unwrap(),
        );
        let alpha = Element::parse_values(&s, &["1", "0"]).unwrap();
        let v = is_compact(&alpha);
        let w = v.witness.expect("not compact");
        assert_eq!(w.family, WitnessFamily::RationalSequence { target: ChainValue::ONE });
        assert_eq!(w.term(&alpha, 1).get(Coord::new(0, 0)), val("1/2"));
        assert_eq!(w.term(&alpha, 3).get(Coord::new(0, 0)), val("3/4"));
        w.verify(&alpha, 64).unwrap();
        // A corrupted witness fails verification.
        let mut bad = w.clone();
        bad.family = WitnessFamily::RationalSequence { target: val("1/2") };
        assert!(bad.verify(&alpha, 8).is_err());
    }

    #[test]
    fn compact_sets() {
        let unit = Arc::new(Signature::power(FactorKind::UnitInterval, Multiplicity::Finite(3)).unwrap());
        let k = compact_elements(&unit, 100);
        assert_eq!(k.description, "{0}");
        assert_eq!(k.elements.unwrap(), vec![Element::zero(&unit)]);
        assert_eq!(compact_elements(&chains(&[3, 4]), 100).elements.unwrap().len(), 12);
        let inf = omega(FactorKind::FiniteChain(3));
        assert_eq!(compact_elements(&inf, 100).description, "finite support");
    }

    #[test]
    fn maximal_compacts() {
        let s = chains(&[3, 3]);
        let m = maximal_compact_elements(&s);
        assert_eq!(m.elements.unwrap(), vec![Element::one(&s)]);
        assert!(!is_maximal_compact(&Element::parse_values(&s, &["1", "0"]).unwrap()));
        let inf = omega(FactorKind::FiniteChain(3));
        let chi03 = chi(&inf, &[Coord::new(0, 0), Coord::new(0, 3)]).unwrap();
        assert!(is_maximal_compact(&chi03));
        assert!(!is_maximal_compact(&Element::one(&inf)));
        let unit = Arc::new(Signature::power(FactorKind::UnitInterval, Multiplicity::CountablyInfinite).unwrap());
        assert_eq!(maximal_compact_elements(&unit).elements.unwrap(), vec![Element::zero(&unit)]);
    }

    #[test]
    fn classification_table() {
        let c = classify(&Signature::chains(&[3, 4]).unwrap());
        assert!(c.algebraic && c.coherent && !c.regular && !c.is_powerset_algebra && c.fip);
        let c = classify(&Signature::power(FactorKind::FiniteChain(2), Multiplicity::CountablyInfinite).unwrap());
        assert!(c.algebraic && c.regular && !c.coherent && c.is_powerset_algebra);
        let c = classify(&Signature::power(FactorKind::UnitInterval, Multiplicity::Finite(2)).unwrap());
        assert!(!c.algebraic && !c.coherent && !c.regular);
        let text = serde_json::to_string(&classify(&Signature::chains(&[3, 4]).unwrap())).unwrap();
        assert_eq!(
            text,
            r#"{"algebraic":true,"coherent":true,"regular":false,"fip":true,"isPowersetAlgebra":false}"#
        );
    }
}
