//! Finite Łukasiewicz rings `∏ ℤ/pᵏ`, their ideal lattices as MV-frames, and
//! the radical nucleus.
//!
//! Ring-side operations are computed from residues: each factor's ideals,
//! annihilators, products and prime ideals are found by brute force over
//! `ℤ/pᵏ`, and ideals of the product are tuples of factor ideals.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::element::Element;
use crate::error::Error;
use crate::nucleus::{
    classify_nucleus, compact_approximation_join, FixedValues, NucleusClassification,
    NucleusKind, NucleusSpec,
};
use crate::signature::{Block, Multiplicity, Signature};
use crate::value::{ChainValue, FactorKind};

/// Largest `pᵏ` accepted for a factor.
pub const MAX_FACTOR_ORDER: u64 = 1024;

/// The chain ring `ℤ/pᵏ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainRing {
    pub p: u64,
    pub k: u32,
}

impl ChainRing {
    pub fn order(self) -> u64 {
        self.p.pow(self.k)
    }
}

impl fmt::Display for ChainRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ℤ/{}", self.order())
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Ideal structure of one factor, indexed by generator exponent `e`
/// (`(pᵉ)`, so `e = 0` is the whole factor and `e = k` the zero ideal).
#[derive(Debug)]
struct FactorTables {
    ring: ChainRing,
    /// `subset[a][b]`: `(pᵃ) ⊆ (pᵇ)`.
    subset: Vec<Vec<bool>>,
    ann: Vec<u32>,
    prod: Vec<Vec<u32>>,
    primes: Vec<u32>,
    maximal: Vec<u32>,
}

impl FactorTables {
    fn new(ring: ChainRing) -> Self {
        let q = ring.order();
        let qs = q as usize;
        let principal = |g: u64| -> Vec<bool> {
            let mut set = vec![false; qs];
            for r in 0..q {
                set[(g * r % q) as usize] = true;
            }
            set
        };
        // Every ideal of ℤ/q is principal; collect them all and index them
        // by the exponent of p in their generator.
        let mut ideals: Vec<Vec<bool>> = Vec::new();
        for g in 0..q {
            let s = principal(g);
            if !ideals.contains(&s) {
                ideals.push(s);
            }
        }
        let by_exp: Vec<Vec<bool>> = (0..=ring.k).map(|e| principal(ring.p.pow(e) % q)).collect();
        assert_eq!(ideals.len(), by_exp.len(), "ℤ/pᵏ has k+1 ideals");
        assert!(ideals.iter().all(|s| by_exp.contains(s)));
        let index = |set: &[bool]| -> u32 {
            by_exp.iter().position(|s| s == set).expect("an ideal") as u32
        };
        let members = |set: &[bool]| -> Vec<u64> {
            (0..q).filter(|&r| set[r as usize]).collect()
        };
        let n = by_exp.len();
        let subset: Vec<Vec<bool>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| (0..qs).all(|r| !by_exp[a][r] || by_exp[b][r]))
                    .collect()
            })
            .collect();
        let ann = (0..n)
            .map(|e| {
                let i = members(&by_exp[e]);
                let mut set = vec![false; qs];
                for r in 0..q {
                    set[r as usize] = i.iter().all(|&s| r * s % q == 0);
                }
                index(&set)
            })
            .collect();
        // The ideal generated by all products ab: the smallest ideal
        // containing them.
        let prod = (0..n)
            .map(|a| {
                let ia = members(&by_exp[a]);
                (0..n)
                    .map(|b| {
                        let ib = members(&by_exp[b]);
                        let products: Vec<u64> = ia
                            .iter()
                            .flat_map(|&x| ib.iter().map(move |&y| x * y % q))
                            .collect();
                        (0..n)
                            .filter(|&e| products.iter().all(|&r| by_exp[e][r as usize]))
                            .max()
                            .expect("the whole ring contains everything")
                            as u32
                    })
                    .collect()
            })
            .collect();
        let proper = |e: usize| by_exp[e].iter().any(|&m| !m);
        let primes = (0..n)
            .filter(|&e| {
                proper(e)
                    && (0..q).all(|a| {
                        (0..q).all(|b| {
                            !by_exp[e][(a * b % q) as usize]
                                || by_exp[e][a as usize]
                                || by_exp[e][b as usize]
                        })
                    })
            })
            .map(|e| e as u32)
            .collect();
        let maximal = (0..n)
            .filter(|&e| {
                proper(e)
                    && !(0..n).any(|f| f != e && proper(f) && subset[e][f] && !subset[f][e])
            })
            .map(|e| e as u32)
            .collect();
        Self {
            ring,
            subset,
            ann,
            prod,
            primes,
            maximal,
        }
    }

    /// `(pᵃ) ∩ (pᵇ)`; the factor's ideals form a chain.
    fn meet(&self, a: u32, b: u32) -> u32 {
        if self.subset[a as usize][b as usize] {
            a
        } else {
            b
        }
    }

    /// Coordinate of `(pᵉ)` in `Ł_{k+1}`: `(k − e)/k`.
    fn value(&self, e: u32) -> ChainValue {
        ChainValue::new((self.ring.k - e) as u64, self.ring.k as u64).unwrap()
    }
}

/// An ideal of a product ring, as one generator exponent per factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingIdeal {
    pub exps: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct FiniteRing {
    factors: Vec<ChainRing>,
    tables: Vec<Arc<FactorTables>>,
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}

impl Eq for FiniteRing {}

impl FiniteRing {
    pub fn new(factors: Vec<ChainRing>) -> Result<Self, Error> {
        if factors.is_empty() {
            return Err(Error::BadParameter("a ring needs at least one factor".into()));
        }
        let mut tables: Vec<Arc<FactorTables>> = Vec::new();
        for &f in &factors {
            if !is_prime(f.p) || f.k == 0 {
                return Err(Error::BadParameter(format!(
                    "factor ℤ/{}^{} needs a prime p and k ≥ 1",
                    f.p, f.k
                )));
            }
            if f.p.checked_pow(f.k).map_or(true, |q| q > MAX_FACTOR_ORDER) {
                return Err(Error::BadParameter(format!(
                    "factor order {}^{} exceeds {MAX_FACTOR_ORDER}",
                    f.p, f.k
                )));
            }
            let t = match tables.iter().find(|t| t.ring == f) {
                Some(t) => t.clone(),
                None => Arc::new(FactorTables::new(f)),
            };
            tables.push(t);
        }
        Ok(Self { factors, tables })
    }

    pub fn factors(&self) -> &[ChainRing] {
        &self.factors
    }

    pub fn ideal_count(&self) -> u128 {
        self.factors
            .iter()
            .map(|f| f.k as u128 + 1)
            .fold(1u128, u128::saturating_mul)
    }

    /// `∏ Ł_{kᵢ+1}`, consecutive factors with equal `k` sharing a block, so
    /// coordinate order is factor order.
    pub fn ideal_signature(&self) -> Arc<Signature> {
        let mut blocks: Vec<Block> = Vec::new();
        for f in &self.factors {
            let kind = FactorKind::FiniteChain(f.k as u64 + 1);
            match blocks.last_mut() {
                Some(Block {
                    kind: last,
                    mult: Multiplicity::Finite(m),
                }) if *last == kind => *m += 1,
                _ => blocks.push(Block::new(kind, Multiplicity::Finite(1))),
            }
        }
        Arc::new(Signature::new(blocks).expect("chains of size at least 2"))
    }

    fn check(&self, i: &RingIdeal) -> Result<(), Error> {
        let ok = i.exps.len() == self.factors.len()
            && i.exps.iter().zip(&self.factors).all(|(&e, f)| e <= f.k);
        if ok {
            Ok(())
        } else {
            Err(Error::BadParameter(format!("{:?} is not an ideal of {self}", i.exps)))
        }
    }

    pub fn zero_ideal(&self) -> RingIdeal {
        RingIdeal {
            exps: self.factors.iter().map(|f| f.k).collect(),
        }
    }

    pub fn whole_ring(&self) -> RingIdeal {
        RingIdeal {
            exps: vec![0; self.factors.len()],
        }
    }

    /// Every ideal, last factor varying fastest.
    pub fn ideals(&self, bound: u64) -> Result<Vec<RingIdeal>, Error> {
        let size = self.ideal_count();
        if size > bound as u128 {
            return Err(Error::CarrierTooLarge { size, bound });
        }
        let mut out = Vec::with_capacity(size as usize);
        self.for_each_ideal(|e| out.push(RingIdeal { exps: e.to_vec() }));
        Ok(out)
    }

    /// Ideals in the order of [`enumerate`](crate::enumerate) on the ideal
    /// signature (coordinate value ascending, so exponent descending).
    fn for_each_ideal(&self, mut f: impl FnMut(&[u32])) {
        let mut exps: Vec<u32> = self.factors.iter().map(|f| f.k).collect();
        loop {
            f(&exps);
            let mut pos = exps.len();
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                if exps[pos] > 0 {
                    exps[pos] -= 1;
                    break;
                }
                exps[pos] = self.factors[pos].k;
            }
        }
    }

    /// `I ⊆ J`.
    pub fn is_subset(&self, i: &RingIdeal, j: &RingIdeal) -> bool {
        self.tables
            .iter()
            .zip(i.exps.iter().zip(&j.exps))
            .all(|(t, (&a, &b))| t.subset[a as usize][b as usize])
    }

    pub fn intersection(&self, i: &RingIdeal, j: &RingIdeal) -> RingIdeal {
        RingIdeal {
            exps: self
                .tables
                .iter()
                .zip(i.exps.iter().zip(&j.exps))
                .map(|(t, (&a, &b))| t.meet(a, b))
                .collect(),
        }
    }

    /// `Ann(I) = {r : rI = 0}`.
    pub fn annihilator(&self, i: &RingIdeal) -> RingIdeal {
        RingIdeal {
            exps: self
                .tables
                .iter()
                .zip(&i.exps)
                .map(|(t, &e)| t.ann[e as usize])
                .collect(),
        }
    }

    pub fn product(&self, i: &RingIdeal, j: &RingIdeal) -> RingIdeal {
        RingIdeal {
            exps: self
                .tables
                .iter()
                .zip(i.exps.iter().zip(&j.exps))
                .map(|(t, (&a, &b))| t.prod[a as usize][b as usize])
                .collect(),
        }
    }

    /// `I ⊕ J = Ann(Ann(I)·Ann(J))`.
    pub fn oplus(&self, i: &RingIdeal, j: &RingIdeal) -> RingIdeal {
        self.annihilator(&self.product(&self.annihilator(i), &self.annihilator(j)))
    }

    /// Prime ideals of the product: a prime of one factor times the other
    /// factors.
    pub fn prime_ideals(&self) -> Vec<RingIdeal> {
        self.lift(|t| &t.primes)
    }

    pub fn maximal_ideals(&self) -> Vec<RingIdeal> {
        self.lift(|t| &t.maximal)
    }

    fn lift(&self, pick: impl Fn(&FactorTables) -> &Vec<u32>) -> Vec<RingIdeal> {
        let mut out = Vec::new();
        for (i, t) in self.tables.iter().enumerate() {
            for &e in pick(t) {
                let mut exps = vec![0; self.factors.len()];
                exps[i] = e;
                out.push(RingIdeal { exps });
            }
        }
        out
    }

    /// `√I`: the intersection of the prime ideals containing `I`.
    pub fn radical(&self, i: &RingIdeal) -> RingIdeal {
        self.prime_ideals()
            .iter()
            .filter(|p| self.is_subset(i, p))
            .fold(self.whole_ring(), |acc, p| self.intersection(&acc, p))
    }

    pub fn to_element(&self, i: &RingIdeal) -> Result<Element, Error> {
        self.check(i)?;
        let vals: Vec<ChainValue> = self
            .tables
            .iter()
            .zip(&i.exps)
            .map(|(t, &e)| t.value(e))
            .collect();
        Element::from_values(&self.ideal_signature(), &vals)
    }

    pub fn from_element(&self, x: &Element) -> Result<RingIdeal, Error> {
        let sig = self.ideal_signature();
        if **x.sig() != *sig {
            return Err(Error::SignatureMismatch);
        }
        let exps = sig
            .coords()
            .unwrap()
            .into_iter()
            .zip(&self.factors)
            .map(|(c, f)| {
                let v = x.get(c);
                let k = f.k as u64;
                // v = a/b with b | k.
                (k - v.num() * (k / v.den())) as u32
            })
            .collect();
        Ok(RingIdeal { exps })
    }

    /// Generator tuple, e.g. `(2)` or `(4, 1)`.
    pub fn display_ideal(&self, i: &RingIdeal) -> String {
        let gens: Vec<String> = self
            .factors
            .iter()
            .zip(&i.exps)
            .map(|(f, &e)| (f.p.pow(e) % f.order()).to_string())
            .collect();
        format!("({})", gens.join(", "))
    }

    /// The closed-form radical on the ideal frame.
    pub fn radical_nucleus(&self) -> NucleusSpec {
        NucleusSpec::builtin(NucleusKind::Radical, &self.ideal_signature())
            .expect("ideal signatures are chain products")
    }

    pub fn radical_on_frame(&self, f: &Element) -> Result<Element, Error> {
        self.radical_nucleus().apply(f)
    }
}

impl fmt::Display for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|r| r.to_string()).collect();
        f.write_str(&parts.join(" × "))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FiniteRingRepr {
    factors: Vec<ChainRing>,
}

impl Serialize for FiniteRing {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FiniteRingRepr {
            factors: self.factors.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteRing {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        FiniteRing::new(FiniteRingRepr::deserialize(d)?.factors).map_err(serde::de::Error::custom)
    }
}

/// Whether ring-side `¬`, `⊕` and inclusion match the frame operations under
/// `(pᵉ) ↦ (k − e)/k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MvCheckReport {
    pub ring: String,
    pub signature: String,
    pub ideals: u64,
    pub pairs_checked: u64,
    pub exhaustive: bool,
    pub order_isomorphism: bool,
    pub annihilator_is_negation: bool,
    pub oplus_matches: bool,
    pub counterexample: Option<String>,
}

impl MvCheckReport {
    pub fn holds(&self) -> bool {
        self.order_isomorphism && self.annihilator_is_negation && self.oplus_matches
    }
}

pub fn mv_check(ring: &FiniteRing, cfg: &Config) -> Result<MvCheckReport, Error> {
    let ideals = ring.ideals(cfg.enumeration_bound)?;
    let elems: Vec<Element> = ideals
        .iter()
        .map(|i| ring.to_element(i))
        .collect::<Result<_, _>>()?;
    let n = ideals.len();
    let mut counterexample = None;
    let mut note = |ok: bool, msg: &dyn Fn() -> String| {
        if !ok && counterexample.is_none() {
            counterexample = Some(msg());
        }
        ok
    };
    // Bijectivity: distinct ideals land on distinct elements, and there are
    // as many ideals as elements.
    let mut sorted = elems.clone();
    sorted.sort_by_key(|e| e.to_string());
    sorted.dedup();
    let sig = ring.ideal_signature();
    let mut order = note(
        sorted.len() == n && sig.carrier_size() == Some(n as u128),
        &|| "ideal map is not a bijection".into(),
    );
    let mut neg = true;
    for (i, x) in ideals.iter().zip(&elems) {
        let ok = ring.to_element(&ring.annihilator(i))? == x.neg();
        neg &= note(ok, &|| format!("Ann{} does not match ¬", ring.display_ideal(i)));
    }
    let mut rng = cfg.rng();
    let exhaustive = (n as u64).saturating_mul(n as u64) <= cfg.pair_budget;
    let pairs: Vec<(usize, usize)> = if exhaustive {
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect()
    } else {
        (0..cfg.samples)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect()
    };
    let mut oplus = true;
    for &(a, b) in &pairs {
        let (i, j) = (&ideals[a], &ideals[b]);
        let ok = ring.to_element(&ring.oplus(i, j))? == elems[a].oplus(&elems[b])?;
        oplus &= note(ok, &|| {
            format!("{} ⊕ {} does not match", ring.display_ideal(i), ring.display_ideal(j))
        });
        let ok = ring.is_subset(i, j) == elems[a].leq(&elems[b])?;
        order &= note(ok, &|| {
            format!("inclusion of {} in {} is not preserved", ring.display_ideal(i), ring.display_ideal(j))
        });
    }
    Ok(MvCheckReport {
        ring: ring.to_string(),
        signature: sig.to_string(),
        ideals: n as u64,
        pairs_checked: pairs.len() as u64,
        exhaustive,
        order_isomorphism: order,
        annihilator_is_negation: neg,
        oplus_matches: oplus,
        counterexample,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RadicalRow {
    pub ideal: String,
    pub element: String,
    pub radical: String,
    pub radical_element: String,
}

/// The radical as a nucleus on `Id(R)`, checked against the ring.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RadicalReport {
    pub ring: String,
    pub signature: String,
    pub ideals: u64,
    pub classification: NucleusClassification,
    /// Ring-side `√I` equals the closed form at every ideal.
    pub ring_matches_closed_form: bool,
    /// Expected density: every exponent is 1.
    pub dense_expected: bool,
    /// The fixed points are `{(n−2)/(n−1), 1}` in each coordinate.
    pub nuclear_matches_closed_form: bool,
    /// Expected MV-type: every factor is a field.
    pub subalgebra_expected: bool,
    /// `√f = ⋁{√α : α compact, α ≤ f}` checked literally at every ideal; run
    /// only for rings with at most 64 ideals.
    pub inductive_decomposition: Option<bool>,
    pub rows: Vec<RadicalRow>,
    pub counterexample: Option<String>,
}

impl RadicalReport {
    /// All ring-theoretic expectations hold.
    pub fn verified(&self) -> bool {
        let c = &self.classification;
        c.is_nucleus
            && c.is_inductive.is_yes()
            && self.ring_matches_closed_form
            && c.is_dense == self.dense_expected
            && self.nuclear_matches_closed_form
            && c.is_mv_type == self.subalgebra_expected
            && self.inductive_decomposition != Some(false)
    }
}

pub fn radical_report(ring: &FiniteRing, cfg: &Config) -> Result<RadicalReport, Error> {
    let n = ring.ideal_count();
    if n > cfg.enumeration_bound as u128 {
        return Err(Error::CarrierTooLarge {
            size: n,
            bound: cfg.enumeration_bound,
        });
    }
    let sig = ring.ideal_signature();
    let j = ring.radical_nucleus();
    let classification = classify_nucleus(&j, cfg);

    // Ring side against the closed form, coordinate by coordinate. The
    // closed form is tabulated per factor as a generator exponent.
    let closed: Vec<Vec<u32>> = ring
        .tables
        .iter()
        .map(|t| {
            let kind = FactorKind::FiniteChain(t.ring.k as u64 + 1);
            (0..=t.ring.k)
                .map(|e| {
                    let v = NucleusKind::Radical.coordinate_map(kind, t.value(e)).unwrap();
                    (0..=t.ring.k).find(|&r| t.value(r) == v).unwrap()
                })
                .collect()
        })
        .collect();
    let primes = ring.prime_ideals();
    let mut matches = true;
    let mut counterexample = None;
    let mut rad: Vec<u32> = vec![0; ring.factors.len()];
    ring.for_each_ideal(|exps| {
        if !matches {
            return;
        }
        rad.fill(0);
        for p in &primes {
            let contained = ring
                .tables
                .iter()
                .zip(exps.iter().zip(&p.exps))
                .all(|(t, (&a, &b))| t.subset[a as usize][b as usize]);
            if contained {
                for (f, t) in ring.tables.iter().enumerate() {
                    rad[f] = t.meet(rad[f], p.exps[f]);
                }
            }
        }
        if let Some(f) = (0..exps.len()).find(|&f| rad[f] != closed[f][exps[f] as usize]) {
            matches = false;
            counterexample = Some(format!("√ of {exps:?} differs at factor {f}"));
        }
    });

    let nuclear_matches = classification.nuclear.blocks.as_ref().is_some_and(|blocks| {
        blocks.iter().all(|bf| {
            let FactorKind::FiniteChain(m) = sig.block(bf.block).kind else { return false };
            let mut expected = vec![ChainValue::new(m - 2, m - 1).unwrap(), ChainValue::ONE];
            expected.dedup();
            bf.fixed == FixedValues::Values { values: expected }
        })
    });

    let all_ideals = if n <= 64 { ring.ideals(64)? } else { Vec::new() };
    let inductive_decomposition = (n <= 64).then(|| {
        let literal = Config {
            enumeration_bound: 64,
            ..cfg.clone()
        };
        all_ideals.iter().all(|i| {
            let f = ring.to_element(i).unwrap();
            compact_approximation_join(&j, &f, &literal) == Some(j.apply(&f).unwrap())
        })
    });

    let row = |i: &RingIdeal| -> Result<RadicalRow, Error> {
        let r = ring.radical(i);
        Ok(RadicalRow {
            ideal: ring.display_ideal(i),
            element: ring.to_element(i)?.to_string(),
            radical: ring.display_ideal(&r),
            radical_element: ring.to_element(&r)?.to_string(),
        })
    };
    let rows = if n <= 64 {
        all_ideals.iter().map(row).collect::<Result<_, _>>()?
    } else {
        vec![row(&ring.zero_ideal())?]
    };

    Ok(RadicalReport {
        ring: ring.to_string(),
        signature: sig.to_string(),
        ideals: n as u64,
        classification,
        ring_matches_closed_form: matches,
        dense_expected: ring.factors.iter().all(|f| f.k == 1),
        nuclear_matches_closed_form: nuclear_matches,
        subalgebra_expected: ring.factors.iter().all(|f| f.k == 1),
        inductive_decomposition,
        rows,
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(fs: &[(u64, u32)]) -> FiniteRing {
        FiniteRing::new(fs.iter().map(|&(p, k)| ChainRing { p, k }).collect()).unwrap()
    }

    fn ideal(exps: &[u32]) -> RingIdeal {
        RingIdeal {
            exps: exps.to_vec(),
        }
    }

    #[test]
    fn z8_ideal_lattice() {
        let r = ring(&[(2, 3)]);
        assert_eq!(*r.ideal_signature(), Signature::chains(&[4]).unwrap());
        let vals: Vec<String> = [3, 2, 1, 0]
            .iter()
            .map(|&e| r.to_element(&ideal(&[e])).unwrap().to_string())
            .collect();
        assert_eq!(vals, ["0", "1/3", "2/3", "1"]);
        assert_eq!(r.annihilator(&ideal(&[1])), ideal(&[2]));
        assert_eq!(r.annihilator(&r.zero_ideal()), r.whole_ring());
        assert_eq!(r.oplus(&ideal(&[2]), &ideal(&[2])), ideal(&[1]));
        let rad = r.radical(&r.zero_ideal());
        assert_eq!(r.display_ideal(&rad), "(2)");
        assert_eq!(r.to_element(&rad).unwrap().to_string(), "2/3");
        assert_eq!(r.prime_ideals(), r.maximal_ideals());
    }

    #[test]
    fn signatures_group_equal_exponents() {
        assert_eq!(ring(&[(2, 1)]).ideal_signature().to_string(), "Ł2");
        assert_eq!(ring(&[(2, 2), (3, 2)]).ideal_signature().to_string(), "Ł3^2");
        assert_eq!(ring(&[(2, 2), (5, 1), (3, 2)]).ideal_signature().to_string(), "Ł3 × Ł2 × Ł3");
    }

    #[test]
    fn round_trip_through_elements() {
        let r = ring(&[(2, 2), (3, 1), (5, 2)]);
        for i in r.ideals(1000).unwrap() {
            assert_eq!(r.from_element(&r.to_element(&i).unwrap()).unwrap(), i);
        }
        let order: Vec<Element> = r
            .ideals(1000)
            .unwrap()
            .iter()
            .map(|i| r.to_element(i).unwrap())
            .collect();
        assert_eq!(order, crate::enumerate(&r.ideal_signature(), 1000).unwrap());
    }

    #[test]
    fn bad_factors_are_rejected() {
        assert!(FiniteRing::new(vec![ChainRing { p: 4, k: 1 }]).is_err());
        assert!(FiniteRing::new(vec![ChainRing { p: 2, k: 0 }]).is_err());
        assert!(FiniteRing::new(vec![ChainRing { p: 2, k: 11 }]).is_err());
        assert!(FiniteRing::new(vec![]).is_err());
        assert!(serde_json::from_str::<FiniteRing>(r#"{"factors":[{"p":2,"k":3,"x":1}]}"#).is_err());
        let r: FiniteRing = serde_json::from_str(r#"{"factors":[{"p":2,"k":3}]}"#).unwrap();
        assert_eq!(r, ring(&[(2, 3)]));
    }

    #[test]
    fn radical_reports() {
        let cfg = Config::default();
        let z8 = radical_report(&ring(&[(2, 3)]), &cfg).unwrap();
        assert!(z8.verified(), "{z8:?}");
        assert!(!z8.classification.is_dense);
        assert_eq!(z8.inductive_decomposition, Some(true));
        let fields = radical_report(&ring(&[(2, 1), (3, 1)]), &cfg).unwrap();
        assert!(fields.verified() && fields.classification.is_dense);
        let z4 = radical_report(&ring(&[(2, 2)]), &cfg).unwrap();
        assert!(z4.verified());
        assert!(!z4.classification.is_mv_type);
        assert_eq!(
            z4.classification.nuclear.blocks.unwrap()[0].fixed,
            FixedValues::Values {
                values: vec!["1/2".parse().unwrap(), ChainValue::ONE]
            }
        );
    }

    #[test]
    fn mv_operations_commute() {
        let cfg = Config::default();
        let rep = mv_check(&ring(&[(2, 2), (3, 2)]), &cfg).unwrap();
        assert!(rep.holds() && rep.exhaustive, "{rep:?}");
        let rep = mv_check(&ring(&[(2, 3), (3, 3), (5, 2)]), &cfg).unwrap();
        assert!(rep.holds(), "{rep:?}");
    }
}
