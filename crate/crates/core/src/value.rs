//! Exact values in `[0,1]` and the two kinds of factors they live in.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A reduced fraction `num/den` with `0 <= num <= den`.
///
/// Values of a finite chain `Ł_n` are the fractions `k/(n-1)`; values of the
/// unit interval are arbitrary rationals in `[0,1]`. Equality is structural on
/// the reduced form.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChainValue {
    num: u64,
    den: u64,
}

impl ChainValue {
    pub const ZERO: ChainValue = ChainValue { num: 0, den: 1 };
    pub const ONE: ChainValue = ChainValue { num: 1, den: 1 };

    /// Builds `num/den`, reducing it. Fails if the value is outside `[0,1]`.
    pub fn new(num: u64, den: u64) -> Result<Self, Error> {
        if den == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        if num > den {
            return Err(Error::ValueOutOfRange(format!("{num}/{den}")));
        }
        Ok(Self::reduced(num as u128, den as u128))
    }

    fn reduced(num: u128, den: u128) -> Self {
        if num == 0 {
            return Self::ZERO;
        }
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        Self {
            num: u64::try_from(num).expect("numerator overflow"),
            den: u64::try_from(den).expect("denominator overflow"),
        }
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn is_one(self) -> bool {
        self.num == self.den
    }

    /// Truncated sum `min(1, x + y)`.
    pub fn oplus(self, other: Self) -> Self {
        let (a, b) = (self.num as u128, self.den as u128);
        let (c, d) = (other.num as u128, other.den as u128);
        let num = a * d + c * b;
        let den = b * d;
        if num >= den {
            Self::ONE
        } else {
            Self::reduced(num, den)
        }
    }

    /// `1 - x`.
    pub fn neg(self) -> Self {
        Self::reduced((self.den - self.num) as u128, self.den as u128)
    }

    /// Scales by a natural number and truncates at 1 (`n·x` in MV notation).
    pub fn times(self, n: u64) -> Self {
        let num = self.num as u128 * n as u128;
        if num >= self.den as u128 {
            Self::ONE
        } else {
            Self::reduced(num, self.den as u128)
        }
    }

    /// Exact product `x·y` (used for witness sequences, not an MV operation).
    pub fn mul(self, other: Self) -> Self {
        Self::reduced(
            self.num as u128 * other.num as u128,
            self.den as u128 * other.den as u128,
        )
    }

    /// Exact difference `x - y`, `None` when negative.
    pub fn checked_sub(self, other: Self) -> Option<Self> {
        let lhs = self.num as u128 * other.den as u128;
        let rhs = other.num as u128 * self.den as u128;
        (lhs >= rhs).then(|| Self::reduced(lhs - rhs, self.den as u128 * other.den as u128))
    }

    /// `⌈x·n⌉ / n`: rounds up to the grid of step `1/n`.
    pub fn round_up_to_grid(self, n: u64) -> Self {
        let scaled = self.num as u128 * n as u128;
        let k = scaled.div_ceil(self.den as u128);
        Self::reduced(k, n as u128)
    }

    /// True when `x = k/(n-1)` for some integer `k`, i.e. `x ∈ Ł_n`.
    pub fn in_chain(self, n: u64) -> bool {
        n >= 2 && (n - 1) % self.den == 0
    }

    /// Returns `k` with `x = k/(n-1)`, if `x ∈ Ł_n`.
    pub fn chain_index(self, n: u64) -> Option<u64> {
        self.in_chain(n).then(|| self.num * ((n - 1) / self.den))
    }
}

impl Ord for ChainValue {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for ChainValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Default for ChainValue {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Display for ChainValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for ChainValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ChainValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad fraction {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n = n.trim().parse().map_err(|_| bad())?;
                let d = d.trim().parse().map_err(|_| bad())?;
                ChainValue::new(n, d)
            }
            None => ChainValue::new(s.parse().map_err(|_| bad())?, 1),
        }
    }
}

impl Serialize for ChainValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ChainValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The factor an index of a product ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorKind {
    /// `Ł_n = {0, 1/(n-1), …, 1}`, `n ≥ 2`.
    FiniteChain(u64),
    /// Rational points of the standard MV-algebra `[0,1]`.
    UnitInterval,
}

impl FactorKind {
    pub fn chain(n: u64) -> Result<Self, Error> {
        if n < 2 {
            return Err(Error::Parse(format!("chain size must be at least 2, got {n}")));
        }
        Ok(FactorKind::FiniteChain(n))
    }

    pub fn contains(self, v: ChainValue) -> bool {
        match self {
            FactorKind::FiniteChain(n) => v.in_chain(n),
            FactorKind::UnitInterval => true,
        }
    }

    pub fn is_chain(self) -> bool {
        matches!(self, FactorKind::FiniteChain(_))
    }

    /// Number of carrier values, `None` for the unit interval.
    pub fn carrier_size(self) -> Option<u64> {
        match self {
            FactorKind::FiniteChain(n) => Some(n),
            FactorKind::UnitInterval => None,
        }
    }

    /// Carrier values in increasing order; `None` for the unit interval.
    pub fn carrier(self) -> Option<Vec<ChainValue>> {
        match self {
            FactorKind::FiniteChain(n) => Some(
                (0..n)
                    .map(|k| ChainValue::reduced(k as u128, (n - 1) as u128))
                    .collect(),
            ),
            FactorKind::UnitInterval => None,
        }
    }

    /// Smallest nonzero value of a chain (its atom).
    pub fn atom(self) -> Option<ChainValue> {
        match self {
            FactorKind::FiniteChain(n) => Some(ChainValue::reduced(1, (n - 1) as u128)),
            FactorKind::UnitInterval => None,
        }
    }

    /// Whether the value-preserving inclusion `self → target` is an MV-embedding.
    pub fn embeds_into(self, target: FactorKind) -> bool {
        match (self, target) {
            (FactorKind::FiniteChain(n), FactorKind::FiniteChain(m)) => (m - 1) % (n - 1) == 0,
            (_, FactorKind::UnitInterval) => true,
            (FactorKind::UnitInterval, FactorKind::FiniteChain(_)) => false,
        }
    }
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorKind::FiniteChain(n) => write!(f, "Ł{n}"),
            FactorKind::UnitInterval => write!(f, "[0,1]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> ChainValue {
        s.parse().unwrap()
    }

    #[test]
    fn parsing_reduces() {
        assert_eq!(v("2/4"), v("1/2"));
        assert_eq!(v("0/7"), ChainValue::ZERO);
        assert_eq!(v("3/3"), ChainValue::ONE);
        assert_eq!(v("2/4").to_string(), "1/2");
        assert!("3/2".parse::<ChainValue>().is_err());
        assert!("1/0".parse::<ChainValue>().is_err());
        assert!("x".parse::<ChainValue>().is_err());
    }

    #[test]
    fn truncated_sum_and_negation() {
        assert_eq!(v("1/2").oplus(v("1/2")), ChainValue::ONE);
        assert_eq!(v("1/3").oplus(v("1/4")), v("7/12"));
        assert_eq!(v("1/3").neg(), v("2/3"));
        assert_eq!(v("1/2").neg(), v("1/2"));
        assert_eq!(v("1/3").times(2), v("2/3"));
        assert_eq!(v("1/3").times(3), ChainValue::ONE);
    }

    #[test]
    fn chain_membership() {
        assert!(v("1/2").in_chain(3));
        assert!(v("1/2").in_chain(5));
        assert!(!v("1/2").in_chain(4));
        assert_eq!(v("2/3").chain_index(4), Some(2));
        assert_eq!(v("1/2").chain_index(5), Some(2));
        assert_eq!(
            FactorKind::FiniteChain(3).carrier().unwrap(),
            vec![ChainValue::ZERO, v("1/2"), ChainValue::ONE]
        );
    }

    #[test]
    fn grid_rounding() {
        // Ł_5 values k/4 rounded up to halves.
        let got: Vec<_> = FactorKind::FiniteChain(5)
            .carrier()
            .unwrap()
            .into_iter()
            .map(|x| x.round_up_to_grid(2))
            .collect();
        let want: Vec<_> = ["0", "1/2", "1/2", "1", "1"].iter().map(|s| v(s)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn embeddings() {
        assert!(FactorKind::FiniteChain(3).embeds_into(FactorKind::FiniteChain(5)));
        assert!(!FactorKind::FiniteChain(3).embeds_into(FactorKind::FiniteChain(4)));
        assert!(FactorKind::FiniteChain(4).embeds_into(FactorKind::UnitInterval));
        assert!(!FactorKind::UnitInterval.embeds_into(FactorKind::FiniteChain(4)));
    }
}
