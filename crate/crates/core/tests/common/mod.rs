//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use mvframe::ring::{ChainRing, FiniteRing, RingIdeal};
use mvframe::{enumerate, Element, FactorKind, Multiplicity, Signature};

pub fn chains(sizes: &[u64]) -> Arc<Signature> {
    Arc::new(Signature::chains(sizes).unwrap())
}

pub fn power(kind: FactorKind, mult: Multiplicity) -> Arc<Signature> {
    Arc::new(Signature::power(kind, mult).unwrap())
}

/// The small finite algebras every exhaustive suite runs on.
pub fn small_algebras() -> Vec<Arc<Signature>> {
    [&[2][..], &[3], &[4], &[3, 3], &[3, 4]]
        .iter()
        .map(|s| chains(s))
        .collect()
}

pub fn all(sig: &Arc<Signature>) -> Vec<Element> {
    enumerate(sig, 1 << 20).unwrap()
}

pub fn join_of(sig: &Arc<Signature>, xs: &[&Element]) -> Element {
    xs.iter()
        .fold(Element::zero(sig), |acc, x| acc.join(x).unwrap())
}

pub fn meet_of(sig: &Arc<Signature>, xs: &[&Element]) -> Element {
    xs.iter().fold(Element::one(sig), |acc, x| acc.meet(x).unwrap())
}

/// `⋁{x : x ∧ z = 0}` by listing the carrier.
pub fn brute_pseudocomplement(z: &Element, carrier: &[Element]) -> Element {
    let disjoint: Vec<&Element> = carrier
        .iter()
        .filter(|x| x.meet(z).unwrap().is_zero())
        .collect();
    join_of(z.sig(), &disjoint)
}

/// Every subset of the carrier, as index lists.
pub fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u64..1 << n).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
}

pub fn is_directed(carrier: &[Element], d: &[usize]) -> bool {
    !d.is_empty()
        && d.iter().all(|&a| {
            d.iter().all(|&b| {
                d.iter().any(|&c| {
                    carrier[a].leq(&carrier[c]).unwrap() && carrier[b].leq(&carrier[c]).unwrap()
                })
            })
        })
}

/// `x` is compact iff every directed `D` with `x ≤ ⋁D` has some `d ≥ x`.
pub fn brute_compact(x: &Element, carrier: &[Element]) -> bool {
    subsets(carrier.len()).all(|d| {
        if !is_directed(carrier, &d) {
            return true;
        }
        let members: Vec<&Element> = d.iter().map(|&i| &carrier[i]).collect();
        let sup = join_of(x.sig(), &members);
        !x.leq(&sup).unwrap() || members.iter().any(|m| x.leq(m).unwrap())
    })
}

/// Ideals of `ℤ/n` as membership vectors: the additive subgroups `⟨d⟩`.
pub fn cyclic_ideals(n: u64) -> Vec<Vec<bool>> {
    let mut out: Vec<Vec<bool>> = Vec::new();
    for d in 0..n {
        let mut set = vec![false; n as usize];
        let mut x = 0;
        loop {
            set[x as usize] = true;
            x = (x + d) % n;
            if x == 0 {
                break;
            }
        }
        if !out.contains(&set) {
            out.push(set);
        }
    }
    out
}

/// `{x : xᵐ ∈ I for some m}` in `ℤ/n`.
pub fn nil_radical(n: u64, ideal: &[bool]) -> Vec<bool> {
    (0..n)
        .map(|x| {
            let mut y = x % n;
            for _ in 0..=64 {
                if ideal[y as usize] {
                    return true;
                }
                y = y * x % n;
            }
            false
        })
        .collect()
}

/// The ideal `(pᵉ)` of `ℤ/pᵏ` named by a membership vector.
pub fn exponent_of(f: ChainRing, set: &[bool]) -> u32 {
    let size = set.iter().filter(|&&b| b).count() as u64;
    let mut e = f.k;
    while f.p.pow(f.k - e) != size {
        e -= 1;
    }
    e
}

/// Radical of every ideal of a product ring, computed factorwise from
/// nilpotency; ideals of a finite product are products of ideals.
pub fn brute_radicals(ring: &FiniteRing) -> Vec<(RingIdeal, RingIdeal)> {
    let per_factor: Vec<Vec<(u32, u32)>> = ring
        .factors()
        .iter()
        .map(|&f| {
            cyclic_ideals(f.order())
                .iter()
                .map(|i| (exponent_of(f, i), exponent_of(f, &nil_radical(f.order(), i))))
                .collect()
        })
        .collect();
    let mut out = vec![(Vec::new(), Vec::new())];
    for options in &per_factor {
        let mut next = Vec::new();
        for (i, r) in &out {
            for &(e, re) in options {
                let mut i2: Vec<u32> = i.clone();
                let mut r2: Vec<u32> = r.clone();
                i2.push(e);
                r2.push(re);
                next.push((i2, r2));
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|(i, r)| (RingIdeal { exps: i }, RingIdeal { exps: r }))
        .collect()
}

/// All multisets of factors drawn from `pool` with at most `max_ideals`
/// ideals in the product.
pub fn rings_up_to(pool: &[ChainRing], max_ideals: u64) -> Vec<Vec<ChainRing>> {
    fn go(
        pool: &[ChainRing],
        start: usize,
        ideals: u64,
        max: u64,
        cur: &mut Vec<ChainRing>,
        out: &mut Vec<Vec<ChainRing>>,
    ) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for i in start..pool.len() {
            let next = ideals * (pool[i].k as u64 + 1);
            if next <= max {
                cur.push(pool[i]);
                go(pool, i, next, max, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(pool, 0, 1, max_ideals, &mut Vec::new(), &mut out);
    out
}

pub fn ring_pool() -> Vec<ChainRing> {
    [(2, 1), (2, 2), (2, 3), (3, 2), (3, 3), (5, 2)]
        .iter()
        .map(|&(p, k)| ChainRing { p, k })
        .collect()
}
