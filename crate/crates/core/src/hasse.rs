//! Hasse diagrams of small finite algebras in Graphviz DOT.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::element::{enumerate, Element};
use crate::error::Error;
use crate::signature::Signature;

/// Largest carrier drawn.
pub const MAX_HASSE_ELEMENTS: u64 = 200;

/// Covering pairs `(i, j)` with `elements[i] ⋖ elements[j]`, indices into
/// [`enumerate`] order.
pub fn covering_pairs(sig: &Arc<Signature>) -> Result<(Vec<Element>, Vec<(usize, usize)>), Error> {
    let elements = enumerate(sig, MAX_HASSE_ELEMENTS)?;
    let coords = sig.coords().expect("enumerable signatures have finite index sets");
    // Position of every coordinate value in its chain.
    let steps: Vec<Vec<u64>> = elements
        .iter()
        .map(|x| {
            coords
                .iter()
                .map(|&c| {
                    let n = sig.kind_at(c).carrier_size().expect("finite chains only");
                    x.get(c).chain_index(n).expect("values lie in their chain")
                })
                .collect()
        })
        .collect();
    // In a product of chains, y covers x iff they differ in one coordinate,
    // by one step.
    let mut pairs = Vec::new();
    for (i, a) in steps.iter().enumerate() {
        for (j, b) in steps.iter().enumerate() {
            let mut diff = a.iter().zip(b).filter(|(p, q)| p != q);
            if let (Some((p, q)), None) = (diff.next(), diff.next()) {
                if *q == p + 1 {
                    pairs.push((i, j));
                }
            }
        }
    }
    Ok((elements, pairs))
}

/// DOT source: one node per element, labelled by its values, and one edge per
/// covering pair, drawn bottom to top.
pub fn hasse_dot(sig: &Arc<Signature>) -> Result<String, Error> {
    let (elements, pairs) = covering_pairs(sig)?;
    let mut out = String::new();
    writeln!(out, "digraph hasse {{").unwrap();
    writeln!(out, "  label=\"{sig}\";").unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=plaintext];").unwrap();
    for (i, x) in elements.iter().enumerate() {
        writeln!(out, "  n{i} [label=\"{x}\"];").unwrap();
    }
    for (i, j) in pairs {
        writeln!(out, "  n{i} -> n{j};").unwrap();
    }
    writeln!(out, "}}").unwrap();
    Ok(out)
}
