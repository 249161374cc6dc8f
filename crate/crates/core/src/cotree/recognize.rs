//! Cograph recognition by the complement-connectivity recursion: split a
//! disconnected vertex set into its components under a 0-node, a connected
//! one into the components of its complement under a 1-node. A set of two or
//! more vertices that is connected with a connected complement means the
//! graph has an induced P4.

use super::{Cotree, CotreeBuilder, CotreeError, Decoration, NodeId};
use crate::graph::Cograph;

/// Components of `g[set]` (or of its complement when `complemented`), each
/// in increasing vertex order, ordered by smallest vertex.
fn components(g: &Cograph, set: &[usize], complemented: bool) -> Vec<Vec<usize>> {
    let n = g.n();
    let words = n.div_ceil(64);
    let mut remaining = vec![0u64; words];
    for &v in set {
        remaining[v / 64] |= 1 << (v % 64);
    }
    let mut parts = Vec::new();
    for &start in set {
        if remaining[start / 64] >> (start % 64) & 1 == 0 {
            continue;
        }
        remaining[start / 64] &= !(1 << (start % 64));
        let mut part = vec![start];
        let mut head = 0;
        while head < part.len() {
            let v = part[head];
            head += 1;
            let mut adj = vec![0u64; words];
            for w in g.neighbors(v) {
                adj[w / 64] |= 1 << (w % 64);
            }
            for (i, word) in remaining.iter_mut().enumerate() {
                let hit = if complemented { *word & !adj[i] } else { *word & adj[i] };
                let mut bits = hit;
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    part.push(i * 64 + b);
                }
                *word &= !hit;
            }
        }
        part.sort_unstable();
        parts.push(part);
    }
    parts
}

impl Cotree {
    /// The unique canonical cotree of `g`, with leaf label `v + 1` for
    /// vertex `v`.
    pub fn canonical_cotree_of(g: &Cograph) -> Result<Cotree, CotreeError> {
        if g.n() == 0 {
            return Err(CotreeError::NotACograph { vertices: Vec::new() });
        }
        enum Task {
            Split(Vec<usize>),
            Build(Decoration, usize),
        }
        let mut b = CotreeBuilder::with_capacity(g.n());
        let mut done: Vec<NodeId> = Vec::new();
        let mut tasks = vec![Task::Split((0..g.n()).collect())];
        while let Some(task) = tasks.pop() {
            match task {
                Task::Split(set) => {
                    if set.len() == 1 {
                        done.push(b.labeled_leaf(set[0] as u32 + 1));
                        continue;
                    }
                    let mut parts = components(g, &set, false);
                    let mut dec = Decoration::Zero;
                    if parts.len() == 1 {
                        parts = components(g, &set, true);
                        dec = Decoration::One;
                        if parts.len() == 1 {
                            return Err(CotreeError::NotACograph { vertices: set });
                        }
                    }
                    tasks.push(Task::Build(dec, parts.len()));
                    tasks.extend(parts.into_iter().rev().map(Task::Split));
                }
                Task::Build(dec, arity) => {
                    let kids = done.split_off(done.len() - arity);
                    done.push(b.internal(dec, &kids));
                }
            }
        }
        Ok(b.finish_unchecked())
    }
}
