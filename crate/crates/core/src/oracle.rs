//! Exhaustive reference enumerations.
//!
//! Everything here works by listing objects one by one (set partitions,
//! explicit automorphisms, every tuple of marked leaves) and never touches
//! the generating-function machinery, so it can be used to check it. Sizes
//! are tiny by necessity: the labeled families grow like n!·2.6ⁿ.

use std::collections::{BTreeMap, HashSet};

use crate::cotree::{Cotree, CotreeBuilder, Decoration, NodeId};
use crate::graph::Cograph;

/// Rooted non-plane tree with labeled leaves and no unary node.
#[derive(Clone, Debug)]
pub enum Shape {
    Leaf(u32),
    Node(Vec<Shape>),
}

impl Shape {
    /// Cotree with the given root decoration; deeper decorations alternate.
    pub fn to_cotree(&self, root: Decoration) -> Cotree {
        fn build(s: &Shape, d: Decoration, b: &mut CotreeBuilder) -> NodeId {
            match s {
                Shape::Leaf(l) => b.labeled_leaf(*l),
                Shape::Node(kids) => {
                    let ids: Vec<NodeId> = kids.iter().map(|k| build(k, d.flip(), b)).collect();
                    b.internal(d, &ids)
                }
            }
        }
        let mut b = CotreeBuilder::new();
        build(self, root, &mut b);
        b.finish().expect("shape builds a valid cotree")
    }
}

/// Set partitions of `items` into at least `min_blocks` blocks.
fn set_partitions(items: &[u32], min_blocks: usize) -> Vec<Vec<Vec<u32>>> {
    fn go(items: &[u32], i: usize, blocks: &mut Vec<Vec<u32>>, min_blocks: usize, out: &mut Vec<Vec<Vec<u32>>>) {
        if i == items.len() {
            if blocks.len() >= min_blocks {
                out.push(blocks.clone());
            }
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(items[i]);
            go(items, i + 1, blocks, min_blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![items[i]]);
        go(items, i + 1, blocks, min_blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(items, 0, &mut Vec::new(), min_blocks, &mut out);
    out
}

/// Every tree of the family on the given leaf labels.
pub fn shapes_on(labels: &[u32]) -> Vec<Shape> {
    if labels.len() == 1 {
        return vec![Shape::Leaf(labels[0])];
    }
    let mut out = Vec::new();
    for partition in set_partitions(labels, 2) {
        let choices: Vec<Vec<Shape>> = partition.iter().map(|block| shapes_on(block)).collect();
        // cartesian product over blocks
        let mut acc: Vec<Vec<Shape>> = vec![Vec::new()];
        for options in &choices {
            let mut next = Vec::with_capacity(acc.len() * options.len());
            for prefix in &acc {
                for o in options {
                    let mut p = prefix.clone();
                    p.push(o.clone());
                    next.push(p);
                }
            }
            acc = next;
        }
        out.extend(acc.into_iter().map(Shape::Node));
    }
    out
}

/// All labeled trees with leaves `1..=n` (internal nodes of arity ≥ 2).
pub fn labeled_shapes(n: usize) -> Vec<Shape> {
    let labels: Vec<u32> = (1..=n as u32).collect();
    shapes_on(&labels)
}

/// All labeled canonical cotrees of size `n`.
pub fn labeled_canonical_cotrees(n: usize) -> Vec<Cotree> {
    let shapes = labeled_shapes(n);
    if n == 1 {
        return shapes.iter().map(|s| s.to_cotree(Decoration::Zero)).collect();
    }
    shapes
        .iter()
        .flat_map(|s| [s.to_cotree(Decoration::Zero), s.to_cotree(Decoration::One)])
        .collect()
}

/// One representative per unlabeled canonical cotree of size `n`, sorted by
/// unlabeled encoding.
pub fn unlabeled_canonical_cotrees(n: usize) -> Vec<Cotree> {
    let mut by_key = BTreeMap::new();
    for t in labeled_canonical_cotrees(n) {
        by_key.entry(t.unlabeled_key()).or_insert(t);
    }
    by_key.into_values().map(|t| t.forget_labels()).collect()
}

/// Number of unlabeled trees of the family with `n` leaves.
pub fn unlabeled_tree_count(n: usize) -> usize {
    labeled_shapes(n)
        .iter()
        .map(|s| s.to_cotree(Decoration::Zero).unlabeled_key())
        .collect::<HashSet<_>>()
        .len()
}

/// Every root-preserving automorphism of the tree structure, as a map from
/// node id to node id. Labels are ignored; decorations must match.
pub fn automorphisms(t: &Cotree) -> Vec<Vec<NodeId>> {
    let mut key = vec![String::new(); t.node_count()];
    let mut post: Vec<NodeId> = t.preorder().collect();
    post.reverse();
    for &v in &post {
        key[v] = match t.decoration(v) {
            None => "*".into(),
            Some(d) => {
                let mut parts: Vec<&str> = t.children(v).map(|c| key[c].as_str()).collect();
                parts.sort();
                format!("({d} {})", parts.join(" "))
            }
        };
    }
    // all isomorphisms between subtrees rooted at v and w, as (from, to) lists
    fn isos(t: &Cotree, key: &[String], v: NodeId, w: NodeId) -> Vec<Vec<(NodeId, NodeId)>> {
        if key[v] != key[w] {
            return Vec::new();
        }
        let kv: Vec<NodeId> = t.children(v).collect();
        let kw: Vec<NodeId> = t.children(w).collect();
        let mut out = Vec::new();
        let mut used = vec![false; kw.len()];
        let mut partial = vec![(v, w)];
        fn assign(
            t: &Cotree,
            key: &[String],
            kv: &[NodeId],
            kw: &[NodeId],
            i: usize,
            used: &mut [bool],
            partial: &mut Vec<(NodeId, NodeId)>,
            out: &mut Vec<Vec<(NodeId, NodeId)>>,
        ) {
            if i == kv.len() {
                out.push(partial.clone());
                return;
            }
            for j in 0..kw.len() {
                if used[j] || key[kv[i]] != key[kw[j]] {
                    continue;
                }
                used[j] = true;
                for sub in isos(t, key, kv[i], kw[j]) {
                    let len = partial.len();
                    partial.extend(sub);
                    assign(t, key, kv, kw, i + 1, used, partial, out);
                    partial.truncate(len);
                }
                used[j] = false;
            }
        }
        assign(t, key, &kv, &kw, 0, &mut used, &mut partial, &mut out);
        out
    }
    isos(t, &key, t.root(), t.root())
        .into_iter()
        .map(|pairs| {
            let mut map = vec![usize::MAX; t.node_count()];
            for (a, b) in pairs {
                map[a] = b;
            }
            map
        })
        .collect()
}

/// k-tuples of distinct items.
pub fn tuples_distinct(items: &[NodeId], k: usize) -> Vec<Vec<NodeId>> {
    fn go(items: &[NodeId], k: usize, cur: &mut Vec<NodeId>, out: &mut Vec<Vec<NodeId>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for &x in items {
            if !cur.contains(&x) {
                cur.push(x);
                go(items, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(items, k, &mut Vec::new(), &mut out);
    out
}

/// Number of pairs (labeled canonical cotree of size `n`, k-tuple of
/// distinct leaves) whose induced cotree equals `t0`.
pub fn count_marked_inducing(t0: &Cotree, n: usize) -> u64 {
    let target = t0.canonical_key();
    let k = t0.leaf_count();
    let mut count = 0;
    for t in labeled_canonical_cotrees(n) {
        let leaves: Vec<NodeId> = t.leaves().collect();
        for tuple in tuples_distinct(&leaves, k) {
            if t.induced_cotree(&tuple).unwrap().canonical_key() == target {
                count += 1;
            }
        }
    }
    count
}

/// Nodes an automorphism must fix for a marked tuple to count: the first
/// common ancestors of marked leaves and their children leading to a marked
/// leaf.
fn constrained_nodes(t: &Cotree, tuple: &[NodeId]) -> Vec<NodeId> {
    let mut branching = HashSet::new();
    for (i, &a) in tuple.iter().enumerate() {
        for &b in &tuple[i + 1..] {
            branching.insert(t.first_common_ancestor(a, b));
        }
    }
    let mut out: Vec<NodeId> = branching.iter().copied().collect();
    for &v in &branching {
        for c in t.children(v) {
            if tuple.iter().any(|&l| t.is_ancestor(c, l)) {
                out.push(c);
            }
        }
    }
    out
}

/// Number of triples (labeled canonical cotree of size `n`, root-preserving
/// automorphism, k-tuple of distinct leaves) such that the leaves induce
/// `t0` and the automorphism fixes every constrained node.
pub fn count_marked_inducing_with_automorphism(t0: &Cotree, n: usize) -> u64 {
    let target = t0.canonical_key();
    let k = t0.leaf_count();
    let mut count = 0;
    for t in labeled_canonical_cotrees(n) {
        let auts = automorphisms(&t);
        let leaves: Vec<NodeId> = t.leaves().collect();
        for tuple in tuples_distinct(&leaves, k) {
            if t.induced_cotree(&tuple).unwrap().canonical_key() != target {
                continue;
            }
            let fixed = constrained_nodes(&t, &tuple);
            count += auts.iter().filter(|a| fixed.iter().all(|&v| a[v] == v)).count() as u64;
        }
    }
    count
}

/// Counts of trees of size `n` (leaves `1..=n`) carrying one extra unlabeled
/// marked leaf: (all, marked leaf at even depth, at odd depth).
pub fn blossom_counts(n: usize) -> (u64, u64, u64) {
    let blossom = n as u32 + 1;
    let (mut even, mut odd) = (0, 0);
    for s in labeled_shapes(n + 1) {
        let t = s.to_cotree(Decoration::Zero);
        let leaf = t.leaves().find(|&l| t.label(l) == Some(blossom)).unwrap();
        if t.depth(leaf) % 2 == 0 {
            even += 1;
        } else {
            odd += 1;
        }
    }
    (even + odd, even, odd)
}

/// Pairs (tree with leaves `1..=n` plus a blossom, automorphism fixing the
/// blossom), split by blossom depth parity: (all, even, odd).
pub fn fixed_blossom_automorphism_counts(n: usize) -> (u64, u64, u64) {
    let blossom = n as u32 + 1;
    let (mut even, mut odd) = (0, 0);
    for s in labeled_shapes(n + 1) {
        let t = s.to_cotree(Decoration::Zero);
        let leaf = t.leaves().find(|&l| t.label(l) == Some(blossom)).unwrap();
        let fixing = automorphisms(&t).iter().filter(|a| a[leaf] == leaf).count() as u64;
        if t.depth(leaf) % 2 == 0 {
            even += fixing;
        } else {
            odd += fixing;
        }
    }
    (even + odd, even, odd)
}

/// Pairs (tree of size `n ≥ 2`, automorphism) in which no child of the root
/// is fixed.
pub fn no_fixed_root_child_count(n: usize) -> u64 {
    let mut count = 0;
    for s in labeled_shapes(n) {
        let t = s.to_cotree(Decoration::Zero);
        if t.is_leaf(t.root()) {
            continue;
        }
        let kids: Vec<NodeId> = t.children(t.root()).collect();
        count += automorphisms(&t).iter().filter(|a| kids.iter().all(|&c| a[c] != c)).count() as u64;
    }
    count
}

/// Minimum number of vertices whose removal disconnects `g` (or leaves a
/// single vertex), by trying every vertex subset.
pub fn vertex_connectivity_brute(g: &Cograph) -> usize {
    let n = g.n();
    assert!(n <= 20);
    let mut best = n.saturating_sub(1);
    for mask in 0u32..1 << n {
        let removed = mask.count_ones() as usize;
        if removed >= best {
            continue;
        }
        let keep: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 0).collect();
        if keep.len() >= 2 && !g.induced_subgraph(&keep).unwrap().is_connected() {
            best = removed;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schroeder_numbers() {
        let counts: Vec<usize> = (1..=7).map(|n| labeled_shapes(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 26, 236, 2752, 39208]);
    }

    #[test]
    fn unlabeled_counts() {
        let counts: Vec<usize> = (1..=6).map(unlabeled_tree_count).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 12, 33]);
        assert_eq!(unlabeled_canonical_cotrees(4).len(), 10);
    }

    #[test]
    fn star_automorphisms() {
        let t = Cotree::star(Decoration::One, 4);
        assert_eq!(automorphisms(&t).len(), 24);
        let t: Cotree = "(0 (1 1 2) (1 3 4))".parse().unwrap();
        assert_eq!(automorphisms(&t).len(), 8);
        let t: Cotree = "(0 1 (1 2 3))".parse().unwrap();
        assert_eq!(automorphisms(&t).len(), 2);
    }

    #[test]
    fn brute_connectivity() {
        assert_eq!(vertex_connectivity_brute(&Cograph::complete(5)), 4);
        assert_eq!(vertex_connectivity_brute(&Cograph::path(3)), 1);
        let c4 = Cograph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(vertex_connectivity_brute(&c4), 2);
    }
}
