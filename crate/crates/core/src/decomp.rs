//! Modular (Gallai) decomposition, quotients and Dilworth chain covers.
//!
//! The decomposition is the plain recursive one: at each strong module,
//! disconnected comparability graph means a parallel node, disconnected
//! complement means a series node, and otherwise the node is prime and its
//! children are the maximal strong modules, found by closing element pairs
//! under splitters. Children are kept in a deterministic order so the
//! serialized trees are reproducible.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::poset::{Permutation, Poset};

/// Node type in the modular decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    /// Children listed bottom to top; every element of child `i` is below
    /// every element of child `i + 1`.
    Series,
    /// No relations between children; listed by smallest element.
    Parallel,
    /// Children are the maximal strong modules, listed by smallest element;
    /// `quotient` is the (indecomposable) order between them.
    Prime { quotient: Poset },
}

/// One strong module together with its decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GallaiTree {
    pub kind: NodeKind,
    pub children: Vec<GallaiTree>,
    /// The module, 0-based and sorted.
    pub elements: Vec<usize>,
}

impl GallaiTree {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Pre-order traversal of all nodes.
    pub fn nodes(&self) -> Vec<&GallaiTree> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            let node = out[i];
            out.extend(node.children.iter());
            i += 1;
        }
        out
    }

    pub fn prime_quotients(&self) -> impl Iterator<Item = &Poset> {
        self.nodes().into_iter().filter_map(|node| match &node.kind {
            NodeKind::Prime { quotient } => Some(quotient),
            _ => None,
        })
    }

    /// Rebuilds the relation on `[n]` from the tree alone.
    pub fn reconstruct(&self, n: usize) -> Poset {
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        self.fill(&mut up);
        Poset::from_closed_rows(up)
    }

    fn fill(&self, up: &mut [FixedBitSet]) {
        let related = |i: usize, j: usize| match &self.kind {
            NodeKind::Series => i < j,
            NodeKind::Prime { quotient } => quotient.less(i, j),
            _ => false,
        };
        for (i, lo) in self.children.iter().enumerate() {
            for (j, hi) in self.children.iter().enumerate() {
                if i != j && related(i, j) {
                    for &a in &lo.elements {
                        for &b in &hi.elements {
                            up[a].insert(b);
                        }
                    }
                }
            }
        }
        for c in &self.children {
            c.fill(up);
        }
    }
}

/// Parenthesized form: a leaf is its 1-based element id, internal nodes are
/// `(S …)`, `(P …)` or `(X[q] …)`. For prime nodes `q` is a one-line
/// permutation whose poset is the quotient when a two-order realizer is
/// found (children are then printed in the first order of that realizer),
/// otherwise the quotient's cover pairs as `a<b` separated by commas.
impl fmt::Display for GallaiTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            NodeKind::Leaf => write!(f, "{}", self.elements[0] + 1),
            NodeKind::Series | NodeKind::Parallel => {
                f.write_str(if self.kind == NodeKind::Series { "(S" } else { "(P" })?;
                for c in &self.children {
                    write!(f, " {c}")?;
                }
                f.write_str(")")
            }
            NodeKind::Prime { quotient } => {
                let order: Vec<usize> = match two_realizer(quotient, REALIZER_BUDGET) {
                    Some((order, q)) => {
                        write!(f, "(X[{}]", q.to_string().replace(' ', ","))?;
                        order
                    }
                    None => {
                        let covers: Vec<String> = quotient
                            .covers()
                            .iter()
                            .map(|(a, b)| format!("{}<{}", a + 1, b + 1))
                            .collect();
                        write!(f, "(X[{}]", covers.join(","))?;
                        (0..self.children.len()).collect()
                    }
                };
                for i in order {
                    write!(f, " {}", self.children[i])?;
                }
                f.write_str(")")
            }
        }
    }
}

const REALIZER_BUDGET: usize = 200_000;

/// Searches for a realizer of `p` made of two linear orders.
///
/// Returns the first order (as a list of 0-based elements) and the
/// permutation `q` with `D(q)` equal to `p` relabeled along that order.
/// Gives up after `budget` linear extensions have been tried.
pub fn two_realizer(p: &Poset, budget: usize) -> Option<(Vec<usize>, Permutation)> {
    let n = p.len();
    let mut prefix = Vec::with_capacity(n);
    let mut placed = FixedBitSet::with_capacity(n);
    let mut tried = 0;
    search_realizer(p, &mut prefix, &mut placed, &mut tried, budget)
}

fn search_realizer(
    p: &Poset,
    prefix: &mut Vec<usize>,
    placed: &mut FixedBitSet,
    tried: &mut usize,
    budget: usize,
) -> Option<(Vec<usize>, Permutation)> {
    let n = p.len();
    if prefix.len() == n {
        *tried += 1;
        return second_order(p, prefix).map(|q| (prefix.clone(), q));
    }
    for x in 0..n {
        if *tried >= budget {
            return None;
        }
        if placed.contains(x) || !p.below(x).is_subset(placed) {
            continue;
        }
        placed.insert(x);
        prefix.push(x);
        if let Some(found) = search_realizer(p, prefix, placed, tried, budget) {
            return Some(found);
        }
        prefix.pop();
        placed.set(x, false);
    }
    None
}

/// Given a linear extension `first`, the only candidate partner order keeps
/// the relations of `p` and reverses every incomparable pair.
fn second_order(p: &Poset, first: &[usize]) -> Option<Permutation> {
    let n = first.len();
    let mut pos = vec![0; n];
    for (i, &x) in first.iter().enumerate() {
        pos[x] = i;
    }
    let before = |a: usize, b: usize| p.less(a, b) || (!p.less(b, a) && pos[b] < pos[a]);
    // a tournament is transitive iff its score sequence is 0..n-1
    let scores: Vec<usize> = first
        .iter()
        .map(|&a| first.iter().filter(|&&b| b != a && before(b, a)).count())
        .collect();
    let mut sorted = scores.clone();
    sorted.sort_unstable();
    if sorted.iter().enumerate().any(|(i, &s)| i != s) {
        return None;
    }
    Permutation::new(scores.iter().map(|s| s + 1).collect()).ok()
}

/// Decomposes `p` into its tree of strong modules.
///
/// An empty poset yields a parallel node without children.
pub fn gallai_tree(p: &Poset) -> GallaiTree {
    if p.is_empty() {
        return GallaiTree {
            kind: NodeKind::Parallel,
            children: Vec::new(),
            elements: Vec::new(),
        };
    }
    build(p, (0..p.len()).collect())
}

fn build(p: &Poset, elems: Vec<usize>) -> GallaiTree {
    if elems.len() == 1 {
        return GallaiTree {
            kind: NodeKind::Leaf,
            children: Vec::new(),
            elements: elems,
        };
    }
    let mut mask = FixedBitSet::with_capacity(p.len());
    for &e in &elems {
        mask.insert(e);
    }

    let comps = components(p, &elems, &mask, true);
    if comps.len() > 1 {
        return internal(p, NodeKind::Parallel, comps, elems);
    }
    let mut cocomps = components(p, &elems, &mask, false);
    if cocomps.len() > 1 {
        cocomps.sort_by(|a, b| {
            if p.less(a[0], b[0]) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        return internal(p, NodeKind::Series, cocomps, elems);
    }

    let parts = maximal_strong_modules(p, &elems, &mask);
    let reps: Vec<usize> = parts.iter().map(|c| c[0]).collect();
    let quotient = p.restrict_indices(&reps);
    debug_assert!(parts.len() >= 4);
    internal(p, NodeKind::Prime { quotient }, parts, elems)
}

fn internal(p: &Poset, kind: NodeKind, parts: Vec<Vec<usize>>, elems: Vec<usize>) -> GallaiTree {
    GallaiTree {
        kind,
        children: parts.into_iter().map(|c| build(p, c)).collect(),
        elements: elems,
    }
}

/// Connected components of the comparability graph (or its complement) on
/// `elems`, each sorted, listed by smallest element.
fn components(p: &Poset, elems: &[usize], mask: &FixedBitSet, comparability: bool) -> Vec<Vec<usize>> {
    let mut seen = FixedBitSet::with_capacity(p.len());
    let mut out = Vec::new();
    for &start in elems {
        if seen.contains(start) {
            continue;
        }
        seen.insert(start);
        let mut comp = vec![start];
        let mut i = 0;
        while i < comp.len() {
            let x = comp[i];
            i += 1;
            let mut nb = p.above(x).clone();
            nb.union_with(p.below(x));
            if comparability {
                nb.intersect_with(mask);
            } else {
                let mut co = mask.clone();
                co.difference_with(&nb);
                co.set(x, false);
                nb = co;
            }
            nb.difference_with(&seen);
            for y in nb.ones() {
                seen.insert(y);
                comp.push(y);
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn maximal_strong_modules(p: &Poset, elems: &[usize], mask: &FixedBitSet) -> Vec<Vec<usize>> {
    let mut assigned = FixedBitSet::with_capacity(p.len());
    let mut parts = Vec::new();
    for (i, &x) in elems.iter().enumerate() {
        if assigned.contains(x) {
            continue;
        }
        assigned.insert(x);
        let mut part = vec![x];
        for &y in &elems[i + 1..] {
            if assigned.contains(y) {
                continue;
            }
            let mut seed = FixedBitSet::with_capacity(p.len());
            seed.insert(x);
            seed.insert(y);
            if module_closure(p, seed, mask).count_ones(..) < elems.len() {
                assigned.insert(y);
                part.push(y);
            }
        }
        parts.push(part);
    }
    parts
}

/// Smallest module of `p` restricted to `mask` containing `set`.
fn module_closure(p: &Poset, mut set: FixedBitSet, mask: &FixedBitSet) -> FixedBitSet {
    loop {
        let size = set.count_ones(..);
        let mut outside = mask.clone();
        outside.difference_with(&set);
        let splitters: Vec<usize> = outside
            .ones()
            .filter(|&z| {
                let a = p.above(z).intersection_count(&set);
                let b = p.below(z).intersection_count(&set);
                (a != 0 && a != size) || (b != 0 && b != size)
            })
            .collect();
        if splitters.is_empty() {
            return set;
        }
        for z in splitters {
            set.insert(z);
        }
    }
}

fn to_indices(p: &Poset, set: &[usize]) -> Result<Vec<usize>> {
    set.iter()
        .map(|&e| {
            if e == 0 || e > p.len() {
                Err(Error::Range { elem: e, n: p.len() })
            } else {
                Ok(e - 1)
            }
        })
        .collect()
}

/// Whether the 1-based set `t` is a module of `p`.
pub fn is_module(p: &Poset, t: &[usize]) -> Result<bool> {
    let idx = to_indices(p, t)?;
    Ok(is_module_indices(p, &idx))
}

pub(crate) fn is_module_indices(p: &Poset, idx: &[usize]) -> bool {
    let mut set = FixedBitSet::with_capacity(p.len());
    for &i in idx {
        set.insert(i);
    }
    let size = set.count_ones(..);
    (0..p.len()).filter(|z| !set.contains(*z)).all(|z| {
        let a = p.above(z).intersection_count(&set);
        let b = p.below(z).intersection_count(&set);
        (a == 0 || a == size) && (b == 0 || b == size)
    })
}

/// Quotient of `p` by a partition into modules (1-based parts).
///
/// Part `A` precedes part `B` iff the elements of `A` lie below those of `B`.
pub fn quotient(p: &Poset, parts: &[Vec<usize>]) -> Result<Poset> {
    let mut owner = vec![usize::MAX; p.len()];
    let mut idx_parts = Vec::with_capacity(parts.len());
    for (k, part) in parts.iter().enumerate() {
        let idx = to_indices(p, part)?;
        if idx.is_empty() {
            return Err(Error::NotAPartition(format!("part {} is empty", k + 1)));
        }
        for &i in &idx {
            if owner[i] != usize::MAX {
                return Err(Error::NotAPartition(format!("element {} appears twice", i + 1)));
            }
            owner[i] = k;
        }
        idx_parts.push(idx);
    }
    if let Some(missing) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::NotAPartition(format!("element {} is not covered", missing + 1)));
    }
    for (k, idx) in idx_parts.iter().enumerate() {
        if !is_module_indices(p, idx) {
            return Err(Error::NotAModule(k + 1));
        }
    }
    let reps: Vec<usize> = idx_parts.iter().map(|c| c[0]).collect();
    Ok(p.restrict_indices(&reps))
}

/// A set of disjoint chains covering the ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainDecomposition {
    /// Each chain bottom to top, 0-based. Chains are listed by first element.
    pub chains: Vec<Vec<usize>>,
}

impl ChainDecomposition {
    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    /// Checks that the chains are chains of `p` and partition its ground set.
    pub fn covers(&self, p: &Poset) -> bool {
        let mut seen = vec![false; p.len()];
        for c in &self.chains {
            if c.windows(2).any(|w| !p.less(w[0], w[1])) {
                return false;
            }
            for &e in c {
                if e >= p.len() || std::mem::replace(&mut seen[e], true) {
                    return false;
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// One chain per line, 1-based, space separated.
impl fmt::Display for ChainDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.chains {
            let line: Vec<String> = c.iter().map(|e| (e + 1).to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Minimum chain cover from a maximum matching in the split graph of `≺`.
pub fn dilworth(p: &Poset) -> ChainDecomposition {
    let n = p.len();
    let mut match_right: Vec<Option<usize>> = vec![None; n];
    for a in 0..n {
        let mut visited = FixedBitSet::with_capacity(n);
        augment(p, a, &mut visited, &mut match_right);
    }
    let mut next = vec![None; n];
    let mut has_pred = vec![false; n];
    for (b, m) in match_right.iter().enumerate() {
        if let Some(a) = *m {
            next[a] = Some(b);
            has_pred[b] = true;
        }
    }
    let chains = (0..n)
        .filter(|&a| !has_pred[a])
        .map(|start| {
            let mut chain = vec![start];
            let mut cur = start;
            while let Some(b) = next[cur] {
                chain.push(b);
                cur = b;
            }
            chain
        })
        .collect();
    ChainDecomposition { chains }
}

fn augment(p: &Poset, a: usize, visited: &mut FixedBitSet, match_right: &mut [Option<usize>]) -> bool {
    for b in p.above(a).ones() {
        if visited.put(b) {
            continue;
        }
        let free = match match_right[b] {
            None => true,
            Some(owner) => augment(p, owner, visited, match_right),
        };
        if free {
            match_right[b] = Some(a);
            return true;
        }
    }
    false
}

/// Size of the largest antichain.
pub fn width(p: &Poset) -> usize {
    dilworth(p).len()
}

/// Largest width among the prime quotients of the decomposition; 1 when
/// there are none (series-parallel posets), 0 for the empty poset.
pub fn intrinsic_width(p: &Poset) -> usize {
    if p.is_empty() {
        return 0;
    }
    gallai_tree(p).prime_quotients().map(width).max().unwrap_or(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::random_poset;

    fn dperm(v: &[usize]) -> Poset {
        Poset::from_permutation(&Permutation::new(v.to_vec()).unwrap())
    }

    #[test]
    fn module_examples() {
        let p = dperm(&[2, 3, 1]);
        assert!(is_module(&p, &[1]).unwrap());
        assert!(is_module(&p, &[1, 2, 3]).unwrap());
        assert!(!is_module(&p, &[2, 3]).unwrap());
        assert!(is_module(&p, &[]).unwrap());
        assert!(is_module(&p, &[4]).is_err());
    }

    #[test]
    fn series_and_parallel_roots() {
        let t = gallai_tree(&Poset::chain(3));
        assert_eq!(t.kind, NodeKind::Series);
        assert_eq!(t.children.len(), 3);
        assert_eq!(t.to_string(), "(S 1 2 3)");
        let t = gallai_tree(&Poset::antichain(3));
        assert_eq!(t.kind, NodeKind::Parallel);
        assert_eq!(t.to_string(), "(P 1 2 3)");
    }

    #[test]
    fn series_children_follow_the_order() {
        // 3 < {1, 2} < 4 as a series of a point, an antichain and a point
        let p = Poset::from_relations(4, &[(3, 1), (3, 2), (1, 4), (2, 4)]).unwrap();
        assert_eq!(gallai_tree(&p).to_string(), "(S 3 (P 1 2) 4)");
    }

    #[test]
    fn prime_example() {
        let p = dperm(&[2, 4, 1, 3]);
        // oracle: no 2- or 3-subset is a module
        for mask in 0u32..16 {
            let set: Vec<usize> = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
            if (2..=3).contains(&set.len()) {
                assert!(!is_module(&p, &set).unwrap(), "{set:?}");
            }
        }
        let t = gallai_tree(&p);
        assert!(matches!(t.kind, NodeKind::Prime { .. }));
        assert_eq!(t.children.len(), 4);
        assert_eq!(t.to_string(), "(X[2,4,1,3] 1 2 3 4)");
        assert_eq!(intrinsic_width(&p), 2);
    }

    #[test]
    fn prime_without_two_order_realizer_prints_covers() {
        // the standard example S_3 has dimension 3 and is indecomposable
        let p = Poset::from_relations(
            6,
            &[(1, 5), (1, 6), (2, 4), (2, 6), (3, 4), (3, 5)],
        )
        .unwrap();
        assert!(two_realizer(&p, 10_000).is_none());
        let s = gallai_tree(&p).to_string();
        assert!(s.starts_with("(X[1<5,1<6,2<4,2<6,3<4,3<5]"), "{s}");
    }

    #[test]
    fn quotient_examples() {
        let q = quotient(&Poset::chain(4), &[vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(q, Poset::chain(2));
        let q = quotient(&Poset::antichain(4), &[vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(q, Poset::antichain(2));
        let p = random_poset(6, 0.4, 3);
        let singletons: Vec<Vec<usize>> = (1..=6).map(|e| vec![e]).collect();
        assert_eq!(quotient(&p, &singletons).unwrap(), p);
        let p = dperm(&[2, 3, 1]);
        assert!(matches!(
            quotient(&p, &[vec![1], vec![2, 3]]),
            Err(Error::NotAModule(2))
        ));
        assert!(matches!(quotient(&p, &[vec![1], vec![2]]), Err(Error::NotAPartition(_))));
    }

    #[test]
    fn dilworth_examples() {
        assert_eq!(dilworth(&Poset::chain(6)).len(), 1);
        assert_eq!(dilworth(&Poset::antichain(6)).len(), 6);
        let p = dperm(&[2, 4, 1, 3]);
        let cd = dilworth(&p);
        assert!(cd.covers(&p));
        assert_eq!(cd.len(), 2);
    }

    #[test]
    fn reconstruction_and_modules_on_random_posets() {
        for seed in 0..60 {
            let p = random_poset(7, 0.35, seed);
            let t = gallai_tree(&p);
            assert_eq!(t.reconstruct(p.len()), p, "seed {seed}");
            for node in t.nodes() {
                assert!(is_module_indices(&p, &node.elements));
                if let NodeKind::Prime { quotient } = &node.kind {
                    assert!(node.children.len() >= 4);
                    let qt = gallai_tree(quotient);
                    assert!(matches!(qt.kind, NodeKind::Prime { .. }));
                    assert!(qt.children.iter().all(|c| c.kind == NodeKind::Leaf));
                }
            }
        }
    }
}
