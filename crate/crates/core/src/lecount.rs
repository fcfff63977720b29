//! Linear-extension counting and automorphisms of two-dimensional posets.
//!
//! `e(P)` is computed two ways. [`count_le_downset_dp`] walks the lattice of
//! down-sets of a Dilworth chain cover, where each down-set is named by how
//! far it reaches into every chain, and sums extension counts over covered
//! down-sets. [`count_linear_extensions`] recurses on the modular
//! decomposition instead: series nodes multiply, parallel nodes multiply and
//! shuffle (a multinomial), and prime nodes multiply by the extension count
//! of their quotient with each child inflated to a chain. Inflating a
//! quotient by chains keeps its width, so the down-set pass on a prime node
//! stays polynomial for bounded intrinsic width.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::combin::{factorial, multinomial};
use crate::decomp::{dilworth, gallai_tree, ChainDecomposition, GallaiTree, NodeKind};
use crate::error::{Error, Result};
use crate::par::{self, Strategy};
use crate::poset::{next_permutation, Permutation, Poset};

/// A linear-extension or automorphism count.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtensionCount(pub BigUint);

impl ExtensionCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }
}

impl From<u64> for ExtensionCount {
    fn from(v: u64) -> Self {
        ExtensionCount(BigUint::from(v))
    }
}

impl From<BigUint> for ExtensionCount {
    fn from(v: BigUint) -> Self {
        ExtensionCount(v)
    }
}

impl PartialEq<u64> for ExtensionCount {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl fmt::Display for ExtensionCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Default cap on the projected down-set count `∏(|C_i| + 1)`.
pub const DEFAULT_DOWNSET_BUDGET: u128 = 4_000_000;

/// Default size limit for the exhaustive oracles.
pub const DEFAULT_ORACLE_BUDGET: usize = 9;

/// The down-sets of a poset, each named by its chain-prefix vector.
#[derive(Clone, Debug)]
pub struct DownSetLattice {
    pub chains: ChainDecomposition,
    /// `keys[i][c]` is how many elements of chain `c` node `i` contains.
    /// Nodes are stored by increasing size; node 0 is the empty set.
    pub keys: Vec<Vec<u32>>,
    /// Down-sets covered by each node (one maximal element removed).
    pub children: Vec<Vec<usize>>,
    index: HashMap<Vec<u32>, usize>,
}

impl DownSetLattice {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn index_of(&self, key: &[u32]) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// `∏(|C_i| + 1)`, the bound on the node count.
    pub fn projected_size(&self) -> u128 {
        projected(&self.chains)
    }

    /// The full down-set (the whole poset).
    pub fn top(&self) -> usize {
        self.keys.len() - 1
    }

    /// Elements of node `i`, 0-based and sorted.
    pub fn members(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .chains
            .chains
            .iter()
            .zip(&self.keys[i])
            .flat_map(|(c, &h)| c[..h as usize].iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// The lattice ordered by strict inclusion.
    pub fn to_poset(&self) -> Poset {
        let keys = &self.keys;
        Poset::from_fn(keys.len(), |a, b| {
            a != b && keys[a].iter().zip(&keys[b]).all(|(x, y)| x <= y)
        })
    }
}

fn projected(cd: &ChainDecomposition) -> u128 {
    cd.chains
        .iter()
        .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128 + 1))
}

/// Builds every down-set of `p` from the chain cover `cd`.
///
/// Starting from the empty set, a down-set `D` extends by the least unused
/// element `x` of chain `c` iff no chain's least unused element lies below
/// `x`.
pub fn downset_lattice(p: &Poset, cd: &ChainDecomposition) -> Result<DownSetLattice> {
    downset_lattice_with_budget(p, cd, DEFAULT_DOWNSET_BUDGET)
}

pub fn downset_lattice_with_budget(p: &Poset, cd: &ChainDecomposition, budget: u128) -> Result<DownSetLattice> {
    assert!(cd.covers(p), "chain decomposition does not cover the poset");
    let projected = projected(cd);
    if projected > budget {
        return Err(Error::MemoryBudget { projected, budget });
    }
    let k = cd.len();
    let mut keys = vec![vec![0u32; k]];
    let mut children = vec![Vec::new()];
    let mut index = HashMap::new();
    index.insert(vec![0u32; k], 0usize);
    let mut i = 0;
    while i < keys.len() {
        let key = keys[i].clone();
        let next: Vec<Option<usize>> = (0..k).map(|c| cd.chains[c].get(key[c] as usize).copied()).collect();
        for c in 0..k {
            let Some(x) = next[c] else { continue };
            if next.iter().flatten().any(|&y| p.less(y, x)) {
                continue;
            }
            let mut grown = key.clone();
            grown[c] += 1;
            let j = *index.entry(grown.clone()).or_insert_with(|| {
                keys.push(grown);
                children.push(Vec::new());
                keys.len() - 1
            });
            children[j].push(i);
        }
        i += 1;
    }
    Ok(DownSetLattice {
        chains: cd.clone(),
        keys,
        children,
        index,
    })
}

/// `e(P)` by the down-set recurrence `f(D) = Σ_{D' ⋖ D} f(D')`, `f(∅) = 1`.
pub fn count_le_downset_dp(p: &Poset) -> Result<ExtensionCount> {
    count_le_downset_dp_with_budget(p, DEFAULT_DOWNSET_BUDGET)
}

pub fn count_le_downset_dp_with_budget(p: &Poset, budget: u128) -> Result<ExtensionCount> {
    let lattice = downset_lattice_with_budget(p, &dilworth(p), budget)?;
    Ok(ExtensionCount(extensions_on(&lattice)))
}

fn extensions_on(lattice: &DownSetLattice) -> BigUint {
    let mut f: Vec<BigUint> = Vec::with_capacity(lattice.len());
    f.push(BigUint::one());
    for kids in &lattice.children[1..] {
        let mut acc = BigUint::ZERO;
        for &c in kids {
            acc += &f[c];
        }
        f.push(acc);
    }
    f.pop().expect("lattice has at least the empty down-set")
}

/// Replaces element `i` of `quotient` by a chain of `sizes[i]` elements.
///
/// Blocks are numbered consecutively in element order. Panics if the
/// lengths disagree.
pub fn inflate(quotient: &Poset, sizes: &[usize]) -> Poset {
    assert_eq!(quotient.len(), sizes.len(), "one size per quotient element");
    let mut block = Vec::new();
    for (i, &s) in sizes.iter().enumerate() {
        block.extend(std::iter::repeat_n(i, s));
    }
    Poset::from_fn(block.len(), |a, b| {
        let (x, y) = (block[a], block[b]);
        if x == y {
            a < b
        } else {
            quotient.less(x, y)
        }
    })
}

/// `e(P)` by recursion on the modular decomposition.
pub fn count_linear_extensions(p: &Poset) -> Result<ExtensionCount> {
    count_linear_extensions_with_budget(p, DEFAULT_DOWNSET_BUDGET)
}

pub fn count_linear_extensions_with_budget(p: &Poset, budget: u128) -> Result<ExtensionCount> {
    if p.is_empty() {
        return Ok(ExtensionCount(BigUint::one()));
    }
    extensions_of_node(&gallai_tree(p), budget).map(ExtensionCount)
}

fn extensions_of_node(node: &GallaiTree, budget: u128) -> Result<BigUint> {
    let mut acc = BigUint::one();
    for c in &node.children {
        acc *= extensions_of_node(c, budget)?;
    }
    let sizes: Vec<usize> = node.children.iter().map(GallaiTree::len).collect();
    match &node.kind {
        NodeKind::Leaf | NodeKind::Series => {}
        NodeKind::Parallel => acc *= multinomial(&sizes),
        NodeKind::Prime { quotient } => {
            let inflated = inflate(quotient, &sizes);
            acc *= count_le_downset_dp_with_budget(&inflated, budget)?.0;
        }
    }
    Ok(acc)
}

/// Counts linear extensions of many posets, one result per input.
pub fn count_many(posets: &[Poset], strategy: Strategy) -> Vec<Result<ExtensionCount>> {
    par::map(strategy, posets, count_linear_extensions)
}

/// Byte string identifying a two-dimensional poset up to isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(pub Vec<u8>);

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(&self.0))
    }
}

/// Canonical code of `D(σ)`.
///
/// Series nodes list child codes bottom to top, parallel nodes sort them,
/// and prime nodes take the smaller of the two encodings given by the two
/// orders of their (unique) realizer.
pub fn canonical_code(sigma: &Permutation) -> CanonicalCode {
    let tree = gallai_tree(&Poset::from_permutation(sigma));
    CanonicalCode(analyze(&tree, sigma.values()).code)
}

/// `|Aut(D(σ))|` by recursion on the modular decomposition.
///
/// Parallel nodes may permute isomorphic children among themselves; a prime
/// node has at most one nontrivial quotient automorphism, the inverse of its
/// quotient permutation, and it lifts only when it pairs up isomorphic
/// children.
pub fn count_automorphisms_dim2(sigma: &Permutation) -> ExtensionCount {
    if sigma.is_empty() {
        return ExtensionCount(BigUint::one());
    }
    let tree = gallai_tree(&Poset::from_permutation(sigma));
    ExtensionCount(analyze(&tree, sigma.values()).auts)
}

struct Analysis {
    code: Vec<u8>,
    auts: BigUint,
}

fn analyze(node: &GallaiTree, sigma: &[usize]) -> Analysis {
    if node.kind == NodeKind::Leaf {
        return Analysis {
            code: b"L".to_vec(),
            auts: BigUint::one(),
        };
    }
    let kids: Vec<Analysis> = node.children.iter().map(|c| analyze(c, sigma)).collect();
    let mut auts = kids.iter().fold(BigUint::one(), |acc, k| acc * &k.auts);
    let mut code = Vec::new();
    match &node.kind {
        NodeKind::Leaf => unreachable!(),
        NodeKind::Series => {
            code.extend_from_slice(b"S(");
            for k in &kids {
                code.extend_from_slice(&k.code);
            }
            code.push(b')');
        }
        NodeKind::Parallel => {
            let mut codes: Vec<&[u8]> = kids.iter().map(|k| k.code.as_slice()).collect();
            codes.sort_unstable();
            for group in codes.chunk_by(|a, b| a == b) {
                auts *= factorial(group.len());
            }
            code.extend_from_slice(b"P(");
            for c in codes {
                code.extend_from_slice(c);
            }
            code.push(b')');
        }
        NodeKind::Prime { quotient } => {
            let reps: Vec<usize> = node.children.iter().map(|c| sigma[c.elements[0]]).collect();
            let rho = Permutation::from_ranks(&reps).expect("distinct values");
            let rho_inv = rho.inverse();
            let tau: Vec<usize> = rho_inv.values().iter().map(|v| v - 1).collect();
            let k = tau.len();
            let lifts = !rho_inv.is_identity()
                && (0..k).all(|i| (0..k).all(|j| quotient.less(i, j) == quotient.less(tau[i], tau[j])))
                && (0..k).all(|i| kids[i].code == kids[tau[i]].code);
            if lifts {
                auts *= 2u32;
            }
            let by_first: Vec<&[u8]> = kids.iter().map(|k| k.code.as_slice()).collect();
            let by_second: Vec<&[u8]> = tau.iter().map(|&i| kids[i].code.as_slice()).collect();
            let a = prime_code(&rho, &by_first);
            let b = prime_code(&rho_inv, &by_second);
            code = a.min(b);
        }
    }
    Analysis { code, auts }
}

fn prime_code(q: &Permutation, kids: &[&[u8]]) -> Vec<u8> {
    let mut code = format!("X[{}](", q.to_string().replace(' ', ",")).into_bytes();
    for c in kids {
        code.extend_from_slice(c);
    }
    code.push(b')');
    code
}

/// Runs `check` on every permutation of `0..n` (as an image vector), split
/// on the first entry so the halves can run in parallel.
fn count_permutations(n: usize, strategy: Strategy, check: impl Fn(&[usize]) -> bool + Sync + Send) -> u64 {
    if n == 0 {
        return check(&[]) as u64;
    }
    par::sum_range(strategy, n, |first| {
        let mut perm: Vec<usize> = std::iter::once(first).chain((0..n).filter(|&x| x != first)).collect();
        let mut hits = 0;
        loop {
            hits += check(&perm) as u64;
            if !next_permutation(&mut perm[1..]) {
                break;
            }
        }
        hits
    })
}

fn oracle_guard(p: &Poset, budget: usize) -> Result<()> {
    if p.len() > budget {
        return Err(Error::SizeLimit {
            what: "exhaustive oracle",
            size: p.len() as u128,
            limit: budget as u128,
        });
    }
    Ok(())
}

/// `e(P)` by testing all `n!` total orders.
pub fn count_le_bruteforce(p: &Poset) -> Result<ExtensionCount> {
    count_le_bruteforce_with(p, DEFAULT_ORACLE_BUDGET, Strategy::default())
}

pub fn count_le_bruteforce_with(p: &Poset, budget: usize, strategy: Strategy) -> Result<ExtensionCount> {
    oracle_guard(p, budget)?;
    let rels: Vec<(usize, usize)> = p.relations().collect();
    let hits = count_permutations(p.len(), strategy, |order| {
        let mut pos = [0usize; 64];
        for (i, &x) in order.iter().enumerate() {
            pos[x] = i;
        }
        rels.iter().all(|&(a, b)| pos[a] < pos[b])
    });
    Ok(ExtensionCount::from(hits))
}

/// `|Aut(P)|` by testing all `n!` bijections.
pub fn count_automorphisms_bruteforce(p: &Poset) -> Result<ExtensionCount> {
    count_automorphisms_bruteforce_with(p, DEFAULT_ORACLE_BUDGET, Strategy::default())
}

pub fn count_automorphisms_bruteforce_with(p: &Poset, budget: usize, strategy: Strategy) -> Result<ExtensionCount> {
    oracle_guard(p, budget)?;
    let rels: Vec<(usize, usize)> = p.relations().collect();
    let hits = count_permutations(p.len(), strategy, |f| rels.iter().all(|&(a, b)| p.less(f[a], f[b])));
    Ok(ExtensionCount::from(hits))
}

/// Whether some bijection carries the relation of `p` exactly onto that of `q`.
pub fn isomorphic_bruteforce(p: &Poset, q: &Poset) -> Result<bool> {
    oracle_guard(p, DEFAULT_ORACLE_BUDGET)?;
    if p.len() != q.len() || p.relation_count() != q.relation_count() {
        return Ok(false);
    }
    let rels: Vec<(usize, usize)> = p.relations().collect();
    // an injective relation-preserving map between equal-size relations is onto them
    let hits = count_permutations(p.len(), Strategy::Sequential, |f| {
        rels.iter().all(|&(a, b)| q.less(f[a], f[b]))
    });
    Ok(hits > 0)
}
