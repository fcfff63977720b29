//! Ground types: finite posets, permutations, occurrence flavors and maps.
//!
//! A [`Poset`] stores the strict part of a partial order as a transitively
//! closed relation, one bitset row per element in each direction. Element
//! numbering is 1-based in every external form (constructor pairs, files,
//! printed maps) and 0-based for the row accessors.

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// A strict partial order on `n` elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
}

impl Poset {
    /// Transitive closure of the given strict relations (1-based pairs).
    pub fn from_relations(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for &(a, b) in pairs {
            for e in [a, b] {
                if e == 0 || e > n {
                    return Err(Error::Range { elem: e, n });
                }
            }
            if a == b {
                return Err(Error::Cycle(a));
            }
            up[a - 1].insert(b - 1);
        }
        close(&mut up);
        if let Some(a) = (0..n).find(|&a| up[a].contains(a)) {
            return Err(Error::Cycle(a + 1));
        }
        Ok(Self::from_closed_rows(up))
    }

    /// Builds a poset from rows already known to be a strict, closed order.
    pub(crate) fn from_closed_rows(up: Vec<FixedBitSet>) -> Self {
        let n = up.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (a, row) in up.iter().enumerate() {
            for b in row.ones() {
                down[b].insert(a);
            }
        }
        debug_assert!((0..n).all(|a| !up[a].contains(a)));
        Poset { n, up, down }
    }

    /// Builds a poset from a predicate on 0-based pairs that is already a
    /// strict partial order.
    pub(crate) fn from_fn(n: usize, less: impl Fn(usize, usize) -> bool) -> Self {
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (a, row) in up.iter_mut().enumerate() {
            for b in 0..n {
                if a != b && less(a, b) {
                    row.insert(b);
                }
            }
        }
        Self::from_closed_rows(up)
    }

    /// `D(σ)`: `i ≺ j` iff `i < j` and `σ(i) < σ(j)`.
    pub fn from_permutation(sigma: &Permutation) -> Self {
        let v = sigma.values();
        Self::from_fn(v.len(), |i, j| i < j && v[i] < v[j])
    }

    pub fn chain(n: usize) -> Self {
        Self::from_fn(n, |i, j| i < j)
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_fn(n, |_, _| false)
    }

    /// Places every element of `parts[i]` below every element of `parts[i+1]`.
    pub fn ordinal_sum(parts: &[Poset]) -> Self {
        let (offsets, n) = offsets(parts);
        let block = block_of(parts, n);
        Self::from_fn(n, |a, b| {
            let (pa, pb) = (block[a], block[b]);
            pa < pb || (pa == pb && parts[pa].less(a - offsets[pa], b - offsets[pa]))
        })
    }

    pub fn disjoint_union(parts: &[Poset]) -> Self {
        let (offsets, n) = offsets(parts);
        let block = block_of(parts, n);
        Self::from_fn(n, |a, b| {
            let (pa, pb) = (block[a], block[b]);
            pa == pb && parts[pa].less(a - offsets[pa], b - offsets[pa])
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `a ≺ b`, 0-based.
    #[inline]
    pub fn less(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    #[inline]
    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.less(a, b) || self.less(b, a)
    }

    /// Elements strictly above `a` (0-based).
    pub fn above(&self, a: usize) -> &FixedBitSet {
        &self.up[a]
    }

    /// Elements strictly below `a` (0-based).
    pub fn below(&self, a: usize) -> &FixedBitSet {
        &self.down[a]
    }

    /// All related pairs `(a, b)` with `a ≺ b`, 0-based.
    pub fn relations(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |a| self.up[a].ones().map(move |b| (a, b)))
    }

    pub fn relation_count(&self) -> usize {
        self.up.iter().map(|r| r.count_ones(..)).sum()
    }

    /// Cover pairs, 0-based, in lexicographic order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in self.up[a].ones() {
                // b covers a unless something sits strictly between them
                if self.up[a].is_disjoint(&self.down[b]) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Elements sorted so that every relation points forward.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&a| (self.down[a].count_ones(..), a));
        order
    }

    /// Induced subposet on a 1-based element set, relabeled in natural order.
    pub fn restrict(&self, subset: &[usize]) -> Result<Poset> {
        let mut idx = Vec::with_capacity(subset.len());
        for &e in subset {
            if e == 0 || e > self.n {
                return Err(Error::Range { elem: e, n: self.n });
            }
            idx.push(e - 1);
        }
        idx.sort_unstable();
        idx.dedup();
        Ok(self.restrict_indices(&idx))
    }

    /// Induced subposet on 0-based indices, in the order given.
    pub fn restrict_indices(&self, idx: &[usize]) -> Poset {
        Self::from_fn(idx.len(), |a, b| self.less(idx[a], idx[b]))
    }

    /// Parses the `p <n>` / `r <a> <b>` text format.
    pub fn parse(text: &str) -> Result<Poset> {
        let mut n = None;
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut tok = line.split_whitespace();
            match (tok.next(), n) {
                (Some("p"), None) => {
                    let v = parse_usize(tok.next(), line_no)?;
                    n = Some(v);
                }
                (Some("p"), Some(_)) => return Err(Error::format(line_no, "duplicate header")),
                (Some("r"), Some(size)) => {
                    let a = parse_usize(tok.next(), line_no)?;
                    let b = parse_usize(tok.next(), line_no)?;
                    if a == 0 || a > size || b == 0 || b > size {
                        return Err(Error::format(line_no, format!("element out of 1..={size}")));
                    }
                    pairs.push((a, b));
                }
                (Some("r"), None) => return Err(Error::format(line_no, "relation before header")),
                (Some(other), _) => {
                    return Err(Error::format(line_no, format!("unknown record `{other}`")))
                }
                (None, _) => unreachable!(),
            }
            if tok.next().is_some() {
                return Err(Error::format(line_no, "trailing tokens"));
            }
        }
        let n = n.ok_or_else(|| Error::format(0, "missing `p <n>` header"))?;
        Poset::from_relations(n, &pairs)
    }
}

impl FromStr for Poset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Poset::parse(s)
    }
}

/// Writes the cover relation in the `p`/`r` file format.
impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p {}", self.n)?;
        for (a, b) in self.covers() {
            writeln!(f, "r {} {}", a + 1, b + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<_> = self.covers().into_iter().map(|(a, b)| (a + 1, b + 1)).collect();
        f.debug_struct("Poset").field("n", &self.n).field("covers", &covers).finish()
    }
}

fn close(up: &mut [FixedBitSet]) {
    let n = up.len();
    for k in 0..n {
        let row_k = up[k].clone();
        for row in up.iter_mut() {
            if row.contains(k) {
                row.union_with(&row_k);
            }
        }
    }
}

fn offsets(parts: &[Poset]) -> (Vec<usize>, usize) {
    let mut offs = Vec::with_capacity(parts.len());
    let mut n = 0;
    for p in parts {
        offs.push(n);
        n += p.len();
    }
    (offs, n)
}

fn block_of(parts: &[Poset], n: usize) -> Vec<usize> {
    let mut block = Vec::with_capacity(n);
    for (i, p) in parts.iter().enumerate() {
        block.extend(std::iter::repeat_n(i, p.len()));
    }
    block
}

fn parse_usize(tok: Option<&str>, line: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::format(line, "missing integer"))?;
    tok.parse()
        .map_err(|_| Error::format(line, format!("`{tok}` is not a nonnegative integer")))
}

/// A bijection of `[n]`, stored in one-line notation with 1-based values.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    img: Vec<usize>,
}

impl Permutation {
    pub fn new(img: Vec<usize>) -> Result<Self> {
        let n = img.len();
        let mut seen = vec![false; n];
        for &v in &img {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::format(1, format!("{img:?} is not a permutation of 1..={n}")));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { img })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            img: (1..=n).collect(),
        }
    }

    pub fn reversal(n: usize) -> Self {
        Permutation {
            img: (1..=n).rev().collect(),
        }
    }

    /// Replaces each entry by its 1-based rank. Fails on ties.
    pub fn from_ranks<T: Ord>(seq: &[T]) -> Result<Self> {
        let mut order: Vec<usize> = (0..seq.len()).collect();
        order.sort_by(|&a, &b| seq[a].cmp(&seq[b]));
        if order.windows(2).any(|w| seq[w[0]] == seq[w[1]]) {
            return Err(Error::format(1, "sequence has repeated values"));
        }
        let mut img = vec![0; seq.len()];
        for (rank, &pos) in order.iter().enumerate() {
            img[pos] = rank + 1;
        }
        Ok(Permutation { img })
    }

    pub fn len(&self) -> usize {
        self.img.len()
    }

    pub fn is_empty(&self) -> bool {
        self.img.is_empty()
    }

    /// One-line notation, 1-based values indexed by 0-based position.
    pub fn values(&self) -> &[usize] {
        &self.img
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.img.len()];
        for (i, &v) in self.img.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation { img: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// Pattern of the entries at the given 0-based positions.
    pub fn restrict_positions(&self, positions: &[usize]) -> Permutation {
        let vals: Vec<usize> = positions.iter().map(|&p| self.img[p]).collect();
        Permutation::from_ranks(&vals).expect("entries of a permutation are distinct")
    }

    /// All permutations of `[n]` in lexicographic order.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations {
            next: Some((1..=n).collect()),
        }
    }

    pub fn parse(text: &str) -> Result<Permutation> {
        let mut img = Vec::new();
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let Some((lineno, line)) = lines.next() else {
            return Err(Error::format(0, "empty permutation"));
        };
        for tok in line.split_whitespace() {
            img.push(parse_usize(Some(tok), lineno + 1)?);
        }
        if let Some((extra, _)) = lines.next() {
            return Err(Error::format(extra + 1, "permutation must be a single line"));
        }
        Permutation::new(img).map_err(|_| Error::format(lineno + 1, "not a permutation of 1..=n"))
    }
}

impl FromStr for Permutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Permutation::parse(s)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.img.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

/// Iterator over `S_n` in lexicographic order.
pub struct AllPermutations {
    next: Option<Vec<usize>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation { img: cur })
    }
}

/// Advances `v` to its lexicographic successor; false when `v` was the last.
pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).unwrap();
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Which maps count as occurrences.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct OccurrenceFlavor {
    /// The map must also reflect relations: `f(v) ≺ f(w)` implies `v ≺ w`.
    pub induced: bool,
    pub injective: bool,
    /// Count orbits under precomposition with automorphisms of the pattern.
    pub unlabeled: bool,
}

impl OccurrenceFlavor {
    pub const fn new(induced: bool, injective: bool, unlabeled: bool) -> Self {
        OccurrenceFlavor {
            induced,
            injective,
            unlabeled,
        }
    }

    /// All eight combinations.
    pub fn all() -> impl Iterator<Item = OccurrenceFlavor> {
        (0..8u8).map(|b| OccurrenceFlavor::new(b & 1 != 0, b & 2 != 0, b & 4 != 0))
    }

    pub const fn labeled(self) -> Self {
        OccurrenceFlavor {
            unlabeled: false,
            ..self
        }
    }
}

impl fmt::Display for OccurrenceFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}, {}, {}",
            if self.induced { "induced" } else { "non-induced" },
            if self.injective { "injective" } else { "non-injective" },
            if self.unlabeled { "unlabeled" } else { "labeled" }
        )
    }
}

/// A map from pattern elements to text elements (0-based internally).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccurrenceMap {
    pub assignment: Vec<usize>,
}

impl OccurrenceMap {
    pub fn new(assignment: Vec<usize>) -> Self {
        OccurrenceMap { assignment }
    }

    /// Builds a map from 1-based images.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        images
            .iter()
            .map(|&q| q.checked_sub(1).ok_or(Error::Range { elem: 0, n: images.len() }))
            .collect::<Result<Vec<_>>>()
            .map(OccurrenceMap::new)
    }

    /// `self ∘ a`, where `a` is a permutation of the pattern's elements.
    pub fn compose(&self, a: &[usize]) -> OccurrenceMap {
        OccurrenceMap::new(a.iter().map(|&v| self.assignment[v]).collect())
    }
}

/// One `v->q` pair per pattern element, 1-based, space separated.
impl fmt::Display for OccurrenceMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, q) in self.assignment.iter().enumerate() {
            if v > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}->{}", v + 1, q + 1)?;
        }
        Ok(())
    }
}

/// Checks whether `map` is an occurrence of `pattern` in `text`.
///
/// `flavor.unlabeled` plays no role here; it only affects how occurrences are
/// counted.
pub fn is_occurrence(
    map: &OccurrenceMap,
    pattern: &Poset,
    text: &Poset,
    flavor: OccurrenceFlavor,
) -> Result<bool> {
    let f = &map.assignment;
    if f.len() != pattern.len() {
        return Err(Error::Range {
            elem: f.len(),
            n: pattern.len(),
        });
    }
    if let Some(&q) = f.iter().find(|&&q| q >= text.len()) {
        return Err(Error::Range {
            elem: q + 1,
            n: text.len(),
        });
    }
    for v in 0..f.len() {
        for w in 0..f.len() {
            if v == w {
                continue;
            }
            if flavor.injective && f[v] == f[w] {
                return Ok(false);
            }
            let p = pattern.less(v, w);
            let q = text.less(f[v], f[w]);
            if p && !q {
                return Ok(false);
            }
            if flavor.induced && q && !p {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn closure_adds_transitive_pairs() {
        let p = Poset::from_relations(3, &[(1, 2), (2, 3)]).unwrap();
        assert!(p.less(0, 2));
        assert_eq!(p, Poset::chain(3));
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn empty_relation_is_antichain() {
        assert_eq!(Poset::from_relations(4, &[]).unwrap(), Poset::antichain(4));
    }

    #[test]
    fn cycles_and_ranges_are_rejected() {
        assert!(matches!(
            Poset::from_relations(2, &[(1, 2), (2, 1)]),
            Err(Error::Cycle(_))
        ));
        assert!(matches!(
            Poset::from_relations(3, &[(1, 2), (2, 3), (3, 1)]),
            Err(Error::Cycle(_))
        ));
        assert!(matches!(
            Poset::from_relations(2, &[(1, 3)]),
            Err(Error::Range { elem: 3, n: 2 })
        ));
        assert!(matches!(Poset::from_relations(2, &[(0, 1)]), Err(Error::Range { .. })));
    }

    #[test]
    fn permutation_posets() {
        assert_eq!(Poset::from_permutation(&Permutation::identity(5)), Poset::chain(5));
        assert_eq!(Poset::from_permutation(&Permutation::reversal(5)), Poset::antichain(5));
        let p = Poset::from_permutation(&perm(&[2, 3, 1]));
        assert_eq!(p.relations().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn restrict_examples() {
        assert_eq!(Poset::chain(5).restrict(&[2, 4]).unwrap(), Poset::chain(2));
        assert_eq!(Poset::antichain(4).restrict(&[1, 3]).unwrap(), Poset::antichain(2));
        let d = Poset::from_permutation(&perm(&[2, 3, 1]));
        assert_eq!(d.restrict(&[1, 2]).unwrap(), Poset::chain(2));
        assert!(matches!(d.restrict(&[4]), Err(Error::Range { .. })));
    }

    #[test]
    fn occurrence_examples() {
        let id = OccurrenceMap::new(vec![0, 1, 2]);
        for fl in OccurrenceFlavor::all() {
            assert!(is_occurrence(&id, &Poset::chain(3), &Poset::chain(3), fl).unwrap());
        }
        let constant = OccurrenceMap::new(vec![0, 0]);
        let loose = OccurrenceFlavor::new(false, false, false);
        assert!(is_occurrence(&constant, &Poset::antichain(2), &Poset::chain(2), loose).unwrap());
        assert!(!is_occurrence(&constant, &Poset::chain(2), &Poset::chain(2), loose).unwrap());
        let bad = OccurrenceMap::new(vec![0, 5]);
        assert!(is_occurrence(&bad, &Poset::chain(2), &Poset::chain(2), loose).is_err());
    }

    #[test]
    fn file_format_round_trip() {
        let text = "# N poset\np 4\nr 1 3\nr 2 3\nr 2 4\n";
        let p = Poset::parse(text).unwrap();
        assert_eq!(p.to_string(), "p 4\nr 1 3\nr 2 3\nr 2 4\n");
        // readers accept any generating set, writers emit covers
        let q = Poset::parse("p 3\nr 1 2\nr 2 3\nr 1 3\n").unwrap();
        assert_eq!(q.to_string(), "p 3\nr 1 2\nr 2 3\n");
    }

    #[test]
    fn file_format_errors() {
        assert!(matches!(Poset::parse("r 1 2\n"), Err(Error::Format { line: 1, .. })));
        assert!(matches!(Poset::parse("p 2\nr 1 x\n"), Err(Error::Format { line: 2, .. })));
        assert!(matches!(Poset::parse("p 2\nr 1 3\n"), Err(Error::Format { line: 2, .. })));
        assert!(matches!(Poset::parse("p 2\nq 1 2\n"), Err(Error::Format { .. })));
        assert!(matches!(Poset::parse(""), Err(Error::Format { .. })));
        assert!(matches!(Poset::parse("p 2\nr 1 2\nr 2 1\n"), Err(Error::Cycle(_))));
    }

    #[test]
    fn permutation_parsing() {
        assert_eq!(Permutation::parse("2 3 1\n").unwrap(), perm(&[2, 3, 1]));
        assert!(Permutation::parse("1 1").is_err());
        assert!(Permutation::parse("1 2\n2 1").is_err());
        assert!(Permutation::parse("").is_err());
        assert_eq!(perm(&[2, 3, 1]).to_string(), "2 3 1");
        assert_eq!(perm(&[2, 3, 1]).inverse(), perm(&[3, 1, 2]));
    }

    #[test]
    fn enumerates_symmetric_group() {
        let all: Vec<_> = Permutation::all(4).collect();
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(Permutation::all(0).count(), 1);
        assert_eq!(Permutation::all(1).count(), 1);
    }

    #[test]
    fn ranks() {
        assert_eq!(Permutation::from_ranks(&[10, -3, 7]).unwrap(), perm(&[3, 1, 2]));
        assert!(Permutation::from_ranks(&[1, 1]).is_err());
    }

    #[test]
    fn compositions() {
        let s = Poset::ordinal_sum(&[Poset::antichain(2), Poset::chain(1)]);
        assert_eq!(s, Poset::from_relations(3, &[(1, 3), (2, 3)]).unwrap());
        let u = Poset::disjoint_union(&[Poset::chain(2), Poset::chain(2)]);
        assert_eq!(u, Poset::from_relations(4, &[(1, 2), (3, 4)]).unwrap());
    }
}
