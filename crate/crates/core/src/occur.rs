//! Occurrence counting and enumeration.
//!
//! The general engine assigns pattern elements in increasing order and keeps,
//! for the element about to be placed, the set of text elements compatible
//! with every earlier assignment (forward checking with bitset
//! intersections). At the last pattern element the candidate set is simply
//! counted. Candidates are tried smallest first, so enumeration comes out in
//! lexicographic order of assignment vectors.

use std::cell::Cell;
use std::fmt;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_traits::One;

use crate::combin::binomial;
use crate::error::{Error, Result};
use crate::lecount;
use crate::par::{self, Strategy};
use crate::poset::{OccurrenceFlavor, OccurrenceMap, Permutation, Poset};

/// A nonnegative occurrence count.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OccurrenceCount(pub BigUint);

impl OccurrenceCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }
}

impl From<u64> for OccurrenceCount {
    fn from(v: u64) -> Self {
        OccurrenceCount(BigUint::from(v))
    }
}

impl From<BigUint> for OccurrenceCount {
    fn from(v: BigUint) -> Self {
        OccurrenceCount(v)
    }
}

impl PartialEq<u64> for OccurrenceCount {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl fmt::Display for OccurrenceCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Default cap on `|Q|^|P|` for materializing occurrence lists.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 50_000_000;

/// Knobs for the counting engine.
#[derive(Clone, Copy, Debug, Default)]
pub struct CountOptions {
    pub strategy: Strategy,
    pub timeout: Option<Duration>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Link {
    /// earlier element below the current one
    Below,
    /// earlier element above the current one
    Above,
    /// incomparable; only recorded for induced searches
    Apart,
}

/// Deadline bookkeeping shared by the recursive searches.
struct Clock {
    deadline: Option<(Instant, Duration)>,
    ticks: Cell<u32>,
}

impl Clock {
    fn new(timeout: Option<Duration>) -> Self {
        Clock::until(timeout.map(|t| (Instant::now() + t, t)))
    }

    fn until(deadline: Option<(Instant, Duration)>) -> Self {
        Clock {
            deadline,
            ticks: Cell::new(0),
        }
    }

    #[inline]
    fn check(&self) -> Result<()> {
        let Some((deadline, limit)) = self.deadline else {
            return Ok(());
        };
        let t = self.ticks.get().wrapping_add(1);
        self.ticks.set(t);
        if t.is_multiple_of(4096) && Instant::now() > deadline {
            return Err(Error::Timeout(limit));
        }
        Ok(())
    }
}

struct Engine<'a> {
    text: &'a Poset,
    flavor: OccurrenceFlavor,
    links: Vec<Vec<(usize, Link)>>,
    apart: Vec<FixedBitSet>,
}

impl<'a> Engine<'a> {
    fn new(pattern: &'a Poset, text: &'a Poset, flavor: OccurrenceFlavor) -> Self {
        let links = (0..pattern.len())
            .map(|v| {
                (0..v)
                    .filter_map(|u| {
                        if pattern.less(u, v) {
                            Some((u, Link::Below))
                        } else if pattern.less(v, u) {
                            Some((u, Link::Above))
                        } else if flavor.induced {
                            Some((u, Link::Apart))
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect();
        let apart = if flavor.induced {
            (0..text.len())
                .map(|x| {
                    let mut m = text.above(x).clone();
                    m.union_with(text.below(x));
                    m.toggle_range(..);
                    m
                })
                .collect()
        } else {
            Vec::new()
        };
        Engine {
            text,
            flavor,
            links,
            apart,
        }
    }

    fn candidates(&self, v: usize, assign: &[usize], used: &FixedBitSet) -> FixedBitSet {
        let mut cand = FixedBitSet::with_capacity(self.text.len());
        cand.insert_range(..);
        if self.flavor.injective {
            cand.difference_with(used);
        }
        for &(u, link) in &self.links[v] {
            let x = assign[u];
            match link {
                Link::Below => cand.intersect_with(self.text.above(x)),
                Link::Above => cand.intersect_with(self.text.below(x)),
                Link::Apart => cand.intersect_with(&self.apart[x]),
            }
        }
        cand
    }

    fn count(&self, v: usize, assign: &mut [usize], used: &mut FixedBitSet, clock: &Clock) -> Result<u64> {
        clock.check()?;
        let cand = self.candidates(v, assign, used);
        if v + 1 == assign.len() {
            return Ok(cand.count_ones(..) as u64);
        }
        let mut total = 0;
        for x in cand.ones() {
            assign[v] = x;
            used.insert(x);
            total += self.count(v + 1, assign, used, clock)?;
            used.set(x, false);
        }
        Ok(total)
    }

    /// Calls `visit` on every labeled occurrence, in lexicographic order.
    /// Stops early when `visit` returns false.
    fn visit(
        &self,
        v: usize,
        assign: &mut [usize],
        used: &mut FixedBitSet,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let cand = self.candidates(v, assign, used);
        for x in cand.ones() {
            assign[v] = x;
            if v + 1 == assign.len() {
                if !visit(assign) {
                    return false;
                }
                continue;
            }
            used.insert(x);
            let go_on = self.visit(v + 1, assign, used, visit);
            used.set(x, false);
            if !go_on {
                return false;
            }
        }
        true
    }

    fn count_all(&self, k: usize, opts: &CountOptions) -> Result<u64> {
        let n = self.text.len();
        let empty = FixedBitSet::with_capacity(n);
        let first: Vec<usize> = self.candidates(0, &[], &empty).ones().collect();
        if k == 1 {
            return Ok(first.len() as u64);
        }
        let deadline = Clock::new(opts.timeout).deadline;
        let parts = par::map(opts.strategy, &first, |&x| {
            let clock = Clock::until(deadline);
            let mut assign = vec![0; k];
            let mut used = FixedBitSet::with_capacity(n);
            assign[0] = x;
            used.insert(x);
            self.count(1, &mut assign, &mut used, &clock)
        });
        parts.into_iter().sum()
    }
}

fn labeled_count(pattern: &Poset, text: &Poset, flavor: OccurrenceFlavor, opts: &CountOptions) -> Result<u64> {
    if pattern.is_empty() {
        return Ok(1);
    }
    Engine::new(pattern, text, flavor.labeled()).count_all(pattern.len(), opts)
}

/// Calls `visit` on each labeled occurrence in lexicographic order.
pub fn for_each_occurrence(
    pattern: &Poset,
    text: &Poset,
    flavor: OccurrenceFlavor,
    mut visit: impl FnMut(&[usize]) -> bool,
) {
    if pattern.is_empty() {
        visit(&[]);
        return;
    }
    let engine = Engine::new(pattern, text, flavor.labeled());
    let mut assign = vec![0; pattern.len()];
    let mut used = FixedBitSet::with_capacity(text.len());
    engine.visit(0, &mut assign, &mut used, &mut visit);
}

/// All automorphisms of `p`, as image vectors, in lexicographic order.
pub fn automorphisms(p: &Poset) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_occurrence(p, p, OccurrenceFlavor::new(true, true, false), |f| {
        out.push(f.to_vec());
        true
    });
    out
}

/// `|Aut(p)|` via the occurrence engine.
pub fn automorphism_count(p: &Poset) -> u64 {
    labeled_count(p, p, OccurrenceFlavor::new(true, true, false), &CountOptions::default())
        .expect("no deadline set")
}

/// True when `f` is the lexicographically least member of its orbit under
/// precomposition with `auts`.
fn is_orbit_representative(f: &[usize], auts: &[Vec<usize>]) -> bool {
    auts.iter().all(|a| {
        for (v, &img) in a.iter().enumerate() {
            let other = f[img];
            if other != f[v] {
                return f[v] < other;
            }
        }
        true
    })
}

/// Counts occurrences of `pattern` in `text`.
pub fn count_occurrences(pattern: &Poset, text: &Poset, flavor: OccurrenceFlavor) -> OccurrenceCount {
    count_occurrences_with(pattern, text, flavor, &CountOptions::default()).expect("no deadline set")
}

/// [`count_occurrences`] with an execution strategy and an optional timeout.
///
/// Unlabeled injective counts divide by `|Aut(P)|`, since every orbit of an
/// injective map has exactly that many members. Non-injective maps can be
/// fixed by automorphisms, so there orbits are counted through their
/// lexicographically least representatives.
pub fn count_occurrences_with(
    pattern: &Poset,
    text: &Poset,
    flavor: OccurrenceFlavor,
    opts: &CountOptions,
) -> Result<OccurrenceCount> {
    if !flavor.unlabeled {
        return labeled_count(pattern, text, flavor, opts).map(OccurrenceCount::from);
    }
    if flavor.injective {
        let labeled = labeled_count(pattern, text, flavor, opts)?;
        let auts = automorphism_count(pattern);
        debug_assert_eq!(labeled % auts, 0);
        return Ok(OccurrenceCount::from(labeled / auts));
    }
    let auts = automorphisms(pattern);
    let clock = Clock::new(opts.timeout);
    let mut reps = 0u64;
    let mut timed_out = None;
    for_each_occurrence(pattern, text, flavor, |f| {
        if let Err(e) = clock.check() {
            timed_out = Some(e);
            return false;
        }
        if is_orbit_representative(f, &auts) {
            reps += 1;
        }
        true
    });
    match timed_out {
        Some(e) => Err(e),
        None => Ok(OccurrenceCount::from(reps)),
    }
}

/// Lists every occurrence; for unlabeled flavors one representative (the
/// lexicographically least) per orbit.
pub fn enumerate_occurrences(pattern: &Poset, text: &Poset, flavor: OccurrenceFlavor) -> Result<Vec<OccurrenceMap>> {
    enumerate_occurrences_with_budget(pattern, text, flavor, DEFAULT_ENUMERATION_BUDGET)
}

pub fn enumerate_occurrences_with_budget(
    pattern: &Poset,
    text: &Poset,
    flavor: OccurrenceFlavor,
    budget: u128,
) -> Result<Vec<OccurrenceMap>> {
    let size = (text.len() as u128).checked_pow(pattern.len() as u32).unwrap_or(u128::MAX);
    if size > budget {
        return Err(Error::SizeLimit {
            what: "|Q|^|P| for enumeration",
            size,
            limit: budget,
        });
    }
    let auts = if flavor.unlabeled { automorphisms(pattern) } else { Vec::new() };
    let mut out = Vec::new();
    for_each_occurrence(pattern, text, flavor, |f| {
        if !flavor.unlabeled || is_orbit_representative(f, &auts) {
            out.push(OccurrenceMap::new(f.to_vec()));
        }
        true
    });
    Ok(out)
}

/// Classical pattern matching on permutations.
///
/// Matches are index sets `I` of the text, with pattern position `i` sent to
/// the `i`-th smallest index of `I`. Induced matches require `τ|_I` to be
/// order-isomorphic to `σ`; non-induced ones only require that every
/// coinversion of `σ` maps to a coinversion of `τ`.
pub struct PermMatcher {
    k: usize,
    n: usize,
    induced: bool,
    /// per pattern position: earlier positions it must sit above in value
    /// (covers in `D(σ)` only) and, for induced matching, earlier positions
    /// it must sit below
    above_of: Vec<Vec<usize>>,
    below_of: Vec<Vec<usize>>,
    val_above: Vec<FixedBitSet>,
    val_below: Vec<FixedBitSet>,
    /// `after[x]`: text positions right of `x`
    after: Vec<FixedBitSet>,
    /// `room[p]`: text positions that leave space for the rest of the pattern
    room: Vec<FixedBitSet>,
}

impl PermMatcher {
    pub fn new(pattern: &Permutation, text: &Permutation, induced: bool) -> Self {
        let (k, n) = (pattern.len(), text.len());
        let sp = pattern.values();
        let tv = text.values();
        let dp = Poset::from_permutation(pattern);
        let covers = dp.covers();
        let above_of = (0..k)
            .map(|p| covers.iter().filter(|&&(_, b)| b == p).map(|&(a, _)| a).collect())
            .collect();
        let below_of = (0..k)
            .map(|p| {
                if induced {
                    (0..p).filter(|&a| sp[a] > sp[p]).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        let mask = |f: &dyn Fn(usize) -> bool| {
            let mut m = FixedBitSet::with_capacity(n);
            for y in 0..n {
                if f(y) {
                    m.insert(y);
                }
            }
            m
        };
        let val_above = (0..n).map(|x| mask(&|y| tv[y] > tv[x])).collect();
        let val_below = (0..n).map(|x| mask(&|y| tv[y] < tv[x])).collect();
        let after = (0..n).map(|x| mask(&|y| y > x)).collect();
        let room = (0..k)
            .map(|p| {
                let last = n.saturating_sub(k - p);
                mask(&|y| y <= last && n >= k)
            })
            .collect();
        PermMatcher {
            k,
            n,
            induced,
            above_of,
            below_of,
            val_above,
            val_below,
            after,
            room,
        }
    }

    pub fn is_induced(&self) -> bool {
        self.induced
    }

    fn candidates(&self, p: usize, assign: &[usize]) -> FixedBitSet {
        let mut cand = self.room[p].clone();
        if p > 0 {
            cand.intersect_with(&self.after[assign[p - 1]]);
        }
        for &a in &self.above_of[p] {
            cand.intersect_with(&self.val_above[assign[a]]);
        }
        for &a in &self.below_of[p] {
            cand.intersect_with(&self.val_below[assign[a]]);
        }
        cand
    }

    fn count_rec(&self, p: usize, assign: &mut [usize], clock: &Clock) -> Result<u64> {
        clock.check()?;
        let cand = self.candidates(p, assign);
        if p + 1 == self.k {
            return Ok(cand.count_ones(..) as u64);
        }
        let mut total = 0;
        for x in cand.ones() {
            assign[p] = x;
            total += self.count_rec(p + 1, assign, clock)?;
        }
        Ok(total)
    }

    /// Number of matches, failing with [`Error::Timeout`] past `timeout`.
    pub fn count(&self, timeout: Option<Duration>) -> Result<u64> {
        if self.k == 0 {
            return Ok(1);
        }
        if self.k > self.n {
            return Ok(0);
        }
        let clock = Clock::new(timeout);
        let mut assign = vec![0; self.k];
        self.count_rec(0, &mut assign, &clock)
    }

    /// Calls `visit` with the sorted index set of each match (0-based text
    /// positions). Stops early when `visit` returns false.
    pub fn for_each(&self, mut visit: impl FnMut(&[usize]) -> bool) {
        if self.k == 0 || self.k > self.n {
            if self.k == 0 {
                visit(&[]);
            }
            return;
        }
        let mut assign = vec![0; self.k];
        self.visit_rec(0, &mut assign, &mut visit);
    }

    fn visit_rec(&self, p: usize, assign: &mut [usize], visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        for x in self.candidates(p, assign).ones() {
            assign[p] = x;
            let go_on = if p + 1 == self.k {
                visit(assign)
            } else {
                self.visit_rec(p + 1, assign, visit)
            };
            if !go_on {
                return false;
            }
        }
        true
    }
}

/// Number of matches of `pattern` in `text`, induced or not.
pub fn match_permutation(pattern: &Permutation, text: &Permutation, induced: bool) -> OccurrenceCount {
    let m = PermMatcher::new(pattern, text, induced);
    OccurrenceCount::from(m.count(None).expect("no deadline set"))
}

/// Number of `k`-element chains of `q`.
///
/// Runs the increasing-subsequence recurrence `c_j(v) = Σ_{u ≺ v} c_{j-1}(u)`
/// along a linear extension of `q`.
pub fn count_chain_occurrences(k: usize, q: &Poset) -> OccurrenceCount {
    if k == 0 {
        return OccurrenceCount(BigUint::one());
    }
    let order = q.linear_extension();
    let mut cur = vec![BigUint::one(); q.len()];
    for _ in 1..k {
        let mut next = vec![BigUint::ZERO; q.len()];
        for &v in &order {
            let mut acc = BigUint::ZERO;
            for u in q.below(v).ones() {
                acc += &cur[u];
            }
            next[v] = acc;
        }
        cur = next;
    }
    OccurrenceCount(cur.into_iter().sum())
}

/// Injective occurrences of `pattern` in a chain of length `q`, as
/// `e(P) · C(q, |P|)`.
pub fn count_occurrences_in_chain(pattern: &Poset, q: usize) -> Result<OccurrenceCount> {
    if pattern.len() > q {
        return Err(Error::Size {
            pattern: pattern.len(),
            text: q,
        });
    }
    let e = lecount::count_linear_extensions(pattern)?;
    Ok(OccurrenceCount(e.0 * binomial(q, pattern.len())))
}
