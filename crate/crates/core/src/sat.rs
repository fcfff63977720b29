//! The 3-SAT gadget: a pattern `π` and text `τ` built from a 3-CNF formula.
//!
//! Every variable `x_i` gets a 4-entry pattern block and an 8-entry text
//! block whose two halves stand for `x_i` true (`r_i = 0`) and false
//! (`r_i = 1`). Every clause gets a 5-entry pattern block `(lo, u, u, u, hi)`
//! and a 35-entry text block of seven rows, one per satisfying truth pattern
//! of its three literals. Values are built as exact rationals and then
//! replaced by their ranks.
//!
//! Free parameters are chosen per literal slot `s` of clause `i`:
//!
//! ```text
//! u_is  = a(i,s) + ((i-1)·3 + s) / (3m + 1)
//! t_isk = L(T_is) + ((i-1)·12 + (s-1)·4 + k) / (12m + 1)
//! f_isk = L(F_is) + ((i-1)·9 + (s-1)·3 + k) / (9m + 1)
//! ```
//!
//! so a clause that repeats a variable still gets distinct values, and
//! every value sits strictly inside `(L, L + 1)`.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::occur::PermMatcher;
use crate::poset::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    /// 1-based variable index.
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn from_dimacs(lit: i64) -> Literal {
        Literal {
            var: lit.unsigned_abs() as usize,
            positive: lit > 0,
        }
    }

    pub fn holds(self, assignment: &[bool]) -> bool {
        assignment[self.var - 1] == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.var)
        } else {
            write!(f, "-{}", self.var)
        }
    }
}

pub type Clause = [Literal; 3];

/// A 3-CNF formula: exactly three literals per clause, and no clause holds
/// a variable with both polarities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf3 {
    n: usize,
    clauses: Vec<Clause>,
}

impl Cnf3 {
    /// Builds a formula from DIMACS-style signed literals.
    pub fn new(n: usize, clauses: &[[i64; 3]]) -> Result<Cnf3> {
        let mut out = Vec::with_capacity(clauses.len());
        for (i, c) in clauses.iter().enumerate() {
            out.push(check_clause(n, c, i + 1)?);
        }
        Ok(Cnf3 { n, clauses: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.holds(assignment)))
    }
}

fn check_clause(n: usize, lits: &[i64], line: usize) -> Result<Clause> {
    if lits.len() != 3 {
        return Err(Error::Arity {
            line,
            found: lits.len(),
        });
    }
    let c = [0, 1, 2].map(|j| Literal::from_dimacs(lits[j]));
    for l in &c {
        if l.var == 0 || l.var > n {
            return Err(Error::format(line, format!("variable {} out of range 1..={n}", l.var)));
        }
    }
    for a in &c {
        if c.iter().any(|b| b.var == a.var && b.positive != a.positive) {
            return Err(Error::Polarity { line, var: a.var });
        }
    }
    Ok(c)
}

impl fmt::Display for Cnf3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p cnf {} {}", self.n, self.m())?;
        for c in &self.clauses {
            writeln!(f, "{} {} {} 0", c[0], c[1], c[2])?;
        }
        Ok(())
    }
}

/// Parses `p cnf n m` followed by `m` clause lines, each holding exactly
/// three nonzero literals and a terminating `0`. Lines starting with `c`
/// are comments.
pub fn parse_dimacs(text: &str) -> Result<Cnf3> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('c') {
            continue;
        }
        let Some((n, m)) = header else {
            let parts: Vec<&str> = s.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(Error::format(line, "expected header `p cnf <n> <m>`"));
            }
            let num = |t: &str| t.parse::<usize>().map_err(|_| Error::format(line, format!("bad count `{t}`")));
            header = Some((num(parts[2])?, num(parts[3])?));
            continue;
        };
        let mut lits = Vec::new();
        for tok in s.split_whitespace() {
            lits.push(
                tok.parse::<i64>()
                    .map_err(|_| Error::format(line, format!("bad literal `{tok}`")))?,
            );
        }
        if lits.pop() != Some(0) {
            return Err(Error::format(line, "clause must end with 0"));
        }
        if lits.contains(&0) {
            return Err(Error::format(line, "0 inside a clause"));
        }
        if clauses.len() == m {
            return Err(Error::format(line, format!("more than {m} clauses")));
        }
        clauses.push(check_clause(n, &lits, line)?);
    }
    let Some((n, m)) = header else {
        return Err(Error::format(last_line.max(1), "missing `p cnf` header"));
    };
    if clauses.len() != m {
        return Err(Error::format(
            last_line.max(1),
            format!("expected {m} clauses, found {}", clauses.len()),
        ));
    }
    Ok(Cnf3 { n, clauses })
}

/// Number of satisfying assignments, by exhaustion.
pub fn count_satisfying(f: &Cnf3) -> Result<u64> {
    const LIMIT: usize = 20;
    if f.n > LIMIT {
        return Err(Error::SizeLimit {
            what: "satisfying-assignment count",
            size: f.n as u128,
            limit: LIMIT as u128,
        });
    }
    let mut assignment = vec![false; f.n];
    let mut count = 0;
    for mask in 0u32..1 << f.n {
        for (v, a) in assignment.iter_mut().enumerate() {
            *a = mask >> v & 1 == 1;
        }
        count += f.satisfied_by(&assignment) as u64;
    }
    Ok(count)
}

/// Literal truth pattern of each clause row (`true` = a `t` value).
pub const ROWS: [[bool; 3]; 7] = [
    [true, true, true],
    [true, true, false],
    [true, false, true],
    [true, false, false],
    [false, true, true],
    [false, true, false],
    [false, false, true],
];

/// The pattern/text pair, with the rational values they were ranked from.
#[derive(Clone, Debug)]
pub struct GadgetInstance {
    pub pattern: Permutation,
    pub text: Permutation,
    pub pattern_values: Vec<Rational64>,
    pub text_values: Vec<Rational64>,
    pub n: usize,
    pub m: usize,
}

impl GadgetInstance {
    /// Pattern positions (0-based) of variable block `i` (1-based).
    pub fn pattern_var_block(&self, i: usize) -> std::ops::Range<usize> {
        4 * (i - 1)..4 * i
    }

    pub fn pattern_clause_block(&self, i: usize) -> std::ops::Range<usize> {
        let b = 4 * self.n + 5 * (i - 1);
        b..b + 5
    }

    pub fn text_var_block(&self, i: usize) -> std::ops::Range<usize> {
        8 * (i - 1)..8 * i
    }

    pub fn text_clause_block(&self, i: usize) -> std::ops::Range<usize> {
        let b = 8 * self.n + 35 * (i - 1);
        b..b + 35
    }

    /// The candidate map for `(r, s)`: variable block `i` goes to half
    /// `r_i` of its text block, clause block `i` to row `s_i` of its.
    pub fn structured_map(&self, r: &[u8], s: &[u8]) -> Vec<usize> {
        let mut img = Vec::with_capacity(self.pattern.len());
        for (i, &ri) in r.iter().enumerate() {
            let base = self.text_var_block(i + 1).start + 4 * ri as usize;
            img.extend(base..base + 4);
        }
        for (i, &si) in s.iter().enumerate() {
            let base = self.text_clause_block(i + 1).start + 5 * si as usize;
            img.extend(base..base + 5);
        }
        img
    }

    /// Whether the index map `img` (0-based, increasing) carries every
    /// coinversion of the pattern to one of the text, and, when `induced`,
    /// every inversion to an inversion.
    pub fn is_match(&self, img: &[usize], induced: bool) -> bool {
        let p = self.pattern.values();
        let t = self.text.values();
        (0..p.len()).all(|a| {
            (a + 1..p.len()).all(|b| {
                let up = p[a] < p[b];
                let tup = t[img[a]] < t[img[b]];
                if induced {
                    up == tup
                } else {
                    !up || tup
                }
            })
        })
    }

    /// Whether every block of the pattern lands in the matching text block.
    pub fn is_block_local(&self, img: &[usize]) -> bool {
        let var_ok = (1..=self.n).all(|i| {
            let target = self.text_var_block(i);
            self.pattern_var_block(i).all(|p| target.contains(&img[p]))
        });
        let clause_ok = (1..=self.m).all(|i| {
            let target = self.text_clause_block(i);
            self.pattern_clause_block(i).all(|p| target.contains(&img[p]))
        });
        var_ok && clause_ok
    }
}

fn int(v: i64) -> Rational64 {
    Rational64::from_integer(v)
}

fn frac(num: i64, den: i64) -> Rational64 {
    Rational64::new(num, den)
}

/// Left endpoints of `T_v` and `F_v`.
fn true_left(v: i64) -> i64 {
    2 * v - 1
}

fn false_left(v: i64) -> i64 {
    2 * v
}

/// Builds `π` and `τ`, checks every ordering constraint the construction
/// relies on, and rank-normalizes both sequences.
pub fn build_gadget(f: &Cnf3) -> Result<GadgetInstance> {
    let n = f.n as i64;
    let m = f.m() as i64;
    let mut pi = Vec::new();
    let mut tau = Vec::new();
    for i in 1..=n {
        pi.extend([2 * n + 2 * i - 1, i, 2 * n - i + 1, 2 * n + 2 * i].map(int));
    }
    for i in 1..=n {
        tau.extend(
            [
                4 * n + 4 * i - 1,
                2 * i - 1,
                4 * n - 2 * i + 2,
                4 * n + 4 * i,
                4 * n + 4 * i - 3,
                2 * i,
                4 * n - 2 * i + 1,
                4 * n + 4 * i - 2,
            ]
            .map(int),
        );
    }

    // per clause and slot: u, t[1..=4], f[1..=3]
    let mut u = Vec::new();
    let mut t = Vec::new();
    let mut fv = Vec::new();
    for (ci, clause) in f.clauses.iter().enumerate() {
        let i = ci as i64 + 1;
        let mut cu = [int(0); 3];
        let mut ct = [[int(0); 4]; 3];
        let mut cf = [[int(0); 3]; 3];
        for (si, lit) in clause.iter().enumerate() {
            let s = si as i64 + 1;
            let a = lit.var as i64;
            cu[si] = int(a) + frac((i - 1) * 3 + s, 3 * m + 1);
            let (tl, fl) = if lit.positive {
                (true_left(a), false_left(a))
            } else {
                (false_left(a), true_left(a))
            };
            for k in 1..=4 {
                ct[si][k as usize - 1] = int(tl) + frac((i - 1) * 12 + (s - 1) * 4 + k, 12 * m + 1);
            }
            for k in 1..=3 {
                cf[si][k as usize - 1] = int(fl) + frac((i - 1) * 9 + (s - 1) * 3 + k, 9 * m + 1);
            }
        }
        u.push(cu);
        t.push(ct);
        fv.push(cf);
    }
    check_parameters(f, &u, &t, &fv)?;

    for i in 1..=m {
        let ci = i as usize - 1;
        pi.push(int(4 * n + 2 * i - 1));
        pi.extend(u[ci]);
        pi.push(int(4 * n + 2 * i));
    }
    for i in 1..=m {
        let ci = i as usize - 1;
        // the k-th t (or f) of a slot is used by the k-th row that needs one
        let mut used_t = [0usize; 3];
        let mut used_f = [0usize; 3];
        for (s, row) in ROWS.iter().enumerate() {
            let s = s as i64;
            tau.push(int(8 * n + 14 * i - 1 - 2 * s));
            for slot in 0..3 {
                if row[slot] {
                    tau.push(t[ci][slot][used_t[slot]]);
                    used_t[slot] += 1;
                } else {
                    tau.push(fv[ci][slot][used_f[slot]]);
                    used_f[slot] += 1;
                }
            }
            tau.push(int(8 * n + 14 * i - 2 * s));
        }
    }

    let expect = |what: &str, got: usize, want: i64| {
        if got as i64 == want {
            Ok(())
        } else {
            Err(Error::Constraint(format!("{what} has length {got}, expected {want}")))
        }
    };
    expect("pattern", pi.len(), 4 * n + 5 * m)?;
    expect("text", tau.len(), 8 * n + 35 * m)?;
    let pattern = Permutation::from_ranks(&pi).map_err(|_| Error::Constraint("pattern values tie".into()))?;
    let text = Permutation::from_ranks(&tau).map_err(|_| Error::Constraint("text values tie".into()))?;
    Ok(GadgetInstance {
        pattern,
        text,
        pattern_values: pi,
        text_values: tau,
        n: f.n,
        m: f.m(),
    })
}

type Params<const K: usize> = Vec<[[Rational64; K]; 3]>;

fn check_parameters(f: &Cnf3, u: &[[Rational64; 3]], t: &Params<4>, fv: &Params<3>) -> Result<()> {
    let n = f.n as i64;
    let fail = |msg: String| Err(Error::Constraint(msg));
    let inside = |x: Rational64, lo: i64, hi: i64| x > int(lo) && x < int(hi);
    for (ci, clause) in f.clauses.iter().enumerate() {
        for (s, lit) in clause.iter().enumerate() {
            let a = lit.var as i64;
            if !inside(u[ci][s], a, 2 * n - a + 1) {
                return fail(format!("u[{}][{}] outside ({a}, {})", ci + 1, s + 1, 2 * n - a + 1));
            }
            let (tl, fl) = if lit.positive {
                (true_left(a), false_left(a))
            } else {
                (false_left(a), true_left(a))
            };
            // T_v = (2v-1, 4n-2v+2), F_v = (2v, 4n-2v+1): right end is 4n+1 minus left
            if !t[ci][s].iter().all(|&x| inside(x, tl, 4 * n + 1 - tl)) {
                return fail(format!("t[{}][{}] outside its interval", ci + 1, s + 1));
            }
            if !fv[ci][s].iter().all(|&x| inside(x, fl, 4 * n + 1 - fl)) {
                return fail(format!("f[{}][{}] outside its interval", ci + 1, s + 1));
            }
            if !t[ci][s].is_sorted_by(|a, b| a < b) || !fv[ci][s].is_sorted_by(|a, b| a < b) {
                return fail(format!("t or f of [{}][{}] not increasing", ci + 1, s + 1));
            }
            for (cj, earlier) in f.clauses[..ci].iter().enumerate() {
                for (sj, other) in earlier.iter().enumerate() {
                    if other.var != lit.var {
                        continue;
                    }
                    // t and f values of opposite polarities live in different intervals
                    let same = other.positive == lit.positive;
                    if u[ci][s] <= u[cj][sj] || same && (t[ci][s][0] <= t[cj][sj][3] || fv[ci][s][0] <= fv[cj][sj][2]) {
                        return fail(format!(
                            "clause {} slot {} not above clause {} slot {} for x{}",
                            ci + 1,
                            s + 1,
                            cj + 1,
                            sj + 1,
                            lit.var
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Backtrack,
    Structured,
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "backtrack" => Ok(Method::Backtrack),
            "structured" => Ok(Method::Structured),
            _ => Err(format!("unknown method `{s}`")),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Backtrack => "backtrack",
            Method::Structured => "structured",
        })
    }
}

/// Outcome of [`verify_reduction`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub method: Method,
    pub matches: u64,
    pub sat: u64,
    /// Matching `(r, s)` pairs; structured method only.
    pub pairs: Vec<(Vec<u8>, Vec<u8>)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.matches == self.sat
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "matches={} sat={} verdict={}",
            self.matches,
            self.sat,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// Formats an `(r, s)` pair as `r=0110 s=3,5`.
pub fn format_pair(r: &[u8], s: &[u8]) -> String {
    let r: String = r.iter().map(|d| char::from(b'0' + d)).collect();
    let s: Vec<String> = s.iter().map(u8::to_string).collect();
    format!("r={r} s={}", s.join(","))
}

/// Counts matches of `π` in `τ` and compares with the number of satisfying
/// assignments.
pub fn verify_reduction(f: &Cnf3, method: Method, timeout: Option<Duration>) -> Result<VerifyReport> {
    let sat = count_satisfying(f)?;
    let g = build_gadget(f)?;
    let (matches, pairs) = match method {
        Method::Backtrack => {
            let m = PermMatcher::new(&g.pattern, &g.text, false);
            (m.count(timeout)?, Vec::new())
        }
        Method::Structured => {
            let pairs = structured_matches(&g, timeout)?;
            (pairs.len() as u64, pairs)
        }
    };
    Ok(VerifyReport {
        method,
        matches,
        sat,
        pairs,
    })
}

/// All `(r, s)` in `{0,1}^n × {0..6}^m` whose block map is a non-induced match.
pub fn structured_matches(g: &GadgetInstance, timeout: Option<Duration>) -> Result<Vec<(Vec<u8>, Vec<u8>)>> {
    let start = Instant::now();
    let mut out = Vec::new();
    let mut r = vec![0u8; g.n];
    loop {
        let mut s = vec![0u8; g.m];
        loop {
            if let Some(limit) = timeout {
                if start.elapsed() > limit {
                    return Err(Error::Timeout(limit));
                }
            }
            if g.is_match(&g.structured_map(&r, &s), false) {
                out.push((r.clone(), s.clone()));
            }
            if !odometer(&mut s, 7) {
                break;
            }
        }
        if !odometer(&mut r, 2) {
            break;
        }
    }
    Ok(out)
}

fn odometer(digits: &mut [u8], base: u8) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Whether each `s_i` selects exactly the truth pattern that the assignment
/// read off `r` (`x_v` true iff `r_v = 0`) gives the literals of clause `i`.
pub fn rows_agree(f: &Cnf3, r: &[u8], s: &[u8]) -> bool {
    let assignment: Vec<bool> = r.iter().map(|&d| d == 0).collect();
    f.clauses.iter().zip(s).all(|(c, &si)| {
        let row = ROWS[si as usize];
        (0..3).all(|j| row[j] == c[j].holds(&assignment))
    })
}

/// Checks on the matches the backtracking matcher finds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchAudit {
    pub matches: u64,
    /// Matches that are not induced.
    pub not_induced: u64,
    /// Matches that leave some block's text block.
    pub nonlocal: u64,
    /// False when the match or time limit stopped the scan early.
    pub complete: bool,
    /// First offending match, 0-based text positions.
    pub first_bad: Option<Vec<usize>>,
}

/// Enumerates up to `max_matches` non-induced matches and re-checks each for
/// inducedness and block locality.
pub fn audit_matches(g: &GadgetInstance, max_matches: u64, timeout: Option<Duration>) -> MatchAudit {
    let start = Instant::now();
    let mut audit = MatchAudit {
        complete: true,
        ..MatchAudit::default()
    };
    let matcher = PermMatcher::new(&g.pattern, &g.text, false);
    matcher.for_each(|img| {
        audit.matches += 1;
        let induced = g.is_match(img, true);
        let local = g.is_block_local(img);
        audit.not_induced += !induced as u64;
        audit.nonlocal += !local as u64;
        if (!induced || !local) && audit.first_bad.is_none() {
            audit.first_bad = Some(img.to_vec());
        }
        let stop = audit.matches >= max_matches
            || (audit.matches.is_multiple_of(4096) && timeout.is_some_and(|t| start.elapsed() > t));
        if stop {
            audit.complete = false;
        }
        !stop
    });
    audit
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cnf(text: &str) -> Cnf3 {
        parse_dimacs(text).unwrap()
    }

    #[test]
    fn parse_examples() {
        let f = cnf("p cnf 1 1\n1 1 1 0\n");
        assert_eq!((f.n(), f.m()), (1, 1));
        assert_eq!(f.clauses()[0], [Literal::from_dimacs(1); 3]);
        let f = cnf("c comment\np cnf 2 1\n1 2 2 0\n");
        assert_eq!(f.clauses()[0].map(|l| l.var), [1, 2, 2]);
        assert_eq!(
            parse_dimacs("p cnf 1 1\n1 -1 1 0\n"),
            Err(Error::Polarity { line: 2, var: 1 })
        );
        assert_eq!(
            parse_dimacs("p cnf 2 1\n1 2 0\n"),
            Err(Error::Arity { line: 2, found: 2 })
        );
        assert!(matches!(parse_dimacs("p cnf 2 1\n1 2 3 0\n"), Err(Error::Format { line: 2, .. })));
        assert!(matches!(parse_dimacs("1 2 3 0\n"), Err(Error::Format { line: 1, .. })));
        assert!(matches!(parse_dimacs("p cnf 2 2\n1 2 2 0\n"), Err(Error::Format { .. })));
        assert!(matches!(parse_dimacs("p cnf 2 1\n1 2 2\n"), Err(Error::Format { .. })));
        assert_eq!(cnf(&f.to_string()), f);
    }

    #[test]
    fn satisfying_counts() {
        assert_eq!(count_satisfying(&cnf("p cnf 1 1\n1 1 1 0")).unwrap(), 1);
        assert_eq!(count_satisfying(&cnf("p cnf 2 1\n1 2 2 0")).unwrap(), 3);
        assert_eq!(count_satisfying(&cnf("p cnf 1 2\n1 1 1 0\n-1 -1 -1 0")).unwrap(), 0);
        assert_eq!(count_satisfying(&cnf("p cnf 3 1\n1 2 3 0")).unwrap(), 7);
        assert!(matches!(
            count_satisfying(&Cnf3::new(21, &[]).unwrap()),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn gadget_sizes() {
        let g = build_gadget(&cnf("p cnf 1 1\n1 1 1 0")).unwrap();
        assert_eq!((g.pattern.len(), g.text.len()), (9, 43));
        let g = build_gadget(&cnf("p cnf 2 1\n1 2 2 0")).unwrap();
        assert_eq!((g.pattern.len(), g.text.len()), (13, 51));
    }

    #[test]
    fn variable_blocks_keep_their_shape() {
        let f = cnf("p cnf 3 2\n1 -2 3 0\n-1 2 2 0");
        let g = build_gadget(&f).unwrap();
        let n = 3i64;
        let mut blocks = Vec::new();
        for i in 1..=n {
            blocks.extend([2 * n + 2 * i - 1, i, 2 * n - i + 1, 2 * n + 2 * i]);
        }
        let head = &g.pattern.values()[..12];
        let want = Permutation::from_ranks(&blocks).unwrap();
        assert_eq!(Permutation::from_ranks(head).unwrap(), want);
    }

    #[test]
    fn repeated_variables_stay_distinct() {
        for text in ["p cnf 1 1\n1 1 1 0", "p cnf 1 2\n1 1 1 0\n-1 -1 -1 0", "p cnf 2 2\n1 2 2 0\n-2 -2 1 0"] {
            assert!(build_gadget(&cnf(text)).is_ok(), "{text}");
        }
    }

    #[test]
    fn satisfying_assignment_gives_structured_match() {
        // r from a satisfying assignment and s from its literal pattern is a match
        let f = cnf("p cnf 3 2\n1 -2 3 0\n-1 2 2 0");
        let g = build_gadget(&f).unwrap();
        let pairs = structured_matches(&g, None).unwrap();
        for mask in 0u8..8 {
            let assignment: Vec<bool> = (0..3).map(|v| mask >> v & 1 == 1).collect();
            if !f.satisfied_by(&assignment) {
                continue;
            }
            let r: Vec<u8> = assignment.iter().map(|&x| u8::from(!x)).collect();
            let s: Vec<u8> = f
                .clauses()
                .iter()
                .map(|c| {
                    let pat = c.map(|l| l.holds(&assignment));
                    ROWS.iter().position(|row| *row == pat).unwrap() as u8
                })
                .collect();
            assert!(rows_agree(&f, &r, &s));
            assert!(pairs.contains(&(r, s)));
        }
    }

    #[test]
    fn structured_matches_are_matches() {
        let f = cnf("p cnf 2 1\n1 2 2 0");
        let g = build_gadget(&f).unwrap();
        let matcher = PermMatcher::new(&g.pattern, &g.text, false);
        let mut found = Vec::new();
        matcher.for_each(|img| {
            found.push(img.to_vec());
            true
        });
        for (r, s) in structured_matches(&g, None).unwrap() {
            let img = g.structured_map(&r, &s);
            assert!(g.is_block_local(&img));
            assert!(found.contains(&img));
        }
    }

    #[test]
    fn gadget_match_counts() {
        // frozen from an independent subset scan over the rank-normalized gadget
        for (text, plain, induced) in [("p cnf 1 1\n1 1 1 0", 14831, 3), ("p cnf 2 1\n1 2 2 0", 302, 10), ("p cnf 3 1\n1 2 3 0", 62, 24)] {
            let g = build_gadget(&cnf(text)).unwrap();
            assert_eq!(PermMatcher::new(&g.pattern, &g.text, false).count(None).unwrap(), plain, "{text}");
            assert_eq!(PermMatcher::new(&g.pattern, &g.text, true).count(None).unwrap(), induced, "{text}");
        }
    }

    #[test]
    fn report_line() {
        let r = VerifyReport {
            method: Method::Backtrack,
            matches: 1,
            sat: 1,
            pairs: vec![],
        };
        assert_eq!(r.to_string(), "matches=1 sat=1 verdict=PASS");
        assert_eq!(format_pair(&[0, 1], &[3, 5]), "r=01 s=3,5");
    }
}
