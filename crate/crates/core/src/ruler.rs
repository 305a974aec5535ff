//! Golomb rulers and modular Golomb rulers.
//!
//! A `(v, k)` modular Golomb ruler (MGR) is a set of `k` residues whose
//! `k(k-1)` pairwise differences are distinct and nonzero modulo `v`. Its
//! circulant is exactly the incidence matrix of a cyclic configuration `v_k`.

use crate::arith::gcd;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ruler {
    marks: Vec<u64>,
    modulus: Option<u64>,
}

impl Ruler {
    /// A plain ruler. Marks must be strictly increasing.
    pub fn new(marks: Vec<u64>) -> Result<Self> {
        if marks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedMarks);
        }
        Ok(Ruler { marks, modulus: None })
    }

    /// A ruler carrying its modulus. Marks must be strictly increasing and
    /// below `v`; the MGR property itself is not checked here.
    pub fn with_modulus(marks: Vec<u64>, v: u64) -> Result<Self> {
        let mut r = Self::new(marks)?;
        r.check_below(v)?;
        r.modulus = Some(v);
        Ok(r)
    }

    /// Sorts and deduplicates residues mod `v`.
    pub fn from_residues(residues: impl IntoIterator<Item = u64>, v: u64) -> Self {
        let mut marks: Vec<u64> = residues.into_iter().map(|x| x % v).collect();
        marks.sort_unstable();
        marks.dedup();
        Ruler { marks, modulus: Some(v) }
    }

    pub fn marks(&self) -> &[u64] {
        &self.marks
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    pub fn order(&self) -> usize {
        self.marks.len()
    }

    /// `a_k - a_1`.
    pub fn length(&self) -> u64 {
        match (self.marks.first(), self.marks.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0,
        }
    }

    fn check_below(&self, v: u64) -> Result<()> {
        match self.marks.iter().find(|&&a| a >= v) {
            Some(&mark) => Err(Error::MarksExceedModulus { mark, v }),
            None => Ok(()),
        }
    }

    /// All positive differences `a_i - a_j` with `j < i` are distinct.
    pub fn is_golomb(&self) -> bool {
        let len = self.length() as usize;
        let mut seen = vec![false; len + 1];
        for (i, &a) in self.marks.iter().enumerate() {
            for &b in &self.marks[..i] {
                let d = (a - b) as usize;
                if std::mem::replace(&mut seen[d], true) {
                    return false;
                }
            }
        }
        true
    }

    /// All `k(k-1)` differences are distinct and nonzero modulo `v`.
    pub fn is_modular_golomb(&self, v: u64) -> Result<bool> {
        self.check_below(v)?;
        Ok(sidon_mod(&self.marks, v))
    }

    /// The multiset `{a_i - a_j mod v : i != j}` in generation order.
    pub fn differences(&self, v: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.order() * self.order().saturating_sub(1));
        for (i, &a) in self.marks.iter().enumerate() {
            for (j, &b) in self.marks.iter().enumerate() {
                if i != j {
                    out.push((a + v - b % v) % v);
                }
            }
        }
        out
    }

    /// `2L + 1`: the ruler is an MGR for every modulus at least this large.
    pub fn modular_bound(&self) -> Result<u64> {
        if !self.is_golomb() {
            return Err(Error::NotGolomb);
        }
        Ok(2 * self.length() + 1)
    }

    fn require_mgr(&self, v: u64) -> Result<()> {
        if self.is_modular_golomb(v)? {
            Ok(())
        } else {
            Err(Error::NotModularGolomb { v, k: self.order() })
        }
    }

    /// Sorted residues `m·a_i + b mod v`.
    pub fn transform(&self, v: u64, m: u64, b: u64) -> Result<Ruler> {
        if gcd(m % v, v) != 1 {
            return Err(Error::GcdNotOne { m, v });
        }
        self.require_mgr(v)?;
        let out = self.transform_unchecked(v, m, b);
        debug_assert!(sidon_mod(&out.marks, v));
        Ok(out)
    }

    fn transform_unchecked(&self, v: u64, m: u64, b: u64) -> Ruler {
        let (m, b) = (m % v, b % v);
        Ruler::from_residues(self.marks.iter().map(|&a| ((a as u128 * m as u128 + b as u128) % v as u128) as u64), v)
    }

    /// Every `Δ` in `1..=delta_max` for which the same marks form a
    /// `(v + Δ, k)` MGR.
    pub fn stretch(&self, v: u64, delta_max: u64) -> Result<Vec<u64>> {
        self.require_mgr(v)?;
        Ok((1..=delta_max).filter(|&dl| sidon_mod(&self.marks, v + dl)).collect())
    }

    /// Drops the `delta` largest marks.
    pub fn truncate(&self, delta: usize) -> Result<Ruler> {
        let k = self.order();
        if delta >= k {
            return Err(Error::DeltaTooLarge { delta, k });
        }
        Ok(Ruler { marks: self.marks[..k - delta].to_vec(), modulus: self.modulus })
    }

    /// Translates so the smallest mark is zero, keeping the modulus.
    pub fn normalized(&self) -> Ruler {
        match (self.marks.first(), self.modulus) {
            (Some(&a0), Some(v)) => Ruler::from_residues(self.marks.iter().map(|&a| a + v - a0), v),
            (Some(&a0), None) => Ruler { marks: self.marks.iter().map(|&a| a - a0).collect(), modulus: None },
            _ => self.clone(),
        }
    }

    /// Same marks with a new modulus.
    pub fn reduce_mod(&self, v: u64) -> Result<Ruler> {
        Ruler::with_modulus(self.marks.clone(), v)
    }
}

/// Sidon test in `Z_v` for residues already below `v`.
pub(crate) fn sidon_mod(marks: &[u64], v: u64) -> bool {
    let k = marks.len() as u64;
    if k * k.saturating_sub(1) >= v.max(1) && k > 1 {
        return false;
    }
    let mut seen = vec![false; v as usize];
    for (i, &a) in marks.iter().enumerate() {
        for &b in &marks[..i] {
            let d = ((a + v - b) % v) as usize;
            let e = (v as usize - d) % v as usize;
            if d == 0 || d == e || seen[d] || seen[e] {
                return false;
            }
            seen[d] = true;
            seen[e] = true;
        }
    }
    true
}

/// Outcome of an exhaustive ruler search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Ruler),
    /// The whole tree was explored: no `(v, k)` MGR exists.
    NotFound,
    /// The node budget ran out before a verdict.
    BudgetExceeded,
}

/// Exhaustive backtracking for a `(v, k)` MGR with `a_1 = 0`.
///
/// Returns the lexicographically first witness. `budget` caps the number of
/// search nodes; `None` means unlimited.
pub fn search_mgr(v: u64, k: usize, budget: Option<u64>) -> SearchOutcome {
    if k == 0 || (k as u64) > v {
        return SearchOutcome::NotFound;
    }
    if k == 1 {
        return SearchOutcome::Found(Ruler { marks: vec![0], modulus: Some(v) });
    }
    // k(k-1) distinct nonzero residues need v > k(k-1)
    if (k * (k - 1)) as u64 >= v {
        return SearchOutcome::NotFound;
    }
    let mut s = Search {
        v: v as usize,
        k,
        used: vec![false; v as usize],
        marks: vec![0],
        nodes: 0,
        budget: budget.unwrap_or(u64::MAX),
    };
    match s.dfs(1) {
        Some(true) => {
            SearchOutcome::Found(Ruler { marks: s.marks.iter().map(|&a| a as u64).collect(), modulus: Some(v) })
        }
        Some(false) => SearchOutcome::NotFound,
        None => SearchOutcome::BudgetExceeded,
    }
}

struct Search {
    v: usize,
    k: usize,
    used: Vec<bool>,
    marks: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Search {
    /// `Some(true)` when complete, `Some(false)` when exhausted, `None` when
    /// out of budget.
    fn dfs(&mut self, from: usize) -> Option<bool> {
        if self.marks.len() == self.k {
            return Some(true);
        }
        let remaining = self.k - self.marks.len();
        let last = self.v - remaining;
        for x in from..=last {
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            if !self.try_push(x) {
                continue;
            }
            match self.dfs(x + 1) {
                Some(false) => self.pop(),
                other => return other,
            }
        }
        Some(false)
    }

    fn try_push(&mut self, x: usize) -> bool {
        let v = self.v;
        let mut added = Vec::with_capacity(self.marks.len());
        for &a in &self.marks {
            let d = x - a;
            let e = v - d;
            if d == e || self.used[d] || self.used[e] {
                for &d in &added {
                    self.used[d] = false;
                    self.used[v - d] = false;
                }
                return false;
            }
            self.used[d] = true;
            self.used[e] = true;
            added.push(d);
        }
        self.marks.push(x);
        true
    }

    fn pop(&mut self) {
        let x = self.marks.pop().expect("non-empty");
        for &a in &self.marks {
            let d = x - a;
            self.used[d] = false;
            self.used[self.v - d] = false;
        }
    }
}

/// Applies every transform `(m, b)` with `gcd(m, v) = 1`, `b < v` and reports
/// each distinct transformed ruler that is also an MGR modulo a target
/// `v' > v`. Results are sorted by `(v', marks)`.
pub fn orbit_search(base: &Ruler, v: u64, targets: &[u64]) -> Result<Vec<(u64, Ruler)>> {
    base.require_mgr(v)?;
    let targets: Vec<u64> = targets.iter().copied().filter(|&t| t > v).collect();
    let mut hits = std::collections::BTreeSet::new();
    if targets.is_empty() {
        return Ok(Vec::new());
    }
    for m in (1..v).filter(|&m| gcd(m, v) == 1) {
        for b in 0..v {
            let r = base.transform_unchecked(v, m, b);
            for &t in &targets {
                if sidon_mod(&r.marks, t) {
                    let mut hit = r.clone();
                    hit.modulus = Some(t);
                    hits.insert((t, hit));
                }
            }
        }
    }
    Ok(hits.into_iter().collect())
}

/// Like [`orbit_search`] but stops at the first witness per target, keeps
/// only the `keep` smallest marks of each transform, and uses the sumset
/// criterion: marks with distinct positive differences `P` form an MGR
/// modulo any `v'` above the largest mark iff `v'` is not in `P + P`.
///
/// Targets may lie below `v` when marks are dropped. `budget` bounds the
/// number of transforms tried.
pub fn orbit_first_hits(base: &Ruler, v: u64, keep: usize, targets: &[u64], budget: u64) -> Vec<(u64, Ruler)> {
    let mut open: Vec<u64> = targets.to_vec();
    open.sort_unstable();
    open.dedup();
    let keep = keep.min(base.order());
    let mut found = Vec::new();
    let hi = open.last().copied().unwrap_or(0) as usize;
    let mut tried = 0u64;
    let mut diffs = Vec::new();
    let mut seen = vec![false; v as usize];
    let mut sums = vec![false; hi + 1];
    'outer: for m in (1..v).filter(|&m| gcd(m, v) == 1) {
        for b in 0..v {
            if open.is_empty() || tried >= budget {
                break 'outer;
            }
            tried += 1;
            let mut r = base.transform_unchecked(v, m, b);
            r.marks.truncate(keep);
            let top = r.marks.last().copied().unwrap_or(0);
            if open.iter().all(|&t| t <= top) {
                continue;
            }
            diffs.clear();
            let mut golomb = true;
            for (i, &a) in r.marks.iter().enumerate() {
                for &c in &r.marks[..i] {
                    let d = (a - c) as usize;
                    if std::mem::replace(&mut seen[d], true) {
                        golomb = false;
                    }
                    diffs.push(d);
                }
            }
            for &d in &diffs {
                seen[d] = false;
            }
            if !golomb {
                continue;
            }
            let mut touched = Vec::new();
            for (i, &d) in diffs.iter().enumerate() {
                for &e in &diffs[i..] {
                    let s = d + e;
                    if s <= hi && !sums[s] {
                        sums[s] = true;
                        touched.push(s);
                    }
                }
            }
            open.retain(|&t| {
                if t <= top || sums[t as usize] {
                    return true;
                }
                found.push((t, Ruler { marks: r.marks.clone(), modulus: Some(t) }));
                false
            });
            for s in touched {
                sums[s] = false;
            }
        }
    }
    found.sort();
    found
}
