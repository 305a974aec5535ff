//! Extending aggregates and the one-point extension `M(v, k) → M(v+1, k)`.
//!
//! An extending aggregate is `k − 1` pairwise disjoint lines together with
//! `k − 1` pairwise non-collinear points whose intersection submatrix is a
//! permutation matrix. Cloning its ones into a new line and a new point
//! yields a configuration one larger with the same `k`.

use crate::bdc::BdcSpec;
use crate::bits::BitRow;
use crate::matrix::IncidenceMatrix;
use crate::{Error, Result};

/// Lines `rows[u]` and points `cols[pi[u]]` meet; no other pair does.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EAggregate {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub pi: Vec<usize>,
}

impl EAggregate {
    /// Whether this is an extending aggregate of the `k`-regular matrix `m`.
    pub fn is_valid(&self, m: &IncidenceMatrix, k: usize) -> bool {
        let n = k.saturating_sub(1);
        let v = m.v();
        if self.rows.len() != n || self.cols.len() != n || self.pi.len() != n {
            return false;
        }
        if self.rows.iter().chain(&self.cols).any(|&x| x >= v) {
            return false;
        }
        let mut image = self.pi.clone();
        image.sort_unstable();
        if image != (0..n).collect::<Vec<_>>() {
            return false;
        }
        let t = m.transpose();
        let pairwise_disjoint = |rows: &[BitRow], idx: &[usize]| {
            idx.iter().enumerate().all(|(a, &i)| idx[..a].iter().all(|&j| i != j && rows[i].and_count(&rows[j]) == 0))
        };
        if !pairwise_disjoint(m.rows(), &self.rows) || !pairwise_disjoint(t.rows(), &self.cols) {
            return false;
        }
        self.rows
            .iter()
            .enumerate()
            .all(|(u, &r)| self.cols.iter().enumerate().all(|(c, &col)| m.get(r, col) == (self.pi[u] == c)))
    }

    fn consumed(&self, rows: &mut Vec<usize>, cols: &mut Vec<usize>) {
        rows.extend(&self.rows);
        cols.extend(&self.cols);
    }
}

/// Result of an aggregate search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AggregateOutcome {
    Found(EAggregate),
    NotFound,
    BudgetExceeded,
}

/// Line and point indices an aggregate may not use.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Exclusion {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// Depth-first search for the lexicographically first extending aggregate
/// avoiding `exclude`. `budget` caps visited nodes (`None` is unlimited).
pub fn find_aggregate(m: &IncidenceMatrix, exclude: &Exclusion, budget: Option<u64>) -> Result<AggregateOutcome> {
    let k = m.verify()?.k;
    let n = k.saturating_sub(1);
    if n == 0 {
        return Ok(AggregateOutcome::Found(EAggregate { rows: vec![], cols: vec![], pi: vec![] }));
    }
    let v = m.v();
    let t = m.transpose();
    let mut banned_rows = vec![false; v];
    let mut banned_cols = vec![false; v];
    for &r in &exclude.rows {
        banned_rows[r] = true;
    }
    for &c in &exclude.cols {
        banned_cols[c] = true;
    }
    let mut s = AggSearch {
        m,
        t: &t,
        n,
        banned_rows,
        banned_cols,
        points_used: BitRow::new(v),
        lines_used: BitRow::new(v),
        chosen: Vec::with_capacity(n),
        nodes: 0,
        budget: budget.unwrap_or(u64::MAX),
    };
    Ok(match s.dfs(0) {
        Some(true) => {
            let rows: Vec<usize> = s.chosen.iter().map(|p| p.0).collect();
            let mut cols: Vec<usize> = s.chosen.iter().map(|p| p.1).collect();
            cols.sort_unstable();
            let pi = s.chosen.iter().map(|p| cols.binary_search(&p.1).expect("chosen")).collect();
            AggregateOutcome::Found(EAggregate { rows, cols, pi })
        }
        Some(false) => AggregateOutcome::NotFound,
        None => AggregateOutcome::BudgetExceeded,
    })
}

struct AggSearch<'a> {
    m: &'a IncidenceMatrix,
    t: &'a IncidenceMatrix,
    n: usize,
    banned_rows: Vec<bool>,
    banned_cols: Vec<bool>,
    /// Union of the chosen lines' points.
    points_used: BitRow,
    /// Union of the lines through the chosen points.
    lines_used: BitRow,
    chosen: Vec<(usize, usize)>,
    nodes: u64,
    budget: u64,
}

impl AggSearch<'_> {
    fn dfs(&mut self, from: usize) -> Option<bool> {
        if self.chosen.len() == self.n {
            return Some(true);
        }
        let v = self.m.v();
        let need = self.n - self.chosen.len();
        for r in from..=v.saturating_sub(need) {
            if self.banned_rows[r] || self.lines_used.get(r) {
                continue;
            }
            let line = self.m.row(r);
            if line.and_count_capped(&self.points_used, 1) > 0 {
                continue;
            }
            for c in line.ones() {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return None;
                }
                if self.banned_cols[c] {
                    continue;
                }
                let through = self.t.row(c);
                if through.and_count_capped(&self.lines_used, 1) > 0 {
                    continue;
                }
                let (saved_p, saved_l) = (self.points_used.clone(), self.lines_used.clone());
                for x in line.ones() {
                    self.points_used.set(x, true);
                }
                for y in through.ones() {
                    self.lines_used.set(y, true);
                }
                self.chosen.push((r, c));
                match self.dfs(r + 1) {
                    Some(false) => {
                        self.chosen.pop();
                        self.points_used = saved_p;
                        self.lines_used = saved_l;
                    }
                    other => return other,
                }
            }
        }
        Some(false)
    }
}

/// Adds line and point `v`: the new line holds `v` and the aggregate's
/// points, the aggregate's lines gain point `v`, and the cloned ones are
/// cleared.
pub fn extend_once(m: &IncidenceMatrix, a: &EAggregate) -> Result<IncidenceMatrix> {
    let k = m.verify()?.k;
    if !a.is_valid(m, k) {
        return Err(Error::InvalidAggregate);
    }
    let v = m.v();
    let mut out = m.clone();
    out.grow();
    out.set(v, v, true);
    for (u, &r) in a.rows.iter().enumerate() {
        out.set(r, v, true);
        out.set(r, a.cols[a.pi[u]], false);
    }
    for &c in &a.cols {
        out.set(v, c, true);
    }
    let check = out.verify()?;
    debug_assert_eq!((check.v, check.k), (v + 1, k));
    Ok(out)
}

/// `theta` successive extensions, each with an aggregate that avoids every
/// line and point consumed earlier in the chain.
pub fn extend_chain(m: &IncidenceMatrix, theta: usize, budget: Option<u64>) -> Result<IncidenceMatrix> {
    let mut cur = m.clone();
    let mut used = Exclusion::default();
    for step in 1..=theta {
        match find_aggregate(&cur, &used, budget)? {
            AggregateOutcome::Found(a) => {
                cur = extend_once(&cur, &a)?;
                a.consumed(&mut used.rows, &mut used.cols);
            }
            _ => return Err(Error::ExtensionUnavailable { step }),
        }
    }
    Ok(cur)
}

/// Aggregates read off a BDC grid whose weights are all 0 or 1: block row
/// `r` against block column `r + h` (with `w_h = 1`) for `r < t`, then one
/// more from the new lines and points. Requires `d ≥ k − 1`.
pub fn structural_aggregates(b: &BdcSpec, theta: usize) -> Option<Vec<EAggregate>> {
    let (t, d, k) = (b.t(), b.d() as usize, b.k());
    let n = k.checked_sub(1)?;
    if b.weights().iter().any(|&w| w > 1) || n > d || theta > t + 1 {
        return None;
    }
    let h = b.weights().iter().position(|&w| w == 1)?;
    let v = t * d;
    let mut out = Vec::with_capacity(theta);
    for r in 0..theta.min(t) {
        let s = (r + h) % t;
        let e = b.block(r, s)[0] as usize;
        let rows: Vec<usize> = (0..n).map(|a| r * d + a).collect();
        let images: Vec<usize> = (0..n).map(|a| s * d + (a + e) % d).collect();
        let mut cols = images.clone();
        cols.sort_unstable();
        let pi = images.iter().map(|c| cols.binary_search(c).expect("image")).collect();
        out.push(EAggregate { rows, cols, pi });
    }
    if theta == t + 1 {
        if n > t {
            return None;
        }
        let idx: Vec<usize> = (v..v + n).collect();
        out.push(EAggregate { rows: idx.clone(), cols: idx, pi: (0..n).collect() });
    }
    Some(out)
}

/// Extends a BDC configuration `theta` times, using the structural
/// aggregates when they apply and the generic search otherwise.
pub fn extend_chain_bdc(b: &BdcSpec, theta: usize, budget: Option<u64>) -> Result<IncidenceMatrix> {
    let m = b.to_matrix();
    if let Some(aggs) = structural_aggregates(b, theta) {
        let mut cur = m.clone();
        let mut ok = true;
        for a in &aggs {
            match extend_once(&cur, a) {
                Ok(next) => cur = next,
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Ok(cur);
        }
    }
    extend_chain(&m, theta, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::bose_ruler;
    use crate::matrix::CirculantSpec;

    fn bose_split(q: u64) -> BdcSpec {
        BdcSpec::split(&bose_ruler(q).unwrap().to_circulant().unwrap(), q as usize + 1).unwrap()
    }

    fn fano() -> IncidenceMatrix {
        IncidenceMatrix::from_circulant(&CirculantSpec::new(7, [0, 1, 3]))
    }

    #[test]
    fn k2_always_has_an_aggregate() {
        let m = IncidenceMatrix::from_circulant(&CirculantSpec::new(5, [0, 1]));
        match find_aggregate(&m, &Exclusion::default(), None).unwrap() {
            AggregateOutcome::Found(a) => assert_eq!((a.rows, a.cols), (vec![0], vec![0])),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fano_has_no_aggregate() {
        assert_eq!(find_aggregate(&fano(), &Exclusion::default(), None).unwrap(), AggregateOutcome::NotFound);
        assert_eq!(extend_chain(&fano(), 1, None).unwrap_err(), Error::ExtensionUnavailable { step: 1 });
    }

    #[test]
    fn bose_four_extends() {
        let b = bose_split(4);
        let m = b.to_matrix();
        let a = match find_aggregate(&m, &Exclusion::default(), None).unwrap() {
            AggregateOutcome::Found(a) => a,
            other => panic!("{other:?}"),
        };
        let e = extend_once(&m, &a).unwrap();
        let r = e.verify().unwrap();
        assert_eq!((r.v, r.k), (16, 4));
        assert_eq!(e.row(15).count_ones(), 4);
    }

    #[test]
    fn invalid_aggregate_rejected() {
        let m = bose_split(4).to_matrix();
        let bogus = EAggregate { rows: vec![0, 1, 2], cols: vec![0, 1, 2], pi: vec![0, 0, 1] };
        assert_eq!(extend_once(&m, &bogus).unwrap_err(), Error::InvalidAggregate);
        let short = EAggregate { rows: vec![0, 1], cols: vec![0, 1], pi: vec![0, 1] };
        assert_eq!(extend_once(&m, &short).unwrap_err(), Error::InvalidAggregate);
        let clash = EAggregate { rows: vec![0, 0, 1], cols: vec![0, 1, 2], pi: vec![0, 1, 2] };
        assert_eq!(extend_once(&m, &clash).unwrap_err(), Error::InvalidAggregate);
    }

    #[test]
    fn chains_on_bose_four() {
        let b = bose_split(4);
        assert_eq!(extend_chain_bdc(&b, 0, None).unwrap(), b.to_matrix());
        for theta in 1..=6 {
            let r = extend_chain_bdc(&b, theta, None).unwrap().verify().unwrap();
            assert_eq!((r.v, r.k), (15 + theta, 4));
        }
    }

    #[test]
    fn structural_aggregates_are_disjoint() {
        let b = bose_split(5);
        let aggs = structural_aggregates(&b, 7).unwrap();
        let mut rows: Vec<usize> = aggs.iter().flat_map(|a| a.rows.clone()).collect();
        let mut cols: Vec<usize> = aggs.iter().flat_map(|a| a.cols.clone()).collect();
        let (nr, nc) = (rows.len(), cols.len());
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        assert_eq!((rows.len(), cols.len()), (nr, nc));
    }

    #[test]
    fn zero_one_starts_extend_to_c_plus_one() {
        for q in [4u64, 5, 7] {
            let b = bose_split(q);
            let zero = b.weights().iter().position(|&w| w == 0).unwrap();
            for c in 3..=(q as usize + 1).min(7) {
                let s = b.shift_truncate(zero, c).unwrap();
                assert_eq!(s.weights()[0], 0);
                for theta in [c, c + 1] {
                    let r = extend_chain_bdc(&s, theta, None).unwrap().verify().unwrap();
                    assert_eq!((r.v, r.k), (c * (q as usize - 1) + theta, c - 1), "q={q} c={c} θ={theta}");
                }
            }
        }
    }

    #[test]
    fn all_ones_starts_extend_to_c_plus_one() {
        for d in [3u64, 5, 7] {
            for c in 2..=(d as usize).min(7) {
                let b = BdcSpec::latin(d, c).unwrap();
                assert!(b.weights().iter().all(|&w| w == 1));
                let r = extend_chain_bdc(&b, c + 1, None).unwrap().verify().unwrap();
                assert_eq!((r.v, r.k), (c * d as usize + c + 1, c));
            }
        }
    }
}
