//! Incidence matrices `M(v, k)` and the checks that make them configurations.

use std::collections::VecDeque;

use crate::bits::BitRow;
use crate::ruler::Ruler;
use crate::{Error, Result};

/// Support of the first row of a circulant; row `i` has ones at
/// `(i + d) mod v` for `d` in the support.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CirculantSpec {
    pub v: u64,
    pub support: Vec<u64>,
}

impl CirculantSpec {
    /// Sorted, deduplicated support; no Sidon check.
    pub fn new(v: u64, support: impl IntoIterator<Item = u64>) -> Self {
        let mut support: Vec<u64> = support.into_iter().map(|d| d % v).collect();
        support.sort_unstable();
        support.dedup();
        CirculantSpec { v, support }
    }

    /// Circulant of an MGR.
    pub fn from_ruler(r: &Ruler, v: u64) -> Result<Self> {
        if !r.is_modular_golomb(v)? {
            return Err(Error::NotModularGolomb { v, k: r.order() });
        }
        Ok(Self::new(v, r.marks().iter().copied()))
    }

    pub fn k(&self) -> usize {
        self.support.len()
    }

    /// Shift decomposition: one permutation `i ↦ i + d` per support element.
    pub fn decompose(&self) -> PermutationDecomposition {
        let v = self.v as usize;
        PermutationDecomposition {
            perms: self.support.iter().map(|&d| (0..v).map(|i| (i + d as usize) % v).collect()).collect(),
        }
    }
}

impl Ruler {
    /// Circulant of this ruler under its own modulus.
    pub fn to_circulant(&self) -> Result<CirculantSpec> {
        let v = self.modulus().ok_or(Error::ConstraintViolated("ruler has no modulus".into()))?;
        CirculantSpec::from_ruler(self, v)
    }
}

/// What [`IncidenceMatrix::verify`] establishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub v: usize,
    pub k: usize,
    /// `v − (k² − k + 1)`.
    pub deficiency: i64,
}

/// Square 0/1 matrix with bit-packed rows. Rows are lines, columns points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IncidenceMatrix {
    rows: Vec<BitRow>,
}

impl IncidenceMatrix {
    pub fn zeros(v: usize) -> Self {
        IncidenceMatrix { rows: vec![BitRow::new(v); v] }
    }

    pub fn from_rows(rows: Vec<BitRow>) -> Result<Self> {
        let v = rows.len();
        if v == 0 || rows.iter().any(|r| r.len() != v) {
            return Err(Error::NotSquare);
        }
        Ok(IncidenceMatrix { rows })
    }

    pub fn from_dense(rows: &[Vec<bool>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| BitRow::from_indices(r.len(), r.iter().enumerate().filter(|x| *x.1).map(|x| x.0)))
                .collect(),
        )
    }

    pub fn from_circulant(c: &CirculantSpec) -> Self {
        let v = c.v as usize;
        let rows = (0..v).map(|i| BitRow::from_indices(v, c.support.iter().map(|&d| (i + d as usize) % v))).collect();
        IncidenceMatrix { rows }
    }

    /// Permutation matrix with ones at `(i, perm[i])`.
    pub fn from_permutation(perm: &[usize]) -> Self {
        let v = perm.len();
        IncidenceMatrix { rows: perm.iter().map(|&j| BitRow::from_indices(v, [j])).collect() }
    }

    pub fn v(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, on: bool) {
        self.rows[i].set(j, on);
    }

    pub fn row(&self, i: usize) -> &BitRow {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitRow] {
        &self.rows
    }

    /// Column indices of the ones in row `i`.
    pub fn row_support(&self, i: usize) -> Vec<usize> {
        self.rows[i].ones().collect()
    }

    pub fn transpose(&self) -> IncidenceMatrix {
        let v = self.v();
        let mut t = IncidenceMatrix::zeros(v);
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    pub fn column_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.v()];
        for r in &self.rows {
            for j in r.ones() {
                w[j] += 1;
            }
        }
        w
    }

    /// Appends an all-zero last row and column.
    pub fn grow(&mut self) {
        for r in &mut self.rows {
            r.push_zero();
        }
        let v = self.rows.len() + 1;
        self.rows.push(BitRow::new(v));
    }

    /// Rows as sorted strings, for comparing matrices up to row order.
    pub fn sorted_rows(&self) -> Vec<Vec<usize>> {
        let mut rows: Vec<Vec<usize>> = self.rows.iter().map(|r| r.ones().collect()).collect();
        rows.sort();
        rows
    }

    /// Applies a simultaneous relabelling: row `i` moves to `perm[i]` and
    /// column `j` to `perm[j]`.
    pub fn permuted(&self, perm: &[usize]) -> IncidenceMatrix {
        let v = self.v();
        let mut out = IncidenceMatrix::zeros(v);
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones() {
                out.rows[perm[i]].set(perm[j], true);
            }
        }
        out
    }

    /// Checks constant row and column weight and that no two rows share two
    /// columns. Errors name the first offending index (pair).
    pub fn verify(&self) -> Result<VerifyReport> {
        let v = self.v();
        let k = self.rows[0].count_ones();
        if let Some(i) = self.rows.iter().position(|r| r.count_ones() != k) {
            return Err(Error::RowWeightNotConstant(i));
        }
        if let Some(j) = self.column_weights().iter().position(|&w| w != k) {
            return Err(Error::ColumnWeightNotConstant(j));
        }
        if let Some((i, j)) = self.first_heavy_pair() {
            return Err(Error::TwoByTwoAllOnes(i, j));
        }
        let kk = k as i64;
        Ok(VerifyReport { v, k, deficiency: v as i64 - (kk * kk - kk + 1) })
    }

    /// Lexicographically first row pair with intersection at least two.
    fn first_heavy_pair(&self) -> Option<(usize, usize)> {
        let v = self.v();
        let scan = |i: usize| {
            let ri = &self.rows[i];
            (i + 1..v).find(|&j| ri.and_count_capped(&self.rows[j], 2) >= 2).map(|j| (i, j))
        };
        let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(16);
        if v < 256 || threads == 1 {
            return (0..v).find_map(scan);
        }
        std::thread::scope(|s| {
            let handles: Vec<_> =
                (0..threads).map(|t| s.spawn(move || (t..v).step_by(threads).find_map(scan))).collect();
            handles.into_iter().filter_map(|h| h.join().expect("verifier thread")).min()
        })
    }

    /// Girth of the bipartite Levi graph; `None` if it has no cycle.
    pub fn girth(&self) -> Option<usize> {
        let v = self.v();
        let lines: Vec<Vec<usize>> = self.rows.iter().map(|r| r.ones().collect()).collect();
        let mut points = vec![Vec::new(); v];
        for (i, l) in lines.iter().enumerate() {
            for &j in l {
                points[j].push(i);
            }
        }
        // vertices 0..v are lines, v..2v points
        let neighbors = |x: usize| -> &[usize] {
            if x < v {
                &lines[x]
            } else {
                &points[x - v]
            }
        };
        let offset = |x: usize, y: usize| if x < v { y + v } else { y };

        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; 2 * v];
        let mut parent = vec![usize::MAX; 2 * v];
        let mut touched = Vec::new();
        let mut queue = VecDeque::new();
        for root in 0..2 * v {
            for &x in &touched {
                dist[x] = usize::MAX;
            }
            touched.clear();
            queue.clear();
            dist[root] = 0;
            touched.push(root);
            queue.push_back(root);
            'bfs: while let Some(x) = queue.pop_front() {
                // any cycle still to be found through x is at least this long
                if 2 * dist[x] + 2 >= best {
                    break;
                }
                for &y in neighbors(x) {
                    let y = offset(x, y);
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        parent[y] = x;
                        touched.push(y);
                        queue.push_back(y);
                    } else if parent[x] != y {
                        best = best.min(dist[x] + dist[y] + 1);
                        if best <= 4 {
                            break 'bfs;
                        }
                    }
                }
            }
            if best == 4 {
                break;
            }
        }
        (best != usize::MAX).then_some(best)
    }

    /// Splits a `k`-regular matrix into `k` disjoint permutation matrices
    /// by repeated perfect matching.
    pub fn decompose(&self) -> Result<PermutationDecomposition> {
        let report = self.verify_regular()?;
        let v = self.v();
        let mut adj: Vec<Vec<usize>> = self.rows.iter().map(|r| r.ones().collect()).collect();
        let mut perms = Vec::with_capacity(report);
        for _ in 0..report {
            let matching = hopcroft_karp(&adj, v).expect("regular bipartite graphs have perfect matchings");
            for (i, &j) in matching.iter().enumerate() {
                adj[i].retain(|&c| c != j);
            }
            perms.push(matching);
        }
        Ok(PermutationDecomposition { perms })
    }

    /// Row/column regularity only; returns `k`.
    fn verify_regular(&self) -> Result<usize> {
        let k = self.rows[0].count_ones();
        if let Some(i) = self.rows.iter().position(|r| r.count_ones() != k) {
            return Err(Error::RowWeightNotConstant(i));
        }
        if let Some(j) = self.column_weights().iter().position(|&w| w != k) {
            return Err(Error::ColumnWeightNotConstant(j));
        }
        Ok(k)
    }

    /// Removes `delta` permutations (the lexicographically first after
    /// sorting the decomposition), giving a `v_{k−δ}`.
    pub fn reduce(&self, delta: usize) -> Result<IncidenceMatrix> {
        let k = self.verify()?.k;
        if delta >= k {
            return Err(Error::DeltaTooLarge { delta, k });
        }
        let mut perms = self.decompose()?.perms;
        perms.sort();
        let mut out = self.clone();
        for p in &perms[..delta] {
            for (i, &j) in p.iter().enumerate() {
                out.rows[i].set(j, false);
            }
        }
        Ok(out)
    }
}

/// `k` permutations `perm[i] = column of the one in row i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationDecomposition {
    pub perms: Vec<Vec<usize>>,
}

impl PermutationDecomposition {
    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    /// Sum of the permutation matrices, or `None` if two overlap or an entry
    /// is not a permutation.
    pub fn sum(&self, v: usize) -> Option<IncidenceMatrix> {
        let mut m = IncidenceMatrix::zeros(v);
        for p in &self.perms {
            let mut seen = vec![false; v];
            if p.len() != v {
                return None;
            }
            for (i, &j) in p.iter().enumerate() {
                if j >= v || std::mem::replace(&mut seen[j], true) || m.get(i, j) {
                    return None;
                }
                m.set(i, j, true);
            }
        }
        Some(m)
    }
}

/// Perfect matching of rows to columns; `None` if none exists.
fn hopcroft_karp(adj: &[Vec<usize>], v: usize) -> Option<Vec<usize>> {
    const FREE: usize = usize::MAX;
    let mut match_row = vec![FREE; v];
    let mut match_col = vec![FREE; v];
    let mut dist = vec![0usize; v];
    // greedy warm start
    for i in 0..v {
        if let Some(&j) = adj[i].iter().find(|&&j| match_col[j] == FREE) {
            match_row[i] = j;
            match_col[j] = i;
        }
    }
    loop {
        // layer rows by BFS from free rows
        let mut queue = VecDeque::new();
        for i in 0..v {
            if match_row[i] == FREE {
                dist[i] = 0;
                queue.push_back(i);
            } else {
                dist[i] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                let r = match_col[j];
                if r == FREE {
                    found = true;
                } else if dist[r] == usize::MAX {
                    dist[r] = dist[i] + 1;
                    queue.push_back(r);
                }
            }
        }
        if !found {
            break;
        }
        let mut it = vec![0usize; v];
        for i in 0..v {
            if match_row[i] == FREE {
                augment(i, adj, &mut match_row, &mut match_col, &mut dist, &mut it);
            }
        }
    }
    match_row.iter().all(|&j| j != FREE).then_some(match_row)
}

/// Iterative DFS along the BFS layers.
fn augment(
    root: usize,
    adj: &[Vec<usize>],
    match_row: &mut [usize],
    match_col: &mut [usize],
    dist: &mut [usize],
    it: &mut [usize],
) -> bool {
    const FREE: usize = usize::MAX;
    let mut stack = vec![root];
    while let Some(&i) = stack.last() {
        if it[i] == adj[i].len() {
            dist[i] = usize::MAX;
            stack.pop();
            continue;
        }
        let j = adj[i][it[i]];
        let r = match_col[j];
        if r == FREE {
            // flip the path held on the stack
            let mut col = j;
            while let Some(row) = stack.pop() {
                let prev = match_row[row];
                match_row[row] = col;
                match_col[col] = row;
                col = prev;
            }
            return true;
        }
        if dist[r] == dist[i] + 1 {
            stack.push(r);
        } else {
            it[i] += 1;
        }
    }
    false
}
