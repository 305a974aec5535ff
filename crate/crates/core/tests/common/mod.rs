//! Generators and brute-force oracles shared by the property tests and the
//! acceptance runner.
#![allow(dead_code)]

use std::collections::HashSet;

use proptest::prelude::*;
use symconf::construct::{bose_ruler, ruzsa_ruler, singer_ruler};
use symconf::matrix::IncidenceMatrix;
use symconf::ruler::Ruler;

pub type Dense = Vec<Vec<bool>>;

/// Accepts iff all row and column sums agree and no two rows share two
/// columns, checked cell by cell.
pub fn oracle_is_configuration(m: &Dense) -> bool {
    let v = m.len();
    if v == 0 || m.iter().any(|r| r.len() != v) {
        return false;
    }
    let k = m[0].iter().filter(|&&b| b).count();
    let rows_ok = m.iter().all(|r| r.iter().filter(|&&b| b).count() == k);
    let cols_ok = (0..v).all(|j| (0..v).filter(|&i| m[i][j]).count() == k);
    let pairs_ok = (0..v).all(|i| (i + 1..v).all(|l| (0..v).filter(|&j| m[i][j] && m[l][j]).count() <= 1));
    rows_ok && cols_ok && pairs_ok
}

/// Every ordered difference of distinct marks is a distinct nonzero residue.
pub fn oracle_is_mgr(marks: &[u64], v: u64) -> bool {
    let mut seen = HashSet::new();
    for (i, &a) in marks.iter().enumerate() {
        for (j, &b) in marks.iter().enumerate() {
            if i != j {
                let d = (a + v - b % v) % v;
                if d == 0 || !seen.insert(d) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn to_dense(m: &IncidenceMatrix) -> Dense {
    let v = m.v();
    (0..v).map(|i| (0..v).map(|j| m.get(i, j)).collect()).collect()
}

fn circulant_dense(v: usize, support: &[usize]) -> Dense {
    (0..v)
        .map(|i| {
            let mut row = vec![false; v];
            for &d in support {
                row[(i + d) % v] = true;
            }
            row
        })
        .collect()
}

fn permute(m: &Dense, rows: &[usize], cols: &[usize]) -> Dense {
    rows.iter().map(|&i| cols.iter().map(|&j| m[i][j]).collect()).collect()
}

/// Square 0/1 matrices with `v ≤ 12`: uniform noise, sparse noise, and
/// row/column shuffles of random circulants (which are often
/// configurations), sometimes with one bit flipped.
pub fn small_matrix() -> impl Strategy<Value = Dense> {
    let noise = (1usize..=12, 0.05f64..0.6).prop_flat_map(|(v, p)| {
        proptest::collection::vec(proptest::collection::vec(proptest::bool::weighted(p), v), v)
    });
    let circ = (1usize..=12).prop_flat_map(|v| {
        (
            Just(v),
            proptest::sample::subsequence((0..v).collect::<Vec<_>>(), 0..=v.min(5)),
            Just((0..v).collect::<Vec<_>>()).prop_shuffle(),
            Just((0..v).collect::<Vec<_>>()).prop_shuffle(),
            proptest::option::weighted(0.3, (0..v, 0..v)),
        )
            .prop_map(|(v, support, rows, cols, flip)| {
                let mut m = permute(&circulant_dense(v, &support), &rows, &cols);
                if let Some((i, j)) = flip {
                    m[i][j] = !m[i][j];
                }
                m
            })
    });
    prop_oneof![1 => noise, 2 => circ]
}

/// Modular Golomb rulers from the three classical families.
pub fn classical_ruler() -> impl Strategy<Value = Ruler> {
    prop_oneof![
        prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 11, 13]).prop_map(|q| singer_ruler(q).unwrap()),
        prop::sample::select(vec![3u64, 4, 5, 7, 8, 9, 11]).prop_map(|q| bose_ruler(q).unwrap()),
        prop::sample::select(vec![3u64, 5, 7, 11, 13]).prop_map(|p| ruzsa_ruler(p, None).unwrap()),
    ]
}

/// A ruler with a multiplier and offset; the multiplier is arbitrary and
/// may share a factor with the modulus.
pub fn ruler_and_affine_map() -> impl Strategy<Value = (Ruler, u64, u64)> {
    (classical_ruler(), any::<u64>(), any::<u64>())
}
