//! Block double-circulant (BDC) matrices.
//!
//! A BDC matrix is a `t × t` grid of `d × d` circulant blocks in which the
//! weight of block `(r, s)` depends only on `(s − r) mod t`. The weights
//! `w_0, …, w_{t−1}` form the weight vector and sum to `k`.
//!
//! Splitting a cyclic configuration maps point `x` to block `x mod t`,
//! offset `x div t`; the operations here then thin, shift and crop the grid
//! while keeping it a configuration.

use crate::arith::{exact_sqrt, is_prime, pow_mod, prime_power};
use crate::matrix::{CirculantSpec, IncidenceMatrix, VerifyReport};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BdcSpec {
    t: usize,
    d: u64,
    /// Row-major `t × t` supports, each sorted.
    blocks: Vec<Vec<u64>>,
    weights: Vec<usize>,
}

impl BdcSpec {
    /// Checks the equal-weight diagonal condition and derives the weight
    /// vector from block row 0.
    pub fn new(t: usize, d: u64, blocks: Vec<Vec<u64>>) -> Result<Self> {
        if t == 0 || blocks.len() != t * t {
            return Err(Error::ConstraintViolated(format!("expected {} blocks", t * t)));
        }
        let mut blocks = blocks;
        for b in &mut blocks {
            if b.iter().any(|&x| x >= d) {
                return Err(Error::ConstraintViolated("block support exceeds block size".into()));
            }
            b.sort_unstable();
            b.dedup();
        }
        let weights: Vec<usize> = (0..t).map(|h| blocks[h].len()).collect();
        for r in 0..t {
            for s in 0..t {
                if blocks[r * t + s].len() != weights[(s + t - r) % t] {
                    return Err(Error::ConstraintViolated(format!(
                        "block ({r},{s}) breaks the diagonal weight pattern"
                    )));
                }
            }
        }
        Ok(BdcSpec { t, d, blocks, weights })
    }

    /// `c × c` grid of single-shift blocks, block `(r, s)` shifted by
    /// `r·s mod d`. For prime `d` and `c ≤ d` this is a `(cd)_c` with weight
    /// vector `(1, …, 1)`.
    pub fn latin(d: u64, c: usize) -> Result<Self> {
        if c == 0 || c as u64 > d {
            return Err(Error::IndexOutOfRange { what: "grid size c" });
        }
        let blocks = (0..c as u64).flat_map(|r| (0..c as u64).map(move |s| vec![r * s % d])).collect();
        Self::new(c, d, blocks)
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn v(&self) -> u64 {
        self.t as u64 * self.d
    }

    pub fn k(&self) -> usize {
        self.weights.iter().sum()
    }

    /// `(w_0, …, w_{t−1})` where `w_h` is the weight of block `(0, h)`.
    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn sorted_weights(&self) -> Vec<usize> {
        let mut w = self.weights.clone();
        w.sort_unstable();
        w
    }

    pub fn block(&self, r: usize, s: usize) -> &[u64] {
        &self.blocks[r * self.t + s]
    }

    /// Dense matrix with row `r·d + a` and column `s·d + b`.
    pub fn to_matrix(&self) -> IncidenceMatrix {
        let (t, d) = (self.t, self.d as usize);
        let mut m = IncidenceMatrix::zeros(t * d);
        for r in 0..t {
            for s in 0..t {
                for &e in self.block(r, s) {
                    for a in 0..d {
                        m.set(r * d + a, s * d + (a + e as usize) % d, true);
                    }
                }
            }
        }
        m
    }

    /// Materializes and verifies.
    pub fn verify(&self) -> Result<VerifyReport> {
        self.to_matrix().verify()
    }

    /// Splits a circulant into `t` residue classes.
    pub fn split(c: &CirculantSpec, t: usize) -> Result<Self> {
        let v = c.v;
        if t == 0 || v % t as u64 != 0 {
            return Err(Error::NotDivisor { t: t as u64, v });
        }
        let (tt, d) = (t as u64, v / t as u64);
        let mut blocks = vec![Vec::new(); t * t];
        for r in 0..t {
            for s in 0..t {
                let h = ((s + t - r) % t) as u64;
                let carry = u64::from(s < r);
                blocks[r * t + s] = c.support.iter().filter(|&&x| x % tt == h).map(|&x| (x / tt + carry) % d).collect();
            }
        }
        let spec = Self::new(t, d, blocks)?;
        debug_assert_eq!(spec.k(), c.k());
        Ok(spec)
    }

    /// Removes the `deltas[h]` largest support elements from every block of
    /// diagonal class `h`.
    pub fn reduce_weights(&self, deltas: &[usize]) -> Result<Self> {
        let t = self.t;
        if deltas.len() != t {
            return Err(Error::IndexOutOfRange { what: "delta vector length" });
        }
        for (h, (&dl, &w)) in deltas.iter().zip(&self.weights).enumerate() {
            if dl > w {
                return Err(Error::DeltaExceedsWeight { h, delta: dl, weight: w });
            }
        }
        let mut blocks = self.blocks.clone();
        for r in 0..t {
            for s in 0..t {
                let b = &mut blocks[r * t + s];
                b.truncate(b.len() - deltas[(s + t - r) % t]);
            }
        }
        Self::new(t, self.d, blocks)
    }

    /// Moves block column `(s + j) mod t` to position `s`, so the new weight
    /// vector starts at `w_j`.
    pub fn shifted(&self, j: usize) -> Result<Self> {
        let t = self.t;
        if j >= t {
            return Err(Error::IndexOutOfRange { what: "shift j" });
        }
        let mut blocks = Vec::with_capacity(t * t);
        for r in 0..t {
            for s in 0..t {
                blocks.push(self.block(r, (s + j) % t).to_vec());
            }
        }
        Self::new(t, self.d, blocks)
    }

    /// Thins each diagonal class to `targets[h]` then keeps the top-left
    /// `keep × keep` grid.
    fn floor_and_crop(&self, targets: &[usize], keep: usize) -> Result<Self> {
        let deltas: Vec<usize> = self.weights.iter().zip(targets).map(|(w, t)| w - t).collect();
        let thin = self.reduce_weights(&deltas)?;
        let blocks =
            (0..keep).flat_map(|r| (0..keep).map(move |s| (r, s))).map(|(r, s)| thin.block(r, s).to_vec()).collect();
        Self::new(keep, self.d, blocks)
    }

    /// Shift by `j`, level every other diagonal to the smallest weight among
    /// them, keep `c × c` blocks: `k' = w_j + (c − 1)·min_{h≠j} w_h`.
    pub fn shift_truncate(&self, j: usize, c: usize) -> Result<Self> {
        if c == 0 || c > self.t {
            return Err(Error::IndexOutOfRange { what: "kept block count c" });
        }
        let s = self.shifted(j)?;
        let wm = s.weights[1..].iter().copied().min().unwrap_or(0);
        let targets: Vec<usize> = (0..self.t).map(|h| if h == 0 { s.weights[0] } else { wm }).collect();
        s.floor_and_crop(&targets, c)
    }

    /// For even `t`: shift by `j`, level odd diagonals to their minimum `w_O`
    /// and even nonzero ones to `w_E`, keep `2f × 2f` blocks:
    /// `k' = w_j + w_O + (f − 1)(w_E + w_O)`.
    pub fn alternate_truncate(&self, j: usize, f: usize) -> Result<Self> {
        let t = self.t;
        if t % 2 == 1 {
            return Err(Error::OddBlockCount(t));
        }
        if f == 0 || 2 * f > t {
            return Err(Error::IndexOutOfRange { what: "kept pair count f" });
        }
        let s = self.shifted(j)?;
        let wo = (1..t).step_by(2).map(|h| s.weights[h]).min().unwrap_or(0);
        let we = (2..t).step_by(2).map(|h| s.weights[h]).min().unwrap_or(0);
        let targets: Vec<usize> = (0..t)
            .map(|h| match h {
                0 => s.weights[0],
                h if h % 2 == 1 => wo,
                _ => we,
            })
            .collect();
        s.floor_and_crop(&targets, 2 * f)
    }

    /// `(j, k')` maximizing the [`shift_truncate`](Self::shift_truncate)
    /// order for `c` kept blocks; ties go to the smallest `j`.
    pub fn best_shift(&self, c: usize) -> (usize, usize) {
        (0..self.t)
            .map(|j| {
                let wm = (0..self.t).filter(|&h| h != j).map(|h| self.weights[h]).min().unwrap_or(0);
                (j, self.weights[j] + c.saturating_sub(1) * wm)
            })
            .fold((0, 0), |best, cur| if cur.1 > best.1 { cur } else { best })
    }

    /// Same as [`best_shift`](Self::best_shift) for
    /// [`alternate_truncate`](Self::alternate_truncate); `t` must be even.
    pub fn best_alternate_shift(&self, f: usize) -> (usize, usize) {
        let t = self.t;
        (0..t)
            .map(|j| {
                let w = |h: usize| self.weights[(h + j) % t];
                let wo = (1..t).step_by(2).map(w).min().unwrap_or(0);
                let we = (2..t).step_by(2).map(w).min().unwrap_or(0);
                (j, w(0) + wo + f.saturating_sub(1) * (we + wo))
            })
            .fold((0, 0), |best, cur| if cur.1 > best.1 { cur } else { best })
    }
}

/// Index of point `x` of a circulant in the block order used by
/// [`BdcSpec::split`].
pub fn split_index(x: u64, v: u64, t: usize) -> usize {
    let d = v / t as u64;
    ((x % t as u64) * d + x / t as u64) as usize
}

/// Closed-form BDC families that can be catalogued without building the
/// matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BdcFamily {
    /// Orbits of a subgroup of index `t` of the Singer group of `PG(2, q)`,
    /// `q` an even power of a prime `p` with `p mod t` generating `Z_t^*`.
    /// Parameter: kept block count `c` (`1..=t`).
    Projective { t: u64 },
    /// Punctured affine plane pairings, `q` an odd square. `variant` is
    /// `1..=5` in the order: `v = 2fd, k = (2f−1)√q`; `v = cd` with `d`
    /// doubled, `√q ≡ 1 (mod 4)`; `v = 2fd, k = (4f−1)√q`; `v = cd` with `d`
    /// quadrupled; `v = 2fd, k = (8f−1)√q`.
    Affine { variant: u8 },
}

/// Parameters of a closed-form BDC configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BdcParams {
    pub v: u64,
    pub k: u64,
    pub d: u64,
}

type Rule = fn(u64, u64) -> u64;

/// `(v, k, d)` of a BDC family member. `param` is `c` or `f` as the family
/// requires.
pub fn family_bdc_params(family: BdcFamily, q: u64, param: u64) -> Result<BdcParams> {
    let bad = |msg: String| Err(Error::ConstraintViolated(msg));
    let (p, m) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let Some(r) = exact_sqrt(q) else {
        return bad(format!("{q} is not a square"));
    };
    match family {
        BdcFamily::Projective { t } => {
            let n = q * q + q + 1;
            if !is_prime(t) || n % t != 0 {
                return bad(format!("t = {t} must be a prime dividing {n}"));
            }
            if m % 2 != 0 {
                return bad(format!("{q} must be an even power of its prime"));
            }
            let generates = (1..t - 1).all(|e| pow_mod(p, e, t) != 1) && p % t != 0;
            if !generates {
                return bad(format!("{p} mod {t} does not generate the units mod {t}"));
            }
            if param == 0 || param > t {
                return bad(format!("c = {param} must lie in 1..={t}"));
            }
            let (q, r, t) = (q as i64, r as i64, t as i64);
            // exactly one sign makes both weights integral
            let (w0, w1) = [1i64, -1]
                .into_iter()
                .map(|s| (q + 1 + s * (1 - t) * r, q + 1 + s * r))
                .find(|(a, b)| a % t == 0 && b % t == 0)
                .map(|(a, b)| (a / t, b / t))
                .ok_or(Error::ConstraintViolated("weights are not integral".into()))?;
            let d = n / t as u64;
            Ok(BdcParams { v: param * d, k: (w0 + (param as i64 - 1) * w1) as u64, d })
        }
        BdcFamily::Affine { variant } => {
            if q % 2 == 0 {
                return bad(format!("{q} must be odd"));
            }
            let base = (r - 1) * (q + 1);
            let (d, v_of, k_of, max): (u64, Rule, Rule, u64) = match variant {
                1 => (base, |d, f| 2 * f * d, |r, f| (2 * f - 1) * r, r.div_ceil(2)),
                2 if r % 4 == 1 => (2 * base, |d, c| c * d, |r, c| (2 * c - 1) * r, r.div_ceil(2)),
                3 if r % 4 == 3 => (2 * base, |d, f| 2 * f * d, |r, f| (4 * f - 1) * r, (r + 1) / 4),
                4 if r % 4 == 3 && ((r + 1) / 4) % 2 == 1 => {
                    (4 * base, |d, c| c * d, |r, c| (4 * c - 1) * r, (r + 1) / 4)
                }
                5 if r % 4 == 3 && ((r + 1) / 4) % 2 == 0 => {
                    (4 * base, |d, f| 2 * f * d, |r, f| (8 * f - 1) * r, (r + 1) / 8)
                }
                2..=5 => return bad(format!("variant {variant} does not apply to q = {q}")),
                _ => return Err(Error::UnknownFamily(format!("affine variant {variant}"))),
            };
            if param == 0 || param > max {
                return bad(format!("parameter {param} must lie in 1..={max}"));
            }
            Ok(BdcParams { v: v_of(d, param), k: k_of(r, param), d })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{bose_ruler, singer_ruler};

    fn circ(r: crate::ruler::Ruler) -> CirculantSpec {
        r.to_circulant().unwrap()
    }

    #[test]
    fn split_is_a_relabelling() {
        for (c, t) in [
            (circ(bose_ruler(4).unwrap()), 5),
            (circ(singer_ruler(4).unwrap()), 3),
            (circ(singer_ruler(3).unwrap()), 13),
        ] {
            let b = BdcSpec::split(&c, t).unwrap();
            let dense = IncidenceMatrix::from_circulant(&c);
            let perm: Vec<usize> = (0..c.v).map(|x| split_index(x, c.v, t)).collect();
            assert_eq!(b.to_matrix(), dense.permuted(&perm));
            assert_eq!(b.k(), c.k());
        }
    }

    #[test]
    fn bose_four_weights() {
        let b = BdcSpec::split(&circ(bose_ruler(4).unwrap()), 5).unwrap();
        assert_eq!(b.sorted_weights(), vec![0, 1, 1, 1, 1]);
        assert_eq!(b.d(), 3);
    }

    #[test]
    fn reduce_weights_thins_one_class() {
        let b = BdcSpec::split(&circ(bose_ruler(4).unwrap()), 5).unwrap();
        assert_eq!(b.reduce_weights(&[0; 5]).unwrap(), b);
        let h = b.weights().iter().position(|&w| w == 1).unwrap();
        let mut deltas = vec![0; 5];
        deltas[h] = 1;
        let r = b.reduce_weights(&deltas).unwrap();
        assert_eq!(r.verify().unwrap().k, 3);
        deltas[h] = 2;
        assert!(matches!(b.reduce_weights(&deltas), Err(Error::DeltaExceedsWeight { .. })));
    }

    #[test]
    fn shift_truncate_single_block() {
        let b = BdcSpec::split(&circ(singer_ruler(4).unwrap()), 3).unwrap();
        let (j, _) = b.best_shift(1);
        let one = b.shift_truncate(j, 1).unwrap();
        assert_eq!((one.t(), one.k()), (1, b.weights()[j]));
        assert!(one.verify().is_ok());
        assert!(b.shift_truncate(0, 4).is_err());
        assert!(b.shifted(3).is_err());
    }

    #[test]
    fn alternate_truncate_on_ag9() {
        let b = BdcSpec::split(&circ(bose_ruler(9).unwrap()), 4).unwrap();
        assert_eq!(b.d(), 20);
        let (j, k) = b.best_alternate_shift(1);
        let a = b.alternate_truncate(j, 1).unwrap();
        assert_eq!((a.v(), a.k()), (40, k));
        let s = b.shifted(j).unwrap();
        assert_eq!(k, s.weights()[0] + s.weights()[1].min(s.weights()[3]));
        assert_eq!(a.verify().unwrap().k, k);
        let odd = BdcSpec::split(&circ(singer_ruler(4).unwrap()), 3).unwrap();
        assert_eq!(odd.alternate_truncate(0, 1).unwrap_err(), Error::OddBlockCount(3));
    }

    #[test]
    fn full_alternate_is_a_weight_floor() {
        let b = BdcSpec::split(&circ(bose_ruler(9).unwrap()), 4).unwrap();
        let a = b.alternate_truncate(0, 2).unwrap();
        assert_eq!(a.v(), b.v());
        assert!(a.verify().is_ok());
    }

    #[test]
    fn diagonal_condition_enforced() {
        let err = BdcSpec::new(2, 3, vec![vec![0], vec![1], vec![], vec![0]]).unwrap_err();
        assert!(matches!(err, Error::ConstraintViolated(_)));
    }

    #[test]
    fn closed_form_parameters() {
        let p = family_bdc_params(BdcFamily::Projective { t: 7 }, 81, 6).unwrap();
        assert_eq!((p.d, p.k, p.v), (949, 69, 5694));
        let p = family_bdc_params(BdcFamily::Projective { t: 3 }, 25, 2).unwrap();
        assert_eq!((p.d, p.k, p.v), (217, 19, 434));
        let a = family_bdc_params(BdcFamily::Affine { variant: 1 }, 9, 1).unwrap();
        assert_eq!((a.d, a.v, a.k), (20, 40, 3));
        // 37 is prime, 37 mod 3 = 1 generates nothing
        assert!(family_bdc_params(BdcFamily::Projective { t: 3 }, 37, 2).is_err());
        assert!(family_bdc_params(BdcFamily::Affine { variant: 2 }, 49, 1).is_err());
        assert!(family_bdc_params(BdcFamily::Affine { variant: 3 }, 49, 1).is_ok());
    }
}
