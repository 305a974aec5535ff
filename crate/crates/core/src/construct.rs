//! Explicit cyclic families: Singer, Bose and Ruzsa rulers.
//!
//! | family | v | k |
//! |---|---|---|
//! | Singer | `q² + q + 1` | `q + 1` |
//! | Bose | `q² − 1` | `q` |
//! | Ruzsa | `p² − p` | `p − 1` |

use crate::arith::{is_prime, is_primitive_root, pow_mod, prime_power, smallest_primitive_root};
use crate::gf::{FiniteField, MAX_ORDER};
use crate::ruler::Ruler;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Singer,
    Bose,
    Ruzsa,
}

impl Family {
    /// `(v, k)` produced for parameter `q` (or `p`).
    pub fn params(self, q: u64) -> (u64, usize) {
        match self {
            Family::Singer => (q * q + q + 1, q as usize + 1),
            Family::Bose => (q * q - 1, q as usize),
            Family::Ruzsa => (q * q - q, q as usize - 1),
        }
    }
}

/// What a builder produced, with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionReceipt {
    pub family: Family,
    pub param: u64,
    pub v: u64,
    pub k: usize,
    pub ruler: Ruler,
}

pub fn build(family: Family, param: u64) -> Result<ConstructionReceipt> {
    let ruler = match family {
        Family::Singer => singer_ruler(param)?,
        Family::Bose => bose_ruler(param)?,
        Family::Ruzsa => ruzsa_ruler(param, None)?,
    };
    let (v, k) = family.params(param);
    assert_eq!((ruler.modulus(), ruler.order()), (Some(v), k));
    Ok(ConstructionReceipt { family, param, v, k, ruler })
}

/// Field `GF(q^e)` for the prime power `q`.
fn extension_field(q: u64, e: u32) -> Result<FiniteField> {
    let (p, m) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    match q.checked_pow(e) {
        Some(order) if order <= MAX_ORDER => FiniteField::new(p, m * e),
        _ => Err(Error::FieldTooLarge(q)),
    }
}

/// Codes of the subfield `GF(q)` inside a field whose multiplicative group
/// has order `(q - 1)·stride`.
fn subfield(f: &FiniteField, q: u64, stride: u64) -> Vec<u32> {
    std::iter::once(0).chain((0..q - 1).map(|j| f.exp_raw(j * stride))).collect()
}

fn assert_mgr(r: &Ruler, v: u64) {
    assert!(r.is_modular_golomb(v).unwrap_or(false), "construction produced a non-Sidon set mod {v}: {:?}", r.marks());
}

/// Perfect difference set of the Singer cycle of `PG(2, q)`.
///
/// With `α` primitive in `GF(q³)`, the exponents `i` for which `α^i` lies in
/// the `GF(q)`-span of `{1, α}` form a `(q² + q + 1, q + 1)` ruler.
pub fn singer_ruler(q: u64) -> Result<Ruler> {
    let f = extension_field(q, 3)?;
    let v = q * q + q + 1;
    let alpha = f.primitive_element().code();
    // span{1, α} up to GF(q)* scalars: the line {a + α} plus the point 1
    let marks = std::iter::once(0).chain(
        subfield(&f, q, v).into_iter().map(|a| f.log_raw(f.add_raw(a, alpha)).expect("a + α is nonzero") as u64),
    );
    let r = Ruler::from_residues(marks, v).normalized();
    assert_eq!(r.order(), q as usize + 1);
    assert_mgr(&r, v);
    Ok(r)
}

/// Bose set of the punctured affine plane `AG(2, q)`.
///
/// With `θ` primitive in `GF(q²)`, the logs `log_θ(θ + a)` over `a ∈ GF(q)`
/// form a `(q² − 1, q)` ruler.
pub fn bose_ruler(q: u64) -> Result<Ruler> {
    let f = extension_field(q, 2)?;
    let v = q * q - 1;
    let theta = f.primitive_element().code();
    let marks =
        subfield(&f, q, q + 1).into_iter().map(|a| f.log_raw(f.add_raw(a, theta)).expect("θ + a is nonzero") as u64);
    let r = Ruler::from_residues(marks, v).normalized();
    assert_eq!(r.order(), q as usize);
    assert_mgr(&r, v);
    Ok(r)
}

/// Ruzsa sequence `e_u = p·u + (p − 1)·g^u mod (p² − p)` for `u = 1..p−1`.
///
/// Marks are left as evaluated (not translated), so `p = 5, g = 2` gives
/// `{4, 6, 7, 13}`.
pub fn ruzsa_ruler(p: u64, g: Option<u64>) -> Result<Ruler> {
    if !is_prime(p) || p < 3 {
        return Err(Error::NotPrime(p));
    }
    let g = match g {
        Some(g) if !is_primitive_root(g, p) => return Err(Error::NotPrimitiveRoot { g, p }),
        Some(g) => g,
        None => smallest_primitive_root(p),
    };
    let v = p * p - p;
    let r = Ruler::from_residues((1..p).map(|u| p * u + (p - 1) * pow_mod(g, u, p)), v);
    assert_eq!(r.order(), p as usize - 1);
    assert_mgr(&r, v);
    Ok(r)
}
