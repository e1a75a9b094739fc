//! Exhaustive value-set sizes, plus a report type shared by all three
//! counting methods.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{field_of_order, FqElem, FqField, ReducedMap};
use crate::folding::folding_poly;
use crate::formulas;
use crate::torus;
use crate::weyl::AlgebraId;

/// Largest field for the bivariate sweep (`q²` evaluations).
pub const MAX_BIVARIATE_Q: u64 = 256;
/// Largest field for the univariate sweep.
pub const MAX_UNIVARIATE_Q: u64 = 65536;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Formula,
    Exhaustive,
    TorusOracle,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Formula, Method::Exhaustive, Method::TorusOracle];

    pub fn name(self) -> &'static str {
        match self {
            Method::Formula => "formula",
            Method::Exhaustive => "exhaustive",
            Method::TorusOracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "formula" => Ok(Method::Formula),
            "exhaustive" => Ok(Method::Exhaustive),
            "oracle" | "torus-oracle" | "torus" => Ok(Method::TorusOracle),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValueSetReport {
    pub algebra: AlgebraId,
    pub q: u64,
    pub k: u64,
    pub cardinality: u64,
    pub method: Method,
}

struct Bitset(Vec<u64>);

impl Bitset {
    fn new(len: usize) -> Self {
        Bitset(vec![0; len.div_ceil(64)])
    }

    #[inline]
    fn set(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }

    fn union(mut self, other: Bitset) -> Bitset {
        for (a, b) in self.0.iter_mut().zip(other.0) {
            *a |= b;
        }
        self
    }

    fn count(&self) -> u64 {
        self.0.iter().map(|w| u64::from(w.count_ones())).sum()
    }
}

fn guard(q: u64, limit: u64) -> Result<()> {
    if q > limit {
        return Err(Error::SizeExceeded {
            what: "q",
            value: q,
            limit,
        });
    }
    Ok(())
}

/// `|P_k(F_q²)|` by evaluating the folding map at every point.
///
/// ```
/// use folding::{make_field, value_set::image_size, AlgebraId};
/// let f3 = make_field(3, 1).unwrap();
/// assert_eq!(image_size(AlgebraId::B2, &f3, 2).unwrap(), 5);
/// ```
pub fn image_size(algebra: AlgebraId, field: &FqField, k: u64) -> Result<u64> {
    if !algebra.is_bivariate() {
        return Err(Error::Unsupported(algebra));
    }
    let q = field.q();
    guard(q, MAX_BIVARIATE_Q)?;
    let map = folding_poly(algebra, k)?;
    let reduced = ReducedMap::new(&map, field);
    let qs = q as usize;
    let seen = (0..q as u32)
        .into_par_iter()
        .fold(
            || Bitset::new(qs * qs),
            |mut bits, x| {
                let rows = reduced.specialize_x(FqElem(x));
                for y in field.elements() {
                    let u = reduced.horner(&rows[0], y).index() as usize;
                    let v = reduced.horner(&rows[1], y).index() as usize;
                    bits.set(u * qs + v);
                }
                bits
            },
        )
        .reduce(|| Bitset::new(qs * qs), Bitset::union);
    Ok(seen.count())
}

/// `|P_k(F_q)|` for the power map (`Power`) or the Dickson polynomial (`A1`).
///
/// ```
/// use folding::{make_field, value_set::image_size_univariate, AlgebraId};
/// let f7 = make_field(7, 1).unwrap();
/// assert_eq!(image_size_univariate(AlgebraId::Power, &f7, 3).unwrap(), 3);
/// ```
pub fn image_size_univariate(algebra: AlgebraId, field: &FqField, k: u64) -> Result<u64> {
    if algebra.is_bivariate() {
        return Err(Error::Unsupported(algebra));
    }
    let q = field.q();
    guard(q, MAX_UNIVARIATE_Q)?;
    let map = folding_poly(algebra, k)?;
    let reduced = ReducedMap::new(&map, field);
    let seen = (0..q as u32)
        .into_par_iter()
        .fold(
            || Bitset::new(q as usize),
            |mut bits, x| {
                let c = reduced.specialize_x(FqElem(x));
                bits.set(c[0][0].index() as usize);
                bits
            },
        )
        .reduce(|| Bitset::new(q as usize), Bitset::union);
    Ok(seen.count())
}

/// The exhaustive count for any algebra, dispatching on rank.
pub fn exhaustive_count(algebra: AlgebraId, field: &FqField, k: u64) -> Result<u64> {
    if algebra.is_bivariate() {
        image_size(algebra, field, k)
    } else {
        image_size_univariate(algebra, field, k)
    }
}

/// Runs one method and wraps the result.
pub fn count(algebra: AlgebraId, q: u64, k: u64, method: Method) -> Result<ValueSetReport> {
    if k == 0 {
        return Err(Error::ZeroDegree);
    }
    let cardinality = match method {
        Method::Formula => formulas::cardinality(algebra, q, k)?,
        Method::Exhaustive => exhaustive_count(algebra, &field_of_order(q)?, k)?,
        Method::TorusOracle => torus::oracle_count(algebra, q, k)?,
    };
    Ok(ValueSetReport {
        algebra,
        q,
        k,
        cardinality,
        method,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, prime_powers};
    use std::collections::HashSet;
    use AlgebraId::*;

    /// Independent count: plain evaluation into a hash set.
    fn naive(algebra: AlgebraId, field: &FqField, k: u64) -> u64 {
        let map = folding_poly(algebra, k).unwrap();
        let mut seen = HashSet::new();
        for x in field.elements() {
            for y in field.elements() {
                seen.insert(crate::field::eval_poly_map(&map, field, (x, y)));
            }
        }
        seen.len() as u64
    }

    #[test]
    fn examples() {
        assert_eq!(image_size(B2, &make_field(3, 1).unwrap(), 2).unwrap(), 5);
        assert_eq!(image_size(G2, &make_field(2, 1).unwrap(), 3).unwrap(), 2);
        assert_eq!(image_size_univariate(Power, &make_field(7, 1).unwrap(), 3).unwrap(), 3);
        assert_eq!(image_size_univariate(A1, &make_field(5, 1).unwrap(), 2).unwrap(), 3);
        for q in [2, 4, 9, 16] {
            let f = field_of_order(q).unwrap();
            assert_eq!(image_size(A2, &f, 1).unwrap(), q * q);
            assert_eq!(image_size_univariate(Power, &f, 1).unwrap(), q);
            assert_eq!(image_size_univariate(A1, &f, 1).unwrap(), q);
        }
    }

    #[test]
    fn guards_and_dispatch() {
        let big = make_field(257, 1).unwrap();
        assert!(matches!(image_size(A2, &big, 2), Err(Error::SizeExceeded { .. })));
        let f = make_field(5, 1).unwrap();
        assert_eq!(image_size(A1, &f, 2).unwrap_err(), Error::Unsupported(A1));
        assert_eq!(image_size_univariate(G2, &f, 2).unwrap_err(), Error::Unsupported(G2));
        assert_eq!(count(B2, 3, 0, Method::Formula).unwrap_err(), Error::ZeroDegree);
    }

    #[test]
    fn bitset_sweep_matches_hash_set() {
        for q in [2u64, 3, 4, 5, 8, 9] {
            let f = field_of_order(q).unwrap();
            for k in 1..=8 {
                for alg in AlgebraId::BIVARIATE {
                    assert_eq!(image_size(alg, &f, k).unwrap(), naive(alg, &f, k), "{alg} q={q} k={k}");
                }
            }
        }
    }

    #[test]
    fn k_periodicity() {
        for q in prime_powers(2, 5) {
            let f = field_of_order(q).unwrap();
            for alg in AlgebraId::BIVARIATE {
                let period = formulas::moduli(alg, q)
                    .into_iter()
                    .fold(1u64, |l, m| num_integer::Integer::lcm(&l, &m));
                if period > 64 {
                    continue;
                }
                for k in 1..=4 {
                    assert_eq!(image_size(alg, &f, k).unwrap(), image_size(alg, &f, k + period).unwrap());
                }
            }
        }
    }

    #[test]
    fn methods_agree_on_examples() {
        for (alg, q, k, want) in [(B2, 3, 2, 5), (G2, 2, 3, 2), (A1, 5, 2, 3), (A2, 2, 3, 3)] {
            for m in Method::ALL {
                assert_eq!(count(alg, q, k, m).unwrap().cardinality, want, "{alg} {m}");
            }
        }
    }
}
