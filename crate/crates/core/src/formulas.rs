//! Closed-form value-set cardinalities.
//!
//! Every reduced modulus is `m = M / gcd(M, k)` for a polynomial `M` in `q`.
//! Primes on a modulus mean `m' = gcd(m, 2)` and `m'' = gcd(m, 3)`.
//! The case tables are transcribed as explicit condition checks; the
//! consequences that the counting arguments rely on are checked by
//! [`implications_hold`], which `cardinality` asserts in debug builds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::prime_power;
use crate::weyl::AlgebraId;

pub type Rational = BigRational;

/// Largest `q` for which `q² + q + 1` is kept in a `u64` comfortably.
pub const MAX_FORMULA_Q: u64 = 1 << 31;

/// Reduced moduli, named as in the cardinality formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reduced {
    /// `a` from `q − 1`.
    Power { a: u64 },
    /// `a, b` from `q − 1, q + 1`.
    A1 { a: u64, b: u64 },
    /// `a, b, c` from `q − 1, q² − 1, q² + q + 1`.
    A2 { a: u64, b: u64, c: u64 },
    /// `a, b, c, d` from `q − 1, q + 1, q² − 1, q² + 1`.
    B2 { a: u64, b: u64, c: u64, d: u64 },
    /// `a, ã, b, c, c̃` from `q − 1, q + 1, q² − 1, q² + q + 1, q² − q + 1`.
    G2 { a: u64, at: u64, b: u64, c: u64, ct: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormulaParams {
    pub algebra: AlgebraId,
    pub q: u64,
    pub k: u64,
    pub reduced: Reduced,
}

/// `gcd(m, 2)`.
pub fn prime2(m: u64) -> u64 {
    m.gcd(&2)
}

/// `gcd(m, 3)`.
pub fn prime3(m: u64) -> u64 {
    m.gcd(&3)
}

fn divides(d: u64, m: u64) -> bool {
    m % d == 0
}

fn rat(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn frac(n: u64, d: u64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The unreduced moduli of an algebra, in the order of [`Reduced`]'s fields.
pub fn moduli(algebra: AlgebraId, q: u64) -> Vec<u64> {
    let q2 = q * q;
    match algebra {
        AlgebraId::Power => vec![q - 1],
        AlgebraId::A1 => vec![q - 1, q + 1],
        AlgebraId::A2 => vec![q - 1, q2 - 1, q2 + q + 1],
        AlgebraId::B2 => vec![q - 1, q + 1, q2 - 1, q2 + 1],
        AlgebraId::G2 => vec![q - 1, q + 1, q2 - 1, q2 + q + 1, q2 - q + 1],
    }
}

fn check_inputs(q: u64, k: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::ZeroDegree);
    }
    if prime_power(q).is_none() {
        return Err(Error::NotPrimePower(q));
    }
    if q > MAX_FORMULA_Q {
        return Err(Error::SizeExceeded {
            what: "q",
            value: q,
            limit: MAX_FORMULA_Q,
        });
    }
    Ok(())
}

pub fn params(algebra: AlgebraId, q: u64, k: u64) -> Result<FormulaParams> {
    check_inputs(q, k)?;
    let r: Vec<u64> = moduli(algebra, q).into_iter().map(|m| m / m.gcd(&k)).collect();
    let reduced = match algebra {
        AlgebraId::Power => Reduced::Power { a: r[0] },
        AlgebraId::A1 => Reduced::A1 { a: r[0], b: r[1] },
        AlgebraId::A2 => Reduced::A2 { a: r[0], b: r[1], c: r[2] },
        AlgebraId::B2 => Reduced::B2 { a: r[0], b: r[1], c: r[2], d: r[3] },
        AlgebraId::G2 => Reduced::G2 { a: r[0], at: r[1], b: r[2], c: r[3], ct: r[4] },
    };
    Ok(FormulaParams { algebra, q, k, reduced })
}

impl FormulaParams {
    /// Reduced moduli in the order of [`moduli`].
    pub fn reduced_moduli(&self) -> Vec<u64> {
        match self.reduced {
            Reduced::Power { a } => vec![a],
            Reduced::A1 { a, b } => vec![a, b],
            Reduced::A2 { a, b, c } => vec![a, b, c],
            Reduced::B2 { a, b, c, d } => vec![a, b, c, d],
            Reduced::G2 { a, at, b, c, ct } => vec![a, at, b, c, ct],
        }
    }

    /// `gcd(M, k)` for each modulus; the count depends on `k` only through these.
    pub fn gcd_signature(&self) -> Vec<u64> {
        moduli(self.algebra, self.q)
            .into_iter()
            .map(|m| m.gcd(&self.k))
            .collect()
    }

    /// The correction term `η` for this algebra (zero for power maps).
    pub fn eta(&self) -> Rational {
        let k = self.k;
        match self.reduced {
            Reduced::Power { .. } => Rational::zero(),
            Reduced::A1 { a, b } => {
                if prime2(a) != prime2(b) {
                    frac(1, 2)
                } else {
                    Rational::zero()
                }
            }
            Reduced::A2 { a, b, .. } => {
                let row = divides(2, k) && divides(2, b);
                let col = divides(3, k) && divides(3, a);
                match (row, col) {
                    (false, false) => Rational::zero(),
                    (false, true) => frac(2, 3),
                    (true, false) => frac(a, 2),
                    (true, true) => frac(a, 2) + frac(2, 3),
                }
            }
            Reduced::B2 { a, b, c, .. } => {
                if !divides(2, k) || !divides(2, c) {
                    Rational::zero()
                } else if divides(2, a * b) {
                    frac(a + b, 2) + frac(1, 8)
                } else {
                    frac(a + b, 4) + frac(1, 4)
                }
            }
            Reduced::G2 { a, at, b, .. } => {
                let row = divides(2, k) && divides(2, b);
                let col = divides(3, k) && divides(3, a * at);
                let base = frac(a + at, 2) - frac(1, 2 * prime2(a) * prime2(at));
                match (row, col) {
                    (false, false) => Rational::zero(),
                    (false, true) => frac(1, 3),
                    (true, false) => base,
                    (true, true) => base + frac(1, 3),
                }
            }
        }
    }

    /// The gcd part of the count, without the correction `η`.
    pub fn main_term(&self) -> Rational {
        match self.reduced {
            Reduced::Power { a } => rat(a) + Rational::one(),
            Reduced::A1 { a, b } => frac(a, 2) + frac(b, 2),
            Reduced::A2 { a, b, c } => frac(a * a, 6) + frac(b, 2) + frac(c, 3),
            Reduced::B2 { a, b, c, d } => frac((a + b) * (a + b), 8) + frac(c + d, 4),
            Reduced::G2 { a, at, b, c, ct } => {
                frac(a * a, 12) + frac(at * at, 12) + frac(b, 2) + frac(c, 6) + frac(ct, 6)
            }
        }
    }

    /// `main_term + eta` as an exact rational.
    pub fn rational_cardinality(&self) -> Rational {
        self.main_term() + self.eta()
    }

    /// Checks the divisibility consequences of the case split that the
    /// counting arguments use. Returns the label of the first that fails.
    pub fn implications_hold(&self) -> std::result::Result<(), &'static str> {
        let (q, k) = (self.q, self.k);
        let check = |ok: bool, label: &'static str| if ok { Ok(()) } else { Err(label) };
        match self.reduced {
            Reduced::Power { .. } | Reduced::A1 { .. } => Ok(()),
            Reduced::A2 { a, b, c } => {
                let g = (q - 1).gcd(&b);
                if !divides(2, k) || !divides(2, b) {
                    check(g == a, "A2 (1)")?;
                } else {
                    check(g == 2 * a, "A2 (2)")?;
                }
                if !divides(3, k) || !divides(3, a) {
                    check(prime3(c) == prime3(a), "A2 (3)")
                } else {
                    check(prime3(c) == 1 && prime3(a) == 3, "A2 (4)")
                }
            }
            Reduced::B2 { a, b, c, d } => {
                let (a1, b1, c1, d1) = (prime2(a), prime2(b), prime2(c), prime2(d));
                if !divides(2, k) || !divides(2, c) {
                    check(c == a * b && a1 == b1 && b1 == c1 && c1 == d1, "B2 (1)")
                } else if divides(2, a * b) {
                    check(c == 2 * a * b && d1 == 1 && a1 + b1 == 3, "B2 (2)")
                } else {
                    check(c == 2 * a * b && a1 == 1 && b1 == 1 && d1 == 1, "B2 (3)")
                }
            }
            Reduced::G2 { a, at, b, c, ct } => {
                if !divides(2, k) || !divides(2, b) {
                    let ok = b == a * at && {
                        let (x, y) = (b / a, b / at);
                        let v = prime2(a);
                        prime2(at) == v && prime2(x) == v && prime2(y) == v && x.gcd(&y) == v
                    };
                    check(ok, "G2 (1)")?;
                } else {
                    let ok = b == 2 * a * at && {
                        let (x, y) = (b / a, b / at);
                        prime2(x) == 2 && prime2(y) == 2 && x.gcd(&y) == 2
                    };
                    check(ok, "G2 (2)")?;
                }
                if !divides(3, k) || !divides(3, a * at) {
                    check(prime3(a) == prime3(c) && prime3(at) == prime3(ct), "G2 (3)")
                } else {
                    let ok = prime3(c) == 1
                        && prime3(ct) == 1
                        && prime3(a * at) + 1 == prime3(a) + prime3(at)
                        && prime3(a) + prime3(at) == 4;
                    check(ok, "G2 (4)")
                }
            }
        }
    }
}

/// The correction term `η(k, q)`.
pub fn eta(algebra: AlgebraId, q: u64, k: u64) -> Result<Rational> {
    Ok(params(algebra, q, k)?.eta())
}

/// The predicted value-set size: over `F_q` for `Power` and `A1`, over `F_q²`
/// otherwise.
///
/// ```
/// use folding::{formulas, AlgebraId};
/// assert_eq!(formulas::cardinality(AlgebraId::B2, 3, 2).unwrap(), 5);
/// assert_eq!(formulas::cardinality(AlgebraId::G2, 7, 1).unwrap(), 49);
/// ```
pub fn cardinality(algebra: AlgebraId, q: u64, k: u64) -> Result<u64> {
    let p = params(algebra, q, k)?;
    debug_assert_eq!(p.implications_hold(), Ok(()), "q = {q}, k = {k}");
    let value = p.rational_cardinality();
    if !value.is_integer() {
        return Err(Error::NonIntegralFormula {
            algebra,
            q,
            k,
            value: value.to_string(),
        });
    }
    Ok(value.to_integer().to_u64().expect("cardinality is nonnegative and at most q²"))
}

/// True iff `gcd(k, M) = 1` for every modulus `M` of the algebra.
pub fn is_permutation(algebra: AlgebraId, q: u64, k: u64) -> Result<bool> {
    check_inputs(q, k)?;
    Ok(moduli(algebra, q).into_iter().all(|m| m.gcd(&k) == 1))
}

/// The exceptional B2 edge correction `ε(k, q)`.
pub fn epsilon_b2(q: u64, k: u64) -> Result<Rational> {
    let p = params(AlgebraId::B2, q, k)?;
    let Reduced::B2 { a, b, .. } = p.reduced else {
        unreachable!()
    };
    if !divides(2, k) || !divides(2, a * b) {
        return Ok(Rational::zero());
    }
    let (a1, b1) = (prime2(a), prime2(b));
    Ok(frac((b - b1) * (2 - a1), 2) + frac((a - a1) * (2 - b1), 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::prime_powers;
    use AlgebraId::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn params_examples() {
        assert_eq!(params(B2, 3, 2).unwrap().reduced, Reduced::B2 { a: 1, b: 2, c: 4, d: 5 });
        assert_eq!(
            params(G2, 2, 3).unwrap().reduced,
            Reduced::G2 { a: 1, at: 1, b: 1, c: 7, ct: 1 }
        );
        assert_eq!(params(A1, 5, 2).unwrap().reduced, Reduced::A1 { a: 2, b: 3 });
        assert_eq!(params(A2, 6, 2).unwrap_err(), Error::NotPrimePower(6));
        assert_eq!(params(A2, 5, 0).unwrap_err(), Error::ZeroDegree);
    }

    #[test]
    fn eta_examples() {
        assert_eq!(eta(B2, 3, 2).unwrap(), r(13, 8));
        assert_eq!(eta(A1, 5, 2).unwrap(), r(1, 2));
        assert_eq!(eta(G2, 2, 3).unwrap(), r(0, 1));
    }

    #[test]
    fn eta_vanishes_when_k_is_prime_to_six() {
        for q in prime_powers(2, 101) {
            for k in (1..200).filter(|k| k.gcd(&6) == 1) {
                for alg in [A2, G2] {
                    assert!(eta(alg, q, k).unwrap().is_zero(), "{alg} q={q} k={k}");
                }
            }
        }
    }

    #[test]
    fn cardinality_examples() {
        assert_eq!(cardinality(B2, 3, 2).unwrap(), 5);
        assert_eq!(cardinality(G2, 2, 3).unwrap(), 2);
        assert_eq!(cardinality(A2, 2, 3).unwrap(), 3);
        assert_eq!(cardinality(A1, 5, 2).unwrap(), 3);
        assert_eq!(cardinality(Power, 7, 3).unwrap(), 3);
        for q in prime_powers(2, 101) {
            assert_eq!(cardinality(Power, q, 1).unwrap(), q);
            assert_eq!(cardinality(A1, q, 1).unwrap(), q);
            for alg in AlgebraId::BIVARIATE {
                assert_eq!(cardinality(alg, q, 1).unwrap(), q * q);
            }
        }
    }

    #[test]
    fn permutation_examples() {
        assert!(is_permutation(A1, 5, 7).unwrap());
        assert!(!is_permutation(B2, 2, 3).unwrap());
        assert_eq!(cardinality(B2, 2, 3).unwrap(), 2);
        assert!(is_permutation(Power, 9, 1).unwrap());
    }

    #[test]
    fn epsilon_examples() {
        assert!(epsilon_b2(3, 2).unwrap().is_zero());
        assert!(epsilon_b2(5, 2).unwrap().is_zero());
        for q in prime_powers(2, 50) {
            for k in (1..60).step_by(2) {
                assert!(epsilon_b2(q, k).unwrap().is_zero());
            }
        }
        // q = 7, k = 6: a = 1, b = 4, so ε = (4 − 2)(2 − 1)/2
        assert_eq!(epsilon_b2(7, 6).unwrap(), r(1, 1));
    }

    #[test]
    fn implications_on_grid() {
        for q in prime_powers(2, 101) {
            for k in 1..=120 {
                for alg in AlgebraId::ALL {
                    assert_eq!(params(alg, q, k).unwrap().implications_hold(), Ok(()), "{alg} q={q} k={k}");
                }
            }
        }
    }
}
