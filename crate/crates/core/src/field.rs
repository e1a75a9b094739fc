//! Small finite fields `F_{p^n}` built from the least irreducible modulus.
//!
//! An element is stored as its index `Σ c_i p^i`, where `c_0, …, c_{n−1}` are
//! its coordinates in the basis `1, α, …, α^{n−1}` and `α` is a root of the
//! modulus. Multiplication goes through discrete-log tables, so fields are
//! capped at `2^20` elements.
//!
//! The modulus is the monic irreducible polynomial of degree `n` whose
//! lower coefficients, read as base-`p` digits with the constant term least
//! significant, give the smallest integer. No compatibility between
//! subfields is attempted; value-set sizes do not depend on the model.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::folding::PolyMap;

/// Largest field the crate will construct.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// Fields up to this size get a full addition table.
const ADD_TABLE_LIMIT: u32 = 1024;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `(p, n)` with `q = p^n`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut rest, mut n) = (q, 0u32);
    while rest % p == 0 {
        rest /= p;
        n += 1;
    }
    (rest == 1).then_some((p, n))
}

/// All prime powers in `lo..=hi`, ascending.
pub fn prime_powers(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&q| prime_power(q).is_some()).collect()
}

/// An element of some [`FqField`]; meaningless without its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FqElem(pub u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn index(self) -> u32 {
        self.0
    }
}

#[derive(Clone)]
pub struct FqField {
    p: u32,
    n: u32,
    q: u32,
    /// Coefficients `c_0..c_{n−1}` of the monic modulus (leading 1 implied).
    /// Empty for prime fields.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FqField")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .finish_non_exhaustive()
    }
}

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        (self.p, self.n, &self.modulus) == (other.p, other.n, &other.modulus)
    }
}

impl Eq for FqField {}

// Dense polynomials over F_p, lowest coefficient first, no trailing zeros.
fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let factor = (u64::from(*r.last().unwrap()) * u64::from(lead_inv) % u64::from(p)) as u32;
        for (i, &c) in b.iter().enumerate() {
            let sub = (u64::from(factor) * u64::from(c) % u64::from(p)) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let e = i64::from(a).extended_gcd(&i64::from(p));
    e.x.rem_euclid(i64::from(p)) as u32
}

fn digits(mut v: u32, p: u32, n: u32) -> Vec<u32> {
    (0..n)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Whether the monic polynomial `f` (full coefficient list) of degree ≥ 1 has
/// no factor of degree `1..=deg/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = (f.len() - 1) as u32;
    for d in 1..=deg / 2 {
        for low in 0..p.pow(d) {
            let mut g = digits(low, p, d);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn least_irreducible(p: u32, n: u32) -> Vec<u32> {
    (0..p.pow(n))
        .map(|v| digits(v, p, n))
        .find(|low| {
            let mut f = low.clone();
            f.push(1);
            is_irreducible(&f, p)
        })
        .expect("irreducible polynomials exist in every degree")
}

/// Builds `F_{p^n}`.
pub fn make_field(p: u64, n: u32) -> Result<FqField> {
    if n == 0 {
        return Err(Error::ZeroExtension);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let q = p
        .checked_pow(n)
        .filter(|&q| q <= MAX_FIELD_SIZE)
        .ok_or(Error::SizeExceeded {
            what: "field size",
            value: p.saturating_pow(n),
            limit: MAX_FIELD_SIZE,
        })?;
    let (p, q) = (p as u32, q as u32);
    let modulus = if n == 1 { Vec::new() } else { least_irreducible(p, n) };
    let mut field = FqField {
        p,
        n,
        q,
        modulus,
        exp: Vec::new(),
        log: Vec::new(),
        add_table: None,
    };
    field.build_tables();
    Ok(field)
}

/// `make_field` from `q` itself.
pub fn field_of_order(q: u64) -> Result<FqField> {
    let (p, n) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    make_field(p, n)
}

impl FqField {
    pub fn p(&self) -> u64 {
        u64::from(self.p)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        u64::from(self.q)
    }

    /// The modulus, lowest coefficient first, including the leading one.
    /// A prime field reports `x`.
    pub fn modulus(&self) -> Vec<u32> {
        if self.n == 1 {
            return vec![0, 1];
        }
        let mut m = self.modulus.clone();
        m.push(1);
        m
    }

    /// Coordinates `c_0..c_{n−1}` of an element.
    pub fn coords(&self, a: FqElem) -> Vec<u32> {
        digits(a.0, self.p, self.n)
    }

    /// Inverse of [`coords`](Self::coords); `c` has exactly `n` entries.
    pub fn from_coords(&self, c: &[u32]) -> FqElem {
        assert_eq!(c.len(), self.n as usize);
        FqElem(undigits(c, self.p))
    }

    /// All `q` elements in index order, which is lexicographic in the
    /// coordinates read from `c_{n−1}` down to `c_0`.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q).map(FqElem)
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, c: &BigInt) -> FqElem {
        let r = c.mod_floor(&BigInt::from(self.p));
        FqElem(r.to_u32().expect("residue fits"))
    }

    pub fn from_i64(&self, c: i64) -> FqElem {
        FqElem(c.rem_euclid(i64::from(self.p)) as u32)
    }

    // Schoolbook product of coordinate vectors, reduced by the modulus.
    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let (p, n) = (self.p, self.n);
        if n == 1 {
            return (u64::from(a) * u64::from(b) % u64::from(p)) as u32;
        }
        let (x, y) = (digits(a, p, n), digits(b, p, n));
        let mut prod = vec![0u32; 2 * n as usize - 1];
        for (i, &u) in x.iter().enumerate() {
            for (j, &v) in y.iter().enumerate() {
                prod[i + j] = ((u64::from(prod[i + j]) + u64::from(u) * u64::from(v)) % u64::from(p)) as u32;
            }
        }
        let mut r = poly_rem(&prod, &self.modulus(), p);
        r.resize(n as usize, 0);
        undigits(&r, p)
    }

    fn slow_add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.n == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.n {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn build_tables(&mut self) {
        let order = self.q - 1;
        let factors: Vec<u32> = (2..=order)
            .filter(|&d| order % d == 0 && is_prime(u64::from(d)))
            .collect();
        let pow = |f: &FqField, mut b: u32, mut e: u32| {
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = f.slow_mul(acc, b);
                }
                b = f.slow_mul(b, b);
                e >>= 1;
            }
            acc
        };
        let generator = (1..self.q)
            .find(|&g| factors.iter().all(|&r| pow(self, g, order / r) != 1))
            .expect("the multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; self.q as usize];
        let mut cur = 1u32;
        for i in 0..order {
            exp.push(cur);
            log[cur as usize] = i;
            cur = self.slow_mul(cur, generator);
        }
        self.exp = exp;
        self.log = log;
        if self.q <= ADD_TABLE_LIMIT && self.p != 2 && self.n > 1 {
            let q = self.q;
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = self.slow_add(a, b);
                }
            }
            self.add_table = Some(table);
        }
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        if let Some(t) = &self.add_table {
            return FqElem(t[(a.0 * self.q + b.0) as usize]);
        }
        FqElem(self.slow_add(a.0, b.0))
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        if self.p == 2 {
            return a;
        }
        let c: Vec<u32> = self.coords(a).into_iter().map(|d| (self.p - d) % self.p).collect();
        self.from_coords(&c)
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            return FqElem::ZERO;
        }
        let order = self.q - 1;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        FqElem(self.exp[(if s >= order { s - order } else { s }) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FqElem) -> Option<FqElem> {
        if a.0 == 0 {
            return None;
        }
        let order = self.q - 1;
        let l = self.log[a.0 as usize];
        Some(FqElem(self.exp[((order - l) % order) as usize]))
    }

    pub fn pow(&self, a: FqElem, e: u64) -> FqElem {
        if e == 0 {
            return FqElem::ONE;
        }
        if a.0 == 0 {
            return FqElem::ZERO;
        }
        let order = u64::from(self.q - 1);
        let l = u64::from(self.log[a.0 as usize]);
        FqElem(self.exp[(l * (e % order) % order) as usize])
    }
}

/// A polynomial map with coefficients already reduced into one field,
/// grouped by the power of `y` for fast sweeps.
#[derive(Debug, Clone)]
pub struct ReducedMap<'f> {
    field: &'f FqField,
    /// `rows[c][j]` lists `(i, coeff)` for the `x^i y^j` terms of component `c`.
    rows: Vec<Vec<Vec<(u32, FqElem)>>>,
}

impl<'f> ReducedMap<'f> {
    pub fn new(map: &PolyMap, field: &'f FqField) -> Self {
        let rows = map
            .components
            .iter()
            .map(|poly| {
                let (_, dy) = poly.degrees();
                let mut rows = vec![Vec::new(); dy as usize + 1];
                for (&(i, j), c) in poly.terms() {
                    let c = field.from_int(c);
                    if c != FqElem::ZERO {
                        rows[j as usize].push((i, c));
                    }
                }
                rows
            })
            .collect();
        ReducedMap { field, rows }
    }

    pub fn field(&self) -> &FqField {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn x_powers(&self, x: FqElem) -> Vec<FqElem> {
        let dx = self
            .rows
            .iter()
            .flatten()
            .flatten()
            .map(|&(i, _)| i)
            .max()
            .unwrap_or(0);
        let mut pw = Vec::with_capacity(dx as usize + 1);
        let mut cur = FqElem::ONE;
        for _ in 0..=dx {
            pw.push(cur);
            cur = self.field.mul(cur, x);
        }
        pw
    }

    /// For a fixed `x`, the coefficients of each component as a polynomial
    /// in `y` (lowest degree first).
    pub fn specialize_x(&self, x: FqElem) -> Vec<Vec<FqElem>> {
        let f = self.field;
        let pw = self.x_powers(x);
        self.rows
            .iter()
            .map(|rows| {
                rows.iter()
                    .map(|row| {
                        row.iter()
                            .fold(FqElem::ZERO, |acc, &(i, c)| f.add(acc, f.mul(c, pw[i as usize])))
                    })
                    .collect()
            })
            .collect()
    }

    /// Horner evaluation of a polynomial in `y`.
    #[inline]
    pub fn horner(&self, coeffs: &[FqElem], y: FqElem) -> FqElem {
        let f = self.field;
        coeffs
            .iter()
            .rev()
            .fold(FqElem::ZERO, |acc, &c| f.add(f.mul(acc, y), c))
    }

    /// Evaluates every component at `(x, y)`; `y` is ignored for
    /// univariate maps.
    pub fn eval(&self, x: FqElem, y: FqElem) -> Vec<FqElem> {
        self.specialize_x(x)
            .iter()
            .map(|c| self.horner(c, y))
            .collect()
    }
}

/// Evaluates `P` at one point of `F_q²` (or `F_q`, ignoring `point.1`).
///
/// Reduces the coefficients on every call; sweeps should build a
/// [`ReducedMap`] once instead.
pub fn eval_poly_map(p: &PolyMap, field: &FqField, point: (FqElem, FqElem)) -> Vec<FqElem> {
    ReducedMap::new(p, field).eval(point.0, point.1)
}
