//! Exact Laurent polynomials on the weight lattice and the reduction of
//! Weyl-invariant ones to polynomials in the fundamental orbit sums.
//!
//! The invariant ring of each algebra is the polynomial ring generated by
//! `φ1` and `φ2`, the orbit sums of the two fundamental weights. Reduction
//! repeatedly peels off the highest dominant exponent of the residual: if
//! that exponent is `a·λ1 + b·λ2`, then `φ1^a φ2^b` has it as its unique
//! highest term with coefficient one, so subtracting the right multiple
//! strictly lowers the residual.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::weyl::{orbit, orbit_group, AlgebraId, ExponentVector, OrbitGroup};

/// An integer Laurent polynomial in `e^{2πiσ}`, `e^{2πiτ}`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<ExponentVector, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        LaurentPoly::monomial(ExponentVector::ZERO, c)
    }

    pub fn monomial(w: ExponentVector, c: impl Into<BigInt>) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(w, c.into());
        p
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = ((i64, i64), C)>,
        C: Into<BigInt>,
    {
        let mut p = LaurentPoly::zero();
        for (w, c) in terms {
            p.add_term(w.into(), c.into());
        }
        p
    }

    pub fn add_term(&mut self, w: ExponentVector, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<ExponentVector, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, w: ExponentVector) -> BigInt {
        self.terms.get(&w).cloned().unwrap_or_default()
    }

    /// Number of nonzero terms; emptiness is [`is_zero`](Self::is_zero).
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Applies an integer substitution to every exponent.
    pub fn map_exponents(&self, m: &crate::weyl::Mat2) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(m.apply(w.m, w.n).into(), c.clone());
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> LaurentPoly {
        let mut base = self.clone();
        let mut acc = LaurentPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = laurent_mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = laurent_mul(&base, &base);
            }
        }
        acc
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.terms.iter().map(|(w, c)| ((w.m, w.n), c.to_string())))
            .finish()
    }
}

/// Convolution product.
pub fn laurent_mul(f: &LaurentPoly, g: &LaurentPoly) -> LaurentPoly {
    let mut acc: HashMap<ExponentVector, BigInt> = HashMap::new();
    for (u, a) in &f.terms {
        for (v, b) in &g.terms {
            *acc.entry(*u + *v).or_default() += a * b;
        }
    }
    LaurentPoly {
        terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(*w, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(*w, -c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        laurent_mul(self, rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(w, c)| (*w, -c)).collect(),
        }
    }
}

/// Sum of `e^{2πi w'·(σ,τ)}` over the orbit of `w`, each with coefficient one.
pub fn orbit_sum(w: ExponentVector, g: &OrbitGroup) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for v in orbit(w, g) {
        p.add_term(v, BigInt::one());
    }
    p
}

/// Whether every substitution of `g` fixes `f`.
pub fn is_invariant(f: &LaurentPoly, g: &OrbitGroup) -> bool {
    g.dual_elements().iter().skip(1).all(|m| {
        f.terms
            .iter()
            .all(|(w, c)| f.terms.get(&m.apply(w.m, w.n).into()) == Some(c))
    })
}

/// An integer polynomial in `x` (and `y`), keyed by the degree pair `(i, j)`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn one() -> Self {
        BiPoly::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        BiPoly::monomial(0, 0, c)
    }

    pub fn x() -> Self {
        BiPoly::monomial(1, 0, 1)
    }

    pub fn y() -> Self {
        BiPoly::monomial(0, 1, 1)
    }

    pub fn monomial(i: u32, j: u32, c: impl Into<BigInt>) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(i, j, c.into());
        p
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), C)>,
        C: Into<BigInt>,
    {
        let mut p = BiPoly::zero();
        for ((i, j), c) in terms {
            p.add_term(i, j, c.into());
        }
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((i, j)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), BigInt> {
        &self.terms
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigInt {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Number of nonzero terms; emptiness is [`is_zero`](Self::is_zero).
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest exponent of `x` and of `y` appearing in any term.
    pub fn degrees(&self) -> (u32, u32) {
        self.terms
            .keys()
            .fold((0, 0), |(a, b), &(i, j)| (a.max(i), b.max(j)))
    }

    /// Total degree; zero for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &BigInt) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &BiPoly, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for (&(i, j), v) in &other.terms {
            self.add_term(i, j, v * c);
        }
    }

    pub fn pow(&self, mut e: u32) -> BiPoly {
        let mut base = self.clone();
        let mut acc = BiPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Whether `p` divides every coefficient.
    pub fn all_divisible_by(&self, p: u64) -> bool {
        let p = BigInt::from(p);
        self.terms.values().all(|c| (c % &p).is_zero())
    }

    /// Largest absolute coefficient, or zero.
    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    /// Evaluates the polynomial in any commutative ring, by nested Horner
    /// schemes in `y` and then `x`.
    pub fn eval_in<R: EvalRing>(&self, x: &R, y: &R) -> R {
        let (dx, _) = self.degrees();
        let zero = R::zero_like(x);
        // inner[i] = Σ_j c_ij y^j
        let mut by_x: BTreeMap<u32, Vec<(u32, &BigInt)>> = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            by_x.entry(i).or_default().push((j, c));
        }
        let horner_y = |row: &[(u32, &BigInt)]| -> R {
            // row is sorted by j ascending
            let mut acc = zero.clone();
            let mut deg = row.last().map(|&(j, _)| j).unwrap_or(0);
            let mut idx = row.len();
            loop {
                if idx > 0 && row[idx - 1].0 == deg {
                    acc = acc.add(&R::from_int(row[idx - 1].1, x));
                    idx -= 1;
                }
                if deg == 0 {
                    break;
                }
                acc = acc.mul(y);
                deg -= 1;
            }
            acc
        };
        let mut acc = zero.clone();
        for i in (0..=dx).rev() {
            if let Some(row) = by_x.get(&i) {
                acc = acc.add(&horner_y(row));
            }
            if i > 0 {
                acc = acc.mul(x);
            }
        }
        acc
    }
}

/// The minimal ring interface polynomial evaluation needs.
pub trait EvalRing: Clone {
    /// Additive identity of the same ring as `like` (fields need a handle).
    fn zero_like(like: &Self) -> Self;
    fn from_int(c: &BigInt, like: &Self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
}

impl EvalRing for BiPoly {
    fn zero_like(_: &Self) -> Self {
        BiPoly::zero()
    }
    fn from_int(c: &BigInt, _: &Self) -> Self {
        BiPoly::constant(c.clone())
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

impl EvalRing for LaurentPoly {
    fn zero_like(_: &Self) -> Self {
        LaurentPoly::zero()
    }
    fn from_int(c: &BigInt, _: &Self) -> Self {
        LaurentPoly::constant(c.clone())
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        laurent_mul(self, rhs)
    }
}

impl EvalRing for num_complex::Complex64 {
    fn zero_like(_: &Self) -> Self {
        num_complex::Complex64::new(0.0, 0.0)
    }
    fn from_int(c: &BigInt, _: &Self) -> Self {
        num_complex::Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BiPoly {
    /// Terms in descending `(i, j)` order, e.g. `x^2 - 2*y` or `-2*x + y^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (&(i, j), c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut parts = Vec::new();
            if !mag.is_one() || (i == 0 && j == 0) {
                parts.push(mag.to_string());
            }
            match i {
                0 => {}
                1 => parts.push("x".into()),
                _ => parts.push(format!("x^{i}")),
            }
            match j {
                0 => {}
                1 => parts.push("y".into()),
                _ => parts.push(format!("y^{j}")),
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;

    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &BigInt::one());
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;

    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-BigInt::one());
        out
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;

    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut acc: HashMap<(u32, u32), BigInt> = HashMap::new();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                *acc.entry((i + k, j + l)).or_default() += a * b;
            }
        }
        BiPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;

    fn neg(self) -> BiPoly {
        self.scale(&-BigInt::one())
    }
}

/// The weights whose orbit sums define `φ1` (and `φ2`), as written in the
/// usual exponential-sum formulas.
pub fn fundamental_weights(algebra: AlgebraId) -> Vec<ExponentVector> {
    match algebra {
        AlgebraId::Power | AlgebraId::A1 => vec![ExponentVector::new(1, 0)],
        AlgebraId::A2 | AlgebraId::B2 => vec![ExponentVector::new(1, 0), ExponentVector::new(1, 1)],
        AlgebraId::G2 => vec![ExponentVector::new(1, 0), ExponentVector::new(2, 1)],
    }
}

/// The fundamental orbit sums `φ1` (and `φ2`) as Laurent polynomials.
pub fn fundamental_orbit_sums(algebra: AlgebraId) -> Vec<LaurentPoly> {
    let g = orbit_group(algebra);
    fundamental_weights(algebra)
        .into_iter()
        .map(|w| orbit_sum(w, &g))
        .collect()
}

/// Substitutes `x = φ1`, `y = φ2` into `q` and expands.
pub fn substitute_fundamentals(q: &BiPoly, algebra: AlgebraId) -> LaurentPoly {
    let phis = fundamental_orbit_sums(algebra);
    let y = phis.get(1).cloned().unwrap_or_else(LaurentPoly::zero);
    q.eval_in(&phis[0], &y)
}

/// Dominance data for one algebra: the height functional that orders the
/// weights and the highest elements `λ1`, `λ2` of the fundamental orbits.
#[derive(Debug, Clone)]
pub(crate) struct Chamber {
    algebra: AlgebraId,
    height: (i64, i64),
    leading: Vec<ExponentVector>,
}

impl Chamber {
    pub(crate) fn new(algebra: AlgebraId) -> Self {
        let height = match algebra {
            AlgebraId::G2 => (3, 2),
            _ => (2, 1),
        };
        let g = orbit_group(algebra);
        let h = |w: &ExponentVector| height.0 * w.m + height.1 * w.n;
        let leading = fundamental_weights(algebra)
            .into_iter()
            .map(|w| {
                orbit(w, &g)
                    .into_iter()
                    .max_by_key(|v| (h(v), *v))
                    .expect("orbits are nonempty")
            })
            .collect();
        Chamber {
            algebra,
            height,
            leading,
        }
    }

    #[inline]
    pub(crate) fn height(&self, w: ExponentVector) -> i64 {
        self.height.0 * w.m + self.height.1 * w.n
    }

    /// Sort key realising the elimination order.
    #[inline]
    fn key(&self, w: ExponentVector) -> (i64, i64, i64) {
        (self.height(w), w.m, w.n)
    }

    pub(crate) fn leading(&self) -> &[ExponentVector] {
        &self.leading
    }

    /// Coordinates of `w` with respect to the leading weights, scaled by the
    /// determinant so they stay integral.
    fn raw_coords(&self, w: ExponentVector) -> (i64, i64, i64) {
        match self.leading.as_slice() {
            [l1] => (w.m, w.n, l1.m),
            [l1, l2] => {
                let det = l1.m * l2.n - l1.n * l2.m;
                let a = w.m * l2.n - w.n * l2.m;
                let b = l1.m * w.n - l1.n * w.m;
                if det < 0 {
                    (-a, -b, -det)
                } else {
                    (a, b, det)
                }
            }
            _ => unreachable!("rank is one or two"),
        }
    }

    /// Whether `w` is the highest element of its orbit.
    #[inline]
    pub(crate) fn is_dominant(&self, w: ExponentVector) -> bool {
        if self.algebra == AlgebraId::Power {
            return true;
        }
        let (a, b, _) = self.raw_coords(w);
        match self.leading.len() {
            1 => a >= 0 && b == 0,
            _ => a >= 0 && b >= 0,
        }
    }

    /// `(a, b)` with `w = a·λ1 + b·λ2`, when such nonnegative integers exist.
    pub(crate) fn decompose(&self, w: ExponentVector) -> Option<(u32, u32)> {
        let (a, b, det) = self.raw_coords(w);
        if self.leading.len() == 1 {
            return (b == 0 && a >= 0 && a % det == 0).then(|| ((a / det) as u32, 0));
        }
        if a < 0 || b < 0 || a % det != 0 || b % det != 0 {
            return None;
        }
        Some(((a / det) as u32, (b / det) as u32))
    }
}

type DomPoly = HashMap<ExponentVector, BigInt>;

/// `f · φ_i` for an invariant `f` given by its dominant coefficients.
fn mul_fundamental(f: &DomPoly, i: usize, g: &OrbitGroup, chamber: &Chamber) -> DomPoly {
    let fund: Vec<ExponentVector> = orbit(chamber.leading()[i], g).into_iter().collect();
    let mut out = DomPoly::new();
    for (lam, c) in f {
        for alpha in orbit(*lam, g) {
            for mu in &fund {
                let nu = alpha + *mu;
                if chamber.is_dominant(nu) {
                    *out.entry(nu).or_default() += c;
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Dominant coefficients of `φ1^a φ2^b`, memoised for one reduction.
struct Expansions<'a> {
    group: &'a OrbitGroup,
    chamber: &'a Chamber,
    cache: HashMap<(u32, u32), DomPoly>,
}

impl<'a> Expansions<'a> {
    fn new(group: &'a OrbitGroup, chamber: &'a Chamber) -> Self {
        let mut cache = HashMap::new();
        cache.insert((0, 0), DomPoly::from([(ExponentVector::ZERO, BigInt::one())]));
        Expansions {
            group,
            chamber,
            cache,
        }
    }

    fn get(&mut self, a: u32, b: u32) -> &DomPoly {
        if !self.cache.contains_key(&(a, b)) {
            // Walk down to the nearest cached monomial, then multiply back up.
            let mut chain = Vec::new();
            let (mut x, mut y) = (a, b);
            while !self.cache.contains_key(&(x, y)) {
                chain.push((x, y));
                if x > 0 {
                    x -= 1;
                } else {
                    y -= 1;
                }
            }
            for &(x, y) in chain.iter().rev() {
                let (prev, i) = if x > 0 { ((x - 1, y), 0) } else { ((x, y - 1), 1) };
                let next = mul_fundamental(&self.cache[&prev], i, self.group, self.chamber);
                self.cache.insert((x, y), next);
            }
        }
        &self.cache[&(a, b)]
    }
}

/// Expresses an invariant Laurent polynomial as a polynomial in `φ1`, `φ2`.
///
/// Fails with [`Error::NonInvariantInput`] if `f` is not fixed by the
/// algebra's substitutions, and with [`Error::ReductionStall`] if some
/// leading exponent cannot be peeled off (which would mean the elimination
/// order is wrong for this algebra).
pub fn reduce_to_fundamentals(f: &LaurentPoly, algebra: AlgebraId) -> Result<BiPoly> {
    let group = orbit_group(algebra);
    if !is_invariant(f, &group) {
        return Err(Error::NonInvariantInput(algebra));
    }
    let chamber = Chamber::new(algebra);
    let mut residual: BTreeMap<(i64, i64, i64), BigInt> = f
        .terms()
        .iter()
        .filter(|(w, _)| chamber.is_dominant(**w))
        .map(|(w, c)| (chamber.key(*w), c.clone()))
        .collect();
    let mut expansions = Expansions::new(&group, &chamber);
    let mut out = BiPoly::zero();
    while let Some((&top_key, _)) = residual.last_key_value() {
        let (_, m, n) = top_key;
        let top = ExponentVector::new(m, n);
        let stall = Error::ReductionStall { algebra, m, n };
        let (a, b) = chamber.decompose(top).ok_or(stall.clone())?;
        let c = residual.remove(&top_key).expect("key was just read");
        let expansion = expansions.get(a, b);
        if expansion.get(&top).map_or(true, |lead| !lead.is_one()) {
            return Err(stall);
        }
        for (w, e) in expansion {
            if *w == top {
                continue;
            }
            let key = chamber.key(*w);
            if key >= top_key {
                return Err(stall);
            }
            let slot = residual.entry(key).or_default();
            *slot -= &c * e;
            if slot.is_zero() {
                residual.remove(&key);
            }
        }
        out.add_term(a, b, c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{orbit_group, AlgebraId};

    fn lp(terms: &[((i64, i64), i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn mul_examples() {
        let u = lp(&[((1, 0), 1), ((-1, 0), 1)]);
        assert_eq!(
            laurent_mul(&u, &u),
            lp(&[((2, 0), 1), ((0, 0), 2), ((-2, 0), 1)])
        );
        assert_eq!(laurent_mul(&u, &LaurentPoly::one()), u);

        let phi1 = orbit_sum(ExponentVector::new(1, 0), &orbit_group(AlgebraId::B2));
        let expected = lp(&[
            ((2, 0), 1),
            ((-2, 0), 1),
            ((0, 2), 1),
            ((0, -2), 1),
            ((1, 1), 2),
            ((1, -1), 2),
            ((-1, 1), 2),
            ((-1, -1), 2),
            ((0, 0), 4),
        ]);
        assert_eq!(laurent_mul(&phi1, &phi1), expected);
    }

    #[test]
    fn orbit_sum_examples() {
        let b2 = orbit_group(AlgebraId::B2);
        let phi = orbit_sum(ExponentVector::new(1, 0), &b2);
        assert_eq!(phi, lp(&[((1, 0), 1), ((-1, 0), 1), ((0, 1), 1), ((0, -1), 1)]));
        for alg in AlgebraId::ALL {
            let g = orbit_group(alg);
            assert_eq!(orbit_sum(ExponentVector::ZERO, &g), LaurentPoly::one());
        }
        let g2 = orbit_group(AlgebraId::G2);
        assert_eq!(
            orbit_sum(ExponentVector::new(1, 0), &g2),
            lp(&[
                ((1, 0), 1),
                ((0, 1), 1),
                ((1, 1), 1),
                ((-1, 0), 1),
                ((0, -1), 1),
                ((-1, -1), 1)
            ])
        );
    }

    #[test]
    fn invariance() {
        for alg in AlgebraId::ALL {
            let g = orbit_group(alg);
            for m in -3..=3 {
                for n in -3..=3 {
                    assert!(is_invariant(&orbit_sum(ExponentVector::new(m, n), &g), &g));
                }
            }
        }
        let b2 = orbit_group(AlgebraId::B2);
        assert!(!is_invariant(&lp(&[((1, 0), 1)]), &b2));
        let f = orbit_sum(ExponentVector::new(2, 1), &b2);
        let h = orbit_sum(ExponentVector::new(1, 0), &b2);
        assert!(is_invariant(&laurent_mul(&f, &h), &b2));
    }

    #[test]
    fn dominance_matches_orbit_maximum() {
        for alg in AlgebraId::ALL {
            let g = orbit_group(alg);
            let chamber = Chamber::new(alg);
            for m in -6..=6 {
                for n in -6..=6 {
                    if alg.rank() == 1 && n != 0 {
                        continue;
                    }
                    let w = ExponentVector::new(m, n);
                    let top = orbit(w, &g)
                        .into_iter()
                        .max_by_key(|v| (chamber.height(*v), *v))
                        .unwrap();
                    assert_eq!(chamber.is_dominant(w), top == w, "{alg} {w:?}");
                    if alg != AlgebraId::Power {
                        // generic height: the orbit maximum is attained once
                        let best = chamber.height(top);
                        let hits = orbit(w, &g).iter().filter(|v| chamber.height(**v) == best).count();
                        assert_eq!(hits, 1, "{alg} {w:?}");
                    }
                    if chamber.is_dominant(w) && alg != AlgebraId::Power {
                        assert!(chamber.decompose(w).is_some(), "{alg} {w:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn reduce_examples() {
        let b2 = orbit_group(AlgebraId::B2);
        let phi2 = orbit_sum(ExponentVector::new(1, 1), &b2);
        assert_eq!(reduce_to_fundamentals(&phi2, AlgebraId::B2).unwrap(), BiPoly::y());

        let o20 = orbit_sum(ExponentVector::new(2, 0), &b2);
        let expected = BiPoly::from_terms([((2, 0), 1), ((0, 1), -2), ((0, 0), -4)]);
        assert_eq!(reduce_to_fundamentals(&o20, AlgebraId::B2).unwrap(), expected);

        for alg in AlgebraId::ALL {
            assert_eq!(
                reduce_to_fundamentals(&LaurentPoly::constant(7), alg).unwrap(),
                BiPoly::constant(7)
            );
        }
    }

    #[test]
    fn reduce_rejects_non_invariant() {
        let err = reduce_to_fundamentals(&lp(&[((1, 0), 1)]), AlgebraId::G2).unwrap_err();
        assert_eq!(err, Error::NonInvariantInput(AlgebraId::G2));
    }

    #[test]
    fn reduce_errors_instead_of_looping_outside_polynomial_subring() {
        let err = reduce_to_fundamentals(&lp(&[((-1, 0), 1)]), AlgebraId::Power).unwrap_err();
        assert!(matches!(err, Error::ReductionStall { .. }));
    }

    #[test]
    fn monomials_round_trip() {
        for alg in AlgebraId::ALL {
            let phis = fundamental_orbit_sums(alg);
            for i in 0..=4u32 {
                for j in 0..=(4 - i) {
                    if alg.rank() == 1 && j > 0 {
                        continue;
                    }
                    let mut f = phis[0].pow(i);
                    if j > 0 {
                        f = laurent_mul(&f, &phis[1].pow(j));
                    }
                    let q = reduce_to_fundamentals(&f, alg).unwrap();
                    assert_eq!(q, BiPoly::monomial(i, j, 1), "{alg} x^{i} y^{j}");
                }
            }
        }
    }

    #[test]
    fn back_substitution_reproduces_orbit_sums() {
        for alg in AlgebraId::ALL {
            let g = orbit_group(alg);
            for m in -4..=4 {
                for n in -4..=4 {
                    if alg.rank() == 1 && n != 0 {
                        continue;
                    }
                    if alg == AlgebraId::Power && m < 0 {
                        continue;
                    }
                    let f = orbit_sum(ExponentVector::new(m, n), &g);
                    let q = reduce_to_fundamentals(&f, alg).unwrap();
                    assert_eq!(substitute_fundamentals(&q, alg), f, "{alg} ({m},{n})");
                }
            }
        }
    }

    #[test]
    fn reduction_is_a_ring_homomorphism() {
        for alg in AlgebraId::BIVARIATE {
            let g = orbit_group(alg);
            let reps: Vec<ExponentVector> = (-2..=2)
                .flat_map(|m| (-2..=2).map(move |n| ExponentVector::new(m, n)))
                .collect();
            for (idx, u) in reps.iter().enumerate().step_by(3) {
                for v in reps.iter().skip(idx % 5).step_by(4) {
                    let f = orbit_sum(*u, &g);
                    let h = orbit_sum(*v, &g);
                    let lhs = reduce_to_fundamentals(&laurent_mul(&f, &h), alg).unwrap();
                    let rhs = &reduce_to_fundamentals(&f, alg).unwrap()
                        * &reduce_to_fundamentals(&h, alg).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn display_is_highest_degree_first() {
        let p = BiPoly::from_terms([((2, 0), 1), ((0, 1), -2)]);
        assert_eq!(p.to_string(), "x^2 - 2*y");
        assert_eq!(BiPoly::constant(-3).to_string(), "-3");
    }
}
