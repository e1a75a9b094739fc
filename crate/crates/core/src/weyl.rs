//! Weyl substitution groups in `(σ, τ)` coordinates and exact torus points.
//!
//! Each algebra's Weyl group is stored as the finite list of integer 2×2
//! matrices that act on the column vector `(σ, τ)ᵗ`. Points of the torus
//! `R²/Z²` are kept as reduced rationals in `[0, 1)`, and two points give the
//! same value of the folding map exactly when they lie in one orbit of this
//! action. The lexicographically least orbit element serves as the canonical
//! representative.
//!
//! The rank-one algebras reuse the same machinery: their points have `τ = 0`
//! and their matrices fix the second coordinate.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;

/// The families of maps the crate knows about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraId {
    /// Power maps `x ↦ x^k`.
    Power,
    /// Dickson polynomials.
    A1,
    A2,
    B2,
    G2,
}

impl AlgebraId {
    pub const ALL: [AlgebraId; 5] = [
        AlgebraId::Power,
        AlgebraId::A1,
        AlgebraId::A2,
        AlgebraId::B2,
        AlgebraId::G2,
    ];

    pub const BIVARIATE: [AlgebraId; 3] = [AlgebraId::A2, AlgebraId::B2, AlgebraId::G2];

    /// Number of variables of the associated polynomial map.
    pub fn rank(self) -> usize {
        match self {
            AlgebraId::Power | AlgebraId::A1 => 1,
            AlgebraId::A2 | AlgebraId::B2 | AlgebraId::G2 => 2,
        }
    }

    pub fn is_bivariate(self) -> bool {
        self.rank() == 2
    }

    pub fn name(self) -> &'static str {
        match self {
            AlgebraId::Power => "power",
            AlgebraId::A1 => "a1",
            AlgebraId::A2 => "a2",
            AlgebraId::B2 => "b2",
            AlgebraId::G2 => "g2",
        }
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseAlgebraError(pub String);

impl fmt::Display for ParseAlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown algebra `{}` (expected one of power, a1, a2, b2, g2)",
            self.0
        )
    }
}

impl std::error::Error for ParseAlgebraError {}

impl FromStr for AlgebraId {
    type Err = ParseAlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "power" | "p" => Ok(AlgebraId::Power),
            "a1" | "dickson" => Ok(AlgebraId::A1),
            "a2" => Ok(AlgebraId::A2),
            "b2" => Ok(AlgebraId::B2),
            "g2" => Ok(AlgebraId::G2),
            _ => Err(ParseAlgebraError(s.to_owned())),
        }
    }
}

/// An integer 2×2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2(pub [[i64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1, 0], [0, 1]]);

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        let [[e, f], [g, h]] = rhs.0;
        Mat2([[a * e + b * g, a * f + b * h], [c * e + d * g, c * f + d * h]])
    }

    pub fn transpose(&self) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        Mat2([[a, c], [b, d]])
    }

    #[inline]
    pub fn apply(&self, x: i64, y: i64) -> (i64, i64) {
        let [[a, b], [c, d]] = self.0;
        (a * x + b * y, c * x + d * y)
    }

    pub fn det(&self) -> i64 {
        let [[a, b], [c, d]] = self.0;
        a * d - b * c
    }
}

/// A weight `m·σ + n·τ`, i.e. the exponent of `e^{2πi(mσ + nτ)}`.
///
/// Ordered lexicographically by `(m, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector {
    pub m: i64,
    pub n: i64,
}

impl ExponentVector {
    pub const ZERO: ExponentVector = ExponentVector { m: 0, n: 0 };

    pub const fn new(m: i64, n: i64) -> Self {
        ExponentVector { m, n }
    }

    pub fn scale(self, k: i64) -> Self {
        ExponentVector::new(self.m * k, self.n * k)
    }
}

impl std::ops::Add for ExponentVector {
    type Output = ExponentVector;

    fn add(self, rhs: Self) -> Self {
        ExponentVector::new(self.m + rhs.m, self.n + rhs.n)
    }
}

impl std::ops::Sub for ExponentVector {
    type Output = ExponentVector;

    fn sub(self, rhs: Self) -> Self {
        ExponentVector::new(self.m - rhs.m, self.n - rhs.n)
    }
}

impl From<(i64, i64)> for ExponentVector {
    fn from((m, n): (i64, i64)) -> Self {
        ExponentVector::new(m, n)
    }
}

/// The Weyl substitutions of one algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitGroup {
    algebra: AlgebraId,
    elements: Vec<Mat2>,
    duals: Vec<Mat2>,
}

impl OrbitGroup {
    pub fn algebra(&self) -> AlgebraId {
        self.algebra
    }

    /// The matrices in the order the substitutions are traditionally listed
    /// (identity first).
    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    /// Transposes of [`elements`](Self::elements): the induced action on
    /// exponent vectors.
    pub fn dual_elements(&self) -> &[Mat2] {
        &self.duals
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, m: &Mat2) -> bool {
        self.elements.contains(m)
    }
}

/// Builds the substitution group of `algebra`.
///
/// Power maps get the trivial group. A1 acts by `σ ↦ ±σ`.
pub fn orbit_group(algebra: AlgebraId) -> OrbitGroup {
    // Each row encodes (σ, τ) ↦ (aσ + bτ, cσ + dτ).
    let elements: Vec<Mat2> = match algebra {
        AlgebraId::Power => vec![Mat2::IDENTITY],
        AlgebraId::A1 => vec![Mat2::IDENTITY, Mat2::new(-1, 0, 0, 1)],
        AlgebraId::A2 => vec![
            Mat2::new(1, 0, 0, 1),   // (σ, τ)
            Mat2::new(1, 0, -1, -1), // (σ, −σ−τ)
            Mat2::new(0, 1, -1, -1), // (τ, −σ−τ)
            Mat2::new(0, 1, 1, 0),   // (τ, σ)
            Mat2::new(-1, -1, 1, 0), // (−σ−τ, σ)
            Mat2::new(-1, -1, 0, 1), // (−σ−τ, τ)
        ],
        AlgebraId::B2 => vec![
            Mat2::new(1, 0, 0, 1),   // (σ, τ)
            Mat2::new(1, 0, 0, -1),  // (σ, −τ)
            Mat2::new(-1, 0, 0, 1),  // (−σ, τ)
            Mat2::new(-1, 0, 0, -1), // (−σ, −τ)
            Mat2::new(0, 1, 1, 0),   // (τ, σ)
            Mat2::new(0, -1, 1, 0),  // (−τ, σ)
            Mat2::new(0, 1, -1, 0),  // (τ, −σ)
            Mat2::new(0, -1, -1, 0), // (−τ, −σ)
        ],
        AlgebraId::G2 => vec![
            Mat2::new(1, 0, 0, 1),   // (σ, τ)
            Mat2::new(0, 1, 1, 0),   // (τ, σ)
            Mat2::new(-1, 0, 0, -1), // (−σ, −τ)
            Mat2::new(0, -1, -1, 0), // (−τ, −σ)
            Mat2::new(1, 0, -1, -1), // (σ, −σ−τ)
            Mat2::new(-1, -1, 1, 0), // (−σ−τ, σ)
            Mat2::new(-1, 0, 1, 1),  // (−σ, σ+τ)
            Mat2::new(1, 1, -1, 0),  // (σ+τ, −σ)
            Mat2::new(0, 1, -1, -1), // (τ, −σ−τ)
            Mat2::new(-1, -1, 0, 1), // (−σ−τ, τ)
            Mat2::new(0, -1, 1, 1),  // (−τ, σ+τ)
            Mat2::new(1, 1, 0, -1),  // (σ+τ, −τ)
        ],
    };
    let duals = elements.iter().map(Mat2::transpose).collect();
    OrbitGroup {
        algebra,
        elements,
        duals,
    }
}

/// The orbit `{Mᵗ·w : M ∈ g}` of a weight under the dual action.
pub fn orbit(w: ExponentVector, g: &OrbitGroup) -> BTreeSet<ExponentVector> {
    g.dual_elements()
        .iter()
        .map(|m| m.apply(w.m, w.n).into())
        .collect()
}

pub type Rational64 = Ratio<i64>;

/// A point of `R²/Z²` with rational coordinates, stored reduced in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint {
    sigma: Rational64,
    tau: Rational64,
}

fn frac(r: Rational64) -> Rational64 {
    r - r.floor()
}

impl TorusPoint {
    pub const ORIGIN: TorusPoint = TorusPoint {
        sigma: Ratio::new_raw(0, 1),
        tau: Ratio::new_raw(0, 1),
    };

    /// Reduces both coordinates modulo 1.
    pub fn new(sigma: Rational64, tau: Rational64) -> Self {
        TorusPoint {
            sigma: frac(sigma),
            tau: frac(tau),
        }
    }

    /// `(s/ds, t/dt)` modulo 1.
    ///
    /// # Panics
    ///
    /// If either denominator is zero.
    pub fn from_fractions(s: i64, ds: i64, t: i64, dt: i64) -> Self {
        TorusPoint::new(Ratio::new(s, ds), Ratio::new(t, dt))
    }

    pub fn sigma(&self) -> Rational64 {
        self.sigma
    }

    pub fn tau(&self) -> Rational64 {
        self.tau
    }

    /// Applies a substitution and reduces modulo 1.
    pub fn transform(&self, m: &Mat2) -> TorusPoint {
        let [[a, b], [c, d]] = m.0;
        let s = self.sigma * a + self.tau * b;
        let t = self.sigma * c + self.tau * d;
        TorusPoint::new(s, t)
    }

    /// `(kσ, kτ)` modulo 1.
    pub fn scale(&self, k: i64) -> TorusPoint {
        TorusPoint::new(self.sigma * k, self.tau * k)
    }

    /// Least common denominator of the two coordinates.
    pub fn denominator(&self) -> i64 {
        self.sigma.denom().lcm(self.tau.denom())
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.sigma, self.tau)
    }
}

/// The lexicographically least element of the orbit of `p`.
pub fn canonicalize(p: &TorusPoint, g: &OrbitGroup) -> TorusPoint {
    g.elements()
        .iter()
        .map(|m| p.transform(m))
        .min()
        .expect("groups contain the identity")
}

/// Number of substitutions fixing `p` modulo `Z²`.
pub fn stabilizer_size(p: &TorusPoint, g: &OrbitGroup) -> usize {
    g.elements()
        .iter()
        .filter(|m| p.transform(m) == *p)
        .count()
}

/// Integer form of [`canonicalize`] for points `(x/l, y/l)` sharing the
/// denominator `l`: returns the least numerator pair over the orbit.
///
/// Inputs must already lie in `[0, l)`.
#[inline]
pub fn canonicalize_numerators(x: i64, y: i64, l: i64, g: &OrbitGroup) -> (i64, i64) {
    debug_assert!(l > 0 && (0..l).contains(&x) && (0..l).contains(&y));
    let mut best = (x, y);
    for m in &g.elements()[1..] {
        let (u, v) = m.apply(x, y);
        let cand = (u.rem_euclid(l), v.rem_euclid(l));
        if cand < best {
            best = cand;
        }
    }
    best
}

impl From<(i64, i64, i64)> for TorusPoint {
    /// `(x, y, l)` ↦ `(x/l, y/l)`.
    fn from((x, y, l): (i64, i64, i64)) -> Self {
        TorusPoint::from_fractions(x, l, y, l)
    }
}

impl TorusPoint {
    pub fn is_origin(&self) -> bool {
        self.sigma.is_zero() && self.tau.is_zero()
    }
}
