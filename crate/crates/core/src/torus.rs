//! Polynomial-free value-set counts from fixed-point parametrisations.
//!
//! The fixed points of `P_q` are the images under `Φ` of a few explicit
//! families of rational torus points, each family a grid or a line with
//! denominators built from `q`. Applying `P_k` to a fixed point multiplies the
//! parameters by `k`, so `|P_k(F_q²)|` is the number of Weyl orbits met by the
//! scaled families. Orbits are identified through [`canonicalize`].
//!
//! All points of one count are kept as numerator pairs over a single common
//! denominator `L`, the lcm of every family's moduli.

use std::collections::HashSet;

use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::prime_power;
use crate::formulas::{self, prime2, prime3, Rational, Reduced};
use crate::weyl::{canonicalize, canonicalize_numerators, orbit_group, AlgebraId, OrbitGroup, TorusPoint};

/// Largest `q` accepted by the oracle.
pub const MAX_ORACLE_Q: u64 = 101;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    /// `{(s/m1, t/m2) : 0 ≤ s < m1, 0 ≤ t < m2}`.
    Grid { m1: u64, m2: u64 },
    /// `{(s/modulus, s·multiplier/modulus) : 0 ≤ s < modulus}`.
    Line { modulus: u64, multiplier: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FixSetSpec {
    pub algebra: AlgebraId,
    /// One-based, in the order of [`fix_sets`].
    pub index: usize,
    pub generator: Generator,
}

impl FixSetSpec {
    /// Number of parameter points before any identification.
    pub fn len(&self) -> u64 {
        match self.generator {
            Generator::Grid { m1, m2 } => m1 * m2,
            Generator::Line { modulus, .. } => modulus,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn moduli(&self) -> [u64; 2] {
        match self.generator {
            Generator::Grid { m1, m2 } => [m1, m2],
            Generator::Line { modulus, .. } => [modulus, 1],
        }
    }

    /// Parameter points scaled by `k`, as numerators over `l`.
    fn scaled_points(&self, k: u64, l: i64) -> Vec<(i64, i64)> {
        let k = k as i64;
        match self.generator {
            Generator::Grid { m1, m2 } => {
                let (m1, m2) = (m1 as i64, m2 as i64);
                let (f1, f2) = (l / m1, l / m2);
                let mut out = Vec::with_capacity((m1 * m2) as usize);
                for s in 0..m1 {
                    let x = (s * k).rem_euclid(m1) * f1;
                    for t in 0..m2 {
                        out.push((x, (t * k).rem_euclid(m2) * f2));
                    }
                }
                out
            }
            Generator::Line { modulus, multiplier } => {
                let m = modulus as i64;
                let f = l / m;
                let u = multiplier.rem_euclid(m);
                (0..m)
                    .map(|s| {
                        let x = (s * k).rem_euclid(m);
                        (x * f, (x * u).rem_euclid(m) * f)
                    })
                    .collect()
            }
        }
    }
}

/// The families whose union is the fixed-point set of `P_q`.
///
/// Rank-one families use `τ = 0` (a grid with `m2 = 1`). For `Power` the
/// fixed point `0 ∈ F_q`, which has no torus parameter, is not listed; the
/// counts add it separately.
///
/// ```
/// use folding::torus::{fix_sets, Generator};
/// use folding::AlgebraId;
/// let sets = fix_sets(AlgebraId::A2, 5);
/// assert_eq!(sets.len(), 3);
/// assert_eq!(sets[1].generator, Generator::Line { modulus: 24, multiplier: 5 });
/// ```
pub fn fix_sets(algebra: AlgebraId, q: u64) -> Vec<FixSetSpec> {
    use Generator::*;
    let qi = q as i64;
    let q2 = q * q;
    let gens = match algebra {
        AlgebraId::Power => vec![Grid { m1: q - 1, m2: 1 }],
        AlgebraId::A1 => vec![Grid { m1: q - 1, m2: 1 }, Grid { m1: q + 1, m2: 1 }],
        AlgebraId::A2 => vec![
            Grid { m1: q - 1, m2: q - 1 },
            Line { modulus: q2 - 1, multiplier: qi },
            Line { modulus: q2 + q + 1, multiplier: qi },
        ],
        AlgebraId::B2 => vec![
            Grid { m1: q - 1, m2: q + 1 },
            Grid { m1: q - 1, m2: q - 1 },
            Grid { m1: q + 1, m2: q + 1 },
            Line { modulus: q2 - 1, multiplier: qi },
            Line { modulus: q2 + 1, multiplier: qi },
        ],
        AlgebraId::G2 => vec![
            Grid { m1: q - 1, m2: q - 1 },
            Line { modulus: q2 - 1, multiplier: qi },
            Line { modulus: q2 + q + 1, multiplier: qi },
            Grid { m1: q + 1, m2: q + 1 },
            Line { modulus: q2 - 1, multiplier: -qi },
            Line { modulus: q2 - q + 1, multiplier: -qi },
        ],
    };
    gens.into_iter()
        .enumerate()
        .map(|(i, generator)| FixSetSpec {
            algebra,
            index: i + 1,
            generator,
        })
        .collect()
}

fn check_q(q: u64, k: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::ZeroDegree);
    }
    if prime_power(q).is_none() {
        return Err(Error::NotPrimePower(q));
    }
    if q > MAX_ORACLE_Q {
        return Err(Error::SizeExceeded {
            what: "q",
            value: q,
            limit: MAX_ORACLE_Q,
        });
    }
    Ok(())
}

fn common_denominator(sets: &[FixSetSpec]) -> i64 {
    sets.iter()
        .flat_map(|s| s.moduli())
        .fold(1u64, |l, m| l.lcm(&m)) as i64
}

fn canonical_image(spec: &FixSetSpec, k: u64, l: i64, g: &OrbitGroup) -> HashSet<(i64, i64)> {
    spec.scaled_points(k, l)
        .into_iter()
        .map(|(x, y)| canonicalize_numerators(x, y, l, g))
        .collect()
}

/// `|P_k(F_q)|` or `|P_k(F_q²)|` counted from the fixed-point families.
///
/// ```
/// use folding::torus::oracle_count;
/// use folding::AlgebraId;
/// assert_eq!(oracle_count(AlgebraId::B2, 3, 2).unwrap(), 5);
/// ```
pub fn oracle_count(algebra: AlgebraId, q: u64, k: u64) -> Result<u64> {
    check_q(q, k)?;
    let sets = fix_sets(algebra, q);
    let l = common_denominator(&sets);
    let g = orbit_group(algebra);
    let union = sets
        .par_iter()
        .map(|s| canonical_image(s, k, l, &g))
        .reduce(HashSet::new, |mut a, b| {
            if a.len() < b.len() {
                return b.into_iter().chain(a).collect();
            }
            a.extend(b);
            a
        });
    let zero = u64::from(algebra == AlgebraId::Power);
    Ok(union.len() as u64 + zero)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointClass {
    Interior,
    Edge,
    Corner,
}

/// Orbit representatives of the corner points.
pub fn corners(algebra: AlgebraId) -> Vec<TorusPoint> {
    let pt = |s, ds, t, dt| TorusPoint::from_fractions(s, ds, t, dt);
    match algebra {
        AlgebraId::Power => vec![],
        AlgebraId::A1 => vec![pt(0, 1, 0, 1), pt(1, 2, 0, 1)],
        AlgebraId::A2 => vec![pt(0, 1, 0, 1), pt(1, 3, 1, 3), pt(2, 3, 2, 3)],
        AlgebraId::B2 => vec![pt(0, 1, 0, 1), pt(1, 2, 1, 2), pt(0, 1, 1, 2)],
        AlgebraId::G2 => vec![pt(0, 1, 0, 1), pt(1, 3, 1, 3), pt(0, 1, 1, 2)],
    }
}

/// Interior points have trivial stabilizer; corners are the listed orbits;
/// every other point is an edge point. Constant on orbits.
///
/// ```
/// use folding::torus::{classify_point, PointClass};
/// use folding::{AlgebraId, TorusPoint};
/// let p = TorusPoint::from_fractions(0, 1, 1, 2);
/// assert_eq!(classify_point(&p, AlgebraId::B2), PointClass::Corner);
/// ```
pub fn classify_point(p: &TorusPoint, algebra: AlgebraId) -> PointClass {
    let g = orbit_group(algebra);
    let c = canonicalize(p, &g);
    if corners(algebra).iter().any(|k| canonicalize(k, &g) == c) {
        PointClass::Corner
    } else if crate::weyl::stabilizer_size(&c, &g) > 1 {
        PointClass::Edge
    } else {
        PointClass::Interior
    }
}

struct Classifier {
    algebra: AlgebraId,
    group: OrbitGroup,
    l: i64,
    corners: Vec<(i64, i64)>,
}

impl Classifier {
    fn new(algebra: AlgebraId, l: i64) -> Self {
        let group = orbit_group(algebra);
        // A corner not representable over `l` can never be met.
        let corners = corners(algebra)
            .iter()
            .map(|c| canonicalize(c, &group))
            .filter(|c| l % c.denominator() == 0)
            .map(|c| {
                let f = |r: num_rational::Ratio<i64>| r.numer() * (l / r.denom());
                (f(c.sigma()), f(c.tau()))
            })
            .collect();
        Classifier { algebra, group, l, corners }
    }

    /// `p` must already be canonical.
    fn classify(&self, p: (i64, i64)) -> PointClass {
        if self.corners.contains(&p) {
            return PointClass::Corner;
        }
        let fixed = self.group.elements()[1..].iter().any(|m| {
            let (u, v) = m.apply(p.0, p.1);
            (u.rem_euclid(self.l), v.rem_euclid(self.l)) == p
        });
        debug_assert_eq!(
            fixed,
            classify_point(&TorusPoint::from((p.0, p.1, self.l)), self.algebra) != PointClass::Interior
        );
        if fixed {
            PointClass::Edge
        } else {
            PointClass::Interior
        }
    }
}

/// Distinct canonical points of one image, split by class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassCounts {
    pub interior: u64,
    pub edge: u64,
    pub corner: u64,
}

impl ClassCounts {
    pub fn total(&self) -> u64 {
        self.interior + self.edge + self.corner
    }
}

/// Per-family and union class counts of the scaled fixed-point families.
#[derive(Debug, Clone)]
pub struct Census {
    pub algebra: AlgebraId,
    pub q: u64,
    pub k: u64,
    /// Indexed like [`fix_sets`].
    pub per_set: Vec<ClassCounts>,
    pub union: ClassCounts,
    /// Sum over families of their interior counts.
    pub interior_sum: u64,
    /// B2 only: edge points of the union outside the images of `S1 ∪ S4`.
    pub b2_extra_edges: Option<u64>,
}

pub fn census(algebra: AlgebraId, q: u64, k: u64) -> Result<Census> {
    check_q(q, k)?;
    let sets = fix_sets(algebra, q);
    let l = common_denominator(&sets);
    let cls = Classifier::new(algebra, l);
    let images: Vec<HashSet<(i64, i64)>> = sets
        .par_iter()
        .map(|s| canonical_image(s, k, l, &cls.group))
        .collect();
    let count = |pts: &mut dyn Iterator<Item = &(i64, i64)>| {
        let mut c = ClassCounts::default();
        for &p in pts {
            match cls.classify(p) {
                PointClass::Interior => c.interior += 1,
                PointClass::Edge => c.edge += 1,
                PointClass::Corner => c.corner += 1,
            }
        }
        c
    };
    let per_set: Vec<ClassCounts> = images.iter().map(|s| count(&mut s.iter())).collect();
    let union_set: HashSet<(i64, i64)> = images.iter().flatten().copied().collect();
    let union = count(&mut union_set.iter());
    let b2_extra_edges = (algebra == AlgebraId::B2).then(|| {
        union_set
            .iter()
            .filter(|&&p| cls.classify(p) == PointClass::Edge)
            .filter(|p| !images[0].contains(p) && !images[3].contains(p))
            .count() as u64
    });
    Ok(Census {
        algebra,
        q,
        k,
        interior_sum: per_set.iter().map(|c| c.interior).sum(),
        per_set,
        union,
        b2_extra_edges,
    })
}

/// One counted quantity next to its closed-form prediction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditLine {
    pub label: String,
    pub observed: u64,
    pub predicted: Rational,
}

impl AuditLine {
    pub fn holds(&self) -> bool {
        self.predicted == Rational::from_integer(self.observed.into())
    }
}

fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn rq(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Compares a [`census`] against the closed-form counts of interior, edge
/// and corner points used to derive the cardinality formulas.
///
/// The B2 corner prediction assumes `(0, 0)` lies in every image, which
/// holds since `k·0 = 0`.
pub fn audit(algebra: AlgebraId, q: u64, k: u64) -> Result<Vec<AuditLine>> {
    let c = census(algebra, q, k)?;
    let p = formulas::params(algebra, q, k)?;
    let qi = q as i64;
    let mut lines = Vec::new();
    let mut push = |label: String, observed: u64, predicted: Rational| {
        lines.push(AuditLine { label, observed, predicted });
    };
    match p.reduced {
        Reduced::A2 { a, b, c: cc } => {
            let (a, b, cc) = (a as i64, b as i64, cc as i64);
            let g3a = a.gcd(&3);
            let gqb = (qi - 1).gcd(&b);
            let g3c = cc.gcd(&3);
            let rows = [
                ((a * a - 3 * a + 2 * g3a), 6, a - g3a, g3a),
                ((b - gqb), 2, gqb - g3a, g3a),
                ((cc - g3c), 3, 0, g3c),
            ];
            for (i, &(num, den, edge, corner)) in rows.iter().enumerate() {
                let s = c.per_set[i];
                push(format!("A2 S{} interior", i + 1), s.interior, rq(num, den));
                push(format!("A2 S{} edge", i + 1), s.edge, r(edge));
                push(format!("A2 S{} corner", i + 1), s.corner, r(corner));
            }
            push("A2 union interior".into(), c.union.interior, r(c.interior_sum as i64));
            push("A2 union edge".into(), c.union.edge, r(c.per_set[1].edge as i64));
            push("A2 union corner".into(), c.union.corner, r(c.per_set[1].corner as i64));
        }
        Reduced::B2 { a, b, c: cc, d } => {
            let (a, b, cc, d) = (a as i64, b as i64, cc as i64, d as i64);
            let (a1, b1, c1, d1) = (
                prime2(a as u64) as i64,
                prime2(b as u64) as i64,
                prime2(cc as u64) as i64,
                prime2(d as u64) as i64,
            );
            let interior = [
                rq((a - a1) * (b - b1), 4),
                rq((a - a1) * (a - a1 - 2), 8),
                rq((b - b1) * (b - b1 - 2), 8),
                rq(cc - cc / a - cc / b + c1, 4),
                rq(d - d1, 4),
            ];
            for (i, pred) in interior.into_iter().enumerate() {
                push(format!("B2 S{} interior", i + 1), c.per_set[i].interior, pred);
            }
            push("B2 union interior".into(), c.union.interior, r(c.interior_sum as i64));
            let s1_edges = rq((a - a1) * b1 + (b - b1) * a1, 2);
            let s4_edges = rq(cc / a + cc / b - 2 * c1, 2);
            push("B2 S1 edge".into(), c.per_set[0].edge, s1_edges.clone());
            push("B2 S4 edge".into(), c.per_set[3].edge, s4_edges.clone());
            push("B2 S5 edge".into(), c.per_set[4].edge, r(0));
            let eps = formulas::epsilon_b2(q, k)?;
            push("B2 epsilon".into(), c.b2_extra_edges.unwrap_or(0), eps.clone());
            push("B2 union edge".into(), c.union.edge, s1_edges + s4_edges + eps);
            let corners = if a1 == 2 || b1 == 2 { 3 } else { c1 };
            push("B2 union corner".into(), c.union.corner, r(corners));
        }
        Reduced::G2 { a, at, b, c: cc, ct } => {
            let (a, at, b, cc, ct) = (a as i64, at as i64, b as i64, cc as i64, ct as i64);
            let p2 = |m: i64| prime2(m as u64) as i64;
            let p3 = |m: i64| prime3(m as u64) as i64;
            let line = rq(b - b / a - b / at + (b / a).gcd(&(b / at)), 4);
            let interior = [
                rq(a * a - 6 * a + 3 * p2(a) + 2 * p3(a), 12),
                line.clone(),
                rq(cc - p3(cc), 6),
                rq(at * at - 6 * at + 3 * p2(at) + 2 * p3(at), 12),
                line,
                rq(ct - p3(ct), 6),
            ];
            for (i, pred) in interior.into_iter().enumerate() {
                push(format!("G2 S{} interior", i + 1), c.per_set[i].interior, pred);
            }
            push("G2 union interior".into(), c.union.interior, r(c.interior_sum as i64));
            let (x, y) = (b / a, b / at);
            let third = rq(p3(a) + p3(at) - 2, 2);
            let edges = r(x - p2(x) - p3(x) + 1 + y - p2(y) - p3(y) + 1) + third.clone();
            push("G2 union edge".into(), c.union.edge, edges);
            let corners = r(1 + (p2(a * at * b) - 1)) + third;
            push("G2 union corner".into(), c.union.corner, corners);
        }
        Reduced::Power { .. } | Reduced::A1 { .. } => return Err(Error::Unsupported(algebra)),
    }
    Ok(lines)
}
