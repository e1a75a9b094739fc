//! Folding polynomial maps `P_k` with `P_k(Φ(σ,τ)) = Φ(kσ,kτ)`.
//!
//! Component `i` of `P_k` is the polynomial in `x = φ1`, `y = φ2` equal to the
//! orbit sum of `k·λ_i`. Two constructions are provided:
//!
//! * [`folding_poly_by_reduction`] reduces that orbit sum directly.
//! * [`folding_poly`] reduces only the elementary symmetric functions of each
//!   fundamental orbit's exponentials, then runs Newton's identities for the
//!   power sums `Σ_μ e^{kμ}` inside `Z[x, y]`. This is much cheaper for large
//!   `k`, and the results are memoised per process.
//!
//! The two are checked against each other in the tests.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::invariant::{
    fundamental_weights, laurent_mul, EvalRing, orbit_sum, reduce_to_fundamentals, BiPoly, LaurentPoly,
};
use crate::weyl::{orbit, orbit_group, AlgebraId, ExponentVector};

/// One member of a folding family: a polynomial map in one or two variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    pub algebra: AlgebraId,
    pub k: u64,
    /// One polynomial per variable; univariate maps use only `x`.
    pub components: Vec<BiPoly>,
}

impl PolyMap {
    pub fn identity(algebra: AlgebraId) -> PolyMap {
        let mut components = vec![BiPoly::x()];
        if algebra.is_bivariate() {
            components.push(BiPoly::y());
        }
        PolyMap {
            algebra,
            k: 1,
            components,
        }
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }
}

/// Elementary symmetric functions of `{e^μ : μ ∈ orbit}`, as polynomials in
/// the fundamentals. Index `i` holds `e_i`, with `e_0 = 1`.
fn orbit_elementary(algebra: AlgebraId, weight: ExponentVector) -> Result<Vec<BiPoly>> {
    let g = orbit_group(algebra);
    // coeffs[j] is the coefficient of T^j in Π (T − e^μ).
    let mut coeffs = vec![LaurentPoly::one()];
    for mu in orbit(weight, &g) {
        let shift = LaurentPoly::monomial(mu, -1);
        let mut next = vec![LaurentPoly::zero(); coeffs.len() + 1];
        for (j, c) in coeffs.iter().enumerate() {
            next[j + 1] = &next[j + 1] + c;
            next[j] = &next[j] + &laurent_mul(c, &shift);
        }
        coeffs = next;
    }
    let r = coeffs.len() - 1;
    (0..=r)
        .map(|i| {
            let c = &coeffs[r - i];
            let e = if i % 2 == 0 { c.clone() } else { -c };
            reduce_to_fundamentals(&e, algebra)
        })
        .collect()
}

/// Power sums `p_k = Σ_μ e^{kμ}` over one orbit, grown on demand.
#[derive(Debug)]
struct PowerSums {
    elementary: Vec<BiPoly>,
    sums: Vec<BiPoly>,
}

impl PowerSums {
    fn new(algebra: AlgebraId, weight: ExponentVector) -> Result<Self> {
        let elementary = orbit_elementary(algebra, weight)?;
        let r = elementary.len() - 1;
        Ok(PowerSums {
            elementary,
            sums: vec![BiPoly::constant(r as u64)],
        })
    }

    fn get(&mut self, k: usize) -> &BiPoly {
        let r = self.elementary.len() - 1;
        while self.sums.len() <= k {
            let n = self.sums.len();
            let mut p = BiPoly::zero();
            for i in 1..=r.min(n) {
                let sign = if i % 2 == 1 { BigInt::one() } else { -BigInt::one() };
                let term = if i == n {
                    // Newton: the last term is ± n·e_n rather than ± e_n·p_0.
                    self.elementary[i].scale(&BigInt::from(n))
                } else {
                    &self.elementary[i] * &self.sums[n - i]
                };
                p.add_scaled(&term, &sign);
            }
            self.sums.push(p);
        }
        &self.sums[k]
    }
}

type Families = HashMap<AlgebraId, Vec<PowerSums>>;

fn families() -> &'static Mutex<Families> {
    static CACHE: OnceLock<Mutex<Families>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

type MapCache = HashMap<(AlgebraId, u64), Arc<PolyMap>>;

fn map_cache() -> &'static Mutex<MapCache> {
    static CACHE: OnceLock<Mutex<MapCache>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The folding map `P_k` of `algebra`: `x^k` for power maps, the Dickson
/// polynomial `D_k` for A1, and the bivariate folding maps for A2, B2, G2.
///
/// ```
/// use folding::{folding_poly, AlgebraId};
///
/// let a2 = folding_poly(AlgebraId::A2, 2).unwrap();
/// assert_eq!(a2.components[0].to_string(), "x^2 - 2*y");
/// assert_eq!(a2.components[1].to_string(), "-2*x + y^2");
/// ```
pub fn folding_poly(algebra: AlgebraId, k: u64) -> Result<Arc<PolyMap>> {
    if k == 0 {
        return Err(Error::ZeroDegree);
    }
    if let Some(hit) = map_cache()
        .lock()
        .expect("cache poisoned")
        .get(&(algebra, k))
    {
        return Ok(Arc::clone(hit));
    }
    let components = {
        let mut fams = families().lock().expect("cache poisoned");
        let sums = match fams.entry(algebra) {
            Entry::Occupied(e) => e.into_mut(),
            Entry::Vacant(e) => e.insert(
                fundamental_weights(algebra)
                    .into_iter()
                    .map(|w| PowerSums::new(algebra, w))
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let idx = usize::try_from(k).expect("k fits in usize");
        sums.iter_mut()
            .map(|s| s.get(idx).clone())
            .collect()
    };
    let map = Arc::new(PolyMap {
        algebra,
        k,
        components,
    });
    map_cache()
        .lock()
        .expect("cache poisoned")
        .entry((algebra, k))
        .or_insert_with(|| Arc::clone(&map));
    Ok(map)
}

/// `P_k` by reducing the orbit sums of `k·λ_i` directly. Uncached.
pub fn folding_poly_by_reduction(algebra: AlgebraId, k: u64) -> Result<PolyMap> {
    if k == 0 {
        return Err(Error::ZeroDegree);
    }
    let g = orbit_group(algebra);
    let scale = i64::try_from(k).expect("k fits in i64");
    let components = fundamental_weights(algebra)
        .into_iter()
        .map(|w| reduce_to_fundamentals(&orbit_sum(w.scale(scale), &g), algebra))
        .collect::<Result<Vec<_>>>()?;
    Ok(PolyMap {
        algebra,
        k,
        components,
    })
}

/// `P ∘ Q`, which is `P_{k·m}` when `P = P_k` and `Q = P_m`.
pub fn compose(p: &PolyMap, q: &PolyMap) -> Result<PolyMap> {
    if p.algebra != q.algebra {
        return Err(Error::AlgebraMismatch(p.algebra, q.algebra));
    }
    let x = &q.components[0];
    let zero = BiPoly::zero();
    let y = q.components.get(1).unwrap_or(&zero);
    Ok(PolyMap {
        algebra: p.algebra,
        k: p.k * q.k,
        components: p.components.iter().map(|c| c.eval_in(x, y)).collect(),
    })
}

/// `Φ(σ, τ)` as complex numbers, one entry per component.
pub fn phi(algebra: AlgebraId, sigma: f64, tau: f64) -> Vec<Complex64> {
    let g = orbit_group(algebra);
    fundamental_weights(algebra)
        .into_iter()
        .map(|w| {
            orbit(w, &g)
                .into_iter()
                .map(|v| {
                    let theta = std::f64::consts::TAU * (v.m as f64 * sigma + v.n as f64 * tau);
                    Complex64::from_polar(1.0, theta)
                })
                .sum()
        })
        .collect()
}

/// Complex numbers in binary fixed point with [`Fixed::FRAC_BITS`] fractional
/// bits. Folding coefficients are large and alternate in sign, so evaluating
/// in `f64` cancels catastrophically; in this format only the truncation of
/// each product is lost.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Fixed {
    re: BigInt,
    im: BigInt,
}

impl Fixed {
    const FRAC_BITS: u32 = 320;

    fn from_f64(v: f64) -> BigInt {
        assert!(v.is_finite());
        if v == 0.0 {
            return BigInt::zero();
        }
        let bits = v.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let mant = if exp == 0 {
            (bits & ((1 << 52) - 1)) << 1
        } else {
            (bits & ((1 << 52) - 1)) | (1 << 52)
        };
        // v = mant · 2^(exp − 1075)
        let shift = exp - 1075 + i64::from(Self::FRAC_BITS);
        let m = BigInt::from(mant);
        let m = if shift >= 0 { m << shift as usize } else { m >> (-shift) as usize };
        if v < 0.0 {
            -m
        } else {
            m
        }
    }

    fn from_complex(z: Complex64) -> Fixed {
        Fixed {
            re: Self::from_f64(z.re),
            im: Self::from_f64(z.im),
        }
    }

    fn to_complex(&self) -> Complex64 {
        let scale = 2f64.powi(Self::FRAC_BITS as i32);
        let f = |v: &BigInt| v.to_f64().unwrap_or(f64::NAN) / scale;
        Complex64::new(f(&self.re), f(&self.im))
    }
}

impl EvalRing for Fixed {
    fn zero_like(_: &Self) -> Self {
        Fixed {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    fn from_int(c: &BigInt, _: &Self) -> Self {
        Fixed {
            re: c << Self::FRAC_BITS as usize,
            im: BigInt::zero(),
        }
    }

    fn add(&self, rhs: &Self) -> Self {
        Fixed {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let s = Self::FRAC_BITS as usize;
        Fixed {
            re: (&self.re * &rhs.re - &self.im * &rhs.im) >> s,
            im: (&self.re * &rhs.im + &self.im * &rhs.re) >> s,
        }
    }
}

impl Fixed {
    fn recip(&self) -> Fixed {
        let s = Self::FRAC_BITS as usize;
        let norm = (&self.re * &self.re + &self.im * &self.im) >> s;
        Fixed {
            re: (&self.re << s) / &norm,
            im: -((&self.im << s) / &norm),
        }
    }

    fn powi(&self, inverse: &Fixed, e: i64) -> Fixed {
        let base = if e < 0 { inverse } else { self };
        let mut acc = Fixed::from_int(&BigInt::one(), self);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(base);
        }
        acc
    }
}

/// `Φ` at `u = e^{2πiσ}`, `v = e^{2πiτ}` in fixed point.
fn phi_fixed(algebra: AlgebraId, u: &Fixed, v: &Fixed) -> Vec<Fixed> {
    let g = orbit_group(algebra);
    let (ui, vi) = (u.recip(), v.recip());
    fundamental_weights(algebra)
        .into_iter()
        .map(|w| {
            orbit(w, &g).into_iter().fold(Fixed::zero_like(u), |acc, e| {
                acc.add(&u.powi(&ui, e.m).mul(&v.powi(&vi, e.n)))
            })
        })
        .collect()
}

/// Largest componentwise deviation `|P(Φ(σ,τ)) − Φ(kσ,kτ)|` over `samples`
/// pseudo-random points (fixed seed).
///
/// Both sides are evaluated in high-precision fixed point from the same
/// `u = e^{2πiσ}`, `v = e^{2πiτ}`, using `e^{2πikσ} = u^k`. Rounding `u` and
/// `v` to `f64` does not disturb the comparison, since the functional
/// equation is an identity of Laurent polynomials in `u` and `v`.
pub fn numeric_check(p: &PolyMap, samples: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ p.k);
    let k = i64::try_from(p.k).expect("k fits in i64");
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let sigma: f64 = rng.gen();
        let tau: f64 = if p.algebra.is_bivariate() { rng.gen() } else { 0.0 };
        let turn = |t: f64| Fixed::from_complex(Complex64::from_polar(1.0, std::f64::consts::TAU * t));
        let (u, v) = (turn(sigma), turn(tau));
        let at = phi_fixed(p.algebra, &u, &v);
        let zero = Fixed::zero_like(&u);
        let y = at.get(1).unwrap_or(&zero);
        let (uk, vk) = (u.powi(&u.recip(), k), v.powi(&v.recip(), k));
        let target = phi_fixed(p.algebra, &uk, &vk);
        for (c, t) in p.components.iter().zip(&target) {
            let got = c.eval_in(&at[0], y);
            let diff = Fixed {
                re: got.re - &t.re,
                im: got.im - &t.im,
            };
            worst = worst.max(diff.to_complex().norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(terms: &[((u32, u32), i64)]) -> BiPoly {
        BiPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn small_examples() {
        let d2 = folding_poly(AlgebraId::A1, 2).unwrap();
        assert_eq!(d2.components, vec![bp(&[((2, 0), 1), ((0, 0), -2)])]);

        let a2 = folding_poly(AlgebraId::A2, 2).unwrap();
        assert_eq!(
            a2.components,
            vec![bp(&[((2, 0), 1), ((0, 1), -2)]), bp(&[((0, 2), 1), ((1, 0), -2)])]
        );

        let p5 = folding_poly(AlgebraId::Power, 5).unwrap();
        assert_eq!(p5.components, vec![BiPoly::monomial(5, 0, 1)]);

        for alg in AlgebraId::ALL {
            assert_eq!(*folding_poly(alg, 1).unwrap(), PolyMap::identity(alg));
        }
    }

    #[test]
    fn zero_degree_is_rejected() {
        assert_eq!(folding_poly(AlgebraId::B2, 0).unwrap_err(), Error::ZeroDegree);
        assert_eq!(
            folding_poly_by_reduction(AlgebraId::B2, 0).unwrap_err(),
            Error::ZeroDegree
        );
    }

    #[test]
    fn both_constructions_agree() {
        for alg in AlgebraId::ALL {
            for k in 1..=10 {
                let fast = folding_poly(alg, k).unwrap();
                let slow = folding_poly_by_reduction(alg, k).unwrap();
                assert_eq!(*fast, slow, "{alg} k={k}");
            }
        }
    }

    #[test]
    fn dickson_composition() {
        let d2 = folding_poly(AlgebraId::A1, 2).unwrap();
        let d4 = compose(&d2, &d2).unwrap();
        assert_eq!(d4.components, vec![bp(&[((4, 0), 1), ((2, 0), -4), ((0, 0), 2)])]);
        assert_eq!(d4.k, 4);
    }

    #[test]
    fn compose_rejects_mixed_algebras() {
        let a = folding_poly(AlgebraId::A2, 2).unwrap();
        let b = folding_poly(AlgebraId::B2, 2).unwrap();
        assert!(matches!(compose(&a, &b), Err(Error::AlgebraMismatch(..))));
    }

    #[test]
    fn identity_is_neutral_for_compose() {
        for alg in AlgebraId::ALL {
            let id = PolyMap::identity(alg);
            for m in 1..=4 {
                let pm = folding_poly(alg, m).unwrap();
                assert_eq!(compose(&id, &pm).unwrap(), *pm);
                assert_eq!(compose(&pm, &id).unwrap(), *pm);
            }
        }
    }

    #[test]
    fn numeric_examples() {
        let check = |alg, k| numeric_check(&folding_poly(alg, k).unwrap(), 100);
        assert!(check(AlgebraId::A1, 5) < 1e-9);
        assert!(check(AlgebraId::G2, 4) < 1e-8);
        assert!(check(AlgebraId::B2, 7) < 1e-8);
    }

    #[test]
    fn numeric_check_notices_a_wrong_coefficient() {
        let mut bad = (*folding_poly(AlgebraId::B2, 3).unwrap()).clone();
        bad.components[1].add_term(1, 0, BigInt::one());
        assert!(numeric_check(&bad, 10) > 1e-3);
    }

    #[test]
    fn fixed_point_round_trips_f64() {
        for v in [0.0, 1.0, -2.5, 1e-30, std::f64::consts::PI, -6.0] {
            let z = Complex64::new(v, -v / 3.0);
            assert_eq!(Fixed::from_complex(z).to_complex(), z);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = folding_poly_by_reduction(AlgebraId::G2, 6).unwrap();
        let b = folding_poly_by_reduction(AlgebraId::G2, 6).unwrap();
        assert_eq!(a, b);
        assert_eq!(*folding_poly(AlgebraId::G2, 6).unwrap(), a);
    }
}
