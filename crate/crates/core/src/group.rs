//! The cyclic group Z_N, complex functions on it and its Fourier transform.
//!
//! Normalization: Haar measure on Z_N has total mass 1, so
//!
//! * `f̂(γ) = (1/N) Σ_x f(x) e^{-2πiγx/N}`
//! * `f(x) = Σ_γ f̂(γ) e^{2πiγx/N}`
//! * `(f*g)(x) = (1/N) Σ_y f(y) g(x-y)`
//!
//! With these conventions `(f*g)^ = f̂·ĝ` and Parseval reads
//! `(1/N) Σ_x f(x) conj(g(x)) = Σ_γ f̂(γ) conj(ĝ(γ))`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Sizes above this use the chirp transform in [`dft`].
pub const DIRECT_DFT_MAX: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CyclicGroup {
    modulus: usize,
    prime: bool,
}

impl CyclicGroup {
    pub fn new(modulus: usize) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidModulus(modulus));
        }
        Ok(Self {
            modulus,
            prime: is_prime(modulus as u64),
        })
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn is_prime(&self) -> bool {
        self.prime
    }

    pub fn reduce(&self, x: i128) -> usize {
        x.rem_euclid(self.modulus as i128) as usize
    }

    /// Representative of `x` in `(-N/2, N/2]`.
    pub fn signed(&self, x: usize) -> i64 {
        let n = self.modulus as i64;
        let x = (x % self.modulus) as i64;
        if 2 * x > n {
            x - n
        } else {
            x
        }
    }

    fn check_same(&self, other: &CyclicGroup) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        Ok(())
    }
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupFunction {
    group: CyclicGroup,
    values: Vec<Complex64>,
}

impl GroupFunction {
    pub fn new(group: CyclicGroup, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != group.modulus {
            return Err(Error::LengthMismatch {
                len: values.len(),
                modulus: group.modulus,
            });
        }
        Ok(Self { group, values })
    }

    pub fn from_fn(group: CyclicGroup, f: impl FnMut(usize) -> Complex64) -> Self {
        let values = (0..group.modulus).map(f).collect();
        Self { group, values }
    }

    pub fn zero(group: CyclicGroup) -> Self {
        Self::constant(group, Complex64::new(0.0, 0.0))
    }

    pub fn constant(group: CyclicGroup, c: Complex64) -> Self {
        Self {
            group,
            values: vec![c; group.modulus],
        }
    }

    /// Characteristic function of a set of residues (taken mod N).
    pub fn indicator(group: CyclicGroup, set: &[usize]) -> Self {
        let mut f = Self::zero(group);
        for &x in set {
            f.values[x % group.modulus] = Complex64::new(1.0, 0.0);
        }
        f
    }

    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    pub fn modulus(&self) -> usize {
        self.group.modulus
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, x: usize) -> Complex64 {
        self.values[x % self.group.modulus]
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.modulus())
            .filter(|&x| self.values[x] != Complex64::new(0.0, 0.0))
            .collect()
    }

    /// `x ↦ f(x - t)`.
    pub fn translate(&self, t: usize) -> Self {
        let n = self.modulus();
        let t = t % n;
        Self::from_fn(self.group, |x| self.values[(x + n - t) % n])
    }

    /// `x ↦ f(qx)`.
    pub fn dilate(&self, q: usize) -> Self {
        let n = self.modulus();
        Self::from_fn(self.group, |x| self.values[(x * (q % n)) % n])
    }

    pub fn pointwise_mul(&self, other: &Self) -> Result<Self> {
        self.group.check_same(&other.group)?;
        Ok(Self::from_fn(self.group, |x| self.values[x] * other.values[x]))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.group.check_same(&other.group)?;
        Ok(Self::from_fn(self.group, |x| self.values[x] + other.values[x]))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_fn(self.group, |x| self.values[x] * c)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Integral against normalized Haar measure.
    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.modulus() as f64
    }

    /// `(1/N) Σ_x f(x) conj(g(x))`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.group.check_same(&other.group)?;
        let s: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum();
        Ok(s / self.modulus() as f64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    group: CyclicGroup,
    coefficients: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(group: CyclicGroup, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() != group.modulus {
            return Err(Error::LengthMismatch {
                len: coefficients.len(),
                modulus: group.modulus,
            });
        }
        Ok(Self { group, coefficients })
    }

    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn get(&self, gamma: usize) -> Complex64 {
        self.coefficients[gamma % self.group.modulus]
    }

    /// `Σ_γ |f̂(γ)|`.
    pub fn l1_norm(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm()).sum()
    }

    pub fn pointwise_mul(&self, other: &Self) -> Result<Self> {
        self.group.check_same(&other.group)?;
        Ok(Self {
            group: self.group,
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// `Σ_γ F(γ) conj(G(γ))`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.group.check_same(&other.group)?;
        Ok(self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a * b.conj())
            .sum())
    }
}

fn unit_roots(n: usize, sign: f64) -> Vec<Complex64> {
    (0..n)
        .map(|j| {
            let a = 2.0 * PI * j as f64 / n as f64;
            Complex64::new(a.cos(), sign * a.sin())
        })
        .collect()
}

/// Reference O(N²) transform.
pub fn dft_direct(f: &GroupFunction) -> Spectrum {
    let n = f.modulus();
    let roots = unit_roots(n, -1.0);
    let scale = 1.0 / n as f64;
    let coefficients = (0..n)
        .map(|gamma| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut idx = 0usize;
            for v in &f.values {
                acc += v * roots[idx];
                idx += gamma;
                if idx >= n {
                    idx -= n;
                }
            }
            acc * scale
        })
        .collect();
    Spectrum {
        group: f.group,
        coefficients,
    }
}

/// Unnormalized length-N DFT with kernel `e^{sign·2πi jk/N}` by Bluestein's
/// chirp-z reduction to a power-of-two cyclic convolution.
fn chirp_dft(input: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = input.len();
    if n == 1 {
        return input.to_vec();
    }
    // e^{sign·πi j²/N}; j² is reduced mod 2N before the trig call
    let two_n = 2 * n as u128;
    let chirp: Vec<Complex64> = (0..n)
        .map(|j| {
            let r = ((j as u128 * j as u128) % two_n) as f64;
            let a = PI * r / n as f64;
            Complex64::new(a.cos(), sign * a.sin())
        })
        .collect();
    let len = (2 * n - 1).next_power_of_two();
    let mut a = vec![Complex64::new(0.0, 0.0); len];
    for j in 0..n {
        a[j] = input[j] * chirp[j];
    }
    let mut b = vec![Complex64::new(0.0, 0.0); len];
    b[0] = chirp[0].conj();
    for j in 1..n {
        b[j] = chirp[j].conj();
        b[len - j] = chirp[j].conj();
    }
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    inv.process(&mut a);
    let s = 1.0 / len as f64;
    (0..n).map(|k| a[k] * s * chirp[k]).collect()
}

/// O(N log N) transform valid for every N, including primes.
pub fn dft_chirp(f: &GroupFunction) -> Spectrum {
    let n = f.modulus() as f64;
    let coefficients = chirp_dft(&f.values, -1.0).into_iter().map(|c| c / n).collect();
    Spectrum {
        group: f.group,
        coefficients,
    }
}

/// Fourier transform; direct evaluation for small N, chirp path above
/// [`DIRECT_DFT_MAX`].
pub fn dft(f: &GroupFunction) -> Spectrum {
    if f.modulus() <= DIRECT_DFT_MAX {
        dft_direct(f)
    } else {
        dft_chirp(f)
    }
}

pub fn idft_direct(spec: &Spectrum) -> GroupFunction {
    let n = spec.group.modulus;
    let roots = unit_roots(n, 1.0);
    let values = (0..n)
        .map(|x| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut idx = 0usize;
            for c in &spec.coefficients {
                acc += c * roots[idx];
                idx += x;
                if idx >= n {
                    idx -= n;
                }
            }
            acc
        })
        .collect();
    GroupFunction {
        group: spec.group,
        values,
    }
}

pub fn idft(spec: &Spectrum) -> GroupFunction {
    if spec.group.modulus <= DIRECT_DFT_MAX {
        idft_direct(spec)
    } else {
        GroupFunction {
            group: spec.group,
            values: chirp_dft(&spec.coefficients, 1.0),
        }
    }
}

/// `(f*g)(x) = (1/N) Σ_y f(y) g(x-y)`, evaluated directly.
pub fn convolve(f: &GroupFunction, g: &GroupFunction) -> Result<GroupFunction> {
    f.group.check_same(&g.group)?;
    let n = f.modulus();
    let scale = 1.0 / n as f64;
    let values = (0..n)
        .map(|x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (y, fy) in f.values.iter().enumerate() {
                if *fy != Complex64::new(0.0, 0.0) {
                    acc += fy * g.values[(x + n - y) % n];
                }
            }
            acc * scale
        })
        .collect();
    Ok(GroupFunction { group: f.group, values })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AngleUnit {
    Radians,
    /// Fraction of a full turn.
    Turns,
}

/// Circle distance normalized to a full turn; always in `[0, 1/2]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub struct PhaseDistance(f64);

impl PhaseDistance {
    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn phase_distance(u: f64, unit: AngleUnit) -> Result<PhaseDistance> {
    if !u.is_finite() {
        return Err(Error::NonFinite(u));
    }
    let t = match unit {
        AngleUnit::Radians => u / (2.0 * PI),
        AngleUnit::Turns => u,
    };
    let d = (t - t.round()).abs();
    Ok(PhaseDistance(d.min(0.5)))
}

/// Exact circle distance of the turn fraction `numerator/denominator`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactPhaseDistance(Rational);

impl ExactPhaseDistance {
    pub fn value(self) -> Rational {
        self.0
    }

    pub fn to_phase_distance(self) -> PhaseDistance {
        PhaseDistance(crate::rational::to_f64(&self.0))
    }
}

pub fn phase_distance_exact(numerator: i128, denominator: u64) -> Result<ExactPhaseDistance> {
    if denominator == 0 {
        return Err(Error::Precondition("denominator must be positive".into()));
    }
    let den = denominator as i128;
    let r = numerator.rem_euclid(den);
    Ok(ExactPhaseDistance(Rational::new(r.min(den - r), den)))
}

/// `min(r, D-r)` for `r = x mod D`: the integer numerator of the circle
/// distance of `x/D`.
pub(crate) fn circle_numerator(x: i128, den: i128) -> i128 {
    let r = x.rem_euclid(den);
    r.min(den - r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn random_fn(g: CyclicGroup, rng: &mut ChaCha8Rng) -> GroupFunction {
        GroupFunction::from_fn(g, |_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    #[test]
    fn primality_flag() {
        let primes: Vec<u64> = (0..50).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]);
        assert!(CyclicGroup::new(10007).unwrap().is_prime());
        assert!(!CyclicGroup::new(4096).unwrap().is_prime());
        assert!(CyclicGroup::new(0).is_err());
    }

    #[test]
    fn dft_of_constant_and_point_mass() {
        let g5 = CyclicGroup::new(5).unwrap();
        let s = dft(&GroupFunction::constant(g5, c(1.0)));
        assert_abs_diff_eq!(s.get(0).re, 1.0, epsilon = 1e-12);
        for gamma in 1..5 {
            assert!(s.get(gamma).norm() < 1e-12);
        }

        let g4 = CyclicGroup::new(4).unwrap();
        let s = dft(&GroupFunction::indicator(g4, &[0]));
        for gamma in 0..4 {
            assert!((s.get(gamma) - c(0.25)).norm() < 1e-12);
        }

        let s = dft(&GroupFunction::indicator(g5, &[1, 2]));
        assert!((s.get(0) - c(0.4)).norm() < 1e-12);
    }

    #[test]
    fn idft_examples() {
        let g7 = CyclicGroup::new(7).unwrap();
        let mut coeffs = vec![c(0.0); 7];
        coeffs[0] = c(1.0);
        let f = idft(&Spectrum::new(g7, coeffs).unwrap());
        for v in f.values() {
            assert!((v - c(1.0)).norm() < 1e-12);
        }

        let g4 = CyclicGroup::new(4).unwrap();
        let mut coeffs = vec![c(0.0); 4];
        coeffs[1] = c(1.0);
        let f = idft(&Spectrum::new(g4, coeffs).unwrap());
        let expected = [c(1.0), Complex64::new(0.0, 1.0), c(-1.0), Complex64::new(0.0, -1.0)];
        for (v, e) in f.values().iter().zip(expected) {
            assert!((v - e).norm() < 1e-12);
        }

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = CyclicGroup::new(101).unwrap();
        let f = random_fn(g, &mut rng);
        let back = idft(&dft(&f));
        for (a, b) in f.values().iter().zip(back.values()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn chirp_agrees_with_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1, 2, 3, 16, 17, 97, 101, 128, 257] {
            let g = CyclicGroup::new(n).unwrap();
            let f = random_fn(g, &mut rng);
            let a = dft_direct(&f);
            let b = dft_chirp(&f);
            for (x, y) in a.coefficients().iter().zip(b.coefficients()) {
                assert!((x - y).norm() < 1e-9, "n={n}");
            }
        }
    }

    #[test]
    fn convolution_examples() {
        let g = CyclicGroup::new(9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = random_fn(g, &mut rng);
        let mut delta = GroupFunction::zero(g);
        delta.values[0] = c(9.0);
        let h = convolve(&f, &delta).unwrap();
        for (a, b) in f.values().iter().zip(h.values()) {
            assert!((a - b).norm() < 1e-12);
        }

        let h = convolve(&GroupFunction::constant(g, c(2.0)), &GroupFunction::constant(g, c(3.0))).unwrap();
        for v in h.values() {
            assert!((v - c(6.0)).norm() < 1e-12);
        }

        let g64 = CyclicGroup::new(64).unwrap();
        let f = random_fn(g64, &mut rng);
        let h = random_fn(g64, &mut rng);
        let lhs = dft_direct(&convolve(&f, &h).unwrap());
        let rhs = dft_direct(&f).pointwise_mul(&dft_direct(&h)).unwrap();
        for (a, b) in lhs.coefficients().iter().zip(rhs.coefficients()) {
            assert!((a - b).norm() < 1e-10);
        }

        assert!(convolve(&f, &GroupFunction::zero(g)).is_err());
    }

    #[test]
    fn phase_distance_examples() {
        assert_abs_diff_eq!(phase_distance(PI, AngleUnit::Radians).unwrap().value(), 0.5);
        assert_abs_diff_eq!(phase_distance(2.0 * PI, AngleUnit::Radians).unwrap().value(), 0.0);
        assert_abs_diff_eq!(
            phase_distance(PI / 3.0, AngleUnit::Radians).unwrap().value(),
            1.0 / 6.0,
            epsilon = 1e-15
        );
        assert!(phase_distance(f64::NAN, AngleUnit::Radians).is_err());
        assert!(phase_distance(f64::INFINITY, AngleUnit::Turns).is_err());

        assert_eq!(phase_distance_exact(3, 8).unwrap().value(), Rational::new(3, 8));
        assert_eq!(phase_distance_exact(6, 8).unwrap().value(), Rational::new(2, 8));
        assert_eq!(phase_distance_exact(16, 8).unwrap().value(), Rational::new(0, 1));
        assert_eq!(phase_distance_exact(-3, 8).unwrap().value(), Rational::new(3, 8));
        assert!(phase_distance_exact(1, 0).is_err());
    }

    #[test]
    fn signed_representatives() {
        let g = CyclicGroup::new(7).unwrap();
        let v: Vec<i64> = (0..7).map(|x| g.signed(x)).collect();
        assert_eq!(v, [0, 1, 2, 3, -3, -2, -1]);
    }
}
