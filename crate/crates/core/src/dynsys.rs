//! Ergodic algebraic automorphisms of the torus and trigonometric observables.
//!
//! Points are stored as 128-bit binary fractions per coordinate, i.e. as
//! elements of the finite subgroup `(2^-128 Z / Z)^d`. An integer matrix acts
//! on that subgroup exactly through wrapping `u128` arithmetic, so
//! `x -> M x mod 1` has no round-off at all: orbits of any length are exact,
//! and `step(step(x, a), b) == step(x, a + b)` holds bit for bit. Coordinates
//! are exposed as `f64` only when an observable is evaluated.

use crate::error::{Error, Result};
use crate::real::Real;
use num_complex::Complex64;
use rand::RngCore;
use std::collections::BTreeMap;

/// Largest orbit length (and scenery half-width) the crate will materialize.
pub const ORBIT_CAP: usize = 1 << 20;

/// Largest supported torus dimension.
pub const MAX_DIM: usize = 8;

const FRAC_TO_F64: f64 = 1.0 / 18_446_744_073_709_551_616.0; // 2^-64

// ---------------------------------------------------------------------------
// exact integer polynomials (ascending coefficients)

type Poly = Vec<i128>;

fn poly_trim(mut p: Poly) -> Poly {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
    p
}

/// Remainder of `num` modulo the monic polynomial `den`.
fn poly_rem_monic(num: &[i128], den: &[i128]) -> Result<Poly> {
    debug_assert_eq!(*den.last().unwrap(), 1);
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd && r.len() > 1 {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for (i, &c) in den.iter().enumerate() {
                let t = lead.checked_mul(c).ok_or(Error::Overflow)?;
                r[shift + i] = r[shift + i].checked_sub(t).ok_or(Error::Overflow)?;
            }
        }
        r.pop();
    }
    Ok(poly_trim(r))
}

fn poly_div_monic(num: &[i128], den: &[i128]) -> Poly {
    let dd = den.len() - 1;
    let mut r = num.to_vec();
    let mut q = vec![0i128; num.len() - dd];
    for shift in (0..q.len()).rev() {
        let lead = r[shift + dd];
        q[shift] = lead;
        for (i, &c) in den.iter().enumerate() {
            r[shift + i] -= lead * c;
        }
    }
    q
}

fn euler_phi(mut m: u32) -> u32 {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// The `m`-th cyclotomic polynomial.
pub fn cyclotomic(m: u32) -> Vec<i128> {
    let mut p: Poly = vec![0; m as usize + 1];
    p[0] = -1;
    p[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            p = poly_div_monic(&p, &cyclotomic(d));
        }
    }
    p
}

/// Orders `m` whose cyclotomic polynomial has degree at most `dim`.
/// Uses `phi(m) >= sqrt(m / 2)`, so `m <= 2 dim^2` suffices.
fn cyclotomic_orders(dim: usize) -> impl Iterator<Item = u32> {
    let bound = 2 * (dim * dim) as u32;
    (1..=bound).filter(move |&m| euler_phi(m) as usize <= dim)
}

// ---------------------------------------------------------------------------
// exact integer matrices

fn mat_mul_checked(a: &[i128], b: &[i128], n: usize) -> Result<Vec<i128>> {
    let mut out = vec![0i128; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s: i128 = 0;
            for k in 0..n {
                let t = a[i * n + k].checked_mul(b[k * n + j]).ok_or(Error::Overflow)?;
                s = s.checked_add(t).ok_or(Error::Overflow)?;
            }
            out[i * n + j] = s;
        }
    }
    Ok(out)
}

/// Characteristic polynomial `det(x I - A)` and the Faddeev-LeVerrier
/// auxiliary matrix `M_n`, from which `A^-1 = -M_n / c_0`.
fn faddeev_leverrier(a: &[i128], n: usize) -> Result<(Poly, Vec<i128>)> {
    let mut c = vec![0i128; n + 1];
    c[n] = 1;
    let mut mk = vec![0i128; n * n];
    for k in 1..=n {
        let mut next = mat_mul_checked(a, &mk, n)?;
        for i in 0..n {
            next[i * n + i] = next[i * n + i].checked_add(c[n - k + 1]).ok_or(Error::Overflow)?;
        }
        let am = mat_mul_checked(a, &next, n)?;
        let tr: i128 = (0..n).map(|i| am[i * n + i]).try_fold(0i128, |s, v| s.checked_add(v)).ok_or(Error::Overflow)?;
        debug_assert_eq!(tr % k as i128, 0);
        c[n - k] = -tr / k as i128;
        mk = next;
    }
    Ok((c, mk))
}

fn to_wrapping(v: i64) -> u128 {
    v as i128 as u128
}

/// Square matrix with entries reduced mod 2^128; acts exactly on [`TorusPoint`]s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMatrix {
    dim: usize,
    entries: Vec<u128>,
}

impl ModMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0u128; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        ModMatrix { dim, entries }
    }

    fn from_i64(dim: usize, m: &[i64]) -> Self {
        ModMatrix { dim, entries: m.iter().map(|&v| to_wrapping(v)).collect() }
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        let n = self.dim;
        let mut entries = vec![0u128; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0u128;
                for k in 0..n {
                    s = s.wrapping_add(self.entries[i * n + k].wrapping_mul(other.entries[k * n + j]));
                }
                entries[i * n + j] = s;
            }
        }
        ModMatrix { dim: n, entries }
    }

    pub fn pow(&self, mut e: u64) -> ModMatrix {
        let mut base = self.clone();
        let mut acc = ModMatrix::identity(self.dim);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `out = self * x mod 1`.
    #[inline]
    pub fn apply_into(&self, x: &[u128], out: &mut [u128]) {
        let n = self.dim;
        for (i, o) in out.iter_mut().enumerate().take(n) {
            let row = &self.entries[i * n..(i + 1) * n];
            let mut s = 0u128;
            for (a, b) in row.iter().zip(x) {
                s = s.wrapping_add(a.wrapping_mul(*b));
            }
            *o = s;
        }
    }

    pub fn apply(&self, x: &TorusPoint) -> TorusPoint {
        let mut out = vec![0u128; self.dim];
        self.apply_into(&x.fracs, &mut out);
        TorusPoint { fracs: out }
    }
}

/// Ergodic algebraic automorphism `x -> M x mod 1` of the `d`-torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusMap {
    dim: usize,
    matrix: Vec<i64>,
    inverse: Vec<i64>,
    charpoly: Vec<i128>,
    forward: ModMatrix,
    backward: ModMatrix,
}

impl TorusMap {
    /// Validates `rows` as a unimodular integer matrix without roots of
    /// unity in its spectrum.
    pub fn new(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NonSquare { rows: n, row: i, cols: r.len() });
            }
        }
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        if n > MAX_DIM {
            return Err(Error::InvalidModel(format!("torus dimension {n} exceeds {MAX_DIM}")));
        }
        let a: Vec<i128> = rows.iter().flatten().map(|&v| v as i128).collect();
        let (charpoly, mn) = faddeev_leverrier(&a, n)?;
        let det = if n.is_multiple_of(2) { charpoly[0] } else { -charpoly[0] };
        if det != 1 {
            return Err(Error::NotUnimodular(det));
        }
        for m in cyclotomic_orders(n) {
            let phi = cyclotomic(m);
            if poly_rem_monic(&charpoly, &phi)? == vec![0] {
                return Err(Error::RootOfUnitySpectrum(m));
            }
        }
        // A^-1 = -M_n / c_0 and c_0 = (-1)^n det = (-1)^n
        let sign: i128 = if n.is_multiple_of(2) { -1 } else { 1 };
        let inv128: Vec<i128> = mn.iter().map(|&v| sign * v).collect();
        let check = mat_mul_checked(&a, &inv128, n)?;
        for i in 0..n {
            for j in 0..n {
                assert_eq!(check[i * n + j], (i == j) as i128, "exact inverse");
            }
        }
        let inverse = inv128.iter().map(|&v| i64::try_from(v).map_err(|_| Error::Overflow)).collect::<Result<Vec<_>>>()?;
        let matrix: Vec<i64> = rows.iter().flatten().copied().collect();
        Ok(TorusMap { dim: n, forward: ModMatrix::from_i64(n, &matrix), backward: ModMatrix::from_i64(n, &inverse), matrix, inverse, charpoly })
    }

    /// Parses a row-major list of `dim * dim` entries.
    pub fn from_row_major(entries: &[i64]) -> Result<Self> {
        let n = (entries.len() as f64).sqrt().round() as usize;
        if n * n != entries.len() {
            return Err(Error::NonSquare { rows: n, row: 0, cols: entries.len() });
        }
        let rows: Vec<Vec<i64>> = entries.chunks(n.max(1)).map(|c| c.to_vec()).collect();
        Self::new(&rows)
    }

    /// Arnold's cat map `[[2, 1], [1, 1]]`.
    pub fn cat() -> Self {
        Self::new(&[vec![2, 1], vec![1, 1]]).expect("cat map is ergodic")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &[i64] {
        &self.matrix
    }

    pub fn inverse(&self) -> &[i64] {
        &self.inverse
    }

    /// Characteristic polynomial coefficients, constant term first.
    pub fn charpoly(&self) -> &[i128] {
        &self.charpoly
    }

    pub fn forward(&self) -> &ModMatrix {
        &self.forward
    }

    pub fn backward(&self) -> &ModMatrix {
        &self.backward
    }

    /// `M^k` (or `(M^-1)^|k|`) reduced mod 2^128.
    pub fn power(&self, k: i64) -> ModMatrix {
        if k >= 0 {
            self.forward.pow(k as u64)
        } else {
            self.backward.pow(k.unsigned_abs())
        }
    }

    /// Integer `(M^n)^T b`, or `None` when an entry leaves `i64`.
    pub fn transpose_power_apply(&self, n: u32, b: &[i64]) -> Option<Vec<i64>> {
        let d = self.dim;
        let mut v: Vec<i128> = b.iter().map(|&x| x as i128).collect();
        for _ in 0..n {
            let mut w = vec![0i128; d];
            for (j, wj) in w.iter_mut().enumerate() {
                for (i, vi) in v.iter().enumerate() {
                    *wj = wj.checked_add((self.matrix[i * d + j] as i128).checked_mul(*vi)?)?;
                }
            }
            v = w;
        }
        v.into_iter().map(|x| i64::try_from(x).ok()).collect()
    }

    /// `T^k(x)`, exactly.
    pub fn step(&self, x: &TorusPoint, k: i64) -> TorusPoint {
        let (mat, count) = if k >= 0 { (&self.forward, k as u64) } else { (&self.backward, k.unsigned_abs()) };
        let mut cur = x.fracs.clone();
        let mut next = vec![0u128; self.dim];
        for _ in 0..count {
            mat.apply_into(&cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        TorusPoint { fracs: cur }
    }
}

/// Point of the torus with 128-bit binary coordinates in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    fracs: Vec<u128>,
}

fn f64_to_frac(v: f64) -> u128 {
    // floor-based reduction; 1.0 produced by round-off maps to 0.0
    let mut r = v - v.floor();
    if r >= 1.0 {
        r = 0.0;
    }
    // r * 2^128 is exact scaling; anything below 2^-128 truncates to zero
    (r * 2f64.powi(128)) as u128
}

impl TorusPoint {
    /// Reduces each coordinate mod 1.
    pub fn new(coords: &[f64]) -> Self {
        TorusPoint { fracs: coords.iter().map(|&c| f64_to_frac(c)).collect() }
    }

    pub fn from_fracs(fracs: Vec<u128>) -> Self {
        TorusPoint { fracs }
    }

    /// Haar-uniform point (128 random bits per coordinate).
    pub fn random<R: RngCore>(dim: usize, rng: &mut R) -> Self {
        let fracs = (0..dim).map(|_| ((rng.next_u64() as u128) << 64) | rng.next_u64() as u128).collect();
        TorusPoint { fracs }
    }

    pub fn dim(&self) -> usize {
        self.fracs.len()
    }

    pub fn fracs(&self) -> &[u128] {
        &self.fracs
    }

    /// Coordinate `i` rounded down to 53 bits, always in `[0, 1)`.
    pub fn coord(&self, i: usize) -> f64 {
        (self.fracs[i] >> 75) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.coord(i)).collect()
    }
}

/// Deterministic low-discrepancy point set (Kronecker sequence with the
/// generalized golden ratio).
pub fn kronecker_grid(dim: usize, count: usize) -> Vec<TorusPoint> {
    // phi_d is the positive root of x^(d+1) = x + 1
    let mut g = 2.0f64;
    for _ in 0..64 {
        g = (1.0 + g).powf(1.0 / (dim as f64 + 1.0));
    }
    let alpha: Vec<f64> = (1..=dim).map(|j| 1.0 / g.powi(j as i32)).collect();
    (0..count)
        .map(|i| {
            let c: Vec<f64> = alpha.iter().map(|a| 0.5 + a * i as f64).collect();
            TorusPoint::new(&c)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// observables

/// Shape of an observable.
#[derive(Debug, Clone, PartialEq)]
pub enum ObservableKind {
    /// `cos(2 pi k.x + phase)`
    Mode { freq: Vec<i64>, phase: f64 },
    /// `sum_j c_j cos(2 pi k_j.x)`; a zero frequency is a constant term.
    Polynomial { terms: Vec<(Vec<i64>, f64)> },
    /// `offset + sum_j w_j g_j(x)`
    Affine { offset: f64, terms: Vec<(f64, Observable)> },
}

/// Bounded trigonometric observable on the torus, with its Haar mean.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    kind: ObservableKind,
    declared_mean: f64,
    dim: usize,
}

fn is_zero(freq: &[i64]) -> bool {
    freq.iter().all(|&k| k == 0)
}

/// `k . x mod 1` as a 128-bit fraction.
#[inline]
fn phase_frac(freq: &[i64], x: &[u128]) -> u128 {
    let mut s = 0u128;
    for (k, v) in freq.iter().zip(x) {
        s = s.wrapping_add(to_wrapping(*k).wrapping_mul(*v));
    }
    s
}

#[inline]
fn cos_turns<T: Real>(frac: u128, phase: f64) -> T {
    let turns = (frac >> 64) as f64 * FRAC_TO_F64;
    let angle = T::lit(std::f64::consts::TAU * turns + phase);
    angle.cos()
}

impl Observable {
    pub fn mode(freq: Vec<i64>, phase: f64) -> Result<Self> {
        if freq.is_empty() {
            return Err(Error::InvalidModel("empty frequency vector".into()));
        }
        if !phase.is_finite() {
            return Err(Error::InvalidModel("phase must be finite".into()));
        }
        let declared_mean = if is_zero(&freq) { phase.cos() } else { 0.0 };
        let dim = freq.len();
        Ok(Observable { kind: ObservableKind::Mode { freq, phase }, declared_mean, dim })
    }

    pub fn polynomial(terms: Vec<(Vec<i64>, f64)>) -> Result<Self> {
        let dim = terms.first().map(|t| t.0.len()).ok_or_else(|| Error::InvalidModel("empty polynomial".into()))?;
        if dim == 0 || terms.iter().any(|t| t.0.len() != dim) {
            return Err(Error::InvalidModel("inconsistent frequency dimensions".into()));
        }
        if terms.iter().any(|t| !t.1.is_finite()) {
            return Err(Error::InvalidModel("coefficients must be finite".into()));
        }
        let declared_mean = terms.iter().filter(|t| is_zero(&t.0)).map(|t| t.1).sum();
        Ok(Observable { kind: ObservableKind::Polynomial { terms }, declared_mean, dim })
    }

    pub fn affine(offset: f64, terms: Vec<(f64, Observable)>) -> Result<Self> {
        let dim = terms.first().map(|t| t.1.dim).ok_or_else(|| Error::InvalidModel("empty affine combination".into()))?;
        if terms.iter().any(|t| t.1.dim != dim) {
            return Err(Error::InvalidModel("inconsistent observable dimensions".into()));
        }
        if !offset.is_finite() || terms.iter().any(|t| !t.0.is_finite()) {
            return Err(Error::InvalidModel("coefficients must be finite".into()));
        }
        let declared_mean = offset + terms.iter().map(|(w, g)| w * g.declared_mean).sum::<f64>();
        Ok(Observable { kind: ObservableKind::Affine { offset, terms }, declared_mean, dim })
    }

    /// `cos(2 pi x_1)` on the `dim`-torus.
    pub fn cos_first(dim: usize) -> Self {
        let mut freq = vec![0; dim];
        freq[0] = 1;
        Self::mode(freq, 0.0).expect("valid mode")
    }

    pub fn kind(&self) -> &ObservableKind {
        &self.kind
    }

    pub fn declared_mean(&self) -> f64 {
        self.declared_mean
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Upper bound on `|f(x)|`: the sum of absolute coefficients.
    pub fn sup_bound(&self) -> f64 {
        match &self.kind {
            ObservableKind::Mode { .. } => 1.0,
            ObservableKind::Polynomial { terms } => terms.iter().map(|t| t.1.abs()).sum(),
            ObservableKind::Affine { offset, terms } => offset.abs() + terms.iter().map(|(w, g)| w.abs() * g.sup_bound()).sum::<f64>(),
        }
    }

    pub fn eval<T: Real>(&self, x: &TorusPoint) -> T {
        self.eval_fracs(x.fracs())
    }

    /// Evaluates on raw 128-bit coordinates.
    pub fn eval_fracs<T: Real>(&self, x: &[u128]) -> T {
        match &self.kind {
            ObservableKind::Mode { freq, phase } => cos_turns(phase_frac(freq, x), *phase),
            ObservableKind::Polynomial { terms } => {
                let mut s = T::zero();
                for (freq, c) in terms {
                    s = s + T::lit(*c) * cos_turns::<T>(phase_frac(freq, x), 0.0);
                }
                s
            }
            ObservableKind::Affine { offset, terms } => {
                let mut s = T::lit(*offset);
                for (w, g) in terms {
                    s = s + T::lit(*w) * g.eval_fracs::<T>(x);
                }
                s
            }
        }
    }

    /// Complex Fourier coefficients `f(x) = sum_a c_a e^{2 pi i a.x}`.
    pub fn fourier_terms(&self) -> BTreeMap<Vec<i64>, Complex64> {
        let mut out = BTreeMap::new();
        self.accumulate_fourier(1.0, &mut out);
        out.retain(|_, c| c.norm() > 0.0);
        out
    }

    fn accumulate_fourier(&self, weight: f64, out: &mut BTreeMap<Vec<i64>, Complex64>) {
        let mut push = |freq: &[i64], c: f64, phase: f64| {
            if is_zero(freq) {
                *out.entry(freq.to_vec()).or_insert(Complex64::new(0.0, 0.0)) += weight * c * phase.cos();
                return;
            }
            let half = Complex64::from_polar(0.5 * weight * c, phase);
            *out.entry(freq.to_vec()).or_insert(Complex64::new(0.0, 0.0)) += half;
            let neg: Vec<i64> = freq.iter().map(|k| -k).collect();
            *out.entry(neg).or_insert(Complex64::new(0.0, 0.0)) += half.conj();
        };
        match &self.kind {
            ObservableKind::Mode { freq, phase } => push(freq, 1.0, *phase),
            ObservableKind::Polynomial { terms } => {
                for (freq, c) in terms {
                    push(freq, *c, 0.0);
                }
            }
            ObservableKind::Affine { offset, terms } => {
                push(&vec![0; self.dim], *offset, 0.0);
                for (w, g) in terms {
                    g.accumulate_fourier(weight * w, out);
                }
            }
        }
    }
}

/// Exact `Cov_nu(g, h o T^n)` for trigonometric observables: only frequency
/// pairs with `a + (M^n)^T b = 0` contribute.
pub fn fourier_covariance(map: &TorusMap, g: &Observable, h: &Observable, n: u32) -> f64 {
    let gt = g.fourier_terms();
    let mut total = Complex64::new(0.0, 0.0);
    for (b, hb) in h.fourier_terms() {
        if is_zero(&b) {
            continue;
        }
        let Some(image) = map.transpose_power_apply(n, &b) else { continue };
        let neg: Vec<i64> = image.iter().map(|v| -v).collect();
        if let Some(ga) = gt.get(&neg) {
            total += ga * hb;
        }
    }
    total.re
}

/// Lags `n <= n_max` at which `Cov_nu(g, h o T^n)` is nonzero.
pub fn collision_lags(map: &TorusMap, g: &Observable, h: &Observable, n_max: u32) -> Vec<u32> {
    (0..=n_max).filter(|&n| fourier_covariance(map, g, h, n).abs() > 1e-12).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::Seed;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(2), vec![1, 1]);
        assert_eq!(cyclotomic(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic(12), vec![1, 0, -1, 0, 1]);
        // degree-2 cyclotomics are exactly orders 3, 4, 6
        let two: Vec<u32> = cyclotomic_orders(2).collect();
        assert_eq!(two, vec![1, 2, 3, 4, 6]);
    }

    #[test]
    fn cat_map_is_valid() {
        let m = TorusMap::cat();
        assert_eq!(m.charpoly(), &[1, -3, 1]);
        assert_eq!(m.inverse(), &[1, -1, -1, 2]);
    }

    #[test]
    fn rejects_identity_rotation_and_non_unimodular() {
        assert_eq!(TorusMap::new(&[vec![1, 0], vec![0, 1]]), Err(Error::RootOfUnitySpectrum(1)));
        assert_eq!(TorusMap::new(&[vec![0, -1], vec![1, 0]]), Err(Error::RootOfUnitySpectrum(4)));
        // trace 1: x^2 - x + 1 = Phi_6
        assert_eq!(TorusMap::new(&[vec![1, -1], vec![1, 0]]), Err(Error::RootOfUnitySpectrum(6)));
        assert_eq!(TorusMap::new(&[vec![2, 0], vec![0, 1]]), Err(Error::NotUnimodular(2)));
        assert_eq!(TorusMap::new(&[vec![0, 1], vec![1, 0]]), Err(Error::NotUnimodular(-1)));
        assert!(matches!(TorusMap::new(&[vec![1, 2], vec![3]]), Err(Error::NonSquare { .. })));
        assert_eq!(TorusMap::new(&[vec![1]]), Err(Error::DimensionTooSmall(1)));
        // shear is unipotent
        assert_eq!(TorusMap::new(&[vec![1, 1], vec![0, 1]]), Err(Error::RootOfUnitySpectrum(1)));
    }

    #[test]
    fn three_dimensional_map() {
        // companion matrix of x^3 - x - 1 (irreducible, not cyclotomic)
        let m = TorusMap::new(&[vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 0]]).unwrap();
        assert_eq!(m.charpoly(), &[-1, -1, 0, 1]);
        // x^3 - 1 has Phi_1 and Phi_3 factors
        let r = TorusMap::new(&[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
        assert!(matches!(r, Err(Error::RootOfUnitySpectrum(_))));
    }

    #[test]
    fn cat_step_known_value() {
        let m = TorusMap::cat();
        let x = TorusPoint::new(&[0.5, 0.5]);
        assert_eq!(m.step(&x, 0), x);
        assert_eq!(m.step(&x, 1).coords(), vec![0.5, 0.0]);
    }

    #[test]
    fn reduction_maps_one_to_zero() {
        assert_eq!(TorusPoint::new(&[1.0, -1e-30]).coords(), vec![0.0, 0.0]);
        assert_eq!(TorusPoint::new(&[2.25, -0.75]).coords(), vec![0.25, 0.25]);
    }

    #[test]
    fn inverse_steps_and_orbit_consistency() {
        let m = TorusMap::cat();
        let mut rng = Seed(11).rng();
        for _ in 0..1000 {
            let x = TorusPoint::random(2, &mut rng);
            assert_eq!(m.step(&m.step(&x, 1), -1), x);
            for c in 0..2 {
                assert!((m.step(&m.step(&x, 1), -1).coord(c) - x.coord(c)).abs() <= 1e-12);
            }
        }
        let x = TorusPoint::random(2, &mut rng);
        for k in -30i64..=30 {
            let iter = m.step(&x, k);
            let pow = m.power(k).apply(&x);
            for c in 0..2 {
                assert!((iter.coord(c) - pow.coord(c)).abs() <= 1e-9);
            }
            assert_eq!(iter, pow);
            assert_eq!(m.step(&m.step(&x, k), 7 - k), m.step(&x, 7));
        }
    }

    #[test]
    fn eval_basics() {
        let f = Observable::mode(vec![1, 0], 0.0).unwrap();
        assert_eq!(f.eval::<f64>(&TorusPoint::new(&[0.0, 0.0])), 1.0);
        assert_eq!(f.declared_mean(), 0.0);
        let x = TorusPoint::new(&[0.25, 0.7]);
        assert!((f.eval::<f64>(&x)).abs() < 1e-15);
        assert!((f.eval::<f32>(&x)).abs() < 1e-6);
        let c = Observable::polynomial(vec![(vec![1, 1], -2.5)]).unwrap();
        let mut rng = Seed(3).rng();
        for _ in 0..10_000 {
            let x = TorusPoint::random(2, &mut rng);
            assert!(c.eval::<f64>(&x).abs() <= 2.5);
        }
    }

    #[test]
    fn mean_zero_observables_have_zero_empirical_mean() {
        let obs =
            [Observable::cos_first(2), Observable::mode(vec![1, 1], 0.4).unwrap(), Observable::polynomial(vec![(vec![1, 0], 1.0), (vec![1, 1], 1.0)]).unwrap()];
        let mut rng = Seed(5).rng();
        let pts: Vec<TorusPoint> = (0..1_000_000).map(|_| TorusPoint::random(2, &mut rng)).collect();
        for o in &obs {
            let vals: Vec<f64> = pts.iter().map(|p| o.eval(p)).collect();
            let (mean, se) = crate::real::mean_and_se(&vals);
            assert!((mean - o.declared_mean()).abs() < 4.0 * se, "{mean} {se}");
        }
    }

    #[test]
    fn haar_invariance() {
        let m = TorusMap::cat();
        let obs = [
            Observable::cos_first(2),
            Observable::affine(0.5, vec![(0.5, Observable::cos_first(2))]).unwrap(),
            Observable::polynomial(vec![(vec![1, 0], 1.0), (vec![2, 1], 0.5), (vec![0, 0], 0.1)]).unwrap(),
        ];
        let mut rng = Seed(6).rng();
        let pts: Vec<TorusPoint> = (0..100_000).map(|_| TorusPoint::random(2, &mut rng)).collect();
        for o in &obs {
            let a: Vec<f64> = pts.iter().map(|p| o.eval(p)).collect();
            let b: Vec<f64> = pts.iter().map(|p| o.eval(&m.step(p, 1))).collect();
            let (ma, sa) = crate::real::mean_and_se(&a);
            let (mb, sb) = crate::real::mean_and_se(&b);
            assert!((ma - mb).abs() < 4.0 * (sa * sa + sb * sb).sqrt());
        }
    }

    #[test]
    fn fourier_terms_and_covariances() {
        let map = TorusMap::cat();
        let g = Observable::cos_first(2);
        assert!((fourier_covariance(&map, &g, &g, 0) - 0.5).abs() < 1e-15);
        for n in 1..40 {
            assert_eq!(fourier_covariance(&map, &g, &g, n), 0.0);
        }
        // (M^T)(1,0) = (2,1): modes (1,0) and (2,1) collide at lag 1
        let p = Observable::polynomial(vec![(vec![1, 0], 1.0), (vec![2, 1], 1.0)]).unwrap();
        assert_eq!(collision_lags(&map, &p, &p, 30), vec![0, 1]);
        let q = Observable::polynomial(vec![(vec![1, 0], 1.0), (vec![1, 1], 1.0)]).unwrap();
        assert_eq!(collision_lags(&map, &q, &q, 30), vec![0]);
        let a = Observable::affine(0.5, vec![(0.5, g.clone())]).unwrap();
        assert!((a.declared_mean() - 0.5).abs() < 1e-15);
        assert!((fourier_covariance(&map, &a, &a, 0) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn grid_is_in_unit_cube() {
        let g = kronecker_grid(3, 10_000);
        assert_eq!(g.len(), 10_000);
        assert!(g.iter().all(|p| p.coords().iter().all(|c| (0.0..1.0).contains(c))));
    }
}
