//! Minimal dense linear algebra, seeded sampling, and a gradient-check
//! utility.
//!
//! The whole crate works at desk scale, so the matrix type is a plain
//! row-major `Vec<f64>` with the handful of products the encoders and
//! groundings need. No BLAS, no sparsity beyond what callers build
//! themselves.
//!
//! Random sampling goes through [`Rng`], a thin wrapper around the ChaCha12
//! stream cipher generator. ChaCha is counter-based and specified
//! byte-for-byte, so the same seed yields bit-identical sample streams on
//! every platform; the platform-default generator is never used.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Deterministic random generator; one seed, one stream.
///
/// Independent substreams are obtained with [`Rng::child`], which mixes a
/// label into the seed. This is how the crate hands out generator state to
/// encoders, dataset generation, and training without the streams ever
/// interleaving.
#[derive(Debug, Clone)]
pub struct Rng {
    seed: u64,
    inner: ChaCha12Rng,
}

/// SplitMix64 finalizer; used to derive child seeds.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Rng {
    pub fn from_seed(seed: u64) -> Self {
        Rng {
            seed,
            inner: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    /// The seed this generator was created from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Derives an independent generator for the given stream label.
    ///
    /// Children depend only on (seed, label), not on how much of this
    /// stream has already been consumed.
    pub fn child(&self, label: u64) -> Rng {
        Rng::from_seed(splitmix64(
            self.seed ^ label.wrapping_mul(0x9e37_79b9_7f4a_7c15),
        ))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.random()
    }

    /// Uniform draw from `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        self.inner.random()
    }

    /// Uniform draw from `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer from `[0, n)`.
    pub fn below(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }

    /// Standard normal draw.
    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.inner)
    }

    /// A uniform random `k`-subset of `0..n`, sampled without replacement
    /// (partial Fisher-Yates). The returned indices are in draw order.
    pub fn subset(&mut self, n: usize, k: usize) -> Vec<usize> {
        debug_assert!(k <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below(n - i);
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

fn check_finite(data: &[f64], what: &str) -> Result<()> {
    if data.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid(format!("{what} contains non-finite entries")));
    }
    Ok(())
}

/// Dense vector of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    data: Vec<f64>,
}

impl Vector {
    /// Builds a vector, rejecting non-finite entries.
    pub fn new(data: Vec<f64>) -> Result<Self> {
        check_finite(&data, "vector")?;
        Ok(Vector { data })
    }

    pub fn zeros(dim: usize) -> Self {
        Vector {
            data: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, i: usize) -> f64 {
        self.data[i]
    }

    pub fn dot(&self, other: &Vector) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::invalid(format!(
                "dot: dimension mismatch {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b)
            .sum())
    }

    /// Concatenation of several vectors.
    pub fn concat(parts: &[&Vector]) -> Vector {
        let mut data = Vec::with_capacity(parts.iter().map(|p| p.dim()).sum());
        for p in parts {
            data.extend_from_slice(&p.data);
        }
        Vector { data }
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Vec<f64> {
        v.data
    }
}

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major data, rejecting shape mismatches and
    /// non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::invalid(format!(
                "matrix: {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        check_finite(&data, "matrix")?;
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `M v` for `v` of dimension `cols`.
    pub fn mul_vec(&self, v: &Vector) -> Result<Vector> {
        if v.dim() != self.cols {
            return Err(Error::invalid(format!(
                "mul_vec: matrix is {}x{}, vector has dim {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        let mut out = vec![0.0; self.rows];
        for (r, slot) in out.iter_mut().enumerate() {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            *slot = row.iter().zip(v.as_slice()).map(|(a, b)| a * b).sum();
        }
        Ok(Vector { data: out })
    }

    /// `Mᵀ v` for `v` of dimension `rows`.
    pub fn tr_mul_vec(&self, v: &Vector) -> Result<Vector> {
        if v.dim() != self.rows {
            return Err(Error::invalid(format!(
                "tr_mul_vec: matrix is {}x{}, vector has dim {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        let mut out = vec![0.0; self.cols];
        for r in 0..self.rows {
            let x = v.get(r);
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            for (slot, m) in out.iter_mut().zip(row) {
                *slot += m * x;
            }
        }
        Ok(Vector { data: out })
    }
}

/// Samples a `rows x cols` matrix of i.i.d. standard normal entries.
pub fn sample_gaussian(rng: &mut Rng, rows: usize, cols: usize) -> Result<Matrix> {
    if rows == 0 || cols == 0 {
        return Err(Error::invalid("sample_gaussian: dimensions must be >= 1"));
    }
    let data = (0..rows * cols).map(|_| rng.normal()).collect();
    Matrix::new(rows, cols, data)
}

/// Samples a vector of i.i.d. uniform entries on `[lo, hi)`.
pub fn sample_uniform(rng: &mut Rng, dim: usize, lo: f64, hi: f64) -> Result<Vector> {
    if dim == 0 {
        return Err(Error::invalid("sample_uniform: dimension must be >= 1"));
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::invalid(format!(
            "sample_uniform: need lo < hi, got [{lo}, {hi})"
        )));
    }
    let data = (0..dim).map(|_| rng.uniform(lo, hi)).collect();
    Vector::new(data)
}

/// Compares an analytic gradient against central differences.
///
/// Returns the maximum over coordinates of
/// `|analytic_i - central_i| / max(1, |analytic_i|)` with step `eps`.
pub fn grad_check<F>(mut f: F, theta: &[f64], analytic: &[f64], eps: f64) -> Result<f64>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    if eps <= 0.0 || !eps.is_finite() {
        return Err(Error::invalid("grad_check: eps must be positive"));
    }
    if theta.len() != analytic.len() {
        return Err(Error::invalid(format!(
            "grad_check: theta has {} coordinates, analytic gradient has {}",
            theta.len(),
            analytic.len()
        )));
    }
    check_finite(theta, "theta")?;
    let mut point = theta.to_vec();
    let mut worst = 0.0_f64;
    for i in 0..point.len() {
        let orig = point[i];
        point[i] = orig + eps;
        let hi = f(&point)?;
        point[i] = orig - eps;
        let lo = f(&point)?;
        point[i] = orig;
        if !hi.is_finite() || !lo.is_finite() {
            return Err(Error::Numeric(format!(
                "grad_check: non-finite function value near coordinate {i}"
            )));
        }
        let central = (hi - lo) / (2.0 * eps);
        let err = (analytic[i] - central).abs() / analytic[i].abs().max(1.0);
        worst = worst.max(err);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = Rng::from_seed(7);
        let mut b = Rng::from_seed(7);
        let ma = sample_gaussian(&mut a, 1, 1).unwrap();
        let mb = sample_gaussian(&mut b, 1, 1).unwrap();
        assert_eq!(ma.get(0, 0).to_bits(), mb.get(0, 0).to_bits());

        let mut a = Rng::from_seed(123);
        let mut b = Rng::from_seed(123);
        let ua = sample_uniform(&mut a, 1, 0.0, 1.0).unwrap();
        let ub = sample_uniform(&mut b, 1, 0.0, 1.0).unwrap();
        assert_eq!(ua.get(0).to_bits(), ub.get(0).to_bits());
    }

    #[test]
    fn child_streams_are_stable_and_distinct() {
        let root = Rng::from_seed(42);
        let mut c0 = root.child(0);
        let mut c0_again = root.child(0);
        let mut c1 = root.child(1);
        assert_eq!(c0.next_u64(), c0_again.next_u64());
        assert_ne!(c0.next_u64(), c1.next_u64());
    }

    #[test]
    fn gaussian_moments_match_law_of_large_numbers() {
        let mut rng = Rng::from_seed(11);
        let m = sample_gaussian(&mut rng, 1000, 1000).unwrap();
        let n = m.as_slice().len() as f64;
        let mean = m.as_slice().iter().sum::<f64>() / n;
        let var = m.as_slice().iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn uniform_mean_on_circle_interval() {
        let mut rng = Rng::from_seed(5);
        let v = sample_uniform(&mut rng, 100_000, 0.0, 2.0 * std::f64::consts::PI).unwrap();
        let mean = v.as_slice().iter().sum::<f64>() / v.dim() as f64;
        assert!((mean - std::f64::consts::PI).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn sampling_rejects_bad_arguments() {
        let mut rng = Rng::from_seed(0);
        assert!(matches!(
            sample_gaussian(&mut rng, 0, 3),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            sample_uniform(&mut rng, 4, 1.0, 1.0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            sample_uniform(&mut rng, 0, 0.0, 1.0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn constructors_reject_non_finite() {
        assert!(Vector::new(vec![1.0, f64::NAN]).is_err());
        assert!(Matrix::new(1, 2, vec![f64::INFINITY, 0.0]).is_err());
        assert!(Matrix::new(2, 2, vec![0.0; 3]).is_err());
    }

    #[test]
    fn matvec_products() {
        // M = [[1, 2], [3, 4], [5, 6]]
        let m = Matrix::new(3, 2, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let v = Vector::new(vec![1.0, -1.0]).unwrap();
        assert_eq!(m.mul_vec(&v).unwrap().as_slice(), &[-1.0, -1.0, -1.0]);
        let w = Vector::new(vec![1.0, 0.0, -1.0]).unwrap();
        assert_eq!(m.tr_mul_vec(&w).unwrap().as_slice(), &[-4.0, -4.0]);
        assert!(m.mul_vec(&w).is_err());
        assert!(m.tr_mul_vec(&v).is_err());
    }

    #[test]
    fn subset_is_without_replacement() {
        let mut rng = Rng::from_seed(9);
        for _ in 0..100 {
            let mut s = rng.subset(10, 7);
            s.sort_unstable();
            s.dedup();
            assert_eq!(s.len(), 7);
            assert!(s.iter().all(|&i| i < 10));
        }
        // full-size subset is a permutation
        let mut s = rng.subset(5, 5);
        s.sort_unstable();
        assert_eq!(s, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn grad_check_quadratic() {
        let err = grad_check(|x| Ok(x[0] * x[0]), &[3.0], &[6.0], 1e-5).unwrap();
        assert!(err < 1e-8, "err {err}");
    }

    #[test]
    fn grad_check_sigmoid() {
        // f(w) = sigmoid(w . x) for fixed x; closed-form gradient s(1-s) x.
        let x = [0.3, -0.7, 1.1];
        let w = [0.5, 0.25, -0.4];
        let f = |w: &[f64]| {
            let z: f64 = w.iter().zip(&x).map(|(a, b)| a * b).sum();
            Ok(1.0 / (1.0 + (-z).exp()))
        };
        let z: f64 = w.iter().zip(&x).map(|(a, b)| a * b).sum();
        let s = 1.0 / (1.0 + (-z).exp());
        let analytic: Vec<f64> = x.iter().map(|xi| s * (1.0 - s) * xi).collect();
        let err = grad_check(f, &w, &analytic, 1e-5).unwrap();
        assert!(err < 1e-6, "err {err}");
    }

    #[test]
    fn grad_check_flags_wrong_gradient() {
        // analytic gradient deliberately off by 2x: 12 instead of 6
        let err = grad_check(|x| Ok(x[0] * x[0]), &[3.0], &[12.0], 1e-5).unwrap();
        assert!((err - 0.5).abs() < 1e-6, "err {err}");
    }

    #[test]
    fn grad_check_rejects_non_finite_function() {
        let err = grad_check(|_| Ok(f64::NAN), &[1.0], &[0.0], 1e-5);
        assert!(matches!(err, Err(Error::Numeric(_))));
    }
}
