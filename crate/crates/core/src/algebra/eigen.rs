//! Dense Hermitian eigensolver.
//!
//! Householder reduction to tridiagonal form, a diagonal phase change that
//! makes the off-diagonal real, then implicit QL with Wilkinson-style shifts
//! (the EISPACK `tql2` iteration). The same code serves real symmetric
//! matrices through the [`Scalar`] trait, which the sector-resolved chain
//! diagonalization relies on.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::matrix::{CMatrix, C64};
use super::state::HermitianOperator;
use crate::{Error, Result};

pub(crate) trait Scalar:
    Copy
    + Add<Output = Self>
    + AddAssign
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + Neg<Output = Self>
{
    const ZERO: Self;
    const ONE: Self;
    fn conj(self) -> Self;
    fn abs_sq(self) -> f64;
    fn re(self) -> f64;
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn abs_sq(self) -> f64 {
        self * self
    }
    #[inline]
    fn re(self) -> f64 {
        self
    }
}

impl Scalar for C64 {
    const ZERO: Self = C64::new(0.0, 0.0);
    const ONE: Self = C64::new(1.0, 0.0);
    #[inline]
    fn conj(self) -> Self {
        C64::conj(&self)
    }
    #[inline]
    fn abs_sq(self) -> f64 {
        self.norm_sqr()
    }
    #[inline]
    fn re(self) -> f64 {
        self.re
    }
}

#[inline]
fn phase<T: Scalar>(x: T) -> T {
    let r = x.abs_sq().sqrt();
    if r == 0.0 {
        T::ONE
    } else {
        x * (1.0 / r)
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    // eigenvector k occupies vectors[k*dim..(k+1)*dim]
    vectors: Vec<C64>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, k: usize) -> &[C64] {
        let n = self.dim();
        &self.vectors[k * n..(k + 1) * n]
    }

    /// Unitary matrix whose columns are the eigenvectors.
    pub fn eigenvector_matrix(&self) -> CMatrix {
        let n = self.dim();
        CMatrix::from_fn(n, |i, k| self.vectors[k * n + i])
    }

    /// `V diag(lambda) V^dagger`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let v = self.eigenvector(k);
            for i in 0..n {
                let vi = v[i] * lambda;
                for j in 0..n {
                    out[(i, j)] += vi * v[j].conj();
                }
            }
        }
        out
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Diagonalizes a Hermitian operator. Eigenvalues come back in ascending order.
pub fn eigh(h: &HermitianOperator) -> Result<SpectralDecomposition> {
    let m = h.matrix();
    let n = m.dim();
    let real = m.as_slice().iter().all(|z| z.im == 0.0);
    if real {
        let a: Vec<f64> = m.as_slice().iter().map(|z| z.re).collect();
        let (eigenvalues, vecs) = hermitian_eigen(n, a)?;
        let vectors = vecs.into_iter().map(|x| C64::new(x, 0.0)).collect();
        Ok(SpectralDecomposition { eigenvalues, vectors })
    } else {
        let (eigenvalues, vectors) = hermitian_eigen(n, m.as_slice().to_vec())?;
        Ok(SpectralDecomposition { eigenvalues, vectors })
    }
}

/// Eigen-decomposition of a row-major Hermitian matrix. Returns ascending
/// eigenvalues and the eigenvectors stored contiguously, one per eigenvalue.
pub(crate) fn hermitian_eigen<T: Scalar>(n: usize, mut a: Vec<T>) -> Result<(Vec<f64>, Vec<T>)> {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    if a.iter().any(|x| !x.abs_sq().is_finite()) {
        return Err(Error::NonFinite("eigensolver input"));
    }

    // q accumulates the Householder reflections: a_original = q T q^dagger
    let mut q = vec![T::ZERO; n * n];
    for i in 0..n {
        q[i * n + i] = T::ONE;
    }
    let mut v = vec![T::ZERO; n];
    let mut p = vec![T::ZERO; n];

    for k in 0..n.saturating_sub(2) {
        let lo = k + 1;
        let sigma: f64 = (lo..n).map(|i| a[i * n + k].abs_sq()).sum();
        let tail: f64 = (lo + 1..n).map(|i| a[i * n + k].abs_sq()).sum();
        if tail == 0.0 {
            continue;
        }
        let norm = sigma.sqrt();
        let x0 = a[lo * n + k];
        let ph = phase(x0);
        let alpha = -(ph * norm);

        for i in lo..n {
            v[i] = a[i * n + k];
        }
        v[lo] = x0 - alpha;
        let vnorm = (lo..n).map(|i| v[i].abs_sq()).sum::<f64>().sqrt();
        for x in &mut v[lo..n] {
            *x = *x * (1.0 / vnorm);
        }

        // column k and row k collapse onto the first reflected coordinate
        a[lo * n + k] = alpha;
        a[k * n + lo] = alpha.conj();
        for i in lo + 1..n {
            a[i * n + k] = T::ZERO;
            a[k * n + i] = T::ZERO;
        }

        // trailing block B <- B - 2 v w^dagger - 2 w v^dagger, w = Bv - (v^dagger B v) v
        for i in lo..n {
            let row = &a[i * n + lo..i * n + n];
            let mut acc = T::ZERO;
            for (bij, vj) in row.iter().zip(&v[lo..n]) {
                acc += *bij * *vj;
            }
            p[i] = acc;
        }
        let mut kappa = T::ZERO;
        for i in lo..n {
            kappa += v[i].conj() * p[i];
        }
        let kappa = kappa.re();
        for i in lo..n {
            p[i] = p[i] - v[i] * kappa;
        }
        for i in lo..n {
            let vi2 = v[i] * 2.0;
            let wi2 = p[i] * 2.0;
            let row = &mut a[i * n + lo..i * n + n];
            for (j, bij) in row.iter_mut().enumerate() {
                let jj = lo + j;
                *bij = *bij - vi2 * p[jj].conj() - wi2 * v[jj].conj();
            }
        }

        // q <- q (I - 2 v v^dagger) on columns lo..n
        for r in 0..n {
            let row = &mut q[r * n..(r + 1) * n];
            let mut s = T::ZERO;
            for j in lo..n {
                s += row[j] * v[j];
            }
            let s2 = s * 2.0;
            for j in lo..n {
                row[j] = row[j] - s2 * v[j].conj();
            }
        }
    }

    // phase change: T = D S D^dagger with S real, so a = (q D) S (q D)^dagger
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    let mut d = vec![T::ONE; n];
    for i in 0..n {
        diag[i] = a[i * n + i].re();
    }
    for i in 0..n - 1 {
        let e = a[(i + 1) * n + i];
        let r = e.abs_sq().sqrt();
        off[i + 1] = r;
        d[i + 1] = if r == 0.0 { d[i] } else { d[i] * e * (1.0 / r) };
    }

    // z holds eigenvector candidates contiguously: z[j*n + r] = (q D)[r][j]
    let mut z = vec![T::ZERO; n * n];
    for r in 0..n {
        for j in 0..n {
            z[j * n + r] = q[r * n + j] * d[j];
        }
    }
    drop(q);

    tql2(n, &mut diag, &mut off, &mut z)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &i in &order {
        vectors.extend_from_slice(&z[i * n..(i + 1) * n]);
    }
    if eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("eigenvalues"));
    }
    Ok((eigenvalues, vectors))
}

/// Implicit QL on a real symmetric tridiagonal matrix. `e[i]` is the
/// coupling between `i - 1` and `i` on entry (`e[0]` unused). Rotations are
/// applied to the contiguous vectors in `z`.
fn tql2<T: Scalar>(n: usize, d: &mut [f64], e: &mut [f64], z: &mut [T]) -> Result<()> {
    const MAX_ITER: usize = 60;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_ITER {
                    return Err(Error::NoConvergence { what: "tridiagonal QL", iterations: iter });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in &mut d[l + 2..n] {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (head, tail) = z.split_at_mut((i + 1) * n);
                    let zi = &mut head[i * n..];
                    let zi1 = &mut tail[..n];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let h = *b;
                        *b = *a * s + h * c;
                        *a = *a * c - h * s;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::pauli;

    fn herm(m: CMatrix) -> HermitianOperator {
        HermitianOperator::new(m).unwrap()
    }

    #[test]
    fn sigma_z_spectrum() {
        let s = eigh(&herm(pauli::z())).unwrap();
        assert_eq!(s.eigenvalues(), &[-1.0, 1.0]);
    }

    #[test]
    fn zero_matrix() {
        let s = eigh(&herm(CMatrix::zeros(2))).unwrap();
        assert_eq!(s.eigenvalues(), &[0.0, 0.0]);
    }

    #[test]
    fn sigma_y_complex_path() {
        let s = eigh(&herm(pauli::y())).unwrap();
        assert!((s.eigenvalues()[0] + 1.0).abs() < 1e-14);
        assert!((s.eigenvalues()[1] - 1.0).abs() < 1e-14);
        let rec = s.reconstruct();
        assert!((&rec - &pauli::y()).max_abs() < 1e-14);
    }

    #[test]
    fn dimer_exchange_spectrum() {
        // 4x4 exchange written out by hand in the |00>,|01>,|10>,|11> basis
        let o = 0.0;
        #[rustfmt::skip]
        let m = CMatrix::from_real(4, &[
            1.0, o,    o,    o,
            o,   -1.0, 2.0,  o,
            o,   2.0,  -1.0, o,
            o,   o,    o,    1.0,
        ]).unwrap();
        let s = eigh(&herm(m)).unwrap();
        let expect = [-3.0, 1.0, 1.0, 1.0];
        for (a, b) in s.eigenvalues().iter().zip(expect) {
            assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }
    }

    #[test]
    fn single_and_empty() {
        let s = eigh(&herm(CMatrix::diagonal(&[2.5]))).unwrap();
        assert_eq!(s.eigenvalues(), &[2.5]);
        let (vals, vecs) = hermitian_eigen::<f64>(0, Vec::new()).unwrap();
        assert!(vals.is_empty() && vecs.is_empty());
    }

    #[test]
    fn already_diagonal_is_sorted() {
        let s = eigh(&herm(CMatrix::diagonal(&[3.0, -1.0, 2.0]))).unwrap();
        assert_eq!(s.eigenvalues(), &[-1.0, 2.0, 3.0]);
        assert_eq!(s.eigenvector(0)[1].re.abs(), 1.0);
    }
}
