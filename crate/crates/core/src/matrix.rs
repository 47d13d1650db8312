//! Dense complex matrices over `M_N` with the normalized trace inner product
//! `<A, B> = tr(B* A)`, `tr = Trace / N`.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Comparison thresholds shared by every predicate in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Absolute per-entry comparison threshold.
    pub eps_entry: f64,
    /// Gram–Schmidt pivot threshold for linear independence.
    pub eps_rank: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            eps_entry: 1e-9,
            eps_rank: 1e-8,
        }
    }
}

impl Tolerance {
    pub fn new(eps_entry: f64, eps_rank: f64) -> Result<Self> {
        for (name, v) in [("eps_entry", eps_entry), ("eps_rank", eps_rank)] {
            if !(v > 0.0 && v < 1e-2) {
                return Err(Error::InvalidTolerance(format!("{name} = {v} not in (0, 1e-2)")));
            }
        }
        Ok(Self { eps_entry, eps_rank })
    }

    pub fn with_entry(self, eps_entry: f64) -> Result<Self> {
        Self::new(eps_entry, self.eps_rank)
    }
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl DenseMatrix {
    /// Builds a matrix from `dim²` row-major entries, rejecting non-finite values.
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("matrix dimension must be at least 1".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for dim {dim}, got {}",
                dim * dim,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1);
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![ONE; dim])
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(dim >= 1);
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Permutation matrix whose row `i` has its unit entry in column `perm[i]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let mut m = Self::zeros(perm.len());
        for (i, &p) in perm.iter().enumerate() {
            m[(i, p)] = ONE;
        }
        m
    }

    /// Matrix unit `E_{ij}` (0-based).
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(dim);
        m[(i, j)] = ONE;
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        self.dim == other.dim && self.max_abs_diff(other) <= eps
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Flattened entries scaled by `1/√N`, so the Euclidean inner product of
    /// two flattened matrices is their trace inner product.
    pub(crate) fn flatten(&self) -> Vec<C64> {
        let s = 1.0 / (self.dim as f64).sqrt();
        self.data.iter().map(|z| z * s).collect()
    }

    pub(crate) fn unflatten(dim: usize, v: &[C64]) -> Self {
        let s = (dim as f64).sqrt();
        Self {
            dim,
            data: v.iter().map(|z| z * s).collect(),
        }
    }

    /// `U X U*` without a unitarity check.
    pub(crate) fn conjugate(&self, x: &Self) -> Self {
        &(self * x) * &self.adjoint()
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let rrow = &rhs.data[k * n..(k + 1) * n];
                for (o, b) in row.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        DenseMatrix { dim: n, data: out }
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;

    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;

    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Classification flags, each decided by per-entry comparison within `eps_entry`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MatrixClass {
    pub unitary: bool,
    pub diagonal: bool,
    pub permutation: bool,
    /// Exactly one unit-modulus entry per row and per column, everything else
    /// numerically zero (the `P·D` shape).
    pub complex_permutation: bool,
    pub selfadjoint: bool,
    pub projection: bool,
}

pub fn is_unitary(m: &DenseMatrix, eps: f64) -> bool {
    (m * &m.adjoint()).approx_eq(&DenseMatrix::identity(m.dim()), eps)
}

pub fn is_diagonal(m: &DenseMatrix, eps: f64) -> bool {
    let n = m.dim();
    (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)].norm() <= eps))
}

/// If `m` is a complex permutation matrix, returns `(perm, values)` where row
/// `i` has its single nonzero entry `values[i]` in column `perm[i]`.
pub fn complex_permutation_parts(m: &DenseMatrix, eps: f64) -> Option<(Vec<usize>, Vec<C64>)> {
    let n = m.dim();
    let mut perm = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for i in 0..n {
        let mut hit = None;
        for j in 0..n {
            let z = m[(i, j)];
            let r = z.norm();
            if (r - 1.0).abs() <= eps {
                if hit.is_some() {
                    return None;
                }
                hit = Some(j);
            } else if r >= eps {
                return None;
            }
        }
        let j = hit?;
        if seen[j] {
            return None;
        }
        seen[j] = true;
        perm.push(j);
        values.push(m[(i, j)]);
    }
    Some((perm, values))
}

pub fn classify(m: &DenseMatrix, tol: &Tolerance) -> MatrixClass {
    let eps = tol.eps_entry;
    let unitary = is_unitary(m, eps);
    let diagonal = is_diagonal(m, eps);
    let parts = complex_permutation_parts(m, eps);
    let complex_permutation = parts.is_some();
    let permutation = parts
        .map(|(_, vals)| vals.iter().all(|v| (v - ONE).norm() <= eps))
        .unwrap_or(false);
    let selfadjoint = m.approx_eq(&m.adjoint(), eps);
    let projection = selfadjoint && (m * m).approx_eq(m, eps);
    MatrixClass {
        unitary,
        diagonal,
        permutation,
        complex_permutation,
        selfadjoint,
        projection,
    }
}

/// Kronecker product; block `(i, j)` of the result is `a[i][j]·b`.
pub fn tensor(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let (n, m) = (a.dim(), b.dim());
    DenseMatrix::from_fn(n * m, |r, c| a[(r / m, c / m)] * b[(r % m, c % m)])
}

/// `U X U*`, checking that `U` is unitary.
pub fn ad(u: &DenseMatrix, x: &DenseMatrix, tol: &Tolerance) -> Result<DenseMatrix> {
    if u.dim() != x.dim() {
        return Err(Error::DimMismatch {
            left: u.dim(),
            right: x.dim(),
        });
    }
    if !is_unitary(u, tol.eps_entry) {
        return Err(Error::NonUnitary);
    }
    Ok(u.conjugate(x))
}

/// `tr(B* A)` with the normalized trace.
pub fn trace_inner(a: &DenseMatrix, b: &DenseMatrix) -> C64 {
    assert_eq!(a.dim(), b.dim(), "dimension mismatch");
    let s: C64 = a.entries().iter().zip(b.entries()).map(|(x, y)| x * y.conj()).sum();
    s / a.dim() as f64
}

/// Trace-orthonormal basis of the span; vectors whose residual norm falls
/// below `eps_rank` are discarded.
pub fn orthonormal_basis(span: &[DenseMatrix], tol: &Tolerance) -> Vec<DenseMatrix> {
    let Some(first) = span.first() else {
        return Vec::new();
    };
    let dim = first.dim();
    let flat: Vec<Vec<C64>> = span
        .iter()
        .map(|m| {
            assert_eq!(m.dim(), dim, "dimension mismatch");
            m.flatten()
        })
        .collect();
    linalg::orthonormalize(&flat, tol.eps_rank)
        .iter()
        .map(|v| DenseMatrix::unflatten(dim, v))
        .collect()
}

/// Basis of `span(a) ∩ span(b)`, both inputs assumed linearly independent.
///
/// Solves `Σ αᵢ aᵢ − Σ βⱼ bⱼ = 0` for the kernel coordinates and maps them
/// back through `a`; the result is orthonormalized.
pub fn subspace_intersection(
    a: &[DenseMatrix],
    b: &[DenseMatrix],
    tol: &Tolerance,
) -> Vec<DenseMatrix> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let dim = a[0].dim();
    let mut cols: Vec<Vec<C64>> = a.iter().map(DenseMatrix::flatten).collect();
    cols.extend(b.iter().map(|m| {
        assert_eq!(m.dim(), dim, "dimension mismatch");
        m.flatten().into_iter().map(|z| -z).collect::<Vec<_>>()
    }));
    let ker = linalg::kernel(&cols, tol.eps_rank);
    let elems: Vec<DenseMatrix> = ker
        .iter()
        .map(|k| {
            let mut x = DenseMatrix::zeros(dim);
            for (alpha, ai) in k.iter().zip(a) {
                x = &x + &ai.scale(*alpha);
            }
            x
        })
        .collect();
    orthonormal_basis(&elems, tol)
}
