//! Unital *-subalgebras of `M_N` carried by trace-orthonormal bases, their
//! trace-preserving conditional expectations, commutants and intersections,
//! and commuting-square checks.

use crate::error::{Error, Result};
use crate::hadamard::{fourier_tensor, u1, FourierSpec, HadamardMatrix, MAX_ORDER};
use crate::linalg;
use crate::matrix::{
    is_unitary, orthonormal_basis, subspace_intersection, tensor, trace_inner, DenseMatrix, Tolerance, C64,
    ONE, ZERO,
};

/// Largest `N` for which the nondegeneracy rank check of the Γ square runs.
pub const NONDEGENERACY_CAP: usize = 5;

/// Largest `N` accepted by [`gamma_square`] (the square lives in `M_{N²}`).
pub const GAMMA_CAP: usize = 36;

/// Trace-orthonormal basis of a *-subalgebra of `M_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraBasis {
    ambient_dim: usize,
    basis: Vec<DenseMatrix>,
    unital: bool,
}

impl AlgebraBasis {
    /// Validates an externally supplied basis: trace-orthonormal, and a span
    /// closed under adjoint and multiplication.
    pub fn try_new(ambient_dim: usize, basis: Vec<DenseMatrix>, tol: &Tolerance) -> Result<Self> {
        if let Some(bad) = basis.iter().find(|b| b.dim() != ambient_dim) {
            return Err(Error::DimMismatch {
                left: ambient_dim,
                right: bad.dim(),
            });
        }
        for (i, x) in basis.iter().enumerate() {
            for (j, y) in basis.iter().enumerate() {
                let expect = if i == j { ONE } else { ZERO };
                if (trace_inner(x, y) - expect).norm() > 1e-10 {
                    return Err(Error::InvalidInput("basis is not trace-orthonormal".into()));
                }
            }
        }
        let mut alg = Self {
            ambient_dim,
            basis,
            unital: false,
        };
        alg.unital = alg.contains(&DenseMatrix::identity(ambient_dim), tol);
        let closed = alg.basis.iter().all(|x| alg.contains(&x.adjoint(), tol))
            && alg
                .basis
                .iter()
                .all(|x| alg.basis.iter().all(|y| alg.contains(&(x * y), tol)));
        if !closed {
            return Err(Error::InvalidInput("span is not a *-algebra".into()));
        }
        Ok(alg)
    }

    /// `ℂ·I_N`.
    pub fn scalars(n: usize) -> Self {
        Self {
            ambient_dim: n,
            basis: vec![DenseMatrix::identity(n)],
            unital: true,
        }
    }

    /// `Δ_N`, basis `√N·E_ii`.
    pub fn diagonal(n: usize) -> Self {
        let s = C64::new((n as f64).sqrt(), 0.0);
        Self {
            ambient_dim: n,
            basis: (0..n).map(|i| DenseMatrix::unit(n, i, i).scale(s)).collect(),
            unital: true,
        }
    }

    /// `M_N`, basis `√N·E_ij`.
    pub fn full(n: usize) -> Self {
        let s = C64::new((n as f64).sqrt(), 0.0);
        let mut basis = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                basis.push(DenseMatrix::unit(n, i, j).scale(s));
            }
        }
        Self {
            ambient_dim: n,
            basis,
            unital: true,
        }
    }

    /// `Ad_U(self)`; `U` must be unitary, which keeps the basis orthonormal.
    pub fn conjugated(&self, u: &DenseMatrix, tol: &Tolerance) -> Result<Self> {
        if u.dim() != self.ambient_dim {
            return Err(Error::DimMismatch {
                left: self.ambient_dim,
                right: u.dim(),
            });
        }
        if !is_unitary(u, tol.eps_entry) {
            return Err(Error::NonUnitary);
        }
        Ok(Self {
            ambient_dim: self.ambient_dim,
            basis: self.basis.iter().map(|b| u.conjugate(b)).collect(),
            unital: self.unital,
        })
    }

    /// `I_outer ⊗ self`.
    pub fn embed_right(&self, outer: usize) -> Self {
        let id = DenseMatrix::identity(outer);
        Self {
            ambient_dim: outer * self.ambient_dim,
            basis: self.basis.iter().map(|b| tensor(&id, b)).collect(),
            unital: self.unital,
        }
    }

    /// `self ⊗ I_inner`.
    pub fn embed_left(&self, inner: usize) -> Self {
        let id = DenseMatrix::identity(inner);
        Self {
            ambient_dim: self.ambient_dim * inner,
            basis: self.basis.iter().map(|b| tensor(b, &id)).collect(),
            unital: self.unital,
        }
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut basis = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.basis {
            for b in &other.basis {
                basis.push(tensor(a, b));
            }
        }
        Self {
            ambient_dim: self.ambient_dim * other.ambient_dim,
            basis,
            unital: self.unital && other.unital,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[DenseMatrix] {
        &self.basis
    }

    pub fn unital(&self) -> bool {
        self.unital
    }

    fn project(&self, x: &DenseMatrix) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.ambient_dim);
        for b in &self.basis {
            out = &out + &b.scale(trace_inner(x, b));
        }
        out
    }

    /// Span membership: trace-norm residual below `eps_rank·max(1, ‖x‖)`.
    pub fn contains(&self, x: &DenseMatrix, tol: &Tolerance) -> bool {
        let r = x - &self.project(x);
        let scale = 1.0 / (self.ambient_dim as f64).sqrt();
        r.frobenius_norm() * scale <= tol.eps_rank * (x.frobenius_norm() * scale).max(1.0)
    }

    pub fn is_subspace_of(&self, other: &Self, tol: &Tolerance) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis.iter().all(|b| other.contains(b, tol))
    }
}

/// Smallest unital *-algebra containing the generators.
pub fn algebra_close(generators: &[DenseMatrix], n: usize, tol: &Tolerance) -> Result<AlgebraBasis> {
    if let Some(bad) = generators.iter().find(|g| g.dim() != n) {
        return Err(Error::DimMismatch {
            left: n,
            right: bad.dim(),
        });
    }
    let mut span = vec![DenseMatrix::identity(n)];
    span.extend(generators.iter().cloned());
    span.extend(generators.iter().map(DenseMatrix::adjoint));
    let mut basis = orthonormal_basis(&span, tol);
    loop {
        let mut cand = basis.clone();
        for a in &basis {
            for b in &basis {
                cand.push(a * b);
            }
        }
        let next = orthonormal_basis(&cand, tol);
        if next.len() == basis.len() {
            break;
        }
        basis = next;
    }
    Ok(AlgebraBasis {
        ambient_dim: n,
        basis,
        unital: true,
    })
}

/// Trace-preserving conditional expectation: the orthogonal projection onto
/// the span in the trace inner product.
pub fn conditional_expectation(x: &DenseMatrix, a: &AlgebraBasis) -> Result<DenseMatrix> {
    if x.dim() != a.ambient_dim {
        return Err(Error::DimMismatch {
            left: a.ambient_dim,
            right: x.dim(),
        });
    }
    Ok(a.project(x))
}

/// `{x ∈ span(ambient) : [x, a] = 0 for all a ∈ A}`.
pub fn commutant(a: &AlgebraBasis, ambient: &AlgebraBasis, tol: &Tolerance) -> Result<AlgebraBasis> {
    if a.ambient_dim != ambient.ambient_dim {
        return Err(Error::DimMismatch {
            left: ambient.ambient_dim,
            right: a.ambient_dim,
        });
    }
    let cols: Vec<Vec<C64>> = ambient
        .basis
        .iter()
        .map(|x| a.basis.iter().flat_map(|y| x.commutator(y).flatten()).collect())
        .collect();
    let elems: Vec<DenseMatrix> = linalg::kernel(&cols, tol.eps_rank)
        .iter()
        .map(|k| {
            k.iter()
                .zip(&ambient.basis)
                .fold(DenseMatrix::zeros(a.ambient_dim), |acc, (c, b)| &acc + &b.scale(*c))
        })
        .collect();
    let basis = orthonormal_basis(&elems, tol);
    let mut out = AlgebraBasis {
        ambient_dim: a.ambient_dim,
        basis,
        unital: false,
    };
    out.unital = out.contains(&DenseMatrix::identity(a.ambient_dim), tol);
    Ok(out)
}

pub fn intersect_algebras(a: &AlgebraBasis, b: &AlgebraBasis, tol: &Tolerance) -> Result<AlgebraBasis> {
    if a.ambient_dim != b.ambient_dim {
        return Err(Error::DimMismatch {
            left: a.ambient_dim,
            right: b.ambient_dim,
        });
    }
    let basis = subspace_intersection(&a.basis, &b.basis, tol);
    let out = AlgebraBasis {
        ambient_dim: a.ambient_dim,
        basis,
        unital: a.unital && b.unital,
    };
    debug_assert!(out.basis.iter().all(|x| out.contains(&x.adjoint(), tol)));
    debug_assert!(!out.unital || out.contains(&DenseMatrix::identity(out.ambient_dim), tol));
    Ok(out)
}

/// `Ad_U(Δ_N)` with basis `√N·U E_ii U*`.
pub fn diag_conj_algebra(u: &DenseMatrix, tol: &Tolerance) -> Result<AlgebraBasis> {
    AlgebraBasis::diagonal(u.dim()).conjugated(u, tol)
}

/// Outcome of a commuting-square check; `nondegenerate` is `None` when the
/// rank check was skipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SquareCheck {
    pub commuting: bool,
    pub nondegenerate: Option<bool>,
}

impl SquareCheck {
    pub fn holds(&self) -> bool {
        self.commuting && self.nondegenerate.unwrap_or(true)
    }
}

/// Checks the square
///
/// ```text
/// left   ⊂ ambient
///  ∪          ∪
/// corner ⊂ right
/// ```
///
/// `commuting` compares `E_left∘E_right`, `E_right∘E_left` and `E_corner`
/// on every ambient basis element; `nondegenerate` tests whether the
/// products `left·right` span the ambient algebra.
pub fn is_commuting_square(
    corner: &AlgebraBasis,
    left: &AlgebraBasis,
    right: &AlgebraBasis,
    ambient: &AlgebraBasis,
    tol: &Tolerance,
) -> Result<SquareCheck> {
    check_square(corner, left, right, ambient, tol, true)
}

pub fn check_square(
    corner: &AlgebraBasis,
    left: &AlgebraBasis,
    right: &AlgebraBasis,
    ambient: &AlgebraBasis,
    tol: &Tolerance,
    with_nondegeneracy: bool,
) -> Result<SquareCheck> {
    let n = ambient.ambient_dim;
    for alg in [corner, left, right] {
        if alg.ambient_dim != n {
            return Err(Error::DimMismatch {
                left: n,
                right: alg.ambient_dim,
            });
        }
    }
    if !corner.is_subspace_of(left, tol) || !corner.is_subspace_of(right, tol) {
        return Err(Error::InclusionViolation("corner not contained in both sides".into()));
    }
    if !left.is_subspace_of(ambient, tol) || !right.is_subspace_of(ambient, tol) {
        return Err(Error::InclusionViolation("side not contained in ambient".into()));
    }
    let eps = tol.eps_entry;
    let commuting = ambient.basis.iter().all(|x| {
        let lr = left.project(&right.project(x));
        let rl = right.project(&left.project(x));
        let c = corner.project(x);
        lr.approx_eq(&c, eps) && rl.approx_eq(&c, eps)
    });
    let nondegenerate = with_nondegeneracy.then(|| {
        let products: Vec<DenseMatrix> = left
            .basis
            .iter()
            .flat_map(|a| right.basis.iter().map(move |b| a * b))
            .collect();
        orthonormal_basis(&products, tol).len() == ambient.dim()
    });
    Ok(SquareCheck {
        commuting,
        nondegenerate,
    })
}

/// The spin-model square `(ℂ ⊂ Ad_U(Δ_N), Δ_N ⊂ M_N)`.
pub fn spin_square(u: &DenseMatrix, tol: &Tolerance) -> Result<SquareCheck> {
    let n = u.dim();
    is_commuting_square(
        &AlgebraBasis::scalars(n),
        &diag_conj_algebra(u, tol)?,
        &AlgebraBasis::diagonal(n),
        &AlgebraBasis::full(n),
        tol,
    )
}

/// The vertex-model square `(ℂ ⊂ Ad_Z(M_n ⊗ ℂ), ℂ ⊗ M_k ⊂ M_n ⊗ M_k)`.
pub fn vertex_square(z: &DenseMatrix, n: usize, k: usize, tol: &Tolerance) -> Result<SquareCheck> {
    if z.dim() != n * k {
        return Err(Error::DimMismatch {
            left: n * k,
            right: z.dim(),
        });
    }
    let left = AlgebraBasis::full(n).embed_left(k).conjugated(z, tol)?;
    let right = AlgebraBasis::full(k).embed_right(n);
    check_square(
        &AlgebraBasis::scalars(n * k),
        &left,
        &right,
        &AlgebraBasis::full(n * k),
        tol,
        false,
    )
}

/// Finite-level data of the square
///
/// ```text
/// I_N ⊗ M_N ⊂ Δ_N ⊗ M_N
///     ∪           ∪
///     ℂ     ⊂     A = Ad_{U₁}(I_N ⊗ W Δ_N W*)
/// ```
#[derive(Debug, Clone)]
pub struct GammaSquare {
    pub a: AlgebraBasis,
    pub square: SquareCheck,
    /// `dim (A' ∩ (I_N ⊗ M_N))`.
    pub relcomm_dim: usize,
}

pub fn gamma_square(u: &HadamardMatrix, spec: &FourierSpec, tol: &Tolerance) -> Result<GammaSquare> {
    gamma_square_with_cap(u, spec, tol, NONDEGENERACY_CAP)
}

pub fn gamma_square_with_cap(
    u: &HadamardMatrix,
    spec: &FourierSpec,
    tol: &Tolerance,
    nondegeneracy_cap: usize,
) -> Result<GammaSquare> {
    let n = spec.order();
    if n > GAMMA_CAP {
        return Err(Error::OrderTooLarge { order: n, cap: GAMMA_CAP });
    }
    if u.dim() != n {
        return Err(Error::DimMismatch { left: n, right: u.dim() });
    }
    let w = fourier_tensor(spec);
    let a = diag_conj_algebra(w.matrix(), tol)?
        .embed_right(n)
        .conjugated(&u1(u), tol)?;
    let embedded = AlgebraBasis::full(n).embed_right(n);
    let ambient = AlgebraBasis::diagonal(n).tensor(&AlgebraBasis::full(n));
    let square = check_square(
        &AlgebraBasis::scalars(n * n),
        &embedded,
        &a,
        &ambient,
        tol,
        n <= nondegeneracy_cap,
    )?;
    let relcomm_dim = commutant(&a, &embedded, tol)?.dim();
    Ok(GammaSquare { a, square, relcomm_dim })
}

/// Jones projections `e₁ = (1/N)Σ E_ij ∈ M_N` and `e₂ = Σ E_ii ⊗ E_ii ∈ M_{N²}`.
pub fn jones_projections(n: usize) -> Result<(DenseMatrix, DenseMatrix)> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::OrderOutOfRange(n));
    }
    let e1 = DenseMatrix::from_fn(n, |_, _| C64::new(1.0 / n as f64, 0.0));
    let diag: Vec<C64> = (0..n * n).map(|p| if p / n == p % n { ONE } else { ZERO }).collect();
    Ok((e1, DenseMatrix::from_diagonal(&diag)))
}
