//! Fourier matrices and their tensor products, the cyclic diagonal/shift
//! families, `D_U` and `U₁`, and the decision procedures for `V = U·P·D`,
//! the `D·P·W` normal form, conjugacy, and biunitarity.
//!
//! A single root of unity `ω = e^{+2πi/n}` is used for both `F_n` and the
//! diagonal family `𝒟_{n,k}`. With it, `σ_{n,1}·F_n = F_n·𝒟_{n,1}` and
//! `Ad_{F_n}(𝒟_{n,k}) = σ_{n,k}` hold exactly.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::matrix::{
    classify, complex_permutation_parts, is_unitary, tensor, DenseMatrix, Tolerance, C64, ONE,
};

/// Default cap on `N = n₁·…·n_k`.
pub const MAX_ORDER: usize = 64;

/// `e^{2πi·m/n}`, reducing the exponent modulo `n` first.
pub fn root_of_unity(n: usize, m: usize) -> C64 {
    let m = m % n;
    C64::from_polar(1.0, 2.0 * PI * m as f64 / n as f64)
}

/// Orders `(n₁, …, n_k)` of the Fourier factors of `W = F_{n₁} ⊗ … ⊗ F_{n_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct FourierSpec {
    orders: Vec<usize>,
}

impl FourierSpec {
    pub fn new(orders: Vec<usize>) -> Result<Self> {
        Self::with_cap(orders, MAX_ORDER)
    }

    pub fn with_cap(orders: Vec<usize>, cap: usize) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidInput("Fourier spec needs at least one order".into()));
        }
        if let Some(&bad) = orders.iter().find(|&&n| n < 2) {
            return Err(Error::OrderOutOfRange(bad));
        }
        let order = orders.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n));
        match order {
            Some(n) if n <= cap => Ok(Self { orders }),
            Some(n) => Err(Error::OrderTooLarge { order: n, cap }),
            None => Err(Error::OrderTooLarge { order: usize::MAX, cap }),
        }
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    /// `N = Π nᵢ`.
    pub fn order(&self) -> usize {
        self.orders.iter().product()
    }
}

impl TryFrom<Vec<usize>> for FourierSpec {
    type Error = Error;

    fn try_from(orders: Vec<usize>) -> Result<Self> {
        Self::new(orders)
    }
}

impl From<FourierSpec> for Vec<usize> {
    fn from(spec: FourierSpec) -> Self {
        spec.orders
    }
}

impl FromStr for FourierSpec {
    type Err = Error;

    /// Parses a comma list such as `"2,3"`.
    fn from_str(s: &str) -> Result<Self> {
        Self::new(parse_usize_list(s)?)
    }
}

impl fmt::Display for FourierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

pub(crate) fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidInput(format!("not a non-negative integer: {t:?}")))
        })
        .collect()
}

/// A unitary matrix all of whose entries have modulus `1/√N`.
#[derive(Debug, Clone, PartialEq)]
pub struct HadamardMatrix {
    matrix: DenseMatrix,
}

impl HadamardMatrix {
    pub fn try_new(matrix: DenseMatrix, tol: &Tolerance) -> Result<Self> {
        if is_hadamard(&matrix, tol) {
            Ok(Self { matrix })
        } else {
            Err(Error::NotHadamard)
        }
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `D·self` for a diagonal unitary given by its phases; stays Hadamard.
    pub fn left_phase(&self, phases: &[C64]) -> Self {
        let n = self.dim();
        assert_eq!(phases.len(), n, "dimension mismatch");
        Self {
            matrix: DenseMatrix::from_fn(n, |i, j| phases[i] * self.matrix[(i, j)]),
        }
    }

    /// Wraps a matrix known by construction to be Hadamard.
    pub(crate) fn trusted(matrix: DenseMatrix) -> Self {
        debug_assert!(is_hadamard(&matrix, &Tolerance::default()));
        Self { matrix }
    }
}

pub fn is_hadamard(m: &DenseMatrix, tol: &Tolerance) -> bool {
    let modulus = 1.0 / (m.dim() as f64).sqrt();
    m.entries().iter().all(|z| (z.norm() - modulus).abs() <= tol.eps_entry)
        && is_unitary(m, tol.eps_entry)
}

/// `F_n = (ω^{jk}/√n)`, `ω = e^{2πi/n}`.
pub fn fourier(n: usize) -> Result<HadamardMatrix> {
    if !(2..=MAX_ORDER).contains(&n) {
        return Err(Error::OrderOutOfRange(n));
    }
    let s = 1.0 / (n as f64).sqrt();
    Ok(HadamardMatrix {
        matrix: DenseMatrix::from_fn(n, |j, k| root_of_unity(n, j * k) * s),
    })
}

/// `W = F_{n₁} ⊗ … ⊗ F_{n_k}` in spec order.
pub fn fourier_tensor(spec: &FourierSpec) -> HadamardMatrix {
    let mut it = spec.orders().iter();
    let first = *it.next().expect("spec is nonempty");
    let mut w = fourier(first).expect("spec validated").matrix;
    for &n in it {
        w = tensor(&w, fourier(n).expect("spec validated").matrix());
    }
    HadamardMatrix { matrix: w }
}

fn check_power(n: usize, k: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::OrderOutOfRange(n));
    }
    if k > n {
        return Err(Error::IndexOutOfRange { index: k, order: n });
    }
    Ok(())
}

/// `𝒟_{n,k} = diag(1, ω^k, ω^{2k}, …)`, with `𝒟_{n,0} = 𝒟_{n,n} = I`.
pub fn gen_diag(n: usize, k: usize) -> Result<DenseMatrix> {
    check_power(n, k)?;
    Ok(DenseMatrix::from_diagonal(
        &(0..n).map(|j| root_of_unity(n, j * k)).collect::<Vec<_>>(),
    ))
}

/// `σ_{n,k} = σ_{n,1}^k` where `σ_{n,1}` maps basis vector `e_{j+1}` to `e_j`
/// (unit entries at `(j, j+1 mod n)`).
pub fn gen_sigma(n: usize, k: usize) -> Result<DenseMatrix> {
    check_power(n, k)?;
    let perm: Vec<usize> = (0..n).map(|j| (j + k) % n).collect();
    Ok(DenseMatrix::permutation(&perm))
}

fn check_element(spec: &FourierSpec, r: &GroupElement) -> Result<()> {
    if r.coords().len() != spec.orders().len() {
        return Err(Error::DimMismatch {
            left: spec.orders().len(),
            right: r.coords().len(),
        });
    }
    Ok(())
}

/// `𝒟_r⃗ = 𝒟_{n₁,r₁} ⊗ … ⊗ 𝒟_{n_k,r_k}`.
pub fn gen_diag_vec(spec: &FourierSpec, r: &GroupElement) -> Result<DenseMatrix> {
    check_element(spec, r)?;
    kron_fold(spec.orders(), r.coords(), gen_diag)
}

/// `σ_r⃗ = σ_{n₁,r₁} ⊗ … ⊗ σ_{n_k,r_k}`.
pub fn gen_sigma_vec(spec: &FourierSpec, r: &GroupElement) -> Result<DenseMatrix> {
    check_element(spec, r)?;
    kron_fold(spec.orders(), r.coords(), gen_sigma)
}

fn kron_fold(
    orders: &[usize],
    coords: &[usize],
    f: fn(usize, usize) -> Result<DenseMatrix>,
) -> Result<DenseMatrix> {
    let mut acc: Option<DenseMatrix> = None;
    for (&n, &k) in orders.iter().zip(coords) {
        let m = f(n, k)?;
        acc = Some(match acc {
            None => m,
            Some(a) => tensor(&a, &m),
        });
    }
    Ok(acc.expect("nonempty orders"))
}

/// Diagonal of `𝒟_r⃗` without materializing the matrix.
pub(crate) fn diag_vec_entries(orders: &[usize], coords: &[usize]) -> Vec<C64> {
    let mut d = vec![ONE];
    for (&n, &k) in orders.iter().zip(coords) {
        d = d
            .iter()
            .flat_map(|&a| (0..n).map(move |j| a * root_of_unity(n, j * k)))
            .collect();
    }
    d
}

/// `D_U` with entry `√N·conj(U_{ij})` at diagonal position `i·N + j`.
pub fn d_u(u: &HadamardMatrix) -> DenseMatrix {
    let n = u.dim();
    let s = (n as f64).sqrt();
    let diag: Vec<C64> = u.matrix.entries().iter().map(|z| z.conj() * s).collect();
    DenseMatrix::from_diagonal(&diag)
}

/// `U₁ = (I_N ⊗ U)·D_U`, block-diagonal with block `i` equal to
/// `U·diag(√N·conj(row i of U))`.
pub fn u1(u: &HadamardMatrix) -> DenseMatrix {
    let n = u.dim();
    let s = (n as f64).sqrt();
    DenseMatrix::from_fn(n * n, |r, c| {
        let (bi, bj) = (r / n, c / n);
        if bi != bj {
            return C64::new(0.0, 0.0);
        }
        let (row, col) = (r % n, c % n);
        u.matrix[(row, col)] * u.matrix[(bi, col)].conj() * s
    })
}

/// `P = U₁·(I_N ⊗ W)*` for `U = W`; a block-diagonal permutation.
pub fn vertex_permutation(spec: &FourierSpec) -> DenseMatrix {
    let w = fourier_tensor(spec);
    let n = w.dim();
    let embedded = tensor(&DenseMatrix::identity(n), w.matrix());
    &u1(&w) * &embedded.adjoint()
}

/// True when every entry outside the `dim/block` diagonal blocks of size
/// `block` is below `eps`.
pub fn is_block_diagonal(m: &DenseMatrix, block: usize, eps: f64) -> bool {
    let n = m.dim();
    block > 0
        && n.is_multiple_of(block)
        && (0..n).all(|i| (0..n).all(|j| i / block == j / block || m[(i, j)].norm() < eps))
}

/// Witness of `V = U·P·D`: `perm` gives `P` (row `i` → column `perm[i]`) and
/// `phases` the diagonal of `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimWitness {
    pub perm: Vec<usize>,
    pub phases: Vec<C64>,
}

/// Decides `V = U·P·D` by testing whether `U*V` is a complex permutation.
/// `None` means the two Hadamard subfactors are distinct.
pub fn check_sim(
    u: &HadamardMatrix,
    v: &HadamardMatrix,
    tol: &Tolerance,
) -> Result<Option<SimWitness>> {
    if u.dim() != v.dim() {
        return Err(Error::DimMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    let m = &u.matrix.adjoint() * &v.matrix;
    // (P·D)[i][perm[i]] = D[perm[i]]
    Ok(complex_permutation_parts(&m, tol.eps_entry).map(|(perm, vals)| {
        let mut phases = vec![ONE; perm.len()];
        for (&p, &v) in perm.iter().zip(&vals) {
            phases[p] = v;
        }
        SimWitness { perm, phases }
    }))
}

/// Structured Hadamard matrix `D·P·W`.
#[derive(Debug, Clone, PartialEq)]
pub struct DpwForm {
    phases: Vec<C64>,
    perm: Vec<usize>,
    spec: FourierSpec,
}

impl DpwForm {
    pub fn new(spec: FourierSpec, perm: Vec<usize>, phases: Vec<C64>, tol: &Tolerance) -> Result<Self> {
        let n = spec.order();
        for len in [perm.len(), phases.len()] {
            if len != n {
                return Err(Error::DimMismatch { left: n, right: len });
            }
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidInput(format!("{perm:?} is not a permutation of 0..{n}")));
            }
        }
        if phases.iter().any(|z| (z.norm() - 1.0).abs() > tol.eps_entry) {
            return Err(Error::InvalidInput("phases must have modulus one".into()));
        }
        Ok(Self { phases, perm, spec })
    }

    pub fn phases(&self) -> &[C64] {
        &self.phases
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn spec(&self) -> &FourierSpec {
        &self.spec
    }

    pub fn realize(&self) -> HadamardMatrix {
        let w = fourier_tensor(&self.spec);
        // (D·P·W)[i][j] = d_i · W[perm[i]][j]
        let m = DenseMatrix::from_fn(self.spec.order(), |i, j| self.phases[i] * w.matrix[(self.perm[i], j)]);
        HadamardMatrix::trusted(m)
    }
}

/// Factors `X·W* = D·P` and returns the corresponding `DpwForm`.
pub fn decompose_dpw(x: &HadamardMatrix, spec: &FourierSpec, tol: &Tolerance) -> Result<DpwForm> {
    if x.dim() != spec.order() {
        return Err(Error::DimMismatch {
            left: x.dim(),
            right: spec.order(),
        });
    }
    let w = fourier_tensor(spec);
    let m = &x.matrix * &w.matrix.adjoint();
    let (perm, phases) = complex_permutation_parts(&m, tol.eps_entry).ok_or(Error::NotDpwForm)?;
    Ok(DpwForm {
        phases,
        perm,
        spec: spec.clone(),
    })
}

/// True iff both matrices decompose as `D·P·W` with the same permutation,
/// which certifies that the Hadamard subfactors are conjugate by `Ad_{D₂D₁*}`.
pub fn are_conjugate(
    x: &HadamardMatrix,
    y: &HadamardMatrix,
    spec: &FourierSpec,
    tol: &Tolerance,
) -> Result<bool> {
    let a = decompose_dpw(x, spec, tol)?;
    let b = decompose_dpw(y, spec, tol)?;
    Ok(a.perm == b.perm)
}

fn check_split(m: &DenseMatrix, n: usize, k: usize) -> Result<()> {
    if n == 0 || k == 0 || m.dim() != n * k {
        return Err(Error::DimMismatch {
            left: m.dim(),
            right: n * k,
        });
    }
    Ok(())
}

/// Swaps the outer (`M_n`) row and column indices, keeping the inner (`M_k`)
/// ones: `W[(α,a),(β,b)] = M[(β,a),(α,b)]`.
pub fn block_transpose(m: &DenseMatrix, n: usize, k: usize) -> Result<DenseMatrix> {
    check_split(m, n, k)?;
    Ok(DenseMatrix::from_fn(n * k, |r, c| {
        let (alpha, a) = (r / k, r % k);
        let (beta, b) = (c / k, c % k);
        m[(beta * k + a, alpha * k + b)]
    }))
}

pub fn is_biunitary(m: &DenseMatrix, n: usize, k: usize, tol: &Tolerance) -> Result<bool> {
    let bt = block_transpose(m, n, k)?;
    Ok(classify(m, tol).unitary && classify(&bt, tol).unitary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{ad, ZERO};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn spec(o: &[usize]) -> FourierSpec {
        FourierSpec::new(o.to_vec()).unwrap()
    }

    #[test]
    fn fourier_two() {
        let s = 1.0 / 2f64.sqrt();
        let expected = DenseMatrix::new(2, vec![c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]).unwrap();
        assert!(fourier(2).unwrap().matrix().approx_eq(&expected, 1e-15));
        assert!((fourier(4).unwrap().matrix()[(1, 1)] - c(0.0, 0.5)).norm() < 1e-15);
        for n in 2..=12 {
            assert!(is_hadamard(fourier(n).unwrap().matrix(), &tol()));
        }
        assert_eq!(fourier(1), Err(Error::OrderOutOfRange(1)));
        assert_eq!(fourier(65), Err(Error::OrderOutOfRange(65)));
    }

    #[test]
    fn fourier_tensor_cases() {
        assert_eq!(fourier_tensor(&spec(&[2, 2])).dim(), 4);
        let w = fourier_tensor(&spec(&[2, 3]));
        assert_eq!(w.dim(), 6);
        assert!(is_hadamard(w.matrix(), &tol()));
        assert_eq!(fourier_tensor(&spec(&[2])), fourier(2).unwrap());
    }

    #[test]
    fn spec_validation() {
        assert!(FourierSpec::new(vec![]).is_err());
        assert_eq!(FourierSpec::new(vec![1, 2]), Err(Error::OrderOutOfRange(1)));
        assert!(matches!(FourierSpec::new(vec![8, 9]), Err(Error::OrderTooLarge { order: 72, .. })));
        let s: FourierSpec = "2, 3".parse().unwrap();
        assert_eq!(s.orders(), &[2, 3]);
        assert_eq!(s.to_string(), "2,3");
        assert!("2,x".parse::<FourierSpec>().is_err());
    }

    #[test]
    fn diag_and_sigma_examples() {
        assert!(gen_diag(2, 1).unwrap().approx_eq(&DenseMatrix::from_diagonal(&[ONE, -ONE]), 1e-15));
        assert_eq!(gen_diag(5, 0).unwrap(), DenseMatrix::identity(5));
        let d42 = DenseMatrix::from_diagonal(&[ONE, -ONE, ONE, -ONE]);
        assert!(gen_diag(4, 2).unwrap().approx_eq(&d42, 1e-15));
        assert!(gen_diag(4, 4).unwrap().approx_eq(&DenseMatrix::identity(4), 1e-15));
        assert_eq!(gen_diag(4, 5), Err(Error::IndexOutOfRange { index: 5, order: 4 }));

        assert_eq!(gen_sigma(2, 1).unwrap(), DenseMatrix::permutation(&[1, 0]));
        assert_eq!(gen_sigma(4, 4).unwrap(), DenseMatrix::identity(4));
        let s31 = gen_sigma(3, 1).unwrap();
        assert_eq!(gen_sigma(3, 2).unwrap(), &s31 * &s31);
        assert!(gen_sigma(3, 4).is_err());
    }

    #[test]
    fn vector_generators() {
        let s = spec(&[2, 2]);
        let zero = GroupElement::new(vec![0, 0]);
        assert!(gen_diag_vec(&s, &zero).unwrap().approx_eq(&DenseMatrix::identity(4), 1e-15));
        let r = GroupElement::new(vec![1, 0]);
        let expected = tensor(&gen_sigma(2, 1).unwrap(), &DenseMatrix::identity(2));
        assert_eq!(gen_sigma_vec(&s, &r).unwrap(), expected);
        assert!(gen_diag_vec(&s, &GroupElement::new(vec![1])).is_err());

        let s = spec(&[2, 3]);
        let w = fourier_tensor(&s);
        let r = GroupElement::new(vec![1, 2]);
        let lhs = ad(w.matrix(), &gen_diag_vec(&s, &r).unwrap(), &tol()).unwrap();
        assert!(lhs.approx_eq(&gen_sigma_vec(&s, &r).unwrap(), 1e-12));
        let d = gen_diag_vec(&s, &r).unwrap();
        assert!(DenseMatrix::from_diagonal(&diag_vec_entries(s.orders(), r.coords())).approx_eq(&d, 1e-15));
    }

    #[test]
    fn d_u_and_u1_for_f2() {
        let f2 = fourier(2).unwrap();
        let d = d_u(&f2);
        assert!(d.approx_eq(&DenseMatrix::from_diagonal(&[ONE, ONE, ONE, -ONE]), 1e-15));
        assert!((d[(3, 3)] + ONE).norm() < 1e-15);

        let u = u1(&f2);
        let f = f2.matrix();
        let second = f * &DenseMatrix::from_diagonal(&[ONE, -ONE]);
        let expected = DenseMatrix::from_fn(4, |r, cc| {
            if r / 2 != cc / 2 {
                ZERO
            } else if r < 2 {
                f[(r, cc)]
            } else {
                second[(r - 2, cc - 2)]
            }
        });
        assert!(u.approx_eq(&expected, 1e-15));
        assert!(is_unitary(&u, 1e-12));

        // U₁ = (E₁₁⊗I + E₂₂⊗σ)·(I⊗F₂)
        let p = &tensor(&DenseMatrix::unit(2, 0, 0), &DenseMatrix::identity(2))
            + &tensor(&DenseMatrix::unit(2, 1, 1), &gen_sigma(2, 1).unwrap());
        let rhs = &p * &tensor(&DenseMatrix::identity(2), f);
        assert!(u.approx_eq(&rhs, 1e-15));
    }

    #[test]
    fn u1_blocks_are_inverse_shifts() {
        // block i of U₁ for U = F_n is σ_{n,n-i}·F_n
        for n in 2..=7 {
            let p = vertex_permutation(&spec(&[n]));
            let expected = DenseMatrix::from_fn(n * n, |r, cc| {
                if r / n == cc / n && cc % n == (r % n + n - r / n) % n {
                    ONE
                } else {
                    ZERO
                }
            });
            assert!(p.approx_eq(&expected, 1e-12), "n = {n}");
        }
    }

    #[test]
    fn check_sim_examples() {
        let f2 = fourier(2).unwrap();
        let swapped = HadamardMatrix::try_new(f2.matrix() * &gen_sigma(2, 1).unwrap(), &tol()).unwrap();
        let w = check_sim(&f2, &swapped, &tol()).unwrap().unwrap();
        assert_eq!(w.perm, vec![1, 0]);
        assert!(w.phases.iter().all(|z| (z - ONE).norm() < 1e-12));

        let twisted = f2.left_phase(&[ONE, c(0.0, 1.0)]);
        assert!(check_sim(&f2, &twisted, &tol()).unwrap().is_none());

        let flipped = f2.left_phase(&[ONE, -ONE]);
        let w = check_sim(&flipped, &f2, &tol()).unwrap().unwrap();
        // recombine: V = U·P·D
        let pd = &DenseMatrix::permutation(&w.perm) * &DenseMatrix::from_diagonal(&w.phases);
        assert!((flipped.matrix() * &pd).approx_eq(f2.matrix(), 1e-12));
        assert!(check_sim(&f2, &flipped, &tol()).unwrap().is_some());

        let f3 = fourier(3).unwrap();
        assert!(matches!(check_sim(&f2, &f3, &tol()), Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn decompose_examples() {
        let s = spec(&[2]);
        let form = DpwForm::new(s.clone(), vec![1, 0], vec![ONE, c(0.0, 1.0)], &tol()).unwrap();
        let back = decompose_dpw(&form.realize(), &s, &tol()).unwrap();
        assert_eq!(back.perm(), &[1, 0]);
        assert!((back.phases()[1] - c(0.0, 1.0)).norm() < 1e-12);

        let s = spec(&[2, 3]);
        let w = decompose_dpw(&fourier_tensor(&s), &s, &tol()).unwrap();
        assert_eq!(w.perm(), &[0, 1, 2, 3, 4, 5]);
        assert!(w.phases().iter().all(|z| (z - ONE).norm() < 1e-12));

        // F₂* = F₂, so X·W* = I
        let f2 = fourier(2).unwrap();
        let f2_adj = HadamardMatrix::try_new(f2.matrix().adjoint(), &tol()).unwrap();
        let d = decompose_dpw(&f2_adj, &spec(&[2]), &tol()).unwrap();
        assert_eq!(d.perm(), &[0, 1]);

        // F₃* is not D·P·F₃
        let f3_adj = HadamardMatrix::try_new(fourier(3).unwrap().matrix().adjoint(), &tol()).unwrap();
        let d = decompose_dpw(&f3_adj, &spec(&[3]), &tol()).unwrap();
        assert_eq!(d.perm(), &[0, 2, 1]);
        let h = fourier_tensor(&spec(&[2, 2]));
        assert_eq!(decompose_dpw(&h, &spec(&[4]), &tol()), Err(Error::NotDpwForm));
    }

    #[test]
    fn dpw_validation() {
        let s = spec(&[2]);
        assert!(DpwForm::new(s.clone(), vec![0, 0], vec![ONE, ONE], &tol()).is_err());
        assert!(DpwForm::new(s.clone(), vec![0, 1], vec![ONE, c(2.0, 0.0)], &tol()).is_err());
        assert!(DpwForm::new(s, vec![0, 1, 2], vec![ONE, ONE], &tol()).is_err());
    }

    #[test]
    fn conjugacy_examples() {
        let s = spec(&[2]);
        let f2 = fourier(2).unwrap();
        let twisted = f2.left_phase(&[ONE, c(0.0, 1.0)]);
        assert!(are_conjugate(&f2, &twisted, &s, &tol()).unwrap());
        let permuted = DpwForm::new(s.clone(), vec![1, 0], vec![ONE, c(0.0, 1.0)], &tol())
            .unwrap()
            .realize();
        assert!(!are_conjugate(&f2, &permuted, &s, &tol()).unwrap());
        assert!(are_conjugate(&permuted, &permuted, &s, &tol()).unwrap());
    }

    #[test]
    fn block_transpose_cases() {
        assert!(is_biunitary(&DenseMatrix::identity(4), 2, 2, &tol()).unwrap());
        let m = DenseMatrix::from_fn(6, |i, j| c(i as f64, (3 * j) as f64));
        let bt = block_transpose(&m, 2, 3).unwrap();
        assert_eq!(block_transpose(&bt, 2, 3).unwrap(), m);
        assert!(block_transpose(&m, 2, 2).is_err());
        // swap on C²⊗C² is unitary but its block-transpose is not
        let swap = DenseMatrix::permutation(&[0, 2, 1, 3]);
        assert!(!is_biunitary(&swap, 2, 2, &tol()).unwrap());
    }
}
