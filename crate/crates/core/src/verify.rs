//! Self-check suite over the generator identities, the vertex permutation,
//! spin and Γ commuting squares, and relative commutant dimensions.
//!
//! Output is a list of [`CheckLine`]s whose text does not depend on timing
//! or on the number of worker threads.

use rayon::prelude::*;

use crate::algebra::{gamma_square, spin_square};
use crate::error::Result;
use crate::group::{GroupElement, GroupStructure};
use crate::hadamard::{
    d_u, decompose_dpw, fourier, fourier_tensor, gen_diag, gen_diag_vec, gen_sigma, gen_sigma_vec, is_block_diagonal,
    u1, vertex_permutation, FourierSpec, MAX_ORDER,
};
use crate::invariants::{random_conjugate_pair, sample_rng};
use crate::matrix::{ad, classify, tensor, DenseMatrix, Tolerance};

/// Tolerance on the max-abs error of every identity.
pub const IDENTITY_TOL: f64 = 1e-10;

pub const TENSOR_SPECS: [&[usize]; 4] = [&[2, 3], &[2, 2, 2], &[3, 3], &[2, 4]];

pub const SPIN_ORDERS: std::ops::RangeInclusive<usize> = 2..=6;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub max_order: usize,
    pub gamma_orders: Vec<usize>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            max_order: 12,
            gamma_orders: vec![2, 3, 4],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub name: &'static str,
    pub detail: String,
    pub pass: bool,
}

impl std::fmt::Display for CheckLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{}: {} {}", self.name, self.detail, verdict)
    }
}

fn error_line(name: &'static str, err: f64) -> CheckLine {
    CheckLine {
        name,
        detail: format!("max err {err:.1e}"),
        pass: err <= IDENTITY_TOL,
    }
}

fn failed(name: &'static str, e: crate::Error) -> CheckLine {
    CheckLine {
        name,
        detail: format!("error: {e}"),
        pass: false,
    }
}

fn max_of(errs: impl IntoIterator<Item = f64>) -> f64 {
    errs.into_iter().fold(0.0, f64::max)
}

fn collect_max(parts: Vec<Result<f64>>) -> Result<f64> {
    parts.into_iter().try_fold(0.0_f64, |acc, r| r.map(|e| acc.max(e)))
}

/// `𝒟_{n,1}F_n = F_nσ_{n,n−1}` and `σ_{n,1}F_n = F_n𝒟_{n,1}`.
fn diag_shift(n: usize) -> Result<f64> {
    let f = fourier(n)?.into_matrix();
    let d = gen_diag(n, 1)?;
    let s1 = gen_sigma(n, 1)?;
    let s_back = gen_sigma(n, n - 1)?;
    Ok(max_of([
        (&d * &f).max_abs_diff(&(&f * &s_back)),
        (&s1 * &f).max_abs_diff(&(&f * &d)),
    ]))
}

/// `Ad_F(𝒟_{n,k}) = σ_{n,k}` and `Ad_{F*}(𝒟_{n,k}) = σ_{n,n−k}`.
fn fourier_conjugation(n: usize, tol: &Tolerance) -> Result<f64> {
    let f = fourier(n)?.into_matrix();
    let fs = f.adjoint();
    let mut err: f64 = 0.0;
    for k in 0..n {
        let d = gen_diag(n, k)?;
        err = err
            .max(ad(&f, &d, tol)?.max_abs_diff(&gen_sigma(n, k)?))
            .max(ad(&fs, &d, tol)?.max_abs_diff(&gen_sigma(n, n - k)?));
    }
    Ok(err)
}

fn complement(spec: &FourierSpec, r: &GroupElement) -> GroupElement {
    GroupElement::new(spec.orders().iter().zip(r.coords()).map(|(&n, &k)| n - k).collect())
}

/// `Ad_W(𝒟_r⃗) = σ_r⃗` and `Ad_{W*}(𝒟_r⃗) = σ_{n⃗−r⃗}` over every `r⃗`.
fn tensor_conjugation(spec: &FourierSpec, tol: &Tolerance) -> Result<f64> {
    let w = fourier_tensor(spec).into_matrix();
    let ws = w.adjoint();
    let mut err: f64 = 0.0;
    for r in GroupStructure::from(spec).elements() {
        let d = gen_diag_vec(spec, &r)?;
        err = err
            .max(ad(&w, &d, tol)?.max_abs_diff(&gen_sigma_vec(spec, &r)?))
            .max(ad(&ws, &d, tol)?.max_abs_diff(&gen_sigma_vec(spec, &complement(spec, &r))?));
    }
    Ok(err)
}

/// Mixed-radix digits of `i` in spec order (last factor fastest).
fn digits(spec: &FourierSpec, mut i: usize) -> GroupElement {
    let mut coords = vec![0; spec.orders().len()];
    for (slot, &n) in coords.iter_mut().zip(spec.orders()).rev() {
        *slot = i % n;
        i /= n;
    }
    GroupElement::new(coords)
}

/// Compares `(I⊗W)·D_W` with `P·(I⊗W)` for `P = Σᵢ E_ii ⊗ σ_{n⃗−ī}`, and
/// checks that the computed vertex permutation is a block-diagonal
/// permutation equal to that `P`.
fn vertex_permutation_error(spec: &FourierSpec, tol: &Tolerance) -> Result<(f64, bool)> {
    let w = fourier_tensor(spec);
    let n = w.dim();
    let embedded = tensor(&DenseMatrix::identity(n), w.matrix());
    let mut p = DenseMatrix::zeros(n * n);
    for i in 0..n {
        let block = gen_sigma_vec(spec, &complement(spec, &digits(spec, i)))?;
        for a in 0..n {
            for b in 0..n {
                p[(i * n + a, i * n + b)] = block[(a, b)];
            }
        }
    }
    let lhs = &embedded * &d_u(&w);
    let computed = vertex_permutation(spec);
    let err = max_of([
        lhs.max_abs_diff(&(&p * &embedded)),
        u1(&w).max_abs_diff(&lhs),
        computed.max_abs_diff(&p),
    ]);
    let shape = classify(&computed, tol).permutation && is_block_diagonal(&computed, n, tol.eps_entry);
    Ok((err, shape))
}

/// `decompose_dpw(realize(form)) = form` on seeded random forms.
fn dpw_round_trip(spec: &FourierSpec, tol: &Tolerance) -> Result<f64> {
    let mut err: f64 = 0.0;
    for sample in 0..4 {
        let mut rng = sample_rng(spec.order() as u64, sample);
        let (x, _) = random_conjugate_pair(spec, &mut rng);
        let form = decompose_dpw(&x, spec, tol)?;
        let again = decompose_dpw(&form.realize(), spec, tol)?;
        if again.perm() != form.perm() {
            return Ok(f64::INFINITY);
        }
        let phase_err = max_of(form.phases().iter().zip(again.phases()).map(|(a, b)| (a - b).norm()));
        err = err.max(phase_err).max(form.realize().matrix().max_abs_diff(x.matrix()));
    }
    Ok(err)
}

fn specs() -> Vec<FourierSpec> {
    TENSOR_SPECS
        .iter()
        .map(|o| FourierSpec::new(o.to_vec()).expect("fixed specs are valid"))
        .collect()
}

fn identity_lines(config: &VerifyConfig, tol: &Tolerance) -> Vec<CheckLine> {
    let orders: Vec<usize> = (2..=config.max_order).collect();
    let specs = specs();
    let mut lines = Vec::new();

    let shift: Vec<Result<f64>> = orders.par_iter().map(|&n| diag_shift(n)).collect();
    lines.push(collect_max(shift).map_or_else(|e| failed("fourier-diag-shift", e), |e| error_line("fourier-diag-shift", e)));

    let conj: Vec<Result<f64>> = orders.par_iter().map(|&n| fourier_conjugation(n, tol)).collect();
    lines.push(collect_max(conj).map_or_else(|e| failed("fourier-conjugation", e), |e| error_line("fourier-conjugation", e)));

    let tensors: Vec<Result<f64>> = specs.par_iter().map(|s| tensor_conjugation(s, tol)).collect();
    lines.push(collect_max(tensors).map_or_else(|e| failed("tensor-conjugation", e), |e| error_line("tensor-conjugation", e)));

    let vertex: Vec<Result<(f64, bool)>> = specs.par_iter().map(|s| vertex_permutation_error(s, tol)).collect();
    lines.push(match vertex.into_iter().collect::<Result<Vec<_>>>() {
        Ok(parts) => {
            let err = max_of(parts.iter().map(|p| p.0));
            let shape = parts.iter().all(|p| p.1);
            CheckLine {
                name: "vertex-permutation",
                detail: format!(
                    "max err {err:.1e}, {}",
                    if shape { "block-diagonal permutation" } else { "not a block-diagonal permutation" }
                ),
                pass: err <= IDENTITY_TOL && shape,
            }
        }
        Err(e) => failed("vertex-permutation", e),
    });

    let dpw: Vec<Result<f64>> = specs.par_iter().map(|s| dpw_round_trip(s, tol)).collect();
    lines.push(collect_max(dpw).map_or_else(|e| failed("dpw-round-trip", e), |e| error_line("dpw-round-trip", e)));
    lines
}

fn spin_line(tol: &Tolerance) -> CheckLine {
    let results: Vec<Result<bool>> = SPIN_ORDERS
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&n| {
            let spec = FourierSpec::new(vec![n])?;
            let (dpw, _) = random_conjugate_pair(&spec, &mut sample_rng(n as u64, 0));
            let f = fourier(n)?;
            Ok(spin_square(f.matrix(), tol)?.holds() && spin_square(dpw.matrix(), tol)?.holds())
        })
        .collect();
    match results.into_iter().collect::<Result<Vec<_>>>() {
        Ok(passes) => {
            let failing: Vec<String> = SPIN_ORDERS
                .zip(&passes)
                .filter(|(_, &p)| !p)
                .map(|(n, _)| n.to_string())
                .collect();
            CheckLine {
                name: "spin-squares",
                detail: if failing.is_empty() {
                    format!("F_N and D·P·F_N for N={}..{}", SPIN_ORDERS.start(), SPIN_ORDERS.end())
                } else {
                    format!("failing N={}", failing.join(","))
                },
                pass: failing.is_empty(),
            }
        }
        Err(e) => failed("spin-squares", e),
    }
}

fn gamma_lines(config: &VerifyConfig, tol: &Tolerance) -> Vec<CheckLine> {
    let results: Vec<Result<(usize, crate::algebra::GammaSquare)>> = config
        .gamma_orders
        .par_iter()
        .map(|&n| {
            let spec = FourierSpec::new(vec![n])?;
            Ok((n, gamma_square(&fourier(n)?, &spec, tol)?))
        })
        .collect();
    let squares = match results.into_iter().collect::<Result<Vec<_>>>() {
        Ok(s) => s,
        Err(e) => return vec![failed("gamma-squares", e.clone()), failed("relative-commutant", e)],
    };
    let parts: Vec<String> = squares
        .iter()
        .map(|(n, g)| {
            let c = if g.square.commuting { "commuting" } else { "not commuting" };
            match g.square.nondegenerate {
                Some(true) => format!("N={n} {c} nondegenerate"),
                Some(false) => format!("N={n} {c} degenerate"),
                None => format!("N={n} {c} (nondegeneracy skipped)"),
            }
        })
        .collect();
    let dims: Vec<String> = squares.iter().map(|(_, g)| g.relcomm_dim.to_string()).collect();
    vec![
        CheckLine {
            name: "gamma-squares",
            detail: parts.join(", "),
            pass: squares.iter().all(|(_, g)| g.square.holds()),
        },
        CheckLine {
            name: "relative-commutant",
            detail: format!("dims {}", dims.join(",")),
            pass: squares.iter().all(|(n, g)| g.relcomm_dim == *n),
        },
    ]
}

/// Runs the whole suite. Orders above [`MAX_ORDER`] are rejected up front.
pub fn run_suite(config: &VerifyConfig, tol: &Tolerance) -> Result<Vec<CheckLine>> {
    if !(2..=MAX_ORDER).contains(&config.max_order) {
        return Err(crate::Error::OrderOutOfRange(config.max_order));
    }
    for &n in &config.gamma_orders {
        if !(2..=MAX_ORDER).contains(&n) {
            return Err(crate::Error::OrderOutOfRange(n));
        }
    }
    let mut lines = identity_lines(config, tol);
    lines.push(spin_line(tol));
    if !config.gamma_orders.is_empty() {
        lines.extend(gamma_lines(config, tol));
    }
    Ok(lines)
}
