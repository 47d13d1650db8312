//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library's span, kernel, or entropy routines.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};

use hadinv::group::GroupElement;
use hadinv::{DenseMatrix, C64};
use rand::Rng;

pub const ORACLE_EPS: f64 = 1e-8;

/// `F_n` straight from the definition.
pub fn fourier_oracle(n: usize) -> DenseMatrix {
    let s = 1.0 / (n as f64).sqrt();
    DenseMatrix::from_fn(n, |j, k| C64::from_polar(s, TAU * ((j * k) % n) as f64 / n as f64))
}

/// Reduced row echelon form by Gauss-Jordan with partial pivoting; returns
/// the pivot columns.
fn rref(rows: &mut [Vec<C64>], eps: f64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let (best, mag) = (r..rows.len())
            .map(|i| (i, rows[i][c].norm()))
            .fold((r, -1.0), |a, b| if b.1 > a.1 { b } else { a });
        if mag <= eps {
            continue;
        }
        rows.swap(r, best);
        let p = rows[r][c];
        for x in rows[r].iter_mut() {
            *x /= p;
        }
        for i in 0..rows.len() {
            if i != r {
                let f = rows[i][c];
                if f.norm() > 0.0 {
                    let pivot_row = rows[r].clone();
                    for (x, v) in rows[i].iter_mut().zip(pivot_row) {
                        *x -= f * v;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Null space of the matrix whose columns are `cols` (each of equal length).
fn null_space(cols: &[Vec<C64>], eps: f64) -> Vec<Vec<C64>> {
    let m = cols[0].len();
    let n = cols.len();
    let mut rows: Vec<Vec<C64>> = (0..m).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect();
    let pivots = rref(&mut rows, eps);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![C64::new(0.0, 0.0); n];
            x[f] = C64::new(1.0, 0.0);
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -rows[r][f];
            }
            x
        })
        .collect()
}

fn rank1(u: &DenseMatrix, i: usize) -> DenseMatrix {
    let n = u.dim();
    DenseMatrix::from_fn(n, |a, b| u[(a, i)] * u[(b, i)].conj())
}

/// A basis (not orthonormal) of `Ad_U(Δ_N) ∩ Ad_V(Δ_N)` from the null space
/// of `[uᵢuᵢ* | −vⱼvⱼ*]`.
pub fn intersection_oracle(u: &DenseMatrix, v: &DenseMatrix) -> Vec<DenseMatrix> {
    let n = u.dim();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|i| rank1(u, i).entries().to_vec()).collect();
    cols.extend((0..n).map(|j| rank1(v, j).entries().iter().map(|z| -z).collect::<Vec<_>>()));
    null_space(&cols, ORACLE_EPS)
        .into_iter()
        .map(|x| {
            let mut m = DenseMatrix::zeros(n);
            for (i, &c) in x.iter().take(n).enumerate() {
                m = &m + &rank1(u, i).scale(c);
            }
            m
        })
        .collect()
}

/// `dim ((𝒜ᵁⱽ)' ∩ Δ_N)`: a diagonal commutes with `x` iff it is constant on
/// the connected components of the support graph of `x`.
pub fn relcomm_oracle(meet: &[DenseMatrix]) -> usize {
    let n = meet[0].dim();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        if p[i] != i {
            let r = find(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    for x in meet {
        for i in 0..n {
            for j in 0..n {
                if x[(i, j)].norm() > ORACLE_EPS {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).count()
}

/// `(1/N)·Σ η(|(U*V)_ij|²)` with `η(t) = −t ln t`.
pub fn entropy_oracle(u: &DenseMatrix, v: &DenseMatrix) -> f64 {
    let n = u.dim();
    let mut h = 0.0;
    for i in 0..n {
        for j in 0..n {
            let z: C64 = (0..n).map(|k| u[(k, i)].conj() * v[(k, j)]).sum();
            let t = z.norm_sqr();
            if t > 0.0 {
                h -= t * t.ln();
            }
        }
    }
    h / n as f64
}

pub fn is_closed(orders: &[usize], set: &BTreeSet<GroupElement>) -> bool {
    let zero = GroupElement::new(vec![0; orders.len()]);
    set.contains(&zero)
        && set.iter().all(|a| {
            set.iter().all(|b| {
                let s: Vec<usize> = a
                    .coords()
                    .iter()
                    .zip(b.coords())
                    .zip(orders)
                    .map(|((x, y), n)| (x + y) % n)
                    .collect();
                set.contains(&GroupElement::new(s))
            })
        })
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    C64::new(r * (TAU * u2).cos(), r * (TAU * u2).sin()) * (0.5f64).sqrt()
}

/// Haar-distributed unitary: Gram-Schmidt on a complex Ginibre matrix.
pub fn haar_unitary(n: usize, rng: &mut impl Rng) -> DenseMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::new();
    while cols.len() < n {
        let mut v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
        for q in &cols {
            let d: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(q) {
                *x -= d * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    DenseMatrix::from_fn(n, |i, j| cols[j][i])
}

pub fn random_diagonal_unitary(n: usize, rng: &mut impl Rng) -> DenseMatrix {
    let d: Vec<C64> = (0..n).map(|_| C64::from_polar(1.0, rng.gen_range(-PI..PI))).collect();
    DenseMatrix::from_diagonal(&d)
}
