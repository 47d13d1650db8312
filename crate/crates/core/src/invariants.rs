//! Pair invariants: intersection algebra dimension (generic span route and
//! subgroup route), Jones index `N²/|H|`, relative commutant, vertex-model
//! predicate, and the modified entropy with its upper bound.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{commutant, diag_conj_algebra, intersect_algebras, AlgebraBasis};
use crate::error::{Error, Result};
use crate::group::{divisor_vectors, extract_subgroup, realize_subgroup, GroupStructure, SubgroupSet, ENUMERATION_CAP};
use crate::hadamard::{are_conjugate, check_sim, DpwForm, FourierSpec, HadamardMatrix};
use crate::matrix::{is_unitary, DenseMatrix, Tolerance, C64};

pub mod flags {
    pub const IDENTICAL: &str = "identical";
    pub const EQUIVALENT: &str = "equivalent";
    pub const NOT_DPW_FORM: &str = "not-dpw-form";
    pub const NOT_CONJUGATE: &str = "not-conjugate";
    pub const SUBGROUP_NOT_CLOSED: &str = "subgroup-not-closed";
    pub const SUBGROUP_DIM_MISMATCH: &str = "subgroup-dimension-mismatch";
    pub const HYPOTHESES_UNVERIFIED: &str = "hypotheses-unverified";
}

/// `η(t) = −t ln t`, `η(0) = 0`.
pub fn eta(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::DomainError(t));
    }
    Ok(if t == 0.0 { 0.0 } else { -t * t.ln() })
}

/// `(1/N) Σ η(|(U*V)_{ij}|²)` in nats.
pub fn entropy_h(u: &DenseMatrix, v: &DenseMatrix, tol: &Tolerance) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    if !is_unitary(u, tol.eps_entry) || !is_unitary(v, tol.eps_entry) {
        return Err(Error::NonUnitary);
    }
    let n = u.dim();
    let m = &u.adjoint() * v;
    let weights: Vec<f64> = m.entries().iter().map(|z| z.norm_sqr().min(1.0)).collect();
    for i in 0..n {
        let row: f64 = (0..n).map(|j| weights[i * n + j]).sum();
        let col: f64 = (0..n).map(|j| weights[j * n + i]).sum();
        if (row - 1.0).abs() > 1e-9 || (col - 1.0).abs() > 1e-9 {
            return Err(Error::NonUnitary);
        }
    }
    let total = weights.iter().map(|&t| eta(t)).sum::<Result<f64>>()?;
    Ok(total / n as f64)
}

/// Exact rational `num/den` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0);
        let g = num_integer::gcd(num, den);
        Self {
            num: num / g,
            den: den / g,
        }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl std::fmt::Display for Ratio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub spec: FourierSpec,
    /// `U ≁ V`.
    pub distinct: bool,
    /// Same permutation in the `D·P·W` forms.
    pub conjugate: bool,
    #[serde(rename = "dimA")]
    pub dim_a: usize,
    pub subgroup: Option<SubgroupSet>,
    /// `N²/dimA`.
    pub index: Ratio,
    pub index_value: f64,
    /// `dim ((𝒜ᵁⱽ)' ∩ Δ_N)`.
    pub relcomm_dims: usize,
    pub vertex: bool,
    pub entropy_h: f64,
    /// `ln(N/dimA)`.
    pub entropy_upper: f64,
    /// Index and entropy bound are backed by the theorem hypotheses
    /// (distinct, conjugate, closed subgroup).
    pub certified: bool,
    pub flags: Vec<String>,
}

/// `Ad_U(Δ_N) ∩ Ad_V(Δ_N)` through the generic span intersection.
pub fn intersection_algebra(u: &DenseMatrix, v: &DenseMatrix, tol: &Tolerance) -> Result<AlgebraBasis> {
    intersect_algebras(&diag_conj_algebra(u, tol)?, &diag_conj_algebra(v, tol)?, tol)
}

pub fn pair_report(
    u: &HadamardMatrix,
    v: &HadamardMatrix,
    spec: &FourierSpec,
    tol: &Tolerance,
) -> Result<InvariantReport> {
    let n = spec.order();
    for d in [u.dim(), v.dim()] {
        if d != n {
            return Err(Error::DimMismatch { left: n, right: d });
        }
    }
    let mut flags: Vec<String> = Vec::new();
    if u.matrix().approx_eq(v.matrix(), tol.eps_entry) {
        flags.push(flags::IDENTICAL.into());
    }

    let distinct = check_sim(u, v, tol)?.is_none();
    if !distinct {
        flags.push(flags::EQUIVALENT.into());
    }
    let conjugate = match are_conjugate(u, v, spec, tol) {
        Ok(c) => c,
        Err(Error::NotDpwForm) => {
            flags.push(flags::NOT_DPW_FORM.into());
            false
        }
        Err(e) => return Err(e),
    };
    if !conjugate && !flags.iter().any(|f| f == flags::NOT_DPW_FORM) {
        flags.push(flags::NOT_CONJUGATE.into());
    }

    let meet = intersection_algebra(u.matrix(), v.matrix(), tol)?;
    let dim_a = meet.dim();
    let subgroup = match extract_subgroup(u, v, &GroupStructure::from(spec), tol) {
        Ok(h) => Some(h),
        Err(Error::NotClosed { .. }) => {
            flags.push(flags::SUBGROUP_NOT_CLOSED.into());
            None
        }
        Err(e) => return Err(e),
    };
    if let Some(h) = &subgroup {
        if h.len() != dim_a {
            // outside the conjugate setting the two routes need not agree
            if conjugate {
                return Err(Error::OracleMismatch {
                    generic: dim_a,
                    subgroup: h.len(),
                });
            }
            flags.push(flags::SUBGROUP_DIM_MISMATCH.into());
        }
    }

    let index = Ratio::new((n * n) as u64, dim_a as u64);
    let relcomm_dims = commutant(&meet, &AlgebraBasis::diagonal(n), tol)?.dim();
    let entropy_h = entropy_h(u.matrix(), v.matrix(), tol)?;
    let entropy_upper = (n as f64 / dim_a as f64).ln();
    let certified = distinct && conjugate && subgroup.is_some();
    if !certified {
        flags.push(flags::HYPOTHESES_UNVERIFIED.into());
    }
    Ok(InvariantReport {
        n,
        spec: spec.clone(),
        distinct,
        conjugate,
        dim_a,
        subgroup,
        index,
        index_value: index.value(),
        relcomm_dims,
        vertex: dim_a == 1,
        entropy_h,
        entropy_upper,
        certified,
        flags,
    })
}

/// One row per divisor vector: the realized pair's report, after checking
/// `dimA = Π mᵢ` and `index = N²/Π mᵢ`.
pub fn realization_sweep(spec: &FourierSpec, tol: &Tolerance) -> Result<Vec<(Vec<usize>, InvariantReport)>> {
    let n = spec.order();
    if n > ENUMERATION_CAP {
        return Err(Error::OrderTooLarge {
            order: n,
            cap: ENUMERATION_CAP,
        });
    }
    divisor_vectors(spec)
        .into_par_iter()
        .map(|divisors| {
            let (u, v) = realize_subgroup(spec, &divisors, tol)?;
            let report = pair_report(&u, &v, spec, tol)?;
            let expected: usize = divisors.iter().product();
            if report.dim_a != expected || report.index != Ratio::new((n * n) as u64, expected as u64) {
                return Err(Error::RealizationFailed {
                    divisors,
                    expected,
                    found: report.dim_a,
                });
            }
            Ok((divisors, report))
        })
        .collect()
}

fn random_phases(n: usize, rng: &mut impl Rng) -> Vec<C64> {
    (0..n)
        .map(|_| C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect()
}

/// `(D·P·W, D̃·P·W)` with i.i.d. uniform phases and a shared uniform
/// permutation.
pub fn random_conjugate_pair(spec: &FourierSpec, rng: &mut impl Rng) -> (HadamardMatrix, HadamardMatrix) {
    let n = spec.order();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let tol = Tolerance::default();
    let mk = |phases| {
        DpwForm::new(spec.clone(), perm.clone(), phases, &tol)
            .expect("valid by construction")
            .realize()
    };
    let u = mk(random_phases(n, rng));
    let v = mk(random_phases(n, rng));
    (u, v)
}

/// Per-sample generator: stream `index` of the ChaCha8 generator seeded with
/// `seed`, so rows do not depend on evaluation order.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// One randomized conjugate pair and the property checks run on it.
#[derive(Debug, Clone, Serialize)]
pub struct CampaignRow {
    pub sample: usize,
    pub report: InvariantReport,
    /// `ln(N/dimA) − h`.
    pub gap: f64,
    pub violations: Vec<String>,
}

pub fn campaign_row(spec: &FourierSpec, seed: u64, sample: usize, tol: &Tolerance) -> Result<CampaignRow> {
    let mut rng = sample_rng(seed, sample as u64);
    let (u, v) = random_conjugate_pair(spec, &mut rng);
    let n = spec.order();
    let mut violations = Vec::new();
    let report = pair_report(&u, &v, spec, tol)?;
    match &report.subgroup {
        Some(h) if h.len() == report.dim_a => {}
        Some(h) => violations.push(format!("|H| = {} but dimA = {}", h.len(), report.dim_a)),
        None => violations.push("extracted set is not a subgroup".into()),
    }
    let h = report.entropy_h;
    if h > report.entropy_upper + 1e-9 {
        violations.push(format!("h = {h} exceeds ln(N/dimA) = {}", report.entropy_upper));
    }
    if h < 0.0 || h > (n as f64).ln() + 1e-12 {
        violations.push(format!("h = {h} outside [0, ln N]"));
    }
    let h_rev = entropy_h(v.matrix(), u.matrix(), tol)?;
    if (h - h_rev).abs() > 1e-12 {
        violations.push(format!("asymmetric entropy: {h} vs {h_rev}"));
    }
    let d = random_phases(n, &mut rng);
    let h_shift = entropy_h(u.left_phase(&d).matrix(), v.left_phase(&d).matrix(), tol)?;
    if (h - h_shift).abs() > 1e-12 {
        violations.push(format!("left diagonal changes entropy: {h} vs {h_shift}"));
    }
    Ok(CampaignRow {
        sample,
        gap: report.entropy_upper - h,
        report,
        violations,
    })
}

/// `samples` randomized conjugate pairs, evaluated in parallel and returned
/// in sample order.
pub fn random_campaign(spec: &FourierSpec, samples: usize, seed: u64, tol: &Tolerance) -> Result<Vec<CampaignRow>> {
    (0..samples)
        .into_par_iter()
        .map(|i| campaign_row(spec, seed, i, tol))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::fourier;
    use crate::matrix::ONE;
    use std::f64::consts::LN_2;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn eta_values() {
        assert_eq!(eta(1.0).unwrap(), 0.0);
        assert_eq!(eta(0.0).unwrap(), 0.0);
        assert!((eta(0.5).unwrap() - LN_2 / 2.0).abs() < 1e-15);
        assert!(matches!(eta(-0.1), Err(Error::DomainError(_))));
        assert!(matches!(eta(1.5), Err(Error::DomainError(_))));
    }

    #[test]
    fn entropy_examples() {
        let f2 = fourier(2).unwrap();
        assert!(entropy_h(f2.matrix(), f2.matrix(), &tol()).unwrap().abs() < 1e-12);
        let v = f2.left_phase(&[ONE, C64::new(0.0, 1.0)]);
        assert!((entropy_h(f2.matrix(), v.matrix(), &tol()).unwrap() - LN_2).abs() < 1e-12);
        let f4 = fourier(4).unwrap();
        let v = f4.left_phase(&[ONE, ONE, -ONE, -ONE]);
        assert!((entropy_h(f4.matrix(), v.matrix(), &tol()).unwrap() - LN_2).abs() < 1e-12);

        let bad = DenseMatrix::from_diagonal(&[ONE, C64::new(0.5, 0.0)]);
        assert_eq!(entropy_h(&bad, f2.matrix(), &tol()), Err(Error::NonUnitary));
        assert!(matches!(
            entropy_h(f2.matrix(), f4.matrix(), &tol()),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn ratio_reduces() {
        assert_eq!(Ratio::new(16, 2), Ratio { num: 8, den: 1 });
        assert_eq!(Ratio::new(9, 6).to_string(), "3/2");
    }

    #[test]
    fn report_rejects_wrong_dims() {
        let spec = FourierSpec::new(vec![2]).unwrap();
        let f4 = fourier(4).unwrap();
        assert!(matches!(pair_report(&f4, &f4, &spec, &tol()), Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn identical_pair_is_flagged() {
        let spec = FourierSpec::new(vec![3]).unwrap();
        let f3 = fourier(3).unwrap();
        let r = pair_report(&f3, &f3, &spec, &tol()).unwrap();
        assert!(r.flags.iter().any(|f| f == flags::IDENTICAL));
        assert!(!r.distinct);
        assert!(!r.certified);
        assert_eq!(r.dim_a, 3);
        assert_eq!(r.index, Ratio::new(3, 1));
        assert!(r.entropy_h.abs() < 1e-12);
    }

    #[test]
    fn campaign_is_order_independent() {
        let spec = FourierSpec::new(vec![2, 2]).unwrap();
        let all = random_campaign(&spec, 6, 11, &tol()).unwrap();
        let single = campaign_row(&spec, 11, 4, &tol()).unwrap();
        assert_eq!(all[4].report, single.report);
        assert!(all.iter().all(|r| r.violations.is_empty()));
    }
}
