//! The finite abelian group `G = ℤ_{n₁} × … × ℤ_{n_k}` indexing the diagonal
//! family `𝒟_r⃗`, and the subgroup `H ≤ G` attached to a pair of Hadamard
//! matrices.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hadamard::{diag_vec_entries, fourier_tensor, root_of_unity, FourierSpec, HadamardMatrix};
use crate::matrix::{is_diagonal, DenseMatrix, Tolerance, C64};

/// Cap on `|G|` for exhaustive subgroup enumeration and realization sweeps.
pub const ENUMERATION_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    coords: Vec<usize>,
}

impl GroupElement {
    pub fn new(coords: Vec<usize>) -> Self {
        Self { coords }
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupStructure {
    orders: Vec<usize>,
}

impl GroupStructure {
    pub fn new(orders: Vec<usize>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidInput("group needs at least one factor".into()));
        }
        if let Some(&bad) = orders.iter().find(|&&n| n < 2) {
            return Err(Error::OrderOutOfRange(bad));
        }
        Ok(Self { orders })
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn order(&self) -> usize {
        self.orders.iter().product()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::new(vec![0; self.orders.len()])
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.coords.len() == self.orders.len() && g.coords.iter().zip(&self.orders).all(|(r, n)| r < n)
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement::new(
            a.coords
                .iter()
                .zip(&b.coords)
                .zip(&self.orders)
                .map(|((x, y), n)| (x + y) % n)
                .collect(),
        )
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> Vec<GroupElement> {
        let mut out = vec![Vec::new()];
        for &n in &self.orders {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..n).map(move |r| {
                        let mut v = prefix.clone();
                        v.push(r);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(GroupElement::new).collect()
    }

    /// Subgroup generated by `gens`.
    pub fn closure<'a>(&self, gens: impl IntoIterator<Item = &'a GroupElement>) -> BTreeSet<GroupElement> {
        let mut set = BTreeSet::from([self.identity()]);
        let mut frontier = vec![self.identity()];
        let gens: Vec<&GroupElement> = gens.into_iter().collect();
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = self.add(&x, g);
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        set
    }
}

impl From<&FourierSpec> for GroupStructure {
    fn from(spec: &FourierSpec) -> Self {
        Self {
            orders: spec.orders().to_vec(),
        }
    }
}

/// A verified subgroup of its parent group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupSet {
    parent: GroupStructure,
    members: BTreeSet<GroupElement>,
}

impl SubgroupSet {
    pub fn new(parent: GroupStructure, members: BTreeSet<GroupElement>) -> Result<Self> {
        if !members.iter().all(|g| parent.contains(g)) {
            return Err(Error::InvalidInput("element outside the group".into()));
        }
        if !is_subgroup(&parent, &members) {
            return Err(Error::NotClosed {
                members: members.into_iter().collect(),
            });
        }
        debug_assert_eq!(parent.order() % members.len(), 0);
        Ok(Self { parent, members })
    }

    pub fn parent(&self) -> &GroupStructure {
        &self.parent
    }

    pub fn members(&self) -> &BTreeSet<GroupElement> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Identity present and closed under addition (finite, so inverses follow).
pub fn is_subgroup(g: &GroupStructure, s: &BTreeSet<GroupElement>) -> bool {
    s.contains(&g.identity()) && s.iter().all(|a| s.iter().all(|b| s.contains(&g.add(a, b))))
}

/// Every subgroup of `g`, sorted by size then members.
pub fn all_subgroups(g: &GroupStructure) -> Result<Vec<SubgroupSet>> {
    if g.order() > ENUMERATION_CAP {
        return Err(Error::OrderTooLarge {
            order: g.order(),
            cap: ENUMERATION_CAP,
        });
    }
    let elems = g.elements();
    let mut found: BTreeSet<BTreeSet<GroupElement>> = BTreeSet::from([g.closure([])]);
    let mut frontier: Vec<BTreeSet<GroupElement>> = found.iter().cloned().collect();
    // every subgroup is reached by adjoining one generator at a time
    while let Some(h) = frontier.pop() {
        for x in &elems {
            if h.contains(x) {
                continue;
            }
            let next = g.closure(h.iter().chain(std::iter::once(x)));
            if found.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    let mut out: Vec<SubgroupSet> = found
        .into_iter()
        .map(|members| SubgroupSet {
            parent: g.clone(),
            members,
        })
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.members.cmp(&b.members)));
    Ok(out)
}

/// `{r⃗ : V*·U·𝒟_r⃗·U*·V is diagonal}`, i.e. the `r⃗` with
/// `Ad_U(𝒟_r⃗) ∈ Ad_V(Δ_N)`, verified to be a subgroup.
pub fn extract_subgroup(
    u: &HadamardMatrix,
    v: &HadamardMatrix,
    g: &GroupStructure,
    tol: &Tolerance,
) -> Result<SubgroupSet> {
    let n = g.order();
    for d in [u.dim(), v.dim()] {
        if d != n {
            return Err(Error::DimMismatch { left: n, right: d });
        }
    }
    let m = &v.matrix().adjoint() * u.matrix();
    let m_adj = m.adjoint();
    let members: BTreeSet<GroupElement> = g
        .elements()
        .into_iter()
        .filter(|r| {
            let d = DenseMatrix::from_diagonal(&diag_vec_entries(g.orders(), r.coords()));
            is_diagonal(&(&(&m * &d) * &m_adj), tol.eps_entry)
        })
        .collect();
    SubgroupSet::new(g.clone(), members)
}

/// Every divisor vector `(m₁, …, m_k)` with `mᵢ | nᵢ`, lexicographic.
pub fn divisor_vectors(spec: &FourierSpec) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in spec.orders() {
        let divs: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
        out = out
            .into_iter()
            .flat_map(|prefix| {
                divs.iter().map(move |&d| {
                    let mut v = prefix.clone();
                    v.push(d);
                    v
                })
            })
            .collect();
    }
    out
}

/// Diagonal phases of order `n` whose shift-invariance subgroup in `ℤ_n` has
/// order `m`.
///
/// For `m ≥ 2` this is the staircase `ζ^{⌈(j+1)/l⌉}` with `l = n/m` and
/// `ζ = e^{2πi/m}`: the ratio `d_j·conj(d_{j+s})` is constant exactly when
/// `l | s`. The staircase is constant for `m = 1`, so that case uses the
/// chirp `e^{iπj²/n}`, whose ratio is non-constant for every nonzero shift.
pub fn staircase_phases(n: usize, m: usize) -> Vec<C64> {
    assert!(m >= 1 && n.is_multiple_of(m));
    if m == 1 {
        return (0..n)
            .map(|j| C64::from_polar(1.0, std::f64::consts::PI * (j * j % (2 * n)) as f64 / n as f64))
            .collect();
    }
    let l = n / m;
    (0..n).map(|j| root_of_unity(m, j / l + 1)).collect()
}

/// A pair `(W, D·W)` whose extracted subgroup has order `Π mᵢ`.
pub fn realize_subgroup(
    spec: &FourierSpec,
    divisors: &[usize],
    tol: &Tolerance,
) -> Result<(HadamardMatrix, HadamardMatrix)> {
    if divisors.len() != spec.orders().len() {
        return Err(Error::DimMismatch {
            left: spec.orders().len(),
            right: divisors.len(),
        });
    }
    for (&m, &n) in divisors.iter().zip(spec.orders()) {
        if m == 0 || n % m != 0 {
            return Err(Error::NotDivisor { divisor: m, order: n });
        }
    }
    let mut phases = vec![C64::new(1.0, 0.0)];
    for (&m, &n) in divisors.iter().zip(spec.orders()) {
        let factor = staircase_phases(n, m);
        phases = phases.iter().flat_map(|&a| factor.iter().map(move |&b| a * b)).collect();
    }
    let u = fourier_tensor(spec);
    let v = u.left_phase(&phases);
    let expected: usize = divisors.iter().product();
    let found = match extract_subgroup(&u, &v, &GroupStructure::from(spec), tol) {
        Ok(h) => h.len(),
        Err(Error::NotClosed { members }) => members.len(),
        Err(e) => return Err(e),
    };
    if found != expected {
        return Err(Error::RealizationFailed {
            divisors: divisors.to_vec(),
            expected,
            found,
        });
    }
    Ok((u, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::fourier;
    use crate::matrix::ONE;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn g(o: &[usize]) -> GroupStructure {
        GroupStructure::new(o.to_vec()).unwrap()
    }

    fn set(els: &[&[usize]]) -> BTreeSet<GroupElement> {
        els.iter().map(|e| GroupElement::new(e.to_vec())).collect()
    }

    #[test]
    fn enumeration() {
        let els: Vec<Vec<usize>> = g(&[2, 2]).elements().into_iter().map(|e| e.coords).collect();
        assert_eq!(els, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(g(&[2, 3]).elements().len(), 6);
        assert_eq!(g(&[4]).elements()[2].coords(), &[2]);
        assert!(GroupStructure::new(vec![1]).is_err());
    }

    #[test]
    fn subgroup_predicate() {
        assert!(is_subgroup(&g(&[4]), &set(&[&[0], &[2]])));
        assert!(!is_subgroup(&g(&[4]), &set(&[&[0], &[1]])));
        assert!(is_subgroup(&g(&[2, 3]), &set(&[&[0, 0]])));
        assert!(!is_subgroup(&g(&[4]), &set(&[&[2]])));
    }

    /// Independent oracle: test every subset of `G` for closure.
    fn brute_force_subgroup_count(gs: &GroupStructure) -> usize {
        let els = gs.elements();
        (0u32..1 << els.len())
            .filter(|mask| {
                let s: BTreeSet<GroupElement> = els
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, e)| e.clone())
                    .collect();
                is_subgroup(gs, &s)
            })
            .count()
    }

    #[test]
    fn subgroup_lattices() {
        let sizes = |o: &[usize]| -> Vec<usize> {
            all_subgroups(&g(o)).unwrap().iter().map(SubgroupSet::len).collect()
        };
        assert_eq!(sizes(&[4]), vec![1, 2, 4]);
        assert_eq!(sizes(&[2, 2]), vec![1, 2, 2, 2, 4]);
        assert_eq!(brute_force_subgroup_count(&g(&[2, 4])), 8);
        assert_eq!(sizes(&[2, 4]).len(), 8);
        for o in [&[2, 3][..], &[6], &[2, 2, 2], &[3, 3], &[4, 4], &[16]] {
            let gs = g(o);
            if gs.order() <= 12 {
                assert_eq!(all_subgroups(&gs).unwrap().len(), brute_force_subgroup_count(&gs), "{o:?}");
            }
            for h in all_subgroups(&gs).unwrap() {
                assert_eq!(gs.order() % h.len(), 0);
            }
        }
        assert!(matches!(all_subgroups(&g(&[3, 6])), Err(Error::OrderTooLarge { .. })));
    }

    #[test]
    fn extract_worked_examples() {
        let f4 = fourier(4).unwrap();
        let v = f4.left_phase(&[ONE, ONE, -ONE, -ONE]);
        let h = extract_subgroup(&f4, &v, &g(&[4]), &tol()).unwrap();
        assert_eq!(h.members(), &set(&[&[0], &[2]]));

        let f2 = fourier(2).unwrap();
        let v = f2.left_phase(&[ONE, C64::new(0.0, 1.0)]);
        let h = extract_subgroup(&f2, &v, &g(&[2]), &tol()).unwrap();
        assert_eq!(h.members(), &set(&[&[0]]));

        let v = f2.left_phase(&[ONE, -ONE]);
        let h = extract_subgroup(&f2, &v, &g(&[2]), &tol()).unwrap();
        assert_eq!(h.len(), 2);

        assert!(matches!(
            extract_subgroup(&f2, &f4, &g(&[2]), &tol()),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn staircase_for_four() {
        // m = 2 on ℤ₄: (ζ, ζ, ζ², ζ²) with ζ = -1
        let d = staircase_phases(4, 2);
        let expected = [-ONE, -ONE, ONE, ONE];
        for (a, b) in d.iter().zip(expected) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!(staircase_phases(5, 1).iter().all(|z| (z.norm() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn realization_orders() {
        let spec = FourierSpec::new(vec![4]).unwrap();
        let (u, v) = realize_subgroup(&spec, &[2], &tol()).unwrap();
        let h = extract_subgroup(&u, &v, &g(&[4]), &tol()).unwrap();
        assert_eq!(h.members(), &set(&[&[0], &[2]]));

        let spec = FourierSpec::new(vec![2, 2]).unwrap();
        let (u, v) = realize_subgroup(&spec, &[1, 1], &tol()).unwrap();
        assert_eq!(extract_subgroup(&u, &v, &g(&[2, 2]), &tol()).unwrap().len(), 1);

        // full divisors: V ~ U, H = G
        let (u, v) = realize_subgroup(&spec, &[2, 2], &tol()).unwrap();
        assert_eq!(extract_subgroup(&u, &v, &g(&[2, 2]), &tol()).unwrap().len(), 4);

        assert_eq!(
            realize_subgroup(&spec, &[3, 1], &tol()),
            Err(Error::NotDivisor { divisor: 3, order: 2 })
        );
        assert_eq!(divisor_vectors(&spec), vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]);
    }

    #[test]
    fn realization_every_divisor_up_to_sixteen() {
        for n in 2..=16 {
            let spec = FourierSpec::new(vec![n]).unwrap();
            for d in divisor_vectors(&spec) {
                realize_subgroup(&spec, &d, &tol()).unwrap_or_else(|e| panic!("n = {n}: {e}"));
            }
        }
    }
}
