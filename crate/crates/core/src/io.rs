//! JSON wire formats.
//!
//! - matrix: `{"dim": N, "entries": [[re, im], …]}`, row-major, exactly `N²` pairs
//! - D·P·W form: `{"spec": [n1, …], "perm": [p0, …], "phases": [[re, im], …]}`
//! - algebra: `{"ambient_dim": N, "basis": [matrix, …]}`
//! - subgroup: `{"orders": […], "members": [[r1, …], …]}`

use std::collections::BTreeSet;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::AlgebraBasis;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupStructure, SubgroupSet};
use crate::hadamard::{DpwForm, FourierSpec};
use crate::matrix::{DenseMatrix, Tolerance, C64};

fn pair(z: &C64) -> [f64; 2] {
    [z.re, z.im]
}

fn unpair(p: &[f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixRepr {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for DenseMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            dim: self.dim(),
            entries: self.entries().iter().map(pair).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DenseMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MatrixRepr::deserialize(d)?;
        DenseMatrix::new(r.dim, r.entries.iter().map(unpair).collect()).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DpwRepr {
    spec: FourierSpec,
    perm: Vec<usize>,
    phases: Vec<[f64; 2]>,
}

impl Serialize for DpwForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DpwRepr {
            spec: self.spec().clone(),
            perm: self.perm().to_vec(),
            phases: self.phases().iter().map(pair).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DpwForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DpwRepr::deserialize(d)?;
        DpwForm::new(r.spec, r.perm, r.phases.iter().map(unpair).collect(), &Tolerance::default())
            .map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraRepr {
    ambient_dim: usize,
    basis: Vec<DenseMatrix>,
}

impl Serialize for AlgebraBasis {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AlgebraRepr {
            ambient_dim: self.ambient_dim(),
            basis: self.basis().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraBasis {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = AlgebraRepr::deserialize(d)?;
        AlgebraBasis::try_new(r.ambient_dim, r.basis, &Tolerance::default()).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubgroupRepr {
    orders: Vec<usize>,
    members: Vec<GroupElement>,
}

impl Serialize for SubgroupSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubgroupRepr {
            orders: self.parent().orders().to_vec(),
            members: self.members().iter().cloned().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SubgroupSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SubgroupRepr::deserialize(d)?;
        let parent = GroupStructure::new(r.orders).map_err(D::Error::custom)?;
        let members: BTreeSet<GroupElement> = r.members.into_iter().collect();
        SubgroupSet::new(parent, members).map_err(D::Error::custom)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable")
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))
}

/// Reads either a matrix or a D·P·W form and returns the dense matrix.
pub fn matrix_from_json(text: &str) -> Result<DenseMatrix> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
    if value.get("perm").is_some() {
        let form: DpwForm = serde_json::from_value(value).map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(form.realize().into_matrix())
    } else {
        serde_json::from_value(value).map_err(|e| Error::InvalidInput(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::fourier;
    use crate::matrix::ONE;
    use proptest::prelude::*;

    #[test]
    fn matrix_format() {
        let f2 = fourier(2).unwrap().into_matrix();
        let text = to_json(&f2);
        assert!(text.starts_with("{\"dim\":2,\"entries\":[["));
        let back: DenseMatrix = from_json(&text).unwrap();
        assert_eq!(back, f2);
        assert!(from_json::<DenseMatrix>(r#"{"dim":2,"entries":[[1,0],[0,0],[0,0]]}"#).is_err());
        assert!(from_json::<DenseMatrix>(r#"{"dim":1,"entries":[[1,0]],"extra":1}"#).is_err());
    }

    #[test]
    fn dpw_format() {
        let spec = FourierSpec::new(vec![2]).unwrap();
        let form = DpwForm::new(spec, vec![1, 0], vec![ONE, C64::new(0.0, 1.0)], &Tolerance::default()).unwrap();
        let text = to_json(&form);
        assert_eq!(text, r#"{"spec":[2],"perm":[1,0],"phases":[[1.0,0.0],[0.0,1.0]]}"#);
        assert_eq!(from_json::<DpwForm>(&text).unwrap(), form);
        assert_eq!(matrix_from_json(&text).unwrap(), form.realize().into_matrix());
        assert!(from_json::<DpwForm>(r#"{"spec":[2],"perm":[0,0],"phases":[[1,0],[1,0]]}"#).is_err());
    }

    #[test]
    fn subgroup_and_algebra_formats() {
        let text = r#"{"orders":[4],"members":[[0],[2]]}"#;
        let h: SubgroupSet = from_json(text).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(to_json(&h), text);
        assert!(from_json::<SubgroupSet>(r#"{"orders":[4],"members":[[0],[1]]}"#).is_err());

        let d = AlgebraBasis::diagonal(2);
        let back: AlgebraBasis = from_json(&to_json(&d)).unwrap();
        assert_eq!(back.dim(), 2);
    }

    proptest! {
        #[test]
        fn matrix_json_round_trip(v in proptest::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 9)) {
            let m = DenseMatrix::new(3, v.into_iter().map(|(a, b)| C64::new(a, b)).collect()).unwrap();
            let back: DenseMatrix = from_json(&to_json(&m)).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
