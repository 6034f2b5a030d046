//! Generalized Ising models `Z = Σ_σ exp(Σ_B K_B σ_B)` with multi-spin
//! interactions, their symmetry and constraint groups, and the classical
//! sectors of CSS codes.

mod duality;
mod exact;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use duality::{
    carpet_slice_extract, duality_identity_check, duality_identity_check_with, fpc_z_constraints,
    merlini_gruber_dual, slice_matches_graph, DualSystem, DualityCheck,
};
pub use exact::{brute_force_log_z, brute_force_z, expectations, gks_check, GksCheck, SPIN_CAP};

use crate::css::CssCode;
use crate::error::{Error, Result};
use crate::gf2::{BasisSet, BinaryMatrix};
use crate::lattice::LatticeGraph;
use crate::product::ProductComplex;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interaction {
    pub support: Vec<usize>,
    pub k: f64,
}

/// Spins `0..spins` with ferromagnetic couplings `k ≥ 0` on distinct,
/// non-empty supports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModel")]
pub struct IsingModel {
    pub spins: usize,
    pub interactions: Vec<Interaction>,
}

#[derive(Deserialize)]
struct RawModel {
    spins: usize,
    interactions: Vec<Interaction>,
}

impl TryFrom<RawModel> for IsingModel {
    type Error = Error;

    fn try_from(raw: RawModel) -> Result<Self> {
        IsingModel::new(raw.spins, raw.interactions)
    }
}

impl IsingModel {
    pub fn new(spins: usize, mut interactions: Vec<Interaction>) -> Result<Self> {
        let mut seen = BTreeMap::new();
        for (i, int) in interactions.iter_mut().enumerate() {
            normalize(spins, i, int)?;
            if let Some(j) = seen.insert(int.support.clone(), i) {
                return Err(Error::InvalidModel(format!(
                    "interactions {j} and {i} share a support"
                )));
            }
        }
        Ok(IsingModel {
            spins,
            interactions,
        })
    }

    /// Like [`new`](Self::new), but repeated supports are combined by adding
    /// their couplings. Order of first appearance is kept.
    pub fn merged(spins: usize, interactions: Vec<Interaction>) -> Result<Self> {
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut out: Vec<Interaction> = Vec::new();
        for (i, mut int) in interactions.into_iter().enumerate() {
            normalize(spins, i, &mut int)?;
            match index.get(&int.support) {
                Some(&j) => out[j].k += int.k,
                None => {
                    index.insert(int.support.clone(), out.len());
                    out.push(int);
                }
            }
        }
        Ok(IsingModel {
            spins,
            interactions: out,
        })
    }

    /// Nearest-neighbour model with coupling `k` on every edge. Repeated
    /// edges are merged.
    pub fn from_graph(g: &LatticeGraph, k: f64) -> Result<Self> {
        let ints = g
            .edges
            .iter()
            .map(|&[a, b]| Interaction {
                support: vec![a, b],
                k,
            })
            .collect();
        Self::merged(g.vertices.len(), ints)
    }

    pub fn num_interactions(&self) -> usize {
        self.interactions.len()
    }

    pub fn scaled(&self, factor: f64) -> IsingModel {
        IsingModel {
            spins: self.spins,
            interactions: self
                .interactions
                .iter()
                .map(|i| Interaction {
                    support: i.support.clone(),
                    k: i.k * factor,
                })
                .collect(),
        }
    }

    /// Interactions × spins incidence matrix.
    pub fn support_matrix(&self) -> BinaryMatrix {
        let entries = self
            .interactions
            .iter()
            .enumerate()
            .flat_map(|(r, i)| i.support.iter().map(move |&s| (r, s)));
        BinaryMatrix::from_entries(self.interactions.len(), self.spins, entries)
            .expect("supports validated")
    }

    pub fn max_support(&self) -> usize {
        self.interactions.iter().map(|i| i.support.len()).max().unwrap_or(0)
    }

    pub fn is_two_body(&self) -> bool {
        self.interactions.iter().all(|i| i.support.len() == 2)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

fn normalize(spins: usize, index: usize, int: &mut Interaction) -> Result<()> {
    if !(int.k >= 0.0 && int.k.is_finite()) {
        return Err(Error::InvalidModel(format!(
            "interaction {index} has coupling {}",
            int.k
        )));
    }
    int.support.sort_unstable();
    let len = int.support.len();
    int.support.dedup();
    if int.support.len() != len {
        return Err(Error::InvalidModel(format!(
            "interaction {index} repeats a spin"
        )));
    }
    if int.support.is_empty() {
        return Err(Error::InvalidModel(format!("interaction {index} is empty")));
    }
    if let Some(&s) = int.support.last().filter(|&&s| s >= spins) {
        return Err(Error::InvalidModel(format!(
            "interaction {index} touches spin {s} of {spins}"
        )));
    }
    Ok(())
}

/// Model file: a model plus an optional constraint generating set, given as
/// lists of interaction indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    #[serde(flatten)]
    pub model: IsingModel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraints: Option<Vec<Vec<usize>>>,
}

/// Spin flips commuting with every interaction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryGroup {
    pub generators: BasisSet,
}

impl SymmetryGroup {
    /// `N_S`; the group has `2^{N_S}` elements.
    pub fn n_s(&self) -> usize {
        self.generators.len()
    }
}

/// Sets of interactions whose supports cancel. The generators need not be
/// independent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintGroup {
    pub num_interactions: usize,
    pub generators: Vec<Vec<usize>>,
    /// Number of leading generators that are product hypercubes, in product
    /// basis order. Zero for kernel bases.
    #[serde(default)]
    pub hypercubes: usize,
}

impl ConstraintGroup {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Validates a user-supplied generating set against `m`.
    pub fn from_generators(m: &IsingModel, generators: Vec<Vec<usize>>) -> Result<Self> {
        let support = m.support_matrix();
        for (i, g) in generators.iter().enumerate() {
            let mut acc = crate::gf2::BitVec::zeros(m.spins);
            for &j in g {
                if j >= m.num_interactions() {
                    return Err(Error::InvalidModel(format!(
                        "constraint {i} names interaction {j}"
                    )));
                }
                for &s in support.row(j) {
                    acc.flip(s);
                }
            }
            if !acc.is_zero() {
                return Err(Error::InvalidModel(format!(
                    "constraint {i} does not cancel"
                )));
            }
        }
        Ok(ConstraintGroup {
            num_interactions: m.num_interactions(),
            generators,
            hypercubes: 0,
        })
    }

    /// Dimension of the span of the generators.
    pub fn rank(&self) -> usize {
        let entries = self
            .generators
            .iter()
            .enumerate()
            .flat_map(|(r, g)| g.iter().map(move |&j| (r, j)));
        BinaryMatrix::from_entries_xor(self.generators.len(), self.num_interactions, entries)
            .expect("indices validated")
            .rank()
    }
}

pub fn symmetry_group(m: &IsingModel) -> SymmetryGroup {
    SymmetryGroup {
        generators: m.support_matrix().kernel_basis(),
    }
}

/// The kernel basis of the transposed support matrix.
pub fn constraint_group(m: &IsingModel) -> ConstraintGroup {
    ConstraintGroup {
        num_interactions: m.num_interactions(),
        generators: m.support_matrix().transpose().kernel_basis().vectors().to_vec(),
        hypercubes: 0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sector {
    X,
    Z,
}

/// Classical model of one stabilizer type: a spin per qubit and a unit
/// coupling `beta` per stabilizer row.
pub fn sector_model(code: &CssCode, sector: Sector, beta: f64) -> Result<IsingModel> {
    let m = match sector {
        Sector::X => &code.hx,
        Sector::Z => &code.hz,
    };
    let ints = (0..m.n_rows())
        .map(|r| Interaction {
            support: m.row(r).to_vec(),
            k: beta,
        })
        .collect();
    IsingModel::new(code.n, ints)
}

/// Qubit relabeling of `mid(C ⊗ D)` exchanging the two tensor factors
/// inside each middle summand. Needs square summands.
pub fn product_swap(p: &ProductComplex) -> Result<Vec<usize>> {
    let mut map = vec![0; p.complex.dim(2)];
    for s in p.summands(2) {
        if s.left_dim != s.right_dim {
            return Err(Error::NotAProduct(format!(
                "summand ({}, {}) is {}x{}",
                s.left_degree, s.right_degree, s.left_dim, s.right_dim
            )));
        }
        for a in 0..s.left_dim {
            for b in 0..s.right_dim {
                map[s.offset + a * s.right_dim + b] = s.offset + b * s.right_dim + a;
            }
        }
    }
    Ok(map)
}

/// Whether the X and Z sectors of `code = mid(p)` have the same interaction
/// supports once qubits are relabeled by [`product_swap`].
pub fn sectors_are_isomorphic(code: &CssCode, p: &ProductComplex) -> Result<bool> {
    let map = product_swap(p)?;
    if map.len() != code.n {
        return Err(Error::NotAProduct(format!(
            "code has {} qubits, product middle has {}",
            code.n,
            map.len()
        )));
    }
    let supports = |m: &BinaryMatrix, relabel: bool| {
        let mut v: Vec<Vec<usize>> = (0..m.n_rows())
            .map(|r| {
                let mut s: Vec<usize> = m
                    .row(r)
                    .iter()
                    .map(|&q| if relabel { map[q] } else { q })
                    .collect();
                s.sort_unstable();
                s
            })
            .collect();
        v.sort();
        v
    };
    Ok(supports(&code.hx, true) == supports(&code.hz, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carpet::CarpetSpec;
    use crate::css::code_from_complex;
    use crate::gf2::BitVec;
    use crate::product::Fpc;

    pub(crate) fn chain(n: usize, k: f64, periodic: bool) -> IsingModel {
        let mut ints: Vec<Interaction> = (0..n - 1)
            .map(|i| Interaction {
                support: vec![i, i + 1],
                k,
            })
            .collect();
        if periodic {
            ints.push(Interaction {
                support: vec![0, n - 1],
                k,
            });
        }
        IsingModel::new(n, ints).unwrap()
    }

    #[test]
    fn model_validation() {
        let bad = |s: Vec<usize>, k: f64| IsingModel::new(3, vec![Interaction { support: s, k }]);
        assert!(bad(vec![], 1.0).is_err());
        assert!(bad(vec![0, 3], 1.0).is_err());
        assert!(bad(vec![1, 1], 1.0).is_err());
        assert!(bad(vec![0, 1], -0.5).is_err());
        assert!(bad(vec![0, 1], f64::NAN).is_err());
        let dup = vec![
            Interaction { support: vec![0, 1], k: 1.0 },
            Interaction { support: vec![1, 0], k: 2.0 },
        ];
        assert!(IsingModel::new(3, dup.clone()).is_err());
        let m = IsingModel::merged(3, dup).unwrap();
        assert_eq!(m.interactions, vec![Interaction { support: vec![0, 1], k: 3.0 }]);
    }

    #[test]
    fn json_round_trip() {
        let m = chain(4, 0.5, true);
        let s = m.to_json().unwrap();
        assert_eq!(IsingModel::from_json(&s).unwrap(), m);
        let raw = r#"{"spins":2,"interactions":[{"support":[0,2],"k":1.0}]}"#;
        assert!(IsingModel::from_json(raw).is_err());
        let file: ModelFile = serde_json::from_str(
            r#"{"spins":2,"interactions":[{"support":[0,1],"k":1.0}],"constraints":[]}"#,
        )
        .unwrap();
        assert_eq!(file.constraints, Some(vec![]));
    }

    #[test]
    fn symmetry_groups() {
        assert_eq!(symmetry_group(&chain(4, 1.0, false)).n_s(), 1);
        let isolated = IsingModel::new(
            3,
            vec![Interaction { support: vec![0, 1], k: 1.0 }],
        )
        .unwrap();
        let g = symmetry_group(&isolated);
        assert_eq!(g.n_s(), 2);
        assert!(g.generators.vectors().contains(&vec![2]));
        for m in [chain(5, 1.0, true), isolated] {
            let sup = m.support_matrix();
            for v in symmetry_group(&m).generators.to_bitvecs() {
                assert!(sup.mul_vec(&v).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn constraint_groups() {
        let c = constraint_group(&chain(4, 1.0, true));
        assert_eq!(c.generators, vec![vec![0, 1, 2, 3]]);
        assert!(constraint_group(&chain(4, 1.0, false)).is_empty());
        let m = IsingModel::from_graph(&LatticeGraph::square(3, true), 1.0).unwrap();
        let c = constraint_group(&m);
        assert_eq!(c.len(), 18 - 8);
        let sup = m.support_matrix().transpose();
        for g in &c.generators {
            assert!(sup.mul_vec(&BitVec::from_indices(18, g)).unwrap().is_zero());
        }
        assert!(ConstraintGroup::from_generators(&m, vec![vec![0, 1]]).is_err());
    }

    fn fpc(l: u32) -> (Fpc, CssCode) {
        let f = Fpc::build(&CarpetSpec::new(3, 1, l).unwrap()).unwrap();
        let code = code_from_complex(&f.middle(), "fpc").unwrap();
        (f, code)
    }

    #[test]
    fn sector_models() {
        let (f, code) = fpc(0);
        let z = sector_model(&code, Sector::Z, 1.0).unwrap();
        assert_eq!((z.spins, z.num_interactions()), (33, f.product.complex.dim(3)));
        let toy = CssCode::new(
            BinaryMatrix::zeros(0, 2),
            BinaryMatrix::from_entries(1, 2, [(0, 0), (0, 1)]).unwrap(),
            "toy",
        )
        .unwrap();
        assert_eq!(sector_model(&toy, Sector::Z, 0.7).unwrap().num_interactions(), 1);
    }

    #[test]
    fn sectors_agree_under_swap() {
        for l in [0, 1] {
            let (f, code) = fpc(l);
            assert!(sectors_are_isomorphic(&code, &f.product).unwrap(), "level {l}");
        }
    }
}
