//! Merlini–Gruber duality and the fractal product code slices.

use std::collections::BTreeMap;
use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use super::exact::brute_force_log_z;
use super::{constraint_group, symmetry_group, ConstraintGroup, Interaction, IsingModel};
use crate::carpet::CarpetGraph;
use crate::error::{Error, Result};
use crate::product::Fpc;

/// Dual model with the bookkeeping needed to compare partition functions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualSystem {
    pub dual_model: IsingModel,
    /// Sum of `K*` over interactions outside every constraint. These have an
    /// empty dual support and contribute a constant factor `e^{constant}`.
    pub constant: f64,
    /// Dual support of every original interaction.
    pub phi: Vec<Vec<usize>>,
    /// Dual interaction index of every original interaction, or `None` for
    /// the constant part.
    pub phi_index: Vec<Option<usize>>,
    pub num_spins: usize,
    pub num_dual_spins: usize,
    pub n_s: usize,
    pub n_s_star: usize,
    /// Set when the constraint group is trivial and the dual has no spins.
    pub trivial: bool,
    #[serde(default)]
    pub hypercubes: usize,
}

impl DualSystem {
    /// `ln` of `√2^{|Λ|−|Λ*|+N_S−N_S*} Π_B √sinh 2K_B` for the couplings of `m`.
    pub fn log_prefactor(&self, m: &IsingModel) -> f64 {
        let exponent = self.num_spins as f64 - self.num_dual_spins as f64 + self.n_s as f64
            - self.n_s_star as f64;
        0.5 * LN_2 * exponent
            + m.interactions
                .iter()
                .map(|i| 0.5 * ln_sinh(2.0 * i.k))
                .sum::<f64>()
    }
}

fn ln_sinh(x: f64) -> f64 {
    x + (-(-2.0 * x).exp()).ln_1p() - LN_2
}

/// `K*` with `e^{−2K*} = tanh K`.
fn dual_coupling(k: f64) -> f64 {
    let t = (-2.0 * k).exp();
    -0.5 * ((-t).ln_1p() - t.ln_1p())
}

/// One dual spin per generator; interaction `j` maps to the generators that
/// contain it. Interactions with equal dual supports merge by adding `K*`.
pub fn merlini_gruber_dual(m: &IsingModel, generators: &ConstraintGroup) -> Result<DualSystem> {
    for (index, i) in m.interactions.iter().enumerate() {
        if i.k <= 0.0 {
            return Err(Error::NonPositiveCoupling {
                index,
                value: i.k,
            });
        }
    }
    if generators.num_interactions != m.num_interactions() {
        return Err(Error::DimensionMismatch(format!(
            "constraints over {} interactions, model has {}",
            generators.num_interactions,
            m.num_interactions()
        )));
    }
    let mut phi = vec![Vec::new(); m.num_interactions()];
    for (g, members) in generators.generators.iter().enumerate() {
        for &j in members {
            phi[j].push(g);
        }
    }
    let mut index: BTreeMap<&[usize], usize> = BTreeMap::new();
    let mut dual_ints: Vec<Interaction> = Vec::new();
    let mut phi_index = Vec::with_capacity(phi.len());
    let mut constant = 0.0;
    for (j, support) in phi.iter().enumerate() {
        let ks = dual_coupling(m.interactions[j].k);
        if support.is_empty() {
            constant += ks;
            phi_index.push(None);
            continue;
        }
        let d = *index.entry(support).or_insert_with(|| {
            dual_ints.push(Interaction {
                support: support.clone(),
                k: 0.0,
            });
            dual_ints.len() - 1
        });
        dual_ints[d].k += ks;
        phi_index.push(Some(d));
    }
    let num_dual_spins = generators.len();
    let dual_model = IsingModel::new(num_dual_spins, dual_ints)?;
    Ok(DualSystem {
        n_s: symmetry_group(m).n_s(),
        n_s_star: symmetry_group(&dual_model).n_s(),
        dual_model,
        constant,
        phi,
        phi_index,
        num_spins: m.spins,
        num_dual_spins,
        trivial: generators.rank() == 0,
        hypercubes: generators.hypercubes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityCheck {
    pub log_lhs: f64,
    pub log_rhs: f64,
    pub relative_error: f64,
    /// Constraint group was trivial; the dual side is the prefactor times
    /// the constant term alone.
    pub trivial: bool,
}

/// Both sides of the duality relation using the kernel generating set.
pub fn duality_identity_check(m: &IsingModel) -> Result<DualityCheck> {
    duality_identity_check_with(m, &constraint_group(m))
}

pub fn duality_identity_check_with(
    m: &IsingModel,
    generators: &ConstraintGroup,
) -> Result<DualityCheck> {
    let dual = merlini_gruber_dual(m, generators)?;
    let log_lhs = brute_force_log_z(m, 1.0)?;
    let log_rhs = dual.log_prefactor(m) + dual.constant + brute_force_log_z(&dual.dual_model, 1.0)?;
    Ok(DualityCheck {
        log_lhs,
        log_rhs,
        relative_error: (log_rhs - log_lhs).exp_m1().abs(),
        trivial: dual.trivial,
    })
}

/// Constraints of the Z sector of FPC as product cells: one per hypercube
/// (a column of `∂_4`), then one per hole and for the outer boundary, each
/// the boundary cycle tensored with every top dual cell. Every cube then
/// lies in exactly two generators.
pub fn fpc_z_constraints(fpc: &Fpc) -> Result<ConstraintGroup> {
    let p = &fpc.product;
    let d4 = p
        .complex
        .boundary(4)
        .ok_or_else(|| Error::NotAProduct("product has no degree 4".into()))?;
    let mut generators = d4.columns();
    let hypercubes = generators.len();
    let top_dual = p.right().dim(2);
    let cycles = fpc
        .graph
        .exterior_plaquettes
        .iter()
        .cloned()
        .chain(std::iter::once(fpc.graph.outer_boundary()));
    for cycle in cycles {
        let mut g: Vec<usize> = cycle
            .iter()
            .flat_map(|&e| (0..top_dual).map(move |w| (e, w)))
            .map(|(e, w)| p.index(3, 1, e, w).expect("cube index"))
            .collect();
        g.sort_unstable();
        generators.push(g);
    }
    Ok(ConstraintGroup {
        num_interactions: p.complex.dim(3),
        generators,
        hypercubes,
    })
}

/// Restricts a dual of the FPC Z sector to the hypercubes `p ⊗ w` for a
/// fixed plaquette `p` and every vertex `w`. Spins of the result are the
/// carpet vertices.
pub fn carpet_slice_extract(dual: &DualSystem, fpc: &Fpc, plaquette: usize) -> Result<IsingModel> {
    let p = &fpc.product;
    if dual.hypercubes != p.complex.dim(4) || dual.hypercubes == 0 {
        return Err(Error::SliceNotFound(
            "dual spins are not labelled by hypercubes".into(),
        ));
    }
    let s = p.summand(4, 2).ok_or_else(|| Error::SliceNotFound("no top summand".into()))?;
    if plaquette >= s.left_dim {
        return Err(Error::SliceNotFound(format!(
            "plaquette {plaquette} of {}",
            s.left_dim
        )));
    }
    let start = s.offset + plaquette * s.right_dim;
    let slice = start..start + s.right_dim;
    let ints = dual
        .dual_model
        .interactions
        .iter()
        .filter(|i| i.support.iter().all(|d| slice.contains(d)))
        .map(|i| Interaction {
            support: i.support.iter().map(|d| d - start).collect(),
            k: i.k,
        })
        .collect();
    IsingModel::new(s.right_dim, ints)
}

/// The slice is the nearest-neighbour model on `g`: identical edge sets
/// under the vertex labelling, and equal couplings.
pub fn slice_matches_graph(slice: &IsingModel, g: &CarpetGraph) -> bool {
    let mut edges: Vec<Vec<usize>> = g
        .edges
        .iter()
        .map(|&[a, b]| vec![a.min(b), a.max(b)])
        .collect();
    let mut supports: Vec<Vec<usize>> = slice.interactions.iter().map(|i| i.support.clone()).collect();
    edges.sort();
    supports.sort();
    let k0 = slice.interactions.first().map_or(0.0, |i| i.k);
    slice.spins == g.vertices.len()
        && edges == supports
        && slice.interactions.iter().all(|i| (i.k - k0).abs() <= 1e-12 * k0)
}

#[cfg(test)]
mod tests {
    use super::super::tests::chain;
    use super::super::{sector_model, Sector};
    use super::*;
    use crate::carpet::CarpetSpec;
    use crate::css::code_from_complex;
    use crate::lattice::LatticeGraph;

    #[test]
    fn dual_coupling_relation() {
        for k in [1e-3, 0.3, 1.0, 5.0, 30.0] {
            let ks = dual_coupling(k);
            assert!(((-2.0 * ks).exp() - k.tanh()).abs() <= 1e-12 * k.tanh(), "{k}");
        }
        assert!((ln_sinh(0.7) - 0.7f64.sinh().ln()).abs() < 1e-14);
    }

    #[test]
    fn periodic_chain_dual() {
        let k = 0.3;
        let m = chain(4, k, true);
        let d = merlini_gruber_dual(&m, &constraint_group(&m)).unwrap();
        assert_eq!(d.num_dual_spins, 1);
        assert_eq!(d.dual_model.interactions.len(), 1);
        let i = &d.dual_model.interactions[0];
        assert_eq!(i.support, vec![0]);
        assert!((i.k + 0.5 * k.tanh().powi(4).ln()).abs() < 1e-12);
        assert_eq!(d.phi, vec![vec![0]; 4]);
        let c = duality_identity_check(&m).unwrap();
        assert!(c.relative_error <= 1e-9, "{c:?}");
    }

    #[test]
    fn identity_on_small_models() {
        let mut models = vec![
            chain(6, 0.7, false),
            chain(9, 0.2, true),
            IsingModel::from_graph(&LatticeGraph::square(2, true), 0.4).unwrap(),
            IsingModel::from_graph(&LatticeGraph::square(3, true), 0.4).unwrap(),
            IsingModel::from_graph(&LatticeGraph::square(4, false), 0.9).unwrap(),
        ];
        let plaquettes = IsingModel::new(
            6,
            vec![
                Interaction { support: vec![0, 1, 2], k: 0.5 },
                Interaction { support: vec![2, 3, 4], k: 0.8 },
                Interaction { support: vec![0, 1, 3, 4], k: 0.3 },
                Interaction { support: vec![5], k: 1.1 },
            ],
        )
        .unwrap();
        models.push(plaquettes);
        for m in &models {
            let c = duality_identity_check(m).unwrap();
            assert!(c.relative_error <= 1e-9, "{m:?}: {c:?}");
        }
    }

    #[test]
    fn identity_with_redundant_generators() {
        let m = IsingModel::from_graph(&LatticeGraph::square(3, true), 0.35).unwrap();
        let mut g = constraint_group(&m);
        let extra: Vec<usize> = {
            let mut v: Vec<usize> = g.generators[0].iter().chain(&g.generators[1]).copied().collect();
            v.sort_unstable();
            let mut out: Vec<usize> = Vec::new();
            for x in v {
                if out.last() == Some(&x) {
                    out.pop();
                } else {
                    out.push(x);
                }
            }
            out
        };
        g.generators.push(extra);
        let c = duality_identity_check_with(&m, &g).unwrap();
        assert!(c.relative_error <= 1e-9, "{c:?}");
    }

    #[test]
    fn single_bond_is_flagged_trivial() {
        let m = IsingModel::new(2, vec![Interaction { support: vec![0, 1], k: 0.9 }]).unwrap();
        let c = duality_identity_check(&m).unwrap();
        assert!(c.trivial);
        assert!(c.relative_error <= 1e-12, "{c:?}");
    }

    #[test]
    fn zero_coupling_is_rejected() {
        let m = chain(4, 0.0, true);
        assert!(matches!(
            merlini_gruber_dual(&m, &constraint_group(&m)),
            Err(Error::NonPositiveCoupling { index: 0, .. })
        ));
    }

    fn fpc_z(l: u32) -> (Fpc, IsingModel) {
        let f = Fpc::build(&CarpetSpec::new(3, 1, l).unwrap()).unwrap();
        let code = code_from_complex(&f.middle(), "fpc").unwrap();
        let m = sector_model(&code, Sector::Z, 1.0).unwrap();
        (f, m)
    }

    #[test]
    fn fpc_z_geometric_constraints() {
        for l in [0, 1] {
            let (f, m) = fpc_z(l);
            let g = fpc_z_constraints(&f).unwrap();
            // Each generator cancels and together they span the kernel.
            let checked = ConstraintGroup::from_generators(&m, g.generators.clone()).unwrap();
            assert_eq!(checked.rank(), constraint_group(&m).len());
            assert_eq!(g.len(), f.product.complex.dim(4) + f.graph.exterior_plaquettes.len() + 1);
            let d = merlini_gruber_dual(&m, &g).unwrap();
            assert!(d.dual_model.is_two_body(), "level {l}");
            assert_eq!(d.constant, 0.0);
            assert_eq!(d.n_s_star, 1);
            assert_eq!(symmetry_group(&d.dual_model).generators.vectors()[0].len(), d.num_dual_spins);
        }
    }

    #[test]
    fn kernel_dual_of_level_zero_satisfies_structure() {
        let (_, m) = fpc_z(0);
        let d = merlini_gruber_dual(&m, &constraint_group(&m)).unwrap();
        assert_eq!(d.num_dual_spins, m.num_interactions() - m.support_matrix().rank());
        assert!(carpet_slice_extract(&d, &fpc_z(0).0, 0).is_err());
    }

    #[test]
    fn slices_are_carpet_ising_models() {
        for (l, spins, bonds) in [(0, 4, 4), (1, 16, 24)] {
            let (f, m) = fpc_z(l);
            let d = merlini_gruber_dual(&m, &fpc_z_constraints(&f).unwrap()).unwrap();
            for p in 0..f.graph.interior_plaquettes.len() {
                let s = carpet_slice_extract(&d, &f, p).unwrap();
                assert_eq!((s.spins, s.num_interactions()), (spins, bonds));
                assert!(slice_matches_graph(&s, &f.graph));
                assert!((s.interactions[0].k - dual_coupling(1.0)).abs() < 1e-12);
            }
            assert!(carpet_slice_extract(&d, &f, f.graph.interior_plaquettes.len()).is_err());
        }
    }
}
