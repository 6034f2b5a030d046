//! Homological products of chain complexes and the fractal product codes.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::carpet::{closed_form_counts, CarpetGraph, CarpetSpec};
use crate::complex::{dualize, toric_complex, ChainComplex};
use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BitVec};

/// The block `C_i ⊗ D_{j-i}` inside `(C ⊗ D)_j`. Its basis element
/// `a ⊗ b` sits at `offset + a · right_dim + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub left_degree: usize,
    pub right_degree: usize,
    pub offset: usize,
    pub left_dim: usize,
    pub right_dim: usize,
}

impl Summand {
    pub fn len(&self) -> usize {
        self.left_dim * self.right_dim
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.len()
    }
}

/// `C ⊗ D` with the block layout of every degree. Summands within a degree
/// are ordered by ascending left degree.
#[derive(Clone, Debug)]
pub struct ProductComplex {
    pub complex: ChainComplex,
    left: ChainComplex,
    right: ChainComplex,
    summands: Vec<Vec<Summand>>,
}

impl ProductComplex {
    pub fn summands(&self, degree: usize) -> &[Summand] {
        &self.summands[degree]
    }

    pub fn summand(&self, degree: usize, left_degree: usize) -> Option<&Summand> {
        self.summands
            .get(degree)?
            .iter()
            .find(|s| s.left_degree == left_degree)
    }

    pub fn left(&self) -> &ChainComplex {
        &self.left
    }

    pub fn right(&self) -> &ChainComplex {
        &self.right
    }

    /// Index of `a ⊗ b` with `a ∈ C_{left_degree}`, `b ∈ D_{degree - left_degree}`.
    pub fn index(&self, degree: usize, left_degree: usize, a: usize, b: usize) -> Option<usize> {
        let s = self.summand(degree, left_degree)?;
        (a < s.left_dim && b < s.right_dim).then(|| s.offset + a * s.right_dim + b)
    }

    /// Inverse of [`index`](Self::index): `(left_degree, a, b)`.
    pub fn decode(&self, degree: usize, idx: usize) -> Option<(usize, usize, usize)> {
        let s = self.summands.get(degree)?.iter().find(|s| s.range().contains(&idx))?;
        let local = idx - s.offset;
        Some((s.left_degree, local / s.right_dim, local % s.right_dim))
    }

    /// `a ⊗ b` for chains `a ∈ C_i`, `b ∈ D_{j-i}`.
    pub fn tensor(&self, left_degree: usize, a: &BitVec, right_degree: usize, b: &BitVec) -> BitVec {
        let degree = left_degree + right_degree;
        let mut out = BitVec::zeros(self.complex.dim(degree));
        for i in a.ones() {
            for j in b.ones() {
                out.set(
                    self.index(degree, left_degree, i, j).expect("in range"),
                    true,
                );
            }
        }
        out
    }
}

fn layout(left: &[usize], right: &[usize]) -> Vec<Vec<Summand>> {
    let top = left.len() + right.len() - 2;
    (0..=top)
        .map(|j| {
            let mut offset = 0;
            (0..left.len())
                .filter(|&i| j >= i && j - i < right.len())
                .map(|i| {
                    let s = Summand {
                        left_degree: i,
                        right_degree: j - i,
                        offset,
                        left_dim: left[i],
                        right_dim: right[j - i],
                    };
                    offset += s.len();
                    s
                })
                .collect()
        })
        .collect()
}

/// The homological product, with `∂(a ⊗ b) = ∂a ⊗ b + a ⊗ ∂b`.
pub fn product(c: &ChainComplex, d: &ChainComplex) -> Result<ProductComplex> {
    let summands = layout(c.dims(), d.dims());
    let dims: Vec<usize> = summands
        .iter()
        .map(|ss| ss.iter().map(Summand::len).sum())
        .collect();
    let idx = |j: usize, i: usize, a: usize, b: usize| {
        let s = summands[j].iter().find(|s| s.left_degree == i).expect("summand");
        s.offset + a * s.right_dim + b
    };
    let left_cols: Vec<Vec<Vec<usize>>> = c.boundaries().iter().map(|m| m.columns()).collect();
    let right_cols: Vec<Vec<Vec<usize>>> = d.boundaries().iter().map(|m| m.columns()).collect();

    let mut boundaries = Vec::with_capacity(dims.len() - 1);
    for j in 1..dims.len() {
        let mut entries = Vec::new();
        for s in &summands[j] {
            let (i, k) = (s.left_degree, s.right_degree);
            for a in 0..s.left_dim {
                for b in 0..s.right_dim {
                    let col = s.offset + a * s.right_dim + b;
                    if i >= 1 {
                        for &r in &left_cols[i - 1][a] {
                            entries.push((idx(j - 1, i - 1, r, b), col));
                        }
                    }
                    if k >= 1 {
                        for &r in &right_cols[k - 1][b] {
                            entries.push((idx(j - 1, i, a, r), col));
                        }
                    }
                }
            }
        }
        boundaries.push(BinaryMatrix::from_entries(dims[j - 1], dims[j], entries)?);
    }
    Ok(ProductComplex {
        complex: ChainComplex::new(dims, boundaries)?,
        left: c.clone(),
        right: d.clone(),
        summands,
    })
}

/// The three middle spaces `(P_1, P_2, P_3)` with maps `(∂_2, ∂_3)`.
pub fn middle_code(p: &ProductComplex) -> Result<ChainComplex> {
    let c = &p.complex;
    if c.num_spaces() != 5 {
        return Err(Error::WrongLength {
            expected: 5,
            found: c.num_spaces(),
        });
    }
    ChainComplex::new(
        c.dims()[1..4].to_vec(),
        vec![
            c.boundary(2).expect("degree 2").clone(),
            c.boundary(3).expect("degree 3").clone(),
        ],
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KunnethCheck {
    pub degree: usize,
    pub lhs: usize,
    pub rhs: usize,
    pub equal: bool,
}

/// Compares `dim H_i(C ⊗ D)` from ranks with `Σ_{j+k=i} dim H_j(C) · dim H_k(D)`.
pub fn kunneth_check(c: &ChainComplex, d: &ChainComplex, i: usize) -> Result<KunnethCheck> {
    let p = product(c, d)?;
    kunneth_check_product(&p, c, d, i)
}

/// As [`kunneth_check`] on an already built product of `c` and `d`.
pub fn kunneth_check_product(
    p: &ProductComplex,
    c: &ChainComplex,
    d: &ChainComplex,
    i: usize,
) -> Result<KunnethCheck> {
    let lhs = p.complex.homology_dim(i)?;
    let mut rhs = 0;
    for j in 0..=c.top_degree().min(i) {
        if i - j <= d.top_degree() {
            rhs += c.homology_dim(j)? * d.homology_dim(i - j)?;
        }
    }
    Ok(KunnethCheck {
        degree: i,
        lhs,
        rhs,
        equal: lhs == rhs,
    })
}

/// A fractal product code FPC(b, c, l) = mid(𝒯 ⊗ 𝒯*) with its ingredients.
#[derive(Clone, Debug)]
pub struct Fpc {
    pub graph: CarpetGraph,
    pub toric: ChainComplex,
    pub dual: ChainComplex,
    pub product: ProductComplex,
}

impl Fpc {
    pub fn build(spec: &CarpetSpec) -> Result<Fpc> {
        let graph = CarpetGraph::build(spec);
        let toric = toric_complex(&graph);
        let dual = dualize(&toric)?;
        let product = product(&toric, &dual)?;
        Ok(Fpc {
            graph,
            toric,
            dual,
            product,
        })
    }

    pub fn middle(&self) -> ChainComplex {
        middle_code(&self.product).expect("five-space product")
    }

    /// The swapped product `𝒯* ⊗ 𝒯`.
    pub fn swapped(&self) -> Result<ProductComplex> {
        product(&self.dual, &self.toric)
    }
}

/// Qubit count |V|² + |E|² + |P_i|² and logical count 1 + |P_e|².
pub fn fpc_closed_form(spec: &CarpetSpec) -> (BigUint, BigUint) {
    let c = closed_form_counts(spec);
    let n = &c.vertices * &c.vertices + &c.edges * &c.edges + &c.interior * &c.interior;
    let k = BigUint::one() + &c.exterior * &c.exterior;
    (n, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(b: u32, c: u32, l: u32) -> CarpetSpec {
        CarpetSpec::new(b, c, l).unwrap()
    }

    #[test]
    fn dimensions_follow_direct_sum_formula() {
        let f = Fpc::build(&spec(3, 1, 1)).unwrap();
        let (l, r) = (f.toric.dims(), f.dual.dims());
        for j in 0..5 {
            let expected: usize = (0..3)
                .filter(|&i| j >= i && j - i < 3)
                .map(|i| l[i] * r[j - i])
                .sum();
            assert_eq!(f.product.complex.dim(j), expected);
        }
        assert_eq!(f.product.complex.dim(2), 896);
    }

    #[test]
    fn index_and_decode_are_inverse() {
        let f = Fpc::build(&spec(3, 1, 0)).unwrap();
        for j in 0..5 {
            for idx in 0..f.product.complex.dim(j) {
                let (i, a, b) = f.product.decode(j, idx).unwrap();
                assert_eq!(f.product.index(j, i, a, b), Some(idx));
            }
        }
    }

    #[test]
    fn level_zero_product_is_closed() {
        let f = Fpc::build(&spec(3, 1, 0)).unwrap();
        let c = &f.product.complex;
        assert!(c.boundary(2).unwrap().matmul(c.boundary(3).unwrap()).unwrap().is_zero());
        assert_eq!(c.dim(2), 33);
        let mid = f.middle();
        assert_eq!(mid.dims(), &[c.dim(1), 33, c.dim(3)]);
    }

    #[test]
    fn unit_of_product() {
        let f = Fpc::build(&spec(3, 1, 1)).unwrap();
        let p = product(&f.toric, &ChainComplex::point(2)).unwrap();
        assert_eq!(p.complex.dims(), &[16, 24, 8, 0, 0]);
        assert_eq!(p.complex.boundaries()[0], *f.toric.boundary(1).unwrap());
        for i in 0..5 {
            let k = kunneth_check(&f.toric, &ChainComplex::point(2), i).unwrap();
            assert!(k.equal);
            if i < 3 {
                assert_eq!(k.lhs, f.toric.homology_dim(i).unwrap());
            }
        }
        // Shifting by the unit puts the code in degrees 0..2, so its
        // parameters reappear in mid of a point ⊗ shifted product.
        let shifted = product(&ChainComplex::point(2), &f.toric).unwrap();
        assert_eq!(shifted.complex.dims()[..3], [16, 24, 8]);
    }

    #[test]
    fn kunneth_small() {
        let f = Fpc::build(&spec(3, 1, 0)).unwrap();
        for i in 0..5 {
            let k = kunneth_check_product(&f.product, &f.toric, &f.dual, i).unwrap();
            assert!(k.equal, "{k:?}");
        }
        let k0 = kunneth_check_product(&f.product, &f.toric, &f.dual, 0).unwrap();
        assert_eq!(k0.rhs, 0);
        let k2 = kunneth_check_product(&f.product, &f.toric, &f.dual, 2).unwrap();
        assert_eq!((k2.lhs, k2.rhs), (1, 1));
    }

    #[test]
    fn closed_form_parameters() {
        let (n, k) = fpc_closed_form(&spec(14, 12, 0));
        assert_eq!((n, k), (BigUint::from(33u32), BigUint::from(1u32)));
        let (n, _) = fpc_closed_form(&spec(14, 12, 1));
        assert_eq!(n, BigUint::from(37_856u32));
        let (n, k) = fpc_closed_form(&spec(3, 1, 1));
        assert_eq!((n, k), (BigUint::from(896u32), BigUint::from(2u32)));
        let (n, _) = fpc_closed_form(&spec(3, 1, 4));
        assert_eq!(n, BigUint::from(143_857_216u64));
    }
}
