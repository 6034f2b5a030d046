//! F₂ chain complexes and the carpet toric code complex.

use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::carpet::CarpetGraph;
use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BitVec, Echelon};

/// Spaces `C_0 … C_d` with boundary maps `∂_i : C_i → C_{i-1}`.
///
/// `∂_0` and `∂_{d+1}` are zero maps and are never stored.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    dims: Vec<usize>,
    boundaries: Vec<BinaryMatrix>,
    labels: Option<Vec<Vec<String>>>,
    ranks: Vec<OnceLock<usize>>,
}

impl PartialEq for ChainComplex {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims && self.boundaries == other.boundaries
    }
}

/// JSON header written next to the exported boundary matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexHeader {
    pub space_dims: Vec<usize>,
    pub boundaries: Vec<String>,
}

impl ChainComplex {
    /// `boundaries[k]` is `∂_{k+1}`, of shape `dims[k] × dims[k+1]`.
    pub fn new(dims: Vec<usize>, boundaries: Vec<BinaryMatrix>) -> Result<Self> {
        if dims.is_empty() || boundaries.len() + 1 != dims.len() {
            return Err(Error::WrongLength {
                expected: boundaries.len() + 1,
                found: dims.len(),
            });
        }
        for (k, m) in boundaries.iter().enumerate() {
            if m.n_rows() != dims[k] || m.n_cols() != dims[k + 1] {
                return Err(Error::DimensionMismatch(format!(
                    "boundary {} is {}x{}, expected {}x{}",
                    k + 1,
                    m.n_rows(),
                    m.n_cols(),
                    dims[k],
                    dims[k + 1]
                )));
            }
        }
        let complex = ChainComplex {
            ranks: (0..boundaries.len()).map(|_| OnceLock::new()).collect(),
            dims,
            boundaries,
            labels: None,
        };
        complex.check_closed()?;
        Ok(complex)
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.dims.len()
            || labels.iter().zip(&self.dims).any(|(l, &d)| l.len() != d)
        {
            return Err(Error::DimensionMismatch(
                "labels must name every basis element".into(),
            ));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// The unit of the product: a single point in degree 0, padded with empty
    /// spaces up to `top`.
    pub fn point(top: usize) -> Self {
        let mut dims = vec![0; top + 1];
        dims[0] = 1;
        let boundaries = (0..top)
            .map(|k| BinaryMatrix::zeros(dims[k], dims[k + 1]))
            .collect();
        ChainComplex::new(dims, boundaries).expect("point complex is valid")
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn num_spaces(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims[i]
    }

    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    /// `∂_i` for `1 ≤ i ≤ d`; `None` for the implicit zero maps.
    pub fn boundary(&self, i: usize) -> Option<&BinaryMatrix> {
        if i == 0 {
            None
        } else {
            self.boundaries.get(i - 1)
        }
    }

    pub fn boundaries(&self) -> &[BinaryMatrix] {
        &self.boundaries
    }

    fn boundary_rank(&self, i: usize) -> usize {
        match self.boundary(i) {
            None => 0,
            Some(m) => *self.ranks[i - 1].get_or_init(|| m.rank()),
        }
    }

    /// Verifies `∂_i ∂_{i+1} = 0` for every consecutive pair.
    pub fn check_closed(&self) -> Result<()> {
        for k in 1..self.boundaries.len() {
            let prod = self.boundaries[k - 1].matmul(&self.boundaries[k])?;
            if !prod.is_zero() {
                return Err(Error::BoundaryNotClosed(k));
            }
        }
        Ok(())
    }

    fn check_degree(&self, i: usize) -> Result<()> {
        if i > self.top_degree() {
            return Err(Error::DegreeOutOfRange {
                degree: i,
                top: self.top_degree(),
            });
        }
        Ok(())
    }

    /// `dim ker ∂_i − rank ∂_{i+1}`.
    pub fn homology_dim(&self, i: usize) -> Result<usize> {
        self.check_degree(i)?;
        let kernel = self.dims[i] - self.boundary_rank(i);
        Ok(kernel - self.boundary_rank(i + 1))
    }

    /// `dim ker ∂_{i+1}ᵀ − rank ∂_iᵀ`, evaluated on the transposed maps.
    pub fn cohomology_dim(&self, i: usize) -> Result<usize> {
        self.check_degree(i)?;
        let coboundary_rank = |m: Option<&BinaryMatrix>| m.map_or(0, |m| m.transpose().rank());
        let kernel = self.dims[i] - coboundary_rank(self.boundary(i + 1));
        Ok(kernel - coboundary_rank(self.boundary(i)))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }

    /// Cycles of degree `i` representing a basis of `H_i`.
    pub fn homology_representatives(&self, i: usize) -> Result<Vec<BitVec>> {
        self.check_degree(i)?;
        let dim = self.dims[i];
        let mut span = Echelon::new(dim);
        if let Some(next) = self.boundary(i + 1) {
            for col in next.columns() {
                span.insert(BitVec::from_indices(dim, &col));
            }
        }
        let cycles: Vec<BitVec> = match self.boundary(i) {
            None => (0..dim).map(|j| BitVec::from_indices(dim, &[j])).collect(),
            Some(m) => m
                .kernel_basis()
                .vectors()
                .iter()
                .map(|v| BitVec::from_indices(dim, v))
                .collect(),
        };
        let mut reps = Vec::new();
        for z in cycles {
            if span.insert(z.clone()) {
                reps.push(z);
            }
        }
        Ok(reps)
    }

    /// Writes `<stem>.json` and one `<stem>.d<i>.txt` matrix per boundary.
    pub fn export(&self, dir: &Path, stem: &str) -> Result<ComplexHeader> {
        fs::create_dir_all(dir)?;
        let mut names = Vec::new();
        for (k, m) in self.boundaries.iter().enumerate() {
            let name = format!("{stem}.d{}.txt", k + 1);
            fs::write(dir.join(&name), m.to_text())?;
            names.push(name);
        }
        let header = ComplexHeader {
            space_dims: self.dims.clone(),
            boundaries: names,
        };
        fs::write(
            dir.join(format!("{stem}.json")),
            serde_json::to_string_pretty(&header)?,
        )?;
        Ok(header)
    }

    pub fn import(dir: &Path, stem: &str) -> Result<ChainComplex> {
        let header: ComplexHeader =
            serde_json::from_str(&fs::read_to_string(dir.join(format!("{stem}.json")))?)?;
        let boundaries = header
            .boundaries
            .iter()
            .map(|name| BinaryMatrix::from_text(&fs::read_to_string(dir.join(name))?))
            .collect::<Result<Vec<_>>>()?;
        ChainComplex::new(header.space_dims, boundaries)
    }
}

/// The surface code 𝒯 on a carpet graph: vertices, edges and interior
/// plaquettes in degrees 0, 1, 2.
pub fn toric_complex(g: &CarpetGraph) -> ChainComplex {
    let nv = g.vertices.len();
    let ne = g.edges.len();
    let np = g.interior_plaquettes.len();
    let d1 = BinaryMatrix::from_entries(
        nv,
        ne,
        g.edges
            .iter()
            .enumerate()
            .flat_map(|(e, &[a, b])| [(a, e), (b, e)]),
    )
    .expect("incidence entries are in range");
    let d2 = BinaryMatrix::from_entries(
        ne,
        np,
        g.interior_plaquettes
            .iter()
            .enumerate()
            .flat_map(|(p, edges)| edges.iter().map(move |&e| (e, p))),
    )
    .expect("plaquette entries are in range");
    let labels = vec![
        g.vertices.iter().map(|(x, y)| format!("v({x},{y})")).collect(),
        g.edges
            .iter()
            .map(|&[a, b]| {
                let ((x1, y1), (x2, y2)) = (g.vertices[a], g.vertices[b]);
                format!("e({x1},{y1})-({x2},{y2})")
            })
            .collect(),
        g.cells.iter().map(|(x, y)| format!("p({x},{y})")).collect(),
    ];
    ChainComplex::new(vec![nv, ne, np], vec![d1, d2])
        .expect("boundary of a plaquette is a cycle")
        .with_labels(labels)
        .expect("one label per cell")
}

/// Reverses a three-space complex: `C*_i = C_{2-i}`, `∂*_1 = ∂_2ᵀ`,
/// `∂*_2 = ∂_1ᵀ`.
pub fn dualize(c: &ChainComplex) -> Result<ChainComplex> {
    if c.num_spaces() != 3 {
        return Err(Error::WrongLength {
            expected: 3,
            found: c.num_spaces(),
        });
    }
    let dims = vec![c.dims[2], c.dims[1], c.dims[0]];
    let out = ChainComplex::new(
        dims,
        vec![c.boundaries[1].transpose(), c.boundaries[0].transpose()],
    )?;
    match &c.labels {
        Some(l) => out.with_labels(vec![l[2].clone(), l[1].clone(), l[0].clone()]),
        None => Ok(out),
    }
}
