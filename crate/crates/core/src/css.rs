//! CSS stabilizer codes read off three-term chain complexes.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::gf2::{BasisSet, BinaryMatrix, BitVec, Echelon};
use crate::product::ProductComplex;

/// Rows of `hx` are X-stabilizer supports, rows of `hz` Z-stabilizer supports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssCode {
    pub n: usize,
    pub hx: BinaryMatrix,
    pub hz: BinaryMatrix,
    pub provenance: String,
}

impl CssCode {
    pub fn new(hx: BinaryMatrix, hz: BinaryMatrix, provenance: impl Into<String>) -> Result<Self> {
        if hx.n_cols() != hz.n_cols() {
            return Err(Error::DimensionMismatch(format!(
                "hx has {} columns, hz has {}",
                hx.n_cols(),
                hz.n_cols()
            )));
        }
        if !hx.matmul(&hz.transpose())?.is_zero() {
            return Err(Error::NonCommuting);
        }
        Ok(CssCode {
            n: hx.n_cols(),
            hx,
            hz,
            provenance: provenance.into(),
        })
    }

    pub fn num_logical_qubits(&self) -> usize {
        self.n - self.hx.rank() - self.hz.rank()
    }

    /// Writes `code.json`, `hx.txt` and `hz.txt` into `dir`.
    pub fn write(&self, dir: &Path, logicals: Option<&LogicalBasis>) -> Result<CodeFile> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("hx.txt"), self.hx.to_text())?;
        fs::write(dir.join("hz.txt"), self.hz.to_text())?;
        let file = CodeFile {
            n: self.n,
            k: self.num_logical_qubits(),
            hx: "hx.txt".into(),
            hz: "hz.txt".into(),
            provenance: self.provenance.clone(),
            logicals: logicals.map(LogicalsJson::from),
        };
        fs::write(dir.join("code.json"), serde_json::to_string_pretty(&file)?)?;
        Ok(file)
    }

    /// Reads a directory written by [`write`](Self::write). The commutation
    /// check is rerun, so corrupted matrices are rejected.
    pub fn read(dir: &Path) -> Result<(CssCode, CodeFile)> {
        let file: CodeFile = serde_json::from_str(&fs::read_to_string(dir.join("code.json"))?)?;
        let hx = BinaryMatrix::from_text(&fs::read_to_string(dir.join(&file.hx))?)?;
        let hz = BinaryMatrix::from_text(&fs::read_to_string(dir.join(&file.hz))?)?;
        let code = CssCode::new(hx, hz, file.provenance.clone())?;
        if code.n != file.n {
            return Err(Error::DimensionMismatch(format!(
                "header says n = {}, matrices have {} columns",
                file.n, code.n
            )));
        }
        Ok((code, file))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub n: usize,
    pub k: usize,
    pub hx: String,
    pub hz: String,
    pub provenance: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logicals: Option<LogicalsJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalsJson {
    pub x: Vec<Vec<usize>>,
    pub z: Vec<Vec<usize>>,
    pub global_index: Option<usize>,
}

impl From<&LogicalBasis> for LogicalsJson {
    fn from(b: &LogicalBasis) -> Self {
        LogicalsJson {
            x: b.x_logicals.vectors().to_vec(),
            z: b.z_logicals.vectors().to_vec(),
            global_index: b.global_index,
        }
    }
}

/// Qubits on `C_1`, X checks on `C_0` (rows of `∂_1`), Z checks on `C_2`
/// (rows of `∂_2ᵀ`).
pub fn code_from_complex(c: &ChainComplex, provenance: impl Into<String>) -> Result<CssCode> {
    if c.num_spaces() != 3 {
        return Err(Error::WrongLength {
            expected: 3,
            found: c.num_spaces(),
        });
    }
    let d1 = c.boundary(1).expect("degree 1");
    let d2 = c.boundary(2).expect("degree 2");
    if !d1.matmul(d2)?.is_zero() {
        return Err(Error::BoundaryNotClosed(1));
    }
    CssCode::new(d1.clone(), d2.transpose(), provenance)
}

pub fn num_logical_qubits(code: &CssCode) -> usize {
    code.num_logical_qubits()
}

/// Paired logical operators. `x_logicals[i]` anticommutes with
/// `z_logicals[j]` exactly when `i == j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalBasis {
    pub x_logicals: BasisSet,
    pub z_logicals: BasisSet,
    pub pairing: Vec<(usize, usize)>,
    pub global_index: Option<usize>,
}

impl LogicalBasis {
    pub fn len(&self) -> usize {
        self.pairing.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairing.is_empty()
    }

    pub fn x(&self) -> Vec<BitVec> {
        self.x_logicals.to_bitvecs()
    }

    pub fn z(&self) -> Vec<BitVec> {
        self.z_logicals.to_bitvecs()
    }

    /// Overlap parities `x_i · z_j`, one row per X-logical.
    pub fn pairing_matrix(&self) -> Vec<BitVec> {
        pairing_matrix(&self.x(), &self.z())
    }

    fn from_vectors(
        n: usize,
        x: &[BitVec],
        z: &[BitVec],
        global_index: Option<usize>,
    ) -> Result<Self> {
        Ok(LogicalBasis {
            x_logicals: BasisSet::from_bitvecs(n, x)?,
            z_logicals: BasisSet::from_bitvecs(n, z)?,
            pairing: (0..x.len()).map(|i| (i, i)).collect(),
            global_index,
        })
    }
}

fn pairing_matrix(x: &[BitVec], z: &[BitVec]) -> Vec<BitVec> {
    x.iter()
        .map(|xi| {
            let mut row = BitVec::zeros(z.len());
            for (j, zj) in z.iter().enumerate() {
                row.set(j, xi.dot(zj));
            }
            row
        })
        .collect()
}

/// Gauss–Jordan inverse of a square F₂ matrix given by rows.
fn invert(m: &[BitVec]) -> Option<Vec<BitVec>> {
    let k = m.len();
    let mut a: Vec<BitVec> = m.to_vec();
    let mut inv: Vec<BitVec> = (0..k).map(|i| BitVec::from_indices(k, &[i])).collect();
    for col in 0..k {
        let p = (col..k).find(|&r| a[r].get(col))?;
        a.swap(col, p);
        inv.swap(col, p);
        for r in 0..k {
            if r != col && a[r].get(col) {
                let (ar, ir) = (a[col].clone(), inv[col].clone());
                a[r].xor_assign(&ar);
                inv[r].xor_assign(&ir);
            }
        }
    }
    Some(inv)
}

/// Recombines `moving` so that `fixed[i] · moving[j] = δ_ij`.
fn diagonalize(fixed: &[BitVec], moving: &[BitVec]) -> Result<Vec<BitVec>> {
    let m = pairing_matrix(fixed, moving);
    let inv = invert(&m).ok_or_else(|| Error::Invariant("logical pairing is singular".into()))?;
    let n = moving.first().map_or(0, BitVec::len);
    Ok((0..moving.len())
        .map(|j| {
            let mut v = BitVec::zeros(n);
            for (l, row) in inv.iter().enumerate() {
                if row.get(j) {
                    v.xor_assign(&moving[l]);
                }
            }
            v
        })
        .collect())
}

/// Representatives of `ker(kernel_of) / rowspan(modulo)`.
fn quotient_reps(kernel_of: &BinaryMatrix, modulo: &BinaryMatrix) -> Vec<BitVec> {
    let n = kernel_of.n_cols();
    let mut span = Echelon::new(n);
    for r in 0..modulo.n_rows() {
        span.insert(modulo.row_bitvec(r));
    }
    kernel_of
        .kernel_basis()
        .to_bitvecs()
        .into_iter()
        .filter(|v| span.insert(v.clone()))
        .collect()
}

/// Lowers the weight of `v` by adding generators while any single addition
/// helps. Stays in the coset of `v`.
pub fn greedy_reduce(v: &mut BitVec, generators: &[Vec<usize>]) {
    loop {
        let mut improved = false;
        for g in generators {
            let overlap = g.iter().filter(|&&i| v.get(i)).count();
            if 2 * overlap > g.len() {
                for &i in g {
                    v.flip(i);
                }
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
}

fn rows_of(m: &BinaryMatrix) -> Vec<Vec<usize>> {
    (0..m.n_rows()).map(|r| m.row(r).to_vec()).collect()
}

fn reduce_all(vs: &mut [BitVec], generators: &[Vec<usize>], skip: Option<usize>) {
    for (i, v) in vs.iter_mut().enumerate() {
        if Some(i) != skip {
            greedy_reduce(v, generators);
        }
    }
}

/// Z-logicals from `ker HX / rowspan HZ`, X-logicals from
/// `ker HZ / rowspan HX`, paired diagonally.
pub fn logical_basis(code: &CssCode) -> Result<LogicalBasis> {
    let mut z = quotient_reps(&code.hx, &code.hz);
    let x = quotient_reps(&code.hz, &code.hx);
    if x.len() != z.len() {
        return Err(Error::Invariant(format!(
            "{} X-logicals but {} Z-logicals",
            x.len(),
            z.len()
        )));
    }
    if z.is_empty() {
        return LogicalBasis::from_vectors(code.n, &[], &[], None);
    }
    z = diagonalize(&x, &z)?;
    let mut x = x;
    reduce_all(&mut x, &rows_of(&code.hx), None);
    reduce_all(&mut z, &rows_of(&code.hz), None);
    LogicalBasis::from_vectors(code.n, &x, &z, None)
}

/// Builds the Z-logicals of `mid(C ⊗ D)` from products of factor homology
/// representatives. The `H_0(C) ⊗ H_2(D)` class becomes the global qubit at
/// index 0; the others are reduced greedily against the Z-stabilizers.
pub fn classify_global(code: &CssCode, p: &ProductComplex) -> Result<LogicalBasis> {
    let (left, right) = (p.left(), p.right());
    if left.num_spaces() != 3 || right.num_spaces() != 3 {
        return Err(Error::NotAProduct("factors must have three spaces".into()));
    }
    let d2 = p.complex.boundary(2).expect("degree 2");
    let d3 = p.complex.boundary(3).expect("degree 3");
    if code.n != p.complex.dim(2) || code.hx != *d2 || code.hz != d3.transpose() {
        return Err(Error::NotAProduct(
            "code is not the middle code of this product".into(),
        ));
    }
    let h0 = left.homology_representatives(0)?;
    let h2 = right.homology_representatives(2)?;
    if h0.len() != 1 || h2.len() != 1 {
        return Err(Error::NotAProduct(format!(
            "expected one H_0 ⊗ H_2 class, found {}",
            h0.len() * h2.len()
        )));
    }

    let mut z = vec![p.tensor(0, &h0[0], 2, &h2[0])];
    for i in 1..=2 {
        let mut a = left.homology_representatives(i)?;
        if let Some(m) = left.boundary(i + 1) {
            reduce_all(&mut a, &m.columns(), None);
        }
        let mut b = right.homology_representatives(2 - i)?;
        if let Some(m) = right.boundary(3 - i) {
            reduce_all(&mut b, &m.columns(), None);
        }
        for ai in &a {
            for bj in &b {
                z.push(p.tensor(i, ai, 2 - i, bj));
            }
        }
    }
    let hz_rows = rows_of(&code.hz);
    reduce_all(&mut z, &hz_rows, Some(0));

    let mut span = Echelon::new(code.n);
    for g in &hz_rows {
        span.insert(BitVec::from_indices(code.n, g));
    }
    for (i, zi) in z.iter().enumerate() {
        if !code.hx.mul_vec(zi)?.is_zero() {
            return Err(Error::Invariant(format!("Künneth product {i} is not a cycle")));
        }
        if !span.insert(zi.clone()) {
            return Err(Error::Invariant(format!(
                "Künneth product {i} is dependent modulo stabilizers"
            )));
        }
    }
    let k = code.num_logical_qubits();
    if z.len() != k {
        return Err(Error::Invariant(format!(
            "{} Künneth classes for k = {k}",
            z.len()
        )));
    }

    let x = quotient_reps(&code.hz, &code.hx);
    let mut x = diagonalize(&z, &x)?;
    reduce_all(&mut x, &rows_of(&code.hx), None);
    LogicalBasis::from_vectors(code.n, &x, &z, Some(0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Z,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamiltonianTerm {
    pub pauli: Pauli,
    pub support: Vec<usize>,
}

/// One term `−P^{⊗support}` per stabilizer generator, X rows first.
pub fn export_hamiltonian(code: &CssCode) -> Vec<HamiltonianTerm> {
    let term = |pauli, m: &BinaryMatrix| {
        (0..m.n_rows())
            .map(|r| HamiltonianTerm {
                pauli,
                support: m.row(r).to_vec(),
            })
            .collect::<Vec<_>>()
    };
    let mut terms = term(Pauli::X, &code.hx);
    terms.extend(term(Pauli::Z, &code.hz));
    terms
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carpet::{CarpetGraph, CarpetSpec};
    use crate::complex::toric_complex;
    use crate::product::Fpc;

    fn toric(b: u32, c: u32, l: u32) -> CssCode {
        let g = CarpetGraph::build(&CarpetSpec::new(b, c, l).unwrap());
        code_from_complex(&toric_complex(&g), "toric").unwrap()
    }

    fn fpc(b: u32, c: u32, l: u32) -> (Fpc, CssCode) {
        let f = Fpc::build(&CarpetSpec::new(b, c, l).unwrap()).unwrap();
        let code = code_from_complex(&f.middle(), "fpc").unwrap();
        (f, code)
    }

    /// Checks that every logical commutes with the opposite stabilizers, is
    /// not itself a stabilizer, and that the pairing is the identity.
    fn assert_valid(code: &CssCode, b: &LogicalBasis) {
        let (x, z) = (b.x(), b.z());
        let mut sx = Echelon::new(code.n);
        let mut sz = Echelon::new(code.n);
        for r in 0..code.hx.n_rows() {
            sx.insert(code.hx.row_bitvec(r));
        }
        for r in 0..code.hz.n_rows() {
            sz.insert(code.hz.row_bitvec(r));
        }
        for v in &x {
            assert!(code.hz.mul_vec(v).unwrap().is_zero());
            assert!(!sx.contains(v));
        }
        for v in &z {
            assert!(code.hx.mul_vec(v).unwrap().is_zero());
            assert!(!sz.contains(v));
        }
        for (i, xi) in x.iter().enumerate() {
            for (j, zj) in z.iter().enumerate() {
                assert_eq!(xi.dot(zj), i == j);
            }
        }
    }

    #[test]
    fn surface_code_on_one_square_has_no_logicals() {
        let code = toric(3, 1, 0);
        assert_eq!(code.n, 4);
        assert_eq!(code.num_logical_qubits(), 0);
        assert!(logical_basis(&code).unwrap().is_empty());
        // Exhaustive: every Z-type operator commuting with the X checks is a
        // product of Z checks.
        let hz_span = [BitVec::zeros(4), code.hz.row_bitvec(0)];
        for mask in 0..16usize {
            let v = BitVec::from_indices(4, &(0..4).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
            if code.hx.mul_vec(&v).unwrap().is_zero() {
                assert!(hz_span.contains(&v));
            }
        }
    }

    #[test]
    fn carpet_toric_codes() {
        let code = toric(3, 1, 1);
        assert_eq!((code.n, code.num_logical_qubits()), (24, 1));
        let b = logical_basis(&code).unwrap();
        assert_valid(&code, &b);
        // The Z-logical winds around the central hole: greedy reduction
        // brings it down to the four hole edges.
        let z = &b.z()[0];
        assert_eq!(z.count_ones(), 4);
        assert_eq!(toric(3, 1, 2).num_logical_qubits(), 9);
        let code = toric(3, 1, 2);
        assert_valid(&code, &logical_basis(&code).unwrap());
    }

    #[test]
    fn non_commuting_checks_are_rejected() {
        let hx = BinaryMatrix::from_entries(1, 2, [(0, 0)]).unwrap();
        let hz = BinaryMatrix::from_entries(1, 2, [(0, 0), (0, 1)]).unwrap();
        assert!(matches!(CssCode::new(hx, hz, ""), Err(Error::NonCommuting)));
        let point = ChainComplex::point(4);
        assert!(matches!(
            code_from_complex(&point, ""),
            Err(Error::WrongLength { expected: 3, found: 5 })
        ));
    }

    #[test]
    fn fpc_level_zero() {
        let (f, code) = fpc(3, 1, 0);
        assert_eq!((code.n, code.num_logical_qubits()), (33, 1));
        let b = classify_global(&code, &f.product).unwrap();
        assert_eq!(b.global_index, Some(0));
        assert_eq!(b.len(), 1);
        assert_valid(&code, &b);
    }

    #[test]
    fn fpc_level_one_global_and_local() {
        let (f, code) = fpc(3, 1, 1);
        assert_eq!((code.n, code.num_logical_qubits()), (896, 2));
        let generic = logical_basis(&code).unwrap();
        assert_valid(&code, &generic);
        assert_eq!(generic.len(), 2);

        let b = classify_global(&code, &f.product).unwrap();
        assert_valid(&code, &b);
        let z = b.z();
        // Global: one full carpet layer in C_0 ⊗ C*_2.
        let global = &z[0];
        assert_eq!(global.count_ones(), f.graph.vertices.len());
        let layer = f.product.summand(2, 0).unwrap().range();
        let mut seen = std::collections::BTreeSet::new();
        for q in global.ones() {
            assert!(layer.contains(&q));
            let (_, a, w) = f.product.decode(2, q).unwrap();
            assert_eq!(a, 0);
            seen.insert(w);
        }
        assert_eq!(seen.len(), f.graph.vertices.len());
        // Local: hole cycle times a two-edge dual path.
        assert!(z[1].count_ones() <= 8, "{}", z[1].count_ones());
    }

    #[test]
    fn hamiltonian_terms() {
        let code = toric(3, 1, 0);
        let terms = export_hamiltonian(&code);
        let weights: Vec<(Pauli, usize)> = terms.iter().map(|t| (t.pauli, t.support.len())).collect();
        assert_eq!(
            weights,
            vec![(Pauli::X, 2), (Pauli::X, 2), (Pauli::X, 2), (Pauli::X, 2), (Pauli::Z, 4)]
        );
        let (f, code) = fpc(3, 1, 1);
        let terms = export_hamiltonian(&code);
        assert_eq!(terms.len(), f.product.complex.dim(1) + f.product.complex.dim(3));
        assert!(terms.iter().all(|t| t.support.len() <= 6));
    }

    #[test]
    fn write_and_read_back() {
        let dir = std::env::temp_dir().join(format!("fpc-css-{}", std::process::id()));
        let code = toric(3, 1, 1);
        let b = logical_basis(&code).unwrap();
        code.write(&dir, Some(&b)).unwrap();
        let (back, file) = CssCode::read(&dir).unwrap();
        assert_eq!(back, code);
        assert_eq!(file.k, 1);
        // Flip one entry of hz so a Z check no longer commutes.
        let mut hz: Vec<(usize, usize)> = code.hz.entries().collect();
        hz[0].1 = (hz[0].1 + 1..code.n).find(|&c| !code.hz.get(hz[0].0, c)).unwrap();
        hz.sort();
        let corrupt = BinaryMatrix::from_entries(code.hz.n_rows(), code.n, hz).unwrap();
        fs::write(dir.join("hz.txt"), corrupt.to_text()).unwrap();
        assert!(matches!(CssCode::read(&dir), Err(Error::NonCommuting)));
        fs::remove_dir_all(&dir).ok();
    }
}
