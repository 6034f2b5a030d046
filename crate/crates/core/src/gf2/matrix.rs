use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{BasisSet, BitVec, Echelon};
use crate::error::{Error, Result};

/// Sparse matrix over F₂ stored as sorted column lists per row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryMatrix {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<Vec<usize>>,
}

impl BinaryMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        BinaryMatrix {
            n_rows,
            n_cols,
            rows: vec![Vec::new(); n_rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        BinaryMatrix {
            n_rows: n,
            n_cols: n,
            rows: (0..n).map(|i| vec![i]).collect(),
        }
    }

    /// Builds a matrix from the coordinates of its one-entries.
    pub fn from_entries<I>(n_rows: usize, n_cols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut rows = vec![Vec::new(); n_rows];
        for (r, c) in entries {
            if r >= n_rows || c >= n_cols {
                return Err(Error::IndexOutOfBounds {
                    row: r,
                    col: c,
                    n_rows,
                    n_cols,
                });
            }
            rows[r].push(c);
        }
        for (r, row) in rows.iter_mut().enumerate() {
            row.sort_unstable();
            if let Some(w) = row.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEntry(r, w[0]));
            }
        }
        Ok(BinaryMatrix {
            n_rows,
            n_cols,
            rows,
        })
    }

    /// Like [`from_entries`](Self::from_entries) but repeated coordinates
    /// cancel in pairs, as in an F₂ sum.
    pub fn from_entries_xor<I>(n_rows: usize, n_cols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut rows = vec![Vec::new(); n_rows];
        for (r, c) in entries {
            if r >= n_rows || c >= n_cols {
                return Err(Error::IndexOutOfBounds {
                    row: r,
                    col: c,
                    n_rows,
                    n_cols,
                });
            }
            rows[r].push(c);
        }
        for row in rows.iter_mut() {
            cancel_pairs(row);
        }
        Ok(BinaryMatrix {
            n_rows,
            n_cols,
            rows,
        })
    }

    pub fn from_bitvecs(n_cols: usize, vectors: &[BitVec]) -> Result<Self> {
        let mut rows = Vec::with_capacity(vectors.len());
        for v in vectors {
            if v.len() != n_cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a matrix with {} columns",
                    v.len(),
                    n_cols
                )));
            }
            rows.push(v.to_indices());
        }
        Ok(BinaryMatrix {
            n_rows: vectors.len(),
            n_cols,
            rows,
        })
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].binary_search(&c).is_ok()
    }

    /// One-entries in ascending lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&c| (r, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> BinaryMatrix {
        let mut rows = vec![Vec::new(); self.n_cols];
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row {
                rows[c].push(r);
            }
        }
        BinaryMatrix {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            rows,
        }
    }

    /// Columns as sorted row lists; the transpose's rows.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        self.transpose().rows
    }

    pub fn row_bitvec(&self, i: usize) -> BitVec {
        BitVec::from_indices(self.n_cols, &self.rows[i])
    }

    pub fn to_bitvecs(&self) -> Vec<BitVec> {
        (0..self.n_rows).map(|i| self.row_bitvec(i)).collect()
    }

    /// Product over F₂.
    pub fn matmul(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.n_cols != other.n_rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.n_rows, self.n_cols, other.n_rows, other.n_cols
            )));
        }
        let mut acc = vec![false; other.n_cols];
        let mut touched = Vec::new();
        let rows = self
            .rows
            .iter()
            .map(|row| {
                for &k in row {
                    for &c in &other.rows[k] {
                        if !acc[c] {
                            touched.push(c);
                        }
                        acc[c] = !acc[c];
                    }
                }
                // `touched` may list a column twice if it toggled back on.
                let mut out: Vec<usize> = touched.drain(..).filter(|&c| acc[c]).collect();
                for &c in &out {
                    acc[c] = false;
                }
                out.sort_unstable();
                out.dedup();
                out
            })
            .collect();
        Ok(BinaryMatrix {
            n_rows: self.n_rows,
            n_cols: other.n_cols,
            rows,
        })
    }

    /// Matrix-vector product `M·v`.
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.n_cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.n_cols
            )));
        }
        let mut out = BitVec::zeros(self.n_rows);
        for (r, row) in self.rows.iter().enumerate() {
            if row.iter().filter(|&&c| v.get(c)).count() % 2 == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// Rank over F₂ by Gaussian elimination on bit-packed rows.
    pub fn rank(&self) -> usize {
        // Elimination cost scales with row length, so run it on the
        // orientation with fewer columns.
        if self.n_cols > self.n_rows {
            return self.transpose().rank();
        }
        let mut ech = Echelon::new(self.n_cols);
        for i in 0..self.n_rows {
            if ech.rank() == self.n_cols {
                break;
            }
            if !self.rows[i].is_empty() {
                ech.insert(self.row_bitvec(i));
            }
        }
        ech.rank()
    }

    /// Reduced row echelon form: returns the nonzero reduced rows and their
    /// pivot columns. Pivots are chosen column by column, taking the lowest
    /// remaining row index.
    pub fn rref(&self) -> (Vec<BitVec>, Vec<usize>) {
        let mut rows = self.to_bitvecs();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.n_cols {
            if rank == rows.len() {
                break;
            }
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, p);
            let (head, tail) = rows.split_at_mut(rank);
            let (pivot, rest) = tail.split_first_mut().expect("pivot row");
            for r in head.iter_mut().chain(rest.iter_mut()) {
                if r.get(col) {
                    r.xor_assign(pivot);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        rows.truncate(rank);
        (rows, pivots)
    }

    /// Basis of the null space `{v : M·v = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> BasisSet {
        let (rows, pivots) = self.rref();
        let mut is_pivot = vec![false; self.n_cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let vectors = (0..self.n_cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![f];
                for (row, &p) in rows.iter().zip(&pivots) {
                    if row.get(f) {
                        v.push(p);
                    }
                }
                v.sort_unstable();
                v
            })
            .collect();
        BasisSet::new_unchecked(self.n_cols, vectors)
    }

    /// Text form: `rows cols nnz` followed by one `i j` line per entry.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} {}", self.n_rows, self.n_cols, self.nnz());
        for (r, c) in self.entries() {
            let _ = writeln!(s, "{r} {c}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<BinaryMatrix> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let nums = parse_fields(header, 3)?;
        let (n_rows, n_cols, nnz) = (nums[0], nums[1], nums[2]);
        let mut entries = Vec::with_capacity(nnz);
        let mut prev: Option<(usize, usize)> = None;
        for line in lines {
            let f = parse_fields(line, 2)?;
            let e = (f[0], f[1]);
            if let Some(p) = prev {
                if e <= p {
                    return Err(Error::Parse(format!(
                        "entries not in ascending order at `{}`",
                        line.trim()
                    )));
                }
            }
            prev = Some(e);
            entries.push(e);
        }
        if entries.len() != nnz {
            return Err(Error::Parse(format!(
                "header declares {nnz} entries, found {}",
                entries.len()
            )));
        }
        BinaryMatrix::from_entries(n_rows, n_cols, entries)
    }
}

fn parse_fields(line: &str, n: usize) -> Result<Vec<usize>> {
    let f: Vec<usize> = line
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad integer `{t}`")))
        })
        .collect::<Result<_>>()?;
    if f.len() != n {
        return Err(Error::Parse(format!(
            "expected {n} fields in `{}`",
            line.trim()
        )));
    }
    Ok(f)
}

fn cancel_pairs(row: &mut Vec<usize>) {
    row.sort_unstable();
    let mut out = Vec::with_capacity(row.len());
    let mut i = 0;
    while i < row.len() {
        let mut j = i;
        while j < row.len() && row[j] == row[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(row[i]);
        }
        i = j;
    }
    *row = out;
}
