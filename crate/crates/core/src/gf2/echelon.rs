use super::BitVec;

const NO_ROW: u32 = u32::MAX;

/// Incrementally grown semi-echelon basis: every stored row has a distinct
/// leading (lowest) column and is zero below it.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<BitVec>,
    pivot_row: Vec<u32>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon {
            dim,
            rows: Vec::new(),
            pivot_row: vec![NO_ROW; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    /// Reduces `v` in place until its leading column is not a pivot. Returns
    /// that column, or `None` when `v` reduced to zero.
    pub fn reduce(&self, v: &mut BitVec) -> Option<usize> {
        let mut from = 0;
        while let Some(c) = v.first_one_from(from) {
            let r = self.pivot_row[c];
            if r == NO_ROW {
                return Some(c);
            }
            v.xor_from_word(&self.rows[r as usize], c >> 6);
            from = c + 1;
        }
        None
    }

    /// Adds `v` to the span. Returns `true` if the rank grew.
    pub fn insert(&mut self, mut v: BitVec) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        match self.reduce(&mut v) {
            None => false,
            Some(c) => {
                self.pivot_row[c] = self.rows.len() as u32;
                self.rows.push(v);
                true
            }
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w).is_none()
    }
}
