use std::fmt;

/// Dense, bit-packed vector over F₂.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// Builds a vector with ones at `indices`. Repeated indices cancel.
    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = BitVec::zeros(len);
        for &i in indices {
            v.flip(i);
        }
        v
    }

    pub fn ones_vector(len: usize) -> Self {
        let mut v = BitVec::zeros(len);
        for w in v.words.iter_mut() {
            *w = u64::MAX;
        }
        v.clear_tail();
        v
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i & 63);
        if value {
            self.words[i >> 6] |= mask;
        } else {
            self.words[i >> 6] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] ^= 1u64 << (i & 63);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        self.xor_from_word(other, 0);
    }

    /// XOR restricted to words `start_word..`; callers use it when both
    /// vectors are known to vanish below that word.
    #[inline]
    pub fn xor_from_word(&mut self, other: &BitVec, start_word: usize) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words[start_word..]
            .iter_mut()
            .zip(&other.words[start_word..])
        {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest index holding a one, searching from `from` upward.
    #[inline]
    pub fn first_one_from(&self, from: usize) -> Option<usize> {
        if from >= self.len {
            return None;
        }
        let mut wi = from >> 6;
        let mut w = self.words[wi] & (u64::MAX << (from & 63));
        loop {
            if w != 0 {
                return Some((wi << 6) + w.trailing_zeros() as usize);
            }
            wi += 1;
            if wi >= self.words.len() {
                return None;
            }
            w = self.words[wi];
        }
    }

    pub fn first_one(&self) -> Option<usize> {
        self.first_one_from(0)
    }

    /// Parity of the overlap with `other`.
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some((wi << 6) + t)
                }
            })
        })
    }

    pub fn to_indices(&self) -> Vec<usize> {
        self.ones().collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[{}]{:?}", self.len, self.to_indices())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_flip_and_scan() {
        let mut v = BitVec::zeros(130);
        v.set(3, true);
        v.flip(64);
        v.flip(129);
        assert_eq!(v.to_indices(), vec![3, 64, 129]);
        assert_eq!(v.first_one_from(4), Some(64));
        assert_eq!(v.first_one_from(65), Some(129));
        assert_eq!(v.count_ones(), 3);
        v.flip(3);
        assert_eq!(v.first_one(), Some(64));
    }

    #[test]
    fn dot_is_overlap_parity() {
        let a = BitVec::from_indices(10, &[1, 2, 3]);
        let b = BitVec::from_indices(10, &[2, 3, 9]);
        assert!(!a.dot(&b));
        let c = BitVec::from_indices(10, &[3]);
        assert!(a.dot(&c));
    }

    #[test]
    fn ones_vector_clears_tail() {
        let v = BitVec::ones_vector(70);
        assert_eq!(v.count_ones(), 70);
    }
}
