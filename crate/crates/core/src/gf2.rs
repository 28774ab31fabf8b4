//! Bit-packed linear algebra over GF(2).

/// Dense bit vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
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

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        let b = 1u64 << (i & 63);
        if v {
            self.words[i >> 6] |= b;
        } else {
            self.words[i >> 6] &= !b;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i >> 6] ^= 1u64 << (i & 63);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Row echelon form built one vector at a time. Each stored row has a
/// distinct pivot (its lowest set bit) and no other stored row has that bit.
#[derive(Clone, Debug)]
pub struct Echelon {
    len: usize,
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
    // pivot column -> row index
    slot: Vec<usize>,
}

impl Echelon {
    pub fn new(len: usize) -> Self {
        Echelon {
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
            slot: vec![usize::MAX; len],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &mut BitVec) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
    }

    /// Adds `v` to the span. Returns false when it was already in it.
    pub fn insert(&mut self, mut v: BitVec) -> bool {
        debug_assert_eq!(v.len(), self.len);
        self.reduce(&mut v);
        let Some(p) = v.first_one() else {
            return false;
        };
        for row in &mut self.rows {
            if row.get(p) {
                row.xor_assign(&v);
            }
        }
        self.slot[p] = self.rows.len();
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }

    /// Basis of `{x : r . x = 0 for every stored row r}`.
    pub fn nullspace(&self) -> Vec<BitVec> {
        let mut out = Vec::new();
        for free in 0..self.len {
            if self.slot[free] != usize::MAX {
                continue;
            }
            let mut x = BitVec::zeros(self.len);
            x.set(free, true);
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if row.get(free) {
                    x.set(p, true);
                }
            }
            out.push(x);
        }
        out
    }
}

/// Nullspace of the system whose equations are given as lists of variable
/// indices (each equation says the listed variables sum to zero; repeated
/// indices cancel).
pub fn solve_homogeneous<I, E>(nvars: usize, equations: I) -> Vec<BitVec>
where
    I: IntoIterator<Item = E>,
    E: AsRef<[usize]>,
{
    let mut ech = Echelon::new(nvars);
    for eq in equations {
        let mut v = BitVec::zeros(nvars);
        for &i in eq.as_ref() {
            v.flip(i);
        }
        if !v.is_zero() {
            ech.insert(v);
        }
        if ech.rank() == nvars {
            break;
        }
    }
    ech.nullspace()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_small() {
        // x0 + x1 = 0, x1 + x2 = 0 over 4 variables
        let basis = solve_homogeneous(4, [vec![0, 1], vec![1, 2]]);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert_eq!(v.get(0), v.get(1));
            assert_eq!(v.get(1), v.get(2));
        }
    }

    #[test]
    fn echelon_detects_dependence() {
        let mut e = Echelon::new(70);
        let mut a = BitVec::zeros(70);
        a.set(3, true);
        a.set(66, true);
        let mut b = BitVec::zeros(70);
        b.set(66, true);
        assert!(e.insert(a.clone()));
        assert!(e.insert(b.clone()));
        let mut c = a.clone();
        c.xor_assign(&b);
        assert!(!e.insert(c));
        assert_eq!(e.rank(), 2);
    }
}
