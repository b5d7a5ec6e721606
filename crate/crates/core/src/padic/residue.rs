/// The residue field of the unit ball: F_{p²} = F_p(√u) for the unramified
/// extension, F_p when μ is divisible by p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidueField {
    p: u64,
    u: u64,
    ramified: bool,
}

/// a + b√u with a, b in F_p (b = 0 in the ramified case).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    pub a: u32,
    pub b: u32,
}

impl Residue {
    pub const ZERO: Residue = Residue { a: 0, b: 0 };

    pub fn is_zero(self) -> bool {
        self == Residue::ZERO
    }
}

impl ResidueField {
    pub fn new(p: u32, u: u32, ramified: bool) -> Self {
        ResidueField { p: p as u64, u: u as u64, ramified }
    }

    pub fn size(&self) -> u64 {
        if self.ramified {
            self.p
        } else {
            self.p * self.p
        }
    }

    pub fn elem(&self, a: u64, b: u64) -> Residue {
        let b = if self.ramified { 0 } else { b % self.p };
        Residue { a: (a % self.p) as u32, b: b as u32 }
    }

    /// Enumerate every element, zero first.
    pub fn elements(&self) -> impl Iterator<Item = Residue> + '_ {
        let bs = if self.ramified { 1 } else { self.p };
        (0..bs).flat_map(move |b| (0..self.p).map(move |a| self.elem(a, b)))
    }

    pub fn add(&self, x: Residue, y: Residue) -> Residue {
        self.elem(x.a as u64 + y.a as u64, x.b as u64 + y.b as u64)
    }

    pub fn neg(&self, x: Residue) -> Residue {
        self.elem(self.p - x.a as u64, self.p - x.b as u64)
    }

    pub fn sub(&self, x: Residue, y: Residue) -> Residue {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Residue, y: Residue) -> Residue {
        let (a, b, c, d) = (x.a as u64, x.b as u64, y.a as u64, y.b as u64);
        let p = self.p;
        let re = (a * c + self.u * (b * d % p)) % p;
        let im = (a * d + b * c) % p;
        self.elem(re, im)
    }

    fn pow_u64(&self, x: Residue, mut e: u64) -> Residue {
        let mut acc = self.elem(1, 0);
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: Residue) -> Option<Residue> {
        if x.is_zero() {
            None
        } else {
            Some(self.pow_u64(x, self.size() - 2))
        }
    }
}

/// Rank of a matrix over the residue field (rows are vectors).
pub fn residue_rank(field: &ResidueField, rows: &[Vec<Residue>]) -> usize {
    let mut m: Vec<Vec<Residue>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = field.inv(m[rank][col]).unwrap();
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = field.mul(m[r][col], inv);
                for c in col..ncols {
                    let t = field.mul(f, m[rank][c]);
                    m[r][c] = field.sub(m[r][c], t);
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_nonzero_element_is_invertible() {
        for (p, u, ram) in [(5, 2, false), (7, 3, false), (7, 3, true)] {
            let f = ResidueField::new(p, u, ram);
            let one = f.elem(1, 0);
            for x in f.elements().skip(1) {
                assert_eq!(f.mul(x, f.inv(x).unwrap()), one);
            }
        }
    }

    #[test]
    fn rank_over_f25() {
        let f = ResidueField::new(5, 2, false);
        let i = f.elem(0, 1);
        let rows = vec![vec![f.elem(1, 0), i], vec![i, f.elem(2, 0)]];
        // second row = i * first row since i² = 2
        assert_eq!(residue_rank(&f, &rows), 1);
        let rows = vec![vec![f.elem(1, 0), f.elem(0, 0)], vec![f.elem(1, 0), f.elem(1, 0)]];
        assert_eq!(residue_rank(&f, &rows), 2);
    }
}
