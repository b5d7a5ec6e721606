//! Exact Gaussian elimination over Q_p(√μ) with largest-absolute-value pivoting.

use crate::error::{Error, Result};
use crate::padic::{ExtScalar, NormValue, Valuation};

pub type Rows = Vec<Vec<ExtScalar>>;

/// Reduced row echelon form with full largest-abs pivoting. Row k of the
/// result has a 1 in column pivots[k] and zeros in the other pivot columns.
/// Entries that are only zero at precision make a pivot undecidable.
pub fn rref(rows: &Rows, ncols: usize) -> Result<(Rows, Vec<usize>)> {
    let mut m = rows.clone();
    let mut pivots = Vec::new();
    let mut free_cols: Vec<usize> = (0..ncols).collect();
    let mut r = 0;
    while r < m.len() {
        // restrict the pivot search to columns not yet used
        let mut best: Option<(usize, usize)> = None;
        let mut best_norm = NormValue::Zero;
        let mut fuzzy = false;
        for (ri, row) in m.iter().enumerate().skip(r) {
            for &c in &free_cols {
                match row[c].norm_valuation() {
                    Valuation::Infinite => {}
                    Valuation::AtLeast(_) => fuzzy = true,
                    Valuation::Finite(v) => {
                        let n = NormValue::Pow(-v);
                        if best.is_none() || n > best_norm {
                            best = Some((ri, c));
                            best_norm = n;
                        }
                    }
                }
            }
        }
        let Some((pr, pc)) = best else {
            if fuzzy {
                return Err(Error::precision("elimination pivot is zero at precision"));
            }
            break;
        };
        m.swap(r, pr);
        let inv = m[r][pc].inv()?;
        for c in 0..ncols {
            m[r][c] = &m[r][c] * &inv;
        }
        for ri in 0..m.len() {
            if ri == r || m[ri][pc].is_exact_zero() {
                continue;
            }
            let f = m[ri][pc].clone();
            for c in 0..ncols {
                let t = &f * &m[r][c];
                m[ri][c] = &m[ri][c] - &t;
            }
        }
        pivots.push(pc);
        free_cols.retain(|&c| c != pc);
        r += 1;
    }
    m.truncate(pivots.len());
    Ok((m, pivots))
}

pub fn rank(rows: &Rows, ncols: usize) -> Result<usize> {
    Ok(rref(rows, ncols)?.1.len())
}

/// A basis of {x : M x = 0}, one vector per free column, with a 1 in its own
/// free column.
pub fn kernel(rows: &Rows, ncols: usize, zero: &ExtScalar) -> Result<Vec<Vec<ExtScalar>>> {
    let (m, pivots) = rref(rows, ncols)?;
    let one = zero.cfg().one();
    let mut out = Vec::new();
    for f in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![zero.clone(); ncols];
        v[f] = one.clone();
        for (k, &pc) in pivots.iter().enumerate() {
            v[pc] = -&m[k][f];
        }
        out.push(v);
    }
    Ok(out)
}

/// Inverse of a square matrix, `Ok(None)` when singular.
pub fn inverse(rows: &Rows) -> Result<Option<Rows>> {
    let n = rows.len();
    let Some(first) = rows.first() else { return Ok(Some(Vec::new())) };
    let cfg = first[0].cfg();
    let aug: Rows = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { cfg.one() } else { cfg.zero() }));
            row
        })
        .collect();
    // pivot only within the left block
    let mut m = aug;
    for col in 0..n {
        let mut best: Option<(usize, NormValue)> = None;
        let mut fuzzy = false;
        for (r, row) in m.iter().enumerate().skip(col) {
            match row[col].norm_valuation() {
                Valuation::Infinite => {}
                Valuation::AtLeast(_) => fuzzy = true,
                Valuation::Finite(v) => {
                    let nv = NormValue::Pow(-v);
                    if best.is_none_or(|(_, b)| nv > b) {
                        best = Some((r, nv));
                    }
                }
            }
        }
        let Some((pr, _)) = best else {
            if fuzzy {
                return Err(Error::precision("inverse pivot is zero at precision"));
            }
            return Ok(None);
        };
        m.swap(col, pr);
        let inv = m[col][col].inv()?;
        for c in 0..2 * n {
            m[col][c] = &m[col][c] * &inv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_exact_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in 0..2 * n {
                let t = &f * &m[col][c];
                m[r][c] = &m[r][c] - &t;
            }
        }
    }
    Ok(Some(m.into_iter().map(|r| r[n..].to_vec()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{FieldConfig, MuKind};

    fn cfg() -> FieldConfig {
        FieldConfig::new(5, MuKind::NonResidue, 32).unwrap()
    }

    fn mat(c: FieldConfig, xs: &[&[i64]]) -> Rows {
        xs.iter().map(|r| r.iter().map(|&x| c.ext(x)).collect()).collect()
    }

    #[test]
    fn rank_examples() {
        let c = cfg();
        assert_eq!(rank(&mat(c, &[&[1, 5], &[5, 25]]), 2).unwrap(), 1);
        assert_eq!(rank(&mat(c, &[&[1, 0], &[0, 1]]), 2).unwrap(), 2);
        assert_eq!(rank(&mat(c, &[&[0, 0], &[0, 0]]), 2).unwrap(), 0);
        assert_eq!(rank(&mat(c, &[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]), 3).unwrap(), 2);
    }

    #[test]
    fn kernel_of_row() {
        let c = cfg();
        let k = kernel(&mat(c, &[&[1, 1, 0]]), 3, &c.zero()).unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!((&v[0] + &v[1]).is_zero());
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let c = cfg();
        let m = mat(c, &[&[1, 5], &[25, 3]]);
        let inv = inverse(&m).unwrap().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let s = &(&m[i][0] * &inv[0][j]) + &(&m[i][1] * &inv[1][j]);
                assert_eq!(s, if i == j { c.one() } else { c.zero() });
            }
        }
        assert!(inverse(&mat(c, &[&[1, 5], &[5, 25]])).unwrap().is_none());
    }
}
