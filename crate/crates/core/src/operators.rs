//! Matrix operators between coordinate spaces: a finite window of explicit
//! entries, optionally continued by an affine valuation profile so that
//! infinite matrices with decidable limit behaviour can be represented.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::padic::{ExtScalar, FieldConfig, NormValue, Valuation};
use crate::spaces::{max_abs, Vector};

/// Outside the explicit window, entry (m, n) (1-based) is p^⌈αm + βn + γ⌉.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailProfile {
    alpha: BigRational,
    beta: BigRational,
    gamma: BigRational,
}

fn ceil_rational(r: &BigRational) -> i64 {
    let (q, rem) = r.numer().div_mod_floor(r.denom());
    let q = if rem.is_zero() { q } else { q + 1 };
    q.to_i64().expect("profile valuation fits in i64")
}

impl TailProfile {
    pub fn new(alpha: BigRational, beta: BigRational, gamma: BigRational) -> Result<Self> {
        if alpha.is_negative() || beta.is_negative() {
            return Err(Error::ShapeMismatch("tail slopes must be non-negative".into()));
        }
        Ok(TailProfile { alpha, beta, gamma })
    }

    pub fn from_ratios(alpha: (i64, i64), beta: (i64, i64), gamma: (i64, i64)) -> Result<Self> {
        let r = |(n, d): (i64, i64)| BigRational::new(BigInt::from(n), BigInt::from(d));
        TailProfile::new(r(alpha), r(beta), r(gamma))
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    pub fn beta(&self) -> &BigRational {
        &self.beta
    }

    pub fn gamma(&self) -> &BigRational {
        &self.gamma
    }

    /// Valuation of the entry at 1-based position (m, n).
    pub fn valuation_at(&self, m: usize, n: usize) -> i64 {
        let v = &self.alpha * BigInt::from(m as u64) + &self.beta * BigInt::from(n as u64) + &self.gamma;
        ceil_rational(&v)
    }

    fn transposed(&self) -> TailProfile {
        TailProfile { alpha: self.beta.clone(), beta: self.alpha.clone(), gamma: self.gamma.clone() }
    }
}

/// Number of rows or columns of the full (not windowed) matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extent {
    Finite(usize),
    Infinite,
}

impl Extent {
    fn exceeds(self, k: usize) -> bool {
        match self {
            Extent::Finite(n) => n > k,
            Extent::Infinite => true,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Extent::Finite(_))
    }
}

#[derive(Clone, Debug)]
pub struct Tail {
    pub profile: TailProfile,
    pub rows: Extent,
    pub cols: Extent,
}

#[derive(Clone, Debug)]
pub struct MatrixOperator {
    cfg: FieldConfig,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<ExtScalar>>,
    tail: Option<Tail>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub all_over: bool,
    pub bounded: bool,
    pub adjointable: bool,
    pub trace_class: bool,
    /// Trace class coincides with compact-and-adjointable.
    pub compact_and_adjointable: bool,
    pub op_norm: Option<NormValue>,
}

impl MatrixOperator {
    pub fn new(cfg: FieldConfig, rows: usize, cols: usize, entries: Vec<Vec<ExtScalar>>) -> Result<Self> {
        if entries.len() != rows {
            return Err(Error::DimensionMismatch { expected: rows, found: entries.len() });
        }
        if let Some(r) = entries.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
        }
        Ok(MatrixOperator { cfg, rows, cols, entries, tail: None })
    }

    pub fn from_ints(cfg: FieldConfig, xs: &[&[i64]]) -> Result<Self> {
        let rows = xs.len();
        let cols = xs.first().map_or(0, |r| r.len());
        let entries = xs.iter().map(|r| r.iter().map(|&x| cfg.ext(x)).collect()).collect();
        MatrixOperator::new(cfg, rows, cols, entries)
    }

    /// Window plus tail; the extents must contain the window.
    pub fn with_tail(
        cfg: FieldConfig,
        rows: usize,
        cols: usize,
        entries: Vec<Vec<ExtScalar>>,
        profile: TailProfile,
        row_extent: Extent,
        col_extent: Extent,
    ) -> Result<Self> {
        let mut op = MatrixOperator::new(cfg, rows, cols, entries)?;
        for (ext, w) in [(row_extent, rows), (col_extent, cols)] {
            if let Extent::Finite(n) = ext {
                if n < w {
                    return Err(Error::ShapeMismatch(format!("extent {n} smaller than window {w}")));
                }
            }
        }
        op.tail = Some(Tail { profile, rows: row_extent, cols: col_extent });
        Ok(op)
    }

    /// Infinite in both directions with an empty window.
    pub fn profiled(cfg: FieldConfig, profile: TailProfile) -> Self {
        MatrixOperator::with_tail(cfg, 0, 0, Vec::new(), profile, Extent::Infinite, Extent::Infinite)
            .expect("empty window fits any extent")
    }

    pub fn identity(cfg: FieldConfig, d: usize) -> Self {
        let entries = (0..d).map(|i| (0..d).map(|j| if i == j { cfg.one() } else { cfg.zero() }).collect()).collect();
        MatrixOperator { cfg, rows: d, cols: d, entries, tail: None }
    }

    pub fn zeros(cfg: FieldConfig, rows: usize, cols: usize) -> Self {
        MatrixOperator { cfg, rows, cols, entries: vec![vec![cfg.zero(); cols]; rows], tail: None }
    }

    pub fn diagonal(cfg: FieldConfig, diag: &[ExtScalar]) -> Self {
        let mut m = MatrixOperator::zeros(cfg, diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.entries[i][i] = d.clone();
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cfg: FieldConfig, cols: &[Vector]) -> Result<Self> {
        let rows = cols.first().map_or(0, Vector::dim);
        let mut m = MatrixOperator::zeros(cfg, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.dim() != rows {
                return Err(Error::DimensionMismatch { expected: rows, found: c.dim() });
            }
            for i in 0..rows {
                m.entries[i][j] = c.get(i).clone();
            }
        }
        Ok(m)
    }

    pub fn cfg(&self) -> FieldConfig {
        self.cfg
    }

    /// Window rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Window columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn tail(&self) -> Option<&Tail> {
        self.tail.as_ref()
    }

    pub fn is_finite(&self) -> bool {
        self.tail.is_none()
    }

    pub fn row_extent(&self) -> Extent {
        self.tail.as_ref().map_or(Extent::Finite(self.rows), |t| t.rows)
    }

    pub fn col_extent(&self) -> Extent {
        self.tail.as_ref().map_or(Extent::Finite(self.cols), |t| t.cols)
    }

    pub fn entries(&self) -> &[Vec<ExtScalar>] {
        &self.entries
    }

    /// Entry at 0-based (m, n), materialising the tail outside the window.
    pub fn entry(&self, m: usize, n: usize) -> ExtScalar {
        if m < self.rows && n < self.cols {
            return self.entries[m][n].clone();
        }
        match &self.tail {
            Some(t) if !t.rows.exceeds(m) || !t.cols.exceeds(n) => {
                panic!("entry ({m}, {n}) outside the operator")
            }
            Some(t) => ExtScalar::from_qp(self.cfg, self.cfg.p_pow(t.profile.valuation_at(m + 1, n + 1))),
            None => panic!("entry ({m}, {n}) outside a {}x{} matrix", self.rows, self.cols),
        }
    }

    /// Smallest valuation among tail entries outside the leading block of
    /// size rows_l × cols_l (`None` when no tail entry lies outside).
    fn tail_valuation_outside(&self, rows_l: usize, cols_l: usize) -> Option<i64> {
        let t = self.tail.as_ref()?;
        let (r, c) = (self.rows, self.cols);
        // outside the block and outside the window is a union of four
        // quadrants {m >= a, n >= b}; the profile is monotone, so each
        // quadrant attains its minimum at the corner
        let quadrants = [(rows_l.max(r), 0), (rows_l, c), (r, cols_l), (0, cols_l.max(c))];
        quadrants
            .iter()
            .filter(|&&(a, b)| t.rows.exceeds(a) && t.cols.exceeds(b))
            .map(|&(a, b)| t.profile.valuation_at(a + 1, b + 1))
            .min()
    }

    /// Limits of the entries along columns, along rows and jointly, decided
    /// from the slopes and extents of the profile.
    pub fn classify(&self) -> Result<ClassificationReport> {
        let Some(t) = &self.tail else {
            let n = max_abs(self.entries.iter().flatten())?;
            return Ok(ClassificationReport {
                all_over: true,
                bounded: true,
                adjointable: true,
                trace_class: true,
                compact_and_adjointable: true,
                op_norm: Some(n),
            });
        };
        let columns_vanish = t.rows.is_finite() || t.profile.alpha.is_positive();
        let rows_vanish = t.cols.is_finite() || t.profile.beta.is_positive();
        // sup over the tail is finite since the profile is bounded below
        let bounded = columns_vanish;
        let adjointable = bounded && rows_vanish;
        let trace_class = columns_vanish && rows_vanish;
        let op_norm = if bounded { Some(self.sup_entry_norm()?) } else { None };
        Ok(ClassificationReport {
            all_over: bounded,
            bounded,
            adjointable,
            trace_class,
            compact_and_adjointable: trace_class,
            op_norm,
        })
    }

    fn sup_entry_norm(&self) -> Result<NormValue> {
        let w = max_abs(self.entries.iter().flatten())?;
        Ok(match self.tail_valuation_outside(self.rows, self.cols) {
            Some(v) => w.max(NormValue::from_valuation(v)),
            None => w,
        })
    }

    /// ‖B‖ = sup |B_mn|.
    pub fn op_norm(&self) -> Result<NormValue> {
        let r = self.classify()?;
        r.op_norm.ok_or(Error::NotBounded)
    }

    /// max_n ‖B e_n‖ over the window columns (finite matrices only).
    pub fn max_column_norm(&self) -> Result<NormValue> {
        let mut best = NormValue::Zero;
        for j in 0..self.cols {
            best = best.max(max_abs(self.entries.iter().map(|r| &r[j]))?);
        }
        Ok(best)
    }

    /// Explicit finite matrix of the leading rows_l × cols_l block.
    pub fn block(&self, rows_l: usize, cols_l: usize) -> MatrixOperator {
        let entries = (0..rows_l).map(|m| (0..cols_l).map(|n| self.entry(m, n)).collect()).collect();
        MatrixOperator { cfg: self.cfg, rows: rows_l, cols: cols_l, entries, tail: None }
    }

    fn extent_len(e: Extent, at_least: usize) -> Option<usize> {
        match e {
            Extent::Finite(n) => Some(n.max(at_least)),
            Extent::Infinite => None,
        }
    }

    /// The leading square block T_l (square in the sense l × l, clipped to
    /// finite extents).
    pub fn truncate(&self, l: usize) -> MatrixOperator {
        let r = MatrixOperator::extent_len(self.row_extent(), 0).map_or(l, |n| n.min(l));
        let c = MatrixOperator::extent_len(self.col_extent(), 0).map_or(l, |n| n.min(l));
        self.block(r, c)
    }

    /// ‖T − T_l‖: the largest entry outside the leading l × l block.
    pub fn residual_norm(&self, l: usize) -> Result<NormValue> {
        let mut best = NormValue::Zero;
        for (m, row) in self.entries.iter().enumerate() {
            for (n, x) in row.iter().enumerate() {
                if m >= l || n >= l {
                    best = best.max(x.abs()?);
                }
            }
        }
        if let Some(v) = self.tail_valuation_outside(l, l) {
            best = best.max(NormValue::from_valuation(v));
        }
        Ok(best)
    }

    /// Smallest square block size beyond which every entry has valuation at
    /// least `bound`, provided the entries vanish jointly.
    fn cutoff_for(&self, bound: i64) -> Result<usize> {
        if self.tail.is_none() {
            return Ok(self.rows.max(self.cols));
        }
        if !self.classify()?.trace_class {
            return Err(Error::NotTraceClass);
        }
        let mut l = self.rows.max(self.cols);
        while self.tail_valuation_outside(l, l).is_some_and(|v| v < bound) {
            l += 1;
        }
        Ok(l)
    }

    /// T_l for the least l whose residual lies below the working precision
    /// relative to ‖T‖.
    pub fn truncate_to_precision(&self) -> Result<MatrixOperator> {
        if self.tail.is_none() {
            return Ok(self.clone());
        }
        let reference = norm_valuation_floor(self.op_norm()?);
        let l = self.cutoff_for(reference + self.cfg.precision() as i64)?;
        Ok(self.truncate(l))
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        let cfg = self.cfg;
        let in_dim = x.dim();
        if let Extent::Finite(n) = self.col_extent() {
            if in_dim > n || (self.tail.is_none() && in_dim != n) {
                return Err(Error::DimensionMismatch { expected: n, found: in_dim });
            }
        }
        let out_rows = match self.row_extent() {
            Extent::Finite(n) => n,
            Extent::Infinite => {
                let t = self.tail.as_ref().unwrap();
                if !t.profile.alpha.is_positive() {
                    return Err(Error::NotBounded);
                }
                // rows beyond the window contribute terms of valuation at
                // least ⌈α m + β + γ⌉ + v(x); stop once they fall below precision
                let xv = match crate::spaces::sup_norm(x)?.half_exponent() {
                    None => return Ok(Vector::zeros(cfg, self.rows)),
                    Some(e) => norm_valuation_floor(NormValue::Pow(e)),
                };
                let head = self.block(self.rows, in_dim).apply_finite(x)?;
                let reference = match crate::spaces::sup_norm(&head)?.half_exponent() {
                    Some(e) => norm_valuation_floor(NormValue::Pow(e)).min(t.profile.valuation_at(self.rows + 1, 1) + xv),
                    None => t.profile.valuation_at(self.rows + 1, 1) + xv,
                };
                let bound = reference + cfg.precision() as i64;
                let mut m = self.rows;
                while t.profile.valuation_at(m + 1, 1) + xv < bound {
                    m += 1;
                }
                m
            }
        };
        self.block(out_rows, in_dim).apply_finite(x)
    }

    fn apply_finite(&self, x: &Vector) -> Result<Vector> {
        if x.dim() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: x.dim() });
        }
        let coeffs = self
            .entries
            .iter()
            .map(|row| {
                row.iter().zip(x.coeffs()).fold(self.cfg.zero(), |acc, (b, c)| &acc + &(b * c))
            })
            .collect();
        Ok(Vector::new(self.cfg, coeffs))
    }

    /// Conjugate transpose, with the profile transposed alongside.
    pub fn adjoint(&self) -> Result<MatrixOperator> {
        if !self.classify()?.adjointable {
            return Err(Error::NotAdjointable);
        }
        let entries = (0..self.cols).map(|n| (0..self.rows).map(|m| self.entries[m][n].conj()).collect()).collect();
        let tail = self.tail.as_ref().map(|t| Tail { profile: t.profile.transposed(), rows: t.cols, cols: t.rows });
        Ok(MatrixOperator { cfg: self.cfg, rows: self.cols, cols: self.rows, entries, tail })
    }

    /// Entrywise conjugate (finite part only).
    pub fn conj_entries(&self) -> MatrixOperator {
        let entries = self.entries.iter().map(|r| r.iter().map(ExtScalar::conj).collect()).collect();
        MatrixOperator { cfg: self.cfg, rows: self.rows, cols: self.cols, entries, tail: self.tail.clone() }
    }

    pub fn transpose(&self) -> MatrixOperator {
        let entries = (0..self.cols).map(|n| (0..self.rows).map(|m| self.entries[m][n].clone()).collect()).collect();
        MatrixOperator { cfg: self.cfg, rows: self.cols, cols: self.rows, entries, tail: None }
    }

    fn require_finite(&self) -> Result<()> {
        if self.tail.is_some() {
            return Err(Error::ShapeMismatch("operation needs a finite matrix".into()));
        }
        Ok(())
    }

    /// Product self · other of finite matrices.
    pub fn compose(&self, other: &MatrixOperator) -> Result<MatrixOperator> {
        self.require_finite()?;
        other.require_finite()?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = MatrixOperator::zeros(self.cfg, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.cfg.zero();
                for k in 0..self.cols {
                    acc = &acc + &(&self.entries[i][k] * &other.entries[k][j]);
                }
                out.entries[i][j] = acc;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &MatrixOperator) -> Result<MatrixOperator> {
        self.require_finite()?;
        other.require_finite()?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch("operands have different shapes".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(MatrixOperator { cfg: self.cfg, rows: self.rows, cols: self.cols, entries, tail: None })
    }

    pub fn scale(&self, s: &ExtScalar) -> MatrixOperator {
        let entries = self.entries.iter().map(|r| r.iter().map(|x| s * x).collect()).collect();
        MatrixOperator { cfg: self.cfg, rows: self.rows, cols: self.cols, entries, tail: None }
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector::new(self.cfg, self.entries.iter().map(|r| r[j].clone()).collect())
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn inverse(&self) -> Result<Option<MatrixOperator>> {
        self.require_finite()?;
        if self.rows != self.cols {
            return Ok(None);
        }
        Ok(crate::linalg::inverse(&self.entries)?
            .map(|entries| MatrixOperator { cfg: self.cfg, rows: self.rows, cols: self.cols, entries, tail: None }))
    }

    pub fn rank(&self) -> Result<usize> {
        self.require_finite()?;
        crate::linalg::rank(&self.entries, self.cols)
    }

    pub fn eq_at_precision(&self, other: &MatrixOperator) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.tail.as_ref().map(|t| (&t.profile, t.rows, t.cols)) == other.tail.as_ref().map(|t| (&t.profile, t.rows, t.cols))
            && self.entries.iter().flatten().zip(other.entries.iter().flatten()).all(|(a, b)| a.eq_at_precision(b))
    }

    pub fn is_identity(&self) -> bool {
        self.tail.is_none() && self.rows == self.cols && self.eq_at_precision(&MatrixOperator::identity(self.cfg, self.rows))
    }

    /// Σ_m T_mm. Profiled diagonals are summed until the next term's valuation
    /// exceeds that of the partial sum by the working precision; the result is
    /// then known modulo p raised to the first omitted term's valuation.
    pub fn trace(&self) -> Result<ExtScalar> {
        if !self.classify()?.trace_class {
            return Err(Error::NotTraceClass);
        }
        if self.row_extent() != self.col_extent() {
            return Err(Error::ShapeMismatch("trace needs matching row and column index sets".into()));
        }
        let Some(t) = &self.tail else {
            if self.rows != self.cols {
                return Err(Error::ShapeMismatch(format!("{}x{} matrix has no trace", self.rows, self.cols)));
            }
            return Ok((0..self.rows).fold(self.cfg.zero(), |acc, i| &acc + &self.entries[i][i]));
        };
        let window = self.rows.max(self.cols);
        let mut sum = (0..window).fold(self.cfg.zero(), |acc, i| &acc + &self.entry(i, i));
        let limit = match t.rows {
            Extent::Finite(n) => n,
            Extent::Infinite => usize::MAX,
        };
        let n = self.cfg.precision() as i64;
        let mut m = window;
        while m < limit {
            let next_val = t.profile.valuation_at(m + 1, m + 1);
            let reference = match sum.norm_valuation() {
                Valuation::Finite(v) => v.div_euclid(2),
                _ => next_val,
            };
            if next_val >= reference + n && m > window {
                return Ok(sum.truncate(next_val));
            }
            sum = &sum + &self.entry(m, m);
            m += 1;
        }
        Ok(sum)
    }

    pub fn e_basis(cfg: FieldConfig, j: usize, k: usize, rows: usize, cols: usize) -> Result<MatrixOperator> {
        if j >= rows || k >= cols {
            return Err(Error::IndexOutOfRange(format!("({j}, {k}) in a {rows}x{cols} matrix")));
        }
        let mut m = MatrixOperator::zeros(cfg, rows, cols);
        m.entries[j][k] = cfg.one();
        Ok(m)
    }
}

/// The valuation v with |x| = p^(-v), rounded down for half-integral norms.
fn norm_valuation_floor(n: NormValue) -> i64 {
    match n {
        NormValue::Zero => 0,
        NormValue::Pow(e) => (-e).div_euclid(2),
    }
}

/// tr(S*T) = Σ conj(S_mn) T_mn, summing profiled operators over the leading
/// block outside of which every term lies below the working precision.
pub fn hs_ip(s: &MatrixOperator, t: &MatrixOperator) -> Result<ExtScalar> {
    for op in [s, t] {
        if !op.classify()?.trace_class {
            return Err(Error::NotTraceClass);
        }
    }
    if s.row_extent() != t.row_extent() || s.col_extent() != t.col_extent() {
        return Err(Error::ShapeMismatch("Hilbert-Schmidt product of differently shaped operators".into()));
    }
    let (sb, tb, precision_bound) = if s.is_finite() && t.is_finite() {
        if (s.rows, s.cols) != (t.rows, t.cols) {
            return Err(Error::ShapeMismatch("Hilbert-Schmidt product of differently shaped operators".into()));
        }
        (s.clone(), t.clone(), None)
    } else {
        let vs = norm_valuation_floor(s.op_norm()?);
        let vt = norm_valuation_floor(t.op_norm()?);
        let n = s.cfg.precision() as i64;
        let l = s.cutoff_for(vs + n)?.max(t.cutoff_for(vt + n)?);
        (s.truncate(l), t.truncate(l), Some(vs + vt + n))
    };
    let mut acc = s.cfg.zero();
    for (rs, rt) in sb.entries.iter().zip(&tb.entries) {
        for (a, b) in rs.iter().zip(rt) {
            acc = &acc + &(&a.conj() * b);
        }
    }
    Ok(match precision_bound {
        Some(b) => acc.truncate(b),
        None => acc,
    })
}
