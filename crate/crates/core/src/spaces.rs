//! Finitely supported vectors of the coordinate space over Q_p(√μ): sup-norm,
//! the canonical inner product, norm- and IP-orthogonality, and bases.

use crate::error::{Error, Result};
use crate::padic::{residue_rank, ExtScalar, FieldConfig, NormValue, Residue, Valuation};

#[derive(Clone, Debug)]
pub struct Vector {
    cfg: FieldConfig,
    coeffs: Vec<ExtScalar>,
}

impl Vector {
    pub fn new(cfg: FieldConfig, coeffs: Vec<ExtScalar>) -> Self {
        Vector { cfg, coeffs }
    }

    pub fn zeros(cfg: FieldConfig, dim: usize) -> Self {
        Vector { cfg, coeffs: vec![cfg.zero(); dim] }
    }

    /// The canonical basis vector e_i (0-based index).
    pub fn basis(cfg: FieldConfig, dim: usize, i: usize) -> Self {
        let mut v = Vector::zeros(cfg, dim);
        v.coeffs[i] = cfg.one();
        v
    }

    pub fn from_ints(cfg: FieldConfig, xs: &[i64]) -> Self {
        Vector { cfg, coeffs: xs.iter().map(|&x| cfg.ext(x)).collect() }
    }

    pub fn cfg(&self) -> FieldConfig {
        self.cfg
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[ExtScalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<ExtScalar> {
        self.coeffs
    }

    pub fn get(&self, i: usize) -> &ExtScalar {
        &self.coeffs[i]
    }

    fn check_dim(&self, other: &Vector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        self.check_dim(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        self.check_dim(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    fn zip(&self, other: &Vector, f: impl Fn(&ExtScalar, &ExtScalar) -> ExtScalar) -> Vector {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect();
        Vector { cfg: self.cfg, coeffs }
    }

    pub fn scale(&self, s: &ExtScalar) -> Vector {
        Vector { cfg: self.cfg, coeffs: self.coeffs.iter().map(|c| s * c).collect() }
    }

    pub fn neg(&self) -> Vector {
        Vector { cfg: self.cfg, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Coordinatewise conjugation, i.e. the canonical conjugation J₀.
    pub fn conj(&self) -> Vector {
        Vector { cfg: self.cfg, coeffs: self.coeffs.iter().map(ExtScalar::conj).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(ExtScalar::is_zero)
    }

    pub fn eq_at_precision(&self, other: &Vector) -> bool {
        self.dim() == other.dim() && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.eq_at_precision(b))
    }

    /// Linear combination Σ c_k v_k of equal-dimension vectors.
    pub fn combination(cfg: FieldConfig, dim: usize, terms: &[(ExtScalar, &Vector)]) -> Result<Vector> {
        let mut acc = Vector::zeros(cfg, dim);
        for (c, v) in terms {
            acc = acc.add(&v.scale(c))?;
        }
        Ok(acc)
    }
}

impl PartialEq for Vector {
    fn eq(&self, other: &Vector) -> bool {
        self.eq_at_precision(other)
    }
}

/// Maximum of absolute values. Coordinates that are zero at precision only
/// give an upper bound, which is harmless when a known coordinate dominates it.
pub fn max_abs<'a>(xs: impl IntoIterator<Item = &'a ExtScalar>) -> Result<NormValue> {
    let mut best = NormValue::Zero;
    let mut unknown_bound: Option<i64> = None;
    for x in xs {
        match x.norm_valuation() {
            Valuation::Infinite => {}
            Valuation::Finite(v) => best = best.max(NormValue::Pow(-v)),
            Valuation::AtLeast(v) => unknown_bound = Some(unknown_bound.map_or(-v, |b: i64| b.max(-v))),
        }
    }
    match unknown_bound {
        Some(b) if best < NormValue::Pow(b) => Err(Error::precision("sup-norm dominated by a coordinate that is zero at precision")),
        _ => Ok(best),
    }
}

pub fn sup_norm(x: &Vector) -> Result<NormValue> {
    max_abs(x.coeffs())
}

/// Σ conj(x_i)·y_i, conjugate-linear in the first argument.
pub fn ip(x: &Vector, y: &Vector) -> Result<ExtScalar> {
    x.check_dim(y)?;
    let mut acc = x.cfg.zero();
    for (a, b) in x.coeffs.iter().zip(&y.coeffs) {
        acc = &acc + &(&a.conj() * b);
    }
    Ok(acc)
}

/// Scalar c with |c|·‖x‖ = 1, chosen as p^k or, for half-integral norms,
/// p^k/√μ.
pub fn normalizer(cfg: FieldConfig, norm: NormValue) -> Result<ExtScalar> {
    let e = norm.half_exponent().ok_or(Error::ZeroVector)?;
    if e.rem_euclid(2) == 0 {
        Ok(ExtScalar::from_qp(cfg, cfg.p_pow(e / 2)))
    } else {
        // p^((e+1)/2) / √μ = p^((e+1)/2) · √μ / μ
        let k = (e + 1).div_euclid(2);
        let coef = cfg.p_pow(k).div(&cfg.qp(cfg.mu()))?;
        Ok(ExtScalar::new(cfg, cfg.qp(0), coef))
    }
}

/// Rescale x to sup-norm 1 by the normalizer convention above.
pub fn normalize(x: &Vector) -> Result<Vector> {
    let n = sup_norm(x)?;
    if n.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(x.scale(&normalizer(x.cfg, n)?))
}

/// Reduction of a vector of sup-norm at most 1 into the residue field.
pub fn residue_vector(x: &Vector) -> Result<Vec<Residue>> {
    x.coeffs.iter().map(ExtScalar::residue).collect()
}

/// Rank over the residue field of the normalized images of the given vectors.
pub fn normalized_residue_rank(vs: &[Vector]) -> Result<usize> {
    let Some(first) = vs.first() else { return Ok(0) };
    let rows = vs.iter().map(|v| residue_vector(&normalize(v)?)).collect::<Result<Vec<_>>>()?;
    Ok(residue_rank(&first.cfg.residue_field(), &rows))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthoReport {
    pub norm_orthogonal: bool,
    pub ip_orthogonal: bool,
    /// dist(x, span y) / ‖x‖, in (0, 1]
    pub t_coefficient: NormValue,
}

/// min over λ of ‖x − λy‖. In an ultrametric field the sublevel sets of
/// λ ↦ max_j |x_j − λ y_j| are intersections of nested balls centred at the
/// ratios x_j / y_j, so the minimum is attained at one of those ratios or at 0.
pub fn distance_to_line(x: &Vector, y: &Vector) -> Result<NormValue> {
    x.check_dim(y)?;
    let mut best = sup_norm(x)?;
    for (xj, yj) in x.coeffs.iter().zip(&y.coeffs) {
        if yj.is_zero() {
            continue;
        }
        let lambda = xj.div(yj)?;
        let d = sup_norm(&x.sub(&y.scale(&lambda))?)?;
        best = best.min(d);
    }
    Ok(best)
}

pub fn norm_orthogonal(x: &Vector, y: &Vector) -> Result<OrthoReport> {
    x.check_dim(y)?;
    if x.is_zero() || y.is_zero() {
        return Err(Error::ZeroVector);
    }
    let norm_orthogonal = normalized_residue_rank(&[x.clone(), y.clone()])? == 2;
    let ip_orthogonal = ip(x, y)?.is_zero();
    let dist = distance_to_line(x, y)?;
    let t = dist.ratio(sup_norm(x)?).ok_or(Error::ZeroVector)?;
    Ok(OrthoReport { norm_orthogonal, ip_orthogonal, t_coefficient: t.min(NormValue::ONE) })
}

/// Every vector has norm 1 and the residues are linearly independent, i.e.
/// the family is mutually norm-orthogonal.
pub fn is_normal_system(vs: &[Vector]) -> Result<bool> {
    for v in vs {
        if sup_norm(v)? != NormValue::ONE {
            return Ok(false);
        }
    }
    Ok(normalized_residue_rank(vs)? == vs.len())
}

/// Pairwise ⟨v_i, v_j⟩ = δ_ij together with normality.
pub fn is_orthonormal_system(vs: &[Vector]) -> bool {
    fn check(vs: &[Vector]) -> Result<bool> {
        let Some(first) = vs.first() else { return Ok(false) };
        let d = first.dim();
        if vs.iter().any(|v| v.dim() != d) {
            return Ok(false);
        }
        for (i, a) in vs.iter().enumerate() {
            for (j, b) in vs.iter().enumerate().skip(i) {
                let g = ip(a, b)?;
                let ok = if i == j { g.is_one() } else { g.is_zero() };
                if !ok {
                    return Ok(false);
                }
            }
        }
        is_normal_system(vs)
    }
    check(vs).unwrap_or(false)
}

/// An orthonormal system of exactly `dim` vectors in a space of that dimension.
pub fn is_orthonormal_basis(vs: &[Vector], dim: usize) -> bool {
    vs.len() == dim && vs.iter().all(|v| v.dim() == dim) && is_orthonormal_system(vs)
}

/// Coordinates with respect to an abstract orthonormal basis, realised as a
/// vector of the coordinate space.
pub fn canonical_isomorphism(cfg: FieldConfig, coords: &[ExtScalar]) -> Vector {
    Vector::new(cfg, coords.to_vec())
}

pub fn canonical_coordinates(x: &Vector) -> Vec<ExtScalar> {
    x.coeffs.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::MuKind;

    fn f5() -> FieldConfig {
        FieldConfig::new(5, MuKind::NonResidue, 32).unwrap()
    }

    #[test]
    fn sup_norm_examples() {
        let cfg = f5();
        assert_eq!(sup_norm(&Vector::from_ints(cfg, &[1, 5, 25])).unwrap(), NormValue::ONE);
        assert_eq!(sup_norm(&Vector::zeros(cfg, 3)).unwrap(), NormValue::Zero);
        let x = Vector::new(cfg, vec![cfg.sqrt_mu(), cfg.ext_ratio(1, 5)]);
        assert_eq!(sup_norm(&x).unwrap(), NormValue::Pow(2));
    }

    #[test]
    fn ip_examples() {
        let cfg = f5();
        let e1 = Vector::basis(cfg, 2, 0);
        let e2 = Vector::basis(cfg, 2, 1);
        assert!(ip(&e1, &e2).unwrap().is_zero());
        assert!(ip(&e1, &e1).unwrap().is_one());
        let r = Vector::new(cfg, vec![cfg.sqrt_mu(), cfg.zero()]);
        assert_eq!(ip(&r, &r).unwrap(), cfg.ext(-2));
        assert!(matches!(ip(&e1, &Vector::zeros(cfg, 3)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn orthogonality_examples() {
        let cfg = f5();
        let e1 = Vector::basis(cfg, 2, 0);
        let e2 = Vector::basis(cfg, 2, 1);
        let r = norm_orthogonal(&e1, &e2).unwrap();
        assert!(r.norm_orthogonal && r.ip_orthogonal);
        assert_eq!(r.t_coefficient, NormValue::ONE);

        let near = Vector::from_ints(cfg, &[1, 5]);
        let r = norm_orthogonal(&e1, &near).unwrap();
        assert!(!r.norm_orthogonal);
        assert_eq!(r.t_coefficient, NormValue::Pow(-2));

        let r = norm_orthogonal(&e1, &Vector::from_ints(cfg, &[1, 1])).unwrap();
        assert!(r.norm_orthogonal && !r.ip_orthogonal);
        assert_eq!(norm_orthogonal(&e1, &Vector::zeros(cfg, 2)).unwrap_err(), Error::ZeroVector);
    }

    #[test]
    fn ramified_normalization() {
        let cfg = FieldConfig::new(5, MuKind::Uniformizer, 32).unwrap();
        let x = Vector::new(cfg, vec![cfg.sqrt_mu(), cfg.ext(5)]);
        let n = normalize(&x).unwrap();
        assert_eq!(sup_norm(&n).unwrap(), NormValue::ONE);
        assert_eq!(residue_vector(&n).unwrap(), vec![Residue { a: 1, b: 0 }, Residue { a: 0, b: 0 }]);
    }

    #[test]
    fn orthonormal_systems() {
        let cfg = f5();
        let basis: Vec<Vector> = (0..3).map(|i| Vector::basis(cfg, 3, i)).collect();
        assert!(is_orthonormal_basis(&basis, 3));
        let bad = vec![Vector::basis(cfg, 2, 0), Vector::basis(cfg, 2, 1).scale(&cfg.ext_ratio(1, 5))];
        assert!(!is_orthonormal_system(&bad));
        assert!(!is_orthonormal_basis(&basis[..2], 3));
    }

    #[test]
    fn canonical_isomorphism_roundtrip() {
        let cfg = f5();
        let coords = vec![cfg.ext(5), cfg.sqrt_mu()];
        let v = canonical_isomorphism(cfg, &coords);
        assert_eq!(canonical_coordinates(&v), coords);
        assert_eq!(sup_norm(&v).unwrap(), NormValue::ONE);
        assert_eq!(canonical_isomorphism(cfg, &[cfg.one(), cfg.zero()]), Vector::basis(cfg, 2, 0));
    }
}
