//! The algebraic tensor product of two coordinate spaces, held in canonical
//! coefficient form λ_ij with respect to the product basis e_i ⊗ f_j.

use crate::error::{Error, Result};
use crate::padic::{residue_rank, ExtScalar, FieldConfig, NormValue};
use crate::spaces::{self, ip, max_abs, Vector};

#[derive(Clone, Debug)]
pub struct Tensor {
    cfg: FieldConfig,
    dh: usize,
    dk: usize,
    lambda: Vec<Vec<ExtScalar>>,
    pairs: Option<Vec<(Vector, Vector)>>,
}

impl Tensor {
    pub fn zeros(cfg: FieldConfig, dh: usize, dk: usize) -> Self {
        Tensor { cfg, dh, dk, lambda: vec![vec![cfg.zero(); dk]; dh], pairs: None }
    }

    pub fn from_lambda(cfg: FieldConfig, dh: usize, dk: usize, lambda: Vec<Vec<ExtScalar>>) -> Result<Self> {
        if lambda.len() != dh {
            return Err(Error::DimensionMismatch { expected: dh, found: lambda.len() });
        }
        if let Some(r) = lambda.iter().find(|r| r.len() != dk) {
            return Err(Error::DimensionMismatch { expected: dk, found: r.len() });
        }
        Ok(Tensor { cfg, dh, dk, lambda, pairs: None })
    }

    /// e_i ⊗ f_j (0-based).
    pub fn basis(cfg: FieldConfig, dh: usize, dk: usize, i: usize, j: usize) -> Self {
        let mut t = Tensor::zeros(cfg, dh, dk);
        t.lambda[i][j] = cfg.one();
        t
    }

    /// Σ x_k ⊗ y_k, keeping the pair list alongside the coefficients.
    pub fn from_pairs(cfg: FieldConfig, dh: usize, dk: usize, pairs: Vec<(Vector, Vector)>) -> Result<Self> {
        let mut t = Tensor::zeros(cfg, dh, dk);
        for (x, y) in &pairs {
            if x.dim() != dh {
                return Err(Error::DimensionMismatch { expected: dh, found: x.dim() });
            }
            if y.dim() != dk {
                return Err(Error::DimensionMismatch { expected: dk, found: y.dim() });
            }
            for i in 0..dh {
                for j in 0..dk {
                    t.lambda[i][j] = &t.lambda[i][j] + &(x.get(i) * y.get(j));
                }
            }
        }
        t.pairs = Some(pairs);
        Ok(t)
    }

    pub fn cfg(&self) -> FieldConfig {
        self.cfg
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dh, self.dk)
    }

    pub fn lambda(&self) -> &[Vec<ExtScalar>] {
        &self.lambda
    }

    pub fn pairs(&self) -> Option<&[(Vector, Vector)]> {
        self.pairs.as_deref()
    }

    fn check_dims(&self, other: &Tensor) -> Result<()> {
        if self.dh != other.dh {
            return Err(Error::DimensionMismatch { expected: self.dh, found: other.dh });
        }
        if self.dk != other.dk {
            return Err(Error::DimensionMismatch { expected: self.dk, found: other.dk });
        }
        Ok(())
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        self.check_dims(other)?;
        let lambda = self
            .lambda
            .iter()
            .zip(&other.lambda)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(Tensor { cfg: self.cfg, dh: self.dh, dk: self.dk, lambda, pairs: None })
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        self.add(&other.scale(&-self.cfg.one()))
    }

    pub fn scale(&self, s: &ExtScalar) -> Tensor {
        let lambda = self.lambda.iter().map(|r| r.iter().map(|x| s * x).collect()).collect();
        Tensor { cfg: self.cfg, dh: self.dh, dk: self.dk, lambda, pairs: None }
    }

    pub fn is_zero(&self) -> bool {
        self.lambda.iter().flatten().all(ExtScalar::is_zero)
    }

    pub fn eq_at_precision(&self, other: &Tensor) -> bool {
        self.dims() == other.dims()
            && self.lambda.iter().flatten().zip(other.lambda.iter().flatten()).all(|(a, b)| a.eq_at_precision(b))
    }

    /// Row-major coordinates in the dh·dk-dimensional coordinate space.
    pub fn flatten(&self) -> Vector {
        Vector::new(self.cfg, self.lambda.iter().flatten().cloned().collect())
    }

    pub fn from_flat(cfg: FieldConfig, dh: usize, dk: usize, v: &Vector) -> Result<Tensor> {
        if v.dim() != dh * dk {
            return Err(Error::DimensionMismatch { expected: dh * dk, found: v.dim() });
        }
        let lambda = v.coeffs().chunks(dk.max(1)).take(dh).map(|c| c.to_vec()).collect();
        Tensor::from_lambda(cfg, dh, dk, lambda)
    }

    /// Row i of λ as a vector of the second factor.
    pub fn row(&self, i: usize) -> Vector {
        Vector::new(self.cfg, self.lambda[i].clone())
    }
}

impl PartialEq for Tensor {
    fn eq(&self, other: &Tensor) -> bool {
        self.eq_at_precision(other)
    }
}

/// x ⊗ y with λ_ij = x_i·y_j.
pub fn simple_tensor(x: &Vector, y: &Vector) -> Tensor {
    Tensor::from_pairs(x.cfg(), x.dim(), y.dim(), vec![(x.clone(), y.clone())]).expect("dimensions match by construction")
}

/// Projective norm, equal to the largest coefficient in the orthonormal
/// product basis.
pub fn proj_norm(t: &Tensor) -> Result<NormValue> {
    max_abs(t.lambda.iter().flatten())
}

/// Σ conj(λ_ij)·μ_ij.
pub fn tensor_ip(u: &Tensor, v: &Tensor) -> Result<ExtScalar> {
    u.check_dims(v)?;
    ip(&u.flatten(), &v.flatten())
}

/// ΣΣ ⟨x_i, x'_j⟩⟨y_i, y'_j⟩ computed from pair lists, without passing through
/// the coefficient matrix.
pub fn pair_list_ip(u: &[(Vector, Vector)], v: &[(Vector, Vector)], cfg: FieldConfig) -> Result<ExtScalar> {
    let mut acc = cfg.zero();
    for (x, y) in u {
        for (x2, y2) in v {
            acc = &acc + &(&ip(x, x2)? * &ip(y, y2)?);
        }
    }
    Ok(acc)
}

/// Matrix rank of λ by elimination with largest-absolute-value pivots.
pub fn tensor_rank(t: &Tensor) -> Result<usize> {
    crate::linalg::rank(&t.lambda, t.dk)
}

/// Σ_k ⟨v, x_k⟩⟨w, y_k⟩ for a pair list: the pair of linear functionals
/// ⟨v,·⟩, ⟨w,·⟩ applied to the representation.
pub fn functional_probe(pairs: &[(Vector, Vector)], v: &Vector, w: &Vector) -> Result<ExtScalar> {
    let cfg = v.cfg();
    let mut acc = cfg.zero();
    for (x, y) in pairs {
        acc = &acc + &(&ip(v, x)? * &ip(w, y)?);
    }
    Ok(acc)
}

/// Zero test through the characterization by functionals: every pair of dual
/// basis functionals annihilates the representation.
pub fn is_zero_by_functionals(pairs: &[(Vector, Vector)], dh: usize, dk: usize) -> Result<bool> {
    let Some((x0, _)) = pairs.first() else { return Ok(true) };
    let cfg = x0.cfg();
    for a in 0..dh {
        let ea = Vector::basis(cfg, dh, a);
        for b in 0..dk {
            let fb = Vector::basis(cfg, dk, b);
            if !functional_probe(pairs, &ea, &fb)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Orthonormality of a family of tensors judged with the projective norm and
/// the tensor inner product; normality uses residues of the coefficients.
pub fn is_orthonormal_tensor_system(ts: &[Tensor]) -> bool {
    fn check(ts: &[Tensor]) -> Result<bool> {
        let Some(first) = ts.first() else { return Ok(false) };
        for (i, a) in ts.iter().enumerate() {
            if a.dims() != first.dims() || proj_norm(a)? != NormValue::ONE {
                return Ok(false);
            }
            for b in &ts[i..] {
                let g = tensor_ip(a, b)?;
                let same = std::ptr::eq(a, b);
                if (same && !g.is_one()) || (!same && !g.is_zero()) {
                    return Ok(false);
                }
            }
        }
        let rows = ts.iter().map(|t| spaces::residue_vector(&t.flatten())).collect::<Result<Vec<_>>>()?;
        Ok(residue_rank(&first.cfg.residue_field(), &rows) == ts.len())
    }
    check(ts).unwrap_or(false)
}

/// A bilinear map H × K → X given by its values on basis pairs (e_i, f_j).
#[derive(Clone, Debug)]
pub struct BilinearMap {
    cfg: FieldConfig,
    dh: usize,
    dk: usize,
    target_dim: usize,
    values: Vec<Vec<Vector>>,
}

impl BilinearMap {
    pub fn new(cfg: FieldConfig, dh: usize, dk: usize, target_dim: usize, values: Vec<Vec<Vector>>) -> Result<Self> {
        if values.len() != dh || values.iter().any(|r| r.len() != dk) {
            return Err(Error::ShapeMismatch("bilinear map needs a value for every basis pair".into()));
        }
        if let Some(v) = values.iter().flatten().find(|v| v.dim() != target_dim) {
            return Err(Error::DimensionMismatch { expected: target_dim, found: v.dim() });
        }
        Ok(BilinearMap { cfg, dh, dk, target_dim, values })
    }

    pub fn eval(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        if x.dim() != self.dh {
            return Err(Error::DimensionMismatch { expected: self.dh, found: x.dim() });
        }
        if y.dim() != self.dk {
            return Err(Error::DimensionMismatch { expected: self.dk, found: y.dim() });
        }
        let mut acc = Vector::zeros(self.cfg, self.target_dim);
        for i in 0..self.dh {
            for j in 0..self.dk {
                acc = acc.add(&self.values[i][j].scale(&(x.get(i) * y.get(j))))?;
            }
        }
        Ok(acc)
    }

    /// The unique linear map on the tensor product factoring this bilinear map.
    pub fn induced(&self, t: &Tensor) -> Result<Vector> {
        if t.dims() != (self.dh, self.dk) {
            return Err(Error::DimensionMismatch { expected: self.dh * self.dk, found: t.dh * t.dk });
        }
        let mut acc = Vector::zeros(self.cfg, self.target_dim);
        for i in 0..self.dh {
            for j in 0..self.dk {
                acc = acc.add(&self.values[i][j].scale(&t.lambda[i][j]))?;
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::MuKind;

    fn f5() -> FieldConfig {
        FieldConfig::new(5, MuKind::NonResidue, 32).unwrap()
    }

    fn ints(cfg: FieldConfig, rows: &[&[i64]]) -> Tensor {
        let l = rows.iter().map(|r| r.iter().map(|&x| cfg.ext(x)).collect()).collect();
        Tensor::from_lambda(cfg, rows.len(), rows[0].len(), l).unwrap()
    }

    #[test]
    fn simple_tensors() {
        let cfg = f5();
        let t = simple_tensor(&Vector::basis(cfg, 2, 0), &Vector::basis(cfg, 2, 1));
        assert_eq!(t, Tensor::basis(cfg, 2, 2, 0, 1));
        assert!(simple_tensor(&Vector::zeros(cfg, 2), &Vector::from_ints(cfg, &[1, 2])).is_zero());
    }

    #[test]
    fn pair_list_cancellation_and_linearity() {
        let cfg = f5();
        let e1 = Vector::basis(cfg, 2, 0);
        let e2 = Vector::basis(cfg, 2, 1);
        let f1 = Vector::basis(cfg, 2, 0);
        let z = Tensor::from_pairs(cfg, 2, 2, vec![(e1.clone(), f1.clone()), (e1.neg(), f1.clone())]).unwrap();
        assert!(z.is_zero());
        assert!(is_zero_by_functionals(z.pairs().unwrap(), 2, 2).unwrap());
        let a = Tensor::from_pairs(cfg, 2, 2, vec![(e1.add(&e2).unwrap(), f1.clone())]).unwrap();
        let b = Tensor::from_pairs(cfg, 2, 2, vec![(e1, f1.clone()), (e2, f1)]).unwrap();
        assert_eq!(a, b);
        assert!(matches!(
            Tensor::from_pairs(cfg, 2, 2, vec![(Vector::basis(cfg, 3, 0), Vector::basis(cfg, 2, 0))]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn projective_norm_examples() {
        let cfg = f5();
        assert_eq!(proj_norm(&ints(cfg, &[&[1, 0], &[0, 5]])).unwrap(), NormValue::ONE);
        let t = simple_tensor(&Vector::from_ints(cfg, &[5, 0]), &Vector::from_ints(cfg, &[1, 1]));
        assert_eq!(proj_norm(&t).unwrap(), NormValue::from_valuation(1));
        assert_eq!(proj_norm(&Tensor::zeros(cfg, 2, 3)).unwrap(), NormValue::Zero);
    }

    #[test]
    fn inner_product_examples() {
        let cfg = f5();
        let b11 = Tensor::basis(cfg, 2, 2, 0, 0);
        let b22 = Tensor::basis(cfg, 2, 2, 1, 1);
        assert!(tensor_ip(&b11, &b11).unwrap().is_one());
        assert!(tensor_ip(&b11, &b22).unwrap().is_zero());
        let basis: Vec<Tensor> = (0..2).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| Tensor::basis(cfg, 2, 3, i, j)).collect();
        assert!(is_orthonormal_tensor_system(&basis));
    }

    #[test]
    fn rank_examples() {
        let cfg = f5();
        assert_eq!(tensor_rank(&ints(cfg, &[&[1, 0], &[0, 1]])).unwrap(), 2);
        assert_eq!(tensor_rank(&ints(cfg, &[&[1, 5], &[5, 25]])).unwrap(), 1);
        let s = simple_tensor(&Vector::from_ints(cfg, &[1, 3]), &Vector::from_ints(cfg, &[2, 7, 1]));
        assert_eq!(tensor_rank(&s).unwrap(), 1);
    }

    #[test]
    fn universal_property_on_basis() {
        let cfg = f5();
        // (x, y) ↦ (x_1 y_1 + x_2 y_2, x_1 y_2)
        let v = |a, b| Vector::from_ints(cfg, &[a, b]);
        let b = BilinearMap::new(cfg, 2, 2, 2, vec![vec![v(1, 0), v(0, 1)], vec![v(0, 0), v(1, 0)]]).unwrap();
        let x = Vector::from_ints(cfg, &[3, 5]);
        let y = Vector::from_ints(cfg, &[2, 7]);
        let direct = b.eval(&x, &y).unwrap();
        assert_eq!(direct, Vector::from_ints(cfg, &[41, 21]));
        assert_eq!(b.induced(&simple_tensor(&x, &y)).unwrap(), direct);
    }
}
