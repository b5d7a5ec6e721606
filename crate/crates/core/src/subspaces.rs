//! Subspaces carrying an orthonormal-basis certificate, orthogonal
//! complements, regularity, and the isomorphisms c₀(I)⊗X ≅ c₀(I, X) and
//! S_Ψ = W_Ψ ⊗ id.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg;
use crate::padic::{residue_rank, solve_norm_equation, ExtScalar, FieldConfig, NormValue, Residue};
use crate::sample;
use crate::spaces::{self, ip, is_orthonormal_system, residue_vector, sup_norm, Vector};
use crate::tensor::Tensor;

/// A subspace of a d-dimensional coordinate space given by an orthonormal
/// basis, optionally with vectors completing it to an orthonormal basis of
/// the whole space (a regularity certificate).
#[derive(Clone, Debug)]
pub struct Subspace {
    cfg: FieldConfig,
    ambient: usize,
    basis: Vec<Vector>,
    extension: Option<Vec<Vector>>,
}

impl Subspace {
    pub fn new(cfg: FieldConfig, ambient: usize, basis: Vec<Vector>) -> Result<Self> {
        if let Some(v) = basis.iter().find(|v| v.dim() != ambient) {
            return Err(Error::DimensionMismatch { expected: ambient, found: v.dim() });
        }
        if !basis.is_empty() && !is_orthonormal_system(&basis) {
            return Err(Error::NotCertified);
        }
        Ok(Subspace { cfg, ambient, basis, extension: None })
    }

    /// Attach completing vectors; together with the basis they must form an
    /// orthonormal basis of the ambient space.
    pub fn with_extension(mut self, extension: Vec<Vector>) -> Result<Self> {
        let mut all = self.basis.clone();
        all.extend(extension.iter().cloned());
        if self.ambient > 0 && !spaces::is_orthonormal_basis(&all, self.ambient) {
            return Err(Error::NotCertified);
        }
        self.extension = Some(extension);
        Ok(self)
    }

    pub fn canonical(cfg: FieldConfig, ambient: usize, indices: &[usize]) -> Result<Self> {
        if let Some(&i) = indices.iter().find(|&&i| i >= ambient) {
            return Err(Error::IndexOutOfRange(format!("basis index {i} in dimension {ambient}")));
        }
        let basis = indices.iter().map(|&i| Vector::basis(cfg, ambient, i)).collect();
        let rest = (0..ambient).filter(|i| !indices.contains(i)).map(|i| Vector::basis(cfg, ambient, i)).collect();
        Subspace::new(cfg, ambient, basis)?.with_extension(rest)
    }

    pub fn cfg(&self) -> FieldConfig {
        self.cfg
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn extension(&self) -> Option<&[Vector]> {
        self.extension.as_deref()
    }

    pub fn contains(&self, x: &Vector) -> Result<bool> {
        if x.dim() != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: x.dim() });
        }
        let mut rows: Vec<Vec<ExtScalar>> = self.basis.iter().map(|v| v.coeffs().to_vec()).collect();
        rows.push(x.coeffs().to_vec());
        Ok(linalg::rank(&rows, self.ambient)? == self.basis.len())
    }
}

/// A basis of the span whose members have norm 1 and independent residues:
/// the rows of the reduced echelon form under largest-entry pivoting.
pub fn normal_basis(cfg: FieldConfig, dim: usize, vs: &[Vector]) -> Result<Vec<Vector>> {
    let rows: Vec<Vec<ExtScalar>> = vs.iter().map(|v| v.coeffs().to_vec()).collect();
    let (m, _) = linalg::rref(&rows, dim)?;
    Ok(m.into_iter().map(|r| Vector::new(cfg, r)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HilbertVerdict {
    /// an orthonormal basis was constructed
    Hilbert,
    /// the Gram matrix of a normal basis is not unimodular, or (ramified μ)
    /// its residue discriminant is not a square, so no orthonormal basis exists
    NotHilbert,
    /// the bounded search for unit-length vectors ran out
    Unknown,
}

#[derive(Clone, Debug)]
pub struct PerpResult {
    /// orthonormal basis when the complement is Hilbert, otherwise its normal basis
    pub basis: Vec<Vector>,
    pub normal_basis: Vec<Vector>,
    pub verdict: HilbertVerdict,
}

fn gram(vs: &[Vector]) -> Result<Vec<Vec<ExtScalar>>> {
    vs.iter().map(|a| vs.iter().map(|b| ip(a, b)).collect()).collect()
}

fn residue_det(p: u64, m: &[Vec<Residue>]) -> u64 {
    let n = m.len();
    let mut a: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|x| x.a as u64).collect()).collect();
    let mut det = 1u64;
    let inv = |x: u64| -> u64 {
        let mut r = 1u64;
        let (mut b, mut e) = (x % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| a[r][c] % p != 0) else { return 0 };
        if piv != c {
            a.swap(piv, c);
            det = (p - det) % p;
        }
        det = det * a[c][c] % p;
        let iv = inv(a[c][c]);
        for r in c + 1..n {
            let f = a[r][c] * iv % p;
            for k in c..n {
                a[r][k] = (a[r][k] + p * p - f * a[c][k] % p) % p;
            }
        }
    }
    det
}

fn residue_lifts(cfg: FieldConfig) -> Vec<ExtScalar> {
    let p = cfg.p() as i64;
    let mut out = Vec::new();
    for a in 0..p {
        if cfg.is_ramified() {
            if a != 0 {
                out.push(cfg.ext(a));
            }
            continue;
        }
        for b in 0..p {
            if a != 0 || b != 0 {
                out.push(ExtScalar::new(cfg, cfg.qp(a), cfg.qp(b)));
            }
        }
    }
    out
}

/// ‖v‖ ≤ 1 with ⟨v, v⟩ a unit of Q_p that is a norm, returning s with
/// ⟨sv, sv⟩ = 1.
fn unit_normalizer(cfg: FieldConfig, v: &Vector) -> Result<Option<ExtScalar>> {
    let g = ip(v, v)?;
    if g.abs()? != NormValue::ONE {
        return Ok(None);
    }
    let target = g.inv()?;
    solve_norm_equation(cfg, target.a())
}

/// Hermitian Gram-Schmidt over a normal basis: repeatedly pick a lattice
/// vector of unit length, normalize it and project it out of the rest.
fn orthonormalize(cfg: FieldConfig, normal: &[Vector]) -> Result<Option<Vec<Vector>>> {
    let lifts = residue_lifts(cfg);
    let mut rest: Vec<Vector> = normal.to_vec();
    let mut out = Vec::new();
    while !rest.is_empty() {
        let k = rest.len();
        let mut found: Option<(usize, Vector, ExtScalar)> = None;
        for i in 0..k {
            if let Some(s) = unit_normalizer(cfg, &rest[i])? {
                found = Some((i, rest[i].clone(), s));
                break;
            }
        }
        'pairs: for i in 0..k {
            if found.is_some() {
                break;
            }
            for j in 0..k {
                if i == j {
                    continue;
                }
                for c in &lifts {
                    let v = rest[i].add(&rest[j].scale(c))?;
                    if let Some(s) = unit_normalizer(cfg, &v)? {
                        found = Some((i, v, s));
                        break 'pairs;
                    }
                }
            }
        }
        if found.is_none() && cfg.is_ramified() {
            'triples: for i in 0..k {
                for j in 0..k {
                    for l in j + 1..k {
                        if i == j || i == l {
                            continue;
                        }
                        for c in &lifts {
                            for c2 in &lifts {
                                let v = rest[i].add(&rest[j].scale(c))?.add(&rest[l].scale(c2))?;
                                if let Some(s) = unit_normalizer(cfg, &v)? {
                                    found = Some((i, v, s));
                                    break 'triples;
                                }
                            }
                        }
                    }
                }
            }
        }
        let Some((i, v, s)) = found else { return Ok(None) };
        let psi = v.scale(&s);
        rest.remove(i);
        rest = rest
            .iter()
            .map(|n| n.sub(&psi.scale(&ip(&psi, n)?)))
            .collect::<Result<Vec<_>>>()?;
        out.push(psi);
    }
    Ok(Some(out))
}

/// Decide whether the span of a normal basis has an orthonormal basis, and
/// build one when it does.
pub fn hilbert_basis(cfg: FieldConfig, normal: &[Vector]) -> Result<(HilbertVerdict, Option<Vec<Vector>>)> {
    if normal.is_empty() {
        return Ok((HilbertVerdict::Hilbert, Some(Vec::new())));
    }
    let g = gram(normal)?;
    let residues = g.iter().map(|r| r.iter().map(ExtScalar::residue).collect()).collect::<Result<Vec<Vec<_>>>>()?;
    if residue_rank(&cfg.residue_field(), &residues) < normal.len() {
        return Ok((HilbertVerdict::NotHilbert, None));
    }
    if cfg.is_ramified() {
        let p = cfg.p() as u64;
        let det = residue_det(p, &residues);
        if !(1..p).any(|y| y * y % p == det) {
            return Ok((HilbertVerdict::NotHilbert, None));
        }
    }
    match orthonormalize(cfg, normal)? {
        Some(b) => Ok((HilbertVerdict::Hilbert, Some(b))),
        None => Ok((HilbertVerdict::Unknown, None)),
    }
}

/// The orthogonal complement {x : ⟨w, x⟩ = 0 for all w in W}.
pub fn perp(w: &Subspace) -> Result<PerpResult> {
    let cfg = w.cfg;
    let d = w.ambient;
    let rows: Vec<Vec<ExtScalar>> = w.basis.iter().map(|v| v.conj().into_coeffs()).collect();
    let kernel: Vec<Vector> = if rows.is_empty() {
        (0..d).map(|i| Vector::basis(cfg, d, i)).collect()
    } else {
        linalg::kernel(&rows, d, &cfg.zero())?.into_iter().map(|c| Vector::new(cfg, c)).collect()
    };
    let normal = normal_basis(cfg, d, &kernel)?;
    let (verdict, on) = hilbert_basis(cfg, &normal)?;
    Ok(PerpResult { basis: on.unwrap_or_else(|| normal.clone()), normal_basis: normal, verdict })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regularity {
    Regular,
    HilbertOnly,
    Unknown,
}

impl Regularity {
    pub fn name(self) -> &'static str {
        match self {
            Regularity::Regular => "regular",
            Regularity::HilbertOnly => "hilbert_only",
            Regularity::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RegularityReport {
    pub verdict: Regularity,
    pub perp: PerpResult,
    /// W together with a normal basis of W^⊥ has independent residues
    pub splits: bool,
    /// v ∈ W, w ∈ W^⊥ with ‖v + w‖ < max(‖v‖, ‖w‖), when the splitting fails
    pub witness: Option<(Vector, Vector)>,
    /// the max-norm splitting on random pairs from W × W^⊥
    pub probes: usize,
    pub splitting_on_probes: bool,
    /// orthonormal vectors completing the basis of W
    pub extension: Option<Vec<Vector>>,
}

fn combination(cfg: FieldConfig, d: usize, vs: &[Vector], coefs: &[Residue]) -> Result<Vector> {
    let mut acc = Vector::zeros(cfg, d);
    for (v, c) in vs.iter().zip(coefs) {
        let lift = ExtScalar::new(cfg, cfg.qp(c.a as i64), cfg.qp(c.b as i64));
        acc = acc.add(&v.scale(&lift))?;
    }
    Ok(acc)
}

/// A nonzero residue dependency among the rows, by elimination with an
/// identity tracker.
fn residue_dependency(cfg: FieldConfig, rows: &[Vec<Residue>]) -> Option<Vec<Residue>> {
    let f = cfg.residue_field();
    let n = rows.len();
    let one = f.elem(1, 0);
    let mut m: Vec<(Vec<Residue>, Vec<Residue>)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (r.clone(), (0..n).map(|j| if i == j { one } else { Residue::ZERO }).collect()))
        .collect();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..n).find(|&r| !m[r].0[c].is_zero()) else { continue };
        m.swap(rank, piv);
        let inv = f.inv(m[rank].0[c]).expect("nonzero residue");
        for r in 0..n {
            if r != rank && !m[r].0[c].is_zero() {
                let k = f.mul(m[r].0[c], inv);
                let (pr, pt) = m[rank].clone();
                for (x, y) in m[r].0.iter_mut().zip(&pr) {
                    *x = f.sub(*x, f.mul(k, *y));
                }
                for (x, y) in m[r].1.iter_mut().zip(&pt) {
                    *x = f.sub(*x, f.mul(k, *y));
                }
            }
        }
        rank += 1;
    }
    m.get(rank).map(|(_, t)| t.clone())
}

/// Regularity of a certified subspace. W extends to an orthonormal basis
/// exactly when W^⊥ is Hilbert and W ⊕ W^⊥ splits the norm; the splitting is
/// decided on residues and also spot-checked on random pairs.
pub fn is_regular(w: &Subspace, probes: usize, seed: u64) -> Result<RegularityReport> {
    let cfg = w.cfg;
    let d = w.ambient;
    let perp = perp(w)?;
    let mut all = w.basis.clone();
    all.extend(perp.normal_basis.iter().cloned());
    let rows = all.iter().map(residue_vector).collect::<Result<Vec<_>>>()?;
    let splits = residue_rank(&cfg.residue_field(), &rows) == d;
    let witness = if splits {
        None
    } else {
        let dep = residue_dependency(cfg, &rows).expect("rank deficiency gives a dependency");
        let k = w.basis.len();
        let v = combination(cfg, d, &w.basis, &dep[..k])?;
        let x = combination(cfg, d, &perp.normal_basis, &dep[k..])?;
        Some((v, x))
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut splitting_on_probes = true;
    if !w.basis.is_empty() && !perp.normal_basis.is_empty() {
        for _ in 0..probes {
            let a = sample::exact_vector(cfg, &mut rng, w.basis.len(), 2);
            let b = sample::exact_vector(cfg, &mut rng, perp.normal_basis.len(), 2);
            let v = Vector::combination(cfg, d, &a.coeffs().iter().cloned().zip(&w.basis).collect::<Vec<_>>())?;
            let x = Vector::combination(cfg, d, &b.coeffs().iter().cloned().zip(&perp.normal_basis).collect::<Vec<_>>())?;
            if sup_norm(&v.add(&x)?)? != sup_norm(&v)?.max(sup_norm(&x)?) {
                splitting_on_probes = false;
            }
        }
    }

    let (verdict, extension) = if w.basis.is_empty() || w.basis.len() == d {
        let ext = if w.basis.is_empty() { perp.basis.clone() } else { Vec::new() };
        let ok = perp.verdict == HilbertVerdict::Hilbert;
        (if ok { Regularity::Regular } else { Regularity::Unknown }, ok.then_some(ext))
    } else if !splits {
        (Regularity::HilbertOnly, None)
    } else {
        match perp.verdict {
            HilbertVerdict::Hilbert => (Regularity::Regular, Some(perp.basis.clone())),
            HilbertVerdict::NotHilbert => (Regularity::HilbertOnly, None),
            HilbertVerdict::Unknown => (Regularity::Unknown, None),
        }
    };
    Ok(RegularityReport { verdict, perp, splits, witness, probes, splitting_on_probes, extension })
}

/// L_X: c₀(I) ⊗ X → c₀(I, X), Σ λ_ij e_i ⊗ f_j ↦ (Σ_j λ_ij f_j)_i.
pub fn c0_iso(u: &Tensor) -> Vec<Vector> {
    (0..u.dims().0).map(|i| u.row(i)).collect()
}

pub fn c0_iso_inverse(cfg: FieldConfig, seq: &[Vector], x_dim: usize) -> Result<Tensor> {
    if let Some(v) = seq.iter().find(|v| v.dim() != x_dim) {
        return Err(Error::DimensionMismatch { expected: x_dim, found: v.dim() });
    }
    Tensor::from_lambda(cfg, seq.len(), x_dim, seq.iter().map(|v| v.coeffs().to_vec()).collect())
}

/// sup_i ‖x_i‖.
pub fn sequence_norm(seq: &[Vector]) -> Result<NormValue> {
    let mut n = NormValue::Zero;
    for v in seq {
        n = n.max(sup_norm(v)?);
    }
    Ok(n)
}

/// Every term of the sequence lies in W.
pub fn sequence_in(seq: &[Vector], w: &Subspace) -> Result<bool> {
    for v in seq {
        if !w.contains(v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// S_Ψ = W_Ψ ⊗ id: re-express the first factor in Ψ-coordinates,
/// λ'_kj = Σ_i conj(ψ_k,i) λ_ij.
pub fn s_psi_iso(u: &Tensor, psi: &[Vector]) -> Result<Tensor> {
    let (dh, dk) = u.dims();
    if !spaces::is_orthonormal_basis(psi, dh) {
        return Err(Error::NotOrthonormal);
    }
    let cfg = u.cfg();
    let lambda = psi
        .iter()
        .map(|pk| {
            (0..dk)
                .map(|j| ip(pk, &Vector::new(cfg, (0..dh).map(|i| u.lambda()[i][j].clone()).collect())))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Tensor::from_lambda(cfg, dh, dk, lambda)
}

/// λ_ij = Σ_k ψ_k,i λ'_kj.
pub fn s_psi_iso_inverse(u: &Tensor, psi: &[Vector]) -> Result<Tensor> {
    let (dh, dk) = u.dims();
    if !spaces::is_orthonormal_basis(psi, dh) {
        return Err(Error::NotOrthonormal);
    }
    let cfg = u.cfg();
    let mut lambda = vec![vec![cfg.zero(); dk]; dh];
    for (k, pk) in psi.iter().enumerate() {
        for (i, row) in lambda.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = &*x + &(pk.get(i) * &u.lambda()[k][j]);
            }
        }
    }
    Tensor::from_lambda(cfg, dh, dk, lambda)
}

/// H ⊗ W inside H ⊗ K, realised in the flattened coordinate space of
/// dimension dim(H)·dim(K), with basis e_i ⊗ w_j. When W is regular its
/// extension Φ yields the completing vectors e_i ⊗ φ_k; a W without an
/// attached extension is run through the regularity decision first.
pub fn tensor_subspace(h_dim: usize, w: &Subspace) -> Result<Subspace> {
    let cfg = w.cfg;
    let dk = w.ambient;
    let flat = |i: usize, v: &Vector| -> Tensor {
        crate::tensor::simple_tensor(&Vector::basis(cfg, h_dim, i), v)
    };
    let mut basis = Vec::new();
    for i in 0..h_dim {
        for v in &w.basis {
            basis.push(flat(i, v).flatten());
        }
    }
    let sub = Subspace::new(cfg, h_dim * dk, basis)?;
    let extension = match &w.extension {
        Some(e) => Some(e.clone()),
        None => is_regular(w, 0, 0)?.extension,
    };
    let Some(ext) = extension else { return Ok(sub) };
    let mut completing = Vec::new();
    for i in 0..h_dim {
        for v in &ext {
            completing.push(flat(i, v).flatten());
        }
    }
    sub.with_extension(completing)
}

/// Unflatten a vector of H ⊗ K back to coefficient form.
pub fn as_tensor(v: &Vector, h_dim: usize, k_dim: usize) -> Result<Tensor> {
    Tensor::from_flat(v.cfg(), h_dim, k_dim, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hsiso::{pair_swap, random_unitary};
    use crate::padic::MuKind;
    use crate::tensor::{is_orthonormal_tensor_system, proj_norm, simple_tensor, tensor_ip};

    fn f5() -> FieldConfig {
        FieldConfig::new(5, MuKind::NonResidue, 32).unwrap()
    }

    #[test]
    fn canonical_perp() {
        let cfg = f5();
        let w = Subspace::new(cfg, 2, vec![Vector::basis(cfg, 2, 0)]).unwrap();
        let r = perp(&w).unwrap();
        assert_eq!(r.verdict, HilbertVerdict::Hilbert);
        assert_eq!(r.basis.len(), 1);
        assert!(w.contains(&Vector::from_ints(cfg, &[3, 0])).unwrap());
        let e2 = Subspace::new(cfg, 2, r.basis).unwrap();
        assert!(e2.contains(&Vector::basis(cfg, 2, 1)).unwrap());
        let full = Subspace::canonical(cfg, 3, &[0, 1, 2]).unwrap();
        assert!(perp(&full).unwrap().basis.is_empty());
    }

    #[test]
    fn perp_of_a_diagonal_line() {
        // ⟨e1+e2, e1+e2⟩ = 2 is a norm in the unramified extension
        let cfg = f5();
        let v = Vector::from_ints(cfg, &[1, 1]);
        let s = unit_normalizer(cfg, &v).unwrap().unwrap();
        let w = Subspace::new(cfg, 2, vec![v.scale(&s)]).unwrap();
        let r = perp(&w).unwrap();
        assert_eq!(r.verdict, HilbertVerdict::Hilbert);
        assert!(ip(&r.basis[0], &v).unwrap().is_zero());
        assert!(ip(&r.basis[0], &r.basis[0]).unwrap().is_one());
    }

    #[test]
    fn uncertified_bases_are_rejected() {
        let cfg = f5();
        let bad = Subspace::new(cfg, 2, vec![Vector::from_ints(cfg, &[1, 1])]);
        assert_eq!(bad.unwrap_err(), Error::NotCertified);
    }

    #[test]
    fn non_unimodular_span_is_not_hilbert() {
        // span{e1 + 7 e2} over p = 5 ramified: ⟨v,v⟩ = 50 has valuation 2
        let cfg = FieldConfig::new(5, MuKind::Uniformizer, 32).unwrap();
        let v = Vector::new(cfg, vec![cfg.one(), cfg.ext(7)]);
        let n = normal_basis(cfg, 2, &[v]).unwrap();
        assert_eq!(hilbert_basis(cfg, &n).unwrap().0, HilbertVerdict::NotHilbert);
    }

    #[test]
    fn regularity_examples() {
        let cfg = f5();
        let w = Subspace::canonical(cfg, 3, &[1]).unwrap();
        let r = is_regular(&Subspace::new(cfg, 3, w.basis().to_vec()).unwrap(), 20, 1).unwrap();
        assert_eq!(r.verdict, Regularity::Regular);
        assert!(r.splitting_on_probes);
        let zero = Subspace::new(cfg, 2, vec![]).unwrap();
        assert_eq!(is_regular(&zero, 5, 1).unwrap().verdict, Regularity::Regular);
    }

    #[test]
    fn swap_fixed_line_is_regular() {
        // the normalized Z-fixed vector s(e1+e2) of the swap conjugation
        let cfg = f5();
        let (z, phis) = pair_swap(cfg, 1);
        let v = z.apply(&phis[0]).unwrap().add(&phis[0]).unwrap();
        let s = unit_normalizer(cfg, &v).unwrap().unwrap();
        let w = Subspace::new(cfg, 2, vec![v.scale(&s)]).unwrap();
        let r = is_regular(&w, 20, 3).unwrap();
        assert_eq!(r.verdict, Regularity::Regular);
    }

    #[test]
    fn certified_lines_always_split() {
        // the residue form restricted to W is the identity, so W^⊥ reduces to
        // the residue complement of W and both sides are unimodular
        let cfg = FieldConfig::new(7, MuKind::Uniformizer, 32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let u = random_unitary(cfg, 3, &mut rng).unwrap().columns();
            let w = Subspace::new(cfg, 3, u[..1].to_vec()).unwrap();
            let r = is_regular(&w, 10, 2).unwrap();
            assert!(r.splits && r.witness.is_none());
            assert_eq!(r.verdict, Regularity::Regular);
        }
    }

    #[test]
    fn iso_norms() {
        let cfg = f5();
        let x = Vector::from_ints(cfg, &[2, 5]);
        let t = simple_tensor(&Vector::basis(cfg, 3, 0), &x);
        let seq = c0_iso(&t);
        assert_eq!(seq[0], x);
        assert!(seq[1].is_zero() && seq[2].is_zero());
        assert_eq!(sequence_norm(&seq).unwrap(), proj_norm(&t).unwrap());
        assert_eq!(c0_iso_inverse(cfg, &seq, 2).unwrap(), t);

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let psi = random_unitary(cfg, 3, &mut rng).unwrap().columns();
        let u = Tensor::from_lambda(cfg, 3, 2, (0..3).map(|_| sample::vector(cfg, &mut rng, 2, 2).into_coeffs()).collect()).unwrap();
        let v = Tensor::from_lambda(cfg, 3, 2, (0..3).map(|_| sample::vector(cfg, &mut rng, 2, 2).into_coeffs()).collect()).unwrap();
        let (su, sv) = (s_psi_iso(&u, &psi).unwrap(), s_psi_iso(&v, &psi).unwrap());
        assert_eq!(proj_norm(&su).unwrap(), proj_norm(&u).unwrap());
        assert_eq!(tensor_ip(&su, &sv).unwrap(), tensor_ip(&u, &v).unwrap());
        assert_eq!(s_psi_iso_inverse(&su, &psi).unwrap(), u);
        let canon: Vec<Vector> = (0..3).map(|i| Vector::basis(cfg, 3, i)).collect();
        assert_eq!(s_psi_iso(&u, &canon).unwrap(), u);
    }

    #[test]
    fn canonical_tensor_subspace() {
        let cfg = f5();
        let w = Subspace::canonical(cfg, 2, &[0]).unwrap();
        let t = tensor_subspace(2, &w).unwrap();
        assert_eq!(t.dim(), 2);
        assert_eq!(t.basis()[0], simple_tensor(&Vector::basis(cfg, 2, 0), &Vector::basis(cfg, 2, 0)).flatten());
        assert_eq!(t.basis()[1], simple_tensor(&Vector::basis(cfg, 2, 1), &Vector::basis(cfg, 2, 0)).flatten());
        let mut all: Vec<Tensor> = t.basis().iter().map(|v| as_tensor(v, 2, 2).unwrap()).collect();
        all.extend(t.extension().unwrap().iter().map(|v| as_tensor(v, 2, 2).unwrap()));
        assert!(is_orthonormal_tensor_system(&all));
        assert_eq!(all.len(), 4);
    }
}
