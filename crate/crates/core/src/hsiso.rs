//! Anti-linear operators factored through the canonical conjugation, the
//! anti-unitary predicate battery, the isomorphism between trace-class
//! operators and the tensor product, and the invariant-vector constructions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::operators::MatrixOperator;
use crate::padic::{solve_norm_equation, sqrt_ext, ExtScalar, FieldConfig, NormValue};
use crate::sample;
use crate::spaces::{self, ip, is_orthonormal_basis, norm_orthogonal, sup_norm, Vector};
use crate::tensor::Tensor;

/// Z = J₀∘L: x ↦ conj(Lx), for a finite square matrix L.
#[derive(Clone, Debug)]
pub struct AntiLinearOp {
    linear: MatrixOperator,
}

impl AntiLinearOp {
    pub fn new(linear: MatrixOperator) -> Result<Self> {
        if !linear.is_finite() || linear.rows() != linear.cols() {
            return Err(Error::ShapeMismatch("anti-linear operators need a finite square linear part".into()));
        }
        Ok(AntiLinearOp { linear })
    }

    /// The canonical conjugation J₀ on a space of dimension d.
    pub fn j0(cfg: FieldConfig, d: usize) -> Self {
        AntiLinearOp { linear: MatrixOperator::identity(cfg, d) }
    }

    pub fn linear_part(&self) -> &MatrixOperator {
        &self.linear
    }

    pub fn dim(&self) -> usize {
        self.linear.rows()
    }

    pub fn cfg(&self) -> FieldConfig {
        self.linear.cfg()
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        Ok(self.linear.apply(x)?.conj())
    }

    /// The linear operator Z∘W for another anti-linear W: J L₁ J L₂ = conj(L₁)·L₂.
    pub fn compose(&self, other: &AntiLinearOp) -> Result<MatrixOperator> {
        self.linear.conj_entries().compose(&other.linear)
    }

    /// Z∘U for a linear U, again anti-linear.
    pub fn after_linear(&self, u: &MatrixOperator) -> Result<AntiLinearOp> {
        AntiLinearOp::new(self.linear.compose(u)?)
    }

    /// Z² = conj(L)·L.
    pub fn square(&self) -> Result<MatrixOperator> {
        self.compose(self)
    }

    pub fn is_involutive(&self) -> Result<bool> {
        Ok(self.square()?.is_identity())
    }

    /// The anti-linear adjoint, ⟨Zx, y⟩ = conj⟨x, Z*y⟩, which is J₀∘Lᵀ.
    pub fn adjoint(&self) -> AntiLinearOp {
        AntiLinearOp { linear: self.linear.transpose() }
    }

    /// Inverse J₀∘conj(L⁻¹), when L is invertible.
    pub fn inverse(&self) -> Result<Option<AntiLinearOp>> {
        Ok(self.linear.inverse()?.map(|li| AntiLinearOp { linear: li.conj_entries() }))
    }

    /// ‖Z‖ = ‖L‖, since J₀ is an anti-isometry.
    pub fn norm(&self) -> Result<NormValue> {
        self.linear.op_norm()
    }
}

/// Conjugation fixing each vector of an orthonormal basis: with Ψ the matrix
/// of basis columns, J_Ψ = J₀∘(conj(Ψ)·Ψ*).
pub fn conjugation_for_basis(basis: &[Vector]) -> Result<AntiLinearOp> {
    let d = basis.first().map_or(0, Vector::dim);
    if !is_orthonormal_basis(basis, d) {
        return Err(Error::NotOrthonormal);
    }
    let cfg = basis[0].cfg();
    let psi = MatrixOperator::from_columns(cfg, basis)?;
    let l = psi.conj_entries().compose(&psi.adjoint()?)?;
    AntiLinearOp::new(l)
}

/// IP-preserving surjective isometry: U*U = UU* = I with ‖U‖, ‖U*‖ ≤ 1.
pub fn is_unitary(u: &MatrixOperator) -> Result<bool> {
    if !u.is_finite() || u.rows() != u.cols() {
        return Ok(false);
    }
    let ua = u.adjoint()?;
    Ok(ua.compose(u)?.is_identity()
        && u.compose(&ua)?.is_identity()
        && u.op_norm()? <= NormValue::ONE
        && ua.op_norm()? <= NormValue::ONE)
}

fn givens(cfg: FieldConfig, d: usize, i: usize, j: usize, t: i64) -> Result<MatrixOperator> {
    let den = cfg.qp(1 + t * t);
    let c = cfg.qp(1 - t * t).div(&den)?;
    let s = cfg.qp(2 * t).div(&den)?;
    let mut m = MatrixOperator::identity(cfg, d);
    let mut rows: Vec<Vec<ExtScalar>> = m.entries().to_vec();
    rows[i][i] = ExtScalar::from_qp(cfg, c.clone());
    rows[j][j] = ExtScalar::from_qp(cfg, c);
    rows[i][j] = ExtScalar::from_qp(cfg, -&s);
    rows[j][i] = ExtScalar::from_qp(cfg, s);
    m = MatrixOperator::new(cfg, d, d, rows)?;
    Ok(m)
}

/// A random exact unitary: a product of rational rotations with unit
/// denominators, diagonal phases z/conj(z) and a permutation. Its columns are
/// a random orthonormal basis.
pub fn random_unitary<R: Rng>(cfg: FieldConfig, d: usize, rng: &mut R) -> Result<MatrixOperator> {
    let p = cfg.p() as i64;
    let mut u = MatrixOperator::identity(cfg, d);
    if d == 0 {
        return Ok(u);
    }
    for _ in 0..(2 * d) {
        if d < 2 {
            break;
        }
        let i = rng.gen_range(0..d);
        let j = (i + rng.gen_range(1..d)) % d;
        let t = loop {
            let t = if rng.gen_bool(0.3) { p * rng.gen_range(-2..=2i64) } else { rng.gen_range(-(p - 1)..p) };
            if (1 + t * t) % p != 0 {
                break t;
            }
        };
        u = givens(cfg, d, i, j, t)?.compose(&u)?;
    }
    let phases: Vec<ExtScalar> = (0..d)
        .map(|_| {
            let z = sample::unit_ext(cfg, rng);
            z.div(&z.conj())
        })
        .collect::<Result<_>>()?;
    u = MatrixOperator::diagonal(cfg, &phases).compose(&u)?;
    let mut perm: Vec<usize> = (0..d).collect();
    for k in (1..d).rev() {
        perm.swap(k, rng.gen_range(0..=k));
    }
    let cols = u.columns();
    let permuted: Vec<Vector> = perm.iter().map(|&k| cols[k].clone()).collect();
    MatrixOperator::from_columns(cfg, &permuted)
}

/// Verdicts of the eight equivalent characterizations of an anti-unitary
/// operator. Entries flagged in `sampled` rely on basis vectors plus random
/// probes for a universally quantified clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZReport {
    pub z: [bool; 8],
    pub sampled: [bool; 8],
}

impl ZReport {
    /// `Some(v)` when all eight agree.
    pub fn verdict(&self) -> Option<bool> {
        let first = self.z[0];
        self.z.iter().all(|&b| b == first).then_some(first)
    }
}

struct Probes {
    vectors: Vec<Vector>,
    orthogonal_pairs: Vec<(Vector, Vector)>,
    bases: Vec<Vec<Vector>>,
}

fn probes(cfg: FieldConfig, d: usize, count: usize, seed: u64) -> Result<Probes> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vectors: Vec<Vector> = (0..d).map(|i| Vector::basis(cfg, d, i)).collect();
    let mut orthogonal_pairs = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i != j {
                orthogonal_pairs.push((Vector::basis(cfg, d, i), Vector::basis(cfg, d, j)));
            }
        }
    }
    let mut bases = vec![vectors.clone()];
    for k in 0..count {
        vectors.push(sample::nonzero_vector(cfg, &mut rng, d, 2));
        if k % 4 == 0 && d >= 2 {
            let u = random_unitary(cfg, d, &mut rng)?.columns();
            let a = sample::nonzero_ext(cfg, &mut rng, 2);
            let b = sample::nonzero_ext(cfg, &mut rng, 2);
            orthogonal_pairs.push((u[0].scale(&a), u[1].scale(&b)));
            bases.push(u);
        }
    }
    Ok(Probes { vectors, orthogonal_pairs, bases })
}

/// Evaluate the eight characterizations for Z = J₀∘L.
pub fn z_predicates(z: &AntiLinearOp, probe_count: usize, seed: u64) -> Result<ZReport> {
    let cfg = z.cfg();
    let d = z.dim();
    let l = z.linear_part();
    let pr = probes(cfg, d, probe_count, seed)?;
    let norm_one = z.norm()? == NormValue::ONE;
    let surjective = l.rank()? == d;

    let ip_conjugating = {
        let mut ok = true;
        'outer: for x in &pr.vectors {
            let zx = z.apply(x)?;
            for y in &pr.vectors {
                let lhs = ip(&zx, &z.apply(y)?)?;
                if !lhs.eq_at_precision(&ip(x, y)?.conj()) {
                    ok = false;
                    break 'outer;
                }
            }
        }
        ok
    };
    let anti_isometric = {
        let mut ok = true;
        for x in &pr.vectors {
            if sup_norm(&z.apply(x)?)? != sup_norm(x)? {
                ok = false;
                break;
            }
        }
        ok
    };
    let no_preserving = {
        let mut ok = true;
        for (x, y) in &pr.orthogonal_pairs {
            let (zx, zy) = (z.apply(x)?, z.apply(y)?);
            if zx.is_zero() || zy.is_zero() || !norm_orthogonal(&zx, &zy)?.norm_orthogonal {
                ok = false;
                break;
            }
        }
        ok
    };
    let maps_bases = |bases: &[Vec<Vector>]| -> Result<bool> {
        for b in bases {
            let img = b.iter().map(|v| z.apply(v)).collect::<Result<Vec<_>>>()?;
            if !is_orthonormal_basis(&img, d) {
                return Ok(false);
            }
        }
        Ok(true)
    };

    let z1 = is_unitary(l)?;
    let z2 = maps_bases(&pr.bases[..1])?;
    let z3 = {
        let la = l.adjoint()?;
        la.compose(l)?.is_identity() && l.compose(&la)?.is_identity() && norm_one
    };
    let z4 = surjective && ip_conjugating && norm_one;
    let z5 = match z.inverse()? {
        Some(inv) => ip_conjugating && norm_one && inv.norm()? == NormValue::ONE,
        None => false,
    };
    let z6 = ip_conjugating && surjective && anti_isometric;
    let z7 = surjective && ip_conjugating && no_preserving;
    let z8 = maps_bases(&pr.bases)?;
    Ok(ZReport {
        z: [z1, z2, z3, z4, z5, z6, z7, z8],
        sampled: [false, false, false, true, true, true, true, true],
    })
}

/// I(T) with λ_ij = T_ji for T: H → K (profiled operators are first cut to
/// the block beyond which entries fall below precision).
pub fn iso_i(t: &MatrixOperator) -> Result<Tensor> {
    if !t.classify()?.trace_class {
        return Err(Error::NotTraceClass);
    }
    let t = t.truncate_to_precision()?;
    let (dk, dh) = (t.rows(), t.cols());
    let lambda = (0..dh).map(|i| (0..dk).map(|j| t.entries()[j][i].clone()).collect()).collect();
    Tensor::from_lambda(t.cfg(), dh, dk, lambda)
}

/// The inverse map: T_ji = λ_ij.
pub fn iso_i_star(u: &Tensor) -> Result<MatrixOperator> {
    let (dh, dk) = u.dims();
    let entries = (0..dk).map(|j| (0..dh).map(|i| u.lambda()[i][j].clone()).collect()).collect();
    MatrixOperator::new(u.cfg(), dk, dh, entries)
}

/// |w⟩⟨v|: x ↦ ⟨v, x⟩ w, entries T_ji = w_j·conj(v_i).
pub fn rank_one(v: &Vector, w: &Vector) -> MatrixOperator {
    let entries = (0..w.dim()).map(|j| (0..v.dim()).map(|i| w.get(j) * &v.get(i).conj()).collect()).collect();
    MatrixOperator::new(v.cfg(), w.dim(), v.dim(), entries).expect("shape is consistent")
}

/// (χ₁, χ₂) = (Zx + x, (Zx − x)/√μ), both fixed by an involutive Z.
pub fn z_invariant_decomposition(z: &AntiLinearOp, x: &Vector) -> Result<(Vector, Vector)> {
    if !z.is_involutive()? {
        return Err(Error::NotInvolutive);
    }
    let cfg = z.cfg();
    let zx = z.apply(x)?;
    let chi1 = zx.add(x)?;
    let chi2 = zx.sub(x)?.scale(&cfg.sqrt_mu().inv()?);
    Ok((chi1, chi2))
}

/// Inverse of the decomposition: x = ½(χ₁ − √μ·χ₂). The plus sign would
/// give Zx instead, since χ₁ + √μ·χ₂ = 2Zx.
pub fn reconstruct(chi1: &Vector, chi2: &Vector) -> Result<Vector> {
    let cfg = chi1.cfg();
    Ok(chi1.sub(&chi2.scale(&cfg.sqrt_mu()))?.scale(&cfg.ext_ratio(1, 2)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    InvariantNormalNotOrthonormal,
    OrthonormalNotInvariant,
    OrthonormalInvariant,
    Neither,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::InvariantNormalNotOrthonormal => "invariant_normal_not_orthonormal",
            Branch::OrthonormalNotInvariant => "orthonormal_not_invariant",
            Branch::OrthonormalInvariant => "orthonormal_invariant",
            Branch::Neither => "neither",
        }
    }
}

#[derive(Clone, Debug)]
pub struct DichotomyReport {
    pub involutive: bool,
    pub z1: ExtScalar,
    pub z2: ExtScalar,
    /// ψ_{2m−1} = (z₂/√μ)(Zφ_m − φ_m), ψ_{2m} = z₁(Zφ_m + φ_m), interleaved
    pub psi: Vec<Vector>,
    pub z_invariant: Vec<bool>,
    pub self_ip: Vec<ExtScalar>,
    pub ip_orthogonal: bool,
    pub normal: bool,
    pub orthonormal: bool,
    /// 2z₁² and −2z₂²/μ, the bilinear forms of the normalization constraints
    pub bilinear_even: ExtScalar,
    pub bilinear_odd: ExtScalar,
    pub t1: NormValue,
    pub t2: NormValue,
    /// whether max{|1−z|, |z|} < 1 holds for any z scanned over p^k·units
    pub t1_achievable: bool,
    /// ‖φ_m − ψ_{2m}‖ and ‖φ_m − ψ_{2m−1}‖ for each m
    pub perturbations: Vec<(NormValue, NormValue)>,
    pub perturbation_below_one: bool,
    pub branch: Branch,
}

/// The default involution: J₀ composed with the swaps e_{2m−1} ↔ e_{2m},
/// with base vectors φ_m = e_{2m−1} and Zφ_m = e_{2m}.
pub fn pair_swap(cfg: FieldConfig, base_dim: usize) -> (AntiLinearOp, Vec<Vector>) {
    let d = 2 * base_dim;
    let mut rows = vec![vec![cfg.zero(); d]; d];
    for m in 0..base_dim {
        rows[2 * m][2 * m + 1] = cfg.one();
        rows[2 * m + 1][2 * m] = cfg.one();
    }
    let l = MatrixOperator::new(cfg, d, d, rows).expect("square");
    let phis = (0..base_dim).map(|m| Vector::basis(cfg, d, 2 * m)).collect();
    (AntiLinearOp { linear: l }, phis)
}

/// Whether max{|1−z|, |z|} < 1 for some z among p^k·c, c ranging over unit
/// digit representatives (and their √μ-multiples) with |k| ≤ precision.
pub fn t_bound_achievable(cfg: FieldConfig) -> Result<bool> {
    let n = cfg.precision() as i64;
    let one = cfg.one();
    for k in -n..=n {
        for c in 1..cfg.p() as i64 {
            for radical in [false, true] {
                let base = if radical { cfg.sqrt_mu().scale_qp(&cfg.qp(c)) } else { cfg.ext(c) };
                let z = base.shift(k);
                if (&one - &z).abs()?.max(z.abs()?) < NormValue::ONE {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

pub fn swap_dichotomy(cfg: FieldConfig, z1: &ExtScalar, z2: &ExtScalar, base_dim: usize) -> Result<DichotomyReport> {
    let (z, phis) = pair_swap(cfg, base_dim);
    dichotomy(&z, &phis, z1, z2)
}

/// The dichotomy for an involutive Z and base vectors φ_m with Zφ_m ⊥ φ_m.
pub fn dichotomy(z: &AntiLinearOp, phis: &[Vector], z1: &ExtScalar, z2: &ExtScalar) -> Result<DichotomyReport> {
    let cfg = z.cfg();
    let involutive = z.is_involutive()?;
    let inv_sqrt_mu = cfg.sqrt_mu().inv()?;
    let c2 = z2 * &inv_sqrt_mu;
    let mut psi = Vec::new();
    let mut perturbations = Vec::new();
    for phi in phis {
        let zphi = z.apply(phi)?;
        let odd = zphi.sub(phi)?.scale(&c2);
        let even = zphi.add(phi)?.scale(z1);
        perturbations.push((sup_norm(&phi.sub(&even)?)?, sup_norm(&phi.sub(&odd)?)?));
        psi.push(odd);
        psi.push(even);
    }
    let z_invariant = psi.iter().map(|v| Ok(z.apply(v)?.eq_at_precision(v))).collect::<Result<Vec<_>>>()?;
    let self_ip = psi.iter().map(|v| ip(v, v)).collect::<Result<Vec<_>>>()?;
    let mut ip_orthogonal = true;
    for i in 0..psi.len() {
        for j in i + 1..psi.len() {
            if !ip(&psi[i], &psi[j])?.is_zero() {
                ip_orthogonal = false;
            }
        }
    }
    let normal = spaces::is_normal_system(&psi)?;
    let orthonormal = spaces::is_orthonormal_system(&psi);
    let mu = cfg.ext(cfg.mu());
    let bilinear_even = &cfg.ext(2) * &z1.square();
    let bilinear_odd = (&cfg.ext(-2) * &z2.square()).div(&mu)?;
    let one = cfg.one();
    let t1 = (&one - z1).abs()?.max(z1.abs()?);
    let t2 = (&one + &c2).abs()?.max(c2.abs()?);
    let perturbation_below_one = perturbations.iter().all(|(a, b)| *a < NormValue::ONE && *b < NormValue::ONE);
    let invariant = z_invariant.iter().all(|&b| b);
    let branch = match (orthonormal, invariant) {
        (true, true) => Branch::OrthonormalInvariant,
        (true, false) => Branch::OrthonormalNotInvariant,
        (false, true) if normal && ip_orthogonal => Branch::InvariantNormalNotOrthonormal,
        _ => Branch::Neither,
    };
    Ok(DichotomyReport {
        involutive,
        z1: z1.clone(),
        z2: z2.clone(),
        psi,
        z_invariant,
        self_ip,
        ip_orthogonal,
        normal,
        orthonormal,
        bilinear_even,
        bilinear_odd,
        t1,
        t2,
        t1_achievable: t_bound_achievable(cfg)?,
        perturbations,
        perturbation_below_one,
        branch,
    })
}

/// The literal witnesses z₁ = √(1/2) and z₂ = √(−1), taken in the extension.
pub fn literal_witnesses(cfg: FieldConfig) -> Result<(ExtScalar, ExtScalar)> {
    let z1 = sqrt_ext(cfg, &cfg.qp_ratio(1, 2))?;
    let z2 = sqrt_ext(cfg, &cfg.qp(-1))?;
    Ok((z1, z2))
}

/// Witnesses normalizing the Hermitian self inner products:
/// z₁·conj(z₁) = 1/2 and (z₂/√μ)·conj(z₂/√μ) = 1/2.
pub fn hermitian_witnesses(cfg: FieldConfig) -> Result<Option<(ExtScalar, ExtScalar)>> {
    let Some(s) = solve_norm_equation(cfg, &cfg.qp_ratio(1, 2))? else { return Ok(None) };
    let z2 = &s * &cfg.sqrt_mu();
    Ok(Some((s, z2)))
}

#[derive(Clone, Debug)]
pub struct InvariantSearch {
    /// Q_p-basis of the fixed set {x : Zx = x}
    pub fixed_basis: Vec<Vector>,
    pub candidates_tried: usize,
    /// fixed vectors of norm 1 with ⟨v, v⟩ = 1 met along the way
    pub unit_candidates: usize,
    pub basis: Option<Vec<Vector>>,
}

/// Bounded search for an orthonormal basis made of Z-fixed vectors, over
/// combinations of a fixed-set basis with coefficients n/m, |n| ≤ height,
/// 1 ≤ m ≤ height. Exhaustion is evidence, not a proof, of non-existence.
pub fn invariant_basis_search(z: &AntiLinearOp, height: i64, budget: usize) -> Result<InvariantSearch> {
    if !z.is_involutive()? {
        return Err(Error::NotInvolutive);
    }
    let cfg = z.cfg();
    let d = z.dim();
    let mut spanning = Vec::new();
    for k in 0..d {
        let (c1, c2) = z_invariant_decomposition(z, &Vector::basis(cfg, d, k))?;
        spanning.push(c1);
        spanning.push(c2);
    }
    // independent over Q_p: compare real coordinates (a_i, b_i)
    let as_real = |v: &Vector| -> Vec<ExtScalar> {
        v.coeffs()
            .iter()
            .flat_map(|c| [ExtScalar::from_qp(cfg, c.a().clone()), ExtScalar::from_qp(cfg, c.b().clone())])
            .collect()
    };
    let mut fixed_basis: Vec<Vector> = Vec::new();
    for v in spanning {
        let mut rows: Vec<Vec<ExtScalar>> = fixed_basis.iter().map(as_real).collect();
        rows.push(as_real(&v));
        if crate::linalg::rank(&rows, 2 * d)? == rows.len() {
            fixed_basis.push(v);
        }
    }
    let mut coeffs = vec![cfg.qp(0)];
    for m in 1..=height {
        for n in -height..=height {
            if n != 0 {
                let c = cfg.qp_ratio(n, m);
                if !coeffs.contains(&c) {
                    coeffs.push(c);
                }
            }
        }
    }
    let mut units: Vec<Vector> = Vec::new();
    let mut tried = 0usize;
    let total = coeffs.len().pow(fixed_basis.len() as u32);
    for idx in 0..total {
        if tried >= budget {
            break;
        }
        tried += 1;
        let mut rest = idx;
        let mut v = Vector::zeros(cfg, d);
        for b in &fixed_basis {
            let c = &coeffs[rest % coeffs.len()];
            rest /= coeffs.len();
            v = v.add(&b.scale(&ExtScalar::from_qp(cfg, c.clone())))?;
        }
        if v.is_zero() || sup_norm(&v)? != NormValue::ONE || !ip(&v, &v)?.is_one() {
            continue;
        }
        units.push(v);
    }
    let basis = extend_orthonormal(&units, d, &mut Vec::new())?;
    Ok(InvariantSearch { fixed_basis, candidates_tried: tried, unit_candidates: units.len(), basis })
}

fn extend_orthonormal(cands: &[Vector], d: usize, chosen: &mut Vec<Vector>) -> Result<Option<Vec<Vector>>> {
    if chosen.len() == d {
        return Ok(if spaces::is_orthonormal_basis(chosen, d) { Some(chosen.clone()) } else { None });
    }
    for (k, c) in cands.iter().enumerate() {
        let mut ok = true;
        for b in chosen.iter() {
            if !ip(b, c)?.is_zero() {
                ok = false;
                break;
            }
        }
        if ok {
            chosen.push(c.clone());
            if let Some(found) = extend_orthonormal(&cands[k + 1..], d, chosen)? {
                return Ok(Some(found));
            }
            chosen.pop();
        }
    }
    Ok(None)
}
