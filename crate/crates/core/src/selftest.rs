//! Deterministic self-test suites. Case k of a suite draws from an RNG seeded
//! by (seed, k) alone, so results do not depend on evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hsiso::{self, AntiLinearOp, Branch};
use crate::operators::{hs_ip, Extent, MatrixOperator, TailProfile};
use crate::padic::{FieldConfig, NormValue};
use crate::sample;
use crate::spaces::{ip, sup_norm, Vector};
use crate::subspaces::{self, Regularity, Subspace};
use crate::tensor::{pair_list_ip, proj_norm, simple_tensor, tensor_ip, Tensor};

pub const SUITES: [&str; 13] = [
    "ultrametric",
    "parseval",
    "cauchy-schwarz",
    "opnorm",
    "adjoint",
    "lattice",
    "projnorm",
    "tensor-ip",
    "iso",
    "zcoherence",
    "dichotomy",
    "decompose",
    "subspaces",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub suite: String,
    pub pass: usize,
    pub fail: usize,
    pub first_failure: Option<usize>,
    pub parts: Vec<SuiteResult>,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.fail == 0
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({"suite": self.suite, "pass": self.pass, "fail": self.fail});
        if let Some(k) = self.first_failure {
            v["first_failure"] = json!(k);
        }
        if !self.parts.is_empty() {
            v["suites"] = Value::Array(self.parts.iter().map(SuiteResult::to_json).collect());
        }
        v
    }
}

fn case_rng(seed: u64, k: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64 + 1);
    rng
}

type Check = fn(FieldConfig, &mut ChaCha8Rng) -> Result<bool>;

fn check_for(name: &str) -> Option<Check> {
    Some(match name {
        "ultrametric" => ultrametric,
        "parseval" => parseval,
        "cauchy-schwarz" => cauchy_schwarz,
        "opnorm" => opnorm,
        "adjoint" => adjoint,
        "lattice" => lattice,
        "projnorm" => projnorm,
        "tensor-ip" => tensor_ip_check,
        "iso" => iso,
        "zcoherence" => zcoherence,
        "dichotomy" => dichotomy,
        "decompose" => decompose,
        "subspaces" => subspaces_check,
        _ => return None,
    })
}

/// Run a named suite, or every suite for "all".
pub fn run(name: &str, cfg: FieldConfig, cases: usize, seed: u64) -> Result<SuiteResult> {
    if name == "all" {
        let parts = SUITES.iter().map(|s| run(s, cfg, cases, seed)).collect::<Result<Vec<_>>>()?;
        return Ok(SuiteResult {
            suite: "all".into(),
            pass: parts.iter().map(|r| r.pass).sum(),
            fail: parts.iter().map(|r| r.fail).sum(),
            first_failure: None,
            parts,
        });
    }
    let check = check_for(name).ok_or_else(|| Error::InvalidConfig(format!("unknown suite {name:?}")))?;
    let mut res = SuiteResult { suite: name.into(), pass: 0, fail: 0, first_failure: None, parts: Vec::new() };
    for k in 0..cases {
        let mut rng = case_rng(seed, k);
        if check(cfg, &mut rng).unwrap_or(false) {
            res.pass += 1;
        } else {
            res.fail += 1;
            res.first_failure.get_or_insert(k);
        }
    }
    Ok(res)
}

fn ultrametric(cfg: FieldConfig, rng: &mut ChaCha8Rng) -> Result<bool> {
    let x = sample::ext(cfg, rng, 3);
    let y = sample::ext(cfg, rng, 3);
    let (nx, ny) = (x.abs()?, y.abs()?);
    let ns = (&x + &y).abs()?;
    let mult = (&x * &y).abs()? == nx * ny;
    let strong = ns <= nx.max(ny);
    let sharp = nx == ny || ns == nx.max(ny);
    Ok(mult && strong && sharp)
}

fn parseval(cfg: FieldConfig, rng: &mut ChaCha8Rng) -> Result<bool> {
    let d = rng.gen_range(1..=5);
    let psi = hsiso::random_unitary(cfg, d, rng)?.columns();
    let x = sample::vector(cfg, rng, d, 3);
    let coords = psi.iter().map(|p| ip(p, &x)).collect::<Result<Vec<_>>>()?;
    let mut max = NormValue::Zero;
    for c in &coords {
        max = max.max(c.abs()?);
    }
    let mut back = Vector::zeros(cfg, d);
    for (c, p) in coords.iter().zip(&psi) {
        back = back.add(&p.scale(c))?;
    }
    Ok(sup_norm(&x)? == max && back.eq_at_precision(&x))
}

fn cauchy_schwarz(cfg: FieldConfig, rng: &mut ChaCha8Rng) -> Result<bool> {
    let d = rng.gen_range(1..=6);
    let x = sample::vector(cfg, rng, d, 3);
    let y = sample::vector(cfg, rng, d, 3);
    Ok(ip(&x, &y)?.abs()? <= sup_norm(&x)? * sup_norm(&y)?)
}

fn opnorm(cfg: FieldConfig, rng: &mut ChaCha8Rng) -> Result<bool> {
    let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
    let b = sample::matrix(cfg, rng, r, c, 3);
    let n = b.op_norm()?;
    if n != b.max_column_norm()? {
        return Ok(false);
    }
    for _ in 0..10 {
        let x = sample::nonzero_vector(cfg, rng, c, 3);
        if sup_norm(&b.apply(&x)?)? > n * sup_norm(&x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn adjoint(cfg: FieldConfig, rng: &mut ChaCha8Rng) -> Result<bool> {
    let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
    let b = sample::matrix(cfg, rng, r, c, 3);
    let zeta = sample::vector(cfg, rng, r, 3);
    let chi = sample::vector(cfg, rng, c, 3);
    let bs = b.adjoint()?;
    Ok(ip(&zeta, &b.apply(&chi)?)?.eq_at_precision(&ip(&bs.apply(&zeta)?, &chi)?) && bs.op_norm()? == b.op_norm()?)
}

/// Truth table for the tail classification.
pub fn expected_classification(alpha_pos: bool, beta_pos: bool, rows_finite: bool, cols_finite: bool) -> (bool, bool, bool) {
    let bounded = rows_finite || alpha_pos;
    let adjointable = bounded && (cols_finite || beta_pos);
    let trace_class = (rows_finite || alpha_pos) && (cols_finite || beta_pos);
    (bounded, adjointable, trace_class)
}

pub const SLOPES: [(i64, i64); 4] = [(0, 1), (1, 2), (1, 1), (2, 1)];

fn lattice(cfg: FieldConfig, rng: &mut ChaCha8Rng) -> Result<bool> {
    let a = SLOPES[rng.gen_range(0..4)];
    let b = SLOPES[rng.gen_range(0..4)];
    let (rows, cols) = match rng.gen_range(0..3) {
        0 => (Extent::Infinite, Extent::Infinite),
        1 => (Extent::Finite(rng.gen_range(1..6)), Extent::Infinite),
        _ => (Extent::Infinite, Extent::Finite(rng.gen_range(1..6))),
    };
    let profile = TailProfile::from_ratios(a, b, (rng.gen_range(-2..3), 1))?;
    let t = MatrixOperator::with_tail(cfg, 0, 0, Vec::new(), profile, rows, cols)?;
    let r = t.classify()?;
    let want = expected_classification(a.0 > 0, b.0 > 0, rows.is_finite(), cols.is_finite());
    Ok((r.bounded, r.adjointable, r.trace_class) == want && r.all_over == r.bounded && r.compact_and_adjointable == r.trace_class)
}

fn random_pairs(cfg: FieldConfig, rng: &mut ChaCha8Rng, dh: usize, dk: usize, n: usize) -> Vec<(Vector, Vector)> {
    (0..n).map(|_| (sample::vector(cfg, rng, dh, 2), sample::vector(cfg, rng, dk, 2))).collect()
}

fn projnorm(cfg: FieldConfig, rng: &mut ChaCha8Rng) -> Result<bool> {
    let (dh, dk) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let n = rng.gen_range(1..=4);
    let pairs = random_pairs(cfg, rng, dh, dk, n);
    let t = Tensor::from_pairs(cfg, dh, dk, pairs.clone())?;
    let mut rep = NormValue::Zero;
    for (x, y) in &pairs {
        rep = rep.max(sup_norm(x)? * sup_norm(y)?);
    }
    Ok(proj_norm(&t)? <= rep)
}

fn tensor_ip_check(cfg: FieldConfig, rng: &mut ChaCha8Rng) -> Result<bool> {
    let (dh, dk) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let (n, m) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    let u = random_pairs(cfg, rng, dh, dk, n);
    let v = random_pairs(cfg, rng, dh, dk, m);
    let tu = Tensor::from_pairs(cfg, dh, dk, u.clone())?;
    let tv = Tensor::from_pairs(cfg, dh, dk, v.clone())?;
    Ok(pair_list_ip(&u, &v, cfg)?.eq_at_precision(&tensor_ip(&tu, &tv)?))
}

fn iso(cfg: FieldConfig, rng: &mut ChaCha8Rng) -> Result<bool> {
    let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let s = sample::matrix(cfg, rng, r, c, 2);
    let t = sample::matrix(cfg, rng, r, c, 2);
    let (is, it) = (hsiso::iso_i(&s)?, hsiso::iso_i(&t)?);
    let v = sample::vector(cfg, rng, c, 2);
    let w = sample::vector(cfg, rng, r, 2);
    let law = hsiso::iso_i(&hsiso::rank_one(&v, &w))? == simple_tensor(&v.conj(), &w);
    Ok(proj_norm(&it)? == t.op_norm()?
        && hs_ip(&s, &t)?.eq_at_precision(&tensor_ip(&is, &it)?)
        && hsiso::iso_i_star(&it)?.eq_at_precision(&t)
        && law)
}

fn zcoherence(cfg: FieldConfig, rng: &mut ChaCha8Rng) -> Result<bool> {
    let d = rng.gen_range(1..=4);
    let u = hsiso::random_unitary(cfg, d, rng)?;
    let seed = rng.gen();
    let good = hsiso::z_predicates(&AntiLinearOp::new(u.clone())?, 6, seed)?;
    let bad_linear = match rng.gen_range(0..3) {
        0 => u.scale(&cfg.ext(cfg.p() as i64)),
        1 => {
            // drop a column: not surjective
            let mut cols = u.columns();
            cols[0] = Vector::zeros(cfg, d);
            MatrixOperator::from_columns(cfg, &cols)?
        }
        _ => {
            // scale one column by a non-unit-modulus scalar: not IP-conjugating
            let mut cols = u.columns();
            cols[d - 1] = cols[d - 1].scale(&cfg.ext_ratio(1, cfg.p() as i64));
            MatrixOperator::from_columns(cfg, &cols)?
        }
    };
    let bad = hsiso::z_predicates(&AntiLinearOp::new(bad_linear)?, 6, seed)?;
    Ok(good.verdict() == Some(true) && bad.verdict() == Some(false))
}

fn dichotomy(cfg: FieldConfig, rng: &mut ChaCha8Rng) -> Result<bool> {
    let base = rng.gen_range(1..=3);
    let c = sample::unit_ext(cfg, rng).a().clone();
    let c = crate::ExtScalar::from_qp(cfg, c);
    let r = hsiso::swap_dichotomy(cfg, &c, &c, base)?;
    // with μ ramified, |z₂/√μ| = p^{1/2} for rational z₂, so the odd vectors are never normal
    let expected = if cfg.is_ramified() { Branch::Neither } else { Branch::InvariantNormalNotOrthonormal };
    let rational_ok = r.branch == expected && r.z_invariant.iter().all(|&b| b) && !r.t1_achievable;
    let herm_ok = match hsiso::hermitian_witnesses(cfg)? {
        Some((z1, z2)) => hsiso::swap_dichotomy(cfg, &z1, &z2, base)?.branch == Branch::OrthonormalNotInvariant,
        None => true,
    };
    Ok(rational_ok && herm_ok)
}

fn decompose(cfg: FieldConfig, rng: &mut ChaCha8Rng) -> Result<bool> {
    let d = rng.gen_range(1..=4);
    let psi = hsiso::random_unitary(cfg, d, rng)?.columns();
    let z = hsiso::conjugation_for_basis(&psi)?;
    let x = sample::vector(cfg, rng, d, 3);
    let (c1, c2) = hsiso::z_invariant_decomposition(&z, &x)?;
    Ok(z.apply(&c1)?.eq_at_precision(&c1)
        && z.apply(&c2)?.eq_at_precision(&c2)
        && hsiso::reconstruct(&c1, &c2)?.eq_at_precision(&x))
}

fn subspaces_check(cfg: FieldConfig, rng: &mut ChaCha8Rng) -> Result<bool> {
    let d = rng.gen_range(2..=4);
    let k = rng.gen_range(1..d);
    let cols = hsiso::random_unitary(cfg, d, rng)?.columns();
    let w = Subspace::new(cfg, d, cols[..k].to_vec())?;
    let reg = subspaces::is_regular(&w, 4, rng.gen())?;
    let h = rng.gen_range(1..=3);
    let t = subspaces::tensor_subspace(h, &w)?;
    Ok(reg.verdict == Regularity::Regular && t.extension().is_some() && t.dim() == h * k)
}
