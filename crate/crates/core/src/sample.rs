//! Seeded generators of scalars, vectors and matrices for property checks and
//! the self-test suites. Every generator draws only from the supplied RNG, so
//! a fixed seed reproduces the same data.

use rand::Rng;

use crate::operators::MatrixOperator;
use crate::padic::{sqrt_qp, ExtScalar, FieldConfig, Qp};
use crate::spaces::Vector;

/// Exact rational p^k·n/d with k in [-vmax, vmax], small n and a p-free d.
pub fn rational<R: Rng>(cfg: FieldConfig, rng: &mut R, vmax: i64) -> Qp {
    let p = cfg.p() as i64;
    let n = loop {
        let n = rng.gen_range(1..=p * p) * if rng.gen_bool(0.5) { 1 } else { -1 };
        if n % p != 0 {
            break n;
        }
    };
    let d = loop {
        let d = rng.gen_range(1..=p + 3);
        if d % p != 0 {
            break d;
        }
    };
    let k = rng.gen_range(-vmax..=vmax);
    &cfg.qp_ratio(n, d) * &cfg.p_pow(k)
}

/// A scalar of Q_p, zero with probability `zero_rate`, otherwise a random
/// rational, occasionally replaced by an inexact Hensel-lifted square root.
pub fn qp<R: Rng>(cfg: FieldConfig, rng: &mut R, vmax: i64, zero_rate: f64) -> Qp {
    if rng.gen_bool(zero_rate) {
        return cfg.qp(0);
    }
    let r = rational(cfg, rng, vmax);
    if rng.gen_bool(0.1) {
        // a non-rational element: root of a square unit times p^(2k)
        let k = rng.gen_range(-(vmax / 2)..=vmax / 2);
        let base = &cfg.qp(1 + cfg.p() as i64 * rng.gen_range(1..5i64)) * &cfg.p_pow(2 * k);
        if let Ok(root) = sqrt_qp(&base) {
            if !root.is_exact() {
                return root;
            }
        }
    }
    r
}

pub fn ext<R: Rng>(cfg: FieldConfig, rng: &mut R, vmax: i64) -> ExtScalar {
    ExtScalar::new(cfg, qp(cfg, rng, vmax, 0.2), qp(cfg, rng, vmax, 0.3))
}

pub fn nonzero_ext<R: Rng>(cfg: FieldConfig, rng: &mut R, vmax: i64) -> ExtScalar {
    loop {
        let z = ext(cfg, rng, vmax);
        if !z.is_zero() {
            return z;
        }
    }
}

/// Exact scalar of absolute value 1.
pub fn unit_ext<R: Rng>(cfg: FieldConfig, rng: &mut R) -> ExtScalar {
    let a = rational(cfg, rng, 0);
    let a = &a * &cfg.p_pow(-a.known_valuation().unwrap().unwrap());
    let b = if rng.gen_bool(0.5) { rational(cfg, rng, 0) } else { cfg.qp(0) };
    let b = if cfg.is_ramified() || b.is_zero() {
        b
    } else {
        let v = b.known_valuation().unwrap().unwrap();
        &b * &cfg.p_pow(-v + rng.gen_range(0..2))
    };
    ExtScalar::new(cfg, a, b)
}

pub fn vector<R: Rng>(cfg: FieldConfig, rng: &mut R, dim: usize, vmax: i64) -> Vector {
    Vector::new(cfg, (0..dim).map(|_| ext(cfg, rng, vmax)).collect())
}

pub fn nonzero_vector<R: Rng>(cfg: FieldConfig, rng: &mut R, dim: usize, vmax: i64) -> Vector {
    loop {
        let v = vector(cfg, rng, dim, vmax);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Exact-valued vector (no Hensel roots), handy where exact identities matter.
pub fn exact_vector<R: Rng>(cfg: FieldConfig, rng: &mut R, dim: usize, vmax: i64) -> Vector {
    let mut one = || {
        let a = if rng.gen_bool(0.2) { cfg.qp(0) } else { rational(cfg, rng, vmax) };
        let b = if rng.gen_bool(0.4) { cfg.qp(0) } else { rational(cfg, rng, vmax) };
        ExtScalar::new(cfg, a, b)
    };
    Vector::new(cfg, (0..dim).map(|_| one()).collect())
}

pub fn matrix<R: Rng>(cfg: FieldConfig, rng: &mut R, rows: usize, cols: usize, vmax: i64) -> MatrixOperator {
    let entries = (0..rows).map(|_| (0..cols).map(|_| ext(cfg, rng, vmax)).collect()).collect();
    MatrixOperator::new(cfg, rows, cols, entries).expect("shape is consistent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{MuKind, NormValue};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_are_deterministic() {
        let cfg = FieldConfig::new(7, MuKind::NonResidue, 32).unwrap();
        let a = vector(cfg, &mut ChaCha8Rng::seed_from_u64(3), 5, 3);
        let b = vector(cfg, &mut ChaCha8Rng::seed_from_u64(3), 5, 3);
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }

    #[test]
    fn unit_scalars_have_norm_one() {
        for kind in MuKind::ALL {
            let cfg = FieldConfig::new(5, kind, 32).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..50 {
                assert_eq!(unit_ext(cfg, &mut rng).abs().unwrap(), NormValue::ONE);
            }
        }
    }
}
