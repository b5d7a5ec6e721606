use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::qp::{big_pow, mod_floor, mod_inverse};
use super::{ExtScalar, FieldConfig, Qp, Valuation};
use crate::error::{Error, Result};

fn legendre_is_residue(r: u32, p: u32) -> bool {
    (1..p as u64).any(|y| (y * y) % p as u64 == r as u64)
}

/// x is a square in Q_p: even valuation and a quadratic-residue unit digit.
/// Zero counts as a square.
pub fn is_square(x: &Qp) -> Result<bool> {
    match x.valuation() {
        Valuation::Infinite => Ok(true),
        Valuation::AtLeast(a) => Err(Error::precision(format!("square test on O(p^{a})"))),
        Valuation::Finite(v) => {
            if v.rem_euclid(2) != 0 {
                return Ok(false);
            }
            Ok(legendre_is_residue(x.unit_residue()?, x.p()))
        }
    }
}

fn exact_rational_root(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// A square root in Q_p. Perfect rational squares return their positive
/// rational root; otherwise the root whose leading digit is the smaller of the
/// two residue roots is Hensel-lifted to the precision of the input.
pub fn sqrt_qp(x: &Qp) -> Result<Qp> {
    if x.is_exact_zero() {
        return Ok(x.clone());
    }
    if let Some(r) = x.positive_rational().and_then(exact_rational_root) {
        return Ok(Qp::exact(x.p(), x.cap(), r));
    }
    if !is_square(x)? {
        return Err(Error::NotASquare);
    }
    let p = x.p();
    let k = x.rel_precision().unwrap_or(x.cap());
    let (v, unit) = x.unit_mod(k)?;
    let u0 = unit.to_u64().map(|u| u % p as u64).unwrap_or_else(|| (unit.clone() % p).to_u64().unwrap());
    let r0 = (1..p as u64).find(|y| (y * y) % p as u64 == u0).expect("residue root exists");
    let mut y = BigInt::from(r0);
    let mut prec = 1u32;
    while prec < k {
        prec = (2 * prec).min(k);
        let m = big_pow(p, prec);
        let two_inv = mod_inverse(&BigInt::from(2), &m);
        y = mod_floor(&((&y + &unit * mod_inverse(&y, &m)) * two_inv), &m);
    }
    Ok(Qp::approx(p, x.cap(), v / 2, y, k))
}

/// A square root in Q_p(√μ) of an element of Q_p: either a root in Q_p or
/// t√μ with t² = x/μ.
pub fn sqrt_ext(cfg: FieldConfig, x: &Qp) -> Result<ExtScalar> {
    if is_square(x)? {
        return Ok(ExtScalar::from_qp(cfg, sqrt_qp(x)?));
    }
    let over_mu = x.div(&cfg.qp(cfg.mu()))?;
    if is_square(&over_mu)? {
        return Ok(ExtScalar::new(cfg, cfg.qp(0), sqrt_qp(&over_mu)?));
    }
    Err(Error::NotASquareInExtension)
}

/// Some s with a² − μb² equal to the target, found by scanning b over small
/// multiples of powers of p around half the target's valuation. In the
/// ramified case the norm group is the squares together with −μ times the
/// squares, so the first two probes already decide solvability; for the
/// unramified extension every target of even valuation is reached by the scan.
pub fn solve_norm_equation(cfg: FieldConfig, target: &Qp) -> Result<Option<ExtScalar>> {
    if target.is_exact_zero() {
        return Ok(Some(cfg.zero()));
    }
    let v = target
        .known_valuation()?
        .expect("nonzero target has a valuation");
    let mu = cfg.qp(cfg.mu());
    if is_square(target)? {
        return Ok(Some(ExtScalar::from_qp(cfg, sqrt_qp(target)?)));
    }
    let minus_over_mu = (-target).div(&mu)?;
    if is_square(&minus_over_mu)? {
        return Ok(Some(ExtScalar::new(cfg, cfg.qp(0), sqrt_qp(&minus_over_mu)?)));
    }
    let half = v.div_euclid(2);
    for j in [half, half - 1, half + 1] {
        for k in 1..cfg.p() as i64 {
            let b = &cfg.qp(k) * &cfg.p_pow(j);
            let c = target + &(&mu * &b.square());
            if c.is_zero() || !is_square(&c)? {
                continue;
            }
            let a = sqrt_qp(&c)?;
            return Ok(Some(ExtScalar::new(cfg, a, b)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::MuKind;

    fn f5() -> FieldConfig {
        FieldConfig::new(5, MuKind::NonResidue, 32).unwrap()
    }

    #[test]
    fn square_tests() {
        let cfg = f5();
        assert!(is_square(&cfg.qp(6)).unwrap());
        assert!(!is_square(&cfg.qp(2)).unwrap());
        assert!(!is_square(&cfg.qp_ratio(1, 2)).unwrap());
        assert!(!is_square(&cfg.qp(5)).unwrap());
        assert!(is_square(&cfg.qp(-1)).unwrap());
    }

    #[test]
    fn sqrt_of_six_mod_25() {
        let cfg = f5();
        let r = sqrt_qp(&cfg.qp(6)).unwrap();
        let (v, ds) = r.digits().unwrap();
        assert_eq!(v, 0);
        assert_eq!(ds[0] + 5 * ds[1], 16);
        assert_eq!(r.square(), cfg.qp(6));
        assert_eq!(r.rel_precision(), Some(32));
    }

    #[test]
    fn exact_roots_stay_exact() {
        let cfg = f5();
        assert_eq!(sqrt_qp(&cfg.qp_ratio(1, 4)).unwrap().as_rational().unwrap(), &BigRational::new(1.into(), 2.into()));
        assert_eq!(sqrt_qp(&cfg.qp(2)).unwrap_err(), Error::NotASquare);
    }

    #[test]
    fn sqrt_ext_cases() {
        let cfg = f5();
        let h = sqrt_ext(cfg, &cfg.qp_ratio(1, 2)).unwrap();
        assert!(h.a().is_exact_zero());
        assert_eq!(h.b(), &cfg.qp_ratio(1, 2));
        assert_eq!(h.square(), cfg.ext_ratio(1, 2));
        assert!(sqrt_ext(cfg, &cfg.qp(6)).unwrap().in_qp());
        assert_eq!(sqrt_ext(cfg, &cfg.qp(1)).unwrap(), cfg.one());
        // odd valuation has no root in the unramified extension
        assert_eq!(sqrt_ext(cfg, &cfg.qp(5)).unwrap_err(), Error::NotASquareInExtension);
    }

    #[test]
    fn norm_equation_unramified_units() {
        let cfg = f5();
        for t in [1i64, 2, 3, 4, 7, -1] {
            let s = solve_norm_equation(cfg, &cfg.qp(t)).unwrap().unwrap();
            assert_eq!(s.norm(), cfg.qp(t));
        }
        let s = solve_norm_equation(cfg, &cfg.qp_ratio(1, 2)).unwrap().unwrap();
        assert_eq!(s.norm(), cfg.qp_ratio(1, 2));
        assert!(solve_norm_equation(cfg, &cfg.qp(5)).unwrap().is_none());
    }

    #[test]
    fn norm_equation_ramified() {
        let cfg = FieldConfig::new(5, MuKind::Uniformizer, 32).unwrap();
        // norms are squares and -5 times squares
        assert!(solve_norm_equation(cfg, &cfg.qp(-5)).unwrap().is_some());
        assert!(solve_norm_equation(cfg, &cfg.qp(4)).unwrap().is_some());
        assert!(solve_norm_equation(cfg, &cfg.qp(2)).unwrap().is_none());
    }
}
