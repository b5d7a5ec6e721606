use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{FieldConfig, NormValue, Qp, Residue, Valuation};
use crate::error::{Error, Result};

/// a + b√μ in Q_p(√μ).
#[derive(Clone, Debug)]
pub struct ExtScalar {
    cfg: FieldConfig,
    a: Qp,
    b: Qp,
}

impl ExtScalar {
    pub fn new(cfg: FieldConfig, a: Qp, b: Qp) -> Self {
        ExtScalar { cfg, a, b }
    }

    pub fn from_qp(cfg: FieldConfig, a: Qp) -> Self {
        let b = cfg.qp_zero();
        ExtScalar { cfg, a, b }
    }

    pub fn zero(cfg: FieldConfig) -> Self {
        ExtScalar::from_qp(cfg, cfg.qp(0))
    }

    pub fn one(cfg: FieldConfig) -> Self {
        ExtScalar::from_qp(cfg, cfg.qp(1))
    }

    pub fn sqrt_mu(cfg: FieldConfig) -> Self {
        ExtScalar { cfg, a: cfg.qp(0), b: cfg.qp(1) }
    }

    pub fn cfg(&self) -> FieldConfig {
        self.cfg
    }

    /// The Q_p-coordinate a.
    pub fn a(&self) -> &Qp {
        &self.a
    }

    /// The coefficient b of √μ.
    pub fn b(&self) -> &Qp {
        &self.b
    }

    pub fn conj(&self) -> Self {
        ExtScalar { cfg: self.cfg, a: self.a.clone(), b: -&self.b }
    }

    /// Field norm a² − μb², an element of Q_p.
    pub fn norm(&self) -> Qp {
        &self.a.square() - &(&self.cfg.qp(self.cfg.mu()) * &self.b.square())
    }

    /// Valuation of the field norm. For the unramified extension it is
    /// 2·min(v(a), v(b)); when μ is a uniformizer it is min(2v(a), 2v(b)+1).
    /// Neither form can cancel, so this is known whenever the smaller term is.
    pub fn norm_valuation(&self) -> Valuation {
        let va = self.a.valuation().scale(2, 0);
        let vb = if self.cfg.is_ramified() {
            self.b.valuation().scale(2, 1)
        } else {
            self.b.valuation().scale(2, 0)
        };
        va.min(vb)
    }

    /// |z| = |a² − μb²|^(1/2).
    pub fn abs(&self) -> Result<NormValue> {
        match self.norm_valuation() {
            Valuation::Infinite => Ok(NormValue::Zero),
            Valuation::Finite(v) => Ok(NormValue::Pow(-v)),
            Valuation::AtLeast(v) => Err(Error::precision(format!("absolute value of a scalar known only to O(p^{v})"))),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.a.is_exact() && self.b.is_exact()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.a.is_exact_zero() && self.b.is_exact_zero()
    }

    /// Zero to all known digits.
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.eq_at_precision(&self.cfg.one())
    }

    /// True when b vanishes, i.e. the value lies in Q_p (to known digits).
    pub fn in_qp(&self) -> bool {
        self.b.is_zero()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_exact_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        if n.is_zero() {
            // the norm cannot cancel at the leading digit, so this is a genuine loss
            return Err(Error::precision("inverse of a scalar that is zero at precision"));
        }
        let ninv = n.inv()?;
        Ok(ExtScalar { cfg: self.cfg, a: &self.a * &ninv, b: -(&self.b * &ninv) })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn scale_qp(&self, s: &Qp) -> Self {
        ExtScalar { cfg: self.cfg, a: &self.a * s, b: &self.b * s }
    }

    /// Multiply by p^k.
    pub fn shift(&self, k: i64) -> Self {
        ExtScalar { cfg: self.cfg, a: self.a.shift(k), b: self.b.shift(k) }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut acc = self.cfg.one();
        for _ in 0..n.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn eq_at_precision(&self, other: &Self) -> bool {
        self.a.eq_at_precision(&other.a) && self.b.eq_at_precision(&other.b)
    }

    /// Reduction into the residue field; requires |z| ≤ 1.
    pub fn residue(&self) -> Result<Residue> {
        let a = self.a.residue()?;
        let b = if self.cfg.is_ramified() { 0 } else { self.b.residue()? };
        Ok(Residue { a, b })
    }

    /// Forget digits of both coordinates at or beyond p^abs.
    pub fn truncate(&self, abs: i64) -> Self {
        ExtScalar { cfg: self.cfg, a: self.a.truncate(abs), b: self.b.truncate(abs) }
    }

    fn add_impl(&self, o: &Self) -> Self {
        ExtScalar { cfg: self.cfg, a: &self.a + &o.a, b: &self.b + &o.b }
    }

    fn sub_impl(&self, o: &Self) -> Self {
        ExtScalar { cfg: self.cfg, a: &self.a - &o.a, b: &self.b - &o.b }
    }

    fn mul_impl(&self, o: &Self) -> Self {
        debug_assert_eq!(self.cfg, o.cfg, "mixing scalars of different fields");
        let mu = self.cfg.qp(self.cfg.mu());
        let a = &(&self.a * &o.a) + &(&mu * &(&self.b * &o.b));
        let b = &(&self.a * &o.b) + &(&self.b * &o.a);
        ExtScalar { cfg: self.cfg, a, b }
    }
}

impl PartialEq for ExtScalar {
    fn eq(&self, other: &Self) -> bool {
        self.eq_at_precision(other)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl $tr<&ExtScalar> for &ExtScalar {
            type Output = ExtScalar;
            fn $m(self, rhs: &ExtScalar) -> ExtScalar {
                self.$imp(rhs)
            }
        }
        impl $tr<ExtScalar> for ExtScalar {
            type Output = ExtScalar;
            fn $m(self, rhs: ExtScalar) -> ExtScalar {
                (&self).$imp(&rhs)
            }
        }
        impl $tr<&ExtScalar> for ExtScalar {
            type Output = ExtScalar;
            fn $m(self, rhs: &ExtScalar) -> ExtScalar {
                (&self).$imp(rhs)
            }
        }
        impl $tr<ExtScalar> for &ExtScalar {
            type Output = ExtScalar;
            fn $m(self, rhs: ExtScalar) -> ExtScalar {
                self.$imp(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);

impl Neg for &ExtScalar {
    type Output = ExtScalar;
    fn neg(self) -> ExtScalar {
        ExtScalar { cfg: self.cfg, a: -&self.a, b: -&self.b }
    }
}

impl Neg for ExtScalar {
    type Output = ExtScalar;
    fn neg(self) -> ExtScalar {
        -&self
    }
}

impl fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_exact_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}·√{}", self.a, self.b, self.cfg.mu())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::MuKind;

    fn f5() -> FieldConfig {
        FieldConfig::new(5, MuKind::NonResidue, 32).unwrap()
    }

    #[test]
    fn abs_examples() {
        let cfg = f5();
        assert_eq!(cfg.ext(75).abs().unwrap(), NormValue::Pow(-4));
        let z = ExtScalar::new(cfg, cfg.qp(1), cfg.qp(2));
        assert_eq!(z.abs().unwrap(), NormValue::ONE);
        assert_eq!(z.norm(), cfg.qp(-7));
        assert_eq!(cfg.zero().abs().unwrap(), NormValue::Zero);
    }

    #[test]
    fn ramified_half_exponents() {
        let cfg = FieldConfig::new(5, MuKind::Uniformizer, 32).unwrap();
        assert_eq!(cfg.sqrt_mu().abs().unwrap(), NormValue::Pow(-1));
        let z = ExtScalar::new(cfg, cfg.qp(5), cfg.qp(1));
        assert_eq!(z.abs().unwrap(), NormValue::Pow(-1));
    }

    #[test]
    fn conjugation() {
        let cfg = f5();
        let r = cfg.sqrt_mu();
        assert_eq!(r.conj(), -&r);
        assert_eq!(cfg.ext(3).conj(), cfg.ext(3));
        let z = &cfg.one() + &r;
        assert_eq!(z.conj().conj(), z);
        assert_eq!(&r * &r, cfg.ext(2));
    }

    #[test]
    fn inverse() {
        let cfg = f5();
        let z = ExtScalar::new(cfg, cfg.qp(3), cfg.qp_ratio(1, 5));
        assert_eq!(&z * &z.inv().unwrap(), cfg.one());
        assert_eq!(cfg.zero().inv().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn abs_survives_partial_precision() {
        let cfg = f5();
        // a only known to O(p^3) but b is a unit: |z| is still determined
        let z = ExtScalar::new(cfg, Qp::zero_at(5, 32, 3), cfg.qp(1));
        assert_eq!(z.abs().unwrap(), NormValue::ONE);
        let w = ExtScalar::new(cfg, Qp::zero_at(5, 32, 3), Qp::zero_at(5, 32, 2));
        assert!(w.abs().unwrap_err().is_precision_loss());
    }
}
