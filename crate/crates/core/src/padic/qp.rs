use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An element of Q_p.
///
/// Values built from rationals stay exact through ring operations with other
/// exact values. Once an inexact operand (a Hensel-lifted root, an explicit
/// digit literal) is involved the result carries a relative precision capped at
/// `cap` digits, and a difference that vanishes to all known digits becomes the
/// distinct zero-at-precision state.
#[derive(Clone, Debug)]
pub struct Qp {
    p: u32,
    cap: u32,
    repr: Repr,
}

#[derive(Clone, Debug)]
enum Repr {
    Exact(BigRational),
    /// p^val · unit with the unit known modulo p^rel and coprime to p
    Approx { val: i64, unit: BigInt, rel: u32 },
    /// only known to lie in p^abs · Z_p
    ZeroAt(i64),
}

/// The p-adic valuation, possibly only bounded below.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Infinite,
    Finite(i64),
    AtLeast(i64),
}

impl Valuation {
    /// Smallest of two valuations, keeping track of what is known.
    pub fn min(self, other: Valuation) -> Valuation {
        use Valuation::*;
        match (self, other) {
            (Infinite, v) | (v, Infinite) => v,
            (Finite(a), Finite(b)) => Finite(a.min(b)),
            (Finite(a), AtLeast(b)) | (AtLeast(b), Finite(a)) => {
                if a <= b {
                    Finite(a)
                } else {
                    AtLeast(b)
                }
            }
            (AtLeast(a), AtLeast(b)) => AtLeast(a.min(b)),
        }
    }

    pub fn scale(self, k: i64, shift: i64) -> Valuation {
        match self {
            Valuation::Infinite => Valuation::Infinite,
            Valuation::Finite(v) => Valuation::Finite(k * v + shift),
            Valuation::AtLeast(v) => Valuation::AtLeast(k * v + shift),
        }
    }

    /// A lower bound usable for bookkeeping; `None` for an exact zero.
    pub fn lower_bound(self) -> Option<i64> {
        match self {
            Valuation::Infinite => None,
            Valuation::Finite(v) | Valuation::AtLeast(v) => Some(v),
        }
    }
}

pub(crate) fn big_pow(p: u32, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), k as usize)
}

/// Strip all factors of p from a nonzero integer.
pub(crate) fn split_p(n: &BigInt, p: u32) -> (i64, BigInt) {
    let pb = BigInt::from(p);
    let mut v = 0i64;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return (v, m);
        }
        m = q;
        v += 1;
    }
}

pub(crate) fn mod_floor(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one(), "inverse of non-unit");
    e.x.mod_floor(m)
}

/// Valuation of a nonzero rational plus its p-free numerator and denominator.
fn rational_split(r: &BigRational, p: u32) -> (i64, BigInt, BigInt) {
    let (vn, n) = split_p(r.numer(), p);
    let (vd, d) = split_p(r.denom(), p);
    (vn - vd, n, d)
}

impl Qp {
    pub fn exact(p: u32, cap: u32, r: BigRational) -> Qp {
        Qp { p, cap, repr: Repr::Exact(r) }
    }

    pub fn from_i64(p: u32, cap: u32, n: i64) -> Qp {
        Qp::exact(p, cap, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero(p: u32, cap: u32) -> Qp {
        Qp::from_i64(p, cap, 0)
    }

    pub fn p_power(p: u32, cap: u32, k: i64) -> Qp {
        let m = big_pow(p, k.unsigned_abs() as u32);
        let r = if k >= 0 {
            BigRational::from_integer(m)
        } else {
            BigRational::new(BigInt::one(), m)
        };
        Qp::exact(p, cap, r)
    }

    /// p^val · unit + O(p^(val+rel)); factors of p in `unit` are absorbed.
    pub fn approx(p: u32, cap: u32, val: i64, unit: BigInt, rel: u32) -> Qp {
        let modulus = big_pow(p, rel);
        let u = mod_floor(&unit, &modulus);
        if u.is_zero() {
            return Qp::zero_at(p, cap, val + rel as i64);
        }
        let (t, u) = split_p(&u, p);
        let rel = rel - t as u32;
        let val = val + t;
        let rel_c = rel.min(cap);
        let u = if rel_c < rel { mod_floor(&u, &big_pow(p, rel_c)) } else { u };
        Qp { p, cap, repr: Repr::Approx { val, unit: u, rel: rel_c } }
    }

    pub fn zero_at(p: u32, cap: u32, abs: i64) -> Qp {
        Qp { p, cap, repr: Repr::ZeroAt(abs) }
    }

    /// p^shift · (d0 + d1 p + d2 p² + …), known to the digits given.
    pub fn from_digits(p: u32, cap: u32, shift: i64, digits: &[u32]) -> Qp {
        let mut unit = BigInt::zero();
        for &d in digits.iter().rev() {
            unit = unit * p + d;
        }
        Qp::approx(p, cap, shift, unit, digits.len() as u32)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Exact(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Exact(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(&self.repr, Repr::Exact(r) if r.is_zero())
    }

    /// Zero to every known digit (including an exact zero).
    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Exact(r) => r.is_zero(),
            Repr::Approx { .. } => false,
            Repr::ZeroAt(_) => true,
        }
    }

    pub fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::Exact(r) if r.is_zero() => Valuation::Infinite,
            Repr::Exact(r) => Valuation::Finite(rational_split(r, self.p).0),
            Repr::Approx { val, .. } => Valuation::Finite(*val),
            Repr::ZeroAt(a) => Valuation::AtLeast(*a),
        }
    }

    /// Exact valuation, `None` for an exact zero, an error when undetermined.
    pub fn known_valuation(&self) -> Result<Option<i64>> {
        match self.valuation() {
            Valuation::Infinite => Ok(None),
            Valuation::Finite(v) => Ok(Some(v)),
            Valuation::AtLeast(a) => Err(Error::precision(format!("valuation of O(p^{a})"))),
        }
    }

    /// The exponent k of the O(p^k) error term; `None` when exact.
    pub fn abs_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Exact(_) => None,
            Repr::Approx { val, rel, .. } => Some(val + *rel as i64),
            Repr::ZeroAt(a) => Some(*a),
        }
    }

    /// Significant digits known; `None` when exact.
    pub fn rel_precision(&self) -> Option<u32> {
        match &self.repr {
            Repr::Exact(_) => None,
            Repr::Approx { rel, .. } => Some(*rel),
            Repr::ZeroAt(_) => Some(0),
        }
    }

    fn same_field(&self, other: &Qp) {
        debug_assert_eq!(self.p, other.p, "mixing scalars of different primes");
    }

    /// self · p^(-shift) mod p^k, assuming the value lies in p^shift Z_p and is
    /// known to at least p^(shift+k).
    fn scaled_residue(&self, shift: i64, k: u32) -> BigInt {
        let modulus = big_pow(self.p, k);
        match &self.repr {
            Repr::Exact(r) if r.is_zero() => BigInt::zero(),
            Repr::Exact(r) => {
                let (v, n, d) = rational_split(r, self.p);
                let e = v - shift;
                debug_assert!(e >= 0);
                if e >= k as i64 {
                    return BigInt::zero();
                }
                let m = big_pow(self.p, k - e as u32);
                let u = mod_floor(&(n * mod_inverse(&d, &m)), &m);
                u * big_pow(self.p, e as u32)
            }
            Repr::Approx { val, unit, .. } => {
                let e = val - shift;
                debug_assert!(e >= 0);
                if e >= k as i64 {
                    return BigInt::zero();
                }
                mod_floor(&(unit * big_pow(self.p, e as u32)), &modulus)
            }
            Repr::ZeroAt(_) => BigInt::zero(),
        }
    }

    /// Lower valuation bound used to align operands; `None` for exact zero.
    fn floor_val(&self) -> Option<i64> {
        self.valuation().lower_bound()
    }

    /// Residue class mod p of an element of Z_p.
    pub fn residue(&self) -> Result<u32> {
        match self.valuation() {
            Valuation::Infinite => Ok(0),
            Valuation::Finite(v) if v > 0 => Ok(0),
            Valuation::Finite(v) if v == 0 => Ok(self.scaled_residue(0, 1).to_u32().unwrap()),
            Valuation::Finite(v) => Err(Error::precision(format!("residue of a non-integer (valuation {v})"))),
            Valuation::AtLeast(a) if a >= 1 => Ok(0),
            Valuation::AtLeast(a) => Err(Error::precision(format!("residue of O(p^{a})"))),
        }
    }

    /// Leading digit of the unit part.
    pub fn unit_residue(&self) -> Result<u32> {
        match self.valuation() {
            Valuation::Finite(v) => Ok(self.scaled_residue(v, 1).to_u32().unwrap()),
            Valuation::Infinite => Err(Error::DivisionByZero),
            Valuation::AtLeast(a) => Err(Error::precision(format!("unit part of O(p^{a})"))),
        }
    }

    /// Unit part modulo p^k, together with the valuation.
    pub(crate) fn unit_mod(&self, k: u32) -> Result<(i64, BigInt)> {
        match self.valuation() {
            Valuation::Finite(v) => Ok((v, self.scaled_residue(v, k))),
            Valuation::Infinite => Err(Error::DivisionByZero),
            Valuation::AtLeast(a) => Err(Error::precision(format!("unit part of O(p^{a})"))),
        }
    }

    /// Forget every digit at or beyond p^abs.
    pub fn truncate(&self, abs: i64) -> Qp {
        match self.valuation() {
            Valuation::Infinite => Qp::zero_at(self.p, self.cap, abs),
            Valuation::Finite(v) | Valuation::AtLeast(v) if v >= abs => {
                let bound = match self.abs_precision() {
                    Some(a) => a.min(abs),
                    None => abs,
                };
                Qp::zero_at(self.p, self.cap, bound)
            }
            Valuation::Finite(v) => {
                let limit = self.abs_precision().map_or(abs, |a| a.min(abs));
                let k = (limit - v) as u32;
                Qp::approx(self.p, self.cap, v, self.scaled_residue(v, k), k)
            }
            Valuation::AtLeast(a) => Qp::zero_at(self.p, self.cap, a.min(abs)),
        }
    }

    /// Multiply by p^k without touching precision bookkeeping.
    pub fn shift(&self, k: i64) -> Qp {
        match &self.repr {
            Repr::Exact(_) => self * &Qp::p_power(self.p, self.cap, k),
            Repr::Approx { val, unit, rel } => Qp {
                p: self.p,
                cap: self.cap,
                repr: Repr::Approx { val: val + k, unit: unit.clone(), rel: *rel },
            },
            Repr::ZeroAt(a) => Qp::zero_at(self.p, self.cap, a + k),
        }
    }

    pub fn inv(&self) -> Result<Qp> {
        match &self.repr {
            Repr::Exact(r) if r.is_zero() => Err(Error::DivisionByZero),
            Repr::Exact(r) => Ok(Qp::exact(self.p, self.cap, r.recip())),
            Repr::Approx { val, unit, rel } => {
                let m = big_pow(self.p, *rel);
                Ok(Qp::approx(self.p, self.cap, -val, mod_inverse(unit, &m), *rel))
            }
            Repr::ZeroAt(a) => Err(Error::precision(format!("division by O(p^{a})"))),
        }
    }

    pub fn div(&self, other: &Qp) -> Result<Qp> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, n: i64) -> Result<Qp> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut acc = Qp::from_i64(self.p, self.cap, 1);
        for _ in 0..n.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn square(&self) -> Qp {
        self * self
    }

    /// Equal to every digit known on both sides.
    pub fn eq_at_precision(&self, other: &Qp) -> bool {
        (self - other).is_zero()
    }

    /// Digits of the unit part for display: (valuation, digits little-endian).
    pub fn digits(&self) -> Option<(i64, Vec<u32>)> {
        let (v, k) = match &self.repr {
            Repr::Exact(r) if r.is_zero() => return None,
            Repr::Exact(r) => (rational_split(r, self.p).0, self.cap),
            Repr::Approx { val, rel, .. } => (*val, *rel),
            Repr::ZeroAt(_) => return None,
        };
        let mut u = self.scaled_residue(v, k);
        let pb = BigInt::from(self.p);
        let mut out = Vec::with_capacity(k as usize);
        for _ in 0..k {
            let (q, r) = u.div_rem(&pb);
            out.push(r.to_u32().unwrap());
            u = q;
        }
        Some((v, out))
    }

    fn add_impl(&self, other: &Qp) -> Qp {
        self.same_field(other);
        if self.is_exact_zero() {
            return other.clone();
        }
        if other.is_exact_zero() {
            return self.clone();
        }
        if let (Repr::Exact(a), Repr::Exact(b)) = (&self.repr, &other.repr) {
            return Qp::exact(self.p, self.cap, a + b);
        }
        let abs = match (self.abs_precision(), other.abs_precision()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => unreachable!(),
        };
        let vmin = self.floor_val().unwrap().min(other.floor_val().unwrap());
        if vmin >= abs {
            return Qp::zero_at(self.p, self.cap, abs);
        }
        let k = (abs - vmin) as u32;
        let s = self.scaled_residue(vmin, k) + other.scaled_residue(vmin, k);
        Qp::approx(self.p, self.cap, vmin, s, k)
    }

    fn mul_impl(&self, other: &Qp) -> Qp {
        self.same_field(other);
        let (p, cap) = (self.p, self.cap);
        if self.is_exact_zero() || other.is_exact_zero() {
            return Qp::zero(p, cap);
        }
        match (&self.repr, &other.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => Qp::exact(p, cap, a * b),
            (Repr::ZeroAt(a), _) => Qp::zero_at(p, cap, a + other.floor_val().unwrap()),
            (_, Repr::ZeroAt(b)) => Qp::zero_at(p, cap, b + self.floor_val().unwrap()),
            (Repr::Approx { val: va, unit: ua, rel: ra }, Repr::Approx { val: vb, unit: ub, rel: rb }) => {
                let rel = (*ra).min(*rb);
                Qp::approx(p, cap, va + vb, ua * ub, rel)
            }
            (Repr::Approx { val, unit, rel }, Repr::Exact(r)) | (Repr::Exact(r), Repr::Approx { val, unit, rel }) => {
                let (v, n, d) = rational_split(r, p);
                let m = big_pow(p, *rel);
                let u = n * mod_inverse(&d, &m);
                Qp::approx(p, cap, val + v, unit * u, *rel)
            }
        }
    }

    fn neg_impl(&self) -> Qp {
        match &self.repr {
            Repr::Exact(r) => Qp::exact(self.p, self.cap, -r),
            Repr::Approx { val, unit, rel } => Qp::approx(self.p, self.cap, *val, -unit, *rel),
            Repr::ZeroAt(_) => self.clone(),
        }
    }

    /// Sign-aware test for a positive rational, used when choosing exact roots.
    pub(crate) fn positive_rational(&self) -> Option<&BigRational> {
        self.as_rational().filter(|r| r.is_positive())
    }
}

impl PartialEq for Qp {
    fn eq(&self, other: &Qp) -> bool {
        self.eq_at_precision(other)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl $tr<&Qp> for &Qp {
            type Output = Qp;
            fn $m(self, rhs: &Qp) -> Qp {
                self.$imp(rhs)
            }
        }
        impl $tr<Qp> for Qp {
            type Output = Qp;
            fn $m(self, rhs: Qp) -> Qp {
                (&self).$imp(&rhs)
            }
        }
        impl $tr<&Qp> for Qp {
            type Output = Qp;
            fn $m(self, rhs: &Qp) -> Qp {
                (&self).$imp(rhs)
            }
        }
        impl $tr<Qp> for &Qp {
            type Output = Qp;
            fn $m(self, rhs: Qp) -> Qp {
                self.$imp(&rhs)
            }
        }
    };
}

impl Qp {
    fn sub_impl(&self, other: &Qp) -> Qp {
        self.add_impl(&other.neg_impl())
    }
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);

impl Neg for &Qp {
    type Output = Qp;
    fn neg(self) -> Qp {
        self.neg_impl()
    }
}

impl Neg for Qp {
    type Output = Qp;
    fn neg(self) -> Qp {
        self.neg_impl()
    }
}

impl fmt::Display for Qp {
    /// Exact values print as `n` or `n/d`, inexact ones as `p^k*(d0,d1,...)`,
    /// and zero-at-precision as `O(p^k)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Exact(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Repr::Approx { .. } => {
                let (v, ds) = self.digits().unwrap();
                let body: Vec<String> = ds.iter().map(|d| d.to_string()).collect();
                write!(f, "p^{}*({})", v, body.join(","))
            }
            Repr::ZeroAt(a) => write!(f, "O(p^{a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Qp {
        Qp::from_i64(5, 16, n)
    }

    #[test]
    fn exact_valuations() {
        assert_eq!(q(75).valuation(), Valuation::Finite(2));
        assert_eq!(q(0).valuation(), Valuation::Infinite);
        let r = Qp::exact(5, 16, BigRational::new(3.into(), 250.into()));
        assert_eq!(r.valuation(), Valuation::Finite(-3));
    }

    #[test]
    fn approx_cancellation_becomes_zero_at_precision() {
        let x = Qp::from_digits(5, 16, 0, &[1, 2, 3]);
        let y = Qp::from_digits(5, 16, 0, &[1, 2, 3, 4]);
        let d = &x - &y;
        assert!(d.is_zero());
        assert_eq!(d.valuation(), Valuation::AtLeast(3));
        assert!(d.inv().unwrap_err().is_precision_loss());
    }

    #[test]
    fn mixed_arithmetic_tracks_precision() {
        let x = Qp::from_digits(5, 16, 0, &[1, 2, 3]);
        let s = &x + &q(5);
        assert_eq!(s.digits().unwrap(), (0, vec![1, 3, 3]));
        let m = &x * &q(25);
        assert_eq!(m.abs_precision(), Some(5));
    }

    #[test]
    fn inverse_of_approx() {
        let x = Qp::from_digits(5, 16, 1, &[2, 1, 4, 4]);
        let one = &x * &x.inv().unwrap();
        assert!(one.eq_at_precision(&q(1)));
        assert_eq!(one.rel_precision(), Some(4));
    }

    #[test]
    fn digits_of_exact_negative_one() {
        let (v, ds) = q(-1).digits().unwrap();
        assert_eq!(v, 0);
        assert!(ds.iter().all(|&d| d == 4));
    }

    #[test]
    fn truncate_and_display() {
        let x = Qp::exact(5, 16, BigRational::new(1.into(), 3.into())).truncate(4);
        assert_eq!(x.to_string(), "p^0*(2,3,1,3)");
        assert_eq!(q(-7).to_string(), "-7");
        assert_eq!(Qp::zero_at(5, 16, 3).to_string(), "O(p^3)");
    }

    #[test]
    fn residues() {
        assert_eq!(q(7).residue().unwrap(), 2);
        assert_eq!(q(10).residue().unwrap(), 0);
        assert!(Qp::exact(5, 16, BigRational::new(1.into(), 5.into())).residue().is_err());
        assert_eq!(Qp::exact(5, 16, BigRational::new(1.into(), 2.into())).residue().unwrap(), 3);
    }
}
