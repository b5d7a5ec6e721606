use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{is_square, ExtScalar, Qp, ResidueField};
use crate::error::{Error, Result};

/// Which non-square μ generates the extension: u, p or u·p, where u is the
/// least quadratic non-residue mod p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MuKind {
    NonResidue,
    Uniformizer,
    UniformizerNonResidue,
}

impl MuKind {
    pub const ALL: [MuKind; 3] = [MuKind::NonResidue, MuKind::Uniformizer, MuKind::UniformizerNonResidue];

    pub fn name(self) -> &'static str {
        match self {
            MuKind::NonResidue => "nonresidue",
            MuKind::Uniformizer => "uniformizer",
            MuKind::UniformizerNonResidue => "uniformizer-nonresidue",
        }
    }
}

impl fmt::Display for MuKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MuKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nonresidue" => Ok(MuKind::NonResidue),
            "uniformizer" => Ok(MuKind::Uniformizer),
            "uniformizer-nonresidue" => Ok(MuKind::UniformizerNonResidue),
            other => Err(Error::InvalidConfig(format!("unknown mu kind `{other}`"))),
        }
    }
}

/// Validated parameters of the scalar field Q_p(√μ) with a working precision of
/// `precision` significant base-p digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldConfig {
    p: u32,
    mu_kind: MuKind,
    precision: u32,
    non_residue: u32,
    mu: i64,
}

pub const MIN_PRECISION: u32 = 8;

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n as u64 {
        if n as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn least_non_residue(p: u32) -> u32 {
    let squares: Vec<bool> = {
        let mut s = vec![false; p as usize];
        for x in 1..p as u64 {
            s[((x * x) % p as u64) as usize] = true;
        }
        s
    };
    (2..p).find(|&r| !squares[r as usize]).expect("odd prime has a non-residue")
}

impl FieldConfig {
    pub fn new(p: u32, mu_kind: MuKind, precision: u32) -> Result<Self> {
        if p == 2 {
            return Err(Error::InvalidConfig("p = 2 is not supported".into()));
        }
        if !is_prime(p) {
            return Err(Error::InvalidConfig(format!("{p} is not prime")));
        }
        if p > 1 << 20 {
            return Err(Error::InvalidConfig(format!("prime {p} is too large")));
        }
        if precision < MIN_PRECISION {
            return Err(Error::InvalidConfig(format!(
                "precision {precision} is below the minimum {MIN_PRECISION}"
            )));
        }
        let u = least_non_residue(p);
        // exhaustive confirmation that u is not a square mod p
        if (1..p as u64).any(|x| (x * x) % p as u64 == u as u64) {
            return Err(Error::InvalidConfig(format!("{u} is a residue mod {p}")));
        }
        let mu = match mu_kind {
            MuKind::NonResidue => u as i64,
            MuKind::Uniformizer => p as i64,
            MuKind::UniformizerNonResidue => u as i64 * p as i64,
        };
        let cfg = FieldConfig { p, mu_kind, precision, non_residue: u, mu };
        if is_square(&cfg.qp(mu))? {
            return Err(Error::InvalidConfig(format!("mu = {mu} is a square in Q_{p}")));
        }
        Ok(cfg)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn mu_kind(&self) -> MuKind {
        self.mu_kind
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn non_residue(&self) -> u32 {
        self.non_residue
    }

    pub fn mu(&self) -> i64 {
        self.mu
    }

    /// μ is divisible by p, so the extension is totally ramified.
    pub fn is_ramified(&self) -> bool {
        self.mu_kind != MuKind::NonResidue
    }

    pub fn residue_field(&self) -> ResidueField {
        ResidueField::new(self.p, self.non_residue, self.is_ramified())
    }

    pub fn qp(&self, n: i64) -> Qp {
        Qp::from_i64(self.p, self.precision, n)
    }

    pub fn qp_ratio(&self, n: i64, d: i64) -> Qp {
        Qp::exact(self.p, self.precision, BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn qp_rational(&self, r: BigRational) -> Qp {
        Qp::exact(self.p, self.precision, r)
    }

    pub fn qp_zero(&self) -> Qp {
        self.qp(0)
    }

    /// p^k as an exact scalar.
    pub fn p_pow(&self, k: i64) -> Qp {
        Qp::p_power(self.p, self.precision, k)
    }

    pub fn ext(&self, n: i64) -> ExtScalar {
        ExtScalar::from_qp(*self, self.qp(n))
    }

    pub fn ext_ratio(&self, n: i64, d: i64) -> ExtScalar {
        ExtScalar::from_qp(*self, self.qp_ratio(n, d))
    }

    pub fn zero(&self) -> ExtScalar {
        ExtScalar::zero(*self)
    }

    pub fn one(&self) -> ExtScalar {
        ExtScalar::one(*self)
    }

    pub fn sqrt_mu(&self) -> ExtScalar {
        ExtScalar::sqrt_mu(*self)
    }
}

impl fmt::Display for FieldConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q_{}(sqrt {}) @ {} digits", self.p, self.mu, self.precision)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_two_and_composites() {
        assert!(FieldConfig::new(2, MuKind::NonResidue, 32).is_err());
        assert!(FieldConfig::new(9, MuKind::NonResidue, 32).is_err());
        assert!(FieldConfig::new(5, MuKind::NonResidue, 4).is_err());
    }

    #[test]
    fn least_non_residues() {
        assert_eq!(FieldConfig::new(5, MuKind::NonResidue, 32).unwrap().mu(), 2);
        assert_eq!(FieldConfig::new(7, MuKind::NonResidue, 32).unwrap().mu(), 3);
        assert_eq!(FieldConfig::new(13, MuKind::NonResidue, 32).unwrap().mu(), 2);
        assert_eq!(FieldConfig::new(7, MuKind::UniformizerNonResidue, 32).unwrap().mu(), 21);
        assert_eq!(FieldConfig::new(3, MuKind::Uniformizer, 8).unwrap().mu(), 3);
    }

    #[test]
    fn mu_kind_names_roundtrip() {
        for k in MuKind::ALL {
            assert_eq!(k.name().parse::<MuKind>().unwrap(), k);
        }
    }
}
