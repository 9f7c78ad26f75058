//! Classes in H₂(CP² # k(-CP²)) over the basis h, e₁, …, e_k.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::kernel::{LinearForm, Rational, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse homology class `{0}`")]
pub struct ClassParseError(pub String);

/// `h·h = 1`, `e_i·e_j = -δ_ij`, `h·e_i = 0`. Trailing zero e-coefficients
/// are trimmed so equal classes compare equal regardless of ambient k.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct HomologyClass {
    h: i64,
    e: Vec<i64>,
}

impl HomologyClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn line() -> Self {
        HomologyClass { h: 1, e: vec![] }
    }

    /// The exceptional class e_index (1-based).
    pub fn exceptional(index: usize) -> Self {
        assert!(index >= 1, "exceptional indices start at 1");
        let mut e = vec![0; index];
        e[index - 1] = 1;
        HomologyClass { h: 0, e }
    }

    pub fn new(h: i64, e: Vec<i64>) -> Self {
        let mut c = HomologyClass { h, e };
        c.trim();
        c
    }

    /// PD(K) = -3h + e₁ + … + e_k.
    pub fn canonical(k: usize) -> Self {
        HomologyClass::new(-3, vec![1; k])
    }

    fn trim(&mut self) {
        while self.e.last() == Some(&0) {
            self.e.pop();
        }
    }

    pub fn h_coeff(&self) -> i64 {
        self.h
    }

    /// Coefficient of e_index (1-based), zero beyond the stored range.
    pub fn e_coeff(&self, index: usize) -> i64 {
        self.e.get(index - 1).copied().unwrap_or(0)
    }

    pub fn e_coeffs(&self) -> &[i64] {
        &self.e
    }

    pub fn pair(&self, other: &HomologyClass) -> i64 {
        let mut total = self.h * other.h;
        for (a, b) in self.e.iter().zip(&other.e) {
            total -= a * b;
        }
        total
    }

    pub fn square(&self) -> i64 {
        self.pair(self)
    }

    pub fn scaled(&self, k: i64) -> Self {
        HomologyClass::new(self.h * k, self.e.iter().map(|x| x * k).collect())
    }

    pub fn add(&self, other: &HomologyClass) -> Self {
        let n = self.e.len().max(other.e.len());
        let e = (1..=n).map(|i| self.e_coeff(i) + other.e_coeff(i)).collect();
        HomologyClass::new(self.h + other.h, e)
    }

    pub fn sub(&self, other: &HomologyClass) -> Self {
        self.add(&other.scaled(-1))
    }

    /// Pairing with PD(ω) = a·h - Σ b_i e_i, i.e. `a·d - Σ b_i c_i` for
    /// this class written as `d·h - Σ c_i e_i`.
    pub fn symplectic_area(&self) -> LinearForm {
        let mut f = LinearForm::term(Symbol::A, Rational::from_integer(self.h.into()));
        for (i, &c) in self.e.iter().enumerate() {
            if c != 0 {
                f.add_term(Symbol::B(i as u32 + 1), Rational::from_integer(c.into()));
            }
        }
        f
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut term = |f: &mut fmt::Formatter<'_>, c: i64, name: String| -> fmt::Result {
            if c == 0 {
                return Ok(());
            }
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0 { "-" } else { "+" })?;
            }
            first = false;
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "{name}")
        };
        term(f, self.h, "h".into())?;
        for (i, &c) in self.e.iter().enumerate() {
            term(f, c, format!("e{}", i + 1))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl FromStr for HomologyClass {
    type Err = ClassParseError;

    /// Accepts sums like `2h - e1 - e3 + e12`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ClassParseError(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        if compact == "0" {
            return Ok(HomologyClass::zero());
        }
        let mut out = HomologyClass::zero();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'-' => (-1, &rest[1..]),
                b'+' => (1, &rest[1..]),
                _ if out == HomologyClass::zero() && rest.len() == compact.len() => (1, rest),
                _ => return Err(err()),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let chunk = &body[..end];
            rest = &body[end..];
            let split = chunk.find(|c: char| c.is_ascii_alphabetic()).ok_or_else(err)?;
            let (num, sym) = chunk.split_at(split);
            let k: i64 = if num.is_empty() { 1 } else { num.parse().map_err(|_| err())? };
            let basis = if sym == "h" {
                HomologyClass::line()
            } else {
                let idx: usize = sym
                    .strip_prefix('e')
                    .and_then(|x| x.parse().ok())
                    .filter(|&i| i >= 1)
                    .ok_or_else(err)?;
                HomologyClass::exceptional(idx)
            };
            out = out.add(&basis.scaled(sign * k));
        }
        Ok(out)
    }
}

impl Serialize for HomologyClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basis_pairings() {
        let h = HomologyClass::line();
        let e3 = HomologyClass::exceptional(3);
        assert_eq!(h.square(), 1);
        assert_eq!(e3.square(), -1);
        assert_eq!(h.pair(&e3), 0);
        assert_eq!(e3.pair(&HomologyClass::exceptional(2)), 0);
    }

    #[test]
    fn parse_display() {
        let c: HomologyClass = "2h - e1 - e2 - e4 - e7 - e9 - e10".parse().unwrap();
        assert_eq!(c.square(), -2);
        assert_eq!(c.to_string(), "2h - e1 - e2 - e4 - e7 - e9 - e10");
        let d: HomologyClass = "e2 - e12".parse().unwrap();
        assert_eq!(d.h_coeff(), 0);
        assert_eq!(d.e_coeff(12), -1);
        assert!("2x".parse::<HomologyClass>().is_err());
        assert!("h - e0".parse::<HomologyClass>().is_err());
    }

    #[test]
    fn canonical_class_and_areas() {
        let u: HomologyClass = "h - e4 - e5 - e6 - e7 - e13".parse().unwrap();
        assert_eq!(HomologyClass::canonical(16).pair(&u), 2);
        assert_eq!(
            u.symplectic_area(),
            LinearForm::parse("a - b4 - b5 - b6 - b7 - b13").unwrap()
        );
    }

    proptest! {
        #[test]
        fn roundtrip(h in -4i64..5, e in proptest::collection::vec(-3i64..4, 0..8)) {
            let c = HomologyClass::new(h, e);
            prop_assert_eq!(c.to_string().parse::<HomologyClass>().unwrap(), c);
        }
    }
}
