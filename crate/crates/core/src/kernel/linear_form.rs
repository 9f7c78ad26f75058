use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use super::{KernelError, Rational};

/// Symbol of the symplectic-area calculus: `a` for the line class, `b_i` for
/// the size of the i-th blow-up. Orders as a, b1, b2, …
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    A,
    B(u32),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::A => write!(f, "a"),
            Symbol::B(i) => write!(f, "b{i}"),
        }
    }
}

impl FromStr for Symbol {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a" => Ok(Symbol::A),
            _ => s
                .strip_prefix('b')
                .and_then(|i| i.parse::<u32>().ok())
                .filter(|&i| i >= 1)
                .map(Symbol::B)
                .ok_or_else(|| KernelError::Parse(s.to_string())),
        }
    }
}

/// Exact affine form `c + Σ coeff·symbol`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearForm {
    constant: Rational,
    coeffs: BTreeMap<Symbol, Rational>,
}

impl LinearForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        LinearForm {
            constant: c,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn symbol(s: Symbol) -> Self {
        Self::term(s, Rational::one())
    }

    pub fn term(s: Symbol, c: Rational) -> Self {
        let mut f = Self::zero();
        f.add_term(s, c);
        f
    }

    pub fn add_term(&mut self, s: Symbol, c: Rational) {
        let slot = self.coeffs.entry(s).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&s);
        }
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn coefficient(&self, s: Symbol) -> Rational {
        self.coeffs.get(&s).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Symbol, &Rational)> {
        self.coeffs.iter().map(|(s, c)| (*s, c))
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> LinearForm {
        if c.is_zero() {
            return LinearForm::zero();
        }
        LinearForm {
            constant: &self.constant * c,
            coeffs: self.coeffs.iter().map(|(s, x)| (*s, x * c)).collect(),
        }
    }

    pub fn eval(&self, assignment: &BTreeMap<Symbol, Rational>) -> Result<Rational, KernelError> {
        let mut total = self.constant.clone();
        for (s, c) in &self.coeffs {
            let v = assignment
                .get(s)
                .ok_or_else(|| KernelError::UnboundSymbol(s.to_string()))?;
            total += c * v;
        }
        Ok(total)
    }

    /// Parses sums such as `45/8 a - 5/2 b1 + b15 - 3`.
    pub fn parse(s: &str) -> Result<Self, KernelError> {
        let err = || KernelError::Parse(s.to_string());
        let compact: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '*' && *c != '·')
            .collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut out = LinearForm::zero();
        let mut chunks = Vec::new();
        let mut start = 0;
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 {
                chunks.push(&compact[start..i]);
                start = i;
            }
        }
        chunks.push(&compact[start..]);
        for chunk in chunks {
            let (sign, body) = match chunk.as_bytes().first() {
                Some(b'-') => (-Rational::one(), &chunk[1..]),
                Some(b'+') => (Rational::one(), &chunk[1..]),
                _ => (Rational::one(), chunk),
            };
            let split = body
                .find(|c: char| c.is_ascii_alphabetic())
                .unwrap_or(body.len());
            let (num, sym) = body.split_at(split);
            let coeff = if num.is_empty() {
                Rational::one()
            } else {
                super::parse_rational(num).map_err(|_| err())?
            };
            if sym.is_empty() {
                if num.is_empty() {
                    return Err(err());
                }
                out.constant += sign * coeff;
            } else {
                out.add_term(sym.parse().map_err(|_| err())?, sign * coeff);
            }
        }
        Ok(out)
    }
}

impl From<Symbol> for LinearForm {
    fn from(s: Symbol) -> Self {
        LinearForm::symbol(s)
    }
}

impl Add for LinearForm {
    type Output = LinearForm;

    fn add(mut self, rhs: LinearForm) -> LinearForm {
        self.constant += rhs.constant;
        for (s, c) in rhs.coeffs {
            self.add_term(s, c);
        }
        self
    }
}

impl Neg for LinearForm {
    type Output = LinearForm;

    fn neg(self) -> LinearForm {
        self.scale(&-Rational::one())
    }
}

impl Sub for LinearForm {
    type Output = LinearForm;

    fn sub(self, rhs: LinearForm) -> LinearForm {
        self + (-rhs)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut write_term = |f: &mut fmt::Formatter<'_>, c: &Rational, s: Option<Symbol>| {
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match s {
                Some(s) if mag.is_one() => write!(f, "{s}"),
                Some(s) => write!(f, "{mag}·{s}"),
                None => write!(f, "{mag}"),
            }
        };
        for (s, c) in &self.coeffs {
            write_term(f, c, Some(*s))?;
        }
        if !self.constant.is_zero() || self.coeffs.is_empty() {
            write_term(f, &self.constant, None)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn evaluates_single_symbol() {
        let f = LinearForm::symbol(Symbol::A);
        let env = BTreeMap::from([(Symbol::A, int(1))]);
        assert_eq!(f.eval(&env).unwrap(), int(1));
    }

    #[test]
    fn canonical_pairing_at_small_sizes() {
        // -3a + b1 + ... + b16 at a = 1, b_i = 1/100
        let mut f = LinearForm::term(Symbol::A, int(-3));
        let mut env = BTreeMap::from([(Symbol::A, int(1))]);
        for i in 1..=16 {
            f.add_term(Symbol::B(i), int(1));
            env.insert(Symbol::B(i), rat(1, 100));
        }
        assert_eq!(f.eval(&env).unwrap(), rat(-71, 25));
    }

    #[test]
    fn unbound_symbol_is_reported() {
        let f = LinearForm::parse("a - b3").unwrap();
        let env = BTreeMap::from([(Symbol::A, int(1))]);
        assert_eq!(f.eval(&env), Err(KernelError::UnboundSymbol("b3".into())));
    }

    #[test]
    fn parse_and_display() {
        let f = LinearForm::parse("45/8 a - 5/2b1 + b15 - 0.875 b2").unwrap();
        assert_eq!(f.coefficient(Symbol::A), rat(45, 8));
        assert_eq!(f.coefficient(Symbol::B(2)), rat(-7, 8));
        assert_eq!(f.to_string(), "45/8·a - 5/2·b1 - 7/8·b2 + b15");
        assert_eq!(LinearForm::zero().to_string(), "0");
        assert!(LinearForm::parse("a + c").is_err());
        assert_eq!(LinearForm::parse("2a - 2a").unwrap(), LinearForm::zero());
    }

    fn form() -> impl Strategy<Value = LinearForm> {
        (
            -20i64..20,
            proptest::collection::vec((0u32..6, -20i64..20, 1i64..6), 0..6),
        )
            .prop_map(|(c, terms)| {
                let mut f = LinearForm::constant(int(c));
                for (s, n, d) in terms {
                    let sym = if s == 0 { Symbol::A } else { Symbol::B(s) };
                    f.add_term(sym, rat(n, d));
                }
                f
            })
    }

    proptest! {
        #[test]
        fn addition_laws(f in form(), g in form(), h in form()) {
            prop_assert_eq!(f.clone() + g.clone(), g.clone() + f.clone());
            prop_assert_eq!((f.clone() + g.clone()) + h.clone(), f.clone() + (g.clone() + h));
            prop_assert_eq!(f.clone() - f, LinearForm::zero());
        }

        #[test]
        fn eval_is_linear(f in form(), g in form(), k in -5i64..5, vals in proptest::collection::vec(-9i64..9, 6)) {
            let mut env = BTreeMap::from([(Symbol::A, int(vals[0]))]);
            for (i, &v) in vals.iter().enumerate().skip(1) {
                env.insert(Symbol::B(i as u32), rat(v, 7));
            }
            let c = int(k);
            let lhs = (f.scale(&c) + g.clone()).eval(&env).unwrap();
            let rhs = f.eval(&env).unwrap() * c + g.eval(&env).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn display_parse_roundtrip(f in form()) {
            prop_assert_eq!(LinearForm::parse(&f.to_string()).unwrap(), f);
        }
    }
}
