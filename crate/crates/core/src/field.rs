//! Exact arithmetic in Q(i, √2, √3) and contact certification for plane
//! curves of degree at most two.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::kernel::{self, int, parse_rational, Rational, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero in Q(i, √2, √3)")]
    DivisionByZero,
    #[error("cannot parse field element `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("bad monomial `{0}`")]
    Monomial(String),
    #[error("monomial `{monomial}` has degree {found}, polynomial declared degree {declared}")]
    Degree {
        monomial: String,
        found: u32,
        declared: u32,
    },
    #[error("projective point with all coordinates zero")]
    ZeroPoint,
}

const BASIS: [&str; 8] = ["1", "i", "√2", "i√2", "√3", "i√3", "√6", "i√6"];

/// Element of Q(i, √2, √3) in the basis {1, i} ⊗ {1, √2} ⊗ {1, √3}.
/// Bit 0 of a basis index is `i`, bit 1 is `√2`, bit 2 is `√3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement([Rational; 8]);

fn basis_product_scale(x: usize, y: usize) -> i64 {
    let common = x & y;
    let mut s = 1;
    if common & 1 != 0 {
        s *= -1;
    }
    if common & 2 != 0 {
        s *= 2;
    }
    if common & 4 != 0 {
        s *= 3;
    }
    s
}

impl FieldElement {
    pub fn from_coords(c: [Rational; 8]) -> Self {
        FieldElement(c)
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut c: [Rational; 8] = Default::default();
        c[0] = r;
        FieldElement(c)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    fn basis(idx: usize) -> Self {
        let mut c: [Rational; 8] = Default::default();
        c[idx] = Rational::one();
        FieldElement(c)
    }

    pub fn i() -> Self {
        Self::basis(1)
    }

    pub fn sqrt2() -> Self {
        Self::basis(2)
    }

    pub fn sqrt3() -> Self {
        Self::basis(4)
    }

    pub fn coords(&self) -> &[Rational; 8] {
        &self.0
    }

    /// Matrix of multiplication by `self` on the coordinate vector.
    fn multiplication_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_fn(8, 8, |row, col| {
            // column `col` is self * basis(col); its `row` coordinate
            let src = row ^ col;
            &self.0[src] * int(basis_product_scale(src, col))
        })
    }

    /// Inverse by solving the 8×8 multiplication-by-`self` system.
    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let inv = kernel::invert(&self.multiplication_matrix())
            .map_err(|_| FieldError::DivisionByZero)?;
        Ok(FieldElement(std::array::from_fn(|r| inv[(r, 0)].clone())))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, n: u32) -> FieldElement {
        (0..n).fold(FieldElement::one(), |acc, _| &acc * self)
    }

    /// Parses expressions over integers and fractions with `i`, `sqrt2`,
    /// `sqrt3` (or `√2`, `√3`), `+ - * /`, parentheses and implicit
    /// multiplication, e.g. `-(1+sqrt3)*sqrt2*i` or `sqrt2/2 i`.
    pub fn parse(s: &str) -> Result<FieldElement, FieldError> {
        let mut p = ExprParser {
            input: s,
            chars: s.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        };
        let v = p.expr()?;
        if p.pos != p.chars.len() {
            return Err(p.fail("trailing input"));
        }
        Ok(v)
    }
}

impl Zero for FieldElement {
    fn zero() -> Self {
        FieldElement(Default::default())
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl One for FieldElement {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        &self + &rhs
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        FieldElement(std::array::from_fn(|k| &self.0[k] + &rhs.0[k]))
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        FieldElement(std::array::from_fn(|k| &self.0[k] - &rhs.0[k]))
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        &self - &rhs
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement(self.0.map(|x| -x))
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        let mut out: [Rational; 8] = Default::default();
        for x in 0..8 {
            if self.0[x].is_zero() {
                continue;
            }
            for y in 0..8 {
                if rhs.0[y].is_zero() {
                    continue;
                }
                let c = &self.0[x] * &rhs.0[y] * int(basis_product_scale(x, y));
                out[x ^ y] += c;
            }
        }
        FieldElement(out)
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        &self * &rhs
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match k {
                0 => format!("{c}"),
                _ if c.is_one() => BASIS[k].to_string(),
                _ if *c == -Rational::one() => format!("-{}", BASIS[k]),
                _ => format!("{c}·{}", BASIS[k]),
            });
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => out.push_str(&format!(" - {rest}")),
                None => out.push_str(&format!(" + {p}")),
            }
        }
        write!(f, "{out}")
    }
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

struct ExprParser<'a> {
    input: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl ExprParser<'_> {
    fn fail(&self, reason: &str) -> FieldError {
        FieldError::Parse {
            input: self.input.to_string(),
            reason: format!("{reason} at offset {}", self.pos),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<FieldElement, FieldError> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -self.term()?
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { acc + t } else { acc - t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FieldElement, FieldError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') | Some('·') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let d = self.factor()?;
                    acc = acc.div(&d)?;
                }
                Some(c) if c.is_ascii_alphanumeric() || c == '(' || c == '√' => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<FieldElement, FieldError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.fail("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some('-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                let r = parse_rational(&digits).map_err(|_| self.fail("bad integer"))?;
                Ok(FieldElement::from_rational(r))
            }
            Some('√') => {
                self.pos += 1;
                match self.peek() {
                    Some('2') => {
                        self.pos += 1;
                        Ok(FieldElement::sqrt2())
                    }
                    Some('3') => {
                        self.pos += 1;
                        Ok(FieldElement::sqrt3())
                    }
                    _ => Err(self.fail("only √2 and √3 are supported")),
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
                    self.pos += 1;
                }
                let word: String = self.chars[start..self.pos].iter().collect();
                match word.as_str() {
                    "i" => Ok(FieldElement::i()),
                    "sqrt2" => Ok(FieldElement::sqrt2()),
                    "sqrt3" => Ok(FieldElement::sqrt3()),
                    _ => {
                        // `i` directly followed by a radical name, e.g. `isqrt2`
                        self.pos = start;
                        Err(self.fail(&format!("unknown symbol `{word}`")))
                    }
                }
            }
            _ => Err(self.fail("expected a number, symbol or `(`")),
        }
    }
}

/// Point of the projective plane over Q(i, √2, √3).
#[derive(Debug, Clone, Serialize)]
pub struct ProjectivePoint([FieldElement; 3]);

impl ProjectivePoint {
    pub fn new(coords: [FieldElement; 3]) -> Result<Self, FieldError> {
        if coords.iter().all(Zero::is_zero) {
            return Err(FieldError::ZeroPoint);
        }
        Ok(ProjectivePoint(coords))
    }

    pub fn parse(coords: &[&str; 3]) -> Result<Self, FieldError> {
        Self::new([
            FieldElement::parse(coords[0])?,
            FieldElement::parse(coords[1])?,
            FieldElement::parse(coords[2])?,
        ])
    }

    pub fn coords(&self) -> &[FieldElement; 3] {
        &self.0
    }

    pub fn scaled(&self, c: &FieldElement) -> Result<Self, FieldError> {
        Self::new(self.0.clone().map(|x| &x * c))
    }

    /// Equality up to a nonzero scalar: all 2×2 minors vanish.
    pub fn same_point(&self, other: &ProjectivePoint) -> bool {
        cross_is_zero(&self.0, &other.0)
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {} : {}]", self.0[0], self.0[1], self.0[2])
    }
}

fn cross_is_zero(u: &[FieldElement; 3], v: &[FieldElement; 3]) -> bool {
    (0..3).all(|a| {
        let b = (a + 1) % 3;
        (&u[a] * &v[b] - &u[b] * &v[a]).is_zero()
    })
}

/// Homogeneous polynomial in z₁, z₂, z₃ with coefficients in the field.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPoly {
    degree: u32,
    terms: Vec<([u32; 3], FieldElement)>,
}

impl HomogeneousPoly {
    pub fn new(degree: u32, terms: Vec<([u32; 3], FieldElement)>) -> Result<Self, FieldError> {
        for (exps, _) in &terms {
            let found: u32 = exps.iter().sum();
            if found != degree {
                return Err(FieldError::Degree {
                    monomial: monomial_name(exps),
                    found,
                    declared: degree,
                });
            }
        }
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(HomogeneousPoly { degree, terms })
    }

    /// Builds from `(monomial, coefficient)` text pairs such as
    /// `("z1*z2", "1")`, `("z2^2", "2*sqrt2*i")`.
    pub fn parse<'a>(
        degree: u32,
        terms: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, FieldError> {
        let mut out = Vec::new();
        for (mono, coeff) in terms {
            out.push((parse_monomial(mono)?, FieldElement::parse(coeff)?));
        }
        Self::new(degree, out)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn evaluate(&self, pt: &ProjectivePoint) -> FieldElement {
        let z = pt.coords();
        self.terms.iter().fold(FieldElement::zero(), |acc, (exps, c)| {
            let mut t = c.clone();
            for (k, &e) in exps.iter().enumerate() {
                t = &t * &z[k].pow(e);
            }
            acc + t
        })
    }

    pub fn partial(&self, var: usize) -> HomogeneousPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(exps, _)| exps[var] > 0)
            .map(|(exps, c)| {
                let mut e = *exps;
                let k = e[var];
                e[var] -= 1;
                (e, c * &FieldElement::from_int(k as i64))
            })
            .collect();
        HomogeneousPoly {
            degree: self.degree.saturating_sub(1),
            terms,
        }
    }

    pub fn gradient(&self, pt: &ProjectivePoint) -> [FieldElement; 3] {
        std::array::from_fn(|v| self.partial(v).evaluate(pt))
    }
}

impl fmt::Display for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("({c})·{}", monomial_name(e)))
            .collect();
        write!(f, "{}", if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }
}

fn monomial_name(exps: &[u32; 3]) -> String {
    let mut parts = Vec::new();
    for (k, &e) in exps.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("z{}", k + 1)),
            _ => parts.push(format!("z{}^{e}", k + 1)),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn parse_monomial(s: &str) -> Result<[u32; 3], FieldError> {
    let err = || FieldError::Monomial(s.to_string());
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut exps = [0u32; 3];
    if compact == "1" {
        return Ok(exps);
    }
    for factor in compact.split(['*', '·']) {
        let (var, pow) = match factor.split_once('^') {
            Some((v, p)) => (v, p.parse::<u32>().map_err(|_| err())?),
            None => (factor, 1),
        };
        let idx = match var {
            "z1" => 0,
            "z2" => 1,
            "z3" => 2,
            _ => return Err(err()),
        };
        exps[idx] += pow;
    }
    Ok(exps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Contact {
    Tangent,
    Transverse,
    NotOnBoth,
}

impl Contact {
    /// Intersection multiplicity lower bound certified by this contact.
    pub fn multiplicity(self) -> u32 {
        match self {
            Contact::Tangent => 2,
            Contact::Transverse => 1,
            Contact::NotOnBoth => 0,
        }
    }
}

/// On both curves with proportional gradients is a tangency; on both with
/// independent gradients is a transverse crossing.
pub fn certify_contact(p: &HomogeneousPoly, q: &HomogeneousPoly, pt: &ProjectivePoint) -> Contact {
    if !p.evaluate(pt).is_zero() || !q.evaluate(pt).is_zero() {
        return Contact::NotOnBoth;
    }
    if cross_is_zero(&p.gradient(pt), &q.gradient(pt)) {
        Contact::Tangent
    } else {
        Contact::Transverse
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BezoutAudit {
    pub contacts: Vec<(String, Contact)>,
    pub total: u32,
    pub bound: u32,
    /// Total equals the Bezout number, which pins every tangency at
    /// multiplicity exactly two.
    pub complete: bool,
    pub overflow: bool,
}

/// Sums certified contact multiplicities over projectively distinct points.
pub fn bezout_audit(
    p: &HomogeneousPoly,
    q: &HomogeneousPoly,
    points: &[(String, &ProjectivePoint)],
) -> BezoutAudit {
    let mut contacts = Vec::new();
    let mut seen: Vec<&ProjectivePoint> = Vec::new();
    let mut total = 0;
    for (name, pt) in points {
        if seen.iter().any(|s| s.same_point(pt)) {
            continue;
        }
        seen.push(pt);
        let c = certify_contact(p, q, pt);
        total += c.multiplicity();
        contacts.push((name.clone(), c));
    }
    let bound = p.degree() * q.degree();
    BezoutAudit {
        contacts,
        total,
        bound,
        complete: total == bound,
        overflow: total > bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;
    use proptest::prelude::*;

    fn fe(s: &str) -> FieldElement {
        FieldElement::parse(s).unwrap()
    }

    fn q1() -> HomogeneousPoly {
        HomogeneousPoly::parse(2, [("z1^2", "1"), ("z2^2", "1"), ("z3^2", "1")]).unwrap()
    }

    fn q2() -> HomogeneousPoly {
        HomogeneousPoly::parse(2, [("z1*z2", "1"), ("z2*z3", "2*sqrt2*i"), ("z1*z3", "1")])
            .unwrap()
    }

    fn tangency() -> ProjectivePoint {
        ProjectivePoint::parse(&["1", "sqrt2/2 i", "sqrt2/2 i"]).unwrap()
    }

    fn crossing_plus() -> ProjectivePoint {
        ProjectivePoint::parse(&["-(1+sqrt3)*sqrt2*i", "-(2+sqrt3)", "1"]).unwrap()
    }

    fn crossing_minus() -> ProjectivePoint {
        ProjectivePoint::parse(&["-(1-sqrt3)*sqrt2*i", "-(2-sqrt3)", "1"]).unwrap()
    }

    #[test]
    fn basic_arithmetic() {
        assert_eq!(&FieldElement::sqrt2() * &FieldElement::sqrt2(), FieldElement::from_int(2));
        assert_eq!(&FieldElement::i() * &FieldElement::i(), FieldElement::from_int(-1));
        assert_eq!(fe("1 + sqrt2").inv().unwrap(), fe("-1 + sqrt2"));
        assert_eq!(FieldElement::zero().inv(), Err(FieldError::DivisionByZero));
        assert_eq!(fe("sqrt2/2").coords()[2], rat(1, 2));
        assert_eq!(fe("√2√3"), &FieldElement::sqrt2() * &FieldElement::sqrt3());
        assert!(FieldElement::parse("sqrt5").is_err());
        assert!(FieldElement::parse("(1+i").is_err());
    }

    #[test]
    fn quadrics_vanish_at_listed_points() {
        for pt in [tangency(), crossing_plus(), crossing_minus()] {
            assert!(q1().evaluate(&pt).is_zero(), "q1 at {pt}");
            assert!(q2().evaluate(&pt).is_zero(), "q2 at {pt}");
        }
        let off = ProjectivePoint::parse(&["1", "0", "0"]).unwrap();
        assert_eq!(q1().evaluate(&off), FieldElement::from_int(1));
    }

    #[test]
    fn contact_types() {
        assert_eq!(certify_contact(&q1(), &q2(), &tangency()), Contact::Tangent);
        assert_eq!(certify_contact(&q1(), &q2(), &crossing_plus()), Contact::Transverse);
        assert_eq!(certify_contact(&q1(), &q2(), &crossing_minus()), Contact::Transverse);
        let off = ProjectivePoint::parse(&["1", "0", "0"]).unwrap();
        assert_eq!(certify_contact(&q1(), &q2(), &off), Contact::NotOnBoth);
    }

    #[test]
    fn bezout_for_the_two_conics() {
        let (a, b, c) = (tangency(), crossing_plus(), crossing_minus());
        let pts = vec![("P8".to_string(), &a), ("P1".to_string(), &b), ("X".to_string(), &c)];
        let audit = bezout_audit(&q1(), &q2(), &pts);
        assert_eq!(audit.total, 4);
        assert!(audit.complete && !audit.overflow);
    }

    #[test]
    fn perturbed_conic_misses_the_tangency() {
        let bad =
            HomogeneousPoly::parse(2, [("z1*z2", "1"), ("z2*z3", "2*i"), ("z1*z3", "1")]).unwrap();
        assert!(!bad.evaluate(&tangency()).is_zero());
        assert_eq!(certify_contact(&q1(), &bad, &tangency()), Contact::NotOnBoth);
    }

    #[test]
    fn degree_is_enforced() {
        assert!(matches!(
            HomogeneousPoly::parse(2, [("z1", "1")]),
            Err(FieldError::Degree { .. })
        ));
        assert!(matches!(
            HomogeneousPoly::parse(2, [("w^2", "1")]),
            Err(FieldError::Monomial(_))
        ));
    }

    fn element() -> impl Strategy<Value = FieldElement> {
        proptest::collection::vec((-6i64..7, 1i64..4), 8).prop_map(|v| {
            FieldElement::from_coords(std::array::from_fn(|k| rat(v[k].0, v[k].1)))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(x in element(), y in element(), z in element()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            if !x.is_zero() {
                prop_assert_eq!(&x * &x.inv().unwrap(), FieldElement::one());
            }
        }

        #[test]
        fn evaluation_respects_scaling(c in element()) {
            prop_assume!(!c.is_zero());
            let pt = crossing_plus().scaled(&c).unwrap();
            prop_assert!(q1().evaluate(&pt).is_zero());
            prop_assert!(q2().evaluate(&pt).is_zero());
            prop_assert!(pt.same_point(&crossing_plus()));
            let off = ProjectivePoint::parse(&["1", "2", "i"]).unwrap();
            let scaled = off.scaled(&c).unwrap();
            prop_assert_eq!(q1().evaluate(&scaled), &(&c * &c) * &q1().evaluate(&off));
        }
    }
}
