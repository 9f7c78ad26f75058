use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use super::{FirstHomology, PlumbingError, SeifertInvariant};
use crate::kernel::IntegerMatrix;

/// Freely reduced word: a list of `(generator index, nonzero exponent)`
/// with no two neighbours on the same generator.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<(usize, i64)>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(g: usize, e: i64) -> Self {
        Word::from_letters([(g, e)])
    }

    pub fn from_letters(letters: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for (g, e) in letters {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((last, f)) if *last == g => {
                    *f += e;
                    if *f == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::from_letters(self.0.iter().chain(&other.0).copied())
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        if let [(g, e)] = base.0.as_slice() {
            return Word::letter(*g, e * n.abs());
        }
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Conjugate to a word whose first and last letters differ.
    pub fn cyclically_reduced(&self) -> Word {
        let mut v = self.0.clone();
        while v.len() > 1 && v[0].0 == v[v.len() - 1].0 {
            let (_, e) = v.pop().unwrap();
            v[0].1 += e;
            if v[0].1 == 0 {
                v.remove(0);
            }
        }
        Word(v)
    }

    /// Replace every `g^e` by `subs[g]^e`.
    pub fn substitute(&self, subs: &BTreeMap<usize, Word>) -> Word {
        let mut out = Word::identity();
        for &(g, e) in &self.0 {
            match subs.get(&g) {
                Some(w) => out = out.concat(&w.pow(e)),
                None => out = out.concat(&Word::letter(g, e)),
            }
        }
        out
    }

    /// Number of syllables on `g`.
    pub fn occurrences(&self, g: usize) -> usize {
        self.0.iter().filter(|(x, _)| *x == g).count()
    }

    pub fn exponent_sum(&self, g: usize) -> i64 {
        self.0.iter().filter(|(x, _)| *x == g).map(|(_, e)| e).sum()
    }

    /// `Some((g, e))` when the word is the single syllable `g^e`.
    pub fn as_power(&self) -> Option<(usize, i64)> {
        match self.0.as_slice() {
            [(g, e)] => Some((*g, *e)),
            _ => None,
        }
    }

    pub fn generators(&self) -> Vec<usize> {
        let mut gs: Vec<usize> = self.0.iter().map(|(g, _)| *g).collect();
        gs.sort_unstable();
        gs.dedup();
        gs
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        let mut out = String::new();
        for (i, &(g, e)) in self.0.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&names[g]);
            if e != 1 {
                write!(out, "^{e}").unwrap();
            }
        }
        out
    }
}

/// `⟨q₀, …, q_n, h | relators⟩` for a Seifert fibered boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    /// Sphere of each single-sphere leg, mapped to that leg's generator.
    pub leaves: BTreeMap<String, usize>,
    /// Meridian of every plumbing sphere, up to conjugacy.
    pub meridians: BTreeMap<String, Word>,
    /// Central relation in the common printed orientation, `q₀ h^{b₀}`.
    pub printed_central_relator: Word,
}

impl GroupPresentation {
    pub fn h(&self) -> usize {
        self.generators.len() - 1
    }

    pub fn render(&self, w: &Word) -> String {
        w.render(&self.generators)
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }
}

impl std::fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.render(r)).collect();
        write!(f, "< {} | {} >", self.generators.join(", "), rels.join(", "))
    }
}

fn small(n: &BigInt) -> Result<i64, PlumbingError> {
    n.to_i64().ok_or(PlumbingError::Overflow)
}

/// Relators `q₀q₁…q_n`, `[h, qᵢ]`, `q₀h^{−b₀}` and `qᵢ^{αᵢ}h^{βᵢ}`.
pub fn fundamental_group(s: &SeifertInvariant) -> Result<GroupPresentation, PlumbingError> {
    let n = s.legs.len();
    let h = n + 1;
    let mut generators: Vec<String> = (0..=n).map(|i| format!("q{i}")).collect();
    generators.push("h".into());

    let mut relators = vec![Word::from_letters((0..=n).map(|i| (i, 1)))];
    for i in 0..=n {
        relators.push(Word::from_letters([(h, 1), (i, 1), (h, -1), (i, -1)]));
    }
    let b0 = small(&s.b0)?;
    relators.push(Word::from_letters([(0, 1), (h, -b0)]));
    for (i, leg) in s.legs.iter().enumerate() {
        relators.push(Word::from_letters([
            (i + 1, small(&leg.alpha)?),
            (h, small(&leg.beta)?),
        ]));
    }

    let mut leaves = BTreeMap::new();
    let mut meridians = BTreeMap::new();
    if let Some(center) = &s.center {
        meridians.insert(center.clone(), Word::letter(h, -1));
    }
    for (i, leg) in s.legs.iter().enumerate() {
        let q = i + 1;
        if let [only] = leg.vertices.as_slice() {
            leaves.insert(only.clone(), q);
        }
        let (u, v) = leg.linking_exponents();
        let ell = Word::from_letters([(q, small(&u)?), (h, small(&v)?)]);
        for (name, n) in leg.vertices.iter().zip(leg.meridian_exponents()) {
            meridians.insert(name.clone(), ell.pow(small(&n)?));
        }
    }
    Ok(GroupPresentation {
        generators,
        relators,
        leaves,
        meridians,
        printed_central_relator: Word::from_letters([(0, 1), (h, b0)]),
    })
}

/// Abelianization as ℤ^generators modulo the relators' exponent sums.
pub fn abelianization(p: &GroupPresentation) -> FirstHomology {
    let m = IntegerMatrix::from_fn(p.generators.len(), p.relators.len(), |g, r| {
        BigInt::from(p.relators[r].exponent_sum(g))
    });
    let mut out = FirstHomology::cokernel(&m);
    out.torsion.retain(|d| !d.is_one());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_reduction() {
        let w = Word::from_letters([(0, 2), (1, 1), (1, -1), (0, -2), (2, 3)]);
        assert_eq!(w, Word::letter(2, 3));
        let c = Word::from_letters([(0, 1), (1, 2), (0, -3)]).cyclically_reduced();
        assert_eq!(c, Word::from_letters([(0, -2), (1, 2)]));
        let x = Word::from_letters([(0, 1), (1, 1)]);
        assert!(x.concat(&x.inverse()).is_identity());
        assert_eq!(x.pow(-2), Word::from_letters([(1, -1), (0, -1), (1, -1), (0, -1)]));
    }

    #[test]
    fn substitution() {
        let w = Word::from_letters([(0, 2), (1, 1)]);
        let subs = BTreeMap::from([(0, Word::letter(1, -1))]);
        assert_eq!(w.substitute(&subs), Word::letter(1, -1));
    }

    #[test]
    fn one_leg_presentation() {
        let s = SeifertInvariant::new(0, &[(2, 1)]).unwrap();
        let p = fundamental_group(&s).unwrap();
        let rendered: Vec<String> = p.relators.iter().map(|r| p.render(r)).collect();
        assert_eq!(
            rendered,
            vec!["q0 q1", "h q0 h^-1 q0^-1", "h q1 h^-1 q1^-1", "q0", "q1^2 h"]
        );
        assert_eq!(abelianization(&p).to_string(), "0");
        assert_eq!(s.h1_order(), crate::kernel::int(1));
    }

    #[test]
    fn lens_space_abelianization_matches_e() {
        let s = SeifertInvariant::new(2, &[(3, 1), (3, 1), (3, 1)]).unwrap();
        let p = fundamental_group(&s).unwrap();
        assert_eq!(
            abelianization(&p).order(),
            s.h1_order().to_integer().into()
        );
    }
}
