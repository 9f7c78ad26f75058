//! Rational blowdown accounting on CP² # k CP̄² and the canonical-class
//! sign test.
//!
//! Replacing a negative definite plumbing of `n` spheres by a rational
//! homology ball changes (χ, σ) by `(−n, +n)`. The symplectic side computes
//! `K_X·ω_X = K·ω − K|_P·ω|_P` symbolically, where restrictions to the
//! plumbing are taken in the basis dual to the spheres.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::homology::HomologyClass;
use crate::kernel::{int, invert, rat, KernelError, LinearForm, Rational, Symbol};
use crate::plumbing::PlumbingGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("simple connectivity is not certified; the homeomorphism type cannot be classified")]
    Unclassifiable,
    #[error("b2 = {b2} and signature {sigma} give non-integral b±")]
    BadBetti { b2: i64, sigma: i64 },
    #[error("CP²#{m}CP̄² is outside the range 2..=9 of the sign lemma")]
    OutOfLemmaRange { m: i64 },
    #[error("plumbing vertex `{0}` carries no homology class")]
    MissingClass(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// CP² # k CP̄².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Ambient {
    pub k: usize,
}

impl Ambient {
    pub fn euler_characteristic(&self) -> i64 {
        3 + self.k as i64
    }

    pub fn signature(&self) -> i64 {
        1 - self.k as i64
    }

    /// PD(K) = −3h + e₁ + … + e_k.
    pub fn canonical(&self) -> HomologyClass {
        HomologyClass::canonical(self.k)
    }

    /// K·ω = −3a + b₁ + … + b_k.
    pub fn canonical_area(&self) -> LinearForm {
        let mut f = LinearForm::term(Symbol::A, int(-3));
        for i in 1..=self.k {
            f.add_term(Symbol::B(i as u32), Rational::one());
        }
        f
    }
}

/// (χ, σ) after replacing an `n`-sphere plumbing by a rational ball.
pub fn euler_signature(ambient: Ambient, n: usize) -> (i64, i64) {
    let n = n as i64;
    let chi = ambient.euler_characteristic() - (n + 1) + 1;
    let sigma = ambient.signature() + n;
    (chi, sigma)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    Odd,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum HomeoType {
    /// Homeomorphic to CP² # m CP̄².
    Standard { m: i64 },
    /// Would be CP² # m CP̄² if simple connectivity were certified.
    Candidate { m: i64 },
    OutOfScope,
}

impl fmt::Display for HomeoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomeoType::Standard { m } => write!(f, "CP2#{m}-CP2"),
            HomeoType::Candidate { m } => write!(f, "candidate CP2#{m}-CP2"),
            HomeoType::OutOfScope => write!(f, "out of scope"),
        }
    }
}

impl HomeoType {
    pub fn parse(s: &str) -> Option<HomeoType> {
        let m = s.trim().strip_prefix("CP2#")?.strip_suffix("-CP2")?;
        Some(HomeoType::Standard { m: m.parse().ok()? })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TypeReport {
    pub chi: i64,
    pub sigma: i64,
    pub b2: i64,
    pub b_plus: i64,
    pub b_minus: i64,
    pub parity: Parity,
    pub homeo_type: HomeoType,
}

fn betti(chi: i64, sigma: i64) -> Result<(i64, i64, i64), SurgeryError> {
    let b2 = chi - 2;
    if (b2 + sigma) % 2 != 0 {
        return Err(SurgeryError::BadBetti { b2, sigma });
    }
    Ok((b2, (b2 + sigma) / 2, (b2 - sigma) / 2))
}

/// Classification by (χ, σ) and the Rokhlin parity rule.
pub fn homeomorphism_type(
    chi: i64,
    sigma: i64,
    simply_connected: bool,
) -> Result<TypeReport, SurgeryError> {
    if !simply_connected {
        return Err(SurgeryError::Unclassifiable);
    }
    classify(chi, sigma, true)
}

fn classify(chi: i64, sigma: i64, simply_connected: bool) -> Result<TypeReport, SurgeryError> {
    let (b2, b_plus, b_minus) = betti(chi, sigma)?;
    let parity = if sigma.rem_euclid(16) != 0 {
        Parity::Odd
    } else {
        Parity::Undetermined
    };
    let homeo_type = match (parity, b_plus) {
        (Parity::Odd, 1) if simply_connected => HomeoType::Standard { m: b_minus },
        (Parity::Odd, 1) => HomeoType::Candidate { m: b_minus },
        _ => HomeoType::OutOfScope,
    };
    Ok(TypeReport {
        chi,
        sigma,
        b2,
        b_plus,
        b_minus,
        parity,
        homeo_type,
    })
}

fn classes(plumbing: &PlumbingGraph) -> Result<Vec<&HomologyClass>, SurgeryError> {
    plumbing
        .vertices()
        .iter()
        .map(|v| {
            v.class
                .as_ref()
                .ok_or_else(|| SurgeryError::MissingClass(v.name.clone()))
        })
        .collect()
}

/// `(PD(K)·uᵢ)ᵢ`, the coefficients of K|_P on the dual basis.
pub fn restrict_canonical(
    ambient: Ambient,
    plumbing: &PlumbingGraph,
) -> Result<Vec<i64>, SurgeryError> {
    let k = ambient.canonical();
    Ok(classes(plumbing)?.iter().map(|u| k.pair(u)).collect())
}

/// `(PD(ω)·uᵢ)ᵢ` with PD(ω) = a·h − Σ bᵢeᵢ.
pub fn restrict_symplectic(plumbing: &PlumbingGraph) -> Result<Vec<LinearForm>, SurgeryError> {
    Ok(classes(plumbing)?
        .iter()
        .map(|u| u.symplectic_area())
        .collect())
}

/// K|_P · ω|_P = kᵀ M⁻¹ w.
pub fn restricted_product(
    ambient: Ambient,
    plumbing: &PlumbingGraph,
) -> Result<LinearForm, SurgeryError> {
    if plumbing.is_empty() {
        return Ok(LinearForm::zero());
    }
    let k = restrict_canonical(ambient, plumbing)?;
    let w = restrict_symplectic(plumbing)?;
    let inv = invert(&plumbing.intersection_matrix())?;
    let mut out = LinearForm::zero();
    for (i, &ki) in k.iter().enumerate() {
        if ki == 0 {
            continue;
        }
        for (j, wj) in w.iter().enumerate() {
            let c = &inv[(i, j)] * Rational::from_integer(ki.into());
            if !c.is_zero() {
                out = out + wj.scale(&c);
            }
        }
    }
    Ok(out)
}

/// K_X·ω_X = K·ω − K|_P·ω|_P.
pub fn blowdown_product(
    ambient: Ambient,
    plumbing: &PlumbingGraph,
) -> Result<LinearForm, SurgeryError> {
    Ok(ambient.canonical_area() - restricted_product(ambient, plumbing)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Positive a-coefficient: the form is positive once every bᵢ is small
    /// enough. `witness` is its value at a = 1, bᵢ = 1/(100k).
    Exotic {
        a_coefficient: Rational,
        witness: Rational,
    },
    Inconclusive {
        a_coefficient: Rational,
        witness: Rational,
    },
}

impl Verdict {
    pub fn is_exotic(&self) -> bool {
        matches!(self, Verdict::Exotic { .. })
    }

    pub fn a_coefficient(&self) -> &Rational {
        match self {
            Verdict::Exotic { a_coefficient, .. } | Verdict::Inconclusive { a_coefficient, .. } => {
                a_coefficient
            }
        }
    }

    pub fn witness(&self) -> &Rational {
        match self {
            Verdict::Exotic { witness, .. } | Verdict::Inconclusive { witness, .. } => witness,
        }
    }
}

/// a = 1 and bᵢ = 1/(100k) for every symbol of the form.
pub fn witness_assignment(k: usize) -> BTreeMap<Symbol, Rational> {
    let mut m = BTreeMap::from([(Symbol::A, Rational::one())]);
    for i in 1..=k {
        m.insert(Symbol::B(i as u32), rat(1, 100 * k.max(1) as i64));
    }
    m
}

pub fn exoticness_verdict(
    form: &LinearForm,
    homeo_type: HomeoType,
    ambient: Ambient,
) -> Result<Verdict, SurgeryError> {
    let m = match homeo_type {
        HomeoType::Standard { m } => m,
        HomeoType::Candidate { .. } => return Err(SurgeryError::Unclassifiable),
        HomeoType::OutOfScope => return Err(SurgeryError::OutOfLemmaRange { m: -1 }),
    };
    if !(2..=9).contains(&m) {
        return Err(SurgeryError::OutOfLemmaRange { m });
    }
    let k = form
        .symbols()
        .filter_map(|s| match s {
            Symbol::B(i) => Some(i as usize),
            Symbol::A => None,
        })
        .max()
        .unwrap_or(0)
        .max(ambient.k);
    let witness = form.eval(&witness_assignment(k))?;
    let a_coefficient = form.coefficient(Symbol::A);
    Ok(if a_coefficient.is_positive() && witness.is_positive() {
        Verdict::Exotic {
            a_coefficient,
            witness,
        }
    } else {
        Verdict::Inconclusive {
            a_coefficient,
            witness,
        }
    })
}

/// −3a₀ − Σ aᵢ, the canonical pairing on CP² # m CP̄² for PD(ω̄) = a₀h + Σ aᵢeᵢ
/// and PD(K) = −3h + Σ eᵢ.
pub fn sign_lemma_value(a: &[Rational]) -> Rational {
    let (a0, rest) = a.split_first().expect("a₀ is required");
    -int(3) * a0 - rest.iter().sum::<Rational>()
}

/// a₀ > 0 and a₀² > Σ aᵢ².
pub fn sign_lemma_admissible(a: &[Rational]) -> bool {
    let (a0, rest) = a.split_first().expect("a₀ is required");
    a0.is_positive() && a0 * a0 > rest.iter().map(|x| x * x).sum::<Rational>()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignLemmaReport {
    pub m: usize,
    pub seed: u64,
    pub accepted: usize,
    pub rejected: usize,
    /// Accepted samples with −3a₀ − Σaᵢ ≥ 0, as numerators over `DENOMINATOR`.
    pub counterexamples: Vec<Vec<i64>>,
}

impl SignLemmaReport {
    pub const DENOMINATOR: i64 = 1_000_000;

    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Rejection-sample rational vectors `(a₀, …, a_m)` with denominator
/// [`SignLemmaReport::DENOMINATOR`]: a₀ uniform in (0, 1], then each aᵢ
/// uniform in [−a₀, a₀], kept when a₀² > Σ aᵢ².
pub fn sign_lemma_property(m: usize, samples: usize, seed: u64) -> SignLemmaReport {
    let d = SignLemmaReport::DENOMINATOR;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SignLemmaReport {
        m,
        seed,
        accepted: 0,
        rejected: 0,
        counterexamples: Vec::new(),
    };
    let mut v = vec![0i64; m + 1];
    while report.accepted < samples {
        let a0 = rng.gen_range(1..=d);
        v[0] = a0;
        let mut norm: i128 = 0;
        for x in &mut v[1..] {
            *x = rng.gen_range(-a0..=a0);
            norm += (*x as i128) * (*x as i128);
        }
        if (a0 as i128) * (a0 as i128) <= norm {
            report.rejected += 1;
            continue;
        }
        report.accepted += 1;
        let value = -3 * a0 as i128 - v[1..].iter().map(|&x| x as i128).sum::<i128>();
        if value >= 0 {
            report.counterexamples.push(v.clone());
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryReport {
    pub ambient: Ambient,
    pub plumbing_size: usize,
    pub types: TypeReport,
    pub canonical_restriction: Vec<i64>,
    pub symplectic_restriction: Vec<LinearForm>,
    pub product: LinearForm,
    /// `None` when simple connectivity is not certified.
    pub verdict: Option<Verdict>,
}

pub fn surgery_report(
    ambient: Ambient,
    plumbing: &PlumbingGraph,
    simply_connected: bool,
) -> Result<SurgeryReport, SurgeryError> {
    let (chi, sigma) = euler_signature(ambient, plumbing.len());
    let types = classify(chi, sigma, simply_connected)?;
    let product = blowdown_product(ambient, plumbing)?;
    let verdict = match types.homeo_type {
        HomeoType::Standard { .. } => Some(exoticness_verdict(&product, types.homeo_type, ambient)?),
        _ => None,
    };
    Ok(SurgeryReport {
        ambient,
        plumbing_size: plumbing.len(),
        types,
        canonical_restriction: restrict_canonical(ambient, plumbing)?,
        symplectic_restriction: restrict_symplectic(plumbing)?,
        product,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_and_signature() {
        assert_eq!(euler_signature(Ambient { k: 16 }, 8), (11, -7));
        assert_eq!(euler_signature(Ambient { k: 17 }, 8), (12, -8));
        assert_eq!(euler_signature(Ambient { k: 5 }, 0), (8, -4));
    }

    #[test]
    fn classification() {
        let t = homeomorphism_type(11, -7, true).unwrap();
        assert_eq!(t.homeo_type, HomeoType::Standard { m: 8 });
        assert_eq!((t.b2, t.b_plus, t.b_minus), (9, 1, 8));
        assert_eq!(
            homeomorphism_type(12, -8, true).unwrap().homeo_type,
            HomeoType::Standard { m: 9 }
        );
        let even = homeomorphism_type(4, -16, true).unwrap();
        assert_eq!(even.parity, Parity::Undetermined);
        assert_eq!(even.homeo_type, HomeoType::OutOfScope);
        assert!(matches!(
            homeomorphism_type(5, -16, true),
            Err(SurgeryError::BadBetti { .. })
        ));
        let undetermined = homeomorphism_type(20, -16, true).unwrap();
        assert_eq!(undetermined.parity, Parity::Undetermined);
        assert_eq!(undetermined.homeo_type, HomeoType::OutOfScope);
        assert_eq!(homeomorphism_type(11, -7, false), Err(SurgeryError::Unclassifiable));
    }

    #[test]
    fn homeo_type_text_roundtrip() {
        let t = HomeoType::Standard { m: 8 };
        assert_eq!(HomeoType::parse(&t.to_string()), Some(t));
        assert_eq!(HomeoType::parse("S4"), None);
    }

    #[test]
    fn empty_plumbing_leaves_k_omega() {
        let ambient = Ambient { k: 16 };
        let f = blowdown_product(ambient, &PlumbingGraph::empty()).unwrap();
        assert_eq!(f, ambient.canonical_area());
        let t = HomeoType::Standard { m: 8 };
        let v = exoticness_verdict(&f, t, ambient).unwrap();
        assert!(!v.is_exotic());
        assert_eq!(v.witness(), &rat(-299, 100));
    }

    #[test]
    fn verdict_range() {
        let f = LinearForm::symbol(Symbol::A);
        let ambient = Ambient { k: 1 };
        assert!(matches!(
            exoticness_verdict(&f, HomeoType::Standard { m: 10 }, ambient),
            Err(SurgeryError::OutOfLemmaRange { m: 10 })
        ));
        assert!(exoticness_verdict(&f, HomeoType::Standard { m: 2 }, ambient)
            .unwrap()
            .is_exotic());
    }

    #[test]
    fn sign_lemma_sharp_at_ten() {
        let mut v = vec![int(100)];
        v.extend(std::iter::repeat_n(int(-31), 10));
        assert!(sign_lemma_admissible(&v));
        assert_eq!(sign_lemma_value(&v), int(10));
    }

    #[test]
    fn sign_lemma_sampler_small() {
        for m in 2..=9 {
            let r = sign_lemma_property(m, 200, 7);
            assert!(r.holds(), "m = {m}");
            assert_eq!(r.accepted, 200);
        }
        assert_eq!(sign_lemma_property(3, 50, 1), sign_lemma_property(3, 50, 1));
    }
}
