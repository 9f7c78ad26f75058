use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{PlumbingError, PlumbingGraph};
use crate::kernel::Rational;

/// `t₁ − 1/(t₂ − 1/(… − 1/t_m))` as a reduced pair `(numerator, denominator)`.
pub fn negative_continued_fraction(ts: &[i64]) -> (BigInt, BigInt) {
    let (mut num, mut den) = (BigInt::one(), BigInt::zero());
    for &t in ts.iter().rev() {
        let next = BigInt::from(t) * &num - &den;
        den = num;
        num = next;
    }
    let g = num.gcd(&den);
    if g.is_zero() {
        return (num, den);
    }
    let (mut num, mut den) = (num / &g, den / &g);
    if den.is_negative() {
        num = -num;
        den = -den;
    }
    (num, den)
}

/// Inverse of [`negative_continued_fraction`] for `α/β > 1`, `β ≥ 1`:
/// every returned entry is at least 2.
pub fn expand_negative_continued_fraction(alpha: &BigInt, beta: &BigInt) -> Option<Vec<i64>> {
    if !beta.is_positive() || alpha <= beta {
        return None;
    }
    let (mut a, mut b) = (alpha.clone(), beta.clone());
    let mut out = Vec::new();
    loop {
        let t = a.div_ceil(&b);
        out.push(t.to_i64()?);
        let r = &t * &b - &a;
        if r.is_zero() {
            return Some(out);
        }
        a = b;
        b = r;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leg {
    /// Sphere names read center-outward (empty for abstract data).
    pub vertices: Vec<String>,
    /// `t₁…t_m`, the negated weights center-outward.
    pub weights: Vec<i64>,
    pub alpha: BigInt,
    pub beta: BigInt,
}

impl Leg {
    fn from_weights(vertices: Vec<String>, weights: Vec<i64>) -> Self {
        let (alpha, beta) = negative_continued_fraction(&weights);
        Leg {
            vertices,
            weights,
            alpha,
            beta,
        }
    }

    /// `N_j` with `N_last = 1`, `N_{j-1} = t_j N_j − N_{j+1}`; the meridian
    /// of the j-th sphere is `ℓ^{N_j}`. `N_{-1}` equals `α`.
    pub fn meridian_exponents(&self) -> Vec<BigInt> {
        let m = self.weights.len();
        let mut n = vec![BigInt::zero(); m];
        let (mut cur, mut next) = (BigInt::one(), BigInt::zero());
        for j in (0..m).rev() {
            n[j] = cur.clone();
            let prev = BigInt::from(self.weights[j]) * &cur - &next;
            next = cur;
            cur = prev;
        }
        n
    }

    /// `(u, v)` with `βu − αv = 1`, `0 ≤ u < α`; the leg generator `ℓ` is
    /// `q^u h^v`.
    pub fn linking_exponents(&self) -> (BigInt, BigInt) {
        let ext = self.beta.extended_gcd(&self.alpha);
        let u = ext.x.mod_floor(&self.alpha);
        let v = (&self.beta * &u - BigInt::one()) / &self.alpha;
        (u, v)
    }
}

/// Genus-0 Seifert data `{0; b₀; (α₁, β₁), …}` of a star-shaped plumbing
/// boundary. Legs are sorted by `(α, β)` and then by position unless an
/// explicit order is given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertInvariant {
    pub center: Option<String>,
    pub b0: BigInt,
    pub legs: Vec<Leg>,
}

impl SeifertInvariant {
    pub fn new(b0: i64, pairs: &[(i64, i64)]) -> Result<Self, PlumbingError> {
        let mut legs = Vec::new();
        for &(a, b) in pairs {
            let (alpha, beta) = (BigInt::from(a), BigInt::from(b));
            let weights = expand_negative_continued_fraction(&alpha, &beta).ok_or_else(|| {
                PlumbingError::NotStarShaped(format!("pair ({a}, {b}) needs 0 < β < α"))
            })?;
            legs.push(Leg {
                vertices: Vec::new(),
                weights,
                alpha,
                beta,
            });
        }
        Ok(SeifertInvariant {
            center: None,
            b0: BigInt::from(b0),
            legs,
        })
    }

    /// Star shape with the unique vertex of valence at least 3 as center.
    pub fn from_plumbing(g: &PlumbingGraph) -> Result<Self, PlumbingError> {
        let centers: Vec<usize> = (0..g.len()).filter(|&v| g.valence(v) >= 3).collect();
        match centers.as_slice() {
            [c] => Self::with_center(g, *c),
            [] if g.len() == 1 => Self::with_center(g, 0),
            [] => Err(PlumbingError::NotStarShaped(
                "no vertex of valence >= 3; name the center explicitly".into(),
            )),
            _ => Err(PlumbingError::NotStarShaped(format!(
                "{} vertices of valence >= 3",
                centers.len()
            ))),
        }
    }

    pub fn from_plumbing_with_center(
        g: &PlumbingGraph,
        center: &str,
    ) -> Result<Self, PlumbingError> {
        let c = g
            .index(center)
            .ok_or_else(|| PlumbingError::UnknownCurve(center.to_string()))?;
        Self::with_center(g, c)
    }

    /// Optional center, and optional leg order naming one sphere of every
    /// leg.
    pub fn from_plumbing_ordered(
        g: &PlumbingGraph,
        center: Option<&str>,
        leg_order: Option<&[&str]>,
    ) -> Result<Self, PlumbingError> {
        let base = match center {
            Some(c) => Self::from_plumbing_with_center(g, c)?,
            None => Self::from_plumbing(g)?,
        };
        let Some(order) = leg_order else {
            return Ok(base);
        };
        let mut legs = Vec::new();
        for name in order {
            if g.index(name).is_none() {
                return Err(PlumbingError::UnknownCurve(name.to_string()));
            }
            let leg = base
                .legs
                .iter()
                .find(|l| l.vertices.iter().any(|v| v == name))
                .ok_or_else(|| PlumbingError::NotStarShaped(format!("`{name}` is not on a leg")))?;
            if legs.contains(leg) {
                return Err(PlumbingError::NotStarShaped(format!(
                    "leg of `{name}` is named twice"
                )));
            }
            legs.push(leg.clone());
        }
        if legs.len() != base.legs.len() {
            return Err(PlumbingError::NotStarShaped(format!(
                "leg order names {} of {} legs",
                legs.len(),
                base.legs.len()
            )));
        }
        Ok(SeifertInvariant { legs, ..base })
    }

    fn with_center(g: &PlumbingGraph, c: usize) -> Result<Self, PlumbingError> {
        let mut legs = Vec::new();
        let mut starts = Vec::new();
        for start in g.neighbours(c) {
            let (mut prev, mut cur) = (c, start);
            let (mut names, mut weights) = (Vec::new(), Vec::new());
            loop {
                let v = &g.vertices()[cur];
                if v.weight > -2 {
                    return Err(PlumbingError::UnreducedLeg {
                        vertex: v.name.clone(),
                        weight: v.weight,
                    });
                }
                names.push(v.name.clone());
                weights.push(-v.weight);
                let next: Vec<usize> =
                    g.neighbours(cur).into_iter().filter(|&w| w != prev).collect();
                match next.as_slice() {
                    [] => break,
                    [n] => {
                        prev = cur;
                        cur = *n;
                    }
                    _ => {
                        return Err(PlumbingError::NotStarShaped(format!(
                            "`{}` branches away from the center",
                            v.name
                        )))
                    }
                }
            }
            starts.push(start);
            legs.push(Leg::from_weights(names, weights));
        }
        let mut order: Vec<usize> = (0..legs.len()).collect();
        order.sort_by(|&i, &j| {
            (&legs[i].alpha, &legs[i].beta, starts[i]).cmp(&(&legs[j].alpha, &legs[j].beta, starts[j]))
        });
        let legs = order.into_iter().map(|i| legs[i].clone()).collect();
        let center = &g.vertices()[c];
        Ok(SeifertInvariant {
            center: Some(center.name.clone()),
            b0: BigInt::from(-center.weight),
            legs,
        })
    }

    pub fn pairs(&self) -> Vec<(BigInt, BigInt)> {
        self.legs
            .iter()
            .map(|l| (l.alpha.clone(), l.beta.clone()))
            .collect()
    }

    fn beta_over_alpha_sum(&self) -> Rational {
        self.legs
            .iter()
            .map(|l| Rational::new(l.beta.clone(), l.alpha.clone()))
            .sum()
    }

    /// `b₀ − Σ βᵢ/αᵢ`.
    pub fn e_invariant(&self) -> Rational {
        Rational::from_integer(self.b0.clone()) - self.beta_over_alpha_sum()
    }

    /// `b₀ + Σ βᵢ/αᵢ`, the sum as usually displayed for this data.
    pub fn displayed_sum(&self) -> Rational {
        Rational::from_integer(self.b0.clone()) + self.beta_over_alpha_sum()
    }

    /// The displayed sum term by term, e.g. `3/1 + 1/2 + 1/4`.
    pub fn displayed_terms(&self) -> String {
        let mut parts = vec![format!("{}/1", self.b0)];
        parts.extend(self.legs.iter().map(|l| format!("{}/{}", l.beta, l.alpha)));
        parts.join(" + ")
    }

    pub fn is_rational_homology_sphere(&self) -> bool {
        !self.e_invariant().is_zero()
    }

    /// `|e| · ∏ αᵢ`, the order of H₁ when finite.
    pub fn h1_order(&self) -> Rational {
        let prod: BigInt = self.legs.iter().map(|l| l.alpha.clone()).product();
        self.e_invariant().abs() * Rational::from_integer(prod)
    }

    fn notation_with_center(&self, center: &BigInt) -> String {
        let mut parts = vec![format!("(1,{center})")];
        parts.extend(self.legs.iter().map(|l| format!("({},{})", l.alpha, l.beta)));
        format!("{{0; {}}}", parts.join(", "))
    }

    /// Central pair written as `(1, b₀)`, e.g. `{0; (1,3), (2,1), …}`.
    pub fn notation(&self) -> String {
        self.notation_with_center(&self.b0)
    }

    /// Central pair `(1, −b₀)` matching the π₁ presentation's `q₀ = h^{b₀}`.
    pub fn oriented_notation(&self) -> String {
        self.notation_with_center(&-&self.b0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};
    use proptest::prelude::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn continued_fractions() {
        assert_eq!(negative_continued_fraction(&[2, 2, 3, 4]), (big(25), big(18)));
        assert_eq!(negative_continued_fraction(&[2, 2, 2, 4]), (big(13), big(10)));
        assert_eq!(negative_continued_fraction(&[6]), (big(6), big(1)));
        assert_eq!(
            expand_negative_continued_fraction(&big(25), &big(18)),
            Some(vec![2, 2, 3, 4])
        );
        assert_eq!(expand_negative_continued_fraction(&big(1), &big(3)), None);
    }

    #[test]
    fn single_leg_with_explicit_center() {
        let g = PlumbingGraph::from_weights(&[("c", -3), ("x", -2)], &[("c", "x")]).unwrap();
        assert!(matches!(
            SeifertInvariant::from_plumbing(&g),
            Err(PlumbingError::NotStarShaped(_))
        ));
        let s = SeifertInvariant::from_plumbing_with_center(&g, "c").unwrap();
        assert_eq!(s.b0, big(3));
        assert_eq!(s.pairs(), vec![(big(2), big(1))]);
        assert_eq!(s.e_invariant(), rat(5, 2));
        assert_eq!(s.h1_order(), int(5));
    }

    #[test]
    fn unreduced_leg() {
        let g = PlumbingGraph::from_weights(
            &[("c", -1), ("a", -2), ("b", -1), ("d", -2)],
            &[("c", "a"), ("c", "b"), ("c", "d")],
        )
        .unwrap();
        assert!(matches!(
            SeifertInvariant::from_plumbing(&g),
            Err(PlumbingError::UnreducedLeg { .. })
        ));
    }

    #[test]
    fn empty_data_is_not_a_qhs() {
        let s = SeifertInvariant::new(0, &[]).unwrap();
        assert!(!s.is_rational_homology_sphere());
        assert_eq!(s.notation(), "{0; (1,0)}");
    }

    #[test]
    fn meridians_of_a_chain() {
        let leg = Leg::from_weights(Vec::new(), vec![2, 2, 3, 4]);
        assert_eq!(leg.meridian_exponents(), vec![big(18), big(11), big(4), big(1)]);
        assert_eq!(leg.linking_exponents(), (big(7), big(5)));
        let single = Leg::from_weights(Vec::new(), vec![4]);
        assert_eq!(single.linking_exponents(), (big(1), big(0)));
    }

    proptest! {
        #[test]
        fn expansion_roundtrip(ts in prop::collection::vec(2i64..7, 1..6)) {
            let (a, b) = negative_continued_fraction(&ts);
            prop_assert_eq!(expand_negative_continued_fraction(&a, &b), Some(ts));
        }

        #[test]
        fn linking_exponents_solve(ts in prop::collection::vec(2i64..7, 1..6)) {
            let leg = Leg::from_weights(Vec::new(), ts);
            let (u, v) = leg.linking_exponents();
            prop_assert_eq!(&leg.beta * u - &leg.alpha * v, BigInt::one());
            let n = leg.meridian_exponents();
            prop_assert_eq!(BigInt::from(leg.weights[0]) * &n[0] - n.get(1).cloned().unwrap_or_default(), leg.alpha.clone());
        }
    }
}
