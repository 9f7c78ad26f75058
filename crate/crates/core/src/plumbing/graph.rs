use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::PlumbingError;
use crate::blowup::Configuration;
use crate::homology::HomologyClass;
use crate::kernel::{determinant, smith_normal_form, IntegerMatrix, Rational, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlumbingVertex {
    pub name: String,
    pub weight: i64,
    pub class: Option<HomologyClass>,
    /// Configuration curve this sphere was taken from.
    pub curve: Option<String>,
}

/// Weighted tree of spheres. Vertex order is the order given at
/// construction and fixes the row order of the intersection matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlumbingGraph {
    vertices: Vec<PlumbingVertex>,
    edges: Vec<(usize, usize)>,
}

impl PlumbingGraph {
    /// Plumbing spanned by the named curves of a configuration.
    pub fn extract(config: &Configuration, names: &[&str]) -> Result<Self, PlumbingError> {
        let labeled: Vec<(&str, &str)> = names.iter().map(|&n| (n, n)).collect();
        Self::extract_labeled(config, &labeled)
    }

    /// Like [`PlumbingGraph::extract`], naming each sphere `label` instead
    /// of its curve name. Pairs are `(label, curve)`.
    pub fn extract_labeled(
        config: &Configuration,
        spheres: &[(&str, &str)],
    ) -> Result<Self, PlumbingError> {
        let mut vertices = Vec::new();
        for &(label, curve) in spheres {
            let class = config
                .class_of(curve)
                .map_err(|_| PlumbingError::UnknownCurve(curve.to_string()))?
                .clone();
            vertices.push(PlumbingVertex {
                name: label.to_string(),
                weight: class.square(),
                class: Some(class),
                curve: Some(curve.to_string()),
            });
        }
        let mut curves = BTreeSet::new();
        for &(_, curve) in spheres {
            if !curves.insert(curve) {
                return Err(PlumbingError::DuplicateVertex(curve.to_string()));
            }
        }
        let mut edges = Vec::new();
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                let (a, b) = (&vertices[i], &vertices[j]);
                let product = a.class.as_ref().unwrap().pair(b.class.as_ref().unwrap());
                match product {
                    0 => {}
                    1 => edges.push((i, j)),
                    _ => {
                        return Err(PlumbingError::NotSimplePlumbing {
                            a: a.name.clone(),
                            b: b.name.clone(),
                            product,
                        })
                    }
                }
            }
        }
        Self::build(vertices, edges)
    }

    /// Plumbing given by weights and edges alone.
    pub fn from_weights(
        vertices: &[(&str, i64)],
        edges: &[(&str, &str)],
    ) -> Result<Self, PlumbingError> {
        let vertices: Vec<PlumbingVertex> = vertices
            .iter()
            .map(|&(name, weight)| PlumbingVertex {
                name: name.to_string(),
                weight,
                class: None,
                curve: None,
            })
            .collect();
        let index = |n: &str| {
            vertices
                .iter()
                .position(|v| v.name == n)
                .ok_or_else(|| PlumbingError::UnknownCurve(n.to_string()))
        };
        let mut idx_edges = Vec::new();
        for &(a, b) in edges {
            let (i, j) = (index(a)?, index(b)?);
            if i == j {
                return Err(PlumbingError::NotATree(format!("self-loop at `{a}`")));
            }
            idx_edges.push((i.min(j), i.max(j)));
        }
        Self::build(vertices, idx_edges)
    }

    /// Plumbing from classes, checking that adjacency matches the pairing.
    pub fn from_classes(
        vertices: &[(&str, HomologyClass)],
        edges: &[(&str, &str)],
    ) -> Result<Self, PlumbingError> {
        let weights: Vec<(&str, i64)> = vertices.iter().map(|(n, c)| (*n, c.square())).collect();
        let mut g = Self::from_weights(&weights, edges)?;
        for (v, (_, class)) in g.vertices.iter_mut().zip(vertices) {
            v.class = Some(class.clone());
        }
        for i in 0..g.vertices.len() {
            for j in i + 1..g.vertices.len() {
                let product = vertices[i].1.pair(&vertices[j].1);
                let adjacent = g.edges.contains(&(i, j)) as i64;
                if product != adjacent {
                    return Err(PlumbingError::NotSimplePlumbing {
                        a: g.vertices[i].name.clone(),
                        b: g.vertices[j].name.clone(),
                        product,
                    });
                }
            }
        }
        Ok(g)
    }

    fn build(
        vertices: Vec<PlumbingVertex>,
        mut edges: Vec<(usize, usize)>,
    ) -> Result<Self, PlumbingError> {
        let mut names = BTreeSet::new();
        for v in &vertices {
            if !names.insert(v.name.as_str()) {
                return Err(PlumbingError::DuplicateVertex(v.name.clone()));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let g = PlumbingGraph { vertices, edges };
        let n = g.vertices.len();
        if n > 0 {
            if g.edges.len() != n - 1 {
                return Err(PlumbingError::NotATree(format!(
                    "{n} vertices but {} edges",
                    g.edges.len()
                )));
            }
            let mut seen = vec![false; n];
            let mut queue = VecDeque::from([0]);
            seen[0] = true;
            while let Some(v) = queue.pop_front() {
                for w in g.neighbours(v) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            if let Some(v) = seen.iter().position(|s| !s) {
                return Err(PlumbingError::NotATree(format!(
                    "`{}` is not connected to `{}`",
                    g.vertices[v].name, g.vertices[0].name
                )));
            }
        }
        Ok(g)
    }

    /// The empty plumbing (no surgery).
    pub fn empty() -> Self {
        PlumbingGraph {
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[PlumbingVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.name == name)
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.neighbours(v).len()
    }

    pub fn integer_matrix(&self) -> IntegerMatrix {
        IntegerMatrix::from_fn(self.len(), self.len(), |i, j| {
            if i == j {
                BigInt::from(self.vertices[i].weight)
            } else if self.edges.contains(&(i.min(j), i.max(j))) {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    }

    pub fn intersection_matrix(&self) -> RationalMatrix {
        self.integer_matrix().to_rational()
    }

    pub fn determinant(&self) -> Rational {
        determinant(&self.intersection_matrix()).expect("square by construction")
    }

    /// H₁ of the boundary: the cokernel of the intersection matrix.
    pub fn first_homology(&self) -> FirstHomology {
        FirstHomology::cokernel(&self.integer_matrix())
    }
}

/// Finitely generated abelian group ℤ^free ⊕ ⊕ ℤ/dᵢ with 1 < d₁ | d₂ | ….
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstHomology {
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl FirstHomology {
    /// Cokernel of `m` viewed as a map ℤ^cols → ℤ^rows.
    pub fn cokernel(m: &IntegerMatrix) -> Self {
        let snf = smith_normal_form(m);
        let torsion = snf
            .diagonal
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .map(|d| d.abs())
            .collect();
        FirstHomology {
            torsion,
            free_rank: m.rows() - snf.rank(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }
}

impl std::fmt::Display for FirstHomology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::int;

    #[test]
    fn single_vertex() {
        let g = PlumbingGraph::from_weights(&[("u", -4)], &[]).unwrap();
        assert_eq!(g.intersection_matrix().to_rows(), vec![vec![int(-4)]]);
        assert_eq!(g.first_homology().order(), Some(BigInt::from(4)));
        let unit = PlumbingGraph::from_weights(&[("u", -1)], &[]).unwrap();
        assert_eq!(unit.first_homology().to_string(), "0");
    }

    #[test]
    fn cycles_and_forests_are_rejected() {
        let tri = PlumbingGraph::from_weights(
            &[("a", -2), ("b", -2), ("c", -2)],
            &[("a", "b"), ("b", "c"), ("a", "c")],
        );
        assert!(matches!(tri, Err(PlumbingError::NotATree(_))));
        let forest = PlumbingGraph::from_weights(
            &[("a", -2), ("b", -2), ("c", -2), ("d", -2)],
            &[("a", "b"), ("c", "d"), ("c", "d")],
        );
        assert!(matches!(forest, Err(PlumbingError::NotATree(_))));
    }

    #[test]
    fn classes_must_match_adjacency() {
        let a = HomologyClass::new(1, vec![-1, -1]);
        let b = HomologyClass::new(0, vec![1, -1]);
        let err = PlumbingGraph::from_classes(&[("a", a), ("b", b)], &[("a", "b")]).unwrap_err();
        assert_eq!(
            err,
            PlumbingError::NotSimplePlumbing {
                a: "a".into(),
                b: "b".into(),
                product: 0
            }
        );
    }

    #[test]
    fn lens_space_chain() {
        // [-2, -2, -2] bounds L(4, 3)
        let g = PlumbingGraph::from_weights(
            &[("a", -2), ("b", -2), ("c", -2)],
            &[("a", "b"), ("b", "c")],
        )
        .unwrap();
        assert_eq!(g.determinant(), int(-4));
        assert_eq!(g.first_homology().torsion, vec![BigInt::from(4)]);
    }
}
