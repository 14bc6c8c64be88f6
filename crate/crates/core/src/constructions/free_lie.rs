//! Free graded Lie algebras realized inside tensor algebras, and Quillen's
//! functor `ℒ(C) = (𝕃(s⁻¹C̄), ∂₁ + ∂₂)`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::homotopy::{cobar, DGCoalgebra, LInfAlgebra};
use crate::linalg::{Echelon, Inserted};
use crate::multiop::Truncation;
use crate::space::{Element, GradedSpace, LinearMap};

use super::TensorAlgebra;

/// The free graded Lie algebra on a positively graded space, as the span
/// of iterated brackets inside `T⁺(V)`.
#[derive(Debug, Clone)]
pub struct FreeLie {
    tensor: TensorAlgebra,
    /// Lie basis per degree, as tensor elements.
    basis: BTreeMap<i64, Vec<Element>>,
    /// Row echelon of each degree's Lie basis with payload = basis position.
    spans: BTreeMap<i64, Echelon>,
}

impl FreeLie {
    pub fn new(generators: GradedSpace, t: &Truncation) -> Result<Self> {
        Self::from_tensor(TensorAlgebra::new(generators, t)?)
    }

    /// Builds the Lie basis from left-normed brackets `[g, u]`.
    pub fn from_tensor(tensor: TensorAlgebra) -> Result<Self> {
        let gens = tensor.generators().clone();
        let mut basis: BTreeMap<i64, Vec<Element>> = BTreeMap::new();
        let mut spans: BTreeMap<i64, Echelon> = BTreeMap::new();
        for d in 1..=tensor.max_degree() {
            let mut span = Echelon::new();
            let mut here = Vec::new();
            let mut candidates: Vec<Element> = gens.in_degree(d).map(|g| tensor.generator(g)).collect();
            for g in 0..gens.dim() {
                let rest = d - gens.degree(g);
                if let Some(lower) = basis.get(&rest) {
                    let eg = tensor.generator(g);
                    for u in lower {
                        candidates.push(tensor.bracket(&eg, u)?);
                    }
                }
            }
            for v in candidates {
                if let Inserted::Pivot(_) = span.insert(&v, &Element::basis(here.len())) {
                    here.push(v);
                }
            }
            if !here.is_empty() {
                basis.insert(d, here);
                spans.insert(d, span);
            }
        }
        Ok(FreeLie {
            tensor,
            basis,
            spans,
        })
    }

    pub fn tensor(&self) -> &TensorAlgebra {
        &self.tensor
    }

    pub fn generator(&self, g: usize) -> Element {
        self.tensor.generator(g)
    }

    pub fn bracket(&self, a: &Element, b: &Element) -> Result<Element> {
        self.tensor.bracket(a, b)
    }

    pub fn basis_in_degree(&self, d: i64) -> &[Element] {
        self.basis.get(&d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn dim_in_degree(&self, d: i64) -> usize {
        self.basis_in_degree(d).len()
    }

    /// Coordinates of a homogeneous tensor element in the Lie basis of its
    /// degree, or `None` when it is not a Lie element.
    pub fn coordinates(&self, v: &Element) -> Result<Option<Element>> {
        let Some(d) = v.degree(self.tensor.space())? else {
            return Ok(Some(Element::zero()));
        };
        let Some(span) = self.spans.get(&d) else {
            return Ok(None);
        };
        let (rem, combo) = span.reduce(v);
        Ok(rem.is_zero().then_some(combo))
    }

    pub fn contains(&self, v: &Element) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    /// Sets `∂` on generators; the images must be Lie elements.
    pub fn set_differential(&mut self, on_generators: Vec<Element>) -> Result<()> {
        for (g, v) in on_generators.iter().enumerate() {
            if !self.contains(v)? {
                return Err(Error::ImageEscape(format!(
                    "∂({}) is not a Lie element",
                    self.tensor.generators().name(g)
                )));
            }
        }
        self.tensor.set_differential(on_generators)
    }

    pub fn differential(&self) -> &LinearMap {
        self.tensor.differential()
    }

    /// The Lie basis as a named space with `ℓ₁ = −∂` and `ℓ₂ = bracket`,
    /// together with the embedding of each basis element into `T⁺(V)`.
    /// With this sign, transfer of `ℒ𝒞(L)` onto the generators `s⁻¹sx`
    /// returns the L∞ structure of `L` itself.
    ///
    /// A basis element that is a single generator keeps the generator name;
    /// the others are named `[d.i]` by degree and position.
    pub fn to_dgl(&self, t: &Truncation) -> Result<(LInfAlgebra, Vec<Element>)> {
        let mut items = Vec::new();
        for (&d, elems) in &self.basis {
            for (i, e) in elems.iter().enumerate() {
                let name = match e.terms().collect::<Vec<_>>().as_slice() {
                    [(w, c)] if self.tensor.words()[*w].len() == 1 && **c == crate::scalar::one() => {
                        self.tensor.generators().name(self.tensor.words()[*w][0]).to_string()
                    }
                    _ => format!("[{d}.{i}]"),
                };
                items.push((name, d, (d, i, e.clone())));
            }
        }
        let (space, payload) = GradedSpace::with_payload(items)?;
        let position: BTreeMap<(i64, usize), usize> = payload
            .iter()
            .enumerate()
            .map(|(k, (d, i, _))| ((*d, *i), k))
            .collect();
        let embed: Vec<Element> = payload.iter().map(|(_, _, e)| e.clone()).collect();
        let to_space = |v: &Element| -> Result<Element> {
            let Some(d) = v.degree(self.tensor.space())? else {
                return Ok(Element::zero());
            };
            let c = self.coordinates(v)?.ok_or_else(|| {
                Error::ImageEscape("bracket or differential left the Lie span".into())
            })?;
            Ok(c.map_indices(|i| position[&(d, i)]))
        };
        let mut l = LInfAlgebra::new(space.clone());
        for (a, e) in embed.iter().enumerate() {
            let da = self.tensor.differential().apply(e).negated();
            l.set(vec![a], to_space(&da)?)?;
        }
        for a in 0..space.dim() {
            for b in a..space.dim() {
                if space.degree(a) + space.degree(b) > t.max_degree {
                    break;
                }
                let v = self.tensor.bracket(&embed[a], &embed[b])?;
                l.set(vec![a, b], to_space(&v)?)?;
            }
        }
        Ok((l, embed))
    }

    /// Homology dimensions of `(𝕃, ∂)` in degrees `1..max_degree`.
    pub fn homology_dims(&self) -> Result<BTreeMap<i64, usize>> {
        let mut out = BTreeMap::new();
        let top = self.tensor.max_degree();
        let rank_from = |d: i64| -> Result<usize> {
            let images: Vec<Element> = self
                .basis_in_degree(d)
                .iter()
                .map(|e| self.tensor.differential().apply(e))
                .collect();
            Ok(crate::linalg::rank(&images))
        };
        for d in 1..top {
            let dim = self.dim_in_degree(d);
            let h = dim - rank_from(d)? - rank_from(d + 1)?;
            if h > 0 {
                out.insert(d, h);
            }
        }
        Ok(out)
    }
}

/// Quillen's functor on a cocommutative DG coalgebra. The generators are
/// `s⁻¹C̄` and `∂ = ∂₁ + ∂₂` with
/// `∂₂(s⁻¹x) = ½ Σ (−1)^{|x_i|} [s⁻¹x_i, s⁻¹y_i]`, which agrees with the
/// cobar differential inside `T(s⁻¹C̄)`.
pub fn quillen_lie(c: &DGCoalgebra, t: &Truncation) -> Result<FreeLie> {
    if !c.is_cocommutative() || !c.check().cocommutative {
        return Err(Error::NotCocommutative);
    }
    let omega = cobar(c, t)?;
    let images = omega.generator_differential().to_vec();
    let lie = FreeLie::from_tensor(omega)?;
    for (g, v) in images.iter().enumerate() {
        if !lie.contains(v)? {
            return Err(Error::ImageEscape(format!(
                "∂({}) is not a Lie element",
                lie.tensor.generators().name(g)
            )));
        }
    }
    Ok(lie)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::quillen_chains;
    use crate::homotopy::check_jacobi;
    use crate::scalar::factorial;

    fn cpk(k: usize) -> LInfAlgebra {
        let s = GradedSpace::new([("x", 1), ("y", 2 * k as i64)]).unwrap();
        let mut l = LInfAlgebra::new(s);
        let ones = vec!["x"; k + 1];
        l.set_named(&ones, Element::term(1, factorial(k + 1).recip())).unwrap();
        l
    }

    #[test]
    fn free_lie_dimensions_on_one_odd_generator() {
        // 𝕃(a), |a| = 1: a and [a,a] only
        let g = GradedSpace::new([("a", 1)]).unwrap();
        let f = FreeLie::new(g, &Truncation::new(6, 3, 6).unwrap()).unwrap();
        assert_eq!(f.dim_in_degree(1), 1);
        assert_eq!(f.dim_in_degree(2), 1);
        assert_eq!(f.dim_in_degree(3), 0);
    }

    #[test]
    fn free_lie_dimensions_on_two_even_generators() {
        // Witt formula: 2, 1, 2, 3 in weights 1..4
        let g = GradedSpace::new([("a", 2), ("b", 2)]).unwrap();
        let f = FreeLie::new(g, &Truncation::new(8, 3, 8).unwrap()).unwrap();
        let dims: Vec<usize> = (1..=4).map(|w| f.dim_in_degree(2 * w)).collect();
        assert_eq!(dims, vec![2, 1, 2, 3]);
    }

    #[test]
    fn quillen_lie_of_cp2_squares_to_zero_and_recovers_homology() {
        let t = Truncation::new(8, 4, 8).unwrap();
        let c = quillen_chains(&cpk(2), &t).unwrap();
        let lie = quillen_lie(&c, &t).unwrap();
        assert!(lie.tensor().square_defects().is_empty());
        let h = lie.homology_dims().unwrap();
        // L = span(x) ⊕ span(y) in degrees 1 and 4
        assert_eq!(h.get(&1), Some(&1));
        assert_eq!(h.get(&4), Some(&1));
        assert_eq!(h.values().sum::<usize>(), 2);
    }

    #[test]
    fn dgl_view_is_a_dgl() {
        let t = Truncation::new(6, 3, 6).unwrap();
        let c = quillen_chains(&cpk(1), &t).unwrap();
        let lie = quillen_lie(&c, &t).unwrap();
        let (l, embed) = lie.to_dgl(&t).unwrap();
        assert_eq!(embed.len(), l.space().dim());
        assert!(l.is_dgl());
        assert!(check_jacobi(&l, &t).unwrap().passed());
    }

    #[test]
    fn abelian_one_generator_has_quadratic_differential_only() {
        let s = GradedSpace::new([("x", 1)]).unwrap();
        let t = Truncation::new(7, 3, 4).unwrap();
        let c = quillen_chains(&LInfAlgebra::new(s), &t).unwrap();
        let lie = quillen_lie(&c, &t).unwrap();
        let g = lie.tensor().generators();
        let w2 = g.require("~sx^sx").unwrap();
        let w1 = g.require("~sx").unwrap();
        let bracket = lie.bracket(&lie.generator(w1), &lie.generator(w1)).unwrap();
        // Δ(sx∧sx) = 2 sx⊗sx, so ∂ = ½·2·[~sx,~sx]
        assert_eq!(lie.tensor().generator_differential()[w2], bracket);
    }
}
