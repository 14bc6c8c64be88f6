//! Truncated tensor algebras `T⁺(V)` with a derivation differential.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::multiop::{bounded_tuples, Operations, Truncation};
use crate::scalar::sign;
use crate::space::{Element, GradedSpace, LinearMap};

/// Non-unital tensor algebra on a positively graded space, spanned by the
/// words of degree `≤ max_degree`. Words are named by joining letter names
/// with `.`.
#[derive(Debug, Clone)]
pub struct TensorAlgebra {
    generators: GradedSpace,
    space: GradedSpace,
    words: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    max_degree: i64,
    generator_diff: Vec<Element>,
    diff: LinearMap,
}

impl TensorAlgebra {
    /// Every generator must have degree `≥ 1`, so the word basis in each
    /// degree is finite and closed under the product below `max_degree`.
    pub fn new(generators: GradedSpace, t: &Truncation) -> Result<Self> {
        if let Some(m) = generators.min_degree() {
            if m < 1 {
                return Err(Error::Unbounded(format!(
                    "tensor algebra generators need degree ≥ 1, found {m}"
                )));
            }
        }
        let mut items = Vec::new();
        for len in 1..=t.max_degree.max(0) as usize {
            let tuples = bounded_tuples(&generators, len, 0, t.max_degree);
            if tuples.is_empty() {
                break;
            }
            for w in tuples {
                let name = w
                    .iter()
                    .map(|&i| generators.name(i))
                    .collect::<Vec<_>>()
                    .join(".");
                let deg = w.iter().map(|&i| generators.degree(i)).sum();
                items.push((name, deg, w));
            }
        }
        let (space, words) = GradedSpace::with_payload(items)?;
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let dim = space.dim();
        Ok(TensorAlgebra {
            generator_diff: vec![Element::zero(); generators.dim()],
            generators,
            space,
            words,
            index,
            max_degree: t.max_degree,
            diff: LinearMap::zero(dim, -1),
        })
    }

    pub fn generators(&self) -> &GradedSpace {
        &self.generators
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    pub fn word_index(&self, word: &[usize]) -> Option<usize> {
        self.index.get(word).copied()
    }

    /// The word consisting of one generator.
    pub fn generator(&self, g: usize) -> Element {
        Element::basis(self.index[&vec![g]])
    }

    pub fn max_degree(&self) -> i64 {
        self.max_degree
    }

    fn word_degree(&self, w: &[usize]) -> i64 {
        w.iter().map(|&i| self.generators.degree(i)).sum()
    }

    /// Concatenation of two basis words, or an error past the degree bound.
    pub fn concat_basis(&self, a: usize, b: usize) -> Result<Element> {
        let mut w = self.words[a].clone();
        w.extend_from_slice(&self.words[b]);
        match self.index.get(&w) {
            Some(&i) => Ok(Element::basis(i)),
            None => Err(Error::BoundOverflow {
                degree: self.word_degree(&w),
                context: "tensor algebra product".into(),
            }),
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element> {
        crate::multiop::expand_multilinear(&[a, b], |t| self.concat_basis(t[0], t[1]))
    }

    /// Graded commutator of homogeneous elements.
    pub fn bracket(&self, a: &Element, b: &Element) -> Result<Element> {
        let (Some(da), Some(db)) = (a.degree(&self.space)?, b.degree(&self.space)?) else {
            return Ok(Element::zero());
        };
        let mut out = self.mul(a, b)?;
        out.add_scaled(&self.mul(b, a)?, &-sign(da * db));
        Ok(out)
    }

    /// Sets the differential on generators and extends it as a derivation.
    pub fn set_differential(&mut self, on_generators: Vec<Element>) -> Result<()> {
        if on_generators.len() != self.generators.dim() {
            return Err(Error::LengthMismatch {
                expected: self.generators.dim(),
                got: on_generators.len(),
            });
        }
        for (g, v) in on_generators.iter().enumerate() {
            if let Some(d) = v.degree(&self.space)? {
                if d != self.generators.degree(g) - 1 {
                    return Err(Error::DegreeMismatch(format!(
                        "d({}) has degree {d}",
                        self.generators.name(g)
                    )));
                }
            }
        }
        self.generator_diff = on_generators;
        let mut cols = Vec::with_capacity(self.words.len());
        for w in 0..self.words.len() {
            cols.push(self.derivation_on_word(w)?);
        }
        self.diff = LinearMap::new(-1, cols);
        Ok(())
    }

    fn derivation_on_word(&self, w: usize) -> Result<Element> {
        let word = &self.words[w];
        let mut out = Element::zero();
        let mut before = 0i64;
        for (p, &g) in word.iter().enumerate() {
            let dg = &self.generator_diff[g];
            if !dg.is_zero() {
                for (m, c) in dg.terms() {
                    let mut nw = word[..p].to_vec();
                    nw.extend_from_slice(&self.words[m]);
                    nw.extend_from_slice(&word[p + 1..]);
                    let i = self.index.get(&nw).ok_or_else(|| Error::BoundOverflow {
                        degree: self.word_degree(&nw),
                        context: "tensor algebra differential".into(),
                    })?;
                    out.add_term(*i, c * sign(before));
                }
            }
            before += self.generators.degree(g);
        }
        Ok(out)
    }

    pub fn differential(&self) -> &LinearMap {
        &self.diff
    }

    pub fn generator_differential(&self) -> &[Element] {
        &self.generator_diff
    }

    /// Words on which `d ∘ d` does not vanish.
    pub fn square_defects(&self) -> Vec<usize> {
        (0..self.words.len())
            .filter(|&w| !self.diff.apply(self.diff.column(w)).is_zero())
            .collect()
    }
}

impl Operations for TensorAlgebra {
    fn space(&self) -> &GradedSpace {
        &self.space
    }

    fn top_arity(&self) -> usize {
        2
    }

    fn op_basis(&self, arity: usize, args: &[usize]) -> Result<Element> {
        match arity {
            1 => Ok(self.diff.column(args[0]).clone()),
            2 => self.concat_basis(args[0], args[1]),
            _ => Ok(Element::zero()),
        }
    }
}
