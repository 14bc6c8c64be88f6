//! The universal enveloping algebra of a DGL in PBW normal form.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::homotopy::{symmetric_canonical, LInfAlgebra};
use crate::multiop::{bounded_multisets, expand_multilinear, Operations, Truncation};
use crate::scalar::{int, q, sign};
use crate::space::{Element, GradedSpace, LinearMap};

/// `UL` on ordered monomials: non-decreasing words in the basis of `L`
/// with no repeated odd letter, of degree `≤ max_degree`. Monomials are
/// named by joining letter names with `.`.
#[derive(Debug, Clone)]
pub struct PBWAlgebra {
    lie: LInfAlgebra,
    space: GradedSpace,
    words: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    max_degree: i64,
    memo: RefCell<HashMap<Vec<usize>, Element>>,
    diff: LinearMap,
}

/// Graded-symmetric monomials in the letters of `letters` up to degree
/// `max_degree`, in basis order, with their names joined by `.`.
pub fn symmetric_monomials(
    letters: &GradedSpace,
    max_degree: i64,
) -> Result<(GradedSpace, Vec<Vec<usize>>)> {
    if let Some(m) = letters.min_degree() {
        if m < 1 {
            return Err(Error::Unbounded(format!(
                "monomials need letters of degree ≥ 1, found {m}"
            )));
        }
    }
    let mut items = Vec::new();
    for len in 1..=max_degree.max(0) as usize {
        let ws = bounded_multisets(letters, len, 0, max_degree);
        if ws.is_empty() {
            break;
        }
        for w in ws {
            if symmetric_canonical(letters, &w).is_none() {
                continue;
            }
            let name = w.iter().map(|&i| letters.name(i)).collect::<Vec<_>>().join(".");
            let deg = w.iter().map(|&i| letters.degree(i)).sum();
            items.push((name, deg, w));
        }
    }
    GradedSpace::with_payload(items)
}

impl PBWAlgebra {
    /// Builds `UL` for a DGL `L` concentrated in degrees `≥ 1`.
    pub fn new(lie: LInfAlgebra, t: &Truncation) -> Result<Self> {
        if !lie.is_dgl() {
            return Err(Error::Invalid(
                "the PBW envelope needs a DGL (no operations of arity ≥ 3)".into(),
            ));
        }
        let (space, words) = symmetric_monomials(lie.space(), t.max_degree)?;
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let mut a = PBWAlgebra {
            diff: LinearMap::zero(space.dim(), -1),
            lie,
            space,
            words,
            index,
            max_degree: t.max_degree,
            memo: RefCell::new(HashMap::new()),
        };
        let mut cols = Vec::with_capacity(a.words.len());
        for w in 0..a.words.len() {
            cols.push(a.word_differential(&a.words[w].clone())?);
        }
        a.diff = LinearMap::new(-1, cols);
        Ok(a)
    }

    pub fn lie(&self) -> &LInfAlgebra {
        &self.lie
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

    /// The length-one monomial of a basis element of `L`.
    pub fn letter(&self, i: usize) -> Element {
        Element::basis(self.index[&vec![i]])
    }

    pub fn differential(&self) -> &LinearMap {
        &self.diff
    }

    fn letter_degree(&self, i: usize) -> i64 {
        self.lie.space().degree(i)
    }

    fn is_odd(&self, i: usize) -> bool {
        self.letter_degree(i).rem_euclid(2) == 1
    }

    /// Normal form of an arbitrary word in the letters of `L`.
    pub fn normal_form(&self, word: &[usize]) -> Result<Element> {
        if word.is_empty() {
            return Err(Error::Invalid("the empty word is not in the augmentation ideal".into()));
        }
        let deg: i64 = word.iter().map(|&l| self.letter_degree(l)).sum();
        if deg > self.max_degree {
            return Err(Error::BoundOverflow {
                degree: deg,
                context: "PBW product".into(),
            });
        }
        if let Some(v) = self.memo.borrow().get(word) {
            return Ok(v.clone());
        }
        let v = self.straighten(word)?;
        self.memo.borrow_mut().insert(word.to_vec(), v.clone());
        Ok(v)
    }

    fn straighten(&self, word: &[usize]) -> Result<Element> {
        let first = word
            .windows(2)
            .position(|w| w[0] > w[1] || (w[0] == w[1] && self.is_odd(w[0])));
        let Some(p) = first else {
            return Ok(Element::basis(self.index[word]));
        };
        let (b, a) = (word[p], word[p + 1]);
        let mut out = Element::zero();
        let bracket = self.lie.op_basis(2, &[b, a])?;
        let factor = if a == b {
            // u a a v = ½ u [a,a] v for odd a
            q(1, 2)
        } else {
            let mut swapped = word.to_vec();
            swapped.swap(p, p + 1);
            let s = sign(self.letter_degree(a) * self.letter_degree(b));
            out.add_scaled(&self.normal_form(&swapped)?, &s);
            int(1)
        };
        for (c, coeff) in bracket.terms() {
            let mut shorter = word[..p].to_vec();
            shorter.push(c);
            shorter.extend_from_slice(&word[p + 2..]);
            out.add_scaled(&self.normal_form(&shorter)?, &(coeff * &factor));
        }
        Ok(out)
    }

    pub fn mul_basis(&self, u: usize, v: usize) -> Result<Element> {
        let mut w = self.words[u].clone();
        w.extend_from_slice(&self.words[v]);
        self.normal_form(&w)
    }

    pub fn mul(&self, u: &Element, v: &Element) -> Result<Element> {
        expand_multilinear(&[u, v], |t| self.mul_basis(t[0], t[1]))
    }

    fn word_differential(&self, word: &[usize]) -> Result<Element> {
        let mut out = Element::zero();
        let mut before = 0i64;
        for (p, &l) in word.iter().enumerate() {
            let dl = self.lie.op_basis(1, &[l])?;
            for (c, coeff) in dl.terms() {
                let mut w = word.to_vec();
                w[p] = c;
                out.add_scaled(&self.normal_form(&w)?, &(coeff * sign(before)));
            }
            before += self.letter_degree(l);
        }
        Ok(out)
    }

    /// Extends a map on letters (images in `L`, all of degree `degree`) to
    /// a derivation of the free graded-commutative algebra on the same
    /// monomial basis, ignoring brackets.
    pub fn commutative_derivation(&self, on_letters: &[Element], degree: i64) -> Result<LinearMap> {
        self.commutative_derivation_below(on_letters, degree, None)
    }

    /// As [`Self::commutative_derivation`], but zero on monomials of degree
    /// `≥ below`.
    pub fn commutative_derivation_below(
        &self,
        on_letters: &[Element],
        degree: i64,
        below: Option<i64>,
    ) -> Result<LinearMap> {
        let letters = self.lie.space();
        let mut cols = Vec::with_capacity(self.words.len());
        for (u, word) in self.words.iter().enumerate() {
            let mut out = Element::zero();
            if below.is_some_and(|b| self.space.degree(u) >= b) {
                cols.push(out);
                continue;
            }
            let mut before = 0i64;
            for (p, &l) in word.iter().enumerate() {
                for (c, coeff) in on_letters[l].terms() {
                    let mut w = word.to_vec();
                    w[p] = c;
                    if let Some((sorted, e)) = symmetric_canonical(letters, &w) {
                        let idx = self.index.get(&sorted).ok_or_else(|| Error::BoundOverflow {
                            degree: sorted.iter().map(|&i| letters.degree(i)).sum(),
                            context: "commutative derivation".into(),
                        })?;
                        out.add_term(*idx, coeff * sign(degree * before) * int(e));
                    }
                }
                before += letters.degree(l);
            }
            cols.push(out);
        }
        Ok(LinearMap::new(degree, cols))
    }
}

impl Operations for PBWAlgebra {
    fn space(&self) -> &GradedSpace {
        &self.space
    }

    fn top_arity(&self) -> usize {
        2
    }

    fn op_basis(&self, arity: usize, args: &[usize]) -> Result<Element> {
        match arity {
            1 => Ok(self.diff.column(args[0]).clone()),
            2 => self.mul_basis(args[0], args[1]),
            _ => Ok(Element::zero()),
        }
    }
}

/// The classical envelope `UL` of a DGL.
pub fn universal_envelope_dgl(lie: &LInfAlgebra, t: &Truncation) -> Result<PBWAlgebra> {
    PBWAlgebra::new(lie.clone(), t)
}

pub fn pbw_normal_form(word: &[usize], a: &PBWAlgebra) -> Result<Element> {
    a.normal_form(word)
}
