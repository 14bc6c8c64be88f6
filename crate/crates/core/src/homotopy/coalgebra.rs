//! Conilpotent DG coalgebras on tensor or graded-symmetric words, the bar
//! construction of an A∞ algebra and the cobar construction.

use std::collections::{BTreeMap, HashMap};

use crate::constructions::TensorAlgebra;
use crate::error::{Error, Result};
use crate::multiop::{bounded_multisets, bounded_tuples, decalage_sign, Operations, Truncation};
use crate::perm::{koszul_sign_unchecked, shuffles};
use crate::scalar::{int, sign, Q};
use crate::space::{Element, GradedSpace, LinearMap};

/// How words in the letters multiply out under the coproduct.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordKind {
    /// Plain sequences with deconcatenation.
    Tensor,
    /// Graded-symmetric words (sorted, odd letters not repeated) with the
    /// unshuffle coproduct.
    Symmetric,
}

/// An element of `C̄ ⊗ C̄` on pairs of word indices.
pub type TensorSquare = BTreeMap<(usize, usize), Q>;

/// A conilpotent DG coalgebra `C̄` (the cokernel of the coaugmentation)
/// spanned by the words of length `≤ max_weight` and degree `≤ max_degree`.
#[derive(Debug, Clone)]
pub struct DGCoalgebra {
    letters: GradedSpace,
    kind: WordKind,
    space: GradedSpace,
    words: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    delta: LinearMap,
    coproduct: Vec<Vec<(usize, usize, Q)>>,
}

/// Outcome of [`DGCoalgebra::check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoalgebraReport {
    pub square_zero: bool,
    pub coderivation: bool,
    pub coassociative: bool,
    pub cocommutative: bool,
}

impl CoalgebraReport {
    /// Every axiom of the coalgebra kind holds.
    pub fn passed(&self, kind: WordKind) -> bool {
        self.square_zero
            && self.coderivation
            && self.coassociative
            && (kind == WordKind::Tensor || self.cocommutative)
    }
}

/// Sorts a word of letters into graded-symmetric normal form. Returns the
/// sorted word and the Koszul sign, or `None` when an odd letter repeats.
pub fn symmetric_canonical(letters: &GradedSpace, word: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut order: Vec<usize> = (0..word.len()).collect();
    order.sort_by_key(|&p| word[p]);
    let sorted: Vec<usize> = order.iter().map(|&p| word[p]).collect();
    if sorted
        .windows(2)
        .any(|w| w[0] == w[1] && letters.degree(w[0]).rem_euclid(2) == 1)
    {
        return None;
    }
    let degrees: Vec<i64> = word.iter().map(|&l| letters.degree(l)).collect();
    Some((sorted, koszul_sign_unchecked(&order, &degrees)))
}

impl DGCoalgebra {
    /// Builds the word basis and reduced coproduct with zero codifferential.
    pub fn new(letters: GradedSpace, kind: WordKind, t: &Truncation) -> Result<Self> {
        t.validate()?;
        let sep = match kind {
            WordKind::Tensor => "|",
            WordKind::Symmetric => "^",
        };
        let mut items = Vec::new();
        for len in 1..=t.max_weight {
            let candidates = match kind {
                WordKind::Tensor => bounded_tuples(&letters, len, 0, t.max_degree),
                WordKind::Symmetric => bounded_multisets(&letters, len, 0, t.max_degree)
                    .into_iter()
                    .filter(|w| symmetric_canonical(&letters, w).is_some())
                    .collect(),
            };
            for w in candidates {
                let name = w.iter().map(|&i| letters.name(i)).collect::<Vec<_>>().join(sep);
                let deg = w.iter().map(|&i| letters.degree(i)).sum();
                items.push((name, deg, w));
            }
        }
        let (space, words) = GradedSpace::with_payload(items)?;
        let index: HashMap<Vec<usize>, usize> =
            words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let mut c = DGCoalgebra {
            delta: LinearMap::zero(space.dim(), -1),
            letters,
            kind,
            space,
            words,
            index,
            coproduct: Vec::new(),
        };
        c.coproduct = (0..c.words.len())
            .map(|w| c.compute_coproduct(w))
            .collect::<Result<_>>()?;
        Ok(c)
    }

    fn lookup(&self, word: &[usize]) -> Result<usize> {
        self.index.get(word).copied().ok_or_else(|| Error::BoundOverflow {
            degree: word.iter().map(|&l| self.letters.degree(l)).sum(),
            context: format!("word of length {} outside the coalgebra truncation", word.len()),
        })
    }

    fn compute_coproduct(&self, w: usize) -> Result<Vec<(usize, usize, Q)>> {
        let word = &self.words[w];
        let p = word.len();
        let mut out: TensorSquare = BTreeMap::new();
        match self.kind {
            WordKind::Tensor => {
                for cut in 1..p {
                    let a = self.lookup(&word[..cut])?;
                    let b = self.lookup(&word[cut..])?;
                    *out.entry((a, b)).or_insert_with(|| int(0)) += int(1);
                }
            }
            WordKind::Symmetric => {
                let degrees: Vec<i64> = word.iter().map(|&l| self.letters.degree(l)).collect();
                for cut in 1..p {
                    for s in shuffles(cut, p - cut) {
                        let permuted: Vec<usize> = s.images().iter().map(|&i| word[i]).collect();
                        let a = self.lookup(&permuted[..cut])?;
                        let b = self.lookup(&permuted[cut..])?;
                        let e = koszul_sign_unchecked(s.images(), &degrees);
                        *out.entry((a, b)).or_insert_with(|| int(0)) += int(e);
                    }
                }
            }
        }
        Ok(out
            .into_iter()
            .filter(|(_, c)| *c != int(0))
            .map(|((a, b), c)| (a, b, c))
            .collect())
    }

    pub fn letters(&self) -> &GradedSpace {
        &self.letters
    }

    pub fn kind(&self) -> WordKind {
        self.kind
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

    pub fn is_cocommutative(&self) -> bool {
        self.kind == WordKind::Symmetric
    }

    /// Conilpotent by construction: the coproduct strictly shortens words.
    pub fn is_conilpotent(&self) -> bool {
        true
    }

    pub fn codifferential(&self) -> &LinearMap {
        &self.delta
    }

    pub fn set_codifferential(&mut self, delta: LinearMap) -> Result<()> {
        if delta.source_dim() != self.space.dim() {
            return Err(Error::LengthMismatch {
                expected: self.space.dim(),
                got: delta.source_dim(),
            });
        }
        delta.check_degree(&self.space, &self.space)?;
        self.delta = delta;
        Ok(())
    }

    /// Reduced coproduct of a basis word as `(left, right, coefficient)`.
    pub fn coproduct(&self, w: usize) -> &[(usize, usize, Q)] {
        &self.coproduct[w]
    }

    pub fn coproduct_of(&self, v: &Element) -> TensorSquare {
        let mut out = TensorSquare::new();
        for (w, c) in v.terms() {
            for (a, b, k) in &self.coproduct[w] {
                *out.entry((*a, *b)).or_insert_with(|| int(0)) += c * k;
            }
        }
        out.retain(|_, c| *c != int(0));
        out
    }

    /// Checks `δ² = 0`, the coderivation rule, coassociativity and (for
    /// symmetric words) cocommutativity on every basis word.
    pub fn check(&self) -> CoalgebraReport {
        let n = self.words.len();
        let square_zero = (0..n).all(|w| self.delta.apply(self.delta.column(w)).is_zero());
        let coderivation = (0..n).all(|w| {
            let lhs = self.coproduct_of(self.delta.column(w));
            let mut rhs = TensorSquare::new();
            for (a, b, c) in &self.coproduct[w] {
                for (x, k) in self.delta.column(*a).terms() {
                    *rhs.entry((x, *b)).or_insert_with(|| int(0)) += c * k;
                }
                let s = sign(self.space.degree(*a));
                for (y, k) in self.delta.column(*b).terms() {
                    *rhs.entry((*a, y)).or_insert_with(|| int(0)) += c * k * &s;
                }
            }
            rhs.retain(|_, c| *c != int(0));
            lhs == rhs
        });
        let coassociative = (0..n).all(|w| {
            let mut left: BTreeMap<(usize, usize, usize), Q> = BTreeMap::new();
            let mut right: BTreeMap<(usize, usize, usize), Q> = BTreeMap::new();
            for (a, b, c) in &self.coproduct[w] {
                for (x, y, k) in &self.coproduct[*a] {
                    *left.entry((*x, *y, *b)).or_insert_with(|| int(0)) += c * k;
                }
                for (x, y, k) in &self.coproduct[*b] {
                    *right.entry((*a, *x, *y)).or_insert_with(|| int(0)) += c * k;
                }
            }
            left.retain(|_, c| *c != int(0));
            right.retain(|_, c| *c != int(0));
            left == right
        });
        let cocommutative = (0..n).all(|w| {
            let orig: TensorSquare = self.coproduct[w]
                .iter()
                .map(|(a, b, c)| ((*a, *b), c.clone()))
                .collect();
            let mut twisted = TensorSquare::new();
            for (a, b, c) in &self.coproduct[w] {
                let s = sign(self.space.degree(*a) * self.space.degree(*b));
                *twisted.entry((*b, *a)).or_insert_with(|| int(0)) += c * s;
            }
            twisted.retain(|_, c| *c != int(0));
            orig == twisted
        });
        CoalgebraReport {
            square_zero,
            coderivation,
            coassociative,
            cocommutative,
        }
    }
}

/// The bar construction `T⁺(sA)` with the codifferential assembled from
/// every `m_{k+1}`. Letters are named `s` + the basis name.
pub fn bar(ops: &impl Operations, t: &Truncation) -> Result<DGCoalgebra> {
    let space = ops.space();
    let letters = GradedSpace::new(space.basis().map(|(_, n, d)| (format!("s{n}"), d + 1)))?;
    // the shifted basis keeps the order of `space`, so letter i is sx_i
    let mut c = DGCoalgebra::new(letters, WordKind::Tensor, t)?;
    let top = ops.top_arity();
    let mut cols = Vec::with_capacity(c.words.len());
    for w in 0..c.words.len() {
        let word = c.words[w].clone();
        let shifted: Vec<i64> = word.iter().map(|&l| c.letters.degree(l)).collect();
        let p = word.len();
        let mut out = Element::zero();
        for k in 0..top.min(p) {
            for i in 0..p - k {
                let block = &word[i..=i + k];
                let value = ops.op_basis(k + 1, block)?;
                if value.is_zero() {
                    continue;
                }
                let before: i64 = shifted[..i].iter().sum();
                let base: Vec<i64> = block.iter().map(|&l| space.degree(l)).collect();
                let s = sign(1 + before + decalage_sign(&base));
                for (a, coeff) in value.terms() {
                    let mut nw = word[..i].to_vec();
                    nw.push(a);
                    nw.extend_from_slice(&word[i + k + 1..]);
                    let idx = c.lookup(&nw)?;
                    out.add_term(idx, coeff * &s);
                }
            }
        }
        cols.push(out);
    }
    c.set_codifferential(LinearMap::new(-1, cols))?;
    Ok(c)
}

/// The cobar construction: the tensor algebra on `s⁻¹C̄` with
/// `d(s⁻¹x) = −s⁻¹δx + Σ (−1)^{|x_i|} s⁻¹x_i ⊗ s⁻¹y_i`. Generators are named
/// `~` + the word name.
pub fn cobar(c: &DGCoalgebra, t: &Truncation) -> Result<TensorAlgebra> {
    if !c.is_conilpotent() {
        return Err(Error::NotConilpotent);
    }
    let gens = GradedSpace::new(
        c.space
            .basis()
            .map(|(_, n, d)| (format!("~{n}"), d - 1)),
    )?;
    let mut ta = TensorAlgebra::new(gens.clone(), t)?;
    // generator i of `gens` corresponds to word i of `c`
    let mut images = Vec::with_capacity(gens.dim());
    for w in 0..c.space.dim() {
        let mut v = Element::zero();
        for (x, k) in c.delta.column(w).terms() {
            v.add_term(ta.word_index(&[x]).expect("generator word"), -k.clone());
        }
        for (a, b, k) in c.coproduct(w) {
            let Some(idx) = ta.word_index(&[*a, *b]) else {
                return Err(Error::BoundOverflow {
                    degree: gens.degree(*a) + gens.degree(*b),
                    context: "cobar quadratic term".into(),
                });
            };
            v.add_term(idx, k * sign(c.space.degree(*a)));
        }
        images.push(v);
    }
    ta.set_differential(images)?;
    Ok(ta)
}
