//! Quillen chains `𝒞(L) = (Λ⁺sL, δ)` of an L∞ algebra.

use crate::error::Result;
use crate::homotopy::{symmetric_canonical, DGCoalgebra, LInfMorphism, WordKind};
use crate::multiop::{decalage_sign, Operations, Truncation};
use crate::perm::{compositions, koszul_sign_unchecked, multi_shuffles};
use crate::scalar::{factorial, int, sign, Q};
use crate::space::{Element, GradedSpace, LinearMap};

/// Position subsets of size `k` of `0..n`, increasing.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// The shifted letters `sL`, named `s` + the basis name. Letter `i` is
/// `s` applied to basis element `i`.
pub fn suspended_letters(space: &GradedSpace) -> Result<GradedSpace> {
    GradedSpace::new(space.basis().map(|(_, n, d)| (format!("s{n}"), d + 1)))
}

/// Builds `𝒞(L)`: graded-symmetric words in `sL` with the unshuffle
/// coproduct and the codifferential
/// `δ(sx_1∧…∧sx_p) = Σ_k Σ_{i_1<…<i_k} ε · sℓ_k(x_{i_1},…,x_{i_k}) ∧ sx_rest`,
/// where `ε` is the Koszul sign of pulling the selected letters to the
/// front times the décalage sign of `ℓ_k`.
pub fn quillen_chains(ops: &impl Operations, t: &Truncation) -> Result<DGCoalgebra> {
    let space = ops.space();
    let letters = suspended_letters(space)?;
    let mut c = DGCoalgebra::new(letters.clone(), WordKind::Symmetric, t)?;
    let top = ops.top_arity();
    let mut cols = Vec::with_capacity(c.words().len());
    for w in 0..c.words().len() {
        let word = c.words()[w].clone();
        let shifted: Vec<i64> = word.iter().map(|&l| letters.degree(l)).collect();
        let p = word.len();
        let mut out = Element::zero();
        for k in 1..=top.min(p) {
            for sel in combinations(p, k) {
                let selected: Vec<usize> = sel.iter().map(|&i| word[i]).collect();
                let value = ops.op_basis(k, &selected)?;
                if value.is_zero() {
                    continue;
                }
                let mut order = sel.clone();
                order.extend((0..p).filter(|i| !sel.contains(i)));
                let base: Vec<i64> = selected.iter().map(|&l| space.degree(l)).collect();
                let s = sign(decalage_sign(&base)) * int(koszul_sign_unchecked(&order, &shifted));
                let rest: Vec<usize> = order[k..].iter().map(|&i| word[i]).collect();
                for (a, coeff) in value.terms() {
                    let mut nw = vec![a];
                    nw.extend_from_slice(&rest);
                    if let Some((sorted, e)) = symmetric_canonical(&letters, &nw) {
                        let idx = c.word_index(&sorted).ok_or_else(|| crate::Error::BoundOverflow {
                            degree: sorted.iter().map(|&l| letters.degree(l)).sum(),
                            context: "chains differential".into(),
                        })?;
                        out.add_term(idx, coeff * &s * int(e));
                    }
                }
            }
        }
        cols.push(out);
    }
    c.set_codifferential(LinearMap::new(-1, cols))?;
    Ok(c)
}

/// The coalgebra map `𝒞(f): 𝒞(L) → 𝒞(L')` of an L∞ morphism, on the word
/// bases of the two chain coalgebras:
/// `sx_1∧…∧sx_p ↦ Σ_k 1/k! Σ ε f̃_{p_1}(…) ∧ … ∧ f̃_{p_k}(…)` over ordered
/// splittings into blocks, with `f̃_j = s f_j (s⁻¹)^{⊗j}` and `ε` the Koszul
/// sign of the shifted letters.
pub fn chains_morphism(f: &LInfMorphism, source: &DGCoalgebra, target: &DGCoalgebra) -> Result<LinearMap> {
    let base = f.source();
    let letters = source.letters();
    let tletters = target.letters();
    let mut cols = Vec::with_capacity(source.words().len());
    for word in source.words() {
        let p = word.len();
        let shifted: Vec<i64> = word.iter().map(|&l| letters.degree(l)).collect();
        let mut out = Element::zero();
        for k in 1..=p {
            let weight = factorial(k).recip();
            for parts in compositions(p, k) {
                for rho in multi_shuffles(&parts) {
                    let e = koszul_sign_unchecked(rho.images(), &shifted);
                    let xs: Vec<usize> = rho.images().iter().map(|&i| word[i]).collect();
                    // block images as lists of (letter, coefficient)
                    let mut images: Vec<Vec<(usize, Q)>> = Vec::with_capacity(k);
                    let mut start = 0;
                    for &len in &parts {
                        let block = &xs[start..start + len];
                        start += len;
                        let degrees: Vec<i64> = block.iter().map(|&x| base.degree(x)).collect();
                        let v = f.coeff_basis(block).scaled(&sign(decalage_sign(&degrees)));
                        images.push(v.terms().map(|(a, c)| (a, c.clone())).collect());
                    }
                    if images.iter().any(Vec::is_empty) {
                        continue;
                    }
                    let mut acc: Vec<(Vec<usize>, Q)> = vec![(Vec::new(), weight.clone() * int(e))];
                    for img in &images {
                        let mut next = Vec::with_capacity(acc.len() * img.len());
                        for (w, c) in &acc {
                            for (a, x) in img {
                                let mut nw = w.clone();
                                nw.push(*a);
                                next.push((nw, c * x));
                            }
                        }
                        acc = next;
                    }
                    for (w, c) in acc {
                        if let Some((sorted, s)) = symmetric_canonical(tletters, &w) {
                            let idx = target.word_index(&sorted).ok_or_else(|| crate::Error::BoundOverflow {
                                degree: sorted.iter().map(|&l| tletters.degree(l)).sum(),
                                context: "chains morphism".into(),
                            })?;
                            out.add_term(idx, c * int(s));
                        }
                    }
                }
            }
        }
        cols.push(out);
    }
    Ok(LinearMap::new(0, cols))
}
