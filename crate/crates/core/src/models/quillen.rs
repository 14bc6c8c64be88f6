//! Quillen models `(𝕃(s⁻¹Λ⁺sL), ∂₁ + ∂₂)` read off an envelope.

use std::collections::BTreeMap;

use crate::constructions::{quillen_chains, quillen_lie, FreeLie};
use crate::envelope::{envelope_general, primitives_linf, Envelope};
use crate::error::{Error, Result};
use crate::homotopy::{symmetric_canonical, Antisymmetrized, DGCoalgebra, LInfAlgebra};
use crate::multiop::{decalage_sign, Operations, Truncation};
use crate::perm::koszul_sign_unchecked;
use crate::scalar::{int, sign};
use crate::space::Element;

/// The free DGL on the desuspended chain words of the primitives of an
/// envelope. Generator `g` of `lie` is the desuspension of chain word `g`.
#[derive(Debug, Clone)]
pub struct QuillenModel {
    /// `L` with the antisymmetrized products of the envelope.
    pub source: LInfAlgebra,
    pub chains: DGCoalgebra,
    pub lie: FreeLie,
    /// `∂₁` on generators, in generator coordinates.
    pub linear_part: Vec<Element>,
}

impl QuillenModel {
    /// Basis tensors `u` of `𝕃` with `∂²u ≠ 0`.
    pub fn square_defects(&self) -> Vec<usize> {
        self.lie.tensor().square_defects()
    }

    /// Homology dimensions in degrees below the top of the model.
    pub fn homology_dims(&self) -> Result<BTreeMap<i64, usize>> {
        self.lie.homology_dims()
    }

    /// Degrees `< top` where the homology does not have the dimension of
    /// `L`, as `(degree, homology, dim L)`.
    pub fn homology_mismatches(&self) -> Result<Vec<(i64, usize, usize)>> {
        let h = self.homology_dims()?;
        let top = self.lie.tensor().max_degree();
        let l = self.source.space();
        Ok((1..top)
            .filter_map(|d| {
                let a = h.get(&d).copied().unwrap_or(0);
                let b = l.dim_in_degree(d);
                (a != b).then_some((d, a, b))
            })
            .collect())
    }
}

/// The Quillen model of a minimal L∞ algebra through its envelope.
pub fn quillen_model(l: &LInfAlgebra, t: &Truncation) -> Result<QuillenModel> {
    let e = envelope_general(l, t, None)?;
    quillen_model_of(&e, t)
}

/// `∂₁(s⁻¹(sx₁∧…∧sx_p)) = −Σ_k Σ_{i₁<…<i_k} ε · s⁻¹(s Σ_σ χ(σ) m_k(x_{i_σ(1)},…) ∧ sx_rest)`
/// where `ε` is the Koszul sign of pulling the selected letters to the front
/// times the décalage sign of the selected degrees. This is compared with
/// the linear part of `ℒ𝒞` of the primitives; `∂₂` is the usual quadratic
/// part from the unshuffle coproduct. Homology is exact below
/// `t.max_degree`.
pub fn quillen_model_of(e: &Envelope, t: &Truncation) -> Result<QuillenModel> {
    let source = primitives_linf(e, t)?;
    let chains_t = Truncation {
        max_degree: t.max_degree + 1,
        max_arity: t.max_arity,
        max_weight: t.max_weight.max(t.max_degree as usize + 1),
    };
    let lie_t = Truncation {
        max_degree: t.max_degree,
        ..chains_t
    };
    let chains = quillen_chains(&source, &chains_t)?;
    let lie = quillen_lie(&chains, &lie_t)?;

    let linear_part = linear_part_from_products(e, &chains, t)?;
    let tensor = lie.tensor();
    for (g, expected) in linear_part.iter().enumerate() {
        let mut got = Element::zero();
        for (w, c) in tensor.generator_differential()[g].terms() {
            if let [h] = tensor.words()[w].as_slice() {
                got.add_term(*h, c.clone());
            }
        }
        if &got != expected {
            return Err(Error::IdentityViolation(format!(
                "∂₁ on {} disagrees with the chains of the primitives",
                tensor.generators().name(g)
            )));
        }
    }
    Ok(QuillenModel {
        source,
        chains,
        lie,
        linear_part,
    })
}

fn linear_part_from_products(e: &Envelope, chains: &DGCoalgebra, t: &Truncation) -> Result<Vec<Element>> {
    let h = e.lie.space();
    let letters = chains.letters();
    let anti = Antisymmetrized::new(&e.structure);
    let as_letter: BTreeMap<usize, usize> = (0..h.dim())
        .filter_map(|y| e.letter(y).leading().map(|(m, _)| (m, y)))
        .collect();
    let mut out = Vec::with_capacity(chains.words().len());
    for word in chains.words() {
        let p = word.len();
        let shifted: Vec<i64> = word.iter().map(|&l| letters.degree(l)).collect();
        let mut v = Element::zero();
        for k in 1..=p.min(t.max_arity) {
            for sel in crate::constructions::combinations(p, k) {
                let xs: Vec<usize> = sel.iter().map(|&i| word[i]).collect();
                let base: Vec<i64> = xs.iter().map(|&x| h.degree(x)).collect();
                if base.iter().sum::<i64>() + k as i64 - 2 > t.max_degree {
                    continue;
                }
                let args: Vec<Element> = xs.iter().map(|&x| e.letter(x)).collect();
                let refs: Vec<&Element> = args.iter().collect();
                let value = anti.op(k, &refs)?;
                if value.is_zero() {
                    continue;
                }
                let mut order = sel.clone();
                order.extend((0..p).filter(|i| !sel.contains(i)));
                let s = -sign(decalage_sign(&base)) * int(koszul_sign_unchecked(&order, &shifted));
                let rest: Vec<usize> = order[k..].iter().map(|&i| word[i]).collect();
                for (m, c) in value.terms() {
                    let y = *as_letter.get(&m).ok_or_else(|| {
                        Error::ImageEscape(format!("m_{k} leaves the primitives on {}", e.space().name(m)))
                    })?;
                    let mut nw = vec![y];
                    nw.extend_from_slice(&rest);
                    if let Some((sorted, sg)) = symmetric_canonical(letters, &nw) {
                        let idx = chains.word_index(&sorted).ok_or_else(|| Error::BoundOverflow {
                            degree: sorted.iter().map(|&l| letters.degree(l)).sum(),
                            context: "Quillen model ∂₁".into(),
                        })?;
                        v.add_term(idx, c * &s * int(sg));
                    }
                }
            }
        }
        out.push(v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{example, Example};

    #[test]
    fn cp2_quillen_model() {
        let t = Truncation::new(9, 5, 10).unwrap();
        let q = quillen_model(&example(&Example::Cpk(2)).unwrap(), &t).unwrap();
        assert!(q.square_defects().is_empty());
        assert!(q.homology_mismatches().unwrap().is_empty());
        let h = q.homology_dims().unwrap();
        assert_eq!(h.get(&1), Some(&1));
        assert_eq!(h.get(&4), Some(&1));
        assert!(q.linear_part.iter().any(|v| !v.is_zero()));
    }

    #[test]
    fn abelian_quillen_model_is_purely_quadratic() {
        let t = Truncation::new(7, 4, 8).unwrap();
        let q = quillen_model(&example(&Example::EmProduct(vec![2, 5])).unwrap(), &t).unwrap();
        assert!(q.linear_part.iter().all(Element::is_zero));
        assert!(q.square_defects().is_empty());
        assert!(q.homology_mismatches().unwrap().is_empty());
    }

    #[test]
    fn one_odd_generator() {
        // x of degree 1: generators s⁻¹(sx)^w in degrees 2w − 1
        let t = Truncation::new(6, 4, 8).unwrap();
        let q = quillen_model(&example(&Example::EmProduct(vec![2])).unwrap(), &t).unwrap();
        let gens = q.lie.tensor().generators();
        let degrees: Vec<i64> = (0..gens.dim()).map(|g| gens.degree(g)).collect();
        assert_eq!(degrees, vec![1, 3, 5]);
        assert!(q.linear_part.iter().all(Element::is_zero));
        let h = q.homology_dims().unwrap();
        assert_eq!(h.into_iter().collect::<Vec<_>>(), vec![(1, 1)]);
    }
}
