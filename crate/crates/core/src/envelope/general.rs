//! Envelopes of general L∞ algebras through `ℒ𝒞(L)`, and envelopes of
//! morphisms.

use std::collections::HashMap;

use crate::constructions::{chains_morphism, quillen_chains, quillen_lie, FreeLie};
use crate::error::{Error, Result};
use crate::homotopy::{AInfMorphism, DGCoalgebra, LInfAlgebra, LInfMorphism};
use crate::linalg::Echelon;
use crate::multiop::{bounded_tuples, decalage_sign, Truncation};
use crate::perm::compositions;
use crate::scalar::sign;
use crate::space::{Element, GradedSpace, LinearMap};
use crate::transfer::{
    homology_contraction, underlying_complex, AInfProjection, ChainComplex, Contraction,
    ContractionOptions,
};

use super::{envelope_of_dgl, Envelope};

/// The Quillen-side data of an envelope built from `ℒ𝒞(L)`.
#[derive(Debug, Clone)]
pub struct QuillenData {
    pub source: LInfAlgebra,
    pub chains: DGCoalgebra,
    pub lie: FreeLie,
    /// `ℒ𝒞(L)` on its Lie basis, with the embedding of that basis into
    /// `Ω𝒞(L)`.
    pub dgl: LInfAlgebra,
    pub embed: Vec<Element>,
}

/// Keeps the small classes `keep` under new names, reordering bases as
/// needed; the result is exact below `top`.
fn relabel_small(c: &Contraction, keep: &[usize], names: Vec<String>, top: i64) -> Result<Contraction> {
    let old = &c.small.space;
    let items = keep
        .iter()
        .zip(names)
        .map(|(&h, n)| (n, old.degree(h), h))
        .collect();
    let (space, order) = GradedSpace::with_payload(items)?;
    let mut position = vec![None; old.dim()];
    for (p, &h) in order.iter().enumerate() {
        position[h] = Some(p);
    }
    let remap = |v: &Element| {
        let mut out = Element::zero();
        for (h, x) in v.terms() {
            if let Some(p) = position[h] {
                out.add_term(p, x.clone());
            }
        }
        out
    };
    let i = order.iter().map(|&h| c.i.column(h).clone()).collect();
    let d = order.iter().map(|&h| remap(c.small.d.column(h))).collect();
    let q = (0..c.q.source_dim()).map(|j| remap(c.q.column(j))).collect();
    let out = Contraction::new(
        c.big.clone(),
        ChainComplex::new(space, LinearMap::new(-1, d))?,
        LinearMap::new(0, i),
        LinearMap::new(0, q),
        c.k.clone(),
    )?
    .with_exact_below(top);
    out.verify()?;
    Ok(out)
}

/// Builds `U_t(L)` for a minimal L∞ algebra in degrees `≥ 1` through the
/// DGL `ℒ𝒞(L)` and a contraction of it onto `L`: either `contraction`, or
/// the homology contraction whose representatives are the generators
/// `s⁻¹sx`.
pub fn envelope_general(
    l: &LInfAlgebra,
    t: &Truncation,
    contraction: Option<&Contraction>,
) -> Result<Envelope> {
    t.validate()?;
    if let Some(m) = l.space().min_degree() {
        if m < 1 {
            return Err(Error::Unbounded(format!(
                "envelopes need degrees ≥ 1, found degree {m}"
            )));
        }
    }
    if !l.is_minimal() {
        return Err(Error::NotMinimal("ℓ₁ ≠ 0".into()));
    }
    // the envelope works one degree above `t`, and its contraction of
    // ℒ𝒞(L) needs one more so that homology there is not a truncation
    // artefact
    let top = t.max_degree + 2;
    let chains_t = Truncation {
        max_degree: top + 1,
        max_arity: t.max_arity,
        max_weight: t.max_weight.max((top + 1) as usize),
    };
    let lie_t = Truncation {
        max_degree: top,
        ..chains_t
    };
    let chains = quillen_chains(l, &chains_t)?;
    let lie = quillen_lie(&chains, &lie_t)?;
    let (dgl, embed) = lie.to_dgl(&lie_t)?;

    let c = match contraction {
        Some(c) => {
            if c.big.space != *dgl.space() {
                return Err(Error::Invalid("the contraction is not on ℒ𝒞(L)".into()));
            }
            c.clone()
        }
        None => {
            let preferred = l
                .space()
                .names()
                .iter()
                .filter_map(|n| dgl.space().index_of(&format!("~s{n}")))
                .map(Element::basis)
                .collect();
            let c = homology_contraction(
                &underlying_complex(&dgl)?,
                &ContractionOptions { preferred },
            )?;
            let mut keep = Vec::new();
            let mut names = Vec::new();
            for (h, name, deg) in c.small.space.basis() {
                if deg >= top {
                    continue;
                }
                match name.strip_prefix("~s").filter(|n| l.space().index_of(n).is_some()) {
                    Some(n) => {
                        keep.push(h);
                        names.push(n.to_string());
                    }
                    None => {
                        return Err(Error::Hypothesis(format!(
                            "ℒ𝒞(L) has homology outside L: {name} in degree {deg}"
                        )))
                    }
                }
            }
            relabel_small(&c, &keep, names, top)?
        }
    };
    let mut e = envelope_of_dgl(&dgl, &c, t)?;
    e.quillen = Some(Box::new(QuillenData {
        source: l.clone(),
        chains,
        lie,
        dgl,
        embed,
    }));
    Ok(e)
}

fn adapted_coordinates(e: &Envelope) -> Echelon {
    let mut ech = Echelon::new();
    for (a, v) in e.adapted_basis.iter().enumerate() {
        ech.insert(v, &Element::basis(a));
    }
    ech
}

/// `U_t(f)` for an L∞ morphism `f: L₁ → L₂` between the sources of two
/// envelopes built by [`envelope_general`]: the composite of the embedding
/// `ΛL₁ → Uℒ𝒞(L₁)`, the algebra map induced by `Ω𝒞(f)`, and the projection
/// `Uℒ𝒞(L₂) → ΛL₂`, tabulated within `t`.
pub fn envelope_morphism(
    f: &LInfMorphism,
    e1: &Envelope,
    e2: &Envelope,
    t: &Truncation,
) -> Result<AInfMorphism> {
    let (Some(q1), Some(q2)) = (&e1.quillen, &e2.quillen) else {
        return Err(Error::MissingProvenance(
            "both envelopes must come from envelope_general".into(),
        ));
    };
    if f.source() != q1.source.space() || f.target() != q2.source.space() {
        return Err(Error::Invalid("the morphism does not match the envelopes".into()));
    }
    // 𝒞(f) and Ω𝒞(f) on cobar generators
    let cf = chains_morphism(f, &q1.chains, &q2.chains)?;
    let t1 = q1.lie.tensor();
    let t2 = q2.lie.tensor();
    let on_generators: Vec<Element> = (0..t1.generators().dim())
        .map(|g| cf.column(g).map_linear(|w| t2.generator(w)))
        .collect();
    let omega = |v: &Element| -> Result<Element> {
        let mut out = Element::zero();
        for (w, c) in v.terms() {
            let mut acc: Option<Element> = None;
            for &g in &t1.words()[w] {
                let img = &on_generators[g];
                acc = Some(match acc {
                    None => img.clone(),
                    Some(a) => t2.mul(&a, img)?,
                });
            }
            if let Some(a) = acc {
                out.add_scaled(&a, c);
            }
        }
        Ok(out)
    };
    // the Lie map ℒ𝒞(f) on adapted letters
    let mut lie2 = Echelon::new();
    for (a, v) in q2.embed.iter().enumerate() {
        lie2.insert(v, &Element::basis(a));
    }
    let adapted2 = adapted_coordinates(e2);
    let letters1 = e1.adapted.space();
    let inner = t.max_degree + 1;
    let mut phi = Vec::with_capacity(letters1.dim());
    for (a, v) in e1.adapted_basis.iter().enumerate() {
        if letters1.degree(a) > inner {
            phi.push(Element::zero());
            continue;
        }
        let in_t1 = v.map_linear(|j| q1.embed[j].clone());
        let (rem, in_dgl2) = lie2.reduce(&omega(&in_t1)?);
        let (rem2, in_adapted2) = adapted2.reduce(&in_dgl2);
        if !rem.is_zero() || !rem2.is_zero() {
            return Err(Error::ImageEscape("Ω𝒞(f) left the Lie span".into()));
        }
        phi.push(in_adapted2.map_linear(|b| e2.pbw.letter(b)));
    }
    // the induced algebra map on PBW monomials
    let g = |u: usize| -> Result<Element> {
        let mut acc: Option<Element> = None;
        for &a in &e1.pbw.words()[u] {
            acc = Some(match acc {
                None => phi[a].clone(),
                Some(x) => e2.pbw.mul(&x, &phi[a])?,
            });
        }
        Ok(acc.unwrap_or_default())
    };
    let mut g_cache: HashMap<usize, Element> = HashMap::new();
    let mut g_apply = |v: &Element| -> Result<Element> {
        let mut out = Element::zero();
        for (u, c) in v.terms() {
            if let std::collections::hash_map::Entry::Vacant(e) = g_cache.entry(u) {
                e.insert(g(u)?);
            }
            out.add_scaled(&g_cache[&u], c);
        }
        Ok(out)
    };
    let p2 = AInfProjection::new(&e2.contraction, &e2.pbw);
    let s1 = e1.space();
    let mut out = AInfMorphism::new(s1.clone(), e2.space().clone());
    let mut h: HashMap<Vec<usize>, Element> = HashMap::new();
    for n in 1..=t.max_arity {
        for x in bounded_tuples(s1, n, n as i64 - 1, t.max_degree) {
            let degrees: Vec<i64> = x.iter().map(|&a| s1.degree(a)).collect();
            let mut value = Element::zero();
            for k in 1..=n {
                for parts in compositions(n, k) {
                    let mut args = Vec::with_capacity(k);
                    let mut out_degrees = Vec::with_capacity(k);
                    let mut e = decalage_sign(&degrees);
                    let mut start = 0;
                    for &len in &parts {
                        let block = &x[start..start + len];
                        let bd = &degrees[start..start + len];
                        start += len;
                        if !h.contains_key(block) {
                            let j = e1.embedding.coeff_basis(block);
                            h.insert(block.to_vec(), g_apply(&j)?);
                        }
                        args.push(h[block].clone());
                        out_degrees.push(bd.iter().sum::<i64>() + len as i64 - 1);
                        e += decalage_sign(bd);
                    }
                    if args.iter().any(Element::is_zero) {
                        continue;
                    }
                    e += decalage_sign(&out_degrees);
                    let refs: Vec<&Element> = args.iter().collect();
                    value.add_scaled(&p2.eval(&refs)?, &sign(e));
                }
            }
            if !value.is_zero() {
                out.set(x, value)?;
            }
        }
    }
    Ok(out)
}
