//! Universal enveloping A∞ algebras `U_t(L)` on `ΛL`, built by perturbing
//! the Koszul contraction of `UL` onto `ΛH`, and the recovery of `L` from
//! its envelope through primitives.

mod general;

pub use general::{envelope_general, envelope_morphism, QuillenData};

use crate::constructions::{symmetric_monomials, PBWAlgebra};
use crate::error::{Error, Result};
use crate::homotopy::{symmetric_canonical, AInfAlgebra, AInfMorphism, Antisymmetrized, LInfAlgebra};
use crate::linalg::{Echelon, Inserted};
use crate::multiop::{bounded_multisets, Operations, Truncation};
use crate::scalar::int;
use crate::space::{Element, GradedSpace, LinearMap};
use crate::transfer::{
    perturb_contraction, splitting_from_contraction, transfer_ainf, transfer_linf, ChainComplex,
    Contraction,
};

/// An A∞ structure on the graded-symmetric algebra `ΛH` together with the
/// data that produced it.
#[derive(Debug, Clone)]
pub struct Envelope {
    /// `H` with its transferred L∞ structure.
    pub lie: LInfAlgebra,
    /// `ΛH` monomials (letters joined with `.`) and their letter words.
    pub words: Vec<Vec<usize>>,
    pub structure: AInfAlgebra,
    /// `ι`: `H` onto the length-one monomials.
    pub inclusion: LinearMap,
    /// The source DGL, on the adapted basis `B ⊕ dB ⊕ C`.
    pub adapted: LInfAlgebra,
    /// The classical envelope of `adapted`.
    pub pbw: PBWAlgebra,
    /// Perturbed contraction of `UL` onto `ΛH`.
    pub contraction: Contraction,
    /// The A∞ quasi-isomorphism `ΛH → UL`.
    pub embedding: AInfMorphism,
    /// Whether `ι ∘ K_L = G ∘ ι` holds on `L ⊆ UL`.
    pub homotopy_compatible: bool,
    /// Contraction of `L` onto `H` the envelope was built from, on the
    /// adapted basis.
    pub lie_contraction: Contraction,
    /// The adapted letters in the coordinates of the source DGL.
    pub adapted_basis: Vec<Element>,
    /// Set when the envelope was built through `ℒ𝒞(L)`.
    pub quillen: Option<Box<QuillenData>>,
}

impl Envelope {
    pub fn space(&self) -> &GradedSpace {
        self.structure.space()
    }

    /// Length-one monomial of a letter of `H`.
    pub fn letter(&self, h: usize) -> Element {
        self.inclusion.column(h).clone()
    }
}

fn coordinates(ech: &Echelon, v: &Element) -> Result<Element> {
    let (rem, combo) = ech.reduce(v);
    if !rem.is_zero() {
        return Err(Error::RankDeficiency("element outside the adapted basis".into()));
    }
    Ok(combo)
}

/// The adapted algebra, its contraction, the `H` index of each basis vector
/// and the basis vectors in old coordinates.
type Adapted = (LInfAlgebra, Contraction, Vec<Option<usize>>, Vec<Element>);

/// Rewrites `L` and its contraction on the basis `B ⊕ dB ⊕ C`, naming the
/// `C` vectors after `H` and the others `%b<k>`, `%d<k>`.
fn adapted_basis(
    l: &LInfAlgebra,
    c: &Contraction,
    t: &Truncation,
) -> Result<Adapted> {
    let s = splitting_from_contraction(c)?;
    let old = l.space();
    let mut items: Vec<(String, i64, (Element, Option<usize>))> = Vec::new();
    let deg = |v: &Element| v.degree(old).ok().flatten().unwrap_or(0);
    for (k, (b, db)) in s.b.iter().zip(&s.db).enumerate() {
        items.push((format!("%b{k}"), deg(b), (b.clone(), None)));
        items.push((format!("%d{k}"), deg(db), (db.clone(), None)));
    }
    for (h, v) in s.c.iter().enumerate() {
        items.push((c.small.space.name(h).to_string(), c.small.space.degree(h), (v.clone(), Some(h))));
    }
    // complete with basis vectors where the contraction is not exact
    let mut span = Echelon::new();
    for (_, _, (v, _)) in &items {
        span.insert(v, &Element::zero());
    }
    let mut extra = 0;
    for j in 0..old.dim() {
        if let Inserted::Pivot(_) = span.insert(&Element::basis(j), &Element::zero()) {
            items.push((format!("%t{extra}"), old.degree(j), (Element::basis(j), None)));
            extra += 1;
        }
    }
    let (space, payload) = GradedSpace::with_payload(items)?;
    let mut ech = Echelon::new();
    for (j, (v, _)) in payload.iter().enumerate() {
        ech.insert(v, &Element::basis(j));
    }
    let to_new = |v: &Element| coordinates(&ech, v);
    let mut adapted = LInfAlgebra::new(space.clone());
    for (a, (v, _)) in payload.iter().enumerate() {
        adapted.set(vec![a], to_new(&l.op(1, &[v])?)?)?;
    }
    for a in 0..space.dim() {
        for b in a..space.dim() {
            if space.degree(a) + space.degree(b) > t.max_degree {
                continue;
            }
            let v = l.op(2, &[&payload[a].0, &payload[b].0])?;
            adapted.set(vec![a, b], to_new(&v)?)?;
        }
    }
    let n = space.dim();
    let basis_change = |m: &LinearMap| -> Result<Vec<Element>> {
        (0..n).map(|j| Ok(m.apply(&payload[j].0))).collect()
    };
    let d = LinearMap::new(-1, (0..n).map(|a| adapted.op_basis(1, &[a])).collect::<Result<_>>()?);
    let k_cols = basis_change(&c.k)?
        .iter()
        .map(to_new)
        .collect::<Result<Vec<_>>>()?;
    let q_cols = basis_change(&c.q)?;
    let i_cols = (0..c.small.space.dim())
        .map(|h| to_new(c.i.column(h)))
        .collect::<Result<Vec<_>>>()?;
    let mut lc = Contraction::new(
        ChainComplex::new(space, d)?,
        c.small.clone(),
        LinearMap::new(0, i_cols),
        LinearMap::new(0, q_cols),
        LinearMap::new(1, k_cols),
    )?;
    lc.exact_below = c.exact_below;
    lc.verify()?;
    let h_of: Vec<Option<usize>> = payload.iter().map(|(_, h)| *h).collect();
    let basis: Vec<Element> = payload.iter().map(|(v, _)| v.clone()).collect();
    Ok((adapted, lc, h_of, basis))
}

/// Builds `U_t(L)` for a DGL `L` with a contraction onto `H` (zero
/// differential on `H`, degrees ≥ 1), and checks that the transferred
/// brackets on `H` are the antisymmetrized products on length-one
/// monomials.
pub fn envelope_of_dgl(l: &LInfAlgebra, c: &Contraction, t: &Truncation) -> Result<Envelope> {
    t.validate()?;
    if !l.is_dgl() {
        return Err(Error::Invalid("the source must be a DGL".into()));
    }
    if c.big.space != *l.space() {
        return Err(Error::Invalid("the contraction is not on the given algebra".into()));
    }
    c.verify()?;
    if let Some(m) = c.small.space.min_degree() {
        if m < 1 {
            return Err(Error::Unbounded(format!(
                "envelopes need H in degrees ≥ 1, found degree {m}"
            )));
        }
    }
    if !c.small.d.is_zero() {
        return Err(Error::Invalid("the small complex must have zero differential".into()));
    }
    if let Some(m) = c.small.space.max_degree() {
        if m > t.max_degree + 1 {
            return Err(Error::BoundOverflow {
                degree: m,
                context: "homology above the truncation degree".into(),
            });
        }
    }
    // one extra degree so that the Koszul homotopy of a top-degree monomial
    // stays in range
    let inner = Truncation {
        max_degree: t.max_degree + 1,
        ..*t
    };
    let (adapted, lie_contraction, h_of, adapted_basis) = adapted_basis(l, c, &inner)?;
    let letters = adapted.space().clone();
    let pbw = PBWAlgebra::new(adapted.clone(), &inner)?;
    let nb = pbw.space().dim();

    // d_Λ and the Koszul homotopy on Λ(B ⊕ dB) ⊗ ΛC
    let d_letters: Vec<Element> = (0..letters.dim())
        .map(|a| adapted.op_basis(1, &[a]))
        .collect::<Result<_>>()?;
    let d_lambda = pbw.commutative_derivation(&d_letters, -1)?;
    let mut kappa_letters = vec![Element::zero(); letters.dim()];
    let mut acyclic = vec![false; letters.dim()];
    for a in 0..letters.dim() {
        let name = letters.name(a);
        if let Some(k) = name.strip_prefix("%d") {
            let b = letters.require(&format!("%b{k}"))?;
            kappa_letters[a] = Element::basis(b);
        }
        acyclic[a] = h_of[a].is_none();
    }
    let kappa = pbw.commutative_derivation_below(&kappa_letters, 1, Some(inner.max_degree))?;

    let h_space = c.small.space.clone();
    let (lambda_h, h_words) = symmetric_monomials(&h_space, inner.max_degree)?;
    let letter_of_h: Vec<usize> = {
        let mut v = vec![0; h_space.dim()];
        for (a, h) in h_of.iter().enumerate() {
            if let Some(h) = h {
                v[*h] = a;
            }
        }
        v
    };
    let mut i_cols = Vec::with_capacity(h_words.len());
    let mut h_index = std::collections::HashMap::new();
    for (m, w) in h_words.iter().enumerate() {
        let lw: Vec<usize> = w.iter().map(|&h| letter_of_h[h]).collect();
        let (sorted, e) = symmetric_canonical(&letters, &lw)
            .ok_or_else(|| Error::Invalid("repeated odd letter".into()))?;
        let u = pbw.word_index(&sorted).ok_or_else(|| Error::BoundOverflow {
            degree: lambda_h.degree(m),
            context: "envelope monomial".into(),
        })?;
        i_cols.push(Element::term(u, int(e)));
        h_index.insert(u, (m, int(e)));
    }
    let mut q_cols = Vec::with_capacity(nb);
    let mut k_cols = Vec::with_capacity(nb);
    for (u, w) in pbw.words().iter().enumerate() {
        let n = w.iter().filter(|&&a| acyclic[a]).count();
        if n == 0 {
            let (m, e) = &h_index[&u];
            q_cols.push(Element::term(*m, e.clone()));
            k_cols.push(Element::zero());
        } else {
            q_cols.push(Element::zero());
            k_cols.push(kappa.column(u).scaled(&-int(n as i64).recip()));
        }
    }
    let base = Contraction::new(
        ChainComplex::new(pbw.space().clone(), d_lambda.clone())?,
        ChainComplex::trivial(lambda_h.clone()),
        LinearMap::new(0, i_cols),
        LinearMap::new(0, q_cols),
        LinearMap::new(1, k_cols),
    )?
    .with_exact_below(inner.max_degree)
    .normalized();
    base.verify()?;

    let perturbation = pbw.differential().minus(&d_lambda);
    let contraction = perturb_contraction(&base, &perturbation, nb + 1)?;
    let (structure, embedding) = transfer_ainf(&contraction, &pbw, t)?;

    let inclusion = LinearMap::new(
        0,
        (0..h_space.dim())
            .map(|h| Element::basis(h_words.iter().position(|w| w == &vec![h]).unwrap()))
            .collect(),
    );
    let (lie, _) = transfer_linf(&lie_contraction, &adapted, t)?;

    // ι K_L = G ι on L ⊆ UL
    let mut homotopy_compatible = true;
    for a in 0..letters.dim() {
        if letters.degree(a) >= t.max_degree {
            continue;
        }
        let lhs = lie_contraction
            .k
            .column(a)
            .map_linear(|b| pbw.letter(b));
        let rhs = contraction.k.apply(&pbw.letter(a));
        if lhs != rhs {
            homotopy_compatible = false;
            break;
        }
    }

    let e = Envelope {
        lie,
        words: h_words,
        structure,
        inclusion,
        adapted,
        pbw,
        contraction,
        embedding,
        homotopy_compatible,
        lie_contraction,
        adapted_basis,
        quillen: None,
    };
    check_embedding_identity(&e, t)?;
    Ok(e)
}

/// `ι ℓ_n(x) = Σ_σ χ(σ) m_n(x_σ)` on every in-bound tuple of letters.
fn check_embedding_identity(e: &Envelope, t: &Truncation) -> Result<()> {
    let h = e.lie.space();
    let anti = Antisymmetrized::new(&e.structure);
    for n in 1..=t.max_arity {
        for x in bounded_multisets(h, n, n as i64 - 2, t.max_degree) {
            let lhs = e.lie.op_basis(n, &x)?.map_linear(|y| e.letter(y));
            let letters: Vec<Element> = x.iter().map(|&y| e.letter(y)).collect();
            let refs: Vec<&Element> = letters.iter().collect();
            let mut residual = anti.op(n, &refs)?;
            residual.sub(&lhs);
            if !residual.is_zero() {
                let names: Vec<&str> = x.iter().map(|&y| h.name(y)).collect();
                return Err(Error::IdentityViolation(format!(
                    "ι ℓ_{n}({}) differs from the antisymmetrized m_{n} by {}",
                    names.join(","),
                    residual.format(e.space())
                )));
            }
        }
    }
    Ok(())
}

/// Recovers the L∞ structure on `H` from an envelope: antisymmetrize each
/// `m_n` on length-one monomials and read off the length-one result.
pub fn primitives_linf(e: &Envelope, t: &Truncation) -> Result<LInfAlgebra> {
    let h = e.lie.space();
    let anti = Antisymmetrized::new(&e.structure);
    let length_one: std::collections::HashMap<usize, usize> = (0..h.dim())
        .map(|y| (e.letter(y).leading().unwrap().0, y))
        .collect();
    let mut out = LInfAlgebra::new(h.clone());
    for n in 1..=t.max_arity {
        for x in bounded_multisets(h, n, n as i64 - 2, t.max_degree) {
            let letters: Vec<Element> = x.iter().map(|&y| e.letter(y)).collect();
            let refs: Vec<&Element> = letters.iter().collect();
            let v = anti.op(n, &refs)?;
            let mut image = Element::zero();
            for (m, c) in v.terms() {
                let Some(&y) = length_one.get(&m) else {
                    return Err(Error::ImageEscape(format!(
                        "m_{n} on ({}) has a component on {}",
                        x.iter().map(|&y| h.name(y)).collect::<Vec<_>>().join(","),
                        e.space().name(m)
                    )));
                };
                image.add_term(y, c.clone());
            }
            out.set(x, image)?;
        }
    }
    Ok(out)
}
