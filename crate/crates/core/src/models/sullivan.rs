//! Sullivan models `(ΛV, d)` with `V = (sL)^∨`, read off an envelope.

use crate::constructions::PBWAlgebra;
use crate::envelope::{primitives_linf, Envelope};
use crate::error::{Error, Result};
use crate::homotopy::LInfAlgebra;
use crate::multiop::{bounded_multisets, Operations, Truncation};
use crate::scalar::{factorial, int, sign};
use crate::space::{Element, GradedSpace, LinearMap};

/// A free graded-commutative algebra with a differential given on
/// generators. Degrees are cohomological: the generator dual to `sx` has
/// degree `|x| + 1` and `d` raises degree by one.
#[derive(Debug, Clone)]
pub struct SullivanModel {
    pub generators: GradedSpace,
    /// Monomials in the generators (names joined with `.`).
    pub algebra: PBWAlgebra,
    /// `d` on each generator, in monomial coordinates.
    pub on_generators: Vec<Element>,
    /// `d` on every monomial of degree below the top of `algebra`.
    pub differential: LinearMap,
}

impl SullivanModel {
    pub fn space(&self) -> &GradedSpace {
        self.algebra.space()
    }

    /// Monomials `u` with `d²u ≠ 0`, among those where `d²` is computed.
    pub fn square_defects(&self) -> Vec<usize> {
        let d = &self.differential;
        (0..d.source_dim())
            .filter(|&u| !d.apply(d.column(u)).is_zero())
            .collect()
    }

    /// `d` on generator `g` as text, e.g. `d(v_y) = -1/36 v_x.v_x.v_x`.
    pub fn format_generator(&self, g: usize) -> String {
        let v = &self.on_generators[g];
        let rhs = if v.is_zero() {
            "0".to_string()
        } else {
            v.format(self.space())
        };
        format!("d({}) = {rhs}", self.generators.name(g))
    }
}

/// `⟨dₙv, sx₁∧…∧sxₙ⟩ = ε Σ_σ χ(σ) ⟨v, s mₙ(x_σ(1),…,x_σ(n))⟩` with `ε` the
/// parity of `Σ_{j<n} (n−j)|x_j|`. A monomial `v^α` pairs with the word
/// `(sx)^α` to `α!`, the pairing dual to the unshuffle coproduct, so
/// `dₙv = Σ_α ⟨dₙv, (sx)^α⟩/α! · v^α` over sorted tuples.
///
/// Only tuples with `mₙ` inside `t` are read, which covers every generator
/// whose dual has degree at most `t.max_degree`.
pub fn sullivan_model(e: &Envelope, t: &Truncation) -> Result<SullivanModel> {
    let prim = primitives_linf(e, t)?;
    sullivan_from_pairing(&prim, t)
}

/// The same extraction from an L∞ algebra already known to be the
/// antisymmetrization of the `mₙ` on `L`.
pub fn sullivan_from_pairing(prim: &LInfAlgebra, t: &Truncation) -> Result<SullivanModel> {
    let l = prim.space();
    if let Some(m) = l.min_degree() {
        if m < 1 {
            return Err(Error::Unbounded(format!(
                "Sullivan models need degrees ≥ 1, found {m}"
            )));
        }
    }
    let generators = GradedSpace::new(l.basis().map(|(_, n, d)| (format!("v_{n}"), d + 1)))?;
    let dual: Vec<usize> = (0..l.dim())
        .map(|x| generators.require(&format!("v_{}", l.name(x))))
        .collect::<Result<_>>()?;
    let top = generators.max_degree().unwrap_or(0) + 2;
    let algebra = PBWAlgebra::new(
        LInfAlgebra::new(generators.clone()),
        &Truncation {
            max_degree: top.max(1),
            ..*t
        },
    )?;

    let mut on_generators = vec![Element::zero(); generators.dim()];
    for n in 1..=t.max_arity {
        for x in bounded_multisets(l, n, n as i64 - 2, t.max_degree) {
            let value = prim.op_basis(n, &x)?;
            if value.is_zero() {
                continue;
            }
            let degrees: Vec<i64> = x.iter().map(|&i| l.degree(i)).collect();
            let eps: i64 = (0..n - 1).map(|j| (n - 1 - j) as i64 * degrees[j]).sum();
            let mut alpha = int(1);
            let mut run = 1;
            for j in 1..=n {
                if j < n && x[j] == x[j - 1] {
                    run += 1;
                } else {
                    alpha *= factorial(run);
                    run = 1;
                }
            }
            let word: Vec<usize> = x.iter().map(|&i| dual[i]).collect();
            let monomial = algebra.normal_form(&word)?;
            if monomial.is_zero() {
                continue;
            }
            let scale = sign(eps) / alpha;
            for (y, c) in value.terms() {
                on_generators[dual[y]].add_scaled(&monomial, &(c * &scale));
            }
        }
    }
    let differential = derivation(&algebra, &on_generators, top - 1)?;
    Ok(SullivanModel {
        generators,
        algebra,
        on_generators,
        differential,
    })
}

/// The degree-one derivation of the monomial algebra extending
/// `on_generators`, on monomials of degree below `below`.
fn derivation(algebra: &PBWAlgebra, on_generators: &[Element], below: i64) -> Result<LinearMap> {
    let gens = algebra.lie().space();
    let mut cols = Vec::with_capacity(algebra.words().len());
    for (u, word) in algebra.words().iter().enumerate() {
        let mut out = Element::zero();
        if algebra.space().degree(u) < below {
            let mut before = 0;
            for (p, &g) in word.iter().enumerate() {
                let mut term = on_generators[g].clone();
                if !term.is_zero() {
                    if p > 0 {
                        term = algebra.mul(&algebra.normal_form(&word[..p])?, &term)?;
                    }
                    if p + 1 < word.len() {
                        term = algebra.mul(&term, &algebra.normal_form(&word[p + 1..])?)?;
                    }
                    out.add_scaled(&term, &sign(before));
                }
                before += gens.degree(g);
            }
        }
        cols.push(out);
    }
    Ok(LinearMap::new(1, cols))
}
