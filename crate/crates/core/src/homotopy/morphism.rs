use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{kernel_and_image, Echelon};
use crate::multiop::{
    bounded_multisets, bounded_tuples, decalage_sign, expand_multilinear, MultiOp, Operations,
    Truncation,
};
use crate::perm::{compositions, koszul_sign_unchecked, ordered_minima_shuffles, shuffles};
use crate::scalar::{int, sign};
use crate::space::{Element, GradedSpace, LinearMap};

use super::linf::skew_canonical;
use super::{IdentityReport, Violation};

/// Coefficients `f_k` of an A∞ morphism, each of degree `k − 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AInfMorphism {
    source: GradedSpace,
    target: GradedSpace,
    coeffs: BTreeMap<usize, MultiOp>,
}

/// Coefficients `f_k` of an L∞ morphism, graded skew, stored on
/// non-decreasing tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LInfMorphism {
    source: GradedSpace,
    target: GradedSpace,
    coeffs: BTreeMap<usize, MultiOp>,
}

fn insert_coeff(
    coeffs: &mut BTreeMap<usize, MultiOp>,
    source: &GradedSpace,
    target: &GradedSpace,
    inputs: Vec<usize>,
    output: Element,
) -> Result<()> {
    let k = inputs.len();
    if k == 0 {
        return Err(Error::Invalid("arity-0 coefficients are not allowed".into()));
    }
    let op = match coeffs.entry(k) {
        std::collections::btree_map::Entry::Occupied(o) => o.into_mut(),
        std::collections::btree_map::Entry::Vacant(v) => v.insert(MultiOp::new(k, k as i64 - 1)?),
    };
    op.set(source, target, inputs, output)?;
    if op.is_empty() {
        coeffs.remove(&k);
    }
    Ok(())
}

fn linear_part(map: &LinearMap, source: &GradedSpace, target: &GradedSpace) -> Result<BTreeMap<usize, MultiOp>> {
    if map.degree != 0 || map.source_dim() != source.dim() {
        return Err(Error::Invalid("linear part must be a degree-0 map on the source".into()));
    }
    let mut coeffs = BTreeMap::new();
    for (i, col) in map.columns.iter().enumerate() {
        insert_coeff(&mut coeffs, source, target, vec![i], col.clone())?;
    }
    Ok(coeffs)
}

macro_rules! morphism_common {
    ($t:ty) => {
        impl $t {
            pub fn new(source: GradedSpace, target: GradedSpace) -> Self {
                Self {
                    source,
                    target,
                    coeffs: BTreeMap::new(),
                }
            }

            /// The strict morphism with linear part `map`.
            pub fn strict(source: GradedSpace, target: GradedSpace, map: &LinearMap) -> Result<Self> {
                let coeffs = linear_part(map, &source, &target)?;
                Ok(Self {
                    source,
                    target,
                    coeffs,
                })
            }

            pub fn identity(space: GradedSpace) -> Self {
                let map = LinearMap::identity(space.dim());
                Self::strict(space.clone(), space, &map).expect("identity is valid")
            }

            pub fn source(&self) -> &GradedSpace {
                &self.source
            }

            pub fn target(&self) -> &GradedSpace {
                &self.target
            }

            pub fn is_strict(&self) -> bool {
                self.coeffs.keys().all(|&k| k == 1)
            }

            pub fn top_arity(&self) -> usize {
                self.coeffs.keys().next_back().copied().unwrap_or(0)
            }

            pub fn tables(&self) -> impl Iterator<Item = (usize, &MultiOp)> {
                self.coeffs.iter().map(|(&k, m)| (k, m))
            }

            /// `f_1` as a linear map.
            pub fn linear(&self) -> LinearMap {
                LinearMap::new(
                    0,
                    (0..self.source.dim())
                        .map(|i| self.coeff_basis(&[i]))
                        .collect(),
                )
            }

            pub fn coeff(&self, args: &[&Element]) -> Element {
                expand_multilinear(args, |t| Ok(self.coeff_basis(t))).expect("lookup is infallible")
            }
        }
    };
}

morphism_common!(AInfMorphism);
morphism_common!(LInfMorphism);

impl AInfMorphism {
    pub fn set(&mut self, inputs: Vec<usize>, output: Element) -> Result<()> {
        insert_coeff(&mut self.coeffs, &self.source, &self.target, inputs, output)
    }

    pub fn coeff_basis(&self, args: &[usize]) -> Element {
        self.coeffs
            .get(&args.len())
            .map(|m| m.eval_basis(args))
            .unwrap_or_default()
    }
}

impl LInfMorphism {
    pub fn set(&mut self, inputs: Vec<usize>, output: Element) -> Result<()> {
        match skew_canonical(&self.source, &inputs) {
            None if output.is_zero() => Ok(()),
            None => Err(Error::Invalid(
                "coefficient must vanish by skew symmetry".into(),
            )),
            Some((sorted, c)) => insert_coeff(
                &mut self.coeffs,
                &self.source,
                &self.target,
                sorted,
                output.scaled(&int(c)),
            ),
        }
    }

    pub fn coeff_basis(&self, args: &[usize]) -> Element {
        let Some(m) = self.coeffs.get(&args.len()) else {
            return Element::zero();
        };
        match skew_canonical(&self.source, args) {
            None => Element::zero(),
            Some((sorted, c)) => m.eval_basis(&sorted).scaled(&int(c)),
        }
    }
}

/// Morphism identity residuals plus classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismReport {
    pub identity: IdentityReport,
    pub strict: bool,
    /// Whether `f_1` induces an isomorphism on homology in every degree up to
    /// the truncation bound.
    pub quasi_isomorphism: bool,
}

impl MorphismReport {
    pub fn passed(&self) -> bool {
        self.identity.passed()
    }
}

fn differential(ops: &impl Operations, i: usize) -> Result<Element> {
    ops.op_basis(1, &[i])
}

/// Degreewise homology isomorphism test for `f_1` up to `max_degree`.
fn induces_homology_iso(
    src: &impl Operations,
    tgt: &impl Operations,
    f1: &LinearMap,
    max_degree: i64,
) -> Result<bool> {
    let (s, t) = (src.space(), tgt.space());
    let degrees: Vec<i64> = s
        .degrees_present()
        .chain(t.degrees_present())
        .filter(|&d| d <= max_degree)
        .collect();
    for d in degrees {
        let cycles = |ops: &dyn Fn(usize) -> Result<Element>, space: &GradedSpace| -> Result<Vec<Element>> {
            let mut cols = Vec::new();
            for i in space.in_degree(d) {
                cols.push((Element::basis(i), ops(i)?));
            }
            Ok(kernel_and_image(cols).0)
        };
        let boundaries = |ops: &dyn Fn(usize) -> Result<Element>, space: &GradedSpace| -> Result<Echelon> {
            let mut cols = Vec::new();
            for i in space.in_degree(d + 1) {
                cols.push((Element::basis(i), ops(i)?));
            }
            Ok(kernel_and_image(cols).1)
        };
        let ds = |i: usize| differential(src, i);
        let dt = |i: usize| differential(tgt, i);
        let zs = cycles(&ds, s)?;
        let bs = boundaries(&ds, s)?;
        let zt = cycles(&dt, t)?;
        let bt = boundaries(&dt, t)?;
        let hs = zs.len() - bs.rank();
        let ht = zt.len() - bt.rank();
        if hs != ht {
            return Ok(false);
        }
        let mut image = bt.clone();
        for z in &zs {
            image.insert(&f1.apply(z), &Element::zero());
        }
        if image.rank() - bt.rank() != ht {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks the A∞ morphism equation on every source tuple within bounds.
///
/// The equation is evaluated in its bar form: with `b_k = s m_k (s^{-1})^{⊗k}`
/// and `f̃_k = s f_k (s^{-1})^{⊗k}`, the coalgebra map induced by `f̃`
/// commutes with the bar codifferentials, that is
/// `Σ f̃_{r+1+t}(1^{⊗r} ⊗ b_s ⊗ 1^{⊗t}) = Σ b'_r(f̃_{i_1} ⊗ … ⊗ f̃_{i_r})`
/// with Koszul signs. This is the sign convention under which the bar
/// construction squares to zero exactly when the Stasheff identities hold.
pub fn check_ainf_morphism(
    f: &AInfMorphism,
    src: &impl Operations,
    tgt: &impl Operations,
    t: &Truncation,
) -> Result<MorphismReport> {
    let space = src.space();
    let mut report = IdentityReport::default();
    for i in 1..=t.max_arity {
        for tuple in bounded_tuples(space, i, i as i64 - 1, t.max_degree) {
            report.checked += 1;
            let residual = ainf_morphism_residual(f, src, tgt, &tuple)?;
            if !residual.is_zero() {
                report.violations.push(Violation {
                    arity: i,
                    tuple,
                    residual,
                });
            }
        }
    }
    let quasi_isomorphism = induces_homology_iso(src, tgt, &f.linear(), t.max_degree)?;
    Ok(MorphismReport {
        identity: report,
        strict: f.is_strict(),
        quasi_isomorphism,
    })
}

pub(crate) fn ainf_morphism_residual(
    f: &AInfMorphism,
    src: &impl Operations,
    tgt: &impl Operations,
    tuple: &[usize],
) -> Result<Element> {
    let space = src.space();
    let i = tuple.len();
    let degrees: Vec<i64> = tuple.iter().map(|&x| space.degree(x)).collect();
    let mut residual = Element::zero();
    for s in 1..=i.min(src.top_arity()) {
        for r in 0..=(i - s) {
            let block = &degrees[r..r + s];
            let inner = src.op_basis(s, &tuple[r..r + s])?;
            if inner.is_zero() {
                continue;
            }
            let inner_degree = block.iter().sum::<i64>() + s as i64 - 2;
            let mut outer_degrees = degrees[..r].to_vec();
            outer_degrees.push(inner_degree);
            outer_degrees.extend_from_slice(&degrees[r + s..]);
            let passed: i64 = degrees[..r].iter().map(|d| d + 1).sum();
            let e = passed + decalage_sign(block) + decalage_sign(&outer_degrees);
            let mut args: Vec<Element> = tuple[..r].iter().map(|&x| Element::basis(x)).collect();
            args.push(inner);
            args.extend(tuple[r + s..].iter().map(|&x| Element::basis(x)));
            let refs: Vec<&Element> = args.iter().collect();
            residual.add_scaled(&f.coeff(&refs), &sign(e));
        }
    }
    for r in 1..=i.min(tgt.top_arity()) {
        for comp in compositions(i, r) {
            let mut args = Vec::with_capacity(r);
            let mut out_degrees = Vec::with_capacity(r);
            let mut e = 0i64;
            let mut pos = 0;
            for &len in &comp {
                let block = &degrees[pos..pos + len];
                args.push(f.coeff_basis(&tuple[pos..pos + len]));
                out_degrees.push(block.iter().sum::<i64>() + len as i64 - 1);
                e += decalage_sign(block);
                pos += len;
            }
            if args.iter().any(Element::is_zero) {
                continue;
            }
            e += decalage_sign(&out_degrees);
            let refs: Vec<&Element> = args.iter().collect();
            residual.add_scaled(&tgt.op(r, &refs)?, &-sign(e));
        }
    }
    Ok(residual)
}

/// Checks the L∞ morphism equation on non-decreasing source tuples within
/// bounds, in its Chevalley–Eilenberg form: the coalgebra map on `ΛsL`
/// induced by `f̃_k = s f_k (s^{-1})^{⊗k}` commutes with the codifferentials
/// of the Quillen chains after projecting to cogenerators.
pub fn check_linf_morphism(
    f: &LInfMorphism,
    src: &impl Operations,
    tgt: &impl Operations,
    t: &Truncation,
) -> Result<MorphismReport> {
    let space = src.space();
    let mut report = IdentityReport::default();
    for n in 1..=t.max_arity {
        for tuple in bounded_multisets(space, n, n as i64 - 1, t.max_degree) {
            report.checked += 1;
            let residual = linf_morphism_residual(f, src, tgt, &tuple)?;
            if !residual.is_zero() {
                report.violations.push(Violation {
                    arity: n,
                    tuple,
                    residual,
                });
            }
        }
    }
    let quasi_isomorphism = induces_homology_iso(src, tgt, &f.linear(), t.max_degree)?;
    Ok(MorphismReport {
        identity: report,
        strict: f.is_strict(),
        quasi_isomorphism,
    })
}

pub(crate) fn linf_morphism_residual(
    f: &LInfMorphism,
    src: &impl Operations,
    tgt: &impl Operations,
    tuple: &[usize],
) -> Result<Element> {
    let space = src.space();
    let n = tuple.len();
    let degrees: Vec<i64> = tuple.iter().map(|&x| space.degree(x)).collect();
    let shifted: Vec<i64> = degrees.iter().map(|d| d + 1).collect();
    let mut residual = Element::zero();
    // f̃(ℓ̃_k(sx_I) ∧ sx_rest)
    for k in 1..=n.min(src.top_arity()) {
        for sigma in shuffles(k, n - k) {
            let permuted = sigma.apply(tuple);
            let inner = src.op_basis(k, &permuted[..k])?;
            if inner.is_zero() {
                continue;
            }
            let pdeg: Vec<i64> = permuted.iter().map(|&x| space.degree(x)).collect();
            let inner_degree = pdeg[..k].iter().sum::<i64>() + k as i64 - 2;
            let mut outer_degrees = vec![inner_degree];
            outer_degrees.extend_from_slice(&pdeg[k..]);
            let e = koszul_parity(sigma.images(), &shifted)
                + decalage_sign(&pdeg[..k])
                + decalage_sign(&outer_degrees);
            let mut args = vec![inner];
            args.extend(permuted[k..].iter().map(|&x| Element::basis(x)));
            let refs: Vec<&Element> = args.iter().collect();
            residual.add_scaled(&f.coeff(&refs), &sign(e));
        }
    }
    // ℓ̃'_m(f̃(B_1), …, f̃(B_m)) over unordered partitions
    for m in 1..=n.min(tgt.top_arity()) {
        for comp in compositions(n, m) {
            for tau in ordered_minima_shuffles(&comp) {
                let permuted = tau.apply(tuple);
                let pdeg: Vec<i64> = permuted.iter().map(|&x| space.degree(x)).collect();
                let mut args = Vec::with_capacity(m);
                let mut out_degrees = Vec::with_capacity(m);
                let mut e = koszul_parity(tau.images(), &shifted);
                let mut pos = 0;
                for &len in &comp {
                    let block = &pdeg[pos..pos + len];
                    args.push(f.coeff_basis(&permuted[pos..pos + len]));
                    out_degrees.push(block.iter().sum::<i64>() + len as i64 - 1);
                    e += decalage_sign(block);
                    pos += len;
                }
                if args.iter().any(Element::is_zero) {
                    continue;
                }
                e += decalage_sign(&out_degrees);
                let refs: Vec<&Element> = args.iter().collect();
                residual.add_scaled(&tgt.op(m, &refs)?, &-sign(e));
            }
        }
    }
    Ok(residual)
}

/// Parity of the Koszul sign, as an exponent.
fn koszul_parity(images: &[usize], degrees: &[i64]) -> i64 {
    if koszul_sign_unchecked(images, degrees) == 1 {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::{AInfAlgebra, LInfAlgebra};

    fn dga() -> AInfAlgebra {
        // a -> b under d, with a·a = c (a odd, c even).
        let s = GradedSpace::new([("b", 2), ("a", 3), ("c", 6)]).unwrap();
        let mut a = AInfAlgebra::new(s);
        a.set_named(&["a"], Element::basis(0)).unwrap();
        a
    }

    #[test]
    fn identity_is_a_strict_quasi_isomorphism() {
        let a = dga();
        let f = AInfMorphism::identity(a.space().clone());
        let r = check_ainf_morphism(&f, &a, &a, &Truncation::default()).unwrap();
        assert!(r.passed() && r.strict && r.quasi_isomorphism);
        let l = LInfAlgebra::new(a.space().clone());
        let g = LInfMorphism::identity(l.space().clone());
        let r = check_linf_morphism(&g, &l, &l, &Truncation::default()).unwrap();
        assert!(r.passed() && r.strict && r.quasi_isomorphism);
    }

    #[test]
    fn non_multiplicative_strict_map_fails_at_two() {
        // A = Q[x]/(x^3) fragment with x even of degree 2; f doubles x but
        // fixes x², so f(x·x) ≠ f(x)·f(x).
        let s = GradedSpace::new([("x", 2), ("y", 4)]).unwrap();
        let mut a = AInfAlgebra::new(s.clone());
        a.set_named(&["x", "x"], Element::basis(1)).unwrap();
        let map = LinearMap::new(0, vec![Element::term(0, int(2)), Element::basis(1)]);
        let f = AInfMorphism::strict(s.clone(), s, &map).unwrap();
        let r = check_ainf_morphism(&f, &a, &a, &Truncation::default()).unwrap();
        assert!(!r.passed());
        assert_eq!(r.identity.violations[0].arity, 2);
    }
}
