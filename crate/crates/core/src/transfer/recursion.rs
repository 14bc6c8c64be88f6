//! Recursive homotopy transfer of A∞ and L∞ structures along a contraction.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use crate::error::Result;
use crate::homotopy::{skew_canonical, AInfAlgebra, AInfMorphism, LInfAlgebra, LInfMorphism};
use crate::multiop::{bounded_multisets, bounded_tuples, decalage_sign, tensor_map_sign, tuple_degree, Operations, Truncation};
use crate::perm::{chi, compositions, multi_shuffles};
use crate::scalar::{factorial, int, sign, Q};
use num_traits::{One, Zero};
use crate::space::{Element, GradedSpace, LinearMap};

use super::Contraction;

/// `α(i_1,…,i_k) = Σ_{j<k} i_j (i_k − 1)`.
fn alpha(parts: &[usize]) -> i64 {
    let k = parts.len();
    let last = parts[k - 1] as i64;
    parts[..k - 1].iter().map(|&i| i as i64 * (last - 1)).sum()
}

/// Planar trees with vertices `m_k`, internal edges `K` and leaves
/// `leaf`, evaluated on tuples of `inputs` and memoized.
struct LambdaCache<'a, O: Operations> {
    c: &'a Contraction,
    ops: &'a O,
    inputs: &'a GradedSpace,
    /// `None` for the identity.
    leaf: Option<&'a LinearMap>,
    lambda: RefCell<HashMap<Vec<usize>, Element>>,
}

impl<O: Operations> LambdaCache<'_, O> {
    fn small(&self) -> &GradedSpace {
        self.inputs
    }

    /// `Gλ_n` on a tuple, with `Gλ_1 = leaf`.
    fn g_lambda(&self, x: &[usize]) -> Result<Element> {
        if x.len() == 1 {
            return Ok(match self.leaf {
                Some(f) => f.column(x[0]).clone(),
                None => Element::basis(x[0]),
            });
        }
        Ok(self.c.k.apply(&self.lambda(x)?))
    }

    fn lambda(&self, x: &[usize]) -> Result<Element> {
        if let Some(v) = self.lambda.borrow().get(x) {
            return Ok(v.clone());
        }
        let n = x.len();
        let mut out = Element::zero();
        for k in 2..=n.min(self.ops.top_arity()) {
            for parts in compositions(n, k) {
                let mut args = Vec::with_capacity(k);
                let mut block_degrees = Vec::with_capacity(k);
                let mut start = 0;
                for &p in &parts {
                    let block = &x[start..start + p];
                    args.push(self.g_lambda(block)?);
                    block_degrees.push(tuple_degree(self.small(), block));
                    start += p;
                }
                if args.iter().any(Element::is_zero) {
                    continue;
                }
                let map_degrees: Vec<i64> = parts.iter().map(|&p| p as i64 - 1).collect();
                let s = sign(alpha(&parts) + tensor_map_sign(&map_degrees, &block_degrees));
                let refs: Vec<&Element> = args.iter().collect();
                out.add_scaled(&self.ops.op(k, &refs)?, &s);
            }
        }
        self.lambda.borrow_mut().insert(x.to_vec(), out.clone());
        Ok(out)
    }
}

/// Transfers an A∞ structure on the big complex of `c` to its small
/// complex: `m_n = q λ_n` and `J_n = K λ_n` with `J_1 = i`.
pub fn transfer_ainf(
    c: &Contraction,
    ops: &impl Operations,
    t: &Truncation,
) -> Result<(AInfAlgebra, AInfMorphism)> {
    let small = c.small.space.clone();
    let cache = LambdaCache {
        c,
        ops,
        inputs: &c.small.space,
        leaf: Some(&c.i),
        lambda: RefCell::new(HashMap::new()),
    };
    let mut m = AInfAlgebra::new(small.clone());
    let mut j = AInfMorphism::strict(small.clone(), c.big.space.clone(), &c.i)?;
    for x in 0..small.dim() {
        m.set(vec![x], c.small.d.column(x).clone())?;
    }
    for n in 2..=t.max_arity {
        for x in bounded_tuples(&small, n, n as i64 - 2, t.max_degree) {
            let l = cache.lambda(&x)?;
            if l.is_zero() {
                continue;
            }
            m.set(x.clone(), c.q.apply(&l))?;
            j.set(x, c.k.apply(&l))?;
        }
    }
    Ok((m, j))
}

type Words = BTreeMap<Vec<usize>, Q>;

fn add_word(out: &mut Words, w: Vec<usize>, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = out.entry(w).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        out.retain(|_, v| !v.is_zero());
    }
}

/// The A∞ quasi-isomorphism `big → small` of a contraction, read off from
/// the perturbed tensor-trick contraction of the bar constructions:
/// `P̃ = π A K̄` on words of length ≥ 2, where `K̄` puts `K` in one slot
/// with `iq` to its left, and the perturbation is the part of the bar
/// codifferential built from operations of arity ≥ 2.
pub struct AInfProjection<'a, O: Operations> {
    c: &'a Contraction,
    ops: &'a O,
    iq: LinearMap,
    memo: RefCell<HashMap<Vec<usize>, Element>>,
}

impl<'a, O: Operations> AInfProjection<'a, O> {
    pub fn new(c: &'a Contraction, ops: &'a O) -> Self {
        AInfProjection {
            c,
            ops,
            iq: c.i.compose(&c.q),
            memo: RefCell::new(HashMap::new()),
        }
    }

    fn space(&self) -> &GradedSpace {
        &self.c.big.space
    }

    fn shifted(&self, w: &[usize]) -> i64 {
        w.iter().map(|&a| self.space().degree(a) + 1).sum()
    }

    fn k_bar(&self, x: &Words) -> Words {
        let mut out = Words::new();
        for (w, coeff) in x {
            let mut prefix: Vec<(Vec<usize>, Q)> = vec![(Vec::new(), coeff.clone())];
            for j in 0..w.len() {
                let s = sign(self.shifted(&w[..j]));
                for (a, ka) in self.c.k.column(w[j]).terms() {
                    for (pre, pc) in &prefix {
                        let mut nw = pre.clone();
                        nw.push(a);
                        nw.extend_from_slice(&w[j + 1..]);
                        add_word(&mut out, nw, -(pc * ka * &s));
                    }
                }
                let mut next = Vec::new();
                for (a, v) in self.iq.column(w[j]).terms() {
                    for (pre, pc) in &prefix {
                        let mut nw = pre.clone();
                        nw.push(a);
                        next.push((nw, pc * v));
                    }
                }
                prefix = next;
                if prefix.is_empty() {
                    break;
                }
            }
        }
        out
    }

    fn perturbation(&self, x: &Words) -> Result<Words> {
        let mut out = Words::new();
        let top = self.ops.top_arity();
        for (w, coeff) in x {
            let p = w.len();
            for k in 1..top.min(p) {
                for i in 0..p - k {
                    let block = &w[i..=i + k];
                    let value = self.ops.op_basis(k + 1, block)?;
                    if value.is_zero() {
                        continue;
                    }
                    let base: Vec<i64> = block.iter().map(|&a| self.space().degree(a)).collect();
                    let s = sign(1 + self.shifted(&w[..i]) + decalage_sign(&base)) * coeff;
                    for (a, v) in value.terms() {
                        let mut nw = w[..i].to_vec();
                        nw.push(a);
                        nw.extend_from_slice(&w[i + k + 1..]);
                        add_word(&mut out, nw, v * &s);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `P_n` on basis tuples of the big space.
    pub fn eval_basis(&self, x: &[usize]) -> Result<Element> {
        let c = self.c;
        if x.len() == 1 {
            return Ok(c.q.column(x[0]).clone());
        }
        if let Some(v) = self.memo.borrow().get(x) {
            return Ok(v.clone());
        }
        let mut start = Words::new();
        start.insert(x.to_vec(), Q::one());
        let mut y = self.k_bar(&start);
        let mut out = Element::zero();
        loop {
            y = self.perturbation(&y)?;
            if y.is_empty() {
                break;
            }
            for (w, coeff) in &y {
                if w.len() == 1 {
                    out.add_scaled(c.q.column(w[0]), coeff);
                }
            }
            y.retain(|w, _| w.len() > 1);
            y = self.k_bar(&y);
        }
        let degrees: Vec<i64> = x.iter().map(|&a| self.space().degree(a)).collect();
        let out = out.scaled(&sign(decalage_sign(&degrees)));
        self.memo.borrow_mut().insert(x.to_vec(), out.clone());
        Ok(out)
    }

    pub fn eval(&self, args: &[&Element]) -> Result<Element> {
        crate::multiop::expand_multilinear(args, |t| self.eval_basis(t))
    }
}

/// Tabulates the projection `big → small` of a contraction on every
/// in-bound tuple of the big space.
pub fn projection_ainf(c: &Contraction, ops: &impl Operations, t: &Truncation) -> Result<AInfMorphism> {
    let p = AInfProjection::new(c, ops);
    let big = &c.big.space;
    let mut out = AInfMorphism::strict(big.clone(), c.small.space.clone(), &c.q)?;
    for n in 2..=t.max_arity {
        for x in bounded_tuples(big, n, n as i64 - 1, t.max_degree) {
            let v = p.eval_basis(&x)?;
            if !v.is_zero() {
                out.set(x, v)?;
            }
        }
    }
    Ok(out)
}

struct ThetaCache<'a, O: Operations> {
    c: &'a Contraction,
    ops: &'a O,
    /// θ_n on sorted tuples.
    theta: RefCell<HashMap<Vec<usize>, Element>>,
}

impl<O: Operations> ThetaCache<'_, O> {
    fn small(&self) -> &GradedSpace {
        &self.c.small.space
    }

    /// `Kθ_n` on any tuple, with `Kθ_1 = i`.
    fn k_theta(&self, x: &[usize]) -> Result<Element> {
        if x.len() == 1 {
            return Ok(self.c.i.column(x[0]).clone());
        }
        Ok(self.c.k.apply(&self.theta(x)?))
    }

    /// `θ_n`, graded skew-symmetric in its inputs.
    fn theta(&self, x: &[usize]) -> Result<Element> {
        let Some((sorted, s)) = skew_canonical(self.small(), x) else {
            return Ok(Element::zero());
        };
        if let Some(v) = self.theta.borrow().get(&sorted) {
            return Ok(v.scaled(&int(s)));
        }
        let v = self.theta_sorted(&sorted)?;
        self.theta.borrow_mut().insert(sorted, v.clone());
        Ok(v.scaled(&int(s)))
    }

    fn theta_sorted(&self, x: &[usize]) -> Result<Element> {
        let n = x.len();
        let degrees: Vec<i64> = x.iter().map(|&i| self.small().degree(i)).collect();
        let mut out = Element::zero();
        for k in 2..=n.min(self.ops.top_arity()) {
            let weight = factorial(k).recip();
            for parts in compositions(n, k) {
                let map_degrees: Vec<i64> = parts.iter().map(|&p| p as i64 - 1).collect();
                let a = alpha(&parts);
                for rho in multi_shuffles(&parts) {
                    let xs: Vec<usize> = rho.images().iter().map(|&p| x[p]).collect();
                    let mut args = Vec::with_capacity(k);
                    let mut block_degrees = Vec::with_capacity(k);
                    let mut start = 0;
                    for &p in &parts {
                        let block = &xs[start..start + p];
                        args.push(self.k_theta(block)?);
                        block_degrees.push(tuple_degree(self.small(), block));
                        start += p;
                    }
                    if args.iter().any(Element::is_zero) {
                        continue;
                    }
                    let e = a + tensor_map_sign(&map_degrees, &block_degrees);
                    let coeff = sign(e) * int(chi(&rho, &degrees)?) * &weight;
                    let refs: Vec<&Element> = args.iter().collect();
                    out.add_scaled(&self.ops.op(k, &refs)?, &coeff);
                }
            }
        }
        Ok(out)
    }
}

/// Transfers an L∞ structure on the big complex of `c` to its small
/// complex: `ℓ_n = q θ_n` and `I_n = K θ_n` with `I_1 = i`.
pub fn transfer_linf(
    c: &Contraction,
    ops: &impl Operations,
    t: &Truncation,
) -> Result<(LInfAlgebra, LInfMorphism)> {
    let small = c.small.space.clone();
    let cache = ThetaCache {
        c,
        ops,
        theta: RefCell::new(HashMap::new()),
    };
    let mut l = LInfAlgebra::new(small.clone());
    let mut i = LInfMorphism::strict(small.clone(), c.big.space.clone(), &c.i)?;
    for x in 0..small.dim() {
        l.set(vec![x], c.small.d.column(x).clone())?;
    }
    for n in 2..=t.max_arity {
        for x in bounded_multisets(&small, n, n as i64 - 2, t.max_degree) {
            let th = cache.theta(&x)?;
            if th.is_zero() {
                continue;
            }
            l.set(x.clone(), c.q.apply(&th))?;
            i.set(x, c.k.apply(&th))?;
        }
    }
    Ok((l, i))
}
