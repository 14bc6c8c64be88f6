use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::multiop::{bounded_multisets, MultiOp, Operations, Truncation};
use crate::perm::{all_permutations, chi, koszul_sign_unchecked, shuffles, Permutation};
use crate::scalar::{int, sign};
use crate::space::{Element, GradedSpace};

use super::{IdentityReport, Violation};

/// Sorts a basis tuple into non-decreasing order. Returns the sorted tuple
/// and the sign `χ` with `f(tuple) = χ · f(sorted)` for every graded skew
/// `f`, or `None` when skew symmetry forces `f(tuple) = 0` (a repeated
/// even-degree entry).
pub fn skew_canonical(space: &GradedSpace, tuple: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut order: Vec<usize> = (0..tuple.len()).collect();
    order.sort_by_key(|&p| tuple[p]);
    let sorted: Vec<usize> = order.iter().map(|&p| tuple[p]).collect();
    for w in sorted.windows(2) {
        if w[0] == w[1] && space.degree(w[0]).rem_euclid(2) == 0 {
            return None;
        }
    }
    let degrees: Vec<i64> = tuple.iter().map(|&i| space.degree(i)).collect();
    let sigma = Permutation::new(order).expect("argsort is a permutation");
    let c = chi(&sigma, &degrees).expect("lengths agree");
    Some((sorted, c))
}

/// An L∞ algebra with graded skew brackets `ℓ_k`, stored on non-decreasing
/// basis tuples only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LInfAlgebra {
    space: GradedSpace,
    ops: BTreeMap<usize, MultiOp>,
}

impl LInfAlgebra {
    pub fn new(space: GradedSpace) -> Self {
        LInfAlgebra {
            space,
            ops: BTreeMap::new(),
        }
    }

    /// Sets `ℓ_k(inputs) = output`; every permuted entry follows by skew
    /// symmetry. Entries forced to vanish must be set to zero.
    pub fn set(&mut self, inputs: Vec<usize>, output: Element) -> Result<()> {
        let k = inputs.len();
        if k == 0 {
            return Err(Error::Invalid("arity-0 operations are not allowed".into()));
        }
        let Some((sorted, c)) = skew_canonical(&self.space, &inputs) else {
            if output.is_zero() {
                return Ok(());
            }
            return Err(Error::Invalid(format!(
                "bracket on ({}) must vanish by skew symmetry",
                self.names(&inputs)
            )));
        };
        let op = match self.ops.entry(k) {
            std::collections::btree_map::Entry::Occupied(o) => o.into_mut(),
            std::collections::btree_map::Entry::Vacant(v) => v.insert(MultiOp::new(k, k as i64 - 2)?),
        };
        op.set(&self.space, &self.space, sorted, output.scaled(&int(c)))?;
        if op.is_empty() {
            self.ops.remove(&k);
        }
        Ok(())
    }

    pub fn set_named(&mut self, inputs: &[&str], output: Element) -> Result<()> {
        let idx = inputs
            .iter()
            .map(|n| self.space.require(n))
            .collect::<Result<Vec<_>>>()?;
        self.set(idx, output)
    }

    fn names(&self, tuple: &[usize]) -> String {
        tuple
            .iter()
            .map(|&i| self.space.name(i).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    /// Stored tables, keyed on non-decreasing tuples.
    pub fn tables(&self) -> impl Iterator<Item = (usize, &MultiOp)> {
        self.ops.iter().map(|(&k, m)| (k, m))
    }

    pub fn op_table(&self, k: usize) -> Option<&MultiOp> {
        self.ops.get(&k)
    }

    pub fn is_minimal(&self) -> bool {
        !self.ops.contains_key(&1)
    }

    /// True when `ℓ_k = 0` for every `k ≥ 3`.
    pub fn is_dgl(&self) -> bool {
        self.ops.keys().all(|&k| k <= 2)
    }

    pub fn is_abelian(&self) -> bool {
        self.ops.is_empty()
    }

    /// Tabulates a skew operation family on non-decreasing tuples.
    pub fn tabulate(ops: &impl Operations, t: &Truncation) -> Result<Self> {
        let mut l = LInfAlgebra::new(ops.space().clone());
        for k in 1..=ops.top_arity().min(t.max_arity) {
            for tuple in bounded_multisets(ops.space(), k, k as i64 - 2, t.max_degree) {
                let v = ops.op_basis(k, &tuple)?;
                if !v.is_zero() {
                    l.set(tuple, v)?;
                }
            }
        }
        Ok(l)
    }

    /// Restricts to brackets of arity `≤ max_arity` with outputs of degree
    /// `≤ max_degree`.
    pub fn truncated(&self, t: &Truncation) -> LInfAlgebra {
        let mut l = LInfAlgebra::new(self.space.clone());
        for (&k, m) in &self.ops {
            if k > t.max_arity {
                continue;
            }
            for (tuple, v) in m.entries() {
                let d: i64 = tuple.iter().map(|&i| self.space.degree(i)).sum::<i64>() + k as i64 - 2;
                if d <= t.max_degree {
                    l.set(tuple.clone(), v.clone()).expect("entry already valid");
                }
            }
        }
        l
    }
}

impl Operations for LInfAlgebra {
    fn space(&self) -> &GradedSpace {
        &self.space
    }

    fn top_arity(&self) -> usize {
        self.ops.keys().next_back().copied().unwrap_or(0)
    }

    fn op_basis(&self, arity: usize, args: &[usize]) -> Result<Element> {
        let Some(m) = self.ops.get(&arity) else {
            return Ok(Element::zero());
        };
        Ok(match skew_canonical(&self.space, args) {
            None => Element::zero(),
            Some((sorted, c)) => m.eval_basis(&sorted).scaled(&int(c)),
        })
    }
}

/// `ℓ_n(x_1..x_n) = Σ_{σ ∈ S_n} χ(σ) m_n(x_σ(1)..x_σ(n))`, evaluated lazily.
pub struct Antisymmetrized<'a, O: Operations> {
    inner: &'a O,
    perms: Vec<Vec<Permutation>>,
}

impl<'a, O: Operations> Antisymmetrized<'a, O> {
    pub fn new(inner: &'a O) -> Self {
        let perms = (0..=inner.top_arity()).map(all_permutations).collect();
        Antisymmetrized { inner, perms }
    }
}

impl<O: Operations> Operations for Antisymmetrized<'_, O> {
    fn space(&self) -> &GradedSpace {
        self.inner.space()
    }

    fn top_arity(&self) -> usize {
        self.inner.top_arity()
    }

    fn op_basis(&self, arity: usize, args: &[usize]) -> Result<Element> {
        if arity > self.inner.top_arity() {
            return Ok(Element::zero());
        }
        let space = self.inner.space();
        let degrees: Vec<i64> = args.iter().map(|&i| space.degree(i)).collect();
        let mut out = Element::zero();
        for sigma in &self.perms[arity] {
            let c = koszul_sign_unchecked(sigma.images(), &degrees) * sigma.sgn();
            let permuted = sigma.apply(args);
            let v = self.inner.op_basis(arity, &permuted)?;
            out.add_scaled(&v, &int(c));
        }
        Ok(out)
    }
}

/// The antisymmetrization functor on A∞ algebras, tabulated within bounds.
pub fn antisymmetrize(a: &impl Operations, t: &Truncation) -> Result<LInfAlgebra> {
    LInfAlgebra::tabulate(&Antisymmetrized::new(a), t)
}

/// Left side of the `n`-th generalized Jacobi identity on one tuple.
pub(crate) fn jacobi_residual(ops: &impl Operations, tuple: &[usize]) -> Result<Element> {
    let space = ops.space();
    let n = tuple.len();
    let top = ops.top_arity();
    let degrees: Vec<i64> = tuple.iter().map(|&i| space.degree(i)).collect();
    let mut total = Element::zero();
    for i in 1..=n.min(top) {
        let j = n + 1 - i;
        if j > top {
            continue;
        }
        let outer_sign = (i * (j - 1)) as i64;
        for sigma in shuffles(i, n - i) {
            let permuted = sigma.apply(tuple);
            let inner = ops.op_basis(i, &permuted[..i])?;
            if inner.is_zero() {
                continue;
            }
            let c = koszul_sign_unchecked(sigma.images(), &degrees) * sigma.sgn();
            let mut args = Vec::with_capacity(j);
            args.push(inner);
            args.extend(permuted[i..].iter().map(|&x| Element::basis(x)));
            let refs: Vec<&Element> = args.iter().collect();
            let v = ops.op(j, &refs)?;
            total.add_scaled(&v, &(int(c) * sign(outer_sign)));
        }
    }
    Ok(total)
}

/// Checks skew symmetry of stored entries, then the generalized Jacobi
/// identities for `n ≤ max_arity` on non-decreasing tuples within bounds
/// (the Jacobiator is itself skew, so these suffice).
pub fn check_jacobi(ops: &impl Operations, t: &Truncation) -> Result<IdentityReport> {
    let mut report = IdentityReport::default();
    for n in 1..=t.max_arity {
        for tuple in bounded_multisets(ops.space(), n, n as i64 - 2, t.max_degree) {
            report.checked += 1;
            let r = jacobi_residual(ops, &tuple)?;
            if !r.is_zero() {
                report.violations.push(Violation {
                    arity: n,
                    tuple,
                    residual: r,
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::AInfAlgebra;
    use crate::scalar::q;

    fn cpk(k: usize) -> LInfAlgebra {
        let s = GradedSpace::new([("x", 1), ("y", 2 * k as i64)]).unwrap();
        let mut l = LInfAlgebra::new(s);
        let x = vec![0; k + 1];
        l.set(x, Element::term(1, crate::scalar::factorial(k + 1).recip()))
            .unwrap();
        l
    }

    #[test]
    fn cpk_models_pass_jacobi() {
        for k in 1..=3 {
            let r = check_jacobi(&cpk(k), &Truncation::new(12, 5, 8).unwrap()).unwrap();
            assert!(r.passed(), "k = {k}");
        }
    }

    #[test]
    fn skew_lookup_signs() {
        let s = GradedSpace::new([("a", 1), ("b", 2)]).unwrap();
        let mut l = LInfAlgebra::new(GradedSpace::new([("a", 1), ("b", 2), ("c", 3)]).unwrap());
        l.set_named(&["b", "a"], Element::basis(2)).unwrap();
        // χ((1 2); b, a) = ε · sgn = 1 · −1
        assert_eq!(l.op_basis(2, &[0, 1]).unwrap(), Element::term(2, int(-1)));
        assert_eq!(l.op_basis(2, &[1, 0]).unwrap(), Element::basis(2));
        assert!(skew_canonical(&s, &[1, 1]).is_none());
        assert_eq!(skew_canonical(&s, &[0, 0]).unwrap().1, 1);
        let mut bad = LInfAlgebra::new(s);
        assert!(bad.set(vec![1, 1], Element::zero()).is_ok());
    }

    #[test]
    fn antisymmetrized_cp2_envelope() {
        let s = GradedSpace::new([("x", 1), ("y", 4)]).unwrap();
        let mut a = AInfAlgebra::new(s);
        a.set_named(&["x", "x", "x"], Element::term(1, q(1, 36))).unwrap();
        let l = antisymmetrize(&a, &Truncation::default()).unwrap();
        assert_eq!(l.op_basis(3, &[0, 0, 0]).unwrap(), Element::term(1, q(1, 6)));
    }

    #[test]
    fn antisymmetrized_product_is_the_commutator() {
        // free associative algebra fragment: m2(a,b) = u, m2(b,a) = v
        let s = GradedSpace::new([("a", 1), ("b", 2), ("u", 3), ("v", 3)]).unwrap();
        let mut a = AInfAlgebra::new(s);
        a.set_named(&["a", "b"], Element::basis(2)).unwrap();
        a.set_named(&["b", "a"], Element::basis(3)).unwrap();
        let l = antisymmetrize(&a, &Truncation::default()).unwrap();
        // ℓ2(a,b) = m2(a,b) − (−1)^{|a||b|} m2(b,a) = u − v
        let expect = Element::from_terms([(2, int(1)), (3, int(-1))]);
        assert_eq!(l.op_basis(2, &[0, 1]).unwrap(), expect);
    }

    #[test]
    fn corrupted_jacobi_fails() {
        // a Lie bracket on odd x with [x,x] = y and a nonzero [x,y] = z
        // violates Jacobi: [[x,x],x] must vanish.
        let s = GradedSpace::new([("x", 1), ("y", 2), ("z", 3)]).unwrap();
        let mut l = LInfAlgebra::new(s);
        l.set_named(&["x", "x"], Element::basis(1)).unwrap();
        l.set_named(&["x", "y"], Element::basis(2)).unwrap();
        let r = check_jacobi(&l, &Truncation::default()).unwrap();
        assert!(!r.passed());
        assert_eq!(r.violations[0].arity, 3);
    }
}
