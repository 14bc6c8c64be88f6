use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::multiop::{bounded_tuples, MultiOp, Operations, Truncation};
use crate::scalar::sign;
use crate::space::{Element, GradedSpace};

use super::{IdentityReport, Violation};

/// An A∞ algebra given by finitely many operation tables `m_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AInfAlgebra {
    space: GradedSpace,
    ops: BTreeMap<usize, MultiOp>,
}

impl AInfAlgebra {
    pub fn new(space: GradedSpace) -> Self {
        AInfAlgebra {
            space,
            ops: BTreeMap::new(),
        }
    }

    /// Sets `m_k(inputs) = output`, checking the degree.
    pub fn set(&mut self, inputs: Vec<usize>, output: Element) -> Result<()> {
        let k = inputs.len();
        if k == 0 {
            return Err(Error::Invalid("arity-0 operations are not allowed".into()));
        }
        let op = match self.ops.entry(k) {
            std::collections::btree_map::Entry::Occupied(o) => o.into_mut(),
            std::collections::btree_map::Entry::Vacant(v) => v.insert(MultiOp::new(k, k as i64 - 2)?),
        };
        op.set(&self.space, &self.space, inputs, output)?;
        if op.is_empty() {
            self.ops.remove(&k);
        }
        Ok(())
    }

    /// Like [`AInfAlgebra::set`] with basis names.
    pub fn set_named(&mut self, inputs: &[&str], output: Element) -> Result<()> {
        let idx = inputs
            .iter()
            .map(|n| self.space.require(n))
            .collect::<Result<Vec<_>>>()?;
        self.set(idx, output)
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn op_table(&self, k: usize) -> Option<&MultiOp> {
        self.ops.get(&k)
    }

    /// Nonzero operation tables by arity.
    pub fn tables(&self) -> impl Iterator<Item = (usize, &MultiOp)> {
        self.ops.iter().map(|(&k, m)| (k, m))
    }

    pub fn is_minimal(&self) -> bool {
        !self.ops.contains_key(&1)
    }

    /// True when `m_k = 0` for every `k ≥ 3`.
    pub fn is_dga(&self) -> bool {
        self.ops.keys().all(|&k| k <= 2)
    }

    /// Copies every operation of arity `≤ max_arity` from an operation family
    /// on the same space, evaluated on all tuples within the truncation.
    pub fn tabulate(ops: &impl Operations, t: &Truncation) -> Result<Self> {
        let mut a = AInfAlgebra::new(ops.space().clone());
        for k in 1..=ops.top_arity().min(t.max_arity) {
            for tuple in bounded_tuples(ops.space(), k, k as i64 - 2, t.max_degree) {
                let v = ops.op_basis(k, &tuple)?;
                if !v.is_zero() {
                    a.set(tuple, v)?;
                }
            }
        }
        Ok(a)
    }
}

impl Operations for AInfAlgebra {
    fn space(&self) -> &GradedSpace {
        &self.space
    }

    fn top_arity(&self) -> usize {
        self.ops.keys().next_back().copied().unwrap_or(0)
    }

    fn op_basis(&self, arity: usize, args: &[usize]) -> Result<Element> {
        Ok(self
            .ops
            .get(&arity)
            .map(|m| m.eval_basis(args))
            .unwrap_or_default())
    }
}

/// Left side of the `i`-th Stasheff identity on one basis tuple:
/// `Σ (−1)^{k+n+kn} m_{i−k+1}(id^{⊗n} ⊗ m_k ⊗ id^{⊗i−k−n})`.
pub(crate) fn stasheff_residual(ops: &impl Operations, tuple: &[usize]) -> Result<Element> {
    let space = ops.space();
    let i = tuple.len();
    let top = ops.top_arity();
    let mut total = Element::zero();
    for k in 1..=i.min(top) {
        let outer = i - k + 1;
        if outer > top {
            continue;
        }
        for n in 0..=(i - k) {
            let inner = ops.op_basis(k, &tuple[n..n + k])?;
            if inner.is_zero() {
                continue;
            }
            let before: i64 = tuple[..n].iter().map(|&x| space.degree(x)).sum();
            let kk = k as i64;
            let nn = n as i64;
            let s = sign(kk + nn + kk * nn + kk * before);
            let mut args: Vec<Element> = Vec::with_capacity(outer);
            args.extend(tuple[..n].iter().map(|&x| Element::basis(x)));
            args.push(inner);
            args.extend(tuple[n + k..].iter().map(|&x| Element::basis(x)));
            let refs: Vec<&Element> = args.iter().collect();
            let v = ops.op(outer, &refs)?;
            total.add_scaled(&v, &s);
        }
    }
    Ok(total)
}

/// Evaluates the Stasheff identities for `i ≤ max_arity` on every basis tuple
/// whose intermediate results stay within `max_degree`.
pub fn check_stasheff(ops: &impl Operations, t: &Truncation) -> Result<IdentityReport> {
    let mut report = IdentityReport::default();
    for i in 1..=t.max_arity {
        for tuple in bounded_tuples(ops.space(), i, i as i64 - 2, t.max_degree) {
            report.checked += 1;
            let r = stasheff_residual(ops, &tuple)?;
            if !r.is_zero() {
                report.violations.push(Violation {
                    arity: i,
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
    use crate::scalar::{int, q};

    fn cp2() -> AInfAlgebra {
        let s = GradedSpace::new([("x", 1), ("y", 4)]).unwrap();
        let mut a = AInfAlgebra::new(s);
        a.set_named(&["x", "x", "x"], Element::term(1, q(1, 36))).unwrap();
        a
    }

    #[test]
    fn cp2_envelope_passes() {
        let r = check_stasheff(&cp2(), &Truncation::new(12, 5, 8).unwrap()).unwrap();
        assert!(r.passed());
        assert!(r.checked > 0);
    }

    #[test]
    fn corrupted_cp2_fails_at_four() {
        // m3(x,x,x) = y with extra products m2(x,x) = w, m2(y,x) = z.
        // Identities up to i = 3 still hold; at i = 4 on (x,x,x,x) the only
        // surviving term is (−1)^3 m2(m3(x,x,x), x) = −z.
        let s = GradedSpace::new([("x", 1), ("w", 2), ("y", 4), ("z", 5)]).unwrap();
        let mut a = AInfAlgebra::new(s);
        a.set_named(&["x", "x", "x"], Element::basis(2)).unwrap();
        a.set_named(&["x", "x"], Element::basis(1)).unwrap();
        a.set_named(&["y", "x"], Element::basis(3)).unwrap();
        let r = check_stasheff(&a, &Truncation::new(12, 4, 8).unwrap()).unwrap();
        assert!(!r.passed());
        let v = &r.violations[0];
        assert_eq!(v.arity, 4);
        assert_eq!(v.tuple, vec![0, 0, 0, 0]);
        assert_eq!(v.residual, Element::term(3, int(-1)));
    }

    #[test]
    fn degree_is_checked_on_insert() {
        let mut a = cp2();
        assert!(a.set_named(&["x", "x"], Element::basis(1)).is_err());
    }
}
