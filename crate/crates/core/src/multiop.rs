//! Graded multilinear operations and the truncation bounds every identity
//! check and transfer runs under.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::space::{Element, GradedSpace};

/// Bounds that make computations finite.
///
/// `max_degree` bounds the degree of every output an operation table or
/// identity check touches; `max_arity` bounds operation arity; `max_weight`
/// caps tensor or wedge word length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncation {
    pub max_degree: i64,
    pub max_arity: usize,
    pub max_weight: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            max_degree: 12,
            max_arity: 5,
            max_weight: 8,
        }
    }
}

impl Truncation {
    pub fn new(max_degree: i64, max_arity: usize, max_weight: usize) -> Result<Self> {
        let t = Truncation {
            max_degree,
            max_arity,
            max_weight,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_degree <= 0 || self.max_arity == 0 || self.max_weight == 0 {
            return Err(Error::InvalidTruncation(format!(
                "all bounds must be positive: {self:?}"
            )));
        }
        Ok(())
    }
}

/// An arity-`k` operation stored sparsely on basis tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiOp {
    pub arity: usize,
    pub degree: i64,
    table: BTreeMap<Vec<usize>, Element>,
}

impl MultiOp {
    pub fn new(arity: usize, degree: i64) -> Result<Self> {
        if arity == 0 {
            return Err(Error::Invalid("arity-0 operations are not allowed".into()));
        }
        Ok(MultiOp {
            arity,
            degree,
            table: BTreeMap::new(),
        })
    }

    /// Stores an entry after checking `|output| = Σ|inputs| + degree`.
    pub fn set(
        &mut self,
        source: &GradedSpace,
        target: &GradedSpace,
        inputs: Vec<usize>,
        output: Element,
    ) -> Result<()> {
        if inputs.len() != self.arity {
            return Err(Error::LengthMismatch {
                expected: self.arity,
                got: inputs.len(),
            });
        }
        if let Some(d) = output.degree(target)? {
            let expect = tuple_degree(source, &inputs) + self.degree;
            if d != expect {
                return Err(Error::DegreeMismatch(format!(
                    "entry on {:?} has degree {d}, expected {expect}",
                    inputs.iter().map(|&i| source.name(i)).collect::<Vec<_>>()
                )));
            }
        }
        self.set_unchecked(inputs, output);
        Ok(())
    }

    pub fn set_unchecked(&mut self, inputs: Vec<usize>, output: Element) {
        if output.is_zero() {
            self.table.remove(&inputs);
        } else {
            self.table.insert(inputs, output);
        }
    }

    pub fn get(&self, inputs: &[usize]) -> Option<&Element> {
        self.table.get(inputs)
    }

    pub fn eval_basis(&self, inputs: &[usize]) -> Element {
        self.table.get(inputs).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Element)> {
        self.table.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Evaluates on arbitrary elements by multilinear expansion.
    pub fn eval(&self, args: &[&Element]) -> Element {
        expand_multilinear(args, |t| Ok(self.eval_basis(t))).expect("table lookup is infallible")
    }
}

pub fn tuple_degree(space: &GradedSpace, tuple: &[usize]) -> i64 {
    tuple.iter().map(|&i| space.degree(i)).sum()
}

/// Expands `f(args…)` multilinearly from its values on basis tuples.
pub fn expand_multilinear(
    args: &[&Element],
    mut f: impl FnMut(&[usize]) -> Result<Element>,
) -> Result<Element> {
    let mut out = Element::zero();
    if args.iter().any(|a| a.is_zero()) {
        return Ok(out);
    }
    let terms: Vec<Vec<(usize, &crate::scalar::Q)>> =
        args.iter().map(|a| a.terms().collect()).collect();
    let mut idx = vec![0usize; args.len()];
    let mut tuple = vec![0usize; args.len()];
    loop {
        let mut coeff = crate::scalar::one();
        for (p, &k) in idx.iter().enumerate() {
            tuple[p] = terms[p][k].0;
            coeff *= terms[p][k].1;
        }
        let v = f(&tuple)?;
        out.add_scaled(&v, &coeff);
        // odometer
        let mut p = args.len();
        loop {
            if p == 0 {
                return Ok(out);
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < terms[p].len() {
                break;
            }
            idx[p] = 0;
        }
    }
}

/// A family of operations `{op_k}` on one graded space, with `op_k` of
/// degree `k - 2` (structure maps of A∞ and L∞ algebras).
pub trait Operations {
    fn space(&self) -> &GradedSpace;

    /// Largest arity whose operation may be nonzero.
    fn top_arity(&self) -> usize;

    /// `op_k` on a tuple of basis indices.
    fn op_basis(&self, arity: usize, args: &[usize]) -> Result<Element>;

    fn op(&self, arity: usize, args: &[&Element]) -> Result<Element> {
        if arity > self.top_arity() {
            return Ok(Element::zero());
        }
        expand_multilinear(args, |t| self.op_basis(arity, t))
    }
}

/// Every tuple of basis indices of length `arity` whose total degree plus
/// `shift` is at most `max_out`, in lexicographic order.
pub fn bounded_tuples(space: &GradedSpace, arity: usize, shift: i64, max_out: i64) -> Vec<Vec<usize>> {
    tuples_impl(space, arity, shift, max_out, false)
}

/// Like [`bounded_tuples`] but only non-decreasing tuples (multisets).
pub fn bounded_multisets(
    space: &GradedSpace,
    arity: usize,
    shift: i64,
    max_out: i64,
) -> Vec<Vec<usize>> {
    tuples_impl(space, arity, shift, max_out, true)
}

fn tuples_impl(
    space: &GradedSpace,
    arity: usize,
    shift: i64,
    max_out: i64,
    sorted: bool,
) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let Some(min_deg) = space.min_degree() else {
        return out;
    };
    let mut cur = Vec::with_capacity(arity);
    #[allow(clippy::too_many_arguments)]
    fn rec(
        space: &GradedSpace,
        arity: usize,
        min_deg: i64,
        budget: i64,
        sorted: bool,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == arity {
            if budget >= 0 {
                out.push(cur.clone());
            }
            return;
        }
        let remaining = (arity - cur.len() - 1) as i64;
        let start = if sorted { cur.last().copied().unwrap_or(0) } else { 0 };
        for i in start..space.dim() {
            let d = space.degree(i);
            if budget - d - remaining * min_deg < 0 {
                // basis is sorted by degree, so later entries only get worse
                break;
            }
            cur.push(i);
            rec(space, arity, min_deg, budget - d, sorted, cur, out);
            cur.pop();
        }
    }
    rec(space, arity, min_deg, max_out - shift, sorted, &mut cur, &mut out);
    out
}

/// Parity exponent of the Koszul sign produced by applying
/// `f_1 ⊗ … ⊗ f_k` (map degrees `map_degrees`) to consecutive blocks with
/// total degrees `block_degrees`.
pub fn tensor_map_sign(map_degrees: &[i64], block_degrees: &[i64]) -> i64 {
    let mut passed = 0i64;
    let mut exponent = 0i64;
    for (m, b) in map_degrees.iter().zip(block_degrees) {
        exponent += m * passed;
        passed += b;
    }
    exponent
}

/// Parity exponent of the décalage sign: for `x_1..x_k` with degrees
/// `degrees`, `(s^{-1})^{⊗k}(sx_1 ⊗ … ⊗ sx_k) = (−1)^e x_1 ⊗ … ⊗ x_k` with
/// `e = Σ_l (k − l)|sx_l|`.
pub fn decalage_sign(degrees: &[i64]) -> i64 {
    let k = degrees.len() as i64;
    degrees
        .iter()
        .enumerate()
        .map(|(l, d)| (k - 1 - l as i64) * (d + 1))
        .sum()
}
