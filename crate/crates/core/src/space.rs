//! Graded vector spaces with finite named bases, their elements, and linear
//! maps between them.
//!
//! A [`GradedSpace`] keeps its basis sorted by the global order
//! `(degree, name)`, so basis indices double as positions in that order.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::ops::Range;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_q, Q};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedSpace {
    names: Vec<String>,
    degrees: Vec<i64>,
    index: HashMap<String, usize>,
    ranges: BTreeMap<i64, Range<usize>>,
}

impl GradedSpace {
    /// Builds a space from `(name, degree)` pairs in any order.
    pub fn new<S: Into<String>>(basis: impl IntoIterator<Item = (S, i64)>) -> Result<Self> {
        let items: Vec<(String, i64, ())> =
            basis.into_iter().map(|(n, d)| (n.into(), d, ())).collect();
        Ok(Self::with_payload(items)?.0)
    }

    /// Builds a space and returns the payloads permuted into basis order.
    pub fn with_payload<T>(items: Vec<(String, i64, T)>) -> Result<(Self, Vec<T>)> {
        let mut items = items;
        items.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        let mut names = Vec::with_capacity(items.len());
        let mut degrees = Vec::with_capacity(items.len());
        let mut payload = Vec::with_capacity(items.len());
        let mut index = HashMap::with_capacity(items.len());
        for (i, (name, degree, p)) in items.into_iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateBasis(name));
            }
            names.push(name);
            degrees.push(degree);
            payload.push(p);
        }
        let mut ranges: BTreeMap<i64, Range<usize>> = BTreeMap::new();
        for (i, &d) in degrees.iter().enumerate() {
            ranges.entry(d).and_modify(|r| r.end = i + 1).or_insert(i..i + 1);
        }
        Ok((
            GradedSpace {
                names,
                degrees,
                index,
                ranges,
            },
            payload,
        ))
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownBasis(name.to_string()))
    }

    /// Basis indices of the given degree.
    pub fn in_degree(&self, degree: i64) -> Range<usize> {
        self.ranges.get(&degree).cloned().unwrap_or(0..0)
    }

    pub fn degrees_present(&self) -> impl Iterator<Item = i64> + '_ {
        self.ranges.keys().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.ranges.keys().next_back().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.ranges.keys().next().copied()
    }

    pub fn dim_in_degree(&self, degree: i64) -> usize {
        self.in_degree(degree).len()
    }

    pub fn basis(&self) -> impl Iterator<Item = (usize, &str, i64)> {
        self.names
            .iter()
            .zip(&self.degrees)
            .enumerate()
            .map(|(i, (n, &d))| (i, n.as_str(), d))
    }
}

/// A finitely supported formal linear combination of basis indices.
///
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct Element {
    terms: BTreeMap<usize, Q>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn basis(i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(i, Q::one());
        Element { terms }
    }

    pub fn term(i: usize, c: Q) -> Self {
        let mut e = Element::zero();
        e.add_term(i, c);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Q)>) -> Self {
        let mut e = Element::zero();
        for (i, c) in terms {
            e.add_term(i, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.terms.get(&i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (usize, &Q)> {
        self.terms.iter().map(|(&i, c)| (i, c))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().copied()
    }

    pub fn leading(&self) -> Option<(usize, &Q)> {
        self.terms.iter().next().map(|(&i, c)| (i, c))
    }

    pub fn add_term(&mut self, i: usize, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(i) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Element, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (&i, v) in &other.terms {
            self.add_term(i, v * c);
        }
    }

    pub fn add(&mut self, other: &Element) {
        for (&i, v) in &other.terms {
            self.add_term(i, v.clone());
        }
    }

    pub fn sub(&mut self, other: &Element) {
        for (&i, v) in &other.terms {
            self.add_term(i, -v.clone());
        }
    }

    pub fn scaled(&self, c: &Q) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        Element {
            terms: self.terms.iter().map(|(&i, v)| (i, v * c)).collect(),
        }
    }

    pub fn negated(&self) -> Element {
        Element {
            terms: self.terms.iter().map(|(&i, v)| (i, -v.clone())).collect(),
        }
    }

    pub fn remove(&mut self, i: usize) -> Option<Q> {
        self.terms.remove(&i)
    }

    /// Degree of a homogeneous element; `None` for zero.
    pub fn degree(&self, space: &GradedSpace) -> Result<Option<i64>> {
        let mut degree = None;
        for &i in self.terms.keys() {
            let d = space.degree(i);
            match degree {
                None => degree = Some(d),
                Some(e) if e != d => return Err(Error::Inhomogeneous),
                _ => {}
            }
        }
        Ok(degree)
    }

    /// Relabels basis indices through `f`, merging coincident images.
    pub fn map_indices(&self, mut f: impl FnMut(usize) -> usize) -> Element {
        let mut out = Element::zero();
        for (&i, c) in &self.terms {
            out.add_term(f(i), c.clone());
        }
        out
    }

    /// Applies a linear map given on basis vectors.
    pub fn map_linear(&self, mut f: impl FnMut(usize) -> Element) -> Element {
        let mut out = Element::zero();
        for (&i, c) in &self.terms {
            out.add_scaled(&f(i), c);
        }
        out
    }

    /// Terms sorted by the global basis order, printed as `c name + c name`.
    pub fn format(&self, space: &GradedSpace) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (&i, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                s.push_str(" + ");
            }
            let _ = write!(s, "{} {}", format_q(c), space.name(i));
        }
        s
    }
}

/// A linear map given by the images of source basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    pub degree: i64,
    pub columns: Vec<Element>,
}

impl LinearMap {
    pub fn new(degree: i64, columns: Vec<Element>) -> Self {
        LinearMap { degree, columns }
    }

    pub fn zero(source_dim: usize, degree: i64) -> Self {
        LinearMap {
            degree,
            columns: vec![Element::zero(); source_dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        LinearMap {
            degree: 0,
            columns: (0..dim).map(Element::basis).collect(),
        }
    }

    pub fn source_dim(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, i: usize) -> &Element {
        &self.columns[i]
    }

    pub fn apply(&self, v: &Element) -> Element {
        v.map_linear(|i| self.columns[i].clone())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap {
            degree: self.degree + other.degree,
            columns: other.columns.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn plus(&self, other: &LinearMap) -> LinearMap {
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| {
                let mut c = a.clone();
                c.add(b);
                c
            })
            .collect();
        LinearMap {
            degree: self.degree,
            columns,
        }
    }

    pub fn minus(&self, other: &LinearMap) -> LinearMap {
        self.plus(&other.scaled(&-Q::one()))
    }

    pub fn scaled(&self, c: &Q) -> LinearMap {
        LinearMap {
            degree: self.degree,
            columns: self.columns.iter().map(|e| e.scaled(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Element::is_zero)
    }

    /// Checks that every column respects the declared degree.
    pub fn check_degree(&self, source: &GradedSpace, target: &GradedSpace) -> Result<()> {
        for (i, col) in self.columns.iter().enumerate() {
            if let Some(d) = col.degree(target)? {
                if d != source.degree(i) + self.degree {
                    return Err(Error::DegreeMismatch(format!(
                        "image of `{}` has degree {d}, expected {}",
                        source.name(i),
                        source.degree(i) + self.degree
                    )));
                }
            }
        }
        Ok(())
    }
}
