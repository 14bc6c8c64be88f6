//! Sparse row echelon forms over `Q` with tracked payloads.
//!
//! Every row carries a payload that transforms linearly alongside it, so a
//! reduction also reports which combination of inserted vectors it used.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::Q;
use crate::space::Element;

#[derive(Debug, Clone, Default)]
pub struct Echelon {
    /// pivot index -> (row with leading coefficient 1 at the pivot, payload)
    rows: BTreeMap<usize, (Element, Element)>,
}

/// Outcome of [`Echelon::insert`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inserted {
    /// A new row was stored with this pivot.
    Pivot(usize),
    /// The vector was dependent; the payload of `v − (its reduction)` is the
    /// returned kernel combination.
    Dependent(Element),
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &Element, &Element)> {
        self.rows.iter().map(|(&p, (r, l))| (p, r, l))
    }

    /// Reduces `v` against every pivot. Returns the remainder (supported off
    /// the pivots) and the combined payload `Σ c_r · payload_r` with
    /// `v = remainder + Σ c_r · row_r`.
    pub fn reduce(&self, v: &Element) -> (Element, Element) {
        let mut rem = v.clone();
        let mut combo = Element::zero();
        let mut cursor = 0usize;
        loop {
            let next = rem
                .terms()
                .map(|(i, _)| i)
                .find(|&i| i >= cursor && self.rows.contains_key(&i));
            let Some(p) = next else {
                return (rem, combo);
            };
            let c = rem.coeff(p);
            let (row, payload) = &self.rows[&p];
            rem.add_scaled(row, &-c.clone());
            combo.add_scaled(payload, &c);
            cursor = p + 1;
        }
    }

    pub fn contains(&self, v: &Element) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Inserts `v` with `payload`. Dependent vectors are not stored.
    pub fn insert(&mut self, v: &Element, payload: &Element) -> Inserted {
        let (rem, combo) = self.reduce(v);
        let mut residual = payload.clone();
        residual.sub(&combo);
        if rem.is_zero() {
            return Inserted::Dependent(residual);
        }
        let (p, lead) = rem.leading().map(|(p, c)| (p, c.clone())).unwrap();
        let inv = Q::one() / lead;
        let row = rem.scaled(&inv);
        let payload = residual.scaled(&inv);
        // keep rows fully reduced at the new pivot
        let updates: Vec<usize> = self
            .rows
            .iter()
            .filter(|(_, (r, _))| !r.coeff(p).is_zero())
            .map(|(&k, _)| k)
            .collect();
        for k in updates {
            let entry = self.rows.get_mut(&k).unwrap();
            let c = entry.0.coeff(p);
            entry.0.add_scaled(&row, &-c.clone());
            entry.1.add_scaled(&payload, &-c);
        }
        self.rows.insert(p, (row, payload));
        Inserted::Pivot(p)
    }
}

/// Kernel basis and image echelon of a linear map given on the listed
/// source vectors (`(source vector, image)` pairs). Image rows carry the
/// source combination mapping onto them.
pub fn kernel_and_image(columns: impl IntoIterator<Item = (Element, Element)>) -> (Vec<Element>, Echelon) {
    let mut image = Echelon::new();
    let mut kernel = Vec::new();
    for (src, img) in columns {
        if let Inserted::Dependent(k) = image.insert(&img, &src) {
            if !k.is_zero() {
                kernel.push(k);
            }
        }
    }
    (kernel, image)
}

/// Rank of a list of vectors.
pub fn rank(vectors: &[Element]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v, &Element::zero());
    }
    e.rank()
}

/// Solves `Σ c_i · columns_i = target` when possible.
pub fn solve(columns: &[Element], target: &Element) -> Option<Element> {
    let mut e = Echelon::new();
    for (i, c) in columns.iter().enumerate() {
        e.insert(c, &Element::basis(i));
    }
    let (rem, combo) = e.reduce(target);
    if rem.is_zero() {
        Some(combo)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn v(terms: &[(usize, i64)]) -> Element {
        Element::from_terms(terms.iter().map(|&(i, c)| (i, q(c, 1))))
    }

    #[test]
    fn dependent_vectors_report_kernel_combinations() {
        let mut e = Echelon::new();
        assert_eq!(e.insert(&v(&[(0, 1), (1, 1)]), &Element::basis(0)), Inserted::Pivot(0));
        assert_eq!(e.insert(&v(&[(1, 2)]), &Element::basis(1)), Inserted::Pivot(1));
        match e.insert(&v(&[(0, 2), (1, 4)]), &Element::basis(2)) {
            Inserted::Dependent(k) => {
                // 2(x0 + x1) + (2 x1) = 2x0 + 4x1
                assert_eq!(k, Element::from_terms([(2, q(1, 1)), (0, q(-2, 1)), (1, q(-1, 1))]));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn reduce_reconstructs_the_input() {
        let cols = vec![v(&[(0, 1), (2, 3)]), v(&[(1, 1), (2, 1)]), v(&[(2, 5)])];
        let target = v(&[(0, 2), (1, -1), (2, 7)]);
        let c = solve(&cols, &target).unwrap();
        let mut back = Element::zero();
        for (i, coeff) in c.terms() {
            back.add_scaled(&cols[i], coeff);
        }
        assert_eq!(back, target);
        assert_eq!(rank(&cols), 3);
        assert!(solve(&cols[..1], &target).is_none());
    }
}
