#![allow(dead_code)]

use std::collections::HashMap;

use hoalg::homotopy::LInfAlgebra;
use hoalg::linalg::{kernel_and_image, Echelon, Inserted};
use hoalg::scalar::{int, sign};
use hoalg::transfer::ChainComplex;
use hoalg::{Element, GradedSpace, LinearMap, Q};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

fn small_int(rng: &mut ChaCha8Rng) -> Q {
    let mut c = 0;
    while c == 0 {
        c = rng.gen_range(-3i64..=3);
    }
    int(c)
}

/// Words in the generators, truncated above `weight` letters.
struct Words {
    degrees: Vec<i64>,
    weight: usize,
    index: HashMap<Vec<usize>, usize>,
    words: Vec<Vec<usize>>,
}

impl Words {
    fn id(&mut self, w: Vec<usize>) -> usize {
        if let Some(&i) = self.index.get(&w) {
            return i;
        }
        self.words.push(w.clone());
        self.index.insert(w, self.words.len() - 1);
        self.words.len() - 1
    }

    fn degree(&self, w: usize) -> i64 {
        self.words[w].iter().map(|&g| self.degrees[g]).sum()
    }

    fn mul(&mut self, a: &Element, b: &Element) -> Element {
        let mut out = Element::zero();
        for (x, c) in a.terms() {
            for (y, e) in b.terms() {
                let mut w = self.words[x].clone();
                w.extend_from_slice(&self.words[y]);
                if w.len() <= self.weight {
                    let i = self.id(w);
                    out.add_term(i, c * e);
                }
            }
        }
        out
    }

    fn elem_degree(&self, a: &Element) -> i64 {
        a.support().next().map(|w| self.degree(w)).unwrap_or(0)
    }

    fn bracket(&mut self, a: &Element, b: &Element) -> Element {
        let s = sign(self.elem_degree(a) * self.elem_degree(b));
        let mut out = self.mul(a, b);
        out.add_scaled(&self.mul(b, a), &-s);
        out
    }

    fn derivation(&mut self, on_gens: &[Element], a: &Element) -> Element {
        let mut out = Element::zero();
        for (x, c) in a.terms() {
            let word = self.words[x].clone();
            let mut before = 0;
            for p in 0..word.len() {
                let g = word[p];
                if !on_gens[g].is_zero() {
                    let left = Element::basis(self.id(word[..p].to_vec()));
                    let right = Element::basis(self.id(word[p + 1..].to_vec()));
                    let mut v = on_gens[g].clone();
                    if p > 0 {
                        v = self.mul(&left, &v);
                    }
                    if p + 1 < word.len() {
                        v = self.mul(&v, &right);
                    }
                    out.add_scaled(&v, &(c * sign(before)));
                }
                before += self.degrees[g];
            }
        }
        out
    }
}

/// A random DGL `𝕃(V)/𝕃^{>w}`: at most four generators in degrees 1..=6,
/// brackets of length at most `w` ∈ {2, 3}, and a differential that sends
/// each non-closed generator to closed generators and brackets of closed
/// generators, so that `d² = 0`. Returns `None` when the result has more
/// than `max_dim` basis elements.
pub fn random_dgl(rng: &mut ChaCha8Rng, max_dim: usize) -> Option<LInfAlgebra> {
    let n = rng.gen_range(1..=4usize);
    let mut degrees: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=6)).collect();
    degrees.sort();
    // half the time seed a triple Massey product: g0 odd and closed, d g1 ∋ [g0,g0]
    let massey = n >= 2 && rng.gen_bool(0.5);
    if massey {
        degrees[0] = if rng.gen_bool(0.7) { 1 } else { 3 };
        degrees[1] = 2 * degrees[0] + 1;
    }
    let weight = rng.gen_range(2..=3usize);
    let mut words = Words {
        degrees: degrees.clone(),
        weight,
        index: HashMap::new(),
        words: Vec::new(),
    };
    let gens: Vec<Element> = (0..n).map(|g| Element::basis(words.id(vec![g]))).collect();

    // Lie basis by left-normed brackets, echeloned per degree
    let mut basis: Vec<Element> = gens.clone();
    let mut spans: HashMap<i64, Echelon> = HashMap::new();
    for (g, v) in gens.iter().enumerate() {
        let pos = basis.iter().position(|b| b == v).unwrap();
        spans.entry(degrees[g]).or_default().insert(v, &Element::basis(pos));
    }
    let mut layer: Vec<Element> = gens.clone();
    for _ in 2..=weight {
        let mut next = Vec::new();
        for g in &gens {
            for u in &layer {
                let v = words.bracket(g, u);
                if v.is_zero() {
                    continue;
                }
                let d = words.elem_degree(&v);
                let span = spans.entry(d).or_default();
                if let Inserted::Pivot(_) = span.insert(&v, &Element::basis(basis.len())) {
                    basis.push(v.clone());
                    next.push(v);
                }
            }
        }
        layer = next;
    }
    if basis.len() > max_dim {
        return None;
    }

    // differential on generators
    let mut closed: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    if massey {
        closed[0] = true;
        closed[1] = false;
    }
    let mut on_gens = vec![Element::zero(); n];
    for g in 0..n {
        if closed[g] {
            continue;
        }
        let target = degrees[g] - 1;
        let mut v = Element::zero();
        for h in 0..n {
            if closed[h] && degrees[h] == target && rng.gen_bool(0.7) {
                v.add_scaled(&gens[h], &small_int(rng));
            }
            for k in h..n {
                if closed[h] && closed[k] && degrees[h] + degrees[k] == target && rng.gen_bool(0.7) {
                    let b = words.bracket(&gens[h], &gens[k]);
                    v.add_scaled(&b, &small_int(rng));
                }
            }
        }
        if massey && g == 1 {
            let b = words.bracket(&gens[0], &gens[0]);
            v.add_scaled(&b, &int(rng.gen_range(1..=3)));
        }
        on_gens[g] = v;
    }

    let names: Vec<(String, i64)> = basis
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let d = words.elem_degree(b);
            if i < n {
                (format!("g{i}"), d)
            } else {
                (format!("b{i}"), d)
            }
        })
        .collect();
    let (space, order) = GradedSpace::with_payload(
        names.into_iter().enumerate().map(|(i, (nm, d))| (nm, d, i)).collect(),
    )
    .unwrap();
    let mut position = vec![0; basis.len()];
    for (p, &i) in order.iter().enumerate() {
        position[i] = p;
    }
    let coords = |v: &Element, words: &Words| -> Element {
        if v.is_zero() {
            return Element::zero();
        }
        let d = words.elem_degree(v);
        let (rem, c) = spans[&d].reduce(v);
        assert!(rem.is_zero(), "left the Lie span");
        c.map_indices(|i| position[i])
    };
    let mut l = LInfAlgebra::new(space.clone());
    for (i, b) in basis.iter().enumerate() {
        let db = words.derivation(&on_gens, b);
        l.set(vec![position[i]], coords(&db, &words)).unwrap();
    }
    for a in 0..basis.len() {
        for b in a..basis.len() {
            let v = words.bracket(&basis[a], &basis[b]);
            let c = coords(&v, &words);
            l.set(vec![position[a], position[b]], c).unwrap();
        }
    }
    Some(l)
}

/// A random complex in degrees `lo..=hi` with at most `max_dim` basis
/// elements per degree; each column of `d` is a random combination of a
/// kernel basis of the next differential down.
pub fn random_complex(rng: &mut ChaCha8Rng, lo: i64, hi: i64, max_dim: usize) -> ChainComplex {
    let mut items = Vec::new();
    for d in lo..=hi {
        for k in 0..rng.gen_range(0..=max_dim) {
            items.push((format!("e{d}_{k}"), d));
        }
    }
    let space = GradedSpace::new(items).unwrap();
    let mut cols = vec![Element::zero(); space.dim()];
    for d in lo + 1..=hi {
        // kernel of d restricted to degree d − 1
        let kernel: Vec<Element> = if d - 1 == lo {
            space.in_degree(d - 1).map(Element::basis).collect()
        } else {
            kernel_and_image(space.in_degree(d - 1).map(|i| (Element::basis(i), cols[i].clone()))).0
        };
        for i in space.in_degree(d) {
            let mut v = Element::zero();
            for k in &kernel {
                if rng.gen_bool(0.5) {
                    v.add_scaled(k, &small_int(rng));
                }
            }
            cols[i] = v;
        }
    }
    let c = ChainComplex::new(space, LinearMap::new(-1, cols)).unwrap();
    assert!(c.is_complex());
    c
}

/// `A ⊗ B` with `d₀ = d_A ⊗ 1` and the perturbation `t = (−1)^{|a|} 1 ⊗ d_B`.
pub fn tensor_bicomplex(a: &ChainComplex, b: &ChainComplex) -> (ChainComplex, LinearMap) {
    let mut items = Vec::new();
    for i in 0..a.space.dim() {
        for j in 0..b.space.dim() {
            items.push((
                format!("{}*{}", a.space.name(i), b.space.name(j)),
                a.space.degree(i) + b.space.degree(j),
                (i, j),
            ));
        }
    }
    let (space, pairs) = GradedSpace::with_payload(items).unwrap();
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut d0 = Vec::new();
    let mut t = Vec::new();
    for &(i, j) in &pairs {
        d0.push(a.d.column(i).map_linear(|x| Element::basis(index[&(x, j)])));
        let s = sign(a.space.degree(i));
        t.push(b.d.column(j).map_linear(|y| Element::basis(index[&(i, y)])).scaled(&s));
    }
    (
        ChainComplex::new(space, LinearMap::new(-1, d0)).unwrap(),
        LinearMap::new(-1, t),
    )
}
