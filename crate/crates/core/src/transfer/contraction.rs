//! Contractions of chain complexes, homology contractions, splittings and
//! the basic perturbation lemma.
//!
//! Sign convention: `dK + Kd = iq − id`, with side conditions
//! `K² = Ki = qK = 0`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, Inserted};
use crate::space::{Element, GradedSpace, LinearMap};

/// A graded space with a degree −1 differential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    pub space: GradedSpace,
    pub d: LinearMap,
}

impl ChainComplex {
    pub fn new(space: GradedSpace, d: LinearMap) -> Result<Self> {
        if d.source_dim() != space.dim() || d.degree != -1 {
            return Err(Error::Invalid("differential must be a degree −1 endomorphism".into()));
        }
        d.check_degree(&space, &space)?;
        Ok(ChainComplex { space, d })
    }

    /// The complex with zero differential.
    pub fn trivial(space: GradedSpace) -> Self {
        let d = LinearMap::zero(space.dim(), -1);
        ChainComplex { space, d }
    }

    pub fn is_complex(&self) -> bool {
        self.d.compose(&self.d).is_zero()
    }

    /// Betti numbers by degree.
    pub fn homology_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        let rank_in = |deg: i64| -> usize {
            let cols: Vec<Element> = self
                .space
                .in_degree(deg)
                .map(|i| self.d.column(i).clone())
                .collect();
            crate::linalg::rank(&cols)
        };
        for deg in self.space.degrees_present().collect::<Vec<_>>() {
            let h = self.space.dim_in_degree(deg) - rank_in(deg) - rank_in(deg + 1);
            if h > 0 {
                out.insert(deg, h);
            }
        }
        out
    }
}

/// Contraction data `i: small → big`, `q: big → small`, `K: big → big`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    pub big: ChainComplex,
    pub small: ChainComplex,
    pub i: LinearMap,
    pub q: LinearMap,
    pub k: LinearMap,
    /// When set, the contraction identities are only claimed on elements of
    /// degree below this bound (the top degree of a truncated complex).
    pub exact_below: Option<i64>,
}

/// Which contraction invariants hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContractionReport {
    pub chain_maps: bool,
    pub retraction: bool,
    pub homotopy: bool,
    pub side_conditions: bool,
}

impl ContractionReport {
    pub fn passed(&self) -> bool {
        self.chain_maps && self.retraction && self.homotopy && self.side_conditions
    }
}

impl Contraction {
    pub fn new(big: ChainComplex, small: ChainComplex, i: LinearMap, q: LinearMap, k: LinearMap) -> Result<Self> {
        let shapes = [
            (i.source_dim(), small.space.dim(), i.degree, 0, "i"),
            (q.source_dim(), big.space.dim(), q.degree, 0, "q"),
            (k.source_dim(), big.space.dim(), k.degree, 1, "K"),
        ];
        for (dim, expect, deg, expect_deg, name) in shapes {
            if dim != expect || deg != expect_deg {
                return Err(Error::Invalid(format!("{name} has the wrong shape")));
            }
        }
        i.check_degree(&small.space, &big.space)?;
        q.check_degree(&big.space, &small.space)?;
        k.check_degree(&big.space, &big.space)?;
        Ok(Contraction {
            big,
            small,
            i,
            q,
            k,
            exact_below: None,
        })
    }

    /// Restricts the claimed identities to degrees below `bound`.
    pub fn with_exact_below(mut self, bound: i64) -> Self {
        self.exact_below = Some(bound);
        self
    }

    /// Whether `m` vanishes on every basis element of `space` in the exact
    /// range.
    fn vanishes(&self, m: &LinearMap, space: &GradedSpace) -> bool {
        (0..space.dim())
            .filter(|&j| self.exact_below.is_none_or(|b| space.degree(j) < b))
            .all(|j| m.column(j).is_zero())
    }

    pub fn check(&self) -> ContractionReport {
        let d = &self.big.d;
        let ds = &self.small.d;
        let nb = self.big.space.dim();
        let ns = self.small.space.dim();
        let (bs, ss) = (&self.big.space, &self.small.space);
        let chain_maps = self.vanishes(&d.compose(&self.i).minus(&self.i.compose(ds)), ss)
            && self.vanishes(&ds.compose(&self.q).minus(&self.q.compose(d)), bs);
        let retraction = self.vanishes(&self.q.compose(&self.i).minus(&LinearMap::identity(ns)), ss);
        let lhs = d.compose(&self.k).plus(&self.k.compose(d));
        let rhs = self.i.compose(&self.q).minus(&LinearMap::identity(nb));
        let homotopy = self.vanishes(&lhs.minus(&rhs), bs);
        let side_conditions = self.vanishes(&self.k.compose(&self.k), bs)
            && self.vanishes(&self.k.compose(&self.i), ss)
            && self.vanishes(&self.q.compose(&self.k), bs);
        ContractionReport {
            chain_maps,
            retraction,
            homotopy,
            side_conditions,
        }
    }

    pub fn verify(&self) -> Result<()> {
        let r = self.check();
        let failures: Vec<&str> = [
            (r.chain_maps, "i and q must be chain maps"),
            (r.retraction, "qi = id"),
            (r.homotopy, "dK + Kd = iq − id"),
            (r.side_conditions, "K² = Ki = qK = 0"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, m)| m)
        .collect();
        if failures.is_empty() {
            Ok(())
        } else {
            Err(Error::ContractionInvariant(failures.join("; ")))
        }
    }

    /// Enforces the side conditions on a homotopy satisfying the homotopy
    /// equation: `K ↦ (1 − iq) K (1 − iq)` and then `K ↦ −K d K`.
    pub fn normalized(&self) -> Contraction {
        let nb = self.big.space.dim();
        let p = LinearMap::identity(nb).minus(&self.i.compose(&self.q));
        let k1 = p.compose(&self.k).compose(&p);
        let k2 = k1.compose(&self.big.d).compose(&k1).scaled(&crate::scalar::int(-1));
        let mut out = self.clone();
        out.k = k2;
        out
    }
}

/// Tuning for [`homology_contraction`].
#[derive(Debug, Clone, Default)]
pub struct ContractionOptions {
    /// Cycles tried first, in order, as homology representatives.
    pub preferred: Vec<Element>,
}

/// Contracts a complex onto its homology by exact elimination, degree by
/// degree, pivoting on the earliest basis element.
///
/// A representative that is a single basis vector with coefficient one
/// keeps that vector's name; other classes are named `h<degree>_<k>`.
pub fn homology_contraction(complex: &ChainComplex, options: &ContractionOptions) -> Result<Contraction> {
    if !complex.is_complex() {
        return Err(Error::ContractionInvariant("d² ≠ 0".into()));
    }
    let space = &complex.space;
    let d = &complex.d;
    let nb = space.dim();
    let degrees: Vec<i64> = space.degrees_present().collect();

    // Boundary echelons: rows are d(v), payloads are the chosen preimages v.
    let mut boundaries: BTreeMap<i64, Echelon> = BTreeMap::new();
    let mut cycles: BTreeMap<i64, Vec<Element>> = BTreeMap::new();
    for &deg in &degrees {
        let mut e = Echelon::new();
        let mut z = Vec::new();
        for j in space.in_degree(deg) {
            if let Inserted::Dependent(k) = e.insert(d.column(j), &Element::basis(j)) {
                z.push(k);
            }
        }
        boundaries.insert(deg - 1, e);
        cycles.insert(deg, z);
    }

    // Cycle echelons: boundary rows carry the preimage (indices < nb); chosen
    // representatives carry nb + their homology index.
    let mut reps: Vec<(i64, Element)> = Vec::new();
    let mut zech: BTreeMap<i64, Echelon> = BTreeMap::new();
    for &deg in &degrees {
        let mut e = Echelon::new();
        if let Some(b) = boundaries.get(&deg) {
            for (_, row, payload) in b.rows() {
                e.insert(row, payload);
            }
        }
        let preferred = options.preferred.iter().filter(|v| {
            v.degree(space).ok().flatten() == Some(deg) && d.apply(v).is_zero()
        });
        let basis_cycles = cycles.get(&deg).into_iter().flatten();
        for v in preferred.chain(basis_cycles) {
            let h = reps.len();
            if let Inserted::Pivot(_) = e.insert(v, &Element::basis(nb + h)) {
                reps.push((deg, v.clone()));
            }
        }
        zech.insert(deg, e);
    }

    // Names and small space.
    let mut items = Vec::with_capacity(reps.len());
    let mut per_degree: BTreeMap<i64, usize> = BTreeMap::new();
    for (h, (deg, v)) in reps.iter().enumerate() {
        let single = match v.terms().collect::<Vec<_>>().as_slice() {
            [(b, c)] if **c == crate::scalar::one() => Some(space.name(*b).to_string()),
            _ => None,
        };
        let count = per_degree.entry(*deg).or_insert(0);
        let name = single.unwrap_or_else(|| format!("h{deg}_{count}"));
        *count += 1;
        items.push((name, *deg, h));
    }
    let (small_space, order) = GradedSpace::with_payload(items)?;
    let mut position = vec![0usize; order.len()];
    for (p, &h) in order.iter().enumerate() {
        position[h] = p;
    }

    let i_cols: Vec<Element> = order.iter().map(|&h| reps[h].1.clone()).collect();
    let mut q_cols = Vec::with_capacity(nb);
    let mut k_cols = Vec::with_capacity(nb);
    for j in 0..nb {
        let deg = space.degree(j);
        let v = Element::basis(j);
        // part of v in the chosen complement of the cycles
        let dv = d.column(j);
        let b = match boundaries.get(&(deg - 1)) {
            Some(e) if !dv.is_zero() => e.reduce(dv).1,
            _ => Element::zero(),
        };
        let mut w = v;
        w.sub(&b);
        let (rem, combo) = zech[&deg].reduce(&w);
        if !rem.is_zero() {
            return Err(Error::RankDeficiency(format!(
                "cycle decomposition failed in degree {deg}"
            )));
        }
        let mut qv = Element::zero();
        let mut kv = Element::zero();
        for (idx, c) in combo.terms() {
            if idx >= nb {
                qv.add_term(position[idx - nb], c.clone());
            } else {
                kv.add_term(idx, -c.clone());
            }
        }
        q_cols.push(qv);
        k_cols.push(kv);
    }
    let small = ChainComplex::trivial(small_space);
    let c = Contraction::new(
        complex.clone(),
        small,
        LinearMap::new(0, i_cols),
        LinearMap::new(0, q_cols),
        LinearMap::new(1, k_cols),
    )?;
    c.verify()?;
    Ok(c)
}

/// The decomposition `big = B ⊕ dB ⊕ C` induced by a contraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splitting {
    pub b: Vec<Element>,
    /// `db[k] = d(b[k])`.
    pub db: Vec<Element>,
    pub c: Vec<Element>,
}

/// `C = im(iq)`, `B = im(Kd)`, `dB = d(B)`, checked to be a direct sum
/// spanning every degree in which the contraction is exact.
pub fn splitting_from_contraction(c: &Contraction) -> Result<Splitting> {
    let space = &c.big.space;
    let d = &c.big.d;
    let kd = c.k.compose(d);
    let mut b = Vec::new();
    let mut db = Vec::new();
    let mut all = Echelon::new();
    for deg in space.degrees_present().collect::<Vec<_>>() {
        let mut e = Echelon::new();
        for j in space.in_degree(deg) {
            let v = kd.column(j);
            if !v.is_zero() {
                if let Inserted::Pivot(_) = e.insert(v, &Element::zero()) {
                    b.push(v.clone());
                    db.push(d.apply(v));
                }
            }
        }
    }
    let cs: Vec<Element> = (0..c.small.space.dim()).map(|h| c.i.column(h).clone()).collect();
    for v in b.iter().chain(&db).chain(&cs) {
        if let Inserted::Dependent(_) = all.insert(v, &Element::zero()) {
            return Err(Error::RankDeficiency("B, dB and C are not independent".into()));
        }
    }
    let exact = |deg: i64| c.exact_below.is_none_or(|b| deg < b);
    for deg in space.degrees_present() {
        if !exact(deg) {
            continue;
        }
        let found = b
            .iter()
            .chain(&db)
            .chain(&cs)
            .filter(|v| v.degree(space).ok().flatten() == Some(deg))
            .count();
        if found != space.dim_in_degree(deg) {
            return Err(Error::RankDeficiency(format!(
                "B ⊕ dB ⊕ C has rank {found} in degree {deg}, of dimension {}",
                space.dim_in_degree(deg)
            )));
        }
    }
    if cs.iter().any(|v| !d.apply(v).is_zero()) {
        return Err(Error::RankDeficiency("d does not vanish on C".into()));
    }
    Ok(Splitting { b, db, c: cs })
}

/// Basic perturbation lemma for `d + t`: with `A = Σ (tK)ⁿ t`,
/// `i' = i + KAi`, `q' = q + qAK`, `K' = K + KAK` and small differential
/// `d_small + qAi`.
pub fn perturb_contraction(c: &Contraction, t: &LinearMap, max_steps: usize) -> Result<Contraction> {
    let nb = c.big.space.dim();
    if t.source_dim() != nb || t.degree != -1 {
        return Err(Error::Invalid("perturbation must be a degree −1 endomorphism".into()));
    }
    let mut a_cols = Vec::with_capacity(nb);
    for j in 0..nb {
        let mut x = t.column(j).clone();
        let mut acc = x.clone();
        let mut steps = 0;
        while !x.is_zero() {
            steps += 1;
            if steps > max_steps {
                return Err(Error::NotNilpotent(max_steps));
            }
            x = t.apply(&c.k.apply(&x));
            acc.add(&x);
        }
        a_cols.push(acc);
    }
    let a = LinearMap::new(-1, a_cols);
    let big_d = c.big.d.plus(t);
    let big = ChainComplex::new(c.big.space.clone(), big_d)?;
    let small_d = c.small.d.plus(&c.q.compose(&a).compose(&c.i));
    let small = ChainComplex::new(c.small.space.clone(), small_d)?;
    let i = c.i.plus(&c.k.compose(&a).compose(&c.i));
    let q = c.q.plus(&c.q.compose(&a).compose(&c.k));
    let k = c.k.plus(&c.k.compose(&a).compose(&c.k));
    let mut out = Contraction::new(big, small, i, q, k)?;
    out.exact_below = c.exact_below;
    out.verify()?;
    Ok(out)
}
