//! Sparse multivariate polynomials over the Gaussian rationals, with
//! Buchberger Gröbner bases, normal-form reduction, Rabinowitsch
//! saturation and exact linear-subsystem solving.
//!
//! Variables are plain `u32` indices; callers keep their own tables
//! mapping indices to meaning. A larger index is a greater variable, so
//! a freshly allocated variable (e.g. the saturation variable) is
//! automatically the greatest in the order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::gauss::GaussianRational;

pub type Var = u32;

/// A monomial as a sorted sparse exponent vector (no zero exponents).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    exps: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        Monomial { exps: vec![(v, 1)] }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial {
            exps: map.into_iter().collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.exps
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|idx| self.exps[idx].1)
            .unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.exps.iter().map(|&(v, _)| v)
    }

    pub fn exps(&self) -> &[(Var, u32)] {
        &self.exps
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut a, mut b) = (self.exps.iter().peekable(), other.exps.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ea)), Some(&&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => {
                        out.push((va, ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        out.push((vb, eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        out.push((va, ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(&&p), None) => {
                    out.push(p);
                    a.next();
                }
                (None, Some(&&p)) => {
                    out.push(p);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial { exps: out }
    }

    /// `self / other` when `other` divides `self`.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.exps.len());
        let mut b = other.exps.iter().peekable();
        for &(v, e) in &self.exps {
            while let Some(&&(vb, _)) = b.peek() {
                if vb < v {
                    return None; // divisor has a variable we lack
                }
                break;
            }
            match b.peek() {
                Some(&&(vb, eb)) if vb == v => {
                    if eb > e {
                        return None;
                    }
                    if e - eb > 0 {
                        out.push((v, e - eb));
                    }
                    b.next();
                }
                _ => out.push((v, e)),
            }
        }
        if b.next().is_some() {
            return None;
        }
        Some(Monomial { exps: out })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut map: BTreeMap<Var, u32> = self.exps.iter().copied().collect();
        for &(v, e) in &other.exps {
            let slot = map.entry(v).or_insert(0);
            *slot = (*slot).max(e);
        }
        Monomial {
            exps: map.into_iter().collect(),
        }
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        let theirs: BTreeSet<Var> = other.vars().collect();
        !self.vars().any(|v| theirs.contains(&v))
    }

    fn cmp_lex(a: &Monomial, b: &Monomial) -> Ordering {
        // Greater variable = larger index; scan from the greatest down.
        let (mut i, mut j) = (a.exps.len(), b.exps.len());
        loop {
            match (i, j) {
                (0, 0) => return Ordering::Equal,
                (0, _) => return Ordering::Less,
                (_, 0) => return Ordering::Greater,
                _ => {
                    let (va, ea) = a.exps[i - 1];
                    let (vb, eb) = b.exps[j - 1];
                    match va.cmp(&vb) {
                        Ordering::Greater => return Ordering::Greater,
                        Ordering::Less => return Ordering::Less,
                        Ordering::Equal => match ea.cmp(&eb) {
                            Ordering::Equal => {
                                i -= 1;
                                j -= 1;
                            }
                            ord => return ord,
                        },
                    }
                }
            }
        }
    }

    fn cmp_grevlex(a: &Monomial, b: &Monomial) -> Ordering {
        match a.degree().cmp(&b.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Equal degree: the monomial with the smaller exponent on the
        // least variable where they differ is the greater one.
        let (mut i, mut j) = (0usize, 0usize);
        loop {
            match (a.exps.get(i), b.exps.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, _)), None) => return Ordering::Less,
                (None, Some(&(_, _))) => return Ordering::Greater,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => return Ordering::Less, // a has the smaller var with e > 0
                    Ordering::Greater => return Ordering::Greater,
                    Ordering::Equal => match ea.cmp(&eb) {
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                    },
                },
            }
        }
    }
}

/// Monomial orders used by the reduction and Gröbner routines.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => Monomial::cmp_lex(a, b),
            MonomialOrder::GrevLex => Monomial::cmp_grevlex(a, b),
        }
    }
}

/// Sparse polynomial; terms kept sorted descending under grevlex as the
/// canonical storage order (so equality and hashing are structural).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Polynomial {
    terms: Vec<(Monomial, GaussianRational)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        if c.is_zero() {
            Polynomial::zero()
        } else {
            Polynomial {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn var(v: Var) -> Self {
        Polynomial {
            terms: vec![(Monomial::var(v), GaussianRational::one())],
        }
    }

    pub fn term(m: Monomial, c: GaussianRational) -> Self {
        if c.is_zero() {
            Polynomial::zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    pub fn from_terms(raw: Vec<(Monomial, GaussianRational)>) -> Self {
        let mut map: BTreeMap<CanonKey, GaussianRational> = BTreeMap::new();
        for (m, c) in raw {
            if c.is_zero() {
                continue;
            }
            let entry = map.entry(CanonKey(m)).or_insert_with(GaussianRational::zero);
            *entry = &*entry + &c;
        }
        let mut terms: Vec<(Monomial, GaussianRational)> = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k.0, c))
            .collect();
        terms.reverse(); // descending
        Polynomial { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn constant_value(&self) -> Option<GaussianRational> {
        if self.is_zero() {
            Some(GaussianRational::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn terms(&self) -> &[(Monomial, GaussianRational)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.iter().flat_map(|(m, _)| m.vars()).collect()
    }

    pub fn max_var(&self) -> Option<Var> {
        self.vars().into_iter().max()
    }

    /// Leading term under `order`; None for the zero polynomial.
    pub fn leading(&self, order: MonomialOrder) -> Option<(&Monomial, &GaussianRational)> {
        match order {
            // storage order is grevlex-descending already
            MonomialOrder::GrevLex => self.terms.first().map(|(m, c)| (m, c)),
            MonomialOrder::Lex => self
                .terms
                .iter()
                .max_by(|(a, _), (b, _)| Monomial::cmp_lex(a, b))
                .map(|(m, c)| (m, c)),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out: Vec<(Monomial, GaussianRational)> =
            Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&(ma, ca)), Some(&(mb, cb))) => {
                    match Monomial::cmp_grevlex(ma, mb) {
                        Ordering::Greater => {
                            out.push((ma.clone(), ca.clone()));
                            a.next();
                        }
                        Ordering::Less => {
                            out.push((mb.clone(), cb.clone()));
                            b.next();
                        }
                        Ordering::Equal => {
                            let c = ca + cb;
                            if !c.is_zero() {
                                out.push((ma.clone(), c));
                            }
                            a.next();
                            b.next();
                        }
                    }
                }
                (Some(&(m, c)), None) => {
                    out.push((m.clone(), c.clone()));
                    a.next();
                }
                (None, Some(&(m, c))) => {
                    out.push((m.clone(), c.clone()));
                    b.next();
                }
                (None, None) => break,
            }
        }
        Polynomial { terms: out }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &GaussianRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Multiply by a single term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &GaussianRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        if m.is_one() {
            return self.scale(c);
        }
        // Multiplying by a fixed monomial preserves the grevlex order.
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), cc * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut acc = Polynomial::zero();
        for (m, c) in &other.terms {
            acc = acc.add(&self.mul_term(m, c));
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Normalize to a monic leading coefficient under `order`.
    pub fn monic(&self, order: MonomialOrder) -> Polynomial {
        match self.leading(order) {
            None => Polynomial::zero(),
            Some((_, c)) => {
                if c.is_one() {
                    self.clone()
                } else {
                    let inv = c.inv();
                    self.scale(&inv)
                }
            }
        }
    }

    /// Substitute a single variable by a constant.
    pub fn substitute(&self, v: Var, value: &GaussianRational) -> Polynomial {
        let mut raw = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                raw.push((m.clone(), c.clone()));
            } else {
                let rest = Monomial {
                    exps: m.exps.iter().copied().filter(|&(w, _)| w != v).collect(),
                };
                raw.push((rest, c * &value.pow(e)));
            }
        }
        Polynomial::from_terms(raw)
    }

    /// Substitute several variables at once.
    pub fn substitute_map(&self, map: &BTreeMap<Var, GaussianRational>) -> Polynomial {
        let mut raw = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in &m.exps {
                match map.get(&v) {
                    Some(val) => coeff = &coeff * &val.pow(e),
                    None => rest.push((v, e)),
                }
            }
            raw.push((Monomial { exps: rest }, coeff));
        }
        Polynomial::from_terms(raw)
    }

    /// Full evaluation; `None` when a variable has no assigned value.
    pub fn eval(&self, map: &BTreeMap<Var, GaussianRational>) -> Option<GaussianRational> {
        let p = self.substitute_map(map);
        p.constant_value()
    }

    /// Renumber variables; used when moving scalars between rings.
    pub fn remap_vars(&self, f: impl Fn(Var) -> Var) -> Polynomial {
        Polynomial::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| {
                    (
                        Monomial::from_pairs(m.exps.iter().map(|&(v, e)| (f(v), e))),
                        c.clone(),
                    )
                })
                .collect(),
        )
    }
}

/// Monomial wrapper ordered by grevlex, for canonical term collection.
#[derive(PartialEq, Eq)]
struct CanonKey(Monomial);

impl Ord for CanonKey {
    fn cmp(&self, other: &Self) -> Ordering {
        Monomial::cmp_grevlex(&self.0, &other.0)
    }
}
impl PartialOrd for CanonKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "({})", c)?;
            } else {
                let mono: Vec<String> = m
                    .exps
                    .iter()
                    .map(|&(v, e)| {
                        if e == 1 {
                            format!("v{}", v)
                        } else {
                            format!("v{}^{}", v, e)
                        }
                    })
                    .collect();
                if c.is_one() {
                    write!(f, "{}", mono.join("*"))?;
                } else {
                    write!(f, "({})*{}", c, mono.join("*"))?;
                }
            }
        }
        Ok(())
    }
}

/// Normal form of `p` modulo the (ordered) list `basis`: no remaining
/// term is divisible by any leading term of `basis`. Deterministic in
/// the listing order of `basis`.
pub fn reduce(p: &Polynomial, basis: &[Polynomial], order: MonomialOrder) -> Polynomial {
    let leads: Vec<(&Polynomial, Monomial, GaussianRational)> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            let (m, c) = g.leading(order).expect("nonzero");
            (g, m.clone(), c.clone())
        })
        .collect();
    if leads.is_empty() {
        return p.clone();
    }
    let mut work = p.clone();
    let mut remainder: Vec<(Monomial, GaussianRational)> = Vec::new();
    'outer: while !work.is_zero() {
        let (lm, lc) = {
            let (m, c) = work.leading(order).expect("nonzero");
            (m.clone(), c.clone())
        };
        for (g, gm, gc) in &leads {
            if let Some(q) = lm.try_div(gm) {
                let factor = &lc / gc;
                work = work.sub(&g.mul_term(&q, &factor));
                continue 'outer;
            }
        }
        // leading term irreducible: move it to the remainder
        remainder.push((lm.clone(), lc.clone()));
        work = work.sub(&Polynomial::term(lm, lc));
    }
    Polynomial::from_terms(remainder)
}

/// Resource caps for Buchberger's algorithm. Exceeding either cap
/// aborts with `ResourceLimit`, which callers must treat as
/// "inconclusive" rather than as a mathematical answer.
#[derive(Clone, Copy, Debug)]
pub struct GbConfig {
    pub max_pairs: usize,
    pub max_degree: u32,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig {
            max_pairs: 200_000,
            max_degree: 12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("resource limit exceeded in Groebner computation: {0}")]
pub struct ResourceLimit(pub String);

fn s_polynomial(f: &Polynomial, g: &Polynomial, order: MonomialOrder) -> Polynomial {
    let (fm, fc) = f.leading(order).expect("nonzero");
    let (gm, gc) = g.leading(order).expect("nonzero");
    let l = fm.lcm(gm);
    let qf = l.try_div(fm).expect("lcm divisible");
    let qg = l.try_div(gm).expect("lcm divisible");
    f.mul_term(&qf, &fc.inv()).sub(&g.mul_term(&qg, &gc.inv()))
}

/// Buchberger's algorithm with the normal selection strategy and both
/// classical pair-elimination criteria; returns the reduced Gröbner
/// basis (monic, sorted descending by leading monomial).
pub fn groebner(
    gens: &[Polynomial],
    order: MonomialOrder,
    config: &GbConfig,
) -> Result<Vec<Polynomial>, ResourceLimit> {
    let mut basis: Vec<Polynomial> = Vec::new();
    for g in gens {
        if !g.is_zero() {
            let m = g.monic(order);
            if !basis.contains(&m) {
                basis.push(m);
            }
        }
    }
    if basis.is_empty() {
        return Ok(Vec::new());
    }

    // Pair queue ordered by lcm under `order` (normal strategy).
    let mut queue: BTreeSet<(PairKey, usize, usize)> = BTreeSet::new();
    let mut processed: BTreeSet<(usize, usize)> = BTreeSet::new();
    let lead = |basis: &[Polynomial], i: usize| -> Monomial {
        basis[i].leading(order).expect("nonzero").0.clone()
    };
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let l = lead(&basis, i).lcm(&lead(&basis, j));
            queue.insert((PairKey::new(l, order), i, j));
        }
    }

    let mut pairs_handled: usize = 0;
    while let Some(entry) = queue.iter().next().cloned() {
        queue.remove(&entry);
        let (key, i, j) = entry;
        pairs_handled += 1;
        if pairs_handled > config.max_pairs {
            return Err(ResourceLimit(format!(
                "pair budget {} exhausted",
                config.max_pairs
            )));
        }
        processed.insert((i, j));

        let li = lead(&basis, i);
        let lj = lead(&basis, j);
        // First Buchberger criterion: coprime leading monomials.
        if li.coprime(&lj) {
            continue;
        }
        // Chain criterion: some k with lead(k) | lcm(i,j) and both
        // (i,k) and (j,k) already handled.
        let lcm_ij = &key.mono;
        let mut skip = false;
        for k in 0..basis.len() {
            if k == i || k == j {
                continue;
            }
            if lcm_ij.try_div(&lead(&basis, k)).is_some() {
                let p1 = (i.min(k), i.max(k));
                let p2 = (j.min(k), j.max(k));
                if processed.contains(&p1) && processed.contains(&p2) {
                    skip = true;
                    break;
                }
            }
        }
        if skip {
            continue;
        }

        let s = s_polynomial(&basis[i], &basis[j], order);
        let r = reduce(&s, &basis, order);
        if r.is_zero() {
            continue;
        }
        if r.total_degree() > config.max_degree {
            return Err(ResourceLimit(format!(
                "degree cap {} exceeded (reached {})",
                config.max_degree,
                r.total_degree()
            )));
        }
        let r = r.monic(order);
        let new_idx = basis.len();
        basis.push(r);
        for t in 0..new_idx {
            let l = lead(&basis, t).lcm(&lead(&basis, new_idx));
            queue.insert((PairKey::new(l, order), t, new_idx));
        }
        if queue.len() > config.max_pairs {
            return Err(ResourceLimit(format!(
                "pair queue exceeded {}",
                config.max_pairs
            )));
        }
    }

    Ok(inter_reduce(basis, order))
}

/// Minimalize and tail-reduce a Gröbner basis; the result is the unique
/// reduced basis for the ideal under `order`.
fn inter_reduce(mut basis: Vec<Polynomial>, order: MonomialOrder) -> Vec<Polynomial> {
    // minimalize: drop any element whose lead is divisible by another's
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let (mi, _) = basis[i].leading(order).expect("nonzero");
        let mi = mi.clone();
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (mj, _) = basis[j].leading(order).expect("nonzero");
            if mi.try_div(mj).is_some() && (mj != &mi || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let mut minimal: Vec<Polynomial> = basis
        .drain(..)
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect();
    // tail-reduce each element against the others
    let mut changed = true;
    while changed {
        changed = false;
        for idx in 0..minimal.len() {
            let others: Vec<Polynomial> = minimal
                .iter()
                .enumerate()
                .filter_map(|(t, g)| (t != idx).then(|| g.clone()))
                .collect();
            let red = reduce(&minimal[idx], &others, order).monic(order);
            if red != minimal[idx] {
                minimal[idx] = red;
                changed = true;
            }
        }
        minimal.retain(|g| !g.is_zero());
    }
    minimal.sort_by(|a, b| {
        let (ma, _) = a.leading(order).expect("nonzero");
        let (mb, _) = b.leading(order).expect("nonzero");
        order.cmp(mb, ma)
    });
    minimal
}

/// Queue key: pairs ordered by their lcm monomial under the active
/// order, ties broken by indices for determinism.
#[derive(Clone, PartialEq, Eq, Debug)]
struct PairKey {
    mono: Monomial,
    order: MonomialOrder,
}

impl PairKey {
    fn new(mono: Monomial, order: MonomialOrder) -> Self {
        PairKey { mono, order }
    }
}

impl Ord for PairKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order
            .cmp(&self.mono, &other.mono)
            .then_with(|| Monomial::cmp_grevlex(&self.mono, &other.mono))
    }
}
impl PartialOrd for PairKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial ideal with an optional cached Gröbner basis.
#[derive(Clone, Debug, Default)]
pub struct Ideal {
    pub gens: Vec<Polynomial>,
    cache: Option<(MonomialOrder, Vec<Polynomial>)>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Triviality {
    Yes,
    No,
    Inconclusive,
}

impl Ideal {
    pub fn new(gens: Vec<Polynomial>) -> Self {
        Ideal { gens, cache: None }
    }

    pub fn groebner(
        &mut self,
        order: MonomialOrder,
        config: &GbConfig,
    ) -> Result<&[Polynomial], ResourceLimit> {
        let valid = matches!(&self.cache, Some((o, _)) if *o == order);
        if !valid {
            let gb = groebner(&self.gens, order, config)?;
            self.cache = Some((order, gb));
        }
        Ok(&self.cache.as_ref().expect("cached").1)
    }

    /// Is `1` in the ideal? `Inconclusive` on resource exhaustion.
    pub fn is_trivial(&mut self, config: &GbConfig) -> Triviality {
        match self.groebner(MonomialOrder::GrevLex, config) {
            Ok(gb) => {
                if gb.len() == 1 && gb[0].is_one() {
                    Triviality::Yes
                } else {
                    Triviality::No
                }
            }
            Err(_) => Triviality::Inconclusive,
        }
    }

    /// Rabinowitsch trick: adjoin `t*p - 1` over a fresh greatest
    /// variable `t`, cutting the vanishing locus of `p` out of the
    /// solution set. Returns the extended ideal and the fresh variable.
    pub fn saturate_nonzero(&self, p: &Polynomial) -> (Ideal, Var) {
        assert!(!p.is_zero(), "saturation by the zero polynomial");
        let max_var = self
            .gens
            .iter()
            .chain(std::iter::once(p))
            .filter_map(|q| q.max_var())
            .max();
        let t = max_var.map_or(0, |v| v + 1);
        let mut gens = self.gens.clone();
        gens.push(p.mul(&Polynomial::var(t)).sub(&Polynomial::one()));
        (Ideal::new(gens), t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("linear subsystem is inconsistent")]
pub struct Inconsistent;

/// Substitute `assigned` into `eqs`, collect the equations that became
/// linear, solve them jointly by exact Gaussian elimination, and return
/// the variable assignments that are forced (propagating to fixpoint).
pub fn solve_linear_subsystem(
    eqs: &[Polynomial],
    assigned: &BTreeMap<Var, GaussianRational>,
) -> Result<BTreeMap<Var, GaussianRational>, Inconsistent> {
    let mut forced: BTreeMap<Var, GaussianRational> = BTreeMap::new();
    let mut work: Vec<Polynomial> = eqs
        .iter()
        .map(|p| p.substitute_map(assigned))
        .collect();
    loop {
        let mut rows: Vec<(BTreeMap<Var, GaussianRational>, GaussianRational)> = Vec::new();
        for p in &work {
            if p.is_zero() {
                continue;
            }
            if p.total_degree() == 0 {
                return Err(Inconsistent); // nonzero constant
            }
            if p.total_degree() > 1 {
                continue;
            }
            let mut coeffs = BTreeMap::new();
            let mut constant = GaussianRational::zero();
            for (m, c) in p.terms() {
                if m.is_one() {
                    constant = &constant + c;
                } else {
                    let v = m.vars().next().expect("degree-1 term");
                    coeffs.insert(v, c.clone());
                }
            }
            rows.push((coeffs, constant));
        }
        // forward elimination, pivoting on the smallest variable
        let mut echelon: Vec<(BTreeMap<Var, GaussianRational>, GaussianRational)> = Vec::new();
        for (mut coeffs, mut constant) in rows {
            loop {
                let pivot = match coeffs.keys().next().copied() {
                    Some(v) => v,
                    None => {
                        if !constant.is_zero() {
                            return Err(Inconsistent);
                        }
                        break;
                    }
                };
                if let Some((pc, pk)) = echelon
                    .iter()
                    .find(|(c, _)| c.keys().next() == Some(&pivot))
                    .map(|(c, k)| (c.clone(), k.clone()))
                {
                    // eliminate the pivot using the stored row
                    let factor = &coeffs[&pivot] / &pc[&pivot];
                    for (w, cw) in &pc {
                        let entry = coeffs.entry(*w).or_insert_with(GaussianRational::zero);
                        *entry = &*entry - &(&factor * cw);
                    }
                    constant = &constant - &(&factor * &pk);
                    coeffs.retain(|_, c| !c.is_zero());
                } else {
                    echelon.push((coeffs, constant));
                    break;
                }
            }
        }
        // back-eliminate into reduced echelon form
        echelon.sort_by_key(|(c, _)| c.keys().next().copied());
        let pivots: Vec<Var> = echelon
            .iter()
            .filter_map(|(c, _)| c.keys().next().copied())
            .collect();
        for idx in (0..echelon.len()).rev() {
            let v = pivots[idx];
            let (pc, pk) = echelon[idx].clone();
            for jdx in 0..idx {
                if let Some(cv) = echelon[jdx].0.get(&v).cloned() {
                    if cv.is_zero() {
                        continue;
                    }
                    let factor = &cv / &pc[&v];
                    for (w, cw) in &pc {
                        let entry = echelon[jdx]
                            .0
                            .entry(*w)
                            .or_insert_with(GaussianRational::zero);
                        *entry = &*entry - &(&factor * cw);
                    }
                    echelon[jdx].1 = &echelon[jdx].1 - &(&factor * &pk);
                    echelon[jdx].0.retain(|_, c| !c.is_zero());
                }
            }
        }
        let mut new_forced: BTreeMap<Var, GaussianRational> = BTreeMap::new();
        for (coeffs, constant) in &echelon {
            if coeffs.is_empty() {
                if !constant.is_zero() {
                    return Err(Inconsistent);
                }
                continue;
            }
            if coeffs.len() == 1 {
                let (v, c) = coeffs.iter().next().expect("one entry");
                let value = &(-constant) / c;
                new_forced.insert(*v, value);
            }
        }
        if new_forced.is_empty() {
            break;
        }
        for (v, val) in &new_forced {
            forced.insert(*v, val.clone());
        }
        work = work
            .iter()
            .map(|p| p.substitute_map(&new_forced))
            .collect();
        for p in &work {
            if !p.is_zero() && p.total_degree() == 0 {
                return Err(Inconsistent);
            }
        }
    }
    Ok(forced)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    fn x() -> Polynomial {
        // lex tests use x > y, so x gets the larger index
        Polynomial::var(1)
    }
    fn y() -> Polynomial {
        Polynomial::var(0)
    }

    #[test]
    fn ring_arithmetic_identities() {
        // (x + iy)(x - iy) = x^2 + y^2
        let i = Polynomial::constant(GaussianRational::i());
        let p = x().add(&i.mul(&y()));
        let q = x().sub(&i.mul(&y()));
        let prod = p.mul(&q);
        let expect = x().mul(&x()).add(&y().mul(&y()));
        assert_eq!(prod, expect);

        // p + (-1) p = 0
        assert!(p.add(&p.scale(&gr(-1))).is_zero());

        // (a+b)^2 = a^2 + 2ab + b^2
        let s = x().add(&y());
        let sq = s.mul(&s);
        let expect = x()
            .mul(&x())
            .add(&x().mul(&y()).scale(&gr(2)))
            .add(&y().mul(&y()));
        assert_eq!(sq, expect);
    }

    #[test]
    fn reduce_examples() {
        let order = MonomialOrder::GrevLex;
        // reduce(x^2, [x]) = 0
        assert!(reduce(&x().mul(&x()), &[x()], order).is_zero());
        // reduce(x^2 + 1, [x - 1]) = 2
        let p = x().mul(&x()).add(&Polynomial::one());
        let g = x().sub(&Polynomial::one());
        assert_eq!(reduce(&p, &[g], order), Polynomial::constant(gr(2)));
        // reduce(p, [1]) = 0
        assert!(reduce(&p, &[Polynomial::one()], order).is_zero());
    }

    #[test]
    fn reduce_is_idempotent() {
        let order = MonomialOrder::GrevLex;
        let g = vec![x().mul(&x()).sub(&y()), y().mul(&y()).sub(&Polynomial::one())];
        let p = x().pow(3).add(&x().mul(&y())).add(&Polynomial::constant(gr(5)));
        let r1 = reduce(&p, &g, order);
        let r2 = reduce(&r1, &g, order);
        assert_eq!(r1, r2);
    }

    #[test]
    fn groebner_lex_elimination() {
        // groebner({x^2 + 1, x + y}) under lex x>y = {x + y, y^2 + 1}
        let gens = vec![x().mul(&x()).add(&Polynomial::one()), x().add(&y())];
        let gb = groebner(&gens, MonomialOrder::Lex, &GbConfig::default()).unwrap();
        let expect_a = x().add(&y());
        let expect_b = y().mul(&y()).add(&Polynomial::one());
        assert_eq!(gb.len(), 2);
        assert!(gb.contains(&expect_a));
        assert!(gb.contains(&expect_b));
    }

    #[test]
    fn groebner_degenerate_cases() {
        let gb = groebner(&[Polynomial::zero()], MonomialOrder::GrevLex, &GbConfig::default())
            .unwrap();
        assert!(gb.is_empty());
        let gb = groebner(
            &[x(), x().add(&Polynomial::one())],
            MonomialOrder::GrevLex,
            &GbConfig::default(),
        )
        .unwrap();
        assert_eq!(gb, vec![Polynomial::one()]);
    }

    #[test]
    fn is_trivial_examples() {
        let cfg = GbConfig::default();
        let mut i1 = Ideal::new(vec![x(), x().add(&Polynomial::one())]);
        assert_eq!(i1.is_trivial(&cfg), Triviality::Yes);
        let mut i2 = Ideal::new(vec![x().mul(&x()).add(&Polynomial::one())]);
        assert_eq!(i2.is_trivial(&cfg), Triviality::No);
    }

    #[test]
    fn saturation_examples() {
        let cfg = GbConfig::default();
        // I = {x*y}, saturate by x: y must vanish
        let ideal = Ideal::new(vec![x().mul(&y())]);
        let (mut sat, _t) = ideal.saturate_nonzero(&x());
        assert_eq!(sat.is_trivial(&cfg), Triviality::No);
        let gb = sat.groebner(MonomialOrder::GrevLex, &cfg).unwrap();
        assert!(reduce(&y(), gb, MonomialOrder::GrevLex).is_zero());

        // I = {x}, saturate by x: contradiction
        let ideal = Ideal::new(vec![x()]);
        let (mut sat, _t) = ideal.saturate_nonzero(&x());
        assert_eq!(sat.is_trivial(&cfg), Triviality::Yes);

        // I = {}, saturate by 1: consistent
        let ideal = Ideal::new(vec![]);
        let (mut sat, _t) = ideal.saturate_nonzero(&Polynomial::one());
        assert_eq!(sat.is_trivial(&cfg), Triviality::No);
    }

    #[test]
    fn linear_subsystem_examples() {
        let a = 0;
        let b = 1;
        // {a*b - 1, a - 2} forces a = 2 then b = 1/2
        let eqs = vec![
            Polynomial::var(a).mul(&Polynomial::var(b)).sub(&Polynomial::one()),
            Polynomial::var(a).sub(&Polynomial::constant(gr(2))),
        ];
        let sol = solve_linear_subsystem(&eqs, &BTreeMap::new()).unwrap();
        assert_eq!(sol[&a], gr(2));
        assert_eq!(sol[&b], GaussianRational::from_ratio(1, 2));

        // {a^2 - 1}: nonlinear untouched
        let eqs = vec![Polynomial::var(a).mul(&Polynomial::var(a)).sub(&Polynomial::one())];
        let sol = solve_linear_subsystem(&eqs, &BTreeMap::new()).unwrap();
        assert!(sol.is_empty());

        // {a+b, a-b, a-1}: inconsistent
        let eqs = vec![
            Polynomial::var(a).add(&Polynomial::var(b)),
            Polynomial::var(a).sub(&Polynomial::var(b)),
            Polynomial::var(a).sub(&Polynomial::one()),
        ];
        assert!(solve_linear_subsystem(&eqs, &BTreeMap::new()).is_err());
    }

    #[test]
    fn grevlex_orders_standard_example() {
        // with x > y > z (ids z=0, y=1, x=2): y^2 > x z in grevlex
        let z = 0;
        let yv = 1;
        let xv = 2;
        let y2 = Monomial::from_pairs([(yv, 2)]);
        let xz = Monomial::from_pairs([(xv, 1), (z, 1)]);
        assert_eq!(
            MonomialOrder::GrevLex.cmp(&y2, &xz),
            std::cmp::Ordering::Greater
        );
        // lex: x z > y^2
        assert_eq!(
            MonomialOrder::Lex.cmp(&xz, &y2),
            std::cmp::Ordering::Greater
        );
    }
}
