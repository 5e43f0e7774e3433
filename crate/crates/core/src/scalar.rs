//! Exact scalars: either plain Gaussian rationals or rational functions
//! in declared formal parameters. Parameters are treated as
//! algebraically independent transcendentals, except for declared
//! quadratic relations (`Z^2 = radicand`) which are rewritten away
//! during every normalization so that zero-testing stays decidable.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::gauss::GaussianRational;
use crate::poly::{Monomial, MonomialOrder, Polynomial, Var};

/// A set of named formal parameters, possibly with quadratic defining
/// relations (`var^2 = polynomial in the other parameters`).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ParamRing {
    names: Vec<String>,
    relations: BTreeMap<Var, Polynomial>,
}

impl ParamRing {
    pub fn empty() -> Arc<ParamRing> {
        Arc::new(ParamRing::default())
    }

    pub fn new(names: Vec<String>) -> ParamRing {
        ParamRing {
            names,
            relations: BTreeMap::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relations(&self) -> &BTreeMap<Var, Polynomial> {
        &self.relations
    }

    pub fn index_of(&self, name: &str) -> Option<Var> {
        self.names.iter().position(|n| n == name).map(|i| i as Var)
    }

    pub fn add_param(&mut self, name: &str) -> Var {
        if let Some(v) = self.index_of(name) {
            return v;
        }
        self.names.push(name.to_string());
        (self.names.len() - 1) as Var
    }

    /// Declare `var^2 = rhs`. The right-hand side must not involve the
    /// relation variable itself.
    pub fn add_relation(&mut self, var: Var, rhs: Polynomial) {
        assert!(
            !rhs.vars().contains(&var),
            "relation right-hand side mentions its own variable"
        );
        self.relations.insert(var, rhs);
    }

    /// Rewrite every exponent `var^e` with `e >= 2` using the declared
    /// relations; the result has relation-variable exponents <= 1.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        if self.relations.is_empty() {
            return p.clone();
        }
        let mut current = p.clone();
        loop {
            let mut changed = false;
            let mut raw: Vec<(Monomial, GaussianRational)> = Vec::new();
            for (m, c) in current.terms() {
                let mut hit = None;
                for &(v, e) in m.exps() {
                    if e >= 2 && self.relations.contains_key(&v) {
                        hit = Some((v, e));
                        break;
                    }
                }
                match hit {
                    None => raw.push((m.clone(), c.clone())),
                    Some((v, e)) => {
                        changed = true;
                        let rest = Monomial::from_pairs(
                            m.exps()
                                .iter()
                                .copied()
                                .map(|(w, ew)| if w == v { (w, e % 2) } else { (w, ew) }),
                        );
                        let pow = self.relations[&v].pow(e / 2);
                        let piece = pow.mul_term(&rest, c);
                        raw.extend(piece.terms().iter().cloned());
                    }
                }
            }
            current = Polynomial::from_terms(raw);
            if !changed {
                return current;
            }
        }
    }
}

/// Union of two parameter rings, matching parameters by name and
/// carrying the quadratic relations over.
pub fn ring_union(a: &Arc<ParamRing>, b: &Arc<ParamRing>) -> Arc<ParamRing> {
    if b.is_empty() || a == b {
        return a.clone();
    }
    if a.is_empty() {
        return b.clone();
    }
    let mut union = ParamRing::new(a.names().to_vec());
    for name in b.names() {
        union.add_param(name);
    }
    let names_only = Arc::new(union.clone());
    for source in [a, b] {
        for (&v, rhs) in source.relations() {
            let name = &source.names()[v as usize];
            let target = names_only.index_of(name).expect("present");
            let moved = Scalar {
                ring: source.clone(),
                num: rhs.clone(),
                den: Polynomial::one(),
            }
            .into_ring(&names_only)
            .expect("name subset");
            union.add_relation(target, moved.num);
        }
    }
    Arc::new(union)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("scalars belong to incompatible parameter rings")]
    RingMismatch,
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
}

/// An exact scalar: a rational function `num/den` over a parameter
/// ring. Constants are represented with the empty ring and `den = 1`.
#[derive(Clone, Debug)]
pub struct Scalar {
    ring: Arc<ParamRing>,
    num: Polynomial,
    den: Polynomial,
}

impl Scalar {
    pub fn rat(c: GaussianRational) -> Scalar {
        Scalar {
            ring: ParamRing::empty(),
            num: Polynomial::constant(c),
            den: Polynomial::one(),
        }
    }

    pub fn zero() -> Scalar {
        Scalar::rat(GaussianRational::zero())
    }

    pub fn one() -> Scalar {
        Scalar::rat(GaussianRational::one())
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::rat(GaussianRational::from_int(n))
    }

    pub fn i() -> Scalar {
        Scalar::rat(GaussianRational::i())
    }

    pub fn param(ring: &Arc<ParamRing>, name: &str) -> Option<Scalar> {
        let v = ring.index_of(name)?;
        Some(Scalar {
            ring: ring.clone(),
            num: Polynomial::var(v),
            den: Polynomial::one(),
        })
    }

    pub fn from_fraction(
        ring: &Arc<ParamRing>,
        num: Polynomial,
        den: Polynomial,
    ) -> Result<Scalar, ScalarError> {
        let den = ring.reduce(&den);
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar {
            ring: ring.clone(),
            num: ring.reduce(&num),
            den,
        }
        .normalized())
    }

    pub fn ring(&self) -> &Arc<ParamRing> {
        &self.ring
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The value as a Gaussian rational, when parameter-free.
    pub fn constant_value(&self) -> Option<GaussianRational> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(&n / &d)
    }

    fn normalized(mut self) -> Scalar {
        if self.num.is_zero() {
            self.den = Polynomial::one();
            if !self.ring.is_empty() && self.num.vars().is_empty() {
                // keep the ring; zero is zero in any ring
            }
            return self;
        }
        // make the denominator monic under grevlex
        if let Some((_, c)) = self.den.leading(MonomialOrder::GrevLex) {
            if !c.is_one() {
                let inv = c.inv();
                self.num = self.num.scale(&inv);
                self.den = self.den.scale(&inv);
            }
        }
        self
    }

    fn unify(a: &Scalar, b: &Scalar) -> Result<Arc<ParamRing>, ScalarError> {
        if a.ring.is_empty() {
            return Ok(b.ring.clone());
        }
        if b.ring.is_empty() || a.ring == b.ring {
            return Ok(a.ring.clone());
        }
        Err(ScalarError::RingMismatch)
    }

    fn binop(
        a: &Scalar,
        b: &Scalar,
        f: impl Fn(&Polynomial, &Polynomial, &Polynomial, &Polynomial) -> (Polynomial, Polynomial),
    ) -> Scalar {
        let ring = Scalar::unify(a, b).expect("scalar ring mismatch");
        let (num, den) = f(&a.num, &a.den, &b.num, &b.den);
        Scalar {
            num: ring.reduce(&num),
            den: ring.reduce(&den),
            ring,
        }
        .normalized()
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        Scalar::binop(self, other, |an, ad, bn, bd| {
            (an.mul(bd).add(&bn.mul(ad)), ad.mul(bd))
        })
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            ring: self.ring.clone(),
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        Scalar::binop(self, other, |an, ad, bn, bd| (an.mul(bn), ad.mul(bd)))
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar {
            ring: self.ring.clone(),
            num: self.den.clone(),
            den: self.num.clone(),
        }
        .normalized())
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn equals(&self, other: &Scalar) -> bool {
        self.sub(other).is_zero()
    }

    /// Substitute the named parameters by exact values. Parameters not
    /// mentioned stay symbolic (their relations are re-reduced with the
    /// substituted radicand). Fails when a denominator vanishes.
    pub fn substitute(
        &self,
        values: &BTreeMap<String, GaussianRational>,
    ) -> Result<Scalar, ScalarError> {
        if self.ring.is_empty() || values.is_empty() {
            return Ok(self.clone());
        }
        let mut by_var: BTreeMap<Var, GaussianRational> = BTreeMap::new();
        for (name, value) in values {
            if let Some(v) = self.ring.index_of(name) {
                by_var.insert(v, value.clone());
            }
        }
        // rebuild the ring without the substituted names
        let mut new_ring = ParamRing::default();
        let mut remap: BTreeMap<Var, Var> = BTreeMap::new();
        for (idx, name) in self.ring.names().iter().enumerate() {
            let v = idx as Var;
            if !by_var.contains_key(&v) {
                let nv = new_ring.add_param(name);
                remap.insert(v, nv);
            }
        }
        for (&v, rhs) in self.ring.relations() {
            if by_var.contains_key(&v) {
                continue; // substituting a relation variable directly
            }
            let rhs = rhs.substitute_map(&by_var).remap_vars(|w| remap[&w]);
            new_ring.add_relation(remap[&v], rhs);
        }
        let ring = Arc::new(new_ring);
        let num = self.num.substitute_map(&by_var).remap_vars(|w| remap[&w]);
        let den = self.den.substitute_map(&by_var).remap_vars(|w| remap[&w]);
        let den = ring.reduce(&den);
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar {
            num: ring.reduce(&num),
            den,
            ring,
        }
        .normalized())
    }

    /// Re-express this scalar inside `target`, matching parameters by
    /// name. Fails when a parameter is missing from the target ring.
    pub fn into_ring(&self, target: &Arc<ParamRing>) -> Result<Scalar, ScalarError> {
        if self.ring.is_empty() {
            return Ok(Scalar {
                ring: target.clone(),
                num: self.num.clone(),
                den: self.den.clone(),
            });
        }
        if self.ring == *target {
            return Ok(self.clone());
        }
        let mut remap: BTreeMap<Var, Var> = BTreeMap::new();
        for (idx, name) in self.ring.names().iter().enumerate() {
            let tv = target
                .index_of(name)
                .ok_or_else(|| ScalarError::UnboundParameter(name.clone()))?;
            remap.insert(idx as Var, tv);
        }
        Ok(Scalar {
            ring: target.clone(),
            num: target.reduce(&self.num.remap_vars(|v| remap[&v])),
            den: target.reduce(&self.den.remap_vars(|v| remap[&v])),
        }
        .normalized())
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}
impl Eq for Scalar {}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::format::render_scalar(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring_ab() -> Arc<ParamRing> {
        Arc::new(ParamRing::new(vec!["a".into(), "b".into()]))
    }

    #[test]
    fn rational_function_arithmetic() {
        let ring = ring_ab();
        let a = Scalar::param(&ring, "a").unwrap();
        let b = Scalar::param(&ring, "b").unwrap();
        // a/b * b/a = 1
        let q = a.div(&b).unwrap().mul(&b.div(&a).unwrap());
        assert!(q.is_one());
        // (a+b) - a - b = 0
        assert!(a.add(&b).sub(&a).sub(&b).is_zero());
        // cross-multiplied equality: a/b == a^2/(a b)
        let lhs = a.div(&b).unwrap();
        let rhs = a.mul(&a).div(&a.mul(&b)).unwrap();
        assert!(lhs.equals(&rhs));
    }

    #[test]
    fn radical_relation_reduction() {
        // Z^2 = 1 + a  =>  Z^2 - a - 1 == 0
        let mut ring = ParamRing::new(vec!["a".into(), "Z".into()]);
        let a = Polynomial::var(0);
        ring.add_relation(1, a.add(&Polynomial::one()));
        let ring = Arc::new(ring);
        let z = Scalar::param(&ring, "Z").unwrap();
        let a = Scalar::param(&ring, "a").unwrap();
        let lhs = z.mul(&z);
        let rhs = a.add(&Scalar::one());
        assert!(lhs.equals(&rhs));
        // (Z^3) = Z * (1 + a)
        let z3 = z.pow(3);
        assert!(z3.equals(&z.mul(&rhs)));
    }

    #[test]
    fn substitution_and_denominator_guard() {
        let ring = ring_ab();
        let a = Scalar::param(&ring, "a").unwrap();
        let b = Scalar::param(&ring, "b").unwrap();
        let q = a.div(&b).unwrap();
        let mut vals = BTreeMap::new();
        vals.insert("a".to_string(), GaussianRational::from_int(6));
        vals.insert("b".to_string(), GaussianRational::from_int(3));
        let r = q.substitute(&vals).unwrap();
        assert_eq!(r.constant_value().unwrap(), GaussianRational::from_int(2));
        let mut bad = BTreeMap::new();
        bad.insert("b".to_string(), GaussianRational::zero());
        assert!(q.substitute(&bad).is_err());
    }

    #[test]
    fn partial_substitution_keeps_radical() {
        // Z^2 = a; substitute a = 4 and check Z^2 - 4 == 0 still holds
        let mut ring = ParamRing::new(vec!["a".into(), "Z".into()]);
        ring.add_relation(1, Polynomial::var(0));
        let ring = Arc::new(ring);
        let z = Scalar::param(&ring, "Z").unwrap();
        let mut vals = BTreeMap::new();
        vals.insert("a".to_string(), GaussianRational::from_int(4));
        let z_sub = z.substitute(&vals).unwrap();
        let sq = z_sub.mul(&z_sub);
        assert!(sq.equals(&Scalar::int(4)));
    }
}
