//! Buchberger's algorithm with the normal selection strategy and both of
//! Buchberger's pair-elimination criteria.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{grevlex_cmp, Monomial, MultiPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Grevlex,
    Lex,
}

/// A monomial order together with a ranking of the variables;
/// `var_order[0]` is the largest variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermOrder {
    kind: OrderKind,
    var_order: Vec<usize>,
}

impl TermOrder {
    pub fn new(kind: OrderKind, var_order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; var_order.len()];
        for &v in &var_order {
            if v >= seen.len() || seen[v] {
                return Err(Error::input("variable order must be a permutation"));
            }
            seen[v] = true;
        }
        Ok(TermOrder { kind, var_order })
    }

    /// Grevlex in the declared variable order.
    pub fn grevlex(nvars: usize) -> Self {
        TermOrder { kind: OrderKind::Grevlex, var_order: (0..nvars).collect() }
    }

    pub fn lex(nvars: usize) -> Self {
        TermOrder { kind: OrderKind::Lex, var_order: (0..nvars).collect() }
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn nvars(&self) -> usize {
        self.var_order.len()
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let permute = |m: &Monomial| -> Vec<u32> { self.var_order.iter().map(|&i| m.exponents()[i]).collect() };
        match self.kind {
            OrderKind::Lex => permute(a).cmp(&permute(b)),
            OrderKind::Grevlex => grevlex_cmp(&permute(a), &permute(b)),
        }
    }

    pub fn leading_monomial<'a, K: Field>(&self, p: &'a MultiPoly<K>) -> Option<&'a Monomial> {
        p.terms().map(|(m, _)| m).max_by(|a, b| self.cmp(a, b))
    }
}

/// Working representation: terms sorted in descending order, leading first.
#[derive(Clone, Debug)]
struct Sorted<E> {
    terms: Vec<(Monomial, E)>,
}

impl<E> Sorted<E> {
    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }
}

struct Engine<'a, K: Field> {
    field: &'a K,
    order: &'a TermOrder,
}

impl<'a, K: Field> Engine<'a, K> {
    fn sorted(&self, p: &MultiPoly<K>) -> Sorted<K::Elem> {
        let mut terms: Vec<_> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        terms.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
        Sorted { terms }
    }

    fn monic(&self, mut p: Sorted<K::Elem>) -> Sorted<K::Elem> {
        let inv = self.field.inv(&p.terms[0].1).expect("nonzero leading coefficient");
        for t in p.terms.iter_mut() {
            t.1 = self.field.mul(&t.1, &inv);
        }
        p
    }

    /// Full normal form of `p` modulo `basis` (every term reduced).
    fn normal_form(&self, p: &Sorted<K::Elem>, basis: &[&Sorted<K::Elem>]) -> Option<Sorted<K::Elem>> {
        let f = self.field;
        // pending terms keyed by position in the order, largest popped first
        let mut pending: BTreeMap<OrdKey<'_>, (Monomial, K::Elem)> = BTreeMap::new();
        let key = |m: &Monomial| OrdKey { mono: m.clone(), order: self.order };
        for (m, c) in &p.terms {
            pending.insert(key(m), (m.clone(), c.clone()));
        }
        let mut remainder: Vec<(Monomial, K::Elem)> = Vec::new();
        while let Some((_, (m, c))) = pending.pop_last() {
            match basis.iter().find(|g| g.lm().divides(&m)) {
                None => remainder.push((m, c)),
                Some(g) => {
                    let shift = g.lm().quotient_of(&m).expect("divides");
                    // g is monic: subtract c * shift * g
                    for (gm, gc) in g.terms.iter().skip(1) {
                        let nm = gm.mul(&shift);
                        let delta = f.mul(&c, gc);
                        let k = key(&nm);
                        match pending.get_mut(&k) {
                            Some(entry) => {
                                entry.1 = f.sub(&entry.1, &delta);
                                if f.is_zero(&entry.1) {
                                    pending.remove(&k);
                                }
                            }
                            None => {
                                pending.insert(k, (nm, f.neg(&delta)));
                            }
                        }
                    }
                }
            }
        }
        if remainder.is_empty() {
            None
        } else {
            Some(Sorted { terms: remainder })
        }
    }

    fn s_poly(&self, a: &Sorted<K::Elem>, b: &Sorted<K::Elem>) -> Sorted<K::Elem> {
        let lcm = a.lm().lcm(b.lm());
        let sa = a.lm().quotient_of(&lcm).expect("lcm");
        let sb = b.lm().quotient_of(&lcm).expect("lcm");
        let mut acc: BTreeMap<OrdKey<'_>, (Monomial, K::Elem)> = BTreeMap::new();
        let mut push = |m: Monomial, c: K::Elem| {
            let k = OrdKey { mono: m.clone(), order: self.order };
            match acc.get_mut(&k) {
                Some(e) => e.1 = self.field.add(&e.1, &c),
                None => {
                    acc.insert(k, (m, c));
                }
            }
        };
        for (m, c) in a.terms.iter().skip(1) {
            push(m.mul(&sa), c.clone());
        }
        for (m, c) in b.terms.iter().skip(1) {
            push(m.mul(&sb), self.field.neg(c));
        }
        let terms: Vec<_> = acc.into_values().rev().filter(|(_, c)| !self.field.is_zero(c)).collect();
        Sorted { terms }
    }

    fn to_poly(&self, p: &Sorted<K::Elem>, vars: &[String]) -> MultiPoly<K> {
        MultiPoly::from_terms(self.field.clone(), vars.to_vec(), p.terms.iter().cloned()).expect("same arity")
    }
}

struct OrdKey<'a> {
    mono: Monomial,
    order: &'a TermOrder,
}

impl PartialEq for OrdKey<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.mono == other.mono
    }
}
impl Eq for OrdKey<'_> {}
impl PartialOrd for OrdKey<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for OrdKey<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order.cmp(&self.mono, &other.mono)
    }
}

/// The reduced Gröbner basis of an ideal: monic generators, no leading
/// monomial dividing any term of another generator. Generators are listed
/// by descending leading monomial.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<K: Field> {
    generators: Vec<MultiPoly<K>>,
    order: TermOrder,
    field: K,
    vars: Vec<String>,
}

impl<K: Field> GroebnerBasis<K> {
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn generators(&self) -> &[MultiPoly<K>] {
        &self.generators
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators
            .iter()
            .map(|g| self.order.leading_monomial(g).expect("nonzero generator").clone())
            .collect()
    }

    fn sorted_basis<'e>(&self, engine: &Engine<'e, K>) -> Vec<Sorted<K::Elem>> {
        self.generators.iter().map(|g| engine.sorted(g)).collect()
    }

    /// Normal form of `p` modulo the basis.
    pub fn reduce(&self, p: &MultiPoly<K>) -> MultiPoly<K> {
        let engine = Engine { field: &self.field, order: &self.order };
        let basis = self.sorted_basis(&engine);
        let refs: Vec<&Sorted<K::Elem>> = basis.iter().collect();
        if p.is_zero() {
            return p.clone();
        }
        match engine.normal_form(&engine.sorted(p), &refs) {
            None => MultiPoly::zero(self.field.clone(), p.vars().to_vec()),
            Some(r) => engine.to_poly(&r, p.vars()),
        }
    }

    pub fn contains(&self, p: &MultiPoly<K>) -> bool {
        self.reduce(p).is_zero()
    }

    /// True when every S-polynomial of two basis elements reduces to zero.
    pub fn s_pairs_reduce_to_zero(&self) -> bool {
        let engine = Engine { field: &self.field, order: &self.order };
        let basis = self.sorted_basis(&engine);
        let refs: Vec<&Sorted<K::Elem>> = basis.iter().collect();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let s = engine.s_poly(&basis[i], &basis[j]);
                if !s.terms.is_empty() && engine.normal_form(&s, &refs).is_some() {
                    return false;
                }
            }
        }
        true
    }

    /// True when the basis is reduced and monic.
    pub fn is_reduced(&self) -> bool {
        let lms = self.leading_monomials();
        self.generators.iter().enumerate().all(|(i, g)| {
            let lc_one = g.coeff(&lms[i]) == self.field.one();
            let clean = g
                .terms()
                .all(|(m, _)| lms.iter().enumerate().all(|(j, lm)| j == i || !lm.divides(m)));
            lc_one && clean
        })
    }
}

/// Computes the reduced Gröbner basis of the ideal generated by `generators`.
///
/// All generators must share one field and variable list; the zero ideal
/// yields the empty basis.
pub fn groebner_basis<K: Field>(generators: &[MultiPoly<K>], order: &TermOrder) -> Result<GroebnerBasis<K>> {
    let Some(first) = generators.first() else {
        return Err(Error::input("cannot infer the ring of an empty generator list; use groebner_basis_in"));
    };
    groebner_basis_in(first.field().clone(), first.vars().to_vec(), generators, order)
}

/// As [`groebner_basis`], with the ring given explicitly (so the list may be empty).
pub fn groebner_basis_in<K: Field>(
    field: K,
    vars: Vec<String>,
    generators: &[MultiPoly<K>],
    order: &TermOrder,
) -> Result<GroebnerBasis<K>> {
    if order.nvars() != vars.len() {
        return Err(Error::input("term order and ring have different variable counts"));
    }
    for g in generators {
        if g.vars() != vars.as_slice() || *g.field() != field {
            return Err(Error::input("generators must share one field and variable list"));
        }
    }
    let engine = Engine { field: &field, order };
    let mut basis: Vec<Sorted<K::Elem>> =
        generators.iter().filter(|g| !g.is_zero()).map(|g| engine.monic(engine.sorted(g))).collect();

    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.insert((i, j));
        }
    }

    // normal strategy: smallest lcm first, ties broken by index
    while let Some(&(i, j)) = pairs.iter().min_by(|a, b| {
        let la = basis[a.0].lm().lcm(basis[a.1].lm());
        let lb = basis[b.0].lm().lcm(basis[b.1].lm());
        order.cmp(&la, &lb).then(a.cmp(b))
    }) {
        pairs.remove(&(i, j));
        let (li, lj) = (basis[i].lm(), basis[j].lm());
        if li.is_coprime(lj) {
            continue;
        }
        let lcm = li.lcm(lj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lm().divides(&lcm)
                && !pairs.contains(&(i.min(k), i.max(k)))
                && !pairs.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = engine.s_poly(&basis[i], &basis[j]);
        if s.terms.is_empty() {
            continue;
        }
        let refs: Vec<&Sorted<K::Elem>> = basis.iter().collect();
        if let Some(h) = engine.normal_form(&s, &refs) {
            let h = engine.monic(h);
            let n = basis.len();
            basis.push(h);
            for k in 0..n {
                pairs.insert((k, n));
            }
        }
    }

    // minimize: drop generators whose leading monomial is divisible by another's
    let mut keep: Vec<Sorted<K::Elem>> = Vec::new();
    for (idx, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(o, h)| {
            o != idx && h.lm().divides(g.lm()) && (h.lm() != g.lm() || o < idx)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }

    // interreduce tails
    let mut reduced = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<&Sorted<K::Elem>> =
            keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g).collect();
        let head = Sorted { terms: vec![keep[i].terms[0].clone()] };
        let tail = Sorted { terms: keep[i].terms[1..].to_vec() };
        let mut terms = head.terms;
        if !tail.terms.is_empty() {
            if let Some(t) = engine.normal_form(&tail, &others) {
                terms.extend(t.terms);
            }
        }
        reduced.push(Sorted { terms });
    }
    reduced.sort_by(|a, b| order.cmp(b.lm(), a.lm()));

    Ok(GroebnerBasis {
        generators: reduced.iter().map(|g| engine.to_poly(g, &vars)).collect(),
        order: order.clone(),
        field,
        vars,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;
    use crate::field::{PrimeField, RationalField};
    use crate::poly::random_poly;

    fn q(vars: &[&str], terms: &[(i64, &[u32])]) -> MultiPoly<RationalField> {
        MultiPoly::from_terms(
            RationalField,
            vars.iter().map(|s| s.to_string()).collect(),
            terms.iter().map(|(c, e)| (Monomial::new(e.to_vec()), Rational::from(*c))),
        )
        .unwrap()
    }

    #[test]
    fn monomial_generators_are_their_own_basis() {
        let v = ["x", "y", "z"];
        let gens = [q(&v, &[(1, &[1, 0, 0])]), q(&v, &[(1, &[0, 1, 0])])];
        let gb = groebner_basis(&gens, &TermOrder::grevlex(3)).unwrap();
        assert_eq!(gb.generators(), &gens);
    }

    #[test]
    fn lex_example_with_y_above_x() {
        // variables declared (x, y); lex with y > x
        let v = ["x", "y"];
        let gens = [q(&v, &[(1, &[0, 1]), (-1, &[2, 0])]), q(&v, &[(1, &[1, 1])])];
        let order = TermOrder::new(OrderKind::Lex, vec![1, 0]).unwrap();
        let gb = groebner_basis(&gens, &order).unwrap();
        // the S-polynomial x(y - x^2) - xy = -x^3 enters the basis; xy then
        // reduces away because its leading term y*x is divisible by y
        assert_eq!(gb.generators(), &[q(&v, &[(1, &[0, 1]), (-1, &[2, 0])]), q(&v, &[(1, &[3, 0])])]);
        assert!(gb.contains(&q(&v, &[(1, &[1, 1])])));
        assert!(gb.s_pairs_reduce_to_zero());
        assert!(gb.is_reduced());
    }

    #[test]
    fn single_generator_is_made_monic() {
        let v = ["x", "y"];
        let g = q(&v, &[(3, &[2, 0]), (6, &[0, 2])]);
        let gb = groebner_basis(&[g], &TermOrder::grevlex(2)).unwrap();
        assert_eq!(gb.generators(), &[q(&v, &[(1, &[2, 0]), (2, &[0, 2])])]);
    }

    #[test]
    fn zero_ideal_has_empty_basis() {
        let v: Vec<String> = vec!["x".into()];
        let z = MultiPoly::zero(RationalField, v.clone());
        let gb = groebner_basis_in(RationalField, v, &[z], &TermOrder::grevlex(1)).unwrap();
        assert!(gb.generators().is_empty());
    }

    #[test]
    fn random_bases_satisfy_buchberger_and_membership() {
        let f = PrimeField::new(7).unwrap();
        for seed in 0..30u64 {
            let n = 2 + (seed % 3) as usize;
            let vars = crate::poly::standard_vars(n);
            let gens: Vec<_> = (0..3)
                .map(|i| random_poly(1 + ((seed + i) % 3) as u32, vars.clone(), f, true, seed * 10 + i))
                .collect();
            for order in [TermOrder::grevlex(n), TermOrder::lex(n)] {
                let gb = groebner_basis(&gens, &order).unwrap();
                assert!(gb.s_pairs_reduce_to_zero(), "seed {seed}");
                assert!(gb.is_reduced(), "seed {seed}");
                for g in &gens {
                    assert!(gb.contains(g), "seed {seed}: generator not in ideal");
                }
            }
        }
    }

    #[test]
    fn reduced_basis_is_order_of_generators_independent() {
        let f = PrimeField::new(11).unwrap();
        let vars = crate::poly::standard_vars(3);
        let gens: Vec<_> = (0..3).map(|i| random_poly(2, vars.clone(), f, true, 99 + i)).collect();
        let rev: Vec<_> = gens.iter().rev().cloned().collect();
        let a = groebner_basis(&gens, &TermOrder::grevlex(3)).unwrap();
        let b = groebner_basis(&rev, &TermOrder::grevlex(3)).unwrap();
        assert_eq!(a.generators(), b.generators());
    }
}
