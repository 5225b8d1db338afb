//! Sparse multivariate polynomials over a [`Field`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;

/// Exponent vector, one entry per declared variable.
///
/// The `Ord` impl is graded reverse lexicographic with respect to the
/// declared variable order (`z1 > z2 > ...`), which is also the storage
/// order of [`MultiPoly`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Indices of variables occurring with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| i)
    }
}

pub(crate) fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
    if da != db {
        return da.cmp(&db);
    }
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        grevlex_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of total degree exactly `degree` in `nvars` variables,
/// in descending grevlex order.
pub fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(prefix: &mut Vec<u32>, left: usize, remaining: u32, out: &mut Vec<Monomial>) {
        if left == 1 {
            prefix.push(remaining);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            rec(prefix, left - 1, remaining - e, out);
            prefix.pop();
        }
    }
    if nvars == 0 {
        return if degree == 0 { vec![Monomial(vec![])] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(nvars), nvars, degree, &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// A sparse polynomial: a map from exponent vectors to nonzero coefficients.
#[derive(Clone, PartialEq)]
pub struct MultiPoly<K: Field> {
    field: K,
    vars: Vec<String>,
    terms: BTreeMap<Monomial, K::Elem>,
}

impl<K: Field> fmt::Debug for MultiPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.field.spec(), self)
    }
}

impl<K: Field> MultiPoly<K> {
    pub fn zero(field: K, vars: Vec<String>) -> Self {
        MultiPoly { field, vars, terms: BTreeMap::new() }
    }

    pub fn constant(field: K, vars: Vec<String>, c: K::Elem) -> Self {
        let n = vars.len();
        let mut p = Self::zero(field, vars);
        p.add_term(Monomial::one(n), c);
        p
    }

    pub fn var(field: K, vars: Vec<String>, i: usize) -> Self {
        let n = vars.len();
        let one = field.one();
        let mut p = Self::zero(field, vars);
        p.add_term(Monomial::var(n, i), one);
        p
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs, combining
    /// repeated monomials and dropping zeros.
    pub fn from_terms(
        field: K,
        vars: Vec<String>,
        terms: impl IntoIterator<Item = (Monomial, K::Elem)>,
    ) -> Result<Self> {
        let n = vars.len();
        let mut p = Self::zero(field, vars);
        for (m, c) in terms {
            if m.nvars() != n {
                return Err(Error::input(format!(
                    "exponent vector of length {} for {} variables",
                    m.nvars(),
                    n
                )));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// The homogeneous linear form `sum coeffs[i] * vars[i]`.
    pub fn linear(field: K, vars: Vec<String>, coeffs: &[K::Elem]) -> Result<Self> {
        if coeffs.len() != vars.len() {
            return Err(Error::input("coefficient count differs from variable count"));
        }
        let n = vars.len();
        let terms: Vec<_> = coeffs.iter().enumerate().map(|(i, c)| (Monomial::var(n, i), c.clone())).collect();
        Self::from_terms(field, vars, terms)
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending grevlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &K::Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> K::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// True when every term has the same degree (the zero polynomial counts).
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn is_linear_form(&self) -> bool {
        !self.is_zero() && self.terms.keys().all(|m| m.degree() == 1)
    }

    /// Leading term under grevlex.
    pub fn leading_term(&self) -> Option<(&Monomial, &K::Elem)> {
        self.terms.iter().next_back()
    }

    /// Coefficients of a homogeneous linear form (zero polynomial allowed).
    pub fn linear_coefficients(&self) -> Option<Vec<K::Elem>> {
        if self.terms.keys().any(|m| m.degree() != 1) {
            return None;
        }
        Some((0..self.nvars()).map(|i| self.coeff(&Monomial::var(self.nvars(), i))).collect())
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: K::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = self.field.add(existing, &c);
                if self.field.is_zero(&sum) {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert!(
            self.vars == other.vars && self.field == other.field,
            "polynomials over different rings"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), self.field.neg(c))).collect();
        MultiPoly { field: self.field.clone(), vars: self.vars.clone(), terms }
    }

    pub fn scale(&self, s: &K::Elem) -> Self {
        if self.field.is_zero(s) {
            return Self::zero(self.field.clone(), self.vars.clone());
        }
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), self.field.mul(c, s))).collect();
        MultiPoly { field: self.field.clone(), vars: self.vars.clone(), terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = Self::zero(self.field.clone(), self.vars.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), self.field.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.field.clone(), self.vars.clone(), self.field.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divides by the leading (grevlex) coefficient.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.field.inv(c).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Exact evaluation at a point.
    pub fn eval(&self, point: &[K::Elem]) -> Result<K::Elem> {
        if point.len() != self.nvars() {
            return Err(Error::input(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars()
            )));
        }
        let f = &self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, e) in point.iter().zip(m.exponents()) {
                for _ in 0..*e {
                    t = f.mul(&t, x);
                }
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Splits into homogeneous parts keyed by degree; only nonzero parts appear.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, MultiPoly<K>> {
        let mut out: BTreeMap<u32, MultiPoly<K>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_insert_with(|| Self::zero(self.field.clone(), self.vars.clone()))
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    /// The homogeneous part of degree `d` (possibly zero).
    pub fn homogeneous_part(&self, d: u32) -> MultiPoly<K> {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect();
        MultiPoly { field: self.field.clone(), vars: self.vars.clone(), terms }
    }

    /// Same terms under new variable names.
    pub fn with_vars(&self, vars: Vec<String>) -> Result<Self> {
        if vars.len() != self.nvars() {
            return Err(Error::input("variable count mismatch"));
        }
        Ok(MultiPoly { field: self.field.clone(), vars, terms: self.terms.clone() })
    }

    /// Applies the linear substitution `z_i -> sum_j rows[i][j] * z_j`.
    pub fn substitute_linear(&self, rows: &[Vec<K::Elem>]) -> Result<Self> {
        let n = self.nvars();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::input("substitution matrix must be square of size nvars"));
        }
        let images: Vec<Self> = rows
            .iter()
            .map(|r| Self::linear(self.field.clone(), self.vars.clone(), r))
            .collect::<Result<_>>()?;
        Ok(self.compose(&images))
    }

    /// Substitutes `images[i]` for the i-th variable. All images must share
    /// one ring, which becomes the ring of the result.
    pub(crate) fn compose(&self, images: &[Self]) -> Self {
        assert_eq!(images.len(), self.nvars());
        let target = images
            .first()
            .map(|p| (p.field.clone(), p.vars.clone()))
            .unwrap_or_else(|| (self.field.clone(), vec![]));
        let mut power_cache: Vec<Vec<Self>> = images
            .iter()
            .map(|img| vec![Self::constant(target.0.clone(), target.1.clone(), target.0.one()), img.clone()])
            .collect();
        let mut out = Self::zero(target.0.clone(), target.1.clone());
        for (m, c) in &self.terms {
            let mut t = Self::constant(target.0.clone(), target.1.clone(), c.clone());
            for (i, e) in m.exponents().iter().enumerate() {
                let e = *e as usize;
                if e == 0 {
                    continue;
                }
                while power_cache[i].len() <= e {
                    let next = power_cache[i].last().unwrap().mul(&images[i]);
                    power_cache[i].push(next);
                }
                t = t.mul(&power_cache[i][e]);
            }
            out = out.add(&t);
        }
        out
    }

    /// Index of the variable eliminated when restricting to `{l = 0}`:
    /// the highest-index variable with a nonzero coefficient in `l`.
    pub fn elimination_index(l: &Self) -> Result<usize> {
        if !l.is_linear_form() {
            return Err(Error::input("hyperplane must be cut by a nonzero homogeneous linear form"));
        }
        let coeffs = l.linear_coefficients().expect("linear");
        Ok(coeffs.iter().rposition(|c| !l.field.is_zero(c)).expect("nonzero form"))
    }

    /// Restriction to the hyperplane `{l = 0}`: the eliminated variable (see
    /// [`Self::elimination_index`]) is replaced by its solution of `l = 0`,
    /// and the result lives in the remaining variables.
    pub fn restrict_to_hyperplane(&self, l: &Self) -> Result<Self> {
        self.check_compatible(l);
        let e = Self::elimination_index(l)?;
        let f = &self.field;
        let coeffs = l.linear_coefficients().expect("linear");
        let neg_inv = f.neg(&f.inv(&coeffs[e]).expect("nonzero"));
        let mut reduced_vars = self.vars.clone();
        reduced_vars.remove(e);
        let m = reduced_vars.len();
        let mut images = Vec::with_capacity(self.nvars());
        for i in 0..self.nvars() {
            if i == e {
                let sol: Vec<K::Elem> = (0..self.nvars())
                    .filter(|&j| j != e)
                    .map(|j| f.mul(&coeffs[j], &neg_inv))
                    .collect();
                images.push(Self::linear(f.clone(), reduced_vars.clone(), &sol)?);
            } else {
                let j = if i < e { i } else { i - 1 };
                images.push(Self::var(f.clone(), reduced_vars.clone(), j));
            }
        }
        debug_assert_eq!(images.len(), m + 1);
        Ok(self.compose(&images))
    }

    /// Lifts a point of the restricted space back onto `{l = 0}` in the
    /// original coordinates.
    pub fn lift_point(l: &Self, point: &[K::Elem]) -> Result<Vec<K::Elem>> {
        let e = Self::elimination_index(l)?;
        if point.len() + 1 != l.nvars() {
            return Err(Error::input("point dimension must be one less than the form's"));
        }
        let f = &l.field;
        let coeffs = l.linear_coefficients().expect("linear");
        let mut full: Vec<K::Elem> = point.to_vec();
        full.insert(e, f.zero());
        let mut s = f.zero();
        for (j, x) in full.iter().enumerate() {
            if j != e {
                s = f.add(&s, &f.mul(&coeffs[j], x));
            }
        }
        full[e] = f.neg(&f.div(&s, &coeffs[e]).expect("nonzero"));
        Ok(full)
    }
}

impl<K: Field> fmt::Display for MultiPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mono: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| if *e == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], e) })
                .collect();
            let coeff = self.field.format_elem(c);
            match (mono.is_empty(), self.field.is_one(c)) {
                (true, _) => write!(f, "{coeff}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{coeff}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

/// A random polynomial of the given degree, deterministic in `seed`.
///
/// Every monomial of degree `<= degree` (only `== degree` when
/// `homogeneous`) receives an independent random coefficient; over GF(p)
/// coefficients are uniform on the field, zero included.
pub fn random_poly<K: Field>(degree: u32, vars: Vec<String>, field: K, homogeneous: bool, seed: u64) -> MultiPoly<K> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_poly_with(&mut rng, degree, vars, field, homogeneous)
}

pub(crate) fn random_poly_with<K: Field, R: rand::Rng + ?Sized>(
    rng: &mut R,
    degree: u32,
    vars: Vec<String>,
    field: K,
    homogeneous: bool,
) -> MultiPoly<K> {
    let n = vars.len();
    let lowest = if homogeneous { degree } else { 0 };
    let mut p = MultiPoly::zero(field.clone(), vars);
    for d in (lowest..=degree).rev() {
        for m in monomials_of_degree(n, d) {
            let c = field.random_elem(rng);
            p.add_term(m, c);
        }
    }
    p
}

/// Variable names `z1, ..., zn`.
pub fn standard_vars(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("z{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;
    use crate::field::{PrimeField, RationalField};

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    fn qpoly(vars: &[&str], terms: &[(i64, &[u32])]) -> MultiPoly<RationalField> {
        MultiPoly::from_terms(
            RationalField,
            vars.iter().map(|s| s.to_string()).collect(),
            terms.iter().map(|(c, e)| (Monomial::new(e.to_vec()), q(*c))),
        )
        .unwrap()
    }

    #[test]
    fn grevlex_order() {
        // x > y > z; degree first, then the smaller last exponent wins
        let m = |e: &[u32]| Monomial::new(e.to_vec());
        assert!(m(&[0, 0, 2]) > m(&[1, 0, 0]));
        assert!(m(&[1, 0, 0]) > m(&[0, 1, 0]));
        assert!(m(&[2, 0, 0]) > m(&[1, 1, 0]));
        assert!(m(&[0, 2, 0]) > m(&[1, 0, 1]));
    }

    #[test]
    fn monomial_enumeration_counts() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(4, 3).len(), 20);
        assert_eq!(monomials_of_degree(1, 5).len(), 1);
        let ms = monomials_of_degree(3, 2);
        assert!(ms.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn eval_examples() {
        let p = qpoly(&["x", "y"], &[(1, &[2, 0]), (1, &[0, 1])]);
        assert_eq!(p.eval(&[q(2), q(3)]).unwrap(), q(7));
        let z = MultiPoly::zero(RationalField, vec!["x".into()]);
        assert_eq!(z.eval(&[q(5)]).unwrap(), q(0));
        assert!(p.eval(&[q(1)]).is_err());

        let f = PrimeField::new(5).unwrap();
        let xy = MultiPoly::from_terms(f, vec!["x".into(), "y".into()], [(Monomial::new(vec![1, 1]), 1)]).unwrap();
        assert_eq!(xy.eval(&[3, 4]).unwrap(), 2);
    }

    #[test]
    fn homogeneous_components_examples() {
        let vars = ["z1", "z2", "z3", "z4"];
        let p = qpoly(&vars, &[(1, &[0, 0, 0, 1]), (1, &[2, 0, 0, 0])]);
        let comps = p.homogeneous_components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[&1], qpoly(&vars, &[(1, &[0, 0, 0, 1])]));
        assert_eq!(comps[&2], qpoly(&vars, &[(1, &[2, 0, 0, 0])]));

        let cubic = qpoly(&vars, &[(2, &[3, 0, 0, 0]), (-1, &[1, 1, 1, 0])]);
        let comps = cubic.homogeneous_components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[&3], cubic);

        assert!(MultiPoly::zero(RationalField, vec!["x".into()]).homogeneous_components().is_empty());
    }

    #[test]
    fn restriction_examples() {
        let v3 = ["z1", "z2", "z3"];
        let f = qpoly(&v3, &[(1, &[2, 0, 0]), (1, &[0, 0, 1])]);
        let l = qpoly(&v3, &[(1, &[0, 0, 1])]);
        let r = f.restrict_to_hyperplane(&l).unwrap();
        assert_eq!(r, qpoly(&["z1", "z2"], &[(1, &[2, 0])]));

        let v2 = ["z1", "z2"];
        let f = qpoly(&v2, &[(1, &[1, 0]), (1, &[0, 1])]);
        let r = f.restrict_to_hyperplane(&f).unwrap();
        assert!(r.is_zero());
        assert_eq!(r.vars(), &["z1".to_string()]);

        let f = qpoly(&v2, &[(1, &[1, 1])]);
        let l = qpoly(&v2, &[(1, &[0, 1]), (-1, &[1, 0])]);
        let r = f.restrict_to_hyperplane(&l).unwrap();
        assert_eq!(r, qpoly(&["z1"], &[(1, &[2])]));
    }

    #[test]
    fn restriction_rejects_bad_forms() {
        let v2 = ["z1", "z2"];
        let f = qpoly(&v2, &[(1, &[1, 1])]);
        let zero = qpoly(&v2, &[]);
        assert!(f.restrict_to_hyperplane(&zero).is_err());
        let quad = qpoly(&v2, &[(1, &[2, 0])]);
        assert!(f.restrict_to_hyperplane(&quad).is_err());
        let affine = qpoly(&v2, &[(1, &[1, 0]), (1, &[0, 0])]);
        assert!(f.restrict_to_hyperplane(&affine).is_err());
    }

    #[test]
    fn random_poly_contracts() {
        let f = PrimeField::new(5).unwrap();
        let vars = vec!["x".to_string(), "y".to_string()];
        let a = random_poly(2, vars.clone(), f, true, 17);
        let b = random_poly(2, vars.clone(), f, true, 17);
        assert_eq!(a, b);
        assert!(a.is_homogeneous());
        assert!(a.terms().all(|(m, _)| m.degree() == 2));

        let c = random_poly(0, vars, f, false, 3);
        assert!(c.total_degree().unwrap_or(0) == 0);
    }

    #[test]
    fn zero_linear_form_frequency_matches_binomial() {
        // P(zero) = 101^-3 per seed; over 1000 seeds the count must sit within
        // five standard deviations of the binomial mean.
        let f = PrimeField::new(101).unwrap();
        let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let trials = 1000u64;
        let zeros = (0..trials).filter(|&s| random_poly(1, vars.clone(), f, true, s).is_zero()).count() as f64;
        let p = 1.0 / 101f64.powi(3);
        let mean = trials as f64 * p;
        let sd = (trials as f64 * p * (1.0 - p)).sqrt();
        assert!((zeros - mean).abs() <= 5.0 * sd, "zeros={zeros} mean={mean} sd={sd}");
    }

    #[test]
    fn lift_point_lands_on_hyperplane() {
        let v3: Vec<String> = ["z1", "z2", "z3"].iter().map(|s| s.to_string()).collect();
        let l = MultiPoly::linear(RationalField, v3, &[q(2), q(-1), q(3)]).unwrap();
        let p = MultiPoly::<RationalField>::lift_point(&l, &[q(1), q(4)]).unwrap();
        assert_eq!(l.eval(&p).unwrap(), q(0));
        assert_eq!(&p[..2], &[q(1), q(4)]);
    }
}
