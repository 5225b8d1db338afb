//! Probabilistic codimension by random linear slicing and point enumeration.
//!
//! The affine cone `Z` of a homogeneous system has dimension `D` exactly when
//! a generic linear subspace of codimension `D` meets it in the origin only,
//! while every subspace of smaller codimension meets it in more. For each
//! `j = 0, 1, ..., n` the oracle cuts `Z` with `j` random linear forms
//! drawn over GF(p^e), `e = max_extension`, and looks for a nonzero point of
//! the slice over the same field.
//! This is entirely independent of the Gröbner kernel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gfq::SmallField;
use super::CodimResult;
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::MultiPoly;

/// Settings of the slicing oracle.
///
/// Slices and points both live in GF(p^max_extension), so a larger extension
/// makes accidental hits rarer at the price of a larger enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Random slices tried for each slice count.
    pub trials: u32,
    pub seed: u64,
    /// Slices are drawn, and points searched, over GF(p^max_extension).
    pub max_extension: u32,
    /// Refuse when `(p^max_extension)^n` exceeds this many points.
    pub max_points: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { trials: 15, seed: 0, max_extension: 2, max_points: 1 << 24 }
    }
}

/// Residue-level copy of one generator for fast evaluation.
struct Compiled {
    terms: Vec<(u32, Vec<u32>)>,
}

/// Estimates the projective codimension of `V(generators)` over GF(p).
///
/// The answer is `n - j` for the smallest slice count `j >= n - r` at which
/// a strict majority of the random slices contain no nonzero point, where
/// `r` counts the nonzero generators. A slice that is
/// empty over the algebraic closure can look nonempty only when it passes
/// through a rational point by accident, and a slice that is nonempty over
/// the closure can look empty only when none of its points are defined over
/// the enumeration field; both happen with probability roughly `deg/q` per
/// trial for `q = p^max_extension`, which the majority vote suppresses.
pub fn codim_probabilistic<K: Field>(generators: &[MultiPoly<K>], config: &OracleConfig) -> Result<CodimResult> {
    let Some(first) = generators.first() else {
        return Ok(CodimResult::probabilistic(0, config.trials));
    };
    let p = match first.field().spec() {
        crate::field::FieldSpec::Prime(p) => p,
        crate::field::FieldSpec::Rational => {
            return Err(Error::Unsupported("probabilistic codimension needs a prime field".into()))
        }
    };
    super::check_homogeneous(generators)?;
    let n = first.nvars();
    if config.trials == 0 || config.max_extension == 0 {
        return Err(Error::input("oracle needs at least one trial and one enumeration field"));
    }
    let worst = (p as u128).checked_pow(config.max_extension * n as u32);
    if worst.is_none_or(|w| w > config.max_points as u128) {
        return Err(Error::budget(format!(
            "point enumeration over GF({p}^{})^{n} exceeds the budget of {} points",
            config.max_extension, config.max_points
        )));
    }
    let field = SmallField::new(p, config.max_extension)?;
    let compiled: Vec<Compiled> = generators
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| Compiled {
            terms: g
                .terms()
                .map(|(m, c)| (field.embed(g.field().residue(c).expect("prime field")), m.exponents().to_vec()))
                .collect(),
        })
        .collect();
    let q = field.order();

    // Krull: r forms cut out a cone of dimension at least n - r
    for j in n.saturating_sub(compiled.len())..=n {
        let trials = if j == 0 { 1 } else { config.trials };
        let mut empty = 0u32;
        for t in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(((j as u64) << 32) | t as u64);
            let forms: Vec<Vec<u32>> =
                (0..j).map(|_| (0..n).map(|_| rng.gen_range(0..q) as u32).collect()).collect();
            let kernel = kernel_basis(&field, forms, n);
            if !slice_has_point(&compiled, &kernel, n, &field) {
                empty += 1;
            }
        }
        if 2 * empty > trials {
            return Ok(CodimResult::probabilistic(n - j, config.trials));
        }
    }
    Ok(CodimResult::probabilistic(0, config.trials))
}

#[allow(clippy::needless_range_loop)]
fn kernel_basis(field: &SmallField, mut m: Vec<Vec<u32>>, n: usize) -> Vec<Vec<u32>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(piv) = (r..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = field.inv(m[r][col]);
        for x in m[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..m.len() {
            let factor = m[i][col];
            if i != r && factor != 0 {
                for c in 0..n {
                    m[i][c] = field.sub(m[i][c], field.mul(factor, m[r][c]));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|fc| {
            let mut v = vec![0; n];
            v[fc] = 1;
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = field.neg(row[fc]);
            }
            v
        })
        .collect()
}

/// Searches for a nonzero common zero inside the span of `kernel`.
fn slice_has_point(gens: &[Compiled], kernel: &[Vec<u32>], n: usize, field: &SmallField) -> bool {
    let d = kernel.len();
    if d == 0 {
        return false;
    }
    if gens.is_empty() {
        return true;
    }
    let q = field.order();
    // projective points of the slice: coefficient vectors whose first nonzero entry is 1
    for lead in 0..d {
        let free = d - lead - 1;
        let count = q.pow(free as u32);
        for idx in 0..count {
            let mut v = idx;
            let mut point = kernel[lead].clone();
            for row in &kernel[lead + 1..] {
                let c = (v % q) as u32;
                v /= q;
                if c == 0 {
                    continue;
                }
                for i in 0..n {
                    point[i] = field.add(point[i], field.mul(c, row[i]));
                }
            }
            if gens.iter().all(|g| eval(g, &point, field) == 0) {
                return true;
            }
        }
    }
    false
}

fn eval(g: &Compiled, point: &[u32], field: &SmallField) -> u32 {
    let mut acc = 0;
    for (c, exps) in &g.terms {
        let mut t = *c;
        for (x, e) in point.iter().zip(exps) {
            for _ in 0..*e {
                t = field.mul(t, *x);
            }
        }
        acc = field.add(acc, t);
    }
    acc
}

pub(super) fn trial_confidence(trials: u32) -> Rational {
    Rational::one() - Rational::one() / Rational::from_integer(num_bigint::BigInt::from(2u8).pow(trials))
}
