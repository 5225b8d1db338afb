//! Projective codimension and regular-sequence decisions for homogeneous ideals.
//!
//! For homogeneous `q_1, ..., q_r` in `n` variables the affine cone
//! `Z(q_1, ..., q_r)` and its projectivization share their codimension, and
//! the codimension of a reducible locus is the minimum over its components.
//! That minimum is `n - dim Z`, where `dim Z` is the Krull dimension of the
//! quotient ring. The exact kernel reads `dim Z` off the staircase of a
//! Gröbner basis: it is the size of the largest set of variables containing
//! the support of no leading monomial.

mod gfq;
pub mod groebner;
pub mod oracle;

use serde::{Serialize, Serializer};

pub use groebner::{groebner_basis, groebner_basis_in, GroebnerBasis, OrderKind, TermOrder};
pub use oracle::{codim_probabilistic, OracleConfig};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Monomial, MultiPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodimMethod {
    ExactGroebner,
    ProbabilisticSlicing,
}

impl CodimMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            CodimMethod::ExactGroebner => "exact-groebner",
            CodimMethod::ProbabilisticSlicing => "probabilistic-slicing",
        }
    }
}

impl Serialize for CodimMethod {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodimResult {
    pub codim: usize,
    pub method: CodimMethod,
    /// 1 for exact answers.
    pub confidence: Rational,
    /// The cone is the origin alone, so the projective locus is empty.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub empty_projective_locus: bool,
}

impl CodimResult {
    fn exact(codim: usize, nvars: usize) -> Self {
        CodimResult {
            codim,
            method: CodimMethod::ExactGroebner,
            confidence: Rational::one(),
            empty_projective_locus: nvars > 0 && codim == nvars,
        }
    }

    fn probabilistic(codim: usize, trials: u32) -> Self {
        CodimResult {
            codim,
            method: CodimMethod::ProbabilisticSlicing,
            confidence: oracle::trial_confidence(trials),
            empty_projective_locus: false,
        }
    }
}

/// Size limits for the exact kernel. Gröbner bases can blow up doubly
/// exponentially, so larger inputs are refused unless `unlimited` is set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactBudget {
    pub max_vars: usize,
    pub max_generators: usize,
    pub unlimited: bool,
}

impl Default for ExactBudget {
    fn default() -> Self {
        ExactBudget { max_vars: 8, max_generators: 12, unlimited: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodimMode {
    Exact(ExactBudget),
    Probabilistic(OracleConfig),
}

impl Default for CodimMode {
    fn default() -> Self {
        CodimMode::Exact(ExactBudget::default())
    }
}

impl CodimMode {
    pub fn method(&self) -> CodimMethod {
        match self {
            CodimMode::Exact(_) => CodimMethod::ExactGroebner,
            CodimMode::Probabilistic(_) => CodimMethod::ProbabilisticSlicing,
        }
    }

    /// 1 for exact answers, `1 - 2^-trials` for the slicing oracle.
    pub fn confidence(&self) -> Rational {
        match self {
            CodimMode::Exact(_) => Rational::one(),
            CodimMode::Probabilistic(cfg) => oracle::trial_confidence(cfg.trials),
        }
    }
}

pub(crate) fn check_homogeneous<K: Field>(generators: &[MultiPoly<K>]) -> Result<()> {
    let first = &generators[0];
    for (i, g) in generators.iter().enumerate() {
        if g.vars() != first.vars() || g.field() != first.field() {
            return Err(Error::input("generators must share one field and variable list"));
        }
        if !g.is_homogeneous() {
            return Err(Error::input(format!("generator {} is not homogeneous", i + 1)));
        }
        if g.total_degree() == Some(0) {
            return Err(Error::input(format!("generator {} is a nonzero constant", i + 1)));
        }
    }
    Ok(())
}

/// Largest number of variables avoiding the full support of every leading monomial.
pub fn staircase_dimension(nvars: usize, leading: &[Monomial]) -> usize {
    assert!(nvars < 32, "staircase search is over variable subsets");
    let masks: Vec<u32> = leading.iter().map(|m| m.support().fold(0u32, |acc, i| acc | (1 << i))).collect();
    (0u32..(1 << nvars))
        .filter(|s| masks.iter().all(|m| m & !s != 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Codimension of `V(generators)` (equivalently of its affine cone).
///
/// An empty list has codimension 0. When the cone is the origin alone the
/// codimension is `n` and the result is flagged as an empty projective locus.
pub fn projective_codim<K: Field>(generators: &[MultiPoly<K>], mode: &CodimMode) -> Result<CodimResult> {
    if generators.is_empty() {
        return Ok(match mode {
            CodimMode::Exact(_) => CodimResult::exact(0, 0),
            CodimMode::Probabilistic(cfg) => CodimResult::probabilistic(0, cfg.trials),
        });
    }
    check_homogeneous(generators)?;
    match mode {
        CodimMode::Exact(budget) => exact_codim(generators, budget),
        CodimMode::Probabilistic(cfg) => codim_probabilistic(generators, cfg),
    }
}

fn exact_codim<K: Field>(generators: &[MultiPoly<K>], budget: &ExactBudget) -> Result<CodimResult> {
    let n = generators[0].nvars();
    if !budget.unlimited && (n > budget.max_vars || generators.len() > budget.max_generators) {
        return Err(Error::budget(format!(
            "exact codimension limited to {} variables and {} generators (got {} and {})",
            budget.max_vars,
            budget.max_generators,
            n,
            generators.len()
        )));
    }
    let first = &generators[0];
    let gb = groebner_basis_in(first.field().clone(), first.vars().to_vec(), generators, &TermOrder::grevlex(n))?;
    let dim = staircase_dimension(n, &gb.leading_monomials());
    Ok(CodimResult::exact(n - dim, n))
}

/// Outcome of a regular-sequence test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceVerdict {
    pub regular: bool,
    /// Codimension of each prefix, `trace[j - 1]` for the first `j` elements.
    pub trace: Vec<usize>,
    /// Smallest prefix length whose codimension falls short of its length.
    pub failing_prefix: Option<usize>,
    /// 1-based positions of zero polynomials in the sequence.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub zero_positions: Vec<usize>,
    pub method: CodimMethod,
    pub confidence: Rational,
}

/// Decides whether the homogeneous `generators`, in the given order, form a
/// regular sequence at the origin: the prefix of length `j` must cut out
/// codimension exactly `j` for every `j`.
pub fn is_regular_sequence<K: Field>(generators: &[MultiPoly<K>], mode: &CodimMode) -> Result<SequenceVerdict> {
    let (method, confidence) = (mode.method(), mode.confidence());
    if generators.is_empty() {
        return Ok(SequenceVerdict {
            regular: true,
            trace: vec![],
            failing_prefix: None,
            zero_positions: vec![],
            method,
            confidence,
        });
    }
    check_homogeneous(generators)?;
    let n = generators[0].nvars();
    let zero_positions: Vec<usize> =
        generators.iter().enumerate().filter(|(_, g)| g.is_zero()).map(|(i, _)| i + 1).collect();
    if generators.len() > n {
        return Ok(SequenceVerdict {
            regular: false,
            trace: vec![],
            failing_prefix: Some(n + 1),
            zero_positions,
            method,
            confidence,
        });
    }
    let mut trace = Vec::with_capacity(generators.len());
    for j in 1..=generators.len() {
        trace.push(projective_codim(&generators[..j], mode)?.codim);
    }
    let failing_prefix = trace.iter().enumerate().find(|(i, c)| **c != i + 1).map(|(i, _)| i + 1);
    Ok(SequenceVerdict { regular: failing_prefix.is_none(), trace, failing_prefix, zero_positions, method, confidence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::poly::{random_poly, standard_vars};

    fn gf5(terms: &[(u64, &[u32])]) -> MultiPoly<PrimeField> {
        MultiPoly::from_terms(
            PrimeField::new(5).unwrap(),
            vec!["x".into(), "y".into(), "z".into()],
            terms.iter().map(|(c, e)| (Monomial::new(e.to_vec()), *c)),
        )
        .unwrap()
    }

    fn x() -> MultiPoly<PrimeField> {
        gf5(&[(1, &[1, 0, 0])])
    }
    fn y() -> MultiPoly<PrimeField> {
        gf5(&[(1, &[0, 1, 0])])
    }

    /// Brute force: nonzero points of the cone over GF(5)^3.
    fn cone_points(gens: &[MultiPoly<PrimeField>]) -> Vec<[u64; 3]> {
        let mut out = vec![];
        for a in 0..5 {
            for b in 0..5 {
                for c in 0..5 {
                    if (a, b, c) != (0, 0, 0) && gens.iter().all(|g| g.eval(&[a, b, c]).unwrap() == 0) {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn codim_examples() {
        let exact = CodimMode::default();
        assert_eq!(projective_codim(&[x()], &exact).unwrap().codim, 1);
        let xy = gf5(&[(1, &[1, 1, 0])]);
        let xz = gf5(&[(1, &[1, 0, 1])]);
        assert_eq!(projective_codim(&[xy, xz], &exact).unwrap().codim, 1);

        let quad = gf5(&[(1, &[2, 0, 0]), (1, &[0, 2, 0])]);
        let xy = gf5(&[(1, &[1, 1, 0])]);
        // the oracle for this example: the cone over GF(5) is the z-axis
        let pts = cone_points(&[quad.clone(), xy.clone()]);
        assert!(pts.iter().all(|p| p[0] == 0 && p[1] == 0));
        assert_eq!(pts.len(), 4);
        let r = projective_codim(&[quad, xy], &exact).unwrap();
        assert_eq!(r.codim, 2);
        assert_eq!(r.confidence, Rational::one());
    }

    #[test]
    fn origin_only_cone_is_flagged() {
        let z = gf5(&[(1, &[0, 0, 1])]);
        let r = projective_codim(&[x(), y(), z], &CodimMode::default()).unwrap();
        assert_eq!(r.codim, 3);
        assert!(r.empty_projective_locus);
    }

    #[test]
    fn empty_list_and_errors() {
        assert_eq!(projective_codim::<PrimeField>(&[], &CodimMode::default()).unwrap().codim, 0);
        let inhom = gf5(&[(1, &[2, 0, 0]), (1, &[0, 1, 0])]);
        assert!(matches!(projective_codim(&[inhom], &CodimMode::default()), Err(Error::InvalidInput(_))));
        let q = MultiPoly::var(crate::field::RationalField, standard_vars(2), 0);
        let prob = CodimMode::Probabilistic(OracleConfig::default());
        assert!(matches!(projective_codim(&[q], &prob), Err(Error::Unsupported(_))));
    }

    #[test]
    fn exact_budget_is_enforced() {
        let f = PrimeField::new(5).unwrap();
        let g = MultiPoly::var(f, standard_vars(9), 0);
        assert!(matches!(projective_codim(std::slice::from_ref(&g), &CodimMode::default()), Err(Error::Budget(_))));
        let unlimited = CodimMode::Exact(ExactBudget { unlimited: true, ..ExactBudget::default() });
        assert_eq!(projective_codim(&[g], &unlimited).unwrap().codim, 1);
    }

    #[test]
    fn regular_sequence_examples() {
        let exact = CodimMode::default();
        let v = is_regular_sequence(&[x(), y()], &exact).unwrap();
        assert!(v.regular);
        assert_eq!(v.trace, vec![1, 2]);

        let xy = gf5(&[(1, &[1, 1, 0])]);
        let xz = gf5(&[(1, &[1, 0, 1])]);
        let v = is_regular_sequence(&[xy, xz], &exact).unwrap();
        assert!(!v.regular);
        assert_eq!(v.trace, vec![1, 1]);
        assert_eq!(v.failing_prefix, Some(2));

        let quad = gf5(&[(1, &[2, 0, 0]), (1, &[0, 2, 0])]);
        let xy = gf5(&[(1, &[1, 1, 0])]);
        let v = is_regular_sequence(&[quad, xy], &exact).unwrap();
        assert!(v.regular);
        assert_eq!(v.trace, vec![1, 2]);
    }

    #[test]
    fn zero_generator_breaks_regularity() {
        let zero = gf5(&[]);
        let v = is_regular_sequence(&[x(), zero, y()], &CodimMode::default()).unwrap();
        assert!(!v.regular);
        assert_eq!(v.failing_prefix, Some(2));
        assert_eq!(v.zero_positions, vec![2]);
    }

    #[test]
    fn overlong_sequences_are_irregular() {
        let z = gf5(&[(1, &[0, 0, 1])]);
        let v = is_regular_sequence(&[x(), y(), z, x()], &CodimMode::default()).unwrap();
        assert!(!v.regular);
        assert_eq!(v.failing_prefix, Some(4));
    }

    #[test]
    fn staircase_examples() {
        let m = |e: &[u32]| Monomial::new(e.to_vec());
        assert_eq!(staircase_dimension(3, &[]), 3);
        assert_eq!(staircase_dimension(3, &[m(&[1, 0, 0])]), 2);
        assert_eq!(staircase_dimension(3, &[m(&[1, 1, 0])]), 2);
        assert_eq!(staircase_dimension(3, &[m(&[2, 0, 0]), m(&[0, 1, 0]), m(&[0, 0, 3])]), 0);
    }

    fn random_system(seed: u64) -> Vec<MultiPoly<PrimeField>> {
        let f = PrimeField::new(7).unwrap();
        let n = 3 + (seed % 2) as usize;
        let r = 1 + (seed % 3) as usize;
        (0..r)
            .map(|i| random_poly(1 + ((seed / 3 + i as u64) % 3) as u32, standard_vars(n), f, true, seed * 31 + i as u64))
            .collect()
    }

    #[test]
    fn prefix_codims_grow_by_at_most_one() {
        for seed in 0..40 {
            let gens = random_system(seed);
            let v = is_regular_sequence(&gens, &CodimMode::default()).unwrap();
            for w in v.trace.windows(2) {
                assert!(w[1] == w[0] || w[1] == w[0] + 1, "seed {seed}: {:?}", v.trace);
            }
        }
    }

    #[test]
    fn verdict_is_permutation_invariant() {
        for seed in 0..20 {
            let gens = random_system(seed + 100);
            let base = is_regular_sequence(&gens, &CodimMode::default()).unwrap().regular;
            let mut idx: Vec<usize> = (0..gens.len()).collect();
            // all permutations via Heap's algorithm
            let mut c = vec![0; idx.len()];
            let mut i = 0;
            while i < idx.len() {
                if c[i] < i {
                    if i % 2 == 0 {
                        idx.swap(0, i);
                    } else {
                        idx.swap(c[i], i);
                    }
                    let perm: Vec<_> = idx.iter().map(|&k| gens[k].clone()).collect();
                    assert_eq!(is_regular_sequence(&perm, &CodimMode::default()).unwrap().regular, base);
                    c[i] += 1;
                    i = 0;
                } else {
                    c[i] = 0;
                    i += 1;
                }
            }
        }
    }
}
