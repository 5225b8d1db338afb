//! Regularity of a complete intersection at a point.
//!
//! Write the equations of `V` near the point `o = 0` as
//! `f_i = q_{i,1} + ... + q_{i,d_i}` with `q_{i,j}` homogeneous of degree `j`.
//! `V` is regular at `o` when, for every linear form `l` not vanishing on
//! the tangent space `T_oV = {q_{1,1} = ... = q_{k,1} = 0}`, the forms
//! `l` and `q_{i,j}` for `(i, j)` in the index set `I` form a regular
//! sequence, i.e. cut out codimension `#I + 1`.
//!
//! The index set runs over `1 <= i <= k`, `1 <= j <= d_i` and drops two
//! top-degree labels: `(k, d_k)` and `(k-1, d_{k-1})` when the two largest
//! degrees agree, `(k, d_k)` and `(k, d_k - 1)` otherwise.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize, Serializer};

use crate::arith::Rational;
use crate::dimension::{is_regular_sequence, CodimMethod, CodimMode};
use crate::error::{Error, Result};
use crate::families::DegreeTuple;
use crate::field::{Field, FieldSpec, PrimeField, RationalField};
use crate::linalg::{kernel_basis, rank};
use crate::poly::{random_poly_with, standard_vars, MultiPoly};
use crate::serial::PolyJson;

/// `(i, j)` labels, `i` 1-based.
pub type Label = (usize, u32);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexSet {
    /// In `i`-major, then `j`, order.
    pub pairs: Vec<Label>,
    pub excluded: [Label; 2],
}

impl IndexSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs of degree at least two.
    pub fn higher(&self) -> impl Iterator<Item = &Label> {
        self.pairs.iter().filter(|(_, j)| *j >= 2)
    }
}

pub fn index_set(t: &DegreeTuple) -> IndexSet {
    let k = t.k();
    let excluded = if t.second() == t.top() {
        [(k, t.top()), (k - 1, t.second())]
    } else {
        [(k, t.top()), (k, t.top() - 1)]
    };
    let pairs = t
        .degrees()
        .iter()
        .enumerate()
        .flat_map(|(i, &d)| (1..=d).map(move |j| (i + 1, j)))
        .filter(|p| !excluded.contains(p))
        .collect();
    IndexSet { pairs, excluded }
}

/// A complete intersection given by affine equations vanishing at the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct PointedCI<K: Field> {
    degrees: DegreeTuple,
    equations: Vec<MultiPoly<K>>,
}

impl<K: Field> PointedCI<K> {
    /// Equations must share at least `sum d_i` variables, have zero constant
    /// term, and `deg f_i = d_i`.
    pub fn new(degrees: DegreeTuple, equations: Vec<MultiPoly<K>>) -> Result<Self> {
        if equations.len() != degrees.k() {
            return Err(Error::input(format!("{} equations for {} degrees", equations.len(), degrees.k())));
        }
        let n = degrees.ambient() as usize;
        let first = &equations[0];
        for (i, (f, &d)) in equations.iter().zip(degrees.degrees()).enumerate() {
            if f.nvars() < n {
                return Err(Error::input(format!("equation {} has {} variables, need at least {n}", i + 1, f.nvars())));
            }
            if f.vars() != first.vars() || f.field() != first.field() {
                return Err(Error::input("equations must share one field and variable list"));
            }
            if !f.homogeneous_part(0).is_zero() {
                return Err(Error::input(format!("equation {} does not vanish at the origin", i + 1)));
            }
            if f.total_degree() != Some(d) {
                return Err(Error::input(format!(
                    "equation {} has degree {}, expected {d}",
                    i + 1,
                    f.total_degree().map_or("-inf".into(), |x| x.to_string())
                )));
            }
        }
        Ok(PointedCI { degrees, equations })
    }

    pub fn degrees(&self) -> &DegreeTuple {
        &self.degrees
    }

    pub fn equations(&self) -> &[MultiPoly<K>] {
        &self.equations
    }

    pub fn field(&self) -> &K {
        self.equations[0].field()
    }

    pub fn vars(&self) -> &[String] {
        self.equations[0].vars()
    }

    pub fn nvars(&self) -> usize {
        self.equations[0].nvars()
    }

    /// `q_{i,j}`, with `i` 1-based.
    pub fn part(&self, (i, j): Label) -> MultiPoly<K> {
        self.equations[i - 1].homogeneous_part(j)
    }

    pub fn linear_parts(&self) -> Vec<MultiPoly<K>> {
        (1..=self.degrees.k()).map(|i| self.part((i, 1))).collect()
    }

    pub fn tangent_space(&self) -> TangentSpace<K::Elem> {
        tangent_space(&self.linear_parts()).expect("linear parts are linear")
    }

    /// Applies `z_i -> sum_j rows[i][j] z_j` to every equation.
    pub fn change_coordinates(&self, rows: &[Vec<K::Elem>]) -> Result<Self> {
        let equations = self.equations.iter().map(|f| f.substitute_linear(rows)).collect::<Result<_>>()?;
        PointedCI::new(self.degrees.clone(), equations)
    }

    pub fn to_json(&self) -> PointedCIJson {
        PointedCIJson {
            degrees: self.degrees.degrees().to_vec(),
            field: self.field().spec().to_string(),
            equations: self.equations.iter().map(MultiPoly::to_json).collect(),
            linear_form: None,
        }
    }

    pub fn from_json(field: K, json: &PointedCIJson) -> Result<Self> {
        let declared: FieldSpec = json.field.parse()?;
        if declared != field.spec() {
            return Err(Error::input(format!("instance declared over {declared}, expected {}", field.spec())));
        }
        let degrees = DegreeTuple::new(json.degrees.clone())?;
        if degrees.degrees() != json.degrees.as_slice() {
            return Err(Error::input("degrees must be listed in nondecreasing order to match the equations"));
        }
        let equations =
            json.equations.iter().map(|e| MultiPoly::from_json(field.clone(), e)).collect::<Result<Vec<_>>>()?;
        PointedCI::new(degrees, equations)
    }
}

/// `{ "degrees": [..], "field": "gf:<p>", "equations": [<polynomial>, ..] }`,
/// optionally with the linear form `l` under `"linear_form"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointedCIJson {
    pub degrees: Vec<u32>,
    pub field: String,
    pub equations: Vec<PolyJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear_form: Option<PolyJson>,
}

impl PointedCIJson {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::input(format!("malformed instance JSON: {e}")))
    }
}

/// An instance whose field is only known at runtime.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyPointedCI {
    Rational(PointedCI<RationalField>, Option<MultiPoly<RationalField>>),
    Prime(PointedCI<PrimeField>, Option<MultiPoly<PrimeField>>),
}

impl AnyPointedCI {
    pub fn from_json(json: &PointedCIJson) -> Result<Self> {
        fn build<K: Field>(field: K, json: &PointedCIJson) -> Result<(PointedCI<K>, Option<MultiPoly<K>>)> {
            let ci = PointedCI::from_json(field.clone(), json)?;
            let l = json.linear_form.as_ref().map(|l| MultiPoly::from_json(field, l)).transpose()?;
            if let Some(l) = &l {
                if l.vars() != ci.vars() {
                    return Err(Error::input("linear form uses different variables than the equations"));
                }
            }
            Ok((ci, l))
        }
        match json.field.parse::<FieldSpec>()? {
            FieldSpec::Rational => build(RationalField, json).map(|(c, l)| AnyPointedCI::Rational(c, l)),
            FieldSpec::Prime(p) => build(PrimeField::new(p)?, json).map(|(c, l)| AnyPointedCI::Prime(c, l)),
        }
    }
}

/// Common kernel of the linear parts.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentSpace<E> {
    pub basis: Vec<Vec<E>>,
    pub codim: usize,
    /// The linear parts are dependent, so `V` is singular at the point.
    pub singular: bool,
}

pub fn tangent_space<K: Field>(linear: &[MultiPoly<K>]) -> Result<TangentSpace<K::Elem>> {
    let Some(first) = linear.first() else {
        return Err(Error::input("no linear forms"));
    };
    let n = first.nvars();
    let rows = linear
        .iter()
        .map(|q| q.linear_coefficients().ok_or_else(|| Error::input(format!("{q} is not a linear form"))))
        .collect::<Result<Vec<_>>>()?;
    let basis = kernel_basis(first.field(), &rows, n);
    let codim = n - basis.len();
    Ok(TangentSpace { basis, codim, singular: codim < linear.len() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Regular,
    Irregular,
    SingularAtPoint,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Regular => "regular",
            Verdict::Irregular => "irregular",
            Verdict::SingularAtPoint => "singular-at-point",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RegularityOptions {
    pub mode: CodimMode,
    /// Eliminate `l` and the linear parts before the codimension test.
    pub reduced: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    pub verdict: Verdict,
    /// 1-based position in `sequence` of the first prefix that falls short.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_prefix: Option<usize>,
    /// Codimension of each prefix of `sequence`.
    pub trace: Vec<usize>,
    /// `#I + 1`, the codimension required of the whole sequence.
    pub expected_codim: usize,
    pub linear_form: String,
    /// Labels in test order: `l`, then `q(i,j)`.
    pub sequence: Vec<String>,
    pub reduced: bool,
    pub method: CodimMethod,
    pub confidence: Rational,
}

fn label((i, j): Label) -> String {
    format!("q({i},{j})")
}

/// Tests the regular-sequence condition for one linear form `l`.
///
/// In full mode the sequence is `l` followed by `q_{i,j}`, `(i, j)` in `I`
/// in order, over all `sum d_i` variables. Reduced mode restricts the parts
/// of degree at least two to `{l = q_{1,1} = ... = q_{k,1} = 0}` and tests
/// those in `M - 1` variables; its sequence lists the linear forms first,
/// whose prefix codimensions `1, ..., k + 1` follow from their independence.
pub fn regularity_check<K: Field>(
    ci: &PointedCI<K>,
    l: &MultiPoly<K>,
    options: &RegularityOptions,
) -> Result<RegularityReport> {
    if l.vars() != ci.vars() || l.field() != ci.field() {
        return Err(Error::input("linear form lives in a different ring"));
    }
    let l_coeffs = l
        .linear_coefficients()
        .filter(|_| !l.is_zero())
        .ok_or_else(|| Error::input(format!("{l} is not a nonzero linear form")))?;
    let mode = &options.mode;
    let index = index_set(&ci.degrees);
    let k = ci.degrees.k();
    let mut report = RegularityReport {
        verdict: Verdict::SingularAtPoint,
        failing_prefix: None,
        trace: vec![],
        expected_codim: index.len() + 1,
        linear_form: l.to_string(),
        sequence: vec![],
        reduced: options.reduced,
        method: mode.method(),
        confidence: mode.confidence(),
    };
    let linear = ci.linear_parts();
    let tangent = tangent_space(&linear)?;
    if tangent.singular {
        return Ok(report);
    }
    let mut rows: Vec<_> = linear.iter().map(|q| q.linear_coefficients().expect("linear")).collect();
    rows.push(l_coeffs);
    if rank(ci.field(), &rows, ci.nvars()) != k + 1 {
        return Err(Error::input(format!("linear form {l} vanishes on the tangent space")));
    }

    let (sequence, labels, offset) = if options.reduced {
        let mut cut = vec![l.clone()];
        cut.extend(linear.iter().cloned());
        let mut higher: Vec<MultiPoly<K>> = index.higher().map(|&p| ci.part(p)).collect();
        for h in 0..cut.len() {
            let form = cut[h].clone();
            higher = higher.iter().map(|q| q.restrict_to_hyperplane(&form)).collect::<Result<_>>()?;
            for c in cut.iter_mut().skip(h + 1) {
                *c = c.restrict_to_hyperplane(&form)?;
            }
        }
        let mut labels = vec!["l".to_string()];
        labels.extend((1..=k).map(|i| label((i, 1))));
        labels.extend(index.higher().map(|&p| label(p)));
        (higher, labels, k + 1)
    } else {
        let mut seq = vec![l.clone()];
        seq.extend(index.pairs.iter().map(|&p| ci.part(p)));
        let mut labels = vec!["l".to_string()];
        labels.extend(index.pairs.iter().map(|&p| label(p)));
        (seq, labels, 0)
    };
    let verdict = is_regular_sequence(&sequence, mode)?;
    report.trace = (1..=offset).chain(verdict.trace.iter().map(|c| c + offset)).collect();
    report.failing_prefix = verdict.failing_prefix.map(|p| p + offset);
    report.verdict = if verdict.regular { Verdict::Regular } else { Verdict::Irregular };
    report.sequence = labels;
    Ok(report)
}

/// The first coordinate `z_i` that does not vanish on the tangent space.
pub fn first_admissible_coordinate<K: Field>(ci: &PointedCI<K>) -> Option<MultiPoly<K>> {
    let tangent = ci.tangent_space();
    if tangent.singular {
        return None;
    }
    let f = ci.field();
    (0..ci.nvars())
        .find(|&i| tangent.basis.iter().any(|v| !f.is_zero(&v[i])))
        .map(|i| MultiPoly::var(f.clone(), ci.vars().to_vec(), i))
}

/// Regularity evidence from several random linear forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampledRegularity {
    /// Always "sampled": the condition quantifies over all admissible forms.
    pub evidence: &'static str,
    pub verdict: Verdict,
    pub samples: Vec<RegularityReport>,
}

pub const DEFAULT_SAMPLES: usize = 8;

/// Runs [`regularity_check`] for `samples` random admissible forms and
/// reports the conjunction.
pub fn sampled_regularity<K: Field>(
    ci: &PointedCI<K>,
    samples: usize,
    seed: u64,
    options: &RegularityOptions,
) -> Result<SampledRegularity> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tangent = ci.tangent_space();
    let mut out = SampledRegularity { evidence: "sampled", verdict: Verdict::SingularAtPoint, samples: vec![] };
    if tangent.singular {
        return Ok(out);
    }
    let f = ci.field();
    let n = ci.nvars();
    let linear: Vec<_> = ci.linear_parts().iter().map(|q| q.linear_coefficients().expect("linear")).collect();
    for _ in 0..samples {
        let mut attempts = 0;
        let l = loop {
            let coeffs: Vec<K::Elem> = (0..n).map(|_| f.random_elem(&mut rng)).collect();
            let mut rows = linear.clone();
            rows.push(coeffs.clone());
            if rank(f, &rows, n) == linear.len() + 1 {
                break MultiPoly::linear(f.clone(), ci.vars().to_vec(), &coeffs)?;
            }
            attempts += 1;
            if attempts == 1000 {
                return Err(Error::budget("no admissible linear form found in 1000 draws"));
            }
        };
        out.samples.push(regularity_check(ci, &l, options)?);
    }
    out.verdict = if out.samples.iter().all(|r| r.verdict == Verdict::Regular) {
        Verdict::Regular
    } else {
        Verdict::Irregular
    };
    Ok(out)
}

/// Random instance from [`random_complete_intersection`].
#[derive(Clone, Debug, PartialEq)]
pub struct RandomInstance {
    pub ci: PointedCI<PrimeField>,
    /// Linear parts stayed dependent through every attempt.
    pub singular: bool,
    pub attempts: u32,
}

pub const DEFAULT_INDEPENDENCE_ATTEMPTS: u32 = 2;
const TOP_DEGREE_ATTEMPTS: u32 = 64;

/// Random equations of the given degrees through the origin, deterministic
/// in `seed`. Draws are repeated up to `attempts` times until the linear
/// parts are independent; if they never are, the last draw is returned
/// flagged singular.
pub fn random_complete_intersection(
    degrees: &DegreeTuple,
    field: PrimeField,
    seed: u64,
    attempts: u32,
) -> Result<RandomInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars = standard_vars(degrees.ambient() as usize);
    let mut last = None;
    for attempt in 1..=attempts.max(1) {
        let mut equations = Vec::with_capacity(degrees.k());
        for &d in degrees.degrees() {
            let mut tries = 0;
            let f = loop {
                let f = random_poly_with(&mut rng, d, vars.clone(), field, false);
                let f = f.sub(&f.homogeneous_part(0));
                if !f.homogeneous_part(d).is_zero() {
                    break f;
                }
                tries += 1;
                if tries == TOP_DEGREE_ATTEMPTS {
                    return Err(Error::budget(format!(
                        "top-degree part stayed zero in {TOP_DEGREE_ATTEMPTS} draws of degree {d}"
                    )));
                }
            };
            equations.push(f);
        }
        let ci = PointedCI::new(degrees.clone(), equations)?;
        if !ci.tangent_space().singular {
            return Ok(RandomInstance { ci, singular: false, attempts: attempt });
        }
        last = Some(ci);
    }
    Ok(RandomInstance { ci: last.expect("at least one attempt"), singular: true, attempts: attempts.max(1) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::enumerate_families;
    use crate::families::{Filter, SearchBox};
    use crate::poly::Monomial;
    use rand::Rng;

    fn t(d: &[u32]) -> DegreeTuple {
        DegreeTuple::new(d.to_vec()).unwrap()
    }

    /// Polynomial in z1..z5 over GF(101) from `(coeff, exponents)`.
    fn p5(terms: &[(u64, [u32; 5])]) -> MultiPoly<PrimeField> {
        MultiPoly::from_terms(
            PrimeField::new(101).unwrap(),
            standard_vars(5),
            terms.iter().map(|(c, e)| (Monomial::new(e.to_vec()), *c)),
        )
        .unwrap()
    }

    fn z(i: usize) -> [u32; 5] {
        let mut e = [0; 5];
        e[i - 1] = 1;
        e
    }

    fn zz(i: usize, d: u32) -> [u32; 5] {
        let mut e = [0; 5];
        e[i - 1] = d;
        e
    }

    #[test]
    fn index_set_cases() {
        let i = index_set(&t(&[2, 2]));
        assert_eq!(i.excluded, [(2, 2), (1, 2)]);
        assert_eq!(i.pairs, vec![(1, 1), (2, 1)]);
        let i = index_set(&t(&[2, 3]));
        assert_eq!(i.excluded, [(2, 3), (2, 2)]);
        assert_eq!(i.pairs, vec![(1, 1), (1, 2), (2, 1)]);
        assert_eq!(index_set(&t(&[2, 5, 5, 5, 7])).len(), 22);
    }

    #[test]
    fn index_set_counts() {
        for d in enumerate_families(&Filter::All, &SearchBox::ambient_up_to(26)).unwrap() {
            let i = index_set(&d);
            let (m, k) = (d.dimension() as usize, d.k());
            assert_eq!(i.len(), m + k - 2, "{d}");
            assert_eq!(i.higher().count(), m - 2, "{d}");
        }
    }

    #[test]
    fn tangent_space_examples() {
        let f = PrimeField::new(7).unwrap();
        let v = |n, i| MultiPoly::var(f, standard_vars(n), i);
        let ts = tangent_space(&[v(5, 3), v(5, 4)]).unwrap();
        assert_eq!((ts.codim, ts.basis.len(), ts.singular), (2, 3, false));
        for b in &ts.basis {
            assert_eq!((b[3], b[4]), (0, 0));
        }
        assert!(tangent_space(&[v(5, 0), v(5, 0)]).unwrap().singular);
        let ts = tangent_space(&[v(4, 0).add(&v(4, 1)), v(4, 1).add(&v(4, 2))]).unwrap();
        assert_eq!(ts.basis.len(), 2);
        assert!(!ts.singular);
    }

    fn example(f1: MultiPoly<PrimeField>, f2: MultiPoly<PrimeField>, degrees: &[u32]) -> PointedCI<PrimeField> {
        PointedCI::new(t(degrees), vec![f1, f2]).unwrap()
    }

    #[test]
    fn worked_instances() {
        let opts = RegularityOptions::default();
        let ci = example(p5(&[(1, z(4)), (1, zz(1, 2))]), p5(&[(1, z(5)), (1, zz(2, 2))]), &[2, 2]);
        let r = regularity_check(&ci, &p5(&[(1, z(3))]), &opts).unwrap();
        assert_eq!(r.verdict, Verdict::Regular);
        assert_eq!(r.trace, vec![1, 2, 3]);
        assert_eq!(r.sequence, vec!["l", "q(1,1)", "q(2,1)"]);

        let ci = example(p5(&[(1, z(4)), (1, zz(1, 2))]), p5(&[(1, z(5)), (1, zz(2, 3))]), &[2, 3]);
        let r = regularity_check(&ci, &p5(&[(1, z(1))]), &opts).unwrap();
        assert_eq!(r.verdict, Verdict::Irregular);
        assert_eq!(r.failing_prefix, Some(3));
        assert_eq!(r.sequence, vec!["l", "q(1,1)", "q(1,2)", "q(2,1)"]);

        let ci = example(p5(&[(1, z(4)), (1, zz(2, 2))]), p5(&[(1, z(5)), (1, zz(2, 3))]), &[2, 3]);
        let r = regularity_check(&ci, &p5(&[(1, z(1))]), &opts).unwrap();
        assert_eq!(r.verdict, Verdict::Regular);
        assert_eq!(r.trace, vec![1, 2, 3, 4]);
        assert_eq!(r.expected_codim, 4);
    }

    #[test]
    fn input_errors() {
        let ci = example(p5(&[(1, z(4)), (1, zz(1, 2))]), p5(&[(1, z(5)), (1, zz(2, 2))]), &[2, 2]);
        // z4 is the linear part of f1
        assert!(matches!(regularity_check(&ci, &p5(&[(1, z(4))]), &Default::default()), Err(Error::InvalidInput(_))));
        assert!(regularity_check(&ci, &p5(&[(1, zz(1, 2))]), &Default::default()).is_err());
        // constant term
        let bad = p5(&[(1, [0; 5]), (1, zz(1, 2))]);
        assert!(PointedCI::new(t(&[2, 2]), vec![bad, p5(&[(1, zz(2, 2))])]).is_err());
        // degree mismatch
        assert!(PointedCI::new(t(&[2, 3]), vec![p5(&[(1, zz(1, 2))]), p5(&[(1, zz(2, 2))])]).is_err());
    }

    #[test]
    fn singular_point_is_reported() {
        let ci = example(p5(&[(1, z(4)), (1, zz(1, 2))]), p5(&[(2, z(4)), (1, zz(2, 2))]), &[2, 2]);
        let r = regularity_check(&ci, &p5(&[(1, z(1))]), &Default::default()).unwrap();
        assert_eq!(r.verdict, Verdict::SingularAtPoint);
        assert!(r.trace.is_empty());
    }

    fn random_instance(degrees: &[u32], p: u64, seed: u64) -> PointedCI<PrimeField> {
        let r = random_complete_intersection(&t(degrees), PrimeField::new(p).unwrap(), seed, 10).unwrap();
        assert!(!r.singular);
        r.ci
    }

    fn random_form<R: Rng>(ci: &PointedCI<PrimeField>, rng: &mut R) -> MultiPoly<PrimeField> {
        let f = *ci.field();
        loop {
            let c: Vec<u64> = (0..ci.nvars()).map(|_| f.random_elem(rng)).collect();
            let l = MultiPoly::linear(f, ci.vars().to_vec(), &c).unwrap();
            let mut rows: Vec<_> = ci.linear_parts().iter().map(|q| q.linear_coefficients().unwrap()).collect();
            rows.push(c);
            if rank(&f, &rows, ci.nvars()) == ci.degrees().k() + 1 {
                return l;
            }
        }
    }

    /// Sparse instance over GF(3) in 5 variables with `q(1,1) = z4`,
    /// `q(2,1) = z5`, and `l` a random admissible coordinate.
    fn sparse_instance<R: Rng>(rng: &mut R) -> (PointedCI<PrimeField>, MultiPoly<PrimeField>) {
        let f = PrimeField::new(3).unwrap();
        let sparse = |d: u32, rng: &mut R| loop {
            let mut terms = vec![];
            for m in crate::poly::monomials_of_degree(5, d) {
                if m.exponents()[3] == 0 && m.exponents()[4] == 0 && rng.gen_ratio(1, 3) {
                    terms.push((m, f.random_elem(rng)));
                }
            }
            let p = MultiPoly::from_terms(f, standard_vars(5), terms).unwrap();
            if !p.is_zero() {
                return p;
            }
        };
        let z = |i| MultiPoly::var(f, standard_vars(5), i);
        let f1 = z(3).add(&sparse(2, rng));
        let f2 = z(4).add(&sparse(2, rng)).add(&sparse(3, rng));
        let ci = PointedCI::new(t(&[2, 3]), vec![f1, f2]).unwrap();
        let l = z(rng.gen_range(0..3));
        (ci, l)
    }

    #[test]
    fn reduced_mode_agrees_with_full_mode() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let full = RegularityOptions::default();
        let reduced = RegularityOptions { reduced: true, ..full.clone() };
        let mut seen = [0usize; 2];
        for round in 0..40 {
            let (ci, l) = if round % 2 == 0 {
                sparse_instance(&mut rng)
            } else {
                let ci = random_instance(&[2, 2], 5, round);
                let l = random_form(&ci, &mut rng);
                (ci, l)
            };
            let a = regularity_check(&ci, &l, &full).unwrap();
            let b = regularity_check(&ci, &l, &reduced).unwrap();
            assert_eq!(a.verdict, b.verdict, "round {round}");
            assert_eq!(a.trace.last(), b.trace.last());
            seen[(a.verdict == Verdict::Regular) as usize] += 1;
        }
        assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
        let ci = example(p5(&[(1, z(4)), (1, zz(1, 2))]), p5(&[(1, z(5)), (1, zz(2, 3))]), &[2, 3]);
        let r = regularity_check(&ci, &p5(&[(1, z(1))]), &reduced).unwrap();
        assert_eq!(r.verdict, Verdict::Irregular);
        assert_eq!(r.sequence, vec!["l", "q(1,1)", "q(2,1)", "q(1,2)"]);
        assert_eq!(r.failing_prefix, Some(4));
    }

    fn random_invertible<R: Rng>(n: usize, f: &PrimeField, rng: &mut R) -> Vec<Vec<u64>> {
        loop {
            let m: Vec<Vec<u64>> = (0..n).map(|_| (0..n).map(|_| f.random_elem(rng)).collect()).collect();
            if rank(f, &m, n) == n {
                return m;
            }
        }
    }

    #[test]
    fn verdict_is_invariant_under_coordinate_change() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for seed in 0..12 {
            let ci = random_instance(&[2, 3], 3, 100 + seed);
            let l = random_form(&ci, &mut rng);
            let before = regularity_check(&ci, &l, &Default::default()).unwrap();
            let a = random_invertible(ci.nvars(), ci.field(), &mut rng);
            let moved = ci.change_coordinates(&a).unwrap();
            let l2 = l.substitute_linear(&a).unwrap();
            let after = regularity_check(&moved, &l2, &Default::default()).unwrap();
            assert_eq!(before.verdict, after.verdict, "seed {seed}");
            assert_eq!(before.trace, after.trace);
        }
    }

    #[test]
    fn adding_tangent_annihilators_keeps_regularity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut regular = 0;
        for seed in 0..20 {
            let ci = random_instance(&[2, 3], 5, 200 + seed);
            let l = random_form(&ci, &mut rng);
            if regularity_check(&ci, &l, &Default::default()).unwrap().verdict != Verdict::Regular {
                continue;
            }
            regular += 1;
            let f = *ci.field();
            let mut shifted = l.clone();
            for q in ci.linear_parts() {
                shifted = shifted.add(&q.scale(&f.random_elem(&mut rng)));
            }
            let r = regularity_check(&ci, &shifted, &Default::default()).unwrap();
            assert_eq!(r.verdict, Verdict::Regular, "seed {seed}");
        }
        assert!(regular > 0);
    }

    #[test]
    fn random_instances_are_deterministic() {
        let f = PrimeField::new(101).unwrap();
        let a = random_complete_intersection(&t(&[2, 2]), f, 9, 3).unwrap();
        let b = random_complete_intersection(&t(&[2, 2]), f, 9, 3).unwrap();
        assert_eq!(a, b);
        for e in a.ci.equations() {
            assert!(e.homogeneous_part(0).is_zero());
        }
        assert_eq!(a.ci.equations()[1].total_degree(), Some(2));
    }

    #[test]
    fn tiny_fields_produce_singular_instances() {
        let f = PrimeField::new(2).unwrap();
        let singular = (0..200)
            .filter(|&s| random_complete_intersection(&t(&[2, 2]), f, s, DEFAULT_INDEPENDENCE_ATTEMPTS).unwrap().singular)
            .count();
        eprintln!("GF(2), degrees (2,2): {singular}/200 singular");
        assert!(singular > 0);
    }

    #[test]
    fn sampled_check_is_deterministic() {
        let ci = random_instance(&[2, 3], 101, 1);
        let a = sampled_regularity(&ci, DEFAULT_SAMPLES, 4, &Default::default()).unwrap();
        let b = sampled_regularity(&ci, DEFAULT_SAMPLES, 4, &Default::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples.len(), 8);
        assert_eq!(a.verdict, Verdict::Regular);
    }

    #[test]
    fn first_coordinate_form() {
        let ci = example(p5(&[(1, z(1)), (1, zz(2, 2))]), p5(&[(1, z(2)), (1, zz(3, 2))]), &[2, 2]);
        assert_eq!(first_admissible_coordinate(&ci).unwrap(), p5(&[(1, z(3))]));
    }

    #[test]
    fn json_roundtrip() {
        let ci = random_instance(&[2, 3], 101, 7);
        let json = ci.to_json();
        let text = serde_json::to_string(&json).unwrap();
        let back = PointedCIJson::parse(&text).unwrap();
        match AnyPointedCI::from_json(&back).unwrap() {
            AnyPointedCI::Prime(c, None) => assert_eq!(c, ci),
            other => panic!("unexpected {other:?}"),
        }
        assert!(PointedCIJson::parse(r#"{"degrees":[2,2],"field":"gf:5","equations":[],"extra":1}"#).is_err());
    }
}
