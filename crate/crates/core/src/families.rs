//! Degree tuples of index-one Fano complete intersections, the hypotheses of
//! the canonical-threshold theorems, and the certificates derived from them.
//!
//! A tuple `(d_1, ..., d_k)` with `k >= 2` and `2 <= d_1 <= ... <= d_k`
//! describes complete intersections of dimension `M = sum d_i - k` in the
//! projective space of dimension `sum d_i`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::Rational;
use crate::error::{Error, Result};

/// Attached to every certificate: conclusions hold for a generic member only.
pub const GENERICITY_CAVEAT: &str =
    "conclusions hold for a generic (regular) member of the family, not for every member";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DegreeTuple {
    degrees: Vec<u32>,
}

impl DegreeTuple {
    /// Builds a tuple, sorting the degrees into nondecreasing order.
    pub fn new(degrees: Vec<u32>) -> Result<Self> {
        Self::with_notice(degrees).map(|(t, _)| t)
    }

    /// Like [`DegreeTuple::new`], also returning a notice when the input had to be reordered.
    pub fn with_notice(mut degrees: Vec<u32>) -> Result<(Self, Option<String>)> {
        if degrees.len() < 2 {
            return Err(Error::input(format!("need at least two degrees, got {}", degrees.len())));
        }
        if let Some(d) = degrees.iter().find(|&&d| d < 2) {
            return Err(Error::input(format!("degrees must be at least 2, got {d}")));
        }
        let notice = if degrees.windows(2).any(|w| w[0] > w[1]) {
            let original = join(&degrees);
            degrees.sort_unstable();
            Some(format!("degrees ({original}) reordered to ({})", join(&degrees)))
        } else {
            None
        };
        let t = DegreeTuple { degrees };
        debug_assert_eq!(t.ambient(), t.dimension() + t.k() as u64);
        Ok((t, notice))
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn k(&self) -> usize {
        self.degrees.len()
    }

    pub fn ambient(&self) -> u64 {
        self.degrees.iter().map(|&d| d as u64).sum()
    }

    /// `M = sum d_i - k`.
    pub fn dimension(&self) -> u64 {
        self.ambient() - self.k() as u64
    }

    pub fn top(&self) -> u32 {
        self.degrees[self.k() - 1]
    }

    pub fn second(&self) -> u32 {
        self.degrees[self.k() - 2]
    }

    pub fn d_plus(&self) -> u32 {
        if self.second() == self.top() {
            self.top()
        } else {
            self.top() - 1
        }
    }

    /// `max{1, 3/4 * d_k/(d_k - 1) * d+/(d+ - 1)}`.
    pub fn hypertangent_ratio(&self) -> Rational {
        hypertangent_ratio_of(self.top(), self.d_plus())
    }
}

fn join(d: &[u32]) -> String {
    d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for DegreeTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", join(&self.degrees))
    }
}

impl FromStr for DegreeTuple {
    type Err = Error;

    /// Comma-separated degrees, optionally parenthesized.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let degrees = inner
            .split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|_| Error::input(format!("bad degree {x:?}"))))
            .collect::<Result<Vec<_>>>()?;
        DegreeTuple::new(degrees)
    }
}

impl Serialize for DegreeTuple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.degrees.serialize(s)
    }
}

pub fn fano_dimension(degrees: &[u32]) -> Result<u64> {
    Ok(DegreeTuple::new(degrees.to_vec())?.dimension())
}

pub fn d_plus(degrees: &[u32]) -> Result<u32> {
    Ok(DegreeTuple::new(degrees.to_vec())?.d_plus())
}

pub fn hypertangent_ratio(degrees: &[u32]) -> Result<Rational> {
    Ok(DegreeTuple::new(degrees.to_vec())?.hypertangent_ratio())
}

/// The ratio as a function of the top degree and `d+` alone.
pub fn hypertangent_ratio_of(top: u32, d_plus: u32) -> Rational {
    assert!(top >= 2 && d_plus >= 2, "degrees below 2");
    let product = hypertangent_product(top, d_plus);
    product.max(Rational::one())
}

/// The unclamped product `3/4 * d_k/(d_k - 1) * d+/(d+ - 1)`.
pub fn hypertangent_product(top: u32, d_plus: u32) -> Rational {
    let (a, b) = (top as i64, d_plus as i64);
    Rational::frac(3 * a * b, 4 * (a - 1) * (b - 1))
}

/// Largest dimension `M` for which `ratio < (M + 1)/M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DimensionCap {
    Unbounded,
    AtMost(u64),
}

impl fmt::Display for DimensionCap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimensionCap::Unbounded => f.write_str("unbounded"),
            DimensionCap::AtMost(m) => write!(f, "{m}"),
        }
    }
}

/// For `ratio = 1 + 1/c` the cap is the largest integer `M < c`; a ratio of
/// exactly 1 never fails and gives no cap.
pub fn max_m_for_bound(ratio: &Rational) -> Result<DimensionCap> {
    if *ratio < 1 {
        return Err(Error::input(format!("ratio {ratio} is below 1")));
    }
    if *ratio == 1 {
        return Ok(DimensionCap::Unbounded);
    }
    let c = (ratio - &Rational::one()).recip().expect("ratio above 1");
    let cap = c.ceil() - 1;
    let cap = u64::try_from(cap).map_err(|_| Error::input("cap exceeds 64 bits"))?;
    Ok(DimensionCap::AtMost(cap))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Case {
    I,
    II,
    III,
}

impl Case {
    pub const ALL: [Case; 3] = [Case::I, Case::II, Case::III];

    pub fn as_str(&self) -> &'static str {
        match self {
            Case::I => "i",
            Case::II => "ii",
            Case::III => "iii",
        }
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "i" => Ok(Case::I),
            "ii" => Ok(Case::II),
            "iii" => Ok(Case::III),
            _ => Err(Error::input(format!("unknown case {s:?}, expected i, ii or iii"))),
        }
    }
}

/// Which of the three degree conditions holds; they are mutually exclusive.
///
/// (i) `d_k = d_{k-1} = 7`, `M <= 47`; (ii) `d_k = 7`, `d_{k-1} <= 6`,
/// `M <= 19`; (iii) `k = 2`, `d = (6, 6)`, `M = 10`.
pub fn degree_case(t: &DegreeTuple) -> Option<Case> {
    let m = t.dimension();
    if t.top() == 7 && t.second() == 7 && m <= 47 {
        Some(Case::I)
    } else if t.top() == 7 && t.second() <= 6 && m <= 19 {
        Some(Case::II)
    } else if t.k() == 2 && t.degrees() == [6, 6] && m == 10 {
        Some(Case::III)
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Theorem {
    /// `M >= 4k + 1`, `d_k >= 8`: ct = 1.
    T3,
    /// `M >= 4k + 1` and a degree case: ct > M/(M + 1).
    T4,
    /// `M >= 3k + 4`, `d_k >= 8`: ct = 1.
    T5,
    /// `M >= 3k + 4` and a degree case: ct > M/(M + 1).
    T6,
}

impl Theorem {
    pub fn as_str(&self) -> &'static str {
        match self {
            Theorem::T3 => "t3",
            Theorem::T4 => "t4",
            Theorem::T5 => "t5",
            Theorem::T6 => "t6",
        }
    }

    fn has_cases(&self) -> bool {
        matches!(self, Theorem::T4 | Theorem::T6)
    }

    fn dimension_bound(&self, k: u64) -> u64 {
        match self {
            Theorem::T3 | Theorem::T4 => 4 * k + 1,
            Theorem::T5 | Theorem::T6 => 3 * k + 4,
        }
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "t3" => Ok(Theorem::T3),
            "t4" => Ok(Theorem::T4),
            "t5" => Ok(Theorem::T5),
            "t6" => Ok(Theorem::T6),
            _ => Err(Error::input(format!("unknown theorem {s:?}"))),
        }
    }
}

/// Hypothesis flags of the four theorems for one tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Applicability {
    pub t3: bool,
    pub t4: Option<Case>,
    pub t5: bool,
    pub t6: Option<Case>,
}

impl Applicability {
    pub fn of(t: &DegreeTuple) -> Self {
        let k = t.k() as u64;
        let m = t.dimension();
        let high = t.top() >= 8;
        let case = degree_case(t);
        Applicability {
            t3: m >= Theorem::T3.dimension_bound(k) && high,
            t4: case.filter(|_| m >= Theorem::T4.dimension_bound(k)),
            t5: m >= Theorem::T5.dimension_bound(k) && high,
            t6: case.filter(|_| m >= Theorem::T6.dimension_bound(k)),
        }
    }

    pub fn applies(&self, theorem: Theorem) -> bool {
        match theorem {
            Theorem::T3 => self.t3,
            Theorem::T4 => self.t4.is_some(),
            Theorem::T5 => self.t5,
            Theorem::T6 => self.t6.is_some(),
        }
    }

    pub fn case(&self, theorem: Theorem) -> Option<Case> {
        match theorem {
            Theorem::T4 => self.t4,
            Theorem::T6 => self.t6,
            _ => None,
        }
    }
}

fn case_str(c: Option<Case>) -> &'static str {
    c.map_or("none", |c| c.as_str())
}

impl Serialize for Applicability {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Applicability", 4)?;
        st.serialize_field("t3", &self.t3)?;
        st.serialize_field("t4", case_str(self.t4))?;
        st.serialize_field("t5", &self.t5)?;
        st.serialize_field("t6", case_str(self.t6))?;
        st.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CtConclusion {
    /// ct = 1.
    EqualsOne,
    /// ct > M/(M + 1).
    ExceedsMOverMPlusOne,
    None,
}

impl CtConclusion {
    pub fn as_str(&self) -> &'static str {
        match self {
            CtConclusion::EqualsOne => "eq1",
            CtConclusion::ExceedsMOverMPlusOne => "gt_M_over_M+1",
            CtConclusion::None => "none",
        }
    }
}

impl Serialize for CtConclusion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Everything the theorems let us conclude about a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyCertificate {
    pub tuple: DegreeTuple,
    pub theorems: Applicability,
    pub ct: CtConclusion,
    pub hypertangent_ratio: Rational,
    /// Existence of a Kähler-Einstein metric on a generic member.
    pub ke_metric: bool,
    /// Usable as a factor of a birationally superrigid direct product.
    pub direct_factor: bool,
}

pub fn theorem_applicability(t: &DegreeTuple) -> FamilyCertificate {
    let theorems = Applicability::of(t);
    let ct = if theorems.t3 || theorems.t5 {
        CtConclusion::EqualsOne
    } else if theorems.t4.is_some() || theorems.t6.is_some() {
        CtConclusion::ExceedsMOverMPlusOne
    } else {
        CtConclusion::None
    };
    FamilyCertificate {
        tuple: t.clone(),
        theorems,
        ct,
        hypertangent_ratio: t.hypertangent_ratio(),
        ke_metric: ct != CtConclusion::None,
        direct_factor: ct == CtConclusion::EqualsOne,
    }
}

fn yes_unknown(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "unknown"
    }
}

impl FamilyCertificate {
    pub const CSV_HEADER: [&'static str; 13] = [
        "degrees",
        "k",
        "M",
        "ambient",
        "t3",
        "t4",
        "t5",
        "t6",
        "ct",
        "hypertangent_ratio",
        "ke_metric",
        "direct_factor",
        "genericity_caveat",
    ];

    pub fn csv_record(&self) -> Vec<String> {
        vec![
            join(self.tuple.degrees()),
            self.tuple.k().to_string(),
            self.tuple.dimension().to_string(),
            self.tuple.ambient().to_string(),
            self.theorems.t3.to_string(),
            case_str(self.theorems.t4).to_string(),
            self.theorems.t5.to_string(),
            case_str(self.theorems.t6).to_string(),
            self.ct.as_str().to_string(),
            self.hypertangent_ratio.to_string(),
            yes_unknown(self.ke_metric).to_string(),
            yes_unknown(self.direct_factor).to_string(),
            GENERICITY_CAVEAT.to_string(),
        ]
    }
}

impl Serialize for FamilyCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FamilyCertificate", 10)?;
        st.serialize_field("degrees", &self.tuple)?;
        st.serialize_field("k", &self.tuple.k())?;
        st.serialize_field("M", &self.tuple.dimension())?;
        st.serialize_field("ambient", &self.tuple.ambient())?;
        st.serialize_field("theorems", &self.theorems)?;
        st.serialize_field("ct", &self.ct)?;
        st.serialize_field("hypertangent_ratio", &self.hypertangent_ratio)?;
        st.serialize_field("ke_metric", yes_unknown(self.ke_metric))?;
        st.serialize_field("direct_factor", yes_unknown(self.direct_factor))?;
        st.serialize_field("genericity_caveat", GENERICITY_CAVEAT)?;
        st.end()
    }
}

/// A theorem, optionally narrowed to one degree case.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TheoremSelector {
    pub theorem: Theorem,
    pub case: Option<Case>,
}

impl TheoremSelector {
    pub fn holds(&self, a: &Applicability) -> bool {
        match self.case {
            None => a.applies(self.theorem),
            Some(c) => a.case(self.theorem) == Some(c),
        }
    }
}

impl FromStr for TheoremSelector {
    type Err = Error;

    /// `t3`, `t5`, `t4`, `t6`, or `t4:<case>`, `t6:<case>`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, case) = match s.split_once(':') {
            Some((n, c)) => (n, Some(c.parse::<Case>()?)),
            None => (s, None),
        };
        let theorem: Theorem = name.parse()?;
        if case.is_some() && !theorem.has_cases() {
            return Err(Error::input(format!("{name} has no degree cases")));
        }
        Ok(TheoremSelector { theorem, case })
    }
}

impl fmt::Display for TheoremSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.case {
            None => f.write_str(self.theorem.as_str()),
            Some(c) => write!(f, "{}:{}", self.theorem.as_str(), c.as_str()),
        }
    }
}

/// Predicate over certificates.
///
/// Grammar: comma-separated terms, all of which must hold. A term is
/// `all`, `ke`, `df` (direct factor), `none` (no theorem applies), a
/// theorem selector (`t5`, `t6:ii`, ...), `!term`, or `A-not-B` for two
/// selectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Filter {
    All,
    Theorem(TheoremSelector),
    KeMetric,
    DirectFactor,
    NoTheorem,
    Not(Box<Filter>),
    And(Vec<Filter>),
}

impl Filter {
    pub fn matches(&self, c: &FamilyCertificate) -> bool {
        match self {
            Filter::All => true,
            Filter::Theorem(sel) => sel.holds(&c.theorems),
            Filter::KeMetric => c.ke_metric,
            Filter::DirectFactor => c.direct_factor,
            Filter::NoTheorem => {
                [Theorem::T3, Theorem::T4, Theorem::T5, Theorem::T6].iter().all(|t| !c.theorems.applies(*t))
            }
            Filter::Not(f) => !f.matches(c),
            Filter::And(fs) => fs.iter().all(|f| f.matches(c)),
        }
    }

    pub fn difference(strong: TheoremSelector, weak: TheoremSelector) -> Self {
        Filter::And(vec![Filter::Theorem(strong), Filter::Not(Box::new(Filter::Theorem(weak)))])
    }

    fn parse_term(s: &str) -> Result<Self> {
        if let Some(rest) = s.strip_prefix('!') {
            return Ok(Filter::Not(Box::new(Self::parse_term(rest)?)));
        }
        if let Some((a, b)) = s.split_once("-not-") {
            return Ok(Self::difference(a.parse()?, b.parse()?));
        }
        match s {
            "all" => Ok(Filter::All),
            "ke" => Ok(Filter::KeMetric),
            "df" => Ok(Filter::DirectFactor),
            "none" => Ok(Filter::NoTheorem),
            _ => s.parse().map(Filter::Theorem).map_err(|_| Error::input(format!("unknown filter term {s:?}"))),
        }
    }
}

impl FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let terms: Vec<&str> = s.split(',').map(str::trim).collect();
        if terms.iter().any(|t| t.is_empty()) {
            return Err(Error::input("empty filter term"));
        }
        let mut parsed = terms.into_iter().map(Filter::parse_term).collect::<Result<Vec<_>>>()?;
        Ok(if parsed.len() == 1 { parsed.pop().unwrap() } else { Filter::And(parsed) })
    }
}

/// Finite search region for enumeration. `ambient` is `sum d_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBox {
    pub k_min: usize,
    pub k_max: Option<usize>,
    pub ambient_min: u64,
    pub ambient_max: Option<u64>,
    pub max_degree: Option<u32>,
}

impl Default for SearchBox {
    fn default() -> Self {
        SearchBox { k_min: 2, k_max: None, ambient_min: 0, ambient_max: None, max_degree: None }
    }
}

impl SearchBox {
    pub fn ambient(n: u64) -> Self {
        SearchBox { ambient_min: n, ambient_max: Some(n), ..Self::default() }
    }

    pub fn ambient_up_to(n: u64) -> Self {
        SearchBox { ambient_max: Some(n), ..Self::default() }
    }

    pub fn with_k(self, k: usize) -> Self {
        SearchBox { k_min: k, k_max: Some(k), ..self }
    }

    /// Inclusive ambient and k ranges; fails when the box is infinite.
    fn bounds(&self) -> Result<(u64, u64, usize, usize)> {
        let amb_max = match (self.ambient_max, self.k_max, self.max_degree) {
            (Some(a), _, _) => a,
            (None, Some(k), Some(d)) => k as u64 * d as u64,
            _ => return Err(Error::input("search box is unbounded: give an ambient cap, or both k and degree caps")),
        };
        let k_min = self.k_min.max(2);
        let k_max = self.k_max.unwrap_or((amb_max / 2) as usize).min((amb_max / 2) as usize);
        Ok((self.ambient_min, amb_max, k_min, k_max))
    }
}

/// All tuples in the box accepted by `filter`, sorted lexicographically.
pub fn enumerate_families(filter: &Filter, search: &SearchBox) -> Result<Vec<DegreeTuple>> {
    let (amb_min, amb_max, k_min, k_max) = search.bounds()?;
    let cap = search.max_degree.map_or(amb_max, |d| d as u64);
    let mut found = BTreeSet::new();
    for k in k_min..=k_max {
        let mut current = Vec::with_capacity(k);
        collect(k, amb_min, amb_max, 2, cap, &mut current, &mut |d| {
            let t = DegreeTuple { degrees: d.to_vec() };
            if filter.matches(&theorem_applicability(&t)) {
                found.insert(t);
            }
        });
    }
    Ok(found.into_iter().collect())
}

/// Every valid tuple with `k` degrees summing to `ambient`, in lexicographic
/// order, optionally capped at `max_degree`.
pub fn tuples_with(k: usize, ambient: u64, max_degree: Option<u32>) -> Vec<DegreeTuple> {
    let mut out = Vec::new();
    if k < 2 {
        return out;
    }
    let cap = max_degree.map_or(ambient, |d| d as u64);
    let mut current = Vec::with_capacity(k);
    collect(k, ambient, ambient, 2, cap, &mut current, &mut |d| out.push(DegreeTuple { degrees: d.to_vec() }));
    out
}

/// Nondecreasing sequences of length `k` with entries in `[lo, cap]` and
/// sum in `[sum_min, sum_max]`.
fn collect(k: usize, sum_min: u64, sum_max: u64, lo: u64, cap: u64, current: &mut Vec<u32>, out: &mut impl FnMut(&[u32])) {
    let used: u64 = current.iter().map(|&d| d as u64).sum();
    let left = k - current.len();
    if left == 0 {
        if used >= sum_min {
            out(current);
        }
        return;
    }
    let mut d = lo;
    // remaining entries are at least d each
    while d <= cap && used + d * left as u64 <= sum_max {
        current.push(d as u32);
        collect(k, sum_min, sum_max, d, cap, current, out);
        current.pop();
        d += 1;
    }
}

/// Tuples for which `strong` holds and `weak` does not.
pub fn new_families_vs(strong: TheoremSelector, weak: TheoremSelector, search: &SearchBox) -> Result<Vec<DegreeTuple>> {
    enumerate_families(&Filter::difference(strong, weak), search)
}

/// Families in the 24-dimensional projective space gained by case (ii) of
/// the weaker dimension bound over the stronger one.
pub fn remark1() -> Vec<DegreeTuple> {
    let strong = TheoremSelector { theorem: Theorem::T6, case: Some(Case::II) };
    let weak = TheoremSelector { theorem: Theorem::T4, case: None };
    new_families_vs(strong, weak, &SearchBox::ambient(24)).expect("bounded box")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(d: &[u32]) -> DegreeTuple {
        DegreeTuple::new(d.to_vec()).unwrap()
    }

    fn sel(s: &str) -> TheoremSelector {
        s.parse().unwrap()
    }

    #[test]
    fn construction() {
        assert_eq!(fano_dimension(&[6, 6]).unwrap(), 10);
        assert_eq!(fano_dimension(&[2, 5, 5, 5, 7]).unwrap(), 19);
        assert_eq!(fano_dimension(&[2, 2]).unwrap(), 2);
        assert_eq!(t(&[2, 5, 5, 5, 7]).ambient(), 24);
        assert!(matches!(DegreeTuple::new(vec![5]), Err(Error::InvalidInput(_))));
        assert!(matches!(DegreeTuple::new(vec![1, 3]), Err(Error::InvalidInput(_))));
        let (s, notice) = DegreeTuple::with_notice(vec![7, 2, 5]).unwrap();
        assert_eq!(s.degrees(), &[2, 5, 7]);
        assert!(notice.unwrap().contains("reordered"));
        assert!(DegreeTuple::with_notice(vec![2, 5, 7]).unwrap().1.is_none());
        assert_eq!("(2, 3)".parse::<DegreeTuple>().unwrap(), t(&[2, 3]));
    }

    #[test]
    fn d_plus_branches() {
        assert_eq!(d_plus(&[2, 7, 7]).unwrap(), 7);
        assert_eq!(d_plus(&[2, 6, 7]).unwrap(), 6);
        assert_eq!(d_plus(&[8, 8]).unwrap(), 8);
    }

    #[test]
    fn ratio_values() {
        assert_eq!(hypertangent_ratio(&[7, 7]).unwrap(), Rational::frac(49, 48));
        assert_eq!(hypertangent_ratio(&[2, 6, 7]).unwrap(), Rational::frac(21, 20));
        assert_eq!(hypertangent_product(8, 7), Rational::one());
        assert_eq!(hypertangent_ratio(&[2, 7, 8]).unwrap(), Rational::one());
        assert_eq!(hypertangent_ratio(&[6, 6]).unwrap(), Rational::frac(27, 25));
    }

    /// Ratio is 1 exactly from degree 8 on, and the product hits 1 only at (8, 7).
    #[test]
    fn ratio_threshold_scan() {
        for top in 3..=100u32 {
            for dp in [top, top - 1] {
                if dp < 2 {
                    continue;
                }
                let r = hypertangent_ratio_of(top, dp);
                assert_eq!(r <= Rational::one(), top >= 8, "({top}, {dp})");
                // cross-multiplied integer form of the product against 1
                let lhs = 3 * top as u64 * dp as u64;
                let rhs = 4 * (top as u64 - 1) * (dp as u64 - 1);
                assert_eq!(hypertangent_product(top, dp) == Rational::one(), lhs == rhs);
                assert_eq!(lhs == rhs, (top, dp) == (8, 7));
            }
        }
    }

    #[test]
    fn caps() {
        assert_eq!(max_m_for_bound(&Rational::frac(49, 48)).unwrap(), DimensionCap::AtMost(47));
        assert_eq!(max_m_for_bound(&Rational::frac(21, 20)).unwrap(), DimensionCap::AtMost(19));
        assert_eq!(max_m_for_bound(&Rational::frac(27, 25)).unwrap(), DimensionCap::AtMost(12));
        assert_eq!(max_m_for_bound(&Rational::one()).unwrap(), DimensionCap::Unbounded);
        assert!(max_m_for_bound(&Rational::frac(3, 4)).is_err());
    }

    /// Brute force: the cap is the last M with ratio < (M+1)/M.
    #[test]
    fn caps_match_direct_search() {
        for (num, den) in [(49, 48), (21, 20), (27, 25), (5, 4), (7, 3), (101, 100), (13, 12)] {
            let r = Rational::frac(num, den);
            let brute = (1..10_000i64).filter(|&m| r < Rational::frac(m + 1, m)).max().unwrap_or(0);
            assert_eq!(max_m_for_bound(&r).unwrap(), DimensionCap::AtMost(brute as u64), "{r}");
        }
    }

    #[test]
    fn caps_reproduce_case_bounds() {
        let cap = |d: &[u32]| max_m_for_bound(&t(d).hypertangent_ratio()).unwrap();
        assert_eq!(cap(&[2, 7, 7]), DimensionCap::AtMost(47));
        assert_eq!(cap(&[2, 5, 7]), DimensionCap::AtMost(19));
        match cap(&[6, 6]) {
            DimensionCap::AtMost(m) => assert!(10 <= m),
            DimensionCap::Unbounded => panic!("bounded"),
        }
    }

    #[test]
    fn certificate_examples() {
        let c = theorem_applicability(&t(&[4, 8]));
        assert!(c.theorems.t3 && c.theorems.t5);
        assert_eq!(c.ct, CtConclusion::EqualsOne);
        assert!(c.ke_metric && c.direct_factor);

        let c = theorem_applicability(&t(&[2, 5, 5, 5, 7]));
        assert_eq!(c.theorems.t6, Some(Case::II));
        assert_eq!(c.theorems.t4, None);
        assert_eq!(c.ct, CtConclusion::ExceedsMOverMPlusOne);
        assert!(c.ke_metric && !c.direct_factor);

        let c = theorem_applicability(&t(&[2, 2]));
        assert_eq!(c.ct, CtConclusion::None);
        assert!(!c.ke_metric && !c.direct_factor);

        let c = theorem_applicability(&t(&[6, 6]));
        assert_eq!((c.theorems.t4, c.theorems.t6), (Some(Case::III), Some(Case::III)));
    }

    #[test]
    fn certificate_json_shape() {
        let c = theorem_applicability(&t(&[2, 5, 5, 5, 7]));
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["degrees"], serde_json::json!([2, 5, 5, 5, 7]));
        assert_eq!(v["k"], 5);
        assert_eq!(v["M"], 19);
        assert_eq!(v["ambient"], 24);
        assert_eq!(v["theorems"], serde_json::json!({"t3": false, "t4": "none", "t5": false, "t6": "ii"}));
        assert_eq!(v["ct"], "gt_M_over_M+1");
        assert_eq!(v["hypertangent_ratio"], "21/20");
        assert_eq!(v["ke_metric"], "yes");
        assert_eq!(v["direct_factor"], "unknown");
        assert_eq!(c.csv_record().len(), FamilyCertificate::CSV_HEADER.len());
    }

    #[test]
    fn enumeration_examples() {
        let two = enumerate_families(&Filter::All, &SearchBox::ambient(12).with_k(2)).unwrap();
        assert_eq!(two, vec![t(&[2, 10]), t(&[3, 9]), t(&[4, 8]), t(&[5, 7]), t(&[6, 6])]);
        let small = enumerate_families(&Filter::All, &SearchBox::ambient_up_to(5).with_k(2)).unwrap();
        assert_eq!(small, vec![t(&[2, 2]), t(&[2, 3])]);
        assert!(enumerate_families(&Filter::All, &SearchBox::default()).is_err());
    }

    const PUBLISHED: [[u32; 5]; 7] = [
        [2, 5, 5, 5, 7],
        [2, 4, 5, 6, 7],
        [2, 3, 6, 6, 7],
        [3, 3, 5, 6, 7],
        [3, 4, 5, 5, 7],
        [3, 4, 4, 6, 7],
        [4, 4, 4, 5, 7],
    ];

    #[test]
    fn case_two_gains_in_p24() {
        let mut expected: Vec<DegreeTuple> = PUBLISHED.iter().map(|d| t(d)).collect();
        expected.sort();
        assert_eq!(remark1(), expected);
        let via_filter = enumerate_families(&"t6:ii-not-t4".parse().unwrap(), &SearchBox::ambient(24)).unwrap();
        assert_eq!(via_filter, expected);
    }

    /// Without the case restriction, case (i) contributes four more tuples at M = 19.
    #[test]
    fn weaker_bound_gains_in_p24() {
        let all = new_families_vs(sel("t6"), sel("t4"), &SearchBox::ambient(24)).unwrap();
        assert_eq!(all.len(), 11);
        let case_one: Vec<_> = all.iter().filter(|d| degree_case(d) == Some(Case::I)).cloned().collect();
        assert_eq!(case_one, vec![t(&[2, 2, 6, 7, 7]), t(&[2, 3, 5, 7, 7]), t(&[2, 4, 4, 7, 7]), t(&[3, 3, 4, 7, 7])]);
        assert!(all.iter().all(|d| d.k() == 5 && d.dimension() == 19));
    }

    /// Case (ii) gains also occur for k = 4, M = 16 in the 20-dimensional space.
    #[test]
    fn case_two_gains_everywhere() {
        let search = SearchBox { max_degree: Some(7), ..SearchBox::ambient_up_to(80) };
        let all = new_families_vs(sel("t6:ii"), sel("t4"), &search).unwrap();
        let p20: Vec<_> = all.iter().filter(|d| d.ambient() == 20).cloned().collect();
        assert_eq!(p20, vec![t(&[2, 5, 6, 7]), t(&[3, 4, 6, 7]), t(&[3, 5, 5, 7]), t(&[4, 4, 5, 7])]);
        assert_eq!(all.len(), 11);
    }

    #[test]
    fn comparisons() {
        assert!(new_families_vs(sel("t6:iii"), sel("t4:iii"), &SearchBox::ambient_up_to(40)).unwrap().is_empty());
        let k2 = SearchBox::ambient_up_to(12).with_k(2);
        assert!(new_families_vs(sel("t5"), sel("t3"), &k2).unwrap().is_empty());
        assert_eq!(new_families_vs(sel("t3"), sel("t5"), &k2).unwrap(), vec![t(&[2, 9]), t(&[3, 8])]);
    }

    #[test]
    fn filter_grammar() {
        assert!("t6-not-t4".parse::<Filter>().is_ok());
        assert!("t6:ii,!t4".parse::<Filter>().is_ok());
        assert!("ke,df".parse::<Filter>().is_ok());
        assert!("t3:i".parse::<Filter>().is_err());
        assert!("t7".parse::<Filter>().is_err());
        assert!("t5,".parse::<Filter>().is_err());
        let f: Filter = "t6:ii,!t4".parse().unwrap();
        assert_eq!(enumerate_families(&f, &SearchBox::ambient(24)).unwrap().len(), 7);
    }

    /// Number of partitions of `n` into exactly `k` parts, each in `[lo, hi]`.
    fn partitions(n: i64, k: i64, lo: i64, hi: i64) -> u64 {
        if k == 0 {
            return u64::from(n == 0);
        }
        if lo > hi || n < k * lo {
            return 0;
        }
        // either no part equals lo, or remove one part equal to lo
        partitions(n, k, lo + 1, hi) + partitions(n - lo, k - 1, lo, hi)
    }

    #[test]
    fn enumeration_is_complete() {
        for ambient in 4..=30u64 {
            for k in 2..=(ambient / 2) as usize {
                let got = enumerate_families(&Filter::All, &SearchBox::ambient(ambient).with_k(k)).unwrap();
                assert_eq!(got.len() as u64, partitions(ambient as i64, k as i64, 2, ambient as i64));
            }
        }
        let capped = SearchBox { k_min: 3, k_max: Some(3), max_degree: Some(5), ..SearchBox::default() };
        let got = enumerate_families(&Filter::All, &capped).unwrap();
        let expected: u64 = (6..=15).map(|n| partitions(n, 3, 2, 5)).sum();
        assert_eq!(got.len() as u64, expected);
    }

    #[test]
    fn structural_properties() {
        for k in 3..=50u64 {
            assert!(Theorem::T3.dimension_bound(k) >= Theorem::T5.dimension_bound(k));
        }
        assert!(Theorem::T3.dimension_bound(2) < Theorem::T5.dimension_bound(2));
        let all = enumerate_families(&Filter::All, &SearchBox::ambient_up_to(40)).unwrap();
        for d in &all {
            let c = theorem_applicability(d);
            assert_eq!(d.ambient(), d.dimension() + d.k() as u64);
            assert!(!(c.theorems.t5 && c.theorems.t6.is_some()));
            assert_eq!(c.ct == CtConclusion::EqualsOne, c.theorems.t3 || c.theorems.t5);
            assert_eq!(
                c.ct == CtConclusion::ExceedsMOverMPlusOne,
                (c.theorems.t4.is_some() || c.theorems.t6.is_some()) && !(c.theorems.t3 || c.theorems.t5)
            );
            assert_eq!(c.ke_metric, c.ct != CtConclusion::None);
            assert_eq!(c.direct_factor, c.ct == CtConclusion::EqualsOne);
            if d.k() >= 3 && c.theorems.t3 {
                assert!(c.theorems.t5);
            }
        }
        let sorted = all.windows(2).all(|w| w[0] < w[1]);
        assert!(sorted);
    }
}
