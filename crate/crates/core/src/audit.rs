//! Exact re-evaluation of the counting inequalities behind the regularity
//! theorem.
//!
//! Everything is integer or [`Rational`] arithmetic. Each check produces a
//! [`CheckRecord`] holding both sides of the inequality; [`audit_range`]
//! sweeps a `(k, M)` box in parallel and merges the records in canonical
//! order.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::arith::{binomial_i64, Rational};
use crate::error::{Error, Result};
use crate::families::{tuples_with, DegreeTuple};

/// Environment variable capping the number of worker threads of a sweep.
pub const THREADS_ENV: &str = "FANO_AUDIT_THREADS";

/// Reads [`THREADS_ENV`]. Unset or empty means no cap.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(s) if !s.trim().is_empty() => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(Error::input(format!("{THREADS_ENV} must be a positive integer, got {s:?}"))),
        },
        _ => Ok(None),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    OutOfHypothesis,
    Vacuous,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::OutOfHypothesis => "out-of-hypothesis",
            Verdict::Vacuous => "vacuous",
        }
    }
}

/// One evaluated inequality `lhs >= rhs`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub params: Value,
    pub lhs: Rational,
    pub rhs: Rational,
    pub verdict: Verdict,
    pub note: String,
    /// Whether the inequality itself holds, independent of the hypothesis label.
    #[serde(skip)]
    pub holds: bool,
}

impl CheckRecord {
    fn new(check: &str, params: Value, lhs: Rational, rhs: Rational, holds: bool, in_hypothesis: bool) -> Self {
        let verdict = match (in_hypothesis, holds) {
            (false, _) => Verdict::OutOfHypothesis,
            (true, true) => Verdict::Pass,
            (true, false) => Verdict::Fail,
        };
        CheckRecord { check: check.to_string(), params, lhs, rhs, verdict, note: String::new(), holds }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        let note = note.into();
        if !note.is_empty() {
            if !self.note.is_empty() {
                self.note.push_str("; ");
            }
            self.note.push_str(&note);
        }
        self
    }

    fn sort_key(&self) -> (u64, u64, String) {
        let get = |name: &str| self.params.get(name).and_then(Value::as_u64).unwrap_or(0);
        (get("k"), get("M"), self.check.clone())
    }
}

fn hypothesis(k: usize, m: u64) -> bool {
    m >= 3 * k as u64 + 4
}

fn q(n: i64) -> Rational {
    Rational::from(n)
}

// ---------------------------------------------------------------------------
// weight sequence

/// Degrees of the homogeneous parts of degree at least two, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSequence {
    tuple: DegreeTuple,
    m: Vec<u32>,
    k_d: BTreeMap<u32, usize>,
}

impl WeightSequence {
    pub fn tuple(&self) -> &DegreeTuple {
        &self.tuple
    }

    pub fn m(&self) -> &[u32] {
        &self.m
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    /// `#{l : d_l >= d}`; zero above the top degree.
    pub fn k_d(&self, d: u32) -> usize {
        self.k_d.get(&d).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<u32, usize> {
        &self.k_d
    }

    pub fn sum(&self) -> u64 {
        self.m.iter().map(|&x| x as u64).sum()
    }

    /// `sum_{i <= n} m_i`.
    pub fn prefix_sum(&self, n: usize) -> u64 {
        self.m[..n].iter().map(|&x| x as u64).sum()
    }
}

fn triangular_sum(t: &DegreeTuple) -> u64 {
    t.degrees().iter().map(|&d| d as u64 * (d as u64 + 1) / 2).sum::<u64>() - t.k() as u64
}

pub fn weight_sequence(t: &DegreeTuple) -> WeightSequence {
    let mut m: Vec<u32> = t.degrees().iter().flat_map(|&d| 2..=d).collect();
    m.sort_unstable();
    let k_d = (2..=t.top()).map(|d| (d, t.degrees().iter().filter(|&&x| x >= d).count())).collect();
    let w = WeightSequence { tuple: t.clone(), m, k_d };
    assert_eq!(w.len() as u64, t.dimension(), "weight count for {t}");
    assert_eq!(w.sum(), triangular_sum(t), "weight sum for {t}");
    w
}

// ---------------------------------------------------------------------------
// reduction constants

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionConstants {
    pub k: usize,
    #[serde(rename = "M")]
    pub m: u64,
    pub fiber_dim: u64,
    pub codim_target: u64,
}

pub fn reduction_constants(k: usize, m: u64) -> Result<ReductionConstants> {
    if k < 2 || m < 1 {
        return Err(Error::input(format!("need k >= 2 and M >= 1, got k = {k}, M = {m}")));
    }
    Ok(ReductionConstants { k, m, fiber_dim: 2 * m + k as u64, codim_target: 2 * m + 1 })
}

impl ReductionConstants {
    fn check_b(&self, b: u64) -> Result<()> {
        if self.m < 3 || b > self.m - 3 {
            return Err(Error::input(format!("span codimension b = {b} outside [0, M-3] for M = {}", self.m)));
        }
        Ok(())
    }

    /// Dimension of the Grassmannian of codimension-`b` subspaces of P^(M-2).
    pub fn grassmann_dim(&self, b: u64) -> Result<u64> {
        self.check_b(b)?;
        Ok(b * (self.m - 1 - b))
    }

    /// Dimension of the pulled-back quadrics at step `j`.
    pub fn wj_dim(&self, j: u64) -> Result<u64> {
        if j < 1 || self.m < 2 || j > self.m - 2 {
            return Err(Error::input(format!("step j = {j} outside [1, M-2] for M = {}", self.m)));
        }
        let n = self.m + 1 - j;
        Ok(n * (n - 1) / 2)
    }

    /// Dimension of the span of products of `deg` linear forms on the subspace.
    pub fn pencil_dim(&self, deg: u64, b: u64) -> Result<u64> {
        self.check_b(b)?;
        if deg < 1 {
            return Err(Error::input("pencil degree must be positive"));
        }
        Ok((self.m - b - 2) * deg + 1)
    }
}

// ---------------------------------------------------------------------------
// quadratic parts

/// `binomial(M-k+1, 2) >= 2M+1`, plus the chain `binomial(M-j+1, 2) >=
/// binomial(M-k+1, 2)` for `j = 1..=k`.
pub fn check_small_degree_codim(k: usize, m: u64) -> Result<[CheckRecord; 2]> {
    let rc = reduction_constants(k, m)?;
    let (ki, mi) = (k as i64, m as i64);
    let in_hyp = hypothesis(k, m);
    let params = json!({ "k": k, "M": m });
    let at_k = binomial_i64(mi - ki + 1, 2);
    let target = Rational::from(rc.codim_target as i64);
    let lhs = Rational::from(at_k.clone());
    let holds = lhs >= target;
    let mut main = CheckRecord::new("small-degree-codim", params.clone(), lhs, target, holds, in_hyp);
    if !in_hyp {
        main = main.with_note("outside M >= 3k+4; evaluated for information");
    }

    let chain: Vec<_> = (1..=ki).map(|j| binomial_i64(mi - j + 1, 2)).collect();
    let min = chain.iter().min().cloned().expect("k >= 2");
    let chain_holds = chain.iter().all(|c| *c >= at_k);
    let chain_rec = CheckRecord::new(
        "small-degree-chain",
        params,
        Rational::from(min),
        Rational::from(at_k),
        chain_holds,
        in_hyp,
    );
    Ok([main, chain_rec])
}

/// `g(b) = -b^2 + (M-5) b + M - 6`.
pub fn quadratic_margin(m: i64, b: i64) -> i64 {
    -b * b + (m - 5) * b + m - 6
}

/// `g(b) >= 0` on `[0, M-5]`, by concavity from the endpoints and again by
/// exhaustive evaluation; the factored form is compared at three points.
pub fn check_quadratic_margin(m: u64) -> CheckRecord {
    let mi = m as i64;
    let params = json!({ "M": m });
    if mi < 5 {
        return CheckRecord {
            check: "quadratic-margin".into(),
            params,
            lhs: Rational::zero(),
            rhs: Rational::zero(),
            verdict: Verdict::Vacuous,
            note: "empty range [0, M-5]".into(),
            holds: true,
        };
    }
    let hi = mi - 5;
    let g = |b| quadratic_margin(mi, b);
    let endpoints = g(0) >= 0 && g(hi) >= 0;
    let second_difference = g(2) - 2 * g(1) + g(0);
    let min = (0..=hi).map(g).min().expect("nonempty range");
    let exhaustive = min >= 0;
    let factored = [0, hi / 2, hi].iter().all(|&b| (b + 3) * (mi - 2 - b) - 2 * mi == g(b));
    let concave = second_difference == -2;
    let holds = endpoints && exhaustive && factored && concave;
    let mut rec = CheckRecord::new("quadratic-margin", params, q(min), q(0), holds, m >= 7)
        .with_note(format!("g(0) = {}, g(M-5) = {}", g(0), g(hi)));
    if endpoints != exhaustive {
        rec = rec.with_note("endpoint argument disagrees with exhaustive evaluation");
    }
    if !factored {
        rec = rec.with_note("factored form disagrees with expanded form");
    }
    if m < 7 {
        rec = rec.with_note("outside M >= 7");
    }
    rec
}

// ---------------------------------------------------------------------------
// square-sum optimization

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareSum {
    pub k: usize,
    pub m: u64,
    pub shift: u32,
    pub integer_min: u64,
    pub relaxation_bound: Rational,
    /// All minimizers, lexicographic.
    pub witnesses: Vec<DegreeTuple>,
}

impl SquareSum {
    pub fn holds(&self) -> bool {
        self.relaxation_bound <= self.integer_min as i64
    }

    pub fn record(&self) -> CheckRecord {
        let witnesses: Vec<&[u32]> = self.witnesses.iter().map(|t| t.degrees()).collect();
        let params = json!({ "k": self.k, "M": self.m, "shift": self.shift, "witnesses": witnesses });
        let lhs = Rational::from(self.integer_min as i64);
        let gap = &lhs - &self.relaxation_bound;
        CheckRecord::new(&format!("square-sum-shift-{}", self.shift), params, lhs, self.relaxation_bound.clone(), self.holds(), true)
            .with_note(format!("slack {gap}"))
    }
}

fn square_objective(t: &DegreeTuple, shift: u32) -> u64 {
    let d = t.degrees();
    let (last, rest) = d.split_last().expect("k >= 2");
    let top = *last as i64 - shift as i64;
    rest.iter().map(|&x| (x as u64).pow(2)).sum::<u64>() + (top * top) as u64
}

fn square_sum_over(tuples: &[DegreeTuple], k: usize, m: u64, shift: u32) -> Option<SquareSum> {
    let min = tuples.iter().map(|t| square_objective(t, shift)).min()?;
    let witnesses = tuples.iter().filter(|t| square_objective(t, shift) == min).cloned().collect();
    let s = m as i64 + k as i64 - shift as i64;
    Some(SquareSum { k, m, shift, integer_min: min, relaxation_bound: Rational::frac(s * s, k as i64), witnesses })
}

/// Minimum of `sum_{l<k} d_l^2 + (d_k - shift)^2` over valid tuples with
/// `sum d = M + k`, against `(M + k - shift)^2 / k`.
pub fn optimize_square_sum(k: usize, m: u64, shift: u32) -> Result<SquareSum> {
    if k < 2 {
        return Err(Error::input(format!("need k >= 2, got {k}")));
    }
    if shift != 2 && shift != 3 {
        return Err(Error::input(format!("shift must be 2 or 3, got {shift}")));
    }
    let tuples = tuples_with(k, m + k as u64, None);
    square_sum_over(&tuples, k, m, shift)
        .ok_or_else(|| Error::input(format!("no valid tuple with k = {k} and M = {m}")))
}

// ---------------------------------------------------------------------------
// tail cases

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailCase {
    pub b: u64,
    /// Lower bound for `sum_{i<=b} m_i + m_j` obtained by removing top degrees.
    pub bound: i64,
    /// `(bound - b)(M - b - 2)`.
    pub lhs: i64,
    /// `2M`.
    pub rhs: i64,
    pub printed_constant: i64,
    pub recomputed_constant: i64,
    /// `sum_{i<=b+1} m_i`, the smallest value over admissible `j`.
    pub sequence_min: i64,
}

impl TailCase {
    pub fn holds(&self) -> bool {
        self.lhs >= self.rhs
    }

    pub fn sequence_lhs(&self, m: u64) -> i64 {
        (self.sequence_min - self.b as i64) * (m as i64 - self.b as i64 - 2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailReport {
    pub tuple: DegreeTuple,
    pub m_sum: u64,
    /// `b = M-4` first, then `b = M-3`.
    pub cases: [TailCase; 2],
    pub in_hypothesis: bool,
}

pub fn check_tail_bounds(t: &DegreeTuple) -> Result<TailReport> {
    let m = t.dimension();
    if m < 4 {
        return Err(Error::input(format!("tail cases need M >= 4, got M = {m} for {t}")));
    }
    let w = weight_sequence(t);
    let sum = w.sum() as i64;
    let k = t.k() as i64;
    let dk = t.top() as i64;
    let lower: i64 = t.degrees()[..t.k() - 1].iter().map(|&d| d as i64 * (d as i64 + 1) / 2).sum();
    let mi = m as i64;

    let make = |b: i64, bound: i64, top_part: i64, printed: i64| TailCase {
        b: b as u64,
        bound,
        lhs: (bound - b) * (mi - b - 2),
        rhs: 2 * mi,
        printed_constant: printed,
        recomputed_constant: bound - lower - top_part,
        sequence_min: w.prefix_sum(b as usize + 1) as i64,
    };
    let four = make(mi - 4, sum - 2 * dk - (dk - 1), (dk - 3) * (dk - 2) / 2, 2 - k);
    let three = make(mi - 3, sum - 2 * dk, (dk - 2) * (dk - 1) / 2, 1 - k);
    Ok(TailReport { tuple: t.clone(), m_sum: w.sum(), cases: [four, three], in_hypothesis: hypothesis(t.k(), m) })
}

const TAIL_IDS: [&str; 2] = ["tail-M-4", "tail-M-3"];

fn tail_note(c: &TailCase, m: u64, k: usize) -> String {
    let mut parts = vec![format!(
        "constant printed {} (= {}-k), recomputed {} (= {}-k)",
        c.printed_constant,
        c.printed_constant + k as i64,
        c.recomputed_constant,
        c.recomputed_constant + k as i64
    )];
    if c.printed_constant != c.recomputed_constant {
        parts.push("constants differ".into());
    }
    if c.bound > c.sequence_min {
        parts.push(format!("bound {} exceeds the sequence minimum {}", c.bound, c.sequence_min));
    }
    parts.push(format!("sequence margin {}", c.sequence_lhs(m) - c.rhs));
    parts.join("; ")
}

impl TailReport {
    pub fn holds(&self) -> bool {
        self.cases.iter().all(TailCase::holds)
    }

    pub fn records(&self) -> Vec<CheckRecord> {
        let m = self.tuple.dimension();
        self.cases
            .iter()
            .zip(TAIL_IDS)
            .map(|(c, id)| {
                let params = json!({ "k": self.tuple.k(), "M": m, "b": c.b, "degrees": self.tuple.degrees() });
                CheckRecord::new(id, params, q(c.lhs), q(c.rhs), c.holds(), self.in_hypothesis)
                    .with_note(tail_note(c, m, self.tuple.k()))
            })
            .collect()
    }
}

/// Tail cases over many tuples with the same `(k, M)`, one record per case
/// carrying the worst tuple.
fn tail_summary(k: usize, m: u64, tuples: &[DegreeTuple]) -> Result<Vec<CheckRecord>> {
    let reports = tuples.iter().map(check_tail_bounds).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for (i, id) in TAIL_IDS.iter().enumerate() {
        let worst = reports.iter().min_by_key(|r| r.cases[i].lhs).expect("nonempty");
        let fails = reports.iter().filter(|r| !r.cases[i].holds()).count();
        let seq_worst = reports.iter().map(|r| r.cases[i].sequence_lhs(m) - r.cases[i].rhs).min().expect("nonempty");
        let over = reports.iter().filter(|r| r.cases[i].bound > r.cases[i].sequence_min).count();
        let c = &worst.cases[i];
        let constants: Vec<i64> = reports.iter().map(|r| r.cases[i].recomputed_constant).collect();
        let uniform = constants.iter().all(|&x| x == constants[0]);
        let params = json!({ "k": k, "M": m, "b": c.b, "tuples": reports.len(), "worst": worst.tuple.degrees() });
        let mut rec = CheckRecord::new(id, params, q(c.lhs), q(c.rhs), fails == 0, hypothesis(k, m)).with_note(format!(
            "constant printed {}, recomputed {}{}",
            c.printed_constant,
            c.recomputed_constant,
            if uniform { "" } else { " (varies by tuple)" }
        ));
        if c.printed_constant != c.recomputed_constant {
            rec = rec.with_note("constants differ");
        }
        if fails > 0 {
            rec = rec.with_note(format!("{fails} tuples fail"));
        }
        if over > 0 {
            rec = rec.with_note(format!("bound exceeds the sequence minimum for {over} tuples"));
        }
        out.push(rec.with_note(format!("worst sequence margin {seq_worst}")));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// thresholds

/// `[x^2/(2k) + x/2 - k - M + c] * 2` with `x = M-3+k`.
pub fn bracket_m4(k: i64, m: i64, c: i64) -> Rational {
    let x = m - 3 + k;
    (Rational::frac(x * x, 2 * k) + Rational::frac(x, 2) + (c - k - m)) * 2
}

/// `[y^2/(2k) + y/2 - k - M + c] * 1` with `y = M-2+k`.
pub fn bracket_m3(k: i64, m: i64, c: i64) -> Rational {
    let y = m - 2 + k;
    Rational::frac(y * y, 2 * k) + Rational::frac(y, 2) + (c - k - m)
}

/// Printed bracket constants.
pub const PRINTED_M4: i64 = 6;
pub const PRINTED_M3: i64 = 3;
/// The `b = M-3` bracket constant carried over from the printed tail bound.
pub const CARRIED_M3: i64 = 4;
/// Bracket constants carried over from the recomputed tail bounds.
pub const RECOMPUTED_M4: i64 = 2;
pub const RECOMPUTED_M3: i64 = 2;

/// `(M-3)^2 / M`.
pub fn threshold_c(m: i64) -> Rational {
    Rational::frac((m - 3) * (m - 3), m)
}

/// `(M-2)^2 / (3M-2)`.
pub fn threshold_d(m: i64) -> Rational {
    Rational::frac((m - 2) * (m - 2), 3 * m - 2)
}

/// Largest `k >= 1` with `pred(k)`, for a predicate that is true then false.
/// Zero when `pred(1)` fails.
pub fn largest_k(pred: impl Fn(i64) -> bool) -> i64 {
    if !pred(1) {
        return 0;
    }
    let (mut lo, mut hi) = (1i64, 2i64);
    while pred(hi) {
        lo = hi;
        hi *= 2;
        assert!(hi < 1 << 40, "predicate never fails");
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Largest admissible `k` for each variant of the two brackets at fixed `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdSweep {
    #[serde(rename = "M")]
    pub m: u64,
    pub m4_printed: i64,
    pub m4_recomputed: i64,
    pub m3_printed: i64,
    pub m3_carried: i64,
    pub m3_recomputed: i64,
    pub claimed_c: i64,
    pub claimed_d: i64,
}

pub fn threshold_sweep(m: u64) -> ThresholdSweep {
    let mi = m as i64;
    let two_m = Rational::from(2 * mi);
    let m4 = |c| largest_k(|k| bracket_m4(k, mi, c) >= two_m);
    let m3 = |c| largest_k(|k| bracket_m3(k, mi, c) >= two_m);
    let floor = |r: Rational| r.to_i64_floor();
    ThresholdSweep {
        m,
        m4_printed: m4(PRINTED_M4),
        m4_recomputed: m4(RECOMPUTED_M4),
        m3_printed: m3(PRINTED_M3),
        m3_carried: m3(CARRIED_M3),
        m3_recomputed: m3(RECOMPUTED_M3),
        claimed_c: floor(threshold_c(mi)).max(0),
        claimed_d: floor(threshold_d(mi)).max(0),
    }
}

trait FloorI64 {
    fn to_i64_floor(&self) -> i64;
}

impl FloorI64 for Rational {
    fn to_i64_floor(&self) -> i64 {
        Rational::from(self.floor()).to_i64().expect("small threshold")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdReport {
    pub k: usize,
    pub m: u64,
    pub in_hypothesis: bool,
    /// Predicates (A), (B), (C), (D) in that order.
    pub records: [CheckRecord; 4],
    pub sweep: ThresholdSweep,
}

impl ThresholdReport {
    pub fn all_hold(&self) -> bool {
        self.records.iter().all(|r| r.holds)
    }
}

fn compare(found: i64, claimed: i64) -> &'static str {
    if found == claimed {
        "agrees"
    } else {
        "differs"
    }
}

/// The two printed brackets (A), (B) and their claimed equivalents (C), (D),
/// with the independently derived thresholds as annotations.
pub fn check_threshold_equivalences(k: usize, m: u64) -> ThresholdReport {
    let (ki, mi) = (k as i64, m as i64);
    let in_hyp = hypothesis(k, m);
    let params = json!({ "k": k, "M": m });
    let two_m = Rational::from(2 * mi);
    let s = threshold_sweep(m);
    let kq = Rational::from(ki);

    let a = bracket_m4(ki, mi, PRINTED_M4);
    let a_rec = CheckRecord::new("threshold-A", params.clone(), a.clone(), two_m.clone(), a >= two_m, in_hyp);
    let a_re = bracket_m4(ki, mi, RECOMPUTED_M4) >= two_m;
    let a_rec = a_rec
        .with_note(format!("as printed holds for k <= {}", s.m4_printed))
        .with_note(format!("with recomputed constant holds for k <= {}{}", s.m4_recomputed, if a_re { "" } else { ", fails here" }));

    let b = bracket_m3(ki, mi, PRINTED_M3);
    let b_rec = CheckRecord::new("threshold-B", params.clone(), b.clone(), two_m.clone(), b >= two_m, in_hyp);
    let b_re = bracket_m3(ki, mi, RECOMPUTED_M3) >= two_m;
    let b_rec = b_rec
        .with_note(format!("as printed holds for k <= {}", s.m3_printed))
        .with_note(format!("with constant carried from the printed tail bound holds for k <= {}", s.m3_carried))
        .with_note(format!("with recomputed constant holds for k <= {}{}", s.m3_recomputed, if b_re { "" } else { ", fails here" }));

    let c = threshold_c(mi);
    let c_holds = kq <= c;
    let c_rec = CheckRecord::new("threshold-C", params.clone(), kq.clone(), c.clone(), c_holds, in_hyp)
        .with_note(format!(
            "claimed equivalent of (A): floor = {}, (A) as printed gives {} ({})",
            s.claimed_c,
            s.m4_printed,
            compare(s.m4_printed, s.claimed_c)
        ))
        .with_note(format!("margin {}", &c - &kq));

    let d = threshold_d(mi);
    let d_holds = kq <= d;
    let d_rec = CheckRecord::new("threshold-D", params, kq.clone(), d.clone(), d_holds, in_hyp)
        .with_note(format!(
            "claimed equivalent of (B): floor = {}, (B) as printed gives {} ({}), carried constant gives {} ({})",
            s.claimed_d,
            s.m3_printed,
            compare(s.m3_printed, s.claimed_d),
            s.m3_carried,
            compare(s.m3_carried, s.claimed_d)
        ))
        .with_note(format!("margin {}", &d - &kq));

    ThresholdReport { k, m, in_hypothesis: in_hyp, records: [a_rec, b_rec, c_rec, d_rec], sweep: s }
}

// ---------------------------------------------------------------------------
// sweeps

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditConfig {
    pub k_max: usize,
    pub m_max: u64,
    /// Tuple-level checks (tails, square sums) run for `k <= tail_k_max`, `M <= tail_m_max`.
    pub tail_k_max: usize,
    pub tail_m_max: u64,
    pub max_degree: Option<u32>,
    pub threads: Option<usize>,
    /// Work units (one per `(k, M)` pair or per `M`, one per tuple) before truncating.
    pub budget: Option<u64>,
}

impl AuditConfig {
    pub fn new(k_max: usize, m_max: u64) -> Self {
        AuditConfig { k_max, m_max, tail_k_max: 5, tail_m_max: 60, max_degree: None, threads: None, budget: None }
    }
}

/// Records in canonical `(k, M, check)` order. A range record comes first;
/// a `truncated` record comes last when the budget ran out.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub records: Vec<CheckRecord>,
    pub truncated: bool,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.verdict == Verdict::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.verdict == Verdict::Fail)
    }

    pub fn count(&self, verdict: Verdict) -> usize {
        self.records.iter().filter(|r| r.verdict == verdict).count()
    }

    /// Records whose note flags a difference between printed and derived forms.
    pub fn discrepancies(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.note.contains("differ") || r.note.contains("fails here"))
    }
}

impl Serialize for AuditReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.records.serialize(s)
    }
}

enum Job {
    Margin(u64),
    Pair(usize, u64),
    Tuples(usize, u64, Vec<DegreeTuple>),
}

impl Job {
    fn cost(&self) -> u64 {
        match self {
            Job::Tuples(_, _, t) => t.len() as u64,
            _ => 1,
        }
    }

    fn run(&self) -> Result<Vec<CheckRecord>> {
        Ok(match self {
            Job::Margin(m) => vec![check_quadratic_margin(*m)],
            Job::Pair(k, m) => {
                let mut out = check_small_degree_codim(*k, *m)?.to_vec();
                out.extend(check_threshold_equivalences(*k, *m).records);
                out
            }
            Job::Tuples(k, m, tuples) => {
                let mut out: Vec<CheckRecord> =
                    [2, 3].iter().filter_map(|&s| square_sum_over(tuples, *k, *m, s)).map(|s| s.record()).collect();
                out.extend(tail_summary(*k, *m, tuples)?);
                out
            }
        })
    }
}

/// Every check over `2 <= k <= k_max`, `3k+4 <= M <= m_max`.
pub fn audit_range(config: &AuditConfig) -> Result<AuditReport> {
    if config.k_max < 2 {
        return Err(Error::input(format!("k_max must be at least 2, got {}", config.k_max)));
    }
    let mut jobs = Vec::new();
    let mut margins = std::collections::BTreeSet::new();
    let mut empty_k = Vec::new();
    let mut pairs = 0u64;
    for k in 2..=config.k_max {
        let lo = 3 * k as u64 + 4;
        if lo > config.m_max {
            empty_k.push(k);
            continue;
        }
        for m in lo..=config.m_max {
            pairs += 1;
            margins.insert(m);
            jobs.push(Job::Pair(k, m));
            if k <= config.tail_k_max && m <= config.tail_m_max {
                let tuples = tuples_with(k, m + k as u64, config.max_degree);
                if !tuples.is_empty() {
                    jobs.push(Job::Tuples(k, m, tuples));
                }
            }
        }
    }
    jobs.extend(margins.into_iter().map(Job::Margin));

    let mut truncated = false;
    if let Some(budget) = config.budget {
        let mut spent = 0u64;
        let keep = jobs.iter().take_while(|j| {
            spent += j.cost();
            spent <= budget
        });
        let n = keep.count();
        truncated = n < jobs.len();
        jobs.truncate(n);
    }

    let run = || jobs.par_iter().map(Job::run).collect::<Result<Vec<_>>>();
    let results = match config.threads {
        Some(0) => return Err(Error::input("thread count must be positive")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::budget(format!("cannot start worker threads: {e}")))?
            .install(run)?,
        None => run()?,
    };
    let mut records: Vec<CheckRecord> = results.into_iter().flatten().collect();
    records.sort_by_cached_key(CheckRecord::sort_key);

    let mut range = CheckRecord {
        check: "range".into(),
        params: json!({ "k_max": config.k_max, "M_max": config.m_max, "pairs": pairs }),
        lhs: q(pairs as i64),
        rhs: q(1),
        verdict: if pairs > 0 { Verdict::Pass } else { Verdict::Vacuous },
        note: String::new(),
        holds: pairs > 0,
    };
    if !empty_k.is_empty() {
        let ks: Vec<String> = empty_k.iter().map(|k| k.to_string()).collect();
        range = range.with_note(format!("no M in [3k+4, {}] for k = {}", config.m_max, ks.join(",")));
    }
    records.insert(0, range);
    if truncated {
        records.push(CheckRecord {
            check: "truncated".into(),
            params: json!({ "budget": config.budget }),
            lhs: q(0),
            rhs: q(0),
            verdict: Verdict::Vacuous,
            note: "work budget exhausted; later checks were not evaluated".into(),
            holds: false,
        });
    }
    Ok(AuditReport { records, truncated })
}
