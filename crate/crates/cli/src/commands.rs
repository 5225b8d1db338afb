use std::io::{Read, Write};

use fano_ci::audit::{audit_range, threads_from_env, AuditConfig, AuditReport, Verdict as CheckVerdict};
use fano_ci::dimension::{CodimMode, ExactBudget, OracleConfig};
use fano_ci::families::{enumerate_families, remark1, theorem_applicability, DegreeTuple, Filter, SearchBox};
use fano_ci::regularity::{
    first_admissible_coordinate, random_complete_intersection, regularity_check, sampled_regularity, AnyPointedCI, PointedCI, PointedCIJson,
    RegularityOptions, RegularityReport, SampledRegularity, Verdict, DEFAULT_INDEPENDENCE_ATTEMPTS, DEFAULT_SAMPLES,
};
use fano_ci::{Field, FieldSpec, MultiPoly, PrimeField, Rational};
use serde_json::json;

use crate::{AuditArgs, Cli, Command, Failure, Format, Mode, OracleArgs, RandomciArgs, RegcheckArgs};

type Out<'a> = &'a mut dyn Write;

pub fn run(cli: &Cli, out: Out) -> Result<u8, Failure> {
    match &cli.command {
        Command::Classify { degrees } => {
            let t = parse_degrees(degrees)?;
            write_families(out, cli.format, &[t])?;
            Ok(0)
        }
        Command::Enumerate { ambient, k, filter, max_degree } => {
            let filter: Filter = filter.parse()?;
            let mut search = SearchBox::ambient(*ambient);
            if let Some(k) = k {
                search = search.with_k(*k);
            }
            search.max_degree = *max_degree;
            let found = enumerate_families(&filter, &search)?;
            write_families(out, cli.format, &found)?;
            Ok(0)
        }
        Command::Remark1 => {
            write_families(out, cli.format, &remark1())?;
            Ok(0)
        }
        Command::Audit(args) => audit(out, cli.format, args),
        Command::Regcheck(args) => regcheck(out, cli.format, args),
        Command::Randomci(args) => randomci(out, cli.format, args),
    }
}

fn parse_degrees(s: &str) -> Result<DegreeTuple, Failure> {
    let degrees = s
        .trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .split(',')
        .map(|x| {
            x.trim().parse::<u32>().map_err(|_| Failure { code: 2, message: format!("bad degree {:?}", x.trim()) })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (t, notice) = DegreeTuple::with_notice(degrees)?;
    if let Some(n) = notice {
        eprintln!("note: {n}");
    }
    Ok(t)
}

fn write_json(out: Out, value: &impl serde::Serialize) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_families(out: Out, format: Format, tuples: &[DegreeTuple]) -> Result<(), Failure> {
    let certs: Vec<_> = tuples.iter().map(theorem_applicability).collect();
    match format {
        Format::Json => write_json(out, &certs),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(fano_ci::families::FamilyCertificate::CSV_HEADER)?;
            for c in &certs {
                w.write_record(c.csv_record())?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            for c in &certs {
                let th = &c.theorems;
                let case = |x: Option<fano_ci::families::Case>| x.map_or("none", |c| c.as_str());
                writeln!(
                    out,
                    "{}  k={} M={} ambient={}  t3={} t4={} t5={} t6={}  ct={}  ratio={}",
                    c.tuple,
                    c.tuple.k(),
                    c.tuple.dimension(),
                    c.tuple.ambient(),
                    th.t3,
                    case(th.t4),
                    th.t5,
                    case(th.t6),
                    c.ct.as_str(),
                    c.hypertangent_ratio
                )?;
            }
            Ok(())
        }
    }
}

fn audit(out: Out, format: Format, args: &AuditArgs) -> Result<u8, Failure> {
    let config = AuditConfig {
        k_max: args.k_max,
        m_max: args.m_max,
        tail_k_max: args.tail_k_max,
        tail_m_max: args.tail_m_max,
        max_degree: args.max_degree,
        threads: threads_from_env()?,
        budget: args.budget,
    };
    let report = audit_range(&config)?;
    match format {
        Format::Json => write_json(out, &report)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["check", "params", "lhs", "rhs", "verdict", "note"])?;
            for r in &report.records {
                w.write_record([
                    r.check.clone(),
                    r.params.to_string(),
                    r.lhs.to_string(),
                    r.rhs.to_string(),
                    r.verdict.as_str().to_string(),
                    r.note.clone(),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => write_audit_text(out, &config, &report)?,
    }
    Ok(if report.truncated {
        3
    } else if report.passed() {
        0
    } else {
        1
    })
}

fn write_audit_text(out: Out, config: &AuditConfig, report: &AuditReport) -> Result<(), Failure> {
    writeln!(out, "audit k <= {}, M <= {}", config.k_max, config.m_max)?;
    writeln!(
        out,
        "checks {}: pass {}, fail {}, out-of-hypothesis {}, vacuous {}",
        report.records.len(),
        report.count(CheckVerdict::Pass),
        report.count(CheckVerdict::Fail),
        report.count(CheckVerdict::OutOfHypothesis),
        report.count(CheckVerdict::Vacuous)
    )?;
    writeln!(out, "records with discrepancy annotations: {}", report.discrepancies().count())?;
    for r in report.records.iter().filter(|r| r.verdict != CheckVerdict::Pass) {
        writeln!(out, "{} {} {}: {} >= {} ({})", r.verdict.as_str(), r.check, r.params, r.lhs, r.rhs, r.note)?;
    }
    let result = if report.truncated {
        "truncated"
    } else if report.passed() {
        "pass"
    } else {
        "fail"
    };
    writeln!(out, "result: {result}")?;
    Ok(())
}

fn options(args: &OracleArgs) -> RegularityOptions {
    let mode = match args.mode {
        Mode::Exact => CodimMode::Exact(ExactBudget { unlimited: args.unlimited, ..ExactBudget::default() }),
        Mode::Probabilistic => {
            let mut cfg = OracleConfig { seed: args.seed, ..OracleConfig::default() };
            if let Some(t) = args.trials_per_slice {
                cfg.trials = t;
            }
            CodimMode::Probabilistic(cfg)
        }
    };
    RegularityOptions { mode, reduced: args.reduced }
}

enum Outcome {
    Single(RegularityReport),
    Sampled(SampledRegularity),
}

impl Outcome {
    fn verdict(&self) -> Verdict {
        match self {
            Outcome::Single(r) => r.verdict,
            Outcome::Sampled(s) => s.verdict,
        }
    }

    fn reports(&self) -> Vec<&RegularityReport> {
        match self {
            Outcome::Single(r) => vec![r],
            Outcome::Sampled(s) => s.samples.iter().collect(),
        }
    }
}

fn check_instance<K: Field>(
    ci: &PointedCI<K>,
    l: Option<&MultiPoly<K>>,
    samples: Option<usize>,
    seed: u64,
    opts: &RegularityOptions,
) -> fano_ci::Result<Outcome> {
    match (l, samples) {
        (Some(l), None) => regularity_check(ci, l, opts).map(Outcome::Single),
        (_, n) => sampled_regularity(ci, n.unwrap_or(DEFAULT_SAMPLES), seed, opts).map(Outcome::Sampled),
    }
}

fn read_input(path: &std::path::Path) -> Result<String, Failure> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| Failure { code: 2, message: format!("cannot read {}: {e}", path.display()) })?;
    }
    Ok(text)
}

fn regcheck(out: Out, format: Format, args: &RegcheckArgs) -> Result<u8, Failure> {
    let text = read_input(&args.input)?;
    let json = PointedCIJson::parse(&text)?;
    let opts = options(&args.oracle);
    let seed = args.oracle.seed;
    let outcome = match AnyPointedCI::from_json(&json)? {
        AnyPointedCI::Rational(ci, l) => check_instance(&ci, l.as_ref(), args.samples, seed, &opts)?,
        AnyPointedCI::Prime(ci, l) => check_instance(&ci, l.as_ref(), args.samples, seed, &opts)?,
    };
    match format {
        Format::Json => match &outcome {
            Outcome::Single(r) => write_json(out, r)?,
            Outcome::Sampled(s) => write_json(out, s)?,
        },
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["sample", "linear_form", "verdict", "failing_prefix", "trace"])?;
            for (i, r) in outcome.reports().iter().enumerate() {
                w.write_record([
                    (i + 1).to_string(),
                    r.linear_form.clone(),
                    r.verdict.as_str().to_string(),
                    r.failing_prefix.map_or(String::new(), |p| p.to_string()),
                    join(&r.trace),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            if let Outcome::Sampled(s) = &outcome {
                writeln!(out, "evidence: {} ({} linear forms)", s.evidence, s.samples.len())?;
            }
            for r in outcome.reports() {
                write!(out, "l = {}: {} trace [{}]", r.linear_form, r.verdict.as_str(), join(&r.trace))?;
                if let Some(p) = r.failing_prefix {
                    write!(out, " failing prefix {p}")?;
                }
                writeln!(out)?;
            }
            writeln!(out, "verdict: {}", outcome.verdict().as_str())?;
        }
    }
    Ok(if outcome.verdict() == Verdict::Regular { 0 } else { 1 })
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn randomci(out: Out, format: Format, args: &RandomciArgs) -> Result<u8, Failure> {
    let t = parse_degrees(&args.degrees)?;
    let field = match args.field.parse::<FieldSpec>()? {
        FieldSpec::Prime(p) => PrimeField::new(p)?,
        FieldSpec::Rational => {
            return Err(Failure { code: 2, message: "randomci needs a prime field gf:<p>".into() });
        }
    };
    let opts = options(&args.oracle);
    let seed = args.oracle.seed;
    let (mut regular, mut irregular, mut singular) = (0u64, 0u64, 0u64);
    let mut failing = Vec::new();
    for i in 0..args.trials {
        let s = seed.wrapping_add(i);
        let inst = random_complete_intersection(&t, field, s, DEFAULT_INDEPENDENCE_ATTEMPTS)?;
        if inst.singular {
            singular += 1;
            failing.push(s);
            continue;
        }
        let verdict = if args.first_coordinate {
            let l = first_admissible_coordinate(&inst.ci).expect("nonsingular instance");
            regularity_check(&inst.ci, &l, &opts)?.verdict
        } else {
            sampled_regularity(&inst.ci, args.samples, s, &opts)?.verdict
        };
        match verdict {
            Verdict::Regular => regular += 1,
            _ => {
                irregular += 1;
                failing.push(s);
            }
        }
    }
    let rate = if args.trials == 0 {
        Rational::zero()
    } else {
        Rational::frac(regular as i64, args.trials as i64)
    };
    let mode = match args.oracle.mode {
        Mode::Exact => "exact",
        Mode::Probabilistic => "probabilistic",
    };
    match format {
        Format::Json => write_json(
            out,
            &json!({
                "degrees": t,
                "field": field.spec().to_string(),
                "trials": args.trials,
                "seed": seed,
                "linear_forms": if args.first_coordinate { json!("first-coordinate") } else { json!(args.samples) },
                "mode": mode,
                "reduced": args.oracle.reduced,
                "evidence": if args.first_coordinate { "single-form" } else { "sampled" },
                "regular": regular,
                "irregular": irregular,
                "singular": singular,
                "pass_rate": rate.to_string(),
                "failing_seeds": failing,
            }),
        )?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["degrees", "field", "trials", "seed", "linear_forms", "regular", "irregular", "singular", "pass_rate"])?;
            w.write_record([
                t.to_string(),
                field.spec().to_string(),
                args.trials.to_string(),
                seed.to_string(),
                if args.first_coordinate { "first-coordinate".to_string() } else { args.samples.to_string() },
                regular.to_string(),
                irregular.to_string(),
                singular.to_string(),
                rate.to_string(),
            ])?;
            w.flush()?;
        }
        Format::Text => {
            let forms = if args.first_coordinate {
                "first admissible coordinate".to_string()
            } else {
                format!("{} random linear forms each (sampled evidence)", args.samples)
            };
            writeln!(out, "{} over {}: {} instances, {forms}", t, field.spec(), args.trials)?;
            writeln!(out, "regular {regular}, irregular {irregular}, singular {singular}, pass rate {rate}")?;
        }
    }
    Ok(0)
}
