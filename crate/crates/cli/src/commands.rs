use std::fs;
use std::io::Write;

use groupoid_card::categorified::{verify_categorified, CategorifiedReport};
use groupoid_card::cycle_stats::{
    cll_rhs, expected_product_brute, expected_product_by_type, expected_total_cycles, verify_cll, write_csv,
    MomentMethod, MomentReport,
};
use groupoid_card::functor::{
    make_cycle_tuple_functor, make_fixed_point_functor, trivial_functor, validate_functor, verify_general_theorem,
    EquivariantFunctor, FunctorSpec, GeneralTheoremReport,
};
use groupoid_card::groupoid::perm_groupoid_skeleton;
use groupoid_card::scalar::{format_rational, integer, serde_rational};
use groupoid_card::{FiniteGroup, Limits, PVector, Rational, Scalar};
use serde::Serialize;
use thiserror::Error;

use crate::{
    Builtin, CategorifiedArgs, Command, ExactMethodArg, Format, LemmaArgs, MethodArg, MonteCarloArgs, PSelection,
    SkeletonArgs, StatsArgs, TheoremArgs,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] groupoid_card::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("cannot write JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
}

type Outcome = Result<bool, CliError>;

pub fn run(command: Command, limits: &Limits, out: &mut dyn Write) -> Outcome {
    match command {
        Command::VerifyLemma(a) => verify_lemma(a, limits, out),
        Command::VerifyCategorified(a) => verify_categorified_cmd(a, limits, out),
        Command::Skeleton(a) => skeleton(a, limits, out),
        Command::Stats(a) => stats(a, limits, out),
        Command::Montecarlo(a) => montecarlo(a, out),
        Command::TheoremGeneral(a) => theorem_general(a, limits, out),
    }
}

fn parse_p(text: &str, n: usize) -> Result<PVector, CliError> {
    let p = PVector::parse(text)?;
    if p.degree() != n {
        return Err(CliError::Usage(format!(
            "--p has {} entries but --n is {n}; give one entry per cycle length 1..=n",
            p.degree()
        )));
    }
    Ok(p)
}

impl PSelection {
    fn resolve(&self, n: usize) -> Result<Vec<PVector>, CliError> {
        match (&self.p, self.all_p) {
            (Some(text), _) => Ok(vec![parse_p(text, n)?]),
            (None, true) => Ok(PVector::all_bounded(n, self.max_entry, self.max_weight.unwrap_or(n))),
            (None, false) => Err(CliError::Usage("give either --p or --all-p".into())),
        }
    }

    fn is_sweep(&self) -> bool {
        self.p.is_none()
    }
}

fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

#[derive(Serialize)]
struct Sweep<'a, T> {
    n: usize,
    count: usize,
    passed: usize,
    all_passed: bool,
    reports: &'a [T],
}

fn sweep<'a, T>(n: usize, reports: &'a [T], passed: usize) -> Sweep<'a, T> {
    Sweep {
        n,
        count: reports.len(),
        passed,
        all_passed: passed == reports.len(),
        reports,
    }
}

fn verify_lemma(a: LemmaArgs, limits: &Limits, out: &mut dyn Write) -> Outcome {
    let method = match a.method {
        MethodArg::Brute => MomentMethod::Brute,
        MethodArg::CycleType => MomentMethod::CycleType,
        MethodArg::MonteCarlo => MomentMethod::MonteCarlo {
            samples: a.samples,
            seed: a.seed,
        },
    };
    let reports = a
        .select
        .resolve(a.n)?
        .iter()
        .map(|p| verify_cll(a.n, p, method, limits))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = reports.iter().filter(|r| r.passes(a.z_threshold)).count();
    match a.format {
        Format::Json if a.select.is_sweep() => json_line(out, &sweep(a.n, &reports, passed))?,
        Format::Json => json_line(out, &reports[0])?,
        Format::Csv => write_csv(&reports, &mut *out)?,
        Format::Text => {
            for r in &reports {
                writeln!(out, "{}  {}", moment_text(r), verdict(r.passes(a.z_threshold)))?;
            }
            if a.select.is_sweep() {
                writeln!(out, "{passed} of {} passed", reports.len())?;
            }
        }
    }
    Ok(passed == reports.len())
}

fn moment_text(r: &MomentReport) -> String {
    match (&r.lhs, r.estimate, r.standard_error, r.z_score) {
        (Some(lhs), ..) => format!(
            "n={} p={} E = {}, closed form {}",
            r.n,
            r.p,
            format_rational(lhs),
            format_rational(&r.rhs)
        ),
        (None, Some(est), se, z) => format!(
            "n={} p={} estimate {est:.6} (se {:.6}), closed form {}, z {}",
            r.n,
            r.p,
            se.unwrap_or(0.0),
            format_rational(&r.rhs),
            z.map_or("n/a".into(), |z| format!("{z:+.3}"))
        ),
        _ => format!("n={} p={}", r.n, r.p),
    }
}

fn verify_categorified_cmd(a: CategorifiedArgs, limits: &Limits, out: &mut dyn Write) -> Outcome {
    let reports = a
        .select
        .resolve(a.n)?
        .iter()
        .map(|p| verify_categorified(a.n, p, limits))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = reports.iter().filter(|r| r.passed()).count();
    match a.format {
        Format::Json if a.select.is_sweep() => json_line(out, &sweep(a.n, &reports, passed))?,
        Format::Json => json_line(out, &reports[0])?,
        Format::Csv => categorified_csv(&reports, out)?,
        Format::Text => {
            for r in &reports {
                writeln!(
                    out,
                    "n={} p={}: Q//S{} = {}, target {}, |C| = {}  {}",
                    r.n,
                    r.p,
                    r.n,
                    r.lhs_skeleton,
                    r.rhs_skeleton,
                    format_rational(&r.lhs_card),
                    verdict(r.passed())
                )?;
            }
            if a.select.is_sweep() {
                writeln!(out, "{passed} of {} passed", reports.len())?;
            }
        }
    }
    Ok(passed == reports.len())
}

fn categorified_csv(reports: &[CategorifiedReport], out: &mut dyn Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "n",
        "p",
        "q_size",
        "lhs_card",
        "rhs_card",
        "outdegree_card",
        "expectation",
        "equivalent",
        "bridge_check",
        "passed",
    ])?;
    for r in reports {
        let p: Vec<String> = r.p.entries().iter().map(|e| e.to_string()).collect();
        w.write_record([
            r.n.to_string(),
            p.join(","),
            r.q_size.to_string(),
            format_rational(&r.lhs_card),
            format_rational(&r.rhs_card),
            format_rational(&r.outdegree_card),
            format_rational(&r.expectation),
            r.equivalent.to_string(),
            r.bridge_check.to_string(),
            r.passed().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn skeleton(a: SkeletonArgs, limits: &Limits, out: &mut dyn Write) -> Outcome {
    #[derive(Serialize)]
    struct Report {
        n: i64,
        skeleton: groupoid_card::GroupoidSkeleton,
        #[serde(with = "serde_rational")]
        cardinality: Rational,
    }
    let sk = perm_groupoid_skeleton(a.n, limits)?;
    let cardinality = sk.cardinality_exact();
    // |Perm_n| is 1, or 0 for the empty groupoid at negative n
    let ok = cardinality == integer(u64::from(a.n >= 0));
    match a.format {
        Format::Json => json_line(
            out,
            &Report {
                n: a.n,
                skeleton: sk,
                cardinality,
            },
        )?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["label", "aut_order", "contribution"])?;
            for c in sk.components() {
                w.write_record([
                    c.label.as_ref().map(|l| l.to_string()).unwrap_or_default(),
                    c.aut_order.to_string(),
                    format_rational(&Rational::recip_of(&c.aut_order)),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "Perm_{} = {}", a.n, sk)?;
            writeln!(out, "cardinality {}", format_rational(&cardinality))?;
        }
    }
    Ok(ok)
}

#[derive(Serialize)]
struct StatsRow {
    k: usize,
    /// `E(c_k)`.
    #[serde(with = "serde_rational")]
    mean: Rational,
    #[serde(with = "serde_rational")]
    mean_closed_form: Rational,
    /// `E(c_k (c_k - 1))`.
    #[serde(with = "serde_rational")]
    second_factorial_moment: Rational,
    #[serde(with = "serde_rational")]
    second_closed_form: Rational,
    /// The same moment of a Poisson law with mean `1/k`.
    #[serde(with = "serde_rational")]
    poisson_second: Rational,
    equal: bool,
}

fn stats(a: StatsArgs, limits: &Limits, out: &mut dyn Write) -> Outcome {
    #[derive(Serialize)]
    struct Report {
        n: usize,
        method: &'static str,
        rows: Vec<StatsRow>,
        #[serde(with = "serde_rational")]
        expected_cycles: Rational,
        #[serde(with = "serde_rational")]
        harmonic_number: Rational,
        all_equal: bool,
    }
    if a.n == 0 {
        return Err(CliError::Usage("stats needs --n >= 1".into()));
    }
    let moment = |p: &PVector| -> Result<Rational, CliError> {
        Ok(match a.method {
            ExactMethodArg::Brute => expected_product_brute(a.n, p, limits)?,
            ExactMethodArg::CycleType => expected_product_by_type(a.n, p, limits)?,
        })
    };
    let mut rows = Vec::with_capacity(a.n);
    let mut sum = Rational::from_integer(0.into());
    for k in 1..=a.n {
        let first = PVector::unit(a.n, k, 1)?;
        let second = PVector::unit(a.n, k, 2)?;
        let mean = moment(&first)?;
        let second_moment = moment(&second)?;
        let mean_closed_form: Rational = cll_rhs(a.n, &first);
        let second_closed_form: Rational = cll_rhs(a.n, &second);
        sum += &mean;
        rows.push(StatsRow {
            k,
            equal: mean == mean_closed_form && second_moment == second_closed_form,
            poisson_second: &mean_closed_form * &mean_closed_form,
            mean,
            mean_closed_form,
            second_factorial_moment: second_moment,
            second_closed_form,
        });
    }
    let harmonic_number = expected_total_cycles(a.n)?;
    let all_equal = rows.iter().all(|r| r.equal) && sum == harmonic_number;
    match a.format {
        Format::Json => json_line(
            out,
            &Report {
                n: a.n,
                method: match a.method {
                    ExactMethodArg::Brute => "brute",
                    ExactMethodArg::CycleType => "cycle_type",
                },
                rows,
                expected_cycles: sum,
                harmonic_number,
                all_equal,
            },
        )?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record([
                "k",
                "mean",
                "mean_closed_form",
                "second_factorial_moment",
                "second_closed_form",
                "poisson_second",
                "equal",
            ])?;
            for r in &rows {
                w.write_record([
                    r.k.to_string(),
                    format_rational(&r.mean),
                    format_rational(&r.mean_closed_form),
                    format_rational(&r.second_factorial_moment),
                    format_rational(&r.second_closed_form),
                    format_rational(&r.poisson_second),
                    r.equal.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(
                out,
                "{:>3}  {:>10}  {:>14}  {:>10}",
                "k", "E(c_k)", "E(c_k(c_k-1))", "Poisson"
            )?;
            for r in &rows {
                writeln!(
                    out,
                    "{:>3}  {:>10}  {:>14}  {:>10}  {}",
                    r.k,
                    format_rational(&r.mean),
                    format_rational(&r.second_factorial_moment),
                    format_rational(&r.poisson_second),
                    verdict(r.equal)
                )?;
            }
            writeln!(
                out,
                "expected cycles {} (H_{} = {})",
                format_rational(&sum),
                a.n,
                format_rational(&harmonic_number)
            )?;
        }
    }
    Ok(all_equal)
}

/// `k=K` or `k=K,p=P` (also bare `K`).
fn parse_p_one(text: &str, n: usize) -> Result<PVector, CliError> {
    let bad = || CliError::Usage(format!("--p-one expects k=K or k=K,p=P, got {text:?}"));
    let (mut k, mut p) = (None, 1);
    for part in text.split(',') {
        let part = part.trim();
        let (key, value) = part.split_once('=').unwrap_or(("k", part));
        let value: usize = value.trim().parse().map_err(|_| bad())?;
        match key.trim() {
            "k" => k = Some(value),
            "p" => p = value,
            _ => return Err(bad()),
        }
    }
    Ok(PVector::unit(n, k.ok_or_else(bad)?, p)?)
}

fn montecarlo(a: MonteCarloArgs, out: &mut dyn Write) -> Outcome {
    let p = match (&a.p, &a.p_one) {
        (Some(text), _) => parse_p(text, a.n)?,
        (None, Some(text)) => parse_p_one(text, a.n)?,
        (None, None) => return Err(CliError::Usage("give --p or --p-one".into())),
    };
    let report = groupoid_card::cycle_stats::monte_carlo_moment(a.n, &p, a.samples, a.seed)?;
    let ok = report.passes(a.z_threshold);
    match a.format {
        Format::Json => json_line(out, &report)?,
        Format::Csv => write_csv(std::slice::from_ref(&report), &mut *out)?,
        Format::Text => writeln!(out, "{}  {}", moment_text(&report), verdict(ok))?,
    }
    Ok(ok)
}

fn theorem_general(a: TheoremArgs, limits: &Limits, out: &mut dyn Write) -> Outcome {
    let need_n = || a.n.ok_or_else(|| CliError::Usage("this functor needs --n".into()));
    let functor: EquivariantFunctor = match (a.builtin, &a.functor) {
        (_, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let spec: FunctorSpec =
                serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            let f = spec.build(limits)?;
            let validation = validate_functor(&f, limits);
            if let Some(v) = &validation.violation {
                json_line(out, &validation)?;
                return Err(CliError::Usage(format!("invalid functor: {v}")));
            }
            f
        }
        (Some(Builtin::FixedPoints), None) => make_fixed_point_functor(need_n()?, limits)?,
        (Some(Builtin::CycleTuples), None) => {
            let n = need_n()?;
            let text =
                a.p.as_deref()
                    .ok_or_else(|| CliError::Usage("cycle-tuples needs --p".into()))?;
            make_cycle_tuple_functor(n, &parse_p(text, n)?, limits)?
        }
        (Some(Builtin::Trivial), None) => {
            let group = match (&a.group, a.n) {
                (Some(name), _) => FiniteGroup::from_name(name)?,
                (None, Some(n)) => FiniteGroup::symmetric(n)?,
                (None, None) => return Err(CliError::Usage("trivial needs --group or --n".into())),
            };
            trivial_functor(&group)
        }
        (None, None) => return Err(CliError::Usage("give --builtin or --functor".into())),
    };
    let report = verify_general_theorem(&functor, limits)?;
    let ok = report.passed();
    match a.format {
        Format::Json => json_line(out, &report)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record([
                "group",
                "group_order",
                "total_objects",
                "expected_size",
                "elements_cardinality",
                "outdegree_cardinality",
                "orbits",
                "passed",
            ])?;
            w.write_record([
                report.group.clone(),
                report.group_order.to_string(),
                report.total_objects.to_string(),
                format_rational(&report.expected_size),
                format_rational(&report.elements_cardinality),
                format_rational(&report.outdegree_cardinality),
                report.orbits.len().to_string(),
                ok.to_string(),
            ])?;
            w.flush()?;
        }
        Format::Text => writeln!(out, "{}  {}", theorem_text(&report), verdict(ok))?,
    }
    Ok(ok)
}

fn theorem_text(r: &GeneralTheoremReport) -> String {
    format!(
        "{}: E(|F|) = {}, |int F| = {} ({} objects, {} orbits)",
        r.group,
        format_rational(&r.expected_size),
        format_rational(&r.elements_cardinality),
        r.total_objects,
        r.orbits.len()
    )
}
