use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde_json::{json, Value};
use theta_forge::arith::{eta6_congruence, jacobi_formula, partition_congruence, partition_numbers, CongruenceVerdict, SquaresFormula};
use theta_forge::formal::{
    formal_identity_check, lattice_double_sum, literature_expansion, pentagonal_series, qq_power, theta_null_product,
    theta_null_series, FormalIdentity, LatticeFamily, LiteratureExpansion, ThetaNullSpec, Verdict,
};
use theta_forge::numeric::{case_seed, suite_cases, verify_case, CaseOutcome, IdentityCase, SampledCase, Suite};
use theta_forge::qseries::{GaussInt, QExp, QSeries};
use theta_forge::qtrig::{qtrig_cases, QTrigCase};
use theta_forge::Error;

use crate::report::{CaseRecord, Report, Status, TableRow};

fn elapsed_ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Series targets of the `expand` command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Lattice(LatticeFamily),
    Literature(LiteratureExpansion),
    ThetaNull(ThetaNullSpec),
    Partition,
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        use LatticeFamily::*;
        let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
        let bad = || format!("unknown target `{s}`");
        match kind {
            "partition" if arg.is_empty() => Ok(Target::Partition),
            "eta2" => match arg {
                "1" => Ok(Target::Lattice(C1_1)),
                "2" => Ok(Target::Lattice(C1_2)),
                "3" => Ok(Target::Lattice(C1_3)),
                "4" => Ok(Target::Lattice(C1_4)),
                _ => Err(bad()),
            },
            "eta6" => match arg {
                "1" => Ok(Target::Lattice(C2_1)),
                "2" => Ok(Target::Lattice(C2_2)),
                "3" => Ok(Target::Lattice(C2_3)),
                "4" => Ok(Target::Lattice(C2_4)),
                "5" => Ok(Target::Lattice(C3)),
                _ => Err(bad()),
            },
            "literature" => arg.parse().map(Target::Literature).map_err(|e: Error| e.to_string()),
            "theta-null" => parse_theta_null(arg).ok_or_else(bad).map(Target::ThetaNull),
            _ => Err(bad()),
        }
    }
}

/// `J`, `J'` (only `1'`), optionally followed by `@T` for `ϑ_J(Tτ)`.
fn parse_theta_null(arg: &str) -> Option<ThetaNullSpec> {
    let (head, scale) = match arg.split_once('@') {
        Some((h, t)) => (h, t.parse::<QExp>().ok()?),
        None => (arg, QExp::int(1)),
    };
    let derivative = head.chars().filter(|&c| c == '\'').count() as u32;
    let index: u8 = head.trim_end_matches('\'').parse().ok()?;
    let has_product = (1..=4).contains(&index) && derivative == u32::from(index == 1);
    (has_product && scale > QExp::ZERO).then(|| ThetaNullSpec::new(index, scale, derivative))
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Lattice(fam) => {
                let k = fam.eta_power();
                let i = LatticeFamily::ALL.iter().filter(|x| x.eta_power() == k).position(|x| x == fam).unwrap() + 1;
                write!(f, "eta{k}:{i}")
            }
            Target::Literature(l) => write!(f, "literature:{l}"),
            Target::ThetaNull(s) => {
                let primes = "'".repeat(s.derivative as usize);
                write!(f, "theta-null:{}{primes}@{}", s.index, s.tau_scale)
            }
            Target::Partition => f.write_str("partition"),
        }
    }
}

impl Target {
    fn sides(self, order: u32) -> Result<(QSeries, QSeries, &'static str), Error> {
        let n = QExp::int(order as i64);
        Ok(match self {
            Target::Lattice(fam) => (lattice_double_sum(fam, n)?, qq_power(fam.eta_power(), n)?, "(q;q)^k double sum"),
            Target::Literature(l) => (literature_expansion(l, n)?, qq_power(l.eta_power(), n)?, "(q;q)^k classical sum"),
            Target::ThetaNull(s) => (theta_null_series(s, n)?, theta_null_product(s, n)?, "theta null sum = product"),
            Target::Partition => {
                let top = QExp::int(order as i64 + 1);
                let p = partition_numbers(order as usize);
                let rec = QSeries::from_terms(
                    p.into_iter().enumerate().map(|(i, c)| (QExp::int(i as i64), GaussInt::real(c))),
                    Some(top),
                );
                (rec, pentagonal_series(top).invert()?, "recurrence p(n) = coefficients of 1/(q;q)")
            }
        })
    }

    /// Exponents shown in the table: every integer below `end` plus any
    /// fractional exponent carried by either side.
    fn rows(lhs: &QSeries, rhs: &QSeries, end: QExp) -> Result<Vec<TableRow>, Error> {
        let mut grid: BTreeSet<QExp> = (0..).map(QExp::int).take_while(|e| *e < end).collect();
        grid.extend(lhs.terms().chain(rhs.terms()).map(|(e, _)| e).filter(|e| *e < end));
        grid.into_iter()
            .map(|e| {
                let (a, b) = (lhs.coeff(e)?, rhs.coeff(e)?);
                Ok(TableRow { exponent: e.to_string(), matches: a == b, lhs: a.to_string(), rhs: b.to_string() })
            })
            .collect()
    }
}

pub fn expand(target: Target, order: u32) -> Report {
    let mut report = Report::new("expand", target.to_string());
    let t = Instant::now();
    // partitions are listed through q^order, series below q^order
    let end = if target == Target::Partition { QExp::int(order as i64 + 1) } else { QExp::int(order as i64) };
    let integral = !matches!(target, Target::ThetaNull(_));
    let params = json!({ "order": order });
    let record = match target.sides(order).and_then(|(l, r, formula)| Ok((Target::rows(&l, &r, end)?, Verdict::compare(&l, &r, None), formula))) {
        Ok((rows, v, formula)) => {
            let text = match v.first_discrepancy {
                Some(e) => format!("mismatch at q^{e}"),
                None if end == QExp::ZERO => "vacuous pass".to_string(),
                None if integral => format!("exact match through q^{}", end - QExp::int(1)),
                None => format!("exact match below q^{end}"),
            };
            report.table = rows;
            CaseRecord {
                id: target.to_string(),
                formula: formula.to_string(),
                parameters: params,
                verdict: Status::of(v.holds),
                detail: json!({ "verdict": text, "checked_below": v.checked_below.map(|e| e.to_string()),
                                "first_discrepancy": v.first_discrepancy.map(|e| e.to_string()) }),
                wall_ms: elapsed_ms(t),
            }
        }
        Err(e) => error_record(target.to_string(), "", params, e, t),
    };
    report.push(record);
    report
}

fn error_record(id: String, formula: &str, parameters: Value, e: Error, t: Instant) -> CaseRecord {
    CaseRecord {
        id,
        formula: formula.to_string(),
        parameters,
        verdict: Status::Error,
        detail: json!({ "error": e.to_string() }),
        wall_ms: elapsed_ms(t),
    }
}

/// Suites accepted by `verify`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum VerifySuite {
    Addition,
    SquaresLambert,
    Qtrig,
    Transforms,
    All,
}

impl VerifySuite {
    fn name(self) -> &'static str {
        match self {
            VerifySuite::Addition => "addition",
            VerifySuite::SquaresLambert => "squares-lambert",
            VerifySuite::Qtrig => "qtrig",
            VerifySuite::Transforms => "transforms",
            VerifySuite::All => "all",
        }
    }
}

fn outcome_record(out: CaseOutcome, parameters: Value, t: Instant) -> CaseRecord {
    let worst = out.worst_sample.map(|i| &out.details[i].assignment);
    let first_error = out.details.iter().find_map(|d| d.error.clone());
    let verdict = if out.errors > 0 { Status::Error } else { Status::of(out.pass) };
    let detail = json!({
        "samples": out.samples,
        "failures": out.failures,
        "errors": out.errors,
        "max_rel_log2": out.max_rel_log2,
        "threshold_log2": -(out.precision as f64) + theta_forge::numeric::TOLERANCE_SLACK as f64,
        "worst_sample": out.worst_sample,
        "worst_assignment": worst,
        "first_error": first_error,
    });
    CaseRecord { id: out.id, formula: out.formula.to_string(), parameters, verdict, detail, wall_ms: elapsed_ms(t) }
}

fn identity_params(case: &IdentityCase) -> Value {
    let d = &case.domain;
    match &d.fixed_tau {
        Some(list) => json!({ "tau": list, "real_vars": d.real_vars }),
        None => json!({ "tau_re": d.tau_re, "tau_im": d.tau_im, "real_vars": d.real_vars }),
    }
}

fn run_numeric(report: &mut Report, suite: Suite, samples: usize, prec: u32, seed: u64) {
    for (i, case) in suite_cases(suite).into_iter().enumerate() {
        let t = Instant::now();
        let out = verify_case(&case, case_seed(seed, i), samples, prec);
        report.push(outcome_record(out, identity_params(&case), t));
    }
}

fn run_qtrig(report: &mut Report, samples: usize, prec: u32, seed: u64) {
    let cases: Vec<QTrigCase> = qtrig_cases();
    for (i, case) in cases.iter().enumerate() {
        let t = Instant::now();
        let out = verify_case(case, case_seed(seed, i), case.sample_count(samples), prec);
        report.push(outcome_record(out, json!({ "q": case.q, "arity": case.arity() }), t));
    }
}

pub fn verify(suite: VerifySuite, samples: usize, prec: u32, seed: u64) -> Report {
    let mut report = Report::new("verify", suite.name());
    report.seed = Some(seed);
    report.precision = Some(prec);
    let numeric = |s| matches!(suite, VerifySuite::All) || suite.name() == Suite::name(s);
    for s in [Suite::Addition, Suite::SquaresLambert] {
        if numeric(s) {
            run_numeric(&mut report, s, samples, prec, seed);
        }
    }
    if matches!(suite, VerifySuite::Qtrig | VerifySuite::All) {
        run_qtrig(&mut report, samples, prec, seed);
    }
    if numeric(Suite::Transforms) {
        run_numeric(&mut report, Suite::Transforms, samples, prec, seed);
    }
    report
}

pub fn squares(which: SquaresFormula, max_n: u64) -> Report {
    let name = match which {
        SquaresFormula::R2 => "r2",
        SquaresFormula::R4 => "r4",
        SquaresFormula::R8 => "r8",
        SquaresFormula::R13 => "r13",
    };
    let mut report = Report::new("squares", name);
    let t = Instant::now();
    let brute = which.bruteforce_table(max_n as usize);
    let mut mismatch = None;
    let mut err = None;
    for n in 1..=max_n {
        match jacobi_formula(n as i64, which) {
            Ok(v) if v >= 0 && v as u64 == brute[n as usize] => {}
            Ok(v) => {
                mismatch = Some(json!({ "n": n, "formula": v, "bruteforce": brute[n as usize] }));
                break;
            }
            Err(e) => {
                err = Some(e);
                break;
            }
        }
    }
    let params = json!({ "l": name, "max_n": max_n });
    let formula = format!("{name}(n): divisor formula = brute-force count, 1 ≤ n ≤ max_n");
    let rec = match err {
        Some(e) => error_record(name.to_string(), &formula, params, e, t),
        None => CaseRecord {
            id: name.to_string(),
            formula,
            parameters: params,
            verdict: Status::of(mismatch.is_none()),
            detail: json!({ "checked": max_n, "first_mismatch": mismatch }),
            wall_ms: elapsed_ms(t),
        },
    };
    report.push(rec);
    report
}

fn congruence_record(id: &str, formula: &str, max_n: u64, v: Result<CongruenceVerdict, Error>, t: Instant) -> CaseRecord {
    let params = json!({ "max_n": max_n });
    match v {
        Ok(v) => CaseRecord {
            id: id.to_string(),
            formula: formula.to_string(),
            parameters: params,
            verdict: Status::of(v.holds),
            detail: json!({ "checked": v.checked, "first_failure": v.first_failure }),
            wall_ms: elapsed_ms(t),
        },
        Err(e) => error_record(id.to_string(), formula, params, e, t),
    }
}

pub fn congruence(max_n: u64) -> Report {
    let mut report = Report::new("congruence", "ramanujan-7");
    let t = Instant::now();
    report.push(congruence_record("partition-mod-7", "p(7n+5) ≡ 0 (mod 7)", max_n, Ok(partition_congruence(max_n)), t));
    let t = Instant::now();
    report.push(congruence_record("eta6-mod-49", "a(7n+5) ≡ 0 (mod 49), (q;q)^6 = Σ a(n)q^n", max_n, eta6_congruence(max_n), t));
    let t = Instant::now();
    let order = QExp::int(7 * max_n as i64 + 6);
    let id = "seventh-power-mod-7";
    let formula = "(q;q)^7 ≡ (q^7;q^7) (mod 7) coefficientwise";
    let params = json!({ "max_n": max_n, "order": order.to_string() });
    report.push(match formal_identity_check(FormalIdentity::SeventhPowerMod7, order) {
        Ok(v) => CaseRecord {
            id: id.to_string(),
            formula: formula.to_string(),
            parameters: params,
            verdict: Status::of(v.holds),
            detail: json!({ "checked_below": v.checked_below.map(|e| e.to_string()),
                            "first_discrepancy": v.first_discrepancy.map(|e| e.to_string()) }),
            wall_ms: elapsed_ms(t),
        },
        Err(e) => error_record(id.to_string(), formula, params, e, t),
    });
    report
}
