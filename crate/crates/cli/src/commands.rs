//! One function per subcommand; each returns a report plus its exit code.
//!
//! Commands never print directly. They assemble a [`Report`] and leave
//! rendering and process exit to `main`, so the structured output stays a
//! single, ordered, machine-independent document.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;

use groupgeom::gcoeff::{g_verbal_check, relative_freeness_check, GTarget};
use groupgeom::geometry::{self, AlgebraicSet, EnumerationConfig, Equation, EquationSystem};
use groupgeom::group::{build_group, FiniteGroup, GroupSpec, Subgroup};
use groupgeom::radical::{self, Outcome, Verdict, Witness};
use groupgeom::words::{Word, WordContext};
use groupgeom::{Error, Result};

use crate::output::{fmt_tuple, Report};
use crate::{
    AnalyzeArgs, ClosureArgs, DecomposeArgs, GcheckArgs, GroupArgs, IdentitiesArgs, ScanArgs,
    SolveArgs, SystemArgs, EXIT_BUDGET, EXIT_INCONSISTENT, EXIT_OK,
};

/// A finished command: what to print and how to exit.
pub struct CmdOutcome {
    pub report: Report,
    pub exit: u8,
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

/// Builds the group from either source and keeps the label the user gave.
fn load_group(args: &GroupArgs) -> Result<(String, Arc<FiniteGroup>)> {
    if let Some(spec) = &args.group {
        let parsed: GroupSpec = spec.parse()?;
        return Ok((spec.clone(), Arc::new(build_group(&parsed)?)));
    }
    if let Some(path) = &args.table {
        let text = read_file(path)?;
        let group = FiniteGroup::parse_table(&text)?;
        return Ok((path.display().to_string(), Arc::new(group)));
    }
    Err(Error::InvalidArgument(
        "one of --group or --table is required".into(),
    ))
}

fn load_system(
    args: &SystemArgs,
    group: &Arc<FiniteGroup>,
    coefficients: bool,
) -> Result<EquationSystem> {
    if let Some(path) = &args.system {
        let text = read_file(path)?;
        return EquationSystem::parse(&text, Some(group));
    }
    let ctx = if coefficients {
        WordContext::with_constants(args.vars, Arc::clone(group))?
    } else {
        WordContext::free(args.vars)?
    };
    let mut equations = Vec::with_capacity(args.eq.len());
    for text in &args.eq {
        equations.push(parse_equation(&ctx, text)?);
    }
    EquationSystem::new(ctx, equations)
}

/// `w` or `lhs = rhs`; the word grammar itself never contains `=`.
fn parse_equation(ctx: &WordContext, text: &str) -> Result<Equation> {
    match text.split_once('=') {
        Some((lhs, rhs)) => Ok(Equation::new(
            Word::parse(ctx, lhs.trim())?,
            Word::parse(ctx, rhs.trim())?,
        )),
        None => Ok(Equation::from_word(Word::parse(ctx, text.trim())?)),
    }
}

fn eq_display(eq: &Equation) -> String {
    if eq.rhs().is_identity() {
        eq.lhs().to_string()
    } else {
        format!("{} = {}", eq.lhs(), eq.rhs())
    }
}

fn names_legend(group: &FiniteGroup) -> String {
    group.names().join(", ")
}

fn echo_group(report: &mut Report, label: &str, group: &FiniteGroup) {
    report.push("group", label);
    report.push("group.order", group.order());
    report.push("group.names", names_legend(group));
}

fn echo_system(report: &mut Report, system: &EquationSystem) {
    report.push("vars", system.nvars());
    report.push("coefficients", system.ctx().has_constants());
    for (i, eq) in system.equations().iter().enumerate() {
        report.push(format!("equation.{i}"), eq_display(eq));
    }
}

fn push_verdict(report: &mut Report, prefix: &str, verdict: &Verdict) {
    report.push(prefix, verdict.outcome.as_str());
    if let Some(note) = &verdict.note {
        report.push(format!("{prefix}.note"), note);
    }
    if let Some(family) = &verdict.decomposition {
        push_family(report, &format!("{prefix}.family"), family);
    }
    if let Some(witness) = &verdict.witness {
        push_witness(report, prefix, witness);
    }
}

fn push_family(report: &mut Report, base: &str, family: &[Subgroup]) {
    report.push(format!("{base}.size"), family.len());
    for (i, sub) in family.iter().enumerate() {
        report.push(format!("{base}.{i}.order"), sub.order());
        report.push(format!("{base}.{i}.elements"), fmt_tuple(sub.elements()));
    }
}

fn push_witness(report: &mut Report, prefix: &str, witness: &Witness) {
    report.push(format!("{prefix}.witness.point"), fmt_tuple(&witness.point));
    if let Some(images) = &witness.images {
        for (i, word) in images.iter().enumerate() {
            report.push(format!("{prefix}.witness.image.{i}"), word);
        }
    }
    report.push(
        format!("{prefix}.witness.result"),
        fmt_tuple(&witness.result),
    );
}

/// A verdict that fails its own revalidation is a bug, not a result.
fn revalidated(verdict: Verdict, set: &AlgebraicSet) -> Result<Verdict> {
    verdict
        .validate(set)
        .map_err(|e| Error::Internal(format!("verdict failed revalidation: {e}")))?;
    Ok(verdict)
}

fn headline(outcome: Outcome) -> &'static str {
    match outcome {
        Outcome::Yes => "fully characteristic",
        Outcome::No => "not fully characteristic",
        Outcome::BudgetExceeded => "undetermined",
    }
}

pub fn solve(args: &SolveArgs) -> Result<CmdOutcome> {
    let (label, group) = load_group(&args.group)?;
    let system = load_system(&args.sys, &group, args.coefficients)?;
    let set = geometry::solve(&group, &system)?;

    let mut report = Report::new("solve");
    echo_group(&mut report, &label, &group);
    echo_system(&mut report, &system);
    report.push("solution_count", set.len());
    report.push(
        "space_size",
        (group.order() as u128).pow(system.nvars() as u32),
    );
    for (i, tuple) in set.tuples().iter().enumerate() {
        report.push(format!("solution.{i}"), fmt_tuple(tuple));
    }
    Ok(CmdOutcome {
        report,
        exit: EXIT_OK,
    })
}

pub fn closure(args: &ClosureArgs) -> Result<CmdOutcome> {
    let (label, group) = load_group(&args.group)?;
    let ctx = WordContext::free(args.vars)?;
    let mut tuples = Vec::with_capacity(args.point.len());
    for text in &args.point {
        tuples.push(parse_point(text, args.vars)?);
    }
    let set = AlgebraicSet::from_tuples(&group, &ctx, tuples)?;
    let out = geometry::closure(&set)?;

    let mut report = Report::new("closure");
    echo_group(&mut report, &label, &group);
    report.push("vars", args.vars);
    report.push("input_count", set.len());
    report.push("was_algebraic", out.was_algebraic);
    report.push("closed_count", out.closed.len());
    for (i, tuple) in out.closed.tuples().iter().enumerate() {
        report.push(format!("closed.{i}"), fmt_tuple(tuple));
    }
    Ok(CmdOutcome {
        report,
        exit: EXIT_OK,
    })
}

fn parse_point(text: &str, vars: usize) -> Result<Vec<usize>> {
    let entries: Vec<usize> = text
        .split(',')
        .map(|tok| {
            tok.trim().parse::<usize>().map_err(|_| {
                Error::InvalidArgument(format!(
                    "bad element index `{}` in point `{text}`",
                    tok.trim()
                ))
            })
        })
        .collect::<Result<_>>()?;
    if entries.len() != vars {
        return Err(Error::InvalidArgument(format!(
            "point `{text}` has {} entries, expected {vars}",
            entries.len()
        )));
    }
    Ok(entries)
}

pub fn decompose(args: &DecomposeArgs) -> Result<CmdOutcome> {
    let (label, group) = load_group(&args.group)?;
    let system = load_system(&args.sys, &group, false)?;
    let set = geometry::solve(&group, &system)?;
    let verdict = revalidated(radical::decompose(&set)?, &set)?;

    let mut report = Report::new("decompose");
    echo_group(&mut report, &label, &group);
    echo_system(&mut report, &system);
    report.push("solution_count", set.len());
    report.push("verdict", headline(verdict.outcome));
    push_verdict(&mut report, "decompose", &verdict);
    Ok(CmdOutcome {
        report,
        exit: EXIT_OK,
    })
}

pub fn analyze(args: &AnalyzeArgs) -> Result<CmdOutcome> {
    let (label, group) = load_group(&args.group)?;
    let system = load_system(&args.sys, &group, false)?;
    let set = geometry::solve(&group, &system)?;

    let equivalence = radical::characteristic_report(&set)?;
    let decomposed = revalidated(equivalence.decomposition.clone(), &set)?;
    let characteristic = revalidated(equivalence.characteristic.clone(), &set)?;
    let exact = revalidated(radical::full_invariance_exact(&set, args.budget)?, &set)?;
    let sampled = revalidated(radical::endo_invariance_sampled(&set, args.maxlen)?, &set)?;

    let mut report = Report::new("analyze");
    echo_group(&mut report, &label, &group);
    echo_system(&mut report, &system);
    report.push("maxlen", args.maxlen);
    report.push("budget", args.budget);
    report.push("solution_count", set.len());
    report.push("verdict", headline(decomposed.outcome));
    push_verdict(&mut report, "decompose", &decomposed);
    push_verdict(&mut report, "exact_oracle", &exact);
    push_verdict(&mut report, "sampled_oracle", &sampled);
    push_verdict(&mut report, "characteristic", &characteristic);
    match equivalence.nilpotency_class {
        Some(class) => report.push("nilpotency_class", class),
        None => report.push("nilpotency_class", "none"),
    }
    report.push("gamma_vanishes", equivalence.gamma_vanishes);
    report.push("equivalence_applicable", equivalence.equivalence_applicable);

    let mut violations: Vec<String> = Vec::new();
    if exact.outcome != Outcome::BudgetExceeded && decomposed.outcome != exact.outcome {
        violations.push(format!(
            "decomposition says {} but the exact oracle says {}",
            decomposed.outcome.as_str(),
            exact.outcome.as_str()
        ));
    }
    if sampled.outcome == Outcome::No && decomposed.outcome == Outcome::Yes {
        violations.push("sampled oracle found a violating substitution on a decomposable set".into());
    }
    if sampled.outcome == Outcome::No && exact.outcome == Outcome::Yes {
        violations
            .push("sampled oracle found a violating substitution the exact oracle missed".into());
    }
    if !equivalence.consistent {
        violations.push(
            "characteristic and decomposition verdicts violate the nilpotency equivalence".into(),
        );
    }

    report.push(
        "consistency",
        if violations.is_empty() { "ok" } else { "violated" },
    );
    for (i, violation) in violations.iter().enumerate() {
        report.push(format!("consistency.violation.{i}"), violation);
    }

    let budget_hit = exact.outcome == Outcome::BudgetExceeded
        || sampled.outcome == Outcome::BudgetExceeded;
    let exit = if !violations.is_empty() {
        EXIT_INCONSISTENT
    } else if budget_hit {
        EXIT_BUDGET
    } else {
        EXIT_OK
    };
    Ok(CmdOutcome { report, exit })
}

pub fn identities(args: &IdentitiesArgs) -> Result<CmdOutcome> {
    let (label, group) = load_group(&args.group)?;
    let system = load_system(&args.sys, &group, false)?;
    let sweep = radical::identity_correspondence_check(&group, &system, args.maxlen)?;

    let mut report = Report::new("identities");
    echo_group(&mut report, &label, &group);
    echo_system(&mut report, &system);
    report.push("maxlen", args.maxlen);
    report.push("decomposable", sweep.decomposable);
    if sweep.decomposable {
        push_family(&mut report, "family", &sweep.family);
        report.push("words_checked", sweep.words_checked);
        match &sweep.discrepancy {
            Some(word) => report.push("discrepancy", word),
            None => report.push("agreement", "radical membership matches the identity oracle"),
        }
    } else {
        report.push(
            "note",
            "solution set does not decompose; the correspondence asserts nothing",
        );
    }
    let exit = if sweep.decomposable && sweep.discrepancy.is_some() {
        EXIT_INCONSISTENT
    } else {
        EXIT_OK
    };
    Ok(CmdOutcome { report, exit })
}

pub fn gcheck(args: &GcheckArgs) -> Result<CmdOutcome> {
    let (label, group) = load_group(&args.group)?;
    let system = load_system(&args.sys, &group, true)?;
    let target = GTarget::new(&group, args.target_power)?;

    let verbal = g_verbal_check(&group, &system, args.budget)?;
    let freeness = relative_freeness_check(&target, &system, args.maxlen)?;

    let mut report = Report::new("gcheck");
    echo_group(&mut report, &label, &group);
    echo_system(&mut report, &system);
    report.push("target_power", args.target_power);
    report.push("target_order", target.group().order());
    report.push("maxlen", args.maxlen);
    report.push("budget", args.budget);

    report.push("verbal.solution_count", verbal.solution_count);
    report.push("verbal.space_size", verbal.space_size);
    report.push("verbal.whole_space", verbal.whole_space);
    report.push("verbal.degenerate_empty", verbal.degenerate_empty);
    if let Some(verified) = verbal.identities_verified {
        report.push("verbal.identities_verified", verified);
    }
    if let Some(oracle) = verbal.oracle {
        report.push("verbal.oracle", oracle.as_str());
    }
    if let Some(witness) = &verbal.witness {
        push_witness(&mut report, "verbal", witness);
    }
    report.push("verbal.consistent", verbal.consistent);

    report.push("freeness.decomposable", freeness.decomposable);
    report.push("freeness.degenerate_empty", freeness.degenerate_empty);
    if freeness.decomposable && !freeness.degenerate_empty {
        report.push("freeness.family_orders", fmt_tuple(&freeness.family_orders));
        if let Some(order) = freeness.coordinate_order {
            report.push("freeness.coordinate_order", order);
        }
        report.push("freeness.words_sampled", freeness.words_sampled);
        report.push("freeness.identities_sampled", freeness.identities_sampled);
        if let Some(vanish) = freeness.identities_vanish {
            report.push("freeness.identities_vanish", vanish);
        }
        if let Some(iso) = freeness.marked_iso {
            report.push("freeness.marked_iso", iso);
        }
    }
    report.push("freeness.consistent", freeness.consistent);

    let inconsistent = !verbal.consistent || !freeness.consistent;
    report.push(
        "consistency",
        if inconsistent { "violated" } else { "ok" },
    );
    let exit = if inconsistent {
        EXIT_INCONSISTENT
    } else if verbal.oracle == Some(Outcome::BudgetExceeded) {
        EXIT_BUDGET
    } else {
        EXIT_OK
    };
    Ok(CmdOutcome { report, exit })
}

pub fn scan(args: &ScanArgs) -> Result<CmdOutcome> {
    let mut report = Report::new("scan");
    report.push("vars", args.vars);
    report.push("seed", args.seed);
    report.push("samples", args.samples);
    report.push("budget", args.budget);
    report.push("catalog.size", args.group.len());

    let mut any_truncated = false;
    let mut warnings: Vec<String> = Vec::new();

    for (i, spec_text) in args.group.iter().enumerate() {
        let spec: GroupSpec = spec_text.parse()?;
        let group = Arc::new(build_group(&spec)?);
        let config = EnumerationConfig {
            random_subsets: args.samples,
            subset_sizes: 2..=4,
            seed: args.seed,
        };
        let sets = geometry::enumerate_closed_sets(&group, args.vars, &config)?;

        let results: Vec<(Outcome, Outcome, Outcome)> = sets
            .par_iter()
            .map(|set| -> Result<_> {
                let decomposed = radical::decompose(set)?;
                let exact = radical::full_invariance_exact(set, args.budget)?;
                let characteristic = radical::is_characteristic(set)?;
                Ok((
                    decomposed.outcome,
                    exact.outcome,
                    characteristic.outcome,
                ))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut examined = 0usize;
        let mut fully = 0usize;
        let mut char_not_fully = 0usize;
        let mut agreement = 0usize;
        let mut truncated = false;
        for (decomposed, exact, characteristic) in &results {
            if *exact == Outcome::BudgetExceeded {
                truncated = true;
                break;
            }
            examined += 1;
            if *decomposed == Outcome::Yes {
                fully += 1;
            }
            if *characteristic == Outcome::Yes && *decomposed == Outcome::No {
                char_not_fully += 1;
            }
            if decomposed == exact {
                agreement += 1;
            }
        }

        report.push(format!("group.{i}.spec"), spec_text);
        report.push(format!("group.{i}.order"), group.order());
        report.push(format!("group.{i}.sets_examined"), examined);
        report.push(format!("group.{i}.fully_characteristic"), fully);
        report.push(format!("group.{i}.characteristic_not_fully"), char_not_fully);
        report.push(format!("group.{i}.oracle_agreement"), agreement);
        report.push(format!("group.{i}.truncated"), truncated);
        if char_not_fully > 0 {
            warnings.push(format!(
                "{spec_text}: {char_not_fully} sets are characteristic but not fully characteristic"
            ));
        }
        any_truncated |= truncated;
    }

    for (i, warning) in warnings.iter().enumerate() {
        report.push(format!("warning.{i}"), warning);
    }
    report.push(
        "status",
        if any_truncated { "truncated" } else { "complete" },
    );
    let exit = if any_truncated { EXIT_BUDGET } else { EXIT_OK };
    Ok(CmdOutcome { report, exit })
}
