//! Acceptance sweep for the whole workspace: nine end-to-end criteria,
//! one test each, every one printing a single `ACCEPTANCE <k> <name>:
//! PASS`/`FAIL` line. Run with `--nocapture` to watch them stream.
//!
//! The heavyweight shared piece is the instance catalog: every algebraic
//! set obtained as a singleton closure or a seeded random-subset closure
//! over the seven-group catalog at n = 1 and 2, each stored with both the
//! decomposition-criterion verdict and the exact endomorphism-oracle
//! verdict. Criteria 1, 5, and 8 all consume it, so it is built once
//! behind a `OnceLock`.

use std::panic::AssertUnwindSafe;
use std::process::Command;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use groupgeom::gcoeff::{g_identity_check, g_verbal_check};
use groupgeom::geometry::{
    closure, coordinate_group, enumerate_closed_sets, solve, AlgebraicSet, EnumerationConfig,
    Equation, EquationSystem,
};
use groupgeom::group::{build_group, FiniteGroup, GroupSpec};
use groupgeom::radical::{
    characteristic_report, decompose, full_invariance_exact, identity_correspondence_of_set,
    marked_iso, relatively_free, Outcome, Verdict, DEFAULT_EXTENSION_BUDGET,
};
use groupgeom::words::{Letter, Word, WordContext};

const GROUPS: [&str; 7] = [
    "cyclic(2)",
    "cyclic(4)",
    "direct_product(cyclic(2), cyclic(2))",
    "cyclic(6)",
    "symmetric(3)",
    "dihedral(4)",
    "quaternion8",
];

const CATALOG_SEED: u64 = 0x5eed_0001;
const GALOIS_SEED: u64 = 0x5eed_0003;
const COMPOSE_SEED: u64 = 0x5eed_0004;
const EQUIVALENCE_SEED: u64 = 0x5eed_0006;
const VERBAL_SEED: u64 = 0x5eed_0007;
const RANDOM_SUBSETS: usize = 200;

fn make(spec: &str) -> Arc<FiniteGroup> {
    let parsed: GroupSpec = spec.parse().expect("builder spec");
    Arc::new(build_group(&parsed).expect("group construction"))
}

fn solve_eqs(group: &Arc<FiniteGroup>, nvars: usize, eqs: &[&str]) -> AlgebraicSet {
    let ctx = WordContext::free(nvars).expect("context");
    let equations = eqs
        .iter()
        .map(|text| Equation::from_word(Word::parse(&ctx, text).expect("equation word")))
        .collect();
    let system = EquationSystem::new(ctx, equations).expect("system");
    solve(group, &system).expect("solve")
}

/// Prints the per-criterion verdict line whatever the body does.
fn criterion<F>(index: usize, name: &str, body: F)
where
    F: FnOnce() -> String,
{
    match std::panic::catch_unwind(AssertUnwindSafe(body)) {
        Ok(detail) => println!("ACCEPTANCE {index} {name}: PASS ({detail})"),
        Err(err) => {
            println!("ACCEPTANCE {index} {name}: FAIL");
            std::panic::resume_unwind(err);
        }
    }
}

struct Instance {
    label: &'static str,
    nvars: usize,
    set: AlgebraicSet,
    decomposed: Verdict,
    exact: Verdict,
}

struct Catalog {
    instances: Vec<Instance>,
    build_time: Duration,
}

static CATALOG: OnceLock<Catalog> = OnceLock::new();

fn catalog() -> &'static Catalog {
    CATALOG.get_or_init(|| {
        let start = Instant::now();
        let mut instances = Vec::new();
        for label in GROUPS {
            let group = make(label);
            for nvars in 1..=2 {
                let config = EnumerationConfig {
                    random_subsets: RANDOM_SUBSETS,
                    subset_sizes: 2..=4,
                    seed: CATALOG_SEED,
                };
                let sets = enumerate_closed_sets(&group, nvars, &config).expect("enumeration");
                let analyzed: Vec<Instance> = sets
                    .into_par_iter()
                    .map(|set| {
                        let decomposed = decompose(&set).expect("decomposition");
                        let exact = full_invariance_exact(&set, DEFAULT_EXTENSION_BUDGET)
                            .expect("exact oracle");
                        Instance {
                            label,
                            nvars,
                            set,
                            decomposed,
                            exact,
                        }
                    })
                    .collect();
                instances.extend(analyzed);
            }
        }
        Catalog {
            instances,
            build_time: start.elapsed(),
        }
    })
}

#[test]
fn criterion_1_decomposition_matches_the_exact_oracle_on_the_catalog() {
    criterion(1, "decompose-vs-exact-oracle", || {
        let catalog = catalog();
        for inst in &catalog.instances {
            assert_ne!(
                inst.exact.outcome,
                Outcome::BudgetExceeded,
                "exact oracle over budget for {} n={} |E|={}",
                inst.label,
                inst.nvars,
                inst.set.len()
            );
            assert_eq!(
                inst.decomposed.outcome, inst.exact.outcome,
                "oracle disagreement for {} n={} E={:?}",
                inst.label,
                inst.nvars,
                inst.set.tuples()
            );
        }
        assert!(catalog.instances.len() > 100, "catalog suspiciously small");
        assert!(
            catalog.build_time <= Duration::from_secs(300),
            "catalog took {:?}, over the five-minute budget",
            catalog.build_time
        );
        format!(
            "{} instances agreed in {:.1?}",
            catalog.instances.len(),
            catalog.build_time
        )
    });
}

#[test]
fn criterion_2_pinned_instances_over_the_symmetric_group() {
    criterion(2, "pinned-instances", || {
        let group = make("symmetric(3)");
        let transpositions = [1usize, 2, 5];

        let commuting = solve_eqs(&group, 2, &["[x1,x2]"]);
        let verdict = decompose(&commuting).expect("decompose");
        let exact = full_invariance_exact(&commuting, DEFAULT_EXTENSION_BUDGET).expect("oracle");
        assert_eq!(verdict.outcome, Outcome::Yes, "commuting pairs decompose");
        assert_eq!(exact.outcome, Outcome::Yes, "commuting pairs pass the oracle");
        verdict.validate(&commuting).expect("verdict evidence");

        let mixed = solve_eqs(&group, 2, &["[x1,x2]", "x1^2", "x2^3"]);
        let verdict = decompose(&mixed).expect("decompose");
        let exact = full_invariance_exact(&mixed, DEFAULT_EXTENSION_BUDGET).expect("oracle");
        assert_eq!(verdict.outcome, Outcome::No);
        assert_eq!(exact.outcome, Outcome::No);
        exact.validate(&mixed).expect("witness must replay");
        let witness = exact.witness.as_ref().expect("no-verdicts carry a witness");
        assert_eq!(witness.point[1], 0, "witness point is (t, e)");
        assert!(
            transpositions.contains(&witness.point[0]),
            "witness point is (t, e), got {:?}",
            witness.point
        );
        assert_eq!(
            witness.result,
            vec![0, witness.point[0]],
            "witness sends (t, e) to (e, t)"
        );

        for eq in ["x1^3", "x1^2"] {
            let line = solve_eqs(&group, 1, &[eq]);
            let verdict = decompose(&line).expect("decompose");
            let exact = full_invariance_exact(&line, DEFAULT_EXTENSION_BUDGET).expect("oracle");
            assert_eq!(verdict.outcome, Outcome::Yes, "V({eq}) decomposes");
            assert_eq!(exact.outcome, Outcome::Yes, "V({eq}) passes the oracle");
            verdict.validate(&line).expect("verdict evidence");
        }
        "4 pinned sets matched their brute-forced verdicts".to_string()
    });
}

fn random_free_word(rng: &mut ChaCha8Rng, ctx: &WordContext, maxlen: usize) -> Word {
    let len = rng.gen_range(1..=maxlen);
    let mut letters = Vec::new();
    let mut budget = len;
    while budget > 0 {
        let magnitude = rng.gen_range(1..=budget.min(2));
        let exp = if rng.gen_bool(0.5) {
            magnitude as i64
        } else {
            -(magnitude as i64)
        };
        letters.push(Letter::Var {
            index: rng.gen_range(0..ctx.nvars()),
            exp,
        });
        budget -= magnitude;
    }
    Word::from_letters(ctx, letters).expect("random word")
}

#[test]
fn criterion_3_systems_embed_in_their_radical_and_solutions_are_closed() {
    criterion(3, "galois-connection", || {
        let mut rng = ChaCha8Rng::seed_from_u64(GALOIS_SEED);
        let mut checked = 0usize;
        for label in GROUPS {
            let group = make(label);
            for _ in 0..1000 {
                let nvars = rng.gen_range(1..=2);
                let ctx = WordContext::free(nvars).expect("context");
                let count = rng.gen_range(1..=3);
                let equations = (0..count)
                    .map(|_| Equation::from_word(random_free_word(&mut rng, &ctx, 6)))
                    .collect();
                let system = EquationSystem::new(ctx, equations).expect("system");
                let set = solve(&group, &system).expect("solve");
                for word in system.unified_words() {
                    assert!(
                        set.radical_contains_word(word).expect("radical test"),
                        "system word {word} escaped Rad(V(S)) over {label}"
                    );
                }
                let out = closure(&set).expect("closure");
                assert!(
                    out.was_algebraic,
                    "V(S) not closed over {label}: {:?}",
                    set.tuples()
                );
                assert_eq!(out.closed.tuples(), set.tuples());
                checked += 1;
            }
        }
        format!("{checked} random systems")
    });
}

fn random_mixed_word(rng: &mut ChaCha8Rng, ctx: &WordContext, maxlen: usize) -> Word {
    let order = ctx.constants().map(|g| g.order()).unwrap_or(0);
    let len = rng.gen_range(1..=maxlen);
    let mut letters = Vec::new();
    let mut budget = len;
    while budget > 0 {
        if order > 1 && rng.gen_bool(0.3) {
            letters.push(Letter::Const {
                elem: rng.gen_range(1..order),
            });
            budget -= 1;
            continue;
        }
        let magnitude = rng.gen_range(1..=budget.min(2));
        let exp = if rng.gen_bool(0.5) {
            magnitude as i64
        } else {
            -(magnitude as i64)
        };
        letters.push(Letter::Var {
            index: rng.gen_range(0..ctx.nvars()),
            exp,
        });
        budget -= magnitude;
    }
    Word::from_letters(ctx, letters).expect("random word")
}

#[test]
fn criterion_4_substitution_composes_with_evaluation() {
    criterion(4, "composition-law", || {
        let groups: Vec<Arc<FiniteGroup>> = GROUPS.iter().map(|s| make(s)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(COMPOSE_SEED);
        for round in 0..10_000 {
            let group = &groups[rng.gen_range(0..groups.len())];
            let nvars = rng.gen_range(1..=2);
            let ctx = if rng.gen_bool(0.5) {
                WordContext::with_constants(nvars, Arc::clone(group)).expect("context")
            } else {
                WordContext::free(nvars).expect("context")
            };
            let word = random_mixed_word(&mut rng, &ctx, 6);
            let images: Vec<Word> = (0..nvars)
                .map(|_| random_mixed_word(&mut rng, &ctx, 4))
                .collect();
            let point: Vec<usize> = (0..nvars)
                .map(|_| rng.gen_range(0..group.order()))
                .collect();

            let substituted = word.substitute(&ctx, &images).expect("substitute");
            let lhs = substituted.evaluate(&ctx, group, &point).expect("evaluate");
            let image_point: Vec<usize> = images
                .iter()
                .map(|w| w.evaluate(&ctx, group, &point).expect("evaluate image"))
                .collect();
            let rhs = word.evaluate(&ctx, group, &image_point).expect("evaluate");
            assert_eq!(
                lhs, rhs,
                "composition law failed at round {round}: p={word}, images={images:?}, point={point:?}"
            );
        }
        "10000 triples".to_string()
    });
}

#[test]
fn criterion_5_radical_words_are_exactly_the_family_identities() {
    criterion(5, "radical-identity-correspondence", || {
        let catalog = catalog();
        let sweeps: Vec<(usize, usize)> = catalog
            .instances
            .par_iter()
            .filter(|inst| inst.decomposed.outcome == Outcome::Yes)
            .map(|inst| {
                let sweep = identity_correspondence_of_set(&inst.set, 6).expect("sweep");
                assert!(sweep.decomposable);
                assert!(
                    sweep.discrepancy.is_none(),
                    "radical/identity mismatch on {} at {} n={}: {:?}",
                    sweep.discrepancy.as_ref().map(ToString::to_string).unwrap_or_default(),
                    inst.label,
                    inst.nvars,
                    inst.set.tuples()
                );
                (sweep.words_checked, 1)
            })
            .collect();
        let instances: usize = sweeps.iter().map(|(_, n)| n).sum();
        let words: usize = sweeps.iter().map(|(w, _)| w).sum();
        assert!(instances > 0, "no fully characteristic instances to sweep");
        format!("{instances} instances, {words} word comparisons")
    });
}

#[test]
fn criterion_6_characteristic_equals_fully_characteristic_under_vanishing() {
    criterion(6, "characteristic-equivalence", || {
        let configs: [(&str, usize); 7] = [
            ("cyclic(2)", 2),
            ("cyclic(4)", 2),
            ("direct_product(cyclic(2), cyclic(2))", 2),
            ("cyclic(6)", 2),
            ("dihedral(4)", 3),
            ("quaternion8", 3),
            ("unitriangular(3, 3)", 3),
        ];
        let mut total = 0usize;
        for (label, nvars) in configs {
            let group = make(label);
            let config = EnumerationConfig {
                random_subsets: 100,
                subset_sizes: 2..=4,
                seed: EQUIVALENCE_SEED,
            };
            let sets = enumerate_closed_sets(&group, nvars, &config).expect("enumeration");
            let examined: usize = sets
                .par_iter()
                .map(|set| {
                    let report = characteristic_report(set).expect("report");
                    assert!(
                        report.gamma_vanishes,
                        "vanishing hypothesis failed over {label} n={nvars}; \
                         the class bound should force it"
                    );
                    assert!(report.consistent);
                    let char_yes = report.characteristic.outcome == Outcome::Yes;
                    let decomp_yes = report.decomposition.outcome == Outcome::Yes;
                    assert_eq!(
                        char_yes, decomp_yes,
                        "equivalence failed over {label} n={nvars} on E={:?}",
                        set.tuples()
                    );
                    1usize
                })
                .sum();
            total += examined;
        }
        format!("{total} sets across 7 configurations")
    });
}

#[test]
fn criterion_7_verbal_systems_and_violating_witnesses_over_coefficients() {
    criterion(7, "verbal-coefficient-checks", || {
        let mut rng = ChaCha8Rng::seed_from_u64(VERBAL_SEED);
        let mut whole = 0usize;
        let mut proper = 0usize;
        let mut empty = 0usize;
        for (label, exponent) in [("symmetric(3)", 6i64), ("dihedral(4)", 4i64)] {
            let group = make(label);
            let mut systems: Vec<EquationSystem> = Vec::new();

            let ctx = WordContext::with_constants(1, Arc::clone(&group)).expect("context");
            let x1 = Word::var(&ctx, 0).expect("x1");
            let power = x1.pow(&ctx, exponent).expect("exponent word");
            systems.push(
                EquationSystem::new(ctx.clone(), vec![Equation::from_word(power)]).expect("system"),
            );
            let g1 = Word::constant(&ctx, 1).expect("g1");
            let centralizer = Word::commutator(&ctx, &x1, &g1).expect("commutator");
            systems.push(
                EquationSystem::new(ctx.clone(), vec![Equation::from_word(centralizer)])
                    .expect("system"),
            );

            let ctx2 = WordContext::with_constants(2, Arc::clone(&group)).expect("context");
            let both_powers: Vec<Equation> = (0..2)
                .map(|i| {
                    let x = Word::var(&ctx2, i).expect("var");
                    Equation::from_word(x.pow(&ctx2, exponent).expect("power"))
                })
                .collect();
            systems.push(EquationSystem::new(ctx2, both_powers).expect("system"));

            for _ in 0..100 {
                let count = rng.gen_range(1..=2);
                let equations = (0..count)
                    .map(|_| Equation::from_word(random_mixed_word(&mut rng, &ctx, 5)))
                    .collect();
                systems.push(EquationSystem::new(ctx.clone(), equations).expect("system"));
            }

            for system in &systems {
                let report =
                    g_verbal_check(&group, system, DEFAULT_EXTENSION_BUDGET).expect("verbal check");
                assert!(report.consistent, "inconsistent verbal report over {label}");
                if report.whole_space {
                    assert_eq!(report.identities_verified, Some(true));
                    for word in system.unified_words() {
                        assert!(
                            g_identity_check(&group, system.ctx(), word).expect("identity check"),
                            "whole-space equation {word} is not an identity over {label}"
                        );
                    }
                    whole += 1;
                } else if report.degenerate_empty {
                    empty += 1;
                } else {
                    assert_eq!(
                        report.oracle,
                        Some(Outcome::No),
                        "proper nonempty solution set must fail the pinned oracle over {label}"
                    );
                    let witness = report.witness.as_ref().expect("oracle witness");
                    let set = solve(&group, system).expect("solve");
                    assert!(set.contains(&witness.point));
                    assert!(!set.contains(&witness.result));
                    let images = witness.images.as_ref().expect("witness images");
                    let mapped: Vec<usize> = images
                        .iter()
                        .map(|im| im.evaluate(system.ctx(), &group, &witness.point).expect("replay"))
                        .collect();
                    assert_eq!(mapped, witness.result, "witness does not replay over {label}");
                    proper += 1;
                }
            }
        }
        assert!(whole >= 4, "expected the pinned verbal systems to be whole-space");
        assert!(proper >= 2, "expected proper instances with witnesses");
        format!("{whole} whole-space, {proper} proper with replayed witnesses, {empty} empty")
    });
}

#[test]
fn criterion_8_coordinate_groups_are_the_relatively_free_objects() {
    criterion(8, "relative-freeness", || {
        let catalog = catalog();
        let checked: usize = catalog
            .instances
            .par_iter()
            .filter(|inst| inst.decomposed.outcome == Outcome::Yes)
            .map(|inst| {
                let family = inst
                    .decomposed
                    .decomposition
                    .as_ref()
                    .expect("yes-verdicts carry their family");
                let gamma = coordinate_group(&inst.set).expect("coordinate group");
                let free = relatively_free(family, inst.set.ctx()).expect("free object");
                assert!(
                    marked_iso(&gamma, &free),
                    "coordinate group not relatively free for {} n={} E={:?}",
                    inst.label,
                    inst.nvars,
                    inst.set.tuples()
                );
                1usize
            })
            .sum();
        assert!(checked > 0, "no fully characteristic instances to compare");
        format!("{checked} marked isomorphisms")
    });
}

#[test]
fn criterion_9_scan_reports_are_independent_of_parallelism() {
    criterion(9, "scan-determinism", || {
        let run = |jobs: &str| {
            let output = Command::new(env!("CARGO_BIN_EXE_groupgeom"))
                .args([
                    "scan",
                    "--group",
                    "symmetric(3)",
                    "--group",
                    "dihedral(4)",
                    "--group",
                    "cyclic(6)",
                    "--vars",
                    "2",
                    "--samples",
                    "60",
                    "--seed",
                    "20240817",
                    "--format",
                    "structured",
                    "--jobs",
                    jobs,
                ])
                .output()
                .expect("scan run");
            assert_eq!(output.status.code(), Some(0), "scan exited nonzero");
            String::from_utf8(output.stdout).expect("utf8 output")
        };
        let serial = run("1");
        let parallel = run("4");
        assert!(serial.starts_with("schema=groupgeom.v1\ncommand=scan\n"));
        assert!(serial.contains("seed=20240817"));
        assert_eq!(serial, parallel, "structured scan output depends on --jobs");
        format!("{} identical bytes", serial.len())
    });
}
