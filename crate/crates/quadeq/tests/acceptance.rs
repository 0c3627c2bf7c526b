//! Acceptance run: one PASS/FAIL line per criterion, with timings.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::instances::{kernel, lift, solvable_hat_abs, solvable_n, KernelSeed};
use common::lemma_checks::*;
use common::orbit_bfs::{parameterizations, BoxOrbits};
use quadeq::classify::{classify, verify_tables, Budgets, Reason, Verdict};
use quadeq::derived::{first_solutions, second_decide, DecideResult, MixedCase, MixedKind};
use quadeq::fgword::{parse_word, relator, BasisTag, EquationSpec, Frame, Letter, Sign, SolutionClass, Word};
use quadeq::grind::{q_n, RingElement};
use quadeq::surface::{project, PiElement};
use quadeq::wicks::{rhs_word, wicks_decompositions, wicks_search, WicksForm, WicksKind, DEFAULT_BUDGET};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sign(rng: &mut ChaCha8Rng) -> Sign {
    if rng.gen() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn random_word(rng: &mut ChaCha8Rng, basis: BasisTag, max_len: usize) -> Word {
    let n = rng.gen_range(0..=max_len);
    let ls: Vec<Letter> = (0..n).map(|_| [1, -1, 2, -2][rng.gen_range(0..4)]).collect();
    Word::from_letters(basis, &ls)
}

fn random_ring(rng: &mut ChaCha8Rng, eps: Sign, radius: i64, len: usize) -> RingElement {
    let pairs: Vec<((i64, i64), i64)> = (0..rng.gen_range(0..=len))
        .map(|_| ((rng.gen_range(-radius..=radius), rng.gen_range(-radius..=radius)), rng.gen_range(-2..=2)))
        .collect();
    RingElement::from_pairs(eps, &pairs)
}

fn random_kernel(rng: &mut ChaCha8Rng, eps: Sign) -> RingElement {
    let seed: KernelSeed = (
        rng.gen_range(-3..=3),
        (0..rng.gen_range(0..4)).map(|_| ((rng.gen_range(-4..=4), rng.gen_range(-4..=4)), rng.gen_range(-2..=2))).collect(),
    );
    kernel(eps, &seed)
}

fn table_fixtures() -> Outcome {
    let r = verify_tables();
    ensure(r.failures.is_empty(), || format!("failures: {:?}", r.failures))?;
    Ok(format!("{} fixtures, 0 failures", r.checked))
}

fn conjugated_relator_pair() -> Outcome {
    let spec = EquationSpec::adapted(Sign::Plus, Sign::Minus, Sign::Minus, SolutionClass::NonFaithful);
    let v = parse_word("conj(a) conj(A)", spec.basis()).unwrap();
    let (core, _) = rhs_word(&spec, &v).unwrap().cyclic_reduce();
    ensure(core.len() == 26, || format!("rhs length {}", core.len()))?;
    let ms = wicks_decompositions(&core, WicksKind::Commutator);
    let shifts: BTreeSet<usize> = ms.iter().map(|m| m.shift).collect();
    let expected: BTreeSet<usize> = [0, 1, 6, 7, 8, 9, 10].iter().flat_map(|&i| [i, i + 13]).collect();
    ensure(shifts == expected, || format!("shifts {shifts:?}"))?;
    let mut forms: BTreeMap<usize, BTreeSet<WicksForm>> = BTreeMap::new();
    for m in &ms {
        forms.entry(m.shift % 13).or_default().insert(m.form);
    }
    for (i, f) in [(0, WicksForm::OrientableABC), (1, WicksForm::OrientableABC), (10, WicksForm::OrientableABC)]
        .into_iter()
        .chain((6..=9).map(|i| (i, WicksForm::OrientableDE)))
    {
        ensure(forms[&i] == BTreeSet::from([f]), || format!("forms at {i}: {:?}", forms[&i]))?;
    }
    let search = wicks_search(&spec, &v, DEFAULT_BUDGET).unwrap();
    ensure(!search.solutions.is_empty() && search.solutions.iter().all(|s| s.faithful), || "non-faithful solution found".into())?;
    let c = classify(&spec, &v, &Budgets::default()).unwrap();
    ensure(c.verdict == Verdict::NotExists { reason: Reason::WicksExhaustive }, || format!("{:?}", c.verdict))?;
    Ok(format!("length 26, {} matches, {} faithful solutions, NotExists", ms.len(), search.solutions.len()))
}

fn first_derived_grid() -> Outcome {
    let mut count = 0;
    for n in -6..=6 {
        for m in -6..=6 {
            for kind in [MixedKind::Eq2NF { n }, MixedKind::Eq3NF { m, n }, MixedKind::Eq4F { n }, MixedKind::Eq4NF { m, n }] {
                let case = MixedCase::new(kind);
                let vbar = case.vbar();
                let eps = case.epsilon();
                let bound = if vbar.is_identity() { 2 } else { 3 };
                let sols = first_solutions(&case, &vbar, bound).map_err(|e| format!("{kind:?}: {e}"))?;
                ensure(!sols.is_empty(), || format!("{kind:?}: no solutions"))?;
                // ϑ = −1 in every mixed family: (1 − δȳ)x̃ = 1 − v̄.
                let rhs = RingElement::one(eps).sub(&RingElement::monomial(vbar, 1)).unwrap();
                for s in &sols {
                    let lhs = RingElement::one(eps)
                        .sub(&RingElement::monomial(s.ybar, case.delta().value()))
                        .unwrap()
                        .mul(&s.xtilde)
                        .unwrap();
                    ensure(lhs == rhs, || format!("{kind:?}: equation fails for ȳ={}", s.ybar))?;
                    ensure(q_n(&s.x_word).ok() == Some(s.xtilde.clone()), || format!("{kind:?}: q_n(x) ≠ x̃"))?;
                    ensure(project(&s.y_word) == s.ybar, || format!("{kind:?}: ȳ mismatch"))?;
                }
                count += sols.len();
            }
        }
    }
    Ok(format!("{count} solutions over 676 cases"))
}

fn qn_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..1000 {
        let eps = sign(&mut rng);
        let basis = BasisTag::adapted(eps);
        let mut word = Word::identity(basis);
        let mut expected = RingElement::zero(eps, quadeq::Domain::IntegerCoeff);
        for _ in 0..rng.gen_range(0..6) {
            let u = random_word(&mut rng, basis, 8);
            let e = [1, -1, 2, -3][rng.gen_range(0..4)];
            word = word.mul(&Word::conj(&u, &relator(eps).pow(e)).unwrap()).unwrap();
            expected.add_term(project(&u), e);
        }
        let got = q_n(&word).map_err(|e| format!("case {i}: {e}"))?;
        ensure(got == expected, || format!("case {i}: {got} ≠ {expected}"))?;
        // Additivity and equivariance.
        let other = Word::conj(&random_word(&mut rng, basis, 6), &relator(eps)).unwrap();
        let sum = q_n(&word.mul(&other).unwrap()).unwrap();
        ensure(sum == got.add(&q_n(&other).unwrap()).unwrap(), || format!("case {i}: additivity"))?;
        let u = random_word(&mut rng, basis, 6);
        let conj = q_n(&Word::conj(&u, &word).unwrap()).unwrap();
        ensure(conj == RingElement::monomial(project(&u), 1).mul(&got).unwrap(), || format!("case {i}: equivariance"))?;
    }
    Ok("1000 B-products".into())
}

fn lemma_suite() -> Outcome {
    let mut checks = 0usize;
    let mut run = |r: Result<(), String>| -> Result<(), String> {
        checks += 1;
        r
    };
    for l in -5..=5 {
        run(alpha_power_commutator(l))?;
    }
    for n in (-4..=4).filter(|&n| n != 0) {
        for l in -4..=4 {
            run(beta_power_of_c(n, l))?;
        }
    }
    for r in -4..=4 {
        for s in -4..=4 {
            for k in -6..=6 {
                run(geometric_sums(km(r, s), k))?;
                run(geometric_sums(tor(r, s), k))?;
            }
            for k in -4..=4 {
                for m in [-3, 0, 2] {
                    run(split_geometric_sum(km(r, s), k, m))?;
                }
            }
        }
    }
    for n in [-6i64, -4, -2, 2, 4, 6] {
        for ell in [1i64, -1, 3, -3].into_iter().filter(|e| n % e == 0) {
            for l in -4..=4 {
                for k in -2..=2 {
                    run(beta_sums_through_y(n, ell, l, k, 1))?;
                }
            }
        }
    }
    for n in (-6..=6).filter(|&n| n != 0) {
        for m in -5..=5 {
            run(shifted_beta_sum(n, m))?;
        }
    }
    Ok(format!("{checks} exact checks"))
}

fn orbit_closed_forms() -> Outcome {
    const BOX: i64 = 12;
    let actions = parameterizations();
    let mut kinds = BTreeMap::new();
    for action in &actions {
        let bfs = BoxOrbits::new(action, 44);
        let eps = action.epsilon();
        let pts: Vec<PiElement> =
            (-BOX..=BOX).flat_map(|r| (-BOX..=BOX).map(move |s| PiElement::new(eps, r, s))).collect();
        for g in &pts {
            let fams = action.families(g).map_err(|e| e.to_string())?;
            for h in &pts {
                let closed = fams.iter().any(|f| f.contains(h));
                ensure(closed == bfs.same(g, h), || format!("{action:?}: {g} vs {h}"))?;
            }
        }
        let name = format!("{action:?}");
        let kind = format!("{} over {}", name.split([' ', '{']).next().unwrap(), action.epsilon());
        *kinds.entry(kind).or_insert(0usize) += 1;
    }
    ensure(kinds.values().all(|&c| c >= 10) && kinds.len() == 5, || format!("parameterizations {kinds:?}"))?;
    Ok(format!("{} parameterizations on |r|,|s| ≤ {BOX}", actions.len()))
}

fn decider_fuzz() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut accepted = 0;
    while accepted < 500 {
        let v_case = if rng.gen() {
            let (m, n) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
            if m == 0 && n == 0 {
                continue;
            }
            let case = MixedCase::new(if rng.gen() { MixedKind::Eq3NF { m, n } } else { MixedKind::Eq4NF { m, n } });
            let eps = case.epsilon();
            let z = lift(eps, &random_ring(&mut rng, Sign::Plus, 3, 4));
            let k = random_kernel(&mut rng, eps);
            (solvable_hat_abs(case.c.unwrap().pow(case.d.unwrap()), &z, &k), case)
        } else {
            let n = [-4, -3, -2, -1, 1, 2, 3, 4][rng.gen_range(0..8)];
            let case = MixedCase::new(if rng.gen() { MixedKind::Eq4F { n } } else { MixedKind::Eq2NF { n } });
            let z = random_ring(&mut rng, Sign::Minus, 3, 3);
            let v = solvable_n(n, rng.gen_range(-4..=4), &z).add(&random_kernel(&mut rng, Sign::Minus)).unwrap();
            (v, case)
        };
        let (v, case) = v_case;
        let r = second_decide(&case, &v, None).map_err(|e| e.to_string())?;
        ensure(r.is_solvable(), || format!("{:?}: constructed V = {v} rejected", case.kind))?;
        accepted += 1;
    }

    let mut rejected = 0;
    let mut bfs_cache: BTreeMap<(i64, i64, i64), BoxOrbits> = BTreeMap::new();
    while rejected < 500 {
        let (r, s) = (rng.gen_range(-5..=5), rng.gen_range(-5..=5));
        let (case, g) = if rng.gen() {
            let (m, n) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
            if m == 0 && n == 0 {
                continue;
            }
            let torus = rng.gen();
            let case = MixedCase::new(if torus { MixedKind::Eq3NF { m, n } } else { MixedKind::Eq4NF { m, n } });
            let u = case.c.unwrap().pow(case.d.unwrap());
            let g = PiElement::new(case.epsilon(), r, s);
            let bfs = bfs_cache
                .entry((torus as i64, u.r, u.s))
                .or_insert_with(|| BoxOrbits::new(&quadeq::orbits::ActionSpec::HatAbs { u }, 30));
            if bfs.same(&PiElement::identity(case.epsilon()), &g) {
                continue;
            }
            (case, g)
        } else {
            let g = km(r, s);
            if g.is_identity() {
                continue;
            }
            (MixedCase::new(if rng.gen() { MixedKind::Eq4F { n: 0 } } else { MixedKind::Eq2NF { n: 0 } }), g)
        };
        match second_decide(&case, &RingElement::monomial(g, 1), None).map_err(|e| e.to_string())? {
            DecideResult::Unsolvable { certificate } => {
                ensure(!certificate.condition.is_empty(), || "empty certificate".into())?
            }
            other => return Err(format!("{:?}: single term {g} accepted: {other:?}", case.kind)),
        }
        rejected += 1;
    }

    let mut perturbed = 0;
    for _ in 0..500 {
        let (n, m) = (rng.gen_range(-4..=4), rng.gen_range(-3..=3));
        let kind = [MixedKind::Eq2NF { n }, MixedKind::Eq3NF { m, n }, MixedKind::Eq4F { n }, MixedKind::Eq4NF { m, n }]
            [rng.gen_range(0..4)];
        let case = MixedCase::new(kind);
        let eps = case.epsilon();
        let v = lift(eps, &random_ring(&mut rng, Sign::Minus, 3, 4));
        let k = random_kernel(&mut rng, eps);
        let a = second_decide(&case, &v, None).unwrap().is_solvable();
        let b = second_decide(&case, &v.add(&k).unwrap(), None).unwrap().is_solvable();
        ensure(a == b, || format!("{kind:?}: V = {v} changes under {k}"))?;
        perturbed += 1;
    }
    Ok(format!("{accepted} accepted, {rejected} rejected with certificates, {perturbed} perturbations"))
}

fn oracle_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut corpus = 0;
    let mut counts = BTreeMap::new();
    let mut oracle_hits = 0;
    while corpus < 300 {
        let (d, e, t) = (sign(&mut rng), sign(&mut rng), sign(&mut rng));
        let class = if rng.gen() { SolutionClass::Faithful } else { SolutionClass::NonFaithful };
        let mut spec = EquationSpec::adapted(d, e, t, class);
        if rng.gen() {
            spec.frame = Frame::OriginalZ;
        }
        let v = random_word(&mut rng, spec.basis(), 9);
        if rhs_word(&spec, &v).unwrap().cyclic_reduce().0.len() > 40 {
            continue;
        }
        corpus += 1;
        let c = classify(&spec, &v, &Budgets::default()).map_err(|e| format!("{v}: {e}"))?;
        let oracle = wicks_search(&spec, &v, 64).map_err(|e| e.to_string())?;
        let want = class == SolutionClass::Faithful;
        if oracle.of_class(want).next().is_some() {
            oracle_hits += 1;
            ensure(!c.verdict.is_not_exists(), || format!("{spec:?} v={v}: {:?}", c.verdict))?;
        }
        let key = match c.verdict {
            Verdict::Exists { .. } => "exists",
            Verdict::NotExists { .. } => "not_exists",
            Verdict::Undetermined { .. } => "undetermined",
        };
        *counts.entry(key).or_insert(0) += 1;
    }
    Ok(format!("{corpus} words, {oracle_hits} with oracle solutions, verdicts {counts:?}"))
}

fn cli_goldens() -> Outcome {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(root.join("tests/golden/invocations.txt")).map_err(|e| e.to_string())?;
    let mut n = 0;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let (name, cmd) = line.split_once('\t').ok_or("malformed invocation line")?;
        let (head, word) = match cmd.split_once(" --word ") {
            Some((h, w)) => (h, Some(w)),
            None => (cmd, None),
        };
        let mut args: Vec<&str> = head.split_whitespace().collect();
        if let Some(w) = word {
            args.extend(["--word", w]);
        }
        let out = Command::new(env!("CARGO_BIN_EXE_quadeq")).args(&args).current_dir(root).output().map_err(|e| e.to_string())?;
        let want = std::fs::read(root.join(format!("tests/golden/{name}.out"))).map_err(|e| format!("{name}: {e}"))?;
        ensure(out.status.code() == Some(0), || format!("{name}: exit {:?}", out.status.code()))?;
        ensure(out.stdout == want, || format!("{name}: output differs"))?;
        n += 1;
    }
    ensure(n == 10, || format!("{n} invocations"))?;
    Ok("10 invocations byte-identical".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("table fixtures", table_fixtures, Duration::from_secs(1)),
        ("conjugated relator pair", conjugated_relator_pair, Duration::from_secs(1)),
        ("first derived grid", first_derived_grid, Duration::from_secs(5)),
        ("q_N oracle", qn_oracle, Duration::from_secs(5)),
        ("lemma suite", lemma_suite, Duration::from_secs(60)),
        ("orbit closed forms", orbit_closed_forms, Duration::from_secs(30)),
        ("decider fuzz", decider_fuzz, Duration::from_secs(60)),
        ("oracle consistency", oracle_consistency, Duration::from_secs(60)),
        ("CLI goldens", cli_goldens, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let elapsed = start.elapsed();
        let result = result.and_then(|d| {
            if elapsed > limit {
                Err(format!("{d}; took {elapsed:.2?}, limit {limit:?}"))
            } else {
                Ok(d)
            }
        });
        match result {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
