//! Top-level classifier over the table branches and mixed cases.

use serde::Serialize;

use crate::derived::{analyze_v, second_decide, Certificate, DecideResult, MixedCase};
use crate::error::{Error, Result};
use crate::fgword::{
    parse_word, relator, verify_solution, BasisTag, EquationSpec, Frame, Gen, Sign, SolutionCheck, SolutionClass, Word,
};
use crate::surface::{project, PiElement};
use crate::wicks::{wicks_search, DEFAULT_BUDGET};

/// What a table row says about its family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowOutcome {
    /// An explicit solution formula.
    Witness,
    /// No solution; `abelian` when the exponent sums already obstruct.
    Empty { abelian: bool },
    /// Decided per word by the derived equations.
    Mixed,
    /// Faithful class with `w(v̄) = ϑ`, which the tables do not cover.
    OutOfScope,
}

/// A row of the faithful (1) or non-faithful (2) table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub table: u8,
    pub row: &'static str,
    pub outcome: RowOutcome,
}

impl TableRow {
    pub fn label(&self) -> String {
        format!("table {} ({})", self.table, self.row)
    }
}

/// Locates `(spec, v̄)` in the tables; `vbar` is taken in the adapted basis.
pub fn table_row(spec: &EquationSpec, vbar: &PiElement) -> TableRow {
    use RowOutcome::*;
    use Sign::{Minus as M, Plus as P};
    let w = vbar.w_eps();
    let row = |table, row, outcome| TableRow { table, row, outcome };
    match spec.solution_class {
        SolutionClass::Faithful => match (spec.delta, spec.epsilon) {
            (M, P) => row(1, "3", Empty { abelian: false }),
            _ if w == spec.theta => row(1, "0", OutOfScope),
            (P, P) => row(1, "1", Witness),
            (P, M) => match spec.theta {
                M => row(1, "2a", Witness),
                P => row(1, "2b", Empty { abelian: true }),
            },
            (M, M) => match spec.theta {
                P => row(1, "4a", Witness),
                M if vbar.r != 0 => row(1, "4b", Empty { abelian: false }),
                M => row(1, "4c", Mixed),
            },
        },
        SolutionClass::NonFaithful => match (spec.delta, spec.epsilon) {
            (P, P) => row(2, "1", Empty { abelian: false }),
            (P, M) => match (spec.theta, w) {
                (P, _) => row(2, "2a", Empty { abelian: true }),
                (M, M) => row(2, "2b", Witness),
                (M, P) if vbar.r != 0 => row(2, "2c", Empty { abelian: false }),
                (M, P) => row(2, "2d", Mixed),
            },
            (M, P) => match spec.theta {
                P => row(2, "3a", Witness),
                M if vbar.r % 2 != 0 || vbar.s % 2 != 0 => row(2, "3b", Empty { abelian: false }),
                M => row(2, "3c", Mixed),
            },
            (M, M) => match (spec.theta, w) {
                (P, M) => row(2, "4a", Empty { abelian: false }),
                (P, P) => row(2, "4b", Witness),
                (M, M) => row(2, "4c", Empty { abelian: false }),
                (M, P) if vbar.s % 4 != 0 || vbar.r % 2 != 0 => row(2, "4d", Empty { abelian: false }),
                (M, P) => row(2, "4e", Mixed),
            },
        },
    }
}

/// Search limits shared by the classifier and the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budgets {
    /// Maximal cyclic length of the right-hand side for the Wicks search.
    pub wicks_len: usize,
    /// Bound on enumerated first-derived solutions.
    pub enum_bound: i64,
    #[serde(rename = "L_window_override")]
    pub l_window_override: Option<i64>,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { wicks_len: DEFAULT_BUDGET, enum_bound: 8, l_window_override: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Reason {
    AbelianObstruction,
    TableBranch { case: String },
    SecondDerivedUnsolvable { certificate: Certificate },
    WicksExhaustive,
}

/// A solution pair in the frame of the equation, with where it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub first: Word,
    pub second: Word,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Exists { witness: Witness, verified: bool },
    NotExists { #[serde(flatten)] reason: Reason },
    Undetermined { second_derived: Vec<String>, searched: Budgets },
}

impl Verdict {
    pub fn is_not_exists(&self) -> bool {
        matches!(self, Verdict::NotExists { .. })
    }

    pub fn is_exists(&self) -> bool {
        matches!(self, Verdict::Exists { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub row: TableRow,
    /// `v̄` in the adapted basis.
    pub vbar: PiElement,
    pub mixed: Option<MixedCase>,
    pub verdict: Verdict,
}

fn alpha(eps: Sign) -> Word {
    Word::generator(BasisTag::adapted(eps), Gen::G1)
}

fn beta(eps: Sign) -> Word {
    Word::generator(BasisTag::adapted(eps), Gen::G2)
}

/// The explicit pair of a witness row of Table 1 or 2, adapted frame.
pub fn table_witness(row: &TableRow, v: &Word) -> Option<(Word, Word)> {
    let eps = v.epsilon();
    let b = relator(eps);
    match (row.table, row.row) {
        (1, "1") | (1, "2a") | (2, "2b") => Some((v.mul_unchecked(&b.inv()).mul_unchecked(&v.inv()), v.inv())),
        (1, "4a") | (2, "4b") => Some((b.clone(), b.inv().mul_unchecked(v))),
        (2, "3a") => {
            let (a, bb) = (alpha(eps), beta(eps));
            Some((Word::comm(&a, &bb).ok()?, Word::comm(&bb, &a).ok()?.mul_unchecked(v)))
        }
        _ => None,
    }
}

/// `(r, j)` with `w = r^j`, `r` not a proper power and `j ≥ 1`; `None` for
/// the identity.
pub fn primitive_root(w: &Word) -> Option<(Word, i64)> {
    if w.is_identity() {
        return None;
    }
    let (core, t) = w.cyclic_reduce();
    let ls = core.letters();
    let n = ls.len();
    for p in 1..=n {
        if n % p == 0 && (p..n).all(|i| ls[i] == ls[i - p]) {
            let r = Word::from_letters(w.basis(), &ls[..p]);
            return Some((t.mul_unchecked(&r).mul_unchecked(&t.inv()), (n / p) as i64));
        }
    }
    unreachable!("p = n always matches")
}

/// The integer `m` with `w = base^m`, if any.
fn power_of(w: &Word, base: &Word) -> Option<i64> {
    if w.is_identity() {
        return Some(0);
    }
    let (r, j) = primitive_root(w)?;
    if r == *base {
        Some(j)
    } else if r == base.inv() {
        Some(-j)
    } else {
        None
    }
}

/// Candidate pairs of the explicitly solved mixed sub-families (Tables 3
/// and 4) that apply to `v` syntactically, adapted frame.
fn pattern_candidates(spec: &EquationSpec, v: &Word) -> Vec<((Word, Word), &'static str)> {
    let eps = spec.epsilon;
    let b = relator(eps);
    let (a, bt) = (alpha(eps), beta(eps));
    let mut out = Vec::new();
    // Exact shapes first, then the generic power families.
    // v = (αβ)^{2n}.
    let ab = a.mul_unchecked(&bt);
    if let Some(m) = power_of(v, &ab).filter(|m| m % 2 == 0) {
        out.push(((Word::comm(&ab.pow(m), &bt).unwrap(), bt.clone()), "v = (ab)^{2n}"));
    }
    // v = B^m: (1, u) for u of either sign.
    if power_of(v, &b).is_some() {
        let one = Word::identity(BasisTag::adapted(eps));
        out.push(((one.clone(), a.clone()), "v = B^m"));
        out.push(((one, bt.clone()), "v = B^m"));
    }
    // v = B·β^{2n}.
    if let Some(m) = power_of(&b.inv().mul_unchecked(v), &bt).filter(|m| m % 2 == 0) {
        let aba = a.mul_unchecked(&bt).mul_unchecked(&a);
        let x = aba.pow(m).mul_unchecked(&bt.pow(-m));
        let y = bt.pow(m).mul_unchecked(&aba.pow(1 - m));
        out.push(((x, y), "v = B b^{2n}"));
    }
    // v = β²B_α.
    let b2 = bt.pow(2);
    if *v == b2.mul_unchecked(&Word::conj(&a, &b).unwrap()) {
        let conj = |u: &Word, k: i64| Word::conj(u, &b.pow(k)).unwrap();
        let b2a = b2.mul_unchecked(&a);
        let b2a2b = b2.mul_unchecked(&a.pow(2)).mul_unchecked(&bt.inv());
        let x = conj(&b2a, 1).mul_unchecked(&conj(&b2, -1)).mul_unchecked(&conj(&b2a, -1)).mul_unchecked(&conj(&b2a2b, -1));
        let y = b.pow(-2).mul_unchecked(&conj(&a, -1)).mul_unchecked(&a.pow(2)).mul_unchecked(&bt.inv());
        out.push(((x, y), "v = b^2 B_a"));
    }
    // v = u²: two pairs.
    if let Some(u) = v.square_root() {
        let u2 = u.pow(2);
        let p1 = (Word::comm(&u2.mul_unchecked(&b.inv()), &u.inv()).unwrap(), u.inv());
        let p2 = (Word::comm(&u, &b.inv()).unwrap(), b.inv().mul_unchecked(&u).mul_unchecked(&b));
        out.push((p1, "v = u^2"));
        out.push((p2, "v = u^2"));
    }
    // v = u^{2k}, sgn(u) = −1.
    if let Some((r, j)) = primitive_root(v) {
        for k in 1..=j / 2 {
            if j % (2 * k) != 0 {
                continue;
            }
            let u = r.pow(j / (2 * k));
            let ub = u.mul_unchecked(&b);
            out.push(((u.pow(2 * k).mul_unchecked(&ub.pow(-2 * k)), b.inv().mul_unchecked(&u.inv())), "v = u^{2k}"));
            let u = u.inv();
            let ub = u.mul_unchecked(&b);
            out.push(((u.pow(-2 * k).mul_unchecked(&ub.pow(2 * k)), b.inv().mul_unchecked(&u.inv())), "v = u^{2k}"));
        }
    }
    out
}

/// The first pattern pair that solves the equation in the requested class
/// with `x ∈ N`; `spec` and `v` in the adapted frame.
pub fn pattern_witness(spec: &EquationSpec, v: &Word) -> Option<(Word, Word, &'static str)> {
    let want = spec.solution_class == SolutionClass::Faithful;
    pattern_candidates(spec, v).into_iter().find_map(|((x, y), label)| {
        let c = verify_solution(spec, v, &x, &y).ok()?;
        (c.holds && c.faithful == want && c.x_in_n).then_some((x, y, label))
    })
}

fn in_class(spec: &EquationSpec, c: &SolutionCheck) -> bool {
    c.holds && c.faithful == (spec.solution_class == SolutionClass::Faithful)
}

/// Expresses an adapted-frame pair in the frame of `spec`.
fn to_frame(spec: &EquationSpec, x: &Word, y: &Word) -> Result<(Word, Word)> {
    match spec.frame {
        Frame::AdaptedXY => Ok((x.clone(), y.clone())),
        Frame::OriginalZ => spec.xy_to_z(x, y),
    }
}

fn exists(spec: &EquationSpec, v: &Word, x: &Word, y: &Word, source: String) -> Result<Option<Verdict>> {
    let (first, second) = to_frame(spec, x, y)?;
    let c = verify_solution(spec, v, &first, &second)?;
    Ok(in_class(spec, &c).then_some(Verdict::Exists { witness: Witness { first, second, source }, verified: true }))
}

/// Classifies `(spec, v)`; `v` is written in the basis of the frame.
pub fn classify(spec: &EquationSpec, v: &Word, budgets: &Budgets) -> Result<Classification> {
    let adapted = EquationSpec { frame: Frame::AdaptedXY, ..*spec };
    let va = v.change_basis(adapted.basis())?;
    let vbar = project(&va);
    let row = table_row(&adapted, &vbar);
    let done = |verdict, mixed| Ok(Classification { row, vbar, mixed, verdict });

    // (a) A commutator cannot have nonzero exponent sums.
    let rhs = adapted.rhs(&va)?;
    if spec.delta == Sign::Plus && (rhs.exponent_sum(Gen::G1) != 0 || rhs.exponent_sum(Gen::G2) != 0) {
        return done(Verdict::NotExists { reason: Reason::AbelianObstruction }, None);
    }

    // (b) Explicit table rows.
    match row.outcome {
        RowOutcome::Empty { abelian: true } => {
            return done(Verdict::NotExists { reason: Reason::AbelianObstruction }, None);
        }
        RowOutcome::Empty { abelian: false } => {
            return done(Verdict::NotExists { reason: Reason::TableBranch { case: row.label() } }, None);
        }
        RowOutcome::Witness => {
            let (x, y) = table_witness(&row, &va).expect("witness rows have a formula");
            if let Some(verdict) = exists(spec, v, &x, &y, row.label())? {
                return done(verdict, None);
            }
            return Err(Error::ExtractionFailed(format!("{} witness failed for {v}", row.label())));
        }
        RowOutcome::Mixed | RowOutcome::OutOfScope => {}
    }

    // (c) Mixed rows: the second derived equation decides non-existence.
    let mut trace = Vec::new();
    let mut mixed = None;
    if row.outcome == RowOutcome::Mixed {
        let data = analyze_v(&adapted, &va)?;
        mixed = Some(data.case);
        match second_decide(&data.case, &data.big_v, budgets.l_window_override)? {
            DecideResult::Unsolvable { certificate } => {
                return done(Verdict::NotExists { reason: Reason::SecondDerivedUnsolvable { certificate } }, mixed);
            }
            DecideResult::Solvable { trace: t, .. } => trace = t,
        }
        if let Some((x, y, label)) = pattern_witness(&adapted, &va) {
            if let Some(verdict) = exists(spec, v, &x, &y, format!("pattern {label}"))? {
                return done(verdict, mixed);
            }
        }
    }

    // (d) Wicks forms.
    match wicks_search(&adapted, &va, budgets.wicks_len) {
        Ok(search) => {
            let want = adapted.solution_class == SolutionClass::Faithful;
            // Solutions with x ∈ N first: those satisfy the rank-one condition.
            let found = search.of_class(want).find(|s| s.x_in_n).or_else(|| search.of_class(want).next());
            if let Some(s) = found {
                let source = match (s.shift, s.form) {
                    (Some(i), Some(f)) => format!("wicks {f:?} at shift {i}"),
                    _ => "wicks degenerate form".to_string(),
                };
                if let Some(verdict) = exists(spec, v, &s.first, &s.second, source)? {
                    return done(verdict, mixed);
                }
            }
            // Canonical solutions exist but all lie in the other class.
            if row.outcome == RowOutcome::Mixed && search.exhaustive && !search.solutions.is_empty() {
                return done(Verdict::NotExists { reason: Reason::WicksExhaustive }, mixed);
            }
            trace.push(format!("wicks: {} matches, none in the class", search.matches));
        }
        Err(Error::BudgetExceeded { len, budget }) => {
            trace.push(format!("wicks: rhs length {len} over budget {budget}"));
        }
        Err(e) => return Err(e),
    }
    done(Verdict::Undetermined { second_derived: trace, searched: *budgets }, mixed)
}

/// A fixture row: an explicit table cell instantiated at concrete values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fixture {
    pub id: String,
    pub spec: EquationSpec,
    pub v: Word,
    pub first: Word,
    pub second: Word,
    pub faithful: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

fn parse(s: &str, basis: BasisTag) -> Word {
    parse_word(s, basis).expect("fixture words parse")
}

fn fixture(id: String, spec: EquationSpec, v: Word, pair: (Word, Word)) -> Fixture {
    let faithful = spec.solution_class == SolutionClass::Faithful;
    Fixture { id, spec, v, first: pair.0, second: pair.1, faithful }
}

/// Sample parameter words of a given orientation sign.
fn sample_words(eps: Sign, sign: Sign) -> Vec<Word> {
    let pool = ["a", "b", "a b", "b b", "a^2 b", "a b a B", "b A b", "a b^3", "A b a", "b a^2 B"];
    pool.iter()
        .map(|s| parse(s, BasisTag::adapted(eps)))
        .filter(|w| w.sgn() == sign)
        .collect()
}

/// Parameter `u` of the mixed-table rows, filtered by `w_ε(u)`.
fn u_pool(eps: Sign, sign: Sign) -> Vec<Word> {
    let pool = ["b", "a b", "a^2 b", "a", "b b", "a b^2"];
    pool.iter()
        .map(|s| parse(s, BasisTag::adapted(eps)))
        .filter(|w| w.sgn() == sign)
        .collect()
}

/// Every explicit cell of Tables 0–4, instantiated.
pub fn table_fixtures() -> Vec<Fixture> {
    use Sign::{Minus as M, Plus as P};
    use SolutionClass::{Faithful as F, NonFaithful as NF};
    let mut out = Vec::new();
    let zspec = |d, e, t| EquationSpec { delta: d, epsilon: e, theta: t, solution_class: F, frame: Frame::OriginalZ };
    let cl = |e, s: &str| parse(s, BasisTag::classic(e));

    // Table 0, classic basis.
    type Row = (&'static str, (Sign, Sign, Sign), String, String, String);
    let t0: Vec<Row> = {
        let mut rows = vec![
            ("(1)a", (P, P, P), "a".into(), "a^2".into(), "b".into()),
            ("(1)b", (P, P, P), "A".into(), "b A B A B".into(), "b a^2 B".into()),
            ("(4)a", (M, M, P), "a b".into(), "a b a".into(), "b".into()),
            ("(4)b", (M, M, P), "(a b)^-1".into(), "B a b^3".into(), "b^-2 a b^2".into()),
        ];
        for n in [1, 3, -1] {
            rows.push(("(2)a", (P, M, M), format!("a^{n}"), format!("a^{n} b"), "b^-2".into()));
            rows.push(("(4)e", (M, M, P), format!("a^{n} b"), format!("a^{n} b a^{}", 2 - n), "b".into()));
            rows.push(("(4)f", (M, M, M), format!("a^{n}"), format!("a^{n} B a^{}", -n), "b".into()));
        }
        rows
    };
    for (id, (d, e, t), v, z1, z2) in t0 {
        out.push(fixture(format!("table 0 {id} v={v}"), zspec(d, e, t), cl(e, &v), (cl(e, &z1), cl(e, &z2))));
    }

    // Tables 1 and 2: any v of the row's sign.
    let rows12: [(u8, &str, Sign, Sign, Sign, SolutionClass, Sign); 6] = [
        (1, "1", P, P, M, F, P),
        (1, "2a", P, M, M, F, P),
        (1, "4a", M, M, P, F, M),
        (2, "2b", P, M, M, NF, M),
        (2, "3a", M, P, P, NF, P),
        (2, "4b", M, M, P, NF, P),
    ];
    for (table, row, d, e, t, class, sign) in rows12 {
        let spec = EquationSpec::adapted(d, e, t, class);
        for v in sample_words(e, sign) {
            let tr = TableRow { table, row, outcome: RowOutcome::Witness };
            let pair = table_witness(&tr, &v).expect("witness row");
            out.push(fixture(format!("table {table} ({row}) v={v}"), spec, v, pair));
        }
    }

    // Tables 3 and 4, adapted basis, ϑ = −1.
    let spec3 = EquationSpec::adapted(M, M, M, F);
    let s2 = EquationSpec::adapted(P, M, M, NF);
    let s3 = EquationSpec::adapted(M, P, M, NF);
    let s4 = EquationSpec::adapted(M, M, M, NF);
    let square_pairs = |u: &Word| {
        let b = relator(u.epsilon());
        let u2 = u.pow(2);
        [
            (Word::comm(&u2.mul_unchecked(&b.inv()), &u.inv()).unwrap(), u.inv()),
            (Word::comm(u, &b.inv()).unwrap(), b.inv().mul_unchecked(u).mul_unchecked(&b)),
        ]
    };
    for (table, row, spec, sign) in [(3, "(4)c", spec3, M), (4, "(3)c", s3, P), (4, "(4)d", s4, P)] {
        let eps = spec.epsilon;
        let pool = if eps == P { u_pool(P, P).into_iter().take(3).collect() } else { u_pool(eps, sign) };
        for u in pool {
            for (i, pair) in square_pairs(&u).into_iter().enumerate() {
                out.push(fixture(format!("table {table} {row}#{} u={u}", i + 1), spec, u.pow(2), pair));
            }
        }
    }
    let (a, b, bt) = (alpha(M), relator(M), beta(M));
    let one = Word::identity(BasisTag::adapted(M));
    for n in [1i64, 2, 3] {
        let ab = a.mul_unchecked(&bt);
        out.push(fixture(format!("table 3 (4)d n={n}"), spec3, ab.pow(2 * n), (Word::comm(&ab.pow(2 * n), &bt).unwrap(), bt.clone())));
        for u in u_pool(M, M) {
            out.push(fixture(format!("table 3 (4)e m={n} u={u}"), spec3, b.pow(n), (one.clone(), u)));
        }
        for u in u_pool(M, P) {
            out.push(fixture(format!("table 4 (4)c m={n} u={u}"), s4, b.pow(n), (one.clone(), u)));
        }
        for u in u_pool(M, M) {
            let ub = u.mul_unchecked(&b);
            let pair = (u.pow(2 * n).mul_unchecked(&ub.pow(-2 * n)), b.inv().mul_unchecked(&u.inv()));
            out.push(fixture(format!("table 4 (2)c k={n} u={u}"), s2, u.pow(2 * n), pair));
        }
        let aba = a.mul_unchecked(&bt).mul_unchecked(&a);
        let pair = (aba.pow(2 * n).mul_unchecked(&bt.pow(-2 * n)), bt.pow(2 * n).mul_unchecked(&aba.pow(1 - 2 * n)));
        out.push(fixture(format!("table 4 (2)d n={n}"), s2, b.mul_unchecked(&bt.pow(2 * n)), pair));
    }
    let v2e = bt.pow(2).mul_unchecked(&Word::conj(&a, &b).unwrap());
    let ((x, y), _) = pattern_candidates(&s2, &v2e).into_iter().find(|(_, l)| *l == "v = b^2 B_a").expect("row (2)e pattern");
    out.push(fixture("table 4 (2)e".into(), s2, v2e, (x, y)));
    out
}

/// Checks every fixture with [`verify_solution`], including the class label
/// and, in the adapted frame, `x ∈ N`.
pub fn verify_tables() -> TableReport {
    let fixtures = table_fixtures();
    let failures = fixtures
        .iter()
        .filter_map(|f| match verify_solution(&f.spec, &f.v, &f.first, &f.second) {
            Ok(c) if c.holds && c.faithful == f.faithful && (!c.x_in_n_applicable || c.x_in_n) => None,
            Ok(c) => Some(format!("{}: {:?}", f.id, c)),
            Err(e) => Some(format!("{}: {e}", f.id)),
        })
        .collect();
    TableReport { checked: fixtures.len(), failures }
}
