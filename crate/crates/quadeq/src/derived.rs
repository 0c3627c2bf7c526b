//! The first and second derived equations of the mixed cases.
//!
//! The first derived equation `(1 − δȳ)·x̃ = 1 + ϑv̄` lives in `Z[π]`; its
//! solutions are enumerated in closed form together with representative
//! words. The second derived equation lives in `Q` and is only decided.

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{table_row, RowOutcome};
use crate::error::{Error, Result};
use crate::fgword::{relator, BasisTag, EquationSpec, Gen, Sign, SolutionClass, Word};
use crate::grind::{alt_geom_ratio, geom_ratio, q_n, Domain, RingElement};
use crate::orbits::{ell_max, mu, ActionSpec, Augmented};
use crate::quot_q::{p_q, q_divisible_by_two};
use crate::surface::{project, PiElement};

/// The four mixed families, each with `ϑ = −1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum MixedKind {
    /// δ = +1, ε = −1, non-faithful, `v̄ = β̄^{2n}`.
    Eq2NF { n: i64 },
    /// δ = −1, ε = +1, non-faithful, `v̄ = ᾱ^{2m}β̄^{2n}`.
    Eq3NF { m: i64, n: i64 },
    /// δ = −1, ε = −1, faithful, `v̄ = β̄^{2n}`.
    Eq4F { n: i64 },
    /// δ = −1, ε = −1, non-faithful, `v̄ = ᾱ^{2m}β̄^{4n}`.
    Eq4NF { m: i64, n: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MixedCase {
    pub kind: MixedKind,
    /// `gcd(m, n)` when `|m| + |n| > 0`.
    pub d: Option<i64>,
    /// The primitive root `c̄` with `v̄ = c̄^{2d}`.
    pub c: Option<PiElement>,
    /// Greatest odd divisor of `n` when `n ≠ 0`.
    pub ell_max: Option<i64>,
    /// `n / ℓ_max`.
    pub mu: Option<i64>,
    /// The 2-adic valuation of `n`.
    pub s: Option<u32>,
}

impl MixedCase {
    pub fn new(kind: MixedKind) -> Self {
        let (d, c) = match kind {
            MixedKind::Eq3NF { m, n } | MixedKind::Eq4NF { m, n } if m != 0 || n != 0 => {
                let d = m.gcd(&n);
                let c = match kind {
                    MixedKind::Eq3NF { .. } => PiElement::new(Sign::Plus, m / d, n / d),
                    _ => PiElement::new(Sign::Minus, m / d, 2 * n / d),
                };
                (Some(d), Some(c))
            }
            _ => (None, None),
        };
        let (ell, mu_, s) = match kind {
            MixedKind::Eq2NF { n } | MixedKind::Eq4F { n } if n != 0 => {
                (Some(ell_max(n)), Some(mu(n)), Some(n.unsigned_abs().trailing_zeros()))
            }
            _ => (None, None, None),
        };
        MixedCase { kind, d, c, ell_max: ell, mu: mu_, s }
    }

    pub fn delta(&self) -> Sign {
        match self.kind {
            MixedKind::Eq2NF { .. } => Sign::Plus,
            _ => Sign::Minus,
        }
    }

    pub fn epsilon(&self) -> Sign {
        match self.kind {
            MixedKind::Eq3NF { .. } => Sign::Plus,
            _ => Sign::Minus,
        }
    }

    pub fn solution_class(&self) -> SolutionClass {
        match self.kind {
            MixedKind::Eq4F { .. } => SolutionClass::Faithful,
            _ => SolutionClass::NonFaithful,
        }
    }

    pub fn spec(&self) -> EquationSpec {
        EquationSpec::adapted(self.delta(), self.epsilon(), Sign::Minus, self.solution_class())
    }

    pub fn vbar(&self) -> PiElement {
        let e = self.epsilon();
        match self.kind {
            MixedKind::Eq2NF { n } | MixedKind::Eq4F { n } => PiElement::new(e, 0, 2 * n),
            MixedKind::Eq3NF { m, n } => PiElement::new(e, 2 * m, 2 * n),
            MixedKind::Eq4NF { m, n } => PiElement::new(e, 2 * m, 4 * n),
        }
    }

    /// The table row naming the family.
    pub fn label(&self) -> &'static str {
        match self.kind {
            MixedKind::Eq2NF { .. } => "2d",
            MixedKind::Eq3NF { .. } => "3c",
            MixedKind::Eq4F { .. } => "4c",
            MixedKind::Eq4NF { .. } => "4e",
        }
    }

    /// Recovers the family from the equation and `v̄` (adapted basis).
    pub fn detect(spec: &EquationSpec, vbar: &PiElement) -> Result<MixedCase> {
        let row = table_row(spec, vbar);
        if row.outcome != RowOutcome::Mixed {
            return Err(Error::NotMixedCase(row.label()));
        }
        let kind = match (row.table, row.row) {
            (2, "2d") => MixedKind::Eq2NF { n: vbar.s / 2 },
            (2, "3c") => MixedKind::Eq3NF { m: vbar.r / 2, n: vbar.s / 2 },
            (1, "4c") => MixedKind::Eq4F { n: vbar.s / 2 },
            (2, "4e") => MixedKind::Eq4NF { m: vbar.r / 2, n: vbar.s / 4 },
            _ => unreachable!("mixed rows are exhausted above"),
        };
        let case = MixedCase::new(kind);
        debug_assert_eq!(case.vbar(), *vbar);
        Ok(case)
    }

    fn basis(&self) -> BasisTag {
        BasisTag::adapted(self.epsilon())
    }

    /// A word projecting to `c̄`.
    fn c_word(&self) -> Option<Word> {
        self.c.map(|c| c.to_word())
    }
}

/// `c_L = β·α^{−L}`, projecting to `ᾱ^L β̄` on the Klein bottle.
fn c_l_word(l: i64) -> Word {
    Word::from_syllables(BasisTag::adapted(Sign::Minus), [(Gen::G2, 1), (Gen::G1, -l)])
}

/// `u·B^k·u⁻¹`.
fn b_conj(u: &Word, k: i64) -> Word {
    let b = relator(u.epsilon()).pow(k);
    u.mul_unchecked(&b).mul_unchecked(&u.inv())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjData {
    pub v: Word,
    pub vbar: PiElement,
    pub case: MixedCase,
    pub v0: Word,
    /// `q_n(v0⁻¹·v)`.
    #[serde(rename = "V")]
    pub big_v: RingElement,
}

/// Splits `v = v0·∏ B_{v_i}^{n_i}` with the canonical `v0` of the family.
pub fn analyze_v(spec: &EquationSpec, v: &Word) -> Result<ConjData> {
    if v.epsilon() != spec.epsilon {
        return Err(Error::EpsilonMismatch);
    }
    let v = v.change_basis(BasisTag::adapted(spec.epsilon))?;
    let vbar = project(&v);
    let case = MixedCase::detect(spec, &vbar)?;
    let v0 = match case.kind {
        MixedKind::Eq2NF { n } | MixedKind::Eq4F { n } => Word::from_syllables(case.basis(), [(Gen::G2, 2 * n)]),
        _ => match (case.c_word(), case.d) {
            (Some(c), Some(d)) => c.pow(2 * d),
            _ => Word::identity(case.basis()),
        },
    };
    let big_v = q_n(&v0.inv().mul(&v)?)?;
    Ok(ConjData { v, vbar, case, v0, big_v })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FirstSolution {
    #[serde(rename = "L")]
    pub l: Option<i64>,
    pub ell: i64,
    pub xtilde: RingElement,
    pub ybar: PiElement,
    pub x_word: Word,
    pub y_word: Word,
}

impl FirstSolution {
    /// Checks `(1 − δȳ)·x̃ = 1 + ϑv̄` and the two representative identities.
    pub fn check(&self, case: &MixedCase) -> Result<bool> {
        let e = case.epsilon();
        let one = RingElement::one(e);
        let lhs = one
            .sub(&RingElement::monomial(self.ybar, case.delta().value()))?
            .mul(&self.xtilde)?;
        let rhs = one.sub(&RingElement::monomial(case.vbar(), 1))?;
        Ok(lhs == rhs && q_n(&self.x_word)? == self.xtilde && project(&self.y_word) == self.ybar)
    }
}

/// `∏_k B_{c^{kℓ}}^{±1}` for the listed `(k, sign)` factors.
fn b_product(c: &Word, ell: i64, factors: impl IntoIterator<Item = (i64, i64)>) -> Word {
    let mut out = Word::identity(c.basis());
    for (k, sign) in factors {
        out = out.mul_unchecked(&b_conj(&c.pow(k * ell), sign));
    }
    out
}

/// Factors of `(1 − c^{mℓ})/(1 − c^ℓ)`, `m = 2n/ℓ`.
fn geometric_factors(m: i64) -> Vec<(i64, i64)> {
    if m > 0 {
        (0..m).rev().map(|k| (k, 1)).collect()
    } else {
        (m..0).map(|k| (k, -1)).collect()
    }
}

/// Factors of `(1 − c^{mℓ})/(1 + c^ℓ)`, `m` even: even powers first, then odd.
fn alternating_factors(m: i64) -> Vec<(i64, i64)> {
    if m > 0 {
        let evens = (0..m).rev().filter(|k| k % 2 == 0).map(|k| (k, 1));
        let odds = (1..m).step_by(2).map(|k| (k, -1));
        evens.chain(odds).collect()
    } else {
        let evens = (m..0).step_by(2).map(|k| (k, -1));
        let odds = (m + 1..0).rev().step_by(2).map(|k| (k, 1));
        evens.chain(odds).collect()
    }
}

/// Odd divisors of `n` of both signs, ascending by absolute value.
fn odd_divisors(n: i64) -> Vec<i64> {
    let n = n.abs();
    let mut out = Vec::new();
    for k in (1..=n).step_by(2) {
        if n % k == 0 {
            out.push(k);
            out.push(-k);
        }
    }
    out
}

fn divisors(n: i64) -> Vec<i64> {
    let n = n.abs();
    (1..=n).filter(|k| n % k == 0).flat_map(|k| [k, -k]).collect()
}

/// All solutions of the first derived equation within `bound`.
pub fn first_solutions(case: &MixedCase, vbar: &PiElement, bound: i64) -> Result<Vec<FirstSolution>> {
    if *vbar != case.vbar() {
        return Err(Error::CaseMismatch(format!("v̄ = {vbar} does not match {}", case.label())));
    }
    let bound = bound.max(1);
    let e = case.epsilon();
    let mut out = Vec::new();
    match case.kind {
        MixedKind::Eq2NF { n } | MixedKind::Eq4F { n } => {
            let ells: Vec<i64> = if n == 0 {
                (-bound..=bound).filter(|l| l % 2 != 0).collect()
            } else {
                odd_divisors(n)
            };
            for l in -bound..=bound {
                let c = c_l_word(l);
                let cbar = project(&c);
                for &ell in &ells {
                    let (xtilde, x_word) = if n == 0 {
                        (RingElement::zero(e, Domain::IntegerCoeff), Word::identity(case.basis()))
                    } else if case.delta() == Sign::Plus {
                        let m = 2 * n / ell;
                        (geom_ratio(&cbar, 2 * n, ell)?, b_product(&c, ell, geometric_factors(m)))
                    } else {
                        let m = 2 * n / ell;
                        (alt_geom_ratio(&cbar, 2 * n, ell)?, b_product(&c, ell, alternating_factors(m)))
                    };
                    out.push(FirstSolution {
                        l: Some(l),
                        ell,
                        xtilde,
                        ybar: cbar.pow(ell),
                        x_word,
                        y_word: c.pow(ell),
                    });
                }
            }
        }
        MixedKind::Eq3NF { .. } | MixedKind::Eq4NF { .. } => match (case.c_word(), case.d, case.c) {
            (Some(c), Some(d), Some(cbar)) => {
                for ell in divisors(d) {
                    let m = 2 * d / ell;
                    out.push(FirstSolution {
                        l: None,
                        ell,
                        xtilde: alt_geom_ratio(&cbar, 2 * d, ell)?,
                        ybar: cbar.pow(ell),
                        x_word: b_product(&c, ell, alternating_factors(m)),
                        y_word: c.pow(ell),
                    });
                }
            }
            _ => {
                // Any ȳ with the right orientation; x̃ = 0.
                let step = if matches!(case.kind, MixedKind::Eq4NF { .. }) { 2 } else { 1 };
                for l in -bound..=bound {
                    for ell in -bound..=bound {
                        let y_word = Word::from_syllables(case.basis(), [(Gen::G1, l), (Gen::G2, step * ell)]);
                        out.push(FirstSolution {
                            l: Some(l),
                            ell,
                            xtilde: RingElement::zero(e, Domain::IntegerCoeff),
                            ybar: project(&y_word),
                            x_word: Word::identity(case.basis()),
                            y_word,
                        });
                    }
                }
            }
        },
    }
    Ok(out)
}

/// The exponent `k` with `v̄ = ȳ^k` and `ϑ·δ^k = −1`, if any.
pub fn rank1_check(vbar: &PiElement, ybar: &PiElement, delta: Sign, theta: Sign) -> Option<i64> {
    if vbar.epsilon != ybar.epsilon {
        return None;
    }
    let ok = |k: i64| theta * delta.pow(k) == Sign::Minus;
    if ybar.is_identity() {
        if !vbar.is_identity() {
            return None;
        }
        return [0, 1].into_iter().find(|&k| ok(k));
    }
    // The β-exponent is additive, and so is the α-exponent on ⟨ᾱ⟩.
    let k = if ybar.s != 0 {
        if vbar.s % ybar.s != 0 {
            return None;
        }
        vbar.s / ybar.s
    } else {
        if vbar.s != 0 || vbar.r % ybar.r != 0 {
            return None;
        }
        vbar.r / ybar.r
    };
    (ybar.pow(k) == *vbar && ok(k)).then_some(k)
}

/// Why the second derived equation has no solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    /// The violated condition.
    pub condition: String,
    /// An orbit base or element witnessing the violation.
    pub base: Option<PiElement>,
    pub detail: String,
    /// The searched `L` window when the verdict rests on it.
    pub window: Option<(i64, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum DecideResult {
    Solvable {
        ell: Option<i64>,
        #[serde(rename = "L")]
        l: Option<i64>,
        trace: Vec<String>,
    },
    Unsolvable { certificate: Certificate },
}

impl DecideResult {
    pub fn is_solvable(&self) -> bool {
        matches!(self, DecideResult::Solvable { .. })
    }
}

fn unsolvable(condition: &str, base: Option<PiElement>, detail: String, window: Option<(i64, i64)>) -> DecideResult {
    DecideResult::Unsolvable { certificate: Certificate { condition: condition.into(), base, detail, window } }
}

/// `β̄^q ᾱ^p` on the Klein bottle.
fn beta_first(q: i64, p: i64) -> PiElement {
    PiElement::new(Sign::Minus, (-1i64).pow((q.rem_euclid(2)) as u32) * p, q)
}

/// `P(L)`: the length of the forced defective pattern.
pub fn pattern_length(l: i64) -> i64 {
    if l >= 1 {
        l - 1
    } else {
        -l
    }
}

/// Decides the second derived equation of `case` for the parameter `V`.
pub fn second_decide(case: &MixedCase, big_v: &RingElement, l_window_override: Option<i64>) -> Result<DecideResult> {
    if big_v.epsilon() != case.epsilon() {
        return Err(Error::CaseMismatch(format!("V lives over ε = {}", big_v.epsilon())));
    }
    if big_v.domain() != Domain::IntegerCoeff {
        return Err(Error::CaseMismatch("V must have integer coefficients".into()));
    }
    match case.kind {
        MixedKind::Eq3NF { .. } | MixedKind::Eq4NF { .. } => match (case.c, case.d) {
            (Some(c), Some(d)) => decide_hat_abs(c.pow(d), d, big_v),
            _ => {
                let q = p_q(&big_v.reduce_mod2());
                Ok(if q.is_zero() {
                    DecideResult::Solvable { ell: None, l: None, trace: vec!["p_Q'(V') = 0".into()] }
                } else {
                    unsolvable("p_Q'(V') = 0", None, format!("p_Q'(V') = {q}"), None)
                })
            }
        },
        MixedKind::Eq2NF { n: 0 } => {
            let q = p_q(big_v);
            Ok(if q.is_zero() {
                DecideResult::Solvable { ell: Some(1), l: Some(0), trace: vec!["p_Q(V) = 0".into()] }
            } else {
                unsolvable("p_Q(V) = 0", None, format!("p_Q(V) = {q}"), None)
            })
        }
        MixedKind::Eq4F { n: 0 } => {
            let q = p_q(big_v);
            Ok(if q_divisible_by_two(&q)? {
                DecideResult::Solvable { ell: Some(1), l: Some(0), trace: vec!["2 | p_Q(V)".into()] }
            } else {
                unsolvable("2 | p_Q(V)", None, format!("p_Q(V) = {q}"), None)
            })
        }
        MixedKind::Eq2NF { n } => decide_n(n, big_v.clone(), l_window_override),
        MixedKind::Eq4F { n } => decide_n(n, big_v.reduce_mod2(), l_window_override),
    }
}

/// Every orbit of `⟨ū, i⟩` other than that of 1 must carry even mass.
fn decide_hat_abs(u: PiElement, d: i64, big_v: &RingElement) -> Result<DecideResult> {
    let action = ActionSpec::HatAbs { u };
    let vp = big_v.reduce_mod2();
    let support: Vec<PiElement> = vp.terms().keys().copied().collect();
    let one = PiElement::identity(u.epsilon);
    let classes = action.orbit_classes(&support)?;
    let mut trace = vec![format!("u = {u}; {} orbit(s) meet supp(V')", classes.len())];
    for cls in &classes {
        let base = cls[0];
        if action.same_orbit(&one, &base)? {
            trace.push(format!("orbit of 1 via {base}: unconstrained"));
            continue;
        }
        let parity = action.augment(&vp, &base)?.parity();
        if parity != 0 {
            return Ok(unsolvable(
                "hat augmentation vanishes off the orbit of 1",
                Some(base),
                format!("orbit of {base} under <u = {u}, inversion> has odd mass"),
                None,
            ));
        }
        trace.push(format!("orbit of {base}: even"));
    }
    Ok(DecideResult::Solvable { ell: Some(d), l: None, trace })
}

/// The default half-width of the `L` window for `V'` and `n`.
pub fn default_window(n: i64, big_v: &RingElement) -> i64 {
    2 * big_v.alpha_radius() + n.abs() + 2
}

/// Candidate `L` values ordered by `(|L|, L)`.
fn window_order(b: i64) -> Vec<i64> {
    let mut ls: Vec<i64> = (-b..=b + 1).collect();
    ls.sort_by_key(|&l| (l.abs(), l));
    ls
}

struct Violation {
    condition: &'static str,
    base: PiElement,
    detail: String,
}

fn decide_n(n: i64, vp: RingElement, l_window_override: Option<i64>) -> Result<DecideResult> {
    let ell = ell_max(n);
    let r = vp.alpha_radius();
    let mut trace = vec![format!("ℓ_max = {ell}, R_α = {r}")];
    if n % 2 == 0 {
        if let Some(v) = check_r_chains(n, ell, r, &vp)? {
            return Ok(unsolvable(v.condition, Some(v.base), v.detail, None));
        }
        trace.push(format!("r-chains hold for 1 ≤ r < {}", n.abs() / ell));
    }
    let b = default_window(n, &vp).max(l_window_override.unwrap_or(0));
    let order = window_order(b);
    let results: Vec<Result<Option<Violation>>> = order.par_iter().map(|&l| check_l(n, ell, l, r, &vp)).collect();
    let mut first_failure = None;
    for (&l, res) in order.iter().zip(results) {
        match res? {
            None => {
                trace.push(format!("L = {l} passes; window [{}, {}]", -b, b + 1));
                trace.push(if n % 2 != 0 {
                    "window complete: P(L) ≤ R_α is forced".into()
                } else {
                    "window complete: its ends are in the stabilized range".into()
                });
                return Ok(DecideResult::Solvable { ell: Some(ell), l: Some(l), trace });
            }
            Some(v) if first_failure.is_none() => first_failure = Some((l, v)),
            Some(_) => {}
        }
    }
    let (l, v) = first_failure.expect("window is nonempty");
    Ok(unsolvable(
        "no L in the window satisfies the L-conditions",
        Some(v.base),
        format!("at L = {l}: {}: {}", v.condition, v.detail),
        Some((-b, b + 1)),
    ))
}

/// Equal twisted augmentations along `h = β̄^{2ℓr}·g`, `n` even.
fn check_r_chains(n: i64, ell: i64, r_alpha: i64, vp: &RingElement) -> Result<Option<Violation>> {
    let action = ActionSpec::Tilde { n };
    let mut bases = Vec::new();
    for q in (-ell + 1..ell).filter(|q| q % 2 == 0) {
        for p in 1..=r_alpha {
            bases.push(beta_first(q, p));
        }
        if q > 0 {
            bases.push(beta_first(q, 0));
        }
    }
    for q in (1..=ell).filter(|q| q % 2 != 0) {
        for p in -r_alpha..=r_alpha {
            bases.push(beta_first(q, p));
        }
    }
    for g in bases {
        if !action.element_class(&g)?.g_tilde_regular {
            continue;
        }
        let a = action.augment(vp, &g)?;
        for rr in 1..n.abs() / ell {
            let h = PiElement::new(Sign::Minus, 0, 2 * ell * rr).mul(&g)?;
            if !action.element_class(&h)?.g_tilde_regular {
                continue;
            }
            let b = action.augment(vp, &h)?;
            if a != b {
                return Ok(Some(Violation {
                    condition: "r-chain equality of twisted augmentations",
                    base: g,
                    detail: format!("{g} gives {} but {h} gives {}", show(a), show(b)),
                }));
            }
        }
    }
    Ok(None)
}

fn show(a: Augmented) -> String {
    match a {
        Augmented::Signed(x) => x.to_string(),
        Augmented::Parity(p) => format!("{p} (mod 2)"),
    }
}

/// The pair conditions for a fixed `L`.
fn check_l(n: i64, ell: i64, l: i64, r_alpha: i64, vp: &RingElement) -> Result<Option<Violation>> {
    let t_hat = PiElement::new(Sign::Minus, l, ell);
    let p_max = r_alpha + l.abs() + 1;
    let even_qs: Vec<i64> = (1..ell).filter(|q| q % 2 == 0).collect();
    if n % 2 == 0 {
        let action = ActionSpec::TildeL { n, l };
        for &q in &even_qs {
            for p in 0..=p_max {
                let g = beta_first(q, p);
                let h = t_hat.mul(&g)?;
                let (a, b) = (action.augment(vp, &g)?, action.augment(vp, &h)?);
                if a != b {
                    return Ok(Some(Violation {
                        condition: "pair equality of twisted augmentations",
                        base: g,
                        detail: format!("{g} gives {} but {h} gives {}", show(a), show(b)),
                    }));
                }
            }
        }
        return Ok(None);
    }
    let action = ActionSpec::HatL { n, l };
    for &q in &even_qs {
        for p in 0..=p_max {
            let g = beta_first(q, p);
            let a = action.augment(vp, &g)?;
            if !matches!(a, Augmented::Signed(0) | Augmented::Parity(0)) {
                return Ok(Some(Violation {
                    condition: "vanishing hat augmentation",
                    base: g,
                    detail: format!("orbit of {g} gives {}", show(a)),
                }));
            }
        }
    }
    let pl = pattern_length(l);
    for m in 1..=pl.max(p_max) + 1 {
        let g = PiElement::new(Sign::Minus, m, 0);
        let got = action.augment(vp, &g)?.parity();
        let want = u8::from(m <= pl);
        if got != want {
            return Ok(Some(Violation {
                condition: "defective pattern",
                base: g,
                detail: format!("orbit of {g} has parity {got}, expected {want} (P(L) = {pl})"),
            }));
        }
    }
    Ok(None)
}
