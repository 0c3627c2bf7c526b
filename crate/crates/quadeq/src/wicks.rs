//! Wicks forms: positional matches of cyclic permutations of the right-hand
//! side against the quadratic shapes, with the canonical solutions they give.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fgword::{verify_solution, BasisTag, EquationSpec, Frame, Gen, Letter, Sign, Word};

pub const DEFAULT_BUDGET: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum WicksForm {
    /// `a b c a⁻¹ b⁻¹ c⁻¹`.
    OrientableABC,
    /// `d e d⁻¹ e⁻¹`.
    OrientableDE,
    /// `a b c b a c⁻¹`.
    NonOrientableABCBAC,
    /// `a a b c c b⁻¹`.
    NonOrientableAABCC,
}

impl WicksForm {
    pub fn part_names(self) -> &'static [&'static str] {
        match self {
            WicksForm::OrientableDE => &["d", "e"],
            _ => &["a", "b", "c"],
        }
    }

    /// The layout as `(part, inverted)` blocks.
    fn layout(self) -> &'static [(usize, bool)] {
        match self {
            WicksForm::OrientableABC => &[(0, false), (1, false), (2, false), (0, true), (1, true), (2, true)],
            WicksForm::OrientableDE => &[(0, false), (1, false), (0, true), (1, true)],
            WicksForm::NonOrientableABCBAC => &[(0, false), (1, false), (2, false), (1, false), (0, false), (2, true)],
            WicksForm::NonOrientableAABCC => &[(0, false), (0, false), (1, false), (2, false), (2, false), (1, true)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WicksKind {
    /// `[z₁, z₂]`.
    Commutator,
    /// `z₁² z₂²`.
    TwoSquares,
}

impl WicksKind {
    pub fn for_delta(delta: Sign) -> Self {
        match delta {
            Sign::Plus => WicksKind::Commutator,
            Sign::Minus => WicksKind::TwoSquares,
        }
    }

    fn forms(self) -> [WicksForm; 2] {
        match self {
            WicksKind::Commutator => [WicksForm::OrientableABC, WicksForm::OrientableDE],
            WicksKind::TwoSquares => [WicksForm::NonOrientableABCBAC, WicksForm::NonOrientableAABCC],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WicksMatch {
    /// `W_i = V_i U_i` where `W = U_i V_i` and `|U_i| = i`.
    pub shift: usize,
    pub form: WicksForm,
    pub parts: BTreeMap<&'static str, Word>,
    /// `U_i`.
    pub prefix: Word,
    /// `t` with `rhs = t·W·t⁻¹`; identity unless set by the search.
    pub conjugator: Word,
}

impl WicksMatch {
    fn part(&self, i: usize) -> &Word {
        &self.parts[self.form.part_names()[i]]
    }

    /// The shifted word `W_i`, reassembled from the parts.
    pub fn assemble(&self) -> Word {
        let mut out = Word::identity(self.prefix.basis());
        for &(p, inv) in self.form.layout() {
            let w = self.part(p);
            out = out.mul_unchecked(&if inv { w.inv() } else { w.clone() });
        }
        out
    }

    /// `t·U_i`, which conjugates `W_i` back to the right-hand side.
    pub fn total_conjugator(&self) -> Word {
        self.conjugator.mul_unchecked(&self.prefix)
    }
}

/// `v·R^ϑ·v⁻¹·R` in the frame's basis.
pub fn rhs_word(spec: &EquationSpec, v: &Word) -> Result<Word> {
    spec.rhs(v)
}

fn inverse_of(a: &[Letter], b: &[Letter]) -> bool {
    a.len() == b.len() && a.iter().zip(b.iter().rev()).all(|(x, y)| *x == -*y)
}

/// All part lengths fitting the form into `n` letters.
fn splittings(form: WicksForm, n: usize, allow_empty: bool) -> Vec<Vec<usize>> {
    let min = usize::from(!allow_empty);
    let mut out = Vec::new();
    if !n.is_multiple_of(2) {
        return out;
    }
    let h = n / 2;
    match form.part_names().len() {
        2 => {
            for p in min..=h {
                if h - p >= min {
                    out.push(vec![p, h - p]);
                }
            }
        }
        _ => {
            for p in min..=h {
                for q in min..=h - p {
                    if h - p - q >= min {
                        out.push(vec![p, q, h - p - q]);
                    }
                }
            }
        }
    }
    out
}

fn match_at(letters: &[Letter], form: WicksForm, lens: &[usize]) -> Option<Vec<std::ops::Range<usize>>> {
    let mut first: Vec<Option<std::ops::Range<usize>>> = vec![None; lens.len()];
    let mut pos = 0;
    for &(p, inv) in form.layout() {
        let range = pos..pos + lens[p];
        pos = range.end;
        match &first[p] {
            None if !inv => first[p] = Some(range),
            None => return None,
            Some(r0) => {
                let (a, b) = (&letters[r0.clone()], &letters[range]);
                let ok = if inv { inverse_of(a, b) } else { a == b };
                if !ok {
                    return None;
                }
            }
        }
    }
    debug_assert_eq!(pos, letters.len());
    first.into_iter().collect()
}

/// Every positional match of every cyclic shift of `w` against the forms of
/// `kind`, with non-empty parts.
pub fn wicks_decompositions(w: &Word, kind: WicksKind) -> Vec<WicksMatch> {
    wicks_decompositions_with(w, kind, false)
}

/// As [`wicks_decompositions`]; `allow_empty` admits empty parts, with
/// duplicates removed.
pub fn wicks_decompositions_with(w: &Word, kind: WicksKind, allow_empty: bool) -> Vec<WicksMatch> {
    let letters = w.letters();
    let n = letters.len();
    let basis = w.basis();
    let shifts: Vec<Vec<WicksMatch>> = (0..n.max(1))
        .into_par_iter()
        .map(|i| {
            if n == 0 {
                return Vec::new();
            }
            let rotated: Vec<Letter> = letters[i..].iter().chain(&letters[..i]).copied().collect();
            let prefix = Word::from_letters(basis, &letters[..i]);
            let mut found = Vec::new();
            let mut seen = HashSet::new();
            for form in kind.forms() {
                for lens in splittings(form, n, allow_empty) {
                    let Some(ranges) = match_at(&rotated, form, &lens) else { continue };
                    let parts: BTreeMap<&'static str, Word> = form
                        .part_names()
                        .iter()
                        .zip(&ranges)
                        .map(|(name, r)| (*name, Word::from_letters(basis, &rotated[r.clone()])))
                        .collect();
                    if !seen.insert((form, parts.clone())) {
                        continue;
                    }
                    found.push(WicksMatch {
                        shift: i,
                        form,
                        parts,
                        prefix: prefix.clone(),
                        conjugator: Word::identity(basis),
                    });
                }
            }
            found
        })
        .collect();
    let mut out: Vec<WicksMatch> = shifts.into_iter().flatten().collect();
    out.sort_by(|x, y| {
        (x.shift, x.form, x.parts.values().map(|w| w.letters()).collect::<Vec<_>>())
            .cmp(&(y.shift, y.form, y.parts.values().map(|w| w.letters()).collect::<Vec<_>>()))
    });
    out
}

/// `(abca⁻¹)²(ac⁻¹)² = abcbac⁻¹`, checked once on a free basis of rank three
/// inside `F₂`.
fn abcbac_identity_holds() -> bool {
    static CHECK: OnceLock<bool> = OnceLock::new();
    *CHECK.get_or_init(|| {
        let basis = BasisTag::classic(Sign::Plus);
        let w = |s: &[Letter]| Word::from_letters(basis, s);
        // a, bab⁻¹, b²ab⁻² are free.
        let (a, b, c) = (w(&[1]), w(&[2, 1, -2]), w(&[2, 2, 1, -2, -2]));
        let z1 = a.mul_unchecked(&b).mul_unchecked(&c).mul_unchecked(&a.inv());
        let z2 = a.mul_unchecked(&c.inv());
        let lhs = z1.pow(2).mul_unchecked(&z2.pow(2));
        let rhs = a.mul_unchecked(&b).mul_unchecked(&c).mul_unchecked(&b).mul_unchecked(&a).mul_unchecked(&c.inv());
        lhs == rhs
    })
}

/// The canonical pair of a match, conjugated back to solve
/// `[z₁,z₂] = rhs` (orientable forms) or `z₁²z₂² = rhs` (non-orientable).
pub fn extract_solution(m: &WicksMatch) -> Result<(Word, Word)> {
    let (a, b) = (m.part(0), m.part(1));
    let (z1, z2) = match m.form {
        WicksForm::OrientableABC => {
            let c = m.part(2);
            (a.mul_unchecked(b), c.mul_unchecked(b))
        }
        WicksForm::OrientableDE => (a.clone(), b.clone()),
        WicksForm::NonOrientableAABCC => {
            let c = m.part(2);
            (a.clone(), b.mul_unchecked(c).mul_unchecked(&b.inv()))
        }
        WicksForm::NonOrientableABCBAC => {
            if !abcbac_identity_holds() {
                return Err(Error::ExtractionFailed("abcbac identity".into()));
            }
            let c = m.part(2);
            (a.mul_unchecked(b).mul_unchecked(c).mul_unchecked(&a.inv()), a.mul_unchecked(&c.inv()))
        }
    };
    let g = m.total_conjugator();
    let z1 = g.mul_unchecked(&z1).mul_unchecked(&g.inv());
    let z2 = g.mul_unchecked(&z2).mul_unchecked(&g.inv());
    let lhs = match m.form {
        WicksForm::OrientableABC | WicksForm::OrientableDE => Word::comm(&z1, &z2)?,
        _ => z1.pow(2).mul_unchecked(&z2.pow(2)),
    };
    let target = g.mul_unchecked(&m.assemble()).mul_unchecked(&g.inv());
    if lhs != target {
        return Err(Error::ExtractionFailed(format!("{:?} at shift {}", m.form, m.shift)));
    }
    Ok((z1, z2))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WicksSolution {
    pub shift: Option<usize>,
    pub form: Option<WicksForm>,
    /// The pair in the equation's frame.
    pub first: Word,
    pub second: Word,
    pub faithful: bool,
    pub x_in_n: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WicksSearch {
    pub rhs_length: usize,
    pub matches: usize,
    pub solutions: Vec<WicksSolution>,
    pub exhaustive: bool,
}

impl WicksSearch {
    pub fn of_class(&self, faithful: bool) -> impl Iterator<Item = &WicksSolution> {
        self.solutions.iter().filter(move |s| s.faithful == faithful)
    }
}

/// Converts a Wicks pair `(z₁, z₂)`, written in the frame's alphabet, to the
/// frame's unknowns.
fn to_frame(spec: &EquationSpec, z1: Word, z2: Word) -> (Word, Word) {
    match (spec.frame, spec.delta) {
        (Frame::AdaptedXY, Sign::Minus) => (z1.mul_unchecked(&z2), z2.inv()),
        _ => (z1, z2),
    }
}

/// Runs the matcher on the cyclically reduced right-hand side and collects
/// the verified canonical solutions, deduplicated, labelled by class.
pub fn wicks_search(spec: &EquationSpec, v: &Word, budget: usize) -> Result<WicksSearch> {
    let rhs = rhs_word(spec, v)?;
    let (core, t) = rhs.cyclic_reduce();
    if core.len() > budget {
        return Err(Error::BudgetExceeded { len: core.len(), budget });
    }
    let mut pairs: Vec<(Option<usize>, Option<WicksForm>, Word, Word)> = Vec::new();
    let matches = if core.is_identity() {
        // Degenerate forms with empty parts; those that do not fit the frame
        // are dropped below.
        let basis = core.basis();
        let one = Word::identity(basis);
        for g in [Gen::G1, Gen::G2] {
            let g = Word::generator(basis, g);
            pairs.push((None, None, one.clone(), g.clone()));
            pairs.push((None, None, g.clone(), g.inv()));
        }
        pairs.push((None, None, one.clone(), one));
        0
    } else {
        let mut ms = wicks_decompositions(&core, WicksKind::for_delta(spec.delta));
        for m in &mut ms {
            m.conjugator = t.clone();
            let (z1, z2) = extract_solution(m)?;
            let (x, y) = to_frame(spec, z1, z2);
            pairs.push((Some(m.shift), Some(m.form), x, y));
        }
        ms.len()
    };
    let mut seen = BTreeSet::new();
    let mut solutions = Vec::new();
    for (shift, form, first, second) in pairs {
        if !seen.insert((first.letters(), second.letters())) {
            continue;
        }
        let check = verify_solution(spec, v, &first, &second)?;
        if !check.holds && shift.is_none() {
            continue;
        }
        if !check.holds {
            return Err(Error::ExtractionFailed(format!("({first}, {second}) does not solve the equation")));
        }
        solutions.push(WicksSolution { shift, form, first, second, faithful: check.faithful, x_in_n: check.x_in_n });
    }
    Ok(WicksSearch { rhs_length: core.len(), matches, solutions, exhaustive: true })
}
