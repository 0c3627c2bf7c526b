//! Words in the free group of rank two.
//!
//! A [`Word`] is stored as run-length syllables `(generator, exponent)` and is
//! kept freely reduced by every constructor. The two generators are printed as
//! `a` and `b` in both bases; in the adapted basis they stand for α and β.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A sign in {+1, -1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// `self^k`, with negative `k` allowed.
    pub fn pow(self, k: i64) -> Sign {
        if self == Sign::Minus && k.rem_euclid(2) == 1 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Sign> {
        match s.trim() {
            "+1" | "1" | "+" => Ok(Sign::Plus),
            "-1" | "-" => Ok(Sign::Minus),
            other => Err(Error::InvalidArgument(format!("not a sign: {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisKind {
    Classic,
    Adapted,
}

/// Which generators a word is written in, together with the sign ε of the
/// relator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisTag {
    pub kind: BasisKind,
    pub epsilon: Sign,
}

impl BasisTag {
    pub fn classic(epsilon: Sign) -> Self {
        BasisTag { kind: BasisKind::Classic, epsilon }
    }

    pub fn adapted(epsilon: Sign) -> Self {
        BasisTag { kind: BasisKind::Adapted, epsilon }
    }

    /// For ε = +1 the two bases coincide.
    fn same_as(self, other: BasisTag) -> bool {
        self.epsilon == other.epsilon
            && (self.kind == other.kind || self.epsilon == Sign::Plus)
    }
}

/// The two free generators: `a`/α is `G1`, `b`/β is `G2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gen {
    G1,
    G2,
}

impl Gen {
    fn lower(self) -> char {
        match self {
            Gen::G1 => 'a',
            Gen::G2 => 'b',
        }
    }
}

/// A single letter `g^{±1}`, encoded as ±1 for `a` and ±2 for `b`.
pub type Letter = i8;

pub fn letter(g: Gen, positive: bool) -> Letter {
    let v = match g {
        Gen::G1 => 1,
        Gen::G2 => 2,
    };
    if positive {
        v
    } else {
        -v
    }
}

pub fn letter_gen(l: Letter) -> Gen {
    if l.abs() == 1 {
        Gen::G1
    } else {
        Gen::G2
    }
}

/// A freely reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    basis: BasisTag,
    syllables: Vec<(Gen, i64)>,
}

impl Word {
    pub fn identity(basis: BasisTag) -> Word {
        Word { basis, syllables: Vec::new() }
    }

    pub fn generator(basis: BasisTag, g: Gen) -> Word {
        Word { basis, syllables: vec![(g, 1)] }
    }

    /// Builds a word from arbitrary syllables, reducing as it goes.
    pub fn from_syllables(basis: BasisTag, syl: impl IntoIterator<Item = (Gen, i64)>) -> Word {
        let mut w = Word::identity(basis);
        for (g, e) in syl {
            w.push(g, e);
        }
        w
    }

    pub fn from_letters(basis: BasisTag, letters: &[Letter]) -> Word {
        Word::from_syllables(
            basis,
            letters.iter().map(|&l| (letter_gen(l), if l > 0 { 1 } else { -1 })),
        )
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn epsilon(&self) -> Sign {
        self.basis.epsilon
    }

    pub fn syllables(&self) -> &[(Gen, i64)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.syllables.iter().map(|&(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.len());
        for &(g, e) in &self.syllables {
            let l = letter(g, e > 0);
            out.extend(std::iter::repeat_n(l, e.unsigned_abs() as usize));
        }
        out
    }

    /// Exponent sum of one generator.
    pub fn exponent_sum(&self, g: Gen) -> i64 {
        self.syllables.iter().filter(|s| s.0 == g).map(|s| s.1).sum()
    }

    fn push(&mut self, g: Gen, e: i64) {
        if e == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some(last) if last.0 == g => {
                last.1 += e;
                if last.1 == 0 {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push((g, e)),
        }
    }

    /// Re-tags a word without touching its letters. Only for ε = +1, where
    /// both bases agree, or for internal scratch computations.
    pub fn retag(&self, basis: BasisTag) -> Word {
        Word { basis, syllables: self.syllables.clone() }
    }

    fn check(&self, other: &Word) -> Result<()> {
        if self.basis.same_as(other.basis) {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    pub fn mul(&self, other: &Word) -> Result<Word> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &(g, e) in &other.syllables {
            w.push(g, e);
        }
        w
    }

    pub fn inv(&self) -> Word {
        Word {
            basis: self.basis,
            syllables: self.syllables.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    /// `u·w·u⁻¹`.
    pub fn conj(u: &Word, w: &Word) -> Result<Word> {
        u.check(w)?;
        Ok(u.mul_unchecked(w).mul_unchecked(&u.inv()))
    }

    /// `u·w·u⁻¹·w⁻¹`.
    pub fn comm(u: &Word, w: &Word) -> Result<Word> {
        u.check(w)?;
        Ok(u.mul_unchecked(w).mul_unchecked(&u.inv()).mul_unchecked(&w.inv()))
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let n = k.unsigned_abs();
        // Cyclic reduction lets the middle repeat without cascading.
        let (core, t) = base.cyclic_reduce();
        let mut middle = Word::identity(self.basis);
        if let [(g, e)] = core.syllables[..] {
            middle.push(g, e * n as i64);
        } else {
            for _ in 0..n {
                for &(g, e) in &core.syllables {
                    middle.push(g, e);
                }
            }
        }
        t.mul_unchecked(&middle).mul_unchecked(&t.inv())
    }

    /// Returns `(core, t)` with `self = t·core·t⁻¹` and `core` cyclically
    /// reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let mut syl = self.syllables.clone();
        let mut t = Vec::new();
        loop {
            if syl.len() < 2 {
                break;
            }
            let n = syl.len();
            let (g0, e0) = syl[0];
            let (g1, e1) = syl[n - 1];
            if g0 != g1 {
                break;
            }
            // Same sign at both ends means the word is already cyclically reduced.
            if (e0 > 0) == (e1 > 0) {
                break;
            }
            let m = e0.abs().min(e1.abs());
            let step = e0.signum() * m;
            t.push((g0, step));
            syl[0].1 -= step;
            syl[n - 1].1 += step;
            if syl[n - 1].1 == 0 {
                syl.pop();
            }
            if syl[0].1 == 0 {
                syl.remove(0);
            }
        }
        let t = Word::from_syllables(self.basis, t);
        let core = Word { basis: self.basis, syllables: syl };
        debug_assert_eq!(t.mul_unchecked(&core).mul_unchecked(&t.inv()), *self);
        (core, t)
    }

    /// A square root `s` with `s·s = self`, using the positional test on the
    /// cyclic core.
    pub fn square_root(&self) -> Option<Word> {
        let (core, t) = self.cyclic_reduce();
        let letters = core.letters();
        if letters.len() % 2 != 0 {
            return None;
        }
        let h = letters.len() / 2;
        if letters[..h] != letters[h..] {
            return None;
        }
        let s0 = Word::from_letters(self.basis, &letters[..h]);
        Some(t.mul_unchecked(&s0).mul_unchecked(&t.inv()))
    }

    /// The orientation character.
    pub fn sgn(&self) -> Sign {
        let eps = self.basis.epsilon;
        match self.basis.kind {
            BasisKind::Classic => eps.pow(self.len() as i64),
            BasisKind::Adapted => eps.pow(self.exponent_sum(Gen::G2)),
        }
    }

    pub fn change_basis(&self, target: BasisTag) -> Result<Word> {
        if target.epsilon != self.basis.epsilon {
            return Err(Error::EpsilonMismatch);
        }
        if self.basis.kind == target.kind || target.epsilon == Sign::Plus {
            return Ok(self.retag(target));
        }
        // classic→adapted: a = αβ, b = β⁻¹; adapted→classic: α = ab, β = b⁻¹.
        // The substitution is its own inverse.
        let im1 = Word::from_syllables(target, [(Gen::G1, 1), (Gen::G2, 1)]);
        let im2 = Word::from_syllables(target, [(Gen::G2, -1)]);
        Ok(self.substitute(target, &im1, &im2))
    }

    /// Replaces the generators by the given images.
    pub fn substitute(&self, target: BasisTag, g1: &Word, g2: &Word) -> Word {
        let mut out = Word::identity(target);
        for &(g, e) in &self.syllables {
            let img = match g {
                Gen::G1 => g1,
                Gen::G2 => g2,
            };
            out = out.mul_unchecked(&img.retag(target).pow(e));
        }
        out
    }
}

/// The relator in the basis `basis`: αβα^{−ε}β⁻¹ in the adapted basis, the
/// same element rewritten in the classic basis (`a²b²` for ε = −1).
pub fn relator_in(basis: BasisTag) -> Word {
    let eps = basis.epsilon;
    let adapted = Word::from_syllables(
        BasisTag::adapted(eps),
        [(Gen::G1, 1), (Gen::G2, 1), (Gen::G1, -eps.value()), (Gen::G2, -1)],
    );
    adapted.change_basis(basis).expect("same epsilon")
}

/// The relator αβα^{−ε}β⁻¹ in the adapted basis.
pub fn relator(epsilon: Sign) -> Word {
    relator_in(BasisTag::adapted(epsilon))
}

/// Serialized as its display string.
impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for (i, &(g, e)) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let c = if e > 0 { g.lower() } else { g.lower().to_ascii_uppercase() };
            if e.abs() == 1 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}^{}", e.abs())?;
            }
        }
        Ok(())
    }
}

/// Parses the word grammar:
///
/// ```text
/// word := term+
/// term := atom ("^" int)?
/// atom := "a" | "b" | "A" | "B" | "R" | "1" | "(" word ")" | "[" word "," word "]" | "conj(" word ")"
/// ```
pub fn parse_word(text: &str, basis: BasisTag) -> Result<Word> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, basis };
    p.skip_ws();
    let w = p.word()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected character"));
    }
    Ok(w)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    basis: BasisTag,
}

impl Parser<'_> {
    fn err(&self, message: &str) -> Error {
        Error::Syntax { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Some(b'a' | b'b' | b'A' | b'B' | b'R' | b'1' | b'(' | b'[') => true,
            Some(b'c') => self.src[self.pos..].starts_with(b"conj("),
            _ => false,
        }
    }

    fn word(&mut self) -> Result<Word> {
        if !self.starts_atom() {
            return Err(self.err("expected a term"));
        }
        let mut w = Word::identity(self.basis);
        while self.starts_atom() {
            let t = self.term()?;
            w = w.mul_unchecked(&t);
            self.skip_ws();
        }
        Ok(w)
    }

    fn term(&mut self) -> Result<Word> {
        let a = self.atom()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let k = self.int()?;
            return Ok(a.pow(k));
        }
        Ok(a)
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.pos;
        if self.peek() == Some(b'-') || self.peek() == Some(b'+') {
            self.pos += 1;
        }
        let digits = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return Err(self.err("expected an integer exponent"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        s.parse::<i64>().map_err(|_| {
            self.pos = start;
            self.err("exponent out of range")
        })
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn atom(&mut self) -> Result<Word> {
        let b = self.basis;
        let c = self.peek().ok_or_else(|| self.err("unexpected end of input"))?;
        let w = match c {
            b'a' => Word::generator(b, Gen::G1),
            b'b' => Word::generator(b, Gen::G2),
            b'A' => Word::generator(b, Gen::G1).inv(),
            b'B' => Word::generator(b, Gen::G2).inv(),
            b'R' => relator_in(b),
            b'1' => {
                // A bare "1" is the identity; "12" is not a word.
                if matches!(self.src.get(self.pos + 1), Some(b'0'..=b'9')) {
                    return Err(self.err("unexpected digit"));
                }
                Word::identity(b)
            }
            b'(' => {
                self.pos += 1;
                self.skip_ws();
                let w = self.word()?;
                self.expect(b')')?;
                return Ok(w);
            }
            b'[' => {
                self.pos += 1;
                self.skip_ws();
                let u = self.word()?;
                self.expect(b',')?;
                self.skip_ws();
                let v = self.word()?;
                self.expect(b']')?;
                return Ok(Word::comm(&u, &v).expect("same basis"));
            }
            b'c' => {
                self.pos += 5;
                self.skip_ws();
                let u = self.word()?;
                self.expect(b')')?;
                return Ok(Word::conj(&u, &relator_in(b)).expect("same basis"));
            }
            _ => return Err(self.err("unexpected character")),
        };
        self.pos += 1;
        Ok(w)
    }
}

/// The unknown pair of a quadratic equation and the frame it is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolutionClass {
    Faithful,
    NonFaithful,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Frame {
    /// Unknowns z₁, z₂ in the classic basis.
    OriginalZ,
    /// Unknowns x, y in the adapted basis.
    AdaptedXY,
}

/// Parameters of `Q_δ(z₁,z₂) = v·R^ϑ·v⁻¹·R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EquationSpec {
    pub delta: Sign,
    pub epsilon: Sign,
    pub theta: Sign,
    pub solution_class: SolutionClass,
    pub frame: Frame,
}

impl EquationSpec {
    pub fn adapted(delta: Sign, epsilon: Sign, theta: Sign, class: SolutionClass) -> Self {
        EquationSpec { delta, epsilon, theta, solution_class: class, frame: Frame::AdaptedXY }
    }

    pub fn basis(&self) -> BasisTag {
        match self.frame {
            Frame::OriginalZ => BasisTag::classic(self.epsilon),
            Frame::AdaptedXY => BasisTag::adapted(self.epsilon),
        }
    }

    /// `v·R^ϑ·v⁻¹·R` in the frame's basis.
    pub fn rhs(&self, v: &Word) -> Result<Word> {
        let b = self.basis();
        if !v.basis.same_as(b) {
            return Err(Error::BasisMismatch);
        }
        let r = relator_in(b);
        Ok(v.mul_unchecked(&r.pow(self.theta.value()))
            .mul_unchecked(&v.inv())
            .mul_unchecked(&r))
    }

    /// The left-hand side evaluated at the pair.
    pub fn lhs(&self, first: &Word, second: &Word) -> Result<Word> {
        let b = self.basis();
        if !first.basis.same_as(b) || !second.basis.same_as(b) {
            return Err(Error::BasisMismatch);
        }
        Ok(match self.frame {
            // [z₁,z₂] or z₁²z₂².
            Frame::OriginalZ => match self.delta {
                Sign::Plus => Word::comm(first, second)?,
                Sign::Minus => first.pow(2).mul_unchecked(&second.pow(2)),
            },
            // x·y·x^{−δ}·y⁻¹.
            Frame::AdaptedXY => first
                .mul_unchecked(second)
                .mul_unchecked(&first.pow(-self.delta.value()))
                .mul_unchecked(&second.inv()),
        })
    }

    /// Converts an (x, y) pair to (z₁, z₂) in the classic basis.
    pub fn xy_to_z(&self, x: &Word, y: &Word) -> Result<(Word, Word)> {
        let cb = BasisTag::classic(self.epsilon);
        let x = x.change_basis(cb)?;
        let y = y.change_basis(cb)?;
        Ok(match self.delta {
            Sign::Plus => (x, y),
            // x = z₁z₂, y = z₂⁻¹.
            Sign::Minus => (x.mul_unchecked(&y), y.inv()),
        })
    }

    /// Converts a (z₁, z₂) pair to (x, y) in the adapted basis.
    pub fn z_to_xy(&self, z1: &Word, z2: &Word) -> Result<(Word, Word)> {
        let ab = BasisTag::adapted(self.epsilon);
        let z1 = z1.change_basis(ab)?;
        let z2 = z2.change_basis(ab)?;
        Ok(match self.delta {
            Sign::Plus => (z1, z2),
            Sign::Minus => (z1.mul_unchecked(&z2), z2.inv()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionCheck {
    pub holds: bool,
    pub faithful: bool,
    /// Meaningful only in the adapted frame; see `x_in_n_applicable`.
    pub x_in_n: bool,
    pub x_in_n_applicable: bool,
}

/// Substitutes the pair into the equation and reduces both sides.
pub fn verify_solution(spec: &EquationSpec, v: &Word, first: &Word, second: &Word) -> Result<SolutionCheck> {
    let lhs = spec.lhs(first, second)?;
    let rhs = spec.rhs(v)?;
    let holds = lhs == rhs;
    let (faithful, x_in_n) = match spec.frame {
        Frame::OriginalZ => (first.sgn() == spec.delta && second.sgn() == spec.delta, false),
        Frame::AdaptedXY => {
            // Equivalent to the z-frame rule under x = z₁z₂, y = z₂⁻¹.
            let faithful = second.sgn() == spec.delta && first.sgn() == Sign::Plus;
            let p = crate::surface::project(first);
            (faithful, p.is_identity())
        }
    };
    Ok(SolutionCheck {
        holds,
        faithful,
        x_in_n,
        x_in_n_applicable: spec.frame == Frame::AdaptedXY,
    })
}
