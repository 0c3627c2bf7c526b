//! The torus group (ε = +1) and the Klein bottle group (ε = −1), each the
//! quotient of the free group by the relator, in the canonical form ᾱ^r β̄^s.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fgword::{BasisKind, BasisTag, Gen, Sign, Word};

/// `ᾱ^r β̄^s` in the group selected by `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PiElement {
    pub epsilon: Sign,
    pub r: i64,
    pub s: i64,
}

impl PartialOrd for PiElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by `(s, r)`, the serialization order.
impl Ord for PiElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.s, self.r, self.epsilon).cmp(&(other.s, other.r, other.epsilon))
    }
}

impl PiElement {
    pub fn new(epsilon: Sign, r: i64, s: i64) -> Self {
        PiElement { epsilon, r, s }
    }

    pub fn identity(epsilon: Sign) -> Self {
        PiElement { epsilon, r: 0, s: 0 }
    }

    pub fn alpha(epsilon: Sign) -> Self {
        PiElement { epsilon, r: 1, s: 0 }
    }

    pub fn beta(epsilon: Sign) -> Self {
        PiElement { epsilon, r: 0, s: 1 }
    }

    pub fn is_identity(&self) -> bool {
        self.r == 0 && self.s == 0
    }

    pub fn p_alpha(&self) -> i64 {
        self.r
    }

    pub fn p_beta(&self) -> i64 {
        self.s
    }

    /// `ε^s`, the sign a β̄^s-prefix imposes on ᾱ when moving it across.
    fn sigma(&self) -> i64 {
        self.epsilon.pow(self.s).value()
    }

    /// The orientation character of the element.
    pub fn w_eps(&self) -> Sign {
        self.epsilon.pow(self.s)
    }

    pub fn mul(&self, other: &PiElement) -> Result<PiElement> {
        if self.epsilon != other.epsilon {
            return Err(Error::EpsilonMismatch);
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &PiElement) -> PiElement {
        PiElement {
            epsilon: self.epsilon,
            r: self.r + self.sigma() * other.r,
            s: self.s + other.s,
        }
    }

    pub fn inv(&self) -> PiElement {
        PiElement { epsilon: self.epsilon, r: -self.sigma() * self.r, s: -self.s }
    }

    pub fn pow(&self, k: i64) -> PiElement {
        let mut base = if k < 0 { self.inv() } else { *self };
        let mut n = k.unsigned_abs();
        let mut acc = PiElement::identity(self.epsilon);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            n >>= 1;
        }
        acc
    }

    /// Whether the element is a square; only asked on the torus.
    pub fn divisible_by_two(&self) -> Result<bool> {
        if self.epsilon != Sign::Plus {
            return Err(Error::EpsilonMismatch);
        }
        Ok(self.r % 2 == 0 && self.s % 2 == 0)
    }

    /// The image under the automorphism α ↦ α, β ↦ βα applied `l` times.
    /// Only defined on the Klein bottle group.
    pub fn apply_phi(&self, l: i64) -> Result<PiElement> {
        if self.epsilon != Sign::Minus {
            return Err(Error::EpsilonMismatch);
        }
        Ok(PiElement { epsilon: self.epsilon, r: self.r - l * self.s.rem_euclid(2), s: self.s })
    }

    /// A word in the adapted basis projecting to this element.
    pub fn to_word(&self) -> Word {
        Word::from_syllables(BasisTag::adapted(self.epsilon), [(Gen::G1, self.r), (Gen::G2, self.s)])
    }
}

impl fmt::Display for PiElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.r, self.s)
    }
}

/// The projection of an adapted-basis word to its canonical form.
///
/// Words in the classic basis are converted first.
pub fn project(w: &Word) -> PiElement {
    let eps = w.epsilon();
    let adapted;
    let w = if w.basis().kind == BasisKind::Classic && eps == Sign::Minus {
        adapted = w.change_basis(BasisTag::adapted(eps)).expect("same epsilon");
        &adapted
    } else {
        w
    };
    let mut acc = PiElement::identity(eps);
    for &(g, e) in w.syllables() {
        let step = match g {
            Gen::G1 => PiElement::new(eps, e, 0),
            Gen::G2 => PiElement::new(eps, 0, e),
        };
        acc = acc.mul_unchecked(&step);
    }
    acc
}
