//! Group actions on π by left translation and inversion, their orbits in
//! closed form, and the (twisted) augmentations used by the deciders.
//!
//! Every orbit is a finite union of cosets `d·g + Λ` where `d` runs over
//! coset representatives of the acting group modulo a translation subgroup
//! and `Λ ⊂ Z²` is the exponent lattice of that subgroup. Each coset carries
//! the character value of its representative.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fgword::Sign;
use crate::grind::{Domain, RingElement};
use crate::surface::PiElement;

/// The acting group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ActionSpec {
    /// `t̂·g = ū·g`, `î·g = g⁻¹`. Requires `w(ū) = +1`.
    HatAbs { u: PiElement },
    /// `t·g = β̄^{2n}·g`, `i·g = g⁻¹` on the Klein bottle group.
    Tilde { n: i64 },
    /// Adds `j_L·g = c·(c·g)⁻¹` with `c = ᾱ^L β̄^{ℓ_max}`.
    TildeL { n: i64, l: i64 },
    /// `t̂_L·g = ᾱ^L β̄^{ℓ_max}·g`, `i·g = g⁻¹`.
    HatL { n: i64, l: i64 },
}

/// Greatest odd divisor of `|n|`.
pub fn ell_max(n: i64) -> i64 {
    assert!(n != 0, "ell_max(0)");
    let mut m = n.abs();
    while m % 2 == 0 {
        m /= 2;
    }
    m
}

/// `sign(n)·2^s` with `n = μ·ℓ_max`.
pub fn mu(n: i64) -> i64 {
    n / ell_max(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    T,
    I,
    J,
}

/// A coset `base + Λ` carrying a character value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub base: PiElement,
    pub lattice: Vec<(i64, i64)>,
    pub sign: Sign,
}

impl Family {
    pub fn contains(&self, x: &PiElement) -> bool {
        lattice_contains(&self.lattice, x.r - self.base.r, x.s - self.base.s)
    }
}

/// Whether `(x, y)` lies in the integer span of `gens` (at most two vectors).
pub fn lattice_contains(gens: &[(i64, i64)], x: i64, y: i64) -> bool {
    let v: Vec<(i64, i64)> = gens.iter().copied().filter(|g| *g != (0, 0)).collect();
    match v.len() {
        0 => x == 0 && y == 0,
        1 => {
            let (a, b) = v[0];
            // (x, y) = k·(a, b)
            if a != 0 {
                x % a == 0 && (x / a) * b == y
            } else {
                x == 0 && y % b == 0
            }
        }
        2 => {
            // Row-reduce to (d, e), (0, f).
            let (mut p, mut q) = (v[0], v[1]);
            while q.0 != 0 {
                let k = p.0.div_euclid(q.0);
                p = (p.0 - k * q.0, p.1 - k * q.1);
                std::mem::swap(&mut p, &mut q);
            }
            let (d, e) = p;
            let f = q.1;
            if d == 0 {
                return x == 0 && lattice_contains(&[(0, num_integer::gcd(e, f))], 0, y);
            }
            if x % d != 0 {
                return false;
            }
            let rest = y - (x / d) * e;
            if f == 0 {
                rest == 0
            } else {
                rest % f == 0
            }
        }
        _ => unreachable!("lattices have rank at most two"),
    }
}

/// Membership class of a base element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementClass {
    pub g_tilde_regular: bool,
    pub defective: bool,
}

/// Result of an augmentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Augmented {
    Signed(i64),
    Parity(u8),
}

impl Augmented {
    pub fn parity(self) -> u8 {
        match self {
            Augmented::Signed(v) => v.rem_euclid(2) as u8,
            Augmented::Parity(p) => p,
        }
    }
}

fn klein(x: &PiElement) -> Result<()> {
    if x.epsilon == Sign::Minus {
        Ok(())
    } else {
        Err(Error::EpsilonMismatch)
    }
}

impl ActionSpec {
    pub fn epsilon(&self) -> Sign {
        match self {
            ActionSpec::HatAbs { u } => u.epsilon,
            _ => Sign::Minus,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            ActionSpec::HatAbs { u } => {
                if u.w_eps() != Sign::Plus {
                    return Err(Error::InvalidArgument(format!(
                        "orientation-reversing translation {u} is not supported"
                    )));
                }
                if u.is_identity() {
                    return Err(Error::InvalidArgument("trivial translation".into()));
                }
            }
            ActionSpec::Tilde { n } | ActionSpec::TildeL { n, .. } | ActionSpec::HatL { n, .. } => {
                if n == 0 {
                    return Err(Error::InvalidArgument("n must be nonzero".into()));
                }
            }
        }
        Ok(())
    }

    /// `ᾱ^L β̄^{ℓ_max}` for the L-twisted actions.
    fn c(&self) -> PiElement {
        match *self {
            ActionSpec::TildeL { n, l } | ActionSpec::HatL { n, l } => PiElement::new(Sign::Minus, l, ell_max(n)),
            _ => unreachable!(),
        }
    }

    fn apply(&self, step: Step, g: &PiElement) -> PiElement {
        match step {
            Step::I => g.inv(),
            Step::T => match *self {
                ActionSpec::HatAbs { u } => u.mul_unchecked(g),
                ActionSpec::Tilde { n } | ActionSpec::TildeL { n, .. } => {
                    PiElement::new(Sign::Minus, 0, 2 * n).mul_unchecked(g)
                }
                ActionSpec::HatL { .. } => self.c().mul_unchecked(g),
            },
            Step::J => {
                let c = self.c();
                c.mul_unchecked(&c.mul_unchecked(g).inv())
            }
        }
    }

    /// One application of each generator and each generator inverse, with
    /// the character value of that generator.
    pub fn neighbours(&self, g: &PiElement) -> Vec<(PiElement, Sign)> {
        let mut out = Vec::new();
        let tsign = match self {
            ActionSpec::HatL { .. } => Sign::Minus,
            _ => Sign::Plus,
        };
        out.push((self.apply(Step::T, g), tsign));
        let tinv = match *self {
            ActionSpec::HatAbs { u } => u.inv().mul_unchecked(g),
            ActionSpec::Tilde { n } | ActionSpec::TildeL { n, .. } => {
                PiElement::new(Sign::Minus, 0, -2 * n).mul_unchecked(g)
            }
            ActionSpec::HatL { .. } => self.c().inv().mul_unchecked(g),
        };
        out.push((tinv, tsign));
        out.push((g.inv(), Sign::Minus));
        if let ActionSpec::TildeL { .. } = self {
            out.push((self.apply(Step::J, g), Sign::Minus));
        }
        out
    }

    /// The orbit of `g` as a union of signed cosets.
    pub fn families(&self, g: &PiElement) -> Result<Vec<Family>> {
        self.validate()?;
        if g.epsilon != self.epsilon() {
            return Err(Error::EpsilonMismatch);
        }
        use Step::*;
        type Reps = Vec<(Vec<Step>, Sign)>;
        let (reps, lattice): (Reps, Vec<(i64, i64)>) = match *self {
            ActionSpec::HatAbs { u } => {
                let lat = if g.w_eps() == Sign::Plus {
                    vec![(u.r, u.s)]
                } else {
                    // Left and right translations differ on reversing elements.
                    vec![(u.r, u.s), (0, 2 * u.s)]
                };
                (vec![(vec![], Sign::Plus), (vec![I], Sign::Minus)], lat)
            }
            ActionSpec::Tilde { n } => (vec![(vec![], Sign::Plus), (vec![I], Sign::Minus)], vec![(0, 2 * n)]),
            ActionSpec::TildeL { n, .. } => (
                vec![
                    (vec![], Sign::Plus),
                    (vec![I], Sign::Minus),
                    (vec![J], Sign::Minus),
                    (vec![I, J], Sign::Plus),
                ],
                vec![(0, 2 * n)],
            ),
            ActionSpec::HatL { n, .. } => (
                // The dihedral quotient of order 8 by the squares of t̂_L.
                vec![
                    (vec![], Sign::Plus),
                    (vec![I], Sign::Minus),
                    (vec![T], Sign::Minus),
                    (vec![T, I], Sign::Plus),
                    (vec![I, T], Sign::Plus),
                    (vec![I, T, I], Sign::Minus),
                    (vec![T, I, T], Sign::Minus),
                    (vec![T, I, T, I], Sign::Plus),
                ],
                vec![(0, 2 * ell_max(n))],
            ),
        };
        Ok(reps
            .into_iter()
            .map(|(word, sign)| {
                // Steps act right to left: the last listed step is applied first.
                let base = word.iter().rev().fold(*g, |acc, s| self.apply(*s, &acc));
                Family { base, lattice: lattice.clone(), sign }
            })
            .collect())
    }

    pub fn same_orbit(&self, g: &PiElement, h: &PiElement) -> Result<bool> {
        if h.epsilon != self.epsilon() {
            return Err(Error::EpsilonMismatch);
        }
        Ok(self.families(g)?.iter().any(|f| f.contains(h)))
    }

    /// Regularity for the action without `j_L`, and defectiveness of the
    /// twisted action.
    pub fn element_class(&self, g: &PiElement) -> Result<ElementClass> {
        klein(g)?;
        let n = match *self {
            ActionSpec::Tilde { n } | ActionSpec::TildeL { n, .. } | ActionSpec::HatL { n, .. } => n,
            ActionSpec::HatAbs { .. } => {
                return Err(Error::InvalidArgument("element classes are defined for the n-actions".into()))
            }
        };
        self.validate()?;
        // Singular: g = β̄^{nk} with nk even, or β̄^{nk}ᾱ^m with nk odd.
        let on_axis = g.s % n == 0;
        let singular = on_axis && (g.s % 2 != 0 || g.r == 0);
        let defective = match self {
            // The stabilizer meets the kernel of χ_L iff ℓ_max divides s.
            ActionSpec::HatL { .. } => g.s % ell_max(n) == 0,
            _ => on_axis,
        };
        Ok(ElementClass { g_tilde_regular: !singular, defective })
    }

    /// Sum of `V` over the orbit of `base`, weighted by the character for
    /// the twisted actions at non-defective bases, else reduced mod 2.
    pub fn augment(&self, v: &RingElement, base: &PiElement) -> Result<Augmented> {
        if v.epsilon() != self.epsilon() || base.epsilon != self.epsilon() {
            return Err(Error::EpsilonMismatch);
        }
        let fams = self.families(base)?;
        let plain = match self {
            ActionSpec::HatAbs { .. } => true,
            ActionSpec::Tilde { .. } => {
                if !self.element_class(base)?.g_tilde_regular {
                    return Err(Error::SingularBase(base.to_string()));
                }
                false
            }
            _ => self.element_class(base)?.defective,
        };
        let mut total = 0i64;
        for (g, &c) in v.terms() {
            let signs: Vec<Sign> = fams.iter().filter(|f| f.contains(g)).map(|f| f.sign).collect();
            let Some(&first) = signs.first() else { continue };
            if plain {
                total += c;
                continue;
            }
            if signs.iter().any(|s| *s != first) {
                return Err(Error::InconsistentSign(g.to_string()));
            }
            total += first.value() * c;
        }
        if plain || v.domain() == Domain::Mod2Coeff {
            Ok(Augmented::Parity(total.rem_euclid(2) as u8))
        } else {
            Ok(Augmented::Signed(total))
        }
    }

    /// Groups a finite set of elements into orbits, each sorted by `(s, r)`,
    /// classes ordered by their least element.
    pub fn orbit_classes(&self, elems: &[PiElement]) -> Result<Vec<Vec<PiElement>>> {
        let mut sorted = elems.to_vec();
        sorted.sort();
        sorted.dedup();
        let mut classes: Vec<Vec<PiElement>> = Vec::new();
        'outer: for g in sorted {
            for cls in classes.iter_mut() {
                if self.same_orbit(&cls[0], &g)? {
                    cls.push(g);
                    continue 'outer;
                }
            }
            classes.push(vec![g]);
        }
        Ok(classes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn km(r: i64, s: i64) -> PiElement {
        PiElement::new(Sign::Minus, r, s)
    }

    fn tp(r: i64, s: i64) -> PiElement {
        PiElement::new(Sign::Plus, r, s)
    }

    #[test]
    fn lattice_membership() {
        assert!(lattice_contains(&[(2, 4), (0, 6)], 4, 2));
        assert!(!lattice_contains(&[(2, 4), (0, 6)], 4, 4));
        assert!(lattice_contains(&[(0, 4)], 0, -8));
        assert!(!lattice_contains(&[(0, 4)], 1, 0));
        assert!(lattice_contains(&[(3, 1)], -6, -2));
        assert!(lattice_contains(&[], 0, 0));
        assert!(lattice_contains(&[(0, 4), (0, 6)], 0, 2));
    }

    #[test]
    fn orbit_examples() {
        let a = ActionSpec::HatAbs { u: tp(1, 1) };
        assert!(a.same_orbit(&tp(1, 0), &tp(-1, 0)).unwrap());
        assert!(a.same_orbit(&tp(1, 0), &tp(2, 1)).unwrap());
        assert!(!a.same_orbit(&tp(1, 0), &tp(2, 0)).unwrap());
        let k = ActionSpec::HatAbs { u: km(1, 0) };
        assert!(k.same_orbit(&km(0, 1), &km(5, -1)).unwrap());
        assert!(ActionSpec::HatAbs { u: km(0, 1) }.same_orbit(&km(0, 0), &km(0, 0)).is_err());
    }

    #[test]
    fn class_examples() {
        let t = ActionSpec::TildeL { n: 2, l: 0 };
        assert_eq!(t.element_class(&km(0, 2)).unwrap(), ElementClass { g_tilde_regular: false, defective: true });
        assert_eq!(t.element_class(&km(1, 1)).unwrap(), ElementClass { g_tilde_regular: true, defective: false });
        let t1 = ActionSpec::TildeL { n: 1, l: 0 };
        assert!(t1.element_class(&km(3, 0)).unwrap().defective);
    }

    #[test]
    fn augment_examples() {
        let a = ActionSpec::HatAbs { u: tp(1, 1) };
        let v = RingElement::from_pairs(Sign::Plus, &[((1, 0), 1), ((-1, 0), 1)]);
        assert_eq!(a.augment(&v, &tp(1, 0)).unwrap(), Augmented::Parity(0));
        let t = ActionSpec::Tilde { n: 2 };
        let v = RingElement::from_pairs(Sign::Minus, &[((1, 0), 3), ((-1, 4), -1)]);
        assert_eq!(t.augment(&v, &km(1, 0)).unwrap(), Augmented::Signed(4));
        assert!(matches!(t.augment(&v, &km(0, 2)), Err(Error::SingularBase(_))));
        let tl = ActionSpec::TildeL { n: 1, l: 0 };
        let v = RingElement::from_pairs(Sign::Minus, &[((1, 0), 1)]);
        assert_eq!(tl.augment(&v, &km(1, 0)).unwrap(), Augmented::Parity(1));
    }

    #[test]
    fn ell_and_mu() {
        assert_eq!((ell_max(12), mu(12)), (3, 4));
        assert_eq!((ell_max(-5), mu(-5)), (5, -1));
        assert_eq!((ell_max(-8), mu(-8)), (1, -8));
    }
}
