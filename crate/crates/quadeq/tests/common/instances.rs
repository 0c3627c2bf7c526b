//! Constructed inputs of the second derived deciders.

use quadeq::fgword::Sign;
use quadeq::grind::{geom_ratio, RingElement};
use quadeq::orbits::ell_max;
use quadeq::surface::PiElement;

pub type KernelSeed = (i64, Vec<((i64, i64), i64)>);

/// `a·1 + Σ b(g + g⁻¹)`, an element of the kernel of `p_Q`.
pub fn kernel(eps: Sign, (a, pairs): &KernelSeed) -> RingElement {
    let mut k = RingElement::from_pairs(eps, &[((0, 0), *a)]);
    for &((r, s), c) in pairs {
        let g = PiElement::new(eps, r, s);
        k.add_term(g, c);
        k.add_term(g.inv(), c);
    }
    k
}

/// The same coefficients over the group of sign `eps`.
pub fn lift(eps: Sign, x: &RingElement) -> RingElement {
    RingElement::from_pairs(eps, &x.terms().iter().map(|(g, &c)| ((g.r, g.s), c)).collect::<Vec<_>>())
}

/// `(1 − β̄^{2n})/(1 − ᾱ^L β̄^ℓ)·Z − [n odd]·(1 − ᾱ^L)/(1 − ᾱ)`, ℓ = ℓ_max(n).
pub fn solvable_n(n: i64, l: i64, z: &RingElement) -> RingElement {
    let ell = ell_max(n);
    let y = PiElement::new(Sign::Minus, l, ell);
    let u = geom_ratio(&y, 2 * n / ell, 1).unwrap();
    let mut v = u.mul(z).unwrap();
    if n % 2 != 0 {
        v = v.sub(&geom_ratio(&PiElement::new(Sign::Minus, 1, 0), l, 1).unwrap()).unwrap();
    }
    v
}

/// `(1 − ū)·Z + K`, solvable for the rank-one abelian actions.
pub fn solvable_hat_abs(u: PiElement, z: &RingElement, k: &RingElement) -> RingElement {
    let eps = u.epsilon;
    RingElement::one(eps).sub(&RingElement::monomial(u, 1)).unwrap().mul(z).unwrap().add(k).unwrap()
}
