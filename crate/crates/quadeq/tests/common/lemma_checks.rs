//! Word identities and congruences modulo `K = span{1, g + g⁻¹}` used by the
//! second derived equations. Quotients are computed by long division of
//! one-variable Laurent polynomials, independently of the library helpers.

use std::collections::BTreeMap;

use quadeq::fgword::{relator, BasisTag, Gen, Sign, Word};
use quadeq::grind::{q_n, Domain, RingElement};
use quadeq::quot_q::p_q;
use quadeq::surface::PiElement;

pub type Laurent = BTreeMap<i64, i64>;
pub type Check = Result<(), String>;

pub fn lp(terms: &[(i64, i64)]) -> Laurent {
    let mut out = Laurent::new();
    for &(e, c) in terms {
        *out.entry(e).or_insert(0) += c;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `num / (1 − σ·t^b)`, which must be exact.
pub fn div_binomial(num: &Laurent, b: i64, sigma: i64) -> Laurent {
    assert_ne!(b, 0);
    if b < 0 {
        // 1 − σt^b = −σ·t^b·(1 − σt^{−b}).
        let q = div_binomial(num, -b, sigma);
        return q.into_iter().map(|(e, c)| (e - b, -sigma * c)).collect();
    }
    let mut rem = num.clone();
    let mut q = Laurent::new();
    while let Some((&e, &c)) = rem.iter().next() {
        let top = *num.keys().next_back().unwrap();
        assert!(e + b <= top, "inexact division");
        *q.entry(e).or_insert(0) += c;
        for (de, dc) in [(e, -c), (e + b, sigma * c)] {
            let entry = rem.entry(de).or_insert(0);
            *entry += dc;
            if *entry == 0 {
                rem.remove(&de);
            }
        }
    }
    q
}

pub fn ev(x: &PiElement, p: &Laurent) -> RingElement {
    let mut out = RingElement::zero(x.epsilon, Domain::IntegerCoeff);
    for (&e, &c) in p {
        out.add_term(x.pow(e), c);
    }
    out
}

/// `(1 − t^a)/(1 − σt^b)`.
pub fn ratio(a: i64, b: i64, sigma: i64) -> Laurent {
    div_binomial(&lp(&[(0, 1), (a, -1)]), b, sigma)
}

pub fn mono(g: PiElement) -> RingElement {
    RingElement::monomial(g, 1)
}

pub fn congruent(a: &RingElement, b: &RingElement) -> bool {
    p_q(&a.sub(b).unwrap()).is_zero()
}

pub fn km(r: i64, s: i64) -> PiElement {
    PiElement::new(Sign::Minus, r, s)
}

pub fn tor(r: i64, s: i64) -> PiElement {
    PiElement::new(Sign::Plus, r, s)
}

fn w(syl: &[(Gen, i64)]) -> Word {
    Word::from_syllables(BasisTag::adapted(Sign::Minus), syl.iter().copied())
}

fn b_conj(u: &Word, k: i64) -> Word {
    Word::conj(u, &relator(Sign::Minus).pow(k)).unwrap()
}

fn prod(ws: impl IntoIterator<Item = Word>) -> Word {
    ws.into_iter().fold(w(&[]), |acc, x| acc.mul(&x).unwrap())
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

/// `α^L β α^L β⁻¹` is a product of `B`-conjugates with image `(1 − ᾱ^L)/(1 − ᾱ)`.
pub fn alpha_power_commutator(l: i64) -> Check {
    let lhs = w(&[(Gen::G1, l), (Gen::G2, 1), (Gen::G1, l), (Gen::G2, -1)]);
    let rhs = if l >= 0 {
        prod((0..l).rev().map(|k| b_conj(&w(&[(Gen::G1, k)]), 1)))
    } else {
        prod((l..0).map(|k| b_conj(&w(&[(Gen::G1, k)]), -1)))
    };
    ensure(lhs == rhs, || format!("word identity fails at L={l}"))?;
    let expected = ev(&km(1, 0), &ratio(l, 1, 1));
    ensure(q_n(&lhs).unwrap() == expected, || format!("image fails at L={l}"))
}

/// `β^{−2n}(βα^{−L})^{2n}` lies in the normal closure with the stated image.
pub fn beta_power_of_c(n: i64, l: i64) -> Check {
    let c = w(&[(Gen::G2, 1), (Gen::G1, -l)]);
    let lhs = w(&[(Gen::G2, -2 * n)]).mul(&c.pow(2 * n)).unwrap();
    let core = w(&[(Gen::G1, -l), (Gen::G2, 1), (Gen::G1, -l), (Gen::G2, -1)]);
    let rhs = if n > 0 {
        prod((0..n).map(|j| Word::conj(&w(&[(Gen::G2, 1 - 2 * n + 2 * j)]), &core).unwrap()))
    } else {
        prod((1..=-n).map(|j| Word::conj(&w(&[(Gen::G2, 1 - 2 * n - 2 * j)]), &core.inv()).unwrap()))
    };
    ensure(lhs == rhs, || format!("word identity fails at n={n} L={l}"))?;
    let beta = ev(&km(0, 1), &ratio(-2 * n, 2, 1));
    let alpha = ev(&km(1, 0), &ratio(-l, 1, 1));
    let expected = mono(km(0, 1)).mul(&beta).unwrap().mul(&alpha).unwrap().neg();
    ensure(q_n(&lhs).unwrap() == expected, || format!("image fails at n={n} L={l}"))
}

/// The three reductions of geometric sums modulo `K`.
pub fn geometric_sums(x: PiElement, k: i64) -> Check {
    let xk = |e: i64| mono(x.pow(e));
    let a = ev(&x, &ratio(2 * k, 1, 1)).mul(&xk(1 - k)).unwrap();
    ensure(congruent(&a, &xk(k)), || format!("(a) fails at x={x} k={k}"))?;
    let b = ev(&x, &ratio(2 * k, 2, 1)).mul(&xk(1 - k)).unwrap();
    ensure(p_q(&b).is_zero(), || format!("(b) fails at x={x} k={k}"))?;
    let c = ev(&x, &ratio(2 * k, 2, 1)).mul(&xk(-k)).unwrap();
    ensure(congruent(&c, &xk(-k)), || format!("(c) fails at x={x} k={k}"))?;
    if k != 0 && !x.is_identity() {
        ensure(!p_q(&a).is_zero(), || format!("(a) degenerates at x={x} k={k}"))?;
    }
    Ok(())
}

/// Splitting `(1 − x^{2k})/(1 − x²)·x^{2m}` over the factors `1 ± x`.
pub fn split_geometric_sum(x: PiElement, k: i64, m: i64) -> Check {
    let lhs = ev(&x, &ratio(2 * k, 2, 1)).mul(&mono(x.pow(2 * m))).unwrap();
    let mid_num = lp(&[(2 * m, 1), (1 - k, -1)]);
    let mid = ev(&x, &ratio(2 * k, 1, -1)).mul(&ev(&x, &div_binomial(&mid_num, 1, 1))).unwrap();
    let sign = if k % 2 == 0 { 1 } else { -1 };
    let right_num = lp(&[(2 * m, 1), (1 - k, sign)]);
    let right = ev(&x, &ratio(2 * k, 1, 1)).mul(&ev(&x, &div_binomial(&right_num, 1, -1))).unwrap();
    ensure(congruent(&lhs, &mid) && congruent(&mid, &right), || format!("fails at x={x} k={k} m={m}"))
}

/// With `y = ᾱ^L β̄^ℓ`, `ℓ | n` odd and `n` even, β̄-sums pass through
/// `(1 − y^{2n/ℓ})/(1 − y)`.
pub fn beta_sums_through_y(n: i64, ell: i64, l: i64, k: i64, m: i64) -> Check {
    let y = km(l, ell);
    ensure(y.pow(2 * n / ell) == km(0, 2 * n), || format!("y^(2n/ℓ) ≠ β̄^2n at n={n} ℓ={ell} L={l}"))?;
    let u = ev(&y, &ratio(2 * n / ell, 1, 1));
    let lhs = mono(km(0, n));
    let rhs = u.mul(&mono(km(l, 0).mul(&km(0, ell - n)).unwrap())).unwrap();
    ensure(congruent(&lhs, &rhs), || format!("β̄^n fails at n={n} ℓ={ell} L={l}"))?;
    let am = mono(km(m, 0));
    let lhs = ev(&km(0, 1), &ratio(2 * n, 2 * ell, 1)).mul(&mono(km(0, 2 * k * ell))).unwrap().mul(&am).unwrap();
    let inner = div_binomial(&lp(&[(2 * k, 1), (1 - n / ell, 1)]), 1, -1);
    let rhs = u.mul(&ev(&y, &inner)).unwrap().mul(&am).unwrap();
    ensure(congruent(&lhs, &rhs), || format!("shifted sum fails at n={n} ℓ={ell} L={l} k={k} m={m}"))
}

/// `(1 − β̄^{−2n})/(1 − β̄²)·β̄·ᾱ^m ≡ (1 − β̄^{2n})·Z₁·ᾱ^m + [n odd]·β̄^n ᾱ^m`.
pub fn shifted_beta_sum(n: i64, m: i64) -> Check {
    let b = km(0, 1);
    let am = mono(km(m, 0));
    let lhs = ev(&b, &ratio(-2 * n, 2, 1)).mul(&mono(b)).unwrap().mul(&am).unwrap();
    let z1_top = if n % 2 == 0 { n } else { n - 1 };
    let z1 = ev(&b, &ratio(z1_top, 2, 1)).mul(&mono(b.pow(1 - 2 * n))).unwrap().neg();
    let one_minus = mono(PiElement::identity(Sign::Minus)).sub(&mono(b.pow(2 * n))).unwrap();
    let mut rhs = one_minus.mul(&z1).unwrap().mul(&am).unwrap();
    if n % 2 != 0 {
        rhs = rhs.add(&mono(b.pow(n)).mul(&am).unwrap()).unwrap();
    }
    ensure(congruent(&lhs, &rhs), || format!("fails at n={n} m={m}"))
}
