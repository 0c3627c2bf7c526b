//! Group rings `Z[π]` and `Z₂[π]`, Fox derivatives and the map q_N from the
//! normal closure of the relator onto `Z[π]`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fgword::{Gen, Sign, Word};
use crate::surface::{project, PiElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    IntegerCoeff,
    Mod2Coeff,
}

/// A finite sum `Σ c_g·g` with nonzero coefficients, keyed in `(s, r)` order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    epsilon: Sign,
    domain: Domain,
    terms: BTreeMap<PiElement, i64>,
}

impl RingElement {
    pub fn zero(epsilon: Sign, domain: Domain) -> Self {
        RingElement { epsilon, domain, terms: BTreeMap::new() }
    }

    pub fn one(epsilon: Sign) -> Self {
        Self::monomial(PiElement::identity(epsilon), 1)
    }

    pub fn monomial(g: PiElement, c: i64) -> Self {
        let mut e = Self::zero(g.epsilon, Domain::IntegerCoeff);
        e.add_term(g, c);
        e
    }

    /// Integer element from `((r, s), c)` pairs; repeated keys accumulate.
    pub fn from_pairs(epsilon: Sign, pairs: &[((i64, i64), i64)]) -> Self {
        let mut e = Self::zero(epsilon, Domain::IntegerCoeff);
        for &((r, s), c) in pairs {
            e.add_term(PiElement::new(epsilon, r, s), c);
        }
        e
    }

    pub fn epsilon(&self) -> Sign {
        self.epsilon
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn terms(&self) -> &BTreeMap<PiElement, i64> {
        &self.terms
    }

    pub fn coeff(&self, g: &PiElement) -> i64 {
        self.terms.get(g).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, g: PiElement, c: i64) {
        debug_assert_eq!(g.epsilon, self.epsilon);
        let entry = self.terms.entry(g).or_insert(0);
        *entry += c;
        if self.domain == Domain::Mod2Coeff {
            *entry = entry.rem_euclid(2);
        }
        if *entry == 0 {
            self.terms.remove(&g);
        }
    }

    fn check(&self, other: &RingElement) -> Result<()> {
        if self.epsilon != other.epsilon {
            return Err(Error::EpsilonMismatch);
        }
        if self.domain != other.domain {
            return Err(Error::DomainMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.check(other)?;
        let mut out = self.clone();
        for (&g, &c) in &other.terms {
            out.add_term(g, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RingElement {
        self.scalar_mul(-1)
    }

    pub fn scalar_mul(&self, k: i64) -> RingElement {
        let mut out = Self::zero(self.epsilon, self.domain);
        for (&g, &c) in &self.terms {
            out.add_term(g, c * k);
        }
        out
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        self.check(other)?;
        let mut out = Self::zero(self.epsilon, self.domain);
        for (g, c) in &self.terms {
            for (h, d) in &other.terms {
                out.add_term(g.mul_unchecked(h), c * d);
            }
        }
        Ok(out)
    }

    /// `g·P`.
    pub fn translate(&self, g: &PiElement) -> Result<RingElement> {
        if g.epsilon != self.epsilon {
            return Err(Error::EpsilonMismatch);
        }
        let mut out = Self::zero(self.epsilon, self.domain);
        for (h, &c) in &self.terms {
            out.add_term(g.mul_unchecked(h), c);
        }
        Ok(out)
    }

    /// `P·g`.
    pub fn translate_right(&self, g: &PiElement) -> Result<RingElement> {
        if g.epsilon != self.epsilon {
            return Err(Error::EpsilonMismatch);
        }
        let mut out = Self::zero(self.epsilon, self.domain);
        for (h, &c) in &self.terms {
            out.add_term(h.mul_unchecked(g), c);
        }
        Ok(out)
    }

    pub fn augmentation(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn reduce_mod2(&self) -> RingElement {
        let mut out = Self::zero(self.epsilon, Domain::Mod2Coeff);
        for (&g, &c) in &self.terms {
            out.add_term(g, c);
        }
        out
    }

    /// The Z-lift of a mod-2 element (coefficients 0 or 1); integer
    /// elements are returned unchanged.
    pub fn lift(&self) -> RingElement {
        RingElement { epsilon: self.epsilon, domain: Domain::IntegerCoeff, terms: self.terms.clone() }
    }

    /// Applies a map on group elements termwise.
    pub fn map_support(&self, f: impl Fn(&PiElement) -> PiElement) -> RingElement {
        let mut out = Self::zero(self.epsilon, self.domain);
        for (g, &c) in &self.terms {
            out.add_term(f(g), c);
        }
        out
    }

    /// The largest `|r|` over the support, or 0.
    pub fn alpha_radius(&self) -> i64 {
        self.terms.keys().map(|g| g.r.abs()).max().unwrap_or(0)
    }
}

/// Serialized as its display string.
impl serde::Serialize for RingElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (g, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({},{}):{}", g.r, g.s, c)?;
        }
        f.write_str("}")
    }
}

/// `(1 − x^a)/(1 − x^b)` expanded as a finite geometric sum.
pub fn geom_ratio(x: &PiElement, a: i64, b: i64) -> Result<RingElement> {
    let eps = x.epsilon;
    if a == 0 {
        return Ok(RingElement::zero(eps, Domain::IntegerCoeff));
    }
    if b == 0 || a % b != 0 || x.is_identity() {
        return Err(Error::NotDivisible(format!("(1-x^{a})/(1-x^{b}) for x={x}")));
    }
    let m = a / b;
    let mut out = RingElement::zero(eps, Domain::IntegerCoeff);
    if m > 0 {
        for j in 0..m {
            out.add_term(x.pow(j * b), 1);
        }
    } else {
        for j in 1..=-m {
            out.add_term(x.pow(a + (j - 1) * b), -1);
        }
    }
    let one = RingElement::one(eps);
    let lhs = out.mul(&one.sub(&RingElement::monomial(x.pow(b), 1))?)?;
    let rhs = one.sub(&RingElement::monomial(x.pow(a), 1))?;
    if lhs != rhs {
        return Err(Error::NotDivisible(format!("expansion check failed for x={x}, a={a}, b={b}")));
    }
    Ok(out)
}

/// `(1 − x^{2d})/(1 + x^ℓ)` as the alternating sum
/// `1 − x^ℓ + x^{2ℓ} − …` (ℓ > 0) or `x^{−ℓ} − x^{−2ℓ} + … − x^{2d}` (ℓ < 0).
pub fn alt_geom_ratio(x: &PiElement, two_d: i64, ell: i64) -> Result<RingElement> {
    let eps = x.epsilon;
    if ell == 0 || two_d % ell != 0 || (two_d / ell) % 2 != 0 {
        return Err(Error::NotDivisible(format!("(1-x^{two_d})/(1+x^{ell})")));
    }
    let m = two_d / ell;
    let y = x.pow(ell);
    let mut out = RingElement::zero(eps, Domain::IntegerCoeff);
    if m >= 0 {
        for j in 0..m {
            out.add_term(y.pow(j), if j % 2 == 0 { 1 } else { -1 });
        }
    } else {
        for j in 0..-m {
            out.add_term(y.pow(m + j), if j % 2 == 0 { -1 } else { 1 });
        }
    }
    let one = RingElement::one(eps);
    let lhs = out.mul(&one.add(&RingElement::monomial(y, 1))?)?;
    let rhs = one.sub(&RingElement::monomial(x.pow(two_d), 1))?;
    if lhs != rhs {
        return Err(Error::NotDivisible(format!("alternating expansion check failed for x={x}")));
    }
    Ok(out)
}

/// The Fox derivative with respect to `gen`, projected to `Z[π]`.
pub fn fox_derivative(w: &Word, gen: Gen) -> RingElement {
    let eps = w.epsilon();
    let adapted = w.change_basis(crate::fgword::BasisTag::adapted(eps)).expect("same epsilon");
    let mut out = RingElement::zero(eps, Domain::IntegerCoeff);
    let mut prefix = PiElement::identity(eps);
    for &(g, e) in adapted.syllables() {
        let step = match g {
            Gen::G1 => PiElement::alpha(eps),
            Gen::G2 => PiElement::beta(eps),
        };
        if g == gen {
            if e > 0 {
                let mut p = prefix;
                for _ in 0..e {
                    out.add_term(p, 1);
                    p = p.mul_unchecked(&step);
                }
            } else {
                let inv = step.inv();
                let mut p = prefix;
                for _ in 0..-e {
                    p = p.mul_unchecked(&inv);
                    out.add_term(p, -1);
                }
            }
        }
        prefix = prefix.mul_unchecked(&step.pow(e));
    }
    out
}

/// The projected α-derivative of the relator: `1 − β̄` or `1 + ᾱβ̄`.
pub fn relator_alpha_derivative(eps: Sign) -> RingElement {
    match eps {
        Sign::Plus => RingElement::from_pairs(eps, &[((0, 0), 1), ((0, 1), -1)]),
        Sign::Minus => RingElement::from_pairs(eps, &[((0, 0), 1), ((1, 1), 1)]),
    }
}

/// The projected β-derivative of the relator, `ᾱ − 1` for both signs.
pub fn relator_beta_derivative(eps: Sign) -> RingElement {
    RingElement::from_pairs(eps, &[((1, 0), 1), ((0, 0), -1)])
}

/// Solves `λ·D = P` for `D` the α-derivative of the relator.
///
/// Peels the top β̄-degree of `P`: a term `c·ᾱ^r β̄^t` can only come from a
/// term of `λ` in degree `t − 1`.
pub fn exact_divide(p: &RingElement, d: &RingElement) -> Result<RingElement> {
    let eps = p.epsilon;
    if p.domain != Domain::IntegerCoeff || d.domain != Domain::IntegerCoeff {
        return Err(Error::DomainMismatch);
    }
    if d.epsilon != eps {
        return Err(Error::EpsilonMismatch);
    }
    if *d != relator_alpha_derivative(eps) {
        return Err(Error::InvalidArgument(format!("unsupported divisor {d}")));
    }
    let mut rest = p.clone();
    let mut lambda = RingElement::zero(eps, Domain::IntegerCoeff);
    let floor = match p.terms.keys().map(|g| g.s).min() {
        Some(s) => s,
        None => return Ok(lambda),
    };
    while let Some(top) = rest.terms.keys().next_back().map(|g| g.s) {
        if top <= floor {
            return Err(Error::NotDivisible(format!("remainder {rest}")));
        }
        let row: Vec<(PiElement, i64)> = rest
            .terms
            .iter()
            .filter(|(g, _)| g.s == top)
            .map(|(g, c)| (*g, *c))
            .collect();
        for (g, c) in row {
            // Top term of (ᾱ^{r'} β̄^{t−1})·D is ±ᾱ^{r' + σ} β̄^t.
            let (r_prev, coef) = match eps {
                Sign::Plus => (g.r, -c),
                Sign::Minus => (g.r - Sign::Minus.pow(top - 1).value(), c),
            };
            let m = RingElement::monomial(PiElement::new(eps, r_prev, top - 1), coef);
            rest = rest.sub(&m.mul(d)?)?;
            lambda.add_term(PiElement::new(eps, r_prev, top - 1), coef);
        }
    }
    debug_assert_eq!(lambda.mul(d)?, *p);
    Ok(lambda)
}

/// The image of `w ∈ N` in `Z[π]`, sending `B_u^n` to `n·ū`.
pub fn q_n(w: &Word) -> Result<RingElement> {
    let eps = w.epsilon();
    let img = project(w);
    if !img.is_identity() {
        return Err(Error::NotInKernel(format!("{w} projects to {img}")));
    }
    let fa = fox_derivative(w, Gen::G1);
    let lambda = exact_divide(&fa, &relator_alpha_derivative(eps))
        .map_err(|e| Error::NotInKernel(format!("{w}: {e}")))?;
    let fb = fox_derivative(w, Gen::G2);
    if lambda.mul(&relator_beta_derivative(eps))? != fb {
        return Err(Error::NotInKernel(format!("{w}: beta-derivative check failed")));
    }
    Ok(lambda)
}
