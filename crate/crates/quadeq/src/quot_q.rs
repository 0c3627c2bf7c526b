//! The quotient `Q = Z[π∖{1}]/⟨g + g⁻¹⟩` and its mod-2 reduction `Q'`.
//!
//! Each pair `{g, g⁻¹}` is stored on its representative, the member with
//! `s > 0`, or `s = 0` and `r > 0`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fgword::{Sign, Word};
use crate::grind::{Domain, RingElement};
use crate::surface::{project, PiElement};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QElement {
    epsilon: Sign,
    domain: Domain,
    terms: BTreeMap<PiElement, i64>,
}

/// Whether `g` is the stored member of `{g, g⁻¹}`.
pub fn is_representative(g: &PiElement) -> bool {
    g.s > 0 || (g.s == 0 && g.r > 0)
}

impl QElement {
    pub fn zero(epsilon: Sign, domain: Domain) -> Self {
        QElement { epsilon, domain, terms: BTreeMap::new() }
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_rep(&mut self, g: PiElement, c: i64) {
        let e = self.terms.entry(g).or_insert(0);
        *e += c;
        if self.domain == Domain::Mod2Coeff {
            *e = e.rem_euclid(2);
        }
        if *e == 0 {
            self.terms.remove(&g);
        }
    }

    pub fn add(&self, other: &QElement) -> Result<QElement> {
        if self.epsilon != other.epsilon {
            return Err(Error::EpsilonMismatch);
        }
        if self.domain != other.domain {
            return Err(Error::DomainMismatch);
        }
        let mut out = self.clone();
        for (&g, &c) in &other.terms {
            out.add_rep(g, c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> QElement {
        let mut out = QElement::zero(self.epsilon, self.domain);
        for (&g, &c) in &self.terms {
            out.add_rep(g, -c);
        }
        out
    }

    pub fn reduce_mod2(&self) -> QElement {
        let mut out = QElement::zero(self.epsilon, Domain::Mod2Coeff);
        for (&g, &c) in &self.terms {
            out.add_rep(g, c);
        }
        out
    }
}

/// Serialized as its display string.
impl serde::Serialize for QElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for QElement {
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

/// The projection `p_Q` (or `p_{Q'}` on mod-2 elements).
pub fn p_q(p: &RingElement) -> QElement {
    let mut out = QElement::zero(p.epsilon(), p.domain());
    for (g, &c) in p.terms() {
        if g.is_identity() {
            continue;
        }
        if is_representative(g) {
            out.add_rep(*g, c);
        } else {
            let c = match p.domain() {
                Domain::IntegerCoeff => -c,
                Domain::Mod2Coeff => c,
            };
            out.add_rep(g.inv(), c);
        }
    }
    out
}

/// The image in `Q` of the commutator `[∏ B_{u_i}^{n_i}, ∏ B_{v_j}^{m_j}]`:
/// `p_Q(Σ_i Σ_j n_i·m_j·ū_i⁻¹·v̄_j)`.
pub fn q_nf_commutator(epsilon: Sign, left: &[(Word, i64)], right: &[(Word, i64)]) -> Result<QElement> {
    let mut sum = RingElement::zero(epsilon, Domain::IntegerCoeff);
    for (u, n) in left {
        let ub = project(u);
        if ub.epsilon != epsilon {
            return Err(Error::EpsilonMismatch);
        }
        for (v, m) in right {
            let vb = project(v);
            if vb.epsilon != epsilon {
                return Err(Error::EpsilonMismatch);
            }
            sum.add_term(ub.inv().mul_unchecked(&vb), n * m);
        }
    }
    Ok(p_q(&sum))
}

pub fn q_divisible_by_two(x: &QElement) -> Result<bool> {
    if x.domain != Domain::IntegerCoeff {
        return Err(Error::DomainMismatch);
    }
    Ok(x.terms.values().all(|c| c % 2 == 0))
}
