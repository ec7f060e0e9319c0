//! The algebra generated by `U`, `V` with central `W = UV − qVU`, in normal
//! order `V^a W^b U^c`, graded by `deg V = deg U = 1`, `deg W = 2` and
//! truncated at a total degree `D`.

pub mod weyl;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::report::{RelationId, VerificationReport, Witness};
use crate::scalar::{Field, Rational, RationalFunction};

pub use weyl::{apply_exp, weyl_pentagon_check, weyl_sides, FockVector, Occupation};

/// Exponents `(a, b, c)` of `V^a W^b U^c`.
pub type Monomial = (u32, u32, u32);

pub fn degree(m: Monomial) -> u32 {
    m.0 + 2 * m.1 + m.2
}

/// `(q)_n = (1−q)(1−q²)…(1−qⁿ)`.
pub fn q_factorial<F: Field>(n: u32, q: &F) -> F {
    let mut acc = F::one();
    let mut qk = F::one();
    for _ in 0..n {
        qk = qk * q.clone();
        acc = acc * (F::one() - qk.clone());
    }
    acc
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalOrderedElement<F> {
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> NormalOrderedElement<F> {
    pub fn zero() -> Self {
        NormalOrderedElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial((0, 0, 0), F::one())
    }

    pub fn monomial(m: Monomial, c: F) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn v() -> Self {
        Self::monomial((1, 0, 0), F::one())
    }

    pub fn w() -> Self {
        Self::monomial((0, 1, 0), F::one())
    }

    pub fn u() -> Self {
        Self::monomial((0, 0, 1), F::one())
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, F> {
        &self.terms
    }

    pub fn coefficient(&self, m: Monomial) -> F {
        self.terms.get(&m).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        NormalOrderedElement {
            terms: self.terms.iter().map(|(&m, v)| (m, v.clone() * c.clone())).collect(),
        }
    }

    /// Drops terms of total degree above `d`.
    pub fn truncate(&self, d: u32) -> Self {
        NormalOrderedElement {
            terms: self.terms.iter().filter(|(&m, _)| degree(m) <= d).map(|(&m, v)| (m, v.clone())).collect(),
        }
    }

    /// Image in the quotient `W = 0`.
    pub fn project_w_zero(&self) -> Self {
        NormalOrderedElement {
            terms: self.terms.iter().filter(|(m, _)| m.1 == 0).map(|(&m, v)| (m, v.clone())).collect(),
        }
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&m| degree(m)).min()
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> NormalOrderedElement<G> {
        let mut out = NormalOrderedElement::zero();
        for (&m, v) in &self.terms {
            out.add_term(m, f(v));
        }
        out
    }
}

impl NormalOrderedElement<RationalFunction> {
    /// Specialization `q ↦ at`; fails where a denominator vanishes.
    pub fn eval(&self, at: &Rational) -> Result<NormalOrderedElement<Rational>> {
        let mut out = NormalOrderedElement::zero();
        for (&m, v) in &self.terms {
            out.add_term(m, v.eval(at).ok_or(Error::DivisionByZero)?);
        }
        Ok(out)
    }
}

impl<F: Field> fmt::Display for NormalOrderedElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&(a, b, c), v) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mut factors = Vec::new();
            for (sym, e) in [("V", a), ("W", b), ("U", c)] {
                match e {
                    0 => {}
                    1 => factors.push(sym.to_string()),
                    _ => factors.push(format!("{sym}^{e}")),
                }
            }
            if factors.is_empty() {
                write!(f, "({v})")?;
            } else if v.is_one() {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "({v})*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Multiplication in the truncated algebra at a fixed `q` and degree bound.
pub struct QuantumPlane<F: Field> {
    q: F,
    degree: u32,
    /// Extra term in the rewriting rule `UV → qVU + W + εU`, for fault injection.
    fault: Option<F>,
    cache: Mutex<HashMap<(u32, u32), NormalOrderedElement<F>>>,
}

impl<F: Field> QuantumPlane<F> {
    pub fn new(q: F, degree: u32) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidArgument("truncation degree must be at least 1".into()));
        }
        Ok(QuantumPlane {
            q,
            degree,
            fault: None,
            cache: Mutex::new(HashMap::new()),
        })
    }

    /// Same algebra with the perturbed rule `UV → qVU + W + εU`.
    pub fn with_fault(mut self, eps: F) -> Self {
        self.fault = Some(eps);
        self.cache = Mutex::new(HashMap::new());
        self
    }

    pub fn q(&self) -> &F {
        &self.q
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `U V^a = q V (U V^{a−1}) + W V^{a−1} (+ ε U V^{a−1})`.
    fn u_v_power(&self, a: u32) -> NormalOrderedElement<F> {
        if a == 0 {
            return NormalOrderedElement::u();
        }
        let prev = self.u_v_power(a - 1);
        let mut out = NormalOrderedElement::zero();
        for (&(x, y, z), v) in &prev.terms {
            out.add_term((x + 1, y, z), v.clone() * self.q.clone());
        }
        out.add_term((a - 1, 1, 0), F::one());
        if let Some(eps) = &self.fault {
            out = out.add(&prev.scale(eps));
        }
        out
    }

    /// Normal form of `U^c V^a`.
    fn u_power_v_power(&self, c: u32, a: u32) -> NormalOrderedElement<F> {
        if c == 0 {
            return NormalOrderedElement::monomial((a, 0, 0), F::one());
        }
        if a == 0 {
            return NormalOrderedElement::monomial((0, 0, c), F::one());
        }
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&(c, a)) {
            return hit.clone();
        }
        // U^c V^a = U^{c−1} (U V^a), and each term V^x W^y U^z of U V^a
        // contributes (U^{c−1} V^x) W^y U^z.
        let mut out = NormalOrderedElement::zero();
        for (&(x, y, z), v) in &self.u_v_power(a).terms {
            for (&(x2, y2, z2), v2) in &self.u_power_v_power(c - 1, x).terms {
                out.add_term((x2, y2 + y, z2 + z), v.clone() * v2.clone());
            }
        }
        self.cache.lock().expect("cache lock").insert((c, a), out.clone());
        out
    }

    /// Normal-ordered product truncated at the plane's degree.
    pub fn multiply(&self, lhs: &NormalOrderedElement<F>, rhs: &NormalOrderedElement<F>) -> NormalOrderedElement<F> {
        let mut out = NormalOrderedElement::zero();
        for (&(a1, b1, c1), v1) in &lhs.terms {
            for (&(a2, b2, c2), v2) in &rhs.terms {
                if self.fault.is_none() && degree((a1, b1, c1)) + degree((a2, b2, c2)) > self.degree {
                    continue;
                }
                let coeff = v1.clone() * v2.clone();
                for (&(x, y, z), v) in &self.u_power_v_power(c1, a2).terms {
                    let m = (a1 + x, b1 + b2 + y, z + c2);
                    if degree(m) <= self.degree {
                        out.add_term(m, coeff.clone() * v.clone());
                    }
                }
            }
        }
        out
    }

    pub fn power(&self, x: &NormalOrderedElement<F>, n: u32) -> NormalOrderedElement<F> {
        let mut acc = NormalOrderedElement::one();
        for _ in 0..n {
            acc = self.multiply(&acc, x);
        }
        acc
    }

    /// Euler series `E(x) = Σ (−1)ⁿ q^{n(n−1)/2} xⁿ / (q)_n`, the
    /// q-Pochhammer symbol `(x; q)_∞` for an argument without constant term.
    pub fn pochhammer_series(&self, x: &NormalOrderedElement<F>) -> Result<NormalOrderedElement<F>> {
        let x = x.truncate(self.degree);
        let Some(low) = x.min_degree() else {
            return Ok(NormalOrderedElement::one());
        };
        if low == 0 {
            return Err(Error::DegreeZeroTerm);
        }
        let mut out = NormalOrderedElement::one();
        let mut xn = NormalOrderedElement::one();
        let mut q_tri = F::one();
        let mut qk = F::one();
        let mut fact = F::one();
        let mut n = 0;
        while (n + 1) * low <= self.degree {
            n += 1;
            xn = self.multiply(&xn, &x);
            // q^{n(n−1)/2} picks up q^{n−1}; (q)_n picks up (1 − qⁿ).
            q_tri = q_tri * qk.clone();
            qk = qk * self.q.clone();
            fact = fact * (F::one() - qk.clone());
            let sign = if n % 2 == 1 { -F::one() } else { F::one() };
            out = out.add(&xn.scale(&(sign * q_tri.clone()).checked_div(&fact)?));
        }
        Ok(out)
    }

    /// `[U, V] / (1 − q)`, evaluated in the algebra: `W/(1−q) − VU`.
    pub fn commutator_term(&self) -> Result<NormalOrderedElement<F>> {
        let (u, v) = (NormalOrderedElement::u(), NormalOrderedElement::v());
        let comm = self.multiply(&u, &v).sub(&self.multiply(&v, &u));
        Ok(comm.scale(&F::one().checked_div(&(F::one() - self.q.clone()))?))
    }

    /// Both sides of `E(U) E([U,V]/(1−q)) E(V) = E(V) E(U)`.
    pub fn dilog_sides(&self) -> Result<(NormalOrderedElement<F>, NormalOrderedElement<F>)> {
        self.dilog_sides_with(&self.commutator_term()?)
    }

    /// Both sides with an arbitrary middle argument.
    pub fn dilog_sides_with(
        &self,
        middle: &NormalOrderedElement<F>,
    ) -> Result<(NormalOrderedElement<F>, NormalOrderedElement<F>)> {
        let eu = self.pochhammer_series(&NormalOrderedElement::u())?;
        let ev = self.pochhammer_series(&NormalOrderedElement::v())?;
        let em = self.pochhammer_series(middle)?;
        let lhs = self.multiply(&self.multiply(&eu, &em), &ev);
        let rhs = self.multiply(&ev, &eu);
        Ok((lhs, rhs))
    }

    /// Number of monomials of degree at most the bound.
    pub fn monomial_count(&self) -> usize {
        (0..=self.degree / 2)
            .map(|b| {
                let r = (self.degree - 2 * b) as usize;
                (r + 1) * (r + 2) / 2
            })
            .sum()
    }
}

/// First monomial, in sorted order, where two elements differ.
pub fn first_difference<F: Field>(
    lhs: &NormalOrderedElement<F>,
    rhs: &NormalOrderedElement<F>,
) -> Option<Witness> {
    let keys: std::collections::BTreeSet<Monomial> = lhs.terms.keys().chain(rhs.terms.keys()).copied().collect();
    keys.into_iter().find_map(|m| {
        let (l, r) = (lhs.coefficient(m), rhs.coefficient(m));
        (l != r).then(|| Witness::scalar(vec![m.0 as usize, m.1 as usize, m.2 as usize], l, r))
    })
}

/// Coefficientwise comparison of the two sides of the dilogarithm identity
/// up to the plane's degree, optionally in the quotient `W = 0`.
pub fn verify_dilog_identity<F: Field>(plane: &QuantumPlane<F>, set_w_zero: bool) -> Result<VerificationReport> {
    let mut failure = None;
    let report = VerificationReport::timed(RelationId::DilogIdentity, plane.monomial_count(), || {
        match plane.dilog_sides() {
            Ok((l, r)) => {
                let (l, r) = if set_w_zero { (l.project_w_zero(), r.project_w_zero()) } else { (l, r) };
                first_difference(&l, &r)
            }
            Err(e) => {
                failure = Some(e);
                None
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(report.with_detail(if set_w_zero { "quotient W = 0" } else { "free central W" })),
    }
}

/// The dilogarithm identity over ℚ(q).
pub fn verify_dilog_identity_symbolic(degree: u32, set_w_zero: bool) -> Result<VerificationReport> {
    verify_dilog_identity(&QuantumPlane::new(RationalFunction::q(), degree)?, set_w_zero)
}

/// With `W' = UV − qVU` computed by the multiplication rule, checks
/// `[U, W'] = [V, W'] = 0` up to the plane's degree.
pub fn center_check<F: Field>(plane: &QuantumPlane<F>) -> VerificationReport {
    let (u, v) = (NormalOrderedElement::u(), NormalOrderedElement::v());
    VerificationReport::timed(RelationId::CenterCheck, plane.monomial_count(), || {
        let w = plane.multiply(&u, &v).sub(&plane.multiply(&v, &u).scale(plane.q()));
        [&u, &v].into_iter().find_map(|x| {
            let l = plane.multiply(x, &w).truncate(plane.degree());
            let r = plane.multiply(&w, x).truncate(plane.degree());
            first_difference(&l, &r)
        })
    })
}
