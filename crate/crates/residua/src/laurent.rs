//! Multivariate Laurent polynomials over ℚ with an iterated-Laurent variable
//! order, and the coefficient-extraction residue oracles.
//!
//! The variable order is significant: `names[0]` is the innermost variable
//! t₁ of k((t₁))...((tₙ)). Sign conventions elsewhere depend on it.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactlin::{rat_to_string, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LaurentError {
    #[error("variable order mismatch: {0:?} vs {1:?}")]
    OrderMismatch(Vec<String>, Vec<String>),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("expected {expected} forms dg, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("variable names must be distinct and nonempty")]
    BadOrder,
    #[error("negative powers require a single monomial")]
    NotAUnit,
}

/// Ordered list of variable names, innermost first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct VarOrder {
    names: Vec<String>,
}

impl VarOrder {
    pub fn new<S: Into<String>>(names: Vec<S>) -> Result<Arc<Self>, LaurentError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(LaurentError::BadOrder);
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || names[..i].contains(n) {
                return Err(LaurentError::BadOrder);
            }
        }
        Ok(Arc::new(VarOrder { names }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize, LaurentError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| LaurentError::UnknownVariable(name.to_string()))
    }
}

/// Laurent polynomial: finitely many terms, exponents in ℤ^n, nonzero
/// coefficients only.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    order: Arc<VarOrder>,
    terms: BTreeMap<Vec<i64>, Rat>,
}

impl LaurentPoly {
    pub fn zero(order: Arc<VarOrder>) -> Self {
        LaurentPoly {
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(order: Arc<VarOrder>, c: Rat) -> Self {
        let mut p = Self::zero(order);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.order.len()], c);
        }
        p
    }

    pub fn one(order: Arc<VarOrder>) -> Self {
        Self::constant(order, Rat::one())
    }

    /// c * t^exps.
    pub fn monomial(order: Arc<VarOrder>, exps: Vec<i64>, c: Rat) -> Self {
        assert_eq!(exps.len(), order.len(), "exponent arity");
        let mut p = Self::zero(order);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// The variable `name` as a polynomial.
    pub fn var(order: Arc<VarOrder>, name: &str) -> Result<Self, LaurentError> {
        let idx = order.index_of(name)?;
        let mut exps = vec![0i64; order.len()];
        exps[idx] = 1;
        Ok(Self::monomial(order, exps, Rat::one()))
    }

    pub fn from_terms(
        order: Arc<VarOrder>,
        terms: impl IntoIterator<Item = (Vec<i64>, Rat)>,
    ) -> Self {
        let mut p = Self::zero(order);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn order(&self) -> &Arc<VarOrder> {
        &self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, exps: Vec<i64>, c: Rat) {
        assert_eq!(exps.len(), self.order.len(), "exponent arity");
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&exps) {
            None => {
                self.terms.insert(exps, c);
            }
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(exps, s);
                }
            }
        }
    }

    fn check_order(&self, other: &LaurentPoly) -> Result<(), LaurentError> {
        if self.order != other.order {
            return Err(LaurentError::OrderMismatch(
                self.order.names.clone(),
                other.order.names.clone(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_order(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            order: self.order.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> LaurentPoly {
        if c.is_zero() {
            return Self::zero(self.order.clone());
        }
        LaurentPoly {
            order: self.order.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.clone(), x.clone() * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_order(other)?;
        let mut out = Self::zero(self.order.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.clone() * cb);
            }
        }
        Ok(out)
    }

    /// Integer power; negative exponents are allowed only for single
    /// monomials (units of the Laurent ring).
    pub fn pow(&self, k: i64) -> Result<LaurentPoly, LaurentError> {
        if k == 0 {
            return Ok(Self::one(self.order.clone()));
        }
        if k < 0 {
            if self.terms.len() != 1 {
                return Err(LaurentError::NotAUnit);
            }
            let (e, c) = self.terms.iter().next().unwrap();
            let inv = Self::monomial(
                self.order.clone(),
                e.iter().map(|x| -x).collect(),
                c.recip(),
            );
            return inv.pow(-k);
        }
        let mut acc = Self::one(self.order.clone());
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Formal partial derivative with respect to `name`.
    pub fn derivative(&self, name: &str) -> Result<LaurentPoly, LaurentError> {
        let idx = self.order.index_of(name)?;
        let mut out = Self::zero(self.order.clone());
        for (e, c) in &self.terms {
            let k = e[idx];
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[idx] -= 1;
            out.add_term(e2, c.clone() * Rat::from_integer(k.into()));
        }
        Ok(out)
    }

    /// Exact coefficient of t^exps (zero if absent).
    pub fn coeff(&self, exps: &[i64]) -> Rat {
        assert_eq!(exps.len(), self.order.len(), "exponent arity");
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    /// Per-variable (min, max) exponent over the support; None if zero.
    pub fn support_box(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        let (mut lo, mut hi) = (first.clone(), first);
        for e in it {
            for (v, &x) in e.iter().enumerate() {
                lo[v] = lo[v].min(x);
                hi[v] = hi[v].max(x);
            }
        }
        Some((lo, hi))
    }
}

// Rendering: "3/2*t1^-1*t2 + 1" style, deterministic term order from the
// BTreeMap.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            let coeff = rat_to_string(c);
            for (v, &k) in e.iter().enumerate() {
                if k == 1 {
                    factors.push(self.order.names()[v].clone());
                } else if k != 0 {
                    factors.push(format!("{}^{}", self.order.names()[v], k));
                }
            }
            if factors.is_empty() {
                write!(f, "{coeff}")?;
            } else if coeff == "1" {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", coeff, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// det(∂g_i/∂t_j) for n = gs.len() = #variables.
pub fn jacobian_det(gs: &[LaurentPoly]) -> Result<LaurentPoly, LaurentError> {
    let order = gs
        .first()
        .map(|g| g.order().clone())
        .ok_or(LaurentError::ArityMismatch {
            expected: 1,
            got: 0,
        })?;
    let n = order.len();
    if gs.len() != n {
        return Err(LaurentError::ArityMismatch {
            expected: n,
            got: gs.len(),
        });
    }
    for g in gs {
        if g.order() != &order {
            return Err(LaurentError::OrderMismatch(
                order.names().to_vec(),
                g.order().names().to_vec(),
            ));
        }
    }
    // Partial derivatives matrix, then permutation expansion (n is small).
    let mut partials = Vec::with_capacity(n);
    for g in gs {
        let mut row = Vec::with_capacity(n);
        for name in order.names() {
            row.push(g.derivative(name)?);
        }
        partials.push(row);
    }
    let mut det = LaurentPoly::zero(order.clone());
    for (perm, sign) in permutations_signed(n) {
        let mut prod = LaurentPoly::constant(order.clone(), Rat::from_integer(sign.into()));
        for (i, &j) in perm.iter().enumerate() {
            prod = prod.mul(&partials[i][j])?;
        }
        det = det.add(&prod)?;
    }
    Ok(det)
}

/// All permutations of 0..n with their signs (Heap's algorithm).
pub fn permutations_signed(n: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    fn heap(k: usize, items: &mut Vec<usize>, sign: &mut i64, out: &mut Vec<(Vec<usize>, i64)>) {
        if k <= 1 {
            out.push((items.clone(), *sign));
            return;
        }
        for i in 0..k {
            heap(k - 1, items, sign, out);
            if i < k - 1 {
                if k.is_multiple_of(2) {
                    items.swap(i, k - 1);
                } else {
                    items.swap(0, k - 1);
                }
                *sign = -*sign;
            }
        }
    }
    let mut sign = 1i64;
    heap(n, &mut items, &mut sign, &mut out);
    out
}

/// The classical n-dimensional residue of f dg₁∧...∧dgₙ: the coefficient of
/// t₁⁻¹...tₙ⁻¹ in f · det(∂g_i/∂t_j). This is the independent oracle every
/// operator-theoretic residue is checked against.
pub fn residue_oracle_nd(f: &LaurentPoly, gs: &[LaurentPoly]) -> Result<Rat, LaurentError> {
    let n = f.order().len();
    if gs.len() != n {
        return Err(LaurentError::ArityMismatch {
            expected: n,
            got: gs.len(),
        });
    }
    for g in gs {
        if g.order() != f.order() {
            return Err(LaurentError::OrderMismatch(
                f.order().names().to_vec(),
                g.order().names().to_vec(),
            ));
        }
    }
    let jac = jacobian_det(gs)?;
    let prod = f.mul(&jac)?;
    Ok(prod.coeff(&vec![-1; n]))
}
