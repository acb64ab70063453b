//! Kähler differential forms for polynomial rings and their monomial
//! localizations: wedge products, the exterior derivative, and the
//! presentation-based Ω¹ computation used as the degree-one homology oracle.
//!
//! A form over R[t_S⁻¹] is stored with Laurent-polynomial coefficients whose
//! negative exponents are confined to the inverted variables; that turns the
//! quotient presentations of local cohomology into membership tests on
//! exponent signs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::exactlin::{rank, Rat, RationalMatrix};
use crate::hochschild::StructureAlgebra;
use crate::laurent::{LaurentError, LaurentPoly, VarOrder};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KformError {
    #[error("forms live over different rings")]
    RingMismatch,
    #[error("inverted set must be a subset of the ring variables")]
    BadInversion,
    #[error("coefficient has a negative exponent in non-inverted variable `{0}`")]
    NegativeExponent(String),
    #[error("wedge indices must be strictly increasing and in range")]
    BadWedgeIndices,
    #[error("algebra is not commutative")]
    NotCommutative,
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// A polynomial ring with a chosen set of inverted variables: R[t_S⁻¹].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingSpec {
    vars: Arc<VarOrder>,
    inverted: BTreeSet<usize>,
}

impl RingSpec {
    pub fn polynomial<S: Into<String>>(vars: Vec<S>) -> Result<Self, KformError> {
        Ok(RingSpec {
            vars: VarOrder::new(vars)?,
            inverted: BTreeSet::new(),
        })
    }

    pub fn localized<S: Into<String>>(vars: Vec<S>, inverted: &[&str]) -> Result<Self, KformError> {
        let vars = VarOrder::new(vars)?;
        let mut set = BTreeSet::new();
        for name in inverted {
            set.insert(vars.index_of(name).map_err(|_| KformError::BadInversion)?);
        }
        Ok(RingSpec { vars, inverted: set })
    }

    pub fn from_parts(vars: Arc<VarOrder>, inverted: BTreeSet<usize>) -> Result<Self, KformError> {
        if inverted.iter().any(|&v| v >= vars.len()) {
            return Err(KformError::BadInversion);
        }
        Ok(RingSpec { vars, inverted })
    }

    pub fn vars(&self) -> &Arc<VarOrder> {
        &self.vars
    }

    pub fn inverted(&self) -> &BTreeSet<usize> {
        &self.inverted
    }

    pub fn inverted_names(&self) -> Vec<String> {
        self.inverted
            .iter()
            .map(|&v| self.vars.names()[v].clone())
            .collect()
    }

    /// The same variables with additional inversions.
    pub fn invert_more(&self, names: &[&str]) -> Result<RingSpec, KformError> {
        let mut inverted = self.inverted.clone();
        for name in names {
            inverted.insert(self.vars.index_of(name).map_err(|_| KformError::BadInversion)?);
        }
        Ok(RingSpec {
            vars: self.vars.clone(),
            inverted,
        })
    }

    /// Does `f` live in this ring (negative exponents only in inverted
    /// variables)?
    pub fn admits(&self, f: &LaurentPoly) -> Result<(), KformError> {
        for (e, _) in f.terms() {
            for (v, &x) in e.iter().enumerate() {
                if x < 0 && !self.inverted.contains(&v) {
                    return Err(KformError::NegativeExponent(self.vars.names()[v].clone()));
                }
            }
        }
        Ok(())
    }
}

/// Differential form of fixed degree: map from strictly increasing wedge
/// index sets to Laurent-polynomial coefficients in the ring.
#[derive(Clone, PartialEq, Eq)]
pub struct DifferentialForm {
    ring: RingSpec,
    degree: usize,
    terms: BTreeMap<Vec<usize>, LaurentPoly>,
}

impl DifferentialForm {
    pub fn zero(ring: &RingSpec, degree: usize) -> Self {
        DifferentialForm {
            ring: ring.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// A ring element as a 0-form.
    pub fn function(ring: &RingSpec, f: LaurentPoly) -> Result<Self, KformError> {
        ring.admits(&f)?;
        let mut form = Self::zero(ring, 0);
        form.add_term(vec![], f)?;
        Ok(form)
    }

    /// f · dx_{i₁}∧...∧dx_{iₙ} with the wedge given by variable names.
    pub fn from_coeff_and_wedge(
        ring: &RingSpec,
        coeff: LaurentPoly,
        wedge_vars: &[&str],
    ) -> Result<Self, KformError> {
        let mut wedge = Vec::with_capacity(wedge_vars.len());
        for name in wedge_vars {
            wedge.push(ring.vars().index_of(name)?);
        }
        let mut sorted = wedge.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != wedge.len() {
            // Repeated differential: the form is zero.
            return Ok(Self::zero(ring, wedge.len()));
        }
        let sign = sort_sign(&wedge);
        let mut form = Self::zero(ring, wedge.len());
        ring.admits(&coeff)?;
        form.add_term(sorted, if sign > 0 { coeff } else { coeff.neg() })?;
        Ok(form)
    }

    pub fn from_terms(
        ring: &RingSpec,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, LaurentPoly)>,
    ) -> Result<Self, KformError> {
        let mut form = Self::zero(ring, degree);
        for (w, c) in terms {
            ring.admits(&c)?;
            form.add_term(w, c)?;
        }
        Ok(form)
    }

    fn add_term(&mut self, wedge: Vec<usize>, coeff: LaurentPoly) -> Result<(), KformError> {
        if wedge.len() != self.degree
            || wedge.windows(2).any(|w| w[0] >= w[1])
            || wedge.iter().any(|&v| v >= self.ring.vars.len())
        {
            return Err(KformError::BadWedgeIndices);
        }
        if coeff.is_zero() {
            return Ok(());
        }
        match self.terms.remove(&wedge) {
            None => {
                self.terms.insert(wedge, coeff);
            }
            Some(old) => {
                let s = old.add(&coeff)?;
                if !s.is_zero() {
                    self.terms.insert(wedge, s);
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &DifferentialForm) -> Result<DifferentialForm, KformError> {
        if self.ring != other.ring || self.degree != other.degree {
            return Err(KformError::RingMismatch);
        }
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> DifferentialForm {
        DifferentialForm {
            ring: self.ring.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> DifferentialForm {
        if c.is_zero() {
            return Self::zero(&self.ring, self.degree);
        }
        DifferentialForm {
            ring: self.ring.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(w, f)| (w.clone(), f.scale(c))).collect(),
        }
    }

    /// Reinterpret the same data over a ring with more inversions.
    pub fn into_ring(&self, ring: &RingSpec) -> Result<DifferentialForm, KformError> {
        if ring.vars() != self.ring.vars() {
            return Err(KformError::RingMismatch);
        }
        DifferentialForm::from_terms(ring, self.degree, self.terms.clone())
    }
}

impl fmt::Debug for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.ring.vars.names();
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let wedge: Vec<String> = w.iter().map(|&v| format!("d{}", names[v])).collect();
                if wedge.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c}) {}", wedge.join("^"))
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

/// Sign of the permutation sorting `indices` (+1/-1); indices distinct.
fn sort_sign(indices: &[usize]) -> i64 {
    let mut inv = 0usize;
    for i in 0..indices.len() {
        for j in i + 1..indices.len() {
            if indices[i] > indices[j] {
                inv += 1;
            }
        }
    }
    if inv.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Merge two strictly increasing disjoint index sets, returning the merged
/// set and the Koszul sign of the shuffle.
fn merge_wedge(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut merged = Vec::with_capacity(a.len() + b.len());
    merged.extend_from_slice(a);
    merged.extend_from_slice(b);
    let mut sorted = merged.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sorted, sort_sign(&merged)))
}

/// Graded-commutative exterior product.
pub fn wedge(a: &DifferentialForm, b: &DifferentialForm) -> Result<DifferentialForm, KformError> {
    if a.ring != b.ring {
        return Err(KformError::RingMismatch);
    }
    let mut out = DifferentialForm::zero(&a.ring, a.degree + b.degree);
    for (wa, ca) in &a.terms {
        for (wb, cb) in &b.terms {
            if let Some((w, sign)) = merge_wedge(wa, wb) {
                let c = ca.mul(cb)?;
                out.add_term(w, if sign > 0 { c } else { c.neg() })?;
            }
        }
    }
    Ok(out)
}

/// d(f dx_I) = Σ_v (∂f/∂v) dv ∧ dx_I. Satisfies d∘d = 0.
pub fn exterior_derivative(a: &DifferentialForm) -> Result<DifferentialForm, KformError> {
    let names = a.ring.vars.names().to_vec();
    let mut out = DifferentialForm::zero(&a.ring, a.degree + 1);
    for (w, c) in &a.terms {
        for (v, name) in names.iter().enumerate() {
            let dc = c.derivative(name)?;
            if dc.is_zero() {
                continue;
            }
            if let Some((merged, sign)) = merge_wedge(&[v], w) {
                out.add_term(merged, if sign > 0 { dc } else { dc.neg() })?;
            }
        }
    }
    Ok(out)
}

/// Presentation report for Ω¹ of a commutative finite-dimensional algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KahlerReport {
    pub dim: usize,
    /// Labels "e_a d(e_k)" of a basis of representatives.
    pub basis: Vec<String>,
}

/// Ω¹_{A/ℚ} from the presentation: free module on d(e_k) for basis elements,
/// modulo the Leibniz relations d(e_i e_j) = e_i d(e_j) + e_j d(e_i)
/// multiplied through by every basis element. Independent oracle for the
/// degree-one Hochschild homology of commutative algebras.
pub fn kahler_presentation(algebra: &Arc<StructureAlgebra>) -> Result<KahlerReport, KformError> {
    if !algebra.is_commutative() {
        return Err(KformError::NotCommutative);
    }
    let d = algebra.dim();
    // Column (a, k) is the class of e_a ⊗ d(e_k).
    let col = |a: usize, k: usize| a * d + k;
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(d * d * d);
    for l in 0..d {
        for i in 0..d {
            for j in 0..d {
                let mut row = vec![Rat::zero(); d * d];
                // e_l · d(e_i e_j) = Σ_k c^k_{ij} e_l ⊗ d(e_k)
                for (k, c) in algebra.mul_basis(i, j) {
                    row[col(l, k)] += c;
                }
                // - e_l e_i ⊗ d(e_j)
                for (a, c) in algebra.mul_basis(l, i) {
                    row[col(a, j)] -= c;
                }
                // - e_l e_j ⊗ d(e_i)
                for (a, c) in algebra.mul_basis(l, j) {
                    row[col(a, i)] -= c;
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let relations = RationalMatrix::from_rows(if rows.is_empty() {
        vec![vec![Rat::zero(); d * d]]
    } else {
        rows
    });
    let r = rank(&relations);
    let dim = d * d - r;
    // Representatives: non-pivot columns of the relation matrix.
    let pivot_cols: BTreeSet<usize> = pivot_columns(&relations).into_iter().collect();
    let labels = algebra.labels();
    let basis: Vec<String> = (0..d * d)
        .filter(|c| !pivot_cols.contains(c))
        .map(|c| format!("{} d({})", labels[c / d], labels[c % d]))
        .collect();
    debug_assert_eq!(basis.len(), dim);
    Ok(KahlerReport { dim, basis })
}

fn pivot_columns(m: &RationalMatrix) -> Vec<usize> {
    // Re-run elimination through the public kernel interface: a column is a
    // pivot iff it is not free, and kernel_basis marks free columns by the
    // positions of their unit coordinates.
    let kernel = crate::exactlin::kernel_basis(m);
    let mut free: BTreeSet<usize> = BTreeSet::new();
    'outer: for v in &kernel {
        // Each kernel vector has exactly one coordinate equal to 1 at its
        // free column with all other free columns zero; recover it.
        for (j, x) in v.iter().enumerate() {
            if *x == Rat::from_integer(1.into())
                && kernel
                    .iter()
                    .filter(|w| !std::ptr::eq(*w, v))
                    .all(|w| w[j].is_zero())
            {
                free.insert(j);
                continue 'outer;
            }
        }
    }
    (0..m.cols()).filter(|j| !free.contains(j)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat_int;
    use crate::hochschild::{ground_field, truncated_polynomial_algebra};
    use num_traits::One;

    fn xy_ring() -> RingSpec {
        RingSpec::polynomial(vec!["x", "y"]).unwrap()
    }

    fn var(ring: &RingSpec, name: &str) -> LaurentPoly {
        LaurentPoly::var(ring.vars().clone(), name).unwrap()
    }

    fn one_form(ring: &RingSpec, coeff: LaurentPoly, var: &str) -> DifferentialForm {
        DifferentialForm::from_coeff_and_wedge(ring, coeff, &[var]).unwrap()
    }

    #[test]
    fn wedge_dx_dx_is_zero() {
        let r = xy_ring();
        let dx = one_form(&r, LaurentPoly::one(r.vars().clone()), "x");
        assert!(wedge(&dx, &dx).unwrap().is_zero());
    }

    #[test]
    fn wedge_antisymmetry() {
        let r = xy_ring();
        let dx = one_form(&r, LaurentPoly::one(r.vars().clone()), "x");
        let dy = one_form(&r, LaurentPoly::one(r.vars().clone()), "y");
        let xy = wedge(&dx, &dy).unwrap();
        let yx = wedge(&dy, &dx).unwrap();
        assert_eq!(xy, yx.neg());
        assert!(!xy.is_zero());
    }

    #[test]
    fn wedge_with_coefficients() {
        // (x dy) ∧ (y dx) = -xy dx∧dy
        let r = xy_ring();
        let a = one_form(&r, var(&r, "x"), "y");
        let b = one_form(&r, var(&r, "y"), "x");
        let got = wedge(&a, &b).unwrap();
        let xy = var(&r, "x").mul(&var(&r, "y")).unwrap();
        let expect = DifferentialForm::from_terms(&r, 2, [(vec![0, 1], xy.neg())]).unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn exterior_derivative_examples() {
        let r = xy_ring();
        // d(x) = dx
        let x0 = DifferentialForm::function(&r, var(&r, "x")).unwrap();
        let dx = one_form(&r, LaurentPoly::one(r.vars().clone()), "x");
        assert_eq!(exterior_derivative(&x0).unwrap(), dx);
        // d(xy) = y dx + x dy
        let xy = DifferentialForm::function(&r, var(&r, "x").mul(&var(&r, "y")).unwrap()).unwrap();
        let expect = one_form(&r, var(&r, "y"), "x")
            .add(&one_form(&r, var(&r, "x"), "y"))
            .unwrap();
        assert_eq!(exterior_derivative(&xy).unwrap(), expect);
        // d(d(x²y)) = 0
        let x2y = DifferentialForm::function(
            &r,
            var(&r, "x").pow(2).unwrap().mul(&var(&r, "y")).unwrap(),
        )
        .unwrap();
        let dd = exterior_derivative(&exterior_derivative(&x2y).unwrap()).unwrap();
        assert!(dd.is_zero());
    }

    #[test]
    fn ring_rejects_stray_negative_exponents() {
        let r = xy_ring();
        let bad = LaurentPoly::monomial(r.vars().clone(), vec![-1, 0], rat_int(1));
        assert!(matches!(
            DifferentialForm::function(&r, bad),
            Err(KformError::NegativeExponent(_))
        ));
        let loc = RingSpec::localized(vec!["x", "y"], &["x"]).unwrap();
        let ok = LaurentPoly::monomial(loc.vars().clone(), vec![-1, 0], rat_int(1));
        assert!(DifferentialForm::function(&loc, ok).is_ok());
    }

    #[test]
    fn kahler_of_ground_field_vanishes() {
        assert_eq!(kahler_presentation(&ground_field()).unwrap().dim, 0);
    }

    #[test]
    fn kahler_of_dual_numbers() {
        // Relation 2ε dε = 0 kills ε dε in characteristic zero.
        let report = kahler_presentation(&truncated_polynomial_algebra(2)).unwrap();
        assert_eq!(report.dim, 1);
    }

    #[test]
    fn kahler_of_x_cubed() {
        // ℚ[x]/(x³): relation 3x² dx = 0; Ω¹ has basis dx, x dx.
        let report = kahler_presentation(&truncated_polynomial_algebra(3)).unwrap();
        assert_eq!(report.dim, 2);
    }

    #[test]
    fn kahler_rejects_noncommutative() {
        let mut products = vec![vec![vec![Rat::zero(); 3]; 3]; 3];
        products[0][0][0] = Rat::one();
        products[0][1][1] = Rat::one();
        products[1][2][1] = Rat::one();
        products[2][2][2] = Rat::one();
        let a = StructureAlgebra::new(
            vec!["e00".into(), "e01".into(), "e11".into()],
            products,
            vec![Rat::one(), Rat::zero(), Rat::one()],
            None,
        )
        .unwrap();
        assert!(matches!(
            kahler_presentation(&a),
            Err(KformError::NotCommutative)
        ));
    }
}
