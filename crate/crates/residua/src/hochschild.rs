//! Hochschild chains and homology of finite-dimensional (and graded,
//! degreewise-finite) unital ℚ-algebras, plus the antisymmetrization chain
//! map from differential forms.
//!
//! The differential is
//!   b(a₀⊗...⊗a_m) = Σ_{j<m} (-1)^j a₀⊗...⊗a_j a_{j+1}⊗...⊗a_m
//!                   + (-1)^m a_m a₀⊗a₁⊗...⊗a_{m-1}.
//!
//! Chains over a [`StructureAlgebra`] are stored fully expanded in basis
//! coordinates, so equal chains have identical term maps. Graded algebras
//! are handled by splitting the complex by total internal degree; for an
//! infinite graded algebra the caller supplies a truncated model that is
//! faithful within the requested window (products whose degree stays in the
//! window are never truncated).

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::Value;
use thiserror::Error;

use crate::exactlin::{rat_from_str, rat_to_string, ChainComplexData, Rat, RationalMatrix};
use crate::kforms::DifferentialForm;
use crate::laurent::permutations_signed;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HochError {
    #[error("structure constants are not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("unit is not a two-sided identity on basis element {0}")]
    BadUnit(usize),
    #[error("structure constants violate the grading at ({0}, {1})")]
    GradingViolated(usize, usize),
    #[error("b is undefined in degree 0")]
    DegreeZero,
    #[error("chains belong to different algebras")]
    AlgebraMismatch,
    #[error("algebra is not graded but a grade window was requested")]
    NotGraded,
    #[error("grade window required for graded computation")]
    WindowRequired,
    #[error("coefficients must be polynomial (no inverted variables) here")]
    LocalizedCoefficients,
    #[error("grade window [0, {0}] too small: chain has internal degree {1}")]
    WindowTooSmall(i64, i64),
    #[error("malformed algebra file: {0}")]
    BadAlgebraFile(String),
    #[error("dimension mismatch: expected {0} coordinates, got {1}")]
    BadCoordinates(usize, usize),
}

/// Finite-dimensional associative unital ℚ-algebra presented by structure
/// constants: e_i · e_j = Σ_k c^k_{ij} e_k. Associativity, the unit law and
/// (when present) the grading are verified exhaustively on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureAlgebra {
    dim: usize,
    labels: Vec<String>,
    /// mul[i][j] = sparse coordinates of e_i e_j.
    mul: Vec<Vec<Vec<(usize, Rat)>>>,
    unit: Vec<Rat>,
    grading: Option<Vec<i64>>,
}

impl StructureAlgebra {
    pub fn new(
        labels: Vec<String>,
        products: Vec<Vec<Vec<Rat>>>,
        unit: Vec<Rat>,
        grading: Option<Vec<i64>>,
    ) -> Result<Arc<Self>, HochError> {
        let dim = labels.len();
        assert_eq!(products.len(), dim, "product table rows");
        if unit.len() != dim {
            return Err(HochError::BadCoordinates(dim, unit.len()));
        }
        let mut mul = vec![vec![Vec::new(); dim]; dim];
        for (i, row) in products.iter().enumerate() {
            assert_eq!(row.len(), dim, "product table cols");
            for (j, coords) in row.iter().enumerate() {
                if coords.len() != dim {
                    return Err(HochError::BadCoordinates(dim, coords.len()));
                }
                mul[i][j] = coords
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k, c.clone()))
                    .collect();
            }
        }
        let alg = StructureAlgebra {
            dim,
            labels,
            mul,
            unit,
            grading,
        };
        alg.validate()?;
        Ok(Arc::new(alg))
    }

    fn validate(&self) -> Result<(), HochError> {
        // Associativity, exhaustively.
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let ij = self.mul_basis(i, j);
                    let left = self.mul_vec_basis_right(&ij, k);
                    let jk = self.mul_basis(j, k);
                    let right = self.mul_basis_vec_left(i, &jk);
                    if left != right {
                        return Err(HochError::NotAssociative(i, j, k));
                    }
                }
            }
        }
        // Unit acts as a two-sided identity.
        for i in 0..self.dim {
            let mut e = vec![Rat::zero(); self.dim];
            e[i] = Rat::one();
            if self.mul_vec(&self.unit, &e) != e || self.mul_vec(&e, &self.unit) != e {
                return Err(HochError::BadUnit(i));
            }
        }
        // Grading respected by every structure constant.
        if let Some(g) = &self.grading {
            assert_eq!(g.len(), self.dim, "grading length");
            for i in 0..self.dim {
                for j in 0..self.dim {
                    for (k, c) in &self.mul[i][j] {
                        if !c.is_zero() && g[*k] != g[i] + g[j] {
                            return Err(HochError::GradingViolated(i, j));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &[Rat] {
        &self.unit
    }

    pub fn grading(&self) -> Option<&[i64]> {
        self.grading.as_deref()
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.mul[i][j] == self.mul[j][i]))
    }

    /// Sparse coordinates of e_i e_j.
    pub fn mul_basis(&self, i: usize, j: usize) -> Vec<(usize, Rat)> {
        self.mul[i][j].clone()
    }

    fn mul_vec_basis_right(&self, a: &[(usize, Rat)], k: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (i, c) in a {
            for (t, d) in &self.mul[*i][k] {
                out[*t] += c.clone() * d;
            }
        }
        out
    }

    fn mul_basis_vec_left(&self, i: usize, b: &[(usize, Rat)]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (j, c) in b {
            for (t, d) in &self.mul[i][*j] {
                out[*t] += c.clone() * d;
            }
        }
        out
    }

    /// Product of two coordinate vectors.
    pub fn mul_vec(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (i, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                for (k, c) in &self.mul[i][j] {
                    out[*k] += ca.clone() * cb * c;
                }
            }
        }
        out
    }
}

/// Formal ℚ-linear combination of elementary tensors e_{i₀}⊗...⊗e_{i_m},
/// fully expanded in the basis of the coefficient algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HochChain {
    algebra: Arc<StructureAlgebra>,
    degree: usize,
    terms: BTreeMap<Vec<usize>, Rat>,
}

impl HochChain {
    pub fn zero(algebra: Arc<StructureAlgebra>, degree: usize) -> Self {
        HochChain {
            algebra,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        algebra: Arc<StructureAlgebra>,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, Rat)>,
    ) -> Self {
        let mut chain = Self::zero(algebra, degree);
        for (idx, c) in terms {
            chain.add_term(idx, c);
        }
        chain
    }

    fn add_term(&mut self, idx: Vec<usize>, c: Rat) {
        assert_eq!(idx.len(), self.degree + 1, "tensor length");
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&idx) {
            None => {
                self.terms.insert(idx, c);
            }
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(idx, s);
                }
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Rat)> {
        self.terms.iter()
    }

    pub fn algebra(&self) -> &Arc<StructureAlgebra> {
        &self.algebra
    }

    pub fn add(&self, other: &HochChain) -> Result<HochChain, HochError> {
        if self.algebra != other.algebra || self.degree != other.degree {
            return Err(HochError::AlgebraMismatch);
        }
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.add_term(idx.clone(), c.clone());
        }
        Ok(out)
    }

    /// Total internal degree of each elementary tensor (graded algebras
    /// only); errors if terms are mixed across internal degrees.
    pub fn internal_degree(&self) -> Result<Option<i64>, HochError> {
        let grading = self.algebra.grading().ok_or(HochError::NotGraded)?;
        let mut deg = None;
        for idx in self.terms.keys() {
            let d: i64 = idx.iter().map(|&i| grading[i]).sum();
            match deg {
                None => deg = Some(d),
                Some(existing) if existing == d => {}
                _ => return Err(HochError::AlgebraMismatch),
            }
        }
        Ok(deg)
    }
}

/// The Hochschild boundary. Degree drops by one; b∘b = 0.
pub fn b_apply(chain: &HochChain) -> Result<HochChain, HochError> {
    if chain.degree == 0 {
        return Err(HochError::DegreeZero);
    }
    let m = chain.degree;
    let alg = chain.algebra.clone();
    let mut out = HochChain::zero(alg.clone(), m - 1);
    for (idx, c) in &chain.terms {
        for j in 0..m {
            let sign = if j % 2 == 0 { c.clone() } else { -c.clone() };
            for (k, d) in alg.mul_basis(idx[j], idx[j + 1]) {
                let mut t = Vec::with_capacity(m);
                t.extend_from_slice(&idx[..j]);
                t.push(k);
                t.extend_from_slice(&idx[j + 2..]);
                out.add_term(t, sign.clone() * d);
            }
        }
        let sign = if m.is_multiple_of(2) { c.clone() } else { -c.clone() };
        for (k, d) in alg.mul_basis(idx[m], idx[0]) {
            let mut t = Vec::with_capacity(m);
            t.push(k);
            t.extend_from_slice(&idx[1..m]);
            out.add_term(t, sign.clone() * d);
        }
    }
    Ok(out)
}

fn tuples(dim: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * dim);
        for t in &out {
            for i in 0..dim {
                let mut t2 = t.clone();
                t2.push(i);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

fn boundary_matrix(
    alg: &Arc<StructureAlgebra>,
    domain: &[Vec<usize>],
    codomain_index: &BTreeMap<Vec<usize>, usize>,
) -> RationalMatrix {
    let mut m = RationalMatrix::zero(codomain_index.len(), domain.len());
    for (col, idx) in domain.iter().enumerate() {
        let chain = HochChain::from_terms(
            alg.clone(),
            idx.len() - 1,
            [(idx.clone(), Rat::one())],
        );
        let image = b_apply(&chain).expect("degree >= 1");
        for (t, c) in image.terms() {
            let row = *codomain_index.get(t).expect("closed under b");
            m.add_to(row, col, c).expect("in bounds");
        }
    }
    m
}

/// The Hochschild chain complex of a finite-dimensional algebra through
/// chain degree `top`: C_m = A^{⊗ m+1} with the b differential. The d∘d = 0
/// check runs on construction.
pub fn chain_complex(
    algebra: &Arc<StructureAlgebra>,
    top: usize,
) -> Result<ChainComplexData, HochError> {
    let dim = algebra.dim();
    let mut dims = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    let mut bases: Vec<Vec<Vec<usize>>> = Vec::new();
    for m in 0..=top {
        bases.push(tuples(dim, m + 1));
        dims.insert(m as i64, bases[m].len());
    }
    for m in 1..=top {
        let codomain: BTreeMap<Vec<usize>, usize> = bases[m - 1]
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        diffs.insert(m as i64, boundary_matrix(algebra, &bases[m], &codomain));
    }
    Ok(ChainComplexData::new(dims, diffs).expect("b.b = 0"))
}

/// The internal-degree-d piece of the Hochschild complex of a graded
/// algebra, through chain degree `top`.
pub fn graded_piece_complex(
    algebra: &Arc<StructureAlgebra>,
    top: usize,
    internal_degree: i64,
) -> Result<ChainComplexData, HochError> {
    let grading = algebra.grading().ok_or(HochError::NotGraded)?.to_vec();
    let dim = algebra.dim();
    let mut dims = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    let mut bases: Vec<Vec<Vec<usize>>> = Vec::new();
    for m in 0..=top {
        let piece: Vec<Vec<usize>> = tuples(dim, m + 1)
            .into_iter()
            .filter(|t| t.iter().map(|&i| grading[i]).sum::<i64>() == internal_degree)
            .collect();
        dims.insert(m as i64, piece.len());
        bases.push(piece);
    }
    for m in 1..=top {
        let codomain: BTreeMap<Vec<usize>, usize> = bases[m - 1]
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        diffs.insert(m as i64, boundary_matrix(algebra, &bases[m], &codomain));
    }
    Ok(ChainComplexData::new(dims, diffs).expect("b.b = 0"))
}

/// Dimensions of HH_m for m ≤ max_degree of a finite-dimensional algebra.
pub fn hh_dims(
    algebra: &Arc<StructureAlgebra>,
    max_degree: usize,
) -> Result<BTreeMap<usize, usize>, HochError> {
    let complex = chain_complex(algebra, max_degree + 1)?;
    let h = complex.homology_dims();
    Ok((0..=max_degree).map(|m| (m, h[&(m as i64)])).collect())
}

/// Dimensions of the internal-degree pieces of HH_m for a graded algebra:
/// result[m][d] is the degree-d piece of HH_m, for d in the window. The
/// supplied algebra must be faithful through the window (see module docs).
pub fn hh_dims_graded(
    algebra: &Arc<StructureAlgebra>,
    max_degree: usize,
    window: (i64, i64),
) -> Result<BTreeMap<usize, BTreeMap<i64, usize>>, HochError> {
    let grading = algebra.grading().ok_or(HochError::NotGraded)?.to_vec();
    if window.0 > window.1 {
        return Err(HochError::WindowRequired);
    }
    let dim = algebra.dim();
    // Basis tuples of each chain degree, bucketed by internal degree.
    let mut buckets: Vec<BTreeMap<i64, Vec<Vec<usize>>>> = Vec::new();
    for m in 0..=max_degree + 1 {
        let mut by_degree: BTreeMap<i64, Vec<Vec<usize>>> = BTreeMap::new();
        for t in tuples(dim, m + 1) {
            let d: i64 = t.iter().map(|&i| grading[i]).sum();
            if d >= window.0 && d <= window.1 {
                by_degree.entry(d).or_default().push(t);
            }
        }
        buckets.push(by_degree);
    }
    let mut out: BTreeMap<usize, BTreeMap<i64, usize>> = BTreeMap::new();
    for m in 0..=max_degree {
        let mut per_degree = BTreeMap::new();
        for d in window.0..=window.1 {
            let empty = Vec::new();
            let here = buckets[m].get(&d).unwrap_or(&empty);
            let below = buckets
                .get(m.wrapping_sub(1))
                .and_then(|b| b.get(&d))
                .cloned()
                .unwrap_or_default();
            let above = buckets[m + 1].get(&d).cloned().unwrap_or_default();
            let kernel = if m == 0 {
                here.len()
            } else {
                let codomain: BTreeMap<Vec<usize>, usize> =
                    below.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
                let b_m = boundary_matrix(algebra, here, &codomain);
                here.len() - crate::exactlin::rank(&b_m)
            };
            let here_index: BTreeMap<Vec<usize>, usize> =
                here.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
            let b_next = boundary_matrix(algebra, &above, &here_index);
            per_degree.insert(d, kernel - crate::exactlin::rank(&b_next));
        }
        out.insert(m, per_degree);
    }
    Ok(out)
}

/// Truncated graded model of ℚ[x₁,...,x_r]: basis is all monomials of total
/// degree ≤ max_total_degree, products beyond the window are zero. Faithful
/// for any computation whose internal degrees stay within the window.
pub struct PolynomialModel {
    pub algebra: Arc<StructureAlgebra>,
    index_of: BTreeMap<Vec<i64>, usize>,
    pub max_total_degree: i64,
}

impl PolynomialModel {
    pub fn new(var_names: &[String], max_total_degree: i64) -> Self {
        assert!(max_total_degree >= 0);
        let r = var_names.len();
        let mut monomials: Vec<Vec<i64>> = Vec::new();
        fn enumerate(prefix: &mut Vec<i64>, left: i64, vars_left: usize, out: &mut Vec<Vec<i64>>) {
            if vars_left == 0 {
                out.push(prefix.clone());
                return;
            }
            for e in 0..=left {
                prefix.push(e);
                enumerate(prefix, left - e, vars_left - 1, out);
                prefix.pop();
            }
        }
        enumerate(&mut Vec::new(), max_total_degree, r, &mut monomials);
        monomials.sort_by_key(|m| (m.iter().sum::<i64>(), m.clone()));
        let index_of: BTreeMap<Vec<i64>, usize> = monomials
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        let dim = monomials.len();
        let label = |m: &[i64]| -> String {
            let s: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    if e == 1 {
                        var_names[v].clone()
                    } else {
                        format!("{}^{}", var_names[v], e)
                    }
                })
                .collect();
            if s.is_empty() {
                "1".to_string()
            } else {
                s.join("*")
            }
        };
        let labels: Vec<String> = monomials.iter().map(|m| label(m)).collect();
        let grading: Vec<i64> = monomials.iter().map(|m| m.iter().sum()).collect();
        let mut products = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
        for (i, a) in monomials.iter().enumerate() {
            for (j, b) in monomials.iter().enumerate() {
                let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if let Some(&k) = index_of.get(&sum) {
                    products[i][j][k] = Rat::one();
                }
            }
        }
        let mut unit = vec![Rat::zero(); dim];
        unit[index_of[&vec![0; r]]] = Rat::one();
        let algebra = StructureAlgebra::new(labels, products, unit, Some(grading))
            .expect("monomial quotient is associative");
        PolynomialModel {
            algebra,
            index_of,
            max_total_degree,
        }
    }

    pub fn index_of_monomial(&self, exps: &[i64]) -> Option<usize> {
        self.index_of.get(exps).copied()
    }
}

/// The antisymmetrization chain of a polynomial differential form:
/// f₀ df₁∧...∧df_n maps to Σ_{π ∈ S_{n+1}} sgn(π) f_{π(0)}⊗...⊗f_{π(n)},
/// realized over a truncated graded model wide enough for the window. The
/// result is always a cycle.
pub fn hkr_chain(
    omega: &DifferentialForm,
    grade_window: i64,
) -> Result<(HochChain, Arc<StructureAlgebra>), HochError> {
    if !omega.ring().inverted_names().is_empty() {
        return Err(HochError::LocalizedCoefficients);
    }
    let names = omega.ring().vars().names().to_vec();
    let n = omega.degree();
    // Internal degree of every tensor arising from f dx_I is deg f + |I|.
    let mut needed = 0i64;
    for (_, coeff) in omega.terms() {
        for (e, _) in coeff.terms() {
            if e.iter().any(|&x| x < 0) {
                return Err(HochError::LocalizedCoefficients);
            }
            needed = needed.max(e.iter().sum::<i64>() + n as i64);
        }
    }
    if needed > grade_window {
        return Err(HochError::WindowTooSmall(grade_window, needed));
    }
    let model = PolynomialModel::new(&names, grade_window);
    let alg = model.algebra.clone();
    let mut chain = HochChain::zero(alg.clone(), n);
    let perms = permutations_signed(n + 1);
    for (wedge, coeff) in omega.terms() {
        // Factors: f (a polynomial, expanded multilinearly) then the wedge
        // variables as degree-one monomials.
        let mut var_indices = Vec::with_capacity(n);
        for &v in wedge {
            let mut e = vec![0i64; names.len()];
            e[v] = 1;
            var_indices.push(model.index_of_monomial(&e).expect("window >= 1"));
        }
        for (e, c) in coeff.terms() {
            let f_idx = model
                .index_of_monomial(e)
                .expect("checked against window above");
            let factors: Vec<usize> = std::iter::once(f_idx)
                .chain(var_indices.iter().copied())
                .collect();
            for (perm, sign) in &perms {
                let tuple: Vec<usize> = perm.iter().map(|&p| factors[p]).collect();
                let s = if *sign > 0 { c.clone() } else { -c.clone() };
                chain.add_term(tuple, s);
            }
        }
    }
    Ok((chain, alg))
}

/// Parse the algebra spec file format: a JSON document with fields
/// `dim`, `basis`, `unit`, `mul` (entries `[i, j, [coords...]]`) and an
/// optional `grading`; rationals are "p/q" strings. Missing products are
/// zero.
pub fn parse_algebra_file(text: &str) -> Result<Arc<StructureAlgebra>, HochError> {
    let bad = |msg: &str| HochError::BadAlgebraFile(msg.to_string());
    let v: Value =
        serde_json::from_str(text).map_err(|e| HochError::BadAlgebraFile(e.to_string()))?;
    let dim = v
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing integer field `dim`"))? as usize;
    let labels: Vec<String> = match v.get("basis") {
        Some(Value::Array(a)) => a
            .iter()
            .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad("basis labels must be strings")))
            .collect::<Result<_, _>>()?,
        None => (0..dim).map(|i| format!("e{i}")).collect(),
        _ => return Err(bad("`basis` must be an array of strings")),
    };
    if labels.len() != dim {
        return Err(bad("`basis` length differs from `dim`"));
    }
    let parse_coords = |x: &Value| -> Result<Vec<Rat>, HochError> {
        let arr = x.as_array().ok_or_else(|| bad("coordinate vector must be an array"))?;
        if arr.len() != dim {
            return Err(HochError::BadCoordinates(dim, arr.len()));
        }
        arr.iter()
            .map(|c| {
                let s = c.as_str().ok_or_else(|| bad("rationals must be \"p/q\" strings"))?;
                rat_from_str(s).map_err(|_| bad(&format!("invalid rational `{s}`")))
            })
            .collect()
    };
    let unit = parse_coords(v.get("unit").ok_or_else(|| bad("missing field `unit`"))?)?;
    let mut products = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
    let mul = v
        .get("mul")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing array field `mul`"))?;
    for entry in mul {
        let triple = entry.as_array().ok_or_else(|| bad("`mul` entries must be [i, j, coords]"))?;
        if triple.len() != 3 {
            return Err(bad("`mul` entries must be [i, j, coords]"));
        }
        let i = triple[0].as_u64().ok_or_else(|| bad("mul index"))? as usize;
        let j = triple[1].as_u64().ok_or_else(|| bad("mul index"))? as usize;
        if i >= dim || j >= dim {
            return Err(bad("mul index out of range"));
        }
        products[i][j] = parse_coords(&triple[2])?;
    }
    let grading = match v.get("grading") {
        None => None,
        Some(Value::Array(a)) => Some(
            a.iter()
                .map(|x| x.as_i64().ok_or_else(|| bad("grading entries must be integers")))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        _ => return Err(bad("`grading` must be an array of integers")),
    };
    StructureAlgebra::new(labels, products, unit, grading)
}

/// Serialize an algebra in the same file format.
pub fn algebra_to_file(alg: &StructureAlgebra) -> String {
    let dim = alg.dim();
    let coords_json = |v: &[Rat]| -> Value {
        Value::Array(v.iter().map(|c| Value::String(rat_to_string(c))).collect())
    };
    let mut mul = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            let sparse = alg.mul_basis(i, j);
            if sparse.is_empty() {
                continue;
            }
            let mut dense = vec![Rat::zero(); dim];
            for (k, c) in sparse {
                dense[k] = c;
            }
            mul.push(Value::Array(vec![
                Value::from(i as u64),
                Value::from(j as u64),
                coords_json(&dense),
            ]));
        }
    }
    let mut doc = serde_json::Map::new();
    doc.insert("dim".into(), Value::from(dim as u64));
    doc.insert(
        "basis".into(),
        Value::Array(alg.labels().iter().map(|l| Value::String(l.clone())).collect()),
    );
    doc.insert("unit".into(), coords_json(alg.unit()));
    doc.insert("mul".into(), Value::Array(mul));
    if let Some(g) = alg.grading() {
        doc.insert(
            "grading".into(),
            Value::Array(g.iter().map(|&d| Value::from(d)).collect()),
        );
    }
    serde_json::to_string_pretty(&Value::Object(doc)).expect("valid json")
}

/// ℚ itself.
pub fn ground_field() -> Arc<StructureAlgebra> {
    StructureAlgebra::new(
        vec!["1".into()],
        vec![vec![vec![Rat::one()]]],
        vec![Rat::one()],
        None,
    )
    .expect("field axioms")
}

/// ℚ[x]/(x^n) with the basis 1, x, ..., x^{n-1}; graded by exponent.
pub fn truncated_polynomial_algebra(n: usize) -> Arc<StructureAlgebra> {
    assert!(n >= 1);
    let labels: Vec<String> = (0..n)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        })
        .collect();
    let mut products = vec![vec![vec![Rat::zero(); n]; n]; n];
    for (i, row) in products.iter_mut().enumerate() {
        for (j, coords) in row.iter_mut().enumerate() {
            if i + j < n {
                coords[i + j] = Rat::one();
            }
        }
    }
    let mut unit = vec![Rat::zero(); n];
    unit[0] = Rat::one();
    StructureAlgebra::new(labels, products, unit, Some((0..n as i64).collect()))
        .expect("truncation is associative")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat_int;
    use crate::kforms::RingSpec;
    use crate::laurent::LaurentPoly;

    fn dual_numbers() -> Arc<StructureAlgebra> {
        truncated_polynomial_algebra(2)
    }

    #[test]
    fn associativity_check_rejects_bad_constants() {
        // e1·e1 = e2, e2·e1 = e0 but e1·e2 = 0, so (e1 e1)e1 != e1(e1 e1).
        let mut products = vec![vec![vec![Rat::zero(); 3]; 3]; 3];
        for i in 0..3 {
            products[0][i][i] = Rat::one();
            products[i][0][i] = Rat::one();
        }
        products[0][0] = vec![Rat::one(), Rat::zero(), Rat::zero()];
        products[1][1][2] = Rat::one();
        products[2][1][0] = rat_int(1);
        let r = StructureAlgebra::new(
            vec!["1".into(), "a".into(), "b".into()],
            products,
            vec![Rat::one(), Rat::zero(), Rat::zero()],
            None,
        );
        assert!(matches!(r, Err(HochError::NotAssociative(_, _, _))));
    }

    #[test]
    fn b_on_two_tensor_is_commutator() {
        // b(a₀⊗a₁) = a₀a₁ - a₁a₀; zero over a commutative algebra.
        let a = dual_numbers();
        let chain = HochChain::from_terms(a.clone(), 1, [(vec![0, 1], Rat::one())]);
        let b = b_apply(&chain).unwrap();
        assert!(b.is_zero());
        // Over upper triangular 2x2 matrices the commutator survives:
        // b(e00⊗e01) = e00e01 - e01e00 = e01.
        let mut products = vec![vec![vec![Rat::zero(); 3]; 3]; 3];
        products[0][0][0] = Rat::one();
        products[0][1][1] = Rat::one();
        products[1][2][1] = Rat::one();
        products[2][2][2] = Rat::one();
        let upper = StructureAlgebra::new(
            vec!["e00".into(), "e01".into(), "e11".into()],
            products,
            vec![Rat::one(), Rat::zero(), Rat::one()],
            None,
        )
        .unwrap();
        let chain = HochChain::from_terms(upper.clone(), 1, [(vec![0, 1], Rat::one())]);
        let expect = HochChain::from_terms(upper, 0, [(vec![1], Rat::one())]);
        assert_eq!(b_apply(&chain).unwrap(), expect);
    }

    #[test]
    fn b_on_equal_factors_vanishes() {
        let a = dual_numbers();
        let chain = HochChain::from_terms(a.clone(), 1, [(vec![1, 1], Rat::one())]);
        assert!(b_apply(&chain).unwrap().is_zero());
    }

    #[test]
    fn b_three_tensor_formula() {
        // b(a₀⊗a₁⊗a₂) = a₀a₁⊗a₂ - a₀⊗a₁a₂ + a₂a₀⊗a₁ over ℚ[x]/(x³),
        // checked on (x, x, x²): products x·x = x², x·x² = 0, x²·x = 0.
        let a = truncated_polynomial_algebra(3);
        let chain = HochChain::from_terms(a.clone(), 2, [(vec![1, 1, 2], Rat::one())]);
        let b = b_apply(&chain).unwrap();
        let expect = HochChain::from_terms(a, 1, [(vec![2, 2], Rat::one())]);
        assert_eq!(b, expect);
    }

    #[test]
    fn b_squared_zero_noncommutative() {
        // 2x2 upper triangular matrices: unit e0+e2, basis e00, e01, e11.
        let mut products = vec![vec![vec![Rat::zero(); 3]; 3]; 3];
        // e00*e00 = e00, e00*e01 = e01, e01*e11 = e01, e11*e11 = e11.
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
        assert!(!a.is_commutative());
        let chain = HochChain::from_terms(
            a.clone(),
            3,
            [
                (vec![0, 1, 2, 0], rat_int(3)),
                (vec![1, 2, 0, 1], rat_int(-2)),
                (vec![2, 2, 1, 0], rat_int(5)),
            ],
        );
        let bb = b_apply(&b_apply(&chain).unwrap()).unwrap();
        assert!(bb.is_zero());
    }

    #[test]
    fn hh_of_ground_field() {
        let h = hh_dims(&ground_field(), 3).unwrap();
        assert_eq!(h[&0], 1);
        assert_eq!(h[&1], 0);
        assert_eq!(h[&2], 0);
        assert_eq!(h[&3], 0);
    }

    #[test]
    fn hh_of_dual_numbers() {
        let h = hh_dims(&dual_numbers(), 1).unwrap();
        assert_eq!(h[&0], 2);
        assert_eq!(h[&1], 1);
    }

    #[test]
    fn hh_graded_polynomial_ring_window() {
        // ℚ[x] through internal degrees 0..3, modelled by ℚ[x]/(x⁴):
        // HH₀ piece is 1 in each degree, HH₁ pieces match Ω¹ = ℚ[x]dx,
        // HH₂ pieces vanish.
        let a = truncated_polynomial_algebra(4);
        let h = hh_dims_graded(&a, 2, (0, 3)).unwrap();
        for d in 0..=3 {
            assert_eq!(h[&0][&d], 1, "HH0 piece {d}");
            assert_eq!(h[&1][&d], usize::from(d >= 1), "HH1 piece {d}");
            assert_eq!(h[&2][&d], 0, "HH2 piece {d}");
        }
    }

    #[test]
    fn hkr_chain_of_dx() {
        // hkr(1 dx) = 1⊗x - x⊗1.
        let ring = RingSpec::polynomial(vec!["x"]).unwrap();
        let omega = DifferentialForm::from_coeff_and_wedge(
            &ring,
            LaurentPoly::one(ring.vars().clone()),
            &["x"],
        )
        .unwrap();
        let (chain, alg) = hkr_chain(&omega, 2).unwrap();
        let one = 0usize;
        let x = 1usize;
        assert_eq!(alg.labels()[one], "1");
        assert_eq!(alg.labels()[x], "x");
        let expect = HochChain::from_terms(
            alg,
            1,
            [(vec![one, x], Rat::one()), (vec![x, one], -Rat::one())],
        );
        assert_eq!(chain, expect);
    }

    #[test]
    fn hkr_chain_x_dx_vanishes() {
        let ring = RingSpec::polynomial(vec!["x"]).unwrap();
        let x = LaurentPoly::var(ring.vars().clone(), "x").unwrap();
        let omega = DifferentialForm::from_coeff_and_wedge(&ring, x, &["x"]).unwrap();
        let (chain, _) = hkr_chain(&omega, 3).unwrap();
        assert!(chain.is_zero());
    }

    #[test]
    fn hkr_chain_two_form_is_cycle() {
        // hkr(1 dx∧dy): six signed terms; b of it vanishes.
        let ring = RingSpec::polynomial(vec!["x", "y"]).unwrap();
        let omega = DifferentialForm::from_coeff_and_wedge(
            &ring,
            LaurentPoly::one(ring.vars().clone()),
            &["x", "y"],
        )
        .unwrap();
        let (chain, _) = hkr_chain(&omega, 3).unwrap();
        assert_eq!(chain.terms().count(), 6);
        assert!(b_apply(&chain).unwrap().is_zero());
    }

    #[test]
    fn hkr_rejects_localized_coefficients() {
        let ring = RingSpec::localized(vec!["x"], &["x"]).unwrap();
        let f = LaurentPoly::monomial(ring.vars().clone(), vec![-1], Rat::one());
        let omega = DifferentialForm::from_coeff_and_wedge(&ring, f, &["x"]).unwrap();
        assert!(matches!(
            hkr_chain(&omega, 4),
            Err(HochError::LocalizedCoefficients)
        ));
    }

    #[test]
    fn algebra_file_round_trip() {
        let a = truncated_polynomial_algebra(3);
        let text = algebra_to_file(&a);
        let b = parse_algebra_file(&text).unwrap();
        assert_eq!(*a, *b);
        assert!(parse_algebra_file("{\"dim\": 1}").is_err());
    }
}
