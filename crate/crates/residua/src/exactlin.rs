//! Exact rational scalars, sparse matrices over ℚ and homology of bounded
//! chain complexes.
//!
//! Every other module reduces its linear-algebra questions to [`rank`],
//! [`kernel_basis`] or [`ChainComplexData::homology_dims`]. All arithmetic is
//! exact; there is no tolerance anywhere.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact scalar type. `BigRational` keeps the gcd-reduced, positive
/// denominator invariants for us.
pub type Rat = BigRational;

/// Shorthand for a `Rat` from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for a `Rat` fraction.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical "p/q" rendering; integers print without the "/q" part.
pub fn rat_to_string(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse an exact rational literal: `p` or `p/q`.
pub fn rat_from_str(s: &str) -> Result<Rat, LinError> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt, LinError> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| LinError::BadRational(s.to_string()))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(LinError::BadRational(s.to_string()));
            }
            Ok(Rat::new(parse_int(p)?, den))
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinError {
    #[error("matrix index ({0}, {1}) out of bounds for {2}x{3}")]
    IndexOutOfBounds(usize, usize, usize, usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("complex is not a complex: d.d != 0 between degrees {0} and {1}")]
    NotAComplex(i64, i64),
    #[error("invalid rational literal `{0}`")]
    BadRational(String),
}

/// Sparse matrix over ℚ. Entries absent from the map are zero; stored
/// entries are kept nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rat>,
}

impl RationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.entries.insert((i, i), Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, x) in row.into_iter().enumerate() {
                if !x.is_zero() {
                    m.entries.insert((i, j), x);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rat) -> Result<(), LinError> {
        if i >= self.rows || j >= self.cols {
            return Err(LinError::IndexOutOfBounds(i, j, self.rows, self.cols));
        }
        if x.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), x);
        }
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_to(&mut self, i: usize, j: usize, x: &Rat) -> Result<(), LinError> {
        let cur = self.get(i, j);
        self.set(i, j, cur + x)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Rat)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(self.cols, self.rows);
        for (&(i, j), x) in &self.entries {
            m.entries.insert((j, i), x.clone());
        }
        m
    }

    pub fn matmul(&self, rhs: &RationalMatrix) -> Result<RationalMatrix, LinError> {
        if self.cols != rhs.rows {
            return Err(LinError::ShapeMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        // Row-sparse times row-sparse: group rhs by row first.
        let mut rhs_rows: BTreeMap<usize, Vec<(usize, &Rat)>> = BTreeMap::new();
        for (&(i, j), x) in &rhs.entries {
            rhs_rows.entry(i).or_default().push((j, x));
        }
        let mut out = RationalMatrix::zero(self.rows, rhs.cols);
        for (&(i, k), a) in &self.entries {
            if let Some(row) = rhs_rows.get(&k) {
                for &(j, b) in row {
                    out.add_to(i, j, &(a.clone() * b))?;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Rat]) -> Result<Vec<Rat>, LinError> {
        if v.len() != self.cols {
            return Err(LinError::ShapeMismatch(format!(
                "matrix {}x{} applied to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![Rat::zero(); self.rows];
        for (&(i, j), x) in &self.entries {
            if !v[j].is_zero() {
                out[i] += x.clone() * &v[j];
            }
        }
        Ok(out)
    }

    fn to_dense(&self) -> Vec<Vec<Rat>> {
        let mut d = vec![vec![Rat::zero(); self.cols]; self.rows];
        for (&(i, j), x) in &self.entries {
            d[i][j] = x.clone();
        }
        d
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| rat_to_string(&self.get(i, j))).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Row echelon data produced by exact Gaussian elimination: the echelon rows
/// and the pivot column of each.
struct Echelon {
    rows: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

/// Exact Gaussian elimination. Pivot choice: first row with a nonzero entry
/// in column order. Small matrices are densified first (the dense path is
/// faster below ~64x64); larger ones run the same elimination on sparse rows.
fn echelon(m: &RationalMatrix) -> Echelon {
    if m.rows.max(m.cols) < 64 {
        echelon_dense(m.to_dense(), m.cols)
    } else {
        echelon_sparse(m)
    }
}

fn echelon_dense(mut rows: Vec<Vec<Rat>>, cols: usize) -> Echelon {
    let mut pivots = Vec::new();
    let mut next_row = 0usize;
    for col in 0..cols {
        let Some(pr) = (next_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next_row, pr);
        let inv = rows[next_row][col].recip();
        for x in rows[next_row].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = rows[next_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next_row && !row[col].is_zero() {
                let factor = row[col].clone();
                for (j, p) in pivot_row.iter().enumerate() {
                    if !p.is_zero() {
                        let delta = factor.clone() * p;
                        row[j] -= delta;
                    }
                }
            }
        }
        pivots.push(col);
        next_row += 1;
        if next_row == rows.len() {
            break;
        }
    }
    rows.truncate(next_row);
    Echelon { rows, pivots }
}

fn echelon_sparse(m: &RationalMatrix) -> Echelon {
    // Rows as sorted (col, value) lists.
    let mut rows: Vec<BTreeMap<usize, Rat>> = vec![BTreeMap::new(); m.rows];
    for (&(i, j), x) in &m.entries {
        rows[i].insert(j, x.clone());
    }
    let mut echelon: Vec<BTreeMap<usize, Rat>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for mut row in rows {
        // Reduce against the pivots found so far.
        while let Some((&lead, _)) = row.iter().next() {
            let Some(k) = pivots.iter().position(|&p| p == lead) else {
                break;
            };
            let factor = row[&lead].clone();
            let base = echelon[k].clone();
            for (j, v) in base {
                let delta = factor.clone() * v;
                let cur = row.remove(&j).unwrap_or_else(Rat::zero) - delta;
                if !cur.is_zero() {
                    row.insert(j, cur);
                }
            }
        }
        if let Some((&lead, _)) = row.iter().next() {
            let inv = row[&lead].recip();
            let normalized: BTreeMap<usize, Rat> =
                row.into_iter().map(|(j, v)| (j, v * &inv)).collect();
            echelon.push(normalized);
            pivots.push(lead);
        }
    }
    // Back-substitute to reduced form so kernel extraction is uniform.
    let order: Vec<usize> = {
        let mut idx: Vec<usize> = (0..pivots.len()).collect();
        idx.sort_by_key(|&k| pivots[k]);
        idx
    };
    let mut sorted_rows: Vec<BTreeMap<usize, Rat>> =
        order.iter().map(|&k| echelon[k].clone()).collect();
    let sorted_pivots: Vec<usize> = order.iter().map(|&k| pivots[k]).collect();
    for k in (0..sorted_rows.len()).rev() {
        let pivot_col = sorted_pivots[k];
        let base = sorted_rows[k].clone();
        for row in sorted_rows.iter_mut().take(k) {
            if let Some(factor) = row.get(&pivot_col).cloned() {
                for (j, v) in &base {
                    let delta = factor.clone() * v;
                    let cur = row.remove(j).unwrap_or_else(Rat::zero) - delta;
                    if !cur.is_zero() {
                        row.insert(*j, cur);
                    }
                }
            }
        }
    }
    let dense_rows = sorted_rows
        .into_iter()
        .map(|row| {
            let mut d = vec![Rat::zero(); m.cols];
            for (j, v) in row {
                d[j] = v;
            }
            d
        })
        .collect();
    Echelon {
        rows: dense_rows,
        pivots: sorted_pivots,
    }
}

/// Rank over ℚ.
pub fn rank(m: &RationalMatrix) -> usize {
    echelon(m).pivots.len()
}

/// Basis of the right kernel: independent vectors v with Mv = 0, one per
/// non-pivot column; their count is `cols - rank`.
pub fn kernel_basis(m: &RationalMatrix) -> Vec<Vec<Rat>> {
    let ech = echelon(m);
    let pivot_of_col: BTreeMap<usize, usize> = ech
        .pivots
        .iter()
        .enumerate()
        .map(|(r, &c)| (c, r))
        .collect();
    let mut basis = Vec::new();
    for free in 0..m.cols {
        if pivot_of_col.contains_key(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); m.cols];
        v[free] = Rat::one();
        for (&pc, &pr) in &pivot_of_col {
            let coeff = &ech.rows[pr][free];
            if !coeff.is_zero() {
                v[pc] = -coeff.clone();
            }
        }
        basis.push(v);
    }
    basis
}

/// Decide whether `b` lies in the column span of `m` (exact membership via
/// a rank comparison).
pub fn in_column_span(m: &RationalMatrix, b: &[Rat]) -> Result<bool, LinError> {
    if b.len() != m.rows {
        return Err(LinError::ShapeMismatch(format!(
            "vector length {} vs {} rows",
            b.len(),
            m.rows
        )));
    }
    let mut aug = RationalMatrix::zero(m.rows, m.cols + 1);
    for (&(i, j), x) in &m.entries {
        aug.entries.insert((i, j), x.clone());
    }
    for (i, x) in b.iter().enumerate() {
        if !x.is_zero() {
            aug.entries.insert((i, m.cols), x.clone());
        }
    }
    Ok(rank(m) == rank(&aug))
}

/// A bounded complex ... -> C_{d} -> C_{d-1} -> ... of finite-dimensional
/// ℚ-vector spaces. `differentials[d]` maps degree d to degree d-1. The
/// relation d.d = 0 is checked on construction.
#[derive(Clone, Debug)]
pub struct ChainComplexData {
    min_degree: i64,
    max_degree: i64,
    dims: BTreeMap<i64, usize>,
    differentials: BTreeMap<i64, RationalMatrix>,
}

impl ChainComplexData {
    /// `dims` for a contiguous degree range; `differentials[d]: C_d -> C_{d-1}`
    /// must be present for every interior degree (missing ones are taken to
    /// be zero maps).
    pub fn new(
        dims: BTreeMap<i64, usize>,
        differentials: BTreeMap<i64, RationalMatrix>,
    ) -> Result<Self, LinError> {
        if dims.is_empty() {
            return Err(LinError::ShapeMismatch("empty complex".into()));
        }
        let min_degree = *dims.keys().next().unwrap();
        let max_degree = *dims.keys().last().unwrap();
        for d in min_degree..=max_degree {
            if !dims.contains_key(&d) {
                return Err(LinError::ShapeMismatch(format!(
                    "degree range not contiguous at {d}"
                )));
            }
        }
        let dim = |d: i64| -> usize { dims.get(&d).copied().unwrap_or(0) };
        for (&d, m) in &differentials {
            if m.rows() != dim(d - 1) || m.cols() != dim(d) {
                return Err(LinError::ShapeMismatch(format!(
                    "differential at degree {d} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    dim(d - 1),
                    dim(d)
                )));
            }
        }
        let complex = ChainComplexData {
            min_degree,
            max_degree,
            dims,
            differentials,
        };
        for d in min_degree..=max_degree {
            let lower = complex.differential(d);
            let upper = complex.differential(d + 1);
            if !lower.matmul(&upper)?.is_zero() {
                return Err(LinError::NotAComplex(d + 1, d - 1));
            }
        }
        Ok(complex)
    }

    pub fn degree_range(&self) -> (i64, i64) {
        (self.min_degree, self.max_degree)
    }

    pub fn dim(&self, d: i64) -> usize {
        self.dims.get(&d).copied().unwrap_or(0)
    }

    /// The boundary map C_d -> C_{d-1}; zero where none was supplied.
    pub fn differential(&self, d: i64) -> RationalMatrix {
        self.differentials
            .get(&d)
            .cloned()
            .unwrap_or_else(|| RationalMatrix::zero(self.dim(d - 1), self.dim(d)))
    }

    /// H_d = ker d_d / im d_{d+1}, reported as dim ker(d_d) - rank(d_{d+1}).
    pub fn homology_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for d in self.min_degree..=self.max_degree {
            let lower = self.differential(d);
            let upper = self.differential(d + 1);
            let kernel = self.dim(d) - rank(&lower);
            out.insert(d, kernel - rank(&upper));
        }
        out
    }
}
