//! Local cohomology with support in a coordinate (monomial) regular
//! sequence, computed through the stable Koszul/Čech complex of monomial
//! localizations; generalized-fraction normal forms; connecting maps;
//! products; Cousin rows for A¹, A² and P¹; adèle flag rings.
//!
//! A class in H^n with support (t₁,...,tₙ) is presented by the quotient
//!   Ω_{R[t₁⁻¹...tₙ⁻¹]} / Σ_j Ω_{R[...omit t_j...]},
//! so class arithmetic is exponent bookkeeping: the normal form keeps
//! exactly the monomials all of whose support exponents are negative.
//!
//! Support sequences are ordered. Reordering the sequence twists a class by
//! the sign of the permutation (the orientation of the Koszul complex);
//! this is what makes the Cousin square anticommute and d∘d = 0 hold as an
//! oriented sum over the two paths through codimension one.

pub mod p1;
pub mod poly;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactlin::{in_column_span, rank, Rat, RationalMatrix};
use crate::kforms::{wedge, DifferentialForm, KformError, RingSpec};
use crate::laurent::{LaurentError, LaurentPoly, VarOrder};

pub use p1::{p1_residue, poles, residue_sum_check, P1Error, P1Point, RationalOneForm};
pub use poly::{factor, is_irreducible, Poly};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LocError {
    #[error("support variables must be distinct members of the ring")]
    BadSupport,
    #[error("variable `{0}` is already in the support")]
    AlreadyInSupport(String),
    #[error("variable `{0}` is not invertible in the fraction's ring")]
    NotInvertible(String),
    #[error("supports overlap on `{0}`")]
    OverlappingSupports(String),
    #[error("fractions live over different base rings")]
    BaseRingMismatch,
    #[error("dimension counting needs support equal to all ring variables")]
    PartialSupportDims,
    #[error("empty or inverted grade window")]
    BadWindow,
    #[error("Čech pattern {0:#b} unexpectedly has nonzero homology off the top degree")]
    NonVanishingPattern(usize),
    #[error("Čech cocycle check failed: the two boundary routes disagree")]
    CechMismatch,
    #[error("flag level {0} out of range 0..={1}")]
    BadFlagLevel(usize, usize),
    #[error(transparent)]
    Kform(#[from] KformError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// An ordered coordinate regular sequence in a polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportSeq {
    ring: RingSpec,
    sequence: Vec<usize>,
}

impl SupportSeq {
    /// `ring` must carry no inversions; `vars` are the support variables in
    /// order.
    pub fn new(ring: &RingSpec, vars: &[&str]) -> Result<Self, LocError> {
        if !ring.inverted().is_empty() {
            return Err(LocError::BadSupport);
        }
        let mut sequence = Vec::with_capacity(vars.len());
        for name in vars {
            let idx = ring.vars().index_of(name).map_err(|_| LocError::BadSupport)?;
            if sequence.contains(&idx) {
                return Err(LocError::BadSupport);
            }
            sequence.push(idx);
        }
        Ok(SupportSeq {
            ring: ring.clone(),
            sequence,
        })
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.sequence
            .iter()
            .map(|&v| self.ring.vars().names()[v].clone())
            .collect()
    }
}

/// A generalized fraction: a class in H^n with support in the sequence,
/// presented by a numerator form over the localization inverting the
/// support and any extra declared variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenFraction {
    support: SupportSeq,
    extra_inverted: BTreeSet<usize>,
    numerator: DifferentialForm,
}

impl GenFraction {
    /// Build from a numerator already living over the localization that
    /// inverts the support plus `extra` variables.
    pub fn new(
        support: SupportSeq,
        extra: &[&str],
        numerator: DifferentialForm,
    ) -> Result<Self, LocError> {
        let ring = support.ring.clone();
        let mut extra_inverted = BTreeSet::new();
        for name in extra {
            let idx = ring.vars().index_of(name).map_err(|_| LocError::BadSupport)?;
            if support.sequence.contains(&idx) {
                return Err(LocError::AlreadyInSupport(name.to_string()));
            }
            extra_inverted.insert(idx);
        }
        let mut inverted: BTreeSet<usize> = support.sequence.iter().copied().collect();
        inverted.extend(extra_inverted.iter().copied());
        let loc_ring = RingSpec::from_parts(ring.vars().clone(), inverted)?;
        let numerator = numerator.into_ring(&loc_ring)?;
        Ok(GenFraction {
            support,
            extra_inverted,
            numerator,
        })
    }

    pub fn support(&self) -> &SupportSeq {
        &self.support
    }

    pub fn extra_inverted_names(&self) -> Vec<String> {
        self.extra_inverted
            .iter()
            .map(|&v| self.support.ring.vars().names()[v].clone())
            .collect()
    }

    pub fn numerator(&self) -> &DifferentialForm {
        &self.numerator
    }

    /// Keep exactly the numerator monomials that are strictly negative in
    /// every support variable. Idempotent; two fractions over the same
    /// ordered support represent the same class iff their normal forms
    /// agree.
    pub fn normal_form(&self) -> GenFraction {
        let keep = |e: &[i64]| self.support.sequence.iter().all(|&v| e[v] < 0);
        let ring = self.numerator.ring().clone();
        let degree = self.numerator.degree();
        let terms: Vec<(Vec<usize>, LaurentPoly)> = self
            .numerator
            .terms()
            .map(|(w, c)| {
                let filtered = LaurentPoly::from_terms(
                    c.order().clone(),
                    c.terms()
                        .filter(|(e, _)| keep(e))
                        .map(|(e, q)| (e.clone(), q.clone())),
                );
                (w.clone(), filtered)
            })
            .collect();
        let numerator =
            DifferentialForm::from_terms(&ring, degree, terms).expect("filtering preserves shape");
        GenFraction {
            support: self.support.clone(),
            extra_inverted: self.extra_inverted.clone(),
            numerator,
        }
    }

    pub fn is_zero_class(&self) -> bool {
        self.normal_form().numerator.is_zero()
    }

    /// The same class with the support sequence sorted by variable index;
    /// the numerator picks up the sign of the sorting permutation (Koszul
    /// orientation of the support).
    pub fn canonicalized(&self) -> GenFraction {
        let mut order: Vec<usize> = (0..self.support.sequence.len()).collect();
        order.sort_by_key(|&i| self.support.sequence[i]);
        let mut inversions = 0usize;
        for i in 0..order.len() {
            for j in i + 1..order.len() {
                if order[i] > order[j] {
                    inversions += 1;
                }
            }
        }
        let sorted: Vec<usize> = order.iter().map(|&i| self.support.sequence[i]).collect();
        let support = SupportSeq {
            ring: self.support.ring.clone(),
            sequence: sorted,
        };
        let numerator = if inversions.is_multiple_of(2) {
            self.numerator.clone()
        } else {
            self.numerator.neg()
        };
        GenFraction {
            support,
            extra_inverted: self.extra_inverted.clone(),
            numerator,
        }
    }

    /// Exact class equality over possibly differently-ordered supports.
    pub fn class_eq(&self, other: &GenFraction) -> bool {
        let a = self.canonicalized().normal_form();
        let b = other.canonicalized().normal_form();
        a.support == b.support && a.numerator == b.numerator
    }

    pub fn add(&self, other: &GenFraction) -> Result<GenFraction, LocError> {
        if self.support != other.support {
            return Err(LocError::BaseRingMismatch);
        }
        let mut extra = self.extra_inverted.clone();
        extra.extend(other.extra_inverted.iter().copied());
        let mut inverted: BTreeSet<usize> = self.support.sequence.iter().copied().collect();
        inverted.extend(extra.iter().copied());
        let ring = RingSpec::from_parts(self.support.ring.vars().clone(), inverted)?;
        let numerator = self
            .numerator
            .into_ring(&ring)?
            .add(&other.numerator.into_ring(&ring)?)?;
        Ok(GenFraction {
            support: self.support.clone(),
            extra_inverted: extra,
            numerator,
        })
    }

    pub fn scale(&self, c: &Rat) -> GenFraction {
        GenFraction {
            support: self.support.clone(),
            extra_inverted: self.extra_inverted.clone(),
            numerator: self.numerator.scale(c),
        }
    }
}

/// The connecting map: reinterpret the numerator with `t_next` adjoined to
/// the support (it must be among the declared extra inversions) and reduce
/// to normal form over the enlarged support. Appending is on the right, so
/// the orientation extends the existing one.
pub fn boundary_partial(x: &GenFraction, t_next: &str) -> Result<GenFraction, LocError> {
    let idx = x
        .support
        .ring
        .vars()
        .index_of(t_next)
        .map_err(|_| LocError::BadSupport)?;
    if x.support.sequence.contains(&idx) {
        return Err(LocError::AlreadyInSupport(t_next.to_string()));
    }
    if !x.extra_inverted.contains(&idx) {
        return Err(LocError::NotInvertible(t_next.to_string()));
    }
    let mut sequence = x.support.sequence.clone();
    sequence.push(idx);
    let support = SupportSeq {
        ring: x.support.ring.clone(),
        sequence,
    };
    let mut extra = x.extra_inverted.clone();
    extra.remove(&idx);
    let out = GenFraction {
        support,
        extra_inverted: extra,
        numerator: x.numerator.clone(),
    };
    Ok(out.normal_form())
}

/// `boundary_partial`, additionally certified against the Čech complex: the
/// dropped part of the numerator must lie in the column span of the stage-n
/// Čech differential restricted to the numerator's multidegrees, and the
/// kept part must be independent of it. This is the cocycle-chase route to
/// the same class.
pub fn boundary_partial_cech_checked(
    x: &GenFraction,
    t_next: &str,
) -> Result<GenFraction, LocError> {
    let out = boundary_partial(x, t_next)?;
    let full_support = &out.support;
    let loc_ring = out.numerator.ring().clone();
    // Collect every monomial (per wedge component) of the reinterpreted
    // numerator: rows of the linear system.
    let reinterpreted = GenFraction {
        support: full_support.clone(),
        extra_inverted: out.extra_inverted.clone(),
        numerator: x.numerator.clone().into_ring(&loc_ring)?,
    };
    let kept = out.numerator.clone();
    let nvars = loc_ring.vars().len();
    let support_set: Vec<usize> = full_support.sequence.clone();
    // Row index: (wedge, exponent vector) appearing in either part.
    let mut row_index: BTreeMap<(Vec<usize>, Vec<i64>), usize> = BTreeMap::new();
    let mut add_rows = |form: &DifferentialForm| {
        for (w, c) in form.terms() {
            for (e, _) in c.terms() {
                let key = (w.clone(), e.clone());
                let next = row_index.len();
                row_index.entry(key).or_insert(next);
            }
        }
    };
    add_rows(&reinterpreted.numerator);
    add_rows(&kept);
    // Columns: for each monomial row and each omitted support variable j,
    // the corresponding basis monomial of the stage-(n-1) summand, when the
    // monomial lives there (nonnegative exponent at the omitted variable,
    // negative exponents confined to the other inversions).
    let mut columns: Vec<Vec<(usize, Rat)>> = Vec::new();
    for ((_w, e), &row) in &row_index {
        for (pos, &j) in support_set.iter().enumerate() {
            let lives_in_summand = (0..nvars).all(|v| {
                e[v] >= 0
                    || (v != j
                        && (support_set.contains(&v) || reinterpreted.extra_inverted.contains(&v)))
            });
            if lives_in_summand && e[j] >= 0 {
                // Čech sign of the face omitting position `pos`.
                let sign = if pos % 2 == 0 { Rat::one() } else { -Rat::one() };
                columns.push(vec![(row, sign)]);
            }
        }
    }
    let mut matrix = RationalMatrix::zero(row_index.len(), columns.len());
    for (col, entries) in columns.iter().enumerate() {
        for (row, val) in entries {
            matrix.set(*row, col, val.clone()).expect("in bounds");
        }
    }
    let vectorize = |form: &DifferentialForm| -> Vec<Rat> {
        let mut v = vec![Rat::zero(); row_index.len()];
        for (w, c) in form.terms() {
            for (e, q) in c.terms() {
                v[row_index[&(w.clone(), e.clone())]] = q.clone();
            }
        }
        v
    };
    let z = vectorize(&reinterpreted.numerator);
    let nf = vectorize(&kept);
    let dropped: Vec<Rat> = z.iter().zip(&nf).map(|(a, b)| a.clone() - b).collect();
    let dropped_in_image =
        in_column_span(&matrix, &dropped).map_err(|_| LocError::CechMismatch)?;
    if !dropped_in_image {
        return Err(LocError::CechMismatch);
    }
    if !kept.is_zero() {
        let kept_in_image = in_column_span(&matrix, &nf).map_err(|_| LocError::CechMismatch)?;
        if kept_in_image {
            return Err(LocError::CechMismatch);
        }
    }
    Ok(out)
}

/// Product of transversally supported classes: wedge the numerators over
/// the concatenated support and normalize. Graded-commutative in the form
/// degrees, and antisymmetric in the support orientation.
pub fn product_concat(x: &GenFraction, y: &GenFraction) -> Result<GenFraction, LocError> {
    if x.support.ring != y.support.ring {
        return Err(LocError::BaseRingMismatch);
    }
    if let Some(&v) = x
        .support
        .sequence
        .iter()
        .find(|v| y.support.sequence.contains(v))
    {
        return Err(LocError::OverlappingSupports(
            x.support.ring.vars().names()[v].clone(),
        ));
    }
    let mut sequence = x.support.sequence.clone();
    sequence.extend_from_slice(&y.support.sequence);
    let support = SupportSeq {
        ring: x.support.ring.clone(),
        sequence,
    };
    let mut extra: BTreeSet<usize> = x.extra_inverted.union(&y.extra_inverted).copied().collect();
    extra.retain(|v| !support.sequence.contains(v));
    let mut inverted: BTreeSet<usize> = support.sequence.iter().copied().collect();
    inverted.extend(extra.iter().copied());
    let ring = RingSpec::from_parts(support.ring.vars().clone(), inverted)?;
    let numerator = wedge(
        &x.numerator.into_ring(&ring)?,
        &y.numerator.into_ring(&ring)?,
    )?;
    let out = GenFraction {
        support,
        extra_inverted: extra,
        numerator,
    };
    Ok(out.normal_form())
}

/// Which module the Čech complex takes coefficients in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CechModule {
    Ring,
    Omega(usize),
}

/// Homology of the 2^n-stage pattern complex: stage p is spanned by the
/// size-p subsets S ⊇ pattern, with the Čech face signs. Returns dims of
/// H^p for p = 0..n.
fn pattern_homology(n: usize, pattern: usize) -> Vec<usize> {
    let subsets_of_size = |p: usize| -> Vec<usize> {
        (0usize..1 << n)
            .filter(|s| s.count_ones() as usize == p && s & pattern == pattern)
            .collect()
    };
    let mut dims = Vec::with_capacity(n + 1);
    let mut mats: Vec<RationalMatrix> = Vec::with_capacity(n + 1);
    let mut prev: Vec<usize> = Vec::new();
    for p in 0..=n {
        let cur = subsets_of_size(p);
        if p > 0 {
            let index: BTreeMap<usize, usize> =
                prev.iter().copied().enumerate().map(|(i, s)| (s, i)).collect();
            let mut m = RationalMatrix::zero(prev.len(), cur.len());
            for (col, &s) in cur.iter().enumerate() {
                // Faces: drop one element of s; sign by its rank within s.
                let mut sign = Rat::one();
                for v in 0..n {
                    if s & (1 << v) != 0 {
                        let face = s & !(1 << v);
                        if let Some(&row) = index.get(&face) {
                            m.set(row, col, sign.clone()).expect("in bounds");
                        }
                        sign = -sign;
                    }
                }
            }
            mats.push(m);
        }
        dims.push(cur.len());
        prev = cur;
    }
    // Transposed reading: our mats[p-1] maps stage p to stage p-1 columns
    // -> rows, i.e. it is the matrix of d: stage p-1 -> stage p transposed?
    // No: constructed m has rows = stage p-1, cols = stage p, which is the
    // matrix of the coboundary d: stage p-1 -> stage p transposed. Cohomology
    // at p: ker(d_p) / im(d_{p-1}) with d_p: stage p -> p+1.
    let mut out = Vec::with_capacity(n + 1);
    for p in 0..=n {
        let d_out_rank = if p < n {
            // d_p: stage p -> stage p+1 is mats[p] transposed.
            rank(&mats[p])
        } else {
            0
        };
        let d_in_rank = if p > 0 { rank(&mats[p - 1]) } else { 0 };
        out.push(dims[p] - d_out_rank - d_in_rank);
    }
    out
}

/// Dimensions of H^p of the stable Koszul/Čech complex of the module over
/// the full coordinate support, split by internal degree (deg(f dx_I) =
/// deg f + |I|). Every nonvanishing pattern is certified by exact rank
/// computation; the support must be the whole variable set so that graded
/// pieces are finite.
pub fn cech_h_dims(
    support: &SupportSeq,
    module: CechModule,
    window: (i64, i64),
) -> Result<BTreeMap<usize, BTreeMap<i64, usize>>, LocError> {
    let n = support.len();
    let nvars = support.ring.vars().len();
    if n != nvars || n == 0 {
        return Err(LocError::PartialSupportDims);
    }
    if window.0 > window.1 {
        return Err(LocError::BadWindow);
    }
    let m = match module {
        CechModule::Ring => 0usize,
        CechModule::Omega(k) => k,
    };
    let wedge_mult = binomial(nvars, m);
    // Rank-certify every pattern: off the full pattern the complex is exact.
    let mut full_h = Vec::new();
    for pattern in 0usize..1 << n {
        let h = pattern_homology(n, pattern);
        if pattern == (1 << n) - 1 {
            full_h = h;
        } else if h.iter().any(|&x| x != 0) {
            return Err(LocError::NonVanishingPattern(pattern));
        }
    }
    let mut out: BTreeMap<usize, BTreeMap<i64, usize>> = BTreeMap::new();
    for (p, &h_p) in full_h.iter().enumerate() {
        let mut per_degree = BTreeMap::new();
        for d in window.0..=window.1 {
            // Contributions only from all-negative multidegrees (the full
            // pattern); enumerate them explicitly at coefficient degree
            // d - m.
            let c = d - m as i64;
            let count = count_all_negative(n, c);
            per_degree.insert(d, h_p * count * wedge_mult);
        }
        out.insert(p, per_degree);
    }
    Ok(out)
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Explicit enumeration of strictly negative integer vectors of length n
/// summing to c. Substituting a_i = -b_i - 1 reduces to nonnegative vectors
/// summing to -c - n, enumerated recursively.
fn count_all_negative(n: usize, c: i64) -> usize {
    fn nonneg(n: usize, target: i64) -> usize {
        if target < 0 {
            return 0;
        }
        if n == 0 {
            return usize::from(target == 0);
        }
        (0..=target).map(|v| nonneg(n - 1, target - v)).sum()
    }
    nonneg(n, -c - n as i64)
}

/// The basis of the top local cohomology piece in internal degree d for the
/// full coordinate support: the all-negative exponent vectors summing to
/// d - m, labelled as monomials.
pub fn top_degree_basis(support: &SupportSeq, module: CechModule, d: i64) -> Vec<String> {
    let n = support.len();
    let m = match module {
        CechModule::Ring => 0usize,
        CechModule::Omega(k) => k,
    };
    let names = support.names();
    let mut out = Vec::new();
    let mut current = vec![0i64; n];
    // Nonnegative vectors b with Σb = -(d - m) - n give a_i = -b_i - 1.
    fn enumerate(
        pos: usize,
        remaining: i64,
        current: &mut Vec<i64>,
        names: &[String],
        out: &mut Vec<String>,
    ) {
        let n = current.len();
        if pos == n {
            if remaining == 0 {
                let label: Vec<String> = current
                    .iter()
                    .enumerate()
                    .map(|(v, b)| format!("{}^{}", names[v], -b - 1))
                    .collect();
                out.push(label.join("*"));
            }
            return;
        }
        for b in 0..=remaining {
            current[pos] = b;
            enumerate(pos + 1, remaining - b, current, names, out);
        }
    }
    let target = -(d - m as i64) - n as i64;
    if target >= 0 {
        enumerate(0, target, &mut current, &names, &mut out);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlagKind {
    L,
    C,
}

/// The level-j ring of the coordinate flag on Aⁿ, presented by which
/// variables carry Laurent tails and which are completed windows. Both are
/// modelled by Laurent polynomials; completions never materialize.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagRing {
    pub level: usize,
    pub kind: FlagKind,
    pub vars: Arc<VarOrder>,
    /// Indices of variables with full Laurent (inverted) status, innermost
    /// first; for level j these are t₁,...,t_{n-j}.
    pub laurent_vars: Vec<usize>,
    /// The remaining, completed variables.
    pub completed_vars: Vec<usize>,
}

/// The rings L_j / C_j of the coordinate flag: alternating localizations
/// and completions ending at C₀ = ℚ((t₁))...((tₙ)).
pub fn flag_ring(ring: &RingSpec, level: usize, kind: FlagKind) -> Result<FlagRing, LocError> {
    let n = ring.vars().len();
    if level > n {
        return Err(LocError::BadFlagLevel(level, n));
    }
    let laurent_vars: Vec<usize> = (0..n - level).collect();
    let completed_vars: Vec<usize> = (n - level..n).collect();
    Ok(FlagRing {
        level,
        kind,
        vars: ring.vars().clone(),
        laurent_vars,
        completed_vars,
    })
}

/// The support variable adjoined by the Cousin boundary out of level j of
/// the coordinate flag: t_{n-j} (0-based index n-1-j).
pub fn flag_boundary_var(n: usize, level: usize) -> Result<usize, LocError> {
    if level >= n {
        return Err(LocError::BadFlagLevel(level, n.saturating_sub(1)));
    }
    Ok(n - 1 - level)
}

/// A closed point descriptor for a Cousin row entry.
#[derive(Debug, Clone, PartialEq)]
pub enum PointDescriptor {
    /// Coordinate flag point, named by its defining variables.
    Coordinate(Vec<String>),
    /// Closed point of P¹: a monic irreducible polynomial.
    FinitePoint(Poly),
    Infinity,
}

/// A local cohomology class attached to a point of a Cousin row.
#[derive(Debug, Clone, PartialEq)]
pub enum LocalClass {
    Fraction(GenFraction),
    /// For P¹ rows: the pole order and the trace residue of the local class.
    PolePart { order: u32, residue: Rat },
}

/// One row of a Cousin complex at desk scale.
#[derive(Debug, Clone, PartialEq)]
pub struct CousinRow {
    pub scheme: SchemeTag,
    pub form_degree: usize,
    pub entries: Vec<(PointDescriptor, LocalClass)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeTag {
    A1,
    A2,
    P1,
}

/// The codimension-one Cousin row of a rational 1-form on P¹: one entry per
/// pole (plus ∞), carrying pole order and trace residue.
pub fn cousin_row_p1(omega: &RationalOneForm) -> Result<CousinRow, P1Error> {
    let mut entries = Vec::new();
    for p in poles(omega) {
        let mut order = 0u32;
        let mut cof = omega.den().clone();
        loop {
            let (q, r) = cof.div_rem(&p);
            if r.is_zero() {
                order += 1;
                cof = q;
            } else {
                break;
            }
        }
        let residue = p1_residue(omega, &P1Point::Finite(p.clone()))?;
        entries.push((
            PointDescriptor::FinitePoint(p),
            LocalClass::PolePart { order, residue },
        ));
    }
    let inf_res = p1_residue(omega, &P1Point::Infinity)?;
    entries.push((
        PointDescriptor::Infinity,
        LocalClass::PolePart {
            order: 0,
            residue: inf_res,
        },
    ));
    Ok(CousinRow {
        scheme: SchemeTag::P1,
        form_degree: 1,
        entries,
    })
}

/// The codimension-one Cousin row of a class over a coordinate affine
/// piece: one entry per coordinate hyperplane, carrying the connecting-map
/// image of the class. `numerator` lives over the full localization of the
/// base ring; entries at variables not inverted in it are zero classes.
pub fn cousin_row_coordinate(
    base: &RingSpec,
    numerator: &DifferentialForm,
) -> Result<CousinRow, LocError> {
    let names = base.vars().names().to_vec();
    let scheme = match names.len() {
        1 => SchemeTag::A1,
        2 => SchemeTag::A2,
        n => return Err(LocError::BadFlagLevel(n, 2)),
    };
    let all: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut entries = Vec::new();
    for v in &all {
        let support = SupportSeq::new(base, &[])?;
        let class = GenFraction::new(support, &all, numerator.clone())?;
        let image = boundary_partial(&class, v)?;
        entries.push((
            PointDescriptor::Coordinate(vec![v.to_string()]),
            LocalClass::Fraction(image),
        ));
    }
    Ok(CousinRow {
        scheme,
        form_degree: numerator.degree(),
        entries,
    })
}

/// The oriented Cousin square: ∂_{v2}∘∂_{v1} plus ∂_{v1}∘∂_{v2} applied to
/// a class with empty support over R[v1⁻¹, v2⁻¹], both composites
/// canonicalized to the sorted support orientation. Always the zero class.
pub fn cousin_square_sum(
    base: &RingSpec,
    numerator: &DifferentialForm,
    v1: &str,
    v2: &str,
) -> Result<GenFraction, LocError> {
    let start = |first: &str, second: &str| -> Result<GenFraction, LocError> {
        let support = SupportSeq::new(base, &[])?;
        let x = GenFraction::new(support, &[first, second], numerator.clone())?;
        let step1 = boundary_partial(&x, first)?;
        let step2 = boundary_partial(&step1, second)?;
        Ok(step2.canonicalized())
    };
    let path_a = start(v1, v2)?;
    let path_b = start(v2, v1)?;
    path_a.add(&path_b)
}
