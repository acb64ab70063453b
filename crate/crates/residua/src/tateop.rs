//! Exactly representable operators on the monomial basis of an iterated
//! Laurent model ℚ((t₁))...((tₙ)), with the Beilinson cubical-algebra
//! structure: per-level ideals of bounded and discrete operators, decidable
//! membership, the trace on trace-class operators, projectors and the
//! non-quotient map Λ.
//!
//! Normal form: an operator is a finite set of pairwise disjoint boxes in
//! exponent space; on each box it acts by a fixed finite ℚ-combination of
//! exponent shifts. Multiplication operators, window matrices, lattice
//! projectors and all their sums and composites close up under this shape,
//! so band data read off the normal form is exact, not an over-
//! approximation. Cancellations (the whole point of commutator identities
//! like [P⁺f, g]) happen inside the normal form.
//!
//! Level convention: level 1 acts on the OUTERMOST Laurent variable tₙ,
//! level i on t_{n+1-i}; peeling one Tate layer (A' = I₁⁰) removes the
//! outermost variable first.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactlin::{rat_to_string, Rat};
use crate::laurent::{LaurentPoly, VarOrder};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TateError {
    #[error("variable orders differ")]
    OrderMismatch,
    #[error("level {0} out of range 1..={1}")]
    BadLevel(usize, usize),
    #[error("operator is not certified trace-class (level {0} fails)")]
    NotTraceClass(usize),
    #[error("operators do not commute")]
    NotCommuting,
}

/// One endpoint of an exponent interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Bound {
    NegInf,
    At(i64),
    PosInf,
}

impl Bound {
    fn offset(self, d: i64) -> Bound {
        match self {
            Bound::At(x) => Bound::At(x + d),
            b => b,
        }
    }
}

/// A per-variable closed interval of exponents (whole axis by default).
/// Empty iff lo > hi.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
}

impl Interval {
    pub const FULL: Interval = Interval {
        lo: Bound::NegInf,
        hi: Bound::PosInf,
    };

    pub fn new(lo: Bound, hi: Bound) -> Interval {
        Interval { lo, hi }
    }

    pub fn at_least(x: i64) -> Interval {
        Interval::new(Bound::At(x), Bound::PosInf)
    }

    pub fn at_most(x: i64) -> Interval {
        Interval::new(Bound::NegInf, Bound::At(x))
    }

    pub fn between(lo: i64, hi: i64) -> Interval {
        Interval::new(Bound::At(lo), Bound::At(hi))
    }

    pub fn is_empty(&self) -> bool {
        match (self.lo, self.hi) {
            (Bound::At(a), Bound::At(b)) => a > b,
            (Bound::PosInf, _) | (_, Bound::NegInf) => true,
            _ => false,
        }
    }

    pub fn contains(&self, x: i64) -> bool {
        let lo_ok = match self.lo {
            Bound::NegInf => true,
            Bound::At(a) => x >= a,
            Bound::PosInf => false,
        };
        let hi_ok = match self.hi {
            Bound::PosInf => true,
            Bound::At(b) => x <= b,
            Bound::NegInf => false,
        };
        lo_ok && hi_ok
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.min(other.hi),
        }
    }

    fn shifted(&self, d: i64) -> Interval {
        Interval {
            lo: self.lo.offset(d),
            hi: self.hi.offset(d),
        }
    }

    /// Number of integers inside, None if infinite.
    fn len(&self) -> Option<i64> {
        match (self.lo, self.hi) {
            (Bound::At(a), Bound::At(b)) => Some((b - a + 1).max(0)),
            _ => {
                if self.is_empty() {
                    Some(0)
                } else {
                    None
                }
            }
        }
    }
}

/// A box in exponent space: one interval per variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExpBox {
    pub axes: Vec<Interval>,
}

impl ExpBox {
    fn full(n: usize) -> ExpBox {
        ExpBox {
            axes: vec![Interval::FULL; n],
        }
    }

    fn is_empty(&self) -> bool {
        self.axes.iter().any(Interval::is_empty)
    }

    fn contains(&self, e: &[i64]) -> bool {
        self.axes.iter().zip(e).all(|(iv, &x)| iv.contains(x))
    }

    fn intersect(&self, other: &ExpBox) -> ExpBox {
        ExpBox {
            axes: self
                .axes
                .iter()
                .zip(&other.axes)
                .map(|(a, b)| a.intersect(b))
                .collect(),
        }
    }

    fn shifted(&self, shift: &[i64]) -> ExpBox {
        ExpBox {
            axes: self
                .axes
                .iter()
                .zip(shift)
                .map(|(iv, &d)| iv.shifted(d))
                .collect(),
        }
    }

    fn cardinality(&self) -> Option<i64> {
        let mut total = 1i64;
        for iv in &self.axes {
            total *= iv.len()?;
        }
        Some(total)
    }
}

/// The action on one box: source monomial t^e maps to Σ c · t^{e + shift}.
type Shifts = BTreeMap<Vec<i64>, Rat>;

/// A banded operator in piecewise-shift normal form. Boxes are pairwise
/// disjoint; every stored shift list is nonempty with nonzero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct BandedOperator {
    order: Arc<VarOrder>,
    pieces: Vec<(ExpBox, Shifts)>,
}

impl fmt::Debug for BandedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return write!(f, "0");
        }
        let fmt_bound = |b: Bound| match b {
            Bound::NegInf => "-inf".to_string(),
            Bound::At(x) => x.to_string(),
            Bound::PosInf => "+inf".to_string(),
        };
        let parts: Vec<String> = self
            .pieces
            .iter()
            .map(|(bx, shifts)| {
                let box_str: Vec<String> = bx
                    .axes
                    .iter()
                    .zip(self.order.names())
                    .map(|(iv, n)| format!("{}:[{},{}]", n, fmt_bound(iv.lo), fmt_bound(iv.hi)))
                    .collect();
                let shift_str: Vec<String> = shifts
                    .iter()
                    .map(|(s, c)| format!("{}*T{:?}", rat_to_string(c), s))
                    .collect();
                format!("{{{}}} -> {}", box_str.join(" "), shift_str.join(" + "))
            })
            .collect();
        write!(f, "{}", parts.join(" ; "))
    }
}

impl BandedOperator {
    pub fn order(&self) -> &Arc<VarOrder> {
        &self.order
    }

    pub fn zero(order: Arc<VarOrder>) -> Self {
        BandedOperator {
            order,
            pieces: vec![],
        }
    }

    pub fn identity(order: Arc<VarOrder>) -> Self {
        let n = order.len();
        let mut shifts = Shifts::new();
        shifts.insert(vec![0; n], Rat::one());
        BandedOperator {
            order,
            pieces: vec![(ExpBox::full(n), shifts)],
        }
    }

    /// Multiplication by a Laurent polynomial.
    pub fn mult(f: &LaurentPoly) -> Self {
        let order = f.order().clone();
        let n = order.len();
        let shifts: Shifts = f.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
        if shifts.is_empty() {
            return Self::zero(order);
        }
        BandedOperator {
            order,
            pieces: vec![(ExpBox::full(n), shifts)],
        }
    }

    /// Finite matrix: entries (source exponent, target exponent) -> coeff.
    pub fn window_matrix(
        order: Arc<VarOrder>,
        entries: impl IntoIterator<Item = (Vec<i64>, Vec<i64>, Rat)>,
    ) -> Self {
        let n = order.len();
        let mut by_source: BTreeMap<Vec<i64>, Shifts> = BTreeMap::new();
        for (src, tgt, c) in entries {
            assert_eq!(src.len(), n);
            assert_eq!(tgt.len(), n);
            if c.is_zero() {
                continue;
            }
            let shift: Vec<i64> = tgt.iter().zip(&src).map(|(t, s)| t - s).collect();
            let cell = by_source.entry(src).or_default();
            let cur = cell.remove(&shift).unwrap_or_else(Rat::zero) + c;
            if !cur.is_zero() {
                cell.insert(shift, cur);
            }
        }
        let pieces = by_source
            .into_iter()
            .filter(|(_, shifts)| !shifts.is_empty())
            .map(|(src, shifts)| {
                let axes = src.iter().map(|&x| Interval::between(x, x)).collect();
                (ExpBox { axes }, shifts)
            })
            .collect();
        BandedOperator { order, pieces }.normalized()
    }

    /// Projector onto the monomials whose exponent at `var` lies in the
    /// interval.
    pub fn axis_projector(order: Arc<VarOrder>, var: usize, range: Interval) -> Self {
        let n = order.len();
        assert!(var < n);
        let mut axes = vec![Interval::FULL; n];
        axes[var] = range;
        let mut shifts = Shifts::new();
        shifts.insert(vec![0; n], Rat::one());
        BandedOperator {
            order,
            pieces: vec![(ExpBox { axes }, shifts)],
        }
        .normalized()
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn pieces(&self) -> &[(ExpBox, Shifts)] {
        &self.pieces
    }

    /// Re-establish the normal form: disjoint boxes, coalesced where
    /// adjacent boxes carry the same action, no zero coefficients.
    fn normalized(mut self) -> Self {
        self.pieces.retain(|(bx, sh)| !bx.is_empty() && !sh.is_empty());
        if self.pieces.len() <= 1 {
            return self;
        }
        let n = self.order.len();
        // Per-axis breakpoints: interval endpoints cut the axis into atoms.
        let mut cuts: Vec<Vec<Bound>> = vec![Vec::new(); n];
        for (bx, _) in &self.pieces {
            for (v, iv) in bx.axes.iter().enumerate() {
                cuts[v].push(iv.lo);
                if let Bound::At(h) = iv.hi {
                    cuts[v].push(Bound::At(h + 1));
                }
            }
        }
        for c in cuts.iter_mut() {
            c.push(Bound::NegInf);
            c.sort();
            c.dedup();
        }
        // Atoms per axis: [cut_k, cut_{k+1} - 1].
        let atoms_per_axis: Vec<Vec<Interval>> = cuts
            .iter()
            .map(|c| {
                let mut atoms = Vec::with_capacity(c.len());
                for (k, &lo) in c.iter().enumerate() {
                    let hi = match c.get(k + 1) {
                        Some(Bound::At(next)) => Bound::At(next - 1),
                        Some(Bound::PosInf) | None => Bound::PosInf,
                        Some(Bound::NegInf) => unreachable!("sorted cuts"),
                    };
                    let iv = Interval::new(lo, hi);
                    if !iv.is_empty() {
                        atoms.push(iv);
                    }
                }
                atoms
            })
            .collect();
        // Sum actions over each atom box.
        let mut atom_actions: BTreeMap<Vec<usize>, Shifts> = BTreeMap::new();
        let mut stack = vec![Vec::new()];
        while let Some(prefix) = stack.pop() {
            if prefix.len() == n {
                let bx = ExpBox {
                    axes: prefix
                        .iter()
                        .enumerate()
                        .map(|(v, &k)| atoms_per_axis[v][k])
                        .collect(),
                };
                let mut total = Shifts::new();
                for (pbox, shifts) in &self.pieces {
                    if !pbox.intersect(&bx).is_empty() {
                        // Atom refinement: intersection nonempty means the
                        // atom is contained in the piece box.
                        for (s, c) in shifts {
                            let cur = total.remove(s).unwrap_or_else(Rat::zero) + c;
                            if !cur.is_zero() {
                                total.insert(s.clone(), cur);
                            }
                        }
                    }
                }
                if !total.is_empty() {
                    atom_actions.insert(prefix, total);
                }
                continue;
            }
            let v = prefix.len();
            for k in 0..atoms_per_axis[v].len() {
                let mut p = prefix.clone();
                p.push(k);
                stack.push(p);
            }
        }
        // Coalesce along the last axis, then earlier axes, by merging
        // adjacent atoms with identical actions.
        let mut pieces: Vec<(ExpBox, Shifts)> = atom_actions
            .into_iter()
            .map(|(key, act)| {
                let axes = key
                    .iter()
                    .enumerate()
                    .map(|(v, &k)| atoms_per_axis[v][k])
                    .collect();
                (ExpBox { axes }, act)
            })
            .collect();
        for axis in (0..n).rev() {
            pieces.sort_by(|a, b| {
                let key = |p: &(ExpBox, Shifts)| {
                    let mut others: Vec<Interval> = p.0.axes.clone();
                    let this = others.remove(axis);
                    (others, this.lo)
                };
                key(a).cmp(&key(b))
            });
            let mut merged: Vec<(ExpBox, Shifts)> = Vec::with_capacity(pieces.len());
            for (bx, act) in pieces {
                if let Some((last_box, last_act)) = merged.last_mut() {
                    let same_others = last_box
                        .axes
                        .iter()
                        .zip(&bx.axes)
                        .enumerate()
                        .all(|(v, (a, b))| v == axis || a == b);
                    let adjacent = match (last_box.axes[axis].hi, bx.axes[axis].lo) {
                        (Bound::At(h), Bound::At(l)) => l == h + 1,
                        _ => false,
                    };
                    if same_others && adjacent && *last_act == act {
                        last_box.axes[axis].hi = bx.axes[axis].hi;
                        continue;
                    }
                }
                merged.push((bx, act));
            }
            pieces = merged;
        }
        pieces.sort();
        BandedOperator {
            order: self.order,
            pieces,
        }
    }

    fn check_order(&self, other: &BandedOperator) -> Result<(), TateError> {
        if self.order != other.order {
            return Err(TateError::OrderMismatch);
        }
        Ok(())
    }

    /// Exact image of a Laurent polynomial.
    pub fn apply(&self, v: &LaurentPoly) -> Result<LaurentPoly, TateError> {
        if v.order() != &self.order {
            return Err(TateError::OrderMismatch);
        }
        let mut out = LaurentPoly::zero(self.order.clone());
        for (e, c) in v.terms() {
            for (bx, shifts) in &self.pieces {
                if bx.contains(e) {
                    for (s, q) in shifts {
                        let target: Vec<i64> = e.iter().zip(s).map(|(a, b)| a + b).collect();
                        let term = LaurentPoly::monomial(self.order.clone(), target, c.clone() * q);
                        out = out.add(&term).expect("same order");
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> BandedOperator {
        if c.is_zero() {
            return Self::zero(self.order.clone());
        }
        BandedOperator {
            order: self.order.clone(),
            pieces: self
                .pieces
                .iter()
                .map(|(bx, shifts)| {
                    (
                        bx.clone(),
                        shifts.iter().map(|(s, q)| (s.clone(), q.clone() * c)).collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &BandedOperator) -> Result<BandedOperator, TateError> {
        self.check_order(other)?;
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        Ok(BandedOperator {
            order: self.order.clone(),
            pieces,
        }
        .normalized())
    }

    pub fn sub(&self, other: &BandedOperator) -> Result<BandedOperator, TateError> {
        self.add(&other.scale(&-Rat::one()))
    }

    /// self ∘ other (apply `other` first).
    pub fn compose(&self, other: &BandedOperator) -> Result<BandedOperator, TateError> {
        self.check_order(other)?;
        let mut pieces: Vec<(ExpBox, Shifts)> = Vec::new();
        for (bx_g, sh_g) in &other.pieces {
            for (s_g, c_g) in sh_g {
                // Source e in bx_g lands at e + s_g; then a piece of self
                // applies when e + s_g lies in its box.
                for (bx_f, sh_f) in &self.pieces {
                    let shifted_back = bx_f.shifted(&s_g.iter().map(|x| -x).collect::<Vec<_>>());
                    let source_box = bx_g.intersect(&shifted_back);
                    if source_box.is_empty() {
                        continue;
                    }
                    let mut shifts = Shifts::new();
                    for (s_f, c_f) in sh_f {
                        let total: Vec<i64> = s_g.iter().zip(s_f).map(|(a, b)| a + b).collect();
                        let cur = shifts.remove(&total).unwrap_or_else(Rat::zero) + c_g.clone() * c_f;
                        if !cur.is_zero() {
                            shifts.insert(total, cur);
                        }
                    }
                    if !shifts.is_empty() {
                        pieces.push((source_box, shifts));
                    }
                }
            }
        }
        Ok(BandedOperator {
            order: self.order.clone(),
            pieces,
        }
        .normalized())
    }

    pub fn commutator(&self, other: &BandedOperator) -> Result<BandedOperator, TateError> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// If self = λ · other for a scalar λ, return λ. Normal forms make
    /// this a piecewise coefficient-ratio check.
    pub fn proportionality_to(&self, other: &BandedOperator) -> Option<Rat> {
        if self.order != other.order {
            return None;
        }
        if other.is_zero() {
            return self.is_zero().then(Rat::one);
        }
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.pieces.len() != other.pieces.len() {
            return None;
        }
        let mut ratio: Option<Rat> = None;
        for ((bx_a, sh_a), (bx_b, sh_b)) in self.pieces.iter().zip(&other.pieces) {
            if bx_a != bx_b || sh_a.len() != sh_b.len() {
                return None;
            }
            for ((s_a, c_a), (s_b, c_b)) in sh_a.iter().zip(sh_b) {
                if s_a != s_b {
                    return None;
                }
                let r = c_a / c_b;
                match &ratio {
                    None => ratio = Some(r),
                    Some(prev) if *prev == r => {}
                    _ => return None,
                }
            }
        }
        ratio
    }

    /// Smallest interval of source exponents at `var` on which the operator
    /// can act nontrivially.
    pub fn source_support(&self, var: usize) -> Interval {
        let mut lo = Bound::PosInf;
        let mut hi = Bound::NegInf;
        for (bx, _) in &self.pieces {
            lo = lo.min(bx.axes[var].lo);
            hi = hi.max(bx.axes[var].hi);
        }
        Interval::new(lo, hi)
    }

    /// Smallest interval containing every image exponent at `var`.
    pub fn image_support(&self, var: usize) -> Interval {
        let mut lo = Bound::PosInf;
        let mut hi = Bound::NegInf;
        for (bx, shifts) in &self.pieces {
            for s in shifts.keys() {
                let iv = bx.axes[var].shifted(s[var]);
                lo = lo.min(iv.lo);
                hi = hi.max(iv.hi);
            }
        }
        Interval::new(lo, hi)
    }
}

/// The projector family P_i⁺ for an iterated Laurent model.
#[derive(Debug, Clone)]
pub struct CubicalContext {
    order: Arc<VarOrder>,
}

impl CubicalContext {
    pub fn new(order: Arc<VarOrder>) -> Self {
        CubicalContext { order }
    }

    pub fn order(&self) -> &Arc<VarOrder> {
        &self.order
    }

    pub fn levels(&self) -> usize {
        self.order.len()
    }

    /// Level i (1-based) acts on the outermost-first variable t_{n+1-i}.
    pub fn level_var(&self, level: usize) -> Result<usize, TateError> {
        let n = self.order.len();
        if level == 0 || level > n {
            return Err(TateError::BadLevel(level, n));
        }
        Ok(n - level)
    }

    /// P_i⁺: projection onto nonnegative exponents of the level variable
    /// (the lattice of the level's Tate layer).
    pub fn proj_plus(&self, level: usize) -> Result<BandedOperator, TateError> {
        let var = self.level_var(level)?;
        Ok(BandedOperator::axis_projector(
            self.order.clone(),
            var,
            Interval::at_least(0),
        ))
    }

    /// 1 - P_i⁺.
    pub fn proj_minus(&self, level: usize) -> Result<BandedOperator, TateError> {
        let var = self.level_var(level)?;
        Ok(BandedOperator::axis_projector(
            self.order.clone(),
            var,
            Interval::at_most(-1),
        ))
    }

    /// Grading projector onto a finite exponent window at the level; lies
    /// in I_i⁰ and is a two-sided unit for operators confined to the
    /// window.
    pub fn grade_projector(
        &self,
        level: usize,
        lo: i64,
        hi: i64,
    ) -> Result<BandedOperator, TateError> {
        let var = self.level_var(level)?;
        Ok(BandedOperator::axis_projector(
            self.order.clone(),
            var,
            Interval::between(lo, hi),
        ))
    }
}

/// Membership signs for the cubical ideals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdealSign {
    /// I_i⁺: bounded (image confined to a lattice of the level).
    Plus,
    /// I_i⁻: discrete (kills a lattice of the level).
    Minus,
    /// I_i⁰ = I_i⁺ ∩ I_i⁻.
    Zero,
}

/// Decide ideal membership at a level from the normal form. Exact for the
/// whole operator class representable here: sign + holds iff the image
/// exponents at the level variable are bounded below (the image lies in a
/// lattice), sign - iff the source support is bounded above (a lattice is
/// killed).
pub fn ideal_membership(
    ctx: &CubicalContext,
    op: &BandedOperator,
    level: usize,
    sign: IdealSign,
) -> Result<bool, TateError> {
    let var = ctx.level_var(level)?;
    let plus = op.image_support(var).lo != Bound::NegInf || op.is_zero();
    let minus = op.source_support(var).hi != Bound::PosInf || op.is_zero();
    Ok(match sign {
        IdealSign::Plus => plus,
        IdealSign::Minus => minus,
        IdealSign::Zero => plus && minus,
    })
}

/// Is the operator trace-class (member of every I_i⁰)?
pub fn is_trace_class(ctx: &CubicalContext, op: &BandedOperator) -> Result<bool, TateError> {
    for level in 1..=ctx.levels() {
        if !ideal_membership(ctx, op, level, IdealSign::Zero)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sum of the finitely many possibly-nonzero diagonal entries. Requires
/// certified trace-class input; the zero-shift boxes of such an operator
/// are finite.
pub fn trace_class_trace(ctx: &CubicalContext, op: &BandedOperator) -> Result<Rat, TateError> {
    for level in 1..=ctx.levels() {
        if !ideal_membership(ctx, op, level, IdealSign::Zero)? {
            return Err(TateError::NotTraceClass(level));
        }
    }
    let n = ctx.levels();
    let zero_shift = vec![0i64; n];
    let mut total = Rat::zero();
    for (bx, shifts) in op.pieces() {
        if let Some(c) = shifts.get(&zero_shift) {
            let card = bx
                .cardinality()
                .expect("trace-class pieces with diagonal action are finite");
            total += c.clone() * Rat::from_integer(card.into());
        }
    }
    Ok(total)
}

/// The chosen representative of Λ at a level: op ↦ P_i⁺ ∘ op. The
/// multiplicativity defect P⁺(xy) - (P⁺x)(P⁺y) = P⁺x(1-P⁺)y lies in I_i⁰.
pub fn lambda_plus(
    ctx: &CubicalContext,
    op: &BandedOperator,
    level: usize,
) -> Result<BandedOperator, TateError> {
    ctx.proj_plus(level)?.compose(op)
}

/// Constructive splitting along I_i⁺ + I_i⁻ = A: (P⁺op, (1-P⁺)op). The
/// first part is certified bounded, the second discrete, and they sum to
/// the operator exactly.
pub fn decompose_pm(
    ctx: &CubicalContext,
    op: &BandedOperator,
    level: usize,
) -> Result<(BandedOperator, BandedOperator), TateError> {
    let plus = ctx.proj_plus(level)?.compose(op)?;
    let minus = ctx.proj_minus(level)?.compose(op)?;
    debug_assert!(ideal_membership(ctx, &plus, level, IdealSign::Plus)?);
    debug_assert!(ideal_membership(ctx, &minus, level, IdealSign::Minus)?);
    Ok((plus, minus))
}

/// A two-sided local grading unit for a finite family of operators that are
/// I_i⁰ at every level: the product of the grade projectors over a window
/// covering all source and image activity. e∘a = a∘e = a for each member,
/// and e itself is trace-class.
pub fn local_unit_for(
    ctx: &CubicalContext,
    ops: &[&BandedOperator],
) -> Result<BandedOperator, TateError> {
    let n = ctx.levels();
    let mut unit = BandedOperator::identity(ctx.order.clone());
    for level in 1..=n {
        let var = ctx.level_var(level)?;
        let mut lo = 0i64;
        let mut hi = 0i64;
        for op in ops {
            for iv in [op.source_support(var), op.image_support(var)] {
                match iv.lo {
                    Bound::At(x) => lo = lo.min(x),
                    Bound::NegInf if !op.is_zero() => return Err(TateError::NotTraceClass(level)),
                    _ => {}
                }
                match iv.hi {
                    Bound::At(x) => hi = hi.max(x),
                    Bound::PosInf if !op.is_zero() => return Err(TateError::NotTraceClass(level)),
                    _ => {}
                }
            }
        }
        unit = unit.compose(&ctx.grade_projector(level, lo, hi)?)?;
    }
    Ok(unit)
}
