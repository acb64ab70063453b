//! Shared corpus generators for the integration and acceptance suites.
//! Everything is seeded, so runs are reproducible.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use residua::exactlin::Rat;
use residua::hochschild::StructureAlgebra;
use residua::kforms::{DifferentialForm, RingSpec};
use residua::laurent::{LaurentPoly, VarOrder};
use residua::localcoh::{GenFraction, Poly, RationalOneForm, SupportSeq};
use residua::tateop::{BandedOperator, CubicalContext};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// A nonzero rational with numerator and denominator bounded by `bound`.
pub fn random_rat(rng: &mut ChaCha8Rng, bound: i64) -> Rat {
    let p = rng.gen_range(-bound..=bound);
    let q = rng.gen_range(1..=bound);
    if p == 0 {
        Rat::one()
    } else {
        Rat::new(p.into(), q.into())
    }
}

/// Laurent polynomial with 1..=terms monomials, exponents per variable in
/// [lo, hi], coefficients bounded by 10.
pub fn random_laurent(
    rng: &mut ChaCha8Rng,
    order: &Arc<VarOrder>,
    terms: usize,
    lo: i64,
    hi: i64,
) -> LaurentPoly {
    let n = order.len();
    let count = rng.gen_range(1..=terms);
    let mut poly = LaurentPoly::zero(order.clone());
    for _ in 0..count {
        let exps: Vec<i64> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
        let c = random_rat(rng, 10);
        poly = poly
            .add(&LaurentPoly::monomial(order.clone(), exps, c))
            .unwrap();
    }
    poly
}

/// Nonzero variant.
pub fn random_laurent_nonzero(
    rng: &mut ChaCha8Rng,
    order: &Arc<VarOrder>,
    terms: usize,
    lo: i64,
    hi: i64,
) -> LaurentPoly {
    loop {
        let p = random_laurent(rng, order, terms, lo, hi);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Random invertible matrix with its inverse, as dense rows: a product of
/// elementary row operations applied to the identity.
pub fn random_invertible(rng: &mut ChaCha8Rng, dim: usize) -> (Vec<Vec<Rat>>, Vec<Vec<Rat>>) {
    let mut t: Vec<Vec<Rat>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect();
    let mut t_inv = t.clone();
    for _ in 0..dim * 3 {
        let i = rng.gen_range(0..dim);
        let mut j = rng.gen_range(0..dim);
        if dim > 1 {
            while j == i {
                j = rng.gen_range(0..dim);
            }
        }
        if dim == 1 {
            continue;
        }
        let c = rat_int(rng.gen_range(-2..=2i64));
        if c.is_zero() {
            continue;
        }
        // Row op on T: row_i += c * row_j; inverse op applied to T⁻¹ on the
        // other side: col_j -= c * col_i.
        for k in 0..dim {
            let delta = c.clone() * &t[j][k];
            t[i][k] += delta;
        }
        for row in t_inv.iter_mut() {
            let delta = c.clone() * &row[i];
            row[j] -= delta;
        }
    }
    (t, t_inv)
}

/// Base algebras for the random commutative corpus.
fn base_commutative(rng: &mut ChaCha8Rng) -> Arc<StructureAlgebra> {
    match rng.gen_range(0..3) {
        // ℚ[x]/(p) for random monic p of degree 2..=5.
        0 => {
            let d = rng.gen_range(2..=5usize);
            let p: Vec<Rat> = (0..d).map(|_| rat_int(rng.gen_range(-3..=3))).collect();
            quotient_by_monic(&p)
        }
        // Monomial quotient of ℚ[x,y] with a staircase basis.
        1 => {
            let staircases: [&[(i64, i64)]; 4] = [
                &[(0, 0), (1, 0), (0, 1)],
                &[(0, 0), (1, 0), (0, 1), (1, 1)],
                &[(0, 0), (1, 0), (2, 0), (0, 1), (1, 1)],
                &[(0, 0), (1, 0), (2, 0), (3, 0), (4, 0)],
            ];
            let stair = staircases[rng.gen_range(0..staircases.len())];
            monomial_quotient_xy(stair)
        }
        // ℚ[x]/(x^k) truncations.
        _ => residua::hochschild::truncated_polynomial_algebra(rng.gen_range(2..=5)),
    }
}

/// ℚ[x]/(x^d + p_{d-1} x^{d-1} + ... + p_0): companion-style structure
/// constants.
pub fn quotient_by_monic(lower_coeffs: &[Rat]) -> Arc<StructureAlgebra> {
    let d = lower_coeffs.len();
    assert!(d >= 1);
    // Multiplication table by reducing x^k mod p.
    let reduce = |k: usize| -> Vec<Rat> {
        // Coordinates of x^k in the basis 1..x^{d-1}.
        let mut cur = vec![Rat::zero(); d];
        if k < d {
            cur[k] = Rat::one();
            return cur;
        }
        let mut power = vec![Rat::zero(); d];
        power[d - 1] = Rat::one();
        // x^d = -Σ p_i x^i; iterate multiplication by x.
        let step = |v: &[Rat]| -> Vec<Rat> {
            let mut out = vec![Rat::zero(); d];
            for i in 0..d - 1 {
                out[i + 1] = v[i].clone();
            }
            let top = v[d - 1].clone();
            if !top.is_zero() {
                for i in 0..d {
                    out[i] -= top.clone() * &lower_coeffs[i];
                }
            }
            out
        };
        let mut acc = step(&power);
        for _ in d + 1..=k {
            acc = step(&acc);
        }
        acc
    };
    let labels: Vec<String> = (0..d)
        .map(|i| if i == 0 { "1".into() } else { format!("x^{i}") })
        .collect();
    let mut products = vec![vec![vec![Rat::zero(); d]; d]; d];
    for i in 0..d {
        for j in 0..d {
            products[i][j] = reduce(i + j);
        }
    }
    let mut unit = vec![Rat::zero(); d];
    unit[0] = Rat::one();
    StructureAlgebra::new(labels, products, unit, None).expect("polynomial quotient")
}

/// ℚ[x,y] / (monomial ideal) with the given divisibility-closed basis.
pub fn monomial_quotient_xy(stair: &[(i64, i64)]) -> Arc<StructureAlgebra> {
    let basis: Vec<(i64, i64)> = stair.to_vec();
    let index = |m: (i64, i64)| basis.iter().position(|&b| b == m);
    let d = basis.len();
    let labels: Vec<String> = basis
        .iter()
        .map(|&(a, b)| match (a, b) {
            (0, 0) => "1".into(),
            _ => format!("x^{a}y^{b}"),
        })
        .collect();
    let mut products = vec![vec![vec![Rat::zero(); d]; d]; d];
    for (i, &(a1, b1)) in basis.iter().enumerate() {
        for (j, &(a2, b2)) in basis.iter().enumerate() {
            if let Some(k) = index((a1 + a2, b1 + b2)) {
                products[i][j][k] = Rat::one();
            }
        }
    }
    let mut unit = vec![Rat::zero(); d];
    unit[index((0, 0)).unwrap()] = Rat::one();
    StructureAlgebra::new(labels, products, unit, None).expect("monomial quotient")
}

/// Random commutative associative unital algebra of dim ≤ 5: a structured
/// base conjugated by a random basis change (so the structure constants are
/// dense and generic-looking while staying exactly associative).
pub fn random_commutative_algebra(rng: &mut ChaCha8Rng) -> Arc<StructureAlgebra> {
    let base = base_commutative(rng);
    let d = base.dim();
    let (t, t_inv) = random_invertible(rng, d);
    // New basis f_i = Σ_j t[j][i] e_j; products mapped back through t_inv.
    let to_old = |coords: &[Rat]| -> Vec<Rat> {
        let mut out = vec![Rat::zero(); d];
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..d {
                out[j] += c.clone() * &t[j][i];
            }
        }
        out
    };
    let to_new = |coords: &[Rat]| -> Vec<Rat> {
        let mut out = vec![Rat::zero(); d];
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..d {
                out[j] += c.clone() * &t_inv[j][i];
            }
        }
        out
    };
    let mut products = Vec::with_capacity(d);
    for i in 0..d {
        let mut row = Vec::with_capacity(d);
        let mut fi = vec![Rat::zero(); d];
        fi[i] = Rat::one();
        let fi_old = to_old(&fi);
        for j in 0..d {
            let mut fj = vec![Rat::zero(); d];
            fj[j] = Rat::one();
            let fj_old = to_old(&fj);
            row.push(to_new(&base.mul_vec(&fi_old, &fj_old)));
        }
        products.push(row);
    }
    let mut unit_new = vec![Rat::zero(); d];
    unit_new.clone_from_slice(&to_new(base.unit()));
    let labels: Vec<String> = (0..d).map(|i| format!("f{i}")).collect();
    StructureAlgebra::new(labels, products, unit_new, None).expect("conjugated algebra")
}

/// Random polynomial differential form over ℚ[x,y] of the given degree with
/// total coefficient degree ≤ max_coeff_degree.
pub fn random_polynomial_form(
    rng: &mut ChaCha8Rng,
    ring: &RingSpec,
    degree: usize,
    max_coeff_degree: i64,
) -> DifferentialForm {
    let order = ring.vars().clone();
    let nvars = order.len();
    let wedges: Vec<Vec<usize>> = match degree {
        0 => vec![vec![]],
        1 => (0..nvars).map(|v| vec![v]).collect(),
        2 => {
            let mut out = Vec::new();
            for a in 0..nvars {
                for b in a + 1..nvars {
                    out.push(vec![a, b]);
                }
            }
            out
        }
        _ => panic!("degree > 2 not needed"),
    };
    let mut terms = Vec::new();
    for w in wedges {
        if rng.gen_bool(0.7) {
            // Random polynomial coefficient.
            let mut coeff = LaurentPoly::zero(order.clone());
            for _ in 0..rng.gen_range(1..=3) {
                let a = rng.gen_range(0..=max_coeff_degree);
                let b = rng.gen_range(0..=(max_coeff_degree - a));
                let mono = LaurentPoly::monomial(order.clone(), vec![a, b], random_rat(rng, 10));
                coeff = coeff.add(&mono).unwrap();
            }
            if !coeff.is_zero() {
                terms.push((w, coeff));
            }
        }
    }
    DifferentialForm::from_terms(ring, degree, terms).expect("polynomial form")
}

/// Random monic irreducible polynomial over ℚ of the requested degree
/// (1, 2 or 3), certified by the exact factorizer.
pub fn random_irreducible(rng: &mut ChaCha8Rng, degree: usize) -> Poly {
    loop {
        let mut coeffs: Vec<Rat> = (0..degree).map(|_| rat_int(rng.gen_range(-5..=5))).collect();
        coeffs.push(Rat::one());
        let p = Poly::new(coeffs);
        if residua::localcoh::is_irreducible(&p) {
            return p;
        }
    }
}

/// Random rational 1-form with numerator degree ≤ 6 and a denominator built
/// from irreducible factors (degrees 1..3, multiplicities ≤ 2) of total
/// degree ≤ 6.
pub fn random_rational_one_form(rng: &mut ChaCha8Rng, force_degree: Option<usize>) -> RationalOneForm {
    let mut den = Poly::one();
    let mut total = 0usize;
    if let Some(d) = force_degree {
        let p = random_irreducible(rng, d);
        den = den.mul(&p);
        total += d;
    }
    while total < 6 && rng.gen_bool(0.75) {
        let d = *[1usize, 1, 2, 2, 3].get(rng.gen_range(0..5)).unwrap();
        if total + d > 6 {
            break;
        }
        let p = random_irreducible(rng, d);
        let mult = if rng.gen_bool(0.25) && total + 2 * d <= 6 { 2 } else { 1 };
        den = den.mul(&p.pow(mult));
        total += d * mult as usize;
    }
    let num_deg = rng.gen_range(0..=6usize);
    let num = loop {
        let coeffs: Vec<Rat> = (0..=num_deg).map(|_| rat_int(rng.gen_range(-9..=9))).collect();
        let p = Poly::new(coeffs);
        if !p.is_zero() {
            break p;
        }
    };
    RationalOneForm::new(num, den).expect("nonzero denominator")
}

/// Random in-scope banded operator: sums and composites of multiplication
/// operators, window matrices and the lattice projectors.
pub fn random_operator(
    rng: &mut ChaCha8Rng,
    ctx: &CubicalContext,
    depth: usize,
) -> BandedOperator {
    let order = ctx.order().clone();
    let n = order.len();
    if depth == 0 {
        return match rng.gen_range(0..4) {
            0 => BandedOperator::mult(&random_laurent(rng, &order, 3, -3, 3)),
            1 => {
                let entries: Vec<(Vec<i64>, Vec<i64>, Rat)> = (0..rng.gen_range(1..=3))
                    .map(|_| {
                        let src: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
                        let tgt: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
                        (src, tgt, random_rat(rng, 5))
                    })
                    .collect();
                BandedOperator::window_matrix(order, entries)
            }
            2 => ctx.proj_plus(rng.gen_range(1..=n)).unwrap(),
            _ => ctx.proj_minus(rng.gen_range(1..=n)).unwrap(),
        };
    }
    let a = random_operator(rng, ctx, depth - 1);
    let b = random_operator(rng, ctx, depth - 1);
    match rng.gen_range(0..3) {
        0 => a.compose(&b).unwrap(),
        1 => a.add(&b).unwrap(),
        _ => a.scale(&random_rat(rng, 5)),
    }
}

/// Random certified trace-class operator: a random operator compressed by
/// finite grading windows at every level (plus occasional bare window
/// matrices).
pub fn random_trace_class(
    rng: &mut ChaCha8Rng,
    ctx: &CubicalContext,
) -> BandedOperator {
    let order = ctx.order().clone();
    let n = order.len();
    if rng.gen_bool(0.3) {
        let entries: Vec<(Vec<i64>, Vec<i64>, Rat)> = (0..rng.gen_range(1..=4))
            .map(|_| {
                let src: Vec<i64> = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
                let tgt: Vec<i64> = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
                (src, tgt, random_rat(rng, 5))
            })
            .collect();
        return BandedOperator::window_matrix(order, entries);
    }
    let depth = rng.gen_range(0..=1);
    let mut op = random_operator(rng, ctx, depth);
    for level in 1..=n {
        let lo = rng.gen_range(-4..=0);
        let hi = rng.gen_range(0..=4);
        let e = ctx.grade_projector(level, lo, hi).unwrap();
        op = e.compose(&op).unwrap().compose(&e).unwrap();
    }
    op
}

/// Random generalized fraction over ℚ[x,y] with the given ordered support
/// and extra inversions; 0-form or form numerators.
pub fn random_fraction_xy(
    rng: &mut ChaCha8Rng,
    support_vars: &[&str],
    extra: &[&str],
    form_degree: usize,
) -> GenFraction {
    let base = RingSpec::polynomial(vec!["x", "y"]).unwrap();
    let support = SupportSeq::new(&base, support_vars).unwrap();
    let mut inverted: BTreeSet<usize> = support.sequence().iter().copied().collect();
    for e in extra {
        inverted.insert(base.vars().index_of(e).unwrap());
    }
    let loc = RingSpec::from_parts(base.vars().clone(), inverted).unwrap();
    let wedges: Vec<Vec<usize>> = match form_degree {
        0 => vec![vec![]],
        1 => vec![vec![0], vec![1]],
        _ => vec![vec![0, 1]],
    };
    let mut terms = Vec::new();
    for w in wedges {
        if rng.gen_bool(0.8) {
            let coeff = random_laurent(rng, loc.vars(), 3, -4, 3);
            // Confine negative exponents to the inverted variables.
            let filtered = LaurentPoly::from_terms(
                loc.vars().clone(),
                coeff.terms().filter(|(e, _)| {
                    e.iter()
                        .enumerate()
                        .all(|(v, &x)| x >= 0 || loc.inverted().contains(&v))
                })
                .map(|(e, c)| (e.clone(), c.clone())),
            );
            if !filtered.is_zero() {
                terms.push((w, filtered));
            }
        }
    }
    let numerator = DifferentialForm::from_terms(&loc, form_degree, terms).unwrap();
    GenFraction::new(support, extra, numerator).unwrap()
}
