//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the corpus sizes and checks it ran. All comparisons are exact; the only
//! tolerances anywhere are the two wall-clock budgets, asserted as stated.

mod common;

use std::sync::Arc;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::Rng;

use common::*;
use residua::exactlin::Rat;
use residua::hochschild::{b_apply, hh_dims, hkr_chain, truncated_polynomial_algebra};
use residua::kforms::{kahler_presentation, RingSpec};
use residua::laurent::{residue_oracle_nd, LaurentPoly, VarOrder};
use residua::localcoh::{
    boundary_partial, boundary_partial_cech_checked, cech_h_dims, cousin_square_sum,
    residue_sum_check, CechModule, SupportSeq,
};
use residua::ressym::{
    abstract_symbol, ce_cycle_check, tate_residue_1d, SymbolInput, SYMBOL_SIGN_2D,
};
use residua::tateop::{
    decompose_pm, ideal_membership, is_trace_class, lambda_plus, trace_class_trace,
    BandedOperator, CubicalContext, IdealSign,
};

fn t_order() -> Arc<VarOrder> {
    VarOrder::new(vec!["t"]).unwrap()
}

fn t12_order() -> Arc<VarOrder> {
    VarOrder::new(vec!["t1", "t2"]).unwrap()
}

#[test]
fn criterion_1_tate_residue_three_way_agreement() {
    let start = Instant::now();
    let order = t_order();
    let mono = |e: i64| LaurentPoly::monomial(order.clone(), vec![e], Rat::one());
    // 289 monomial pairs with the closed-form expected value.
    let mut monomial_cases = 0usize;
    for a in -8i64..=8 {
        for b in -8i64..=8 {
            let f = mono(a);
            let g = mono(b);
            let expected = if a + b == 0 { rat_int(b) } else { Rat::zero() };
            let tate = tate_residue_1d(&f, &g).unwrap();
            let trace = abstract_symbol(&SymbolInput::new(f.clone(), vec![g.clone()]).unwrap()).unwrap();
            let oracle = residue_oracle_nd(&f, std::slice::from_ref(&g)).unwrap();
            assert_eq!(tate, expected, "tate at ({a}, {b})");
            assert_eq!(trace.value, expected, "symbol at ({a}, {b})");
            assert_eq!(trace.tate, Some(expected.clone()), "recorded tate at ({a}, {b})");
            assert_eq!(oracle, expected, "oracle at ({a}, {b})");
            monomial_cases += 1;
        }
    }
    assert_eq!(monomial_cases, 289);
    // 200 random Laurent pairs, supports in [-6, 6], |p|, |q| ≤ 10.
    let mut rng = rng(0x7a7e_0001);
    for case in 0..200 {
        let f = random_laurent_nonzero(&mut rng, &order, 5, -6, 6);
        let g = random_laurent_nonzero(&mut rng, &order, 5, -6, 6);
        let tate = tate_residue_1d(&f, &g).unwrap();
        let trace = abstract_symbol(&SymbolInput::new(f.clone(), vec![g.clone()]).unwrap()).unwrap();
        let oracle = residue_oracle_nd(&f, std::slice::from_ref(&g)).unwrap();
        assert_eq!(tate, oracle, "random case {case}: tate vs oracle");
        assert_eq!(trace.value, oracle, "random case {case}: symbol vs oracle");
        assert!(trace.agree, "random case {case}");
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "criterion 1 exceeded its 60 s budget: {elapsed:?}"
    );
    println!(
        "criterion 1 PASS: 289 monomial + 200 random pairs, tate = symbol = oracle exactly, {elapsed:?}"
    );
}

#[test]
fn criterion_2_abstract_symbol_2d_vs_jacobian_oracle() {
    let start = Instant::now();
    let order = t12_order();
    let mono =
        |a: i64, b: i64| LaurentPoly::monomial(order.clone(), vec![a, b], Rat::one());
    let range: Vec<i64> = (-3..=3).collect();
    let mut checked = 0u64;
    let mut nonzero = 0u64;
    for &a in &range {
        for &b in &range {
            for &c in &range {
                for &d in &range {
                    for &e in &range {
                        for &h in &range {
                            let f = mono(a, b);
                            let g1 = mono(c, d);
                            let g2 = mono(e, h);
                            let trace = abstract_symbol(
                                &SymbolInput::new(f.clone(), vec![g1.clone(), g2.clone()]).unwrap(),
                            )
                            .unwrap_or_else(|err| {
                                panic!("({a},{b},{c},{d},{e},{h}): {err}")
                            });
                            let oracle = residue_oracle_nd(&f, &[g1, g2]).unwrap();
                            // The pinned sign is baked into `value`; equality
                            // for every tuple is exactly the constancy of ε.
                            assert_eq!(
                                trace.value, oracle,
                                "sign drift or mismatch at ({a},{b},{c},{d},{e},{h})"
                            );
                            if !oracle.is_zero() {
                                nonzero += 1;
                            }
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert_eq!(checked, 117_649);
    assert!(nonzero > 0, "corpus must exercise nonzero residues");
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 600,
        "criterion 2 exceeded its 10 min budget: {elapsed:?}"
    );
    println!(
        "criterion 2 PASS: 117649 monomial triples, symbol = {SYMBOL_SIGN_2D}·(raw trace) = oracle exactly ({nonzero} nonzero), {elapsed:?}"
    );
}

#[test]
fn criterion_3_hkr_chains_are_cycles() {
    let ring = RingSpec::polynomial(vec!["x", "y"]).unwrap();
    let mut rng = rng(0x7a7e_0003);
    let mut checked = 0usize;
    let mut nontrivial = 0usize;
    while checked < 100 {
        let degree = rng.gen_range(0..=2usize);
        let omega = random_polynomial_form(&mut rng, &ring, degree, 5 - degree as i64);
        let (chain, _) = hkr_chain(&omega, 5).unwrap();
        if degree >= 1 {
            let b = b_apply(&chain).unwrap();
            assert!(b.is_zero(), "hkr chain of degree {degree} is not a cycle");
        }
        if !chain.is_zero() {
            nontrivial += 1;
        }
        checked += 1;
    }
    assert!(nontrivial >= 50, "corpus too degenerate: {nontrivial}");
    println!("criterion 3 PASS: 100 random forms over ℚ[x,y], b(hkr(ω)) = 0 exactly");
}

#[test]
fn criterion_4_hh_degree_one_matches_kahler_oracle() {
    let named: Vec<(&str, Arc<residua::hochschild::StructureAlgebra>)> = vec![
        ("Q[e]/(e^2)", truncated_polynomial_algebra(2)),
        ("Q[x]/(x^3)", truncated_polynomial_algebra(3)),
        ("Q[x]/(x^4)", truncated_polynomial_algebra(4)),
        (
            "Q[x,y]/(x^2,xy,y^2)",
            monomial_quotient_xy(&[(0, 0), (1, 0), (0, 1)]),
        ),
    ];
    for (name, algebra) in &named {
        let hh = hh_dims(algebra, 1).unwrap();
        let kahler = kahler_presentation(algebra).unwrap();
        assert_eq!(hh[&1], kahler.dim, "{name}");
    }
    let mut rng = rng(0x7a7e_0004);
    for case in 0..20 {
        let algebra = random_commutative_algebra(&mut rng);
        let hh = hh_dims(&algebra, 1).unwrap();
        let kahler = kahler_presentation(&algebra).unwrap();
        assert_eq!(
            hh[&1], kahler.dim,
            "random commutative algebra {case} (dim {})",
            algebra.dim()
        );
    }
    println!("criterion 4 PASS: HH₁ = dim Ω¹ for 4 named + 20 random commutative algebras (exact)");
}

#[test]
fn criterion_5_local_cohomology_vanishing_and_top_basis() {
    // Binomial oracle: all-negative vectors of length n summing to d are
    // counted by C(-d - 1, n - 1).
    fn binomial(n: i64, k: i64) -> usize {
        if k < 0 || k > n {
            return 0;
        }
        let mut acc = 1i64;
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc as usize
    }
    for n in 1..=3usize {
        let vars: Vec<String> = (0..n).map(|i| format!("x{}", i + 1)).collect();
        let ring = RingSpec::polynomial(vars.clone()).unwrap();
        let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
        let support = SupportSeq::new(&ring, &refs).unwrap();
        let dims = cech_h_dims(&support, CechModule::Ring, (-8, 4)).unwrap();
        for (p, per_degree) in &dims {
            for (d, count) in per_degree {
                if *p != n {
                    assert_eq!(*count, 0, "H^{p} degree {d} piece must vanish (n = {n})");
                } else {
                    let expect = binomial(-d - 1, n as i64 - 1);
                    assert_eq!(*count, expect, "H^{n} degree {d} piece (n = {n})");
                }
            }
        }
    }
    println!(
        "criterion 5 PASS: ℚ[x1..xn], n ≤ 3, window [-8, 4]: H^p = 0 for p ≠ n and H^n matches the binomial oracle exactly"
    );
}

#[test]
fn criterion_6_cousin_d_squared_and_two_route_agreement() {
    let base = RingSpec::polynomial(vec!["x", "y"]).unwrap();
    let mut rng = rng(0x7a7e_0006);
    let mut nonzero_boundaries = 0usize;
    for case in 0..100 {
        let degree = rng.gen_range(0..=2usize);
        // A class with empty support over ℚ[x,y][x⁻¹,y⁻¹].
        let x = random_fraction_xy(&mut rng, &[], &["x", "y"], degree);
        // Oriented d∘d = 0 through the two codimension-one paths.
        let sum = cousin_square_sum(&base, x.numerator(), "x", "y").unwrap();
        assert!(sum.is_zero_class(), "case {case}: oriented d² ≠ 0");
        // Route agreement, one step at a time, through both paths.
        for (first, second) in [("x", "y"), ("y", "x")] {
            let step1 = boundary_partial(&x, first).unwrap();
            let step1_checked = boundary_partial_cech_checked(&x, first).unwrap();
            assert!(
                step1.class_eq(&step1_checked),
                "case {case}: routes disagree at step 1 via {first}"
            );
            let step2 = boundary_partial(&step1, second).unwrap();
            let step2_checked = boundary_partial_cech_checked(&step1_checked, second).unwrap();
            assert!(
                step2.class_eq(&step2_checked),
                "case {case}: routes disagree at step 2 via {second}"
            );
            if !step2.is_zero_class() {
                nonzero_boundaries += 1;
            }
        }
    }
    assert!(nonzero_boundaries >= 40, "corpus too degenerate");
    println!(
        "criterion 6 PASS: 100 random classes over ℚ[x,y]: oriented ∂∘∂ = 0 and the normal-form and Čech-cocycle routes agree"
    );
}

#[test]
fn criterion_7_residue_theorem_on_p1() {
    let mut rng = rng(0x7a7e_0007);
    let mut quadratic = 0usize;
    let mut cubic = 0usize;
    for case in 0..100 {
        // Make sure quadratic and cubic residue fields genuinely appear.
        let force = match case % 10 {
            0..=2 => Some(2),
            3..=4 => Some(3),
            _ => None,
        };
        let omega = random_rational_one_form(&mut rng, force);
        if force == Some(2) {
            quadratic += 1;
        }
        if force == Some(3) {
            cubic += 1;
        }
        let total = residue_sum_check(&omega).unwrap();
        assert!(
            total.is_zero(),
            "case {case}: residues of {:?}/{:?} sum to {total}",
            omega.num(),
            omega.den()
        );
    }
    assert!(quadratic >= 20 && cubic >= 10);
    println!(
        "criterion 7 PASS: 100 random rational 1-forms (deg ≤ 6, incl. {quadratic} quadratic and {cubic} cubic pole divisors): residues sum to 0 exactly"
    );
}

#[test]
fn criterion_8_cubical_axioms_constructively() {
    for (label, order) in [("n=1", t_order()), ("n=2", t12_order())] {
        let ctx = CubicalContext::new(order.clone());
        let levels = ctx.levels();
        let mut rng = rng(0x7a7e_0008 + levels as u64);
        // decompose_pm contracts on 100 random in-scope operators per level.
        for case in 0..100 {
            let depth = rng.gen_range(0..=2);
            let op = random_operator(&mut rng, &ctx, depth);
            for level in 1..=levels {
                let (plus, minus) = decompose_pm(&ctx, &op, level).unwrap();
                assert_eq!(plus.add(&minus).unwrap(), op, "{label} case {case}: plus + minus");
                assert!(
                    ideal_membership(&ctx, &plus, level, IdealSign::Plus).unwrap(),
                    "{label} case {case} level {level}: plus membership"
                );
                assert!(
                    ideal_membership(&ctx, &minus, level, IdealSign::Minus).unwrap(),
                    "{label} case {case} level {level}: minus membership"
                );
            }
        }
        // Trace vanishes on 100 random commutators [trace-class, arbitrary].
        for case in 0..100 {
            let a = random_trace_class(&mut rng, &ctx);
            let depth = rng.gen_range(0..=2);
            let b = random_operator(&mut rng, &ctx, depth);
            assert!(is_trace_class(&ctx, &a).unwrap(), "{label} case {case}: generator");
            let bracket = a.compose(&b).unwrap().sub(&b.compose(&a).unwrap()).unwrap();
            let trace = trace_class_trace(&ctx, &bracket).unwrap();
            assert!(trace.is_zero(), "{label} case {case}: Tr[a,b] = {trace}");
        }
        // Λ̃ multiplicativity defect lands in I⁰ for 100 random pairs per
        // level.
        for case in 0..100 {
            let dx = rng.gen_range(0..=1);
            let x = random_operator(&mut rng, &ctx, dx);
            let dy = rng.gen_range(0..=1);
            let y = random_operator(&mut rng, &ctx, dy);
            for level in 1..=levels {
                let defect = lambda_plus(&ctx, &x.compose(&y).unwrap(), level)
                    .unwrap()
                    .sub(
                        &lambda_plus(&ctx, &x, level)
                            .unwrap()
                            .compose(&lambda_plus(&ctx, &y, level).unwrap())
                            .unwrap(),
                    )
                    .unwrap();
                assert!(
                    ideal_membership(&ctx, &defect, level, IdealSign::Zero).unwrap(),
                    "{label} case {case} level {level}: defect not in I⁰"
                );
            }
        }
    }
    println!(
        "criterion 8 PASS: decompose_pm contracts, commutator-trace vanishing and Λ̃ defects in I⁰, 100 random cases each for n = 1 and n = 2"
    );
}

#[test]
fn criterion_9_ce_cycle_check_on_symbol_corpora() {
    // Corpus of criterion 1: monomial pairs and random Laurent pairs.
    let order1 = t_order();
    let mono1 = |e: i64| LaurentPoly::monomial(order1.clone(), vec![e], Rat::one());
    for a in -8i64..=8 {
        for b in -8i64..=8 {
            let ops = vec![
                BandedOperator::mult(&mono1(a)),
                BandedOperator::mult(&mono1(b)),
            ];
            assert!(ce_cycle_check(&ops).unwrap(), "pair ({a}, {b})");
        }
    }
    let mut rng = rng(0x7a7e_0001);
    for _ in 0..200 {
        let f = random_laurent_nonzero(&mut rng, &order1, 5, -6, 6);
        let g = random_laurent_nonzero(&mut rng, &order1, 5, -6, 6);
        let ops = vec![BandedOperator::mult(&f), BandedOperator::mult(&g)];
        assert!(ce_cycle_check(&ops).unwrap());
    }
    // Corpus of criterion 2: every monomial triple.
    let order2 = t12_order();
    let mono2 =
        |a: i64, b: i64| LaurentPoly::monomial(order2.clone(), vec![a, b], Rat::one());
    let range: Vec<i64> = (-3..=3).collect();
    let mut checked = 0u64;
    for &a in &range {
        for &b in &range {
            for &c in &range {
                for &d in &range {
                    for &e in &range {
                        for &h in &range {
                            let ops = vec![
                                BandedOperator::mult(&mono2(a, b)),
                                BandedOperator::mult(&mono2(c, d)),
                                BandedOperator::mult(&mono2(e, h)),
                            ];
                            assert!(ce_cycle_check(&ops).unwrap());
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert_eq!(checked, 117_649);
    println!(
        "criterion 9 PASS: ce_cycle_check true on all 489 one-variable pairs and 117649 two-variable monomial triples"
    );
}
