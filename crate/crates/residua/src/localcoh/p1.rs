//! Residues of rational 1-forms on P¹ over ℚ.
//!
//! A closed point is a monic irreducible polynomial p(x) or ∞. The residue
//! at p is Tr_{κ/ℚ} of the local residue computed in κ = ℚ[x]/(p): we expand
//! the form in the local parameter at the generic root and trace down with
//! the companion-matrix trace. No splitting fields are ever constructed.

use num_traits::{One, Zero};
use thiserror::Error;

use super::poly::{factor, is_irreducible, Poly};
use crate::exactlin::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum P1Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("point descriptor must be monic irreducible (or infinity)")]
    BadPoint,
}

/// A closed point of P¹ over ℚ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum P1Point {
    /// V(p) for a monic irreducible p ∈ ℚ[x].
    Finite(Poly),
    Infinity,
}

/// f(x) dx with f = num/den.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalOneForm {
    num: Poly,
    den: Poly,
}

impl RationalOneForm {
    pub fn new(num: Poly, den: Poly) -> Result<Self, P1Error> {
        if den.is_zero() {
            return Err(P1Error::ZeroDenominator);
        }
        // Keep the fraction reduced so pole orders are honest.
        let g = num.gcd(&den);
        let (num, den) = if g.deg() > 0 {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        } else {
            (num, den)
        };
        Ok(RationalOneForm { num, den })
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }
}

/// Arithmetic in κ = ℚ[x]/(p): elements are polynomials of degree < deg p.
struct ResidueField {
    p: Poly,
}

impl ResidueField {
    fn reduce(&self, a: &Poly) -> Poly {
        a.div_rem(&self.p).1
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&a.mul(b))
    }

    fn inv(&self, a: &Poly) -> Poly {
        let (g, u, _) = a.extended_gcd(&self.p);
        assert!(g.deg() == 0 && !g.is_zero(), "inverting zero in residue field");
        self.reduce(&u.scale(&g.leading().recip()))
    }

    /// Trace of multiplication by `a` on κ over ℚ, in the basis 1, α, ...,
    /// α^{d-1} (the companion-matrix trace).
    fn trace(&self, a: &Poly) -> Rat {
        let d = self.p.deg();
        let mut total = Rat::zero();
        let mut power = self.reduce(a);
        for i in 0..d {
            total += power.coeff(i);
            if i + 1 < d {
                power = self.mul(&power, &Poly::x());
            }
        }
        total
    }
}

/// Truncated power series over κ with coefficients reduced mod p.
struct KSeries {
    coeffs: Vec<Poly>,
}

impl KSeries {
    fn truncate_len(field: &ResidueField, mut coeffs: Vec<Poly>, len: usize) -> Self {
        coeffs.truncate(len);
        for c in coeffs.iter_mut() {
            *c = field.reduce(c);
        }
        while coeffs.len() < len {
            coeffs.push(Poly::zero());
        }
        KSeries { coeffs }
    }

    fn mul(&self, field: &ResidueField, other: &KSeries, len: usize) -> KSeries {
        let mut out = vec![Poly::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                out[i + j] = out[i + j].add(&field.mul(a, b));
            }
        }
        KSeries { coeffs: out }
    }

    /// Multiplicative inverse; the constant term must be a unit.
    fn inv(&self, field: &ResidueField, len: usize) -> KSeries {
        let c0_inv = field.inv(&self.coeffs[0]);
        let mut out = vec![Poly::zero(); len];
        out[0] = c0_inv.clone();
        for k in 1..len {
            let mut acc = Poly::zero();
            for j in 1..=k {
                if j < self.coeffs.len() {
                    acc = acc.add(&field.mul(&self.coeffs[j], &out[k - j]));
                }
            }
            out[k] = field.reduce(&field.mul(&c0_inv, &acc).neg());
        }
        KSeries { coeffs: out }
    }
}

/// Expand q(α + s) as a series in s with κ-coefficients, truncated to s^len.
fn taylor_at_root(field: &ResidueField, q: &Poly, len: usize) -> KSeries {
    // Horner in (α + s): acc <- acc * (s + α) + c.
    let mut acc = vec![Poly::zero(); len];
    for c in q.coeffs().iter().rev() {
        // Multiply acc by (s + α), truncating.
        let mut next = vec![Poly::zero(); len];
        for i in 0..len {
            if acc[i].is_zero() {
                continue;
            }
            next[i] = next[i].add(&field.mul(&acc[i], &Poly::x()));
            if i + 1 < len {
                let shifted = acc[i].clone();
                next[i + 1] = next[i + 1].add(&shifted);
            }
        }
        next[0] = next[0].add(&Poly::constant(c.clone()));
        acc = next;
    }
    KSeries::truncate_len(field, acc, len)
}

/// Local residue of (num/den) dx at the closed point V(p), traced to ℚ.
fn residue_at_finite(num: &Poly, den: &Poly, p: &Poly) -> Result<Rat, P1Error> {
    if !p.is_monic() || !is_irreducible(p) {
        return Err(P1Error::BadPoint);
    }
    // Pole order of the reduced fraction at p.
    let mut e = 0u32;
    let mut cofactor = den.clone();
    loop {
        let (q, r) = cofactor.div_rem(p);
        if r.is_zero() {
            e += 1;
            cofactor = q;
        } else {
            break;
        }
    }
    if e == 0 {
        return Ok(Rat::zero());
    }
    let field = ResidueField { p: p.clone() };
    let len = e as usize;
    // den = p^e * cofactor; p(α + s) = s * u(s) with u(0) = p'(α) a unit.
    let u = {
        let full = taylor_at_root(&field, p, len + 1);
        // Constant term vanishes (p(α) = 0); shift down by one.
        debug_assert!(full.coeffs[0].is_zero());
        KSeries {
            coeffs: full.coeffs[1..].to_vec(),
        }
    };
    let num_series = taylor_at_root(&field, num, len);
    let cof_series = taylor_at_root(&field, &cofactor, len);
    // residue = coefficient of s^{e-1} in num / (u^e * cofactor).
    let mut u_pow = KSeries::truncate_len(&field, vec![Poly::one()], len);
    for _ in 0..e {
        u_pow = u_pow.mul(&field, &u, len);
    }
    let denom_series = u_pow.mul(&field, &cof_series, len);
    let series = num_series.mul(&field, &denom_series.inv(&field, len), len);
    Ok(field.trace(&series.coeffs[len - 1]))
}

/// Residue of ω at a point of P¹. At ∞ the form is rewritten in the
/// coordinate u = 1/x, where dx = -du/u².
pub fn p1_residue(omega: &RationalOneForm, point: &P1Point) -> Result<Rat, P1Error> {
    match point {
        P1Point::Finite(p) => residue_at_finite(&omega.num, &omega.den, p),
        P1Point::Infinity => {
            let dn = omega.num.degree().map_or(0, |d| d as i64);
            let dd = omega.den.deg() as i64;
            if omega.num.is_zero() {
                return Ok(Rat::zero());
            }
            // -x^{dd - dn - 2} * num_rev / den_rev  in u, x := power of u.
            let num_rev = omega.num.reversed().neg();
            let den_rev = omega.den.reversed();
            let shift = dd - dn - 2;
            let (num_u, den_u) = if shift >= 0 {
                let mut xs = vec![Rat::zero(); shift as usize];
                xs.push(Rat::one());
                (num_rev.mul(&Poly::new(xs)), den_rev)
            } else {
                let mut xs = vec![Rat::zero(); (-shift) as usize];
                xs.push(Rat::one());
                (num_rev, den_rev.mul(&Poly::new(xs)))
            };
            residue_at_finite(&num_u, &den_u, &Poly::x())
        }
    }
}

/// All finite poles of ω (monic irreducible factors of the reduced
/// denominator), in a deterministic order.
pub fn poles(omega: &RationalOneForm) -> Vec<Poly> {
    if omega.den.deg() == 0 {
        return vec![];
    }
    let (_, factors) = factor(&omega.den);
    factors.into_iter().map(|(p, _)| p).collect()
}

/// Sum of residues over every pole including ∞; the residue theorem says
/// this is always zero, which the acceptance suite verifies at scale.
pub fn residue_sum_check(omega: &RationalOneForm) -> Result<Rat, P1Error> {
    let mut total = p1_residue(omega, &P1Point::Infinity)?;
    for p in poles(omega) {
        total += p1_residue(omega, &P1Point::Finite(p))?;
    }
    Ok(total)
}
