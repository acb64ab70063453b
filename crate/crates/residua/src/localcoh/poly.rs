//! Dense univariate polynomials over ℚ: division, gcd, squarefree
//! decomposition and exact factorization into irreducibles (Kronecker's
//! method, adequate at the degree ≤ 6 scale this crate works at).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactlin::{rat_to_string, Rat};

/// Coefficients by ascending degree; no trailing zeros.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => rat_to_string(c),
                1 => format!("{}*x", rat_to_string(c)),
                _ => format!("{}*x^{}", rat_to_string(c), i),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    pub fn x() -> Self {
        Poly::new(vec![Rat::zero(), Rat::one()])
    }

    /// x - a.
    pub fn linear(a: Rat) -> Self {
        Poly::new(vec![-a, Rat::one()])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports None.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.leading().recip())
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x.clone() * c).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| -x.clone()).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a.clone() * b;
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division: self = q * div + r with deg r < deg div.
    pub fn div_rem(&self, div: &Poly) -> (Poly, Poly) {
        assert!(!div.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = vec![Rat::zero(); self.coeffs.len().saturating_sub(div.coeffs.len() - 1)];
        let dlead = div.leading();
        while !rem.is_zero() && rem.deg() >= div.deg() && !(rem.deg() == 0 && div.deg() > 0) {
            if rem.coeffs.len() < div.coeffs.len() {
                break;
            }
            let shift = rem.coeffs.len() - div.coeffs.len();
            let factor = rem.leading() / &dlead;
            quot[shift] = factor.clone();
            let mut sub = vec![Rat::zero(); shift];
            sub.extend(div.coeffs.iter().map(|c| c.clone() * &factor));
            rem = rem.sub(&Poly::new(sub));
        }
        (Poly::new(quot), rem)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.clone() * Rat::from_integer(((i + 1) as i64).into()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Coefficients reversed: x^deg * p(1/x).
    pub fn reversed(&self) -> Poly {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Poly::new(coeffs)
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: (g, u, v) with u*self + v*other = g, g monic.
    pub fn extended_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut u0, mut u1) = (Poly::one(), Poly::zero());
        let (mut v0, mut v1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let u = u0.sub(&q.mul(&u1));
            let v = v0.sub(&q.mul(&v1));
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = u;
            v0 = v1;
            v1 = v;
        }
        if r0.is_zero() {
            return (Poly::zero(), Poly::zero(), Poly::zero());
        }
        let lead = r0.leading().recip();
        (r0.scale(&lead), u0.scale(&lead), v0.scale(&lead))
    }

    /// Clear denominators and divide by content: a primitive integer
    /// polynomial with the same roots, positive leading coefficient.
    fn primitive_integer(&self) -> Vec<BigInt> {
        assert!(!self.is_zero());
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for c in &ints {
            content = content.gcd(c);
        }
        if !content.is_zero() {
            for c in ints.iter_mut() {
                *c /= &content;
            }
        }
        if ints.last().is_some_and(Signed::is_negative) {
            for c in ints.iter_mut() {
                *c = -c.clone();
            }
        }
        ints
    }
}

/// Squarefree decomposition (Yun): f = lead * Π part_i^i with the parts
/// squarefree, pairwise coprime and monic.
pub fn squarefree_decomposition(f: &Poly) -> (Rat, Vec<(Poly, u32)>) {
    assert!(!f.is_zero());
    let lead = f.leading();
    let f = f.monic();
    if f.deg() == 0 {
        return (lead, vec![]);
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_rem(&a0).0;
    let mut c = df.div_rem(&a0).0;
    let mut d = c.sub(&b.derivative());
    let mut out = Vec::new();
    let mut i = 1u32;
    while b.deg() > 0 {
        let a = b.gcd(&d);
        if a.deg() > 0 {
            out.push((a.clone(), i));
        }
        b = b.div_rem(&a).0;
        c = d.div_rem(&a).0;
        d = c.sub(&b.derivative());
        i += 1;
    }
    (lead, out)
}

fn divisors_with_sign(n: &BigInt, positive_only: bool) -> Vec<BigInt> {
    let n = n.abs();
    assert!(!n.is_zero());
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    if positive_only {
        small
    } else {
        let mut out = Vec::with_capacity(small.len() * 2);
        for d in small {
            out.push(d.clone());
            out.push(-d);
        }
        out
    }
}

/// Lagrange interpolation through (points[i], values[i]).
fn interpolate(points: &[i64], values: &[Rat]) -> Poly {
    let mut acc = Poly::zero();
    for (i, &xi) in points.iter().enumerate() {
        let mut basis = Poly::one();
        let mut denom = Rat::one();
        for (j, &xj) in points.iter().enumerate() {
            if i != j {
                basis = basis.mul(&Poly::linear(Rat::from_integer(xj.into())));
                denom *= Rat::from_integer((xi - xj).into());
            }
        }
        acc = acc.add(&basis.scale(&(values[i].clone() / denom)));
    }
    acc
}

/// One splitting step on a squarefree primitive integer polynomial: find a
/// nontrivial factor of degree ≤ deg/2, or certify irreducibility.
fn kronecker_split(f: &Poly) -> Option<(Poly, Poly)> {
    let deg = f.deg();
    debug_assert!(deg >= 1);
    if deg == 1 {
        return None;
    }
    // Evaluation points 0, 1, -1, 2, -2, ...
    let points: Vec<i64> = {
        let mut pts = vec![0i64];
        let mut k = 1i64;
        while pts.len() < deg / 2 + 1 {
            pts.push(k);
            pts.push(-k);
            k += 1;
        }
        pts.truncate(deg / 2 + 1);
        pts
    };
    let values: Vec<Rat> = points.iter().map(|&x| f.eval(&Rat::from_integer(x.into()))).collect();
    // A root among the points gives a linear factor at once.
    for (i, v) in values.iter().enumerate() {
        if v.is_zero() {
            let lin = Poly::linear(Rat::from_integer(points[i].into()));
            let quot = f.div_rem(&lin).0;
            return Some((lin, quot));
        }
    }
    let value_ints: Vec<BigInt> = values.iter().map(|v| v.numer().clone()).collect();
    for d in 1..=deg / 2 {
        let pts = &points[..d + 1];
        // Candidate factor values: divisors of f(x_i); positive at x_0
        // (a factor and its negation divide alike).
        let mut divisor_lists: Vec<Vec<BigInt>> = Vec::with_capacity(d + 1);
        divisor_lists.push(divisors_with_sign(&value_ints[0], true));
        for vi in &value_ints[1..d + 1] {
            divisor_lists.push(divisors_with_sign(vi, false));
        }
        let mut choice = vec![0usize; d + 1];
        'candidates: loop {
            let values: Vec<Rat> = (0..d + 1)
                .map(|i| Rat::from_integer(divisor_lists[i][choice[i]].clone()))
                .collect();
            let cand = interpolate(pts, &values);
            if cand.degree() == Some(d) && cand.coeffs().iter().all(|c| c.denom().is_one()) {
                let (quot, rem) = f.div_rem(&cand);
                if rem.is_zero() {
                    return Some((cand, quot));
                }
            }
            // Advance the mixed-radix counter.
            for i in 0..d + 1 {
                choice[i] += 1;
                if choice[i] < divisor_lists[i].len() {
                    continue 'candidates;
                }
                choice[i] = 0;
            }
            break;
        }
    }
    None
}

/// Monic irreducible factors with multiplicities, and the constant so that
/// f = constant * Π p_i^{e_i}. Exact over ℚ.
pub fn factor(f: &Poly) -> (Rat, Vec<(Poly, u32)>) {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let (lead, square_parts) = squarefree_decomposition(f);
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (part, mult) in square_parts {
        // Factor the squarefree part completely.
        let mut stack = vec![Poly::new(
            part.primitive_integer()
                .into_iter()
                .map(Rat::from_integer)
                .collect(),
        )];
        while let Some(g) = stack.pop() {
            if g.deg() == 0 {
                continue;
            }
            match kronecker_split(&g) {
                None => out.push((g.monic(), mult)),
                Some((a, b)) => {
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
    }
    out.sort_by(|a, b| (a.0.deg(), &a.0).cmp(&(b.0.deg(), &b.0)));
    (lead, out)
}

/// Is the (monic) polynomial irreducible over ℚ?
pub fn is_irreducible(f: &Poly) -> bool {
    if f.deg() == 0 {
        return false;
    }
    let (_, factors) = factor(f);
    factors.len() == 1 && factors[0].1 == 1 && factors[0].0.deg() == f.deg()
}
