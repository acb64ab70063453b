//! Expression parser for the command line: rational literals "p/q",
//! variables, + - *, integer powers (negative allowed), d(..) and the wedge
//! /\ between forms. Whitespace is insignificant; precedence ^ > * > +.
//! Errors carry byte positions.
//!
//! Scalars evaluate to fractions of Laurent polynomials so that inputs like
//! (x^2+1)^-1 work for the P¹ commands; contexts that need honest Laurent
//! polynomials reject non-monomial denominators.

use std::fmt;
use std::sync::Arc;

use residua::exactlin::{rat_to_string, Rat};
use residua::laurent::{LaurentPoly, VarOrder};

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        position,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Wedge,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            '/' => {
                if bytes.get(i + 1) == Some(&b'\\') {
                    out.push((i, Tok::Wedge));
                    i += 2;
                } else {
                    out.push((i, Tok::Slash));
                    i += 1;
                }
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].to_string())));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
            }
            _ => return err(i, format!("unexpected character `{c}`")),
        }
    }
    Ok(out)
}

/// Parse tree. `Pow` exponents are plain integers.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Rational(Rat),
    Var(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Neg(Box<Expr>),
    Diff(Box<Expr>),
    Wedge(Box<Expr>, Box<Expr>),
}

impl Expr {
    /// Canonical rendering; parses back to the same tree.
    pub fn print(&self) -> String {
        fn atom(e: &Expr) -> String {
            match e {
                Expr::Rational(_) | Expr::Var(_) | Expr::Diff(_) => e.print(),
                _ => format!("({})", e.print()),
            }
        }
        match self {
            Expr::Rational(r) => {
                if r < &Rat::from_integer(0.into()) {
                    format!("({})", rat_to_string(r))
                } else {
                    rat_to_string(r)
                }
            }
            Expr::Var(v) => v.clone(),
            Expr::Add(a, b) => format!("{} + {}", a.print(), b.print()),
            Expr::Sub(a, b) => {
                let rhs = match **b {
                    Expr::Add(..) | Expr::Sub(..) => format!("({})", b.print()),
                    _ => b.print(),
                };
                format!("{} - {}", a.print(), rhs)
            }
            Expr::Mul(a, b) => {
                let lhs = match **a {
                    Expr::Add(..) | Expr::Sub(..) | Expr::Neg(..) | Expr::Wedge(..) => {
                        format!("({})", a.print())
                    }
                    _ => a.print(),
                };
                let rhs = match **b {
                    Expr::Add(..) | Expr::Sub(..) | Expr::Neg(..) | Expr::Mul(..)
                    | Expr::Wedge(..) => format!("({})", b.print()),
                    _ => b.print(),
                };
                format!("{lhs} * {rhs}")
            }
            Expr::Pow(base, k) => format!("{}^{}", atom(base), k),
            Expr::Neg(a) => format!("-{}", atom(a)),
            Expr::Diff(a) => format!("d({})", a.print()),
            Expr::Wedge(a, b) => {
                let lhs = match **a {
                    Expr::Wedge(..) => format!("({})", a.print()),
                    Expr::Add(..) | Expr::Sub(..) | Expr::Neg(..) => format!("({})", a.print()),
                    _ => a.print(),
                };
                let rhs = match **b {
                    Expr::Add(..) | Expr::Sub(..) | Expr::Neg(..) | Expr::Wedge(..) => {
                        format!("({})", b.print())
                    }
                    _ => b.print(),
                };
                format!("{lhs} /\\ {rhs}")
            }
        }
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            err(self.here(), format!("expected {what}"))
        }
    }

    // wedge := expr ('/\' expr)*
    fn wedge(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.expr()?;
        while self.peek() == Some(&Tok::Wedge) {
            self.pos += 1;
            let rhs = self.expr()?;
            acc = Expr::Wedge(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = Expr::Add(Box::new(acc), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = Expr::Sub(Box::new(acc), Box::new(rhs));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    // term := factor ('*' factor)*
    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = Expr::Mul(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let at = self.here();
        let negative = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.bump() {
            Some(Tok::Int(s)) => {
                let v: i64 = s
                    .parse()
                    .map_err(|_| ParseError {
                        position: at,
                        message: format!("integer `{s}` out of range"),
                    })?;
                Ok(if negative { -v } else { v })
            }
            _ => err(at, "expected an integer"),
        }
    }

    // factor := atom ('^' int)?  with a unary minus convenience
    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            let inner = self.factor()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        let mut acc = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let k = self.integer()?;
            acc = Expr::Pow(Box::new(acc), k);
        }
        Ok(acc)
    }

    // atom := rational | ident | '(' expr ')' | 'd' '(' expr ')'
    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.here();
        match self.bump() {
            Some(Tok::Int(p)) => {
                // Rational literal p or p/q.
                if self.peek() == Some(&Tok::Slash) {
                    let save = self.pos;
                    self.pos += 1;
                    match self.bump() {
                        Some(Tok::Int(q)) => {
                            if q.chars().all(|c| c == '0') {
                                return err(at, "zero denominator in rational literal");
                            }
                            let r = Rat::new(
                                p.parse().map_err(|_| ParseError {
                                    position: at,
                                    message: "numerator out of range".into(),
                                })?,
                                q.parse().map_err(|_| ParseError {
                                    position: at,
                                    message: "denominator out of range".into(),
                                })?,
                            );
                            Ok(Expr::Rational(r))
                        }
                        _ => {
                            self.pos = save;
                            Ok(Expr::Rational(Rat::from_integer(p.parse().map_err(
                                |_| ParseError {
                                    position: at,
                                    message: "integer out of range".into(),
                                },
                            )?)))
                        }
                    }
                } else {
                    Ok(Expr::Rational(Rat::from_integer(p.parse().map_err(
                        |_| ParseError {
                            position: at,
                            message: "integer out of range".into(),
                        },
                    )?)))
                }
            }
            Some(Tok::Ident(name)) if name == "d" && self.peek() == Some(&Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)` closing d(...)")?;
                Ok(Expr::Diff(Box::new(inner)))
            }
            Some(Tok::Ident(name)) => Ok(Expr::Var(name)),
            Some(Tok::LParen) => {
                let inner = self.wedge()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(other) => err(at, format!("unexpected token {other:?}")),
            None => err(at, "unexpected end of input"),
        }
    }
}

/// Parse a full expression (wedge level at the top).
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        len: text.len(),
    };
    let e = p.wedge()?;
    if p.pos != p.toks.len() {
        return err(p.here(), "trailing input after expression");
    }
    Ok(e)
}

/// A scalar value: a fraction of Laurent polynomials.
#[derive(Debug, Clone)]
pub struct Frac {
    pub num: LaurentPoly,
    pub den: LaurentPoly,
}

impl Frac {
    fn scalar(order: Arc<VarOrder>, r: Rat) -> Frac {
        Frac {
            num: LaurentPoly::constant(order.clone(), r),
            den: LaurentPoly::one(order),
        }
    }

    fn add(&self, other: &Frac) -> Result<Frac, ParseError> {
        let op = |e: residua::laurent::LaurentError| ParseError {
            position: 0,
            message: e.to_string(),
        };
        Ok(Frac {
            num: self
                .num
                .mul(&other.den)
                .map_err(op)?
                .add(&other.num.mul(&self.den).map_err(op)?)
                .map_err(op)?,
            den: self.den.mul(&other.den).map_err(op)?,
        })
    }

    fn neg(&self) -> Frac {
        Frac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn mul(&self, other: &Frac) -> Result<Frac, ParseError> {
        let op = |e: residua::laurent::LaurentError| ParseError {
            position: 0,
            message: e.to_string(),
        };
        Ok(Frac {
            num: self.num.mul(&other.num).map_err(op)?,
            den: self.den.mul(&other.den).map_err(op)?,
        })
    }

    fn pow(&self, k: i64) -> Result<Frac, ParseError> {
        let op = |e: residua::laurent::LaurentError| ParseError {
            position: 0,
            message: e.to_string(),
        };
        if k >= 0 {
            Ok(Frac {
                num: self.num.pow(k).map_err(op)?,
                den: self.den.pow(k).map_err(op)?,
            })
        } else {
            if self.num.is_zero() {
                return Err(ParseError {
                    position: 0,
                    message: "division by zero".into(),
                });
            }
            Ok(Frac {
                num: self.den.pow(-k).map_err(op)?,
                den: self.num.pow(-k).map_err(op)?,
            })
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The fraction as a Laurent polynomial; the denominator must be a
    /// single monomial (finite expressions only, no implicit series).
    pub fn to_laurent(&self) -> Result<LaurentPoly, ParseError> {
        if self.den.num_terms() != 1 {
            return Err(ParseError {
                position: 0,
                message:
                    "denominator is not a monomial; only finite Laurent expressions are accepted here"
                        .into(),
            });
        }
        let inv = self.den.pow(-1).map_err(|e| ParseError {
            position: 0,
            message: e.to_string(),
        })?;
        self.num.mul(&inv).map_err(|e| ParseError {
            position: 0,
            message: e.to_string(),
        })
    }
}

/// A differential form with fraction coefficients, keyed by strictly
/// increasing wedge index sets.
#[derive(Debug, Clone)]
pub struct FormValue {
    pub degree: usize,
    pub terms: Vec<(Vec<usize>, Frac)>,
}

/// Evaluation result: scalar or form.
#[derive(Debug, Clone)]
pub enum Value {
    Scalar(Frac),
    Form(FormValue),
}

fn merge_wedge(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut merged: Vec<usize> = a.to_vec();
    merged.extend_from_slice(b);
    let mut sorted = merged.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    let mut inversions = 0usize;
    for i in 0..merged.len() {
        for j in i + 1..merged.len() {
            if merged[i] > merged[j] {
                inversions += 1;
            }
        }
    }
    Some((sorted, if inversions.is_multiple_of(2) { 1 } else { -1 }))
}

fn form_add(a: &FormValue, b: &FormValue) -> Result<FormValue, ParseError> {
    if a.degree != b.degree {
        return Err(ParseError {
            position: 0,
            message: "cannot add forms of different degrees".into(),
        });
    }
    let mut terms = a.terms.clone();
    for (w, c) in &b.terms {
        match terms.iter_mut().find(|(tw, _)| tw == w) {
            Some((_, tc)) => *tc = tc.add(c)?,
            None => terms.push((w.clone(), c.clone())),
        }
    }
    terms.retain(|(_, c)| !c.is_zero());
    terms.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(FormValue {
        degree: a.degree,
        terms,
    })
}

fn form_scale(a: &FormValue, c: &Frac) -> Result<FormValue, ParseError> {
    let mut terms = Vec::with_capacity(a.terms.len());
    for (w, coeff) in &a.terms {
        let scaled = coeff.mul(c)?;
        if !scaled.is_zero() {
            terms.push((w.clone(), scaled));
        }
    }
    Ok(FormValue {
        degree: a.degree,
        terms,
    })
}

fn form_wedge(a: &FormValue, b: &FormValue) -> Result<FormValue, ParseError> {
    let mut terms: Vec<(Vec<usize>, Frac)> = Vec::new();
    for (wa, ca) in &a.terms {
        for (wb, cb) in &b.terms {
            if let Some((w, sign)) = merge_wedge(wa, wb) {
                let mut c = ca.mul(cb)?;
                if sign < 0 {
                    c = c.neg();
                }
                match terms.iter_mut().find(|(tw, _)| tw == &w) {
                    Some((_, tc)) => *tc = tc.add(&c)?,
                    None => terms.push((w, c)),
                }
            }
        }
    }
    terms.retain(|(_, c)| !c.is_zero());
    terms.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(FormValue {
        degree: a.degree + b.degree,
        terms,
    })
}

/// Evaluate a parse tree against a declared variable order.
pub fn eval(expr: &Expr, order: &Arc<VarOrder>) -> Result<Value, ParseError> {
    let fail = |m: String| ParseError {
        position: 0,
        message: m,
    };
    match expr {
        Expr::Rational(r) => Ok(Value::Scalar(Frac::scalar(order.clone(), r.clone()))),
        Expr::Var(name) => {
            let poly = LaurentPoly::var(order.clone(), name)
                .map_err(|_| fail(format!("unknown variable `{name}`")))?;
            Ok(Value::Scalar(Frac {
                num: poly,
                den: LaurentPoly::one(order.clone()),
            }))
        }
        Expr::Add(a, b) => match (eval(a, order)?, eval(b, order)?) {
            (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(x.add(&y)?)),
            (Value::Form(x), Value::Form(y)) => Ok(Value::Form(form_add(&x, &y)?)),
            _ => Err(fail("cannot add a scalar and a form".into())),
        },
        Expr::Sub(a, b) => match (eval(a, order)?, eval(b, order)?) {
            (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(x.add(&y.neg())?)),
            (Value::Form(x), Value::Form(y)) => {
                let neg = form_scale(&y, &Frac::scalar(order.clone(), -Rat::from_integer(1.into())))?;
                Ok(Value::Form(form_add(&x, &neg)?))
            }
            _ => Err(fail("cannot subtract a scalar and a form".into())),
        },
        Expr::Neg(a) => match eval(a, order)? {
            Value::Scalar(x) => Ok(Value::Scalar(x.neg())),
            Value::Form(x) => Ok(Value::Form(form_scale(
                &x,
                &Frac::scalar(order.clone(), -Rat::from_integer(1.into())),
            )?)),
        },
        Expr::Mul(a, b) => match (eval(a, order)?, eval(b, order)?) {
            (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(x.mul(&y)?)),
            (Value::Scalar(x), Value::Form(y)) | (Value::Form(y), Value::Scalar(x)) => {
                Ok(Value::Form(form_scale(&y, &x)?))
            }
            _ => Err(fail("use /\\ to multiply forms".into())),
        },
        Expr::Pow(base, k) => match eval(base, order)? {
            Value::Scalar(x) => Ok(Value::Scalar(x.pow(*k)?)),
            Value::Form(_) => Err(fail("forms cannot be raised to powers".into())),
        },
        Expr::Diff(a) => match eval(a, order)? {
            Value::Scalar(x) => {
                // d(n/q) = (n' q - n q') / q² per variable.
                let mut terms = Vec::new();
                for (v, name) in order.names().iter().enumerate() {
                    let dn = x.num.derivative(name).map_err(|e| fail(e.to_string()))?;
                    let dq = x.den.derivative(name).map_err(|e| fail(e.to_string()))?;
                    let num = dn
                        .mul(&x.den)
                        .map_err(|e| fail(e.to_string()))?
                        .sub(&x.num.mul(&dq).map_err(|e| fail(e.to_string()))?)
                        .map_err(|e| fail(e.to_string()))?;
                    if num.is_zero() {
                        continue;
                    }
                    let den = x.den.mul(&x.den).map_err(|e| fail(e.to_string()))?;
                    terms.push((vec![v], Frac { num, den }));
                }
                Ok(Value::Form(FormValue { degree: 1, terms }))
            }
            Value::Form(_) => Err(fail("d(...) applies to ring elements only".into())),
        },
        Expr::Wedge(a, b) => match (eval(a, order)?, eval(b, order)?) {
            (Value::Form(x), Value::Form(y)) => Ok(Value::Form(form_wedge(&x, &y)?)),
            _ => Err(fail("/\\ joins two forms".into())),
        },
    }
}
