//! Tiny arithmetic expression grammar for fixture objectives:
//! `+ − * ^` over coordinates `x0, x1, …` and `p0, p1, …` with float
//! literals and parentheses. Exponents are nonnegative integers.
//! Derivatives are symbolic, so every objective carries an exact
//! gradient oracle.

use std::fmt;

use crate::error::{Result, VarRegError};
use crate::{Scalar, Vector};

/// Coordinate reference inside an expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarRef {
    X(usize),
    P(usize),
}

/// Expression tree with `f64` literals; evaluation is generic.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(VarRef),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Var(VarRef),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' | '−' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' | '×' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '^' => {
                tokens.push(Token::Caret);
                i += 1;
            }
            '(' => {
                tokens.push(Token::LParen);
                i += 1;
            }
            ')' => {
                tokens.push(Token::RParen);
                i += 1;
            }
            'x' | 'p' => {
                let start = i;
                i += 1;
                let mut digits = String::new();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    digits.push(chars[i]);
                    i += 1;
                }
                if digits.is_empty() {
                    return Err(VarRegError::Expr(format!(
                        "variable at position {start} needs an index (x0, p1, ...)"
                    )));
                }
                let idx: usize = digits
                    .parse()
                    .map_err(|_| VarRegError::Expr("bad variable index".into()))?;
                tokens.push(Token::Var(if c == 'x' {
                    VarRef::X(idx)
                } else {
                    VarRef::P(idx)
                }));
            }
            d if d.is_ascii_digit() || d == '.' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_digit()
                        || chars[i] == '.'
                        || chars[i] == 'e'
                        || chars[i] == 'E'
                        || ((chars[i] == '+' || chars[i] == '-')
                            && i > start
                            && (chars[i - 1] == 'e' || chars[i - 1] == 'E')))
                {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                let value: f64 = lit
                    .parse()
                    .map_err(|_| VarRegError::Expr(format!("bad number literal '{lit}'")))?;
                tokens.push(Token::Num(value));
            }
            other => {
                return Err(VarRegError::Expr(format!(
                    "unexpected character '{other}' at position {i}"
                )));
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.next();
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Token::Minus) => {
                    self.next();
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // term := factor ('*' factor)*
    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while matches!(self.peek(), Some(Token::Star)) {
            self.next();
            let rhs = self.factor()?;
            lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    // factor := '-' factor | power
    fn factor(&mut self) -> Result<Expr> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.next();
            let inner = self.factor()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    // power := atom ('^' integer)?
    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.next();
            match self.next() {
                Some(Token::Num(n)) if n >= 0.0 && n.fract() == 0.0 => {
                    Ok(Expr::Pow(Box::new(base), n as u32))
                }
                other => Err(VarRegError::Expr(format!(
                    "exponent must be a nonnegative integer, got {other:?}"
                ))),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.next() {
            Some(Token::Num(v)) => Ok(Expr::Const(v)),
            Some(Token::Var(v)) => Ok(Expr::Var(v)),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(VarRegError::Expr("missing closing parenthesis".into())),
                }
            }
            other => Err(VarRegError::Expr(format!(
                "expected number, variable or parenthesis, got {other:?}"
            ))),
        }
    }
}

impl Expr {
    /// Parse expression text.
    pub fn parse(text: &str) -> Result<Expr> {
        let tokens = tokenize(text)?;
        if tokens.is_empty() {
            return Err(VarRegError::Expr("empty expression".into()));
        }
        let mut parser = Parser { tokens, pos: 0 };
        let e = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(VarRegError::Expr(format!(
                "trailing tokens starting at {}",
                parser.pos
            )));
        }
        Ok(e.simplified())
    }

    /// Evaluate at `(x, p)`.
    pub fn eval<T: Scalar>(&self, x: &Vector<T>, p: &Vector<T>) -> T {
        match self {
            Expr::Const(c) => T::of(*c),
            Expr::Var(VarRef::X(i)) => x[*i],
            Expr::Var(VarRef::P(i)) => p[*i],
            Expr::Add(a, b) => a.eval(x, p) + b.eval(x, p),
            Expr::Sub(a, b) => a.eval(x, p) - b.eval(x, p),
            Expr::Mul(a, b) => a.eval(x, p) * b.eval(x, p),
            Expr::Neg(a) => -a.eval(x, p),
            Expr::Pow(a, n) => a.eval(x, p).powi(*n as i32),
        }
    }

    /// Largest variable index used, per family: `(max_x + 1, max_p + 1)`.
    pub fn arity(&self) -> (usize, usize) {
        match self {
            Expr::Const(_) => (0, 0),
            Expr::Var(VarRef::X(i)) => (i + 1, 0),
            Expr::Var(VarRef::P(i)) => (0, i + 1),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                let (ax, ap) = a.arity();
                let (bx, bp) = b.arity();
                (ax.max(bx), ap.max(bp))
            }
            Expr::Neg(a) => a.arity(),
            Expr::Pow(a, _) => a.arity(),
        }
    }

    /// Symbolic partial derivative.
    pub fn diff(&self, var: VarRef) -> Expr {
        match self {
            Expr::Const(_) => Expr::Const(0.0),
            Expr::Var(v) => Expr::Const(if *v == var { 1.0 } else { 0.0 }),
            Expr::Add(a, b) => Expr::Add(Box::new(a.diff(var)), Box::new(b.diff(var))),
            Expr::Sub(a, b) => Expr::Sub(Box::new(a.diff(var)), Box::new(b.diff(var))),
            Expr::Mul(a, b) => Expr::Add(
                Box::new(Expr::Mul(Box::new(a.diff(var)), b.clone())),
                Box::new(Expr::Mul(a.clone(), Box::new(b.diff(var)))),
            ),
            Expr::Neg(a) => Expr::Neg(Box::new(a.diff(var))),
            Expr::Pow(a, n) => {
                if *n == 0 {
                    Expr::Const(0.0)
                } else {
                    // n * a^(n-1) * a'
                    Expr::Mul(
                        Box::new(Expr::Mul(
                            Box::new(Expr::Const(*n as f64)),
                            Box::new(Expr::Pow(a.clone(), n - 1)),
                        )),
                        Box::new(a.diff(var)),
                    )
                }
            }
        }
        .simplified()
    }

    /// Constant folding and unit/zero elimination.
    pub fn simplified(&self) -> Expr {
        match self {
            Expr::Add(a, b) => match (a.simplified(), b.simplified()) {
                (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
                (Expr::Const(z), e) | (e, Expr::Const(z)) if z == 0.0 => e,
                (a, b) => Expr::Add(Box::new(a), Box::new(b)),
            },
            Expr::Sub(a, b) => match (a.simplified(), b.simplified()) {
                (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
                (e, Expr::Const(z)) if z == 0.0 => e,
                (Expr::Const(z), e) if z == 0.0 => Expr::Neg(Box::new(e)).simplified(),
                (a, b) => Expr::Sub(Box::new(a), Box::new(b)),
            },
            Expr::Mul(a, b) => match (a.simplified(), b.simplified()) {
                (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
                (Expr::Const(z), _) | (_, Expr::Const(z)) if z == 0.0 => Expr::Const(0.0),
                (Expr::Const(o), e) | (e, Expr::Const(o)) if o == 1.0 => e,
                (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
            },
            Expr::Neg(a) => match a.simplified() {
                Expr::Const(x) => Expr::Const(-x),
                Expr::Neg(inner) => *inner,
                e => Expr::Neg(Box::new(e)),
            },
            Expr::Pow(a, n) => match (a.simplified(), n) {
                (e, 1) => e,
                (_, 0) => Expr::Const(1.0),
                (Expr::Const(x), n) => Expr::Const(x.powi(*n as i32)),
                (e, n) => Expr::Pow(Box::new(e), *n),
            },
            other => other.clone(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(VarRef::X(i)) => write!(f, "x{i}"),
            Expr::Var(VarRef::P(i)) => write!(f, "p{i}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Pow(a, n) => write!(f, "({a})^{n}"),
        }
    }
}

/// Scalar function of `(x, p)` with a symbolic gradient.
#[derive(Debug, Clone)]
pub struct ScalarExpr {
    expr: Expr,
    grad_x: Vec<Expr>,
    grad_p: Vec<Expr>,
}

impl ScalarExpr {
    pub fn new(expr: Expr, dim_x: usize, dim_p: usize) -> Result<Self> {
        let (ax, ap) = expr.arity();
        if ax > dim_x || ap > dim_p {
            return Err(VarRegError::Expr(format!(
                "expression uses x{}/p{} beyond declared dimensions ({dim_x}, {dim_p})",
                ax.saturating_sub(1),
                ap.saturating_sub(1)
            )));
        }
        let grad_x = (0..dim_x).map(|i| expr.diff(VarRef::X(i))).collect();
        let grad_p = (0..dim_p).map(|i| expr.diff(VarRef::P(i))).collect();
        Ok(ScalarExpr {
            expr,
            grad_x,
            grad_p,
        })
    }

    pub fn parse(text: &str, dim_x: usize, dim_p: usize) -> Result<Self> {
        Self::new(Expr::parse(text)?, dim_x, dim_p)
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn value<T: Scalar>(&self, x: &Vector<T>, p: &Vector<T>) -> T {
        self.expr.eval(x, p)
    }

    pub fn grad_x<T: Scalar>(&self, x: &Vector<T>, p: &Vector<T>) -> Vector<T> {
        Vector::from_iterator(self.grad_x.len(), self.grad_x.iter().map(|g| g.eval(x, p)))
    }

    pub fn grad_p<T: Scalar>(&self, x: &Vector<T>, p: &Vector<T>) -> Vector<T> {
        Vector::from_iterator(self.grad_p.len(), self.grad_p.iter().map(|g| g.eval(x, p)))
    }
}

/// Vector-valued function of `(x, p)` with symbolic Jacobians.
#[derive(Debug, Clone)]
pub struct VectorExpr {
    components: Vec<ScalarExpr>,
}

impl VectorExpr {
    pub fn new(components: Vec<ScalarExpr>) -> Result<Self> {
        if components.is_empty() {
            return Err(VarRegError::Expr("vector expression needs components".into()));
        }
        Ok(VectorExpr { components })
    }

    pub fn parse(texts: &[String], dim_x: usize, dim_p: usize) -> Result<Self> {
        let components = texts
            .iter()
            .map(|t| ScalarExpr::parse(t, dim_x, dim_p))
            .collect::<Result<Vec<_>>>()?;
        Self::new(components)
    }

    pub fn dim_out(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[ScalarExpr] {
        &self.components
    }

    pub fn value<T: Scalar>(&self, x: &Vector<T>, p: &Vector<T>) -> Vector<T> {
        Vector::from_iterator(
            self.components.len(),
            self.components.iter().map(|c| c.value(x, p)),
        )
    }

    /// Jacobian with respect to `x`: rows are component gradients.
    pub fn jac_x<T: Scalar>(&self, x: &Vector<T>, p: &Vector<T>) -> crate::Matrix<T> {
        let rows = self.components.len();
        let cols = x.len();
        crate::Matrix::from_fn(rows, cols, |i, j| {
            self.components[i].grad_x(x, p)[j]
        })
    }

    pub fn jac_p<T: Scalar>(&self, x: &Vector<T>, p: &Vector<T>) -> crate::Matrix<T> {
        let rows = self.components.len();
        let cols = p.len();
        crate::Matrix::from_fn(rows, cols, |i, j| {
            self.components[i].grad_p(x, p)[j]
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(vals: Vec<f64>) -> Vector<f64> {
        Vector::from_vec(vals)
    }

    #[test]
    fn parses_and_evaluates() {
        let e = Expr::parse("x0^2 + p0^2").unwrap();
        assert_relative_eq!(e.eval(&v(vec![2.0]), &v(vec![3.0])), 13.0);
        let e2 = Expr::parse("(x0 - 1)^2").unwrap();
        assert_relative_eq!(e2.eval(&v(vec![3.0]), &v(vec![])), 4.0);
        let e3 = Expr::parse("1 - x0 - p0").unwrap();
        assert_relative_eq!(e3.eval(&v(vec![0.25]), &v(vec![0.5])), 0.25);
        let e4 = Expr::parse("-x0 * 2 + 3 * p0").unwrap();
        assert_relative_eq!(e4.eval(&v(vec![1.0]), &v(vec![1.0])), 1.0);
    }

    #[test]
    fn symbolic_derivatives_match_finite_differences() {
        let texts = ["x0^2 + p0^2", "(x0 - 1)^2 * p0", "x0 * x1 - 2 * x1^3"];
        for text in texts {
            let f = ScalarExpr::parse(text, 2, 1).unwrap();
            let x = v(vec![0.7, -1.3]);
            let p = v(vec![0.4]);
            let gx = f.grad_x(&x, &p);
            let gp = f.grad_p(&x, &p);
            let h = 1e-6;
            for i in 0..2 {
                let mut xp = x.clone();
                xp[i] += h;
                let mut xm = x.clone();
                xm[i] -= h;
                let fd = (f.value(&xp, &p) - f.value(&xm, &p)) / (2.0 * h);
                assert_relative_eq!(gx[i], fd, epsilon = 1e-6);
            }
            let mut pp = p.clone();
            pp[0] += h;
            let mut pm = p.clone();
            pm[0] -= h;
            let fd = (f.value(&x, &pp) - f.value(&x, &pm)) / (2.0 * h);
            assert_relative_eq!(gp[0], fd, epsilon = 1e-6);
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(Expr::parse("x").is_err());
        assert!(Expr::parse("x0 +").is_err());
        assert!(Expr::parse("(x0").is_err());
        assert!(Expr::parse("x0 ^ p0").is_err());
        assert!(Expr::parse("x0 ^ 1.5").is_err());
        assert!(Expr::parse("x0 / 2").is_err());
        assert!(Expr::parse("").is_err());
    }

    #[test]
    fn arity_bounds_are_enforced() {
        assert!(ScalarExpr::parse("x2", 2, 0).is_err());
        assert!(ScalarExpr::parse("x1 + p0", 2, 1).is_ok());
    }

    #[test]
    fn vector_expr_jacobian() {
        let g = VectorExpr::parse(
            &["x0^2".to_string(), "(x0 - 1)^2".to_string()],
            1,
            1,
        )
        .unwrap();
        let x = v(vec![2.0]);
        let p = v(vec![1.0]);
        let j = g.jac_x(&x, &p);
        assert_relative_eq!(j[(0, 0)], 4.0);
        assert_relative_eq!(j[(1, 0)], 2.0);
        let val = g.value(&x, &p);
        assert_relative_eq!(val[0], 4.0);
        assert_relative_eq!(val[1], 1.0);
    }
}
