//! Expression parsing for rational functions, tropical expressions, and
//! piecewise-linear recurrences.
//!
//! Grammar (for rational functions):
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' int)?
//! base   := var | int | '(' expr ')' | '-' base
//! ```
//!
//! Implicit multiplication is rejected. Exponents may be negative.
//! The tropical and piecewise-linear dialects reuse the grammar
//! restricted to `{max, min, +, -, integer*var}`; there (and only
//! there) a juxtaposed integer-variable token like `2b` is accepted,
//! matching the conventional way such maps are written.
//!
//! Division walks the divisor syntactically, so `p/(f^2*g)` seeds the
//! denominator basis with the factors `f` and `g` rather than their
//! expanded product.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::poly::{Poly, Vars};
use crate::ratfn::RationalFn;
use crate::recurrence::{PlExpr, PlRecurrence};
use crate::tropical::{AffineForm, TropComponent, TropExpr, TropMap};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            ',' => {
                out.push((Tok::Comma, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v: BigInt = src[start..i].parse().expect("digits");
                out.push((Tok::Int(v), start));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
            }
            other => {
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

/// Raw syntax tree shared by the three dialects.
#[derive(Debug, Clone, PartialEq)]
pub enum Ast {
    Int(BigInt),
    Var(String),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i64),
    Call(String, Vec<Ast>),
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    end: usize,
    /// Allow `max(...)` / `min(...)` calls (tropical/PL dialects).
    calls: bool,
    /// Allow `2b` as integer-times-variable (tropical/PL dialects).
    juxtaposition: bool,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|&(_, p)| p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<()> {
        let pos = self.here();
        match self.bump() {
            Some(ref t) if t == want => Ok(()),
            _ => Err(Error::Parse {
                pos,
                msg: format!("expected {what}"),
            }),
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = Ast::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = Ast::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = Ast::Mul(Box::new(acc), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    acc = Ast::Div(Box::new(acc), Box::new(self.factor()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Ast> {
        let base = self.base()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let pos = self.here();
            let neg = if matches!(self.peek(), Some(Tok::Minus)) {
                self.bump();
                true
            } else {
                false
            };
            match self.bump() {
                Some(Tok::Int(v)) => {
                    let mut e = v.to_i64().ok_or_else(|| Error::Parse {
                        pos,
                        msg: "exponent too large".into(),
                    })?;
                    if neg {
                        e = -e;
                    }
                    return Ok(Ast::Pow(Box::new(base), e));
                }
                _ => {
                    return Err(Error::Parse {
                        pos,
                        msg: "expected integer exponent after `^`".into(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Ast> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Int(v)) => {
                // The `2b` shorthand is only legal in the restricted
                // dialects; the rational grammar demands explicit `*`.
                if let Some(Tok::Ident(_)) = self.peek() {
                    if self.juxtaposition {
                        let var = self.base()?;
                        return Ok(Ast::Mul(Box::new(Ast::Int(v)), Box::new(var)));
                    }
                    return Err(Error::Parse {
                        pos: self.here(),
                        msg: "implicit multiplication is not supported; write `*`".into(),
                    });
                }
                Ok(Ast::Int(v))
            }
            Some(Tok::Ident(name)) => {
                if matches!(self.peek(), Some(Tok::LParen)) {
                    if !self.calls || (name != "max" && name != "min") {
                        return Err(Error::Parse {
                            pos,
                            msg: format!("unknown function `{name}`"),
                        });
                    }
                    self.bump();
                    let mut args = vec![self.expr()?];
                    while matches!(self.peek(), Some(Tok::Comma)) {
                        self.bump();
                        args.push(self.expr()?);
                    }
                    self.expect(&Tok::RParen, "`)` to close the call")?;
                    return Ok(Ast::Call(name, args));
                }
                Ok(Ast::Var(name))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::Minus) => Ok(Ast::Neg(Box::new(self.base()?))),
            _ => Err(Error::Parse {
                pos,
                msg: "expected a variable, integer, `(` or `-`".into(),
            }),
        }
    }
}

fn parse_ast(src: &str, calls: bool, juxtaposition: bool) -> Result<Ast> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: src.len(),
        calls,
        juxtaposition,
    };
    let ast = p.expr()?;
    if p.pos != toks.len() {
        return Err(Error::Parse {
            pos: p.here(),
            msg: "trailing input".into(),
        });
    }
    Ok(ast)
}

/// Parses a rational-function expression over the given variables into
/// canonical reduced form.
pub fn parse_rational(src: &str, vars: &Vars) -> Result<RationalFn> {
    let ast = parse_ast(src, false, false)?;
    lower_rational(&ast, vars)
}

fn lower_rational(ast: &Ast, vars: &Vars) -> Result<RationalFn> {
    match ast {
        Ast::Int(v) => Ok(RationalFn::constant(
            vars.clone(),
            BigRational::from_integer(v.clone()),
        )),
        Ast::Var(name) => {
            let idx = vars
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
            Ok(RationalFn::variable(vars.clone(), idx))
        }
        Ast::Neg(inner) => Ok(lower_rational(inner, vars)?.neg()),
        Ast::Add(a, b) => Ok(lower_rational(a, vars)?.add(&lower_rational(b, vars)?)),
        Ast::Sub(a, b) => Ok(lower_rational(a, vars)?.sub(&lower_rational(b, vars)?)),
        Ast::Mul(a, b) => Ok(lower_rational(a, vars)?.mul(&lower_rational(b, vars)?)),
        Ast::Div(a, b) => {
            let acc = lower_rational(a, vars)?;
            divide_syntactically(acc, b, vars)
        }
        Ast::Pow(base, k) => lower_rational(base, vars)?.pow(*k),
        Ast::Call(name, _) => Err(Error::Parse {
            pos: 0,
            msg: format!("`{name}` is not part of the rational-function grammar"),
        }),
    }
}

/// Divides `acc` by the divisor expression, walking products and powers
/// syntactically so each syntactic factor lands in the denominator basis
/// individually.
fn divide_syntactically(acc: RationalFn, divisor: &Ast, vars: &Vars) -> Result<RationalFn> {
    match divisor {
        Ast::Mul(a, b) => {
            let acc = divide_syntactically(acc, a, vars)?;
            divide_syntactically(acc, b, vars)
        }
        Ast::Neg(inner) => Ok(divide_syntactically(acc, inner, vars)?.neg()),
        Ast::Pow(base, k) if *k > 0 => {
            let mut acc = acc;
            for _ in 0..*k {
                acc = divide_syntactically(acc, base, vars)?;
            }
            Ok(acc)
        }
        Ast::Pow(base, k) => {
            // Negative or zero exponent in a divisor flips to multiply.
            let f = lower_rational(base, vars)?.pow(-*k)?;
            Ok(acc.mul(&f))
        }
        _ => {
            let f = lower_rational(divisor, vars)?;
            if f.is_zero() {
                return Err(Error::DivisionByZero);
            }
            if f.is_polynomial() {
                // Single syntactic factor: seed the denominator basis
                // with it directly.
                let div = RationalFn::new(
                    Poly::one(vars.clone()),
                    crate::poly::Expo::zero(vars.len()),
                    vec![(f.num().clone(), 1)],
                )?;
                Ok(acc.mul(&div))
            } else {
                acc.div(&f)
            }
        }
    }
}

/// Parses one tropical component such as `max(2b,2c)-a` over the given
/// variable names.
pub fn parse_tropical(src: &str, vars: &[String]) -> Result<TropComponent> {
    let ast = parse_ast(src, true, true)?;
    lower_tropical(&ast, vars)
}

/// Parses a whole tropical map (one expression per component).
pub fn parse_tropical_map(components: &[String], vars: &[String]) -> Result<TropMap> {
    if components.len() != vars.len() {
        return Err(Error::DimensionMismatch(
            "tropical map needs one component per variable".into(),
        ));
    }
    TropMap::new(
        components
            .iter()
            .map(|src| parse_tropical(src, vars))
            .collect::<Result<Vec<_>>>()?,
    )
}

fn lower_tropical(ast: &Ast, vars: &[String]) -> Result<TropComponent> {
    let dim = vars.len();
    let pure = |form: AffineForm| -> TropComponent { TropComponent::pure(TropExpr::single(form)) };
    match ast {
        Ast::Int(v) => {
            let mut f = AffineForm::zero(dim);
            f.constant = BigRational::from_integer(v.clone());
            Ok(pure(f))
        }
        Ast::Var(name) => {
            let idx = vars
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
            let mut f = AffineForm::zero(dim);
            f.coeffs[idx] = BigRational::one();
            Ok(pure(f))
        }
        Ast::Neg(inner) => {
            let c = lower_tropical(inner, vars)?;
            TropComponent::new(c.den().clone(), c.num().clone())
        }
        Ast::Add(a, b) => {
            let x = lower_tropical(a, vars)?;
            let y = lower_tropical(b, vars)?;
            TropComponent::new(
                x.num().product(y.num()),
                x.den().product(y.den()),
            )
        }
        Ast::Sub(a, b) => {
            let x = lower_tropical(a, vars)?;
            let y = lower_tropical(b, vars)?;
            TropComponent::new(
                x.num().product(y.den()),
                x.den().product(y.num()),
            )
        }
        Ast::Mul(a, b) => {
            // Only integer * term is linear.
            let (k, term) = split_integer_factor(a, b).ok_or_else(|| Error::Parse {
                pos: 0,
                msg: "tropical products need an integer factor".into(),
            })?;
            let c = lower_tropical(term, vars)?;
            let kk = BigRational::from_integer(k);
            if kk.is_negative() {
                let p = -kk;
                TropComponent::new(c.den().scale(&p), c.num().scale(&p))
            } else {
                TropComponent::new(c.num().scale(&kk), c.den().scale(&kk))
            }
        }
        Ast::Call(name, args) if name == "max" => {
            let parts = args
                .iter()
                .map(|a| lower_tropical(a, vars))
                .collect::<Result<Vec<_>>>()?;
            // Combine over a common denominator.
            let mut den = TropExpr::zero(dim);
            for p in &parts {
                den = den.product(p.den());
            }
            let mut num: Option<TropExpr> = None;
            for (i, p) in parts.iter().enumerate() {
                let mut lifted = p.num().clone();
                for (j, q) in parts.iter().enumerate() {
                    if i != j {
                        lifted = lifted.product(q.den());
                    }
                }
                num = Some(match num {
                    None => lifted,
                    Some(acc) => acc.max_with(&lifted),
                });
            }
            TropComponent::new(num.expect("max() has arguments"), den)
        }
        Ast::Call(name, _) => Err(Error::Parse {
            pos: 0,
            msg: format!("`{name}` is not part of the tropical grammar"),
        }),
        Ast::Div(..) | Ast::Pow(..) => Err(Error::Parse {
            pos: 0,
            msg: "`/` and `^` are not part of the tropical grammar".into(),
        }),
    }
}

/// Splits a product into (signed integer literal, other operand), seeing
/// through unary minus; `None` when neither side is an integer.
fn split_integer_factor<'a>(a: &'a Ast, b: &'a Ast) -> Option<(BigInt, &'a Ast)> {
    fn as_int(ast: &Ast) -> Option<BigInt> {
        match ast {
            Ast::Int(v) => Some(v.clone()),
            Ast::Neg(inner) => as_int(inner).map(|v| -v),
            _ => None,
        }
    }
    if let Some(k) = as_int(a) {
        return Some((k, b));
    }
    if let Some(k) = as_int(b) {
        return Some((k, a));
    }
    None
}

/// Parses a piecewise-linear recurrence body over lag variables
/// `a1..a<arity>` (`a1` = previous term).
pub fn parse_pl_recurrence(src: &str, arity: usize) -> Result<PlRecurrence> {
    let ast = parse_ast(src, true, true)?;
    let expr = lower_pl(&ast, arity)?;
    PlRecurrence::new(arity, expr)
}

fn lower_pl(ast: &Ast, arity: usize) -> Result<PlExpr> {
    match ast {
        Ast::Int(v) => Ok(PlExpr::Int(v.clone())),
        Ast::Var(name) => {
            let lag: usize = name
                .strip_prefix('a')
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
            if lag == 0 || lag > arity {
                return Err(Error::UnknownVariable(name.clone()));
            }
            Ok(PlExpr::Lag(lag))
        }
        Ast::Neg(inner) => Ok(PlExpr::Neg(Box::new(lower_pl(inner, arity)?))),
        Ast::Add(a, b) => Ok(PlExpr::Add(
            Box::new(lower_pl(a, arity)?),
            Box::new(lower_pl(b, arity)?),
        )),
        Ast::Sub(a, b) => Ok(PlExpr::Sub(
            Box::new(lower_pl(a, arity)?),
            Box::new(lower_pl(b, arity)?),
        )),
        Ast::Mul(a, b) => {
            let (k, term) = split_integer_factor(a, b).ok_or_else(|| Error::Parse {
                pos: 0,
                msg: "piecewise-linear products need an integer factor".into(),
            })?;
            Ok(PlExpr::Scale(k, Box::new(lower_pl(term, arity)?)))
        }
        Ast::Call(name, args) => {
            let parts = args
                .iter()
                .map(|a| lower_pl(a, arity))
                .collect::<Result<Vec<_>>>()?;
            match name.as_str() {
                "max" => Ok(PlExpr::Max(parts)),
                "min" => Ok(PlExpr::Min(parts)),
                _ => Err(Error::Parse {
                    pos: 0,
                    msg: format!("`{name}` is not part of the recurrence grammar"),
                }),
            }
        }
        Ast::Div(..) | Ast::Pow(..) => Err(Error::Parse {
            pos: 0,
            msg: "`/` and `^` are not part of the recurrence grammar".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigutil::{rat_int, big};
    use crate::poly::vars_of;
    use crate::recurrence::pl_iterate;

    fn xy() -> Vars {
        vars_of(&["x", "y"])
    }

    #[test]
    fn parse_single_variable() {
        let f = parse_rational("x", &xy()).unwrap();
        assert_eq!(f, RationalFn::variable(xy(), 0));
    }

    #[test]
    fn parse_laurent_fraction() {
        let f = parse_rational("(y^2+1)/x", &xy()).unwrap();
        assert!(f.is_laurent());
        assert_eq!(f.mono_den().0, vec![1, 0]);
        assert_eq!(f.num().to_string(), "y^2+1");
    }

    #[test]
    fn parse_polynomial_component() {
        let f = parse_rational("x^2-y", &xy()).unwrap();
        assert!(f.is_polynomial());
        assert_eq!(f.num().to_string(), "x^2-y");
    }

    #[test]
    fn syntactic_denominator_factors_survive() {
        let vars = vars_of(&["w", "x", "y", "z"]);
        let f = parse_rational("z*(w*z-x*y)/(w*y-x^2)", &vars).unwrap();
        assert_eq!(f.den_factors().len(), 1);
        assert_eq!(f.den_factors()[0].0.to_string(), "w*y-x^2");
        // A power of a parenthesized product splits into its factors.
        let g = parse_rational("1/((w*y-x^2)^2*(w*z-x*y))", &vars).unwrap();
        assert_eq!(g.den_factors().len(), 2);
        assert_eq!(g.den_factors()[0].1 + g.den_factors()[1].1, 3);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_rational("x + ", &xy()) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_rational("x + q", &xy()) {
            Err(Error::UnknownVariable(v)) => assert_eq!(v, "q"),
            other => panic!("expected unknown variable, got {other:?}"),
        }
        assert!(matches!(
            parse_rational("1/(x-x)", &xy()),
            Err(Error::DivisionByZero)
        ));
        // Implicit multiplication is rejected in the rational grammar.
        assert!(parse_rational("2x", &xy()).is_err());
    }

    #[test]
    fn negative_exponents_become_denominators() {
        let f = parse_rational("x^-2", &xy()).unwrap();
        assert!(f.is_laurent());
        assert_eq!(f.mono_den().0, vec![2, 0]);
    }

    #[test]
    fn print_parse_round_trip() {
        let sources = [
            "x",
            "(y^2+1)/x",
            "x^2-y",
            "(x+y)/(x^2-y)",
            "(y^6+3*y^4+3*y^2+2*x^2*y^2+x^4+2*x^2+1)/x^3/y^2",
        ];
        for src in sources {
            let f = parse_rational(src, &xy()).unwrap();
            let printed = f.to_string();
            let g = parse_rational(&printed, &xy()).unwrap();
            assert_eq!(f, g, "round trip through `{printed}`");
        }
    }

    #[test]
    fn random_expression_round_trip() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        let vars = xy();
        for _ in 0..200 {
            let f = random_fn(&mut rng, &vars, 3);
            let printed = f.to_string();
            let g = parse_rational(&printed, &vars).unwrap();
            assert_eq!(f, g, "round trip through `{printed}`");
        }
    }

    fn random_fn(rng: &mut rand_chacha::ChaCha8Rng, vars: &Vars, depth: usize) -> RationalFn {
        use rand::Rng;
        if depth == 0 {
            return match rng.gen_range(0..3) {
                0 => RationalFn::variable(vars.clone(), rng.gen_range(0..vars.len())),
                1 => RationalFn::constant(vars.clone(), rat_int(rng.gen_range(-9i64..=9))),
                _ => RationalFn::variable(vars.clone(), rng.gen_range(0..vars.len())),
            };
        }
        let a = random_fn(rng, vars, depth - 1);
        let b = random_fn(rng, vars, depth - 1);
        match rng.gen_range(0..5) {
            0 => a.add(&b),
            1 => a.sub(&b),
            2 => a.mul(&b),
            3 => match a.div(&b) {
                Ok(q) => q,
                Err(_) => a,
            },
            _ => a.pow(rng.gen_range(-2i64..=3)).unwrap_or(a),
        }
    }

    #[test]
    fn tropical_parse_examples() {
        let vars = vec!["a".to_string(), "b".to_string()];
        let c = parse_tropical("max(2b,0)-a", &vars).unwrap();
        assert!(c.is_pure());
        let forms = c.num().forms();
        assert_eq!(forms.len(), 2);
        assert_eq!(c.to_string(), "max(-a, -a+2*b)");

        let p = [rat_int(3), rat_int(5)];
        assert_eq!(c.eval(&p), rat_int(7)); // max(10, 0) - 3

        // Whole map.
        let m = parse_tropical_map(
            &["b".to_string(), "max(2b,0)-a".to_string()],
            &vars,
        )
        .unwrap();
        assert_eq!(m.dim(), 2);
    }

    #[test]
    fn tropical_rejects_nonlinear() {
        let vars = vec!["a".to_string(), "b".to_string()];
        assert!(parse_tropical("a*b", &vars).is_err());
        assert!(parse_tropical("a/b", &vars).is_err());
        assert!(parse_tropical("a^2", &vars).is_err());
    }

    #[test]
    fn pl_parse_and_iterate() {
        let rec = parse_pl_recurrence("max(a1,a2)-2*a3", 3).unwrap();
        let seq = pl_iterate(&rec, &[big(1), big(1), big(-1)], 8).unwrap();
        assert_eq!(seq[7], big(9));
        // Juxtaposed integer-lag products parse in the PL dialect too.
        let rec2 = parse_pl_recurrence("max(2a1,2a2)-a3", 3).unwrap();
        let seq2 = pl_iterate(&rec2, &[big(-1), big(0), big(0)], 9).unwrap();
        assert_eq!(seq2[8], big(20));
        assert!(parse_pl_recurrence("max(a1,a4)", 3).is_err());
        assert!(parse_pl_recurrence("a1*a2", 3).is_err());
    }
}
