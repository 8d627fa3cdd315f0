//! Parser for the map-definition language and for standalone expressions.
//!
//! Grammar (whitespace-insensitive, `#` starts a comment line):
//!
//! ```text
//! vars <id>(,<id>)*; [params <id>(,<id>)*;] f = (<expr>(, <expr>)*)
//! ```
//!
//! Expressions are arithmetic over identifiers and integer literals with
//! `+ - * / ^` and parentheses; exponents are integer (negative allowed).


use crate::error::MapError;
use crate::multipoly::VarSet;
use crate::ratfunc::RatFunc;
use crate::scalar::{Int, Rat};

use super::RationalMap;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(Int),
    Punct(char),
}

#[derive(Clone, Debug)]
struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>, MapError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let mut chars = line.char_indices().peekable();
        while let Some(&(col, c)) = chars.peek() {
            if c == '#' {
                break; // comment to end of line
            }
            if c.is_whitespace() {
                chars.next();
                continue;
            }
            let line_n = lineno + 1;
            let col_n = col + 1;
            if c.is_ascii_alphabetic() || c == '_' {
                let mut s = String::new();
                while let Some(&(_, c2)) = chars.peek() {
                    if c2.is_ascii_alphanumeric() || c2 == '_' {
                        s.push(c2);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Lexed {
                    tok: Tok::Ident(s),
                    line: line_n,
                    col: col_n,
                });
            } else if c.is_ascii_digit() {
                let mut s = String::new();
                while let Some(&(_, c2)) = chars.peek() {
                    if c2.is_ascii_digit() {
                        s.push(c2);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Lexed {
                    tok: Tok::Int(s.parse::<Int>().unwrap()),
                    line: line_n,
                    col: col_n,
                });
            } else if "+-*/^(),;=".contains(c) {
                chars.next();
                out.push(Lexed {
                    tok: Tok::Punct(c),
                    line: line_n,
                    col: col_n,
                });
            } else {
                return Err(MapError::Parse {
                    line: line_n,
                    col: col_n,
                    msg: format!("unexpected character `{c}`"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Lexed>,
    pos: usize,
    vars: &'a VarSet,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Lexed> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Lexed> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, msg: &str) -> MapError {
        match self.toks.get(self.pos).or_else(|| self.toks.last()) {
            Some(t) => MapError::Parse {
                line: t.line,
                col: t.col,
                msg: msg.to_string(),
            },
            None => MapError::Parse {
                line: 1,
                col: 1,
                msg: msg.to_string(),
            },
        }
    }

    fn expect_punct(&mut self, c: char) -> Result<(), MapError> {
        match self.next() {
            Some(Lexed { tok: Tok::Punct(p), .. }) if p == c => Ok(()),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err_here(&format!("expected `{c}`")))
            }
        }
    }

    fn at_punct(&self, c: char) -> bool {
        matches!(self.peek(), Some(Lexed { tok: Tok::Punct(p), .. }) if *p == c)
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<RatFunc, MapError> {
        let mut acc = self.term()?;
        loop {
            if self.at_punct('+') {
                self.next();
                acc = acc.add(&self.term()?);
            } else if self.at_punct('-') {
                self.next();
                acc = acc.sub(&self.term()?);
            } else {
                break;
            }
        }
        Ok(acc)
    }

    // term := unary (('*'|'/') unary)*
    fn term(&mut self) -> Result<RatFunc, MapError> {
        let mut acc = self.unary()?;
        loop {
            if self.at_punct('*') {
                self.next();
                acc = acc.mul(&self.unary()?);
            } else if self.at_punct('/') {
                self.next();
                let rhs = self.unary()?;
                acc = acc
                    .div(&rhs)
                    .map_err(|_| self.err_here("division by an identically zero expression"))?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    // unary := '-' unary | power
    fn unary(&mut self) -> Result<RatFunc, MapError> {
        if self.at_punct('-') {
            self.next();
            return Ok(self.unary()?.neg());
        }
        if self.at_punct('+') {
            self.next();
            return self.unary();
        }
        self.power()
    }

    // power := atom ['^' ['-'] int]
    fn power(&mut self) -> Result<RatFunc, MapError> {
        let base = self.atom()?;
        if self.at_punct('^') {
            self.next();
            let mut neg = false;
            if self.at_punct('-') {
                self.next();
                neg = true;
            }
            let e = match self.next() {
                Some(Lexed { tok: Tok::Int(n), .. }) => n,
                _ => {
                    self.pos = self.pos.saturating_sub(1);
                    return Err(self.err_here("expected integer exponent"));
                }
            };
            let e: i64 = e
                .try_into()
                .map_err(|_| self.err_here("exponent too large"))?;
            let e = if neg { -e } else { e };
            return base
                .powi(e)
                .map_err(|_| self.err_here("zero raised to a negative power"));
        }
        Ok(base)
    }

    // atom := '(' expr ')' | int | ident
    fn atom(&mut self) -> Result<RatFunc, MapError> {
        if self.at_punct('(') {
            self.next();
            let e = self.expr()?;
            self.expect_punct(')')?;
            return Ok(e);
        }
        match self.next() {
            Some(Lexed { tok: Tok::Int(n), .. }) => Ok(RatFunc::constant(
                self.vars,
                Rat::from_integer(n),
            )),
            Some(Lexed { tok: Tok::Ident(name), .. }) => match self.vars.index_of(&name) {
                Some(idx) => Ok(RatFunc::var(self.vars, idx)),
                None => Err(MapError::UndeclaredVariable(name)),
            },
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err_here("expected expression"))
            }
        }
    }
}

fn parse_ident_list(p: &mut Parser) -> Result<Vec<String>, MapError> {
    let mut names = Vec::new();
    loop {
        match p.next() {
            Some(Lexed { tok: Tok::Ident(n), .. }) => names.push(n),
            _ => {
                p.pos = p.pos.saturating_sub(1);
                return Err(p.err_here("expected identifier"));
            }
        }
        if p.at_punct(',') {
            p.next();
        } else {
            break;
        }
    }
    Ok(names)
}

/// Parse a full map definition.
pub fn parse_map(text: &str) -> Result<RationalMap, MapError> {
    let toks = lex(text)?;
    let empty = VarSet::new(Vec::<String>::new());
    let mut p = Parser {
        toks,
        pos: 0,
        vars: &empty,
    };
    // vars
    match p.next() {
        Some(Lexed { tok: Tok::Ident(kw), .. }) if kw == "vars" => {}
        _ => {
            p.pos = p.pos.saturating_sub(1);
            return Err(p.err_here("expected `vars`"));
        }
    }
    let state_vars = parse_ident_list(&mut p)?;
    p.expect_punct(';')?;
    // optional params
    let mut params = Vec::new();
    if matches!(p.peek(), Some(Lexed { tok: Tok::Ident(kw), .. }) if kw == "params") {
        p.next();
        params = parse_ident_list(&mut p)?;
        p.expect_punct(';')?;
    }
    // duplicate declarations
    {
        let mut seen = std::collections::BTreeSet::new();
        for n in state_vars.iter().chain(params.iter()) {
            if !seen.insert(n.clone()) {
                return Err(p.err_here(&format!("variable `{n}` declared twice")));
            }
        }
    }
    let all: Vec<String> = state_vars.iter().chain(params.iter()).cloned().collect();
    let vars = VarSet::new(all);
    // f = ( ... )
    match p.next() {
        Some(Lexed { tok: Tok::Ident(kw), .. }) if kw == "f" => {}
        _ => {
            p.pos = p.pos.saturating_sub(1);
            return Err(p.err_here("expected `f`"));
        }
    }
    p.expect_punct('=')?;
    p.expect_punct('(')?;
    let mut q = Parser {
        toks: p.toks,
        pos: p.pos,
        vars: &vars,
    };
    let mut components = Vec::new();
    loop {
        components.push(q.expr()?);
        if q.at_punct(',') {
            q.next();
        } else {
            break;
        }
    }
    q.expect_punct(')')?;
    if q.at_punct(';') {
        q.next();
    }
    if q.peek().is_some() {
        return Err(q.err_here("trailing input after map definition"));
    }
    if components.len() != state_vars.len() {
        return Err(MapError::DimensionMismatch {
            expected: state_vars.len(),
            found: components.len(),
        });
    }
    for (i, c) in components.iter().enumerate() {
        if c.den().is_zero() {
            return Err(MapError::ZeroDenominator(i));
        }
    }
    RationalMap::new(state_vars, params, components)
}

/// Parse a single expression in a given variable universe.
pub fn parse_expr_in(text: &str, vars: &VarSet) -> Result<RatFunc, MapError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, vars };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err_here("trailing input after expression"));
    }
    Ok(e)
}

/// Parse a comma-separated list of rational numbers like `2, -3/5, 0`.
pub fn parse_rat_list(text: &str) -> Result<Vec<Rat>, MapError> {
    let toks = lex(text)?;
    let empty = VarSet::new(Vec::<String>::new());
    let mut p = Parser {
        toks,
        pos: 0,
        vars: &empty,
    };
    let mut out = Vec::new();
    loop {
        let e = p.expr()?;
        let c = e
            .constant_value()
            .ok_or_else(|| p.err_here("expected a rational constant"))?;
        out.push(c);
        if p.at_punct(',') {
            p.next();
        } else {
            break;
        }
    }
    if p.peek().is_some() {
        return Err(p.err_here("trailing input"));
    }
    Ok(out)
}

/// A single-parameter constraint like `a > 9/8` or `a != 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamConstraint {
    pub param: String,
    pub op: ConstraintOp,
    pub value: Rat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintOp {
    Gt,
    Ge,
    Lt,
    Le,
    Eq,
    Ne,
}

impl ParamConstraint {
    pub fn satisfied_by(&self, v: &Rat) -> bool {
        match self.op {
            ConstraintOp::Gt => v > &self.value,
            ConstraintOp::Ge => v >= &self.value,
            ConstraintOp::Lt => v < &self.value,
            ConstraintOp::Le => v <= &self.value,
            ConstraintOp::Eq => v == &self.value,
            ConstraintOp::Ne => v != &self.value,
        }
    }
}

/// Parse `"<ident> <op> <rational>"` with op one of `> >= < <= = !=`.
pub fn parse_constraint(text: &str) -> Result<ParamConstraint, MapError> {
    let text = text.trim();
    let ops = [
        (">=", ConstraintOp::Ge),
        ("<=", ConstraintOp::Le),
        ("!=", ConstraintOp::Ne),
        (">", ConstraintOp::Gt),
        ("<", ConstraintOp::Lt),
        ("=", ConstraintOp::Eq),
    ];
    for (s, op) in ops {
        if let Some(pos) = text.find(s) {
            let name = text[..pos].trim();
            let rhs = text[pos + s.len()..].trim();
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(MapError::Parse {
                    line: 1,
                    col: 1,
                    msg: format!("bad parameter name in constraint `{text}`"),
                });
            }
            let vals = parse_rat_list(rhs)?;
            if vals.len() != 1 {
                return Err(MapError::Parse {
                    line: 1,
                    col: 1,
                    msg: "expected a single rational on the right of the constraint".into(),
                });
            }
            return Ok(ParamConstraint {
                param: name.to_string(),
                op,
                value: vals[0].clone(),
            });
        }
    }
    Err(MapError::Parse {
        line: 1,
        col: 1,
        msg: format!("no comparison operator in constraint `{text}`"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn parses_planar_map() {
        let m = parse_map("vars x,y; params b,c; f = (y, -b*x + c/y)").unwrap();
        assert_eq!(m.state_vars(), &["x", "y"]);
        assert_eq!(m.params(), &["b", "c"]);
        assert_eq!(m.n(), 2);
        // second component: (-b x y + c)/y
        let c2 = m.component(1);
        assert_eq!(c2.den().to_string(), "y");
        assert_eq!(c2.num().to_string(), "-x*y*b + c");
    }

    #[test]
    fn parses_todd() {
        let m = parse_map("vars x,y,z; params a; f = (y, z, (a+y+z)/x)").unwrap();
        assert_eq!(m.n(), 3);
        assert_eq!(m.component(2).to_string(), "(y + z + a)/x");
    }

    #[test]
    fn rejects_undeclared_variable() {
        let e = parse_map("vars x; f = (x + w)").unwrap_err();
        assert_eq!(e, MapError::UndeclaredVariable("w".into()));
    }

    #[test]
    fn reports_position() {
        let e = parse_map("vars x;\nf = (x +)").unwrap_err();
        match e {
            MapError::Parse { line, col, .. } => {
                assert_eq!(line, 2);
                assert!(col >= 8);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_zero_denominator() {
        let e = parse_map("vars x, y; f = (y, x/(y - y))").unwrap_err();
        match e {
            MapError::Parse { msg, .. } => assert!(msg.contains("division")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dimension_mismatch() {
        let e = parse_map("vars x, y; f = (y)").unwrap_err();
        assert_eq!(
            e,
            MapError::DimensionMismatch {
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn comments_and_whitespace() {
        let src = "# a map\nvars x, y;  # two vars\nf = (y, 1/x)";
        let m = parse_map(src).unwrap();
        assert_eq!(m.n(), 2);
    }

    #[test]
    fn negative_exponents() {
        let m = parse_map("vars x,y; f = (y, x^-1*y^-2)").unwrap();
        assert_eq!(m.component(1).to_string(), "1/(x*y^2)");
    }

    #[test]
    fn rational_literals_via_division() {
        let vars = VarSet::new(vec!["x"]);
        let e = parse_expr_in("3/2*x - 1/2", &vars).unwrap();
        assert!(e.is_poly());
        assert_eq!(e.num().to_string(), "3/2*x - 1/2");
    }

    #[test]
    fn rat_list_and_constraint() {
        assert_eq!(parse_rat_list("2, -3/5").unwrap(), vec![rat_int(2), rat(-3, 5)]);
        let c = parse_constraint("a > 9/8").unwrap();
        assert_eq!(c.param, "a");
        assert_eq!(c.op, ConstraintOp::Gt);
        assert_eq!(c.value, rat(9, 8));
        assert!(c.satisfied_by(&rat(3, 2)));
        assert!(!c.satisfied_by(&rat(9, 8)));
    }
}
