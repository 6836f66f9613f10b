//! S-expression surface syntax for terms.
//!
//! ```text
//! e ::= 0 | 1 | x<i> | (len e) | (sg e) | (+ e e) | (- e e) | (div2 e) | (* e e)
//!     | (proj i p) | (comp f e…) | (ode1 g h) | (ode2 g h k) | (ode2* g h k)
//!     | (ode3 g) | (ode4 g k +|-) | (ode1* g h k) | (oracle name arity) | (std name)
//! ```
//!
//! Every expression denotes a function of the arity of its context. `x<i>`
//! is the i-th projection of that arity. A schema of arity `a` takes `g` and
//! `k` at arity `a − 1` and `h` at arity `a` (ODE₁* reads `k` at `a` too).
//! The arguments of `comp` live in the outer context and `f` in a context of
//! arity equal to their number.

use std::fmt;

use odecirc_core::algebra::build;
use odecirc_core::algebra::{AlgebraError, Dir, Term};
use odecirc_core::stdlib;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Loc {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DslError {
    #[error("parse error at {loc}: {message}")]
    Parse { loc: Loc, message: String },
    #[error("unknown stdlib name `{0}`")]
    UnknownStdName(String),
    #[error("arity error at {loc}: {message}")]
    Arity { loc: Loc, message: String },
}

#[derive(Clone, Debug)]
enum Sexp {
    Atom(String, Loc),
    List(Vec<Sexp>, Loc),
}

impl Sexp {
    fn loc(&self) -> &Loc {
        match self {
            Sexp::Atom(_, l) | Sexp::List(_, l) => l,
        }
    }
}

fn parse_err(loc: Loc, message: impl Into<String>) -> DslError {
    DslError::Parse {
        loc,
        message: message.into(),
    }
}

fn arity_err(loc: &Loc, message: impl Into<String>) -> DslError {
    DslError::Arity {
        loc: loc.clone(),
        message: message.into(),
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl Lexer<'_> {
    fn loc(&self) -> Loc {
        Loc {
            line: self.line,
            col: self.col,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while self.chars.peek().is_some_and(|c| *c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn sexp(&mut self) -> Result<Sexp, DslError> {
        self.skip_trivia();
        let loc = self.loc();
        match self.chars.peek() {
            None => Err(parse_err(loc, "unexpected end of input")),
            Some(')') => Err(parse_err(loc, "unexpected `)`")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return Err(parse_err(loc, "unclosed `(`")),
                        Some(')') => {
                            self.bump();
                            break;
                        }
                        _ => items.push(self.sexp()?),
                    }
                }
                Ok(Sexp::List(items, loc))
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(Sexp::Atom(s, loc))
            }
        }
    }
}

fn read(text: &str) -> Result<Sexp, DslError> {
    let mut lx = Lexer {
        chars: text.chars().peekable(),
        line: 1,
        col: 1,
    };
    let s = lx.sexp()?;
    lx.skip_trivia();
    if lx.chars.peek().is_some() {
        return Err(parse_err(lx.loc(), "trailing input after the term"));
    }
    Ok(s)
}

/// Arity demands of an expression: at least `min`, exactly `exact` if set.
#[derive(Clone, Copy, Default)]
struct Need {
    min: usize,
    exact: Option<usize>,
}

impl Need {
    fn join(self, o: Need, loc: &Loc) -> Result<Need, DslError> {
        let exact = match (self.exact, o.exact) {
            (Some(a), Some(b)) if a != b => return Err(arity_err(loc, format!("conflicting arities {a} and {b}"))),
            (a, b) => a.or(b),
        };
        let min = self.min.max(o.min);
        if let Some(e) = exact {
            if min > e {
                return Err(arity_err(loc, format!("needs arity {min} but is fixed at {e}")));
            }
        }
        Ok(Need { min, exact })
    }

    /// Demand on the schema from a part read at arity `a − 1`.
    fn up(self) -> Need {
        Need {
            min: self.min + 1,
            exact: self.exact.map(|e| e + 1),
        }
    }

    fn exactly(a: usize) -> Need {
        Need { min: a, exact: Some(a) }
    }
}

fn head(items: &[Sexp]) -> Option<&str> {
    match items.first() {
        Some(Sexp::Atom(s, _)) => Some(s.as_str()),
        _ => None,
    }
}

fn number(s: &Sexp) -> Result<usize, DslError> {
    match s {
        Sexp::Atom(a, loc) => a.parse().map_err(|_| parse_err(loc.clone(), format!("expected a number, got `{a}`"))),
        Sexp::List(_, loc) => Err(parse_err(loc.clone(), "expected a number")),
    }
}

fn name(s: &Sexp) -> Result<&str, DslError> {
    match s {
        Sexp::Atom(a, _) => Ok(a),
        Sexp::List(_, loc) => Err(parse_err(loc.clone(), "expected a name")),
    }
}

fn expect_len(items: &[Sexp], n: usize, loc: &Loc) -> Result<(), DslError> {
    if items.len() != n + 1 {
        return Err(parse_err(
            loc.clone(),
            format!("`{}` takes {n} operands, got {}", head(items).unwrap_or("?"), items.len() - 1),
        ));
    }
    Ok(())
}

fn need(s: &Sexp) -> Result<Need, DslError> {
    match s {
        Sexp::Atom(a, loc) => match a.as_str() {
            "0" | "1" => Ok(Need::default()),
            _ => match a.strip_prefix('x').and_then(|i| i.parse::<usize>().ok()) {
                Some(i) if i >= 1 => Ok(Need { min: i, exact: None }),
                _ => Err(parse_err(loc.clone(), format!("unknown atom `{a}`"))),
            },
        },
        Sexp::List(items, loc) => {
            let h = head(items).ok_or_else(|| parse_err(loc.clone(), "expected an operator"))?;
            let rest = &items[1..];
            let all = |xs: &[Sexp]| -> Result<Need, DslError> {
                xs.iter().try_fold(Need::default(), |acc, x| acc.join(need(x)?, loc))
            };
            let schema = |lower: &[&Sexp], same: &[&Sexp]| -> Result<Need, DslError> {
                let mut acc = Need { min: 1, exact: None };
                for x in lower {
                    acc = acc.join(need(x)?.up(), loc)?;
                }
                for x in same {
                    acc = acc.join(need(x)?, loc)?;
                }
                Ok(acc)
            };
            match h {
                "len" | "sg" | "div2" => {
                    expect_len(items, 1, loc)?;
                    all(rest)
                }
                "+" | "-" | "*" => {
                    expect_len(items, 2, loc)?;
                    all(rest)
                }
                "proj" => {
                    expect_len(items, 2, loc)?;
                    Ok(Need::exactly(number(&items[2])?))
                }
                "comp" => {
                    if items.len() < 3 {
                        return Err(parse_err(loc.clone(), "`comp` needs a function and at least one argument"));
                    }
                    all(&items[2..])
                }
                "ode1" => {
                    expect_len(items, 2, loc)?;
                    schema(&[&items[1]], &[&items[2]])
                }
                "ode2" | "ode2*" => {
                    expect_len(items, 3, loc)?;
                    schema(&[&items[1], &items[3]], &[&items[2]])
                }
                "ode3" => {
                    expect_len(items, 1, loc)?;
                    schema(&[&items[1]], &[])
                }
                "ode4" => {
                    expect_len(items, 3, loc)?;
                    schema(&[&items[1], &items[2]], &[])
                }
                "ode1*" => {
                    expect_len(items, 3, loc)?;
                    schema(&[&items[1]], &[&items[2], &items[3]])
                }
                "oracle" => {
                    expect_len(items, 2, loc)?;
                    Ok(Need::exactly(number(&items[2])?))
                }
                "std" => {
                    expect_len(items, 1, loc)?;
                    let nt = stdlib::lookup(name(&items[1])?).map_err(|_| DslError::UnknownStdName(name(&items[1]).unwrap().into()))?;
                    Ok(Need::exactly(nt.arity()))
                }
                other => Err(parse_err(loc.clone(), format!("unknown operator `{other}`"))),
            }
        }
    }
}

fn algebra(loc: &Loc) -> impl Fn(AlgebraError) -> DslError + '_ {
    move |e| arity_err(loc, e.to_string())
}

fn lower_arity(a: usize, loc: &Loc) -> Result<usize, DslError> {
    a.checked_sub(1).ok_or_else(|| arity_err(loc, "a schema needs arity at least 1"))
}

fn elab(s: &Sexp, a: usize) -> Result<Term, DslError> {
    match s {
        Sexp::Atom(x, loc) => match x.as_str() {
            "0" => Ok(build::c0(a)),
            "1" => Ok(build::c1(a)),
            _ => {
                let i: usize = x[1..].parse().map_err(|_| parse_err(loc.clone(), format!("unknown atom `{x}`")))?;
                if i == 0 || i > a {
                    return Err(arity_err(loc, format!("`{x}` used at arity {a}")));
                }
                Ok(build::p(i, a))
            }
        },
        Sexp::List(items, loc) => {
            let h = head(items).ok_or_else(|| parse_err(loc.clone(), "expected an operator"))?;
            let e = |i: usize, at: usize| elab(&items[i], at);
            let low = || lower_arity(a, loc);
            Ok(match h {
                "len" => build::len(&e(1, a)?),
                "sg" => build::sg(&e(1, a)?),
                "div2" => build::div2(&e(1, a)?),
                "+" => build::add(&e(1, a)?, &e(2, a)?),
                "-" => build::sub(&e(1, a)?, &e(2, a)?),
                "*" => build::times(&e(1, a)?, &e(2, a)?),
                "proj" => {
                    let (i, p) = (number(&items[1])?, number(&items[2])?);
                    if p != a {
                        return Err(arity_err(loc, format!("(proj {i} {p}) used at arity {a}")));
                    }
                    Term::proj(i, p).map_err(algebra(loc))?
                }
                "comp" => {
                    let args = items[2..].iter().map(|x| elab(x, a)).collect::<Result<Vec<_>, _>>()?;
                    let f = e(1, args.len())?;
                    Term::compose(&f, &args).map_err(algebra(loc))?
                }
                "ode1" => Term::ode1(&e(1, low()?)?, &e(2, a)?).map_err(algebra(loc))?,
                "ode2" => Term::ode2(&e(1, low()?)?, &e(2, a)?, &e(3, low()?)?).map_err(algebra(loc))?,
                "ode2*" => Term::ode2_star(&e(1, low()?)?, &e(2, a)?, &e(3, low()?)?).map_err(algebra(loc))?,
                "ode3" => Term::ode3(&e(1, low()?)?),
                "ode4" => {
                    let dir = match name(&items[3])? {
                        "+" => Dir::Left,
                        "-" => Dir::Right,
                        d => return Err(parse_err(items[3].loc().clone(), format!("ode4 direction must be + or -, got `{d}`"))),
                    };
                    Term::ode4(&e(1, low()?)?, &e(2, low()?)?, dir).map_err(algebra(loc))?
                }
                "ode1*" => Term::ode1_star(&e(1, low()?)?, &e(2, a)?, &e(3, a)?).map_err(algebra(loc))?,
                "oracle" => {
                    let (n, ar) = (name(&items[1])?, number(&items[2])?);
                    if ar != a {
                        return Err(arity_err(loc, format!("oracle `{n}` has arity {ar}, used at arity {a}")));
                    }
                    Term::oracle(n, ar)
                }
                "std" => {
                    let n = name(&items[1])?;
                    let nt = stdlib::lookup(n).map_err(|_| DslError::UnknownStdName(n.into()))?;
                    if nt.arity() != a {
                        return Err(arity_err(loc, format!("`{n}` has arity {}, used at arity {a}", nt.arity())));
                    }
                    nt.raw().clone()
                }
                other => return Err(parse_err(loc.clone(), format!("unknown operator `{other}`"))),
            })
        }
    }
}

/// Parses a term, taking the least arity its projections and fixed-arity
/// parts allow.
pub fn parse_dsl(text: &str) -> Result<Term, DslError> {
    let s = read(text)?;
    let n = need(&s)?;
    elab(&s, n.exact.unwrap_or(n.min))
}

/// Parses a term at a given arity.
pub fn parse_dsl_at(text: &str, arity: usize) -> Result<Term, DslError> {
    let s = read(text)?;
    let n = need(&s)?;
    if arity < n.min || n.exact.is_some_and(|e| e != arity) {
        return Err(arity_err(s.loc(), format!("term cannot have arity {arity}")));
    }
    elab(&s, arity)
}
