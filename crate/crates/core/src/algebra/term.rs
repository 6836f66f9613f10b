use std::fmt;
use std::sync::Arc;

use super::AlgebraError;

/// Direction of the shift performed by an `Ode4` node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const0 { arity: usize },
    Const1 { arity: usize },
    Length,
    Sign,
    Add,
    Sub,
    Div2,
    Times,
    Proj { i: usize, p: usize },
    Compose { f: Term, args: Vec<Term> },
    Ode1 { g: Term, h: Term },
    Ode2 { g: Term, h: Term, k: Term },
    Ode2Star { g: Term, h: Term, k: Term },
    Ode3 { g: Term },
    Ode4 { g: Term, k: Term, dir: Dir },
    Ode1Star { g: Term, h: Term, k: Term },
    Oracle { name: Arc<str>, arity: usize },
}

#[derive(Debug, PartialEq)]
struct Inner {
    node: Node,
    arity: usize,
}

/// An immutable, shared algebra term. Arities are checked at construction.
#[derive(Clone)]
pub struct Term(Arc<Inner>);

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn mismatch(what: &str, expected: usize, found: usize) -> AlgebraError {
    AlgebraError::InconsistentArity {
        context: what.to_string(),
        expected,
        found,
    }
}

fn expect_arity(what: &str, t: &Term, expected: usize) -> Result<(), AlgebraError> {
    if t.arity() == expected {
        Ok(())
    } else {
        Err(mismatch(what, expected, t.arity()))
    }
}

impl Term {
    fn mk(node: Node, arity: usize) -> Term {
        Term(Arc::new(Inner { node, arity }))
    }

    /// Builds a term from a node, checking the arity laws of its kind.
    pub fn new(node: Node) -> Result<Term, AlgebraError> {
        let arity = match &node {
            Node::Const0 { arity } | Node::Const1 { arity } => *arity,
            Node::Length | Node::Sign | Node::Div2 => 1,
            Node::Add | Node::Sub | Node::Times => 2,
            Node::Proj { i, p } => {
                if *i < 1 || i > p {
                    return Err(AlgebraError::BadProjection { i: *i, p: *p });
                }
                *p
            }
            Node::Oracle { arity, .. } => *arity,
            Node::Compose { f, args } => {
                if args.is_empty() {
                    return Err(AlgebraError::EmptyComposition);
                }
                expect_arity("composed function", f, args.len())?;
                let a = args[0].arity();
                for g in &args[1..] {
                    expect_arity("composition argument", g, a)?;
                }
                a
            }
            Node::Ode1 { g, h } => {
                expect_arity("ode1 step", h, g.arity() + 1)?;
                g.arity() + 1
            }
            Node::Ode2 { g, h, k } | Node::Ode2Star { g, h, k } => {
                expect_arity("ode2 step", h, g.arity() + 1)?;
                expect_arity("ode2 shift", k, g.arity())?;
                g.arity() + 1
            }
            Node::Ode3 { g } => g.arity() + 1,
            Node::Ode4 { g, k, .. } => {
                expect_arity("ode4 shift", k, g.arity())?;
                g.arity() + 1
            }
            Node::Ode1Star { g, h, k } => {
                expect_arity("ode1* step", h, g.arity() + 1)?;
                expect_arity("ode1* factor", k, g.arity() + 1)?;
                g.arity() + 1
            }
        };
        Ok(Term::mk(node, arity))
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }

    pub fn arity(&self) -> usize {
        self.0.arity
    }

    /// Stable identity of this shared node, used as a memoization key.
    pub fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Children in a fixed order; diagnostic paths index into this list.
    pub fn children(&self) -> Vec<&Term> {
        match self.node() {
            Node::Compose { f, args } => std::iter::once(f).chain(args.iter()).collect(),
            Node::Ode1 { g, h } => vec![g, h],
            Node::Ode2 { g, h, k } | Node::Ode2Star { g, h, k } | Node::Ode1Star { g, h, k } => {
                vec![g, h, k]
            }
            Node::Ode3 { g } => vec![g],
            Node::Ode4 { g, k, .. } => vec![g, k],
            _ => vec![],
        }
    }

    pub fn is_schema(&self) -> bool {
        matches!(
            self.node(),
            Node::Ode1 { .. }
                | Node::Ode2 { .. }
                | Node::Ode2Star { .. }
                | Node::Ode3 { .. }
                | Node::Ode4 { .. }
                | Node::Ode1Star { .. }
        )
    }

    /// Number of distinct nodes reachable from this term.
    pub fn dag_size(&self) -> usize {
        let mut seen = rustc_hash::FxHashSet::default();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            if seen.insert(t.id()) {
                stack.extend(t.children());
            }
        }
        seen.len()
    }

    // Leaf constructors.

    pub fn zero(arity: usize) -> Term {
        Term::mk(Node::Const0 { arity }, arity)
    }

    pub fn one(arity: usize) -> Term {
        Term::mk(Node::Const1 { arity }, arity)
    }

    pub fn length() -> Term {
        Term::mk(Node::Length, 1)
    }

    pub fn sign() -> Term {
        Term::mk(Node::Sign, 1)
    }

    pub fn add_fn() -> Term {
        Term::mk(Node::Add, 2)
    }

    pub fn sub_fn() -> Term {
        Term::mk(Node::Sub, 2)
    }

    pub fn div2_fn() -> Term {
        Term::mk(Node::Div2, 1)
    }

    pub fn times_fn() -> Term {
        Term::mk(Node::Times, 2)
    }

    pub fn proj(i: usize, p: usize) -> Result<Term, AlgebraError> {
        Term::new(Node::Proj { i, p })
    }

    pub fn oracle(name: &str, arity: usize) -> Term {
        Term::mk(
            Node::Oracle {
                name: name.into(),
                arity,
            },
            arity,
        )
    }

    pub fn compose(f: &Term, args: &[Term]) -> Result<Term, AlgebraError> {
        Term::new(Node::Compose {
            f: f.clone(),
            args: args.to_vec(),
        })
    }

    pub fn ode1(g: &Term, h: &Term) -> Result<Term, AlgebraError> {
        Term::new(Node::Ode1 {
            g: g.clone(),
            h: h.clone(),
        })
    }

    pub fn ode2(g: &Term, h: &Term, k: &Term) -> Result<Term, AlgebraError> {
        Term::new(Node::Ode2 {
            g: g.clone(),
            h: h.clone(),
            k: k.clone(),
        })
    }

    pub fn ode2_star(g: &Term, h: &Term, k: &Term) -> Result<Term, AlgebraError> {
        Term::new(Node::Ode2Star {
            g: g.clone(),
            h: h.clone(),
            k: k.clone(),
        })
    }

    pub fn ode3(g: &Term) -> Term {
        Term::mk(Node::Ode3 { g: g.clone() }, g.arity() + 1)
    }

    pub fn ode4(g: &Term, k: &Term, dir: Dir) -> Result<Term, AlgebraError> {
        Term::new(Node::Ode4 {
            g: g.clone(),
            k: k.clone(),
            dir,
        })
    }

    pub fn ode1_star(g: &Term, h: &Term, k: &Term) -> Result<Term, AlgebraError> {
        Term::new(Node::Ode1Star {
            g: g.clone(),
            h: h.clone(),
            k: k.clone(),
        })
    }

    /// Shorthand for composing a binary basic function.
    pub fn apply2(f: Term, l: &Term, r: &Term) -> Result<Term, AlgebraError> {
        Term::compose(&f, &[l.clone(), r.clone()])
    }

    pub fn apply1(f: Term, e: &Term) -> Term {
        Term::mk(
            Node::Compose {
                f,
                args: vec![e.clone()],
            },
            e.arity(),
        )
    }

    /// True for `Const0` of any arity.
    pub fn is_const0(&self) -> bool {
        matches!(self.node(), Node::Const0 { .. })
    }

    pub fn is_const1(&self) -> bool {
        matches!(self.node(), Node::Const1 { .. })
    }
}

fn write_sexp(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t.node() {
        Node::Const0 { arity } => write!(f, "(const 0 {arity})"),
        Node::Const1 { arity } => write!(f, "(const 1 {arity})"),
        Node::Length => write!(f, "len"),
        Node::Sign => write!(f, "sg"),
        Node::Add => write!(f, "+"),
        Node::Sub => write!(f, "-"),
        Node::Div2 => write!(f, "div2"),
        Node::Times => write!(f, "*"),
        Node::Proj { i, p } => write!(f, "(proj {i} {p})"),
        Node::Oracle { name, arity } => write!(f, "(oracle {name} {arity})"),
        Node::Compose { f: outer, args } => {
            let basic = match outer.node() {
                Node::Length => Some("len"),
                Node::Sign => Some("sg"),
                Node::Add => Some("+"),
                Node::Sub => Some("-"),
                Node::Div2 => Some("div2"),
                Node::Times => Some("*"),
                _ => None,
            };
            match basic {
                Some(op) => write!(f, "({op}")?,
                None => {
                    write!(f, "(comp ")?;
                    write_sexp(outer, f)?;
                }
            }
            for a in args {
                write!(f, " ")?;
                write_sexp(a, f)?;
            }
            write!(f, ")")
        }
        Node::Ode1 { g, h } => write_schema(f, "ode1", &[g, h], ""),
        Node::Ode2 { g, h, k } => write_schema(f, "ode2", &[g, h, k], ""),
        Node::Ode2Star { g, h, k } => write_schema(f, "ode2*", &[g, h, k], ""),
        Node::Ode3 { g } => write_schema(f, "ode3", &[g], ""),
        Node::Ode4 { g, k, dir } => write_schema(
            f,
            "ode4",
            &[g, k],
            match dir {
                Dir::Left => " +",
                Dir::Right => " -",
            },
        ),
        Node::Ode1Star { g, h, k } => write_schema(f, "ode1*", &[g, h, k], ""),
    }
}

fn write_schema(f: &mut fmt::Formatter<'_>, name: &str, parts: &[&Term], tail: &str) -> fmt::Result {
    write!(f, "({name}")?;
    for p in parts {
        write!(f, " ")?;
        write_sexp(p, f)?;
    }
    write!(f, "{tail})")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sexp(self, f)
    }
}
