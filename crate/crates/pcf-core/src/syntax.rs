//! Abstract syntax and typing for PCF over `nat`, and for the pure
//! simply-typed calculus over the answerless base `i`.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// Simple types. `Nat` is the PCF base type; `Iota` is the pure base used by
/// the full-completeness pipeline. The two bases never mix inside one type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ty {
    Nat,
    Iota,
    Arrow(Box<Ty>, Box<Ty>),
}

impl Ty {
    pub fn arrow(dom: Ty, cod: Ty) -> Ty {
        Ty::Arrow(Box::new(dom), Box::new(cod))
    }

    /// Builds `T_1 -> ... -> T_k -> base`.
    pub fn curried(args: &[Ty], base: Ty) -> Ty {
        args.iter()
            .rev()
            .fold(base, |acc, t| Ty::arrow(t.clone(), acc))
    }

    /// Splits into the unique form `T_1 -> ... -> T_k -> base`.
    pub fn uncurried(&self) -> (Vec<&Ty>, &Ty) {
        let mut args = Vec::new();
        let mut t = self;
        while let Ty::Arrow(a, b) = t {
            args.push(a.as_ref());
            t = b;
        }
        (args, t)
    }

    pub fn is_pure(&self) -> bool {
        match self {
            Ty::Nat => false,
            Ty::Iota => true,
            Ty::Arrow(a, b) => a.is_pure() && b.is_pure(),
        }
    }

    pub fn is_nat_based(&self) -> bool {
        match self {
            Ty::Nat => true,
            Ty::Iota => false,
            Ty::Arrow(a, b) => a.is_nat_based() && b.is_nat_based(),
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Nat => write!(f, "nat"),
            Ty::Iota => write!(f, "i"),
            Ty::Arrow(a, b) => {
                if matches!(a.as_ref(), Ty::Arrow(_, _)) {
                    write!(f, "({}) -> {}", a, b)
                } else {
                    write!(f, "{} -> {}", a, b)
                }
            }
        }
    }
}

/// PCF terms. Pure simply-typed terms are the `Var`/`Lam`/`App` fragment with
/// `Iota`-based annotations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Lam(String, Ty, Box<Term>),
    App(Box<Term>, Box<Term>),
    Num(u32),
    Omega,
    Y(Ty),
    CaseK(u32),
}

impl Term {
    pub fn lam(x: impl Into<String>, ty: Ty, body: Term) -> Term {
        Term::Lam(x.into(), ty, Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn var(x: impl Into<String>) -> Term {
        Term::Var(x.into())
    }

    /// Left-nested application `f a_1 ... a_n`.
    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    /// Splits an application spine into head and arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Term::App(f, a) = t {
            args.push(a.as_ref());
            t = f;
        }
        args.reverse();
        (t, args)
    }

    pub fn free_vars(&self) -> HashSet<String> {
        match self {
            Term::Var(x) => HashSet::from([x.clone()]),
            Term::Lam(x, _, body) => {
                let mut fv = body.free_vars();
                fv.remove(x);
                fv
            }
            Term::App(f, a) => {
                let mut fv = f.free_vars();
                fv.extend(a.free_vars());
                fv
            }
            _ => HashSet::new(),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn atom(t: &Term) -> bool {
            matches!(
                t,
                Term::Var(_) | Term::Num(_) | Term::Omega | Term::Y(_) | Term::CaseK(_)
            )
        }
        match self {
            Term::Var(x) => write!(f, "{}", x),
            Term::Num(n) => write!(f, "{}", n),
            Term::Omega => write!(f, "omega"),
            Term::Y(t) => write!(f, "Y[{}]", t),
            Term::CaseK(k) => write!(f, "case[{}]", k),
            Term::Lam(x, t, body) => write!(f, "\\{}:{}. {}", x, t, body),
            Term::App(g, a) => {
                // left operand: anything but a lambda prints unparenthesized
                // when it is itself an application or atom
                match g.as_ref() {
                    Term::Lam(_, _, _) => write!(f, "({})", g)?,
                    _ => write!(f, "{}", g)?,
                }
                write!(f, " ")?;
                if atom(a) {
                    write!(f, "{}", a)
                } else {
                    write!(f, "({})", a)
                }
            }
        }
    }
}

/// Ordered typing context; shadowing is by rightmost occurrence, so the
/// positions of earlier bindings are stable under extension.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ctx(pub Vec<(String, Ty)>);

impl Ctx {
    pub fn empty() -> Ctx {
        Ctx(Vec::new())
    }

    pub fn extend(&self, x: impl Into<String>, ty: Ty) -> Ctx {
        let mut v = self.0.clone();
        v.push((x.into(), ty));
        Ctx(v)
    }

    pub fn lookup(&self, x: &str) -> Option<(usize, &Ty)> {
        self.0
            .iter()
            .enumerate()
            .rev()
            .find(|(_, (y, _))| y == x)
            .map(|(i, (_, t))| (i, t))
    }

    pub fn types(&self) -> Vec<Ty> {
        self.0.iter().map(|(_, t)| t.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Type of the constant `case_k : nat => nat^k => nat`.
pub fn case_type(k: u32) -> Ty {
    let args: Vec<Ty> = std::iter::repeat(Ty::Nat).take(k as usize + 1).collect();
    Ty::curried(&args, Ty::Nat)
}

/// Infers the unique simple type of `m` under `ctx`.
pub fn typecheck(ctx: &Ctx, m: &Term) -> Result<Ty> {
    match m {
        Term::Var(x) => ctx
            .lookup(x)
            .map(|(_, t)| t.clone())
            .ok_or_else(|| Error::UnboundVariable(x.clone())),
        Term::Lam(x, t, body) => {
            let bt = typecheck(&ctx.extend(x.clone(), t.clone()), body)?;
            Ok(Ty::arrow(t.clone(), bt))
        }
        Term::App(f, a) => {
            let ft = typecheck(ctx, f)?;
            let at = typecheck(ctx, a)?;
            match ft {
                Ty::Arrow(dom, cod) if *dom == at => Ok(*cod),
                Ty::Arrow(dom, _) => Err(Error::Type(format!(
                    "application mismatch: function expects {} but argument has type {}",
                    dom, at
                ))),
                t => Err(Error::Type(format!(
                    "cannot apply a term of base type {}",
                    t
                ))),
            }
        }
        Term::Num(_) => Ok(Ty::Nat),
        Term::Omega => Ok(Ty::Nat),
        Term::Y(t) => Ok(Ty::arrow(Ty::arrow(t.clone(), t.clone()), t.clone())),
        Term::CaseK(k) => Ok(case_type(*k)),
    }
}

/// alpha-equivalence.
pub fn alpha_eq(m: &Term, n: &Term) -> bool {
    fn go(m: &Term, n: &Term, ml: &mut Vec<String>, nl: &mut Vec<String>) -> bool {
        match (m, n) {
            (Term::Var(x), Term::Var(y)) => {
                let xi = ml.iter().rposition(|v| v == x);
                let yi = nl.iter().rposition(|v| v == y);
                match (xi, yi) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (Term::Lam(x, tx, bx), Term::Lam(y, ty, by)) => {
                if tx != ty {
                    return false;
                }
                ml.push(x.clone());
                nl.push(y.clone());
                let r = go(bx, by, ml, nl);
                ml.pop();
                nl.pop();
                r
            }
            (Term::App(f1, a1), Term::App(f2, a2)) => {
                go(f1, f2, ml, nl) && go(a1, a2, ml, nl)
            }
            (Term::Num(a), Term::Num(b)) => a == b,
            (Term::Omega, Term::Omega) => true,
            (Term::Y(a), Term::Y(b)) => a == b,
            (Term::CaseK(a), Term::CaseK(b)) => a == b,
            _ => false,
        }
    }
    go(m, n, &mut Vec::new(), &mut Vec::new())
}

/// Capture-avoiding substitution `m[v/x]`, freshening bound names with a
/// suffix counter when needed.
pub fn substitute(m: &Term, x: &str, v: &Term) -> Term {
    fn fresh(base: &str, avoid: &HashSet<String>) -> String {
        let stem: String = base
            .trim_end_matches(|c: char| c.is_ascii_digit())
            .to_string();
        let stem = if stem.is_empty() { "x".to_string() } else { stem };
        let mut i = 1usize;
        loop {
            let cand = format!("{}{}", stem, i);
            if !avoid.contains(&cand) {
                return cand;
            }
            i += 1;
        }
    }
    match m {
        Term::Var(y) => {
            if y == x {
                v.clone()
            } else {
                m.clone()
            }
        }
        Term::Lam(y, t, body) => {
            if y == x {
                m.clone()
            } else if v.free_vars().contains(y) {
                let mut avoid = v.free_vars();
                avoid.extend(body.free_vars());
                avoid.insert(x.to_string());
                let z = fresh(y, &avoid);
                let renamed = substitute(body, y, &Term::var(z.clone()));
                Term::lam(z, t.clone(), substitute(&renamed, x, v))
            } else {
                Term::lam(y.clone(), t.clone(), substitute(body, x, v))
            }
        }
        Term::App(f, a) => Term::app(substitute(f, x, v), substitute(a, x, v)),
        _ => m.clone(),
    }
}
