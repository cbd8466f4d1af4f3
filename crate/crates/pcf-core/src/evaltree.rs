//! Evaluation trees: the tree form shared by canonical strategies and
//! head-normalized terms.
//!
//! A tree is read off a strategy by repeated decomposition, and off a term
//! by repeated head normalization; the two constructions agree on
//! denotation/term pairs and give the bridge both ways — `approximant`
//! truncates a strategy to its finite stages and `extract_term` rebuilds a
//! closed term from the tree, which is how definable witnesses are
//! produced.

use std::collections::BTreeMap;
use std::fmt;

use crate::arena::Arena;
use crate::decompose::{decompose, recompose, Decomposition};
use crate::error::{Error, Result};
use crate::parse::parse_type;
use crate::reduce::head_step;
use crate::strategy::Strategy;
use crate::syntax::{typecheck, Ctx, Term, Ty};

/// Head-reduction steps allowed while building one tree from a term.
pub const DEFAULT_TREE_BUDGET: u64 = 100_000;

/// The evaluation tree of a term or strategy at a type `T_1 -> ... -> T_q
/// -> base`. Binder names are positional: the binder at overall position
/// `p` (counting all binders on the path from the root) is `x{p+1}`, and
/// `head` refers to that numbering, so `head = 1` is the outermost binder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalTree {
    /// Diverges without consulting anything.
    Bottom,
    /// Structure remained below the depth bound (or the step budget ran
    /// out); a marker, not a value.
    Cut,
    /// Returns `value` without consulting anything.
    Leaf { binders: Vec<(String, Ty)>, value: u32 },
    /// Interrogates binder `head` (1-based), feeding it `args` and
    /// continuing through `branches` on its answer; an absent branch
    /// diverges.
    Node {
        binders: Vec<(String, Ty)>,
        head: usize,
        args: Vec<EvalTree>,
        branches: BTreeMap<u32, EvalTree>,
    },
}

impl EvalTree {
    /// True when no `Cut` marker occurs anywhere.
    pub fn is_complete(&self) -> bool {
        match self {
            EvalTree::Cut => false,
            EvalTree::Bottom | EvalTree::Leaf { .. } => true,
            EvalTree::Node { args, branches, .. } => {
                args.iter().all(|t| t.is_complete())
                    && branches.values().all(|t| t.is_complete())
            }
        }
    }

    /// Number of `Node` levels on the deepest path.
    pub fn depth(&self) -> usize {
        match self {
            EvalTree::Bottom | EvalTree::Cut | EvalTree::Leaf { .. } => 0,
            EvalTree::Node { args, branches, .. } => {
                1 + args
                    .iter()
                    .chain(branches.values())
                    .map(|t| t.depth())
                    .max()
                    .unwrap_or(0)
            }
        }
    }
}

fn single(n: &crate::arena::Node) -> Arena {
    Arena { roots: vec![n.clone()] }
}

/// Puts `f` in canonical shape `Prod A -> flat`, accepting either a
/// strategy already of that shape or a closed point `1 -> [[T]]`. Returns
/// the canonical strategy and the answer count of its base.
fn to_canonical(f: &Strategy) -> Result<(Strategy, u32)> {
    let cod = f.cod();
    if cod.n_roots() == 1 && cod.roots[0].children.is_empty() {
        return Ok((f.clone(), cod.roots[0].answers));
    }
    if f.dom().n_roots() == 0 && cod.n_roots() == 1 {
        let root = &cod.roots[0];
        let dom = Arena::product(root.children.iter().map(single));
        let w = root.answers;
        return Ok((f.resplit(dom, Arena::flat(w))?, w));
    }
    Err(Error::ShapeMismatch(
        "expected a closed point or a canonical strategy".into(),
    ))
}

/// Re-splits an argument component `g : Prod A -> B_j` to canonical shape,
/// sliding `B_j`'s parameters in after the domain roots.
fn canonical_arg(g: &Strategy) -> Result<Strategy> {
    let b = &g.cod().roots[0];
    let parts: Vec<Arena> = g
        .dom()
        .roots
        .iter()
        .chain(b.children.iter())
        .map(single)
        .collect();
    g.resplit(Arena::product(parts), Arena::flat(b.answers))
}

fn binders_from(dom: &Arena, n_outer: usize, window: u32) -> Result<Vec<(String, Ty)>> {
    dom.roots[n_outer..]
        .iter()
        .enumerate()
        .map(|(j, r)| Ok((format!("x{}", n_outer + j + 1), Arena::node_type(r, window)?)))
        .collect()
}

/// Reads the evaluation tree of a compact strategy by repeated
/// decomposition, descending through at most `depth_bound` interrogation
/// levels; deeper structure is replaced by `Cut`.
pub fn tree_of_strategy(f: &Strategy, depth_bound: usize) -> Result<EvalTree> {
    let (can, _) = to_canonical(f)?;
    tree_rec(&can, 0, depth_bound)
}

fn tree_rec(f: &Strategy, n_outer: usize, depth: usize) -> Result<EvalTree> {
    let w = f.cod().roots[0].answers;
    match decompose(f)? {
        Decomposition::Bot => Ok(EvalTree::Bottom),
        Decomposition::Const(v) => Ok(EvalTree::Leaf {
            binders: binders_from(f.dom(), n_outer, w)?,
            value: v,
        }),
        Decomposition::Total { head, args, branches } => {
            if depth == 0 {
                return Ok(EvalTree::Cut);
            }
            let binders = binders_from(f.dom(), n_outer, w)?;
            let n_inner = f.dom().n_roots();
            let targs = args
                .iter()
                .map(|g| tree_rec(&canonical_arg(g)?, n_inner, depth - 1))
                .collect::<Result<Vec<_>>>()?;
            let tbr = branches
                .iter()
                .map(|(x, h)| Ok((*x, tree_rec(h, n_inner, depth - 1)?)))
                .collect::<Result<BTreeMap<_, _>>>()?;
            Ok(EvalTree::Node { binders, head: head + 1, args: targs, branches: tbr })
        }
    }
}

fn base_answers(base: &Ty, window: u32) -> u32 {
    if *base == Ty::Nat {
        window
    } else {
        0
    }
}

/// Rebuilds the closed point `1 -> [[ty]]` denoted by a complete tree.
pub fn strategy_of_tree(t: &EvalTree, ty: &Ty, window: u32) -> Result<Strategy> {
    let can = build_rec(t, &[], ty, window)?;
    can.resplit(Arena::unit(), Arena::of_type(ty, window))
}

fn build_rec(t: &EvalTree, ctx: &[Ty], expected: &Ty, window: u32) -> Result<Strategy> {
    let (argtys, base) = expected.uncurried();
    let mut new_ctx: Vec<Ty> = ctx.to_vec();
    new_ctx.extend(argtys.iter().map(|t| (*t).clone()));
    let dom = Arena::of_context(&new_ctx, window);
    let w = base_answers(base, window);
    let check_binders = |bs: &[(String, Ty)]| -> Result<()> {
        if bs.len() != argtys.len() || bs.iter().zip(&argtys).any(|((_, a), b)| a != *b) {
            return Err(Error::ShapeMismatch(
                "tree binders disagree with the expected type".into(),
            ));
        }
        Ok(())
    };
    match t {
        EvalTree::Bottom => Ok(Strategy::bot(dom, Arena::flat(w))),
        EvalTree::Cut => Err(Error::ShapeMismatch(
            "a cut marker stands for unresolved structure".into(),
        )),
        EvalTree::Leaf { binders, value } => {
            check_binders(binders)?;
            if *base != Ty::Nat {
                return Err(Error::ShapeMismatch(
                    "leaf value at a base without answers".into(),
                ));
            }
            Strategy::constant(dom, *value, w)
        }
        EvalTree::Node { binders, head, args, branches } => {
            check_binders(binders)?;
            let h = head
                .checked_sub(1)
                .filter(|h| *h < new_ctx.len())
                .ok_or_else(|| {
                    Error::ShapeMismatch("head index outside the binder list".into())
                })?;
            let hty = new_ctx[h].clone();
            let (utys, _) = hty.uncurried();
            if args.len() != utys.len() {
                return Err(Error::ShapeMismatch(format!(
                    "head takes {} arguments, tree has {}",
                    utys.len(),
                    args.len()
                )));
            }
            let dargs = args
                .iter()
                .zip(&utys)
                .map(|(a, u)| {
                    build_rec(a, &new_ctx, u, window)?
                        .resplit(dom.clone(), Arena::of_type(u, window))
                })
                .collect::<Result<Vec<_>>>()?;
            let dbr = branches
                .iter()
                .map(|(x, b)| Ok((*x, build_rec(b, &new_ctx, base, window)?)))
                .collect::<Result<BTreeMap<_, _>>>()?;
            recompose(
                &Decomposition::Total { head: h, args: dargs, branches: dbr },
                &dom,
                w,
            )
        }
    }
}

/// Reads the evaluation tree of a closed term purely syntactically, by
/// head normalization under fresh positional binders. `window` bounds the
/// numerals plugged in for branch exploration (and the numerals the term
/// may produce); `budget` bounds total head-reduction steps, with `Cut`
/// marking exhaustion.
pub fn tree_of_term(
    m: &Term,
    depth_bound: usize,
    window: u32,
    budget: u64,
) -> Result<EvalTree> {
    if !m.is_closed() {
        return Err(Error::Type(
            "evaluation trees are taken at closed terms".into(),
        ));
    }
    let ty = typecheck(&Ctx::empty(), m)?;
    let mut fuel = budget;
    term_rec(&mut Vec::new(), m.clone(), &ty, depth_bound, window, &mut fuel)
}

fn term_rec(
    ctx: &mut Vec<(String, Ty)>,
    m: Term,
    expected: &Ty,
    depth: usize,
    window: u32,
    budget: &mut u64,
) -> Result<EvalTree> {
    let (argtys, base) = {
        let (a, b) = expected.uncurried();
        (a.into_iter().cloned().collect::<Vec<Ty>>(), b.clone())
    };
    let keep = ctx.len();
    let mut binders = Vec::new();
    let mut body = m;
    for t in &argtys {
        let name = format!("x{}", ctx.len() + 1);
        body = Term::app(body, Term::var(name.clone()));
        binders.push((name.clone(), t.clone()));
        ctx.push((name, t.clone()));
    }
    let r = analyze(ctx, body, &base, binders, depth, window, budget);
    ctx.truncate(keep);
    r
}

fn analyze(
    ctx: &mut Vec<(String, Ty)>,
    mut body: Term,
    base: &Ty,
    binders: Vec<(String, Ty)>,
    depth: usize,
    window: u32,
    budget: &mut u64,
) -> Result<EvalTree> {
    while let Some(next) = head_step(&body) {
        if *budget == 0 {
            return Ok(EvalTree::Cut);
        }
        *budget -= 1;
        body = next;
    }
    if let Term::Num(v) = body {
        if v >= window {
            return Err(Error::NumeralOutOfWindow { numeral: v, window });
        }
        return Ok(EvalTree::Leaf { binders, value: v });
    }
    // peel the stack of stuck case frames down to the core
    let mut frames: Vec<(u32, Vec<Term>)> = Vec::new();
    let mut core = body;
    loop {
        let frame = {
            let (h, cargs) = core.spine();
            match h {
                Term::CaseK(k) if cargs.len() == *k as usize + 1 => Some((
                    *k,
                    cargs[0].clone(),
                    cargs[1..].iter().map(|t| (*t).clone()).collect::<Vec<Term>>(),
                )),
                _ => None,
            }
        };
        match frame {
            Some((k, scrut, brs)) => {
                frames.push((k, brs));
                core = scrut;
            }
            None => break,
        }
    }
    let (head, cargs) = {
        let (h, a) = core.spine();
        (h.clone(), a.into_iter().cloned().collect::<Vec<Term>>())
    };
    match head {
        Term::Omega => Ok(EvalTree::Bottom),
        // a numeral core under frames is a case stuck out of range
        Term::Num(_) => Ok(EvalTree::Bottom),
        Term::Var(x) => {
            let pos = ctx
                .iter()
                .rposition(|(y, _)| *y == x)
                .ok_or_else(|| Error::UnboundVariable(x.clone()))?;
            if depth == 0 {
                return Ok(EvalTree::Cut);
            }
            let hty = ctx[pos].1.clone();
            let utys: Vec<Ty> = hty.uncurried().0.into_iter().cloned().collect();
            if cargs.len() != utys.len() {
                return Err(Error::Type(
                    "stuck head applied to the wrong number of arguments".into(),
                ));
            }
            let args = cargs
                .iter()
                .zip(&utys)
                .map(|(a, u)| term_rec(ctx, a.clone(), u, depth - 1, window, budget))
                .collect::<Result<Vec<_>>>()?;
            let mut branches = BTreeMap::new();
            if *base == Ty::Nat {
                for v in 0..window {
                    let plugged = frames.iter().rev().fold(Term::Num(v), |acc, (k, brs)| {
                        Term::apps(
                            Term::CaseK(*k),
                            std::iter::once(acc).chain(brs.iter().cloned()),
                        )
                    });
                    let t = term_rec(ctx, plugged, base, depth - 1, window, budget)?;
                    if t != EvalTree::Bottom {
                        branches.insert(v, t);
                    }
                }
            }
            Ok(EvalTree::Node { binders, head: pos + 1, args, branches })
        }
        _ => Err(Error::Other(
            "unexpected stuck form under head normalization".into(),
        )),
    }
}

/// The finite approximant `p_k(f)`: `p_0 = bot`; `p_k` keeps bottoms and
/// constants, and maps a head interrogation through `p_{k-1}` on its
/// arguments and on its branches below index `k`, dropping the rest.
pub fn approximant(f: &Strategy, k: u32) -> Result<Strategy> {
    let (can, _) = to_canonical(f)?;
    approx_rec(&can, k)?.resplit(f.dom().clone(), f.cod().clone())
}

fn approx_rec(f: &Strategy, k: u32) -> Result<Strategy> {
    if k == 0 {
        return Ok(Strategy::bot(f.dom().clone(), f.cod().clone()));
    }
    let w = f.cod().roots[0].answers;
    match decompose(f)? {
        Decomposition::Bot => Ok(f.clone()),
        Decomposition::Const(_) => Ok(f.clone()),
        Decomposition::Total { head, args, branches } => {
            let args2 = args
                .iter()
                .map(|g| {
                    approx_rec(&canonical_arg(g)?, k - 1)?
                        .resplit(g.dom().clone(), g.cod().clone())
                })
                .collect::<Result<Vec<_>>>()?;
            let br2 = branches
                .iter()
                .filter(|(x, _)| **x < k)
                .map(|(x, h)| Ok((*x, approx_rec(h, k - 1)?)))
                .collect::<Result<BTreeMap<_, _>>>()?;
            recompose(
                &Decomposition::Total { head, args: args2, branches: br2 },
                f.dom(),
                w,
            )
        }
    }
}

/// Extracts a closed term denoting `f` exactly. The term is
/// evaluation-tree shaped: nested lambdas over a head application wrapped
/// in `case[l]` with `l` one past the largest supported branch, gaps
/// filled with `omega`, and binders named positionally `x1, x2, ...`.
pub fn extract_term(f: &Strategy) -> Result<Term> {
    let (can, window) = to_canonical(f)?;
    if window == 0 {
        return Err(Error::ShapeMismatch(
            "term extraction needs a base with answers".into(),
        ));
    }
    let root_tys = can.dom().root_types(window)?;
    let ty = Ty::curried(&root_tys, Ty::Nat);
    let t = tree_of_strategy(&can, can.norm() + 1)?;
    term_of_tree(&t, &ty, &mut Vec::new())
}

/// Extracts a closed term denoting `approximant(f, k)`.
pub fn extract_term_pk(f: &Strategy, k: u32) -> Result<Term> {
    extract_term(&approximant(f, k)?)
}

fn term_of_tree(t: &EvalTree, expected: &Ty, ctx: &mut Vec<Ty>) -> Result<Term> {
    let (argtys, base) = {
        let (a, b) = expected.uncurried();
        (a.into_iter().cloned().collect::<Vec<Ty>>(), b.clone())
    };
    let keep = ctx.len();
    let names: Vec<String> =
        (0..argtys.len()).map(|j| format!("x{}", keep + j + 1)).collect();
    ctx.extend(argtys.iter().cloned());
    let body = (|| match t {
        EvalTree::Bottom => Ok(Term::Omega),
        EvalTree::Cut => Err(Error::ShapeMismatch(
            "a cut marker stands for unresolved structure".into(),
        )),
        EvalTree::Leaf { value, .. } => Ok(Term::Num(*value)),
        EvalTree::Node { head, args, branches, .. } => {
            let h = head
                .checked_sub(1)
                .filter(|h| *h < ctx.len())
                .ok_or_else(|| {
                    Error::ShapeMismatch("head index outside the binder list".into())
                })?;
            let hty = ctx[h].clone();
            let utys: Vec<Ty> = hty.uncurried().0.into_iter().cloned().collect();
            if args.len() != utys.len() {
                return Err(Error::ShapeMismatch(
                    "head arity disagrees with the binder type".into(),
                ));
            }
            let margs = args
                .iter()
                .zip(&utys)
                .map(|(a, u)| term_of_tree(a, u, ctx))
                .collect::<Result<Vec<_>>>()?;
            let core = Term::apps(Term::var(format!("x{}", h + 1)), margs);
            let l = branches.keys().next_back().map(|x| x + 1).unwrap_or(0);
            let mut all = vec![core];
            for v in 0..l {
                all.push(match branches.get(&v) {
                    Some(b) => term_of_tree(b, &base, ctx)?,
                    None => Term::Omega,
                });
            }
            Ok(Term::apps(Term::CaseK(l), all))
        }
    })();
    ctx.truncate(keep);
    let body = body?;
    Ok(names
        .iter()
        .zip(&argtys)
        .rev()
        .fold(body, |acc, (n, t)| Term::lam(n.clone(), t.clone(), acc)))
}

impl fmt::Display for EvalTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn binders(f: &mut fmt::Formatter<'_>, bs: &[(String, Ty)]) -> fmt::Result {
            write!(f, "[")?;
            for (i, (x, t)) in bs.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}:{}", x, t)?;
            }
            write!(f, "]")
        }
        match self {
            EvalTree::Bottom => write!(f, "bot"),
            EvalTree::Cut => write!(f, "cut"),
            EvalTree::Leaf { binders: bs, value } => {
                write!(f, "leaf ")?;
                binders(f, bs)?;
                write!(f, " {}", value)
            }
            EvalTree::Node { binders: bs, head, args, branches } => {
                write!(f, "node ")?;
                binders(f, bs)?;
                write!(f, " @{} (", head)?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", a)?;
                }
                write!(f, ") {{")?;
                for (i, (x, b)) in branches.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{} => {}", x, b)?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// Parses the textual form produced by `Display`.
pub fn parse_tree(src: &str) -> Result<EvalTree> {
    let mut p = TreeParser { s: src.as_bytes(), i: 0 };
    let t = p.tree()?;
    p.skip_ws();
    if p.i != p.s.len() {
        return Err(Error::Serial(format!(
            "trailing input after tree at byte {}",
            p.i
        )));
    }
    Ok(t)
}

struct TreeParser<'a> {
    s: &'a [u8],
    i: usize,
}

impl<'a> TreeParser<'a> {
    fn skip_ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.i).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(x) if x == c => {
                self.i += 1;
                Ok(())
            }
            _ => Err(Error::Serial(format!(
                "expected '{}' at byte {}",
                c as char, self.i
            ))),
        }
    }

    fn word(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.i;
        while self.i < self.s.len()
            && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_')
        {
            self.i += 1;
        }
        if start == self.i {
            return Err(Error::Serial(format!("expected a word at byte {}", start)));
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.i]).into_owned())
    }

    fn number<T: std::str::FromStr>(&mut self) -> Result<T> {
        self.skip_ws();
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        std::str::from_utf8(&self.s[start..self.i])
            .ok()
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| Error::Serial(format!("expected a number at byte {}", start)))
    }

    fn binders(&mut self) -> Result<Vec<(String, Ty)>> {
        self.expect(b'[')?;
        let mut out = Vec::new();
        if self.peek() == Some(b']') {
            self.i += 1;
            return Ok(out);
        }
        loop {
            let name = self.word()?;
            self.expect(b':')?;
            // a type runs to the next ',' or ']' at zero paren depth
            self.skip_ws();
            let start = self.i;
            let mut depth = 0i32;
            while self.i < self.s.len() {
                match self.s[self.i] {
                    b'(' => depth += 1,
                    b')' => depth -= 1,
                    b',' | b']' if depth == 0 => break,
                    _ => {}
                }
                self.i += 1;
            }
            let ty = parse_type(
                std::str::from_utf8(&self.s[start..self.i])
                    .map_err(|_| Error::Serial("invalid utf-8 in type".into()))?,
            )?;
            out.push((name, ty));
            match self.peek() {
                Some(b',') => self.i += 1,
                Some(b']') => {
                    self.i += 1;
                    return Ok(out);
                }
                _ => {
                    return Err(Error::Serial(format!(
                        "expected ',' or ']' at byte {}",
                        self.i
                    )))
                }
            }
        }
    }

    fn tree(&mut self) -> Result<EvalTree> {
        let w = self.word()?;
        match w.as_str() {
            "bot" => Ok(EvalTree::Bottom),
            "cut" => Ok(EvalTree::Cut),
            "leaf" => {
                let binders = self.binders()?;
                let value = self.number()?;
                Ok(EvalTree::Leaf { binders, value })
            }
            "node" => {
                let binders = self.binders()?;
                self.expect(b'@')?;
                let head = self.number()?;
                self.expect(b'(')?;
                let mut args = Vec::new();
                if self.peek() == Some(b')') {
                    self.i += 1;
                } else {
                    loop {
                        args.push(self.tree()?);
                        match self.peek() {
                            Some(b',') => self.i += 1,
                            Some(b')') => {
                                self.i += 1;
                                break;
                            }
                            _ => {
                                return Err(Error::Serial(format!(
                                    "expected ',' or ')' at byte {}",
                                    self.i
                                )))
                            }
                        }
                    }
                }
                self.expect(b'{')?;
                let mut branches = BTreeMap::new();
                if self.peek() == Some(b'}') {
                    self.i += 1;
                } else {
                    loop {
                        let x: u32 = self.number()?;
                        self.expect(b'=')?;
                        self.expect(b'>')?;
                        branches.insert(x, self.tree()?);
                        match self.peek() {
                            Some(b',') => self.i += 1,
                            Some(b'}') => {
                                self.i += 1;
                                break;
                            }
                            _ => {
                                return Err(Error::Serial(format!(
                                    "expected ',' or '}}' at byte {}",
                                    self.i
                                )))
                            }
                        }
                    }
                }
                Ok(EvalTree::Node { binders, head, args, branches })
            }
            other => Err(Error::Serial(format!("unknown tree form '{}'", other))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::denote::Denoter;
    use crate::parse::parse_term;
    use crate::syntax::alpha_eq;

    fn dn(src: &str, w: u32) -> Strategy {
        Denoter::new(w, 16)
            .denote_closed(&parse_term(src).unwrap())
            .unwrap()
    }

    fn ty_of(src: &str) -> Ty {
        typecheck(&Ctx::empty(), &parse_term(src).unwrap()).unwrap()
    }

    fn leaf(v: u32) -> EvalTree {
        EvalTree::Leaf { binders: vec![], value: v }
    }

    #[test]
    fn bottom_under_binder_is_bottom() {
        let t = tree_of_strategy(&dn("\\x:nat. omega", 3), 8).unwrap();
        assert_eq!(t, EvalTree::Bottom);
    }

    #[test]
    fn constant_under_binder_is_leaf() {
        let t = tree_of_strategy(&dn("\\x:nat. 5", 6), 8).unwrap();
        assert_eq!(
            t,
            EvalTree::Leaf {
                binders: vec![("x1".into(), Ty::Nat)],
                value: 5
            }
        );
    }

    #[test]
    fn case_on_the_binder_is_a_node() {
        let t = tree_of_strategy(&dn("\\x:nat. case[2] x 1 0", 3), 8).unwrap();
        assert_eq!(
            t,
            EvalTree::Node {
                binders: vec![("x1".into(), Ty::Nat)],
                head: 1,
                args: vec![],
                branches: BTreeMap::from([(0, leaf(1)), (1, leaf(0))]),
            }
        );
    }

    #[test]
    fn depth_bound_leaves_a_cut() {
        let t = tree_of_strategy(&dn("\\x:nat. case[2] x 1 0", 3), 0).unwrap();
        assert_eq!(t, EvalTree::Cut);
        assert!(!t.is_complete());
    }

    #[test]
    fn strategy_tree_round_trip() {
        let w = 3;
        for src in [
            "\\x:nat. omega",
            "\\x:nat. 2",
            "\\x:nat. x",
            "\\x:nat. case[2] x 1 0",
            "\\f:nat -> nat. f (f 0)",
            "\\f:(nat -> nat) -> nat. f (\\x:nat. case[2] x 0 2)",
            "\\x:nat. \\y:nat. case[1] x y",
        ] {
            let d = dn(src, w);
            let t = tree_of_strategy(&d, 16).unwrap();
            assert!(t.is_complete(), "{}", src);
            let s2 = strategy_of_tree(&t, &ty_of(src), w).unwrap();
            assert_eq!(s2, d, "{}", src);
        }
    }

    #[test]
    fn term_oracle_agrees_with_the_model() {
        let w = 3;
        for src in [
            "\\x:nat. omega",
            "\\x:nat. 2",
            "\\x:nat. x",
            "\\x:nat. case[2] x 1 0",
            "\\f:nat -> nat. f (f 0)",
            "\\f:(nat -> nat) -> nat. f (\\x:nat. case[2] x 0 2)",
            "(\\y:nat. \\x:nat. case[1] x y) 2",
            "\\x:nat. \\y:nat. case[1] x y",
        ] {
            let m = parse_term(src).unwrap();
            let from_term = tree_of_term(&m, 8, w, DEFAULT_TREE_BUDGET).unwrap();
            let from_model = tree_of_strategy(&dn(src, w), 8).unwrap();
            assert_eq!(from_term, from_model, "{}", src);
        }
    }

    #[test]
    fn fixpoint_tree_unfolds_once() {
        let src = "Y[nat -> nat] (\\f:nat -> nat. \\x:nat. case[1] x 0)";
        let want = EvalTree::Node {
            binders: vec![("x1".into(), Ty::Nat)],
            head: 1,
            args: vec![],
            branches: BTreeMap::from([(0, leaf(0))]),
        };
        let m = parse_term(src).unwrap();
        assert_eq!(tree_of_term(&m, 3, 3, DEFAULT_TREE_BUDGET).unwrap(), want);
        assert_eq!(tree_of_strategy(&dn(src, 3), 3).unwrap(), want);
    }

    #[test]
    fn looping_term_runs_out_of_budget() {
        let m = parse_term("Y[nat] (\\x:nat. x)").unwrap();
        assert_eq!(tree_of_term(&m, 3, 3, 100).unwrap(), EvalTree::Cut);
    }

    #[test]
    fn approximant_zero_is_bottom() {
        let f = dn("\\x:nat. case[2] x 1 0", 3);
        assert!(approximant(&f, 0).unwrap().is_bot());
    }

    #[test]
    fn approximant_fixes_constants_at_one() {
        let f = dn("\\x:nat. 2", 3);
        assert_eq!(approximant(&f, 1).unwrap(), f);
    }

    #[test]
    fn approximant_stabilizes_at_branch_support() {
        let f = dn("\\x:nat. case[2] x 1 0", 3);
        let p1 = approximant(&f, 1).unwrap();
        assert_ne!(p1, f);
        assert!(p1.included_in(&f));
        assert_eq!(approximant(&f, 2).unwrap(), f);
        assert_eq!(approximant(&f, 3).unwrap(), f);
    }

    #[test]
    fn approximant_chain_refines() {
        let f = dn("\\f:nat -> nat. f (f 0)", 3);
        let mut prev = approximant(&f, 0).unwrap();
        for k in 1..=4 {
            let cur = approximant(&f, k).unwrap();
            assert!(prev.included_in(&cur), "k = {}", k);
            prev = cur;
        }
        assert_eq!(prev, f);
    }

    #[test]
    fn extraction_of_bottom_and_constants() {
        let w = 3;
        let bot = Strategy::bot(Arena::unit(), Arena::of_type(&ty_of("\\x:nat. omega"), w));
        assert!(alpha_eq(
            &extract_term(&bot).unwrap(),
            &parse_term("\\x:nat. omega").unwrap()
        ));
        assert!(alpha_eq(
            &extract_term(&dn("\\x:nat. 2", w)).unwrap(),
            &parse_term("\\x:nat. 2").unwrap()
        ));
        assert!(alpha_eq(
            &extract_term(&dn("\\x:nat. case[2] x 1 0", w)).unwrap(),
            &parse_term("\\x:nat. case[2] x 1 0").unwrap()
        ));
    }

    #[test]
    fn extraction_round_trips_through_denotation() {
        let w = 3;
        for src in [
            "\\x:nat. x",
            "\\f:nat -> nat. f (f 0)",
            "\\f:(nat -> nat) -> nat. f (\\x:nat. case[2] x 0 2)",
            "\\x:nat. \\y:nat. case[1] x y",
            "Y[nat -> nat] (\\f:nat -> nat. \\x:nat. case[1] x 0)",
        ] {
            let d = dn(src, w);
            let m2 = extract_term(&d).unwrap();
            assert_eq!(dn(&m2.to_string(), w), d, "{} -> {}", src, m2);
        }
    }

    #[test]
    fn truncated_extraction_matches_the_approximant() {
        let w = 3;
        let f = dn("\\f:nat -> nat. f (f 0)", w);
        for k in 0..=4 {
            let m = extract_term_pk(&f, k).unwrap();
            assert_eq!(
                dn(&m.to_string(), w),
                approximant(&f, k).unwrap(),
                "k = {}",
                k
            );
        }
    }

    #[test]
    fn tree_text_round_trips() {
        let w = 3;
        for src in [
            "\\x:nat. omega",
            "\\x:nat. 2",
            "\\f:(nat -> nat) -> nat. f (\\x:nat. case[2] x 0 2)",
            "\\x:nat. \\y:nat. case[1] x y",
        ] {
            let t = tree_of_strategy(&dn(src, w), 16).unwrap();
            let text = t.to_string();
            assert_eq!(parse_tree(&text).unwrap(), t, "{}", text);
        }
        assert_eq!(parse_tree("cut").unwrap(), EvalTree::Cut);
    }
}
