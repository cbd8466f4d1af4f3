//! Decomposition of canonical strategies and its inverse.
//!
//! A compact strategy `f : A_1 x ... x A_k -> N`, with each `A_i` of shape
//! `(B_1 x ... x B_q) => N'`, is exactly one of: bottom; a constant; or a
//! head interrogation of a unique component `i`, together with argument
//! strategies `g_j` (what `f` feeds the head's parameters) and finitely
//! many continuation branches `h_x` (how `f` goes on after the head
//! answers `x`).
//!
//! `decompose` reads these components directly off the view function:
//! every view of length >= 3 is pinned, by the shape of views, to either
//! one argument thread or one continuation, so the entries partition
//! cleanly and the components are one-two-line re-addressings.
//! `recompose` rebuilds the strategy from the components using only the
//! structural morphisms (projection, pairing, evaluation, the mediator),
//! which is what makes the round-trip a meaningful check.

use std::collections::BTreeMap;

use crate::arena::{Arena, Move, MoveKind};
use crate::compose::compose;
use crate::error::{Error, Result};
use crate::strategy::{Strategy, View};
use crate::structural::{ev, identity, mediate, pair, pair_n, proj};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decomposition {
    Bot,
    Const(u32),
    Total {
        /// Index of the interrogated head component (0-based).
        head: usize,
        /// `args[j] : Prod A -> B_{head,j}`.
        args: Vec<Strategy>,
        /// Sparse continuations `branches[x] : Prod A -> N`; absent means
        /// bottom.
        branches: BTreeMap<u32, Strategy>,
    },
}

/// The trichotomy read off without building components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    Bottom,
    Constant(u32),
    StrictTotal { head: usize },
}

fn initial_key() -> View {
    vec![(Move::question(vec![0]), None)]
}

/// Strictness and totality, read off the first response: strict iff the
/// first response (if any) is a domain move, total iff strict and the view
/// function is nonempty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrictTotal {
    pub strict: bool,
    pub total: bool,
}

pub fn strict_total(f: &Strategy) -> Result<StrictTotal> {
    if f.cod().n_roots() != 1 {
        return Err(Error::ShapeMismatch(
            "strictness needs a unique initial question".into(),
        ));
    }
    if f.is_bot() {
        return Ok(StrictTotal { strict: true, total: false });
    }
    match f.respond(&initial_key()) {
        None => Err(Error::IllFormedStrategy(
            "nonempty strategy with no opening response".into(),
        )),
        Some((m, _)) => {
            let strict = f.is_dom_move(m);
            Ok(StrictTotal { strict, total: strict })
        }
    }
}

/// Checks `f` has the canonical shape: a flat codomain and a single-rooted
/// arena per domain component.
fn check_canonical(f: &Strategy) -> Result<()> {
    let cod = f.cod();
    if cod.n_roots() != 1 || !cod.roots[0].children.is_empty() {
        return Err(Error::ShapeMismatch(
            "decomposition expects a flat codomain".into(),
        ));
    }
    Ok(())
}

pub fn classify(f: &Strategy) -> Result<Class> {
    check_canonical(f)?;
    if f.is_bot() {
        return Ok(Class::Bottom);
    }
    match f.respond(&initial_key()) {
        None => Err(Error::IllFormedStrategy(
            "nonempty strategy with no opening response".into(),
        )),
        Some((m, _)) => match m.kind {
            MoveKind::Answer(x) => Ok(Class::Constant(x)),
            MoveKind::Question => {
                let i = m.path[1] as usize;
                if m.path.len() != 2 || i >= f.dom().n_roots() {
                    return Err(Error::IllFormedStrategy(
                        "opening response outside the domain".into(),
                    ));
                }
                Ok(Class::StrictTotal { head: i })
            }
        },
    }
}

/// Remaps a justifier index across dropping the first `3` positions of a
/// key whose position 2 becomes the new initial move.
fn shift_justifier(j: usize) -> Result<usize> {
    match j {
        0 | 2 => Ok(0),
        j if j >= 3 => Ok(j - 2),
        _ => Err(Error::IllFormedStrategy(
            "move justified by the stripped head interrogation".into(),
        )),
    }
}

pub fn decompose(f: &Strategy) -> Result<Decomposition> {
    match classify(f)? {
        Class::Bottom => Ok(Decomposition::Bot),
        Class::Constant(x) => {
            if f.norm() != 1 {
                return Err(Error::IllFormedStrategy(
                    "constant strategy with unreachable entries".into(),
                ));
            }
            Ok(Decomposition::Const(x))
        }
        Class::StrictTotal { head } => decompose_total(f, head),
    }
}

fn decompose_total(f: &Strategy, head: usize) -> Result<Decomposition> {
    let dom = f.dom().clone();
    let n = dom.n_roots() as u16;
    let head_node = &dom.roots[head];
    let q = head_node.children.len();
    let window = f.cod().roots[0].answers;

    let mut args: Vec<Strategy> = (0..q)
        .map(|j| {
            Strategy::bot(
                dom.clone(),
                Arena { roots: vec![head_node.children[j].clone()] },
            )
        })
        .collect();
    let mut branches: BTreeMap<u32, Strategy> = BTreeMap::new();

    // re-addressing for argument strategies: the head's argument subtree
    // becomes the codomain, sliding its children past the domain roots
    let arg_path = |p: &[u16]| -> Vec<u16> {
        if p.len() == 3 {
            vec![0]
        } else {
            let mut out = vec![0, n + p[3]];
            out.extend_from_slice(&p[4..]);
            out
        }
    };

    let mut count = 1usize; // the opening entry
    for (key, resp) in f.entries() {
        if key.len() < 3 {
            continue;
        }
        count += 1;
        let (m2, j2) = &key[2];
        if *j2 != Some(1) {
            return Err(Error::IllFormedStrategy(
                "third move not justified by the head interrogation".into(),
            ));
        }
        match m2.kind {
            MoveKind::Question => {
                // argument thread: position 2 is q at [0, head, j]. Later
                // moves split between the stripped head thread (justifier
                // chains passing through position 2) and fresh domain
                // interrogations, which may revisit the head component
                // under the very same paths — only ancestry tells them
                // apart.
                let j = m2.path[2] as usize;
                let mut ext: Vec<(&Move, usize)> = Vec::with_capacity(key.len() - 1);
                for (m, jj) in &key[1..] {
                    let jj = jj.ok_or_else(|| {
                        Error::IllFormedStrategy("non-initial move unjustified".into())
                    })?;
                    ext.push((m, jj));
                }
                ext.push((&resp.0, resp.1));
                // in_head[p] for position p+1 of the extended key
                let mut in_head = vec![false; ext.len()];
                in_head[0] = true;
                in_head[1] = true;
                for p in 2..ext.len() {
                    let jj = ext[p].1;
                    in_head[p] = jj >= 1 && in_head[jj - 1];
                }
                let translate = |p: usize| -> Result<(Move, usize)> {
                    let (m, jj) = ext[p];
                    let path = if in_head[p] {
                        arg_path(&m.path)
                    } else {
                        m.path.clone()
                    };
                    Ok((Move { path, kind: m.kind }, shift_justifier(jj)?))
                };
                let mut new_key = initial_key();
                for p in 2..ext.len() - 1 {
                    let (m, jj) = translate(p)?;
                    new_key.push((m, Some(jj)));
                }
                let new_resp = translate(ext.len() - 1)?;
                args[j].insert(new_key, new_resp)?;
            }
            MoveKind::Answer(x) => {
                // continuation branch: strip the three-move prefix; the
                // remaining moves never revisit the head subtree, so the
                // paths carry over unchanged
                let h = branches.entry(x).or_insert_with(|| {
                    Strategy::bot(dom.clone(), Arena::flat(window))
                });
                let mut new_key = initial_key();
                for (m, jj) in &key[3..] {
                    let jj = jj.ok_or_else(|| {
                        Error::IllFormedStrategy("non-initial move unjustified".into())
                    })?;
                    new_key.push((m.clone(), Some(shift_justifier(jj)?)));
                }
                h.insert(new_key, (resp.0.clone(), shift_justifier(resp.1)?))?;
            }
        }
    }

    if count != f.norm() {
        return Err(Error::IllFormedStrategy(
            "entries outside the head partition".into(),
        ));
    }
    let total: usize = 1
        + args.iter().map(|g| g.norm()).sum::<usize>()
        + branches.values().map(|h| h.norm()).sum::<usize>();
    if total != f.norm() {
        return Err(Error::NormDescent { child: total, parent: f.norm() });
    }
    Ok(Decomposition::Total { head, args, branches })
}

/// Rebuilds a canonical strategy from its decomposition using structural
/// morphisms only.
pub fn recompose(d: &Decomposition, dom: &Arena, window: u32) -> Result<Strategy> {
    match d {
        Decomposition::Bot => Ok(Strategy::bot(dom.clone(), Arena::flat(window))),
        Decomposition::Const(x) => Strategy::constant(dom.clone(), *x, window),
        Decomposition::Total { head, args, branches } => {
            let parts: Vec<Arena> = dom
                .roots
                .iter()
                .map(|r| Arena { roots: vec![r.clone()] })
                .collect();
            let head_node = dom.roots.get(*head).ok_or_else(|| {
                Error::ShapeMismatch("head index outside the domain".into())
            })?;
            let a_window = head_node.answers;
            let u_parts: Vec<Arena> = head_node
                .children
                .iter()
                .map(|c| Arena { roots: vec![c.clone()] })
                .collect();
            if args.len() != u_parts.len() {
                return Err(Error::ShapeMismatch(format!(
                    "head takes {} arguments, got {}",
                    u_parts.len(),
                    args.len()
                )));
            }
            let u_prod = Arena::product(u_parts.iter().cloned());
            // interrogate the head with the argument tuple
            let pr = proj(&parts, *head)?;
            let tuple = pair_n(dom, args)?;
            let e = ev(&u_prod, &Arena::flat(a_window))?;
            let m1 = compose(&e, &pair(&pr, &tuple)?)?;
            // then dispatch on its answer
            let full: Vec<Strategy> = (0..a_window)
                .map(|x| {
                    branches
                        .get(&x)
                        .cloned()
                        .unwrap_or_else(|| Strategy::bot(dom.clone(), Arena::flat(window)))
                })
                .collect();
            let med = mediate(&full, a_window)?;
            compose(&med, &pair(&m1, &identity(dom)?)?)
        }
    }
}

impl Decomposition {
    /// Total component norms; `decompose` guarantees this is one less than
    /// the norm of the decomposed strategy.
    pub fn component_norm(&self) -> usize {
        match self {
            Decomposition::Bot | Decomposition::Const(_) => 0,
            Decomposition::Total { args, branches, .. } => {
                args.iter().map(|g| g.norm()).sum::<usize>()
                    + branches.values().map(|h| h.norm()).sum::<usize>()
            }
        }
    }
}
