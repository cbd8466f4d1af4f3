//! Structural morphisms: copycats (identity, projections), pairing, the
//! diagonal, weakening, evaluation, currying, and the flat-case mediator.
//!
//! Promotion is invisible here: a morphism already is its own promotion,
//! because objects elide the bang and view functions answer uniformly in
//! every thread. Currying and evaluation are likewise (almost) invisible:
//! grafting makes the arenas of `Gamma x A -> B` and `Gamma -> (A => B)`
//! literally equal, so both are `resplit`s of the same strategy.

use crate::arena::{Arena, Move, MoveKind};
use crate::compose::{compose, DEFAULT_ENTRY_BUDGET};
use crate::error::{Error, Result};
use crate::strategy::{materialize, Strategy, View};

/// Copycat projection `pi_i : A_1 x ... x A_k -> A_i`.
pub fn proj(parts: &[Arena], i: usize) -> Result<Strategy> {
    let cod = parts
        .get(i)
        .cloned()
        .ok_or_else(|| Error::ShapeMismatch(format!("no component {} to project", i)))?;
    let dom = Arena::product(parts.iter().cloned());
    let n = dom.n_roots();
    let off: usize = parts[..i].iter().map(|p| p.n_roots()).sum();
    let mut oracle = |probe: &View| -> Result<Option<(Move, usize)>> {
        let (m, _) = probe.last().expect("probes are nonempty");
        if probe.len() == 1 {
            // open the mirrored thread in component i
            let r = m.path[0];
            return Ok(Some((Move::question(vec![r, off as u16 + r]), 0)));
        }
        let r0 = probe[0].0.path[0];
        Ok(Some((mirror(m, r0, off as u16, n), probe.len() - 3)))
    };
    materialize(dom, cod, &mut oracle, DEFAULT_ENTRY_BUDGET)
}

/// The copycat bijection between the cod copy and the `off`-based dom copy
/// in `graft(dom, cod)`; `n` is the number of dom roots.
fn mirror(m: &Move, r0: u16, off: u16, n: usize) -> Move {
    if m.path.len() >= 2 && (m.path[1] as usize) < n {
        // dom side [r0, off+a, rest..] -> cod side [a, n+rest0, rest1..]
        let mut p = vec![m.path[1] - off];
        if m.path.len() > 2 {
            p.push(m.path[2] + n as u16);
            p.extend_from_slice(&m.path[3..]);
        }
        Move { path: p, kind: m.kind }
    } else {
        // cod side [r, rest..] -> dom side [r0, off+r, rest0-n, rest1..]
        let mut p = vec![r0, off + m.path[0]];
        if m.path.len() > 1 {
            p.push(m.path[1] - n as u16);
            p.extend_from_slice(&m.path[2..]);
        }
        Move { path: p, kind: m.kind }
    }
}

/// The identity copycat on `a`, equally the dereliction of the implicit
/// bang.
pub fn identity(a: &Arena) -> Result<Strategy> {
    proj(std::slice::from_ref(a), 0)
}

/// The unique morphism `a -> 1`.
pub fn terminal(a: &Arena) -> Strategy {
    Strategy::bot(a.clone(), Arena::unit())
}

/// Dereliction `!a -> a`: the identity copycat, since objects carry their
/// bang implicitly.
pub fn der(a: &Arena) -> Result<Strategy> {
    identity(a)
}

/// Promotion `!a -> !b` of `f : !a -> b`: the representation identity —
/// a view function already answers uniformly in every thread.
pub fn promote(f: &Strategy) -> Strategy {
    f.clone()
}

/// `<f, g> : C -> A x B`: the union of the two view functions, with the
/// cod roots of `g` shifted past those of `f`.
pub fn pair(f: &Strategy, g: &Strategy) -> Result<Strategy> {
    if f.dom() != g.dom() {
        return Err(Error::ArenaMismatch("pairing needs a common domain".into()));
    }
    let an = f.cod().n_roots() as u16;
    let cod = Arena::product([f.cod().clone(), g.cod().clone()]);
    let mut out = Strategy::bot(f.dom().clone(), cod);
    for (k, (m, j)) in f.entries() {
        out.insert(k.clone(), (m.clone(), *j))?;
    }
    // every move of g sits under some cod root of g, so shifting the head
    // coordinate relocates dom moves and cod moves alike
    let shift = |m: &Move| {
        let mut p = m.path.clone();
        p[0] += an;
        Move { path: p, kind: m.kind }
    };
    for (k, (m, j)) in g.entries() {
        let key: View = k.iter().map(|(mm, jj)| (shift(mm), *jj)).collect();
        out.insert(key, (shift(m), *j))?;
    }
    Ok(out)
}

/// Right-nested tupling; the empty tuple is the terminal morphism.
pub fn pair_n(dom: &Arena, fs: &[Strategy]) -> Result<Strategy> {
    match fs.split_first() {
        None => Ok(terminal(dom)),
        Some((f, [])) => Ok(f.clone()),
        Some((f, rest)) => pair(f, &pair_n(dom, rest)?),
    }
}

/// The diagonal (contraction) `a -> a x a`.
pub fn diagonal(a: &Arena) -> Result<Strategy> {
    let id = identity(a)?;
    pair(&id, &id)
}

/// `Lambda(f)`: reading `f : Gamma x A -> B` as `Gamma -> (A => B)`.
/// Pure re-bracketing: the grafted arenas coincide when `A` is the last
/// component of the domain product.
pub fn curry(f: &Strategy, gamma: Arena, a: &Arena) -> Result<Strategy> {
    let cod = Arena::graft(a, f.cod());
    f.resplit(gamma, cod)
}

/// Inverse re-bracketing: reading `f : Gamma -> (A => B)` as
/// `Gamma x A -> B`.
pub fn uncurry(f: &Strategy, a: &Arena, b: &Arena) -> Result<Strategy> {
    let dom = Arena::product([f.dom().clone(), a.clone()]);
    f.resplit(dom, b.clone())
}

/// Evaluation `(A => B) x A -> B`: the identity copycat on `graft(A, B)`,
/// re-bracketed.
pub fn ev(a: &Arena, b: &Arena) -> Result<Strategy> {
    let x = Arena::graft(a, b);
    let id = identity(&x)?;
    id.resplit(Arena::product([x, a.clone()]), b.clone())
}

/// Reads a closed strategy in an arbitrary context by shifting its cod
/// children past the context roots.
pub fn weaken_closed(s: &Strategy, ctx: &Arena) -> Result<Strategy> {
    if s.dom().n_roots() != 0 {
        return Err(Error::ShapeMismatch(
            "only closed strategies can be weakened this way".into(),
        ));
    }
    let n = ctx.n_roots() as u16;
    s.translate(ctx.clone(), s.cod().clone(), |m| {
        if m.path.len() == 1 {
            m.clone()
        } else {
            let mut p = m.path.clone();
            p[1] += n;
            Move { path: p, kind: m.kind }
        }
    })
}

/// The mediator of a family of branches `f_x : Gamma -> B`, one per point
/// of the window: the strategy `N x Gamma -> B` that interrogates the flat
/// component and then behaves as the selected branch.
pub fn mediate(branches: &[Strategy], window: u32) -> Result<Strategy> {
    if branches.len() != window as usize {
        return Err(Error::ShapeMismatch(format!(
            "mediator needs {} branches, got {}",
            window,
            branches.len()
        )));
    }
    let gamma = branches[0].dom().clone();
    let b = branches[0].cod().clone();
    for f in branches {
        if f.dom() != &gamma || f.cod() != &b {
            return Err(Error::ArenaMismatch(
                "mediator branches must share dom and cod".into(),
            ));
        }
    }
    let dom = Arena::product([Arena::flat(window), gamma]);
    // branch moves are re-addressed by sliding past the flat component
    let outward = |m: &Move| {
        if m.path.len() == 1 {
            m.clone()
        } else {
            let mut p = m.path.clone();
            p[1] += 1;
            Move { path: p, kind: m.kind }
        }
    };
    let inward = |m: &Move| {
        if m.path.len() == 1 {
            m.clone()
        } else {
            let mut p = m.path.clone();
            p[1] -= 1;
            Move { path: p, kind: m.kind }
        }
    };
    let mut oracle = |probe: &View| -> Result<Option<(Move, usize)>> {
        if probe.len() == 1 {
            let r = probe[0].0.path[0];
            return Ok(Some((Move::question(vec![r, 0]), 0)));
        }
        // positions 1 and 2 hold the flat interrogation and its answer
        let x = match probe[2].0.kind {
            MoveKind::Answer(v) => v,
            _ => {
                return Err(Error::Other(
                    "flat component yielded a non-answer".into(),
                ))
            }
        };
        let bx = &branches[x as usize];
        let mut inner: View = vec![(probe[0].0.clone(), None)];
        for (m, j) in &probe[3..] {
            let jj = match j {
                Some(0) => Some(0),
                Some(j) if *j >= 3 => Some(*j - 2),
                _ => {
                    return Err(Error::Other(
                        "branch move justified by the flat component".into(),
                    ))
                }
            };
            inner.push((inward(m), jj));
        }
        match bx.respond(&inner) {
            None => Ok(None),
            Some((m, j)) => {
                let jj = if *j == 0 { 0 } else { *j + 2 };
                Ok(Some((outward(m), jj)))
            }
        }
    };
    materialize(dom, b, &mut oracle, DEFAULT_ENTRY_BUDGET)
}

/// The strategy of the `case[k]` branching constant at a given window:
/// `N x N^k -> N`, diverging on scrutinees at or past `k`.
pub fn case_strategy(k: u32, window: u32) -> Result<Strategy> {
    let flat = Arena::flat(window);
    let parts: Vec<Arena> = std::iter::repeat(flat.clone()).take(k as usize).collect();
    let dom = Arena::product(parts.iter().cloned());
    let mut branches = Vec::with_capacity(window as usize);
    for i in 0..window {
        if i < k {
            branches.push(proj(&parts, i as usize)?);
        } else {
            branches.push(Strategy::bot(dom.clone(), flat.clone()));
        }
    }
    mediate(&branches, window)
}

/// Composite sanity helper: applies a closed function strategy to closed
/// arguments through `ev` and pairing.
pub fn apply_closed(f: &Strategy, x: &Strategy) -> Result<Strategy> {
    // f : 1 -> (A => B), x : 1 -> A
    let a = x.cod().clone();
    let fx = f.cod().clone();
    let b = strip_dom(&fx, &a)?;
    let e = ev(&a, &b)?;
    compose(&e, &pair(f, x)?)
}

/// Recovers `B` from the arena of `A => B`.
fn strip_dom(fx: &Arena, a: &Arena) -> Result<Arena> {
    let n = a.n_roots();
    let roots = fx
        .roots
        .iter()
        .map(|r| {
            if r.children.len() < n || r.children[..n] != a.roots[..] {
                return Err(Error::ArenaMismatch(
                    "function arena does not start with the argument arena".into(),
                ));
            }
            Ok(crate::arena::Node {
                answers: r.answers,
                children: r.children[n..].to_vec(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Arena { roots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::Strategy;

    #[test]
    fn identity_on_flat() {
        let id = identity(&Arena::flat(2)).unwrap();
        // ask the copy, then echo each answer: 1 + window entries
        assert_eq!(id.norm(), 3);
        id.validate().unwrap();
    }

    #[test]
    fn projections_undo_pairing() {
        let w = 3;
        let p0 = Strategy::point(0, w).unwrap();
        let p2 = Strategy::point(2, w).unwrap();
        let paired = pair(&p0, &p2).unwrap();
        let parts = [Arena::flat(w), Arena::flat(w)];
        let q0 = compose(&proj(&parts, 0).unwrap(), &paired).unwrap();
        let q1 = compose(&proj(&parts, 1).unwrap(), &paired).unwrap();
        assert_eq!(q0, p0);
        assert_eq!(q1, p2);
    }

    #[test]
    fn ev_applies_named_identity() {
        let w = 3;
        let flat = Arena::flat(w);
        let id = identity(&flat).unwrap();
        // name the identity: 1 -> (N => N)
        let named = curry(&id, Arena::unit(), &flat).unwrap();
        let out = apply_closed(&named, &Strategy::point(1, w).unwrap()).unwrap();
        assert_eq!(out, Strategy::point(1, w).unwrap());
    }

    #[test]
    fn case_selects_branch() {
        let w = 3;
        let k = 2;
        let case = case_strategy(k, w).unwrap();
        let u = Arena::unit();
        let args = pair_n(
            &u,
            &[
                Strategy::point(1, w).unwrap(), // scrutinee
                Strategy::point(2, w).unwrap(), // branch 0
                Strategy::point(0, w).unwrap(), // branch 1
            ],
        )
        .unwrap();
        let out = compose(&case, &args).unwrap();
        assert_eq!(out, Strategy::point(0, w).unwrap());
    }

    #[test]
    fn case_stuck_past_arity() {
        let w = 4;
        let case = case_strategy(2, w).unwrap();
        let u = Arena::unit();
        let args = pair_n(
            &u,
            &[
                Strategy::point(3, w).unwrap(), // out of the case's range
                Strategy::point(0, w).unwrap(),
                Strategy::point(1, w).unwrap(),
            ],
        )
        .unwrap();
        let out = compose(&case, &args).unwrap();
        assert!(out.is_bot());
    }

    #[test]
    fn composition_associates() {
        let w = 3;
        let flat = Arena::flat(w);
        let id = identity(&flat).unwrap();
        let c = Strategy::constant(flat.clone(), 1, w).unwrap();
        let p = Strategy::point(2, w).unwrap();
        let left = compose(&compose(&id, &c).unwrap(), &p).unwrap();
        let right = compose(&id, &compose(&c, &p).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn diagonal_then_projection_is_identity() {
        let w = 2;
        let flat = Arena::flat(w);
        let d = diagonal(&flat).unwrap();
        let parts = [flat.clone(), flat.clone()];
        for i in 0..2 {
            let comp = compose(&proj(&parts, i).unwrap(), &d).unwrap();
            assert_eq!(comp, identity(&flat).unwrap());
        }
    }

    #[test]
    fn weakening_ignores_context() {
        let w = 3;
        let p = Strategy::point(1, w).unwrap();
        let ctx = Arena::product([Arena::flat(w), Arena::flat(w)]);
        let weak = weaken_closed(&p, &ctx).unwrap();
        assert_eq!(weak.dom(), &ctx);
        // composing with anything closed gives the point back
        let args = pair_n(
            &Arena::unit(),
            &[Strategy::point(0, w).unwrap(), Strategy::point(2, w).unwrap()],
        )
        .unwrap();
        assert_eq!(compose(&weak, &args).unwrap(), p);
    }
}
