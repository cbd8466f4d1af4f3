//! Composition of strategies by parallel interaction plus hiding.
//!
//! To compose `f : A -> B` with `g : B -> C` we materialize the composite's
//! view function directly: each probed view of `graft(A, C)` is replayed as
//! an interaction sequence in which the environment contributes the probe's
//! O-moves, `g` answers moves in B and C, and `f` answers moves in A and B.
//! Moves in B are hidden; justification pointers of visible moves are
//! recovered by chasing through the hidden part.
//!
//! Because objects carry an implicit bang, `g` may open any number of
//! threads in B; innocence lets the view function of `f` answer in every
//! thread without an explicit promotion step.

use crate::arena::{Move, MoveKind};
use crate::error::{Error, Result};
use crate::strategy::{materialize, Strategy, View};

/// Interaction steps allowed while answering a single probe.
pub const DEFAULT_STEP_BUDGET: usize = 100_000;

/// View-function entries allowed in a composite.
pub const DEFAULT_ENTRY_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Comp {
    A,
    B,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Player {
    Env,
    F,
    G,
}

/// One move of the interaction sequence, in the bare coordinates of its
/// component arena.
struct UMove {
    comp: Comp,
    path: Vec<u16>,
    kind: MoveKind,
    just: Option<usize>,
}

/// `g . f` with default budgets.
pub fn compose(g: &Strategy, f: &Strategy) -> Result<Strategy> {
    compose_with(g, f, DEFAULT_STEP_BUDGET, DEFAULT_ENTRY_BUDGET)
}

pub fn compose_with(
    g: &Strategy,
    f: &Strategy,
    step_budget: usize,
    entry_budget: usize,
) -> Result<Strategy> {
    if f.cod() != g.dom() {
        return Err(Error::ArenaMismatch(
            "composition requires cod(f) = dom(g)".into(),
        ));
    }
    let an = f.dom().n_roots();
    let bn = f.cod().n_roots();
    let a = f.dom().clone();
    let c = g.cod().clone();
    materialize(
        a,
        c,
        &mut |probe| run_interaction(f, g, an, bn, probe, step_budget),
        entry_budget,
    )
}

/// Splits a move of `graft(D, E)` into dom/cod component and bare path,
/// where `n_dom` is the number of roots of `D`.
fn split(m: &Move, n_dom: usize) -> (bool, Vec<u16>) {
    if m.path.len() >= 2 && (m.path[1] as usize) < n_dom {
        (true, m.path[1..].to_vec())
    } else if m.path.len() == 1 {
        (false, m.path.clone())
    } else {
        let mut p = vec![m.path[0], m.path[1] - n_dom as u16];
        p.extend_from_slice(&m.path[2..]);
        (false, p)
    }
}

/// Inverse of `split`: re-addresses a bare component path inside
/// `graft(D, E)`. Dom moves hang under the thread's initial move.
fn join(is_dom: bool, bare: &[u16], thread: u16, n_dom: usize) -> Vec<u16> {
    if is_dom {
        let mut p = vec![thread];
        p.extend_from_slice(bare);
        p
    } else if bare.len() == 1 {
        bare.to_vec()
    } else {
        let mut p = vec![bare[0], bare[1] + n_dom as u16];
        p.extend_from_slice(&bare[2..]);
        p
    }
}

/// The P-view of the interaction as seen by `who` (`F` plays on
/// `graft(A, B)`, `G` on `graft(B, C)`), starting from the last move of
/// `u`, which must be an O-move for `who`. Returns the view in `who`'s own
/// arena coordinates together with the interaction positions of its moves.
fn sigma_view(
    u: &[UMove],
    who: Player,
    an: usize,
    bn: usize,
) -> Result<(View, Vec<usize>)> {
    let mine = |m: &UMove| match who {
        Player::F => m.comp != Comp::C,
        Player::G => m.comp != Comp::A,
        Player::Env => unreachable!(),
    };
    let init_comp = if who == Player::F { Comp::B } else { Comp::C };
    let bad = |msg: &str| Error::Other(format!("interaction view: {}", msg));
    let mut rev: Vec<usize> = Vec::new();
    let mut i = u.len() - 1;
    loop {
        let m = &u[i];
        rev.push(i);
        if m.comp == init_comp && m.path.len() == 1 && m.kind == MoveKind::Question {
            break;
        }
        let k = m.just.ok_or_else(|| bad("non-initial move without justifier"))?;
        rev.push(k);
        if k == 0 {
            return Err(bad("ran past the opening move"));
        }
        let mut p = k - 1;
        while !mine(&u[p]) {
            if p == 0 {
                return Err(bad("no preceding own move"));
            }
            p -= 1;
        }
        i = p;
    }
    rev.reverse();
    let thread = u[rev[0]].path[0];
    let n_dom = if who == Player::F { an } else { bn };
    let dom_comp = if who == Player::F { Comp::A } else { Comp::B };
    let mut view: View = Vec::with_capacity(rev.len());
    for (vi, &ui) in rev.iter().enumerate() {
        let um = &u[ui];
        let path = join(um.comp == dom_comp, &um.path, thread, n_dom);
        let mv = Move { path, kind: um.kind };
        let just = if vi == 0 {
            None
        } else if vi % 2 == 0 {
            Some(vi - 1)
        } else {
            let ju = um.just.ok_or_else(|| bad("P-move without justifier"))?;
            Some(
                rev.iter()
                    .position(|&x| x == ju)
                    .ok_or_else(|| bad("justifier escaped the view"))?,
            )
        };
        view.push((mv, just));
    }
    Ok((view, rev))
}

/// Re-addresses the external move at `pos` in `graft(A, C)` coordinates and
/// resolves its visible justifier by chasing pointers through B.
fn external_response(
    u: &[UMove],
    ext: &[usize],
    pos: usize,
    an: usize,
    c0: u16,
) -> Result<(Move, usize)> {
    let um = &u[pos];
    let path = join(um.comp == Comp::A, &um.path, c0, an);
    let mut j = um
        .just
        .ok_or_else(|| Error::Other("external response without justifier".into()))?;
    while u[j].comp == Comp::B {
        j = u[j]
            .just
            .ok_or_else(|| Error::Other("hidden justifier chain broke".into()))?;
    }
    let idx = ext
        .iter()
        .position(|&p| p == j)
        .ok_or_else(|| Error::Other("justifier not visible after hiding".into()))?;
    Ok((Move { path, kind: um.kind }, idx))
}

fn run_interaction(
    f: &Strategy,
    g: &Strategy,
    an: usize,
    bn: usize,
    probe: &View,
    budget: usize,
) -> Result<Option<(Move, usize)>> {
    let mut u: Vec<UMove> = Vec::new();
    let mut ext: Vec<usize> = Vec::new();
    let c0 = probe[0].0.path[0];
    let mut pi = 0usize;
    let mut turn = Player::Env;
    for _ in 0..budget {
        match turn {
            Player::Env => {
                // replay the next probed O-move
                let (m, _) = &probe[pi];
                let (is_dom, bare) = split(m, an);
                let comp = if is_dom { Comp::A } else { Comp::C };
                let just = if pi == 0 { None } else { Some(*ext.last().unwrap()) };
                u.push(UMove { comp, path: bare, kind: m.kind, just });
                ext.push(u.len() - 1);
                pi += 1;
                turn = if comp == Comp::A { Player::F } else { Player::G };
            }
            who => {
                let (sigma, n_dom) = if who == Player::F { (f, an) } else { (g, bn) };
                let (view, upos) = sigma_view(&u, who, an, bn)?;
                let (rm, rj) = match sigma.respond(&view) {
                    None => return Ok(None),
                    Some(r) => r.clone(),
                };
                let (is_dom, bare) = split(&rm, n_dom);
                let comp = match (who, is_dom) {
                    (Player::F, true) => Comp::A,
                    (Player::F, false) => Comp::B,
                    (Player::G, true) => Comp::B,
                    (Player::G, false) => Comp::C,
                    _ => unreachable!(),
                };
                u.push(UMove {
                    comp,
                    path: bare,
                    kind: rm.kind,
                    just: Some(upos[rj]),
                });
                let pos = u.len() - 1;
                if comp == Comp::B {
                    turn = if who == Player::F { Player::G } else { Player::F };
                } else {
                    let resp = external_response(&u, &ext, pos, an, c0)?;
                    if pi == probe.len() {
                        return Ok(Some(resp));
                    }
                    // mid-probe visible moves must replay the probe exactly
                    let (em, ej) = &probe[pi];
                    if *em != resp.0 || *ej != Some(resp.1) {
                        return Err(Error::Other(
                            "interaction deviated from the probed view".into(),
                        ));
                    }
                    ext.push(pos);
                    pi += 1;
                    turn = Player::Env;
                }
            }
        }
    }
    Err(Error::InteractionBudget(budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::Arena;

    #[test]
    fn constant_absorbs_bottom() {
        let w = 3;
        let flat = Arena::flat(w);
        let c = Strategy::constant(flat.clone(), 2, w).unwrap();
        let bot = Strategy::bot(Arena::unit(), flat.clone());
        let h = compose(&c, &bot).unwrap();
        assert_eq!(h, Strategy::point(2, w).unwrap());
    }

    #[test]
    fn composing_through_bottom_is_bottom() {
        // a strict g (the identity copycat) composed with bottom is bottom
        let w = 2;
        let flat = Arena::flat(w);
        let id = crate::structural::identity(&flat).unwrap();
        let bot = Strategy::bot(Arena::unit(), flat.clone());
        let h = compose(&id, &bot).unwrap();
        assert!(h.is_bot());
    }

    #[test]
    fn identity_is_neutral() {
        let w = 3;
        let flat = Arena::flat(w);
        let id = crate::structural::identity(&flat).unwrap();
        let p = Strategy::point(1, w).unwrap();
        assert_eq!(compose(&id, &p).unwrap(), p);
        let id_unit = crate::structural::identity(&Arena::unit()).unwrap();
        assert_eq!(compose(&p, &id_unit).unwrap(), p);
    }
}
