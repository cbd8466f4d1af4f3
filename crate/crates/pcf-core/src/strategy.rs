//! Compact innocent strategies as finite view functions.
//!
//! A strategy for a morphism `A -> B` plays on the grafted arena
//! `graft(A, B)`. Keys of the view function are P-views: alternating
//! justified sequences in which every O-move is justified by the move
//! immediately before it, while P-moves may point anywhere back. The empty
//! view function is bottom; the norm of a strategy is the cardinality of
//! its view function.

use std::collections::BTreeMap;

use crate::arena::{Arena, Move, MoveKind, Polarity};
use crate::error::{Error, Result};

/// A justified move: the move plus the index of its justifier within the
/// ambient sequence (`None` for initial moves).
pub type JMove = (Move, Option<usize>);

/// A P-view–shaped play, used both as view-function key and as the plays
/// explored during materialization.
pub type View = Vec<JMove>;

#[derive(Debug, Clone)]
pub struct Strategy {
    dom: Arena,
    cod: Arena,
    arena: Arena,
    view: BTreeMap<View, (Move, usize)>,
}

impl PartialEq for Strategy {
    fn eq(&self, other: &Self) -> bool {
        self.dom == other.dom && self.cod == other.cod && self.view == other.view
    }
}

impl Eq for Strategy {}

impl Strategy {
    pub fn bot(dom: Arena, cod: Arena) -> Strategy {
        let arena = Arena::graft(&dom, &cod);
        Strategy { dom, cod, arena, view: BTreeMap::new() }
    }

    /// The point `x` of the flat arena with the given window.
    pub fn point(x: u32, window: u32) -> Result<Strategy> {
        if x >= window {
            return Err(Error::PointOutOfWindow { point: x, window });
        }
        let mut s = Strategy::bot(Arena::unit(), Arena::flat(window));
        s.insert(
            vec![(Move::question(vec![0]), None)],
            (Move::answer(vec![0], x), 0),
        )?;
        Ok(s)
    }

    /// The constant-`x` map `dom -> flat(window)`: answers without looking
    /// at the domain.
    pub fn constant(dom: Arena, x: u32, window: u32) -> Result<Strategy> {
        if x >= window {
            return Err(Error::PointOutOfWindow { point: x, window });
        }
        let mut s = Strategy::bot(dom, Arena::flat(window));
        s.insert(
            vec![(Move::question(vec![0]), None)],
            (Move::answer(vec![0], x), 0),
        )?;
        Ok(s)
    }

    pub fn dom(&self) -> &Arena {
        &self.dom
    }

    pub fn cod(&self) -> &Arena {
        &self.cod
    }

    /// The full arena `graft(dom, cod)` the strategy plays on.
    pub fn arena(&self) -> &Arena {
        &self.arena
    }

    pub fn norm(&self) -> usize {
        self.view.len()
    }

    pub fn is_bot(&self) -> bool {
        self.view.is_empty()
    }

    pub fn respond(&self, view: &View) -> Option<&(Move, usize)> {
        self.view.get(view)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&View, &(Move, usize))> {
        self.view.iter()
    }

    /// Is `m` a move of the domain part of the grafted arena?
    pub fn is_dom_move(&self, m: &Move) -> bool {
        m.path.len() >= 2 && (m.path[1] as usize) < self.dom.n_roots()
    }

    /// Inserts one view-function entry, checking legality of both the key
    /// and the response.
    pub fn insert(&mut self, key: View, resp: (Move, usize)) -> Result<()> {
        check_view_play(&self.arena, &key)?;
        if key.len() % 2 == 0 {
            return Err(Error::IllFormedStrategy(
                "view-function keys must have odd length".into(),
            ));
        }
        let mut extended = key.clone();
        extended.push((resp.0.clone(), Some(resp.1)));
        check_view_play(&self.arena, &extended)?;
        self.view.insert(key, resp);
        Ok(())
    }

    /// Full well-formedness: every key legal, every response legal, and the
    /// view function coherent (responses along every key prefix agree with
    /// the map). Determinism is structural (it is a map).
    pub fn validate(&self) -> Result<()> {
        for (key, resp) in &self.view {
            let mut extended = key.clone();
            extended.push((resp.0.clone(), Some(resp.1)));
            check_view_play(&self.arena, &extended)?;
            let mut p = 1;
            while p < key.len() {
                let prefix: View = key[..p].to_vec();
                match self.view.get(&prefix) {
                    Some((m, j)) if (m.clone(), Some(*j)) == key[p] => {}
                    _ => {
                        return Err(Error::IllFormedStrategy(format!(
                            "incoherent view function at prefix length {}",
                            p
                        )))
                    }
                }
                p += 2;
            }
        }
        Ok(())
    }

    /// `viewfn(self) subset of viewfn(other)`; bottom is least in this order.
    pub fn included_in(&self, other: &Strategy) -> bool {
        self.dom == other.dom
            && self.cod == other.cod
            && self
                .view
                .iter()
                .all(|(k, v)| other.view.get(k) == Some(v))
    }

    /// Rewraps the strategy at a different dom/cod split of the same
    /// grafted arena (currying, uncurrying, naming). The underlying play
    /// addresses are untouched; only the split changes.
    pub fn resplit(&self, dom: Arena, cod: Arena) -> Result<Strategy> {
        let arena = Arena::graft(&dom, &cod);
        if arena != self.arena {
            return Err(Error::ArenaMismatch(format!(
                "resplit changes the grafted arena: {:?} vs {:?}",
                arena, self.arena
            )));
        }
        Ok(Strategy { dom, cod, arena, view: self.view.clone() })
    }

    /// Applies a move translation to every key and response. The caller
    /// guarantees `f` is an arena map onto `graft(new_dom, new_cod)`
    /// preserving enabling; justifier indices are untouched.
    pub fn translate(
        &self,
        new_dom: Arena,
        new_cod: Arena,
        f: impl Fn(&Move) -> Move,
    ) -> Result<Strategy> {
        let mut out = Strategy::bot(new_dom, new_cod);
        for (key, (rm, rj)) in &self.view {
            let new_key: View = key
                .iter()
                .map(|(m, j)| (f(m), *j))
                .collect();
            out.insert(new_key, (f(rm), *rj))?;
        }
        Ok(out)
    }
}

/// Enumerates the legal O-extensions of an even-length view-play: the
/// initial questions when empty, otherwise the answers and child questions
/// of the P-question just played.
pub fn o_extensions(arena: &Arena, play: &View) -> Vec<JMove> {
    if play.is_empty() {
        return (0..arena.n_roots())
            .map(|r| (Move::question(vec![r as u16]), None))
            .collect();
    }
    let (last, _) = play.last().expect("nonempty");
    if last.kind != MoveKind::Question {
        return Vec::new();
    }
    let node = arena.node(&last.path).expect("legal play");
    let j = Some(play.len() - 1);
    let mut out = Vec::new();
    for v in 0..node.answers {
        out.push((Move::answer(last.path.clone(), v), j));
    }
    for c in 0..node.children.len() {
        let mut p = last.path.clone();
        p.push(c as u16);
        out.push((Move::question(p), j));
    }
    out
}

/// Checks that `play` is a legal view-play of `arena`: alternation,
/// justification, well-opening, well-bracketing, and the view shape (every
/// O-move justified by its immediate predecessor).
pub fn check_view_play(arena: &Arena, play: &View) -> Result<()> {
    let mut open: Vec<usize> = Vec::new(); // stack of pending question positions
    for (pos, (m, j)) in play.iter().enumerate() {
        if !m.well_formed(arena) {
            return Err(Error::IllFormedStrategy(format!(
                "move {} is not in the arena",
                m
            )));
        }
        let expect_pol = if pos % 2 == 0 { Polarity::O } else { Polarity::P };
        if m.polarity() != expect_pol {
            return Err(Error::IllFormedStrategy(format!(
                "move {} at position {} has the wrong polarity",
                m, pos
            )));
        }
        if m.is_initial() {
            if pos != 0 || j.is_some() {
                return Err(Error::IllFormedStrategy(
                    "initial moves may only open the play".into(),
                ));
            }
        } else {
            let ji = match j {
                Some(ji) if *ji < pos => *ji,
                _ => {
                    return Err(Error::IllFormedStrategy(format!(
                        "move {} at position {} lacks a valid justifier",
                        m, pos
                    )))
                }
            };
            if pos % 2 == 0 && ji != pos - 1 {
                return Err(Error::IllFormedStrategy(format!(
                    "O-move {} at position {} must follow its justifier",
                    m, pos
                )));
            }
            let (jm, _) = &play[ji];
            match m.kind {
                MoveKind::Question => {
                    let parent = &m.path[..m.path.len() - 1];
                    if jm.kind != MoveKind::Question || jm.path != parent {
                        return Err(Error::IllFormedStrategy(format!(
                            "question {} not justified by its parent",
                            m
                        )));
                    }
                }
                MoveKind::Answer(_) => {
                    if jm.kind != MoveKind::Question || jm.path != m.path {
                        return Err(Error::IllFormedStrategy(format!(
                            "answer {} not justified by its question",
                            m
                        )));
                    }
                    if open.last() != Some(&ji) {
                        return Err(Error::IllFormedStrategy(format!(
                            "answer {} violates well-bracketing",
                            m
                        )));
                    }
                    open.pop();
                }
            }
        }
        if m.kind == MoveKind::Question {
            open.push(pos);
        }
    }
    Ok(())
}

/// Builds the view function of an innocent strategy given a response
/// oracle, by exploring every reachable view-play. Terminates iff the
/// resulting strategy is compact within `entry_budget` entries.
pub fn materialize(
    dom: Arena,
    cod: Arena,
    oracle: &mut dyn FnMut(&View) -> Result<Option<(Move, usize)>>,
    entry_budget: usize,
) -> Result<Strategy> {
    let mut out = Strategy::bot(dom, cod);
    let arena = out.arena().clone();
    let mut stack: Vec<View> = vec![Vec::new()];
    while let Some(play) = stack.pop() {
        for (m, j) in o_extensions(&arena, &play) {
            let mut probe = play.clone();
            probe.push((m, j));
            match oracle(&probe)? {
                None => {}
                Some(resp) => {
                    if out.norm() >= entry_budget {
                        return Err(Error::StrategyBudget(entry_budget));
                    }
                    out.insert(probe.clone(), resp.clone())?;
                    probe.push((resp.0, Some(resp.1)));
                    stack.push(probe);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_norm_is_one() {
        let p = Strategy::point(2, 3).unwrap();
        assert_eq!(p.norm(), 1);
        p.validate().unwrap();
    }

    #[test]
    fn point_out_of_window() {
        assert!(Strategy::point(3, 3).is_err());
    }

    #[test]
    fn bot_is_least() {
        let b = Strategy::bot(Arena::unit(), Arena::flat(3));
        let p = Strategy::point(0, 3).unwrap();
        assert!(b.included_in(&p));
        assert!(!p.included_in(&b));
    }

    #[test]
    fn bracketing_rejected() {
        // dom = nat -> nat: the grafted arena has a grandchild question
        let dom = Arena::of_type(
            &crate::syntax::Ty::arrow(crate::syntax::Ty::Nat, crate::syntax::Ty::Nat),
            2,
        );
        let s = Strategy::bot(dom, Arena::flat(2));
        // in-order answering is fine
        let orderly = vec![
            (Move::question(vec![0]), None),
            (Move::question(vec![0, 0]), Some(0)),
            (Move::answer(vec![0, 0], 1), Some(1)),
            (Move::answer(vec![0], 1), Some(0)),
        ];
        check_view_play(s.arena(), &orderly).unwrap();
        // answering the root while the dom question is pending is not
        let jumpy = vec![
            (Move::question(vec![0]), None),
            (Move::question(vec![0, 0]), Some(0)),
            (Move::question(vec![0, 0, 0]), Some(1)),
            (Move::answer(vec![0], 1), Some(0)),
        ];
        assert!(check_view_play(s.arena(), &jumpy).is_err());
    }
}
