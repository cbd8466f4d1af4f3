//! Arenas: forests of question nodes with answer windows, addressed by
//! hierarchical paths. The arena of `T_1 -> ... -> T_k -> nat` has one root
//! question carrying the answer window, with the argument arenas as
//! children; currying is invisible in this addressing.

use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::Ty;

/// A question node: how many answers it admits (0 for the pure base `i`),
/// and its child questions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    pub answers: u32,
    pub children: Vec<Node>,
}

/// A forest of question trees. Products concatenate root lists; the empty
/// forest is the terminal object.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arena {
    pub roots: Vec<Node>,
}

impl Arena {
    pub fn unit() -> Arena {
        Arena { roots: Vec::new() }
    }

    /// Flat arena: one initial question, `answers` answers, nothing below.
    pub fn flat(answers: u32) -> Arena {
        Arena {
            roots: vec![Node { answers, children: Vec::new() }],
        }
    }

    /// Arena of a simple type. `Nat` leaves carry the window; `Iota` leaves
    /// carry no answers.
    pub fn of_type(ty: &Ty, window: u32) -> Arena {
        fn node(ty: &Ty, window: u32) -> Node {
            let (args, base) = ty.uncurried();
            let answers = match base {
                Ty::Nat => window,
                _ => 0,
            };
            Node {
                answers,
                children: args.iter().map(|t| node(t, window)).collect(),
            }
        }
        Arena { roots: vec![node(ty, window)] }
    }

    /// Product: disjoint union of forests.
    pub fn product<I: IntoIterator<Item = Arena>>(parts: I) -> Arena {
        Arena {
            roots: parts.into_iter().flat_map(|a| a.roots).collect(),
        }
    }

    /// Arena of a typing context, one component per binding.
    pub fn of_context(tys: &[Ty], window: u32) -> Arena {
        Arena::product(tys.iter().map(|t| Arena::of_type(t, window)))
    }

    /// `dom -o cod` (equally `dom => cod`): the domain roots are grafted in
    /// front of the children of every codomain root.
    pub fn graft(dom: &Arena, cod: &Arena) -> Arena {
        Arena {
            roots: cod
                .roots
                .iter()
                .map(|r| Node {
                    answers: r.answers,
                    children: dom
                        .roots
                        .iter()
                        .cloned()
                        .chain(r.children.iter().cloned())
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn n_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn node(&self, path: &[u16]) -> Option<&Node> {
        let (first, rest) = path.split_first()?;
        let mut cur = self.roots.get(*first as usize)?;
        for &c in rest {
            cur = cur.children.get(c as usize)?;
        }
        Some(cur)
    }

    /// Reads a root node back as a type. `window` fixes which base a leaf
    /// stands for; mixed or unknown windows are rejected.
    pub fn node_type(node: &Node, window: u32) -> Result<Ty> {
        let base = if node.answers == 0 {
            Ty::Iota
        } else if node.answers == window {
            Ty::Nat
        } else {
            return Err(Error::ShapeMismatch(format!(
                "node has {} answers, expected 0 or the window {}",
                node.answers, window
            )));
        };
        let args: Result<Vec<Ty>> = node
            .children
            .iter()
            .map(|c| Arena::node_type(c, window))
            .collect();
        Ok(Ty::curried(&args?, base))
    }

    pub fn root_types(&self, window: u32) -> Result<Vec<Ty>> {
        self.roots
            .iter()
            .map(|r| Arena::node_type(r, window))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    O,
    P,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::O => Polarity::P,
            Polarity::P => Polarity::O,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    Question,
    Answer(u32),
}

/// A move: the address of a question, asked or answered.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub path: Vec<u16>,
    pub kind: MoveKind,
}

impl Move {
    pub fn question(path: Vec<u16>) -> Move {
        Move { path, kind: MoveKind::Question }
    }

    pub fn answer(path: Vec<u16>, v: u32) -> Move {
        Move { path, kind: MoveKind::Answer(v) }
    }

    /// Root questions (depth 1) are the O-questions that open a play.
    pub fn is_initial(&self) -> bool {
        self.path.len() == 1 && self.kind == MoveKind::Question
    }

    pub fn polarity(&self) -> Polarity {
        let odd = self.path.len() % 2 == 1;
        match self.kind {
            MoveKind::Question => {
                if odd {
                    Polarity::O
                } else {
                    Polarity::P
                }
            }
            MoveKind::Answer(_) => {
                if odd {
                    Polarity::P
                } else {
                    Polarity::O
                }
            }
        }
    }

    /// Checks the move names a real question of `arena` with an in-range
    /// answer value.
    pub fn well_formed(&self, arena: &Arena) -> bool {
        match arena.node(&self.path) {
            None => false,
            Some(node) => match self.kind {
                MoveKind::Question => true,
                MoveKind::Answer(v) => v < node.answers,
            },
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            MoveKind::Question => write!(f, "q:")?,
            MoveKind::Answer(v) => write!(f, "a{}:", v)?,
        }
        let parts: Vec<String> = self.path.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_type;

    #[test]
    fn flat_arena_for_nat() {
        let a = Arena::of_type(&Ty::Nat, 3);
        assert_eq!(a.n_roots(), 1);
        assert_eq!(a.roots[0].answers, 3);
        assert!(a.roots[0].children.is_empty());
    }

    #[test]
    fn arrow_arena_for_nat_to_nat() {
        let a = Arena::of_type(&parse_type("nat -> nat").unwrap(), 2);
        // 1 initial question with window 2, one child question with window 2
        assert_eq!(a.n_roots(), 1);
        assert_eq!(a.roots[0].answers, 2);
        assert_eq!(a.roots[0].children.len(), 1);
        assert_eq!(a.roots[0].children[0].answers, 2);
        // polarity reading: initial O-question, P-question, O-answers, P-answers
        assert_eq!(Move::question(vec![0]).polarity(), Polarity::O);
        assert_eq!(Move::question(vec![0, 0]).polarity(), Polarity::P);
        assert_eq!(Move::answer(vec![0, 0], 1).polarity(), Polarity::O);
        assert_eq!(Move::answer(vec![0], 1).polarity(), Polarity::P);
    }

    #[test]
    fn pure_arrow_has_no_answers() {
        let a = Arena::of_type(&parse_type("i -> i").unwrap(), 4);
        assert_eq!(a.roots[0].answers, 0);
        assert_eq!(a.roots[0].children.len(), 1);
        assert_eq!(a.roots[0].children[0].answers, 0);
        assert!(a.roots[0].children[0].children.is_empty());
    }

    #[test]
    fn currying_is_invisible() {
        let w = 3;
        let curried = Arena::of_type(&parse_type("nat -> nat -> nat").unwrap(), w);
        let dom = Arena::product([
            Arena::of_type(&Ty::Nat, w),
            Arena::of_type(&Ty::Nat, w),
        ]);
        let uncurried = Arena::graft(&dom, &Arena::flat(w));
        assert_eq!(curried, uncurried);
    }

    #[test]
    fn graft_associates_with_product() {
        let w = 2;
        let a = Arena::of_type(&parse_type("nat -> nat").unwrap(), w);
        let b = Arena::of_type(&Ty::Nat, w);
        let c = Arena::of_type(&parse_type("nat -> nat").unwrap(), w);
        let left = Arena::graft(&Arena::product([a.clone(), b.clone()]), &c);
        let right = Arena::graft(&a, &Arena::graft(&b, &c));
        assert_eq!(left, right);
    }

    #[test]
    fn types_round_trip_through_nodes() {
        for src in ["nat", "nat -> nat", "(nat -> nat) -> nat -> nat"] {
            let t = parse_type(src).unwrap();
            let a = Arena::of_type(&t, 4);
            assert_eq!(Arena::node_type(&a.roots[0], 4).unwrap(), t);
        }
    }
}
