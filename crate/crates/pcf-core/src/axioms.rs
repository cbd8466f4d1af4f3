//! Instance checkers for the structural axioms of the model:
//! discreteness of the base (A1), factorization of strict maps out of
//! products (A2), the promotion/dereliction laws (A3), linearization of
//! strict maps (A4), and the factorization of total maps out of a function
//! space with flat target (A5).
//!
//! Each suite runs seeded random cases plus a pinned special case, and
//! reports failures with replayable detail rather than panicking.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arena::{Arena, Move, MoveKind, Node};
use crate::compose::compose;
use crate::decompose::{classify, decompose, strict_total, Class};
use crate::denote::Denoter;
use crate::error::{Error, Result};
use crate::generate::{prune_random, random_canonical_term, rng_from_seed};
use crate::strategy::{Strategy, View};
use crate::structural::{der, ev, identity, pair, proj, promote};
use crate::syntax::{Term, Ty};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axiom {
    A1,
    A2,
    A3,
    A4,
    A5,
}

impl Axiom {
    pub fn all() -> [Axiom; 5] {
        [Axiom::A1, Axiom::A2, Axiom::A3, Axiom::A4, Axiom::A5]
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

impl FromStr for Axiom {
    type Err = Error;
    fn from_str(s: &str) -> Result<Axiom> {
        match s {
            "A1" | "a1" => Ok(Axiom::A1),
            "A2" | "a2" => Ok(Axiom::A2),
            "A3" | "a3" => Ok(Axiom::A3),
            "A4" | "a4" => Ok(Axiom::A4),
            "A5" | "a5" => Ok(Axiom::A5),
            _ => Err(Error::Other(format!("unknown axiom suite '{}'", s))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseFailure {
    pub case: usize,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub axiom: Axiom,
    pub seed: u64,
    pub window: u32,
    pub cases: usize,
    pub passed: usize,
    pub failures: Vec<CaseFailure>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {}/{} cases passed (seed {}, window {})",
            self.axiom, self.passed, self.cases, self.seed, self.window
        )?;
        for fail in &self.failures {
            writeln!(f, "  case {}: {}", fail.case, fail.detail)?;
        }
        Ok(())
    }
}

type CaseResult = std::result::Result<(), String>;

fn ck<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Runs `cases` seeded instances of the given suite.
pub fn check_axiom(which: Axiom, cases: usize, seed: u64, window: u32) -> CheckReport {
    let mut rng = rng_from_seed(seed);
    let mut failures = Vec::new();
    for i in 0..cases {
        let r = match which {
            Axiom::A1 => a1_case(&mut rng, i, window),
            Axiom::A2 => a2_case(&mut rng, i, window),
            Axiom::A3 => a3_case(&mut rng, i, window),
            Axiom::A4 => a4_case(&mut rng, i, window),
            Axiom::A5 => a5_case(&mut rng, i, window),
        };
        if let Err(detail) = r {
            failures.push(CaseFailure { case: i, detail });
        }
    }
    CheckReport {
        axiom: which,
        seed,
        window,
        cases,
        passed: cases - failures.len(),
        failures,
    }
}

fn type_pool() -> Vec<Ty> {
    let nn = Ty::arrow(Ty::Nat, Ty::Nat);
    vec![
        nn.clone(),
        Ty::arrow(Ty::Nat, nn.clone()),
        Ty::arrow(nn.clone(), Ty::Nat),
        Ty::arrow(nn, Ty::arrow(Ty::Nat, Ty::Nat)),
    ]
}

fn pick_type(rng: &mut ChaCha8Rng) -> Ty {
    let pool = type_pool();
    pool[rng.gen_range(0..pool.len())].clone()
}

fn denote_closed(m: &Term, window: u32) -> Result<Strategy> {
    Denoter::new(window, 8).denote_closed(m)
}

/// Re-splits a closed point `1 -> [[T]]` to canonical shape `Prod -> flat`.
fn canonicalize(point: &Strategy) -> Result<Strategy> {
    let root = &point.cod().roots[0];
    let dom = Arena::product(
        root.children.iter().map(|c| Arena { roots: vec![c.clone()] }),
    );
    point.resplit(dom, Arena::flat(root.answers))
}

/// A closed term of type `ty` whose denotation is strict: the body
/// interrogates the first binder.
fn strict_term(rng: &mut ChaCha8Rng, ty: &Ty, window: u32) -> Term {
    let (argtys, _) = ty.uncurried();
    let argtys: Vec<Ty> = argtys.into_iter().cloned().collect();
    assert!(!argtys.is_empty(), "strict terms need an argument to interrogate");
    let utys: Vec<Ty> = argtys[0].uncurried().0.into_iter().cloned().collect();
    let args: Vec<Term> = utys
        .iter()
        .map(|u| random_canonical_term(rng, u, 2, window))
        .collect();
    let core = Term::apps(Term::var("x1"), args);
    let l = rng.gen_range(1..=window);
    let mut all = vec![core];
    for _ in 0..l {
        all.push(if rng.gen_range(0..4u32) == 0 {
            Term::Omega
        } else {
            Term::Num(rng.gen_range(0..window))
        });
    }
    let body = Term::apps(Term::CaseK(l), all);
    argtys
        .iter()
        .enumerate()
        .rev()
        .fold(body, |acc, (i, t)| {
            Term::lam(format!("x{}", i + 1), t.clone(), acc)
        })
}

// ---------------------------------------------------------------------
// A1: the base is discrete — every map into it is bottom, a constant, or
// strict-total, and exactly one of the three.
// ---------------------------------------------------------------------

fn a1_check(f: &Strategy, window: u32) -> CaseResult {
    let st = ck(strict_total(f))?;
    let cls = ck(classify(f))?;
    match cls {
        Class::Bottom => {
            if !f.is_bot() || !st.strict || st.total {
                return Err("bottom case disagrees with strictness".into());
            }
        }
        Class::Constant(x) => {
            let c = ck(Strategy::constant(f.dom().clone(), x, window))?;
            if *f != c {
                return Err(format!("constant class but not the constant {}", x));
            }
            if f.dom().n_roots() > 0 && st.strict {
                return Err("constant at a nonempty domain classified strict".into());
            }
        }
        Class::StrictTotal { head } => {
            if !st.strict || !st.total {
                return Err("head interrogation without strict totality".into());
            }
            match ck(decompose(f))? {
                crate::decompose::Decomposition::Total { head: h, .. } if h == head => {}
                _ => return Err("classification and decomposition disagree".into()),
            }
        }
    }
    Ok(())
}

fn a1_case(rng: &mut ChaCha8Rng, i: usize, window: u32) -> CaseResult {
    if i == 0 {
        // pinned: a one-armed case on the input, classified strict-total
        let w = window.max(8);
        let m = crate::parse::parse_term("\\x:nat. case[1] x 7").unwrap();
        let f = ck(canonicalize(&ck(denote_closed(&m, w))?))?;
        if ck(classify(&f))? != (Class::StrictTotal { head: 0 }) {
            return Err("pinned case not classified strict-total".into());
        }
        return a1_check(&f, w);
    }
    let ty = pick_type(rng);
    let m = random_canonical_term(rng, &ty, 3, window);
    let mut f = ck(canonicalize(&ck(denote_closed(&m, window))?))?;
    if rng.gen_range(0..3u32) == 0 {
        f = prune_random(rng, &f, 2);
    }
    a1_check(&f, window).map_err(|d| format!("{} on {}", d, m))
}

// ---------------------------------------------------------------------
// A2: a strict total map out of a product factors through exactly one
// projection, and the factor is recoverable.
// ---------------------------------------------------------------------

fn a2_case(rng: &mut ChaCha8Rng, _i: usize, window: u32) -> CaseResult {
    let k = rng.gen_range(2..=3usize);
    let tys: Vec<Ty> = (0..k).map(|_| pick_type(rng)).collect();
    let i = rng.gen_range(0..k);
    let gm = strict_term(rng, &Ty::arrow(tys[i].clone(), Ty::Nat), window);
    let g = ck(canonicalize(&ck(denote_closed(&gm, window))?))?;
    let parts: Vec<Arena> = tys.iter().map(|t| Arena::of_type(t, window)).collect();
    let f = ck(compose(&g, &ck(proj(&parts, i))?))?;
    match ck(classify(&f))? {
        Class::StrictTotal { head } if head == i => {}
        other => {
            return Err(format!(
                "factoring through pi_{} classified as {:?} on {}",
                i, other, gm
            ))
        }
    }
    let ii = i as u16;
    let recovered = ck(f.translate(
        Arena::of_context(&[tys[i].clone()], window),
        Arena::flat(window),
        |m| {
            if m.path.len() >= 2 && m.path[1] == ii {
                let mut p = m.path.clone();
                p[1] = 0;
                Move { path: p, kind: m.kind }
            } else {
                m.clone()
            }
        },
    ))?;
    if recovered != g {
        return Err(format!("projection factor not recovered on {}", gm));
    }
    Ok(())
}

// ---------------------------------------------------------------------
// A3: promotion and dereliction — promotion is invisible, dereliction is
// the identity copycat, and both are neutral for composition.
// ---------------------------------------------------------------------

fn a3_case(rng: &mut ChaCha8Rng, i: usize, window: u32) -> CaseResult {
    let (ta, tb, tc) = (pick_type(rng), pick_type(rng), pick_type(rng));
    let fm = random_canonical_term(rng, &Ty::arrow(ta.clone(), tb.clone()), 3, window);
    let f = ck(ck(denote_closed(&fm, window))?.resplit(
        Arena::of_context(&[ta.clone()], window),
        Arena::of_type(&tb, window),
    ))?;
    if promote(&f) != f {
        return Err(format!("promotion moved {}", fm));
    }
    if i == 0 {
        // the pinned shape: a promoted map passes unchanged
        let g = promote(&f);
        if promote(&g) != g {
            return Err("iterated promotion moved".into());
        }
    }
    let der_a = ck(der(f.dom()))?;
    let der_b = ck(der(f.cod()))?;
    if ck(compose(&f, &der_a))? != f {
        return Err(format!("f . der != f on {}", fm));
    }
    if ck(compose(&der_b, &f))? != f {
        return Err(format!("der . f != f on {}", fm));
    }
    let gm = random_canonical_term(rng, &Ty::arrow(tb.clone(), tc.clone()), 3, window);
    let g = ck(ck(denote_closed(&gm, window))?.resplit(
        Arena::of_context(&[tb], window),
        Arena::of_type(&tc, window),
    ))?;
    let lhs = ck(compose(&g, &ck(compose(&f, &der_a))?))?;
    let rhs = ck(compose(&ck(compose(&g, &f))?, &der_a))?;
    if lhs != rhs {
        return Err(format!("associativity instance failed on {} ; {}", fm, gm));
    }
    Ok(())
}

// ---------------------------------------------------------------------
// A4: linearization — strict maps !A -> B correspond to strict maps
// A -> (!A -o B) by a per-entry re-addressing of views.
// ---------------------------------------------------------------------

/// The per-entry move re-addressing underlying linearization: the first
/// interrogation of the domain (and everything justified through it) stays
/// as the linear domain copy; every other non-initial move slides past the
/// `n` new domain roots into the codomain.
pub fn linearize(f: &Strategy) -> Result<Strategy> {
    let n = f.dom().n_roots() as u16;
    if f.cod().n_roots() != 1 {
        return Err(Error::ShapeMismatch(
            "linearization needs a single-rooted codomain".into(),
        ));
    }
    let new_cod = Arena::graft(f.dom(), f.cod());
    let mut out = Strategy::bot(f.dom().clone(), new_cod);
    for (key, resp) in f.entries() {
        let (ext, lin) = linear_membership(key, resp)?;
        let first = ext[0].0;
        if !(first.kind == MoveKind::Question
            && first.path.len() == 2
            && first.path[1] < n)
        {
            return Err(Error::ShapeMismatch(
                "linearization needs a strict strategy".into(),
            ));
        }
        let relabel = |p: usize| -> Move {
            let m = ext[p].0;
            if m.path.len() < 2 || lin[p] {
                m.clone()
            } else {
                let mut path = m.path.clone();
                path[1] += n;
                Move { path, kind: m.kind }
            }
        };
        let mut new_key: View = vec![key[0].clone()];
        for p in 0..ext.len() - 1 {
            new_key.push((relabel(p), Some(ext[p].1)));
        }
        out.insert(new_key, (relabel(ext.len() - 1), ext[ext.len() - 1].1))?;
    }
    Ok(out)
}

/// Inverse of `linearize`. Rejects strategies that use the linear domain
/// outside the thread opened by their first move.
pub fn delinearize(g: &Strategy) -> Result<Strategy> {
    let n = g.dom().n_roots();
    if g.cod().n_roots() != 1 {
        return Err(Error::ShapeMismatch(
            "delinearization needs a single-rooted codomain".into(),
        ));
    }
    let root = &g.cod().roots[0];
    if root.children.len() < n || root.children[..n] != g.dom().roots[..] {
        return Err(Error::ShapeMismatch(
            "codomain does not embed the domain copy".into(),
        ));
    }
    let b = Arena {
        roots: vec![Node {
            answers: root.answers,
            children: root.children[n..].to_vec(),
        }],
    };
    let n = n as u16;
    let mut out = Strategy::bot(g.dom().clone(), b);
    for (key, resp) in g.entries() {
        let (ext, lin) = linear_membership(key, resp)?;
        for (p, (m, _)) in ext.iter().enumerate() {
            if m.path.len() >= 2 && m.path[1] < n && !lin[p] {
                return Err(Error::ShapeMismatch(
                    "domain used outside the linear thread".into(),
                ));
            }
        }
        let relabel = |p: usize| -> Move {
            let m = ext[p].0;
            if m.path.len() >= 2 && m.path[1] >= n {
                let mut path = m.path.clone();
                path[1] -= n;
                Move { path, kind: m.kind }
            } else {
                m.clone()
            }
        };
        let mut new_key: View = vec![key[0].clone()];
        for p in 0..ext.len() - 1 {
            new_key.push((relabel(p), Some(ext[p].1)));
        }
        out.insert(new_key, (relabel(ext.len() - 1), ext[ext.len() - 1].1))?;
    }
    Ok(out)
}

/// For one entry, the non-initial moves (key tail plus response) together
/// with a flag marking membership in the thread of the first move, decided
/// by justifier ancestry.
fn linear_membership<'a>(
    key: &'a View,
    resp: &'a (Move, usize),
) -> Result<(Vec<(&'a Move, usize)>, Vec<bool>)> {
    let mut ext: Vec<(&Move, usize)> = Vec::with_capacity(key.len());
    for (m, j) in &key[1..] {
        let j = j.ok_or_else(|| {
            Error::IllFormedStrategy("non-initial move unjustified".into())
        })?;
        ext.push((m, j));
    }
    ext.push((&resp.0, resp.1));
    let mut lin = vec![false; ext.len()];
    for p in 0..ext.len() {
        lin[p] = if p == 0 {
            true
        } else {
            let jj = ext[p].1;
            jj >= 1 && lin[jj - 1]
        };
    }
    Ok((ext, lin))
}

fn a4_case(rng: &mut ChaCha8Rng, i: usize, window: u32) -> CaseResult {
    let (ta, tb) = if i == 0 {
        // pinned: dereliction itself
        (Ty::Nat, Ty::Nat)
    } else {
        let nn = Ty::arrow(Ty::Nat, Ty::Nat);
        let pool_a = [Ty::Nat, nn.clone()];
        let pool_b = [Ty::Nat, nn];
        (
            pool_a[rng.gen_range(0..pool_a.len())].clone(),
            pool_b[rng.gen_range(0..pool_b.len())].clone(),
        )
    };
    let f = if i == 0 {
        ck(identity(&Arena::of_type(&Ty::Nat, window)))?
    } else {
        let m = strict_term(rng, &Ty::arrow(ta.clone(), tb.clone()), window);
        ck(ck(denote_closed(&m, window))?.resplit(
            Arena::of_context(&[ta], window),
            Arena::of_type(&tb, window),
        ))?
    };
    let fhat = ck(linearize(&f))?;
    if ck(delinearize(&fhat))? != f {
        return Err("delinearize . linearize missed the identity".into());
    }
    let pruned = prune_random(rng, &fhat, 2);
    let back = ck(delinearize(&pruned))?;
    if ck(linearize(&back))? != pruned {
        return Err("linearize . delinearize missed the identity".into());
    }
    Ok(())
}

// ---------------------------------------------------------------------
// A5: total maps (A -o B) -> (!C -o D) with flat B, D factor as a pair of
// an argument map g : C -> A and a strict continuation h : B x C -> D.
// ---------------------------------------------------------------------

/// Builds the total map from the pair, entirely out of structural
/// morphisms: feed the function its argument computed by `g` from `C`,
/// then continue through `h`.
pub fn a5_forward(g: &Strategy, h: &Strategy) -> Result<Strategy> {
    let c = g.dom().clone();
    let a = g.cod().clone();
    let hdom = h.dom();
    if hdom.n_roots() != 1 + c.n_roots()
        || !hdom.roots[0].children.is_empty()
        || hdom.roots[1..] != c.roots[..]
    {
        return Err(Error::ShapeMismatch(
            "continuation domain must be flat-B times C".into(),
        ));
    }
    if h.cod().n_roots() != 1 || !h.cod().roots[0].children.is_empty() {
        return Err(Error::ShapeMismatch("continuation target must be flat".into()));
    }
    let b = Arena { roots: vec![hdom.roots[0].clone()] };
    let x = Arena::graft(&a, &b);
    let parts = [x.clone(), c.clone()];
    let px = proj(&parts, 0)?;
    let pc = proj(&parts, 1)?;
    let ga = compose(g, &pc)?;
    let e = ev(&a, &b)?;
    let app = compose(&e, &pair(&px, &ga)?)?;
    let m = compose(h, &pair(&app, &pc)?)?;
    m.resplit(x, Arena::graft(&c, h.cod()))
}

/// Recovers the pair from a total map of the A5 shape by partitioning its
/// view entries: continuations keep their addresses verbatim, argument
/// threads are stripped of the two-move prefix and re-addressed.
pub fn a5_inverse(f: &Strategy) -> Result<(Strategy, Strategy)> {
    if f.dom().n_roots() != 1 || f.cod().n_roots() != 1 {
        return Err(Error::ShapeMismatch(
            "expected a single function argument and a single target".into(),
        ));
    }
    let xroot = &f.dom().roots[0];
    let a = Arena { roots: xroot.children.clone() };
    let b = Arena::flat(xroot.answers);
    let croot = &f.cod().roots[0];
    let c = Arena { roots: croot.children.clone() };
    let nc = c.n_roots() as u16;
    let mut g = Strategy::bot(c.clone(), a.clone());
    let mut h = Strategy::bot(
        Arena::product([b, c]),
        Arena::flat(croot.answers),
    );
    let shift = |j: usize| -> Result<usize> {
        match j {
            0 | 2 => Ok(0),
            j if j >= 3 => Ok(j - 2),
            _ => Err(Error::IllFormedStrategy(
                "move justified by the stripped function interrogation".into(),
            )),
        }
    };
    for (key, resp) in f.entries() {
        if key.len() == 1 {
            if !(resp.0.kind == MoveKind::Question && resp.0.path == vec![0, 0]) {
                return Err(Error::ShapeMismatch(
                    "the map does not open by interrogating its argument".into(),
                ));
            }
            h.insert(key.clone(), resp.clone())?;
            continue;
        }
        let (m2, j2) = &key[2];
        if *j2 != Some(1) {
            return Err(Error::IllFormedStrategy(
                "third move not justified by the function interrogation".into(),
            ));
        }
        match m2.kind {
            MoveKind::Answer(_) => {
                // continuation entry: identical addresses in h's arena
                h.insert(key.clone(), resp.clone())?;
            }
            MoveKind::Question => {
                let a_idx = m2.path[2];
                let tr = |m: &Move| -> Result<Move> {
                    let p = &m.path;
                    if p.len() < 2 {
                        return Err(Error::IllFormedStrategy(
                            "target move inside an argument thread".into(),
                        ));
                    }
                    let path = if p[1] == 0 {
                        // function side: [0,0,a] -> [a]; deeper children
                        // slide past the C roots
                        let mut q = vec![p[2]];
                        if p.len() > 3 {
                            q.push(nc + p[3]);
                            q.extend_from_slice(&p[4..]);
                        }
                        q
                    } else {
                        // C side: [0, 1+j, ..] -> [a, j, ..]
                        let mut q = vec![a_idx, p[1] - 1];
                        q.extend_from_slice(&p[2..]);
                        q
                    };
                    Ok(Move { path, kind: m.kind })
                };
                let mut new_key: View = vec![(tr(&key[2].0)?, None)];
                for (m, j) in &key[3..] {
                    let j = j.ok_or_else(|| {
                        Error::IllFormedStrategy("non-initial move unjustified".into())
                    })?;
                    new_key.push((tr(m)?, Some(shift(j)?)));
                }
                g.insert(new_key, (tr(&resp.0)?, shift(resp.1)?))?;
            }
        }
    }
    Ok((g, h))
}

fn a5_case(rng: &mut ChaCha8Rng, i: usize, window: u32) -> CaseResult {
    let (g, h, label) = if i == 0 {
        // pinned: g is dereliction at the base, h reads B and returns 0
        let g = ck(der(&Arena::flat(window)))?;
        let zeros: Vec<Term> = (0..window).map(|_| Term::Num(0)).collect();
        let hm = Term::lam(
            "b",
            Ty::Nat,
            Term::lam(
                "c",
                Ty::Nat,
                Term::apps(
                    Term::CaseK(window),
                    std::iter::once(Term::var("b")).chain(zeros),
                ),
            ),
        );
        let h = ck(ck(denote_closed(&hm, window))?.resplit(
            Arena::product([Arena::flat(window), Arena::flat(window)]),
            Arena::flat(window),
        ))?;
        (g, h, "pinned dereliction/constant-0".to_string())
    } else {
        let nn = Ty::arrow(Ty::Nat, Ty::Nat);
        let pool = [Ty::Nat, nn];
        let tc = pool[rng.gen_range(0..pool.len())].clone();
        let ta = pool[rng.gen_range(0..pool.len())].clone();
        let gm = random_canonical_term(rng, &Ty::arrow(tc.clone(), ta.clone()), 3, window);
        let g = ck(ck(denote_closed(&gm, window))?.resplit(
            Arena::of_context(&[tc.clone()], window),
            Arena::of_type(&ta, window),
        ))?;
        let hm = strict_term(
            rng,
            &Ty::arrow(Ty::Nat, Ty::arrow(tc.clone(), Ty::Nat)),
            window,
        );
        let h = ck(ck(denote_closed(&hm, window))?.resplit(
            Arena::product([
                Arena::flat(window),
                Arena::of_type(&tc, window),
            ]),
            Arena::flat(window),
        ))?;
        (g, h, format!("g = {}, h = {}", gm, hm))
    };
    let f = ck(a5_forward(&g, &h))?;
    let st = ck(strict_total(&f))?;
    if !st.total {
        return Err(format!("forward map not total on {}", label));
    }
    let (g2, h2) = ck(a5_inverse(&f))?;
    if g2 != g {
        return Err(format!("argument map not recovered on {}", label));
    }
    if h2 != h {
        return Err(format!("continuation not recovered on {}", label));
    }
    let f2 = ck(a5_forward(&g2, &h2))?;
    if f2 != f {
        return Err(format!("forward of the recovered pair drifted on {}", label));
    }
    Ok(())
}
