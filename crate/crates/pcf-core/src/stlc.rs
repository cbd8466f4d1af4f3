//! The pure simply-typed fragment over the answerless base `i`, and the
//! bounded bijection check between its long beta-eta-normal forms and the
//! total compact strategies at each pure type.
//!
//! Over `i` the base game has a single question and no answers, so every
//! nonempty map into the base is strict, decomposition has no constant or
//! branch cases, and a total strategy is exactly one whose extraction never
//! hits a missing view entry.

use serde::Serialize;

use crate::arena::Arena;
use crate::compose::compose;
use crate::decompose::{decompose, Decomposition};
use crate::denote::Denoter;
use crate::error::{Error, Result};
use crate::generate::enumerate_strategies;
use crate::strategy::Strategy;
use crate::structural::{ev, pair, pair_n, proj};
use crate::syntax::{alpha_eq, typecheck, Ctx, Term, Ty};

/// Head-variable form of a total strategy at a pure type: interrogate
/// binder `head` (0-based) with the argument strategies. No branch maps —
/// the base has no answers to dispatch on.
#[derive(Debug, Clone)]
pub struct PureDecomposition {
    pub head: usize,
    pub args: Vec<Strategy>,
}

fn check_pure_canonical(f: &Strategy) -> Result<()> {
    if f.cod().n_roots() != 1
        || f.cod().roots[0].answers != 0
        || !f.cod().roots[0].children.is_empty()
    {
        return Err(Error::ShapeMismatch(
            "expected a canonical strategy into the answerless base".into(),
        ));
    }
    Ok(())
}

pub fn stlc_decompose(f: &Strategy) -> Result<PureDecomposition> {
    check_pure_canonical(f)?;
    if f.is_bot() {
        return Err(Error::ShapeMismatch(
            "no head form: the strategy is not total (empty)".into(),
        ));
    }
    match decompose(f)? {
        Decomposition::Total { head, args, branches } => {
            debug_assert!(branches.is_empty(), "answerless head grew branches");
            Ok(PureDecomposition { head, args })
        }
        _ => Err(Error::ShapeMismatch(
            "maps into the answerless base decompose through a head".into(),
        )),
    }
}

/// Rebuilds the strategy from its head form using structural morphisms:
/// project the head and feed it the argument tuple. There is no dispatch
/// stage — the head interrogation is never answered.
pub fn stlc_recompose(d: &PureDecomposition, dom: &Arena) -> Result<Strategy> {
    let parts: Vec<Arena> = dom
        .roots
        .iter()
        .map(|r| Arena { roots: vec![r.clone()] })
        .collect();
    let head_node = dom
        .roots
        .get(d.head)
        .ok_or_else(|| Error::ShapeMismatch("head index outside the domain".into()))?;
    let u_parts: Vec<Arena> = head_node
        .children
        .iter()
        .map(|c| Arena { roots: vec![c.clone()] })
        .collect();
    if d.args.len() != u_parts.len() {
        return Err(Error::ShapeMismatch(format!(
            "head takes {} arguments, got {}",
            u_parts.len(),
            d.args.len()
        )));
    }
    let u_prod = Arena::product(u_parts.iter().cloned());
    let pr = proj(&parts, d.head)?;
    let tuple = pair_n(dom, &d.args)?;
    let e = ev(&u_prod, &Arena::flat(head_node.answers))?;
    compose(&e, &pair(&pr, &tuple)?)
}

/// Re-splits an argument strategy `dom -> [[U_j]]` to canonical shape by
/// absorbing `U_j`'s own arguments into the domain.
fn canonical_arg(g: &Strategy) -> Result<Strategy> {
    let root = &g.cod().roots[0];
    let parts = g
        .dom()
        .roots
        .iter()
        .chain(root.children.iter())
        .map(|r| Arena { roots: vec![r.clone()] });
    g.resplit(Arena::product(parts), Arena::flat(root.answers))
}

/// Extracts the long beta-eta-normal form denoting `f`. Accepts a closed
/// point `1 -> [[T]]` or the canonical split of one.
pub fn stlc_extract_nf(f: &Strategy) -> Result<Term> {
    let canon = if f.dom().n_roots() == 0 && f.cod().n_roots() == 1 {
        let root = &f.cod().roots[0];
        let dom = Arena::product(
            root.children.iter().map(|c| Arena { roots: vec![c.clone()] }),
        );
        f.resplit(dom, Arena::flat(root.answers))?
    } else {
        f.clone()
    };
    check_pure_canonical(&canon)?;
    let mut ctx = canon.dom().root_types(0)?;
    if !ctx.iter().all(|t| t.is_pure()) {
        return Err(Error::Type("extraction target is not a pure type".into()));
    }
    let outer = ctx.clone();
    let body = nf_body(&canon, &mut ctx)?;
    Ok(outer
        .iter()
        .enumerate()
        .rev()
        .fold(body, |acc, (i, t)| {
            Term::lam(format!("x{}", i + 1), t.clone(), acc)
        }))
}

fn nf_body(f: &Strategy, ctx: &mut Vec<Ty>) -> Result<Term> {
    let d = stlc_decompose(f)?;
    let head_ty = ctx[d.head].clone();
    let (utys, _) = head_ty.uncurried();
    let utys: Vec<Ty> = utys.into_iter().cloned().collect();
    let mut ms = Vec::with_capacity(d.args.len());
    for (g, uty) in d.args.iter().zip(&utys) {
        if g.norm() >= f.norm() {
            return Err(Error::NormDescent { child: g.norm(), parent: f.norm() });
        }
        let (vtys, _) = uty.uncurried();
        let vtys: Vec<Ty> = vtys.into_iter().cloned().collect();
        let base = ctx.len();
        ctx.extend(vtys.iter().cloned());
        let inner = nf_body(&canonical_arg(g)?, ctx)?;
        ctx.truncate(base);
        let m = vtys
            .iter()
            .enumerate()
            .rev()
            .fold(inner, |acc, (t, vt)| {
                Term::lam(format!("x{}", base + t + 1), vt.clone(), acc)
            });
        ms.push(m);
    }
    Ok(Term::apps(Term::var(format!("x{}", d.head + 1)), ms))
}

/// Number of AST nodes.
pub fn term_size(m: &Term) -> usize {
    match m {
        Term::Lam(_, _, body) => 1 + term_size(body),
        Term::App(f, a) => 1 + term_size(f) + term_size(a),
        _ => 1,
    }
}

/// Syntactic check: `m` is a long beta-eta-normal form of type `ty` in the
/// given positional context — fully eta-expanded lambdas over a head
/// variable applied to exactly its arity of long normal arguments.
pub fn is_long_nf(ctx: &[Ty], m: &Term, ty: &Ty) -> bool {
    fn go(ctx: &mut Vec<(String, Ty)>, m: &Term, ty: &Ty) -> bool {
        let (utys, base) = ty.uncurried();
        if *base != Ty::Iota {
            return false;
        }
        let utys: Vec<Ty> = utys.into_iter().cloned().collect();
        let mut cur = m;
        let base_len = ctx.len();
        for uty in &utys {
            match cur {
                Term::Lam(x, t, body) if t == uty => {
                    ctx.push((x.clone(), t.clone()));
                    cur = body;
                }
                _ => {
                    ctx.truncate(base_len);
                    return false;
                }
            }
        }
        let ok = (|| {
            let (head, args) = cur.spine();
            let x = match head {
                Term::Var(x) => x,
                _ => return false,
            };
            let hty = match ctx.iter().rev().find(|(y, _)| y == x) {
                Some((_, t)) => t.clone(),
                None => return false,
            };
            let (wtys, b) = hty.uncurried();
            if *b != Ty::Iota || args.len() != wtys.len() {
                return false;
            }
            let wtys: Vec<Ty> = wtys.into_iter().cloned().collect();
            args.iter().zip(&wtys).all(|(a, w)| go(ctx, a, w))
        })();
        ctx.truncate(base_len);
        ok
    }
    let mut named: Vec<(String, Ty)> = ctx
        .iter()
        .enumerate()
        .map(|(i, t)| (format!("x{}", i + 1), t.clone()))
        .collect();
    go(&mut named, m, ty)
}

/// All closed long beta-eta-normal forms of the pure type `t` with at most
/// `size_bound` AST nodes, ordered by size then lexicographically.
pub fn enumerate_nfs(t: &Ty, size_bound: usize) -> Result<Vec<Term>> {
    if !t.is_pure() {
        return Err(Error::Type(format!("{} is not a pure type", t)));
    }
    let mut ctx = Vec::new();
    let mut out = gen_nfs(&mut ctx, t, size_bound);
    out.sort_by_cached_key(|m| (term_size(m), m.to_string()));
    out.dedup();
    Ok(out)
}

fn gen_nfs(ctx: &mut Vec<Ty>, ty: &Ty, budget: usize) -> Vec<Term> {
    let (utys, base) = ty.uncurried();
    if *base != Ty::Iota {
        return Vec::new();
    }
    let utys: Vec<Ty> = utys.into_iter().cloned().collect();
    let k = utys.len();
    if budget < k + 1 {
        return Vec::new();
    }
    let base_len = ctx.len();
    ctx.extend(utys.iter().cloned());
    let mut out = Vec::new();
    for i in 0..ctx.len() {
        let hty = ctx[i].clone();
        let (wtys, b) = hty.uncurried();
        if *b != Ty::Iota {
            continue;
        }
        let wtys: Vec<Ty> = wtys.into_iter().cloned().collect();
        let head_cost = k + 1 + wtys.len();
        if budget < head_cost {
            continue;
        }
        for tuple in gen_tuples(ctx, &wtys, budget - head_cost) {
            let body = Term::apps(Term::var(format!("x{}", i + 1)), tuple);
            let wrapped = utys
                .iter()
                .enumerate()
                .rev()
                .fold(body, |acc, (j, t)| {
                    Term::lam(format!("x{}", base_len + j + 1), t.clone(), acc)
                });
            out.push(wrapped);
        }
    }
    ctx.truncate(base_len);
    out
}

fn gen_tuples(ctx: &mut Vec<Ty>, wtys: &[Ty], budget: usize) -> Vec<Vec<Term>> {
    match wtys.split_first() {
        None => vec![Vec::new()],
        Some((w, rest)) => {
            let mut out = Vec::new();
            for first in gen_nfs(ctx, w, budget) {
                let used = term_size(&first);
                for mut rest_t in gen_tuples(ctx, rest, budget - used) {
                    let mut v = Vec::with_capacity(1 + rest_t.len());
                    v.push(first.clone());
                    v.append(&mut rest_t);
                    out.push(v);
                }
            }
            out
        }
    }
}

/// All total compact strategies at the pure type `t` with norm at most
/// `norm_bound`: the enumerated view functions whose extraction succeeds.
pub fn enumerate_total_strategies(t: &Ty, norm_bound: usize) -> Result<Vec<Strategy>> {
    let (utys, base) = t.uncurried();
    if *base != Ty::Iota || !t.is_pure() {
        return Err(Error::Type(format!("{} is not a pure type", t)));
    }
    let utys: Vec<Ty> = utys.into_iter().cloned().collect();
    let all = enumerate_strategies(
        &Arena::of_context(&utys, 0),
        &Arena::flat(0),
        norm_bound,
    )?;
    Ok(all
        .into_iter()
        .filter(|s| stlc_extract_nf(s).is_ok())
        .collect())
}

fn denote_pure(m: &Term) -> Result<Strategy> {
    let point = Denoter::new(0, 1).denote_closed(m)?;
    let root = &point.cod().roots[0];
    let dom = Arena::product(
        root.children.iter().map(|c| Arena { roots: vec![c.clone()] }),
    );
    point.resplit(dom, Arena::flat(root.answers))
}

#[derive(Debug, Clone, Serialize)]
pub struct FullCompletenessReport {
    pub ty: String,
    pub size_bound: usize,
    pub norm_bound: usize,
    pub nf_count: usize,
    pub total_strategy_count: usize,
    /// distinct normal forms have distinct denotations
    pub injective: bool,
    /// extraction undoes denotation, up to alpha
    pub extract_after_denote_ok: bool,
    /// denotation undoes extraction
    pub denote_after_extract_ok: bool,
    /// strategies whose extraction exceeds the size bound (reported, not
    /// failed): the bounded enumerations are staggered, not mismatched
    pub boundary: Vec<String>,
    /// strategies within the size bound missed by the normal-form sweep
    pub unmatched: usize,
    pub ok: bool,
}

pub fn check_full_completeness(
    t: &Ty,
    size_bound: usize,
    norm_bound: usize,
) -> Result<FullCompletenessReport> {
    let nfs = enumerate_nfs(t, size_bound)?;
    for nf in &nfs {
        debug_assert_eq!(typecheck(&Ctx::empty(), nf).as_ref(), Ok(t));
        debug_assert!(is_long_nf(&[], nf, t));
    }
    let mut denots = Vec::with_capacity(nfs.len());
    let mut injective = true;
    let mut extract_after_denote_ok = true;
    for nf in &nfs {
        let d = denote_pure(nf)?;
        if denots.contains(&d) {
            injective = false;
        }
        let back = stlc_extract_nf(&d)?;
        if !alpha_eq(&back, nf) {
            extract_after_denote_ok = false;
        }
        denots.push(d);
    }

    let totals = enumerate_total_strategies(t, norm_bound)?;
    let mut denote_after_extract_ok = true;
    let mut boundary = Vec::new();
    let mut unmatched = 0usize;
    for s in &totals {
        let nf = stlc_extract_nf(s)?;
        if denote_pure(&nf)? != *s {
            denote_after_extract_ok = false;
        }
        if term_size(&nf) > size_bound {
            boundary.push(nf.to_string());
        } else if !denots.contains(s) {
            unmatched += 1;
        }
    }

    let ok = injective && extract_after_denote_ok && denote_after_extract_ok
        && unmatched == 0;
    Ok(FullCompletenessReport {
        ty: t.to_string(),
        size_bound,
        norm_bound,
        nf_count: nfs.len(),
        total_strategy_count: totals.len(),
        injective,
        extract_after_denote_ok,
        denote_after_extract_ok,
        boundary,
        unmatched,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::strict_total;
    use crate::parse::{parse_term, parse_type};

    fn ty(s: &str) -> Ty {
        parse_type(s).unwrap()
    }

    #[test]
    fn identity_decomposes_to_bare_head() {
        let f = denote_pure(&parse_term("\\x:i. x").unwrap()).unwrap();
        let d = stlc_decompose(&f).unwrap();
        assert_eq!(d.head, 0);
        assert!(d.args.is_empty());
        assert_eq!(stlc_recompose(&d, f.dom()).unwrap(), f);
    }

    #[test]
    fn church_numerals_decompose_through_the_function() {
        let one = denote_pure(&parse_term("\\f:i->i. \\x:i. f x").unwrap()).unwrap();
        let two = denote_pure(&parse_term("\\f:i->i. \\x:i. f (f x)").unwrap()).unwrap();
        for f in [&one, &two] {
            let d = stlc_decompose(f).unwrap();
            assert_eq!(d.head, 0);
            assert_eq!(d.args.len(), 1);
            assert!(d.args[0].norm() < f.norm());
            assert_eq!(stlc_recompose(&d, f.dom()).unwrap(), *f);
        }
        // the argument of [[f (f x)]] is [[\f,x. f x]]'s body strategy
        let d2 = stlc_decompose(&two).unwrap();
        let inner = stlc_extract_nf(&canonical_arg(&d2.args[0]).unwrap()).unwrap();
        assert!(alpha_eq(&inner, &parse_term("\\x1:i->i. \\x2:i. x1 x2").unwrap()));
    }

    #[test]
    fn extraction_round_trips() {
        for src in [
            "\\x:i. x",
            "\\f:i->i. \\x:i. x",
            "\\f:i->i. \\x:i. f (f x)",
            "\\g:(i->i)->i. g (\\x:i. g (\\y:i. x))",
        ] {
            let m = parse_term(src).unwrap();
            let f = denote_pure(&m).unwrap();
            let nf = stlc_extract_nf(&f).unwrap();
            assert!(alpha_eq(&nf, &m), "{} re-extracted as {}", src, nf);
            assert!(is_long_nf(&[], &nf, &typecheck(&Ctx::empty(), &m).unwrap()));
        }
    }

    #[test]
    fn every_enumerated_map_into_the_base_is_strict() {
        for s in enumerate_strategies(
            &Arena::of_context(&[ty("i -> i"), ty("i")], 0),
            &Arena::flat(0),
            3,
        )
        .unwrap()
        {
            let st = strict_total(&s).unwrap();
            assert!(st.strict);
        }
    }

    #[test]
    fn nf_enumeration_matches_known_counts() {
        assert_eq!(enumerate_nfs(&ty("i -> i"), 7).unwrap().len(), 1);
        assert_eq!(enumerate_nfs(&ty("i"), 7).unwrap().len(), 0);
        assert_eq!(enumerate_nfs(&ty("i -> i -> i"), 7).unwrap().len(), 2);
        let church = enumerate_nfs(&ty("(i -> i) -> i -> i"), 7).unwrap();
        assert_eq!(church.len(), 3); // \f,x. f^n x for n = 0, 1, 2
    }

    #[test]
    fn full_completeness_at_small_types() {
        let r = check_full_completeness(&ty("i -> i"), 7, 3).unwrap();
        assert!(r.ok, "{:?}", r);
        assert_eq!((r.nf_count, r.total_strategy_count), (1, 1));

        let r = check_full_completeness(&ty("(i -> i) -> i -> i"), 7, 3).unwrap();
        assert!(r.ok, "{:?}", r);
        assert_eq!((r.nf_count, r.total_strategy_count), (3, 3));

        let r = check_full_completeness(&ty("i"), 7, 3).unwrap();
        assert!(r.ok, "{:?}", r);
        assert_eq!((r.nf_count, r.total_strategy_count), (0, 0));
    }

    #[test]
    fn pure_factorization_instance_round_trips() {
        // over the answerless base the continuation of the function-space
        // factorization is forced: it can only interrogate its first input
        use crate::arena::Move;
        use crate::axioms::{a5_forward, a5_inverse};
        use crate::structural::identity;
        for t in ["i", "i -> i"] {
            let c = Arena::of_type(&ty(t), 0);
            let g = identity(&c).unwrap();
            let mut h = Strategy::bot(
                Arena::product([Arena::flat(0), c.clone()]),
                Arena::flat(0),
            );
            h.insert(
                vec![(Move::question(vec![0]), None)],
                (Move::question(vec![0, 0]), 0),
            )
            .unwrap();
            let f = a5_forward(&g, &h).unwrap();
            let (g2, h2) = a5_inverse(&f).unwrap();
            assert_eq!(g2, g);
            assert_eq!(h2, h);
        }
    }

    #[test]
    fn staggered_bounds_report_boundary_strategies() {
        // norm bound 4 reaches \f,x. f^3 x, whose normal form has 9 nodes
        let r = check_full_completeness(&ty("(i -> i) -> i -> i"), 7, 4).unwrap();
        assert!(r.ok, "{:?}", r);
        assert_eq!(r.total_strategy_count, 4);
        assert_eq!(r.boundary.len(), 1);
        assert_eq!(r.unmatched, 0);
    }
}
