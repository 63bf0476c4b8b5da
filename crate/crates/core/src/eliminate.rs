//! Binder elimination: the naive unfolding into iterated binary
//! compositions over unary numerals, and the binary strategy that first
//! reshapes every binder into nested range-2 binders (splitting
//! power-of-two ranges, padding or greedily splitting the rest) so that a
//! subsequent unfolding stays polylogarithmic in the range per level.
//! A third route rewrites the process binders through sequence
//! comprehension and generalized composition before going binary.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::extensions::FeatureSet;
use crate::meadow::{self, MeadowValue};
use crate::terms::{
    compact_numeral, fresh_u_var, subst_quant, unary_numeral, BinderKind, Term, VarName,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Naive,
    Binary,
    Sequences,
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Naive => "naive",
            Strategy::Binary => "binary",
            Strategy::Sequences => "sequences",
        }
    }
}

fn binder_op(kind: BinderKind) -> fn(Term, Term) -> Term {
    match kind {
        BinderKind::Sum => Term::add,
        BinderKind::Prod => Term::mul,
        BinderKind::Chc => Term::alt,
        BinderKind::SeqB => Term::seqc,
        BinderKind::ParB => Term::parc,
        BinderKind::Conc => Term::concat,
    }
}

/// Quantity conditional: `zero_case` when `r = 0`, `nonzero_case`
/// otherwise, expressed as `(1 - r/r) * zero_case + (r/r) * nonzero_case`.
pub fn cond_quant(zero_case: Term, r: Term, nonzero_case: Term) -> Term {
    let flag = Term::div(r.clone(), r);
    Term::add(
        Term::mul(Term::sub(Term::One, flag.clone()), zero_case),
        Term::mul(flag, nonzero_case),
    )
}

/// Process conditional: `zero_case` when `r = 0`, `nonzero_case`
/// otherwise, expressed with guarded commands as
/// `[r/r] -> zero_case + [1 - r/r] -> nonzero_case`.
pub fn cond_proc(zero_case: Term, r: Term, nonzero_case: Term) -> Term {
    let flag = Term::div(r.clone(), r);
    Term::alt(
        Term::guard(flag.clone(), zero_case),
        Term::guard(Term::sub(Term::One, flag), nonzero_case),
    )
}

/// One naive unfolding of a single binder: the right-nested composition of
/// the body instances at the unary numerals `0, 0+1, (0+1)+1, ...`.
/// Binders inside the body are left alone.
pub fn expand_binder(kind: BinderKind, n: u32, var: VarName, body: &Term) -> Term {
    let op = binder_op(kind);
    let mut parts: Vec<Term> = (0..u64::from(n))
        .map(|j| subst_quant(body, &unary_numeral(j), var).expect("numeral is a quantity"))
        .collect();
    let mut acc = parts.pop().expect("binder range is at least 1");
    while let Some(p) = parts.pop() {
        acc = op(p, acc);
    }
    acc
}

/// Evaluates a closed quantity term in the rational model; `None` if a
/// variable is free in it.
fn eval_closed_rational(t: &Term) -> Option<MeadowValue> {
    Some(match t {
        Term::Zero => MeadowValue::rational(0, 1),
        Term::One => MeadowValue::rational(1, 1),
        Term::Add(a, b) => {
            meadow::add(&eval_closed_rational(a)?, &eval_closed_rational(b)?).ok()?
        }
        Term::Mul(a, b) => {
            meadow::mul(&eval_closed_rational(a)?, &eval_closed_rational(b)?).ok()?
        }
        Term::Neg(a) => meadow::neg(&eval_closed_rational(a)?),
        Term::Minv(a) => meadow::minv(&eval_closed_rational(a)?),
        Term::Sign(a) => meadow::sign(&eval_closed_rational(a)?).ok()?,
        _ => return None,
    })
}

/// Fully eliminates binders by naive unfolding, innermost instances last:
/// every binder is replaced by the composition of its `n` body instances,
/// which are then eliminated recursively. Sequence conditionals whose
/// guard comes out closed are resolved to the empty sequence or their
/// body; a conditional with a free variable in its guard is kept.
pub fn eliminate_naive(t: &Term) -> Term {
    match t {
        Term::Binder(kind, n, var, body) => {
            let op = binder_op(*kind);
            let mut parts: Vec<Term> = (0..u64::from(*n))
                .map(|j| {
                    let inst = subst_quant(body, &unary_numeral(j), *var)
                        .expect("numeral is a quantity");
                    eliminate_naive(&inst)
                })
                .collect();
            let mut acc = parts.pop().expect("binder range is at least 1");
            while let Some(p) = parts.pop() {
                acc = op(p, acc);
            }
            acc
        }
        Term::SeqCond(r, s) => {
            let r = eliminate_naive(r);
            match eval_closed_rational(&r) {
                Some(v) if v.is_zero() => Term::EmptySeq,
                Some(_) => eliminate_naive(s),
                None => Term::seq_cond(r, eliminate_naive(s)),
            }
        }
        _ => map_rebuild(t, &eliminate_naive),
    }
}

fn map_rebuild(t: &Term, f: &dyn Fn(&Term) -> Term) -> Term {
    match t {
        Term::QVar(_)
        | Term::Zero
        | Term::One
        | Term::PVar(_)
        | Term::Delta
        | Term::Eps
        | Term::Act(_)
        | Term::SVar(_)
        | Term::EmptySeq => t.clone(),
        Term::Add(a, b) => Term::add(f(a), f(b)),
        Term::Mul(a, b) => Term::mul(f(a), f(b)),
        Term::Neg(a) => Term::neg(f(a)),
        Term::Minv(a) => Term::minv(f(a)),
        Term::Sign(a) => Term::sign(f(a)),
        Term::DataAct(l, args) => Term::DataAct(l.clone(), args.iter().map(f).collect()),
        Term::Alt(a, b) => Term::alt(f(a), f(b)),
        Term::SeqC(a, b) => Term::seqc(f(a), f(b)),
        Term::ParC(a, b) => Term::parc(f(a), f(b)),
        Term::LeftMerge(a, b) => Term::left_merge(f(a), f(b)),
        Term::CommMerge(a, b) => Term::comm_merge(f(a), f(b)),
        Term::Encap(h, a) => Term::Encap(h.clone(), Box::new(f(a))),
        Term::Guard(q, p) => Term::guard(f(q), f(p)),
        Term::Termi(a) => Term::termi(f(a)),
        Term::Single(p) => Term::single(f(p)),
        Term::Concat(a, b) => Term::concat(f(a), f(b)),
        Term::SeqCond(q, s) => Term::seq_cond(f(q), f(s)),
        Term::GenAlt(s) => Term::gen_alt(f(s)),
        Term::GenSeq(s) => Term::gen_seq(f(s)),
        Term::GenPar(s) => Term::gen_par(f(s)),
        Term::Binder(kind, n, var, body) => Term::binder(*kind, *n, *var, f(body)),
    }
}

fn neutral_pad(kind: BinderKind, r: Term, body: Term, features: FeatureSet) -> Option<Term> {
    Some(match kind {
        BinderKind::Sum => cond_quant(Term::Zero, r, body),
        BinderKind::Prod => cond_quant(Term::One, r, body),
        BinderKind::Chc => cond_proc(Term::Delta, r, body),
        BinderKind::SeqB | BinderKind::ParB => {
            if features.epsilon_enabled() {
                cond_proc(Term::Eps, r, body)
            } else {
                return None;
            }
        }
        BinderKind::Conc => Term::seq_cond(r, body),
    })
}

fn binary_expand(kind: BinderKind, n: u32, var: VarName, body: Term, features: FeatureSet) -> Term {
    match n {
        1 => subst_quant(&body, &Term::Zero, var).expect("numeral is a quantity"),
        2 => Term::binder(kind, 2, var, body),
        _ if n.is_power_of_two() => {
            // halve the range: a range-2 binder over u around a range-n/2
            // binder over a fresh v. For the commutative families the index
            // is rebuilt as 2*v + u (low bit outside); the ordered families
            // need (n/2)*u + v so enumeration order is preserved.
            let fresh = fresh_u_var(&[&body, &Term::QVar(var)]);
            let ordered = matches!(kind, BinderKind::SeqB | BinderKind::ParB | BinderKind::Conc);
            let index = if ordered {
                Term::add(
                    Term::mul(compact_numeral(u64::from(n) / 2), Term::QVar(var)),
                    Term::QVar(fresh),
                )
            } else {
                Term::add(
                    Term::mul(compact_numeral(2), Term::QVar(fresh)),
                    Term::QVar(var),
                )
            };
            let shifted = subst_quant(&body, &index, var).expect("shift is a quantity");
            let inner = binary_expand(kind, n / 2, fresh, shifted, features);
            Term::binder(kind, 2, var, inner)
        }
        _ => {
            // `1 - sign(u - (n-1))` is nonzero exactly on 0..=n-1, so the
            // padded body acts as the composition's neutral element beyond
            // the original range
            let r = Term::sub(
                Term::One,
                Term::sign(Term::sub(Term::QVar(var), compact_numeral(u64::from(n) - 1))),
            );
            match neutral_pad(kind, r, body.clone(), features) {
                Some(padded) => {
                    binary_expand(kind, n.next_power_of_two(), var, padded, features)
                }
                None => {
                    // no neutral element available: split greedily at the
                    // largest power of two below n and shift the remainder
                    let op = binder_op(kind);
                    let h = n.next_power_of_two() / 2;
                    let left = binary_expand(kind, h, var, body.clone(), features);
                    let shifted = subst_quant(
                        &body,
                        &Term::add(compact_numeral(u64::from(h)), Term::QVar(var)),
                        var,
                    )
                    .expect("shift is a quantity");
                    let right = binary_expand(kind, n - h, var, shifted, features);
                    op(left, right)
                }
            }
        }
    }
}

/// Reshapes every binder into nested range-2 binders (eliminating range-1
/// binders outright). Ranges that are powers of two are split bitwise;
/// other ranges are padded with the composition's neutral element up to
/// the next power of two, or, for sequential and parallel comprehension
/// without the empty process, split greedily.
pub fn eliminate_binary(t: &Term, features: FeatureSet) -> Term {
    match t {
        Term::Binder(kind, n, var, body) => {
            let body = eliminate_binary(body, features);
            binary_expand(*kind, *n, *var, body, features)
        }
        _ => map_rebuild(t, &|c| eliminate_binary(c, features)),
    }
}

/// Rewrites the process binders through sequence comprehension:
/// choice, sequential and parallel comprehension over a body `P` become
/// `Alt`/`Seq`/`Par` of the sequence comprehension of `<P>`.
pub fn rewrite_via_sequences(t: &Term) -> Term {
    match t {
        Term::Binder(kind @ (BinderKind::Chc | BinderKind::SeqB | BinderKind::ParB), n, var, body) => {
            let wrap = match kind {
                BinderKind::Chc => Term::gen_alt,
                BinderKind::SeqB => Term::gen_seq,
                _ => Term::gen_par,
            };
            wrap(Term::binder(
                BinderKind::Conc,
                *n,
                *var,
                Term::single(rewrite_via_sequences(body)),
            ))
        }
        _ => map_rebuild(t, &rewrite_via_sequences),
    }
}

/// Applies an elimination strategy. `Naive` removes all binders;
/// `Binary` leaves nested range-2 binders; `Sequences` first reroutes the
/// process binders through sequence comprehension (requiring the
/// sequences feature) and then goes binary.
pub fn eliminate(t: &Term, strategy: Strategy, features: FeatureSet) -> Term {
    match strategy {
        Strategy::Naive => eliminate_naive(t),
        Strategy::Binary => eliminate_binary(t, features),
        Strategy::Sequences => eliminate_binary(&rewrite_via_sequences(t), features),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{binder_census, tsize};
    use alloc::vec;

    fn u() -> VarName {
        VarName::u(0)
    }

    fn sum(n: u32, body: Term) -> Term {
        Term::binder(BinderKind::Sum, n, u(), body)
    }

    fn eval_q(t: &Term) -> MeadowValue {
        eval_closed_rational(t).expect("closed quantity")
    }

    #[test]
    fn naive_sum3_shape_and_value() {
        let t = sum(3, Term::QVar(u()));
        let got = eliminate_naive(&t);
        let want = Term::add(
            unary_numeral(0),
            Term::add(unary_numeral(1), unary_numeral(2)),
        );
        assert_eq!(got, want);
        assert_eq!(eval_q(&got), MeadowValue::rational(3, 1));
    }

    #[test]
    fn naive_sum7_of_squares() {
        let t = sum(7, Term::mul(Term::QVar(u()), Term::QVar(u())));
        let got = eliminate_naive(&t);
        assert!(binder_census(&got).is_empty());
        assert_eq!(eval_q(&got), MeadowValue::rational(91, 1));
    }

    #[test]
    fn binary_preserves_value() {
        for n in [1u32, 2, 3, 4, 5, 6, 7, 8, 11, 16] {
            let t = sum(n, Term::mul(Term::QVar(u()), Term::QVar(u())));
            let b = eliminate_binary(&t, FeatureSet::base());
            let full = eliminate_naive(&b);
            let m = i64::from(n) - 1;
            let want = m * (m + 1) * (2 * m + 1) / 6;
            assert_eq!(
                eval_q(&full),
                MeadowValue::rational(want, 1),
                "sum of squares below {n}"
            );
        }
    }

    #[test]
    fn binary_sum7_census() {
        // 7 pads to 8, which splits into three nested range-2 binders
        let t = sum(7, Term::QVar(u()));
        let b = eliminate_binary(&t, FeatureSet::base());
        let census = binder_census(&b);
        assert_eq!(census.len(), 1);
        assert_eq!(census.get(&(BinderKind::Sum, 2)), Some(&3));
        assert_eq!(eval_q(&eliminate_naive(&b)), MeadowValue::rational(21, 1));
    }

    #[test]
    fn naive_size_of_duplicating_body() {
        // body u+u duplicates each numeral: total 2n^2 + 2n - 1
        for n in [2u32, 3, 5, 8] {
            let t = sum(n, Term::add(Term::QVar(u()), Term::QVar(u())));
            let size = tsize(&eliminate_naive(&t));
            let n = u64::from(n);
            assert_eq!(size, 2 * n * n + 2 * n - 1);
        }
    }

    #[test]
    fn cond_quant_selects() {
        let c = cond_quant(compact_numeral(5), Term::Zero, compact_numeral(9));
        assert_eq!(eval_q(&c), MeadowValue::rational(5, 1));
        let c = cond_quant(compact_numeral(5), Term::One, compact_numeral(9));
        assert_eq!(eval_q(&c), MeadowValue::rational(9, 1));
    }

    #[test]
    fn seq_binder_without_epsilon_splits_greedily() {
        let body = Term::data_act("a", vec![Term::QVar(u())]);
        let t = Term::binder(BinderKind::SeqB, 3, u(), body.clone());
        let b = eliminate_binary(&t, FeatureSet::base());
        // 3 = 2 + 1: one range-2 binder sequenced with a shifted instance
        let census = binder_census(&b);
        assert_eq!(census.get(&(BinderKind::SeqB, 2)), Some(&1));
        assert_eq!(census.len(), 1);
        assert!(matches!(b, Term::SeqC(..)));

        // with the empty process available the range pads to 4 instead
        let t = Term::binder(BinderKind::SeqB, 3, u(), body);
        let b = eliminate_binary(&t, FeatureSet::with_epsilon());
        let census = binder_census(&b);
        assert_eq!(census.get(&(BinderKind::SeqB, 2)), Some(&2));
        assert_eq!(census.len(), 1);
    }

    #[test]
    fn conc_padding_resolves_via_seq_cond() {
        let body = Term::single(Term::data_act("a", vec![Term::QVar(u())]));
        let t = Term::binder(BinderKind::Conc, 3, u(), body);
        let b = eliminate_binary(&t, FeatureSet::full());
        fn count(t: &Term, pred: &dyn Fn(&Term) -> bool) -> u64 {
            u64::from(pred(t)) + t.children().iter().map(|c| count(c, pred)).sum::<u64>()
        }
        assert!(count(&b, &|t| matches!(t, Term::SeqCond(..))) > 0);
        let full = eliminate_naive(&b);
        assert_eq!(count(&full, &|t| matches!(t, Term::SeqCond(..))), 0);
        // padding leaves exactly the three original singletons
        assert_eq!(count(&full, &|t| matches!(t, Term::Single(..))), 3);
        assert!(binder_census(&full).is_empty());
    }

    #[test]
    fn sequences_strategy_rewrites_process_binders() {
        let t = Term::binder(
            BinderKind::Chc,
            4,
            u(),
            Term::data_act("a", vec![Term::QVar(u())]),
        );
        let s = eliminate(&t, Strategy::Sequences, FeatureSet::full());
        fn has(t: &Term, pred: &dyn Fn(&Term) -> bool) -> bool {
            pred(t) || t.children().iter().any(|c| has(c, pred))
        }
        assert!(has(&s, &|t| matches!(t, Term::GenAlt(..))));
        let census = binder_census(&s);
        assert_eq!(census.get(&(BinderKind::Conc, 2)), Some(&2));
        assert_eq!(census.len(), 1);
    }

    #[test]
    fn expand_binder_single_level() {
        let inner = Term::binder(BinderKind::Sum, 2, VarName::u(1), Term::QVar(VarName::u(1)));
        let t = Term::add(Term::QVar(u()), inner.clone());
        let got = expand_binder(BinderKind::Sum, 2, u(), &t);
        // inner binder untouched, outer variable replaced by numerals
        let want = Term::add(
            Term::add(unary_numeral(0), inner.clone()),
            Term::add(unary_numeral(1), inner),
        );
        assert_eq!(got, want);
    }
}
