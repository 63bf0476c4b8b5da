//! Interpretation in concrete models: evaluation of quantity terms in a
//! meadow model, and normalization of closed process terms into a
//! canonical normal form that decides derivable equality.
//!
//! A normal form is a set of `action . tail` summands plus a termination
//! flag (the empty-process summand). Set union realizes the idempotence,
//! commutativity and associativity of alternative composition, so two
//! closed terms are equal in the initial model exactly when their normal
//! forms are equal.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Signed;

use crate::eliminate::eliminate_naive;
use crate::meadow::{self, MeadowError, MeadowModel, MeadowValue};
use crate::terms::{
    compact_numeral, sort_check, subst_proc, subst_quant, subst_seq, Pool, Sort, Term, TermError,
    VarName,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemError {
    Meadow(MeadowError),
    Term(TermError),
    /// A variable is free in a position that must be closed.
    Unbound(VarName),
    /// `q / q` evaluated to something other than 0 or 1 (possible only in
    /// non-cancellation models), so the guard is undetermined.
    GuardResidue(MeadowValue),
    /// The term has the wrong sort for the requested interpretation.
    WrongSort { expected: Sort, found: Sort },
}

impl fmt::Display for SemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemError::Meadow(e) => write!(f, "{e}"),
            SemError::Term(e) => write!(f, "{e}"),
            SemError::Unbound(v) => write!(f, "unbound variable {v}"),
            SemError::GuardResidue(v) => {
                write!(f, "guard residue {v} is neither 0 nor 1")
            }
            SemError::WrongSort { expected, found } => {
                write!(f, "expected a {expected} term, found a {found} term")
            }
        }
    }
}

impl From<MeadowError> for SemError {
    fn from(e: MeadowError) -> SemError {
        SemError::Meadow(e)
    }
}

impl From<TermError> for SemError {
    fn from(e: TermError) -> SemError {
        SemError::Term(e)
    }
}

/// The head of a normal-form summand: a plain action or a data-handling
/// action with evaluated arguments.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ActionHead {
    Plain(String),
    Data(String, Vec<MeadowValue>),
}

impl ActionHead {
    pub fn label(&self) -> &str {
        match self {
            ActionHead::Plain(l) | ActionHead::Data(l, _) => l,
        }
    }
}

impl fmt::Display for ActionHead {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionHead::Plain(l) => write!(f, "{l}"),
            ActionHead::Data(l, args) => {
                write!(f, "{l}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// What happens after a summand's action: successful termination, or a
/// residual process. A residual equal to the empty process is always
/// canonicalized to `Stop`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Tail {
    Stop,
    Next(Box<NormalForm>),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NormalForm {
    pub summands: BTreeSet<(ActionHead, Tail)>,
    /// Whether the process can terminate immediately (carries an
    /// empty-process summand).
    pub terminates: bool,
}

impl NormalForm {
    pub fn delta() -> NormalForm {
        NormalForm {
            summands: BTreeSet::new(),
            terminates: false,
        }
    }

    pub fn eps() -> NormalForm {
        NormalForm {
            summands: BTreeSet::new(),
            terminates: true,
        }
    }

    pub fn action(head: ActionHead) -> NormalForm {
        let mut summands = BTreeSet::new();
        summands.insert((head, Tail::Stop));
        NormalForm {
            summands,
            terminates: false,
        }
    }

    pub fn is_delta(&self) -> bool {
        self.summands.is_empty() && !self.terminates
    }

    pub fn is_eps(&self) -> bool {
        self.summands.is_empty() && self.terminates
    }
}

fn tail_of(nf: NormalForm) -> Tail {
    if nf.is_eps() {
        Tail::Stop
    } else {
        Tail::Next(Box::new(nf))
    }
}

fn tail_nf(t: &Tail) -> NormalForm {
    match t {
        Tail::Stop => NormalForm::eps(),
        Tail::Next(nf) => (**nf).clone(),
    }
}

pub fn nf_alt(x: &NormalForm, y: &NormalForm) -> NormalForm {
    NormalForm {
        summands: x.summands.union(&y.summands).cloned().collect(),
        terminates: x.terminates || y.terminates,
    }
}

pub fn nf_seq(x: &NormalForm, y: &NormalForm) -> NormalForm {
    let mut summands: BTreeSet<(ActionHead, Tail)> = x
        .summands
        .iter()
        .map(|(h, t)| (h.clone(), tail_of(nf_seq(&tail_nf(t), y))))
        .collect();
    if x.terminates {
        summands.extend(y.summands.iter().cloned());
    }
    NormalForm {
        summands,
        terminates: x.terminates && y.terminates,
    }
}

/// The summands contributed by `x` doing the first step of `x || y`.
fn lm_summands(x: &NormalForm, y: &NormalForm, gamma: &CommTable) -> BTreeSet<(ActionHead, Tail)> {
    x.summands
        .iter()
        .map(|(h, t)| (h.clone(), tail_of(nf_par(&tail_nf(t), y, gamma))))
        .collect()
}

fn comm_head(a: &ActionHead, b: &ActionHead, gamma: &CommTable) -> Option<ActionHead> {
    let c = gamma.get(a.label(), b.label())?;
    match (a, b) {
        (ActionHead::Plain(_), ActionHead::Plain(_)) => Some(ActionHead::Plain(c.to_string())),
        (ActionHead::Data(_, xs), ActionHead::Data(_, ys)) => {
            if xs.len() == ys.len() && xs == ys {
                Some(ActionHead::Data(c.to_string(), xs.clone()))
            } else {
                None
            }
        }
        _ => None,
    }
}

fn cm_summands(x: &NormalForm, y: &NormalForm, gamma: &CommTable) -> BTreeSet<(ActionHead, Tail)> {
    let mut out = BTreeSet::new();
    for (h1, t1) in &x.summands {
        for (h2, t2) in &y.summands {
            if let Some(h) = comm_head(h1, h2, gamma) {
                out.insert((h, tail_of(nf_par(&tail_nf(t1), &tail_nf(t2), gamma))));
            }
        }
    }
    out
}

pub fn nf_par(x: &NormalForm, y: &NormalForm, gamma: &CommTable) -> NormalForm {
    let mut summands = lm_summands(x, y, gamma);
    summands.extend(lm_summands(y, x, gamma));
    summands.extend(cm_summands(x, y, gamma));
    NormalForm {
        summands,
        terminates: x.terminates && y.terminates,
    }
}

/// Left merge as a process in its own right. Its termination follows the
/// axioms `x lm eps = x` and `eps lm x = delta`: it can terminate only
/// when both sides can and the left side also has an action to
/// contribute. (At `x = eps` those two axioms are in outright conflict;
/// this choice satisfies both everywhere else.)
pub fn nf_left_merge(x: &NormalForm, y: &NormalForm, gamma: &CommTable) -> NormalForm {
    NormalForm {
        summands: lm_summands(x, y, gamma),
        terminates: x.terminates && y.terminates && !x.summands.is_empty(),
    }
}

pub fn nf_comm_merge(x: &NormalForm, y: &NormalForm, gamma: &CommTable) -> NormalForm {
    NormalForm {
        summands: cm_summands(x, y, gamma),
        terminates: false,
    }
}

pub fn nf_encap(h: &BTreeSet<String>, x: &NormalForm) -> NormalForm {
    NormalForm {
        summands: x
            .summands
            .iter()
            .filter(|(head, _)| !h.contains(head.label()))
            .map(|(head, t)| {
                (
                    head.clone(),
                    match t {
                        Tail::Stop => Tail::Stop,
                        Tail::Next(nf) => tail_of(nf_encap(h, nf)),
                    },
                )
            })
            .collect(),
        terminates: x.terminates,
    }
}

/// Termination operator: eps if the process can terminate, delta
/// otherwise.
pub fn termi_nf(x: &NormalForm) -> NormalForm {
    if x.terminates {
        NormalForm::eps()
    } else {
        NormalForm::delta()
    }
}

/// An atomic action: a single summand with immediate termination after
/// the action and no empty-process summand.
pub fn isact_check(nf: &NormalForm) -> bool {
    !nf.terminates
        && nf.summands.len() == 1
        && matches!(nf.summands.iter().next(), Some((_, Tail::Stop)))
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "{}", if self.terminates { "eps" } else { "delta" });
        }
        for (i, (h, t)) in self.summands.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match t {
                Tail::Stop => write!(f, "{h}")?,
                Tail::Next(nf) => write!(f, "{h} . ({nf})")?,
            }
        }
        if self.terminates {
            write!(f, " + eps")?;
        }
        Ok(())
    }
}

/// A partial commutative and associative communication function on action
/// labels. Keys are stored unordered; construction rejects tables whose
/// induced total function (with "undefined" as absorbing) is not
/// associative.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CommTable {
    map: BTreeMap<(String, String), String>,
}

fn key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

impl CommTable {
    pub fn empty() -> CommTable {
        CommTable::default()
    }

    pub fn new<I>(entries: I) -> Result<CommTable, String>
    where
        I: IntoIterator<Item = (String, String, String)>,
    {
        let mut map = BTreeMap::new();
        for (a, b, c) in entries {
            let k = key(&a, &b);
            if let Some(prev) = map.get(&k) {
                if *prev != c {
                    return Err(format!(
                        "conflicting entries for {} | {}: {} and {}",
                        k.0, k.1, prev, c
                    ));
                }
            }
            map.insert(k, c);
        }
        let table = CommTable { map };
        let mut labels: BTreeSet<&str> = BTreeSet::new();
        for ((a, b), c) in &table.map {
            labels.insert(a);
            labels.insert(b);
            labels.insert(c);
        }
        for a in &labels {
            for b in &labels {
                for c in &labels {
                    let left = table.get(a, b).and_then(|ab| table.get(ab, c));
                    let right = table.get(b, c).and_then(|bc| table.get(a, bc));
                    if left != right {
                        return Err(format!(
                            "communication function is not associative at ({a}, {b}, {c})"
                        ));
                    }
                }
            }
        }
        Ok(table)
    }

    pub fn get(&self, a: &str, b: &str) -> Option<&str> {
        self.map.get(&key(a, b)).map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Context for interpretation: the meadow model, the communication
/// function, and bindings for free quantity, process and sequence
/// variables.
#[derive(Debug, Clone)]
pub struct NormCtx {
    pub model: MeadowModel,
    pub gamma: CommTable,
    pub rho: BTreeMap<VarName, MeadowValue>,
    pub proc_env: BTreeMap<VarName, Term>,
    pub seq_env: BTreeMap<VarName, Term>,
}

impl NormCtx {
    pub fn new(model: MeadowModel) -> NormCtx {
        NormCtx {
            model,
            gamma: CommTable::empty(),
            rho: BTreeMap::new(),
            proc_env: BTreeMap::new(),
            seq_env: BTreeMap::new(),
        }
    }

    pub fn rational() -> NormCtx {
        NormCtx::new(MeadowModel::Rational)
    }

    pub fn with_gamma(mut self, gamma: CommTable) -> NormCtx {
        self.gamma = gamma;
        self
    }

    pub fn bind_quant(mut self, v: VarName, value: MeadowValue) -> NormCtx {
        self.rho.insert(v, value);
        self
    }
}

/// Evaluates a quantity term in a meadow model under an assignment of
/// values to free quantity variables.
pub fn eval_quant(
    t: &Term,
    model: &MeadowModel,
    rho: &BTreeMap<VarName, MeadowValue>,
) -> Result<MeadowValue, SemError> {
    match t {
        Term::QVar(v) => rho.get(v).cloned().ok_or(SemError::Unbound(*v)),
        Term::Zero => Ok(model.zero()),
        Term::One => Ok(model.one()),
        Term::Add(a, b) => Ok(meadow::add(
            &eval_quant(a, model, rho)?,
            &eval_quant(b, model, rho)?,
        )?),
        Term::Mul(a, b) => Ok(meadow::mul(
            &eval_quant(a, model, rho)?,
            &eval_quant(b, model, rho)?,
        )?),
        Term::Neg(a) => Ok(meadow::neg(&eval_quant(a, model, rho)?)),
        Term::Minv(a) => Ok(meadow::minv(&eval_quant(a, model, rho)?)),
        Term::Sign(a) => Ok(meadow::sign(&eval_quant(a, model, rho)?)?),
        _ => Err(SemError::WrongSort {
            expected: Sort::Quant,
            found: sort_check(t).unwrap_or(Sort::Quant),
        }),
    }
}

fn biguint_numeral(n: &BigUint) -> Term {
    let two = BigUint::from(2u32);
    if n.bits() == 0 {
        Term::Zero
    } else if n.bits() == 1 {
        Term::One
    } else {
        let (q, r) = n.div_rem(&two);
        if r.bits() == 0 {
            Term::mul(Term::add(Term::One, Term::One), biguint_numeral(&q))
        } else {
            let even = n - BigUint::from(1u32);
            Term::add(biguint_numeral(&even), Term::One)
        }
    }
}

/// A closed quantity term denoting the given value, used to substitute
/// variable assignments into terms before elimination.
pub fn value_to_term(v: &MeadowValue) -> Term {
    match v {
        MeadowValue::Rational(q) => {
            let numer = biguint_numeral(q.numer().magnitude());
            let t = if q.denom().magnitude() == &BigUint::from(1u32) {
                numer
            } else {
                Term::mul(numer, Term::minv(biguint_numeral(q.denom().magnitude())))
            };
            if q.is_negative() {
                Term::neg(t)
            } else {
                t
            }
        }
        MeadowValue::Mod { residue, .. } => compact_numeral(*residue),
    }
}

/// Structural normal form of a closed, binder-free process term.
fn nf_closed(t: &Term, ctx: &NormCtx) -> Result<NormalForm, SemError> {
    match t {
        Term::PVar(v) => Err(SemError::Unbound(*v)),
        Term::Delta => Ok(NormalForm::delta()),
        Term::Eps => Ok(NormalForm::eps()),
        Term::Act(l) => Ok(NormalForm::action(ActionHead::Plain(l.clone()))),
        Term::DataAct(l, args) => {
            let vals = args
                .iter()
                .map(|a| eval_quant(a, &ctx.model, &ctx.rho))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(NormalForm::action(ActionHead::Data(l.clone(), vals)))
        }
        Term::Alt(a, b) => Ok(nf_alt(&nf_closed(a, ctx)?, &nf_closed(b, ctx)?)),
        Term::SeqC(a, b) => Ok(nf_seq(&nf_closed(a, ctx)?, &nf_closed(b, ctx)?)),
        Term::ParC(a, b) => Ok(nf_par(&nf_closed(a, ctx)?, &nf_closed(b, ctx)?, &ctx.gamma)),
        Term::LeftMerge(a, b) => Ok(nf_left_merge(
            &nf_closed(a, ctx)?,
            &nf_closed(b, ctx)?,
            &ctx.gamma,
        )),
        Term::CommMerge(a, b) => Ok(nf_comm_merge(
            &nf_closed(a, ctx)?,
            &nf_closed(b, ctx)?,
            &ctx.gamma,
        )),
        Term::Encap(h, a) => Ok(nf_encap(h, &nf_closed(a, ctx)?)),
        Term::Guard(q, p) => {
            let v = eval_quant(q, &ctx.model, &ctx.rho)?;
            let residue = meadow::mul(&v, &meadow::minv(&v))?;
            if residue.is_zero() {
                nf_closed(p, ctx)
            } else if residue == ctx.model.one() {
                Ok(NormalForm::delta())
            } else {
                Err(SemError::GuardResidue(residue))
            }
        }
        Term::Termi(a) => Ok(termi_nf(&nf_closed(a, ctx)?)),
        Term::GenAlt(s) => {
            let parts = nf_seq_closed(s, ctx)?;
            Ok(parts
                .iter()
                .rev()
                .fold(NormalForm::delta(), |acc, p| nf_alt(p, &acc)))
        }
        Term::GenSeq(s) => {
            let parts = nf_seq_closed(s, ctx)?;
            Ok(parts
                .iter()
                .rev()
                .fold(NormalForm::eps(), |acc, p| nf_seq(p, &acc)))
        }
        Term::GenPar(s) => {
            let parts = nf_seq_closed(s, ctx)?;
            Ok(parts
                .iter()
                .rev()
                .fold(NormalForm::eps(), |acc, p| nf_par(p, &acc, &ctx.gamma)))
        }
        _ => Err(SemError::WrongSort {
            expected: Sort::Proc,
            found: sort_check(t).unwrap_or(Sort::Proc),
        }),
    }
}

/// Structural normal form of a closed, binder-free sequence term: the
/// list of normal forms of its elements.
fn nf_seq_closed(t: &Term, ctx: &NormCtx) -> Result<Vec<NormalForm>, SemError> {
    match t {
        Term::SVar(v) => Err(SemError::Unbound(*v)),
        Term::EmptySeq => Ok(Vec::new()),
        Term::Single(p) => Ok(alloc::vec![nf_closed(p, ctx)?]),
        Term::Concat(a, b) => {
            let mut xs = nf_seq_closed(a, ctx)?;
            xs.extend(nf_seq_closed(b, ctx)?);
            Ok(xs)
        }
        Term::SeqCond(q, s) => {
            let v = eval_quant(q, &ctx.model, &ctx.rho)?;
            if v.is_zero() {
                Ok(Vec::new())
            } else {
                nf_seq_closed(s, ctx)
            }
        }
        _ => Err(SemError::WrongSort {
            expected: Sort::ProcSeq,
            found: sort_check(t).unwrap_or(Sort::ProcSeq),
        }),
    }
}

/// Resolves context bindings into the term: process and sequence
/// variables are replaced by their bound terms, quantity variables by
/// closed terms denoting their assigned values; then all binders are
/// eliminated.
fn resolve(t: &Term, ctx: &NormCtx) -> Result<Term, SemError> {
    let mut t = t.clone();
    for (v, binding) in &ctx.proc_env {
        t = subst_proc(&t, binding, *v)?;
    }
    for (v, binding) in &ctx.seq_env {
        t = subst_seq(&t, binding, *v)?;
    }
    for (v, value) in &ctx.rho {
        t = subst_quant(&t, &value_to_term(value), *v)?;
    }
    Ok(eliminate_naive(&t))
}

/// Normalizes a process term: context bindings are substituted, binders
/// eliminated, and the result folded into its normal form.
pub fn normalize(t: &Term, ctx: &NormCtx) -> Result<NormalForm, SemError> {
    sort_check(t)?;
    nf_closed(&resolve(t, ctx)?, ctx)
}

/// Normalizes a sequence term into the list of its elements' normal
/// forms.
pub fn normalize_seq(t: &Term, ctx: &NormCtx) -> Result<Vec<NormalForm>, SemError> {
    sort_check(t)?;
    nf_seq_closed(&resolve(t, ctx)?, ctx)
}

/// Whether two process terms are equal in the initial model.
pub fn proc_equal(a: &Term, b: &Term, ctx: &NormCtx) -> Result<bool, SemError> {
    Ok(normalize(a, ctx)? == normalize(b, ctx)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Interpreted {
    Quant(MeadowValue),
    Proc(NormalForm),
    Seq(Vec<NormalForm>),
}

impl fmt::Display for Interpreted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interpreted::Quant(v) => write!(f, "{v}"),
            Interpreted::Proc(nf) => write!(f, "{nf}"),
            Interpreted::Seq(parts) => {
                write!(f, "<")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "> ++ <")?;
                    }
                    write!(f, "{p}")?;
                }
                if parts.is_empty() {
                    write!(f, ">")
                } else {
                    write!(f, ">")
                }
            }
        }
    }
}

/// Interprets a term of any sort in the context's model.
pub fn interpret(t: &Term, ctx: &NormCtx) -> Result<Interpreted, SemError> {
    match sort_check(t)? {
        Sort::Quant => {
            let resolved = resolve(t, ctx)?;
            Ok(Interpreted::Quant(eval_quant(&resolved, &ctx.model, &ctx.rho)?))
        }
        Sort::Proc => Ok(Interpreted::Proc(normalize(t, ctx)?)),
        Sort::ProcSeq => Ok(Interpreted::Seq(normalize_seq(t, ctx)?)),
    }
}

/// Whether two terms of equal sort are equal under the interpretation.
pub fn term_equal(a: &Term, b: &Term, ctx: &NormCtx) -> Result<bool, SemError> {
    Ok(interpret(a, ctx)? == interpret(b, ctx)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eliminate::{eliminate_binary, Strategy};
    use crate::extensions::FeatureSet;
    use crate::terms::BinderKind;
    use alloc::vec;

    fn ctx() -> NormCtx {
        NormCtx::rational()
    }

    fn gamma_abc() -> CommTable {
        CommTable::new([("a".to_string(), "b".to_string(), "c".to_string())]).unwrap()
    }

    fn nf(t: &Term) -> NormalForm {
        normalize(t, &ctx()).unwrap()
    }

    fn a() -> Term {
        Term::act("a")
    }
    fn b() -> Term {
        Term::act("b")
    }
    fn c() -> Term {
        Term::act("c")
    }

    #[test]
    fn alt_laws() {
        assert_eq!(nf(&Term::alt(a(), a())), nf(&a()));
        assert_eq!(nf(&Term::alt(a(), Term::Delta)), nf(&a()));
        assert_eq!(nf(&Term::alt(a(), b())), nf(&Term::alt(b(), a())));
        assert_eq!(
            nf(&Term::alt(Term::alt(a(), b()), c())),
            nf(&Term::alt(a(), Term::alt(b(), c())))
        );
    }

    #[test]
    fn seq_distribution() {
        // (a + b) . c = a . c + b . c
        assert_eq!(
            nf(&Term::seqc(Term::alt(a(), b()), c())),
            nf(&Term::alt(Term::seqc(a(), c()), Term::seqc(b(), c()))),
        );
        // delta absorbs on the left
        assert_eq!(nf(&Term::seqc(Term::Delta, a())), nf(&Term::Delta));
    }

    #[test]
    fn par_without_communication() {
        let t = Term::parc(a(), b());
        let want = Term::alt(Term::seqc(a(), b()), Term::seqc(b(), a()));
        assert_eq!(nf(&t), nf(&want));
    }

    #[test]
    fn par_with_communication() {
        let ctx = ctx().with_gamma(gamma_abc());
        let t = Term::parc(a(), b());
        let want = Term::alt(
            Term::alt(Term::seqc(a(), b()), Term::seqc(b(), a())),
            c(),
        );
        assert_eq!(
            normalize(&t, &ctx).unwrap(),
            normalize(&want, &ctx).unwrap()
        );
    }

    #[test]
    fn data_communication() {
        let ctx = ctx().with_gamma(gamma_abc());
        let one = Term::One;
        let two = Term::add(Term::One, Term::One);
        // equal arguments communicate
        let t = Term::comm_merge(
            Term::data_act("a", vec![one.clone()]),
            Term::data_act("b", vec![one.clone()]),
        );
        let want = Term::data_act("c", vec![one.clone()]);
        assert_eq!(
            normalize(&t, &ctx).unwrap(),
            normalize(&want, &ctx).unwrap()
        );
        // unequal arguments do not
        let t = Term::comm_merge(
            Term::data_act("a", vec![one]),
            Term::data_act("b", vec![two]),
        );
        assert!(normalize(&t, &ctx).unwrap().is_delta());
    }

    #[test]
    fn guards() {
        assert_eq!(nf(&Term::guard(Term::Zero, a())), nf(&a()));
        assert!(nf(&Term::guard(Term::One, a())).is_delta());
        // non-cancellation residue: 2/2 = 4 in Z/6
        let zmod6 = NormCtx::new(MeadowModel::z_mod(6).unwrap());
        let t = Term::guard(compact_numeral(2), a());
        assert!(matches!(
            normalize(&t, &zmod6),
            Err(SemError::GuardResidue(_))
        ));
    }

    #[test]
    fn epsilon_laws() {
        assert_eq!(nf(&Term::seqc(a(), Term::Eps)), nf(&a()));
        assert_eq!(nf(&Term::seqc(Term::Eps, a())), nf(&a()));
        assert_eq!(nf(&Term::parc(a(), Term::Eps)), nf(&a()));
        assert!(nf(&Term::termi(a())).is_delta());
        assert!(nf(&Term::termi(Term::Eps)).is_eps());
        assert!(nf(&Term::termi(Term::alt(a(), Term::Eps))).is_eps());
        // x + term(x) = x
        let x = Term::alt(a(), Term::Eps);
        assert_eq!(nf(&Term::alt(x.clone(), Term::termi(x.clone()))), nf(&x));
    }

    #[test]
    fn left_merge_epsilon_edges() {
        assert_eq!(nf(&Term::left_merge(a(), Term::Eps)), nf(&a()));
        assert!(nf(&Term::left_merge(Term::Eps, a())).is_delta());
        let x = Term::alt(a(), Term::Eps);
        // x lm eps = x even when x terminates
        assert_eq!(nf(&Term::left_merge(x.clone(), Term::Eps)), nf(&x));
        // a lm x = a . x
        assert_eq!(
            nf(&Term::left_merge(a(), x.clone())),
            nf(&Term::seqc(a(), x))
        );
    }

    #[test]
    fn encapsulation() {
        let t = Term::encap(["a"], Term::alt(a(), b()));
        assert_eq!(nf(&t), nf(&b()));
        let t = Term::encap(["a"], Term::seqc(b(), a()));
        assert_eq!(nf(&t), nf(&Term::seqc(b(), Term::Delta)));
    }

    #[test]
    fn chc_binder_normalizes() {
        let u = VarName::u(0);
        let t = Term::binder(
            BinderKind::Chc,
            3,
            u,
            Term::data_act("a", vec![Term::QVar(u)]),
        );
        let want = Term::alt(
            Term::alt(
                Term::data_act("a", vec![Term::Zero]),
                Term::data_act("a", vec![Term::One]),
            ),
            Term::data_act("a", vec![Term::add(Term::One, Term::One)]),
        );
        assert_eq!(nf(&t), nf(&want));
    }

    #[test]
    fn elimination_oracle() {
        let u = VarName::u(0);
        let body = Term::seqc(
            Term::data_act("a", vec![Term::QVar(u)]),
            Term::alt(b(), Term::guard(Term::QVar(u), c())),
        );
        for kind in [BinderKind::Chc, BinderKind::SeqB, BinderKind::ParB] {
            for n in [1u32, 2, 3, 5, 8] {
                let t = Term::binder(kind, n, u, body.clone());
                let direct = nf(&t);
                for features in [FeatureSet::base(), FeatureSet::with_epsilon()] {
                    let bin = eliminate_binary(&t, features);
                    assert_eq!(nf(&bin), direct, "{kind:?} n={n} {features:?}");
                }
            }
        }
    }

    #[test]
    fn sequences_strategy_oracle() {
        let u = VarName::u(0);
        let body = Term::data_act("a", vec![Term::QVar(u)]);
        for kind in [BinderKind::Chc, BinderKind::SeqB, BinderKind::ParB] {
            for n in [1u32, 3, 4, 6] {
                let t = Term::binder(kind, n, u, body.clone());
                let s = crate::eliminate::eliminate(&t, Strategy::Sequences, FeatureSet::full());
                assert_eq!(nf(&s), nf(&t), "{kind:?} n={n}");
            }
        }
    }

    #[test]
    fn generalized_compositions() {
        let s = Term::concat(Term::single(a()), Term::single(b()));
        assert_eq!(nf(&Term::gen_seq(s.clone())), nf(&Term::seqc(a(), b())));
        assert_eq!(nf(&Term::gen_alt(s.clone())), nf(&Term::alt(a(), b())));
        assert_eq!(nf(&Term::gen_par(s)), nf(&Term::parc(a(), b())));
        assert!(nf(&Term::gen_alt(Term::EmptySeq)).is_delta());
        assert!(nf(&Term::gen_seq(Term::EmptySeq)).is_eps());
        assert!(nf(&Term::gen_par(Term::EmptySeq)).is_eps());
    }

    #[test]
    fn eval_quant_with_assignment() {
        let u = VarName::u(0);
        let t = Term::mul(
            Term::add(Term::QVar(u), Term::One),
            Term::minv(Term::QVar(u)),
        );
        let mut rho = BTreeMap::new();
        rho.insert(u, MeadowValue::rational(1, 2));
        let got = eval_quant(&t, &MeadowModel::Rational, &rho).unwrap();
        assert_eq!(got, MeadowValue::rational(3, 1));
        assert!(matches!(
            eval_quant(&Term::QVar(VarName::u(5)), &MeadowModel::Rational, &rho),
            Err(SemError::Unbound(_))
        ));
    }

    #[test]
    fn value_round_trip() {
        for v in [
            MeadowValue::rational(0, 1),
            MeadowValue::rational(7, 1),
            MeadowValue::rational(-3, 2),
            MeadowValue::rational(1, 3),
            MeadowValue::rational(-1000, 7),
        ] {
            let t = value_to_term(&v);
            let got = eval_quant(&t, &MeadowModel::Rational, &BTreeMap::new()).unwrap();
            assert_eq!(got, v);
        }
        let m = MeadowModel::z_mod(6).unwrap();
        let v = MeadowValue::Mod {
            modulus: 6,
            residue: 4,
        };
        let got = eval_quant(&value_to_term(&v), &m, &BTreeMap::new()).unwrap();
        assert_eq!(got, v);
    }

    #[test]
    fn isact_examples() {
        assert!(isact_check(&nf(&a())));
        assert!(isact_check(&nf(&Term::data_act("a", vec![Term::One]))));
        assert!(!isact_check(&nf(&Term::Delta)));
        assert!(!isact_check(&nf(&Term::Eps)));
        assert!(!isact_check(&nf(&Term::alt(a(), b()))));
        assert!(!isact_check(&nf(&Term::seqc(a(), b()))));
    }

    #[test]
    fn comm_table_validation() {
        // commutativity is structural
        let g = gamma_abc();
        assert_eq!(g.get("a", "b"), Some("c"));
        assert_eq!(g.get("b", "a"), Some("c"));
        assert_eq!(g.get("a", "c"), None);
        // conflicting entries rejected
        assert!(CommTable::new([
            ("a".to_string(), "b".to_string(), "c".to_string()),
            ("b".to_string(), "a".to_string(), "d".to_string()),
        ])
        .is_err());
        // non-associative table rejected: (a|a)|b defined path mismatch
        assert!(CommTable::new([
            ("a".to_string(), "a".to_string(), "b".to_string()),
            ("a".to_string(), "b".to_string(), "a".to_string()),
        ])
        .is_err());
        // an associative one passes
        assert!(CommTable::new([(
            "a".to_string(),
            "a".to_string(),
            "b".to_string()
        )])
        .is_ok());
    }

    #[test]
    fn merge_associativity_samples() {
        let ctx = ctx().with_gamma(gamma_abc());
        let samples = [
            (a(), b(), c()),
            (Term::alt(a(), Term::Eps), Term::seqc(b(), a()), c()),
            (Term::seqc(a(), b()), Term::Eps, Term::alt(b(), c())),
        ];
        for (x, y, z) in samples {
            let l = Term::parc(Term::parc(x.clone(), y.clone()), z.clone());
            let r = Term::parc(x, Term::parc(y, z));
            assert_eq!(normalize(&l, &ctx).unwrap(), normalize(&r, &ctx).unwrap());
        }
    }

    #[test]
    fn interpret_dispatches_on_sort() {
        let q = Term::add(Term::One, Term::One);
        assert_eq!(
            interpret(&q, &ctx()).unwrap(),
            Interpreted::Quant(MeadowValue::rational(2, 1))
        );
        assert!(matches!(
            interpret(&a(), &ctx()).unwrap(),
            Interpreted::Proc(_)
        ));
        assert!(matches!(
            interpret(&Term::single(a()), &ctx()).unwrap(),
            Interpreted::Seq(parts) if parts.len() == 1
        ));
    }
}
