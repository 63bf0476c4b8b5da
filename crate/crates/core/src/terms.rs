//! The sorted AST of binding terms over the sorts of quantities, processes
//! and process sequences, with free-variable analysis, capture-avoiding
//! substitution, alpha-equivalence, the term-size measure and the two
//! numeral builders.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// The three sorts of the calculus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    Quant,
    Proc,
    ProcSeq,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Quant => write!(f, "Quant"),
            Sort::Proc => write!(f, "Proc"),
            Sort::ProcSeq => write!(f, "ProcSeq"),
        }
    }
}

/// Variable pools. `U` names quantities, `X` processes, `V` process
/// sequences. `XPrime` is the reserved sub-pool of process variables used
/// only inside axiom schemas (instantiated with atomic actions before
/// interpretation); it is rejected by the user-facing parser.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pool {
    U,
    X,
    XPrime,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarName {
    pub pool: Pool,
    pub index: u32,
}

impl VarName {
    pub const fn u(index: u32) -> VarName {
        VarName { pool: Pool::U, index }
    }
    pub const fn x(index: u32) -> VarName {
        VarName { pool: Pool::X, index }
    }
    pub const fn x_prime(index: u32) -> VarName {
        VarName { pool: Pool::XPrime, index }
    }
    pub const fn v(index: u32) -> VarName {
        VarName { pool: Pool::V, index }
    }

    pub fn sort(&self) -> Sort {
        match self.pool {
            Pool::U => Sort::Quant,
            Pool::X | Pool::XPrime => Sort::Proc,
            Pool::V => Sort::ProcSeq,
        }
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.pool, self.index) {
            (Pool::U, 0) => write!(f, "u"),
            (Pool::U, 1) => write!(f, "v"),
            (Pool::U, 2) => write!(f, "w"),
            (Pool::U, i) => write!(f, "u{i}"),
            (Pool::X, 0) => write!(f, "x"),
            (Pool::X, 1) => write!(f, "y"),
            (Pool::X, 2) => write!(f, "z"),
            (Pool::X, i) => write!(f, "x{i}"),
            (Pool::XPrime, i) => write!(f, "?a{i}"),
            (Pool::V, 0) => write!(f, "s"),
            (Pool::V, i) => write!(f, "s{i}"),
        }
    }
}

/// The six binder families. `Sum`/`Prod` bind in quantity terms,
/// `Chc`/`SeqB`/`ParB` in process terms, `Conc` in sequence terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BinderKind {
    Sum,
    Prod,
    Chc,
    SeqB,
    ParB,
    Conc,
}

impl BinderKind {
    pub fn body_sort(&self) -> Sort {
        match self {
            BinderKind::Sum | BinderKind::Prod => Sort::Quant,
            BinderKind::Chc | BinderKind::SeqB | BinderKind::ParB => Sort::Proc,
            BinderKind::Conc => Sort::ProcSeq,
        }
    }

    pub fn keyword(&self) -> &'static str {
        match self {
            BinderKind::Sum => "sum",
            BinderKind::Prod => "prod",
            BinderKind::Chc => "chc",
            BinderKind::SeqB => "seqc",
            BinderKind::ParB => "parc",
            BinderKind::Conc => "conc",
        }
    }
}

impl fmt::Display for BinderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.keyword())
    }
}

/// A binding term. Sort-correctness is checked by [`sort_check`], not by
/// the type; construction helpers below keep call sites readable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    // quantities
    QVar(VarName),
    Zero,
    One,
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    Minv(Box<Term>),
    Sign(Box<Term>),
    // processes
    PVar(VarName),
    Delta,
    Eps,
    Act(String),
    DataAct(String, Vec<Term>),
    Alt(Box<Term>, Box<Term>),
    SeqC(Box<Term>, Box<Term>),
    ParC(Box<Term>, Box<Term>),
    LeftMerge(Box<Term>, Box<Term>),
    CommMerge(Box<Term>, Box<Term>),
    Encap(BTreeSet<String>, Box<Term>),
    Guard(Box<Term>, Box<Term>),
    Termi(Box<Term>),
    // process sequences
    SVar(VarName),
    EmptySeq,
    Single(Box<Term>),
    Concat(Box<Term>, Box<Term>),
    /// Ground-guarded sequence conditional: empty sequence when the guard
    /// quantity is zero, the body otherwise. Introduced by binary padding
    /// of `Conc` binders and resolved once its guard is closed.
    SeqCond(Box<Term>, Box<Term>),
    GenAlt(Box<Term>),
    GenSeq(Box<Term>),
    GenPar(Box<Term>),
    // binders
    Binder(BinderKind, u32, VarName, Box<Term>),
}

impl Term {
    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }
    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }
    pub fn neg(a: Term) -> Term {
        Term::Neg(Box::new(a))
    }
    pub fn minv(a: Term) -> Term {
        Term::Minv(Box::new(a))
    }
    pub fn sign(a: Term) -> Term {
        Term::Sign(Box::new(a))
    }
    /// a - b as sugar for a + (-b).
    pub fn sub(a: Term, b: Term) -> Term {
        Term::add(a, Term::neg(b))
    }
    /// a / b as sugar for a * inv(b).
    pub fn div(a: Term, b: Term) -> Term {
        Term::mul(a, Term::minv(b))
    }
    pub fn act(label: &str) -> Term {
        Term::Act(label.to_string())
    }
    pub fn data_act(label: &str, args: Vec<Term>) -> Term {
        Term::DataAct(label.to_string(), args)
    }
    pub fn alt(a: Term, b: Term) -> Term {
        Term::Alt(Box::new(a), Box::new(b))
    }
    pub fn seqc(a: Term, b: Term) -> Term {
        Term::SeqC(Box::new(a), Box::new(b))
    }
    pub fn parc(a: Term, b: Term) -> Term {
        Term::ParC(Box::new(a), Box::new(b))
    }
    pub fn left_merge(a: Term, b: Term) -> Term {
        Term::LeftMerge(Box::new(a), Box::new(b))
    }
    pub fn comm_merge(a: Term, b: Term) -> Term {
        Term::CommMerge(Box::new(a), Box::new(b))
    }
    pub fn encap<I: IntoIterator<Item = S>, S: Into<String>>(labels: I, body: Term) -> Term {
        Term::Encap(
            labels.into_iter().map(Into::into).collect(),
            Box::new(body),
        )
    }
    pub fn guard(q: Term, p: Term) -> Term {
        Term::Guard(Box::new(q), Box::new(p))
    }
    pub fn termi(p: Term) -> Term {
        Term::Termi(Box::new(p))
    }
    pub fn single(p: Term) -> Term {
        Term::Single(Box::new(p))
    }
    pub fn concat(a: Term, b: Term) -> Term {
        Term::Concat(Box::new(a), Box::new(b))
    }
    pub fn seq_cond(guard: Term, body: Term) -> Term {
        Term::SeqCond(Box::new(guard), Box::new(body))
    }
    pub fn gen_alt(s: Term) -> Term {
        Term::GenAlt(Box::new(s))
    }
    pub fn gen_seq(s: Term) -> Term {
        Term::GenSeq(Box::new(s))
    }
    pub fn gen_par(s: Term) -> Term {
        Term::GenPar(Box::new(s))
    }
    pub fn binder(kind: BinderKind, range: u32, var: VarName, body: Term) -> Term {
        debug_assert!(range >= 1);
        debug_assert_eq!(var.pool, Pool::U);
        Term::Binder(kind, range, var, Box::new(body))
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::QVar(_)
            | Term::Zero
            | Term::One
            | Term::PVar(_)
            | Term::Delta
            | Term::Eps
            | Term::Act(_)
            | Term::SVar(_)
            | Term::EmptySeq => Vec::new(),
            Term::Neg(a)
            | Term::Minv(a)
            | Term::Sign(a)
            | Term::Encap(_, a)
            | Term::Termi(a)
            | Term::Single(a)
            | Term::GenAlt(a)
            | Term::GenSeq(a)
            | Term::GenPar(a)
            | Term::Binder(_, _, _, a) => alloc::vec![a.as_ref()],
            Term::Add(a, b)
            | Term::Mul(a, b)
            | Term::Alt(a, b)
            | Term::SeqC(a, b)
            | Term::ParC(a, b)
            | Term::LeftMerge(a, b)
            | Term::CommMerge(a, b)
            | Term::Guard(a, b)
            | Term::Concat(a, b)
            | Term::SeqCond(a, b) => alloc::vec![a.as_ref(), b.as_ref()],
            Term::DataAct(_, args) => args.iter().collect(),
        }
    }

    fn node_name(&self) -> &'static str {
        match self {
            Term::QVar(_) => "quantity variable",
            Term::Zero => "0",
            Term::One => "1",
            Term::Add(..) => "+",
            Term::Mul(..) => "*",
            Term::Neg(..) => "-",
            Term::Minv(..) => "inv",
            Term::Sign(..) => "sign",
            Term::PVar(_) => "process variable",
            Term::Delta => "delta",
            Term::Eps => "eps",
            Term::Act(_) => "action",
            Term::DataAct(..) => "data action",
            Term::Alt(..) => "alternative composition",
            Term::SeqC(..) => "sequential composition",
            Term::ParC(..) => "parallel composition",
            Term::LeftMerge(..) => "left merge",
            Term::CommMerge(..) => "communication merge",
            Term::Encap(..) => "encap",
            Term::Guard(..) => "guarded command",
            Term::Termi(..) => "term",
            Term::SVar(_) => "sequence variable",
            Term::EmptySeq => "<>",
            Term::Single(..) => "singleton sequence",
            Term::Concat(..) => "++",
            Term::SeqCond(..) => "scond",
            Term::GenAlt(..) => "Alt",
            Term::GenSeq(..) => "Seq",
            Term::GenPar(..) => "Par",
            Term::Binder(..) => "binder",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermError {
    IllSorted {
        node: String,
        expected: Sort,
        found: Sort,
    },
    /// Substitution replacement has the wrong sort.
    SortMismatch { expected: Sort, found: Sort },
    /// Guarded process-variable substitution refused a capturing
    /// instantiation.
    WouldCapture(VarName),
    /// Binder with range zero.
    EmptyRange,
}

impl fmt::Display for TermError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermError::IllSorted {
                node,
                expected,
                found,
            } => write!(f, "ill-sorted term at {node}: expected {expected}, found {found}"),
            TermError::SortMismatch { expected, found } => {
                write!(f, "replacement sort mismatch: expected {expected}, found {found}")
            }
            TermError::WouldCapture(v) => {
                write!(f, "substitution would capture quantity variable {v}")
            }
            TermError::EmptyRange => write!(f, "binder range must be at least 1"),
        }
    }
}

/// Computes the sort of a term, validating sort-correctness of every node.
pub fn sort_check(t: &Term) -> Result<Sort, TermError> {
    fn expect(t: &Term, want: Sort, ctx: &Term) -> Result<(), TermError> {
        let got = sort_check(t)?;
        if got != want {
            return Err(TermError::IllSorted {
                node: ctx.node_name().to_string(),
                expected: want,
                found: got,
            });
        }
        Ok(())
    }
    match t {
        Term::QVar(v) | Term::PVar(v) | Term::SVar(v) => {
            let declared = v.sort();
            let used = match t {
                Term::QVar(_) => Sort::Quant,
                Term::PVar(_) => Sort::Proc,
                _ => Sort::ProcSeq,
            };
            if declared != used {
                return Err(TermError::IllSorted {
                    node: t.node_name().to_string(),
                    expected: used,
                    found: declared,
                });
            }
            Ok(used)
        }
        Term::Zero | Term::One => Ok(Sort::Quant),
        Term::Add(a, b) | Term::Mul(a, b) => {
            expect(a, Sort::Quant, t)?;
            expect(b, Sort::Quant, t)?;
            Ok(Sort::Quant)
        }
        Term::Neg(a) | Term::Minv(a) | Term::Sign(a) => {
            expect(a, Sort::Quant, t)?;
            Ok(Sort::Quant)
        }
        Term::Delta | Term::Eps | Term::Act(_) => Ok(Sort::Proc),
        Term::DataAct(_, args) => {
            for a in args {
                expect(a, Sort::Quant, t)?;
            }
            Ok(Sort::Proc)
        }
        Term::Alt(a, b)
        | Term::SeqC(a, b)
        | Term::ParC(a, b)
        | Term::LeftMerge(a, b)
        | Term::CommMerge(a, b) => {
            expect(a, Sort::Proc, t)?;
            expect(b, Sort::Proc, t)?;
            Ok(Sort::Proc)
        }
        Term::Encap(_, a) | Term::Termi(a) => {
            expect(a, Sort::Proc, t)?;
            Ok(Sort::Proc)
        }
        Term::Guard(q, p) => {
            expect(q, Sort::Quant, t)?;
            expect(p, Sort::Proc, t)?;
            Ok(Sort::Proc)
        }
        Term::EmptySeq => Ok(Sort::ProcSeq),
        Term::Single(p) => {
            expect(p, Sort::Proc, t)?;
            Ok(Sort::ProcSeq)
        }
        Term::Concat(a, b) => {
            expect(a, Sort::ProcSeq, t)?;
            expect(b, Sort::ProcSeq, t)?;
            Ok(Sort::ProcSeq)
        }
        Term::SeqCond(q, s) => {
            expect(q, Sort::Quant, t)?;
            expect(s, Sort::ProcSeq, t)?;
            Ok(Sort::ProcSeq)
        }
        Term::GenAlt(s) | Term::GenSeq(s) | Term::GenPar(s) => {
            expect(s, Sort::ProcSeq, t)?;
            Ok(Sort::Proc)
        }
        Term::Binder(kind, range, var, body) => {
            if *range == 0 {
                return Err(TermError::EmptyRange);
            }
            if var.pool != Pool::U {
                return Err(TermError::IllSorted {
                    node: t.node_name().to_string(),
                    expected: Sort::Quant,
                    found: var.sort(),
                });
            }
            expect(body, kind.body_sort(), t)?;
            Ok(kind.body_sort())
        }
    }
}

/// The variables with a free occurrence in `t`. Only U-variables can be
/// bound; X and V variables are always free.
pub fn free_vars(t: &Term) -> BTreeSet<VarName> {
    fn go(t: &Term, bound: &mut Vec<VarName>, out: &mut BTreeSet<VarName>) {
        match t {
            Term::QVar(v) | Term::PVar(v) | Term::SVar(v) => {
                if !bound.contains(v) {
                    out.insert(*v);
                }
            }
            Term::Binder(_, _, var, body) => {
                bound.push(*var);
                go(body, bound, out);
                bound.pop();
            }
            _ => {
                for c in t.children() {
                    go(c, bound, out);
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// Every variable occurring in `t`, free or bound (binder variables
/// included). This is the occurrence notion used when picking fresh
/// binder variables.
pub fn all_vars(t: &Term) -> BTreeSet<VarName> {
    fn go(t: &Term, out: &mut BTreeSet<VarName>) {
        match t {
            Term::QVar(v) | Term::PVar(v) | Term::SVar(v) => {
                out.insert(*v);
            }
            Term::Binder(_, _, var, body) => {
                out.insert(*var);
                go(body, out);
            }
            _ => {
                for c in t.children() {
                    go(c, out);
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    go(t, &mut out);
    out
}

/// Lowest-index U-variable occurring in none of the given terms.
pub fn fresh_u_var(avoid: &[&Term]) -> VarName {
    let mut used = BTreeSet::new();
    for t in avoid {
        for v in all_vars(t) {
            if v.pool == Pool::U {
                used.insert(v.index);
            }
        }
    }
    let mut i = 0;
    while used.contains(&i) {
        i += 1;
    }
    VarName::u(i)
}

fn map_children(t: &Term, f: &mut dyn FnMut(&Term) -> Term) -> Term {
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
        Term::DataAct(l, args) => Term::DataAct(l.clone(), args.iter().map(|a| f(a)).collect()),
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

fn subst_quant_raw(t: &Term, replacement: &Term, u: VarName) -> Term {
    match t {
        Term::QVar(v) => {
            if *v == u {
                replacement.clone()
            } else {
                t.clone()
            }
        }
        Term::Binder(kind, n, var, body) => {
            if *var == u {
                t.clone()
            } else if free_vars(replacement).contains(var) {
                // capture: rename the binder variable to a fresh one first
                let w = fresh_u_var(&[replacement, body]);
                let renamed = subst_quant_raw(body, &Term::QVar(w), *var);
                Term::binder(*kind, *n, w, subst_quant_raw(&renamed, replacement, u))
            } else {
                Term::binder(*kind, *n, *var, subst_quant_raw(body, replacement, u))
            }
        }
        _ => map_children(t, &mut |c| subst_quant_raw(c, replacement, u)),
    }
}

/// Capture-avoiding substitution of a quantity term for a U-variable.
/// Renaming picks the lowest-index U-variable occurring in neither the
/// replacement nor the binder body, so results are deterministic.
pub fn subst_quant(t: &Term, replacement: &Term, u: VarName) -> Result<Term, TermError> {
    let found = sort_check(replacement)?;
    if found != Sort::Quant {
        return Err(TermError::SortMismatch {
            expected: Sort::Quant,
            found,
        });
    }
    Ok(subst_quant_raw(t, replacement, u))
}

fn subst_var_raw(t: &Term, replacement: &Term, target: VarName) -> Term {
    match t {
        Term::PVar(v) | Term::SVar(v) => {
            if *v == target {
                replacement.clone()
            } else {
                t.clone()
            }
        }
        // binders bind only U-variables, so substitution is pushed under
        // them unchanged
        _ => map_children(t, &mut |c| subst_var_raw(c, replacement, target)),
    }
}

/// Substitution of a process term for an X-variable (or axiom-schema
/// XPrime variable). Pushes under binders without renaming, so a
/// replacement with free U-variables can be captured; see
/// [`subst_proc_checked`] for the guarded variant.
pub fn subst_proc(t: &Term, replacement: &Term, x: VarName) -> Result<Term, TermError> {
    let found = sort_check(replacement)?;
    if found != Sort::Proc {
        return Err(TermError::SortMismatch {
            expected: Sort::Proc,
            found,
        });
    }
    Ok(subst_var_raw(t, replacement, x))
}

/// Like [`subst_proc`], but rejects instantiations where a binder in `t`
/// would capture a U-variable free in the replacement.
pub fn subst_proc_checked(t: &Term, replacement: &Term, x: VarName) -> Result<Term, TermError> {
    fn scan(t: &Term, x: VarName, repl_free: &BTreeSet<VarName>) -> Result<(), TermError> {
        if let Term::Binder(_, _, var, body) = t {
            if repl_free.contains(var) && free_vars(body).contains(&x) {
                return Err(TermError::WouldCapture(*var));
            }
        }
        for c in t.children() {
            scan(c, x, repl_free)?;
        }
        Ok(())
    }
    let repl_free: BTreeSet<VarName> = free_vars(replacement)
        .into_iter()
        .filter(|v| v.pool == Pool::U)
        .collect();
    scan(t, x, &repl_free)?;
    subst_proc(t, replacement, x)
}

/// Substitution of a sequence term for a V-variable.
pub fn subst_seq(t: &Term, replacement: &Term, v: VarName) -> Result<Term, TermError> {
    let found = sort_check(replacement)?;
    if found != Sort::ProcSeq {
        return Err(TermError::SortMismatch {
            expected: Sort::ProcSeq,
            found,
        });
    }
    Ok(subst_var_raw(t, replacement, v))
}

/// Equality up to consistent renaming of bound variables.
pub fn alpha_eq(t1: &Term, t2: &Term) -> bool {
    fn go(t1: &Term, t2: &Term, pairs: &mut Vec<(VarName, VarName)>) -> bool {
        match (t1, t2) {
            (Term::QVar(a), Term::QVar(b)) => {
                for (l, r) in pairs.iter().rev() {
                    if l == a || r == b {
                        return l == a && r == b;
                    }
                }
                a == b
            }
            (Term::Binder(k1, n1, v1, b1), Term::Binder(k2, n2, v2, b2)) => {
                if k1 != k2 || n1 != n2 {
                    return false;
                }
                pairs.push((*v1, *v2));
                let ok = go(b1, b2, pairs);
                pairs.pop();
                ok
            }
            _ => {
                if core::mem::discriminant(t1) != core::mem::discriminant(t2) {
                    return false;
                }
                match (t1, t2) {
                    (Term::PVar(a), Term::PVar(b)) | (Term::SVar(a), Term::SVar(b)) => a == b,
                    (Term::Act(a), Term::Act(b)) => a == b,
                    (Term::DataAct(a, xs), Term::DataAct(b, ys)) => {
                        a == b
                            && xs.len() == ys.len()
                            && xs.iter().zip(ys).all(|(x, y)| go(x, y, pairs))
                    }
                    (Term::Encap(h1, a), Term::Encap(h2, b)) => h1 == h2 && go(a, b, pairs),
                    _ => {
                        let c1 = t1.children();
                        let c2 = t2.children();
                        c1.len() == c2.len()
                            && c1.iter().zip(c2).all(|(a, b)| go(a, b, pairs))
                    }
                }
            }
        }
    }
    go(t1, t2, &mut Vec::new())
}

pub fn ceil_log2(n: u32) -> u64 {
    debug_assert!(n >= 1);
    64 - u64::from(n - 1).leading_zeros() as u64
}

/// The term-size measure: 1 for variables and constants, 1 plus the sizes
/// of the children for operator nodes, and body size + ceil(log2(n)) + 1
/// for a binder of range n.
pub fn tsize(t: &Term) -> u64 {
    match t {
        Term::Binder(_, n, _, body) => tsize(body) + ceil_log2(*n) + 1,
        _ => 1 + t.children().iter().map(|c| tsize(c)).sum::<u64>(),
    }
}

/// The numeral 0, 0+1, (0+1)+1, ...
pub fn unary_numeral(k: u64) -> Term {
    let mut t = Term::Zero;
    for _ in 0..k {
        t = Term::add(t, Term::One);
    }
    t
}

/// A term equal to k of size O(log k), built by binary expansion from 1+1:
/// even k become (1+1) * (k/2), odd k become (k-1) + 1.
pub fn compact_numeral(k: u64) -> Term {
    match k {
        0 => Term::Zero,
        1 => Term::One,
        _ if k % 2 == 0 => Term::mul(Term::add(Term::One, Term::One), compact_numeral(k / 2)),
        _ => Term::add(compact_numeral(k - 1), Term::One),
    }
}

/// Counts free occurrences of a variable (not the set of free variables;
/// used by the size accounting of naive elimination).
pub fn count_free_occurrences(t: &Term, target: VarName) -> u64 {
    fn go(t: &Term, target: VarName, bound: &mut Vec<VarName>) -> u64 {
        match t {
            Term::QVar(v) | Term::PVar(v) | Term::SVar(v) => {
                u64::from(*v == target && !bound.contains(v))
            }
            Term::Binder(_, _, var, body) => {
                bound.push(*var);
                let n = go(body, target, bound);
                bound.pop();
                n
            }
            _ => t.children().iter().map(|c| go(c, target, bound)).sum(),
        }
    }
    go(t, target, &mut Vec::new())
}

/// Counts per (binder kind, range); empty for binder-free terms.
pub fn binder_census(t: &Term) -> BTreeMap<(BinderKind, u32), u64> {
    fn go(t: &Term, out: &mut BTreeMap<(BinderKind, u32), u64>) {
        if let Term::Binder(kind, n, _, _) = t {
            *out.entry((*kind, *n)).or_insert(0) += 1;
        }
        for c in t.children() {
            go(c, out);
        }
    }
    let mut out = BTreeMap::new();
    go(t, &mut out);
    out
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::print(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u() -> VarName {
        VarName::u(0)
    }
    fn v() -> VarName {
        VarName::u(1)
    }
    fn w() -> VarName {
        VarName::u(2)
    }

    #[test]
    fn free_vars_binder() {
        // sum[2] u . (u + v): only v is free
        let t = Term::binder(
            BinderKind::Sum,
            2,
            u(),
            Term::add(Term::QVar(u()), Term::QVar(v())),
        );
        let fv = free_vars(&t);
        assert_eq!(fv.into_iter().collect::<Vec<_>>(), alloc::vec![v()]);
    }

    #[test]
    fn free_vars_guard_and_closed_binder() {
        let t = Term::guard(Term::QVar(u()), Term::PVar(VarName::x(0)));
        let fv = free_vars(&t);
        assert!(fv.contains(&u()) && fv.contains(&VarName::x(0)) && fv.len() == 2);

        let closed = Term::binder(
            BinderKind::Chc,
            3,
            u(),
            Term::data_act("a", alloc::vec![Term::QVar(u())]),
        );
        assert!(free_vars(&closed).is_empty());
    }

    #[test]
    fn subst_quant_capture_avoidance() {
        // (sum[2] v . (u + v))[v/u] must rename the binder: sum[2] w . (v + w)
        let t = Term::binder(
            BinderKind::Sum,
            2,
            v(),
            Term::add(Term::QVar(u()), Term::QVar(v())),
        );
        let got = subst_quant(&t, &Term::QVar(v()), u()).unwrap();
        let want = Term::binder(
            BinderKind::Sum,
            2,
            w(),
            Term::add(Term::QVar(v()), Term::QVar(w())),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn subst_quant_bound_variable_is_untouched() {
        let p = Term::add(Term::QVar(u()), Term::One);
        let t = Term::binder(BinderKind::Sum, 2, u(), p);
        let got = subst_quant(&t, &Term::Zero, u()).unwrap();
        assert_eq!(got, t);
    }

    #[test]
    fn subst_proc_pushes_under_binders() {
        let x = VarName::x(0);
        // (sum? no: chc[2] u . [u] -> x)[a(u)/x] captures u per the verbatim clause
        let t = Term::binder(
            BinderKind::Chc,
            2,
            u(),
            Term::guard(Term::QVar(u()), Term::PVar(x)),
        );
        let repl = Term::data_act("a", alloc::vec![Term::QVar(u())]);
        let got = subst_proc(&t, &repl, x).unwrap();
        let want = Term::binder(
            BinderKind::Chc,
            2,
            u(),
            Term::guard(Term::QVar(u()), repl.clone()),
        );
        assert_eq!(got, want);
        // the guarded variant rejects it
        assert_eq!(
            subst_proc_checked(&t, &repl, x),
            Err(TermError::WouldCapture(u()))
        );
        // a non-capturing replacement is fine
        assert!(subst_proc_checked(&t, &Term::act("a"), x).is_ok());
        // delta[P/x] = delta
        assert_eq!(subst_proc(&Term::Delta, &repl, x).unwrap(), Term::Delta);
    }

    #[test]
    fn alpha_eq_examples() {
        let body_u = Term::add(Term::QVar(u()), Term::One);
        let body_v = Term::add(Term::QVar(v()), Term::One);
        let t1 = Term::binder(BinderKind::Sum, 3, u(), body_u);
        let t2 = Term::binder(BinderKind::Sum, 3, v(), body_v);
        assert!(alpha_eq(&t1, &t2));
        assert!(alpha_eq(&t1, &t1));

        // sum[3] u . (u+v) vs sum[3] v . (v+v): capture, not alpha-equal
        let t3 = Term::binder(
            BinderKind::Sum,
            3,
            u(),
            Term::add(Term::QVar(u()), Term::QVar(v())),
        );
        let t4 = Term::binder(
            BinderKind::Sum,
            3,
            v(),
            Term::add(Term::QVar(v()), Term::QVar(v())),
        );
        assert!(!alpha_eq(&t3, &t4));
    }

    #[test]
    fn tsize_examples() {
        assert_eq!(tsize(&Term::QVar(u())), 1);
        // sum[8] u . (u + 1): 3 + ceil(log2 8) + 1 = 7
        let t = Term::binder(
            BinderKind::Sum,
            8,
            u(),
            Term::add(Term::QVar(u()), Term::One),
        );
        assert_eq!(tsize(&t), 7);
        // sum[1] u . u: ceil(log2 1) = 0
        let t1 = Term::binder(BinderKind::Sum, 1, u(), Term::QVar(u()));
        assert_eq!(tsize(&t1), 2);
    }

    #[test]
    fn numerals() {
        assert_eq!(unary_numeral(0), Term::Zero);
        assert_eq!(
            unary_numeral(2),
            Term::add(Term::add(Term::Zero, Term::One), Term::One)
        );
        assert_eq!(tsize(&unary_numeral(5)), 11); // 2k + 1
        assert_eq!(compact_numeral(0), Term::Zero);
        assert_eq!(
            compact_numeral(6),
            Term::mul(
                Term::add(Term::One, Term::One),
                Term::add(Term::mul(Term::add(Term::One, Term::One), Term::One), Term::One)
            )
        );
        assert!(tsize(&compact_numeral(1 << 20)) <= 200);
    }

    #[test]
    fn sort_check_examples() {
        assert_eq!(
            sort_check(&Term::guard(Term::One, Term::Delta)),
            Ok(Sort::Proc)
        );
        let bad = Term::add(Term::Delta, Term::One);
        assert!(matches!(sort_check(&bad), Err(TermError::IllSorted { .. })));
        let s = Term::gen_seq(Term::concat(
            Term::single(Term::act("a")),
            Term::single(Term::act("b")),
        ));
        assert_eq!(sort_check(&s), Ok(Sort::Proc));
    }

    #[test]
    fn census() {
        let t = Term::binder(
            BinderKind::Sum,
            3,
            u(),
            Term::binder(BinderKind::Sum, 2, v(), Term::QVar(v())),
        );
        let census = binder_census(&t);
        assert_eq!(census.get(&(BinderKind::Sum, 3)), Some(&1));
        assert_eq!(census.get(&(BinderKind::Sum, 2)), Some(&1));
        assert_eq!(census.len(), 2);
    }
}
