//! Optional signature extensions: the empty process `eps` with the
//! termination operator, and process sequences with their generalized
//! compositions. Sequences presuppose the empty process, so enabling them
//! enables `eps` too.

use alloc::format;
use alloc::string::String;

use crate::terms::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeatureSet {
    epsilon: bool,
    sequences: bool,
}

impl FeatureSet {
    /// The base signature: no empty process, no sequences.
    pub const fn base() -> FeatureSet {
        FeatureSet {
            epsilon: false,
            sequences: false,
        }
    }

    pub const fn with_epsilon() -> FeatureSet {
        FeatureSet {
            epsilon: true,
            sequences: false,
        }
    }

    /// Epsilon and sequences.
    pub const fn full() -> FeatureSet {
        FeatureSet {
            epsilon: true,
            sequences: true,
        }
    }

    /// Builds a feature set from flags; requesting sequences forces
    /// epsilon on.
    pub const fn from_flags(epsilon: bool, sequences: bool) -> FeatureSet {
        FeatureSet {
            epsilon: epsilon || sequences,
            sequences,
        }
    }

    pub const fn epsilon_enabled(&self) -> bool {
        self.epsilon
    }

    pub const fn sequences_enabled(&self) -> bool {
        self.sequences
    }
}

impl Default for FeatureSet {
    fn default() -> FeatureSet {
        FeatureSet::base()
    }
}

/// Checks that a term only uses constructs covered by the feature set.
/// The parser enforces this for parsed input; this entry point covers
/// programmatically built terms.
pub fn feature_check(t: &Term, features: FeatureSet) -> Result<(), String> {
    let needs_eps = matches!(t, Term::Eps | Term::Termi(..));
    let needs_seq = matches!(
        t,
        Term::SVar(..)
            | Term::EmptySeq
            | Term::Single(..)
            | Term::Concat(..)
            | Term::SeqCond(..)
            | Term::GenAlt(..)
            | Term::GenSeq(..)
            | Term::GenPar(..)
            | Term::Binder(crate::terms::BinderKind::Conc, ..)
    );
    if needs_eps && !features.epsilon_enabled() {
        return Err(format!("'{}' requires the epsilon feature", t));
    }
    if needs_seq && !features.sequences_enabled() {
        return Err(format!("'{}' requires the sequences feature", t));
    }
    for c in t.children() {
        feature_check(c, features)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequences_imply_epsilon() {
        let f = FeatureSet::from_flags(false, true);
        assert!(f.epsilon_enabled() && f.sequences_enabled());
        let g = FeatureSet::from_flags(true, false);
        assert!(g.epsilon_enabled() && !g.sequences_enabled());
    }

    #[test]
    fn feature_check_flags_usage() {
        let t = Term::alt(Term::Eps, Term::act("a"));
        assert!(feature_check(&t, FeatureSet::base()).is_err());
        assert!(feature_check(&t, FeatureSet::with_epsilon()).is_ok());
        let s = Term::gen_alt(Term::single(Term::act("a")));
        assert!(feature_check(&s, FeatureSet::with_epsilon()).is_err());
        assert!(feature_check(&s, FeatureSet::full()).is_ok());
    }
}
