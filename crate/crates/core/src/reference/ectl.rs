use std::fmt;

use thiserror::Error;

use super::pos_naive;
use crate::kripke::{KripkeStructure, StateSet};

/// Existential CTL without next-time and globally. Negation only applies to
/// atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EctlFormula {
    Atom(String),
    NotAtom(String),
    And(Box<EctlFormula>, Box<EctlFormula>),
    Or(Box<EctlFormula>, Box<EctlFormula>),
    /// `EU(φ, ψ)`: some path stays in `φ` until it reaches `ψ`.
    Until(Box<EctlFormula>, Box<EctlFormula>),
}

impl EctlFormula {
    pub fn atom(p: impl Into<String>) -> Self {
        EctlFormula::Atom(p.into())
    }

    pub fn not_atom(p: impl Into<String>) -> Self {
        EctlFormula::NotAtom(p.into())
    }

    pub fn and(a: Self, b: Self) -> Self {
        EctlFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        EctlFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn until(a: Self, b: Self) -> Self {
        EctlFormula::Until(Box::new(a), Box::new(b))
    }

    pub fn depth(&self) -> usize {
        match self {
            EctlFormula::Atom(_) | EctlFormula::NotAtom(_) => 0,
            EctlFormula::And(a, b) | EctlFormula::Or(a, b) | EctlFormula::Until(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }
}

impl fmt::Display for EctlFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EctlFormula::Atom(p) => write!(f, "{p}"),
            EctlFormula::NotAtom(p) => write!(f, "!{p}"),
            EctlFormula::And(a, b) => write!(f, "({a} & {b})"),
            EctlFormula::Or(a, b) => write!(f, "({a} | {b})"),
            EctlFormula::Until(a, b) => write!(f, "EU({a}, {b})"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EctlError {
    #[error("atom `{0}` does not occur in the structure")]
    UnknownAtom(String),
}

/// The set of states satisfying `phi`.
pub fn eval_ectl(k: &KripkeStructure, phi: &EctlFormula) -> Result<StateSet, EctlError> {
    let atom_states = |p: &str, holds: bool| -> Result<StateSet, EctlError> {
        if !k.atoms().contains(p) {
            return Err(EctlError::UnknownAtom(p.to_string()));
        }
        Ok(k.states().filter(|&s| k.label(s).contains(p) == holds).collect())
    };
    match phi {
        EctlFormula::Atom(p) => atom_states(p, true),
        EctlFormula::NotAtom(p) => atom_states(p, false),
        EctlFormula::And(a, b) => {
            let a = eval_ectl(k, a)?;
            Ok(a.intersection(&eval_ectl(k, b)?).copied().collect())
        }
        EctlFormula::Or(a, b) => {
            let a = eval_ectl(k, a)?;
            Ok(a.union(&eval_ectl(k, b)?).copied().collect())
        }
        EctlFormula::Until(a, b) => {
            let a = eval_ectl(k, a)?;
            let b = eval_ectl(k, b)?;
            let mut sat = pos_naive(k, &a, &b);
            sat.extend(b);
            Ok(sat)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::fixtures::{f1, set};

    #[test]
    fn atoms_and_negations() {
        let k = f1();
        assert_eq!(eval_ectl(&k, &EctlFormula::atom("p")).unwrap(), set(&[0, 1, 2]));
        assert_eq!(eval_ectl(&k, &EctlFormula::not_atom("p")).unwrap(), set(&[3, 4]));
    }

    #[test]
    fn until_reaches_everything_in_the_chain() {
        let phi = EctlFormula::until(EctlFormula::atom("p"), EctlFormula::not_atom("p"));
        assert_eq!(eval_ectl(&f1(), &phi).unwrap(), set(&[0, 1, 2, 3, 4]));
        assert_eq!(phi.to_string(), "EU(p, !p)");
        assert_eq!(phi.depth(), 1);
    }

    #[test]
    fn unknown_atom() {
        assert_eq!(
            eval_ectl(&f1(), &EctlFormula::atom("zz")),
            Err(EctlError::UnknownAtom("zz".into()))
        );
    }
}
