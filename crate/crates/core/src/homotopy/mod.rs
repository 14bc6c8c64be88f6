//! A∞ and L∞ algebras and morphisms, their defining identities as checkable
//! predicates, antisymmetrization, and the bar and cobar constructions.

mod ainf;
mod coalgebra;
mod linf;
mod morphism;

pub use ainf::{check_stasheff, AInfAlgebra};
pub use coalgebra::{bar, cobar, symmetric_canonical, CoalgebraReport, DGCoalgebra, TensorSquare, WordKind};
pub use linf::{antisymmetrize, check_jacobi, skew_canonical, Antisymmetrized, LInfAlgebra};
pub use morphism::{
    check_ainf_morphism, check_linf_morphism, AInfMorphism, LInfMorphism, MorphismReport,
};

use crate::space::{Element, GradedSpace};

/// One failed instance of an identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Arity of the identity (the `i` or `n` of the defining equation).
    pub arity: usize,
    pub tuple: Vec<usize>,
    pub residual: Element,
}

/// Result of an identity check within a truncation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdentityReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Human-readable description of the first violation, if any.
    pub fn first_failure(&self, space: &GradedSpace, target: &GradedSpace) -> Option<String> {
        self.violations.first().map(|v| {
            format!(
                "identity {} fails on ({}): residual {}",
                v.arity,
                v.tuple
                    .iter()
                    .map(|&i| space.name(i).to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                v.residual.format(target)
            )
        })
    }
}
