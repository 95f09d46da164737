//! Exact tools for self-similar sets with exact overlaps: class membership,
//! dimension, graph-directed decompositions, the polynomial obstruction to
//! Lipschitz equivalence with dust-like sets, and numerical cross-checks.

pub mod exactnum;
pub mod graphdir;
pub mod ifs;
pub mod intpoly;
pub mod numlab;
pub mod obstruction;

use thiserror::Error;

use exactnum::ExactError;
use graphdir::GraphError;
use ifs::IfsError;
use intpoly::PolyError;
use numlab::NumlabError;
use obstruction::ObstructionError;

/// Coarse failure classes, one per nonzero process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    InvalidInput,
    ResourceCeiling,
    InternalConsistency,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::InvalidInput => 1,
            ErrorClass::ResourceCeiling => 2,
            ErrorClass::InternalConsistency => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Ifs(#[from] IfsError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Obstruction(#[from] ObstructionError),
    #[error(transparent)]
    Numlab(#[from] NumlabError),
}

fn exact_class(e: &ExactError) -> ErrorClass {
    match e {
        ExactError::Unknown { .. } => ErrorClass::ResourceCeiling,
        _ => ErrorClass::InvalidInput,
    }
}

fn poly_class(e: &PolyError) -> ErrorClass {
    match e {
        PolyError::TooManyModularFactors { .. } | PolyError::SearchSpaceTooLarge { .. } => {
            ErrorClass::ResourceCeiling
        }
        _ => ErrorClass::InvalidInput,
    }
}

fn ifs_class(e: &IfsError) -> ErrorClass {
    match e {
        IfsError::Exact(inner) => exact_class(inner),
        _ => ErrorClass::InvalidInput,
    }
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Exact(e) => exact_class(e),
            Error::Poly(e) => poly_class(e),
            Error::Ifs(e) => ifs_class(e),
            Error::Graph(e) => match e {
                GraphError::UnexpectedChildGap { .. }
                | GraphError::UnexpectedCoincidence { .. } => ErrorClass::InternalConsistency,
                GraphError::VertexExplosion { .. } | GraphError::NoConvergence { .. } => {
                    ErrorClass::ResourceCeiling
                }
                GraphError::NotSquare => ErrorClass::InvalidInput,
                GraphError::Ifs(inner) => ifs_class(inner),
                GraphError::Exact(inner) => exact_class(inner),
            },
            Error::Obstruction(e) => match e {
                ObstructionError::IrreducibilityViolated { .. } => ErrorClass::InternalConsistency,
                ObstructionError::Poly(inner) => poly_class(inner),
                ObstructionError::Ifs(inner) => ifs_class(inner),
                ObstructionError::Exact(inner) => exact_class(inner),
                ObstructionError::OutOfClass { .. }
                | ObstructionError::BadKmax(_)
                | ObstructionError::BadExponent(_) => ErrorClass::InvalidInput,
            },
            Error::Numlab(e) => match e {
                NumlabError::TooDeep { .. } => ErrorClass::ResourceCeiling,
                _ => ErrorClass::InvalidInput,
            },
        }
    }

    /// Name of the innermost error variant, e.g. `InvalidStep`.
    pub fn kind(&self) -> String {
        let debug = format!("{self:?}");
        let mut rest = debug.as_str();
        let mut name = "";
        loop {
            let end = rest
                .find(|c: char| !c.is_ascii_alphanumeric() && c != '_')
                .unwrap_or(rest.len());
            let ident = &rest[..end];
            if !ident.starts_with(|c: char| c.is_ascii_uppercase()) {
                break;
            }
            name = ident;
            match rest[end..].strip_prefix('(') {
                Some(inner) => rest = inner,
                None => break,
            }
        }
        name.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn classes_and_kinds() {
        let e =
            Error::from(ifs::validate(&rat(1, 4), &[rat(0, 1), rat(1, 8), rat(3, 4)]).unwrap_err());
        assert_eq!(e.kind(), "InvalidStep");
        assert_eq!(e.class().exit_code(), 1);

        let e = Error::from(GraphError::VertexExplosion {
            ceiling: 1,
            history: vec![],
        });
        assert_eq!(
            (e.kind().as_str(), e.class()),
            ("VertexExplosion", ErrorClass::ResourceCeiling)
        );

        let e = Error::from(GraphError::UnexpectedChildGap {
            value: "1/9".into(),
        });
        assert_eq!(e.class().exit_code(), 3);

        let e = Error::from(ObstructionError::Ifs(IfsError::Exact(
            ExactError::OutOfUnitInterval("2".into()),
        )));
        assert_eq!(
            (e.kind().as_str(), e.class()),
            ("OutOfUnitInterval", ErrorClass::InvalidInput)
        );

        let e = Error::from(ObstructionError::BadKmax(1));
        assert_eq!(e.kind(), "BadKmax");

        let e = Error::from(PolyError::SearchSpaceTooLarge {
            estimated: 10,
            ceiling: 1,
        });
        assert_eq!(e.class().exit_code(), 2);
        assert_eq!(
            Error::from(NumlabError::DegenerateFit(1)).kind(),
            "DegenerateFit"
        );
    }
}
