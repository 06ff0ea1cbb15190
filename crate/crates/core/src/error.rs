use thiserror::Error;

/// Crate-wide error type. Variants that say "must not fire" indicate an
/// internal consistency failure caught by a built-in verification step.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported Coxeter type/rank combination: {0}")]
    UnsupportedType(String),

    #[error("dimension mismatch: expected vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("not a Coxeter word: {0}")]
    NotCoxeterWord(String),

    #[error("guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("root generation diverged; Cartan matrix is not of finite type")]
    RootClosureDiverged,

    #[error("subsystem {0} is commutative; it has no canonical total order")]
    CommutativeSubsystem(u32),

    #[error("root sequence is not admissible: {0}")]
    InadmissibleSequence(String),

    #[error("not a partial order: {0}")]
    NotAPartialOrder(String),

    #[error("not a lattice: elements {x} and {y} have no unique {kind}")]
    NotALattice { x: u32, y: u32, kind: &'static str },

    #[error("lattice is not polygonal: {0}")]
    NotPolygonal(String),

    #[error("not a lattice congruence: {0}")]
    NotACongruence(String),

    #[error("edge labels not constant on quotient cover [{x}] <. [{y}]")]
    LabelConstancyViolation { x: u32, y: u32 },

    #[error("edge labelling is not polygonal: {0}")]
    LabellingNotPolygonal(String),

    #[error("not a cover relation: {0} <. {1}")]
    NotACover(u32, u32),

    #[error("not a maximal chain: {0}")]
    NotAMaximalChain(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}
