//! Finite-state evaluation and residue analysis of Catalan numbers modulo a
//! prime p >= 5.
//!
//! The library synthesizes the deterministic finite automaton with output
//! (DFAO) that maps the base-p digits of n to C_n mod p, and provides the
//! machinery to check what that automaton implies about the residues:
//!
//! * [`algebra`]: modular arithmetic, primality, factorization, and the
//!   F_p\[x\] polynomial operations behind the automaton states.
//! * [`oracle`]: direct evaluation of C_n mod p through Lucas' theorem,
//!   independent of the automaton.
//! * [`automaton`]: state synthesis, evaluation, minimization, the constant
//!   state family, transfer counts, and pumping certificates.
//! * [`decomposition`]: every non-zero residue as a product of central
//!   binomial coefficients binom(2d, d) mod p.
//! * [`coverage`]: minimal witnesses per residue, infinitude certificates,
//!   and zero-density tables.
//! * [`constant_graph`]: the multiplication graph on non-zero residues and
//!   the closed walk visiting all of them.
//!
//! Digit strings are least-significant-first everywhere: the automaton
//! consumes the base-p digits of n starting with n mod p, and n = 0 is the
//! single digit string `[0]`.

pub mod algebra;
pub mod automaton;
pub mod cli;
pub mod constant_graph;
pub mod coverage;
pub mod decomposition;
pub mod oracle;

/// Errors shared across the library. Every failure is loud and specific;
/// none of these are expected on valid inputs for a genuine prime p >= 5.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("0 is not invertible modulo {p}")]
    NonInvertible { p: u64 },
    #[error("binomial valuation requires k <= m, got m={m} k={k}")]
    BinomialRange { m: u64, k: u64 },
    #[error("exact Catalan numbers overflow u64 beyond index 35, got {0}")]
    CatalanRange(u64),
    #[error("modulus {0} must be a prime >= 5")]
    InvalidModulus(u64),
    #[error("state cap {cap} exceeded while synthesizing the automaton for p={p}")]
    StateCap { p: u64, cap: usize },
    #[error(
        "state is not a power series: coefficient of x^{order} below the pole order is non-zero"
    )]
    NotAPowerSeries { order: u32 },
    #[error("no scalar state class qualifies as the constant family")]
    NoQualifyingFamily,
    #[error("{0} scalar state classes qualify as the constant family, expected exactly one")]
    AmbiguousFamily(usize),
    #[error("digit {d} leads from the member labeled {label} out of the constant family")]
    OutsideFamily { label: u64, d: u32 },
    #[error("digit {d} exceeds (p-1)/2 = {half} for p={p}")]
    DigitRange { p: u64, d: u32, half: u32 },
    #[error("zero has no product representation")]
    ZeroResidue,
    #[error("residue {r} is out of range 1..{p}")]
    ResidueRange { r: u64, p: u64 },
    #[error("{q} is not a prime strictly below p-1 = {limit}")]
    PrimeRange { q: u64, limit: u64 },
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("walk validation failed: {0}")]
    WalkInvalid(String),
    #[error("automaton replay diverged from the walk: {0}")]
    ReplayMismatch(String),
    #[error("no pumping certificate found for residue {0}")]
    NoCertificate(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
