//! Crate-wide error type.
//!
//! Everything downstream of the arithmetic kernels reports through this one
//! enum; the variants are the contract surface of the per-module operations
//! (prime exclusion, solver bounds, falsification verdicts).

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The polynomial reduces to zero mod p, so it cannot be factored.
    #[error("polynomial is zero mod p")]
    ZeroPolynomial,

    /// Root-of-unity order l is not supported in this residue field
    /// (l does not divide q - 1, or the characteristic is 2 for l = 2).
    #[error("order {0} is not supported in this residue field")]
    UnsupportedOrder(u64),

    /// Two cyclotomic integers (or characters) of different order l were mixed.
    #[error("mixed cyclotomic orders {0} and {1}")]
    MixedOrder(u64, u64),

    /// The equation order Z[theta] is not maximal at p; splitting at p is
    /// refused rather than mis-reported.
    #[error("equation order is not maximal at p = {0}")]
    NotPMaximal(u64),

    /// Quadratic residue symbols are not evaluated at p = 2.
    #[error("residue symbols are not evaluated at p = 2")]
    EvenPrime,

    /// A denominator in a field element (or generator image) vanishes mod p.
    #[error("denominator clashes with p = {0}")]
    DenominatorClash(u64),

    /// Two objects live over different base fields.
    #[error("base field mismatch")]
    BaseFieldMismatch,

    /// The character solver exhausted auxiliary primes up to the bound.
    #[error("character solver exceeded auxiliary prime bound {0}")]
    SolverBoundExceeded(u64),

    /// The base field ramifies at p, so local square classes are not
    /// well-defined per residue field.
    #[error("base field ramifies at p = {0}")]
    RamifiedBase(u64),

    /// A coefficient bound would require splitting at an excluded prime.
    #[error("bound {bound} requires excluded prime {excluded}")]
    BoundTooLarge { bound: u64, excluded: u64 },

    /// The image character does not have value != 1 at exactly one prime
    /// over p: the map is falsified as L-series-preserving at p.
    #[error("image character has value != 1 at {found} primes over p = {p} (source index {index})")]
    NotSinglePrime { p: u64, index: usize, found: usize },

    /// Reconstructed matching does not preserve the inertia degree.
    #[error("inertia degree mismatch at p = {p} (source index {index})")]
    NormMismatch { p: u64, index: usize },

    /// The reconstructed prime map is not a bijection at p.
    #[error("reconstructed prime map is not a bijection at p = {0}")]
    NotBijective(u64),

    /// The image value at the matched prime is not the expected primitive
    /// root of unity.
    #[error("image value at the matched prime over p = {p} is not the expected root of unity (source index {index})")]
    ValueMismatch { p: u64, index: usize },

    /// The twist rule requires p = 1 mod 4.
    #[error("modulus {0} is not congruent to 1 mod 4")]
    BadModulus(u64),

    /// The prime is on the exclusion list for this sweep (p = 2, ramified,
    /// or not p-maximal).
    #[error("prime {0} is excluded from this sweep")]
    ExcludedPrime(u64),

    /// A character product pushed the working modulus over the cap.
    #[error("character modulus {0} exceeds the configured cap")]
    ModulusOverflow(u64),

    /// A table-presented character map has no image for the requested
    /// character.
    #[error("character map rule is not defined on {0}")]
    RuleIncomplete(String),

    /// The defining polynomial is not monic.
    #[error("defining polynomial must be monic")]
    NotMonic,

    /// The defining polynomial is reducible over the rationals.
    #[error("defining polynomial is reducible over the rationals")]
    NotIrreducible,

    /// Internal invariant violation with context.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
