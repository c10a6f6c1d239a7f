//! Exact Weyl-algebra normal ordering and Lie-algebraic perturbation theory
//! for anharmonic oscillators `H = a†a + 1/2 + λV(x)`.
//!
//! Operators are sparse sums of `λʲ·a†ᵖaᑫ` over a coefficient field. The
//! exact field is ℚ(√2) ([`Radical2Scalar`]); `f64`/`f32` work too.
//!
//! ```
//! use weylpert::{solve_higher_order, Radical2Scalar};
//!
//! let quartic = solve_higher_order::<Radical2Scalar>(4, 2).unwrap();
//! let ground = quartic.level_series(0);
//! assert_eq!(ground.coeff(2).to_string(), "-21/8");
//! ```

pub mod combinatorics;
pub mod error;
pub mod hamiltonian;
pub mod harmonic;
pub mod lie;
pub mod number;
pub mod oracle;
pub mod perturbation;
pub mod potentials;
pub mod radical;
pub mod report;
pub mod scalar;
pub mod shorthand;
pub mod span;
pub mod weyl;

pub use combinatorics::{binomial, factorial, weyl_binomial};
pub use error::{Error, Result};
pub use hamiltonian::{free_hamiltonian, perturbed_hamiltonian, polynomial_potential, potential_term};
pub use harmonic::{exact_harmonic, Bogoliubov, HarmonicCase, HarmonicSpectrum};
pub use lie::{
    count_generators, generate_algebra, structure_constants, AlgebraElement, LieAlgebra, LieBasisElement, Parity,
    StructureConstants,
};
pub use number::{to_number_polynomial, NumberPolynomial};
pub use oracle::{build_matrix, compare, numeric_spectrum, rs_corrections, ComparisonReport, FockMatrix, RsCorrection};
pub use perturbation::{
    hadamard_conjugate, solve_first_order, solve_higher_order, solve_perturbation, solve_with_algebra, GeneratorAnsatz,
    GeneratorTerm, PerturbationResult,
};
pub use potentials::{
    solve_multimode, solve_polynomial, ModeResult, ModeSpec, MultimodeResult, PotentialSpec, SeriesKind, SeriesSpec,
    TermSpec,
};
pub use radical::Radical2Scalar;
pub use scalar::Coefficient;
pub use shorthand::parse_potential;
pub use weyl::{commutator, dagger, expand_power, multiply, position_power, LambdaSeries, NormalOrderedOperator};

pub type ExactSeries = LambdaSeries<Radical2Scalar>;
pub type ExactOperator = NormalOrderedOperator<Radical2Scalar>;
pub type ExactNumberPolynomial = NumberPolynomial<Radical2Scalar>;
pub type ExactAlgebra = LieAlgebra<Radical2Scalar>;
pub type ExactResult = PerturbationResult<Radical2Scalar>;

pub type FloatSeries = LambdaSeries<f64>;
pub type FloatOperator = NormalOrderedOperator<f64>;
pub type FloatNumberPolynomial = NumberPolynomial<f64>;
pub type FloatResult = PerturbationResult<f64>;
