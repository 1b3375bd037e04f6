use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cyclotomic order mismatch: {left} vs {right}")]
    OrderMismatch { left: u32, right: u32 },

    #[error("field {field} lacks the primitive {order}-th roots of unity")]
    MissingRootsOfUnity { field: String, order: u32 },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("generator index {0} out of range")]
    GeneratorIndex(usize),

    #[error("elements belong to different algebras")]
    AlgebraMismatch,

    #[error("algebra has even-degree generators but no degree cap")]
    Uncapped,

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("element is not homogeneous of degree {expected}: {context}")]
    Degree { expected: u32, context: String },

    #[error("d^2 != 0 on generator `{generator}`: d(d {generator}) = {value}")]
    DSquared { generator: String, value: String },

    #[error("Jacobi identity fails on basis triple ({i}, {j}, {k})")]
    Jacobi { i: usize, j: usize, k: usize },

    #[error("structure constants are not antisymmetric at ({i}, {j})")]
    Antisymmetry { i: usize, j: usize },

    #[error("not a chain map: phi(d {generator}) != d(phi {generator})")]
    ChainMap { generator: String },

    #[error("action of order {order} does not satisfy rho^{order} = id on `{generator}`")]
    ActionOrder { order: u32, generator: String },

    #[error("no conjugation configured")]
    NoConjugation,

    #[error("invalid conjugation: {0}")]
    InvalidConjugation(String),

    #[error("degree {degree} out of range (top degree {top})")]
    DegreeOutOfRange { degree: u32, top: u32 },

    #[error("element is not closed: d = {0}")]
    NotClosed(String),

    #[error("element does not lie in the subcomplex in degree {0}")]
    NotInSubspace(u32),

    #[error("Massey product not defined: {0}")]
    MasseyUndefined(String),

    #[error("cdga is not minimal: {0}")]
    NotMinimal(String),

    #[error("no C+N split satisfying the formality criterion; obstruction {0}")]
    NoFormalSplit(String),

    #[error("J^2 != -Id")]
    NotAlmostComplex,

    #[error("two-form matrix is not antisymmetric")]
    NotAntisymmetric,

    #[error("definiteness needs rational entries")]
    NotRational,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("fixed-point enumeration window exhausted; increase window ({0})")]
    Window(String),

    #[error("the action fixes an entire coordinate (exponent {0} is trivial)")]
    WholeSpaceFixed(u32),

    #[error("profile plateaus do not cover path junction {0}")]
    PlateauMisaligned(f64),

    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}
