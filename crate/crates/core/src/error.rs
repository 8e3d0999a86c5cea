use alloc::string::String;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    NotSquare { rows: usize, cols: usize },
    MissingAssignment(String),
    Syntax { pos: usize, msg: String },
    NonAffine { pos: usize, what: String },
    BadPowerBase { pos: usize },
    UnknownSymbol { pos: usize, name: String },
    NegativeFactorial(String),
    NegativeLowerIndex(String),
    NonIntegerArgument(String),
    ZeroDenominator,
    NonIntegerShift { var: String, factor: String },
    ZeroRatio,
    NotHypergeometric(String),
    UnboundedSupport { n: i64 },
    Precondition(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotSquare { rows, cols } => write!(f, "matrix is {rows}x{cols}, not square"),
            Error::MissingAssignment(v) => write!(f, "no value assigned to `{v}`"),
            Error::Syntax { pos, msg } => write!(f, "syntax error at {pos}: {msg}"),
            Error::NonAffine { pos, what } => write!(f, "argument at {pos} is not affine: {what}"),
            Error::BadPowerBase { pos } => {
                write!(f, "power base at {pos} must be a nonzero rational constant")
            }
            Error::UnknownSymbol { pos, name } => write!(f, "undeclared symbol `{name}` at {pos}"),
            Error::NegativeFactorial(a) => write!(f, "factorial of negative integer {a}"),
            Error::NegativeLowerIndex(a) => write!(f, "negative lower index or count {a}"),
            Error::NonIntegerArgument(a) => write!(f, "non-integer argument {a}"),
            Error::ZeroDenominator => write!(f, "denominator vanishes"),
            Error::NonIntegerShift { var, factor } => {
                write!(f, "shifting `{var}` changes a count argument of {factor} by a non-integer")
            }
            Error::ZeroRatio => write!(f, "zero ratio"),
            Error::NotHypergeometric(m) => write!(f, "not hypergeometric: {m}"),
            Error::UnboundedSupport { n } => write!(f, "summation support is unbounded at n = {n}"),
            Error::Precondition(m) => write!(f, "precondition violated: {m}"),
        }
    }
}

impl core::error::Error for Error {}
