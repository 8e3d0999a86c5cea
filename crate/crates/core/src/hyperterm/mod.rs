//! Proper hypergeometric terms: representation, parsing, shift quotients,
//! exact evaluation and summation support.

pub mod eval;
pub mod linear;
pub mod parse;
pub mod quotient;
pub mod term;

pub use eval::{eval_lenient, eval_term, natural_support, GammaSum, Support};
pub use linear::LinearForm;
pub use parse::{parse_linear, parse_rational, parse_ratfun, parse_sum, parse_term};
pub use quotient::{shift_quotient, shift_quotient_factored};
pub use term::{Binomial, Factorial, Power, Rising, TermExpression};

use alloc::string::String;
use alloc::vec::Vec;

/// Ordered auxiliary parameters, disjoint from the summation and
/// recurrence variables.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ParamSet(Vec<String>);

impl ParamSet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, crate::Error> {
        let mut out: Vec<String> = Vec::new();
        for s in names {
            let s = s.as_ref();
            if out.iter().any(|x| x == s) {
                return Err(crate::Error::Precondition(alloc::format!("parameter `{s}` listed twice")));
            }
            out.push(s.into());
        }
        Ok(ParamSet(out))
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Variable list `[k, n, params...]` used throughout.
    pub fn vars(&self, k: &str, n: &str) -> Result<crate::exactalg::Vars, crate::Error> {
        if k == n || self.0.iter().any(|p| p == k || p == n) {
            return Err(crate::Error::Precondition(
                "summation variable, recurrence variable and parameters must be distinct".into(),
            ));
        }
        let mut names: Vec<&str> = alloc::vec![k, n];
        names.extend(self.0.iter().map(|s| s.as_str()));
        Ok(crate::exactalg::Vars::new(&names))
    }
}
