//! Identity files: one `key: value` field per line.
//!
//! ```text
//! name: chu-vandermonde
//! summand: binomial(a,k)*binomial(n,k)
//! rhs: binomial(a+n,a)
//! sum_var: k
//! rec_var: n
//! lower: 0
//! upper: n
//! params: a
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. `notes` may repeat;
//! every other key appears at most once. A missing limit is unbounded.

use std::fmt;
use std::path::{Path, PathBuf};

use ctproof_core::hyperterm::{parse_linear, parse_sum, parse_term, ParamSet};
use ctproof_core::synd::Identity;

/// Error tied to a file and, when known, a 1-based line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FileError {
    pub path: PathBuf,
    pub line: Option<usize>,
    pub msg: String,
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "{}:{}: {}", self.path.display(), l, self.msg),
            None => write!(f, "{}: {}", self.path.display(), self.msg),
        }
    }
}

impl std::error::Error for FileError {}

/// A field value with the line it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    pub value: String,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityFile {
    pub path: PathBuf,
    pub name: String,
    pub summand: Field,
    pub rhs: Field,
    pub sum_var: Field,
    pub rec_var: Field,
    pub lower: Option<Field>,
    pub upper: Option<Field>,
    pub params: Vec<String>,
    pub params_line: Option<usize>,
    pub notes: Vec<String>,
}

const KEYS: [&str; 9] = ["name", "summand", "rhs", "sum_var", "rec_var", "lower", "upper", "params", "notes"];

impl IdentityFile {
    pub fn read(path: &Path) -> Result<Self, FileError> {
        let text = std::fs::read_to_string(path).map_err(|e| FileError {
            path: path.to_path_buf(),
            line: None,
            msg: e.to_string(),
        })?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self, FileError> {
        let err = |line: Option<usize>, msg: String| FileError {
            path: path.to_path_buf(),
            line,
            msg,
        };
        let mut fields: Vec<(String, Field)> = Vec::new();
        let mut notes = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let Some((key, value)) = trimmed.split_once(':') else {
                return Err(err(Some(line), format!("expected `key: value`, found `{trimmed}`")));
            };
            let key = key.trim();
            let value = value.trim().to_string();
            if !KEYS.contains(&key) {
                return Err(err(Some(line), format!("unknown key `{key}`")));
            }
            if key == "notes" {
                notes.push(value);
                continue;
            }
            if let Some((_, f)) = fields.iter().find(|(k, _)| k == key) {
                return Err(err(Some(line), format!("duplicate key `{key}` (first on line {})", f.line)));
            }
            if value.is_empty() {
                return Err(err(Some(line), format!("empty value for `{key}`")));
            }
            fields.push((key.to_string(), Field { value, line }));
        }
        let take = |key: &str| fields.iter().find(|(k, _)| k == key).map(|(_, f)| f.clone());
        let need = |key: &str| take(key).ok_or_else(|| err(None, format!("missing required key `{key}`")));
        let name = match take("name") {
            Some(f) => f.value,
            None => path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
        };
        let (params, params_line) = match take("params") {
            Some(f) => (
                f.value
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect(),
                Some(f.line),
            ),
            None => (Vec::new(), None),
        };
        let file = IdentityFile {
            path: path.to_path_buf(),
            name,
            summand: need("summand")?,
            rhs: need("rhs")?,
            sum_var: need("sum_var")?,
            rec_var: need("rec_var")?,
            lower: take("lower"),
            upper: take("upper"),
            params,
            params_line,
            notes,
        };
        file.check_symbols()?;
        Ok(file)
    }

    fn err(&self, line: Option<usize>, msg: String) -> FileError {
        FileError {
            path: self.path.clone(),
            line,
            msg,
        }
    }

    fn check_symbols(&self) -> Result<(), FileError> {
        let (k, n) = (&self.sum_var.value, &self.rec_var.value);
        if k == n {
            return Err(self.err(Some(self.rec_var.line), format!("sum_var and rec_var are both `{k}`")));
        }
        if let Some(p) = self.params.iter().find(|p| *p == k || *p == n) {
            return Err(self.err(self.params_line, format!("parameter `{p}` clashes with a summation or recurrence variable")));
        }
        Ok(())
    }

    /// Parses every expression against the declared symbols.
    pub fn to_identity(&self) -> Result<Identity, FileError> {
        let at = |f: &Field| {
            let line = f.line;
            move |e: ctproof_core::Error| self.err(Some(line), e.to_string())
        };
        let params = ParamSet::new(&self.params).map_err(|e| self.err(self.params_line, e.to_string()))?;
        let vars = params
            .vars(&self.sum_var.value, &self.rec_var.value)
            .map_err(|e| self.err(self.params_line, e.to_string()))?;
        let limit = |f: &Option<Field>| f.as_ref().map(|f| parse_linear(&f.value, &vars).map_err(at(f))).transpose();
        Ok(Identity {
            summand: parse_term(&self.summand.value, &vars).map_err(at(&self.summand))?,
            rhs: parse_sum(&self.rhs.value, &vars).map_err(at(&self.rhs))?,
            k: self.sum_var.value.clone(),
            n: self.rec_var.value.clone(),
            lower: limit(&self.lower)?,
            upper: limit(&self.upper)?,
            params,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CV: &str = "# comment\nname: cv\nsummand: binomial(a,k)*binomial(n,k)\nrhs: binomial(a+n,a)\nsum_var: k\nrec_var: n\nlower: 0\nupper: n\nparams: a\n";

    fn parse(text: &str) -> Result<IdentityFile, FileError> {
        IdentityFile::parse(text, Path::new("t.identity"))
    }

    #[test]
    fn reads_all_fields() {
        let f = parse(CV).unwrap();
        assert_eq!(f.name, "cv");
        assert_eq!(f.params, vec!["a"]);
        assert_eq!(f.summand.line, 3);
        assert!(f.to_identity().is_ok());
    }

    #[test]
    fn name_defaults_to_stem() {
        let f = parse(&CV.replace("name: cv\n", "")).unwrap();
        assert_eq!(f.name, "t");
    }

    #[test]
    fn errors_carry_lines() {
        let e = parse(&CV.replace("upper: n", "upper n")).unwrap_err();
        assert_eq!(e.line, Some(8));
        let e = parse(&format!("{CV}rhs: 1\n")).unwrap_err();
        assert_eq!(e.line, Some(10));
        assert!(e.msg.contains("duplicate"));
        let e = parse(&CV.replace("summand: ", "sumand: ")).unwrap_err();
        assert!(e.msg.contains("unknown key"));
        let e = parse(&CV.replace("rhs: binomial(a+n,a)\n", "")).unwrap_err();
        assert_eq!(e.line, None);
    }

    #[test]
    fn expression_errors_point_at_their_field() {
        let f = parse(&CV.replace("binomial(a+n,a)", "binomial(a+n,b)")).unwrap();
        let e = f.to_identity().unwrap_err();
        assert_eq!(e.line, Some(4));
        assert_eq!(e.to_string().split(':').take(2).collect::<Vec<_>>(), vec!["t.identity", "4"]);
    }

    #[test]
    fn variable_clashes_rejected() {
        assert!(parse(&CV.replace("rec_var: n", "rec_var: k")).is_err());
        assert!(parse(&CV.replace("params: a", "params: a, n")).is_err());
    }
}
