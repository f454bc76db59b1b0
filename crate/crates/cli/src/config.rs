//! Flat key-path configuration files.
//!
//! A config is TOML restricted to dotted keys: `descent.sigma = 1e-4` and a
//! `[descent]` table with `sigma = 1e-4` both yield the key path
//! `descent.sigma`. Every key must be read by the command; leftovers are
//! rejected by [`Config::finish`].

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use diffeo_core::lie::Mat;
use diffeo_core::smooth::Polynomial;
use toml::Value;

use crate::CliError;

#[derive(Debug)]
pub struct Config {
    path: PathBuf,
    values: BTreeMap<String, Value>,
    used: RefCell<BTreeSet<String>>,
}

fn flatten(prefix: &str, table: &toml::Table, out: &mut BTreeMap<String, Value>) {
    for (k, v) in table {
        let key = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        match v {
            Value::Table(t) => flatten(&key, t, out),
            other => {
                out.insert(key, other.clone());
            }
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::new(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(path, &text)
    }

    pub fn parse(path: &Path, text: &str) -> Result<Self, CliError> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| CliError::new(format!("{}: {}", path.display(), e.message())))?;
        let mut values = BTreeMap::new();
        flatten("", &table, &mut values);
        Ok(Self {
            path: path.to_path_buf(),
            values,
            used: RefCell::new(BTreeSet::new()),
        })
    }

    /// Directory the config lives in; relative file keys resolve against it.
    pub fn dir(&self) -> PathBuf {
        self.path
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."))
    }

    fn raw(&self, key: &str) -> Option<&Value> {
        self.used.borrow_mut().insert(key.to_string());
        self.values.get(key)
    }

    fn require(&self, key: &str) -> Result<&Value, CliError> {
        self.raw(key)
            .ok_or_else(|| CliError::new(format!("missing config key `{key}`")))
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn f64(&self, key: &str) -> Result<f64, CliError> {
        as_f64(key, self.require(key)?)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        self.raw(key).map_or(Ok(default), |v| as_f64(key, v))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some(Value::Integer(i)) if *i >= 0 => Ok(*i as usize),
            Some(v) => Err(type_error(key, "a non-negative integer", v)),
        }
    }

    pub fn str(&self, key: &str) -> Result<&str, CliError> {
        match self.require(key)? {
            Value::String(s) => Ok(s),
            v => Err(type_error(key, "a string", v)),
        }
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> Result<&'a str, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some(Value::String(s)) => Ok(s),
            Some(v) => Err(type_error(key, "a string", v)),
        }
    }

    pub fn path(&self, key: &str) -> Result<PathBuf, CliError> {
        Ok(self.dir().join(self.str(key)?))
    }

    pub fn vec(&self, key: &str) -> Result<Vec<f64>, CliError> {
        as_vec(key, self.require(key)?)
    }

    pub fn matrix(&self, key: &str) -> Result<Mat, CliError> {
        as_matrix(key, self.require(key)?)
    }

    pub fn matrices(&self, key: &str) -> Result<Vec<Mat>, CliError> {
        as_list(key, self.require(key)?)?
            .iter()
            .enumerate()
            .map(|(i, v)| as_matrix(&format!("{key}[{i}]"), v))
            .collect()
    }

    pub fn vecs(&self, key: &str) -> Result<Vec<Vec<f64>>, CliError> {
        as_list(key, self.require(key)?)?
            .iter()
            .enumerate()
            .map(|(i, v)| as_vec(&format!("{key}[{i}]"), v))
            .collect()
    }

    /// Nested list `[[..], [..]]` of t-coefficient lists, one per path
    /// component, for each entry.
    pub fn coefficient_paths(&self, key: &str) -> Result<Vec<Vec<Vec<f64>>>, CliError> {
        as_list(key, self.require(key)?)?
            .iter()
            .enumerate()
            .map(|(i, path)| {
                let k = format!("{key}[{i}]");
                as_list(&k, path)?
                    .iter()
                    .enumerate()
                    .map(|(j, c)| as_vec(&format!("{k}[{j}]"), c))
                    .collect()
            })
            .collect()
    }

    /// List of polynomials, each a list of terms `[coef, e_1, …, e_n]`.
    pub fn polynomials(&self, key: &str) -> Result<Vec<Polynomial>, CliError> {
        as_list(key, self.require(key)?)?
            .iter()
            .enumerate()
            .map(|(i, v)| as_polynomial(&format!("{key}[{i}]"), v))
            .collect()
    }

    /// Matrix of polynomials indexed `[row][column]`.
    pub fn polynomial_table(&self, key: &str) -> Result<Vec<Vec<Polynomial>>, CliError> {
        as_list(key, self.require(key)?)?
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let k = format!("{key}[{i}]");
                as_list(&k, row)?
                    .iter()
                    .enumerate()
                    .map(|(j, p)| as_polynomial(&format!("{k}[{j}]"), p))
                    .collect()
            })
            .collect()
    }

    /// Rejects keys the command never looked at.
    pub fn finish(&self) -> Result<(), CliError> {
        let used = self.used.borrow();
        match self.values.keys().find(|k| !used.contains(*k)) {
            Some(k) => Err(CliError::new(format!("unknown config key `{k}`"))),
            None => Ok(()),
        }
    }
}

fn type_error(key: &str, wanted: &str, v: &Value) -> CliError {
    CliError::new(format!("config key `{key}` must be {wanted}, found {}", v.type_str()))
}

fn as_f64(key: &str, v: &Value) -> Result<f64, CliError> {
    match v {
        Value::Float(x) => Ok(*x),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(type_error(key, "a number", v)),
    }
}

fn as_list<'a>(key: &str, v: &'a Value) -> Result<&'a Vec<Value>, CliError> {
    match v {
        Value::Array(a) => Ok(a),
        _ => Err(type_error(key, "an array", v)),
    }
}

fn as_vec(key: &str, v: &Value) -> Result<Vec<f64>, CliError> {
    as_list(key, v)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_f64(&format!("{key}[{i}]"), x))
        .collect()
}

fn as_matrix(key: &str, v: &Value) -> Result<Mat, CliError> {
    let rows: Vec<Vec<f64>> = as_list(key, v)?
        .iter()
        .enumerate()
        .map(|(i, r)| as_vec(&format!("{key}[{i}]"), r))
        .collect::<Result<_, _>>()?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::new(format!("config key `{key}` must be a square matrix")));
    }
    Ok(Mat::from_fn(n, n, |i, j| rows[i][j]))
}

fn as_polynomial(key: &str, v: &Value) -> Result<Polynomial, CliError> {
    let terms: Vec<Vec<f64>> = as_list(key, v)?
        .iter()
        .enumerate()
        .map(|(i, t)| as_vec(&format!("{key}[{i}]"), t))
        .collect::<Result<_, _>>()?;
    let nvars = terms.first().map_or(0, |t| t.len().saturating_sub(1));
    if nvars == 0 {
        return Err(CliError::new(format!(
            "config key `{key}` needs terms [coef, e_1, ..., e_n] with n >= 1"
        )));
    }
    let mut out = Vec::with_capacity(terms.len());
    for t in &terms {
        if t.len() != nvars + 1 {
            return Err(CliError::new(format!("config key `{key}` mixes term lengths")));
        }
        let exps: Option<Vec<u32>> = t[1..]
            .iter()
            .map(|&e| (e >= 0.0 && e.fract() == 0.0 && e <= 64.0).then_some(e as u32))
            .collect();
        let exps = exps.ok_or_else(|| {
            CliError::new(format!("config key `{key}` has a non-integer exponent"))
        })?;
        out.push((t[0], exps));
    }
    Polynomial::new(nvars, out).map_err(|e| CliError::new(format!("config key `{key}`: {e}")))
}
