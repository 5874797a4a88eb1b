//! The spec-file language.
//!
//! ```text
//! # comments run to the end of the line
//! alpha = sqrt(2)/8
//! iet { perm = [3,2,4,1]; lengths = ["1/3", "1/3", "1/3 - a", "a"]; }
//! ```
//!
//! A file holds at most one alpha declaration (`alpha = ...` or
//! `alpha ~ x +/- e`) and exactly one stanza, either `iet { ... }` or
//! `family NAME { ... }`. Fields are `key = value` separated by `;`; values
//! are bracketed lists, quoted strings or bare words without whitespace.
//! Newlines carry no meaning.

use crate::error::{CliError, CliResult};
use ietforge::families::{sigma_by_name, Chart, FamilyInstance};
use ietforge::numeric::{parse_oracle, LiteralError};
use ietforge::{build_iet, AlphaOracle, Iet, Permutation, QAlpha};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A value with the byte offset it starts at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spanned<T> {
    pub value: T,
    pub at: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    /// Quoted string or bare word.
    Scalar(Spanned<String>),
    List(Vec<Spanned<String>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stanza {
    Iet(BTreeMap<String, Spanned<Value>>),
    Family {
        name: Spanned<String>,
        fields: BTreeMap<String, Spanned<Value>>,
    },
}

/// The syntax tree of a spec file, before any semantic check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecFile {
    /// Right-hand side of the alpha declaration.
    pub alpha: Option<Spanned<String>>,
    pub stanza: Stanza,
}

/// Byte offset to 1-based line and column (in characters).
fn line_col(text: &str, at: usize) -> (usize, usize) {
    let before = &text[..at.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn syntax(text: &str, at: usize, expected: impl Into<String>) -> CliError {
    let (line, col) = line_col(text, at);
    CliError::Syntax {
        line,
        col,
        expected: expected.into(),
    }
}

/// Maps a literal error inside the text starting at `base` to a position in
/// the file.
fn literal_error(text: &str, base: usize, e: &LiteralError) -> CliError {
    syntax(text, base + e.position, &e.message)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_trivia(&mut self) {
        loop {
            let r = self.rest();
            let trimmed = r.trim_start();
            self.pos += r.len() - trimmed.len();
            if trimmed.starts_with('#') {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                return;
            }
        }
    }

    fn error(&self, expected: impl Into<String>) -> CliError {
        syntax(self.text, self.pos, expected)
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_trivia();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> CliResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("`{c}`")))
        }
    }

    fn word(&mut self) -> Option<Spanned<String>> {
        self.skip_trivia();
        let r = self.rest();
        let first = r.chars().next()?;
        if !(first.is_ascii_alphabetic() || first == '_') {
            return None;
        }
        let len = r
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '-'))
            .unwrap_or(r.len());
        let at = self.pos;
        self.pos += len;
        Some(Spanned {
            value: r[..len].to_string(),
            at,
        })
    }

    /// The declaration text after `=` or `~`: up to a newline, a comment, a
    /// `;` outside brackets, or the keyword that opens the stanza.
    fn alpha_text(&mut self) -> Spanned<String> {
        let r = self.rest();
        let lead = r.len() - r.trim_start_matches([' ', '\t']).len();
        let start = self.pos + lead;
        let body = &self.text[start..];
        let mut depth = 0i32;
        let mut end = body.len();
        for (k, c) in body.char_indices() {
            match c {
                '[' | '(' => depth += 1,
                ']' | ')' => depth -= 1,
                '\n' | '#' => {
                    end = k;
                    break;
                }
                ';' if depth == 0 => {
                    end = k;
                    break;
                }
                c if c.is_whitespace() => {
                    let next = body[k..].trim_start();
                    let keyword = ["iet", "family"].iter().any(|kw| {
                        next.starts_with(kw) && !next[kw.len()..].starts_with(|c: char| c.is_ascii_alphanumeric())
                    });
                    if keyword {
                        end = k;
                        break;
                    }
                }
                _ => {}
            }
        }
        self.pos = start + end;
        Spanned {
            value: body[..end].trim_end().to_string(),
            at: start,
        }
    }

    fn scalar(&mut self) -> CliResult<Spanned<String>> {
        self.skip_trivia();
        let at = self.pos;
        if self.peek() == Some('"') {
            let body = &self.rest()[1..];
            let Some(close) = body.find('"') else {
                return Err(self.error("closing `\"`"));
            };
            let value = body[..close].to_string();
            self.pos += close + 2;
            // positions inside the string start after the quote
            return Ok(Spanned { value, at: at + 1 });
        }
        let r = self.rest();
        let len = r
            .find(|c: char| c.is_whitespace() || matches!(c, ';' | ',' | ']' | '}' | '#'))
            .unwrap_or(r.len());
        if len == 0 {
            return Err(self.error("a value"));
        }
        self.pos += len;
        Ok(Spanned {
            value: r[..len].to_string(),
            at,
        })
    }

    fn value(&mut self) -> CliResult<Spanned<Value>> {
        self.skip_trivia();
        let at = self.pos;
        if !self.eat('[') {
            return Ok(Spanned {
                value: Value::Scalar(self.scalar()?),
                at,
            });
        }
        let mut items = Vec::new();
        if !self.eat(']') {
            loop {
                items.push(self.scalar()?);
                if self.eat(']') {
                    break;
                }
                if !self.eat(',') {
                    return Err(self.error("`,` or `]`"));
                }
            }
        }
        Ok(Spanned {
            value: Value::List(items),
            at,
        })
    }

    fn fields(&mut self) -> CliResult<BTreeMap<String, Spanned<Value>>> {
        self.expect('{')?;
        let mut fields = BTreeMap::new();
        loop {
            if self.eat('}') {
                return Ok(fields);
            }
            let Some(key) = self.word() else {
                return Err(self.error("a field name or `}`"));
            };
            self.expect('=')?;
            let value = self.value()?;
            if fields.insert(key.value.clone(), value).is_some() {
                return Err(CliError::Semantic(format!("field `{}` given twice", key.value)));
            }
            if !self.eat(';') {
                self.skip_trivia();
                if self.peek() != Some('}') {
                    return Err(self.error("`;` or `}`"));
                }
            }
        }
    }
}

/// Parses the text of a spec file into its syntax tree.
pub fn parse_spec_file(text: &str) -> CliResult<SpecFile> {
    let mut p = Parser { text, pos: 0 };
    let mut alpha: Option<Spanned<String>> = None;
    loop {
        let Some(kw) = p.word() else {
            return Err(p.error("`alpha`, `iet` or `family`"));
        };
        match kw.value.as_str() {
            "alpha" => {
                if alpha.is_some() {
                    return Err(CliError::Semantic("alpha is declared twice".into()));
                }
                p.skip_trivia();
                let approximate = match p.peek() {
                    Some('=') => false,
                    Some('~') => true,
                    _ => return Err(p.error("`=` or `~`")),
                };
                p.pos += 1;
                let rhs = p.alpha_text();
                if rhs.value.is_empty() {
                    return Err(syntax(text, rhs.at, "an alpha value"));
                }
                if approximate && !rhs.value.contains("+/-") {
                    return Err(syntax(text, rhs.at + rhs.value.len(), "`+/-` in an enclosure"));
                }
                alpha = Some(rhs);
                p.eat(';');
            }
            "iet" | "family" => {
                let stanza = if kw.value == "iet" {
                    Stanza::Iet(p.fields()?)
                } else {
                    let Some(name) = p.word() else {
                        return Err(p.error("a family name"));
                    };
                    Stanza::Family {
                        name,
                        fields: p.fields()?,
                    }
                };
                p.skip_trivia();
                if !p.rest().is_empty() {
                    return Err(p.error("end of input"));
                }
                return Ok(SpecFile { alpha, stanza });
            }
            _ => {
                p.pos = kw.at;
                return Err(p.error("`alpha`, `iet` or `family`"));
            }
        }
    }
}

/// Where the session irrational came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaSource {
    Spec,
    Flag,
    Default,
}

/// The alpha used when neither the spec nor the command line declares one
/// and the lengths are rational.
pub const DEFAULT_ALPHA: &str = "sqrt(2)/2";

#[derive(Clone, Debug, Default)]
pub struct LoadOptions {
    /// `--alpha`, overriding the spec declaration.
    pub alpha: Option<String>,
    pub allow_rational: bool,
    pub precision_cap: Option<u32>,
}

/// A resolved spec: the session oracle, the exchange, and the family it
/// came from when it came from one.
#[derive(Clone, Debug)]
pub struct Subject {
    pub oracle: Arc<AlphaOracle>,
    pub alpha_source: AlphaSource,
    pub iet: Iet,
    pub family: Option<FamilyInstance>,
}

/// Parameters of a family, as given on the command line or in a stanza.
#[derive(Clone, Debug)]
pub enum FamilySpec {
    Thm14 { m: usize },
    Thm15 { n: usize, sigma: String, chart: Chart },
    N2,
    ConjRot { h: Iet },
}

impl FamilySpec {
    pub fn build(&self, oracle: Arc<AlphaOracle>) -> CliResult<FamilyInstance> {
        Ok(match self {
            FamilySpec::Thm14 { m } => FamilyInstance::thm14(*m, oracle)?,
            FamilySpec::Thm15 { n, sigma, chart } => FamilyInstance::thm15(&sigma_by_name(sigma, *n)?, oracle, *chart)?,
            FamilySpec::N2 => FamilyInstance::n2(oracle)?,
            FamilySpec::ConjRot { h } => {
                if h.oracle().declaration() != oracle.declaration() {
                    return Err(CliError::Semantic(format!(
                        "h is built over alpha = {} but the session alpha is {oracle}",
                        h.oracle()
                    )));
                }
                FamilyInstance::conjugated_rotation(h)?
            }
        })
    }
}

/// Builds the session oracle from a declaration text, applying the
/// precision cap.
pub fn make_oracle(text: &str, base: Option<(&str, usize)>, options: &LoadOptions) -> CliResult<Arc<AlphaOracle>> {
    let oracle = parse_oracle(text, options.allow_rational).map_err(|e| match base {
        Some((file, at)) => literal_error(file, at, &e),
        None => CliError::Syntax {
            line: 1,
            col: e.position + 1,
            expected: format!("{} in alpha `{text}`", e.message),
        },
    })?;
    let oracle = match options.precision_cap {
        Some(cap) => oracle.with_refinement_cap(cap),
        None => oracle,
    };
    Ok(Arc::new(oracle))
}

fn scalar<'v>(text: &str, fields: &'v BTreeMap<String, Spanned<Value>>, key: &str) -> CliResult<Option<&'v Spanned<String>>> {
    match fields.get(key) {
        None => Ok(None),
        Some(Spanned {
            value: Value::Scalar(s), ..
        }) => Ok(Some(s)),
        Some(v) => Err(syntax(text, v.at, format!("a single value for `{key}`"))),
    }
}

fn list<'v>(text: &str, fields: &'v BTreeMap<String, Spanned<Value>>, key: &str) -> CliResult<&'v [Spanned<String>]> {
    match fields.get(key) {
        None => Err(CliError::Semantic(format!("missing field `{key}`"))),
        Some(Spanned {
            value: Value::List(items),
            ..
        }) => Ok(items),
        Some(v) => Err(syntax(text, v.at, format!("a `[...]` list for `{key}`"))),
    }
}

fn integer(text: &str, s: &Spanned<String>) -> CliResult<usize> {
    s.value.parse().map_err(|_| syntax(text, s.at, "a positive integer"))
}

fn check_keys(fields: &BTreeMap<String, Spanned<Value>>, allowed: &[&str], what: &str) -> CliResult<()> {
    match fields.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(CliError::Semantic(format!(
            "unknown field `{k}` in {what}; expected one of {}",
            allowed.join(", ")
        ))),
        None => Ok(()),
    }
}

/// Permutation and lengths of an `iet` stanza (or of `h` in a
/// `conj-rot` stanza), lengths still as literals.
fn iet_fields(text: &str, fields: &BTreeMap<String, Spanned<Value>>) -> CliResult<(Vec<usize>, Vec<(QAlpha, usize)>)> {
    let perm = list(text, fields, "perm")?
        .iter()
        .map(|s| integer(text, s))
        .collect::<CliResult<Vec<usize>>>()?;
    let lengths = list(text, fields, "lengths")?
        .iter()
        .map(|s| {
            s.value
                .parse::<QAlpha>()
                .map(|x| (x, s.at))
                .map_err(|e| literal_error(text, s.at, &e))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok((perm, lengths))
}

fn build_from_fields(perm: Vec<usize>, lengths: Vec<(QAlpha, usize)>, oracle: Arc<AlphaOracle>) -> CliResult<Iet> {
    if perm.len() != lengths.len() {
        return Err(CliError::Semantic(format!(
            "perm has {} entries but lengths has {}",
            perm.len(),
            lengths.len()
        )));
    }
    let perm = Permutation::new(perm)?;
    Ok(build_iet(perm, lengths.into_iter().map(|(x, _)| x).collect(), oracle)?)
}

/// Parses and resolves a spec file: oracle, exchange and family.
pub fn parse_spec(text: &str, options: &LoadOptions) -> CliResult<Subject> {
    let file = parse_spec_file(text)?;
    // literals and names are checked before the oracle is built so that
    // syntax errors win over semantic ones
    enum Pending {
        Iet(Vec<usize>, Vec<(QAlpha, usize)>),
        Family(FamilyPending),
    }
    enum FamilyPending {
        Thm14(usize),
        Thm15(usize, String, Chart),
        N2,
        ConjRot(Vec<usize>, Vec<(QAlpha, usize)>),
    }
    let pending = match &file.stanza {
        Stanza::Iet(fields) => {
            check_keys(fields, &["perm", "lengths"], "an iet stanza")?;
            let (perm, lengths) = iet_fields(text, fields)?;
            Pending::Iet(perm, lengths)
        }
        Stanza::Family { name, fields } => Pending::Family(match name.value.as_str() {
            "thm14" => {
                check_keys(fields, &["m"], "family thm14")?;
                let m = scalar(text, fields, "m")?.ok_or_else(|| CliError::Semantic("missing field `m`".into()))?;
                FamilyPending::Thm14(integer(text, m)?)
            }
            "thm15" => {
                check_keys(fields, &["n", "sigma", "chart"], "family thm15")?;
                let n = scalar(text, fields, "n")?.ok_or_else(|| CliError::Semantic("missing field `n`".into()))?;
                let n = integer(text, n)?;
                let sigma = match fields.get("sigma") {
                    None => "cycle".to_string(),
                    Some(Spanned {
                        value: Value::Scalar(s), ..
                    }) => s.value.clone(),
                    Some(Spanned {
                        value: Value::List(items),
                        ..
                    }) => {
                        let images: Vec<&str> = items.iter().map(|s| s.value.as_str()).collect();
                        format!("[{}]", images.join(","))
                    }
                };
                let chart = match scalar(text, fields, "chart")? {
                    None => Chart::Native,
                    Some(s) => match s.value.as_str() {
                        "native" => Chart::Native,
                        "unit" => Chart::Unit,
                        _ => return Err(syntax(text, s.at, "`native` or `unit`")),
                    },
                };
                FamilyPending::Thm15(n, sigma, chart)
            }
            "n2" => {
                check_keys(fields, &[], "family n2")?;
                FamilyPending::N2
            }
            "conj-rot" => {
                check_keys(fields, &["perm", "lengths"], "family conj-rot")?;
                let (perm, lengths) = iet_fields(text, fields)?;
                FamilyPending::ConjRot(perm, lengths)
            }
            _ => return Err(syntax(text, name.at, "`thm14`, `thm15`, `n2` or `conj-rot`")),
        }),
    };

    let uses_alpha = match &pending {
        Pending::Iet(_, lengths) => lengths.iter().any(|(x, _)| !x.is_rational()),
        Pending::Family(_) => true,
    };
    let (oracle, alpha_source) = match (&options.alpha, &file.alpha) {
        (Some(flag), _) => (make_oracle(flag, None, options)?, AlphaSource::Flag),
        (None, Some(decl)) => (make_oracle(&decl.value, Some((text, decl.at)), options)?, AlphaSource::Spec),
        (None, None) if !uses_alpha => (make_oracle(DEFAULT_ALPHA, None, options)?, AlphaSource::Default),
        (None, None) => {
            return Err(CliError::Semantic(
                "the spec uses alpha but declares none; add `alpha = ...` or pass --alpha".into(),
            ))
        }
    };

    let (iet, family) = match pending {
        Pending::Iet(perm, lengths) => (build_from_fields(perm, lengths, oracle.clone())?, None),
        Pending::Family(f) => {
            let spec = match f {
                FamilyPending::Thm14(m) => FamilySpec::Thm14 { m },
                FamilyPending::Thm15(n, sigma, chart) => FamilySpec::Thm15 { n, sigma, chart },
                FamilyPending::N2 => FamilySpec::N2,
                FamilyPending::ConjRot(perm, lengths) => FamilySpec::ConjRot {
                    h: build_from_fields(perm, lengths, oracle.clone())?,
                },
            };
            let instance = spec.build(oracle.clone())?;
            (instance.iet.clone(), Some(instance))
        }
    };
    Ok(Subject {
        oracle,
        alpha_source,
        iet,
        family,
    })
}

/// Spec text that [`parse_spec`] turns back into `t`.
pub fn serialize_spec(t: &Iet) -> String {
    let lengths: Vec<String> = t.lengths().iter().map(|l| format!("\"{l}\"")).collect();
    format!(
        "{}\niet {{\n  perm = {};\n  lengths = [{}];\n}}\n",
        t.oracle().declaration(),
        t.permutation(),
        lengths.join(", ")
    )
}
