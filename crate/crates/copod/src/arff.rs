//! A subset of ARFF: `%` comment lines, `@relation`, numeric and nominal
//! `@attribute` declarations, and dense comma-separated `@data` rows.
//!
//! Numeric attributes become feature columns. Exactly one nominal
//! attribute must be present and is read as the outlier label.

use std::fs;
use std::path::Path;

use copod_core::Dataset;

use crate::error::{Error, Result};

/// How nominal label values map to {0, 1}.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum LabelMapping {
    /// `yes` is an outlier, `no` is an inlier (case-insensitive, quotes
    /// stripped). Any other vocabulary is rejected.
    #[default]
    YesNo,
    /// The named value is an outlier; every other declared value is an
    /// inlier.
    Outlier(String),
}

#[derive(Debug, Clone, Default)]
pub struct ArffOptions {
    pub labels: LabelMapping,
    /// Numeric attributes to leave out of the feature matrix.
    pub drop: Vec<String>,
}

#[derive(Debug)]
enum AttrKind {
    Numeric,
    Nominal(Vec<String>),
}

#[derive(Debug)]
struct Attribute {
    name: String,
    kind: AttrKind,
}

pub fn load_arff(path: impl AsRef<Path>, options: &ArffOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_arff(&text, path, options)
}

fn unquote(s: &str) -> &str {
    let s = s.trim();
    for q in ['\'', '"'] {
        if s.len() >= 2 && s.starts_with(q) && s.ends_with(q) {
            return &s[1..s.len() - 1];
        }
    }
    s
}

/// Splits on commas outside single or double quotes.
fn split_fields(line: &str) -> Vec<&str> {
    let mut fields = Vec::new();
    let mut quote = None;
    let mut start = 0;
    for (i, c) in line.char_indices() {
        match (quote, c) {
            (None, '\'' | '"') => quote = Some(c),
            (Some(q), c) if c == q => quote = None,
            (None, ',') => {
                fields.push(line[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    fields.push(line[start..].trim());
    fields
}

/// Splits `<name> <rest>` where the name may be quoted.
fn split_name(decl: &str) -> Option<(&str, &str)> {
    let decl = decl.trim_start();
    let first = decl.chars().next()?;
    if first == '\'' || first == '"' {
        let end = decl[1..].find(first)? + 1;
        Some((&decl[1..end], decl[end + 1..].trim()))
    } else {
        let end = decl.find(char::is_whitespace)?;
        Some((&decl[..end], decl[end..].trim()))
    }
}

fn keyword<'a>(line: &'a str, kw: &str) -> Option<&'a str> {
    let head = line.get(..kw.len())?;
    if head.eq_ignore_ascii_case(kw) {
        let rest = &line[kw.len()..];
        if rest.is_empty() || rest.starts_with(char::is_whitespace) {
            return Some(rest.trim());
        }
    }
    None
}

fn parse_attribute(decl: &str) -> std::result::Result<Attribute, String> {
    let (name, ty) = split_name(decl).ok_or_else(|| format!("unparseable attribute declaration `{decl}`"))?;
    let kind = if ty.starts_with('{') && ty.ends_with('}') {
        let values: Vec<String> = split_fields(&ty[1..ty.len() - 1])
            .into_iter()
            .map(|v| unquote(v).to_string())
            .filter(|v| !v.is_empty())
            .collect();
        if values.is_empty() {
            return Err(format!("nominal attribute `{name}` declares no values"));
        }
        AttrKind::Nominal(values)
    } else if ["numeric", "real", "integer"]
        .iter()
        .any(|t| ty.eq_ignore_ascii_case(t))
    {
        AttrKind::Numeric
    } else {
        return Err(format!("unsupported type `{ty}` for attribute `{name}`"));
    };
    Ok(Attribute {
        name: name.to_string(),
        kind,
    })
}

fn label_codes(name: &str, vocab: &[String], mapping: &LabelMapping) -> std::result::Result<Vec<u8>, String> {
    match mapping {
        LabelMapping::YesNo => vocab
            .iter()
            .map(|v| match v.to_ascii_lowercase().as_str() {
                "yes" => Ok(1),
                "no" => Ok(0),
                _ => Err(format!(
                    "label attribute `{name}` has value `{v}`; only yes/no map by default, pass an explicit outlier value"
                )),
            })
            .collect(),
        LabelMapping::Outlier(value) => {
            if !vocab.iter().any(|v| v == value) {
                return Err(format!("outlier value `{value}` is not declared by `{name}`"));
            }
            Ok(vocab.iter().map(|v| (v == value) as u8).collect())
        }
    }
}

/// Parses ARFF text. `source` is only used in error messages.
pub fn parse_arff(text: &str, source: &Path, options: &ArffOptions) -> Result<Dataset> {
    let err = |msg: String| Error::parse(source, msg);
    let mut attributes = Vec::new();
    let mut lines = text.lines().enumerate();
    let mut in_data = false;

    for (_, raw) in lines.by_ref() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if keyword(line, "@relation").is_some() {
            continue;
        }
        if let Some(decl) = keyword(line, "@attribute") {
            attributes.push(parse_attribute(decl).map_err(err)?);
            continue;
        }
        if keyword(line, "@data").is_some() {
            in_data = true;
            break;
        }
        return Err(err(format!("unexpected line `{line}`")));
    }
    if !in_data {
        return Err(err("missing @data section".into()));
    }

    let nominal: Vec<usize> = attributes
        .iter()
        .enumerate()
        .filter(|(_, a)| matches!(a.kind, AttrKind::Nominal(_)))
        .map(|(i, _)| i)
        .collect();
    let label_idx = match nominal.as_slice() {
        [] => return Err(err("no nominal attribute to use as the label".into())),
        [one] => *one,
        many => {
            let names: Vec<&str> = many.iter().map(|&i| attributes[i].name.as_str()).collect();
            return Err(err(format!(
                "expected one nominal label attribute, found {}: {}",
                names.len(),
                names.join(", ")
            )));
        }
    };
    let vocab = match &attributes[label_idx].kind {
        AttrKind::Nominal(v) => v.clone(),
        AttrKind::Numeric => unreachable!(),
    };
    let codes = label_codes(&attributes[label_idx].name, &vocab, &options.labels).map_err(err)?;
    for name in &options.drop {
        if !attributes.iter().any(|a| &a.name == name) {
            return Err(err(format!("cannot drop unknown attribute `{name}`")));
        }
    }
    let keep: Vec<bool> = attributes
        .iter()
        .enumerate()
        .map(|(i, a)| i != label_idx && !options.drop.contains(&a.name))
        .collect();
    let names: Vec<String> = attributes
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(a, _)| a.name.clone())
        .collect();
    if names.is_empty() {
        return Err(err("no numeric attributes".into()));
    }

    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut row = 0;
    for (lineno, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        row += 1;
        if line.starts_with('{') {
            return Err(err(format!("line {}: sparse rows are not supported", lineno + 1)));
        }
        let fields = split_fields(line);
        if fields.len() != attributes.len() {
            return Err(err(format!(
                "data row {row} (line {}) has {} values, expected {}",
                lineno + 1,
                fields.len(),
                attributes.len()
            )));
        }
        for (i, field) in fields.iter().enumerate() {
            if *field == "?" {
                return Err(err(format!(
                    "missing value at data row {row}, attribute `{}`",
                    attributes[i].name
                )));
            }
            if i == label_idx {
                let v = unquote(field);
                let pos = vocab.iter().position(|x| x == v).ok_or_else(|| {
                    err(format!("undeclared label `{v}` at data row {row}"))
                })?;
                labels.push(codes[pos]);
            } else if keep[i] {
                match field.parse::<f64>() {
                    Ok(x) if x.is_finite() => values.push(x),
                    _ => {
                        return Err(err(format!(
                            "non-numeric value `{field}` at data row {row}, attribute `{}`",
                            attributes[i].name
                        )))
                    }
                }
            }
        }
    }
    if labels.is_empty() {
        return Err(Error::data(source.display().to_string(), copod_core::Error::Empty));
    }
    let d = names.len();
    Dataset::from_flat(values, d, Some(names), Some(labels))
        .map_err(|e| Error::data(source.display().to_string(), e))
}
