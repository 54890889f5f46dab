use std::fmt::Write as _;

use super::{Hypothesis, LinearModel, NBestList};
use crate::edit::FeatureVector;
use crate::error::{Error, Result};
use crate::text::TokenSentence;

const SEP: &str = " ||| ";

/// Sparse pattern names carry a left-context marker; everything else is dense.
fn is_sparse_name(name: &str) -> bool {
    name.contains("|L=")
}

fn parse_features(field: &str, line: usize) -> Result<FeatureVector> {
    let mut runs: Vec<(&str, Vec<f64>)> = Vec::new();
    for item in field.split_whitespace() {
        if let Some(name) = item.strip_suffix('=').filter(|n| !n.is_empty()) {
            runs.push((name, Vec::new()));
            continue;
        }
        let value: f64 = item
            .parse()
            .map_err(|_| Error::parse(line, format!("bad feature value `{item}`")))?;
        if !value.is_finite() {
            return Err(Error::parse(line, format!("non-finite feature value `{item}`")));
        }
        match runs.last_mut() {
            Some((_, values)) => values.push(value),
            None => return Err(Error::parse(line, "feature value before any name")),
        }
    }

    let mut fv = FeatureVector::new();
    let mut insert = |name: String, value: f64| -> Result<()> {
        if fv.contains(&name) {
            return Err(Error::parse(line, format!("duplicate feature `{name}`")));
        }
        if is_sparse_name(&name) {
            if value < 1.0 || value.fract() != 0.0 || value > f64::from(u32::MAX) {
                return Err(Error::parse(
                    line,
                    format!("sparse feature `{name}` needs a positive integer count"),
                ));
            }
            fv.add_sparse(name, value as u32);
        } else {
            fv.dense.insert(name, value);
        }
        Ok(())
    };
    for (name, values) in runs {
        match values.as_slice() {
            [] => return Err(Error::parse(line, format!("feature `{name}` has no value"))),
            [v] => insert(name.to_string(), *v)?,
            many => {
                for (i, v) in many.iter().enumerate() {
                    insert(format!("{name}{i}"), *v)?;
                }
            }
        }
    }
    Ok(fv)
}

/// Reads n-best lists in the four-field `id ||| tokens ||| features ||| total`
/// format.
///
/// Consecutive lines with the same id form one list. Ids must not decrease.
/// A feature run with several values (`Ops= 1 0 0`) expands to indexed names
/// (`Ops0`, `Ops1`, `Ops2`).
pub fn parse_nbest(text: &str) -> Result<Vec<NBestList>> {
    let mut lists: Vec<NBestList> = Vec::new();
    let mut current: Option<(usize, Vec<Hypothesis>)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split(SEP).collect();
        if fields.len() != 4 {
            return Err(Error::parse(
                line,
                format!("expected 4 fields separated by `|||`, found {}", fields.len()),
            ));
        }
        let id: usize = fields[0]
            .trim()
            .parse()
            .map_err(|_| Error::parse(line, format!("bad sentence id `{}`", fields[0])))?;
        let total: f64 = fields[3]
            .trim()
            .parse()
            .map_err(|_| Error::parse(line, format!("bad total score `{}`", fields[3])))?;
        if !total.is_finite() {
            return Err(Error::parse(line, "non-finite total score"));
        }
        let hyp = Hypothesis::new(
            TokenSentence::from_line(fields[1]),
            parse_features(fields[2], line)?,
            total,
        );
        match &mut current {
            Some((cur, hyps)) if *cur == id => hyps.push(hyp),
            Some((cur, _)) if *cur > id => {
                return Err(Error::parse(
                    line,
                    format!("sentence id {id} follows {cur}; ids must not decrease"),
                ))
            }
            _ => {
                if let Some((cur, hyps)) = current.take() {
                    lists.push(NBestList::new(cur, hyps)?);
                }
                current = Some((id, vec![hyp]));
            }
        }
    }
    if let Some((cur, hyps)) = current {
        lists.push(NBestList::new(cur, hyps)?);
    }
    Ok(lists)
}

/// Writes lists in the format read by [`parse_nbest`]; every feature is
/// written as its own single-valued run.
pub fn write_nbest(lists: &[NBestList]) -> String {
    let mut out = String::new();
    for list in lists {
        for h in &list.hypotheses {
            let feats: Vec<String> = h.features.iter().map(|(n, v)| format!("{n}= {v}")).collect();
            let _ = writeln!(
                out,
                "{}{SEP}{}{SEP}{}{SEP}{}",
                list.sentence_id,
                h.tokens.join(),
                feats.join(" "),
                h.model_score
            );
        }
    }
    out
}

/// Reads `name value` lines; blank lines and `#` comments are skipped.
pub fn parse_weights(text: &str) -> Result<LinearModel> {
    let mut model = LinearModel::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, value) = line
            .rsplit_once(char::is_whitespace)
            .ok_or_else(|| Error::parse(i + 1, "expected `name value`"))?;
        let value: f64 = value
            .parse()
            .map_err(|_| Error::parse(i + 1, format!("bad weight `{value}`")))?;
        if !value.is_finite() {
            return Err(Error::parse(i + 1, "non-finite weight"));
        }
        model.set(name.trim(), value);
    }
    Ok(model)
}

pub fn write_weights(model: &LinearModel) -> String {
    model
        .weights
        .iter()
        .map(|(k, v)| format!("{k} {v}\n"))
        .collect()
}
