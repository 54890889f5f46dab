//! The M² gold format: an `S` line with the tokenized source followed by
//! `A start end|||type|||correction|||REQUIRED|||-NONE-|||annotator` lines,
//! blocks separated by a blank line.

use std::fmt::Write as _;

use super::m2::GoldAnnotation;
use crate::edit::EditSpan;
use crate::error::{Error, Result};
use crate::text::TokenSentence;

const NONE: &str = "-NONE-";

fn is_noop(kind: &str, start: i64, end: i64) -> bool {
    (start == -1 && end == -1) || kind == "noop"
}

pub fn parse_m2(text: &str) -> Result<Vec<GoldAnnotation>> {
    let mut out = Vec::new();
    let mut source: Option<(usize, TokenSentence)> = None;
    let mut edits: Vec<(usize, Option<EditSpan>)> = Vec::new();

    fn finish(
        source: &mut Option<(usize, TokenSentence)>,
        edits: &mut Vec<(usize, Option<EditSpan>)>,
        out: &mut Vec<GoldAnnotation>,
    ) -> Result<()> {
        if let Some((line, src)) = source.take() {
            let n = edits.iter().map(|(a, _)| a + 1).max().unwrap_or(1);
            let mut sets = vec![Vec::new(); n];
            for (annotator, edit) in edits.drain(..) {
                if let Some(e) = edit {
                    sets[annotator].push(e);
                }
            }
            let gold = GoldAnnotation::new(src.with_id(out.len()), sets).map_err(|e| {
                Error::parse(line, e.to_string())
            })?;
            out.push(gold);
        }
        Ok(())
    }

    for (i, line) in text.lines().enumerate() {
        let no = i + 1;
        if line.trim().is_empty() {
            finish(&mut source, &mut edits, &mut out)?;
            continue;
        }
        if let Some(rest) = line.strip_prefix("S ").or_else(|| (line == "S").then_some("")) {
            finish(&mut source, &mut edits, &mut out)?;
            source = Some((no, TokenSentence::from_line(rest)));
        } else if let Some(rest) = line.strip_prefix("A ") {
            let src = &source
                .as_ref()
                .ok_or_else(|| Error::parse(no, "`A` line before any `S` line"))?
                .1;
            let fields: Vec<&str> = rest.split("|||").collect();
            if fields.len() != 6 {
                return Err(Error::parse(no, "expected 6 `|||`-separated fields"));
            }
            let mut span = fields[0].split(' ');
            let (start, end) = match (span.next(), span.next(), span.next()) {
                (Some(a), Some(b), None) => (
                    a.parse::<i64>().map_err(|_| Error::parse(no, "bad start offset"))?,
                    b.parse::<i64>().map_err(|_| Error::parse(no, "bad end offset"))?,
                ),
                _ => return Err(Error::parse(no, "expected `start end`")),
            };
            let annotator: usize = fields[5]
                .trim()
                .parse()
                .map_err(|_| Error::parse(no, "bad annotator id"))?;
            let kind = fields[1];
            if is_noop(kind, start, end) {
                edits.push((annotator, None));
                continue;
            }
            if start < 0 || end < start || end as usize > src.len() {
                return Err(Error::parse(no, format!("span {start} {end} outside the source")));
            }
            let correction: Vec<&str> = match fields[2] {
                NONE => Vec::new(),
                c => c.split_whitespace().collect(),
            };
            let edit = EditSpan::new(start as usize, end as usize, &correction).with_label(kind);
            edits.push((annotator, Some(edit)));
        } else {
            return Err(Error::parse(no, "expected an `S` or `A` line"));
        }
    }
    finish(&mut source, &mut edits, &mut out)?;
    Ok(out)
}

/// Writes gold annotations; an annotator without edits gets a `-1 -1` line.
pub fn write_m2(gold: &[GoldAnnotation]) -> String {
    let mut out = String::new();
    for g in gold {
        let _ = writeln!(out, "S {}", g.source.join());
        let single_empty = g.edit_sets.len() == 1 && g.edit_sets[0].is_empty();
        for (annotator, set) in g.edit_sets.iter().enumerate() {
            if set.is_empty() && !single_empty {
                let _ = writeln!(out, "A -1 -1|||{NONE}|||{NONE}|||REQUIRED|||{NONE}|||{annotator}");
            }
            for e in set {
                let _ = writeln!(
                    out,
                    "A {} {}|||{}|||{}|||REQUIRED|||{NONE}|||{annotator}",
                    e.start,
                    e.end,
                    e.type_label.as_deref().unwrap_or("UNK"),
                    e.correction.join(" ")
                );
            }
        }
        out.push('\n');
    }
    out
}
