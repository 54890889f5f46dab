use std::collections::HashMap;
use std::f64::consts::LN_10;
use std::fmt::Write as _;

use super::model::{Entry, NGramModel, Table, BOS, BOS_ID, EOS, EOS_ID, UNK, UNK_ID};
use crate::error::{Error, Result};

/// log10 value written for impossible events.
const LOG10_ZERO: f64 = -99.0;

fn to_log10(ln: f64) -> f64 {
    if ln.is_finite() {
        ln / LN_10
    } else {
        LOG10_ZERO
    }
}

fn from_log10(v: f64) -> f64 {
    if v <= LOG10_ZERO {
        f64::NEG_INFINITY
    } else {
        v * LN_10
    }
}

impl NGramModel {
    /// Serializes to ARPA text. Probabilities and backoffs are log10;
    /// entries within a section are sorted by their word strings.
    pub fn to_arpa(&self) -> String {
        let mut out = String::from("\\data\\\n");
        for (k, table) in self.tables.iter().enumerate() {
            let _ = writeln!(out, "ngram {}={}", k + 1, table.len());
        }
        for (k, table) in self.tables.iter().enumerate() {
            let _ = write!(out, "\n\\{}-grams:\n", k + 1);
            let mut rows: Vec<(Vec<&str>, &Entry)> = table
                .iter()
                .map(|(g, e)| (g.iter().map(|&id| self.vocab[id as usize].as_str()).collect(), e))
                .collect();
            rows.sort_by(|a, b| a.0.cmp(&b.0));
            let top = k + 1 == self.order;
            for (words, e) in rows {
                let _ = write!(out, "{}\t{}", to_log10(e.logprob), words.join(" "));
                if !top {
                    let _ = write!(out, "\t{}", to_log10(e.backoff));
                }
                out.push('\n');
            }
        }
        out.push_str("\n\\end\\\n");
        out
    }

    pub fn from_arpa(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
        for (_, line) in lines.by_ref() {
            if line == "\\data\\" {
                break;
            }
        }
        let mut declared: Vec<usize> = Vec::new();
        let mut section: Option<usize> = None;
        let mut raw: Vec<Vec<(Vec<String>, f64, f64)>> = Vec::new();
        let mut ended = false;
        for (no, line) in lines {
            if line.is_empty() {
                continue;
            }
            if line == "\\end\\" {
                ended = true;
                break;
            }
            if let Some(rest) = line.strip_prefix("ngram ") {
                let (k, n) = rest
                    .split_once('=')
                    .ok_or_else(|| Error::parse(no, "bad ngram count line"))?;
                let k: usize = k.trim().parse().map_err(|_| Error::parse(no, "bad order"))?;
                let n: usize = n.trim().parse().map_err(|_| Error::parse(no, "bad count"))?;
                if k != declared.len() + 1 {
                    return Err(Error::parse(no, "orders must be declared in sequence"));
                }
                declared.push(n);
                raw.push(Vec::new());
                continue;
            }
            if let Some(k) = line
                .strip_prefix('\\')
                .and_then(|l| l.strip_suffix("-grams:"))
            {
                let k: usize = k.parse().map_err(|_| Error::parse(no, "bad section header"))?;
                if k == 0 || k > declared.len() {
                    return Err(Error::parse(no, format!("undeclared order {k}")));
                }
                section = Some(k);
                continue;
            }
            let k = section.ok_or_else(|| Error::parse(no, "entry outside a section"))?;
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() < 2 || fields.len() > 3 {
                return Err(Error::parse(no, "expected `log10prob<TAB>ngram[<TAB>log10backoff]`"));
            }
            let prob: f64 = fields[0]
                .parse()
                .map_err(|_| Error::parse(no, format!("bad probability `{}`", fields[0])))?;
            let backoff: f64 = match fields.get(2) {
                Some(b) => b
                    .parse()
                    .map_err(|_| Error::parse(no, format!("bad backoff `{b}`")))?,
                None => 0.0,
            };
            let words: Vec<String> = fields[1].split(' ').map(str::to_owned).collect();
            if words.len() != k || words.iter().any(String::is_empty) {
                return Err(Error::parse(no, format!("expected a {k}-gram")));
            }
            raw[k - 1].push((words, prob, backoff));
        }
        if !ended {
            return Err(Error::parse(text.lines().count(), "missing \\end\\"));
        }
        if declared.is_empty() {
            return Err(Error::parse(1, "no \\data\\ section"));
        }
        for (k, (n, rows)) in declared.iter().zip(&raw).enumerate() {
            if *n != rows.len() {
                return Err(Error::parse(
                    0,
                    format!("{}-gram count {} declared, {} found", k + 1, n, rows.len()),
                ));
            }
        }

        let mut vocab: Vec<String> = vec![UNK.into(), BOS.into(), EOS.into()];
        let mut index: HashMap<String, u32> = HashMap::from([
            (UNK.to_owned(), UNK_ID),
            (BOS.to_owned(), BOS_ID),
            (EOS.to_owned(), EOS_ID),
        ]);
        for (words, _, _) in &raw[0] {
            if !index.contains_key(&words[0]) {
                index.insert(words[0].clone(), vocab.len() as u32);
                vocab.push(words[0].clone());
            }
        }
        let mut tables = Vec::with_capacity(raw.len());
        for rows in raw {
            let mut table = Table::with_capacity(rows.len());
            for (words, prob, backoff) in rows {
                let ids = words
                    .iter()
                    .map(|w| {
                        index
                            .get(w)
                            .copied()
                            .ok_or_else(|| Error::parse(0, format!("word `{w}` missing from unigrams")))
                    })
                    .collect::<Result<Box<[u32]>>>()?;
                table.insert(
                    ids,
                    Entry {
                        logprob: from_log10(prob),
                        backoff: from_log10(backoff),
                    },
                );
            }
            tables.push(table);
        }
        if !tables[0].contains_key(&[UNK_ID][..]) {
            return Err(Error::parse(0, "model lacks an <unk> unigram"));
        }
        Ok(NGramModel {
            order: tables.len(),
            discount: None,
            vocab,
            index,
            tables,
        })
    }
}
