use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use super::tokenize::LexemeList;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrequencyRow {
    pub lexeme: String,
    pub rows: u64,
    pub total: u64,
}

/// Per-lexeme row and occurrence counts. Partial tables built over shards
/// can be combined with [`FrequencyTable::merge`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: BTreeMap<String, (u64, u64)>,
}

impl FrequencyTable {
    pub fn add(&mut self, lex: &LexemeList) {
        for l in &lex.lexemes {
            self.counts.entry(l.clone()).or_default().0 += 1;
        }
        for s in lex.stems() {
            self.counts.entry(s).or_default().1 += 1;
        }
    }

    pub fn merge(mut self, other: FrequencyTable) -> FrequencyTable {
        for (k, (rows, total)) in other.counts {
            let e = self.counts.entry(k).or_default();
            e.0 += rows;
            e.1 += total;
        }
        self
    }

    /// Rows sorted by `rows` descending, ties by lexeme.
    pub fn rows(&self) -> Vec<FrequencyRow> {
        let mut out: Vec<FrequencyRow> = self
            .counts
            .iter()
            .map(|(lexeme, &(rows, total))| FrequencyRow {
                lexeme: lexeme.clone(),
                rows,
                total,
            })
            .collect();
        out.sort_by(|a, b| b.rows.cmp(&a.rows).then_with(|| a.lexeme.cmp(&b.lexeme)));
        out
    }
}

pub fn token_frequency<'a, I>(corpus: I) -> Vec<FrequencyRow>
where
    I: IntoIterator<Item = &'a LexemeList>,
{
    let mut table = FrequencyTable::default();
    for lex in corpus {
        table.add(lex);
    }
    table.rows()
}

pub fn write_frequency_csv<W: Write>(rows: &[FrequencyRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
