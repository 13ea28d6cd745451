//! Multiple sequence alignment parsing and per-row gap coordinate maps.

use crate::stringds::RankSelectBits;
use thiserror::Error;

pub const GAP: u8 = b'-';

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MsaError {
    #[error("input contains no sequence records")]
    Empty,
    #[error("record {name:?} has no sequence data")]
    EmptyRecord { name: String },
    #[error("record {name:?} has length {got}, expected {expected}")]
    Ragged { name: String, expected: usize, got: usize },
    #[error("record {name:?} contains unsupported symbol {symbol:?}")]
    BadSymbol { name: String, symbol: char },
    #[error("sequence data before the first header line")]
    MissingHeader,
}

/// A gap-aware multiple sequence alignment. Rows are ASCII bytes with `-`
/// denoting a gap; all rows have equal length. Symbols get dense codes
/// `1..=sigma` in sorted symbol order (0 stays reserved as a separator).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Msa {
    rows: Vec<Vec<u8>>,
    names: Vec<String>,
    n_cols: usize,
    alphabet: Vec<u8>,
    code: [u8; 256],
    coord: Vec<RankSelectBits>,
}

impl Msa {
    pub fn from_rows(rows: Vec<Vec<u8>>, names: Option<Vec<String>>) -> Result<Self, MsaError> {
        if rows.is_empty() {
            return Err(MsaError::Empty);
        }
        let names = names.unwrap_or_else(|| (0..rows.len()).map(|i| format!("row{i}")).collect());
        assert_eq!(names.len(), rows.len());
        let n_cols = rows[0].len();
        for (r, name) in rows.iter().zip(names.iter()) {
            if r.is_empty() {
                return Err(MsaError::EmptyRecord { name: name.clone() });
            }
            if r.len() != n_cols {
                return Err(MsaError::Ragged { name: name.clone(), expected: n_cols, got: r.len() });
            }
        }
        let mut seen = [false; 256];
        for r in &rows {
            for &b in r {
                seen[b as usize] = true;
            }
        }
        seen[GAP as usize] = false;
        let alphabet: Vec<u8> = (0u16..256).map(|b| b as u8).filter(|&b| seen[b as usize]).collect();
        let mut code = [0u8; 256];
        for (i, &b) in alphabet.iter().enumerate() {
            code[b as usize] = (i + 1) as u8;
        }
        let coord = rows
            .iter()
            .map(|r| {
                let flags: Vec<bool> = r.iter().map(|&b| b != GAP).collect();
                RankSelectBits::from_bools(&flags)
            })
            .collect();
        Ok(Msa { rows, names, n_cols, alphabet, code, coord })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn alphabet(&self) -> &[u8] {
        &self.alphabet
    }

    pub fn sigma(&self) -> usize {
        self.alphabet.len()
    }

    /// Dense code of a symbol, 0 if the symbol is not in the alphabet.
    pub fn encode(&self, symbol: u8) -> u8 {
        self.code[symbol as usize]
    }

    pub fn is_gapless(&self) -> bool {
        self.rows.iter().all(|r| !r.contains(&GAP))
    }

    /// Row content with gaps removed.
    pub fn spell(&self, row: usize) -> Vec<u8> {
        self.rows[row].iter().copied().filter(|&b| b != GAP).collect()
    }

    /// Spell of one row restricted to columns `start..end`.
    pub fn spell_range(&self, row: usize, start: usize, end: usize) -> Vec<u8> {
        self.rows[row][start..end].iter().copied().filter(|&b| b != GAP).collect()
    }

    /// Spell of one row as dense codes.
    pub fn spelled_codes(&self, row: usize) -> Vec<u8> {
        self.spell(row).iter().map(|&b| self.encode(b)).collect()
    }

    pub fn spelled_len(&self, row: usize) -> usize {
        self.coord[row].count_ones()
    }

    /// Number of non-gap symbols of `row` strictly before column `col`; this
    /// is where the spell of a segment starting at `col` begins inside the
    /// full row spell. Accepts `col == n_cols`.
    pub fn col_to_spelled(&self, row: usize, col: usize) -> usize {
        self.coord[row].rank1(col)
    }

    /// Column of the `k`-th non-gap symbol of `row` at or after `from_col`
    /// (`k >= 1`), or `None` if the row runs out of symbols.
    pub fn col_of_kth_symbol(&self, row: usize, from_col: usize, k: usize) -> Option<usize> {
        debug_assert!(k >= 1);
        self.coord[row].select1(self.coord[row].rank1(from_col) + k - 1)
    }

    pub fn to_fasta(&self) -> String {
        let mut out = String::new();
        for (name, row) in self.names.iter().zip(self.rows.iter()) {
            out.push('>');
            out.push_str(name);
            out.push('\n');
            for chunk in row.chunks(80) {
                out.push_str(std::str::from_utf8(chunk).expect("rows are ASCII"));
                out.push('\n');
            }
        }
        out
    }
}

/// Parses FASTA text into an alignment. Lowercase is folded to uppercase and
/// CRLF line endings are accepted. With `allow_any_symbols == false` only
/// `ACGTN-` may appear; otherwise any ASCII graphic symbol except `>` is kept.
pub fn parse_fasta(input: &str, allow_any_symbols: bool) -> Result<Msa, MsaError> {
    let mut names: Vec<String> = Vec::new();
    let mut rows: Vec<Vec<u8>> = Vec::new();
    for raw in input.lines() {
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('>') {
            names.push(rest.trim().to_string());
            rows.push(Vec::new());
            continue;
        }
        let row = rows.last_mut().ok_or(MsaError::MissingHeader)?;
        let name = names.last().unwrap();
        for ch in line.chars() {
            let up = ch.to_ascii_uppercase();
            let ok = if allow_any_symbols {
                up.is_ascii_graphic() && up != '>'
            } else {
                matches!(up, 'A' | 'C' | 'G' | 'T' | 'N' | '-')
            };
            if !ok {
                return Err(MsaError::BadSymbol { name: name.clone(), symbol: ch });
            }
            row.push(up as u8);
        }
    }
    Msa::from_rows(rows, Some(names))
}
