//! Readers and writers for the LAMMPS text formats used by `fix bond/react`:
//! data files (input), molecule templates and reaction map files (output).

mod data;
mod map;
mod molecule;

pub use data::{parse_data_file, AtomRecord, AtomStyle, SystemTopology, TypeCounts};
pub use map::{write_map_file, MapFileError, ReactionMapFile};
pub use molecule::{
    parse_molecule_template, write_molecule_template, MoleculeTemplateFile, SpecialNeighbors, TemplateAtom,
};

use thiserror::Error;

/// A bonded interaction: a type id plus an ordered tuple of atom ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interaction<const N: usize> {
    pub type_id: usize,
    pub atoms: [usize; N],
}

pub type Bond = Interaction<2>;
pub type Angle = Interaction<3>;
pub type Dihedral = Interaction<4>;
pub type Improper = Interaction<4>;

/// Errors raised while reading data files and molecule templates.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: malformed header line `{text}`")]
    MalformedHeader { line: usize, text: String },
    #[error("line {line}: unknown section `{name}`")]
    UnknownSection { line: usize, name: String },
    #[error("line {line}: section `{name}` appears twice")]
    DuplicateSection { line: usize, name: String },
    #[error("line {line}: malformed row in section `{section}`")]
    MalformedRow { line: usize, section: String },
    #[error("line {line}: unsupported atom style `{style}`")]
    UnsupportedAtomStyle { line: usize, style: String },
    #[error("{what}: header declares {declared}, section holds {found}")]
    CountMismatch {
        what: String,
        declared: usize,
        found: usize,
    },
    #[error("missing required section `{0}`")]
    MissingSection(String),
    #[error("duplicate atom id {0}")]
    DuplicateAtom(usize),
    #[error("{section} entry references missing atom id {atom}")]
    DanglingReference { section: String, atom: usize },
    #[error("atom {atom} has type {type_id} without a mass entry")]
    MissingMass { atom: usize, type_id: usize },
}

/// One meaningful line of input: 1-based line number, content with the
/// `#` comment removed, and the comment text itself.
pub(crate) struct Line<'a> {
    pub number: usize,
    pub content: &'a str,
    pub comment: Option<&'a str>,
}

/// Splits text into lines, skipping the title line and dropping lines that
/// are blank once comments are stripped.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().skip(1).filter_map(|(i, raw)| {
        let (content, comment) = match raw.find('#') {
            Some(pos) => (&raw[..pos], Some(raw[pos + 1..].trim())),
            None => (raw, None),
        };
        let content = content.trim();
        if content.is_empty() {
            None
        } else {
            Some(Line {
                number: i + 1,
                content,
                comment,
            })
        }
    })
}

/// Data rows start with a number; anything else is a section keyword.
pub(crate) fn is_numeric_row(content: &str) -> bool {
    content
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_digit() || matches!(c, '-' | '+' | '.'))
}

pub(crate) fn parse_usize(tok: &str) -> Option<usize> {
    tok.parse().ok()
}

pub(crate) fn parse_f64(tok: &str) -> Option<f64> {
    tok.parse::<f64>().ok().filter(|x| x.is_finite())
}

/// Parses `id type a1 .. aN` rows into interactions.
pub(crate) fn parse_interaction<const N: usize>(
    tokens: &[&str],
    line: usize,
    section: &str,
) -> Result<Interaction<N>, ParseError> {
    let bad = || ParseError::MalformedRow {
        line,
        section: section.to_string(),
    };
    if tokens.len() != N + 2 {
        return Err(bad());
    }
    parse_usize(tokens[0]).ok_or_else(bad)?;
    let type_id = parse_usize(tokens[1]).ok_or_else(bad)?;
    let mut atoms = [0usize; N];
    for (slot, tok) in atoms.iter_mut().zip(&tokens[2..]) {
        *slot = parse_usize(tok).ok_or_else(bad)?;
    }
    Ok(Interaction { type_id, atoms })
}

pub(crate) fn write_interactions<const N: usize>(out: &mut String, title: &str, rows: &[Interaction<N>]) {
    use std::fmt::Write;
    if rows.is_empty() {
        return;
    }
    let _ = write!(out, "\n{title}\n\n");
    for (i, row) in rows.iter().enumerate() {
        let _ = write!(out, "{} {}", i + 1, row.type_id);
        for a in row.atoms {
            let _ = write!(out, " {a}");
        }
        out.push('\n');
    }
}
