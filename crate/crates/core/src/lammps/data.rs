use std::collections::{BTreeMap, HashSet};

use super::{
    content_lines, is_numeric_row, parse_f64, parse_interaction, parse_usize, Angle, Bond, Dihedral, Improper,
    Interaction, ParseError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomStyle {
    /// `id mol type q x y z`
    Full,
    /// `id mol type x y z`, charges default to zero.
    Molecular,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomRecord {
    pub id: usize,
    pub molecule: i64,
    pub type_id: usize,
    pub charge: f64,
    pub position: [f64; 3],
}

/// Declared type counts from the data-file header.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TypeCounts {
    pub atom: usize,
    pub bond: usize,
    pub angle: usize,
    pub dihedral: usize,
    pub improper: usize,
}

/// Parsed contents of one LAMMPS data file.
///
/// Atoms are stored sorted by id. Interactions keep their file order and
/// refer to atoms by id.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemTopology {
    pub title: String,
    pub atoms: Vec<AtomRecord>,
    pub masses: BTreeMap<usize, f64>,
    /// Comment text after a `Masses` row, usually the force-field type name.
    pub type_labels: BTreeMap<usize, String>,
    pub bonds: Vec<Bond>,
    pub angles: Vec<Angle>,
    pub dihedrals: Vec<Dihedral>,
    pub impropers: Vec<Improper>,
    pub bounds: [[f64; 2]; 3],
    pub type_counts: TypeCounts,
}

impl SystemTopology {
    pub fn atom(&self, id: usize) -> Option<&AtomRecord> {
        self.atoms
            .binary_search_by_key(&id, |a| a.id)
            .ok()
            .map(|i| &self.atoms[i])
    }

    pub fn mass_of(&self, atom: &AtomRecord) -> f64 {
        self.masses[&atom.type_id]
    }
}

#[derive(Default)]
struct HeaderCounts {
    atoms: usize,
    bonds: usize,
    angles: usize,
    dihedrals: usize,
    impropers: usize,
}

const SKIPPED_SECTIONS: &[&str] = &[
    "Velocities",
    "Pair Coeffs",
    "PairIJ Coeffs",
    "Bond Coeffs",
    "Angle Coeffs",
    "Dihedral Coeffs",
    "Improper Coeffs",
    "BondBond Coeffs",
    "BondAngle Coeffs",
    "MiddleBondTorsion Coeffs",
    "EndBondTorsion Coeffs",
    "AngleTorsion Coeffs",
    "AngleAngleTorsion Coeffs",
    "BondBond13 Coeffs",
    "AngleAngle Coeffs",
    "Atom Type Labels",
    "Bond Type Labels",
    "Angle Type Labels",
    "Dihedral Type Labels",
    "Improper Type Labels",
];

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Masses,
    Atoms,
    Bonds,
    Angles,
    Dihedrals,
    Impropers,
    Skipped,
}

impl Section {
    fn from_name(name: &str) -> Option<Section> {
        Some(match name {
            "Masses" => Section::Masses,
            "Atoms" => Section::Atoms,
            "Bonds" => Section::Bonds,
            "Angles" => Section::Angles,
            "Dihedrals" => Section::Dihedrals,
            "Impropers" => Section::Impropers,
            n if SKIPPED_SECTIONS.contains(&n) => Section::Skipped,
            _ => return None,
        })
    }
}

/// Parses a LAMMPS data file with `full` (or `molecular`) atom style.
pub fn parse_data_file(text: &str) -> Result<SystemTopology, ParseError> {
    let title = text.lines().next().unwrap_or("").trim().to_string();
    let mut counts = HeaderCounts::default();
    let mut type_counts = TypeCounts::default();
    let mut bounds = [[0.0; 2]; 3];

    let mut masses = BTreeMap::new();
    let mut type_labels = BTreeMap::new();
    let mut atoms = Vec::new();
    let mut bonds = Vec::new();
    let mut angles = Vec::new();
    let mut dihedrals = Vec::new();
    let mut impropers = Vec::new();

    let mut seen: HashSet<String> = HashSet::new();
    let mut current: Option<(Section, String)> = None;
    let mut style_hint: Option<(usize, String)> = None;

    for line in content_lines(text) {
        if !is_numeric_row(line.content) {
            let name = line.content.to_string();
            let section = match Section::from_name(&name) {
                Some(s) => s,
                // still inside the header: an unreadable count line
                None if current.is_none() => {
                    return Err(ParseError::MalformedHeader {
                        line: line.number,
                        text: name,
                    })
                }
                None => {
                    return Err(ParseError::UnknownSection {
                        line: line.number,
                        name,
                    })
                }
            };
            if !seen.insert(name.clone()) {
                return Err(ParseError::DuplicateSection {
                    line: line.number,
                    name,
                });
            }
            if section == Section::Atoms {
                style_hint = line
                    .comment
                    .filter(|c| !c.is_empty())
                    .map(|c| (line.number, c.split_whitespace().next().unwrap_or("").to_string()));
            }
            current = Some((section, name));
            continue;
        }

        let tokens: Vec<&str> = line.content.split_whitespace().collect();
        let Some((section, name)) = &current else {
            parse_header_line(
                &tokens,
                line.number,
                line.content,
                &mut counts,
                &mut type_counts,
                &mut bounds,
            )?;
            continue;
        };
        let bad = || ParseError::MalformedRow {
            line: line.number,
            section: name.clone(),
        };
        match section {
            Section::Masses => {
                if tokens.len() != 2 {
                    return Err(bad());
                }
                let type_id = parse_usize(tokens[0]).ok_or_else(bad)?;
                let mass = parse_f64(tokens[1]).ok_or_else(bad)?;
                masses.insert(type_id, mass);
                if let Some(label) = line.comment.filter(|c| !c.is_empty()) {
                    type_labels.insert(type_id, label.to_string());
                }
            }
            Section::Atoms => {
                let style = match &style_hint {
                    Some((_, s)) if s == "full" => AtomStyle::Full,
                    Some((_, s)) if s == "molecular" => AtomStyle::Molecular,
                    Some((l, s)) => {
                        return Err(ParseError::UnsupportedAtomStyle {
                            line: *l,
                            style: s.clone(),
                        })
                    }
                    None => match tokens.len() {
                        7 | 10 => AtomStyle::Full,
                        6 | 9 => AtomStyle::Molecular,
                        _ => return Err(bad()),
                    },
                };
                atoms.push(parse_atom(&tokens, style).ok_or_else(bad)?);
            }
            Section::Bonds => bonds.push(parse_interaction(&tokens, line.number, name)?),
            Section::Angles => angles.push(parse_interaction(&tokens, line.number, name)?),
            Section::Dihedrals => dihedrals.push(parse_interaction(&tokens, line.number, name)?),
            Section::Impropers => impropers.push(parse_interaction(&tokens, line.number, name)?),
            Section::Skipped => {}
        }
    }

    for required in ["Masses", "Atoms"] {
        if !seen.contains(required) {
            return Err(ParseError::MissingSection(required.to_string()));
        }
    }
    check_count("atoms", counts.atoms, atoms.len())?;
    check_count("bonds", counts.bonds, bonds.len())?;
    check_count("angles", counts.angles, angles.len())?;
    check_count("dihedrals", counts.dihedrals, dihedrals.len())?;
    check_count("impropers", counts.impropers, impropers.len())?;

    atoms.sort_by_key(|a: &AtomRecord| a.id);
    if let Some(w) = atoms.windows(2).find(|w| w[0].id == w[1].id) {
        return Err(ParseError::DuplicateAtom(w[0].id));
    }
    for atom in &atoms {
        if !masses.contains_key(&atom.type_id) {
            return Err(ParseError::MissingMass {
                atom: atom.id,
                type_id: atom.type_id,
            });
        }
    }
    let ids: HashSet<usize> = atoms.iter().map(|a| a.id).collect();
    check_refs("Bonds", &bonds, &ids)?;
    check_refs("Angles", &angles, &ids)?;
    check_refs("Dihedrals", &dihedrals, &ids)?;
    check_refs("Impropers", &impropers, &ids)?;

    Ok(SystemTopology {
        title,
        atoms,
        masses,
        type_labels,
        bonds,
        angles,
        dihedrals,
        impropers,
        bounds,
        type_counts,
    })
}

fn parse_header_line(
    tokens: &[&str],
    line: usize,
    text: &str,
    counts: &mut HeaderCounts,
    types: &mut TypeCounts,
    bounds: &mut [[f64; 2]; 3],
) -> Result<(), ParseError> {
    let bad = || ParseError::MalformedHeader {
        line,
        text: text.to_string(),
    };
    let keyword = tokens[1..].join(" ");
    let count = || parse_usize(tokens[0]).ok_or_else(bad);
    match keyword.as_str() {
        "atoms" => counts.atoms = count()?,
        "bonds" => counts.bonds = count()?,
        "angles" => counts.angles = count()?,
        "dihedrals" => counts.dihedrals = count()?,
        "impropers" => counts.impropers = count()?,
        "atom types" => types.atom = count()?,
        "bond types" => types.bond = count()?,
        "angle types" => types.angle = count()?,
        "dihedral types" => types.dihedral = count()?,
        "improper types" => types.improper = count()?,
        "extra bond per atom"
        | "extra angle per atom"
        | "extra dihedral per atom"
        | "extra improper per atom"
        | "extra special per atom"
        | "ellipsoids"
        | "lines"
        | "triangles"
        | "bodies" => {
            count()?;
        }
        _ => {
            let axis = match tokens {
                [_, _, "xlo", "xhi"] => 0,
                [_, _, "ylo", "yhi"] => 1,
                [_, _, "zlo", "zhi"] => 2,
                [_, _, _, "xy", "xz", "yz"] => {
                    for t in &tokens[..3] {
                        parse_f64(t).ok_or_else(bad)?;
                    }
                    return Ok(());
                }
                _ => return Err(bad()),
            };
            let lo = parse_f64(tokens[0]).ok_or_else(bad)?;
            let hi = parse_f64(tokens[1]).ok_or_else(bad)?;
            bounds[axis] = [lo, hi];
        }
    }
    Ok(())
}

fn parse_atom(tokens: &[&str], style: AtomStyle) -> Option<AtomRecord> {
    let (charge, xyz) = match style {
        AtomStyle::Full if tokens.len() == 7 || tokens.len() == 10 => (parse_f64(tokens[3])?, &tokens[4..7]),
        AtomStyle::Molecular if tokens.len() == 6 || tokens.len() == 9 => (0.0, &tokens[3..6]),
        _ => return None,
    };
    let id = parse_usize(tokens[0]).filter(|&id| id > 0)?;
    let molecule = tokens[1].parse().ok()?;
    let type_id = parse_usize(tokens[2])?;
    let position = [parse_f64(xyz[0])?, parse_f64(xyz[1])?, parse_f64(xyz[2])?];
    // image flags, when present, must still be integers
    if tokens.len() >= 9 {
        let images = &tokens[tokens.len() - 3..];
        if images.iter().any(|t| t.parse::<i64>().is_err()) {
            return None;
        }
    }
    Some(AtomRecord {
        id,
        molecule,
        type_id,
        charge,
        position,
    })
}

fn check_count(what: &str, declared: usize, found: usize) -> Result<(), ParseError> {
    if declared != found {
        return Err(ParseError::CountMismatch {
            what: what.to_string(),
            declared,
            found,
        });
    }
    Ok(())
}

fn check_refs<const N: usize>(section: &str, rows: &[Interaction<N>], ids: &HashSet<usize>) -> Result<(), ParseError> {
    for row in rows {
        if let Some(&atom) = row.atoms.iter().find(|a| !ids.contains(a)) {
            return Err(ParseError::DanglingReference {
                section: section.to_string(),
                atom,
            });
        }
    }
    Ok(())
}
