use std::collections::HashSet;
use std::fmt::Write;

use super::{
    content_lines, is_numeric_row, parse_f64, parse_interaction, parse_usize, write_interactions, Angle, Bond,
    Dihedral, Improper, Interaction, ParseError,
};

#[derive(Debug, Clone, PartialEq)]
pub struct TemplateAtom {
    pub type_id: usize,
    pub charge: f64,
    pub position: [f64; 3],
}

/// `Special Bond Counts` and `Special Bonds` sections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialNeighbors {
    /// Per atom: 1-2, 1-3 and 1-4 neighbor counts.
    pub counts: Vec<[usize; 3]>,
    /// Per atom: the special neighbor indices, 1-2 first.
    pub neighbors: Vec<Vec<usize>>,
}

/// A LAMMPS molecule file. Atom `i` of `atoms` has template index `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MoleculeTemplateFile {
    pub title: String,
    pub atoms: Vec<TemplateAtom>,
    pub bonds: Vec<Bond>,
    pub angles: Vec<Angle>,
    pub dihedrals: Vec<Dihedral>,
    pub impropers: Vec<Improper>,
    pub special: Option<SpecialNeighbors>,
}

/// Serializes a template. Sections without entries are left out, reals are
/// printed with six decimals.
pub fn write_molecule_template(t: &MoleculeTemplateFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", t.title);
    out.push('\n');
    let _ = writeln!(out, "{} atoms", t.atoms.len());
    for (n, what) in [
        (t.bonds.len(), "bonds"),
        (t.angles.len(), "angles"),
        (t.dihedrals.len(), "dihedrals"),
        (t.impropers.len(), "impropers"),
    ] {
        if n > 0 {
            let _ = writeln!(out, "{n} {what}");
        }
    }

    out.push_str("\nCoords\n\n");
    for (i, a) in t.atoms.iter().enumerate() {
        let [x, y, z] = a.position;
        let _ = writeln!(out, "{} {x:.6} {y:.6} {z:.6}", i + 1);
    }
    out.push_str("\nTypes\n\n");
    for (i, a) in t.atoms.iter().enumerate() {
        let _ = writeln!(out, "{} {}", i + 1, a.type_id);
    }
    out.push_str("\nCharges\n\n");
    for (i, a) in t.atoms.iter().enumerate() {
        let _ = writeln!(out, "{} {:.6}", i + 1, a.charge);
    }
    write_interactions(&mut out, "Bonds", &t.bonds);
    write_interactions(&mut out, "Angles", &t.angles);
    write_interactions(&mut out, "Dihedrals", &t.dihedrals);
    write_interactions(&mut out, "Impropers", &t.impropers);

    if let Some(special) = &t.special {
        out.push_str("\nSpecial Bond Counts\n\n");
        for (i, c) in special.counts.iter().enumerate() {
            let _ = writeln!(out, "{} {} {} {}", i + 1, c[0], c[1], c[2]);
        }
        out.push_str("\nSpecial Bonds\n\n");
        for (i, list) in special.neighbors.iter().enumerate() {
            let _ = write!(out, "{}", i + 1);
            for n in list {
                let _ = write!(out, " {n}");
            }
            out.push('\n');
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Coords,
    Types,
    Charges,
    Bonds,
    Angles,
    Dihedrals,
    Impropers,
    SpecialCounts,
    SpecialBonds,
    Ignored,
}

#[derive(Default)]
struct Counts {
    atoms: Option<usize>,
    bonds: usize,
    angles: usize,
    dihedrals: usize,
    impropers: usize,
}

/// Per-atom column collected from a `Coords`/`Types`/... section.
struct Column<T> {
    name: &'static str,
    values: Vec<Option<T>>,
    present: bool,
}

impl<T: Clone> Column<T> {
    fn new(name: &'static str) -> Self {
        Column {
            name,
            values: Vec::new(),
            present: false,
        }
    }

    fn set(&mut self, n: usize, index: usize, value: T, line: usize) -> Result<(), ParseError> {
        if self.values.is_empty() {
            self.values = vec![None; n];
        }
        let bad = ParseError::MalformedRow {
            line,
            section: self.name.to_string(),
        };
        if index == 0 || index > n || self.values[index - 1].is_some() {
            return Err(bad);
        }
        self.values[index - 1] = Some(value);
        Ok(())
    }

    fn finish(self, n: usize) -> Result<Vec<T>, ParseError> {
        let found = self.values.iter().filter(|v| v.is_some()).count();
        if found != n {
            return Err(ParseError::CountMismatch {
                what: self.name.to_string(),
                declared: n,
                found,
            });
        }
        Ok(self.values.into_iter().flatten().collect())
    }
}

/// Reads a LAMMPS molecule file. Sections may come in any order.
pub fn parse_molecule_template(text: &str) -> Result<MoleculeTemplateFile, ParseError> {
    let title = text.lines().next().unwrap_or("").to_string();
    let mut counts = Counts::default();
    let mut coords: Column<[f64; 3]> = Column::new("Coords");
    let mut types: Column<usize> = Column::new("Types");
    let mut charges: Column<f64> = Column::new("Charges");
    let mut special_counts: Column<[usize; 3]> = Column::new("Special Bond Counts");
    let mut special_bonds: Column<Vec<usize>> = Column::new("Special Bonds");
    let mut bonds = Vec::new();
    let mut angles = Vec::new();
    let mut dihedrals = Vec::new();
    let mut impropers = Vec::new();

    let mut seen = HashSet::new();
    let mut current: Option<(Section, &str)> = None;

    for line in content_lines(text) {
        if !is_numeric_row(line.content) {
            let name = line.content;
            let section = match name {
                "Coords" => Section::Coords,
                "Types" => Section::Types,
                "Charges" => Section::Charges,
                "Bonds" => Section::Bonds,
                "Angles" => Section::Angles,
                "Dihedrals" => Section::Dihedrals,
                "Impropers" => Section::Impropers,
                "Special Bond Counts" => Section::SpecialCounts,
                "Special Bonds" => Section::SpecialBonds,
                "Diameters" | "Masses" | "Molecules" | "Shake Flags" | "Shake Atoms" | "Shake Bond Types" => {
                    Section::Ignored
                }
                _ if current.is_none() => {
                    return Err(ParseError::MalformedHeader {
                        line: line.number,
                        text: name.to_string(),
                    })
                }
                _ => {
                    return Err(ParseError::UnknownSection {
                        line: line.number,
                        name: name.to_string(),
                    })
                }
            };
            if !seen.insert(name) {
                return Err(ParseError::DuplicateSection {
                    line: line.number,
                    name: name.to_string(),
                });
            }
            if counts.atoms.is_none() {
                return Err(ParseError::MalformedHeader {
                    line: line.number,
                    text: "missing `N atoms` header line".to_string(),
                });
            }
            current = Some((section, name));
            continue;
        }

        let tokens: Vec<&str> = line.content.split_whitespace().collect();
        let Some((section, name)) = current else {
            parse_header_line(&tokens, line.number, line.content, &mut counts)?;
            continue;
        };
        let n = counts.atoms.unwrap_or(0);
        let bad = || ParseError::MalformedRow {
            line: line.number,
            section: name.to_string(),
        };
        let index = || parse_usize(tokens[0]).ok_or_else(bad);
        match section {
            Section::Coords => {
                if tokens.len() != 4 {
                    return Err(bad());
                }
                let mut xyz = [0.0; 3];
                for (slot, tok) in xyz.iter_mut().zip(&tokens[1..]) {
                    *slot = parse_f64(tok).ok_or_else(bad)?;
                }
                coords.present = true;
                coords.set(n, index()?, xyz, line.number)?;
            }
            Section::Types => {
                if tokens.len() != 2 {
                    return Err(bad());
                }
                let t = parse_usize(tokens[1]).ok_or_else(bad)?;
                types.present = true;
                types.set(n, index()?, t, line.number)?;
            }
            Section::Charges => {
                if tokens.len() != 2 {
                    return Err(bad());
                }
                let q = parse_f64(tokens[1]).ok_or_else(bad)?;
                charges.present = true;
                charges.set(n, index()?, q, line.number)?;
            }
            Section::SpecialCounts => {
                if tokens.len() != 4 {
                    return Err(bad());
                }
                let mut c = [0usize; 3];
                for (slot, tok) in c.iter_mut().zip(&tokens[1..]) {
                    *slot = parse_usize(tok).ok_or_else(bad)?;
                }
                special_counts.present = true;
                special_counts.set(n, index()?, c, line.number)?;
            }
            Section::SpecialBonds => {
                let list = tokens[1..]
                    .iter()
                    .map(|t| parse_usize(t).ok_or_else(bad))
                    .collect::<Result<Vec<_>, _>>()?;
                special_bonds.present = true;
                special_bonds.set(n, index()?, list, line.number)?;
            }
            Section::Bonds => bonds.push(parse_interaction(&tokens, line.number, name)?),
            Section::Angles => angles.push(parse_interaction(&tokens, line.number, name)?),
            Section::Dihedrals => dihedrals.push(parse_interaction(&tokens, line.number, name)?),
            Section::Impropers => impropers.push(parse_interaction(&tokens, line.number, name)?),
            Section::Ignored => {}
        }
    }

    let n = counts.atoms.ok_or_else(|| ParseError::MalformedHeader {
        line: 1,
        text: "missing `N atoms` header line".to_string(),
    })?;
    for (present, name) in [(coords.present, "Coords"), (types.present, "Types")] {
        if !present && n > 0 {
            return Err(ParseError::MissingSection(name.to_string()));
        }
    }
    let positions = coords.finish(n)?;
    let type_ids = types.finish(n)?;
    let charge_values = if charges.present {
        charges.finish(n)?
    } else {
        vec![0.0; n]
    };
    for (what, declared, found) in [
        ("bonds", counts.bonds, bonds.len()),
        ("angles", counts.angles, angles.len()),
        ("dihedrals", counts.dihedrals, dihedrals.len()),
        ("impropers", counts.impropers, impropers.len()),
    ] {
        if declared != found {
            return Err(ParseError::CountMismatch {
                what: what.to_string(),
                declared,
                found,
            });
        }
    }
    check_local("Bonds", &bonds, n)?;
    check_local("Angles", &angles, n)?;
    check_local("Dihedrals", &dihedrals, n)?;
    check_local("Impropers", &impropers, n)?;

    let special = match (special_counts.present, special_bonds.present) {
        (false, false) => None,
        (true, true) => Some(SpecialNeighbors {
            counts: special_counts.finish(n)?,
            neighbors: special_bonds.finish(n)?,
        }),
        (false, true) => return Err(ParseError::MissingSection("Special Bond Counts".into())),
        (true, false) => return Err(ParseError::MissingSection("Special Bonds".into())),
    };

    let atoms = positions
        .into_iter()
        .zip(type_ids)
        .zip(charge_values)
        .map(|((position, type_id), charge)| TemplateAtom {
            type_id,
            charge,
            position,
        })
        .collect();
    Ok(MoleculeTemplateFile {
        title,
        atoms,
        bonds,
        angles,
        dihedrals,
        impropers,
        special,
    })
}

fn parse_header_line(tokens: &[&str], line: usize, text: &str, counts: &mut Counts) -> Result<(), ParseError> {
    let bad = || ParseError::MalformedHeader {
        line,
        text: text.to_string(),
    };
    let keyword = tokens[1..].join(" ");
    let count = || parse_usize(tokens[0]).ok_or_else(bad);
    match keyword.as_str() {
        "atoms" => counts.atoms = Some(count()?),
        "bonds" => counts.bonds = count()?,
        "angles" => counts.angles = count()?,
        "dihedrals" => counts.dihedrals = count()?,
        "impropers" => counts.impropers = count()?,
        "fragments" => {
            count()?;
        }
        // properties LAMMPS would otherwise compute itself
        "mass" => {
            parse_f64(tokens[0]).ok_or_else(bad)?;
        }
        "xc yc zc com" => {}
        "Ixx Iyy Izz Ixy Ixz Iyz inertia" => {}
        _ => return Err(bad()),
    }
    Ok(())
}

fn check_local<const N: usize>(section: &str, rows: &[Interaction<N>], n: usize) -> Result<(), ParseError> {
    for row in rows {
        if let Some(&atom) = row.atoms.iter().find(|&&a| a == 0 || a > n) {
            return Err(ParseError::DanglingReference {
                section: section.to_string(),
                atom,
            });
        }
    }
    Ok(())
}
