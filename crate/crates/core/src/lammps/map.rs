use std::collections::BTreeSet;
use std::fmt::Write;

use thiserror::Error;

/// Contents of a `fix bond/react` map file. Ids are template-local, 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReactionMapFile {
    pub title: String,
    /// Atom counts of the pre- and post-reaction templates the ids refer to.
    pub pre_atoms: usize,
    pub post_atoms: usize,
    /// Pre-template ids.
    pub initiators: [usize; 2],
    /// Pre-template ids.
    pub edge_ids: Vec<usize>,
    /// Pre-template ids.
    pub delete_ids: Vec<usize>,
    /// Post-template ids.
    pub create_ids: Vec<usize>,
    /// (pre id, post id)
    pub equivalences: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapFileError {
    #[error("{what} id {id} is outside the {side}-reaction template")]
    OutOfRange {
        what: &'static str,
        id: usize,
        side: &'static str,
    },
    #[error("equivalences are not one-to-one at {side}-template id {id}")]
    NotBijective { side: &'static str, id: usize },
    #[error("pre-template id {0} is neither equivalent nor deleted")]
    Unaccounted(usize),
    #[error("post-template id {0} is neither equivalent nor created")]
    UnaccountedPost(usize),
    #[error("initiator {0} has no equivalence")]
    InitiatorNotEquivalent(usize),
    #[error("created id {0} also appears in the equivalences")]
    CreatedIsEquivalent(usize),
    #[error("deleted id {0} also appears in the equivalences")]
    DeletedIsEquivalent(usize),
}

impl ReactionMapFile {
    /// Checks the cross-references between the map and its two templates.
    pub fn validate(&self) -> Result<(), MapFileError> {
        let in_pre = |what, id: usize| {
            if id == 0 || id > self.pre_atoms {
                Err(MapFileError::OutOfRange { what, id, side: "pre" })
            } else {
                Ok(())
            }
        };
        let in_post = |what, id: usize| {
            if id == 0 || id > self.post_atoms {
                Err(MapFileError::OutOfRange { what, id, side: "post" })
            } else {
                Ok(())
            }
        };
        let mut pre_seen = BTreeSet::new();
        let mut post_seen = BTreeSet::new();
        for &(pre, post) in &self.equivalences {
            in_pre("equivalence", pre)?;
            in_post("equivalence", post)?;
            if !pre_seen.insert(pre) {
                return Err(MapFileError::NotBijective { side: "pre", id: pre });
            }
            if !post_seen.insert(post) {
                return Err(MapFileError::NotBijective { side: "post", id: post });
            }
        }
        for &id in &self.initiators {
            in_pre("initiator", id)?;
            if !pre_seen.contains(&id) {
                return Err(MapFileError::InitiatorNotEquivalent(id));
            }
        }
        for &id in &self.edge_ids {
            in_pre("edge", id)?;
        }
        for &id in &self.delete_ids {
            in_pre("delete", id)?;
            if pre_seen.contains(&id) {
                return Err(MapFileError::DeletedIsEquivalent(id));
            }
        }
        for &id in &self.create_ids {
            in_post("create", id)?;
            if post_seen.contains(&id) {
                return Err(MapFileError::CreatedIsEquivalent(id));
            }
        }
        let deleted: BTreeSet<_> = self.delete_ids.iter().copied().collect();
        let created: BTreeSet<_> = self.create_ids.iter().copied().collect();
        if let Some(id) = (1..=self.pre_atoms).find(|id| !pre_seen.contains(id) && !deleted.contains(id)) {
            return Err(MapFileError::Unaccounted(id));
        }
        if let Some(id) = (1..=self.post_atoms).find(|id| !post_seen.contains(id) && !created.contains(id)) {
            return Err(MapFileError::UnaccountedPost(id));
        }
        Ok(())
    }
}

/// Serializes a map file after validating it. Equivalences are written in
/// ascending pre-template order, id lists in ascending order.
pub fn write_map_file(m: &ReactionMapFile) -> Result<String, MapFileError> {
    m.validate()?;
    let sorted = |ids: &[usize]| {
        let mut v = ids.to_vec();
        v.sort_unstable();
        v
    };
    let edges = sorted(&m.edge_ids);
    let deletes = sorted(&m.delete_ids);
    let creates = sorted(&m.create_ids);
    let mut equivalences = m.equivalences.clone();
    equivalences.sort_unstable();

    let mut out = String::new();
    let _ = writeln!(out, "{}", m.title);
    out.push('\n');
    let _ = writeln!(out, "{} equivalences", equivalences.len());
    for (ids, what) in [(&edges, "edgeIDs"), (&deletes, "deleteIDs"), (&creates, "createIDs")] {
        if !ids.is_empty() {
            let _ = writeln!(out, "{} {what}", ids.len());
        }
    }
    out.push_str("\nInitiatorIDs\n\n");
    for id in m.initiators {
        let _ = writeln!(out, "{id}");
    }
    for (ids, title) in [(&edges, "EdgeIDs"), (&deletes, "DeleteIDs"), (&creates, "CreateIDs")] {
        if ids.is_empty() {
            continue;
        }
        let _ = write!(out, "\n{title}\n\n");
        for id in ids.iter() {
            let _ = writeln!(out, "{id}");
        }
    }
    out.push_str("\nEquivalences\n\n");
    for (pre, post) in equivalences {
        let _ = writeln!(out, "{pre} {post}");
    }
    Ok(out)
}
