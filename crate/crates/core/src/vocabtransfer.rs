//! Child → parent vocabulary transfer.
//!
//! Child pieces that also occur in the parent keep the parent's position.
//! The rest are placed on parent positions that no child piece matched:
//! those free positions are listed in ascending order, shuffled with
//! [`Rng::shuffle`](crate::rng::Rng::shuffle) seeded by the caller, and
//! handed out in child order. A downstream trainer then initializes each
//! child embedding from the parent row at its assigned position.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::rng::Rng;
use crate::subword::{segment, SubwordVocab, UNK_ID};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssignmentKind {
    Matched,
    Replaced,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub piece: String,
    pub position: usize,
    pub kind: AssignmentKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferReport {
    pub parent_size: usize,
    pub assignments: Vec<Assignment>,
    pub matched_count: usize,
    pub replaced_count: usize,
    pub unused_remaining: usize,
    pub seed: Option<u64>,
    /// Material the child needs that the parent cannot represent (only
    /// filled by [`reuse_parent_vocab`]).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unmatched: Vec<String>,
}

pub fn transfer_vocab(parent: &SubwordVocab, child: &SubwordVocab, seed: u64) -> Result<TransferReport> {
    transfer_pieces(parent.pieces(), child.pieces(), seed)
}

pub fn transfer_pieces<P: AsRef<str>, C: AsRef<str>>(parent: &[P], child: &[C], seed: u64) -> Result<TransferReport> {
    if child.len() > parent.len() {
        return Err(Error::Capacity {
            child: child.len(),
            parent: parent.len(),
        });
    }
    let mut positions: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, p) in parent.iter().enumerate() {
        positions.entry(p.as_ref()).or_insert(i);
    }
    let mut seen = BTreeSet::new();
    for c in child {
        if !seen.insert(c.as_ref()) {
            return Err(Error::Config(alloc::format!(
                "child piece {:?} occurs twice",
                c.as_ref()
            )));
        }
    }

    let mut slots: Vec<Option<Assignment>> = Vec::with_capacity(child.len());
    let mut taken = BTreeSet::new();
    for c in child {
        let slot = positions.get(c.as_ref()).map(|&position| {
            taken.insert(position);
            Assignment {
                piece: String::from(c.as_ref()),
                position,
                kind: AssignmentKind::Matched,
            }
        });
        slots.push(slot);
    }
    let matched_count = taken.len();

    let mut free: Vec<usize> = (0..parent.len()).filter(|p| !taken.contains(p)).collect();
    Rng::new(seed).shuffle(&mut free);
    let mut free = free.into_iter();
    let mut replaced_count = 0;
    for (slot, c) in slots.iter_mut().zip(child) {
        if slot.is_none() {
            let position = free.next().expect("capacity checked above");
            *slot = Some(Assignment {
                piece: String::from(c.as_ref()),
                position,
                kind: AssignmentKind::Replaced,
            });
            replaced_count += 1;
        }
    }
    Ok(TransferReport {
        parent_size: parent.len(),
        assignments: slots.into_iter().flatten().collect(),
        matched_count,
        replaced_count,
        unused_remaining: free.len(),
        seed: Some(seed),
        unmatched: Vec::new(),
    })
}

/// Checks a child corpus against an unchanged parent vocabulary.
///
/// Every parent piece the corpus segments into is reported as matched at its
/// own position. Characters the parent cannot represent (they segment to
/// `<unk>`) are listed in `unmatched`, in order of first occurrence.
pub fn reuse_parent_vocab<S: AsRef<str>>(parent: &SubwordVocab, child_corpus: &[S]) -> TransferReport {
    let mut used: BTreeSet<u32> = BTreeSet::new();
    let mut order: Vec<u32> = Vec::new();
    let mut unmatched: Vec<String> = Vec::new();
    for line in child_corpus {
        let line = line.as_ref();
        let ids = segment(line, parent);
        for &id in &ids {
            if id != UNK_ID && used.insert(id) {
                order.push(id);
            }
        }
        if ids.contains(&UNK_ID) {
            for c in line.chars().filter(|c| !c.is_whitespace()) {
                let covered = parent.covered_chars().binary_search(&c).is_ok();
                let s = String::from(c);
                if !covered && !unmatched.contains(&s) {
                    unmatched.push(s);
                }
            }
        }
    }
    let assignments: Vec<Assignment> = order
        .into_iter()
        .map(|id| Assignment {
            piece: String::from(parent.piece(id).unwrap_or_default()),
            position: id as usize,
            kind: AssignmentKind::Matched,
        })
        .collect();
    TransferReport {
        parent_size: parent.len(),
        matched_count: assignments.len(),
        replaced_count: 0,
        unused_remaining: parent.len() - assignments.len(),
        assignments,
        seed: None,
        unmatched,
    }
}

/// A dense row-major matrix of embedding vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Embeddings {
    rows: usize,
    dim: usize,
    values: Vec<f32>,
}

impl Embeddings {
    pub fn new(rows: usize, dim: usize, values: Vec<f32>) -> Result<Self> {
        if rows.checked_mul(dim) != Some(values.len()) {
            return Err(Error::Dimension(alloc::format!(
                "{rows} x {dim} matrix needs {} values, got {}",
                rows.saturating_mul(dim),
                values.len()
            )));
        }
        Ok(Self { rows, dim, values })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }
}

/// Child piece → parent row index, in assignment order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChildRowMap {
    pub entries: Vec<(String, usize)>,
}

impl ChildRowMap {
    /// The child embedding table: one inherited parent row per child piece.
    pub fn gather(&self, parent: &Embeddings) -> Embeddings {
        let mut values = Vec::with_capacity(self.entries.len() * parent.dim());
        for (_, row) in &self.entries {
            values.extend_from_slice(parent.row(*row));
        }
        Embeddings {
            rows: self.entries.len(),
            dim: parent.dim(),
            values,
        }
    }
}

/// Leaves the parent rows untouched and returns, for every child piece, the
/// parent row it inherits.
pub fn remap_embeddings(parent_rows: &Embeddings, report: &TransferReport) -> Result<(Embeddings, ChildRowMap)> {
    if parent_rows.rows() != report.parent_size {
        return Err(Error::Dimension(alloc::format!(
            "embedding table has {} rows but the parent vocabulary has {}",
            parent_rows.rows(),
            report.parent_size
        )));
    }
    if let Some(a) = report.assignments.iter().find(|a| a.position >= parent_rows.rows()) {
        return Err(Error::Dimension(alloc::format!(
            "piece {:?} assigned to row {} of {}",
            a.piece,
            a.position,
            parent_rows.rows()
        )));
    }
    let map = ChildRowMap {
        entries: report
            .assignments
            .iter()
            .map(|a| (a.piece.clone(), a.position))
            .collect(),
    };
    Ok((parent_rows.clone(), map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subword::train_bpe;
    use alloc::string::ToString;
    use alloc::vec;

    fn parent10() -> Vec<String> {
        (0..10).map(|i| alloc::format!("p{i}")).collect()
    }

    #[test]
    fn full_overlap_is_all_matched() {
        let parent = parent10();
        let child = vec!["p3", "p0", "p9"];
        let r = transfer_pieces(&parent, &child, 1).unwrap();
        assert_eq!(r.replaced_count, 0);
        assert_eq!(r.matched_count, 3);
        assert_eq!(r.unused_remaining, 7);
        assert_eq!(r.assignments[0].position, 3);
    }

    #[test]
    fn ten_piece_example_seed_7() {
        let parent = parent10();
        let child = vec!["p1", "x", "y"];
        let r = transfer_pieces(&parent, &child, 7).unwrap();
        assert_eq!(
            r.assignments[0],
            Assignment {
                piece: "p1".to_string(),
                position: 1,
                kind: AssignmentKind::Matched
            }
        );
        let (x, y) = (r.assignments[1].position, r.assignments[2].position);
        assert_ne!(x, y);
        assert!(x != 1 && y != 1);
        assert_eq!(r.replaced_count, 2);
        assert_eq!(r.unused_remaining, 7);
        assert_eq!(transfer_pieces(&parent, &child, 7).unwrap(), r);

        // the documented procedure, replayed by hand
        let mut free = vec![0, 2, 3, 4, 5, 6, 7, 8, 9];
        let mut rng = Rng::new(7);
        for i in (1..free.len()).rev() {
            let j = rng.below(i + 1);
            free.swap(i, j);
        }
        assert_eq!((x, y), (free[0], free[1]));
    }

    #[test]
    fn capacity_error() {
        let err = transfer_pieces(&["a"], &["a", "b"], 0).unwrap_err();
        assert_eq!(err, Error::Capacity { child: 2, parent: 1 });
    }

    #[test]
    fn duplicate_child_pieces_rejected() {
        assert!(matches!(
            transfer_pieces(&["a", "b", "c"], &["x", "x"], 0),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn unseen_diacritics_are_replaced() {
        let parent = train_bpe(
            &["ta dao ta hao hu qu le", "the quick brown fox jumps over the lazy dog"],
            60,
            1.0,
        )
        .unwrap();
        let child = train_bpe(&["tā dào tǎ hào hú qù le"], 16, 1.0).unwrap();
        assert!(child.len() <= parent.len());
        let r = transfer_vocab(&parent, &child, 3).unwrap();
        let replaced: Vec<&str> = r
            .assignments
            .iter()
            .filter(|a| a.kind == AssignmentKind::Replaced)
            .map(|a| a.piece.as_str())
            .collect();
        assert!(replaced.contains(&"ā"));
        assert!(r
            .assignments
            .iter()
            .any(|a| a.piece == "e" && a.kind == AssignmentKind::Matched));
    }

    #[test]
    fn reuse_reports_unseen_characters() {
        let parent = train_bpe(&["ta dao ta hao hu qu le"], 30, 1.0).unwrap();
        let lossy = reuse_parent_vocab(&parent, &["ta hu le", "dao"]);
        assert!(lossy.unmatched.is_empty());
        assert_eq!(lossy.replaced_count, 0);
        let preserving = reuse_parent_vocab(&parent, &["tā hú le"]);
        assert_eq!(preserving.unmatched, ["ā", "ú"]);
        let empty = reuse_parent_vocab::<&str>(&parent, &[]);
        assert!(empty.assignments.is_empty() && empty.unmatched.is_empty());
    }

    #[test]
    fn remap_inherits_assigned_rows() {
        let parent = parent10();
        let r = transfer_pieces(&parent, &["p1", "x", "y"], 7).unwrap();
        let values: Vec<f32> = (0..20).map(|v| v as f32).collect();
        let emb = Embeddings::new(10, 2, values).unwrap();
        let (rows, map) = remap_embeddings(&emb, &r).unwrap();
        assert_eq!(rows, emb);
        let x_row = r.assignments[1].position;
        assert_eq!(map.entries[1], ("x".to_string(), x_row));
        let child = map.gather(&emb);
        assert_eq!(child.row(1), emb.row(x_row));
        assert_eq!(child.row(0), emb.row(1));
    }

    #[test]
    fn remap_checks_dimensions() {
        let r = transfer_pieces(&parent10(), &["p1"], 7).unwrap();
        let emb = Embeddings::new(9, 2, vec![0.0; 18]).unwrap();
        assert!(matches!(remap_embeddings(&emb, &r), Err(Error::Dimension(_))));
        assert!(Embeddings::new(3, 2, vec![0.0; 5]).is_err());
    }

    #[test]
    fn seeds_change_only_replaced_positions() {
        let parent = parent10();
        let child = ["p1", "x", "y", "p5"];
        let a = transfer_pieces(&parent, &child, 1).unwrap();
        let b = transfer_pieces(&parent, &child, 2).unwrap();
        for (u, v) in a.assignments.iter().zip(&b.assignments) {
            if u.kind == AssignmentKind::Matched {
                assert_eq!(u, v);
            }
        }
        let emb = Embeddings::new(10, 1, (0..10).map(|v| v as f32).collect()).unwrap();
        let rows = |r: &TransferReport| {
            let (_, map) = remap_embeddings(&emb, r).unwrap();
            map.gather(&emb).values().to_vec()
        };
        let (ra, rb) = (rows(&a), rows(&b));
        assert_eq!(ra.len(), rb.len());
        assert_eq!(ra[0], rb[0]);
        assert_eq!(ra[3], rb[3]);
    }
}
