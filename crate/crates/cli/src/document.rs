//! The JSON interchange format. Field names and order are part of the
//! format: golden files compare byte for byte.

use serde::{Deserialize, Serialize};

use gamma0_core::gamma0::cusp_class_key;
use gamma0_core::{
    generator_set, index_gamma0, FareyFraction, FareySequence, Generator, Level, SideLabel,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelInfo {
    #[serde(rename = "N")]
    pub n: i64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<i64>,
    #[serde(rename = "n", skip_serializing_if = "Option::is_none", default)]
    pub exponent: Option<u32>,
}

impl LevelInfo {
    pub fn of(level: &Level) -> Self {
        let pp = level.prime_power();
        LevelInfo { n: level.value(), p: pp.map(|x| x.0), exponent: pp.map(|x| x.1) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub index: usize,
    pub num: i64,
    pub den: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Side {
    pub left_index: usize,
    pub right_index: usize,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub partner_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub matrix: Option<[i128; 4]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub members: usize,
    pub max_denominator: i64,
    pub max_multiplicity: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub index: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cusp_classes: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceDocument {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub level: Option<LevelInfo>,
    pub algorithm: String,
    pub entries: Vec<Entry>,
    pub sides: Vec<Side>,
    pub stats: Stats,
}

/// Label tag used in documents for sides of sequences without a level.
pub const UNLABELED: &str = "unlabeled";

fn entries_of(seq: &FareySequence) -> Vec<Entry> {
    seq.entries()
        .iter()
        .enumerate()
        .map(|(index, f)| Entry { index, num: f.num(), den: f.den() })
        .collect()
}

fn base_stats(seq: &FareySequence) -> Stats {
    let (max, mult) = seq.max_denominator();
    Stats { members: seq.len(), max_denominator: max, max_multiplicity: mult, index: None, cusp_classes: None }
}

impl SequenceDocument {
    /// Document for a sequence with no level attached.
    pub fn unlabeled(seq: &FareySequence, algorithm: &str) -> Self {
        let sides = (0..seq.side_count())
            .map(|i| Side {
                left_index: i,
                right_index: i + 1,
                label: UNLABELED.to_string(),
                partner_index: None,
                matrix: None,
            })
            .collect();
        SequenceDocument {
            level: None,
            algorithm: algorithm.to_string(),
            entries: entries_of(seq),
            sides,
            stats: base_stats(seq),
        }
    }

    /// Document for a labeled sequence. Generator matrices are attached
    /// when the sequence is complete.
    pub fn labeled(seq: &FareySequence, level: &Level, algorithm: &str) -> Self {
        let mut matrices: Vec<Option<[i128; 4]>> = vec![None; seq.side_count()];
        if let Ok(gens) = generator_set(seq, level) {
            for Generator { side, matrix, .. } in gens {
                matrices[side] = Some(matrix.entries());
            }
        }
        let sides = (0..seq.side_count())
            .map(|i| {
                let label = seq.label(i);
                Side {
                    left_index: i,
                    right_index: i + 1,
                    label: label.map_or(UNLABELED, SideLabel::tag).to_string(),
                    partner_index: label.and_then(SideLabel::partner),
                    matrix: matrices[i],
                }
            })
            .collect();
        let classes: std::collections::HashSet<_> = seq
            .entries()
            .iter()
            .copied()
            .chain([FareyFraction::INFINITY])
            .map(|x| cusp_class_key(x, level))
            .collect();
        let mut stats = base_stats(seq);
        stats.index = Some(index_gamma0(level));
        stats.cusp_classes = Some(classes.len());
        SequenceDocument {
            level: Some(LevelInfo::of(level)),
            algorithm: algorithm.to_string(),
            entries: entries_of(seq),
            sides,
            stats,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    /// Denominators in brace notation.
    pub fn brace_notation(&self) -> String {
        let dens: Vec<String> = self.entries.iter().map(|e| e.den.to_string()).collect();
        format!("{{{}}}", dens.join(","))
    }
}
