//! JSON formats for triangulations and words (1-based labels).
//!
//! Triangulation:
//! `{"genus":g,"punctures":n,"triangles":N,"gluing":[[[t,s],[t',s']],…],"arc_labels":{"t:s":label,…}}`
//! where triangles and sides are 0-based and each label key names one slot of
//! a glued pair.
//!
//! Word: `{"start":<path or inline triangulation>,"moves":[{"flip":k}|{"permute":[[1,2],…]}],"closing_iso":[[…],…]}`
//! with permutations in 1-based cycle notation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{
    build_triangulation, GroupoidWord, LabeledTriangulation, MappingClassLoop, Move, Permutation,
    SurfaceSignature, TriangulationError,
};

/// Serialized triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationFile {
    pub genus: usize,
    pub punctures: usize,
    pub triangles: usize,
    pub gluing: Vec<[[usize; 2]; 2]>,
    pub arc_labels: BTreeMap<String, usize>,
}

impl TriangulationFile {
    /// Validates and builds the triangulation.
    pub fn to_triangulation(&self) -> Result<LabeledTriangulation, TriangulationError> {
        let sig = SurfaceSignature::new(self.genus, self.punctures)?;
        let gluing: Vec<_> = self
            .gluing
            .iter()
            .map(|[a, b]| ((a[0], a[1]), (b[0], b[1])))
            .collect();
        let mut labels = BTreeMap::new();
        for (key, &label) in &self.arc_labels {
            let slot = parse_slot(key)?;
            if label == 0 {
                return Err(TriangulationError::BadLabels("labels are 1-based".into()));
            }
            labels.insert(slot, label - 1);
        }
        build_triangulation(sig, self.triangles, &gluing, &labels)
    }

    /// Serializes a triangulation in canonical triangle order.
    pub fn from_triangulation(t: &LabeledTriangulation) -> Self {
        let sig = t.signature();
        let slots = t.arc_slots();
        let gluing = slots
            .iter()
            .map(|[a, b]| [[a.0, a.1], [b.0, b.1]])
            .collect();
        let arc_labels = slots
            .iter()
            .enumerate()
            .map(|(arc, [a, _])| (format!("{}:{}", a.0, a.1), arc + 1))
            .collect();
        TriangulationFile {
            genus: sig.genus,
            punctures: sig.punctures,
            triangles: t.triangles().len(),
            gluing,
            arc_labels,
        }
    }

    /// Parses JSON text.
    pub fn from_json(text: &str) -> Result<Self, TriangulationError> {
        serde_json::from_str(text).map_err(|e| TriangulationError::Format(e.to_string()))
    }
}

fn parse_slot(key: &str) -> Result<(usize, usize), TriangulationError> {
    let bad =
        || TriangulationError::BadLabels(format!("label key {key:?} is not of the form \"t:s\""));
    let (t, s) = key.split_once(':').ok_or_else(bad)?;
    Ok((
        t.trim().parse().map_err(|_| bad())?,
        s.trim().parse().map_err(|_| bad())?,
    ))
}

/// One serialized move.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveFile {
    /// 1-based arc label.
    Flip(usize),
    /// 1-based disjoint cycles.
    Permute(Vec<Vec<usize>>),
}

/// Serialized word, optionally closed into a loop.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WordFile {
    /// Path to a triangulation file, or an inline triangulation object.
    pub start: serde_json::Value,
    pub moves: Vec<MoveFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closing_iso: Option<Vec<Vec<usize>>>,
}

impl WordFile {
    /// Parses JSON text.
    pub fn from_json(text: &str) -> Result<Self, TriangulationError> {
        serde_json::from_str(text).map_err(|e| TriangulationError::Format(e.to_string()))
    }

    /// The start field when it is a path.
    pub fn start_path(&self) -> Option<&str> {
        self.start.as_str()
    }

    /// The start field when it is inline.
    pub fn start_inline(&self) -> Option<Result<TriangulationFile, TriangulationError>> {
        self.start.is_object().then(|| {
            serde_json::from_value(self.start.clone())
                .map_err(|e| TriangulationError::Format(e.to_string()))
        })
    }

    /// Resolves moves against a start triangulation.
    pub fn to_word(&self, start: LabeledTriangulation) -> Result<GroupoidWord, TriangulationError> {
        let m = start.arc_count();
        let moves = self
            .moves
            .iter()
            .map(|mv| match mv {
                MoveFile::Flip(k) if (1..=m).contains(k) => Ok(Move::Flip(k - 1)),
                MoveFile::Flip(k) => Err(TriangulationError::ArcOutOfRange { arc: *k, count: m }),
                MoveFile::Permute(c) => cycles_from_one_based(m, c).map(Move::Permute),
            })
            .collect::<Result<_, _>>()?;
        Ok(GroupoidWord { start, moves })
    }

    /// Resolves the word and its closing relabeling.
    pub fn to_loop(
        &self,
        start: LabeledTriangulation,
    ) -> Result<MappingClassLoop, TriangulationError> {
        let m = start.arc_count();
        let closing_iso = self
            .closing_iso
            .as_ref()
            .map(|c| cycles_from_one_based(m, c))
            .transpose()?;
        Ok(MappingClassLoop {
            word: self.to_word(start)?,
            closing_iso,
        })
    }

    /// Serializes a word with an inline start.
    pub fn from_word(word: &GroupoidWord, closing_iso: Option<&Permutation>) -> Self {
        let start = serde_json::to_value(TriangulationFile::from_triangulation(&word.start))
            .expect("serializable");
        let moves = word
            .moves
            .iter()
            .map(|mv| match mv {
                Move::Flip(k) => MoveFile::Flip(k + 1),
                Move::Permute(s) => MoveFile::Permute(cycles_to_one_based(s)),
            })
            .collect();
        WordFile {
            start,
            moves,
            closing_iso: closing_iso.map(cycles_to_one_based),
        }
    }
}

fn cycles_from_one_based(
    m: usize,
    cycles: &[Vec<usize>],
) -> Result<Permutation, TriangulationError> {
    let zero: Vec<Vec<usize>> = cycles
        .iter()
        .map(|c| {
            c.iter()
                .map(|&x| {
                    x.checked_sub(1).ok_or_else(|| {
                        TriangulationError::BadPermutation("cycle points are 1-based".into())
                    })
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    Permutation::from_cycles(m, &zero)
}

/// Cycles of `σ` with 1-based points.
pub fn cycles_to_one_based(s: &Permutation) -> Vec<Vec<usize>> {
    s.cycles()
        .into_iter()
        .map(|c| c.into_iter().map(|x| x + 1).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangulation_round_trip() {
        let t = LabeledTriangulation::from_triangles(
            SurfaceSignature::new(0, 3).unwrap(),
            vec![[0, 1, 2], [0, 2, 1]],
        )
        .unwrap();
        let f = TriangulationFile::from_triangulation(&t);
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(
            TriangulationFile::from_json(&text)
                .unwrap()
                .to_triangulation()
                .unwrap(),
            t
        );
    }

    #[test]
    fn malformed_label_key_is_rejected() {
        let text = r#"{"genus":0,"punctures":3,"triangles":2,
            "gluing":[[[0,0],[1,0]],[[0,1],[1,2]],[[0,2],[1,1]]],
            "arc_labels":{"0-0":1,"0:1":2,"0:2":3}}"#;
        let err = TriangulationFile::from_json(text)
            .unwrap()
            .to_triangulation()
            .unwrap_err();
        assert!(matches!(err, TriangulationError::BadLabels(_)));
    }

    #[test]
    fn move_json_shapes() {
        let text =
            r#"{"start":"x.json","moves":[{"flip":2},{"permute":[[1,3]]}],"closing_iso":[[2,3]]}"#;
        let w = WordFile::from_json(text).unwrap();
        assert_eq!(w.start_path(), Some("x.json"));
        assert_eq!(
            w.moves,
            vec![MoveFile::Flip(2), MoveFile::Permute(vec![vec![1, 3]])]
        );
    }
}
