//! IS-A taxonomy with information content and the Lin word similarity.
//!
//! The taxonomy is read from a tab-separated file, one concept per line:
//!
//! ```text
//! concept_id<TAB>parent_id[,parent_id...]|-<TAB>lemma[,lemma...]<TAB>raw_count
//! ```
//!
//! `-` in the parent column marks a root; `-` or an empty lemma column means
//! the concept has no lemmas. Lines starting with `#` are comments.
//!
//! Raw counts are made cumulative on load: the count of a concept is its own
//! raw count plus the raw counts of all its distinct descendants. The total
//! is the sum of all raw counts, so `IC(c) = -ln(count(c) / total)`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fs;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TaxonomyError {
    #[error("cannot read taxonomy file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: duplicate concept id {id:?}")]
    DuplicateConcept { line: usize, id: String },
    #[error("line {line}: concept {child:?} names unknown parent {parent:?}")]
    DanglingParent {
        line: usize,
        child: String,
        parent: String,
    },
    #[error("line {line}: IS-A cycle through concept {id:?}")]
    Cycle { line: usize, id: String },
    #[error("line {line}: concept {id:?} has zero cumulative count")]
    ZeroCount { line: usize, id: String },
    #[error("taxonomy total count must be positive")]
    NonPositiveTotal,
    #[error("unknown concept id {0:?}")]
    UnknownConcept(String),
}

#[derive(Debug, Clone)]
pub struct Taxonomy {
    ids: Vec<String>,
    index: HashMap<String, u32>,
    parents: Vec<Vec<u32>>,
    /// Sorted ancestor set of each concept, the concept itself included.
    ancestors: Vec<Vec<u32>>,
    counts: Vec<u64>,
    ic: Vec<f64>,
    lemmas: HashMap<String, Vec<u32>>,
    total: u64,
}

struct RawConcept {
    line: usize,
    id: String,
    parents: Vec<String>,
    lemmas: Vec<String>,
    raw: u64,
}

fn split_list(field: &str) -> Vec<String> {
    let field = field.trim();
    if field.is_empty() || field == "-" {
        return Vec::new();
    }
    field
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

impl Taxonomy {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, TaxonomyError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| TaxonomyError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, TaxonomyError> {
        let mut raw = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(TaxonomyError::Malformed {
                    line: line_no,
                    reason: format!("expected 4 tab-separated fields, found {}", fields.len()),
                });
            }
            let id = fields[0].trim();
            if id.is_empty() || id == "-" {
                return Err(TaxonomyError::Malformed {
                    line: line_no,
                    reason: "empty concept id".into(),
                });
            }
            let parents_field = fields[1].trim();
            if parents_field.is_empty() {
                return Err(TaxonomyError::Malformed {
                    line: line_no,
                    reason: "empty parent column (use '-' for roots)".into(),
                });
            }
            let count = fields[3].trim().parse::<u64>().map_err(|e| TaxonomyError::Malformed {
                line: line_no,
                reason: format!("bad count {:?}: {e}", fields[3].trim()),
            })?;
            raw.push(RawConcept {
                line: line_no,
                id: id.to_string(),
                parents: split_list(parents_field),
                lemmas: split_list(fields[2])
                    .into_iter()
                    .map(|l| l.to_lowercase())
                    .collect(),
                raw: count,
            });
        }
        Self::build(raw)
    }

    fn build(raw: Vec<RawConcept>) -> Result<Self, TaxonomyError> {
        let mut index = HashMap::with_capacity(raw.len());
        for (i, c) in raw.iter().enumerate() {
            if index.insert(c.id.clone(), i as u32).is_some() {
                return Err(TaxonomyError::DuplicateConcept {
                    line: c.line,
                    id: c.id.clone(),
                });
            }
        }
        let n = raw.len();
        let mut parents = Vec::with_capacity(n);
        for c in &raw {
            let mut ps = Vec::with_capacity(c.parents.len());
            for p in &c.parents {
                match index.get(p) {
                    Some(&pi) => ps.push(pi),
                    None => {
                        return Err(TaxonomyError::DanglingParent {
                            line: c.line,
                            child: c.id.clone(),
                            parent: p.clone(),
                        })
                    }
                }
            }
            ps.sort_unstable();
            ps.dedup();
            parents.push(ps);
        }

        // Kahn's algorithm, parents before children.
        let mut pending: Vec<usize> = parents.iter().map(Vec::len).collect();
        let mut children: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (c, ps) in parents.iter().enumerate() {
            for &p in ps {
                children[p as usize].push(c as u32);
            }
        }
        let mut order: Vec<u32> = (0..n as u32).filter(|&c| pending[c as usize] == 0).collect();
        let mut head = 0;
        while head < order.len() {
            let c = order[head] as usize;
            head += 1;
            for &ch in &children[c] {
                pending[ch as usize] -= 1;
                if pending[ch as usize] == 0 {
                    order.push(ch);
                }
            }
        }
        if order.len() != n {
            let stuck = (0..n).find(|&c| pending[c] > 0).expect("some concept is on a cycle");
            return Err(TaxonomyError::Cycle {
                line: raw[stuck].line,
                id: raw[stuck].id.clone(),
            });
        }

        let mut ancestors: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &c in &order {
            let c = c as usize;
            let mut set = vec![c as u32];
            for &p in &parents[c] {
                set.extend_from_slice(&ancestors[p as usize]);
            }
            set.sort_unstable();
            set.dedup();
            ancestors[c] = set;
        }

        let mut counts = vec![0u64; n];
        let mut total: u64 = 0;
        for (c, anc) in ancestors.iter().enumerate() {
            total += raw[c].raw;
            for &a in anc {
                counts[a as usize] += raw[c].raw;
            }
        }
        if total == 0 {
            return Err(TaxonomyError::NonPositiveTotal);
        }
        if let Some(c) = counts.iter().position(|&k| k == 0) {
            return Err(TaxonomyError::ZeroCount {
                line: raw[c].line,
                id: raw[c].id.clone(),
            });
        }
        let ic = counts
            .iter()
            .map(|&k| {
                if k == total {
                    0.0
                } else {
                    -(k as f64 / total as f64).ln()
                }
            })
            .collect();

        let mut lemmas: HashMap<String, Vec<u32>> = HashMap::new();
        for (c, rc) in raw.iter().enumerate() {
            for l in &rc.lemmas {
                let senses = lemmas.entry(l.clone()).or_default();
                if !senses.contains(&(c as u32)) {
                    senses.push(c as u32);
                }
            }
        }

        Ok(Taxonomy {
            ids: raw.into_iter().map(|c| c.id).collect(),
            index,
            parents,
            ancestors,
            counts,
            ic,
            lemmas,
            total,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.parents.iter().map(Vec::len).sum()
    }

    pub fn total_count(&self) -> u64 {
        self.total
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    fn lookup(&self, id: &str) -> Result<usize, TaxonomyError> {
        self.index
            .get(id)
            .map(|&i| i as usize)
            .ok_or_else(|| TaxonomyError::UnknownConcept(id.to_string()))
    }

    /// Cumulative count of a concept.
    pub fn count(&self, id: &str) -> Result<u64, TaxonomyError> {
        Ok(self.counts[self.lookup(id)?])
    }

    pub fn parents(&self, id: &str) -> Result<Vec<&str>, TaxonomyError> {
        Ok(self.parents[self.lookup(id)?]
            .iter()
            .map(|&p| self.ids[p as usize].as_str())
            .collect())
    }

    /// Concept ids listed for `word`, in file order.
    pub fn senses(&self, word: &str) -> Vec<&str> {
        self.lemmas
            .get(word)
            .map(|s| s.iter().map(|&c| self.ids[c as usize].as_str()).collect())
            .unwrap_or_default()
    }

    /// `-ln(count(c) / total)`; zero for a concept covering the whole total.
    pub fn information_content(&self, id: &str) -> Result<f64, TaxonomyError> {
        Ok(self.ic[self.lookup(id)?])
    }

    /// The common ancestor with the largest information content, ties broken
    /// by the lexicographically smallest concept id.
    pub fn lowest_common_subsumer(&self, c1: &str, c2: &str) -> Result<Option<&str>, TaxonomyError> {
        let (a, b) = (self.lookup(c1)?, self.lookup(c2)?);
        Ok(self.lcs_index(a, b).map(|(i, _)| self.ids[i].as_str()))
    }

    fn lcs_index(&self, a: usize, b: usize) -> Option<(usize, f64)> {
        let (xs, ys) = (&self.ancestors[a], &self.ancestors[b]);
        let (mut i, mut j) = (0, 0);
        let mut best: Option<(usize, f64)> = None;
        while i < xs.len() && j < ys.len() {
            match xs[i].cmp(&ys[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    let c = xs[i] as usize;
                    let better = match best {
                        None => true,
                        Some((bc, bic)) => {
                            self.ic[c] > bic || (self.ic[c] == bic && self.ids[c] < self.ids[bc])
                        }
                    };
                    if better {
                        best = Some((c, self.ic[c]));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        best
    }

    fn concept_lin(&self, a: usize, b: usize) -> f64 {
        let denom = self.ic[a] + self.ic[b];
        if denom <= 0.0 {
            return 0.0;
        }
        match self.lcs_index(a, b) {
            Some((_, ic)) => (2.0 * ic / denom).clamp(0.0, 1.0),
            // disjoint roots: no common subsumer
            None => 0.0,
        }
    }

    /// Lin similarity between two concepts given by id.
    pub fn concept_similarity(&self, c1: &str, c2: &str) -> Result<f64, TaxonomyError> {
        Ok(self.concept_lin(self.lookup(c1)?, self.lookup(c2)?))
    }

    /// Maximum Lin similarity over all sense pairs of the two words; zero
    /// when either word is unknown.
    pub fn lin_similarity(&self, w1: &str, w2: &str) -> f64 {
        let (Some(s1), Some(s2)) = (self.lemmas.get(w1), self.lemmas.get(w2)) else {
            return 0.0;
        };
        let mut best = 0.0f64;
        for &a in s1 {
            for &b in s2 {
                best = best.max(self.concept_lin(a as usize, b as usize));
                if best >= 1.0 {
                    return 1.0;
                }
            }
        }
        best
    }
}
