use std::collections::HashMap;
use std::path::PathBuf;

use rayon::prelude::*;

use super::distance::Metric;
use crate::codebook::FeatureMatrix;
use crate::error::{Error, Result};

/// A featurized document.
#[derive(Debug, Clone, PartialEq)]
pub struct DocumentDescriptor {
    pub doc_id: String,
    pub writer_id: String,
    pub matrix: FeatureMatrix,
    pub source: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub doc_id: String,
    pub writer_id: String,
    pub distance: f64,
}

/// Gallery documents sorted by ascending distance to a query.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingResult {
    pub query: String,
    pub candidates: Vec<Candidate>,
}

impl RankingResult {
    /// Whether one of the first `n` candidates shares `writer`.
    pub fn hit_within(&self, writer: &str, n: usize) -> bool {
        self.candidates.iter().take(n).any(|c| c.writer_id == writer)
    }
}

/// Ranks every gallery document other than the query itself (matched by id).
///
/// Equal distances are ordered by document id.
pub fn rank(query: &DocumentDescriptor, gallery: &[DocumentDescriptor], metric: Metric) -> Result<RankingResult> {
    let mut candidates = gallery
        .iter()
        .filter(|d| d.doc_id != query.doc_id)
        .map(|d| {
            Ok(Candidate {
                doc_id: d.doc_id.clone(),
                writer_id: d.writer_id.clone(),
                distance: metric.distance(&query.matrix, &d.matrix)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if candidates.is_empty() {
        return Err(Error::InsufficientData(format!(
            "no gallery documents to rank against query '{}'",
            query.doc_id
        )));
    }
    candidates.sort_by(|a, b| a.distance.total_cmp(&b.distance).then_with(|| a.doc_id.cmp(&b.doc_id)));
    Ok(RankingResult {
        query: query.doc_id.clone(),
        candidates,
    })
}

/// Top-N hit counts over a set of queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccuracyTable {
    pub tops: Vec<usize>,
    pub hits: Vec<usize>,
    pub queries: usize,
}

impl AccuracyTable {
    fn tally(tops: &[usize], rankings: &[(String, RankingResult)]) -> Self {
        let hits = tops
            .iter()
            .map(|&n| rankings.iter().filter(|(w, r)| r.hit_within(w, n)).count())
            .collect();
        Self {
            tops: tops.to_vec(),
            hits,
            queries: rankings.len(),
        }
    }

    /// Top-`n` accuracy in `[0, 1]`, if `n` was evaluated.
    pub fn accuracy(&self, n: usize) -> Option<f64> {
        let i = self.tops.iter().position(|&t| t == n)?;
        Some(if self.queries == 0 {
            0.0
        } else {
            self.hits[i] as f64 / self.queries as f64
        })
    }
}

fn normalize_tops(tops: &[usize]) -> Result<Vec<usize>> {
    let mut t: Vec<usize> = tops.to_vec();
    t.sort_unstable();
    t.dedup();
    if t.is_empty() || t[0] == 0 {
        return Err(Error::Config("Top-N list must be non-empty with N >= 1".into()));
    }
    Ok(t)
}

/// Leave-one-out Top-N accuracy: each document queries all the others.
///
/// Writers with a single document still count as queries; they can never hit.
pub fn evaluate_loo(gallery: &[DocumentDescriptor], metric: Metric, tops: &[usize]) -> Result<AccuracyTable> {
    let tops = normalize_tops(tops)?;
    if gallery.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "leave-one-out needs at least 2 documents, got {}",
            gallery.len()
        )));
    }
    let mut per_writer: HashMap<&str, usize> = HashMap::new();
    for d in gallery {
        *per_writer.entry(d.writer_id.as_str()).or_default() += 1;
    }
    if per_writer.len() < 2 {
        log::warn!("leave-one-out gallery has a single writer; accuracy is trivially perfect");
    }
    let singles: Vec<&str> = per_writer.iter().filter(|(_, &c)| c < 2).map(|(w, _)| *w).collect();
    if !singles.is_empty() {
        log::warn!(
            "{} writer(s) have a single document; their queries count as misses",
            singles.len()
        );
    }
    let rankings = gallery
        .par_iter()
        .map(|q| Ok((q.writer_id.clone(), rank(q, gallery, metric)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(AccuracyTable::tally(&tops, &rankings))
}

/// Top-N accuracy of `queries` ranked against a disjoint template set.
pub fn evaluate_queryset(
    templates: &[DocumentDescriptor],
    queries: &[DocumentDescriptor],
    metric: Metric,
    tops: &[usize],
) -> Result<AccuracyTable> {
    let tops = normalize_tops(tops)?;
    if templates.is_empty() {
        return Err(Error::InsufficientData("no template documents".into()));
    }
    if queries.is_empty() {
        return Err(Error::InsufficientData("no query documents".into()));
    }
    let missing = queries
        .iter()
        .filter(|q| !templates.iter().any(|t| t.writer_id == q.writer_id))
        .count();
    if missing > 0 {
        log::warn!("{missing} quer(ies) have no template from the same writer; counted as misses");
    }
    let rankings = queries
        .par_iter()
        .map(|q| Ok((q.writer_id.clone(), rank(q, templates, metric)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(AccuracyTable::tally(&tops, &rankings))
}
