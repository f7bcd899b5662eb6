use std::collections::HashSet;

use chrono::NaiveDate;

use super::{rank, RetrievalConfig, RetrievalError, SearchHit};

/// Cosine ranking over externally computed document embeddings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EmbeddingIndex {
    ids: Vec<String>,
    dates: Vec<Option<NaiveDate>>,
    /// Unit-normalized vectors; zero vectors stay zero.
    vectors: Vec<Vec<f32>>,
    dim: usize,
}

fn normalized(v: &[f32]) -> Vec<f32> {
    let norm = v.iter().map(|x| (*x as f64) * (*x as f64)).sum::<f64>().sqrt();
    if norm == 0.0 {
        v.to_vec()
    } else {
        v.iter().map(|x| (*x as f64 / norm) as f32).collect()
    }
}

impl EmbeddingIndex {
    pub fn new(dim: usize) -> Self {
        EmbeddingIndex { dim, ..Default::default() }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn add(&mut self, id: &str, date: Option<NaiveDate>, vector: &[f32]) -> Result<(), RetrievalError> {
        if vector.len() != self.dim {
            return Err(RetrievalError::Dimension { id: id.to_string(), got: vector.len(), expected: self.dim });
        }
        if self.ids.iter().any(|i| i == id) {
            return Err(RetrievalError::DuplicateId(id.to_string()));
        }
        self.ids.push(id.to_string());
        self.dates.push(date);
        self.vectors.push(normalized(vector));
        Ok(())
    }

    pub fn from_vectors<I>(dim: usize, items: I) -> Result<Self, RetrievalError>
    where
        I: IntoIterator<Item = (String, Option<NaiveDate>, Vec<f32>)>,
    {
        let mut idx = EmbeddingIndex::new(dim);
        let mut seen = HashSet::new();
        for (id, date, v) in items {
            if !seen.insert(id.clone()) {
                return Err(RetrievalError::DuplicateId(id));
            }
            if v.len() != dim {
                return Err(RetrievalError::Dimension { id, got: v.len(), expected: dim });
            }
            idx.ids.push(id);
            idx.dates.push(date);
            idx.vectors.push(normalized(&v));
        }
        Ok(idx)
    }

    /// Documents in the date window ranked by cosine similarity to `query`;
    /// ties by id. A zero query matches nothing.
    pub fn search(&self, query: &[f32], config: &RetrievalConfig) -> Result<Vec<SearchHit>, RetrievalError> {
        if query.len() != self.dim {
            return Err(RetrievalError::Dimension { id: "<query>".into(), got: query.len(), expected: self.dim });
        }
        let q = normalized(query);
        if q.iter().all(|x| *x == 0.0) {
            return Ok(Vec::new());
        }
        let hits = self
            .ids
            .iter()
            .zip(&self.vectors)
            .zip(&self.dates)
            .filter(|(_, d)| config.admits(**d))
            .map(|((id, v), _)| SearchHit {
                id: id.clone(),
                score: v.iter().zip(&q).map(|(a, b)| *a as f64 * *b as f64).sum(),
            })
            .collect();
        Ok(rank(hits, config.top_k))
    }
}
