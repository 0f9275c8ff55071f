//! One interactive learning session: a single-writer state machine around
//! [`ActiveLearner`].

use std::collections::BTreeMap;
use std::sync::Arc;

use ahprank::learner::rank_by_gw;
use ahprank::{ActiveLearner, LearnerConfig, PatternCollection, PatternId, PatternRecord, QueryStrategy};
use serde::{Deserialize, Serialize};

use crate::error::SessionError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ready,
    AwaitingAnswer,
    Finished,
}

/// Body of `POST /sessions`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CreateRequest {
    /// Dataset name; the server's only dataset when omitted.
    #[serde(default)]
    pub dataset: Option<String>,
    #[serde(default = "default_theta")]
    pub theta: usize,
    pub max_queries: usize,
    pub seed: u64,
    #[serde(default)]
    pub strategy: QueryStrategy,
}

fn default_theta() -> usize {
    1000
}

impl CreateRequest {
    pub fn learner_config(&self) -> LearnerConfig {
        LearnerConfig {
            theta: self.theta,
            max_queries: self.max_queries,
            seed: self.seed,
            strategy: self.strategy,
        }
    }
}

/// A pattern as sent to clients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternView {
    pub id: PatternId,
    pub body: Vec<u32>,
    pub head: Vec<u32>,
    pub measures: BTreeMap<String, f64>,
    pub scaled: BTreeMap<String, f64>,
}

impl PatternView {
    pub fn new(record: &PatternRecord, names: &[String]) -> Self {
        let named = |values: &[f64]| names.iter().cloned().zip(values.iter().copied()).collect();
        let (body, head) = match &record.rule {
            Some(rule) => (rule.body.items().to_vec(), rule.head.items().to_vec()),
            None => (Vec::new(), Vec::new()),
        };
        PatternView {
            id: record.id,
            body,
            head,
            measures: named(&record.measures),
            scaled: named(&record.scaled),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryView {
    /// Answers given so far.
    pub iteration: usize,
    pub pair: [PatternView; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub query: (PatternId, PatternId),
    pub preferred: PatternId,
    pub weights: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnswerView {
    pub iteration: usize,
    pub status: Status,
    pub weights: Vec<f64>,
    pub top: Vec<PatternView>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub dataset: String,
    pub status: Status,
    pub iteration: usize,
    pub max_queries: usize,
    pub theta: usize,
    pub seed: u64,
    pub strategy: QueryStrategy,
    pub measures: Vec<String>,
    pub weights: Vec<f64>,
    pub pending: Option<(PatternId, PatternId)>,
    pub trace: Vec<TraceEntry>,
}

/// How many top patterns an answer response carries.
pub const ANSWER_TOP_K: usize = 10;

#[derive(Debug)]
pub struct Session {
    id: String,
    dataset: String,
    collection: Arc<PatternCollection>,
    learner: ActiveLearner,
}

impl Session {
    pub fn new(
        id: String,
        dataset: String,
        collection: Arc<PatternCollection>,
        config: LearnerConfig,
    ) -> Result<Self, SessionError> {
        if collection.len() < 2 {
            return Err(SessionError::Invalid(format!("dataset {dataset} has fewer than two patterns")));
        }
        let learner = ActiveLearner::new(config, collection.measure_count())?;
        Ok(Session {
            id,
            dataset,
            collection,
            learner,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn status(&self) -> Status {
        if self.learner.is_finished() {
            Status::Finished
        } else if self.learner.pending().is_some() {
            Status::AwaitingAnswer
        } else {
            Status::Ready
        }
    }

    fn view(&self, id: PatternId) -> Result<PatternView, SessionError> {
        Ok(PatternView::new(self.collection.require(id)?, self.collection.measure_names()))
    }

    /// The pending pair, drawing a new one if none is pending.
    pub fn next_query(&mut self) -> Result<QueryView, SessionError> {
        let Some((a, b)) = self.learner.next_query(&self.collection)? else {
            return Err(SessionError::Gone(self.id.clone()));
        };
        Ok(QueryView {
            iteration: self.learner.iteration(),
            pair: [self.view(a)?, self.view(b)?],
        })
    }

    pub fn submit(&mut self, preferred: PatternId) -> Result<AnswerView, SessionError> {
        match self.status() {
            Status::Finished => return Err(SessionError::Gone(self.id.clone())),
            Status::Ready => return Err(SessionError::Conflict("no query is pending".into())),
            Status::AwaitingAnswer => {}
        }
        let (a, b) = self.learner.pending().expect("awaiting an answer");
        if preferred != a && preferred != b {
            return Err(SessionError::Invalid(format!(
                "pattern {preferred} is not in the pending pair ({a}, {b})"
            )));
        }
        self.learner.prefer(&self.collection, preferred)?;
        Ok(AnswerView {
            iteration: self.learner.iteration(),
            status: self.status(),
            weights: self.learner.weights().as_slice().to_vec(),
            top: self.ranking(ANSWER_TOP_K)?,
        })
    }

    /// Top `k` patterns under the current weights (all when `k ≥ n`).
    pub fn ranking(&self, k: usize) -> Result<Vec<PatternView>, SessionError> {
        rank_by_gw(self.collection.records(), self.learner.weights())?
            .into_iter()
            .take(k)
            .map(|(id, _)| self.view(id))
            .collect()
    }

    pub fn stop(&mut self) {
        self.learner.stop();
    }

    pub fn snapshot(&self) -> SessionView {
        let config = self.learner.config();
        SessionView {
            id: self.id.clone(),
            dataset: self.dataset.clone(),
            status: self.status(),
            iteration: self.learner.iteration(),
            max_queries: config.max_queries,
            theta: config.theta,
            seed: config.seed,
            strategy: config.strategy,
            measures: self.collection.measure_names().to_vec(),
            weights: self.learner.weights().as_slice().to_vec(),
            pending: self.learner.pending(),
            trace: self
                .learner
                .trace()
                .iter()
                .map(|s| TraceEntry {
                    iteration: s.iteration,
                    query: s.query,
                    preferred: s.response.ids()[0],
                    weights: s.weights.as_slice().to_vec(),
                })
                .collect(),
        }
    }
}
