//! Agent responses: ingestion, validation, determiner merging, ranking and
//! out-of-relation tagging.

mod agent;
mod distribution;
mod human;
mod model;
mod oor;
mod set;

pub use agent::{AgentId, AgentKind, Pretraining};
pub use distribution::{merge_determiner, rank, RankedItem, RankedList, ResponseDistribution};
pub use human::{ingest_human, load_human, BogusKey, HumanIngestStats, HumanRawResponse, MAX_HUMAN_WORDS};
pub use model::{ingest_model, ingest_model_rows, load_model, ModelIngestStats, ModelResponseRow, Variant, MASS_TOLERANCE};
pub use oor::{oor_summary, tag_oor, OorSummary};
pub use set::AgentResponses;
