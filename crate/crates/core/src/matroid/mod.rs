//! Independence oracles and the concrete matroids behind them.

mod binary;
mod graphic;
mod partition;
mod uniform;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use binary::{BinaryLinearMatroid, BitColumn};
pub use graphic::{GraphicMatroid, UnionFind};
pub use partition::PartitionMatroid;
pub use uniform::UniformMatroid;

use crate::error::{Error, Result};
use crate::ledger::{MatroidId, QueryLedger, Stage};
use crate::ElementId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatroidKind {
    Uniform,
    Partition,
    Graphic,
    BinaryLinear,
    HiddenCustom,
}

/// A matroid given only through its independence test.
///
/// Implementations must be pure: the answer for a set never depends on
/// earlier calls.
pub trait Matroid: Send + Sync + fmt::Debug {
    fn ground_size(&self) -> usize;

    fn kind(&self) -> MatroidKind {
        MatroidKind::HiddenCustom
    }

    /// `set` holds distinct elements below `ground_size()`.
    fn is_independent(&self, set: &[ElementId]) -> bool;

    /// Precompute whatever makes queries of the form `(base \ R) ∪ A` cheap.
    ///
    /// Implementations without a specialised form return
    /// `Box::new(Materialized::new(self, base))`.
    fn prepare(self: Arc<Self>, base: &[ElementId]) -> Box<dyn PreparedBase>;
}

/// A matroid specialised to a fixed base set.
pub trait PreparedBase: Send + Sync {
    /// Independence of `(base \ removed) ∪ added`.
    ///
    /// `removed ⊆ base`, `added ∩ base = ∅`, and neither contains duplicates.
    fn is_independent_after(&self, removed: &[ElementId], added: &[ElementId]) -> bool;
}

/// Fallback prepared base: builds the queried set and asks the matroid.
pub struct Materialized<M: ?Sized> {
    matroid: Arc<M>,
    base: Vec<ElementId>,
}

impl<M: Matroid + ?Sized> Materialized<M> {
    pub fn new(matroid: Arc<M>, base: &[ElementId]) -> Self {
        Self {
            matroid,
            base: base.to_vec(),
        }
    }
}

impl<M: Matroid + ?Sized> PreparedBase for Materialized<M> {
    fn is_independent_after(&self, removed: &[ElementId], added: &[ElementId]) -> bool {
        let mut set = Vec::with_capacity(self.base.len() + added.len());
        if removed.is_empty() {
            set.extend_from_slice(&self.base);
        } else {
            let mut drop = vec![false; self.matroid.ground_size()];
            for &r in removed {
                drop[r] = true;
            }
            set.extend(self.base.iter().copied().filter(|&e| !drop[e]));
        }
        set.extend_from_slice(added);
        self.matroid.is_independent(&set)
    }
}

/// An independence oracle: a matroid plus the ledger every call is charged to.
#[derive(Clone)]
pub struct IndependenceOracle {
    matroid: Arc<dyn Matroid>,
    id: MatroidId,
    ledger: Arc<QueryLedger>,
}

impl fmt::Debug for IndependenceOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IndependenceOracle")
            .field("id", &self.id)
            .field("kind", &self.matroid.kind())
            .field("n", &self.matroid.ground_size())
            .finish()
    }
}

impl IndependenceOracle {
    pub fn new(matroid: Arc<dyn Matroid>, id: MatroidId, ledger: Arc<QueryLedger>) -> Self {
        Self {
            matroid,
            id,
            ledger,
        }
    }

    /// Two oracles over the same ground set sharing one fresh ledger.
    pub fn pair(m1: Arc<dyn Matroid>, m2: Arc<dyn Matroid>) -> Result<(Self, Self)> {
        if m1.ground_size() != m2.ground_size() {
            return Err(Error::contract(format!(
                "matroids have different ground sets ({} vs {})",
                m1.ground_size(),
                m2.ground_size()
            )));
        }
        let ledger = Arc::new(QueryLedger::new());
        Ok((
            Self::new(m1, MatroidId::First, ledger.clone()),
            Self::new(m2, MatroidId::Second, ledger),
        ))
    }

    pub fn n(&self) -> usize {
        self.matroid.ground_size()
    }

    pub fn id(&self) -> MatroidId {
        self.id
    }

    pub fn kind(&self) -> MatroidKind {
        self.matroid.kind()
    }

    pub fn ledger(&self) -> &Arc<QueryLedger> {
        &self.ledger
    }

    pub fn matroid(&self) -> &Arc<dyn Matroid> {
        &self.matroid
    }

    /// "Is `set` independent?", charged to `stage`.
    pub fn is_independent(&self, set: &[ElementId], stage: Stage) -> Result<bool> {
        self.validate(set)?;
        self.ledger.record(self.id, stage);
        Ok(self.matroid.is_independent(set))
    }

    /// Untagged query; lands in [`Stage::Other`].
    pub fn query(&self, set: &[ElementId]) -> Result<bool> {
        self.is_independent(set, Stage::Other)
    }

    /// Answer without touching the ledger. Only for ground-truth checks in
    /// tests and audits, never for solver decisions.
    pub fn peek(&self, set: &[ElementId]) -> bool {
        self.matroid.is_independent(set)
    }

    pub fn prepare(&self, base: &[ElementId]) -> PreparedOracle {
        PreparedOracle {
            inner: self.matroid.clone().prepare(base),
            id: self.id,
            ledger: self.ledger.clone(),
        }
    }

    fn validate(&self, set: &[ElementId]) -> Result<()> {
        let n = self.n();
        if let Some(&bad) = set.iter().find(|&&e| e >= n) {
            return Err(Error::ElementOutOfRange { element: bad, n });
        }
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::contract("query set contains duplicate elements"));
        }
        Ok(())
    }
}

/// An oracle bound to a base set; each call is one ledger increment.
pub struct PreparedOracle {
    inner: Box<dyn PreparedBase>,
    id: MatroidId,
    ledger: Arc<QueryLedger>,
}

impl PreparedOracle {
    pub fn query(&self, removed: &[ElementId], added: &[ElementId], stage: Stage) -> bool {
        self.ledger.record(self.id, stage);
        self.inner.is_independent_after(removed, added)
    }
}

impl fmt::Debug for PreparedOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PreparedOracle")
            .field("id", &self.id)
            .finish()
    }
}
