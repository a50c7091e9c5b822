//! Reference procedures: the greedy ½-approximation and exhaustive search.

use crate::classic;
use crate::error::{Error, Result};
use crate::ledger::Stage;
use crate::matroid::IndependenceOracle;
use crate::ElementId;

/// Largest ground set the exhaustive search accepts.
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Scan elements in index order, keeping each one that leaves the set
/// independent in both matroids. The result is maximal, hence at least half
/// the optimum. Uses at most 2n queries.
pub fn greedy_maximal_common(
    o1: &IndependenceOracle,
    o2: &IndependenceOracle,
) -> Result<Vec<ElementId>> {
    check_same_ground(o1, o2)?;
    let mut set = Vec::new();
    for v in 0..o1.n() {
        set.push(v);
        let keep =
            o1.is_independent(&set, Stage::Greedy)? && o2.is_independent(&set, Stage::Greedy)?;
        if !keep {
            set.pop();
        }
    }
    Ok(set)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BruteForceMode {
    /// Enumerate; refuse ground sets above [`BRUTE_FORCE_LIMIT`].
    Exhaustive,
    /// Enumerate when small enough, otherwise defer to the exact
    /// augmenting-path algorithm.
    Auto,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForceResult {
    pub size: usize,
    pub witness: Vec<ElementId>,
}

/// Exact maximum common independent set by enumeration.
///
/// Walks the family of common independent sets depth-first; by downward
/// closure every common independent set is reached, so nothing is missed.
pub fn brute_force_max_common(
    o1: &IndependenceOracle,
    o2: &IndependenceOracle,
    mode: BruteForceMode,
) -> Result<BruteForceResult> {
    check_same_ground(o1, o2)?;
    let n = o1.n();
    if n > BRUTE_FORCE_LIMIT {
        return match mode {
            BruteForceMode::Exhaustive => Err(Error::BruteForceTooLarge {
                n,
                limit: BRUTE_FORCE_LIMIT,
            }),
            BruteForceMode::Auto => {
                let witness = classic::naive_exact(o1, o2)?.set;
                Ok(BruteForceResult {
                    size: witness.len(),
                    witness,
                })
            }
        };
    }
    let mut best = Vec::new();
    let mut current = Vec::new();
    extend(o1, o2, 0, &mut current, &mut best)?;
    Ok(BruteForceResult {
        size: best.len(),
        witness: best,
    })
}

fn extend(
    o1: &IndependenceOracle,
    o2: &IndependenceOracle,
    start: usize,
    current: &mut Vec<ElementId>,
    best: &mut Vec<ElementId>,
) -> Result<()> {
    if current.len() > best.len() {
        best.clone_from(current);
    }
    let n = o1.n();
    for e in start..n {
        if current.len() + (n - e) <= best.len() {
            break;
        }
        current.push(e);
        if o1.is_independent(current, Stage::Other)? && o2.is_independent(current, Stage::Other)? {
            extend(o1, o2, e + 1, current, best)?;
        }
        current.pop();
    }
    Ok(())
}

fn check_same_ground(o1: &IndependenceOracle, o2: &IndependenceOracle) -> Result<()> {
    if o1.n() != o2.n() {
        return Err(Error::contract(format!(
            "oracles disagree on ground set size ({} vs {})",
            o1.n(),
            o2.n()
        )));
    }
    Ok(())
}
