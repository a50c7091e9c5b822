//! The neighbourhood-query interface shared by exchange graphs and hidden
//! graphs, plus the binary searches built on it.
//!
//! Vertices split into a left side `S ∪ {s, t}` and a right side `S̄`. Only
//! right vertices can be asked about: "does `v` have an edge from / to some
//! vertex of `X`?" for a left set `X`.

use crate::error::Result;
use crate::ledger::{QueryLedger, Stage};
use crate::ElementId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Source,
    Elem(ElementId),
    Sink,
}

impl Vertex {
    /// Dense index: elements keep their id, `s = n`, `t = n + 1`.
    pub fn index(self, n: usize) -> usize {
        match self {
            Vertex::Elem(e) => e,
            Vertex::Source => n,
            Vertex::Sink => n + 1,
        }
    }

    pub fn from_index(i: usize, n: usize) -> Vertex {
        match i.cmp(&n) {
            std::cmp::Ordering::Less => Vertex::Elem(i),
            std::cmp::Ordering::Equal => Vertex::Source,
            std::cmp::Ordering::Greater => Vertex::Sink,
        }
    }

    pub fn elem(self) -> Option<ElementId> {
        match self {
            Vertex::Elem(e) => Some(e),
            _ => None,
        }
    }
}

pub trait NeighborhoodOracle {
    /// Number of element vertices; `s` and `t` come on top.
    fn element_count(&self) -> usize;

    /// Whether element `e` is on the left side (in `S`).
    fn in_base(&self, e: ElementId) -> bool;

    /// Is there an edge `(u, v)` with `u ∈ xs`, or `(s, v)` when
    /// `with_source`? `v` must be a right vertex and `xs ⊆ S`.
    fn exists_in_edge(
        &self,
        v: ElementId,
        xs: &[ElementId],
        with_source: bool,
        stage: Stage,
    ) -> Result<bool>;

    /// Is there an edge `(v, u)` with `u ∈ xs`, or `(v, t)` when `with_sink`?
    fn exists_out_edge(
        &self,
        v: ElementId,
        xs: &[ElementId],
        with_sink: bool,
        stage: Stage,
    ) -> Result<bool>;

    fn ledger(&self) -> &QueryLedger;
}

/// Uncharged edge lookups for invariant checks and ground truth.
pub trait EdgeAudit {
    fn has_edge(&self, from: Vertex, to: Vertex) -> bool;
}

/// Find an in-neighbour of `v` among `s` (if `with_source`) and `xs`.
///
/// `s` is tried first with a single query. Otherwise returns the first
/// element of `xs`, in the given order, that has an edge into `v`, using a
/// leftmost binary search over prefixes: at most `⌈log₂|xs|⌉ + 1` queries on
/// top of the one for `s`.
pub fn in_edge<N: NeighborhoodOracle + ?Sized>(
    g: &N,
    v: ElementId,
    xs: &[ElementId],
    with_source: bool,
    stage: Stage,
) -> Result<Option<Vertex>> {
    if with_source && g.exists_in_edge(v, &[], true, stage)? {
        return Ok(Some(Vertex::Source));
    }
    let found = leftmost(xs, |prefix| g.exists_in_edge(v, prefix, false, stage))?;
    Ok(found.map(Vertex::Elem))
}

/// Mirror of [`in_edge`]: `t` first, then the first `u ∈ xs` with `(v, u)`.
pub fn out_edge<N: NeighborhoodOracle + ?Sized>(
    g: &N,
    v: ElementId,
    xs: &[ElementId],
    with_sink: bool,
    stage: Stage,
) -> Result<Option<Vertex>> {
    if with_sink && g.exists_out_edge(v, &[], true, stage)? {
        return Ok(Some(Vertex::Sink));
    }
    let found = leftmost(xs, |prefix| g.exists_out_edge(v, prefix, false, stage))?;
    Ok(found.map(Vertex::Elem))
}

/// First element `x` of `xs` such that `hit(xs[..=i])` holds, given that
/// `hit` is monotone under taking longer prefixes.
fn leftmost(
    xs: &[ElementId],
    mut hit: impl FnMut(&[ElementId]) -> Result<bool>,
) -> Result<Option<ElementId>> {
    if xs.is_empty() || !hit(xs)? {
        return Ok(None);
    }
    // hit(xs[..lo]) is false, hit(xs[..hi]) is true.
    let (mut lo, mut hi) = (0, xs.len());
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if hit(&xs[..mid])? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(xs[hi - 1]))
}

/// Query budget of one [`in_edge`] / [`out_edge`] call over `|X|` candidates
/// (counting `s` or `t` as a candidate).
pub fn search_budget(x_len: usize) -> u64 {
    if x_len <= 1 {
        return 2;
    }
    (usize::BITS - (x_len - 1).leading_zeros()) as u64 + 2
}
