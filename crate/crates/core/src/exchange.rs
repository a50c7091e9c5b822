//! The exchange graph `G(S)` of two matroids, queried through independence
//! oracles.
//!
//! Edges:
//! * `(s, v)` iff `S ∪ {v} ∈ I₁`
//! * `(v, t)` iff `S ∪ {v} ∈ I₂`
//! * `(u, v)` for `u ∈ S, v ∉ S` iff `S − u + v ∈ I₁`
//! * `(v, u)` for `v ∉ S, u ∈ S` iff `S − u + v ∈ I₂`

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::ledger::{QueryLedger, Stage};
use crate::matroid::{IndependenceOracle, PreparedOracle};
use crate::neighborhood::{in_edge, out_edge, EdgeAudit, NeighborhoodOracle, Vertex};
use crate::ElementId;

#[derive(Debug)]
pub struct ExchangeGraph {
    o1: IndependenceOracle,
    o2: IndependenceOracle,
    base: Vec<ElementId>,
    in_base: Vec<bool>,
    p1: PreparedOracle,
    p2: PreparedOracle,
}

impl ExchangeGraph {
    /// Exchange graph for `base`, which the caller guarantees is common
    /// independent. Only range and duplicates are checked here.
    pub fn new(
        o1: IndependenceOracle,
        o2: IndependenceOracle,
        base: Vec<ElementId>,
    ) -> Result<Self> {
        if o1.n() != o2.n() {
            return Err(Error::contract("oracles disagree on ground set size"));
        }
        let n = o1.n();
        let mut base = base;
        base.sort_unstable();
        let mut in_base = vec![false; n];
        for &e in &base {
            if e >= n {
                return Err(Error::ElementOutOfRange { element: e, n });
            }
            if in_base[e] {
                return Err(Error::contract(format!("element {e} repeated in base set")));
            }
            in_base[e] = true;
        }
        let p1 = o1.prepare(&base);
        let p2 = o2.prepare(&base);
        Ok(Self {
            o1,
            o2,
            base,
            in_base,
            p1,
            p2,
        })
    }

    /// Like [`ExchangeGraph::new`] but first confirms with two queries
    /// (tagged `other`) that `base` is common independent.
    pub fn checked(
        o1: IndependenceOracle,
        o2: IndependenceOracle,
        base: Vec<ElementId>,
    ) -> Result<Self> {
        let g = Self::new(o1, o2, base)?;
        let ok = g.o1.is_independent(&g.base, Stage::Other)?
            && g.o2.is_independent(&g.base, Stage::Other)?;
        if !ok {
            return Err(Error::BootstrapRejected);
        }
        Ok(g)
    }

    /// Current common independent set, sorted ascending.
    pub fn base(&self) -> &[ElementId] {
        &self.base
    }

    pub fn into_base(self) -> Vec<ElementId> {
        self.base
    }

    pub fn n(&self) -> usize {
        self.in_base.len()
    }

    pub fn oracles(&self) -> (&IndependenceOracle, &IndependenceOracle) {
        (&self.o1, &self.o2)
    }

    /// Replace `S` by `S △ V(p)`, then confirm the result is common
    /// independent with two queries tagged `other`.
    pub fn apply_augmenting_path(&mut self, p: &AugmentingPath) -> Result<()> {
        if !p.chordless {
            return Err(Error::contract(
                "augmenting path is not certified chordless",
            ));
        }
        check_path_shape(self, &p.vertices)?;
        for v in &p.vertices {
            if let Vertex::Elem(e) = *v {
                self.in_base[e] = !self.in_base[e];
            }
        }
        let next: Vec<ElementId> = (0..self.n()).filter(|&e| self.in_base[e]).collect();
        if next.len() != self.base.len() + 1 {
            return Err(Error::invariant(
                "apply_augmenting_path",
                format!("size went from {} to {}", self.base.len(), next.len()),
            ));
        }
        let ok = self.o1.is_independent(&next, Stage::Other)?
            && self.o2.is_independent(&next, Stage::Other)?;
        if !ok {
            return Err(Error::invariant(
                "apply_augmenting_path",
                format!(
                    "S △ V(p) is not common independent for path {:?}",
                    p.vertices
                ),
            ));
        }
        self.p1 = self.o1.prepare(&next);
        self.p2 = self.o2.prepare(&next);
        self.base = next;
        Ok(())
    }

    fn check_query(&self, v: ElementId, xs: &[ElementId]) -> Result<()> {
        let n = self.n();
        if v >= n {
            return Err(Error::ElementOutOfRange { element: v, n });
        }
        if self.in_base[v] {
            return Err(Error::contract(format!("query vertex {v} is in S")));
        }
        for &u in xs {
            if u >= n {
                return Err(Error::ElementOutOfRange { element: u, n });
            }
            if !self.in_base[u] {
                return Err(Error::contract(format!(
                    "query set element {u} is not in S"
                )));
            }
        }
        Ok(())
    }

    fn without(&self, u: ElementId) -> Vec<ElementId> {
        self.base.iter().copied().filter(|&x| x != u).collect()
    }
}

impl NeighborhoodOracle for ExchangeGraph {
    fn element_count(&self) -> usize {
        self.n()
    }

    fn in_base(&self, e: ElementId) -> bool {
        self.in_base[e]
    }

    fn exists_in_edge(
        &self,
        v: ElementId,
        xs: &[ElementId],
        with_source: bool,
        stage: Stage,
    ) -> Result<bool> {
        self.check_query(v, xs)?;
        if with_source && self.p1.query(&[], &[v], stage) {
            return Ok(true);
        }
        Ok(!xs.is_empty() && self.p1.query(xs, &[v], stage))
    }

    fn exists_out_edge(
        &self,
        v: ElementId,
        xs: &[ElementId],
        with_sink: bool,
        stage: Stage,
    ) -> Result<bool> {
        self.check_query(v, xs)?;
        if with_sink && self.p2.query(&[], &[v], stage) {
            return Ok(true);
        }
        Ok(!xs.is_empty() && self.p2.query(xs, &[v], stage))
    }

    fn ledger(&self) -> &QueryLedger {
        self.o1.ledger()
    }
}

impl EdgeAudit for ExchangeGraph {
    fn has_edge(&self, from: Vertex, to: Vertex) -> bool {
        let plus = |v: ElementId| {
            let mut set = self.base.clone();
            set.push(v);
            set
        };
        let swap = |u: ElementId, v: ElementId| {
            let mut set = self.without(u);
            set.push(v);
            set
        };
        match (from, to) {
            (Vertex::Source, Vertex::Elem(v)) => !self.in_base[v] && self.o1.peek(&plus(v)),
            (Vertex::Elem(v), Vertex::Sink) => !self.in_base[v] && self.o2.peek(&plus(v)),
            (Vertex::Elem(u), Vertex::Elem(v)) if self.in_base[u] && !self.in_base[v] => {
                self.o1.peek(&swap(u, v))
            }
            (Vertex::Elem(v), Vertex::Elem(u)) if !self.in_base[v] && self.in_base[u] => {
                self.o2.peek(&swap(u, v))
            }
            _ => false,
        }
    }
}

/// An `s → t` path in `G(S)` alternating between `S̄` and `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentingPath {
    pub vertices: Vec<Vertex>,
    pub chordless: bool,
}

impl AugmentingPath {
    /// Element vertices of the path, in order.
    pub fn elements(&self) -> Vec<ElementId> {
        self.vertices.iter().filter_map(|v| v.elem()).collect()
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() < 2
    }
}

/// `s, v₁, u₁, …, v_ℓ, t` with `vᵢ ∉ S`, `uᵢ ∈ S` and no repeats.
fn check_path_shape<N: NeighborhoodOracle + ?Sized>(g: &N, path: &[Vertex]) -> Result<()> {
    let len = path.len();
    if len < 3
        || len.is_multiple_of(2)
        || path[0] != Vertex::Source
        || path[len - 1] != Vertex::Sink
    {
        return Err(Error::contract(format!(
            "not an alternating s-t path: {path:?}"
        )));
    }
    let mut seen = HashSet::with_capacity(len);
    for (i, v) in path[1..len - 1].iter().enumerate() {
        let Vertex::Elem(e) = *v else {
            return Err(Error::contract(format!("s or t inside path: {path:?}")));
        };
        if e >= g.element_count() {
            return Err(Error::ElementOutOfRange {
                element: e,
                n: g.element_count(),
            });
        }
        // Offsets 0, 2, 4, ... are S̄ vertices.
        if g.in_base(e) != (i % 2 == 1) || !seen.insert(e) {
            return Err(Error::contract(format!(
                "path does not alternate S̄/S: {path:?}"
            )));
        }
    }
    Ok(())
}

/// Shortcut a valid `s → t` path until no vertex has an in-edge from a
/// non-adjacent earlier vertex or an out-edge to a non-adjacent later one.
///
/// Each `S̄` vertex gets one `in_edge` search over its earlier `S`-side
/// vertices (earliest first, `s` preferred) and one `out_edge` search over
/// its later ones (latest first, `t` preferred). Vertices skipped by a
/// shortcut are dropped for good, so the scan never revisits them.
pub fn make_chordless<N: NeighborhoodOracle + ?Sized>(
    g: &N,
    path: Vec<Vertex>,
) -> Result<AugmentingPath> {
    check_path_shape(g, &path)?;
    let stage = Stage::Postprocess;
    let mut p = path;
    let mut i = 1;
    while i + 1 < p.len() {
        let v = p[i].elem().expect("interior vertex");
        if i >= 3 {
            let earlier: Vec<ElementId> = p[1..i - 1]
                .iter()
                .filter_map(|x| x.elem())
                .filter(|&e| g.in_base(e))
                .collect();
            if let Some(u) = in_edge(g, v, &earlier, true, stage)? {
                let j = p[..i - 1]
                    .iter()
                    .position(|&x| x == u)
                    .expect("ancestor on path");
                p.drain(j + 1..i);
                i = j + 1;
            }
        }
        let last = p.len() - 1;
        if i + 2 < last {
            let later: Vec<ElementId> = p[i + 2..last]
                .iter()
                .rev()
                .filter_map(|x| x.elem())
                .filter(|&e| g.in_base(e))
                .collect();
            if let Some(w) = out_edge(g, v, &later, true, stage)? {
                let j = i
                    + 2
                    + p[i + 2..]
                        .iter()
                        .position(|&x| x == w)
                        .expect("descendant on path");
                p.drain(i + 1..j);
            }
        }
        i += 2;
    }
    Ok(AugmentingPath {
        vertices: p,
        chordless: true,
    })
}
