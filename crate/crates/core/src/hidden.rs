//! Explicitly stored bipartite digraphs behind the neighbourhood-query
//! interface, for testing the reachability search without matroids.
//!
//! Dump format, one item per line (`#` starts a comment):
//!
//! ```text
//! n 6
//! base 1 3
//! edge s 0
//! edge 0 1
//! edge 1 2
//! edge 2 t
//! ```

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::ledger::{MatroidId, QueryLedger, Stage};
use crate::neighborhood::{EdgeAudit, NeighborhoodOracle, Vertex};
use crate::rng::seeded;
use crate::ElementId;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize, on: bool) {
        if on {
            self.0[i / 64] |= 1 << (i % 64);
        } else {
            self.0[i / 64] &= !(1 << (i % 64));
        }
    }
}

/// Stored adjacency of a right vertex `v ∈ S̄`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct RightVertex {
    from_source: bool,
    to_sink: bool,
    from_left: Bits,
    to_left: Bits,
}

/// A bipartite digraph between `S ∪ {s, t}` and `S̄` whose edges are only
/// visible through set queries. In-neighbour probes are charged to
/// [`MatroidId::First`] and out-neighbour probes to [`MatroidId::Second`].
#[derive(Debug)]
pub struct HiddenGraph {
    n: usize,
    in_base: Vec<bool>,
    right: Vec<Option<RightVertex>>,
    ledger: QueryLedger,
}

impl HiddenGraph {
    /// Edgeless graph on elements `0..n` with left side `base`.
    pub fn new(n: usize, base: &[ElementId]) -> Result<Self> {
        let mut in_base = vec![false; n];
        for &e in base {
            if e >= n {
                return Err(Error::ElementOutOfRange { element: e, n });
            }
            in_base[e] = true;
        }
        let right = (0..n)
            .map(|e| {
                (!in_base[e]).then(|| RightVertex {
                    from_source: false,
                    to_sink: false,
                    from_left: Bits::new(n),
                    to_left: Bits::new(n),
                })
            })
            .collect();
        Ok(Self {
            n,
            in_base,
            right,
            ledger: QueryLedger::new(),
        })
    }

    /// Insert edge `from → to`. Exactly one endpoint must be a right vertex;
    /// `s` only has out-edges and `t` only in-edges.
    pub fn add_edge(&mut self, from: Vertex, to: Vertex) -> Result<()> {
        self.set_edge(from, to, true)
    }

    pub fn remove_edge(&mut self, from: Vertex, to: Vertex) -> Result<()> {
        self.set_edge(from, to, false)
    }

    fn set_edge(&mut self, from: Vertex, to: Vertex, on: bool) -> Result<()> {
        let bad = || {
            Error::contract(format!(
                "{from:?} -> {to:?} is not an edge between the two sides"
            ))
        };
        for v in [from, to] {
            if let Vertex::Elem(e) = v {
                if e >= self.n {
                    return Err(Error::ElementOutOfRange {
                        element: e,
                        n: self.n,
                    });
                }
            }
        }
        match (from, to) {
            (Vertex::Source, Vertex::Elem(v)) if !self.in_base[v] => self.rv(v).from_source = on,
            (Vertex::Elem(v), Vertex::Sink) if !self.in_base[v] => self.rv(v).to_sink = on,
            (Vertex::Elem(u), Vertex::Elem(v)) if self.in_base[u] && !self.in_base[v] => {
                self.rv(v).from_left.set(u, on)
            }
            (Vertex::Elem(v), Vertex::Elem(u)) if !self.in_base[v] && self.in_base[u] => {
                self.rv(v).to_left.set(u, on)
            }
            _ => return Err(bad()),
        }
        Ok(())
    }

    fn rv(&mut self, v: ElementId) -> &mut RightVertex {
        self.right[v].as_mut().expect("right vertex")
    }

    fn right_vertex(&self, v: ElementId) -> Result<&RightVertex> {
        if v >= self.n {
            return Err(Error::ElementOutOfRange {
                element: v,
                n: self.n,
            });
        }
        self.right[v]
            .as_ref()
            .ok_or_else(|| Error::contract(format!("query vertex {v} is on the left side")))
    }

    fn check_left(&self, xs: &[ElementId]) -> Result<()> {
        match xs.iter().find(|&&u| u >= self.n || !self.in_base[u]) {
            Some(&u) if u >= self.n => Err(Error::ElementOutOfRange {
                element: u,
                n: self.n,
            }),
            Some(&u) => Err(Error::contract(format!(
                "query set element {u} is on the right side"
            ))),
            None => Ok(()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> Vec<ElementId> {
        (0..self.n).filter(|&e| self.in_base[e]).collect()
    }

    /// Number of neighbourhood queries answered so far.
    pub fn probes(&self) -> u64 {
        self.ledger.total()
    }

    /// All edges, in a fixed order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for (v, rv) in self.right.iter().enumerate() {
            let Some(rv) = rv else { continue };
            let vv = Vertex::Elem(v);
            if rv.from_source {
                out.push((Vertex::Source, vv));
            }
            for u in 0..self.n {
                if self.in_base[u] && rv.from_left.get(u) {
                    out.push((Vertex::Elem(u), vv));
                }
            }
            for u in 0..self.n {
                if self.in_base[u] && rv.to_left.get(u) {
                    out.push((vv, Vertex::Elem(u)));
                }
            }
            if rv.to_sink {
                out.push((vv, Vertex::Sink));
            }
        }
        out
    }

    /// Vertices reachable from `s`, indexed by [`Vertex::index`], with BFS
    /// distances.
    fn distances(&self) -> Vec<Option<usize>> {
        let n = self.n;
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n + 2];
        for (a, b) in self.edges() {
            adj[a.index(n)].push(b.index(n));
        }
        let mut dist = vec![None; n + 2];
        let start = Vertex::Source.index(n);
        dist[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let d = dist[i].unwrap_or(0);
            for &j in &adj[i] {
                if dist[j].is_none() {
                    dist[j] = Some(d + 1);
                    queue.push_back(j);
                }
            }
        }
        dist
    }

    pub fn dump(&self) -> String {
        let mut out = String::new();
        let name = |v: Vertex| match v {
            Vertex::Source => "s".to_string(),
            Vertex::Sink => "t".to_string(),
            Vertex::Elem(e) => e.to_string(),
        };
        writeln!(out, "n {}", self.n).unwrap();
        let base: Vec<String> = self.base().iter().map(|e| e.to_string()).collect();
        writeln!(out, "base {}", base.join(" ")).unwrap();
        for (a, b) in self.edges() {
            writeln!(out, "edge {} {}", name(a), name(b)).unwrap();
        }
        out
    }

    pub fn load(text: &str) -> Result<Self> {
        let mut n = None;
        let mut graph: Option<HiddenGraph> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |detail: String| Error::GraphFormat { line, detail };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut parts = content.split_whitespace();
            let key = parts.next().unwrap_or("");
            let args: Vec<&str> = parts.collect();
            let number = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| err(format!("`{s}` is not a number")))
            };
            match key {
                "n" if n.is_none() && args.len() == 1 => n = Some(number(args[0])?),
                "base" if graph.is_none() => {
                    let size = n.ok_or_else(|| err("`base` before `n`".into()))?;
                    let base = args.iter().map(|a| number(a)).collect::<Result<Vec<_>>>()?;
                    graph = Some(HiddenGraph::new(size, &base).map_err(|e| err(e.to_string()))?);
                }
                "edge" if args.len() == 2 => {
                    let g = graph
                        .as_mut()
                        .ok_or_else(|| err("`edge` before `base`".into()))?;
                    let vertex = |s: &str| -> Result<Vertex> {
                        match s {
                            "s" => Ok(Vertex::Source),
                            "t" => Ok(Vertex::Sink),
                            _ => Ok(Vertex::Elem(number(s)?)),
                        }
                    };
                    let (a, b) = (vertex(args[0])?, vertex(args[1])?);
                    g.add_edge(a, b).map_err(|e| err(e.to_string()))?;
                }
                _ => return Err(err(format!("unexpected line `{content}`"))),
            }
        }
        graph.ok_or(Error::GraphFormat {
            line: 0,
            detail: "missing `n` or `base` line".into(),
        })
    }
}

impl NeighborhoodOracle for HiddenGraph {
    fn element_count(&self) -> usize {
        self.n
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
        let rv = self.right_vertex(v)?;
        self.check_left(xs)?;
        if xs.is_empty() && !with_source {
            return Ok(false);
        }
        self.ledger.record(MatroidId::First, stage);
        Ok((with_source && rv.from_source) || xs.iter().any(|&u| rv.from_left.get(u)))
    }

    fn exists_out_edge(
        &self,
        v: ElementId,
        xs: &[ElementId],
        with_sink: bool,
        stage: Stage,
    ) -> Result<bool> {
        let rv = self.right_vertex(v)?;
        self.check_left(xs)?;
        if xs.is_empty() && !with_sink {
            return Ok(false);
        }
        self.ledger.record(MatroidId::Second, stage);
        Ok((with_sink && rv.to_sink) || xs.iter().any(|&u| rv.to_left.get(u)))
    }

    fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }
}

impl EdgeAudit for HiddenGraph {
    fn has_edge(&self, from: Vertex, to: Vertex) -> bool {
        let right = |v: ElementId| self.right.get(v).and_then(|r| r.as_ref());
        let left = |u: ElementId| u < self.n && self.in_base[u];
        match (from, to) {
            (Vertex::Source, Vertex::Elem(v)) => right(v).is_some_and(|r| r.from_source),
            (Vertex::Elem(v), Vertex::Sink) => right(v).is_some_and(|r| r.to_sink),
            (Vertex::Elem(a), Vertex::Elem(b)) => {
                if left(a) {
                    right(b).is_some_and(|r| r.from_left.get(a))
                } else {
                    left(b) && right(a).is_some_and(|r| r.to_left.get(b))
                }
            }
            _ => false,
        }
    }
}

/// Shapes of generated hidden graphs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HiddenKind {
    /// Every admissible edge present independently with probability `p`.
    RandomGnp { p: f64 },
    /// A planted `s → t` path of `depth` edges plus noise edges that never
    /// shorten it. `depth` must be even and at most `n + 1`.
    LayeredPath { depth: usize },
    /// A Hamiltonian-like `s → t` path where every right vertex also has
    /// many backward edges, so most vertices look heavy.
    AdversarialLongPath,
    /// Random edges with every `t`-edge from an `s`-reachable vertex removed.
    NoStPath,
}

impl HiddenKind {
    pub fn name(self) -> &'static str {
        match self {
            HiddenKind::RandomGnp { .. } => "random_gnp",
            HiddenKind::LayeredPath { .. } => "layered_path",
            HiddenKind::AdversarialLongPath => "adversarial_long_path",
            HiddenKind::NoStPath => "no_st_path",
        }
    }

    /// Largest even depth a graph on `n` elements can carry.
    pub fn max_depth(n: usize) -> usize {
        2 * n.div_ceil(2)
    }
}

/// Deterministic in `(kind, n, seed)`.
pub fn generate_hidden(kind: HiddenKind, n: usize, seed: u64) -> Result<HiddenGraph> {
    if n < 2 {
        return Err(Error::contract("hidden graphs need n >= 2"));
    }
    let mut rng = seeded(seed ^ 0x6869_6464_656e_0000 ^ kind_salt(kind));
    match kind {
        HiddenKind::RandomGnp { p } => {
            let mut order: Vec<ElementId> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut g = HiddenGraph::new(n, &order[..n / 2])?;
            sprinkle(&mut g, p, &mut rng, |_, _| true)?;
            Ok(g)
        }
        HiddenKind::NoStPath => {
            let mut order: Vec<ElementId> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut g = HiddenGraph::new(n, &order[..n / 2])?;
            let p = (3.0 / n as f64).min(0.5);
            sprinkle(&mut g, p, &mut rng, |_, _| true)?;
            let dist = g.distances();
            for (v, d) in dist.iter().enumerate().take(n) {
                if d.is_some() && !g.in_base[v] {
                    g.remove_edge(Vertex::Elem(v), Vertex::Sink)?;
                }
            }
            Ok(g)
        }
        HiddenKind::LayeredPath { depth } => layered(n, depth, &mut rng),
        HiddenKind::AdversarialLongPath => adversarial(n, &mut rng),
    }
}

fn kind_salt(kind: HiddenKind) -> u64 {
    match kind {
        HiddenKind::RandomGnp { p } => 1 ^ p.to_bits().rotate_left(17),
        HiddenKind::LayeredPath { depth } => 2 ^ (depth as u64).rotate_left(29),
        HiddenKind::AdversarialLongPath => 3,
        HiddenKind::NoStPath => 4,
    }
}

/// Add each admissible edge `a → b` with probability `p` when `allow(a, b)`.
fn sprinkle(
    g: &mut HiddenGraph,
    p: f64,
    rng: &mut impl Rng,
    allow: impl Fn(Vertex, Vertex) -> bool,
) -> Result<()> {
    let n = g.n;
    let p = p.clamp(0.0, 1.0);
    let lefts: Vec<Vertex> = std::iter::once(Vertex::Source)
        .chain((0..n).filter(|&e| g.in_base[e]).map(Vertex::Elem))
        .collect();
    let rights: Vec<ElementId> = (0..n).filter(|&e| !g.in_base[e]).collect();
    for &v in &rights {
        let vv = Vertex::Elem(v);
        for &u in &lefts {
            if allow(u, vv) && rng.gen_bool(p) {
                g.add_edge(u, vv)?;
            }
            if let Vertex::Elem(_) = u {
                if allow(vv, u) && rng.gen_bool(p) {
                    g.add_edge(vv, u)?;
                }
            }
        }
        if allow(vv, Vertex::Sink) && rng.gen_bool(p) {
            g.add_edge(vv, Vertex::Sink)?;
        }
    }
    Ok(())
}

fn layered(n: usize, depth: usize, rng: &mut impl Rng) -> Result<HiddenGraph> {
    if depth < 2 || depth % 2 == 1 || depth > HiddenKind::max_depth(n) {
        return Err(Error::contract(format!(
            "layered_path depth {depth} must be even, >= 2 and <= {}",
            HiddenKind::max_depth(n)
        )));
    }
    // Spine s, v1, u1, ..., v_k, t uses k right and k-1 left elements.
    let k = depth / 2;
    let mut order: Vec<ElementId> = (0..n).collect();
    order.shuffle(rng);
    let spine = &order[..2 * k - 1];
    let extra = &order[2 * k - 1..];
    // Extra elements get random levels; left elements sit on even levels,
    // right elements on odd ones.
    let mut level = vec![0usize; n + 2];
    let mut base = Vec::new();
    for (i, &e) in spine.iter().enumerate() {
        level[e] = i + 1;
        if i % 2 == 1 {
            base.push(e);
        }
    }
    for &e in extra {
        if rng.gen_bool(0.5) {
            base.push(e);
            level[e] = 2 * rng.gen_range(1..=k.max(1));
        } else {
            level[e] = 2 * rng.gen_range(0..k) + 1;
        }
    }
    level[n] = 0;
    level[n + 1] = depth;
    let mut g = HiddenGraph::new(n, &base)?;
    let mut prev = Vertex::Source;
    for &e in spine {
        g.add_edge(prev, Vertex::Elem(e))?;
        prev = Vertex::Elem(e);
    }
    g.add_edge(prev, Vertex::Sink)?;
    let p = (4.0 / n as f64).min(0.5);
    sprinkle(&mut g, p, rng, |a, b| {
        level[b.index(n)] <= level[a.index(n)] + 1
    })?;
    Ok(g)
}

fn adversarial(n: usize, rng: &mut impl Rng) -> Result<HiddenGraph> {
    let k = n.div_ceil(2);
    let mut order: Vec<ElementId> = (0..n).collect();
    order.shuffle(rng);
    let spine = &order[..2 * k - 1];
    let rights: Vec<ElementId> = spine.iter().step_by(2).copied().collect();
    let lefts: Vec<ElementId> = spine.iter().skip(1).step_by(2).copied().collect();
    let mut base = lefts.clone();
    if n > spine.len() {
        base.push(order[n - 1]);
    }
    let mut g = HiddenGraph::new(n, &base)?;
    let mut prev = Vertex::Source;
    for &e in spine {
        g.add_edge(prev, Vertex::Elem(e))?;
        prev = Vertex::Elem(e);
    }
    g.add_edge(prev, Vertex::Sink)?;
    // Right vertex i points back to every earlier left vertex and is entered
    // from every later one; neither creates a shortcut towards t.
    for (i, &v) in rights.iter().enumerate() {
        for (j, &u) in lefts.iter().enumerate() {
            if j < i {
                g.add_edge(Vertex::Elem(v), Vertex::Elem(u))?;
            } else if j >= i {
                g.add_edge(Vertex::Elem(u), Vertex::Elem(v))?;
            }
        }
    }
    Ok(g)
}

/// Plain BFS over the stored edges: whether `t` is reachable from `s`, and
/// the distance if so. Does not touch the probe counter.
pub fn reference_reachability(g: &HiddenGraph) -> (bool, Option<usize>) {
    let d = g.distances()[Vertex::Sink.index(g.n)];
    (d.is_some(), d)
}
