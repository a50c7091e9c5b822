//! Shortest-augmenting-path baselines: layered BFS over the exchange graph,
//! the exact algorithm built on it, and its distance-bounded variant.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exchange::{make_chordless, ExchangeGraph};
use crate::ledger::Stage;
use crate::matroid::IndependenceOracle;
use crate::neighborhood::{out_edge, NeighborhoodOracle, Vertex};
use crate::reference::greedy_maximal_common;
use crate::ElementId;

/// BFS layers `L₀ = {s}, L₁, …` from `s`. Odd layers hold right vertices,
/// even layers left vertices; building stops once `t` is reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredBfs {
    n: usize,
    dist: Vec<Option<usize>>,
    layers: Vec<Vec<Vertex>>,
}

impl LayeredBfs {
    pub fn dist(&self, v: Vertex) -> Option<usize> {
        self.dist[v.index(self.n)]
    }

    pub fn st_distance(&self) -> Option<usize> {
        self.dist(Vertex::Sink)
    }

    pub fn layers(&self) -> &[Vec<Vertex>] {
        &self.layers
    }

    fn elems(&self, level: usize) -> Vec<ElementId> {
        self.layers
            .get(level)
            .map(|l| l.iter().filter_map(|v| v.elem()).collect())
            .unwrap_or_default()
    }
}

pub fn bfs_layering<N: NeighborhoodOracle + ?Sized>(g: &N) -> Result<LayeredBfs> {
    let n = g.element_count();
    let stage = Stage::BfsLayering;
    let mut dist = vec![None; n + 2];
    dist[Vertex::Source.index(n)] = Some(0);
    let mut layers = vec![vec![Vertex::Source]];
    let mut open_right: Vec<ElementId> = (0..n).filter(|&e| !g.in_base(e)).collect();
    let mut open_left: Vec<ElementId> = (0..n).filter(|&e| g.in_base(e)).collect();
    loop {
        let level = layers.len();
        let prev: Vec<ElementId> = layers[level - 1].iter().filter_map(|v| v.elem()).collect();
        let mut right = Vec::new();
        for &v in &open_right {
            let hit = if level == 1 {
                g.exists_in_edge(v, &[], true, stage)?
            } else {
                g.exists_in_edge(v, &prev, false, stage)?
            };
            if hit {
                right.push(v);
            }
        }
        if right.is_empty() {
            break;
        }
        open_right.retain(|v| !right.contains(v));
        for &v in &right {
            dist[v] = Some(level);
        }
        layers.push(right.iter().map(|&v| Vertex::Elem(v)).collect());

        let mut left = Vec::new();
        let mut sink = false;
        for &v in &right {
            while let Some(u) = out_edge(g, v, &open_left, !sink, stage)? {
                match u {
                    Vertex::Sink => sink = true,
                    Vertex::Elem(u) => {
                        open_left.retain(|&x| x != u);
                        left.push(u);
                    }
                    Vertex::Source => unreachable!(),
                }
                if sink {
                    break;
                }
            }
            if sink {
                break;
            }
        }
        if sink {
            dist[Vertex::Sink.index(n)] = Some(level + 1);
            layers.push(vec![Vertex::Sink]);
            break;
        }
        if left.is_empty() {
            break;
        }
        left.sort_unstable();
        for &u in &left {
            dist[u] = Some(level + 1);
        }
        layers.push(left.into_iter().map(Vertex::Elem).collect());
    }
    Ok(LayeredBfs { n, dist, layers })
}

/// Depth-first search for an `s → t` path that advances one layer per step,
/// trying lower element ids first and retreating from dead ends.
pub fn shortest_path<N: NeighborhoodOracle + ?Sized>(
    g: &N,
    layering: &LayeredBfs,
) -> Result<Vec<Vertex>> {
    let stage = Stage::ClassicAugment;
    let d = layering
        .st_distance()
        .ok_or_else(|| Error::contract("layering does not reach t"))?;
    let mut dead: HashSet<Vertex> = HashSet::new();
    let mut path = vec![Vertex::Source];
    while let Some(&cur) = path.last() {
        let level = path.len() - 1;
        if cur == Vertex::Sink {
            return Ok(path);
        }
        let next = match cur {
            Vertex::Source => layering.layers[1]
                .iter()
                .copied()
                .find(|v| !dead.contains(v)),
            Vertex::Elem(v) if !g.in_base(v) => {
                if level + 1 == d {
                    g.exists_out_edge(v, &[], true, stage)?
                        .then_some(Vertex::Sink)
                } else {
                    let cands: Vec<ElementId> = layering
                        .elems(level + 1)
                        .into_iter()
                        .filter(|&u| !dead.contains(&Vertex::Elem(u)))
                        .collect();
                    out_edge(g, v, &cands, false, stage)?
                }
            }
            Vertex::Elem(u) => {
                let mut found = None;
                for w in layering.elems(level + 1) {
                    if !dead.contains(&Vertex::Elem(w))
                        && g.exists_in_edge(w, &[u], false, stage)?
                    {
                        found = Some(Vertex::Elem(w));
                        break;
                    }
                }
                found
            }
            Vertex::Sink => unreachable!(),
        };
        match next {
            Some(v) => path.push(v),
            None => {
                dead.insert(cur);
                path.pop();
            }
        }
    }
    Err(Error::invariant(
        "shortest_path",
        "layering reaches t but no layered path exists",
    ))
}

/// Augment `g` once along a shortest path. The path is run through
/// [`make_chordless`] as a check; a shortest path must come back unchanged.
fn augment_shortest(g: &mut ExchangeGraph, layering: &LayeredBfs) -> Result<()> {
    let route = shortest_path(g, layering)?;
    let path = make_chordless(g, route.clone())?;
    if path.vertices != route {
        return Err(Error::invariant(
            "shortest_path",
            format!("shortest path {route:?} had a chord"),
        ));
    }
    g.apply_augmenting_path(&path)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaiveResult {
    pub set: Vec<ElementId>,
    pub augmentations: usize,
}

/// Exact maximum common independent set: greedy start, then one shortest
/// augmenting path per fresh layering until `t` is unreachable.
pub fn naive_exact(o1: &IndependenceOracle, o2: &IndependenceOracle) -> Result<NaiveResult> {
    let start = greedy_maximal_common(o1, o2)?;
    let mut g = ExchangeGraph::new(o1.clone(), o2.clone(), start)?;
    let mut augmentations = 0;
    loop {
        let layering = bfs_layering(&g)?;
        if layering.st_distance().is_none() {
            break;
        }
        augment_shortest(&mut g, &layering)?;
        augmentations += 1;
    }
    Ok(NaiveResult {
        set: g.into_base(),
        augmentations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CunninghamOutcome {
    /// `t` became unreachable, so the set is maximum.
    pub maximum: bool,
    /// `s → t` distance of every layering that reached `t`, in order.
    pub distances: Vec<usize>,
    pub augmentations: usize,
}

/// Augment along shortest paths while the `s → t` distance is at most
/// `d_max`. On return either the set is maximum or the distance exceeds
/// `d_max`.
pub fn cunningham_until(g: &mut ExchangeGraph, d_max: usize) -> Result<CunninghamOutcome> {
    if d_max == 0 {
        return Err(Error::contract("d_max must be at least 1"));
    }
    let mut out = CunninghamOutcome {
        maximum: false,
        distances: Vec::new(),
        augmentations: 0,
    };
    loop {
        let layering = bfs_layering(g)?;
        let Some(d) = layering.st_distance() else {
            out.maximum = true;
            return Ok(out);
        };
        if let Some(&last) = out.distances.last() {
            if d < last {
                return Err(Error::invariant(
                    "cunningham_until",
                    format!("s-t distance dropped from {last} to {d}"),
                ));
            }
        }
        out.distances.push(d);
        if d > d_max {
            return Ok(out);
        }
        augment_shortest(g, &layering)?;
        out.augmentations += 1;
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::matroid::{PartitionMatroid, UniformMatroid};

    fn oracles(
        m1: impl crate::matroid::Matroid + 'static,
        m2: impl crate::matroid::Matroid + 'static,
    ) -> (IndependenceOracle, IndependenceOracle) {
        IndependenceOracle::pair(Arc::new(m1), Arc::new(m2)).unwrap()
    }

    #[test]
    fn empty_base_distance_two() {
        let (o1, o2) = oracles(UniformMatroid::new(3, 1), UniformMatroid::new(3, 1));
        let g = ExchangeGraph::new(o1, o2, vec![]).unwrap();
        let lay = bfs_layering(&g).unwrap();
        assert_eq!(lay.st_distance(), Some(2));
    }

    #[test]
    fn maximum_base_never_reaches_t() {
        let (o1, o2) = oracles(UniformMatroid::new(3, 1), UniformMatroid::new(3, 1));
        let g = ExchangeGraph::new(o1, o2, vec![2]).unwrap();
        assert_eq!(bfs_layering(&g).unwrap().st_distance(), None);
    }

    #[test]
    fn identical_partitions_give_rank() {
        let m =
            PartitionMatroid::new(7, &[vec![0, 1, 2], vec![3], vec![4, 5, 6]], &[2, 0, 5]).unwrap();
        let (o1, o2) = oracles(m.clone(), m);
        assert_eq!(naive_exact(&o1, &o2).unwrap().set.len(), 5);
    }

    #[test]
    fn crossing_matching_needs_a_long_path() {
        // Cells (r0,c0)=0, (r0,c1)=1, (r1,c0)=2. Greedy takes 0 and is
        // stuck; the optimum {1, 2} needs the path s, 2, 0, 1, t.
        let rows = PartitionMatroid::new(3, &[vec![0, 1], vec![2]], &[1, 1]).unwrap();
        let cols = PartitionMatroid::new(3, &[vec![0, 2], vec![1]], &[1, 1]).unwrap();
        let (o1, o2) = oracles(rows, cols);
        let res = naive_exact(&o1, &o2).unwrap();
        assert_eq!(res.set, vec![1, 2]);
        assert_eq!(res.augmentations, 1);
    }

    #[test]
    fn cunningham_stops_at_distance_bound() {
        let rows = PartitionMatroid::new(3, &[vec![0, 1], vec![2]], &[1, 1]).unwrap();
        let cols = PartitionMatroid::new(3, &[vec![0, 2], vec![1]], &[1, 1]).unwrap();
        let (o1, o2) = oracles(rows, cols);
        let mut g = ExchangeGraph::new(o1.clone(), o2.clone(), vec![0]).unwrap();
        let out = cunningham_until(&mut g, 2).unwrap();
        assert!(!out.maximum);
        assert_eq!(out.distances, vec![4]);
        assert_eq!(g.base(), &[0]);
        let mut g = ExchangeGraph::new(o1, o2, vec![0]).unwrap();
        let out = cunningham_until(&mut g, 4).unwrap();
        assert!(out.maximum);
        assert_eq!(g.base(), &[1, 2]);
        assert!(cunningham_until(&mut g, 0).is_err());
    }
}
