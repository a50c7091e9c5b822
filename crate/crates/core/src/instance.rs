//! Serializable matroid descriptions, the instance file format, and the
//! seeded instance generators.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matroid::{
    BinaryLinearMatroid, BitColumn, GraphicMatroid, IndependenceOracle, Matroid, PartitionMatroid,
    UniformMatroid,
};
use crate::rng::seeded;
use crate::ElementId;

/// One matroid of an instance file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatroidInstance {
    Uniform {
        k: usize,
    },
    Partition {
        blocks: Vec<Vec<ElementId>>,
        caps: Vec<usize>,
    },
    Graphic {
        vertices: usize,
        edges: Vec<[usize; 2]>,
    },
    BinaryLinear {
        dim: usize,
        columns: Vec<String>,
    },
}

impl MatroidInstance {
    pub fn build(&self, n: usize) -> Result<Arc<dyn Matroid>> {
        Ok(match self {
            MatroidInstance::Uniform { k } => Arc::new(UniformMatroid::new(n, *k)),
            MatroidInstance::Partition { blocks, caps } => {
                Arc::new(PartitionMatroid::new(n, blocks, caps)?)
            }
            MatroidInstance::Graphic { vertices, edges } => {
                check_len("graphic edge list", edges.len(), n)?;
                let edges = edges.iter().map(|&[a, b]| (a, b)).collect();
                Arc::new(GraphicMatroid::new(*vertices, edges)?)
            }
            MatroidInstance::BinaryLinear { dim, columns } => {
                check_len("binary column list", columns.len(), n)?;
                let cols = columns
                    .iter()
                    .map(|c| BitColumn::from_hex(c, *dim))
                    .collect::<Result<Vec<_>>>()?;
                Arc::new(BinaryLinearMatroid::new(*dim, cols)?)
            }
        })
    }

    pub fn partition(m: &PartitionMatroid) -> Self {
        MatroidInstance::Partition {
            blocks: m.blocks(),
            caps: m.caps(),
        }
    }

    pub fn graphic(m: &GraphicMatroid) -> Self {
        MatroidInstance::Graphic {
            vertices: m.vertices(),
            edges: m.edges().iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn binary_linear(m: &BinaryLinearMatroid) -> Self {
        MatroidInstance::BinaryLinear {
            dim: m.dim(),
            columns: m.columns().iter().map(BitColumn::to_hex).collect(),
        }
    }
}

fn check_len(what: &str, got: usize, n: usize) -> Result<()> {
    if got != n {
        return Err(Error::InvalidInstance(format!(
            "{what} has {got} entries but n = {n}"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub family: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planted_rank: Option<usize>,
}

/// The JSON instance file: `{n, matroid1, matroid2}` plus optional provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstancePair {
    pub n: usize,
    pub matroid1: MatroidInstance,
    pub matroid2: MatroidInstance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<InstanceMeta>,
}

impl InstancePair {
    pub fn from_json(text: &str) -> Result<Self> {
        let pair: InstancePair = serde_json::from_str(text)?;
        pair.build()?;
        Ok(pair)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn build(&self) -> Result<(Arc<dyn Matroid>, Arc<dyn Matroid>)> {
        Ok((self.matroid1.build(self.n)?, self.matroid2.build(self.n)?))
    }

    /// Fresh oracles sharing a fresh ledger.
    pub fn oracles(&self) -> Result<(IndependenceOracle, IndependenceOracle)> {
        let (m1, m2) = self.build()?;
        IndependenceOracle::pair(m1, m2)
    }

    pub fn planted_rank(&self) -> Option<usize> {
        self.meta.as_ref().and_then(|m| m.planted_rank)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Partition ∩ partition: a random bipartite graph with a planted
    /// matching of size `r_ratio · n`.
    BipartiteMatching,
    /// Graphic ∩ partition: random multigraph with random edge colours.
    RainbowSpanningTree,
    /// Two independent random GF(2) column matroids.
    RandomBinaryLinear,
    /// Graphic ∩ partition whose maximum common independent set is a planted
    /// rainbow spanning tree of size `r_ratio · n`.
    PlantedRank,
    /// Partition ∩ partition made of a few long alternating chains. Greedy
    /// matches the off-chain edges, leaving one augmenting path per chain
    /// that runs the whole chain.
    AlternatingChains,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::BipartiteMatching,
        Family::RainbowSpanningTree,
        Family::RandomBinaryLinear,
        Family::PlantedRank,
        Family::AlternatingChains,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::BipartiteMatching => "bipartite_matching",
            Family::RainbowSpanningTree => "rainbow_spanning_tree",
            Family::RandomBinaryLinear => "random_binary_linear",
            Family::PlantedRank => "planted_rank",
            Family::AlternatingChains => "alternating_chains",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenOptions {
    /// Target r/n for the families that plant their rank.
    pub r_ratio: f64,
    /// Number of chains for [`Family::AlternatingChains`].
    pub chains: usize,
}

impl Default for GenOptions {
    fn default() -> Self {
        Self {
            r_ratio: 0.5,
            chains: 4,
        }
    }
}

pub fn generate_instance(family: Family, n: usize, seed: u64) -> Result<InstancePair> {
    generate_with(family, n, seed, &GenOptions::default())
}

pub fn generate_with(
    family: Family,
    n: usize,
    seed: u64,
    opts: &GenOptions,
) -> Result<InstancePair> {
    if n == 0 {
        return Err(Error::contract("instance generation needs n >= 1"));
    }
    if !(opts.r_ratio > 0.0 && opts.r_ratio <= 1.0) {
        return Err(Error::contract(format!(
            "r_ratio must lie in (0, 1], got {}",
            opts.r_ratio
        )));
    }
    let mut rng = seeded(seed ^ family_salt(family));
    let planted = ((opts.r_ratio * n as f64).round() as usize).clamp(1, n);
    let (matroid1, matroid2, planted_rank) = match family {
        Family::BipartiteMatching => bipartite_matching(n, planted, &mut rng)?,
        Family::RainbowSpanningTree => rainbow_spanning_tree(n, &mut rng)?,
        Family::RandomBinaryLinear => random_binary_linear(n, &mut rng)?,
        Family::PlantedRank => planted_rank(n, planted, &mut rng)?,
        Family::AlternatingChains => alternating_chains(n, opts.chains, &mut rng)?,
    };
    Ok(InstancePair {
        n,
        matroid1,
        matroid2,
        meta: Some(InstanceMeta {
            family: family.as_str().to_string(),
            seed,
            planted_rank,
        }),
    })
}

fn family_salt(family: Family) -> u64 {
    0x9E37_79B9_7F4A_7C15u64.wrapping_mul(family as u64 + 1)
}

type Generated = (MatroidInstance, MatroidInstance, Option<usize>);

/// Edges of a bipartite graph as (left, right) pairs → two partition
/// matroids, one per side, all caps 1.
fn matching_pair(
    edges: &[(usize, usize)],
    sides: usize,
) -> Result<(MatroidInstance, MatroidInstance)> {
    let left: Vec<_> = edges.iter().map(|e| e.0).collect();
    let right: Vec<_> = edges.iter().map(|e| e.1).collect();
    let caps = vec![1; sides];
    Ok((
        MatroidInstance::partition(&PartitionMatroid::from_labels(&left, &caps)?),
        MatroidInstance::partition(&PartitionMatroid::from_labels(&right, &caps)?),
    ))
}

fn bipartite_matching(n: usize, m: usize, rng: &mut impl Rng) -> Result<Generated> {
    let mut perm: Vec<usize> = (0..m).collect();
    perm.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = (0..m).map(|l| (l, perm[l])).collect();
    edges.extend((m..n).map(|_| (rng.gen_range(0..m), rng.gen_range(0..m))));
    edges.shuffle(rng);
    let (a, b) = matching_pair(&edges, m)?;
    Ok((a, b, Some(m)))
}

fn alternating_chains(n: usize, chains: usize, rng: &mut impl Rng) -> Result<Generated> {
    // n = 2m - k, so k must share n's parity and not exceed n.
    let mut k = chains.clamp(1, n);
    if (n + k) % 2 == 1 {
        k = if k > 1 { k - 1 } else { k + 1 };
    }
    let k = k.min(n);
    let m = (n + k) / 2;
    let mut left: Vec<usize> = (0..m).collect();
    let mut right: Vec<usize> = (0..m).collect();
    left.shuffle(rng);
    right.shuffle(rng);

    // Chain j covers positions start..start+len of the shuffled labels.
    let mut decoys = Vec::with_capacity(m - k);
    let mut planted = Vec::with_capacity(m);
    let mut start = 0;
    for j in 0..k {
        let len = m / k + usize::from(j < m % k);
        for i in start..start + len {
            planted.push((left[i], right[i]));
            if i + 1 < start + len {
                decoys.push((left[i + 1], right[i]));
            }
        }
        start += len;
    }
    decoys.shuffle(rng);
    planted.shuffle(rng);
    // Decoys come first so a greedy scan in element order takes them.
    let edges: Vec<_> = decoys.into_iter().chain(planted).collect();
    debug_assert_eq!(edges.len(), n);
    let (a, b) = matching_pair(&edges, m)?;
    Ok((a, b, Some(m)))
}

fn rainbow_spanning_tree(n: usize, rng: &mut impl Rng) -> Result<Generated> {
    let vertices = (n / 2 + 1).max(2);
    let colours = (n / 2).max(1);
    let edges: Vec<(usize, usize)> = (0..n)
        .map(|_| {
            let a = rng.gen_range(0..vertices);
            let mut b = rng.gen_range(0..vertices - 1);
            if b >= a {
                b += 1;
            }
            (a, b)
        })
        .collect();
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..colours)).collect();
    let g = GraphicMatroid::new(vertices, edges)?;
    let p = PartitionMatroid::from_labels(&labels, &vec![1; colours])?;
    Ok((
        MatroidInstance::graphic(&g),
        MatroidInstance::partition(&p),
        None,
    ))
}

fn random_binary_linear(n: usize, rng: &mut impl Rng) -> Result<Generated> {
    // Sparse columns (one to three set bits) in two different dimensions,
    // so that greedy choices are often not optimal.
    let mut make = |dim: usize| -> Result<BinaryLinearMatroid> {
        let cols = (0..n)
            .map(|_| {
                let mut bits = vec![false; dim];
                for _ in 0..rng.gen_range(1..=3) {
                    let i = rng.gen_range(0..dim);
                    bits[i] = !bits[i];
                }
                BitColumn::from_bits(&bits)
            })
            .collect();
        BinaryLinearMatroid::new(dim, cols)
    };
    let a = make((n / 2).max(1))?;
    let b = make((n / 3).max(1))?;
    Ok((
        MatroidInstance::binary_linear(&a),
        MatroidInstance::binary_linear(&b),
        None,
    ))
}

fn planted_rank(n: usize, r: usize, rng: &mut impl Rng) -> Result<Generated> {
    let vertices = r + 1;
    let mut order: Vec<usize> = (0..vertices).collect();
    order.shuffle(rng);
    // Random tree: each vertex after the first hangs off an earlier one.
    let mut edges: Vec<(usize, usize, usize)> = (1..vertices)
        .map(|i| (order[rng.gen_range(0..i)], order[i], i - 1))
        .collect();
    for _ in r..n {
        let a = rng.gen_range(0..vertices);
        let mut b = rng.gen_range(0..vertices - 1);
        if b >= a {
            b += 1;
        }
        edges.push((a, b, rng.gen_range(0..r)));
    }
    edges.shuffle(rng);
    let g = GraphicMatroid::new(vertices, edges.iter().map(|&(a, b, _)| (a, b)).collect())?;
    let labels: Vec<usize> = edges.iter().map(|e| e.2).collect();
    let p = PartitionMatroid::from_labels(&labels, &vec![1; r])?;
    Ok((
        MatroidInstance::graphic(&g),
        MatroidInstance::partition(&p),
        Some(r),
    ))
}
