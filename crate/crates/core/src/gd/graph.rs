use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One edge `from → to` carrying the map `z ↦ (z + digit)/n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub digit: Vec<u64>,
}

/// Graph-directed system with uniform contraction ratio `1/n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MWGraph {
    base: u64,
    dim: usize,
    nodes: Vec<String>,
    edges: Vec<Edge>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    base: u64,
    dim: usize,
    nodes: Vec<String>,
    edges: Vec<EdgeFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeFile {
    from: String,
    to: String,
    digit: Vec<i64>,
}

impl MWGraph {
    /// Builds a graph from named edges, validating digits and uniqueness.
    pub fn new(
        base: u64,
        dim: usize,
        nodes: Vec<String>,
        edges: impl IntoIterator<Item = (String, String, Vec<i64>)>,
    ) -> Result<Self> {
        if base < 2 {
            return Err(Error::BaseTooSmall(base));
        }
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut seen_nodes = HashSet::new();
        for name in &nodes {
            if !seen_nodes.insert(name.as_str()) {
                return Err(Error::DuplicateNode(name.clone()));
            }
        }
        let lookup = |name: &str| {
            nodes
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::UnknownNode(name.to_string()))
        };
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (from, to, digit) in edges {
            let f = lookup(&from)?;
            let t = lookup(&to)?;
            if digit.len() != dim {
                return Err(Error::DigitArity {
                    expected: dim,
                    found: digit.len(),
                    digit,
                });
            }
            if let Some(&bad) = digit.iter().find(|&&c| c < 0 || c as u64 >= base) {
                return Err(Error::CoordinateOutOfRange {
                    digit,
                    value: bad,
                    base,
                });
            }
            let digit: Vec<u64> = digit.into_iter().map(|c| c as u64).collect();
            let edge = Edge {
                from: f,
                to: t,
                digit,
            };
            if !seen.insert(edge.clone()) {
                return Err(Error::DuplicateEdge {
                    from,
                    to,
                    digit: edge.digit,
                });
            }
            out.push(edge);
        }
        Ok(Self {
            base,
            dim,
            nodes,
            edges: out,
        })
    }

    /// Parses the JSON graph file; unknown fields are rejected.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(text).map_err(|e| Error::GraphFormat(e.to_string()))?;
        Self::new(
            file.base,
            file.dim,
            file.nodes,
            file.edges.into_iter().map(|e| (e.from, e.to, e.digit)),
        )
    }

    pub fn to_json(&self) -> String {
        let file = GraphFile {
            base: self.base,
            dim: self.dim,
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeFile {
                    from: self.nodes[e.from].clone(),
                    to: self.nodes[e.to].clone(),
                    digit: e.digit.iter().map(|&c| c as i64).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("graph serializes")
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_index(&self, name: &str) -> Result<usize> {
        self.nodes
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    /// `A[u][v]` = number of edges from `u` to `v`.
    pub fn count_matrix(&self) -> Vec<Vec<i64>> {
        let mut a = vec![vec![0i64; self.nodes.len()]; self.nodes.len()];
        for e in &self.edges {
            a[e.from][e.to] += 1;
        }
        a
    }
}
