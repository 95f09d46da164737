//! Graph-directed decomposition of a member of the class into unions of
//! translated copies of `E`, with the Perron root of the resulting system.

mod spectral;

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{format_rational, ExactError};
use crate::ifs::{overlap_step, validate, IfsError, SelfSimilarSpec};

pub use spectral::{
    spectral_radius, spectral_radius_with, verify_beta_eigen, SpectralResult, MAX_POWER_ITERATIONS,
    RAYLEIGH_TOLERANCE,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("child gap {value} is neither an exact overlap, a touch, nor a gap")]
    UnexpectedChildGap { value: String },
    #[error("expected {expected} distinct child offsets, found {found}")]
    UnexpectedCoincidence { expected: usize, found: usize },
    #[error("more than {ceiling} configurations; discovery path: {}", history.join(" -> "))]
    VertexExplosion {
        ceiling: usize,
        history: Vec<String>,
    },
    #[error("power iteration did not converge in {iterations} steps (last estimate {last})")]
    NoConvergence { iterations: u64, last: f64 },
    #[error("matrix is not square")]
    NotSquare,
    #[error(transparent)]
    Ifs(#[from] IfsError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// How children are grouped into configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Policy {
    /// Cut at touching points and at gaps; configurations are all-O chains.
    #[default]
    #[serde(rename = "cut-touch")]
    CutAtTouch,
    /// Cut only at gaps; touching copies stay in one configuration.
    #[serde(rename = "keep-touch")]
    KeepTouch,
}

impl Policy {
    pub fn name(self) -> &'static str {
        match self {
            Policy::CutAtTouch => "cut-touch",
            Policy::KeepTouch => "keep-touch",
        }
    }
}

/// Relation between consecutive unit copies in a configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Link {
    /// Offset difference `1 − λ`: the copies overlap exactly.
    O,
    /// Offset difference `1`: the copies touch.
    T,
}

/// `k` translated copies of `E` described by the `k − 1` links between them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub links: Vec<Link>,
}

impl Configuration {
    pub fn single() -> Self {
        Configuration { links: Vec::new() }
    }

    pub fn copies(&self) -> usize {
        self.links.len() + 1
    }

    pub fn word(&self) -> String {
        self.links
            .iter()
            .map(|l| match l {
                Link::O => 'O',
                Link::T => 'T',
            })
            .collect()
    }

    pub fn parse_word(word: &str) -> Option<Self> {
        word.chars()
            .map(|c| match c {
                'O' => Some(Link::O),
                'T' => Some(Link::T),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(|links| Configuration { links })
    }

    pub fn label(&self) -> String {
        format!("k={}[{}]", self.copies(), self.word())
    }

    /// Offsets `a_1 = 0 < a_2 < …` of the copies.
    pub fn offsets(&self, lambda: &BigRational) -> Vec<BigRational> {
        let overlap = BigRational::one() - lambda;
        let mut out = vec![BigRational::from_integer(0.into())];
        for l in &self.links {
            let last = out.last().expect("nonempty").clone();
            out.push(match l {
                Link::O => last + &overlap,
                Link::T => last + BigRational::one(),
            });
        }
        out
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

enum ChildGap {
    O,
    T,
    G,
}

/// The children of `config`: level-one pieces `a_i + b_j`, with coincident
/// offsets merged, grouped into maximal chains and rescaled by `1/λ`.
/// Returned in left-to-right order, so repeated configurations appear once
/// per occurrence.
pub fn expand(
    config: &Configuration,
    spec: &SelfSimilarSpec,
    policy: Policy,
) -> Result<Vec<Configuration>, GraphError> {
    let lambda = &spec.lambda;
    let mut children: Vec<BigRational> = config
        .offsets(lambda)
        .iter()
        .flat_map(|a| spec.offsets.iter().map(move |b| a + b))
        .collect();
    children.sort();
    children.dedup();
    let junctions = config.links.iter().filter(|l| **l == Link::O).count();
    let expected = config.copies() * spec.n() - junctions;
    if children.len() != expected {
        return Err(GraphError::UnexpectedCoincidence {
            expected,
            found: children.len(),
        });
    }

    let o = overlap_step(lambda);
    let mut out = Vec::new();
    let mut current = Vec::new();
    for w in children.windows(2) {
        let gap = &w[1] - &w[0];
        let class = if gap == o {
            ChildGap::O
        } else if gap == *lambda {
            ChildGap::T
        } else if gap > *lambda {
            ChildGap::G
        } else {
            return Err(GraphError::UnexpectedChildGap {
                value: format_rational(&gap),
            });
        };
        match (class, policy) {
            (ChildGap::O, _) => current.push(Link::O),
            (ChildGap::T, Policy::KeepTouch) => current.push(Link::T),
            (ChildGap::T, Policy::CutAtTouch) | (ChildGap::G, _) => {
                out.push(Configuration {
                    links: std::mem::take(&mut current),
                });
            }
        }
    }
    out.push(Configuration { links: current });
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    pub k: usize,
    pub steps: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub mult: u64,
}

/// Vertices in discovery order (vertex 0 is the single copy), edges sorted
/// by `(from, to)`, adjacency `A[u][v]` = multiplicity of `u → v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSystem {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub adjacency: Vec<Vec<u64>>,
    pub policy: Policy,
}

impl GraphSystem {
    pub fn configuration(&self, v: usize) -> Configuration {
        Configuration::parse_word(&self.vertices[v].steps).expect("vertex words use O and T")
    }
}

pub fn default_vertex_ceiling(spec: &SelfSimilarSpec) -> usize {
    10 * spec.n()
}

/// Breadth-first closure from the single copy. Each frontier is expanded in
/// parallel; new vertices are numbered sequentially in discovery order.
pub fn build_graph(
    spec: &SelfSimilarSpec,
    policy: Policy,
    vertex_ceiling: usize,
) -> Result<GraphSystem, GraphError> {
    validate(&spec.lambda, &spec.offsets)?;
    let mut configs = vec![Configuration::single()];
    let mut parent: Vec<Option<usize>> = vec![None];
    let mut index: HashMap<Configuration, usize> = HashMap::from([(Configuration::single(), 0)]);
    let mut edges: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    if vertex_ceiling == 0 {
        return Err(GraphError::VertexExplosion {
            ceiling: 0,
            history: vec![Configuration::single().label()],
        });
    }
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let expanded: Vec<Result<Vec<Configuration>, GraphError>> = frontier
            .par_iter()
            .map(|&u| expand(&configs[u], spec, policy))
            .collect();
        let mut next = Vec::new();
        for (&u, children) in frontier.iter().zip(expanded) {
            for child in children? {
                let v = match index.get(&child) {
                    Some(&v) => v,
                    None => {
                        if configs.len() >= vertex_ceiling {
                            let mut history = vec![child.label()];
                            let mut at = Some(u);
                            while let Some(w) = at {
                                history.push(configs[w].label());
                                at = parent[w];
                            }
                            history.reverse();
                            return Err(GraphError::VertexExplosion {
                                ceiling: vertex_ceiling,
                                history,
                            });
                        }
                        let v = configs.len();
                        index.insert(child.clone(), v);
                        configs.push(child);
                        parent.push(Some(u));
                        next.push(v);
                        v
                    }
                };
                *edges.entry((u, v)).or_insert(0) += 1;
            }
        }
        frontier = next;
    }

    let size = configs.len();
    let mut adjacency = vec![vec![0u64; size]; size];
    for (&(u, v), &mult) in &edges {
        adjacency[u][v] = mult;
    }
    Ok(GraphSystem {
        vertices: configs
            .iter()
            .enumerate()
            .map(|(id, c)| Vertex {
                id,
                k: c.copies(),
                steps: c.word(),
            })
            .collect(),
        edges: edges
            .into_iter()
            .map(|((from, to), mult)| Edge { from, to, mult })
            .collect(),
        adjacency,
        policy,
    })
}

/// Graphviz digraph with one labelled edge per nonzero adjacency entry.
pub fn emit_dot(gs: &GraphSystem) -> String {
    assert!(
        !gs.vertices.is_empty(),
        "a graph system always has vertex 0"
    );
    let mut out = String::new();
    let _ = writeln!(out, "digraph graph_directed {{");
    let _ = writeln!(out, "  // policy: {}", gs.policy.name());
    for v in &gs.vertices {
        let _ = writeln!(out, "  v{} [label=\"k={}[{}]\"];", v.id, v.k, v.steps);
    }
    for e in &gs.edges {
        let _ = writeln!(out, "  v{} -> v{} [label=\"{}\"];", e.from, e.to, e.mult);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::ifs::{generate, PatternSource};

    fn spec31() -> SelfSimilarSpec {
        generate(3, 1, &rat(1, 4), &PatternSource::Word("OG".into())).unwrap()
    }

    fn spec41() -> SelfSimilarSpec {
        generate(4, 1, &rat(1, 5), &PatternSource::Word("OTG".into())).unwrap()
    }

    fn sizes(children: &[Configuration]) -> Vec<usize> {
        children.iter().map(Configuration::copies).collect()
    }

    #[test]
    fn expand_examples() {
        let s = spec31();
        let one = Configuration::single();
        let two = Configuration {
            links: vec![Link::O],
        };
        assert_eq!(
            sizes(&expand(&one, &s, Policy::CutAtTouch).unwrap()),
            vec![2, 1]
        );
        assert_eq!(
            sizes(&expand(&two, &s, Policy::CutAtTouch).unwrap()),
            vec![2, 2, 1]
        );
        let t = spec41();
        assert_eq!(
            sizes(&expand(&one, &t, Policy::CutAtTouch).unwrap()),
            vec![2, 1, 1]
        );
        let kept = expand(&one, &t, Policy::KeepTouch).unwrap();
        assert_eq!(
            kept.iter().map(Configuration::word).collect::<Vec<_>>(),
            vec!["OT".to_string(), String::new()]
        );
    }

    #[test]
    fn canonical_graphs() {
        let a = build_graph(&spec31(), Policy::CutAtTouch, 30).unwrap();
        assert_eq!(a.adjacency, vec![vec![1, 1], vec![1, 2]]);
        assert_eq!(a.vertices[0].k, 1);
        assert_eq!(a.vertices[1].steps, "O");
        let b = build_graph(&spec41(), Policy::CutAtTouch, 40).unwrap();
        assert_eq!(b.adjacency, vec![vec![2, 1], vec![3, 2]]);
    }

    #[test]
    fn vertex_ceiling() {
        match build_graph(&spec31(), Policy::CutAtTouch, 1) {
            Err(GraphError::VertexExplosion {
                ceiling: 1,
                history,
            }) => {
                assert_eq!(history, vec!["k=1[]".to_string(), "k=2[O]".to_string()])
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dot_output() {
        let a = build_graph(&spec31(), Policy::CutAtTouch, 30).unwrap();
        let dot = emit_dot(&a);
        assert_eq!(dot.matches("->").count(), 4);
        assert!(dot.contains("v0 [label=\"k=1[]\"];"));
        assert!(dot.contains("v1 -> v1 [label=\"2\"];"));
        let lone = GraphSystem {
            vertices: vec![Vertex {
                id: 0,
                k: 1,
                steps: String::new(),
            }],
            edges: vec![Edge {
                from: 0,
                to: 0,
                mult: 2,
            }],
            adjacency: vec![vec![2]],
            policy: Policy::CutAtTouch,
        };
        assert!(emit_dot(&lone).contains("v0 -> v0 [label=\"2\"];"));
    }

    #[test]
    fn json_form() {
        let a = build_graph(&spec31(), Policy::CutAtTouch, 30).unwrap();
        let text = serde_json::to_string(&a).unwrap();
        assert!(text.starts_with(r#"{"vertices":[{"id":0,"k":1,"steps":""},{"id":1,"k":2,"steps":"O"}],"edges":[{"from":0,"to":0,"mult":1}"#));
        assert!(text.ends_with(r#""adjacency":[[1,1],[1,2]],"policy":"cut-touch"}"#));
        let back: GraphSystem = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
    }
}
