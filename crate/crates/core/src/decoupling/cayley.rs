use std::collections::BTreeSet;

use serde::Serialize;

use crate::decoupling::DecouplingGroup;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CayleyEdge {
    pub from: usize,
    pub to: usize,
    /// Index into the generating set.
    pub color: usize,
}

/// Cayley graph with edges `v → f_α v`, one per vertex and generator.
#[derive(Debug, Clone)]
pub struct CayleyGraph {
    vertices: Vec<String>,
    generating_set: Vec<String>,
    /// Element index of each generator.
    generators: Vec<usize>,
    edges: Vec<CayleyEdge>,
}

impl CayleyGraph {
    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn generating_set(&self) -> &[String] {
        &self.generating_set
    }

    pub fn edges(&self) -> &[CayleyEdge] {
        &self.edges
    }

    /// Index of the edge leaving `vertex` with `color`.
    fn edge_index(&self, vertex: usize, color: usize) -> usize {
        vertex * self.generating_set.len() + color
    }

    pub fn color_of(&self, label: &str) -> Result<usize> {
        self.generating_set
            .iter()
            .position(|g| g == label)
            .ok_or_else(|| Error::LabelMismatch(format!("`{label}` is not in the generating set")))
    }
}

pub fn build_cayley_graph(group: &DecouplingGroup, generating_set: &[String]) -> Result<CayleyGraph> {
    if generating_set.is_empty() {
        return Err(Error::InvalidGroup("generating set is empty".into()));
    }
    let generators = generating_set
        .iter()
        .map(|g| group.index_of(g))
        .collect::<Result<Vec<_>>>()?;
    let mut seen = BTreeSet::new();
    for g in generating_set {
        if !seen.insert(g) {
            return Err(Error::InvalidGroup(format!("generator `{g}` listed twice")));
        }
    }

    let k = group.order();
    let mut reached = vec![false; k];
    let mut frontier = vec![group.identity_index()];
    reached[group.identity_index()] = true;
    while let Some(v) = frontier.pop() {
        for &f in &generators {
            let w = group.product(f, v);
            if !reached[w] {
                reached[w] = true;
                frontier.push(w);
            }
        }
    }
    let unreached: Vec<String> = (0..k)
        .filter(|&i| !reached[i])
        .map(|i| group.elements()[i].clone())
        .collect();
    if !unreached.is_empty() {
        return Err(Error::NotGenerating { unreached });
    }

    let edges = (0..k)
        .flat_map(|v| {
            generators.iter().enumerate().map(move |(color, &f)| CayleyEdge {
                from: v,
                to: group.product(f, v),
                color,
            })
        })
        .collect();
    Ok(CayleyGraph {
        vertices: group.elements().to_vec(),
        generating_set: generating_set.to_vec(),
        generators,
        edges,
    })
}

/// Eulerian cycle as a color sequence, via Hierholzer.
///
/// Unused edges are taken in generating-set order; since edges are stored by
/// vertex then color the result is fully determined by the inputs.
pub fn eulerian_cycle(graph: &CayleyGraph, start: &str) -> Result<Vec<String>> {
    let start = graph
        .vertices
        .iter()
        .position(|v| v == start)
        .ok_or_else(|| Error::LabelMismatch(format!("`{start}` is not a vertex")))?;
    let colors = graph.generating_set.len();
    let mut next_color = vec![0usize; graph.vertices.len()];
    let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
    let mut circuit = Vec::with_capacity(graph.edges.len());
    while let Some(&(v, via)) = stack.last() {
        if next_color[v] < colors {
            let edge = graph.edges[graph.edge_index(v, next_color[v])];
            next_color[v] += 1;
            stack.push((edge.to, Some(edge.color)));
        } else {
            stack.pop();
            if let Some(color) = via {
                circuit.push(color);
            }
        }
    }
    circuit.reverse();
    Ok(circuit.into_iter().map(|c| graph.generating_set[c].clone()).collect())
}

/// Vertex sequence visited by following `cycle` from `start`; checks that every
/// edge is used exactly once and that the walk closes.
pub fn validate_eulerian(graph: &CayleyGraph, start: &str, cycle: &[String]) -> Result<Vec<usize>> {
    let mut v = graph
        .vertices
        .iter()
        .position(|x| x == start)
        .ok_or_else(|| Error::LabelMismatch(format!("`{start}` is not a vertex")))?;
    let origin = v;
    if cycle.len() != graph.edges.len() {
        return Err(Error::NotEulerian(format!(
            "length {} but the graph has {} edges",
            cycle.len(),
            graph.edges.len()
        )));
    }
    let mut used = vec![false; graph.edges.len()];
    let mut path = vec![v];
    for (step, label) in cycle.iter().enumerate() {
        let color = graph.color_of(label)?;
        let idx = graph.edge_index(v, color);
        if used[idx] {
            return Err(Error::NotEulerian(format!(
                "step {} reuses edge {} --{label}--> {}",
                step + 1,
                graph.vertices[v],
                graph.vertices[graph.edges[idx].to]
            )));
        }
        used[idx] = true;
        v = graph.edges[idx].to;
        path.push(v);
    }
    if v != origin {
        return Err(Error::NotEulerian(format!(
            "walk ends at {} instead of {}",
            graph.vertices[v], graph.vertices[origin]
        )));
    }
    Ok(path)
}

impl CayleyGraph {
    /// Element index of generator `color`.
    pub fn generator_element(&self, color: usize) -> usize {
        self.generators[color]
    }
}
