//! Metric graphs representing tropical curves.
//!
//! A curve is stored as a connected multigraph with oriented edges, exact
//! (or symbolic) lengths and a base point. Leaves and 2-valent vertices are
//! removed by [`normalize_curve`], which picks the canonical representative of
//! the tropical equivalence class.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{fmt_rat, parse_rational, Rat};
use crate::error::{Error, Result};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq)]
pub enum Length {
    Exact(Rat),
    Symbolic(Poly),
}

impl Length {
    pub fn exact(&self) -> Option<&Rat> {
        match self {
            Length::Exact(r) => Some(r),
            Length::Symbolic(_) => None,
        }
    }

    pub fn to_poly(&self) -> Poly {
        match self {
            Length::Exact(r) => Poly::constant(r.clone()),
            Length::Symbolic(p) => p.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Length::Exact(r) => r.is_zero(),
            Length::Symbolic(p) => p.is_zero(),
        }
    }

    fn sum(&self, other: &Length) -> Length {
        match (self, other) {
            (Length::Exact(a), Length::Exact(b)) => Length::Exact(a + b),
            _ => Length::Symbolic(self.to_poly() + other.to_poly()),
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Exact(r) => write!(f, "{}", fmt_rat(r)),
            Length::Symbolic(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub length: Length,
}

impl Edge {
    pub fn new(id: &str, tail: &str, head: &str, length: Length) -> Self {
        Edge {
            id: id.to_string(),
            tail: tail.to_string(),
            head: head.to_string(),
            length,
        }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    fn touches(&self, v: &str) -> bool {
        self.tail == v || self.head == v
    }

    fn other(&self, v: &str) -> &str {
        if self.tail == v {
            &self.head
        } else {
            &self.tail
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    basepoint: String,
}

/// Where each edge of a graph ended up after a normalization or contraction:
/// the surviving edge id and the relative orientation (`+1` when the old edge
/// runs along the new one), or `None` when the edge was removed.
pub type EdgeMap = HashMap<String, Option<(String, i8)>>;

#[derive(Serialize, Deserialize)]
struct CurveFile {
    vertices: Vec<String>,
    edges: Vec<EdgeRecord>,
    basepoint: String,
}

#[derive(Serialize, Deserialize)]
struct EdgeRecord {
    id: String,
    from: String,
    to: String,
    length: String,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl MetricGraph {
    /// Builds a graph, checking ids, references, connectivity and lengths.
    /// Zero lengths are accepted here (degenerations); negative ones are not.
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>, basepoint: &str) -> Result<Self> {
        let mut seen = HashSet::new();
        for (i, v) in vertices.iter().enumerate() {
            if !seen.insert(v.as_str()) {
                return Err(Error::validation(format!("vertices[{i}]"), format!("duplicate vertex {v:?}")));
            }
        }
        let mut edge_ids = HashSet::new();
        let mut exact = false;
        let mut symbolic = false;
        for (i, e) in edges.iter().enumerate() {
            if !edge_ids.insert(e.id.as_str()) {
                return Err(Error::validation(format!("edges[{i}].id"), format!("duplicate edge id {:?}", e.id)));
            }
            for (field, v) in [("from", &e.tail), ("to", &e.head)] {
                if !seen.contains(v.as_str()) {
                    return Err(Error::validation(
                        format!("edges[{i}].{field}"),
                        format!("edge {:?} references unknown vertex {v:?}", e.id),
                    ));
                }
            }
            match &e.length {
                Length::Exact(r) => {
                    exact = true;
                    if r.is_negative() {
                        return Err(Error::validation(format!("edges[{i}].length"), "negative length"));
                    }
                }
                Length::Symbolic(_) => symbolic = true,
            }
        }
        if exact && symbolic {
            return Err(Error::validation("edges", "numeric and symbolic lengths cannot be mixed"));
        }
        if !seen.contains(basepoint) {
            return Err(Error::validation("basepoint", format!("unknown vertex {basepoint:?}")));
        }
        let g = MetricGraph {
            vertices,
            edges,
            basepoint: basepoint.to_string(),
        };
        if g.vertices.is_empty() {
            return Err(Error::validation("vertices", "graph has no vertices"));
        }
        if !g.is_connected() {
            return Err(Error::validation("edges", "graph is not connected"));
        }
        Ok(g)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn basepoint(&self) -> &str {
        &self.basepoint
    }

    pub fn edge(&self, id: &str) -> Result<&Edge> {
        self.edges
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    pub fn edge_index(&self, id: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e.id == id)
            .ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    pub fn edge_ids(&self) -> Vec<String> {
        self.edges.iter().map(|e| e.id.clone()).collect()
    }

    pub fn genus(&self) -> usize {
        genus(self)
    }

    pub fn is_symbolic(&self) -> bool {
        self.edges
            .iter()
            .any(|e| matches!(e.length, Length::Symbolic(_)))
    }

    /// Edge lengths in file order; fails on symbolic graphs.
    pub fn exact_lengths(&self) -> Result<Vec<Rat>> {
        self.edges
            .iter()
            .map(|e| e.length.exact().cloned().ok_or(Error::SymbolicLengths))
            .collect()
    }

    pub fn symbolic_lengths(&self) -> Vec<Poly> {
        self.edges.iter().map(|e| e.length.to_poly()).collect()
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: &str) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.tail == v) + usize::from(e.head == v))
            .sum()
    }

    pub fn with_length(&self, id: &str, length: Length) -> Result<Self> {
        let idx = self.edge_index(id)?;
        let mut edges = self.edges.clone();
        edges[idx].length = length;
        MetricGraph::new(self.vertices.clone(), edges, &self.basepoint)
    }

    pub fn with_basepoint(&self, v: &str) -> Result<Self> {
        MetricGraph::new(self.vertices.clone(), self.edges.clone(), v)
    }

    /// The same graph with every length replaced by a variable. Edge ids that
    /// are identifiers become lower-cased variable names; others become `xN`.
    pub fn symbolic_companion(&self) -> Self {
        let mut edges = self.edges.clone();
        for (i, e) in edges.iter_mut().enumerate() {
            let name = if is_identifier(&e.id) {
                e.id.to_lowercase()
            } else {
                format!("x{i}")
            };
            e.length = Length::Symbolic(Poly::var(&name));
        }
        MetricGraph {
            vertices: self.vertices.clone(),
            edges,
            basepoint: self.basepoint.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let file = CurveFile {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    id: e.id.clone(),
                    from: e.tail.clone(),
                    to: e.head.clone(),
                    length: e.length.to_string(),
                })
                .collect(),
            basepoint: self.basepoint.clone(),
        };
        serde_json::to_string(&file).expect("curve serialization")
    }

    fn is_connected(&self) -> bool {
        self.component_of(&self.vertices[0]).len() == self.vertices.len()
    }

    fn component_of(&self, start: &str) -> HashSet<String> {
        let mut seen: HashSet<String> = HashSet::new();
        let mut queue = VecDeque::from([start.to_string()]);
        seen.insert(start.to_string());
        while let Some(v) = queue.pop_front() {
            for e in self.edges.iter().filter(|e| e.touches(&v)) {
                let w = e.other(&v).to_string();
                if seen.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// The graph without the given edges, restricted to the component of the
    /// base point. Not normalized.
    pub fn without_edges(&self, ids: &[&str]) -> Result<Self> {
        for id in ids {
            self.edge(id)?;
        }
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| !ids.contains(&e.id.as_str()))
            .cloned()
            .collect();
        let pruned = MetricGraph {
            vertices: self.vertices.clone(),
            edges,
            basepoint: self.basepoint.clone(),
        };
        let keep = pruned.component_of(&self.basepoint);
        Ok(MetricGraph {
            vertices: pruned
                .vertices
                .iter()
                .filter(|v| keep.contains(*v))
                .cloned()
                .collect(),
            edges: pruned
                .edges
                .into_iter()
                .filter(|e| keep.contains(&e.tail))
                .collect(),
            basepoint: self.basepoint.clone(),
        })
    }
}

/// Parses a curve file (see the README for the schema).
pub fn parse_curve(text: &str) -> Result<MetricGraph> {
    let file: CurveFile = serde_json::from_str(text).map_err(|e| {
        Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string())
    })?;
    let mut edges = Vec::with_capacity(file.edges.len());
    for (i, rec) in file.edges.iter().enumerate() {
        let field = format!("edges[{i}].length");
        let length = if let Some(r) = parse_rational(&rec.length) {
            if !r.is_positive() {
                return Err(Error::validation(field, format!("length {:?} must be positive", rec.length)));
            }
            Length::Exact(r)
        } else if is_identifier(rec.length.trim()) {
            Length::Symbolic(Poly::var(rec.length.trim()))
        } else {
            return Err(Error::parse(
                field,
                format!("{:?} is neither an exact rational nor a variable name", rec.length),
            ));
        };
        edges.push(Edge::new(&rec.id, &rec.from, &rec.to, length));
    }
    MetricGraph::new(file.vertices, edges, &file.basepoint)
}

pub fn genus(g: &MetricGraph) -> usize {
    (g.edges.len() + 1).saturating_sub(g.vertices.len())
}

/// Removes leaves and 2-valent vertices. The base point is never merged away;
/// when it sits on a leaf it moves to the attaching vertex.
pub fn normalize_curve(g: &MetricGraph) -> Result<MetricGraph> {
    normalize_tracked(g).map(|(h, _)| h)
}

pub fn normalize_tracked(g: &MetricGraph) -> Result<(MetricGraph, EdgeMap)> {
    let mut vertices = g.vertices.clone();
    let mut edges = g.edges.clone();
    let mut basepoint = g.basepoint.clone();
    let mut map: EdgeMap = g
        .edges
        .iter()
        .map(|e| (e.id.clone(), Some((e.id.clone(), 1))))
        .collect();
    let degree = |edges: &[Edge], v: &str| -> usize {
        edges
            .iter()
            .map(|e| usize::from(e.tail == v) + usize::from(e.head == v))
            .sum()
    };
    loop {
        if vertices.len() > 1 {
            if let Some(v) = vertices.iter().find(|v| degree(&edges, v) <= 1).cloned() {
                if let Some(pos) = edges.iter().position(|e| e.touches(&v)) {
                    let e = edges.remove(pos);
                    if basepoint == v {
                        basepoint = e.other(&v).to_string();
                    }
                    for target in map.values_mut() {
                        if matches!(target, Some((id, _)) if *id == e.id) {
                            *target = None;
                        }
                    }
                }
                vertices.retain(|w| *w != v);
                continue;
            }
        }
        let candidate = vertices.iter().find(|v| {
            **v != basepoint
                && degree(&edges, v) == 2
                && edges.iter().filter(|e| e.touches(v)).all(|e| !e.is_loop())
        });
        let Some(v) = candidate.cloned() else { break };
        let idx: Vec<usize> = (0..edges.len()).filter(|&i| edges[i].touches(&v)).collect();
        let (i1, i2) = (idx[0], idx[1]);
        let e1 = edges[i1].clone();
        let e2 = edges[i2].clone();
        // The merged edge keeps e1's id and runs in e1's direction.
        let (tail, head, s1) = if e1.head == v {
            (e1.tail.clone(), e2.other(&v).to_string(), 1i8)
        } else {
            (e2.other(&v).to_string(), e1.head.clone(), 1i8)
        };
        let s2: i8 = if e1.head == v {
            if e2.tail == v { 1 } else { -1 }
        } else if e2.head == v {
            1
        } else {
            -1
        };
        let merged = Edge {
            id: e1.id.clone(),
            tail,
            head,
            length: e1.length.sum(&e2.length),
        };
        for target in map.values_mut() {
            if let Some((id, s)) = target {
                if *id == e2.id {
                    *target = Some((e1.id.clone(), *s * s2));
                } else if *id == e1.id {
                    *s *= s1;
                }
            }
        }
        edges[i1] = merged;
        edges.remove(i2);
        vertices.retain(|w| *w != v);
    }
    if edges.is_empty() {
        return Err(Error::Degenerate("no edges remain after normalization".into()));
    }
    Ok((
        MetricGraph {
            vertices,
            edges,
            basepoint,
        },
        map,
    ))
}

/// One signed step along an edge: `(edge index, +1 forward / -1 backward)`.
pub type Step = (usize, i8);

#[derive(Clone, Debug, PartialEq)]
pub struct CyclePath {
    pub start: String,
    pub steps: Vec<Step>,
}

/// Fundamental cycles of a spanning tree.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleBasis {
    pub edge_ids: Vec<String>,
    pub tree: Vec<usize>,
    pub cotree: Vec<usize>,
    /// `g × m` signed incidence; row `i` is the cycle closed by `cotree[i]`.
    pub matrix: Vec<Vec<i64>>,
    pub paths: Vec<CyclePath>,
    /// Tree path from the base point to every vertex.
    pub vertex_paths: HashMap<String, Vec<Step>>,
}

impl CycleBasis {
    pub fn genus(&self) -> usize {
        self.cotree.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_ids.len()
    }

    /// Column of the incidence matrix: how each cycle crosses edge `e`.
    pub fn edge_column(&self, e: usize) -> Vec<i64> {
        self.matrix.iter().map(|row| row[e]).collect()
    }
}

fn step_sign(e: &Edge, from: &str) -> i8 {
    if e.tail == from {
        1
    } else {
        -1
    }
}

/// Breadth-first spanning tree from the base point, scanning edges in file
/// order; the cotree is listed in file order.
pub fn cycle_basis(g: &MetricGraph) -> CycleBasis {
    let mut tree = Vec::new();
    let mut seen: HashSet<&str> = HashSet::from([g.basepoint.as_str()]);
    let mut queue = VecDeque::from([g.basepoint.as_str()]);
    while let Some(u) = queue.pop_front() {
        for (i, e) in g.edges.iter().enumerate() {
            if e.is_loop() || !e.touches(u) {
                continue;
            }
            let w = e.other(u);
            if seen.insert(w) {
                tree.push(i);
                queue.push_back(w);
            }
        }
    }
    basis_from_tree_indices(g, tree)
}

/// Fundamental cycles for an explicitly chosen spanning tree.
pub fn cycle_basis_with_tree(g: &MetricGraph, tree_ids: &[&str]) -> Result<CycleBasis> {
    let mut tree = Vec::new();
    for id in tree_ids {
        let i = g.edge_index(id)?;
        if g.edges[i].is_loop() {
            return Err(Error::validation("tree", format!("loop {id:?} cannot be a tree edge")));
        }
        tree.push(i);
    }
    tree.sort_unstable();
    tree.dedup();
    if tree.len() + 1 != g.vertices.len() {
        return Err(Error::validation("tree", "wrong number of tree edges"));
    }
    let sub = MetricGraph {
        vertices: g.vertices.clone(),
        edges: tree.iter().map(|&i| g.edges[i].clone()).collect(),
        basepoint: g.basepoint.clone(),
    };
    if !sub.is_connected() {
        return Err(Error::validation("tree", "edges do not span the graph"));
    }
    Ok(basis_from_tree_indices(g, tree))
}

fn basis_from_tree_indices(g: &MetricGraph, mut tree: Vec<usize>) -> CycleBasis {
    tree.sort_unstable();
    let in_tree: HashSet<usize> = tree.iter().copied().collect();
    // Root the tree at the base point.
    let mut vertex_paths: HashMap<String, Vec<Step>> = HashMap::new();
    vertex_paths.insert(g.basepoint.clone(), Vec::new());
    let mut queue = VecDeque::from([g.basepoint.clone()]);
    while let Some(u) = queue.pop_front() {
        for &i in &tree {
            let e = &g.edges[i];
            if !e.touches(&u) {
                continue;
            }
            let w = e.other(&u).to_string();
            if vertex_paths.contains_key(&w) {
                continue;
            }
            let mut path = vertex_paths[&u].clone();
            path.push((i, step_sign(e, &u)));
            vertex_paths.insert(w.clone(), path);
            queue.push_back(w);
        }
    }
    let cotree: Vec<usize> = (0..g.edges.len()).filter(|i| !in_tree.contains(i)).collect();
    let m = g.edges.len();
    let mut matrix = Vec::with_capacity(cotree.len());
    let mut paths = Vec::with_capacity(cotree.len());
    for &c in &cotree {
        let e = &g.edges[c];
        let mut steps: Vec<Step> = vec![(c, 1)];
        if !e.is_loop() {
            let to_head = &vertex_paths[&e.head];
            let to_tail = &vertex_paths[&e.tail];
            let common = to_head
                .iter()
                .zip(to_tail.iter())
                .take_while(|(a, b)| a == b)
                .count();
            steps.extend(to_head[common..].iter().rev().map(|&(i, s)| (i, -s)));
            steps.extend(to_tail[common..].iter().copied());
        }
        let mut row = vec![0i64; m];
        for &(i, s) in &steps {
            row[i] += i64::from(s);
        }
        matrix.push(row);
        paths.push(CyclePath {
            start: e.tail.clone(),
            steps,
        });
    }
    CycleBasis {
        edge_ids: g.edge_ids(),
        tree,
        cotree,
        matrix,
        paths,
        vertex_paths,
    }
}

/// Deletes an edge, keeping the base point's component, and normalizes.
pub fn delete_edge(g: &MetricGraph, e: &str) -> Result<MetricGraph> {
    normalize_curve(&g.without_edges(&[e])?)
}

/// Contracts a connected set of edges to a point and normalizes. The merged
/// vertex is the first endpoint in vertex order.
pub fn contract_subcurve(g: &MetricGraph, ids: &[&str]) -> Result<MetricGraph> {
    contract_tracked(g, ids).map(|(h, _)| h)
}

pub fn contract_tracked(g: &MetricGraph, ids: &[&str]) -> Result<(MetricGraph, EdgeMap)> {
    let owned: Vec<String> = ids.iter().map(|s| s.to_string()).collect();
    if ids.is_empty() {
        return Err(Error::DisconnectedSubcurve(owned));
    }
    let mut sub_edges = Vec::new();
    for id in ids {
        sub_edges.push(g.edge(id)?.clone());
    }
    let sub_vertices: BTreeSet<String> = sub_edges
        .iter()
        .flat_map(|e| [e.tail.clone(), e.head.clone()])
        .collect();
    let sub = MetricGraph {
        vertices: g
            .vertices
            .iter()
            .filter(|v| sub_vertices.contains(v.as_str()))
            .cloned()
            .collect(),
        edges: sub_edges.clone(),
        basepoint: String::new(),
    };
    if !sub.is_connected() {
        return Err(Error::DisconnectedSubcurve(owned));
    }
    let rep = sub.vertices[0].clone();
    let collapse = |v: &str| -> String {
        if sub_vertices.contains(v) {
            rep.clone()
        } else {
            v.to_string()
        }
    };
    let edges: Vec<Edge> = g
        .edges
        .iter()
        .filter(|e| !ids.contains(&e.id.as_str()))
        .map(|e| Edge {
            id: e.id.clone(),
            tail: collapse(&e.tail),
            head: collapse(&e.head),
            length: e.length.clone(),
        })
        .collect();
    let vertices: Vec<String> = g
        .vertices
        .iter()
        .filter(|v| !sub_vertices.contains(v.as_str()) || **v == rep)
        .cloned()
        .collect();
    let contracted = MetricGraph {
        vertices,
        edges,
        basepoint: collapse(&g.basepoint),
    };
    let (normal, inner) = normalize_tracked(&contracted)?;
    let mut map: EdgeMap = HashMap::new();
    for e in &g.edges {
        let target = if ids.contains(&e.id.as_str()) {
            None
        } else {
            inner.get(&e.id).cloned().flatten()
        };
        map.insert(e.id.clone(), target);
    }
    Ok((normal, map))
}

/// The subgraph spanned by `ids`, normalized. The base point is kept when it
/// lies on the subgraph, otherwise the first incident vertex takes its place.
pub fn restrict_to_edges(g: &MetricGraph, ids: &[String]) -> Result<MetricGraph> {
    let edges: Vec<Edge> = g
        .edges
        .iter()
        .filter(|e| ids.contains(&e.id))
        .cloned()
        .collect();
    let used: HashSet<&str> = edges
        .iter()
        .flat_map(|e| [e.tail.as_str(), e.head.as_str()])
        .collect();
    let vertices: Vec<String> = g
        .vertices
        .iter()
        .filter(|v| used.contains(v.as_str()))
        .cloned()
        .collect();
    let basepoint = if used.contains(g.basepoint.as_str()) {
        g.basepoint.clone()
    } else {
        vertices
            .first()
            .cloned()
            .ok_or_else(|| Error::Degenerate("empty edge set".into()))?
    };
    normalize_curve(&MetricGraph::new(vertices, edges, &basepoint)?)
}

/// True when the edge subset is a subdivision of K₄: four 3-valent branch
/// vertices joined pairwise by six internally disjoint paths.
fn is_topological_k4(g: &MetricGraph, subset: &[usize]) -> bool {
    let mut deg: HashMap<&str, usize> = HashMap::new();
    for &i in subset {
        let e = &g.edges[i];
        if e.is_loop() {
            return false;
        }
        *deg.entry(&e.tail).or_default() += 1;
        *deg.entry(&e.head).or_default() += 1;
    }
    if deg.values().any(|&d| d != 2 && d != 3) {
        return false;
    }
    let branch: Vec<&str> = deg.iter().filter(|(_, &d)| d == 3).map(|(v, _)| *v).collect();
    if branch.len() != 4 {
        return false;
    }
    let mut pairs: HashSet<(String, String)> = HashSet::new();
    let mut used_edges = 0;
    for &b in &branch {
        for &start in subset.iter().filter(|&&i| g.edges[i].touches(b)) {
            let mut cur = g.edges[start].other(b).to_string();
            let mut prev_edge = start;
            used_edges += 1;
            while deg[cur.as_str()] == 2 {
                let Some(&next) = subset
                    .iter()
                    .find(|&&i| i != prev_edge && g.edges[i].touches(&cur))
                else {
                    return false;
                };
                cur = g.edges[next].other(&cur).to_string();
                prev_edge = next;
                used_edges += 1;
            }
            if cur == b {
                return false;
            }
            let key = if b < cur.as_str() {
                (b.to_string(), cur.clone())
            } else {
                (cur.clone(), b.to_string())
            };
            pairs.insert(key);
        }
    }
    // Every subset edge is traversed exactly twice (once from each end).
    pairs.len() == 6 && used_edges == 2 * subset.len()
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] != i + n - k {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// First topological K₄ in the order (subset size, lexicographic edge
/// indices). Returns edge ids in file order.
pub fn find_k4(g: &MetricGraph) -> Option<Vec<String>> {
    let m = g.edges.len();
    for k in 6..=m {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            if is_topological_k4(g, &idx) {
                return Some(idx.iter().map(|&i| g.edges[i].id.clone()).collect());
            }
            if !next_combination(&mut idx, m) {
                break;
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Genus3Type {
    K4,
    H1,
    H2,
    H3,
    H4,
    Degenerate,
}

impl fmt::Display for Genus3Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Genus3Type::K4 => "K4",
            Genus3Type::H1 => "H1",
            Genus3Type::H2 => "H2",
            Genus3Type::H3 => "H3",
            Genus3Type::H4 => "H4",
            Genus3Type::Degenerate => "degenerate",
        };
        f.write_str(s)
    }
}

/// The five trivalent genus-3 multigraphs on vertices 0..4, as edge lists.
pub fn genus3_catalog() -> Vec<(Genus3Type, Vec<(usize, usize)>)> {
    vec![
        // complete graph
        (Genus3Type::K4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
        // 4-cycle with two opposite edges doubled
        (Genus3Type::H1, vec![(0, 1), (0, 1), (1, 2), (2, 3), (2, 3), (3, 0)]),
        // loop on a bridge into a triangle with one doubled side
        (Genus3Type::H2, vec![(0, 0), (0, 1), (1, 2), (1, 3), (2, 3), (2, 3)]),
        // loop, bridge, digon, bridge, loop
        (Genus3Type::H3, vec![(0, 0), (0, 1), (1, 2), (1, 2), (2, 3), (3, 3)]),
        // three loops on bridges from a common vertex
        (Genus3Type::H4, vec![(0, 0), (0, 3), (1, 1), (1, 3), (2, 2), (2, 3)]),
    ]
}

fn canonical_edges(edges: &[(usize, usize)], perm: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (perm[a], perm[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    out.sort_unstable();
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Isomorphism of small multigraphs given as edge lists on `0..n`.
pub fn multigraph_isomorphic(n: usize, a: &[(usize, usize)], b: &[(usize, usize)]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let identity: Vec<usize> = (0..n).collect();
    let target = canonical_edges(b, &identity);
    permutations(n)
        .iter()
        .any(|p| canonical_edges(a, p) == target)
}

pub fn classify_genus3(g: &MetricGraph) -> Result<Genus3Type> {
    let g = normalize_curve(g)?;
    let found = genus(&g);
    if found != 3 {
        return Err(Error::WrongGenus {
            expected: "3".into(),
            found,
        });
    }
    let trivalent = g.vertices.len() == 4
        && g.edges.len() == 6
        && g.vertices.iter().all(|v| g.degree(v) == 3);
    if !trivalent {
        return Ok(Genus3Type::Degenerate);
    }
    let index: HashMap<&str, usize> = g
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    let edges: Vec<(usize, usize)> = g
        .edges
        .iter()
        .map(|e| (index[e.tail.as_str()], index[e.head.as_str()]))
        .collect();
    Ok(genus3_catalog()
        .into_iter()
        .find(|(_, cat)| multigraph_isomorphic(4, &edges, cat))
        .map(|(t, _)| t)
        .unwrap_or(Genus3Type::Degenerate))
}

/// A point of the curve: a vertex, or a rational offset along an edge from
/// its tail.
#[derive(Clone, Debug, PartialEq)]
pub enum CurvePoint {
    Vertex(String),
    OnEdge { edge: String, offset: Rat },
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Divisor {
    pub entries: Vec<(CurvePoint, i64)>,
}

impl Divisor {
    pub fn point(p: CurvePoint) -> Self {
        Divisor {
            entries: vec![(p, 1)],
        }
    }

    pub fn vertex(v: &str) -> Self {
        Divisor::point(CurvePoint::Vertex(v.to_string()))
    }

    pub fn degree(&self) -> i64 {
        self.entries.iter().map(|(_, a)| a).sum()
    }

    pub fn is_effective(&self) -> bool {
        self.entries.iter().all(|(_, a)| *a >= 0)
    }
}
