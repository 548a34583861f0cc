//! Closed genus-0 triangulated surfaces, per-vertex fields and
//! combinatorial vertex sets.
//!
//! Open and closed subsets of the surface are modelled purely by vertex
//! membership. A sublevel set `{F < x}` of a PL field at a threshold `x`
//! that is not a vertex value deformation-retracts onto the subcomplex
//! spanned by the vertices with `F(v) < x`, so connectivity questions about
//! such sets reduce to connectivity in the edge graph.

mod icosphere;
pub mod io;

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, VecDeque};
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use icosphere::{build_icosphere, build_marked_icosphere};

/// Content hash identifying a mesh (topology, weights and markers).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeshId(pub u64);

/// Whether a vertex set stands for an open or a closed subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetKind {
    Open,
    Closed,
}

impl SetKind {
    pub fn flipped(self) -> Self {
        match self {
            SetKind::Open => SetKind::Closed,
            SetKind::Closed => SetKind::Open,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SetKind::Open => "open",
            SetKind::Closed => "closed",
        }
    }
}

/// An oriented, closed, connected triangulated surface of genus 0 with a
/// positive mass on each triangle.
///
/// All invariants are checked by [`SurfaceMesh::new`]; a value of this type
/// is always edge-manifold, consistently oriented, connected and has Euler
/// characteristic 2.
#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    vertices: Vec<[f64; 3]>,
    triangles: Vec<[usize; 3]>,
    weights: Vec<f64>,
    markers: Vec<usize>,
    id: MeshId,
    edges: Vec<[usize; 2]>,
    adj_offsets: Vec<usize>,
    adj: Vec<usize>,
    total_weight: f64,
}

impl SurfaceMesh {
    pub fn new(
        vertices: Vec<[f64; 3]>,
        triangles: Vec<[usize; 3]>,
        weights: Vec<f64>,
        markers: Vec<usize>,
    ) -> Result<Self> {
        let n = vertices.len();
        if triangles.is_empty() {
            return Err(Error::InvalidMesh("no triangles".into()));
        }
        if weights.len() != triangles.len() {
            return Err(Error::InvalidMesh(format!(
                "{} weights for {} triangles",
                weights.len(),
                triangles.len()
            )));
        }
        if let Some(i) = vertices
            .iter()
            .position(|p| p.iter().any(|c| !c.is_finite()))
        {
            return Err(Error::InvalidMesh(format!("vertex {i} is not finite")));
        }
        if let Some(t) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidMesh(format!(
                "triangle {t} has non-positive weight {}",
                weights[t]
            )));
        }
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= n) {
                return Err(Error::InvalidMesh(format!(
                    "triangle {t} references a missing vertex"
                )));
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::InvalidMesh(format!("triangle {t} is degenerate")));
            }
        }
        for (k, &m) in markers.iter().enumerate() {
            if m >= n {
                return Err(Error::InvalidMesh(format!("marker {k} out of range")));
            }
        }

        // Closed + consistently oriented: every directed edge occurs once and
        // its reverse occurs once.
        let mut directed: HashMap<(usize, usize), usize> =
            HashMap::with_capacity(3 * triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                if directed.insert((a, b), t).is_some() {
                    return Err(Error::InvalidMesh(format!(
                        "directed edge ({a},{b}) used more than once"
                    )));
                }
            }
        }
        let mut edges = Vec::with_capacity(directed.len() / 2);
        for &(a, b) in directed.keys() {
            if !directed.contains_key(&(b, a)) {
                return Err(Error::InvalidMesh(format!(
                    "edge ({a},{b}) is not shared by two consistently oriented triangles"
                )));
            }
            if a < b {
                edges.push([a, b]);
            }
        }
        // Triangle adjacency must be connected (rules out pinched surfaces).
        let mut reached = vec![false; triangles.len()];
        let mut stack = vec![0usize];
        reached[0] = true;
        while let Some(t) = stack.pop() {
            let tri = triangles[t];
            for k in 0..3 {
                let across = directed[&(tri[(k + 1) % 3], tri[k])];
                if !std::mem::replace(&mut reached[across], true) {
                    stack.push(across);
                }
            }
        }
        if reached.iter().any(|r| !r) {
            return Err(Error::InvalidMesh("triangles are not edge-connected".into()));
        }
        edges.sort_unstable();

        let mut degree = vec![0usize; n];
        for &[a, b] in &edges {
            degree[a] += 1;
            degree[b] += 1;
        }
        if let Some(v) = degree.iter().position(|&d| d == 0) {
            return Err(Error::InvalidMesh(format!("vertex {v} is isolated")));
        }
        let mut adj_offsets = Vec::with_capacity(n + 1);
        adj_offsets.push(0);
        for d in &degree {
            adj_offsets.push(adj_offsets.last().unwrap() + d);
        }
        let mut fill = adj_offsets.clone();
        let mut adj = vec![0usize; 2 * edges.len()];
        for &[a, b] in &edges {
            adj[fill[a]] = b;
            fill[a] += 1;
            adj[fill[b]] = a;
            fill[b] += 1;
        }

        let id = {
            let mut h = DefaultHasher::new();
            n.hash(&mut h);
            triangles.hash(&mut h);
            for w in &weights {
                w.to_bits().hash(&mut h);
            }
            markers.hash(&mut h);
            MeshId(h.finish())
        };
        let total_weight = crate::poisson::neumaier_sum(&weights);

        let mesh = SurfaceMesh {
            vertices,
            triangles,
            weights,
            markers,
            id,
            edges,
            adj_offsets,
            adj,
            total_weight,
        };

        let all = mesh.full_set(SetKind::Closed);
        if mesh.component_count(&all.members) != 1 {
            return Err(Error::InvalidMesh("surface is not connected".into()));
        }
        let chi = mesh.euler_characteristic();
        if chi != 2 {
            return Err(Error::InvalidMesh(format!(
                "Euler characteristic {chi}, expected 2"
            )));
        }
        Ok(mesh)
    }

    /// Same topology with new per-triangle weights.
    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Self> {
        SurfaceMesh::new(
            self.vertices.clone(),
            self.triangles.clone(),
            weights,
            self.markers.clone(),
        )
    }

    /// Same topology with a new marker list.
    pub fn with_markers(&self, markers: Vec<usize>) -> Result<Self> {
        SurfaceMesh::new(
            self.vertices.clone(),
            self.triangles.clone(),
            self.weights.clone(),
            markers,
        )
    }

    pub fn id(&self) -> MeshId {
        self.id
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn markers(&self) -> &[usize] {
        &self.markers
    }

    /// Sorted list of undirected edges `[a, b]` with `a < b`.
    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[self.adj_offsets[v]..self.adj_offsets[v + 1]]
    }

    /// `V − E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_triangles() as i64
    }

    pub fn max_edge_length(&self) -> f64 {
        self.edges
            .iter()
            .map(|&[a, b]| dist(&self.vertices[a], &self.vertices[b]))
            .fold(0.0, f64::max)
    }

    /// Lumped vertex masses: each triangle hands a third of its weight to
    /// each of its corners. `set_area(s)` is the sum of these over `s`.
    pub fn vertex_masses(&self) -> Vec<f64> {
        let mut mass = vec![0.0; self.num_vertices()];
        for (tri, w) in self.triangles.iter().zip(&self.weights) {
            for &v in tri {
                mass[v] += w / 3.0;
            }
        }
        mass
    }

    pub fn empty_set(&self, kind: SetKind) -> VertexSet {
        VertexSet {
            members: vec![false; self.num_vertices()],
            kind,
            mesh_id: self.id,
        }
    }

    pub fn full_set(&self, kind: SetKind) -> VertexSet {
        VertexSet {
            members: vec![true; self.num_vertices()],
            kind,
            mesh_id: self.id,
        }
    }

    pub fn set_from_indices(
        &self,
        indices: impl IntoIterator<Item = usize>,
        kind: SetKind,
    ) -> Result<VertexSet> {
        let mut s = self.empty_set(kind);
        for v in indices {
            if v >= self.num_vertices() {
                return Err(Error::InvalidParameter(format!("vertex {v} out of range")));
            }
            s.members[v] = true;
        }
        Ok(s)
    }

    pub fn set_from_predicate(&self, kind: SetKind, mut pred: impl FnMut(usize) -> bool) -> VertexSet {
        VertexSet {
            members: (0..self.num_vertices()).map(&mut pred).collect(),
            kind,
            mesh_id: self.id,
        }
    }

    pub(crate) fn check_set(&self, s: &VertexSet) -> Result<()> {
        if s.mesh_id != self.id || s.members.len() != self.num_vertices() {
            return Err(Error::MeshMismatch);
        }
        Ok(())
    }

    pub(crate) fn check_field(&self, f: &ScalarField) -> Result<()> {
        if f.mesh_id != self.id {
            return Err(Error::MeshMismatch);
        }
        if f.values.len() != self.num_vertices() {
            return Err(Error::FieldLength {
                expected: self.num_vertices(),
                got: f.values.len(),
            });
        }
        Ok(())
    }

    /// Maximal edge-connected subsets of `s`, ordered by smallest vertex index.
    pub fn connected_components(&self, s: &VertexSet) -> Result<Vec<VertexSet>> {
        self.check_set(s)?;
        let (labels, count) = self.component_labels(&s.members);
        let mut comps: Vec<VertexSet> = (0..count).map(|_| self.empty_set(s.kind)).collect();
        for (v, label) in labels.iter().enumerate() {
            if let Some(c) = label {
                comps[*c].members[v] = true;
            }
        }
        Ok(comps)
    }

    /// Component label per vertex (None outside the mask). Labels are
    /// assigned in order of the smallest member vertex.
    pub(crate) fn component_labels(&self, mask: &[bool]) -> (Vec<Option<usize>>, usize) {
        let n = self.num_vertices();
        let mut labels = vec![None; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if !mask[start] || labels[start].is_some() {
                continue;
            }
            labels[start] = Some(count);
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &w in self.neighbors(v) {
                    if mask[w] && labels[w].is_none() {
                        labels[w] = Some(count);
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (labels, count)
    }

    fn component_count(&self, mask: &[bool]) -> usize {
        self.component_labels(mask).1
    }

    /// All vertices not in `s`, with the kind flipped.
    pub fn complement(&self, s: &VertexSet) -> Result<VertexSet> {
        self.check_set(s)?;
        Ok(VertexSet {
            members: s.members.iter().map(|m| !m).collect(),
            kind: s.kind.flipped(),
            mesh_id: s.mesh_id,
        })
    }

    /// A set is solid when it and its complement are both connected.
    pub fn is_solid(&self, s: &VertexSet) -> Result<bool> {
        self.check_set(s)?;
        let count = s.len();
        if count == 0 || count == self.num_vertices() {
            return Err(Error::TrivialSet);
        }
        if self.component_count(&s.members) != 1 {
            return Ok(false);
        }
        let comp: Vec<bool> = s.members.iter().map(|m| !m).collect();
        Ok(self.component_count(&comp) == 1)
    }

    /// Combinatorial area: full weight of triangles inside `s`, and
    /// `(members / 3)` of the weight of triangles on its boundary.
    pub fn set_area(&self, s: &VertexSet) -> Result<f64> {
        self.check_set(s)?;
        Ok(self
            .triangles
            .iter()
            .zip(&self.weights)
            .map(|(tri, w)| {
                let inside = tri.iter().filter(|&&v| s.members[v]).count();
                match inside {
                    0 => 0.0,
                    3 => *w,
                    k => w * k as f64 / 3.0,
                }
            })
            .sum())
    }

    /// Relabel vertices: old vertex `v` becomes `perm[v]`. Triangle order
    /// and the corner order inside each triangle are preserved.
    pub fn relabel(&self, perm: &[usize]) -> Result<SurfaceMesh> {
        let n = self.num_vertices();
        if perm.len() != n {
            return Err(Error::InvalidParameter("permutation length".into()));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter("not a permutation".into()));
            }
        }
        let mut vertices = vec![[0.0; 3]; n];
        for (v, &p) in perm.iter().enumerate() {
            vertices[p] = self.vertices[v];
        }
        let triangles = self
            .triangles
            .iter()
            .map(|t| [perm[t[0]], perm[t[1]], perm[t[2]]])
            .collect();
        let markers = self.markers.iter().map(|&m| perm[m]).collect();
        SurfaceMesh::new(vertices, triangles, self.weights.clone(), markers)
    }
}

pub(crate) fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Combinatorial open or closed subset of a mesh.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    members: Vec<bool>,
    kind: SetKind,
    mesh_id: MeshId,
}

impl VertexSet {
    pub fn kind(&self) -> SetKind {
        self.kind
    }

    pub fn mesh_id(&self) -> MeshId {
        self.mesh_id
    }

    pub fn with_kind(mut self, kind: SetKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn mask(&self) -> &[bool] {
        &self.members
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.get(v).copied().unwrap_or(false)
    }

    /// Number of member vertices.
    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&m| m)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(v, &m)| m.then_some(v))
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.members
            .iter()
            .zip(&other.members)
            .all(|(&a, &b)| !a || b)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.members
            .iter()
            .zip(&other.members)
            .all(|(&a, &b)| !(a && b))
    }

    /// Union, keeping the kind of `self`.
    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(&a, &b)| a || b)
                .collect(),
            kind: self.kind,
            mesh_id: self.mesh_id,
        }
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(&a, &b)| a && b)
                .collect(),
            kind: self.kind,
            mesh_id: self.mesh_id,
        }
    }
}

/// Per-vertex values of a PL function on a specific mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    values: Vec<f64>,
    mesh_id: MeshId,
}

impl ScalarField {
    pub fn new(mesh: &SurfaceMesh, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.num_vertices() {
            return Err(Error::FieldLength {
                expected: mesh.num_vertices(),
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue(i));
        }
        Ok(ScalarField {
            values,
            mesh_id: mesh.id(),
        })
    }

    pub fn from_fn(mesh: &SurfaceMesh, f: impl Fn(&[f64; 3]) -> f64) -> Result<Self> {
        ScalarField::new(mesh, mesh.vertices().iter().map(f).collect())
    }

    pub fn constant(mesh: &SurfaceMesh, c: f64) -> Result<Self> {
        ScalarField::new(mesh, vec![c; mesh.num_vertices()])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mesh_id(&self) -> MeshId {
        self.mesh_id
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Vertexwise sum.
    pub fn try_add(&self, other: &ScalarField) -> Result<ScalarField> {
        if self.mesh_id != other.mesh_id || self.values.len() != other.values.len() {
            return Err(Error::MeshMismatch);
        }
        Ok(ScalarField {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
            mesh_id: self.mesh_id,
        })
    }

    /// `a·F + c`.
    pub fn affine(&self, a: f64, c: f64) -> ScalarField {
        ScalarField {
            values: self.values.iter().map(|v| a * v + c).collect(),
            mesh_id: self.mesh_id,
        }
    }

    /// Transport the field along a vertex relabeling (see [`SurfaceMesh::relabel`]).
    pub fn relabel(&self, target: &SurfaceMesh, perm: &[usize]) -> Result<ScalarField> {
        let mut values = vec![0.0; self.values.len()];
        for (v, &p) in perm.iter().enumerate() {
            values[p] = self.values[v];
        }
        ScalarField::new(target, values)
    }

    /// Open sublevel set `{F < x}`.
    pub fn below(&self, x: f64) -> VertexSet {
        self.level_set(SetKind::Open, |v| v < x)
    }

    /// Closed sublevel set `{F ≤ x}`.
    pub fn at_most(&self, x: f64) -> VertexSet {
        self.level_set(SetKind::Closed, |v| v <= x)
    }

    /// Open superlevel set `{F > x}`.
    pub fn above(&self, x: f64) -> VertexSet {
        self.level_set(SetKind::Open, |v| v > x)
    }

    /// Closed superlevel set `{F ≥ x}`.
    pub fn at_least(&self, x: f64) -> VertexSet {
        self.level_set(SetKind::Closed, |v| v >= x)
    }

    fn level_set(&self, kind: SetKind, pred: impl Fn(f64) -> bool) -> VertexSet {
        VertexSet {
            members: self.values.iter().map(|&v| pred(v)).collect(),
            kind,
            mesh_id: self.mesh_id,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn octahedron() -> SurfaceMesh {
        let vertices = vec![
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ];
        let triangles = vec![
            [0, 2, 4],
            [2, 1, 4],
            [1, 3, 4],
            [3, 0, 4],
            [2, 0, 5],
            [1, 2, 5],
            [3, 1, 5],
            [0, 3, 5],
        ];
        SurfaceMesh::new(vertices, triangles, vec![0.125; 8], vec![]).unwrap()
    }

    #[test]
    fn octahedron_is_valid() {
        let m = octahedron();
        assert_eq!(m.euler_characteristic(), 2);
        assert_eq!(m.num_edges(), 12);
        assert!((m.total_weight() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_open_surface() {
        let m = octahedron();
        let mut tris = m.triangles().to_vec();
        tris.pop();
        let err = SurfaceMesh::new(m.vertices().to_vec(), tris, vec![0.125; 7], vec![]);
        assert!(matches!(err, Err(Error::InvalidMesh(_))));
    }

    #[test]
    fn rejects_inconsistent_orientation() {
        let m = octahedron();
        let mut tris = m.triangles().to_vec();
        tris[0] = [0, 4, 2];
        let err = SurfaceMesh::new(m.vertices().to_vec(), tris, vec![0.125; 8], vec![]);
        assert!(matches!(err, Err(Error::InvalidMesh(_))));
    }

    #[test]
    fn rejects_bad_weights() {
        let m = octahedron();
        let mut w = vec![0.125; 8];
        w[3] = 0.0;
        assert!(m.with_weights(w).is_err());
        assert!(m.with_weights(vec![0.1; 7]).is_err());
    }

    #[test]
    fn rejects_two_spheres() {
        let m = octahedron();
        let mut vertices = m.vertices().to_vec();
        vertices.extend_from_slice(m.vertices());
        let mut tris = m.triangles().to_vec();
        tris.extend(m.triangles().iter().map(|t| [t[0] + 6, t[1] + 6, t[2] + 6]));
        let err = SurfaceMesh::new(vertices, tris, vec![1.0; 16], vec![]);
        assert!(matches!(err, Err(Error::InvalidMesh(_))));
    }

    #[test]
    fn complement_flips_kind_and_is_involutive() {
        let m = octahedron();
        let s = m.set_from_indices([0, 2], SetKind::Open).unwrap();
        let c = m.complement(&s).unwrap();
        assert_eq!(c.kind(), SetKind::Closed);
        assert_eq!(s.len() + c.len(), m.num_vertices());
        assert_eq!(m.complement(&c).unwrap(), s);

        let full = m.complement(&m.empty_set(SetKind::Open)).unwrap();
        assert_eq!(full.len(), 6);
        assert_eq!(full.kind(), SetKind::Closed);
    }

    #[test]
    fn components_and_solidity() {
        let m = octahedron();
        // Antipodal poles are not adjacent.
        let s = m.set_from_indices([4, 5], SetKind::Closed).unwrap();
        let comps = m.connected_components(&s).unwrap();
        assert_eq!(comps.len(), 2);
        assert!(comps[0].contains(4) && comps[1].contains(5));
        assert!(!m.is_solid(&s).unwrap());

        let cap = m.set_from_indices([4], SetKind::Closed).unwrap();
        assert!(m.is_solid(&cap).unwrap());

        // Equator: connected, complement = two poles.
        let band = m.set_from_indices([0, 1, 2, 3], SetKind::Closed).unwrap();
        assert_eq!(m.connected_components(&band).unwrap().len(), 1);
        assert!(!m.is_solid(&band).unwrap());

        assert!(m.connected_components(&m.empty_set(SetKind::Open)).unwrap().is_empty());
        assert!(matches!(
            m.is_solid(&m.full_set(SetKind::Closed)),
            Err(Error::TrivialSet)
        ));
        assert!(matches!(
            m.is_solid(&m.empty_set(SetKind::Closed)),
            Err(Error::TrivialSet)
        ));
    }

    #[test]
    fn set_area_matches_lumped_masses() {
        let m = octahedron();
        let s = m.set_from_indices([0, 4], SetKind::Closed).unwrap();
        let lumped: f64 = s.indices().map(|v| m.vertex_masses()[v]).sum();
        assert!((m.set_area(&s).unwrap() - lumped).abs() < 1e-15);
        assert_eq!(m.set_area(&m.empty_set(SetKind::Open)).unwrap(), 0.0);
        assert!((m.set_area(&m.full_set(SetKind::Open)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn foreign_sets_are_rejected() {
        let a = octahedron();
        let b = a.with_weights(vec![0.25; 8]).unwrap();
        assert_ne!(a.id(), b.id());
        let s = b.full_set(SetKind::Open);
        assert!(matches!(a.set_area(&s), Err(Error::MeshMismatch)));
        assert!(matches!(a.complement(&s), Err(Error::MeshMismatch)));
    }

    #[test]
    fn fields_validate_length_and_finiteness() {
        let m = octahedron();
        assert!(matches!(
            ScalarField::new(&m, vec![0.0; 5]),
            Err(Error::FieldLength { expected: 6, got: 5 })
        ));
        let mut v = vec![0.0; 6];
        v[2] = f64::NAN;
        assert!(matches!(ScalarField::new(&m, v), Err(Error::NonFiniteValue(2))));
    }

    #[test]
    fn relabel_preserves_structure() {
        let m = octahedron();
        let perm = vec![5, 4, 3, 2, 1, 0];
        let r = m.relabel(&perm).unwrap();
        assert_eq!(r.euler_characteristic(), 2);
        assert_eq!(r.vertices()[5], m.vertices()[0]);
        assert!(m.relabel(&[0, 0, 1, 2, 3, 4]).is_err());
    }
}
